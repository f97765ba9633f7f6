use serde::Serialize;

use super::run::Driver;
use super::{Event, Network, Protocol, RunResult, RunStatus, SimConfig, Simulation};
use crate::coverings::{classify_morphism, CoveringMap};
use crate::error::{Error, Result};

/// First step at which a total process diverged from its base image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FibreViolation {
    pub step: u64,
    pub base_vertex: usize,
    pub total_vertex: usize,
}

#[derive(Clone, Debug)]
pub struct LiftedRun<S> {
    pub base: RunResult<S>,
    pub total: RunResult<S>,
    pub violation: Option<FibreViolation>,
}

/// Drives a run on `base` and mirrors each event to every preimage in `total`.
///
/// `cover` must be a port-preserving symmetric covering between the two
/// networks. After every base step each total process is compared with the
/// base process it maps to; the run stops at the first mismatch.
pub fn lockstep_lifted_run<P: Protocol>(
    total: &Network,
    base: &Network,
    cover: &CoveringMap,
    proto: &P,
    base_inputs: &[P::Input],
    cfg: &SimConfig,
) -> Result<LiftedRun<P::State>> {
    let report = classify_morphism(total.digraph(), base.digraph(), cover.vmap(), cover.amap())?;
    if !report.is_symmetric_covering || !report.ports_compared || !report.is_port_preserving {
        return Err(Error::NotCovering(format!("lifted runs need a port-preserving symmetric covering: {}", report.first_failure())));
    }
    let vmap = cover.vmap();
    let mut vfibre = vec![Vec::new(); base.n()];
    for (v, &b) in vmap.iter().enumerate() {
        vfibre[b].push(v);
    }
    let mut afibre = vec![Vec::new(); base.digraph().arc_count()];
    for (a, &b) in cover.amap().iter().enumerate() {
        afibre[b].push(a);
    }
    let total_inputs: Vec<P::Input> = vmap.iter().map(|&b| base_inputs[b].clone()).collect();

    let mut bsim = Simulation::new(base, proto, base_inputs)?;
    let mut tsim = Simulation::new(total, proto, &total_inputs)?;
    let mut driver = Driver::new(cfg);
    let mut violation = None;
    let mut status = RunStatus::Quiescent;
    'run: loop {
        let batch = driver.next_batch(&bsim);
        if batch.is_empty() {
            break;
        }
        for ev in batch {
            if bsim.steps() >= cfg.step_cap {
                status = RunStatus::StepCap;
                break 'run;
            }
            bsim.execute(ev)?;
            match ev {
                Event::Wakeup(b) => {
                    for &v in &vfibre[b] {
                        tsim.execute(Event::Wakeup(v))?;
                    }
                }
                Event::Deliver(b) => {
                    for &a in &afibre[b] {
                        tsim.execute(Event::Deliver(a))?;
                    }
                }
            }
            let bs = bsim.states();
            if let Some(v) = (0..total.n()).find(|&v| tsim.states()[v] != bs[vmap[v]]) {
                violation = Some(FibreViolation { step: bsim.steps() - 1, base_vertex: vmap[v], total_vertex: v });
                break 'run;
            }
        }
    }
    if violation.is_some() {
        status = RunStatus::Prefix;
    }
    Ok(LiftedRun { base: bsim.finish(status), total: tsim.finish(status), violation })
}
