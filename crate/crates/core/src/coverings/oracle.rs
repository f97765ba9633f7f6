//! Exhaustive arc-by-arc search for symmetric coverings over a fixed vertex
//! partition. Deliberately independent of the matching-based construction so
//! the two can be cross-checked.

use std::collections::BTreeSet;

use crate::budget::{Budget, Exhausted};
use crate::coverings::{CoveringMap, FibrePartition};
use crate::error::{Error, Result};
use crate::graphs::{Arc, SymDigraph};
use crate::lifts::canonical_form;

/// Size guard for the oracle.
pub const ORACLE_MAX_N: usize = 16;

#[derive(Clone, Copy)]
struct BaseArc {
    s: usize,
    t: usize,
    sym: usize,
}

struct Oracle<'a> {
    d: &'a SymDigraph,
    label: &'a [usize],
    cap: Vec<usize>,
    reps: Vec<usize>,
    base: Vec<BaseArc>,
    out_count: Vec<usize>,
    used_out: Vec<Vec<usize>>,
    used_in: Vec<Vec<usize>>,
    amap: Vec<usize>,
}

impl<'a> Oracle<'a> {
    fn new(d: &'a SymDigraph, p: &'a FibrePartition) -> Option<Self> {
        let k = p.block_count();
        let mut cap = vec![usize::MAX; k];
        for v in 0..d.n() {
            let b = p.label(v);
            if cap[b] == usize::MAX {
                cap[b] = d.degree(v);
            } else if cap[b] != d.degree(v) {
                return None;
            }
        }
        // orbits in breadth-first order of their least endpoint
        let mut pos = vec![usize::MAX; d.n()];
        let mut order = Vec::new();
        let mut queue = std::collections::VecDeque::from([0]);
        pos[0] = 0;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &a in d.out_arcs(u) {
                let w = d.arc(a).t;
                if pos[w] == usize::MAX {
                    pos[w] = order.len() + queue.len();
                    queue.push_back(w);
                }
            }
        }
        let mut reps: Vec<usize> = (0..d.arc_count()).filter(|&a| d.sym(a) >= a).collect();
        reps.sort_by_key(|&a| {
            let Arc { s, t } = d.arc(a);
            (pos[s].min(pos[t]), pos[s].max(pos[t]), a)
        });
        Some(Oracle {
            d,
            label: p.labels(),
            cap,
            reps,
            base: Vec::new(),
            out_count: vec![0; k],
            used_out: vec![Vec::new(); d.n()],
            used_in: vec![Vec::new(); d.n()],
            amap: vec![usize::MAX; d.arc_count()],
        })
    }

    fn free(&self, a: usize, beta: usize) -> bool {
        let Arc { s, t } = self.d.arc(a);
        !self.used_out[s].contains(&beta) && !self.used_in[t].contains(&beta)
    }

    fn mark(&mut self, a: usize, beta: usize) {
        let Arc { s, t } = self.d.arc(a);
        self.used_out[s].push(beta);
        self.used_in[t].push(beta);
        self.amap[a] = beta;
    }

    fn unmark(&mut self, a: usize) {
        let Arc { s, t } = self.d.arc(a);
        self.used_out[s].pop();
        self.used_in[t].pop();
        self.amap[a] = usize::MAX;
    }

    /// Maps orbit `{a, sym a}` onto `{beta, sym beta}`; returns how many arcs were marked.
    fn try_map(&mut self, a: usize, beta: usize) -> Option<usize> {
        let sa = self.d.sym(a);
        if !self.free(a, beta) {
            return None;
        }
        self.mark(a, beta);
        if sa == a {
            return Some(1);
        }
        let sb = self.base[beta].sym;
        if !self.free(sa, sb) {
            self.unmark(a);
            return None;
        }
        self.mark(sa, sb);
        Some(2)
    }

    fn undo_map(&mut self, a: usize, marked: usize) {
        if marked == 2 {
            self.unmark(self.d.sym(a));
        }
        self.unmark(a);
    }

    fn push_base(&mut self, s: usize, t: usize, self_sym: bool) -> usize {
        let id = self.base.len();
        if self_sym {
            self.base.push(BaseArc { s, t, sym: id });
            self.out_count[s] += 1;
        } else {
            self.base.push(BaseArc { s, t, sym: id + 1 });
            self.base.push(BaseArc { s: t, t: s, sym: id });
            self.out_count[s] += 1;
            self.out_count[t] += 1;
        }
        id
    }

    fn pop_base(&mut self, self_sym: bool) {
        let n = if self_sym { 1 } else { 2 };
        for _ in 0..n {
            let b = self.base.pop().expect("pushed");
            self.out_count[b.s] -= 1;
        }
    }

    fn search(&mut self, i: usize, budget: &mut Budget, sink: &mut dyn FnMut(&Self) -> bool) -> Result<bool, Exhausted> {
        budget.tick()?;
        if i == self.reps.len() {
            if self.out_count.iter().zip(&self.cap).all(|(c, k)| c == k) {
                return Ok(sink(self));
            }
            return Ok(false);
        }
        let a = self.reps[i];
        let sa = self.d.sym(a);
        let Arc { s, t } = self.d.arc(a);
        let (bs, bt) = (self.label[s], self.label[t]);
        for beta in 0..self.base.len() {
            let b = self.base[beta];
            if b.s != bs || b.t != bt {
                continue;
            }
            let beta_self = b.sym == beta;
            if sa == a && !beta_self {
                continue;
            }
            if let Some(m) = self.try_map(a, beta) {
                if self.search(i + 1, budget, sink)? {
                    return Ok(true);
                }
                self.undo_map(a, m);
            }
        }
        // a fresh self-symmetric loop
        if bs == bt && self.out_count[bs] < self.cap[bs] {
            let beta = self.push_base(bs, bs, true);
            if let Some(m) = self.try_map(a, beta) {
                if self.search(i + 1, budget, sink)? {
                    return Ok(true);
                }
                self.undo_map(a, m);
            }
            self.pop_base(true);
        }
        // a fresh sym-paired couple of arcs
        let room = if bs == bt { self.out_count[bs] + 2 <= self.cap[bs] } else { self.out_count[bs] < self.cap[bs] && self.out_count[bt] < self.cap[bt] };
        if sa != a && room {
            let beta = self.push_base(bs, bt, false);
            if let Some(m) = self.try_map(a, beta) {
                if self.search(i + 1, budget, sink)? {
                    return Ok(true);
                }
                self.undo_map(a, m);
            }
            self.pop_base(false);
        }
        Ok(false)
    }

    fn covering(&self, k: usize) -> Result<CoveringMap> {
        let arcs = self.base.iter().map(|b| Arc { s: b.s, t: b.t }).collect();
        let sym = self.base.iter().map(|b| b.sym).collect();
        let base = SymDigraph::new(k, arcs, sym, None)?;
        CoveringMap::new(self.d.clone(), base, self.label.to_vec(), self.amap.clone())
    }
}

fn guard(d: &SymDigraph, p: &FibrePartition) -> Result<()> {
    if d.n() > ORACLE_MAX_N {
        return Err(Error::TooLarge(format!("oracle limited to {ORACLE_MAX_N} vertices, got {}", d.n())));
    }
    if p.n() != d.n() {
        return Err(Error::InvalidPartition("partition and graph sizes differ".into()));
    }
    Ok(())
}

/// Some symmetric covering of `d` whose vertex fibres are the blocks of `p`.
pub fn brute_force_base_oracle(d: &SymDigraph, p: &FibrePartition) -> Result<Option<CoveringMap>> {
    guard(d, p)?;
    let Some(mut o) = Oracle::new(d, p) else { return Ok(None) };
    let mut found = None;
    let mut budget = Budget::unlimited();
    o.search(0, &mut budget, &mut |o: &Oracle| {
        found = Some(o.covering(p.block_count()));
        true
    })?;
    found.transpose()
}

/// All bases, up to isomorphism, of symmetric coverings of `d` with fibres `p`.
pub fn all_bases_oracle(d: &SymDigraph, p: &FibrePartition, budget: &mut Budget) -> Result<Vec<CoveringMap>> {
    guard(d, p)?;
    let Some(mut o) = Oracle::new(d, p) else { return Ok(Vec::new()) };
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut err = None;
    o.search(0, budget, &mut |o: &Oracle| {
        match o.covering(p.block_count()) {
            Ok(c) => {
                if seen.insert(canonical_form(c.base()).certificate().to_vec()) {
                    out.push(c);
                }
            }
            Err(e) => err = Some(e),
        }
        false
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{builtin, dir, UGraph};

    #[test]
    fn k2_loop() {
        let k2 = dir(&UGraph::new(2, [(0, 1)]).unwrap(), None);
        let c = brute_force_base_oracle(&k2, &FibrePartition::single_block(2)).unwrap().unwrap();
        assert_eq!(c.base().arc_count(), 1);
        assert!(c.report().is_symmetric_covering);
    }

    #[test]
    fn fig4_none() {
        let d = builtin("fig4-nonsym").unwrap().to_digraph();
        assert!(brute_force_base_oracle(&d, &FibrePartition::single_block(16)).unwrap().is_none());
    }

    #[test]
    fn guard_applies() {
        let g = UGraph::new(17, (0..16).map(|i| (i, i + 1))).unwrap();
        assert!(brute_force_base_oracle(&dir(&g, None), &FibrePartition::discrete(17)).is_err());
    }
}
