use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::graphs::SymDigraph;

/// Vertex and arc maps from `total` onto `base`, with the sheet count.
///
/// Constructed through [`CoveringMap::new`], which checks that the maps form a
/// covering with equal fibres. Symmetry of the covering is not required here;
/// ask [`classify_morphism`] for that.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringMap {
    total: SymDigraph,
    base: SymDigraph,
    vmap: Vec<usize>,
    amap: Vec<usize>,
    q: usize,
}

impl CoveringMap {
    pub fn new(total: SymDigraph, base: SymDigraph, vmap: Vec<usize>, amap: Vec<usize>) -> Result<Self> {
        let report = classify_morphism(&total, &base, &vmap, &amap)?;
        if !report.is_covering {
            return Err(Error::NotCovering(report.first_failure()));
        }
        let q = report
            .sheets
            .ok_or_else(|| Error::NotCovering("vertex fibres have unequal sizes".into()))?;
        Ok(CoveringMap { total, base, vmap, amap, q })
    }

    pub(crate) fn new_unchecked(total: SymDigraph, base: SymDigraph, vmap: Vec<usize>, amap: Vec<usize>) -> Self {
        let q = if base.n() == 0 { 0 } else { total.n() / base.n() };
        CoveringMap { total, base, vmap, amap, q }
    }

    pub fn identity(d: &SymDigraph) -> Self {
        CoveringMap::new_unchecked(d.clone(), d.clone(), (0..d.n()).collect(), (0..d.arc_count()).collect())
    }

    pub fn total(&self) -> &SymDigraph {
        &self.total
    }

    pub fn base(&self) -> &SymDigraph {
        &self.base
    }

    pub fn vmap(&self) -> &[usize] {
        &self.vmap
    }

    pub fn amap(&self) -> &[usize] {
        &self.amap
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn report(&self) -> MorphismReport {
        classify_morphism(&self.total, &self.base, &self.vmap, &self.amap).expect("maps are total by construction")
    }

    /// Vertex fibres, indexed by base vertex.
    pub fn fibres(&self) -> Vec<Vec<usize>> {
        let mut f = vec![Vec::new(); self.base.n()];
        for (v, &b) in self.vmap.iter().enumerate() {
            f[b].push(v);
        }
        f
    }

    /// `other ∘ self`, where `other` maps this map's base somewhere further down.
    pub fn compose(&self, other: &CoveringMap) -> Result<CoveringMap> {
        if other.total.arcs() != self.base.arcs() || other.total.sym_map() != self.base.sym_map() {
            return Err(Error::InvalidMorphism("composition: base of the first map is not the total of the second".into()));
        }
        let vmap = self.vmap.iter().map(|&v| other.vmap[v]).collect();
        let amap = self.amap.iter().map(|&a| other.amap[a]).collect();
        CoveringMap::new(self.total.clone(), other.base.clone(), vmap, amap)
    }

    /// Replaces the base by an outport-carrying copy of itself.
    pub fn with_base(mut self, base: SymDigraph) -> Result<Self> {
        if base.arcs() != self.base.arcs() || base.sym_map() != self.base.sym_map() {
            return Err(Error::InvalidMorphism("replacement base has a different arc structure".into()));
        }
        self.base = base;
        Ok(self)
    }

    pub fn with_total(mut self, total: SymDigraph) -> Result<Self> {
        if total.arcs() != self.total.arcs() || total.sym_map() != self.total.sym_map() {
            return Err(Error::InvalidMorphism("replacement total has a different arc structure".into()));
        }
        self.total = total;
        Ok(self)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "vmap": self.vmap, "amap": self.amap, "q": self.q })
    }

    pub fn from_json(value: &serde_json::Value, total: SymDigraph, base: SymDigraph) -> Result<Self> {
        #[derive(serde::Deserialize)]
        struct MapFile {
            vmap: Vec<usize>,
            amap: Vec<usize>,
            q: Option<usize>,
        }
        let f: MapFile = serde_json::from_value(value.clone())?;
        let c = CoveringMap::new(total, base, f.vmap, f.amap)?;
        if let Some(q) = f.q {
            if q != c.q {
                return Err(Error::NotCovering(format!("declared q = {q} but fibres have size {}", c.q)));
            }
        }
        Ok(c)
    }
}

/// Per-property verdicts of a morphism, each with a failure witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismReport {
    pub is_homomorphism: bool,
    pub is_fibration: bool,
    pub is_opfibration: bool,
    pub is_covering: bool,
    pub is_symmetric_covering: bool,
    pub is_port_preserving: bool,
    /// False when either side lacks outports, in which case port preservation holds vacuously.
    pub ports_compared: bool,
    /// Common fibre size, if all vertex fibres have equal size.
    pub sheets: Option<usize>,
    pub failures: Vec<Failure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub property: &'static str,
    pub witness: String,
}

impl MorphismReport {
    pub fn first_failure(&self) -> String {
        match self.failures.first() {
            Some(f) => format!("{}: {}", f.property, f.witness),
            None => "no failure".into(),
        }
    }

    pub fn failure(&self, property: &str) -> Option<&str> {
        self.failures.iter().find(|f| f.property == property).map(|f| f.witness.as_str())
    }
}

fn bijects(total_arcs: &[usize], amap: &[usize], base_arcs: &[usize]) -> bool {
    if total_arcs.len() != base_arcs.len() {
        return false;
    }
    let mut img: Vec<usize> = total_arcs.iter().map(|&a| amap[a]).collect();
    img.sort_unstable();
    let mut want = base_arcs.to_vec();
    want.sort_unstable();
    img == want
}

/// Classifies `(vmap, amap)` as a morphism `total -> base`.
///
/// Each flag is evaluated on its own definition; the covering flags are then
/// conjoined so that `is_symmetric_covering ⇒ is_covering ⇒ fibration ∧ opfibration`.
pub fn classify_morphism(total: &SymDigraph, base: &SymDigraph, vmap: &[usize], amap: &[usize]) -> Result<MorphismReport> {
    if vmap.len() != total.n() {
        return Err(Error::InvalidMorphism(format!("vmap has {} entries for {} vertices", vmap.len(), total.n())));
    }
    if amap.len() != total.arc_count() {
        return Err(Error::InvalidMorphism(format!("amap has {} entries for {} arcs", amap.len(), total.arc_count())));
    }
    if let Some(v) = vmap.iter().position(|&b| b >= base.n()) {
        return Err(Error::InvalidMorphism(format!("vmap({v}) = {} is not a base vertex", vmap[v])));
    }
    if let Some(a) = amap.iter().position(|&b| b >= base.arc_count()) {
        return Err(Error::InvalidMorphism(format!("amap({a}) = {} is not a base arc", amap[a])));
    }
    let mut failures = Vec::new();

    let hom_bad = total.arcs().iter().enumerate().find(|&(a, arc)| {
        let img = base.arc(amap[a]);
        vmap[arc.s] != img.s || vmap[arc.t] != img.t
    });
    if let Some((a, _)) = hom_bad {
        failures.push(Failure { property: "homomorphism", witness: format!("arc {a} is not mapped compatibly with its endpoints") });
    }

    let fib_bad = (0..total.n()).find(|&v| !bijects(total.in_arcs(v), amap, base.in_arcs(vmap[v])));
    if let Some(v) = fib_bad {
        failures.push(Failure { property: "fibration", witness: format!("incoming arcs of vertex {v} do not biject onto those of {}", vmap[v]) });
    }
    let opfib_bad = (0..total.n()).find(|&v| !bijects(total.out_arcs(v), amap, base.out_arcs(vmap[v])));
    if let Some(v) = opfib_bad {
        failures.push(Failure { property: "opfibration", witness: format!("outgoing arcs of vertex {v} do not biject onto those of {}", vmap[v]) });
    }

    let mut fibre = vec![0usize; base.n()];
    for &b in vmap {
        fibre[b] += 1;
    }
    let surjective = fibre.iter().all(|&c| c > 0);
    if !surjective {
        let b = fibre.iter().position(|&c| c == 0).unwrap_or(0);
        failures.push(Failure { property: "surjectivity", witness: format!("base vertex {b} has an empty fibre") });
    }
    let sheets = if fibre.iter().all(|&c| c == fibre[0]) && !fibre.is_empty() { Some(fibre[0]) } else { None };

    let sym_bad = (0..total.arc_count()).find(|&a| amap[total.sym(a)] != base.sym(amap[a]));
    if let Some(a) = sym_bad {
        failures.push(Failure { property: "symmetry", witness: format!("amap(sym({a})) != sym(amap({a}))") });
    }

    let ports_compared = total.outports().is_some() && base.outports().is_some();
    let port_bad = if ports_compared {
        (0..total.arc_count()).find(|&a| total.outport(a) != base.outport(amap[a]))
    } else {
        None
    };
    if let Some(a) = port_bad {
        failures.push(Failure { property: "ports", witness: format!("outport of arc {a} differs from that of its image {}", amap[a]) });
    }

    let is_homomorphism = hom_bad.is_none();
    let is_fibration = fib_bad.is_none();
    let is_opfibration = opfib_bad.is_none();
    let is_covering = is_homomorphism && is_fibration && is_opfibration && surjective;
    Ok(MorphismReport {
        is_homomorphism,
        is_fibration,
        is_opfibration,
        is_covering,
        is_symmetric_covering: is_covering && sym_bad.is_none(),
        is_port_preserving: port_bad.is_none(),
        ports_compared,
        sheets,
        failures,
    })
}

/// Number of sheets of a covering, after re-verifying that it is one.
pub fn sheets_of(c: &CoveringMap) -> Result<usize> {
    let report = c.report();
    if !report.is_covering {
        return Err(Error::NotCovering(report.first_failure()));
    }
    let fibres = c.fibres();
    let q = fibres[0].len();
    if let Some(b) = fibres.iter().position(|f| f.len() != q) {
        return Err(Error::NotCovering(format!("fibre of base vertex {b} has {} vertices, fibre of 0 has {q}", fibres[b].len())));
    }
    if q * c.base().n() != c.total().n() {
        return Err(Error::NotCovering("q * |V(base)| != |V(total)|".into()));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{builtin, dir, Arc, UGraph};

    fn k2_cover() -> (SymDigraph, SymDigraph) {
        let k2 = dir(&UGraph::new(2, [(0, 1)]).unwrap(), None);
        let loop1 = SymDigraph::new(1, vec![Arc { s: 0, t: 0 }], vec![0], None).unwrap();
        (k2, loop1)
    }

    #[test]
    fn k2_onto_self_symmetric_loop() {
        let (k2, base) = k2_cover();
        let r = classify_morphism(&k2, &base, &[0, 0], &[0, 0]).unwrap();
        assert!(r.is_symmetric_covering && r.is_port_preserving);
        assert_eq!(r.sheets, Some(2));
    }

    #[test]
    fn identity_is_everything() {
        let d = builtin("h-g2").unwrap().to_digraph();
        let c = CoveringMap::identity(&d);
        let r = c.report();
        assert!(r.is_symmetric_covering);
        assert_eq!(sheets_of(&c).unwrap(), 1);
    }

    #[test]
    fn short_maps_rejected() {
        let (k2, base) = k2_cover();
        assert!(classify_morphism(&k2, &base, &[0], &[0, 0]).is_err());
        assert!(classify_morphism(&k2, &base, &[0, 0], &[0, 1]).is_err());
    }

    #[test]
    fn sym_violation_is_reported() {
        // K2 onto one vertex with a loop pair: a covering, but both arcs of
        // the edge pair go to the same loop.
        let k2 = dir(&UGraph::new(2, [(0, 1)]).unwrap(), None);
        let pair = SymDigraph::from_multigraph(1, &[], &[], &[0]).unwrap();
        let r = classify_morphism(&k2, &pair, &[0, 0], &[0, 0]).unwrap();
        assert!(!r.is_fibration || !r.is_symmetric_covering);
        let r = classify_morphism(&k2, &pair, &[0, 0], &[0, 1]).unwrap();
        assert!(!r.is_covering);
        assert!(r.failure("fibration").is_some() || r.failure("opfibration").is_some());
    }
}
