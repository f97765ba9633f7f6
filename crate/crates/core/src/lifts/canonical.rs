use crate::coverings::partition_refine;
use crate::graphs::SymDigraph;

/// Size guard for canonical forms.
pub const ISO_MAX_N: usize = 64;

/// Canonical labelling of a symmetric digraph.
///
/// Two digraphs are isomorphic (as multigraphs with their sym-structure on
/// loops) exactly when their certificates are equal. The certificate lists
/// `n`, then per vertex in canonical order the number of self-symmetric loops
/// and of loop pairs, then the upper triangle of the arc multiplicity matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    cert: Vec<u64>,
    /// `position[v]` is the canonical index of vertex `v`.
    position: Vec<usize>,
}

impl CanonicalForm {
    pub fn certificate(&self) -> &[u64] {
        &self.cert
    }

    pub fn position(&self) -> &[usize] {
        &self.position
    }
}

struct Local {
    self_loops: Vec<u64>,
    loop_pairs: Vec<u64>,
    mult: Vec<Vec<u64>>,
}

fn local(d: &SymDigraph) -> Local {
    let n = d.n();
    let mut self_loops = vec![0; n];
    let mut loop_pairs = vec![0; n];
    let mut mult = vec![vec![0; n]; n];
    for a in 0..d.arc_count() {
        let arc = d.arc(a);
        if arc.s == arc.t {
            if d.sym(a) == a {
                self_loops[arc.s] += 1;
            } else if d.sym(a) > a {
                loop_pairs[arc.s] += 1;
            }
        } else {
            mult[arc.s][arc.t] += 1;
        }
    }
    Local { self_loops, loop_pairs, mult }
}

fn certificate(l: &Local, position: &[usize]) -> Vec<u64> {
    let n = position.len();
    let mut at = vec![0; n];
    for (v, &p) in position.iter().enumerate() {
        at[p] = v;
    }
    let mut c = Vec::with_capacity(1 + 2 * n + n * n / 2);
    c.push(n as u64);
    for &v in &at {
        c.push(l.self_loops[v]);
        c.push(l.loop_pairs[v]);
    }
    for i in 0..n {
        for j in i + 1..n {
            c.push(l.mult[at[i]][at[j]]);
        }
    }
    c
}

/// Canonical form by colour refinement and individualization, keeping the
/// lexicographically least certificate over all leaves.
pub fn canonical_form(d: &SymDigraph) -> CanonicalForm {
    assert!(d.n() <= ISO_MAX_N, "canonical form limited to {ISO_MAX_N} vertices");
    let l = local(d);
    let init: Vec<usize> = {
        let keys: Vec<(u64, u64, usize)> = (0..d.n()).map(|v| (l.self_loops[v], l.loop_pairs[v], d.degree(v))).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        sorted.dedup();
        keys.iter().map(|k| sorted.binary_search(k).expect("present")).collect()
    };
    let colors = partition_refine(d, init);
    let mut best: Option<CanonicalForm> = None;
    search(d, &l, colors, &mut best);
    best.expect("at least one leaf")
}

fn search(d: &SymDigraph, l: &Local, colors: Vec<usize>, best: &mut Option<CanonicalForm>) {
    let n = d.n();
    let mut size = vec![0usize; n];
    for &c in &colors {
        size[c] += 1;
    }
    let target = (0..n).filter(|&c| size[c] > 1).min_by_key(|&c| (size[c], c));
    let Some(cell) = target else {
        let cert = certificate(l, &colors);
        if best.as_ref().is_none_or(|b| cert < b.cert) {
            *best = Some(CanonicalForm { cert, position: colors });
        }
        return;
    };
    for v in (0..n).filter(|&v| colors[v] == cell) {
        let split: Vec<usize> = (0..n).map(|w| 2 * colors[w] + usize::from(w != v)).collect();
        search(d, l, partition_refine(d, split), best);
    }
}

/// Vertex and arc bijections witnessing an isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub vmap: Vec<usize>,
    pub amap: Vec<usize>,
}

/// Decides isomorphism, returning maps that preserve `s`, `t` and `sym`.
pub fn is_isomorphic(d1: &SymDigraph, d2: &SymDigraph) -> Option<Isomorphism> {
    if d1.n() != d2.n() || d1.arc_count() != d2.arc_count() {
        return None;
    }
    let c1 = canonical_form(d1);
    let c2 = canonical_form(d2);
    if c1.cert != c2.cert {
        return None;
    }
    let n = d1.n();
    let mut at2 = vec![0; n];
    for (v, &p) in c2.position.iter().enumerate() {
        at2[p] = v;
    }
    let vmap: Vec<usize> = (0..n).map(|v| at2[c1.position[v]]).collect();
    let mut amap = vec![usize::MAX; d1.arc_count()];
    // arcs of d2 pooled by (source, target, self-symmetric)
    let mut pools: std::collections::BTreeMap<(usize, usize, bool), Vec<usize>> = Default::default();
    for a in 0..d2.arc_count() {
        let arc = d2.arc(a);
        let ss = d2.sym(a) == a;
        pools.entry((arc.s, arc.t, ss)).or_default().push(a);
    }
    for pool in pools.values_mut() {
        pool.reverse();
    }
    for a in 0..d1.arc_count() {
        if amap[a] != usize::MAX {
            continue;
        }
        let arc = d1.arc(a);
        let ss = d1.sym(a) == a;
        let key = (vmap[arc.s], vmap[arc.t], ss);
        let b = pools.get_mut(&key)?.pop()?;
        amap[a] = b;
        if !ss {
            let sb = d2.sym(b);
            let sa = d1.sym(a);
            // remove sb from its pool
            let sarc = d2.arc(sb);
            let pool = pools.get_mut(&(sarc.s, sarc.t, false))?;
            let idx = pool.iter().position(|&x| x == sb)?;
            pool.remove(idx);
            amap[sa] = sb;
        }
    }
    Some(Isomorphism { vmap, amap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::builtin;

    #[test]
    fn relabeled_copies_match() {
        let d = builtin("h-g5").unwrap().to_digraph();
        let r = d.relabel_vertices(&[3, 1, 4, 0, 7, 2, 6, 5]);
        let iso = is_isomorphic(&d, &r).unwrap();
        for a in 0..d.arc_count() {
            let (x, y) = (d.arc(a), r.arc(iso.amap[a]));
            assert_eq!((iso.vmap[x.s], iso.vmap[x.t]), (y.s, y.t));
            assert_eq!(iso.amap[d.sym(a)], r.sym(iso.amap[a]));
        }
    }

    #[test]
    fn g6_g7_differ() {
        let g6 = builtin("h-g6").unwrap().to_digraph();
        let g7 = builtin("h-g7").unwrap().to_digraph();
        assert!(is_isomorphic(&g6, &g7).is_none());
    }

    #[test]
    fn sym_structure_matters() {
        let a = builtin("fig4-bouquet").unwrap().to_digraph();
        let b = builtin("fig4-bouquet-ss").unwrap().to_digraph();
        assert!(is_isomorphic(&a, &b).is_none());
        assert!(is_isomorphic(&a, &a).is_some());
    }
}
