use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde_json::json;

use crate::coverings::CoveringMap;
use crate::error::{Error, Result};
use crate::graphs::{Arc, SymDigraph};

/// Spanning tree plus one sheet permutation per cotree sym pair.
///
/// Arcs are identified by the smaller id of their sym pair. Permutations are
/// stored 0-based (`sigma[i]` is the sheet reached from sheet `i`); the
/// permutation of the other arc of a pair is the inverse. Cotree pairs with
/// no entry carry the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermAssignment {
    q: usize,
    tree: BTreeSet<usize>,
    sigma: BTreeMap<usize, Vec<usize>>,
}

fn is_perm(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

impl PermAssignment {
    /// Validates against `base`: the tree must span it over sym pairs, tree
    /// pairs carry no permutation, and self-symmetric loops get involutions.
    /// A permutation given for the larger arc of a pair is inverted onto the
    /// smaller one.
    pub fn new(
        base: &SymDigraph,
        q: usize,
        tree: impl IntoIterator<Item = usize>,
        sigma: impl IntoIterator<Item = (usize, Vec<usize>)>,
    ) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidAssignment("q must be at least 1".into()));
        }
        let rep = |a: usize| a.min(base.sym(a));
        let mut t = BTreeSet::new();
        for a in tree {
            if a >= base.arc_count() {
                return Err(Error::InvalidAssignment(format!("tree arc {a} does not exist")));
            }
            if base.is_loop(a) {
                return Err(Error::InvalidAssignment(format!("tree arc {a} is a loop")));
            }
            t.insert(rep(a));
        }
        check_spanning_tree(base, &t)?;
        let mut s = BTreeMap::new();
        for (a, p) in sigma {
            if a >= base.arc_count() {
                return Err(Error::InvalidAssignment(format!("arc {a} does not exist")));
            }
            if p.len() != q || !is_perm(&p) {
                return Err(Error::InvalidAssignment(format!("sigma for arc {a} is not a permutation of {q} sheets")));
            }
            let r = rep(a);
            if t.contains(&r) {
                return Err(Error::InvalidAssignment(format!("arc {a} is in the tree and cannot carry a permutation")));
            }
            let p = if r == a { p } else { inverse(&p) };
            if base.is_self_symmetric(a) && inverse(&p) != p {
                return Err(Error::InvalidAssignment(format!("self-symmetric loop {a} needs an involution")));
            }
            if s.insert(r, p).is_some() {
                return Err(Error::InvalidAssignment(format!("sym pair of arc {a} given twice")));
            }
        }
        Ok(PermAssignment { q, tree: t, sigma: s })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn tree(&self) -> &BTreeSet<usize> {
        &self.tree
    }

    pub fn sigma(&self) -> &BTreeMap<usize, Vec<usize>> {
        &self.sigma
    }

    /// Sheet permutation carried by arc `a` of `base`.
    pub fn sigma_of(&self, base: &SymDigraph, a: usize) -> Vec<usize> {
        let sa = base.sym(a);
        let r = a.min(sa);
        match self.sigma.get(&r) {
            None => (0..self.q).collect(),
            Some(p) if r == a => p.clone(),
            Some(p) => inverse(p),
        }
    }

    /// Permutations rendered 1-based, keyed by arc id.
    pub fn to_json(&self) -> serde_json::Value {
        let sigma: BTreeMap<String, Vec<usize>> =
            self.sigma.iter().map(|(a, p)| (a.to_string(), p.iter().map(|x| x + 1).collect())).collect();
        json!({ "q": self.q, "tree": self.tree, "sigma": sigma })
    }
}

fn check_spanning_tree(base: &SymDigraph, tree: &BTreeSet<usize>) -> Result<()> {
    if tree.len() + 1 != base.n() {
        return Err(Error::InvalidAssignment(format!("tree has {} pairs, a spanning tree needs {}", tree.len(), base.n() - 1)));
    }
    let mut parent: Vec<usize> = (0..base.n()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &a in tree {
        let Arc { s, t } = base.arc(a);
        let (x, y) = (find(&mut parent, s), find(&mut parent, t));
        if x == y {
            return Err(Error::InvalidAssignment(format!("tree contains a cycle through arc {a}")));
        }
        parent[x] = y;
    }
    Ok(())
}

/// Breadth-first spanning tree from vertex 0, entering each vertex by its
/// lowest-id arc; returned as sym-pair representatives.
pub fn default_tree(base: &SymDigraph) -> Vec<usize> {
    let mut seen = vec![false; base.n()];
    let mut tree = Vec::new();
    if base.n() == 0 {
        return tree;
    }
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(u) = queue.pop_front() {
        for &a in base.out_arcs(u) {
            let w = base.arc(a).t;
            if !seen[w] {
                seen[w] = true;
                tree.push(a.min(base.sym(a)));
                queue.push_back(w);
            }
        }
    }
    tree.sort_unstable();
    tree
}

/// Parses 1-based cycle notation such as `(1)(23)` or `(1 2)(3)` into a
/// 0-based permutation of `q` sheets. Unlisted sheets are fixed.
pub fn parse_cycles(q: usize, text: &str) -> Result<Vec<usize>> {
    let mut p: Vec<usize> = (0..q).collect();
    let mut seen = vec![false; q];
    let bad = |m: &str| Error::InvalidAssignment(format!("cycle notation {text:?}: {m}"));
    let mut rest = text.trim();
    while !rest.is_empty() {
        let Some(body) = rest.strip_prefix('(') else { return Err(bad("expected '('")) };
        let Some(close) = body.find(')') else { return Err(bad("missing ')'")) };
        let inner = &body[..close];
        let elems: Vec<usize> = if inner.contains(|c: char| c.is_whitespace() || c == ',') {
            inner
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|_| bad("not a number")))
                .collect::<Result<_>>()?
        } else {
            inner.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| bad("not a digit"))).collect::<Result<_>>()?
        };
        for &e in &elems {
            if e == 0 || e > q {
                return Err(bad("sheet out of range"));
            }
            if std::mem::replace(&mut seen[e - 1], true) {
                return Err(bad("sheet repeated"));
            }
        }
        for (i, &e) in elems.iter().enumerate() {
            p[e - 1] = elems[(i + 1) % elems.len()] - 1;
        }
        rest = body[close + 1..].trim_start();
    }
    Ok(p)
}

/// All permutations of `0..q` in lexicographic order.
pub fn permutations(q: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..q).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..q).rev().find(|&i| cur[i - 1] < cur[i]) else { return out };
        let j = (i..q).rev().find(|&j| cur[j] > cur[i - 1]).expect("exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// All involutions of `0..q` in lexicographic order.
pub fn involutions(q: usize) -> Vec<Vec<usize>> {
    permutations(q).into_iter().filter(|p| p.iter().enumerate().all(|(i, &x)| p[x] == i)).collect()
}

/// The lift `H_{T,Σ}`: vertex `u` on sheet `i` becomes `u * q + i`; arc `a`
/// on sheet `i` becomes arc `a * q + i`, from `s(a)` on sheet `i` to `t(a)` on
/// sheet `σ_a(i)`. Outports of the base, if any, are inherited.
pub fn reidemeister_lift(base: &SymDigraph, pa: &PermAssignment) -> Result<CoveringMap> {
    let q = pa.q;
    check_spanning_tree(base, &pa.tree)?;
    let perms: Vec<Vec<usize>> = (0..base.arc_count()).map(|a| pa.sigma_of(base, a)).collect();
    for a in 0..base.arc_count() {
        if base.is_self_symmetric(a) && inverse(&perms[a]) != perms[a] {
            return Err(Error::InvalidAssignment(format!("self-symmetric loop {a} needs an involution")));
        }
    }
    let mut arcs = Vec::with_capacity(base.arc_count() * q);
    let mut sym = Vec::with_capacity(base.arc_count() * q);
    let mut amap = Vec::with_capacity(base.arc_count() * q);
    for a in 0..base.arc_count() {
        let Arc { s, t } = base.arc(a);
        for i in 0..q {
            let j = perms[a][i];
            arcs.push(Arc { s: s * q + i, t: t * q + j });
            sym.push(base.sym(a) * q + j);
            amap.push(a);
        }
    }
    let outports = base.outports().map(|p| (0..base.arc_count()).flat_map(|a| std::iter::repeat_n(p[a], q)).collect());
    let mut total = SymDigraph::new(base.n() * q, arcs, sym, outports)?;
    if let Some(name) = base.name() {
        total.set_name(Some(format!("lift{q}({name})")));
    }
    let vmap = (0..base.n() * q).map(|v| v / q).collect();
    CoveringMap::new(total, base.clone(), vmap, amap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::builtin;
    use crate::lifts::is_isomorphic;

    #[test]
    fn cycles_parse() {
        assert_eq!(parse_cycles(3, "(1)(23)").unwrap(), vec![0, 2, 1]);
        assert_eq!(parse_cycles(3, "(12)(3)").unwrap(), vec![1, 0, 2]);
        assert_eq!(parse_cycles(4, "(1 3 2)").unwrap(), vec![2, 0, 1, 3]);
        assert!(parse_cycles(3, "(1)(1)").is_err());
        assert!(parse_cycles(3, "(4)").is_err());
    }

    #[test]
    fn counts() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(involutions(4).len(), 10);
        assert_eq!(permutations(3)[1], vec![0, 2, 1]);
    }

    #[test]
    fn q1_is_base() {
        let base = builtin("h-g2").unwrap().to_digraph();
        let pa = PermAssignment::new(&base, 1, default_tree(&base), []).unwrap();
        let c = reidemeister_lift(&base, &pa).unwrap();
        assert!(is_isomorphic(c.total(), &base).is_some());
    }

    #[test]
    fn loop_involution_enforced() {
        let base = builtin("fig4-bouquet-ss").unwrap().to_digraph();
        assert!(PermAssignment::new(&base, 3, [], [(0, vec![1, 2, 0])]).is_err());
        assert!(PermAssignment::new(&base, 3, [], [(0, vec![1, 0, 2])]).is_ok());
    }

    #[test]
    fn g1_to_g4() {
        // transposition on the loop and on the second parallel pair
        let base = builtin("h-g1").unwrap().to_digraph();
        let pa = PermAssignment::new(&base, 2, [1], [(0, vec![1, 0]), (3, vec![1, 0])]).unwrap();
        let c = reidemeister_lift(&base, &pa).unwrap();
        let g4 = builtin("h-g4").unwrap().to_digraph();
        assert!(c.report().is_symmetric_covering);
        assert!(is_isomorphic(c.total(), &g4).is_some());
    }
}
