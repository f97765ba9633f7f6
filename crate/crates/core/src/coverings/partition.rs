use std::collections::BTreeMap;
use std::ops::ControlFlow;

use serde::Serialize;

use crate::budget::{Budget, Exhausted};
use crate::coverings::matching::{
    disjoint_generalized_matchings, euler_orientation, regular_bipartite_decomposition, tutte_set, Cover,
};
use crate::coverings::CoveringMap;
use crate::error::{Error, Result};
use crate::graphs::{Arc, SymDigraph};

const NONE: usize = usize::MAX;

/// Partition of the vertex set into blocks of a common size `q`.
///
/// Blocks are kept sorted internally and ordered by their least vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FibrePartition {
    blocks: Vec<Vec<usize>>,
    #[serde(skip)]
    label: Vec<usize>,
}

impl FibrePartition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut label = vec![NONE; n];
        for (b, block) in blocks.iter().enumerate() {
            for &v in block {
                if v >= n {
                    return Err(Error::InvalidPartition(format!("vertex {v} out of range")));
                }
                if label[v] != NONE {
                    return Err(Error::InvalidPartition(format!("vertex {v} appears twice")));
                }
                label[v] = b;
            }
        }
        if let Some(v) = label.iter().position(|&l| l == NONE) {
            return Err(Error::InvalidPartition(format!("vertex {v} is in no block")));
        }
        Self::from_labels(&label)
    }

    /// Builds the partition whose blocks are the level sets of `labels`.
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        let mut renum: BTreeMap<usize, usize> = BTreeMap::new();
        let mut label = Vec::with_capacity(labels.len());
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (v, &l) in labels.iter().enumerate() {
            let next = renum.len();
            let b = *renum.entry(l).or_insert(next);
            if b == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[b].push(v);
            label.push(b);
        }
        if blocks.is_empty() {
            return Err(Error::InvalidPartition("empty vertex set".into()));
        }
        let q = blocks[0].len();
        if let Some(b) = blocks.iter().position(|b| b.len() != q) {
            return Err(Error::InvalidPartition(format!("block {b} has {} vertices, block 0 has {q}", blocks[b].len())));
        }
        Ok(FibrePartition { blocks, label })
    }

    pub fn single_block(n: usize) -> Self {
        FibrePartition { blocks: vec![(0..n).collect()], label: vec![0; n] }
    }

    pub fn discrete(n: usize) -> Self {
        FibrePartition { blocks: (0..n).map(|v| vec![v]).collect(), label: (0..n).collect() }
    }

    /// The partition into vertex fibres of a covering.
    pub fn from_covering(c: &CoveringMap) -> Result<Self> {
        Self::from_labels(c.vmap())
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn labels(&self) -> &[usize] {
        &self.label
    }

    pub fn label(&self, v: usize) -> usize {
        self.label[v]
    }

    pub fn n(&self) -> usize {
        self.label.len()
    }

    pub fn q(&self) -> usize {
        self.blocks[0].len()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// `m[b][c]` = arcs from any vertex of block `b` into block `c`, if that
    /// number does not depend on the vertex.
    pub fn quotient_matrix(&self, d: &SymDigraph) -> Option<Vec<Vec<usize>>> {
        if d.n() != self.n() {
            return None;
        }
        let k = self.block_count();
        let mut m: Vec<Option<Vec<usize>>> = vec![None; k];
        for v in 0..d.n() {
            let mut row = vec![0; k];
            for &a in d.out_arcs(v) {
                row[self.label[d.arc(a).t]] += 1;
            }
            match &m[self.label[v]] {
                Some(r) if *r != row => return None,
                Some(_) => {}
                None => m[self.label[v]] = Some(row),
            }
        }
        m.into_iter().collect()
    }

    pub fn is_equitable(&self, d: &SymDigraph) -> bool {
        self.quotient_matrix(d).is_some()
    }
}

/// Colour refinement on out-arc counts: the coarsest equitable partition,
/// as colours `0..c` numbered by sorted signature (so isomorphism-invariant).
pub fn coarsest_equitable_partition(d: &SymDigraph) -> Vec<usize> {
    refine(d, vec![0; d.n()])
}

pub(crate) fn refine(d: &SymDigraph, mut color: Vec<usize>) -> Vec<usize> {
    let mut classes = count_distinct(&color);
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..d.n())
            .map(|v| {
                let mut s: Vec<usize> = d.out_arcs(v).iter().map(|&a| color[d.arc(a).t]).collect();
                s.sort_unstable();
                (color[v], s)
            })
            .collect();
        let mut sorted: Vec<&(usize, Vec<usize>)> = sigs.iter().collect();
        sorted.sort();
        sorted.dedup();
        let next: Vec<usize> = sigs.iter().map(|s| sorted.binary_search(&s).expect("present")).collect();
        let nc = sorted.len();
        color = next;
        if nc == classes {
            return color;
        }
        classes = nc;
    }
}

fn count_distinct(c: &[usize]) -> usize {
    let mut v = c.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Visits every equitable partition of `d` into blocks of size `q`, each
/// exactly once. The visitor may stop the search by returning `Break`.
/// Returns `true` if the visitor stopped it.
pub fn equitable_partitions<F>(d: &SymDigraph, q: usize, budget: &mut Budget, mut visit: F) -> Result<bool, Exhausted>
where
    F: FnMut(&FibrePartition, &mut Budget) -> Result<ControlFlow<()>, Exhausted>,
{
    let n = d.n();
    if q == 0 || n % q != 0 {
        return Ok(false);
    }
    let color = coarsest_equitable_partition(d);
    let ncolors = color.iter().max().map_or(0, |&c| c + 1);
    let mut class_size = vec![0; ncolors];
    for &c in &color {
        class_size[c] += 1;
    }
    if class_size.iter().any(|&s| s % q != 0) {
        return Ok(false);
    }
    let k = n / q;
    let mut nbrs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for v in 0..n {
        let mut m: BTreeMap<usize, usize> = BTreeMap::new();
        for &a in d.out_arcs(v) {
            *m.entry(d.arc(a).t).or_default() += 1;
        }
        nbrs[v] = m.into_iter().collect();
    }
    let mut s = PartitionSearch {
        n,
        q,
        k,
        order: bfs_order(d),
        color,
        blocks_allowed: class_size.iter().map(|&s| s / q).collect(),
        blocks_of_color: vec![0; ncolors],
        free: (0..n).map(|v| d.out_arcs(v).len()).collect(),
        nbrs,
        label: vec![NONE; n],
        nblocks: 0,
        block_color: vec![NONE; k],
        members: vec![Vec::new(); k],
        cnt: vec![vec![0; k]; n],
        sig: vec![None; k],
        budget,
    };
    let flow = s.rec(0, &mut visit)?;
    Ok(flow.is_break())
}

fn bfs_order(d: &SymDigraph) -> Vec<usize> {
    let mut seen = vec![false; d.n()];
    let mut order = Vec::with_capacity(d.n());
    for s in 0..d.n() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &a in d.out_arcs(u) {
                let w = d.arc(a).t;
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

struct PartitionSearch<'b> {
    n: usize,
    q: usize,
    k: usize,
    order: Vec<usize>,
    color: Vec<usize>,
    blocks_allowed: Vec<usize>,
    blocks_of_color: Vec<usize>,
    nbrs: Vec<Vec<(usize, usize)>>,
    free: Vec<usize>,
    label: Vec<usize>,
    nblocks: usize,
    block_color: Vec<usize>,
    members: Vec<Vec<usize>>,
    cnt: Vec<Vec<usize>>,
    sig: Vec<Option<Vec<usize>>>,
    budget: &'b mut Budget,
}

impl PartitionSearch<'_> {
    fn rec<F>(&mut self, i: usize, visit: &mut F) -> Result<ControlFlow<()>, Exhausted>
    where
        F: FnMut(&FibrePartition, &mut Budget) -> Result<ControlFlow<()>, Exhausted>,
    {
        self.budget.tick()?;
        if i == self.n {
            let p = FibrePartition::from_labels(&self.label).expect("complete labelling with equal blocks");
            return visit(&p, self.budget);
        }
        let v = self.order[i];
        let c = self.color[v];
        let mut options: Vec<usize> =
            (0..self.nblocks).filter(|&b| self.block_color[b] == c && self.members[b].len() < self.q).collect();
        if self.nblocks < self.k && self.blocks_of_color[c] < self.blocks_allowed[c] {
            options.push(self.nblocks);
        }
        for b in options {
            let (ok, set) = self.apply(v, b);
            if ok {
                let flow = self.rec(i + 1, visit)?;
                if flow.is_break() {
                    self.undo(v, b, set);
                    return Ok(flow);
                }
            }
            self.undo(v, b, set);
        }
        Ok(ControlFlow::Continue(()))
    }

    fn apply(&mut self, v: usize, b: usize) -> (bool, Vec<usize>) {
        if b == self.nblocks {
            self.nblocks += 1;
            self.block_color[b] = self.color[v];
            self.blocks_of_color[self.color[v]] += 1;
        }
        self.label[v] = b;
        self.members[b].push(v);
        for &(w, m) in &self.nbrs[v] {
            self.cnt[w][b] += m;
            self.free[w] -= m;
        }
        let mut set = Vec::new();
        let mut ok = self.check(v, &mut set);
        if ok {
            for idx in 0..self.nbrs[v].len() {
                let w = self.nbrs[v][idx].0;
                if w != v && self.label[w] != NONE && !self.check(w, &mut set) {
                    ok = false;
                    break;
                }
            }
        }
        (ok, set)
    }

    fn undo(&mut self, v: usize, b: usize, set: Vec<usize>) {
        for s in set {
            self.sig[s] = None;
        }
        for &(w, m) in &self.nbrs[v] {
            self.cnt[w][b] -= m;
            self.free[w] += m;
        }
        self.members[b].pop();
        self.label[v] = NONE;
        if self.members[b].is_empty() {
            self.nblocks -= 1;
            self.blocks_of_color[self.color[v]] -= 1;
            self.block_color[b] = NONE;
        }
    }

    fn le(a: &[usize], b: &[usize]) -> bool {
        a.iter().zip(b).all(|(x, y)| x <= y)
    }

    fn check(&mut self, x: usize, set: &mut Vec<usize>) -> bool {
        let b = self.label[x];
        match &self.sig[b] {
            Some(s) => Self::le(&self.cnt[x], s),
            None => {
                if self.free[x] != 0 {
                    return true;
                }
                let s = self.cnt[x].clone();
                let ok = self.members[b].iter().all(|&y| Self::le(&self.cnt[y], &s));
                self.sig[b] = Some(s);
                set.push(b);
                ok
            }
        }
    }
}

/// Why an equitable partition carries no symmetric covering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Obstruction {
    /// A block whose internal graph has odd degree and no perfect matching,
    /// so no self-symmetric loop can have it as a fibre. `tutte_set`, when
    /// found, is a vertex set whose removal leaves more odd components than
    /// its size.
    NoPerfectMatching { block: usize, internal_degree: usize, tutte_set: Option<Vec<usize>> },
    /// No admissible number of self-symmetric loops splits the block's
    /// internal arcs (only possible when the total graph has loops).
    NoLoopDecomposition { block: usize, internal_degree: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientOutcome {
    Covered(CoveringMap),
    Obstructed(Obstruction),
}

impl QuotientOutcome {
    pub fn covering(&self) -> Option<&CoveringMap> {
        match self {
            QuotientOutcome::Covered(c) => Some(c),
            QuotientOutcome::Obstructed(_) => None,
        }
    }

    pub fn into_covering(self) -> Option<CoveringMap> {
        match self {
            QuotientOutcome::Covered(c) => Some(c),
            QuotientOutcome::Obstructed(_) => None,
        }
    }
}

struct Block {
    verts: Vec<usize>,
    degree: usize,
    /// local endpoints of internal non-loop edges and the arc from the first to the second
    edges: Vec<(usize, usize)>,
    edge_arc: Vec<usize>,
    /// local vertex of each self-symmetric loop, and the loop
    loops: Vec<usize>,
    loop_arc: Vec<usize>,
    /// local vertex and one arc of each sym-paired loop pair
    pairs: Vec<usize>,
    pair_arc: Vec<usize>,
}

struct Bundle {
    from: usize,
    to: usize,
    /// local (from-block, to-block) endpoints and the arc oriented from -> to
    edges: Vec<(usize, usize)>,
    arcs: Vec<usize>,
}

struct Structure {
    blocks: Vec<Block>,
    bundles: Vec<Bundle>,
}

struct BlockSplit {
    matchings: Vec<Vec<Cover>>,
    /// each 2-factor as the total arcs mapped to the first loop of its base pair
    factors: Vec<Vec<usize>>,
}

fn structure(d: &SymDigraph, p: &FibrePartition) -> Result<Structure> {
    if p.n() != d.n() {
        return Err(Error::InvalidPartition(format!("partition has {} vertices, graph has {}", p.n(), d.n())));
    }
    let Some(matrix) = p.quotient_matrix(d) else {
        return Err(Error::InvalidPartition("partition is not equitable".into()));
    };
    let mut local = vec![0; d.n()];
    for block in p.blocks() {
        for (i, &v) in block.iter().enumerate() {
            local[v] = i;
        }
    }
    let mut blocks: Vec<Block> = p
        .blocks()
        .iter()
        .enumerate()
        .map(|(b, verts)| Block {
            verts: verts.clone(),
            degree: matrix[b][b],
            edges: Vec::new(),
            edge_arc: Vec::new(),
            loops: Vec::new(),
            loop_arc: Vec::new(),
            pairs: Vec::new(),
            pair_arc: Vec::new(),
        })
        .collect();
    let k = p.block_count();
    let mut bundle_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut bundles: Vec<Bundle> = Vec::new();
    for b1 in 0..k {
        for b2 in b1 + 1..k {
            if matrix[b1][b2] > 0 {
                bundle_of.insert((b1, b2), bundles.len());
                bundles.push(Bundle { from: b1, to: b2, edges: Vec::new(), arcs: Vec::new() });
            }
        }
    }
    for a in 0..d.arc_count() {
        let sa = d.sym(a);
        if sa < a {
            continue;
        }
        let Arc { s, t } = d.arc(a);
        let (bs, bt) = (p.label(s), p.label(t));
        if sa == a {
            blocks[bs].loops.push(local[s]);
            blocks[bs].loop_arc.push(a);
        } else if s == t {
            blocks[bs].pairs.push(local[s]);
            blocks[bs].pair_arc.push(a);
        } else if bs == bt {
            blocks[bs].edges.push((local[s], local[t]));
            blocks[bs].edge_arc.push(a);
        } else {
            let (from_arc, b1, b2) = if bs < bt { (a, bs, bt) } else { (sa, bt, bs) };
            let bundle = &mut bundles[bundle_of[&(b1, b2)]];
            let arc = d.arc(from_arc);
            bundle.edges.push((local[arc.s], local[arc.t]));
            bundle.arcs.push(from_arc);
        }
    }
    Ok(Structure { blocks, bundles })
}

fn split_block(d: &SymDigraph, block: &Block, k: usize, budget: &mut Budget) -> Result<Option<BlockSplit>, Exhausted> {
    if k > block.degree || (block.degree - k) % 2 != 0 {
        return Ok(None);
    }
    let q = block.verts.len();
    let Some(matchings) = disjoint_generalized_matchings(q, &block.edges, &block.loops, k, budget)? else {
        return Ok(None);
    };
    let mut used = vec![false; block.edges.len()];
    for m in &matchings {
        for c in m {
            if let Cover::Edge(e) = c {
                used[*e] = true;
            }
        }
    }
    // remaining edges and loop pairs form an even-regular multigraph
    let mut ends = Vec::new();
    let mut arcs = Vec::new();
    for (e, &(u, v)) in block.edges.iter().enumerate() {
        if !used[e] {
            ends.push((u, v));
            arcs.push(block.edge_arc[e]);
        }
    }
    for (i, &v) in block.pairs.iter().enumerate() {
        ends.push((v, v));
        arcs.push(block.pair_arc[i]);
    }
    let forward = euler_orientation(q, &ends);
    let mut oriented_ends = Vec::with_capacity(ends.len());
    let mut oriented_arcs = Vec::with_capacity(ends.len());
    for (i, &(u, v)) in ends.iter().enumerate() {
        if forward[i] {
            oriented_ends.push((u, v));
            oriented_arcs.push(arcs[i]);
        } else {
            oriented_ends.push((v, u));
            oriented_arcs.push(d.sym(arcs[i]));
        }
    }
    let Some(perms) = regular_bipartite_decomposition(q, &oriented_ends) else {
        return Ok(None);
    };
    let factors = perms.into_iter().map(|m| m.into_iter().map(|i| oriented_arcs[i]).collect()).collect();
    Ok(Some(BlockSplit { matchings, factors }))
}

/// Admissible self-symmetric loop counts for a block, smallest first.
fn loop_counts(block: &Block) -> impl Iterator<Item = usize> {
    let mut at = vec![0usize; block.verts.len()];
    for &v in &block.loops {
        at[v] += 1;
    }
    let least = at.iter().copied().max().unwrap_or(0);
    let degree = block.degree;
    (least..=degree).filter(move |k| (degree - k) % 2 == 0)
}

fn assemble(d: &SymDigraph, p: &FibrePartition, st: &Structure, splits: &[&BlockSplit], bundles: &[Vec<Vec<usize>>]) -> Result<CoveringMap> {
    let mut arcs: Vec<Arc> = Vec::new();
    let mut sym: Vec<usize> = Vec::new();
    let mut amap = vec![NONE; d.arc_count()];
    for (b, split) in splits.iter().enumerate() {
        let block = &st.blocks[b];
        for m in &split.matchings {
            let id = arcs.len();
            arcs.push(Arc { s: b, t: b });
            sym.push(id);
            for c in m {
                match *c {
                    Cover::Edge(e) => {
                        amap[block.edge_arc[e]] = id;
                        amap[d.sym(block.edge_arc[e])] = id;
                    }
                    Cover::Loop(l) => amap[block.loop_arc[l]] = id,
                }
            }
        }
        for f in &split.factors {
            let id = arcs.len();
            arcs.extend([Arc { s: b, t: b }, Arc { s: b, t: b }]);
            sym.extend([id + 1, id]);
            for &x in f {
                amap[x] = id;
                amap[d.sym(x)] = id + 1;
            }
        }
    }
    for (bundle, matchings) in st.bundles.iter().zip(bundles) {
        for m in matchings {
            let id = arcs.len();
            arcs.extend([Arc { s: bundle.from, t: bundle.to }, Arc { s: bundle.to, t: bundle.from }]);
            sym.extend([id + 1, id]);
            for &e in m {
                amap[bundle.arcs[e]] = id;
                amap[d.sym(bundle.arcs[e])] = id + 1;
            }
        }
    }
    if amap.contains(&NONE) {
        return Err(Error::NotCovering("internal: an arc was left unassigned while assembling the base".into()));
    }
    let base = SymDigraph::new(p.block_count(), arcs, sym, None)?;
    CoveringMap::new(d.clone(), base, p.labels().to_vec(), amap)
}

fn bundle_matchings(st: &Structure, q: usize) -> Result<Vec<Vec<Vec<usize>>>> {
    st.bundles
        .iter()
        .map(|b| {
            regular_bipartite_decomposition(q, &b.edges)
                .ok_or_else(|| Error::InvalidPartition(format!("cross arcs between blocks {} and {} are not regular", b.from, b.to)))
        })
        .collect()
}

fn obstruction(st: &Structure, b: usize, with_witness: bool) -> Obstruction {
    let block = &st.blocks[b];
    if block.loops.is_empty() && block.pairs.is_empty() && block.degree % 2 == 1 {
        let tutte = with_witness
            .then(|| {
                let mut adj = vec![Vec::new(); block.verts.len()];
                for &(u, v) in &block.edges {
                    adj[u].push(v);
                    adj[v].push(u);
                }
                tutte_set(&adj, 3).map(|s| s.into_iter().map(|v| block.verts[v]).collect())
            })
            .flatten();
        Obstruction::NoPerfectMatching { block: b, internal_degree: block.degree, tutte_set: tutte }
    } else {
        Obstruction::NoLoopDecomposition { block: b, internal_degree: block.degree }
    }
}

pub(crate) fn quotient_exists(d: &SymDigraph, p: &FibrePartition, witness: bool, budget: &mut Budget) -> Result<QuotientOutcome> {
    let st = structure(d, p)?;
    let mut splits = Vec::with_capacity(st.blocks.len());
    for (b, block) in st.blocks.iter().enumerate() {
        let mut found = None;
        for k in loop_counts(block) {
            if let Some(s) = split_block(d, block, k, budget)? {
                found = Some(s);
                break;
            }
        }
        match found {
            Some(s) => splits.push(s),
            None => return Ok(QuotientOutcome::Obstructed(obstruction(&st, b, witness))),
        }
    }
    let bundles = bundle_matchings(&st, p.q())?;
    let refs: Vec<&BlockSplit> = splits.iter().collect();
    Ok(QuotientOutcome::Covered(assemble(d, p, &st, &refs, &bundles)?))
}

/// Symmetric covering quotient of `d` over the equitable partition `p`, if any.
///
/// Cross-block arcs always split into perfect matchings. Inside a block the
/// internal arcs must split into self-symmetric loop fibres (generalized
/// perfect matchings) and 2-factors; the fewest admissible self-symmetric
/// loops are used.
pub fn partition_to_base(d: &SymDigraph, p: &FibrePartition) -> Result<QuotientOutcome> {
    quotient_exists(d, p, true, &mut Budget::default())
}

/// Every base over `p` up to the choice of sym-structure: one covering for
/// each achievable combination of self-symmetric loop counts per block.
pub fn partition_bases(d: &SymDigraph, p: &FibrePartition, budget: &mut Budget) -> Result<Vec<CoveringMap>> {
    let st = structure(d, p)?;
    let mut options: Vec<Vec<BlockSplit>> = Vec::new();
    for block in &st.blocks {
        let mut here = Vec::new();
        for k in loop_counts(block) {
            if let Some(s) = split_block(d, block, k, budget)? {
                here.push(s);
            }
        }
        if here.is_empty() {
            return Ok(Vec::new());
        }
        options.push(here);
    }
    let bundles = bundle_matchings(&st, p.q())?;
    let mut out = Vec::new();
    let mut idx = vec![0usize; options.len()];
    loop {
        let pick: Vec<&BlockSplit> = idx.iter().zip(&options).map(|(&i, o)| &o[i]).collect();
        out.push(assemble(d, p, &st, &pick, &bundles)?);
        let mut j = 0;
        loop {
            if j == idx.len() {
                return Ok(out);
            }
            idx[j] += 1;
            if idx[j] < options[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{builtin, dir, UGraph};

    fn c4() -> SymDigraph {
        dir(&UGraph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap(), None)
    }

    #[test]
    fn c4_opposite_pairs_give_double_edge() {
        let p = FibrePartition::new(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
        let c = partition_to_base(&c4(), &p).unwrap().into_covering().unwrap();
        assert_eq!(c.base().n(), 2);
        assert_eq!(c.base().arc_count(), 4);
        assert_eq!(c.base().multiplicity(0, 1), 2);
        assert!(c.report().is_symmetric_covering);
    }

    #[test]
    fn k2_single_block() {
        let k2 = dir(&UGraph::new(2, [(0, 1)]).unwrap(), None);
        let c = partition_to_base(&k2, &FibrePartition::single_block(2)).unwrap().into_covering().unwrap();
        assert_eq!(c.base().arc_count(), 1);
        assert!(c.base().is_self_symmetric(0));
    }

    #[test]
    fn fig4_single_block_obstructed() {
        let d = builtin("fig4-nonsym").unwrap().to_digraph();
        match partition_to_base(&d, &FibrePartition::single_block(16)).unwrap() {
            QuotientOutcome::Obstructed(Obstruction::NoPerfectMatching { internal_degree, tutte_set, .. }) => {
                assert_eq!(internal_degree, 3);
                assert_eq!(tutte_set, Some(vec![0]));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_equitable_rejected() {
        let p = FibrePartition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert!(partition_to_base(&dir(&UGraph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap(), None), &p).is_err());
        assert!(FibrePartition::new(3, vec![vec![0, 1], vec![2]]).is_err());
    }

    #[test]
    fn c4_equitable_partitions() {
        let mut seen = Vec::new();
        let mut b = Budget::unlimited();
        equitable_partitions(&c4(), 2, &mut b, |p, _| {
            seen.push(p.clone());
            Ok(ControlFlow::Continue(()))
        })
        .unwrap();
        // {02|13}, {01|23}, {03|12}
        assert_eq!(seen.len(), 3);
        assert!(seen.iter().all(|p| p.is_equitable(&c4())));
    }

    #[test]
    fn k4_variants() {
        let k4 = builtin("k4").unwrap().to_digraph();
        let mut b = Budget::unlimited();
        let all = partition_bases(&k4, &FibrePartition::single_block(4), &mut b).unwrap();
        // one self-symmetric loop plus a loop pair, or three self-symmetric loops
        let mut ss: Vec<usize> = all.iter().map(|c| c.base().self_symmetric_loops(0)).collect();
        ss.sort();
        assert_eq!(ss, vec![1, 3]);
    }
}
