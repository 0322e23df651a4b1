//! k-uniform hypergraphs on dense integer vertex labels, together with
//! orderings, colourings, list assignments and copy enumeration.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// A k-uniform hypergraph on vertices `0..n`.  Edges are stored canonically
/// sorted and iterated in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KGraph {
    k: usize,
    n: usize,
    edges: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    /// Adjacency bitsets, only built for k = 2 (the solver's inner loop).
    adj: Vec<Bitset>,
}

impl KGraph {
    pub fn new(k: usize, n: usize, mut edges: Vec<Vec<usize>>) -> Result<Self> {
        if k < 2 {
            return Err(Error::UnsupportedUniformity {
                k,
                reason: "uniformity must be at least 2".into(),
            });
        }
        for e in edges.iter_mut() {
            e.sort_unstable();
            if e.len() != k || e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidEdge {
                    edge: e.clone(),
                    reason: format!("expected {k} distinct vertices"),
                });
            }
            if let Some(&v) = e.last() {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
        }
        edges.sort();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge { edge: w[0].clone() });
        }
        let index = edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        let mut adj = Vec::new();
        if k == 2 {
            adj = vec![Bitset::new(n); n];
            for e in &edges {
                adj[e[0]].set(e[1]);
                adj[e[1]].set(e[0]);
            }
        }
        Ok(KGraph {
            k,
            n,
            edges,
            index,
            adj,
        })
    }

    /// The complete k-graph on `n` vertices.  For `n < k` the edge set is empty.
    pub fn complete(n: usize, k: usize) -> Result<Self> {
        let mut edges = Vec::new();
        if n >= k {
            let mut cur: Vec<usize> = (0..k).collect();
            loop {
                edges.push(cur.clone());
                // next k-combination of 0..n in lexicographic order
                let mut i = k;
                loop {
                    if i == 0 {
                        return KGraph::new(k, n, edges);
                    }
                    i -= 1;
                    if cur[i] < n - (k - i) {
                        cur[i] += 1;
                        for j in i + 1..k {
                            cur[j] = cur[j - 1] + 1;
                        }
                        break;
                    }
                }
            }
        }
        KGraph::new(k, n, edges)
    }

    pub fn uniformity(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = &[usize]> {
        self.edges.iter().map(|e| e.as_slice())
    }

    pub fn edge(&self, idx: usize) -> &[usize] {
        &self.edges[idx]
    }

    /// Index of a (sorted) edge, if present.
    pub fn edge_index(&self, edge: &[usize]) -> Option<usize> {
        self.index.get(edge).copied()
    }

    pub fn has_edge(&self, edge: &[usize]) -> bool {
        if self.k == 2 {
            return self.adj[edge[0]].get(edge[1]);
        }
        self.index.contains_key(edge)
    }

    /// Adjacency bitset of `v`; only available for k = 2.
    pub fn adjacency(&self, v: usize) -> &Bitset {
        debug_assert_eq!(self.k, 2);
        &self.adj[v]
    }

    /// Number of edges containing vertex `v`.
    pub fn degree(&self, v: usize) -> usize {
        if self.k == 2 {
            return self.adj[v].count();
        }
        self.edges.iter().filter(|e| e.contains(&v)).count()
    }

    /// The subgraph induced on the same vertex set by a subset of edge indices.
    pub fn edge_subgraph(&self, edge_idxs: &[usize]) -> Result<KGraph> {
        let edges = edge_idxs.iter().map(|&i| self.edges[i].clone()).collect();
        KGraph::new(self.k, self.n, edges)
    }
}

/// Fixed-size bitset over vertex labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitset {
    bits: Vec<u64>,
    len: usize,
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Bitset {
            bits: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn set(&mut self, i: usize) {
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub fn clear(&mut self, i: usize) {
        self.bits[i / 64] &= !(1 << (i % 64));
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn intersect_with(&mut self, other: &Bitset) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a &= *b;
        }
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &block)| {
            let mut b = block;
            std::iter::from_fn(move || {
                if b == 0 {
                    None
                } else {
                    let t = b.trailing_zeros() as usize;
                    b &= b - 1;
                    Some(w * 64 + t)
                }
            })
        })
    }
}

/// An ordering of the vertices `0..n`, stored as rank per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexOrdering {
    rank: Vec<usize>,
}

impl VertexOrdering {
    /// The natural order 0 < 1 < ... < n-1.
    pub fn natural(n: usize) -> Self {
        VertexOrdering {
            rank: (0..n).collect(),
        }
    }

    /// Build from a sequence `seq[pos] = vertex`.
    pub fn from_sequence(seq: &[usize]) -> Result<Self> {
        let n = seq.len();
        let mut rank = vec![usize::MAX; n];
        for (pos, &v) in seq.iter().enumerate() {
            if v >= n || rank[v] != usize::MAX {
                return Err(Error::NotAPermutation {
                    seq: seq.to_vec(),
                    n,
                });
            }
            rank[v] = pos;
        }
        Ok(VertexOrdering { rank })
    }

    pub fn from_ranks(rank: Vec<usize>) -> Result<Self> {
        let seq = {
            let n = rank.len();
            let mut seq = vec![usize::MAX; n];
            for (v, &pos) in rank.iter().enumerate() {
                if pos >= n || seq[pos] != usize::MAX {
                    return Err(Error::NotAPermutation { seq: rank.clone(), n });
                }
                seq[pos] = v;
            }
            seq
        };
        let _ = seq;
        Ok(VertexOrdering { rank })
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    /// The sequence `seq[pos] = vertex`.
    pub fn sequence(&self) -> Vec<usize> {
        let mut seq = vec![0; self.rank.len()];
        for (v, &pos) in self.rank.iter().enumerate() {
            seq[pos] = v;
        }
        seq
    }

    pub fn reversed(&self) -> Self {
        let n = self.rank.len();
        VertexOrdering {
            rank: self.rank.iter().map(|&p| n - 1 - p).collect(),
        }
    }
}

/// A total edge colouring, parallel to the carrier graph's edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colouring {
    colours: Vec<u64>,
}

impl Colouring {
    pub fn new(colours: Vec<u64>) -> Self {
        Colouring { colours }
    }

    pub fn constant(g: &KGraph, colour: u64) -> Self {
        Colouring {
            colours: vec![colour; g.edge_count()],
        }
    }

    pub fn of(&self, edge_idx: usize) -> u64 {
        self.colours[edge_idx]
    }

    pub fn len(&self) -> usize {
        self.colours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colours.is_empty()
    }

    pub fn colours(&self) -> &[u64] {
        &self.colours
    }

    pub fn check_total(&self, g: &KGraph) -> Result<()> {
        if self.colours.len() != g.edge_count() {
            return Err(Error::PartialColouring {
                expected: g.edge_count(),
                got: self.colours.len(),
            });
        }
        Ok(())
    }
}

/// An assignment of ordered r-tuples of colours to edges (repeats allowed),
/// parallel to the carrier graph's edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListAssignment {
    r: usize,
    lists: Vec<Vec<u64>>,
}

impl ListAssignment {
    pub fn new(r: usize, lists: Vec<Vec<u64>>) -> Result<Self> {
        if r == 0 {
            return Err(Error::ParameterOutOfRange("list length r must be >= 1".into()));
        }
        for l in &lists {
            if l.len() != r {
                return Err(Error::PartialLists {
                    expected: r,
                    got: l.len(),
                });
            }
        }
        Ok(ListAssignment { r, lists })
    }

    /// The same tuple on every edge of `g`.
    pub fn constant(g: &KGraph, tuple: &[u64]) -> Result<Self> {
        ListAssignment::new(tuple.len(), vec![tuple.to_vec(); g.edge_count()])
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn list(&self, edge_idx: usize) -> &[u64] {
        &self.lists[edge_idx]
    }

    pub fn lists_iter(&self) -> impl Iterator<Item = &[u64]> {
        self.lists.iter().map(|l| l.as_slice())
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn check_total(&self, g: &KGraph) -> Result<()> {
        if self.lists.len() != g.edge_count() {
            return Err(Error::PartialLists {
                expected: g.edge_count(),
                got: self.lists.len(),
            });
        }
        Ok(())
    }

    /// Restrict a list assignment on `big` to the edges of `small` (which must
    /// all be edges of `big`).
    pub fn restrict(&self, big: &KGraph, small: &KGraph) -> Result<ListAssignment> {
        self.check_total(big)?;
        let mut lists = Vec::with_capacity(small.edge_count());
        for e in small.edges() {
            let idx = big
                .edge_index(e)
                .ok_or_else(|| Error::ForeignEdge { edge: e.to_vec() })?;
            lists.push(self.lists[idx].clone());
        }
        ListAssignment::new(self.r, lists)
    }
}

/// An injective, edge-preserving map from the vertices of a pattern into a host.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Embedding {
    map: Vec<usize>,
}

impl Embedding {
    pub fn new(map: Vec<usize>) -> Self {
        Embedding { map }
    }

    pub fn image_of(&self, v: usize) -> usize {
        self.map[v]
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.map
    }

    /// The sorted image of an edge of the pattern.
    pub fn image_edge(&self, edge: &[usize]) -> Vec<usize> {
        let mut img: Vec<usize> = edge.iter().map(|&v| self.map[v]).collect();
        img.sort_unstable();
        img
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }
}

/// Streaming enumeration of all embeddings of `pattern` into `host`, in
/// deterministic (lexicographic on the vertex map) order.
pub struct CopyIter<'a> {
    pattern: &'a KGraph,
    host: &'a KGraph,
    /// For each pattern vertex u (in assignment order 0..v), the pattern edges
    /// fully determined once u is mapped.
    check_edges: Vec<Vec<usize>>,
    map: Vec<usize>,
    used: Vec<bool>,
    depth: usize,
    /// Next candidate image to try at each depth.
    next: Vec<usize>,
    done: bool,
}

/// All embeddings of `pattern` into `host` (equal uniformity required).
pub fn enumerate_copies<'a>(pattern: &'a KGraph, host: &'a KGraph) -> Result<CopyIter<'a>> {
    if pattern.uniformity() != host.uniformity() {
        return Err(Error::UniformityMismatch {
            left: pattern.uniformity(),
            right: host.uniformity(),
        });
    }
    let v = pattern.vertex_count();
    let mut check_edges = vec![Vec::new(); v.max(1)];
    for (i, e) in pattern.edges().enumerate() {
        let last = *e.iter().max().unwrap();
        check_edges[last].push(i);
    }
    let done = v > host.vertex_count();
    Ok(CopyIter {
        pattern,
        host,
        check_edges,
        map: vec![usize::MAX; v],
        used: vec![false; host.vertex_count()],
        depth: 0,
        next: vec![0; v + 1],
        done,
    })
}

impl CopyIter<'_> {
    fn edges_ok(&self, depth: usize) -> bool {
        // Pattern vertices are assigned in natural order, so an edge is fully
        // mapped exactly when its maximum vertex is.
        for &ei in &self.check_edges[depth] {
            let img = {
                let e = self.pattern.edge(ei);
                let mut img: Vec<usize> = e.iter().map(|&u| self.map[u]).collect();
                img.sort_unstable();
                img
            };
            if !self.host.has_edge(&img) {
                return false;
            }
        }
        true
    }
}

impl Iterator for CopyIter<'_> {
    type Item = Embedding;

    fn next(&mut self) -> Option<Embedding> {
        if self.done {
            return None;
        }
        let v = self.pattern.vertex_count();
        let hn = self.host.vertex_count();
        if v == 0 {
            self.done = true;
            return Some(Embedding::new(Vec::new()));
        }
        loop {
            if self.depth == v {
                // yielded a full map last time round; backtrack one level
                self.depth -= 1;
                let img = self.map[self.depth];
                self.used[img] = false;
                self.map[self.depth] = usize::MAX;
            }
            let mut advanced = false;
            for cand in self.next[self.depth]..hn {
                if self.used[cand] {
                    continue;
                }
                self.map[self.depth] = cand;
                if self.edges_ok(self.depth) {
                    self.used[cand] = true;
                    self.next[self.depth] = cand + 1;
                    self.depth += 1;
                    self.next[self.depth] = 0;
                    advanced = true;
                    break;
                }
                self.map[self.depth] = usize::MAX;
            }
            if !advanced {
                if self.depth == 0 {
                    self.done = true;
                    return None;
                }
                self.depth -= 1;
                let img = self.map[self.depth];
                self.used[img] = false;
                self.map[self.depth] = usize::MAX;
                continue;
            }
            if self.depth == v {
                return Some(Embedding::new(self.map.clone()));
            }
        }
    }
}

/// A distinct subgraph image of a pattern, with every embedding onto it.
#[derive(Debug, Clone)]
pub struct SubgraphCopy {
    /// Sorted host edge indices forming the image.
    pub edge_idxs: Vec<usize>,
    pub embeddings: Vec<Embedding>,
}

/// All distinct subgraph copies of `pattern` in `host`, grouped by image edge
/// set and sorted lexicographically on the edge index sets.
pub fn grouped_copies(pattern: &KGraph, host: &KGraph) -> Result<Vec<SubgraphCopy>> {
    let mut groups: HashMap<Vec<usize>, Vec<Embedding>> = HashMap::new();
    for emb in enumerate_copies(pattern, host)? {
        let mut idxs: Vec<usize> = pattern
            .edges()
            .map(|e| host.edge_index(&emb.image_edge(e)).expect("image is an edge"))
            .collect();
        idxs.sort_unstable();
        idxs.dedup();
        groups.entry(idxs).or_default().push(emb);
    }
    let mut copies: Vec<SubgraphCopy> = groups
        .into_iter()
        .map(|(edge_idxs, embeddings)| SubgraphCopy {
            edge_idxs,
            embeddings,
        })
        .collect();
    copies.sort_by(|a, b| a.edge_idxs.cmp(&b.edge_idxs));
    Ok(copies)
}

/// Number of distinct subgraphs of `host` isomorphic to `pattern`.
pub fn distinct_subgraph_copies(pattern: &KGraph, host: &KGraph) -> Result<usize> {
    Ok(grouped_copies(pattern, host)?.len())
}

/// All automorphisms of `g`, realised as embeddings of `g` into itself.
pub fn automorphisms(g: &KGraph) -> Result<Vec<Embedding>> {
    // An injective edge-preserving self-map hits e(g) distinct edges, hence is
    // an automorphism.
    enumerate_copies(g, g).map(|it| it.collect())
}

/// The path with `n` vertices and `n - 1` edges.
pub fn path_graph(n: usize) -> Result<KGraph> {
    let edges = (0..n.saturating_sub(1)).map(|i| vec![i, i + 1]).collect();
    KGraph::new(2, n, edges)
}

/// The cycle with `n >= 3` vertices.
pub fn cycle_graph(n: usize) -> Result<KGraph> {
    if n < 3 {
        return Err(Error::ParameterOutOfRange(format!(
            "cycle needs at least 3 vertices, got {n}"
        )));
    }
    let mut edges: Vec<Vec<usize>> = (0..n - 1).map(|i| vec![i, i + 1]).collect();
    edges.push(vec![0, n - 1]);
    KGraph::new(2, n, edges)
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
