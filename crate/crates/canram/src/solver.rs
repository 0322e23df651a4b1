//! Exact search for list-compatible colourings avoiding canonical copies, and
//! the unrestricted canonical-arrowing decisions built on top of it.

use std::collections::{HashMap, HashSet};

use itertools::Itertools;

use crate::error::{Error, Guards, Result};
use crate::graph::{
    automorphisms, grouped_copies, Colouring, KGraph, ListAssignment, VertexOrdering,
};
use crate::patterns::is_canonical;

/// A host, a pattern, a vertex ordering of the pattern, and lists on the host.
#[derive(Debug, Clone)]
pub struct AvoidanceInstance {
    pub host: KGraph,
    pub pattern: KGraph,
    pub sigma: VertexOrdering,
    pub lists: ListAssignment,
}

impl AvoidanceInstance {
    pub fn validate(&self) -> Result<()> {
        if self.host.uniformity() != self.pattern.uniformity() {
            return Err(Error::UniformityMismatch {
                left: self.pattern.uniformity(),
                right: self.host.uniformity(),
            });
        }
        self.lists.check_total(&self.host)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct SolverStats {
    pub nodes: u64,
    pub prunings: u64,
}

#[derive(Debug, Clone)]
pub enum SolverOutcome {
    Found(Colouring),
    NoneExists,
}

#[derive(Debug, Clone)]
pub struct SolverResult {
    pub outcome: SolverOutcome,
    pub stats: SolverStats,
}

impl SolverResult {
    pub fn found(&self) -> Option<&Colouring> {
        match &self.outcome {
            SolverOutcome::Found(c) => Some(c),
            SolverOutcome::NoneExists => None,
        }
    }
}

/// One distinct subgraph copy of the pattern, preprocessed for the search.
struct CopyState {
    edge_idxs: Vec<usize>,
    /// Per embedding onto this copy, the position within `edge_idxs` of the
    /// image of each pattern edge.
    emb_edge_pos: Vec<Vec<usize>>,
    memo: HashMap<Vec<u32>, bool>,
    unassigned: usize,
}

struct Search<'a> {
    pattern: &'a KGraph,
    sigma: &'a VertexOrdering,
    copies: Vec<CopyState>,
    edge_copies: Vec<Vec<usize>>,
    order: Vec<usize>,
    assigned: Vec<Option<u64>>,
    /// Distinct colours per edge with activity flags for forward checking.
    dom_colours: Vec<Vec<u64>>,
    dom_active: Vec<Vec<bool>>,
    dom_count: Vec<usize>,
    trail: Vec<(usize, usize)>,
    stats: SolverStats,
    node_limit: u64,
}

enum StepOutcome {
    Done(Vec<u64>),
    Exhausted,
}

impl<'a> Search<'a> {
    fn new(
        host: &KGraph,
        pattern: &'a KGraph,
        sigma: &'a VertexOrdering,
        lists: Option<&ListAssignment>,
        guards: &Guards,
    ) -> Result<Self> {
        let grouped = grouped_copies(pattern, host)?;
        let emb_total: u64 = grouped.iter().map(|c| c.embeddings.len() as u64).sum();
        if emb_total > guards.copies {
            return Err(Error::guard("copy enumeration", emb_total as u128, guards.copies as u128));
        }
        let copies: Vec<CopyState> = grouped
            .iter()
            .map(|c| {
                let emb_edge_pos = c
                    .embeddings
                    .iter()
                    .map(|emb| {
                        pattern
                            .edges()
                            .map(|e| {
                                let img = emb.image_edge(e);
                                let idx = host.edge_index(&img).expect("image is an edge");
                                c.edge_idxs.binary_search(&idx).expect("edge of the copy")
                            })
                            .collect()
                    })
                    .collect();
                CopyState {
                    edge_idxs: c.edge_idxs.clone(),
                    emb_edge_pos,
                    memo: HashMap::new(),
                    unassigned: c.edge_idxs.len(),
                }
            })
            .collect();

        let ecount = host.edge_count();
        let mut edge_copies = vec![Vec::new(); ecount];
        for (ci, c) in copies.iter().enumerate() {
            for &e in &c.edge_idxs {
                edge_copies[e].push(ci);
            }
        }
        // fail-first: most constrained edges early
        let mut order: Vec<usize> = (0..ecount).collect();
        order.sort_by_key(|&e| (std::cmp::Reverse(edge_copies[e].len()), e));

        let (dom_colours, dom_active, dom_count) = match lists {
            Some(lists) => {
                let mut cols = Vec::with_capacity(ecount);
                for e in 0..ecount {
                    let mut cs: Vec<u64> = lists.list(e).to_vec();
                    let mut seen = HashSet::new();
                    cs.retain(|c| seen.insert(*c));
                    cols.push(cs);
                }
                let active: Vec<Vec<bool>> = cols.iter().map(|c| vec![true; c.len()]).collect();
                let count: Vec<usize> = cols.iter().map(|c| c.len()).collect();
                (cols, active, count)
            }
            None => (vec![Vec::new(); ecount], vec![Vec::new(); ecount], vec![0; ecount]),
        };

        Ok(Search {
            pattern,
            sigma,
            copies,
            edge_copies,
            order,
            assigned: vec![None; ecount],
            dom_colours,
            dom_active,
            dom_count,
            trail: Vec::new(),
            stats: SolverStats::default(),
            node_limit: guards.nodes,
        })
    }

    /// Is copy `ci` (fully assigned) canonical under the current colours?
    fn copy_canonical(&mut self, ci: usize) -> bool {
        let colours: Vec<u64> = self.copies[ci]
            .edge_idxs
            .iter()
            .map(|&e| self.assigned[e].expect("copy fully assigned"))
            .collect();
        let key = crate::encoding::normalize_pattern(&colours);
        if let Some(&b) = self.copies[ci].memo.get(&key) {
            return b;
        }
        let mut canonical = false;
        for pos in &self.copies[ci].emb_edge_pos {
            let chi = Colouring::new(pos.iter().map(|&p| colours[p]).collect());
            if is_canonical(self.pattern, self.sigma, &chi).expect("small uniformity") {
                canonical = true;
                break;
            }
        }
        self.copies[ci].memo.insert(key, canonical);
        canonical
    }

    /// Assign `colour` to `edge`, updating copy counters.  Returns false on an
    /// immediate conflict (a completed canonical copy).
    fn assign(&mut self, edge: usize, colour: u64) -> bool {
        self.assigned[edge] = Some(colour);
        for i in 0..self.edge_copies[edge].len() {
            let ci = self.edge_copies[edge][i];
            self.copies[ci].unassigned -= 1;
        }
        let mut ok = true;
        for i in 0..self.edge_copies[edge].len() {
            let ci = self.edge_copies[edge][i];
            if self.copies[ci].unassigned == 0 && self.copy_canonical(ci) {
                ok = false;
                self.stats.prunings += 1;
                break;
            }
        }
        ok
    }

    fn unassign(&mut self, edge: usize) {
        self.assigned[edge] = None;
        for i in 0..self.edge_copies[edge].len() {
            let ci = self.edge_copies[edge][i];
            self.copies[ci].unassigned += 1;
        }
    }

    /// Forward check: copies through `edge` with a single uncoloured edge
    /// forbid list entries completing a canonical pattern.  Returns false if
    /// some domain empties.
    fn propagate(&mut self, edge: usize) -> bool {
        for i in 0..self.edge_copies[edge].len() {
            let ci = self.edge_copies[edge][i];
            if self.copies[ci].unassigned != 1 {
                continue;
            }
            let f = *self.copies[ci]
                .edge_idxs
                .iter()
                .find(|&&e| self.assigned[e].is_none())
                .expect("exactly one unassigned edge");
            for p in 0..self.dom_colours[f].len() {
                if !self.dom_active[f][p] {
                    continue;
                }
                let c = self.dom_colours[f][p];
                self.assigned[f] = Some(c);
                self.copies[ci].unassigned -= 1;
                let canonical = self.copy_canonical(ci);
                self.copies[ci].unassigned += 1;
                self.assigned[f] = None;
                if canonical {
                    self.dom_active[f][p] = false;
                    self.dom_count[f] -= 1;
                    self.trail.push((f, p));
                }
            }
            if self.dom_count[f] == 0 {
                self.stats.prunings += 1;
                return false;
            }
        }
        true
    }

    fn rewind(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (f, p) = self.trail.pop().unwrap();
            self.dom_active[f][p] = true;
            self.dom_count[f] += 1;
        }
    }

    /// Fail-first selection: the unassigned edge with the fewest remaining
    /// colours (forced edges first), ties to the most constrained.
    fn select_edge(&self) -> Option<usize> {
        let mut best: Option<((usize, usize, usize), usize)> = None;
        for e in 0..self.assigned.len() {
            if self.assigned[e].is_some() {
                continue;
            }
            let key = (
                self.dom_count[e],
                usize::MAX - self.edge_copies[e].len(),
                e,
            );
            if best.is_none_or(|(bk, _)| key < bk) {
                best = Some((key, e));
                if self.dom_count[e] <= 1 {
                    break;
                }
            }
        }
        best.map(|(_, e)| e)
    }

    /// List-constrained DFS; `root_domain` restricts the first branching
    /// edge's colours (colour-symmetry orbit representatives).
    fn dfs_lists(&mut self, depth: usize, root_domain: Option<&[u64]>) -> Result<StepOutcome> {
        let Some(edge) = self.select_edge() else {
            let cert = self.assigned.iter().map(|c| c.unwrap()).collect();
            return Ok(StepOutcome::Done(cert));
        };
        for p in 0..self.dom_colours[edge].len() {
            if !self.dom_active[edge][p] {
                continue;
            }
            let colour = self.dom_colours[edge][p];
            if let Some(allowed) = root_domain {
                if depth == 0 && !allowed.contains(&colour) {
                    continue;
                }
            }
            self.stats.nodes += 1;
            if self.stats.nodes > self.node_limit {
                return Err(Error::guard("solver search nodes", self.stats.nodes as u128, self.node_limit as u128));
            }
            let mark = self.trail.len();
            if self.assign(edge, colour) && self.propagate(edge) {
                match self.dfs_lists(depth + 1, root_domain)? {
                    StepOutcome::Done(cert) => return Ok(StepOutcome::Done(cert)),
                    StepOutcome::Exhausted => {}
                }
            }
            self.rewind(mark);
            self.unassign(edge);
        }
        Ok(StepOutcome::Exhausted)
    }

    /// Partition DFS (unbounded palette): colours are block indices assigned
    /// restricted-growth style along the edge order.
    fn dfs_partitions(&mut self, t: usize, max_used: u64) -> Result<StepOutcome> {
        if t == self.order.len() {
            let cert = self.assigned.iter().map(|c| c.unwrap()).collect();
            return Ok(StepOutcome::Done(cert));
        }
        let edge = self.order[t];
        let top = if t == 0 { 0 } else { max_used + 1 };
        for colour in 0..=top {
            self.stats.nodes += 1;
            if self.stats.nodes > self.node_limit {
                return Err(Error::guard("solver search nodes", self.stats.nodes as u128, self.node_limit as u128));
            }
            if self.assign(edge, colour) {
                let next_max = max_used.max(colour);
                match self.dfs_partitions(t + 1, next_max)? {
                    StepOutcome::Done(cert) => return Ok(StepOutcome::Done(cert)),
                    StepOutcome::Exhausted => {}
                }
            }
            self.unassign(edge);
        }
        Ok(StepOutcome::Exhausted)
    }
}

/// Colour permutations preserving every edge's list as a set give orbit
/// representatives for the first branching edge.
fn root_symmetry_domain(lists: &ListAssignment, root_edge: usize) -> Option<Vec<u64>> {
    let mut palette: Vec<u64> = lists
        .lists_iter()
        .flat_map(|l| l.iter().copied())
        .collect();
    palette.sort_unstable();
    palette.dedup();
    if palette.len() < 2 || palette.len() > 6 {
        return None;
    }
    let sets: Vec<HashSet<u64>> = lists
        .lists_iter()
        .map(|l| l.iter().copied().collect())
        .collect();
    let mut perms: Vec<HashMap<u64, u64>> = Vec::new();
    for image in palette.iter().copied().permutations(palette.len()) {
        let map: HashMap<u64, u64> = palette.iter().copied().zip(image).collect();
        if sets
            .iter()
            .all(|s| s.iter().all(|c| s.contains(&map[c])))
        {
            perms.push(map);
        }
    }
    if perms.len() <= 1 {
        return None;
    }
    // orbit minima over the root edge's distinct colours
    let root: Vec<u64> = {
        let mut cs = lists.list(root_edge).to_vec();
        cs.sort_unstable();
        cs.dedup();
        cs
    };
    let mut reps = Vec::new();
    for &c in &root {
        let orbit_min = perms.iter().map(|m| m[&c]).min().unwrap().min(c);
        if orbit_min == c {
            reps.push(c);
        }
    }
    Some(reps)
}

/// Complete search for a list-compatible colouring of the host with no
/// canonical copy of the pattern w.r.t. σ.
pub fn find_avoiding_colouring(inst: &AvoidanceInstance, guards: &Guards) -> Result<SolverResult> {
    inst.validate()?;
    let mut search = Search::new(
        &inst.host,
        &inst.pattern,
        &inst.sigma,
        Some(&inst.lists),
        guards,
    )?;
    let root_domain = search
        .select_edge()
        .and_then(|root| root_symmetry_domain(&inst.lists, root));
    let outcome = match search.dfs_lists(0, root_domain.as_deref())? {
        StepOutcome::Done(cert) => SolverOutcome::Found(Colouring::new(cert)),
        StepOutcome::Exhausted => SolverOutcome::NoneExists,
    };
    Ok(SolverResult {
        outcome,
        stats: search.stats,
    })
}

/// Representatives of vertex orderings of `h` up to right-composition with
/// automorphisms (equivalent orderings yield the same canonical copies).
pub fn orderings_up_to_aut(h: &KGraph) -> Result<Vec<VertexOrdering>> {
    let v = h.vertex_count();
    if v > 8 {
        return Err(Error::guard("ordering enumeration", (1..=v as u128).product(), 40320));
    }
    let autos: Vec<Vec<usize>> = automorphisms(h)?
        .into_iter()
        .map(|a| a.vertex_map().to_vec())
        .collect();
    let mut reps: Vec<Vec<usize>> = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    for ranks in (0..v).permutations(v) {
        let canon = autos
            .iter()
            .map(|a| (0..v).map(|x| ranks[a[x]]).collect::<Vec<usize>>())
            .min()
            .unwrap_or_else(|| ranks.clone());
        if seen.insert(canon.clone()) {
            reps.push(canon);
        }
    }
    reps.sort();
    reps.into_iter().map(VertexOrdering::from_ranks).collect()
}

/// All restricted growth strings of length `m` (colourings of an m-set up to
/// relabelling).
fn rgs_strings(m: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = vec![0u64; m];
    fn rec(cur: &mut Vec<u64>, i: usize, max_used: u64, out: &mut Vec<Vec<u64>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for c in 0..=max_used + 1 {
            cur[i] = c;
            rec(cur, i + 1, max_used.max(c), out);
        }
    }
    if m == 0 {
        return vec![Vec::new()];
    }
    cur[0] = 0;
    rec(&mut cur, 1, 0, &mut out);
    out
}

/// The colour patterns of E(h) (as restricted growth strings in edge order)
/// that make a copy canonical w.r.t. σ under some embedding.  Two orderings
/// with equal signatures pose identical avoidance problems on every host, and
/// a signature that contains another's is implied by it.
fn sigma_signature(h: &KGraph, sigma: &VertexOrdering) -> Result<std::collections::BTreeSet<Vec<u64>>> {
    let autos = automorphisms(h)?;
    let edge_maps: Vec<Vec<usize>> = autos
        .iter()
        .map(|a| {
            h.edges()
                .map(|e| h.edge_index(&a.image_edge(e)).expect("automorphism"))
                .collect()
        })
        .collect();
    let mut sig = std::collections::BTreeSet::new();
    for mu in rgs_strings(h.edge_count()) {
        let canonical = edge_maps.iter().any(|m| {
            let chi = Colouring::new(m.iter().map(|&j| mu[j]).collect());
            is_canonical(h, sigma, &chi).unwrap_or(false)
        });
        if canonical {
            sig.insert(mu);
        }
    }
    Ok(sig)
}

/// Ordering representatives whose constraint sets are minimal under
/// inclusion: every ordering's avoidance problem is implied by one of these,
/// so the ∀σ quantifier may range over them alone.
pub(crate) fn minimal_orderings(h: &KGraph) -> Result<Vec<VertexOrdering>> {
    let reps = orderings_up_to_aut(h)?;
    if h.edge_count() > 8 || reps.len() <= 1 {
        return Ok(reps);
    }
    let sigs: Vec<_> = reps
        .iter()
        .map(|s| sigma_signature(h, s))
        .collect::<Result<Vec<_>>>()?;
    let mut keep = Vec::new();
    'outer: for i in 0..reps.len() {
        for j in 0..reps.len() {
            if i == j {
                continue;
            }
            let strictly_smaller = sigs[j].is_subset(&sigs[i]) && sigs[j] != sigs[i];
            let duplicate = sigs[j] == sigs[i] && j < i;
            if strictly_smaller || duplicate {
                continue 'outer;
            }
        }
        keep.push(reps[i].clone());
    }
    Ok(keep)
}

/// Does every list-compatible colouring of `g` contain a canonical copy of
/// `h` for every ordering σ?
pub fn decide_canarrow_lists(
    g: &KGraph,
    h: &KGraph,
    lists: &ListAssignment,
    guards: &Guards,
) -> Result<bool> {
    for sigma in minimal_orderings(h)? {
        let inst = AvoidanceInstance {
            host: g.clone(),
            pattern: h.clone(),
            sigma,
            lists: lists.clone(),
        };
        if find_avoiding_colouring(&inst, guards)?.found().is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Does every edge colouring (arbitrary palette) of `g` contain a canonical
/// copy of `h` for every ordering σ?  Colourings are enumerated as set
/// partitions of E(g), pruned as they are refined.
pub fn decide_canarrow_unrestricted(g: &KGraph, h: &KGraph, guards: &Guards) -> Result<bool> {
    for sigma in minimal_orderings(h)? {
        let mut search = Search::new(g, h, &sigma, None, guards)?;
        match search.dfs_partitions(0, 0)? {
            StepOutcome::Done(_) => return Ok(false),
            StepOutcome::Exhausted => {}
        }
    }
    Ok(true)
}

/// A witness for the negative unrestricted decision: an ordering and a
/// colouring avoiding all canonical copies.
pub fn unrestricted_counterexample(
    g: &KGraph,
    h: &KGraph,
    guards: &Guards,
) -> Result<Option<(VertexOrdering, Colouring)>> {
    for sigma in minimal_orderings(h)? {
        let mut search = Search::new(g, h, &sigma, None, guards)?;
        if let StepOutcome::Done(cert) = search.dfs_partitions(0, 0)? {
            return Ok(Some((sigma, Colouring::new(cert))));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RamseyOutcome {
    /// Smallest n with K_n ⟶can H.
    Exact(usize),
    /// Undecided within the guard; the number (if it exists) exceeds every n
    /// below `lower_bound`.
    Unknown { lower_bound: usize },
}

/// Smallest n ≤ n_max such that K_n has the unrestricted canonical Ramsey
/// property w.r.t. `h`.
pub fn canonical_ramsey_number(h: &KGraph, n_max: usize, guards: &Guards) -> Result<RamseyOutcome> {
    let start = h.vertex_count().max(h.uniformity());
    for n in start..=n_max {
        let g = KGraph::complete(n, h.uniformity())?;
        match decide_canarrow_unrestricted(&g, h, guards) {
            Ok(true) => return Ok(RamseyOutcome::Exact(n)),
            Ok(false) => {}
            Err(e) if e.is_guard() => return Ok(RamseyOutcome::Unknown { lower_bound: n }),
            Err(e) => return Err(e),
        }
    }
    Ok(RamseyOutcome::Unknown {
        lower_bound: n_max + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle_graph, path_graph};
    use crate::patterns::count_canonical_copies;

    fn k(n: usize) -> KGraph {
        KGraph::complete(n, 2).unwrap()
    }

    /// Naive oracle: enumerate all compatible colourings.
    fn oracle_avoiding(
        g: &KGraph,
        h: &KGraph,
        sigma: &VertexOrdering,
        lists: &ListAssignment,
    ) -> Option<Colouring> {
        let e = g.edge_count();
        let mut slots = vec![0usize; e];
        loop {
            let chi = Colouring::new(
                (0..e).map(|i| lists.list(i)[slots[i]]).collect(),
            );
            if count_canonical_copies(g, &chi, h, sigma).unwrap() == 0 {
                return Some(chi);
            }
            let mut i = e;
            let mut advanced = false;
            while i > 0 {
                i -= 1;
                if slots[i] + 1 < lists.r() {
                    slots[i] += 1;
                    slots[i + 1..].iter_mut().for_each(|s| *s = 0);
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                return None;
            }
        }
    }

    #[test]
    fn path_host_trivially_avoidable() {
        let g = path_graph(3).unwrap();
        let h = k(3);
        let inst = AvoidanceInstance {
            host: g,
            pattern: h,
            sigma: VertexOrdering::natural(3),
            lists: ListAssignment::new(2, vec![vec![1, 2]; 2]).unwrap(),
        };
        let res = find_avoiding_colouring(&inst, &Guards::default()).unwrap();
        assert!(res.found().is_some());
    }

    #[test]
    fn triangle_with_two_colour_lists_unavoidable() {
        let g = k(3);
        let lists = ListAssignment::constant(&g, &[1, 2]).unwrap();
        let inst = AvoidanceInstance {
            host: g,
            pattern: k(3),
            sigma: VertexOrdering::natural(3),
            lists,
        };
        let res = find_avoiding_colouring(&inst, &Guards::default()).unwrap();
        assert!(res.found().is_none());
    }

    #[test]
    fn forced_monochromatic_k4() {
        let g = k(4);
        let lists = ListAssignment::constant(&g, &[5]).unwrap();
        let inst = AvoidanceInstance {
            host: g,
            pattern: k(3),
            sigma: VertexOrdering::natural(3),
            lists,
        };
        let res = find_avoiding_colouring(&inst, &Guards::default()).unwrap();
        assert!(res.found().is_none());
    }

    #[test]
    fn certificate_is_sound() {
        let g = k(4);
        let h = k(3);
        let lists = ListAssignment::constant(&g, &[1, 2, 3]).unwrap();
        for sigma in orderings_up_to_aut(&h).unwrap() {
            let inst = AvoidanceInstance {
                host: g.clone(),
                pattern: h.clone(),
                sigma: sigma.clone(),
                lists: lists.clone(),
            };
            let res = find_avoiding_colouring(&inst, &Guards::default()).unwrap();
            if let Some(chi) = res.found() {
                assert_eq!(count_canonical_copies(&g, chi, &h, &sigma).unwrap(), 0);
                for (i, &c) in chi.colours().iter().enumerate() {
                    assert!(lists.list(i).contains(&c));
                }
            }
        }
    }

    #[test]
    fn solver_matches_oracle_small() {
        let hosts = [k(3), k(4), cycle_graph(5).unwrap(), path_graph(5).unwrap()];
        let patterns = [k(3), path_graph(3).unwrap()];
        for g in &hosts {
            for h in &patterns {
                let lists = ListAssignment::constant(g, &[1, 2]).unwrap();
                for sigma in orderings_up_to_aut(h).unwrap() {
                    let inst = AvoidanceInstance {
                        host: g.clone(),
                        pattern: h.clone(),
                        sigma: sigma.clone(),
                        lists: lists.clone(),
                    };
                    let res = find_avoiding_colouring(&inst, &Guards::default()).unwrap();
                    assert_eq!(
                        res.found().is_some(),
                        oracle_avoiding(g, h, &sigma, &lists).is_some(),
                    );
                }
            }
        }
    }

    #[test]
    fn canarrow_lists_examples() {
        let g = k(3);
        let h = k(3);
        let lists12 = ListAssignment::constant(&g, &[1, 2]).unwrap();
        assert!(decide_canarrow_lists(&g, &h, &lists12, &Guards::default()).unwrap());
        let lists11 = ListAssignment::constant(&g, &[1, 1]).unwrap();
        assert!(decide_canarrow_lists(&g, &h, &lists11, &Guards::default()).unwrap());
        // no copy of K4 in K3
        let lists = ListAssignment::constant(&g, &[1, 2]).unwrap();
        assert!(!decide_canarrow_lists(&g, &k(4), &lists, &Guards::default()).unwrap());
    }

    #[test]
    fn unrestricted_triangle() {
        assert!(decide_canarrow_unrestricted(&k(3), &k(3), &Guards::default()).unwrap());
        // one edge cannot host a triangle
        let single = KGraph::new(2, 2, vec![vec![0, 1]]).unwrap();
        assert!(!decide_canarrow_unrestricted(&single, &k(3), &Guards::default()).unwrap());
    }

    #[test]
    fn unrestricted_c4_not_arrowing_itself() {
        let c4 = cycle_graph(4).unwrap();
        let cex = unrestricted_counterexample(&c4, &c4, &Guards::default()).unwrap();
        let (sigma, chi) = cex.expect("C4 does not arrow C4");
        assert_eq!(count_canonical_copies(&c4, &chi, &c4, &sigma).unwrap(), 0);
    }

    #[test]
    fn ramsey_number_of_triangle() {
        assert_eq!(
            canonical_ramsey_number(&k(3), 4, &Guards::default()).unwrap(),
            RamseyOutcome::Exact(3)
        );
    }

    #[test]
    fn ramsey_number_of_single_edge() {
        let h = KGraph::new(2, 2, vec![vec![0, 1]]).unwrap();
        assert_eq!(
            canonical_ramsey_number(&h, 4, &Guards::default()).unwrap(),
            RamseyOutcome::Exact(2)
        );
    }

    #[test]
    fn ordering_orbits_of_complete_graphs() {
        // all orderings of K_m are equivalent
        assert_eq!(orderings_up_to_aut(&k(4)).unwrap().len(), 1);
        // C4: 4!/|Aut| = 24/8 = 3
        assert_eq!(orderings_up_to_aut(&cycle_graph(4).unwrap()).unwrap().len(), 3);
    }

    #[test]
    fn list_monotonicity() {
        // none-exists for (1,2) lists implies none-exists for (1,1)
        let g = k(3);
        let h = k(3);
        let sigma = VertexOrdering::natural(3);
        let wide = ListAssignment::constant(&g, &[1, 2]).unwrap();
        let narrow = ListAssignment::constant(&g, &[1]).unwrap();
        let wide_res = find_avoiding_colouring(
            &AvoidanceInstance {
                host: g.clone(),
                pattern: h.clone(),
                sigma: sigma.clone(),
                lists: wide,
            },
            &Guards::default(),
        )
        .unwrap();
        let narrow_res = find_avoiding_colouring(
            &AvoidanceInstance {
                host: g,
                pattern: h,
                sigma,
                lists: narrow,
            },
            &Guards::default(),
        )
        .unwrap();
        if wide_res.found().is_none() {
            assert!(narrow_res.found().is_none());
        }
    }
}
