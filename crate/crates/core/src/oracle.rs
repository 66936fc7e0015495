//! Brute-force ground truth for small instances.
//!
//! Subsets of the edge set are explored in ascending mask order by a
//! depth-first search that decides the highest edge id first. Two cuts keep
//! the search tractable without changing its output: a branch is abandoned
//! when some already-decided edge can no longer be dominated, or when some
//! chosen edge has no neighbour left that could end up privately dominated
//! (domination counts only grow as the branch extends).

use thiserror::Error;

use crate::graph::{is_minimal_eds, EdgeSet, Graph};

/// Largest edge count the enumeration accepts by default.
pub const DEFAULT_MAX_EDGES: usize = 22;
/// Hard ceiling imposed by the 64-bit masks used internally.
pub const HARD_MAX_EDGES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance has {m} edges; the brute-force oracle is limited to {limit}")]
    InstanceTooLarge { m: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_edges: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_edges: DEFAULT_MAX_EDGES,
        }
    }
}

impl OracleConfig {
    pub fn with_max_edges(max_edges: usize) -> Self {
        OracleConfig { max_edges }
    }

    fn check(&self, g: &Graph) -> Result<(), OracleError> {
        let limit = self.max_edges.min(HARD_MAX_EDGES);
        if g.m() > limit {
            Err(OracleError::InstanceTooLarge { m: g.m(), limit })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// Largest size of a minimal edge dominating set.
    pub gamma_prime: usize,
    /// Smallest mask among the largest minimal edge dominating sets.
    pub witness: EdgeSet,
    pub count_minimal: u64,
}

struct Search<'g> {
    g: &'g Graph,
    /// Edges incident to either endpoint, including the edge itself.
    closed_nbhd: Vec<Vec<usize>>,
    /// Edges whose closed neighbourhood is fully decided once edge `i` is.
    settled_at: Vec<Vec<usize>>,
    deg: Vec<usize>,
    mask: u64,
}

impl<'g> Search<'g> {
    fn new(g: &'g Graph) -> Self {
        let m = g.m();
        let mut closed_nbhd = vec![Vec::new(); m];
        let mut settled_at = vec![Vec::new(); m];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let mut nb: Vec<usize> = g
                .adjacency(u)
                .iter()
                .chain(g.adjacency(v))
                .map(|&(_, f)| f)
                .collect();
            nb.sort_unstable();
            nb.dedup();
            // Decisions run from high ids to low, so the smallest id settles last.
            settled_at[nb[0]].push(e);
            closed_nbhd[e] = nb;
        }
        Search {
            g,
            closed_nbhd,
            settled_at,
            deg: vec![0; g.n()],
            mask: 0,
        }
    }

    fn count(&self, e: usize) -> usize {
        let (u, v) = self.g.edge(e);
        self.deg[u] + self.deg[v] - (self.mask >> e & 1) as usize
    }

    fn can_still_be_private(&self, f: usize) -> bool {
        self.closed_nbhd[f].iter().any(|&e| self.count(e) <= 1)
    }

    /// After including edge `e`, checks every chosen edge whose closed
    /// neighbourhood contains an edge whose count just grew.
    fn inclusion_ok(&self, e: usize) -> bool {
        let (u, v) = self.g.edge(e);
        for w in [u, v] {
            for &(x, _) in self.g.adjacency(w) {
                for &(_, f) in self.g.adjacency(x) {
                    if self.mask >> f & 1 == 1 && !self.can_still_be_private(f) {
                        return false;
                    }
                }
            }
            for &(_, f) in self.g.adjacency(w) {
                if self.mask >> f & 1 == 1 && !self.can_still_be_private(f) {
                    return false;
                }
            }
        }
        true
    }

    fn settled_ok(&self, i: usize) -> bool {
        self.settled_at[i].iter().all(|&e| self.count(e) > 0)
    }

    fn run(&mut self, next: usize, visit: &mut dyn FnMut(u64)) {
        if next == 0 {
            if self.final_check() {
                visit(self.mask);
            }
            return;
        }
        let i = next - 1;
        if self.settled_ok(i) {
            self.run(i, visit);
        }
        let (u, v) = self.g.edge(i);
        self.mask |= 1 << i;
        self.deg[u] += 1;
        self.deg[v] += 1;
        if self.inclusion_ok(i) && self.settled_ok(i) {
            self.run(i, visit);
        }
        self.mask &= !(1 << i);
        self.deg[u] -= 1;
        self.deg[v] -= 1;
    }

    fn final_check(&self) -> bool {
        let dominated = (0..self.g.m()).all(|e| self.count(e) > 0);
        dominated
            && (0..self.g.m())
                .filter(|&f| self.mask >> f & 1 == 1)
                .all(|f| self.closed_nbhd[f].iter().any(|&e| self.count(e) == 1))
    }
}

/// Calls `visit` with every minimal edge dominating set of `g`, once each,
/// in ascending mask order.
pub fn for_each_minimal_eds(
    g: &Graph,
    config: OracleConfig,
    mut visit: impl FnMut(&EdgeSet),
) -> Result<(), OracleError> {
    config.check(g)?;
    let m = g.m();
    if m == 0 {
        visit(&EdgeSet::empty(0));
        return Ok(());
    }
    let mut search = Search::new(g);
    search.run(m, &mut |mask| {
        let set = EdgeSet::from_mask(m, mask);
        debug_assert!(is_minimal_eds(g, &set));
        visit(&set)
    });
    Ok(())
}

/// All minimal edge dominating sets in ascending mask order.
pub fn enumerate_minimal_eds(g: &Graph, config: OracleConfig) -> Result<Vec<EdgeSet>, OracleError> {
    let mut out = Vec::new();
    for_each_minimal_eds(g, config, |s| out.push(s.clone()))?;
    Ok(out)
}

/// The upper edge domination number of `g` by exhaustive enumeration.
pub fn upper_eds_exact(g: &Graph, config: OracleConfig) -> Result<OracleResult, OracleError> {
    let mut best: Option<EdgeSet> = None;
    let mut count = 0u64;
    for_each_minimal_eds(g, config, |s| {
        count += 1;
        if best.as_ref().is_none_or(|b| s.len() > b.len()) {
            best = Some(s.clone());
        }
    })?;
    let witness = best.expect("every graph has a minimal edge dominating set");
    Ok(OracleResult {
        gamma_prime: witness.len(),
        witness,
        count_minimal: count,
    })
}

/// Whether `g` has a minimal edge dominating set of size at least `k`.
pub fn decide(g: &Graph, k: i64, config: OracleConfig) -> Result<bool, OracleError> {
    if k <= 0 {
        return Ok(true);
    }
    Ok(upper_eds_exact(g, config)?.gamma_prime as i64 >= k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::graph::is_edge_dominating;

    fn cfg() -> OracleConfig {
        OracleConfig::default()
    }

    /// Plain filter over all 2^m subsets, no pruning.
    fn naive(g: &Graph) -> Vec<EdgeSet> {
        (0u64..1 << g.m())
            .map(|mask| EdgeSet::from_mask(g.m(), mask))
            .filter(|s| is_minimal_eds(g, s))
            .collect()
    }

    #[test]
    fn enumerates_small_graphs() {
        let k2 = path(2);
        assert_eq!(enumerate_minimal_eds(&k2, cfg()).unwrap(), vec![EdgeSet::from_ids(1, [0])]);

        let k3 = complete(3);
        let all = enumerate_minimal_eds(&k3, cfg()).unwrap();
        assert_eq!(all.len(), 3);
        assert!(all.iter().all(|s| s.len() == 1));

        // P4 edges: 0 = 12, 1 = 23, 2 = 34.
        let p4 = path(4);
        assert_eq!(
            enumerate_minimal_eds(&p4, cfg()).unwrap(),
            vec![EdgeSet::from_ids(3, [1]), EdgeSet::from_ids(3, [0, 2])]
        );
    }

    #[test]
    fn pruned_search_matches_naive_filter() {
        let graphs = [
            path(6),
            cycle(6),
            star(4),
            complete(5),
            Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)]).unwrap(),
        ];
        for g in &graphs {
            assert_eq!(enumerate_minimal_eds(g, cfg()).unwrap(), naive(g), "{g:?}");
        }
    }

    #[test]
    fn named_values() {
        let p4 = upper_eds_exact(&path(4), cfg()).unwrap();
        assert_eq!(p4.gamma_prime, 2);
        assert_eq!(p4.witness, EdgeSet::from_ids(3, [0, 2]));
        for (g, want) in [
            (complete(3), 1),
            (star(3), 1),
            (cycle(4), 2),
            (cycle(5), 2),
            (path(2), 1),
        ] {
            assert_eq!(upper_eds_exact(&g, cfg()).unwrap().gamma_prime, want, "{g:?}");
        }
        let empty = upper_eds_exact(&Graph::new(5), cfg()).unwrap();
        assert_eq!(empty.gamma_prime, 0);
        assert!(empty.witness.is_empty());
        assert_eq!(empty.count_minimal, 1);
    }

    #[test]
    fn decisions() {
        let p4 = path(4);
        assert!(decide(&p4, 2, cfg()).unwrap());
        assert!(!decide(&p4, 3, cfg()).unwrap());
        assert!(decide(&complete(4), 0, cfg()).unwrap());
        assert!(decide(&complete(4), -3, cfg()).unwrap());
    }

    #[test]
    fn size_limit() {
        let k8 = complete(8);
        assert_eq!(
            upper_eds_exact(&k8, cfg()),
            Err(OracleError::InstanceTooLarge { m: 28, limit: 22 })
        );
        assert_eq!(upper_eds_exact(&k8, OracleConfig::with_max_edges(28)).unwrap().gamma_prime, 6);
        // A decision with k <= 0 needs no enumeration.
        assert_eq!(decide(&k8, 0, cfg()), Ok(true));
    }

    #[test]
    fn witnesses_are_dominating() {
        let g = cycle(7);
        let r = upper_eds_exact(&g, cfg()).unwrap();
        assert!(is_edge_dominating(&g, &r.witness));
        assert!(is_minimal_eds(&g, &r.witness));
    }
}
