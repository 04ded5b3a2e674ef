//! Ground-truth search: exhaustive backtracking over disjoint path systems.
//!
//! Paths are grown member by member in pair order, neighbors tried in
//! ascending id, so results and enumeration order are deterministic. Sizes
//! are minimized by iterative deepening on the total vertex count, which
//! makes the first linkage found the lexicographically smallest one (by
//! concatenated vertex sequence) among the minimum-size solutions.

use thiserror::Error;

use crate::digraph::{DiPath, Linkage, ProblemInstance};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchLimits {
    /// Cap on vertex-placement attempts; `None` is unlimited. Exceeding the
    /// cap aborts with [`BudgetExceeded`] so "no linkage found" is never
    /// conflated with "search gave up".
    pub max_nodes: Option<u64>,
}

impl SearchLimits {
    pub fn unbounded() -> Self {
        SearchLimits { max_nodes: None }
    }

    pub fn nodes(max_nodes: u64) -> Self {
        SearchLimits { max_nodes: Some(max_nodes) }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("search budget exhausted after {nodes} nodes")]
pub struct BudgetExceeded {
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub feasible: bool,
    /// `Some` only when the call minimized; `exists_linkage` leaves it unset.
    pub min_total_vertices: Option<usize>,
    /// Present iff feasible. Equals the minimum witness for minimizing calls.
    pub witness: Option<Linkage>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimumEnumeration {
    /// All minimum linkages in ascending concatenated-sequence order, up to
    /// the cap.
    pub linkages: Vec<Linkage>,
    pub truncated: bool,
}

enum Walk {
    Continue,
    Stop,
}

struct Search<'a> {
    inst: &'a ProblemInstance,
    used: Vec<bool>,
    members: Vec<Vec<usize>>,
    used_count: usize,
    bound: usize,
    nodes: u64,
    max_nodes: u64,
}

type Emit<'f> = &'f mut dyn FnMut(&[Vec<usize>]) -> Walk;

impl<'a> Search<'a> {
    fn new(inst: &'a ProblemInstance, bound: usize, limits: SearchLimits, spent: u64) -> Self {
        Search {
            inst,
            used: vec![false; inst.digraph().vertex_count()],
            members: Vec::with_capacity(inst.pair_count()),
            used_count: 0,
            bound,
            nodes: spent,
            max_nodes: limits.max_nodes.unwrap_or(u64::MAX),
        }
    }

    fn spend(&mut self) -> Result<(), BudgetExceeded> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(BudgetExceeded { nodes: self.nodes });
        }
        Ok(())
    }

    /// Vertices a growing member may still enter: unused, and never a
    /// terminal of another pair (that terminal's member must keep it).
    fn admissible(&self, i: usize, w: usize) -> bool {
        !self.used[w] && (!self.inst.is_terminal(w) || w == self.inst.sink(i))
    }

    fn start_member(&mut self, i: usize, emit: Emit) -> Result<Walk, BudgetExceeded> {
        if i == self.inst.pair_count() {
            return Ok(emit(&self.members));
        }
        let s = self.inst.source(i);
        debug_assert!(!self.used[s], "terminals are never consumed by other members");
        if self.used_count + 2 + 2 * (self.inst.pair_count() - i - 1) > self.bound {
            return Ok(Walk::Continue);
        }
        self.spend()?;
        self.used[s] = true;
        self.used_count += 1;
        self.members.push(vec![s]);
        let walk = self.grow(i, emit)?;
        self.members.pop();
        self.used[s] = false;
        self.used_count -= 1;
        Ok(walk)
    }

    fn grow(&mut self, i: usize, emit: Emit) -> Result<Walk, BudgetExceeded> {
        let v = *self.members[i].last().unwrap();
        if v == self.inst.sink(i) {
            return self.start_member(i + 1, emit);
        }
        let neighbors: Vec<usize> = self.inst.digraph().out_neighbors(v).to_vec();
        for w in neighbors {
            if !self.admissible(i, w) {
                continue;
            }
            let still_needed =
                usize::from(w != self.inst.sink(i)) + 2 * (self.inst.pair_count() - i - 1);
            if self.used_count + 1 + still_needed > self.bound {
                continue;
            }
            self.spend()?;
            self.used[w] = true;
            self.used_count += 1;
            self.members[i].push(w);
            let walk = self.grow(i, emit)?;
            self.members[i].pop();
            self.used[w] = false;
            self.used_count -= 1;
            if let Walk::Stop = walk {
                return Ok(Walk::Stop);
            }
        }
        Ok(Walk::Continue)
    }
}

fn to_linkage(members: &[Vec<usize>]) -> Linkage {
    Linkage::new(
        members
            .iter()
            .map(|vs| DiPath::new(vs.clone()).expect("search paths have distinct vertices"))
            .collect(),
    )
}

/// Decides feasibility. The witness is the first linkage the deterministic
/// search meets, not necessarily a minimum one.
pub fn exists_linkage(
    inst: &ProblemInstance,
    limits: SearchLimits,
) -> Result<OracleResult, BudgetExceeded> {
    let mut witness = None;
    let mut search = Search::new(inst, usize::MAX, limits, 0);
    search.start_member(0, &mut |members| {
        witness = Some(to_linkage(members));
        Walk::Stop
    })?;
    Ok(OracleResult { feasible: witness.is_some(), min_total_vertices: None, witness })
}

/// Finds a linkage minimizing the total vertex count, ties broken towards
/// the lexicographically smallest concatenated vertex sequence. The node
/// budget spans the whole deepening loop.
pub fn minimum_linkage(
    inst: &ProblemInstance,
    limits: SearchLimits,
) -> Result<OracleResult, BudgetExceeded> {
    let k = inst.pair_count();
    let n = inst.digraph().vertex_count();
    let mut spent = 0;
    for bound in 2 * k..=n {
        let mut witness = None;
        let mut search = Search::new(inst, bound, limits, spent);
        search.start_member(0, &mut |members| {
            witness = Some(to_linkage(members));
            Walk::Stop
        })?;
        spent = search.nodes;
        if let Some(witness) = witness {
            return Ok(OracleResult {
                feasible: true,
                min_total_vertices: Some(witness.total_vertices()),
                witness: Some(witness),
            });
        }
    }
    Ok(OracleResult { feasible: false, min_total_vertices: None, witness: None })
}

/// Collects every minimum linkage in deterministic order, stopping (and
/// flagging truncation) once `cap` of them are gathered. An infeasible
/// instance yields an empty, untruncated enumeration.
pub fn enumerate_minimum_linkages(
    inst: &ProblemInstance,
    cap: usize,
    limits: SearchLimits,
) -> Result<MinimumEnumeration, BudgetExceeded> {
    let minimum = minimum_linkage(inst, limits)?;
    let Some(bound) = minimum.min_total_vertices else {
        return Ok(MinimumEnumeration { linkages: Vec::new(), truncated: false });
    };
    let mut linkages = Vec::new();
    let mut truncated = false;
    let mut search = Search::new(inst, bound, limits, 0);
    search.start_member(0, &mut |members| {
        if linkages.len() == cap {
            truncated = true;
            return Walk::Stop;
        }
        linkages.push(to_linkage(members));
        Walk::Continue
    })?;
    Ok(MinimumEnumeration { linkages, truncated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{validate_linkage, CliquePartition, Digraph};

    fn instance(
        n: usize,
        edges: &[(usize, usize)],
        cliques: Vec<usize>,
        c: usize,
        pairs: Vec<(usize, usize)>,
    ) -> ProblemInstance {
        let g = Digraph::new(n, edges.iter().copied()).unwrap();
        let p = CliquePartition::new(c, cliques).unwrap();
        ProblemInstance::new(g, p, pairs).unwrap()
    }

    fn t1() -> ProblemInstance {
        instance(3, &[(0, 1), (1, 2), (2, 0)], vec![1, 1, 1], 1, vec![(0, 2)])
    }

    #[test]
    fn t1_minimum_is_the_three_cycle_path() {
        let result = minimum_linkage(&t1(), SearchLimits::unbounded()).unwrap();
        assert!(result.feasible);
        assert_eq!(result.min_total_vertices, Some(3));
        let witness = result.witness.unwrap();
        assert_eq!(witness.member(0).vertices(), &[0, 1, 2]);
        assert_eq!(validate_linkage(&t1(), &witness), Ok(()));
    }

    #[test]
    fn t1_minimum_is_unique() {
        let en = enumerate_minimum_linkages(&t1(), 10, SearchLimits::unbounded()).unwrap();
        assert_eq!(en.linkages.len(), 1);
        assert!(!en.truncated);
    }

    #[test]
    fn unreachable_sink_is_infeasible() {
        let inst =
            instance(3, &[(0, 1), (2, 1), (2, 0)], vec![1, 2, 3], 3, vec![(0, 2)]);
        let result = minimum_linkage(&inst, SearchLimits::unbounded()).unwrap();
        assert!(!result.feasible);
        assert!(result.witness.is_none());
    }

    #[test]
    fn parallel_routes_enumerate_and_truncate() {
        // Two internally disjoint 0 -> 3 routes of equal size.
        let inst = instance(
            4,
            &[(0, 1), (1, 3), (0, 2), (2, 3)],
            vec![1, 2, 3, 4],
            4,
            vec![(0, 3)],
        );
        let en = enumerate_minimum_linkages(&inst, 10, SearchLimits::unbounded()).unwrap();
        assert_eq!(en.linkages.len(), 2);
        assert!(!en.truncated);
        let capped = enumerate_minimum_linkages(&inst, 1, SearchLimits::unbounded()).unwrap();
        assert_eq!(capped.linkages.len(), 1);
        assert!(capped.truncated);
    }

    #[test]
    fn tie_break_prefers_smaller_concatenated_sequence() {
        let inst = instance(
            4,
            &[(0, 2), (2, 3), (0, 1), (1, 3)],
            vec![1, 2, 3, 4],
            4,
            vec![(0, 3)],
        );
        let result = minimum_linkage(&inst, SearchLimits::unbounded()).unwrap();
        assert_eq!(result.witness.unwrap().member(0).vertices(), &[0, 1, 3]);
    }

    #[test]
    fn disjointness_forces_longer_member() {
        // Pair 1 must avoid vertex 1 (taken by pair 0), so it detours.
        let inst = instance(
            6,
            &[(0, 1), (1, 2), (3, 1), (3, 4), (4, 5), (5, 1)],
            vec![1, 2, 3, 4, 5, 6],
            6,
            vec![(0, 2), (3, 5)],
        );
        let result = minimum_linkage(&inst, SearchLimits::unbounded()).unwrap();
        assert!(result.feasible);
        let witness = result.witness.unwrap();
        assert_eq!(witness.member(0).vertices(), &[0, 1, 2]);
        assert_eq!(witness.member(1).vertices(), &[3, 4, 5]);
        assert_eq!(result.min_total_vertices, Some(6));
    }

    #[test]
    fn budget_aborts_with_error() {
        let err = minimum_linkage(&t1(), SearchLimits::nodes(1)).unwrap_err();
        assert!(err.nodes > 1);
    }

    #[test]
    fn two_vertex_member_is_found() {
        let inst = instance(2, &[(0, 1)], vec![1, 2], 2, vec![(0, 1)]);
        let result = minimum_linkage(&inst, SearchLimits::unbounded()).unwrap();
        assert_eq!(result.min_total_vertices, Some(2));
    }

    #[test]
    fn terminals_of_other_pairs_are_never_intermediates() {
        // The only 0 -> 2 route passes through 3 = s_2, so pair 0 has no
        // member disjoint from pair 1's.
        let inst = instance(
            5,
            &[(0, 3), (3, 2), (3, 4)],
            vec![1, 2, 3, 4, 5],
            5,
            vec![(0, 2), (3, 4)],
        );
        let result = exists_linkage(&inst, SearchLimits::unbounded()).unwrap();
        assert!(!result.feasible);
    }
}
