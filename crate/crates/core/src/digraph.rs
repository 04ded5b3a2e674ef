//! Digraphs over dense vertex ids, clique partitions, paths and linkages.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {v} out of range (n = {n})")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(usize, usize),
}

/// Simple digraph on vertices `0..n`. No loops, no parallel edges; the two
/// opposite orientations of a pair may both be present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange { v: u, n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { v, n });
            }
            if u == v {
                return Err(GraphError::LoopEdge(u));
            }
            if !set.insert((u, v)) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
        }
        for &(u, v) in &set {
            out[u].push(v);
            inn[v].push(u);
        }
        // BTreeSet iteration leaves every adjacency list sorted ascending.
        Ok(Digraph { n, edges: set, out, inn })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    /// Edges in ascending `(tail, head)` order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn out_neighbors(&self, u: usize) -> &[usize] {
        &self.out[u]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inn[v]
    }

    /// Vertices reachable from `from`, including `from` itself.
    pub fn reachable(&self, from: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut queue = std::collections::VecDeque::new();
        seen[from] = true;
        queue.push_back(from);
        while let Some(u) = queue.pop_front() {
            for &v in &self.out[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("partition assigns {assigned} vertices, digraph has {expected}")]
    SizeMismatch { assigned: usize, expected: usize },
    #[error("vertex {v} carries clique id {id}, valid ids are 1..={c}")]
    IdOutOfRange { v: usize, id: usize, c: usize },
}

/// Pair of same-part vertices with no edge between them in either direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionViolation {
    pub u: usize,
    pub v: usize,
    pub clique: usize,
}

impl fmt::Display for PartitionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "vertices {} and {} share clique {} but neither edge is present",
            self.u, self.v, self.clique
        )
    }
}

/// Assignment of every vertex to one of the cliques `1..=c`. Parts may be
/// empty; that each part really is semicomplete is a property of a digraph,
/// checked by [`validate_clique_partition`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliquePartition {
    c: usize,
    assignment: Vec<usize>,
}

impl CliquePartition {
    pub fn new(c: usize, assignment: Vec<usize>) -> Result<Self, PartitionError> {
        for (v, &id) in assignment.iter().enumerate() {
            if id == 0 || id > c {
                return Err(PartitionError::IdOutOfRange { v, id, c });
            }
        }
        Ok(CliquePartition { c, assignment })
    }

    pub fn clique_count(&self) -> usize {
        self.c
    }

    pub fn vertex_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn clique_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Vertices of clique `id`, ascending.
    pub fn members(&self, id: usize) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&v| self.assignment[v] == id).collect()
    }
}

/// Checks that every same-part pair is joined in at least one direction.
/// Reports the first offending pair in lexicographic `(u, v)` order.
pub fn validate_clique_partition(
    digraph: &Digraph,
    partition: &CliquePartition,
) -> Result<Result<(), PartitionViolation>, PartitionError> {
    let n = digraph.vertex_count();
    if partition.vertex_count() != n {
        return Err(PartitionError::SizeMismatch {
            assigned: partition.vertex_count(),
            expected: n,
        });
    }
    for u in 0..n {
        for v in u + 1..n {
            if partition.clique_of(u) == partition.clique_of(v)
                && !digraph.has_edge(u, v)
                && !digraph.has_edge(v, u)
            {
                return Ok(Err(PartitionViolation { u, v, clique: partition.clique_of(u) }));
            }
        }
    }
    Ok(Ok(()))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("a path needs at least one vertex")]
    Empty,
    #[error("vertex {0} repeats")]
    RepeatedVertex(usize),
}

/// Directed path as its vertex sequence. Vertices are distinct; whether the
/// consecutive pairs are edges is relative to a digraph and checked by
/// [`DiPath::is_path_of`] or [`validate_linkage`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiPath {
    vertices: Vec<usize>,
}

impl DiPath {
    pub fn new(vertices: Vec<usize>) -> Result<Self, PathError> {
        if vertices.is_empty() {
            return Err(PathError::Empty);
        }
        let mut seen = BTreeSet::new();
        for &v in &vertices {
            if !seen.insert(v) {
                return Err(PathError::RepeatedVertex(v));
            }
        }
        Ok(DiPath { vertices })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> usize {
        self.vertices[0]
    }

    pub fn last(&self) -> usize {
        *self.vertices.last().unwrap()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.vertices.iter().position(|&u| u == v)
    }

    /// Consecutive vertex pairs in path direction.
    pub fn steps(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn is_path_of(&self, digraph: &Digraph) -> bool {
        self.vertices.iter().all(|&v| v < digraph.vertex_count())
            && self.steps().all(|(u, v)| digraph.has_edge(u, v))
    }

    /// Contiguous subpath over `range` positions.
    pub fn slice(&self, range: std::ops::Range<usize>) -> DiPath {
        DiPath { vertices: self.vertices[range].to_vec() }
    }
}

/// True iff no edge of the digraph jumps forward along the path: there is no
/// `vertices[a] -> vertices[b]` edge with `b > a + 1`. Backward edges are
/// permitted.
pub fn is_minimal_path(digraph: &Digraph, path: &DiPath) -> bool {
    let vs = path.vertices();
    for a in 0..vs.len() {
        for b in a + 2..vs.len() {
            if digraph.has_edge(vs[a], vs[b]) {
                return false;
            }
        }
    }
    true
}

/// Ordered collection of paths, one per terminal pair once bound to an
/// instance. Pairwise disjointness is checked by [`validate_linkage`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Linkage {
    members: Vec<DiPath>,
}

impl Linkage {
    pub fn new(members: Vec<DiPath>) -> Self {
        assert!(!members.is_empty(), "a linkage has at least one member");
        Linkage { members }
    }

    pub fn members(&self) -> &[DiPath] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &DiPath {
        &self.members[i]
    }

    pub fn member_count(&self) -> usize {
        self.members.len()
    }

    pub fn total_vertices(&self) -> usize {
        self.members.iter().map(DiPath::len).sum()
    }

    pub fn vertex_set(&self) -> BTreeSet<usize> {
        self.members.iter().flat_map(|p| p.vertices().iter().copied()).collect()
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.members.iter().any(|p| p.contains(v))
    }
}

/// First defect found when checking a linkage against an instance, in member
/// order: repeated vertex, then missing edge, then endpoint mismatch, then
/// pairwise overlaps in `(i, j)` order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinkageDefect {
    MemberCount { expected: usize, found: usize },
    RepeatVertex { member: usize, vertex: usize },
    BadEdge { member: usize, from: usize, to: usize },
    EndpointMismatch { member: usize, expected: (usize, usize), found: (usize, usize) },
    Overlap { first: usize, second: usize, vertex: usize },
}

impl fmt::Display for LinkageDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkageDefect::MemberCount { expected, found } => {
                write!(f, "expected {expected} members, found {found}")
            }
            LinkageDefect::RepeatVertex { member, vertex } => {
                write!(f, "member {member} repeats vertex {vertex}")
            }
            LinkageDefect::BadEdge { member, from, to } => {
                write!(f, "member {member} uses absent edge {from} -> {to}")
            }
            LinkageDefect::EndpointMismatch { member, expected, found } => write!(
                f,
                "member {member} runs {} -> {}, pair demands {} -> {}",
                found.0, found.1, expected.0, expected.1
            ),
            LinkageDefect::Overlap { first, second, vertex } => {
                write!(f, "members {first} and {second} share vertex {vertex}")
            }
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("part is not semicomplete: {0}")]
    NotSemicomplete(PartitionViolation),
    #[error("an instance needs at least one terminal pair")]
    NoPairs,
    #[error("terminal {0} out of range")]
    TerminalOutOfRange(usize),
    #[error("terminal {0} appears twice across the pairs")]
    TerminalRepeated(usize),
}

/// A clique-partitioned digraph together with `k` terminal pairs
/// `(s_i, t_i)`. All `2k` terminals are pairwise distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemInstance {
    digraph: Digraph,
    partition: CliquePartition,
    pairs: Vec<(usize, usize)>,
}

impl ProblemInstance {
    pub fn new(
        digraph: Digraph,
        partition: CliquePartition,
        pairs: Vec<(usize, usize)>,
    ) -> Result<Self, InstanceError> {
        if pairs.is_empty() {
            return Err(InstanceError::NoPairs);
        }
        let n = digraph.vertex_count();
        let mut seen = BTreeSet::new();
        for &(s, t) in &pairs {
            for v in [s, t] {
                if v >= n {
                    return Err(InstanceError::TerminalOutOfRange(v));
                }
                if !seen.insert(v) {
                    return Err(InstanceError::TerminalRepeated(v));
                }
            }
        }
        match validate_clique_partition(&digraph, &partition)? {
            Ok(()) => {}
            Err(violation) => return Err(InstanceError::NotSemicomplete(violation)),
        }
        Ok(ProblemInstance { digraph, partition, pairs })
    }

    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    pub fn partition(&self) -> &CliquePartition {
        &self.partition
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn source(&self, i: usize) -> usize {
        self.pairs[i].0
    }

    pub fn sink(&self, i: usize) -> usize {
        self.pairs[i].1
    }

    pub fn sources(&self) -> BTreeSet<usize> {
        self.pairs.iter().map(|&(s, _)| s).collect()
    }

    pub fn sinks(&self) -> BTreeSet<usize> {
        self.pairs.iter().map(|&(_, t)| t).collect()
    }

    pub fn is_terminal(&self, v: usize) -> bool {
        self.pairs.iter().any(|&(s, t)| s == v || t == v)
    }
}

/// Checks that `linkage` solves `instance`: one member per pair, every member
/// a real path from `s_i` to `t_i`, members pairwise vertex-disjoint.
pub fn validate_linkage(
    instance: &ProblemInstance,
    linkage: &Linkage,
) -> Result<(), LinkageDefect> {
    let k = instance.pair_count();
    if linkage.member_count() != k {
        return Err(LinkageDefect::MemberCount { expected: k, found: linkage.member_count() });
    }
    for (i, member) in linkage.members().iter().enumerate() {
        let mut seen = BTreeSet::new();
        for &v in member.vertices() {
            if !seen.insert(v) {
                return Err(LinkageDefect::RepeatVertex { member: i, vertex: v });
            }
        }
        for (u, v) in member.steps() {
            if !instance.digraph().has_edge(u, v) {
                return Err(LinkageDefect::BadEdge { member: i, from: u, to: v });
            }
        }
        let expected = instance.pairs()[i];
        let found = (member.first(), member.last());
        if expected != found {
            return Err(LinkageDefect::EndpointMismatch { member: i, expected, found });
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            let shared = linkage
                .member(i)
                .vertices()
                .iter()
                .filter(|v| linkage.member(j).contains(**v))
                .min()
                .copied();
            if let Some(vertex) = shared {
                return Err(LinkageDefect::Overlap { first: i, second: j, vertex });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 3-cycle tournament, one clique, one pair 0 -> 2.
    pub(crate) fn t1() -> ProblemInstance {
        let g = Digraph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let p = CliquePartition::new(1, vec![1, 1, 1]).unwrap();
        ProblemInstance::new(g, p, vec![(0, 2)]).unwrap()
    }

    #[test]
    fn digraph_rejects_loops_duplicates_range() {
        assert_eq!(Digraph::new(2, [(0, 0)]).unwrap_err(), GraphError::LoopEdge(0));
        assert_eq!(
            Digraph::new(2, [(0, 1), (0, 1)]).unwrap_err(),
            GraphError::DuplicateEdge(0, 1)
        );
        assert_eq!(
            Digraph::new(2, [(0, 2)]).unwrap_err(),
            GraphError::VertexOutOfRange { v: 2, n: 2 }
        );
    }

    #[test]
    fn opposite_orientations_coexist() {
        let g = Digraph::new(2, [(0, 1), (1, 0)]).unwrap();
        assert!(g.has_edge(0, 1) && g.has_edge(1, 0));
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn partition_flags_first_missing_pair() {
        let g = Digraph::new(3, [(0, 1)]).unwrap();
        let p = CliquePartition::new(1, vec![1, 1, 1]).unwrap();
        let violation = validate_clique_partition(&g, &p).unwrap().unwrap_err();
        assert_eq!(violation, PartitionViolation { u: 0, v: 2, clique: 1 });
    }

    #[test]
    fn partition_accepts_singleton_parts() {
        let g = Digraph::new(3, []).unwrap();
        let p = CliquePartition::new(3, vec![1, 2, 3]).unwrap();
        assert_eq!(validate_clique_partition(&g, &p).unwrap(), Ok(()));
    }

    #[test]
    fn partition_allows_empty_parts() {
        let g = Digraph::new(2, [(0, 1)]).unwrap();
        let p = CliquePartition::new(5, vec![2, 2]).unwrap();
        assert_eq!(validate_clique_partition(&g, &p).unwrap(), Ok(()));
        assert!(p.members(1).is_empty());
    }

    #[test]
    fn path_rejects_repeats() {
        assert_eq!(DiPath::new(vec![0, 1, 0]).unwrap_err(), PathError::RepeatedVertex(0));
        assert_eq!(DiPath::new(vec![]).unwrap_err(), PathError::Empty);
    }

    #[test]
    fn t1_linkage_valid_and_minimal() {
        let inst = t1();
        let l = Linkage::new(vec![DiPath::new(vec![0, 1, 2]).unwrap()]);
        assert_eq!(validate_linkage(&inst, &l), Ok(()));
        assert!(is_minimal_path(inst.digraph(), l.member(0)));
    }

    #[test]
    fn bad_edge_reported() {
        let inst = t1();
        let l = Linkage::new(vec![DiPath::new(vec![0, 2]).unwrap()]);
        assert_eq!(
            validate_linkage(&inst, &l),
            Err(LinkageDefect::BadEdge { member: 0, from: 0, to: 2 })
        );
    }

    #[test]
    fn overlap_reported() {
        let g = Digraph::new(6, [(0, 3), (3, 1), (2, 3), (3, 4), (4, 5)]).unwrap();
        let p = CliquePartition::new(6, vec![1, 2, 3, 4, 5, 6]).unwrap();
        let inst = ProblemInstance::new(g, p, vec![(0, 1), (2, 5)]).unwrap();
        let l = Linkage::new(vec![
            DiPath::new(vec![0, 3, 1]).unwrap(),
            DiPath::new(vec![2, 3, 4, 5]).unwrap(),
        ]);
        assert_eq!(
            validate_linkage(&inst, &l),
            Err(LinkageDefect::Overlap { first: 0, second: 1, vertex: 3 })
        );
    }

    #[test]
    fn shortcut_breaks_minimality() {
        let g = Digraph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let path = DiPath::new(vec![0, 1, 2]).unwrap();
        assert!(!is_minimal_path(&g, &path));
        // The backward edge 2 -> 0 does not break minimality.
        let g = Digraph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(is_minimal_path(&g, &path));
    }

    #[test]
    fn instance_rejects_shared_terminals() {
        let g = Digraph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let p = CliquePartition::new(1, vec![1, 1, 1]).unwrap();
        assert_eq!(
            ProblemInstance::new(g, p, vec![(0, 1), (1, 2)]).unwrap_err(),
            InstanceError::TerminalRepeated(1)
        );
    }

    #[test]
    fn instance_rejects_non_semicomplete_part() {
        let g = Digraph::new(3, [(0, 1)]).unwrap();
        let p = CliquePartition::new(1, vec![1, 1, 1]).unwrap();
        let err = ProblemInstance::new(g, p, vec![(0, 1)]).unwrap_err();
        assert_eq!(
            err,
            InstanceError::NotSemicomplete(PartitionViolation { u: 0, v: 2, clique: 1 })
        );
    }

    #[test]
    fn reachability_walks_edges() {
        let g = Digraph::new(4, [(0, 1), (1, 2)]).unwrap();
        let r = g.reachable(0);
        assert_eq!(r, vec![true, true, true, false]);
    }
}
