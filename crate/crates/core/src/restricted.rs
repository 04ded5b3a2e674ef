//! Witnessed restricted vertex sets and the cut history of an enumeration:
//! sequence families with their forward and backward closure operators, the
//! per-stage cut data built from a linkage, the separation checks, and a
//! canonical enumeration of all witnessable sets for small parameters.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::digraph::{CliquePartition, Digraph, DiPath, Linkage, ProblemInstance};
use crate::params::Parameters;
use crate::structure::CutState;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SequenceError {
    #[error("sequence has no terms")]
    Empty,
    #[error("sequence has {len} terms, allowed at most {bound}")]
    TooLong { len: usize, bound: usize },
    #[error("term {0} repeats")]
    Repeated(usize),
    #[error("term {0} is no vertex of the partition")]
    OutOfRange(usize),
    #[error("terms {0} and {1} sit in different cliques")]
    CliqueMismatch(usize, usize),
}

/// Ordered list of distinct vertices of one clique, at most `s` of them.
/// The closure operators read only the term set and the endpoints, so the
/// spelled-out order is a presentation choice.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct VertexSequence {
    terms: Vec<usize>,
    clique: usize,
}

impl VertexSequence {
    pub fn new(
        terms: Vec<usize>,
        partition: &CliquePartition,
        s: usize,
    ) -> Result<Self, SequenceError> {
        if terms.is_empty() {
            return Err(SequenceError::Empty);
        }
        if terms.len() > s {
            return Err(SequenceError::TooLong { len: terms.len(), bound: s });
        }
        let mut seen = BTreeSet::new();
        for &v in &terms {
            if v >= partition.vertex_count() {
                return Err(SequenceError::OutOfRange(v));
            }
            if !seen.insert(v) {
                return Err(SequenceError::Repeated(v));
            }
        }
        let clique = partition.clique_of(terms[0]);
        for &v in &terms[1..] {
            if partition.clique_of(v) != clique {
                return Err(SequenceError::CliqueMismatch(terms[0], v));
            }
        }
        Ok(VertexSequence { terms, clique })
    }

    pub fn terms(&self) -> &[usize] {
        &self.terms
    }

    pub fn clique(&self) -> usize {
        self.clique
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: usize) -> bool {
        self.terms.contains(&v)
    }
}

impl fmt::Display for VertexSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Deduplicated set of sequences; the r bound is checked where it matters,
/// at witness verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceFamily {
    members: Vec<VertexSequence>,
}

impl SequenceFamily {
    pub fn new(mut members: Vec<VertexSequence>) -> Self {
        members.sort();
        members.dedup();
        SequenceFamily { members }
    }

    pub fn empty() -> Self {
        SequenceFamily { members: Vec::new() }
    }

    pub fn members(&self) -> &[VertexSequence] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Vertices v sharing a clique with some family sequence X and either lying
/// on X, or, when X has exactly `s` terms, receiving an edge from every term
/// but the first.
pub fn family_plus(
    digraph: &Digraph,
    partition: &CliquePartition,
    family: &SequenceFamily,
    s: usize,
) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for seq in family.members() {
        for v in partition.members(seq.clique()) {
            if seq.contains(v) {
                out.insert(v);
            } else if seq.len() == s
                && seq.terms()[1..].iter().all(|&u| digraph.has_edge(u, v))
            {
                out.insert(v);
            }
        }
    }
    out
}

/// Mirror of [`family_plus`]: v must send an edge to every term but the
/// last of an exactly-`s`-term sequence.
pub fn family_minus(
    digraph: &Digraph,
    partition: &CliquePartition,
    family: &SequenceFamily,
    s: usize,
) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for seq in family.members() {
        for v in partition.members(seq.clique()) {
            if seq.contains(v) {
                out.insert(v);
            } else if seq.len() == s
                && seq.terms()[..seq.len() - 1].iter().all(|&u| digraph.has_edge(v, u))
            {
                out.insert(v);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceEnd {
    First,
    Last,
}

/// The first (or last) up-to-`s` vertices of `path` inside clique
/// `clique_id`, in path order; `None` when the path misses the clique.
pub fn up_to_s_sequence(
    path: &DiPath,
    partition: &CliquePartition,
    clique_id: usize,
    s: usize,
    end: SequenceEnd,
) -> Option<VertexSequence> {
    let in_clique: Vec<usize> = path
        .vertices()
        .iter()
        .copied()
        .filter(|&v| partition.clique_of(v) == clique_id)
        .collect();
    if in_clique.is_empty() {
        return None;
    }
    let take = s.min(in_clique.len());
    let terms = match end {
        SequenceEnd::First => in_clique[..take].to_vec(),
        SequenceEnd::Last => in_clique[in_clique.len() - take..].to_vec(),
    };
    Some(VertexSequence::new(terms, partition, s).expect("clique slice of a path"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilySide {
    A,
    B,
}

impl fmt::Display for FamilySide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySide::A => write!(f, "A-side"),
            FamilySide::B => write!(f, "B-side"),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RestrictednessViolation {
    #[error("{side} sequence has {len} terms, allowed at most {bound}")]
    SequenceTooLong { side: FamilySide, len: usize, bound: usize },
    #[error("{side} family has {size} sequences, allowed at most {bound}")]
    FamilyTooLarge { side: FamilySide, size: usize, bound: usize },
    #[error("closure overlap has {size} vertices, allowed at most {bound}")]
    OverlapTooLarge { size: usize, bound: usize },
    #[error("forced vertex {vertex} is missing from D")]
    CoreVertexMissing { vertex: usize },
    #[error("vertex {vertex} of D lies outside the forward closure")]
    OutsidePlus { vertex: usize },
    #[error("slack vertex {vertex} lies outside the closure overlap")]
    SlackOutsideOverlap { vertex: usize },
    #[error("D differs from forced-plus-slack at vertex {vertex}")]
    CompositionMismatch { vertex: usize },
}

/// Vertex set D together with the generator witness (𝒜, ℬ, S) that proves
/// it sits between ℬ⁺ ∖ 𝒜⁻ and ℬ⁺ with small families and small overlap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedSet {
    d: BTreeSet<usize>,
    a_family: SequenceFamily,
    b_family: SequenceFamily,
    slack: BTreeSet<usize>,
}

impl RestrictedSet {
    pub fn new(
        d: BTreeSet<usize>,
        a_family: SequenceFamily,
        b_family: SequenceFamily,
        slack: BTreeSet<usize>,
    ) -> Self {
        RestrictedSet { d, a_family, b_family, slack }
    }

    pub fn d(&self) -> &BTreeSet<usize> {
        &self.d
    }

    pub fn witness(&self) -> (&SequenceFamily, &SequenceFamily, &BTreeSet<usize>) {
        (&self.a_family, &self.b_family, &self.slack)
    }

    /// Re-derives the closures from the witness and checks the size bounds,
    /// the sandwich, and the exact composition D = (ℬ⁺ ∖ 𝒜⁻) ∪ S.
    pub fn verify(
        &self,
        digraph: &Digraph,
        partition: &CliquePartition,
        params: &Parameters,
    ) -> Result<(), RestrictednessViolation> {
        for (side, family) in
            [(FamilySide::A, &self.a_family), (FamilySide::B, &self.b_family)]
        {
            for seq in family.members() {
                if seq.len() > params.s {
                    return Err(RestrictednessViolation::SequenceTooLong {
                        side,
                        len: seq.len(),
                        bound: params.s,
                    });
                }
            }
            if family.len() > params.r {
                return Err(RestrictednessViolation::FamilyTooLarge {
                    side,
                    size: family.len(),
                    bound: params.r,
                });
            }
        }

        let plus = family_plus(digraph, partition, &self.b_family, params.s);
        let minus = family_minus(digraph, partition, &self.a_family, params.s);
        let overlap: BTreeSet<usize> = plus.intersection(&minus).copied().collect();
        if overlap.len() > params.t {
            return Err(RestrictednessViolation::OverlapTooLarge {
                size: overlap.len(),
                bound: params.t,
            });
        }

        let core: BTreeSet<usize> = plus.difference(&minus).copied().collect();
        if let Some(&vertex) = core.difference(&self.d).next() {
            return Err(RestrictednessViolation::CoreVertexMissing { vertex });
        }
        if let Some(&vertex) = self.d.difference(&plus).next() {
            return Err(RestrictednessViolation::OutsidePlus { vertex });
        }
        if let Some(&vertex) = self.slack.difference(&overlap).next() {
            return Err(RestrictednessViolation::SlackOutsideOverlap { vertex });
        }
        let composed: BTreeSet<usize> = core.union(&self.slack).copied().collect();
        if let Some(&vertex) = composed.symmetric_difference(&self.d).next() {
            return Err(RestrictednessViolation::CompositionMismatch { vertex });
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StageError {
    #[error("stage {h} out of range, enumeration has {max} steps")]
    OutOfRange { h: usize, max: usize },
}

/// Everything one enumeration stage induces: the cut, the crossing edges,
/// the path fragments on each side, their boundary sequence families, and
/// the witnessed history set.
#[derive(Debug, Clone)]
pub struct CutData {
    pub h: usize,
    pub cut: CutState,
    /// Member edges with one end on each side of the cut.
    pub crossing: BTreeSet<(usize, usize)>,
    /// Maximal member fragments inside B, then inside A.
    pub b_fragments: Vec<DiPath>,
    pub a_fragments: Vec<DiPath>,
    /// First up-to-s clique slices of the A-side fragments.
    pub a_family: SequenceFamily,
    /// Last up-to-s clique slices of the B-side fragments.
    pub b_family: SequenceFamily,
    pub d: RestrictedSet,
}

/// Builds the stage-`h` cut data for a linkage and an enumeration of its
/// non-terminal vertices: B_h is the sources plus the first h enumerated
/// vertices, fragments come from deleting the crossing edges, and
/// D_h = (ℬ_h⁺ ∖ 𝒜_h⁻) ∪ B_h carries the slack S = B_h ∩ 𝒜_h⁻ ∩ ℬ_h⁺ as
/// its witness.
pub fn build_cut_data(
    instance: &ProblemInstance,
    linkage: &Linkage,
    order: &[usize],
    h: usize,
    params: &Parameters,
) -> Result<CutData, StageError> {
    if h > order.len() {
        return Err(StageError::OutOfRange { h, max: order.len() });
    }
    let linkage_vertices = linkage.vertex_set();
    assert!(
        order.iter().all(|v| linkage_vertices.contains(v) && !instance.is_terminal(*v)),
        "contract violation: enumeration must list non-terminal linkage vertices"
    );

    let mut b: BTreeSet<usize> = instance.sources();
    b.extend(&order[..h]);

    let mut crossing = BTreeSet::new();
    let mut b_fragments = Vec::new();
    let mut a_fragments = Vec::new();
    for member in linkage.members() {
        let vs = member.vertices();
        let mut run_start = 0;
        for i in 0..vs.len() {
            let splits_here = i + 1 < vs.len() && b.contains(&vs[i]) != b.contains(&vs[i + 1]);
            if splits_here {
                crossing.insert((vs[i], vs[i + 1]));
            }
            if splits_here || i + 1 == vs.len() {
                let fragment = member.slice(run_start..i + 1);
                if b.contains(&fragment.first()) {
                    b_fragments.push(fragment);
                } else {
                    a_fragments.push(fragment);
                }
                run_start = i + 1;
            }
        }
    }

    let partition = instance.partition();
    let s = params.s;
    let mut a_seqs = Vec::new();
    for fragment in &a_fragments {
        for clique in 1..=partition.clique_count() {
            if let Some(seq) =
                up_to_s_sequence(fragment, partition, clique, s, SequenceEnd::First)
            {
                a_seqs.push(seq);
            }
        }
    }
    let mut b_seqs = Vec::new();
    for fragment in &b_fragments {
        for clique in 1..=partition.clique_count() {
            if let Some(seq) =
                up_to_s_sequence(fragment, partition, clique, s, SequenceEnd::Last)
            {
                b_seqs.push(seq);
            }
        }
    }
    let a_family = SequenceFamily::new(a_seqs);
    let b_family = SequenceFamily::new(b_seqs);

    let digraph = instance.digraph();
    let plus = family_plus(digraph, partition, &b_family, s);
    let minus = family_minus(digraph, partition, &a_family, s);
    let mut d: BTreeSet<usize> = plus.difference(&minus).copied().collect();
    d.extend(&b);
    let slack: BTreeSet<usize> = b
        .iter()
        .copied()
        .filter(|v| minus.contains(v) && plus.contains(v))
        .collect();

    Ok(CutData {
        h,
        cut: CutState::new(linkage, b),
        crossing,
        b_fragments,
        a_fragments,
        a_family: a_family.clone(),
        b_family: b_family.clone(),
        d: RestrictedSet::new(d, a_family, b_family, slack),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeparationFailure {
    /// A B-side vertex escaped D_h.
    BSideLeak { h: usize, vertex: usize },
    /// An A-side vertex crept into D_h.
    ASideLeak { h: usize, vertex: usize },
    /// D_h lost a vertex at the next stage.
    NotMonotone { h: usize, vertex: usize },
    /// The stage witness failed a restrictedness bullet.
    Witness { h: usize, violation: RestrictednessViolation },
}

impl fmt::Display for SeparationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeparationFailure::BSideLeak { h, vertex } => {
                write!(f, "stage {h}: B-vertex {vertex} missing from D")
            }
            SeparationFailure::ASideLeak { h, vertex } => {
                write!(f, "stage {h}: A-vertex {vertex} inside D")
            }
            SeparationFailure::NotMonotone { h, vertex } => {
                write!(f, "stage {h}: vertex {vertex} dropped from the next D")
            }
            SeparationFailure::Witness { h, violation } => {
                write!(f, "stage {h}: {violation}")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageVerdict {
    pub h: usize,
    /// B_h ⊆ D_h and A_h ∩ D_h = ∅.
    pub split_ok: bool,
    /// D_h ⊆ D_{h+1}; trivially true at the last stage.
    pub monotone_ok: bool,
    /// The witness passes every restrictedness bullet.
    pub restricted_ok: bool,
}

#[derive(Debug, Clone)]
pub struct SeparationReport {
    pub verdicts: Vec<StageVerdict>,
    pub failures: Vec<SeparationFailure>,
}

impl SeparationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the three separation clauses on every stage of the enumeration:
/// the cut sides split exactly along D_h, the D_h grow monotonically, and
/// each witness certifies restrictedness at the instance's parameters.
pub fn verify_separation(
    instance: &ProblemInstance,
    linkage: &Linkage,
    order: &[usize],
    params: &Parameters,
) -> SeparationReport {
    let stages: Vec<CutData> = (0..=order.len())
        .map(|h| build_cut_data(instance, linkage, order, h, params).expect("stage in range"))
        .collect();

    let mut verdicts = Vec::with_capacity(stages.len());
    let mut failures = Vec::new();
    for (h, data) in stages.iter().enumerate() {
        let mut split_ok = true;
        if let Some(&vertex) = data.cut.b.difference(data.d.d()).next() {
            failures.push(SeparationFailure::BSideLeak { h, vertex });
            split_ok = false;
        }
        if let Some(&vertex) = data.cut.a.intersection(data.d.d()).next() {
            failures.push(SeparationFailure::ASideLeak { h, vertex });
            split_ok = false;
        }

        let mut monotone_ok = true;
        if let Some(next) = stages.get(h + 1) {
            if let Some(&vertex) = data.d.d().difference(next.d.d()).next() {
                failures.push(SeparationFailure::NotMonotone { h, vertex });
                monotone_ok = false;
            }
        }

        let mut restricted_ok = true;
        if let Err(violation) = data.d.verify(instance.digraph(), instance.partition(), params) {
            failures.push(SeparationFailure::Witness { h, violation });
            restricted_ok = false;
        }

        verdicts.push(StageVerdict { h, split_ok, monotone_ok, restricted_ok });
    }
    SeparationReport { verdicts, failures }
}

/// Stream of all witnessable sets, deduplicated by extension.
#[derive(Debug, Clone)]
pub struct RestrictedEnumeration {
    pub sets: Vec<RestrictedSet>,
    /// False when the cap cut the stream or an overlap was too wide to walk.
    pub complete: bool,
}

/// Lexicographic size-`size` combinations of `items`.
fn combinations(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    if size > items.len() {
        return Vec::new();
    }
    let mut idx: Vec<usize> = (0..size).collect();
    let mut out = Vec::new();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + items.len() - size {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Every sequence the closure operators can tell apart, clique by clique:
/// sorted term lists shorter than s (order never matters there), and
/// exactly-s lists in every (first, last) designation, middles sorted. Both
/// endpoints are pinned because the forward operator reads the first term
/// and the backward operator reads the last.
fn sequence_universe(partition: &CliquePartition, s: usize) -> Vec<VertexSequence> {
    let mut out = Vec::new();
    for clique in 1..=partition.clique_count() {
        let members = partition.members(clique);
        for len in 1..=s.saturating_sub(1).min(members.len()) {
            for combo in combinations(&members, len) {
                out.push(
                    VertexSequence::new(combo, partition, s).expect("sorted clique subset"),
                );
            }
        }
        if s == 1 {
            for &v in &members {
                out.push(VertexSequence::new(vec![v], partition, s).expect("single vertex"));
            }
            continue;
        }
        if members.len() < s {
            continue;
        }
        for combo in combinations(&members, s) {
            for &first in &combo {
                for &last in &combo {
                    if first == last {
                        continue;
                    }
                    let mut terms = vec![first];
                    terms.extend(combo.iter().copied().filter(|&v| v != first && v != last));
                    terms.push(last);
                    out.push(
                        VertexSequence::new(terms, partition, s).expect("designated subset"),
                    );
                }
            }
        }
    }
    out
}

/// Families of at most `bound` sequences drawn from the universe, smallest
/// first, the empty family leading.
fn families(universe: &[VertexSequence], bound: usize) -> Vec<SequenceFamily> {
    let indexes: Vec<usize> = (0..universe.len()).collect();
    let mut out = Vec::new();
    for size in 0..=bound.min(universe.len()) {
        for combo in combinations(&indexes, size) {
            out.push(SequenceFamily::new(
                combo.into_iter().map(|i| universe[i].clone()).collect(),
            ));
        }
    }
    out
}

/// Enumerates witnessed sets by walking canonical generator triples and
/// deduplicating the produced D extensionally, first witness kept. Stops
/// after `cap` distinct sets and flags the stream incomplete. Practical
/// only while r and the clique sizes stay small.
pub fn enumerate_restricted_sets(
    instance: &ProblemInstance,
    params: &Parameters,
    cap: usize,
) -> RestrictedEnumeration {
    let digraph = instance.digraph();
    let partition = instance.partition();
    let universe = sequence_universe(partition, params.s);
    let candidates = families(&universe, params.r);

    let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let mut sets = Vec::new();
    let mut complete = true;
    'outer: for b_family in &candidates {
        let plus = family_plus(digraph, partition, b_family, params.s);
        for a_family in &candidates {
            let minus = family_minus(digraph, partition, a_family, params.s);
            let overlap: Vec<usize> = plus.intersection(&minus).copied().collect();
            if overlap.len() > params.t {
                continue;
            }
            if overlap.len() >= usize::BITS as usize {
                complete = false;
                continue;
            }
            let core: BTreeSet<usize> = plus.difference(&minus).copied().collect();
            for mask in 0..(1usize << overlap.len()) {
                let slack: BTreeSet<usize> = overlap
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| mask & (1 << bit) != 0)
                    .map(|(_, &v)| v)
                    .collect();
                let mut d = core.clone();
                d.extend(&slack);
                if seen.insert(d.clone()) {
                    sets.push(RestrictedSet::new(
                        d,
                        a_family.clone(),
                        b_family.clone(),
                        slack,
                    ));
                    if sets.len() >= cap {
                        complete = false;
                        break 'outer;
                    }
                }
            }
        }
    }
    RestrictedEnumeration { sets, complete }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::ProblemInstance;
    use crate::params::{compute_parameters, ParamOverrides};

    fn set(vs: &[usize]) -> BTreeSet<usize> {
        vs.iter().copied().collect()
    }

    fn t1() -> ProblemInstance {
        let g = Digraph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let p = CliquePartition::new(1, vec![1, 1, 1]).unwrap();
        ProblemInstance::new(g, p, vec![(0, 2)]).unwrap()
    }

    fn t1_linkage() -> Linkage {
        Linkage::new(vec![DiPath::new(vec![0, 1, 2]).unwrap()])
    }

    fn one_clique(n: usize) -> CliquePartition {
        CliquePartition::new(1, vec![1; n]).unwrap()
    }

    #[test]
    fn sequence_constructor_guards() {
        let p = CliquePartition::new(2, vec![1, 1, 2]).unwrap();
        assert_eq!(
            VertexSequence::new(vec![], &p, 3).unwrap_err(),
            SequenceError::Empty
        );
        assert_eq!(
            VertexSequence::new(vec![0, 1, 0], &p, 3).unwrap_err(),
            SequenceError::Repeated(0)
        );
        assert_eq!(
            VertexSequence::new(vec![0, 2], &p, 3).unwrap_err(),
            SequenceError::CliqueMismatch(0, 2)
        );
        assert_eq!(
            VertexSequence::new(vec![0, 1, 2, 0], &p, 3).unwrap_err(),
            SequenceError::TooLong { len: 4, bound: 3 }
        );
        assert_eq!(
            VertexSequence::new(vec![9], &p, 3).unwrap_err(),
            SequenceError::OutOfRange(9)
        );
        let seq = VertexSequence::new(vec![1, 0], &p, 3).unwrap();
        assert_eq!(seq.clique(), 1);
    }

    #[test]
    fn plus_requires_edges_from_all_but_first() {
        // X = (1,2,3) with s = 3: vertex 5 hears from 2 and 3, so it joins;
        // vertex 4 hears from 3 only.
        let g = Digraph::new(6, [(2, 5), (3, 5), (3, 4)]).unwrap();
        let p = one_clique(6);
        let x = VertexSequence::new(vec![1, 2, 3], &p, 3).unwrap();
        let fam = SequenceFamily::new(vec![x]);
        assert_eq!(family_plus(&g, &p, &fam, 3), set(&[1, 2, 3, 5]));
    }

    #[test]
    fn minus_requires_edges_to_all_but_last() {
        let g = Digraph::new(6, [(5, 1), (5, 2), (4, 1)]).unwrap();
        let p = one_clique(6);
        let x = VertexSequence::new(vec![1, 2, 3], &p, 3).unwrap();
        let fam = SequenceFamily::new(vec![x]);
        assert_eq!(family_minus(&g, &p, &fam, 3), set(&[1, 2, 3, 5]));
    }

    #[test]
    fn short_sequences_contribute_terms_only() {
        let g = Digraph::new(6, [(1, 5), (2, 5), (5, 1), (5, 2)]).unwrap();
        let p = one_clique(6);
        let x = VertexSequence::new(vec![1, 2], &p, 3).unwrap();
        let fam = SequenceFamily::new(vec![x]);
        assert_eq!(family_plus(&g, &p, &fam, 3), set(&[1, 2]));
        assert_eq!(family_minus(&g, &p, &fam, 3), set(&[1, 2]));
    }

    #[test]
    fn closures_stay_inside_the_clique() {
        // Vertex 3 sits in another clique; full adjacency cannot pull it in.
        let g = Digraph::new(4, [(1, 3), (2, 3), (0, 3)]).unwrap();
        let p = CliquePartition::new(2, vec![1, 1, 1, 2]).unwrap();
        let x = VertexSequence::new(vec![0, 1, 2], &p, 3).unwrap();
        let fam = SequenceFamily::new(vec![x]);
        assert_eq!(family_plus(&g, &p, &fam, 3), set(&[0, 1, 2]));
    }

    #[test]
    fn empty_family_has_empty_closures() {
        let g = Digraph::new(3, [(0, 1)]).unwrap();
        let p = one_clique(3);
        assert!(family_plus(&g, &p, &SequenceFamily::empty(), 3).is_empty());
        assert!(family_minus(&g, &p, &SequenceFamily::empty(), 3).is_empty());
    }

    #[test]
    fn closures_grow_with_the_family() {
        let g = Digraph::new(6, [(2, 5), (3, 5)]).unwrap();
        let p = one_clique(6);
        let x = VertexSequence::new(vec![1, 2, 3], &p, 3).unwrap();
        let y = VertexSequence::new(vec![0], &p, 3).unwrap();
        let small = SequenceFamily::new(vec![x.clone()]);
        let large = SequenceFamily::new(vec![x, y]);
        let before = family_plus(&g, &p, &small, 3);
        let after = family_plus(&g, &p, &large, 3);
        assert!(before.is_subset(&after));
    }

    #[test]
    fn up_to_s_slices_in_path_order() {
        let p = one_clique(7);
        let path = DiPath::new(vec![0, 1, 2]).unwrap();
        let seq = up_to_s_sequence(&path, &p, 1, 5, SequenceEnd::First).unwrap();
        assert_eq!(seq.terms(), &[0, 1, 2]);

        let long = DiPath::new(vec![6, 5, 4, 3, 2, 1, 0]).unwrap();
        let last = up_to_s_sequence(&long, &p, 1, 5, SequenceEnd::Last).unwrap();
        assert_eq!(last.terms(), &[4, 3, 2, 1, 0]);
        let first = up_to_s_sequence(&long, &p, 1, 5, SequenceEnd::First).unwrap();
        assert_eq!(first.terms(), &[6, 5, 4, 3, 2]);

        let p2 = CliquePartition::new(2, vec![1, 1, 1, 2, 2, 2, 2]).unwrap();
        assert_eq!(up_to_s_sequence(&path, &p2, 2, 5, SequenceEnd::First), None);
    }

    #[test]
    fn t1_cut_data_matches_hand_trace() {
        let inst = t1();
        let linkage = t1_linkage();
        let params = compute_parameters(1, 1, &ParamOverrides::default());
        let order = vec![1];

        let d0 = build_cut_data(&inst, &linkage, &order, 0, &params).unwrap();
        assert_eq!(d0.cut.b, set(&[0]));
        assert_eq!(d0.crossing, [(0, 1)].into_iter().collect());
        assert_eq!(d0.b_family.members().len(), 1);
        assert_eq!(d0.b_family.members()[0].terms(), &[0]);
        assert_eq!(d0.a_family.members()[0].terms(), &[1, 2]);
        assert_eq!(*d0.d.d(), set(&[0]));

        let d1 = build_cut_data(&inst, &linkage, &order, 1, &params).unwrap();
        assert_eq!(d1.cut.b, set(&[0, 1]));
        assert_eq!(d1.crossing, [(1, 2)].into_iter().collect());
        assert_eq!(*d1.d.d(), set(&[0, 1]));

        // Last stage: only the sinks remain on the A side and the crossing
        // edges are the members' final edges.
        assert_eq!(d1.cut.a, set(&[2]));
        assert_eq!(
            build_cut_data(&inst, &linkage, &order, 2, &params).unwrap_err(),
            StageError::OutOfRange { h: 2, max: 1 }
        );
    }

    #[test]
    fn t1_sides_stay_inside_their_closures() {
        let inst = t1();
        let linkage = t1_linkage();
        let params = compute_parameters(1, 1, &ParamOverrides::default());
        let order = vec![1];
        for h in 0..=1 {
            let data = build_cut_data(&inst, &linkage, &order, h, &params).unwrap();
            let plus =
                family_plus(inst.digraph(), inst.partition(), &data.b_family, params.s);
            let minus =
                family_minus(inst.digraph(), inst.partition(), &data.a_family, params.s);
            assert!(data.cut.b.is_subset(&plus), "stage {h}");
            assert!(data.cut.a.is_subset(&minus), "stage {h}");
        }
    }

    #[test]
    fn t1_separation_passes_every_stage() {
        let inst = t1();
        let linkage = t1_linkage();
        let params = compute_parameters(1, 1, &ParamOverrides::default());
        let report = verify_separation(&inst, &linkage, &[1], &params);
        assert!(report.passed(), "{:?}", report.failures);
        assert_eq!(report.verdicts.len(), 2);
        assert!(report
            .verdicts
            .iter()
            .all(|v| v.split_ok && v.monotone_ok && v.restricted_ok));
    }

    #[test]
    fn witness_verification_rejects_tampering() {
        let inst = t1();
        let linkage = t1_linkage();
        let params = compute_parameters(1, 1, &ParamOverrides::default());
        let data = build_cut_data(&inst, &linkage, &[1], 0, &params).unwrap();
        assert_eq!(data.d.verify(inst.digraph(), inst.partition(), &params), Ok(()));

        let (a_fam, b_fam, slack) = data.d.witness();
        let mut grown = data.d.d().clone();
        grown.insert(2);
        let tampered =
            RestrictedSet::new(grown, a_fam.clone(), b_fam.clone(), slack.clone());
        assert_eq!(
            tampered.verify(inst.digraph(), inst.partition(), &params),
            Err(RestrictednessViolation::OutsidePlus { vertex: 2 })
        );
    }

    #[test]
    fn enumeration_covers_all_subsets_on_t1() {
        let inst = t1();
        let params = compute_parameters(1, 1, &ParamOverrides::default());

        let full = enumerate_restricted_sets(&inst, &params, 100);
        assert!(full.complete);
        assert_eq!(full.sets.len(), 8);
        assert_eq!(*full.sets[0].d(), BTreeSet::new());
        for set in &full.sets {
            assert_eq!(set.verify(inst.digraph(), inst.partition(), &params), Ok(()));
        }
        let distinct: BTreeSet<&BTreeSet<usize>> =
            full.sets.iter().map(|s| s.d()).collect();
        assert_eq!(distinct.len(), full.sets.len());

        let capped = enumerate_restricted_sets(&inst, &params, 3);
        assert!(!capped.complete);
        assert_eq!(capped.sets.len(), 3);
    }

    #[test]
    fn combinations_enumerate_lexicographically() {
        assert_eq!(
            combinations(&[4, 7, 9], 2),
            vec![vec![4, 7], vec![4, 9], vec![7, 9]]
        );
        assert_eq!(combinations(&[1, 2], 0), vec![Vec::<usize>::new()]);
        assert!(combinations(&[1, 2], 3).is_empty());
    }
}
