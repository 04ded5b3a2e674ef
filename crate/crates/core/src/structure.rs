//! Acceptable vertex sets and the machinery that orders a linkage's vertices:
//! wiggle numbers, planar matchings between two linkage members, per-clique
//! and global acceptability, and the stepwise vertex enumeration.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::digraph::{Digraph, DiPath, Linkage, ProblemInstance};
use crate::params::Parameters;

/// Longest alternation "X-vertex, then a later Y-vertex" along `path`,
/// counted in pairs. The greedy scan (earliest X-vertex, then the earliest
/// later Y-vertex, repeat) is exact: any alternating subsequence can be
/// shifted pair by pair onto the greedy one.
///
/// Panics if `x` and `y` intersect; callers hand in disjoint sides.
pub fn wiggle_number(path: &DiPath, x: &BTreeSet<usize>, y: &BTreeSet<usize>) -> usize {
    assert!(x.is_disjoint(y), "contract violation: wiggle sides overlap");
    let mut pairs = 0;
    let mut want_y = false;
    for &v in path.vertices() {
        if want_y && y.contains(&v) {
            pairs += 1;
            want_y = false;
        } else if !want_y && x.contains(&v) {
            want_y = true;
        }
    }
    pairs
}

/// Linkage of up to-3-vertex paths leaving one host path and entering
/// another with both endpoint orders aligned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarMatching {
    members: Vec<DiPath>,
}

impl PlanarMatching {
    pub fn members(&self) -> &[DiPath] {
        &self.members
    }

    pub fn cardinality(&self) -> usize {
        self.members.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingResult {
    /// Maximum cardinality found, capped at the requested threshold.
    pub cardinality: usize,
    pub witness: PlanarMatching,
}

struct MatchCandidate {
    q_pos: usize,
    r_pos: usize,
    vertices: Vec<usize>,
}

struct MatchSearch<'a> {
    cands: &'a [MatchCandidate],
    used: Vec<bool>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    threshold: usize,
}

impl MatchSearch<'_> {
    fn dfs(&mut self, from: usize, last_q: Option<usize>, last_r: Option<usize>) {
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        if self.best.len() >= self.threshold {
            return;
        }
        for idx in from..self.cands.len() {
            if self.chosen.len() + (self.cands.len() - idx) <= self.best.len() {
                break;
            }
            let cand = &self.cands[idx];
            if last_q.is_some_and(|q| cand.q_pos <= q)
                || last_r.is_some_and(|r| cand.r_pos <= r)
                || cand.vertices.iter().any(|&v| self.used[v])
            {
                continue;
            }
            for &v in &cand.vertices {
                self.used[v] = true;
            }
            self.chosen.push(idx);
            self.dfs(idx + 1, Some(cand.q_pos), Some(cand.r_pos));
            self.chosen.pop();
            for &v in &cand.vertices {
                self.used[v] = false;
            }
            if self.best.len() >= self.threshold {
                return;
            }
        }
    }
}

/// Maximum planar matching from `x` to `y` whose member first vertices lie on
/// `q` (in `q`'s order) and last vertices on `r` (in `r`'s order). Members
/// have at most three vertices; a middle vertex must avoid
/// `forbidden_internal`. The search is exact up to `threshold` and stops
/// early once a matching that large is found.
///
/// Single-vertex members (first = last) require a vertex of `x ∩ y`, so they
/// never arise for the disjoint sides the acceptability checks pass in; they
/// are still handled for the general call.
pub fn max_planar_matching(
    digraph: &Digraph,
    q: &DiPath,
    r: &DiPath,
    x: &BTreeSet<usize>,
    y: &BTreeSet<usize>,
    forbidden_internal: &BTreeSet<usize>,
    threshold: usize,
) -> MatchingResult {
    assert!(threshold >= 1, "contract violation: threshold must be positive");
    let q_firsts: Vec<(usize, usize)> = q
        .vertices()
        .iter()
        .enumerate()
        .filter(|(_, v)| x.contains(v))
        .map(|(p, &v)| (p, v))
        .collect();
    let r_lasts: Vec<(usize, usize)> = r
        .vertices()
        .iter()
        .enumerate()
        .filter(|(_, v)| y.contains(v))
        .map(|(p, &v)| (p, v))
        .collect();

    let mut cands = Vec::new();
    for &(q_pos, u) in &q_firsts {
        for &(r_pos, v) in &r_lasts {
            if u == v {
                cands.push(MatchCandidate { q_pos, r_pos, vertices: vec![u] });
                continue;
            }
            if digraph.has_edge(u, v) {
                cands.push(MatchCandidate { q_pos, r_pos, vertices: vec![u, v] });
            }
            for &m in digraph.out_neighbors(u) {
                if m != v
                    && !forbidden_internal.contains(&m)
                    && digraph.has_edge(m, v)
                {
                    cands.push(MatchCandidate { q_pos, r_pos, vertices: vec![u, m, v] });
                }
            }
        }
    }
    cands.sort_by(|a, b| {
        (a.q_pos, a.r_pos, &a.vertices).cmp(&(b.q_pos, b.r_pos, &b.vertices))
    });

    let mut search = MatchSearch {
        cands: &cands,
        used: vec![false; digraph.vertex_count()],
        chosen: Vec::new(),
        best: Vec::new(),
        threshold,
    };
    search.dfs(0, None, None);
    let members = search
        .best
        .iter()
        .map(|&idx| DiPath::new(cands[idx].vertices.clone()).expect("candidates are paths"))
        .collect();
    MatchingResult { cardinality: search.best.len(), witness: PlanarMatching { members } }
}

/// Why a set fails clique-local acceptability, in check order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliqueViolation {
    /// A source terminal of this clique is not in B.
    SourceOutsideB { pair: usize },
    /// A sink terminal lies in B.
    SinkInsideB { pair: usize },
    /// Some member meets an A-vertex of the clique before a B-vertex, so its
    /// B-vertices are no initial segment of its clique vertices.
    BrokenPrefix { member: usize, early_a: usize, late_b: usize },
    /// A planar matching from B to A internally disjoint from the linkage
    /// reaches the forbidden cardinality.
    LargeMatching { from_member: usize, to_member: usize, witness: PlanarMatching },
}

impl fmt::Display for CliqueViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliqueViolation::SourceOutsideB { pair } => {
                write!(f, "source of pair {pair} missing from B")
            }
            CliqueViolation::SinkInsideB { pair } => write!(f, "sink of pair {pair} inside B"),
            CliqueViolation::BrokenPrefix { member, early_a, late_b } => write!(
                f,
                "member {member} meets A-vertex {early_a} before B-vertex {late_b}"
            ),
            CliqueViolation::LargeMatching { from_member, to_member, witness } => write!(
                f,
                "{}-member planar matching from member {from_member} to member {to_member}",
                witness.cardinality()
            ),
        }
    }
}

/// Checks the three clique-local conditions for `b` within clique
/// `clique_id`: terminal sides, the per-member prefix property, and the
/// absence of a large planar matching from B to A = C \ B avoiding the
/// linkage internally.
///
/// Panics if `b` leaves the clique; the split into per-clique sets is the
/// caller's job.
pub fn is_c_acceptable(
    instance: &ProblemInstance,
    linkage: &Linkage,
    clique_id: usize,
    b: &BTreeSet<usize>,
) -> Result<(), CliqueViolation> {
    let partition = instance.partition();
    assert!(
        b.iter().all(|&v| partition.clique_of(v) == clique_id),
        "contract violation: B must sit inside the clique"
    );
    let clique: BTreeSet<usize> = partition.members(clique_id).into_iter().collect();
    let a: BTreeSet<usize> = clique.difference(b).copied().collect();

    for (i, &(s, t)) in instance.pairs().iter().enumerate() {
        if clique.contains(&s) && !b.contains(&s) {
            return Err(CliqueViolation::SourceOutsideB { pair: i });
        }
        if b.contains(&t) {
            return Err(CliqueViolation::SinkInsideB { pair: i });
        }
    }

    for (i, member) in linkage.members().iter().enumerate() {
        let mut first_a = None;
        for &v in member.vertices() {
            if !clique.contains(&v) {
                continue;
            }
            if b.contains(&v) {
                if let Some(early_a) = first_a {
                    return Err(CliqueViolation::BrokenPrefix { member: i, early_a, late_b: v });
                }
            } else if first_a.is_none() {
                first_a = Some(v);
            }
        }
    }

    let k = instance.pair_count();
    let threshold = k * k + k + 2;
    let linkage_vertices = linkage.vertex_set();
    for i in 0..k {
        for j in 0..k {
            let found = max_planar_matching(
                instance.digraph(),
                linkage.member(i),
                linkage.member(j),
                b,
                &a,
                &linkage_vertices,
                threshold,
            );
            if found.cardinality >= threshold {
                return Err(CliqueViolation::LargeMatching {
                    from_member: i,
                    to_member: j,
                    witness: found.witness,
                });
            }
        }
    }
    Ok(())
}

/// Why a set fails global acceptability, in check order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AcceptabilityViolation {
    MissingSource { pair: usize },
    ContainsSink { pair: usize },
    Clique { clique: usize, violation: CliqueViolation },
    /// Alternation between B-vertices of one clique and A-vertices of
    /// another exceeds the allowance z.
    CrossWiggle { member: usize, b_clique: usize, a_clique: usize, value: usize, bound: usize },
}

impl fmt::Display for AcceptabilityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AcceptabilityViolation::MissingSource { pair } => {
                write!(f, "source of pair {pair} missing from B")
            }
            AcceptabilityViolation::ContainsSink { pair } => {
                write!(f, "sink of pair {pair} inside B")
            }
            AcceptabilityViolation::Clique { clique, violation } => {
                write!(f, "clique {clique}: {violation}")
            }
            AcceptabilityViolation::CrossWiggle { member, b_clique, a_clique, value, bound } => {
                write!(
                    f,
                    "member {member} wiggles {value} > {bound} between B of clique {b_clique} \
                     and A of clique {a_clique}"
                )
            }
        }
    }
}

/// Checks that `b` is acceptable for the linkage: every source in, every
/// sink out, every per-clique slice clique-acceptable, and every cross-clique
/// wiggle within `params.z`.
pub fn is_acceptable(
    instance: &ProblemInstance,
    linkage: &Linkage,
    params: &Parameters,
    b: &BTreeSet<usize>,
) -> Result<(), AcceptabilityViolation> {
    let n = instance.digraph().vertex_count();
    assert!(b.iter().all(|&v| v < n), "contract violation: B holds unknown vertices");

    for (i, &(s, t)) in instance.pairs().iter().enumerate() {
        if !b.contains(&s) {
            return Err(AcceptabilityViolation::MissingSource { pair: i });
        }
        if b.contains(&t) {
            return Err(AcceptabilityViolation::ContainsSink { pair: i });
        }
    }

    let partition = instance.partition();
    let c = partition.clique_count();
    for clique in 1..=c {
        let local: BTreeSet<usize> =
            b.iter().copied().filter(|&v| partition.clique_of(v) == clique).collect();
        is_c_acceptable(instance, linkage, clique, &local)
            .map_err(|violation| AcceptabilityViolation::Clique { clique, violation })?;
    }

    for b_clique in 1..=c {
        let x: BTreeSet<usize> =
            b.iter().copied().filter(|&v| partition.clique_of(v) == b_clique).collect();
        if x.is_empty() {
            continue;
        }
        for a_clique in 1..=c {
            if a_clique == b_clique {
                continue;
            }
            let y: BTreeSet<usize> = partition
                .members(a_clique)
                .into_iter()
                .filter(|v| !b.contains(v))
                .collect();
            for (i, member) in linkage.members().iter().enumerate() {
                let value = wiggle_number(member, &x, &y);
                if value > params.z {
                    return Err(AcceptabilityViolation::CrossWiggle {
                        member: i,
                        b_clique,
                        a_clique,
                        value,
                        bound: params.z,
                    });
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extension {
    /// Smallest linkage vertex whose addition keeps B acceptable.
    Next(usize),
    /// B already holds every linkage vertex but the sinks.
    Exhausted,
    /// Candidates remain but none keeps B acceptable. A minimum linkage
    /// always admits an extension, so hitting this is counterexample
    /// material.
    Stuck,
}

/// Tries to grow an acceptable `b` by one linkage vertex. Panics if `b` is
/// not acceptable; the enumeration only ever holds acceptable sets.
pub fn extend_acceptable(
    instance: &ProblemInstance,
    linkage: &Linkage,
    params: &Parameters,
    b: &BTreeSet<usize>,
) -> Extension {
    if let Err(violation) = is_acceptable(instance, linkage, params, b) {
        panic!("contract violation: B is not acceptable ({violation})");
    }
    let sinks = instance.sinks();
    let candidates: Vec<usize> = linkage
        .vertex_set()
        .into_iter()
        .filter(|v| !b.contains(v) && !sinks.contains(v))
        .collect();
    if candidates.is_empty() {
        return Extension::Exhausted;
    }
    for v in candidates {
        let mut grown = b.clone();
        grown.insert(v);
        if is_acceptable(instance, linkage, params, &grown).is_ok() {
            return Extension::Next(v);
        }
    }
    Extension::Stuck
}

/// Acceptability certificate for one enumeration prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrefixCertificate {
    /// Number of enumerated vertices in B beyond the sources.
    pub prefix: usize,
    /// Largest (B, A)-wiggle over the members at this prefix.
    pub max_member_wiggle: usize,
}

/// Ordering of the non-terminal linkage vertices along which every prefix
/// set stays acceptable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexEnumeration {
    pub order: Vec<usize>,
    pub certificates: Vec<PrefixCertificate>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderFailure {
    /// The source set itself failed the acceptability check.
    InitialRejected(AcceptabilityViolation),
    /// No candidate vertex preserved acceptability.
    Stuck,
    /// A prefix exceeded the global wiggle allowance w.
    WiggleBound { member: usize, value: usize, bound: usize },
}

/// Evidence that the enumeration broke down: the prefix built so far and the
/// set it was stuck at. Serialized by callers next to the instance and
/// linkage for offline study.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderCounterexample {
    pub failure: OrderFailure,
    pub order: Vec<usize>,
    pub b: BTreeSet<usize>,
}

/// Enumerates `V(L)` minus the sinks as sources followed by one new vertex
/// per step, keeping every prefix acceptable and certifying that every
/// prefix keeps each member's (B, A)-wiggle within `params.w`. Smallest
/// admissible vertex wins each step, so the order is deterministic.
pub fn vertex_order(
    instance: &ProblemInstance,
    linkage: &Linkage,
    params: &Parameters,
) -> Result<VertexEnumeration, OrderCounterexample> {
    let mut b: BTreeSet<usize> = instance.sources();
    let mut order = Vec::new();
    let mut certificates = Vec::new();

    if let Err(violation) = is_acceptable(instance, linkage, params, &b) {
        return Err(OrderCounterexample {
            failure: OrderFailure::InitialRejected(violation),
            order,
            b,
        });
    }

    let linkage_vertices = linkage.vertex_set();
    loop {
        let a: BTreeSet<usize> = linkage_vertices.difference(&b).copied().collect();
        let mut max_wiggle = 0;
        for (i, member) in linkage.members().iter().enumerate() {
            let value = wiggle_number(member, &b, &a);
            max_wiggle = max_wiggle.max(value);
            if value > params.w {
                return Err(OrderCounterexample {
                    failure: OrderFailure::WiggleBound {
                        member: i,
                        value,
                        bound: params.w,
                    },
                    order,
                    b,
                });
            }
        }
        certificates.push(PrefixCertificate { prefix: order.len(), max_member_wiggle: max_wiggle });

        match extend_acceptable(instance, linkage, params, &b) {
            Extension::Next(v) => {
                order.push(v);
                b.insert(v);
            }
            Extension::Exhausted => {
                return Ok(VertexEnumeration { order, certificates });
            }
            Extension::Stuck => {
                return Err(OrderCounterexample { failure: OrderFailure::Stuck, order, b });
            }
        }
    }
}

/// B and its complement within the linkage vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutState {
    pub b: BTreeSet<usize>,
    pub a: BTreeSet<usize>,
}

impl CutState {
    pub fn new(linkage: &Linkage, b: BTreeSet<usize>) -> Self {
        let a = linkage.vertex_set().difference(&b).copied().collect();
        CutState { b, a }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SegmentError {
    #[error("host {host} wiggles {have}, needs at least {need}")]
    WigglePremise { host: usize, have: usize, need: usize },
    #[error("no member prefix reaches wiggle {0} on any remaining host")]
    NoTrigger(usize),
}

#[derive(Clone)]
struct HostWindow {
    member: usize,
    start: usize,
    end: usize, // exclusive
}

/// Carves pairwise disjoint subpaths `R_i ⊆ Q_i`, each with an
/// `(X_i, Y_i)`-wiggle of at least `w`, out of hosts that each wiggle at
/// least `hosts.len() * w`. Works by repeatedly taking the shortest member
/// prefix whose overlap with some remaining host already wiggles `w`,
/// handing that overlap to the host, and deleting the prefix's vertices
/// from the others.
///
/// Panics if a host is no contiguous subpath of a member or the side sets
/// overlap anywhere; returns an error if a wiggle premise fails.
pub fn disjoint_wiggle_segments(
    linkage: &Linkage,
    hosts: &[DiPath],
    sides: &[(BTreeSet<usize>, BTreeSet<usize>)],
    w: usize,
) -> Result<Vec<DiPath>, SegmentError> {
    assert_eq!(hosts.len(), sides.len(), "contract violation: one side pair per host");
    assert!(w >= 1, "contract violation: w must be positive");
    for (i, (xi, yi)) in sides.iter().enumerate() {
        for (j, (xj, yj)) in sides.iter().enumerate() {
            if i < j {
                assert!(
                    xi.is_disjoint(xj) && xi.is_disjoint(yj) && yi.is_disjoint(xj)
                        && yi.is_disjoint(yj),
                    "contract violation: side sets of different hosts overlap"
                );
            }
        }
        assert!(xi.is_disjoint(yi), "contract violation: wiggle sides overlap");
    }

    let mut windows = Vec::with_capacity(hosts.len());
    for host in hosts {
        let window = linkage
            .members()
            .iter()
            .enumerate()
            .find_map(|(m, member)| {
                let start = member.position(host.first())?;
                let end = start + host.len();
                (member.vertices().get(start..end) == Some(host.vertices()))
                    .then_some(HostWindow { member: m, start, end })
            })
            .expect("contract violation: host is not a subpath of any member");
        windows.push(window);
    }

    let mut active: Vec<usize> = (0..hosts.len()).collect();
    let mut results: Vec<Option<DiPath>> = vec![None; hosts.len()];

    while !active.is_empty() {
        let need = active.len() * w;
        for &i in &active {
            let wn = window_wiggle(linkage, &windows[i], &sides[i], windows[i].end);
            if wn < need {
                return Err(SegmentError::WigglePremise { host: i, have: wn, need });
            }
        }

        // Shortest member prefix whose overlap with some active host already
        // wiggles w; removing its last vertex kills every trigger, which is
        // the minimality the recursion rests on.
        let mut chosen: Option<(usize, usize)> = None; // (prefix_len, host)
        for (m, member) in linkage.members().iter().enumerate() {
            for len in 1..=member.len() {
                if chosen.is_some_and(|(best, _)| len >= best) {
                    break;
                }
                for &i in &active {
                    if windows[i].member != m {
                        continue;
                    }
                    if window_wiggle(linkage, &windows[i], &sides[i], len) >= w {
                        chosen = Some((len, i));
                        break;
                    }
                }
            }
        }
        let Some((prefix_len, host)) = chosen else {
            return Err(SegmentError::NoTrigger(w));
        };

        let member = linkage.member(windows[host].member);
        let start = windows[host].start;
        results[host] = Some(member.slice(start..prefix_len.min(windows[host].end)));

        let taken_member = windows[host].member;
        active.retain(|&i| i != host);
        for &i in &active {
            let win = &mut windows[i];
            if win.member == taken_member {
                win.start = win.start.max(prefix_len);
                if win.start > win.end {
                    win.start = win.end;
                }
            }
        }
    }

    Ok(results.into_iter().map(|r| r.expect("every host got a segment")).collect())
}

/// Wiggle of the part of the host window before member position `cut`.
fn window_wiggle(
    linkage: &Linkage,
    window: &HostWindow,
    sides: &(BTreeSet<usize>, BTreeSet<usize>),
    cut: usize,
) -> usize {
    let end = window.end.min(cut);
    if window.start >= end {
        return 0;
    }
    let piece = linkage.member(window.member).slice(window.start..end);
    wiggle_number(&piece, &sides.0, &sides.1)
}
