//! The search digraph whose states pair a set of coloured crossing edges
//! with a history vertex set. A shortest path between its start and goal
//! families decides linkage existence and pins down the minimum number of
//! linkage vertices, in two flavours: an exponential powerset mode over all
//! history sets and a witnessed explicit mode over the enumerated ones.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::digraph::{validate_linkage, DiPath, Linkage, LinkageDefect, ProblemInstance};
use crate::params::Parameters;
use crate::restricted::{build_cut_data, enumerate_restricted_sets};

/// Digraph edge tagged with the member index (1-based) it is meant for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ColouredEdge {
    pub tail: usize,
    pub head: usize,
    pub colour: usize,
}

impl fmt::Display for ColouredEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{} colour {}", self.tail, self.head, self.colour)
    }
}

pub type ColouredEdgeSet = BTreeSet<ColouredEdge>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EdgeFamilyViolation {
    #[error("{0} is not an edge of the digraph")]
    NotAnEdge(ColouredEdge),
    #[error("colour {colour} outside 1..={k}")]
    BadColour { colour: usize, k: usize },
    #[error("{size} coloured edges exceed the bound {bound}")]
    TooMany { size: usize, bound: usize },
    #[error("two edges share head {0}")]
    SharedHead(usize),
    #[error("two edges share tail {0}")]
    SharedTail(usize),
    #[error("edges of different colours meet at {0}")]
    MixedColours(usize),
    #[error("edge head {0} is a source terminal")]
    HeadIsSource(usize),
    #[error("edge tail {0} is a sink terminal")]
    TailIsSink(usize),
    #[error("edge leaving source of pair {pair} carries colour {colour}")]
    WrongSourceColour { pair: usize, colour: usize },
    #[error("edge entering sink of pair {pair} carries colour {colour}")]
    WrongSinkColour { pair: usize, colour: usize },
}

/// Checks the crossing-family clauses in order: well-formed edges, the
/// cardinality bound, distinct heads and tails, colour agreement at shared
/// ends, terminal sides, and terminal colour pinning. Returns the first
/// violated clause.
pub fn is_edge_family(
    y: &ColouredEdgeSet,
    instance: &ProblemInstance,
    params: &Parameters,
) -> Result<(), EdgeFamilyViolation> {
    let digraph = instance.digraph();
    let k = instance.pair_count();
    for e in y {
        if !digraph.has_edge(e.tail, e.head) {
            return Err(EdgeFamilyViolation::NotAnEdge(*e));
        }
        if e.colour == 0 || e.colour > k {
            return Err(EdgeFamilyViolation::BadColour { colour: e.colour, k });
        }
    }
    if y.len() > params.k_bound {
        return Err(EdgeFamilyViolation::TooMany { size: y.len(), bound: params.k_bound });
    }

    let mut heads = BTreeSet::new();
    let mut tails = BTreeSet::new();
    for e in y {
        if !heads.insert(e.head) {
            return Err(EdgeFamilyViolation::SharedHead(e.head));
        }
        if !tails.insert(e.tail) {
            return Err(EdgeFamilyViolation::SharedTail(e.tail));
        }
    }

    let mut colour_at: BTreeMap<usize, usize> = BTreeMap::new();
    for e in y {
        for end in [e.tail, e.head] {
            match colour_at.get(&end) {
                Some(&colour) if colour != e.colour => {
                    return Err(EdgeFamilyViolation::MixedColours(end));
                }
                _ => {
                    colour_at.insert(end, e.colour);
                }
            }
        }
    }

    let pairs = instance.pairs();
    for e in y {
        if pairs.iter().any(|&(s, _)| s == e.head) {
            return Err(EdgeFamilyViolation::HeadIsSource(e.head));
        }
        if pairs.iter().any(|&(_, t)| t == e.tail) {
            return Err(EdgeFamilyViolation::TailIsSink(e.tail));
        }
    }
    for e in y {
        for (i, &(s, t)) in pairs.iter().enumerate() {
            if e.tail == s && e.colour != i + 1 {
                return Err(EdgeFamilyViolation::WrongSourceColour {
                    pair: i + 1,
                    colour: e.colour,
                });
            }
            if e.head == t && e.colour != i + 1 {
                return Err(EdgeFamilyViolation::WrongSinkColour {
                    pair: i + 1,
                    colour: e.colour,
                });
            }
        }
    }
    Ok(())
}

/// Search state: crossing edges plus the history set they must straddle.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct HVertex {
    pub y: ColouredEdgeSet,
    pub d: BTreeSet<usize>,
}

impl HVertex {
    /// The state invariant: every coloured edge has exactly one end in D.
    /// Returns the first offending edge.
    pub fn split_by_d(&self) -> Result<(), ColouredEdge> {
        for e in &self.y {
            if self.d.contains(&e.tail) == self.d.contains(&e.head) {
                return Err(*e);
            }
        }
        Ok(())
    }
}

/// True iff `to` continues `from`: the history only grows, exactly two
/// coloured edges differ between the states (on either side), they carry
/// the same colour, and they chain into a two-edge path through a freshly
/// added middle vertex.
pub fn h_adjacent(from: &HVertex, to: &HVertex) -> bool {
    if from == to || !from.d.is_subset(&to.d) {
        return false;
    }
    let diff: Vec<&ColouredEdge> = from.y.symmetric_difference(&to.y).collect();
    let [e, f] = diff.as_slice() else {
        return false;
    };
    if e.colour != f.colour {
        return false;
    }
    let middle = if e.head == f.tail && e.tail != f.head {
        e.head
    } else if f.head == e.tail && f.tail != e.head {
        f.head
    } else {
        return false;
    };
    to.d.contains(&middle) && !from.d.contains(&middle)
}

/// Start/goal classification of a state. Both can hold at once, as with a
/// single-edge member straight from its source to its sink.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TerminalMembership {
    pub s0: bool,
    pub t0: bool,
}

pub fn s0_t0_membership(hv: &HVertex, instance: &ProblemInstance) -> TerminalMembership {
    let k = instance.pair_count();
    let sources = instance.sources();
    let sinks = instance.sinks();
    let full = hv.y.len() == k;
    TerminalMembership {
        s0: full && hv.y.iter().all(|e| sources.contains(&e.tail)),
        t0: full && hv.y.iter().all(|e| sinks.contains(&e.head)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HMode {
    /// History sets range over all subsets, one vertex added per step.
    Powerset,
    /// History sets range over the enumerated witnessed sets.
    Explicit,
}

impl fmt::Display for HMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HMode::Powerset => write!(f, "powerset"),
            HMode::Explicit => write!(f, "explicit"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPath {
    pub vertices: Vec<HVertex>,
    pub mode: HMode,
}

impl HPath {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// One line per stage: `stage <h> Y <tail> <head> <colour>... D <v>...`.
    pub fn dump_lines(&self) -> Vec<String> {
        self.vertices
            .iter()
            .enumerate()
            .map(|(h, hv)| {
                let mut tokens = vec!["stage".to_string(), h.to_string(), "Y".to_string()];
                for e in &hv.y {
                    tokens.push(e.tail.to_string());
                    tokens.push(e.head.to_string());
                    tokens.push(e.colour.to_string());
                }
                tokens.push("D".to_string());
                for v in &hv.d {
                    tokens.push(v.to_string());
                }
                tokens.join(" ")
            })
            .collect()
    }
}

/// Caps for the state search; `None` means unbounded.
#[derive(Debug, Clone, Copy, Default)]
pub struct SearchBudget {
    pub max_states: Option<usize>,
    pub max_restricted_sets: Option<usize>,
    pub timeout: Option<Duration>,
}

impl SearchBudget {
    pub fn unbounded() -> Self {
        SearchBudget::default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HSearch {
    Found(HPath),
    /// `certified` holds when the search space was provably complete: always
    /// in powerset mode, and in explicit mode only with unmodified
    /// parameters and an uncapped enumeration.
    NoPath { certified: bool },
    BudgetExceeded { states: usize },
}

struct HSpace<'a> {
    instance: &'a ProblemInstance,
    params: &'a Parameters,
    mode: HMode,
    /// Explicit mode: the sorted history universe; empty in powerset mode.
    universe: Vec<BTreeSet<usize>>,
}

impl HSpace<'_> {
    /// All states with one coloured out-edge per source, colour pinned to
    /// the pair index, over every admissible history set.
    fn starts(&self) -> Vec<HVertex> {
        let digraph = self.instance.digraph();
        let pairs = self.instance.pairs();
        let mut edge_choices: Vec<Vec<ColouredEdge>> = Vec::with_capacity(pairs.len());
        for (i, &(s, _)) in pairs.iter().enumerate() {
            edge_choices.push(
                digraph
                    .out_neighbors(s)
                    .iter()
                    .map(|&v| ColouredEdge { tail: s, head: v, colour: i + 1 })
                    .collect(),
            );
        }

        let mut ys = Vec::new();
        let mut current = Vec::new();
        build_y_product(&edge_choices, 0, &mut current, &mut ys);

        let histories: Vec<BTreeSet<usize>> = match self.mode {
            HMode::Powerset => vec![self.instance.sources()],
            HMode::Explicit => self.universe.clone(),
        };

        let mut starts = Vec::new();
        for d in &histories {
            for y in &ys {
                let hv = HVertex { y: y.clone(), d: d.clone() };
                if is_edge_family(&hv.y, self.instance, self.params).is_ok()
                    && hv.split_by_d().is_ok()
                {
                    starts.push(hv);
                }
            }
        }
        starts.sort();
        starts.dedup();
        starts
    }

    /// Successor states in deterministic order: middles ascending, then
    /// in-neighbour, out-neighbour, and colour.
    fn successors(&self, state: &HVertex) -> Vec<HVertex> {
        let mut out = Vec::new();
        match self.mode {
            HMode::Powerset => {
                let n = self.instance.digraph().vertex_count();
                for middle in 0..n {
                    if state.d.contains(&middle) {
                        continue;
                    }
                    let mut d = state.d.clone();
                    d.insert(middle);
                    self.push_toggles(state, middle, &d, &mut out);
                }
            }
            HMode::Explicit => {
                for d in &self.universe {
                    if *d == state.d || !state.d.is_subset(d) {
                        continue;
                    }
                    for &middle in d.difference(&state.d) {
                        self.push_toggles(state, middle, d, &mut out);
                    }
                }
            }
        }
        out
    }

    /// All states reached by toggling a same-coloured in/out edge pair
    /// around `middle` against the history `d`.
    fn push_toggles(
        &self,
        state: &HVertex,
        middle: usize,
        d: &BTreeSet<usize>,
        out: &mut Vec<HVertex>,
    ) {
        let digraph = self.instance.digraph();
        let k = self.instance.pair_count();
        for &u in digraph.in_neighbors(middle) {
            for &w in digraph.out_neighbors(middle) {
                if u == w {
                    continue;
                }
                for colour in 1..=k {
                    let e = ColouredEdge { tail: u, head: middle, colour };
                    let f = ColouredEdge { tail: middle, head: w, colour };
                    let mut y = state.y.clone();
                    toggle(&mut y, e);
                    toggle(&mut y, f);
                    let hv = HVertex { y, d: d.clone() };
                    if is_edge_family(&hv.y, self.instance, self.params).is_ok()
                        && hv.split_by_d().is_ok()
                    {
                        out.push(hv);
                    }
                }
            }
        }
    }
}

fn toggle(y: &mut ColouredEdgeSet, e: ColouredEdge) {
    if !y.remove(&e) {
        y.insert(e);
    }
}

fn build_y_product(
    choices: &[Vec<ColouredEdge>],
    i: usize,
    current: &mut Vec<ColouredEdge>,
    out: &mut Vec<ColouredEdgeSet>,
) {
    if i == choices.len() {
        out.push(current.iter().copied().collect());
        return;
    }
    for e in &choices[i] {
        current.push(*e);
        build_y_product(choices, i + 1, current, out);
        current.pop();
    }
}

/// Breadth-first search for a shortest start-to-goal path. Start states,
/// successor lists, and the visit queue are all deterministically ordered,
/// so the returned path depends only on the instance, parameters, and mode.
pub fn find_h_path(
    instance: &ProblemInstance,
    params: &Parameters,
    mode: HMode,
    budget: &SearchBudget,
) -> HSearch {
    let clock = Instant::now();
    let mut space_complete = true;
    let universe = match mode {
        HMode::Powerset => Vec::new(),
        HMode::Explicit => {
            let cap = budget.max_restricted_sets.unwrap_or(usize::MAX);
            let enumeration = enumerate_restricted_sets(instance, params, cap);
            if !enumeration.complete {
                space_complete = false;
            }
            let mut ds: Vec<BTreeSet<usize>> =
                enumeration.sets.into_iter().map(|s| s.d().clone()).collect();
            ds.sort();
            ds
        }
    };
    let space = HSpace { instance, params, mode, universe };

    let certified = match mode {
        HMode::Powerset => true,
        HMode::Explicit => !params.overridden && space_complete,
    };

    let mut visited: BTreeSet<HVertex> = BTreeSet::new();
    let mut parent: BTreeMap<HVertex, HVertex> = BTreeMap::new();
    let mut queue: VecDeque<HVertex> = VecDeque::new();
    let mut goal: Option<HVertex> = None;

    'seed: for start in space.starts() {
        if visited.insert(start.clone()) {
            if s0_t0_membership(&start, instance).t0 {
                goal = Some(start);
                break 'seed;
            }
            queue.push_back(start);
        }
    }

    while goal.is_none() {
        if let Some(cap) = budget.max_states {
            if visited.len() > cap {
                return HSearch::BudgetExceeded { states: visited.len() };
            }
        }
        if let Some(limit) = budget.timeout {
            if clock.elapsed() > limit {
                return HSearch::BudgetExceeded { states: visited.len() };
            }
        }
        let Some(state) = queue.pop_front() else {
            break;
        };
        for next in space.successors(&state) {
            if visited.insert(next.clone()) {
                parent.insert(next.clone(), state.clone());
                if s0_t0_membership(&next, instance).t0 {
                    goal = Some(next);
                    break;
                }
                queue.push_back(next);
            }
        }
    }

    match goal {
        Some(end) => {
            let mut vertices = vec![end];
            while let Some(prev) = parent.get(vertices.last().expect("nonempty")) {
                vertices.push(prev.clone());
            }
            vertices.reverse();
            HSearch::Found(HPath { vertices, mode })
        }
        None => HSearch::NoPath { certified },
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MalformedUnion {
    #[error("colour {colour} repeats a tail at {vertex}")]
    Branching { colour: usize, vertex: usize },
    #[error("colour {colour} dead-ends at {at}")]
    BrokenChain { colour: usize, at: usize },
    #[error("colour {colour} walks a cycle")]
    Cyclic { colour: usize },
    #[error("colour {colour} leaves {count} edges off its path")]
    LeftoverEdges { colour: usize, count: usize },
    #[error("member paths meet at {vertex}")]
    Overlap { vertex: usize },
    #[error("extracted members fail validation: {0}")]
    Invalid(LinkageDefect),
}

/// Unions the coloured edges along the path and reads off one member per
/// colour, requiring class i to be exactly a directed path from the i-th
/// source to the i-th sink with nothing left over. The state graph promises
/// this for its shortest paths, so a failure signals a bug, not bad input.
pub fn extract_linkage(
    h_path: &HPath,
    instance: &ProblemInstance,
) -> Result<Linkage, MalformedUnion> {
    let union: ColouredEdgeSet =
        h_path.vertices.iter().flat_map(|hv| hv.y.iter().copied()).collect();
    let k = instance.pair_count();
    let mut used: BTreeSet<usize> = BTreeSet::new();
    let mut members = Vec::with_capacity(k);
    for (i, &(s, t)) in instance.pairs().iter().enumerate() {
        let colour = i + 1;
        let mut succ: BTreeMap<usize, usize> = BTreeMap::new();
        let mut class_size = 0usize;
        for e in union.iter().filter(|e| e.colour == colour) {
            class_size += 1;
            if succ.insert(e.tail, e.head).is_some() {
                return Err(MalformedUnion::Branching { colour, vertex: e.tail });
            }
        }
        let mut vertices = vec![s];
        let mut at = s;
        while at != t {
            let Some(&next) = succ.get(&at) else {
                return Err(MalformedUnion::BrokenChain { colour, at });
            };
            vertices.push(next);
            if vertices.len() > class_size + 1 {
                return Err(MalformedUnion::Cyclic { colour });
            }
            at = next;
        }
        if vertices.len() != class_size + 1 {
            return Err(MalformedUnion::LeftoverEdges {
                colour,
                count: class_size + 1 - vertices.len(),
            });
        }
        for &v in &vertices {
            if !used.insert(v) {
                return Err(MalformedUnion::Overlap { vertex: v });
            }
        }
        members.push(DiPath::new(vertices).expect("walk repeats no vertex before the sink"));
    }
    let linkage = Linkage::new(members);
    validate_linkage(instance, &linkage).map_err(MalformedUnion::Invalid)?;
    Ok(linkage)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceFailure {
    EdgeFamily { h: usize, violation: EdgeFamilyViolation },
    /// An edge of Y_h fails the exactly-one-end-in-D condition.
    SplitEnd { h: usize, edge: ColouredEdge },
    NotAdjacent { h: usize },
    NotStart,
    NotGoal,
}

impl fmt::Display for TraceFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceFailure::EdgeFamily { h, violation } => write!(f, "stage {h}: {violation}"),
            TraceFailure::SplitEnd { h, edge } => {
                write!(f, "stage {h}: {edge} does not straddle D")
            }
            TraceFailure::NotAdjacent { h } => {
                write!(f, "stages {h} and {} are not adjacent", h + 1)
            }
            TraceFailure::NotStart => write!(f, "first stage is no start state"),
            TraceFailure::NotGoal => write!(f, "last stage is no goal state"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceReport {
    pub stages: usize,
    pub failures: Vec<TraceFailure>,
}

impl TraceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Replays a linkage and its vertex enumeration as a walk through the state
/// graph: stage h pairs the crossing edges of the h-th cut, coloured by
/// member, with the history set D_h. Verifies each state, each consecutive
/// adjacency, and the start/goal memberships; failures land in the report
/// while the walk itself is always returned for inspection.
pub fn trace_linkage(
    instance: &ProblemInstance,
    linkage: &Linkage,
    order: &[usize],
    params: &Parameters,
) -> (HPath, TraceReport) {
    let mut vertices = Vec::with_capacity(order.len() + 1);
    for h in 0..=order.len() {
        let data = build_cut_data(instance, linkage, order, h, params).expect("stage in range");
        let mut y = ColouredEdgeSet::new();
        for &(u, v) in &data.crossing {
            let colour = linkage
                .members()
                .iter()
                .position(|m| {
                    m.vertices().windows(2).any(|pair| pair == [u, v])
                })
                .expect("crossing edge lies on a member")
                + 1;
            y.insert(ColouredEdge { tail: u, head: v, colour });
        }
        vertices.push(HVertex { y, d: data.d.d().clone() });
    }

    let mut failures = Vec::new();
    for (h, hv) in vertices.iter().enumerate() {
        if let Err(violation) = is_edge_family(&hv.y, instance, params) {
            failures.push(TraceFailure::EdgeFamily { h, violation });
        }
        if let Err(edge) = hv.split_by_d() {
            failures.push(TraceFailure::SplitEnd { h, edge });
        }
    }
    for h in 0..vertices.len().saturating_sub(1) {
        if !h_adjacent(&vertices[h], &vertices[h + 1]) {
            failures.push(TraceFailure::NotAdjacent { h });
        }
    }
    if let Some(first) = vertices.first() {
        if !s0_t0_membership(first, instance).s0 {
            failures.push(TraceFailure::NotStart);
        }
    }
    if let Some(last) = vertices.last() {
        if !s0_t0_membership(last, instance).t0 {
            failures.push(TraceFailure::NotGoal);
        }
    }

    let stages = vertices.len();
    (HPath { vertices, mode: HMode::Explicit }, TraceReport { stages, failures })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SizeVerdict {
    /// A shortest p-state walk exists; the minimum linkage has p-1+2k
    /// vertices.
    Feasible { h_path: HPath, min_total_vertices: usize },
    Infeasible { certified: bool },
    BudgetExceeded { states: usize },
}

/// Decides feasibility through the state graph and converts the shortest
/// walk length into the minimum number of linkage vertices.
pub fn minimum_linkage_size_via_h(
    instance: &ProblemInstance,
    params: &Parameters,
    mode: HMode,
    budget: &SearchBudget,
) -> SizeVerdict {
    match find_h_path(instance, params, mode, budget) {
        HSearch::Found(h_path) => {
            let min_total_vertices = h_path.len() - 1 + 2 * instance.pair_count();
            SizeVerdict::Feasible { h_path, min_total_vertices }
        }
        HSearch::NoPath { certified } => SizeVerdict::Infeasible { certified },
        HSearch::BudgetExceeded { states } => SizeVerdict::BudgetExceeded { states },
    }
}
