//! Seeded verification sweeps shared by the command-line verifier and the
//! acceptance tests. Each sweep either replays a pipeline end to end on
//! generated instances or compares an optimized routine against an
//! independent brute-force check, and reports counterexamples as text plus
//! a reloadable bundle.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::auxdigraph::{
    extract_linkage, minimum_linkage_size_via_h, trace_linkage, HMode, SearchBudget, SizeVerdict,
};
use crate::digraph::{DiPath, Digraph, Linkage, ProblemInstance};
use crate::format::serialize_bundle;
use crate::generate::generate_instance;
use crate::oracle::{exists_linkage, minimum_linkage, SearchLimits};
use crate::params::{compute_parameters, ParamOverrides, Parameters};
use crate::restricted::enumerate_restricted_sets;
use crate::structure::{max_planar_matching, vertex_order, wiggle_number};

pub const DEFAULT_SEED: u64 = 0x5eed;

/// One failing case of a sweep. `bundle` reloads through `parse_bundle`
/// when the failure concerns a generated instance; comparison sweeps over
/// synthetic paths put a plain-text reproduction there instead.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub seed: u64,
    pub description: String,
    pub bundle: String,
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Feasible instance with its minimum linkage and certified vertex order,
/// reused by the separation, trace, and shift sweeps.
#[derive(Debug, Clone)]
pub struct OrderCase {
    pub seed: u64,
    pub instance: ProblemInstance,
    pub params: Parameters,
    pub minimum: Linkage,
    pub order: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct OrderSuite {
    pub outcome: SuiteOutcome,
    pub cases: Vec<OrderCase>,
}

/// Per-instance record of an equivalence sweep between the exhaustive
/// oracle and the state-graph search. The boolean flags stay true on
/// infeasible instances where the corresponding check has nothing to say.
#[derive(Debug, Clone)]
pub struct EquivalenceCase {
    pub seed: u64,
    pub oracle_min: Option<usize>,
    pub state_min: Option<usize>,
    pub verdicts_agree: bool,
    pub witness_valid: bool,
    pub size_identity: bool,
}

#[derive(Debug, Clone)]
pub struct EquivalenceSuite {
    pub outcome: SuiteOutcome,
    pub cases: Vec<EquivalenceCase>,
}

/// Compares the search oracle against plain reachability on single-pair
/// instances, where a linkage is exactly a directed s-t path.
pub fn suite_oracle_reachability(base_seed: u64, count: usize) -> SuiteOutcome {
    let mut counterexamples = Vec::new();
    for i in 0..count {
        let seed = base_seed + i as u64;
        let n = 3 + i % 8;
        let c = 1 + i % 2;
        let density = [0.1, 0.3, 0.6][i % 3];
        let plant = i % 2 == 0;
        let instance = generate_instance(seed, n, 1, c, density, plant)
            .expect("generation parameters are in range");
        let oracle = exists_linkage(&instance, SearchLimits::unbounded())
            .expect("unbounded search cannot exhaust its budget");
        let reachable = instance.digraph().reachable(instance.source(0))[instance.sink(0)];
        if oracle.feasible != reachable {
            counterexamples.push(Counterexample {
                seed,
                description: format!(
                    "oracle says feasible={} but BFS reachability says {}",
                    oracle.feasible, reachable
                ),
                bundle: serialize_bundle(&instance, None, None),
            });
        }
    }
    SuiteOutcome { name: "oracle-vs-reachability", cases: count, counterexamples }
}

/// Runs the vertex enumeration on the minimum linkage of planted feasible
/// instances across the (k, c) grid and rechecks every prefix certificate
/// against the wiggle bound w. Successful cases are returned for the
/// downstream sweeps.
pub fn suite_vertex_order(base_seed: u64, count: usize) -> OrderSuite {
    let mut counterexamples = Vec::new();
    let mut cases = Vec::new();
    for i in 0..count {
        let seed = base_seed + i as u64;
        let (k, c) = [(1, 1), (1, 2), (2, 1), (2, 2)][i % 4];
        let low = 2 * k + 1;
        let n = low + (i / 4) % (9 - low + 1);
        let density = [0.0, 0.25, 0.5][i % 3];
        let instance = generate_instance(seed, n, k, c, density, true)
            .expect("generation parameters are in range");
        let oracle = minimum_linkage(&instance, SearchLimits::unbounded())
            .expect("unbounded search cannot exhaust its budget");
        let minimum = match oracle.witness {
            Some(witness) => witness,
            None => {
                counterexamples.push(Counterexample {
                    seed,
                    description: "planted instance reported infeasible".into(),
                    bundle: serialize_bundle(&instance, None, None),
                });
                continue;
            }
        };
        let params = compute_parameters(k, c, &ParamOverrides::default());
        match vertex_order(&instance, &minimum, &params) {
            Ok(enumeration) => {
                let worst = enumeration
                    .certificates
                    .iter()
                    .map(|cert| cert.max_member_wiggle)
                    .max()
                    .unwrap_or(0);
                if worst > params.w {
                    counterexamples.push(Counterexample {
                        seed,
                        description: format!(
                            "a prefix certificate carries wiggle {worst} above the bound {}",
                            params.w
                        ),
                        bundle: serialize_bundle(&instance, Some(&minimum), None),
                    });
                } else {
                    cases.push(OrderCase {
                        seed,
                        instance,
                        params,
                        minimum,
                        order: enumeration.order,
                    });
                }
            }
            Err(counterexample) => {
                let bundle =
                    serialize_bundle(&instance, Some(&minimum), Some(&counterexample.b));
                counterexamples.push(Counterexample {
                    seed,
                    description: format!(
                        "vertex enumeration failed after {:?}: {:?}",
                        counterexample.order, counterexample.failure
                    ),
                    bundle,
                });
            }
        }
    }
    OrderSuite {
        outcome: SuiteOutcome { name: "vertex-order", cases: count, counterexamples },
        cases,
    }
}

/// Checks the three separation clauses on every stage of every case.
pub fn suite_separation(cases: &[OrderCase]) -> SuiteOutcome {
    let mut counterexamples = Vec::new();
    for case in cases {
        let report =
            crate::restricted::verify_separation(&case.instance, &case.minimum, &case.order, &case.params);
        if !report.passed() {
            let description = report
                .failures
                .iter()
                .map(|f| f.to_string())
                .collect::<Vec<_>>()
                .join("; ");
            counterexamples.push(Counterexample {
                seed: case.seed,
                description,
                bundle: serialize_bundle(&case.instance, Some(&case.minimum), None),
            });
        }
    }
    SuiteOutcome { name: "separation", cases: cases.len(), counterexamples }
}

/// Replays each minimum linkage as a state-graph walk and demands that the
/// walk verifies and that extraction reproduces the linkage exactly.
pub fn suite_trace(cases: &[OrderCase]) -> SuiteOutcome {
    let mut counterexamples = Vec::new();
    for case in cases {
        let (path, report) =
            trace_linkage(&case.instance, &case.minimum, &case.order, &case.params);
        if !report.passed() {
            let description = report
                .failures
                .iter()
                .map(|f| f.to_string())
                .collect::<Vec<_>>()
                .join("; ");
            counterexamples.push(Counterexample {
                seed: case.seed,
                description: format!("trace rejected: {description}"),
                bundle: serialize_bundle(&case.instance, Some(&case.minimum), None),
            });
            continue;
        }
        match extract_linkage(&path, &case.instance) {
            Ok(extracted) if extracted == case.minimum => {}
            Ok(extracted) => {
                counterexamples.push(Counterexample {
                    seed: case.seed,
                    description: format!(
                        "extraction returned a different linkage: {:?}",
                        extracted.members()
                    ),
                    bundle: serialize_bundle(&case.instance, Some(&case.minimum), None),
                });
            }
            Err(defect) => {
                counterexamples.push(Counterexample {
                    seed: case.seed,
                    description: format!("extraction failed: {defect}"),
                    bundle: serialize_bundle(&case.instance, Some(&case.minimum), None),
                });
            }
        }
    }
    SuiteOutcome { name: "trace", cases: cases.len(), counterexamples }
}

/// Exhaustive check of the adjacency shift along minimum linkages: if a
/// clique vertex v outside the linkage is adjacent from the last l clique
/// vertices of a subpath Q, it stays adjacent from the last l clique
/// vertices of every member subpath extending Q, for every l >= 3.
pub fn check_shift(instance: &ProblemInstance, linkage: &Linkage) -> Vec<String> {
    let digraph = instance.digraph();
    let partition = instance.partition();
    let in_linkage = linkage.vertex_set();
    let mut violations = Vec::new();

    for (index, member) in linkage.members().iter().enumerate() {
        let len = member.len();
        for outer_start in 0..len {
            for outer_end in outer_start + 1..=len {
                let outer = member.slice(outer_start..outer_end);
                for inner_start in outer_start..outer_end {
                    for inner_end in inner_start + 1..=outer_end {
                        let inner = member.slice(inner_start..inner_end);
                        for clique in 1..=partition.clique_count() {
                            let inner_hits: Vec<usize> = inner
                                .vertices()
                                .iter()
                                .copied()
                                .filter(|&v| partition.clique_of(v) == clique)
                                .collect();
                            let outer_hits: Vec<usize> = outer
                                .vertices()
                                .iter()
                                .copied()
                                .filter(|&v| partition.clique_of(v) == clique)
                                .collect();
                            for l in 3..=inner_hits.len() {
                                let inner_tail = &inner_hits[inner_hits.len() - l..];
                                let outer_tail = &outer_hits[outer_hits.len() - l..];
                                for v in partition.members(clique) {
                                    if in_linkage.contains(&v) {
                                        continue;
                                    }
                                    let from_inner =
                                        inner_tail.iter().all(|&u| digraph.has_edge(u, v));
                                    if !from_inner {
                                        continue;
                                    }
                                    let from_outer =
                                        outer_tail.iter().all(|&u| digraph.has_edge(u, v));
                                    if !from_outer {
                                        violations.push(format!(
                                            "member {index}, subpath {:?} inside {:?}, clique {clique}, l={l}: vertex {v} is adjacent from the inner tail but not from the outer tail",
                                            inner.vertices(),
                                            outer.vertices(),
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    violations
}

/// Runs the shift check over every case, expecting zero violations.
pub fn suite_shift(cases: &[OrderCase]) -> SuiteOutcome {
    let mut counterexamples = Vec::new();
    for case in cases {
        let violations = check_shift(&case.instance, &case.minimum);
        if !violations.is_empty() {
            counterexamples.push(Counterexample {
                seed: case.seed,
                description: violations.join("; "),
                bundle: serialize_bundle(&case.instance, Some(&case.minimum), None),
            });
        }
    }
    SuiteOutcome { name: "shift", cases: cases.len(), counterexamples }
}

fn equivalence_case(
    seed: u64,
    instance: &ProblemInstance,
    params: &Parameters,
    mode: HMode,
    counterexamples: &mut Vec<Counterexample>,
) -> EquivalenceCase {
    let oracle = minimum_linkage(instance, SearchLimits::unbounded())
        .expect("unbounded search cannot exhaust its budget");
    let verdict = minimum_linkage_size_via_h(instance, params, mode, &SearchBudget::unbounded());

    let mut case = EquivalenceCase {
        seed,
        oracle_min: oracle.min_total_vertices,
        state_min: None,
        verdicts_agree: true,
        witness_valid: true,
        size_identity: true,
    };
    let bundle = serialize_bundle(instance, oracle.witness.as_ref(), None);

    match verdict {
        SizeVerdict::Feasible { h_path, min_total_vertices } => {
            case.state_min = Some(min_total_vertices);
            if !oracle.feasible {
                case.verdicts_agree = false;
                counterexamples.push(Counterexample {
                    seed,
                    description: format!(
                        "{mode} search found a walk but the oracle says infeasible"
                    ),
                    bundle: bundle.clone(),
                });
            }
            match extract_linkage(&h_path, instance) {
                Ok(_) => {}
                Err(defect) => {
                    case.witness_valid = false;
                    counterexamples.push(Counterexample {
                        seed,
                        description: format!("walk extraction failed: {defect}"),
                        bundle: bundle.clone(),
                    });
                }
            }
            if oracle.feasible && case.oracle_min != case.state_min {
                case.size_identity = false;
                counterexamples.push(Counterexample {
                    seed,
                    description: format!(
                        "size identity violated: walk gives {:?}, oracle gives {:?}",
                        case.state_min, case.oracle_min
                    ),
                    bundle,
                });
            }
        }
        SizeVerdict::Infeasible { certified } => {
            if oracle.feasible {
                case.verdicts_agree = false;
                counterexamples.push(Counterexample {
                    seed,
                    description: format!(
                        "{mode} search certified infeasible but the oracle found a linkage"
                    ),
                    bundle,
                });
            } else if !certified {
                case.verdicts_agree = false;
                counterexamples.push(Counterexample {
                    seed,
                    description: format!("{mode} search refused to certify a no verdict"),
                    bundle,
                });
            }
        }
        SizeVerdict::BudgetExceeded { states } => {
            case.verdicts_agree = false;
            counterexamples.push(Counterexample {
                seed,
                description: format!("unbounded search claimed budget exhaustion at {states}"),
                bundle,
            });
        }
    }
    case
}

/// Compares the subset-mode state search against the exhaustive oracle on
/// a mixed grid of feasible and infeasible instances.
pub fn suite_powerset_equivalence(base_seed: u64, count: usize) -> EquivalenceSuite {
    let mut counterexamples = Vec::new();
    let mut cases = Vec::new();
    for i in 0..count {
        let seed = base_seed + i as u64;
        let n = 4 + i % 5;
        let k = if i % 4 == 3 && n >= 5 { 2 } else { 1 };
        let c = 1 + (i / 2) % 2;
        let density = [0.15, 0.35, 0.6][i % 3];
        let plant = i % 2 == 0;
        let instance = generate_instance(seed, n, k, c, density, plant)
            .expect("generation parameters are in range");
        let params = compute_parameters(k, c, &ParamOverrides::default());
        cases.push(equivalence_case(
            seed,
            &instance,
            &params,
            HMode::Powerset,
            &mut counterexamples,
        ));
    }
    EquivalenceSuite {
        outcome: SuiteOutcome { name: "powerset-vs-oracle", cases: count, counterexamples },
        cases,
    }
}

/// Compares the witness-backed state search against the oracle at the full
/// computed parameters, and checks that the restricted-set enumeration is
/// complete and extensionally small on these instances.
pub fn suite_explicit_equivalence(base_seed: u64, count: usize) -> EquivalenceSuite {
    let mut counterexamples = Vec::new();
    let mut cases = Vec::new();
    for i in 0..count {
        let seed = base_seed + i as u64;
        let n = 3 + i % 4;
        let density = [0.2, 0.5][i % 2];
        let plant = i % 2 == 0;
        let instance = generate_instance(seed, n, 1, 1, density, plant)
            .expect("generation parameters are in range");
        let params = compute_parameters(1, 1, &ParamOverrides::default());

        let enumeration = enumerate_restricted_sets(&instance, &params, 1 << 16);
        if !enumeration.complete {
            counterexamples.push(Counterexample {
                seed,
                description: "restricted-set enumeration did not complete".into(),
                bundle: serialize_bundle(&instance, None, None),
            });
        }
        if enumeration.sets.len() > 1 << n {
            counterexamples.push(Counterexample {
                seed,
                description: format!(
                    "enumeration produced {} distinct sets on {n} vertices",
                    enumeration.sets.len()
                ),
                bundle: serialize_bundle(&instance, None, None),
            });
        }

        cases.push(equivalence_case(
            seed,
            &instance,
            &params,
            HMode::Explicit,
            &mut counterexamples,
        ));
    }
    EquivalenceSuite {
        outcome: SuiteOutcome { name: "explicit-vs-oracle", cases: count, counterexamples },
        cases,
    }
}

/// Maximum number of disjoint (x, y) pairs appearing in order along the
/// vertex sequence, by trying every subsequence. Ground truth for the
/// greedy wiggle computation.
pub fn brute_wiggle(vertices: &[usize], x: &BTreeSet<usize>, y: &BTreeSet<usize>) -> usize {
    fn go(
        vertices: &[usize],
        x: &BTreeSet<usize>,
        y: &BTreeSet<usize>,
        at: usize,
        expect_x: bool,
    ) -> usize {
        if at == vertices.len() {
            return 0;
        }
        let mut best = go(vertices, x, y, at + 1, expect_x);
        if expect_x && x.contains(&vertices[at]) {
            best = best.max(go(vertices, x, y, at + 1, false));
        }
        if !expect_x && y.contains(&vertices[at]) {
            best = best.max(1 + go(vertices, x, y, at + 1, true));
        }
        best
    }
    go(vertices, x, y, 0, true)
}

/// Compares the greedy wiggle computation against the exhaustive
/// subsequence search on random paths with random disjoint sides.
pub fn suite_wiggle_brute(base_seed: u64, count: usize) -> SuiteOutcome {
    let mut counterexamples = Vec::new();
    for i in 0..count {
        let seed = base_seed + i as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let len = 2 + i % 9;
        let vertices: Vec<usize> = (0..len).collect();
        let mut x = BTreeSet::new();
        let mut y = BTreeSet::new();
        for &v in &vertices {
            match rng.random_range(0..3u8) {
                0 => {
                    x.insert(v);
                }
                1 => {
                    y.insert(v);
                }
                _ => {}
            }
        }
        let path = DiPath::new(vertices.clone()).expect("fresh distinct vertices");
        let greedy = wiggle_number(&path, &x, &y);
        let brute = brute_wiggle(&vertices, &x, &y);
        if greedy != brute {
            counterexamples.push(Counterexample {
                seed,
                description: format!("greedy wiggle {greedy} differs from brute force {brute}"),
                bundle: format!("path {vertices:?}\nx {x:?}\ny {y:?}\n"),
            });
        }
    }
    SuiteOutcome { name: "wiggle-vs-brute", cases: count, counterexamples }
}

/// Maximum planar matching cardinality by definition: enumerate candidate
/// members with up to one internal vertex, then search every subset that
/// stays vertex-disjoint with first and last vertices in strictly agreeing
/// order along the hosts.
pub fn brute_max_matching(
    digraph: &Digraph,
    q: &DiPath,
    r: &DiPath,
    x: &BTreeSet<usize>,
    y: &BTreeSet<usize>,
    forbidden_internal: &BTreeSet<usize>,
) -> usize {
    struct Candidate {
        q_pos: usize,
        r_pos: usize,
        vertices: Vec<usize>,
    }

    let mut candidates = Vec::new();
    for (q_pos, &u) in q.vertices().iter().enumerate() {
        if !x.contains(&u) {
            continue;
        }
        for (r_pos, &v) in r.vertices().iter().enumerate() {
            if !y.contains(&v) {
                continue;
            }
            if u == v {
                candidates.push(Candidate { q_pos, r_pos, vertices: vec![u] });
                continue;
            }
            if digraph.has_edge(u, v) {
                candidates.push(Candidate { q_pos, r_pos, vertices: vec![u, v] });
            }
            for m in 0..digraph.vertex_count() {
                if m == u || m == v || forbidden_internal.contains(&m) {
                    continue;
                }
                if digraph.has_edge(u, m) && digraph.has_edge(m, v) {
                    candidates.push(Candidate { q_pos, r_pos, vertices: vec![u, m, v] });
                }
            }
        }
    }

    fn compatible(chosen: &[&Candidate], next: &Candidate) -> bool {
        chosen.iter().all(|prior| {
            let disjoint = prior.vertices.iter().all(|v| !next.vertices.contains(v));
            let agree = (prior.q_pos < next.q_pos && prior.r_pos < next.r_pos)
                || (prior.q_pos > next.q_pos && prior.r_pos > next.r_pos);
            disjoint && agree
        })
    }

    fn search<'a>(candidates: &'a [Candidate], at: usize, chosen: &mut Vec<&'a Candidate>) -> usize {
        if at == candidates.len() {
            return chosen.len();
        }
        let mut best = search(candidates, at + 1, chosen);
        if compatible(chosen, &candidates[at]) {
            chosen.push(&candidates[at]);
            best = best.max(search(candidates, at + 1, chosen));
            chosen.pop();
        }
        best
    }

    search(&candidates, 0, &mut Vec::new())
}

/// Compares the pruned planar-matching search against the definitional
/// brute force on random host pairs, including shared-host configurations
/// and forbidden internal vertices.
pub fn suite_matching_brute(base_seed: u64, count: usize) -> SuiteOutcome {
    let mut counterexamples = Vec::new();
    for i in 0..count {
        let seed = base_seed + i as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q_len = 2 + i % 5;
        let r_len = 2 + (i / 5) % 5;
        let same_host = i % 4 == 0;
        let host_span = if same_host { q_len } else { q_len + r_len };
        let n = host_span + 3;

        let q_vertices: Vec<usize> = (0..q_len).collect();
        let r_vertices: Vec<usize> =
            if same_host { q_vertices.clone() } else { (q_len..q_len + r_len).collect() };

        let mut edges = BTreeSet::new();
        for pair in q_vertices.windows(2) {
            edges.insert((pair[0], pair[1]));
        }
        for pair in r_vertices.windows(2) {
            edges.insert((pair[0], pair[1]));
        }
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.random_bool(0.35) {
                    edges.insert((u, v));
                }
            }
        }
        let digraph = Digraph::new(n, edges).expect("vertices in range");

        let pick = |pool: &[usize], rng: &mut ChaCha8Rng| {
            let mut side = BTreeSet::new();
            for &v in pool {
                if rng.random_bool(0.5) {
                    side.insert(v);
                }
                if side.len() == 3 {
                    break;
                }
            }
            side
        };
        let x = pick(&q_vertices, &mut rng);
        let y = pick(&r_vertices, &mut rng);
        let forbidden: BTreeSet<usize> =
            (0..n).filter(|_| rng.random_bool(0.4)).collect();

        let q = DiPath::new(q_vertices).expect("fresh distinct vertices");
        let r = DiPath::new(r_vertices).expect("fresh distinct vertices");
        let threshold = n + 1;
        let fast = max_planar_matching(&digraph, &q, &r, &x, &y, &forbidden, threshold);
        let brute = brute_max_matching(&digraph, &q, &r, &x, &y, &forbidden);
        if fast.cardinality != brute {
            counterexamples.push(Counterexample {
                seed,
                description: format!(
                    "pruned search found {} members, brute force found {brute}",
                    fast.cardinality
                ),
                bundle: format!(
                    "q {:?}\nr {:?}\nx {x:?}\ny {y:?}\nforbidden {forbidden:?}\nedges {:?}\n",
                    q.vertices(),
                    r.vertices(),
                    digraph.edges().collect::<Vec<_>>(),
                ),
            });
        }
    }
    SuiteOutcome { name: "matching-vs-brute", cases: count, counterexamples }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_wiggle_matches_hand_counts() {
        // x at 0 and 2, y at 1 and 3: two alternating pairs.
        let x: BTreeSet<usize> = [0, 2].into();
        let y: BTreeSet<usize> = [1, 3].into();
        assert_eq!(brute_wiggle(&[0, 1, 2, 3], &x, &y), 2);
        // Every y sits before every x: no pair completes.
        assert_eq!(brute_wiggle(&[1, 3, 0, 2], &x, &y), 0);
        assert_eq!(brute_wiggle(&[3, 1, 0], &x, &y), 0);
        assert_eq!(brute_wiggle(&[], &x, &y), 0);
    }

    #[test]
    fn brute_matching_counts_aligned_and_reversed_hosts() {
        let digraph = Digraph::new(
            6,
            [(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)],
        )
        .unwrap();
        let q = DiPath::new(vec![0, 1, 2]).unwrap();
        let r = DiPath::new(vec![3, 4, 5]).unwrap();
        let x: BTreeSet<usize> = [0, 1, 2].into();
        let y: BTreeSet<usize> = [3, 4, 5].into();
        let none = BTreeSet::new();
        assert_eq!(brute_max_matching(&digraph, &q, &r, &x, &y, &none), 3);

        // Reversing one host leaves only single cross members usable.
        let r_rev = DiPath::new(vec![5, 4, 3]).unwrap();
        assert_eq!(brute_max_matching(&digraph, &q, &r_rev, &x, &y, &none), 1);
    }

    #[test]
    fn shift_check_accepts_a_transitive_tournament() {
        // Complete order on five vertices, one clique; the minimum linkage
        // is the direct edge, and every tail adjacency extends.
        let mut edges = Vec::new();
        for u in 0..5 {
            for v in u + 1..5 {
                edges.push((u, v));
            }
        }
        let digraph = Digraph::new(5, edges).unwrap();
        let partition = crate::digraph::CliquePartition::new(1, vec![1; 5]).unwrap();
        let instance = ProblemInstance::new(digraph, partition, vec![(0, 4)]).unwrap();
        let oracle = minimum_linkage(&instance, SearchLimits::unbounded()).unwrap();
        let violations = check_shift(&instance, &oracle.witness.unwrap());
        assert!(violations.is_empty(), "{violations:?}");
    }

    #[test]
    fn shift_check_flags_a_manufactured_violation() {
        // Member 0 -> 1 -> 2 -> 3 -> 4 in a single clique with vertex 5
        // spare: 5 is adjacent from {1, 2, 3} but not from 4, so the inner
        // subpath (1, 2, 3) satisfies the l = 3 premise while the outer
        // extension (1, 2, 3, 4) has tail {2, 3, 4} and fails it.
        let mut edges = vec![(0, 1), (1, 2), (2, 3), (3, 4)];
        edges.extend([(1, 5), (2, 5), (3, 5), (5, 4), (4, 0)]);
        for u in 0..5 {
            for v in u + 1..5 {
                if !edges.contains(&(u, v)) && !edges.contains(&(v, u)) {
                    edges.push((u, v));
                }
            }
        }
        edges.push((0, 5));
        let digraph = Digraph::new(6, edges).unwrap();
        let partition = crate::digraph::CliquePartition::new(1, vec![1; 6]).unwrap();
        let instance = ProblemInstance::new(digraph, partition, vec![(0, 4)]).unwrap();
        let member = DiPath::new(vec![0, 1, 2, 3, 4]).unwrap();
        let linkage = Linkage::new(vec![member]);
        let violations = check_shift(&instance, &linkage);
        assert!(
            violations.iter().any(|v| v.contains("vertex 5")),
            "{violations:?}"
        );
    }
}
