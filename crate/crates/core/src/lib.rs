//! Vertex-disjoint directed path linkages in digraphs whose vertex set is
//! partitioned into semicomplete cliques.
//!
//! The crate provides the instance model and text format, a brute-force
//! oracle, the acceptable-set machinery used to order linkage vertices, the
//! restricted-set layer that compresses cut histories, the auxiliary search
//! digraph whose shortest paths encode minimum linkages, and the property
//! suites the CLI's `verify` command runs.

pub mod auxdigraph;
pub mod digraph;
pub mod format;
pub mod generate;
pub mod oracle;
pub mod params;
pub mod restricted;
pub mod structure;
pub mod suite;

pub use auxdigraph::{
    extract_linkage, find_h_path, h_adjacent, is_edge_family, minimum_linkage_size_via_h,
    s0_t0_membership, trace_linkage, ColouredEdge, ColouredEdgeSet, EdgeFamilyViolation, HMode,
    HPath, HSearch, HVertex, MalformedUnion, SearchBudget, SizeVerdict, TerminalMembership,
    TraceFailure, TraceReport,
};
pub use digraph::{
    is_minimal_path, validate_clique_partition, validate_linkage, CliquePartition, Digraph,
    DiPath, Linkage, LinkageDefect, PartitionViolation, ProblemInstance,
};
pub use format::{parse_bundle, parse_instance, serialize_bundle, serialize_instance, Bundle};
pub use generate::generate_instance;
pub use oracle::{
    enumerate_minimum_linkages, exists_linkage, minimum_linkage, BudgetExceeded,
    MinimumEnumeration, OracleResult, SearchLimits,
};
pub use params::{compute_parameters, ParamOverrides, Parameters};
pub use restricted::{
    build_cut_data, enumerate_restricted_sets, family_minus, family_plus, up_to_s_sequence,
    verify_separation, CutData, RestrictedEnumeration, RestrictedSet, RestrictednessViolation,
    SeparationFailure, SeparationReport, SequenceEnd, SequenceFamily, StageVerdict,
    VertexSequence,
};
pub use suite::{
    brute_max_matching, brute_wiggle, check_shift, suite_explicit_equivalence,
    suite_matching_brute, suite_oracle_reachability, suite_powerset_equivalence,
    suite_separation, suite_shift, suite_trace, suite_vertex_order, suite_wiggle_brute,
    Counterexample, EquivalenceCase, EquivalenceSuite, OrderCase, OrderSuite, SuiteOutcome,
    DEFAULT_SEED,
};
pub use structure::{
    disjoint_wiggle_segments, extend_acceptable, is_acceptable, is_c_acceptable,
    max_planar_matching, vertex_order, wiggle_number, AcceptabilityViolation, CliqueViolation,
    CutState, Extension, MatchingResult, OrderCounterexample, OrderFailure, PlanarMatching,
    PrefixCertificate, VertexEnumeration,
};
