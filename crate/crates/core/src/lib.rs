//! Exact comparison of definable point sets by counting.
//!
//! This crate decides whether two sets of lattice points are equinumerous —
//! not approximately, by density or measure, but exactly, in the sense of a
//! size notion finer than cardinality: a part is always strictly smaller
//! than the whole, sizes add over disjoint unions and multiply over
//! products, and finite sets compare by cardinality.
//!
//! Sizes of infinite sets are compared through their *counting sequences*:
//! `|X|_n` is the number of points of `X` with all coordinates `<= n`. Two
//! sets have equal size exactly when the agreement set
//! `{n : |X|_n = |Y|_n}` is accepted by a *counting oracle* — a consistent
//! yes/no assignment on index sets that contains all cofinite sets and is
//! closed under supersets and finite intersections. Different oracles may
//! order the same pair differently; everything this crate reports is
//! therefore tagged with the scope of its validity: true for every oracle,
//! or conditional on the commitments of a particular one.
//!
//! The crate computes exactly throughout (arbitrary-precision integers and
//! rationals, eventually periodic index sets, quasi-polynomial counting
//! tails) and bounds its own work: operations that could enumerate large
//! spaces draw from an explicit work budget and fail honestly rather than
//! approximate.

pub mod budget;
pub mod gen;
pub mod growth;
pub mod index_set;
pub mod numerosity;
pub mod oracle;
pub mod pointset;
pub mod poly;
pub mod ramsey;
pub mod seq;
pub mod series;

pub use budget::{Budget, BudgetExceeded, DEFAULT_BUDGET};
pub use growth::{
    check_gap_condition, class_enumeration, dominating_function, doubling_set,
    interval_to_one_reduce, longest_nondecreasing, monotone_restriction, rapid_set,
    ClassEnumeration, DominatingFunction, FuncExpr, FuncSpec, GapConditionReport, GrowthError,
    GrowthWitness, IntervalToOneReduction, MonotoneWitness,
};
pub use index_set::{EventuallyPeriodic, ExplicitSet, IndexSet, TailTag};
pub use numerosity::{
    axiom_check, bounded_tuple_count, bounded_tuple_sequence, build_subset_representative,
    build_u_congruence, compare, equinumerous, num_add, num_mul, Axiom, AxiomEntry, AxiomReport,
    AxiomSample, CheckOutcome, Congruence, Numerosity, NumerosityError, Scope, SubsetWitness,
    Verdict, VerdictKind,
};
pub use oracle::{FilterModel, Membership, OracleError, QueryResult};
pub use pointset::{Point, PointSetError, PointSetExpr};
pub use poly::{Polynomial, QuasiPolynomial};
pub use ramsey::{
    in_base, in_family, in_rho, initial_segment_in, interval_growth, is_large_at_horizon, nu,
    Coloring, Family, FiniteNatSet, Interval, LargenessEntry, LargenessReport, RamseyError,
    RhoAnswer, SearchStrategy,
};
pub use seq::{CountingSequence, SeqError, SignPattern, Tail};
pub use series::{
    decompose_bounded, difference_in_gauge_ideal, positive_to_characteristic, BoundedDecomposition,
    CharacteristicWitness, SeriesError, SeriesExpr,
};
