//! Growth-rate combinatorics on the naturals: function specifications with
//! exact evaluation, monotone restrictions, gap witnesses, iterate towers
//! and class enumerators.
//!
//! Every "there exists an infinite set such that …" statement in the
//! comparison theory becomes, here, a horizon-bounded search inside the
//! strongest set a [`FilterModel`] accepts. The results are *finite
//! witnesses*: they satisfy their defining inequality at every checked
//! pair, and they are found inside an accepted set, but they are never
//! claimed to be accepted sets themselves.
//!
//! Searches are deterministic. Greedy constructions take the first fitting
//! element; the monotone restriction takes the longest nondecreasing
//! selection (computed exactly by patience sorting, with a fixed
//! tie-breaking order), because a first-fit selection can be trapped far
//! below the achievable length.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::budget::{Budget, BudgetExceeded};
use crate::index_set::{EventuallyPeriodic, ExplicitSet, IndexSet, TailTag};
use crate::oracle::FilterModel;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GrowthError {
    #[error("argument {arg} is outside the function's domain")]
    OutOfDomain { arg: BigInt },
    #[error("overlapping domain pieces disagree at {m}: {values:?}")]
    AmbiguousOverlap { m: BigInt, values: Vec<BigInt> },
    #[error("function value {value} is negative; values must be naturals")]
    NegativeValue { value: BigInt },
    #[error("division by zero while evaluating")]
    DivisionByZero,
    #[error("function is not nondecreasing: value drops at n={at}")]
    NotNondecreasing { at: u64 },
    #[error(
        "not interval-to-one: value {value} reappears at n={reappears_at} after its run ended"
    )]
    NotIntervalToOne { value: BigInt, reappears_at: u64 },
    #[error("no witness within the horizon")]
    NoWitnessWithinHorizon,
    #[error("horizon too small: the computed base set has {found} elements, need at least {need}")]
    HorizonTooSmall { found: usize, need: usize },
    #[error(transparent)]
    WorkBudgetExceeded(#[from] BudgetExceeded),
}

/// Closed-form expression in `n` over exact integer arithmetic.
///
/// `floor_div` and `mod` are defined on naturals only; `abs` makes
/// intermediate negatives usable; `pow2` is the power of two; `compose`
/// substitutes the second expression into the first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FuncExpr {
    Var,
    Const(BigInt),
    Add(Box<FuncExpr>, Box<FuncExpr>),
    Sub(Box<FuncExpr>, Box<FuncExpr>),
    Mul(Box<FuncExpr>, Box<FuncExpr>),
    FloorDiv(Box<FuncExpr>, Box<FuncExpr>),
    Mod(Box<FuncExpr>, Box<FuncExpr>),
    Abs(Box<FuncExpr>),
    Pow2(Box<FuncExpr>),
    Compose(Box<FuncExpr>, Box<FuncExpr>),
}

impl FuncExpr {
    pub fn constant(c: u64) -> FuncExpr {
        FuncExpr::Const(BigInt::from(c))
    }

    fn eval(&self, n: &BigInt, budget: &Budget) -> Result<BigInt, GrowthError> {
        budget.charge(1)?;
        Ok(match self {
            FuncExpr::Var => n.clone(),
            FuncExpr::Const(c) => c.clone(),
            FuncExpr::Add(a, b) => a.eval(n, budget)? + b.eval(n, budget)?,
            FuncExpr::Sub(a, b) => a.eval(n, budget)? - b.eval(n, budget)?,
            FuncExpr::Mul(a, b) => a.eval(n, budget)? * b.eval(n, budget)?,
            FuncExpr::FloorDiv(a, b) => {
                let (av, bv) = (a.eval(n, budget)?, b.eval(n, budget)?);
                if bv.is_zero() {
                    return Err(GrowthError::DivisionByZero);
                }
                require_natural(&av)?;
                require_natural(&bv)?;
                av.div_floor(&bv)
            }
            FuncExpr::Mod(a, b) => {
                let (av, bv) = (a.eval(n, budget)?, b.eval(n, budget)?);
                if bv.is_zero() {
                    return Err(GrowthError::DivisionByZero);
                }
                require_natural(&av)?;
                require_natural(&bv)?;
                av.mod_floor(&bv)
            }
            FuncExpr::Abs(a) => a.eval(n, budget)?.abs(),
            FuncExpr::Pow2(a) => {
                let exp = a.eval(n, budget)?;
                require_natural(&exp)?;
                let Some(exp) = exp.to_u64() else {
                    // 2^exp would not fit in any budget we hand out.
                    return Err(BudgetExceeded {
                        spent: budget.spent(),
                        limit: budget.limit(),
                    }
                    .into());
                };
                budget.charge(exp)?;
                BigInt::one() << exp
            }
            FuncExpr::Compose(f, g) => {
                let x = g.eval(n, budget)?;
                require_natural(&x)?;
                f.eval(&x, budget)?
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            FuncExpr::Add(..) | FuncExpr::Sub(..) => 1,
            FuncExpr::Mul(..) => 2,
            _ => 3,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < min {
            write!(f, "(")?;
        }
        match self {
            FuncExpr::Var => write!(f, "n")?,
            FuncExpr::Const(c) => write!(f, "{c}")?,
            FuncExpr::Add(a, b) => {
                a.fmt_prec(f, prec)?;
                write!(f, " + ")?;
                b.fmt_prec(f, prec + 1)?;
            }
            FuncExpr::Sub(a, b) => {
                a.fmt_prec(f, prec)?;
                write!(f, " - ")?;
                b.fmt_prec(f, prec + 1)?;
            }
            FuncExpr::Mul(a, b) => {
                a.fmt_prec(f, prec)?;
                write!(f, " * ")?;
                b.fmt_prec(f, prec + 1)?;
            }
            FuncExpr::FloorDiv(a, b) => {
                write!(f, "floor_div(")?;
                a.fmt_prec(f, 0)?;
                write!(f, ", ")?;
                b.fmt_prec(f, 0)?;
                write!(f, ")")?;
            }
            FuncExpr::Mod(a, b) => {
                write!(f, "mod(")?;
                a.fmt_prec(f, 0)?;
                write!(f, ", ")?;
                b.fmt_prec(f, 0)?;
                write!(f, ")")?;
            }
            FuncExpr::Abs(a) => {
                write!(f, "abs(")?;
                a.fmt_prec(f, 0)?;
                write!(f, ")")?;
            }
            FuncExpr::Pow2(a) => {
                write!(f, "pow2(")?;
                a.fmt_prec(f, 0)?;
                write!(f, ")")?;
            }
            FuncExpr::Compose(a, b) => {
                write!(f, "compose(")?;
                a.fmt_prec(f, 0)?;
                write!(f, ", ")?;
                b.fmt_prec(f, 0)?;
                write!(f, ")")?;
            }
        }
        if prec < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for FuncExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

fn require_natural(v: &BigInt) -> Result<(), GrowthError> {
    if v.is_negative() {
        return Err(GrowthError::NegativeValue { value: v.clone() });
    }
    Ok(())
}

/// A total function on an initial segment of ℕ, given as a table, a closed
/// form, or one of the named functions of the comparison theory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FuncSpec {
    /// Values on `0..=H` for the horizon the table was built for.
    Table(Vec<u64>),
    Closed(FuncExpr),
    /// The minimal-step function peaking at `2^(k-1)` on each dyadic
    /// interval `[2^k, 2^(k+1)]`, `k >= 1`.
    F0,
    /// The minimal-step function on `[3·2^(2k), 3·2^(2k+2)]`, `k >= 1`.
    F1,
    /// The minimal-step function on `[3·2^(2k-1), 3·2^(2k+1)]`, `k >= 1`.
    F2,
    /// The fast-growing hierarchy `A(m, ·)` defined by `A(0,n) = n+1` and
    /// `A(m+1, n) = A(m, ·)` iterated `n+1` times starting at 1. This is
    /// the recursion used in the source theory, which differs from the
    /// textbook Ackermann–Péter values.
    Ackermann(u64),
    /// `f` iterated `f(n)` times starting at `n` (zero iterations when
    /// `f(n) = 0`).
    Tilde(Box<FuncSpec>),
}

impl FuncSpec {
    pub fn closed(e: FuncExpr) -> FuncSpec {
        FuncSpec::Closed(e)
    }

    pub fn table(values: Vec<u64>) -> FuncSpec {
        FuncSpec::Table(values)
    }

    pub fn tilde(inner: FuncSpec) -> FuncSpec {
        FuncSpec::Tilde(Box::new(inner))
    }

    /// Exact value at `n`. Values are naturals; a negative result is an
    /// error, not a wraparound.
    pub fn eval(&self, n: u64, budget: &Budget) -> Result<BigInt, GrowthError> {
        let v = self.eval_big(&BigInt::from(n), budget)?;
        require_natural(&v)?;
        Ok(v)
    }

    fn eval_big(&self, n: &BigInt, budget: &Budget) -> Result<BigInt, GrowthError> {
        budget.charge(1)?;
        match self {
            FuncSpec::Table(values) => {
                let idx = n
                    .to_usize()
                    .filter(|&i| i < values.len())
                    .ok_or_else(|| GrowthError::OutOfDomain { arg: n.clone() })?;
                Ok(BigInt::from(values[idx]))
            }
            FuncSpec::Closed(e) => e.eval(n, budget),
            FuncSpec::F0 | FuncSpec::F1 | FuncSpec::F2 => minimal_step_value(self, n),
            FuncSpec::Ackermann(m) => {
                require_natural(n)?;
                ackermann_eval(*m, n, budget)
            }
            FuncSpec::Tilde(inner) => {
                require_natural(n)?;
                let count = inner.eval_big(n, budget)?;
                require_natural(&count)?;
                let mut x = n.clone();
                let mut i = BigInt::zero();
                while i < count {
                    budget.charge(1)?;
                    x = inner.eval_big(&x, budget)?;
                    require_natural(&x)?;
                    i += 1;
                }
                Ok(x)
            }
        }
    }

    /// All values on `0..=horizon`.
    pub fn table_on(&self, horizon: u64, budget: &Budget) -> Result<Vec<BigInt>, GrowthError> {
        (0..=horizon).map(|n| self.eval(n, budget)).collect()
    }
}

impl fmt::Display for FuncSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FuncSpec::Table(values) => {
                write!(f, "table(")?;
                for (i, v) in values.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, ")")
            }
            FuncSpec::Closed(e) => write!(f, "{e}"),
            FuncSpec::F0 => write!(f, "f0"),
            FuncSpec::F1 => write!(f, "f1"),
            FuncSpec::F2 => write!(f, "f2"),
            FuncSpec::Ackermann(m) => write!(f, "ackermann({m})"),
            FuncSpec::Tilde(inner) => write!(f, "tilde({inner})"),
        }
    }
}

/// The three minimal-step functions: tent maps over a doubling sequence of
/// intervals. Where two consecutive intervals share an endpoint, both
/// parameterizations are evaluated and must agree (they do — at shared
/// endpoints the value is 0 — but this is verified, not assumed).
fn minimal_step_value(which: &FuncSpec, m: &BigInt) -> Result<BigInt, GrowthError> {
    // For parameter k >= 1: the domain piece [lo_k, hi_k] and the tent
    // 'height - |center - m|'.
    let piece = |k: u64| -> (BigInt, BigInt, BigInt, BigInt) {
        let pow = |e: u64| BigInt::one() << e;
        match which {
            FuncSpec::F0 => (pow(k), pow(k + 1), pow(k - 1), BigInt::from(3) * pow(k - 1)),
            FuncSpec::F1 => (
                BigInt::from(3) * pow(2 * k),
                BigInt::from(3) * pow(2 * k + 2),
                BigInt::from(9) * pow(2 * k - 1),
                BigInt::from(15) * pow(2 * k - 1),
            ),
            FuncSpec::F2 => (
                BigInt::from(3) * pow(2 * k - 1),
                BigInt::from(3) * pow(2 * k + 1),
                BigInt::from(9) * pow(2 * k - 2),
                BigInt::from(15) * pow(2 * k - 2),
            ),
            _ => unreachable!("only the minimal-step functions reach here"),
        }
    };
    let mut values: Vec<BigInt> = Vec::new();
    let mut k = 1u64;
    loop {
        let (lo, hi, height, center) = piece(k);
        if &lo > m {
            break;
        }
        if m >= &lo && m <= &hi {
            values.push(height - (center - m).abs());
        }
        k += 1;
    }
    values.dedup();
    match values.len() {
        0 => Err(GrowthError::OutOfDomain { arg: m.clone() }),
        1 => Ok(values.pop().expect("one value")),
        _ => Err(GrowthError::AmbiguousOverlap {
            m: m.clone(),
            values,
        }),
    }
}

/// `A(0,n) = n+1`; `A(m+1,n) = A(m,·)` iterated `n+1` times starting at 1.
fn ackermann_eval(m: u64, n: &BigInt, budget: &Budget) -> Result<BigInt, GrowthError> {
    budget.charge(1)?;
    if m == 0 {
        return Ok(n + 1);
    }
    let count = n + 1;
    let mut x = BigInt::one();
    let mut i = BigInt::zero();
    while i < count {
        x = ackermann_eval(m - 1, &x, budget)?;
        i += 1;
    }
    Ok(x)
}

/// The longest nondecreasing selection from `values`, as positions into the
/// slice, computed by patience sorting. Deterministic: each element lands
/// on the leftmost admissible pile, and the chain is reconstructed from the
/// recorded predecessors.
pub fn longest_nondecreasing<T: Ord>(values: &[T]) -> Vec<usize> {
    let mut pile_tops: Vec<usize> = Vec::new();
    let mut predecessor: Vec<Option<usize>> = vec![None; values.len()];
    for i in 0..values.len() {
        // First pile whose top is strictly greater than values[i]; tops are
        // nondecreasing left to right, so binary search applies.
        let j = pile_tops.partition_point(|&t| values[t] <= values[i]);
        if j > 0 {
            predecessor[i] = Some(pile_tops[j - 1]);
        }
        if j == pile_tops.len() {
            pile_tops.push(i);
        } else {
            pile_tops[j] = i;
        }
    }
    let mut chain = Vec::with_capacity(pile_tops.len());
    let mut cur = pile_tops.last().copied();
    while let Some(i) = cur {
        chain.push(i);
        cur = predecessor[i];
    }
    chain.reverse();
    chain
}

/// A set of indices on which a function is nondecreasing, found inside the
/// model's strongest accepted set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneWitness {
    /// The selected indices, increasing.
    pub indices: Vec<u64>,
    /// The function values on the selected indices, nondecreasing.
    pub values: Vec<BigInt>,
    /// The accepted set the search ran inside.
    pub search_space: EventuallyPeriodic,
    horizon: u64,
}

impl MonotoneWitness {
    /// The witness as a finite index set (nothing is claimed beyond the
    /// horizon).
    pub fn index_set(&self) -> IndexSet {
        IndexSet::Explicit(ExplicitSet::from_members(
            &self.indices,
            self.horizon,
            TailTag::Unknown,
        ))
    }
}

/// A set of indices on which `f` is nondecreasing: the longest such
/// selection inside the model's strongest accepted set, restricted to
/// `0..=horizon`.
pub fn monotone_restriction(
    f: &FuncSpec,
    model: &FilterModel,
    horizon: u64,
    budget: &Budget,
) -> Result<MonotoneWitness, GrowthError> {
    let space = model.intersection().clone();
    let candidates = space.members_up_to(horizon);
    if candidates.is_empty() {
        return Err(GrowthError::NoWitnessWithinHorizon);
    }
    budget.charge(candidates.len() as u64)?;
    let values: Vec<BigInt> = candidates
        .iter()
        .map(|&n| f.eval(n, budget))
        .collect::<Result<_, _>>()?;
    let positions = longest_nondecreasing(&values);
    let indices: Vec<u64> = positions.iter().map(|&p| candidates[p]).collect();
    let values: Vec<BigInt> = positions.iter().map(|&p| values[p].clone()).collect();
    debug_assert!(values.windows(2).all(|w| w[0] <= w[1]));
    Ok(MonotoneWitness {
        indices,
        values,
        search_space: space,
        horizon,
    })
}

/// The reduction of an arbitrary function to one whose equal-value classes
/// are contiguous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalToOneReduction {
    /// `g(n)` = the least `m <= horizon` with `f(m) = f(n)`.
    pub g: FuncSpec,
    /// Indices on which `g` is nondecreasing — there, equal values of `g`
    /// sit in contiguous runs, so `g` agrees with an interval-to-one
    /// function on the witness.
    pub witness: MonotoneWitness,
}

/// Replace `f` by the least-member function of its value classes and find
/// a witness on which that function is interval-to-one.
pub fn interval_to_one_reduce(
    f: &FuncSpec,
    model: &FilterModel,
    horizon: u64,
    budget: &Budget,
) -> Result<IntervalToOneReduction, GrowthError> {
    let values = f.table_on(horizon, budget)?;
    let mut first_seen: HashMap<&BigInt, u64> = HashMap::new();
    let mut least: Vec<u64> = Vec::with_capacity(values.len());
    for (n, v) in values.iter().enumerate() {
        let m = *first_seen.entry(v).or_insert(n as u64);
        least.push(m);
    }
    let g = FuncSpec::Table(least);
    let witness = monotone_restriction(&g, model, horizon, budget)?;
    // On the witness, equal values form contiguous runs: verified, not
    // assumed (it follows from monotonicity, but this is the contract).
    for w in witness.values.windows(2) {
        debug_assert!(w[0] <= w[1]);
    }
    let mut seen_and_left: Vec<&BigInt> = Vec::new();
    for v in &witness.values {
        if let Some(&last) = seen_and_left.last() {
            if v != last && seen_and_left.contains(&v) {
                unreachable!("nondecreasing selection cannot revisit a value");
            }
        }
        if seen_and_left.last() != Some(&v) {
            seen_and_left.push(v);
        }
    }
    Ok(IntervalToOneReduction { g, witness })
}

/// Outcome of checking `f(u_n) < u_{n+1} - u_n` over consecutive elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapConditionReport {
    pub holds: bool,
    /// The first consecutive pair violating the inequality, if any.
    pub first_violation: Option<(u64, u64)>,
}

/// Check the gap condition `f(u_n) < u_{n+1} - u_n` for all consecutive
/// elements of `u` up to the horizon. `f` must be nondecreasing on
/// `0..=horizon`.
pub fn check_gap_condition(
    f: &FuncSpec,
    u: &IndexSet,
    horizon: u64,
    budget: &Budget,
) -> Result<GapConditionReport, GrowthError> {
    let values = f.table_on(horizon, budget)?;
    if let Some(at) = values.windows(2).position(|w| w[0] > w[1]) {
        return Err(GrowthError::NotNondecreasing { at: at as u64 + 1 });
    }
    let members = u.members_up_to(horizon);
    budget.charge(members.len() as u64)?;
    for pair in members.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if values[a as usize] >= BigInt::from(b - a) {
            return Ok(GapConditionReport {
                holds: false,
                first_violation: Some((a, b)),
            });
        }
    }
    Ok(GapConditionReport {
        holds: true,
        first_violation: None,
    })
}

/// A finite witness satisfying a growth inequality at every consecutive
/// pair, found greedily inside the model's strongest accepted set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthWitness {
    pub elements: Vec<u64>,
    pub search_space: EventuallyPeriodic,
    horizon: u64,
}

impl GrowthWitness {
    pub fn index_set(&self) -> IndexSet {
        IndexSet::Explicit(ExplicitSet::from_members(
            &self.elements,
            self.horizon,
            TailTag::Unknown,
        ))
    }
}

/// Greedy subsequence with `u_{n+1} > 2·u_n` inside the model's strongest
/// accepted set. Starts from the least positive candidate (from 0 the
/// doubling constraint would be vacuous) and needs at least two elements.
pub fn doubling_set(
    model: &FilterModel,
    horizon: u64,
    budget: &Budget,
) -> Result<GrowthWitness, GrowthError> {
    let space = model.intersection().clone();
    let mut elements: Vec<u64> = Vec::new();
    for c in space.members_up_to(horizon) {
        budget.charge(1)?;
        if c == 0 {
            continue;
        }
        match elements.last() {
            None => elements.push(c),
            Some(&last) if c > 2 * last => elements.push(c),
            _ => {}
        }
    }
    if elements.len() < 2 {
        return Err(GrowthError::NoWitnessWithinHorizon);
    }
    Ok(GrowthWitness {
        elements,
        search_space: space,
        horizon,
    })
}

/// Greedy subsequence with `u_{n+1} > f(u_n)` (and strictly increasing)
/// inside the model's strongest accepted set, seeded at the least
/// candidate.
pub fn rapid_set(
    f: &FuncSpec,
    model: &FilterModel,
    horizon: u64,
    budget: &Budget,
) -> Result<GrowthWitness, GrowthError> {
    let space = model.intersection().clone();
    let mut elements: Vec<u64> = Vec::new();
    let mut threshold: Option<BigInt> = None;
    for c in space.members_up_to(horizon) {
        budget.charge(1)?;
        let big_c = BigInt::from(c);
        let admissible = match (&threshold, elements.last()) {
            (None, None) => true,
            (Some(t), Some(&last)) => c > last && big_c > *t,
            _ => unreachable!("threshold and last element move together"),
        };
        if admissible {
            threshold = Some(f.eval(c, budget)?);
            elements.push(c);
        }
    }
    if elements.is_empty() {
        return Err(GrowthError::NoWitnessWithinHorizon);
    }
    Ok(GrowthWitness {
        elements,
        search_space: space,
        horizon,
    })
}

/// Right endpoints of the value classes of an interval-to-one function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassEnumeration {
    /// `gplus[n]` = the largest index in `n`'s value class, defined on the
    /// complete classes (indices `0..=last_complete`).
    pub gplus: Vec<u64>,
    /// The sorted range of `gplus`: one right endpoint per complete class.
    pub right_endpoints: Vec<u64>,
    /// Start of the final class, which may continue past the horizon and
    /// is therefore excluded from `gplus`.
    pub incomplete_from: u64,
}

/// For an interval-to-one `g` on `0..=horizon`: the class-maximum function
/// and the enumeration of its range. The class containing the horizon
/// cannot be known to be complete and is flagged instead of used.
pub fn class_enumeration(
    g: &FuncSpec,
    horizon: u64,
    budget: &Budget,
) -> Result<ClassEnumeration, GrowthError> {
    let values = g.table_on(horizon, budget)?;
    // Runs of equal values; interval-to-one means no value recurs later.
    let mut runs: Vec<(u64, u64)> = Vec::new(); // (start, end) inclusive
    for (n, v) in values.iter().enumerate() {
        match runs.last_mut() {
            Some((start, end)) if values[*start as usize] == *v => *end = n as u64,
            _ => runs.push((n as u64, n as u64)),
        }
    }
    let mut seen: HashMap<&BigInt, u64> = HashMap::new();
    for &(start, _) in &runs {
        let v = &values[start as usize];
        if let Some(&earlier) = seen.get(v) {
            let _ = earlier;
            return Err(GrowthError::NotIntervalToOne {
                value: v.clone(),
                reappears_at: start,
            });
        }
        seen.insert(v, start);
    }
    let (incomplete_from, _) = *runs.last().expect("horizon >= 0 gives one run");
    let mut gplus = Vec::new();
    let mut right_endpoints = Vec::new();
    for &(start, end) in &runs[..runs.len() - 1] {
        for _ in start..=end {
            gplus.push(end);
        }
        right_endpoints.push(end);
    }
    Ok(ClassEnumeration {
        gplus,
        right_endpoints,
        incomplete_from,
    })
}

/// A function eventually above every listed one, built from the gaps of a
/// common base set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominatingFunction {
    /// The base set: intersection of all supplied witness sets up to the
    /// horizon.
    pub base: Vec<u64>,
    /// `table[m]` = the least gap `v' - v` over pairs `v' > v >= m` in the
    /// base set; defined for `m` up to the second-largest base element.
    pub table: Vec<u64>,
    /// For each supplied function, the least index from which the
    /// dominating function stays strictly above it on the checked range;
    /// `None` when that never happens within the range.
    pub thresholds: Vec<Option<u64>>,
}

impl DominatingFunction {
    pub fn eval(&self, m: u64) -> Option<u64> {
        self.table.get(m as usize).copied()
    }
}

/// Build the least-gap function of the intersection of the witness sets
/// and report from where it dominates each supplied function.
pub fn dominating_function(
    witnessed: &[(FuncSpec, IndexSet)],
    horizon: u64,
    budget: &Budget,
) -> Result<DominatingFunction, GrowthError> {
    let mut base: Vec<u64> = (0..=horizon).collect();
    for (_, u) in witnessed {
        let members = u.members_up_to(horizon);
        base.retain(|m| members.binary_search(m).is_ok());
    }
    budget.charge(base.len() as u64 + horizon + 1)?;
    if base.len() < 2 {
        return Err(GrowthError::HorizonTooSmall {
            found: base.len(),
            need: 2,
        });
    }
    // Least gap over pairs >= m: a suffix minimum of consecutive gaps
    // (non-consecutive pairs never beat the consecutive ones between them).
    let gaps: Vec<u64> = base.windows(2).map(|w| w[1] - w[0]).collect();
    let mut suffix_min = vec![0u64; gaps.len()];
    let mut acc = u64::MAX;
    for j in (0..gaps.len()).rev() {
        acc = acc.min(gaps[j]);
        suffix_min[j] = acc;
    }
    let last_usable = base[base.len() - 2];
    let mut table = Vec::with_capacity(last_usable as usize + 1);
    let mut j = 0usize;
    for m in 0..=last_usable {
        while base[j] < m {
            j += 1;
        }
        table.push(suffix_min[j]);
    }
    let mut thresholds = Vec::with_capacity(witnessed.len());
    for (f, _) in witnessed {
        let mut threshold = None;
        // Scan from the top; the threshold is the start of the final
        // stretch on which dominance holds.
        let mut k = table.len();
        while k > 0 {
            let m = (k - 1) as u64;
            if BigInt::from(table[k - 1]) > f.eval(m, budget)? {
                threshold = Some(m);
                k -= 1;
            } else {
                break;
            }
        }
        thresholds.push(threshold);
    }
    Ok(DominatingFunction {
        base,
        table,
        thresholds,
    })
}
