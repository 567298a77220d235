//! Definable point sets over tuples of naturals.
//!
//! A [`PointSetExpr`] denotes a decidable subset of `ℕ^k` for a fixed
//! dimension `k >= 1`, built from finite sets, integer ranges, arithmetic
//! progressions, cartesian products, boolean combinations and lifts
//! (`{P} × X`). The key quantity everywhere is the truncation census
//! `|X_n|`: the number of elements whose coordinates are all `<= n`.
//!
//! Counting is exact and arbitrary-precision. Structured expressions are
//! counted in closed form; boolean nodes fall back to inclusion–exclusion
//! and budgeted enumeration. Running out of budget is an error, never an
//! approximation.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::budget::{Budget, BudgetExceeded};
use crate::poly::{Polynomial, QuasiPolynomial};
use crate::seq::{CountingSequence, Tail};

/// A point of `ℕ^k`, `k >= 1`. Ordering is lexicographic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point(Vec<u64>);

impl Point {
    /// Build a point; `coords` must be nonempty.
    pub fn new(coords: Vec<u64>) -> Self {
        assert!(!coords.is_empty(), "a point needs at least one coordinate");
        Point(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn max_coord(&self) -> u64 {
        *self.0.iter().max().expect("points are nonempty")
    }

    /// All coordinates `<= n`, i.e. membership in the `n`-box.
    pub fn bounded_by(&self, n: u64) -> bool {
        self.0.iter().all(|&c| c <= n)
    }

    /// Concatenation `(self, other)` in `ℕ^{h+k}`.
    pub fn concat(&self, other: &Point) -> Point {
        let mut coords = self.0.clone();
        coords.extend_from_slice(&other.0);
        Point(coords)
    }
}

impl From<u64> for Point {
    fn from(c: u64) -> Self {
        Point(vec![c])
    }
}

impl fmt::Display for Point {
    /// Renders as `(1,2)`; one-dimensional points as `(5)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PointSetError {
    /// A boolean combination (or finite literal) mixes dimensions.
    #[error("heterogeneous combination: operand dimensions {left} and {right} differ")]
    HeterogeneousUnion { left: usize, right: usize },
    /// A point was tested against a set of a different dimension.
    #[error("dimension mismatch: point has dimension {point}, set has dimension {set}")]
    DimensionMismatch { point: usize, set: usize },
    #[error(transparent)]
    WorkBudgetExceeded(#[from] BudgetExceeded),
}

/// A definable subset of `ℕ^k`.
///
/// Expressions are immutable values; all operations are pure. The
/// constructors below enforce the local invariants (nonzero progression
/// step, homogeneous finite literals); cross-operand dimension agreement is
/// checked by [`PointSetExpr::dimension`], which every operation consults.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PointSetExpr {
    /// An explicit finite set; points are sorted and deduplicated, all of
    /// dimension `dim` (which also covers the empty literal).
    Finite {
        dim: usize,
        points: Vec<Point>,
    },
    /// `{ lo, lo+1, …, hi } ⊆ ℕ^1`; empty when `lo > hi`.
    Range {
        lo: u64,
        hi: u64,
    },
    /// `{ base + i·step : i ∈ ℕ } ⊆ ℕ^1`, `step >= 1`.
    Ap {
        base: u64,
        step: u64,
    },
    /// Cartesian product (dimensions add).
    Product(Box<PointSetExpr>, Box<PointSetExpr>),
    Union(Box<PointSetExpr>, Box<PointSetExpr>),
    Intersect(Box<PointSetExpr>, Box<PointSetExpr>),
    Diff(Box<PointSetExpr>, Box<PointSetExpr>),
    /// `{tag} × inner`: every element is `tag` followed by an element of
    /// `inner`.
    Lift {
        tag: Point,
        inner: Box<PointSetExpr>,
    },
}

impl PointSetExpr {
    /// A finite literal of the given dimension. Points are sorted and
    /// deduplicated; every point must have dimension `dim`.
    pub fn finite(dim: usize, mut points: Vec<Point>) -> Result<Self, PointSetError> {
        assert!(dim >= 1, "dimension must be >= 1");
        for p in &points {
            if p.dim() != dim {
                return Err(PointSetError::HeterogeneousUnion {
                    left: dim,
                    right: p.dim(),
                });
            }
        }
        points.sort();
        points.dedup();
        Ok(PointSetExpr::Finite { dim, points })
    }

    /// The singleton `{p}`.
    pub fn singleton(p: Point) -> Self {
        let dim = p.dim();
        PointSetExpr::Finite {
            dim,
            points: vec![p],
        }
    }

    /// The empty set in dimension 1.
    pub fn empty() -> Self {
        PointSetExpr::Finite {
            dim: 1,
            points: Vec::new(),
        }
    }

    pub fn range(lo: u64, hi: u64) -> Self {
        PointSetExpr::Range { lo, hi }
    }

    /// The arithmetic progression `base, base+step, …`; `step >= 1`.
    pub fn ap(base: u64, step: u64) -> Self {
        assert!(step >= 1, "progression step must be >= 1");
        PointSetExpr::Ap { base, step }
    }

    /// The whole of `ℕ^1`.
    pub fn naturals() -> Self {
        Self::ap(0, 1)
    }

    pub fn product(left: PointSetExpr, right: PointSetExpr) -> Self {
        PointSetExpr::Product(Box::new(left), Box::new(right))
    }

    pub fn union(left: PointSetExpr, right: PointSetExpr) -> Self {
        PointSetExpr::Union(Box::new(left), Box::new(right))
    }

    pub fn intersect(left: PointSetExpr, right: PointSetExpr) -> Self {
        PointSetExpr::Intersect(Box::new(left), Box::new(right))
    }

    pub fn diff(left: PointSetExpr, right: PointSetExpr) -> Self {
        PointSetExpr::Diff(Box::new(left), Box::new(right))
    }

    pub fn lift(tag: Point, inner: PointSetExpr) -> Self {
        PointSetExpr::Lift {
            tag,
            inner: Box::new(inner),
        }
    }

    /// The dimension `k` of the denoted subset of `ℕ^k`.
    ///
    /// Fails with [`PointSetError::HeterogeneousUnion`] when a boolean node
    /// combines sets of different dimensions.
    pub fn dimension(&self) -> Result<usize, PointSetError> {
        match self {
            PointSetExpr::Finite { dim, .. } => Ok(*dim),
            PointSetExpr::Range { .. } | PointSetExpr::Ap { .. } => Ok(1),
            PointSetExpr::Product(l, r) => Ok(l.dimension()? + r.dimension()?),
            PointSetExpr::Union(l, r)
            | PointSetExpr::Intersect(l, r)
            | PointSetExpr::Diff(l, r) => {
                let (ld, rd) = (l.dimension()?, r.dimension()?);
                if ld != rd {
                    Err(PointSetError::HeterogeneousUnion {
                        left: ld,
                        right: rd,
                    })
                } else {
                    Ok(ld)
                }
            }
            PointSetExpr::Lift { tag, inner } => Ok(tag.dim() + inner.dimension()?),
        }
    }

    /// Exact membership test.
    pub fn contains(&self, p: &Point, budget: &Budget) -> Result<bool, PointSetError> {
        let dim = self.dimension()?;
        if p.dim() != dim {
            return Err(PointSetError::DimensionMismatch {
                point: p.dim(),
                set: dim,
            });
        }
        self.contains_coords(p.coords(), budget)
    }

    fn contains_coords(&self, coords: &[u64], budget: &Budget) -> Result<bool, PointSetError> {
        budget.charge(1)?;
        match self {
            PointSetExpr::Finite { points, .. } => {
                Ok(points.binary_search_by(|q| q.coords().cmp(coords)).is_ok())
            }
            PointSetExpr::Range { lo, hi } => Ok(coords[0] >= *lo && coords[0] <= *hi),
            PointSetExpr::Ap { base, step } => {
                Ok(coords[0] >= *base && (coords[0] - base).is_multiple_of(*step))
            }
            PointSetExpr::Product(l, r) => {
                let split = l.dimension()?;
                Ok(l.contains_coords(&coords[..split], budget)?
                    && r.contains_coords(&coords[split..], budget)?)
            }
            PointSetExpr::Union(l, r) => {
                Ok(l.contains_coords(coords, budget)? || r.contains_coords(coords, budget)?)
            }
            PointSetExpr::Intersect(l, r) => {
                Ok(l.contains_coords(coords, budget)? && r.contains_coords(coords, budget)?)
            }
            PointSetExpr::Diff(l, r) => {
                Ok(l.contains_coords(coords, budget)? && !r.contains_coords(coords, budget)?)
            }
            PointSetExpr::Lift { tag, inner } => {
                let t = tag.dim();
                Ok(&coords[..t] == tag.coords() && inner.contains_coords(&coords[t..], budget)?)
            }
        }
    }

    /// The truncation `X_n`: all elements with coordinates `<= n`, in
    /// lexicographic order without duplicates. Exact.
    pub fn truncate(&self, n: u64, budget: &Budget) -> Result<Vec<Point>, PointSetError> {
        self.dimension()?;
        self.truncate_inner(n, budget)
    }

    fn truncate_inner(&self, n: u64, budget: &Budget) -> Result<Vec<Point>, PointSetError> {
        match self {
            PointSetExpr::Finite { points, .. } => {
                budget.charge(points.len() as u64)?;
                Ok(points.iter().filter(|p| p.bounded_by(n)).cloned().collect())
            }
            PointSetExpr::Range { lo, hi } => {
                let hi = (*hi).min(n);
                if *lo > hi {
                    return Ok(Vec::new());
                }
                budget.charge(hi - lo + 1)?;
                Ok((*lo..=hi).map(Point::from).collect())
            }
            PointSetExpr::Ap { base, step } => {
                if *base > n {
                    return Ok(Vec::new());
                }
                budget.charge((n - base) / step + 1)?;
                Ok((*base..=n)
                    .step_by(*step as usize)
                    .map(Point::from)
                    .collect())
            }
            PointSetExpr::Product(l, r) => {
                let a = l.truncate_inner(n, budget)?;
                let b = r.truncate_inner(n, budget)?;
                budget.charge(a.len() as u64 * b.len() as u64)?;
                let mut out = Vec::with_capacity(a.len() * b.len());
                for p in &a {
                    for q in &b {
                        out.push(p.concat(q));
                    }
                }
                // `a` is sorted and `b` is sorted, so the concatenations are
                // already in lexicographic order.
                Ok(out)
            }
            PointSetExpr::Union(l, r) => {
                let a = l.truncate_inner(n, budget)?;
                let b = r.truncate_inner(n, budget)?;
                budget.charge((a.len() + b.len()) as u64)?;
                Ok(merge_sorted(a, b))
            }
            PointSetExpr::Intersect(l, r) => {
                let a = l.truncate_inner(n, budget)?;
                let mut out = Vec::new();
                for p in a {
                    if r.contains_coords(p.coords(), budget)? {
                        out.push(p);
                    }
                }
                Ok(out)
            }
            PointSetExpr::Diff(l, r) => {
                let a = l.truncate_inner(n, budget)?;
                let mut out = Vec::new();
                for p in a {
                    if !r.contains_coords(p.coords(), budget)? {
                        out.push(p);
                    }
                }
                Ok(out)
            }
            PointSetExpr::Lift { tag, inner } => {
                if !tag.bounded_by(n) {
                    return Ok(Vec::new());
                }
                let pts = inner.truncate_inner(n, budget)?;
                budget.charge(pts.len() as u64)?;
                Ok(pts.iter().map(|p| tag.concat(p)).collect())
            }
        }
    }

    /// The truncation census `|X_n|`, exactly.
    ///
    /// Structured nodes are counted in closed form; `Union`/`Intersect`/
    /// `Diff` use inclusion–exclusion with a budgeted enumeration of the
    /// smaller operand.
    pub fn count(&self, n: u64, budget: &Budget) -> Result<BigUint, PointSetError> {
        self.dimension()?;
        self.count_inner(n, budget)
    }

    fn count_inner(&self, n: u64, budget: &Budget) -> Result<BigUint, PointSetError> {
        budget.charge(1)?;
        match self {
            PointSetExpr::Finite { points, .. } => Ok(BigUint::from(
                points.iter().filter(|p| p.bounded_by(n)).count(),
            )),
            PointSetExpr::Range { lo, hi } => {
                let hi = (*hi).min(n);
                Ok(if *lo > hi {
                    BigUint::zero()
                } else {
                    BigUint::from(hi - lo + 1)
                })
            }
            PointSetExpr::Ap { base, step } => Ok(if *base > n {
                BigUint::zero()
            } else {
                BigUint::from((n - base) / step + 1)
            }),
            PointSetExpr::Product(l, r) => {
                Ok(l.count_inner(n, budget)? * r.count_inner(n, budget)?)
            }
            PointSetExpr::Union(l, r) => {
                let both = intersection_count(l, r, n, budget)?;
                Ok(l.count_inner(n, budget)? + r.count_inner(n, budget)? - both)
            }
            PointSetExpr::Intersect(l, r) => intersection_count(l, r, n, budget),
            PointSetExpr::Diff(l, r) => {
                let both = intersection_count(l, r, n, budget)?;
                Ok(l.count_inner(n, budget)? - both)
            }
            PointSetExpr::Lift { tag, inner } => Ok(if tag.bounded_by(n) {
                inner.count_inner(n, budget)?
            } else {
                BigUint::zero()
            }),
        }
    }

    /// Whether the expression uses only `Finite`/`Range`/`Ap`/`Product`/
    /// `Lift` nodes — the fragment whose counting sequences carry exact
    /// quasi-polynomial tails.
    pub fn is_closed_family(&self) -> bool {
        match self {
            PointSetExpr::Finite { .. } | PointSetExpr::Range { .. } | PointSetExpr::Ap { .. } => {
                true
            }
            PointSetExpr::Product(l, r) => l.is_closed_family() && r.is_closed_family(),
            PointSetExpr::Union(..) | PointSetExpr::Intersect(..) | PointSetExpr::Diff(..) => false,
            PointSetExpr::Lift { inner, .. } => inner.is_closed_family(),
        }
    }

    /// The eventual quasi-polynomial of `n ↦ |X_n|` for the closed family,
    /// `None` outside it.
    fn closed_tail(&self) -> Option<QuasiPolynomial> {
        match self {
            PointSetExpr::Finite { points, .. } => {
                let from = points.iter().map(Point::max_coord).max().unwrap_or(0);
                Some(QuasiPolynomial::constant(BigInt::from(points.len()), from))
            }
            PointSetExpr::Range { lo, hi } => Some(if lo > hi {
                QuasiPolynomial::constant(BigInt::zero(), 0)
            } else {
                QuasiPolynomial::constant(BigInt::from(hi - lo + 1), *hi)
            }),
            PointSetExpr::Ap { base, step } => {
                // For n ≡ r (mod step), |X_n| = (n - base - c_r)/step + 1
                // where c_r = (r - base) mod step.
                let m = *step;
                let polys = (0..m)
                    .map(|r| {
                        let c = (r + m - base % m) % m;
                        let rat = |x: i128| BigRational::from_integer(BigInt::from(x));
                        Polynomial::new(vec![
                            (rat(m as i128) - rat(*base as i128) - rat(c as i128)) / rat(m as i128),
                            BigRational::one() / rat(m as i128),
                        ])
                    })
                    .collect();
                Some(QuasiPolynomial::new(m, polys, *base))
            }
            PointSetExpr::Product(l, r) => Some(l.closed_tail()?.mul(&r.closed_tail()?)),
            PointSetExpr::Union(l, r) if lift_tags_conflict(l, r) => {
                // The two sides are provably disjoint (their lift tags
                // disagree), so the union counts as a pointwise sum.
                Some(l.closed_tail()?.add(&r.closed_tail()?))
            }
            PointSetExpr::Union(..) | PointSetExpr::Intersect(..) | PointSetExpr::Diff(..) => None,
            PointSetExpr::Lift { tag, inner } => {
                Some(inner.closed_tail()?.delayed(tag.max_coord()))
            }
        }
    }

    /// The least `b` such that every member provably has all coordinates
    /// `<= b`, judged by structure alone: literals and ranges carry their
    /// own bound, an intersection is bounded through either side, a
    /// difference through its left side, unions and products through both
    /// sides, a lift through its tag and inner set. `None` when no bound
    /// is visible. Past `b` the census can no longer grow.
    fn coordinate_bound(&self) -> Option<u64> {
        match self {
            PointSetExpr::Finite { points, .. } => {
                Some(points.iter().map(Point::max_coord).max().unwrap_or(0))
            }
            PointSetExpr::Range { lo, hi } => Some(if lo > hi { 0 } else { *hi }),
            PointSetExpr::Ap { .. } => None,
            PointSetExpr::Product(l, r) | PointSetExpr::Union(l, r) => {
                Some(l.coordinate_bound()?.max(r.coordinate_bound()?))
            }
            PointSetExpr::Intersect(l, r) => match (l.coordinate_bound(), r.coordinate_bound()) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            },
            PointSetExpr::Diff(l, _) => l.coordinate_bound(),
            PointSetExpr::Lift { tag, inner } => {
                Some(tag.max_coord().max(inner.coordinate_bound()?))
            }
        }
    }

    /// The counting sequence `⟨|X_n|⟩` on `0..=horizon`, with an exact
    /// quasi-polynomial tail when the expression lies in the closed family
    /// — or is a union of lifts with conflicting tags over it, which counts
    /// as a plain sum — and the tail becomes valid within the horizon.
    /// Failing that, a boolean combination that is provably coordinate-
    /// bounded inside the horizon gets the constant tail it has earned.
    /// `Unknown` otherwise.
    pub fn counting_sequence(
        &self,
        horizon: u64,
        budget: &Budget,
    ) -> Result<CountingSequence, PointSetError> {
        self.dimension()?;
        let prefix = (0..=horizon)
            .map(|n| self.count_inner(n, budget).map(BigInt::from))
            .collect::<Result<Vec<_>, _>>()?;
        let tail = match (self.closed_tail(), self.coordinate_bound()) {
            (Some(qp), _) if qp.from_index() <= horizon => Tail::from_quasi(qp),
            (_, Some(b)) if b <= horizon => {
                Tail::from_quasi(QuasiPolynomial::constant(prefix[b as usize].clone(), b))
            }
            _ => Tail::Unknown,
        };
        Ok(CountingSequence::with_tail(prefix, tail)
            .expect("closed-form tail agrees with exact counts"))
    }

    fn precedence(&self) -> u8 {
        match self {
            PointSetExpr::Union(..) => 0,
            PointSetExpr::Diff(..) => 1,
            PointSetExpr::Intersect(..) => 2,
            PointSetExpr::Product(..) => 3,
            _ => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        let prec = self.precedence();
        let parens = prec < ctx;
        if parens {
            write!(f, "(")?;
        }
        match self {
            PointSetExpr::Finite { points, .. } => {
                write!(f, "finite{{")?;
                for (i, p) in points.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "}}")?;
            }
            PointSetExpr::Range { lo, hi } => write!(f, "range({lo},{hi})")?,
            PointSetExpr::Ap { base, step } => write!(f, "ap({base},{step})")?,
            PointSetExpr::Product(l, r) => {
                l.fmt_prec(f, 3)?;
                write!(f, " * ")?;
                r.fmt_prec(f, 4)?;
            }
            PointSetExpr::Union(l, r) => {
                l.fmt_prec(f, 0)?;
                write!(f, " | ")?;
                r.fmt_prec(f, 1)?;
            }
            PointSetExpr::Intersect(l, r) => {
                l.fmt_prec(f, 2)?;
                write!(f, " & ")?;
                r.fmt_prec(f, 3)?;
            }
            PointSetExpr::Diff(l, r) => {
                l.fmt_prec(f, 1)?;
                write!(f, " \\ ")?;
                r.fmt_prec(f, 2)?;
            }
            PointSetExpr::Lift { tag, inner } => {
                write!(f, "lift({tag}, ")?;
                inner.fmt_prec(f, 0)?;
                write!(f, ")")?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for PointSetExpr {
    /// Renders the surface syntax (`finite{…}`, `range(a,b)`, `ap(a,d)`,
    /// infix `*`, `|`, `&`, `\`, and `lift((…), E)`); precedence from
    /// tightest to loosest is `*`, `&`, `\`, `|`, all left-associative.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// Whether both expressions are lifts whose tags disagree at a shared
/// coordinate, which makes the denoted sets disjoint regardless of the
/// inner sets.
fn lift_tags_conflict(l: &PointSetExpr, r: &PointSetExpr) -> bool {
    match (l, r) {
        (PointSetExpr::Lift { tag: a, .. }, PointSetExpr::Lift { tag: b, .. }) => {
            a.coords().iter().zip(b.coords()).any(|(x, y)| x != y)
        }
        _ => false,
    }
}

/// Count `|L_n ∩ R_n|` by enumerating the smaller side.
fn intersection_count(
    l: &PointSetExpr,
    r: &PointSetExpr,
    n: u64,
    budget: &Budget,
) -> Result<BigUint, PointSetError> {
    if lift_tags_conflict(l, r) {
        return Ok(BigUint::zero());
    }
    let cl = l.count_inner(n, budget)?;
    let cr = r.count_inner(n, budget)?;
    let (enumerate, test) = if cl <= cr { (l, r) } else { (r, l) };
    let pts = enumerate.truncate_inner(n, budget)?;
    let mut k = BigUint::zero();
    for p in pts {
        if test.contains_coords(p.coords(), budget)? {
            k += 1u32;
        }
    }
    Ok(k)
}

fn merge_sorted(a: Vec<Point>, b: Vec<Point>) -> Vec<Point> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut ai = a.into_iter().peekable();
    let mut bi = b.into_iter().peekable();
    loop {
        match (ai.peek(), bi.peek()) {
            (Some(x), Some(y)) => {
                let next = match x.cmp(y) {
                    std::cmp::Ordering::Less => ai.next(),
                    std::cmp::Ordering::Greater => bi.next(),
                    std::cmp::Ordering::Equal => {
                        ai.next();
                        bi.next()
                    }
                };
                out.push(next.expect("peeked"));
            }
            (Some(_), None) => out.push(ai.next().expect("peeked")),
            (None, Some(_)) => out.push(bi.next().expect("peeked")),
            (None, None) => break,
        }
    }
    out
}
