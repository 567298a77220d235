//! Finite integer combinations of point-set characteristic series, the
//! per-index evaluation map, and the constructive normal forms: bounded
//! coefficient decomposition into signed characteristic layers, and the
//! re-encoding of a positive combination as a single characteristic
//! series in higher dimension.
//!
//! A series here is `a + Σ cᵢ·S[Xᵢ]` with integer `a`, integer
//! coefficients, and point-set terms. Evaluating at index `n` replaces
//! each `S[X]` by the box count `|X ∩ {0..n}^k|`, which makes evaluation
//! a ring homomorphism — verified, not assumed, since products are
//! carried by ordered product nodes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::budget::Budget;
use crate::numerosity::{self, NumerosityError, Verdict};
use crate::oracle::FilterModel;
use crate::pointset::{Point, PointSetError, PointSetExpr};
use crate::seq::Tail;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("coefficient {coefficient} at {point} exceeds the declared bound {bound}")]
    BoundExceeded {
        point: Point,
        coefficient: BigInt,
        bound: u64,
    },
    #[error("dimension {dim} exceeds the declared bound {bound}")]
    DimensionExceeded { dim: usize, bound: usize },
    #[error("series is not positive: coefficient {coefficient}{}", .point.as_ref().map(|p| format!(" at {p}")).unwrap_or_default())]
    NotPositive {
        point: Option<Point>,
        coefficient: BigInt,
    },
    #[error("horizon {horizon} too small: {reason}")]
    HorizonTooSmall { horizon: u64, reason: String },
    #[error(transparent)]
    PointSet(#[from] PointSetError),
}

/// `constant + Σ coeff·S[set]`, kept normalized: zero coefficients and
/// empty finite literals are dropped, and syntactically identical sets
/// share one term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesExpr {
    constant: BigInt,
    terms: Vec<(BigInt, PointSetExpr)>,
}

impl SeriesExpr {
    pub fn new(constant: BigInt, terms: Vec<(BigInt, PointSetExpr)>) -> Self {
        let mut merged: Vec<(BigInt, PointSetExpr)> = Vec::new();
        for (coeff, set) in terms {
            if let PointSetExpr::Finite { points, .. } = &set {
                if points.is_empty() {
                    continue; // contributes nothing at any index
                }
            }
            match merged.iter_mut().find(|(_, s)| *s == set) {
                Some((c, _)) => *c += coeff,
                None => merged.push((coeff, set)),
            }
        }
        merged.retain(|(c, _)| !c.is_zero());
        SeriesExpr {
            constant,
            terms: merged,
        }
    }

    pub fn zero() -> Self {
        SeriesExpr::new(BigInt::zero(), Vec::new())
    }

    pub fn constant(a: impl Into<BigInt>) -> Self {
        SeriesExpr::new(a.into(), Vec::new())
    }

    /// The characteristic series of a point set: one term, coefficient 1.
    pub fn of_set(x: PointSetExpr) -> Self {
        SeriesExpr::new(BigInt::zero(), vec![(BigInt::one(), x)])
    }

    pub fn constant_part(&self) -> &BigInt {
        &self.constant
    }

    pub fn terms(&self) -> &[(BigInt, PointSetExpr)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.terms.is_empty()
    }

    pub fn add(&self, other: &SeriesExpr) -> SeriesExpr {
        SeriesExpr::new(
            &self.constant + &other.constant,
            self.terms.iter().chain(&other.terms).cloned().collect(),
        )
    }

    pub fn neg(&self) -> SeriesExpr {
        self.scale(&-BigInt::one())
    }

    pub fn sub(&self, other: &SeriesExpr) -> SeriesExpr {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigInt) -> SeriesExpr {
        SeriesExpr::new(
            &self.constant * c,
            self.terms.iter().map(|(k, s)| (k * c, s.clone())).collect(),
        )
    }

    /// Full distribution; set terms multiply through ordered product
    /// nodes, so `S[X]·S[Y]` becomes `S[X×Y]` structurally.
    pub fn mul(&self, other: &SeriesExpr) -> SeriesExpr {
        let mut terms: Vec<(BigInt, PointSetExpr)> = Vec::new();
        for (c, s) in &self.terms {
            terms.push((c * &other.constant, s.clone()));
        }
        for (d, t) in &other.terms {
            terms.push((d * &self.constant, t.clone()));
        }
        for (c, s) in &self.terms {
            for (d, t) in &other.terms {
                terms.push((c * d, PointSetExpr::product(s.clone(), t.clone())));
            }
        }
        SeriesExpr::new(&self.constant * &other.constant, terms)
    }

    /// Evaluate at index `n`: the constant plus each coefficient times its
    /// set's box count.
    pub fn phi(&self, n: u64, budget: &Budget) -> Result<BigInt, SeriesError> {
        let mut total = self.constant.clone();
        for (coeff, set) in &self.terms {
            total += coeff * BigInt::from(set.count(n, budget)?);
        }
        Ok(total)
    }
}

impl fmt::Display for SeriesExpr {
    /// Renders the surface syntax, e.g. `3 + 2*S[ap(0,2)] - S[range(0,9)]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        if !self.constant.is_zero() || self.terms.is_empty() {
            write!(f, "{}", self.constant)?;
            wrote = true;
        }
        for (coeff, set) in &self.terms {
            let magnitude = coeff.abs();
            if wrote {
                write!(f, " {} ", if coeff.is_negative() { "-" } else { "+" })?;
            } else if coeff.is_negative() {
                write!(f, "-")?;
            }
            if magnitude.is_one() {
                write!(f, "S[{set}]")?;
            } else {
                write!(f, "{magnitude}*S[{set}]")?;
            }
            wrote = true;
        }
        Ok(())
    }
}

/// The signed characteristic layers of a finitely supported bounded
/// coefficient map: `layers[k-1][i-1]` holds, for dimension `k` and level
/// `i`, the set of points with coefficient `>= i` and the set with
/// coefficient `<= -i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedDecomposition {
    pub bound: u64,
    /// One entry per dimension `1..=d`; each holds `bound` layer pairs.
    pub layers: Vec<Vec<(PointSetExpr, PointSetExpr)>>,
}

impl BoundedDecomposition {
    /// The series `Σ_k Σ_i (S[X_ik] − S[Y_ik])`; empty layers drop out.
    pub fn to_series(&self) -> SeriesExpr {
        let mut terms = Vec::new();
        for dim_layers in &self.layers {
            for (x, y) in dim_layers {
                terms.push((BigInt::one(), x.clone()));
                terms.push((-BigInt::one(), y.clone()));
            }
        }
        SeriesExpr::new(BigInt::zero(), terms)
    }
}

/// Decompose a finitely supported integer coefficient map with `|a_x| <= B`
/// into signed characteristic layers, one pair per dimension and level.
/// The reconstruction identity — summing the layer characteristic
/// functions returns every input coefficient — is checked before
/// returning.
pub fn decompose_bounded(
    values: &BTreeMap<Point, BigInt>,
    bound: u64,
) -> Result<BoundedDecomposition, SeriesError> {
    let support: BTreeMap<Point, BigInt> = values
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(p, v)| (p.clone(), v.clone()))
        .collect();
    let big_bound = BigInt::from(bound);
    for (point, coeff) in &support {
        if coeff.abs() > big_bound {
            return Err(SeriesError::BoundExceeded {
                point: point.clone(),
                coefficient: coeff.clone(),
                bound,
            });
        }
    }
    let max_dim = support.keys().map(Point::dim).max().unwrap_or(0);

    let mut layers = Vec::with_capacity(max_dim);
    for k in 1..=max_dim {
        let mut dim_layers = Vec::with_capacity(bound as usize);
        for i in 1..=bound {
            let level = BigInt::from(i);
            let xs: Vec<Point> = support
                .iter()
                .filter(|(p, v)| p.dim() == k && **v >= level)
                .map(|(p, _)| p.clone())
                .collect();
            let ys: Vec<Point> = support
                .iter()
                .filter(|(p, v)| p.dim() == k && **v <= -&level)
                .map(|(p, _)| p.clone())
                .collect();
            dim_layers.push((PointSetExpr::finite(k, xs)?, PointSetExpr::finite(k, ys)?));
        }
        layers.push(dim_layers);
    }
    let decomposition = BoundedDecomposition { bound, layers };

    // Reconstruction: Σ_i [x ∈ X_ik] − [x ∈ Y_ik] must equal a_x exactly.
    for (point, coeff) in &support {
        let mut sum = BigInt::zero();
        for (x, y) in &decomposition.layers[point.dim() - 1] {
            if let PointSetExpr::Finite { points, .. } = x {
                if points.binary_search(point).is_ok() {
                    sum += 1;
                }
            }
            if let PointSetExpr::Finite { points, .. } = y {
                if points.binary_search(point).is_ok() {
                    sum -= 1;
                }
            }
        }
        assert_eq!(&sum, coeff, "layer reconstruction must be exact at {point}");
    }
    Ok(decomposition)
}

/// A positive series re-encoded as one characteristic series: a finite
/// point set in a uniform higher dimension whose box counts agree with
/// the series' values from `agrees_from` onward (provably, for every
/// index past the verified horizon).
#[derive(Debug, Clone)]
pub struct CharacteristicWitness {
    /// A finite set in `ℕ^uniform_dim`.
    pub set: PointSetExpr,
    /// The chosen uniform dimension `k`, least with `2^k > B·2^d`.
    pub uniform_dim: usize,
    /// Least verified index from which the values agree.
    pub agrees_from: u64,
}

/// Re-encode a positive combination (positive constant and coefficients,
/// all terms provably finite within `horizon`, dimensions at most
/// `max_dim`, coefficients at most `bound`) as a single characteristic
/// series: each point with total coefficient `N` becomes `N` distinct
/// points of dimension `k` obtained by prefixing binary coordinates, and
/// the constant becomes that many all-binary points. Distinctness is
/// global; when the greedy assignment runs out of prefixes the dimension
/// is bumped and the assignment restarts, since the counting bound
/// `2^k > B·2^d` alone does not hand out collision-free codes.
pub fn positive_to_characteristic(
    p: &SeriesExpr,
    bound: u64,
    max_dim: usize,
    horizon: u64,
    budget: &Budget,
) -> Result<CharacteristicWitness, SeriesError> {
    if p.constant_part().is_negative() {
        return Err(SeriesError::NotPositive {
            point: None,
            coefficient: p.constant_part().clone(),
        });
    }

    // Total coefficient per point, over all terms. Every term set must be
    // provably finite and fully enumerated within the horizon.
    let mut monomials: BTreeMap<Point, BigInt> = BTreeMap::new();
    for (coeff, set) in p.terms() {
        let seq = set.counting_sequence(horizon, budget)?;
        let finite_within = matches!(seq.tail(), Tail::Constant { from, .. } if *from <= horizon);
        if !finite_within {
            return Err(SeriesError::HorizonTooSmall {
                horizon,
                reason: format!("term {set} is not provably finite within the horizon"),
            });
        }
        for point in set.truncate(horizon, budget)? {
            *monomials.entry(point).or_default() += coeff;
        }
    }
    monomials.retain(|_, v| !v.is_zero());

    let big_bound = BigInt::from(bound);
    for (point, coeff) in &monomials {
        if coeff.is_negative() {
            return Err(SeriesError::NotPositive {
                point: Some(point.clone()),
                coefficient: coeff.clone(),
            });
        }
        if coeff > &big_bound {
            return Err(SeriesError::BoundExceeded {
                point: point.clone(),
                coefficient: coeff.clone(),
                bound,
            });
        }
        if point.dim() > max_dim {
            return Err(SeriesError::DimensionExceeded {
                dim: point.dim(),
                bound: max_dim,
            });
        }
    }
    if monomials.is_empty() && p.constant_part().is_zero() {
        return Err(SeriesError::NotPositive {
            point: None,
            coefficient: BigInt::zero(),
        });
    }

    // Least k with 2^k > bound·2^max_dim, and at least 1 so points exist.
    let threshold = BigUint::from(bound) << max_dim;
    let mut k = 1usize;
    while BigUint::from(1u8) << k <= threshold {
        k += 1;
    }

    let points = loop {
        match assign_points(&monomials, p.constant_part(), k, budget)? {
            Some(points) => break points,
            None => k += 1, // prefix space exhausted; widen and retry
        }
    };

    let set = PointSetExpr::finite(k, points.iter().cloned().collect())?;

    // Verify agreement along the horizon and make sure both sides have
    // stabilized by then, which extends the equality to every later index.
    let stabilized = points
        .iter()
        .map(Point::max_coord)
        .chain(monomials.keys().map(Point::max_coord))
        .max()
        .unwrap_or(0);
    if horizon < stabilized {
        return Err(SeriesError::HorizonTooSmall {
            horizon,
            reason: format!("values only stabilize at {stabilized}"),
        });
    }
    let mut agrees_from = None;
    for n in (0..=horizon).rev() {
        let lhs = BigInt::from(set.count(n, budget)?);
        if lhs == p.phi(n, budget)? {
            agrees_from = Some(n);
        } else {
            break;
        }
    }
    match agrees_from {
        Some(agrees_from) => Ok(CharacteristicWitness {
            set,
            uniform_dim: k,
            agrees_from,
        }),
        None => Err(SeriesError::HorizonTooSmall {
            horizon,
            reason: "values disagree at the horizon".into(),
        }),
    }
}

/// Pick `N_z` distinct dimension-`k` points per monomial `z` (binary
/// prefixes, lex-least first) plus `constant` all-binary points. `None`
/// when some monomial or the constant cannot be served at this `k`.
fn assign_points(
    monomials: &BTreeMap<Point, BigInt>,
    constant: &BigInt,
    k: usize,
    budget: &Budget,
) -> Result<Option<BTreeSet<Point>>, SeriesError> {
    let mut used: BTreeSet<Point> = BTreeSet::new();
    let binary_point = |mask: u128, len: usize| -> Vec<u64> {
        // Bit len-1-j carries coordinate j, so mask order is lex order.
        (0..len)
            .map(|j| u64::from((mask >> (len - 1 - j)) & 1 == 1))
            .collect()
    };
    for (z, n_z) in monomials {
        if z.dim() > k {
            return Ok(None);
        }
        let pad = k - z.dim();
        let mut remaining = n_z.clone();
        let mut mask = 0u128;
        while remaining.is_positive() {
            if pad >= 127 || mask >= 1u128 << pad {
                return Ok(None);
            }
            budget.charge(1).map_err(PointSetError::from)?;
            let mut coords = binary_point(mask, pad);
            coords.extend_from_slice(z.coords());
            mask += 1;
            if used.insert(Point::new(coords)) {
                remaining -= 1;
            }
        }
    }
    let mut remaining = constant.clone();
    let mut mask = 0u128;
    while remaining.is_positive() {
        if k >= 127 || mask >= 1u128 << k {
            return Ok(None);
        }
        budget.charge(1).map_err(PointSetError::from)?;
        let coords = binary_point(mask, k);
        mask += 1;
        if used.insert(Point::new(coords)) {
            remaining -= 1;
        }
    }
    Ok(Some(used))
}

/// Whether the difference of two characteristic series lands in the gauge
/// ideal of the model — which is exactly equinumerosity of the two sets,
/// so the comparison verdict is the answer.
pub fn difference_in_gauge_ideal(
    x: &PointSetExpr,
    y: &PointSetExpr,
    model: &FilterModel,
    horizon: u64,
    budget: &Budget,
) -> Result<Verdict, NumerosityError> {
    numerosity::compare(x, y, model, horizon, budget)
}
