//! Exact polynomials and quasi-polynomials over the rationals.
//!
//! Counting sequences of structured point sets are eventually
//! quasi-polynomial: beyond some index `from`, the value at `n` is given by
//! one of `period` polynomials selected by `n mod period`. Coefficients are
//! arbitrary-precision rationals, but every polynomial used here is
//! integer-valued on its residue class; this is checked on construction.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A polynomial with rational coefficients, stored little-endian
/// (`coeffs[i]` is the coefficient of `n^i`) with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

impl Polynomial {
    /// Build a polynomial from little-endian coefficients.
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![BigRational::from_integer(c)])
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading_coefficient(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Exact evaluation by Horner's rule.
    pub fn eval(&self, n: &BigInt) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * BigRational::from_integer(n.clone()) + c.clone();
        }
        acc
    }

    /// Evaluation that must land on an integer; `None` if it does not.
    pub fn eval_integer(&self, n: u64) -> Option<BigInt> {
        let v = self.eval(&BigInt::from(n));
        v.is_integer().then(|| v.to_integer())
    }

    /// Whether the polynomial takes integer values on the whole arithmetic
    /// progression `start, start+step, start+2·step, …`.
    ///
    /// A degree-`d` polynomial is integer-valued on the progression as soon
    /// as it is integral at `d + 1` consecutive progression points (finite
    /// differences have integer coefficients from then on).
    pub fn integer_valued_on(&self, start: u64, step: u64) -> bool {
        let d = self.degree().unwrap_or(0);
        (0..=d as u64).all(|j| {
            self.eval(&BigInt::from(start + j * step.max(1)))
                .is_integer()
        })
    }

    /// A bound `B` such that for every integer `n > B` the sign of the
    /// polynomial equals the sign of its leading coefficient (Cauchy root
    /// bound). Returns 0 for constants and the zero polynomial.
    pub fn stable_sign_bound(&self) -> BigRational {
        let Some(d) = self.degree() else {
            return BigRational::zero();
        };
        if d == 0 {
            return BigRational::zero();
        }
        let lead = self.coeffs[d].abs();
        let mut max_ratio = BigRational::zero();
        for c in &self.coeffs[..d] {
            let r = c.abs() / lead.clone();
            if r > max_ratio {
                max_ratio = r;
            }
        }
        max_ratio + BigRational::one()
    }

    /// Sign of the value at sufficiently large arguments:
    /// -1, 0 or +1 according to the leading coefficient.
    pub fn eventual_sign(&self) -> i8 {
        match self.leading_coefficient() {
            None => 0,
            Some(c) if c.is_positive() => 1,
            Some(_) => -1,
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![BigRational::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c.clone();
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c.clone();
        }
        Polynomial::new(coeffs)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![BigRational::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c.clone();
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] -= c.clone();
        }
        Polynomial::new(coeffs)
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a.clone() * b.clone();
            }
        }
        Polynomial::new(coeffs)
    }
}

fn fmt_coefficient(c: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.to_integer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    /// Renders descending powers, e.g. `1/2*n^2 - n + 3`, `0` for zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_coeff = abs.is_one() && i > 0;
            if !unit_coeff {
                fmt_coefficient(&abs, f)?;
            }
            match i {
                0 => {}
                _ if unit_coeff => write!(f, "n")?,
                1 => write!(f, "*n")?,
                _ => {}
            }
            if i > 1 {
                if !unit_coeff {
                    write!(f, "*n^{i}")?;
                } else {
                    write!(f, "^{i}")?;
                }
            }
        }
        Ok(())
    }
}

/// An eventually valid quasi-polynomial: for `n >= from`, the value at `n`
/// is `polys[n mod period]` evaluated at `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiPolynomial {
    period: u64,
    polys: Vec<Polynomial>,
    from: u64,
}

impl QuasiPolynomial {
    /// Build a quasi-polynomial; `polys.len()` must equal `period`, and each
    /// polynomial must be integer-valued on its residue class.
    ///
    /// Panics on violation: the constructors in this crate only produce
    /// integer-valued data, so a failure here is a programming error.
    pub fn new(period: u64, polys: Vec<Polynomial>, from: u64) -> Self {
        assert!(period >= 1, "period must be >= 1");
        assert_eq!(polys.len(), period as usize, "one polynomial per residue");
        for (r, p) in polys.iter().enumerate() {
            let start = first_index_in_class(from, r as u64, period);
            assert!(
                p.integer_valued_on(start, period),
                "polynomial for residue {r} is not integer-valued on its class"
            );
        }
        QuasiPolynomial {
            period,
            polys,
            from,
        }
    }

    pub fn constant(value: BigInt, from: u64) -> Self {
        QuasiPolynomial {
            period: 1,
            polys: vec![Polynomial::constant(value)],
            from,
        }
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn from_index(&self) -> u64 {
        self.from
    }

    pub fn polynomials(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn polynomial_for(&self, n: u64) -> &Polynomial {
        &self.polys[(n % self.period) as usize]
    }

    /// Exact value at `n`; meaningful only for `n >= from`.
    pub fn eval(&self, n: u64) -> BigInt {
        self.polynomial_for(n)
            .eval_integer(n)
            .expect("quasi-polynomial is integer-valued by construction")
    }

    /// If every residue class has the same constant polynomial, its value.
    pub fn as_constant(&self) -> Option<BigInt> {
        let first = &self.polys[0];
        if first.degree().unwrap_or(0) > 0 {
            return None;
        }
        if self.polys.iter().any(|p| p != first) {
            return None;
        }
        Some(if first.is_zero() {
            BigInt::zero()
        } else {
            first.eval(&BigInt::zero()).to_integer()
        })
    }

    /// Re-express with a period that is a multiple of the current one.
    fn with_period(&self, period: u64) -> QuasiPolynomial {
        debug_assert_eq!(period % self.period, 0);
        let polys = (0..period)
            .map(|r| self.polys[(r % self.period) as usize].clone())
            .collect();
        QuasiPolynomial {
            period,
            polys,
            from: self.from,
        }
    }

    fn combine(
        &self,
        other: &QuasiPolynomial,
        op: impl Fn(&Polynomial, &Polynomial) -> Polynomial,
    ) -> QuasiPolynomial {
        let period = self.period.lcm(&other.period);
        let a = self.with_period(period);
        let b = other.with_period(period);
        let polys = a
            .polys
            .iter()
            .zip(&b.polys)
            .map(|(p, q)| op(p, q))
            .collect();
        QuasiPolynomial {
            period,
            polys,
            from: self.from.max(other.from),
        }
    }

    /// The same values, valid only from `max(self.from, from)` on.
    pub fn delayed(&self, from: u64) -> QuasiPolynomial {
        QuasiPolynomial {
            period: self.period,
            polys: self.polys.clone(),
            from: self.from.max(from),
        }
    }

    pub fn add(&self, other: &QuasiPolynomial) -> QuasiPolynomial {
        self.combine(other, Polynomial::add)
    }

    pub fn sub(&self, other: &QuasiPolynomial) -> QuasiPolynomial {
        self.combine(other, Polynomial::sub)
    }

    pub fn mul(&self, other: &QuasiPolynomial) -> QuasiPolynomial {
        self.combine(other, Polynomial::mul)
    }
}

/// Smallest index `>= from` that is `≡ r (mod m)`.
pub(crate) fn first_index_in_class(from: u64, r: u64, m: u64) -> u64 {
    let rem = from % m;
    if rem <= r {
        from + (r - rem)
    } else {
        from + (m - rem) + r
    }
}

impl fmt::Display for QuasiPolynomial {
    /// Renders as `qp(period; p_0, …, p_{period-1}; from=n0)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "qp({}; ", self.period)?;
        for (i, p) in self.polys.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "; from={})", self.from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn eval_and_normalization() {
        // n^2 - 1, with a redundant trailing zero coefficient.
        let p = Polynomial::new(vec![rat(-1, 1), rat(0, 1), rat(1, 1), rat(0, 1)]);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.eval_integer(5), Some(BigInt::from(24)));
    }

    #[test]
    fn half_integer_polynomial_is_integer_valued_on_even_class() {
        // n/2 + 1 on even n.
        let p = Polynomial::new(vec![rat(1, 1), rat(1, 2)]);
        assert!(p.integer_valued_on(0, 2));
        assert!(!p.integer_valued_on(1, 2));
    }

    #[test]
    fn quasi_polynomial_arithmetic_lifts_periods() {
        // Evens count: n even -> n/2 + 1; n odd -> (n+1)/2.
        let evens = QuasiPolynomial::new(
            2,
            vec![
                Polynomial::new(vec![rat(1, 1), rat(1, 2)]),
                Polynomial::new(vec![rat(1, 2), rat(1, 2)]),
            ],
            0,
        );
        // Odds count (valid from 1): n even -> n/2; n odd -> (n+1)/2.
        let odds = QuasiPolynomial::new(
            2,
            vec![
                Polynomial::new(vec![rat(0, 1), rat(1, 2)]),
                Polynomial::new(vec![rat(1, 2), rat(1, 2)]),
            ],
            1,
        );
        let diff = evens.sub(&odds);
        assert_eq!(diff.from_index(), 1);
        for n in 1..40u64 {
            let expect = if n % 2 == 0 { 1 } else { 0 };
            assert_eq!(diff.eval(n), BigInt::from(expect), "at n={n}");
        }
        let total = evens.add(&odds);
        for n in 1..40u64 {
            assert_eq!(total.eval(n), BigInt::from(n + 1));
        }
    }

    #[test]
    fn stable_sign_bound_is_sound() {
        // n^2 - 10n + 9 has roots 1 and 9.
        let p = Polynomial::new(vec![rat(9, 1), rat(-10, 1), rat(1, 1)]);
        let bound = p.stable_sign_bound();
        let mut n = BigInt::zero();
        // First integer beyond the bound.
        while BigRational::from_integer(n.clone()) <= bound {
            n += 1;
        }
        let sign = p.eval(&n);
        assert!(sign.is_positive());
        assert!(BigRational::from_integer(BigInt::from(9)) <= bound);
    }

    #[test]
    fn display_formats() {
        let p = Polynomial::new(vec![rat(3, 1), rat(-1, 1), rat(1, 2)]);
        assert_eq!(p.to_string(), "1/2*n^2 - n + 3");
        assert_eq!(Polynomial::zero().to_string(), "0");
        assert_eq!(Polynomial::constant(BigInt::from(-7)).to_string(), "-7");
        let qp = QuasiPolynomial::constant(BigInt::from(5), 9);
        assert_eq!(qp.to_string(), "qp(1; 5; from=9)");
    }
}
