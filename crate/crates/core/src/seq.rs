//! Counting sequences: exact integer sequences on `0..=H` with an optional
//! exact tail, pointwise ring operations, and sign classification.
//!
//! A counting sequence records what is *known*: the prefix is always exact,
//! and the tail is either a formula that provably continues the sequence
//! (constant or quasi-polynomial) or `Unknown`. Nothing is ever guessed
//! from the prefix — in particular polynomial boundedness is only asserted
//! when a tail formula is present.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::ToPrimitive;

use crate::index_set::{EventuallyPeriodic, ExplicitSet, IndexSet, TailTag};
use crate::poly::QuasiPolynomial;

/// Exceptions to an eventual sign are located by scanning up to the
/// stable-sign bound of the tail polynomials; beyond this cap the pattern
/// degrades to an explicit table rather than risk an inexact classification.
const SIGN_SCAN_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeqError {
    #[error("tail formula disagrees with the exact prefix at n={n}: prefix has {prefix}, tail gives {tail}")]
    TailInconsistent {
        n: u64,
        prefix: BigInt,
        tail: BigInt,
    },
    #[error("tail validity index {from} exceeds the horizon {horizon}")]
    TailBeyondHorizon { from: u64, horizon: u64 },
}

/// What a counting sequence does beyond its horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tail {
    /// Equal to `value` for every `n >= from`.
    Constant { value: BigInt, from: u64 },
    /// Given by a quasi-polynomial for every `n >= from`.
    Quasi(QuasiPolynomial),
    /// Nothing is claimed beyond the horizon.
    Unknown,
}

impl Tail {
    /// Normalize a quasi-polynomial tail, collapsing to `Constant` when all
    /// residue classes share one constant value.
    pub fn from_quasi(qp: QuasiPolynomial) -> Tail {
        match qp.as_constant() {
            Some(value) => Tail::Constant {
                value,
                from: qp.from_index(),
            },
            None => Tail::Quasi(qp),
        }
    }

    pub fn is_known(&self) -> bool {
        !matches!(self, Tail::Unknown)
    }

    /// The tail as a quasi-polynomial, `None` when unknown.
    pub fn as_quasi(&self) -> Option<QuasiPolynomial> {
        match self {
            Tail::Constant { value, from } => Some(QuasiPolynomial::constant(value.clone(), *from)),
            Tail::Quasi(qp) => Some(qp.clone()),
            Tail::Unknown => None,
        }
    }
}

/// An exact integer sequence tabulated on `0..=horizon` with a [`Tail`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingSequence {
    prefix: Vec<BigInt>,
    tail: Tail,
}

impl CountingSequence {
    /// A sequence with no tail claim.
    pub fn from_prefix(prefix: Vec<BigInt>) -> Self {
        assert!(!prefix.is_empty(), "a counting sequence needs a horizon");
        CountingSequence {
            prefix,
            tail: Tail::Unknown,
        }
    }

    /// A sequence with a tail claim, verified against the prefix on their
    /// overlap (`from..=horizon`). The tail must become valid within the
    /// horizon.
    pub fn with_tail(prefix: Vec<BigInt>, tail: Tail) -> Result<Self, SeqError> {
        assert!(!prefix.is_empty(), "a counting sequence needs a horizon");
        let horizon = prefix.len() as u64 - 1;
        if let Some(qp) = tail.as_quasi() {
            let from = qp.from_index();
            if from > horizon {
                return Err(SeqError::TailBeyondHorizon { from, horizon });
            }
            for n in from..=horizon {
                let t = qp.eval(n);
                if t != prefix[n as usize] {
                    return Err(SeqError::TailInconsistent {
                        n,
                        prefix: prefix[n as usize].clone(),
                        tail: t,
                    });
                }
            }
        }
        Ok(CountingSequence { prefix, tail })
    }

    pub fn horizon(&self) -> u64 {
        self.prefix.len() as u64 - 1
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn prefix(&self) -> &[BigInt] {
        &self.prefix
    }

    /// The exact value at `n <= horizon`.
    pub fn value(&self, n: u64) -> Option<&BigInt> {
        self.prefix.get(n as usize)
    }

    /// The value at `n`, extending beyond the horizon via the tail formula
    /// when one is present.
    pub fn value_extended(&self, n: u64) -> Option<BigInt> {
        if let Some(v) = self.prefix.get(n as usize) {
            return Some(v.clone());
        }
        self.tail.as_quasi().map(|qp| qp.eval(n))
    }

    fn binary(
        &self,
        other: &CountingSequence,
        value_op: impl Fn(&BigInt, &BigInt) -> BigInt,
        tail_op: impl Fn(&QuasiPolynomial, &QuasiPolynomial) -> QuasiPolynomial,
        op_name: &str,
    ) -> CountingSequence {
        let horizon = self.horizon().min(other.horizon());
        if self.horizon() != other.horizon() {
            log::warn!(
                "{op_name}: horizon mismatch ({} vs {}), truncating to {horizon}",
                self.horizon(),
                other.horizon()
            );
        }
        let prefix: Vec<BigInt> = (0..=horizon as usize)
            .map(|n| value_op(&self.prefix[n], &other.prefix[n]))
            .collect();
        let tail = match (self.tail.as_quasi(), other.tail.as_quasi()) {
            (Some(a), Some(b)) => {
                let combined = tail_op(&a, &b);
                if combined.from_index() <= horizon {
                    Tail::from_quasi(combined)
                } else {
                    Tail::Unknown
                }
            }
            _ => Tail::Unknown,
        };
        CountingSequence::with_tail(prefix, tail)
            .expect("pointwise combination of consistent tails stays consistent")
    }

    pub fn add(&self, other: &CountingSequence) -> CountingSequence {
        self.binary(other, |a, b| a + b, QuasiPolynomial::add, "add")
    }

    pub fn sub(&self, other: &CountingSequence) -> CountingSequence {
        self.binary(other, |a, b| a - b, QuasiPolynomial::sub, "sub")
    }

    pub fn mul(&self, other: &CountingSequence) -> CountingSequence {
        self.binary(other, |a, b| a * b, QuasiPolynomial::mul, "mul")
    }

    /// `true` when a tail formula is present (every constant or
    /// quasi-polynomial tail is polynomially bounded); `None` when the tail
    /// is unknown — boundedness is never guessed from the prefix.
    pub fn is_polynomially_bounded(&self) -> Option<bool> {
        self.tail.is_known().then_some(true)
    }

    /// Partition the index axis by the sign of the sequence.
    ///
    /// With a known tail the three cells are exact eventually periodic
    /// sets (valid for *all* `n`, not just the horizon); otherwise they are
    /// explicit tables with unknown tails.
    pub fn sign_pattern(&self) -> SignPattern {
        match self.tail.as_quasi() {
            Some(qp) => self
                .periodic_sign_pattern(&qp)
                .unwrap_or_else(|| self.explicit_sign_pattern()),
            None => self.explicit_sign_pattern(),
        }
    }

    fn explicit_sign_pattern(&self) -> SignPattern {
        let cell = |s: i8| {
            let bits = self.prefix.iter().map(|v| sign_of(v) == s).collect();
            IndexSet::Explicit(ExplicitSet::new(bits, TailTag::Unknown))
        };
        SignPattern {
            negative: cell(-1),
            zero: cell(0),
            positive: cell(1),
        }
    }

    fn periodic_sign_pattern(&self, qp: &QuasiPolynomial) -> Option<SignPattern> {
        let m = qp.period();
        let from = qp.from_index();
        let eventual: Vec<i8> = qp.polynomials().iter().map(|p| p.eventual_sign()).collect();
        // Index from which each class provably keeps its eventual sign.
        let mut scan_to = from;
        for p in qp.polynomials() {
            if p.degree().unwrap_or(0) == 0 {
                continue;
            }
            let bound = p.stable_sign_bound().floor().to_integer().to_u64()?;
            let threshold = bound.checked_add(1)?;
            if threshold > SIGN_SCAN_CAP {
                return None;
            }
            scan_to = scan_to.max(threshold);
        }
        let mut cells: [SignCell; 3] = Default::default();
        for r in 0..m {
            cells[cell_index(eventual[r as usize])].residues.push(r);
        }
        for n in 0..=scan_to {
            let actual = sign_of(
                &self
                    .value_extended(n)
                    .expect("tail present, so every index is valued"),
            );
            // Below `from` the tail claims nothing; the class sign is only
            // the default against which exceptions are recorded.
            let predicted = eventual[(n % m) as usize];
            if actual != predicted {
                cells[cell_index(predicted)].removed.push(n);
                cells[cell_index(actual)].added.push(n);
            }
        }
        let [neg, zero, pos] = cells;
        Some(SignPattern {
            negative: neg.into_index_set(m),
            zero: zero.into_index_set(m),
            positive: pos.into_index_set(m),
        })
    }
}

#[derive(Default)]
struct SignCell {
    residues: Vec<u64>,
    added: Vec<u64>,
    removed: Vec<u64>,
}

impl SignCell {
    fn into_index_set(self, modulus: u64) -> IndexSet {
        IndexSet::Periodic(EventuallyPeriodic::new(
            modulus,
            self.residues,
            self.added,
            self.removed,
        ))
    }
}

fn cell_index(sign: i8) -> usize {
    (sign + 1) as usize
}

fn sign_of(v: &BigInt) -> i8 {
    match v.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// The partition of the index axis by sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPattern {
    pub negative: IndexSet,
    pub zero: IndexSet,
    pub positive: IndexSet,
}

impl SignPattern {
    /// The cell containing `n`, as -1/0/+1, when determined.
    pub fn classify(&self, n: u64) -> Option<i8> {
        if self.negative.contains(n)? {
            return Some(-1);
        }
        if self.zero.contains(n)? {
            return Some(0);
        }
        if self.positive.contains(n)? {
            return Some(1);
        }
        None
    }
}

impl fmt::Display for CountingSequence {
    /// Renders as `prefix=[v0,v1,…]; tail=qp(m; p_0,…,p_{m-1}; from=n0)`
    /// or `…; tail=unknown`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "prefix=[")?;
        for (i, v) in self.prefix.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]; tail=")?;
        match self.tail.as_quasi() {
            Some(qp) => write!(f, "{qp}"),
            None => write!(f, "unknown"),
        }
    }
}
