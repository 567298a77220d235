//! Deterministic sample generators for property and acceptance tests.
//!
//! Every generator drains a caller-supplied RNG, so a fixed seed fixes the
//! whole sample stream. Expressions are biased toward cheap-to-count
//! shapes — box counts estimated at index 64 stay under a fixed cap — so
//! suites that evaluate hundreds of samples across a horizon keep bounded
//! runtimes without giving up on nested operators.

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

use crate::index_set::EventuallyPeriodic;
use crate::oracle::FilterModel;
use crate::pointset::{Point, PointSetExpr};
use crate::series::SeriesExpr;

/// A fresh deterministic stream for the seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn point(rng: &mut impl Rng, dim: usize, max_coord: u64) -> Point {
    Point::new((0..dim).map(|_| rng.gen_range(0..=max_coord)).collect())
}

/// Upper bound on the box count at index `n`, used to keep generated
/// expressions cheap to enumerate.
fn count_estimate(e: &PointSetExpr, n: u64) -> u128 {
    match e {
        PointSetExpr::Finite { points, .. } => points.len() as u128,
        PointSetExpr::Range { lo, hi } => {
            let hi = (*hi).min(n);
            if *lo > hi {
                0
            } else {
                u128::from(hi - lo + 1)
            }
        }
        PointSetExpr::Ap { base, step } => {
            if *base > n {
                0
            } else {
                u128::from((n - base) / step + 1)
            }
        }
        PointSetExpr::Product(l, r) => count_estimate(l, n).saturating_mul(count_estimate(r, n)),
        PointSetExpr::Union(l, r) => count_estimate(l, n).saturating_add(count_estimate(r, n)),
        PointSetExpr::Intersect(l, r) => count_estimate(l, n).min(count_estimate(r, n)),
        PointSetExpr::Diff(l, _) => count_estimate(l, n),
        PointSetExpr::Lift { inner, .. } => count_estimate(inner, n),
    }
}

const ESTIMATE_CAP: u128 = 2_000;

fn finite_literal(rng: &mut impl Rng, dim: usize) -> PointSetExpr {
    let k = rng.gen_range(0..=4);
    PointSetExpr::finite(dim, (0..k).map(|_| point(rng, dim, 12)).collect())
        .expect("homogeneous by construction")
}

fn leaf(rng: &mut impl Rng, dim: usize) -> PointSetExpr {
    let candidate = if dim == 1 {
        match rng.gen_range(0u8..4) {
            0 => finite_literal(rng, 1),
            1 => {
                let lo = rng.gen_range(0..=10);
                PointSetExpr::range(lo, lo + rng.gen_range(0..=10))
            }
            2 => PointSetExpr::ap(rng.gen_range(0..=6), rng.gen_range(1..=5)),
            _ => PointSetExpr::naturals(),
        }
    } else if rng.gen_bool(0.4) {
        finite_literal(rng, dim)
    } else {
        // Split the dimension across a product of smaller leaves.
        let left = rng.gen_range(1..dim);
        PointSetExpr::product(leaf(rng, left), leaf(rng, dim - left))
    };
    if count_estimate(&candidate, 64) > ESTIMATE_CAP {
        finite_literal(rng, dim)
    } else {
        candidate
    }
}

/// A random expression of exactly this dimension. `depth` bounds operator
/// nesting; candidates whose estimated box count at index 64 exceeds the
/// cap degrade to leaves, keeping enumeration-backed counting affordable.
pub fn expr(rng: &mut impl Rng, dim: usize, depth: u32) -> PointSetExpr {
    assert!(dim >= 1);
    if depth == 0 {
        return leaf(rng, dim);
    }
    let candidate = match rng.gen_range(0u8..10) {
        0..=3 => leaf(rng, dim),
        4 | 5 => {
            let l = expr(rng, dim, depth - 1);
            let r = expr(rng, dim, depth - 1);
            match rng.gen_range(0u8..3) {
                0 => PointSetExpr::union(l, r),
                1 => PointSetExpr::intersect(l, r),
                _ => PointSetExpr::diff(l, r),
            }
        }
        6 | 7 if dim >= 2 => {
            let left = rng.gen_range(1..dim);
            PointSetExpr::product(expr(rng, left, depth - 1), expr(rng, dim - left, depth - 1))
        }
        8 | 9 if dim >= 2 => {
            let tag_dim = rng.gen_range(1..dim);
            PointSetExpr::lift(point(rng, tag_dim, 4), expr(rng, dim - tag_dim, depth - 1))
        }
        _ => leaf(rng, dim),
    };
    if count_estimate(&candidate, 64) > ESTIMATE_CAP {
        leaf(rng, dim)
    } else {
        candidate
    }
}

/// A model with up to `commitments` random periodic commitments, built by
/// retrying commits until consistency holds (inconsistent samples are
/// skipped, so the result may hold fewer).
pub fn model(rng: &mut impl Rng, commitments: usize) -> FilterModel {
    let mut m = FilterModel::new();
    let mut tries = 0;
    while m.commitments().len() < commitments && tries < 64 {
        tries += 1;
        let modulus = rng.gen_range(2..=6);
        let residue = rng.gen_range(0..modulus);
        if let Ok(next) = m.commit(&EventuallyPeriodic::residue_class(residue, modulus)) {
            m = next;
        }
    }
    m
}

/// A random series with small constant and coefficients over cheap sets.
pub fn series(rng: &mut impl Rng, max_terms: usize) -> SeriesExpr {
    let constant = BigInt::from(rng.gen_range(-4i64..=4));
    let terms = (0..rng.gen_range(1..=max_terms.max(1)))
        .map(|_| {
            let dim = rng.gen_range(1..=2);
            (BigInt::from(rng.gen_range(-3i64..=3)), expr(rng, dim, 1))
        })
        .collect();
    SeriesExpr::new(constant, terms)
}
