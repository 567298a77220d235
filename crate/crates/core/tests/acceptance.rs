//! The acceptance gate: every shipping requirement of the library, each as
//! one test so the harness prints one pass/fail line per requirement.
//!
//! The requirements, in order:
//!
//!  1. products of definable sets count multiplicatively at every stage;
//!  2. the bounded-tuple census matches brute-force enumeration and its
//!     closed form;
//!  3. the pruned partition-norm search agrees with exhaustive search on
//!     every subset of `{0,…,5}`, with the hand-checked values;
//!  4. comparing evens against odds is oracle-dependent, and each
//!     commitment decides it the expected way with a valid certificate;
//!  5. the size axioms hold on seeded random samples under an uncommitted
//!     model and under a random three-commitment model;
//!  6. sizes form a commutative semiring under tagged sum and product;
//!  7. the subset and congruence witnesses verify literally;
//!  8. the census evaluation of formal sums is a ring homomorphism, and
//!     tag-shift differences vanish eventually;
//!  9. monotone restrictions reach the square-root floor, the tent maps
//!     move in unit steps, and the gap condition matches hand computation;
//! 10. finite sets compare equal exactly when their cardinalities agree,
//!     under every tested model.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use numerosity_core::{
    axiom_check, bounded_tuple_count, bounded_tuple_sequence, build_subset_representative,
    build_u_congruence, check_gap_condition, compare, gen, monotone_restriction, nu, num_add,
    num_mul, Axiom, AxiomSample, Budget, CheckOutcome, EventuallyPeriodic, ExplicitSet,
    FilterModel, FiniteNatSet, FuncExpr, FuncSpec, IndexSet, Membership, Numerosity, Point,
    PointSetExpr, Scope, SearchStrategy, SeriesExpr, TailTag, VerdictKind,
};

const H: u64 = 64;

/// The gate measures wall-clock tolerances, not work tolerances, so give
/// every check more work budget than it could ever spend.
fn ample() -> Budget {
    Budget::new(u64::MAX / 4)
}

fn evens() -> PointSetExpr {
    PointSetExpr::ap(0, 2)
}

fn odds() -> PointSetExpr {
    PointSetExpr::ap(1, 2)
}

/// 1. `|X×Y|_n = |X|_n · |Y|_n` exactly, for 500 seeded random pairs with
///    product dimension at most 3, at every stage `n <= 64`, within a minute.
#[test]
fn criterion_01_products_count_multiplicatively() {
    let started = Instant::now();
    let mut rng = gen::rng(0x01);
    let dims = [(1, 1), (1, 2), (2, 1)];
    for i in 0..500 {
        let (dx, dy) = dims[i % dims.len()];
        let x = gen::expr(&mut rng, dx, 2);
        let y = gen::expr(&mut rng, dy, 2);
        let product = PointSetExpr::product(x.clone(), y.clone());
        let budget = Budget::standard();
        for n in 0..=H {
            let lhs = product.count(n, &budget).expect("product count");
            let rhs = x.count(n, &budget).expect("left count")
                * y.count(n, &budget).expect("right count");
            assert_eq!(lhs, rhs, "pair {i} ({x}) x ({y}) at n={n}");
        }
    }
    assert!(
        started.elapsed() < Duration::from_secs(60),
        "took {:?}",
        started.elapsed()
    );
}

/// Count the tuples of length `1..=n` over `{0,…,n}` by literally walking
/// the tuple tree, one node per tuple.
fn tuple_tree_count(n: u64, length: u64) -> u64 {
    if length == 0 {
        return 1;
    }
    (0..=n).map(|_| tuple_tree_count(n, length - 1)).sum()
}

/// 2. The bounded-tuple census equals the brute-force walk for `n = 1..=6`
///    and the closed form `(n+1)·((n+1)^n − 1)/n` for `n = 1..=12`.
#[test]
fn criterion_02_tuple_census_matches_enumeration_and_closed_form() {
    for n in 1..=6 {
        let brute: u64 = (1..=n).map(|k| tuple_tree_count(n, k)).sum();
        assert_eq!(bounded_tuple_count(n), BigInt::from(brute), "n={n}");
    }
    for n in 1..=12u64 {
        let base = BigInt::from(n + 1);
        let power = num_traits::pow(base.clone(), n as usize);
        let closed = &base * (power - BigInt::one()) / BigInt::from(n);
        assert_eq!(bounded_tuple_count(n), closed, "n={n}");
    }
    let seq = bounded_tuple_sequence(4);
    let prefix: Vec<BigInt> = (0..=4).map(|n| seq.value(n).unwrap().clone()).collect();
    let expected: Vec<BigInt> = [0u64, 2, 12, 84, 780].iter().map(|&v| v.into()).collect();
    assert_eq!(prefix, expected);
}

/// 3. The pruned partition-norm search returns the same value as the
///    exhaustive one on every `A ⊆ {0,…,5}`, with the hand-checked values
///    `ν({0,1,2,3}) = 1` and `ν({1,2,3}) = 0`, within five minutes.
#[test]
fn criterion_03_norm_search_strategies_agree() {
    let started = Instant::now();
    for mask in 0u32..64 {
        let a: FiniteNatSet = (0..6u64).filter(|i| mask & (1 << i) != 0).collect();
        let naive = nu(&a, &ample(), SearchStrategy::Naive).expect("naive norm");
        let pruned = nu(&a, &ample(), SearchStrategy::Pruned).expect("pruned norm");
        assert_eq!(naive, pruned, "norms disagree on {a}");
    }
    let quad: FiniteNatSet = [0u64, 1, 2, 3].into_iter().collect();
    assert_eq!(nu(&quad, &ample(), SearchStrategy::Pruned).unwrap(), 1);
    let triple: FiniteNatSet = [1u64, 2, 3].into_iter().collect();
    assert_eq!(nu(&triple, &ample(), SearchStrategy::Pruned).unwrap(), 0);
    assert!(
        started.elapsed() < Duration::from_secs(300),
        "took {:?}",
        started.elapsed()
    );
}

/// 4. Evens versus odds: undecided without commitments (the censuses agree
///    exactly on the odd stages), equal once the odd stages are committed,
///    strictly greater once the even stages are — each verdict carrying a
///    certificate the model actually accepts.
#[test]
fn criterion_04_oracle_dependence_of_evens_versus_odds() {
    let budget = ample();
    let free = FilterModel::new();
    let odd_class = EventuallyPeriodic::residue_class(1, 2);
    let even_class = EventuallyPeriodic::residue_class(0, 2);

    let open = compare(&evens(), &odds(), &free, H, &budget).unwrap();
    assert_eq!(open.kind, VerdictKind::DependsOnOracle);
    assert_eq!(open.agreement.as_periodic(), Some(&odd_class));

    let with_odds = free.commit(&odd_class).unwrap();
    let equal = compare(&evens(), &odds(), &with_odds, H, &budget).unwrap();
    assert_eq!(equal.kind, VerdictKind::Equal);
    let cert = equal.certificate.expect("equality certificate");
    assert!(cert.is_subset_of(&odd_class), "certificate {cert} strays");
    assert_eq!(
        with_odds.query_periodic(&cert).membership,
        Membership::Member,
        "model rejects its own certificate"
    );

    let with_evens = free.commit(&even_class).unwrap();
    let greater = compare(&evens(), &odds(), &with_evens, H, &budget).unwrap();
    assert_eq!(greater.kind, VerdictKind::Greater);
    let cert = greater.certificate.expect("strictness certificate");
    assert!(cert.is_subset_of(&even_class), "certificate {cert} strays");
    assert_eq!(
        with_evens.query_periodic(&cert).membership,
        Membership::Member
    );
    // The margin is exactly one on the certified stages.
    let sx = evens().counting_sequence(H, &budget).unwrap();
    let sy = odds().counting_sequence(H, &budget).unwrap();
    let diff = sx.sub(&sy);
    for n in cert.members_up_to(H) {
        assert_eq!(diff.value(n), Some(&BigInt::one()), "margin at n={n}");
    }
}

/// 5. The five size axioms, each on the same 100 seeded homogeneous pairs,
///    under the uncommitted model and under a random three-commitment model.
///    Undecidable samples may be skipped; nothing may come out inconsistent,
///    and each axiom must actually decide a nonzero share.
#[test]
fn criterion_05_size_axioms_hold_on_random_samples() {
    let budget = ample();
    let mut rng = gen::rng(0x05);
    let mut pairs = Vec::new();
    for _ in 0..100 {
        let dim = rng.gen_range(1..=2);
        pairs.push((gen::expr(&mut rng, dim, 2), gen::expr(&mut rng, dim, 2)));
    }
    let tags: Vec<Point> = (0..pairs.len())
        .map(|_| {
            let dim = rng.gen_range(1..=2);
            gen::point(&mut rng, dim, 3)
        })
        .collect();
    let models = [FilterModel::new(), gen::model(&mut rng, 3)];

    // E0 gets pairs in guaranteed subset position; E3 a tag point; E4 two
    // equal-size premises built by zero-tag lifting, which never changes a
    // census. E1 and E2 take the raw pairs.
    let e0: Vec<AxiomSample> = pairs
        .iter()
        .map(|(x, y)| AxiomSample::Pair(x.clone(), PointSetExpr::union(x.clone(), y.clone())))
        .collect();
    let e1: Vec<AxiomSample> = pairs
        .iter()
        .map(|(x, y)| AxiomSample::Pair(x.clone(), y.clone()))
        .collect();
    let e3: Vec<AxiomSample> = pairs
        .iter()
        .zip(&tags)
        .map(|((x, _), p)| AxiomSample::Tagged(p.clone(), x.clone()))
        .collect();
    let e4: Vec<AxiomSample> = pairs
        .iter()
        .map(|(x, y)| {
            AxiomSample::Quad(
                x.clone(),
                PointSetExpr::lift(Point::from(0), x.clone()),
                y.clone(),
                PointSetExpr::lift(Point::from(0), y.clone()),
            )
        })
        .collect();

    for (mi, model) in models.iter().enumerate() {
        let suite: [(Axiom, &[AxiomSample]); 5] = [
            (Axiom::E0, &e0),
            (Axiom::E1, &e1),
            (Axiom::E2, &e1),
            (Axiom::E3, &e3),
            (Axiom::E4, &e4),
        ];
        for (axiom, samples) in suite {
            let report = axiom_check(axiom, samples, model, H, &budget).unwrap();
            let (consistent, inconsistent, skipped) = report.tallies();
            assert!(
                report.all_consistent(),
                "{axiom:?} under model {mi}: {inconsistent} inconsistent"
            );
            assert!(consistent > 0, "{axiom:?} under model {mi}: all skipped");
            assert_eq!(consistent + skipped, samples.len());
            if axiom == Axiom::E2 {
                // Every fully decided pair must report exactly one
                // attainable alternative.
                for entry in &report.entries {
                    if entry.outcome == CheckOutcome::Consistent {
                        assert!(
                            entry.detail.contains("exactly one alternative"),
                            "unexpected detail: {}",
                            entry.detail
                        );
                    }
                }
            }
        }
    }
}

fn censuses_agree(a: &Numerosity, b: &Numerosity, from: u64) -> bool {
    let horizon = a.horizon().min(b.horizon());
    (from..=horizon).all(|n| a.representative().value(n) == b.representative().value(n))
}

/// 6. Semiring laws on 200 seeded random triples, checked pointwise at
///    every stage up to the horizon: associativity both ways, multiplicative
///    commutativity, distributivity both ways, the empty set as additive
///    identity and a one-point set as two-sided multiplicative identity.
///    Tagged addition is commutative from stage 1 on (stage 0 sees only the
///    left tag by construction).
#[test]
fn criterion_06_sizes_form_a_semiring() {
    let budget = ample();
    let mut rng = gen::rng(0x06);
    let one = Numerosity::one(H, &budget).unwrap();
    let zero = Numerosity::zero(H, &budget).unwrap();
    let origin2 =
        Numerosity::of(PointSetExpr::singleton(Point::new(vec![0, 0])), H, &budget).unwrap();
    for t in 0..200 {
        let pick = |rng: &mut gen::ChaCha8Rng| {
            let dim = rng.gen_range(1..=2);
            Numerosity::of(gen::expr(rng, dim, 1), H, &budget).unwrap()
        };
        let a = pick(&mut rng);
        let b = pick(&mut rng);
        let c = pick(&mut rng);

        let ab = num_mul(&a, &b, &budget).unwrap();
        let ba = num_mul(&b, &a, &budget).unwrap();
        assert!(censuses_agree(&ab, &ba, 0), "triple {t}: ab != ba");

        let ab_c = num_mul(&ab, &c, &budget).unwrap();
        let bc = num_mul(&b, &c, &budget).unwrap();
        let a_bc = num_mul(&a, &bc, &budget).unwrap();
        assert!(
            censuses_agree(&ab_c, &a_bc, 0),
            "triple {t}: (ab)c != a(bc)"
        );

        let a_plus_b = num_add(&a, &b, &budget).unwrap();
        let b_plus_a = num_add(&b, &a, &budget).unwrap();
        assert!(
            censuses_agree(&a_plus_b, &b_plus_a, 1),
            "triple {t}: a+b != b+a from stage 1"
        );

        let sum_then_c = num_add(&a_plus_b, &c, &budget).unwrap();
        let b_plus_c = num_add(&b, &c, &budget).unwrap();
        let a_then_sum = num_add(&a, &b_plus_c, &budget).unwrap();
        assert!(
            censuses_agree(&sum_then_c, &a_then_sum, 0),
            "triple {t}: (a+b)+c != a+(b+c)"
        );

        let left = num_mul(&a, &b_plus_c, &budget).unwrap();
        let right = num_add(
            &num_mul(&a, &b, &budget).unwrap(),
            &num_mul(&a, &c, &budget).unwrap(),
            &budget,
        )
        .unwrap();
        assert!(
            censuses_agree(&left, &right, 0),
            "triple {t}: a(b+c) != ab+ac"
        );

        let left = num_mul(&a_plus_b, &c, &budget).unwrap();
        let right = num_add(
            &num_mul(&a, &c, &budget).unwrap(),
            &num_mul(&b, &c, &budget).unwrap(),
            &budget,
        )
        .unwrap();
        assert!(
            censuses_agree(&left, &right, 0),
            "triple {t}: (a+b)c != ac+bc"
        );

        let a_plus_zero = num_add(&a, &zero, &budget).unwrap();
        assert!(censuses_agree(&a_plus_zero, &a, 0), "triple {t}: a+0 != a");
        let zero_plus_a = num_add(&zero, &a, &budget).unwrap();
        assert!(
            censuses_agree(&zero_plus_a, &a, 1),
            "triple {t}: 0+a != a from stage 1"
        );

        for unit in [&one, &origin2] {
            let left = num_mul(unit, &a, &budget).unwrap();
            let right = num_mul(&a, unit, &budget).unwrap();
            assert!(censuses_agree(&left, &a, 0), "triple {t}: 1·a != a");
            assert!(censuses_agree(&right, &a, 0), "triple {t}: a·1 != a");
        }
    }
}

/// 7. The two constructive witnesses verify literally at the horizon: the
///    subset representative's census agrees with the source at every
///    checkpoint, and the congruence maps each checkpoint truncation exactly
///    onto the target's.
#[test]
fn criterion_07_witnesses_verify_literally() {
    let budget = ample();
    let free = FilterModel::new();

    let w = build_subset_representative(&evens(), &PointSetExpr::naturals(), &free, H, &budget)
        .unwrap();
    assert!(!w.checkpoints.is_empty());
    assert!(w.checkpoints.windows(2).all(|p| p[0] < p[1]));
    let universe: BTreeSet<Point> = PointSetExpr::naturals()
        .truncate(H, &budget)
        .unwrap()
        .into_iter()
        .collect();
    for p in &w.points {
        assert!(universe.contains(p), "{p} escapes the ambient set");
    }
    let sx = evens().counting_sequence(H, &budget).unwrap();
    for &m in &w.checkpoints {
        let selected = w.points.iter().filter(|p| p.bounded_by(m)).count();
        assert_eq!(
            &BigInt::from(selected),
            sx.value(m).unwrap(),
            "census mismatch at checkpoint {m}"
        );
        let via_expr = w.subset.count(m, &budget).unwrap();
        assert_eq!(BigInt::from(via_expr), BigInt::from(selected));
    }

    let with_odds = free
        .commit(&EventuallyPeriodic::residue_class(1, 2))
        .unwrap();
    let g = build_u_congruence(&evens(), &odds(), &with_odds, H, &budget).unwrap();
    assert!(!g.checkpoints.is_empty());
    let sources: BTreeSet<&Point> = g.pairs.iter().map(|(s, _)| s).collect();
    let targets: BTreeSet<&Point> = g.pairs.iter().map(|(_, t)| t).collect();
    assert_eq!(sources.len(), g.pairs.len(), "repeated source");
    assert_eq!(targets.len(), g.pairs.len(), "repeated target");
    for &n in &g.checkpoints {
        let image: BTreeSet<Point> = g
            .pairs
            .iter()
            .filter(|(s, _)| s.bounded_by(n))
            .map(|(_, t)| t.clone())
            .collect();
        let expected: BTreeSet<Point> = odds().truncate(n, &budget).unwrap().into_iter().collect();
        assert_eq!(image, expected, "image mismatch at checkpoint {n}");
        let mapped: BTreeSet<Point> = g
            .pairs
            .iter()
            .map(|(s, _)| s.clone())
            .filter(|s| s.bounded_by(n))
            .collect();
        let domain: BTreeSet<Point> = evens().truncate(n, &budget).unwrap().into_iter().collect();
        assert_eq!(mapped, domain, "domain mismatch at checkpoint {n}");
    }
}

/// 8. Census evaluation of formal sums is a ring homomorphism on 100
///    seeded random pairs at every stage up to 32, and the difference of a
///    tag-shifted copy against the anchored copy vanishes from the shift on.
#[test]
fn criterion_08_formal_sum_evaluation_is_a_ring_homomorphism() {
    let budget = ample();
    let mut rng = gen::rng(0x08);
    for i in 0..100 {
        let s = gen::series(&mut rng, 3);
        let t = gen::series(&mut rng, 3);
        let sum = s.add(&t);
        let product = s.mul(&t);
        for n in 0..=32 {
            let vs = s.phi(n, &budget).unwrap();
            let vt = t.phi(n, &budget).unwrap();
            assert_eq!(sum.phi(n, &budget).unwrap(), &vs + &vt, "pair {i} n={n}");
            assert_eq!(
                product.phi(n, &budget).unwrap(),
                &vs * &vt,
                "pair {i} n={n}"
            );
        }
    }
    for shift in 1..=8u64 {
        let anchored =
            SeriesExpr::of_set(PointSetExpr::lift(Point::from(0), PointSetExpr::naturals()));
        let shifted = SeriesExpr::of_set(PointSetExpr::lift(
            Point::from(shift),
            PointSetExpr::naturals(),
        ));
        let difference = shifted.sub(&anchored);
        for n in 0..=32 {
            let v = difference.phi(n, &budget).unwrap();
            if n >= shift {
                assert!(v.is_zero(), "shift {shift} persists at n={n}: {v}");
            } else {
                assert_eq!(v, -BigInt::from(n + 1), "shift {shift} at n={n}");
            }
        }
    }
}

/// 9. Growth analysis: 100 seeded random functions with `f(n) <= n` admit
///    a monotone restriction of at least `⌊√(H+1)⌋ = 16` points at `H = 255`;
///    the three tent maps move in unit steps across their whole domains up to
///    `2^10`; and the gap condition reproduces three hand-computed examples.
#[test]
fn criterion_09_growth_analysis_meets_its_floors() {
    let budget = ample();
    let mut rng = gen::rng(0x09);
    let free = FilterModel::new();
    const GH: u64 = 255;
    for t in 0..100 {
        let table: Vec<u64> = (0..=GH).map(|n| rng.gen_range(0..=n)).collect();
        let f = FuncSpec::table(table.clone());
        let w = monotone_restriction(&f, &free, GH, &budget).unwrap();
        assert!(
            w.indices.len() >= 16,
            "table {t}: witness has only {} points",
            w.indices.len()
        );
        assert!(w.indices.windows(2).all(|p| p[0] < p[1]));
        assert!(w.values.windows(2).all(|p| p[0] <= p[1]));
        for (i, v) in w.indices.iter().zip(&w.values) {
            assert_eq!(&BigInt::from(table[*i as usize]), v);
        }
    }

    for (f, start) in [(FuncSpec::F0, 2u64), (FuncSpec::F1, 12), (FuncSpec::F2, 6)] {
        let mut prev = f.eval(start, &budget).unwrap();
        for m in start + 1..=1 << 10 {
            let current = f.eval(m, &budget).unwrap();
            assert!(
                (&current - &prev).abs() <= BigInt::one(),
                "{f} jumps at {m}: {prev} -> {current}"
            );
            prev = current;
        }
    }

    let even_stages: IndexSet = EventuallyPeriodic::residue_class(0, 2).into();
    let zero_fn = FuncSpec::closed(FuncExpr::constant(0));
    assert!(
        check_gap_condition(&zero_fn, &even_stages, 64, &budget)
            .unwrap()
            .holds
    );

    let powers: Vec<u64> = (0..7).map(|e| 1 << e).collect();
    let powers_set: IndexSet = ExplicitSet::from_members(&powers, 64, TailTag::Unknown).into();
    let identity = FuncSpec::closed(FuncExpr::Var);
    let report = check_gap_condition(&identity, &powers_set, 64, &budget).unwrap();
    assert!(!report.holds);
    assert_eq!(report.first_violation, Some((1, 2)));

    let half = FuncSpec::closed(FuncExpr::FloorDiv(
        Box::new(FuncExpr::Var),
        Box::new(FuncExpr::constant(2)),
    ));
    let powers_from_two: Vec<u64> = (1..7).map(|e| 1 << e).collect();
    let set: IndexSet = ExplicitSet::from_members(&powers_from_two, 64, TailTag::Unknown).into();
    assert!(check_gap_condition(&half, &set, 64, &budget).unwrap().holds);
}

/// 10. Over a pool of finite expressions with at most six points each —
///     literals, truncated progressions, differences, unions, tagged copies —
///     every pair compares `Equal` exactly when the cardinalities agree, under
///     the uncommitted model, a committed one, and a random one; and every
///     such equality holds in all models at once.
#[test]
fn criterion_10_finite_sets_compare_by_cardinality() {
    let budget = ample();
    let mut rng = gen::rng(0x10);
    let mut pool: Vec<PointSetExpr> = vec![
        PointSetExpr::empty(),
        PointSetExpr::finite(2, vec![]).unwrap(),
        PointSetExpr::singleton(Point::from(7)),
        PointSetExpr::singleton(Point::new(vec![1, 2])),
        PointSetExpr::range(3, 5),
        PointSetExpr::range(0, 5),
        PointSetExpr::intersect(PointSetExpr::ap(0, 3), PointSetExpr::range(0, 9)),
        PointSetExpr::diff(PointSetExpr::range(0, 5), PointSetExpr::ap(0, 2)),
        PointSetExpr::union(
            PointSetExpr::range(0, 2),
            PointSetExpr::finite(1, vec![Point::from(5), Point::from(6)]).unwrap(),
        ),
        PointSetExpr::lift(
            Point::from(2),
            PointSetExpr::finite(1, vec![Point::from(0), Point::from(1)]).unwrap(),
        ),
    ];
    for _ in 0..8 {
        let dim = rng.gen_range(1..=2);
        let cardinality = rng.gen_range(0..=6);
        let mut points = BTreeSet::new();
        while points.len() < cardinality {
            points.insert(gen::point(&mut rng, dim, 9));
        }
        pool.push(PointSetExpr::finite(dim, points.into_iter().collect()).unwrap());
    }
    let models = [
        FilterModel::new(),
        FilterModel::new()
            .commit(&EventuallyPeriodic::residue_class(1, 2))
            .unwrap(),
        gen::model(&mut rng, 3),
    ];
    for (i, x) in pool.iter().enumerate() {
        let cx = x.count(H, &budget).unwrap();
        for (j, y) in pool.iter().enumerate() {
            let cy = y.count(H, &budget).unwrap();
            for (mi, model) in models.iter().enumerate() {
                let verdict = compare(x, y, model, H, &budget).unwrap();
                if cx == cy {
                    assert_eq!(
                        verdict.kind,
                        VerdictKind::Equal,
                        "pool {i} vs {j} under model {mi}"
                    );
                    assert_eq!(verdict.scope, Scope::AllModels);
                } else if cx < cy {
                    assert_eq!(
                        verdict.kind,
                        VerdictKind::Less,
                        "pool {i} vs {j} under model {mi}"
                    );
                } else {
                    assert_eq!(
                        verdict.kind,
                        VerdictKind::Greater,
                        "pool {i} vs {j} under model {mi}"
                    );
                }
            }
        }
    }
}
