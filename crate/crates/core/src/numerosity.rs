//! Comparison and arithmetic of point-set sizes relative to a filter model.
//!
//! Two sets compare through the sign of `⟨|Y_n| − |X_n|⟩`: the index line
//! splits into the cells where the difference is negative, zero, or
//! positive, and the model's oracle is asked which cell it accepts. An
//! accepted zero cell means the sets have the same size; an accepted
//! positive cell means `X` is strictly smaller. When no cell is accepted
//! the comparison genuinely depends on commitments not yet made, and the
//! verdict says so rather than guessing.
//!
//! Sizes form a semiring: addition is implemented as a disjointly tagged
//! union, multiplication as a cartesian product, and both leave an exact
//! audit trail — the representative counting sequence of the constructed
//! expression.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::budget::Budget;
use crate::index_set::{EventuallyPeriodic, ExplicitSet, IndexSet, TailTag};
use crate::oracle::{FilterModel, Membership};
use crate::pointset::{Point, PointSetError, PointSetExpr};
use crate::seq::CountingSequence;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumerosityError {
    #[error(transparent)]
    PointSet(#[from] PointSetError),
    /// The set `{n : |X_n| <= |Y_n|}` is not accepted by the model, so no
    /// subset representative can be grounded.
    #[error("the model does not accept the domination set {{n : |X_n| <= |Y_n|}}")]
    PreconditionNotMember,
    /// Fewer than two usable checkpoints fit under the horizon.
    #[error("horizon too small: found {checkpoints} checkpoint(s), need at least 2")]
    HorizonTooSmall { checkpoints: usize },
    /// A congruence was requested for sets the model does not consider
    /// equal in size.
    #[error("sets are not equinumerous under this model: comparison says {kind}")]
    NotEquinumerous { kind: VerdictKind },
}

/// The answer of a size comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictKind {
    /// Same size: the zero cell of the difference is accepted.
    Equal,
    /// `X` is strictly smaller than `Y`.
    Less,
    /// `X` is strictly larger than `Y`.
    Greater,
    /// No sign cell is accepted under the present commitments.
    DependsOnOracle,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerdictKind::Equal => write!(f, "Equal"),
            VerdictKind::Less => write!(f, "Less"),
            VerdictKind::Greater => write!(f, "Greater"),
            VerdictKind::DependsOnOracle => write!(f, "DependsOnOracle"),
        }
    }
}

/// How far a decided verdict reaches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// Forced by a cofinite (or finite) cell: every model answers the same.
    AllModels,
    /// Relies on the commitments of the queried model.
    ThisModel,
}

/// Outcome of comparing `X` against `Y` under a model.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub scope: Scope,
    /// The agreement set `D = {n : |X_n| = |Y_n|}` (the zero cell).
    pub agreement: IndexSet,
    /// The accepted cell intersected with the model, when a cell decided
    /// the verdict.
    pub certificate: Option<EventuallyPeriodic>,
    /// Whether equality was positively ruled out (zero cell rejected) even
    /// though no direction has been decided.
    pub equal_excluded: bool,
    pub horizon: u64,
}

impl Verdict {
    /// The single machine-readable line:
    /// `verdict=<kind> D=<descriptor> cert=<descriptor|none> H=<n>`.
    pub fn machine_line(&self) -> String {
        let cert = match &self.certificate {
            Some(c) => c.to_string(),
            None => "none".to_string(),
        };
        format!(
            "verdict={} D={} cert={} H={}",
            self.kind, self.agreement, cert, self.horizon
        )
    }
}

/// Compare the sizes of `x` and `y` under `model`: classify the sign of
/// `⟨|Y_n| − |X_n|⟩` and ask the oracle which sign cell it accepts.
///
/// At most one cell can be accepted (the cells are disjoint and the model's
/// committed core is infinite). `Equal`/`Less`/`Greater` come with the
/// certificate of the accepted cell; when no cell is accepted the verdict
/// is `DependsOnOracle`, with `equal_excluded` flagging the case where the
/// zero cell was positively rejected.
pub fn compare(
    x: &PointSetExpr,
    y: &PointSetExpr,
    model: &FilterModel,
    horizon: u64,
    budget: &Budget,
) -> Result<Verdict, NumerosityError> {
    let sx = x.counting_sequence(horizon, budget)?;
    let sy = y.counting_sequence(horizon, budget)?;
    Ok(compare_sequences(&sx, &sy, model))
}

/// [`compare`] on already-computed counting sequences.
pub fn compare_sequences(
    sx: &CountingSequence,
    sy: &CountingSequence,
    model: &FilterModel,
) -> Verdict {
    let diff = sy.sub(sx);
    let pattern = diff.sign_pattern();
    let q_zero = model.query(&pattern.zero);
    let q_pos = model.query(&pattern.positive);
    let q_neg = model.query(&pattern.negative);

    let decided = [
        (VerdictKind::Equal, &q_zero),
        (VerdictKind::Less, &q_pos),
        (VerdictKind::Greater, &q_neg),
    ]
    .into_iter()
    .find(|(_, q)| q.membership == Membership::Member);

    let (kind, scope, certificate) = match decided {
        Some((kind, q)) => {
            let scope = if q.frechet_only {
                Scope::AllModels
            } else {
                Scope::ThisModel
            };
            (kind, scope, q.certificate.clone())
        }
        None => (VerdictKind::DependsOnOracle, Scope::ThisModel, None),
    };

    Verdict {
        kind,
        scope,
        equal_excluded: kind == VerdictKind::DependsOnOracle
            && q_zero.membership == Membership::NonMember,
        agreement: pattern.zero,
        certificate,
        horizon: diff.horizon(),
    }
}

/// Whether `x` and `y` have the same size under `model`.
///
/// This is [`compare`] read through its `Equal` lens; the full verdict is
/// returned so callers can see direction or undecidedness too.
pub fn equinumerous(
    x: &PointSetExpr,
    y: &PointSetExpr,
    model: &FilterModel,
    horizon: u64,
    budget: &Budget,
) -> Result<Verdict, NumerosityError> {
    compare(x, y, model, horizon, budget)
}

/// The size of a definable point set, carried as the defining expression
/// plus its representative counting sequence up to a horizon.
///
/// Invariant: `representative == provenance.counting_sequence(horizon)`.
#[derive(Debug, Clone)]
pub struct Numerosity {
    provenance: PointSetExpr,
    representative: CountingSequence,
}

impl Numerosity {
    pub fn of(expr: PointSetExpr, horizon: u64, budget: &Budget) -> Result<Self, NumerosityError> {
        let representative = expr.counting_sequence(horizon, budget)?;
        Ok(Numerosity {
            provenance: expr,
            representative,
        })
    }

    /// The additive identity: the size of the empty set.
    pub fn zero(horizon: u64, budget: &Budget) -> Result<Self, NumerosityError> {
        Self::of(PointSetExpr::empty(), horizon, budget)
    }

    /// The multiplicative identity: the size of a one-point set.
    pub fn one(horizon: u64, budget: &Budget) -> Result<Self, NumerosityError> {
        Self::of(PointSetExpr::singleton(Point::from(0)), horizon, budget)
    }

    pub fn provenance(&self) -> &PointSetExpr {
        &self.provenance
    }

    pub fn representative(&self) -> &CountingSequence {
        &self.representative
    }

    pub fn horizon(&self) -> u64 {
        self.representative.horizon()
    }
}

impl fmt::Display for Numerosity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n({})", self.provenance)
    }
}

/// Add two sizes: tag each operand into a fresh leading coordinate (`0…` on
/// the left, `1, 0…` on the right) and take the now provably disjoint
/// union. The representative counts `|A_n| + |B_n|` for every `n >= 1`.
pub fn num_add(
    a: &Numerosity,
    b: &Numerosity,
    budget: &Budget,
) -> Result<Numerosity, NumerosityError> {
    let da = a.provenance.dimension()?;
    let db = b.provenance.dimension()?;
    let d = da.max(db) + 1;
    let tag_a = Point::new(vec![0; d - da]);
    let mut tb = vec![0; d - db];
    tb[0] = 1;
    let tag_b = Point::new(tb);
    let expr = PointSetExpr::union(
        PointSetExpr::lift(tag_a, a.provenance.clone()),
        PointSetExpr::lift(tag_b, b.provenance.clone()),
    );
    Numerosity::of(expr, a.horizon().min(b.horizon()), budget)
}

/// Multiply two sizes: the cartesian product. The representative counts
/// `|A_n| · |B_n|` at every `n`.
pub fn num_mul(
    a: &Numerosity,
    b: &Numerosity,
    budget: &Budget,
) -> Result<Numerosity, NumerosityError> {
    let expr = PointSetExpr::product(a.provenance.clone(), b.provenance.clone());
    Numerosity::of(expr, a.horizon().min(b.horizon()), budget)
}

/// A concrete subset `Z ⊆ Y` built to witness `|X| <= |Y|`: its census
/// agrees with `X`'s at every checkpoint.
#[derive(Debug, Clone)]
pub struct SubsetWitness {
    /// The selected points, lexicographically sorted.
    pub points: Vec<Point>,
    /// `Z` as a finite expression of `Y`'s dimension.
    pub subset: PointSetExpr,
    /// Indices `m` with `|Z_m| = |X_m|`, increasing; the census difference
    /// `|Y_m| − |X_m|` is nondecreasing along them, which is exactly what
    /// lets the block construction continue past any horizon.
    pub checkpoints: Vec<u64>,
    /// The accepted domination set the checkpoints were drawn from.
    pub certificate: EventuallyPeriodic,
    pub horizon: u64,
}

/// Build a subset of `Y` equinumerous to `X`, given that the model accepts
/// the domination set `{n : |X_n| <= |Y_n|}`.
///
/// Checkpoints are the longest nondecreasing run of the census difference
/// over the certificate (restricted to the horizon); between consecutive
/// checkpoints the construction takes the lexicographically least fresh
/// points of `Y`, exactly enough to keep the censuses aligned.
pub fn build_subset_representative(
    x: &PointSetExpr,
    y: &PointSetExpr,
    model: &FilterModel,
    horizon: u64,
    budget: &Budget,
) -> Result<SubsetWitness, NumerosityError> {
    let sx = x.counting_sequence(horizon, budget)?;
    let sy = y.counting_sequence(horizon, budget)?;
    let diff = sy.sub(&sx);
    let pattern = diff.sign_pattern();

    // The domination set {n : |X_n| <= |Y_n|} = zero ∪ positive cell.
    let domination = match (pattern.zero.as_periodic(), pattern.positive.as_periodic()) {
        (Some(z), Some(p)) => IndexSet::Periodic(z.union(p)),
        _ => {
            let bits = (0..=horizon)
                .map(|n| !diff.value(n).expect("within horizon").is_negative())
                .collect();
            IndexSet::Explicit(ExplicitSet::new(bits, TailTag::Unknown))
        }
    };
    let q = model.query(&domination);
    if q.membership != Membership::Member {
        return Err(NumerosityError::PreconditionNotMember);
    }
    let certificate = q.certificate.expect("accepted sets carry a certificate");

    let candidates = certificate.members_up_to(horizon);
    let values: Vec<&BigInt> = candidates
        .iter()
        .map(|&m| diff.value(m).expect("within horizon"))
        .collect();
    let run = crate::growth::longest_nondecreasing(&values);
    let checkpoints: Vec<u64> = run.iter().map(|&i| candidates[i]).collect();
    if checkpoints.len() < 2 {
        return Err(NumerosityError::HorizonTooSmall {
            checkpoints: checkpoints.len(),
        });
    }

    let y_points = y.truncate(horizon, budget)?;
    budget
        .charge(y_points.len() as u64)
        .map_err(PointSetError::from)?;
    let census = |m: u64| -> usize {
        sx.value(m)
            .expect("within horizon")
            .to_usize()
            .expect("census fits in memory")
    };

    let mut points: Vec<Point> = Vec::new();
    let mut previous: Option<u64> = None;
    for &m in &checkpoints {
        let need = census(m) - previous.map_or(0, &census);
        let lower = previous; // select from the annulus (previous, m]
        let fresh = y_points
            .iter()
            .filter(|p| {
                let c = p.max_coord();
                c <= m && lower.is_none_or(|l| c > l)
            })
            .take(need)
            .cloned()
            .collect::<Vec<_>>();
        assert_eq!(
            fresh.len(),
            need,
            "annulus supply cannot run short on a nondecreasing run"
        );
        points.extend(fresh);
        previous = Some(m);
    }
    points.sort();

    // Audit the witness: census agreement at every checkpoint.
    for &m in &checkpoints {
        let have = points.iter().filter(|p| p.max_coord() <= m).count();
        assert_eq!(have, census(m), "checkpoint census must match");
    }

    let dim = y.dimension()?;
    let subset = PointSetExpr::finite(dim, points.clone())?;
    Ok(SubsetWitness {
        points,
        subset,
        checkpoints,
        certificate,
        horizon,
    })
}

/// A block bijection witnessing equal size: `pairs` maps `X`-points to
/// `Y`-points so that every checkpoint truncation of `X` lands exactly on
/// the matching truncation of `Y`.
#[derive(Debug, Clone)]
pub struct Congruence {
    pub pairs: Vec<(Point, Point)>,
    /// The checkpoints `W`: members of the certificate up to the horizon.
    pub checkpoints: Vec<u64>,
    pub certificate: EventuallyPeriodic,
    pub horizon: u64,
}

/// Build the block bijection between `x` and `y` when the model judges
/// them equal in size.
///
/// Between consecutive members of the certificate, both sets gain equally
/// many points (their censuses agree on the certificate), and those blocks
/// are matched in lexicographic order. Beyond the last checkpoint the
/// pairing continues lexicographically as far as both sides reach.
pub fn build_u_congruence(
    x: &PointSetExpr,
    y: &PointSetExpr,
    model: &FilterModel,
    horizon: u64,
    budget: &Budget,
) -> Result<Congruence, NumerosityError> {
    let verdict = compare(x, y, model, horizon, budget)?;
    if verdict.kind != VerdictKind::Equal {
        return Err(NumerosityError::NotEquinumerous { kind: verdict.kind });
    }
    let certificate = verdict
        .certificate
        .expect("Equal verdicts carry a certificate");
    let checkpoints = certificate.members_up_to(horizon);

    let xs = x.truncate(horizon, budget)?;
    let ys = y.truncate(horizon, budget)?;
    budget
        .charge((xs.len() + ys.len()) as u64)
        .map_err(PointSetError::from)?;

    // Bucket index of a point: the first checkpoint at or above its
    // max-coordinate; points beyond every checkpoint share the last bucket.
    let bucket_of = |p: &Point| checkpoints.partition_point(|&c| c < p.max_coord());
    let mut x_buckets: Vec<Vec<Point>> = vec![Vec::new(); checkpoints.len() + 1];
    let mut y_buckets: Vec<Vec<Point>> = vec![Vec::new(); checkpoints.len() + 1];
    for p in xs {
        let b = bucket_of(&p);
        x_buckets[b].push(p);
    }
    for p in ys {
        let b = bucket_of(&p);
        y_buckets[b].push(p);
    }

    let mut pairs: Vec<(Point, Point)> = Vec::new();
    for (i, (xb, yb)) in x_buckets.into_iter().zip(y_buckets).enumerate() {
        if i < checkpoints.len() {
            assert_eq!(
                xb.len(),
                yb.len(),
                "censuses agree at checkpoints, so complete blocks match"
            );
        }
        // The final open block pairs as far as both sides extend.
        pairs.extend(xb.into_iter().zip(yb));
    }

    // Audit: the image of every checkpoint truncation is exact.
    for &w in &checkpoints {
        let image: BTreeSet<Point> = pairs
            .iter()
            .filter(|(a, _)| a.max_coord() <= w)
            .map(|(_, q)| q.clone())
            .collect();
        let target: BTreeSet<Point> = y.truncate(w, budget)?.into_iter().collect();
        assert_eq!(
            image, target,
            "block bijection must hit the truncation exactly at n={w}"
        );
    }

    Ok(Congruence {
        pairs,
        checkpoints,
        certificate,
        horizon,
    })
}

/// The finite-size axioms checked by [`axiom_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    /// E0: a set pointwise dominated by another is equinumerous to one of
    /// its subsets.
    E0,
    /// E1: comparing `A` with `B` agrees with comparing `A∖B` with `B∖A`.
    E1,
    /// E2: exactly one of smaller / equal / larger holds once decided.
    E2,
    /// E3: one-point products and lifts leave size unchanged.
    E3,
    /// E4: products of equal-sized sets are equal-sized.
    E4,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::E0 => write!(f, "E0"),
            Axiom::E1 => write!(f, "E1"),
            Axiom::E2 => write!(f, "E2"),
            Axiom::E3 => write!(f, "E3"),
            Axiom::E4 => write!(f, "E4"),
        }
    }
}

/// One test case for an axiom check.
#[derive(Debug, Clone)]
pub enum AxiomSample {
    /// Two sets (E0 expects domination `|A_n| <= |B_n|`; E1/E2 any pair of
    /// equal dimension).
    Pair(PointSetExpr, PointSetExpr),
    /// A tag point and a set (E3).
    Tagged(Point, PointSetExpr),
    /// Two pairs `(A, A', B, B')` (E4).
    Quad(PointSetExpr, PointSetExpr, PointSetExpr, PointSetExpr),
}

impl fmt::Display for AxiomSample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomSample::Pair(a, b) => write!(f, "A={a}; B={b}"),
            AxiomSample::Tagged(p, a) => write!(f, "P={p}; A={a}"),
            AxiomSample::Quad(a, a2, b, b2) => {
                write!(f, "A={a}; A'={a2}; B={b}; B'={b2}")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckOutcome {
    /// Everything the sample could decide agreed with the axiom.
    Consistent,
    /// A decided fact contradicted the axiom.
    Inconsistent,
    /// The sample does not exercise the axiom here (wrong shape, failed
    /// precondition, or the oracle left the key comparison undecided).
    Skipped,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckOutcome::Consistent => write!(f, "consistent"),
            CheckOutcome::Inconsistent => write!(f, "inconsistent"),
            CheckOutcome::Skipped => write!(f, "skipped"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AxiomEntry {
    pub sample: String,
    pub outcome: CheckOutcome,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub entries: Vec<AxiomEntry>,
}

impl AxiomReport {
    /// True when no entry is inconsistent (skips do not count against).
    pub fn all_consistent(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.outcome != CheckOutcome::Inconsistent)
    }

    /// `(consistent, inconsistent, skipped)` tallies.
    pub fn tallies(&self) -> (usize, usize, usize) {
        let mut t = (0, 0, 0);
        for e in &self.entries {
            match e.outcome {
                CheckOutcome::Consistent => t.0 += 1,
                CheckOutcome::Inconsistent => t.1 += 1,
                CheckOutcome::Skipped => t.2 += 1,
            }
        }
        t
    }
}

/// Check one axiom against a batch of samples under a model.
///
/// Every entry reports what could actually be decided: a sample whose
/// comparisons stay undecided is `Skipped` (with the reason), never silently
/// counted as support. Resource exhaustion aborts the whole check.
pub fn axiom_check(
    axiom: Axiom,
    samples: &[AxiomSample],
    model: &FilterModel,
    horizon: u64,
    budget: &Budget,
) -> Result<AxiomReport, NumerosityError> {
    let mut entries = Vec::with_capacity(samples.len());
    for sample in samples {
        let rendered = sample.to_string();
        let entry = match (axiom, sample) {
            (Axiom::E0, AxiomSample::Pair(a, b)) => check_e0(a, b, model, horizon, budget)?,
            (Axiom::E1, AxiomSample::Pair(a, b)) => check_e1(a, b, model, horizon, budget)?,
            (Axiom::E2, AxiomSample::Pair(a, b)) => check_e2(a, b, model, horizon, budget)?,
            (Axiom::E3, AxiomSample::Tagged(p, a)) => check_e3(p, a, model, horizon, budget)?,
            (Axiom::E4, AxiomSample::Quad(a, a2, b, b2)) => {
                check_e4(a, a2, b, b2, model, horizon, budget)?
            }
            _ => (
                CheckOutcome::Skipped,
                format!("sample shape does not fit {axiom}"),
            ),
        };
        entries.push(AxiomEntry {
            sample: rendered,
            outcome: entry.0,
            detail: entry.1,
        });
    }
    Ok(AxiomReport { axiom, entries })
}

type Checked = (CheckOutcome, String);

fn check_e0(
    a: &PointSetExpr,
    b: &PointSetExpr,
    model: &FilterModel,
    horizon: u64,
    budget: &Budget,
) -> Result<Checked, NumerosityError> {
    let sa = a.counting_sequence(horizon, budget)?;
    let sb = b.counting_sequence(horizon, budget)?;
    if let Some(n) = (0..=horizon).find(|&n| sa.value(n).unwrap() > sb.value(n).unwrap()) {
        return Ok((
            CheckOutcome::Skipped,
            format!("pointwise domination fails at n={n}"),
        ));
    }
    match build_subset_representative(a, b, model, horizon, budget) {
        Ok(w) => Ok((
            CheckOutcome::Consistent,
            format!(
                "subset representative with {} points over {} checkpoints",
                w.points.len(),
                w.checkpoints.len()
            ),
        )),
        Err(NumerosityError::PreconditionNotMember) => Ok((
            CheckOutcome::Skipped,
            "domination set undecided by the model".to_string(),
        )),
        Err(NumerosityError::HorizonTooSmall { checkpoints }) => Ok((
            CheckOutcome::Skipped,
            format!("only {checkpoints} checkpoint(s) under this horizon"),
        )),
        Err(e) => Err(e),
    }
}

fn check_e1(
    a: &PointSetExpr,
    b: &PointSetExpr,
    model: &FilterModel,
    horizon: u64,
    budget: &Budget,
) -> Result<Checked, NumerosityError> {
    if a.dimension()? != b.dimension()? {
        return Ok((
            CheckOutcome::Skipped,
            "operands of different dimension".to_string(),
        ));
    }
    let a_minus_b = PointSetExpr::diff(a.clone(), b.clone());
    let b_minus_a = PointSetExpr::diff(b.clone(), a.clone());
    let sa = a.counting_sequence(horizon, budget)?;
    let sb = b.counting_sequence(horizon, budget)?;
    let sab = a_minus_b.counting_sequence(horizon, budget)?;
    let sba = b_minus_a.counting_sequence(horizon, budget)?;
    for n in 0..=horizon {
        let lhs = sa.value(n).unwrap() - sb.value(n).unwrap();
        let rhs = sab.value(n).unwrap() - sba.value(n).unwrap();
        if lhs != rhs {
            return Ok((
                CheckOutcome::Inconsistent,
                format!("census identity |A|-|B| = |A∖B|-|B∖A| fails at n={n}"),
            ));
        }
    }
    let direct = compare(a, b, model, horizon, budget)?;
    let via_diff = compare(&a_minus_b, &b_minus_a, model, horizon, budget)?;
    let both_decided = direct.kind != VerdictKind::DependsOnOracle
        && via_diff.kind != VerdictKind::DependsOnOracle;
    if both_decided && direct.kind != via_diff.kind {
        return Ok((
            CheckOutcome::Inconsistent,
            format!(
                "direct verdict {} disagrees with difference verdict {}",
                direct.kind, via_diff.kind
            ),
        ));
    }
    let note = if both_decided {
        format!("both routes decide {}", direct.kind)
    } else {
        format!(
            "census identity holds everywhere; verdicts do not conflict \
             (direct {}, via differences {})",
            direct.kind, via_diff.kind
        )
    };
    Ok((CheckOutcome::Consistent, note))
}

fn check_e2(
    a: &PointSetExpr,
    b: &PointSetExpr,
    model: &FilterModel,
    horizon: u64,
    budget: &Budget,
) -> Result<Checked, NumerosityError> {
    let sa = a.counting_sequence(horizon, budget)?;
    let sb = b.counting_sequence(horizon, budget)?;
    let diff = sb.sub(&sa);
    let pattern = diff.sign_pattern();
    let members = [&pattern.zero, &pattern.positive, &pattern.negative]
        .into_iter()
        .filter(|cell| model.query(cell).membership == Membership::Member)
        .count();
    let verdict = compare_sequences(&sa, &sb, model);
    if verdict.kind == VerdictKind::DependsOnOracle {
        return Ok((
            CheckOutcome::Skipped,
            "no sign cell accepted under present commitments".to_string(),
        ));
    }
    if members != 1 {
        return Ok((
            CheckOutcome::Inconsistent,
            format!("{members} sign cells accepted at once"),
        ));
    }
    // For a strict inequality, the smaller side must embed as a subset of
    // the larger; attempt the witness for extra evidence.
    let witness_note = match verdict.kind {
        VerdictKind::Less => witness_note(a, b, model, horizon, budget)?,
        VerdictKind::Greater => witness_note(b, a, model, horizon, budget)?,
        _ => String::new(),
    };
    Ok((
        CheckOutcome::Consistent,
        format!(
            "exactly one alternative holds ({}){witness_note}",
            verdict.kind
        ),
    ))
}

fn witness_note(
    small: &PointSetExpr,
    large: &PointSetExpr,
    model: &FilterModel,
    horizon: u64,
    budget: &Budget,
) -> Result<String, NumerosityError> {
    match build_subset_representative(small, large, model, horizon, budget) {
        Ok(w) => Ok(format!("; subset witness with {} points", w.points.len())),
        Err(NumerosityError::PreconditionNotMember)
        | Err(NumerosityError::HorizonTooSmall { .. }) => {
            Ok("; subset witness out of reach at this horizon".to_string())
        }
        Err(e) => Err(e),
    }
}

fn check_e3(
    p: &Point,
    a: &PointSetExpr,
    model: &FilterModel,
    horizon: u64,
    budget: &Budget,
) -> Result<Checked, NumerosityError> {
    let product = PointSetExpr::product(a.clone(), PointSetExpr::singleton(p.clone()));
    let lifted = PointSetExpr::lift(p.clone(), a.clone());
    let v1 = compare(a, &product, model, horizon, budget)?;
    let v2 = compare(a, &lifted, model, horizon, budget)?;
    for (label, v) in [("product", &v1), ("lift", &v2)] {
        match v.kind {
            VerdictKind::Equal => {}
            VerdictKind::DependsOnOracle => {
                return Ok((
                    CheckOutcome::Skipped,
                    format!("{label} comparison undecided"),
                ));
            }
            other => {
                return Ok((
                    CheckOutcome::Inconsistent,
                    format!("{label} with a one-point set changed size: {other}"),
                ));
            }
        }
    }
    Ok((
        CheckOutcome::Consistent,
        "one-point product and lift both preserve size".to_string(),
    ))
}

fn check_e4(
    a: &PointSetExpr,
    a2: &PointSetExpr,
    b: &PointSetExpr,
    b2: &PointSetExpr,
    model: &FilterModel,
    horizon: u64,
    budget: &Budget,
) -> Result<Checked, NumerosityError> {
    let p1 = compare(a, a2, model, horizon, budget)?;
    let p2 = compare(b, b2, model, horizon, budget)?;
    if p1.kind != VerdictKind::Equal || p2.kind != VerdictKind::Equal {
        return Ok((
            CheckOutcome::Skipped,
            format!("premises not established (got {}, {})", p1.kind, p2.kind),
        ));
    }
    let left = PointSetExpr::product(a.clone(), b.clone());
    let right = PointSetExpr::product(a2.clone(), b2.clone());
    let conclusion = compare(&left, &right, model, horizon, budget)?;
    match conclusion.kind {
        VerdictKind::Equal => Ok((
            CheckOutcome::Consistent,
            "products of equal-sized factors compare equal".to_string(),
        )),
        VerdictKind::DependsOnOracle => Ok((
            CheckOutcome::Skipped,
            "product comparison undecided".to_string(),
        )),
        other => Ok((
            CheckOutcome::Inconsistent,
            format!("products of equal-sized factors compare {other}"),
        )),
    }
}

/// The census of the tuple pool at stage `n`: tuples of length `1..=n`
/// with entries in `{0,…,n}`, counted exactly:
/// `Σ_{k=1}^{n} (n+1)^k = (n+1)·((n+1)^n − 1)/n` (and `0` at `n = 0`).
pub fn bounded_tuple_count(n: u64) -> BigInt {
    if n == 0 {
        return BigInt::zero();
    }
    let base = BigInt::from(n + 1);
    let power = num_traits::pow(base.clone(), n as usize);
    let numerator = &base * (power - BigInt::one());
    let (q, r) = num_integer::Integer::div_rem(&numerator, &BigInt::from(n));
    debug_assert!(r.is_zero(), "the closed form divides exactly");
    q
}

/// The counting sequence of the tuple pool. Its growth is exponential, so
/// no quasi-polynomial tail exists and none is claimed.
pub fn bounded_tuple_sequence(horizon: u64) -> CountingSequence {
    CountingSequence::from_prefix((0..=horizon).map(bounded_tuple_count).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Budget {
        Budget::standard()
    }

    fn evens() -> PointSetExpr {
        PointSetExpr::ap(0, 2)
    }

    fn odds() -> PointSetExpr {
        PointSetExpr::ap(1, 2)
    }

    fn naturals() -> PointSetExpr {
        PointSetExpr::naturals()
    }

    fn model_with(s: EventuallyPeriodic) -> FilterModel {
        FilterModel::new().commit(&s).unwrap()
    }

    fn odd_class() -> EventuallyPeriodic {
        EventuallyPeriodic::residue_class(1, 2)
    }

    fn even_class() -> EventuallyPeriodic {
        EventuallyPeriodic::residue_class(0, 2)
    }

    #[test]
    fn a_set_equals_itself_for_every_model() {
        let v = compare(&evens(), &evens(), &FilterModel::new(), 32, &b()).unwrap();
        assert_eq!(v.kind, VerdictKind::Equal);
        assert_eq!(v.scope, Scope::AllModels);
        assert!(v.certificate.is_some());
    }

    #[test]
    fn machine_line_format_is_pinned() {
        let model = model_with(odd_class());
        let v = compare(&evens(), &odds(), &model, 64, &b()).unwrap();
        assert_eq!(
            v.machine_line(),
            "verdict=Equal D=periodic mod=2 residues=1 \
             cert=periodic mod=2 residues=1 H=64"
        );
    }

    #[test]
    fn evens_versus_odds_depends_on_the_oracle() {
        // Unconstrained model: the agreement set (odd indices) is neither
        // accepted nor rejected.
        let free = FilterModel::new();
        let v = compare(&evens(), &odds(), &free, 64, &b()).unwrap();
        assert_eq!(v.kind, VerdictKind::DependsOnOracle);
        assert!(!v.equal_excluded);
        assert_eq!(v.agreement.to_string(), "periodic mod=2 residues=1");
        assert!(v.certificate.is_none());

        // Committing to the odd indices settles it as Equal…
        let v = compare(&evens(), &odds(), &model_with(odd_class()), 64, &b()).unwrap();
        assert_eq!(v.kind, VerdictKind::Equal);
        assert_eq!(v.scope, Scope::ThisModel);
        assert_eq!(
            v.certificate.unwrap().to_string(),
            "periodic mod=2 residues=1"
        );

        // …while committing to the even indices tips it to Greater.
        let v = compare(&evens(), &odds(), &model_with(even_class()), 64, &b()).unwrap();
        assert_eq!(v.kind, VerdictKind::Greater);
        assert_eq!(v.scope, Scope::ThisModel);
        assert_eq!(
            v.certificate.unwrap().to_string(),
            "periodic mod=2 residues=0"
        );
    }

    #[test]
    fn initial_segments_are_less_for_every_model() {
        let v = compare(
            &PointSetExpr::range(0, 4),
            &naturals(),
            &FilterModel::new(),
            32,
            &b(),
        )
        .unwrap();
        assert_eq!(v.kind, VerdictKind::Less);
        assert_eq!(v.scope, Scope::AllModels);
    }

    #[test]
    fn lifting_by_a_tag_preserves_size() {
        let a = PointSetExpr::ap(0, 3);
        let lifted = PointSetExpr::lift(Point::from(7), a.clone());
        let v = compare(&a, &lifted, &FilterModel::new(), 32, &b()).unwrap();
        assert_eq!(v.kind, VerdictKind::Equal);
        assert_eq!(v.scope, Scope::AllModels);
    }

    #[test]
    fn finite_sets_compare_by_cardinality_alone() {
        let f3 =
            PointSetExpr::finite(1, vec![Point::from(0), Point::from(5), Point::from(9)]).unwrap();
        let g3 =
            PointSetExpr::finite(1, vec![Point::from(2), Point::from(3), Point::from(11)]).unwrap();
        let g2 = PointSetExpr::finite(1, vec![Point::from(1), Point::from(6)]).unwrap();
        for model in [FilterModel::new(), model_with(odd_class())] {
            let v = compare(&f3, &g3, &model, 32, &b()).unwrap();
            assert_eq!(v.kind, VerdictKind::Equal);
            assert_eq!(v.scope, Scope::AllModels);
            let v = compare(&f3, &g2, &model, 32, &b()).unwrap();
            assert_eq!(v.kind, VerdictKind::Greater);
            assert_eq!(v.scope, Scope::AllModels);
        }
    }

    #[test]
    fn addition_counts_a_disjoint_union() {
        let a = Numerosity::of(evens(), 32, &b()).unwrap();
        let c = Numerosity::of(odds(), 32, &b()).unwrap();
        let sum = num_add(&a, &c, &b()).unwrap();
        assert!(sum.representative().tail().is_known());
        for n in 1..=32u64 {
            assert_eq!(
                sum.representative().value(n).unwrap(),
                &BigInt::from(n + 1),
                "n={n}"
            );
        }
        // The sum of the halves is the whole, in every model.
        let v = compare(sum.provenance(), &naturals(), &FilterModel::new(), 32, &b()).unwrap();
        assert_eq!(v.kind, VerdictKind::Equal);
        assert_eq!(v.scope, Scope::AllModels);
    }

    #[test]
    fn multiplication_counts_a_product_pointwise() {
        let a = Numerosity::of(naturals(), 24, &b()).unwrap();
        let sq = num_mul(&a, &a, &b()).unwrap();
        for n in 0..=24u64 {
            assert_eq!(
                sq.representative().value(n).unwrap(),
                &BigInt::from((n + 1) * (n + 1))
            );
        }
        let c = Numerosity::of(evens(), 24, &b()).unwrap();
        let ac = num_mul(&a, &c, &b()).unwrap();
        let ca = num_mul(&c, &a, &b()).unwrap();
        for n in 0..=24u64 {
            assert_eq!(ac.representative().value(n), ca.representative().value(n));
        }
        let v = compare(
            ac.provenance(),
            ca.provenance(),
            &FilterModel::new(),
            24,
            &b(),
        )
        .unwrap();
        assert_eq!(v.kind, VerdictKind::Equal);
        assert_eq!(v.scope, Scope::AllModels);
    }

    #[test]
    fn size_arithmetic_satisfies_the_semiring_laws_pointwise() {
        let h = 24;
        let a = Numerosity::of(evens(), h, &b()).unwrap();
        let c = Numerosity::of(odds(), h, &b()).unwrap();
        let d = Numerosity::of(PointSetExpr::range(0, 9), h, &b()).unwrap();
        let zero = Numerosity::zero(h, &b()).unwrap();
        let one = Numerosity::one(h, &b()).unwrap();

        let assoc_l = num_add(&num_add(&a, &c, &b()).unwrap(), &d, &b()).unwrap();
        let assoc_r = num_add(&a, &num_add(&c, &d, &b()).unwrap(), &b()).unwrap();
        let distrib_l = num_mul(&a, &num_add(&c, &d, &b()).unwrap(), &b()).unwrap();
        let distrib_r = num_add(
            &num_mul(&a, &c, &b()).unwrap(),
            &num_mul(&a, &d, &b()).unwrap(),
            &b(),
        )
        .unwrap();
        let with_zero = num_add(&a, &zero, &b()).unwrap();
        let with_one = num_mul(&a, &one, &b()).unwrap();
        let add_lr = num_add(&a, &c, &b()).unwrap();
        let add_rl = num_add(&c, &a, &b()).unwrap();

        for n in 0..=h {
            let at = |x: &Numerosity| x.representative().value(n).unwrap().clone();
            assert_eq!(at(&assoc_l), at(&assoc_r), "associativity at n={n}");
            assert_eq!(at(&distrib_l), at(&distrib_r), "distributivity at n={n}");
            assert_eq!(at(&with_zero), at(&a), "additive identity at n={n}");
            assert_eq!(at(&with_one), at(&a), "multiplicative identity at n={n}");
            if n >= 1 {
                // Addition commutes from n = 1 on; at n = 0 only the
                // left tag has entered the box.
                assert_eq!(at(&add_lr), at(&add_rl), "commutativity at n={n}");
            }
        }
        // And as sizes, the two sums are equal in every model.
        let v = compare(
            add_lr.provenance(),
            add_rl.provenance(),
            &FilterModel::new(),
            h,
            &b(),
        )
        .unwrap();
        assert_eq!(v.kind, VerdictKind::Equal);
        assert_eq!(v.scope, Scope::AllModels);
    }

    #[test]
    fn subset_representative_of_evens_inside_naturals() {
        let w = build_subset_representative(&evens(), &naturals(), &FilterModel::new(), 64, &b())
            .unwrap();
        // Every other natural, greedily from the bottom.
        let expect: Vec<Point> = (0..=64).step_by(2).map(Point::from).collect();
        assert_eq!(w.points, expect);
        assert_eq!(w.checkpoints.len(), 65);
        assert_eq!(w.certificate.to_string(), "periodic mod=1 residues=0");
    }

    #[test]
    fn subset_representative_of_an_initial_segment() {
        let w = build_subset_representative(
            &PointSetExpr::range(0, 4),
            &naturals(),
            &FilterModel::new(),
            32,
            &b(),
        )
        .unwrap();
        let expect: Vec<Point> = (0..=4).map(Point::from).collect();
        assert_eq!(w.points, expect);
    }

    #[test]
    fn subset_representative_requires_domination() {
        let err = build_subset_representative(&naturals(), &evens(), &FilterModel::new(), 32, &b())
            .unwrap_err();
        assert_eq!(err, NumerosityError::PreconditionNotMember);
    }

    #[test]
    fn congruence_pairs_blocks_between_checkpoints() {
        let model = model_with(odd_class());
        let c = build_u_congruence(&evens(), &odds(), &model, 32, &b()).unwrap();
        assert_eq!(
            c.checkpoints,
            (0..=32).filter(|n| n % 2 == 1).collect::<Vec<_>>()
        );
        let expect: Vec<(Point, Point)> = (0..16)
            .map(|k| (Point::from(2 * k), Point::from(2 * k + 1)))
            .collect();
        assert_eq!(c.pairs, expect);
    }

    #[test]
    fn congruence_on_identical_sets_is_the_identity() {
        let c = build_u_congruence(&evens(), &evens(), &FilterModel::new(), 16, &b()).unwrap();
        assert!(c.pairs.iter().all(|(a, b)| a == b));
        assert_eq!(c.pairs.len(), 9);
    }

    #[test]
    fn congruence_requires_an_equal_verdict() {
        let err = build_u_congruence(&naturals(), &evens(), &model_with(odd_class()), 32, &b())
            .unwrap_err();
        assert_eq!(
            err,
            NumerosityError::NotEquinumerous {
                kind: VerdictKind::Greater
            }
        );
    }

    #[test]
    fn axiom_battery_on_hand_samples() {
        let free = FilterModel::new();
        let h = 48;

        let e0 = axiom_check(
            Axiom::E0,
            &[AxiomSample::Pair(evens(), naturals())],
            &free,
            h,
            &b(),
        )
        .unwrap();
        assert!(e0.all_consistent());
        assert_eq!(e0.tallies(), (1, 0, 0));

        let e1 = axiom_check(
            Axiom::E1,
            &[AxiomSample::Pair(evens(), PointSetExpr::ap(0, 3))],
            &free,
            h,
            &b(),
        )
        .unwrap();
        assert!(e1.all_consistent());
        assert_eq!(e1.tallies(), (1, 0, 0));

        let e2 = axiom_check(
            Axiom::E2,
            &[
                AxiomSample::Pair(PointSetExpr::range(0, 4), naturals()),
                // Undecided under the unconstrained model: skipped.
                AxiomSample::Pair(evens(), odds()),
            ],
            &free,
            h,
            &b(),
        )
        .unwrap();
        assert!(e2.all_consistent());
        assert_eq!(e2.tallies(), (1, 0, 1));

        let e3 = axiom_check(
            Axiom::E3,
            &[AxiomSample::Tagged(Point::from(7), evens())],
            &free,
            h,
            &b(),
        )
        .unwrap();
        assert_eq!(e3.tallies(), (1, 0, 0));

        let e4 = axiom_check(
            Axiom::E4,
            &[AxiomSample::Quad(evens(), odds(), naturals(), naturals())],
            &model_with(odd_class()),
            h,
            &b(),
        )
        .unwrap();
        assert_eq!(e4.tallies(), (1, 0, 0));
    }

    #[test]
    fn tuple_pool_census_matches_direct_enumeration() {
        // Independent oracle: walk the tree of tuples of length <= n over
        // {0,…,n}, counting one node per tuple — no powers, no closed form.
        fn walk(n: u64, remaining: u64) -> u64 {
            if remaining == 0 {
                return 0;
            }
            let mut count = 0;
            for _entry in 0..=n {
                count += 1 + walk(n, remaining - 1);
            }
            count
        }
        for n in 0..=6u64 {
            assert_eq!(bounded_tuple_count(n), BigInt::from(walk(n, n)), "n={n}");
        }
        assert_eq!(bounded_tuple_count(1), BigInt::from(2));
        assert_eq!(bounded_tuple_count(2), BigInt::from(12));
        assert_eq!(bounded_tuple_count(3), BigInt::from(84));
        let seq = bounded_tuple_sequence(6);
        assert!(!seq.tail().is_known());
        assert_eq!(seq.value(4).unwrap(), &BigInt::from(780));
    }
}
