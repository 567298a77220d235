//! Index sets of naturals: explicit horizon-bounded tables and eventually
//! periodic sets.
//!
//! Eventually periodic sets (a residue pattern modulo `m`, adjusted by
//! finitely many exceptions) are closed under complement, union and
//! intersection, and membership, finiteness, cofiniteness and inclusion are
//! all decidable — which is what makes the oracle's answers exact rather
//! than sampled. Explicit sets record a bitmask up to a horizon plus a tag
//! saying what happens beyond it, which may be unknown.

use std::collections::BTreeSet;
use std::fmt;

/// What an explicitly tabulated set does beyond its horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailTag {
    /// No members beyond the horizon.
    Finite,
    /// Every index beyond the horizon is a member.
    Cofinite,
    /// Nothing is claimed beyond the horizon.
    Unknown,
}

impl fmt::Display for TailTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TailTag::Finite => write!(f, "finite"),
            TailTag::Cofinite => write!(f, "cofinite"),
            TailTag::Unknown => write!(f, "unknown"),
        }
    }
}

/// A set tabulated on `0..=horizon`, with a [`TailTag`] beyond.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitSet {
    bits: Vec<bool>,
    tail: TailTag,
}

impl ExplicitSet {
    /// Build from the membership table on `0..=horizon`
    /// (`bits.len() == horizon + 1`; must be nonempty).
    pub fn new(bits: Vec<bool>, tail: TailTag) -> Self {
        assert!(!bits.is_empty(), "explicit set needs a horizon");
        ExplicitSet { bits, tail }
    }

    pub fn from_members(members: &[u64], horizon: u64, tail: TailTag) -> Self {
        let mut bits = vec![false; horizon as usize + 1];
        for &m in members {
            if m <= horizon {
                bits[m as usize] = true;
            }
        }
        ExplicitSet { bits, tail }
    }

    pub fn horizon(&self) -> u64 {
        self.bits.len() as u64 - 1
    }

    pub fn tail(&self) -> TailTag {
        self.tail
    }

    /// Membership, `None` when `n` lies beyond the horizon of an
    /// unknown-tailed set.
    pub fn contains(&self, n: u64) -> Option<bool> {
        if let Some(&b) = self.bits.get(n as usize) {
            return Some(b);
        }
        match self.tail {
            TailTag::Finite => Some(false),
            TailTag::Cofinite => Some(true),
            TailTag::Unknown => None,
        }
    }

    pub fn members_up_to_horizon(&self) -> Vec<u64> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i as u64))
            .collect()
    }
}

impl fmt::Display for ExplicitSet {
    /// Renders as `explicit members=0,2,4 tail=unknown`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "explicit members=")?;
        let mut first = true;
        for m in self.members_up_to_horizon() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
            first = false;
        }
        write!(f, " tail={}", self.tail)
    }
}

/// An eventually periodic subset of the naturals: a union of residue
/// classes modulo `modulus`, with finitely many indices added and removed.
///
/// The representation is kept normalized: `added` is disjoint from the
/// periodic part, `removed` is contained in it, and the modulus is minimal
/// for the periodic part. Two equal sets therefore compare equal
/// structurally and print identically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventuallyPeriodic {
    modulus: u64,
    residues: BTreeSet<u64>,
    added: BTreeSet<u64>,
    removed: BTreeSet<u64>,
}

impl EventuallyPeriodic {
    pub fn new(
        modulus: u64,
        residues: impl IntoIterator<Item = u64>,
        added: impl IntoIterator<Item = u64>,
        removed: impl IntoIterator<Item = u64>,
    ) -> Self {
        assert!(modulus >= 1, "modulus must be >= 1");
        let mut set = EventuallyPeriodic {
            modulus,
            residues: residues.into_iter().map(|r| r % modulus).collect(),
            added: added.into_iter().collect(),
            removed: removed.into_iter().collect(),
        };
        set.normalize();
        set
    }

    /// The whole of the naturals.
    pub fn full() -> Self {
        Self::new(1, [0], [], [])
    }

    /// The empty set.
    pub fn empty() -> Self {
        Self::new(1, [], [], [])
    }

    /// The finite set holding exactly `members`.
    pub fn finite(members: impl IntoIterator<Item = u64>) -> Self {
        Self::new(1, [], members, [])
    }

    /// The single residue class `r (mod m)`.
    pub fn residue_class(r: u64, m: u64) -> Self {
        Self::new(m, [r], [], [])
    }

    fn periodic_part_contains(&self, n: u64) -> bool {
        self.residues.contains(&(n % self.modulus))
    }

    pub fn contains(&self, n: u64) -> bool {
        if self.added.contains(&n) {
            return true;
        }
        if self.removed.contains(&n) {
            return false;
        }
        self.periodic_part_contains(n)
    }

    fn normalize(&mut self) {
        // Exceptions agreeing with the periodic part are redundant.
        let residues = self.residues.clone();
        let modulus = self.modulus;
        self.added.retain(|&n| !residues.contains(&(n % modulus)));
        self.removed.retain(|&n| residues.contains(&(n % modulus)));
        // Reduce the modulus when the residue pattern is a union of full
        // classes modulo a proper divisor.
        for d in 1..self.modulus {
            if !self.modulus.is_multiple_of(d) {
                continue;
            }
            let reduced: BTreeSet<u64> = self.residues.iter().map(|r| r % d).collect();
            let lifts_back: BTreeSet<u64> = (0..self.modulus)
                .filter(|r| reduced.contains(&(r % d)))
                .collect();
            if lifts_back == self.residues {
                self.modulus = d;
                self.residues = reduced;
                break;
            }
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residues(&self) -> impl Iterator<Item = u64> + '_ {
        self.residues.iter().copied()
    }

    pub fn added(&self) -> impl Iterator<Item = u64> + '_ {
        self.added.iter().copied()
    }

    pub fn removed(&self) -> impl Iterator<Item = u64> + '_ {
        self.removed.iter().copied()
    }

    /// A finite set has an empty periodic part.
    pub fn is_finite(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn is_cofinite(&self) -> bool {
        self.complement().is_finite()
    }

    pub fn is_empty(&self) -> bool {
        self.is_finite() && self.added.is_empty()
    }

    /// Finite sets are the only eventually periodic sets that are not
    /// infinite.
    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    /// The members of a finite set, `None` when infinite.
    pub fn finite_members(&self) -> Option<Vec<u64>> {
        self.is_finite()
            .then(|| self.added.iter().copied().collect())
    }

    pub fn complement(&self) -> EventuallyPeriodic {
        EventuallyPeriodic::new(
            self.modulus,
            (0..self.modulus).filter(|r| !self.residues.contains(r)),
            self.removed.iter().copied(),
            self.added.iter().copied(),
        )
    }

    fn pointwise(
        &self,
        other: &EventuallyPeriodic,
        op: impl Fn(bool, bool) -> bool,
    ) -> EventuallyPeriodic {
        let modulus = num_integer::lcm(self.modulus, other.modulus);
        let residues: BTreeSet<u64> = (0..modulus)
            .filter(|&r| {
                op(
                    self.residues.contains(&(r % self.modulus)),
                    other.residues.contains(&(r % other.modulus)),
                )
            })
            .collect();
        let mut added = BTreeSet::new();
        let mut removed = BTreeSet::new();
        for &e in self
            .added
            .iter()
            .chain(&self.removed)
            .chain(&other.added)
            .chain(&other.removed)
        {
            let actual = op(self.contains(e), other.contains(e));
            let periodic = residues.contains(&(e % modulus));
            if actual && !periodic {
                added.insert(e);
            } else if !actual && periodic {
                removed.insert(e);
            }
        }
        EventuallyPeriodic::new(modulus, residues, added, removed)
    }

    pub fn intersect(&self, other: &EventuallyPeriodic) -> EventuallyPeriodic {
        self.pointwise(other, |a, b| a && b)
    }

    pub fn union(&self, other: &EventuallyPeriodic) -> EventuallyPeriodic {
        self.pointwise(other, |a, b| a || b)
    }

    pub fn minus(&self, other: &EventuallyPeriodic) -> EventuallyPeriodic {
        self.pointwise(other, |a, b| a && !b)
    }

    pub fn is_subset_of(&self, other: &EventuallyPeriodic) -> bool {
        self.minus(other).is_empty()
    }

    /// Remove the listed indices (a finite adjustment).
    pub fn without(&self, indices: impl IntoIterator<Item = u64>) -> EventuallyPeriodic {
        self.minus(&EventuallyPeriodic::finite(indices))
    }

    pub fn members_up_to(&self, horizon: u64) -> Vec<u64> {
        (0..=horizon).filter(|&n| self.contains(n)).collect()
    }

    /// Least member, `None` for the empty set.
    pub fn min_member(&self) -> Option<u64> {
        if self.is_empty() {
            return None;
        }
        let exception_bound = self
            .added
            .iter()
            .chain(&self.removed)
            .max()
            .copied()
            .unwrap_or(0);
        (0..=exception_bound + self.modulus).find(|&n| self.contains(n))
    }

    /// Iterate the members in increasing order (endless for infinite sets).
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..).filter(move |&n| self.contains(n))
    }

    pub fn to_explicit(&self, horizon: u64) -> ExplicitSet {
        let bits = (0..=horizon).map(|n| self.contains(n)).collect();
        let tail = if self.is_finite() {
            // Accurate only when all exceptions fall inside the horizon.
            if self.added.iter().all(|&a| a <= horizon) {
                TailTag::Finite
            } else {
                TailTag::Unknown
            }
        } else if self.is_cofinite() {
            if self.complement().added.iter().all(|&a| a <= horizon) {
                TailTag::Cofinite
            } else {
                TailTag::Unknown
            }
        } else {
            TailTag::Unknown
        };
        ExplicitSet::new(bits, tail)
    }

    /// Parse the textual descriptor produced by `Display`:
    /// `periodic mod=<m> residues=<r,...> [add=<n,...>] [remove=<n,...>]`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut words = text.split_whitespace();
        match words.next() {
            Some("periodic") => {}
            other => {
                return Err(format!(
                    "expected descriptor to start with `periodic`, found {:?}",
                    other.unwrap_or("")
                ))
            }
        }
        let mut modulus: Option<u64> = None;
        let mut residues = Vec::new();
        let mut added = Vec::new();
        let mut removed = Vec::new();
        let mut seen_residues = false;
        for word in words {
            let (key, value) = word
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, found `{word}`"))?;
            let parse_list = |v: &str| -> Result<Vec<u64>, String> {
                if v.is_empty() {
                    return Ok(Vec::new());
                }
                v.split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<u64>()
                            .map_err(|_| format!("invalid number `{t}` in `{word}`"))
                    })
                    .collect()
            };
            match key {
                "mod" => {
                    let m = value
                        .parse::<u64>()
                        .map_err(|_| format!("invalid modulus `{value}`"))?;
                    if m == 0 {
                        return Err("modulus must be >= 1".into());
                    }
                    modulus = Some(m);
                }
                "residues" => {
                    residues = parse_list(value)?;
                    seen_residues = true;
                }
                "add" => added = parse_list(value)?,
                "remove" => removed = parse_list(value)?,
                _ => return Err(format!("unknown key `{key}`")),
            }
        }
        let modulus = modulus.ok_or("missing mod=<m>")?;
        if !seen_residues {
            return Err("missing residues=<list>".into());
        }
        if let Some(bad) = residues.iter().find(|&&r| r >= modulus) {
            return Err(format!("residue {bad} is not below modulus {modulus}"));
        }
        Ok(EventuallyPeriodic::new(modulus, residues, added, removed))
    }
}

impl fmt::Display for EventuallyPeriodic {
    /// Renders as `periodic mod=2 residues=1 add=0 remove=9` (add/remove
    /// omitted when empty). `parse` reads this format back.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "periodic mod={} residues=", self.modulus)?;
        let join = |f: &mut fmt::Formatter<'_>, ns: &BTreeSet<u64>| -> fmt::Result {
            for (i, n) in ns.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{n}")?;
            }
            Ok(())
        };
        join(f, &self.residues)?;
        if !self.added.is_empty() {
            write!(f, " add=")?;
            join(f, &self.added)?;
        }
        if !self.removed.is_empty() {
            write!(f, " remove=")?;
            join(f, &self.removed)?;
        }
        Ok(())
    }
}

/// Either representation of an index set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexSet {
    Explicit(ExplicitSet),
    Periodic(EventuallyPeriodic),
}

impl IndexSet {
    /// Membership, `None` where the set is not determined.
    pub fn contains(&self, n: u64) -> Option<bool> {
        match self {
            IndexSet::Explicit(e) => e.contains(n),
            IndexSet::Periodic(p) => Some(p.contains(n)),
        }
    }

    /// Members up to `horizon` (exact: both representations are total on
    /// any initial segment up to their own horizon).
    pub fn members_up_to(&self, horizon: u64) -> Vec<u64> {
        match self {
            IndexSet::Explicit(e) => e
                .members_up_to_horizon()
                .into_iter()
                .filter(|&m| m <= horizon)
                .chain(
                    // Beyond the table a cofinite tail keeps contributing.
                    (e.horizon() + 1..=horizon).filter(|_| e.tail() == TailTag::Cofinite),
                )
                .collect(),
            IndexSet::Periodic(p) => p.members_up_to(horizon),
        }
    }

    pub fn as_periodic(&self) -> Option<&EventuallyPeriodic> {
        match self {
            IndexSet::Periodic(p) => Some(p),
            IndexSet::Explicit(_) => None,
        }
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexSet::Explicit(e) => write!(f, "{e}"),
            IndexSet::Periodic(p) => write!(f, "{p}"),
        }
    }
}

impl From<EventuallyPeriodic> for IndexSet {
    fn from(p: EventuallyPeriodic) -> Self {
        IndexSet::Periodic(p)
    }
}

impl From<ExplicitSet> for IndexSet {
    fn from(e: ExplicitSet) -> Self {
        IndexSet::Explicit(e)
    }
}
