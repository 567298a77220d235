//! Counting-oracle models: finite, consistent stand-ins for the yes/no
//! authority that compares set sizes.
//!
//! A full such authority (a maximal consistent assignment on all index
//! sets) is not effectively presentable. A [`FilterModel`] holds the part a
//! computation can actually use: the indisputable core — every cofinite set
//! is accepted, every finite set rejected — plus finitely many *commitments*,
//! eventually periodic sets the user declares accepted. Commitments live in
//! the eventually periodic algebra because there membership, finiteness and
//! inclusion are all decidable, which keeps consistency checkable: a family
//! is consistent exactly when its intersection is infinite.
//!
//! The model never claims to be the full authority. Query answers come with
//! certificates (an accepted set contained in the queried set or in its
//! complement) and a flag telling whether the core alone decided — in which
//! case the answer holds for *every* model, not just this one.

use std::fmt;

use crate::index_set::{EventuallyPeriodic, IndexSet, TailTag};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("commitment is inconsistent: intersecting it with the existing commitments leaves only the finite set {{{}}}", fmt_members(.remainder))]
    InconsistentCommitment { remainder: Vec<u64> },
    #[error("a finite set cannot be committed: the model rejects every finite set")]
    FiniteSetCommitted,
    #[error("only eventually periodic sets can be committed")]
    NotEventuallyPeriodic,
    #[error("the set is not accepted by this model, so no accepted subset witnesses it")]
    NotAMember,
    #[error("oracle file, line {line}: {message}")]
    File { line: usize, message: String },
}

fn fmt_members(ms: &[u64]) -> String {
    ms.iter()
        .map(|m| m.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// A query answer: accepted, rejected, or not determined by this model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Member,
    NonMember,
    /// Neither the set nor its complement follows from the commitments;
    /// different extensions of this model answer differently.
    Undecided,
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Membership::Member => write!(f, "member"),
            Membership::NonMember => write!(f, "non-member"),
            Membership::Undecided => write!(f, "undecided"),
        }
    }
}

/// The full answer to a membership query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryResult {
    pub membership: Membership,
    /// For `Member`: an accepted infinite subset of the queried set.
    /// For `NonMember`: an accepted infinite subset of its complement.
    /// `None` when undecided.
    pub certificate: Option<EventuallyPeriodic>,
    /// `true` when the cofinite/finite core alone decides, i.e. the answer
    /// holds for every model, with or without commitments.
    pub frechet_only: bool,
}

/// The Fréchet core plus finitely many eventually periodic commitments.
///
/// Values are persistent: [`FilterModel::commit`] returns a new model and
/// leaves the receiver untouched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterModel {
    name: String,
    commitments: Vec<EventuallyPeriodic>,
    /// Cached intersection of all commitments (the whole of ℕ when there
    /// are none). Always infinite — that is the consistency invariant.
    intersection: EventuallyPeriodic,
    log: Vec<String>,
}

impl Default for FilterModel {
    fn default() -> Self {
        Self::new()
    }
}

impl FilterModel {
    /// The empty model: cofinite sets accepted, finite sets rejected,
    /// everything else undecided.
    pub fn new() -> Self {
        FilterModel {
            name: String::new(),
            commitments: Vec::new(),
            intersection: EventuallyPeriodic::full(),
            log: Vec::new(),
        }
    }

    pub fn named(name: impl Into<String>) -> Self {
        FilterModel {
            name: name.into(),
            ..Self::new()
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn commitments(&self) -> &[EventuallyPeriodic] {
        &self.commitments
    }

    /// The intersection of all commitments; every accepted set contains it
    /// up to a finite difference.
    pub fn intersection(&self) -> &EventuallyPeriodic {
        &self.intersection
    }

    /// The commit history, one line per successful commit.
    pub fn log(&self) -> &[String] {
        &self.log
    }

    /// Add a commitment, provided consistency is preserved: the
    /// intersection of all commitments must stay infinite.
    pub fn commit(&self, s: &EventuallyPeriodic) -> Result<FilterModel, OracleError> {
        if s.is_finite() {
            return Err(OracleError::FiniteSetCommitted);
        }
        let intersection = self.intersection.intersect(s);
        if intersection.is_finite() {
            return Err(OracleError::InconsistentCommitment {
                remainder: intersection.finite_members().expect("finite set"),
            });
        }
        let mut next = self.clone();
        next.commitments.push(s.clone());
        next.intersection = intersection;
        next.log.push(format!("commit {s}"));
        Ok(next)
    }

    /// [`FilterModel::commit`] for general index sets; only eventually
    /// periodic descriptors are commitable.
    pub fn commit_index_set(&self, s: &IndexSet) -> Result<FilterModel, OracleError> {
        match s {
            IndexSet::Periodic(p) => self.commit(p),
            IndexSet::Explicit(_) => Err(OracleError::NotEventuallyPeriodic),
        }
    }

    /// Decide membership of an eventually periodic set.
    pub fn query_periodic(&self, s: &EventuallyPeriodic) -> QueryResult {
        let outside = self.intersection.minus(s);
        if outside.is_finite() {
            // Every accepted set contains intersection ∖ (finite), and
            // s ⊇ intersection ∖ outside.
            return QueryResult {
                membership: Membership::Member,
                certificate: Some(self.intersection.intersect(s)),
                frechet_only: s.is_cofinite(),
            };
        }
        let inside = self.intersection.intersect(s);
        if inside.is_finite() {
            return QueryResult {
                membership: Membership::NonMember,
                certificate: Some(outside),
                frechet_only: s.is_finite(),
            };
        }
        QueryResult {
            membership: Membership::Undecided,
            certificate: None,
            frechet_only: false,
        }
    }

    /// Decide membership of any index set. Explicit descriptors are decided
    /// through their tail tag when it is known; with an unknown tail nothing
    /// about the set beyond its horizon is claimed, so the answer is
    /// [`Membership::Undecided`].
    pub fn query(&self, s: &IndexSet) -> QueryResult {
        match s {
            IndexSet::Periodic(p) => self.query_periodic(p),
            IndexSet::Explicit(e) => match e.tail() {
                TailTag::Finite => {
                    self.query_periodic(&EventuallyPeriodic::finite(e.members_up_to_horizon()))
                }
                TailTag::Cofinite => {
                    let absent: Vec<u64> = (0..=e.horizon())
                        .filter(|&n| e.contains(n) == Some(false))
                        .collect();
                    self.query_periodic(&EventuallyPeriodic::full().without(absent))
                }
                TailTag::Unknown => QueryResult {
                    membership: Membership::Undecided,
                    certificate: None,
                    frechet_only: false,
                },
            },
        }
    }

    /// For an accepted set, an accepted subset of it: the intersection of
    /// the commitments minus the finitely many indices falling outside.
    pub fn decided_superset_witness(
        &self,
        s: &IndexSet,
    ) -> Result<EventuallyPeriodic, OracleError> {
        let answer = self.query(s);
        match answer.membership {
            Membership::Member => Ok(answer.certificate.expect("members carry certificates")),
            _ => Err(OracleError::NotAMember),
        }
    }

    /// Serialize as the line-oriented oracle file format: one
    /// `commit <descriptor>` line per commitment, `#` comments.
    pub fn save_to_string(&self) -> String {
        let mut out = String::new();
        if !self.name.is_empty() {
            out.push_str(&format!("# {}\n", self.name));
        }
        for c in &self.commitments {
            out.push_str(&format!("commit {c}\n"));
        }
        out
    }

    /// Replay an oracle file: blank lines and `#` comments are skipped,
    /// every other line must read `commit periodic mod=<m> residues=<r,…>
    /// [add=<n,…>] [remove=<n,…>]`. Fails fast with the offending line
    /// number, including when a replayed commit is inconsistent.
    pub fn load_from_str(text: &str) -> Result<FilterModel, OracleError> {
        let mut model = FilterModel::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let Some(descriptor) = trimmed.strip_prefix("commit ") else {
                return Err(OracleError::File {
                    line,
                    message: format!("expected `commit <descriptor>`, found `{trimmed}`"),
                });
            };
            let set = EventuallyPeriodic::parse(descriptor)
                .map_err(|message| OracleError::File { line, message })?;
            model = model.commit(&set).map_err(|e| OracleError::File {
                line,
                message: e.to_string(),
            })?;
        }
        Ok(model)
    }
}
