//! The finite combinatorial kernel behind selectivity analysis: a base
//! family of "deep" finite sets, the pair-coloring (Ramsey) operator on
//! families, the induced norm, and interval-growth probes.
//!
//! The base family holds the nonempty finite `A ⊆ ℕ` with
//! `min(A) + 2 < |A|`. Applying the coloring operator to a family `X`
//! yields the sets `A` such that *every* 2-coloring of the pairs of `A`
//! admits a monochromatic subset lying in `X`. Membership in operator
//! iterates is decided by exhaustive search over colorings (with the
//! color-swap symmetry factored out), optionally pruned; searches are
//! exact, budgeted, and counterexample colorings are re-verified before
//! they are returned.

use std::collections::HashMap;
use std::fmt;

use crate::budget::{Budget, BudgetExceeded};
use crate::index_set::{ExplicitSet, IndexSet, TailTag};
use crate::oracle::{FilterModel, QueryResult};
use crate::pointset::{PointSetError, PointSetExpr};
use crate::seq::Tail;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RamseyError {
    #[error("the empty set has no minimum to test")]
    EmptySet,
    #[error("interval {index} begins at {got}, expected {expected} (partition must cover an initial segment)")]
    BadPartition {
        index: usize,
        got: u64,
        expected: u64,
    },
    #[error("malformed partition line {line}: expected `interval <lo> <hi>`")]
    BadPartitionLine { line: usize },
    #[error("the largeness probe needs at least one interval")]
    EmptyPartition,
    #[error("interval growth needs a one-dimensional set, got dimension {dim}")]
    NotDimensionOne { dim: usize },
    #[error(
        "no initial segment of the enumerated set lies in the family ({tested} prefixes tested)"
    )]
    SegmentExhausted { tested: usize },
    #[error(transparent)]
    PointSet(#[from] PointSetError),
    #[error(transparent)]
    WorkBudgetExceeded(#[from] BudgetExceeded),
}

/// A finite set of naturals; elements are kept sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteNatSet {
    elements: Vec<u64>,
}

impl FiniteNatSet {
    pub fn new(mut elements: Vec<u64>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        FiniteNatSet { elements }
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn min(&self) -> Option<u64> {
        self.elements.first().copied()
    }
}

impl FromIterator<u64> for FiniteNatSet {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        FiniteNatSet::new(iter.into_iter().collect())
    }
}

impl fmt::Display for FiniteNatSet {
    /// Renders as `{0,1,2,3}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// A family of finite sets of naturals, closed upward under inclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// Nonempty finite `A` with `min(A) + 2 < |A|`.
    Base,
    /// `k`-fold application of the pair-coloring operator to `base`.
    RhoPower { base: Box<Family>, k: u64 },
}

impl Family {
    pub fn base() -> Family {
        Family::Base
    }

    /// The family obtained by one more application of the coloring
    /// operator.
    pub fn rho(self) -> Family {
        match self {
            Family::RhoPower { base, k } => Family::RhoPower { base, k: k + 1 },
            other => Family::RhoPower {
                base: Box::new(other),
                k: 1,
            },
        }
    }

    /// Total number of coloring-operator applications above the base.
    pub fn depth(&self) -> u64 {
        match self {
            Family::Base => 0,
            Family::RhoPower { base, k } => base.depth() + k,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.depth() {
            0 => write!(f, "base"),
            k => write!(f, "rho^{k}(base)"),
        }
    }
}

/// How operator-membership searches walk the coloring space. Both give
/// identical answers; `Pruned` abandons a branch as soon as a fully
/// colored monochromatic family member appears in it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchStrategy {
    Naive,
    #[default]
    Pruned,
}

/// Membership in the base family: `min(A) + 2 < |A|`.
pub fn in_base(a: &FiniteNatSet) -> Result<bool, RamseyError> {
    let min = a.min().ok_or(RamseyError::EmptySet)?;
    Ok(min + 2 < a.len() as u64)
}

/// A 2-coloring of the pairs of a finite vertex set. Edges are the pairs
/// `(v_i, v_j)`, `i < j`, in lexicographic order of index pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    pub vertices: Vec<u64>,
    /// One color per edge, in edge order.
    pub colors: Vec<bool>,
}

impl Coloring {
    /// The color of the edge between the `i`-th and `j`-th vertex.
    pub fn edge_color(&self, i: usize, j: usize) -> bool {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let m = self.vertices.len();
        // Row r contributes m-1-r edges; within row i the edge to j is
        // entry j-i-1.
        let row_start = i * (m - 1) - i * (i.saturating_sub(1)) / 2;
        self.colors[row_start + (j - i - 1)]
    }
}

impl fmt::Display for Coloring {
    /// One `edge <u> <v> <color>` line per pair.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut e = 0;
        for i in 0..self.vertices.len() {
            for j in (i + 1)..self.vertices.len() {
                writeln!(
                    f,
                    "edge {} {} {}",
                    self.vertices[i],
                    self.vertices[j],
                    u8::from(self.colors[e])
                )?;
                e += 1;
            }
        }
        Ok(())
    }
}

/// The outcome of a coloring-operator membership test.
#[derive(Debug, Clone)]
pub struct RhoAnswer {
    pub member: bool,
    /// On failure, a coloring admitting no monochromatic family member;
    /// re-verified before being returned.
    pub counterexample: Option<Coloring>,
}

/// Is `A` in the image of `family` under the coloring operator? That is:
/// does every 2-coloring of the pairs of `A` admit a monochromatic
/// `B ⊆ A` with `B ∈ family`?
pub fn in_rho(
    family: &Family,
    a: &FiniteNatSet,
    budget: &Budget,
    strategy: SearchStrategy,
) -> Result<RhoAnswer, RamseyError> {
    if a.is_empty() {
        return Err(RamseyError::EmptySet);
    }
    let mut search = Search {
        budget,
        strategy,
        memo: HashMap::new(),
    };
    search.rho_search(a.elements(), family.depth() + 1)
}

/// Membership of `A` in a family (base test at depth 0, coloring searches
/// above).
pub fn in_family(
    family: &Family,
    a: &FiniteNatSet,
    budget: &Budget,
    strategy: SearchStrategy,
) -> Result<bool, RamseyError> {
    if a.is_empty() {
        return Err(RamseyError::EmptySet);
    }
    let mut search = Search {
        budget,
        strategy,
        memo: HashMap::new(),
    };
    search.member(a.elements(), family.depth())
}

/// The norm of a finite set: the least `n` such that `A` is *not* in the
/// `n`-th operator iterate of the base family.
///
/// The iterates shrink (`ρX ⊆ X` whenever `X` is the base or below it), so
/// the first failure along the chain is the answer. Any member of the
/// `n`-th iterate has at least `3 + n` elements, which bounds the search.
pub fn nu(a: &FiniteNatSet, budget: &Budget, strategy: SearchStrategy) -> Result<u64, RamseyError> {
    if a.len() < 3 {
        // The base family needs more than min+2 >= 2 elements.
        return Ok(0);
    }
    let mut search = Search {
        budget,
        strategy,
        memo: HashMap::new(),
    };
    let mut n = 0;
    loop {
        if !search.member(a.elements(), n)? {
            return Ok(n);
        }
        n += 1;
    }
}

struct Search<'a> {
    budget: &'a Budget,
    strategy: SearchStrategy,
    /// Memoized family membership by (depth, elements).
    memo: HashMap<(u64, Vec<u64>), bool>,
}

impl Search<'_> {
    fn member(&mut self, elems: &[u64], depth: u64) -> Result<bool, RamseyError> {
        if depth == 0 {
            // Base family: min + 2 < size. Callers guarantee nonemptiness.
            return Ok(elems[0] + 2 < elems.len() as u64);
        }
        // Fast reject: members of the n-th iterate have >= 3 + n elements.
        if (elems.len() as u64) < 3 + depth {
            return Ok(false);
        }
        let key = (depth, elems.to_vec());
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let answer = self.rho_search(elems, depth)?.member;
        self.memo.insert(key, answer);
        Ok(answer)
    }

    /// Decide membership in the `depth`-th iterate (`depth >= 1`) by
    /// walking every 2-coloring of the pairs of `elems`.
    fn rho_search(&mut self, elems: &[u64], depth: u64) -> Result<RhoAnswer, RamseyError> {
        let m = elems.len();
        let edges: Vec<(usize, usize)> = (0..m)
            .flat_map(|i| ((i + 1)..m).map(move |j| (i, j)))
            .collect();
        let e = edges.len();

        // The color-swap symmetry pins the first edge's color, halving the
        // space. The whole space must fit the budget before starting.
        let required = match e {
            0 => 1u64,
            _ if e > 63 => u64::MAX,
            _ => 1u64 << (e - 1),
        };
        if required > self.budget.limit().saturating_sub(self.budget.spent()) {
            return Err(RamseyError::WorkBudgetExceeded(BudgetExceeded {
                spent: self.budget.spent().saturating_add(required),
                limit: self.budget.limit(),
            }));
        }

        // Candidate monochromatic witnesses: subsets in the underlying
        // family, held as edge bitmasks. Family members need >= 3 + (depth-1)
        // elements, so smaller subsets are never candidates.
        let min_size = 3 + (depth - 1) as usize;
        let mut candidates: Vec<u64> = Vec::new();
        self.budget.charge(1u64 << m)?;
        for subset in 1u32..(1 << m) {
            if (subset.count_ones() as usize) < min_size {
                continue;
            }
            let members: Vec<u64> = (0..m)
                .filter(|&i| subset & (1 << i) != 0)
                .map(|i| elems[i])
                .collect();
            if self.member(&members, depth - 1)? {
                let mut mask = 0u64;
                for (idx, &(i, j)) in edges.iter().enumerate() {
                    if subset & (1 << i) != 0 && subset & (1 << j) != 0 {
                        mask |= 1 << idx;
                    }
                }
                candidates.push(mask);
            }
        }

        let counterexample = match self.strategy {
            SearchStrategy::Naive => self.naive_walk(e, &candidates)?,
            SearchStrategy::Pruned => self.pruned_walk(e, &candidates)?,
        };
        match counterexample {
            Some(coloring) => {
                // Re-verify before handing the witness out.
                assert!(
                    !has_mono_candidate(coloring, &candidates),
                    "counterexample coloring must not contain a monochromatic member"
                );
                Ok(RhoAnswer {
                    member: false,
                    counterexample: Some(Coloring {
                        vertices: elems.to_vec(),
                        colors: (0..e).map(|i| coloring & (1 << i) != 0).collect(),
                    }),
                })
            }
            None => Ok(RhoAnswer {
                member: true,
                counterexample: None,
            }),
        }
    }

    /// Enumerate every coloring (first edge fixed to color 0); return one
    /// with no monochromatic candidate, if any.
    fn naive_walk(&mut self, e: usize, candidates: &[u64]) -> Result<Option<u64>, RamseyError> {
        let total = if e == 0 { 1 } else { 1u64 << (e - 1) };
        for half in 0..total {
            self.budget.charge(1)?;
            let coloring = half << 1;
            if !has_mono_candidate(coloring, candidates) {
                return Ok(Some(coloring));
            }
        }
        Ok(None)
    }

    /// Depth-first edge-by-edge extension; a branch dies as soon as some
    /// candidate is fully colored monochromatically, since every
    /// completion of the branch would contain it. Answers match the naive
    /// walk exactly.
    fn pruned_walk(&mut self, e: usize, candidates: &[u64]) -> Result<Option<u64>, RamseyError> {
        if e == 0 {
            self.budget.charge(1)?;
            return Ok(if candidates.is_empty() { Some(0) } else { None });
        }
        // Candidates grouped by the level at which their last edge gets a
        // color: at that point monochromaticity is decided for good.
        let mut completing: Vec<Vec<u64>> = vec![Vec::new(); e + 1];
        for &c in candidates {
            let last = 63 - c.leading_zeros() as usize;
            completing[last + 1].push(c);
        }
        self.dfs(1, 0, e, &completing)
    }

    fn dfs(
        &mut self,
        assigned: usize,
        coloring: u64,
        e: usize,
        completing: &[Vec<u64>],
    ) -> Result<Option<u64>, RamseyError> {
        self.budget.charge(1)?;
        for &c in &completing[assigned] {
            let within = coloring & c;
            if within == 0 || within == c {
                return Ok(None); // every completion contains this witness
            }
        }
        if assigned == e {
            return Ok(Some(coloring));
        }
        if let Some(found) = self.dfs(assigned + 1, coloring, e, completing)? {
            return Ok(Some(found));
        }
        self.dfs(assigned + 1, coloring | (1 << assigned), e, completing)
    }
}

fn has_mono_candidate(coloring: u64, candidates: &[u64]) -> bool {
    candidates.iter().any(|&c| {
        let within = coloring & c;
        within == 0 || within == c
    })
}

/// Least `n` such that the first `n` enumerated elements of `s` form a set
/// in the family.
pub fn initial_segment_in(
    family: &Family,
    s: &IndexSet,
    budget: &Budget,
    strategy: SearchStrategy,
) -> Result<u64, RamseyError> {
    let elements: Vec<u64> = match s {
        IndexSet::Periodic(p) => {
            // Members of an infinite eventually periodic set can be drawn
            // for as long as needed; finite ones are used whole.
            match p.finite_members() {
                Some(m) => m,
                None => p.iter().take(4096).collect(),
            }
        }
        IndexSet::Explicit(e) => e.members_up_to_horizon(),
    };
    let mut prefix = Vec::new();
    for (used, &x) in elements.iter().enumerate() {
        budget.charge(1)?;
        prefix.push(x);
        let set = FiniteNatSet::new(prefix.clone());
        if !set.is_empty() && in_family(family, &set, budget, strategy)? {
            return Ok(used as u64 + 1);
        }
    }
    Err(RamseyError::SegmentExhausted {
        tested: elements.len(),
    })
}

/// A finite interval `[lo, hi]` of naturals (inclusive).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interval {
    pub lo: u64,
    pub hi: u64,
}

impl Interval {
    /// Parse a partition file: one `interval <lo> <hi>` per line, `#`
    /// comments and blank lines ignored.
    pub fn parse_lines(text: &str) -> Result<Vec<Interval>, RamseyError> {
        let mut out = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = RamseyError::BadPartitionLine { line: idx + 1 };
            if fields.len() != 3 || fields[0] != "interval" {
                return Err(bad);
            }
            let lo = fields[1].parse().map_err(|_| bad.clone())?;
            let hi = fields[2].parse().map_err(|_| bad)?;
            out.push(Interval { lo, hi });
        }
        Ok(out)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

fn validate_partition(partition: &[Interval]) -> Result<(), RamseyError> {
    let mut expected = 0;
    for (index, iv) in partition.iter().enumerate() {
        if iv.lo != expected || iv.hi < iv.lo {
            return Err(RamseyError::BadPartition {
                index,
                got: iv.lo,
                expected,
            });
        }
        expected = iv.hi + 1;
    }
    Ok(())
}

/// The interval growth sequence: entry `n` is the norm of `X ∩ I_n`.
/// Entries whose norm computation exhausts the budget are `None`; other
/// errors abort.
pub fn interval_growth(
    x: &PointSetExpr,
    partition: &[Interval],
    budget: &Budget,
    strategy: SearchStrategy,
) -> Result<Vec<Option<u64>>, RamseyError> {
    let dim = x.dimension()?;
    if dim != 1 {
        return Err(RamseyError::NotDimensionOne { dim });
    }
    validate_partition(partition)?;
    let mut out = Vec::with_capacity(partition.len());
    for iv in partition {
        let entry = (|| -> Result<u64, RamseyError> {
            let members: FiniteNatSet = x
                .truncate(iv.hi, budget)?
                .into_iter()
                .map(|p| p.coords()[0])
                .filter(|&c| c >= iv.lo)
                .collect();
            nu(&members, budget, strategy)
        })();
        match entry {
            Ok(v) => out.push(Some(v)),
            Err(RamseyError::WorkBudgetExceeded(_))
            | Err(RamseyError::PointSet(PointSetError::WorkBudgetExceeded(_))) => {
                out.push(None);
            }
            Err(other) => return Err(other),
        }
    }
    Ok(out)
}

/// One interval's entry in a largeness report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LargenessEntry {
    pub n: u64,
    /// The computed growth value, `None` when the budget ran out.
    pub growth: Option<u64>,
    /// Whether `growth > √n + k`, unknown where growth is.
    pub passes: Option<bool>,
}

/// The horizon-bounded largeness probe for one slack value `k`.
#[derive(Debug, Clone)]
pub struct LargenessReport {
    pub k: u64,
    pub entries: Vec<LargenessEntry>,
    /// `{n : growth(n) > √n + k}` over the computed entries. The tail is
    /// `Finite` only when the set under test is provably finite and the
    /// partition reaches past it (growth is then 0 forever); otherwise
    /// nothing is claimed beyond the horizon.
    pub passing: IndexSet,
    /// The model's answer on the passing set.
    pub query: QueryResult,
    /// The answer the model would give if the passing pattern continued
    /// cofinitely; reported only when every computed entry passes.
    pub query_if_cofinite: Option<QueryResult>,
}

/// Probe `growth(n) > √n + k` over a partition, up to `horizon` entries,
/// and ask the model about the passing index set. Everything is labeled by
/// what was actually computed; the tail beyond the entries is claimed only
/// when provable.
pub fn is_large_at_horizon(
    x: &PointSetExpr,
    partition: &[Interval],
    model: &FilterModel,
    k: u64,
    horizon: u64,
    budget: &Budget,
    strategy: SearchStrategy,
) -> Result<LargenessReport, RamseyError> {
    if partition.is_empty() {
        return Err(RamseyError::EmptyPartition);
    }
    let take = partition.len().min(horizon as usize + 1);
    let growth = interval_growth(x, &partition[..take], budget, strategy)?;

    // Exceeds `√n + k` exactly: v > k and (v−k)² > n.
    let exceeds = |v: u64, n: u64| v > k && (v - k).saturating_mul(v - k) > n;
    let entries: Vec<LargenessEntry> = growth
        .iter()
        .enumerate()
        .map(|(n, g)| LargenessEntry {
            n: n as u64,
            growth: *g,
            passes: g.map(|v| exceeds(v, n as u64)),
        })
        .collect();

    // A provably finite set has growth 0 on every interval past its
    // largest element, and 0 never exceeds √n + k at n >= 1.
    let provably_finite_past_partition =
        match x.counting_sequence(partition.last().map_or(0, |iv| iv.hi), budget) {
            Ok(seq) => matches!(seq.tail(), Tail::Constant { from, .. }
            if partition.last().is_some_and(|iv| iv.hi >= *from)),
            Err(_) => false,
        };
    let tag = if provably_finite_past_partition {
        TailTag::Finite
    } else {
        TailTag::Unknown
    };

    let bits: Vec<bool> = entries.iter().map(|e| e.passes == Some(true)).collect();
    let all_pass = !bits.is_empty() && bits.iter().all(|&b| b);
    let passing = IndexSet::Explicit(ExplicitSet::new(bits.clone(), tag));
    let query = model.query(&passing);
    let query_if_cofinite = all_pass.then(|| {
        model.query(&IndexSet::Explicit(ExplicitSet::new(
            bits,
            TailTag::Cofinite,
        )))
    });

    Ok(LargenessReport {
        k,
        entries,
        passing,
        query,
        query_if_cofinite,
    })
}
