//! Matroids given by a representation `φ: k^S -> W`: ranks, duality,
//! circuits, T-flats with their T-partitions, connected components and
//! minors.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU8, Ordering};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Matrix, Subspace};

pub const DEFAULT_MAX_GROUND_SET: usize = 16;
/// Absolute ceiling for `max_ground_set`; the rank cache has `2^|S|` slots.
pub const HARD_MAX_GROUND_SET: usize = 20;

const UNKNOWN: u8 = u8::MAX;

/// A subset of the ground set, stored as a bitmask over element indices.
///
/// Sets are ordered lexicographically by their sorted element lists, so
/// `{0,1} < {0,1,2} < {0,2} < {1}`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ElementSet(pub u32);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub fn full(n: usize) -> Self {
        if n >= 32 {
            ElementSet(u32::MAX)
        } else {
            ElementSet((1u32 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        ElementSet(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        ElementSet(it.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn bits(self) -> u32 {
        self.0
    }
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
    pub fn contains(self, i: usize) -> bool {
        i < 32 && self.0 & (1 << i) != 0
    }
    pub fn with(self, i: usize) -> Self {
        ElementSet(self.0 | (1 << i))
    }
    pub fn without(self, i: usize) -> Self {
        ElementSet(self.0 & !(1 << i))
    }
    pub fn union(self, o: Self) -> Self {
        ElementSet(self.0 | o.0)
    }
    pub fn intersection(self, o: Self) -> Self {
        ElementSet(self.0 & o.0)
    }
    pub fn minus(self, o: Self) -> Self {
        ElementSet(self.0 & !o.0)
    }
    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }
    pub fn is_disjoint(self, o: Self) -> bool {
        self.0 & o.0 == 0
    }
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                return None;
            }
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        })
    }

    pub fn elements(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Number of pairs `(x, y)` with `x ∈ self`, `y ∈ other`, `x > y`.
    pub fn inversions_against(self, other: Self) -> usize {
        self.iter()
            .map(|x| other.iter().filter(|&y| x > y).count())
            .sum()
    }
}

impl Ord for ElementSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for ElementSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A T-flat with its level, rank and T-partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TFlatRecord {
    pub set: ElementSet,
    pub level: usize,
    pub rank: usize,
    /// Sorted by smallest element. Singletons for circuits.
    pub t_parts: Vec<ElementSet>,
}

/// All T-flats of a matroid, grouped by level.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TFlats {
    levels: Vec<Vec<TFlatRecord>>,
    index: HashMap<ElementSet, (usize, usize)>,
}

impl TFlats {
    /// Levels `0..=max_level`; empty when the ground set is independent.
    pub fn levels(&self) -> &[Vec<TFlatRecord>] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> &[TFlatRecord] {
        self.levels.get(n).map_or(&[], |v| v.as_slice())
    }

    pub fn max_level(&self) -> Option<usize> {
        self.levels.len().checked_sub(1)
    }

    pub fn get(&self, set: ElementSet) -> Option<&TFlatRecord> {
        self.index.get(&set).map(|&(l, i)| &self.levels[l][i])
    }

    pub fn contains(&self, set: ElementSet) -> bool {
        self.index.contains_key(&set)
    }

    pub fn iter(&self) -> impl Iterator<Item = &TFlatRecord> {
        self.levels.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }
}

/// A matroid presented by the columns of a scalar matrix.
pub struct Representation<F: Field> {
    labels: Vec<String>,
    phi: Matrix<F>,
    columns: Vec<Vec<F::Elem>>,
    max_ground_set: usize,
    rank_cache: Vec<AtomicU8>,
    circuits: OnceLock<Vec<ElementSet>>,
    t_flats: OnceLock<TFlats>,
}

impl<F: Field> Clone for Representation<F> {
    fn clone(&self) -> Self {
        Representation {
            labels: self.labels.clone(),
            phi: self.phi.clone(),
            columns: self.columns.clone(),
            max_ground_set: self.max_ground_set,
            rank_cache: self
                .rank_cache
                .iter()
                .map(|c| AtomicU8::new(c.load(Ordering::Relaxed)))
                .collect(),
            circuits: self.circuits.clone(),
            t_flats: self.t_flats.clone(),
        }
    }
}

impl<F: Field> fmt::Debug for Representation<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Representation")
            .field("labels", &self.labels)
            .field("phi", &self.phi)
            .finish()
    }
}

impl<F: Field> Representation<F> {
    pub fn new(labels: Vec<String>, phi: Matrix<F>) -> Result<Self> {
        Self::with_max_ground_set(labels, phi, DEFAULT_MAX_GROUND_SET)
    }

    pub fn with_max_ground_set(labels: Vec<String>, phi: Matrix<F>, max: usize) -> Result<Self> {
        if max > HARD_MAX_GROUND_SET {
            return Err(Error::Precondition(format!(
                "max ground set {max} exceeds the supported ceiling {HARD_MAX_GROUND_SET}"
            )));
        }
        if labels.len() != phi.cols() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} columns",
                labels.len(),
                phi.cols()
            )));
        }
        if phi.cols() > max {
            return Err(Error::GroundSetTooLarge {
                size: phi.cols(),
                limit: max,
            });
        }
        let n = phi.cols();
        let columns = (0..n).map(|j| phi.column(j)).collect();
        let rank_cache = (0..1usize << n).map(|_| AtomicU8::new(UNKNOWN)).collect();
        Ok(Representation {
            labels,
            phi,
            columns,
            max_ground_set: max,
            rank_cache,
            circuits: OnceLock::new(),
            t_flats: OnceLock::new(),
        })
    }

    /// Representation with labels `1..=n`.
    pub fn unlabeled(phi: Matrix<F>) -> Result<Self> {
        let labels = (1..=phi.cols()).map(|i| i.to_string()).collect();
        Self::new(labels, phi)
    }

    pub fn field(&self) -> &F {
        self.phi.field()
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn phi(&self) -> &Matrix<F> {
        &self.phi
    }
    pub fn w_dim(&self) -> usize {
        self.phi.rows()
    }
    pub fn ground_size(&self) -> usize {
        self.phi.cols()
    }
    pub fn ground_set(&self) -> ElementSet {
        ElementSet::full(self.ground_size())
    }
    pub fn max_ground_set(&self) -> usize {
        self.max_ground_set
    }
    pub fn column(&self, i: usize) -> &[F::Elem] {
        &self.columns[i]
    }

    /// Validated subset from element indices.
    pub fn subset(&self, indices: &[usize]) -> Result<ElementSet> {
        let n = self.ground_size();
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: bad, size: n });
        }
        Ok(ElementSet::from_indices(indices.iter().copied()))
    }

    pub fn set_labels(&self, set: ElementSet) -> Vec<String> {
        set.iter().map(|i| self.labels[i].clone()).collect()
    }

    pub fn render_set(&self, set: ElementSet) -> String {
        format!("{{{}}}", self.set_labels(set).join(","))
    }

    fn check(&self, set: ElementSet) {
        assert!(
            set.is_subset(self.ground_set()),
            "subset {set:?} outside a ground set of size {}",
            self.ground_size()
        );
    }

    /// Columns of `set` as a `w x |set|` matrix.
    pub fn columns_of(&self, set: ElementSet) -> Matrix<F> {
        self.phi.select_columns(&set.elements())
    }

    /// `V_A`, the span of the columns in `A`.
    pub fn span(&self, set: ElementSet) -> Subspace<F> {
        self.check(set);
        let vecs = set.iter().map(|i| self.columns[i].clone()).collect();
        Subspace::span(self.field(), self.w_dim(), vecs)
    }

    pub fn rank(&self, set: ElementSet) -> usize {
        self.check(set);
        let slot = &self.rank_cache[set.0 as usize];
        let cached = slot.load(Ordering::Relaxed);
        if cached != UNKNOWN {
            return cached as usize;
        }
        let r = self.columns_of(set).rank();
        slot.store(r as u8, Ordering::Relaxed);
        r
    }

    /// `|A| - r_A - 1`; nonnegative exactly for dependent sets.
    pub fn level(&self, set: ElementSet) -> i64 {
        set.len() as i64 - self.rank(set) as i64 - 1
    }

    pub fn is_independent(&self, set: ElementSet) -> bool {
        self.rank(set) == set.len()
    }

    /// Rank in the dual matroid.
    pub fn dual_rank(&self, set: ElementSet) -> usize {
        let s = self.ground_set();
        set.len() + self.rank(s.minus(set)) - self.rank(s)
    }

    /// Closure in the dual matroid.
    pub fn dual_closure(&self, x: ElementSet) -> ElementSet {
        let r = self.dual_rank(x);
        self.ground_set()
            .minus(x)
            .iter()
            .filter(|&e| self.dual_rank(x.with(e)) == r)
            .fold(x, |acc, e| acc.with(e))
    }

    /// Closure in the matroid itself.
    pub fn closure(&self, x: ElementSet) -> ElementSet {
        let r = self.rank(x);
        self.ground_set()
            .minus(x)
            .iter()
            .filter(|&e| self.rank(x.with(e)) == r)
            .fold(x, |acc, e| acc.with(e))
    }

    /// Lexicographically first maximal independent subset of `set`.
    pub fn lex_basis(&self, set: ElementSet) -> ElementSet {
        let mut b = ElementSet::EMPTY;
        for e in set.iter() {
            if self.rank(b.with(e)) == b.len() + 1 {
                b = b.with(e);
            }
        }
        b
    }

    /// Minimal dependent sets in lexicographic order.
    pub fn circuits(&self) -> &[ElementSet] {
        self.circuits.get_or_init(|| self.compute_circuits())
    }

    fn compute_circuits(&self) -> Vec<ElementSet> {
        let n = self.ground_size();
        let max_size = (self.rank(self.ground_set()) + 1).min(n);
        let mut found: Vec<ElementSet> = Vec::new();
        for k in 1..=max_size {
            for set in k_subsets(n, k) {
                if found.iter().any(|c| c.is_subset(set)) {
                    continue;
                }
                if !self.is_independent(set) {
                    found.push(set);
                }
            }
        }
        found.sort();
        found
    }

    /// T-flats (nonempty unions of circuits) grouped by level.
    pub fn t_flats(&self) -> &TFlats {
        self.t_flats.get_or_init(|| self.compute_t_flats())
    }

    fn compute_t_flats(&self) -> TFlats {
        let circuits = self.circuits();
        let mut all: BTreeSet<ElementSet> = circuits.iter().copied().collect();
        let mut work: Vec<ElementSet> = all.iter().copied().collect();
        while let Some(x) = work.pop() {
            for &c in circuits {
                if c.is_subset(x) {
                    continue;
                }
                let u = x.union(c);
                if all.insert(u) {
                    work.push(u);
                }
            }
        }
        let mut levels: Vec<Vec<TFlatRecord>> = Vec::new();
        for set in all {
            let rank = self.rank(set);
            let level = set.len() - rank - 1;
            if levels.len() <= level {
                levels.resize(level + 1, Vec::new());
            }
            levels[level].push(TFlatRecord {
                set,
                level,
                rank,
                t_parts: Vec::new(),
            });
        }
        for n in 0..levels.len() {
            let (lower, upper) = levels.split_at_mut(n);
            for rec in upper[0].iter_mut() {
                rec.t_parts = if n == 0 {
                    rec.set.iter().map(ElementSet::singleton).collect()
                } else {
                    let mut parts: Vec<ElementSet> = lower[n - 1]
                        .iter()
                        .filter(|r| r.set.is_subset(rec.set))
                        .map(|r| rec.set.minus(r.set))
                        .collect();
                    parts.sort_by_key(|p| p.first());
                    parts
                };
            }
        }
        let index = levels
            .iter()
            .enumerate()
            .flat_map(|(l, v)| v.iter().enumerate().map(move |(i, r)| (r.set, (l, i))))
            .collect();
        TFlats { levels, index }
    }

    pub fn is_t_flat(&self, set: ElementSet) -> bool {
        self.t_flats().contains(set)
    }

    /// T-partition of a T-flat (singletons for circuits).
    pub fn t_parts(&self, set: ElementSet) -> Result<Vec<ElementSet>> {
        self.t_flats()
            .get(set)
            .map(|r| r.t_parts.clone())
            .ok_or_else(|| Error::NotATFlat(self.render_set(set)))
    }

    /// Finest decomposition of `A` as a direct sum, sorted by smallest element.
    pub fn connected_components(&self, set: ElementSet) -> Vec<ElementSet> {
        self.check(set);
        let elems = set.elements();
        let mut parent: HashMap<usize, usize> = elems.iter().map(|&e| (e, e)).collect();
        fn find(p: &mut HashMap<usize, usize>, x: usize) -> usize {
            let mut r = x;
            while p[&r] != r {
                r = p[&r];
            }
            let mut c = x;
            while p[&c] != r {
                let next = p[&c];
                p.insert(c, r);
                c = next;
            }
            r
        }
        for &c in self.circuits() {
            if !c.is_subset(set) {
                continue;
            }
            let first = c.first().expect("circuits are nonempty");
            for e in c.iter().skip(1) {
                let (a, b) = (find(&mut parent, first), find(&mut parent, e));
                if a != b {
                    parent.insert(a.max(b), a.min(b));
                }
            }
        }
        let mut groups: HashMap<usize, ElementSet> = HashMap::new();
        for &e in &elems {
            let r = find(&mut parent, e);
            let g = groups.entry(r).or_default();
            *g = g.with(e);
        }
        let mut out: Vec<ElementSet> = groups.into_values().collect();
        out.sort();
        out
    }

    pub fn is_connected(&self, set: ElementSet) -> bool {
        !set.is_empty() && self.connected_components(set).len() == 1
    }

    /// `S ∖ cl*(Y ∖ A)`: the largest T-flat meeting `Y` in `A` when `A` is a
    /// T-flat of the contraction to `Y`.
    pub fn b_of(&self, y: ElementSet, a: ElementSet) -> ElementSet {
        self.ground_set().minus(self.dual_closure(y.minus(a)))
    }

    pub fn restrict(&self, y: ElementSet) -> Result<MinorView<F>> {
        self.check(y);
        let embed = y.elements();
        let derived = Representation::with_max_ground_set(
            self.set_labels(y),
            self.phi.select_columns(&embed),
            self.max_ground_set,
        )?;
        Ok(MinorView {
            kind: MinorKind::Restriction,
            y,
            embed,
            derived,
            projection: Matrix::identity(self.field(), self.w_dim()),
        })
    }

    /// Contraction to `Y`: columns of `Y` pushed into `W / V_{S∖Y}`, with
    /// coordinates on the quotient given by the non-pivot positions of the
    /// RREF basis of `V_{S∖Y}`.
    pub fn contract(&self, y: ElementSet) -> Result<MinorView<F>> {
        self.check(y);
        let f = self.field();
        let kernel = self.span(self.ground_set().minus(y));
        let pivots = kernel.pivots();
        let free: Vec<usize> = (0..self.w_dim()).filter(|c| !pivots.contains(c)).collect();
        let mut pi = Matrix::zeros(f, free.len(), self.w_dim());
        for (qi, &q) in free.iter().enumerate() {
            pi.set(qi, q, f.one());
            for (k, &p) in pivots.iter().enumerate() {
                pi.set(qi, p, f.neg(kernel.basis().get(k, q)));
            }
        }
        let embed = y.elements();
        let cols = pi.mul(&self.phi.select_columns(&embed))?;
        let derived =
            Representation::with_max_ground_set(self.set_labels(y), cols, self.max_ground_set)?;
        Ok(MinorView {
            kind: MinorKind::Contraction,
            y,
            embed,
            derived,
            projection: pi,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinorKind {
    Restriction,
    Contraction,
}

/// A restriction or contraction together with the bookkeeping that ties it
/// back to the parent representation.
#[derive(Clone, Debug)]
pub struct MinorView<F: Field> {
    pub kind: MinorKind,
    pub y: ElementSet,
    /// `embed[i]` is the parent index of minor element `i`.
    pub embed: Vec<usize>,
    pub derived: Representation<F>,
    /// `W -> W̄` (identity for restrictions); its kernel is `V_{S∖Y}` for
    /// contractions.
    pub projection: Matrix<F>,
}

impl<F: Field> MinorView<F> {
    /// Parent-indexed set for a minor-indexed set.
    pub fn lift(&self, set: ElementSet) -> ElementSet {
        ElementSet::from_indices(set.iter().map(|i| self.embed[i]))
    }

    /// Minor-indexed set for a parent-indexed subset of `Y`.
    pub fn lower(&self, set: ElementSet) -> ElementSet {
        ElementSet::from_indices(
            self.embed
                .iter()
                .enumerate()
                .filter(|(_, &p)| set.contains(p))
                .map(|(i, _)| i),
        )
    }
}

/// All `k`-subsets of `0..n` in increasing bitmask order.
pub fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = ElementSet> {
    let limit: u64 = 1 << n;
    let mut cur: u64 = if k == 0 { 0 } else { (1 << k) - 1 };
    let mut done = k > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = ElementSet(cur as u32);
        if cur == 0 {
            done = true;
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            cur = (((r ^ cur) >> 2) / c) | r;
            if cur >= limit {
                done = true;
            }
        }
        Some(out)
    })
}
