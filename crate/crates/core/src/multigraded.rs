//! Multigraded T-resolutions of cokernels of monomial-entry presentations
//! `Φ: E -> G` over `k[x_1, …, x_m]`, with strand-wise verification.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::matroid::{ElementSet, Representation};
use crate::multiplicity::Multiplicities;
use crate::par;
use crate::report::Report;
use crate::tcomplex::{self, BasisLabel, Block, VectorSpaceComplex};

pub type Multidegree = Vec<u32>;

pub fn lcm(a: &[u32], b: &[u32]) -> Multidegree {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// `a ⪯ b` componentwise.
pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// A sparse polynomial: exponent vector -> nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<F: Field> {
    terms: BTreeMap<Multidegree, F::Elem>,
}

impl<F: Field> Default for Poly<F> {
    fn default() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }
}

impl<F: Field> Poly<F> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(field: &F, coeff: F::Elem, exp: Multidegree) -> Self {
        let mut p = Self::zero();
        if !field.is_zero(&coeff) {
            p.terms.insert(exp, coeff);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Multidegree, F::Elem> {
        &self.terms
    }

    /// The single term, if this is a nonzero monomial.
    pub fn as_monomial(&self) -> Option<(&F::Elem, &Multidegree)> {
        (self.terms.len() == 1)
            .then(|| self.terms.iter().next().map(|(e, c)| (c, e)))
            .flatten()
    }

    pub fn add_assign(&mut self, field: &F, other: &Self) {
        for (e, c) in &other.terms {
            let sum = match self.terms.get(e) {
                Some(x) => field.add(x, c),
                None => c.clone(),
            };
            if field.is_zero(&sum) {
                self.terms.remove(e);
            } else {
                self.terms.insert(e.clone(), sum);
            }
        }
    }

    pub fn mul(&self, field: &F, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Multidegree = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_assign(field, &Self::monomial(field, field.mul(c1, c2), e));
            }
        }
        out
    }

    /// `c*x^2*z` style rendering; `0` for the zero polynomial.
    pub fn render(&self, field: &F, vars: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(e, c)| render_monomial(field, c, e, vars))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

pub fn render_monomial<F: Field>(field: &F, c: &F::Elem, e: &[u32], vars: &[String]) -> String {
    let mut parts = vec![field.render(c)];
    for (v, &k) in vars.iter().zip(e) {
        match k {
            0 => {}
            1 => parts.push(v.clone()),
            _ => parts.push(format!("{v}^{k}")),
        }
    }
    parts.join("*")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix<F: Field> {
    rows: usize,
    cols: usize,
    entries: Vec<Poly<F>>,
}

impl<F: Field> PolyMatrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            entries: vec![Poly::zero(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &Poly<F> {
        &self.entries[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, p: Poly<F>) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    pub fn mul(&self, field: &F, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.mul(field, b);
                    out.entries[i * other.cols + j].add_assign(field, &prod);
                }
            }
        }
        Ok(out)
    }

    /// Scalar matrix of the coefficients of monomial entries.
    pub fn scalars(&self, field: &F) -> Matrix<F> {
        let mut m = Matrix::zeros(field, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if let Some((c, _)) = self.get(i, j).as_monomial() {
                    m.set(i, j, c.clone());
                }
            }
        }
        m
    }
}

/// `Φ` given by `k ⊗ Φ` and the degrees of the bases of `E` and `G`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultigradedPresentation<F: Field> {
    pub vars: Vec<String>,
    pub labels: Vec<String>,
    pub scalar: Matrix<F>,
    pub source_degrees: Vec<Multidegree>,
    pub target_degrees: Vec<Multidegree>,
}

impl<F: Field> MultigradedPresentation<F> {
    pub fn new(
        vars: Vec<String>,
        labels: Vec<String>,
        scalar: Matrix<F>,
        source_degrees: Vec<Multidegree>,
        target_degrees: Vec<Multidegree>,
    ) -> Result<Self> {
        let m = vars.len();
        if source_degrees.len() != scalar.cols() || target_degrees.len() != scalar.rows() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix with {} source and {} target degrees",
                scalar.rows(),
                scalar.cols(),
                source_degrees.len(),
                target_degrees.len()
            )));
        }
        if labels.len() != scalar.cols() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} columns",
                labels.len(),
                scalar.cols()
            )));
        }
        if let Some(d) = source_degrees.iter().chain(&target_degrees).find(|d| d.len() != m) {
            return Err(Error::DimensionMismatch(format!(
                "degree {d:?} has {} entries for {m} variables",
                d.len()
            )));
        }
        Ok(MultigradedPresentation {
            vars,
            labels,
            scalar,
            source_degrees,
            target_degrees,
        })
    }

    pub fn field(&self) -> &F {
        self.scalar.field()
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Every nonzero scalar must sit where the source degree dominates the
    /// target degree.
    pub fn validate(&self) -> Result<()> {
        let f = self.field();
        let mut bad = Vec::new();
        for i in 0..self.scalar.rows() {
            for j in 0..self.scalar.cols() {
                if !f.is_zero(self.scalar.get(i, j))
                    && !divides(&self.target_degrees[i], &self.source_degrees[j])
                {
                    bad.push((i, j));
                }
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::NotHomogeneous(bad))
        }
    }

    /// lcm of the source degrees over `I`.
    pub fn deg_of_set(&self, set: ElementSet) -> Result<Multidegree> {
        let mut it = set.iter();
        let first = it
            .next()
            .ok_or_else(|| Error::Precondition("degree of the empty set".to_string()))?;
        let first = self
            .source_degrees
            .get(first)
            .ok_or(Error::IndexOutOfRange {
                index: first,
                size: self.source_degrees.len(),
            })?;
        it.try_fold(first.clone(), |acc, e| {
            self.source_degrees
                .get(e)
                .map(|d| lcm(&acc, d))
                .ok_or(Error::IndexOutOfRange {
                    index: e,
                    size: self.source_degrees.len(),
                })
        })
    }

    pub fn representation(&self, max_ground_set: usize) -> Result<Representation<F>> {
        Representation::with_max_ground_set(self.labels.clone(), self.scalar.clone(), max_ground_set)
    }

    /// `Φ` with its monomial entries.
    pub fn poly_matrix(&self) -> PolyMatrix<F> {
        let f = self.field();
        let mut m = PolyMatrix::zeros(self.scalar.rows(), self.scalar.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let c = self.scalar.get(i, j);
                if !f.is_zero(c) {
                    let e = sub_deg(&self.source_degrees[j], &self.target_degrees[i]);
                    m.set(i, j, Poly::monomial(f, c.clone(), e));
                }
            }
        }
        m
    }

    /// Reads a presentation from monomial entries and target degrees.
    /// Source degrees are inferred from nonzero columns; zero columns need
    /// `source_degrees`.
    pub fn from_poly_matrix(
        field: &F,
        vars: Vec<String>,
        labels: Vec<String>,
        entries: &[Vec<String>],
        target_degrees: Vec<Multidegree>,
        source_degrees: Option<Vec<Multidegree>>,
    ) -> Result<Self> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        if rows != target_degrees.len() {
            return Err(Error::DimensionMismatch(format!(
                "{rows} rows with {} target degrees",
                target_degrees.len()
            )));
        }
        let mut scalar = Matrix::zeros(field, rows, cols);
        let mut inferred: Vec<Option<Multidegree>> = vec![None; cols];
        for (i, row) in entries.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Parse(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            for (j, text) in row.iter().enumerate() {
                let (c, e) = parse_monomial(field, text, &vars)
                    .map_err(|err| Error::Parse(format!("entry ({i},{j}): {err}")))?;
                if field.is_zero(&c) {
                    continue;
                }
                let deg: Multidegree = e.iter().zip(&target_degrees[i]).map(|(a, b)| a + b).collect();
                match &inferred[j] {
                    Some(d) if *d != deg => return Err(Error::NotHomogeneous(vec![(i, j)])),
                    _ => inferred[j] = Some(deg),
                }
                scalar.set(i, j, c);
            }
        }
        let source_degrees = match source_degrees {
            Some(given) => {
                if given.len() != cols {
                    return Err(Error::DimensionMismatch(format!(
                        "{} source degrees for {cols} columns",
                        given.len()
                    )));
                }
                for (j, d) in inferred.iter().enumerate() {
                    if let Some(d) = d {
                        if *d != given[j] {
                            let i = (0..rows).find(|&i| !field.is_zero(scalar.get(i, j))).unwrap_or(0);
                            return Err(Error::NotHomogeneous(vec![(i, j)]));
                        }
                    }
                }
                given
            }
            None => inferred
                .into_iter()
                .enumerate()
                .map(|(j, d)| {
                    d.ok_or_else(|| Error::Parse(format!("column {j} is zero; its degree must be given")))
                })
                .collect::<Result<_>>()?,
        };
        Self::new(vars, labels, scalar, source_degrees, target_degrees)
    }

    /// Replaces the basis of `E` by `z'_j = Σ_i M_ij x^(deg_j - deg_i) z_i`.
    /// `M_ij ≠ 0` requires `deg_i ⪯ deg_j`, and the entries between equal
    /// degrees must form an invertible matrix. Degrees are unchanged.
    pub fn change_source_basis(&self, m: &Matrix<F>) -> Result<Self> {
        let f = self.field();
        let n = self.scalar.cols();
        if m.shape() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "basis change must be {n}x{n}, got {:?}",
                m.shape()
            )));
        }
        let mut bad = Vec::new();
        let mut degree_zero = Matrix::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                let v = m.get(i, j);
                if f.is_zero(v) {
                    continue;
                }
                if !divides(&self.source_degrees[i], &self.source_degrees[j]) {
                    bad.push((i, j));
                } else if self.source_degrees[i] == self.source_degrees[j] {
                    degree_zero.set(i, j, v.clone());
                }
            }
        }
        if !bad.is_empty() {
            return Err(Error::NotHomogeneous(bad));
        }
        if degree_zero.rank() != n {
            return Err(Error::Precondition("basis change is not invertible".to_string()));
        }
        Self::new(
            self.vars.clone(),
            self.labels.clone(),
            self.scalar.mul(m)?,
            self.source_degrees.clone(),
            self.target_degrees.clone(),
        )
    }
}

fn sub_deg(a: &[u32], b: &[u32]) -> Multidegree {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Parses `c`, `c*x^2*y`, `-x*z^3`, `x^2` etc. over the given variables.
pub fn parse_monomial<F: Field>(field: &F, text: &str, vars: &[String]) -> std::result::Result<(F::Elem, Multidegree), String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty entry".to_string());
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.to_string()),
        None => (false, t.trim_start_matches('+').to_string()),
    };
    let mut coeff = field.one();
    let mut exp = vec![0u32; vars.len()];
    for (k, factor) in body.split('*').enumerate() {
        if factor.is_empty() {
            return Err(format!("malformed monomial {text:?}"));
        }
        let (base, power) = match factor.split_once('^') {
            Some((b, p)) => (
                b,
                p.parse::<u32>()
                    .map_err(|_| format!("bad exponent in {text:?}"))?,
            ),
            None => (factor, 1),
        };
        if let Some(v) = vars.iter().position(|v| v == base) {
            exp[v] += power;
        } else if k == 0 && factor.chars().next().is_some_and(|c| c.is_ascii_digit()) {
            coeff = field.parse(factor).map_err(|e| e.to_string())?;
        } else {
            return Err(format!("unknown variable {base:?} in {text:?} (entries must be single monomials)"));
        }
    }
    if neg {
        coeff = field.neg(&coeff);
    }
    Ok((coeff, exp))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: BasisLabel,
    pub degree: Multidegree,
}

/// A complex of free multigraded modules `F_top -> … -> F_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeComplex<F: Field> {
    pub field: F,
    pub vars: Vec<String>,
    pub components: Vec<Vec<Generator>>,
    /// `differentials[k-1]` is `Φ_k: F_k -> F_{k-1}`.
    pub differentials: Vec<PolyMatrix<F>>,
}

impl<F: Field> FreeComplex<F> {
    pub fn ranks(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.len()).collect()
    }

    /// Highest index with a nonzero component.
    pub fn length(&self) -> usize {
        self.components.iter().rposition(|c| !c.is_empty()).unwrap_or(0)
    }

    /// Positions `(k, i, j)` where `d_{k-1} ∘ d_k` has a nonzero entry.
    pub fn composition_failures(&self) -> Vec<(usize, usize, usize)> {
        let ks: Vec<usize> = (2..self.components.len()).collect();
        par::map(&ks, |&k| {
            let p = self.differentials[k - 2]
                .mul(&self.field, &self.differentials[k - 1])
                .expect("shapes chain");
            let mut bad = Vec::new();
            for i in 0..p.rows() {
                for j in 0..p.cols() {
                    if !p.get(i, j).is_zero() {
                        bad.push((k, i, j));
                    }
                }
            }
            bad
        })
        .into_iter()
        .flatten()
        .collect()
    }

    /// Entries whose monomial is not `x^(deg column - deg row)`.
    pub fn homogeneity_failures(&self) -> Vec<(usize, usize, usize)> {
        let mut bad = Vec::new();
        for (k0, d) in self.differentials.iter().enumerate() {
            let k = k0 + 1;
            for i in 0..d.rows() {
                for j in 0..d.cols() {
                    let p = d.get(i, j);
                    if p.is_zero() {
                        continue;
                    }
                    let (src, tgt) = (&self.components[k][j].degree, &self.components[k - 1][i].degree);
                    let ok = divides(tgt, src)
                        && p.as_monomial()
                            .is_some_and(|(_, e)| *e == sub_deg(src, tgt));
                    if !ok {
                        bad.push((k, i, j));
                    }
                }
            }
        }
        bad
    }

    /// Strand at `a`: generators of degree `⪯ a` with scalar coefficients.
    pub fn strand(&self, a: &[u32]) -> VectorSpaceComplex<F> {
        let keep: Vec<Vec<usize>> = self
            .components
            .iter()
            .map(|c| (0..c.len()).filter(|&i| divides(&c[i].degree, a)).collect())
            .collect();
        let components = self
            .components
            .iter()
            .zip(&keep)
            .map(|(c, ix)| ix.iter().map(|&i| c[i].label).collect())
            .collect();
        let differentials = self
            .differentials
            .iter()
            .enumerate()
            .map(|(k, d)| d.scalars(&self.field).select_rows(&keep[k]).select_columns(&keep[k + 1]))
            .collect();
        VectorSpaceComplex::new(&self.field, components, differentials).expect("consistent shapes")
    }

    /// Betti numbers by homological index and multidegree.
    pub fn betti_table(&self) -> Vec<BTreeMap<Multidegree, usize>> {
        self.components
            .iter()
            .map(|c| {
                let mut m = BTreeMap::new();
                for g in c {
                    *m.entry(g.degree.clone()).or_insert(0) += 1;
                }
                m
            })
            .collect()
    }

    /// Replaces every entry by its coefficient times `x^exp`, discarding
    /// nothing; used to compare with other resolutions.
    pub fn scalar_differentials(&self) -> Vec<Matrix<F>> {
        self.differentials.iter().map(|d| d.scalars(&self.field)).collect()
    }
}

/// `T(Φ, S)`: `G <- E <- T_0 <- … <- T_λ` with generator degrees
/// `lcm` over T-flats.
pub fn build_resolution<F: Field>(p: &MultigradedPresentation<F>, max_ground_set: usize) -> Result<FreeComplex<F>> {
    p.validate()?;
    let rep = p.representation(max_ground_set)?;
    let mult = Multiplicities::new(&rep);
    Ok(build_resolution_with(p, &rep, &mult))
}

pub fn build_resolution_with<F: Field>(
    p: &MultigradedPresentation<F>,
    rep: &Representation<F>,
    mult: &Multiplicities<F>,
) -> FreeComplex<F> {
    let f = p.field();
    let tp = tcomplex::build_t_plus_with(rep, mult);
    let degree = |l: &BasisLabel| match l.block {
        Block::Ambient => p.target_degrees[l.index].clone(),
        Block::Element(a) => p.source_degrees[a].clone(),
        Block::TFlat(set) => p.deg_of_set(set).expect("T-flats are nonempty"),
    };
    let components: Vec<Vec<Generator>> = (0..tp.len())
        .map(|k| {
            tp.labels(k)
                .iter()
                .map(|l| Generator {
                    label: *l,
                    degree: degree(l),
                })
                .collect()
        })
        .collect();
    let differentials = (1..tp.len())
        .map(|k| {
            let d = tp.differential(k).expect("in range");
            let mut pm = PolyMatrix::zeros(d.rows(), d.cols());
            for i in 0..d.rows() {
                for j in 0..d.cols() {
                    let c = d.get(i, j);
                    if !f.is_zero(c) {
                        let e = sub_deg(&components[k][j].degree, &components[k - 1][i].degree);
                        pm.set(i, j, Poly::monomial(f, c.clone(), e));
                    }
                }
            }
            pm
        })
        .collect();
    FreeComplex {
        field: f.clone(),
        vars: p.vars.clone(),
        components,
        differentials,
    }
}

/// All lcms of nonempty subsets of `degrees`.
pub fn join_closure(degrees: &[Multidegree]) -> Vec<Multidegree> {
    let mut all: BTreeSet<Multidegree> = degrees.iter().cloned().collect();
    loop {
        let current: Vec<Multidegree> = all.iter().cloned().collect();
        let before = all.len();
        for a in &current {
            for b in &current {
                all.insert(lcm(a, b));
            }
        }
        if all.len() == before {
            return current;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionSummary {
    pub length: usize,
    pub betti: Vec<usize>,
    pub pd_bound: i64,
    pub strands_checked: usize,
}

/// Checks that need nothing but the complex itself: symbolic `d∘d = 0`,
/// multihomogeneity and exactness of every strand over the join closure of
/// the degrees in homological degrees 0 and 1.
pub fn structural_checks<F: Field>(complex: &FreeComplex<F>) -> Report {
    let mut report = Report::default();
    let bad = complex.composition_failures();
    report.push(
        "resolution-complex",
        bad.is_empty(),
        match bad.first() {
            None => "Φ_(k-1)∘Φ_k = 0 symbolically".to_string(),
            Some((k, i, j)) => format!("Φ_{}∘Φ_{k} has a nonzero entry at ({i},{j})", k - 1),
        },
    );
    let bad = complex.homogeneity_failures();
    report.push(
        "resolution-homogeneous",
        bad.is_empty(),
        match bad.first() {
            None => "every entry is c·x^(deg column − deg row)".to_string(),
            Some((k, i, j)) => format!("Φ_{k}[{i},{j}] has the wrong monomial"),
        },
    );
    let degs: Vec<Multidegree> = complex
        .components
        .iter()
        .take(2)
        .flatten()
        .map(|g| g.degree.clone())
        .collect();
    let test_set = join_closure(&degs);
    let inexact: Vec<String> = par::map(&test_set, |a| {
        let h = complex.strand(a).homology();
        let nz: Vec<usize> = h
            .entries
            .iter()
            .filter(|e| e.index >= 1 && e.homology != 0)
            .map(|e| e.index)
            .collect();
        (a.clone(), nz)
    })
    .into_iter()
    .filter(|(_, nz)| !nz.is_empty())
    .map(|(a, nz)| format!("strand {a:?}: H_k ≠ 0 for k ∈ {nz:?}"))
    .collect();
    report.push(
        "strand-exact",
        inexact.is_empty(),
        if inexact.is_empty() {
            format!("{} strands exact in degrees ≥ 1", test_set.len())
        } else {
            inexact.join("; ")
        },
    );
    report
}

/// Symbolic `d∘d = 0`, multihomogeneity, strand exactness over the join
/// closure, agreement of every strand with the augmented T-complex of the
/// corresponding restriction, and the projective-dimension bound.
pub fn verify_resolution<F: Field>(
    p: &MultigradedPresentation<F>,
    rep: &Representation<F>,
    mult: &Multiplicities<F>,
    complex: &FreeComplex<F>,
) -> (Report, ResolutionSummary) {
    let mut report = structural_checks(complex);
    let mut degs = p.source_degrees.clone();
    degs.extend(p.target_degrees.iter().cloned());
    let test_set = join_closure(&degs);
    let mismatched: Vec<String> = par::map(&test_set, |a| {
        let strand = complex.strand(a);
        (a.clone(), strand_matches_restriction(p, rep, mult, &strand, a))
    })
    .into_iter()
    .filter(|(_, ok)| !ok)
    .map(|(a, _)| format!("{a:?}"))
    .collect();
    report.push(
        "strand-restriction",
        mismatched.is_empty(),
        if mismatched.is_empty() {
            "every strand agrees with T(φ|I_a)^+ above degree 0".to_string()
        } else {
            format!("strands differing from T(φ|I_a)^+: {}", mismatched.join(", "))
        },
    );

    let betti = complex.ranks();
    let length = complex.length();
    let beta0 = betti.first().copied().unwrap_or(0) as i64;
    let beta1 = betti.get(1).copied().unwrap_or(0) as i64;
    let rank_l = beta0 - rep.rank(rep.ground_set()) as i64;
    let pd_bound = beta1 - beta0 + rank_l + 1;
    report.push(
        "projective-dimension-bound",
        length as i64 <= pd_bound,
        format!("length {length} ≤ β1 − β0 + rank L + 1 = {pd_bound}"),
    );
    (
        report,
        ResolutionSummary {
            length,
            betti,
            pd_bound,
            strands_checked: test_set.len(),
        },
    )
}

/// Compares a strand with `T(φ|I_a)^+` in every index `≥ 1`, and checks
/// that `d_1` of the strand is the corresponding row selection of `φ|I_a`.
fn strand_matches_restriction<F: Field>(
    p: &MultigradedPresentation<F>,
    rep: &Representation<F>,
    mult: &Multiplicities<F>,
    strand: &VectorSpaceComplex<F>,
    a: &[u32],
) -> bool {
    let i_a = ElementSet::from_indices(
        p.source_degrees
            .iter()
            .enumerate()
            .filter(|(_, d)| divides(d, a))
            .map(|(i, _)| i),
    );
    let full = tcomplex::build_t_plus_with(rep, mult);
    let restricted = full.sub_complex(|l| match l.block {
        Block::Ambient => true,
        Block::Element(e) => i_a.contains(e),
        Block::TFlat(set) => set.is_subset(i_a),
    });
    let top = strand.len().max(restricted.len());
    for k in 1..top {
        if strand.labels(k) != restricted.labels(k) {
            return false;
        }
    }
    for k in 2..top {
        if strand.differential(k) != restricted.differential(k) {
            return false;
        }
    }
    match (strand.differential(1), restricted.differential(1)) {
        (Some(s), Some(r)) => {
            let rows: Vec<usize> = strand.labels(0).iter().map(|l| l.index).collect();
            *s == r.select_rows(&rows)
        }
        (None, None) => true,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::matroid::DEFAULT_MAX_GROUND_SET;

    pub(crate) fn three_vars() -> MultigradedPresentation<Rationals> {
        MultigradedPresentation::new(
            vec!["x".into(), "y".into(), "z".into()],
            (1..=4).map(|i| i.to_string()).collect(),
            Matrix::from_i64(&Rationals, &[&[1, 1, 1, 1], &[1, 1, 2, 3]]),
            vec![vec![3, 1, 1], vec![1, 3, 1], vec![1, 1, 3], vec![1, 2, 2]],
            vec![vec![1, 1, 0], vec![0, 0, 1]],
        )
        .unwrap()
    }

    #[test]
    fn degrees_and_validation() {
        let p = three_vars();
        assert!(p.validate().is_ok());
        assert_eq!(p.deg_of_set(ElementSet(0b11)).unwrap(), vec![3, 3, 1]);
        assert_eq!(p.deg_of_set(ElementSet(0b1111)).unwrap(), vec![3, 3, 3]);
        assert_eq!(p.deg_of_set(ElementSet(0b100)).unwrap(), vec![1, 1, 3]);
        assert!(p.deg_of_set(ElementSet::EMPTY).is_err());
        let mut bad = p.clone();
        bad.target_degrees[0] = vec![4, 0, 0];
        assert!(matches!(bad.validate(), Err(Error::NotHomogeneous(v)) if v.len() == 4));
        let mut zero = p.clone();
        zero.scalar = Matrix::zeros(&Rationals, 2, 4);
        assert!(zero.validate().is_ok());
    }

    #[test]
    fn example_resolution() {
        let p = three_vars();
        let c = build_resolution(&p, DEFAULT_MAX_GROUND_SET).unwrap();
        assert_eq!(c.ranks(), vec![2, 4, 3, 1]);
        assert_eq!(c.length(), 3);
        let degs: Vec<_> = c.components[2].iter().map(|g| g.degree.clone()).collect();
        assert_eq!(degs, vec![vec![3, 3, 1], vec![3, 2, 3], vec![1, 3, 3]]);
        assert_eq!(c.components[3][0].degree, vec![3, 3, 3]);
        let rep = p.representation(DEFAULT_MAX_GROUND_SET).unwrap();
        let mult = Multiplicities::new(&rep);
        let (report, summary) = verify_resolution(&p, &rep, &mult, &c);
        assert!(report.passed(), "{}", report.render());
        assert_eq!(summary.pd_bound, 3);
        let vars = &p.vars;
        let phi3: Vec<String> = (0..3).map(|i| c.differentials[2].get(i, 0).render(&Rationals, vars)).collect();
        assert_eq!(phi3, vec!["-1*z^2", "1*y", "-1*x^2"]);
    }

    #[test]
    fn strands() {
        let p = three_vars();
        let c = build_resolution(&p, DEFAULT_MAX_GROUND_SET).unwrap();
        let s = c.strand(&[3, 3, 1]);
        assert_eq!(s.trimmed().dims(), vec![2, 2, 1]);
        assert!(c.strand(&[0, 0, 0]).is_empty());
        assert_eq!(c.strand(&[3, 3, 3]).dims(), vec![2, 4, 3, 1]);
    }

    #[test]
    fn poly_matrix_reader() {
        let f = Rationals;
        let vars: Vec<String> = vec!["x".into(), "y".into(), "z".into()];
        let entries: Vec<Vec<String>> = vec![
            vec!["x^2*z".into(), "y^2*z".into(), "z^3".into(), "y*z^2".into()],
            vec!["x^3*y".into(), "x*y^3".into(), "2*x*y*z^2".into(), "3*x*y^2*z".into()],
        ];
        let p = MultigradedPresentation::from_poly_matrix(
            &f,
            vars.clone(),
            (1..=4).map(|i| i.to_string()).collect(),
            &entries,
            vec![vec![1, 1, 0], vec![0, 0, 1]],
            None,
        )
        .unwrap();
        assert_eq!(p, three_vars());
        let mut bad = entries.clone();
        bad[1][0] = "x^3".into();
        assert!(MultigradedPresentation::from_poly_matrix(
            &f,
            vars.clone(),
            (1..=4).map(|i| i.to_string()).collect(),
            &bad,
            vec![vec![1, 1, 0], vec![0, 0, 1]],
            None
        )
        .is_err());
        assert!(parse_monomial(&f, "x+y", &vars).is_err());
        assert_eq!(parse_monomial(&f, "-3/2*x*x", &vars).unwrap(), (f.parse("-3/2").unwrap(), vec![2, 0, 0]));
    }

    #[test]
    fn join_closure_is_closed() {
        let j = join_closure(&[vec![1, 0], vec![0, 1], vec![2, 0]]);
        assert_eq!(j, vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![2, 0], vec![2, 1]]);
    }

    #[test]
    fn basis_change_hook() {
        let p = three_vars();
        let f = Rationals;
        let mut m = Matrix::identity(&f, 4);
        m.set(0, 1, f.one());
        assert!(p.change_source_basis(&m).is_err());
        let same = p.change_source_basis(&Matrix::identity(&f, 4).scale(&f.from_i64(2))).unwrap();
        assert_eq!(same.scalar, p.scalar.scale(&f.from_i64(2)));
    }
}
