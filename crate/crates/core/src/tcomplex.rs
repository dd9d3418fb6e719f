//! T-spaces, the component maps `φ_n^{IJ}`, the complexes `T(φ)` and
//! `T(φ)^+`, and rank-based verification of their properties.
//!
//! Basis of `T_I`: `σ_k* ⊗ e_I ⊗ ω_I` where `σ_k` runs over the RREF basis
//! of `S_I`, `e_I` is the wedge of the elements of `I` in ground-set order
//! and `ω_I` is the functional dual to the wedge of the columns over the
//! lexicographically first basis `Î` of `I`.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Matrix, Subspace};
use crate::matroid::{ElementSet, Representation};
use crate::multiplicity::{meet_line, Multiplicities};
use crate::par;
use crate::report::Report;

/// Which summand a basis vector belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    /// Coordinate of `W`.
    Ambient,
    /// `U_a`.
    Element(usize),
    /// `T_I`.
    TFlat(ElementSet),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisLabel {
    pub block: Block,
    pub index: usize,
}

/// Bookkeeping for the basis of one T-space.
#[derive(Clone, Debug, PartialEq)]
pub struct TSpaceBasis<F: Field> {
    pub set: ElementSet,
    /// `-1` for singletons.
    pub level: i64,
    pub dim: usize,
    /// `S_I` basis whose dual coordinates index `T_I`.
    pub multiplicity_basis: Subspace<F>,
    /// Order of `e_I`.
    pub wedge: Vec<usize>,
    /// `Î`.
    pub dual_wedge_basis: Vec<usize>,
}

pub fn t_space<F: Field>(
    rep: &Representation<F>,
    mult: &Multiplicities<F>,
    set: ElementSet,
) -> Result<TSpaceBasis<F>> {
    let f = rep.field();
    if let Some(level) = mult.level(set) {
        let basis = mult.space(set);
        return Ok(TSpaceBasis {
            set,
            level: level as i64,
            dim: basis.dim(),
            multiplicity_basis: basis,
            wedge: set.elements(),
            dual_wedge_basis: rep.lex_basis(set).elements(),
        });
    }
    if set.len() == 1 && set.is_subset(rep.ground_set()) {
        return Ok(TSpaceBasis {
            set,
            level: -1,
            dim: 1,
            multiplicity_basis: Subspace::full(f, 1),
            wedge: set.elements(),
            dual_wedge_basis: rep.lex_basis(set).elements(),
        });
    }
    Err(Error::NotATFlat(rep.render_set(set)))
}

/// `ω_I(y_1 ∧ … ∧ y_r)`: determinant of the coordinates of the `y`'s in the
/// basis `φ(Î)`.
fn omega<F: Field>(rep: &Representation<F>, set: ElementSet, vectors: &[Vec<F::Elem>]) -> F::Elem {
    let basis = rep.columns_of(rep.lex_basis(set));
    assert_eq!(basis.cols(), vectors.len(), "wedge of the wrong degree");
    let coords: Vec<Vec<F::Elem>> = vectors
        .iter()
        .map(|v| basis.solve(v).expect("vector lies in V_I"))
        .collect();
    Matrix::from_columns(rep.field(), vectors.len(), &coords)
        .det()
        .expect("square")
}

/// Scalar `c` with `φ_n^{IJ} = c · νᵀ` for `n ≥ 1`, or `φ_0^{I,a}` itself;
/// `None` when the map vanishes.
fn block_scalar<F: Field>(rep: &Representation<F>, i: ElementSet, j: ElementSet, level: usize) -> Option<F::Elem> {
    let f = rep.field();
    let rest = i.minus(j);
    if level == 0 {
        let sign = f.pow_sign(j.inversions_against(rest) % 2 == 1);
        let vecs: Vec<_> = rest.iter().map(|e| rep.column(e).to_vec()).collect();
        return Some(f.mul(&sign, &omega(rep, i, &vecs)));
    }
    if !rep.is_independent(rest) {
        return None;
    }
    let sign = f.pow_sign(rest.inversions_against(j) % 2 == 1);
    let line = meet_line(rep, i, j)?;
    let rest_cols = rep.columns_of(rest);
    let ell = rest_cols.solve(&line).expect("line inside V_(I∖J)");
    let pivot = ell.iter().position(|c| !f.is_zero(c)).expect("nonzero line");
    let q = rest.len();
    let mut frame = Matrix::zeros(f, q, q);
    for (r, c) in ell.iter().enumerate() {
        frame.set(r, 0, c.clone());
    }
    let mut col = 1;
    for k in (0..q).filter(|&k| k != pivot) {
        frame.set(k, col, f.one());
        col += 1;
    }
    let d = f.inv(&frame.det().expect("square")).expect("frame is a basis");
    let elems = rest.elements();
    let mut vecs: Vec<Vec<F::Elem>> = elems
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != pivot)
        .map(|(_, &e)| rep.column(e).to_vec())
        .collect();
    vecs.extend(rep.lex_basis(j).iter().map(|e| rep.column(e).to_vec()));
    let w = omega(rep, i, &vecs);
    Some(f.mul(&f.mul(&sign, &d), &w))
}

/// Matrix of `φ_n^{IJ}: T_I -> T_J` (unsigned by `(-1)^{|J|}`). For a
/// circuit `I`, `J` must be a singleton inside `I`.
pub fn phi_ij<F: Field>(
    rep: &Representation<F>,
    mult: &Multiplicities<F>,
    i: ElementSet,
    j: ElementSet,
) -> Result<Matrix<F>> {
    let f = rep.field();
    let level = mult
        .level(i)
        .ok_or_else(|| Error::NotATFlat(rep.render_set(i)))?;
    if !j.is_subset(i) {
        return Err(Error::Precondition(format!(
            "{} is not inside {}",
            rep.render_set(j),
            rep.render_set(i)
        )));
    }
    let di = mult.dim(i);
    if level == 0 {
        if j.len() != 1 {
            return Err(Error::Precondition(format!(
                "{} is not a singleton",
                rep.render_set(j)
            )));
        }
        let mut m = Matrix::zeros(f, 1, di);
        if di == 1 {
            m.set(0, 0, block_scalar(rep, i, j, 0).expect("always defined"));
        }
        return Ok(m);
    }
    if mult.level(j) != Some(level - 1) || i == j {
        return Err(Error::Precondition(format!(
            "{} is not a level-{} T-flat inside {}",
            rep.render_set(j),
            level - 1,
            rep.render_set(i)
        )));
    }
    match block_scalar(rep, i, j, level) {
        None => Ok(Matrix::zeros(f, mult.dim(j), di)),
        Some(c) => Ok(mult.nu_matrix(rep, i, j)?.transpose().scale(&c)),
    }
}

/// A bounded complex of finite-dimensional vector spaces
/// `C_top -> … -> C_1 -> C_0`, with `d_k: C_k -> C_{k-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorSpaceComplex<F: Field> {
    field: F,
    components: Vec<Vec<BasisLabel>>,
    differentials: Vec<Matrix<F>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyEntry {
    pub index: usize,
    pub dim: usize,
    pub rank_out: usize,
    pub rank_in: usize,
    /// Negative when the differentials do not compose to zero.
    pub homology: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomologyReport {
    pub entries: Vec<HomologyEntry>,
}

impl HomologyReport {
    pub fn homology(&self, k: usize) -> i64 {
        self.entries.get(k).map_or(0, |e| e.homology)
    }
    pub fn ranks(&self) -> Vec<usize> {
        self.entries.iter().skip(1).map(|e| e.rank_out).collect()
    }
}

impl<F: Field> VectorSpaceComplex<F> {
    /// `differentials[k-1]` is `d_k`; shapes are checked.
    pub fn new(field: &F, components: Vec<Vec<BasisLabel>>, differentials: Vec<Matrix<F>>) -> Result<Self> {
        if !(differentials.len() + 1 == components.len()
            || components.is_empty() && differentials.is_empty())
        {
            return Err(Error::DimensionMismatch(format!(
                "{} components need {} differentials, got {}",
                components.len(),
                components.len().saturating_sub(1),
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            let expected = (components[k].len(), components[k + 1].len());
            if d.shape() != expected {
                return Err(Error::DimensionMismatch(format!(
                    "d_{} has shape {:?}, expected {:?}",
                    k + 1,
                    d.shape(),
                    expected
                )));
            }
        }
        Ok(VectorSpaceComplex {
            field: field.clone(),
            components,
            differentials,
        })
    }

    pub fn empty(field: &F) -> Self {
        VectorSpaceComplex {
            field: field.clone(),
            components: Vec::new(),
            differentials: Vec::new(),
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// Number of homological indices (`top + 1`).
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.iter().all(|c| c.is_empty())
    }

    pub fn dim(&self, k: usize) -> usize {
        self.components.get(k).map_or(0, |c| c.len())
    }

    /// Dimensions from index 0 upward.
    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.len()).collect()
    }

    pub fn labels(&self, k: usize) -> &[BasisLabel] {
        self.components.get(k).map_or(&[], |c| c.as_slice())
    }

    /// `d_k` for `1 ≤ k < len`.
    pub fn differential(&self, k: usize) -> Option<&Matrix<F>> {
        k.checked_sub(1).and_then(|i| self.differentials.get(i))
    }

    pub fn differentials(&self) -> &[Matrix<F>] {
        &self.differentials
    }

    /// Indices `k` at which `d_{k-1} ∘ d_k ≠ 0`.
    pub fn composition_failures(&self) -> Vec<usize> {
        let pairs: Vec<usize> = (2..self.len()).collect();
        par::map(&pairs, |&k| {
            let prod = self.differentials[k - 2]
                .mul(&self.differentials[k - 1])
                .expect("shapes chain");
            (!prod.is_zero()).then_some(k)
        })
        .into_iter()
        .flatten()
        .collect()
    }

    pub fn homology(&self) -> HomologyReport {
        let ranks = par::map(&self.differentials, |d| d.rank());
        let entries = (0..self.len())
            .map(|k| {
                let rank_out = if k == 0 { 0 } else { ranks[k - 1] };
                let rank_in = ranks.get(k).copied().unwrap_or(0);
                let dim = self.dim(k);
                HomologyEntry {
                    index: k,
                    dim,
                    rank_out,
                    rank_in,
                    homology: dim as i64 - rank_out as i64 - rank_in as i64,
                }
            })
            .collect();
        HomologyReport { entries }
    }

    /// Subcomplex spanned by the basis vectors selected by `keep`, which must
    /// be closed under the differential.
    pub fn sub_complex(&self, keep: impl Fn(&BasisLabel) -> bool) -> Self {
        let idx: Vec<Vec<usize>> = self
            .components
            .iter()
            .map(|c| (0..c.len()).filter(|&i| keep(&c[i])).collect())
            .collect();
        let components = self
            .components
            .iter()
            .zip(&idx)
            .map(|(c, ix)| ix.iter().map(|&i| c[i]).collect())
            .collect();
        let differentials = self
            .differentials
            .iter()
            .enumerate()
            .map(|(k, d)| d.select_rows(&idx[k]).select_columns(&idx[k + 1]))
            .collect();
        VectorSpaceComplex {
            field: self.field.clone(),
            components,
            differentials,
        }
    }

    /// Drops trailing zero components.
    pub fn trimmed(mut self) -> Self {
        while self.components.last().is_some_and(|c| c.is_empty()) {
            self.components.pop();
            self.differentials.pop();
        }
        self
    }
}

/// `λ = |S| - r_S - 1`.
pub fn lambda<F: Field>(rep: &Representation<F>) -> i64 {
    rep.ground_size() as i64 - rep.rank(rep.ground_set()) as i64 - 1
}

fn tflat_labels<F: Field>(rep: &Representation<F>, mult: &Multiplicities<F>, n: usize) -> Vec<BasisLabel> {
    rep.t_flats()
        .level(n)
        .iter()
        .flat_map(|r| {
            (0..mult.dim(r.set)).map(move |index| BasisLabel {
                block: Block::TFlat(r.set),
                index,
            })
        })
        .collect()
}

fn offsets(labels: &[BasisLabel]) -> HashMap<Block, usize> {
    let mut out = HashMap::new();
    for (pos, l) in labels.iter().enumerate() {
        out.entry(l.block).or_insert(pos);
    }
    out
}

/// Signed differential `T_n -> T_{n-1}` (`T_{-1} = U_S` when `n = 0`).
fn t_differential<F: Field>(
    rep: &Representation<F>,
    mult: &Multiplicities<F>,
    n: usize,
    source: &[BasisLabel],
    target: &[BasisLabel],
) -> Matrix<F> {
    let f = rep.field();
    let src_off = offsets(source);
    let tgt_off = offsets(target);
    let mut pairs = Vec::new();
    for rec in rep.t_flats().level(n) {
        if mult.dim(rec.set) == 0 {
            continue;
        }
        if n == 0 {
            pairs.extend(rec.set.iter().map(|a| (rec.set, ElementSet::singleton(a))));
        } else {
            pairs.extend(
                rep.t_flats()
                    .level(n - 1)
                    .iter()
                    .filter(|low| low.set.is_subset(rec.set) && mult.dim(low.set) > 0)
                    .map(|low| (rec.set, low.set)),
            );
        }
    }
    let blocks = par::map(&pairs, |&(i, j)| phi_ij(rep, mult, i, j).expect("valid block"));
    let mut d = Matrix::zeros(f, target.len(), source.len());
    for ((i, j), block) in pairs.iter().zip(blocks) {
        let sign = f.pow_sign(j.len() % 2 == 1);
        let c0 = src_off[&Block::TFlat(*i)];
        let tkey = if n == 0 {
            Block::Element(j.first().expect("singleton"))
        } else {
            Block::TFlat(*j)
        };
        let r0 = tgt_off[&tkey];
        for r in 0..block.rows() {
            for c in 0..block.cols() {
                let v = block.get(r, c);
                if !f.is_zero(v) {
                    d.set(r0 + r, c0 + c, f.mul(&sign, v));
                }
            }
        }
    }
    d
}

fn element_labels(n: usize) -> Vec<BasisLabel> {
    (0..n)
        .map(|a| BasisLabel {
            block: Block::Element(a),
            index: 0,
        })
        .collect()
}

fn ambient_labels(w: usize) -> Vec<BasisLabel> {
    (0..w)
        .map(|index| BasisLabel {
            block: Block::Ambient,
            index,
        })
        .collect()
}

/// `T(φ)` with indices `0..=λ` (empty when `S` is independent).
pub fn build_t_with<F: Field>(rep: &Representation<F>, mult: &Multiplicities<F>) -> VectorSpaceComplex<F> {
    let lam = lambda(rep);
    if lam < 0 {
        return VectorSpaceComplex::empty(rep.field());
    }
    let components: Vec<Vec<BasisLabel>> =
        (0..=lam as usize).map(|n| tflat_labels(rep, mult, n)).collect();
    let differentials = (1..components.len())
        .map(|n| t_differential(rep, mult, n, &components[n], &components[n - 1]))
        .collect();
    VectorSpaceComplex::new(rep.field(), components, differentials).expect("consistent shapes")
}

pub fn build_t<F: Field>(rep: &Representation<F>) -> VectorSpaceComplex<F> {
    build_t_with(rep, &Multiplicities::new(rep))
}

/// The augmentation `φ_0: T_0 -> U_S` with its signs.
pub fn augmentation<F: Field>(rep: &Representation<F>, mult: &Multiplicities<F>) -> Matrix<F> {
    let source = tflat_labels(rep, mult, 0);
    t_differential(rep, mult, 0, &source, &element_labels(rep.ground_size()))
}

/// `T(φ)^+`: `W <- U_S <- T_0 <- … <- T_λ`.
pub fn build_t_plus_with<F: Field>(rep: &Representation<F>, mult: &Multiplicities<F>) -> VectorSpaceComplex<F> {
    let t = build_t_with(rep, mult);
    let mut components = vec![ambient_labels(rep.w_dim()), element_labels(rep.ground_size())];
    let mut differentials = vec![rep.phi().clone()];
    if !t.is_empty() {
        differentials.push(augmentation(rep, mult));
        components.extend(t.components);
        differentials.extend(t.differentials);
    }
    VectorSpaceComplex::new(rep.field(), components, differentials).expect("consistent shapes")
}

pub fn build_t_plus<F: Field>(rep: &Representation<F>) -> VectorSpaceComplex<F> {
    build_t_plus_with(rep, &Multiplicities::new(rep))
}

/// The blocks of `T(φ)` indexed by T-flats inside `Y`, labels in the parent
/// ground set.
pub fn restrict_complex<F: Field>(rep: &Representation<F>, mult: &Multiplicities<F>, y: ElementSet) -> VectorSpaceComplex<F> {
    let t = build_t_with(rep, mult);
    restrict_built(&t, y)
}

fn restrict_built<F: Field>(t: &VectorSpaceComplex<F>, y: ElementSet) -> VectorSpaceComplex<F> {
    t.sub_complex(|l| match l.block {
        Block::TFlat(set) => set.is_subset(y),
        _ => false,
    })
    .trimmed()
}

/// Relabels a complex built on a minor into parent indices.
pub fn lift_labels<F: Field>(c: &VectorSpaceComplex<F>, embed: &[usize]) -> VectorSpaceComplex<F> {
    let map = |l: &BasisLabel| BasisLabel {
        block: match l.block {
            Block::TFlat(s) => Block::TFlat(ElementSet::from_indices(s.iter().map(|i| embed[i]))),
            Block::Element(a) => Block::Element(embed[a]),
            Block::Ambient => Block::Ambient,
        },
        index: l.index,
    };
    VectorSpaceComplex {
        field: c.field.clone(),
        components: c
            .components
            .iter()
            .map(|comp| comp.iter().map(map).collect())
            .collect(),
        differentials: c.differentials.clone(),
    }
}

/// One summand of `T(φ)` per connected component of `S`, labels in the
/// parent ground set.
pub fn direct_sum_split<F: Field>(rep: &Representation<F>, mult: &Multiplicities<F>) -> Vec<(ElementSet, VectorSpaceComplex<F>)> {
    let t = build_t_with(rep, mult);
    rep.connected_components(rep.ground_set())
        .into_iter()
        .map(|c| (c, restrict_built(&t, c)))
        .filter(|(_, c)| !c.is_empty())
        .collect()
}

/// Checks that `T(φ)` is the direct sum of the summands: every basis vector
/// lies in exactly one summand and no differential entry crosses summands.
pub fn verify_direct_sum<F: Field>(rep: &Representation<F>, mult: &Multiplicities<F>) -> Report {
    let t = build_t_with(rep, mult);
    let comps = rep.connected_components(rep.ground_set());
    let owner = |l: &BasisLabel| match l.block {
        Block::TFlat(set) => comps.iter().position(|c| set.is_subset(*c)),
        _ => None,
    };
    let mut report = Report::default();
    let mut stray = Vec::new();
    for k in 0..t.len() {
        for l in t.labels(k) {
            if owner(l).is_none() {
                stray.push(format!("{} in degree {k}", rep.render_set(match l.block {
                    Block::TFlat(s) => s,
                    _ => ElementSet::EMPTY,
                })));
            }
        }
    }
    report.push(
        "direct-sum-blocks",
        stray.is_empty(),
        if stray.is_empty() {
            format!("{} connected components, every block inside one", comps.len())
        } else {
            format!("blocks meeting several components: {}", stray.join(", "))
        },
    );
    let mut crossing = Vec::new();
    for k in 1..t.len() {
        let d = t.differential(k).expect("in range");
        for (c, src) in t.labels(k).iter().enumerate() {
            for (r, tgt) in t.labels(k - 1).iter().enumerate() {
                if !rep.field().is_zero(d.get(r, c)) && owner(src) != owner(tgt) {
                    crossing.push(format!("d_{k}[{r},{c}]"));
                }
            }
        }
    }
    report.push(
        "direct-sum-differentials",
        crossing.is_empty(),
        if crossing.is_empty() {
            "no differential entry crosses components".to_string()
        } else {
            format!("crossing entries: {}", crossing.join(", "))
        },
    );
    report
}

/// Complex property, exactness of `T(φ)^+` and `T(φ)`, the augmentation
/// identity `im φ_0 = Ker φ`, and injectivity of `φ_n` on each block.
pub fn verify_acyclic<F: Field>(rep: &Representation<F>, mult: &Multiplicities<F>) -> Report {
    let mut report = Report::default();
    let t = build_t_with(rep, mult);
    let tp = build_t_plus_with(rep, mult);

    for (name, c) in [("T", &t), ("T+", &tp)] {
        let bad = c.composition_failures();
        report.push(
            format!("complex-property[{name}]"),
            bad.is_empty(),
            if bad.is_empty() {
                format!("d∘d = 0 across {} components", c.len())
            } else {
                format!("d_(k-1)∘d_k ≠ 0 at k ∈ {bad:?}")
            },
        );
    }

    let hp = tp.homology();
    let nonzero: Vec<_> = hp
        .entries
        .iter()
        .filter(|e| e.index >= 1 && e.homology != 0)
        .map(|e| format!("H_{} = {}", e.index, e.homology))
        .collect();
    report.push(
        "augmented-exact",
        nonzero.is_empty(),
        if nonzero.is_empty() {
            format!("dims {:?}, ranks {:?}", tp.dims(), hp.ranks())
        } else {
            nonzero.join(", ")
        },
    );
    let rank_phi = rep.rank(rep.ground_set());
    let h0 = hp.homology(0);
    report.push(
        "augmented-h0",
        h0 == (rep.w_dim() - rank_phi) as i64,
        format!("dim H_0 = {h0}, dim W - rank φ = {}", rep.w_dim() - rank_phi),
    );

    if !t.is_empty() {
        let ht = t.homology();
        let nonzero: Vec<_> = ht
            .entries
            .iter()
            .filter(|e| e.index >= 1 && e.homology != 0)
            .map(|e| format!("H_{} = {}", e.index, e.homology))
            .collect();
        report.push(
            "t-complex-exact",
            nonzero.is_empty(),
            if nonzero.is_empty() {
                format!("dims {:?}", t.dims())
            } else {
                nonzero.join(", ")
            },
        );
        let kernel_dim = rep.ground_size() - rank_phi;
        report.push(
            "t-complex-h0",
            ht.homology(0) == kernel_dim as i64,
            format!("dim H_0 = {}, dim Ker φ = {kernel_dim}", ht.homology(0)),
        );
        let phi0 = augmentation(rep, mult);
        let rank0 = phi0.rank();
        let rank1 = ht.entries.get(1).map_or(0, |e| e.rank_out);
        let image = Subspace::column_space(&phi0);
        let kernel = rep.phi().kernel();
        report.push(
            "augmentation-image",
            rank0 == t.dim(0) - rank1 && image.same_as(&kernel),
            format!("rank φ_0 = {rank0}, im φ_0 = Ker φ: {}", image.same_as(&kernel)),
        );
    } else {
        let injective = rank_phi == rep.ground_size();
        report.push(
            "t-complex-exact",
            injective,
            "T is empty; φ injective".to_string(),
        );
    }

    let mut not_injective = Vec::new();
    for k in 1..t.len() {
        let d = t.differential(k).expect("in range");
        for rec in rep.t_flats().level(k) {
            let cols: Vec<usize> = t
                .labels(k)
                .iter()
                .enumerate()
                .filter(|(_, l)| l.block == Block::TFlat(rec.set))
                .map(|(i, _)| i)
                .collect();
            if d.select_columns(&cols).rank() != cols.len() {
                not_injective.push(rep.render_set(rec.set));
            }
        }
    }
    report.push(
        "block-injective",
        not_injective.is_empty(),
        if not_injective.is_empty() {
            "φ_n is injective on every block T_I".to_string()
        } else {
            format!("not injective on {}", not_injective.join(", "))
        },
    );
    report
}

/// Checks that need nothing but the complex: `d∘d = 0` and vanishing
/// homology in every index `≥ 1`.
pub fn structural_checks<F: Field>(c: &VectorSpaceComplex<F>) -> Report {
    let mut report = Report::default();
    let bad = c.composition_failures();
    report.push(
        "complex-property",
        bad.is_empty(),
        if bad.is_empty() {
            format!("d∘d = 0 across {} components", c.len())
        } else {
            format!("d_(k-1)∘d_k ≠ 0 at k ∈ {bad:?}")
        },
    );
    let h = c.homology();
    let nonzero: Vec<_> = h
        .entries
        .iter()
        .filter(|e| e.index >= 1 && e.homology != 0)
        .map(|e| format!("H_{} = {}", e.index, e.homology))
        .collect();
    report.push(
        "exact-above-zero",
        nonzero.is_empty(),
        if nonzero.is_empty() {
            format!("dims {:?}, dim H_0 = {}", c.dims(), h.homology(0))
        } else {
            nonzero.join(", ")
        },
    );
    report
}

/// Nonzero diagonal matrices realizing a chain equivalence
/// `theirs_k = D_{k-1} · ours_k · D_k⁻¹` for all `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalEquivalence<F: Field> {
    /// `diagonals[k]` rescales component `k` (source of `d_k`'s target).
    pub diagonals: Vec<Vec<F::Elem>>,
}

/// Decides diagonal equivalence of two chains of matrices `d_1, d_2, …`
/// (`d_k: C_k -> C_{k-1}`). Zero patterns must agree; the scale factors are
/// propagated across nonzero entries and checked for consistency.
pub fn diagonal_equivalence<F: Field>(
    field: &F,
    ours: &[Matrix<F>],
    theirs: &[Matrix<F>],
) -> std::result::Result<DiagonalEquivalence<F>, String> {
    if ours.len() != theirs.len() {
        return Err(format!("{} vs {} matrices", ours.len(), theirs.len()));
    }
    if ours.is_empty() {
        return Ok(DiagonalEquivalence { diagonals: vec![] });
    }
    let mut sizes = vec![ours[0].rows()];
    for (k, (a, b)) in ours.iter().zip(theirs).enumerate() {
        if a.shape() != b.shape() {
            return Err(format!("d_{} shapes {:?} vs {:?}", k + 1, a.shape(), b.shape()));
        }
        if a.rows() != sizes[k] {
            return Err(format!("d_{} does not chain", k + 1));
        }
        sizes.push(a.cols());
    }
    // node (k, i): basis vector i of component k
    let mut scale: Vec<Vec<Option<F::Elem>>> = sizes.iter().map(|&n| vec![None; n]).collect();
    for k0 in 0..sizes.len() {
        for i0 in 0..sizes[k0] {
            if scale[k0][i0].is_some() {
                continue;
            }
            scale[k0][i0] = Some(field.one());
            let mut queue = VecDeque::from([(k0, i0)]);
            while let Some((k, i)) = queue.pop_front() {
                let s = scale[k][i].clone().expect("assigned");
                let mut edges = Vec::new();
                // as row of d_{k+1}: theirs = D_k[i] ours / D_{k+1}[j]
                if k + 1 < sizes.len() {
                    let (a, b) = (&ours[k], &theirs[k]);
                    for j in 0..a.cols() {
                        let (o, t) = (a.get(i, j), b.get(i, j));
                        if field.is_zero(o) != field.is_zero(t) {
                            return Err(format!("zero pattern differs at d_{}[{i},{j}]", k + 1));
                        }
                        if !field.is_zero(o) {
                            let v = field.div(&field.mul(&s, o), t).expect("nonzero");
                            edges.push((k + 1, j, v));
                        }
                    }
                }
                // as column of d_k: D_{k-1}[r] = theirs · D_k[i] / ours
                if k >= 1 {
                    let (a, b) = (&ours[k - 1], &theirs[k - 1]);
                    for r in 0..a.rows() {
                        let (o, t) = (a.get(r, i), b.get(r, i));
                        if field.is_zero(o) != field.is_zero(t) {
                            return Err(format!("zero pattern differs at d_{k}[{r},{i}]"));
                        }
                        if !field.is_zero(o) {
                            let v = field.div(&field.mul(t, &s), o).expect("nonzero");
                            edges.push((k - 1, r, v));
                        }
                    }
                }
                for (kk, ii, v) in edges {
                    match &scale[kk][ii] {
                        Some(existing) if *existing != v => {
                            return Err(format!(
                                "inconsistent scaling of basis vector {ii} in component {kk}"
                            ));
                        }
                        Some(_) => {}
                        None => {
                            scale[kk][ii] = Some(v);
                            queue.push_back((kk, ii));
                        }
                    }
                }
            }
        }
    }
    Ok(DiagonalEquivalence {
        diagonals: scale
            .into_iter()
            .map(|c| c.into_iter().map(|x| x.expect("assigned")).collect())
            .collect(),
    })
}
