//! Multiplicity spaces `S_I(φ) ⊆ S_n W`, the multiplication maps `ν`
//! with their duals, and the contraction maps `π_{Y,A}`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Matrix, Subspace};
use crate::matroid::{ElementSet, Representation};
use crate::par;
use crate::sym::{sym_multiply, sym_power_map, SymCoords};

/// A maximal chain `I⁽⁰⁾ ⊊ … ⊊ I⁽ⁿ⁾` of T-flats, `I⁽ᵏ⁾` of level `k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TChain {
    pub flats: Vec<ElementSet>,
}

/// `S_I(φ)` with its ambient symmetric power.
#[derive(Clone, Debug)]
pub struct MultiplicitySpace<F: Field> {
    pub set: ElementSet,
    pub level: usize,
    pub ambient: SymCoords,
    pub basis: Subspace<F>,
    /// Chain vectors, filled only on request.
    pub generators: Option<Vec<(TChain, Vec<F::Elem>)>>,
}

impl<F: Field> MultiplicitySpace<F> {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }
}

/// All multiplicity spaces of a representation, built level by level.
#[derive(Clone, Debug)]
pub struct Multiplicities<F: Field> {
    field: F,
    w_dim: usize,
    coords: Vec<SymCoords>,
    spaces: HashMap<ElementSet, Subspace<F>>,
    levels: HashMap<ElementSet, usize>,
}

/// Canonical generator of the line `V_J ∩ V_{I∖J}` (`None` when it is 0).
pub fn meet_line<F: Field>(rep: &Representation<F>, i: ElementSet, j: ElementSet) -> Option<Vec<F::Elem>> {
    let l = rep
        .span(j)
        .meet(&rep.span(i.minus(j)))
        .expect("same ambient space");
    match l.dim() {
        0 => None,
        1 => Some(l.basis_vector(0)),
        d => panic!(
            "intersection V_J ∩ V_(I∖J) of dimension {d} for I={:?}, J={:?}",
            i, j
        ),
    }
}

impl<F: Field> Multiplicities<F> {
    pub fn new(rep: &Representation<F>) -> Self {
        let field = rep.field().clone();
        let w = rep.w_dim();
        let t = rep.t_flats();
        let top = t.max_level().map_or(0, |m| m + 1);
        let coords: Vec<SymCoords> = (0..top.max(1)).map(|n| SymCoords::new(w, n)).collect();
        let mut spaces: HashMap<ElementSet, Subspace<F>> = HashMap::new();
        let mut levels = HashMap::new();
        for (n, recs) in t.levels().iter().enumerate() {
            let computed = par::map(recs, |rec| {
                if n == 0 {
                    return Subspace::full(&field, 1);
                }
                let mut gens = Vec::new();
                for low in t.level(n - 1) {
                    if !low.set.is_subset(rec.set) {
                        continue;
                    }
                    let Some(line) = meet_line(rep, rec.set, low.set) else {
                        continue;
                    };
                    let sj = &spaces[&low.set];
                    for r in 0..sj.dim() {
                        gens.push(sym_multiply(
                            &field,
                            &coords[1],
                            &line,
                            &coords[n - 1],
                            sj.basis().row(r),
                            &coords[n],
                        ));
                    }
                }
                Subspace::span(&field, coords[n].dim(), gens)
            });
            for (rec, space) in recs.iter().zip(computed) {
                spaces.insert(rec.set, space);
                levels.insert(rec.set, n);
            }
        }
        Multiplicities {
            field,
            w_dim: w,
            coords,
            spaces,
            levels,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn w_dim(&self) -> usize {
        self.w_dim
    }

    pub fn coords(&self, n: usize) -> SymCoords {
        self.coords
            .get(n)
            .cloned()
            .unwrap_or_else(|| SymCoords::new(self.w_dim, n))
    }

    /// `S_I(φ)`; the zero space of `S_0 W` for sets that are not T-flats.
    pub fn space(&self, set: ElementSet) -> Subspace<F> {
        match self.spaces.get(&set) {
            Some(s) => s.clone(),
            None => Subspace::zero(&self.field, 1),
        }
    }

    pub fn space_ref(&self, set: ElementSet) -> Option<&Subspace<F>> {
        self.spaces.get(&set)
    }

    pub fn dim(&self, set: ElementSet) -> usize {
        self.spaces.get(&set).map_or(0, |s| s.dim())
    }

    pub fn level(&self, set: ElementSet) -> Option<usize> {
        self.levels.get(&set).copied()
    }

    pub fn multiplicity_space(&self, set: ElementSet) -> MultiplicitySpace<F> {
        let level = self.level(set).unwrap_or(0);
        MultiplicitySpace {
            set,
            level,
            ambient: self.coords(level),
            basis: self.space(set),
            generators: None,
        }
    }

    /// Matrix of `ν: (V_J ∩ V_{I∖J}) ⊗ S_J -> S_I` from the `S_J` basis to
    /// the `S_I` basis.
    pub fn nu_matrix(&self, rep: &Representation<F>, i: ElementSet, j: ElementSet) -> Result<Matrix<F>> {
        let (Some(li), Some(lj)) = (self.level(i), self.level(j)) else {
            return Err(Error::Precondition(format!(
                "{} and {} must both be T-flats",
                rep.render_set(i),
                rep.render_set(j)
            )));
        };
        if li == 0 || lj + 1 != li || !j.is_subset(i) || i == j {
            return Err(Error::Precondition(format!(
                "{} (level {lj}) is not a level-{} T-flat inside {}",
                rep.render_set(j),
                li as i64 - 1,
                rep.render_set(i)
            )));
        }
        let si = &self.spaces[&i];
        let sj = &self.spaces[&j];
        let mut m = Matrix::zeros(&self.field, si.dim(), sj.dim());
        if let Some(line) = meet_line(rep, i, j) {
            for c in 0..sj.dim() {
                let prod = sym_multiply(
                    &self.field,
                    &self.coords[1],
                    &line,
                    &self.coords[lj],
                    sj.basis().row(c),
                    &self.coords[li],
                );
                let coords = si
                    .coordinates(&prod)
                    .expect("ν lands in the multiplicity space");
                for (r, v) in coords.into_iter().enumerate() {
                    m.set(r, c, v);
                }
            }
        }
        Ok(m)
    }

    /// `Δ: S_I* -> (V_J ∩ V_{I∖J})* ⊗ S_J*` in the dual bases: the
    /// transpose of [`Multiplicities::nu_matrix`].
    pub fn diagonal_matrix(&self, rep: &Representation<F>, i: ElementSet, j: ElementSet) -> Result<Matrix<F>> {
        Ok(self.nu_matrix(rep, i, j)?.transpose())
    }
}

/// All maximal chains of T-flats ending at `I`, in lexicographic order.
pub fn chains<F: Field>(rep: &Representation<F>, i: ElementSet) -> Result<Vec<TChain>> {
    let t = rep.t_flats();
    let rec = t
        .get(i)
        .ok_or_else(|| Error::NotATFlat(rep.render_set(i)))?;
    let mut out = Vec::new();
    let mut stack = vec![i];
    collect_chains(rep, rec.level, &mut stack, &mut out);
    out.sort();
    Ok(out)
}

fn collect_chains<F: Field>(
    rep: &Representation<F>,
    level: usize,
    stack: &mut Vec<ElementSet>,
    out: &mut Vec<TChain>,
) {
    if level == 0 {
        let mut flats = stack.clone();
        flats.reverse();
        out.push(TChain { flats });
        return;
    }
    let top = *stack.last().expect("nonempty chain");
    for low in rep.t_flats().level(level - 1) {
        if low.set.is_subset(top) {
            stack.push(low.set);
            collect_chains(rep, level - 1, stack, out);
            stack.pop();
        }
    }
}

/// Product of the canonical generators along a chain (`1` for a circuit).
pub fn chain_vector<F: Field>(rep: &Representation<F>, chain: &TChain) -> Vec<F::Elem> {
    let f = rep.field();
    let w = rep.w_dim();
    let lin = SymCoords::new(w, 1);
    let mut acc = vec![f.one()];
    for k in 1..chain.flats.len() {
        let (lo, hi) = (chain.flats[k - 1], chain.flats[k]);
        let next = SymCoords::new(w, k);
        match meet_line(rep, hi, lo) {
            Some(line) => {
                acc = sym_multiply(f, &SymCoords::new(w, k - 1), &acc, &lin, &line, &next);
            }
            None => return vec![f.zero(); next.dim()],
        }
    }
    acc
}

/// `S_I(φ)` together with every chain and its vector.
pub fn multiplicity_space_with_chains<F: Field>(
    rep: &Representation<F>,
    mult: &Multiplicities<F>,
    i: ElementSet,
) -> Result<MultiplicitySpace<F>> {
    let mut space = mult.multiplicity_space(i);
    let gens = chains(rep, i)?
        .into_iter()
        .map(|c| {
            let v = chain_vector(rep, &c);
            (c, v)
        })
        .collect();
    space.generators = Some(gens);
    Ok(space)
}

/// Matrix of `π_{Y,A}: S_B(φ) -> S_A(φ.Y)`.
#[derive(Clone, Debug)]
pub struct ContractionProjection<F: Field> {
    pub y: ElementSet,
    /// Parent-indexed.
    pub a: ElementSet,
    pub b: ElementSet,
    pub level: usize,
    pub matrix: Matrix<F>,
    pub source_dim: usize,
    pub target_dim: usize,
    pub surjective: bool,
}

/// `A` is given with parent indices and must be a T-flat of the contraction
/// to `Y`; `S∖Y` must be independent.
pub fn contraction_projection<F: Field>(
    rep: &Representation<F>,
    mult: &Multiplicities<F>,
    y: ElementSet,
    a: ElementSet,
) -> Result<ContractionProjection<F>> {
    let f = rep.field();
    if !rep.is_independent(rep.ground_set().minus(y)) {
        return Err(Error::Precondition(format!(
            "complement of {} is dependent",
            rep.render_set(y)
        )));
    }
    if !a.is_subset(y) {
        return Err(Error::Precondition(format!(
            "{} is not inside {}",
            rep.render_set(a),
            rep.render_set(y)
        )));
    }
    let minor = rep.contract(y)?;
    let a_minor = minor.lower(a);
    let level = minor
        .derived
        .t_flats()
        .get(a_minor)
        .map(|r| r.level)
        .ok_or_else(|| Error::NotATFlat(format!("{} in the contraction", rep.render_set(a))))?;
    let b = rep.b_of(y, a);
    if mult.level(b) != Some(level) {
        return Err(Error::Precondition(format!(
            "{} is not a level-{level} T-flat",
            rep.render_set(b)
        )));
    }
    let minor_mult = Multiplicities::new(&minor.derived);
    let target = minor_mult.space(a_minor);
    let source = mult.space(b);
    let src_coords = mult.coords(level);
    let dst_coords = SymCoords::new(minor.derived.w_dim(), level);
    let images: Vec<Vec<F::Elem>> = (0..rep.w_dim())
        .map(|i| minor.projection.column(i))
        .collect();
    let mut matrix = Matrix::zeros(f, target.dim(), source.dim());
    for c in 0..source.dim() {
        let img = sym_power_map(f, &src_coords, &dst_coords, &images, source.basis().row(c));
        let coords = target.coordinates(&img).ok_or_else(|| {
            Error::Precondition(format!(
                "π maps S_{} outside S_{} of the contraction",
                rep.render_set(b),
                rep.render_set(a)
            ))
        })?;
        for (r, v) in coords.into_iter().enumerate() {
            matrix.set(r, c, v);
        }
    }
    let surjective = matrix.rank() == target.dim();
    Ok(ContractionProjection {
        y,
        a,
        b,
        level,
        source_dim: source.dim(),
        target_dim: target.dim(),
        matrix,
        surjective,
    })
}

/// Outcome of checking `0 -> S_A ⊗ V_a -> S_B -> S_A(φ.S_a) -> 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceReport {
    pub element: usize,
    pub a: ElementSet,
    pub b: ElementSet,
    pub dim_a: usize,
    pub dim_b: usize,
    pub dim_contracted: usize,
    pub composite_zero: bool,
    pub nu_injective: bool,
    pub pi_surjective: bool,
    pub exact_middle: bool,
}

impl SequenceReport {
    pub fn passed(&self) -> bool {
        self.composite_zero
            && self.nu_injective
            && self.pi_surjective
            && self.exact_middle
            && self.dim_b == self.dim_a + self.dim_contracted
    }
}

/// Exactness of the multiplicity sequence for an element `a` whose
/// singleton is a T-part of `B`.
pub fn check_multiplicity_sequence<F: Field>(
    rep: &Representation<F>,
    mult: &Multiplicities<F>,
    element: usize,
    a: ElementSet,
) -> Result<SequenceReport> {
    let single = rep.subset(&[element])?;
    if !rep.is_independent(single) {
        return Err(Error::Precondition(format!(
            "element {} is a loop",
            rep.labels()[element]
        )));
    }
    let y = rep.ground_set().without(element);
    let b = rep.b_of(y, a);
    let is_part = rep
        .t_flats()
        .get(b)
        .is_some_and(|r| r.level > 0 && r.t_parts.contains(&single));
    if !is_part {
        return Err(Error::Precondition(format!(
            "{{{}}} is not a T-part of {}",
            rep.labels()[element],
            rep.render_set(b)
        )));
    }
    let pi = contraction_projection(rep, mult, y, a)?;
    let nu = mult.nu_matrix(rep, b, a)?;
    let composite_zero = pi.matrix.mul(&nu)?.is_zero();
    let rank_nu = nu.rank();
    let rank_pi = pi.matrix.rank();
    Ok(SequenceReport {
        element,
        a,
        b,
        dim_a: mult.dim(a),
        dim_b: mult.dim(b),
        dim_contracted: pi.target_dim,
        composite_zero,
        nu_injective: rank_nu == nu.cols(),
        pi_surjective: pi.surjective,
        exact_middle: pi.source_dim - rank_pi == rank_nu,
    })
}

/// The other branch: when `{a}` is not a T-part of `B`, `π_{S_a,A}` is an
/// isomorphism. Returns the projection; callers inspect its rank.
pub fn check_projection_isomorphism<F: Field>(
    rep: &Representation<F>,
    mult: &Multiplicities<F>,
    element: usize,
    a: ElementSet,
) -> Result<ContractionProjection<F>> {
    let y = rep.ground_set().without(element);
    contraction_projection(rep, mult, y, a)
}
