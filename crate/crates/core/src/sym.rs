//! Coordinates on symmetric powers `S_n W` of a coordinate space `W = k^w`.
//!
//! Monomials of degree `n` in `w` variables are listed in decreasing
//! lexicographic order of their exponent vectors, so that `S_1 W` has the
//! same coordinates as `W` (`γ_1, γ_2, ...`).

use std::collections::HashMap;

use crate::field::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymCoords {
    w_dim: usize,
    degree: usize,
    monomials: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl SymCoords {
    pub fn new(w_dim: usize, degree: usize) -> Self {
        let mut monomials = Vec::new();
        let mut current = vec![0u32; w_dim];
        fill(&mut monomials, &mut current, 0, degree as u32);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        SymCoords {
            w_dim,
            degree,
            monomials,
            index,
        }
    }

    pub fn w_dim(&self) -> usize {
        self.w_dim
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn dim(&self) -> usize {
        self.monomials.len()
    }
    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monomials
    }
    pub fn monomial(&self, i: usize) -> &[u32] {
        &self.monomials[i]
    }
    pub fn position(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(exps).copied()
    }

    /// Human-readable form of a vector, e.g. `g1^2 + 2*g1*g2`.
    pub fn render<F: Field>(&self, field: &F, v: &[F::Elem]) -> String {
        let mut terms = Vec::new();
        for (c, m) in v.iter().zip(&self.monomials) {
            if field.is_zero(c) {
                continue;
            }
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("g{}", i + 1)
                    } else {
                        format!("g{}^{e}", i + 1)
                    }
                })
                .collect();
            let coeff = field.render(c);
            terms.push(match (mono.is_empty(), field.is_one(c)) {
                (true, _) => coeff,
                (false, true) => mono.join("*"),
                (false, false) => format!("{coeff}*{}", mono.join("*")),
            });
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

fn fill(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, pos: usize, left: u32) {
    if pos == current.len() {
        if left == 0 {
            out.push(current.clone());
        }
        return;
    }
    if pos + 1 == current.len() {
        current[pos] = left;
        out.push(current.clone());
        current[pos] = 0;
        return;
    }
    for e in (0..=left).rev() {
        current[pos] = e;
        fill(out, current, pos + 1, left - e);
    }
    current[pos] = 0;
}

/// Product in the symmetric algebra: `u ∈ S_p W`, `v ∈ S_q W`, result in
/// `out = S_{p+q} W`.
pub fn sym_multiply<F: Field>(
    field: &F,
    a: &SymCoords,
    u: &[F::Elem],
    b: &SymCoords,
    v: &[F::Elem],
    out: &SymCoords,
) -> Vec<F::Elem> {
    assert_eq!(a.w_dim, b.w_dim, "symmetric powers of different spaces");
    assert_eq!(out.w_dim, a.w_dim, "symmetric powers of different spaces");
    assert_eq!(out.degree, a.degree + b.degree, "wrong target degree");
    assert_eq!(u.len(), a.dim());
    assert_eq!(v.len(), b.dim());
    let mut res = vec![field.zero(); out.dim()];
    let mut exps = vec![0u32; a.w_dim];
    for (i, x) in u.iter().enumerate() {
        if field.is_zero(x) {
            continue;
        }
        for (j, y) in v.iter().enumerate() {
            if field.is_zero(y) {
                continue;
            }
            for (k, e) in exps.iter_mut().enumerate() {
                *e = a.monomials[i][k] + b.monomials[j][k];
            }
            let pos = out.index[&exps];
            res[pos] = field.mul_add(&res[pos], x, y);
        }
    }
    res
}

/// Applies the map `S_n W -> S_n W'` induced by a linear map `W -> W'`
/// given by the images of the coordinate vectors `γ_i` (each in `W' = S_1 W'`).
pub fn sym_power_map<F: Field>(
    field: &F,
    src: &SymCoords,
    dst: &SymCoords,
    images: &[Vec<F::Elem>],
    v: &[F::Elem],
) -> Vec<F::Elem> {
    assert_eq!(images.len(), src.w_dim, "one image per coordinate");
    assert_eq!(src.degree, dst.degree, "degree must be preserved");
    let lin = SymCoords::new(dst.w_dim, 1);
    let mut powers: Vec<SymCoords> = vec![SymCoords::new(dst.w_dim, 0)];
    for d in 1..=src.degree {
        powers.push(SymCoords::new(dst.w_dim, d));
    }
    let mut res = vec![field.zero(); dst.dim()];
    for (c, m) in v.iter().zip(&src.monomials) {
        if field.is_zero(c) {
            continue;
        }
        let mut acc = vec![field.one()];
        let mut deg = 0;
        for (i, &e) in m.iter().enumerate() {
            for _ in 0..e {
                acc = sym_multiply(field, &powers[deg], &acc, &lin, &images[i], &powers[deg + 1]);
                deg += 1;
            }
        }
        for (r, x) in res.iter_mut().zip(&acc) {
            *r = field.mul_add(r, c, x);
        }
    }
    res
}
