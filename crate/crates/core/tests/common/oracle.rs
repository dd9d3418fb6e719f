//! Brute-force reference implementations. Nothing here calls the library's
//! linear algebra, matroid or multiplicity code; only field arithmetic is
//! shared.

use std::collections::BTreeMap;

use tresolve::Field;

pub type Vector<F> = Vec<<F as Field>::Elem>;

/// Rank of a list of vectors by plain Gaussian elimination.
pub fn rank<F: Field>(f: &F, vectors: &[Vector<F>]) -> usize {
    echelon(f, vectors).len()
}

/// Nonzero rows of an echelon form of `vectors`.
pub fn echelon<F: Field>(f: &F, vectors: &[Vector<F>]) -> Vec<Vector<F>> {
    let mut rows: Vec<Vector<F>> = vectors.to_vec();
    let width = rows.first().map_or(0, |r| r.len());
    let mut done = 0;
    for col in 0..width {
        let Some(p) = (done..rows.len()).find(|&i| !f.is_zero(&rows[i][col])) else {
            continue;
        };
        rows.swap(done, p);
        let inv = f.inv(&rows[done][col]).unwrap();
        for i in 0..rows.len() {
            if i != done && !f.is_zero(&rows[i][col]) {
                let factor = f.mul(&rows[i][col], &inv);
                for c in 0..width {
                    let t = f.mul(&factor, &rows[done][c]);
                    rows[i][c] = f.sub(&rows[i][c], &t);
                }
            }
        }
        done += 1;
    }
    rows.truncate(done);
    rows
}

/// Basis of `{x : Σ x_i v_i = 0}` for the given vectors `v_i`.
pub fn relations<F: Field>(f: &F, vectors: &[Vector<F>]) -> Vec<Vector<F>> {
    let n = vectors.len();
    let dim = vectors.first().map_or(0, |v| v.len());
    // rows of the transposed system: one equation per coordinate
    let mut eqs: Vec<Vector<F>> = (0..dim)
        .map(|c| vectors.iter().map(|v| v[c].clone()).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..eqs.len()).find(|&i| !f.is_zero(&eqs[i][col])) else {
            continue;
        };
        eqs.swap(r, p);
        let inv = f.inv(&eqs[r][col]).unwrap();
        for c in 0..n {
            eqs[r][c] = f.mul(&eqs[r][c], &inv);
        }
        for i in 0..eqs.len() {
            if i != r && !f.is_zero(&eqs[i][col]) {
                let factor = eqs[i][col].clone();
                for c in 0..n {
                    let t = f.mul(&factor, &eqs[r][c]);
                    eqs[i][c] = f.sub(&eqs[i][c], &t);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut x = vec![f.zero(); n];
            x[fc] = f.one();
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = f.neg(&eqs[row][fc]);
            }
            x
        })
        .collect()
}

/// A vector spanning `span(a) ∩ span(b)` when that intersection is a
/// line, `None` when it is zero. Panics on larger intersections.
pub fn meet_line<F: Field>(f: &F, a: &[Vector<F>], b: &[Vector<F>], w: usize) -> Option<Vector<F>> {
    let mut all: Vec<Vector<F>> = a.to_vec();
    all.extend(b.iter().map(|v| v.iter().map(|x| f.neg(x)).collect()));
    let mut images = Vec::new();
    for x in relations(f, &all) {
        let mut v = vec![f.zero(); w];
        for (i, col) in a.iter().enumerate() {
            for (t, c) in col.iter().enumerate() {
                v[t] = f.add(&v[t], &f.mul(&x[i], c));
            }
        }
        images.push(v);
    }
    let basis = echelon(f, &images);
    assert!(basis.len() <= 1, "intersection of dimension {}", basis.len());
    basis.into_iter().next()
}

/// Matroid given by its table of independent sets.
pub struct OracleMatroid {
    pub n: usize,
    pub independent: Vec<bool>,
    rank: Vec<usize>,
}

pub fn elements(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask >> i & 1 == 1)
}

fn size(mask: u32) -> usize {
    mask.count_ones() as usize
}

impl OracleMatroid {
    pub fn from_columns<F: Field>(f: &F, columns: &[Vector<F>]) -> Self {
        let n = columns.len();
        let independent: Vec<bool> = (0..1u32 << n)
            .map(|mask| {
                let vs: Vec<Vector<F>> = elements(mask).map(|i| columns[i].clone()).collect();
                rank(f, &vs) == size(mask)
            })
            .collect();
        let mut rank = vec![0; 1 << n];
        for mask in 1..1u32 << n {
            rank[mask as usize] = if independent[mask as usize] {
                size(mask)
            } else {
                elements(mask).map(|e| rank[(mask & !(1 << e)) as usize]).max().unwrap()
            };
        }
        OracleMatroid {
            n,
            independent,
            rank,
        }
    }

    pub fn full(&self) -> u32 {
        (1u32 << self.n) - 1
    }

    pub fn subsets(&self) -> impl Iterator<Item = u32> {
        0..1u32 << self.n
    }

    /// Hereditary and exchange axioms, exhaustively.
    pub fn check_axioms(&self) -> Result<(), String> {
        if !self.independent[0] {
            return Err("empty set dependent".into());
        }
        for y in self.subsets() {
            if !self.independent[y as usize] {
                continue;
            }
            for e in elements(y) {
                if !self.independent[(y & !(1 << e)) as usize] {
                    return Err(format!("{y:b} independent but {:b} not", y & !(1 << e)));
                }
            }
            for x in self.subsets() {
                if self.independent[x as usize] && size(y) == size(x) + 1 {
                    let ok = elements(y & !x).any(|e| self.independent[(x | 1 << e) as usize]);
                    if !ok {
                        return Err(format!("exchange fails for X={x:b}, Y={y:b}"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self, mask: u32) -> usize {
        self.rank[mask as usize]
    }

    pub fn level(&self, mask: u32) -> i64 {
        size(mask) as i64 - self.rank(mask) as i64 - 1
    }

    pub fn dual_rank(&self, mask: u32) -> usize {
        size(mask) + self.rank(self.full() & !mask) - self.rank(self.full())
    }

    pub fn closure(&self, x: u32) -> u32 {
        (0..self.n)
            .filter(|&e| self.rank(x | 1 << e) == self.rank(x))
            .fold(0, |acc, e| acc | 1 << e)
    }

    pub fn dual_closure(&self, x: u32) -> u32 {
        (0..self.n)
            .filter(|&e| self.dual_rank(x | 1 << e) == self.dual_rank(x))
            .fold(0, |acc, e| acc | 1 << e)
    }

    /// Minimal dependent sets in increasing bitmask order.
    pub fn circuits(&self) -> Vec<u32> {
        self.subsets()
            .filter(|&m| {
                !self.independent[m as usize]
                    && elements(m).all(|e| self.independent[(m & !(1 << e)) as usize])
            })
            .collect()
    }

    /// Nonempty sets whose complement is a flat of the dual matroid.
    pub fn t_flats_by_dual_flats(&self) -> Vec<u32> {
        self.subsets()
            .filter(|&a| a != 0 && self.dual_closure(self.full() & !a) == self.full() & !a)
            .collect()
    }

    /// Nonempty unions of circuits.
    pub fn t_flats_by_unions(&self) -> Vec<u32> {
        let circuits = self.circuits();
        let mut sets: Vec<u32> = circuits.clone();
        let mut i = 0;
        while i < sets.len() {
            for &c in &circuits {
                let u = sets[i] | c;
                if !sets.contains(&u) {
                    sets.push(u);
                }
            }
            i += 1;
        }
        sets.sort_unstable();
        sets
    }

    /// Level 0: the circuits; level `n`: sets of level `n` whose level
    /// `n − 1` T-flats have complements partitioning the set.
    pub fn t_flats_inductive(&self) -> Vec<u32> {
        let mut levels: Vec<Vec<u32>> = vec![self.circuits()];
        loop {
            let n = levels.len() as i64;
            let below = levels.last().unwrap();
            let mut next = Vec::new();
            for a in self.subsets().filter(|&a| self.level(a) == n) {
                let parts: Vec<u32> = below.iter().filter(|&&b| b & !a == 0).map(|&b| a & !b).collect();
                let disjoint = parts
                    .iter()
                    .enumerate()
                    .all(|(i, p)| parts[i + 1..].iter().all(|q| p & q == 0));
                let covers = parts.iter().fold(0, |acc, p| acc | p) == a;
                if !parts.is_empty() && disjoint && covers {
                    next.push(a);
                }
            }
            if next.is_empty() {
                break;
            }
            levels.push(next);
        }
        let mut all: Vec<u32> = levels.concat();
        all.sort_unstable();
        all
    }

    pub fn t_parts(&self, a: u32) -> Vec<u32> {
        let n = self.level(a);
        if n == 0 {
            return elements(a).map(|e| 1 << e).collect();
        }
        let mut parts: Vec<u32> = self
            .t_flats_by_unions()
            .into_iter()
            .filter(|&b| b & !a == 0 && self.level(b) == n - 1)
            .map(|b| a & !b)
            .collect();
        parts.sort_unstable();
        parts
    }

    /// Whether `rank` is additive over the split `a = b ⊔ (a ∖ b)`.
    pub fn separates(&self, a: u32, b: u32) -> bool {
        self.rank(b) + self.rank(a & !b) == self.rank(a)
    }

    /// Connected components as minimal separators.
    pub fn components(&self, a: u32) -> Vec<u32> {
        let mut out = Vec::new();
        let mut left = a;
        while left != 0 {
            let e = left.trailing_zeros();
            let mut comp = a;
            let mut sub = a;
            loop {
                if sub & 1 << e != 0 && self.separates(a, sub) {
                    comp &= sub;
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & a;
            }
            out.push(comp);
            left &= !comp;
        }
        out.sort_unstable();
        out
    }

    pub fn is_connected(&self, a: u32) -> bool {
        a != 0 && self.components(a).len() == 1
    }
}

/// Polynomials in `g1, …, gw` as exponent → coefficient maps.
pub type Poly<F> = BTreeMap<Vec<u32>, <F as Field>::Elem>;

pub fn poly_mul<F: Field>(f: &F, a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
    let mut out: Poly<F> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let prod = f.mul(ca, cb);
            let entry = out.entry(e).or_insert_with(|| f.zero());
            *entry = f.add(entry, &prod);
        }
    }
    out.retain(|_, c| !f.is_zero(c));
    out
}

pub fn linear_form<F: Field>(f: &F, v: &[F::Elem]) -> Poly<F> {
    let mut out = BTreeMap::new();
    for (i, c) in v.iter().enumerate() {
        if !f.is_zero(c) {
            let mut e = vec![0; v.len()];
            e[i] = 1;
            out.insert(e, c.clone());
        }
    }
    out
}

/// Coordinates of a list of polynomials over the union of their monomials.
pub fn poly_vectors<F: Field>(f: &F, polys: &[Poly<F>]) -> Vec<Vector<F>> {
    let mut monomials: Vec<Vec<u32>> = polys.iter().flat_map(|p| p.keys().cloned()).collect();
    monomials.sort();
    monomials.dedup();
    polys
        .iter()
        .map(|p| {
            monomials
                .iter()
                .map(|m| p.get(m).cloned().unwrap_or_else(|| f.zero()))
                .collect()
        })
        .collect()
}

/// Every maximal chain `I_0 ⊂ … ⊂ I_n = target` of T-flats with `I_k` of
/// level `k`.
pub fn chains(m: &OracleMatroid, target: u32) -> Vec<Vec<u32>> {
    let flats = m.t_flats_by_unions();
    fn extend(m: &OracleMatroid, flats: &[u32], chain: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let top = *chain.last().unwrap();
        let n = m.level(top);
        if n == 0 {
            let mut c = chain.clone();
            c.reverse();
            out.push(c);
            return;
        }
        for &b in flats {
            if b & !top == 0 && b != top && m.level(b) == n - 1 {
                chain.push(b);
                extend(m, flats, chain, out);
                chain.pop();
            }
        }
    }
    let mut out = Vec::new();
    if flats.contains(&target) {
        extend(m, &flats, &mut vec![target], &mut out);
    }
    out
}

/// Products of the lines `V_{I_k ∖ I_(k-1)} ∩ V_{I_(k-1)}` along every chain.
pub fn chain_sum_generators<F: Field>(f: &F, columns: &[Vector<F>], m: &OracleMatroid, target: u32) -> Vec<Poly<F>> {
    let w = columns.first().map_or(0, |c| c.len());
    let cols = |mask: u32| -> Vec<Vector<F>> { elements(mask).map(|i| columns[i].clone()).collect() };
    chains(m, target)
        .into_iter()
        .map(|chain| {
            let mut acc: Poly<F> = BTreeMap::from([(vec![0; w], f.one())]);
            for k in 1..chain.len() {
                let (lo, hi) = (chain[k - 1], chain[k]);
                match meet_line(f, &cols(hi & !lo), &cols(lo), w) {
                    Some(line) => acc = poly_mul(f, &acc, &linear_form(f, &line)),
                    None => return BTreeMap::new(),
                }
            }
            acc
        })
        .collect()
}

/// Dimension of the chain-sum space and whether it equals the span of
/// `basis` (given as polynomials).
pub fn same_span<F: Field>(f: &F, ours: &[Poly<F>], theirs: &[Poly<F>]) -> (usize, usize, bool) {
    let mut all = ours.to_vec();
    all.extend(theirs.iter().cloned());
    let vs = poly_vectors(f, &all);
    let (a, b) = vs.split_at(ours.len());
    let ra = rank(f, a);
    let rb = rank(f, b);
    let rall = rank(f, &vs);
    (ra, rb, ra == rb && rb == rall)
}

/// Entry of a monomial complex: sign times `x^exp`.
pub type MonomialEntry = Option<(i64, Vec<u32>)>;

/// The simplicial Taylor complex on the given monomials: component `k` is
/// spanned by the `k`-subsets (in increasing bitmask order) with degree
/// their lcm.
pub struct TaylorComplex {
    pub generators: Vec<Vec<u32>>,
    pub components: Vec<Vec<u32>>,
    /// `differentials[k-1]` maps component `k` to component `k-1`.
    pub differentials: Vec<Vec<Vec<MonomialEntry>>>,
}

pub fn lcm_of(generators: &[Vec<u32>], mask: u32, nvars: usize) -> Vec<u32> {
    let mut d = vec![0; nvars];
    for i in elements(mask) {
        for (x, y) in d.iter_mut().zip(&generators[i]) {
            *x = (*x).max(*y);
        }
    }
    d
}

pub fn taylor_complex(generators: &[Vec<u32>]) -> TaylorComplex {
    let r = generators.len();
    let nvars = generators.first().map_or(0, |g| g.len());
    let components: Vec<Vec<u32>> = (0..=r)
        .map(|k| (0..1u32 << r).filter(|m| size(*m) == k).collect())
        .collect();
    let differentials = (1..=r)
        .map(|k| {
            components[k - 1]
                .iter()
                .map(|&row| {
                    components[k]
                        .iter()
                        .map(|&col| {
                            if row & !col != 0 {
                                return None;
                            }
                            let removed = col & !row;
                            let pos = size(col & (removed - 1));
                            let top = lcm_of(generators, col, nvars);
                            let bottom = lcm_of(generators, row, nvars);
                            let exp = top.iter().zip(&bottom).map(|(a, b)| a - b).collect();
                            Some((if pos.is_multiple_of(2) { 1 } else { -1 }, exp))
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    TaylorComplex {
        generators: generators.to_vec(),
        components,
        differentials,
    }
}

impl TaylorComplex {
    pub fn ranks(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.len()).collect()
    }

    /// Symbolic `d_(k-1) ∘ d_k = 0` with integer coefficients.
    pub fn is_complex(&self) -> bool {
        for k in 1..self.differentials.len() {
            let (a, b) = (&self.differentials[k - 1], &self.differentials[k]);
            for row in a {
                for j in 0..b[0].len() {
                    let mut sum: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
                    for (t, x) in row.iter().enumerate() {
                        if let (Some((s1, e1)), Some((s2, e2))) = (x, &b[t][j]) {
                            let e: Vec<u32> = e1.iter().zip(e2).map(|(p, q)| p + q).collect();
                            *sum.entry(e).or_default() += s1 * s2;
                        }
                    }
                    if sum.values().any(|v| *v != 0) {
                        return false;
                    }
                }
            }
        }
        true
    }
}
