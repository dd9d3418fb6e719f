#![allow(dead_code)]

pub mod oracle;

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tresolve::io::InputDoc;
use tresolve::multigraded::{build_resolution_with, FreeComplex, MultigradedPresentation};
use tresolve::multiplicity::Multiplicities;
use tresolve::sym::SymCoords;
use tresolve::tcomplex::{diagonal_equivalence, Block};
use tresolve::{ElementSet, Field, Matrix, Rationals, Representation};

use oracle::{elements, OracleMatroid, Poly};

pub const FOUR_POINTS: &str = include_str!("../../data/four_points.json");
pub const THREE_VARS: &str = include_str!("../../data/three_vars.json");
pub const TAYLOR: &str = include_str!("../../data/taylor.json");

pub fn parse_input<F: Field>(field: &F, text: &str) -> tresolve::io::ParsedInput<F> {
    InputDoc::from_json(text).unwrap().parse(field).unwrap()
}

pub fn four_points() -> Representation<Rationals> {
    let p = parse_input(&Rationals, FOUR_POINTS);
    Representation::new(p.labels, p.matrix).unwrap()
}

pub fn three_vars() -> MultigradedPresentation<Rationals> {
    parse_input(&Rationals, THREE_VARS).presentation.unwrap()
}

pub fn set(rep_labels: &[&str], all: &[String]) -> ElementSet {
    ElementSet::from_indices(
        rep_labels
            .iter()
            .map(|l| all.iter().position(|x| x == l).unwrap()),
    )
}

pub fn int_matrix<F: Field>(f: &F, rows: &[Vec<i64>]) -> Matrix<F> {
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    Matrix::from_i64(f, &refs)
}

/// Random `w × s` integer matrix with `1 ≤ s ≤ max_s`, `1 ≤ w ≤ max_w`
/// and entries in `-3..=3`.
pub fn random_int_matrix(rng: &mut ChaCha8Rng, max_s: usize, max_w: usize) -> Vec<Vec<i64>> {
    let s = rng.random_range(1..=max_s);
    let w = rng.random_range(1..=max_w);
    (0..w)
        .map(|_| (0..s).map(|_| rng.random_range(-3..=3)).collect())
        .collect()
}

pub fn random_rep<F: Field>(f: &F, rng: &mut ChaCha8Rng, max_s: usize, max_w: usize) -> Representation<F> {
    Representation::unlabeled(int_matrix(f, &random_int_matrix(rng, max_s, max_w))).unwrap()
}

pub fn columns<F: Field>(rep: &Representation<F>) -> Vec<Vec<F::Elem>> {
    (0..rep.ground_size()).map(|i| rep.column(i).to_vec()).collect()
}

pub fn oracle_of<F: Field>(rep: &Representation<F>) -> OracleMatroid {
    OracleMatroid::from_columns(rep.field(), &columns(rep))
}

fn bits(sets: &[ElementSet]) -> Vec<u32> {
    let mut v: Vec<u32> = sets.iter().map(|s| s.bits()).collect();
    v.sort_unstable();
    v
}

fn lib_t_flats<F: Field>(rep: &Representation<F>) -> Vec<u32> {
    let v: Vec<ElementSet> = rep.t_flats().iter().map(|r| r.set).collect();
    bits(&v)
}

/// Ranks, duality, closures, circuits, T-flats, T-parts and components
/// against the definitional matroid.
pub fn matroid_agreement<F: Field>(rep: &Representation<F>) -> Result<(), String> {
    let m = oracle_of(rep);
    m.check_axioms()?;
    for a in m.subsets() {
        let s = ElementSet(a);
        if rep.rank(s) != m.rank(a) {
            return Err(format!("rank of {a:b}: {} vs {}", rep.rank(s), m.rank(a)));
        }
        if rep.dual_rank(s) != m.dual_rank(a) {
            return Err(format!("dual rank of {a:b}"));
        }
        if rep.closure(s).bits() != m.closure(a) {
            return Err(format!("closure of {a:b}"));
        }
        if rep.dual_closure(s).bits() != m.dual_closure(a) {
            return Err(format!("dual closure of {a:b}"));
        }
        if a != 0 && bits(&rep.connected_components(s)) != m.components(a) {
            return Err(format!(
                "components of {a:b}: {:?} vs {:?}",
                bits(&rep.connected_components(s)),
                m.components(a)
            ));
        }
    }
    if bits(rep.circuits()) != m.circuits() {
        return Err(format!("circuits {:?} vs {:?}", bits(rep.circuits()), m.circuits()));
    }
    let lib = lib_t_flats(rep);
    for (name, theirs) in [
        ("union closure", m.t_flats_by_unions()),
        ("dual flats", m.t_flats_by_dual_flats()),
        ("inductive", m.t_flats_inductive()),
    ] {
        if lib != theirs {
            return Err(format!("T-flats {lib:?} vs {name} {theirs:?}"));
        }
    }
    for rec in rep.t_flats().iter() {
        if rec.level as i64 != m.level(rec.set.bits()) || rec.rank != m.rank(rec.set.bits()) {
            return Err(format!("level/rank of {:b}", rec.set.bits()));
        }
        if bits(&rec.t_parts) != m.t_parts(rec.set.bits()) {
            return Err(format!(
                "T-parts of {:b}: {:?} vs {:?}",
                rec.set.bits(),
                bits(&rec.t_parts),
                m.t_parts(rec.set.bits())
            ));
        }
    }
    Ok(())
}

pub fn sym_poly<F: Field>(f: &F, coords: &SymCoords, v: &[F::Elem]) -> Poly<F> {
    coords
        .monomials()
        .iter()
        .zip(v)
        .filter(|(_, c)| !f.is_zero(c))
        .map(|(e, c)| (e.clone(), c.clone()))
        .collect()
}

/// Recursive multiplicity spaces equal the chain-sum spaces on every
/// T-flat. Returns the number of T-flats compared.
pub fn multiplicity_agreement<F: Field>(rep: &Representation<F>, mult: &Multiplicities<F>) -> Result<usize, String> {
    let f = rep.field();
    let m = oracle_of(rep);
    let cols = columns(rep);
    let mut count = 0;
    for rec in rep.t_flats().iter() {
        let chain_sum = oracle::chain_sum_generators(f, &cols, &m, rec.set.bits());
        let space = mult.multiplicity_space(rec.set);
        let ours: Vec<Poly<F>> = (0..space.dim())
            .map(|i| sym_poly(f, &space.ambient, &space.basis.basis_vector(i)))
            .collect();
        let (a, b, same) = oracle::same_span(f, &ours, &chain_sum);
        if !same {
            return Err(format!(
                "S_I for {}: recursive dim {a}, chain-sum dim {b}, spans differ",
                rep.render_set(rec.set)
            ));
        }
        count += 1;
    }
    Ok(count)
}

fn set_partitions(a: u32, blocks: usize) -> Vec<Vec<u32>> {
    // partitions of `a` into exactly `blocks` nonempty blocks, first block
    // holding the smallest element
    if blocks == 1 {
        return if a == 0 { vec![] } else { vec![vec![a]] };
    }
    if a == 0 {
        return vec![];
    }
    let low = a & a.wrapping_neg();
    let rest = a & !low;
    let mut out = Vec::new();
    let mut sub = rest;
    loop {
        let first = low | sub;
        for mut tail in set_partitions(a & !first, blocks - 1) {
            tail.insert(0, first);
            out.push(tail);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    out
}

/// Brute-force checks of the rank and T-flat identities on every subset.
/// Returns the number of individual assertions made.
pub fn rank_identity_suite<F: Field>(rep: &Representation<F>) -> Result<usize, String> {
    let m = oracle_of(rep);
    let mut checks = 0usize;
    let r = |a: u32| rep.rank(ElementSet(a));
    for a in m.subsets() {
        for b in m.subsets() {
            checks += 1;
            if r(a) + r(b) < r(a | b) + r(a & b) {
                return Err(format!("submodularity fails for {a:b}, {b:b}"));
            }
            if b & !a == 0 {
                checks += 1;
                let lb = b.count_ones() as i64 - r(b) as i64;
                let la = a.count_ones() as i64 - r(a) as i64;
                if lb > la {
                    return Err(format!("nullity not monotone on {b:b} ⊆ {a:b}"));
                }
            }
        }
    }

    // rank additivity over a partition iff every circuit inside lies in a block
    let circuits: Vec<u32> = rep.circuits().iter().map(|c| c.bits()).collect();
    for a in m.subsets().filter(|a| a.count_ones() <= 6) {
        for k in 2..=3 {
            for parts in set_partitions(a, k) {
                checks += 1;
                let additive = parts.iter().map(|&p| r(p)).sum::<usize>() == r(a);
                let split = circuits
                    .iter()
                    .filter(|&&c| c & !a == 0)
                    .all(|&c| parts.iter().any(|&p| c & !p == 0));
                if additive != split {
                    return Err(format!("direct sum criterion fails on {parts:?}"));
                }
            }
        }
    }

    let t_flats = lib_t_flats(rep);
    for rec in rep.t_flats().iter() {
        let i = rec.set.bits();
        if rec.level == 0 && i.count_ones() == 1 {
            continue;
        }
        for j in rec.t_parts.iter().map(|p| p.bits()) {
            checks += 1;
            if m.independent[j as usize] {
                if r(j) + r(i & !j) != r(i) + 1 {
                    return Err(format!("independent T-part {j:b} of {i:b}: rank identity"));
                }
            } else {
                let is_circuit = circuits.contains(&j);
                if !is_circuit || rec.level < 1 || r(j) + r(i & !j) != r(i) {
                    return Err(format!("dependent T-part {j:b} of {i:b}"));
                }
            }
            let mut sub = (j.wrapping_sub(1)) & j;
            while sub != j {
                checks += 1;
                if r(sub) + r(i & !j) != r(sub | (i & !j)) {
                    return Err(format!("proper subset {sub:b} of T-part {j:b} of {i:b}"));
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & j;
            }
        }
    }

    for a in m.subsets().filter(|&a| m.level(a) >= 0 && a.count_ones() > 1 && m.is_connected(a)) {
        checks += 1;
        if !t_flats.contains(&a) {
            return Err(format!("connected dependent {a:b} is not a T-flat"));
        }
        let rec = rep.t_flats().get(ElementSet(a)).unwrap();
        let parts: Vec<u32> = rec.t_parts.iter().map(|p| p.bits()).collect();
        if parts.iter().any(|&p| !m.independent[p as usize]) {
            return Err(format!("connected {a:b} has a dependent T-part"));
        }
        if rec.level == 0 {
            continue;
        }
        let candidates: Vec<u32> = m
            .subsets()
            .filter(|&j| j != 0 && j & !a == 0 && m.independent[j as usize] && r(a & !j) + r(j) == r(a) + 1)
            .collect();
        let mut maximal: Vec<u32> = candidates
            .iter()
            .copied()
            .filter(|&j| !candidates.iter().any(|&k| k != j && j & !k == 0))
            .collect();
        maximal.sort_unstable();
        let mut sorted = parts.clone();
        sorted.sort_unstable();
        if maximal != sorted {
            return Err(format!("T-parts of connected {a:b} are not the maximal candidates"));
        }
    }

    let full = m.full();
    for y in m.subsets() {
        let restricted = rep.restrict(ElementSet(y)).map_err(|e| e.to_string())?;
        let mut inside: Vec<u32> = t_flats.iter().copied().filter(|&t| t & !y == 0).collect();
        inside.sort_unstable();
        let mut minor: Vec<u32> = restricted
            .derived
            .t_flats()
            .iter()
            .map(|rec| restricted.lift(rec.set).bits())
            .collect();
        minor.sort_unstable();
        checks += 1;
        if inside != minor {
            return Err(format!("T-flats of the restriction to {y:b}"));
        }
        for rec in restricted.derived.t_flats().iter() {
            let parts: Vec<ElementSet> = rec.t_parts.iter().map(|p| restricted.lift(*p)).collect();
            let parent = rep.t_flats().get(restricted.lift(rec.set)).unwrap();
            checks += 1;
            if bits(&parts) != bits(&parent.t_parts) {
                return Err(format!("T-parts change under restriction to {y:b}"));
            }
        }

        let contracted = rep.contract(ElementSet(y)).map_err(|e| e.to_string())?;
        let mut traces: Vec<u32> = t_flats.iter().map(|&t| t & y).filter(|&t| t != 0).collect();
        traces.sort_unstable();
        traces.dedup();
        let mut minor: Vec<u32> = contracted
            .derived
            .t_flats()
            .iter()
            .map(|rec| contracted.lift(rec.set).bits())
            .collect();
        minor.sort_unstable();
        checks += 1;
        if traces != minor {
            return Err(format!("T-flats of the contraction to {y:b}: {minor:?} vs traces {traces:?}"));
        }
        for rec in contracted.derived.t_flats().iter() {
            let a = contracted.lift(rec.set);
            let b = rep.b_of(ElementSet(y), a);
            checks += 1;
            if b.intersection(ElementSet(y)) != a || !t_flats.contains(&b.bits()) {
                return Err(format!("B for A={:b} in the contraction to {y:b}", a.bits()));
            }
            if y.count_ones() + 1 == full.count_ones() && rec.level >= 1 {
                let brec = rep.t_flats().get(b).unwrap();
                let mut expected: Vec<u32> = brec
                    .t_parts
                    .iter()
                    .map(|p| p.bits() & y)
                    .filter(|&p| p != 0)
                    .collect();
                expected.sort_unstable();
                let got: Vec<ElementSet> = rec.t_parts.iter().map(|p| contracted.lift(*p)).collect();
                checks += 1;
                if bits(&got) != expected {
                    return Err(format!("T-parts of {:b} in the contraction to {y:b}", a.bits()));
                }
            }
        }
    }
    Ok(checks)
}

/// Degree support of a monomial ideal presentation: one row of ones.
pub fn monomial_presentation(generators: &[Vec<u32>]) -> MultigradedPresentation<Rationals> {
    let nvars = generators[0].len();
    let vars: Vec<String> = (1..=nvars).map(|i| format!("x{i}")).collect();
    let labels: Vec<String> = (1..=generators.len()).map(|i| format!("m{i}")).collect();
    let scalar = int_matrix(&Rationals, &[vec![1; generators.len()]]);
    MultigradedPresentation::new(vars, labels, scalar, generators.to_vec(), vec![vec![0; nvars]]).unwrap()
}

/// Compares a T-resolution of a monomial ideal with the Taylor complex:
/// same generator degrees and monomials, coefficient matrices related by
/// nonzero diagonal rescalings.
pub fn taylor_agreement(generators: &[Vec<u32>]) -> Result<Vec<usize>, String> {
    let p = monomial_presentation(generators);
    let rep = p.representation(16).map_err(|e| e.to_string())?;
    let mult = Multiplicities::new(&rep);
    let ours = build_resolution_with(&p, &rep, &mult);
    let taylor = oracle::taylor_complex(generators);
    if !taylor.is_complex() {
        return Err("Taylor oracle is not a complex".into());
    }
    if ours.ranks() != taylor.ranks() {
        return Err(format!("ranks {:?} vs Taylor {:?}", ours.ranks(), taylor.ranks()));
    }
    let order = |c: &FreeComplex<Rationals>, k: usize| -> Vec<usize> {
        c.components[k]
            .iter()
            .map(|g| {
                let mask = match g.label.block {
                    Block::Ambient => 0,
                    Block::Element(a) => 1 << a,
                    Block::TFlat(s) => s.bits(),
                };
                taylor.components[k].iter().position(|&m| m == mask).unwrap()
            })
            .collect()
    };
    let f = Rationals;
    let mut theirs = Vec::new();
    let mut mine = Vec::new();
    for k in 1..ours.components.len() {
        let (rows, cols) = (order(&ours, k - 1), order(&ours, k));
        let d = &ours.differentials[k - 1];
        let mut t = Matrix::zeros(&f, rows.len(), cols.len());
        for (i, &ti) in rows.iter().enumerate() {
            for (j, &tj) in cols.iter().enumerate() {
                let entry = &taylor.differentials[k - 1][ti][tj];
                match (d.get(i, j).as_monomial(), entry) {
                    (None, None) => {}
                    (Some((_, e)), Some((s, te))) if e == te => t.set(i, j, f.from_i64(*s)),
                    _ => return Err(format!("d_{k}[{i},{j}] differs from the Taylor entry")),
                }
            }
        }
        for (g, &ti) in ours.components[k].iter().zip(&cols) {
            let expected = oracle::lcm_of(generators, taylor.components[k][ti], generators[0].len());
            if g.degree != expected {
                return Err(format!("degree of a generator in component {k}"));
            }
        }
        theirs.push(t);
        mine.push(d.scalars(&f));
    }
    diagonal_equivalence(&f, &mine, &theirs)?;
    Ok(ours.ranks())
}

pub fn random_monomials(rng: &mut ChaCha8Rng, max_gens: usize, max_vars: usize) -> Vec<Vec<u32>> {
    let nvars = rng.random_range(1..=max_vars);
    let available = 4usize.pow(nvars as u32) - 1;
    let count = rng.random_range(1..=max_gens.min(available));
    let mut gens: Vec<Vec<u32>> = Vec::new();
    while gens.len() < count {
        let g: Vec<u32> = (0..nvars).map(|_| rng.random_range(0..=3)).collect();
        if g.iter().any(|&e| e > 0) && !gens.contains(&g) {
            gens.push(g);
        }
    }
    gens
}

/// Random multihomogeneous presentation: random scalars, target degrees
/// and source degrees dominating the targets they meet.
pub fn random_presentation(rng: &mut ChaCha8Rng) -> MultigradedPresentation<Rationals> {
    let nvars = rng.random_range(1..=3);
    let rows = rng.random_range(1..=2);
    let cols = rng.random_range(1..=5);
    let scalar: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.random_range(-2..=2)).collect())
        .collect();
    let targets: Vec<Vec<u32>> = (0..rows)
        .map(|_| (0..nvars).map(|_| rng.random_range(0..=2)).collect())
        .collect();
    let sources: Vec<Vec<u32>> = (0..cols)
        .map(|j| {
            let mut d: Vec<u32> = (0..nvars).map(|_| rng.random_range(0..=2)).collect();
            for (i, t) in targets.iter().enumerate() {
                if scalar[i][j] != 0 {
                    for (x, y) in d.iter_mut().zip(t) {
                        *x = (*x).max(*y);
                    }
                }
            }
            d
        })
        .collect();
    MultigradedPresentation::new(
        (1..=nvars).map(|i| format!("x{i}")).collect(),
        (1..=cols).map(|i| i.to_string()).collect(),
        int_matrix(&Rationals, &scalar),
        sources,
        targets,
    )
    .unwrap()
}

/// All multiplicity dims and T⁺ dims, keyed by T-flat.
pub fn dimension_profile<F: Field>(rep: &Representation<F>, mult: &Multiplicities<F>) -> (BTreeMap<u32, usize>, Vec<usize>) {
    let dims = rep
        .t_flats()
        .iter()
        .map(|r| (r.set.bits(), mult.dim(r.set)))
        .collect();
    (dims, tresolve::tcomplex::build_t_plus_with(rep, mult).dims())
}

pub fn mask_elements(mask: u32) -> Vec<usize> {
    elements(mask).collect()
}
