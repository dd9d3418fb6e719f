//! The full battery of rank-level checks for one representation.

use crate::field::Field;
use crate::matroid::{ElementSet, Representation};
use crate::multiplicity::{
    check_multiplicity_sequence, contraction_projection, Multiplicities,
};
use crate::report::Report;
use crate::tcomplex::{self, build_t, build_t_with, lift_labels, restrict_complex};

/// Restricting `T(φ)` to the blocks inside `Y = S ∖ {a}` gives `T(φ|Y)`.
pub fn restriction_checks<F: Field>(rep: &Representation<F>, mult: &Multiplicities<F>) -> Report {
    let mut bad = Vec::new();
    let mut sets = vec![rep.ground_set()];
    sets.extend((0..rep.ground_size()).map(|a| rep.ground_set().without(a)));
    for y in sets {
        let minor = rep.restrict(y).expect("subset of the ground set");
        let direct = lift_labels(&build_t(&minor.derived), &minor.embed).trimmed();
        if restrict_complex(rep, mult, y) != direct {
            bad.push(rep.render_set(y));
        }
    }
    let mut r = Report::default();
    r.push(
        "restriction-subcomplex",
        bad.is_empty(),
        if bad.is_empty() {
            "T(φ)|_Y = T(φ|Y) for Y = S and every S∖{a}".to_string()
        } else {
            format!("differs for Y = {}", bad.join(", "))
        },
    );
    r
}

/// Homology of `T(φ.S_a)` has the same dimensions as that of `T(φ)`.
pub fn contraction_homology_checks<F: Field>(rep: &Representation<F>, mult: &Multiplicities<F>) -> Report {
    let base = padded_homology(&build_t_with(rep, mult));
    let mut bad = Vec::new();
    for a in 0..rep.ground_size() {
        let single = ElementSet::singleton(a);
        if !rep.is_independent(single) {
            continue;
        }
        let minor = rep.contract(rep.ground_set().without(a)).expect("subset");
        let h = padded_homology(&build_t(&minor.derived));
        if trim(h.clone()) != trim(base.clone()) {
            bad.push(format!("{}: {h:?} vs {base:?}", rep.labels()[a]));
        }
    }
    let mut r = Report::default();
    r.push(
        "contraction-homology",
        bad.is_empty(),
        if bad.is_empty() {
            format!("homology dims {:?} preserved by every one-element contraction", trim(base))
        } else {
            bad.join("; ")
        },
    );
    r
}

fn padded_homology<F: Field>(c: &tcomplex::VectorSpaceComplex<F>) -> Vec<i64> {
    c.homology().entries.iter().map(|e| e.homology).collect()
}

fn trim(mut v: Vec<i64>) -> Vec<i64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Nonvanishing of multiplicity spaces, spanning by the `ν` images, and
/// the contraction maps and exact sequences for every element.
pub fn multiplicity_checks<F: Field>(rep: &Representation<F>, mult: &Multiplicities<F>) -> Report {
    let f = rep.field();
    let mut r = Report::default();

    let mut wrong = Vec::new();
    for rec in rep.t_flats().iter() {
        if (mult.dim(rec.set) > 0) != rep.is_connected(rec.set) {
            wrong.push(rep.render_set(rec.set));
        }
    }
    r.push(
        "multiplicity-nonzero-iff-connected",
        wrong.is_empty(),
        if wrong.is_empty() {
            format!("{} T-flats", rep.t_flats().len())
        } else {
            format!("fails for {}", wrong.join(", "))
        },
    );

    let mut not_spanned = Vec::new();
    for rec in rep.t_flats().iter().filter(|r| r.level >= 1) {
        let n = rec.level;
        let mut images = Vec::new();
        for low in rep.t_flats().level(n - 1) {
            if !low.set.is_subset(rec.set) {
                continue;
            }
            let nu = mult.nu_matrix(rep, rec.set, low.set).expect("valid pair");
            let si = mult.space(rec.set);
            for c in 0..nu.cols() {
                let coords = nu.column(c);
                let mut v = vec![f.zero(); mult.coords(n).dim()];
                for (k, x) in coords.iter().enumerate() {
                    for (t, b) in si.basis().row(k).iter().enumerate() {
                        v[t] = f.mul_add(&v[t], x, b);
                    }
                }
                images.push(v);
            }
        }
        let span = crate::linalg::Subspace::span(f, mult.coords(n).dim(), images);
        if !span.same_as(&mult.space(rec.set)) {
            not_spanned.push(rep.render_set(rec.set));
        }
    }
    r.push(
        "multiplication-surjective",
        not_spanned.is_empty(),
        if not_spanned.is_empty() {
            "images of ν span every S_I".to_string()
        } else {
            format!("not spanned: {}", not_spanned.join(", "))
        },
    );

    let mut failures = Vec::new();
    let mut sequences = 0;
    let mut isomorphisms = 0;
    for a in 0..rep.ground_size() {
        if !rep.is_independent(ElementSet::singleton(a)) {
            continue;
        }
        let y = rep.ground_set().without(a);
        let minor = rep.contract(y).expect("subset");
        for rec in minor.derived.t_flats().iter() {
            let big_a = minor.lift(rec.set);
            let b = rep.b_of(y, big_a);
            let is_part = rep
                .t_flats()
                .get(b)
                .is_some_and(|r| r.level > 0 && r.t_parts.contains(&ElementSet::singleton(a)));
            let label = format!("a={}, A={}", rep.labels()[a], rep.render_set(big_a));
            if is_part {
                sequences += 1;
                match check_multiplicity_sequence(rep, mult, a, big_a) {
                    Ok(s) if s.passed() => {}
                    Ok(s) => failures.push(format!("{label}: {s:?}")),
                    Err(e) => failures.push(format!("{label}: {e}")),
                }
            } else {
                isomorphisms += 1;
                match contraction_projection(rep, mult, y, big_a) {
                    Ok(p) if p.surjective && p.source_dim == p.target_dim => {}
                    Ok(p) => failures.push(format!(
                        "{label}: π has source dim {}, target dim {}",
                        p.source_dim, p.target_dim
                    )),
                    Err(e) => failures.push(format!("{label}: {e}")),
                }
            }
        }
    }
    r.push(
        "contraction-multiplicity",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{sequences} exact sequences, {isomorphisms} isomorphisms")
        } else {
            failures.join("; ")
        },
    );
    r
}

/// Every check that applies to a single representation.
pub fn representation_checks<F: Field>(rep: &Representation<F>, mult: &Multiplicities<F>) -> Report {
    let mut r = tcomplex::verify_acyclic(rep, mult);
    r.extend(tcomplex::verify_direct_sum(rep, mult));
    r.extend(restriction_checks(rep, mult));
    r.extend(contraction_homology_checks(rep, mult));
    r.extend(multiplicity_checks(rep, mult));
    r
}
