use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use wfm_core::base::projective_space;
use wfm_core::chow::{
    center_kernel, center_presentation, chern_poly_diagonal, chern_poly_pair, hilbert_function,
    keel_betti, poly_shift, stage_presentation, theorem8_ideal, Caps, Presentation,
    PresentationJson, QuotientRing, VariableLayout,
};
use wfm_core::combinatorics::{building_set, IndexSet, WeightVector};
use wfm_core::poly::{Monomial, MultiPoly};

fn w(text: &str) -> WeightVector {
    WeightVector::parse(text).unwrap()
}

fn random_poly(nvars: usize, degree: u32, terms: &[(u64, i64)]) -> MultiPoly {
    let monos = Monomial::all_of_degree(nvars, degree, &vec![degree as u8; nvars]);
    let picked = terms
        .iter()
        .map(|(i, c)| (monos[(*i as usize) % monos.len()].clone(), BigRational::from_integer((*c).into())))
        .collect();
    MultiPoly::from_terms(nvars, picked)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn normal_form_is_idempotent_and_multiplicative(
        a in prop::collection::vec((any::<u64>(), -3i64..=3), 1..5),
        b in prop::collection::vec((any::<u64>(), -3i64..=3), 1..5),
        da in 0u32..=2,
        db in 0u32..=1,
    ) {
        let p = theorem8_ideal(&projective_space(1).unwrap(), &w("1,1,1"));
        let ring = QuotientRing::new(&p, &Caps::default()).unwrap();
        let nvars = p.layout.nvars();
        let f = random_poly(nvars, da, &a);
        let g = random_poly(nvars, db, &b);
        let nf = ring.normal_form(&f).unwrap();
        prop_assert_eq!(ring.normal_form(&nf).unwrap(), nf.clone());
        let lhs = ring.normal_form(&f.mul(&g)).unwrap();
        let rhs = ring.normal_form(&nf.mul(&ring.normal_form(&g).unwrap())).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn shift_composes(u1 in -3i64..=3, u2 in -3i64..=3, m in 1i64..=3) {
        let base = projective_space(m).unwrap();
        let layout = VariableLayout::new(3, vec![IndexSet::of(&[1, 2])], "h");
        let p = chern_poly_diagonal(&base, &layout, IndexSet::of(&[1, 2, 3]));
        let x = layout.h_var(1).scale_int(u1);
        let y = layout.d_var(IndexSet::of(&[1, 2])).unwrap().scale_int(u2);
        let twice = poly_shift(&poly_shift(&p, &x).unwrap(), &y).unwrap();
        let once = poly_shift(&p, &x.add(&y)).unwrap();
        prop_assert_eq!(twice, once);
    }
}

#[test]
fn diagonal_polynomials_are_monic_with_pair_product_constant_term() {
    for m in 1..=3 {
        let base = projective_space(m).unwrap();
        let layout = VariableLayout::new(4, Vec::new(), "h");
        for s in IndexSet::all_diagonals(4) {
            let p = chern_poly_diagonal(&base, &layout, s);
            assert!(p.is_monic(), "{s}");
            assert_eq!(p.degree(), m as usize * (s.len() - 1));
            let product = s
                .consecutive_pairs()
                .into_iter()
                .map(|(a, b)| base.diagonal_class(layout.nvars(), layout.h(a), layout.h(b)))
                .fold(MultiPoly::one(layout.nvars()), |acc, d| acc.mul(&d));
            assert_eq!(p.constant_term(), &product);
            // pair polynomial has leading coefficient (-1)^m
            let (a, b) = s.consecutive_pairs()[0];
            let c = chern_poly_pair(&base, &layout, a, b);
            let sign = if m % 2 == 0 { 1 } else { -1 };
            assert_eq!(c.leading_coefficient(), &MultiPoly::one(layout.nvars()).scale_int(sign));
        }
    }
}

#[test]
fn stage_presentations_grow_by_one_variable() {
    let base = projective_space(1).unwrap();
    let g = building_set(&WeightVector::ones(4).unwrap());
    for j in 0..g.len() {
        let p = stage_presentation(&base, &g, j).unwrap();
        assert_eq!(p.layout.nvars(), j + 1 + 4);
    }
}

#[test]
fn intermediate_stages_match_partial_recursion() {
    // A(X_j) ranks: the recursion truncated after j+1 centers
    let base = projective_space(1).unwrap();
    let g = building_set(&WeightVector::ones(4).unwrap());
    let caps = Caps::default();
    let mut ranks = vec![1u64, 4, 6, 4, 1];
    for (k, center) in g.elements().iter().enumerate() {
        let codim = center.len() - 1;
        let z = center_presentation(&base, &g, k).unwrap();
        let dim_z = 4 - codim as u32;
        let zr = QuotientRing::with_truncation(&z, dim_z, &caps).unwrap().hilbert_function().unwrap().ranks;
        for i in 1..codim {
            for (d, r) in zr.iter().enumerate() {
                ranks[d + i] += r;
            }
        }
        let stage = stage_presentation(&base, &g, k).unwrap();
        assert_eq!(hilbert_function(&stage, &caps).unwrap().ranks, ranks, "stage {k}");
    }
}

#[test]
fn center_kernels_contain_their_linear_relations() {
    let base = projective_space(2).unwrap();
    let g = building_set(&WeightVector::ones(3).unwrap());
    for j in 0..g.len() {
        for k in j + 1..g.len() {
            let kernel = center_kernel(&base, &g, j, k).unwrap();
            let layout = stage_presentation(&base, &g, j).unwrap().layout;
            for gen in wfm_core::chow::j_ideal(&layout, g.elements()[k]) {
                assert!(kernel.contains(&gen));
            }
        }
    }
}

#[test]
fn keel_matches_closed_form_beyond_the_grid() {
    let caps = Caps::default();
    for (m, text) in [(1, "1,1,1,1,1"), (1, "1,1/2,1/2,1/2,1/2"), (3, "1,1"), (3, "1,1/2,1/2"), (1, "1,1,1/3,1/3,1/3")] {
        let base = projective_space(m).unwrap();
        let weights = w(text);
        let closed = hilbert_function(&theorem8_ideal(&base, &weights), &caps).unwrap();
        let keel = keel_betti(&base, &building_set(&weights), &caps).unwrap();
        assert_eq!(closed, keel, "m={m} A=({text})");
        assert!(closed.is_poincare_symmetric());
    }
}

#[test]
fn degree_is_zero_on_overlapping_products() {
    let base = projective_space(1).unwrap();
    let p = theorem8_ideal(&base, &w("1,1,1"));
    let ring = QuotientRing::new(&p, &Caps::default()).unwrap();
    let v = p.variables();
    for filler in ["h1", "D_123", "h3", "D_12"] {
        let f = v.parse(&format!("D_12*D_13*{filler}")).unwrap();
        assert_eq!(ring.degree(&f).unwrap(), BigRational::from_integer(0.into()));
    }
    assert!(ring.degree(&v.parse("h1*h2*h3").unwrap()).unwrap().is_one());
}

#[test]
fn presentation_json_roundtrips() {
    for (m, text) in [(1, "1,1,1,1"), (2, "1,1/2,1/2")] {
        let p = theorem8_ideal(&projective_space(m).unwrap(), &w(text));
        let json = serde_json::to_string(&p.to_json()).unwrap();
        let back: PresentationJson = serde_json::from_str(&json).unwrap();
        assert_eq!(Presentation::from_json(&back).unwrap(), p);
    }
}

#[test]
fn large_presentations_hit_the_cap() {
    let p = theorem8_ideal(&projective_space(1).unwrap(), &WeightVector::ones(7).unwrap());
    assert!(p.layout.nvars() > 40);
    let err = hilbert_function(&p, &Caps::default()).unwrap_err();
    assert!(err.is_resource_cap());
}
