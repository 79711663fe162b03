use approx::assert_relative_eq;
use proptest::prelude::*;

use engel::curves::{self, Basis, Description, LegendrianGenerator, LegendrianLoop, Term, TrigSeries};
use engel::frontlang::{self, Document, GeneratorDecl};
use engel::{invariants, lifting, models, Tolerances};

/// A circle traversed `k0` times plus small harmonics up to order 6.
fn generator(n: usize) -> impl Strategy<Value = LegendrianGenerator> {
    (1..=3u32, any::<bool>(), prop::collection::vec(-1.0..1.0f64, 24)).prop_map(move |(k0, flip, c)| {
        let mut x = TrigSeries::cos(k0);
        let mut y = TrigSeries::default().with(if flip { -1.0 } else { 1.0 }, Basis::Sin(k0));
        for k in 1..=6u32 {
            let a = 0.15 / (k * k) as f64;
            let i = 4 * (k as usize - 1);
            x = x.with(a * c[i], Basis::Cos(k)).with(a * c[i + 1], Basis::Sin(k));
            y = y.with(a * c[i + 2], Basis::Cos(k)).with(a * c[i + 3], Basis::Sin(k));
        }
        curves::sample_generator(&Description::Series { x, y }, n).unwrap()
    })
}

/// Non-empty series; the grammar has no spelling for an empty one.
fn series() -> impl Strategy<Value = TrigSeries> {
    let basis = prop_oneof![Just(Basis::Const), (1..=64u32).prop_map(Basis::Cos), (1..=64u32).prop_map(Basis::Sin)];
    let coeff = prop_oneof![Just(1.0), -1e9..1e9f64, -1e-5..1e-5f64, (-50i32..50).prop_map(f64::from)];
    prop::collection::vec((coeff, basis).prop_map(|(coeff, basis)| Term { coeff, basis }), 1..5).prop_map(TrigSeries::new)
}

fn document() -> impl Strategy<Value = Document> {
    prop::collection::vec((series(), series()), 0..4).prop_map(|pairs| Document {
        generators: pairs
            .into_iter()
            .enumerate()
            .map(|(i, (x, y))| GeneratorDecl {
                name: format!("gen_{i}"),
                x,
                y,
            })
            .collect(),
        scripts: Vec::new(),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn area_is_additive_and_antisymmetric(g in generator(512), a in 0.0..1.0f64, b in 0.0..1.0f64, c in 0.0..1.0f64) {
        let l = LegendrianLoop::integrate(g, 0.0);
        let (ab, bc, ac) = (lifting::area_integral(&l, a, b), lifting::area_integral(&l, b, c), lifting::area_integral(&l, a, c));
        assert_relative_eq!(ab + bc, ac, epsilon = 1e-9, max_relative = 1e-9);
        assert_relative_eq!(lifting::area_integral(&l, b, a), -ab, epsilon = 1e-12);
    }

    #[test]
    fn winding_and_cusp_rotation_agree(g in generator(1024)) {
        let g = lifting::balance_closure(&g).unwrap();
        let r = invariants::invariant_report(&g, &Tolerances::default()).unwrap();
        prop_assert_eq!(r.rot_winding, r.rot_cusp);
        prop_assert_eq!(r.rot_cusp, (r.c_minus - r.c_plus) / 2);
    }

    #[test]
    fn balancing_keeps_rotation_number(g in generator(1024)) {
        let before = invariants::rot_winding(&g).unwrap();
        let balanced = lifting::balance_closure(&g).unwrap();
        prop_assert_eq!(invariants::rot_winding(&balanced).unwrap(), before);
        prop_assert!(lifting::z_closure_defect(&balanced).abs() <= 1e-9);
        prop_assert!(lifting::w_closure_defect(&balanced).abs() <= 1e-9);
    }

    #[test]
    fn reversal_negates_rotation(g in generator(1024)) {
        let l = lifting::lift(&lifting::balance_closure(&g).unwrap(), 0.0, 0.0).unwrap();
        let r = models::orientation_reverse(&l);
        let rot = |l: &engel::HorizontalLoop| invariants::rot_winding(l.generator()).unwrap();
        prop_assert_eq!(rot(&r), -rot(&l));
        let (e, er) = (lifting::embedding_check(&l).unwrap(), lifting::embedding_check(&r).unwrap());
        prop_assert_eq!(e.double_points.len(), er.double_points.len());
        prop_assert_eq!(e.embedded, er.embedded);
        if e.margin.is_finite() {
            assert_relative_eq!(e.margin, er.margin, max_relative = 1e-6);
        } else {
            prop_assert!(er.margin.is_infinite());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn documents_round_trip(doc in document()) {
        let text = frontlang::emit(&doc);
        prop_assert_eq!(frontlang::parse(&text).unwrap(), doc);
    }

    #[test]
    fn parser_never_panics(text in "\\PC{0,200}") {
        let _ = frontlang::parse(&text);
    }

    #[test]
    fn parser_reports_positions_inside_input(text in "[a-z{}();:+=0-9. \n-]{0,120}") {
        if let Err(e) = frontlang::parse(&text) {
            let (line, col) = e.position();
            prop_assert!(line >= 1 && col >= 1);
            prop_assert!(line <= text.lines().count().max(1) + 1);
        }
    }
}
