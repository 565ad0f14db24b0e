//! Exhaustive agreement between the closed-form representability conditions
//! and the brute-force atom decomposition, over the full 0.05 grid of weight
//! triples for both combination kinds. No sampling: all 9261 x 2 cases.

use conceptfock::classicality::BOUNDARY_TOL;
use conceptfock::{
    classify, conjunction_diagnostics, disjunction_diagnostics, kolmogorov_oracle,
    CombinationKind, MembershipRecord,
};

fn grid(i: u32) -> f64 {
    i as f64 / 20.0
}

#[test]
fn conditions_match_oracle_on_every_grid_triple() {
    let mut checked = 0usize;
    for ia in 0..=20 {
        for ib in 0..=20 {
            for ic in 0..=20 {
                let (a, b, c) = (grid(ia), grid(ib), grid(ic));
                for kind in [CombinationKind::Conjunction, CombinationKind::Disjunction] {
                    let record = MembershipRecord::new("grid", "A", "B", a, b, c, kind).unwrap();
                    let (delta, k) = match kind {
                        CombinationKind::Conjunction => {
                            conjunction_diagnostics(a, b, c).unwrap()
                        }
                        CombinationKind::Disjunction => {
                            disjunction_diagnostics(a, b, c).unwrap()
                        }
                    };
                    let closed_form = delta <= BOUNDARY_TOL && k >= -BOUNDARY_TOL;
                    let atoms = kolmogorov_oracle(&record);
                    assert_eq!(
                        closed_form,
                        atoms.is_some(),
                        "disagreement at ({a}, {b}, {c}, {kind:?}): delta={delta}, k={k}"
                    );
                    let report = classify(&record);
                    assert_eq!(report.classical, closed_form);
                    checked += 1;
                }
            }
        }
    }
    assert_eq!(checked, 21 * 21 * 21 * 2);
}

#[test]
fn decompositions_reconstruct_records_on_grid() {
    for ia in 0..=20 {
        for ib in 0..=20 {
            for ic in 0..=20 {
                let (a, b, c) = (grid(ia), grid(ib), grid(ic));
                for kind in [CombinationKind::Conjunction, CombinationKind::Disjunction] {
                    let record = MembershipRecord::new("grid", "A", "B", a, b, c, kind).unwrap();
                    if let Some(atoms) = kolmogorov_oracle(&record) {
                        assert!((atoms.sum() - 1.0).abs() <= 1e-12);
                        assert!((atoms.marginal_a() - a).abs() <= 1e-12);
                        assert!((atoms.marginal_b() - b).abs() <= 1e-12);
                        assert!((atoms.combination(kind) - c).abs() <= 1e-12);
                        assert!(atoms.p_ab >= 0.0
                            && atoms.p_a_notb >= 0.0
                            && atoms.p_nota_b >= 0.0
                            && atoms.p_nota_notb >= 0.0);
                    }
                }
            }
        }
    }
}

#[test]
fn diagnostics_symmetric_under_weight_swap() {
    for ia in 0..=20 {
        for ib in 0..=20 {
            for ic in 0..=20 {
                let (a, b, c) = (grid(ia), grid(ib), grid(ic));
                assert_eq!(
                    conjunction_diagnostics(a, b, c).unwrap(),
                    conjunction_diagnostics(b, a, c).unwrap()
                );
                assert_eq!(
                    disjunction_diagnostics(a, b, c).unwrap(),
                    disjunction_diagnostics(b, a, c).unwrap()
                );
            }
        }
    }
}

#[test]
fn conjunction_disjunction_duality() {
    // Complementing all three weights swaps the roles of the two condition
    // pairs (De Morgan on the atoms).
    for ia in 0..=20 {
        for ib in 0..=20 {
            for ic in 0..=20 {
                let (a, b, c) = (grid(ia), grid(ib), grid(ic));
                let (dc, kc) = conjunction_diagnostics(a, b, c).unwrap();
                let (dd, kd) = disjunction_diagnostics(1.0 - a, 1.0 - b, 1.0 - c).unwrap();
                assert!((dc - dd).abs() <= 1e-12, "delta at ({a}, {b}, {c})");
                assert!((kc - kd).abs() <= 1e-12, "k at ({a}, {b}, {c})");
            }
        }
    }
}
