use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;

use groupquant::algebra::{self, CMatrix, CVector};
use groupquant::coherent::StateFamily;
use groupquant::groups::{
    all_subgroups, cyclic, dihedral_on_polygon, invariant_measure, subgroup_generated, GroupAction,
};
use groupquant::quantize::{build_operator, build_povm, ResolutionPolicy, StatisticalModel};
use groupquant::variables::{
    accessibility_leq, induce_group, induced_value_permutation, is_permissible,
    maximal_permissible_subgroup, ConceptualVariable,
};

fn hermitian(dim: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec(-2.0f64..2.0, 2 * dim * dim).prop_map(move |xs| {
        let m = CMatrix::from_fn(dim, dim, |i, j| {
            Complex64::new(xs[2 * (i * dim + j)], xs[2 * (i * dim + j) + 1])
        });
        (&m + m.adjoint()) * Complex64::new(0.5, 0.0)
    })
}

fn sized_hermitian() -> impl Strategy<Value = CMatrix> {
    (1usize..=6).prop_flat_map(hermitian)
}

/// Size `n` and a value in `0..4` for each of `n` points.
fn cyclic_variable() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (2usize..=12).prop_flat_map(|n| (Just(n), prop::collection::vec(0usize..4, n)))
}

fn variable(values: &[usize]) -> ConceptualVariable {
    // Renumber to consecutive ids.
    let mut seen: Vec<usize> = Vec::new();
    let ids = values
        .iter()
        .map(|v| match seen.iter().position(|s| s == v) {
            Some(i) => i,
            None => {
                seen.push(*v);
                seen.len() - 1
            }
        })
        .collect();
    ConceptualVariable::from_ids(ids).unwrap()
}

fn z_n(n: usize) -> GroupAction {
    GroupAction::regular(Arc::new(cyclic(n).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectral_reconstruction(a in sized_hermitian()) {
        let s = algebra::eig_hermitian(&a, algebra::DEFAULT_DEGENERACY_TOL).unwrap();
        prop_assert!((s.reconstruct() - &a).norm() <= 1e-9 * a.norm().max(1.0));
        let n = a.nrows();
        let total = s.projections.iter().fold(CMatrix::zeros(n, n), |acc, p| acc + p);
        prop_assert!((total - algebra::identity(n)).norm() < 1e-9);
        for (i, p) in s.projections.iter().enumerate() {
            prop_assert!((p * p - p).norm() < 1e-9);
            for q in &s.projections[i + 1..] {
                prop_assert!((p * q).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn exponential_group_law(a in sized_hermitian(), s in -4.0f64..4.0, t in -4.0f64..4.0) {
        let es = algebra::expm_antihermitian(&a, s).unwrap();
        let et = algebra::expm_antihermitian(&a, t).unwrap();
        let est = algebra::expm_antihermitian(&a, s + t).unwrap();
        prop_assert!((es * &et - est).norm() < 1e-8);
        prop_assert!(algebra::unitarity_defect(&et) < 1e-9);
    }

    #[test]
    fn unitary_change_of_basis_keeps_spectrum(
        generator in hermitian(4),
        labels in prop::collection::vec(-3.0f64..3.0, 4),
    ) {
        let w = algebra::expm_antihermitian(&generator, 1.0).unwrap();
        let basis = StateFamily::standard_basis(4);
        let moved = basis.transport(&w).unwrap();
        let before = build_operator(&basis, &labels, ResolutionPolicy::Enforce).unwrap();
        let after = build_operator(&moved, &labels, ResolutionPolicy::Enforce).unwrap();
        let (x, _) = algebra::eigh(&before.a).unwrap();
        let (y, _) = algebra::eigh(&after.a).unwrap();
        for (p, q) in x.iter().zip(&y) {
            prop_assert!((p - q).abs() < 1e-9);
        }
    }

    #[test]
    fn spectral_expectation_agrees(
        generator in hermitian(3),
        labels in prop::collection::vec(-3.0f64..3.0, 3),
        v in prop::collection::vec(-1.0f64..1.0, 6),
    ) {
        let w = algebra::expm_antihermitian(&generator, 1.0).unwrap();
        let family = StateFamily::standard_basis(3).transport(&w).unwrap();
        let bundle = build_operator(&family, &labels, ResolutionPolicy::Enforce).unwrap();
        let v = CVector::from_iterator(3, (0..3).map(|i| Complex64::new(v[2 * i], v[2 * i + 1])));
        prop_assume!(v.norm() > 1e-3);
        let (direct, via) = bundle.spectral_expectation(&(&v / Complex64::new(v.norm(), 0.0)));
        prop_assert!((direct - via).abs() < 1e-9);
    }

    #[test]
    fn povm_is_complete(
        generator in hermitian(3),
        raw in prop::collection::vec(0.01f64..1.0, 9),
    ) {
        let w = algebra::expm_antihermitian(&generator, 1.0).unwrap();
        let family = StateFamily::standard_basis(3).transport(&w).unwrap();
        let rows = raw
            .chunks(3)
            .map(|r| {
                let s: f64 = r.iter().sum();
                r.iter().map(|x| x / s).collect()
            })
            .collect();
        let povm = build_povm(&StatisticalModel::new(rows).unwrap(), &family).unwrap();
        prop_assert!(povm.completeness_deviation() < 1e-10);
        prop_assert!(povm.min_eigenvalue().unwrap() > -1e-12);
    }

    #[test]
    fn invariant_measure_is_invariant(n in 3usize..=9, mass in 0.1f64..10.0) {
        let act = dihedral_on_polygon(n).unwrap();
        let m = invariant_measure(&act, &[mass]).unwrap();
        prop_assert!(m.is_invariant_under(&act));
        prop_assert!((m.weights.iter().sum::<f64>() - mass).abs() < 1e-12);
    }

    #[test]
    fn induced_action_is_consistent((n, values) in cyclic_variable()) {
        let act = z_n(n);
        let var = variable(&values);
        if let Ok(induced) = induce_group(&var, &act) {
            for k in 0..n {
                for phi in 0..n {
                    prop_assert_eq!(induced.induced_perm[k][var.value(phi)], var.value(act.apply(k, phi)));
                }
            }
            for a in 0..n {
                for b in 0..n {
                    let ab = act.group().mul(a, b);
                    prop_assert_eq!(
                        induced.homomorphism[ab],
                        induced.image_group.mul(induced.homomorphism[a], induced.homomorphism[b])
                    );
                }
            }
        } else {
            prop_assert!(!is_permissible(&var, &act).unwrap().permissible);
        }
    }

    #[test]
    fn permissibility_is_inherited_by_subgroups((n, values) in cyclic_variable()) {
        let act = z_n(n);
        let var = variable(&values);
        if is_permissible(&var, &act).unwrap().permissible {
            for s in all_subgroups(act.group()) {
                prop_assert!(is_permissible(&var, &act.restrict(&s).unwrap()).unwrap().permissible);
            }
        }
    }

    #[test]
    fn maximal_subgroup_cannot_grow((n, values) in cyclic_variable()) {
        let var = variable(&values);
        for act in [z_n(n), dihedral_on_polygon(n).unwrap()] {
            let order = act.group().order();
            let h = maximal_permissible_subgroup(&var, &act).unwrap();
            for &k in &h {
                prop_assert!(induced_value_permutation(&var, &act, k).is_some());
            }
            for extra in (0..order).filter(|x| !h.contains(x)) {
                let mut gens = h.clone();
                gens.push(extra);
                let bigger = subgroup_generated(act.group(), &gens).unwrap();
                let fails = bigger
                    .iter()
                    .any(|&k| induced_value_permutation(&var, &act, k).is_none());
                prop_assert!(fails, "H = {:?} extends by {}", h, extra);
            }
        }
    }

    #[test]
    fn accessibility_is_a_preorder(
        (n, a) in cyclic_variable(),
        b_seed in prop::collection::vec(0usize..3, 12),
        c_seed in prop::collection::vec(0usize..2, 12),
    ) {
        let alpha = variable(&a);
        let beta = variable(&b_seed[..n]);
        let gamma = variable(&c_seed[..n]);
        prop_assert!(accessibility_leq(&alpha, &alpha).unwrap().is_some());
        let ab = accessibility_leq(&alpha, &beta).unwrap().is_some();
        let bg = accessibility_leq(&beta, &gamma).unwrap().is_some();
        if ab && bg {
            prop_assert!(accessibility_leq(&alpha, &gamma).unwrap().is_some());
        }
    }
}
