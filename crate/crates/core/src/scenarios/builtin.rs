//! Small exhaustive scenarios: a four-point space under `Z_4`, and coherent
//! state systems of `dihedral:4` and the binary tetrahedral group.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{random_density_weights, random_model, run_scenario, ScenarioConfig, ScenarioError};
use crate::algebra::{self, c, CMatrix, CVector};
use crate::coherent::{
    self, binary_tetrahedral_spin_half, dihedral4_irrep, frame_operator, frame_spectrum,
    is_irreducible, make_coherent, unitary_transport, CoherentSystem, StateFamily, UnitaryRep,
};
use crate::groups::{
    all_subgroups, check_homomorphism, cyclic, dihedral_on_polygon, haar_measure,
    haar_measure_from_translations, invariant_measure, GroupAction, Side,
};
use crate::quantize::{
    self, build_density_normalized, build_operator, build_povm, covariance_check,
    eigen_orbit_partition, QuantizeError, ResolutionPolicy,
};
use crate::report::{Check, VerificationReport};
use crate::variables::{
    accessibility_leq, induce_group, is_permissible, maximal_in_family,
    maximal_permissible_subgroup, ConceptualVariable, Witness,
};

fn pauli_x() -> CMatrix {
    algebra::real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

/// A square root of `X`, so that `V(2) = X` for `V(k) = S^k`.
fn sqrt_x() -> CMatrix {
    let (p, m) = (c(0.5, 0.5), c(0.5, -0.5));
    CMatrix::from_row_slice(2, 2, &[p, m, m, p])
}

fn max_covariance_error(
    var: &ConceptualVariable,
    act: &GroupAction,
    rep: &UnitaryRep,
    elements: &[usize],
) -> Result<f64, ScenarioError> {
    let family = StateFamily::standard_basis(var.value_count());
    let labels = var.real_labels().unwrap_or_default();
    let mut worst = 0.0f64;
    for &h in elements {
        worst = worst.max(covariance_check(&family, &labels, var, act, rep, h)?.error);
    }
    Ok(worst)
}

/// Parity and the indicator of `{0, 1}` on `Z_4` acting on itself.
pub(super) fn pedagogy_checks() -> Result<Vec<Check>, ScenarioError> {
    let group = Arc::new(cyclic(4)?);
    let act = GroupAction::regular(group.clone());
    let parity = ConceptualVariable::from_ids(vec![0, 1, 0, 1])?;
    let indicator = ConceptualVariable::from_ids(vec![1, 1, 0, 0])?;
    let position = ConceptualVariable::from_ids(vec![0, 1, 2, 3])?;
    let mut checks = Vec::new();

    let p = is_permissible(&parity, &act)?;
    checks.push(Check::exact(
        "parity-permissible",
        "permissibility",
        p.permissible,
        "phi mod 2 is permissible under Z_4",
    ));
    let q = is_permissible(&indicator, &act)?;
    let expected_witness = Witness {
        element: 1,
        first: 0,
        second: 1,
    };
    checks.push(Check::exact(
        "indicator-not-permissible",
        "permissibility",
        !q.permissible && q.witness == Some(expected_witness),
        format!("witness {:?}", q.witness),
    ));

    let induced = induce_group(&parity, &act)?;
    let hom = check_homomorphism(&group, &induced.image_group, &induced.homomorphism)?;
    checks.push(Check::exact(
        "induced-homomorphism",
        "induced group",
        hom.holds && induced.image_group.order() == 2,
        format!(
            "all 16 pairs checked; image of order {}, violation {:?}",
            induced.image_group.order(),
            hom.violation
        ),
    ));
    checks.push(Check::exact(
        "induced-kernel",
        "induced group",
        induced.kernel == vec![0, 2],
        format!("kernel {:?}", induced.kernel),
    ));
    let consistent = (0..4).all(|k| {
        (0..4).all(|phi| {
            induced.induced_perm[k][parity.value(phi)] == parity.value(act.apply(k, phi))
        })
    });
    checks.push(Check::exact(
        "induced-consistency",
        "induced group",
        consistent,
        "g(theta(phi)) = theta(k phi) for every k and phi",
    ));

    let h = maximal_permissible_subgroup(&indicator, &act)?;
    checks.push(Check::exact(
        "maximal-permissible-subgroup",
        "maximal permissible subgroup",
        h == vec![0, 2],
        format!("H = {h:?}"),
    ));
    let mut verdicts = Vec::new();
    let mut maximal = true;
    for sub in all_subgroups(&group) {
        let permissible = is_permissible(&indicator, &act.restrict(&sub)?)?.permissible;
        let inside = sub.iter().all(|x| h.contains(x));
        maximal &= permissible == inside;
        verdicts.push(format!("{sub:?}: {permissible}"));
    }
    checks.push(Check::exact(
        "subgroup-maximality",
        "maximal permissible subgroup",
        maximal,
        format!(
            "permissible exactly on subgroups of H; {}",
            verdicts.join(", ")
        ),
    ));

    let order_ok = accessibility_leq(&parity, &position)?.is_some()
        && accessibility_leq(&indicator, &position)?.is_some()
        && accessibility_leq(&parity, &indicator)?.is_none()
        && accessibility_leq(&indicator, &parity)?.is_none()
        && accessibility_leq(&position, &parity)?.is_none();
    let top = maximal_in_family(&[position.clone(), parity.clone(), indicator.clone()])?;
    checks.push(Check::exact(
        "accessibility-order",
        "accessibility order",
        order_ok && top == vec![0],
        format!("parity and indicator are functions of phi and incomparable; maximal {top:?}"),
    ));

    let shift_rep = UnitaryRep::from_generators(group.clone(), 2, &[pauli_x()])?;
    let all: Vec<usize> = (0..4).collect();
    checks.push(Check::within(
        "covariance-parity",
        "covariance under the permissible subgroup",
        max_covariance_error(&parity, &act, &shift_rep, &all)?,
        1e-9,
        "V(k) = X^k, all k in Z_4",
    ));
    let root_rep = UnitaryRep::from_generators(group.clone(), 2, &[sqrt_x()])?;
    checks.push(Check::within(
        "covariance-indicator",
        "covariance under the permissible subgroup",
        max_covariance_error(&indicator, &act, &root_rep, &h)?,
        1e-9,
        format!("V(k) = S^k with S^2 = X, h in {h:?}"),
    ));
    let outside = covariance_check(
        &StateFamily::standard_basis(2),
        &[0.0, 1.0],
        &indicator,
        &act,
        &root_rep,
        1,
    );
    checks.push(Check::exact(
        "covariance-outside-h",
        "covariance under the permissible subgroup",
        matches!(outside, Err(QuantizeError::NotInSubgroupH(1))),
        "element 1 is rejected",
    ));

    let bundle = build_operator(
        &StateFamily::standard_basis(2),
        &[0.0, 1.0],
        ResolutionPolicy::Enforce,
    )?;
    let orbits = eigen_orbit_partition(&bundle, &induced)?;
    checks.push(Check::exact(
        "eigenvalue-orbits",
        "eigenvalue orbits",
        orbits.orbits == vec![vec![0.0, 1.0]] && orbits.full_symmetric,
        format!(
            "orbits {:?}, induced group of order {}",
            orbits.orbits, orbits.image_order
        ),
    ));

    Ok(checks)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoherentParams {
    /// Fiducial vector as `[re, im]` pairs; defaults to the first basis vector.
    #[serde(default)]
    pub fiducial: Option<Vec<[f64; 2]>>,
}

impl CoherentParams {
    fn fiducial(&self, dim: usize) -> Result<CVector, ScenarioError> {
        let Some(entries) = &self.fiducial else {
            return Ok(algebra::basis_vector(dim, 0));
        };
        if entries.len() != dim {
            return Err(ScenarioError::BadParam(format!(
                "fiducial has {} entries, the representation has dimension {dim}",
                entries.len()
            )));
        }
        let v = CVector::from_iterator(dim, entries.iter().map(|[re, im]| c(*re, *im)));
        if !(v.norm().is_finite() && v.norm() > 0.0) {
            return Err(ScenarioError::BadParam(
                "fiducial must be nonzero and finite".into(),
            ));
        }
        Ok(v)
    }
}

/// `sum_k w_k V(k)|phi><phi|V(k)^H`, computed term by term.
fn direct_frame_sum(rep: &UnitaryRep, weights: &[f64], fiducial: &CVector) -> CMatrix {
    let d = rep.dim();
    let mut t = CMatrix::zeros(d, d);
    for (v, w) in rep.matrices().iter().zip(weights) {
        let s = v * fiducial;
        t += &s * s.adjoint() * c(*w, 0.0);
    }
    t
}

/// Checks shared by every coherent system on the regular action.
fn coherent_system_checks(
    cs: &CoherentSystem,
    scalar_tol: f64,
    checks: &mut Vec<Check>,
) -> Result<StateFamily, ScenarioError> {
    let d = cs.rep.dim();
    let (a, b, defect) = cs.rep.worst_homomorphism_pair();
    checks.push(Check::within(
        "representation",
        "unitary representation",
        defect,
        coherent::HOMOMORPHISM_TOL,
        format!(
            "worst pair ({a}, {b}) over {} elements",
            cs.rep.group().order()
        ),
    ));
    checks.push(Check::exact(
        "irreducible",
        "unitary representation",
        cs.irreducibility.irreducible,
        format!(
            "commutant dimension {}",
            cs.irreducibility.commutant_dimension
        ),
    ));

    let t = direct_frame_sum(&cs.rep, &cs.weights, &cs.fiducial);
    let mass: f64 = cs.weights.iter().sum();
    let expected = mass * cs.fiducial.norm_squared() / d as f64;
    let scalar = (&t - algebra::identity(d) * c(expected, 0.0)).norm();
    checks.push(Check::within(
        "frame-scalar",
        "resolution of the identity",
        scalar,
        scalar_tol,
        format!("T = {expected} I by direct summation"),
    ));
    let commute = coherent::commutation_defect(&cs.rep, &t);
    checks.push(Check::within(
        "frame-commutes",
        "resolution of the identity",
        commute,
        coherent::COMMUTATION_TOL * t.norm().max(1.0),
        "V(h) T = T V(h) for every h",
    ));
    let spectrum = frame_spectrum(&t)?;
    checks.push(Check::exact(
        "frame-positive",
        "resolution of the identity",
        spectrum.rank == d && spectrum.min_eigenvalue > 0.0,
        format!(
            "rank {}, smallest eigenvalue {}",
            spectrum.rank, spectrum.min_eigenvalue
        ),
    ));

    let frame = frame_operator(cs)?;
    checks.push(Check::within(
        "frame-constant",
        "resolution of the identity",
        (frame.lambda - expected).abs(),
        scalar_tol,
        format!("trace(T)/d = {}", frame.lambda),
    ));
    let normalized = cs.normalized_family(&frame);
    let resolution = (normalized.frame_sum() - algebra::identity(d)).norm();
    checks.push(Check::within(
        "normalized-resolution",
        "resolution of the identity",
        resolution,
        1e-9,
        "sum of (w / lambda) |phi><phi| equals I",
    ));
    Ok(normalized)
}

fn regular_system(rep: UnitaryRep, fiducial: CVector) -> Result<CoherentSystem, ScenarioError> {
    let group = rep.group().clone();
    let act = GroupAction::regular(group.clone());
    let measure = invariant_measure(&act, &[group.order() as f64])?;
    Ok(make_coherent(rep, act, 0, fiducial, measure)?)
}

pub(super) fn coherent_d4_checks(params: &CoherentParams) -> Result<Vec<Check>, ScenarioError> {
    let rep = dihedral4_irrep()?;
    let fiducial = params.fiducial(2)?;
    let cs = regular_system(rep.clone(), fiducial.clone())?;
    let mut checks = Vec::new();
    coherent_system_checks(&cs, 1e-10, &mut checks)?;
    let expected = 8.0 * fiducial.norm_squared() / 2.0;

    let s = 1.0 / 2f64.sqrt();
    let hadamard = algebra::real_matrix(2, 2, &[s, s, s, -s]);
    let moved = unitary_transport(&cs, &hadamard)?;
    let moved_t = direct_frame_sum(&moved.rep, &moved.weights, &moved.fiducial);
    let moved_frame = frame_operator(&moved)?;
    checks.push(Check::within(
        "unitary-transport",
        "resolution of the identity",
        (moved_t - algebra::identity(2) * c(expected, 0.0))
            .norm()
            .max((moved_frame.lambda - expected).abs()),
        1e-10,
        "an equivalent representation gives the same frame constant",
    ));

    let regular = UnitaryRep::left_regular(rep.group().clone());
    let commutant = is_irreducible(&regular, coherent::DEFAULT_COMMUTANT_TOL).commutant_dimension;
    checks.push(Check::exact(
        "left-regular-commutant",
        "unitary representation",
        commutant == 8,
        format!("commutant dimension {commutant}, the sum of squared irrep dimensions 1+1+1+1+4"),
    ));

    let group = rep.group();
    let haar = haar_measure(group);
    let left = haar_measure_from_translations(group, Side::Left);
    let right = haar_measure_from_translations(group, Side::Right);
    checks.push(Check::exact(
        "haar-invariance",
        "invariant measure",
        left == haar && right == haar,
        "left and right translation invariant measures agree with counting measure",
    ));

    let polygon = dihedral_on_polygon(4)?;
    let measure = invariant_measure(&polygon, &[4.0])?;
    let invariant = measure.is_invariant_under(&polygon);
    let on_polygon = make_coherent(rep, polygon, 0, fiducial, measure)?;
    let t = direct_frame_sum(&on_polygon.rep, &on_polygon.weights, &on_polygon.fiducial);
    checks.push(Check::within(
        "polygon-frame",
        "resolution of the identity",
        (t - algebra::identity(2) * c(expected, 0.0)).norm(),
        1e-10,
        format!("square vertices with unit weights, invariant measure: {invariant}"),
    ));
    if !invariant {
        checks.push(Check::exact(
            "polygon-measure",
            "invariant measure",
            false,
            "not invariant",
        ));
    }

    Ok(checks)
}

pub(super) fn coherent_bt24_checks<R: Rng>(
    params: &CoherentParams,
    rng: &mut R,
) -> Result<Vec<Check>, ScenarioError> {
    let rep = binary_tetrahedral_spin_half()?;
    let order = rep.group().order();
    let cs = regular_system(rep, params.fiducial(2)?)?;
    let mut checks = vec![Check::exact(
        "group-order",
        "unitary representation",
        order == 24,
        format!("{order} elements generated by i and (1 + i + j + k) / 2"),
    )];
    let normalized = coherent_system_checks(&cs, 1e-9, &mut checks)?;

    let mut completeness = 0.0f64;
    let mut trace_err = 0.0f64;
    let mut min_eig = f64::INFINITY;
    for _ in 0..5 {
        let outcomes = rng.random_range(2..=5);
        let model = random_model(rng, normalized.len(), outcomes)?;
        let povm = build_povm(&model, &normalized)?;
        completeness = completeness.max(povm.completeness_deviation());
        min_eig = min_eig.min(povm.min_eigenvalue()?);
        let sigma =
            build_density_normalized(&random_density_weights(rng, normalized.len()), &normalized)?;
        trace_err = trace_err.max((sigma.trace() - 1.0).abs());
        min_eig = min_eig.min(sigma.min_eigenvalue()?);
    }
    checks.push(Check::within(
        "povm-completeness",
        "measurement from a statistical model",
        completeness,
        quantize::MEASUREMENT_TOL,
        "5 seeded models on the normalized coherent family",
    ));
    checks.push(Check::within(
        "density-trace",
        "density operator from a weight function",
        trace_err,
        quantize::MEASUREMENT_TOL,
        "normalized density operators have trace 1",
    ));
    checks.push(Check::at_least(
        "positivity",
        "measurement from a statistical model",
        min_eig,
        -1e-12,
        format!("smallest effect or density eigenvalue {min_eig:e}"),
    ));
    Ok(checks)
}

fn run_builtin(name: &str) -> Result<VerificationReport, ScenarioError> {
    run_scenario(&ScenarioConfig::new(name), None)
}

pub fn pedagogy_z4() -> Result<VerificationReport, ScenarioError> {
    run_builtin("pedagogy_z4")
}

pub fn coherent_d4() -> Result<VerificationReport, ScenarioError> {
    run_builtin("coherent_d4")
}

pub fn coherent_bt24() -> Result<VerificationReport, ScenarioError> {
    run_builtin("coherent_bt24")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn assert_all_pass(checks: &[Check]) {
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }

    #[test]
    fn pedagogy_passes() {
        assert_all_pass(&pedagogy_checks().unwrap());
    }

    #[test]
    fn dihedral_passes_for_several_fiducials() {
        assert_all_pass(&coherent_d4_checks(&CoherentParams::default()).unwrap());
        let params = CoherentParams {
            fiducial: Some(vec![[0.3, -1.0], [2.0, 0.5]]),
        };
        assert_all_pass(&coherent_d4_checks(&params).unwrap());
    }

    #[test]
    fn tetrahedral_passes() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        assert_all_pass(&coherent_bt24_checks(&CoherentParams::default(), &mut rng).unwrap());
    }

    #[test]
    fn bad_fiducials() {
        let params = CoherentParams {
            fiducial: Some(vec![[1.0, 0.0]]),
        };
        assert!(matches!(
            coherent_d4_checks(&params),
            Err(ScenarioError::BadParam(_))
        ));
        let params = CoherentParams {
            fiducial: Some(vec![[0.0, 0.0], [0.0, 0.0]]),
        };
        assert!(matches!(
            coherent_d4_checks(&params),
            Err(ScenarioError::BadParam(_))
        ));
    }

    #[test]
    fn direct_sum_matches_frame_operator() {
        let cs = regular_system(dihedral4_irrep().unwrap(), algebra::basis_vector(2, 1)).unwrap();
        let t = direct_frame_sum(&cs.rep, &cs.weights, &cs.fiducial);
        let frame = frame_operator(&cs).unwrap();
        assert!((t - frame.t).norm() < 1e-12);
    }
}
