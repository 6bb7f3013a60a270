//! Spin components as accessible variables of an inaccessible spin vector.
//!
//! The inaccessible variable is a point `phi` on a sphere of radius `r`,
//! sampled at finitely many points; the accessible component is
//! `theta^a(phi) = a . phi`. A rotation by pi about an axis `b` orthogonal to
//! `a` reverses the component and generates the sign-flip group.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{
    random_density_weights, random_model, random_unit_vector, run_scenario, ScenarioConfig,
    ScenarioError,
};
use crate::algebra::{self, c, CMatrix, CVector};
use crate::coherent::{StateFamily, UnitaryRep};
use crate::groups::{cyclic, GroupAction};
use crate::quantize::{
    self, build_density_normalized, build_operator, build_povm, coarse_grain, covariance_check,
    eigen_orbit_partition, maximality_check, model_reduce, question_answer_match, LabeledBasis,
    OperatorBundle, ResolutionPolicy,
};
use crate::report::{Check, VerificationReport};
use crate::variables::{self, ConceptualVariable};

pub type Vec3 = [f64; 3];

const MAX_DIM: usize = 200;
const POINT_MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlipSubgroup {
    /// Rotations by multiples of pi about an axis orthogonal to the direction.
    #[default]
    Flip,
    Trivial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinParams {
    #[serde(default = "default_j")]
    pub j: f64,
    #[serde(default = "default_direction")]
    pub direction: Vec3,
    #[serde(default)]
    pub radius: Option<f64>,
    #[serde(default)]
    pub subgroup: FlipSubgroup,
    /// Sample the component on a grid finer than the spectrum and reduce.
    #[serde(default)]
    pub reduce: bool,
}

fn default_j() -> f64 {
    1.0
}

fn default_direction() -> Vec3 {
    [0.0, 0.0, 1.0]
}

impl Default for SpinParams {
    fn default() -> Self {
        SpinParams {
            j: default_j(),
            direction: default_direction(),
            radius: None,
            subgroup: FlipSubgroup::Flip,
            reduce: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinScenario {
    pub j: f64,
    /// Unit direction `a`.
    pub direction: Vec3,
    /// Unit axis `b` orthogonal to `a`; the flip is a pi rotation about it.
    pub flip_axis: Vec3,
    pub radius: f64,
    pub subgroup: FlipSubgroup,
    pub reduce: bool,
}

impl SpinScenario {
    /// The direction is normalized. The radius defaults to
    /// `max(1, sqrt(j(j+1)))` and must be at least `j`.
    pub fn new(params: &SpinParams) -> Result<Self, ScenarioError> {
        spin_dim(params.j)?;
        let a = params.direction;
        let norm = dot(&a, &a).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(ScenarioError::BadParam(format!(
                "direction {a:?} cannot be normalized"
            )));
        }
        let a = scale(&a, 1.0 / norm);
        let j = params.j;
        let radius = params
            .radius
            .unwrap_or_else(|| (j * (j + 1.0)).sqrt().max(1.0));
        if !(radius.is_finite() && radius > 0.0 && radius >= j) {
            return Err(ScenarioError::BadParam(format!(
                "radius {radius} must be positive and at least j = {j}"
            )));
        }
        Ok(SpinScenario {
            j,
            direction: a,
            flip_axis: perpendicular(&a),
            radius,
            subgroup: params.subgroup,
            reduce: params.reduce,
        })
    }

    pub fn dim(&self) -> usize {
        (2.0 * self.j).round() as usize + 1
    }

    /// `-j, -j+1, .., j`
    pub fn spectrum(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| i as f64 - self.j).collect()
    }

    fn params(&self) -> SpinParams {
        SpinParams {
            j: self.j,
            direction: self.direction,
            radius: Some(self.radius),
            subgroup: self.subgroup,
            reduce: self.reduce,
        }
    }
}

fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn scale(a: &Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn add(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn dist(a: &Vec3, b: &Vec3) -> f64 {
    let d = add(a, &scale(b, -1.0));
    dot(&d, &d).sqrt()
}

/// `y x a` normalized, or `x` when `a` is along `y`. For `a = z` this is `x`.
fn perpendicular(a: &Vec3) -> Vec3 {
    let b = cross(&[0.0, 1.0, 0.0], a);
    let n = dot(&b, &b).sqrt();
    if n < 1e-6 {
        [1.0, 0.0, 0.0]
    } else {
        scale(&b, 1.0 / n)
    }
}

/// Rotation by pi about the unit axis `b`: `v -> 2 (b.v) b - v`.
fn half_turn(b: &Vec3, v: &Vec3) -> Vec3 {
    add(&scale(b, 2.0 * dot(b, v)), &scale(v, -1.0))
}

fn spin_dim(j: f64) -> Result<usize, ScenarioError> {
    let twice = 2.0 * j;
    if !(j.is_finite() && j >= 0.0 && twice.fract() == 0.0) || twice as usize + 1 > MAX_DIM {
        return Err(ScenarioError::BadSpin(j));
    }
    Ok(twice as usize + 1)
}

/// `(J_x, J_y, J_z)` in the basis `|j>, |j-1>, .., |-j>`.
pub fn spin_generators(j: f64) -> Result<[CMatrix; 3], ScenarioError> {
    let d = spin_dim(j)?;
    let m = |i: usize| j - i as f64;
    let mut raise = CMatrix::zeros(d, d);
    for i in 1..d {
        let mi = m(i);
        raise[(i - 1, i)] = c((j * (j + 1.0) - mi * (mi + 1.0)).sqrt(), 0.0);
    }
    let lower = raise.adjoint();
    let jx = (&raise + &lower) * c(0.5, 0.0);
    let jy = (&raise - &lower) * c(0.0, -0.5);
    let jz = algebra::real_diag(&(0..d).map(m).collect::<Vec<_>>());
    Ok([jx, jy, jz])
}

/// `n . J`
pub fn component(generators: &[CMatrix; 3], n: &Vec3) -> CMatrix {
    &generators[0] * c(n[0], 0.0) + &generators[1] * c(n[1], 0.0) + &generators[2] * c(n[2], 0.0)
}

/// `exp(-i angle (axis . J))`; the axis is normalized.
pub fn spin_rotation(j: f64, axis: &Vec3, angle: f64) -> Result<CMatrix, ScenarioError> {
    let gens = spin_generators(j)?;
    let n = dot(axis, axis).sqrt();
    if !(n.is_finite() && n > 0.0) {
        return Err(ScenarioError::BadParam(format!("rotation axis {axis:?}")));
    }
    Ok(algebra::expm_antihermitian(
        &component(&gens, &scale(axis, 1.0 / n)),
        angle,
    )?)
}

/// Rotation taking `z` to `a`: about `z x a` by the angle between them.
fn alignment(j: f64, a: &Vec3) -> Result<CMatrix, ScenarioError> {
    let axis = cross(&[0.0, 0.0, 1.0], a);
    let s = dot(&axis, &axis).sqrt();
    let angle = a[2].clamp(-1.0, 1.0).acos();
    if s < 1e-12 {
        return if a[2] > 0.0 {
            Ok(algebra::identity(spin_dim(j)?))
        } else {
            spin_rotation(j, &[1.0, 0.0, 0.0], PI)
        };
    }
    spin_rotation(j, &axis, angle)
}

/// `|a; m>` for `m = -j, .., j`, obtained by rotating the `J_z` eigenbasis.
pub fn component_basis(j: f64, a: &Vec3) -> Result<Vec<CVector>, ScenarioError> {
    let d = spin_dim(j)?;
    let u = alignment(j, a)?;
    // |m> is basis vector j - m; ascending m runs the basis backwards.
    Ok((0..d).rev().map(|i| u.column(i).into_owned()).collect())
}

/// `A^a = sum_m m |a;m><a;m|`, built from the eigenbasis of `a . J`.
pub fn spin_component_operator(scn: &SpinScenario) -> Result<OperatorBundle, ScenarioError> {
    let basis = component_basis(scn.j, &scn.direction)?;
    let family = StateFamily::unit_weights(basis)?;
    Ok(build_operator(
        &family,
        &scn.spectrum(),
        ResolutionPolicy::Enforce,
    )?)
}

/// The sampled sphere with its component variable and flip action.
struct SampledSphere {
    variable: ConceptualVariable,
    action: GroupAction,
    rep: UnitaryRep,
}

fn sampled_sphere(scn: &SpinScenario) -> Result<SampledSphere, ScenarioError> {
    let steps = if scn.reduce { 2 } else { 1 };
    let count = (scn.dim() - 1) * steps + 1;
    let values: Vec<f64> = (0..count)
        .map(|i| i as f64 / steps as f64 - scn.j)
        .collect();
    let (a, b) = (&scn.direction, &scn.flip_axis);
    let points: Vec<Vec3> = values
        .iter()
        .map(|&v| {
            add(
                &scale(a, v),
                &scale(b, (scn.radius * scn.radius - v * v).sqrt()),
            )
        })
        .collect();
    let variable =
        ConceptualVariable::from_reals(&points.iter().map(|p| dot(a, p)).collect::<Vec<_>>());
    // Components are exact grid values up to rounding; relabel with the grid.
    let variable =
        variable.with_labels(values.iter().map(|&v| variables::Label::Real(v)).collect())?;

    let d = scn.dim();
    match scn.subgroup {
        FlipSubgroup::Flip => {
            let mut perm = Vec::with_capacity(points.len());
            for p in &points {
                let q = half_turn(b, p);
                let target = points
                    .iter()
                    .position(|x| dist(x, &q) <= POINT_MATCH_TOL * scn.radius.max(1.0))
                    .ok_or_else(|| {
                        ScenarioError::Internal(
                            "sample points are not closed under the flip".into(),
                        )
                    })?;
                perm.push(target);
            }
            // cyclic:4 so that the half-integer representation is faithful.
            let group = Arc::new(cyclic(4)?);
            let action = GroupAction::from_generators(group.clone(), points.len(), &[perm])?;
            let rep = UnitaryRep::from_generators(group, d, &[spin_rotation(scn.j, b, PI)?])?;
            Ok(SampledSphere {
                variable,
                action,
                rep,
            })
        }
        FlipSubgroup::Trivial => {
            let group = Arc::new(cyclic(1)?);
            Ok(SampledSphere {
                variable,
                action: GroupAction::trivial(group.clone(), points.len()),
                rep: UnitaryRep::trivial(group, d),
            })
        }
    }
}

/// Orbits of `{-j, .., j}` expected under the chosen subgroup.
fn expected_orbits(scn: &SpinScenario) -> Vec<Vec<f64>> {
    let spectrum = scn.spectrum();
    match scn.subgroup {
        FlipSubgroup::Trivial => spectrum.iter().map(|&m| vec![m]).collect(),
        FlipSubgroup::Flip => {
            let n = spectrum.len();
            (0..n.div_ceil(2))
                .map(|i| {
                    if i == n - 1 - i {
                        vec![spectrum[i]]
                    } else {
                        vec![spectrum[i], spectrum[n - 1 - i]]
                    }
                })
                .collect()
        }
    }
}

pub(super) fn spin_checks<R: Rng>(
    params: &SpinParams,
    rng: &mut R,
) -> Result<Vec<Check>, ScenarioError> {
    let scn = SpinScenario::new(params)?;
    let j = scn.j;
    let d = scn.dim();
    let spectrum = scn.spectrum();
    let gens = spin_generators(j)?;
    let mut checks = Vec::new();

    let comm = |a: usize, b: usize, z: usize| {
        (algebra::commutator(&gens[a], &gens[b]) - &gens[z] * c(0.0, 1.0)).norm()
    };
    let algebra_err = comm(0, 1, 2).max(comm(1, 2, 0)).max(comm(2, 0, 1));
    checks.push(Check::within(
        "commutation-relations",
        "angular momentum algebra",
        algebra_err,
        1e-10,
        format!("[J_x, J_y] = i J_z and cyclic, j = {j}"),
    ));

    let bundle = spin_component_operator(&scn)?;
    let a_dot_j = component(&gens, &scn.direction);
    let op_err = algebra::frobenius_dist(&bundle.a, &a_dot_j)?;
    checks.push(Check::within(
        "component-operator",
        "component operator a.J",
        op_err,
        1e-10,
        format!(
            "operator from the eigenbasis of a = {:?} equals a.J",
            scn.direction
        ),
    ));
    let spec_err = max_spectrum_error(bundle.eigenvalues(), &spectrum);
    checks.push(Check::within(
        "component-spectrum",
        "component operator a.J",
        spec_err,
        1e-9,
        format!("eigenvalues {:?}", bundle.eigenvalues()),
    ));

    let mut invariance = 0.0f64;
    for _ in 0..20 {
        let n = random_direction(rng);
        let (values, _) = algebra::eigh(&component(&gens, &n))?;
        invariance = invariance.max(max_spectrum_error(&values, &spectrum));
    }
    checks.push(Check::within(
        "spectrum-rotation-invariance",
        "component operator a.J",
        invariance,
        1e-9,
        "spectrum of n.J over 20 seeded random unit directions",
    ));

    let maximal = maximality_check(&bundle);
    checks.push(Check::exact(
        "component-maximal",
        "maximal accessibility",
        maximal,
        format!("multiplicities {:?}", bundle.spectrum.multiplicities),
    ));

    // Coarse graining by u -> u^2 merges -m and m.
    let basis = component_basis(j, &scn.direction)?;
    let (coarse, coarse_bundle) = coarse_grain(&basis, &spectrum, |u| u * u)?;
    let injective = coarse.coarse_labels.len() == spectrum.len();
    checks.push(Check::exact(
        "coarse-graining-maximality",
        "maximal accessibility",
        maximality_check(&coarse_bundle) == injective,
        format!(
            "u -> u^2 has blocks {:?}; maximal exactly when injective ({injective})",
            coarse.blocks
        ),
    ));

    let winding = if d % 2 == 0 { -1.0 } else { 1.0 };
    let full = spin_rotation(j, &scn.direction, 2.0 * PI)?;
    checks.push(Check::within(
        "rotation-2pi",
        "rotation group law",
        algebra::frobenius_dist(&full, &(algebra::identity(d) * c(winding, 0.0)))?,
        1e-9,
        format!("exp(-2 pi i a.J) = {winding} I"),
    ));
    let double = spin_rotation(j, &scn.direction, 4.0 * PI)?;
    checks.push(Check::within(
        "rotation-4pi",
        "rotation group law",
        algebra::frobenius_dist(&double, &algebra::identity(d))?,
        1e-9,
        "exp(-4 pi i a.J) = I",
    ));
    let mut additivity = 0.0f64;
    for _ in 0..10 {
        let axis = random_direction(rng);
        let alpha = rng.random_range(-2.0 * PI..2.0 * PI);
        let beta = rng.random_range(-2.0 * PI..2.0 * PI);
        let product = spin_rotation(j, &axis, alpha)? * spin_rotation(j, &axis, beta)?;
        let sum = spin_rotation(j, &axis, alpha + beta)?;
        additivity = additivity.max(algebra::frobenius_dist(&product, &sum)?);
    }
    checks.push(Check::within(
        "angle-additivity",
        "rotation group law",
        additivity,
        1e-8,
        "R(alpha) R(beta) = R(alpha + beta) for 10 seeded pairs",
    ));

    let sphere = sampled_sphere(&scn)?;
    let (variable, action) = if scn.reduce {
        let reduction = model_reduce(&sphere.variable, &sphere.action, &spectrum)?;
        let labels = reduction.variable.real_labels().unwrap_or_default();
        checks.push(Check::within(
            "model-reduction",
            "model reduction",
            max_spectrum_error(&labels, &spectrum),
            0.0,
            format!(
                "{} sampled values reduced to {:?}; {} orbit(s) under the induced group",
                sphere.variable.value_count(),
                labels,
                reduction.orbit_count
            ),
        ));
        (reduction.variable, reduction.action)
    } else {
        (sphere.variable, sphere.action)
    };

    let family = StateFamily::unit_weights(basis.clone())?;
    let h_set = variables::maximal_permissible_subgroup(&variable, &action)?;
    let mut cov = 0.0f64;
    for &h in &h_set {
        let report = covariance_check(&family, &spectrum, &variable, &action, &sphere.rep, h)?;
        cov = cov.max(report.error);
    }
    checks.push(Check::within(
        "covariance",
        "covariance under the permissible subgroup",
        cov,
        1e-9,
        format!("V(h)^H A V(h) = A of the transformed variable for h in {h_set:?}"),
    ));
    if scn.subgroup == FlipSubgroup::Flip {
        let v = sphere.rep.matrix(sphere.rep.group().generators()[0]);
        let flipped = v.adjoint() * &a_dot_j * v;
        checks.push(Check::within(
            "flip-reverses-component",
            "covariance under the permissible subgroup",
            (flipped + &a_dot_j).norm(),
            1e-9,
            format!("pi rotation about b = {:?} maps a.J to -a.J", scn.flip_axis),
        ));
    }

    let induced = variables::induce_group(&variable, &action)?;
    let op_bundle = build_operator(&family, &spectrum, ResolutionPolicy::Enforce)?;
    let orbits = eigen_orbit_partition(&op_bundle, &induced)?;
    let expected = expected_orbits(&scn);
    // Compare through value ids so the verdict is exact.
    let value_labels = variable.real_labels().unwrap_or_default();
    let found: Vec<Vec<f64>> = orbits
        .value_orbits
        .iter()
        .map(|o| o.iter().map(|&id| value_labels[id]).collect())
        .collect();
    checks.push(Check::exact(
        "eigenvalue-orbits",
        "eigenvalue orbits",
        found == expected,
        format!("orbits {found:?}, expected {expected:?}"),
    ));
    let embeds = orbits.symmetric_order % orbits.image_order as u128 == 0;
    let detail = format!(
        "induced group of order {} inside the symmetric group of order {}{}",
        orbits.image_order,
        orbits.symmetric_order,
        if orbits.full_symmetric {
            ""
        } else {
            " (proper subgroup)"
        }
    );
    if orbits.single_orbit {
        checks.push(Check::exact(
            "full-permutation-group",
            "eigenvalue orbits",
            embeds && orbits.full_symmetric,
            detail,
        ));
    } else {
        checks.push(Check::exact(
            "induced-group-embeds",
            "eigenvalue orbits",
            embeds,
            detail,
        ));
    }

    let mut completeness = 0.0f64;
    let mut povm_min = f64::INFINITY;
    let mut trace_err = 0.0f64;
    let mut density_min = f64::INFINITY;
    for _ in 0..5 {
        let outcomes = rng.random_range(2..=4);
        let model = random_model(rng, d, outcomes)?;
        let povm = build_povm(&model, &family)?;
        completeness = completeness.max(povm.completeness_deviation());
        povm_min = povm_min.min(povm.min_eigenvalue()?);
        let sigma = build_density_normalized(&random_density_weights(rng, d), &family)?;
        trace_err = trace_err.max((sigma.trace() - 1.0).abs());
        density_min = density_min.min(sigma.min_eigenvalue()?);
    }
    checks.push(Check::within(
        "povm-completeness",
        "measurement from a statistical model",
        completeness,
        quantize::MEASUREMENT_TOL,
        "sum of effects equals I for 5 seeded models",
    ));
    checks.push(Check::at_least(
        "povm-positivity",
        "measurement from a statistical model",
        povm_min,
        -1e-12,
        format!("smallest effect eigenvalue {povm_min:e}"),
    ));
    checks.push(Check::within(
        "density-trace",
        "density operator from a weight function",
        trace_err,
        quantize::MEASUREMENT_TOL,
        "normalized density operators have trace 1",
    ));
    checks.push(Check::at_least(
        "density-positivity",
        "density operator from a weight function",
        density_min,
        -1e-12,
        format!("smallest density eigenvalue {density_min:e}"),
    ));

    let v = random_unit_vector(rng, d);
    let (direct, via) = op_bundle.spectral_expectation(&v);
    checks.push(Check::within(
        "spectral-expectation",
        "expectation through spectral projections",
        (direct - via).abs(),
        1e-10,
        format!("<v|A|v> = {direct:.6}"),
    ));

    if d > 1 {
        let bases = [
            LabeledBasis {
                name: "a".into(),
                vectors: basis.clone(),
            },
            LabeledBasis {
                name: "b".into(),
                vectors: component_basis(j, &scn.flip_axis)?,
            },
        ];
        let answers = question_answer_match(&basis[d - 1], &bases, quantize::DEFAULT_MATCH_TOL)?;
        checks.push(Check::exact(
            "question-answer",
            "states as question and answer",
            answers == vec![("a".to_string(), d - 1)],
            format!("|a; j> answers {answers:?}"),
        ));
    }

    Ok(checks)
}

fn max_spectrum_error(found: &[f64], expected: &[f64]) -> f64 {
    if found.len() != expected.len() {
        return f64::INFINITY;
    }
    found
        .iter()
        .zip(expected)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn random_direction<R: Rng>(rng: &mut R) -> Vec3 {
    loop {
        let v: Vec3 = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n = dot(&v, &v).sqrt();
        if n > 1e-6 {
            return scale(&v, 1.0 / n);
        }
    }
}

/// Runs the spin scenario for `scn` with the given seed.
pub fn spin_orbit_demo(scn: &SpinScenario, seed: u64) -> Result<VerificationReport, ScenarioError> {
    let value =
        serde_json::to_value(scn.params()).map_err(|e| ScenarioError::Internal(e.to_string()))?;
    let mut config = ScenarioConfig::new("spin");
    if let serde_json::Value::Object(params) = value {
        config.params = params;
    }
    config.seed = Some(seed);
    run_scenario(&config, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scenario(j: f64, direction: Vec3) -> SpinScenario {
        SpinScenario::new(&SpinParams {
            j,
            direction,
            ..SpinParams::default()
        })
        .unwrap()
    }

    #[test]
    fn generators_small_spins() {
        let [jx, _, jz] = spin_generators(0.5).unwrap();
        assert!(algebra::frobenius_dist(&jz, &algebra::real_diag(&[0.5, -0.5])).unwrap() < 1e-15);
        let want = algebra::real_matrix(2, 2, &[0.0, 0.5, 0.5, 0.0]);
        assert!(algebra::frobenius_dist(&jx, &want).unwrap() < 1e-15);
        let [_, _, jz] = spin_generators(1.0).unwrap();
        assert!(
            algebra::frobenius_dist(&jz, &algebra::real_diag(&[1.0, 0.0, -1.0])).unwrap() < 1e-15
        );
        for j in [0.0, 0.5, 1.0, 2.5, 7.0] {
            assert!(spin_generators(j).unwrap()[2].trace().norm() < 1e-12);
        }
        assert!(matches!(
            spin_generators(0.25),
            Err(ScenarioError::BadSpin(_))
        ));
        assert!(matches!(
            spin_generators(-1.0),
            Err(ScenarioError::BadSpin(_))
        ));
        assert!(matches!(
            spin_generators(100.0),
            Err(ScenarioError::BadSpin(_))
        ));
    }

    #[test]
    fn component_examples() {
        let b = spin_component_operator(&scenario(0.5, [0.0, 0.0, 1.0])).unwrap();
        assert!(max_spectrum_error(b.eigenvalues(), &[-0.5, 0.5]) < 1e-12);
        let b = spin_component_operator(&scenario(1.0, [1.0, 0.0, 0.0])).unwrap();
        assert!(max_spectrum_error(b.eigenvalues(), &[-1.0, 0.0, 1.0]) < 1e-12);
        let b = spin_component_operator(&scenario(0.5, [1.0, 1.0, 1.0])).unwrap();
        assert!(max_spectrum_error(b.eigenvalues(), &[-0.5, 0.5]) < 1e-12);
    }

    #[test]
    fn component_basis_diagonalizes_a_dot_j() {
        for a in [
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
            [0.3, -0.4, 0.2],
            [0.0, 1.0, 0.0],
        ] {
            let scn = scenario(1.5, a);
            let gens = spin_generators(1.5).unwrap();
            let op = component(&gens, &scn.direction);
            for (v, m) in component_basis(1.5, &scn.direction)
                .unwrap()
                .iter()
                .zip(scn.spectrum())
            {
                assert!(
                    (&op * v - v * c(m, 0.0)).norm() < 1e-10,
                    "a = {a:?}, m = {m}"
                );
            }
        }
    }

    #[test]
    fn rotation_examples() {
        let z = [0.0, 0.0, 1.0];
        assert!(
            algebra::frobenius_dist(&spin_rotation(1.0, &z, 0.0).unwrap(), &algebra::identity(3))
                .unwrap()
                < 1e-15
        );
        let r = spin_rotation(0.5, &z, 2.0 * PI).unwrap();
        assert!(
            algebra::frobenius_dist(&r, &(algebra::identity(2) * c(-1.0, 0.0))).unwrap() < 1e-9
        );
        let [_, _, jz] = spin_generators(1.0).unwrap();
        let v = spin_rotation(1.0, &[1.0, 0.0, 0.0], PI).unwrap();
        let conj = v.adjoint() * &jz * &v;
        assert!((conj + jz).norm() < 1e-9);
    }

    #[test]
    fn orbits_for_flip_and_trivial() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (j, subgroup, want) in [
            (0.5, FlipSubgroup::Flip, vec![vec![-0.5, 0.5]]),
            (1.0, FlipSubgroup::Flip, vec![vec![-1.0, 1.0], vec![0.0]]),
            (
                1.0,
                FlipSubgroup::Trivial,
                vec![vec![-1.0], vec![0.0], vec![1.0]],
            ),
        ] {
            let params = SpinParams {
                j,
                subgroup,
                ..SpinParams::default()
            };
            let scn = SpinScenario::new(&params).unwrap();
            assert_eq!(expected_orbits(&scn), want);
            let checks = spin_checks(&params, &mut rng).unwrap();
            let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
            assert!(failed.is_empty(), "{failed:#?}");
        }
    }

    #[test]
    fn all_checks_pass_with_reduction() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for j in [0.0, 0.5, 1.0, 1.5, 2.0] {
            for direction in [[0.0, 0.0, 1.0], [0.0, -1.0, 0.0], [0.6, 0.0, -0.8]] {
                let params = SpinParams {
                    j,
                    direction,
                    reduce: true,
                    ..SpinParams::default()
                };
                let checks = spin_checks(&params, &mut rng).unwrap();
                assert!(checks.len() >= 6);
                let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
                assert!(failed.is_empty(), "j = {j}: {failed:#?}");
            }
        }
    }

    #[test]
    fn invalid_parameters() {
        let bad = SpinParams {
            direction: [0.0; 3],
            ..SpinParams::default()
        };
        assert!(matches!(
            SpinScenario::new(&bad),
            Err(ScenarioError::BadParam(_))
        ));
        let bad = SpinParams {
            j: 2.0,
            radius: Some(1.0),
            ..SpinParams::default()
        };
        assert!(matches!(
            SpinScenario::new(&bad),
            Err(ScenarioError::BadParam(_))
        ));
    }

    #[test]
    fn demo_report() {
        let scn = scenario(0.5, [0.0, 0.0, 1.0]);
        let report = spin_orbit_demo(&scn, 9).unwrap();
        assert!(report.all_passed());
        assert_eq!(report.seed, 9);
    }
}
