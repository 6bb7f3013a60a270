//! Operators built from weighted state families indexed by the values of a
//! variable, and the spectral consequences of the induced group action.
//!
//! All spectra are discrete. Degenerate eigenvalues are grouped with the
//! tolerance of [`crate::algebra::eig_hermitian`]; results that depend on
//! the grouping carry the tolerance that produced them.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::algebra::{self, c, AlgebraError, CMatrix, CVector, SpectralData};
use crate::coherent::{resolution_over_theta, RepError, Resolution, StateFamily, UnitaryRep};
use crate::groups::{GroupAction, GroupError};
use crate::variables::{self, ConceptualVariable, Label, VariableError};

/// Tolerance for POVM completeness and density-operator traces.
pub const MEASUREMENT_TOL: f64 = 1e-10;
/// Row sums of a statistical model must be within this of 1.
pub const MODEL_ROW_TOL: f64 = 1e-12;
/// Relative tolerance of the covariance identity.
pub const COVARIANCE_TOL: f64 = 1e-9;
/// Relative tolerance when matching eigenvalues to variable labels.
pub const LABEL_MATCH_TOL: f64 = 1e-9;
/// Default threshold on `1 - |<a;j|v>|^2` for a question/answer match.
pub const DEFAULT_MATCH_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantizeError {
    #[error("{what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("states do not resolve the identity (deviation {deviation:e})")]
    NotResolution { deviation: f64 },
    #[error("model has {found} rows, the state family has {expected} members")]
    RowMismatch { expected: usize, found: usize },
    #[error("invalid statistical model: {0}")]
    BadModel(String),
    #[error("weight {0} is negative or not finite")]
    NegativeWeight(f64),
    #[error("total weight is zero")]
    ZeroMass,
    #[error("element {0} is not in the maximal permissible subgroup")]
    NotInSubgroupH(usize),
    #[error("element {element} maps eigenvalue {eigenvalue} outside the spectrum")]
    ActionDoesNotPreserveSpectrum { element: usize, eigenvalue: f64 },
    #[error("eigenvalue {0} is not a label of the variable")]
    EigenvalueNotLabeled(f64),
    #[error("variable has symbolic labels")]
    SymbolicLabels,
    #[error("target is not closed under the induced group: {0}")]
    NotAnOrbit(String),
    #[error("basis is not orthonormal (defect {0:e})")]
    NotOrthonormal(f64),
    #[error("vector is not a unit vector (norm {0})")]
    NotUnit(f64),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Variable(#[from] VariableError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Whether operator construction insists on a resolution of the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolutionPolicy {
    Enforce,
    /// Build anyway; the deviation is kept on the bundle for inspection.
    Report,
}

/// A Hermitian operator with its spectral decomposition and the labels it
/// was built from.
#[derive(Debug, Clone)]
pub struct OperatorBundle {
    pub a: CMatrix,
    pub spectrum: SpectralData,
    /// Label of each member of the source family.
    pub labels: Vec<f64>,
    pub resolution: Resolution,
    pub degeneracy_tol: f64,
}

impl OperatorBundle {
    /// Wrap an arbitrary Hermitian matrix.
    pub fn from_matrix(a: CMatrix) -> Result<Self, QuantizeError> {
        let spectrum = algebra::eig_hermitian(&a, algebra::DEFAULT_DEGENERACY_TOL)?;
        let d = a.nrows();
        Ok(OperatorBundle {
            labels: spectrum
                .eigenvalues
                .iter()
                .zip(&spectrum.multiplicities)
                .flat_map(|(&u, &m)| std::iter::repeat_n(u, m))
                .collect(),
            a,
            spectrum,
            resolution: resolution_over_theta(&StateFamily::standard_basis(d)),
            degeneracy_tol: algebra::DEFAULT_DEGENERACY_TOL,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum.eigenvalues
    }

    /// `<v|A|v>` computed directly and through `sum_j u_j <v|P_j|v>`.
    pub fn spectral_expectation(&self, v: &CVector) -> (f64, f64) {
        let direct = v.dotc(&(&self.a * v)).re;
        let via_projections = self
            .spectrum
            .eigenvalues
            .iter()
            .zip(&self.spectrum.projections)
            .map(|(u, p)| u * v.dotc(&(p * v)).re)
            .sum();
        (direct, via_projections)
    }
}

/// `A = sum_i theta_i w_i |theta_i><theta_i|`
pub fn build_operator(
    family: &StateFamily,
    labels: &[f64],
    policy: ResolutionPolicy,
) -> Result<OperatorBundle, QuantizeError> {
    if labels.len() != family.len() {
        return Err(QuantizeError::DimensionMismatch {
            what: "labels",
            expected: family.len(),
            found: labels.len(),
        });
    }
    let resolution = resolution_over_theta(family);
    if policy == ResolutionPolicy::Enforce && !resolution.passed {
        return Err(QuantizeError::NotResolution {
            deviation: resolution.deviation,
        });
    }
    let a = family.weighted_sum(labels);
    let spectrum = algebra::eig_hermitian(&a, algebra::DEFAULT_DEGENERACY_TOL)?;
    Ok(OperatorBundle {
        a,
        spectrum,
        labels: labels.to_vec(),
        resolution,
        degeneracy_tol: algebra::DEFAULT_DEGENERACY_TOL,
    })
}

/// `A^{f(theta)} = sum_i f(theta_i) w_i |theta_i><theta_i|`
pub fn function_operator(
    family: &StateFamily,
    labels: &[f64],
    f: impl Fn(f64) -> f64,
    policy: ResolutionPolicy,
) -> Result<OperatorBundle, QuantizeError> {
    let mapped: Vec<f64> = labels.iter().map(|&x| f(x)).collect();
    build_operator(family, &mapped, policy)
}

/// Theta is maximally accessible iff every eigenspace is one-dimensional.
pub fn maximality_check(bundle: &OperatorBundle) -> bool {
    bundle.spectrum.is_nondegenerate()
}

/// `P(z | theta)` for finitely many outcomes `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct StatisticalModel {
    outcome_count: usize,
    probabilities: Vec<Vec<f64>>,
}

impl StatisticalModel {
    /// One row per value id; every row a probability vector over the outcomes.
    pub fn new(probabilities: Vec<Vec<f64>>) -> Result<Self, QuantizeError> {
        let outcome_count = probabilities.first().map_or(0, Vec::len);
        if outcome_count == 0 {
            return Err(QuantizeError::BadModel("no outcomes".into()));
        }
        for (i, row) in probabilities.iter().enumerate() {
            if row.len() != outcome_count {
                return Err(QuantizeError::BadModel(format!(
                    "row {i} has the wrong length"
                )));
            }
            if row.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
                return Err(QuantizeError::BadModel(format!(
                    "row {i} has a negative entry"
                )));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > MODEL_ROW_TOL {
                return Err(QuantizeError::BadModel(format!("row {i} sums to {total}")));
            }
        }
        Ok(StatisticalModel {
            outcome_count,
            probabilities,
        })
    }

    /// Each value id certainly yields the outcome with the same index.
    pub fn deterministic(n: usize) -> Self {
        let probabilities = (0..n)
            .map(|i| (0..n).map(|z| if z == i { 1.0 } else { 0.0 }).collect())
            .collect();
        StatisticalModel {
            outcome_count: n,
            probabilities,
        }
    }

    pub fn outcome_count(&self) -> usize {
        self.outcome_count
    }

    pub fn rows(&self) -> usize {
        self.probabilities.len()
    }

    pub fn probability(&self, theta: usize, z: usize) -> f64 {
        self.probabilities[theta][z]
    }
}

/// Effects `M({z})` of a POVM, one per outcome.
#[derive(Debug, Clone)]
pub struct Povm {
    pub effects: Vec<CMatrix>,
}

impl Povm {
    /// `M(C) = sum_{z in C} M({z})`
    pub fn effect_of(&self, outcomes: &[usize]) -> CMatrix {
        let d = self.effects[0].nrows();
        outcomes
            .iter()
            .fold(CMatrix::zeros(d, d), |acc, &z| acc + &self.effects[z])
    }

    /// `||sum_z M({z}) - I||_F`
    pub fn completeness_deviation(&self) -> f64 {
        let all: Vec<usize> = (0..self.effects.len()).collect();
        let d = self.effects[0].nrows();
        (self.effect_of(&all) - algebra::identity(d)).norm()
    }

    /// Smallest eigenvalue over all effects.
    pub fn min_eigenvalue(&self) -> Result<f64, QuantizeError> {
        let mut worst = f64::INFINITY;
        for e in &self.effects {
            let (values, _) = algebra::eigh(e)?;
            worst = worst.min(values[0]);
        }
        Ok(worst)
    }
}

/// `M({z}) = sum_theta P(z|theta) w_theta |theta><theta|`
pub fn build_povm(model: &StatisticalModel, family: &StateFamily) -> Result<Povm, QuantizeError> {
    if model.rows() != family.len() {
        return Err(QuantizeError::RowMismatch {
            expected: family.len(),
            found: model.rows(),
        });
    }
    let effects = (0..model.outcome_count())
        .map(|z| {
            let column: Vec<f64> = (0..model.rows()).map(|t| model.probability(t, z)).collect();
            family.weighted_sum(&column)
        })
        .collect();
    Ok(Povm { effects })
}

#[derive(Debug, Clone)]
pub struct DensityOp {
    pub sigma: CMatrix,
    /// `pi(theta)` per value id, as used in the sum.
    pub weight_function: Vec<f64>,
}

impl DensityOp {
    pub fn trace(&self) -> f64 {
        self.sigma.trace().re
    }

    pub fn min_eigenvalue(&self) -> Result<f64, QuantizeError> {
        Ok(algebra::eigh(&self.sigma)?.0[0])
    }
}

fn check_pi(pi: &[f64], family: &StateFamily) -> Result<(), QuantizeError> {
    if pi.len() != family.len() {
        return Err(QuantizeError::DimensionMismatch {
            what: "weight function",
            expected: family.len(),
            found: pi.len(),
        });
    }
    if let Some(&bad) = pi.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
        return Err(QuantizeError::NegativeWeight(bad));
    }
    Ok(())
}

/// `sigma = sum_theta pi(theta) w_theta |theta><theta|`, no normalization.
pub fn build_density(pi: &[f64], family: &StateFamily) -> Result<DensityOp, QuantizeError> {
    check_pi(pi, family)?;
    Ok(DensityOp {
        sigma: family.weighted_sum(pi),
        weight_function: pi.to_vec(),
    })
}

/// As [`build_density`], with `pi * w` rescaled to total mass 1 first.
pub fn build_density_normalized(
    pi: &[f64],
    family: &StateFamily,
) -> Result<DensityOp, QuantizeError> {
    check_pi(pi, family)?;
    let mass: f64 = pi.iter().zip(family.weights()).map(|(p, w)| p * w).sum();
    if mass <= 0.0 {
        return Err(QuantizeError::ZeroMass);
    }
    let scaled: Vec<f64> = pi.iter().map(|p| p / mass).collect();
    build_density(&scaled, family)
}

#[derive(Debug, Clone)]
pub struct CovarianceReport {
    /// `V(h)^H A V(h)`
    pub lhs: CMatrix,
    /// Operator of the variable `phi -> theta(h phi)`.
    pub rhs: CMatrix,
    pub error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Compares the conjugated operator with the operator of the transformed
/// variable. The family is indexed by the value ids of `var` and `labels`
/// gives the real label of each value id.
pub fn covariance_check(
    family: &StateFamily,
    labels: &[f64],
    var: &ConceptualVariable,
    act: &GroupAction,
    rep: &UnitaryRep,
    h: usize,
) -> Result<CovarianceReport, QuantizeError> {
    if family.len() != var.value_count() {
        return Err(QuantizeError::DimensionMismatch {
            what: "state family",
            expected: var.value_count(),
            found: family.len(),
        });
    }
    if **rep.group() != **act.group() {
        return Err(RepError::GroupMismatch.into());
    }
    act.group().check_element(h)?;
    let subgroup = variables::maximal_permissible_subgroup(var, act)?;
    if !subgroup.contains(&h) {
        return Err(QuantizeError::NotInSubgroupH(h));
    }
    let g = variables::induced_value_permutation(var, act, h)
        .expect("members of the maximal permissible subgroup induce a value permutation");

    let bundle = build_operator(family, labels, ResolutionPolicy::Report)?;
    let v = rep.matrix(h);
    let lhs = v.adjoint() * &bundle.a * v;
    // theta(h phi) carries the label of g(theta(phi)).
    let moved: Vec<f64> = (0..labels.len()).map(|id| labels[g[id]]).collect();
    let rhs = family.weighted_sum(&moved);
    let error = (&lhs - &rhs).norm();
    let tolerance = COVARIANCE_TOL * bundle.a.norm().max(1.0);
    Ok(CovarianceReport {
        lhs,
        rhs,
        error,
        tolerance,
        passed: error <= tolerance,
    })
}

/// Orbit structure of the eigenvalues under the induced group.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenOrbits {
    /// Orbits of eigenvalues, each ascending, ordered by least member.
    pub orbits: Vec<Vec<f64>>,
    /// The same orbits as value ids of the variable.
    pub value_orbits: Vec<Vec<usize>>,
    pub single_orbit: bool,
    /// Number of distinct permutations the induced group produces on the eigenvalues.
    pub image_order: usize,
    /// `n!` for `n` eigenvalues (saturating).
    pub symmetric_order: u128,
    pub full_symmetric: bool,
    pub degeneracy_tol: f64,
}

fn label_id(labels: &[f64], value: f64) -> Option<usize> {
    let tol = LABEL_MATCH_TOL * value.abs().max(1.0);
    labels.iter().position(|&l| (l - value).abs() <= tol)
}

/// Partition of the eigenvalues of `bundle` into orbits of the group
/// induced on the values of `induced.variable`.
pub fn eigen_orbit_partition(
    bundle: &OperatorBundle,
    induced: &variables::InducedAction,
) -> Result<EigenOrbits, QuantizeError> {
    let labels = induced
        .variable
        .real_labels()
        .ok_or(QuantizeError::SymbolicLabels)?;
    let eigen = bundle.eigenvalues();
    let ids: Vec<usize> = eigen
        .iter()
        .map(|&u| label_id(&labels, u).ok_or(QuantizeError::EigenvalueNotLabeled(u)))
        .collect::<Result<_, _>>()?;
    let position = |id: usize| ids.iter().position(|&x| x == id);

    let mut restricted: BTreeSet<Vec<usize>> = BTreeSet::new();
    for (k, perm) in induced.induced_perm.iter().enumerate() {
        let mut image = Vec::with_capacity(ids.len());
        for (j, &id) in ids.iter().enumerate() {
            match position(perm[id]) {
                Some(p) => image.push(p),
                None => {
                    return Err(QuantizeError::ActionDoesNotPreserveSpectrum {
                        element: k,
                        eigenvalue: eigen[j],
                    })
                }
            }
        }
        restricted.insert(image);
    }

    let n = ids.len();
    let mut assigned = vec![false; n];
    let mut orbits = Vec::new();
    let mut value_orbits = Vec::new();
    for start in 0..n {
        if assigned[start] {
            continue;
        }
        let mut members: Vec<usize> = restricted.iter().map(|p| p[start]).collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            assigned[m] = true;
        }
        orbits.push(members.iter().map(|&m| eigen[m]).collect::<Vec<f64>>());
        value_orbits.push(members.iter().map(|&m| ids[m]).collect::<Vec<usize>>());
    }

    let symmetric_order = (1..=n as u128).fold(1u128, |acc, k| acc.saturating_mul(k));
    let image_order = restricted.len();
    Ok(EigenOrbits {
        single_orbit: orbits.len() == 1,
        orbits,
        value_orbits,
        image_order,
        symmetric_order,
        full_symmetric: image_order as u128 == symmetric_order,
        degeneracy_tol: bundle.degeneracy_tol,
    })
}

/// A variable restricted to the points whose values lie in a closed set of labels.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub variable: ConceptualVariable,
    pub action: GroupAction,
    /// Original index of each retained point.
    pub points: Vec<usize>,
    pub orbit_count: usize,
    /// Whether the induced group acts transitively on the retained values.
    pub transitive: bool,
}

/// Restrict the range of `var` to the labels in `target`, which must be
/// closed under the induced group.
pub fn model_reduce(
    var: &ConceptualVariable,
    act: &GroupAction,
    target: &[f64],
) -> Result<Reduction, QuantizeError> {
    let labels = var.real_labels().ok_or(QuantizeError::SymbolicLabels)?;
    let induced = variables::induce_group(var, act)?;
    let mut target_ids = Vec::new();
    for &t in target {
        let id = label_id(&labels, t).ok_or_else(|| {
            QuantizeError::NotAnOrbit(format!("{t} is not a value of the variable"))
        })?;
        if !target_ids.contains(&id) {
            target_ids.push(id);
        }
    }
    target_ids.sort_by(|&a, &b| labels[a].total_cmp(&labels[b]));
    for (k, perm) in induced.induced_perm.iter().enumerate() {
        for &id in &target_ids {
            if !target_ids.contains(&perm[id]) {
                return Err(QuantizeError::NotAnOrbit(format!(
                    "element {k} maps {} to {}",
                    labels[id], labels[perm[id]]
                )));
            }
        }
    }

    let points: Vec<usize> = (0..var.space_size())
        .filter(|&p| target_ids.contains(&var.value(p)))
        .collect();
    let values = points
        .iter()
        .map(|&p| {
            target_ids
                .iter()
                .position(|&id| id == var.value(p))
                .unwrap()
        })
        .collect();
    let new_labels = target_ids
        .iter()
        .map(|&id| Label::Real(labels[id]))
        .collect();
    let variable =
        ConceptualVariable::new(values, new_labels)?.with_accessible(var.is_accessible());
    let action = act.restrict_space(&points)?;
    let reduced_induced = variables::induce_group(&variable, &action)?;
    let orbit_count = reduced_induced.image_action.orbits().len();
    Ok(Reduction {
        variable,
        action,
        points,
        orbit_count,
        transitive: orbit_count == 1,
    })
}

/// Partition of a fine label set by a coarse-graining map.
#[derive(Debug, Clone)]
pub struct CoarseGraining {
    /// Coarse value id of each fine value id.
    pub t_map: Vec<usize>,
    /// Distinct coarse labels, ascending.
    pub coarse_labels: Vec<f64>,
    /// Fine value ids mapping to each coarse label.
    pub blocks: Vec<Vec<usize>>,
    pub block_projections: Vec<CMatrix>,
}

/// `A = sum_j s_j Pi_j = sum_i t(u_i) |a;i><a;i|` over an orthonormal basis.
pub fn coarse_grain(
    basis: &[CVector],
    fine_labels: &[f64],
    t: impl Fn(f64) -> f64,
) -> Result<(CoarseGraining, OperatorBundle), QuantizeError> {
    if basis.len() != fine_labels.len() {
        return Err(QuantizeError::DimensionMismatch {
            what: "fine labels",
            expected: basis.len(),
            found: fine_labels.len(),
        });
    }
    let defect = algebra::orthonormality_defect(basis);
    if defect > MEASUREMENT_TOL {
        return Err(QuantizeError::NotOrthonormal(defect));
    }
    let coarse: Vec<f64> = fine_labels.iter().map(|&u| t(u)).collect();
    let mut coarse_labels = coarse.clone();
    coarse_labels.sort_by(f64::total_cmp);
    coarse_labels.dedup();
    let t_map: Vec<usize> = coarse
        .iter()
        .map(|s| coarse_labels.iter().position(|x| x == s).unwrap())
        .collect();
    let mut blocks = vec![Vec::new(); coarse_labels.len()];
    for (i, &j) in t_map.iter().enumerate() {
        blocks[j].push(i);
    }
    let d = basis[0].len();
    let block_projections = blocks
        .iter()
        .map(|b| {
            b.iter().fold(CMatrix::zeros(d, d), |acc, &i| {
                acc + algebra::outer(&basis[i])
            })
        })
        .collect();
    let family = StateFamily::unit_weights(basis.to_vec())?;
    let bundle = build_operator(&family, &coarse, ResolutionPolicy::Report)?;
    Ok((
        CoarseGraining {
            t_map,
            coarse_labels,
            blocks,
            block_projections,
        },
        bundle,
    ))
}

/// A finer variable obtained by giving every eigenvector its own label.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub basis: Vec<CVector>,
    /// Original eigenvalue attached to each basis vector.
    pub coarse_labels: Vec<f64>,
    /// Distinct labels, one per basis vector.
    pub fine_labels: Vec<f64>,
}

/// Splits every degenerate eigenspace of `bundle` into one-dimensional pieces.
pub fn split_degeneracies(bundle: &OperatorBundle) -> Refinement {
    let mut basis = Vec::new();
    let mut coarse_labels = Vec::new();
    for (u, space) in bundle
        .spectrum
        .eigenvalues
        .iter()
        .zip(&bundle.spectrum.eigenspaces)
    {
        for v in space {
            basis.push(v.clone());
            coarse_labels.push(*u);
        }
    }
    let fine_labels = (0..basis.len()).map(|i| i as f64).collect();
    Refinement {
        basis,
        coarse_labels,
        fine_labels,
    }
}

/// An orthonormal basis tagged with the variable it answers.
#[derive(Debug, Clone)]
pub struct LabeledBasis {
    pub name: String,
    pub vectors: Vec<CVector>,
}

/// All `(a, j)` with `|<a;j|v>|^2 >= 1 - tol`.
pub fn question_answer_match(
    v: &CVector,
    bases: &[LabeledBasis],
    tol: f64,
) -> Result<Vec<(String, usize)>, QuantizeError> {
    let norm = v.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(QuantizeError::NotUnit(norm));
    }
    let mut out = Vec::new();
    for basis in bases {
        for (j, b) in basis.vectors.iter().enumerate() {
            if b.len() != v.len() {
                return Err(QuantizeError::DimensionMismatch {
                    what: "basis vector",
                    expected: v.len(),
                    found: b.len(),
                });
            }
            if b.dotc(v).norm_sqr() >= 1.0 - tol {
                out.push((basis.name.clone(), j));
            }
        }
    }
    Ok(out)
}

/// Real vector helper for examples and tests.
pub fn real_vector(entries: &[f64]) -> CVector {
    CVector::from_iterator(entries.len(), entries.iter().map(|&x| c(x, 0.0)))
}
