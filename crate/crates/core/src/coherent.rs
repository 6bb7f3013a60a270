//! Unitary representations of finite groups, coherent-state systems and
//! their frame operators.
//!
//! Group integrals become finite sums: the coherent state of element `k` is
//! `V(k)|phi_0>` and carries the weight the invariant measure assigns to the
//! point `k phi_0`. When `phi_0` has a nontrivial stabilizer, each point is
//! visited once per stabilizer element; that uniform factor ends up in the
//! frame constant.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{self, c, outer, AlgebraError, CMatrix, CVector};
use crate::groups::{FiniteGroup, GroupAction, GroupError, InvariantMeasure};

/// Unitarity tolerance per unit of dimension.
pub const UNITARY_TOL: f64 = 1e-9;
/// Tolerance on `V(k1 k2) = V(k1) V(k2)`.
pub const HOMOMORPHISM_TOL: f64 = 1e-8;
/// Relative tolerance for the commutation of the frame operator with the representation.
pub const COMMUTATION_TOL: f64 = 1e-9;
/// Relative tolerance (w.r.t. the trace) for the frame operator to count as scalar.
pub const SCALAR_TOL: f64 = 1e-8;
/// Per-dimension tolerance for a resolution of the identity.
pub const RESOLUTION_TOL: f64 = 1e-9;
/// Default relative singular-value cutoff for the commutant computation.
pub const DEFAULT_COMMUTANT_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepError {
    #[error("expected {expected} matrices, got {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error("matrix for element {element} has shape {rows}x{cols}, expected {dim}x{dim}")]
    BadShape {
        element: usize,
        rows: usize,
        cols: usize,
        dim: usize,
    },
    #[error("matrix for element {element} is not unitary (defect {defect:e})")]
    NotUnitary { element: usize, defect: f64 },
    #[error("identity element is not represented by I (deviation {deviation:e})")]
    IdentityNotIdentity { deviation: f64 },
    #[error("V({a}) V({b}) differs from V({a}{b}) by {defect:e}")]
    NotHomomorphism { a: usize, b: usize, defect: f64 },
    #[error("fiducial vector is zero")]
    ZeroFiducial,
    #[error("group action is not transitive")]
    NonTransitive,
    #[error("representation and action are over different groups")]
    GroupMismatch,
    #[error("{0}")]
    Mismatch(String),
    #[error("frame operator is not scalar (||T - lambda I||_F = {deviation:e}, commutation defect {commutation:e})")]
    NotScalar { deviation: f64, commutation: f64 },
    #[error("state family is empty")]
    EmptyFamily,
    #[error("weight {0} is negative or not finite")]
    BadWeight(f64),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// An assignment of a unitary matrix to every element of a finite group.
#[derive(Debug, Clone)]
pub struct UnitaryRep {
    group: Arc<FiniteGroup>,
    dim: usize,
    matrices: Vec<CMatrix>,
}

impl UnitaryRep {
    /// Validates unitarity, `V(e) = I` and the homomorphism property over all pairs.
    pub fn new(group: Arc<FiniteGroup>, matrices: Vec<CMatrix>) -> Result<Self, RepError> {
        if matrices.len() != group.order() {
            return Err(RepError::CountMismatch {
                expected: group.order(),
                found: matrices.len(),
            });
        }
        let dim = matrices[0].nrows();
        for (element, m) in matrices.iter().enumerate() {
            if m.nrows() != dim || m.ncols() != dim || dim == 0 {
                return Err(RepError::BadShape {
                    element,
                    rows: m.nrows(),
                    cols: m.ncols(),
                    dim,
                });
            }
            let defect = algebra::unitarity_defect(m);
            if defect > UNITARY_TOL * dim as f64 {
                return Err(RepError::NotUnitary { element, defect });
            }
        }
        let deviation = (&matrices[group.identity()] - algebra::identity(dim)).norm();
        if deviation > HOMOMORPHISM_TOL {
            return Err(RepError::IdentityNotIdentity { deviation });
        }
        let rep = UnitaryRep {
            group,
            dim,
            matrices,
        };
        let (a, b, defect) = rep.worst_homomorphism_pair();
        if defect > HOMOMORPHISM_TOL {
            return Err(RepError::NotHomomorphism { a, b, defect });
        }
        Ok(rep)
    }

    /// Extend matrices given on the generators to the whole group, then validate.
    pub fn from_generators(
        group: Arc<FiniteGroup>,
        dim: usize,
        generator_images: &[CMatrix],
    ) -> Result<Self, RepError> {
        if generator_images.len() != group.generators().len() {
            return Err(RepError::CountMismatch {
                expected: group.generators().len(),
                found: generator_images.len(),
            });
        }
        let mut matrices = vec![CMatrix::zeros(0, 0); group.order()];
        for &x in group.breadth_first_order() {
            matrices[x] = match group.word_step(x) {
                None => algebra::identity(dim),
                Some((parent, gi)) => &matrices[parent] * &generator_images[gi],
            };
        }
        UnitaryRep::new(group, matrices)
    }

    /// Permutation matrices of `f -> f o k^{-1}` on functions of the group:
    /// `U(k) e_x = e_{kx}`.
    pub fn left_regular(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        let matrices = (0..n)
            .map(|k| {
                let mut m = CMatrix::zeros(n, n);
                for x in 0..n {
                    m[(group.mul(k, x), x)] = c(1.0, 0.0);
                }
                m
            })
            .collect();
        UnitaryRep {
            group,
            dim: n,
            matrices,
        }
    }

    /// Every element represented by the identity.
    pub fn trivial(group: Arc<FiniteGroup>, dim: usize) -> Self {
        let matrices = vec![algebra::identity(dim); group.order()];
        UnitaryRep {
            group,
            dim,
            matrices,
        }
    }

    pub fn direct_sum(&self, other: &UnitaryRep) -> Result<Self, RepError> {
        if *self.group != *other.group {
            return Err(RepError::GroupMismatch);
        }
        let dim = self.dim + other.dim;
        let matrices = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(a, b)| {
                let mut m = CMatrix::zeros(dim, dim);
                m.view_mut((0, 0), (self.dim, self.dim)).copy_from(a);
                m.view_mut((self.dim, self.dim), (other.dim, other.dim))
                    .copy_from(b);
                m
            })
            .collect();
        Ok(UnitaryRep {
            group: self.group.clone(),
            dim,
            matrices,
        })
    }

    /// The equivalent representation `W V(k) W^H`.
    pub fn conjugate(&self, w: &CMatrix) -> Result<Self, RepError> {
        check_unitary(w, self.dim)?;
        let wh = w.adjoint();
        let matrices = self.matrices.iter().map(|m| w * m * &wh).collect();
        Ok(UnitaryRep {
            group: self.group.clone(),
            dim: self.dim,
            matrices,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, k: usize) -> &CMatrix {
        &self.matrices[k]
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    /// The pair with the largest `||V(ab) - V(a) V(b)||_F`.
    pub fn worst_homomorphism_pair(&self) -> (usize, usize, f64) {
        let n = self.group.order();
        let mut worst = (0, 0, 0.0);
        for a in 0..n {
            for b in 0..n {
                let lhs = &self.matrices[self.group.mul(a, b)];
                let defect = (lhs - &self.matrices[a] * &self.matrices[b]).norm();
                if defect > worst.2 {
                    worst = (a, b, defect);
                }
            }
        }
        worst
    }
}

fn check_unitary(w: &CMatrix, dim: usize) -> Result<(), RepError> {
    if w.nrows() != dim || w.ncols() != dim {
        return Err(RepError::BadShape {
            element: 0,
            rows: w.nrows(),
            cols: w.ncols(),
            dim,
        });
    }
    let defect = algebra::unitarity_defect(w);
    if defect > UNITARY_TOL * dim as f64 {
        return Err(RepError::NotUnitary { element: 0, defect });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Irreducibility {
    pub irreducible: bool,
    pub commutant_dimension: usize,
}

/// Dimension of `{X : X V(g) = V(g) X}` over the generators, from the null
/// space of the stacked linear system. Irreducible iff that dimension is 1.
pub fn is_irreducible(rep: &UnitaryRep, tol: f64) -> Irreducibility {
    let d = rep.dim();
    let gens = rep.group().generators();
    let n = d * d;
    if gens.is_empty() {
        return Irreducibility {
            irreducible: n == 1,
            commutant_dimension: n,
        };
    }
    let eye = algebra::identity(d);
    let mut stacked = CMatrix::zeros(gens.len() * n, n);
    for (i, &g) in gens.iter().enumerate() {
        let v = rep.matrix(g);
        // vec(X V) - vec(V X) with column-major vec
        let block = kron(&v.transpose(), &eye) - kron(&eye, v);
        stacked.view_mut((i * n, 0), (n, n)).copy_from(&block);
    }
    let sv = stacked.singular_values();
    let cutoff = tol * sv.max().max(1.0);
    let rank = sv.iter().filter(|&&s| s > cutoff).count();
    let commutant_dimension = n - rank;
    Irreducibility {
        irreducible: commutant_dimension == 1,
        commutant_dimension,
    }
}

fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    DMatrix::from_fn(ar * br, ac * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// A weighted family of vectors in a common space.
#[derive(Debug, Clone)]
pub struct StateFamily {
    states: Vec<CVector>,
    weights: Vec<f64>,
}

impl StateFamily {
    pub fn new(states: Vec<CVector>, weights: Vec<f64>) -> Result<Self, RepError> {
        let Some(first) = states.first() else {
            return Err(RepError::EmptyFamily);
        };
        let dim = first.len();
        if weights.len() != states.len() {
            return Err(RepError::Mismatch(format!(
                "{} weights for {} states",
                weights.len(),
                states.len()
            )));
        }
        if let Some(bad) = states.iter().find(|s| s.len() != dim) {
            return Err(AlgebraError::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            }
            .into());
        }
        if let Some(&w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(RepError::BadWeight(w));
        }
        Ok(StateFamily { states, weights })
    }

    /// Orthonormal basis vectors `e_0 .. e_{n-1}` with unit weights.
    pub fn standard_basis(n: usize) -> Self {
        StateFamily {
            states: (0..n).map(|i| algebra::basis_vector(n, i)).collect(),
            weights: vec![1.0; n],
        }
    }

    /// Orthonormal family with unit weights.
    pub fn unit_weights(states: Vec<CVector>) -> Result<Self, RepError> {
        let n = states.len();
        StateFamily::new(states, vec![1.0; n])
    }

    pub fn dim(&self) -> usize {
        self.states[0].len()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[CVector] {
        &self.states
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `sum_i coeff_i w_i |s_i><s_i|`
    pub fn weighted_sum(&self, coefficients: &[f64]) -> CMatrix {
        let d = self.dim();
        let mut out = CMatrix::zeros(d, d);
        for ((s, &w), &coef) in self.states.iter().zip(&self.weights).zip(coefficients) {
            let scale = coef * w;
            if scale != 0.0 {
                out += outer(s) * c(scale, 0.0);
            }
        }
        out
    }

    /// `sum_i w_i |s_i><s_i|`
    pub fn frame_sum(&self) -> CMatrix {
        self.weighted_sum(&vec![1.0; self.len()])
    }

    pub fn transport(&self, w: &CMatrix) -> Result<StateFamily, RepError> {
        check_unitary(w, self.dim())?;
        Ok(StateFamily {
            states: self.states.iter().map(|s| w * s).collect(),
            weights: self.weights.clone(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resolution {
    /// Largest entry of `sum w |s><s| - I`.
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Checks `sum_theta rho(theta) |theta><theta| = I`.
pub fn resolution_over_theta(family: &StateFamily) -> Resolution {
    let d = family.dim();
    let deviation = algebra::max_abs(&(family.frame_sum() - algebra::identity(d)));
    let tolerance = RESOLUTION_TOL * d as f64;
    Resolution {
        deviation,
        tolerance,
        passed: deviation <= tolerance,
    }
}

/// Orbit of a fiducial vector under a unitary representation, weighted by an
/// invariant measure on the space the group acts on.
#[derive(Debug, Clone)]
pub struct CoherentSystem {
    pub rep: UnitaryRep,
    pub action: GroupAction,
    pub base_point: usize,
    pub fiducial: CVector,
    /// `V(k)|phi_0>`, indexed by group element.
    pub states: Vec<CVector>,
    pub measure: InvariantMeasure,
    /// Measure of the point `k phi_0`, indexed by group element.
    pub weights: Vec<f64>,
    pub irreducibility: Irreducibility,
}

impl CoherentSystem {
    pub fn family(&self) -> StateFamily {
        StateFamily {
            states: self.states.clone(),
            weights: self.weights.clone(),
        }
    }

    /// The family with weights divided by the frame constant.
    pub fn normalized_family(&self, frame: &FrameOperator) -> StateFamily {
        StateFamily {
            states: self.states.clone(),
            weights: frame.normalized_weights.clone(),
        }
    }
}

pub fn make_coherent(
    rep: UnitaryRep,
    action: GroupAction,
    base_point: usize,
    fiducial: CVector,
    measure: InvariantMeasure,
) -> Result<CoherentSystem, RepError> {
    if **rep.group() != **action.group() {
        return Err(RepError::GroupMismatch);
    }
    if fiducial.len() != rep.dim() {
        return Err(AlgebraError::DimensionMismatch {
            expected: rep.dim(),
            found: fiducial.len(),
        }
        .into());
    }
    if base_point >= action.space_size() {
        return Err(RepError::Mismatch(format!(
            "base point {base_point} outside a space of {} points",
            action.space_size()
        )));
    }
    if measure.weights.len() != action.space_size() {
        return Err(RepError::Mismatch(
            "measure does not match the space".into(),
        ));
    }
    if fiducial.norm() == 0.0 {
        return Err(RepError::ZeroFiducial);
    }
    if !action.is_transitive() {
        return Err(RepError::NonTransitive);
    }
    let states: Vec<CVector> = rep.matrices().par_iter().map(|m| m * &fiducial).collect();
    let weights = (0..rep.group().order())
        .map(|k| measure.weight(action.apply(k, base_point)))
        .collect();
    let irreducibility = is_irreducible(&rep, DEFAULT_COMMUTANT_TOL);
    Ok(CoherentSystem {
        rep,
        action,
        base_point,
        fiducial,
        states,
        measure,
        weights,
        irreducibility,
    })
}

#[derive(Debug, Clone)]
pub struct FrameOperator {
    /// `T = sum_k w_k |phi(k)><phi(k)|`
    pub t: CMatrix,
    pub lambda: f64,
    pub normalized_weights: Vec<f64>,
    /// `max_h ||V(h) T - T V(h)||_F`
    pub commutation_defect: f64,
    /// `||T - lambda I||_F`
    pub scalar_deviation: f64,
    /// Largest entry of `sum (w/lambda) |phi><phi| - I`.
    pub resolution_deviation: f64,
}

/// Largest `||V(h) T - T V(h)||_F` over the group.
pub fn commutation_defect(rep: &UnitaryRep, t: &CMatrix) -> f64 {
    rep.matrices()
        .iter()
        .map(|v| (v * t - t * v).norm())
        .fold(0.0, f64::max)
}

/// Frame operator of a coherent system and its scalar constant.
pub fn frame_operator(cs: &CoherentSystem) -> Result<FrameOperator, RepError> {
    let family = cs.family();
    let t = family.frame_sum();
    let commutation = commutation_defect(&cs.rep, &t);
    let trace = t.trace().re;
    let d = cs.rep.dim();
    let lambda = trace / d as f64;
    let scalar_deviation = (&t - algebra::identity(d) * c(lambda, 0.0)).norm();
    if commutation > COMMUTATION_TOL * t.norm().max(1.0)
        || scalar_deviation > SCALAR_TOL * trace
        || lambda <= 0.0
    {
        return Err(RepError::NotScalar {
            deviation: scalar_deviation,
            commutation,
        });
    }
    let normalized_weights: Vec<f64> = cs.weights.iter().map(|w| w / lambda).collect();
    let normalized = StateFamily {
        states: cs.states.clone(),
        weights: normalized_weights.clone(),
    };
    let resolution_deviation = resolution_over_theta(&normalized).deviation;
    Ok(FrameOperator {
        t,
        lambda,
        normalized_weights,
        commutation_defect: commutation,
        scalar_deviation,
        resolution_deviation,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameSpectrum {
    pub min_eigenvalue: f64,
    pub rank: usize,
}

/// Smallest eigenvalue and numerical rank of a frame sum.
pub fn frame_spectrum(t: &CMatrix) -> Result<FrameSpectrum, RepError> {
    let (values, _) = algebra::eigh(t)?;
    let cutoff = 1e-10 * t.norm().max(1.0);
    Ok(FrameSpectrum {
        min_eigenvalue: values[0],
        rank: values.iter().filter(|&&v| v > cutoff).count(),
    })
}

/// Applies `W` to every state, the fiducial and the representation.
pub fn unitary_transport(cs: &CoherentSystem, w: &CMatrix) -> Result<CoherentSystem, RepError> {
    let rep = cs.rep.conjugate(w)?;
    Ok(CoherentSystem {
        rep,
        action: cs.action.clone(),
        base_point: cs.base_point,
        fiducial: w * &cs.fiducial,
        states: cs.states.iter().map(|s| w * s).collect(),
        measure: cs.measure.clone(),
        weights: cs.weights.clone(),
        irreducibility: cs.irreducibility,
    })
}

/// Two-dimensional irrep of `dihedral:4`: rotation by 90 degrees and
/// reflection `diag(1, -1)`.
pub fn dihedral4_irrep() -> Result<UnitaryRep, RepError> {
    let group = Arc::new(crate::groups::dihedral(4)?);
    let rot = algebra::real_matrix(2, 2, &[0.0, -1.0, 1.0, 0.0]);
    let refl = algebra::real_diag(&[1.0, -1.0]);
    UnitaryRep::from_generators(group, 2, &[rot, refl])
}

/// `q = w + xi + yj + zk` as the SU(2) matrix `[[w + ix, y + iz], [-y + iz, w - ix]]`.
pub fn quaternion_to_su2(q: [f64; 4]) -> CMatrix {
    let [w, x, y, z] = q;
    CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(w, x),
            Complex64::new(y, z),
            Complex64::new(-y, z),
            Complex64::new(w, -x),
        ],
    )
}

/// The binary tetrahedral group through its defining spin-1/2 representation.
pub fn binary_tetrahedral_spin_half() -> Result<UnitaryRep, RepError> {
    let (group, quats) = crate::groups::binary_tetrahedral()?;
    let matrices = quats.into_iter().map(quaternion_to_su2).collect();
    UnitaryRep::new(Arc::new(group), matrices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cyclic, invariant_measure};

    fn regular_unit_measure(group: &Arc<FiniteGroup>) -> (GroupAction, InvariantMeasure) {
        let act = GroupAction::regular(group.clone());
        let m = invariant_measure(&act, &[group.order() as f64]).unwrap();
        (act, m)
    }

    #[test]
    fn left_regular_examples() {
        let z2 = Arc::new(cyclic(2).unwrap());
        let rep = UnitaryRep::left_regular(z2);
        assert_eq!(rep.matrix(0), &algebra::identity(2));
        assert_eq!(
            rep.matrix(1),
            &algebra::real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0])
        );

        let z3 = Arc::new(cyclic(3).unwrap());
        let rep = UnitaryRep::left_regular(z3.clone());
        // (U(1) f)(x) = f(x - 1): e_x -> e_{x+1}
        let shift = algebra::real_matrix(3, 3, &[0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        assert_eq!(rep.matrix(1), &shift);
        assert!(UnitaryRep::new(z3, rep.matrices().to_vec()).is_ok());
    }

    #[test]
    fn rejects_invalid_reps() {
        let z2 = Arc::new(cyclic(2).unwrap());
        let not_unitary = vec![algebra::identity(2), algebra::real_diag(&[2.0, 0.5])];
        assert!(matches!(
            UnitaryRep::new(z2.clone(), not_unitary),
            Err(RepError::NotUnitary { element: 1, .. })
        ));
        // i * I squares to -I, not the identity
        let bad = vec![algebra::identity(2), algebra::identity(2) * c(0.0, 1.0)];
        assert!(matches!(
            UnitaryRep::new(z2, bad),
            Err(RepError::NotHomomorphism { .. })
        ));
    }

    #[test]
    fn irreducibility_examples() {
        let z3 = Arc::new(cyclic(3).unwrap());
        let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let one_dim =
            UnitaryRep::from_generators(z3, 1, &[CMatrix::from_element(1, 1, omega)]).unwrap();
        let irr = is_irreducible(&one_dim, DEFAULT_COMMUTANT_TOL);
        assert!(irr.irreducible);
        assert_eq!(irr.commutant_dimension, 1);

        let d4 = dihedral4_irrep().unwrap();
        let irr = is_irreducible(&d4, DEFAULT_COMMUTANT_TOL);
        assert!(irr.irreducible);
        assert_eq!(irr.commutant_dimension, 1);

        let triv = UnitaryRep::trivial(d4.group().clone(), 1);
        let sum = triv.direct_sum(&triv).unwrap();
        let irr = is_irreducible(&sum, DEFAULT_COMMUTANT_TOL);
        assert!(!irr.irreducible);
        assert_eq!(irr.commutant_dimension, 4);

        // regular representation: commutant dimension equals the group order
        let reg = UnitaryRep::left_regular(d4.group().clone());
        assert_eq!(
            is_irreducible(&reg, DEFAULT_COMMUTANT_TOL).commutant_dimension,
            8
        );
    }

    #[test]
    fn dihedral_frame_is_four() {
        let rep = dihedral4_irrep().unwrap();
        let (act, m) = regular_unit_measure(rep.group());
        let cs = make_coherent(rep, act, 0, algebra::basis_vector(2, 0), m).unwrap();
        assert_eq!(cs.states.len(), 8);
        for s in &cs.states {
            assert!((s.norm() - 1.0).abs() < 1e-14);
        }
        let frame = frame_operator(&cs).unwrap();
        assert!((frame.lambda - 4.0).abs() < 1e-12);
        assert!(frame.resolution_deviation < 1e-12);
    }

    #[test]
    fn trivial_group_frame() {
        let g = Arc::new(cyclic(1).unwrap());
        let rep = UnitaryRep::trivial(g.clone(), 1);
        let (act, m) = regular_unit_measure(&g);
        let fid = CVector::from_element(1, c(1.0, 0.0));
        let cs = make_coherent(rep, act, 0, fid.clone(), m).unwrap();
        assert_eq!(cs.states, vec![fid]);
        let frame = frame_operator(&cs).unwrap();
        assert!((frame.lambda - 1.0).abs() < 1e-15);
    }

    #[test]
    fn coherent_errors() {
        let rep = dihedral4_irrep().unwrap();
        let (act, m) = regular_unit_measure(rep.group());
        assert!(matches!(
            make_coherent(rep.clone(), act.clone(), 0, CVector::zeros(2), m.clone()),
            Err(RepError::ZeroFiducial)
        ));
        let trivial_action = GroupAction::trivial(rep.group().clone(), 2);
        let m2 = invariant_measure(&trivial_action, &[1.0, 1.0]).unwrap();
        assert!(matches!(
            make_coherent(rep, trivial_action, 0, algebra::basis_vector(2, 0), m2),
            Err(RepError::NonTransitive)
        ));
    }

    #[test]
    fn reducible_rep_is_not_scalar() {
        let d4 = dihedral4_irrep().unwrap();
        let triv = UnitaryRep::trivial(d4.group().clone(), 1);
        let rep = d4.direct_sum(&triv).unwrap();
        let (act, m) = regular_unit_measure(rep.group());
        let fid = CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let cs = make_coherent(rep, act, 0, fid, m).unwrap();
        assert!(!cs.irreducibility.irreducible);
        assert!(matches!(
            frame_operator(&cs),
            Err(RepError::NotScalar { .. })
        ));
    }

    #[test]
    fn resolution_examples() {
        let basis = StateFamily::standard_basis(2);
        assert_eq!(resolution_over_theta(&basis).deviation, 0.0);
        let single = StateFamily::new(vec![algebra::basis_vector(2, 0)], vec![1.0]).unwrap();
        let r = resolution_over_theta(&single);
        assert_eq!(r.deviation, 1.0);
        assert!(!r.passed);
        assert!(StateFamily::new(vec![], vec![]).is_err());
        assert!(StateFamily::new(vec![algebra::basis_vector(2, 0)], vec![-1.0]).is_err());
    }

    #[test]
    fn transport_keeps_resolution() {
        let rep = dihedral4_irrep().unwrap();
        let (act, m) = regular_unit_measure(rep.group());
        let cs = make_coherent(rep, act, 0, algebra::basis_vector(2, 0), m).unwrap();
        let frame = frame_operator(&cs).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let hadamard = algebra::real_matrix(2, 2, &[s, s, s, -s]);
        let moved = unitary_transport(&cs, &hadamard).unwrap();
        let fam = moved.normalized_family(&frame);
        assert!(resolution_over_theta(&fam).deviation <= 1e-12);

        let phase = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 1.0)]));
        let moved = unitary_transport(&cs, &phase).unwrap();
        assert!(resolution_over_theta(&moved.normalized_family(&frame)).deviation <= 1e-12);

        assert!(matches!(
            unitary_transport(&cs, &algebra::real_diag(&[1.0, 2.0])),
            Err(RepError::NotUnitary { .. })
        ));
    }
}
