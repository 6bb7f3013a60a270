//! Position and momentum on the cyclic lattice `Z_n`.
//!
//! This is a finite analog of translations in position and momentum: shifts
//! `|x> -> |x + c>` and phases `|x> -> w^{d x} |x>` with `w = exp(2 pi i / n)`.
//! The momentum basis is the discrete Fourier basis. Continuous spectra are
//! not represented.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{run_scenario, ScenarioConfig, ScenarioError};
use crate::algebra::{self, c, CMatrix};
use crate::coherent::{StateFamily, UnitaryRep};
use crate::groups::{cyclic, GroupAction};
use crate::quantize::{build_operator, maximality_check, ResolutionPolicy};
use crate::report::{Check, VerificationReport};
use crate::variables::{self, ConceptualVariable};

const MAX_SIZE: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseParams {
    #[serde(default = "default_n")]
    pub n: usize,
    /// Position shift `c`.
    #[serde(default = "one")]
    pub shift: i64,
    /// Momentum shift `d`.
    #[serde(default = "one")]
    pub boost: i64,
}

fn default_n() -> usize {
    8
}

fn one() -> i64 {
    1
}

impl Default for PhaseParams {
    fn default() -> Self {
        PhaseParams {
            n: default_n(),
            shift: 1,
            boost: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceScenario {
    pub n: usize,
    pub shift: usize,
    pub boost: usize,
}

impl PhaseSpaceScenario {
    /// Shifts are reduced mod `n`.
    pub fn new(params: &PhaseParams) -> Result<Self, ScenarioError> {
        let n = params.n;
        if !(2..=MAX_SIZE).contains(&n) {
            return Err(ScenarioError::BadSize(n));
        }
        let m = n as i64;
        Ok(PhaseSpaceScenario {
            n,
            shift: params.shift.rem_euclid(m) as usize,
            boost: params.boost.rem_euclid(m) as usize,
        })
    }
}

fn root_of_unity(n: usize, k: usize) -> num_complex::Complex64 {
    let angle = 2.0 * PI * (k % n) as f64 / n as f64;
    c(angle.cos(), angle.sin())
}

/// `|x> -> |x + c mod n>`
pub fn position_shift(n: usize, shift: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    for x in 0..n {
        m[((x + shift) % n, x)] = c(1.0, 0.0);
    }
    m
}

/// `|x> -> w^{d x} |x>`
pub fn momentum_phase(n: usize, boost: usize) -> CMatrix {
    CMatrix::from_diagonal(&algebra::CVector::from_iterator(
        n,
        (0..n).map(|x| root_of_unity(n, boost * x)),
    ))
}

/// `F[x, p] = w^{x p} / sqrt(n)`; column `p` is the momentum state `|p>`.
pub fn fourier_matrix(n: usize) -> CMatrix {
    let s = 1.0 / (n as f64).sqrt();
    CMatrix::from_fn(n, n, |x, p| root_of_unity(n, x * p) * s)
}

pub(super) fn phase_checks(params: &PhaseParams) -> Result<Vec<Check>, ScenarioError> {
    let scn = PhaseSpaceScenario::new(params)?;
    let n = scn.n;
    let group = Arc::new(cyclic(n)?);
    let mut checks = Vec::new();

    // UnitaryRep::new validates unitarity and the group law on every pair.
    let shifts = UnitaryRep::from_generators(group.clone(), n, &[position_shift(n, 1)])?;
    let phases = UnitaryRep::from_generators(group.clone(), n, &[momentum_phase(n, 1)])?;
    let rep_err = shifts
        .worst_homomorphism_pair()
        .2
        .max(phases.worst_homomorphism_pair().2);
    checks.push(Check::within(
        "translation-representations",
        "phase-space translations",
        rep_err,
        1e-8,
        format!("shifts and phases are representations of cyclic:{n}"),
    ));
    let unit = position_shift(n, 1);
    let power = (0..n).fold(algebra::identity(n), |acc, _| acc * &unit);
    let cycle = algebra::frobenius_dist(&power, &algebra::identity(n))?.max(
        algebra::frobenius_dist(&position_shift(n, n), &algebra::identity(n))?,
    );
    checks.push(Check::within(
        "full-cycle",
        "phase-space translations",
        cycle,
        1e-12,
        "shift by n is the identity",
    ));

    let f = fourier_matrix(n);
    let unitary = algebra::unitarity_defect(&f);
    let mub = f
        .iter()
        .map(|z| (z.norm_sqr() - 1.0 / n as f64).abs())
        .fold(0.0, f64::max);
    checks.push(Check::within(
        "mutually-unbiased",
        "phase-space translations",
        mub.max(unitary),
        1e-10,
        format!("|<x|p>|^2 = 1/{n} for all x, p (finite lattice analog of the continuous case)"),
    ));

    let (cs, ds) = (scn.shift, scn.boost);
    let xc = position_shift(n, cs);
    let zd = momentum_phase(n, ds);
    let intertwine =
        algebra::frobenius_dist(&(f.adjoint() * &xc * &f), &momentum_phase(n, n - cs))?.max(
            algebra::frobenius_dist(&(&zd * &f), &(&f * position_shift(n, ds)))?,
        );
    checks.push(Check::within(
        "fourier-intertwines",
        "phase-space translations",
        intertwine,
        1e-10,
        format!("position shift by {cs} is diagonal in momentum; phase by {ds} shifts momentum"),
    ));
    let weyl = algebra::frobenius_dist(&(&zd * &xc), &(&xc * &zd * root_of_unity(n, cs * ds)))?;
    checks.push(Check::within(
        "weyl-relation",
        "phase-space translations",
        weyl,
        1e-10,
        "Z_d X_c = w^{cd} X_c Z_d",
    ));

    // Both variables are accessible with nondegenerate operators.
    let labels: Vec<f64> = (0..n).map(|x| x as f64).collect();
    let position = build_operator(
        &StateFamily::standard_basis(n),
        &labels,
        ResolutionPolicy::Enforce,
    )?;
    let momentum_states = (0..n).map(|p| f.column(p).into_owned()).collect();
    let momentum = build_operator(
        &StateFamily::unit_weights(momentum_states)?,
        &labels,
        ResolutionPolicy::Enforce,
    )?;
    let commutator = algebra::commutator(&position.a, &momentum.a).norm();
    checks.push(Check::at_least(
        "noncommuting",
        "position and momentum",
        commutator,
        0.1,
        format!("||[X, P]||_F = {commutator:.6}"),
    ));
    checks.push(Check::exact(
        "both-maximal",
        "maximal accessibility",
        maximality_check(&position) && maximality_check(&momentum),
        "position and momentum operators are nondegenerate; no reduction is needed",
    ));

    let xi = ConceptualVariable::from_ids((0..n).collect())?;
    let translations =
        GroupAction::from_generators(group, n, &[(0..n).map(|x| (x + 1) % n).collect()])?;
    let induced = variables::induce_group(&xi, &translations)?;
    checks.push(Check::exact(
        "translations-transitive",
        "phase-space translations",
        induced.kernel == vec![0] && induced.image_action.is_transitive(),
        format!("cyclic:{n} acts faithfully and transitively on positions"),
    ));

    Ok(checks)
}

/// Runs the phase-space scenario on `Z_n` with unit shifts.
pub fn phase_space_demo(n: usize) -> Result<VerificationReport, ScenarioError> {
    let config = ScenarioConfig::new("phase").with_param("n", n.into());
    run_scenario(&config, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_fourier() {
        let f = fourier_matrix(2);
        for z in f.iter() {
            assert!((z.norm_sqr() - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn full_cycle_is_identity() {
        assert_eq!(position_shift(4, 4), algebra::identity(4));
    }

    #[test]
    fn three_point_commutator() {
        let checks = phase_checks(&PhaseParams {
            n: 3,
            ..PhaseParams::default()
        })
        .unwrap();
        let nc = checks.iter().find(|c| c.name == "noncommuting").unwrap();
        assert!(nc.passed && nc.max_error < -0.1);
    }

    #[test]
    fn all_sizes_pass() {
        for n in 2..=16 {
            for (shift, boost) in [(1, 1), (-3, 5), (n as i64, 0)] {
                let checks = phase_checks(&PhaseParams { n, shift, boost }).unwrap();
                let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
                assert!(failed.is_empty(), "n = {n}: {failed:#?}");
            }
        }
    }

    #[test]
    fn bad_sizes() {
        assert!(matches!(
            phase_space_demo(1),
            Err(ScenarioError::BadSize(1))
        ));
        assert!(matches!(
            phase_space_demo(0),
            Err(ScenarioError::BadSize(0))
        ));
        assert!(matches!(
            phase_space_demo(201),
            Err(ScenarioError::BadSize(201))
        ));
    }
}
