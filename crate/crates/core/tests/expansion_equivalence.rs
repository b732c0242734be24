//! Dual-route reconstruction checks: the direct half-line (Dirac) route
//! and the deformed-contour (complex-basis) route must agree on every
//! real grid point for every rational wavefunction/model pair, and the
//! resonance pole coefficients must not depend on how the residue
//! circles are parameterized.

use gamowkit::scattering::SMatrixModel;
use gamowkit::spectral::{
    complex_basis_reconstruct, complex_basis_reconstruct_with, dirac_reconstruct,
    EnergyWavefunction, ExpansionOptions, ResonanceParameters, Support,
};
use gamowkit::{ComplexEnergy, ErrorKind};
use num_complex::Complex64;

const QUAD_ORDER: usize = 64;
const ROUTE_TOL: f64 = 1e-6;
const COEFFICIENT_TOL: f64 = 1e-8;

fn bw_state(e_r: f64, gamma: f64) -> EnergyWavefunction {
    let p = ResonanceParameters::new(e_r, gamma).unwrap();
    EnergyWavefunction::breit_wigner(&p, Support::SemiBounded).unwrap()
}

fn two_pole_state() -> EnergyWavefunction {
    EnergyWavefunction::new(
        vec![
            (
                ComplexEnergy::new(2.0, 0.05).unwrap(),
                Complex64::new(0.0, 1.0),
            ),
            (
                ComplexEnergy::new(5.0, 0.2).unwrap(),
                Complex64::new(0.0, 0.6),
            ),
        ],
        Support::SemiBounded,
        "two-pole corpus state",
    )
    .unwrap()
}

fn rational(poles: &[(f64, f64)]) -> SMatrixModel {
    SMatrixModel::rational(
        poles
            .iter()
            .map(|&(re, im)| ComplexEnergy::new(re, im).unwrap())
            .collect(),
    )
    .unwrap()
}

/// The (wavefunction, model, grid) corpus used for the route-agreement
/// sweep.  Grids straddle each resonance and reach into both wings.
fn corpus() -> Vec<(EnergyWavefunction, SMatrixModel, Vec<f64>)> {
    vec![
        (
            bw_state(2.0, 0.1),
            rational(&[(2.0, -0.05)]),
            vec![0.8, 1.6, 1.95, 2.05, 3.2, 6.0],
        ),
        (
            bw_state(2.0, 0.1),
            rational(&[(2.0, -0.05), (5.0, -0.4)]),
            vec![0.8, 2.1, 3.5, 4.9, 5.2, 9.5],
        ),
        (
            two_pole_state(),
            rational(&[(2.0, -0.05), (5.0, -0.4)]),
            vec![0.5, 1.9, 2.2, 4.7, 5.3, 8.0],
        ),
        (
            bw_state(5.0, 0.5),
            rational(&[(4.8, -0.15)]),
            vec![1.0, 4.5, 5.0, 5.5, 12.0],
        ),
    ]
}

#[test]
fn dual_routes_agree_on_every_corpus_pair() {
    for (i, (phi, model, grid)) in corpus().into_iter().enumerate() {
        let direct = dirac_reconstruct(&phi, &model, &grid, QUAD_ORDER).unwrap();
        let deformed = complex_basis_reconstruct(&phi, &model, &grid, QUAD_ORDER).unwrap();
        let mut worst = 0.0_f64;
        for (d, c) in direct.iter().zip(deformed.reconstruction()) {
            worst = worst.max((d - c).norm());
        }
        assert!(
            worst < ROUTE_TOL,
            "corpus pair {i}: max route deviation {worst:e} exceeds {ROUTE_TOL:e}"
        );
    }
}

#[test]
fn far_from_every_pole_the_reconstruction_returns_the_state() {
    // With the sampling window centered far from all resonance structure,
    // both routes reduce to evaluating the state itself.
    let phi = bw_state(2.0, 0.1);
    let model = rational(&[(2.0, -0.05)]);
    let grid = [40.0, 75.0];
    let direct = dirac_reconstruct(&phi, &model, &grid, QUAD_ORDER).unwrap();
    let deformed = complex_basis_reconstruct(&phi, &model, &grid, QUAD_ORDER).unwrap();
    for (k, &e_prime) in grid.iter().enumerate() {
        let bare = phi.evaluate(Complex64::new(e_prime, 0.0));
        assert!(
            (direct[k] - bare).norm() < 1e-6,
            "direct route at E' = {e_prime} deviates from the state"
        );
        assert!(
            (deformed.reconstruction()[k] - bare).norm() < 1e-6,
            "deformed route at E' = {e_prime} deviates from the state"
        );
    }
}

#[test]
fn pole_coefficients_ignore_residue_circle_parameterization() {
    let phi = bw_state(2.0, 0.1);
    let model = rational(&[(2.0, -0.05), (5.0, -0.4)]);
    let grid = [1.0, 3.0, 6.0];
    let baseline =
        complex_basis_reconstruct_with(&phi, &model, &grid, ExpansionOptions::default()).unwrap();
    let variants = [
        ExpansionOptions {
            order: 64,
            residue_points: 96,
            residue_radius_scale: 0.7,
        },
        ExpansionOptions {
            order: 96,
            residue_points: 128,
            residue_radius_scale: 0.5,
        },
    ];
    for options in variants {
        let alt = complex_basis_reconstruct_with(&phi, &model, &grid, options).unwrap();
        assert_eq!(baseline.pole_locations(), alt.pole_locations());
        for (a, b) in baseline
            .pole_coefficients()
            .iter()
            .zip(alt.pole_coefficients())
        {
            assert!(
                (a - b).norm() < COEFFICIENT_TOL,
                "coefficient {a} moved to {b} under contour re-parameterization"
            );
        }
    }
}

#[test]
fn pole_coefficients_survive_raw_residue_rescaling() {
    // Scaling every raw residue by a positive constant is absorbed by the
    // normalization, so the physical state and its expansion are unchanged.
    let raw = vec![(
        ComplexEnergy::new(2.0, 0.05).unwrap(),
        Complex64::new(0.0, 1.0),
    )];
    let scaled = vec![(
        ComplexEnergy::new(2.0, 0.05).unwrap(),
        Complex64::new(0.0, 7.0),
    )];
    let phi_a = EnergyWavefunction::new(raw, Support::SemiBounded, "unit").unwrap();
    let phi_b = EnergyWavefunction::new(scaled, Support::SemiBounded, "scaled").unwrap();
    let model = rational(&[(2.0, -0.05)]);
    let grid = [1.5, 2.5];
    let a = complex_basis_reconstruct(&phi_a, &model, &grid, QUAD_ORDER).unwrap();
    let b = complex_basis_reconstruct(&phi_b, &model, &grid, QUAD_ORDER).unwrap();
    for (ca, cb) in a.pole_coefficients().iter().zip(b.pole_coefficients()) {
        assert!((ca - cb).norm() < 1e-12);
    }
    for (ra, rb) in a.reconstruction().iter().zip(b.reconstruction()) {
        assert!((ra - rb).norm() < 1e-12);
    }
}

#[test]
fn background_samples_trace_the_negative_axis() {
    let phi = bw_state(2.0, 0.1);
    let model = rational(&[(2.0, -0.05)]);
    let result = complex_basis_reconstruct(&phi, &model, &[1.0, 4.0], QUAD_ORDER).unwrap();
    assert!(!result.background().is_empty());
    for &(s, value) in result.background() {
        assert!(s >= 0.0, "contour parameter must be non-negative");
        assert!(value.re.is_finite() && value.im.is_finite());
    }
    // The continuation integrand of a simple-pole state decays like 1/s
    // along the contour (S -> 1 far from its poles), so the final sample
    // sits well below the peak near s = 0.
    let peak = result
        .background()
        .iter()
        .map(|(_, v)| v.norm())
        .fold(0.0_f64, f64::max);
    let tail = result.background().last().unwrap().1.norm();
    assert!(tail < 0.2 * peak, "tail {tail:e} vs peak {peak:e}");
}

#[test]
fn potential_models_are_rejected_for_expansion() {
    let phi = bw_state(2.0, 0.1);
    let shell = SMatrixModel::delta_shell(20.0, 1.0).unwrap();
    let err = dirac_reconstruct(&phi, &shell, &[1.0], QUAD_ORDER).unwrap_err();
    assert_eq!(err.kind(), ErrorKind::InvalidModel);
    let err = complex_basis_reconstruct(&phi, &shell, &[1.0], QUAD_ORDER).unwrap_err();
    assert_eq!(err.kind(), ErrorKind::InvalidModel);
}

#[test]
fn full_line_states_are_rejected_for_expansion() {
    let p = ResonanceParameters::new(2.0, 0.1).unwrap();
    let phi = EnergyWavefunction::breit_wigner(&p, Support::FullLine).unwrap();
    let model = rational(&[(2.0, -0.05)]);
    let err = dirac_reconstruct(&phi, &model, &[1.0], QUAD_ORDER).unwrap_err();
    assert_eq!(err.kind(), ErrorKind::InvalidModel);
}

#[test]
fn non_positive_grids_are_rejected() {
    let phi = bw_state(2.0, 0.1);
    let model = rational(&[(2.0, -0.05)]);
    for bad in [vec![], vec![0.0], vec![-1.0], vec![1.0, f64::NAN]] {
        let err = dirac_reconstruct(&phi, &model, &bad, QUAD_ORDER).unwrap_err();
        assert_eq!(err.kind(), ErrorKind::InvalidModel);
    }
}
