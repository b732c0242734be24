//! Time evolution: unitary survival amplitudes on full-line and
//! semibounded spectra, the exponential Gamow semigroup, and the Khalfin
//! comparison that exhibits the necessary long-time departure from
//! exponential decay.
//!
//! # Survival amplitude
//!
//! For a normalized energy wavefunction the survival amplitude is
//!
//! ```text
//! A(t) = integral |phi(E)|^2 e^{-iEt} dE     over the support,
//! ```
//!
//! and the survival probability is `|A(t)|^2`.  Because `|phi|^2` is a
//! rational function of `E`, the integral is evaluated by contour methods
//! rather than oscillatory quadrature:
//!
//! * **Full line** — close the contour in the half plane where `e^{-iEt}`
//!   decays (below for `t >= 0`, above for `t < 0`) and sum the pole
//!   residues exactly.  No quadrature at all, so the idealized
//!   Breit-Wigner case reproduces `e^{-Gamma t}` to machine precision at
//!   every `t`.
//! * **Half line** — rotate the ray `[0, inf)` onto the imaginary axis on
//!   the decaying side.  The amplitude becomes the same exact residue sum
//!   (over poles swept by the rotation) plus a *damped* endpoint integral
//!   `-i int_0^inf phi(-iy) phi*(-iy) e^{-yt} dy`, which a graded
//!   semi-infinite rule evaluates at any `t` without oscillation.  The
//!   endpoint term is what breaks the exponential law at late times.
//!
//! Negative times use the mirrored closure, so the unitarity check
//! `A(-t) = conj A(t)` compares two genuinely independent computations.
//!
//! # Gamow semigroup
//!
//! A pure Gamow state decays as `W(t) = e^{-Gamma t} W(0)` for `t >= 0`
//! only; [`gamow_evolve`] rejects negative times with a `semigroup-domain`
//! error, the artifact's expression of the arrow of time built into the
//! decaying state.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, ToolkitError};
use crate::quad::{integrate_to_convergence, QuadKind, SELF_CONVERGENCE_RTOL};
use crate::spectral::{EnergyWavefunction, ResonanceParameters, Support};

/// Quadrature order for the damped endpoint integral of the semibounded
/// amplitude.
const CUT_QUAD_ORDER: usize = 64;

/// The unitary survival amplitude `A(t)` of a prepared state over the
/// chosen support.
///
/// Preconditions: `t` finite, and `support` must match the support the
/// wavefunction was normalized on (`invalid-model` otherwise — the
/// amplitude of a state normalized elsewhere would not start at 1).
///
/// Errors: `invariant-violation` when a pole lies exactly on the rotated
/// integration ray (the imaginary energy axis); `non-convergence` when the
/// endpoint quadrature fails its self-convergence check.
pub fn survival_amplitude(phi: &EnergyWavefunction, t: f64, support: Support) -> Result<Complex64> {
    if !t.is_finite() {
        return Err(ToolkitError::invalid_model("evolution time must be finite").with("t", t));
    }
    if support != phi.support() {
        return Err(ToolkitError::invalid_model(
            "wavefunction is normalized on a different support",
        ));
    }
    match support {
        Support::FullLine => full_line_amplitude(phi, t),
        Support::SemiBounded => half_line_amplitude(phi, t),
    }
}

/// The survival probability `|A(t)|^2`.
pub fn survival_probability(phi: &EnergyWavefunction, t: f64, support: Support) -> Result<f64> {
    Ok(survival_amplitude(phi, t, support)?.norm_sqr())
}

/// Exact residue closure for the full-line amplitude: with the density's
/// poles split by half plane, closing downward (`t >= 0`) or upward
/// (`t < 0`) turns the Fourier integral into a finite sum of decaying
/// exponentials.
fn full_line_amplitude(phi: &EnergyWavefunction, t: f64) -> Result<Complex64> {
    let n = phi.normalization();
    let mut acc = Complex64::new(0.0, 0.0);
    if t >= 0.0 {
        for &(p, r) in phi.poles() {
            if p.im < 0.0 {
                acc += n * r * phi.evaluate_reflected(p) * phase(p, t);
            } else {
                let q = p.conj();
                acc += n * r.conj() * phi.evaluate(q) * phase(q, t);
            }
        }
        Ok(Complex64::new(0.0, -2.0 * PI) * acc)
    } else {
        for &(p, r) in phi.poles() {
            if p.im > 0.0 {
                acc += n * r * phi.evaluate_reflected(p) * phase(p, t);
            } else {
                let q = p.conj();
                acc += n * r.conj() * phi.evaluate(q) * phase(q, t);
            }
        }
        Ok(Complex64::new(0.0, 2.0 * PI) * acc)
    }
}

/// Residue-plus-endpoint evaluation of the half-line amplitude: the ray
/// `[0, inf)` is rotated onto the decaying imaginary axis, sweeping the
/// density's poles in the quadrant between (those with `Re > 0` on the
/// decaying side) and leaving a damped endpoint integral.
fn half_line_amplitude(phi: &EnergyWavefunction, t: f64) -> Result<Complex64> {
    for &(p, _) in phi.poles() {
        if p.re == 0.0 {
            return Err(ToolkitError::invariant_violation(
                "wavefunction pole lies on the rotated integration ray",
            )
            .with("pole_im", p.im));
        }
    }
    let n = phi.normalization();
    let scale = phi.feature_scale();
    let mut acc = Complex64::new(0.0, 0.0);
    if t >= 0.0 {
        // Fourth-quadrant poles of the density: original poles below the
        // axis and reflections of poles above it.
        for &(p, r) in phi.poles() {
            if p.re > 0.0 {
                if p.im < 0.0 {
                    acc += n * r * phi.evaluate_reflected(p) * phase(p, t);
                } else {
                    let q = p.conj();
                    acc += n * r.conj() * phi.evaluate(q) * phase(q, t);
                }
            }
        }
        let cut = integrate_to_convergence(
            QuadKind::SemiInfiniteMapped { start: 0.0, scale },
            CUT_QUAD_ORDER,
            SELF_CONVERGENCE_RTOL,
            |y| {
                let z = Complex64::new(0.0, -y);
                phi.evaluate(z) * phi.evaluate_reflected(z) * (-y * t).exp()
            },
        )?;
        Ok(Complex64::new(0.0, -2.0 * PI) * acc - Complex64::new(0.0, 1.0) * cut)
    } else {
        // Mirrored closure through the first quadrant for reversed time.
        for &(p, r) in phi.poles() {
            if p.re > 0.0 {
                if p.im > 0.0 {
                    acc += n * r * phi.evaluate_reflected(p) * phase(p, t);
                } else {
                    let q = p.conj();
                    acc += n * r.conj() * phi.evaluate(q) * phase(q, t);
                }
            }
        }
        let cut = integrate_to_convergence(
            QuadKind::SemiInfiniteMapped { start: 0.0, scale },
            CUT_QUAD_ORDER,
            SELF_CONVERGENCE_RTOL,
            |y| {
                let z = Complex64::new(0.0, y);
                phi.evaluate(z) * phi.evaluate_reflected(z) * (y * t).exp()
            },
        )?;
        Ok(Complex64::new(0.0, 2.0 * PI) * acc + Complex64::new(0.0, 1.0) * cut)
    }
}

/// `e^{-iqt}` for a complex pole energy `q`.
fn phase(q: Complex64, t: f64) -> Complex64 {
    (Complex64::new(0.0, -t) * q).exp()
}

/// Label distinguishing the unitary semibounded curve from the pure
/// exponential semigroup law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    /// Unitary evolution of a state on the physical half-line spectrum.
    UnitarySemibounded,
    /// The exponential law `e^{-Gamma t}` of a pure Gamow state.
    GamowExponential,
}

impl std::fmt::Display for CurveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CurveKind::UnitarySemibounded => write!(f, "unitary-semibounded"),
            CurveKind::GamowExponential => write!(f, "gamow-exponential"),
        }
    }
}

/// A survival-probability curve over non-negative, increasing times.
#[derive(Debug, Clone)]
pub struct SurvivalCurve {
    times: Vec<f64>,
    values: Vec<f64>,
    kind: CurveKind,
}

impl SurvivalCurve {
    /// Validates and wraps a curve: times non-negative and strictly
    /// increasing, one probability in `[0, 1 + 1e-9]` per time, and a
    /// first value of 1 (within `1e-9`) when the curve starts at `t = 0`.
    pub fn new(times: Vec<f64>, values: Vec<f64>, kind: CurveKind) -> Result<Self> {
        if times.is_empty() || times.len() != values.len() {
            return Err(ToolkitError::invariant_violation(
                "curve needs matching, non-empty time and value lists",
            )
            .with("times", times.len())
            .with("values", values.len()));
        }
        let mut last = -1.0_f64;
        for &t in &times {
            if !t.is_finite() || t < 0.0 || t <= last {
                return Err(ToolkitError::invariant_violation(
                    "curve times must be non-negative and strictly increasing",
                )
                .with("t", t));
            }
            last = t;
        }
        for &v in &values {
            if !v.is_finite() || !(-1e-12..=1.0 + 1e-9).contains(&v) {
                return Err(ToolkitError::invariant_violation(
                    "curve values must be probabilities",
                )
                .with("value", v));
            }
        }
        if times[0] == 0.0 && (values[0] - 1.0).abs() > 1e-9 {
            return Err(ToolkitError::invariant_violation(
                "a curve starting at t = 0 must start at probability 1",
            )
            .with("value", values[0]));
        }
        Ok(SurvivalCurve {
            times,
            values,
            kind,
        })
    }

    /// Sample times.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Survival probabilities aligned with [`Self::times`].
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Which law the curve follows.
    pub fn kind(&self) -> CurveKind {
        self.kind
    }
}

/// Samples the unitary survival probability of a half-line-normalized
/// state over a grid of non-negative, increasing times.
pub fn survival_curve(phi: &EnergyWavefunction, times: &[f64]) -> Result<SurvivalCurve> {
    if phi.support() != Support::SemiBounded {
        return Err(ToolkitError::invalid_model(
            "unitary survival curves are defined for half-line-normalized states",
        ));
    }
    let values = times
        .iter()
        .map(|&t| survival_probability(phi, t, Support::SemiBounded))
        .collect::<Result<Vec<f64>>>()?;
    SurvivalCurve::new(times.to_vec(), values, CurveKind::UnitarySemibounded)
}

/// The weight of a pure Gamow state in a density operator: the
/// coefficient of `|psi><psi|`, a probability in `[0, 1]`, together with
/// the resonance it belongs to.
#[derive(Debug, Clone, Copy)]
pub struct GamowStateWeight {
    params: ResonanceParameters,
    weight: f64,
}

impl GamowStateWeight {
    /// Creates a weight; must be a probability in `[0, 1]`.
    pub fn new(params: ResonanceParameters, weight: f64) -> Result<Self> {
        if !weight.is_finite() || !(0.0..=1.0).contains(&weight) {
            return Err(
                ToolkitError::invalid_model("Gamow state weight must lie in [0, 1]")
                    .with("weight", weight),
            );
        }
        Ok(GamowStateWeight { params, weight })
    }

    /// The resonance the state belongs to.
    pub fn params(&self) -> &ResonanceParameters {
        &self.params
    }

    /// The current weight.
    pub fn weight(&self) -> f64 {
        self.weight
    }
}

/// Evolves a pure Gamow weight forward by `t >= 0`:
/// `weight -> weight * e^{-Gamma t}` with unchanged resonance parameters.
///
/// Negative times are rejected with `semigroup-domain`: the decaying Gamow
/// state generates only a forward semigroup, and no code path evolves it
/// backwards.
pub fn gamow_evolve(w: &GamowStateWeight, t: f64) -> Result<GamowStateWeight> {
    if !t.is_finite() {
        return Err(ToolkitError::invalid_model("evolution time must be finite").with("t", t));
    }
    if t < 0.0 {
        return Err(
            ToolkitError::semigroup_domain("Gamow states evolve forward in time only").with("t", t),
        );
    }
    Ok(GamowStateWeight {
        params: w.params,
        weight: w.weight * (-w.params.gamma() * t).exp(),
    })
}

/// The exponential-law curve `weight * e^{-Gamma t}` of a pure Gamow
/// state, built by repeated forward evolution.
pub fn gamow_curve(w: &GamowStateWeight, times: &[f64]) -> Result<SurvivalCurve> {
    let values = times
        .iter()
        .map(|&t| gamow_evolve(w, t).map(|evolved| evolved.weight()))
        .collect::<Result<Vec<f64>>>()?;
    SurvivalCurve::new(times.to_vec(), values, CurveKind::GamowExponential)
}

/// One row of the Khalfin comparison: the unitary half-line survival
/// probability against the exponential law at the same time.
#[derive(Debug, Clone, Copy)]
pub struct KhalfinRow {
    /// Sample time.
    pub t: f64,
    /// Unitary survival probability of the truncated Breit-Wigner state.
    pub p_semibounded: f64,
    /// The exponential law `e^{-Gamma t}`.
    pub exponential: f64,
    /// `p_semibounded / exponential`; drifts from 1 at late times.
    pub ratio: f64,
}

/// Compares the unitary survival probability of the half-line-truncated
/// Breit-Wigner state with the exponential law over a grid of times.
///
/// Preconditions: `E_R / Gamma >= 2` (the resonance must be resolvable on
/// the half-line) and times non-negative, strictly increasing.
pub fn khalfin_comparison(p: &ResonanceParameters, times: &[f64]) -> Result<Vec<KhalfinRow>> {
    if p.e_r() / p.gamma() < 2.0 {
        return Err(ToolkitError::invalid_model(
            "Khalfin comparison needs a resolvable resonance with E_R >= 2 Gamma",
        )
        .with("e_r", p.e_r())
        .with("gamma", p.gamma()));
    }
    if times.is_empty() {
        return Err(ToolkitError::invalid_model("comparison time grid is empty"));
    }
    let mut last = f64::NEG_INFINITY;
    for &t in times {
        if !t.is_finite() || t < 0.0 || t <= last {
            return Err(ToolkitError::invalid_model(
                "comparison times must be non-negative and strictly increasing",
            )
            .with("t", t));
        }
        last = t;
    }
    let phi = EnergyWavefunction::breit_wigner(p, Support::SemiBounded)?;
    times
        .iter()
        .map(|&t| {
            let p_semibounded = survival_probability(&phi, t, Support::SemiBounded)?;
            let exponential = (-p.gamma() * t).exp();
            Ok(KhalfinRow {
                t,
                p_semibounded,
                exponential,
                ratio: p_semibounded / exponential,
            })
        })
        .collect()
}
