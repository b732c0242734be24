//! Breit-Wigner amplitudes, prepared-state energy wavefunctions, and the
//! equivalence of real-axis and complex-basis spectral expansions.
//!
//! # Resonance amplitudes
//!
//! A resonance with energy `E_R` and width `Gamma` corresponds to the
//! complex energy `z_R = E_R - i*Gamma/2`.  Its energy amplitude is the
//! Breit-Wigner form
//!
//! ```text
//! a(E) = i*sqrt(Gamma/2pi) / (E - z_R),
//! ```
//!
//! whose modulus squared on the real axis is the Lorentzian density
//! `(Gamma/2pi) / ((E - E_R)^2 + Gamma^2/4)` with unit full-line mass.
//!
//! # Energy wavefunctions
//!
//! [`EnergyWavefunction`] represents a prepared state's energy amplitude as
//! a rational function: a finite list of simple poles with residues, scaled
//! so the density integrates to one over the chosen support.  State
//! preparation amplitudes keep all poles off the physical half-line
//! `[0, inf)`; the expansion operations additionally require every pole in
//! the upper half plane so contours may close downward.
//!
//! # Dual reconstruction
//!
//! For a rational S-matrix model, [`dirac_reconstruct`] evaluates a narrow
//! Lorentzian window of the product `phi * S` by direct half-line
//! quadrature, while [`complex_basis_reconstruct`] evaluates the same
//! integral by closing the contour in the lower half plane: a sum of
//! resonance-pole residues plus a background integral along the negative
//! real axis.  Cauchy's theorem makes the two answers identical in exact
//! arithmetic; comparing them end-to-end is a stringent test of the
//! quadrature, residue, and windowing machinery.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::energy::ComplexEnergy;
use crate::error::{Result, ToolkitError};
use crate::quad::{
    build_quadrature, integrate, integrate_to_convergence, residue_on_circle, QuadKind,
    SELF_CONVERGENCE_RTOL,
};
use crate::scattering::{rational_s2, SMatrixModel};

/// Relative half-width of the sampling window used by the expansion
/// operations: the window centered at grid point `E'` has `eta = 1e-7 * E'`.
pub const WINDOW_ETA_REL: f64 = 1e-7;

/// Resonance energy and width `(E_R, Gamma)`, the real data behind the
/// complex pole `z_R = E_R - i*Gamma/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceParameters {
    #[serde(rename = "er")]
    e_r: f64,
    gamma: f64,
}

impl ResonanceParameters {
    /// Creates resonance parameters; requires `e_r > 0` (resonance above
    /// threshold) and `gamma > 0` (strictly decaying).
    pub fn new(e_r: f64, gamma: f64) -> Result<Self> {
        if !e_r.is_finite() || !(e_r > 0.0) {
            return Err(ToolkitError::invalid_model(
                "resonance energy must be positive and finite",
            )
            .with("e_r", e_r));
        }
        if !gamma.is_finite() || !(gamma > 0.0) {
            return Err(
                ToolkitError::invalid_model("resonance width must be positive and finite")
                    .with("gamma", gamma),
            );
        }
        Ok(ResonanceParameters { e_r, gamma })
    }

    /// Resonance energy `E_R`.
    pub fn e_r(&self) -> f64 {
        self.e_r
    }

    /// Width `Gamma`.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// The decaying-state pole `z_R = E_R - i*Gamma/2` (lower half plane).
    pub fn pole(&self) -> Complex64 {
        Complex64::new(self.e_r, -0.5 * self.gamma)
    }

    /// The mirrored pole `E_R + i*Gamma/2` of the growing counterpart.
    pub fn conjugate_pole(&self) -> Complex64 {
        Complex64::new(self.e_r, 0.5 * self.gamma)
    }

    /// Validates a deserialized value (serde bypasses `new`).
    pub fn validated(self) -> Result<Self> {
        Self::new(self.e_r, self.gamma)
    }
}

/// Breit-Wigner energy amplitude `i*sqrt(Gamma/2pi) / (E - z_R)`.
///
/// Errors with `invalid-model` when evaluated exactly at the pole `z_R`.
pub fn bw_amplitude(e: ComplexEnergy, p: &ResonanceParameters) -> Result<Complex64> {
    let z = e.value() - p.pole();
    if z.norm_sqr() == 0.0 {
        return Err(
            ToolkitError::invalid_model("amplitude evaluated at its pole")
                .with("e_r", p.e_r())
                .with("gamma", p.gamma()),
        );
    }
    let strength = Complex64::new(0.0, (p.gamma() / (2.0 * PI)).sqrt());
    Ok(strength / z)
}

/// Breit-Wigner (Lorentzian) energy density
/// `(Gamma/2pi) / ((E - E_R)^2 + Gamma^2/4)`, the squared modulus of
/// [`bw_amplitude`] on the real axis; integrates to one over the full line.
pub fn bw_density(e: f64, p: &ResonanceParameters) -> f64 {
    let d = e - p.e_r();
    (p.gamma() / (2.0 * PI)) / (d * d + 0.25 * p.gamma() * p.gamma())
}

/// Normalization support of an energy wavefunction.
///
/// Physical spectra are bounded below, so the default preparation support
/// is the half-line `[0, inf)`.  The full-line variant exists for the
/// idealized contrast case in which the Breit-Wigner density keeps its
/// entire mass and the survival probability is exactly exponential.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    /// `(-inf, inf)`: the idealized unbounded spectrum.
    FullLine,
    /// `[0, inf)`: the physical semibounded spectrum.
    SemiBounded,
}

/// A prepared state's energy amplitude: a rational function given by simple
/// poles and residues, normalized so its density has unit mass on the
/// chosen support.
///
/// Invariants enforced at construction:
/// - at least one pole, none on the closed half-line `[0, inf)` (the
///   amplitude must be finite on the physical spectrum); full-line
///   wavefunctions additionally keep poles off the entire real axis;
/// - the raw density has positive finite mass on the support (the zero
///   function is rejected);
/// - after scaling, `integral of |phi|^2` over the support equals one to
///   quadrature accuracy (checkable via [`EnergyWavefunction::norm_check`]).
#[derive(Debug, Clone)]
pub struct EnergyWavefunction {
    poles: Vec<(Complex64, Complex64)>,
    norm_integral: f64,
    normalization: f64,
    support: Support,
    description: String,
}

impl EnergyWavefunction {
    /// Builds and normalizes a wavefunction from `(pole, residue)` pairs.
    pub fn new(
        poles: Vec<(ComplexEnergy, Complex64)>,
        support: Support,
        description: impl Into<String>,
    ) -> Result<Self> {
        if poles.is_empty() {
            return Err(ToolkitError::invalid_model(
                "energy wavefunction needs at least one pole",
            ));
        }
        let mut parsed = Vec::with_capacity(poles.len());
        for (loc, res) in &poles {
            let p = loc.value();
            if !res.re.is_finite() || !res.im.is_finite() {
                return Err(
                    ToolkitError::invalid_model("pole residue must be finite").with("pole", loc)
                );
            }
            let on_half_line = p.im == 0.0 && p.re >= 0.0;
            if on_half_line {
                return Err(ToolkitError::invalid_model(
                    "wavefunction pole lies on the physical half-line [0, inf)",
                )
                .with("pole", loc));
            }
            if support == Support::FullLine && p.im == 0.0 {
                return Err(ToolkitError::invalid_model(
                    "full-line wavefunction pole lies on the real axis",
                )
                .with("pole", loc));
            }
            parsed.push((p, *res));
        }
        let norm_integral = match support {
            Support::FullLine => full_line_density_mass(&parsed)?,
            Support::SemiBounded => half_line_density_mass(&parsed)?,
        };
        if !norm_integral.is_finite() || norm_integral <= 0.0 {
            return Err(ToolkitError::invalid_model(
                "wavefunction density has no positive mass on the support",
            )
            .with("mass", norm_integral));
        }
        Ok(EnergyWavefunction {
            poles: parsed,
            norm_integral,
            normalization: norm_integral.sqrt().recip(),
            support,
            description: description.into(),
        })
    }

    /// The Breit-Wigner state for resonance `p`: a single pole at
    /// `E_R + i*Gamma/2` (upper half plane, so expansion contours close
    /// below) with residue `i*sqrt(Gamma/2pi)`, giving the Lorentzian
    /// density on the real axis.
    pub fn breit_wigner(p: &ResonanceParameters, support: Support) -> Result<Self> {
        let strength = Complex64::new(0.0, (p.gamma() / (2.0 * PI)).sqrt());
        Self::new(
            vec![(ComplexEnergy::from_c64(p.conjugate_pole())?, strength)],
            support,
            format!("breit-wigner e_r={} gamma={}", p.e_r(), p.gamma()),
        )
    }

    /// Pole/residue pairs (locations first).
    pub fn poles(&self) -> &[(Complex64, Complex64)] {
        &self.poles
    }

    /// The positive scale applied to the raw pole sum.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// The density mass of the *raw* pole sum on the support
    /// (`normalization = 1/sqrt(mass)`).
    pub fn raw_mass(&self) -> f64 {
        self.norm_integral
    }

    /// The support this wavefunction is normalized over.
    pub fn support(&self) -> Support {
        self.support
    }

    /// Human-readable description used in CLI provenance headers.
    pub fn description(&self) -> &str {
        &self.description
    }

    /// Evaluates the normalized amplitude at a complex energy.  The value
    /// is infinite at a pole; quadrature layers reject non-finite samples.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.normalization * eval_pole_sum(&self.poles, z)
    }

    /// Evaluates the normalized amplitude at a real energy.
    pub fn evaluate_real(&self, e: f64) -> Complex64 {
        self.evaluate(Complex64::new(e, 0.0))
    }

    /// The reflected amplitude `phi*(z) = sum conj(r_k) / (z - conj(p_k))`,
    /// which agrees with `conj(phi(E))` for real `E` and continues it off
    /// the axis.
    pub fn evaluate_reflected(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(p, r) in &self.poles {
            acc += r.conj() / (z - p.conj());
        }
        self.normalization * acc
    }

    /// Scale of the dominant spectral features (median pole magnitude),
    /// used to center semi-infinite quadrature rules.
    pub fn feature_scale(&self) -> f64 {
        feature_scale(&self.poles)
    }

    /// True when every pole is strictly in the upper half plane (the class
    /// admitted by the expansion operations).
    pub fn upper_half_plane(&self) -> bool {
        self.poles.iter().all(|(p, _)| p.im > 0.0)
    }

    /// Recomputes the density mass over the support by quadrature at the
    /// given order; equals 1 within quadrature tolerance for any
    /// successfully constructed wavefunction.
    pub fn norm_check(&self, order: usize) -> Result<f64> {
        let scale = self.feature_scale();
        let half = |sign: f64| {
            let rule = build_quadrature(QuadKind::SemiInfiniteMapped { start: 0.0, scale }, order)?;
            integrate(&rule, |e| {
                Complex64::new(self.evaluate_real(sign * e).norm_sqr(), 0.0)
            })
            .map(|v| v.re)
        };
        match self.support {
            Support::SemiBounded => half(1.0),
            Support::FullLine => Ok(half(1.0)? + half(-1.0)?),
        }
    }
}

fn eval_pole_sum(poles: &[(Complex64, Complex64)], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &(p, r) in poles {
        acc += r / (z - p);
    }
    acc
}

fn feature_scale(poles: &[(Complex64, Complex64)]) -> f64 {
    let mut mags: Vec<f64> = poles.iter().map(|(p, _)| p.norm()).collect();
    mags.sort_by(|a, b| a.partial_cmp(b).expect("finite pole magnitudes"));
    mags[mags.len() / 2].max(1e-6)
}

/// Full-line mass of the density by residue closure in the upper half
/// plane: with `phi = sum r_j/(E - p_j)` and its reflection `phi*`, the
/// integrand `phi * phi*` decays like `1/E^2` and its upper-half-plane
/// poles are the `p_j` with `im > 0` plus the `conj(p_k)` with
/// `im p_k < 0`.  Exact for rational amplitudes, so full-line-normalized
/// states carry no quadrature error in their normalization.
fn full_line_density_mass(poles: &[(Complex64, Complex64)]) -> Result<f64> {
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let mut acc = Complex64::new(0.0, 0.0);
    for &(p, r) in poles {
        if p.im > 0.0 {
            let mut reflected = Complex64::new(0.0, 0.0);
            for &(q, s) in poles {
                reflected += s.conj() / (p - q.conj());
            }
            acc += r * reflected;
        } else {
            let at = p.conj();
            let mut direct = Complex64::new(0.0, 0.0);
            for &(q, s) in poles {
                direct += s / (at - q);
            }
            acc += r.conj() * direct;
        }
    }
    let mass = two_pi_i * acc;
    if mass.im.abs() > 1e-10 * mass.re.abs().max(1.0) {
        return Err(ToolkitError::invariant_violation(
            "full-line density mass has a non-negligible imaginary part",
        )
        .with("re", mass.re)
        .with("im", mass.im));
    }
    Ok(mass.re)
}

/// Half-line mass of the density by exact partial fractions: each cross
/// term integrates to
/// `int_0^inf dE / ((E-a)(E-b)) = (Ln(-b) - Ln(-a)) / (a - b)`
/// with principal logarithms, which never touch their branch cut because
/// wavefunction poles are barred from `[0, inf)` (so `-a`, `-b` stay off
/// the negative real axis).  The construction therefore carries no
/// quadrature error regardless of how disparate the pole scales are.
fn half_line_density_mass(poles: &[(Complex64, Complex64)]) -> Result<f64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for &(p_j, r_j) in poles {
        for &(p_k, r_k) in poles {
            let a = p_j;
            let b = p_k.conj();
            let h = b - a;
            let term = if h.norm() < 1e-6 * a.norm() {
                // Confluent (or nearly confluent) poles: series of
                // Ln(1 + h/a)/(-h) around the double-pole limit -1/a.
                let x = h / a;
                -(Complex64::new(1.0, 0.0) - 0.5 * x + x * x / 3.0) / a
            } else {
                ((-b).ln() - (-a).ln()) / (a - b)
            };
            acc += r_j * r_k.conj() * term;
        }
    }
    if acc.im.abs() > 1e-10 * acc.re.abs().max(1.0) {
        return Err(ToolkitError::invariant_violation(
            "half-line density mass has a non-negligible imaginary part",
        )
        .with("re", acc.re)
        .with("im", acc.im));
    }
    Ok(acc.re)
}

/// Outcome of the complex-basis expansion over a real energy grid.
#[derive(Debug, Clone)]
pub struct ExpansionResult {
    grid: Vec<f64>,
    pole_locations: Vec<Complex64>,
    pole_coefficients: Vec<Complex64>,
    background: Vec<(f64, Complex64)>,
    reconstruction: Vec<Complex64>,
}

impl ExpansionResult {
    /// The real energy grid the reconstruction was evaluated on.
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// Resonance pole locations, aligned with [`Self::pole_coefficients`].
    pub fn pole_locations(&self) -> &[Complex64] {
        &self.pole_locations
    }

    /// One coefficient per resonance: `2*pi*i` times the residue of
    /// `phi(E) * S(E)` at the pole.  The sampling window evaluated at the
    /// pole multiplies this coefficient during reconstruction, so the
    /// stored value is grid-independent.
    pub fn pole_coefficients(&self) -> &[Complex64] {
        &self.pole_coefficients
    }

    /// Samples `(s, phi(-s) * S(-s))` of the continuation integrand along
    /// the negative-axis contour parameterized by `s >= 0`.
    pub fn background(&self) -> &[(f64, Complex64)] {
        &self.background
    }

    /// The reconstructed amplitude at each grid point.
    pub fn reconstruction(&self) -> &[Complex64] {
        &self.reconstruction
    }
}

/// Knobs for the complex-basis route; the defaults match the Dirac route's
/// accuracy.  Two different residue parameterizations (radius scale and
/// sample count) must reproduce the same pole coefficients, which the test
/// suite checks.
#[derive(Debug, Clone, Copy)]
pub struct ExpansionOptions {
    /// Quadrature panel order for window and background integrals.
    pub order: usize,
    /// Sample count for residue circles.
    pub residue_points: usize,
    /// Multiplier on the default residue circle radius
    /// `min(Gamma/10, nearest-neighbor distance / 4)`.
    pub residue_radius_scale: f64,
}

impl Default for ExpansionOptions {
    fn default() -> Self {
        ExpansionOptions {
            order: 64,
            residue_points: 64,
            residue_radius_scale: 1.0,
        }
    }
}

struct ExpansionSetup<'a> {
    phi: &'a EnergyWavefunction,
    s_poles: Vec<Complex64>,
}

impl<'a> ExpansionSetup<'a> {
    fn prepare(phi: &'a EnergyWavefunction, model: &SMatrixModel, grid: &[f64]) -> Result<Self> {
        let s_poles = model.rational_poles().ok_or_else(|| {
            ToolkitError::invalid_model(
                "expansion operations require a rational-constructed S-matrix model",
            )
        })?;
        if !phi.upper_half_plane() {
            return Err(ToolkitError::invalid_model(
                "contour deformation requires every wavefunction pole in the upper half plane",
            ));
        }
        if phi.support() != Support::SemiBounded {
            return Err(ToolkitError::invalid_model(
                "expansion wavefunctions must be normalized on the half-line [0, inf)",
            ));
        }
        if grid.is_empty() {
            return Err(ToolkitError::invalid_model("expansion grid is empty"));
        }
        for &e in grid {
            if !e.is_finite() || e <= 0.0 {
                return Err(ToolkitError::invalid_model(
                    "expansion grid points must be positive finite energies",
                )
                .with("grid_point", e));
            }
        }
        Ok(ExpansionSetup { phi, s_poles })
    }

    fn s2(&self, z: Complex64) -> Complex64 {
        rational_s2(&self.s_poles, z)
    }

    /// Window parameters at a grid point: `(eta, mass-normalizing c, zeta)`.
    fn window(&self, e_prime: f64) -> (f64, f64, Complex64) {
        let eta = WINDOW_ETA_REL * e_prime;
        let mass = 0.5 + (e_prime / eta).atan() / PI;
        (eta, mass.recip(), Complex64::new(e_prime, -eta))
    }

    /// Denominator shared by both routes; rejects grid points that land on
    /// a resonance pole.
    fn window_denominator(&self, e_prime: f64) -> Result<(f64, f64, Complex64, Complex64)> {
        let (eta, c, zeta) = self.window(e_prime);
        let s2_at = self.s2(zeta);
        if !s2_at.re.is_finite() || !s2_at.im.is_finite() || s2_at.norm_sqr() == 0.0 {
            return Err(ToolkitError::invalid_model(
                "grid point coincides with a resonance pole of the model",
            )
            .with("grid_point", e_prime));
        }
        Ok((eta, c, zeta, s2_at))
    }
}

/// Reconstructs the wavefunction on a real grid by direct half-line
/// quadrature: at each grid point `E'` the product `phi(E) * S(E)` is
/// integrated against a narrow Lorentzian window (half-width
/// `eta = 1e-7 * E'`, unit half-line mass) and divided by `S(E' - i*eta)`.
/// Far from every resonance the result equals `phi(E')` up to `O(eta)`.
///
/// Errors: `invalid-model` for non-rational models, wavefunction poles
/// outside the upper half plane, or a non-positive grid; `non-convergence`
/// if the windowed quadrature fails its order-doubling check.
pub fn dirac_reconstruct(
    phi: &EnergyWavefunction,
    model: &SMatrixModel,
    grid: &[f64],
    order: usize,
) -> Result<Vec<Complex64>> {
    let setup = ExpansionSetup::prepare(phi, model, grid)?;
    let mut out = Vec::with_capacity(grid.len());
    for &e_prime in grid {
        let (eta, c, _zeta, s2_at) = setup.window_denominator(e_prime)?;
        let windowed = integrate_to_convergence(
            QuadKind::SemiInfiniteMapped {
                start: 0.0,
                scale: e_prime,
            },
            order,
            SELF_CONVERGENCE_RTOL,
            |e| {
                let d = e - e_prime;
                let w = c * (eta / PI) / (d * d + eta * eta);
                setup.phi.evaluate_real(e) * setup.s2(Complex64::new(e, 0.0)) * w
            },
        )?;
        out.push(windowed / (c * s2_at));
    }
    Ok(out)
}

/// Reconstructs the wavefunction by deforming the half-line integral of
/// [`dirac_reconstruct`] into the lower half plane: the window pole
/// contributes `c * phi(zeta) * S(zeta)` at `zeta = E' - i*eta`, each
/// resonance pole of the model contributes its coefficient
/// `2*pi*i * Res[phi*S]` times the window evaluated at the pole, and the
/// remainder is the background integral along the negative real axis.
/// Cauchy's theorem makes the result equal to the Dirac route in exact
/// arithmetic.
pub fn complex_basis_reconstruct(
    phi: &EnergyWavefunction,
    model: &SMatrixModel,
    grid: &[f64],
    order: usize,
) -> Result<ExpansionResult> {
    complex_basis_reconstruct_with(
        phi,
        model,
        grid,
        ExpansionOptions {
            order,
            ..ExpansionOptions::default()
        },
    )
}

/// [`complex_basis_reconstruct`] with explicit contour parameterization
/// knobs (used to verify that pole coefficients do not depend on the
/// residue-circle parameterization).
pub fn complex_basis_reconstruct_with(
    phi: &EnergyWavefunction,
    model: &SMatrixModel,
    grid: &[f64],
    options: ExpansionOptions,
) -> Result<ExpansionResult> {
    let setup = ExpansionSetup::prepare(phi, model, grid)?;
    let poles = setup.s_poles.clone();

    // Grid-independent pole coefficients 2*pi*i * Res[phi * S; z_i].  The
    // S-matrix residue is extracted by trapezoid quadrature on a circle
    // small enough to exclude the real axis and every other pole.
    let mut coefficients = Vec::with_capacity(poles.len());
    for (i, &z_i) in poles.iter().enumerate() {
        let gamma_i = -2.0 * z_i.im;
        let nearest = poles
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, &z_j)| (z_i - z_j).norm())
            .fold(f64::INFINITY, f64::min);
        let radius = (gamma_i / 10.0).min(nearest / 4.0) * options.residue_radius_scale;
        let rho = residue_on_circle(|z| setup.s2(z), z_i, radius, options.residue_points)?;
        coefficients.push(Complex64::new(0.0, 2.0 * PI) * phi.evaluate(z_i) * rho);
    }

    // Representative samples of the continuation integrand phi(-s)*S(-s)
    // along the negative-axis contour (window-independent part).
    let s_max = 4.0 * grid.iter().cloned().fold(0.0_f64, f64::max);
    let contour_rule = build_quadrature(
        QuadKind::ContourParameterized { t0: 0.0, t1: s_max },
        options.order.min(64),
    )?;
    let background: Vec<(f64, Complex64)> = contour_rule
        .nodes()
        .iter()
        .map(|&s| {
            let z = Complex64::new(-s, 0.0);
            (s, phi.evaluate(z) * setup.s2(z))
        })
        .collect();

    let mut reconstruction = Vec::with_capacity(grid.len());
    for &e_prime in grid {
        let (eta, c, zeta, s2_at) = setup.window_denominator(e_prime)?;
        let window_at = |z: Complex64| {
            let d = z - Complex64::new(e_prime, 0.0);
            c * (eta / PI) / (d * d + eta * eta)
        };

        // Window-pole term (the part that survives far from resonances).
        let window_term = c * phi.evaluate(zeta) * s2_at;

        // Resonance terms: coefficient times the window at the pole.
        let mut pole_term = Complex64::new(0.0, 0.0);
        for (&z_i, &kappa) in poles.iter().zip(&coefficients) {
            pole_term += kappa * window_at(z_i);
        }

        // Background: minus the windowed integrand along the negative axis.
        let background_term = -integrate_to_convergence(
            QuadKind::SemiInfiniteMapped {
                start: 0.0,
                scale: e_prime,
            },
            options.order,
            SELF_CONVERGENCE_RTOL,
            |s| {
                let z = Complex64::new(-s, 0.0);
                phi.evaluate(z) * setup.s2(z) * window_at(z)
            },
        )?;

        reconstruction.push((window_term - pole_term + background_term) / (c * s2_at));
    }

    Ok(ExpansionResult {
        grid: grid.to_vec(),
        pole_locations: poles,
        pole_coefficients: coefficients,
        background,
        reconstruction,
    })
}
