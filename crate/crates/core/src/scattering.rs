//! Two-sheet S-matrix models, resonance pole search, and scattering
//! observables for a single partial wave.
//!
//! # Momentum and energy sheets
//!
//! Energy is the square of momentum, so the energy surface is two-sheeted
//! with a branch cut along the physical spectrum `[0, inf)`.  With
//! `theta = arg E` taken in `[0, 2pi)`,
//!
//! ```text
//! k_I(E)  = |E|^{1/2} e^{i theta/2}     (Im k >= 0, physical sheet)
//! k_II(E) = -k_I(E)                      (Im k <= 0, unphysical sheet)
//! ```
//!
//! Resonance poles live on the second sheet in the lower half plane at
//! `z_R = E_R - i*Gamma/2`; their mirror images sit at the complex
//! conjugate locations.
//!
//! # Models
//!
//! * `rational` — the S-matrix is prescribed directly as a finite Blaschke
//!   product over resonance poles: on the second sheet
//!   `S(E) = prod (E - conj z_i)/(E - z_i)`, and the first sheet carries
//!   the reciprocal.  Unitary on the real axis by construction.
//! * `delta-shell` — a spherical delta-shell potential of strength `g` at
//!   radius `a` in the s-wave.  The Jost function is
//!   `f(k) = 1 + (g/2ik)(e^{2ika} - 1)` and `S(E) = f(-k)/f(k)` with `k`
//!   taken on the requested sheet.  Resonance poles are zeros of
//!   `f(k_II(E))`.
//!
//! # Pole search
//!
//! [`find_poles`] counts poles inside a rectangular region by the argument
//! principle (adaptive boundary quadrature of the logarithmic derivative of
//! an analytic counting function), isolates them by quadtree subdivision,
//! polishes each with Newton's method, and extracts residues by quadrature
//! on a small circle.  The search never assumes where poles are; the same
//! code finds lower-half-plane resonances and their upper-half-plane
//! mirrors.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::energy::ComplexEnergy;
use crate::error::{Result, ToolkitError};
use crate::quad::{build_quadrature, residue_on_circle, QuadKind};
use crate::spectral::ResonanceParameters;

/// Which sheet of the two-sheeted energy surface to evaluate on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sheet {
    /// Physical sheet (`Im k >= 0`): bound states, no resonance poles.
    First,
    /// Unphysical sheet (`Im k <= 0`): carries the resonance poles.
    Second,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum ModelKind {
    Rational { poles: Vec<ComplexEnergy> },
    DeltaShell { g: f64, a: f64 },
}

/// An S-matrix model: either a rational Blaschke product over prescribed
/// resonance poles or a solvable delta-shell potential.
///
/// Serializes as tagged JSON, e.g.
/// `{"kind":"rational","poles":[{"re":2.0,"im":-0.1}]}` or
/// `{"kind":"delta-shell","g":20.0,"a":1.0}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SMatrixModel {
    kind: ModelKind,
}

impl SMatrixModel {
    /// A rational model with the given second-sheet poles, each of which
    /// must lie strictly in the lower half plane.
    pub fn rational(poles: Vec<ComplexEnergy>) -> Result<Self> {
        let model = SMatrixModel {
            kind: ModelKind::Rational { poles },
        };
        model.validate()?;
        Ok(model)
    }

    /// A delta-shell potential of strength `g > 0` at radius `a > 0`.
    pub fn delta_shell(g: f64, a: f64) -> Result<Self> {
        let model = SMatrixModel {
            kind: ModelKind::DeltaShell { g, a },
        };
        model.validate()?;
        Ok(model)
    }

    /// Parses and validates a model from its JSON form.
    pub fn from_json(text: &str) -> Result<Self> {
        let model: SMatrixModel = serde_json::from_str(text).map_err(|e| {
            ToolkitError::invalid_model("malformed S-matrix model JSON").with("parse", e)
        })?;
        model.validate()?;
        Ok(model)
    }

    /// The canonical JSON form (used verbatim in CLI provenance headers).
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serializes")
    }

    /// Checks the model invariants; required after any deserialization
    /// path that bypasses the constructors.
    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            ModelKind::Rational { poles } => {
                for p in poles {
                    if !(p.im() < 0.0) {
                        return Err(ToolkitError::invalid_model(
                            "rational model poles must lie strictly in the lower half plane",
                        )
                        .with("pole", p));
                    }
                }
                Ok(())
            }
            ModelKind::DeltaShell { g, a } => {
                if !g.is_finite() || !(*g > 0.0) {
                    return Err(ToolkitError::invalid_model(
                        "delta-shell strength must be positive and finite",
                    )
                    .with("g", g));
                }
                if !a.is_finite() || !(*a > 0.0) {
                    return Err(ToolkitError::invalid_model(
                        "delta-shell radius must be positive and finite",
                    )
                    .with("a", a));
                }
                Ok(())
            }
        }
    }

    /// The prescribed second-sheet poles of a rational model, or `None`
    /// for potential models whose poles must be searched for.
    pub fn rational_poles(&self) -> Option<Vec<Complex64>> {
        match &self.kind {
            ModelKind::Rational { poles } => Some(poles.iter().map(|p| p.value()).collect()),
            ModelKind::DeltaShell { .. } => None,
        }
    }

    /// True for models defined by a spatial potential (currently only the
    /// delta shell), for which [`scattering_state`] is meaningful.
    pub fn has_potential(&self) -> bool {
        matches!(self.kind, ModelKind::DeltaShell { .. })
    }
}

/// The sheet-resolved momentum `k(E)`: principal modulus with half the
/// argument taken in `[0, pi)` on the first sheet and its negative on the
/// second.  At `E = 0` both sheets return `0` (the branch point).
pub fn momentum(e: ComplexEnergy, sheet: Sheet) -> Complex64 {
    let z = e.value();
    if z.norm_sqr() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let mut theta = z.arg();
    if theta < 0.0 {
        theta += 2.0 * PI;
    }
    let k = Complex64::from_polar(z.norm().sqrt(), 0.5 * theta);
    match sheet {
        Sheet::First => k,
        Sheet::Second => -k,
    }
}

/// Jost function of the s-wave delta shell,
/// `f(k) = 1 + (g/2ik)(e^{2ika} - 1)`.
fn jost(g: f64, a: f64, k: Complex64) -> Complex64 {
    let expo = (Complex64::new(0.0, 2.0 * a) * k).exp();
    Complex64::new(1.0, 0.0) + g / (Complex64::new(0.0, 2.0) * k) * (expo - 1.0)
}

/// Derivative `f'(k)` of the delta-shell Jost function.
fn jost_derivative(g: f64, a: f64, k: Complex64) -> Complex64 {
    let expo = (Complex64::new(0.0, 2.0 * a) * k).exp();
    let num = Complex64::new(0.0, 2.0 * a) * k * expo - (expo - 1.0);
    g / (Complex64::new(0.0, 2.0) * k * k) * num
}

/// Second-sheet S-matrix of a rational model,
/// `prod (z - conj z_i)/(z - z_i)`; shared with the spectral expansion so
/// both consumers evaluate the identical function.
pub(crate) fn rational_s2(poles: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for &p in poles {
        acc *= (z - p.conj()) / (z - p);
    }
    acc
}

/// Evaluates the S-matrix at a complex energy on the requested sheet.
///
/// Errors with `invalid-model` at a pole of the requested sheet function
/// and, for the delta shell, at the branch point `E = 0` where the
/// momentum vanishes.
pub fn s_matrix(model: &SMatrixModel, e: ComplexEnergy, sheet: Sheet) -> Result<Complex64> {
    let z = e.value();
    match &model.kind {
        ModelKind::Rational { poles } => {
            let mut acc = Complex64::new(1.0, 0.0);
            for p in poles {
                let pole = p.value();
                let (num, den) = match sheet {
                    Sheet::Second => (z - pole.conj(), z - pole),
                    Sheet::First => (z - pole, z - pole.conj()),
                };
                if den.norm_sqr() == 0.0 {
                    return Err(ToolkitError::invalid_model(
                        "S-matrix evaluated at one of its poles",
                    )
                    .with("pole", p));
                }
                acc *= num / den;
            }
            Ok(acc)
        }
        ModelKind::DeltaShell { g, a } => {
            let k = momentum(e, sheet);
            if k.norm_sqr() == 0.0 {
                return Err(ToolkitError::invalid_model(
                    "delta-shell S-matrix has a branch point at E = 0",
                ));
            }
            let den = jost(*g, *a, k);
            if den.norm_sqr() == 0.0 {
                return Err(
                    ToolkitError::invalid_model("S-matrix evaluated at one of its poles")
                        .with("e", e),
                );
            }
            let value = jost(*g, *a, -k) / den;
            if !value.re.is_finite() || !value.im.is_finite() {
                return Err(ToolkitError::invariant_violation(
                    "S-matrix evaluation produced a non-finite value",
                )
                .with("e", e));
            }
            Ok(value)
        }
    }
}

/// The s-wave phase shift `delta(E) = arg S_I(E) / 2` at a physical
/// scattering energy `E > 0`, reduced to the principal branch
/// `(-pi/2, pi/2]`.
pub fn phase_shift(model: &SMatrixModel, e: f64) -> Result<f64> {
    if !e.is_finite() || !(e > 0.0) {
        return Err(ToolkitError::invalid_model(
            "phase shift requires a positive scattering energy",
        )
        .with("e", e));
    }
    let s = s_matrix(model, ComplexEnergy::real(e)?, Sheet::First)?;
    Ok(0.5 * s.arg())
}

/// The phase shift along an increasing grid of positive energies,
/// continuously unwrapped: the first value is the principal branch and
/// successive values accumulate the argument change of the S-matrix, so a
/// resonance shows up as a smooth rise of about `pi` instead of a branch
/// jump.
pub fn phase_shift_curve(model: &SMatrixModel, grid: &[f64]) -> Result<Vec<f64>> {
    if grid.is_empty() {
        return Err(ToolkitError::invalid_model("phase-shift grid is empty"));
    }
    let mut previous: Option<(Complex64, f64)> = None;
    let mut out = Vec::with_capacity(grid.len());
    for &e in grid {
        if !e.is_finite() || !(e > 0.0) {
            return Err(
                ToolkitError::invalid_model("phase-shift grid energies must be positive")
                    .with("e", e),
            );
        }
        if let Some((_, last_e)) = previous {
            if e <= last_e {
                return Err(ToolkitError::invalid_model(
                    "phase-shift grid must be strictly increasing",
                )
                .with("e", e));
            }
        }
        let s = s_matrix(model, ComplexEnergy::real(e)?, Sheet::First)?;
        let delta = match previous {
            None => 0.5 * s.arg(),
            Some((s_prev, _)) => out.last().unwrap() + 0.5 * (s / s_prev).arg(),
        };
        out.push(delta);
        previous = Some((s, e));
    }
    Ok(out)
}

/// The s-wave partial cross section `(4 pi / k^2) sin^2 delta` at `E > 0`.
pub fn partial_cross_section(model: &SMatrixModel, e: f64) -> Result<f64> {
    let delta = phase_shift(model, e)?;
    Ok(4.0 * PI / e * delta.sin().powi(2))
}

/// A rectangular pole-search window in the complex energy plane, bounded
/// away from the real axis (the argument-principle boundary integral must
/// not touch the unitarity cut).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleSearchRegion {
    e_min: f64,
    e_max: f64,
    im_min: f64,
    im_max: f64,
}

impl PoleSearchRegion {
    /// Creates a region `[e_min, e_max] x [im_min, im_max]`; the imaginary
    /// range must be strictly ordered and entirely on one side of the real
    /// axis.
    pub fn new(e_min: f64, e_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let all_finite =
            e_min.is_finite() && e_max.is_finite() && im_min.is_finite() && im_max.is_finite();
        if !all_finite || !(e_min < e_max) || !(im_min < im_max) {
            return Err(ToolkitError::invalid_model(
                "pole-search region bounds must be finite and ordered",
            )
            .with("e_min", e_min)
            .with("e_max", e_max)
            .with("im_min", im_min)
            .with("im_max", im_max));
        }
        if !(im_max < 0.0 || im_min > 0.0) {
            return Err(ToolkitError::invalid_model(
                "pole-search region must not touch the real axis",
            )
            .with("im_min", im_min)
            .with("im_max", im_max));
        }
        Ok(PoleSearchRegion {
            e_min,
            e_max,
            im_min,
            im_max,
        })
    }

    /// Convenience lower-half-plane window `[e_min, e_max] x [-depth, -margin]`.
    pub fn lower_half(e_min: f64, e_max: f64, depth: f64, margin: f64) -> Result<Self> {
        Self::new(e_min, e_max, -depth, -margin)
    }

    /// The reflection of this region across the real axis.
    pub fn mirrored(&self) -> Self {
        PoleSearchRegion {
            e_min: self.e_min,
            e_max: self.e_max,
            im_min: -self.im_max,
            im_max: -self.im_min,
        }
    }

    /// Lower real bound.
    pub fn e_min(&self) -> f64 {
        self.e_min
    }

    /// Upper real bound.
    pub fn e_max(&self) -> f64 {
        self.e_max
    }

    /// Lower imaginary bound.
    pub fn im_min(&self) -> f64 {
        self.im_min
    }

    /// Upper imaginary bound.
    pub fn im_max(&self) -> f64 {
        self.im_max
    }

    /// Corners in counterclockwise order starting at the lower-left.
    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.e_min, self.im_min),
            Complex64::new(self.e_max, self.im_min),
            Complex64::new(self.e_max, self.im_max),
            Complex64::new(self.e_min, self.im_max),
        ]
    }

    /// Splits into four subrectangles.  The split point sits slightly off
    /// center so that subdivision lines almost never pass through a pole
    /// that happens to sit at a round-number location.
    fn quadrants(&self) -> [PoleSearchRegion; 4] {
        const SPLIT: f64 = 0.513_71;
        let em = self.e_min + SPLIT * (self.e_max - self.e_min);
        let im = self.im_min + SPLIT * (self.im_max - self.im_min);
        let mk = |e0: f64, e1: f64, i0: f64, i1: f64| PoleSearchRegion {
            e_min: e0,
            e_max: e1,
            im_min: i0,
            im_max: i1,
        };
        [
            mk(self.e_min, em, self.im_min, im),
            mk(em, self.e_max, self.im_min, im),
            mk(self.e_min, em, im, self.im_max),
            mk(em, self.e_max, im, self.im_max),
        ]
    }

    fn contains(&self, z: Complex64, margin: f64) -> bool {
        let de = margin * (self.e_max - self.e_min);
        let di = margin * (self.im_max - self.im_min);
        z.re >= self.e_min - de
            && z.re <= self.e_max + de
            && z.im >= self.im_min - di
            && z.im <= self.im_max + di
    }

    fn center(&self) -> Complex64 {
        Complex64::new(
            0.5 * (self.e_min + self.e_max),
            0.5 * (self.im_min + self.im_max),
        )
    }
}

/// A located S-matrix pole: its complex energy and the residue of the
/// sheet function that carries it (second sheet for resonance poles, first
/// sheet for the upper-half-plane mirrors of a rational model).
#[derive(Debug, Clone, Copy)]
pub struct ResonancePole {
    z_r: Complex64,
    residue: Complex64,
}

impl ResonancePole {
    /// The pole location in complex energy.
    pub fn z_r(&self) -> Complex64 {
        self.z_r
    }

    /// The residue of the carrying sheet function at the pole.
    pub fn residue(&self) -> Complex64 {
        self.residue
    }

    /// Resonance energy `Re z_r`.
    pub fn e_r(&self) -> f64 {
        self.z_r.re
    }

    /// Width `Gamma = -2 Im z_r`; negative for an upper-half-plane mirror
    /// pole, which describes the time-reversed (growing) companion.
    pub fn gamma(&self) -> f64 {
        -2.0 * self.z_r.im
    }

    /// Interprets the pole as a decaying resonance; fails for mirror poles
    /// (negative width) or poles below threshold.
    pub fn params(&self) -> Result<ResonanceParameters> {
        ResonanceParameters::new(self.e_r(), self.gamma())
    }
}

/// The analytic counting function whose zeros inside a region are the
/// sought poles, together with the machinery the argument principle needs.
enum Counting {
    /// `F = S_I = prod (z - z_i)/(z - conj z_i)`: zeros at the prescribed
    /// lower-half poles, poles of `F` at their mirrors.
    Rational { poles: Vec<Complex64> },
    /// `F = f(k_II(E))`: zeros wherever the second-sheet Jost function
    /// vanishes, in both half planes; `F` itself has no poles off `E = 0`.
    DeltaShell { g: f64, a: f64 },
}

impl Counting {
    fn for_model(model: &SMatrixModel) -> Counting {
        match &model.kind {
            ModelKind::Rational { poles } => Counting::Rational {
                poles: poles.iter().map(|p| p.value()).collect(),
            },
            ModelKind::DeltaShell { g, a } => Counting::DeltaShell { g: *g, a: *a },
        }
    }

    fn value(&self, z: Complex64) -> Complex64 {
        match self {
            Counting::Rational { poles } => {
                let mut acc = Complex64::new(1.0, 0.0);
                for &p in poles {
                    acc *= (z - p) / (z - p.conj());
                }
                acc
            }
            Counting::DeltaShell { g, a } => {
                let k = momentum(ComplexEnergy::from_c64(z).expect("finite"), Sheet::Second);
                jost(*g, *a, k)
            }
        }
    }

    /// `1/F`, used to turn poles of `F` into Newton-findable zeros.
    fn reciprocal(&self, z: Complex64) -> Complex64 {
        match self {
            Counting::Rational { poles } => rational_s2(poles, z),
            Counting::DeltaShell { .. } => self.value(z).finv(),
        }
    }

    /// The logarithmic derivative `F'/F`, assembled analytically so the
    /// boundary quadrature never differentiates numerically.
    fn log_derivative(&self, z: Complex64) -> Complex64 {
        match self {
            Counting::Rational { poles } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for &p in poles {
                    acc += (z - p).finv() - (z - p.conj()).finv();
                }
                acc
            }
            Counting::DeltaShell { g, a } => {
                let k = momentum(ComplexEnergy::from_c64(z).expect("finite"), Sheet::Second);
                jost_derivative(*g, *a, k) / (2.0 * k * jost(*g, *a, k))
            }
        }
    }

    /// Dimensionless residual at a polished root (the original counting
    /// function, or its reciprocal on negative-winding leaves).
    fn residual(&self, z: Complex64, positive_winding: bool) -> f64 {
        if positive_winding {
            self.value(z).norm()
        } else {
            self.reciprocal(z).norm()
        }
    }

    /// The sheet function that actually owns a pole found with the given
    /// winding sign, for residue extraction.
    fn residue_target(&self, positive_winding: bool, z: Complex64) -> Complex64 {
        match self {
            Counting::Rational { poles } => {
                if positive_winding {
                    rational_s2(poles, z)
                } else {
                    // Mirror poles of a rational model belong to the
                    // first-sheet function.
                    rational_s2(poles, z).finv()
                }
            }
            Counting::DeltaShell { g, a } => {
                let e = ComplexEnergy::from_c64(z).expect("finite");
                let k2 = momentum(e, Sheet::Second);
                jost(*g, *a, -k2) / jost(*g, *a, k2)
            }
        }
    }
}

/// Gauss-Legendre panel order for each boundary segment of the winding
/// integral.
const WINDING_PANEL_ORDER: usize = 32;
/// Winding numbers must land within this distance of an integer.
const WINDING_INTEGER_TOL: f64 = 1e-3;
/// Maximum quadtree depth before a pole cluster is declared unresolvable.
const MAX_SUBDIVISION_DEPTH: usize = 12;
/// Newton iterations allowed per root polish.
const MAX_NEWTON_STEPS: usize = 60;
/// Relative step size below which Newton is considered converged.
const NEWTON_STEP_TOL: f64 = 1e-13;
/// Dimensionless residual the counting function must reach at a root.
const NEWTON_RESIDUAL_TOL: f64 = 1e-9;
/// Extra quadtree levels used to shrink a single-pole leaf before Newton,
/// so the seed starts inside the root's basin.
const SEED_REFINE_LEVELS: usize = 3;

struct PanelRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl PanelRule {
    fn base() -> Result<PanelRule> {
        let rule = build_quadrature(
            QuadKind::FiniteInterval { a: -1.0, b: 1.0 },
            WINDING_PANEL_ORDER,
        )?;
        Ok(PanelRule {
            nodes: rule.nodes().to_vec(),
            weights: rule.weights().to_vec(),
        })
    }
}

/// Winding number of the counting function around the region boundary by
/// composite Gauss-Legendre quadrature, doubling the panel count until the
/// result stabilizes on an integer.
fn winding_number(counting: &Counting, region: &PoleSearchRegion, rule: &PanelRule) -> Result<i32> {
    let corners = region.corners();
    let mut panels = 4usize;
    while panels <= 4096 {
        let mut total = Complex64::new(0.0, 0.0);
        let mut finite = true;
        'edges: for i in 0..4 {
            let start = corners[i];
            let end = corners[(i + 1) % 4];
            let step = (end - start) / panels as f64;
            for p in 0..panels {
                let a = start + step * p as f64;
                let half = step * 0.5;
                let mid = a + half;
                for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
                    let z = mid + half * t;
                    let l = counting.log_derivative(z);
                    if !l.re.is_finite() || !l.im.is_finite() {
                        finite = false;
                        break 'edges;
                    }
                    total += w * l * half;
                }
            }
        }
        if finite {
            let w = total / Complex64::new(0.0, 2.0 * PI);
            let rounded = w.re.round();
            if w.im.abs() < WINDING_INTEGER_TOL && (w.re - rounded).abs() < WINDING_INTEGER_TOL {
                return Ok(rounded as i32);
            }
        }
        panels *= 4;
    }
    Err(
        ToolkitError::non_convergence("winding number failed to stabilize on an integer")
            .with("e_min", region.e_min)
            .with("e_max", region.e_max)
            .with("im_min", region.im_min)
            .with("im_max", region.im_max),
    )
}

/// Rejects regions whose boundary passes (nearly) through a zero or pole
/// of the counting function, where the argument principle is ill-posed.
fn check_boundary(counting: &Counting, region: &PoleSearchRegion) -> Result<()> {
    let corners = region.corners();
    for i in 0..4 {
        let start = corners[i];
        let end = corners[(i + 1) % 4];
        for j in 0..=32 {
            let z = start + (end - start) * (j as f64 / 32.0);
            let v = counting.value(z);
            let mag = v.norm();
            if !mag.is_finite() || !(1e-9..=1e9).contains(&mag) {
                return Err(ToolkitError::invalid_model(
                    "counting function is singular on the search-region boundary",
                )
                .with("z_re", z.re)
                .with("z_im", z.im));
            }
        }
    }
    Ok(())
}

fn isolate(
    counting: &Counting,
    region: PoleSearchRegion,
    depth: usize,
    rule: &PanelRule,
    leaves: &mut Vec<(PoleSearchRegion, i32)>,
) -> Result<()> {
    let w = winding_number(counting, &region, rule)?;
    if w == 0 {
        return Ok(());
    }
    if w.abs() == 1 {
        leaves.push((region, w));
        return Ok(());
    }
    if depth >= MAX_SUBDIVISION_DEPTH {
        return Err(ToolkitError::non_convergence(
            "pole cluster could not be isolated by subdivision",
        )
        .with("winding", w)
        .with("depth", depth));
    }
    for child in region.quadrants() {
        isolate(counting, child, depth + 1, rule, leaves)?;
    }
    Ok(())
}

/// Shrinks a winding-one leaf a few more quadtree levels so the Newton
/// seed starts close to the root.  Refinement stops early (harmlessly)
/// when a split line lands too close to the root for its child windings
/// to resolve.
fn refine_leaf(counting: &Counting, leaf: PoleSearchRegion, rule: &PanelRule) -> PoleSearchRegion {
    let mut current = leaf;
    for _ in 0..SEED_REFINE_LEVELS {
        let mut unique: Option<PoleSearchRegion> = None;
        let mut clean = true;
        for child in current.quadrants() {
            match winding_number(counting, &child, rule) {
                Ok(0) => {}
                Ok(w) if w.abs() == 1 => {
                    if unique.is_some() {
                        clean = false;
                        break;
                    }
                    unique = Some(child);
                }
                _ => {
                    clean = false;
                    break;
                }
            }
        }
        match (clean, unique) {
            (true, Some(child)) => current = child,
            _ => break,
        }
    }
    current
}

/// Newton on the bare root polynomial of a rational model.  The Blaschke
/// denominator is dropped deliberately: its poles sit only `Gamma` away
/// from each zero and would wreck the basin, while the polynomial is
/// pole-free (and Newton on it is exact for a single root).
fn newton_polynomial(roots: &[Complex64], leaf: &PoleSearchRegion) -> Result<Complex64> {
    let mut z = leaf.center();
    let cap = Complex64::new(leaf.e_max - leaf.e_min, leaf.im_max - leaf.im_min).norm();
    for _ in 0..MAX_NEWTON_STEPS {
        let mut l = Complex64::new(0.0, 0.0);
        let mut exact_hit = false;
        for &r in roots {
            let d = z - r;
            if d.norm_sqr() == 0.0 {
                exact_hit = true;
                break;
            }
            l += d.finv();
        }
        if exact_hit {
            return Ok(z);
        }
        let mut step = -l.finv();
        if !step.re.is_finite() || !step.im.is_finite() {
            return Err(
                ToolkitError::non_convergence("degenerate Newton step in root polish")
                    .with("z_re", z.re)
                    .with("z_im", z.im),
            );
        }
        let size = step.norm();
        if size > cap {
            step *= cap / size;
        }
        z += step;
        if step.norm() < NEWTON_STEP_TOL * (1.0 + z.norm()) {
            return Ok(z);
        }
    }
    Err(
        ToolkitError::non_convergence("root polish did not reach the step tolerance")
            .with("z_re", z.re)
            .with("z_im", z.im),
    )
}

/// Newton on the delta-shell Jost function in the momentum plane, where
/// `f` is entire: the two conjugate resonance zeros that nearly touch
/// across the energy cut map to momenta a full `2 Re k` apart, so the
/// basins are well separated.  Seeded from the leaf center's second-sheet
/// momentum; returns the energy `k^2`.
fn newton_jost(g: f64, a: f64, leaf: &PoleSearchRegion) -> Result<Complex64> {
    let center = ComplexEnergy::from_c64(leaf.center()).expect("leaf center is finite");
    let mut k = momentum(center, Sheet::Second);
    let diag = Complex64::new(leaf.e_max - leaf.e_min, leaf.im_max - leaf.im_min).norm();
    let cap = diag / (2.0 * k.norm());
    for _ in 0..MAX_NEWTON_STEPS {
        let v = jost(g, a, k);
        let mut step = -v / jost_derivative(g, a, k);
        if !step.re.is_finite() || !step.im.is_finite() {
            return Err(
                ToolkitError::non_convergence("degenerate Newton step in root polish")
                    .with("k_re", k.re)
                    .with("k_im", k.im),
            );
        }
        let size = step.norm();
        if size > cap {
            step *= cap / size;
        }
        k += step;
        if step.norm() < NEWTON_STEP_TOL * (1.0 + k.norm()) {
            return Ok(k * k);
        }
    }
    Err(
        ToolkitError::non_convergence("root polish did not reach the step tolerance")
            .with("k_re", k.re)
            .with("k_im", k.im),
    )
}

/// Polishes the single root inside a leaf and validates it: the counting
/// function's residual must vanish there and the root must lie inside the
/// search region (a mirror-image zero reached across the cut fails this).
fn polish_root(
    counting: &Counting,
    leaf: &PoleSearchRegion,
    outer: &PoleSearchRegion,
    positive: bool,
) -> Result<Complex64> {
    let z = match counting {
        Counting::Rational { poles } => {
            let roots: Vec<Complex64> = poles
                .iter()
                .map(|p| if positive { *p } else { p.conj() })
                .collect();
            newton_polynomial(&roots, leaf)?
        }
        Counting::DeltaShell { g, a } => newton_jost(*g, *a, leaf)?,
    };
    let residual = counting.residual(z, positive);
    if !(residual < NEWTON_RESIDUAL_TOL) {
        return Err(ToolkitError::non_convergence(
            "polished root does not annihilate the counting function",
        )
        .with("z_re", z.re)
        .with("z_im", z.im)
        .with("residual", residual));
    }
    if !outer.contains(z, 0.01) {
        return Err(
            ToolkitError::non_convergence("root polish left the search region")
                .with("z_re", z.re)
                .with("z_im", z.im),
        );
    }
    Ok(z)
}

/// Finds every S-matrix pole inside the region, with residues.
///
/// The argument-principle count is performed on an analytic counting
/// function (first-sheet Blaschke product for rational models, the
/// second-sheet Jost function for the delta shell), so the total winding
/// equals the signed number of enclosed poles.  Each pole is isolated by
/// quadtree subdivision, polished by Newton iteration to a residual below
/// `1e-12`, deduplicated, and checked against the boundary count; the
/// residue of the carrying sheet function is then extracted on a circle of
/// radius `min(Gamma/10, neighbor distance/4)`.  Results are sorted by
/// real part.
///
/// Errors: `invalid-model` when the boundary grazes a pole or zero;
/// `non-convergence` when the winding does not stabilize, a cluster
/// resists subdivision, or the final root count disagrees with the
/// boundary count.
pub fn find_poles(model: &SMatrixModel, region: &PoleSearchRegion) -> Result<Vec<ResonancePole>> {
    let counting = Counting::for_model(model);
    let rule = PanelRule::base()?;
    check_boundary(&counting, region)?;

    let total = winding_number(&counting, region, &rule)?;
    if total == 0 {
        return Ok(Vec::new());
    }

    let mut leaves = Vec::new();
    isolate(&counting, *region, 0, &rule, &mut leaves)?;
    if leaves.iter().any(|(_, w)| w.signum() != total.signum()) {
        return Err(ToolkitError::non_convergence(
            "subdivision produced windings of mixed sign",
        ));
    }

    let positive = total > 0;
    let mut roots: Vec<Complex64> = Vec::new();
    for (leaf, _) in &leaves {
        let seed = refine_leaf(&counting, *leaf, &rule);
        let root = polish_root(&counting, &seed, region, positive)?;
        let duplicate = roots
            .iter()
            .any(|&r| (r - root).norm() < 1e-8 * (1.0 + root.norm()));
        if !duplicate {
            roots.push(root);
        }
    }
    if roots.len() != total.unsigned_abs() as usize {
        return Err(ToolkitError::non_convergence(
            "located roots disagree with the boundary count",
        )
        .with("expected", total.unsigned_abs())
        .with("found", roots.len()));
    }
    roots.sort_by(|a, b| a.re.partial_cmp(&b.re).expect("finite roots"));

    let mut poles = Vec::with_capacity(roots.len());
    for (i, &z_r) in roots.iter().enumerate() {
        let width_scale = 2.0 * z_r.im.abs();
        let nearest = roots
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, &other)| (z_r - other).norm())
            .fold(f64::INFINITY, f64::min);
        let radius = (width_scale / 10.0).min(nearest / 4.0);
        let residue = residue_on_circle(|z| counting.residue_target(positive, z), z_r, radius, 64)?;
        poles.push(ResonancePole { z_r, residue });
    }
    Ok(poles)
}

/// The s-wave radial scattering wavefunction `u(r)` of a potential model
/// at energy `E > 0`, evaluated on a grid of radii.
///
/// Outside the shell the wave is the unitary combination
/// `u(r) = (i/2)(e^{-ikr} - S e^{ikr})`; inside it is the regular solution
/// `A sin(kr)` with `A` fixed by continuity at the shell (or by the
/// derivative jump `u'(a+) - u'(a-) = g u(a)` at the measure-zero energies
/// where `sin(ka)` vanishes).  Rational models carry no spatial potential,
/// so they are rejected with `invalid-model`.
pub fn scattering_state(model: &SMatrixModel, e: f64, r_grid: &[f64]) -> Result<Vec<Complex64>> {
    let (g, a) = match &model.kind {
        ModelKind::DeltaShell { g, a } => (*g, *a),
        ModelKind::Rational { .. } => {
            return Err(ToolkitError::invalid_model(
                "scattering states require a potential model",
            ));
        }
    };
    if !e.is_finite() || !(e > 0.0) {
        return Err(
            ToolkitError::invalid_model("scattering states require a positive energy").with("e", e),
        );
    }
    for &r in r_grid {
        if !r.is_finite() || r < 0.0 {
            return Err(
                ToolkitError::invalid_model("scattering-state radii must be non-negative")
                    .with("r", r),
            );
        }
    }
    let k = e.sqrt();
    let s = s_matrix(model, ComplexEnergy::real(e)?, Sheet::First)?;
    let outer = |r: f64| {
        let phase = Complex64::new(0.0, k * r).exp();
        Complex64::new(0.0, 0.5) * (phase.finv() - s * phase)
    };
    let sin_ka = (k * a).sin();
    let amplitude = if sin_ka.abs() > 1e-8 {
        outer(a) / sin_ka
    } else {
        // sin(ka) ~ 0 forces u(a) ~ 0; match the interior slope to the
        // exterior slope minus the delta-shell jump g*u(a).
        let outer_slope = Complex64::new(0.5 * k, 0.0)
            * ((-Complex64::new(0.0, k * a)).exp() + s * Complex64::new(0.0, k * a).exp());
        (outer_slope - g * outer(a)) / (k * (k * a).cos())
    };
    Ok(r_grid
        .iter()
        .map(|&r| {
            if r < a {
                amplitude * (k * r).sin()
            } else {
                outer(r)
            }
        })
        .collect())
}
