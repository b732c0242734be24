//! Decay probability, the exact golden-rule decay rate, and the Born
//! limit that recovers Fermi's golden rule.
//!
//! A decay model couples a resonance to a set of measurable decay
//! channels through a form factor `v(E, b) = g^2 s(E) m_b >= 0`.  With
//! the Lorentzian line shape of the resonance, the decay probability is
//!
//! ```text
//! P(t) = 1 - e^{-Gamma t} * I,
//! I    = integral dE sum_b v(E, b) / ((E - E_R)^2 + (Gamma/2)^2),
//! ```
//!
//! and the boundary conditions `P(0) = 0`, `P(inf) = 1` hold exactly when
//! `I = 1`.  [`DecayModel::new`] enforces this by rescaling the coupling
//! `g^2`, which simultaneously makes the initial rate exact:
//!
//! ```text
//! dP/dt(t) = e^{-Gamma t} * 2 pi integral dE sum_b v(E, b) delta_Gamma(E - E_R),
//! dP/dt(0) = Gamma,
//! ```
//!
//! with `delta_Gamma` the Breit-Wigner nascent delta of width `Gamma`.
//! As `Gamma / E_R -> 0` the nascent delta sharpens and the exact rate
//! converges to Fermi's golden rule `2 pi sum_b v(E*, b)` evaluated at
//! the resonance energy, realized here by [`fermi_golden_rule`].
//!
//! Both the probability and the rate live on the forward semigroup only:
//! negative times are rejected with a `semigroup-domain` error.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Result, ToolkitError};
use crate::quad::{integrate_to_convergence, QuadKind, SELF_CONVERGENCE_RTOL};
use crate::spectral::ResonanceParameters;

use std::f64::consts::PI;

/// Quadrature order for the form-factor energy integrals.
const FORM_QUAD_ORDER: usize = 64;

/// Energy support of the decay products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnergySupport {
    /// The full-line idealization; meaningful only for the constant form
    /// factor, where the Lorentzian integral has a closed form.
    FullLine,
    /// `[E_threshold, inf)`; the physical half line is `Threshold(0)`.
    Threshold(f64),
}

impl EnergySupport {
    fn validate(&self) -> Result<()> {
        if let EnergySupport::Threshold(e0) = self {
            if !e0.is_finite() || *e0 < 0.0 {
                return Err(ToolkitError::invalid_model(
                    "energy threshold must be finite and non-negative",
                )
                .with("threshold", e0));
            }
        }
        Ok(())
    }
}

/// One measurable decay channel: a label and a positive degeneracy
/// weight (continuous degeneracies are pre-integrated into the weight).
#[derive(Debug, Clone, Deserialize)]
pub struct DecayChannel {
    /// Channel label, e.g. `"pi+pi-"`.
    pub b: String,
    /// Positive degeneracy measure.
    pub weight: f64,
}

/// The set of decay channels and the energy support they live on.
#[derive(Debug, Clone)]
pub struct DecayChannelSet {
    channels: Vec<DecayChannel>,
    support: EnergySupport,
}

impl DecayChannelSet {
    /// Validates and wraps a channel set: at least one channel, positive
    /// finite weights, distinct labels, and a valid support.
    pub fn new(channels: Vec<DecayChannel>, support: EnergySupport) -> Result<Self> {
        if channels.is_empty() {
            return Err(ToolkitError::invalid_model(
                "decay channel set needs at least one channel",
            ));
        }
        for ch in &channels {
            if !ch.weight.is_finite() || ch.weight <= 0.0 {
                return Err(ToolkitError::invalid_model(
                    "channel weights must be positive and finite",
                )
                .with("channel", &ch.b)
                .with("weight", ch.weight));
            }
        }
        for (i, ch) in channels.iter().enumerate() {
            if channels[..i].iter().any(|other| other.b == ch.b) {
                return Err(
                    ToolkitError::invalid_model("channel labels must be distinct")
                        .with("channel", &ch.b),
                );
            }
        }
        support.validate()?;
        Ok(DecayChannelSet { channels, support })
    }

    /// The channels.
    pub fn channels(&self) -> &[DecayChannel] {
        &self.channels
    }

    /// The energy support.
    pub fn support(&self) -> EnergySupport {
        self.support
    }
}

/// Energy dependence of the form factor.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FormShape {
    /// `s(E) = 1`.
    Constant,
    /// `s(E) = (E - E_threshold)^alpha`; integrability against the
    /// Lorentzian requires `0 < alpha < 1`.
    PowerThreshold {
        /// Threshold exponent.
        alpha: f64,
    },
    /// `s(E) = cutoff^2 / (E^2 + cutoff^2)`.
    LorentzCutoff {
        /// Cutoff energy, positive.
        cutoff: f64,
    },
}

impl FormShape {
    fn validate(&self) -> Result<()> {
        match self {
            FormShape::Constant => Ok(()),
            FormShape::PowerThreshold { alpha } => {
                if !alpha.is_finite() || *alpha <= 0.0 || *alpha >= 1.0 {
                    return Err(ToolkitError::invalid_model(
                        "threshold exponent must satisfy 0 < alpha < 1 for an integrable line shape",
                    )
                    .with("alpha", alpha));
                }
                Ok(())
            }
            FormShape::LorentzCutoff { cutoff } => {
                if !cutoff.is_finite() || *cutoff <= 0.0 {
                    return Err(ToolkitError::invalid_model(
                        "cutoff energy must be positive and finite",
                    )
                    .with("cutoff", cutoff));
                }
                Ok(())
            }
        }
    }

    /// The shape value at energy `e` on the given support.
    fn value(&self, e: f64, support: EnergySupport) -> f64 {
        match self {
            FormShape::Constant => 1.0,
            FormShape::PowerThreshold { alpha } => {
                let e0 = match support {
                    EnergySupport::Threshold(e0) => e0,
                    EnergySupport::FullLine => 0.0,
                };
                if e <= e0 {
                    0.0
                } else {
                    (e - e0).powf(*alpha)
                }
            }
            FormShape::LorentzCutoff { cutoff } => cutoff * cutoff / (e * e + cutoff * cutoff),
        }
    }
}

/// The squared coupling matrix element `v(E, b) = g^2 s(E) m_b`: a shape,
/// a positive overall coupling `g^2`, and optional per-channel
/// multipliers (default 1; a multiplier of 0 decouples a channel).
#[derive(Debug, Clone)]
pub struct FormFactor {
    shape: FormShape,
    coupling: f64,
    multipliers: BTreeMap<String, f64>,
}

impl FormFactor {
    /// Validates and wraps a form factor.
    pub fn new(
        shape: FormShape,
        coupling: f64,
        multipliers: BTreeMap<String, f64>,
    ) -> Result<Self> {
        shape.validate()?;
        if !coupling.is_finite() || coupling <= 0.0 {
            return Err(
                ToolkitError::invalid_model("coupling g^2 must be positive and finite")
                    .with("coupling", coupling),
            );
        }
        for (label, m) in &multipliers {
            if !m.is_finite() || *m < 0.0 {
                return Err(ToolkitError::invalid_model(
                    "channel multipliers must be non-negative and finite",
                )
                .with("channel", label)
                .with("multiplier", m));
            }
        }
        Ok(FormFactor {
            shape,
            coupling,
            multipliers,
        })
    }

    /// A constant form factor with unit multipliers.
    pub fn constant(coupling: f64) -> Result<Self> {
        FormFactor::new(FormShape::Constant, coupling, BTreeMap::new())
    }

    /// The energy shape.
    pub fn shape(&self) -> FormShape {
        self.shape
    }

    /// The overall coupling `g^2`.
    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    /// The multiplier for a channel label (1 when unspecified).
    pub fn multiplier(&self, label: &str) -> f64 {
        self.multipliers.get(label).copied().unwrap_or(1.0)
    }

    /// `v(E, b)` for one channel on the given support.
    pub fn value(&self, e: f64, label: &str, support: EnergySupport) -> f64 {
        self.coupling * self.shape.value(e, support) * self.multiplier(label)
    }

    /// The weighted channel sum `sum_b weight_b * m_b` that multiplies
    /// every energy integral of the separable form factor.
    fn weighted_multiplier_sum(&self, ch: &DecayChannelSet) -> f64 {
        ch.channels()
            .iter()
            .map(|c| c.weight * self.multiplier(&c.b))
            .sum()
    }
}

/// A non-interacting excited state at energy `e_d` with the Born
/// replacement of the form factor.
#[derive(Debug, Clone)]
pub struct BornState {
    e_d: f64,
    form: FormFactor,
}

impl BornState {
    /// Validates and wraps a Born state; `e_d` must be positive.
    pub fn new(e_d: f64, form: FormFactor) -> Result<Self> {
        if !e_d.is_finite() || e_d <= 0.0 {
            return Err(ToolkitError::invalid_model(
                "Born state energy must be positive and finite",
            )
            .with("e_d", e_d));
        }
        Ok(BornState { e_d, form })
    }

    /// The state's energy `E_d`.
    pub fn e_d(&self) -> f64 {
        self.e_d
    }

    /// The Born-replaced form factor.
    pub fn form(&self) -> &FormFactor {
        &self.form
    }
}

/// The Lorentzian-weighted form-factor integral
/// `I = integral dE sum_b v(E, b) / ((E - E_R)^2 + (Gamma/2)^2)`.
///
/// On the full line only the constant shape is accepted (the closed form
/// `g^2 * 2 pi / Gamma` per unit channel weight); thresholded supports
/// are integrated by an adaptive semi-infinite rule whose resolution
/// accumulates at the resonance peak.
///
/// Errors: `invariant-violation` when the coupling vanishes identically
/// (every channel decoupled — no decay to normalize); `non-convergence`
/// from the quadrature; `invalid-model` for a non-constant shape on the
/// full line.
pub fn normalization_integral(
    p: &ResonanceParameters,
    ch: &DecayChannelSet,
    v: &FormFactor,
) -> Result<f64> {
    let weight_sum = v.weighted_multiplier_sum(ch);
    if weight_sum == 0.0 {
        return Err(ToolkitError::invariant_violation(
            "form factor vanishes on every channel; nothing couples to the decay products",
        ));
    }
    let gamma = p.gamma();
    let half_width_sq = 0.25 * gamma * gamma;
    match ch.support() {
        EnergySupport::FullLine => {
            if v.shape() != FormShape::Constant {
                return Err(ToolkitError::invalid_model(
                    "the full-line idealization is defined for the constant form factor only",
                ));
            }
            Ok(v.coupling() * weight_sum * 2.0 * PI / gamma)
        }
        EnergySupport::Threshold(e0) => {
            let e_r = p.e_r();
            let shape = v.shape();
            let support = ch.support();
            let peak = (e_r - e0).max(gamma);
            let integral = match shape {
                // The power shape decays only like E^(alpha - 2); the
                // substitution E - e0 = x^kappa with kappa = 2/(1 - alpha)
                // turns that slow tail (and the threshold factor) into a
                // form the rational half-line map integrates smoothly.
                FormShape::PowerThreshold { alpha } => {
                    let kappa = 2.0 / (1.0 - alpha);
                    let scale = peak.powf(1.0 / kappa);
                    integrate_to_convergence(
                        QuadKind::SemiInfiniteMapped { start: 0.0, scale },
                        FORM_QUAD_ORDER,
                        SELF_CONVERGENCE_RTOL,
                        |x| {
                            let lx = x.ln();
                            let l = kappa * lx; // ln(E - e0)
                            let ln_jac = kappa.ln() + (kappa - 1.0) * lx;
                            let value = if l > 200.0 {
                                // Far tail: assemble in log space so huge
                                // powers of x cannot overflow.
                                let ln_dist = l + (-(e_r - e0) * (-l).exp()).ln_1p();
                                (alpha * l - 2.0 * ln_dist + ln_jac).exp()
                            } else {
                                let d = e0 + l.exp() - e_r;
                                (alpha * l + ln_jac).exp() / (d * d + half_width_sq)
                            };
                            Complex64::new(value, 0.0)
                        },
                    )?
                    .re
                }
                _ => {
                    integrate_to_convergence(
                        QuadKind::SemiInfiniteMapped {
                            start: e0,
                            scale: peak,
                        },
                        FORM_QUAD_ORDER,
                        SELF_CONVERGENCE_RTOL,
                        |e| {
                            let d = e - e_r;
                            Complex64::new(shape.value(e, support) / (d * d + half_width_sq), 0.0)
                        },
                    )?
                    .re
                }
            };
            Ok(v.coupling() * weight_sum * integral)
        }
    }
}

/// A normalized decay model: resonance, channels, and a form factor
/// whose coupling has been rescaled so the normalization integral is 1,
/// enforcing `P(0) = 0` and `P(inf) = 1` simultaneously.
#[derive(Debug, Clone)]
pub struct DecayModel {
    params: ResonanceParameters,
    channels: DecayChannelSet,
    form: FormFactor,
    initial_rate: f64,
}

impl DecayModel {
    /// Builds a consistent decay model by rescaling the coupling, then
    /// caches the initial rate `2 pi integral sum_b v delta_Gamma` from a
    /// fresh quadrature of the rescaled form factor.
    pub fn new(
        params: ResonanceParameters,
        channels: DecayChannelSet,
        form: FormFactor,
    ) -> Result<Self> {
        let raw = normalization_integral(&params, &channels, &form)?;
        if !raw.is_finite() || raw <= 0.0 {
            return Err(ToolkitError::invariant_violation(
                "normalization integral must be positive and finite",
            )
            .with("integral", raw));
        }
        let rescaled = FormFactor::new(form.shape, form.coupling / raw, form.multipliers)?;
        let mut model = DecayModel {
            params,
            channels,
            form: rescaled,
            initial_rate: 0.0,
        };
        model.initial_rate = width_consistency(&model)?;
        Ok(model)
    }

    /// Parses the decay-model JSON schema:
    /// `{"resonance": {"er", "gamma"}, "channels": [{"b", "weight"}],
    ///   "form_factor": {"shape", ...}, "support"?}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: DecayModelSpec = serde_json::from_str(text).map_err(|e| {
            ToolkitError::invalid_model("malformed decay-model JSON").with("cause", e)
        })?;
        let support = match spec.support {
            SupportSpec::FullLine => EnergySupport::FullLine,
            SupportSpec::Threshold { e_min } => EnergySupport::Threshold(e_min),
        };
        let channels = DecayChannelSet::new(spec.channels, support)?;
        let form = FormFactor::new(
            spec.form_factor.shape,
            spec.form_factor.coupling,
            spec.form_factor.multipliers,
        )?;
        DecayModel::new(spec.resonance.validated()?, channels, form)
    }

    /// The resonance parameters.
    pub fn params(&self) -> &ResonanceParameters {
        &self.params
    }

    /// The decay channels.
    pub fn channels(&self) -> &DecayChannelSet {
        &self.channels
    }

    /// The normalized form factor.
    pub fn form_factor(&self) -> &FormFactor {
        &self.form
    }
}

#[derive(Deserialize)]
struct DecayModelSpec {
    resonance: ResonanceParameters,
    channels: Vec<DecayChannel>,
    #[serde(default)]
    support: SupportSpec,
    form_factor: FormFactorSpec,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum SupportSpec {
    FullLine,
    Threshold {
        #[serde(default)]
        e_min: f64,
    },
}

impl Default for SupportSpec {
    fn default() -> Self {
        SupportSpec::Threshold { e_min: 0.0 }
    }
}

#[derive(Deserialize)]
struct FormFactorSpec {
    #[serde(flatten)]
    shape: FormShape,
    #[serde(default = "default_coupling")]
    coupling: f64,
    #[serde(default)]
    multipliers: BTreeMap<String, f64>,
}

fn default_coupling() -> f64 {
    1.0
}

/// The decay probability `P(t) = 1 - e^{-Gamma t}` of a normalized
/// model.  Defined on the forward semigroup only: `t < 0` is rejected
/// with `semigroup-domain`.
pub fn decay_probability(model: &DecayModel, t: f64) -> Result<f64> {
    check_forward(t)?;
    Ok(-(-model.params.gamma() * t).exp_m1())
}

/// The exact golden-rule decay rate
/// `dP/dt(t) = e^{-Gamma t} * 2 pi integral dE sum_b v(E, b) delta_Gamma(E - E_R)`,
/// with the energy integral evaluated by quadrature at construction
/// rather than by differentiating the probability.
pub fn decay_rate(model: &DecayModel, t: f64) -> Result<f64> {
    check_forward(t)?;
    Ok(model.initial_rate * (-model.params.gamma() * t).exp())
}

fn check_forward(t: f64) -> Result<()> {
    if !t.is_finite() {
        return Err(ToolkitError::invalid_model("evolution time must be finite").with("t", t));
    }
    if t < 0.0 {
        return Err(ToolkitError::semigroup_domain(
            "decay observables are defined forward in time only",
        )
        .with("t", t));
    }
    Ok(())
}

/// Fermi's golden rule `2 pi sum_b v(E_d, b) weight_b` for the transition
/// out of a non-interacting excited state.
///
/// The delta function collapses the energy integral at the state's
/// energy; in the Born limit this energy and the resonance energy
/// coincide, and callers realizing that limit should build the state at
/// the resonance energy.  `E_d` must lie in the interior of the support.
pub fn fermi_golden_rule(b: &BornState, ch: &DecayChannelSet) -> Result<f64> {
    if let EnergySupport::Threshold(e0) = ch.support() {
        if b.e_d() <= e0 {
            return Err(ToolkitError::invalid_model(
                "Born state energy must lie above the decay threshold",
            )
            .with("e_d", b.e_d())
            .with("threshold", e0));
        }
    }
    let rate: f64 = ch
        .channels()
        .iter()
        .map(|c| c.weight * b.form().value(b.e_d(), &c.b, ch.support()))
        .sum();
    Ok(2.0 * PI * rate)
}

/// Recomputes the width `2 pi integral dE sum_b v(E, b) delta_Gamma(E - E_R)`
/// of a normalized model by quadrature, for comparison with the model's
/// `Gamma`.  Exact for the constant shape; approaches `Gamma` as
/// `Gamma / E_R -> 0` for slowly varying shapes.
pub fn width_consistency(model: &DecayModel) -> Result<f64> {
    let gamma = model.params.gamma();
    // 2 pi * delta_Gamma = Gamma / ((E - E_R)^2 + (Gamma/2)^2), so the
    // width is Gamma times the same Lorentzian-weighted integral the
    // normalization fixed to 1.
    Ok(gamma * normalization_integral(&model.params, &model.channels, &model.form)?)
}

/// The resonance lifetime `tau_R = 1 / Gamma`.
pub fn lifetime(p: &ResonanceParameters) -> f64 {
    1.0 / p.gamma()
}

/// A sampled decay curve: probabilities and rates over non-negative,
/// increasing times.
#[derive(Debug, Clone)]
pub struct DecayCurve {
    times: Vec<f64>,
    p_values: Vec<f64>,
    rate_values: Vec<f64>,
}

impl DecayCurve {
    /// Validates and wraps a curve: matching lengths, non-negative
    /// increasing times, probabilities non-decreasing in `[0, 1 + 1e-9]`
    /// starting at 0 (within `1e-9`) when the grid starts at `t = 0`, and
    /// non-negative rates.
    pub fn new(times: Vec<f64>, p_values: Vec<f64>, rate_values: Vec<f64>) -> Result<Self> {
        if times.is_empty() || times.len() != p_values.len() || times.len() != rate_values.len() {
            return Err(ToolkitError::invariant_violation(
                "decay curve needs matching, non-empty time, probability, and rate lists",
            )
            .with("times", times.len()));
        }
        let mut last_t = -1.0_f64;
        for &t in &times {
            if !t.is_finite() || t < 0.0 || t <= last_t {
                return Err(ToolkitError::invariant_violation(
                    "decay curve times must be non-negative and strictly increasing",
                )
                .with("t", t));
            }
            last_t = t;
        }
        let mut last_p = -1e-12_f64;
        for &p in &p_values {
            if !p.is_finite() || !(-1e-12..=1.0 + 1e-9).contains(&p) || p < last_p {
                return Err(ToolkitError::invariant_violation(
                    "decay probabilities must be non-decreasing probabilities",
                )
                .with("p", p));
            }
            last_p = p;
        }
        if times[0] == 0.0 && p_values[0].abs() > 1e-9 {
            return Err(ToolkitError::invariant_violation(
                "a decay curve starting at t = 0 must start at probability 0",
            )
            .with("p", p_values[0]));
        }
        for &r in &rate_values {
            if !r.is_finite() || r < -1e-12 {
                return Err(
                    ToolkitError::invariant_violation("decay rates must be non-negative")
                        .with("rate", r),
                );
            }
        }
        Ok(DecayCurve {
            times,
            p_values,
            rate_values,
        })
    }

    /// Sample times.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Decay probabilities aligned with [`Self::times`].
    pub fn p_values(&self) -> &[f64] {
        &self.p_values
    }

    /// Decay rates aligned with [`Self::times`].
    pub fn rate_values(&self) -> &[f64] {
        &self.rate_values
    }
}

/// Samples a model's decay probability and rate over a time grid.
pub fn decay_curve(model: &DecayModel, times: &[f64]) -> Result<DecayCurve> {
    let p_values = times
        .iter()
        .map(|&t| decay_probability(model, t))
        .collect::<Result<Vec<f64>>>()?;
    let rate_values = times
        .iter()
        .map(|&t| decay_rate(model, t))
        .collect::<Result<Vec<f64>>>()?;
    DecayCurve::new(times.to_vec(), p_values, rate_values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::ErrorKind;
    use approx::assert_relative_eq;

    fn params(e_r: f64, gamma: f64) -> ResonanceParameters {
        ResonanceParameters::new(e_r, gamma).unwrap()
    }

    fn one_channel(support: EnergySupport) -> DecayChannelSet {
        DecayChannelSet::new(
            vec![DecayChannel {
                b: "a".into(),
                weight: 1.0,
            }],
            support,
        )
        .unwrap()
    }

    fn constant_model(e_r: f64, gamma: f64, support: EnergySupport) -> DecayModel {
        DecayModel::new(
            params(e_r, gamma),
            one_channel(support),
            FormFactor::constant(1.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn full_line_constant_normalization_has_the_closed_form() {
        let p = params(2.0, 0.4);
        let ch = one_channel(EnergySupport::FullLine);
        let v = FormFactor::constant(3.0).unwrap();
        let i = normalization_integral(&p, &ch, &v).unwrap();
        assert_relative_eq!(i, 3.0 * 2.0 * PI / 0.4, max_relative = 1e-12);

        // Consistency fixes g^2 = Gamma / 2 pi regardless of the initial
        // coupling.
        let model = DecayModel::new(p, ch, v).unwrap();
        assert_relative_eq!(
            model.form_factor().coupling(),
            0.4 / (2.0 * PI),
            max_relative = 1e-12
        );
    }

    #[test]
    fn half_line_constant_normalization_matches_the_arctangent_form() {
        // int_0^inf dE / ((E-E_R)^2 + (G/2)^2) = (2/G)(pi/2 + atan(2 E_R / G)).
        let (e_r, gamma) = (2.0, 0.5);
        let p = params(e_r, gamma);
        let ch = one_channel(EnergySupport::Threshold(0.0));
        let v = FormFactor::constant(1.0).unwrap();
        let i = normalization_integral(&p, &ch, &v).unwrap();
        let expected = (2.0 / gamma) * (PI / 2.0 + (2.0 * e_r / gamma).atan());
        assert_relative_eq!(i, expected, max_relative = 1e-8);
    }

    #[test]
    fn decoupled_form_factor_is_rejected() {
        let p = params(2.0, 0.5);
        let ch = one_channel(EnergySupport::Threshold(0.0));
        let mut multipliers = BTreeMap::new();
        multipliers.insert("a".to_string(), 0.0);
        let v = FormFactor::new(FormShape::Constant, 1.0, multipliers).unwrap();
        let err = normalization_integral(&p, &ch, &v).unwrap_err();
        assert_eq!(err.kind(), ErrorKind::InvariantViolation);
    }

    #[test]
    fn full_line_rejects_non_constant_shapes() {
        let p = params(2.0, 0.5);
        let ch = one_channel(EnergySupport::FullLine);
        let v = FormFactor::new(
            FormShape::LorentzCutoff { cutoff: 20.0 },
            1.0,
            BTreeMap::new(),
        )
        .unwrap();
        assert_eq!(
            normalization_integral(&p, &ch, &v).unwrap_err().kind(),
            ErrorKind::InvalidModel
        );
    }

    #[test]
    fn shape_parameters_are_validated() {
        for alpha in [0.0, 1.0, 1.5, -0.5] {
            assert!(FormShape::PowerThreshold { alpha }.validate().is_err());
        }
        assert!(FormShape::PowerThreshold { alpha: 0.5 }.validate().is_ok());
        assert!(FormShape::LorentzCutoff { cutoff: 0.0 }.validate().is_err());
        assert!(FormFactor::constant(0.0).is_err());
        assert!(FormFactor::constant(-1.0).is_err());
    }

    #[test]
    fn channel_sets_are_validated() {
        assert!(DecayChannelSet::new(vec![], EnergySupport::FullLine).is_err());
        assert!(DecayChannelSet::new(
            vec![DecayChannel {
                b: "a".into(),
                weight: 0.0
            }],
            EnergySupport::FullLine
        )
        .is_err());
        assert!(DecayChannelSet::new(
            vec![
                DecayChannel {
                    b: "a".into(),
                    weight: 1.0
                },
                DecayChannel {
                    b: "a".into(),
                    weight: 2.0
                }
            ],
            EnergySupport::FullLine
        )
        .is_err());
        assert!(DecayChannelSet::new(
            vec![DecayChannel {
                b: "a".into(),
                weight: 1.0
            }],
            EnergySupport::Threshold(-1.0)
        )
        .is_err());
    }

    #[test]
    fn probability_hits_its_boundary_conditions() {
        let model = constant_model(2.0, 0.25, EnergySupport::Threshold(0.0));
        assert_eq!(decay_probability(&model, 0.0).unwrap(), 0.0);
        assert!((decay_probability(&model, 4000.0).unwrap() - 1.0).abs() < 1e-12);
        let half_life = 2.0_f64.ln() / 0.25;
        assert!((decay_probability(&model, half_life).unwrap() - 0.5).abs() < 1e-10);
        assert_eq!(
            decay_probability(&model, -0.5).unwrap_err().kind(),
            ErrorKind::SemigroupDomain
        );
    }

    #[test]
    fn initial_rate_is_the_width_for_every_shape() {
        let gamma = 0.3;
        let shapes = [
            FormShape::Constant,
            FormShape::PowerThreshold { alpha: 0.5 },
            FormShape::LorentzCutoff { cutoff: 20.0 },
        ];
        for shape in shapes {
            let model = DecayModel::new(
                params(2.0, gamma),
                one_channel(EnergySupport::Threshold(0.0)),
                FormFactor::new(shape, 0.7, BTreeMap::new()).unwrap(),
            )
            .unwrap();
            let rate0 = decay_rate(&model, 0.0).unwrap();
            assert_relative_eq!(rate0, gamma, max_relative = 1e-8);
        }
    }

    #[test]
    fn rate_decays_with_the_lifetime() {
        let gamma = 0.5;
        let model = constant_model(2.0, gamma, EnergySupport::Threshold(0.0));
        let tau = lifetime(model.params());
        assert_relative_eq!(tau, 2.0, max_relative = 1e-15);
        let rate = decay_rate(&model, tau).unwrap();
        assert_relative_eq!(rate, gamma * (-1.0_f64).exp(), max_relative = 1e-8);
        assert_eq!(
            decay_rate(&model, -1.0).unwrap_err().kind(),
            ErrorKind::SemigroupDomain
        );
    }

    #[test]
    fn rate_matches_the_finite_difference_of_the_probability() {
        let gamma = 0.5;
        let model = DecayModel::new(
            params(2.0, gamma),
            one_channel(EnergySupport::Threshold(0.0)),
            FormFactor::new(
                FormShape::PowerThreshold { alpha: 0.5 },
                1.0,
                BTreeMap::new(),
            )
            .unwrap(),
        )
        .unwrap();
        let h = 1e-5 / gamma;
        for gt in [0.1_f64, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let t = gt / gamma;
            let fd = (decay_probability(&model, t + h).unwrap()
                - decay_probability(&model, t - h).unwrap())
                / (2.0 * h);
            let rate = decay_rate(&model, t).unwrap();
            assert!((fd - rate).abs() < 1e-6, "Gamma t = {gt}: {fd} vs {rate}");
        }
    }

    #[test]
    fn survival_matches_the_gamow_semigroup() {
        use crate::evolution::{gamow_evolve, GamowStateWeight};
        let model = constant_model(2.0, 0.5, EnergySupport::Threshold(0.0));
        let w = GamowStateWeight::new(*model.params(), 1.0).unwrap();
        for t in [0.0, 0.5, 2.0, 10.0] {
            let survival = 1.0 - decay_probability(&model, t).unwrap();
            let weight = gamow_evolve(&w, t).unwrap().weight();
            // Survival is computed through 1 - P, so agreement is at the
            // absolute rounding level of 1.
            assert!((survival - weight).abs() < 1e-15, "t={t}");
        }
    }

    #[test]
    fn fermi_collapses_the_delta_for_simple_channel_sets() {
        let g_sq = 0.3;
        let form = FormFactor::constant(g_sq).unwrap();
        let one = one_channel(EnergySupport::Threshold(0.0));
        let born = BornState::new(2.0, form.clone()).unwrap();
        assert_relative_eq!(
            fermi_golden_rule(&born, &one).unwrap(),
            2.0 * PI * g_sq,
            max_relative = 1e-12
        );

        let two = DecayChannelSet::new(
            vec![
                DecayChannel {
                    b: "a".into(),
                    weight: 1.0,
                },
                DecayChannel {
                    b: "b".into(),
                    weight: 3.0,
                },
            ],
            EnergySupport::Threshold(0.0),
        )
        .unwrap();
        assert_relative_eq!(
            fermi_golden_rule(&born, &two).unwrap(),
            8.0 * PI * g_sq,
            max_relative = 1e-12
        );
    }

    #[test]
    fn fermi_rejects_states_outside_the_support() {
        let form = FormFactor::constant(1.0).unwrap();
        let ch = one_channel(EnergySupport::Threshold(1.0));
        assert!(BornState::new(0.0, form.clone()).is_err());
        let at_threshold = BornState::new(1.0, form.clone()).unwrap();
        assert_eq!(
            fermi_golden_rule(&at_threshold, &ch).unwrap_err().kind(),
            ErrorKind::InvalidModel
        );
        let below = BornState::new(0.5, form).unwrap();
        assert!(fermi_golden_rule(&below, &ch).is_err());
    }

    /// Relative gap between the exact initial rate and Fermi's golden
    /// rule, frozen from closed forms (constant shape: atan(G/2E_R)/pi)
    /// and an independent high-precision quadrature (cutoff shape with
    /// cutoff = 10 E_R), for Gamma/E_R in {1/10, 1/100, 1/1000}.
    const BORN_GAP_CONSTANT: [f64; 3] = [1.590_2e-2, 1.591_5e-3, 1.591_5e-4];
    const BORN_GAP_CUTOFF: [f64; 3] = [1.905_5e-2, 1.908_9e-3, 1.909_1e-4];

    fn born_gap(e_r: f64, gamma: f64, shape: FormShape) -> f64 {
        let model = DecayModel::new(
            params(e_r, gamma),
            one_channel(EnergySupport::Threshold(0.0)),
            FormFactor::new(shape, 1.0, BTreeMap::new()).unwrap(),
        )
        .unwrap();
        let exact = decay_rate(&model, 0.0).unwrap();
        let born = BornState::new(e_r, model.form_factor().clone()).unwrap();
        let fermi = fermi_golden_rule(&born, model.channels()).unwrap();
        (exact - fermi).abs() / fermi
    }

    #[test]
    fn born_limit_recovers_fermi_golden_rule() {
        let e_r = 2.0;
        for (shape, frozen, c_bound) in [
            (FormShape::Constant, BORN_GAP_CONSTANT, 0.16),
            (
                FormShape::LorentzCutoff { cutoff: 10.0 * e_r },
                BORN_GAP_CUTOFF,
                0.2,
            ),
        ] {
            let mut previous = f64::INFINITY;
            for (i, ratio) in [0.1, 0.01, 0.001].iter().enumerate() {
                let gamma = e_r * ratio;
                let gap = born_gap(e_r, gamma, shape);
                assert_relative_eq!(gap, frozen[i], max_relative = 1e-3);
                assert!(gap < previous, "gap must shrink along the limit sequence");
                // First-order convergence: gap <= C * (Gamma / E_R).
                assert!(gap <= c_bound * ratio);
                previous = gap;
            }
            assert!(previous <= 0.01, "gap at Gamma/E_R = 1/1000 must be <= 1%");
        }
    }

    #[test]
    fn width_consistency_recovers_gamma() {
        // Every normalized model satisfies the width self-consistency by
        // construction; the recomputation must confirm it numerically.
        let shapes = [
            FormShape::Constant,
            FormShape::PowerThreshold { alpha: 0.5 },
            FormShape::LorentzCutoff { cutoff: 20.0 },
        ];
        for shape in shapes {
            for gamma in [0.5, 0.05] {
                let model = DecayModel::new(
                    params(2.0, gamma),
                    one_channel(EnergySupport::Threshold(0.0)),
                    FormFactor::new(shape, 1.0, BTreeMap::new()).unwrap(),
                )
                .unwrap();
                assert_relative_eq!(
                    width_consistency(&model).unwrap(),
                    gamma,
                    max_relative = 1e-8
                );
            }
        }
    }

    #[test]
    fn born_matched_coupling_approaches_self_consistency() {
        // Fixing g^2 from the value of v at the resonance (the Born
        // regime's matching condition 2 pi v(E_R) = Gamma, not the full
        // normalization) leaves an O(Gamma/E_R) self-consistency drift
        // that shrinks along the narrowing sequence.
        let e_r = 2.0;
        let ch = one_channel(EnergySupport::Threshold(0.0));
        let mut previous = f64::INFINITY;
        for gamma in [0.2, 0.02, 0.002] {
            let shape = FormShape::PowerThreshold { alpha: 0.5 };
            let g_sq = gamma / (2.0 * PI * shape.value(e_r, ch.support()));
            let form = FormFactor::new(shape, g_sq, BTreeMap::new()).unwrap();
            let p = params(e_r, gamma);
            let gamma_computed = gamma * normalization_integral(&p, &ch, &form).unwrap();
            let drift = (gamma_computed / gamma - 1.0).abs();
            assert!(drift < previous, "gamma={gamma}: drift {drift}");
            previous = drift;
        }
        assert!(previous < 0.01);
    }

    #[test]
    fn lifetime_inverts_the_width() {
        assert_relative_eq!(lifetime(&params(2.0, 1.0)), 1.0);
        assert_relative_eq!(lifetime(&params(2.0, 0.5)), 2.0);
        let model = constant_model(2.0, 0.5, EnergySupport::Threshold(0.0));
        let survival = 1.0 - decay_probability(&model, lifetime(model.params())).unwrap();
        assert!((survival - (-1.0_f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn curves_are_monotone_and_validated() {
        let model = constant_model(2.0, 0.5, EnergySupport::Threshold(0.0));
        let times: Vec<f64> = (0..=20).map(|i| i as f64).collect();
        let curve = decay_curve(&model, &times).unwrap();
        assert_eq!(curve.times().len(), curve.p_values().len());
        assert!(curve.p_values()[0].abs() < 1e-9);
        assert!(curve.rate_values().iter().all(|&r| r >= 0.0));

        assert!(DecayCurve::new(vec![0.0, 1.0], vec![0.0, 0.5], vec![0.1]).is_err());
        assert!(DecayCurve::new(vec![0.0, 1.0], vec![0.5, 0.4], vec![0.1, 0.1]).is_err());
        assert!(DecayCurve::new(vec![1.0, 0.5], vec![0.0, 0.1], vec![0.1, 0.1]).is_err());
        assert!(DecayCurve::new(vec![0.0, 1.0], vec![0.0, 0.5], vec![-0.1, 0.1]).is_err());
    }

    #[test]
    fn json_round_trip_matches_the_schema() {
        let text = r#"{
            "resonance": {"er": 2.0, "gamma": 0.1},
            "channels": [{"b": "pi+pi-", "weight": 1.0}],
            "form_factor": {"shape": "constant"}
        }"#;
        let model = DecayModel::from_json(text).unwrap();
        assert_eq!(model.params().e_r(), 2.0);
        assert_eq!(model.channels().channels()[0].b, "pi+pi-");
        assert_eq!(model.channels().support(), EnergySupport::Threshold(0.0));
        assert_relative_eq!(decay_rate(&model, 0.0).unwrap(), 0.1, max_relative = 1e-8);

        let with_options = r#"{
            "resonance": {"er": 2.0, "gamma": 0.1},
            "channels": [{"b": "x", "weight": 1.0}, {"b": "y", "weight": 2.0}],
            "support": {"kind": "threshold", "e_min": 0.5},
            "form_factor": {"shape": "lorentz-cutoff", "cutoff": 20.0,
                            "coupling": 2.0, "multipliers": {"y": 0.25}}
        }"#;
        let model = DecayModel::from_json(with_options).unwrap();
        assert_eq!(model.channels().support(), EnergySupport::Threshold(0.5));
        assert_eq!(model.form_factor().multiplier("y"), 0.25);
        assert_eq!(model.form_factor().multiplier("x"), 1.0);

        assert!(DecayModel::from_json("{}").is_err());
        let bad_shape = r#"{
            "resonance": {"er": 2.0, "gamma": 0.1},
            "channels": [{"b": "a", "weight": 1.0}],
            "form_factor": {"shape": "gaussian"}
        }"#;
        assert!(DecayModel::from_json(bad_shape).is_err());
        let bad_weight = r#"{
            "resonance": {"er": 2.0, "gamma": 0.1},
            "channels": [{"b": "a", "weight": -1.0}],
            "form_factor": {"shape": "constant"}
        }"#;
        assert!(DecayModel::from_json(bad_weight).is_err());
    }
}
