//! End-to-end decay-law checks over a corpus of normalized decay models:
//! boundary values, rate/probability consistency, lifetime, agreement
//! with the exponential weight of the resonance state, and JSON intake.

use std::collections::BTreeMap;

use gamowkit::evolution::{gamow_evolve, GamowStateWeight};
use gamowkit::goldenrule::{
    decay_curve, decay_probability, decay_rate, lifetime, width_consistency, DecayChannel,
    DecayChannelSet, DecayModel, EnergySupport, FormFactor, FormShape,
};
use gamowkit::spectral::ResonanceParameters;
use gamowkit::ErrorKind;

fn channel(b: &str, weight: f64) -> DecayChannel {
    DecayChannel {
        b: b.to_string(),
        weight,
    }
}

/// Normalized corpus: every form-factor shape, one- and two-channel
/// sets, and both a narrow and a broad resonance.
fn corpus() -> Vec<DecayModel> {
    let mut models = Vec::new();
    let resonances = [(2.0, 0.1), (40.0, 1.0)];
    for (e_r, gamma) in resonances {
        let params = ResonanceParameters::new(e_r, gamma).unwrap();
        let shapes = [
            FormShape::Constant,
            FormShape::PowerThreshold { alpha: 0.5 },
            FormShape::LorentzCutoff { cutoff: 10.0 * e_r },
        ];
        for shape in shapes {
            let channels = DecayChannelSet::new(
                vec![channel("a", 0.7), channel("b", 0.3)],
                EnergySupport::Threshold(0.0),
            )
            .unwrap();
            let mut multipliers = BTreeMap::new();
            multipliers.insert("b".to_string(), 0.5);
            let form = FormFactor::new(shape, 1.0, multipliers).unwrap();
            models.push(DecayModel::new(params, channels, form).unwrap());
        }
    }
    models
}

#[test]
fn every_corpus_model_obeys_the_exponential_decay_chain() {
    for model in corpus() {
        let gamma = model.params().gamma();

        // Boundary values of the decay probability.
        assert!(decay_probability(&model, 0.0).unwrap().abs() < 1e-9);
        let late = decay_probability(&model, 40.0 / gamma).unwrap();
        assert!(late > 1.0 - 1e-9, "P at Gamma*t = 40 is {late}");

        // The initial rate is the width.
        let rate0 = decay_rate(&model, 0.0).unwrap();
        assert!(
            (rate0 - gamma).abs() <= 1e-8 * gamma,
            "initial rate {rate0} vs width {gamma}"
        );

        // Rate equals the slope of the probability across the decay era.
        let h = 1e-5 / gamma;
        for gt in [0.5, 1.0, 2.0, 5.0, 10.0] {
            let t = gt / gamma;
            let fd = (decay_probability(&model, t + h).unwrap()
                - decay_probability(&model, t - h).unwrap())
                / (2.0 * h);
            let rate = decay_rate(&model, t).unwrap();
            assert!(
                (fd - rate).abs() <= 1e-6 * rate.max(gamma * 1e-12),
                "slope {fd} vs rate {rate} at Gamma*t = {gt}"
            );
        }

        // One lifetime leaves exactly 1/e of the population.
        let tau = lifetime(model.params());
        let survival = 1.0 - decay_probability(&model, tau).unwrap();
        assert!(
            (survival - (-1.0_f64).exp()).abs() < 1e-10,
            "survival after one lifetime is {survival}"
        );

        // The rescaled form factor integrates back to the width.
        let width = width_consistency(&model).unwrap();
        assert!((width - gamma).abs() <= 1e-8 * gamma);
    }
}

#[test]
fn decay_probability_complements_the_resonance_weight() {
    // The population that has decayed plus the surviving Gamow weight is
    // unity: the golden-rule law and the semigroup evolution of the
    // resonance state describe the same exponential.
    for model in corpus() {
        let w0 = GamowStateWeight::new(*model.params(), 1.0).unwrap();
        for gt in [0.3, 1.7, 4.2, 11.0] {
            let t = gt / model.params().gamma();
            let decayed = decay_probability(&model, t).unwrap();
            let surviving = gamow_evolve(&w0, t).unwrap().weight();
            assert!(
                (decayed + surviving - 1.0).abs() < 1e-12,
                "P + w = {} at Gamma*t = {gt}",
                decayed + surviving
            );
        }
    }
}

#[test]
fn decay_curve_columns_are_mutually_consistent() {
    let model = &corpus()[0];
    let gamma = model.params().gamma();
    let times: Vec<f64> = (0..=50).map(|k| 0.2 * k as f64 / gamma).collect();
    let curve = decay_curve(model, &times).unwrap();
    assert_eq!(curve.times().len(), times.len());
    for ((&p, &rate), &t) in curve
        .p_values()
        .iter()
        .zip(curve.rate_values())
        .zip(curve.times())
    {
        // rate(t) = Gamma * (1 - P(t)) for a pure exponential law.
        assert!(
            (rate - gamma * (1.0 - p)).abs() < 1e-10 * gamma,
            "rate {rate} vs Gamma*(1-P) at t = {t}"
        );
    }
    // P is monotone non-decreasing.
    for pair in curve.p_values().windows(2) {
        assert!(pair[1] >= pair[0] - 1e-12);
    }
}

#[test]
fn json_intake_builds_the_same_model_as_the_constructors() {
    let text = r#"{
        "resonance": {"er": 2.0, "gamma": 0.1},
        "channels": [{"b": "a", "weight": 0.7}, {"b": "b", "weight": 0.3}],
        "support": {"kind": "threshold", "e_min": 0.0},
        "form_factor": {"shape": "lorentz-cutoff", "cutoff": 20.0, "coupling": 1.0,
                        "multipliers": {"b": 0.5}}
    }"#;
    let parsed = DecayModel::from_json(text).unwrap();
    let constructed = &corpus()[2];
    assert_eq!(parsed.params().e_r(), constructed.params().e_r());
    assert_eq!(parsed.params().gamma(), constructed.params().gamma());
    // Identical inputs normalize to the identical coupling.
    let a = parsed.form_factor().coupling();
    let b = constructed.form_factor().coupling();
    assert!(
        (a - b).abs() <= 1e-12 * b.abs(),
        "parsed coupling {a} vs constructed {b}"
    );
    for t in [0.0, 3.0, 17.0] {
        assert_eq!(
            decay_probability(&parsed, t).unwrap(),
            decay_probability(constructed, t).unwrap()
        );
    }
}

#[test]
fn semigroup_operations_reject_negative_times() {
    let model = &corpus()[0];
    for t in [-1e-12, -0.5, -40.0] {
        assert_eq!(
            decay_probability(model, t).unwrap_err().kind(),
            ErrorKind::SemigroupDomain
        );
        assert_eq!(
            decay_rate(model, t).unwrap_err().kind(),
            ErrorKind::SemigroupDomain
        );
    }
}
