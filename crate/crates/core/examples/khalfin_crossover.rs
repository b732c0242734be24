//! Derivation of the late-time crossover fixture used by the survival
//! tests: the first integer time at which the semibounded-to-exponential
//! survival ratio for the `E_R = 40, Gamma = 1` Breit-Wigner benchmark
//! provably exceeds 10.
//!
//! Method.  On the half-line the survival amplitude splits into the
//! resonance-pole term (magnitude `e^{-Gamma t / 2}`) and a branch-cut
//! term, the Laplace transform of the raw Lorentzian density continued
//! to the negative imaginary axis.  Watson's lemma expands that
//! transform in endpoint derivatives of the density at threshold:
//!
//! ```text
//! integral ~ d(0)/t - i d'(0)/t^2 - d''(0)/t^3 + ...
//! ```
//!
//! Taking every sign adversarially gives a pessimistic lower envelope
//! for the cut magnitude, and subtracting the pole envelope bounds the
//! full amplitude from below.  The scan below finds the first integer
//! `t` where the resulting ratio bound clears 10; the toolkit's own
//! quadrature then confirms the true ratio at that time.
//!
//! Run with `cargo run -p gamowkit --example khalfin_crossover`.

use std::f64::consts::PI;

use gamowkit::evolution::khalfin_comparison;
use gamowkit::spectral::ResonanceParameters;

const E_R: f64 = 40.0;
const GAMMA: f64 = 1.0;
const TARGET_RATIO: f64 = 10.0;

fn main() {
    // Endpoint data of the raw (unnormalized) Lorentzian density
    // d(E) = (Gamma/2pi) / ((E - E_R)^2 + Gamma^2/4) at the threshold
    // E = 0, with D = E_R^2 + Gamma^2/4:
    //   d(0)   = (Gamma/2pi) / D
    //   d'(0)  = (Gamma/pi) E_R / D^2
    //   d''(0) = (Gamma/pi) (3 E_R^2 - Gamma^2/4) / D^3
    let d = E_R * E_R + 0.25 * GAMMA * GAMMA;
    let d0 = (GAMMA / (2.0 * PI)) / d;
    let d1 = (GAMMA / PI) * E_R / (d * d);
    let d2 = (GAMMA / PI) * (3.0 * E_R * E_R - 0.25 * GAMMA * GAMMA) / (d * d * d);

    // Raw half-line mass of the same density (closed form), which
    // normalizes both amplitude terms.
    let mass = (0.5 + (2.0 * E_R / GAMMA).atan() / PI).min(1.0);

    println!("# Late-time crossover derivation (E_R = {E_R}, Gamma = {GAMMA})");
    println!("threshold density        d(0)   = {d0:.14e}");
    println!("first derivative         d'(0)  = {d1:.14e}");
    println!("second derivative        d''(0) = {d2:.14e}");
    println!("raw half-line mass       N      = {mass:.15}");
    println!();
    println!(
        "{:>4}  {:>13}  {:>13}  {:>12}",
        "t", "cut lower", "pole env", "ratio bound"
    );

    // Pessimistic envelopes: the cut magnitude is at least the leading
    // Watson term minus the magnitudes of the next two, and the full
    // amplitude at least the cut envelope minus the pole envelope.
    let ratio_bound = |t: f64| -> f64 {
        let cut_lower = d0 / t - d1 / (t * t) - d2 / (t * t * t);
        let pole_env = (-0.5 * GAMMA * t).exp();
        if cut_lower <= pole_env {
            return 0.0;
        }
        let amp_lower = (cut_lower - pole_env) / mass;
        amp_lower * amp_lower / (-GAMMA * t).exp()
    };

    let mut crossover = None;
    for k in 1..=200_u32 {
        let t = f64::from(k);
        let bound = ratio_bound(t);
        // Print the approach to the crossing.
        if (24..=30).contains(&k) {
            let cut_lower = d0 / t - d1 / (t * t) - d2 / (t * t * t);
            let pole_env = (-0.5 * GAMMA * t).exp();
            println!("{k:>4}  {cut_lower:>13.6e}  {pole_env:>13.6e}  {bound:>12.4}");
        }
        if bound > TARGET_RATIO {
            crossover = Some(t);
            break;
        }
    }
    let t_star = crossover.expect("the ratio bound must cross the target");

    println!();
    println!("first integer t with ratio bound > {TARGET_RATIO}: t* = {t_star}");

    // Confirm with the toolkit's full quadrature of the survival law.
    let p = ResonanceParameters::new(E_R, GAMMA).expect("benchmark parameters are valid");
    let rows = khalfin_comparison(&p, &[t_star]).expect("comparison at the fixture time");
    println!(
        "toolkit ratio at t* = {t_star}: P_semibounded/e^(-Gamma t) = {:.10}",
        rows[0].ratio
    );
    assert!(rows[0].ratio > TARGET_RATIO);
    println!("fixture confirmed: KHALFIN_CROSSOVER_TIME = {t_star}");
}
