//! Independent oracles for the numbers the library reports.
//!
//! Everything here is recomputed from scratch — composite Simpson
//! integration, reverse-order series summation, exact big-rational
//! combinatorics — and compared against the library's values or against
//! the frozen reference constants used across the test suite. None of the
//! oracles call into the library's quadrature or summation internals.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use weissler_core::analytic::{series_power, PowerSeries};
use weissler_core::bernoulli::{
    bessel_i, lemma1_tn, psi, psi_prime, series_s, u1_u2_positivity, y_v_functions,
    AbstractSequence,
};
use weissler_core::weights::{
    gamma_function, moment, moment_sequence, RadialWeight, DEFAULT_TOL,
};

// ---------------------------------------------------------------------------
// Frozen reference constants.
//
// Each was produced by summing the defining series / closed form in
// 50-digit decimal arithmetic, independently of this crate, then rounding
// to the nearest f64. The tests below re-derive them with yet another
// method (reverse-order f64 summation of closed-form terms), so a
// transcription error in either place cannot survive.
// ---------------------------------------------------------------------------

const S1_STEP: f64 = 1.2370110248688582;
const S1_FLAT: f64 = 1.5906368546373288;
const PSI2_STEP: f64 = 0.010496691761176846;
const PSI_PRIME1_STEP: f64 = 0.004797504251635332;
const I0_AT_2: f64 = 2.279585302336067;
const U1_AT_2: f64 = 1.1838966637273005;
const V_PRIME_AT_HALF: f64 = -0.06627680311890838;

/// Even moments of the step weight: h_{2n} = (1 + 4^{−n})/(2 + 4n).
fn step_h(n: usize) -> f64 {
    (1.0 + 0.25f64.powi(n as i32)) / (2.0 + 4.0 * n as f64)
}

/// Even moments of the flat classical weight (α = 2): h_{2n} = 1/(n+1).
fn flat_h(n: usize) -> f64 {
    1.0 / (n as f64 + 1.0)
}

/// Σ of precomputed terms, smallest-magnitude first, so plain f64
/// accumulation stays within an ulp or two of the true sum.
fn reverse_sum(terms: &[f64]) -> f64 {
    terms.iter().rev().sum()
}

fn series_terms(q: f64, h: impl Fn(usize) -> f64, count: usize) -> Vec<f64> {
    let mut fact = 1.0f64;
    (0..count)
        .map(|n| {
            if n > 0 {
                fact *= n as f64;
            }
            q.powi(n as i32) / (fact * fact) * h(n)
        })
        .collect()
}

#[test]
fn frozen_series_constants_recompute() {
    let s1_step = reverse_sum(&series_terms(1.0, step_h, 30));
    assert!(
        (s1_step - S1_STEP).abs() < 1e-15,
        "step S(1): oracle {s1_step:e} vs frozen {S1_STEP:e}"
    );

    let s1_flat = reverse_sum(&series_terms(1.0, flat_h, 30));
    assert!((s1_flat - S1_FLAT).abs() < 1e-15);

    let s2_step = reverse_sum(&series_terms(2.0, step_h, 35));
    let psi2 = s2_step - s1_step.powf(2.0);
    assert!(
        (psi2 - PSI2_STEP).abs() < 1e-14,
        "step ψ(2): oracle {psi2:e}"
    );

    // ψ′(1) = Σ n·h_{2n}/(n!)² − ln(S(1))·S(1).
    let mut fact = 1.0f64;
    let d_terms: Vec<f64> = (1..30)
        .map(|n| {
            fact *= n as f64;
            n as f64 / (fact * fact) * step_h(n)
        })
        .collect();
    let psi_prime_1 = reverse_sum(&d_terms) - s1_step.ln() * s1_step;
    assert!(
        (psi_prime_1 - PSI_PRIME1_STEP).abs() < 1e-14,
        "step ψ′(1): oracle {psi_prime_1:e}"
    );
}

#[test]
fn frozen_bessel_and_u_constants_recompute() {
    // I_0(2) = Σ 1/(m!)².
    let mut fact = 1.0f64;
    let terms: Vec<f64> = (0..25)
        .map(|m| {
            if m > 0 {
                fact *= m as f64;
            }
            1.0 / (fact * fact)
        })
        .collect();
    let i02 = reverse_sum(&terms);
    assert!((i02 - I0_AT_2).abs() < 1e-15, "I_0(2) oracle {i02:e}");

    let u12 = 16.0 * i02.ln() - 16.0 + 4.0;
    assert!((u12 - U1_AT_2).abs() < 1e-13, "u_1(2) oracle {u12:e}");

    // v′(1/2) by exact fraction arithmetic on the closed form:
    // −(1/4)(2 + 3/2 + 3/4) / ((3/2)³(2 + 2 + 3/4)) = −1.0625/16.03125.
    let v_prime_half = -(0.25 * 4.25) / (3.375 * 4.75);
    assert!((v_prime_half - V_PRIME_AT_HALF).abs() < 1e-16);
}

#[test]
fn library_values_match_frozen_constants() {
    let step = moment_sequence(&RadialWeight::counterexample(), 40, DEFAULT_TOL).unwrap();
    let flat = moment_sequence(&RadialWeight::classical(2.0).unwrap(), 40, DEFAULT_TOL).unwrap();

    assert!((series_s(1.0, &step, 1e-13).unwrap().value - S1_STEP).abs() < 1e-13);
    assert!((series_s(1.0, &flat, 1e-13).unwrap().value - S1_FLAT).abs() < 1e-13);
    assert!((psi(2.0, &step, 1e-13).unwrap().value - PSI2_STEP).abs() < 1e-12);
    assert!((psi_prime(1.0, &step, 1e-13).unwrap().value - PSI_PRIME1_STEP).abs() < 1e-12);
    assert!((bessel_i(0, 2.0, 1e-13).unwrap() - I0_AT_2).abs() < 1e-14);
    assert!((y_v_functions(0.5).unwrap().v_prime - V_PRIME_AT_HALF).abs() < 1e-16);
}

// ---------------------------------------------------------------------------
// Quadrature oracle: composite Simpson on seeded subranges.
// ---------------------------------------------------------------------------

fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for i in 1..panels {
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += weight * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

fn simpson_moment(w: &RadialWeight, m: u32, splits: &[f64]) -> f64 {
    let f = |rho: f64| rho.powi(m as i32 + 1) * w.evaluate(rho);
    // An unbounded-but-integrable weight at ρ = 0 (e.g. the 1/ρ step
    // weight) makes the endpoint sample 0·∞; nudging off zero costs less
    // than 1e−12 of integral for any such bounded integrand.
    let start = if w.evaluate(0.0).is_finite() { 0.0 } else { 1e-12 };
    let mut edges = vec![start];
    edges.extend_from_slice(splits);
    edges.push(1.0);
    edges
        .windows(2)
        .enumerate()
        .map(|(i, e)| {
            // Interior edges are jump points; sample them from the right
            // side only on the panel that owns the right limit.
            let a = if i > 0 { e[0] + 1e-12 } else { e[0] };
            simpson(&f, a, e[1], 8192)
        })
        .sum()
}

#[test]
fn moments_match_simpson_oracle() {
    let cases: Vec<(RadialWeight, Vec<f64>)> = vec![
        (RadialWeight::classical(2.0).unwrap(), vec![]),
        (RadialWeight::classical(3.0).unwrap(), vec![]),
        (RadialWeight::power(0.0).unwrap(), vec![]),
        (RadialWeight::power(1.0).unwrap(), vec![]),
        (RadialWeight::power(2.5).unwrap(), vec![]),
        (RadialWeight::counterexample(), vec![0.5]),
    ];
    for (w, splits) in &cases {
        for m in [0u32, 1, 2, 3, 7, 10] {
            let reference = simpson_moment(w, m, splits);
            let lib = moment(w, m, DEFAULT_TOL).unwrap().value;
            assert!(
                (lib - reference).abs() < 1e-10,
                "{} m={m}: lib {lib} vs simpson {reference}",
                w.description()
            );
        }
    }
}

#[test]
fn odd_classical_moments_match_simpson() {
    // Odd moments have no recurrence; they go through the gamma function.
    for alpha in [1.5f64, 2.0, 3.0, 4.5] {
        let w = RadialWeight::classical(alpha).unwrap();
        for m in [1u32, 3, 5] {
            let lib = moment(&w, m, DEFAULT_TOL).unwrap().value;
            if alpha >= 2.0 {
                let reference = simpson_moment(&w, m, &[]);
                assert!(
                    (lib - reference).abs() < 1e-10,
                    "alpha={alpha} m={m}: lib {lib} vs simpson {reference}"
                );
            }
            // Independent of integration entirely: Γ(α)Γ(m/2+1)/Γ(α+m/2).
            let gamma_form = gamma_function(alpha).unwrap()
                * gamma_function(m as f64 / 2.0 + 1.0).unwrap()
                / gamma_function(alpha + m as f64 / 2.0).unwrap();
            assert!((lib - gamma_form).abs() < 1e-12);
        }
    }
}

#[test]
fn gamma_functional_equation() {
    for i in 1..60 {
        let x = 0.07 * f64::from(i) + 0.11;
        let lhs = gamma_function(x + 1.0).unwrap();
        let rhs = x * gamma_function(x).unwrap();
        assert!(
            ((lhs - rhs) / rhs).abs() < 1e-13,
            "Γ({x}+1) = {lhs} vs xΓ(x) = {rhs}"
        );
    }
}

// ---------------------------------------------------------------------------
// Series-expansion identities.
// ---------------------------------------------------------------------------

/// The cancellation-free expansion of `u_2(t) = t²I_0(t) − 8I_2(t)`:
/// every term of `Σ_{m≥1} t^{2m+2}·m(m+3)/(4^m·m!(m+2)!)` is positive,
/// so this form is immune to the subtraction in the definition.
fn u2_series(t: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow4 = 1.0f64; // 4^m
    let mut fact_m = 1.0f64; // m!
    let mut fact_m2 = 2.0f64; // (m+2)!
    for m in 1..40usize {
        pow4 *= 4.0;
        fact_m *= m as f64;
        fact_m2 *= (m + 2) as f64;
        let mf = m as f64;
        sum += t.powi(2 * m as i32 + 2) * mf * (mf + 3.0) / (pow4 * fact_m * fact_m2);
    }
    sum
}

#[test]
fn u2_matches_cancellation_free_series() {
    let grid: Vec<f64> = (1..=40).map(|i| 2.0 * f64::from(i) / 40.0).collect();
    let rows = u1_u2_positivity(&grid).unwrap();
    for row in rows {
        let reference = u2_series(row.t);
        assert!(
            (row.u2 - reference).abs() < 1e-14 * reference.max(1e-3),
            "u2({}) = {} vs series {}",
            row.t,
            row.u2,
            reference
        );
        assert!(reference > 0.0);
    }
}

/// The concavity functional's numerator is a product of series; its q-power
/// coefficients must match the direct convolution of the factor
/// coefficients. With A_k = h_{2(k+2)}/((k!)²(k+1)(k+2)),
/// B_k = h_{2(k+1)}/((k!)²(k+1)), S_k = h_{2k}/(k!)²:
/// [qⁿ](A·S − B²) is exactly the functional T_n evaluated on h.
#[test]
fn phi_second_derivative_numerator_is_tn() {
    let weights = [
        RadialWeight::classical(2.0).unwrap(),
        RadialWeight::classical(3.0).unwrap(),
        RadialWeight::power(2.0).unwrap(),
        RadialWeight::counterexample(),
    ];
    for w in &weights {
        let h = moment_sequence(w, 14, DEFAULT_TOL).unwrap();
        let g = AbstractSequence::from_moments(&h);
        let mut fact = vec![1.0f64];
        for i in 1..=13usize {
            fact.push(fact[i - 1] * i as f64);
        }
        let a_coeff = |k: usize| h.h(k + 2) / (fact[k] * fact[k] * ((k + 1) * (k + 2)) as f64);
        let b_coeff = |k: usize| h.h(k + 1) / (fact[k] * fact[k] * (k + 1) as f64);
        let s_coeff = |k: usize| h.h(k) / (fact[k] * fact[k]);
        for n in 0..=10usize {
            let conv: f64 = (0..=n)
                .map(|k| a_coeff(k) * s_coeff(n - k) - b_coeff(k) * b_coeff(n - k))
                .sum();
            let tn = lemma1_tn(&g, n).unwrap();
            assert!(
                (conv - tn).abs() < 1e-15 + 1e-12 * tn.abs(),
                "{} n={n}: conv {conv:e} vs T_n {tn:e}",
                w.description()
            );
        }
    }
}

#[test]
fn tn_hand_computed_values() {
    // g ≡ 1 (constant): T_0 = 1/(1·2) − 1/(1·1) = −1/2.
    let ones = AbstractSequence::new(vec![1.0; 4]).unwrap();
    assert_eq!(lemma1_tn(&ones, 0).unwrap(), -0.5);
    // g_n = 1/(n+1): T_0 = (1/3)/2 − (1/2)(1/2) = −1/12.
    let harmonic = AbstractSequence::new(vec![1.0, 0.5, 1.0 / 3.0, 0.25]).unwrap();
    assert!((lemma1_tn(&harmonic, 0).unwrap() + 1.0 / 12.0).abs() < 1e-16);
}

// ---------------------------------------------------------------------------
// Derivative cross-checks.
// ---------------------------------------------------------------------------

#[test]
fn psi_prime_matches_finite_differences_on_conditioned_weights() {
    let weights = [
        RadialWeight::classical(2.0).unwrap(),
        RadialWeight::power(2.0).unwrap(),
    ];
    for w in &weights {
        let h = moment_sequence(w, 40, DEFAULT_TOL).unwrap();
        for &q in &[1.5f64, 2.0, 3.0] {
            let termwise = psi_prime(q, &h, 1e-13).unwrap().value;
            let step = 1e-5;
            let fd = (psi(q + step, &h, 1e-13).unwrap().value
                - psi(q - step, &h, 1e-13).unwrap().value)
                / (2.0 * step);
            assert!(
                (termwise - fd).abs() < 1e-7,
                "{} q={q}: termwise {termwise} vs fd {fd}",
                w.description()
            );
        }
    }
}

#[test]
fn v_prime_matches_finite_differences_of_independent_v() {
    // v(h2) recomputed from the printed y formula, not the library's.
    let v = |h2: f64| {
        let y = h2 + h2 * h2 / (1.0 + h2)
            - (1.0 + h2) * (1.0 + h2 + h2 * h2 / (2.0 + 2.0 * h2)).ln();
        y / (1.0 + h2)
    };
    for &h2 in &[0.15, 0.4, 0.5, 0.75, 0.95] {
        let closed = y_v_functions(h2).unwrap().v_prime;
        let step = 1e-6;
        let fd = (v(h2 + step) - v(h2 - step)) / (2.0 * step);
        assert!(
            (closed - fd).abs() < 1e-8,
            "h2={h2}: closed {closed} vs fd {fd}"
        );
    }
}

// ---------------------------------------------------------------------------
// Exact combinatorics.
// ---------------------------------------------------------------------------

fn big_factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Σ over ordered tuples (j₁,…,jₙ) with Σjᵢ = k of 1/(j₁!…jₙ!), exactly.
fn multinomial_sum(n: usize, k: usize) -> BigRational {
    fn recurse(parts_left: usize, remaining: usize) -> BigRational {
        if parts_left == 1 {
            return BigRational::new(BigInt::one(), big_factorial(remaining));
        }
        let mut acc = BigRational::zero();
        for j in 0..=remaining {
            let tail = recurse(parts_left - 1, remaining - j);
            acc += tail / BigRational::new(big_factorial(j), BigInt::one());
        }
        acc
    }
    recurse(n, k)
}

#[test]
fn multinomial_identity_exact() {
    for n in 1..=8usize {
        for k in 0..=12usize {
            let lhs = multinomial_sum(n, k);
            let rhs = BigRational::new(BigInt::from(n).pow(k as u32), big_factorial(k));
            assert_eq!(lhs, rhs, "n={n} k={k}");
        }
    }
}

/// The same identity drives the norm comparison: series powers of
/// (1 + z + z²/2! + … ) must reproduce nᵏ/k! coefficients.
#[test]
fn series_power_reproduces_multinomial_coefficients() {
    let coeffs: Vec<f64> = (0..8usize)
        .map(|j| {
            let mut fact = 1.0;
            for i in 1..=j {
                fact *= i as f64;
            }
            1.0 / fact
        })
        .collect();
    let f = PowerSeries::from_real(&coeffs).unwrap();
    for n in 1..=5u32 {
        let power = series_power(&f, n, 7).unwrap();
        for (k, c) in power.coeffs().iter().enumerate() {
            let expected = multinomial_sum(n as usize, k);
            let expected_f64 = rational_to_f64(&expected);
            assert!(
                (c.re - expected_f64).abs() < 1e-12 * expected_f64.max(1.0),
                "n={n} k={k}: {} vs {expected_f64}",
                c.re
            );
            assert_eq!(c.im, 0.0);
        }
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    let numer = r.numer().to_string().parse::<f64>().unwrap();
    let denom = r.denom().to_string().parse::<f64>().unwrap();
    numer / denom
}

// ---------------------------------------------------------------------------
// Moment-sequence structure used by the combinatorial norm bound.
// ---------------------------------------------------------------------------

#[test]
fn holder_chain_on_computed_sequences() {
    for w in [
        RadialWeight::classical(1.5).unwrap(),
        RadialWeight::classical(5.0).unwrap(),
        RadialWeight::power(0.5).unwrap(),
        RadialWeight::power(7.0).unwrap(),
        RadialWeight::counterexample(),
    ] {
        let h = moment_sequence(&w, 20, DEFAULT_TOL).unwrap();
        for n in 1..=20usize {
            let lhs = h.h(1).powi(n as i32);
            assert!(
                lhs <= h.h(n) * (1.0 + 1e-12) + 1e-15,
                "{}: h_2^{n} = {lhs} vs h_{} = {}",
                w.description(),
                2 * n,
                h.h(n)
            );
        }
    }
}

#[test]
fn moment_product_bound_for_conditioned_sequences() {
    // For sequences passing the weak condition:
    //   h_{2j₁}…h_{2jₙ} ≥ (j₁!…jₙ!/k!)·h_{2k},  k = Σjᵢ.
    let weights = [
        RadialWeight::classical(1.5).unwrap(),
        RadialWeight::classical(3.0).unwrap(),
        RadialWeight::power(1.0).unwrap(),
    ];
    let tuples: &[&[usize]] = &[
        &[1, 1],
        &[1, 2],
        &[2, 3],
        &[1, 1, 1],
        &[1, 2, 3],
        &[2, 2, 4],
        &[1, 1, 2, 4],
        &[2, 2, 3, 3],
    ];
    for w in &weights {
        let h = moment_sequence(w, 12, DEFAULT_TOL).unwrap();
        let mut fact = vec![1.0f64];
        for i in 1..=12usize {
            fact.push(fact[i - 1] * i as f64);
        }
        for &tuple in tuples {
            let k: usize = tuple.iter().sum();
            let product: f64 = tuple.iter().map(|&j| h.h(j)).product();
            let factor: f64 = tuple.iter().map(|&j| fact[j]).product::<f64>() / fact[k];
            assert!(
                product >= factor * h.h(k) * (1.0 - 1e-12),
                "{} tuple {tuple:?}: {product} vs {}",
                w.description(),
                factor * h.h(k)
            );
        }
    }
}

// ---------------------------------------------------------------------------
// Frozen-margin checks retained from the derivations.
// ---------------------------------------------------------------------------

#[test]
fn step_weight_margins_frozen() {
    let h = moment_sequence(&RadialWeight::counterexample(), 10, DEFAULT_TOL).unwrap();
    // 5/24 − (1/2)(17/160)/(5/24) = −7/150 exactly.
    let weak_m1 = h.h(1) / h.h(0) - 0.5 * h.h(2) / h.h(1);
    assert!((weak_m1 + 7.0 / 150.0).abs() < 1e-16);

    // h₄ bound gap: 2(5/24)²/(29/24) − 17/160 = 25/348 − 17/160 = −479/13920.
    let gap = 2.0 * h.h(1) * h.h(1) / (h.h(1) + 1.0) - h.h(2);
    assert!((gap + 479.0 / 13920.0).abs() < 1e-16);
    assert!((gap + 0.03441091954022989).abs() < 1e-15);
}

#[test]
fn lemma2_margin_frozen_for_flat_weight() {
    let h = moment_sequence(&RadialWeight::classical(2.0).unwrap(), 40, DEFAULT_TOL).unwrap();
    let s1 = series_s(1.0, &h, 1e-13).unwrap().value;
    let margin = h.h(1) * s1.ln() - h.h(2) / 2.0;
    assert!(
        (margin - 0.06540057010641315).abs() < 1e-13,
        "margin = {margin}"
    );
}
