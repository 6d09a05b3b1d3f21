//! Truncated power series, Parseval norms, and dilation-contractivity checks.
//!
//! For `f(z) = Σ a_k z^k` and a normalized radial weight with even moments
//! `h_{2k}`, the squared Bergman norm is `‖f‖² = Σ |a_k|² h_{2k}`. The main
//! check here is the even-exponent contractivity statement
//!
//! ```text
//!     ‖(f_r)^n‖²_{A²(w)} ≤ (‖f‖²_{A²(w)})^n,       r ≤ 1/√n,
//! ```
//!
//! together with a first-order sharpness probe around `r = 1/√n` and a
//! zero-free variant for `f = e^φ` with polynomial `φ` and real exponent
//! `q ≥ 1`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sum::KahanSum;
use crate::weights::{moment_sequence, MomentSequence, RadialWeight};

/// A finitely truncated power series `Σ_{k=0}^{K} a_k z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput(
                "power series needs at least the constant coefficient".into(),
            ));
        }
        if let Some(bad) = coeffs.iter().find(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "power series coefficient {bad} is not finite"
            )));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Parses a comma- or whitespace-separated list of real coefficients,
    /// constant term first: `"1,0.5,0.25"`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut coeffs = Vec::new();
        for piece in text.split(|c: char| c == ',' || c.is_whitespace()) {
            if piece.is_empty() {
                continue;
            }
            let v: f64 = piece.parse().map_err(|_| {
                Error::InvalidInput(format!("cannot parse coefficient '{piece}'"))
            })?;
            coeffs.push(v);
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("empty coefficient list".into()));
        }
        Self::from_real(&coeffs)
    }

    /// Truncation degree `K` (index of the last stored coefficient).
    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// The coefficients as nonnegative reals, which the inequality checks
    /// require (the reduction behind the checks assumes `a_k ≥ 0`).
    fn nonneg_real_coeffs(&self) -> Result<Vec<f64>> {
        self.coeffs
            .iter()
            .map(|c| {
                if c.im == 0.0 && c.re >= 0.0 {
                    Ok(c.re)
                } else {
                    Err(Error::InvalidInput(format!(
                        "inequality checks need nonnegative real coefficients, got {c}"
                    )))
                }
            })
            .collect()
    }
}

/// Outcome of a single inequality instance `lhs ≤ rhs`.
///
/// `truncation_bound` is a conservative bound on the numerical error in
/// `gap`: series tails cut at the truncation degree, moment quadrature error
/// bounds, and floating-point accumulation. The verdict tolerates a gap this
/// far below zero, so exact-equality cases do not flap on rounding.
#[derive(Debug, Clone, Copy)]
pub struct InequalityVerdict {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`; nonnegative when the inequality holds.
    pub gap: f64,
    pub holds: bool,
    pub truncation_bound: f64,
}

impl InequalityVerdict {
    pub fn new(lhs: f64, rhs: f64, truncation_bound: f64) -> Self {
        let gap = rhs - lhs;
        Self {
            lhs,
            rhs,
            gap,
            holds: gap >= -truncation_bound,
            truncation_bound,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "holds": self.holds,
            "truncation_bound": self.truncation_bound,
        })
    }
}

/// Floating-point slack for a verdict assembled from roughly `ops`
/// elementary accumulations on values of size `|lhs| + |rhs|`.
fn fp_slack(lhs: f64, rhs: f64, ops: usize) -> f64 {
    f64::EPSILON * (lhs.abs() + rhs.abs()) * (ops as f64 + 8.0)
}

/// `f_r(z) = f(rz)`: coefficient `k` becomes `a_k r^k`.
pub fn dilate(f: &PowerSeries, r: f64) -> Result<PowerSeries> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "dilation radius must lie in (0, 1], got {r}"
        )));
    }
    let mut rk = 1.0;
    let coeffs = f
        .coeffs
        .iter()
        .map(|&a| {
            let c = a * rk;
            rk *= r;
            c
        })
        .collect();
    PowerSeries::new(coeffs)
}

fn convolve(a: &[Complex64], b: &[Complex64], k_out: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); k_out + 1];
    for (i, &ai) in a.iter().enumerate().take(k_out + 1) {
        for (j, &bj) in b.iter().enumerate() {
            if i + j > k_out {
                break;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Coefficients of `f^n` through degree `k_out`, by repeated convolution.
/// Exact (up to rounding) for polynomial `f` whenever `k_out ≥ n·deg(f)`.
pub fn series_power(f: &PowerSeries, n: u32, k_out: usize) -> Result<PowerSeries> {
    if n == 0 {
        return Err(Error::InvalidInput("series_power needs n ≥ 1".into()));
    }
    let mut acc: Vec<Complex64> = f.coeffs.iter().copied().take(k_out + 1).collect();
    acc.resize(k_out + 1, Complex64::new(0.0, 0.0));
    for _ in 1..n {
        acc = convolve(&acc, &f.coeffs, k_out);
    }
    PowerSeries::new(acc)
}

/// `‖f‖²_{A²(w)} = Σ |a_k|² h_{2k}` (Parseval). Exact for polynomials given
/// exact moments; fails if the moment sequence is shorter than the series.
pub fn bergman_norm_sq(f: &PowerSeries, h: &MomentSequence) -> Result<f64> {
    Ok(norm_sq_with_error(f, h)?.0)
}

/// Norm together with the error inherited from the moments' bounds.
fn norm_sq_with_error(f: &PowerSeries, h: &MomentSequence) -> Result<(f64, f64)> {
    h.require(f.truncation())?;
    let mut sum = KahanSum::new();
    let mut err = 0.0;
    for (k, a) in f.coeffs.iter().enumerate() {
        let w = a.norm_sqr();
        sum.add(w * h.h(k));
        err += w * h.error_bound(k);
    }
    Ok((sum.value(), err))
}

/// Checks `‖(f_r)^n‖² ≤ (‖f‖²)^n` for a polynomial `f` with nonnegative real
/// coefficients. Moments are computed up to index `n·deg(f)` at tolerance
/// `tol`.
pub fn weissler_even_check(
    f: &PowerSeries,
    w: &RadialWeight,
    n: u32,
    r: f64,
    tol: f64,
) -> Result<InequalityVerdict> {
    if n == 0 {
        return Err(Error::InvalidInput("exponent n must be ≥ 1".into()));
    }
    f.nonneg_real_coeffs()?;
    let deg = f.truncation();
    let h = moment_sequence(w, n as usize * deg, tol)?;
    weissler_even_check_with_moments(f, &h, n, r)
}

/// Same check against a precomputed moment sequence (must extend to index
/// `n·deg(f)`); useful when sweeping many `f` over one weight.
pub fn weissler_even_check_with_moments(
    f: &PowerSeries,
    h: &MomentSequence,
    n: u32,
    r: f64,
) -> Result<InequalityVerdict> {
    if n == 0 {
        return Err(Error::InvalidInput("exponent n must be ≥ 1".into()));
    }
    f.nonneg_real_coeffs()?;
    let deg = f.truncation();
    let k_out = n as usize * deg;
    let fr = dilate(f, r)?;
    let powered = series_power(&fr, n, k_out)?;
    let (lhs, lhs_err) = norm_sq_with_error(&powered, h)?;
    let (base, base_err) = norm_sq_with_error(f, h)?;
    let rhs = base.powi(n as i32);
    let rhs_err = n as f64 * base.powi(n as i32 - 1) * base_err;
    let bound = lhs_err + rhs_err + fp_slack(lhs, rhs, k_out + deg);
    Ok(InequalityVerdict::new(lhs, rhs, bound))
}

/// One row of the sharpness probe around the critical radius.
#[derive(Debug, Clone, Copy)]
pub struct SharpnessRow {
    pub eps: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    /// First-order prediction `(n − n²r²)·ε²·h_2` for the gap; its sign
    /// flips exactly at `r = 1/√n`.
    pub leading_order_gap: f64,
}

/// Probes the inequality with the test function `f = 1 + εz` across
/// `eps_grid`, reporting both the computed gap and its first-order
/// prediction. For small ε these agree in sign on either side of `1/√n`.
pub fn sharpness_probe(
    w: &RadialWeight,
    n: u32,
    r: f64,
    eps_grid: &[f64],
    tol: f64,
) -> Result<Vec<SharpnessRow>> {
    if eps_grid.is_empty() {
        return Err(Error::InvalidInput("eps grid is empty".into()));
    }
    for &eps in eps_grid {
        if !(eps > 0.0 && eps <= 0.2) {
            return Err(Error::InvalidInput(format!(
                "probe amplitude must lie in (0, 0.2], got {eps}"
            )));
        }
    }
    if n == 0 {
        return Err(Error::InvalidInput("exponent n must be ≥ 1".into()));
    }
    let h = moment_sequence(w, n as usize, tol)?;
    let h2 = h.h(1);
    let mut rows = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let f = PowerSeries::from_real(&[1.0, eps])?;
        let verdict = weissler_even_check_with_moments(&f, &h, n, r)?;
        let nn = n as f64;
        rows.push(SharpnessRow {
            eps,
            lhs: verdict.lhs,
            rhs: verdict.rhs,
            gap: verdict.gap,
            leading_order_gap: (nn - nn * nn * r * r) * eps * eps * h2,
        });
    }
    Ok(rows)
}

/// Exp-composition coefficients `g[n][k] = [zⁿ] φᵏ/k!` for `0 ≤ n ≤ n_max`,
/// `0 ≤ k ≤ k_max`. These are the building blocks of `e^{φ} = Σ_k φᵏ/k!`:
/// the degree-n coefficient of `e^{qφ}` is `Σ_k qᵏ g[n][k]`.
///
/// Requires nonnegative real coefficients. `φᵏ/k!` is built iteratively as
/// `(φ^{k−1}/(k−1)!)·φ/k`, so no factorial ever materializes.
pub fn exp_composition_coeffs(
    phi: &PowerSeries,
    n_max: usize,
    k_max: usize,
) -> Result<Vec<Vec<f64>>> {
    let a = phi.nonneg_real_coeffs()?;
    let mut g = vec![vec![0.0; k_max + 1]; n_max + 1];
    // q_k holds the coefficients of φ^k / k! through degree n_max.
    let mut qk = vec![0.0; n_max + 1];
    qk[0] = 1.0;
    g[0][0] = 1.0;
    for k in 1..=k_max {
        let mut next = vec![0.0; n_max + 1];
        for (i, &ci) in qk.iter().enumerate() {
            if ci == 0.0 {
                continue;
            }
            for (j, &aj) in a.iter().enumerate() {
                if i + j > n_max {
                    break;
                }
                next[i + j] += ci * aj;
            }
        }
        for c in &mut next {
            *c /= k as f64;
        }
        qk = next;
        for (n, row) in g.iter_mut().enumerate() {
            row[k] = qk[n];
        }
    }
    Ok(g)
}

/// Checks the zero-free form of the contractivity inequality for
/// `f = e^{φ}` with polynomial `φ` (nonnegative real coefficients) and real
/// `q ≥ 1`:
///
/// ```text
///     Σ_n q^{−n} ([zⁿ] e^{qφ})² h_{2n}  ≤  ( Σ_n ([zⁿ] e^{φ})² h_{2n} )^q .
/// ```
///
/// Both series are cut at degree `n_max`. The constant term `a_0` is removed
/// and restored analytically (it scales both sides by `e^{2q a_0}`), which
/// makes every inner coefficient sum finite: with `a_0 = 0`, `[zⁿ] φᵏ/k!`
/// vanishes for `k > n`. For that reason `k_max ≥ n_max` is required — a
/// smaller `k_max` would silently truncate exact sums. The reported bound
/// covers the degree tail (via the coefficient bound `[zⁿ]e^{qφ̃} ≤
/// e^{qφ̃(2)}·2^{−n}`), moment error, and rounding.
pub fn zero_free_weissler_check(
    phi: &PowerSeries,
    h: &MomentSequence,
    q: f64,
    n_max: usize,
    k_max: usize,
) -> Result<InequalityVerdict> {
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "exponent q must be a finite real ≥ 1, got {q}"
        )));
    }
    if k_max < n_max {
        return Err(Error::InvalidInput(format!(
            "k_max = {k_max} must be at least n_max = {n_max} for exact coefficient sums"
        )));
    }
    h.require(n_max)?;
    let a = phi.nonneg_real_coeffs()?;
    let a0 = a[0];
    let mut tilde = a.clone();
    tilde[0] = 0.0;
    let tilde_series = PowerSeries::from_real(&tilde)?;
    let g = exp_composition_coeffs(&tilde_series, n_max, n_max)?;

    // c_n(q) = Σ_k q^k g[n][k] = [z^n] e^{q φ̃}; only k ≤ n contributes.
    let coeff_at = |q: f64| -> Vec<f64> {
        (0..=n_max)
            .map(|n| {
                let mut sum = KahanSum::new();
                let mut qk = 1.0;
                for &gnk in &g[n][..=n] {
                    sum.add(qk * gnk);
                    qk *= q;
                }
                sum.value()
            })
            .collect()
    };
    let cq = coeff_at(q);
    let c1 = coeff_at(1.0);

    let mut lhs_core = KahanSum::new();
    let mut lhs_mom_err = 0.0;
    let mut q_pow_neg = 1.0;
    for (n, &c) in cq.iter().enumerate() {
        lhs_core.add(q_pow_neg * c * c * h.h(n));
        lhs_mom_err += q_pow_neg * c * c * h.error_bound(n);
        q_pow_neg /= q;
    }
    let mut base = KahanSum::new();
    let mut base_err = 0.0;
    for (n, &c) in c1.iter().enumerate() {
        base.add(c * c * h.h(n));
        base_err += c * c * h.error_bound(n);
    }
    let s = base.value();

    let scale = (2.0 * q * a0).exp();
    let lhs = scale * lhs_core.value();
    let rhs = scale * s.powf(q);

    // Degree-tail bounds, in logs to survive large φ̃(2) gracefully:
    //   Σ_{n>N} c_n(q)² h_{2n} q^{−n} ≤ e^{2qφ̃(2)} Σ_{n>N} 4^{−n} = e^{2qφ̃(2)} 4^{−N}/3.
    let phi_at_2: f64 = tilde
        .iter()
        .enumerate()
        .map(|(k, &ak)| ak * 2f64.powi(k as i32))
        .sum();
    let ln4 = 4f64.ln();
    let ln3 = 3f64.ln();
    let lhs_tail = (2.0 * q * (a0 + phi_at_2) - n_max as f64 * ln4 - ln3).exp();
    let s_tail = (2.0 * phi_at_2 - n_max as f64 * ln4 - ln3).exp();
    let rhs_tail = q * scale * (s + s_tail).powf(q - 1.0) * s_tail;
    let rhs_mom_err = q * scale * s.powf(q - 1.0) * base_err;

    let bound = lhs_tail
        + rhs_tail
        + scale * lhs_mom_err
        + rhs_mom_err
        + fp_slack(lhs, rhs, n_max * n_max / 2 + n_max);
    if !bound.is_finite() {
        return Err(Error::InvalidInput(format!(
            "truncation bound is not finite at n_max = {n_max}; increase the series cutoff"
        )));
    }
    Ok(InequalityVerdict::new(lhs, rhs, bound))
}
