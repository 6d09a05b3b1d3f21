//! Radial weights on the unit disk and their moment sequences.
//!
//! A radial weight assigns density `w(rho)` to the circle of radius `rho`.
//! Everything downstream is driven by the moments
//!
//! ```text
//!     h_m = \int_0^1 rho^{m+1} w(rho) d rho,
//! ```
//!
//! normalized so that `h_0 = 1`. Parseval-style norm computations only ever
//! touch the even-order moments, so [`MomentSequence`] stores `h_{2k}`
//! indexed by `k`.
//!
//! Three families have closed-form moments and serve as the test bed:
//!
//! * `classical(alpha)`: `w(rho) = 2(alpha-1)(1-rho^2)^{alpha-2}`, `alpha > 1`,
//!   with `h_{2n} = Gamma(alpha) n! / Gamma(alpha+n)`;
//! * `power(m)`: `w(rho) = (m+2) rho^m`, `m >= 0`, with
//!   `h_{2n} = (2+m)/(2+m+2n)`;
//! * `counterexample`: the step weight equal to `3/(2 rho)` on `[0, 1/2]`
//!   and `1/(2 rho)` beyond, with `h_m = (1 + 2^{-m}) / (2(1+m))`. Its
//!   moment ratios oscillate, which is exactly what makes it useful.
//!
//! Arbitrary weights enter through [`RadialWeight::custom`] or a tabulated
//! `(rho, w)` file; those are normalized by their raw `h_0` and integrated
//! numerically.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature;

/// Default absolute tolerance for numerically computed moments.
pub const DEFAULT_TOL: f64 = 1e-12;

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Form {
    Classical { alpha: f64 },
    Power { exponent: f64 },
    Counterexample,
    Custom {
        eval: Evaluator,
        /// Multiplier that makes the raw zeroth moment equal to one.
        scale: f64,
        /// Points in (0, 1) where the integrand is not smooth.
        split_at: Vec<f64>,
        label: String,
    },
}

/// A nonnegative radial weight on the unit disk, normalized so `h_0 = 1`.
///
/// Cloning is cheap and values can be shared across threads.
#[derive(Clone)]
pub struct RadialWeight {
    form: Form,
}

impl fmt::Debug for RadialWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RadialWeight({})", self.description())
    }
}

impl RadialWeight {
    /// `w(rho) = 2(alpha-1)(1-rho^2)^{alpha-2}` for `alpha > 1`.
    pub fn classical(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 1.0) {
            return Err(Error::InvalidInput(format!(
                "classical weight needs alpha > 1, got {alpha}"
            )));
        }
        Ok(Self {
            form: Form::Classical { alpha },
        })
    }

    /// `w(rho) = (m+2) rho^m` for `m >= 0`.
    pub fn power(exponent: f64) -> Result<Self> {
        if !(exponent.is_finite() && exponent >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "power weight needs exponent >= 0, got {exponent}"
            )));
        }
        Ok(Self {
            form: Form::Power { exponent },
        })
    }

    /// The step weight `3/(2 rho)` on `[0, 1/2]`, `1/(2 rho)` on `(1/2, 1]`.
    pub fn counterexample() -> Self {
        Self {
            form: Form::Counterexample,
        }
    }

    /// Wraps an arbitrary evaluator, rescaled so the zeroth moment is one.
    ///
    /// `singularity_hint` marks an integrable singularity at `rho = 0`, which
    /// seeds extra panel boundaries near the origin. The normalization
    /// integral runs at [`DEFAULT_TOL`]; it fails if the weight is negative,
    /// non-integrable, or evaluates to NaN.
    pub fn custom<F>(eval: F, singularity_hint: bool) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let split_at = if singularity_hint {
            vec![1e-6, 1e-3, 1e-1]
        } else {
            Vec::new()
        };
        Self::custom_inner(Arc::new(eval), split_at, "custom".to_string())
    }

    /// Piecewise-linear weight through the given `(rho, w)` knots.
    ///
    /// Radii must be strictly increasing inside (0, 1) and values
    /// nonnegative; the interpolant extends as a constant beyond the first
    /// and last knots. Normalized like [`RadialWeight::custom`].
    pub fn from_table(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidInput(
                "table weight needs at least two (rho, w) points".into(),
            ));
        }
        for &(rho, w) in points {
            if !(rho.is_finite() && rho > 0.0 && rho < 1.0) {
                return Err(Error::InvalidInput(format!(
                    "table radius {rho} outside (0, 1)"
                )));
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::InvalidInput(format!(
                    "table weight value {w} must be finite and nonnegative"
                )));
            }
        }
        for pair in points.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(Error::InvalidInput(format!(
                    "table radii must be strictly increasing ({} then {})",
                    pair[0].0, pair[1].0
                )));
            }
        }
        let knots: Vec<(f64, f64)> = points.to_vec();
        let split_at: Vec<f64> = knots.iter().map(|p| p.0).collect();
        let eval = move |rho: f64| -> f64 {
            if rho <= knots[0].0 {
                return knots[0].1;
            }
            if rho >= knots[knots.len() - 1].0 {
                return knots[knots.len() - 1].1;
            }
            let idx = knots.partition_point(|p| p.0 <= rho);
            let (r0, w0) = knots[idx - 1];
            let (r1, w1) = knots[idx];
            w0 + (w1 - w0) * (rho - r0) / (r1 - r0)
        };
        Self::custom_inner(Arc::new(eval), split_at, "table".to_string())
    }

    fn custom_inner(eval: Evaluator, split_at: Vec<f64>, label: String) -> Result<Self> {
        let raw = quadrature::integrate(
            |rho| rho * eval(rho),
            0.0,
            1.0,
            DEFAULT_TOL,
            &split_at,
        )?;
        if !(raw.value.is_finite() && raw.value > 0.0) {
            return Err(Error::InvalidInput(format!(
                "custom weight has unusable zeroth moment {}",
                raw.value
            )));
        }
        Ok(Self {
            form: Form::Custom {
                eval,
                scale: 1.0 / raw.value,
                split_at,
                label,
            },
        })
    }

    /// Weight density at radius `rho` (after normalization for custom kinds).
    pub fn evaluate(&self, rho: f64) -> f64 {
        match &self.form {
            Form::Classical { alpha } => 2.0 * (alpha - 1.0) * (1.0 - rho * rho).powf(alpha - 2.0),
            Form::Power { exponent } => (exponent + 2.0) * rho.powf(*exponent),
            Form::Counterexample => {
                if rho <= 0.5 {
                    1.5 / rho
                } else {
                    0.5 / rho
                }
            }
            Form::Custom { eval, scale, .. } => scale * eval(rho),
        }
    }

    /// Short human-readable name, also used in CSV output.
    pub fn description(&self) -> String {
        match &self.form {
            Form::Classical { alpha } => format!("classical:alpha={alpha}"),
            Form::Power { exponent } => format!("power:m={exponent}"),
            Form::Counterexample => "counterexample".to_string(),
            Form::Custom { label, .. } => label.clone(),
        }
    }

    fn split_points(&self) -> Vec<f64> {
        match &self.form {
            Form::Counterexample => vec![0.5],
            Form::Custom { split_at, .. } => split_at.clone(),
            _ => Vec::new(),
        }
    }

    fn closed_form_moment(&self, m: u32) -> Option<f64> {
        match &self.form {
            Form::Classical { alpha } => {
                if m.is_multiple_of(2) {
                    // h_{2n} = Gamma(alpha) n! / Gamma(alpha + n), computed by
                    // the exact ratio recurrence h_{2n}/h_{2(n-1)} = n/(alpha+n-1).
                    let n = m / 2;
                    let mut h = 1.0;
                    for k in 1..=n {
                        h *= f64::from(k) / (alpha + f64::from(k) - 1.0);
                    }
                    Some(h)
                } else {
                    // Beta integral: h_m = Gamma(alpha) Gamma(m/2 + 1) / Gamma(alpha + m/2).
                    let half = f64::from(m) / 2.0;
                    match (
                        gamma_function(*alpha),
                        gamma_function(half + 1.0),
                        gamma_function(alpha + half),
                    ) {
                        (Ok(ga), Ok(gm), Ok(gam)) => Some(ga * gm / gam),
                        _ => None,
                    }
                }
            }
            Form::Power { exponent } => Some((2.0 + exponent) / (2.0 + exponent + f64::from(m))),
            Form::Counterexample => {
                Some((1.0 + 0.5f64.powi(m as i32)) / (2.0 * (1.0 + f64::from(m))))
            }
            Form::Custom { .. } => None,
        }
    }
}

/// How a moment value was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance {
    ClosedForm,
    Quadrature { abs_error_bound: f64 },
}

impl Provenance {
    pub fn error_bound(&self) -> f64 {
        match self {
            Provenance::ClosedForm => 0.0,
            Provenance::Quadrature { abs_error_bound } => *abs_error_bound,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Provenance::ClosedForm => "closed-form",
            Provenance::Quadrature { .. } => "quadrature",
        }
    }
}

/// A single moment together with its provenance.
#[derive(Debug, Clone, Copy)]
pub struct MomentValue {
    pub value: f64,
    pub provenance: Provenance,
}

/// `h_m` for the given weight, preferring the closed form and falling back
/// to adaptive quadrature at absolute tolerance `tol`.
pub fn moment(w: &RadialWeight, m: u32, tol: f64) -> Result<MomentValue> {
    if let Some(value) = w.closed_form_moment(m) {
        return Ok(MomentValue {
            value,
            provenance: Provenance::ClosedForm,
        });
    }
    moment_quadrature(w, m, tol)
}

/// `h_m` by numerical integration, regardless of whether a closed form
/// exists. This is the cross-check route for the named families.
pub fn moment_quadrature(w: &RadialWeight, m: u32, tol: f64) -> Result<MomentValue> {
    let q = match &w.form {
        Form::Classical { alpha } => {
            // In rho the integrand has an endpoint singularity at 1 whenever
            // alpha < 2, and bisection cannot certify 1e-12 there in f64.
            // Substituting u = rho^2, v = (1-u)^{alpha-1} absorbs the weight:
            //     h_m = \int_0^1 (1 - v^{1/(alpha-1)})^{m/2} dv,
            // a bounded integrand whose only rough points sit at the ends.
            let inv = 1.0 / (alpha - 1.0);
            let half_m = f64::from(m) / 2.0;
            quadrature::integrate(
                |v| (1.0 - v.powf(inv)).max(0.0).powf(half_m),
                0.0,
                1.0,
                tol,
                &[],
            )?
        }
        _ => {
            let splits = w.split_points();
            quadrature::integrate(
                |rho| rho.powi(m as i32 + 1) * w.evaluate(rho),
                0.0,
                1.0,
                tol,
                &splits,
            )?
        }
    };
    Ok(MomentValue {
        value: q.value,
        provenance: Provenance::Quadrature {
            abs_error_bound: q.error_bound,
        },
    })
}

/// Even-order moments `h_{2k}` for `k = 0..=max_index`.
///
/// Entries keep their individual provenance. Custom weights are normalized
/// by the computed `h_0`, so `h[0] == 1` exactly in every case.
pub fn moment_sequence(w: &RadialWeight, max_index: usize, tol: f64) -> Result<MomentSequence> {
    let mut values = Vec::with_capacity(max_index + 1);
    let mut provenance = Vec::with_capacity(max_index + 1);
    for k in 0..=max_index {
        let m = moment(w, 2 * k as u32, tol)?;
        values.push(m.value);
        provenance.push(m.provenance);
    }

    let h0 = values[0];
    if (h0 - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidInput(format!(
            "weight is not normalized: computed h_0 = {h0}"
        )));
    }
    if h0 != 1.0 {
        let bound0 = provenance[0].error_bound();
        for k in 1..values.len() {
            let ratio = values[k] / h0;
            if let Provenance::Quadrature { abs_error_bound } = &mut provenance[k] {
                *abs_error_bound = (*abs_error_bound + ratio.abs() * bound0) / h0.abs();
            }
            values[k] = ratio;
        }
        values[0] = 1.0;
    }

    for k in 0..max_index {
        let slack = provenance[k].error_bound() + provenance[k + 1].error_bound() + 1e-15;
        if !values[k + 1].is_finite() || values[k + 1] <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "moment h_{} = {} is not positive; weight must be nonnegative with mass near 1",
                2 * (k + 1),
                values[k + 1]
            )));
        }
        if values[k + 1] > values[k] + slack {
            return Err(Error::InvalidInput(format!(
                "moments must decrease: h_{} = {} exceeds h_{} = {}",
                2 * (k + 1),
                values[k + 1],
                2 * k,
                values[k]
            )));
        }
    }

    Ok(MomentSequence { values, provenance })
}

/// Even-order moment sequence `h_{2k}`, `k = 0..=max_index`, with `h_0 = 1`,
/// positive and nonincreasing entries.
#[derive(Debug, Clone)]
pub struct MomentSequence {
    values: Vec<f64>,
    provenance: Vec<Provenance>,
}

impl MomentSequence {
    /// Wraps an externally supplied sequence (tests, synthetic sequences).
    /// Validates positivity, normalization, and monotonicity.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("moment sequence is empty".into()));
        }
        if (values[0] - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "moment sequence must start at h_0 = 1, got {}",
                values[0]
            )));
        }
        for (k, &v) in values.iter().enumerate() {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "moment h_{} = {v} must be finite and positive",
                    2 * k
                )));
            }
        }
        for pair in values.windows(2) {
            if pair[1] > pair[0] * (1.0 + 1e-12) {
                return Err(Error::InvalidInput(format!(
                    "moment sequence must be nonincreasing ({} then {})",
                    pair[0], pair[1]
                )));
            }
        }
        let provenance = vec![Provenance::ClosedForm; values.len()];
        Ok(Self { values, provenance })
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    /// `h_{2k}`. Panics if `k` exceeds [`MomentSequence::max_index`]; the
    /// checking operations validate lengths up front.
    pub fn h(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn get(&self, k: usize) -> Option<f64> {
        self.values.get(k).copied()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    pub fn error_bound(&self, k: usize) -> f64 {
        self.provenance[k].error_bound()
    }

    pub fn max_error_bound(&self) -> f64 {
        self.provenance
            .iter()
            .map(Provenance::error_bound)
            .fold(0.0, f64::max)
    }

    /// `h_{2k}^2 <= h_{2(k-1)} h_{2(k+1)}` margins (Cauchy-Schwarz in
    /// `L^2(w)`), one entry per interior index `k = 1..max_index`.
    pub fn cauchy_margins(&self) -> Vec<f64> {
        self.values
            .windows(3)
            .map(|t| t[0] * t[2] - t[1] * t[1])
            .collect()
    }

    /// Ensures index `k` is available.
    pub fn require(&self, k: usize) -> Result<()> {
        if k > self.max_index() {
            Err(Error::SequenceTooShort {
                required: k,
                available: self.max_index(),
            })
        } else {
            Ok(())
        }
    }
}

// Lanczos approximation, g = 7, 9 terms. Relative error stays below 1e-13
// on the positive axis, comfortably past the 12 significant digits needed.
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for positive real arguments.
pub fn gamma_function(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::InvalidInput(format!(
            "gamma_function needs x > 0, got {x}"
        )));
    }
    if x > 170.62 {
        return Err(Error::InvalidInput(format!(
            "gamma_function({x}) overflows f64"
        )));
    }
    if x < 0.5 {
        // Reflection keeps the Lanczos series in its accurate range.
        let pi = std::f64::consts::PI;
        return Ok(pi / ((pi * x).sin() * gamma_function(1.0 - x)?));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + 7.5;
    Ok((2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc)
}

/// Parses the weight grammar used by the command line and config files:
/// `classical:alpha=<float>`, `power:m=<float>`, `counterexample`, or
/// `table:<path>` pointing at a CSV of `(rho, w)` pairs.
pub fn parse_weight_spec(spec: &str) -> Result<RadialWeight> {
    let spec = spec.trim();
    if spec == "counterexample" {
        return Ok(RadialWeight::counterexample());
    }
    if let Some(rest) = spec.strip_prefix("classical:") {
        let alpha = parse_named_param(rest, "alpha")?;
        return RadialWeight::classical(alpha);
    }
    if let Some(rest) = spec.strip_prefix("power:") {
        let m = parse_named_param(rest, "m")?;
        return RadialWeight::power(m);
    }
    if let Some(path) = spec.strip_prefix("table:") {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidInput(format!("cannot read weight table {path}: {e}"))
        })?;
        let points = parse_table_text(&text)?;
        return RadialWeight::from_table(&points);
    }
    Err(Error::InvalidInput(format!(
        "unknown weight spec '{spec}' (expected classical:alpha=<v>, power:m=<v>, counterexample, or table:<path>)"
    )))
}

fn parse_named_param(rest: &str, name: &str) -> Result<f64> {
    let Some(value) = rest.strip_prefix(name).and_then(|r| r.strip_prefix('=')) else {
        return Err(Error::InvalidInput(format!(
            "expected {name}=<float>, got '{rest}'"
        )));
    };
    value.trim().parse::<f64>().map_err(|_| {
        Error::InvalidInput(format!("cannot parse {name} value '{}'", value.trim()))
    })
}

/// Parses `rho,w` lines; a single non-numeric first line is treated as a
/// header. Blank lines are skipped.
pub fn parse_table_text(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split(',').map(str::trim);
        let (a, b) = (cols.next(), cols.next());
        let parsed = match (a, b) {
            (Some(a), Some(b)) => a.parse::<f64>().ok().zip(b.parse::<f64>().ok()),
            _ => None,
        };
        match parsed {
            Some(pair) => points.push(pair),
            None if lineno == 0 => continue, // header row
            None => {
                return Err(Error::InvalidInput(format!(
                    "cannot parse weight table line {}: '{line}'",
                    lineno + 1
                )))
            }
        }
    }
    if points.is_empty() {
        return Err(Error::InvalidInput("weight table has no data rows".into()));
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT_PI: f64 = 1.772_453_850_905_516;

    #[test]
    fn gamma_matches_integer_factorials() {
        let mut fact = 1.0;
        for n in 1..=20u32 {
            // Gamma(n) = (n-1)!
            let g = gamma_function(f64::from(n)).unwrap();
            assert!(
                (g - fact).abs() <= 1e-12 * fact,
                "Gamma({n}) = {g}, want {fact}"
            );
            fact *= f64::from(n);
        }
    }

    #[test]
    fn gamma_matches_half_integers() {
        // Gamma(1/2) = sqrt(pi), then climb by the recurrence.
        let mut exact = SQRT_PI;
        let mut x = 0.5;
        while x < 30.0 {
            let g = gamma_function(x).unwrap();
            assert!(
                ((g - exact) / exact).abs() < 1e-12,
                "Gamma({x}) = {g}, want {exact}"
            );
            exact *= x;
            x += 1.0;
        }
        // Spot value: Gamma(3.5) = 15 sqrt(pi) / 8.
        let g = gamma_function(3.5).unwrap();
        assert!((g - 15.0 * SQRT_PI / 8.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_rejects_nonpositive_and_huge() {
        assert!(gamma_function(0.0).is_err());
        assert!(gamma_function(-3.5).is_err());
        assert!(gamma_function(200.0).is_err());
    }

    #[test]
    fn classical_closed_moments() {
        // alpha = 2 is the flat weight w = 2: h_{2n} = 1/(n+1).
        let w = RadialWeight::classical(2.0).unwrap();
        let h = moment_sequence(&w, 3, DEFAULT_TOL).unwrap();
        assert_eq!(h.values(), &[1.0, 0.5, 1.0 / 3.0, 0.25]);
        // alpha = 3: h_{2n} = 2/((n+1)(n+2)).
        let w = RadialWeight::classical(3.0).unwrap();
        let h = moment_sequence(&w, 4, DEFAULT_TOL).unwrap();
        for (n, &v) in h.values().iter().enumerate() {
            let exact = 2.0 / ((n as f64 + 1.0) * (n as f64 + 2.0));
            assert!((v - exact).abs() < 1e-15);
        }
    }

    #[test]
    fn counterexample_closed_moments() {
        let w = RadialWeight::counterexample();
        assert_eq!(moment(&w, 0, DEFAULT_TOL).unwrap().value, 1.0);
        assert_eq!(moment(&w, 2, DEFAULT_TOL).unwrap().value, 5.0 / 24.0);
        let h = moment_sequence(&w, 2, DEFAULT_TOL).unwrap();
        assert_eq!(h.values(), &[1.0, 5.0 / 24.0, 17.0 / 160.0]);
    }

    #[test]
    fn power_zero_equals_classical_two() {
        let a = moment_sequence(&RadialWeight::power(0.0).unwrap(), 40, DEFAULT_TOL).unwrap();
        let b = moment_sequence(&RadialWeight::classical(2.0).unwrap(), 40, DEFAULT_TOL).unwrap();
        for k in 0..=40 {
            assert!((a.h(k) - b.h(k)).abs() <= 1e-11);
        }
    }

    #[test]
    fn custom_weight_is_normalized() {
        // w(rho) = 4 rho has raw h_0 = 4/3; normalized it becomes 3 rho,
        // so h_2 = \int 3 rho^4 = 3/5.
        let w = RadialWeight::custom(|rho| 4.0 * rho, false).unwrap();
        let h = moment_sequence(&w, 1, DEFAULT_TOL).unwrap();
        assert_eq!(h.h(0), 1.0);
        assert!((h.h(1) - 0.6).abs() < 1e-11);
        assert!(matches!(
            h.provenance()[1],
            Provenance::Quadrature { .. }
        ));
    }

    #[test]
    fn custom_rejects_non_integrable() {
        let err = RadialWeight::custom(|rho| 1.0 / (rho * rho), false).unwrap_err();
        assert!(matches!(err, Error::QuadratureNoConvergence { .. }));
    }

    #[test]
    fn custom_rejects_nan_evaluator() {
        let err = RadialWeight::custom(|_| f64::NAN, false).unwrap_err();
        assert!(matches!(err, Error::NonFiniteEvaluation { .. }));
    }

    #[test]
    fn table_weight_interpolates_and_normalizes() {
        // Constant table w = 5 normalizes to the flat weight.
        let w = RadialWeight::from_table(&[(0.1, 5.0), (0.9, 5.0)]).unwrap();
        let h = moment_sequence(&w, 2, DEFAULT_TOL).unwrap();
        assert!((h.h(1) - 0.5).abs() < 1e-10);
        assert!((h.h(2) - 1.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn table_validation() {
        assert!(RadialWeight::from_table(&[(0.3, 1.0)]).is_err());
        assert!(RadialWeight::from_table(&[(0.5, 1.0), (0.5, 2.0)]).is_err());
        assert!(RadialWeight::from_table(&[(0.0, 1.0), (0.5, 2.0)]).is_err());
        assert!(RadialWeight::from_table(&[(0.2, -1.0), (0.5, 2.0)]).is_err());
    }

    #[test]
    fn weight_spec_grammar() {
        assert!(parse_weight_spec("counterexample").is_ok());
        assert!(parse_weight_spec("classical:alpha=2.5").is_ok());
        assert!(parse_weight_spec("power:m=0").is_ok());
        assert!(parse_weight_spec("classical:alpha=1").is_err());
        assert!(parse_weight_spec("classical:beta=2").is_err());
        assert!(parse_weight_spec("power:m=-1").is_err());
        assert!(parse_weight_spec("gaussian").is_err());
        assert!(parse_weight_spec("table:/no/such/file.csv").is_err());
    }

    #[test]
    fn table_text_parsing() {
        let pts = parse_table_text("rho,w\n0.1,1.0\n0.5,2.0\n").unwrap();
        assert_eq!(pts, vec![(0.1, 1.0), (0.5, 2.0)]);
        assert!(parse_table_text("rho,w\n0.1,oops\n").is_err());
        assert!(parse_table_text("\n\n").is_err());
    }

    #[test]
    fn from_values_validation() {
        assert!(MomentSequence::from_values(vec![]).is_err());
        assert!(MomentSequence::from_values(vec![0.9]).is_err());
        assert!(MomentSequence::from_values(vec![1.0, -0.5]).is_err());
        assert!(MomentSequence::from_values(vec![1.0, 0.5, 0.7]).is_err());
        let h = MomentSequence::from_values(vec![1.0, 0.5, 0.25]).unwrap();
        assert_eq!(h.max_index(), 2);
        assert!(h.require(2).is_ok());
        assert!(matches!(
            h.require(3),
            Err(Error::SequenceTooShort {
                required: 3,
                available: 2
            })
        ));
    }

    #[test]
    fn cauchy_margins_nonnegative_for_families() {
        for w in [
            RadialWeight::classical(1.5).unwrap(),
            RadialWeight::classical(4.0).unwrap(),
            RadialWeight::power(2.5).unwrap(),
            RadialWeight::counterexample(),
        ] {
            let h = moment_sequence(&w, 30, DEFAULT_TOL).unwrap();
            for (k, m) in h.cauchy_margins().iter().enumerate() {
                assert!(
                    *m >= -1e-13,
                    "{}: Cauchy margin {m} at k = {}",
                    w.description(),
                    k + 1
                );
            }
        }
    }
}
