//! Information-exchange bounds: exact clique/degree counts, asymptotic
//! rates, and the per-element cost baseline.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::params::ParamsSpec;

/// Largest `n` accepted by [`chromatic_bounds`].
pub const MAX_BOUNDS_N: usize = 512;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BoundsError {
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("n = {0} exceeds the supported maximum {MAX_BOUNDS_N}")]
    TooLarge(usize),
}

fn domain(msg: impl Into<String>) -> BoundsError {
    BoundsError::Domain(msg.into())
}

/// `C(n, k)` for a big `n` and small `k`.
pub fn binomial(n: &BigUint, k: usize) -> BigUint {
    if BigUint::from(k) > *n {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= n - BigUint::from(i);
        den *= BigUint::from(i + 1);
    }
    num / den
}

/// Number of words within Hamming distance `k` of a fixed word in `F_q^n`.
pub fn sphere_size(q: u32, n: usize, k: usize) -> BigUint {
    let big_n = BigUint::from(n);
    let mut total = BigUint::zero();
    let mut pow = BigUint::one();
    for i in 0..=k.min(n) {
        total += binomial(&big_n, i) * &pow;
        pow *= q - 1;
    }
    total
}

/// `H_q(x) = x·log_q(q−1) − x·log_q x − (1−x)·log_q(1−x)`.
pub fn entropy_q(q: u32, x: f64) -> Result<f64, BoundsError> {
    if q < 2 {
        return Err(domain(format!("alphabet size {q} < 2")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("entropy argument {x} outside [0, 1]")));
    }
    let lq = (q as f64).ln();
    let term = |p: f64| if p > 0.0 { -p * p.ln() / lq } else { 0.0 };
    let extra = if q > 2 { x * ((q - 1) as f64).ln() / lq } else { 0.0 };
    Ok(term(x) + term(1.0 - x) + extra)
}

/// Base-2 logarithm of a positive big integer, exact in the integer part.
pub fn log2_big(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits <= 64 {
        return v.to_u64().expect("fits").to_f64().expect("finite").log2();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_u64().expect("64 bits") as f64;
    top.log2() + shift as f64
}

/// Gilbert–Varshamov size `⌊q^n / V_q(n, ℓ)⌋`, at least 1.
pub fn gv_code_size(q: u32, n: usize, ell: usize) -> BigUint {
    let v = BigUint::from(q).pow(n as u32) / sphere_size(q, n, ell);
    v.max(BigUint::one())
}

fn inner_sum(r: &BigUint, h: usize) -> BigUint {
    (0..h).map(|k| binomial(r, k)).sum()
}

/// Exact lower/upper chromatic-number counts as `(log2_lower, log2_upper)`.
/// `code_size` is `|C|` for a distance-`ℓ+1` code; `None` uses
/// [`gv_code_size`].
pub fn chromatic_bounds(
    n: usize,
    t: usize,
    h: usize,
    ell: usize,
    code_size: Option<&BigUint>,
) -> Result<(f64, f64), BoundsError> {
    if n > MAX_BOUNDS_N {
        return Err(BoundsError::TooLarge(n));
    }
    if n == 0 || t == 0 || h == 0 || ell > n {
        return Err(domain(format!("need n, t, h >= 1 and ell <= n, got n={n} t={t} h={h} ell={ell}")));
    }
    let q = 2u32;
    let gv;
    let c = match code_size {
        Some(c) => c,
        None => {
            gv = gv_code_size(q, n, ell);
            &gv
        }
    };
    let r1 = sphere_size(q, n, ell / 2) - 1u32;
    let r2 = sphere_size(q, n, ell) - 1u32;
    let a1 = inner_sum(&r1, h);
    let a2 = inner_sum(&r2, h);
    let lower: BigUint = (1..=t).map(|j| binomial(c, j) * a1.pow(j as u32)).sum();
    let space = BigUint::from(q).pow(n as u32);
    let upper: BigUint = (0..=2 * t).map(|j| binomial(&space, j) * a2.pow(j as u32)).sum();
    Ok((log2_big(&lower), log2_big(&upper)))
}

/// Asymptotic rate curves per `t·n·h` symbol: `(H_q(λ/2) − η, 2(H_q(λ) − η))`.
/// The upper curve is a bound only where [`upper_rate_applies`].
pub fn asymptotic_rates(q: u32, lambda: f64, eta: f64) -> Result<(f64, f64), BoundsError> {
    let hi = 1.0 - 1.0 / q as f64;
    if !(lambda > 0.0 && lambda < hi) {
        return Err(domain(format!("lambda {lambda} outside (0, {hi})")));
    }
    if !eta.is_finite() || eta < 0.0 {
        return Err(domain(format!("eta {eta} must be finite and non-negative")));
    }
    let lower = entropy_q(q, lambda / 2.0)? - eta;
    let upper = 2.0 * (entropy_q(q, lambda)? - eta);
    Ok((lower, upper))
}

/// Whether `η < H_q(λ)`, the condition under which the upper curve bounds
/// the rate.
pub fn upper_rate_applies(q: u32, lambda: f64, eta: f64) -> bool {
    entropy_q(q, lambda).is_ok_and(|h| eta < h)
}

pub fn baseline_bits(n: usize, t: usize, h: usize) -> usize {
    t * h * (n + 1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundsReport {
    pub n: usize,
    pub t: usize,
    pub h: usize,
    pub ell: usize,
    pub log2_lower: f64,
    pub log2_upper: f64,
    pub rate_lower: Option<f64>,
    pub rate_upper: Option<f64>,
    pub baseline_bits: usize,
    /// `None` when no scheme can be built for the point.
    pub digest_bits: Option<usize>,
}

pub const CSV_HEADER: &str = "n,t,h,ell,log2_lower,log2_upper,rate_lower,rate_upper,baseline_bits,digest_bits";

/// Row marker for values that are undefined at a grid point.
pub const ERR_MARKER: &str = "ERR";

impl BoundsReport {
    /// Evaluates one grid point. Rates use `λ = ℓ/n` and `η = lg h / n`.
    pub fn compute(n: usize, t: usize, h: usize, ell: usize) -> Result<BoundsReport, BoundsError> {
        let (log2_lower, log2_upper) = chromatic_bounds(n, t, h, ell, None)?;
        let lambda = ell as f64 / n as f64;
        let eta = (h as f64).log2() / n as f64;
        let (rate_lower, rate_upper) = match asymptotic_rates(2, lambda, eta) {
            Ok((lo, up)) => (Some(lo), upper_rate_applies(2, lambda, eta).then_some(up)),
            Err(_) => (None, None),
        };
        let digest_bits = ParamsSpec::with_default_index(n, t, h, ell)
            .build()
            .ok()
            .map(|p| p.digest_bits());
        Ok(BoundsReport {
            n,
            t,
            h,
            ell,
            log2_lower,
            log2_upper,
            rate_lower,
            rate_upper,
            baseline_bits: baseline_bits(n, t, h),
            digest_bits,
        })
    }

    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map_or(ERR_MARKER.to_string(), |x| format!("{x:.6}"));
        let mut s = String::new();
        write!(
            s,
            "{},{},{},{},{:.6},{:.6},{},{},{},{}",
            self.n,
            self.t,
            self.h,
            self.ell,
            self.log2_lower,
            self.log2_upper,
            opt(self.rate_lower),
            opt(self.rate_upper),
            self.baseline_bits,
            self.digest_bits.map_or(ERR_MARKER.to_string(), |d| d.to_string()),
        )
        .expect("string write");
        s
    }
}

/// One row of the rate-curve table. `upper_applies` is 0 where `η ≥ H(λ)`.
pub fn curve_row(lambda: f64, eta: f64) -> String {
    match asymptotic_rates(2, lambda, eta) {
        Ok((lo, up)) => format!(
            "{lambda:.4},{eta:.4},{lo:.6},{up:.6},{}",
            u8::from(upper_rate_applies(2, lambda, eta))
        ),
        Err(_) => format!("{lambda:.4},{eta:.4},{ERR_MARKER},{ERR_MARKER},{ERR_MARKER}"),
    }
}

pub const CURVE_HEADER: &str = "lambda,eta,rate_lower,rate_upper,upper_applies";
