//! Riccati–Bessel functions of imaginary argument, evaluated directly.
//!
//! With `ν = l + 1/2`,
//!
//! ```text
//! s_l(x) = (πx/2)^{1/2} I_ν(x)        e_l(x) = (2x/π)^{1/2} K_ν(x)
//! ```
//!
//! normalised so that `s_l e_l' − s_l' e_l = −1`. Raw values overflow long
//! before the arguments of interest get large, so everything here is carried
//! as a mantissa together with a natural-log scale.
//!
//! `e_l` comes from upward recurrence in `l`, which is stable for the
//! decaying solution. `s_l` comes from its ascending series, or from the
//! terminating hyperbolic closed form once `x` is large enough that the
//! alternating sum in it no longer cancels.

/// Highest order accepted by the evaluators.
pub const MAX_ORDER: u32 = 1_000_000;

const SERIES_REL_EPS: f64 = 1e-17;
const RESCALE: f64 = 1e280;
const LN_RESCALE: f64 = 644.723_826_038_332_8; // 280 ln 10

use crate::error::{domain, Error, Result};

/// `s_l`, `s_l'` and `e_l`, `e_l'` at one point, as mantissas with log scales:
/// `s_l = s · exp(log_s)`, `s_l' = ds · exp(log_s)`, and likewise for `e`
/// with `log_e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRiccati {
    pub s: f64,
    pub ds: f64,
    pub log_s: f64,
    pub e: f64,
    pub de: f64,
    pub log_e: f64,
}

impl LogRiccati {
    /// `s_l e_l' − s_l' e_l`; equals −1 for exact values.
    pub fn wronskian(&self) -> f64 {
        (self.s * self.de - self.ds * self.e) * (self.log_s + self.log_e).exp()
    }

    /// Mantissas rescaled to the `e^{∓x}` convention of [`ScaledRiccati`].
    pub fn to_scaled(&self, l: u32, x: f64) -> Result<ScaledRiccati> {
        let fs = (self.log_s - x).exp();
        let fe = (self.log_e + x).exp();
        let out = ScaledRiccati {
            l,
            x,
            s_hat: self.s * fs,
            e_hat: self.e * fe,
            ds_hat: self.ds * fs,
            de_hat: self.de * fe,
        };
        let ok = [out.s_hat, out.e_hat, out.ds_hat, out.de_hat]
            .iter()
            .all(|v| v.is_normal());
        if ok {
            Ok(out)
        } else {
            Err(Error::Range(format!(
                "scaled Riccati values at l={l}, x={x} do not fit in f64"
            )))
        }
    }
}

/// Riccati–Bessel values in the fixed scaling `ŝ = s_l e^{−x}`,
/// `ê = e_l e^{+x}` (with derivatives scaled the same way). In this form the
/// Wronskian reads `ŝ·ê' − ŝ'·ê = −1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledRiccati {
    pub l: u32,
    pub x: f64,
    pub s_hat: f64,
    pub e_hat: f64,
    pub ds_hat: f64,
    pub de_hat: f64,
}

impl ScaledRiccati {
    pub fn wronskian(&self) -> f64 {
        self.s_hat * self.de_hat - self.ds_hat * self.e_hat
    }
}

/// Scaled Riccati–Bessel values by direct evaluation.
///
/// Fails with [`Error::Range`] when a scaled value would not fit in an `f64`
/// (small `x` combined with large `l`); [`riccati_direct`] has no such limit.
pub fn riccati_scaled(l: u32, x: f64) -> Result<ScaledRiccati> {
    riccati_direct(l, x)?.to_scaled(l, x)
}

/// Direct evaluation of `s_l, s_l', e_l, e_l'` in log-scaled form.
pub fn riccati_direct(l: u32, x: f64) -> Result<LogRiccati> {
    check_args(l, x)?;
    let (e, de, log_e) = e_upward(l, x);
    let (s, ds, log_s) = if use_closed_form(l, x) {
        let sl = s_closed_scaled(l, x);
        let sl1 = s_closed_scaled(l + 1, x);
        (sl, sl1 + f64::from(l + 1) / x * sl, x)
    } else {
        s_series(l, x)
    };
    Ok(LogRiccati {
        s,
        ds,
        log_s,
        e,
        de,
        log_e,
    })
}

fn check_args(l: u32, x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!(
            "Riccati argument must be positive, got {x}"
        )));
    }
    if l > MAX_ORDER {
        return Err(Error::Capacity(format!("order {l} above cap {MAX_ORDER}")));
    }
    Ok(())
}

/// The closed form for `s_{l+1}` is used only where its alternating sum has
/// a leading ratio `(l+1)(l+2)/(2x)` of at most 1/4.
fn use_closed_form(l: u32, x: f64) -> bool {
    let l1 = f64::from(l) + 1.0;
    x >= 2.0 * l1 * (l1 + 1.0)
}

/// `e_l` and `e_l'` by upward recurrence, `e_{j+1} = e_{j-1} + (2j+1)/x e_j`.
fn e_upward(l: u32, x: f64) -> (f64, f64, f64) {
    // e_{-1} = e_0 = e^{-x}
    let mut log_e = -x;
    let mut prev = 1.0;
    let mut cur = 1.0;
    for j in 0..l {
        let next = prev + f64::from(2 * j + 1) / x * cur;
        prev = cur;
        cur = next;
        if cur > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_e += LN_RESCALE;
        }
    }
    let de = -prev - f64::from(l) / x * cur;
    (cur, de, log_e)
}

/// `s_l e^{-x}` from the terminating sum
/// `s_l = ½[e^x Σ (−1)^k c_k (2x)^{−k} − (−1)^l e^{−x} Σ c_k (2x)^{−k}]`,
/// `c_k = (l+k)!/(k!(l−k)!)`.
fn s_closed_scaled(l: u32, x: f64) -> f64 {
    let inv = 1.0 / (2.0 * x);
    let mut c = 1.0;
    let mut alt = 1.0;
    let mut plain = 1.0;
    let mut pow = 1.0;
    for k in 0..l {
        c *= f64::from(l + k + 1) * f64::from(l - k) / f64::from(k + 1);
        pow *= inv;
        let term = c * pow;
        plain += term;
        if k % 2 == 0 {
            alt -= term;
        } else {
            alt += term;
        }
    }
    let sign = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
    0.5 * (alt - sign * (-2.0 * x).exp() * plain)
}

/// `s_l` and `s_l'` from the ascending series
/// `s_l = x^{l+1}/(2l+1)!! Σ_k (x²/2)^k / (k! (2l+3)(2l+5)…(2l+2k+1))`,
/// with `s_l' = s_{l+1} + (l+1)/x s_l`. Both carry the scale
/// `log_s = (l+1) ln x − ln (2l+1)!!`.
fn s_series(l: u32, x: f64) -> (f64, f64, f64) {
    let half_x2 = 0.5 * x * x;
    let two_l = 2.0 * f64::from(l);
    let mut log_s = f64::from(l + 1) * x.ln() - ln_double_factorial(2 * l + 1);
    let (mut sum0, mut term0) = (1.0, 1.0);
    let (mut sum1, mut term1) = (1.0, 1.0);
    let mut k = 0.0_f64;
    loop {
        let r0 = half_x2 / ((k + 1.0) * (two_l + 2.0 * k + 3.0));
        let r1 = half_x2 / ((k + 1.0) * (two_l + 2.0 * k + 5.0));
        term0 *= r0;
        term1 *= r1;
        sum0 += term0;
        sum1 += term1;
        k += 1.0;
        if term0 > RESCALE {
            term0 /= RESCALE;
            term1 /= RESCALE;
            sum0 /= RESCALE;
            sum1 /= RESCALE;
            log_s += LN_RESCALE;
        }
        if r0 < 0.5 && term0 < SERIES_REL_EPS * sum0 && term1 < SERIES_REL_EPS * sum1 {
            break;
        }
    }
    // s_{l+1} relative to the same scale: x/(2l+3) · S_{l+1}
    let s_next = x / (two_l + 3.0) * sum1;
    (sum0, s_next + f64::from(l + 1) / x * sum0, log_s)
}

/// `ln((2j+1)!!)` for odd argument `n = 2j+1`.
pub(crate) fn ln_double_factorial(n: u32) -> f64 {
    // products of up to ~40 odd factors stay far below f64::MAX
    let mut acc = 0.0;
    let mut prod = 1.0_f64;
    let mut k = 3;
    while k <= n {
        prod *= f64::from(k);
        if prod > 1e250 {
            acc += prod.ln();
            prod = 1.0;
        }
        k += 2;
    }
    acc + prod.ln()
}
