//! Exact generation of the uniform-asymptotic polynomials.
//!
//! `u_k` follow the classical recurrence
//!
//! ```text
//! u_0 = 1
//! u_{k+1}(t) = ½ t²(1 − t²) u_k'(t) + ⅛ ∫₀ᵗ (1 − 5s²) u_k(s) ds
//! ```
//!
//! and the derivative series uses
//! `v_k = u_k + t(t² − 1)(½ u_{k−1} + t u_{k−1}')`.
//!
//! The Riccati–Bessel derivative `s_l'` also picks up the derivative of the
//! `√x` prefactor, which folds into `c_k = v_k + (t/2) u_{k−1}`; these are the
//! polynomials that actually multiply `ν^{−k}` in the `s_l'`, `e_l'` factors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Write as _;

/// Largest supported `k_max`.
pub const MAX_K: usize = 12;

/// Dense polynomial, `coeffs[p]` multiplies `t^p`.
pub type RationalPoly = Vec<BigRational>;

/// `u_k`, `v_k`, `c_k` for `k = 0..=order_k_max`, exact and as `f64` in
/// a parity-packed layout for evaluation.
#[derive(Debug, Clone)]
pub struct DebyePolynomialTable {
    pub order_k_max: usize,
    pub u_coeffs: Vec<RationalPoly>,
    pub v_coeffs: Vec<RationalPoly>,
    pub c_coeffs: Vec<RationalPoly>,
    /// `u_k(t) = t^k Σ_j packed_u[k][j] t^{2j}`
    pub(crate) packed_u: Vec<Vec<f64>>,
    pub(crate) packed_c: Vec<Vec<f64>>,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn trim(mut p: RationalPoly) -> RationalPoly {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub(crate) fn add(a: &RationalPoly, b: &RationalPoly) -> RationalPoly {
    let n = a.len().max(b.len());
    let zero = BigRational::zero();
    let out = (0..n)
        .map(|i| a.get(i).unwrap_or(&zero) + b.get(i).unwrap_or(&zero))
        .collect();
    trim(out)
}

/// Product with a sparse polynomial given as `(power, coefficient)` pairs.
pub(crate) fn mul_sparse(a: &RationalPoly, terms: &[(usize, BigRational)]) -> RationalPoly {
    let top = terms.iter().map(|(p, _)| *p).max().unwrap_or(0);
    let mut out = vec![BigRational::zero(); a.len() + top];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (p, c) in terms {
            out[i + p] += ai * c;
        }
    }
    trim(out)
}

pub(crate) fn derivative(a: &RationalPoly) -> RationalPoly {
    if a.len() <= 1 {
        return vec![BigRational::zero()];
    }
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    trim(out)
}

fn integral_from_zero(a: &RationalPoly) -> RationalPoly {
    let mut out = vec![BigRational::zero()];
    out.extend(a.iter().enumerate().map(|(i, c)| c / BigInt::from(i + 1)));
    trim(out)
}

/// One step of the `u_k` recurrence.
pub(crate) fn next_u(u: &RationalPoly) -> RationalPoly {
    // ½ t²(1 − t²) u'
    let first = mul_sparse(&derivative(u), &[(2, rat(1, 2)), (4, rat(-1, 2))]);
    // ⅛ ∫ (1 − 5s²) u
    let integrand = mul_sparse(u, &[(0, rat(1, 8)), (2, rat(-5, 8))]);
    add(&first, &integral_from_zero(&integrand))
}

fn v_from(u_k: &RationalPoly, u_prev: &RationalPoly) -> RationalPoly {
    // ½ u_{k-1} + t u_{k-1}'
    let inner = add(
        &mul_sparse(u_prev, &[(0, rat(1, 2))]),
        &mul_sparse(&derivative(u_prev), &[(1, rat(1, 1))]),
    );
    add(u_k, &mul_sparse(&inner, &[(1, rat(-1, 1)), (3, rat(1, 1))]))
}

fn pack(k: usize, p: &RationalPoly) -> Vec<f64> {
    (0..=k)
        .map(|j| {
            p.get(k + 2 * j)
                .map(|c| c.to_f64().expect("coefficient fits in f64"))
                .unwrap_or(0.0)
        })
        .collect()
}

/// Generate the polynomial table through `k_max` (0 ≤ `k_max` ≤ 12).
pub fn generate_polynomials(k_max: usize) -> crate::Result<DebyePolynomialTable> {
    if k_max > MAX_K {
        return Err(crate::Error::Capacity(format!(
            "k_max {k_max} above supported {MAX_K}"
        )));
    }
    let mut u = vec![vec![BigRational::one()]];
    for k in 0..k_max {
        let next = next_u(&u[k]);
        u.push(next);
    }
    let mut v = vec![vec![BigRational::one()]];
    let mut c = vec![vec![BigRational::one()]];
    for k in 1..=k_max {
        let vk = v_from(&u[k], &u[k - 1]);
        let ck = add(&vk, &mul_sparse(&u[k - 1], &[(1, rat(1, 2))]));
        v.push(vk);
        c.push(ck);
    }
    let packed_u = u.iter().enumerate().map(|(k, p)| pack(k, p)).collect();
    let packed_c = c.iter().enumerate().map(|(k, p)| pack(k, p)).collect();
    Ok(DebyePolynomialTable {
        order_k_max: k_max,
        u_coeffs: u,
        v_coeffs: v,
        c_coeffs: c,
        packed_u,
        packed_c,
    })
}

fn format_poly(name: &str, k: usize, p: &RationalPoly) -> String {
    let mut line = format!("{name}_{k}:");
    let mut first = true;
    for (i, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let sign = match (first, c.is_negative()) {
            (true, true) => " -",
            (true, false) => " ",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        let _ = write!(line, "{sign}{}", c.abs());
        match i {
            0 => {}
            1 => line.push_str(" t"),
            _ => {
                let _ = write!(line, " t^{i}");
            }
        }
        first = false;
    }
    line
}

impl DebyePolynomialTable {
    /// Plain-text dump, one polynomial per line: `u_k: c t^k + …`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, polys) in [
            ("u", &self.u_coeffs),
            ("v", &self.v_coeffs),
            ("c", &self.c_coeffs),
        ] {
            for (k, p) in polys.iter().enumerate() {
                out.push_str(&format_poly(name, k, p));
                out.push('\n');
            }
        }
        out
    }

    /// Exact value `p(t)` of a stored polynomial at rational `t`.
    pub fn eval_exact(p: &RationalPoly, t: &BigRational) -> BigRational {
        p.iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * t + c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(coeffs: &[(usize, i64, i64)]) -> RationalPoly {
        let top = coeffs.iter().map(|c| c.0).max().unwrap();
        let mut p = vec![BigRational::zero(); top + 1];
        for &(i, n, d) in coeffs {
            p[i] = rat(n, d);
        }
        p
    }

    #[test]
    fn low_orders() {
        let t = generate_polynomials(2).unwrap();
        assert_eq!(t.u_coeffs[0], poly(&[(0, 1, 1)]));
        assert_eq!(t.v_coeffs[0], poly(&[(0, 1, 1)]));
        assert_eq!(t.u_coeffs[1], poly(&[(1, 3, 24), (3, -5, 24)]));
        assert_eq!(t.v_coeffs[1], poly(&[(1, -9, 24), (3, 7, 24)]));
        assert_eq!(
            t.u_coeffs[2],
            poly(&[(2, 81, 1152), (4, -462, 1152), (6, 385, 1152)])
        );
        assert_eq!(
            t.v_coeffs[2],
            poly(&[(2, -135, 1152), (4, 594, 1152), (6, -455, 1152)])
        );
        assert_eq!(t.c_coeffs[1], poly(&[(1, 3, 24), (3, 7, 24)]));
    }

    #[test]
    fn degree_and_parity() {
        let t = generate_polynomials(MAX_K).unwrap();
        for k in 1..=MAX_K {
            for p in [&t.u_coeffs[k], &t.v_coeffs[k], &t.c_coeffs[k]] {
                assert_eq!(p.len(), 3 * k + 1, "degree of order {k}");
                for (i, c) in p.iter().enumerate() {
                    let allowed = i >= k && (i - k) % 2 == 0;
                    assert!(allowed || c.is_zero(), "k={k} power {i}");
                }
                assert!(p[0].is_zero());
            }
        }
    }

    #[test]
    fn recurrence_satisfied_in_differentiated_form() {
        // u_{k+1}' = d/dt[½t²(1−t²)u_k'] + ⅛(1−5t²)u_k and u_{k+1}(0) = 0
        let t = generate_polynomials(MAX_K).unwrap();
        for k in 0..MAX_K {
            let uk = &t.u_coeffs[k];
            let lhs = derivative(&t.u_coeffs[k + 1]);
            let a = derivative(&mul_sparse(
                &derivative(uk),
                &[(2, rat(1, 2)), (4, rat(-1, 2))],
            ));
            let b = mul_sparse(uk, &[(0, rat(1, 8)), (2, rat(-5, 8))]);
            assert_eq!(lhs, add(&a, &b), "order {}", k + 1);
        }
    }

    /// Stirling-series coefficients of Γ from Bernoulli numbers, computed
    /// without reference to the Debye recurrence.
    fn stirling_coefficients(n: usize) -> Vec<BigRational> {
        let m = 2 * n + 2;
        let mut binom = vec![vec![BigInt::one()]];
        for i in 1..=m + 1 {
            let prev = &binom[i - 1];
            let mut row = vec![BigInt::one(); i + 1];
            for j in 1..i {
                row[j] = &prev[j - 1] + &prev[j];
            }
            binom.push(row);
        }
        let mut bern = vec![BigRational::one()];
        for k in 1..=m {
            let mut acc = BigRational::zero();
            for (j, b) in bern.iter().enumerate() {
                acc += BigRational::from_integer(binom[k + 1][j].clone()) * b;
            }
            bern.push(-acc / BigInt::from(k + 1));
        }
        // log series coefficients s_i of w^i
        let mut s = vec![BigRational::zero(); n + 1];
        for j in 1..=n.div_ceil(2) {
            let i = 2 * j - 1;
            if i <= n {
                s[i] = bern[2 * j].clone() / BigInt::from(2 * j * (2 * j - 1));
            }
        }
        let mut e = vec![BigRational::one()];
        for k in 1..=n {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                acc += &s[j] * BigInt::from(j) * &e[k - j];
            }
            e.push(acc / BigInt::from(k));
        }
        e
    }

    #[test]
    fn turning_point_constants_match_stirling_series() {
        let t = generate_polynomials(MAX_K).unwrap();
        let gamma = stirling_coefficients(MAX_K);
        let one = BigRational::one();
        for (k, g) in gamma.iter().enumerate().take(MAX_K + 1) {
            let value = DebyePolynomialTable::eval_exact(&t.u_coeffs[k], &one);
            let expected = if k % 2 == 0 { g.clone() } else { -g.clone() };
            assert_eq!(value, expected, "u_{k}(1)");
        }
    }

    #[test]
    fn text_dump_format() {
        let t = generate_polynomials(1).unwrap();
        let text = t.to_text();
        assert!(text.lines().any(|l| l == "u_0: 1"));
        assert!(text.lines().any(|l| l == "u_1: 1/8 t - 5/24 t^3"));
        assert!(text.lines().any(|l| l == "v_1: -3/8 t + 7/24 t^3"));
    }

    #[test]
    fn rejects_large_order() {
        assert!(generate_polynomials(MAX_K + 1).is_err());
    }
}
