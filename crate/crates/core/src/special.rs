//! Normal, Student-t and incomplete beta distribution functions.

use crate::error::{Error, Result};

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// Two-sided standard normal tail `P(|Z| >= |z|)`.
pub fn normal_two_sided(z: f64) -> f64 {
    libm::erfc(z.abs() / std::f64::consts::SQRT_2).min(1.0)
}

/// `I_x(a, b)`.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::out_of_range("a", a, "(0, inf)"));
    }
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::out_of_range("b", b, "(0, inf)"));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::out_of_range("x", x, "[0, 1]"));
    }
    Ok(inc_beta(a, b, x))
}

fn inc_beta(a: f64, b: f64, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if x == 1.0 {
        return 1.0;
    }
    let ln_front =
        libm::lgamma(a + b) - libm::lgamma(a) - libm::lgamma(b) + a * x.ln() + b * (-x).ln_1p();
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_front.exp() * beta_cf(a, b, x) / a
    } else {
        1.0 - ln_front.exp() * beta_cf(b, a, 1.0 - x) / b
    }
}

/// Continued fraction for `I_x(a, b)` by the modified Lentz method.
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// Student-t CDF with `df` degrees of freedom.
pub fn student_t_cdf(t: f64, df: u32) -> Result<f64> {
    if df == 0 {
        return Err(Error::out_of_range("degrees of freedom", df, ">= 1"));
    }
    if t.is_nan() {
        return Err(Error::out_of_range("t", t, "a number"));
    }
    let tail = 0.5 * student_t_two_sided(t, df);
    Ok(if t > 0.0 { 1.0 - tail } else { tail })
}

/// `P(|T| >= |t|)`, computed without cancellation.
pub(crate) fn student_t_two_sided(t: f64, df: u32) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    let nu = df as f64;
    let x = nu / (nu + t * t);
    inc_beta(nu / 2.0, 0.5, x)
}
