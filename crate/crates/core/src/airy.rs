//! The Airy function `Ai` and its derivative on `[-15, 15]`.
//!
//! `-8 <= z <= 9` uses the Maclaurin series in double-double arithmetic.
//! `z > 9` uses the exponentially decaying asymptotic expansion, also in
//! double-double, and `z < -8` the oscillatory expansion in `f64`. At `z = 9`
//! both the series cancellation and the asymptotic truncation error are
//! below `3e-16` relative.

use crate::dd::Dd;
use crate::error::{Error, Result};

/// Closed interval on which [`airy`] and [`airy_prime`] are defined.
pub const AIRY_DOMAIN: (f64, f64) = (-15.0, 15.0);

const SWITCH_POS: f64 = 9.0;
const SWITCH_NEG: f64 = -8.0;

const AI0: Dd = Dd::new(0.3550280538878172, 2.05233632436212e-17);
const NEG_AIP0: Dd = Dd::new(0.2588194037928068, -2.522243111610832e-17);
const SQRT_PI: Dd = Dd::new(1.772453850905516, -7.666586499825799e-17);
const FRAC_PI_4: f64 = std::f64::consts::FRAC_PI_4;

fn check(z: f64) -> Result<()> {
    if !(AIRY_DOMAIN.0..=AIRY_DOMAIN.1).contains(&z) {
        return Err(Error::out_of_range("Airy argument", z, "[-15, 15]"));
    }
    Ok(())
}

/// `Ai(z)`.
pub fn airy(z: f64) -> Result<f64> {
    check(z)?;
    Ok(airy_dd(z).0.to_f64())
}

/// `Ai'(z)`.
pub fn airy_prime(z: f64) -> Result<f64> {
    check(z)?;
    Ok(airy_dd(z).1.to_f64())
}

/// `(Ai(z), Ai'(z))` in extended precision. Callers validate the domain.
pub(crate) fn airy_dd(z: f64) -> (Dd, Dd) {
    if z > SWITCH_POS {
        asymptotic_positive(z)
    } else if z < SWITCH_NEG {
        let (a, ap) = asymptotic_negative(-z);
        (Dd::from_f64(a), Dd::from_f64(ap))
    } else {
        maclaurin(z)
    }
}

fn maclaurin(z: f64) -> (Dd, Dd) {
    let z = Dd::from_f64(z);
    let z3 = z * z * z;
    let tiny = 1e-34;

    let mut f = Dd::ONE;
    let mut t = Dd::ONE;
    let mut g = z;
    let mut s = z;
    let mut fp = Dd::ZERO;
    let mut tp = z * z * Dd::from_f64(0.5);
    let mut gp = Dd::ONE;
    let mut sp = Dd::ONE;
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        fp = fp + tp;
        t = (t * z3).div_f64((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        s = (s * z3).div_f64((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        sp = (sp * z3).div_f64((3.0 * kf + 1.0) * (3.0 * kf + 3.0));
        tp = (tp * z3).div_f64((3.0 * kf + 3.0) * (3.0 * kf + 5.0));
        f = f + t;
        g = g + s;
        gp = gp + sp;
        k += 1;
        let scale = f.abs().hi + g.abs().hi + fp.abs().hi + gp.abs().hi;
        let last = t.abs().hi + s.abs().hi + tp.abs().hi + sp.abs().hi;
        if last <= tiny * scale || k > 200 {
            break;
        }
    }
    (AI0 * f - NEG_AIP0 * g, AI0 * fp - NEG_AIP0 * gp)
}

/// Coefficients `u_k`, `v_k` of the large-argument expansions.
fn uv(k: usize, u_prev: f64) -> (f64, f64) {
    let kf = k as f64;
    let u = u_prev * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
        / ((2.0 * kf - 1.0) * 216.0 * kf);
    let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
    (u, v)
}

fn asymptotic_positive(z: f64) -> (Dd, Dd) {
    let zd = Dd::from_f64(z);
    let root = zd.sqrt();
    let zeta = (zd * root).mul_f64(2.0).div_f64(3.0);
    let quarter = root.sqrt();
    let inv_zeta = Dd::ONE / zeta;

    let mut su = Dd::ONE;
    let mut sv = Dd::ONE;
    // c = (-1)^k u_k zeta^-k, recurrence kept in double-double
    let mut c = Dd::ONE;
    let mut prev_term = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        c = -(c * inv_zeta)
            .mul_f64((6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0))
            .div_f64((2.0 * kf - 1.0) * 216.0 * kf);
        let size = c.abs().hi;
        if size > prev_term || size < 1e-34 {
            break;
        }
        prev_term = size;
        su = su + c;
        sv = sv - c.mul_f64(6.0 * kf + 1.0).div_f64(6.0 * kf - 1.0);
    }
    let e = (-zeta).exp();
    let pref = e / (SQRT_PI.mul_f64(2.0));
    (pref * su / quarter, -(pref * sv * quarter))
}

/// `(Ai(-x), Ai'(-x))` for large positive `x`.
fn asymptotic_negative(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let inv = 1.0 / zeta;
    // even / odd parts of sum (-1)^k c_k zeta^-k with alternating pairs
    let (mut ue, mut uo, mut ve, mut vo) = (1.0, 0.0, 1.0, 0.0);
    let mut u = 1.0;
    let mut pow = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let (uk, vk) = uv(k, u);
        u = uk;
        pow *= inv;
        let size = (uk * pow).abs();
        if size > prev || size < 1e-18 {
            break;
        }
        prev = size;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            ue += sign * uk * pow;
            ve += sign * vk * pow;
        } else {
            uo += sign * uk * pow;
            vo += sign * vk * pow;
        }
    }
    let phase = zeta - FRAC_PI_4;
    let (s, c) = phase.sin_cos();
    let sqrt_pi = SQRT_PI.to_f64();
    let q = x.sqrt().sqrt();
    let ai = (c * ue + s * uo) / (sqrt_pi * q);
    let aip = q * (s * ve - c * vo) / sqrt_pi;
    (ai, aip)
}

#[cfg(test)]
mod tests {
    use super::*;

    // (z, Ai(z), Ai'(z)) from a 50-digit reference evaluation.
    const REFERENCE: [(f64, f64, f64); 15] = [
        (-15.0, 0.278_217_490_870_828_93, 0.272_374_204_308_642_02),
        (-12.0, -0.066_555_175_054_373_129, 1.023_110_453_367_970_7),
        (-8.5, -0.330_290_237_630_208_88, -0.032_313_348_284_639_136),
        (-8.0, -0.052_705_050_356_386_203, 0.935_560_938_198_306_55),
        (-5.0, 0.350_761_009_024_114_32, 0.327_192_818_554_443_14),
        (-1.0, 0.535_560_883_292_352_12, -0.010_160_567_116_645_209),
        (0.0, 0.355_028_053_887_817_24, -0.258_819_403_792_806_80),
        (1.0, 0.135_292_416_312_881_42, -0.159_147_441_296_793_21),
        (3.0, 0.006_591_139_357_460_719, -0.011_912_976_705_951_318),
        (6.0, 9.947_694_360_252_889_6e-6, -2.476_520_039_703_495_5e-5),
        (8.0, 4.692_207_616_099_231_6e-8, -1.341_439_297_906_786_6e-7),
        (8.5, 1.099_700_975_519_550_7e-8, -3.237_725_440_447_602_3e-8),
        (
            10.0,
            1.104_753_255_289_868_6e-10,
            -3.520_633_676_738_923_6e-10,
        ),
        (
            12.0,
            1.393_184_688_875_360_8e-13,
            -4.854_736_554_985_308_5e-13,
        ),
        (
            15.0,
            2.164_962_520_737_992_3e-18,
            -8.420_567_954_017_772_8e-18,
        ),
    ];

    #[test]
    fn matches_reference_values() {
        for &(z, ai, aip) in &REFERENCE {
            let a = airy(z).unwrap();
            let d = airy_prime(z).unwrap();
            if z < 0.0 {
                assert!((a - ai).abs() < 1e-12, "Ai({z}) = {a}, want {ai}");
                assert!((d - aip).abs() < 1e-12, "Ai'({z}) = {d}, want {aip}");
            } else {
                assert!(((a - ai) / ai).abs() < 1e-14, "Ai({z}) = {a}, want {ai}");
                assert!(
                    ((d - aip) / aip).abs() < 1e-14,
                    "Ai'({z}) = {d}, want {aip}"
                );
            }
        }
    }

    #[test]
    fn branches_agree_at_switch() {
        let inner = maclaurin(SWITCH_POS);
        let outer = asymptotic_positive(SWITCH_POS);
        assert!(((inner.0 - outer.0) / outer.0).to_f64().abs() < 3e-15);
        assert!(((inner.1 - outer.1) / outer.1).to_f64().abs() < 3e-15);
        let (a, ap) = asymptotic_negative(-SWITCH_NEG);
        let (b, bp) = maclaurin(SWITCH_NEG);
        assert!((a - b.to_f64()).abs() < 1e-12);
        assert!((ap - bp.to_f64()).abs() < 1e-12);
    }

    #[test]
    fn zero_value() {
        assert!((airy(0.0).unwrap() - 0.355_028_053_887_817_2).abs() < 1e-16);
    }

    #[test]
    fn decays_monotonically() {
        let mut prev = airy(2.0).unwrap();
        for i in 1..=130 {
            let a = airy(2.0 + 0.1 * i as f64).unwrap();
            assert!(a < prev && a > 0.0);
            prev = a;
        }
    }

    #[test]
    fn satisfies_airy_equation() {
        // fourth-order central differences
        let h = 2.5e-3;
        let ai = |z: f64| airy(z).unwrap();
        let aip = |z: f64| airy_prime(z).unwrap();
        for i in 0..=280 {
            let z = -14.0 + 0.1 * i as f64;
            let second = (-ai(z + 2.0 * h) + 16.0 * ai(z + h) - 30.0 * ai(z) + 16.0 * ai(z - h)
                - ai(z - 2.0 * h))
                / (12.0 * h * h);
            assert!((second - z * ai(z)).abs() < 1e-8, "z = {z}");
            let d = (-aip(z + 2.0 * h) + 8.0 * aip(z + h) - 8.0 * aip(z - h) + aip(z - 2.0 * h))
                / (12.0 * h);
            assert!((d - z * ai(z)).abs() < 1e-8, "z = {z}");
        }
    }

    #[test]
    fn domain_is_enforced() {
        assert!(airy(15.5).is_err());
        assert!(airy_prime(-15.01).is_err());
        assert!(airy(f64::NAN).is_err());
    }
}
