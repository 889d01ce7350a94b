//! The Tracy-Widom (GUE) distribution through the Hastings-McLeod solution
//! of Painleve II, `q'' = 2q^3 + zq`, `q(z) ~ -Ai(z)` as `z -> +inf`:
//!
//! ```text
//! F(t) = exp(-int_t^inf (z - t) q(z)^2 dz) = exp(-(V(t) - t U(t))),
//! U(t) = int_t^inf q^2,    V(t) = int_t^inf z q^2.
//! ```
//!
//! `q`, `q'`, `U` and `V` are integrated together from `z_hi` down to `z_lo`
//! with an adaptive Dormand-Prince 5(4) scheme in double-double arithmetic.
//! The Hastings-McLeod solution is a separatrix: perturbations grow like
//! `exp((2 sqrt 2 / 3) |z|^{3/2})` as `z` decreases, about `1e13` by
//! `z = -10`, so both the start point and the arithmetic need the headroom.

use std::sync::OnceLock;

use crate::airy::{airy_dd, AIRY_DOMAIN};
use crate::dd::Dd;
use crate::error::{Error, Result};

/// Spacing of the stored grid.
const GRID_STEP: f64 = 1.0 / 256.0;

/// `|q|` above which the solution is declared to have blown up.
const BLOW_UP: f64 = 1e6;

/// Integration settings for [`solve_painleve2`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Painleve2Config {
    /// Start point, where `q = -Ai`.
    pub z_hi: f64,
    /// End point of the backward integration.
    pub z_lo: f64,
    /// Local error per step, relative to the size of `(q, q')`, `U` and
    /// `log F` respectively.
    pub tol: f64,
}

impl Default for Painleve2Config {
    fn default() -> Self {
        Self {
            z_hi: 12.0,
            z_lo: -10.0,
            tol: 1e-22,
        }
    }
}

/// `q`, `q'`, `U`, `V` and `log F` on a descending grid from `z_hi` to
/// `z_lo` with spacing 1/256 (the last interval may be shorter).
#[derive(Debug, Clone)]
pub struct Painleve2Solution {
    grid: Vec<f64>,
    q: Vec<f64>,
    q_prime: Vec<f64>,
    u: Vec<f64>,
    v: Vec<f64>,
    log_f: Vec<f64>,
}

impl Painleve2Solution {
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn q_prime(&self) -> &[f64] {
        &self.q_prime
    }

    /// `int_z^inf q^2` at each grid point.
    pub fn u(&self) -> &[f64] {
        &self.u
    }

    /// `int_z^inf s q(s)^2 ds` at each grid point.
    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn z_hi(&self) -> f64 {
        self.grid[0]
    }

    pub fn z_lo(&self) -> f64 {
        *self.grid.last().expect("grid is nonempty")
    }

    /// Grid interval `[grid[i+1], grid[i]]` containing `t`, and its
    /// endpoints.
    fn locate(&self, t: f64) -> usize {
        let last = self.grid.len() - 2;
        let i = ((self.z_hi() - t) / GRID_STEP).floor();
        (i.max(0.0) as usize).min(last)
    }

    /// Cubic Hermite interpolation of `log F` (derivative `U`).
    fn log_cdf(&self, t: f64) -> f64 {
        let i = self.locate(t);
        hermite(
            self.grid[i + 1],
            self.grid[i],
            self.log_f[i + 1],
            self.log_f[i],
            self.u[i + 1],
            self.u[i],
            t,
        )
    }

    /// Cubic Hermite interpolation of `U` (derivative `-q^2`).
    fn u_at(&self, t: f64) -> f64 {
        let i = self.locate(t);
        hermite(
            self.grid[i + 1],
            self.grid[i],
            self.u[i + 1],
            self.u[i],
            -self.q[i + 1] * self.q[i + 1],
            -self.q[i] * self.q[i],
            t,
        )
    }

    /// Cubic Hermite interpolation of `q` (derivative `q'`).
    pub fn q_at(&self, z: f64) -> Result<f64> {
        if !(self.z_lo()..=self.z_hi()).contains(&z) {
            return Err(Error::out_of_range(
                "z",
                z,
                format!("[{}, {}]", self.z_lo(), self.z_hi()),
            ));
        }
        let i = self.locate(z);
        Ok(hermite(
            self.grid[i + 1],
            self.grid[i],
            self.q[i + 1],
            self.q[i],
            self.q_prime[i + 1],
            self.q_prime[i],
            z,
        ))
    }
}

fn hermite(x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64, x: f64) -> f64 {
    let h = x1 - x0;
    let s = (x - x0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
}

type State = [Dd; 4];

/// `(q, q', U, V)' = (q', 2q^3 + zq, -q^2, -z q^2)`.
fn rhs(z: Dd, y: &State) -> State {
    let q = y[0];
    let q2 = q * q;
    [y[1], (q2.mul_f64(2.0) + z) * q, -q2, -(z * q2)]
}

struct Tableau {
    c: [Dd; 6],
    a: [[Dd; 6]; 6],
    e: [Dd; 7],
}

fn frac(n: f64, d: f64) -> Dd {
    Dd::from_f64(n) / Dd::from_f64(d)
}

impl Tableau {
    fn dormand_prince() -> Self {
        let z = Dd::ZERO;
        Self {
            c: [
                frac(1.0, 5.0),
                frac(3.0, 10.0),
                frac(4.0, 5.0),
                frac(8.0, 9.0),
                Dd::ONE,
                Dd::ONE,
            ],
            a: [
                [frac(1.0, 5.0), z, z, z, z, z],
                [frac(3.0, 40.0), frac(9.0, 40.0), z, z, z, z],
                [
                    frac(44.0, 45.0),
                    frac(-56.0, 15.0),
                    frac(32.0, 9.0),
                    z,
                    z,
                    z,
                ],
                [
                    frac(19372.0, 6561.0),
                    frac(-25360.0, 2187.0),
                    frac(64448.0, 6561.0),
                    frac(-212.0, 729.0),
                    z,
                    z,
                ],
                [
                    frac(9017.0, 3168.0),
                    frac(-355.0, 33.0),
                    frac(46732.0, 5247.0),
                    frac(49.0, 176.0),
                    frac(-5103.0, 18656.0),
                    z,
                ],
                [
                    frac(35.0, 384.0),
                    z,
                    frac(500.0, 1113.0),
                    frac(125.0, 192.0),
                    frac(-2187.0, 6784.0),
                    frac(11.0, 84.0),
                ],
            ],
            e: [
                frac(71.0, 57600.0),
                z,
                frac(-71.0, 16695.0),
                frac(71.0, 1920.0),
                frac(-17253.0, 339200.0),
                frac(22.0, 525.0),
                frac(-1.0, 40.0),
            ],
        }
    }
}

/// One Dormand-Prince step; returns the new state, its derivative and the
/// scaled error norm.
fn dp_step(tb: &Tableau, z: Dd, y: &State, k1: &State, h: Dd, tol: f64) -> (State, State, f64) {
    let mut k: [State; 7] = [*k1; 7];
    for s in 1..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = tb.a[s - 1][j];
            if a.hi == 0.0 {
                continue;
            }
            let ha = h * a;
            for i in 0..4 {
                ys[i] = ys[i] + ha * kj[i];
            }
        }
        if s == 6 {
            // the seventh stage is evaluated at the proposed solution
            k[6] = rhs(z + h, &ys);
            // Error estimate in double-double: the stage values agree to far
            // more digits than an f64 sum could resolve.
            let mut est = [Dd::ZERO; 4];
            for (j, kj) in k.iter().enumerate() {
                for i in 0..4 {
                    est[i] = est[i] + kj[i] * tb.e[j];
                }
            }
            let mag = |y: &State| {
                let qs = y[0].hi.abs() + y[1].hi.abs();
                [
                    qs,
                    qs,
                    y[2].hi.abs(),
                    y[3].hi.abs() + (y[2].hi * (z.hi + h.hi)).abs(),
                ]
            };
            let (m0, m1) = (mag(y), mag(&ys));
            let mut err = 0.0f64;
            for i in 0..4 {
                let scale = tol * m0[i].max(m1[i]) + 1e-300;
                err = err.max((est[i] * h).hi.abs() / scale);
            }
            return (ys, k[6], err);
        }
        k[s] = rhs(z + h * tb.c[s - 1], &ys);
    }
    unreachable!()
}

/// Integrates from `z_hi` (where `q = -Ai`, `U` and `V` take their Airy
/// values) down to `z_lo`.
pub fn solve_painleve2(z_hi: f64, z_lo: f64, tol: f64) -> Result<Painleve2Solution> {
    if !(z_lo < z_hi) {
        return Err(Error::out_of_range(
            "z_lo",
            z_lo,
            format!("< z_hi = {z_hi}"),
        ));
    }
    if !(AIRY_DOMAIN.0..=AIRY_DOMAIN.1).contains(&z_hi) || z_lo < AIRY_DOMAIN.0 {
        return Err(Error::out_of_range(
            "Painleve II interval",
            format!("[{z_lo}, {z_hi}]"),
            "within [-15, 15]",
        ));
    }
    if !(tol > 0.0 && tol < 1e-3) {
        return Err(Error::out_of_range("tol", tol, "(0, 1e-3)"));
    }

    let (ai, aip) = airy_dd(z_hi);
    let zh = Dd::from_f64(z_hi);
    let ai2 = ai * ai;
    let aip2 = aip * aip;
    let u0 = aip2 - zh * ai2;
    let v0 = -((zh * zh * ai2 - zh * aip2 + ai * aip) / Dd::from_f64(3.0));
    let mut y: State = [-ai, -aip, u0, v0];

    let mut nodes = vec![z_hi];
    let mut k = 1u32;
    loop {
        let z = z_hi - k as f64 * GRID_STEP;
        if z <= z_lo {
            break;
        }
        nodes.push(z);
        k += 1;
    }
    nodes.push(z_lo);

    let tb = Tableau::dormand_prince();
    let mut sol = Painleve2Solution {
        grid: Vec::with_capacity(nodes.len()),
        q: Vec::with_capacity(nodes.len()),
        q_prime: Vec::with_capacity(nodes.len()),
        u: Vec::with_capacity(nodes.len()),
        v: Vec::with_capacity(nodes.len()),
        log_f: Vec::with_capacity(nodes.len()),
    };
    let mut push = |z: f64, y: &State| {
        let log_f = -(y[3] - Dd::from_f64(z) * y[2]);
        sol.grid.push(z);
        sol.q.push(y[0].to_f64());
        sol.q_prime.push(y[1].to_f64());
        sol.u.push(y[2].to_f64());
        sol.v.push(y[3].to_f64());
        sol.log_f.push(log_f.to_f64());
    };
    push(z_hi, &y);

    let mut z = zh;
    let mut f = rhs(z, &y);
    let mut h = -GRID_STEP / 8.0;
    for &target in &nodes[1..] {
        let target = Dd::from_f64(target);
        loop {
            let remaining = (target - z).to_f64();
            if remaining == 0.0 {
                break;
            }
            let last = h <= remaining;
            let step = if last { target - z } else { Dd::from_f64(h) };
            let (y_new, f_new, err) = dp_step(&tb, z, &y, &f, step, tol);
            if !err.is_finite() || !y_new.iter().all(|c| c.is_finite()) {
                h *= 0.2;
            } else if err <= 1.0 {
                z = if last { target } else { z + step };
                y = y_new;
                f = f_new;
                if y[0].hi.abs() > BLOW_UP {
                    return Err(Error::Unstable {
                        z: z.to_f64(),
                        reason: format!("|q| exceeded {BLOW_UP:e}; start point z_hi = {z_hi}"),
                    });
                }
                let grow = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
                if !last || grow < 1.0 {
                    h = (step.hi * grow).max(-GRID_STEP);
                }
            } else {
                h = step.hi * (0.9 * err.powf(-0.2)).max(0.2);
            }
            if h.abs() < 1e-14 {
                return Err(Error::Unstable {
                    z: z.to_f64(),
                    reason: format!("step size underflow; start point z_hi = {z_hi}"),
                });
            }
        }
        push(target.hi, &y);
    }
    Ok(sol)
}

/// Probabilities whose quantiles are computed at construction: the two tails
/// of two-sided tests at levels 0.001, 0.01 and 0.05.
pub const CACHED_PROBABILITIES: [f64; 6] = [0.0005, 0.005, 0.025, 0.975, 0.995, 0.9995];

/// The Tracy-Widom (GUE) law.
#[derive(Debug, Clone)]
pub struct TwDistribution {
    solution: Painleve2Solution,
    cached: [(f64, f64); 6],
}

impl TwDistribution {
    pub fn new(config: Painleve2Config) -> Result<Self> {
        let solution = solve_painleve2(config.z_hi, config.z_lo, config.tol)?;
        let mut tw = Self {
            solution,
            cached: [(0.0, 0.0); 6],
        };
        for (i, &p) in CACHED_PROBABILITIES.iter().enumerate() {
            tw.cached[i] = (p, tw.bisect(p));
        }
        Ok(tw)
    }

    /// A process-wide instance with the default configuration.
    pub fn shared() -> Result<&'static Self> {
        static SHARED: OnceLock<std::result::Result<TwDistribution, String>> = OnceLock::new();
        SHARED
            .get_or_init(|| Self::new(Painleve2Config::default()).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|reason| Error::Unstable {
                z: f64::NAN,
                reason: reason.clone(),
            })
    }

    pub fn solution(&self) -> &Painleve2Solution {
        &self.solution
    }

    /// `(z_lo, z_hi)` of the underlying solution.
    pub fn support(&self) -> (f64, f64) {
        (self.solution.z_lo(), self.solution.z_hi())
    }

    /// `F(t)` for `t` in the solved range.
    pub fn cdf(&self, t: f64) -> Result<f64> {
        let (lo, hi) = self.support();
        if !(lo..=hi).contains(&t) {
            return Err(Error::out_of_range("t", t, format!("[{lo}, {hi}]")));
        }
        Ok(self.cdf_saturating(t))
    }

    /// `F(t)`, taking 0 below the solved range and 1 above it (the true
    /// values there are below `F(-10) ~ 1e-36` and above `1 - 1e-26`).
    pub fn cdf_saturating(&self, t: f64) -> f64 {
        let (lo, hi) = self.support();
        if t.is_nan() {
            return f64::NAN;
        }
        if t < lo {
            return 0.0;
        }
        if t > hi {
            return 1.0;
        }
        self.solution.log_cdf(t).exp().clamp(0.0, 1.0)
    }

    /// `1 - F(t)` without cancellation for large `t`.
    pub fn sf_saturating(&self, t: f64) -> f64 {
        let (lo, hi) = self.support();
        if t < lo {
            return 1.0;
        }
        if t > hi {
            return 0.0;
        }
        (-self.solution.log_cdf(t).exp_m1()).clamp(0.0, 1.0)
    }

    /// `F'(t) = F(t) U(t)`.
    pub fn density(&self, t: f64) -> Result<f64> {
        let f = self.cdf(t)?;
        Ok(f * self.solution.u_at(t))
    }

    /// `t` with `F(t) = p`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 1e-6 && p < 1.0 - 1e-6) {
            return Err(Error::out_of_range("probability", p, "(1e-6, 1 - 1e-6)"));
        }
        if let Some(&(_, t)) = self.cached.iter().find(|(q, _)| *q == p) {
            return Ok(t);
        }
        Ok(self.bisect(p))
    }

    /// Quantiles computed at construction, as `(p, t)` pairs.
    pub fn cached_quantiles(&self) -> &[(f64, f64)] {
        &self.cached
    }

    fn bisect(&self, p: f64) -> f64 {
        let (mut lo, mut hi) = self.support();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if self.cdf_saturating(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}
