//! Pearson, Spearman, Kendall and Hoeffding tests of independence.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::permutation::{ranks, PairedSample};
use crate::special::{normal_two_sided, student_t_two_sided};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReferenceTest {
    Pearson,
    Spearman,
    Kendall,
    Hoeffding,
}

impl ReferenceTest {
    pub const ALL: [ReferenceTest; 4] = [
        ReferenceTest::Pearson,
        ReferenceTest::Spearman,
        ReferenceTest::Kendall,
        ReferenceTest::Hoeffding,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReferenceTest::Pearson => "pearson",
            ReferenceTest::Spearman => "spearman",
            ReferenceTest::Kendall => "kendall",
            ReferenceTest::Hoeffding => "hoeffding",
        }
    }
}

impl fmt::Display for ReferenceTest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ReferenceTest {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ReferenceTest::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown reference test {s:?}")))
    }
}

/// A correlation-type statistic with its two-sided p-value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssociationStatistic {
    pub name: ReferenceTest,
    pub value: f64,
    pub p_value: f64,
    pub n: usize,
}

fn need(sample: &PairedSample, needed: usize) -> Result<usize> {
    let n = sample.len();
    if n < needed {
        return Err(Error::TooFewObservations { needed, got: n });
    }
    Ok(n)
}

fn tie_free(sample: &PairedSample) -> Result<()> {
    match sample.tied_axis() {
        Some(axis) => Err(Error::TiesPresent { axis }),
        None => Ok(()),
    }
}

/// Two-sided p-value of a correlation through `t = r sqrt((n-2)/(1-r^2))`.
fn t_transform_p(r: f64, n: usize) -> f64 {
    if r.abs() >= 1.0 {
        return 0.0;
    }
    let t = r * ((n as f64 - 2.0) / (1.0 - r * r)).sqrt();
    student_t_two_sided(t, (n - 2) as u32).clamp(0.0, 1.0)
}

/// Product-moment correlation of two equal-length vectors.
pub fn pearson_r(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Degenerate("zero variance in one coordinate"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

pub fn pearson_test(sample: &PairedSample) -> Result<AssociationStatistic> {
    let n = need(sample, 3)?;
    let r = pearson_r(&sample.xs(), &sample.ys())?;
    Ok(AssociationStatistic {
        name: ReferenceTest::Pearson,
        value: r,
        p_value: t_transform_p(r, n),
        n,
    })
}

/// `12 / (n (n^2 - 1)) sum (rx - (n+1)/2)(ry - (n+1)/2)` on 1-based ranks.
pub fn spearman_from_ranks(rx: &[u32], ry: &[u32]) -> f64 {
    let n = rx.len() as i128;
    // doubled deviations keep everything integral
    let s: i128 = rx
        .iter()
        .zip(ry)
        .map(|(&a, &b)| (2 * a as i128 - n - 1) * (2 * b as i128 - n - 1))
        .sum();
    3.0 * s as f64 / (n * (n * n - 1)) as f64
}

pub fn spearman_test(sample: &PairedSample) -> Result<AssociationStatistic> {
    let n = need(sample, 3)?;
    tie_free(sample)?;
    let rs = spearman_from_ranks(&ranks(&sample.xs(), None), &ranks(&sample.ys(), None));
    Ok(AssociationStatistic {
        name: ReferenceTest::Spearman,
        value: rs,
        p_value: t_transform_p(rs, n),
        n,
    })
}

fn sign_half(d: f64) -> f64 {
    if d > 0.0 {
        1.0
    } else if d == 0.0 {
        0.5
    } else {
        -1.0
    }
}

/// Number of inversions, by merge sort.
fn inversions(v: &mut [u32], buf: &mut Vec<u32>) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut count = inversions(&mut v[..mid], buf) + inversions(&mut v[mid..], buf);
    buf.clear();
    let (mut i, mut j) = (0, mid);
    while i < mid && j < n {
        if v[i] <= v[j] {
            buf.push(v[i]);
            i += 1;
        } else {
            buf.push(v[j]);
            count += (mid - i) as u64;
            j += 1;
        }
    }
    buf.extend_from_slice(&v[i..mid]);
    buf.extend_from_slice(&v[j..n]);
    v.copy_from_slice(buf);
    count
}

/// `tau_s = (1/(n(n-1))) sum_{i != j} s(x_i - x_j) s(y_i - y_j)` with
/// `s(0) = 1/2`.
pub fn kendall_tau(sample: &PairedSample) -> f64 {
    let n = sample.len();
    let pairs = sample.pairs();
    if sample.tied_axis().is_none() {
        // (C - D) / C(n, 2) from the inversion count of the rank permutation
        let rx = ranks(&sample.xs(), None);
        let ry = ranks(&sample.ys(), None);
        let mut image = vec![0u32; n];
        for (&a, &b) in rx.iter().zip(&ry) {
            image[a as usize - 1] = b;
        }
        let total = (n * (n - 1) / 2) as f64;
        let disc = inversions(&mut image, &mut Vec::with_capacity(n)) as f64;
        return (total - 2.0 * disc) / total;
    }
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += sign_half(pairs[i].0 - pairs[j].0) * sign_half(pairs[i].1 - pairs[j].1);
            }
        }
    }
    s / (n * (n - 1)) as f64
}

pub fn kendall_test(sample: &PairedSample) -> Result<AssociationStatistic> {
    let n = need(sample, 3)?;
    let tau = kendall_tau(sample);
    let nf = n as f64;
    let var = 2.0 * (2.0 * nf + 5.0) / (9.0 * nf * (nf - 1.0));
    Ok(AssociationStatistic {
        name: ReferenceTest::Kendall,
        value: tau,
        p_value: normal_two_sided(tau / var.sqrt()),
        n,
    })
}

/// Integer numerator `A - 2(n-2) B + (n-2)(n-3) C` of Hoeffding's statistic,
/// from 1-based ranks. The full statistic is this times `(n-5)!/n!`.
pub fn hoeffding_numerator(rx: &[u32], ry: &[u32]) -> i128 {
    let n = rx.len();
    // T_i = #{j : x_j < x_i, y_j < y_i}, by a Fenwick tree over y-ranks
    let mut by_x = vec![0u32; n];
    for (&a, &b) in rx.iter().zip(ry) {
        by_x[a as usize - 1] = b;
    }
    let mut tree = vec![0u32; n + 1];
    let mut t_of_xrank = vec![0i128; n];
    for (pos, &yr) in by_x.iter().enumerate() {
        let mut i = yr as usize - 1;
        let mut below = 0u32;
        while i > 0 {
            below += tree[i];
            i &= i - 1;
        }
        t_of_xrank[pos] = below as i128;
        let mut i = yr as usize;
        while i <= n {
            tree[i] += 1;
            i += i & i.wrapping_neg();
        }
    }
    let (mut a, mut b, mut c) = (0i128, 0i128, 0i128);
    for (&r, &s) in rx.iter().zip(ry) {
        let (r, s) = (r as i128, s as i128);
        let t = t_of_xrank[r as usize - 1];
        a += (r - 1) * (r - 2) * (s - 1) * (s - 2);
        b += (r - 2) * (s - 2) * t;
        c += t * (t - 1);
    }
    let m = n as i128;
    a - 2 * (m - 2) * b + (m - 2) * (m - 3) * c
}

/// `(n-5)!/n!` scaling; the statistic lies in `[-1/60, 1/30]`.
pub fn hoeffding_scale(n: usize) -> f64 {
    let m = n as f64;
    1.0 / (m * (m - 1.0) * (m - 2.0) * (m - 3.0) * (m - 4.0))
}

/// Monte Carlo null of Hoeffding's numerator for tie-free samples of size
/// `n`. Permuting y-ranks yields a uniform random permutation whatever the
/// data, so one null serves every sample of that size.
#[derive(Debug, Clone)]
pub struct HoeffdingNull {
    n: usize,
    seed: u64,
    sorted: Vec<i128>,
}

impl HoeffdingNull {
    pub fn new(n: usize, mc_reps: usize, seed: u64) -> Result<Self> {
        if n < 5 {
            return Err(Error::TooFewObservations { needed: 5, got: n });
        }
        if mc_reps == 0 {
            return Err(Error::out_of_range("mc_reps", 0, ">= 1"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rx: Vec<u32> = (1..=n as u32).collect();
        let mut ry = rx.clone();
        let mut sorted: Vec<i128> = (0..mc_reps)
            .map(|_| {
                ry.shuffle(&mut rng);
                hoeffding_numerator(&rx, &ry)
            })
            .collect();
        sorted.sort_unstable();
        Ok(Self { n, seed, sorted })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn reps(&self) -> usize {
        self.sorted.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `(1 + #{null >= observed}) / (reps + 1)`.
    pub fn p_value(&self, numerator: i128) -> f64 {
        let below = self.sorted.partition_point(|&v| v < numerator);
        let at_least = self.sorted.len() - below;
        (1 + at_least) as f64 / (self.sorted.len() + 1) as f64
    }
}

/// Hoeffding test against a prebuilt null of matching size.
pub fn hoeffding_test_with_null(
    sample: &PairedSample,
    null: &HoeffdingNull,
) -> Result<AssociationStatistic> {
    let n = need(sample, 5)?;
    tie_free(sample)?;
    if n != null.n {
        return Err(Error::Config(format!(
            "Hoeffding null built for n = {}, sample has n = {n}",
            null.n
        )));
    }
    let num = hoeffding_numerator(&ranks(&sample.xs(), None), &ranks(&sample.ys(), None));
    Ok(AssociationStatistic {
        name: ReferenceTest::Hoeffding,
        value: num as f64 * hoeffding_scale(n),
        p_value: null.p_value(num),
        n,
    })
}

/// Hoeffding test with a seeded Monte Carlo permutation p-value.
pub fn hoeffding_test(
    sample: &PairedSample,
    mc_reps: usize,
    seed: u64,
) -> Result<AssociationStatistic> {
    let n = need(sample, 5)?;
    tie_free(sample)?;
    hoeffding_test_with_null(sample, &HoeffdingNull::new(n, mc_reps, seed)?)
}
