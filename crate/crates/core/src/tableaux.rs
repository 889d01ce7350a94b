//! Exact null distribution of the longest increasing subsequence length.
//!
//! By the Robinson-Schensted correspondence the number of permutations of
//! `n` with `L_n = k` is the sum of `f_lambda^2` over shapes `lambda` of `n`
//! with first row `k`, where `f_lambda` counts standard Young tableaux.

use std::fmt::Write as _;
use std::path::Path;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::modular;
use crate::partition::{hook_numbers, ShapePartition};

pub use crate::modular::MAX_TABLE_N;

/// Number of standard Young tableaux of a shape.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SytCount(pub BigUint);

impl SytCount {
    pub fn value(&self) -> &BigUint {
        &self.0
    }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, i| acc * i)
}

fn syt_of_parts(parts: &[u32]) -> BigUint {
    let n: usize = parts.iter().map(|&p| p as usize).sum();
    let hooks = hook_numbers(parts)
        .into_iter()
        .fold(BigUint::one(), |acc, h| acc * h);
    let num = factorial(n);
    let (q, r) = (&num / &hooks, &num % &hooks);
    assert!(r.is_zero(), "hook product does not divide n! for {parts:?}");
    q
}

/// `n! / prod(hooks)`, the hook-length formula.
pub fn count_syt(shape: &ShapePartition) -> SytCount {
    SytCount(syt_of_parts(shape.parts()))
}

/// `#{pi in S_n : L_n(pi) = k}` as a sum of squared tableau counts over
/// every shape of `n` whose first row is `k`.
pub fn count_perms_with_lis(n: usize, k: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::out_of_range("n", n, ">= 1"));
    }
    if k == 0 || k > n {
        return Err(Error::out_of_range("k", k, format!("1..={n}")));
    }
    let mut parts = vec![k as u32];
    let mut total = BigUint::zero();
    shapes_below(n - k, k as u32, &mut parts, &mut |p| {
        let f = syt_of_parts(p);
        total += &f * &f;
    });
    Ok(total)
}

/// Calls `visit` with `prefix` extended by every partition of `rest` whose
/// parts are at most `cap`.
fn shapes_below(rest: usize, cap: u32, prefix: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
    if rest == 0 {
        visit(prefix);
        return;
    }
    for part in (1..=cap.min(rest as u32)).rev() {
        prefix.push(part);
        shapes_below(rest - part as usize, part, prefix, visit);
        prefix.pop();
    }
}

/// Exact distribution of `L_n` under the uniform law on `S_n`, for every
/// `n <= n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactLnTable {
    n_max: usize,
    counts: Vec<Vec<BigUint>>,
    probabilities: Vec<Vec<f64>>,
    cdf: Vec<Vec<f64>>,
    sf: Vec<Vec<f64>>,
    modes: Vec<usize>,
}

impl ExactLnTable {
    /// Builds a table from exact rows, `counts[n - 1][k - 1]`, checking that
    /// each row sums to `n!`.
    pub fn from_counts(counts: Vec<Vec<BigUint>>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::MalformedTable {
                line: 0,
                reason: "no rows".into(),
            });
        }
        let n_max = counts.len();
        let mut probabilities = Vec::with_capacity(n_max);
        let mut cdf = Vec::with_capacity(n_max);
        let mut sf = Vec::with_capacity(n_max);
        let mut modes = Vec::with_capacity(n_max);
        let mut nfact = BigUint::one();
        for (i, row) in counts.iter().enumerate() {
            let n = i + 1;
            nfact *= n as u64;
            if row.len() != n {
                return Err(Error::MalformedTable {
                    line: 0,
                    reason: format!("row n = {n} has {} entries", row.len()),
                });
            }
            let sum: BigUint = row.iter().sum();
            if sum != nfact {
                return Err(Error::RowSumMismatch {
                    n,
                    found: sum.to_string(),
                    expected: nfact.to_string(),
                });
            }
            let denom = BigInt::from(nfact.clone());
            let ratio = |num: &BigUint| {
                BigRational::new(BigInt::from(num.clone()), denom.clone())
                    .to_f64()
                    .expect("ratio in [0, 1]")
            };
            probabilities.push(row.iter().map(ratio).collect());
            let mut below = BigUint::zero();
            let mut c = Vec::with_capacity(n);
            let mut s = Vec::with_capacity(n);
            for count in row {
                below += count;
                c.push(ratio(&below));
                s.push(ratio(&(&nfact - &below)));
            }
            cdf.push(c);
            sf.push(s);
            let mode = row
                .iter()
                .enumerate()
                .fold(
                    (0, &row[0]),
                    |best, (k, v)| if v > best.1 { (k, v) } else { best },
                )
                .0
                + 1;
            modes.push(mode);
        }
        Ok(Self {
            n_max,
            counts,
            probabilities,
            cdf,
            sf,
            modes,
        })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    fn check(&self, n: usize, k: usize) {
        assert!(
            (1..=self.n_max).contains(&n) && (1..=n).contains(&k),
            "(n, k) = ({n}, {k}) outside table with n_max = {}",
            self.n_max
        );
    }

    /// Exact count of permutations of `n` with `L_n = k`.
    pub fn count(&self, n: usize, k: usize) -> &BigUint {
        self.check(n, k);
        &self.counts[n - 1][k - 1]
    }

    /// The row for `n`, indexed by `k - 1`.
    pub fn counts_row(&self, n: usize) -> &[BigUint] {
        self.check(n, 1);
        &self.counts[n - 1]
    }

    /// `P(L_n = k)` rounded to the nearest `f64`.
    pub fn probability(&self, n: usize, k: usize) -> f64 {
        self.check(n, k);
        self.probabilities[n - 1][k - 1]
    }

    pub fn probabilities_row(&self, n: usize) -> &[f64] {
        self.check(n, 1);
        &self.probabilities[n - 1]
    }

    /// `P(L_n <= k)`, computed exactly then rounded.
    pub fn cdf(&self, n: usize, k: usize) -> f64 {
        if k == 0 {
            self.check(n, 1);
            return 0.0;
        }
        self.check(n, k);
        self.cdf[n - 1][k - 1]
    }

    /// `P(L_n > k)`, computed exactly then rounded.
    pub fn sf(&self, n: usize, k: usize) -> f64 {
        if k == 0 {
            self.check(n, 1);
            return 1.0;
        }
        self.check(n, k);
        self.sf[n - 1][k - 1]
    }

    /// Smallest most likely value of `L_n`.
    pub fn mode(&self, n: usize) -> usize {
        self.check(n, 1);
        self.modes[n - 1]
    }

    /// SHA-256 over every count's decimal string followed by a newline, in
    /// `(n, k)` order.
    pub fn checksum(&self) -> String {
        let mut h = Sha256::new();
        for row in &self.counts {
            for c in row {
                h.update(c.to_string().as_bytes());
                h.update(b"\n");
            }
        }
        h.finalize()
            .iter()
            .fold(String::with_capacity(64), |mut s, b| {
                let _ = write!(s, "{b:02x}");
                s
            })
    }

    /// CSV text with header `n,k,count,probability` and a checksum trailer.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,k,count,probability\n");
        for (i, row) in self.counts.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{},{},{},{:.16e}",
                    i + 1,
                    j + 1,
                    c,
                    self.probabilities[i][j]
                );
            }
        }
        let _ = writeln!(out, "# checksum: {}", self.checksum());
        out
    }

    /// Parses the CSV format written by [`ExactLnTable::to_csv`]. The
    /// checksum line is optional.
    pub fn from_csv(text: &str) -> Result<Self> {
        let malformed = |line: usize, reason: String| Error::MalformedTable { line, reason };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        match lines.next() {
            Some((_, "n,k,count,probability")) => {}
            Some((line, other)) => {
                return Err(malformed(line, format!("unexpected header {other:?}")))
            }
            None => return Err(malformed(1, "empty file".into())),
        }
        let mut counts: Vec<Vec<BigUint>> = Vec::new();
        let mut stated_probs: Vec<(usize, usize, usize, f64)> = Vec::new();
        let mut checksum = None;
        for (line, l) in lines {
            if l.is_empty() {
                continue;
            }
            if let Some(rest) = l.strip_prefix('#') {
                let rest = rest.trim();
                match rest.strip_prefix("checksum:") {
                    Some(hex) if checksum.is_none() => {
                        checksum = Some((line, hex.trim().to_string()))
                    }
                    Some(_) => return Err(malformed(line, "repeated checksum line".into())),
                    None => {}
                }
                continue;
            }
            if checksum.is_some() {
                return Err(malformed(line, "data after checksum line".into()));
            }
            let fields: Vec<&str> = l.split(',').map(str::trim).collect();
            if fields.len() != 4 {
                return Err(malformed(
                    line,
                    format!("expected 4 fields, found {}", fields.len()),
                ));
            }
            let n: usize = fields[0]
                .parse()
                .map_err(|_| malformed(line, format!("bad n {:?}", fields[0])))?;
            let k: usize = fields[1]
                .parse()
                .map_err(|_| malformed(line, format!("bad k {:?}", fields[1])))?;
            let count: BigUint = fields[2]
                .parse()
                .map_err(|_| malformed(line, format!("bad count {:?}", fields[2])))?;
            let prob: f64 = fields[3]
                .parse()
                .map_err(|_| malformed(line, format!("bad probability {:?}", fields[3])))?;
            let expected_n = if counts.last().is_some_and(|r| r.len() < counts.len()) {
                counts.len()
            } else {
                counts.len() + 1
            };
            let expected_k = if expected_n > counts.len() {
                1
            } else {
                counts[expected_n - 1].len() + 1
            };
            if (n, k) != (expected_n, expected_k) {
                return Err(malformed(
                    line,
                    format!("expected row ({expected_n}, {expected_k}), found ({n}, {k})"),
                ));
            }
            if k == 1 {
                counts.push(Vec::with_capacity(n));
            }
            counts[n - 1].push(count);
            stated_probs.push((line, n, k, prob));
        }
        if let Some(last) = counts.last() {
            if last.len() != counts.len() {
                return Err(malformed(
                    text.lines().count(),
                    format!("row n = {} is incomplete", counts.len()),
                ));
            }
        }
        let table = Self::from_counts(counts)?;
        for (line, n, k, p) in stated_probs {
            let exact = table.probability(n, k);
            if (p - exact).abs() > 1e-12 * exact.max(f64::MIN_POSITIVE) {
                return Err(malformed(
                    line,
                    format!("probability {p:e} disagrees with count ({exact:e})"),
                ));
            }
        }
        if let Some((_, stated)) = checksum {
            let found = table.checksum();
            if !stated.eq_ignore_ascii_case(&found) {
                return Err(Error::ChecksumMismatch {
                    expected: stated,
                    found,
                });
            }
        }
        Ok(table)
    }

    /// The table for `n <= 100` shipped with the crate.
    pub fn bundled() -> Result<Self> {
        Self::from_csv(BUNDLED_TABLE)
    }
}

const BUNDLED_TABLE: &str = include_str!("../data/ln_exact_table_100.csv");

/// Computes the exact table for every `n <= n_max`.
pub fn build_table(n_max: usize) -> Result<ExactLnTable> {
    ExactLnTable::from_counts(modular::lis_counts(n_max)?)
}

pub fn save_table(table: &ExactLnTable, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, table.to_csv()).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_table(path: impl AsRef<Path>) -> Result<ExactLnTable> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    ExactLnTable::from_csv(&text)
}
