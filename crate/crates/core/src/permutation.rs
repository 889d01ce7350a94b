//! Paired samples, their rank permutation, and longest increasing /
//! decreasing subsequence lengths.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Axis, Error, Result};

/// An ordered list of `(x, y)` observations.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSample {
    pairs: Vec<(f64, f64)>,
}

impl PairedSample {
    pub fn new(pairs: Vec<(f64, f64)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(index) = pairs
            .iter()
            .position(|(x, y)| !x.is_finite() || !y.is_finite())
        {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { pairs })
    }

    pub fn from_columns(x: &[f64], y: &[f64]) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch {
                x: x.len(),
                y: y.len(),
            });
        }
        Self::new(x.iter().copied().zip(y.iter().copied()).collect())
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn xs(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.0).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.1).collect()
    }

    /// Returns the first axis that contains a repeated value, if any.
    pub fn tied_axis(&self) -> Option<Axis> {
        if has_ties(self.pairs.iter().map(|p| p.0)) {
            Some(Axis::X)
        } else if has_ties(self.pairs.iter().map(|p| p.1)) {
            Some(Axis::Y)
        } else {
            None
        }
    }

    /// Swaps the roles of `x` and `y`.
    pub fn transposed(&self) -> Self {
        Self {
            pairs: self.pairs.iter().map(|&(x, y)| (y, x)).collect(),
        }
    }
}

fn has_ties(values: impl Iterator<Item = f64>) -> bool {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.windows(2).any(|w| w[0] == w[1])
}

/// How tied coordinates are handled when forming ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TiePolicy {
    /// Refuse samples with repeated x or y values.
    #[default]
    Reject,
    /// Order tied values by a seeded uniform shuffle.
    RandomBreak,
}

/// 1-based ranks of `values`. Ties are resolved by `tiebreak[i]` (smaller
/// first) when given, otherwise by position.
pub fn ranks(values: &[f64], tiebreak: Option<&[u32]>) -> Vec<u32> {
    let mut order: Vec<u32> = (0..values.len() as u32).collect();
    order.sort_unstable_by(|&a, &b| {
        let (a, b) = (a as usize, b as usize);
        values[a]
            .total_cmp(&values[b])
            .then_with(|| match tiebreak {
                Some(t) => t[a].cmp(&t[b]),
                None => a.cmp(&b),
            })
    });
    let mut r = vec![0u32; values.len()];
    for (rank, &i) in order.iter().enumerate() {
        r[i as usize] = rank as u32 + 1;
    }
    r
}

/// A bijection on `{1, ..., n}` stored as its image sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<u32>,
}

impl Permutation {
    pub fn new(image: Vec<u32>) -> Result<Self> {
        let n = image.len();
        if n == 0 {
            return Err(Error::EmptySample);
        }
        let mut seen = vec![false; n];
        for &v in &image {
            let idx = v as usize;
            if idx == 0 || idx > n {
                return Err(Error::InvalidPermutation {
                    n,
                    reason: format!("value {v} outside 1..={n}"),
                });
            }
            if std::mem::replace(&mut seen[idx - 1], true) {
                return Err(Error::InvalidPermutation {
                    n,
                    reason: format!("value {v} repeated"),
                });
            }
        }
        Ok(Self { image })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            image: (1..=n as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[u32] {
        &self.image
    }

    pub fn into_image(self) -> Vec<u32> {
        self.image
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.image.len()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v as usize - 1] = i as u32 + 1;
        }
        Self { image: inv }
    }

    /// The permutation `i -> n + 1 - pi(i)`.
    pub fn value_reversed(&self) -> Self {
        let n = self.image.len() as u32;
        Self {
            image: self.image.iter().map(|&v| n + 1 - v).collect(),
        }
    }
}

/// Builds the rank permutation `pi_s` of a sample: after sorting pairs by
/// `x`, position `i` holds the rank of the matching `y`. Equivalently
/// `pi_s(rank(x_i)) = rank(y_i)`.
pub fn permutation_from_sample(
    sample: &PairedSample,
    tie_policy: TiePolicy,
    seed: Option<u64>,
) -> Result<Permutation> {
    let xs = sample.xs();
    let ys = sample.ys();
    let (rx, ry) = match tie_policy {
        TiePolicy::Reject => {
            if let Some(axis) = sample.tied_axis() {
                return Err(Error::TiesPresent { axis });
            }
            (ranks(&xs, None), ranks(&ys, None))
        }
        TiePolicy::RandomBreak => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(0));
            let n = xs.len() as u32;
            let mut kx: Vec<u32> = (0..n).collect();
            let mut ky: Vec<u32> = (0..n).collect();
            kx.shuffle(&mut rng);
            ky.shuffle(&mut rng);
            (ranks(&xs, Some(&kx)), ranks(&ys, Some(&ky)))
        }
    };
    Ok(permutation_from_ranks(&rx, &ry))
}

/// Rank permutation from precomputed 1-based rank vectors.
pub(crate) fn permutation_from_ranks(rx: &[u32], ry: &[u32]) -> Permutation {
    let mut image = vec![0u32; rx.len()];
    for (&a, &b) in rx.iter().zip(ry) {
        image[a as usize - 1] = b;
    }
    Permutation { image }
}

/// Lengths of the longest increasing and longest decreasing subsequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LisResult {
    pub lis_length: usize,
    pub lds_length: usize,
}

/// Patience-sorting pile count: number of piles when each value goes on the
/// leftmost pile whose top is not smaller than it.
pub fn longest_increasing_len(values: &[u32]) -> usize {
    let mut tops: Vec<u32> = Vec::with_capacity(64);
    for &v in values {
        let pos = tops.partition_point(|&t| t < v);
        if pos == tops.len() {
            tops.push(v);
        } else {
            tops[pos] = v;
        }
    }
    tops.len()
}

fn longest_decreasing_len(values: &[u32]) -> usize {
    let mut tops: Vec<u32> = Vec::with_capacity(64);
    for &v in values {
        let pos = tops.partition_point(|&t| t.cmp(&v) == Ordering::Greater);
        if pos == tops.len() {
            tops.push(v);
        } else {
            tops[pos] = v;
        }
    }
    tops.len()
}

/// `L_n` and `LD_n` of a permutation in `O(n log n)`.
pub fn lis_lds(perm: &Permutation) -> LisResult {
    LisResult {
        lis_length: longest_increasing_len(&perm.image),
        lds_length: longest_decreasing_len(&perm.image),
    }
}
