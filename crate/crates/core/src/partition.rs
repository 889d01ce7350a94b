//! Integer partitions as Young diagram shapes.

use crate::error::{Error, Result};

/// Largest `n` accepted by [`enumerate_partitions`]. Partition numbers grow
/// like `exp(pi * sqrt(2n/3))`; `p(130)` is already about 5.3e9.
pub const MAX_ENUMERATION_N: usize = 130;

/// A weakly decreasing list of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShapePartition {
    parts: Vec<u32>,
}

impl ShapePartition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition("parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "parts {parts:?} are not weakly decreasing"
            )));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of cells.
    pub fn size(&self) -> usize {
        self.parts.iter().map(|&p| p as usize).sum()
    }

    /// Length of the first row, i.e. the number of columns.
    pub fn first_row(&self) -> usize {
        self.parts[0] as usize
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    /// The transposed diagram.
    pub fn conjugate(&self) -> Self {
        Self {
            parts: conjugate_parts(&self.parts),
        }
    }

    /// Hook length of every cell in row-major order.
    pub fn hook_numbers(&self) -> Vec<u32> {
        hook_numbers(&self.parts)
    }
}

pub(crate) fn conjugate_parts(parts: &[u32]) -> Vec<u32> {
    let cols = parts.first().copied().unwrap_or(0);
    (1..=cols)
        .map(|c| parts.iter().take_while(|&&p| p >= c).count() as u32)
        .collect()
}

/// Hook lengths `arm + leg + 1` of a weakly decreasing part list, row-major.
pub(crate) fn hook_numbers(parts: &[u32]) -> Vec<u32> {
    let conj = conjugate_parts(parts);
    let mut hooks = Vec::with_capacity(parts.iter().map(|&p| p as usize).sum());
    for (r, &len) in parts.iter().enumerate() {
        for c in 0..len as usize {
            let arm = len - 1 - c as u32;
            let leg = conj[c] - 1 - r as u32;
            hooks.push(arm + leg + 1);
        }
    }
    hooks
}

/// Visits every partition of `n` once, in lexicographic order starting at
/// `1^n` (Zoghbi and Stojmenovic's ZS2 scheme, constant amortized time).
/// Parts are passed largest first. Returns the number of partitions.
pub fn enumerate_partitions(n: usize, mut visit: impl FnMut(&[u32])) -> Result<u64> {
    if n == 0 || n > MAX_ENUMERATION_N {
        return Err(Error::out_of_range(
            "partition size",
            n,
            format!("1..={MAX_ENUMERATION_N}"),
        ));
    }
    let mut x = vec![1u32; n + 1];
    visit(&x[1..=n]);
    if n == 1 {
        return Ok(1);
    }
    let mut count = 1u64;
    // x[0] acts as a sentinel that never equals a part.
    x[0] = 0;
    x[1] = 2;
    let mut h = 1usize;
    let mut m = n - 1;
    visit(&x[1..=m]);
    count += 1;
    while x[1] as usize != n {
        if m - h > 1 {
            h += 1;
            x[h] = 2;
            m -= 1;
        } else {
            let mut j = m - 2;
            while x[j] == x[m - 1] {
                x[j] = 1;
                j -= 1;
            }
            h = j + 1;
            x[h] = x[m - 1] + 1;
            let r = x[m] as usize + x[m - 1] as usize * (m - h - 1);
            x[m] = 1;
            if m - h > 1 {
                x[m - 1] = 1;
            }
            m = h + r - 1;
        }
        visit(&x[1..=m]);
        count += 1;
    }
    Ok(count)
}

/// Partition number `p(n)` by Euler's pentagonal recurrence, exact for
/// `n <= 405` in `u64`.
pub fn partition_count(n: usize) -> u64 {
    let mut p = vec![0u64; n + 1];
    p[0] = 1;
    for i in 1..=n {
        let mut total: i128 = 0;
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > i {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            total += sign * p[i - g1] as i128;
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= i {
                total += sign * p[i - g2] as i128;
            }
        }
        p[i] = total as u64;
    }
    p[n]
}
