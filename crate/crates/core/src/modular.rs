//! Multi-modular evaluation of `sum f_lambda^2` over all shapes of every size
//! up to `n_max`, grouped by first row.
//!
//! Shapes are grown by stacking a new, longest row on top of a smaller shape,
//! so every partition is reached once from the empty diagram. For a shape
//! `mu` with top row `t` and column lengths `mu'`, stacking a row of length
//! `a >= t` multiplies the inverse hook product by
//!
//! ```text
//! 1/(a-t)! * Phi_mu(a),    Phi_mu(x) = prod_{c=1..t} 1/(x - c + 1 + mu'_c)
//! ```
//!
//! and the child's table satisfies
//! `Phi_lambda(x) = Phi_mu(x+1) * (x+1-a)! / (x+1-t)!`, which is a pure shift
//! when `a == t`. Each node therefore costs `O(P)` modular products plus one
//! table of length `n - |lambda| - a + 1`.
//!
//! Residues are reduced modulo several 62-bit primes and recombined exactly.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest table size the engine accepts. Work grows with the total number
/// of partitions of all sizes up to `n_max` (about 1.6e9 at 100).
pub const MAX_TABLE_N: usize = 120;

const MAX_PRIMES: usize = 12;

#[derive(Clone, Copy, Debug)]
struct Mont {
    p: u64,
    pinv_neg: u64,
    r2: u64,
}

impl Mont {
    fn new(p: u64) -> Self {
        let mut inv = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Self {
            p,
            pinv_neg: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline(always)]
    fn mul(&self, a: u64, b: u64) -> u64 {
        let t = a as u128 * b as u128;
        let m = (t as u64).wrapping_mul(self.pinv_neg);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline(always)]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    fn from_mont(&self, a: u64) -> u64 {
        self.mul(a, 1)
    }

    fn pow(&self, base: u64, mut e: u64) -> u64 {
        let mut r = self.to_mont(1);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin; the first twelve prime bases suffice for all
/// 64-bit inputs.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'bases: for &a in &BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// The `count` largest primes below `2^62`, descending.
fn moduli(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut c = (1u64 << 62) - 1;
    while out.len() < count {
        if is_prime_u64(c) {
            out.push(c);
        }
        c -= 2;
    }
    out
}

fn log2_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).log2()).sum()
}

/// Exact `#{pi in S_s : L(pi) = k}` for `1 <= k <= s <= n_max`, indexed
/// `[s - 1][k - 1]`.
pub(crate) fn lis_counts(n_max: usize) -> Result<Vec<Vec<BigUint>>> {
    if n_max == 0 || n_max > MAX_TABLE_N {
        return Err(Error::out_of_range(
            "n_max",
            n_max,
            format!("1..={MAX_TABLE_N}"),
        ));
    }
    // Product of moduli must exceed n_max! (every count is at most that).
    let primes = ((log2_factorial(n_max) + 2.0) / 61.9).ceil() as usize;
    let primes = primes.max(1);
    debug_assert!(primes <= MAX_PRIMES);
    macro_rules! dispatch {
        ($($p:literal)*) => {
            match primes {
                $($p => run::<$p>(n_max),)*
                _ => unreachable!("prime count bounded by MAX_TABLE_N"),
            }
        };
    }
    dispatch!(1 2 3 4 5 6 7 8 9 10 11 12)
}

type Res<const P: usize> = [u64; P];

struct Tables<const P: usize> {
    n: usize,
    ms: [Mont; P],
    fact: Vec<Res<P>>,
    ifact: Vec<Res<P>>,
    one: Res<P>,
}

struct Walker<'a, const P: usize> {
    tb: &'a Tables<P>,
    acc: Vec<Res<P>>,
    pool: Vec<Vec<Res<P>>>,
}

impl<const P: usize> Tables<P> {
    fn new(n: usize) -> Self {
        let ps = moduli(P);
        let ms: [Mont; P] = std::array::from_fn(|q| Mont::new(ps[q]));
        let len = n + 3;
        let mut fact = vec![[0u64; P]; len];
        let mut ifact = vec![[0u64; P]; len];
        for (q, m) in ms.iter().enumerate() {
            fact[0][q] = m.to_mont(1);
            for h in 1..len {
                fact[h][q] = m.mul(fact[h - 1][q], m.to_mont(h as u64));
            }
            ifact[len - 1][q] = m.inv(fact[len - 1][q]);
            for h in (0..len - 1).rev() {
                ifact[h][q] = m.mul(ifact[h + 1][q], m.to_mont(h as u64 + 1));
            }
        }
        let one = std::array::from_fn(|q| ms[q].to_mont(1));
        Self {
            n,
            ms,
            fact,
            ifact,
            one,
        }
    }

    /// Inverse hook product after stacking row `a` on a shape with top row
    /// `t`, inverse hook product `ih` and table `phi` starting at `lo`.
    #[inline(always)]
    fn stack(&self, ih: &Res<P>, t: usize, phi: &[Res<P>], lo: isize, a: usize) -> Res<P> {
        let f = &self.ifact[a - t];
        let ph = &phi[(a as isize - lo) as usize];
        std::array::from_fn(|q| {
            let m = &self.ms[q];
            m.mul(m.mul(ih[q], f[q]), ph[q])
        })
    }

    /// Fills `out` with the child's table on `x in a..=b`.
    fn child_table(
        &self,
        phi: &[Res<P>],
        lo: isize,
        t: usize,
        a: usize,
        b: usize,
        out: &mut Vec<Res<P>>,
    ) {
        out.clear();
        for x in a..=b {
            let pm = &phi[(x as isize + 1 - lo) as usize];
            let f1 = &self.fact[x + 1 - a];
            let f2 = &self.ifact[x + 1 - t];
            out.push(std::array::from_fn(|q| {
                let m = &self.ms[q];
                m.mul(m.mul(pm[q], f1[q]), f2[q])
            }));
        }
    }
}

impl<'a, const P: usize> Walker<'a, P> {
    fn new(tb: &'a Tables<P>) -> Self {
        let n = tb.n;
        Self {
            tb,
            acc: vec![[0u64; P]; (n + 1) * (n + 1)],
            pool: vec![Vec::new(); n + 2],
        }
    }

    #[inline(always)]
    fn record(&mut self, size: usize, first_row: usize, ih: &Res<P>) {
        let n = self.tb.n;
        let cell = &mut self.acc[size * (n + 1) + first_row];
        for q in 0..P {
            let m = &self.tb.ms[q];
            cell[q] = m.add(cell[q], m.mul(ih[q], ih[q]));
        }
    }

    /// Stacks row `a` on the shape `(s, t, ih, phi, lo)`, records it and
    /// walks its subtree.
    fn step(
        &mut self,
        depth: usize,
        s: usize,
        t: usize,
        ih: &Res<P>,
        phi: &[Res<P>],
        lo: isize,
        a: usize,
    ) {
        let tb = self.tb;
        let v = tb.stack(ih, t, phi, lo, a);
        let ns = s + a;
        self.record(ns, a, &v);
        let b = tb.n - ns;
        if a > b {
            return;
        }
        if a == t {
            self.walk(depth + 1, ns, a, &v, phi, lo - 1);
        } else {
            let mut tab = std::mem::take(&mut self.pool[depth]);
            tb.child_table(phi, lo, t, a, b, &mut tab);
            self.walk(depth + 1, ns, a, &v, &tab, a as isize);
            self.pool[depth] = tab;
        }
    }

    fn walk(&mut self, depth: usize, s: usize, t: usize, ih: &Res<P>, phi: &[Res<P>], lo: isize) {
        for a in t.max(1)..=self.tb.n - s {
            self.step(depth, s, t, ih, phi, lo, a);
        }
    }
}

fn run<const P: usize>(n: usize) -> Result<Vec<Vec<BigUint>>> {
    let tb = Tables::<P>::new(n);
    let root = vec![tb.one; n + 2];

    // Single-row shapes are recorded here; each task then owns the subtree
    // below a two-row shape (a2, a1) with a1 <= a2.
    let mut base = Walker::new(&tb);
    for a1 in 1..=n {
        let v = tb.stack(&tb.one, 0, &root, 0, a1);
        base.record(a1, a1, &v);
    }
    let tasks: Vec<(usize, usize)> = (1..=n / 2)
        .flat_map(|a1| (a1..=n - a1).map(move |a2| (a1, a2)))
        .collect();

    let acc = tasks
        .into_par_iter()
        .fold(
            || Walker::new(&tb),
            |mut w, (a1, a2)| {
                let v1 = tb.stack(&tb.one, 0, &root, 0, a1);
                let b = n - a1;
                let mut phi1 = Vec::new();
                tb.child_table(&root, 0, 0, a1, b, &mut phi1);
                w.step(1, a1, a1, &v1, &phi1, a1 as isize, a2);
                w
            },
        )
        .map(|w| w.acc)
        .reduce(
            || vec![[0u64; P]; (n + 1) * (n + 1)],
            |mut x, y| {
                for (cx, cy) in x.iter_mut().zip(&y) {
                    for q in 0..P {
                        cx[q] = tb.ms[q].add(cx[q], cy[q]);
                    }
                }
                x
            },
        );

    let mut total = base.acc;
    for (cx, cy) in total.iter_mut().zip(&acc) {
        for q in 0..P {
            cx[q] = tb.ms[q].add(cx[q], cy[q]);
        }
    }

    let crt = Crt::new(&tb.ms);
    let mut rows = Vec::with_capacity(n);
    for s in 1..=n {
        let f = &tb.fact[s];
        let row = (1..=s)
            .map(|k| {
                let cell = &total[s * (n + 1) + k];
                let residues: Res<P> = std::array::from_fn(|q| {
                    let m = &tb.ms[q];
                    m.from_mont(m.mul(m.mul(cell[q], f[q]), f[q]))
                });
                crt.combine(&residues)
            })
            .collect();
        rows.push(row);
    }
    Ok(rows)
}

/// Garner's mixed-radix reconstruction.
struct Crt {
    primes: Vec<u64>,
    // inv[i][j] = p_j^{-1} mod p_i for j < i
    inv: Vec<Vec<u64>>,
}

impl Crt {
    fn new(ms: &[Mont]) -> Self {
        let primes: Vec<u64> = ms.iter().map(|m| m.p).collect();
        let inv = primes
            .iter()
            .enumerate()
            .map(|(i, &pi)| {
                primes[..i]
                    .iter()
                    .map(|&pj| powmod(pj % pi, pi - 2, pi))
                    .collect()
            })
            .collect();
        Self { primes, inv }
    }

    fn combine(&self, residues: &[u64]) -> BigUint {
        let k = self.primes.len();
        let mut digits = vec![0u64; k];
        for i in 0..k {
            let pi = self.primes[i];
            let mut x = residues[i] % pi;
            for j in 0..i {
                let diff = (x + pi - digits[j] % pi) % pi;
                x = mulmod(diff, self.inv[i][j], pi);
            }
            digits[i] = x;
        }
        let mut value = BigUint::from(0u32);
        for i in (0..k).rev() {
            value = value * self.primes[i] + digits[i];
        }
        value
    }
}
