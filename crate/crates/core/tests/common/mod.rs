#![allow(dead_code)]

use std::collections::HashSet;
use std::sync::OnceLock;

use lntest_core::partition::enumerate_partitions;
use lntest_core::permutation::{longest_increasing_len, ranks};
use lntest_core::reference::{hoeffding_test, kendall_test, pearson_test, spearman_test};
use lntest_core::{
    build_table, count_syt, exact_p_value, lis_lds, ln_test, partition_count,
    permutation_from_sample, run_power_study, ExactLnTable, PValueVariant, PairedSample,
    Permutation, PowerStudyConfig, PowerTest, ScenarioKind, ShapePartition, TiePolicy,
    TwDistribution,
};
use num_bigint::BigUint;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub const CASES: u32 = 1000;

pub fn table() -> &'static ExactLnTable {
    static TABLE: OnceLock<ExactLnTable> = OnceLock::new();
    TABLE.get_or_init(|| ExactLnTable::bundled().expect("bundled table"))
}

pub fn tw() -> &'static TwDistribution {
    TwDistribution::shared().expect("Tracy-Widom solve")
}

/// O(n^2) longest increasing subsequence.
pub fn dp_lis(v: &[u32]) -> usize {
    let mut best = vec![1usize; v.len()];
    for i in 0..v.len() {
        for j in 0..i {
            if v[j] < v[i] {
                best[i] = best[i].max(best[j] + 1);
            }
        }
    }
    best.into_iter().max().unwrap_or(0)
}

/// Rank permutation by direct counting.
pub fn double_rank(pairs: &[(f64, f64)]) -> Vec<u32> {
    let count = |i: usize, axis: fn(&(f64, f64)) -> f64| {
        pairs.iter().filter(|p| axis(p) <= axis(&pairs[i])).count()
    };
    let mut image = vec![0u32; pairs.len()];
    for i in 0..pairs.len() {
        image[count(i, |p| p.0) - 1] = count(i, |p| p.1) as u32;
    }
    image
}

/// `#{pi in S_n : L(pi) = k}` for every k, by visiting all `n!` permutations.
pub fn brute_force_counts(n: usize) -> Vec<u64> {
    let mut counts = vec![0u64; n + 1];
    let mut a: Vec<u32> = (1..=n as u32).collect();
    // Heap's algorithm
    let mut c = vec![0usize; n];
    counts[longest_increasing_len(&a)] += 1;
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            counts[longest_increasing_len(&a)] += 1;
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    counts
}

/// Standard Young tableaux of a shape by removing corners.
pub fn syt_by_corners(parts: &[u32]) -> BigUint {
    if parts.iter().sum::<u32>() <= 1 {
        return BigUint::from(1u32);
    }
    let mut total = BigUint::from(0u32);
    for i in 0..parts.len() {
        let is_corner = i + 1 == parts.len() || parts[i + 1] < parts[i];
        if is_corner {
            let mut smaller = parts.to_vec();
            smaller[i] -= 1;
            if smaller[i] == 0 {
                smaller.pop();
            }
            total += syt_by_corners(&smaller);
        }
    }
    total
}

fn config() -> Config {
    Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    }
}

fn check<S: Strategy>(
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    TestRunner::new(config())
        .run(&strategy, test)
        .map_err(|e| e.to_string())
}

fn permutation(max_n: usize) -> impl Strategy<Value = Vec<u32>> {
    (1..=max_n).prop_flat_map(|n| Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle())
}

/// Tie-free sample whose rank permutation is the generated one, with
/// non-integer coordinates.
fn sample(min_n: usize, max_n: usize) -> impl Strategy<Value = PairedSample> {
    (min_n..=max_n)
        .prop_flat_map(|n| {
            let ids: Vec<u32> = (0..n as u32).collect();
            (
                Just(ids.clone()).prop_shuffle(),
                Just(ids).prop_shuffle(),
                prop::collection::vec((0.0f64..0.9, 0.0f64..0.9), n),
                -50.0f64..50.0,
            )
        })
        .prop_map(|(a, b, jitter, shift)| {
            let pairs = a
                .iter()
                .zip(&b)
                .zip(&jitter)
                .map(|((&i, &j), &(u, v))| (i as f64 + u + shift, 3.0 * (j as f64 + v) - shift))
                .collect();
            PairedSample::new(pairs).unwrap()
        })
}

fn transformed(s: &PairedSample) -> PairedSample {
    let pairs = s
        .pairs()
        .iter()
        .map(|&(x, y)| ((x / 40.0).exp(), y * y * y + 2.0 * y - 7.0))
        .collect();
    PairedSample::new(pairs).unwrap()
}

fn partition(max_n: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1..=max_n, 1..8).prop_map(|mut parts| {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        parts
    })
}

fn perm_of(image: Vec<u32>) -> Permutation {
    Permutation::new(image).unwrap()
}

pub fn lis_matches_dp_oracle() -> Result<(), String> {
    check(permutation(60), |v| {
        prop_assert_eq!(longest_increasing_len(&v), dp_lis(&v));
        Ok(())
    })
}

pub fn rank_permutation_matches_double_rank() -> Result<(), String> {
    check(sample(1, 40), |s| {
        let p = permutation_from_sample(&s, TiePolicy::Reject, None).unwrap();
        prop_assert_eq!(p.image(), &double_rank(s.pairs())[..]);
        Ok(())
    })
}

pub fn rank_invariance() -> Result<(), String> {
    check(sample(5, 120), |s| {
        let t = transformed(&s);
        let a = permutation_from_sample(&s, TiePolicy::Reject, None).unwrap();
        let b = permutation_from_sample(&t, TiePolicy::Reject, None).unwrap();
        prop_assert_eq!(&a, &b);
        let tw = Some(tw());
        for variant in [PValueVariant::Exclusive, PValueVariant::Inclusive] {
            let ra = ln_test(&s, 0.05, table(), tw, variant).unwrap();
            let rb = ln_test(&t, 0.05, table(), tw, variant).unwrap();
            prop_assert_eq!(ra, rb);
        }
        prop_assert_eq!(spearman_test(&s).unwrap(), spearman_test(&t).unwrap());
        prop_assert_eq!(kendall_test(&s).unwrap(), kendall_test(&t).unwrap());
        prop_assert_eq!(
            hoeffding_test(&s, 25, 3).unwrap(),
            hoeffding_test(&t, 25, 3).unwrap()
        );
        Ok(())
    })
}

pub fn erdos_szekeres_bound() -> Result<(), String> {
    check(permutation(200), |v| {
        let n = v.len();
        let r = lis_lds(&perm_of(v));
        prop_assert!(r.lis_length * r.lds_length >= n);
        prop_assert!(r.lis_length + r.lds_length <= n + 1);
        Ok(())
    })
}

pub fn inverse_and_reversal_symmetry() -> Result<(), String> {
    check(permutation(150), |v| {
        let p = perm_of(v);
        let r = lis_lds(&p);
        prop_assert_eq!(lis_lds(&p.inverse()).lis_length, r.lis_length);
        let rev = lis_lds(&p.value_reversed());
        prop_assert_eq!(rev.lis_length, r.lds_length);
        prop_assert_eq!(rev.lds_length, r.lis_length);
        Ok(())
    })
}

pub fn transpose_gives_inverse() -> Result<(), String> {
    check(sample(1, 60), |s| {
        let p = permutation_from_sample(&s, TiePolicy::Reject, None).unwrap();
        let q = permutation_from_sample(&s.transposed(), TiePolicy::Reject, None).unwrap();
        prop_assert_eq!(q, p.inverse());
        Ok(())
    })
}

pub fn conjugate_shape_symmetry() -> Result<(), String> {
    check(partition(9), |parts| {
        let shape = ShapePartition::new(parts.clone()).unwrap();
        let conj = shape.conjugate();
        prop_assert_eq!(&conj.conjugate(), &shape);
        prop_assert_eq!(conj.size(), shape.size());
        prop_assert_eq!(conj.first_row(), shape.rows());
        let mut h1 = shape.hook_numbers();
        let mut h2 = conj.hook_numbers();
        h1.sort_unstable();
        h2.sort_unstable();
        prop_assert_eq!(h1, h2);
        prop_assert_eq!(count_syt(&shape), count_syt(&conj));
        Ok(())
    })
}

pub fn hook_formula_matches_corner_recursion() -> Result<(), String> {
    check(
        prop::collection::vec(1u32..=5, 1..5).prop_map(|mut p| {
            p.sort_unstable_by(|a, b| b.cmp(a));
            p
        }),
        |parts| {
            let shape = ShapePartition::new(parts.clone()).unwrap();
            prop_assert_eq!(count_syt(&shape).0, syt_by_corners(&parts));
            Ok(())
        },
    )
}

pub fn partition_enumeration_count() -> Result<(), String> {
    check(1usize..=30, |n| {
        let mut seen = HashSet::new();
        let mut sums_ok = true;
        let visited = enumerate_partitions(n, |p| {
            sums_ok &= p.iter().map(|&x| x as usize).sum::<usize>() == n;
            let mut p = p.to_vec();
            p.sort_unstable();
            seen.insert(p);
        })
        .unwrap();
        prop_assert!(sums_ok);
        prop_assert_eq!(visited, partition_count(n));
        prop_assert_eq!(seen.len() as u64, visited);
        Ok(())
    })
}

pub fn cdf_monotonicity() -> Result<(), String> {
    check(
        (1usize..=100).prop_flat_map(|n| (Just(n), 1..=n)),
        |(n, k)| {
            let t = table();
            let (c, s) = (t.cdf(n, k), t.sf(n, k));
            prop_assert!((0.0..=1.0).contains(&c) && (0.0..=1.0).contains(&s));
            prop_assert!(t.cdf(n, k - 1) <= c);
            if k < n {
                prop_assert!(c <= t.cdf(n, k + 1));
            } else {
                prop_assert_eq!(c, 1.0);
            }
            prop_assert!((c + s - 1.0).abs() < 4.0 * f64::EPSILON);
            Ok(())
        },
    )
}

pub fn tracy_widom_monotone_and_invertible() -> Result<(), String> {
    check(
        (-10.0f64..12.0, -10.0f64..12.0, 1e-4f64..(1.0 - 1e-4)),
        |(a, b, p)| {
            let d = tw();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(d.cdf(lo).unwrap() <= d.cdf(hi).unwrap());
            prop_assert!(d.density(lo).unwrap() >= 0.0);
            let q = d.quantile(p).unwrap();
            prop_assert!((d.cdf(q).unwrap() - p).abs() < 1e-6);
            Ok(())
        },
    )
}

pub fn table_round_trip() -> Result<(), String> {
    check(
        (1usize..=24, any::<prop::sample::Index>()),
        |(n_max, pick)| {
            let built = build_table(n_max).unwrap();
            let text = built.to_csv();
            let back = ExactLnTable::from_csv(&text).unwrap();
            prop_assert_eq!(&back, &built);
            prop_assert_eq!(back.checksum(), built.checksum());
            // perturbing any count must be caught
            let body: Vec<&str> = text
                .lines()
                .filter(|l| !l.starts_with(['n', '#']))
                .collect();
            let line = body[pick.index(body.len())];
            let mut fields: Vec<String> = line.split(',').map(str::to_string).collect();
            let count: BigUint = fields[2].parse().unwrap();
            fields[2] = (count + 1u32).to_string();
            let bad = text.replacen(line, &fields.join(","), 1);
            prop_assert!(ExactLnTable::from_csv(&bad).is_err());
            Ok(())
        },
    )
}

pub fn p_value_properties() -> Result<(), String> {
    check(
        (1usize..=100).prop_flat_map(|n| (Just(n), 1..=n)),
        |(n, l)| {
            let t = table();
            let a = exact_p_value(t, n, l, PValueVariant::Exclusive);
            let b = exact_p_value(t, n, l, PValueVariant::Inclusive);
            prop_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
            if l <= t.mode(n) {
                prop_assert_eq!(a, b);
            } else {
                prop_assert!(b >= a);
            }
            Ok(())
        },
    )
}

pub fn spearman_is_pearson_on_ranks() -> Result<(), String> {
    check(sample(3, 80), |s| {
        let rx: Vec<f64> = ranks(&s.xs(), None).iter().map(|&r| r as f64).collect();
        let ry: Vec<f64> = ranks(&s.ys(), None).iter().map(|&r| r as f64).collect();
        let on_ranks = PairedSample::from_columns(&rx, &ry).unwrap();
        let rs = spearman_test(&s).unwrap().value;
        prop_assert!((rs - pearson_test(&on_ranks).unwrap().value).abs() < 1e-12);
        Ok(())
    })
}

pub fn kendall_bounds() -> Result<(), String> {
    check(
        permutation(80).prop_filter("n >= 3", |v| v.len() >= 3),
        |v| {
            let n = v.len();
            let xs: Vec<f64> = (1..=n).map(|i| i as f64).collect();
            let ys: Vec<f64> = v.iter().map(|&y| y as f64).collect();
            let s = PairedSample::from_columns(&xs, &ys).unwrap();
            let k = kendall_test(&s).unwrap();
            prop_assert!((-1.0..=1.0).contains(&k.value));
            prop_assert!((0.0..=1.0).contains(&k.p_value));
            let monotone_up = v.windows(2).all(|w| w[0] < w[1]);
            let monotone_down = v.windows(2).all(|w| w[0] > w[1]);
            prop_assert_eq!(k.value == 1.0, monotone_up);
            prop_assert_eq!(k.value == -1.0, monotone_down);
            let tr = kendall_test(&s.transposed()).unwrap();
            prop_assert_eq!(tr.value, k.value);
            Ok(())
        },
    )
}

pub fn power_study_determinism() -> Result<(), String> {
    let scenario = prop_oneof![
        Just(ScenarioKind::IndepNormal),
        (0.1f64..4.0).prop_map(|shape| ScenarioKind::IndepPareto { scale: 1.0, shape }),
        (0.1f64..4.0).prop_map(|shape| ScenarioKind::IndepWeibull { scale: 2.0, shape }),
        (1u32..20).prop_map(|df| ScenarioKind::IndepStudentT { df }),
        (-0.95f64..0.95).prop_map(|rho| ScenarioKind::BivariateNormal { rho }),
        (-0.95f64..0.95).prop_map(|rho| ScenarioKind::MixtureNormal5050 { rho }),
    ];
    check((scenario, any::<u64>(), 5usize..40), |(kind, seed, n)| {
        let mut cfg = PowerStudyConfig::new(vec![kind]);
        cfg.sample_sizes = vec![n];
        cfg.levels = vec![0.05, 0.2];
        cfg.replications = 8;
        cfg.seed = seed;
        cfg.tests = vec![PowerTest::Ln, PowerTest::Spearman, PowerTest::Kendall];
        let a = run_power_study(&cfg, table(), None).unwrap();
        let b = run_power_study(&cfg, table(), None).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.to_csv(), b.to_csv());
        for r in &a.rows {
            prop_assert!((0.0..=1.0).contains(&r.power));
        }
        prop_assert_eq!(a.total_errors(), 0);
        Ok(())
    })
}

pub type Property = (&'static str, fn() -> Result<(), String>);

pub const PROPERTIES: [Property; 17] = [
    ("lis matches dp oracle", lis_matches_dp_oracle),
    (
        "rank permutation matches double rank",
        rank_permutation_matches_double_rank,
    ),
    ("rank invariance", rank_invariance),
    ("erdos-szekeres bound", erdos_szekeres_bound),
    (
        "inverse and reversal symmetry",
        inverse_and_reversal_symmetry,
    ),
    ("transpose gives inverse", transpose_gives_inverse),
    ("conjugate shape symmetry", conjugate_shape_symmetry),
    (
        "hook formula matches corner recursion",
        hook_formula_matches_corner_recursion,
    ),
    ("partition enumeration count", partition_enumeration_count),
    ("cdf monotonicity", cdf_monotonicity),
    (
        "tracy-widom monotone and invertible",
        tracy_widom_monotone_and_invertible,
    ),
    ("table round trip", table_round_trip),
    ("p-value properties", p_value_properties),
    ("spearman is pearson on ranks", spearman_is_pearson_on_ranks),
    ("kendall bounds", kendall_bounds),
    ("power study determinism", power_study_determinism),
    (
        "null p-values lie in unit interval",
        null_p_values_in_unit_interval,
    ),
];

pub fn null_p_values_in_unit_interval() -> Result<(), String> {
    check(sample(5, 150), |s| {
        let r = ln_test(&s, 0.05, table(), Some(tw()), PValueVariant::Exclusive).unwrap();
        let p = r.p_value.unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
        if r.n <= table().n_max() {
            prop_assert_eq!(r.reject, p <= 0.05);
        }
        for stat in [pearson_test(&s), spearman_test(&s), kendall_test(&s)] {
            prop_assert!((0.0..=1.0).contains(&stat.unwrap().p_value));
        }
        Ok(())
    })
}
