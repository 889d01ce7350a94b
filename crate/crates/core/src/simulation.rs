//! Seeded scenario samplers and the Monte Carlo power-study engine.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::Path;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lis_test::{asymptotic_report, exact_p_value, tw_critical_values, PValueVariant};
use crate::permutation::{lis_lds, permutation_from_sample, PairedSample, TiePolicy};
use crate::reference::{
    hoeffding_test_with_null, kendall_test, pearson_test, spearman_test, HoeffdingNull,
};
use crate::tableaux::ExactLnTable;
use crate::tracy_widom::TwDistribution;

/// Joint law of `(X, Y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ScenarioKind {
    IndepNormal,
    IndepPareto { scale: f64, shape: f64 },
    IndepWeibull { scale: f64, shape: f64 },
    IndepStudentT { df: u32 },
    BivariateNormal { rho: f64 },
    MixtureNormal5050 { rho: f64 },
}

impl ScenarioKind {
    pub fn validate(&self) -> Result<()> {
        let positive = |what: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::out_of_range(what, v, "(0, inf)"))
            }
        };
        match *self {
            ScenarioKind::IndepNormal => Ok(()),
            ScenarioKind::IndepPareto { scale, shape }
            | ScenarioKind::IndepWeibull { scale, shape } => {
                positive("scale", scale)?;
                positive("shape", shape)
            }
            ScenarioKind::IndepStudentT { df } => {
                if df == 0 {
                    Err(Error::out_of_range("df", df, ">= 1"))
                } else {
                    Ok(())
                }
            }
            ScenarioKind::BivariateNormal { rho } | ScenarioKind::MixtureNormal5050 { rho } => {
                if rho > -1.0 && rho < 1.0 {
                    Ok(())
                } else {
                    Err(Error::out_of_range("rho", rho, "(-1, 1)"))
                }
            }
        }
    }

    /// True when `X` and `Y` are independent.
    pub fn is_null(&self) -> bool {
        matches!(
            self,
            ScenarioKind::IndepNormal
                | ScenarioKind::IndepPareto { .. }
                | ScenarioKind::IndepWeibull { .. }
                | ScenarioKind::IndepStudentT { .. }
        )
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioKind::IndepNormal => write!(f, "IndepNormal"),
            ScenarioKind::IndepPareto { scale, shape } => write!(f, "IndepPareto({scale};{shape})"),
            ScenarioKind::IndepWeibull { scale, shape } => {
                write!(f, "IndepWeibull({scale};{shape})")
            }
            ScenarioKind::IndepStudentT { df } => write!(f, "IndepStudentT({df})"),
            ScenarioKind::BivariateNormal { rho } => write!(f, "BivariateNormal({rho})"),
            ScenarioKind::MixtureNormal5050 { rho } => write!(f, "MixtureNormal5050({rho})"),
        }
    }
}

/// A scenario at a fixed sample size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    pub n: usize,
}

/// Standard normal variates by the Marsaglia polar method.
pub struct NormalSampler<R> {
    rng: R,
    spare: Option<f64>,
}

impl<R: RngCore> NormalSampler<R> {
    pub fn new(rng: R) -> Self {
        Self { rng, spare: None }
    }

    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.rng.random::<f64>() - 1.0;
            let v = 2.0 * self.rng.random::<f64>() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let m = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * m);
                return u * m;
            }
        }
    }

    /// Uniform on `(0, 1]`.
    pub fn uniform_open0(&mut self) -> f64 {
        1.0 - self.rng.random::<f64>()
    }

    pub fn coin(&mut self) -> bool {
        self.rng.random::<bool>()
    }

    fn student_t(&mut self, df: u32) -> f64 {
        let z = self.normal();
        let chi2: f64 = (0..df).map(|_| self.normal().powi(2)).sum();
        z / (chi2 / df as f64).sqrt()
    }
}

/// Draws `spec.n` i.i.d. pairs.
pub fn sample_scenario<R: RngCore>(
    spec: &ScenarioSpec,
    gen: &mut NormalSampler<R>,
) -> Result<PairedSample> {
    spec.kind.validate()?;
    if spec.n == 0 {
        return Err(Error::EmptySample);
    }
    let mut pairs = Vec::with_capacity(spec.n);
    for _ in 0..spec.n {
        let pair = match spec.kind {
            ScenarioKind::IndepNormal => (gen.normal(), gen.normal()),
            ScenarioKind::IndepPareto { scale, shape } => {
                let mut draw = || scale * gen.uniform_open0().powf(-1.0 / shape);
                (draw(), draw())
            }
            ScenarioKind::IndepWeibull { scale, shape } => {
                let mut draw = || scale * (-gen.uniform_open0().ln()).powf(1.0 / shape);
                (draw(), draw())
            }
            ScenarioKind::IndepStudentT { df } => (gen.student_t(df), gen.student_t(df)),
            ScenarioKind::BivariateNormal { rho } => correlated(gen, rho),
            ScenarioKind::MixtureNormal5050 { rho } => {
                let r = if gen.coin() { rho } else { -rho };
                correlated(gen, r)
            }
        };
        pairs.push(pair);
    }
    PairedSample::new(pairs)
}

fn correlated<R: RngCore>(gen: &mut NormalSampler<R>, rho: f64) -> (f64, f64) {
    let x = gen.normal();
    let z = gen.normal();
    (x, rho * x + (1.0 - rho * rho).sqrt() * z)
}

/// Tests a power study can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerTest {
    Ln,
    Pearson,
    Spearman,
    Kendall,
    Hoeffding,
}

impl PowerTest {
    pub const ALL: [PowerTest; 5] = [
        PowerTest::Spearman,
        PowerTest::Kendall,
        PowerTest::Hoeffding,
        PowerTest::Pearson,
        PowerTest::Ln,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PowerTest::Ln => "ln",
            PowerTest::Pearson => "pearson",
            PowerTest::Spearman => "spearman",
            PowerTest::Kendall => "kendall",
            PowerTest::Hoeffding => "hoeffding",
        }
    }
}

impl fmt::Display for PowerTest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn default_sizes() -> Vec<usize> {
    vec![10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 500, 1000]
}

fn default_levels() -> Vec<f64> {
    vec![0.01, 0.05]
}

fn default_replications() -> usize {
    10_000
}

fn default_tests() -> Vec<PowerTest> {
    PowerTest::ALL.to_vec()
}

fn default_variant() -> PValueVariant {
    PValueVariant::Inclusive
}

fn default_hoeffding_reps() -> usize {
    2000
}

/// Power-study settings; deserializable from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerStudyConfig {
    pub scenarios: Vec<ScenarioKind>,
    #[serde(default = "default_sizes")]
    pub sample_sizes: Vec<usize>,
    #[serde(default = "default_levels")]
    pub levels: Vec<f64>,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tests")]
    pub tests: Vec<PowerTest>,
    #[serde(default = "default_variant")]
    pub variant: PValueVariant,
    /// Permutations in each Hoeffding Monte Carlo null.
    #[serde(default = "default_hoeffding_reps")]
    pub hoeffding_reps: usize,
}

impl PowerStudyConfig {
    pub fn new(scenarios: Vec<ScenarioKind>) -> Self {
        Self {
            scenarios,
            sample_sizes: default_sizes(),
            levels: default_levels(),
            replications: default_replications(),
            seed: 0,
            tests: default_tests(),
            variant: default_variant(),
            hoeffding_reps: default_hoeffding_reps(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.scenarios.is_empty() {
            return Err(Error::Config("no scenarios".into()));
        }
        for s in &self.scenarios {
            s.validate()?;
        }
        if self.sample_sizes.is_empty() || self.sample_sizes.iter().any(|&n| n < 5) {
            return Err(Error::Config(
                "sample sizes must be non-empty and >= 5".into(),
            ));
        }
        if self.levels.is_empty() || self.levels.iter().any(|&a| !(a > 0.0 && a < 1.0)) {
            return Err(Error::Config(
                "levels must be non-empty and in (0, 1)".into(),
            ));
        }
        if self.replications == 0 {
            return Err(Error::Config("replications must be >= 1".into()));
        }
        if self.tests.is_empty() {
            return Err(Error::Config("no tests selected".into()));
        }
        if self.tests.contains(&PowerTest::Hoeffding) && self.hoeffding_reps == 0 {
            return Err(Error::Config("hoeffding_reps must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerRow {
    pub scenario: String,
    pub test: PowerTest,
    pub n: usize,
    pub level: f64,
    pub power: f64,
    pub rejections: u64,
    pub errors: u64,
    pub reps: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerTable {
    pub rows: Vec<PowerRow>,
    pub metadata: Vec<String>,
}

impl PowerTable {
    pub fn get(
        &self,
        scenario: &ScenarioKind,
        test: PowerTest,
        n: usize,
        level: f64,
    ) -> Option<&PowerRow> {
        let label = scenario.to_string();
        self.rows
            .iter()
            .find(|r| r.scenario == label && r.test == test && r.n == n && r.level == level)
    }

    pub fn total_errors(&self) -> u64 {
        self.rows.iter().map(|r| r.errors).sum()
    }

    /// Comment lines, then `scenario,test,n,level,power,reps,seed`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for m in &self.metadata {
            let _ = writeln!(out, "# {m}");
        }
        let mut errors: Vec<String> = self
            .rows
            .iter()
            .filter(|r| r.errors > 0 && r.level == self.rows[0].level)
            .map(|r| format!("{} {} n={} errors={}", r.scenario, r.test, r.n, r.errors))
            .collect();
        errors.dedup();
        if errors.is_empty() {
            out.push_str("# errors: none\n");
        } else {
            for e in errors {
                let _ = writeln!(out, "# errors: {e}");
            }
        }
        out.push_str("scenario,test,n,level,power,reps,seed\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{:.4},{},{}",
                r.scenario, r.test, r.n, r.level, r.power, r.reps, r.seed
            );
        }
        out
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the independent substream for one replication.
pub fn substream_seed(seed: u64, scenario: u64, n: u64, replication: u64) -> u64 {
    let mut h = splitmix64(seed);
    for part in [scenario, n, replication] {
        h = splitmix64(h ^ part);
    }
    h
}

const HOEFFDING_STREAM: u64 = 0x486f_6566_6664_696e;

struct Prepared<'a> {
    table: &'a ExactLnTable,
    tw: Option<&'a TwDistribution>,
    variant: PValueVariant,
    levels: &'a [f64],
    critical: Vec<(f64, f64)>,
    hoeffding: Option<HoeffdingNull>,
}

/// Rejection flags per level for one test on one sample.
fn decisions(test: PowerTest, sample: &PairedSample, prep: &Prepared) -> Result<Vec<bool>> {
    let by_p = |p: f64| prep.levels.iter().map(|&a| p <= a).collect();
    match test {
        PowerTest::Ln => {
            let perm = permutation_from_sample(sample, TiePolicy::Reject, None)?;
            let n = perm.len();
            let l0 = lis_lds(&perm).lis_length;
            if n <= prep.table.n_max() {
                return Ok(by_p(exact_p_value(prep.table, n, l0, prep.variant)));
            }
            let tw = prep.tw.ok_or(Error::MissingTableRow {
                n,
                n_max: prep.table.n_max(),
            })?;
            Ok(prep
                .levels
                .iter()
                .zip(&prep.critical)
                .map(|(&a, &(lo, hi))| asymptotic_report(tw, l0, n, a, lo, hi).reject)
                .collect())
        }
        PowerTest::Pearson => Ok(by_p(pearson_test(sample)?.p_value)),
        PowerTest::Spearman => Ok(by_p(spearman_test(sample)?.p_value)),
        PowerTest::Kendall => Ok(by_p(kendall_test(sample)?.p_value)),
        PowerTest::Hoeffding => {
            let null = prep.hoeffding.as_ref().expect("Hoeffding null prepared");
            Ok(by_p(hoeffding_test_with_null(sample, null)?.p_value))
        }
    }
}

/// Per (test, level) rejection counts and per test error counts.
#[derive(Clone)]
struct Counts {
    reject: Vec<u64>,
    errors: Vec<u64>,
}

impl Counts {
    fn zero(tests: usize, levels: usize) -> Self {
        Self {
            reject: vec![0; tests * levels],
            errors: vec![0; tests],
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.reject.iter_mut().zip(other.reject) {
            *a += b;
        }
        for (a, b) in self.errors.iter_mut().zip(other.errors) {
            *a += b;
        }
        self
    }
}

/// Runs every (scenario, n) cell. Replication `r` of scenario `s` at size `n`
/// draws from `ChaCha8` seeded by [`substream_seed`]`(seed, s, n, r)`, so the
/// result does not depend on scheduling.
pub fn run_power_study(
    config: &PowerStudyConfig,
    table: &ExactLnTable,
    tw: Option<&TwDistribution>,
) -> Result<PowerTable> {
    config.validate()?;
    let tests = &config.tests;
    let levels = &config.levels;
    let mut critical = Vec::new();
    let needs_tw =
        tests.contains(&PowerTest::Ln) && config.sample_sizes.iter().any(|&n| n > table.n_max());
    if needs_tw {
        let tw = tw.ok_or(Error::MissingTableRow {
            n: *config.sample_sizes.iter().max().unwrap(),
            n_max: table.n_max(),
        })?;
        for &a in levels {
            critical.push(tw_critical_values(tw, a)?);
        }
    }

    let mut rows = Vec::new();
    let mut nulls: BTreeMap<usize, HoeffdingNull> = BTreeMap::new();
    for (si, kind) in config.scenarios.iter().enumerate() {
        let label = kind.to_string();
        for &n in &config.sample_sizes {
            let hoeffding = if tests.contains(&PowerTest::Hoeffding) {
                let null = match nulls.entry(n) {
                    Entry::Occupied(e) => e.into_mut(),
                    Entry::Vacant(e) => {
                        let seed = substream_seed(config.seed, HOEFFDING_STREAM, n as u64, 0);
                        e.insert(HoeffdingNull::new(n, config.hoeffding_reps, seed)?)
                    }
                };
                Some(null.clone())
            } else {
                None
            };
            let prep = Prepared {
                table,
                tw,
                variant: config.variant,
                levels,
                critical: critical.clone(),
                hoeffding,
            };
            let spec = ScenarioSpec { kind: *kind, n };
            let counts = (0..config.replications as u64)
                .into_par_iter()
                .map(|r| {
                    let mut c = Counts::zero(tests.len(), levels.len());
                    let rng = ChaCha8Rng::seed_from_u64(substream_seed(
                        config.seed,
                        si as u64,
                        n as u64,
                        r,
                    ));
                    let sample = match sample_scenario(&spec, &mut NormalSampler::new(rng)) {
                        Ok(s) => s,
                        Err(_) => {
                            c.errors.iter_mut().for_each(|e| *e += 1);
                            return c;
                        }
                    };
                    for (ti, &test) in tests.iter().enumerate() {
                        match decisions(test, &sample, &prep) {
                            Ok(flags) => {
                                for (li, f) in flags.into_iter().enumerate() {
                                    c.reject[ti * levels.len() + li] += f as u64;
                                }
                            }
                            Err(_) => c.errors[ti] += 1,
                        }
                    }
                    c
                })
                .reduce(|| Counts::zero(tests.len(), levels.len()), Counts::merge);
            for (ti, &test) in tests.iter().enumerate() {
                for (li, &level) in levels.iter().enumerate() {
                    let k = counts.reject[ti * levels.len() + li];
                    rows.push(PowerRow {
                        scenario: label.clone(),
                        test,
                        n,
                        level,
                        power: k as f64 / config.replications as f64,
                        rejections: k,
                        errors: counts.errors[ti],
                        reps: config.replications,
                        seed: config.seed,
                    });
                }
            }
        }
    }

    let metadata = vec![
        "lntest power study".to_string(),
        "rng: ChaCha8 per replication, seeded by SplitMix64 chain of (seed, scenario index, n, replication)".to_string(),
        "normals: Marsaglia polar method".to_string(),
        format!("seed: {}", config.seed),
        format!("replications: {}", config.replications),
        format!("ln p-value variant: {}", config.variant.name()),
        format!(
            "hoeffding p-value: Monte Carlo permutation null, {} draws per n",
            config.hoeffding_reps
        ),
        "ln asymptotic (n above table range): Tracy-Widom critical values".to_string(),
        "power: rejections / reps; failed replications count as non-rejections".to_string(),
    ];
    Ok(PowerTable { rows, metadata })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(seed: u64) -> NormalSampler<ChaCha8Rng> {
        NormalSampler::new(ChaCha8Rng::seed_from_u64(seed))
    }

    fn moments(s: &PairedSample) -> (f64, f64, f64, f64, f64) {
        let n = s.len() as f64;
        let (xs, ys) = (s.xs(), s.ys());
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let vx = xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>() / n;
        let vy = ys.iter().map(|y| (y - my).powi(2)).sum::<f64>() / n;
        let c = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (x - mx) * (y - my))
            .sum::<f64>()
            / n;
        (mx, my, vx, vy, c / (vx * vy).sqrt())
    }

    #[test]
    fn normal_moments() {
        let n = 100_000;
        let s = sample_scenario(
            &ScenarioSpec {
                kind: ScenarioKind::IndepNormal,
                n,
            },
            &mut gen(1),
        )
        .unwrap();
        let (mx, my, vx, vy, r) = moments(&s);
        let se = 1.0 / (n as f64).sqrt();
        assert!(mx.abs() < 4.0 * se && my.abs() < 4.0 * se);
        // var of the sample variance is 2/n
        assert!((vx - 1.0).abs() < 5.0 * (2.0f64).sqrt() * se);
        assert!((vy - 1.0).abs() < 5.0 * (2.0f64).sqrt() * se);
        assert!(r.abs() < 0.01);
    }

    #[test]
    fn bivariate_and_mixture_correlation() {
        let n = 100_000;
        let b = ScenarioSpec {
            kind: ScenarioKind::BivariateNormal { rho: 0.7 },
            n,
        };
        let (.., r) = moments(&sample_scenario(&b, &mut gen(2)).unwrap());
        assert!((r - 0.7).abs() < 0.01, "{r}");
        let m = ScenarioSpec {
            kind: ScenarioKind::MixtureNormal5050 { rho: 0.7 },
            n,
        };
        let s = sample_scenario(&m, &mut gen(3)).unwrap();
        let (.., r) = moments(&s);
        assert!(r.abs() < 0.01, "{r}");
        // same-sign quadrants hold about half the mass, but |XY| is large
        let mean_abs_xy = s.pairs().iter().map(|(x, y)| (x * y).abs()).sum::<f64>() / n as f64;
        assert!(mean_abs_xy > 0.7);
    }

    #[test]
    fn heavy_tail_samplers() {
        let n = 50_000;
        let w = ScenarioSpec {
            kind: ScenarioKind::IndepWeibull {
                scale: 1.0,
                shape: 2.0,
            },
            n,
        };
        let s = sample_scenario(&w, &mut gen(4)).unwrap();
        // Weibull(1, 2) mean = Gamma(1.5) = sqrt(pi)/2
        let mean = s.xs().iter().sum::<f64>() / n as f64;
        assert!((mean - std::f64::consts::PI.sqrt() / 2.0).abs() < 0.01);
        let p = ScenarioSpec {
            kind: ScenarioKind::IndepPareto {
                scale: 1.0,
                shape: 4.0,
            },
            n,
        };
        let s = sample_scenario(&p, &mut gen(5)).unwrap();
        assert!(s.xs().iter().all(|&x| x >= 1.0));
        // median of Pareto(1, 4) = 2^(1/4)
        let mut xs = s.xs();
        xs.sort_by(f64::total_cmp);
        assert!((xs[n / 2] - 2f64.powf(0.25)).abs() < 0.01);
        let t = ScenarioSpec {
            kind: ScenarioKind::IndepStudentT { df: 16 },
            n,
        };
        let s = sample_scenario(&t, &mut gen(6)).unwrap();
        let (.., vx, _, _) = moments(&s);
        // var = 16/14
        assert!((vx - 16.0 / 14.0).abs() < 0.05);
    }

    #[test]
    fn invalid_scenarios() {
        for kind in [
            ScenarioKind::IndepPareto {
                scale: 0.0,
                shape: 1.0,
            },
            ScenarioKind::IndepWeibull {
                scale: 1.0,
                shape: -1.0,
            },
            ScenarioKind::IndepStudentT { df: 0 },
            ScenarioKind::BivariateNormal { rho: 1.0 },
            ScenarioKind::MixtureNormal5050 { rho: f64::NAN },
        ] {
            assert!(sample_scenario(&ScenarioSpec { kind, n: 10 }, &mut gen(0)).is_err());
        }
    }

    #[test]
    fn substreams_differ() {
        let a = substream_seed(1, 0, 10, 0);
        assert_ne!(a, substream_seed(1, 0, 10, 1));
        assert_ne!(a, substream_seed(1, 1, 10, 0));
        assert_ne!(a, substream_seed(1, 0, 20, 0));
        assert_ne!(a, substream_seed(2, 0, 10, 0));
        assert_eq!(a, substream_seed(1, 0, 10, 0));
    }

    #[test]
    fn config_from_toml() {
        let text = r#"
            seed = 7
            replications = 50
            sample_sizes = [10, 20]
            levels = [0.05]
            tests = ["ln", "pearson"]

            [[scenarios]]
            kind = "IndepNormal"

            [[scenarios]]
            kind = "IndepPareto"
            scale = 1.0
            shape = 0.25
        "#;
        let cfg = PowerStudyConfig::from_toml(text).unwrap();
        assert_eq!(
            cfg.scenarios[1],
            ScenarioKind::IndepPareto {
                scale: 1.0,
                shape: 0.25
            }
        );
        assert_eq!(cfg.variant, PValueVariant::Inclusive);
        assert_eq!(cfg.hoeffding_reps, 2000);
        assert!(PowerStudyConfig::from_toml("scenarios = []").is_err());
        assert!(
            PowerStudyConfig::from_toml("bogus = 1\n[[scenarios]]\nkind = \"IndepNormal\"")
                .is_err()
        );
        let bad_level = "levels = [1.5]\n[[scenarios]]\nkind = \"IndepNormal\"";
        assert!(PowerStudyConfig::from_toml(bad_level).is_err());
    }

    #[test]
    fn study_is_deterministic_and_shaped() {
        let table = crate::tableaux::build_table(30).unwrap();
        let mut cfg = PowerStudyConfig::new(vec![
            ScenarioKind::IndepNormal,
            ScenarioKind::MixtureNormal5050 { rho: 0.9 },
        ]);
        cfg.sample_sizes = vec![10, 30];
        cfg.levels = vec![0.01, 0.05];
        cfg.replications = 200;
        cfg.hoeffding_reps = 200;
        cfg.seed = 11;
        let a = run_power_study(&cfg, &table, None).unwrap();
        assert_eq!(a.rows.len(), 2 * 2 * 2 * 5);
        assert_eq!(a, run_power_study(&cfg, &table, None).unwrap());
        assert_eq!(a.total_errors(), 0);
        assert!(a.rows.iter().all(|r| (0.0..=1.0).contains(&r.power)));
        let csv = a.to_csv();
        assert!(csv.contains("\nscenario,test,n,level,power,reps,seed\n"));
        assert_eq!(
            csv.lines().filter(|l| !l.starts_with('#')).count(),
            1 + a.rows.len()
        );
        cfg.sample_sizes = vec![40];
        cfg.tests = vec![PowerTest::Ln];
        assert!(matches!(
            run_power_study(&cfg, &table, None),
            Err(Error::MissingTableRow { .. })
        ));
    }
}
