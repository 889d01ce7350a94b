//! The `L_n` test of independence for paired continuous samples.
//!
//! The statistic is the length of the longest increasing subsequence of the
//! sample's rank permutation. Its null law is exact for `n <= 100` (from a
//! bundled table built by partition enumeration) and Tracy-Widom beyond.
//! The crate also provides Pearson, Spearman, Kendall and Hoeffding tests and
//! a seeded Monte Carlo power-study harness.

pub mod airy;
mod dd;
pub mod error;
mod modular;
pub mod partition;
pub mod permutation;
pub mod reference;
pub mod simulation;
pub mod special;
pub mod tableaux;
pub mod tracy_widom;

pub use airy::{airy, airy_prime};
pub use error::{Axis, Error, Result};
pub use lis_test::{
    chi_n, exact_p_value, ln_test, ln_test_from_statistic, ln_test_permutation, tw_critical_values,
    Method, PValueVariant, TestReport,
};
pub use partition::{enumerate_partitions, partition_count, ShapePartition, MAX_ENUMERATION_N};
pub use permutation::{
    lis_lds, permutation_from_sample, LisResult, PairedSample, Permutation, TiePolicy,
};
pub use reference::{
    hoeffding_test, hoeffding_test_with_null, kendall_test, pearson_test, spearman_test,
    AssociationStatistic, HoeffdingNull, ReferenceTest,
};
pub use simulation::{
    run_power_study, sample_scenario, NormalSampler, PowerRow, PowerStudyConfig, PowerTable,
    PowerTest, ScenarioKind, ScenarioSpec,
};
pub use special::{normal_cdf, regularized_incomplete_beta, student_t_cdf};
pub use tableaux::{
    build_table, count_perms_with_lis, count_syt, factorial, load_table, save_table, ExactLnTable,
    SytCount, MAX_TABLE_N,
};
pub use tracy_widom::{solve_painleve2, Painleve2Config, Painleve2Solution, TwDistribution};
