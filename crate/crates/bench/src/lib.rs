//! Fixtures shared by the benchmarks.

use qem_core::exact::rat;
use qem_core::{
    build_metric, realize, EmbeddingCase, LieAlgebraData, MetricSpec, ReductiveDecomposition,
};

pub struct Fixture {
    pub case: EmbeddingCase,
    pub alg: LieAlgebraData,
    pub dec: ReductiveDecomposition,
    pub metric: MetricSpec,
}

/// A realized case with a generic (non-Einstein) block metric.
pub fn fixture(id: &str) -> Fixture {
    let case = EmbeddingCase::from_id(id).expect("known case");
    let r = realize(&case).expect("realizable case");
    let a_k: Vec<f64> = (0..=case.r).map(|i| 0.6 + 0.35 * i as f64).collect();
    let metric = build_metric(&r.alg, &r.dec, 1.0, &a_k).expect("nondegenerate metric");
    Fixture {
        case,
        alg: r.alg,
        dec: r.dec,
        metric,
    }
}

pub const CASES: [&str; 4] = [
    "SU2_R0",
    "SPK_UK(k=2)",
    "SU_L1L2(l1=2,l2=2)",
    "SO2K_UK(k=4)",
];

pub fn sample_a1() -> qem_core::Rational {
    rat(1, 2)
}
