use diolab::bestapprox::{build_sequence_guided, BuildConfig};
use diolab::exponents::{
    build_inhom_records, generic_equality_experiment, hom_exponents, inhom_exponents,
    InhomBuildConfig,
};
use diolab::numbers::{CfSpec, NumberSpec};
use diolab::precision::PrecisionContext;
use diolab::system::{Orientation, SystemSpec};

fn main() {
    let ctx = PrecisionContext::for_enumeration_bound(1_000_000);

    // Criterion 1: golden ratio 1x1, guided to 1e6.
    let t0 = std::time::Instant::now();
    let sys = SystemSpec::scalar(NumberSpec::golden(), "golden").realize(&ctx).unwrap();
    let cfg = BuildConfig { y_max: 1_000_000, exhaustive_up_to: 10_000, ladder_ratio: 2.0, budget: 1_000_000_000 };
    let seq = build_sequence_guided(&sys, &cfg).unwrap();
    let (w, what) = hom_exponents(&seq).unwrap();
    println!("C1 golden: w={:.4} what={:.4} slope={:.4} records={} time={:?}", w.value(), what.value(), w.regression_slope, seq.items.len(), t0.elapsed());

    // Criterion 2 row: forms (|y xi|, |y xi^2|), n=1, m=2.
    let t0 = std::time::Instant::now();
    let xi = CfSpec::fibonacci(1, 2);
    let row = SystemSpec::powers(xi.clone(), 2, Orientation::Row).realize(&ctx).unwrap();
    let seq_row = build_sequence_guided(&row, &cfg).unwrap();
    let (w_r, what_r) = hom_exponents(&seq_row).unwrap();
    println!("C2 row: w={:.4} what={:.4} (target what 0.618+-0.08) slope={:.4} records={} time={:?}", w_r.value(), what_r.value(), what_r.regression_slope, seq_row.items.len(), t0.elapsed());

    // Criterion 2 column: form |y1 xi + y2 xi^2|, n=2, m=1.
    let t0 = std::time::Instant::now();
    let col = SystemSpec::powers(xi.clone(), 2, Orientation::Column).realize(&ctx).unwrap();
    let seq_col = build_sequence_guided(&col, &cfg).unwrap();
    let (w_c, what_c) = hom_exponents(&seq_col).unwrap();
    println!("C2 col: w={:.4} what={:.4} (target what 2.618+-0.15) slope={:.4} records={} time={:?}", w_c.value(), what_c.value(), what_c.regression_slope, seq_col.items.len(), t0.elapsed());
    for it in &seq_col.items {
        println!("  Y={} M={:.3e}", it.norm, it.value.to_f64());
    }

    // Criterion 3 quick: 5 samples each orientation to X=1e5.
    let t0 = std::time::Instant::now();
    let exp_row = generic_equality_experiment(&row, 5, 100_000, 1_000_000, 11).unwrap();
    println!("C3 row: median w={:.4} (target 1.618+-0.10) predicted={:.4} time={:?}", exp_row.median_w, exp_row.predicted_w, t0.elapsed());
    for p in &exp_row.per_target {
        println!("  w={:.4} what={:.4} slope={:.4} recs={}", p.w.value(), p.w_hat.value(), p.w.regression_slope, p.records);
    }
    let t0 = std::time::Instant::now();
    let exp_col = generic_equality_experiment(&col, 5, 100_000, 1_000_000, 12).unwrap();
    println!("C3 col: median w={:.4} (target 0.382+-0.08) predicted={:.4} time={:?}", exp_col.median_w, exp_col.predicted_w, t0.elapsed());
    for p in &exp_col.per_target {
        println!("  w={:.4} what={:.4} slope={:.4} recs={}", p.w.value(), p.w_hat.value(), p.w.regression_slope, p.records);
    }

    // Universal bounds (criterion 4ish) on the row samples.
    let mut ok = 0;
    for p in &exp_row.per_target {
        if diolab::exponents::universal_bounds_hold(p, &exp_row.w_t, &exp_row.w_hat_t, 0.1) { ok += 1; }
    }
    println!("C4 row: {}/{} samples satisfy universal bounds", ok, exp_row.per_target.len());
    let mut ok = 0;
    for p in &exp_col.per_target {
        if diolab::exponents::universal_bounds_hold(p, &exp_col.w_t, &exp_col.w_hat_t, 0.1) { ok += 1; }
    }
    println!("C4 col: {}/{} samples satisfy universal bounds", ok, exp_col.per_target.len());

    // inhom sanity on golden with fixed theta.
    let t0 = std::time::Instant::now();
    let scale = sys.ctx().scale();
    let theta = vec![diolab::CertifiedReal::from_rational(&num_bigint::BigInt::from(1), &num_bigint::BigInt::from(3), scale).unwrap()];
    let cfg_i = InhomBuildConfig::guided(100_000, 2_000);
    let rec = build_inhom_records(&sys, &theta, &cfg_i).unwrap();
    let (wi, whati) = inhom_exponents(&rec).unwrap();
    println!("golden theta=1/3: w={:.4} what={:.4} records={} time={:?}", wi.value(), whati.value(), rec.items.len(), t0.elapsed());
}
