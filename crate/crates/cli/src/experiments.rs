//! Monte Carlo experiment runners.
//!
//! Each trial reads only its own RNG stream (stream index = trial
//! number), so results are independent of scheduling and of
//! `thread_hint`. Aggregation happens after all trials have joined.

use std::collections::BTreeMap;
use std::time::Instant;

use permlab_core::samplers::{
    merge_cycles_t_rng, merge_fixed_points_tprime_rng, DistributionSpec, RngStream,
};
use permlab_core::shape::sup_distance_to_omega;
use permlab_core::subseq::{greene_prefix_of_shape, lis, rsk_shape, Shape};
use permlab_core::twstat::{ks_statistic, CdfTable};
use permlab_core::Permutation;
use rand::Rng;

use crate::calibration::Calibration;
use crate::config::{ConfigError, ExperimentConfig, ExperimentKind};
use crate::report::{mean_and_se, ExperimentReport, TrialRecord};

/// Runs the trial closure for indices `0..trials`, in parallel when the
/// `parallel` feature is on, preserving trial order in the output.
pub fn run_trials<F>(trials: usize, thread_hint: usize, f: F) -> Vec<TrialRecord>
where
    F: Fn(u64) -> TrialRecord + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let body = || (0..trials as u64).into_par_iter().map(&f).collect();
        if thread_hint > 0 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(thread_hint)
                .build()
                .expect("thread pool")
                .install(body)
        } else {
            body()
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = thread_hint;
        (0..trials as u64).map(f).collect()
    }
}

/// Dispatches on `cfg.experiment`. The bundled F₂ table is used; see
/// [`run_fluctuation_experiment`] for supplying a custom table.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, ConfigError> {
    match cfg.experiment {
        ExperimentKind::LcsMean => run_lcs_experiment(cfg),
        ExperimentKind::Fluctuation => run_fluctuation_experiment(cfg, &CdfTable::f2()),
        ExperimentKind::LimitShape => run_shape_experiment(cfg),
        ExperimentKind::InvariantSuite => run_invariant_suite(cfg),
        ExperimentKind::CycleStartDistribution => run_cycle_start_distribution(cfg),
    }
}

fn stream_rng(cfg: &ExperimentConfig, trial: u64) -> impl Rng {
    RngStream::new(cfg.master_seed, trial).rng()
}

fn product(sigma1: &Permutation, sigma2: &Permutation) -> Permutation {
    sigma1
        .inverse()
        .compose(sigma2)
        .expect("equal sizes checked by config validation")
}

/// Per trial: draw (σ₁, σ₂), record LCS, the cycle count and fixed
/// points of σ₁⁻¹∘σ₂, and LCS/√n. Aggregates the normalized mean with
/// standard error and a 95% confidence interval.
pub fn run_lcs_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, ConfigError> {
    cfg.validate()?;
    let start = Instant::now();
    let dist1 = cfg.dist1.clone().expect("validated");
    let dist2 = cfg.dist2.clone().expect("validated");
    let sqrt_n = (cfg.n as f64).sqrt();

    let per_trial = run_trials(cfg.trials, cfg.thread_hint, |trial| {
        let mut rng = stream_rng(cfg, trial);
        let s1 = dist1.sample(&mut rng);
        let s2 = dist2.sample(&mut rng);
        let prod = product(&s1, &s2);
        let cycles = prod.cycles();
        let lcs = lis(&prod) as f64;
        TrialRecord {
            trial,
            stats: BTreeMap::from([
                ("lcs".into(), lcs),
                ("lcs_over_sqrt_n".into(), lcs / sqrt_n),
                ("product_cycles".into(), cycles.num_cycles() as f64),
                ("product_fixed_points".into(), cycles.fixed_points.len() as f64),
            ]),
        }
    });

    let raw: Vec<f64> = per_trial.iter().map(|t| t.stats["lcs"]).collect();
    let normalized: Vec<f64> = per_trial
        .iter()
        .map(|t| t.stats["lcs_over_sqrt_n"])
        .collect();
    let (mean, se) = mean_and_se(&normalized);
    let aggregates = BTreeMap::from([
        ("mean_lcs".into(), mean_and_se(&raw).0),
        ("normalized_mean".into(), mean),
        ("standard_error".into(), se),
        ("ci95_low".into(), mean - 1.96 * se),
        ("ci95_high".into(), mean + 1.96 * se),
    ]);
    Ok(ExperimentReport::new(
        cfg.clone(),
        per_trial,
        aggregates,
        start.elapsed().as_secs_f64(),
        vec![],
    ))
}

/// Per trial: the centered statistic (L − 2√n)/n^{1/6}, where L is the
/// LCS of (σ₁, σ₂) or the LIS of σ₁ when `dist2` is omitted. Aggregates
/// the KS distance to the reference table. A zero-variance sample is
/// flagged instead of producing NaN statistics.
pub fn run_fluctuation_experiment(
    cfg: &ExperimentConfig,
    table: &CdfTable,
) -> Result<ExperimentReport, ConfigError> {
    cfg.validate()?;
    let start = Instant::now();
    let dist1 = cfg.dist1.clone().expect("validated");
    let dist2 = cfg.dist2.clone();
    let n = cfg.n as f64;
    let scale = n.powf(1.0 / 6.0);

    let per_trial = run_trials(cfg.trials, cfg.thread_hint, |trial| {
        let mut rng = stream_rng(cfg, trial);
        let s1 = dist1.sample(&mut rng);
        let statistic = match &dist2 {
            Some(d2) => lis(&product(&s1, &d2.sample(&mut rng))),
            None => lis(&s1),
        } as f64;
        let centered = (statistic - 2.0 * n.sqrt()) / scale;
        TrialRecord {
            trial,
            stats: BTreeMap::from([
                ("statistic".into(), statistic),
                ("centered".into(), centered),
            ]),
        }
    });

    let centered: Vec<f64> = per_trial.iter().map(|t| t.stats["centered"]).collect();
    let (mean, _) = mean_and_se(&centered);
    let variance = centered.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
        / (centered.len().max(2) - 1) as f64;

    let degenerate = centered.iter().all(|&v| v == centered[0]);
    let mut warnings = Vec::new();
    let ks = if degenerate {
        warnings.push(format!(
            "degenerate sample: all centered values equal {}; \
             KS reported against a point mass at that value",
            centered[0]
        ));
        // Empirical CDF of a constant sample coincides with the point
        // mass it defines.
        0.0
    } else {
        ks_statistic(&centered, |s| table.cdf(s)).expect("trials >= 1")
    };

    let aggregates = BTreeMap::from([
        ("ks_distance".into(), ks),
        ("sample_mean".into(), mean),
        ("sample_variance".into(), variance),
        ("reference_mean".into(), table.mean()),
        ("reference_variance".into(), table.variance()),
    ]);
    Ok(ExperimentReport::new(
        cfg.clone(),
        per_trial,
        aggregates,
        start.elapsed().as_secs_f64(),
        warnings,
    ))
}

/// Per trial: sample from `dist1`, take the insertion-tableau shape and
/// its sup distance to the limit curve. Aggregates the fraction of
/// trials below the calibrated threshold.
pub fn run_shape_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, ConfigError> {
    cfg.validate()?;
    let start = Instant::now();
    let dist1 = cfg.dist1.clone().expect("validated");
    let sqrt_n = (cfg.n as f64).sqrt();

    let per_trial = run_trials(cfg.trials, cfg.thread_hint, |trial| {
        let mut rng = stream_rng(cfg, trial);
        let sigma = dist1.sample(&mut rng);
        let shape = rsk_shape(&sigma);
        let sup = sup_distance_to_omega(&shape, cfg.n as u64).expect("n >= 1");
        TrialRecord {
            trial,
            stats: BTreeMap::from([
                ("sup_distance".into(), sup),
                ("lambda1_over_sqrt_n".into(), shape.first_part() as f64 / sqrt_n),
            ]),
        }
    });

    let cal = Calibration::bundled().limit_shape;
    let sups: Vec<f64> = per_trial.iter().map(|t| t.stats["sup_distance"]).collect();
    let below = sups.iter().filter(|&&s| s < cal.sup_threshold).count();
    let (mean_sup, se) = mean_and_se(&sups);
    let aggregates = BTreeMap::from([
        ("mean_sup_distance".into(), mean_sup),
        ("standard_error".into(), se),
        ("sup_threshold".into(), cal.sup_threshold),
        (
            "fraction_below_threshold".into(),
            below as f64 / sups.len() as f64,
        ),
    ]);
    Ok(ExperimentReport::new(
        cfg.clone(),
        per_trial,
        aggregates,
        start.elapsed().as_secs_f64(),
        vec![],
    ))
}

fn plus_sum(shape: &Shape, x: f64) -> f64 {
    shape
        .parts()
        .iter()
        .map(|&p| (p as f64 - x).max(0.0))
        .sum()
}

/// Largest integer k with Σᵢ (λᵢ − k)₊ ≥ threshold; k = 0 always
/// qualifies because the parts sum to n ≥ threshold here.
fn plus_sum_sup(shape: &Shape, threshold: f64) -> u64 {
    let mut best = 0;
    for k in 0..=u64::from(shape.first_part()) {
        if plus_sum(shape, k as f64) >= threshold {
            best = k;
        } else {
            break;
        }
    }
    best
}

/// The laws rotated through by the invariant suite corpus.
fn corpus_law(index: u64, n: usize) -> DistributionSpec {
    match index % 4 {
        0 => DistributionSpec::Uniform { n },
        1 => DistributionSpec::Ewens0 { n },
        2 => DistributionSpec::Ewens { n, theta: 1.5 },
        _ => DistributionSpec::Involution { n },
    }
}

/// Checks every pathwise inequality on one draw; returns the number of
/// violations (0 for correct implementations, by theorem).
fn check_invariants_on(sigma: &Permutation, rng: &mut impl Rng) -> u64 {
    let n = sigma.n();
    let cycles = sigma.cycles();
    let num_cycles = cycles.num_cycles() as i64;
    let fixed = cycles.fixed_points.len() as i64;
    let two_cycles = i64::from(cycles.count_of_length(2));
    let mut violations = 0;

    // Cycle merge: |ℓ(T(σ)) − ℓ(σ)| ≤ #(σ), prefix sums move by at
    // most #(σ), and the same bound holds for every plus-part sum.
    let rho = merge_cycles_t_rng(sigma, rng);
    let shape_s = rsk_shape(sigma);
    let shape_r = rsk_shape(&rho);
    if (shape_s.first_part() as i64 - shape_r.first_part() as i64).abs() > num_cycles {
        violations += 1;
    }
    let rows = shape_s.num_parts().max(shape_r.num_parts());
    for k in 1..=rows {
        let diff =
            greene_prefix_of_shape(&shape_s, k) as i64 - greene_prefix_of_shape(&shape_r, k) as i64;
        if diff.abs() > num_cycles {
            violations += 1;
        }
    }
    for alpha in [0.0, 0.25, 0.5, 1.0, 1.5, 2.0] {
        let x = alpha * (n as f64).sqrt();
        if (plus_sum(&shape_s, x) - plus_sum(&shape_r, x)).abs() > num_cycles as f64 + 1e-9 {
            violations += 1;
        }
    }
    // Lower bound for ℓ via the merged draw, in both directions.
    if u64::from(shape_s.first_part()) < plus_sum_sup(&shape_r, num_cycles as f64)
        || u64::from(shape_r.first_part()) < plus_sum_sup(&shape_s, num_cycles as f64)
    {
        violations += 1;
    }

    // Fixed points of the square: exact identity and the linear bound.
    let square_fixed = sigma.square().num_fixed_points() as i64;
    if square_fixed != fixed + 2 * two_cycles {
        violations += 1;
    }
    if square_fixed < 6 * num_cycles - 3 * fixed - 2 * n as i64 {
        violations += 1;
    }

    // Fixed-point merge on involutions: ℓ moves by at most card(fix).
    if sigma.is_involution() {
        let merged = merge_fixed_points_tprime_rng(sigma, rng).expect("involution");
        if (lis(sigma) as i64 - lis(&merged) as i64).abs() > fixed {
            violations += 1;
        }
    }
    violations
}

/// Runs every pathwise invariant over a mixed-law corpus of sizes
/// `1..=cfg.n`. Violations are counted per trial (zero expected) and
/// itemized in the report warnings with the seed needed for replay.
pub fn run_invariant_suite(cfg: &ExperimentConfig) -> Result<ExperimentReport, ConfigError> {
    cfg.validate()?;
    let start = Instant::now();

    let per_trial = run_trials(cfg.trials, cfg.thread_hint, |trial| {
        let mut rng = stream_rng(cfg, trial);
        let size = rng.gen_range(1..=cfg.n);
        let law = corpus_law(trial, size);
        let sigma = law.sample(&mut rng);
        let violations = check_invariants_on(&sigma, &mut rng);
        TrialRecord {
            trial,
            stats: BTreeMap::from([
                ("violations".into(), violations as f64),
                ("size".into(), size as f64),
                ("law_index".into(), (trial % 4) as f64),
            ]),
        }
    });

    let mut warnings = Vec::new();
    let mut total = 0.0;
    for t in &per_trial {
        let v = t.stats["violations"];
        total += v;
        if v > 0.0 {
            warnings.push(format!(
                "invariant violation in trial {}: replay with master_seed={} stream={} \
                 (law_index={} size={})",
                t.trial, cfg.master_seed, t.trial, t.stats["law_index"], t.stats["size"]
            ));
        }
    }
    let aggregates = BTreeMap::from([
        ("total_violations".into(), total),
        ("trials_checked".into(), per_trial.len() as f64),
    ]);
    Ok(ExperimentReport::new(
        cfg.clone(),
        per_trial,
        aggregates,
        start.elapsed().as_secs_f64(),
        warnings,
    ))
}

/// Probability that 1 is a fixed point under the law, in closed form.
fn prob_fixed_at_one(spec: &DistributionSpec) -> f64 {
    let n = spec.n();
    match spec {
        DistributionSpec::Uniform { .. } => 1.0 / n as f64,
        DistributionSpec::Ewens0 { .. } => {
            if n == 1 {
                1.0
            } else {
                0.0
            }
        }
        DistributionSpec::Ewens { theta, .. } => theta / (theta + n as f64 - 1.0),
        DistributionSpec::Involution { .. } => {
            // I(n-1)/I(n) via the ratio recurrence for the involution
            // counts I(n) = I(n-1) + (n-1) I(n-2).
            let mut r = 1.0;
            for m in 2..=n {
                r = 1.0 / (1.0 + (m - 1) as f64 * r);
            }
            r
        }
        DistributionSpec::CycleType { n, weights } => weights
            .iter()
            .map(|w| w.p * w.partition.iter().filter(|&&p| p == 1).count() as f64 / *n as f64)
            .sum(),
        DistributionSpec::PointMass { map } => {
            if map.first() == Some(&1) {
                1.0
            } else {
                0.0
            }
        }
    }
}

/// Rescales a law to size `m` where the kind permits it.
fn rescale(spec: &DistributionSpec, m: usize) -> Option<DistributionSpec> {
    match spec {
        DistributionSpec::Uniform { .. } => Some(DistributionSpec::Uniform { n: m }),
        DistributionSpec::Ewens0 { .. } => Some(DistributionSpec::Ewens0 { n: m }),
        DistributionSpec::Ewens { theta, .. } => Some(DistributionSpec::Ewens { n: m, theta: *theta }),
        DistributionSpec::Involution { .. } => Some(DistributionSpec::Involution { n: m }),
        _ => None,
    }
}

/// Largest cycle-start value tabulated by the frequency table.
pub const CYCLE_START_MAX_K: u32 = 6;

/// Estimates P(c₁(σ₁⁻¹∘σ₂) = k) for k = 1..=6 at sizes n, 2n, 4n
/// (size n only when a law cannot be rescaled). Reports per-(size, k)
/// frequencies with standard errors; the k = 1 row is cross-checked
/// against the closed form p₁p₂ + (1−p₁)(1−p₂)/(n−1). Diagnostics
/// only, no pass/fail.
pub fn run_cycle_start_distribution(
    cfg: &ExperimentConfig,
) -> Result<ExperimentReport, ConfigError> {
    cfg.validate()?;
    let start = Instant::now();
    let dist1 = cfg.dist1.clone().expect("validated");
    let dist2 = cfg.dist2.clone().expect("validated");

    let mut ladder: Vec<(usize, DistributionSpec, DistributionSpec)> =
        vec![(cfg.n, dist1.clone(), dist2.clone())];
    for factor in [2, 4] {
        let m = cfg.n * factor;
        if let (Some(d1), Some(d2)) = (rescale(&dist1, m), rescale(&dist2, m)) {
            ladder.push((m, d1, d2));
        }
    }

    let ladder_ref = &ladder;
    let per_trial = run_trials(cfg.trials, cfg.thread_hint, |trial| {
        let mut rng = stream_rng(cfg, trial);
        let mut stats = BTreeMap::new();
        for (m, d1, d2) in ladder_ref {
            let s1 = d1.sample(&mut rng);
            let s2 = d2.sample(&mut rng);
            let c1 = product(&s1, &s2).cycles().cycle_length_of(1);
            stats.insert(format!("c1_n{m}"), c1 as f64);
        }
        TrialRecord { trial, stats }
    });

    let mut aggregates = BTreeMap::new();
    let trials = per_trial.len() as f64;
    for (m, d1, d2) in &ladder {
        let key = format!("c1_n{m}");
        for k in 1..=CYCLE_START_MAX_K {
            let hits = per_trial
                .iter()
                .filter(|t| t.stats[&key] == k as f64)
                .count() as f64;
            let p = hits / trials;
            aggregates.insert(format!("freq_n{m}_k{k}"), p);
            aggregates.insert(
                format!("se_n{m}_k{k}"),
                (p * (1.0 - p) / trials).sqrt(),
            );
        }
        if *m > 1 {
            let p1 = prob_fixed_at_one(d1);
            let p2 = prob_fixed_at_one(d2);
            aggregates.insert(
                format!("closed_form_n{m}_k1"),
                p1 * p2 + (1.0 - p1) * (1.0 - p2) / (*m as f64 - 1.0),
            );
        }
    }
    Ok(ExperimentReport::new(
        cfg.clone(),
        per_trial,
        aggregates,
        start.elapsed().as_secs_f64(),
        vec![],
    ))
}
