//! Seeded samplers for the permutation laws used throughout the crate,
//! plus the cycle-merging operators `T` and `T'`.
//!
//! Every sampler is a pure function of its inputs and an [`RngStream`];
//! concurrent Monte Carlo trials must use distinct stream indices so
//! that results do not depend on scheduling.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Permutation;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplerError {
    #[error("bad partition: {0}")]
    BadPartition(String),
    #[error("operator T' requires an involution")]
    NotAnInvolution,
    #[error("bad distribution spec: {0}")]
    BadSpec(String),
}

/// A reproducible random stream: a pure function of
/// `(master_seed, stream_index)`. Distinct stream indices yield
/// statistically independent streams (ChaCha counter streams).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        RngStream {
            master_seed,
            stream_index,
        }
    }

    /// Instantiates the generator for this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// Weight on one cycle type inside a [`DistributionSpec::CycleType`] law.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CycleTypeWeight {
    pub partition: Vec<u32>,
    pub p: f64,
}

/// Declarative description of a permutation law.
///
/// All kinds except `point_mass` are invariant under conjugation.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionSpec {
    Uniform { n: usize },
    Ewens0 { n: usize },
    Ewens { n: usize, theta: f64 },
    Involution { n: usize },
    CycleType { n: usize, weights: Vec<CycleTypeWeight> },
    PointMass { map: Vec<u32> },
}

impl DistributionSpec {
    pub fn n(&self) -> usize {
        match self {
            DistributionSpec::Uniform { n }
            | DistributionSpec::Ewens0 { n }
            | DistributionSpec::Ewens { n, .. }
            | DistributionSpec::Involution { n }
            | DistributionSpec::CycleType { n, .. } => *n,
            DistributionSpec::PointMass { map } => map.len(),
        }
    }

    /// `point_mass` is the only kind that is (generally) not invariant
    /// under conjugation.
    pub fn is_conjugation_invariant(&self) -> bool {
        !matches!(self, DistributionSpec::PointMass { .. })
    }

    pub fn validate(&self) -> Result<(), SamplerError> {
        if self.n() == 0 {
            return Err(SamplerError::BadSpec("n must be >= 1".into()));
        }
        match self {
            DistributionSpec::Ewens { theta, .. } => {
                if theta.is_nan() || *theta < 0.0 {
                    return Err(SamplerError::BadSpec(format!(
                        "ewens theta must be >= 0, got {theta}"
                    )));
                }
            }
            DistributionSpec::CycleType { n, weights } => {
                if weights.is_empty() {
                    return Err(SamplerError::BadSpec("cycle_type needs weights".into()));
                }
                let mut total = 0.0;
                for w in weights {
                    if w.p.is_nan() || w.p < 0.0 {
                        return Err(SamplerError::BadSpec("negative weight".into()));
                    }
                    total += w.p;
                    validate_partition(&w.partition, *n)
                        .map_err(|e| SamplerError::BadSpec(e.to_string()))?;
                }
                if (total - 1.0).abs() > 1e-9 {
                    return Err(SamplerError::BadSpec(format!(
                        "weights sum to {total}, expected 1"
                    )));
                }
            }
            DistributionSpec::PointMass { map } => {
                Permutation::from_one_line(map)
                    .map_err(|e| SamplerError::BadSpec(e.to_string()))?;
            }
            _ => {}
        }
        Ok(())
    }

    /// Draws one permutation from this law.
    pub fn sample(&self, rng: &mut impl Rng) -> Permutation {
        match self {
            DistributionSpec::Uniform { n } => sample_uniform_with(*n, rng),
            DistributionSpec::Ewens0 { n } => sample_ewens0_with(*n, rng),
            DistributionSpec::Ewens { n, theta } => sample_ewens_with(*n, *theta, rng),
            DistributionSpec::Involution { n } => sample_uniform_involution_with(*n, rng),
            DistributionSpec::CycleType { weights, .. } => {
                let partition = pick_partition(weights, rng);
                sample_with_cycle_type_rng(partition, rng).expect("validated partition")
            }
            DistributionSpec::PointMass { map } => {
                Permutation::from_one_line(map).expect("validated point mass")
            }
        }
    }
}

fn pick_partition<'a>(weights: &'a [CycleTypeWeight], rng: &mut impl Rng) -> &'a [u32] {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for w in weights {
        acc += w.p;
        if u < acc {
            return &w.partition;
        }
    }
    &weights[weights.len() - 1].partition
}

fn validate_partition(partition: &[u32], n: usize) -> Result<(), SamplerError> {
    if partition.is_empty() {
        return Err(SamplerError::BadPartition("empty partition".into()));
    }
    for w in partition.windows(2) {
        if w[0] < w[1] {
            return Err(SamplerError::BadPartition(
                "parts not weakly decreasing".into(),
            ));
        }
    }
    if partition[partition.len() - 1] == 0 {
        return Err(SamplerError::BadPartition("zero part".into()));
    }
    let total: u64 = partition.iter().map(|&p| p as u64).sum();
    if total != n as u64 {
        return Err(SamplerError::BadPartition(format!(
            "parts sum to {total}, expected {n}"
        )));
    }
    Ok(())
}

/// Uniform permutation of `{1, ..., n}` (Fisher-Yates).
pub fn sample_uniform(n: usize, stream: RngStream) -> Permutation {
    sample_uniform_with(n, &mut stream.rng())
}

pub fn sample_uniform_with(n: usize, rng: &mut impl Rng) -> Permutation {
    assert!(n >= 1);
    let mut word: Vec<u32> = (1..=n as u32).collect();
    word.shuffle(rng);
    Permutation::from_vec_unchecked(word)
}

/// Ewens(0): uniform over the `(n-1)!` permutations with a single cycle.
pub fn sample_ewens0(n: usize, stream: RngStream) -> Permutation {
    sample_ewens0_with(n, &mut stream.rng())
}

pub fn sample_ewens0_with(n: usize, rng: &mut impl Rng) -> Permutation {
    assert!(n >= 1);
    // Chinese-restaurant insertion with no new tables: every element
    // joins the cycle after a uniformly chosen earlier element.
    let mut map: Vec<u32> = vec![1];
    for i in 2..=n as u32 {
        let j = rng.gen_range(1..i);
        map.push(map[j as usize - 1]);
        map[j as usize - 1] = i;
    }
    Permutation::from_vec_unchecked(map)
}

/// Ewens(θ) by the Chinese-restaurant construction; θ = 0 delegates to
/// [`sample_ewens0`].
pub fn sample_ewens(n: usize, theta: f64, stream: RngStream) -> Permutation {
    sample_ewens_with(n, theta, &mut stream.rng())
}

pub fn sample_ewens_with(n: usize, theta: f64, rng: &mut impl Rng) -> Permutation {
    assert!(n >= 1);
    assert!(theta >= 0.0);
    if theta == 0.0 {
        return sample_ewens0_with(n, rng);
    }
    let mut map: Vec<u32> = vec![1];
    for i in 2..=n as u32 {
        let u: f64 = rng.gen::<f64>() * (theta + (i - 1) as f64);
        if u < theta {
            map.push(i); // new cycle
        } else {
            let j = rng.gen_range(1..i);
            map.push(map[j as usize - 1]);
            map[j as usize - 1] = i;
        }
    }
    Permutation::from_vec_unchecked(map)
}

/// Uniform involution of `{1, ..., n}`.
///
/// Sequential construction: the smallest unassigned element is fixed
/// with probability `I(m-1)/I(m)` (with `m` elements unassigned), else
/// paired with a uniformly chosen other unassigned element. The ratio
/// is computed by the stable recurrence `r_m = 1/(1 + (m-1) r_{m-1})`,
/// which avoids the big-integer telephone numbers `I(m)`.
pub fn sample_uniform_involution(n: usize, stream: RngStream) -> Permutation {
    sample_uniform_involution_with(n, &mut stream.rng())
}

pub fn sample_uniform_involution_with(n: usize, rng: &mut impl Rng) -> Permutation {
    assert!(n >= 1);
    let mut ratio = vec![0.0f64; n + 1];
    ratio[1] = 1.0;
    for m in 2..=n {
        ratio[m] = 1.0 / (1.0 + (m - 1) as f64 * ratio[m - 1]);
    }
    let mut map: Vec<u32> = (1..=n as u32).collect();
    // pool of unassigned elements with positions for O(1) removal
    let mut pool: Vec<u32> = (1..=n as u32).collect();
    let mut pos: Vec<usize> = (0..n).collect(); // pos[e-1] = index of e in pool
    let remove = |pool: &mut Vec<u32>, pos: &mut Vec<usize>, e: u32| {
        let i = pos[e as usize - 1];
        let last = *pool.last().unwrap();
        pool.swap_remove(i);
        if i < pool.len() {
            pos[last as usize - 1] = i;
        }
    };
    for a in 1..=n as u32 {
        let i = pos[a as usize - 1];
        if i >= pool.len() || pool[i] != a {
            continue; // already paired
        }
        let m = pool.len();
        remove(&mut pool, &mut pos, a);
        if rng.gen::<f64>() < ratio[m] {
            continue; // fixed point
        }
        let b = pool[rng.gen_range(0..pool.len())];
        remove(&mut pool, &mut pos, b);
        map[a as usize - 1] = b;
        map[b as usize - 1] = a;
    }
    Permutation::from_vec_unchecked(map)
}

/// Uniform permutation on the conjugacy class of the given cycle type.
pub fn sample_with_cycle_type(partition: &[u32], stream: RngStream) -> Result<Permutation, SamplerError> {
    sample_with_cycle_type_rng(partition, &mut stream.rng())
}

pub fn sample_with_cycle_type_rng(
    partition: &[u32],
    rng: &mut impl Rng,
) -> Result<Permutation, SamplerError> {
    let n: u64 = partition.iter().map(|&p| p as u64).sum();
    validate_partition(partition, n as usize)?;
    let n = n as usize;
    let mut elems: Vec<u32> = (1..=n as u32).collect();
    elems.shuffle(rng);
    let mut map: Vec<u32> = vec![0; n];
    let mut offset = 0usize;
    for &len in partition {
        let block = &elems[offset..offset + len as usize];
        for (i, &e) in block.iter().enumerate() {
            map[e as usize - 1] = block[(i + 1) % block.len()];
        }
        offset += len as usize;
    }
    Ok(Permutation::from_vec_unchecked(map))
}

/// The operator `T`: merges all cycles of `σ` into a single n-cycle via
/// transpositions sharing a common point.
///
/// One representative is drawn uniformly from each cycle; a pivot `i₁`
/// is chosen uniformly among the representatives and the rest are put
/// in uniformly random order `i₂, ..., i_m`; the result is
/// `σ ∘ (i₁,i₂) ∘ (i₁,i₃) ∘ ... ∘ (i₁,i_m)`, transpositions applied
/// right to left. A permutation with a single cycle is returned
/// unchanged.
pub fn merge_cycles_t(sigma: &Permutation, stream: RngStream) -> Permutation {
    merge_cycles_t_rng(sigma, &mut stream.rng())
}

pub fn merge_cycles_t_rng(sigma: &Permutation, rng: &mut impl Rng) -> Permutation {
    let decomposition = sigma.cycles();
    if decomposition.num_cycles() == 1 {
        return sigma.clone();
    }
    let mut reps: Vec<u32> = decomposition
        .cycles
        .iter()
        .map(|c| c[rng.gen_range(0..c.len())])
        .collect();
    reps.shuffle(rng);
    // The product (i₁,i₂)∘(i₁,i₃)∘...∘(i₁,i_m), applied right to left,
    // is the cycle i₁ → i_m → i_{m-1} → ... → i₂ → i₁.
    let m = reps.len();
    let mut map = sigma.one_line().to_vec();
    map[reps[0] as usize - 1] = sigma.image(reps[m - 1]);
    for j in 1..m {
        map[reps[j] as usize - 1] = sigma.image(reps[j - 1]);
    }
    Permutation::from_vec_unchecked(map)
}

/// The operator `T'` on involutions: pairs up the fixed points of `σ`
/// with a uniform perfect matching (one uniformly chosen fixed point
/// stays unmatched when their number is odd).
pub fn merge_fixed_points_tprime(
    sigma: &Permutation,
    stream: RngStream,
) -> Result<Permutation, SamplerError> {
    merge_fixed_points_tprime_rng(sigma, &mut stream.rng())
}

pub fn merge_fixed_points_tprime_rng(
    sigma: &Permutation,
    rng: &mut impl Rng,
) -> Result<Permutation, SamplerError> {
    if !sigma.is_involution() {
        return Err(SamplerError::NotAnInvolution);
    }
    let mut fixed: Vec<u32> = (1..=sigma.n() as u32)
        .filter(|&m| sigma.image(m) == m)
        .collect();
    fixed.shuffle(rng);
    let mut map = sigma.one_line().to_vec();
    for pair in fixed.chunks_exact(2) {
        map[pair[0] as usize - 1] = pair[1];
        map[pair[1] as usize - 1] = pair[0];
    }
    Ok(Permutation::from_vec_unchecked(map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subseq::{greene_prefix_of_shape, lis, rsk_shape};
    use std::collections::HashMap;

    fn stream(seed: u64, idx: u64) -> RngStream {
        RngStream::new(seed, idx)
    }

    #[test]
    fn uniform_basics() {
        assert_eq!(sample_uniform(1, stream(1, 0)).one_line(), &[1]);
        let a = sample_uniform(50, stream(42, 3));
        let b = sample_uniform(50, stream(42, 3));
        assert_eq!(a, b, "same (seed, stream) must reproduce");
        let c = sample_uniform(50, stream(42, 4));
        assert_ne!(a, c);

        let mut rng = stream(7, 0).rng();
        let trials = 20_000;
        let hits = (0..trials)
            .filter(|_| sample_uniform_with(4, &mut rng).image(1) == 1)
            .count();
        let p = hits as f64 / trials as f64;
        let se = (0.25 * 0.75 / trials as f64).sqrt();
        assert!((p - 0.25).abs() < 4.0 * se, "p = {p}");
    }

    #[test]
    fn ewens0_is_single_cycle() {
        assert_eq!(sample_ewens0(2, stream(1, 0)).one_line(), &[2, 1]);
        let mut rng = stream(5, 0).rng();
        for _ in 0..200 {
            let s = sample_ewens0_with(17, &mut rng);
            assert_eq!(s.cycles().num_cycles(), 1);
        }
        // the two 3-cycles appear with frequency ~1/2
        let trials = 20_000;
        let mut counts: HashMap<Vec<u32>, usize> = HashMap::new();
        for _ in 0..trials {
            let s = sample_ewens0_with(3, &mut rng);
            *counts.entry(s.one_line().to_vec()).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 2);
        for &c in counts.values() {
            let p = c as f64 / trials as f64;
            let se = (0.25 / trials as f64).sqrt();
            assert!((p - 0.5).abs() < 4.0 * se, "p = {p}");
        }
    }

    #[test]
    fn ewens_theta_one_matches_uniform_cycle_count() {
        // E[#cycles] under Ewens(1) = H_100 ≈ 5.187
        let mut rng = stream(9, 0).rng();
        let trials = 4000;
        let mut total = 0usize;
        for _ in 0..trials {
            total += sample_ewens_with(100, 1.0, &mut rng).cycles().num_cycles();
        }
        let mean = total as f64 / trials as f64;
        let h100: f64 = (1..=100).map(|k| 1.0 / k as f64).sum();
        // Var(#cycles) = Σ (1/k)(1 - 1/k) < H_100
        let se = (h100 / trials as f64).sqrt();
        assert!((mean - h100).abs() < 4.0 * se, "mean = {mean}, H100 = {h100}");
    }

    #[test]
    fn ewens_theta_zero_delegates() {
        for i in 0..20 {
            let s = sample_ewens(5, 0.0, stream(3, i));
            assert_eq!(s.cycles().num_cycles(), 1);
        }
        assert_eq!(sample_ewens(1, 2.5, stream(3, 0)).one_line(), &[1]);
    }

    #[test]
    fn involutions_are_involutions_and_equidistributed() {
        let mut rng = stream(13, 0).rng();
        for _ in 0..200 {
            let s = sample_uniform_involution_with(31, &mut rng);
            assert!(s.is_involution());
        }
        // I(3) = 4 involutions, each with probability 1/4
        let trials = 40_000;
        let mut counts: HashMap<Vec<u32>, usize> = HashMap::new();
        for _ in 0..trials {
            let s = sample_uniform_involution_with(3, &mut rng);
            *counts.entry(s.one_line().to_vec()).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 4);
        let chi2: f64 = counts
            .values()
            .map(|&c| {
                let e = trials as f64 / 4.0;
                (c as f64 - e).powi(2) / e
            })
            .sum();
        let p = chi_square_p_value(chi2, 3.0);
        assert!(p > 1e-3, "chi2 = {chi2}, p = {p}");
    }

    #[test]
    fn involution_two_cases() {
        let trials = 20_000;
        let mut rng = stream(21, 0).rng();
        let mut id_count = 0;
        for _ in 0..trials {
            if sample_uniform_involution_with(2, &mut rng).is_identity() {
                id_count += 1;
            }
        }
        let p = id_count as f64 / trials as f64;
        assert!((p - 0.5).abs() < 4.0 * (0.25f64 / trials as f64).sqrt());
    }

    #[test]
    fn cycle_type_sampling() {
        let ones = vec![1u32; 6];
        assert!(sample_with_cycle_type(&ones, stream(1, 0))
            .unwrap()
            .is_identity());
        assert!(sample_with_cycle_type(&[2, 3], stream(1, 0)).is_err());
        assert!(sample_with_cycle_type(&[0], stream(1, 0)).is_err());

        let mut rng = stream(17, 0).rng();
        for _ in 0..100 {
            let s = sample_with_cycle_type_rng(&[4, 2, 1], &mut rng).unwrap();
            assert_eq!(s.cycles().cycle_type(), vec![4, 2, 1]);
        }
        // (2,1) in S_3: the three transpositions, each ~1/3
        let trials = 30_000;
        let mut counts: HashMap<Vec<u32>, usize> = HashMap::new();
        for _ in 0..trials {
            let s = sample_with_cycle_type_rng(&[2, 1], &mut rng).unwrap();
            *counts.entry(s.one_line().to_vec()).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 3);
        for &c in counts.values() {
            let p = c as f64 / trials as f64;
            assert!((p - 1.0 / 3.0).abs() < 0.02, "p = {p}");
        }
    }

    #[test]
    fn t_operator_basics() {
        // an n-cycle is a fixed point of T
        let c = Permutation::from_one_line(&[2, 3, 4, 5, 1]).unwrap();
        assert_eq!(merge_cycles_t(&c, stream(1, 0)), c);
        // identity_2 has a single merge
        assert_eq!(
            merge_cycles_t(&Permutation::identity(2), stream(1, 0)).one_line(),
            &[2, 1]
        );
        // identity_3 always maps to a 3-cycle; both 3-cycles appear
        let mut rng = stream(2, 0).rng();
        let mut counts: HashMap<Vec<u32>, usize> = HashMap::new();
        for _ in 0..2000 {
            let s = merge_cycles_t_rng(&Permutation::identity(3), &mut rng);
            assert_eq!(s.cycles().num_cycles(), 1);
            *counts.entry(s.one_line().to_vec()).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 2);
    }

    #[test]
    fn t_always_yields_single_cycle_and_respects_lis_bound() {
        let mut rng = stream(3, 0).rng();
        for _ in 0..500 {
            let n = rng.gen_range(2..=60);
            let s = sample_uniform_with(n, &mut rng);
            let c = s.cycles().num_cycles();
            let t = merge_cycles_t_rng(&s, &mut rng);
            assert_eq!(t.cycles().num_cycles(), 1);
            let diff = lis(&t) as i64 - lis(&s) as i64;
            assert!(diff.unsigned_abs() as usize <= c);
            // Greene prefix bound
            let sh_s = rsk_shape(&s);
            let sh_t = rsk_shape(&t);
            for k in 1..=n {
                let d = greene_prefix_of_shape(&sh_s, k) as i64
                    - greene_prefix_of_shape(&sh_t, k) as i64;
                assert!(d.unsigned_abs() as usize <= c);
            }
        }
    }

    #[test]
    fn tprime_operator_basics() {
        // fixed-point-free involution is unchanged
        let s = Permutation::from_one_line(&[2, 1, 4, 3]).unwrap();
        assert_eq!(merge_fixed_points_tprime(&s, stream(1, 0)).unwrap(), s);
        assert_eq!(
            merge_fixed_points_tprime(&Permutation::identity(2), stream(1, 0))
                .unwrap()
                .one_line(),
            &[2, 1]
        );
        // non-involution rejected
        let c = Permutation::from_one_line(&[2, 3, 1]).unwrap();
        assert!(matches!(
            merge_fixed_points_tprime(&c, stream(1, 0)),
            Err(SamplerError::NotAnInvolution)
        ));
        // identity_4: the 3 fixed-point-free involutions of S_4, each ~1/3
        let mut rng = stream(4, 0).rng();
        let trials = 30_000;
        let mut counts: HashMap<Vec<u32>, usize> = HashMap::new();
        for _ in 0..trials {
            let s = merge_fixed_points_tprime_rng(&Permutation::identity(4), &mut rng).unwrap();
            assert!(s.is_involution());
            assert_eq!(s.num_fixed_points(), 0);
            *counts.entry(s.one_line().to_vec()).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 3);
        for &c in counts.values() {
            let p = c as f64 / trials as f64;
            assert!((p - 1.0 / 3.0).abs() < 0.02, "p = {p}");
        }
    }

    #[test]
    fn tprime_parity_and_lis_bound() {
        let mut rng = stream(6, 0).rng();
        for _ in 0..300 {
            let n = rng.gen_range(1..=60);
            let s = sample_uniform_involution_with(n, &mut rng);
            let f = s.num_fixed_points();
            let t = merge_fixed_points_tprime_rng(&s, &mut rng).unwrap();
            assert!(t.is_involution());
            assert_eq!(t.num_fixed_points(), f % 2);
            let diff = lis(&t) as i64 - lis(&s) as i64;
            assert!(diff.unsigned_abs() as usize <= f);
        }
    }

    #[test]
    fn spec_json_roundtrip() {
        let specs = [
            r#"{"kind":"uniform","n":1000}"#,
            r#"{"kind":"ewens0","n":1000}"#,
            r#"{"kind":"ewens","n":1000,"theta":0.5}"#,
            r#"{"kind":"involution","n":1000}"#,
            r#"{"kind":"cycle_type","n":5,"weights":[{"partition":[3,2],"p":1.0}]}"#,
            r#"{"kind":"point_mass","map":[2,1,3]}"#,
        ];
        for text in specs {
            let spec: DistributionSpec = serde_json::from_str(text).unwrap();
            spec.validate().unwrap();
            let back: DistributionSpec =
                serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
            assert_eq!(back, spec);
        }
        let bad: DistributionSpec =
            serde_json::from_str(r#"{"kind":"ewens","n":10,"theta":-1.0}"#).unwrap();
        assert!(bad.validate().is_err());
        let bad: DistributionSpec =
            serde_json::from_str(r#"{"kind":"cycle_type","n":5,"weights":[{"partition":[3,1],"p":1.0}]}"#)
                .unwrap();
        assert!(bad.validate().is_err());
        assert!(
            !serde_json::from_str::<DistributionSpec>(r#"{"kind":"point_mass","map":[2,2]}"#)
                .unwrap()
                .validate()
                .is_ok()
        );
    }

    #[test]
    fn involution_fixed_point_scaling() {
        // E(card(fix))/√n → 1; desk-scale check at n = 2500
        let n = 2500;
        let mut rng = stream(99, 0).rng();
        let draws = 200;
        let mut total = 0usize;
        for _ in 0..draws {
            total += sample_uniform_involution_with(n, &mut rng).num_fixed_points();
        }
        let normalized = total as f64 / draws as f64 / (n as f64).sqrt();
        assert!((0.85..1.15).contains(&normalized), "got {normalized}");
    }

    fn chi_square_p_value(chi2: f64, df: f64) -> f64 {
        use statrs::distribution::{ChiSquared, ContinuousCDF};
        1.0 - ChiSquared::new(df).unwrap().cdf(chi2)
    }
}
