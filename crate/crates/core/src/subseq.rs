//! Longest increasing subsequence, longest common subsequence of
//! permutations, RSK shape and Greene prefix invariants.
//!
//! Each production kernel has an independent brute-force oracle,
//! quarantined behind a size guard. The production `lcs` always routes
//! through the reduction `LCS(σ₁,σ₂) = ℓ(σ₁⁻¹∘σ₂)`; the word-LCS
//! dynamic program exists only as an oracle.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::perm::Permutation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubseqError {
    #[error("input too large for oracle: n = {n}, cap = {cap}")]
    InputTooLarge { n: usize, cap: usize },
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
}

/// A Young diagram: weakly decreasing positive parts summing to `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    parts: Vec<u32>,
}

impl Shape {
    pub fn new(parts: Vec<u32>) -> Result<Self, String> {
        if parts.is_empty() {
            return Err("shape must have at least one part".into());
        }
        for w in parts.windows(2) {
            if w[0] < w[1] {
                return Err(format!("parts not weakly decreasing: {} < {}", w[0], w[1]));
            }
        }
        if parts[parts.len() - 1] == 0 {
            return Err("parts must be positive".into());
        }
        Ok(Shape { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// `λ_i`, 1-based, zero beyond the stored length.
    pub fn part(&self, i: usize) -> u32 {
        if i >= 1 && i <= self.parts.len() {
            self.parts[i - 1]
        } else {
            0
        }
    }

    /// Total number of boxes.
    pub fn n(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    /// Length of the first column, `λ′₁`.
    pub fn num_rows(&self) -> usize {
        self.parts.len()
    }

    /// `λ′₁` is the number of parts; `λ₁` the first part.
    pub fn first_part(&self) -> u32 {
        self.parts[0]
    }
}

#[derive(Serialize, Deserialize)]
struct ShapeRepr {
    n: u64,
    parts: Vec<u32>,
}

impl Serialize for Shape {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ShapeRepr {
            n: self.n(),
            parts: self.parts.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Shape {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = ShapeRepr::deserialize(deserializer)?;
        let shape = Shape::new(repr.parts).map_err(serde::de::Error::custom)?;
        if shape.n() != repr.n {
            return Err(serde::de::Error::custom(format!(
                "declared n = {} but parts sum to {}",
                repr.n,
                shape.n()
            )));
        }
        Ok(shape)
    }
}

/// Length of the longest increasing subsequence, by patience sorting
/// with binary search over pile tops. O(n log n).
pub fn lis(sigma: &Permutation) -> usize {
    lis_of_word(sigma.one_line())
}

fn lis_of_word(word: &[u32]) -> usize {
    let mut tops: Vec<u32> = Vec::new();
    for &v in word {
        // first pile whose top is >= v (letters are distinct, so > v works too)
        match tops.binary_search(&v) {
            Ok(_) => unreachable!("distinct letters"),
            Err(pos) => {
                if pos == tops.len() {
                    tops.push(v);
                } else {
                    tops[pos] = v;
                }
            }
        }
    }
    tops.len()
}

const LIS_ORACLE_CAP: usize = 10_000;

/// Quadratic dynamic program for LIS; oracle only.
pub fn lis_oracle(sigma: &Permutation) -> Result<usize, SubseqError> {
    let n = sigma.n();
    if n > LIS_ORACLE_CAP {
        return Err(SubseqError::InputTooLarge {
            n,
            cap: LIS_ORACLE_CAP,
        });
    }
    let word = sigma.one_line();
    let mut best = vec![1usize; n];
    let mut ans = 0;
    for i in 0..n {
        for j in 0..i {
            if word[j] < word[i] && best[j] + 1 > best[i] {
                best[i] = best[j] + 1;
            }
        }
        ans = ans.max(best[i]);
    }
    Ok(ans)
}

/// `LCS(σ₁, σ₂) = ℓ(σ₁⁻¹ ∘ σ₂)`.
pub fn lcs(sigma1: &Permutation, sigma2: &Permutation) -> Result<usize, SubseqError> {
    if sigma1.n() != sigma2.n() {
        return Err(SubseqError::SizeMismatch {
            left: sigma1.n(),
            right: sigma2.n(),
        });
    }
    let composed = sigma1.inverse().compose(sigma2).expect("sizes match");
    Ok(lis(&composed))
}

const LCS_ORACLE_CAP: usize = 5_000;

/// Classic O(n²) LCS dynamic program on the one-line words; oracle only,
/// independent of the inversion reduction.
pub fn lcs_oracle(sigma1: &Permutation, sigma2: &Permutation) -> Result<usize, SubseqError> {
    if sigma1.n() != sigma2.n() {
        return Err(SubseqError::SizeMismatch {
            left: sigma1.n(),
            right: sigma2.n(),
        });
    }
    let n = sigma1.n();
    if n > LCS_ORACLE_CAP {
        return Err(SubseqError::InputTooLarge {
            n,
            cap: LCS_ORACLE_CAP,
        });
    }
    let a = sigma1.one_line();
    let b = sigma2.one_line();
    let mut prev = vec![0usize; n + 1];
    let mut cur = vec![0usize; n + 1];
    for i in 1..=n {
        for j in 1..=n {
            cur[j] = if a[i - 1] == b[j - 1] {
                prev[j - 1] + 1
            } else {
                prev[j].max(cur[j - 1])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok(prev[n])
}

/// RSK shape of a permutation by row insertion; the recording tableau is
/// never materialized.
pub fn rsk_shape(sigma: &Permutation) -> Shape {
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for &v in sigma.one_line() {
        let mut x = v;
        let mut r = 0;
        loop {
            if r == rows.len() {
                rows.push(vec![x]);
                break;
            }
            let row = &mut rows[r];
            // first entry > x gets bumped; letters are distinct
            match row.binary_search(&x) {
                Ok(_) => unreachable!("distinct letters"),
                Err(pos) => {
                    if pos == row.len() {
                        row.push(x);
                        break;
                    }
                    std::mem::swap(&mut row[pos], &mut x);
                    r += 1;
                }
            }
        }
    }
    Shape::new(rows.iter().map(|r| r.len() as u32).collect()).expect("row insertion shape")
}

/// Greene invariant `λ₁ + … + λ_k` via the RSK shape.
pub fn greene_prefix(sigma: &Permutation, k: usize) -> u64 {
    assert!(k >= 1);
    greene_prefix_of_shape(&rsk_shape(sigma), k)
}

/// Prefix sum `λ₁ + … + λ_k` of a shape.
pub fn greene_prefix_of_shape(shape: &Shape, k: usize) -> u64 {
    shape
        .parts()
        .iter()
        .take(k)
        .map(|&p| p as u64)
        .sum()
}

const GREENE_ORACLE_CAP: usize = 10;

/// Literal maximization of `|s|` over unions of `k` increasing
/// subsequences, by exhaustive subset enumeration with a backtracking
/// chain-cover check. Oracle only, `n ≤ 10`.
pub fn greene_oracle(sigma: &Permutation, k: usize) -> Result<u64, SubseqError> {
    assert!(k >= 1);
    let n = sigma.n();
    if n > GREENE_ORACLE_CAP {
        return Err(SubseqError::InputTooLarge {
            n,
            cap: GREENE_ORACLE_CAP,
        });
    }
    let word = sigma.one_line();
    let mut best = 0u32;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones();
        if size <= best {
            continue;
        }
        let vals: Vec<u32> = (0..n)
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| word[i])
            .collect();
        if coverable_by_chains(&vals, k) {
            best = size;
        }
    }
    Ok(best as u64)
}

/// Can `vals` (in position order) be partitioned into at most `k`
/// increasing chains? Backtracking over chain assignments.
fn coverable_by_chains(vals: &[u32], k: usize) -> bool {
    fn go(vals: &[u32], idx: usize, tops: &mut Vec<u32>, k: usize) -> bool {
        if idx == vals.len() {
            return true;
        }
        let v = vals[idx];
        for c in 0..tops.len() {
            if tops[c] < v {
                let old = tops[c];
                tops[c] = v;
                if go(vals, idx + 1, tops, k) {
                    return true;
                }
                tops[c] = old;
            }
        }
        if tops.len() < k {
            tops.push(v);
            if go(vals, idx + 1, tops, k) {
                return true;
            }
            tops.pop();
        }
        false
    }
    go(vals, 0, &mut Vec::new(), k)
}
