//! Permutations in one-line form and their cycle structure.
//!
//! Elements are labelled `1..=n` in every external format; the one-line
//! array is the canonical representation and cycle form is derived on
//! demand.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("not a bijection: {0}")]
    NotABijection(String),
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("not an involution")]
    NotAnInvolution,
    #[error("parse error: {0}")]
    Parse(String),
}

/// A permutation of `{1, ..., n}` stored in one-line form.
///
/// `map[i]` is the (1-based) image of `i + 1`. Immutable after
/// construction and safe to share across threads.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    map: Vec<u32>,
}

impl Permutation {
    /// Builds a permutation from its one-line word, validating bijectivity.
    pub fn from_one_line(values: &[u32]) -> Result<Self, PermError> {
        if values.is_empty() {
            return Err(PermError::NotABijection("empty word".into()));
        }
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in values {
            if v == 0 || v as usize > n {
                return Err(PermError::NotABijection(format!(
                    "value {v} out of range 1..={n}"
                )));
            }
            if seen[v as usize - 1] {
                return Err(PermError::NotABijection(format!("value {v} duplicated")));
            }
            seen[v as usize - 1] = true;
        }
        Ok(Permutation {
            map: values.to_vec(),
        })
    }

    /// Identity on `{1, ..., n}`.
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1);
        Permutation {
            map: (1..=n as u32).collect(),
        }
    }

    /// Builds without the bijectivity scan. The caller guarantees `map`
    /// is a bijection of `1..=n`.
    pub(crate) fn from_vec_unchecked(map: Vec<u32>) -> Self {
        debug_assert!(!map.is_empty());
        Permutation { map }
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    /// Image of `i` (1-based).
    #[inline]
    pub fn image(&self, i: u32) -> u32 {
        self.map[i as usize - 1]
    }

    /// The one-line word, 1-based values.
    pub fn one_line(&self) -> &[u32] {
        &self.map
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, inner: &Permutation) -> Result<Permutation, PermError> {
        if self.n() != inner.n() {
            return Err(PermError::SizeMismatch {
                left: self.n(),
                right: inner.n(),
            });
        }
        let map = inner
            .map
            .iter()
            .map(|&v| self.map[v as usize - 1])
            .collect();
        Ok(Permutation::from_vec_unchecked(map))
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.n()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v as usize - 1] = i as u32 + 1;
        }
        Permutation::from_vec_unchecked(inv)
    }

    /// `self ∘ self`.
    pub fn square(&self) -> Permutation {
        self.compose(self).expect("sizes match")
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| v == i as u32 + 1)
    }

    pub fn is_involution(&self) -> bool {
        self.map
            .iter()
            .enumerate()
            .all(|(i, &v)| self.map[v as usize - 1] == i as u32 + 1)
    }

    /// Cycle decomposition with canonical ordering: minimal element first
    /// within each cycle, cycles sorted by minimal element.
    pub fn cycles(&self) -> CycleDecomposition {
        let n = self.n();
        let mut visited = vec![false; n];
        let mut cycles = Vec::new();
        let mut cycle_length_of = vec![0u32; n];
        let mut fixed_points = Vec::new();
        let mut count_by_length: BTreeMap<u32, u32> = BTreeMap::new();
        for start in 1..=n as u32 {
            if visited[start as usize - 1] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut m = start;
            loop {
                visited[m as usize - 1] = true;
                cycle.push(m);
                m = self.image(m);
                if m == start {
                    break;
                }
            }
            let len = cycle.len() as u32;
            for &x in &cycle {
                cycle_length_of[x as usize - 1] = len;
            }
            if len == 1 {
                fixed_points.push(start);
            }
            *count_by_length.entry(len).or_insert(0) += 1;
            cycles.push(cycle);
        }
        CycleDecomposition {
            cycles,
            cycle_length_of,
            fixed_points,
            count_by_length,
        }
    }

    /// Number of fixed points, without building the full decomposition.
    pub fn num_fixed_points(&self) -> usize {
        self.map
            .iter()
            .enumerate()
            .filter(|&(i, &v)| v == i as u32 + 1)
            .count()
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.map)
    }
}

impl fmt::Display for Permutation {
    /// Space-separated one-line word, e.g. `5 3 2 1 4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let values: Result<Vec<u32>, _> = s.split_whitespace().map(|t| t.parse()).collect();
        let values = values.map_err(|e| PermError::Parse(format!("{e}")))?;
        Permutation::from_one_line(&values)
    }
}

#[derive(Serialize, Deserialize)]
struct PermutationRepr {
    n: usize,
    map: Vec<u32>,
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PermutationRepr {
            n: self.n(),
            map: self.map.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = PermutationRepr::deserialize(deserializer)?;
        if repr.map.len() != repr.n {
            return Err(serde::de::Error::custom(format!(
                "declared n = {} but map has length {}",
                repr.n,
                repr.map.len()
            )));
        }
        Permutation::from_one_line(&repr.map).map_err(serde::de::Error::custom)
    }
}

/// Cycle structure of a permutation, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    /// Each cycle starts with its minimal element; cycles sorted by
    /// minimal element.
    pub cycles: Vec<Vec<u32>>,
    /// Entry `m - 1` is the length of the cycle containing `m`.
    pub cycle_length_of: Vec<u32>,
    /// Sorted fixed points.
    pub fixed_points: Vec<u32>,
    /// Cycle length `k` → number of cycles of that length.
    pub count_by_length: BTreeMap<u32, u32>,
}

impl CycleDecomposition {
    /// `#(σ)`, the number of cycles.
    pub fn num_cycles(&self) -> usize {
        self.cycles.len()
    }

    /// Length of the cycle containing `m` (1-based).
    pub fn cycle_length_of(&self, m: u32) -> u32 {
        self.cycle_length_of[m as usize - 1]
    }

    /// Number of cycles of length `k`.
    pub fn count_of_length(&self, k: u32) -> u32 {
        self.count_by_length.get(&k).copied().unwrap_or(0)
    }

    /// The cycle type as a weakly decreasing partition.
    pub fn cycle_type(&self) -> Vec<u32> {
        let mut lens: Vec<u32> = self.cycles.iter().map(|c| c.len() as u32).collect();
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }
}

/// Iterator over every permutation of `{1, ..., n}` in lexicographic
/// order of the one-line word. Intended for exhaustive small-n checks.
pub fn all_permutations(n: usize) -> impl Iterator<Item = Permutation> {
    assert!((1..=10).contains(&n), "exhaustive enumeration capped at n = 10");
    let mut word: Vec<u32> = (1..=n as u32).collect();
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let current = Permutation::from_vec_unchecked(word.clone());
        // next lexicographic word
        let mut i = n.wrapping_sub(1);
        while i > 0 && word[i - 1] >= word[i] {
            i -= 1;
        }
        if i == 0 {
            done = true;
        } else {
            let mut j = n - 1;
            while word[j] <= word[i - 1] {
                j -= 1;
            }
            word.swap(i - 1, j);
            word[i..].reverse();
        }
        Some(current)
    })
}
