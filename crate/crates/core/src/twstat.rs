//! Tracy-Widom GUE reference distribution and goodness-of-fit
//! statistics.
//!
//! `F₂` is shipped as a tabulated CDF (grid `s ∈ [−10, 6]`, step 1/16)
//! with monotone piecewise-linear interpolation; the table was produced
//! by solving the Painlevé II representation numerically and is
//! cross-checked by its first two moments in the test suite.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TwError {
    #[error("invalid CDF table: {0}")]
    InvalidTable(String),
    #[error("empty sample")]
    EmptySample,
}

/// Bundled F₂ table (CSV with header `s,F2`).
pub const F2_TABLE_CSV: &str = include_str!("../data/f2_cdf.csv");

/// Maximum grid spacing accepted by [`CdfTable::new`].
const MAX_SPACING: f64 = 1.0 / 16.0 + 1e-12;

/// A tabulated CDF: strictly increasing abscissae with nondecreasing
/// values in `[0, 1]`, dense enough (spacing ≤ 1/16) and covering
/// essentially all of the mass (first value < 0.001, last > 0.999).
#[derive(Debug, Clone)]
pub struct CdfTable {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl CdfTable {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self, TwError> {
        if grid.len() != values.len() {
            return Err(TwError::InvalidTable("grid/value length mismatch".into()));
        }
        if grid.len() < 2 {
            return Err(TwError::InvalidTable("need at least two points".into()));
        }
        for w in grid.windows(2) {
            // NaN entries must fail this check too.
            if w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater) {
                return Err(TwError::InvalidTable("grid not strictly increasing".into()));
            }
            if w[1] - w[0] > MAX_SPACING {
                return Err(TwError::InvalidTable(format!(
                    "grid spacing {} exceeds 1/16",
                    w[1] - w[0]
                )));
            }
        }
        for w in values.windows(2) {
            if w[1] < w[0] {
                return Err(TwError::InvalidTable("values decreasing".into()));
            }
        }
        if values.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
            return Err(TwError::InvalidTable("values outside [0, 1]".into()));
        }
        if values[0] >= 0.001 {
            return Err(TwError::InvalidTable(format!(
                "first value {} >= 0.001: left tail not covered",
                values[0]
            )));
        }
        if values[values.len() - 1] <= 0.999 {
            return Err(TwError::InvalidTable(format!(
                "last value {} <= 0.999: right tail not covered",
                values[values.len() - 1]
            )));
        }
        Ok(CdfTable { grid, values })
    }

    /// Parses the `s,F2` CSV format.
    pub fn from_csv(text: &str) -> Result<Self, TwError> {
        let mut grid = Vec::new();
        let mut values = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if i == 0 {
                if line != "s,F2" {
                    return Err(TwError::InvalidTable(format!(
                        "expected header 's,F2', got '{line}'"
                    )));
                }
                continue;
            }
            let (s, v) = line.split_once(',').ok_or_else(|| {
                TwError::InvalidTable(format!("line {} not 's,value'", i + 1))
            })?;
            let parse = |t: &str| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| TwError::InvalidTable(format!("line {}: {e}", i + 1)))
            };
            grid.push(parse(s)?);
            values.push(parse(v)?);
        }
        CdfTable::new(grid, values)
    }

    /// The bundled Tracy-Widom GUE table.
    pub fn f2() -> Self {
        CdfTable::from_csv(F2_TABLE_CSV).expect("bundled table is valid")
    }

    /// Monotone piecewise-linear interpolation, clamped to 0/1 outside
    /// the grid.
    pub fn cdf(&self, s: f64) -> f64 {
        if s <= self.grid[0] {
            return 0.0;
        }
        let last = self.grid.len() - 1;
        if s >= self.grid[last] {
            return 1.0;
        }
        let i = match self.grid.partition_point(|&x| x <= s) {
            0 => 0,
            p => p - 1,
        };
        let t = (s - self.grid[i]) / (self.grid[i + 1] - self.grid[i]);
        self.values[i] + t * (self.values[i + 1] - self.values[i])
    }

    /// Generalized inverse (quantile) of the interpolated CDF.
    pub fn quantile(&self, p: f64) -> f64 {
        assert!((0.0..=1.0).contains(&p));
        let i = self.values.partition_point(|&v| v < p);
        if i == 0 {
            return self.grid[0];
        }
        if i >= self.grid.len() {
            return self.grid[self.grid.len() - 1];
        }
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        if v1 == v0 {
            return self.grid[i];
        }
        let t = (p - v0) / (v1 - v0);
        self.grid[i - 1] + t * (self.grid[i] - self.grid[i - 1])
    }

    /// First moment of the table-induced distribution (midpoint rule on
    /// the CDF increments, boundary mass at the grid ends).
    pub fn mean(&self) -> f64 {
        let mut m = self.grid[0] * self.values[0]
            + self.grid[self.grid.len() - 1] * (1.0 - self.values[self.values.len() - 1]);
        for i in 0..self.grid.len() - 1 {
            let mid = 0.5 * (self.grid[i] + self.grid[i + 1]);
            m += mid * (self.values[i + 1] - self.values[i]);
        }
        m
    }

    /// Second central moment of the table-induced distribution.
    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        let mut v = (self.grid[0] - mean).powi(2) * self.values[0]
            + (self.grid[self.grid.len() - 1] - mean).powi(2)
                * (1.0 - self.values[self.values.len() - 1]);
        for i in 0..self.grid.len() - 1 {
            let mid = 0.5 * (self.grid[i] + self.grid[i + 1]);
            v += (mid - mean).powi(2) * (self.values[i + 1] - self.values[i]);
        }
        v
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// One-sample Kolmogorov-Smirnov distance
/// `D = sup_x |F̂_n(x) − F(x)|`, evaluated exactly at the sorted sample
/// points via `max(F(x₍ᵢ₎) − (i−1)/n, i/n − F(x₍ᵢ₎))`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64, TwError> {
    if samples.is_empty() {
        return Err(TwError::EmptySample);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("no NaN samples"));
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let lower = f - i as f64 / n;
        let upper = (i + 1) as f64 / n - f;
        d = d.max(lower).max(upper);
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn bundled_table_is_valid_and_clamps() {
        let table = CdfTable::f2();
        assert_eq!(table.cdf(-20.0), 0.0);
        assert_eq!(table.cdf(10.0), 1.0);
        // known value F2(0) ≈ 0.9693728
        assert!((table.cdf(0.0) - 0.96937).abs() < 1e-4);
        // nondecreasing on a fine grid
        let mut prev = -1.0;
        for i in 0..=3000 {
            let s = -12.0 + 20.0 * i as f64 / 3000.0;
            let v = table.cdf(s);
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn table_moments_match_tracy_widom() {
        let table = CdfTable::f2();
        assert!((table.mean() + 1.771).abs() < 0.01, "mean = {}", table.mean());
        assert!(
            (table.variance() - 0.813).abs() < 0.01,
            "variance = {}",
            table.variance()
        );
    }

    #[test]
    fn table_validation_rejects_bad_input() {
        assert!(CdfTable::from_csv("s,F2\n0.0,0.5").is_err()); // tails not covered
        assert!(CdfTable::from_csv("bad header\n0,0").is_err());
        assert!(CdfTable::new(vec![0.0, 1.0], vec![0.0, 1.0]).is_err()); // spacing
        let grid: Vec<f64> = (0..64).map(|i| i as f64 / 16.0).collect();
        let mut values: Vec<f64> = (0..64).map(|i| i as f64 / 63.0).collect();
        assert!(CdfTable::new(grid.clone(), values.clone()).is_ok());
        values[10] = 0.0;
        assert!(CdfTable::new(grid, values).is_err()); // not monotone
    }

    #[test]
    fn ks_single_sample_at_median() {
        let d = ks_statistic(&[0.0], |_| 0.5).unwrap();
        assert_eq!(d, 0.5);
        assert!(matches!(ks_statistic(&[], |_| 0.5), Err(TwError::EmptySample)));
    }

    #[test]
    fn ks_under_the_null_is_small() {
        let table = CdfTable::f2();
        let mut rng = crate::samplers::RngStream::new(123, 0).rng();
        let samples: Vec<f64> = (0..10_000)
            .map(|_| table.quantile(rng.gen::<f64>()))
            .collect();
        let d = ks_statistic(&samples, |s| table.cdf(s)).unwrap();
        assert!(d < 0.03, "D = {d}");
    }

    #[test]
    fn ks_is_permutation_invariant_and_matches_brute_force() {
        let table = CdfTable::f2();
        let samples = [-3.0, -1.0, -2.5, 0.5, -1.7];
        let mut reversed = samples.to_vec();
        reversed.reverse();
        let d1 = ks_statistic(&samples, |s| table.cdf(s)).unwrap();
        let d2 = ks_statistic(&reversed, |s| table.cdf(s)).unwrap();
        assert_eq!(d1, d2);
        // brute-force sup over a dense grid never exceeds the exact value
        let mut sorted = samples.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let ecdf = |x: f64| sorted.iter().filter(|&&v| v <= x).count() as f64 / 5.0;
        let mut brute = 0.0f64;
        for i in 0..=100_000 {
            let x = -10.0 + 16.0 * i as f64 / 100_000.0;
            brute = brute.max((ecdf(x) - table.cdf(x)).abs());
        }
        assert!(brute <= d1 + 1e-9);
        assert!(d1 - brute < 1e-3);
    }
}
