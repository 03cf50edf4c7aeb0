//! Timing sweep for the greedy algorithm over growing trees.

use std::hint::black_box;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::generate::{generate, Family, GenError};
use crate::kecc::steiner_k_ecc;
use crate::QueryError;

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub k: usize,
    pub family: Family,
    pub sizes: Vec<usize>,
    /// Timed repetitions per size, after warm-up. At least 5.
    pub reps: usize,
    /// Each repetition runs enough calls to last at least this long.
    pub min_sample: Duration,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            k: 5,
            family: Family::BalancedSpider { legs: 16 },
            sizes: vec![1_000, 10_000, 100_000, 1_000_000],
            reps: 5,
            min_sample: Duration::from_millis(2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchPoint {
    pub n: usize,
    pub median_ns: f64,
    pub mean_ns: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub k: usize,
    pub family: String,
    pub points: Vec<BenchPoint>,
    /// Least-squares slope of `ln(median)` against `ln(n)`.
    pub slope: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Query(#[from] QueryError),
}

/// Times `steiner_k_ecc(T, 0, k)` for each size. Tree construction is outside
/// the timed region; times use the monotonic clock.
pub fn run_bench(config: &BenchConfig) -> Result<BenchReport, BenchError> {
    let reps = config.reps.max(5);
    let mut points = Vec::with_capacity(config.sizes.len());
    for &n in &config.sizes {
        let tree = generate(&config.family, n, 0)?;
        steiner_k_ecc(&tree, 0, config.k)?;

        // Calibrate the batch size, which doubles as warm-up.
        let mut batch = 1usize;
        loop {
            let start = Instant::now();
            for _ in 0..batch {
                black_box(steiner_k_ecc(black_box(&tree), 0, config.k).unwrap());
            }
            if start.elapsed() >= config.min_sample || batch >= 1 << 20 {
                break;
            }
            batch *= 2;
        }

        let mut samples: Vec<f64> = (0..reps)
            .map(|_| {
                let start = Instant::now();
                for _ in 0..batch {
                    black_box(steiner_k_ecc(black_box(&tree), 0, config.k).unwrap());
                }
                start.elapsed().as_nanos() as f64 / batch as f64
            })
            .collect();
        samples.sort_by(|a, b| a.total_cmp(b));
        let mean_ns = samples.iter().sum::<f64>() / samples.len() as f64;
        points.push(BenchPoint {
            n,
            median_ns: median(&samples),
            mean_ns,
        });
    }
    let slope = loglog_slope(
        &points
            .iter()
            .map(|p| (p.n as f64, p.median_ns))
            .collect::<Vec<_>>(),
    );
    Ok(BenchReport {
        k: config.k,
        family: config.family.to_string(),
        points,
        slope,
    })
}

fn median(sorted: &[f64]) -> f64 {
    let m = sorted.len();
    if m % 2 == 1 {
        sorted[m / 2]
    } else {
        (sorted[m / 2 - 1] + sorted[m / 2]) / 2.0
    }
}

/// Least-squares slope of `ln y` against `ln x`. NaN for fewer than two points.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_laws() {
        let linear: Vec<_> = [10.0, 100.0, 1000.0].iter().map(|&x| (x, 3.0 * x)).collect();
        assert!((loglog_slope(&linear) - 1.0).abs() < 1e-12);
        let quad: Vec<_> = [2.0, 4.0, 8.0, 16.0].iter().map(|&x| (x, x * x)).collect();
        assert!((loglog_slope(&quad) - 2.0).abs() < 1e-12);
        assert!(loglog_slope(&[(1.0, 1.0)]).is_nan());
    }

    #[test]
    fn small_sweep_runs() {
        let report = run_bench(&BenchConfig {
            sizes: vec![100, 200],
            min_sample: Duration::from_micros(50),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(report.points.len(), 2);
        assert!(report.points.iter().all(|p| p.median_ns > 0.0));
        assert_eq!(report.family, "balanced-spider:16");
    }

    #[test]
    fn bad_sizes_surface_errors() {
        let err = run_bench(&BenchConfig {
            k: 50,
            family: Family::Path,
            sizes: vec![10],
            ..Default::default()
        });
        assert!(matches!(err, Err(BenchError::Query(QueryError::KTooLarge { .. }))));
    }
}
