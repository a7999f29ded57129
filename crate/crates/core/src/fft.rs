//! Multi-dimensional FFT over row-major buffers.
//!
//! Plans are cached per thread, so transforms can run concurrently from
//! rayon workers without sharing a planner.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

thread_local! {
    static PLANS: RefCell<(FftPlanner<f64>, HashMap<(usize, bool), Arc<dyn Fft<f64>>>)> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|cell| {
        let (planner, cache) = &mut *cell.borrow_mut();
        cache
            .entry((len, inverse))
            .or_insert_with(|| {
                let dir = if inverse {
                    FftDirection::Inverse
                } else {
                    FftDirection::Forward
                };
                planner.plan_fft(len, dir)
            })
            .clone()
    })
}

/// Unnormalized in-place transform of an `n`-dimensional cube with side `points`.
fn transform(data: &mut [Complex64], dim: usize, points: usize, inverse: bool) {
    debug_assert_eq!(data.len(), points.pow(dim as u32));
    let fft = plan(points, inverse);
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let mut line = vec![Complex64::new(0.0, 0.0); points];
    let total = data.len();

    for axis in 0..dim {
        let stride = points.pow((dim - 1 - axis) as u32);
        if stride == 1 {
            for chunk in data.chunks_exact_mut(points) {
                fft.process_with_scratch(chunk, &mut scratch);
            }
            continue;
        }
        let block = stride * points;
        for outer in (0..total).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for (j, v) in line.iter_mut().enumerate() {
                    *v = data[base + j * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (j, v) in line.iter().enumerate() {
                    data[base + j * stride] = *v;
                }
            }
        }
    }
}

/// Forward transform normalized so that `c_k = N^{-n} Σ f(x) e^{-ik·x}`.
pub fn forward(data: &mut [Complex64], dim: usize, points: usize) {
    transform(data, dim, points, false);
    let scale = 1.0 / data.len() as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}

/// Inverse of [`forward`]: `f(x) = Σ c_k e^{ik·x}`.
pub fn inverse(data: &mut [Complex64], dim: usize, points: usize) {
    transform(data, dim, points, true);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forward_inverse_round_trip_3d() {
        let dim = 3;
        let n = 8;
        let orig: Vec<Complex64> = (0..n * n * n)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let mut data = orig.clone();
        forward(&mut data, dim, n);
        inverse(&mut data, dim, n);
        for (a, b) in orig.iter().zip(&data) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn single_axis_mode_lands_on_expected_index() {
        // f(i, j) = exp(2πi * 3 j / 8): only index (0, 3) is populated.
        let n = 8;
        let mut data: Vec<Complex64> = (0..n * n)
            .map(|flat| {
                let j = flat % n;
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * 3.0 * j as f64 / n as f64)
            })
            .collect();
        forward(&mut data, 2, n);
        for (flat, v) in data.iter().enumerate() {
            let expect = if flat == 3 { 1.0 } else { 0.0 };
            assert!((v.norm() - expect).abs() < 1e-13, "flat {flat}: {v}");
        }
    }
}
