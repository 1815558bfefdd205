//! One-dimensional order optimization.
//!
//! Circular orders come from minimizing the angular stress
//! `L = 1/2 * sum_ij (D_ij - d_ij)^2` with `d_ij = 1 - cos(theta_i -
//! theta_j)` by stochastic gradient descent over the node angles. Linear
//! orders come from a 1-D classical-MDS embedding of the geodesic distance
//! matrix (the top eigenpair of the double-centered squared distances).

use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{PaletteError, Result};
use crate::geodesic::DistanceMatrix;

/// Optimized circular embedding: one angle per dataset plus the stress the
/// optimizer ended at.
#[derive(Debug, Clone)]
pub struct AngularEmbedding {
    theta: Vec<f64>,
    final_stress: f64,
}

impl AngularEmbedding {
    /// Angles in radians, each in `[0, 2*pi)`.
    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn final_stress(&self) -> f64 {
        self.final_stress
    }
}

/// Stochastic gradient descent settings.
///
/// Angles are initialized uniformly on `[0, 2*pi)` from a ChaCha8 generator
/// seeded with `seed + restart_index`, so runs are reproducible bit-for-bit.
#[derive(Debug, Clone)]
pub struct SgdParams {
    pub eta: f64,
    pub epochs: usize,
    pub seed: u64,
    pub restarts: usize,
    pub tolerance: f64,
}

impl Default for SgdParams {
    fn default() -> Self {
        SgdParams {
            eta: 0.05,
            epochs: 1000,
            seed: 42,
            restarts: 5,
            tolerance: 1e-9,
        }
    }
}

impl SgdParams {
    fn validate(&self) -> Result<()> {
        if !self.eta.is_finite() || self.eta <= 0.0 {
            return Err(PaletteError::InvalidParams(format!(
                "learning rate {} must be a positive real",
                self.eta
            )));
        }
        if self.epochs == 0 {
            return Err(PaletteError::InvalidParams("epochs must be >= 1".into()));
        }
        if self.restarts == 0 {
            return Err(PaletteError::InvalidParams("restarts must be >= 1".into()));
        }
        if !self.tolerance.is_finite() || self.tolerance <= 0.0 {
            return Err(PaletteError::InvalidParams(format!(
                "tolerance {} must be a positive real",
                self.tolerance
            )));
        }
        Ok(())
    }
}

/// Linear order from the 1-D ISOMAP coordinate.
#[derive(Debug, Clone)]
pub struct LinearOrdering {
    /// Dataset indices sorted by coordinate, ties by lower index.
    pub permutation: Vec<usize>,
    /// 1-D coordinate per dataset, in dataset order.
    pub coordinate: Vec<f64>,
}

/// Distance between two points on the unit circle: `1 - cos(a - b)`, in
/// `[0, 2]`.
#[inline]
pub fn angular_distance(theta_i: f64, theta_j: f64) -> f64 {
    1.0 - (theta_i - theta_j).cos()
}

/// Angular stress `1/2 * sum_ij (D_ij - d_ij)^2` over all ordered pairs.
pub fn stress(theta: &[f64], d: &DistanceMatrix) -> Result<f64> {
    let n = d.len();
    if theta.len() != n {
        return Err(PaletteError::DimensionMismatch {
            got: theta.len(),
            expected: n,
        });
    }
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let diff = d.get(i, j) - angular_distance(theta[i], theta[j]);
            total += diff * diff;
        }
    }
    Ok(0.5 * total)
}

/// Descent direction of the angular stress: component `i` is
/// `-dL/dtheta_i = 2 * sum_j (D_ij - d_ij) * sin(theta_i - theta_j)`.
///
/// The factor 2 accounts for each unordered pair appearing twice in the
/// ordered-pair sum of the objective.
pub fn stress_gradient(theta: &[f64], d: &DistanceMatrix) -> Result<Vec<f64>> {
    let n = d.len();
    if theta.len() != n {
        return Err(PaletteError::DimensionMismatch {
            got: theta.len(),
            expected: n,
        });
    }
    let mut grad = vec![0.0; n];
    for i in 0..n {
        let mut acc = 0.0;
        for j in 0..n {
            if i == j {
                continue;
            }
            let residual = d.get(i, j) - angular_distance(theta[i], theta[j]);
            acc += residual * (theta[i] - theta[j]).sin();
        }
        grad[i] = 2.0 * acc;
    }
    Ok(grad)
}

#[inline]
fn wrap_angle(x: f64) -> f64 {
    let a = x.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Stress evaluated through per-node sin/cos caches; identical to
/// [`stress`] up to rounding of the angle-difference identities.
fn stress_cached(sin_t: &[f64], cos_t: &[f64], d: &DistanceMatrix) -> f64 {
    let n = sin_t.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let dij = 1.0 - (cos_t[i] * cos_t[j] + sin_t[i] * sin_t[j]);
            let diff = d.get(i, j) - dij;
            total += diff * diff;
        }
    }
    total
}

struct RestartOutcome {
    theta: Vec<f64>,
    stress: f64,
}

fn run_restart(d: &DistanceMatrix, params: &SgdParams, seed: u64) -> RestartOutcome {
    let n = d.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut theta: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * TAU).collect();
    let mut sin_t: Vec<f64> = theta.iter().map(|t| t.sin()).collect();
    let mut cos_t: Vec<f64> = theta.iter().map(|t| t.cos()).collect();
    let mut order: Vec<usize> = (0..n).collect();

    let mut best_theta = theta.clone();
    let mut best_stress = stress_cached(&sin_t, &cos_t, d);
    let mut history = vec![best_stress];

    for _ in 0..params.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let mut step = 0.0;
            for j in 0..n {
                if j == i {
                    continue;
                }
                let sin_ij = sin_t[i] * cos_t[j] - cos_t[i] * sin_t[j];
                let cos_ij = cos_t[i] * cos_t[j] + sin_t[i] * sin_t[j];
                step += (d.get(i, j) - (1.0 - cos_ij)) * sin_ij;
            }
            theta[i] += params.eta * step;
            sin_t[i] = theta[i].sin();
            cos_t[i] = theta[i].cos();
        }
        for t in theta.iter_mut() {
            *t = wrap_angle(*t);
        }

        let current = stress_cached(&sin_t, &cos_t, d);
        if current < best_stress {
            best_stress = current;
            best_theta.copy_from_slice(&theta);
        }
        history.push(current);
        if history.len() >= 11 {
            let previous = history[history.len() - 11];
            if previous == 0.0 || (previous - current) / previous < params.tolerance {
                break;
            }
        }
    }

    RestartOutcome {
        theta: best_theta,
        stress: best_stress,
    }
}

/// Minimize the angular stress over `restarts` seeded initializations and
/// return the best embedding found.
///
/// Each epoch visits every node once in a shuffled order and applies the
/// full-sum update `theta_i += eta * sum_j (D_ij - d_ij) *
/// sin(theta_i - theta_j)` in place. The returned angles are the
/// lowest-stress snapshot seen during the winning restart, so the final
/// stress never exceeds the initial one.
pub fn optimize_angles(d: &DistanceMatrix, params: &SgdParams) -> Result<AngularEmbedding> {
    params.validate()?;
    let n = d.len();
    if n < 2 {
        return Err(PaletteError::TooFewPoints { n, min: 2 });
    }

    let mut best: Option<RestartOutcome> = None;
    for restart in 0..params.restarts {
        let outcome = run_restart(d, params, params.seed.wrapping_add(restart as u64));
        let improves = best.as_ref().is_none_or(|b| outcome.stress < b.stress);
        if improves {
            best = Some(outcome);
        }
    }
    let winner = best.expect("restarts >= 1");
    // Report the exact stress of the returned angles, not the cached value
    // used during the sweep.
    let final_stress = stress(&winner.theta, d)?;
    Ok(AngularEmbedding {
        theta: winner.theta,
        final_stress,
    })
}

/// Dataset indices sorted by angle ascending; ties broken by lower index.
pub fn circular_order(embedding: &AngularEmbedding) -> Vec<usize> {
    let mut order: Vec<usize> = (0..embedding.theta.len()).collect();
    order.sort_by(|&a, &b| {
        embedding.theta[a]
            .total_cmp(&embedding.theta[b])
            .then(a.cmp(&b))
    });
    order
}

/// 1-D classical MDS of a distance matrix.
///
/// Double-centers the squared distances, extracts the top eigenpair by
/// power iteration (deterministic ramp start, Rayleigh-quotient
/// convergence), and sorts datasets by the resulting coordinate
/// `sqrt(lambda_1) * v_1`.
pub fn isomap_ordering(d: &DistanceMatrix) -> Result<LinearOrdering> {
    let n = d.len();
    if n < 2 {
        return Err(PaletteError::TooFewPoints { n, min: 2 });
    }

    // B = -1/2 * J * (D o D) * J with J = I - (1/n) * ones.
    let mut b = vec![0.0; n * n];
    let mut row_mean = vec![0.0; n];
    let mut grand_mean = 0.0;
    for i in 0..n {
        for j in 0..n {
            let sq = d.get(i, j) * d.get(i, j);
            b[i * n + j] = sq;
            row_mean[i] += sq;
        }
        row_mean[i] /= n as f64;
        grand_mean += row_mean[i];
    }
    grand_mean /= n as f64;
    for i in 0..n {
        for j in 0..n {
            // Column means equal row means by symmetry.
            b[i * n + j] = -0.5 * (b[i * n + j] - row_mean[i] - row_mean[j] + grand_mean);
        }
    }

    // Shift by a Gershgorin bound so power iteration homes in on the
    // algebraically largest eigenvalue even when negative eigenvalues of a
    // non-Euclidean input dominate in magnitude.
    let shift = (0..n)
        .map(|i| (0..n).map(|j| b[i * n + j].abs()).sum::<f64>())
        .fold(0.0, f64::max);
    for i in 0..n {
        b[i * n + i] += shift;
    }

    let mut v: Vec<f64> = (1..=n).map(|i| i as f64).collect();
    normalize(&mut v);
    let mut rayleigh = f64::INFINITY;
    let mut w = vec![0.0; n];
    for _ in 0..10_000 {
        for (i, wi) in w.iter_mut().enumerate() {
            *wi = (0..n).map(|j| b[i * n + j] * v[j]).sum();
        }
        let rq: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            rayleigh = 0.0;
            break;
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / norm;
        }
        let converged = (rq - rayleigh).abs() < 1e-10;
        rayleigh = rq;
        if converged {
            break;
        }
    }

    let lambda = rayleigh - shift;
    if !(lambda > 1e-12) {
        return Err(PaletteError::DegenerateSpectrum(lambda));
    }
    let scale = lambda.sqrt();
    let coordinate: Vec<f64> = v.iter().map(|x| x * scale).collect();
    let mut permutation: Vec<usize> = (0..n).collect();
    permutation.sort_by(|&a, &b| coordinate[a].total_cmp(&coordinate[b]).then(a.cmp(&b)));
    Ok(LinearOrdering {
        permutation,
        coordinate,
    })
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn dist(n: usize, pairs: &[(usize, usize, f64)]) -> DistanceMatrix {
        let mut d = DistanceMatrix::zeros(n);
        for &(i, j, v) in pairs {
            d.set_pair(i, j, v);
        }
        d
    }

    /// Distance matrix whose exact minimizer is `n` equally spaced angles.
    fn circle_distances(n: usize) -> DistanceMatrix {
        let mut d = DistanceMatrix::zeros(n);
        for i in 0..n {
            for j in (i + 1)..n {
                let gap = TAU * (i as f64 - j as f64) / n as f64;
                d.set_pair(i, j, 1.0 - gap.cos());
            }
        }
        d
    }

    #[test]
    fn angular_distance_values() {
        assert_eq!(angular_distance(0.0, 0.0), 0.0);
        assert_eq!(angular_distance(0.0, PI), 2.0);
        assert!((angular_distance(PI / 2.0, 0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn stress_zero_cases() {
        assert_eq!(stress(&[0.0, 0.0], &DistanceMatrix::zeros(2)).unwrap(), 0.0);
        let d = dist(2, &[(0, 1, 2.0)]);
        assert!(stress(&[0.0, PI], &d).unwrap().abs() < 1e-15);
    }

    #[test]
    fn stress_hand_value() {
        // Both ordered pairs contribute (1 - 0)^2: L = 1/2 * 2 = 1.
        let d = dist(2, &[(0, 1, 1.0)]);
        assert_eq!(stress(&[0.0, 0.0], &d).unwrap(), 1.0);
    }

    #[test]
    fn stress_dimension_mismatch() {
        let d = DistanceMatrix::zeros(3);
        assert!(matches!(
            stress(&[0.0, 0.0], &d).unwrap_err(),
            PaletteError::DimensionMismatch {
                got: 2,
                expected: 3
            }
        ));
        assert!(matches!(
            stress_gradient(&[0.0; 4], &d).unwrap_err(),
            PaletteError::DimensionMismatch { .. }
        ));
    }

    #[test]
    fn gradient_zero_at_coincident_minimum() {
        let g = stress_gradient(&[1.3, 1.3, 1.3], &DistanceMatrix::zeros(3)).unwrap();
        assert_eq!(g, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn gradient_hand_value_two_points() {
        // theta = [0, pi/2], D_12 = 2: d = 1, residual = 1,
        // sin(theta_1 - theta_2) = -1, so the descent direction is
        // [-2, 2] and dL/dtheta = [2, -2].
        let d = dist(2, &[(0, 1, 2.0)]);
        let g = stress_gradient(&[0.0, PI / 2.0], &d).unwrap();
        assert!((g[0] - (-2.0)).abs() < 1e-12);
        assert!((g[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 10;
        let mut d = DistanceMatrix::zeros(n);
        for i in 0..n {
            for j in (i + 1)..n {
                d.set_pair(i, j, rng.random::<f64>() * 2.0);
            }
        }
        let theta: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * TAU).collect();
        let grad = stress_gradient(&theta, &d).unwrap();
        let h = 1e-6;
        for i in 0..n {
            let mut plus = theta.clone();
            let mut minus = theta.clone();
            plus[i] += h;
            minus[i] -= h;
            let fd = -(stress(&plus, &d).unwrap() - stress(&minus, &d).unwrap()) / (2.0 * h);
            let rel = (grad[i] - fd).abs() / fd.abs().max(1e-12);
            assert!(rel < 1e-6, "component {i}: analytic {} vs fd {fd}", grad[i]);
        }
    }

    #[test]
    fn optimize_two_points_antipodal() {
        let d = dist(2, &[(0, 1, 2.0)]);
        let e = optimize_angles(&d, &SgdParams::default()).unwrap();
        let gap = (e.theta()[0] - e.theta()[1]).abs();
        let wrapped = gap.min(TAU - gap);
        assert!((wrapped - PI).abs() < 1e-3, "gap {wrapped}");
    }

    #[test]
    fn optimize_zero_distances_collapse() {
        let e = optimize_angles(&DistanceMatrix::zeros(6), &SgdParams::default()).unwrap();
        assert!(e.final_stress() < 1e-4, "stress {}", e.final_stress());
    }

    #[test]
    fn optimize_recovers_circle_order() {
        let n = 8;
        let e = optimize_angles(&circle_distances(n), &SgdParams::default()).unwrap();
        assert!(e.final_stress() < 1e-3, "stress {}", e.final_stress());
        let order = circular_order(&e);
        assert!(
            cyclic_matches_identity(&order),
            "order {order:?} is not a rotation/reflection of 0..{n}"
        );
    }

    /// True when `order` equals 0..n as a cycle, up to rotation and
    /// direction.
    fn cyclic_matches_identity(order: &[usize]) -> bool {
        let n = order.len();
        let start = order.iter().position(|&v| v == 0).unwrap();
        let forward: Vec<usize> = (0..n).map(|s| order[(start + s) % n]).collect();
        let backward: Vec<usize> = (0..n).map(|s| order[(start + n - s) % n]).collect();
        let identity: Vec<usize> = (0..n).collect();
        forward == identity || backward == identity
    }

    #[test]
    fn optimize_angles_in_range_and_stress_consistent() {
        let d = circle_distances(5);
        let e = optimize_angles(&d, &SgdParams::default()).unwrap();
        for &t in e.theta() {
            assert!((0.0..TAU).contains(&t));
        }
        let direct = stress(e.theta(), &d).unwrap();
        assert!((direct - e.final_stress()).abs() < 1e-9);
    }

    #[test]
    fn optimize_rejects_bad_params() {
        let d = circle_distances(4);
        for params in [
            SgdParams {
                eta: 0.0,
                ..Default::default()
            },
            SgdParams {
                epochs: 0,
                ..Default::default()
            },
            SgdParams {
                restarts: 0,
                ..Default::default()
            },
        ] {
            assert!(matches!(
                optimize_angles(&d, &params).unwrap_err(),
                PaletteError::InvalidParams(_)
            ));
        }
        assert!(matches!(
            optimize_angles(&DistanceMatrix::zeros(1), &SgdParams::default()).unwrap_err(),
            PaletteError::TooFewPoints { n: 1, min: 2 }
        ));
    }

    #[test]
    fn circular_order_sorts_by_angle() {
        let e = AngularEmbedding {
            theta: vec![0.1, 3.0, 1.5],
            final_stress: 0.0,
        };
        assert_eq!(circular_order(&e), vec![0, 2, 1]);
        let e = AngularEmbedding {
            theta: vec![6.18, 0.2],
            final_stress: 0.0,
        };
        assert_eq!(circular_order(&e), vec![1, 0]);
    }

    #[test]
    fn circular_order_shift_preserves_cycle() {
        let theta = vec![0.3, 2.6, 4.4, 1.1];
        let base = circular_order(&AngularEmbedding {
            theta: theta.clone(),
            final_stress: 0.0,
        });
        for shift in [0.9, 2.0, 5.5] {
            let shifted: Vec<f64> = theta.iter().map(|t| wrap_angle(t + shift)).collect();
            let order = circular_order(&AngularEmbedding {
                theta: shifted,
                final_stress: 0.0,
            });
            let start = order.iter().position(|&v| v == base[0]).unwrap();
            let rotated: Vec<usize> = (0..4).map(|s| order[(start + s) % 4]).collect();
            assert_eq!(rotated, base, "shift {shift}");
        }
    }

    #[test]
    fn isomap_orders_line() {
        let d = dist(3, &[(0, 1, 1.0), (0, 2, 5.0), (1, 2, 4.0)]);
        let o = isomap_ordering(&d).unwrap();
        assert!(
            o.permutation == vec![0, 1, 2] || o.permutation == vec![2, 1, 0],
            "permutation {:?}",
            o.permutation
        );
        let along: Vec<f64> = o.permutation.iter().map(|&i| o.coordinate[i]).collect();
        assert!(along.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn isomap_two_points_exact() {
        let d = dist(2, &[(0, 1, 1.0)]);
        let o = isomap_ordering(&d).unwrap();
        assert!((o.coordinate[0] + o.coordinate[1]).abs() < 1e-9, "not symmetric about 0");
        assert!(((o.coordinate[0] - o.coordinate[1]).abs() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn isomap_degenerate_spectrum() {
        assert!(matches!(
            isomap_ordering(&DistanceMatrix::zeros(4)).unwrap_err(),
            PaletteError::DegenerateSpectrum(_)
        ));
    }

    #[test]
    fn wrap_angle_range() {
        for x in [-1e-17, -0.5, 0.0, TAU, TAU + 0.1, -TAU, 123.456, -1e-300] {
            let a = wrap_angle(x);
            assert!((0.0..TAU).contains(&a), "wrap_angle({x}) = {a}");
        }
    }
}
