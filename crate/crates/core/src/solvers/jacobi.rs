use super::SolveTrace;
use crate::error::{Error, Result};
use crate::flops::FlopCounter;
use crate::model::{BasisSet, LinWeights};

/// Consecutive residual increases after which a Jacobi run is declared
/// divergent and stopped.
const DIVERGENCE_RUN: usize = 3;

/// Jacobi iteration `w <- w + A^T (x_h - A w)` starting from `w = A^T x_h`.
///
/// With unit-norm columns the diagonal preconditioner is the identity.
/// Convergence depends on the frequencies; a run whose residual grows three
/// iterations in a row is stopped and flagged `diverged`.
pub fn solve_jacobi(basis: &BasisSet, x: &[f64], iters: usize) -> Result<SolveTrace> {
    let len = basis.frame_len();
    if x.len() != len {
        return Err(Error::LengthMismatch {
            expected: len,
            actual: x.len(),
        });
    }
    let cols = basis.num_columns();
    let mut flops = FlopCounter::new();

    let mut w = basis.project(x);
    flops.add(cols * 2 * len);
    let mut trace = SolveTrace {
        residual_energy: vec![residual_energy(basis, x, &w)],
        ..SolveTrace::default()
    };

    let mut rising = 0;
    for _ in 0..iters {
        let mut r = x.to_vec();
        for (j, &wj) in w.iter().enumerate() {
            for (ri, a) in r.iter_mut().zip(basis.column(j)) {
                *ri -= wj * a;
            }
        }
        flops.add(cols * 2 * len);
        let step = basis.project(&r);
        flops.add(cols * 2 * len);
        for (wj, g) in w.iter_mut().zip(&step) {
            *wj += g;
        }
        flops.add(cols);

        trace.iterations += 1;
        let e = residual_energy(basis, x, &w);
        let prev = *trace.residual_energy.last().unwrap();
        trace.residual_energy.push(e);
        rising = if e > prev || !e.is_finite() {
            rising + 1
        } else {
            0
        };
        if rising >= DIVERGENCE_RUN {
            trace.diverged = true;
            break;
        }
    }

    trace.weights = LinWeights::from_flat(&w);
    trace.flops = flops.total();
    Ok(trace)
}

fn residual_energy(basis: &BasisSet, x: &[f64], w: &[f64]) -> f64 {
    let fit = basis.reconstruct(&LinWeights::from_flat(w));
    fit.iter().zip(x).map(|(a, b)| (b - a) * (b - a)).sum()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::model::{build_basis, make_frame_config, synthesize, SinusoidParams};
    use crate::solvers::{solve_direct, solve_gauss_seidel};

    #[test]
    fn zero_iterations_is_the_projection() {
        let cfg = make_frame_config(64).unwrap();
        let b = build_basis(&[0.4, 1.0], &cfg).unwrap();
        let x: Vec<f64> = (0..64).map(|n| ((n * 7) % 13) as f64 - 6.0).collect();
        let t = solve_jacobi(&b, &x, 0).unwrap();
        assert_eq!(t.iterations, 0);
        assert_eq!(t.residual_energy.len(), 1);
        assert_eq!(t.weights.to_flat(), b.project(&x));
    }

    fn iteration_radius(b: &crate::model::BasisSet) -> f64 {
        let cols = b.num_columns();
        let g = nalgebra::DMatrix::from_fn(cols, cols, |i, j| {
            let dot: f64 = b
                .column(i)
                .iter()
                .zip(b.column(j))
                .map(|(x, y)| x * y)
                .sum();
            if i == j {
                1.0 - dot
            } else {
                -dot
            }
        });
        g.symmetric_eigenvalues()
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
    }

    #[test]
    fn close_pair_converges_to_direct() {
        let cfg = make_frame_config(256).unwrap();
        let parts = [
            SinusoidParams::new(1.0, 0.1 * PI, 0.3, 0.0),
            SinusoidParams::new(0.8, 0.104 * PI, 1.2, 0.0),
        ];
        let x = synthesize(&parts, &cfg, true);
        let b = build_basis(&[0.1 * PI, 0.104 * PI], &cfg).unwrap();
        let rho = iteration_radius(&b);
        let direct = solve_direct(&b, &x).unwrap().to_flat();
        let t = solve_jacobi(&b, &x, 10).unwrap();
        let err = max_abs_diff(&t.weights.to_flat(), &direct);
        if rho < 1.0 {
            // Error contracts by rho per iteration from the initial
            // projection, so 10 iterations bound it by rho^11 * |w|.
            let scale = direct.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(
                err <= rho.powi(11) * 4.0 * scale + 1e-6,
                "rho {rho} err {err}"
            );
        } else {
            assert!(t.diverged || err > 1e-6);
        }
    }

    #[test]
    fn single_partial_agrees_with_gauss_seidel_and_direct() {
        let cfg = make_frame_config(128).unwrap();
        let p = SinusoidParams::new(1.0, 0.7, 0.5, 0.001);
        let x = synthesize(&[p], &cfg, true);
        let b = build_basis(&[0.703], &cfg).unwrap();
        assert!(iteration_radius(&b) < 1.0);
        let d = solve_direct(&b, &x).unwrap().to_flat();
        let j = solve_jacobi(&b, &x, 200).unwrap().weights.to_flat();
        let g = solve_gauss_seidel(&b, &x, 100).unwrap().weights.to_flat();
        assert!(max_abs_diff(&j, &d) <= 1e-10);
        assert!(max_abs_diff(&g, &d) <= 1e-10);
    }

    #[test]
    fn divergence_is_flagged_not_raised() {
        // Heavily overlapping columns make I - A^T A expansive.
        let cfg = make_frame_config(64).unwrap();
        let b = build_basis(&[0.5, 0.5005, 0.501, 0.5015], &cfg).unwrap();
        let x: Vec<f64> = (0..64).map(|n| (0.5 * n as f64).cos()).collect();
        let t = solve_jacobi(&b, &x, 50).unwrap();
        assert!(t.diverged);
        assert!(t.iterations < 50);
    }
}
