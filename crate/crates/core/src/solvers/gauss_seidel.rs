use super::SolveTrace;
use crate::error::{Error, Result};
use crate::flops::FlopCounter;
use crate::model::{BasisSet, LinWeights, Parity};

/// Order in which a sweep visits the `4N` columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepOrder {
    /// All cos columns, then sin, then t*cos, then t*sin; ascending partial
    /// index within each group. The unmodulated, high-energy columns go
    /// first.
    #[default]
    Grouped,
    /// cos, sin, t*cos, t*sin of partial 0, then of partial 1, and so on.
    Interleaved,
}

impl SweepOrder {
    pub fn indices(self, partials: usize) -> Vec<usize> {
        match self {
            SweepOrder::Grouped => (0..4 * partials).collect(),
            SweepOrder::Interleaved => (0..partials)
                .flat_map(|k| (0..4).map(move |kind| kind * partials + k))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct GsOptions {
    pub order: SweepOrder,
    /// Stop after a sweep that lowers the residual energy by less than this
    /// fraction of its previous value.
    pub min_rel_reduction: Option<f64>,
    /// Stop after a sweep in which every update is smaller than this.
    pub min_update: Option<f64>,
    /// Record the residual energy after every column update.
    pub record_steps: bool,
}

/// Gauss-Seidel on the normal equations, run as successive exact 1-D
/// projections of the residual onto each normalised column.
pub fn solve_gauss_seidel(basis: &BasisSet, x: &[f64], iters: usize) -> Result<SolveTrace> {
    solve_gauss_seidel_with(basis, x, iters, &GsOptions::default())
}

pub fn solve_gauss_seidel_with(
    basis: &BasisSet,
    x: &[f64],
    iters: usize,
    opts: &GsOptions,
) -> Result<SolveTrace> {
    check_input(basis, x, iters)?;
    let len = basis.frame_len();
    let order = opts.order.indices(basis.num_partials());
    let mut flops = FlopCounter::new();
    let mut e = x.to_vec();
    let mut w = vec![0.0; basis.num_columns()];
    let mut trace = SolveTrace {
        residual_energy: vec![energy(&e)],
        ..SolveTrace::default()
    };

    for _ in 0..iters {
        let mut max_update: f64 = 0.0;
        for &j in &order {
            let a = basis.column(j);
            let dw = dot(a, &e);
            flops.dot(len);
            axpy(&mut e, a, dw);
            flops.axpy(len);
            w[j] += dw;
            flops.add(1);
            max_update = max_update.max(dw.abs());
            if opts.record_steps {
                trace.step_energy.push(energy(&e));
            }
        }
        trace.iterations += 1;
        trace.residual_energy.push(energy(&e));
        if should_stop(&trace.residual_energy, max_update, opts) {
            break;
        }
    }

    trace.weights = LinWeights::from_flat(&w);
    trace.flops = flops.total();
    Ok(trace)
}

/// Gauss-Seidel on the even/odd split residual.
///
/// Even columns only see `e(t) + e(-t)` and odd columns only `e(t) - e(-t)`,
/// each held over half the frame, so every projection touches `L/2`
/// samples. The iterates equal those of [`solve_gauss_seidel`] up to
/// rounding.
pub fn solve_gauss_seidel_evenodd(basis: &BasisSet, x: &[f64], iters: usize) -> Result<SolveTrace> {
    solve_gauss_seidel_evenodd_with(basis, x, iters, &GsOptions::default())
}

pub fn solve_gauss_seidel_evenodd_with(
    basis: &BasisSet,
    x: &[f64],
    iters: usize,
    opts: &GsOptions,
) -> Result<SolveTrace> {
    check_input(basis, x, iters)?;
    let order = opts.order.indices(basis.num_partials());
    let mut flops = FlopCounter::new();
    let mut residual = SplitResidual::from_frame(x, &mut flops);
    let mut w = vec![0.0; basis.num_columns()];
    let mut trace = SolveTrace {
        residual_energy: vec![residual.energy()],
        ..SolveTrace::default()
    };

    for _ in 0..iters {
        let steps = opts.record_steps.then_some(&mut trace.step_energy);
        let max_update = sweep_split(basis, &mut residual, &mut w, &order, &mut flops, steps);
        trace.iterations += 1;
        trace.residual_energy.push(residual.energy());
        if should_stop(&trace.residual_energy, max_update, opts) {
            break;
        }
    }

    trace.weights = LinWeights::from_flat(&w);
    trace.flops = flops.total();
    Ok(trace)
}

fn check_input(basis: &BasisSet, x: &[f64], iters: usize) -> Result<()> {
    if x.len() != basis.frame_len() {
        return Err(Error::LengthMismatch {
            expected: basis.frame_len(),
            actual: x.len(),
        });
    }
    if iters == 0 {
        return Err(Error::InvalidParameter(
            "Gauss-Seidel needs at least one iteration".into(),
        ));
    }
    Ok(())
}

fn should_stop(energies: &[f64], max_update: f64, opts: &GsOptions) -> bool {
    if let Some(tol) = opts.min_update {
        if max_update < tol {
            return true;
        }
    }
    if let Some(tol) = opts.min_rel_reduction {
        let prev = energies[energies.len() - 2];
        let cur = energies[energies.len() - 1];
        if prev - cur <= tol * prev {
            return true;
        }
    }
    false
}

/// Residual folded about the frame centre: `even[m] = e(t_m) + e(-t_m)` and
/// `odd[m] = e(t_m) - e(-t_m)` for the upper-half times `t_m`.
///
/// The sums are kept unhalved so that `a . e` for a column of matching
/// parity is just the half-length dot product with the column's upper half.
#[derive(Debug, Clone)]
pub(crate) struct SplitResidual {
    even: Vec<f64>,
    odd: Vec<f64>,
}

impl SplitResidual {
    pub(crate) fn from_frame(x: &[f64], flops: &mut FlopCounter) -> Self {
        let half = x.len() / 2;
        let mut even = vec![0.0; half];
        let mut odd = vec![0.0; half];
        for m in 0..half {
            let up = x[half + m];
            let down = x[half - 1 - m];
            even[m] = up + down;
            odd[m] = up - down;
        }
        flops.add(2 * half);
        Self { even, odd }
    }

    /// `||e||^2` of the full-length residual.
    pub(crate) fn energy(&self) -> f64 {
        0.5 * (energy(&self.even) + energy(&self.odd))
    }

    pub(crate) fn part_mut(&mut self, parity: Parity) -> &mut [f64] {
        match parity {
            Parity::Even => &mut self.even,
            Parity::Odd => &mut self.odd,
        }
    }

    /// `e -= w * a_j`.
    pub(crate) fn subtract(&mut self, basis: &BasisSet, j: usize, w: f64, flops: &mut FlopCounter) {
        let a = basis.half_column(j);
        axpy(self.part_mut(basis.parity(j)), a, 2.0 * w);
        flops.add(1);
        flops.axpy(a.len());
    }

    #[cfg(test)]
    pub(crate) fn to_full(&self) -> Vec<f64> {
        let half = self.even.len();
        let mut e = vec![0.0; 2 * half];
        for m in 0..half {
            e[half + m] = 0.5 * (self.even[m] + self.odd[m]);
            e[half - 1 - m] = 0.5 * (self.even[m] - self.odd[m]);
        }
        e
    }
}

/// One Gauss-Seidel sweep over `order` on a split residual. Returns the
/// largest update magnitude.
pub(crate) fn sweep_split(
    basis: &BasisSet,
    residual: &mut SplitResidual,
    w: &mut [f64],
    order: &[usize],
    flops: &mut FlopCounter,
    mut steps: Option<&mut Vec<f64>>,
) -> f64 {
    let mut max_update: f64 = 0.0;
    for &j in order {
        let a = basis.half_column(j);
        let part = residual.part_mut(basis.parity(j));
        let dw = dot(a, part);
        flops.dot(a.len());
        axpy(part, a, 2.0 * dw);
        flops.add(1);
        flops.axpy(a.len());
        w[j] += dw;
        flops.add(1);
        max_update = max_update.max(dw.abs());
        if let Some(steps) = steps.as_deref_mut() {
            steps.push(residual.energy());
        }
    }
    max_update
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `y -= scale * a`
#[inline]
fn axpy(y: &mut [f64], a: &[f64], scale: f64) {
    for (yi, ai) in y.iter_mut().zip(a) {
        *yi -= scale * ai;
    }
}

#[inline]
fn energy(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}
