//! Fixed-step integration to the stationary state and convergence times.
//!
//! Both the quantum master equation and the classical rate equation
//! `dp/dt = (G - I) p` go through the same classic fourth-order stepper and
//! the same convergence bookkeeping, so their times are directly comparable.
//!
//! Convergence is tracked on populations only, with the Euclidean norm of
//! the diagonal. Every `check_stride` steps a checkpoint is stored. Once the
//! change across one window drops below `epsilon * window * settle_factor`
//! the state is a candidate for the stationary one; one more window confirms
//! it. The convergence time is then read off the stored checkpoints as the
//! last entry into the `epsilon` ball around the final state, interpolated
//! log-linearly between the two bracketing checkpoints.

use std::ops::{Add, Mul};

use nalgebra::{DMatrix, DMatrixView};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lindblad::{DenseLiouvillian, DensityMatrix, LindbladGenerator, Workspace};
use crate::netgraph::StochasticMatrix;
use crate::C64;

/// Trace drift that aborts an integration.
pub const MAX_TRACE_DRIFT: f64 = 1e-6;

/// Eigenvalues this close to zero count as stationary modes.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-9;

// Bound on stored checkpoint floats; the stride doubles past it.
const CHECKPOINT_BUDGET: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IntegrationConfig {
    pub dt: f64,
    pub epsilon: f64,
    pub max_time: f64,
    pub check_stride: usize,
    /// Scales the stationarity threshold `epsilon * window`; smaller values
    /// pin the final state more tightly before times are measured.
    pub settle_factor: f64,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self {
            dt: 0.01,
            epsilon: 1e-8,
            max_time: 1e6,
            check_stride: 10,
            settle_factor: 1e-2,
        }
    }
}

impl IntegrationConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.dt > 0.0) {
            return bad(format!("dt = {} must be positive", self.dt));
        }
        if !(self.epsilon > 0.0) {
            return bad(format!("epsilon = {} must be positive", self.epsilon));
        }
        if !(self.max_time > self.dt) {
            return bad(format!("max_time = {} must exceed dt", self.max_time));
        }
        if self.check_stride == 0 {
            return bad("check_stride must be at least 1".into());
        }
        if !(self.settle_factor > 0.0 && self.settle_factor <= 1.0) {
            return bad(format!("settle_factor = {} outside (0, 1]", self.settle_factor));
        }
        Ok(())
    }

    fn window(&self) -> f64 {
        self.dt * self.check_stride as f64
    }
}

#[derive(Debug, Clone)]
pub struct StationaryResult {
    pub rho_star: DensityMatrix,
    /// Convergence time; meaningful only when `converged`.
    pub tau: f64,
    pub steps: u64,
    pub converged: bool,
    pub final_time: f64,
    pub max_trace_drift: f64,
    pub max_hermiticity_defect: f64,
    /// Distances to the final state at the last checkpoints, oldest first.
    pub tail_distances: Vec<f64>,
}

impl StationaryResult {
    pub fn populations(&self) -> Vec<f64> {
        self.rho_star.diagonal()
    }
}

#[derive(Debug, Clone)]
pub struct ClassicalResult {
    pub p_star: Vec<f64>,
    pub tau: f64,
    pub steps: u64,
    pub converged: bool,
    pub final_time: f64,
}

trait Dynamics {
    type Elem: Copy + Default + Add<Output = Self::Elem> + Mul<f64, Output = Self::Elem>;

    fn rhs(&mut self, y: &[Self::Elem], dy: &mut [Self::Elem]);

    fn populations(&self, y: &[Self::Elem], out: &mut [f64]);
}

struct Quantum<'a> {
    gen: &'a LindbladGenerator,
    ws: Workspace,
}

impl Dynamics for Quantum<'_> {
    type Elem = C64;

    fn rhs(&mut self, y: &[C64], dy: &mut [C64]) {
        self.gen.apply_hermitian(y, dy, &mut self.ws);
    }

    fn populations(&self, y: &[C64], out: &mut [f64]) {
        let n = out.len();
        for (i, p) in out.iter_mut().enumerate() {
            *p = y[i + i * n].re;
        }
    }
}

struct Classical<'a> {
    g: &'a StochasticMatrix,
    gain: Vec<f64>,
}

impl Dynamics for Classical<'_> {
    type Elem = f64;

    fn rhs(&mut self, y: &[f64], dy: &mut [f64]) {
        self.g.apply_into(y, &mut self.gain);
        // same operation order as the quantum diagonal at alpha = 1
        for ((d, &gi), &yi) in dy.iter_mut().zip(&self.gain).zip(y) {
            *d = (0.0 - yi) + gi;
        }
    }

    fn populations(&self, y: &[f64], out: &mut [f64]) {
        out.copy_from_slice(y);
    }
}

struct Rk4<E> {
    k1: Vec<E>,
    k2: Vec<E>,
    k3: Vec<E>,
    k4: Vec<E>,
    tmp: Vec<E>,
}

impl<E: Copy + Default + Add<Output = E> + Mul<f64, Output = E>> Rk4<E> {
    fn new(len: usize) -> Self {
        let z = vec![E::default(); len];
        Self {
            k1: z.clone(),
            k2: z.clone(),
            k3: z.clone(),
            k4: z.clone(),
            tmp: z,
        }
    }

    fn step<D: Dynamics<Elem = E>>(&mut self, sys: &mut D, y: &mut [E], dt: f64) {
        let half = 0.5 * dt;
        sys.rhs(y, &mut self.k1);
        axpy_into(&mut self.tmp, y, &self.k1, half);
        sys.rhs(&self.tmp, &mut self.k2);
        axpy_into(&mut self.tmp, y, &self.k2, half);
        sys.rhs(&self.tmp, &mut self.k3);
        axpy_into(&mut self.tmp, y, &self.k3, dt);
        sys.rhs(&self.tmp, &mut self.k4);
        let sixth = dt / 6.0;
        for i in 0..y.len() {
            let incr = self.k1[i] + self.k2[i] * 2.0 + self.k3[i] * 2.0 + self.k4[i];
            y[i] = y[i] + incr * sixth;
        }
    }
}

fn axpy_into<E: Copy + Add<Output = E> + Mul<f64, Output = E>>(out: &mut [E], y: &[E], k: &[E], h: f64) {
    for ((o, &yi), &ki) in out.iter_mut().zip(y).zip(k) {
        *o = yi + ki * h;
    }
}

fn l2_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Population snapshots, thinned by half whenever the budget is exceeded.
struct Checkpoints {
    n: usize,
    times: Vec<f64>,
    pops: Vec<f64>,
    every: usize,
    skipped: usize,
    cap: usize,
}

impl Checkpoints {
    fn new(n: usize) -> Self {
        Self {
            n,
            times: Vec::new(),
            pops: Vec::new(),
            every: 1,
            skipped: 0,
            cap: (CHECKPOINT_BUDGET / n.max(1)).max(256),
        }
    }

    fn offer(&mut self, t: f64, p: &[f64], force: bool) {
        self.skipped += 1;
        if !force && self.skipped < self.every {
            return;
        }
        self.skipped = 0;
        self.times.push(t);
        self.pops.extend_from_slice(p);
        if self.times.len() >= self.cap {
            let n = self.n;
            let keep: Vec<usize> = (0..self.times.len()).step_by(2).collect();
            let mut pops = Vec::with_capacity(keep.len() * n);
            for &k in &keep {
                pops.extend_from_slice(&self.pops[k * n..(k + 1) * n]);
            }
            self.times = keep.iter().map(|&k| self.times[k]).collect();
            self.pops = pops;
            self.every *= 2;
        }
    }

    fn distances_to(&self, target: &[f64]) -> Vec<f64> {
        self.pops.chunks(self.n).map(|p| l2_distance(p, target)).collect()
    }
}

/// Last entry time into the `eps` ball, interpolated in log-distance.
fn entry_time(times: &[f64], dist: &[f64], eps: f64) -> f64 {
    let Some(k) = dist.iter().rposition(|&d| d >= eps) else {
        return times.first().copied().unwrap_or(0.0);
    };
    if k + 1 >= dist.len() {
        return times[k];
    }
    let (t0, t1) = (times[k], times[k + 1]);
    let (d0, d1) = (dist[k], dist[k + 1]);
    if d1 <= 0.0 || d0 <= d1 {
        return t1;
    }
    let frac = ((d0 / eps).ln() / (d0 / d1).ln()).clamp(0.0, 1.0);
    t0 + frac * (t1 - t0)
}

struct Run<E> {
    y: Vec<E>,
    pops: Vec<f64>,
    tau: f64,
    steps: u64,
    converged: bool,
    final_time: f64,
    tail: Vec<f64>,
}

fn drive<D, F>(sys: &mut D, mut y: Vec<D::Elem>, n: usize, cfg: &IntegrationConfig, mut on_window: F) -> Result<Run<D::Elem>>
where
    D: Dynamics,
    F: FnMut(f64, &[D::Elem]) -> Result<()>,
{
    cfg.validate()?;
    let mut rk = Rk4::new(y.len());
    let mut pops = vec![0.0; n];
    sys.populations(&y, &mut pops);
    let mut prev = pops.clone();
    let mut checkpoints = Checkpoints::new(n);
    checkpoints.offer(0.0, &pops, true);

    let window = cfg.window();
    let settle = cfg.epsilon * window * cfg.settle_factor;
    let mut candidate: Option<Vec<f64>> = None;
    let mut steps: u64 = 0;
    let mut converged = false;
    let mut t;

    loop {
        for _ in 0..cfg.check_stride {
            rk.step(sys, &mut y, cfg.dt);
        }
        steps += cfg.check_stride as u64;
        t = steps as f64 * cfg.dt;
        sys.populations(&y, &mut pops);

        let drift = (pops.iter().sum::<f64>() - 1.0).abs();
        if !(drift <= MAX_TRACE_DRIFT) {
            return Err(Error::Unstable { time: t, drift });
        }
        on_window(t, &y)?;

        if let Some(c) = candidate.take() {
            if l2_distance(&pops, &c) < cfg.epsilon {
                checkpoints.offer(t, &pops, true);
                converged = true;
                break;
            }
        }
        let step_change = l2_distance(&pops, &prev);
        checkpoints.offer(t, &pops, step_change < settle);
        if step_change < settle {
            candidate = Some(pops.clone());
        }
        if t >= cfg.max_time {
            break;
        }
        prev.copy_from_slice(&pops);
    }

    let dist = checkpoints.distances_to(&pops);
    let tau = if converged {
        entry_time(&checkpoints.times, &dist, cfg.epsilon)
    } else {
        f64::NAN
    };
    let tail = dist[dist.len().saturating_sub(12)..].to_vec();
    Ok(Run {
        y,
        pops,
        tau,
        steps,
        converged,
        final_time: t,
        tail,
    })
}

/// Integrates from `I / n` until the populations settle.
pub fn integrate_to_stationary(gen: &LindbladGenerator, cfg: &IntegrationConfig) -> Result<StationaryResult> {
    integrate_from(gen, &DensityMatrix::maximally_mixed(gen.dim()), cfg, |_, _| {})
}

/// Integrates from an arbitrary initial state; `observer` sees the state at
/// every checkpoint.
pub fn integrate_from<F>(
    gen: &LindbladGenerator,
    rho0: &DensityMatrix,
    cfg: &IntegrationConfig,
    mut observer: F,
) -> Result<StationaryResult>
where
    F: FnMut(f64, DMatrixView<C64>),
{
    let n = gen.dim();
    if rho0.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: rho0.dim(),
        });
    }
    let mut sys = Quantum {
        gen,
        ws: Workspace::new(n),
    };
    let mut max_drift = 0.0f64;
    let mut max_herm = 0.0f64;
    let run = drive(&mut sys, rho0.as_matrix().as_slice().to_vec(), n, cfg, |t, y| {
        let view = DMatrixView::from_slice(y, n, n);
        max_drift = max_drift.max((view.trace().re - 1.0).abs());
        max_herm = max_herm.max(hermiticity_defect(y, n));
        observer(t, view);
        Ok(())
    })?;
    Ok(StationaryResult {
        rho_star: DensityMatrix::from_matrix_unchecked(DMatrix::from_vec(n, n, run.y)),
        tau: run.tau,
        steps: run.steps,
        converged: run.converged,
        final_time: run.final_time,
        max_trace_drift: max_drift,
        max_hermiticity_defect: max_herm,
        tail_distances: run.tail,
    })
}

fn hermiticity_defect(y: &[C64], n: usize) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((y[i + j * n] - y[j + i * n].conj()).norm());
        }
    }
    worst
}

/// Integrates `dp/dt = (G - I) p` from the uniform distribution with the
/// same stepper, window and threshold as the quantum runs.
pub fn classical_convergence_time(g: &StochasticMatrix, cfg: &IntegrationConfig) -> Result<ClassicalResult> {
    let n = g.dim();
    let mut sys = Classical { g, gain: vec![0.0; n] };
    let run = drive(&mut sys, vec![1.0 / n as f64; n], n, cfg, |_, _| Ok(()))?;
    Ok(ClassicalResult {
        p_star: run.pops,
        tau: run.tau,
        steps: run.steps,
        converged: run.converged,
        final_time: run.final_time,
    })
}

/// Default iteration cap for the power methods.
pub const DEFAULT_MAX_ITER: usize = 1_000_000;

/// Stationary vector of a column-stochastic matrix by power iteration from
/// the uniform vector, stopping when the L1 change drops below `epsilon`.
pub fn classical_stationary(g: &StochasticMatrix, epsilon: f64, max_iter: usize) -> Result<Vec<f64>> {
    power_iteration(g, epsilon, max_iter, 0.0)
}

/// Same fixed point as [`classical_stationary`] but iterates the lazy chain
/// `(I + Pi) / 2`, which also converges on periodic walks.
pub fn random_walk_stationary(pi: &StochasticMatrix, epsilon: f64, max_iter: usize) -> Result<Vec<f64>> {
    power_iteration(pi, epsilon, max_iter, 0.5)
}

fn power_iteration(g: &StochasticMatrix, epsilon: f64, max_iter: usize, laziness: f64) -> Result<Vec<f64>> {
    let n = g.dim();
    let mut p = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    for _ in 0..max_iter {
        g.apply_into(&p, &mut next);
        if laziness > 0.0 {
            for (x, &old) in next.iter_mut().zip(&p) {
                *x = laziness * old + (1.0 - laziness) * *x;
            }
        }
        let s: f64 = next.iter().sum();
        next.iter_mut().for_each(|x| *x /= s);
        let change: f64 = next.iter().zip(&p).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut p, &mut next);
        if change < epsilon {
            return Ok(p);
        }
    }
    Err(Error::NoConvergence(max_iter))
}

/// `1 / |Re lambda_1|` where `lambda_1` is the non-zero eigenvalue with the
/// largest real part. Fails unless exactly one eigenvalue sits at zero.
pub fn spectral_tau(dl: &DenseLiouvillian) -> Result<f64> {
    let lambda = slowest_mode(dl)?;
    Ok(1.0 / lambda.re.abs())
}

/// The eigenvalue `lambda_1` behind [`spectral_tau`].
pub fn slowest_mode(dl: &DenseLiouvillian) -> Result<C64> {
    let ev = dl.eigenvalues()?;
    let zeros = ev.iter().filter(|z| z.norm() < ZERO_EIGENVALUE_TOL).count();
    if zeros != 1 {
        return Err(Error::Degenerate(zeros));
    }
    ev.into_iter()
        .filter(|z| z.norm() >= ZERO_EIGENVALUE_TOL)
        .max_by(|a, b| a.re.total_cmp(&b.re))
        .ok_or_else(|| Error::InvalidState("no decaying modes".into()))
}
