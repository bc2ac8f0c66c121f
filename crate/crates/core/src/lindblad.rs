//! Density matrices and the hybrid coherent/dissipative generator
//!
//! ```text
//! d rho/dt = -i (1 - alpha) [H, rho]
//!            + alpha * sum_(i,j) G_ij ( L rho L^+ - 1/2 {L^+ L, rho} ),   L = |i><j|
//! ```
//!
//! Because `L^+ L = |j><j|` and every column of `G` sums to one, the
//! dissipator collapses to `alpha * (diag(G p) - rho)` with `p = diag(rho)`.
//! That closed form is what [`LindbladGenerator`] evaluates; the literal sum
//! only exists in tests as an oracle.

use std::io::Write;

use nalgebra::{DMatrix, Schur};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::netgraph::{google_matrix, transition_matrix, DirectedGraph, StochasticMatrix};
use crate::output::fmt_sig;
use crate::C64;

/// Largest base dimension accepted by [`dense_liouvillian`] by default.
pub const DEFAULT_DENSE_CAP: usize = 64;

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;

/// Walker state: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: DMatrix<C64>,
}

impl DensityMatrix {
    /// `I / n`, the initial condition of every convergence-time run.
    pub fn maximally_mixed(n: usize) -> Self {
        let w = C64::new(1.0 / n as f64, 0.0);
        Self {
            m: DMatrix::from_diagonal_element(n, n, w),
        }
    }

    /// Validates Hermiticity and unit trace (both within `1e-10`).
    /// Positivity is not checked here; see [`DensityMatrix::min_eigenvalue`].
    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                got: m.ncols(),
            });
        }
        let rho = Self { m };
        let defect = rho.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (defect {defect:e})")));
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(m: DMatrix<C64>) -> Self {
        Self { m }
    }

    /// Random full-rank state `A A^+ / tr(A A^+)` with Gaussian `A`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let a = DMatrix::from_fn(n, n, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
        let mut m = &a * a.adjoint();
        let tr = m.trace().re;
        m /= C64::new(tr, 0.0);
        // exact Hermitian symmetry
        for j in 0..n {
            m[(j, j)].im = 0.0;
            for i in 0..j {
                m[(j, i)] = m[(i, j)].conj();
            }
        }
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.m
    }

    /// Occupation probabilities `rho_ii`.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.m[(i, i)].re).collect()
    }

    /// Real part of the trace.
    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    /// `max |rho_ij - conj(rho_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in 0..=j {
                worst = worst.max((self.m[(i, j)] - self.m[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.m + self.m.adjoint()) * C64::new(0.5, 0.0);
        h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// One CSV row per matrix row, `re,im` pairs per column.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        for row in self.m.row_iter() {
            let cells: Vec<String> = row
                .iter()
                .flat_map(|z| [fmt_sig(z.re), fmt_sig(z.im)])
                .collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

/// Symmetrized 0/1 adjacency with empty diagonal, stored as neighbor lists.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    adj: Vec<Vec<usize>>,
}

impl Hamiltonian {
    pub fn dim(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.adj[i].binary_search(&j).is_ok() {
            1.0
        } else {
            0.0
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim(), self.dim(), |i, j| self.get(i, j))
    }
}

/// `H_ij = 1` iff `i -> j` or `j -> i` is an edge.
pub fn hamiltonian_from_graph(g: &DirectedGraph) -> Hamiltonian {
    Hamiltonian {
        adj: (0..g.node_count()).map(|v| g.undirected_neighbors(v)).collect(),
    }
}

/// The triple `(H, G, alpha)`.
#[derive(Debug, Clone)]
pub struct LindbladGenerator {
    h: Hamiltonian,
    g: StochasticMatrix,
    alpha: f64,
}

impl LindbladGenerator {
    pub fn new(h: Hamiltonian, g: StochasticMatrix, alpha: f64) -> Result<Self> {
        if h.dim() != g.dim() {
            return Err(Error::DimensionMismatch {
                expected: g.dim(),
                got: h.dim(),
            });
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!("alpha = {alpha} outside [0, 1]")));
        }
        Ok(Self { h, g, alpha })
    }

    /// Hamiltonian from `graph`, rates from its Google matrix with damping `q`.
    pub fn from_graph(graph: &DirectedGraph, q: f64, alpha: f64) -> Result<Self> {
        let g = google_matrix(&transition_matrix(graph), q)?;
        Self::new(hamiltonian_from_graph(graph), g, alpha)
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.h.clone(), self.g.clone(), alpha)
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn hamiltonian(&self) -> &Hamiltonian {
        &self.h
    }

    pub fn rates(&self) -> &StochasticMatrix {
        &self.g
    }

    /// `d rho/dt` for a Hermitian `rho` given as a column-major slice.
    ///
    /// Uses `H rho = (rho H)^+`, so only `rho H` is formed; the output is
    /// exactly Hermitian whenever the input is.
    pub(crate) fn apply_hermitian(&self, rho: &[C64], out: &mut [C64], ws: &mut Workspace) {
        let n = self.dim();
        right_multiply_h(&self.h, rho, &mut ws.prod, n);
        self.populations_gain(rho, ws);
        let y = &ws.prod;

        let coh = 1.0 - self.alpha;
        let a = self.alpha;
        for j in 0..n {
            for i in 0..n {
                let k = i + j * n;
                // [H, rho]_ij = conj(y_ji) - y_ij
                let c = y[j + i * n].conj() - y[k];
                // -i * coh * c
                let mut v = C64::new(coh * c.im, -coh * c.re) - rho[k] * a;
                if i == j {
                    v.re += a * ws.gain[i];
                }
                out[k] = v;
            }
        }
    }

    /// Same map for an arbitrary (not necessarily Hermitian) matrix.
    pub(crate) fn apply_general(&self, rho: &[C64], out: &mut [C64], ws: &mut Workspace) {
        let n = self.dim();
        right_multiply_h(&self.h, rho, &mut ws.prod, n);
        self.populations_gain(rho, ws);

        let coh = 1.0 - self.alpha;
        let a = self.alpha;
        for j in 0..n {
            for i in 0..n {
                let k = i + j * n;
                let h_rho: C64 = self.h.neighbors(i).iter().map(|&l| rho[l + j * n]).sum();
                let c = h_rho - ws.prod[k];
                let mut v = C64::new(coh * c.im, -coh * c.re) - rho[k] * a;
                if i == j {
                    v += C64::new(a * ws.gain[i], 0.0);
                }
                out[k] = v;
            }
        }
    }

    fn populations_gain(&self, rho: &[C64], ws: &mut Workspace) {
        let n = self.dim();
        for (i, p) in ws.pops.iter_mut().enumerate() {
            *p = rho[i + i * n].re;
        }
        self.g.apply_into(&ws.pops, &mut ws.gain);
    }
}

/// Scratch buffers reused across generator evaluations.
#[derive(Debug, Clone)]
pub(crate) struct Workspace {
    prod: Vec<C64>,
    pops: Vec<f64>,
    gain: Vec<f64>,
}

impl Workspace {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            prod: vec![C64::default(); n * n],
            pops: vec![0.0; n],
            gain: vec![0.0; n],
        }
    }
}

// out = rho * H: column c of the product is the sum of the columns of rho
// indexed by the neighbors of c.
fn right_multiply_h(h: &Hamiltonian, rho: &[C64], out: &mut [C64], n: usize) {
    for c in 0..n {
        let dst = &mut out[c * n..(c + 1) * n];
        dst.iter_mut().for_each(|z| *z = C64::default());
        for &k in h.neighbors(c) {
            let src = &rho[k * n..(k + 1) * n];
            for (d, s) in dst.iter_mut().zip(src) {
                *d += *s;
            }
        }
    }
}

/// `d rho/dt` at `rho`.
pub fn lindblad_apply(gen: &LindbladGenerator, rho: &DensityMatrix) -> Result<DMatrix<C64>> {
    let n = gen.dim();
    if rho.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: rho.dim(),
        });
    }
    let mut out = DMatrix::zeros(n, n);
    let mut ws = Workspace::new(n);
    gen.apply_hermitian(rho.as_matrix().as_slice(), out.as_mut_slice(), &mut ws);
    Ok(out)
}

/// The generator as an `n^2 x n^2` matrix on column-major `vec(rho)`.
#[derive(Debug, Clone)]
pub struct DenseLiouvillian {
    n: usize,
    matrix: DMatrix<C64>,
}

impl DenseLiouvillian {
    pub fn base_dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// `unvec(M vec(rho))`.
    pub fn apply(&self, rho: &DMatrix<C64>) -> Result<DMatrix<C64>> {
        if rho.nrows() != self.n || rho.ncols() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: rho.nrows(),
            });
        }
        let v = nalgebra::DVector::from_column_slice(rho.as_slice());
        let out = &self.matrix * v;
        Ok(DMatrix::from_column_slice(self.n, self.n, out.as_slice()))
    }

    /// Full spectrum via a complex Schur decomposition.
    ///
    /// The QR iteration occasionally stalls at the tightest
    /// tolerance; it is retried with looser ones, all far below the `1e-9`
    /// used to identify the zero mode.
    pub fn eigenvalues(&self) -> Result<Vec<C64>> {
        let schur = [1e-15, 1e-14, 1e-13]
            .into_iter()
            .find_map(|eps| Schur::try_new(self.matrix.clone(), eps, 20_000))
            .ok_or_else(|| Error::InvalidState("Schur decomposition did not converge".into()))?;
        let ev = schur
            .eigenvalues()
            .ok_or_else(|| Error::InvalidState("Schur form is not triangular".into()))?;
        Ok(ev.iter().copied().collect())
    }
}

/// Builds the dense Liouvillian column by column from the basis matrices
/// `|k><l|`. Refuses `n > cap` since storage grows as `n^4`.
pub fn dense_liouvillian(gen: &LindbladGenerator, cap: usize) -> Result<DenseLiouvillian> {
    let n = gen.dim();
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    let nn = n * n;
    let mut matrix = DMatrix::<C64>::zeros(nn, nn);
    let mut basis = vec![C64::default(); nn];
    let mut col = vec![C64::default(); nn];
    let mut ws = Workspace::new(n);
    for c in 0..nn {
        basis[c] = C64::new(1.0, 0.0);
        gen.apply_general(&basis, &mut col, &mut ws);
        matrix.column_mut(c).copy_from_slice(&col);
        basis[c] = C64::default();
    }
    Ok(DenseLiouvillian { n, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgraph::{generate, toy_graph, GraphGenSpec};
    use proptest::prelude::{prop_assert, proptest, ProptestConfig};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Literal dissipator sum over every `(i, j)` with `L = |i><j|`, plus the
    /// commutator, all with dense matrices.
    fn brute_force(gen: &LindbladGenerator, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let n = gen.dim();
        let h = gen.hamiltonian().to_dense().map(|x| C64::new(x, 0.0));
        let a = gen.alpha();
        let comm = &h * rho - rho * &h;
        let mut out = comm * C64::new(0.0, -(1.0 - a));
        for i in 0..n {
            for j in 0..n {
                let mut l = DMatrix::<C64>::zeros(n, n);
                l[(i, j)] = C64::new(1.0, 0.0);
                let ld = l.adjoint();
                let ldl = &ld * &l;
                let term = &l * rho * &ld - (&ldl * rho + rho * &ldl) * C64::new(0.5, 0.0);
                out += term * C64::new(a * gen.rates().get(i, j), 0.0);
            }
        }
        out
    }

    fn random_hermitian_trace_one(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<C64> {
        // not necessarily positive: the generator is linear
        let a = DMatrix::from_fn(n, n, |_, _| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
        let mut h = (&a + a.adjoint()) * C64::new(0.5, 0.0);
        let tr = h.trace().re;
        for i in 0..n {
            h[(i, i)] += C64::new((1.0 - tr) / n as f64, 0.0);
        }
        h
    }

    fn max_abs(m: &DMatrix<C64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn two_node_gen(alpha: f64) -> LindbladGenerator {
        let g = DirectedGraph::new(2, vec![(0, 1)]).unwrap();
        LindbladGenerator::from_graph(&g, 0.9, alpha).unwrap()
    }

    #[test]
    fn hamiltonian_symmetrizes() {
        let h = hamiltonian_from_graph(&DirectedGraph::new(2, vec![(0, 1)]).unwrap());
        assert_eq!(h.to_dense(), DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        let cyc = DirectedGraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let h = hamiltonian_from_graph(&cyc).to_dense();
        assert_eq!(h, DMatrix::from_fn(3, 3, |i, j| if i == j { 0.0 } else { 1.0 }));
    }

    #[test]
    fn toy_hamiltonian_links_seven_and_eight() {
        let h = hamiltonian_from_graph(&toy_graph()).to_dense();
        assert_eq!(h, h.transpose());
        assert_eq!(h[(6, 7)], 1.0);
        assert_eq!(h[(7, 6)], 1.0);
        assert_eq!(h[(7, 1)], 1.0);
        assert_eq!(h[(5, 7)], 0.0);
        assert_eq!(h.sum(), 2.0 * 12.0);
        assert!((0..8).all(|i| h[(i, i)] == 0.0));
    }

    #[test]
    fn generator_validation() {
        let g = two_node_gen(0.5);
        assert!(g.with_alpha(1.2).is_err());
        assert!(g.with_alpha(-0.1).is_err());
        let h3 = hamiltonian_from_graph(&DirectedGraph::new(3, vec![(0, 1)]).unwrap());
        assert!(LindbladGenerator::new(h3, g.rates().clone(), 0.5).is_err());
        assert!(lindblad_apply(&g, &DensityMatrix::maximally_mixed(3)).is_err());
    }

    #[test]
    fn classical_limit_acts_on_populations_only() {
        let graph = toy_graph();
        let gen = LindbladGenerator::from_graph(&graph, 0.9, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rho = DensityMatrix::random(8, &mut rng);
        let d = lindblad_apply(&gen, &rho).unwrap();
        let p = rho.diagonal();
        let gp = gen.rates().apply(&p);
        for i in 0..8 {
            assert!((d[(i, i)].re - (gp[i] - p[i])).abs() < 1e-15);
            for j in 0..8 {
                if i != j {
                    assert!((d[(i, j)] + rho.as_matrix()[(i, j)]).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn coherent_limit_keeps_diagonal_states_diagonal_populations() {
        let gen = LindbladGenerator::from_graph(&toy_graph(), 0.9, 0.0).unwrap();
        let p = [0.3, 0.2, 0.1, 0.1, 0.1, 0.05, 0.1, 0.05];
        let m = DMatrix::from_fn(8, 8, |i, j| if i == j { C64::new(p[i], 0.0) } else { C64::default() });
        let d = lindblad_apply(&gen, &DensityMatrix::from_matrix(m).unwrap()).unwrap();
        for i in 0..8 {
            assert_eq!(d[(i, i)], C64::default());
        }
        // but coherences appear between linked nodes with unequal populations
        assert!(d[(0, 1)].norm() > 0.0);
    }

    #[test]
    fn closed_form_matches_literal_sum_4x4() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let graph = generate(&GraphGenSpec::er(4, 2.0, 9)).unwrap();
        let gen = LindbladGenerator::from_graph(&graph, 0.9, 0.5).unwrap();
        let rho = random_hermitian_trace_one(4, &mut rng);
        let fast = lindblad_apply(&gen, &DensityMatrix::from_matrix(rho.clone()).unwrap()).unwrap();
        assert!(max_abs(&(fast - brute_force(&gen, &rho))) < 1e-12);
    }

    #[test]
    fn general_path_matches_hermitian_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let gen = LindbladGenerator::from_graph(&toy_graph(), 0.85, 0.3).unwrap();
        let rho = random_hermitian_trace_one(8, &mut rng);
        let mut a = vec![C64::default(); 64];
        let mut b = vec![C64::default(); 64];
        let mut ws = Workspace::new(8);
        gen.apply_hermitian(rho.as_slice(), &mut a, &mut ws);
        gen.apply_general(rho.as_slice(), &mut b, &mut ws);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn two_node_classical_spectrum() {
        let dl = dense_liouvillian(&two_node_gen(1.0), DEFAULT_DENSE_CAP).unwrap();
        let mut ev: Vec<f64> = dl.eigenvalues().unwrap().iter().map(|z| z.re).collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in ev.iter().zip([-2.0, -1.0, -1.0, 0.0]) {
            assert!((got - want).abs() < 1e-12, "{ev:?}");
        }
    }

    #[test]
    fn dense_refuses_over_cap() {
        let gen = LindbladGenerator::from_graph(&toy_graph(), 0.9, 0.5).unwrap();
        assert!(matches!(dense_liouvillian(&gen, 4), Err(Error::TooLarge { n: 8, cap: 4 })));
    }

    #[test]
    fn dense_matches_matrix_free() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let gen = LindbladGenerator::from_graph(&toy_graph(), 0.9, 0.6).unwrap();
        let dl = dense_liouvillian(&gen, DEFAULT_DENSE_CAP).unwrap();
        for _ in 0..10 {
            let rho = DensityMatrix::random(8, &mut rng);
            let a = dl.apply(rho.as_matrix()).unwrap();
            let b = lindblad_apply(&gen, &rho).unwrap();
            assert!(max_abs(&(a - b)) < 1e-10);
        }
    }

    #[test]
    fn dense_has_single_zero_mode_and_stable_rest() {
        for (seed, alpha) in [(1, 0.2), (2, 0.5), (3, 0.9)] {
            let graph = generate(&GraphGenSpec::ba(9, 2, seed)).unwrap();
            let gen = LindbladGenerator::from_graph(&graph, 0.9, alpha).unwrap();
            let ev = dense_liouvillian(&gen, DEFAULT_DENSE_CAP).unwrap().eigenvalues().unwrap();
            let zeros = ev.iter().filter(|z| z.norm() < 1e-9).count();
            assert_eq!(zeros, 1);
            assert!(ev.iter().filter(|z| z.norm() >= 1e-9).all(|z| z.re < 0.0));
        }
    }

    #[test]
    fn random_states_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1, 3, 10] {
            let rho = DensityMatrix::random(n, &mut rng);
            assert!((rho.trace() - 1.0).abs() < 1e-12);
            assert_eq!(rho.hermiticity_defect(), 0.0);
            assert!(rho.min_eigenvalue() > -1e-12);
            DensityMatrix::from_matrix(rho.into_matrix()).unwrap();
        }
        assert!((DensityMatrix::maximally_mixed(4).min_eigenvalue() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn from_matrix_rejects_bad_states() {
        let mut m = DMatrix::from_diagonal_element(2, 2, C64::new(0.5, 0.0));
        m[(0, 1)] = C64::new(0.1, 0.1);
        assert!(DensityMatrix::from_matrix(m.clone()).is_err());
        m[(1, 0)] = C64::new(0.1, -0.1);
        assert!(DensityMatrix::from_matrix(m.clone()).is_ok());
        m[(0, 0)] = C64::new(0.7, 0.0);
        assert!(DensityMatrix::from_matrix(m).is_err());
    }

    #[test]
    fn density_csv_has_re_im_pairs() {
        let mut buf = Vec::new();
        DensityMatrix::maximally_mixed(2).write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert_eq!(text.lines().next().unwrap().split(',').count(), 4);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn trace_and_hermiticity_preserved(seed in 0u64..10_000, alpha in 0.0f64..=1.0, n in 2usize..9) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let graph = generate(&GraphGenSpec { directed: seed % 2 == 0, ..GraphGenSpec::er(n.max(3), 1.5, seed) }).unwrap();
            let gen = LindbladGenerator::from_graph(&graph, 0.9, alpha).unwrap();
            let rho = random_hermitian_trace_one(gen.dim(), &mut rng);
            let d = lindblad_apply(&gen, &DensityMatrix::from_matrix_unchecked(rho.clone())).unwrap();
            prop_assert!(d.trace().norm() < 1e-12);
            prop_assert!(max_abs(&(&d - d.adjoint())) < 1e-12);
            prop_assert!(max_abs(&(d - brute_force(&gen, &rho))) < 1e-12);
        }
    }
}
