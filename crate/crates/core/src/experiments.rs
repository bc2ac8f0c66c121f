//! Experiment drivers behind the CLI: α sweeps, α_opt histograms, size
//! scaling, the toy-graph rank table and the full network report.
//!
//! Every driver returns its data in memory and, when an output directory is
//! configured, writes one CSV per table plus `summary.json`.

use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::lindblad::LindbladGenerator;
use crate::netgraph::{
    generate, google_matrix, load_edge_list, toy_graph, transition_matrix, DirectedGraph, GraphGenSpec,
    StochasticMatrix,
};
use crate::output::{fmt_sig, CsvTable};
use crate::ranking::{
    degeneracy_profile, kendall_concordance, neighbor_profile, rank_from_scores, rank_shift, Neighborhood, RankResult,
    DEFAULT_EPS_TIE,
};
use crate::solver::{
    classical_convergence_time, classical_stationary, integrate_to_stationary, random_walk_stationary,
    IntegrationConfig, DEFAULT_MAX_ITER,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Power-iteration tolerance (L1 step difference) for reference rankings.
pub const POWER_EPS: f64 = 1e-14;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    #[default]
    Sweep,
    Histogram,
    Scaling,
    Toy,
    Report,
}

impl std::str::FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sweep" => Ok(Self::Sweep),
            "histogram" => Ok(Self::Histogram),
            "scaling" => Ok(Self::Scaling),
            "toy" => Ok(Self::Toy),
            "report" => Ok(Self::Report),
            other => Err(Error::InvalidParameter(format!("unknown command {other:?}"))),
        }
    }
}

/// `0.05, 0.10, ..., 1.00`.
pub fn default_alpha_grid() -> Vec<f64> {
    (1..=20).map(|k| k as f64 / 20.0).collect()
}

/// Full run description. Loadable from JSON; missing fields take defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    /// Edge-list file. Takes precedence over `gen`.
    pub graph: Option<PathBuf>,
    /// Read `graph` as undirected lines.
    pub undirected: bool,
    /// Synthetic source. Its own seed is ignored: ensemble member `k` uses
    /// `seed + k`.
    pub gen: Option<GraphGenSpec>,
    pub seed: u64,
    pub alpha_grid: Vec<f64>,
    pub q: f64,
    pub ensemble: usize,
    pub integration: IntegrationConfig,
    /// Output directory; nothing is written when absent.
    pub out: Option<PathBuf>,
    /// α used by single-α analyses (toy table, degeneracy, shifts).
    pub qr_alpha: f64,
    /// Node counts for `scaling`.
    pub sizes: Vec<usize>,
    pub eps_tie: f64,
    pub neighborhood: Neighborhood,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            command: Command::Sweep,
            graph: None,
            undirected: false,
            gen: None,
            seed: 0,
            alpha_grid: default_alpha_grid(),
            q: 0.9,
            ensemble: 10,
            integration: IntegrationConfig::default(),
            out: None,
            qr_alpha: 0.9,
            sizes: vec![50, 100, 150, 200],
            eps_tie: DEFAULT_EPS_TIE,
            neighborhood: Neighborhood::Out,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let cfg: Self = serde_json::from_reader(BufReader::new(File::open(path)?))?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha_grid.is_empty() {
            return Err(Error::InvalidParameter("empty alpha grid".into()));
        }
        if let Some(a) = self.alpha_grid.iter().find(|&&a| !(a > 0.0 && a <= 1.0)) {
            return Err(Error::InvalidParameter(format!("alpha {a} outside (0, 1]")));
        }
        if !(self.qr_alpha > 0.0 && self.qr_alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!("qr_alpha {} outside (0, 1]", self.qr_alpha)));
        }
        if !(0.0..=1.0).contains(&self.q) {
            return Err(Error::InvalidParameter(format!("q = {} outside [0, 1]", self.q)));
        }
        if self.ensemble == 0 {
            return Err(Error::InvalidParameter("ensemble must be at least 1".into()));
        }
        if !(self.eps_tie > 0.0) {
            return Err(Error::InvalidParameter("eps_tie must be positive".into()));
        }
        if self.command == Command::Scaling && self.sizes.is_empty() {
            return Err(Error::InvalidParameter("scaling needs at least one size".into()));
        }
        if let Some(spec) = &self.gen {
            spec.validate()?;
        }
        self.integration.validate()
    }

    /// Grid sorted ascending with duplicates removed.
    pub fn sorted_grid(&self) -> Vec<f64> {
        let mut g = self.alpha_grid.clone();
        g.sort_by(f64::total_cmp);
        g.dedup();
        g
    }

    /// The networks a command runs on: the loaded file, or `ensemble`
    /// generated members, or the toy graph when no source is given.
    pub fn networks(&self) -> Result<Vec<Network>> {
        if let Some(path) = &self.graph {
            let file = BufReader::new(File::open(path)?);
            let (graph, _) = load_edge_list(file, !self.undirected)?;
            return Ok(vec![Network {
                name: path.display().to_string(),
                seed: None,
                graph,
            }]);
        }
        if let Some(spec) = &self.gen {
            return generate_ensemble(spec, self.seed, self.ensemble);
        }
        Ok(vec![Network {
            name: "toy".into(),
            seed: None,
            graph: toy_graph(),
        }])
    }
}

#[derive(Debug, Clone)]
pub struct Network {
    pub name: String,
    pub seed: Option<u64>,
    pub graph: DirectedGraph,
}

pub fn generate_ensemble(spec: &GraphGenSpec, base_seed: u64, count: usize) -> Result<Vec<Network>> {
    (0..count as u64)
        .map(|k| {
            let s = spec.with_seed(base_seed.wrapping_add(k));
            Ok(Network {
                name: format!("{}-{}-{}-s{}", s.model, s.n, s.param, s.seed),
                seed: Some(s.seed),
                graph: generate(&s)?,
            })
        })
        .collect()
}

/// Classical reference data shared by all α of one network.
#[derive(Debug, Clone)]
pub struct Reference {
    pub g: StochasticMatrix,
    pub tau_pr: f64,
    pub pr_converged: bool,
    pub pr: RankResult,
}

pub fn reference(graph: &DirectedGraph, q: f64, cfg: &IntegrationConfig, eps_tie: f64) -> Result<Reference> {
    let g = google_matrix(&transition_matrix(graph), q)?;
    let run = classical_convergence_time(&g, cfg)?;
    let p = classical_stationary(&g, POWER_EPS, DEFAULT_MAX_ITER)?;
    Ok(Reference {
        tau_pr: run.tau,
        pr_converged: run.converged,
        pr: rank_from_scores(&p, eps_tie)?,
        g,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub alpha: f64,
    pub tau_qr: f64,
    pub tau_pr: f64,
    pub ratio: f64,
    /// Concordance of QR(α) with PR.
    pub kendall: f64,
    pub converged: bool,
    pub qr: RankResult,
}

/// Integrates QR at `alpha` and compares it with the reference.
pub fn sweep_point(graph: &DirectedGraph, reference: &Reference, alpha: f64, cfg: &ExperimentConfig) -> Result<SweepPoint> {
    let gen = LindbladGenerator::new(
        crate::lindblad::hamiltonian_from_graph(graph),
        reference.g.clone(),
        alpha,
    )?;
    let run = integrate_to_stationary(&gen, &cfg.integration)?;
    let qr = rank_from_scores(&run.populations(), cfg.eps_tie)?;
    let converged = run.converged && reference.pr_converged;
    Ok(SweepPoint {
        alpha,
        tau_qr: run.tau,
        tau_pr: reference.tau_pr,
        ratio: run.tau / reference.tau_pr,
        kendall: kendall_concordance(&qr, &reference.pr)?,
        converged,
        qr,
    })
}

#[derive(Debug, Clone)]
pub struct NetworkSweep {
    pub name: String,
    pub seed: Option<u64>,
    pub points: Vec<SweepPoint>,
}

impl NetworkSweep {
    /// Grid argmin of the ratio over converged points; ties go to the
    /// smaller α.
    pub fn alpha_opt(&self) -> Option<(f64, f64)> {
        argmin(self.points.iter().filter(|p| p.converged).map(|p| (p.alpha, p.ratio)))
    }

    pub fn failures(&self) -> usize {
        self.points.iter().filter(|p| !p.converged).count()
    }
}

fn argmin(it: impl Iterator<Item = (f64, f64)>) -> Option<(f64, f64)> {
    it.filter(|(_, r)| r.is_finite())
        .fold(None, |best: Option<(f64, f64)>, (a, r)| match best {
            Some((_, br)) if br <= r => best,
            _ => Some((a, r)),
        })
}

/// Runs every (network, α) pair of the grid concurrently.
pub fn sweep_networks(networks: &[Network], cfg: &ExperimentConfig) -> Result<Vec<NetworkSweep>> {
    let grid = cfg.sorted_grid();
    let refs: Vec<Reference> = networks
        .par_iter()
        .map(|n| reference(&n.graph, cfg.q, &cfg.integration, cfg.eps_tie))
        .collect::<Result<_>>()?;
    let jobs: Vec<(usize, f64)> = (0..networks.len())
        .flat_map(|k| grid.iter().map(move |&a| (k, a)))
        .collect();
    let points: Vec<SweepPoint> = jobs
        .par_iter()
        .map(|&(k, a)| sweep_point(&networks[k].graph, &refs[k], a, cfg))
        .collect::<Result<_>>()?;
    let mut points = points.into_iter();
    Ok(networks
        .iter()
        .map(|n| NetworkSweep {
            name: n.name.clone(),
            seed: n.seed,
            points: points.by_ref().take(grid.len()).collect(),
        })
        .collect())
}

/// Ensemble mean per α, over converged members only.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanPoint {
    pub alpha: f64,
    pub tau_qr: f64,
    pub tau_pr: f64,
    pub ratio: f64,
    pub ratio_std: f64,
    pub kendall: f64,
    pub members: usize,
    pub failures: usize,
}

pub fn mean_curve(sweeps: &[NetworkSweep]) -> Vec<MeanPoint> {
    let Some(first) = sweeps.first() else {
        return Vec::new();
    };
    (0..first.points.len())
        .map(|i| {
            let ok: Vec<&SweepPoint> = sweeps.iter().map(|s| &s.points[i]).filter(|p| p.converged).collect();
            let m = ok.len() as f64;
            let mean = |f: fn(&SweepPoint) -> f64| ok.iter().map(|p| f(p)).sum::<f64>() / m;
            let ratio = mean(|p| p.ratio);
            let var = ok.iter().map(|p| (p.ratio - ratio).powi(2)).sum::<f64>() / m;
            MeanPoint {
                alpha: first.points[i].alpha,
                tau_qr: mean(|p| p.tau_qr),
                tau_pr: mean(|p| p.tau_pr),
                ratio,
                ratio_std: var.sqrt(),
                kendall: mean(|p| p.kendall),
                members: ok.len(),
                failures: sweeps.len() - ok.len(),
            }
        })
        .collect()
}

/// Grid argmin of the mean ratio.
pub fn curve_opt(curve: &[MeanPoint]) -> Option<(f64, f64)> {
    argmin(curve.iter().filter(|p| p.members > 0).map(|p| (p.alpha, p.ratio)))
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub sweeps: Vec<NetworkSweep>,
    pub curve: Vec<MeanPoint>,
    pub alpha_opt: Option<f64>,
    pub min_ratio: Option<f64>,
    pub failures: usize,
}

pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let sweeps = sweep_networks(&cfg.networks()?, cfg)?;
    let curve = mean_curve(&sweeps);
    let opt = curve_opt(&curve);
    let report = SweepReport {
        failures: sweeps.iter().map(NetworkSweep::failures).sum(),
        alpha_opt: opt.map(|o| o.0),
        min_ratio: opt.map(|o| o.1),
        sweeps,
        curve,
    };
    if let Some(dir) = prepare_out(cfg)? {
        curve_table(&report.curve).save(&dir.join("sweep.csv"))?;
        members_table(&report.sweeps).save(&dir.join("sweep_members.csv"))?;
        write_summary(
            &dir,
            cfg,
            report.failures,
            json!({
                "alpha_opt": report.alpha_opt,
                "min_ratio": report.min_ratio,
                "networks": report.sweeps.len(),
                "files": ["sweep.csv", "sweep_members.csv"],
            }),
        )?;
    }
    Ok(report)
}

pub fn curve_table(curve: &[MeanPoint]) -> CsvTable {
    let mut t = CsvTable::new(&["alpha", "tau_qr", "tau_pr", "ratio", "ratio_std", "kendall_vs_pr", "members", "failures"]);
    for p in curve {
        t.push(vec![
            fmt_sig(p.alpha),
            fmt_sig(p.tau_qr),
            fmt_sig(p.tau_pr),
            fmt_sig(p.ratio),
            fmt_sig(p.ratio_std),
            fmt_sig(p.kendall),
            p.members.to_string(),
            p.failures.to_string(),
        ]);
    }
    t
}

fn members_table(sweeps: &[NetworkSweep]) -> CsvTable {
    let mut t = CsvTable::new(&["network", "alpha", "tau_qr", "tau_pr", "ratio", "kendall_vs_pr", "converged"]);
    for s in sweeps {
        for p in &s.points {
            t.push(vec![
                s.name.clone(),
                fmt_sig(p.alpha),
                fmt_sig(p.tau_qr),
                fmt_sig(p.tau_pr),
                fmt_sig(p.ratio),
                fmt_sig(p.kendall),
                p.converged.to_string(),
            ]);
        }
    }
    t
}

#[derive(Debug, Clone, PartialEq)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub alpha: f64,
    pub count: usize,
}

/// One bin per grid point, with edges halfway between neighbors.
pub fn alpha_histogram(grid: &[f64], opts: &[f64]) -> Vec<HistogramBin> {
    let n = grid.len();
    let edge = |i: usize| -> f64 {
        match (i, n) {
            (_, 1) => grid[0] + if i == 0 { -0.025 } else { 0.025 },
            (0, _) => grid[0] - (grid[1] - grid[0]) / 2.0,
            (i, _) if i == n => grid[n - 1] + (grid[n - 1] - grid[n - 2]) / 2.0,
            _ => (grid[i - 1] + grid[i]) / 2.0,
        }
    };
    grid.iter()
        .enumerate()
        .map(|(i, &a)| HistogramBin {
            lo: edge(i),
            hi: edge(i + 1),
            alpha: a,
            count: opts.iter().filter(|&&o| o == a).count(),
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct HistogramReport {
    pub sweeps: Vec<NetworkSweep>,
    /// Per-network α_opt, `None` when no point converged.
    pub alpha_opts: Vec<Option<f64>>,
    pub bins: Vec<HistogramBin>,
    pub failures: usize,
}

pub fn run_histogram(cfg: &ExperimentConfig) -> Result<HistogramReport> {
    cfg.validate()?;
    let sweeps = sweep_networks(&cfg.networks()?, cfg)?;
    let alpha_opts: Vec<Option<f64>> = sweeps.iter().map(|s| s.alpha_opt().map(|o| o.0)).collect();
    let found: Vec<f64> = alpha_opts.iter().flatten().copied().collect();
    let bins = alpha_histogram(&cfg.sorted_grid(), &found);
    let report = HistogramReport {
        failures: sweeps.iter().map(NetworkSweep::failures).sum(),
        sweeps,
        alpha_opts,
        bins,
    };
    if let Some(dir) = prepare_out(cfg)? {
        let total = found.len().max(1) as f64;
        let mut t = CsvTable::new(&["bin_lo", "bin_hi", "alpha", "count", "probability"]);
        for b in &report.bins {
            t.push(vec![
                fmt_sig(b.lo),
                fmt_sig(b.hi),
                fmt_sig(b.alpha),
                b.count.to_string(),
                fmt_sig(b.count as f64 / total),
            ]);
        }
        t.save(&dir.join("histogram.csv"))?;
        members_table(&report.sweeps).save(&dir.join("sweep_members.csv"))?;
        write_summary(
            &dir,
            cfg,
            report.failures,
            json!({
                "alpha_opts": report.alpha_opts,
                "files": ["histogram.csv", "sweep_members.csv"],
            }),
        )?;
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRow {
    pub n: usize,
    pub alpha_opt: f64,
    pub ratio: f64,
    pub failures: usize,
}

/// Generator spec used by `scaling` at size `n`: the configured model and
/// parameter, or BA with m = 3.
fn scaling_spec(cfg: &ExperimentConfig, n: usize) -> GraphGenSpec {
    match &cfg.gen {
        Some(s) => GraphGenSpec { n, ..s.clone() },
        None => GraphGenSpec::ba(n, 3, 0),
    }
}

pub fn run_scaling(cfg: &ExperimentConfig) -> Result<Vec<ScalingRow>> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for &n in &cfg.sizes {
        let spec = scaling_spec(cfg, n);
        spec.validate()?;
        let sweeps = sweep_networks(&generate_ensemble(&spec, cfg.seed, cfg.ensemble)?, cfg)?;
        let curve = mean_curve(&sweeps);
        let (alpha_opt, ratio) = curve_opt(&curve).unwrap_or((f64::NAN, f64::NAN));
        rows.push(ScalingRow {
            n,
            alpha_opt,
            ratio,
            failures: sweeps.iter().map(NetworkSweep::failures).sum(),
        });
    }
    if let Some(dir) = prepare_out(cfg)? {
        let mut t = CsvTable::new(&["n", "alpha_opt", "ratio_at_alpha_opt", "failures"]);
        for r in &rows {
            t.push(vec![r.n.to_string(), fmt_sig(r.alpha_opt), fmt_sig(r.ratio), r.failures.to_string()]);
        }
        t.save(&dir.join("scaling.csv"))?;
        write_summary(
            &dir,
            cfg,
            rows.iter().map(|r| r.failures).sum(),
            json!({ "files": ["scaling.csv"] }),
        )?;
    }
    Ok(rows)
}

/// Stationary rankings of one graph under the three navigation schemes.
#[derive(Debug, Clone)]
pub struct RankTable {
    pub rw: RankResult,
    pub pr: RankResult,
    pub qr: RankResult,
    pub qr_converged: bool,
}

pub fn rank_table(graph: &DirectedGraph, q: f64, alpha: f64, cfg: &IntegrationConfig, eps_tie: f64) -> Result<RankTable> {
    let pi = transition_matrix(graph);
    let rw = random_walk_stationary(&pi, POWER_EPS, DEFAULT_MAX_ITER)?;
    let g = google_matrix(&pi, q)?;
    let pr = classical_stationary(&g, POWER_EPS, DEFAULT_MAX_ITER)?;
    let gen = LindbladGenerator::new(crate::lindblad::hamiltonian_from_graph(graph), g, alpha)?;
    let run = integrate_to_stationary(&gen, cfg)?;
    Ok(RankTable {
        rw: rank_from_scores(&rw, eps_tie)?,
        pr: rank_from_scores(&pr, eps_tie)?,
        qr: rank_from_scores(&run.populations(), eps_tie)?,
        qr_converged: run.converged,
    })
}

fn rank_table_csv(graph: &DirectedGraph, t: &RankTable) -> CsvTable {
    let mut header = vec!["node".to_owned()];
    for m in ["rw", "pr", "qr"] {
        for c in ["score", "position", "tie_group"] {
            header.push(format!("{m}_{c}"));
        }
    }
    let mut csv = CsvTable::new(&header);
    for v in 0..graph.node_count() {
        let mut row = vec![graph.label(v)];
        for r in [&t.rw, &t.pr, &t.qr] {
            row.extend([fmt_sig(r.scores[v]), r.positions[v].to_string(), r.group_of(v).to_string()]);
        }
        csv.push(row);
    }
    csv
}

/// Toy graph (or the configured graph) ranked by RW, PR and QR(`qr_alpha`).
pub fn run_toy(cfg: &ExperimentConfig) -> Result<RankTable> {
    cfg.validate()?;
    let graph = match (&cfg.graph, &cfg.gen) {
        (None, None) => toy_graph(),
        _ => cfg.networks()?.swap_remove(0).graph,
    };
    let table = rank_table(&graph, cfg.q, cfg.qr_alpha, &cfg.integration, cfg.eps_tie)?;
    if let Some(dir) = prepare_out(cfg)? {
        rank_table_csv(&graph, &table).save(&dir.join("toy_ranks.csv"))?;
        write_summary(
            &dir,
            cfg,
            usize::from(!table.qr_converged),
            json!({
                "distinct_positions": {
                    "rw": table.rw.distinct_positions(),
                    "pr": table.pr.distinct_positions(),
                    "qr": table.qr.distinct_positions(),
                },
                "files": ["toy_ranks.csv"],
            }),
        )?;
    }
    Ok(table)
}

/// Per-node rank shift paired with the neighbor statistics of that node.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftRow {
    pub node: usize,
    pub qr_position: usize,
    pub pr_position: usize,
    /// `pr_position - qr_position`: positive when QR ranks the node higher.
    pub shift: i64,
    pub nn_score: Option<f64>,
    pub nn_degree: Option<f64>,
    pub nn_ratio: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct NetworkReport {
    pub curve: Vec<SweepPoint>,
    pub table: RankTable,
    pub shifts: Vec<ShiftRow>,
    pub alpha_opt: Option<f64>,
    pub failures: usize,
}

pub fn shift_rows(graph: &DirectedGraph, qr: &RankResult, pr: &RankResult, mode: Neighborhood) -> Result<Vec<ShiftRow>> {
    let shifts = rank_shift(qr, pr)?;
    let nn = neighbor_profile(graph, qr, mode)?;
    Ok((0..graph.node_count())
        .map(|v| ShiftRow {
            node: v,
            qr_position: qr.positions[v],
            pr_position: pr.positions[v],
            shift: shifts[v],
            nn_score: nn[v].map(|s| s.mean_score),
            nn_degree: nn[v].map(|s| s.mean_degree),
            nn_ratio: nn[v].map(|s| s.ratio),
        })
        .collect())
}

/// Ratio and concordance curves, degeneracy profiles, rank shifts and
/// neighbor profiles for a single network.
pub fn run_report(cfg: &ExperimentConfig) -> Result<NetworkReport> {
    cfg.validate()?;
    let network = cfg.networks()?.swap_remove(0);
    let graph = &network.graph;
    let sweep = sweep_networks(std::slice::from_ref(&network), cfg)?.swap_remove(0);
    let table = rank_table(graph, cfg.q, cfg.qr_alpha, &cfg.integration, cfg.eps_tie)?;
    let shifts = shift_rows(graph, &table.qr, &table.pr, cfg.neighborhood)?;
    let report = NetworkReport {
        alpha_opt: sweep.alpha_opt().map(|o| o.0),
        failures: sweep.failures() + usize::from(!table.qr_converged),
        curve: sweep.points,
        table,
        shifts,
    };
    if let Some(dir) = prepare_out(cfg)? {
        let mut t = CsvTable::new(&["alpha", "tau_qr", "tau_pr", "ratio", "kendall_vs_pr", "qr_positions", "converged"]);
        for p in &report.curve {
            t.push(vec![
                fmt_sig(p.alpha),
                fmt_sig(p.tau_qr),
                fmt_sig(p.tau_pr),
                fmt_sig(p.ratio),
                fmt_sig(p.kendall),
                p.qr.distinct_positions().to_string(),
                p.converged.to_string(),
            ]);
        }
        t.save(&dir.join("curve.csv"))?;

        let mut t = CsvTable::new(&["method", "position", "count"]);
        for (name, r) in [("rw", &report.table.rw), ("pr", &report.table.pr), ("qr", &report.table.qr)] {
            for (pos, count) in degeneracy_profile(r) {
                t.push(vec![name.to_owned(), pos.to_string(), count.to_string()]);
            }
        }
        t.save(&dir.join("degeneracy.csv"))?;

        let opt = |x: Option<f64>| x.map(fmt_sig).unwrap_or_default();
        let mut t = CsvTable::new(&[
            "node", "qr_position", "pr_position", "shift", "nn_score", "nn_degree", "nn_ratio",
        ]);
        for s in &report.shifts {
            t.push(vec![
                graph.label(s.node),
                s.qr_position.to_string(),
                s.pr_position.to_string(),
                s.shift.to_string(),
                opt(s.nn_score),
                opt(s.nn_degree),
                opt(s.nn_ratio),
            ]);
        }
        t.save(&dir.join("shifts.csv"))?;
        rank_table_csv(graph, &report.table).save(&dir.join("ranks.csv"))?;

        write_summary(
            &dir,
            cfg,
            report.failures,
            json!({
                "network": network.name,
                "nodes": graph.node_count(),
                "edges": graph.edge_count(),
                "alpha_opt": report.alpha_opt,
                "distinct_positions": {
                    "rw": report.table.rw.distinct_positions(),
                    "pr": report.table.pr.distinct_positions(),
                    "qr": report.table.qr.distinct_positions(),
                },
                "files": ["curve.csv", "degeneracy.csv", "shifts.csv", "ranks.csv"],
            }),
        )?;
    }
    Ok(report)
}

/// Runs the configured command and returns its number of non-converged
/// runs.
pub fn run(cfg: &ExperimentConfig) -> Result<usize> {
    Ok(match cfg.command {
        Command::Sweep => run_sweep(cfg)?.failures,
        Command::Histogram => run_histogram(cfg)?.failures,
        Command::Scaling => run_scaling(cfg)?.iter().map(|r| r.failures).sum(),
        Command::Toy => usize::from(!run_toy(cfg)?.qr_converged),
        Command::Report => run_report(cfg)?.failures,
    })
}

fn prepare_out(cfg: &ExperimentConfig) -> Result<Option<PathBuf>> {
    let Some(dir) = &cfg.out else { return Ok(None) };
    fs::create_dir_all(dir)?;
    Ok(Some(dir.clone()))
}

fn write_summary(dir: &Path, cfg: &ExperimentConfig, failures: usize, results: serde_json::Value) -> Result<()> {
    let summary = json!({
        "schema_version": SCHEMA_VERSION,
        "command": cfg.command,
        "config": cfg,
        "non_converged": failures,
        "results": results,
    });
    fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
    Ok(())
}
