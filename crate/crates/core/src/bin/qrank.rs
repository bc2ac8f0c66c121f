use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;

use qrank::experiments::{self, Command, ExperimentConfig};
use qrank::netgraph::{save_edge_list, GraphGenSpec, GraphModel};
use qrank::ranking::Neighborhood;

/// Quantum-rank navigation experiments on directed networks.
///
/// Flags override values read from `--config`.
#[derive(Debug, Parser)]
#[command(version)]
struct Cli {
    /// JSON experiment config.
    #[arg(long)]
    config: Option<PathBuf>,
    /// sweep | histogram | scaling | toy | report
    #[arg(long, value_parser = parse_command)]
    command: Option<Command>,
    /// Edge-list file ("u v" per line, '#' comments).
    #[arg(long, conflicts_with = "gen")]
    graph: Option<PathBuf>,
    /// Read --graph lines as undirected links.
    #[arg(long)]
    undirected: bool,
    /// Synthetic graphs: MODEL,N,PARAM with MODEL in {er, ba}.
    #[arg(long, value_parser = parse_gen)]
    gen: Option<GraphGenSpec>,
    /// Generate directed variants instead of bidirectional links.
    #[arg(long)]
    directed: bool,
    /// Base seed; ensemble member k uses seed + k.
    #[arg(long)]
    seed: Option<u64>,
    /// Comma list ("0.5,0.9,1") or range START:STOP:STEP.
    #[arg(long, value_parser = parse_alpha_grid, allow_hyphen_values = true)]
    alpha_grid: Option<AlphaGrid>,
    /// Link-following weight of the Google matrix (default 0.9)
    #[arg(long)]
    q: Option<f64>,
    /// Number of generated networks
    #[arg(long)]
    ensemble: Option<usize>,
    /// RK4 step
    #[arg(long)]
    dt: Option<f64>,
    /// Convergence radius (L2 distance of populations)
    #[arg(long)]
    epsilon: Option<f64>,
    /// Give up (non-converged) after this time
    #[arg(long)]
    max_time: Option<f64>,
    /// α for single-α analyses.
    #[arg(long)]
    qr_alpha: Option<f64>,
    /// Node counts for `scaling`, comma separated.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Neighbor profiles over out | in | total links
    #[arg(long, value_parser = parse_neighborhood)]
    neighborhood: Option<Neighborhood>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the first network as an edge list and exit.
    #[arg(long)]
    save_graph: Option<PathBuf>,
}

#[derive(Debug, Clone)]
struct AlphaGrid(Vec<f64>);

fn parse_command(s: &str) -> Result<Command, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_neighborhood(s: &str) -> Result<Neighborhood, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_gen(s: &str) -> Result<GraphGenSpec, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [model, n, param] = parts[..] else {
        return Err("expected MODEL,N,PARAM".into());
    };
    let model: GraphModel = model.parse().map_err(|e| format!("{e}"))?;
    let n: usize = n.parse().map_err(|e| format!("bad N {n:?}: {e}"))?;
    let param: f64 = param.parse().map_err(|e| format!("bad PARAM {param:?}: {e}"))?;
    Ok(GraphGenSpec {
        model,
        n,
        param,
        seed: 0,
        directed: false,
    })
}

fn parse_alpha_grid(s: &str) -> Result<AlphaGrid, String> {
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("bad number {x:?}: {e}"));
    if let [start, stop, step] = s.split(':').collect::<Vec<_>>()[..] {
        let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
        if !(step > 0.0) || stop < start {
            return Err("range needs STEP > 0 and STOP >= START".into());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        // rounded to 12 digits so 0.05:1:0.05 lands exactly on 1
        let grid = (0..=count)
            .map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12)
            .collect();
        return Ok(AlphaGrid(grid));
    }
    s.split(',').map(num).collect::<Result<_, _>>().map(AlphaGrid)
}

fn save_graph(cfg: &ExperimentConfig, path: &Path) -> qrank::Result<()> {
    let net = cfg.networks()?.swap_remove(0);
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "# {}: {} nodes, {} edges", net.name, net.graph.node_count(), net.graph.edge_count())?;
    save_edge_list(&net.graph, &mut w)?;
    w.flush()?;
    Ok(())
}

fn build_config(cli: Cli) -> qrank::Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::from_json_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(c) = cli.command {
        cfg.command = c;
    }
    if let Some(g) = cli.graph {
        cfg.graph = Some(g);
        cfg.gen = None;
    }
    if cli.undirected {
        cfg.undirected = true;
    }
    if let Some(g) = cli.gen {
        cfg.gen = Some(g);
        cfg.graph = None;
    }
    if cli.directed {
        if let Some(g) = cfg.gen.as_mut() {
            g.directed = true;
        }
    }
    macro_rules! set {
        ($($field:ident).+ <- $value:expr) => {
            if let Some(v) = $value {
                cfg.$($field).+ = v;
            }
        };
    }
    set!(seed <- cli.seed);
    set!(alpha_grid <- cli.alpha_grid.map(|a| a.0));
    set!(q <- cli.q);
    set!(ensemble <- cli.ensemble);
    set!(integration.dt <- cli.dt);
    set!(integration.epsilon <- cli.epsilon);
    set!(integration.max_time <- cli.max_time);
    set!(qr_alpha <- cli.qr_alpha);
    set!(sizes <- cli.sizes);
    set!(neighborhood <- cli.neighborhood);
    if let Some(o) = cli.out {
        cfg.out = Some(o);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let save_to = cli.save_graph.clone();
    let cfg = match build_config(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(path) = save_to {
        return match save_graph(&cfg, &path) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        };
    }
    match experiments::run(&cfg) {
        Ok(0) => {
            if let Some(out) = &cfg.out {
                println!("wrote {}", out.display());
            }
            ExitCode::SUCCESS
        }
        Ok(failures) => {
            eprintln!("error: {failures} run(s) did not converge before max_time");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
