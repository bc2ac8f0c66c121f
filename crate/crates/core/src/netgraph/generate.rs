use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::DirectedGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphModel {
    /// Erdős–Rényi G(n, p) with `p = param / (n - 1)`.
    #[serde(alias = "erdos-renyi")]
    Er,
    /// Barabási–Albert preferential attachment with `m = param`.
    #[serde(alias = "barabasi-albert")]
    Ba,
}

impl FromStr for GraphModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "er" | "erdos-renyi" => Ok(GraphModel::Er),
            "ba" | "sf" | "barabasi-albert" => Ok(GraphModel::Ba),
            other => Err(Error::InvalidParameter(format!("unknown graph model {other:?}"))),
        }
    }
}

impl fmt::Display for GraphModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphModel::Er => "er",
            GraphModel::Ba => "ba",
        })
    }
}

/// Parameters of a synthetic graph.
///
/// `param` is the mean degree for ER and the attachment count `m` for BA.
/// Undirected links are embedded as edge pairs unless `directed` is set, in
/// which case ER draws every ordered pair independently and BA keeps only
/// the new-to-old direction for attachment links.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphGenSpec {
    pub model: GraphModel,
    pub n: usize,
    pub param: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub directed: bool,
}

impl GraphGenSpec {
    pub fn er(n: usize, mean_degree: f64, seed: u64) -> Self {
        Self {
            model: GraphModel::Er,
            n,
            param: mean_degree,
            seed,
            directed: false,
        }
    }

    pub fn ba(n: usize, m: usize, seed: u64) -> Self {
        Self {
            model: GraphModel::Ba,
            n,
            param: m as f64,
            seed,
            directed: false,
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!("n = {} must be at least 2", self.n)));
        }
        if !(self.param >= 1.0) {
            return Err(Error::InvalidParameter(format!("param = {} must be at least 1", self.param)));
        }
        match self.model {
            GraphModel::Er if self.param > (self.n - 1) as f64 => Err(Error::InvalidParameter(format!(
                "mean degree {} exceeds n - 1 = {}",
                self.param,
                self.n - 1
            ))),
            GraphModel::Ba if self.param.fract() != 0.0 => Err(Error::InvalidParameter(format!(
                "BA attachment count must be an integer, got {}",
                self.param
            ))),
            // the seed clique takes m + 1 nodes; at least one must attach
            GraphModel::Ba if self.param as usize + 1 >= self.n => Err(Error::InvalidParameter(format!(
                "BA attachment count m = {} needs n > m + 1, got n = {}",
                self.param, self.n
            ))),
            _ => Ok(()),
        }
    }
}

/// Deterministic graph generation; the same spec always yields the same
/// edge list.
pub fn generate(spec: &GraphGenSpec) -> Result<DirectedGraph> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let edges = match spec.model {
        GraphModel::Er => erdos_renyi(spec.n, spec.param, spec.directed, &mut rng),
        GraphModel::Ba => barabasi_albert(spec.n, spec.param as usize, spec.directed, &mut rng),
    };
    DirectedGraph::new(spec.n, edges)
}

fn erdos_renyi<R: Rng>(n: usize, mean_degree: f64, directed: bool, rng: &mut R) -> Vec<(usize, usize)> {
    let p = mean_degree / (n - 1) as f64;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if directed {
                if rng.gen::<f64>() < p {
                    edges.push((i, j));
                }
                if rng.gen::<f64>() < p {
                    edges.push((j, i));
                }
            } else if rng.gen::<f64>() < p {
                edges.push((i, j));
                edges.push((j, i));
            }
        }
    }
    edges
}

// Seeded with a clique on m + 1 nodes; every later node attaches to m
// distinct existing nodes drawn proportionally to their degree.
fn barabasi_albert<R: Rng>(n: usize, m: usize, directed: bool, rng: &mut R) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    // every node appears here once per incident link
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * n * m);
    for i in 0..=m {
        for j in (i + 1)..=m {
            edges.push((i, j));
            edges.push((j, i));
            endpoints.push(i);
            endpoints.push(j);
        }
    }
    let mut targets = Vec::with_capacity(m);
    for new in (m + 1)..n {
        targets.clear();
        while targets.len() < m {
            let &t = endpoints.choose(rng).expect("seed clique is nonempty");
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((new, t));
            if !directed {
                edges.push((t, new));
            }
            endpoints.push(new);
            endpoints.push(t);
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precondition_errors() {
        assert!(generate(&GraphGenSpec::ba(5, 3, 0)).is_ok());
        assert!(generate(&GraphGenSpec::ba(5, 5, 0)).is_err());
        assert!(generate(&GraphGenSpec::ba(1, 1, 0)).is_err());
        assert!(generate(&GraphGenSpec::er(10, 0.5, 0)).is_err());
        assert!(generate(&GraphGenSpec::er(10, 10.0, 0)).is_err());
        let mut s = GraphGenSpec::ba(10, 2, 0);
        s.param = 2.5;
        assert!(generate(&s).is_err());
    }

    #[test]
    fn ba_without_growth_is_rejected() {
        let spec = GraphGenSpec::ba(5, 4, 1);
        assert!(matches!(generate(&spec), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn reproducible_for_fixed_seed() {
        for spec in [GraphGenSpec::er(50, 4.0, 7), GraphGenSpec::ba(50, 2, 7)] {
            assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
            assert_ne!(
                generate(&spec).unwrap().edges(),
                generate(&spec.with_seed(8)).unwrap().edges()
            );
        }
    }

    #[test]
    fn undirected_models_are_symmetric() {
        assert!(generate(&GraphGenSpec::er(40, 5.0, 3)).unwrap().is_symmetric());
        let g = generate(&GraphGenSpec::ba(40, 3, 3)).unwrap();
        assert!(g.is_symmetric());
        // clique of 4 (6 links) plus 3 links per later node, both directions
        assert_eq!(g.edge_count(), 2 * (6 + 3 * 36));
        assert!((0..40).all(|v| g.total_degree(v) >= 3));
    }

    #[test]
    fn directed_ba_points_new_to_old() {
        let mut spec = GraphGenSpec::ba(30, 2, 5);
        spec.directed = true;
        let g = generate(&spec).unwrap();
        assert!(g.edges().iter().filter(|&&(s, _)| s > 2).all(|&(s, t)| s > t));
        assert_eq!(g.edge_count(), 6 + 2 * 27);
    }

    #[test]
    fn model_parsing() {
        assert_eq!("ER".parse::<GraphModel>().unwrap(), GraphModel::Er);
        assert_eq!("ba".parse::<GraphModel>().unwrap(), GraphModel::Ba);
        assert!("ws".parse::<GraphModel>().is_err());
    }
}
