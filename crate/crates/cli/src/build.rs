//! Zoo builders and their independent dense oracles.

use anyhow::{bail, Result};
use clap::Subcommand;
use nqscps::nqs::{couplings_from_params, nqs_amplitude_marginal, RbmParams};
use nqscps::oracle;
use nqscps::vmc::{chain_rng, BcsReference, PairingMatrix};
use nqscps::zoo::{self, Graph, SectorLabel, TorusLattice, DEFAULT_CANCELLATION_A, DEFAULT_SUPPRESSION};
use nqscps::{Complex64, Config, DenseState, Model, ScaledComplex};
use serde::{Deserialize, Serialize};

use crate::parse;

#[derive(Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "builder", rename_all = "kebab-case")]
pub enum BuildSpec {
    /// Graph state: controlled phases on edges over |+>^N
    Graph {
        #[arg(long)]
        n_sites: usize,
        /// Edge list such as "0-1,1-2"
        #[arg(long, default_value = "")]
        edges: String,
        /// One phase per edge (default pi)
        #[arg(long, allow_hyphen_values = true)]
        phases: Option<String>,
        /// One complex deformation per vertex
        #[arg(long, allow_hyphen_values = true)]
        deformations: Option<String>,
    },
    /// Weighted superposition of deformed graph states
    WeightedGraph {
        #[arg(long)]
        n_sites: usize,
        #[arg(long, default_value = "")]
        edges: String,
        #[arg(long, allow_hyphen_values = true)]
        phases: Option<String>,
        /// Per-branch deformation vectors separated by ';'
        #[arg(long, allow_hyphen_values = true)]
        branches: String,
        /// Branch amplitudes
        #[arg(long, allow_hyphen_values = true)]
        amps: String,
    },
    /// Uniform superposition at fixed Hamming weight
    Number {
        #[arg(long)]
        n_sites: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_CANCELLATION_A)]
        a: f64,
    },
    /// W state with the given amplitudes
    W {
        #[arg(long, allow_hyphen_values = true)]
        amps: String,
    },
    /// Laughlin state on an lx x ly grid of lattice points
    Laughlin {
        #[arg(long)]
        lx: usize,
        #[arg(long)]
        ly: usize,
        #[arg(long, default_value_t = 0.6)]
        spacing: f64,
        #[arg(long, default_value_t = 1)]
        nu: u32,
        #[arg(long)]
        n: usize,
    },
    /// Toric-code ground state in a winding sector
    Toric {
        #[arg(long)]
        lx: usize,
        #[arg(long)]
        ly: usize,
        /// "++", "+-", "-+", "--" or "(1,-1)"
        #[arg(long, default_value = "++", allow_hyphen_values = true)]
        sector: String,
    },
    /// Fully packed loop state on the bond qubits of a torus
    Fpl {
        #[arg(long)]
        lx: usize,
        #[arg(long)]
        ly: usize,
    },
    /// Dimer state on the bond qubits of a torus
    Dimer {
        #[arg(long)]
        lx: usize,
        #[arg(long)]
        ly: usize,
    },
    /// Nearest-neighbour RVB state as a two-layer model
    Rvb {
        #[arg(long)]
        lx: usize,
        #[arg(long)]
        ly: usize,
    },
    /// Arbitrary sparse state, "bits:amp,..."
    Universal {
        #[arg(long, allow_hyphen_values = true)]
        targets: String,
        #[arg(long, default_value_t = DEFAULT_SUPPRESSION)]
        s: f64,
    },
    /// Random RBM parameters, the starting point for optimisation
    Rbm {
        #[arg(long)]
        n_sites: usize,
        #[arg(long)]
        hidden: usize,
        #[arg(long, default_value_t = 0.1)]
        scale: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Complex rather than real entries
        #[arg(long)]
        complex: bool,
    },
}

fn graph(n: usize, edges: &str, phases: &Option<String>) -> Result<Graph> {
    let mut g = Graph::new(n, parse::edges(edges)?)?;
    if let Some(p) = phases {
        g = g.with_phases(parse::real_list(p)?)?;
    }
    Ok(g)
}

fn torus(lx: usize, ly: usize) -> Result<TorusLattice> {
    Ok(TorusLattice::new(lx, ly)?)
}

fn grid(lx: usize, ly: usize, spacing: f64) -> Vec<Complex64> {
    (0..lx * ly)
        .map(|k| Complex64::new((k % lx) as f64, (k / lx) as f64) * spacing)
        .collect()
}

fn branches(s: &str) -> Result<Vec<Vec<Complex64>>> {
    s.split(';').map(parse::complex_list).collect()
}

impl BuildSpec {
    pub fn name(&self) -> &'static str {
        match self {
            BuildSpec::Graph { .. } => "graph",
            BuildSpec::WeightedGraph { .. } => "weighted-graph",
            BuildSpec::Number { .. } => "number",
            BuildSpec::W { .. } => "w",
            BuildSpec::Laughlin { .. } => "laughlin",
            BuildSpec::Toric { .. } => "toric",
            BuildSpec::Fpl { .. } => "fpl",
            BuildSpec::Dimer { .. } => "dimer",
            BuildSpec::Rvb { .. } => "rvb",
            BuildSpec::Universal { .. } => "universal",
            BuildSpec::Rbm { .. } => "rbm",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            BuildSpec::Rbm { seed, .. } => Some(*seed),
            _ => None,
        }
    }

    pub fn build(&self) -> Result<Model> {
        Ok(match self {
            BuildSpec::Graph { n_sites, edges, phases, deformations } => {
                let mut g = graph(*n_sites, edges, phases)?;
                if let Some(d) = deformations {
                    g = g.with_deformations(parse::complex_list(d)?)?;
                }
                Model::Nqs(zoo::build_graph_state_nqs(&g))
            }
            BuildSpec::WeightedGraph { n_sites, edges, phases, branches: b, amps } => {
                let g = graph(*n_sites, edges, phases)?;
                Model::Nqs(zoo::build_weighted_graph_superposition(&g, &branches(b)?, &parse::complex_list(amps)?)?)
            }
            BuildSpec::Number { n_sites, n, a } => Model::Nqs(zoo::build_uniform_number_nqs_with(*n_sites, *n, *a)?),
            BuildSpec::W { amps } => Model::Nqs(zoo::build_w_state_nqs(&parse::complex_list(amps)?)?),
            BuildSpec::Laughlin { lx, ly, spacing, nu, n } => {
                Model::Nqs(zoo::build_laughlin_nqs(&grid(*lx, *ly, *spacing), *nu, *n)?)
            }
            BuildSpec::Toric { lx, ly, sector } => {
                let s: SectorLabel = sector.parse()?;
                Model::Nqs(zoo::build_toric_code_nqs(&torus(*lx, *ly)?, s)?)
            }
            BuildSpec::Fpl { lx, ly } => Model::Nqs(zoo::build_fpl_nqs(&torus(*lx, *ly)?)?),
            BuildSpec::Dimer { lx, ly } => Model::Nqs(zoo::build_dimer_nqs(&torus(*lx, *ly)?)?),
            BuildSpec::Rvb { lx, ly } => Model::Nqs(zoo::build_rvb_deep_nqs(&torus(*lx, *ly)?)?),
            BuildSpec::Universal { targets, s } => Model::Nqs(zoo::universal_nqs(&parse::targets(targets)?, *s)?),
            BuildSpec::Rbm { n_sites, hidden, scale, seed, complex } => {
                let mut rng = chain_rng(*seed, 0);
                Model::Rbm(if *complex {
                    RbmParams::random(*n_sites, *hidden, *scale, &mut rng)
                } else {
                    RbmParams::random_real(*n_sites, *hidden, *scale, &mut rng)
                })
            }
        })
    }

    /// The state the builder should produce, constructed without the zoo.
    pub fn oracle(&self, cap: usize) -> Result<DenseState> {
        Ok(match self {
            BuildSpec::Graph { n_sites, edges, phases, deformations } => {
                let mut g = graph(*n_sites, edges, phases)?;
                if let Some(d) = deformations {
                    g = g.with_deformations(parse::complex_list(d)?)?;
                }
                oracle::graph_state_circuit(&g)?
            }
            BuildSpec::WeightedGraph { n_sites, edges, phases, branches: b, amps } => {
                let g = graph(*n_sites, edges, phases)?;
                let amps = parse::complex_list(amps)?;
                let mut psi = DenseState::zeros(*n_sites);
                for (d, a) in branches(b)?.into_iter().zip(amps) {
                    let branch = oracle::graph_state_circuit(&g.clone().with_deformations(d)?)?;
                    psi = psi.add(&branch.scaled(ScaledComplex::from(a)))?;
                }
                psi
            }
            BuildSpec::Number { n_sites, n, .. } => oracle::number_sector_state(*n_sites, *n)?,
            BuildSpec::W { amps } => oracle::w_state(&parse::complex_list(amps)?),
            BuildSpec::Laughlin { lx, ly, spacing, nu, n } => oracle::laughlin_state(&grid(*lx, *ly, *spacing), *nu, *n)?,
            BuildSpec::Toric { lx, ly, sector } => oracle::toric_loop_state(&torus(*lx, *ly)?, sector.parse()?)?,
            BuildSpec::Fpl { lx, ly } => oracle::fpl_state(&torus(*lx, *ly)?)?,
            BuildSpec::Dimer { lx, ly } => oracle::dimer_state(&torus(*lx, *ly)?)?,
            BuildSpec::Rvb { lx, ly } => oracle::rvb_state(&torus(*lx, *ly)?, &[])?,
            BuildSpec::Universal { targets, .. } => {
                let t = parse::targets(targets)?;
                let n = t.first().map_or(0, |x| x.0.len());
                let mut psi = DenseState::zeros(n);
                for (v, a) in t {
                    psi.set(&v, ScaledComplex::from(a));
                }
                psi
            }
            BuildSpec::Rbm { .. } => {
                let Model::Rbm(p) = self.build()? else { unreachable!() };
                let src = nqscps::FnAmplitude::new(p.n_visible(), |v: &Config| {
                    nqs_amplitude_marginal(&p, v).expect("hidden layer within the marginal cap")
                });
                DenseState::from_source(&src, cap)?
            }
        })
    }

    /// Alternative oracles selectable by name.
    pub fn named_oracle(&self, name: &str, cap: usize) -> Result<DenseState> {
        match (name, self) {
            ("auto", _) => self.oracle(cap),
            ("bcs", BuildSpec::Rvb { lx, ly }) => {
                let lat = torus(*lx, *ly)?;
                Ok(DenseState::from_source(&BcsReference::new(PairingMatrix::s_plus_id(&lat))?, cap)?)
            }
            ("nqs", BuildSpec::Rbm { .. }) => {
                let Model::Rbm(p) = self.build()? else { unreachable!() };
                Ok(DenseState::from_source(&couplings_from_params(&p), cap)?)
            }
            _ => bail!("oracle {name:?} is not available for a {} model", self.name()),
        }
    }
}
