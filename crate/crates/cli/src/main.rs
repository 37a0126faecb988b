//! `nqscps`: build, verify, convert, sample and optimise quantum states.
//!
//! Exit codes: 0 success, 1 verification failure or divergence, 2 usage or
//! input error.

mod build;
mod manifest;
mod parse;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use nqscps::cps::{Correlator, CpsModel};
use nqscps::nqs::{couplings_from_params, RbmParams};
use nqscps::vmc::{
    blocked_stats, find_start, local_values, metropolis_sample, optimize_sgd, write_samples, write_trace_csv,
    EstimatorMode, GradientMode, MoveSet, SamplerConfig, SgdConfig,
};
use nqscps::zoo::{nqs_to_mps, DEFAULT_MPS_BOND_CAP};
use nqscps::{
    fidelity, ground_state_exact, max_deviation, spectrum, AmplitudeSource, DenseState, Hamiltonian, Model,
    ModelDocument, DEFAULT_ORACLE_CAP,
};
use serde_json::{json, Value};

use build::BuildSpec;
use manifest::{beside, Recorder};

#[derive(Parser, Debug)]
#[command(name = "nqscps", version, about = "Exactly sampleable NQS and CPS states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a model from the state zoo
    Build {
        #[command(subcommand)]
        spec: BuildSpec,
        /// Model file to write (stdout when omitted)
        #[arg(long, short, global = true)]
        output: Option<PathBuf>,
    },
    /// Compare a model with an independent dense oracle or another model
    Verify {
        model: PathBuf,
        /// "auto" uses the oracle of the recorded builder; "bcs" and "nqs"
        /// select alternatives for rvb and rbm models
        #[arg(long, default_value = "auto")]
        oracle: String,
        /// Compare against this model instead of an oracle
        #[arg(long)]
        against: Option<PathBuf>,
        /// Largest site count expanded densely
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        cap_n: usize,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Convert between representations
    Convert {
        model: PathBuf,
        #[arg(long, value_enum)]
        to: ConvertTarget,
        #[arg(long, default_value_t = DEFAULT_MPS_BOND_CAP)]
        max_bond: usize,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Metropolis samples from a model, with an optional energy estimate
    Sample {
        model: PathBuf,
        /// Recorded samples per chain
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        #[command(flatten)]
        chain: ChainArgs,
        #[command(flatten)]
        ham: HamArgs,
        /// Start at this Hamming weight
        #[arg(long)]
        weight: Option<usize>,
        /// Output directory
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Stochastic gradient descent of RBM parameters
    Optimize {
        #[command(flatten)]
        ham: HamArgs,
        /// Starting RBM model (random when omitted)
        #[arg(long)]
        model: Option<PathBuf>,
        /// Hidden units of the random start (default: number of sites)
        #[arg(long)]
        hidden: Option<usize>,
        #[arg(long, default_value_t = 0.3)]
        init_scale: f64,
        /// Complex random start
        #[arg(long)]
        complex_init: bool,
        #[arg(long, default_value_t = 0.3)]
        rate: f64,
        /// Gradient steps
        #[arg(long, default_value_t = 3000)]
        steps: usize,
        /// Samples per chain per step (sampled estimator only)
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, value_enum, default_value_t = Estimator::Auto)]
        estimator: Estimator,
        #[arg(long, value_enum, default_value_t = Gradient::Real)]
        gradient: Gradient,
        /// Output directory
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Write a preset Hamiltonian in the text format
    Hamiltonian {
        /// e.g. "tfim:n=6,j=1,h=1", "toric:lx=2,ly=2"
        preset: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Exact diagonalisation reference
    Exact {
        #[command(flatten)]
        ham: HamArgs,
        #[arg(long, default_value_t = 4)]
        levels: usize,
    },
    /// Rerun the command recorded in a manifest
    Replay {
        manifest: PathBuf,
        /// Write outputs here instead of the recorded location
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConvertTarget {
    /// Single-layer NQS to a bond-diagonal MPS (as a one-correlator CPS)
    Mps,
    /// RBM parameters to coupling matrices
    Nqs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Moves {
    SingleFlip,
    PairExchange,
    Mixed,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Estimator {
    Auto,
    Exact,
    Sampled,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Gradient {
    Real,
    Complex,
}

#[derive(Args, Debug)]
struct ChainArgs {
    #[arg(long, default_value_t = 1000)]
    burn_in: usize,
    #[arg(long, default_value_t = 1)]
    thinning: usize,
    #[arg(long, default_value_t = 4)]
    chains: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Moves::SingleFlip)]
    moves: Moves,
    /// Pair-exchange probability for mixed moves
    #[arg(long, default_value_t = 0.5)]
    exchange: f64,
}

impl ChainArgs {
    fn moves(&self) -> MoveSet {
        match self.moves {
            Moves::SingleFlip => MoveSet::SingleFlip,
            Moves::PairExchange => MoveSet::PairExchange,
            Moves::Mixed => MoveSet::Mixed { exchange: self.exchange },
        }
    }

    fn sampler(&self, steps: usize) -> SamplerConfig {
        SamplerConfig {
            steps,
            burn_in: self.burn_in,
            thinning: self.thinning,
            chains: self.chains,
            seed: self.seed,
        }
    }
}

#[derive(Args, Debug)]
struct HamArgs {
    /// Hamiltonian in the text format
    #[arg(long, conflicts_with = "preset")]
    hamiltonian: Option<PathBuf>,
    /// Hamiltonian preset, e.g. "tfim:n=6,j=1,h=1"
    #[arg(long)]
    preset: Option<String>,
}

impl HamArgs {
    fn load(&self) -> Result<Option<Hamiltonian>> {
        match (&self.hamiltonian, &self.preset) {
            (Some(p), _) => {
                let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                Ok(Some(text.parse()?))
            }
            (None, Some(s)) => Ok(Some(parse::preset(s)?)),
            (None, None) => Ok(None),
        }
    }

    fn require(&self) -> Result<Hamiltonian> {
        self.load()?
            .ok_or_else(|| anyhow!("a Hamiltonian is required (--hamiltonian FILE or --preset SPEC)"))
    }
}

/// A command ran but its check failed (exit code 1).
#[derive(Debug)]
struct Failure(String);

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Failure {}

fn print_json(v: &Value) -> Result<()> {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{}", serde_json::to_string_pretty(v)?)?;
    Ok(())
}

fn load_model(path: &Path) -> Result<ModelDocument> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    ModelDocument::from_json(&text).with_context(|| format!("loading model {}", path.display()))
}

fn write_model(path: &Path, doc: &ModelDocument) -> Result<()> {
    fs::write(path, doc.to_json()? + "\n").with_context(|| format!("writing {}", path.display()))
}

fn summary(doc: &ModelDocument) -> Value {
    let layer2 = match &doc.model {
        Model::Nqs(m) => m.layer2().map(|l| l.iter().map(|u| u.dim()).collect::<Vec<_>>()),
        _ => None,
    };
    json!({
        "kind": doc.model.kind(),
        "n_sites": doc.model.n_sites(),
        "n_hidden": doc.model.unit_dims().len(),
        "unit_dims": doc.model.unit_dims(),
        "layer2_dims": layer2,
    })
}

fn cmd_build(spec: &BuildSpec, output: Option<&Path>, rec: Recorder) -> Result<()> {
    let model = spec.build()?;
    let doc = ModelDocument::new(model, Some(serde_json::to_value(spec)?));
    let info = summary(&doc);
    match output {
        Some(p) => {
            write_model(p, &doc)?;
            rec.finish(spec.seed(), vec![p.to_path_buf()]).write(&beside(p))?;
            print_json(&info)
        }
        None => {
            eprintln!("{}", serde_json::to_string(&info)?);
            println!("{}", doc.to_json()?);
            Ok(())
        }
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        bail!("refusing to expand {n} sites densely: the cap is {cap} (raise it with --cap-n)");
    }
    Ok(())
}

fn cmd_verify(model: &Path, oracle: &str, against: Option<&Path>, cap: usize, tol: f64) -> Result<()> {
    let doc = load_model(model)?;
    let n = doc.model.n_sites();
    check_cap(n, cap)?;
    let (reference, label) = match against {
        Some(p) => {
            let other = load_model(p)?;
            check_cap(other.model.n_sites(), cap)?;
            (DenseState::from_source(&other.model, cap)?, format!("model {}", p.display()))
        }
        None => {
            let src = doc
                .source
                .clone()
                .ok_or_else(|| anyhow!("model has no recorded builder; use --against"))?;
            let spec: BuildSpec = serde_json::from_value(src).context("model source is not a builder record")?;
            (spec.named_oracle(oracle, cap)?, format!("{} oracle ({oracle})", spec.name()))
        }
    };
    let psi = DenseState::from_source(&doc.model, cap)?;
    let f = fidelity(&psi, &reference)?;
    let dev = max_deviation(&psi, &reference)?;
    let pass = 1.0 - f <= tol;
    print_json(&json!({
        "model": model,
        "reference": label,
        "fidelity": f,
        "infidelity": 1.0 - f,
        "max_deviation": dev,
        "tolerance": tol,
        "result": if pass { "PASS" } else { "FAIL" },
    }))?;
    if !pass {
        return Err(Failure(format!("fidelity {f} is below 1 - {tol:e}")).into());
    }
    Ok(())
}

fn cmd_convert(model: &Path, to: ConvertTarget, max_bond: usize, output: &Path, rec: Recorder) -> Result<()> {
    let doc = load_model(model)?;
    let converted = match (to, &doc.model) {
        (ConvertTarget::Mps, Model::Nqs(m)) => {
            let n = m.n_sites();
            Model::Cps(CpsModel::new(n, vec![Correlator::Mps(nqs_to_mps(m, max_bond)?)])?)
        }
        (ConvertTarget::Mps, Model::Rbm(p)) => {
            let m = couplings_from_params(p);
            Model::Cps(CpsModel::new(m.n_sites(), vec![Correlator::Mps(nqs_to_mps(&m, max_bond)?)])?)
        }
        (ConvertTarget::Nqs, Model::Rbm(p)) => Model::Nqs(couplings_from_params(p)),
        (t, m) => bail!("cannot convert a {} model to {t:?}", m.kind()),
    };
    let source = json!({ "converted_from": model, "to": format!("{to:?}").to_lowercase(), "original": doc.source });
    let out = ModelDocument::new(converted, Some(source));
    write_model(output, &out)?;
    rec.finish(None, vec![output.to_path_buf()]).write(&beside(output))?;
    print_json(&summary(&out))
}

fn cmd_sample(
    model: &Path,
    steps: usize,
    chain: &ChainArgs,
    ham: &HamArgs,
    weight: Option<usize>,
    output: &Path,
    rec: Recorder,
) -> Result<()> {
    let doc = load_model(model)?;
    let h = ham.load()?;
    let cfg = chain.sampler(steps);
    let start = find_start(&doc.model, weight, cfg.seed)?;
    let stream = metropolis_sample(&doc.model, chain.moves(), &cfg, &start)?;
    fs::create_dir_all(output)?;
    let samples_path = output.join("samples.txt");
    let mut f = std::io::BufWriter::new(fs::File::create(&samples_path)?);
    write_samples(&mut f, &stream)?;
    f.flush()?;
    let energy = match &h {
        Some(h) => {
            let vals = local_values(&doc.model, h, &stream)?;
            let (mean, stderr) = blocked_stats(&vals);
            json!({ "mean": mean.re, "mean_imag": mean.im, "stderr": stderr })
        }
        None => Value::Null,
    };
    let report = json!({
        "samples": stream.len(),
        "chains": cfg.chains,
        "acceptance": stream.acceptance(),
        "chain_acceptance": stream.chains.iter().map(|c| c.acceptance()).collect::<Vec<_>>(),
        "start": start.to_string(),
        "energy": energy,
    });
    let report_path = output.join("report.json");
    fs::write(&report_path, serde_json::to_string_pretty(&report)? + "\n")?;
    rec.finish(Some(cfg.seed), vec![samples_path, report_path]).write(&output.join("manifest.json"))?;
    print_json(&report)
}

#[allow(clippy::too_many_arguments)]
fn cmd_optimize(
    ham: &HamArgs,
    model: Option<&Path>,
    hidden: Option<usize>,
    init_scale: f64,
    complex_init: bool,
    rate: f64,
    steps: usize,
    samples: usize,
    chain: &ChainArgs,
    estimator: Estimator,
    gradient: Gradient,
    output: &Path,
    rec: Recorder,
) -> Result<()> {
    let h = ham.require()?;
    let n = h.n_sites();
    let start = match model {
        Some(p) => match load_model(p)?.model {
            Model::Rbm(params) => params,
            m => bail!("optimisation needs an rbm model, {} is a {} model", p.display(), m.kind()),
        },
        None => {
            let mut rng = nqscps::vmc::chain_rng(chain.seed, usize::MAX - 1);
            let m = hidden.unwrap_or(n);
            if complex_init {
                RbmParams::random(n, m, init_scale, &mut rng)
            } else {
                RbmParams::random_real(n, m, init_scale, &mut rng)
            }
        }
    };
    let cfg = SgdConfig {
        rate,
        steps,
        sampler: chain.sampler(samples),
        estimator: match estimator {
            Estimator::Auto => EstimatorMode::Auto,
            Estimator::Exact => EstimatorMode::Exact,
            Estimator::Sampled => EstimatorMode::Sampled,
        },
        gradient: match gradient {
            Gradient::Real => GradientMode::Real,
            Gradient::Complex => GradientMode::Complex,
        },
    };
    let out = optimize_sgd(&start, &h, chain.moves(), &cfg)?;
    fs::create_dir_all(output)?;
    let trace_path = output.join("trace.csv");
    let mut f = std::io::BufWriter::new(fs::File::create(&trace_path)?);
    write_trace_csv(&mut f, &out.trace)?;
    f.flush()?;
    let model_path = output.join("model.json");
    let source = json!({ "optimized": { "steps": steps, "rate": rate, "seed": chain.seed } });
    write_model(&model_path, &ModelDocument::new(Model::Rbm(out.params.clone()), Some(source)))?;
    let exact = if n <= nqscps::exact::DEFAULT_ED_CAP { Some(ground_state_exact(&h)?.0) } else { None };
    let fin = out.final_energy();
    let report = json!({
        "n_sites": n,
        "n_hidden": out.params.n_hidden(),
        "steps": out.trace.len().saturating_sub(1),
        "final_energy": fin,
        "final_stderr": out.trace.last().map(|r| r.stderr),
        "exact_energy": exact,
        "relative_error": exact.map(|e| (fin - e).abs() / e.abs()),
        "diverged_at": out.diverged_at,
    });
    let report_path = output.join("report.json");
    fs::write(&report_path, serde_json::to_string_pretty(&report)? + "\n")?;
    rec.finish(Some(chain.seed), vec![trace_path, model_path, report_path])
        .write(&output.join("manifest.json"))?;
    print_json(&report)?;
    if let Some(step) = out.diverged_at {
        return Err(Failure(format!("energy diverged at step {step}; trace written")).into());
    }
    Ok(())
}

fn cmd_hamiltonian(preset: &str, output: Option<&Path>, rec: Recorder) -> Result<()> {
    let h = parse::preset(preset)?;
    let text = h.to_text();
    match output {
        Some(p) => {
            fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?;
            rec.finish(None, vec![p.to_path_buf()]).write(&beside(p))?;
            print_json(&json!({ "n_sites": h.n_sites(), "terms": h.terms().len(), "output": p }))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_exact(ham: &HamArgs, levels: usize) -> Result<()> {
    let h = ham.require()?;
    let (e0, _) = ground_state_exact(&h)?;
    let spec = spectrum(&h)?;
    print_json(&json!({
        "n_sites": h.n_sites(),
        "ground_energy": e0,
        "levels": spec.iter().take(levels).collect::<Vec<_>>(),
    }))
}

/// Replaces the value of `--output`/`-o` in recorded arguments.
fn override_output(args: &mut Vec<String>, out: &Path) {
    let o = out.display().to_string();
    for i in 0..args.len() {
        if args[i] == "--output" || args[i] == "-o" {
            if i + 1 < args.len() {
                args[i + 1] = o;
            }
            return;
        }
        if args[i].starts_with("--output=") {
            args[i] = format!("--output={o}");
            return;
        }
    }
    args.push("--output".into());
    args.push(o);
}

fn run(args: Vec<String>) -> Result<()> {
    let cli = match Cli::try_parse_from(std::iter::once("nqscps".to_string()).chain(args.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            e.print()?;
            if code == 0 {
                return Ok(());
            }
            return Err(ClapExit.into());
        }
    };
    let name = args.first().cloned().unwrap_or_default();
    let rec = Recorder::start(&name, &args);
    match &cli.command {
        Command::Build { spec, output } => cmd_build(spec, output.as_deref(), rec),
        Command::Verify { model, oracle, against, cap_n, tolerance } => {
            cmd_verify(model, oracle, against.as_deref(), *cap_n, *tolerance)
        }
        Command::Convert { model, to, max_bond, output } => cmd_convert(model, *to, *max_bond, output, rec),
        Command::Sample { model, steps, chain, ham, weight, output } => {
            cmd_sample(model, *steps, chain, ham, *weight, output, rec)
        }
        Command::Optimize {
            ham,
            model,
            hidden,
            init_scale,
            complex_init,
            rate,
            steps,
            samples,
            chain,
            estimator,
            gradient,
            output,
        } => cmd_optimize(
            ham,
            model.as_deref(),
            *hidden,
            *init_scale,
            *complex_init,
            *rate,
            *steps,
            *samples,
            chain,
            *estimator,
            *gradient,
            output,
            rec,
        ),
        Command::Hamiltonian { preset, output } => cmd_hamiltonian(preset, output.as_deref(), rec),
        Command::Exact { ham, levels } => cmd_exact(ham, *levels),
        Command::Replay { manifest, output } => {
            let m = manifest::RunManifest::read(manifest)?;
            if m.command == "replay" {
                bail!("a replay manifest cannot be replayed");
            }
            let mut args = m.arguments;
            if let Some(o) = output {
                override_output(&mut args, o);
            }
            run(args)
        }
    }
}

/// Clap has already printed its message.
#[derive(Debug)]
struct ClapExit;

impl std::fmt::Display for ClapExit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("usage error")
    }
}

impl std::error::Error for ClapExit {}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<ClapExit>() => ExitCode::from(2),
        Err(e) if e.is::<Failure>() => {
            eprintln!("nqscps: {e:#}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("nqscps: {e:#}");
            ExitCode::from(2)
        }
    }
}
