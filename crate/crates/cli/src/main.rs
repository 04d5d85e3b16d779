//! `qmce`: key generation, classical McEliece, the quantum scheme demo and
//! the attack experiments, all seeded and writing JSON.
//!
//! Exit codes: 0 success, 2 invalid input, 3 decoding failure, 4 resource
//! cap exceeded, 1 anything else (I/O).

mod io;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use qmce_core::attacks::experiments::{
    bit_recovery_experiment, distribution_attack_experiment, replicate_greedy_full,
    replicate_small_exhaustive_resumable, BitRecoveryParams, ColumnLeader, GreedyFullParams,
    SchemeKeys, SchemeKind, SmallExhaustiveParams,
};
use qmce_core::attacks::{parity_zero_prob, SearchConfig, Strategy};
use qmce_core::format::{BitsFile, PrivateKeyFile, PublicKeyFile, StateFile};
use qmce_core::goppa::{encrypt, GoppaCode, McElieceKeyPair};
use qmce_core::qsim::QuantumState;
use qmce_core::report::ExperimentReport;
use qmce_core::schemes::{toy_keypair, toy_twice_keypair};
use qmce_core::{Error, Seed};

use crate::io::{read_json, write_atomic, write_json};

#[derive(Parser)]
#[command(name = "qmce", version, about = "Quantum McEliece schemes and right-inverse attack experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a Goppa-code McEliece key pair.
    Keygen(KeygenArgs),
    /// Encrypt a message file with a public key.
    Encrypt(EncryptArgs),
    /// Decrypt a cipher file with a private key.
    Decrypt(DecryptArgs),
    /// Run the once/twice quantum scheme end to end at toy size.
    Qdemo(QdemoArgs),
    /// Run a right-inverse attack experiment.
    Attack(AttackArgs),
    /// Exact probability that a weight-t error has even overlap with a weight-w vector.
    Parity(ParityArgs),
}

#[derive(Args)]
struct KeygenArgs {
    /// Field degree (GF(2^m)).
    #[arg(long)]
    m: u32,
    /// Goppa polynomial degree (error capacity).
    #[arg(long)]
    t: usize,
    /// Shortened code length; defaults to 2^m.
    #[arg(long)]
    n: Option<usize>,
    /// Message length; defaults to the full code dimension.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out_public: PathBuf,
    #[arg(long)]
    out_private: PathBuf,
}

#[derive(Args)]
struct EncryptArgs {
    #[arg(long)]
    public: PathBuf,
    /// Message as a bits file.
    #[arg(long)]
    message: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DecryptArgs {
    #[arg(long)]
    private: PathBuf,
    #[arg(long)]
    cipher: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Once,
    Twice,
}

#[derive(Args)]
struct QdemoArgs {
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    /// Message qubits k.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    qubits: u64,
    /// First-layer error weight.
    #[arg(long, default_value_t = 1)]
    t: usize,
    /// Second-layer error weight (twice scheme).
    #[arg(long, default_value_t = 1)]
    t2: usize,
    /// Message state file; a seeded random state when absent.
    #[arg(long)]
    state: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExperimentArg {
    /// Exact coset leaders of a random instance (exhaustive).
    Leaders,
    /// Greedy search on a real Goppa public key.
    GreedyKey,
    /// Per-bit recovery rates of the classical attack on a random instance.
    BitRecovery,
}

#[derive(Args)]
struct AttackArgs {
    #[arg(long, value_enum)]
    strategy: StrategyArg,
    /// Defaults: exhaustive -> leaders, greedy -> greedy-key, random -> bit-recovery.
    #[arg(long, value_enum)]
    experiment: Option<ExperimentArg>,
    #[arg(long, default_value_t = 40)]
    n: usize,
    #[arg(long, default_value_t = 20)]
    k: usize,
    /// Error weight (bit-recovery) or Goppa degree (greedy-key).
    #[arg(long)]
    t: Option<usize>,
    /// Field degree for greedy-key.
    #[arg(long, default_value_t = 10)]
    m: u32,
    /// Number of sampled columns (default: all for leaders, 50 for greedy-key).
    #[arg(long)]
    columns: Option<usize>,
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    /// Random-search budget per column.
    #[arg(long, default_value_t = 100_000)]
    budget: u64,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Permit exhaustive kernels above dimension 24 (2^30 candidates per column at n-k = 30).
    #[arg(long)]
    allow_long: bool,
    /// Progress file for the leaders experiment; resumed when present.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Exhaustive,
    Random,
    Greedy,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Exhaustive => Strategy::Exhaustive,
            StrategyArg::Random => Strategy::Random,
            StrategyArg::Greedy => Strategy::Greedy,
        }
    }
}

#[derive(Args)]
struct ParityArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    t: usize,
    #[arg(long)]
    w: usize,
    /// Print the full record as JSON.
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::DecodingFailure(_)) => 3,
        Some(Error::CapExceeded { .. }) => 4,
        Some(_) => 2,
        None => 1,
    }
}

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    Error::InvalidParameter(msg.into()).into()
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Keygen(a) => keygen(a),
        Command::Encrypt(a) => encrypt_cmd(a),
        Command::Decrypt(a) => decrypt_cmd(a),
        Command::Qdemo(a) => qdemo(a),
        Command::Attack(a) => attack(a),
        Command::Parity(a) => parity(a),
    }
}

fn keygen(a: KeygenArgs) -> Result<()> {
    let seed = Seed(a.seed);
    let code = match a.n {
        Some(n) => GoppaCode::generate_shortened(a.m, a.t, n, seed.derive(0))?,
        None => GoppaCode::generate(a.m, a.t, seed.derive(0))?,
    };
    let k = a.k.unwrap_or(code.k());
    let keys = McElieceKeyPair::generate_with_dimension(code, k, seed.derive(1))?;
    write_json(&a.out_public, &PublicKeyFile::from_key(keys.public()))?;
    write_json(&a.out_private, &PrivateKeyFile::from_keypair(&keys))?;
    let p = keys.public();
    println!("n={} k={} t={}", p.n(), p.k(), p.t);
    Ok(())
}

fn encrypt_cmd(a: EncryptArgs) -> Result<()> {
    let public = read_json::<PublicKeyFile>(&a.public)?.to_key()?;
    let m = read_json::<BitsFile>(&a.message)?.to_bits()?;
    // the error vector stays private to this process
    let (c, _) = encrypt(&public, &m, Seed(a.seed))?;
    write_json(&a.out, &BitsFile::from_bits(&c))
}

fn decrypt_cmd(a: DecryptArgs) -> Result<()> {
    let keys = read_json::<PrivateKeyFile>(&a.private)?.to_keypair()?;
    let c = read_json::<BitsFile>(&a.cipher)?.to_bits()?;
    let m = keys.decrypt(&c)?;
    write_json(&a.out, &BitsFile::from_bits(&m))
}

#[derive(Serialize)]
struct QdemoParams {
    scheme: SchemeKind,
    qubits: usize,
    t: usize,
    t2: Option<usize>,
    n: usize,
    n2: Option<usize>,
    /// Where the message state came from.
    message: String,
    seed: Seed,
}

fn qdemo(a: QdemoArgs) -> Result<()> {
    let seed = Seed(a.seed);
    let k = a.qubits as usize;
    let (psi, message) = match &a.state {
        Some(path) => {
            let psi = read_json::<StateFile>(path)?.to_state()?;
            if psi.num_qubits() != k {
                return Err(invalid(format!("state has {} qubits, --qubits is {k}", psi.num_qubits())));
            }
            (psi, format!("file:{}", path.display()))
        }
        None => (QuantumState::random_state(k, seed.derive(1))?, "random_state(seed.derive(1))".into()),
    };
    let report = match a.scheme {
        SchemeArg::Once => {
            let keys = toy_keypair(k, a.t, seed.derive(0))?;
            let params = QdemoParams {
                scheme: SchemeKind::Once,
                qubits: k,
                t: a.t,
                t2: None,
                n: keys.public().n(),
                n2: None,
                message,
                seed,
            };
            ExperimentReport::run("qdemo", params, |_| {
                distribution_attack_experiment(SchemeKeys::Once(&keys), &psi, seed.derive(2))
                    .map(|r| r.results)
            })?
        }
        SchemeArg::Twice => {
            let keys = toy_twice_keypair(k, a.t, a.t2, seed.derive(0))?;
            let params = QdemoParams {
                scheme: SchemeKind::Twice,
                qubits: k,
                t: a.t,
                t2: Some(a.t2),
                n: keys.first.public().n(),
                n2: Some(keys.second.public().n()),
                message,
                seed,
            };
            ExperimentReport::run("qdemo", params, |_| {
                distribution_attack_experiment(SchemeKeys::Twice(&keys), &psi, seed.derive(2))
                    .map(|r| r.results)
            })?
        }
    };
    write_json(&a.out, &report)?;
    let r = &report.results;
    println!(
        "tv_computational={:e} tv_hadamard={:e} round_trip_fidelity={}",
        r.tv_computational, r.tv_hadamard, r.round_trip_fidelity
    );
    Ok(())
}

fn attack(a: AttackArgs) -> Result<()> {
    let strategy = Strategy::from(a.strategy);
    let experiment = a.experiment.unwrap_or(match strategy {
        Strategy::Exhaustive => ExperimentArg::Leaders,
        Strategy::Greedy => ExperimentArg::GreedyKey,
        Strategy::Random => ExperimentArg::BitRecovery,
    });
    match experiment {
        ExperimentArg::Leaders => {
            if strategy != Strategy::Exhaustive {
                return Err(invalid("the leaders experiment needs --strategy exhaustive"));
            }
            let params = SmallExhaustiveParams {
                n: a.n,
                k: a.k,
                columns: a.columns,
                seed: Seed(a.seed),
                allow_long: a.allow_long,
            };
            let report = match &a.checkpoint {
                Some(path) => leaders_with_checkpoint(params, path)?,
                None => replicate_small_exhaustive_resumable(params, &[], |_| {})?,
            };
            let r = &report.results;
            write_json(&a.out, &report)?;
            println!(
                "columns={} at_most_one={} fraction={} wilson95=[{:.4}, {:.4}]",
                r.columns.len(),
                r.count_at_most_one,
                r.fraction_at_most_one,
                r.wilson_95.0,
                r.wilson_95.1
            );
        }
        ExperimentArg::GreedyKey => {
            if strategy != Strategy::Greedy {
                return Err(invalid("the greedy-key experiment needs --strategy greedy"));
            }
            let params = GreedyFullParams {
                m: a.m,
                t: a.t.unwrap_or(50),
                columns: Some(a.columns.unwrap_or(50)),
                restarts: a.restarts,
                seed: Seed(a.seed),
            };
            let report = replicate_greedy_full(params)?;
            let r = &report.results;
            write_json(&a.out, &report)?;
            println!(
                "n={} k={} columns={} mean_weight={} stddev={:.3} delta_at_mean={:e}",
                r.n,
                r.k,
                r.columns.len(),
                r.mean_weight,
                r.stddev_weight,
                r.parity_at_mean.delta_from_half
            );
        }
        ExperimentArg::BitRecovery => {
            let mut search = SearchConfig::new(strategy);
            search.budget = a.budget;
            search.restarts = a.restarts;
            let params = BitRecoveryParams {
                n: a.n,
                k: a.k,
                t: a.t.unwrap_or(5),
                search,
                trials: a.trials as usize,
                seed: Seed(a.seed),
            };
            let report = bit_recovery_experiment(params)?;
            let r = &report.results;
            write_json(&a.out, &report)?;
            println!(
                "mean_weight={} mean_rate={} chi2={:.3} dof={} max_abs_z={:.3}",
                r.mean_weight, r.mean_empirical_rate, r.chi_squared, r.degrees_of_freedom, r.max_abs_z
            );
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    format: String,
    parameters: SmallExhaustiveParams,
    columns: Vec<ColumnLeader>,
}

const CHECKPOINT_FORMAT: &str = "qmce-leaders-checkpoint/1";

fn leaders_with_checkpoint(
    params: SmallExhaustiveParams,
    path: &Path,
) -> Result<ExperimentReport<SmallExhaustiveParams, qmce_core::attacks::experiments::SmallExhaustiveResults>> {
    let mut state = if path.exists() {
        let cp: Checkpoint = read_json(path)?;
        if cp.format != CHECKPOINT_FORMAT || cp.parameters != params {
            return Err(invalid(format!(
                "checkpoint {} belongs to a different run",
                path.display()
            )));
        }
        eprintln!("resuming with {} finished columns", cp.columns.len());
        cp
    } else {
        Checkpoint {
            format: CHECKPOINT_FORMAT.into(),
            parameters: params.clone(),
            columns: Vec::new(),
        }
    };
    let done = state.columns.clone();
    let mut save_err = None;
    let report = replicate_small_exhaustive_resumable(params, &done, |batch| {
        state.columns.extend_from_slice(batch);
        let text = serde_json::to_vec_pretty(&state).expect("checkpoint serializes");
        if let Err(e) = write_atomic(path, &text) {
            save_err.get_or_insert(e);
        }
        eprintln!("checkpoint: {} columns done", state.columns.len());
    })?;
    if let Some(e) = save_err {
        return Err(e).context("saving checkpoint");
    }
    Ok(report)
}

fn parity(a: ParityArgs) -> Result<()> {
    let p = parity_zero_prob(a.n, a.t, a.w)?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&p)?);
        return Ok(());
    }
    println!("n={} t={} w={}", p.n, p.t, p.w);
    println!("exact={}/{}", p.numerator, p.denominator);
    println!("probability={}", p.probability);
    println!("delta_from_half={:e}", p.delta_from_half);
    Ok(())
}
