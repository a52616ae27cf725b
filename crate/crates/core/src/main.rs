//! Command-line front end: build and inspect Cartan data, seeds and
//! ensembles, run mutation sequences, and execute the verification suites
//! with reproducible seeds.
//!
//! Exit codes: 0 on success or all checks passing, 1 on verification
//! failure, 2 on invalid input.

use bcf::cartan::{self, preset, CartanJson, CartanRealization};
use bcf::report::Report;
use bcf::seed::{build_ensemble, build_seed, DoubleWord, Seed};
use bcf::{factor, mutation, reference, sample, slnlab};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "bcf", version, about = "Cluster ensembles on double Bruhat cells, exactly")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Inspect or validate Cartan data.
    Cartan {
        #[command(subcommand)]
        cmd: CartanCmd,
    },
    /// Build a seed from a double reduced word, or mutate one.
    Seed {
        #[command(subcommand)]
        cmd: SeedCmd,
    },
    /// Print B, M, Btilde and det Btilde for a double reduced word.
    Ensemble {
        #[command(flatten)]
        input: CartanInput,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
    },
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
}

#[derive(Subcommand)]
enum CartanCmd {
    /// Print the extended Cartan matrix and realization data.
    Show {
        #[command(flatten)]
        input: CartanInput,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
    },
    /// Validate a generalized Cartan matrix and print its symmetrizers.
    Validate {
        #[command(flatten)]
        input: CartanInput,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum SeedCmd {
    /// Build the seed of a double reduced word.
    Build {
        #[command(flatten)]
        input: CartanInput,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
    },
    /// Mutate the seed along a sequence of unfrozen indices.
    Mutate {
        #[command(flatten)]
        input: CartanInput,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Comma-separated mutation indices, e.g. `1,2,1`.
        #[arg(long, allow_hyphen_values = true)]
        seq: String,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// D*E*F = B + M on random realizations and words.
    DefOracle {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
    },
    /// Laurent property of mutated cluster variables.
    Laurent {
        #[command(flatten)]
        input: CartanInput,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, default_value_t = 4)]
        max_depth: usize,
        #[arg(long, default_value_t = 50)]
        random_sequences: usize,
        #[arg(long, default_value_t = 5)]
        random_length: usize,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
    },
    /// Commutation of mutation with the modified ensemble map.
    EnsembleCommute {
        #[command(flatten)]
        input: CartanInput,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
    },
    /// Symbolic Poisson brackets of the X-coordinate pullbacks.
    Poisson {
        #[command(flatten)]
        input: CartanInput,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Chamber ansatz and X-to-A identities in SL_n at random points.
    Sln {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
    },
    /// Reproduce the worked affine example matrices exactly.
    PaperExample,
}

#[derive(Args)]
struct CartanInput {
    /// Named preset: A2, B2, G2, or A1affine.
    #[arg(long)]
    preset: Option<String>,
    /// Inline Cartan JSON: {"r":..,"C":[[..]],"d":[..],"extension":[[..]]}.
    #[arg(long)]
    cartan_json: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

struct InputError(String);

impl CartanInput {
    fn resolve(&self) -> Result<Arc<CartanRealization>, InputError> {
        match (&self.preset, &self.cartan_json) {
            (Some(name), None) => {
                preset(name).map(Arc::new).map_err(|e| InputError(e.to_string()))
            }
            (None, Some(text)) => {
                let json: CartanJson = serde_json::from_str(text)
                    .map_err(|e| InputError(format!("bad Cartan JSON: {e}")))?;
                CartanRealization::from_json(&json)
                    .map(Arc::new)
                    .map_err(|e| InputError(e.to_string()))
            }
            _ => Err(InputError("provide exactly one of --preset or --cartan-json".into())),
        }
    }
}

fn parse_int_list(text: &str) -> Result<Vec<i64>, InputError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<i64>()
                .map_err(|_| InputError(format!("bad integer '{part}' in list")))
        })
        .collect()
}

fn parse_word(real: &Arc<CartanRealization>, text: &str) -> Result<DoubleWord, InputError> {
    let letters = parse_int_list(text)?;
    DoubleWord::parse(real.clone(), &letters).map_err(|e| InputError(e.to_string()))
}

#[derive(Serialize)]
struct RealizationJson {
    #[serde(flatten)]
    core: CartanJson,
    rtilde: usize,
    #[serde(rename = "Cfull")]
    cfull: Vec<Vec<i64>>,
    dfull: Vec<i64>,
    #[serde(rename = "D")]
    dcap: i64,
    auto_extension: bool,
}

fn realization_json(real: &CartanRealization) -> RealizationJson {
    RealizationJson {
        core: real.to_json(),
        rtilde: real.rtilde(),
        cfull: real.cfull().rows_vec(),
        dfull: real.dfull().to_vec(),
        dcap: real.dcap(),
        auto_extension: real.auto_extension(),
    }
}

fn print_seed_pretty(seed: &Seed) {
    println!("index set: {:?}", seed.index_set());
    println!("frozen:    {:?}", seed.frozen_flags());
    println!(
        "weights:   {:?}",
        seed.index_set().iter().map(|&k| seed.weight_of(k).unwrap()).collect::<Vec<_>>()
    );
    println!("d:         {:?}", seed.d_seed());
    println!("B =");
    print!("{}", seed.b());
}

/// Worker count for trial fan-out, capped by the BCF_THREADS environment
/// variable.
fn worker_count(trials: usize) -> usize {
    let hw = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let cap = std::env::var("BCF_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v >= 1)
        .unwrap_or(hw);
    cap.min(hw).min(trials.max(1))
}

/// Run independent trials, fanned out to worker threads; output ordering is
/// fixed by the trial index regardless of scheduling.
fn run_trials<F>(trials: usize, f: F) -> Report
where
    F: Fn(u64) -> Report + Sync,
{
    let workers = worker_count(trials);
    let mut merged = Report::new();
    if workers <= 1 {
        for trial in 0..trials {
            merged.extend(f(trial as u64));
        }
        return merged;
    }
    let slots: Vec<std::sync::Mutex<Option<Report>>> =
        (0..trials).map(|_| std::sync::Mutex::new(None)).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let trial = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if trial >= trials {
                    break;
                }
                let report = f(trial as u64);
                *slots[trial].lock().unwrap() = Some(report);
            });
        }
    });
    for slot in slots {
        merged.extend(slot.into_inner().unwrap().expect("every trial ran"));
    }
    merged
}

fn emit_report(report: &Report) -> ExitCode {
    print!("{}", report.to_json_lines());
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run() -> Result<ExitCode, InputError> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Cartan { cmd } => match cmd {
            CartanCmd::Show { input, format } => {
                let real = input.resolve()?;
                match format {
                    Format::Json => {
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&realization_json(&real)).unwrap()
                        );
                    }
                    Format::Pretty => {
                        println!(
                            "rank r = {}, rtilde = {}, d = {:?}, D = {}{}",
                            real.r(),
                            real.rtilde(),
                            real.dfull(),
                            real.dcap(),
                            if real.auto_extension() { " (auto extension)" } else { "" }
                        );
                        println!("extended Cartan matrix:");
                        print!("{}", real.cfull());
                    }
                }
                Ok(ExitCode::SUCCESS)
            }
            CartanCmd::Validate { input, format } => {
                let real = input.resolve()?;
                match format {
                    Format::Json => {
                        println!("{}", serde_json::to_string(&real.to_json()).unwrap());
                    }
                    Format::Pretty => {
                        println!(
                            "valid symmetrizable generalized Cartan matrix; d = {:?}",
                            real.core().symmetrizers()
                        );
                    }
                }
                Ok(ExitCode::SUCCESS)
            }
        },
        Cmd::Seed { cmd } => match cmd {
            SeedCmd::Build { input, word, format } => {
                let real = input.resolve()?;
                let word = parse_word(&real, &word)?;
                let seed = build_seed(&word);
                match format {
                    Format::Json => {
                        println!("{}", serde_json::to_string(&seed.to_json()).unwrap());
                    }
                    Format::Pretty => print_seed_pretty(&seed),
                }
                Ok(ExitCode::SUCCESS)
            }
            SeedCmd::Mutate { input, word, seq, format } => {
                let real = input.resolve()?;
                let word = parse_word(&real, &word)?;
                let mut seed = build_seed(&word);
                for k in parse_int_list(&seq)? {
                    seed = mutation::mutate_b(&seed, k)
                        .map_err(|e| InputError(e.to_string()))?;
                }
                match format {
                    Format::Json => {
                        println!("{}", serde_json::to_string(&seed.to_json()).unwrap());
                    }
                    Format::Pretty => print_seed_pretty(&seed),
                }
                Ok(ExitCode::SUCCESS)
            }
        },
        Cmd::Ensemble { input, word, format } => {
            let real = input.resolve()?;
            let word = parse_word(&real, &word)?;
            let seed = build_seed(&word);
            let ens = build_ensemble(&seed).map_err(|e| InputError(e.to_string()))?;
            match format {
                Format::Json => {
                    println!("{}", serde_json::to_string(&ens.to_json(&seed)).unwrap());
                }
                Format::Pretty => {
                    print_seed_pretty(&seed);
                    println!("M =");
                    print!("{}", ens.m);
                    println!("Btilde =");
                    print!("{}", ens.btilde);
                    println!("det Btilde = {}", ens.det_btilde);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { cmd } => {
            let report = match cmd {
                VerifyCmd::DefOracle { trials, rng_seed } => run_trials(trials, |trial| {
                    let mut rng = sample::rng_for(rng_seed, trial);
                    let real = sample::random_realization(&mut rng);
                    let word = sample::random_double_word(&mut rng, &real, 12);
                    factor::oracle_def(&word).expect("word seeds have integral Btilde")
                }),
                VerifyCmd::Laurent {
                    input,
                    word,
                    max_depth,
                    random_sequences,
                    random_length,
                    rng_seed,
                } => {
                    let real = input.resolve()?;
                    let word = parse_word(&real, &word)?;
                    let seed = build_seed(&word);
                    mutation::laurent_suite(
                        &seed,
                        max_depth,
                        random_sequences,
                        random_length,
                        rng_seed,
                    )
                    .map_err(|e| InputError(e.to_string()))?
                }
                VerifyCmd::EnsembleCommute { input, word, trials, rng_seed } => {
                    let real = input.resolve()?;
                    let word = parse_word(&real, &word)?;
                    mutation::verify_ensemble_commute_all(&word, trials, rng_seed)
                        .map_err(|e| InputError(e.to_string()))?
                }
                VerifyCmd::Poisson { input, word } => {
                    let real = input.resolve()?;
                    let word = parse_word(&real, &word)?;
                    mutation::verify_poisson_word(&word)
                }
                VerifyCmd::Sln { n, word, trials, rng_seed } => {
                    if n < 2 {
                        return Err(InputError("SL_n needs n >= 2".into()));
                    }
                    let real = Arc::new(cartan::a_type(n));
                    let word = parse_word(&real, &word)?;
                    run_trials(trials, |trial| {
                        let len = word.m() + word.rtilde();
                        let mut rng = sample::rng_for(rng_seed, trial);
                        let t = sample::positive_vector(&mut rng, len, 100);
                        let mut report = slnlab::verify_thm_main(&word, &t)
                            .expect("positive parameters stay in the cell");
                        report.extend(
                            slnlab::verify_x_to_a(&word, &t)
                                .expect("positive parameters stay in the cell"),
                        );
                        report
                    })
                }
                VerifyCmd::PaperExample => reference::verify_reference_example(),
            };
            Ok(emit_report(&report))
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
