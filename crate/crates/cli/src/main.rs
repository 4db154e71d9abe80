mod commands;
mod load;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use commands::{RepAction, Run};
use load::Failure;

#[derive(Parser)]
#[command(name = "orthocoord", version, about = "Verify and construct ortholattices, *-regular rings, frames and representations")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a structure.
    Check {
        #[command(subcommand)]
        what: CheckCmd,
    },
    /// Verify or search frames in a finite (ortho)lattice.
    Frame {
        #[command(subcommand)]
        what: FrameCmd,
    },
    /// Orthogonal semiframes from skew 2-frames.
    Semiframe {
        #[command(subcommand)]
        what: SemiframeCmd,
    },
    /// Ring representations `ι: R → End(V)`.
    Rep {
        #[command(subcommand)]
        what: RepCmd,
    },
    /// Coordinatize a lattice of subspaces.
    Coord {
        #[command(subcommand)]
        what: CoordCmd,
    },
    /// From an ortholattice representation of Lat(M_n(F)) to a ring representation.
    Pipeline {
        #[command(subcommand)]
        what: PipelineCmd,
    },
    /// Compare the congruences of Lat(R) with the ideals of R.
    Fact3 { ring: PathBuf },
    /// Print a built-in model as JSON.
    #[command(after_help = commands::MODEL_NAMES)]
    Model { name: String, params: Vec<String> },
    /// Run the end-to-end property suite.
    Demo {
        #[command(subcommand)]
        what: DemoCmd,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    Lattice { file: PathBuf },
    Ortholattice { file: PathBuf },
    Ring { file: PathBuf },
    Space { file: PathBuf },
}

#[derive(Subcommand)]
enum FrameCmd {
    Verify {
        lattice: PathBuf,
        frame: PathBuf,
    },
    Search {
        lattice: PathBuf,
        /// skew, large-partial or semiframe.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: Option<usize>,
    },
}

#[derive(Subcommand)]
enum SemiframeCmd {
    Build { ortholattice: PathBuf, frame: PathBuf },
}

#[derive(Subcommand)]
enum RepCmd {
    /// Multiplicative, unital and injective.
    Verify { rep: PathBuf },
    /// `aR ↦ im ι(a)` is a lattice embedding.
    Induce { rep: PathBuf },
    /// The induced lattice map preserves orthocomplements.
    OrthoCheck { rep: PathBuf },
    /// Certify `ι(a*) = ι(a)*`; the semiframe defaults to one built from the canonical frame.
    RecoverStar { rep: PathBuf, semiframe: Option<PathBuf> },
}

#[derive(Subcommand)]
enum CoordCmd {
    Build { subspaces: PathBuf, frame: PathBuf },
}

#[derive(Subcommand)]
enum PipelineCmd {
    Theorem1 { ring: PathBuf, eta: PathBuf },
}

#[derive(Subcommand)]
enum DemoCmd {
    All,
}

fn dispatch(cmd: &Command, run: &mut Run) -> Result<(), Failure> {
    match cmd {
        Command::Check { what } => match what {
            CheckCmd::Lattice { file } => commands::check_lattice(run, file),
            CheckCmd::Ortholattice { file } => commands::check_ortholattice(run, file),
            CheckCmd::Ring { file } => commands::check_ring(run, file),
            CheckCmd::Space { file } => commands::check_space(run, file),
        },
        Command::Frame { what } => match what {
            FrameCmd::Verify { lattice, frame } => commands::frame_verify(run, lattice, frame),
            FrameCmd::Search { lattice, kind, n, m } => commands::frame_search(run, lattice, kind, *n, *m),
        },
        Command::Semiframe {
            what: SemiframeCmd::Build { ortholattice, frame },
        } => commands::semiframe_build(run, ortholattice, frame),
        Command::Rep { what } => match what {
            RepCmd::Verify { rep } => commands::rep(run, RepAction::Verify, rep, None),
            RepCmd::Induce { rep } => commands::rep(run, RepAction::Induce, rep, None),
            RepCmd::OrthoCheck { rep } => commands::rep(run, RepAction::OrthoCheck, rep, None),
            RepCmd::RecoverStar { rep, semiframe } => {
                commands::rep(run, RepAction::RecoverStar, rep, semiframe.as_deref())
            }
        },
        Command::Coord {
            what: CoordCmd::Build { subspaces, frame },
        } => commands::coord_build(run, subspaces, frame),
        Command::Pipeline {
            what: PipelineCmd::Theorem1 { ring, eta },
        } => commands::pipeline_theorem1(run, ring, eta),
        Command::Fact3 { ring } => commands::fact3(run, ring),
        Command::Demo { what: DemoCmd::All } => commands::demo_all(run),
        Command::Model { .. } => unreachable!("handled before dispatch"),
    }
}

/// Short name of an error variant, used as the claim of a violation.
fn error_claim(e: &orthocoord::Error) -> String {
    let dbg = format!("{e:?}");
    dbg.chars().take_while(|c| c.is_alphanumeric()).collect()
}

fn render_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Writes `text` to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print_demo_items(out: &mut String, items: &Value) {
    for item in items.as_array().into_iter().flatten() {
        let ok = item["passed"].as_bool() == Some(true) && item["elapsed_ms"].as_u64() < item["limit_ms"].as_u64();
        let _ = writeln!(
            out,
            "  {} {:<40} {:>6} ms / {:>6} ms  {}",
            if ok { "PASS" } else { "FAIL" },
            render_value(&item["name"]),
            item["elapsed_ms"],
            item["limit_ms"],
            render_value(&item["detail"])
        );
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo: Vec<String> = std::env::args().collect();
    let echo = echo.join(" ");

    if let Command::Model { name, params } = &cli.command {
        return match commands::model(name, params) {
            Ok(v) => {
                emit(&format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable")));
                ExitCode::SUCCESS
            }
            Err(Failure::Malformed(msg)) => {
                eprintln!("malformed input: {msg}");
                ExitCode::from(2)
            }
            Err(Failure::Violated(e)) => {
                eprintln!("{e}");
                ExitCode::from(1)
            }
        };
    }

    let start = Instant::now();
    let mut run = Run::new(cli.seed);
    let mut malformed = None;
    match dispatch(&cli.command, &mut run) {
        Ok(()) => {}
        Err(Failure::Malformed(msg)) => malformed = Some(msg),
        Err(Failure::Violated(orthocoord::Error::StepFailure { claim, witness })) => run.report.push(claim, witness),
        Err(Failure::Violated(e)) => {
            let claim = error_claim(&e);
            run.report.push(claim, e.to_string());
        }
    }
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let verdict = if malformed.is_some() { "malformed" } else { run.report.verdict() };

    if cli.json {
        let mut details = Map::new();
        for (k, v) in &run.details {
            details.insert(k.clone(), v.clone());
        }
        let mut inputs = Map::new();
        for (k, v) in &run.inputs {
            inputs.insert(k.clone(), v.clone());
        }
        let mut out = json!({
            "command": echo,
            "verdict": verdict,
            "violations": run.report.violations,
            "details": details,
            "input": inputs,
            "seed": cli.seed,
            "elapsed_ms": elapsed_ms,
        });
        if let Some(msg) = &malformed {
            out["error"] = Value::String(msg.clone());
        }
        emit(&format!("{}\n", serde_json::to_string_pretty(&out).expect("serializable")));
    } else {
        let mut out = String::new();
        let _ = writeln!(out, "command: {echo}");
        let _ = writeln!(out, "verdict: {verdict}");
        if let Some(msg) = &malformed {
            let _ = writeln!(out, "error: {msg}");
        }
        for (k, v) in &run.details {
            if k == "items" {
                let _ = writeln!(out, "items:");
                print_demo_items(&mut out, v);
            } else {
                let _ = writeln!(out, "{k}: {}", render_value(v));
            }
        }
        if !run.report.is_pass() {
            let _ = writeln!(out, "violations:");
            for v in &run.report.violations {
                let _ = writeln!(out, "  - {}: {}", v.claim, v.witness);
            }
        }
        let _ = writeln!(out, "seed: {}", cli.seed);
        let _ = writeln!(out, "time: {elapsed_ms:.1} ms");
        emit(&out);
    }

    if malformed.is_some() {
        ExitCode::from(2)
    } else if run.report.is_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
