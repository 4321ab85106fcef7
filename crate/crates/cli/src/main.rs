use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use terrain_guard::io::{bench, generate, profile_altitudes, render_svg, InstanceFile, Loaded, Profile, RenderOptions, SolutionFile};
use terrain_guard::{certify, solve, Coord, Error};

#[derive(Parser)]
#[command(name = "tguard", version, about = "Minimum guarding of 1.5D terrains from an altitude line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one or more instance files ("-" reads stdin).
    Solve {
        #[arg(required = true)]
        inputs: Vec<String>,
        /// Write the solution here instead of stdout (single input only).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write an SVG rendering (single input only).
        #[arg(long)]
        render: Option<PathBuf>,
        /// Draw s/o/c event ticks in the rendering.
        #[arg(long)]
        events: bool,
        /// Fail with exit code 3 unless the certificate is valid.
        #[arg(long)]
        certify: bool,
    },
    /// Re-certify a stored solution against an instance.
    Verify { instance: String, solution: String },
    /// Generate a random instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "random-walk")]
        profile: String,
        #[arg(long, default_value_t = 1)]
        margin: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimum guard count at several altitudes.
    Profile {
        input: String,
        #[arg(long, value_delimiter = ',', required = true)]
        heights: Vec<String>,
    },
    /// Time the solver on generated instances.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "1000,2000,4000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "random-walk")]
        profile: String,
    },
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
    input: Option<String>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            e if e.is_invalid_instance() => (2, "invalid_instance"),
            Error::InvalidArgument(_) => (1, "invalid_argument"),
            Error::Io(_) => (1, "io"),
            _ => (1, "internal"),
        };
        Failure { code, kind, message: e.to_string(), input: None }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::from(Error::Io(e))
    }
}

impl Failure {
    fn certification(message: String) -> Failure {
        Failure { code: 3, kind: "certification_failed", message, input: None }
    }

    fn with_input(mut self, input: &str) -> Failure {
        self.input.get_or_insert_with(|| input.to_string());
        self
    }

    fn report(&self) {
        let mut v = serde_json::json!({ "error": self.kind, "message": self.message, "exit_code": self.code });
        if let Some(i) = &self.input {
            v["input"] = serde_json::Value::String(i.clone());
        }
        eprintln!("{v}");
    }
}

type Outcome<T = ()> = std::result::Result<T, Failure>;

fn read_input(path: &str) -> Outcome<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(fs::read_to_string(path)?)
    }
}

fn load(path: &str) -> Outcome<Loaded> {
    let text = read_input(path)?;
    Ok(InstanceFile::from_json(&text)?.load()?)
}

fn emit(text: &str, out: Option<&Path>) -> Outcome {
    match out {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

struct Solved {
    file: SolutionFile,
    svg: Option<String>,
}

fn solve_one(path: &str, render: bool, events: bool, require_valid: bool) -> Outcome<Solved> {
    let loaded = load(path)?;
    let inst = loaded.instance();
    let sol = solve(inst)?;
    let cert = certify(&sol, inst);
    let svg = render.then(|| render_svg(inst, Some(&sol), Some(&cert), &RenderOptions { events, ..RenderOptions::default() }));
    if require_valid && !cert.valid() {
        return Err(Failure::certification(format!(
            "counts_match={} pairwise_disjoint={} coverage_ok={}",
            cert.counts_match, cert.pairwise_disjoint, cert.coverage_ok
        )));
    }
    Ok(Solved { file: SolutionFile::new(&loaded, &sol, &cert), svg })
}

fn cmd_solve(inputs: &[String], out: Option<&Path>, render: Option<&Path>, events: bool, require_valid: bool) -> Outcome {
    if inputs.len() == 1 {
        let s = solve_one(&inputs[0], render.is_some(), events, require_valid).map_err(|f| f.with_input(&inputs[0]))?;
        if let (Some(p), Some(svg)) = (render, &s.svg) {
            fs::write(p, svg)?;
        }
        return emit(&s.file.to_json(), out);
    }
    if out.is_some() || render.is_some() {
        return Err(Error::InvalidArgument("--out and --render take a single input".into()).into());
    }
    if inputs.iter().any(|i| i == "-") {
        return Err(Error::InvalidArgument("stdin cannot be part of a batch".into()).into());
    }
    // each instance is solved sequentially; instances run in parallel
    let results: Vec<(String, Outcome<Solved>)> = inputs
        .par_iter()
        .map(|p| (p.clone(), solve_one(p, false, false, require_valid)))
        .collect();
    let mut worst: Option<Failure> = None;
    let mut rows = Vec::new();
    for (input, r) in results {
        match r {
            Ok(s) => rows.push(serde_json::json!({ "input": input, "solution": s.file })),
            Err(f) => {
                let f = f.with_input(&input);
                f.report();
                if worst.as_ref().is_none_or(|w| f.code > w.code) {
                    worst = Some(f);
                }
            }
        }
    }
    emit(&serde_json::to_string_pretty(&rows).expect("rows serialize"), None)?;
    match worst {
        // already reported per input
        Some(f) => Err(Failure { kind: "batch_failed", message: format!("worst failure: {}", f.kind), ..f }),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct VerifyReport {
    valid: bool,
    flags_match: bool,
    points_match: bool,
    flags: terrain_guard::io::CertificateFlags,
}

fn cmd_verify(instance: &str, solution: &str) -> Outcome {
    let loaded = load(instance).map_err(|f| f.with_input(instance))?;
    let file = SolutionFile::from_json(&read_input(solution)?).map_err(|e| Failure::from(e).with_input(solution))?;
    let r = file.recheck(loaded.instance());
    let report = VerifyReport { valid: r.ok(), flags_match: r.flags_match, points_match: r.points_match, flags: r.flags };
    emit(&serde_json::to_string_pretty(&report).expect("report serializes"), None)?;
    if r.ok() {
        Ok(())
    } else {
        Err(Failure::certification(format!(
            "certificate valid={} flags_match={} points_match={}",
            r.flags.valid, r.flags_match, r.points_match
        )))
    }
}

fn cmd_profile(input: &str, heights: &[String]) -> Outcome {
    let loaded = load(input).map_err(|f| f.with_input(input))?;
    let hs: Vec<Coord> = heights
        .iter()
        .map(|h| h.parse::<Coord>().map_err(|e| Failure::from(Error::InvalidArgument(format!("height {h:?}: {e}")))))
        .collect::<Outcome<_>>()?;
    let rows = profile_altitudes(&loaded.instance().terrain, &hs)?;
    emit(&serde_json::to_string_pretty(&rows).expect("rows serialize"), None)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Solve { inputs, out, render, events, certify } => {
            cmd_solve(&inputs, out.as_deref(), render.as_deref(), events, certify)
        }
        Command::Verify { instance, solution } => cmd_verify(&instance, &solution),
        Command::Gen { n, seed, profile, margin, out } => {
            let f = generate(n, seed, profile.parse::<Profile>()?, margin)?;
            emit(&f.to_json(), out.as_deref())
        }
        Command::Profile { input, heights } => cmd_profile(&input, &heights),
        Command::Bench { sizes, seed, profile } => {
            let rows = bench(&sizes, seed, profile.parse::<Profile>()?)?;
            emit(&serde_json::to_string_pretty(&rows).expect("rows serialize"), None)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if f.kind != "batch_failed" {
                f.report();
            }
            ExitCode::from(f.code)
        }
    }
}
