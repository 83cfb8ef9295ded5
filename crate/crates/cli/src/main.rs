//! `snort`: evaluate Snort positions, draw thermographs, check the
//! caterpillar table, run the genetic search and the conjecture monitor.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use snort_core::families::{verify_family, Family};
use snort_core::search::{self, Evaluator, HallOfFame, SearchConfig};
use snort_core::{parse_game, Dyadic, Engine, GameId, Position};

#[derive(Parser)]
#[command(
    name = "snort",
    version,
    about = "Exact values and temperatures of Snort positions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical form of a position.
    Eval {
        #[command(flatten)]
        input: Input,
        /// Also print the temperature.
        #[arg(long)]
        temperature: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print the temperature of a position.
    Temp {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        json: bool,
    },
    /// Print or draw the thermograph of a position.
    Thermo {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        json: bool,
        /// Write an SVG drawing to this path.
        #[arg(long, value_name = "OUT")]
        svg: Option<PathBuf>,
    },
    /// Check a family against its closed-form values.
    Verify {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long, value_name = "N", default_value_t = 4)]
        n_max: usize,
        #[arg(long)]
        json: bool,
    },
    /// Genetic search for large t(G) - deg(G).
    Search {
        #[arg(long, value_name = "PATH")]
        config: Option<PathBuf>,
        /// Continue from a saved hall of fame.
        #[arg(long, value_name = "PATH", conflicts_with = "config")]
        resume: Option<PathBuf>,
        /// Override the RNG seed.
        #[arg(long, value_name = "U64")]
        seed: Option<u64>,
        /// Override the number of generations.
        #[arg(long, value_name = "N")]
        generations: Option<usize>,
        /// Write the hall of fame here instead of stdout.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Seed positions; defaults to the built-in seed set.
        seeds: Vec<PathBuf>,
    },
    /// Check t <= deg + deg2 / 2 on positions.
    Conjecture {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Input {
    /// Position file (JSON or edge list).
    #[arg(required_unless_present = "game", conflicts_with = "game")]
    file: Option<PathBuf>,
    /// A game in value notation instead of a position, e.g. "{2|-1}".
    #[arg(long, value_name = "GAME")]
    game: Option<String>,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|_| {
        format!("unknown family `{s}` (expected star, tinted-star, joined-stars or caterpillar)")
    })
}

/// Failure classes, mapped to exit codes 2 and 1.
enum Failure {
    Input(anyhow::Error),
    Internal(anyhow::Error),
}

type Outcome = Result<ExitCode, Failure>;

const VERIFY_FAILED: u8 = 3;

fn input_err(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Input(e.into())
}

fn internal_err(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Internal(e.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let mut engine = Engine::from_env().map_err(input_err)?;
    match cli.command {
        Command::Eval {
            input,
            temperature,
            json,
        } => cmd_eval(&mut engine, &input, temperature, json),
        Command::Temp { input, json } => cmd_temp(&mut engine, &input, json),
        Command::Thermo { input, json, svg } => cmd_thermo(&mut engine, &input, json, svg),
        Command::Verify {
            family,
            n_max,
            json,
        } => cmd_verify(&mut engine, family, n_max, json),
        Command::Search {
            config,
            resume,
            seed,
            generations,
            out,
            seeds,
        } => cmd_search(engine, config, resume, seed, generations, out, &seeds),
        Command::Conjecture { files, json } => cmd_conjecture(&mut engine, &files, json),
    }
}

fn read_position(path: &Path) -> Result<Position, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(input_err)?;
    Position::parse(&text)
        .with_context(|| format!("cannot parse {}", path.display()))
        .map_err(input_err)
}

/// The game value of the input, and the position when one was given.
fn load(engine: &mut Engine, input: &Input) -> Result<(GameId, Option<Position>), Failure> {
    if let Some(text) = &input.game {
        let g = parse_game(engine.store(), text)
            .map_err(|e| input_err(anyhow!("invalid game `{text}`: {e}")))?;
        let g = engine.store().canonicalize(g);
        return Ok((g, None));
    }
    let path = input
        .file
        .as_ref()
        .ok_or_else(|| input_err(anyhow!("no input given")))?;
    let p = read_position(path)?;
    let g = engine.value(&p).map_err(input_err)?;
    Ok((g, Some(p)))
}

fn print_json(v: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("json value serializes")
    );
}

fn cmd_eval(engine: &mut Engine, input: &Input, temperature: bool, json: bool) -> Outcome {
    let (g, p) = load(engine, input)?;
    let form = engine.format(g);
    let t = temperature.then(|| engine.store().temperature(g));
    if json {
        let mut v = json!({ "canonicalForm": form });
        if let Some(t) = &t {
            v["temperature"] = json!(t.to_string());
        }
        if let Some(p) = &p {
            v["degree"] = json!(p.degree());
        }
        print_json(&v);
    } else {
        println!("{form}");
        if let Some(t) = t {
            println!("t = {t}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_temp(engine: &mut Engine, input: &Input, json: bool) -> Outcome {
    let (g, _) = load(engine, input)?;
    let t = engine.store().temperature(g);
    if json {
        print_json(&json!({ "temperature": t.to_string() }));
    } else {
        println!("{t}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_thermo(engine: &mut Engine, input: &Input, json: bool, svg: Option<PathBuf>) -> Outcome {
    let (g, _) = load(engine, input)?;
    let th = engine.store().thermograph(g).map_err(internal_err)?;
    if let Some(path) = &svg {
        fs::write(path, th.to_svg())
            .with_context(|| format!("cannot write {}", path.display()))
            .map_err(internal_err)?;
    }
    if json {
        let mut v = th.to_json();
        v["canonicalForm"] = json!(engine.format(g));
        print_json(&v);
    } else if svg.is_none() {
        let walls = |tr: &snort_core::Trajectory| {
            tr.breakpoints()
                .iter()
                .map(|(t, v)| format!("({t}, {v})"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        println!("game        {}", engine.format(g));
        println!("temperature {}", th.temperature);
        println!("mast        {}", th.mast);
        println!("left wall   {}", walls(&th.left));
        println!("right wall  {}", walls(&th.right));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(engine: &mut Engine, family: Family, n_max: usize, json: bool) -> Outcome {
    let report = verify_family(engine, family, 1..=n_max).map_err(input_err)?;
    if json {
        let v = json!({
            "family": report.family,
            "allPass": report.all_pass(),
            "rows": report.rows.iter().map(|r| json!({
                "n": r.n,
                "canonicalForm": r.canonical_form,
                "oracleForm": r.oracle_form,
                "valuesEqual": r.values_equal,
                "textEqual": r.text_equal,
                "temperature": r.temperature.to_string(),
                "expectedTemperature": r.expected_temperature.as_ref().map(Dyadic::to_string),
                "degree": r.degree,
                "expectedDegree": r.expected_degree,
                "tempMinusDegree": r.temp_minus_degree.to_string(),
                "pass": r.pass,
            })).collect::<Vec<_>>(),
        });
        print_json(&v);
    } else {
        print!("{}", report.to_table());
    }
    Ok(if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(VERIFY_FAILED)
    })
}

fn cmd_search(
    engine: Engine,
    config: Option<PathBuf>,
    resume: Option<PathBuf>,
    seed: Option<u64>,
    generations: Option<usize>,
    out: Option<PathBuf>,
    seed_files: &[PathBuf],
) -> Outcome {
    let read = |path: &Path| {
        fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))
            .map_err(input_err)
    };
    let hof = if let Some(path) = resume {
        let mut saved = HallOfFame::from_json_str(&read(&path)?).map_err(input_err)?;
        if let Some(s) = seed {
            saved.config.rng_seed = s;
        }
        let more = generations.unwrap_or(saved.config.generations);
        let mut ev = Evaluator::new(engine, saved.config.fitness);
        search::resume(saved, more, &mut ev).map_err(input_err)?
    } else {
        let mut cfg = match config {
            Some(path) => SearchConfig::from_json_str(&read(&path)?).map_err(input_err)?,
            None => SearchConfig::default(),
        };
        if let Some(s) = seed {
            cfg.rng_seed = s;
        }
        if let Some(g) = generations {
            cfg.generations = g;
        }
        let seeds = if seed_files.is_empty() {
            search::default_seeds()
        } else {
            seed_files
                .iter()
                .map(|p| read_position(p))
                .collect::<Result<Vec<_>, _>>()?
        };
        let mut ev = Evaluator::new(engine, cfg.fitness);
        search::evolve(&cfg, &seeds, &mut ev).map_err(input_err)?
    };
    let text = hof.to_json_string();
    match out {
        Some(path) => {
            fs::write(&path, &text)
                .with_context(|| format!("cannot write {}", path.display()))
                .map_err(internal_err)?;
            if let Some(best) = hof.best() {
                eprintln!(
                    "best fitness {} (t = {}, deg = {}) after {} generations",
                    best.fitness, best.temperature, best.degree, hof.generations_completed
                );
            }
        }
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_conjecture(engine: &mut Engine, files: &[PathBuf], json: bool) -> Outcome {
    let positions = files
        .iter()
        .map(|p| Ok((p.display().to_string(), read_position(p)?)))
        .collect::<Result<Vec<_>, Failure>>()?;
    let report = search::check_conjecture(
        engine,
        positions.iter().map(|(label, p)| (label.as_str(), p)),
    )
    .map_err(input_err)?;
    if json {
        let v = json!({
            "allHold": report.all_hold(),
            "rows": report.rows.iter().map(|r| json!({
                "position": r.label,
                "temperature": r.temperature.to_string(),
                "degree": r.degree,
                "secondDegree": r.second_degree,
                "margin": r.margin.to_string(),
                "holds": r.holds,
            })).collect::<Vec<_>>(),
        });
        print_json(&v);
    } else {
        print!("{}", report.to_table());
    }
    for r in report.violations() {
        eprintln!(
            "COUNTEREXAMPLE to t <= deg + deg2/2: {} (t = {}, deg = {}, deg2 = {})",
            r.label, r.temperature, r.degree, r.second_degree
        );
    }
    Ok(if report.all_hold() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(VERIFY_FAILED)
    })
}
