//! `cubeflip`: circuits, flip-graph enumeration, the corner-link scan,
//! flip paths to corner-cut triangulations, and regularity checks.
//!
//! Every command ends its standard output with a KEY=VALUE block. Exit
//! codes: 0 success, 1 verification mismatch, 2 input error, 3 paradox.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use num_traits::Zero;

use cubeflip::complex::{is_corner_cut, placing_triangulation, Triangulation};
use cubeflip::driver::flip_to_corner_cut;
use cubeflip::enumeration::{
    algorithm1_lx, algorithm1_lx_native, enumerate_all_triangulations, explore_collect, explore_flip_graph,
    ExploreOptions,
};
use cubeflip::formats::{self, Report};
use cubeflip::kernel::circuits_through;
use cubeflip::presets::{self, s_context, u0, u1_minus, u1_plus};
use cubeflip::regularity::{decide_regularity, verify_certificate, Regularity};
use cubeflip::symmetry::Canonicalizer;
use cubeflip::walk::random_walk;
use cubeflip::{Config, Error};

#[derive(Parser)]
#[command(name = "cubeflip", version, about = "Triangulations and flips of small point configurations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print every circuit with its Radon partition.
    Circuits {
        /// Preset name or configuration file.
        config: String,
        /// Only circuits containing this label.
        #[arg(long)]
        through: Option<String>,
    },
    /// Enumerate triangulations by flip-graph exploration or exhaustively.
    Enumerate {
        config: String,
        /// Deduplicate up to the configuration's isometries.
        #[arg(long)]
        mod_symmetry: bool,
        /// Resume from and write checkpoints to this file.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Use the exhaustive enumeration instead of flips.
        #[arg(long)]
        oracle: bool,
        /// Allow the exhaustive enumeration beyond its size limit.
        #[arg(long)]
        force: bool,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Stop after this many BFS levels (the checkpoint stays resumable).
        #[arg(long)]
        stop_after_level: Option<u64>,
        /// In-memory budget for visited keys, in MiB.
        #[arg(long, default_value_t = 1024)]
        memory_mib: usize,
    },
    /// Enumerate S1, S2, S3 and compare the triangulations without apex
    /// flips against the expected sets.
    Prop5 {
        /// Expected sets, one line per configuration: `S1 U0 U1- U1+`.
        #[arg(long)]
        expected: Option<PathBuf>,
        /// Scan native circuits of the contracted configuration instead of
        /// contracted cube circuits.
        #[arg(long)]
        native: bool,
    },
    /// Flip a triangulation of cube4 to a corner-cut triangulation.
    Connect {
        triangulation: PathBuf,
        /// Where to write the flip path (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a height certificate or decide regularity exactly.
    Regularity {
        /// Triangulation file, or a configuration with `--all`.
        input: String,
        #[arg(long)]
        certificate: Option<PathBuf>,
        /// Decide every triangulation of the configuration `input`.
        #[arg(long)]
        all: bool,
    },
    /// Write a random flip walk from a corner-cut or given triangulation.
    Walk {
        /// Start triangulation file (default: a corner-cut triangulation).
        #[arg(long)]
        start: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the end triangulation here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Configuration utilities.
    Config {
        #[command(subcommand)]
        action: ConfigAction,
    },
}

#[derive(Subcommand)]
enum ConfigAction {
    /// Print a preset or configuration file in the configuration format.
    Dump { config: String },
}

enum Status {
    Ok,
    Mismatch,
}

type Outcome = Result<(Status, Report), Error>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Circuits { config, through } => circuits(&config, through.as_deref()),
        Command::Enumerate {
            config,
            mod_symmetry,
            checkpoint,
            oracle,
            force,
            workers,
            stop_after_level,
            memory_mib,
        } => {
            let opts = ExploreOptions {
                mod_symmetry,
                checkpoint,
                workers,
                stop_after_level,
                memory_budget: memory_mib << 20,
            };
            enumerate(&config, opts, oracle, force)
        }
        Command::Prop5 { expected, native } => prop5(expected, native),
        Command::Connect { triangulation, out } => connect(&triangulation, out),
        Command::Regularity {
            input,
            certificate,
            all,
        } => regularity(&input, certificate, all),
        Command::Walk {
            start,
            steps,
            seed,
            out,
        } => walk(start, steps, seed, out),
        Command::Config {
            action: ConfigAction::Dump { config },
        } => dump(&config),
    };
    match outcome {
        Ok((status, mut report)) => {
            let code = match status {
                Status::Ok => 0,
                Status::Mismatch => 1,
            };
            report.set("status", if code == 0 { "ok" } else { "mismatch" });
            report.set("exit", code);
            print!("{report}");
            ExitCode::from(code)
        }
        Err(e) => {
            let code = if matches!(e, Error::Paradox(_)) { 3 } else { 2 };
            eprintln!("error: {e}");
            let mut report = Report::new();
            report.set("status", if code == 3 { "paradox" } else { "error" });
            report.set("exit", code);
            print!("{report}");
            ExitCode::from(code)
        }
    }
}

fn circuits(config: &str, through: Option<&str>) -> Outcome {
    let cfg = formats::load_config(config)?;
    let list = match through {
        Some(label) => circuits_through(&cfg, cfg.index_of(label)?)?,
        None => cfg.circuits().all().to_vec(),
    };
    for z in &list {
        println!("{}", z.display(&cfg));
    }
    let mut r = Report::new();
    r.set("config", cfg.name()).set("circuits", list.len());
    Ok((Status::Ok, r))
}

fn classes_of(cfg: &Config, trias: &[Triangulation]) -> usize {
    let canon = Canonicalizer::for_config(cfg);
    trias
        .iter()
        .map(|t| canon.canonical_form(t))
        .collect::<BTreeSet<_>>()
        .len()
}

fn enumerate(config: &str, opts: ExploreOptions, oracle: bool, force: bool) -> Outcome {
    let cfg = formats::load_config(config)?;
    let mut r = Report::new();
    r.set("config", cfg.name());
    if oracle {
        let all = enumerate_all_triangulations(&cfg, force)?;
        let classes = classes_of(&cfg, &all);
        println!("triangulations={} classes={}", all.len(), classes);
        r.set("method", "oracle")
            .set("triangulations", all.len())
            .set("total", all.len())
            .set("classes", classes)
            .set("complete", true);
        return Ok((Status::Ok, r));
    }
    let seed = placing_triangulation(&cfg)?;
    let rep = explore_flip_graph(&cfg, &seed, &opts)?;
    if opts.mod_symmetry {
        println!("classes={} total={}", rep.classes, rep.total);
    } else {
        println!("triangulations={} classes={}", rep.total, rep.classes);
    }
    r.set("method", if opts.mod_symmetry { "flips-mod-symmetry" } else { "flips" })
        .set("triangulations", rep.total)
        .set("total", rep.total)
        .set("classes", rep.classes)
        .set("flips", rep.flips)
        .set("levels", rep.levels)
        .set("max_frontier", rep.max_frontier)
        .set("complete", rep.complete);
    if let Some(p) = &rep.checkpoint {
        r.set("checkpoint", p.display());
    }
    Ok((Status::Ok, r))
}

fn default_expected() -> Vec<(String, BTreeSet<String>)> {
    [("S1", "U0 U1- U1+"), ("S2", "U0 U1- U1+"), ("S3", "U0")]
        .into_iter()
        .map(|(s, names)| (s.to_string(), names.split(' ').map(String::from).collect()))
        .collect()
}

fn parse_expected(path: &PathBuf) -> Result<Vec<(String, BTreeSet<String>)>, Error> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let name = parts.next().expect("non-empty line");
        if !matches!(name, "S1" | "S2" | "S3") {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("unknown configuration `{name}`"),
            });
        }
        out.push((name.to_string(), parts.map(String::from).collect()));
    }
    Ok(out)
}

fn prop5(expected: Option<PathBuf>, native: bool) -> Outcome {
    let expected = match &expected {
        Some(p) => parse_expected(p)?,
        None => default_expected(),
    };
    let mut r = Report::new();
    r.set("circuits", if native { "native" } else { "contracted-cube" });
    let mut all_ok = true;
    for (name, want) in &expected {
        let q: usize = name[1..].parse().expect("checked name");
        let ctx = s_context(q);
        let cfg = &ctx.target;
        let seed = placing_triangulation(cfg)?;
        let (rep, trias) = explore_collect(cfg, &seed, false)?;
        let lx = if native {
            algorithm1_lx_native(ctx, &trias)
        } else {
            algorithm1_lx(ctx, &trias)
        };
        let known: Vec<(&str, Triangulation)> = [("U0", u0(cfg)), ("U1-", u1_minus(cfg)), ("U1+", u1_plus(cfg))]
            .into_iter()
            .filter_map(|(n, t)| t.ok().map(|t| (n, t)))
            .collect();
        let mut got = BTreeSet::new();
        for (i, t) in lx.iter().enumerate() {
            match known.iter().find(|(_, k)| k == t) {
                Some((n, _)) => {
                    got.insert(n.to_string());
                }
                None => {
                    let n = format!("T{i}");
                    println!("{name} {n}: {}", cells_inline(t));
                    got.insert(n);
                }
            }
        }
        let shown = set_display(&got);
        if &got == want {
            println!("L_a({name})={shown} OK");
        } else {
            all_ok = false;
            println!("L_a({name})={shown} MISMATCH expected {}", set_display(want));
        }
        r.set(&format!("{name}_triangulations"), rep.total)
            .set(&format!("{name}_L"), shown);
    }
    let u1 = u1_minus(&s_context(1).target)?;
    println!("U1- = {}", cells_inline(&u1));
    r.set("U1-", cells_inline(&u1).replace(' ', ","));
    Ok((if all_ok { Status::Ok } else { Status::Mismatch }, r))
}

/// `{U0,U1-,U1+,T..}` in that order.
fn set_display(names: &BTreeSet<String>) -> String {
    let rank = |n: &String| match n.as_str() {
        "U0" => (0, n.clone()),
        "U1-" => (1, n.clone()),
        "U1+" => (2, n.clone()),
        _ => (3, n.clone()),
    };
    let mut v: Vec<&String> = names.iter().collect();
    v.sort_by_key(|n| rank(n));
    format!("{{{}}}", v.into_iter().cloned().collect::<Vec<_>>().join(","))
}

fn cells_inline(t: &Triangulation) -> String {
    t.cells()
        .iter()
        .map(|&c| t.cfg().format_face(c).replace(' ', ""))
        .collect::<Vec<_>>()
        .join(" ")
}

fn read_triangulation(path: &PathBuf) -> Result<Triangulation, Error> {
    let text = std::fs::read_to_string(path)?;
    let cube = presets::cube4();
    let cfg = if text.lines().any(|l| l.trim_start().starts_with("# config")) {
        None
    } else {
        Some(&cube)
    };
    formats::parse_triangulation(&text, cfg)
}

fn connect(path: &PathBuf, out: Option<PathBuf>) -> Outcome {
    let t = read_triangulation(path)?;
    t.validate()?;
    let p = flip_to_corner_cut(&t)?;
    let text = formats::format_path(&p);
    let replayed = formats::parse_path(&text, None)?;
    let end = replayed.replay()?;
    let mut r = Report::new();
    match &out {
        Some(o) => std::fs::write(o, &text)?,
        None => print!("{text}"),
    }
    println!("path length {}", p.len());
    r.set("path_length", p.len());
    match is_corner_cut(&end) {
        Some((class, diag)) => {
            r.set("end", "corner-cut")
                .set("corner_class", class.other().name())
                .set("diagonal", end.cfg().format_face(diag).replace(' ', ""))
                .set("replay", "ok");
            Ok((Status::Ok, r))
        }
        None => {
            r.set("end", "not-corner-cut").set("replay", "ok");
            Ok((Status::Mismatch, r))
        }
    }
}

fn regularity(input: &str, certificate: Option<PathBuf>, all: bool) -> Outcome {
    let mut r = Report::new();
    if all {
        let cfg: Arc<Config> = formats::load_config(input)?;
        let seed = placing_triangulation(&cfg)?;
        let (_, trias) = explore_collect(&cfg, &seed, false)?;
        let mut regular = 0;
        for t in &trias {
            if let Regularity::Regular(_) = decide_regularity(t)? {
                regular += 1;
            }
        }
        println!("{regular}/{} regular", trias.len());
        r.set("config", cfg.name())
            .set("triangulations", trias.len())
            .set("regular", regular);
        return Ok((Status::Ok, r));
    }
    let t = read_triangulation(&PathBuf::from(input))?;
    t.validate()?;
    if let Some(cert) = certificate {
        let w = formats::parse_heights(&std::fs::read_to_string(cert)?, t.cfg())?;
        let ok = verify_certificate(&t, &w)?;
        println!("{}", if ok { "certificate OK" } else { "certificate FAILED" });
        r.set("certificate", if ok { "ok" } else { "failed" });
        return Ok((if ok { Status::Ok } else { Status::Mismatch }, r));
    }
    match decide_regularity(&t)? {
        Regularity::Regular(w) => {
            println!("regular");
            print!("{}", formats::format_heights(t.cfg(), &w));
            r.set("regular", true);
        }
        Regularity::NonRegular(y) => {
            println!("non-regular (LP infeasible)");
            let support = y.iter().filter(|v| !v.is_zero()).count();
            r.set("regular", false).set("farkas_support", support);
        }
    }
    Ok((Status::Ok, r))
}

fn walk(start: Option<PathBuf>, steps: usize, seed: u64, out: Option<PathBuf>) -> Outcome {
    let t = match &start {
        Some(p) => read_triangulation(p)?,
        None => cubeflip::complex::corner_cuts()[0].2.clone(),
    };
    t.validate()?;
    let p = random_walk(&t, steps, seed);
    let text = formats::format_triangulation(&p.end);
    match &out {
        Some(o) => std::fs::write(o, &text)?,
        None => print!("{text}"),
    }
    let mut r = Report::new();
    r.set("steps", p.len()).set("seed", seed).set("cells", p.end.len());
    Ok((Status::Ok, r))
}

fn dump(config: &str) -> Outcome {
    let cfg = formats::load_config(config)?;
    print!("{}", formats::format_config(&cfg));
    let mut r = Report::new();
    r.set("config", cfg.name()).set("points", cfg.len());
    Ok((Status::Ok, r))
}
