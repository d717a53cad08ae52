use std::fs;
use std::io::{IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use dimers::dimer::DimerModel;
use dimers::par::Exec;
use dimers::toric::{self, ToricSurface};
use dimers::{catalog, fano, format, matching, mirror, render, report, synth};

/// Dimer models on surfaces: consistency, matching polygons, mirror duality
/// and exceptional sequences on toric weak Fano surfaces.
#[derive(Parser)]
#[command(name = "dimers", version)]
struct Cli {
    /// Run every computation on the current thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a dimer file and list every violation.
    Validate { file: String },
    /// Vertex, arrow and face counts, genus and zigzag cycles.
    Info { file: String },
    /// R-charge LP verdict together with the zigzag probe.
    Consistent {
        file: String,
        /// Ray length for the zigzag probe.
        #[arg(long)]
        probe_depth: Option<usize>,
    },
    /// Perfect matchings with their polygon coordinates.
    Matchings {
        file: String,
        /// Only list stable matchings.
        #[arg(long)]
        stable: bool,
        /// Root vertex label.
        #[arg(long)]
        root: Option<String>,
    },
    /// Normalized matching polygon and its reflexive type.
    Polygon { file: String },
    /// Write the mirror dimer.
    Dual {
        file: String,
        /// Output path, `-` for stdout.
        #[arg(short, long)]
        output: String,
    },
    /// The a and b sequences, vertex order and exceptional classes.
    Sequences {
        file: String,
        #[arg(long)]
        root: Option<String>,
    },
    /// Check that the mirror swaps the a and b sequences.
    VerifyDuality {
        file: String,
        #[arg(long)]
        root: Option<String>,
    },
    /// Build the dimer of an exceptional sequence of line bundles.
    Synth {
        /// Reflexive polygon label such as `6a`.
        #[arg(long)]
        polygon: String,
        /// File with one divisor class per line.
        #[arg(long)]
        sequence: PathBuf,
        /// Output path, `-` for stdout.
        #[arg(short, long)]
        output: String,
    },
    /// All dimers with a given polygon, up to isomorphism.
    Census {
        #[arg(long)]
        polygon: String,
        /// Coefficient bound for the searched classes.
        #[arg(long, default_value_t = 3)]
        bound: i64,
    },
    /// SVG picture of the fundamental domain and the matching polygon.
    Render {
        file: String,
        #[arg(long)]
        svg: PathBuf,
        /// Index of a matching to highlight, as listed by `matchings`.
        #[arg(long)]
        matching: Option<usize>,
    },
    /// Arc and sign-side properties of the stable matchings on sampled walks.
    Properties {
        file: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Shipped dimers and reflexive polygons.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Names of the shipped dimers and polygons.
    List,
    /// Print a shipped dimer file or polygon.
    Get { name: String },
}

/// Exit 1: a checked property fails. Exit 2: malformed input or usage.
enum Failure {
    Property(anyhow::Error),
    Input(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Property(e.into())
    }
}

fn input(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Input(e.into())
}

/// Output of one command: a report and whether its checks passed.
struct Outcome {
    report: Option<Value>,
    text: Option<String>,
    ok: bool,
}

impl Outcome {
    fn report(v: Value) -> Self {
        Outcome {
            report: Some(v),
            text: None,
            ok: true,
        }
    }

    fn checked(v: Value, ok: bool) -> Self {
        Outcome {
            report: Some(v),
            text: None,
            ok,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    match run(cli.command, exec) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if let Some(text) = out.text {
                let _ = stdout.write_all(text.as_bytes());
            }
            if let Some(v) = out.report {
                let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&v).expect("json"));
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                status("FAILED", "one or more checks failed");
                ExitCode::from(1)
            }
        }
        Err(Failure::Property(e)) => {
            status("FAILED", &format!("{e:#}"));
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            status("error", &format!("{e:#}"));
            ExitCode::from(2)
        }
    }
}

fn status(tag: &str, message: &str) {
    let color = std::env::var_os("NO_COLOR").is_none_or(|v| v.is_empty()) && std::io::stderr().is_terminal();
    if color {
        eprintln!("\x1b[1;31m{tag}\x1b[0m: {message}");
    } else {
        eprintln!("{tag}: {message}");
    }
}

fn read_text(spec: &str) -> Result<String, Failure> {
    if let Some(name) = spec.strip_prefix("catalog:") {
        return catalog::dimer_text(name)
            .map(str::to_string)
            .ok_or_else(|| input(anyhow!("no catalog dimer `{name}`")));
    }
    if spec == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(input)?;
        return Ok(s);
    }
    fs::read_to_string(spec)
        .with_context(|| format!("reading {spec}"))
        .map_err(input)
}

fn load(spec: &str) -> Result<DimerModel, Failure> {
    let text = read_text(spec)?;
    format::parse(&text)
        .with_context(|| format!("parsing {spec}"))
        .map_err(input)
}

fn root_of(d: &DimerModel, root: Option<&str>) -> Result<usize, Failure> {
    match root {
        None => Ok(0),
        Some(label) => d
            .vertex_by_label(label)
            .ok_or_else(|| input(anyhow!("no vertex labelled `{label}`"))),
    }
}

fn write_output(path: &str, text: &str) -> Result<(), Failure> {
    if path == "-" {
        print!("{text}");
        return Ok(());
    }
    fs::write(path, text)
        .with_context(|| format!("writing {path}"))
        .map_err(input)
}

fn surface(label: &str) -> Result<ToricSurface, Failure> {
    let p = toric::polygon_by_label(label).map_err(input)?;
    Ok(ToricSurface::new(&p))
}

fn run(command: Command, exec: Exec) -> Result<Outcome, Failure> {
    match command {
        Command::Validate { file } => {
            let text = read_text(&file)?;
            let raw = format::parse_raw(&text).map_err(input)?;
            match dimers::dimer::validate(&raw) {
                Ok(d) => Ok(Outcome::report(json!({
                    "valid": true,
                    "name": d.name(),
                    "vertices": d.num_vertices(),
                    "arrows": d.num_arrows(),
                    "faces": d.num_faces(),
                    "genus": d.genus(),
                }))),
                Err(e) => {
                    for v in &e.0 {
                        eprintln!("{v}");
                    }
                    Err(input(anyhow!("{} violation(s) in {file}", e.0.len())))
                }
            }
        }
        Command::Info { file } => Ok(Outcome::report(report::info(&load(&file)?))),
        Command::Consistent { file, probe_depth } => {
            let d = load(&file)?;
            let (v, verdict) = report::consistency(&d, probe_depth, exec);
            let agree = v.get("agree").and_then(Value::as_bool).unwrap_or(true);
            Ok(Outcome::checked(v, verdict != Some(false) && agree))
        }
        Command::Matchings { file, stable, root } => {
            let d = load(&file)?;
            let o = root_of(&d, root.as_deref())?;
            Ok(Outcome::report(report::matchings(&d, o, stable, exec)?))
        }
        Command::Polygon { file } => Ok(Outcome::report(report::polygon(&load(&file)?, exec)?)),
        Command::Dual { file, output } => {
            let d = load(&file)?;
            let (dual, checks) = mirror::mirror_with_checks(&d)?;
            write_output(&output, &format::serialize(&dual))?;
            if output == "-" {
                return Ok(Outcome {
                    report: None,
                    text: None,
                    ok: checks.all(),
                });
            }
            Ok(Outcome::checked(
                json!({
                    "output": output,
                    "vertices": dual.num_vertices(),
                    "arrows": dual.num_arrows(),
                    "faces": dual.num_faces(),
                    "genus": dual.genus(),
                    "checks": serde_json::to_value(&checks)?,
                }),
                checks.all(),
            ))
        }
        Command::Sequences { file, root } => {
            let d = load(&file)?;
            let o = root_of(&d, root.as_deref())?;
            let data = fano::fano_data(&d, o, exec)?;
            let ok = data.exceptional;
            Ok(Outcome::checked(report::sequences(&data), ok))
        }
        Command::VerifyDuality { file, root } => {
            let d = load(&file)?;
            let o = root_of(&d, root.as_deref())?;
            let r = fano::verify_duality(&d, o, exec)?;
            Ok(Outcome::checked(report::duality(&r), r.holds()))
        }
        Command::Synth {
            polygon,
            sequence,
            output,
        } => {
            let s = surface(&polygon)?;
            let text = fs::read_to_string(&sequence)
                .with_context(|| format!("reading {}", sequence.display()))
                .map_err(input)?;
            let classes = format::parse_sequence(&text).map_err(input)?;
            let name = sequence
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("synth")
                .to_string();
            let d = synth::dimer_from_sequence(&s, &classes)?.with_name(name);
            write_output(&output, &format::serialize(&d))?;
            Ok(Outcome {
                report: None,
                text: None,
                ok: true,
            })
        }
        Command::Census { polygon, bound } => {
            if bound < 0 {
                return Err(input(anyhow!("bound must be nonnegative")));
            }
            let s = surface(&polygon)?;
            let c = synth::census(&s, synth::CensusOptions { bound, exec });
            Ok(Outcome::report(report::census(&polygon, &c)))
        }
        Command::Render { file, svg, matching } => {
            let d = load(&file)?;
            let lat = matching::matching_lattice(&d, 0, exec).ok();
            let highlight = match matching {
                None => None,
                Some(i) => {
                    let lat = lat
                        .as_ref()
                        .ok_or_else(|| input(anyhow!("{file} has no matching lattice")))?;
                    Some(
                        lat.matchings
                            .get(i)
                            .ok_or_else(|| input(anyhow!("matching index {i} out of range (0..{})", lat.matchings.len())))?,
                    )
                }
            };
            let text = render::render_svg(&d, highlight, lat.as_ref())?;
            write_output(&svg.to_string_lossy(), &text)?;
            Ok(Outcome {
                report: None,
                text: None,
                ok: true,
            })
        }
        Command::Properties { file, samples, seed } => {
            let d = load(&file)?;
            let lat = matching::matching_lattice(&d, 0, exec)?;
            let checks = matching::walk_checks(&d, &lat, samples, seed, exec);
            let ok = checks.holds();
            Ok(Outcome::checked(serde_json::to_value(&checks)?, ok))
        }
        Command::Catalog { action } => match action {
            CatalogAction::List => Ok(Outcome::report(json!({
                "dimers": catalog::dimer_names().collect::<Vec<_>>(),
                "polygons": toric::REFERENCE.iter().map(|(l, _)| *l).collect::<Vec<_>>(),
            }))),
            CatalogAction::Get { name } => {
                if let Some(text) = catalog::dimer_text(&name) {
                    return Ok(Outcome {
                        report: None,
                        text: Some(text.to_string()),
                        ok: true,
                    });
                }
                let table = report::reflexive_table();
                table
                    .as_array()
                    .and_then(|rows| rows.iter().find(|r| r["label"] == name.as_str()))
                    .cloned()
                    .map(Outcome::report)
                    .ok_or_else(|| input(anyhow!("no catalog entry `{name}`")))
            }
        },
    }
}
