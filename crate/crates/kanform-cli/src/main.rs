//! `kanform`: build Kan loop groups, lift cycles, sample Chern–Weil forms,
//! and verify the pairing, moduli and Chern–Simons identities.
//!
//! Exit codes: 0 pass, 2 verification failure, 3 input error, 4 obstruction.

mod io;
mod report;
mod suites;

use std::hash::{DefaultHasher, Hash, Hasher};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kanform::chains::{CellularChain, CellularComplex};
use kanform::cyclelift::{cycle_from_cellular, LiftMethod, LiftOptions};
use kanform::liegroup::forms::{random_tangent, FdConfig};
use kanform::liegroup::nerve::assemble_omega;
use kanform::liegroup::{GroupSpec, InvariantPolynomial, MatrixGroup};
use kanform::moduli::{chern_simons_path, PathDescriptor, PlotDescriptor};
use kanform::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use report::{all_pass, collect_checks, render, Check, Tolerances};
use suites::{conventions, Ctx, SUITES};

#[derive(Parser)]
#[command(name = "kanform", version, about = "Bar chains on Kan loop groups and equivariant simplicial Chern-Weil forms")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Group: `SU(2)`, `SU2`, `U3`, or `{"family":"SU","n":2}`.
    #[arg(long, global = true, default_value = "SU(2)")]
    group: String,
    /// Polynomial: `basic`, `trace`, `c<r>`, or a JSON descriptor.
    #[arg(long, global = true, default_value = "basic")]
    poly: String,
    /// Overrides every tolerance of the run.
    #[arg(long, global = true, allow_negative_numbers = true)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 10)]
    samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the free simplicial group of a complex and check its identities.
    Build {
        #[arg(long)]
        complex: PathBuf,
    },
    /// Lift the top cell of a complex to a total cycle with certificates.
    Cycle {
        #[arg(long)]
        complex: PathBuf,
        /// Cellular degree of the cycle (1, 2 or 3).
        #[arg(long)]
        degree: usize,
        /// Top cell; defaults to the only cell of that degree.
        #[arg(long)]
        cell: Option<String>,
        /// `telescoping` or `linear`; automatic when absent.
        #[arg(long)]
        method: Option<String>,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Sample every component Q^{2m,j,q} of Ω_Q as CSV rows.
    Forms,
    /// Check the pairing identity for a cycle of a complex.
    Pair {
        #[arg(long)]
        complex: PathBuf,
        /// Cycle file; the surface or threefold cycle when absent.
        #[arg(long)]
        cycle: Option<PathBuf>,
    },
    /// Extended moduli space of a surface: 2-form, moment map and checks.
    Moduli {
        #[arg(long, default_value_t = 1)]
        genus: usize,
        /// Exit with 2 when a gating check fails.
        #[arg(long)]
        verify: bool,
    },
    /// Chern–Simons function along a path of a plot.
    Cs {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        plot: PathBuf,
        #[arg(long = "loop")]
        path: PathBuf,
    },
    /// Generators of the equivariant cohomology for U(n).
    Catalog {
        #[arg(long, default_value_t = 1)]
        genus: usize,
        #[arg(long, default_value_t = 2)]
        un: usize,
    },
    /// Run verification suites and report pass/fail per identity.
    Verify {
        /// One of chains, ladder, omega, pairing, moduli, cs, alpha, catalog, kirillov, all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        complex: Option<PathBuf>,
        #[arg(long)]
        cycle: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        genus: usize,
    },
    /// Print the checks of a report file as a table.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

/// What a command produced: a document for `--out`/stdout and whether
/// verification passed.
enum Output {
    Json(Value, bool),
    Text(String, bool),
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Obstruction(_) | Error::LinearExhausted { .. } => 4,
        Error::NotACycle | Error::Certificate | Error::Numerical(_) | Error::OffConstraint(_) => 2,
        _ => 3,
    }
}

fn setup_threads() -> Result<()> {
    if let Ok(v) = std::env::var("KANFORM_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| Error::Input(format!("KANFORM_THREADS must be a positive integer, got `{v}`")))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Error::Input(e.to_string()))?;
    }
    Ok(())
}

fn context(g: &Global) -> Result<Ctx> {
    if let Some(t) = g.tol {
        if t.is_nan() || t <= 0.0 {
            return Err(Error::Input(format!("tolerance must be positive, got {t}")));
        }
    }
    if g.samples == 0 {
        return Err(Error::Input("samples must be positive".into()));
    }
    let spec: GroupSpec = g.group.parse()?;
    Ok(Ctx {
        group: MatrixGroup::new(spec)?,
        poly: g.poly.parse::<InvariantPolynomial>()?,
        samples: g.samples,
        seed: g.seed,
        tol: Tolerances { overall: g.tol },
        cfg: FdConfig::default(),
    })
}

fn header(command: &str, ctx: &Ctx) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema_version".into(), json!(1));
    m.insert("command".into(), json!(command));
    m.insert("seed".into(), json!(ctx.seed));
    m.insert("group".into(), json!(ctx.group.spec()));
    m.insert("poly".into(), json!(ctx.poly));
    m.insert("samples".into(), json!(ctx.samples));
    m
}

fn finish(mut doc: serde_json::Map<String, Value>, payload: Value, checks: Vec<Check>) -> Output {
    let pass = all_pass(&checks);
    doc.insert("result".into(), payload);
    doc.insert("checks".into(), json!(checks));
    doc.insert("pass".into(), json!(pass));
    Output::Json(Value::Object(doc), pass)
}

fn slot_hash(values: impl Iterator<Item = f64>) -> String {
    let mut h = DefaultHasher::new();
    for v in values {
        v.to_bits().hash(&mut h);
    }
    format!("{:016x}", h.finish())
}

fn run(cli: &Cli) -> Result<Output> {
    let ctx = context(&cli.global)?;
    match &cli.command {
        Command::Build { complex } => {
            let k = io::load_complex(complex)?;
            let counts: Vec<usize> = (0..=k.max_degree()).map(|q| k.base_generators(q).len()).collect();
            let mut doc = header("build", &ctx);
            doc.insert("kan".into(), json!(k.to_json()));
            doc.insert("generators_by_degree".into(), json!(counts));
            Ok(finish(doc, json!(null), vec![Check::holds("simplicial identities", true)]))
        }
        Command::Cycle { complex, degree, cell, method, depth } => {
            let k = io::load_complex(complex)?;
            let y = CellularComplex::from_kan(&k);
            let cells = y.cells.get(*degree).cloned().unwrap_or_default();
            let cell = match cell {
                Some(c) => c.clone(),
                None if cells.len() == 1 => cells[0].clone(),
                None => return Err(Error::Input(format!("complex has {} cells of degree {degree}; pass --cell", cells.len()))),
            };
            let z = CellularChain { degree: *degree, coefficients: [(cell, 1)].into_iter().collect() };
            let opts = LiftOptions { method: method.as_deref().map(str::parse::<LiftMethod>).transpose()?, depth: *depth };
            let lifted = cycle_from_cellular(&z, &k, &y, opts)?;
            for cert in &lifted.certificates {
                cert.verify()?;
            }
            let (info, checks) = suites::cycle_checks(&k, &lifted.cycle, "cycle")?;
            let mut doc = header("cycle", &ctx);
            doc.insert("cycle".into(), json!(lifted.cycle));
            doc.insert("certificates".into(), json!(lifted.certificates));
            Ok(finish(doc, info, checks))
        }
        Command::Forms => {
            let omega = assemble_omega(ctx.poly);
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| Error::Input(e.to_string());
            w.write_record(["component", "q", "m", "j", "seed", "slot_hash", "value"]).map_err(csv_err)?;
            for c in &omega.components {
                for s in 0..ctx.samples {
                    let seed = ctx.seed.wrapping_add(s as u64);
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let p: Vec<_> = (0..c.q).map(|_| ctx.group.random_element(&mut rng, 1.0)).collect();
                    let v: Vec<_> = (0..c.j).map(|_| random_tangent(&ctx.group, &p, &mut rng)).collect();
                    let x = ctx.group.random_algebra(&mut rng, 1.0);
                    let data =
                        p.iter().chain(v.iter().flatten()).chain(std::iter::once(&x)).flat_map(|m| m.iter().flat_map(|z| [z.re, z.im]));
                    let value = c.eval(&x, &p, &v);
                    w.write_record([
                        format!("Q^{{{},{},{}}}", 2 * c.m, c.j, c.q),
                        c.q.to_string(),
                        c.m.to_string(),
                        c.j.to_string(),
                        seed.to_string(),
                        slot_hash(data),
                        format!("{value:.17e}"),
                    ])
                    .map_err(csv_err)?;
                }
            }
            let bytes = w.into_inner().map_err(|e| Error::Input(e.to_string()))?;
            Ok(Output::Text(String::from_utf8_lossy(&bytes).into_owned(), true))
        }
        Command::Pair { complex, cycle } => {
            let k = io::load_complex(complex)?;
            let c = match cycle {
                Some(p) => io::load_chain(p)?,
                None => default_cycle(&k)?,
            };
            let (payload, checks) = suites::pairing(&ctx, &k, &c)?;
            let mut doc = header("pair", &ctx);
            doc.insert("conventions".into(), conventions());
            Ok(finish(doc, payload, checks))
        }
        Command::Moduli { genus, verify } => {
            let (payload, checks) = suites::moduli(&ctx, *genus)?;
            let mut doc = header("moduli", &ctx);
            doc.insert("conventions".into(), conventions());
            match finish(doc, payload, checks) {
                Output::Json(v, pass) => Ok(Output::Json(v, pass || !verify)),
                other => Ok(other),
            }
        }
        Command::Cs { complex, plot, path } => {
            let k = io::load_complex(complex)?;
            let desc: PlotDescriptor = io::read_json(plot)?;
            let path: PathDescriptor = io::read_json(path)?;
            let rep = chern_simons_path(&k, &ctx.group, ctx.poly, &desc, &path, ctx.samples, ctx.seed, ctx.cfg)?;
            let mut checks = vec![
                Check::at_most("dψ = 0", rep.closedness, ctx.tol.get(1e-5)),
                Check::at_most("δ_G ψ(X) = 0", rep.delta_g, ctx.tol.get(1e-6)),
            ];
            if let Some(d) = rep.distance {
                checks.push(Check::at_most("loop period is an integer", d, ctx.tol.get(1e-3)));
            }
            let mut doc = header("cs", &ctx);
            doc.insert("conventions".into(), conventions());
            Ok(finish(doc, serde_json::to_value(&rep)?, checks))
        }
        Command::Catalog { genus, un } => {
            let (payload, checks) = suites::catalog(&ctx, *genus, *un)?;
            Ok(finish(header("catalog", &ctx), payload, checks))
        }
        Command::Verify { suite, complex, cycle, genus } => {
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { suite.split(',').map(str::trim).collect() };
            let mut results = serde_json::Map::new();
            let mut checks = Vec::new();
            for name in names {
                let (payload, mut cs) = match name {
                    "chains" => suites::chains(&ctx, *genus)?,
                    "ladder" => suites::ladder(&ctx)?,
                    "omega" => suites::omega(&ctx)?,
                    "pairing" => {
                        let k = match complex {
                            Some(p) => io::load_complex(p)?,
                            None => kanform::simplicial::builtin_surface(*genus),
                        };
                        let c = match cycle {
                            Some(p) => io::load_chain(p)?,
                            None => default_cycle(&k)?,
                        };
                        suites::pairing(&ctx, &k, &c)?
                    }
                    "moduli" => suites::moduli(&ctx, *genus)?,
                    "cs" => suites::cs(&ctx)?,
                    "alpha" => suites::alpha(&ctx)?,
                    "catalog" => suites::catalog(&ctx, *genus, 2)?,
                    "kirillov" => suites::kirillov(&ctx)?,
                    other => return Err(Error::Input(format!("unknown suite `{other}`; expected one of {SUITES:?} or all"))),
                };
                for c in &mut cs {
                    c.name = format!("{name}: {}", c.name);
                }
                results.insert(name.into(), payload);
                checks.extend(cs);
            }
            let mut doc = header("verify", &ctx);
            doc.insert("conventions".into(), conventions());
            Ok(finish(doc, Value::Object(results), checks))
        }
        Command::Report { input } => {
            let v: Value = io::read_json(input)?;
            let checks = collect_checks(&v);
            if checks.is_empty() {
                return Err(Error::Input(format!("{} contains no checks", input.display())));
            }
            let mut text = String::new();
            if let Some(seed) = v.get("seed") {
                text.push_str(&format!("seed {seed}\n"));
            }
            text.push_str(&render(&checks));
            Ok(Output::Text(text, all_pass(&checks)))
        }
    }
}

/// The threefold cycle when the complex has `sigma`, else the surface cycle.
fn default_cycle(k: &kanform::simplicial::FreeSimplicialGroup) -> Result<kanform::chains::Chain> {
    if k.base("sigma").is_some() {
        kanform::cyclelift::threefold_cycle(k)
    } else {
        kanform::cyclelift::surface_cycle(k)
    }
}

fn main() -> ExitCode {
    // Usage errors are input errors; clap's own status 2 means verification failure here.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let result = setup_threads().and_then(|_| run(&cli));
    let (text, pass) = match result {
        Ok(Output::Json(v, pass)) => (serde_json::to_string_pretty(&v).expect("serializable") + "\n", pass),
        Ok(Output::Text(t, pass)) => (t, pass),
        Err(e) => {
            eprintln!("kanform: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let written = match &cli.global.out {
        Some(path) => io::write_atomic(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("kanform: {e}");
        return ExitCode::from(3);
    }
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
