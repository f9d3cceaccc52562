use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use leibalg::catalog::{self, ParamValue};
use leibalg::format::{parse_relations, write_algebra};
use leibalg::maximal::check_p1_seeded;
use leibalg::reproduce::{self, ReproduceConfig};
use leibalg::series::{is_cyclic, nilpotency_data};
use leibalg::{
    check_p2, enumerate_maximal, fingerprint, is_isomorphic, leibniz_constraints, parse_algebra, parse_parametric,
    verify_implied_relations, CatalogError, Field, IsoVerdict, LeibnizAlgebra, SearchError,
};

#[derive(Parser)]
#[command(name = "leibalg", version, about = "Nilpotent left Leibniz algebras over Q and GF(p)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Leibniz identity on every basis triple.
    Verify { file: PathBuf },
    /// Central series, class, coclass and related invariants.
    Analyze { file: PathBuf },
    /// List the maximal subalgebras with a fingerprint digest each.
    Maximals(FileAndField),
    /// Search for an isomorphism between two algebras.
    Iso {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_parser = parse_field)]
        field: Option<Field>,
    },
    /// Are all maximal subalgebras isomorphic?
    P1 {
        #[command(flatten)]
        input: FileAndField,
        #[arg(long, env = "LEIBALG_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Do all maximal subalgebras have the same upper central series dimensions?
    P2(FileAndField),
    /// The built-in catalog of named algebras.
    Catalog {
        #[command(subcommand)]
        action: CatalogCommand,
    },
    /// Print the constraints the Leibniz identity puts on a parametric table.
    Derive { file: PathBuf },
    /// Test whether a set of relations is equivalent to the Leibniz identity
    /// on a parametric table, by seeded sampling.
    VerifyRelations {
        table: PathBuf,
        relations: PathBuf,
        #[arg(long, value_parser = parse_field, default_value = "GF(101)")]
        field: Field,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, env = "LEIBALG_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Run the whole claim suite and write the report.
    Reproduce {
        /// Comma-separated primes.
        #[arg(long, default_value = "3,5,7", value_parser = parse_primes)]
        fields: PrimeList,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = "LEIBALG_SEED", default_value_t = 0)]
        seed: u64,
        /// Append the time spent on each claim.
        #[arg(long)]
        timings: bool,
        #[arg(long, hide = true)]
        corrupt: Option<String>,
    },
}

#[derive(Args)]
struct FileAndField {
    file: PathBuf,
    /// Read the table in this field instead of the one in the file.
    #[arg(long, value_parser = parse_field)]
    field: Option<Field>,
}

#[derive(Subcommand)]
enum CatalogCommand {
    List,
    /// Instantiate an entry and write it in the text format.
    Make {
        name: String,
        #[command(flatten)]
        params: EntryParams,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Report on each constraint of an entry.
    Check {
        name: String,
        #[command(flatten)]
        params: EntryParams,
    },
}

#[derive(Args)]
struct EntryParams {
    #[arg(long, value_parser = parse_field)]
    field: Field,
    /// `name=value`, repeated.
    #[arg(long = "param")]
    params: Vec<String>,
}

#[derive(Clone)]
struct PrimeList(Vec<Field>);

fn parse_field(s: &str) -> Result<Field, String> {
    s.parse().map_err(|e: leibalg::FieldError| e.to_string())
}

fn parse_primes(s: &str) -> Result<PrimeList, String> {
    s.split(',')
        .map(|t| {
            let p: u64 = t.trim().parse().map_err(|_| format!("`{t}` is not a number"))?;
            Field::prime(p).map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, _>>()
        .map(PrimeList)
}

/// Exit status 2 (bad input) or 3 (internal invariant broken).
enum Failure {
    Input(String),
    Internal(String),
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Internal(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::InternalError(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

type Outcome = Result<bool, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path, field: Option<Field>) -> Result<LeibnizAlgebra, Failure> {
    let a = parse_algebra(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    match field {
        Some(f) => a.over(f).map_err(input),
        None => Ok(a),
    }
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_verify(file: &Path) -> Outcome {
    let a = load(file, None)?;
    let violations = a.check_leibniz();
    let n = a.dim();
    if violations.is_empty() {
        println!("Leibniz identity holds on all {} basis triples", n * n * n);
        return Ok(true);
    }
    println!("Leibniz identity fails on {} of {} basis triples", violations.len(), n * n * n);
    for v in &violations {
        println!(
            "  ({}, {}, {}): residual {}",
            a.label(v.i),
            a.label(v.j),
            a.label(v.k),
            v.residual
        );
    }
    Ok(false)
}

fn cmd_analyze(file: &Path) -> Outcome {
    let a = load(file, None)?;
    let prof = nilpotency_data(&a);
    let show = |x: Option<usize>| x.map_or_else(|| "undefined".to_string(), |v| v.to_string());
    let list = |xs: &[usize]| xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    println!("field: {}", a.field());
    println!("dim: {}", a.dim());
    println!("lower dims: {}", list(&prof.lower_dims));
    println!("upper dims: {}", list(&prof.upper_dims));
    println!("nilpotent: {}", prof.nilpotent);
    println!("class: {}", show(prof.class));
    println!("coclass: {}", show(prof.coclass));
    println!("dim Z: {}", a.center().dim());
    println!("dim Leib: {}", a.leib_ideal().dim());
    match is_cyclic(&a) {
        Ok(c) => println!("cyclic: {}", c.cyclic),
        Err(_) => println!("cyclic: undefined"),
    }
    println!("lie: {}", a.is_lie());
    Ok(true)
}

fn cmd_maximals(args: &FileAndField) -> Outcome {
    let a = load(&args.file, args.field)?;
    for m in enumerate_maximal(&a)? {
        println!("{} {}", m.tag_string(), fingerprint(&m.induced).digest());
    }
    Ok(true)
}

fn cmd_iso(first: &Path, second: &Path, field: Option<Field>) -> Outcome {
    let a = load(first, field)?;
    let b = load(second, field)?;
    match is_isomorphic(&a, &b)? {
        IsoVerdict::Yes(map) => {
            println!("isomorphic");
            for (i, v) in map.images.iter().enumerate() {
                println!("  {} -> {v}", a.label(i));
            }
            Ok(true)
        }
        IsoVerdict::No(w) => {
            println!("not isomorphic: {w}");
            Ok(false)
        }
        IsoVerdict::Unknown(why) => Err(Failure::Input(format!("undecided: {why}; pass --field GF(p)"))),
    }
}

fn cmd_p1(args: &FileAndField, seed: u64) -> Outcome {
    let a = load(&args.file, args.field)?;
    let r = check_p1_seeded(&a, seed)?;
    if r.holds {
        match r.transitivity_triple {
            Some((i, j, k)) => println!("P1 holds: {r}, composed maps checked on M{i}, M{j}, M{k}"),
            None => println!("P1 holds: {r}"),
        }
    } else {
        println!("P1 fails: {r}");
    }
    Ok(r.holds)
}

fn cmd_p2(args: &FileAndField) -> Outcome {
    let a = load(&args.file, args.field)?;
    let r = check_p2(&a)?;
    println!("P2 {}: {r}", if r.holds { "holds" } else { "fails" });
    Ok(r.holds)
}

fn entry_params(name: &str, p: &EntryParams) -> Result<Vec<ParamValue>, Failure> {
    p.params
        .iter()
        .map(|s| catalog::parse_param(name, p.field, s).map_err(Failure::from))
        .collect()
}

fn cmd_catalog(action: &CatalogCommand) -> Outcome {
    match action {
        CatalogCommand::List => {
            for e in catalog::list() {
                let dim = e.dim.map_or_else(|| "n".to_string(), |d| d.to_string());
                let params: Vec<&str> = e.params.iter().map(|p| p.name).collect();
                println!("{:<16} dim {:<2} params [{}]  {}", e.name, dim, params.join(", "), e.source);
            }
            Ok(true)
        }
        CatalogCommand::Make { name, params, out } => {
            let values = entry_params(name, params)?;
            let a = catalog::instantiate(name, params.field, &values)?;
            write_out(out.as_deref(), &write_algebra(&a))?;
            Ok(true)
        }
        CatalogCommand::Check { name, params } => {
            let values = entry_params(name, params)?;
            let reports = catalog::validate_params(name, params.field, &values)?;
            for r in &reports {
                println!("{r}");
            }
            Ok(reports.iter().all(|r| r.holds))
        }
    }
}

fn cmd_derive(file: &Path) -> Outcome {
    let (table, _) = parse_parametric(&read(file)?).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
    let constraints = leibniz_constraints(&table);
    println!("{} constraints", constraints.len());
    for c in &constraints {
        println!("{c} = 0");
    }
    Ok(true)
}

fn cmd_verify_relations(table: &Path, relations: &Path, field: Field, trials: usize, seed: u64) -> Outcome {
    let (t, _) = parse_parametric(&read(table)?).map_err(|e| Failure::Input(format!("{}: {e}", table.display())))?;
    let rels = parse_relations(t.vars(), &read(relations)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", relations.display())))?;
    let report = verify_implied_relations(&t, &rels, trials, field, seed).map_err(input)?;
    println!("{report}");
    Ok(report.holds())
}

fn cmd_reproduce(config: &ReproduceConfig, out: Option<&Path>, timings: bool) -> Outcome {
    let mut file = match out {
        Some(path) => Some(fs::File::create(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?),
        None => None,
    };
    let report = reproduce::run(config);
    let text = report.render(timings);
    match (&mut file, out) {
        (Some(f), Some(path)) => {
            f.write_all(text.as_bytes())
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            println!("{}", text.lines().last().unwrap_or_default());
        }
        _ => print!("{text}"),
    }
    Ok(report.passed())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Verify { file } => cmd_verify(&file),
        Command::Analyze { file } => cmd_analyze(&file),
        Command::Maximals(args) => cmd_maximals(&args),
        Command::Iso { first, second, field } => cmd_iso(&first, &second, field),
        Command::P1 { input, seed } => cmd_p1(&input, seed),
        Command::P2(args) => cmd_p2(&args),
        Command::Catalog { action } => cmd_catalog(&action),
        Command::Derive { file } => cmd_derive(&file),
        Command::VerifyRelations {
            table,
            relations,
            field,
            trials,
            seed,
        } => cmd_verify_relations(&table, &relations, field, trials, seed),
        Command::Reproduce {
            fields,
            out,
            seed,
            timings,
            corrupt,
        } => {
            if let Some(name) = &corrupt {
                catalog::entry(name)?;
            }
            let config = ReproduceConfig {
                fields: fields.0,
                seed,
                corrupt,
            };
            cmd_reproduce(&config, out.as_deref(), timings)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
