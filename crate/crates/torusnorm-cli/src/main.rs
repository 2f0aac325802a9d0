use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use torusnorm::ball::UnitBall;
use torusnorm::basis::good_short_basis;
use torusnorm::genfun::{self, DENSE_RANK_CAP};
use torusnorm::oracle;
use torusnorm::plot::render_svg;
use torusnorm::reconstruct::{raw_from_norm, NormSpec};
use torusnorm::spectrum::{spectrum, spectrum_multiset};
use torusnorm::surface::{text, validate};
use torusnorm::{CycleRep, Dart, EmbeddedGraph, Error, HomologyClass, Weight};

#[derive(Parser)]
#[command(name = "torusnorm", version, about = "Length spectra of weighted graphs on the torus")]
struct Cli {
    /// Worker threads for the oracle and randomized trials.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a file describes a cellular torus embedding.
    Validate { file: PathBuf },
    /// Print the good short basis.
    Basis { file: PathBuf },
    /// Print the list H and the extremal points of the unit ball.
    Ball { file: PathBuf },
    /// Norm of a class `x,y` or of a closed walk given as darts `label.side ...`.
    Norm { file: PathBuf, query: String },
    /// First values of the length spectrum, one JSON object per line.
    Spectrum {
        file: PathBuf,
        #[arg(short, default_value_t = 10)]
        k: usize,
        #[arg(long)]
        multiset: bool,
    },
    /// Compare the length spectra of two graphs.
    Compare(CompareArgs),
    /// Build a graph from a norm given as JSON.
    Reconstruct {
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brute-force reference values.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Draw unit balls and their dilates as SVG.
    Plot {
        #[arg(required = true, num_args = 1..)]
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = 4)]
        dilates: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CompareArgs {
    first: PathBuf,
    second: PathBuf,
    #[arg(long, conflicts_with = "unmarked", required_unless_present = "unmarked")]
    marked: bool,
    #[arg(long)]
    unmarked: bool,
    /// Exact comparison by dense expansion.
    #[arg(long, requires = "unmarked", conflicts_with = "trials")]
    det: bool,
    #[arg(long, default_value_t = 20)]
    trials: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Brute-force norm of a class `x,y`.
    Norm {
        file: PathBuf,
        class: String,
        #[arg(long, default_value_t = 1)]
        window: i64,
    },
    /// Brute-force first values of the spectrum.
    Spectrum {
        file: PathBuf,
        #[arg(short, default_value_t = 10)]
        k: usize,
    },
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<EmbeddedGraph, Error> {
    text::read_graph(&read(path)?)
}

fn parse_class(s: &str) -> Option<HomologyClass> {
    let (x, y) = s.split_once(',')?;
    Some(HomologyClass::new(x.trim().parse().ok()?, y.trim().parse().ok()?))
}

fn rational_json(r: &BigRational) -> Value {
    let n = r.numer().to_i64().map_or_else(|| json!(r.numer().to_string()), |v| json!(v));
    let d = r.denom().to_i64().map_or_else(|| json!(r.denom().to_string()), |v| json!(v));
    json!({"num": n, "den": d})
}

fn weight_json(w: &Weight, scale: u64) -> Value {
    match w.to_rational(scale) {
        Some(r) => rational_json(&r),
        None => json!({"coeffs": w.coeffs(), "scale": scale}),
    }
}

fn darts_json(g: &EmbeddedGraph, darts: &[Dart]) -> Value {
    json!(darts.iter().map(|&d| g.dart_label(d)).collect::<Vec<_>>())
}

fn class_json(c: HomologyClass) -> Value {
    json!([c.x, c.y])
}

fn cycle_json(g: &EmbeddedGraph, c: &CycleRep) -> Value {
    json!({"class": class_json(c.class), "weight": weight_json(&c.weight, g.scale()), "darts": darts_json(g, &c.darts)})
}

fn matrix_json(m: [[i64; 2]; 2]) -> String {
    format!("[[{},{}],[{},{}]]", m[0][0], m[0][1], m[1][0], m[1][1])
}

enum Failure {
    Domain(Error),
    Report(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn emit(out: &mut String, v: Value) {
    out.push_str(&v.to_string());
    out.push('\n');
}

fn write_or_print(out: &Option<PathBuf>, body: &str) -> Result<String, Failure> {
    match out {
        Some(p) => {
            fs::write(p, body).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
            Ok(String::new())
        }
        None => Ok(body.to_string()),
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let threads = cli.threads.max(1);
    let mut out = String::new();
    match cli.command {
        Command::Validate { file } => {
            let raw = text::parse(&read(&file)?)?;
            let report = validate(&raw);
            if !report.is_ok() {
                return Err(Failure::Report(report.to_string()));
            }
            out.push_str(&format!("{report}\n"));
        }
        Command::Basis { file } => {
            let g = load(&file)?;
            let b = good_short_basis(&g)?;
            emit(&mut out, json!({"a": cycle_json(&g, &b.a), "b": cycle_json(&g, &b.b)}));
        }
        Command::Ball { file } => {
            let g = load(&file)?;
            let ball = UnitBall::new(&g)?;
            let h: Vec<Value> = ball
                .h()
                .iter()
                .map(|e| json!({"class": class_json(e.class), "weight": weight_json(&e.weight, g.scale()), "cycle": darts_json(&g, &e.cycle.darts)}))
                .collect();
            let points = ball.extremal_rational();
            let extremal: Vec<Value> = ball
                .extremal_points()
                .iter()
                .enumerate()
                .map(|(i, (c, w))| {
                    let point = points.as_ref().map_or(Value::Null, |p| json!([rational_json(&p[i].0), rational_json(&p[i].1)]));
                    json!({"class": class_json(*c), "weight": weight_json(w, g.scale()), "point": point})
                })
                .collect();
            emit(&mut out, json!({"H": h, "extremal": extremal, "iterations": ball.iterations()}));
        }
        Command::Norm { file, query } => {
            let g = load(&file)?;
            let ball = UnitBall::new(&g)?;
            let class = match parse_class(&query) {
                Some(c) => c,
                None => ball.basis().homology_class(&g, &text::parse_walk(&g, &query)?)?,
            };
            let value = ball.norm_eval(class);
            let cycle = if class.is_zero() { Value::Null } else { darts_json(&g, &ball.tight_cycle(&g, class)?.darts) };
            emit(&mut out, json!({"class": class_json(class), "value": weight_json(&value, g.scale()), "cycle": cycle}));
        }
        Command::Spectrum { file, k, multiset } => {
            let g = load(&file)?;
            let ball = UnitBall::new(&g)?;
            if multiset {
                for m in spectrum_multiset(&ball, k)? {
                    emit(&mut out, json!({"value": weight_json(&m.value, g.scale()), "multiplicity": m.count, "truncated": m.truncated}));
                }
            } else {
                for s in spectrum(&ball, k)? {
                    emit(&mut out, json!({"value": weight_json(&s.value, g.scale()), "class": class_json(s.class)}));
                }
            }
        }
        Command::Compare(c) => {
            let (g1, g2) = (load(&c.first)?, load(&c.second)?);
            let (b1, b2) = (UnitBall::new(&g1)?, UnitBall::new(&g2)?);
            if c.marked {
                match genfun::marked_equal(&b1, &b2).matrix {
                    Some(m) => out.push_str(&format!("{}\n", matrix_json(m))),
                    None => out.push_str("NOT-EQUIVALENT\n"),
                }
            } else {
                let (f1, f2) = (genfun::generating_function(&b1), genfun::generating_function(&b2));
                if c.det {
                    let eq = genfun::unmarked_equal_det(&f1, &f2, DENSE_RANK_CAP)?;
                    out.push_str(if eq { "EQUAL\n" } else { "DIFFERENT\n" });
                } else {
                    let v = genfun::unmarked_equal_rand(&f1, &f2, c.trials, c.seed, threads)?;
                    match &v.witness {
                        Some(w) => {
                            let w: Vec<String> = w.iter().map(|x| x.to_string()).collect();
                            out.push_str(&format!("DIFFERENT witness=[{}] seed={} trials={}\n", w.join(","), v.seed, v.trials));
                        }
                        None => out.push_str(&format!(
                            "PROBABLY-EQUAL error<={} seed={} trials={} degree={}\n",
                            v.error_bound(),
                            v.seed,
                            v.trials,
                            v.degree_bound
                        )),
                    }
                }
            }
        }
        Command::Reconstruct { spec, out: dest } => {
            let spec = parse_spec(&read(&spec)?)?;
            let raw = raw_from_norm(&spec)?;
            return write_or_print(&dest, &text::write(&raw));
        }
        Command::Oracle { command } => match command {
            OracleCommand::Norm { file, class, window } => {
                let g = load(&file)?;
                let alpha = parse_class(&class).ok_or_else(|| Error::Parse(format!("bad class `{class}`")))?;
                let basis = good_short_basis(&g)?;
                let (w, cert) = oracle::brute_norm(&g, basis.coords(), alpha, window)?;
                emit(
                    &mut out,
                    json!({"class": class_json(alpha), "value": weight_json(&w, g.scale()), "window": cert.window,
                           "boundary_distance": weight_json(&cert.boundary_distance, g.scale())}),
                );
            }
            OracleCommand::Spectrum { file, k } => {
                if k < 1 {
                    return Err(Error::EmptyRequest.into());
                }
                let g = load(&file)?;
                let basis = good_short_basis(&g)?;
                for (w, c) in oracle::brute_spectrum_threaded(&g, basis.coords(), k, threads).items {
                    emit(&mut out, json!({"value": weight_json(&w, g.scale()), "class": class_json(c)}));
                }
            }
        },
        Command::Plot { files, dilates, out: dest } => {
            let graphs: Vec<EmbeddedGraph> = files.iter().map(|f| load(f)).collect::<Result<_, _>>()?;
            let balls: Vec<UnitBall> = graphs.iter().map(UnitBall::new).collect::<Result<_, _>>()?;
            let refs: Vec<&UnitBall> = balls.iter().collect();
            return write_or_print(&dest, &render_svg(&refs, dilates));
        }
    }
    Ok(out)
}

fn parse_value(v: &Value) -> Result<BigRational, Error> {
    let bad = || Error::Parse(format!("bad norm value {v}"));
    match v {
        Value::Number(n) => n.as_i64().map(|i| BigRational::from_integer(i.into())).ok_or_else(bad),
        Value::String(s) => match s.split_once('/') {
            Some((p, q)) => {
                let (p, q): (i64, i64) = (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?);
                if q == 0 {
                    return Err(bad());
                }
                Ok(BigRational::new(p.into(), q.into()))
            }
            None => s.trim().parse::<i64>().map(|i| BigRational::from_integer(i.into())).map_err(|_| bad()),
        },
        _ => Err(bad()),
    }
}

fn parse_spec(input: &str) -> Result<NormSpec, Error> {
    #[derive(serde::Deserialize)]
    struct Raw {
        directions: Vec<[i64; 2]>,
        values: Vec<Value>,
    }
    let raw: Raw = serde_json::from_str(input).map_err(|e| Error::Parse(e.to_string()))?;
    if raw.directions.len() != raw.values.len() {
        return Err(Error::Parse("directions and values differ in length".into()));
    }
    let entries = raw
        .directions
        .iter()
        .zip(&raw.values)
        .map(|(d, v)| Ok((HomologyClass::new(d[0], d[1]), parse_value(v)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    NormSpec::new(entries)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(s) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Err(Failure::Report(r)) => {
            print!("{r}");
            if !r.ends_with('\n') {
                println!();
            }
            ExitCode::from(1)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
