use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gietlab::exact_iet::rational_to_f64;
use gietlab::full_family::apply;
use gietlab::render::{giet_svg, partition_svg};
use gietlab::semiconjugacy::{build_semiconjugacy, node_residual, residual};
use gietlab::thurston::{follows, solve, RefConfig, SolveOptions, SolveReport, SolveStatus};
use gietlab::{CombinatorialDatum, Document, Error, RauzyClass, RauzyPath};

const MAX_DEPTH: u32 = 64;
const MAX_ITER: u64 = 1_000_000;

#[derive(Parser)]
#[command(name = "gietlab", version, about = "Rauzy induction and path realization for GIETs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the Rauzy class of a datum, e.g. "A B C D / D C B A".
    Class { datum: String },
    /// Print a cyclic datum of the class (exit 2 if there is none).
    Cyclic { datum: String },
    /// Follow a string of `t`/`b` operations and print its matrix data.
    Path { datum: String, kinds: String },
    /// Run exact Rauzy–Veech induction on an IET document.
    Induct {
        file: PathBuf,
        #[arg(short, value_parser = clap::value_parser!(u32).range(0..=MAX_DEPTH as i64))]
        r: u32,
        /// Write the induced IET here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dynamical partition P(f, r) of an IET or GIET document.
    Partition {
        file: PathBuf,
        #[arg(short, value_parser = clap::value_parser!(u32).range(0..=MAX_DEPTH as i64))]
        r: u32,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Realize a Rauzy path inside the full family of a seed GIET.
    Realize {
        family: PathBuf,
        kinds: String,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..=MAX_ITER))]
        max_iter: u64,
        /// Fixed-point tolerance (max-norm step between iterates).
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Keep iterating after realization until the fixed-point tolerance.
        #[arg(long)]
        until_fixed: bool,
        /// Refine realized iterates by Newton's method (with --until-fixed).
        #[arg(long)]
        polish: bool,
        /// Averaging weight of the iteration; 1 is the plain pullback map.
        #[arg(long, default_value_t = 0.5)]
        relaxation: f64,
        /// Write the realizing GIET here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite approximation of the semiconjugacy between a GIET and an IET.
    Semiconj {
        giet: PathBuf,
        iet: PathBuf,
        #[arg(short, value_parser = clap::value_parser!(u32).range(0..=MAX_DEPTH as i64))]
        r: u32,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Sampling seed; GIETLAB_SEED overrides it.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the node table of h here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a partition, IET or GIET document as SVG.
    Render {
        file: PathBuf,
        #[arg(short)]
        o: PathBuf,
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn parse_datum(s: &str) -> Result<CombinatorialDatum> {
    s.parse().with_context(|| format!("bad datum `{s}`"))
}

fn read_doc(path: &Path) -> Result<Document> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Document::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Class { datum } => {
            let class = RauzyClass::generate(&parse_datum(&datum)?)?;
            println!("# {} data", class.len());
            for p in class.data() {
                println!("{p}{}", if p.is_cyclic() { "  cyclic" } else { "" });
            }
            Ok(0)
        }
        Command::Cyclic { datum } => {
            let class = RauzyClass::generate(&parse_datum(&datum)?)?;
            match class.find_cyclic() {
                Some(p) => {
                    println!("{p}");
                    Ok(0)
                }
                None => {
                    println!("none");
                    Ok(2)
                }
            }
        }
        Command::Path { datum, kinds } => {
            let path = RauzyPath::from_kinds(parse_datum(&datum)?, &kinds)?;
            print_path(&path);
            Ok(0)
        }
        Command::Induct { file, r, out } => {
            let iet = read_doc(&file)?.to_iet()?;
            let run = iet.rauzy_path(r as usize);
            println!("path {}", run.path.kinds());
            for (i, a) in run.path.arrows().iter().enumerate() {
                let d = &a.source;
                println!(
                    "step {} {} winner {} loser {} -> {}",
                    i + 1,
                    a.kind.as_char(),
                    d.letter(a.winner),
                    d.letter(a.loser),
                    a.target
                );
            }
            if run.tie {
                println!("tie after {} steps", run.path.len());
            }
            for (a, l) in run.iet.lengths().iter().enumerate() {
                println!("length {} {}", run.iet.datum().letter(a), l);
            }
            if let Some(out) = out {
                write(&out, &Document::from_iet(&run.iet).to_json())?;
            }
            Ok(if run.tie { 4 } else { 0 })
        }
        Command::Partition { file, r, svg, json } => {
            let doc = read_doc(&file)?;
            let r = r as usize;
            let datum = doc.datum()?;
            let out = match &doc {
                Document::Iet { .. } => {
                    let iet = doc.to_iet()?.normalized();
                    let p = iet.dynamical_partition(r)?;
                    let out = Document::from_exact_partition(&datum, &p);
                    // Attach the reference labels when the map is T_γ itself.
                    let path = iet.rauzy_path(r).path;
                    match RefConfig::build(&path) {
                        Ok(reference) if reference.base_iet() == &iet => out.with_tower_labels(&reference)?,
                        _ => out,
                    }
                }
                _ => Document::from_partition(&datum, &doc.to_giet()?.dynamical_partition(r)?),
            };
            let Document::Partition { atoms, .. } = &out else { unreachable!() };
            println!("# {} atoms", atoms.len());
            for a in atoms {
                let tower = match &a.tower {
                    Some((l, i)) => format!(" [{l},{i}]"),
                    None => String::new(),
                };
                let exact = match &a.exact {
                    Some([lo, hi]) => format!(" {lo} {hi}"),
                    None => String::new(),
                };
                println!("({},{}) {:.17e} {:.17e}{exact}{tower}", a.letter, a.index, a.lo, a.hi);
            }
            if let Some(path) = svg {
                write(&path, &partition_svg(atoms, datum.alphabet()))?;
            }
            if let Some(path) = json {
                write(&path, &out.to_json())?;
            }
            Ok(0)
        }
        Command::Realize {
            family,
            kinds,
            max_iter,
            tol,
            until_fixed,
            polish,
            relaxation,
            out,
        } => {
            if !(tol > 0.0) || !(relaxation > 0.0 && relaxation <= 1.0) {
                bail!("--tol must be positive and --relaxation in (0, 1]");
            }
            let seed = read_doc(&family)?.to_giet()?;
            let target = RauzyPath::from_kinds(seed.datum().clone(), &kinds)?;
            let opts = SolveOptions {
                max_iter: max_iter as usize,
                eps_fix: tol,
                until_fixed,
                polish,
                relaxation,
                ..SolveOptions::default()
            };
            realize(&seed, &target, &opts, out.as_deref())
        }
        Command::Semiconj {
            giet,
            iet,
            r,
            samples,
            seed,
            out,
        } => {
            let f = read_doc(&giet)?.to_giet()?;
            let t = read_doc(&iet)?.to_iet()?;
            let seed = match std::env::var("GIETLAB_SEED") {
                Ok(s) => s.trim().parse().context("GIETLAB_SEED must be an unsigned integer")?,
                Err(_) => seed,
            };
            let r = r as usize;
            let h = build_semiconjugacy(&f, &t, r)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let bound = t.normalized().dynamical_partition(r)?;
            let max_atom = bound
                .atoms()
                .iter()
                .map(|a| rational_to_f64(&(&a.hi - &a.lo)))
                .fold(0.0, f64::max);
            println!("nodes {}", h.nodes().len());
            println!("seed {seed}");
            println!("residual {:e}", residual(&h, &f, &t, samples, &mut rng));
            println!("node-residual {:e}", node_residual(&h, &f, &t));
            println!("max-atom {max_atom:e}");
            println!("min-image-gap {:e}", h.min_image_gap());
            match out {
                Some(path) => write(&path, &h.to_table())?,
                None => print!("{}", h.to_table()),
            }
            Ok(0)
        }
        Command::Render { file, o, samples } => {
            let doc = read_doc(&file)?;
            let svg = match &doc {
                Document::Partition { atoms, .. } => partition_svg(atoms, doc.datum()?.alphabet()),
                Document::Iet { .. } | Document::Giet { .. } => giet_svg(&doc.to_giet()?, samples.max(2)),
                Document::Datum { .. } => bail!("a datum document has nothing to draw"),
            };
            write(&o, &svg)?;
            Ok(0)
        }
    }
}

fn print_path(path: &RauzyPath) {
    let d = path.source();
    println!("source {}", path.source());
    println!("target {}", path.target());
    println!("kinds {}", path.kinds());
    let winners: Vec<&str> = path.winners().iter().map(|&w| d.letter(w)).collect();
    println!("winners {}", winners.join(" "));
    let m = path.matrix();
    for (a, name) in d.alphabet().iter().enumerate() {
        let row: Vec<String> = m.row(a).iter().map(|x| x.to_string()).collect();
        println!("B {name} {}", row.join(" "));
    }
    let (q, n) = path.return_times();
    let q: Vec<String> = q.iter().map(|x| x.to_string()).collect();
    println!("q {}", q.join(" "));
    println!("N {n}");
    println!("cyclic-target {}", path.target().is_cyclic());
    if let Ok(reference) = RefConfig::build(path) {
        let l: Vec<String> = reference.lengths().iter().map(|x| x.to_string()).collect();
        println!("lambda {}", l.join(" "));
        let h: Vec<String> = reference.h().iter().map(|x| x.to_string()).collect();
        println!("h {}", h.join(" "));
    }
}

fn realize(seed: &gietlab::Giet, target: &RauzyPath, opts: &SolveOptions, out: Option<&Path>) -> Result<u8> {
    let class = RauzyClass::generate(seed.datum())?;
    let eta = match class.path_to_nearest_cyclic(target.target()) {
        Ok(eta) => eta,
        Err(Error::NoCyclicDatum) => {
            println!("status no-cyclic-datum");
            return Ok(3);
        }
        Err(e) => return Err(e.into()),
    };
    let full = target.concat(&eta)?;
    let reference = match RefConfig::build(&full) {
        Ok(reference) => reference,
        Err(e) => {
            println!("status failed");
            println!("reason {e}");
            return Ok(4);
        }
    };
    println!("target {}", target.kinds());
    println!("completed {}", full.kinds());
    println!("N {}", reference.n());
    let report = solve(seed, &reference, opts);
    print_report(seed.datum(), &report);
    let map = if report.tau.is_empty() {
        None
    } else {
        apply(seed, &report.tau).ok()
    };
    if report.status != SolveStatus::Realized {
        if let Some(map) = &map {
            let run = map.rauzy_path(full.len());
            println!(
                "partial-path {}{}",
                run.path.kinds(),
                if run.tie { " (tie)" } else { "" }
            );
        }
        return Ok(4);
    }
    let map = map.context("realized map")?;
    let r = full.len();
    let certificate = match (map.dynamical_partition(r), reference.base_iet().dynamical_partition(r)) {
        (Ok(p), Ok(q)) => p.equivalent(&q),
        _ => false,
    };
    println!("truncation {}", follows(&map, target));
    println!("certificate {certificate}");
    if let Some(out) = out {
        write(out, &Document::from_giet(&map).to_json())?;
    }
    Ok(0)
}

fn print_report(datum: &CombinatorialDatum, report: &SolveReport) {
    println!("status {}", report.status);
    println!("iterations {}", report.iterations);
    if let Some(reason) = &report.boundary {
        println!("boundary {reason}");
    }
    for (a, t) in report.tau.iter().enumerate() {
        match small_fraction(*t) {
            Some((p, q)) => println!("tau {} {t:.17e} ~ {p}/{q}", datum.letter(a)),
            None => println!("tau {} {t:.17e}", datum.letter(a)),
        }
    }
    for (it, delta) in &report.deltas {
        println!("delta {it} {delta:e}");
    }
}

/// `p/q` with `q ≤ 10⁴` within `1e-12` of `x`, from the continued fraction.
fn small_fraction(x: f64) -> Option<(u64, u64)> {
    if !(0.0..=1.0).contains(&x) {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut y = x;
    for _ in 0..40 {
        let a = y.floor();
        let (p2, q2) = (a as u64 * p1 + p0, a as u64 * q1 + q0);
        if q2 > 10_000 {
            return None;
        }
        if (x - p2 as f64 / q2 as f64).abs() < 1e-12 {
            return Some((p2, q2));
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = y - a;
        if frac < 1e-15 {
            return None;
        }
        y = 1.0 / frac;
    }
    None
}
