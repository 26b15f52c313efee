//! Command-line front end.
//!
//! Exit codes: 0 success or verified, 1 verified false, 2 usage error or
//! malformed input, 3 construction failure.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::construct::{
    build_cms_for, build_ms_q2t1, build_ms_qt, cms_compose, make_block_assignment, plan_order,
    product_compose, ConstructError,
};
use crate::gf::{build_field, prime_power, FieldTable, GfError};
use crate::io::{self as fmt_io, IoError};
use crate::linalg::{find_cms_pair, find_sdloa_pair};
use crate::oa::{check_sdloa, verify_large_set, verify_oa};
use crate::verify::{verify_cms, verify_ms};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONSTRUCT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "multimagic", version, about = "Build and verify multimagic squares over finite fields")]
pub struct Cli {
    /// Worker threads for generation and verification (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Print pipeline stages (-v) or search details (-vv) on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PairKind {
    Sdloa,
    Cms,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Qt,
    Q2t1,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Describe GF(p^m): modulus, primitive element, optionally full tables.
    Field {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Print the addition and multiplication tables.
        #[arg(long)]
        tables: bool,
    },
    /// Search for a certified matrix pair and print its certificate.
    SearchMatrices {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        t: usize,
        #[arg(long, value_enum)]
        kind: PairKind,
    },
    /// Generate a verified multimagic square.
    GenMs {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        t: usize,
        #[arg(long, value_enum, default_value = "qt")]
        method: Method,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Generate a verified family of complementary squares.
    GenCms {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compose squares into a larger verified square.
    Compose(ComposeArgs),
    /// Verify a square file; the degree defaults to the header's `t`.
    VerifyMs {
        file: PathBuf,
        #[arg(long)]
        t: Option<u32>,
        /// Also write a key-value report.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Verify a complementary family bundle.
    VerifyCms {
        file: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Verify an array family: each member by default, or the family.
    VerifyOa {
        file: PathBuf,
        #[arg(long, conflicts_with = "sdloa")]
        large_set: bool,
        #[arg(long)]
        sdloa: bool,
    },
    /// Plan an order q^m as a product of constructible factors.
    Plan {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Debug, Args)]
struct OutArgs {
    #[arg(long)]
    out: PathBuf,
    /// Write little-endian binary entries instead of text.
    #[arg(long)]
    binary: bool,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct ComposeMode {
    /// Product of two squares of equal degree.
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    product: Option<Vec<PathBuf>>,
    /// Block composition of a square with a complementary family bundle.
    #[arg(long, num_args = 2, value_names = ["A", "BUNDLE"])]
    cms: Option<Vec<PathBuf>>,
}

#[derive(Debug, Args)]
struct ComposeArgs {
    #[command(flatten)]
    mode: ComposeMode,
    /// Field order for the block assignment; inferred from the orders if absent.
    #[arg(long)]
    q: Option<u32>,
    #[command(flatten)]
    out: OutArgs,
}

/// A failure mapped onto the exit-code contract.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Construct(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<GfError> for Failure {
    fn from(e: GfError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<ConstructError> for Failure {
    fn from(e: ConstructError) -> Self {
        Failure::Construct(e.to_string())
    }
}

fn write_failed(path: &Path, e: io::Error) -> Failure {
    Failure::Construct(format!("cannot write {}: {e}", path.display()))
}

fn field(q: u32) -> Result<Arc<FieldTable>, Failure> {
    Ok(Arc::new(FieldTable::for_order(q)?))
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new().filter_level(level).format_timestamp(None).try_init();
    log::set_max_level(level);

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match pool.install(|| dispatch(cli.command)) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Construct(msg)) => {
            eprintln!("construction failed: {msg}");
            EXIT_CONSTRUCT
        }
    }
}

fn verdict(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_FALSE
    }
}

fn dispatch(command: Command) -> Result<i32, Failure> {
    match command {
        Command::Field { p, m, tables } => {
            let f = build_field(p, m)?;
            println!("{f}");
            println!("primitive element: {}", f.primitive_element());
            if tables {
                for (name, op) in [("+", FieldTable::add as fn(&FieldTable, _, _) -> _), ("*", FieldTable::mul)] {
                    println!("{name}");
                    for a in f.elements() {
                        let row: Vec<String> = f.elements().map(|b| op(&f, a, b).index().to_string()).collect();
                        println!("{}", row.join(" "));
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::SearchMatrices { q, t, kind } => {
            let f = field(q)?;
            let found = match kind {
                PairKind::Sdloa => find_sdloa_pair(&f, t),
                PairKind::Cms => find_cms_pair(&f, t),
            };
            let cert = found.map_err(|e| Failure::Construct(e.to_string()))?;
            fmt_io::write_pair_certificate(&mut io::stdout().lock(), &cert)
                .map_err(|e| Failure::Construct(e.to_string()))?;
            Ok(EXIT_OK)
        }
        Command::GenMs { q, t, method, out } => {
            let f = field(q)?;
            let sq = match method {
                Method::Qt => build_ms_qt(&f, t)?,
                Method::Q2t1 => build_ms_q2t1(&f, t)?,
            };
            fmt_io::save_ms(&out.out, &sq, out.binary).map_err(|e| write_failed(&out.out, e))?;
            println!("wrote verified MS({}, {t}) to {}", sq.order(), out.out.display());
            Ok(EXIT_OK)
        }
        Command::GenCms { q, t, out } => {
            let fam = build_cms_for(&field(q)?, t)?;
            fmt_io::save_cms_bundle(&out, &fam).map_err(|e| write_failed(&out, e))?;
            println!(
                "wrote verified {}-CMS({}, {t}) to {}",
                fam.count(),
                fam.order(),
                out.display()
            );
            Ok(EXIT_OK)
        }
        Command::Compose(args) => compose(args),
        Command::VerifyMs { file, t, report } => {
            let sq = fmt_io::load_ms(&file)?;
            let r = verify_ms(&sq, t.unwrap_or(sq.degree()));
            print!("{r}");
            if let Some(path) = report {
                write_report(&path, |w| fmt_io::write_ms_report(w, &r))?;
            }
            Ok(verdict(r.passed()))
        }
        Command::VerifyCms { file, report } => {
            let fam = fmt_io::load_cms_bundle(&file)?;
            let r = verify_cms(&fam);
            print!("{r}");
            if let Some(path) = report {
                write_report(&path, |w| fmt_io::write_cms_report(w, &r))?;
            }
            Ok(verdict(r.passed()))
        }
        Command::VerifyOa { file, large_set, sdloa } => {
            let fam = fmt_io::load_oa_family(&file)?;
            let t = fam.members()[0].t();
            let ok = if large_set {
                let ok = verify_large_set(&fam, t).map_err(IoError::from)?;
                println!("large set of {} arrays at strength {t}: {}", fam.len(), pass(ok));
                ok
            } else if sdloa {
                let c = check_sdloa(&fam, t).map_err(IoError::from)?;
                println!("large set: {}", pass(c.large_set));
                println!("transposed large set: {}", pass(c.transposed_large_set));
                println!("diagonal array: {}", pass(c.diagonal));
                println!("back-diagonal array: {}", pass(c.back_diagonal));
                println!("strong double large set: {}", pass(c.holds()));
                c.holds()
            } else {
                let mut all = true;
                for (i, a) in fam.members().iter().enumerate() {
                    let ok = verify_oa(a);
                    all &= ok;
                    println!("array {i}: OA({}; {}, {}, {}): {}", a.n_cols(), a.t(), a.k(), a.v(), pass(ok));
                }
                all
            };
            Ok(verdict(ok))
        }
        Command::Plan { q, t, m } => {
            let plan = plan_order(q, t, m).map_err(|e| Failure::Usage(e.to_string()))?;
            println!("{plan}");
            Ok(verdict(plan.feasible()))
        }
    }
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn write_report(path: &Path, body: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>) -> Result<(), Failure> {
    let mut w = BufWriter::new(File::create(path).map_err(|e| write_failed(path, e))?);
    body(&mut w).and_then(|_| w.flush()).map_err(|e| write_failed(path, e))
}

/// Largest `q` with `m = q^a` and `m' = q^b`, `b <= a`, that admits a
/// block assignment.
fn infer_assignment_field(m: usize, m_prime: usize) -> Option<(Arc<FieldTable>, usize, usize)> {
    (2..=m.max(2)).rev().find_map(|q| {
        prime_power(q as u32)?;
        let a = exact_log(m, q)?;
        let b = exact_log(m_prime, q)?;
        let f = Arc::new(FieldTable::for_order(q as u32).ok()?);
        make_block_assignment(&f, a, b).ok()?;
        Some((f, a, b))
    })
}

fn exact_log(x: usize, q: usize) -> Option<usize> {
    let (mut v, mut e) = (1usize, 0);
    while v < x {
        v = v.checked_mul(q)?;
        e += 1;
    }
    (v == x).then_some(e)
}

fn compose(args: ComposeArgs) -> Result<i32, Failure> {
    let out = &args.out;
    let sq = if let Some(paths) = &args.mode.product {
        let a = fmt_io::load_ms(&paths[0])?;
        let b = fmt_io::load_ms(&paths[1])?;
        product_compose(&a, &b)?
    } else {
        let paths = args.mode.cms.as_ref().expect("clap enforces one mode");
        let a = fmt_io::load_ms(&paths[0])?;
        let fam = fmt_io::load_cms_bundle(&paths[1])?;
        let (m, m_prime) = (a.order(), fam.count());
        let (f, big, small) = match args.q {
            Some(q) => {
                let f = field(q)?;
                let q = q as usize;
                match (exact_log(m, q), exact_log(m_prime, q)) {
                    (Some(a), Some(b)) => (f, a, b),
                    _ => {
                        return Err(Failure::Usage(format!(
                            "orders {m} and {m_prime} are not both powers of {q}"
                        )))
                    }
                }
            }
            None => infer_assignment_field(m, m_prime).ok_or_else(|| {
                Failure::Usage(format!("no field order q makes {m} and {m_prime} powers of q"))
            })?,
        };
        let assign = make_block_assignment(&f, big, small)?;
        cms_compose(&a, &fam, &assign)?
    };
    fmt_io::save_ms(&out.out, &sq, out.binary).map_err(|e| write_failed(&out.out, e))?;
    println!("wrote verified MS({}, {}) to {}", sq.order(), sq.degree(), out.out.display());
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_logs() {
        assert_eq!(exact_log(125, 5), Some(3));
        assert_eq!(exact_log(1, 5), Some(0));
        assert_eq!(exact_log(100, 5), None);
    }

    #[test]
    fn assignment_field_inference() {
        let (f, a, b) = infer_assignment_field(125, 25).unwrap();
        assert_eq!((f.order(), a, b), (5, 3, 2));
        let (f, a, b) = infer_assignment_field(16, 4).unwrap();
        assert_eq!((f.order(), a, b), (4, 2, 1));
        assert!(infer_assignment_field(9, 3).is_none());
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(["multimagic", "no-such-command"]), EXIT_USAGE);
        assert_eq!(run(["multimagic", "plan", "--q", "6", "--t", "3", "--m", "4"]), EXIT_USAGE);
        assert_eq!(run(["multimagic", "field", "--p", "4"]), EXIT_USAGE);
    }

    #[test]
    fn plan_exit_codes() {
        assert_eq!(run(["multimagic", "plan", "--q", "7", "--t", "3", "--m", "8"]), EXIT_OK);
        assert_eq!(run(["multimagic", "plan", "--q", "5", "--t", "3", "--m", "4"]), EXIT_FALSE);
    }
}
