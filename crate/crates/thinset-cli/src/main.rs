use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use thinset_core::expsum::{full_dft, parseval, sum_single, GTable, ResidueHistogram};
use thinset_core::localcount::{zero_census, VTable, DEFAULT_TABLE_CAP};
use thinset_core::polyring::PolyError;
use thinset_core::primefield::is_prime;
use thinset_core::sieve::{
    bilinear_term, brute_count, exponent_scan, sieve_rhs, SieveConfig,
};
use thinset_core::strata::{
    cyclic_dichotomy_census, exceptional_flag, hyperplane_moment, tier_census, weil_census,
    Hyperplane,
};
use thinset_core::{Character, Polynomial, PrimeCtx, SievedForm};
use thinset_cli::{catalog, find_fixture, to_csv, write_atomic, RunManifest, SCHEMA};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(name = "thinset", version, about = "finite-field exponential-sum and polynomial-sieve laboratory")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write output here (with a manifest alongside) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (recorded; desk-scale jobs run single-threaded).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Seed for all randomized subsampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Dense-table entry cap.
    #[arg(long, global = true, env = "THINSET_TABLE_CAP")]
    table_cap: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Debug, clap::Args)]
struct PolyArgs {
    /// Polynomial text, e.g. "Y^2 - X1".
    #[arg(long)]
    poly: Option<String>,
    /// Fixture id (see `thinset fixtures`).
    #[arg(long)]
    fixture: Option<String>,
    /// Number of X-variables; overrides the fixture default.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact N(F,B) over the box [-B,B]^n.
    Count {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        b: u64,
    },
    /// S(u,p): one frequency with its exact histogram, or the full table.
    Expsum {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        p: u64,
        /// Frequency vector "u1,u2,...".
        #[arg(long)]
        u: Option<String>,
        /// Compute the full table.
        #[arg(long)]
        all: bool,
        /// Export the full table as interleaved re/im little-endian doubles
        /// (JSON sidecar written alongside).
        #[arg(long)]
        export: Option<PathBuf>,
        /// Export the v-table as little-endian u16 values with a sidecar.
        #[arg(long)]
        export_vtable: Option<PathBuf>,
    },
    /// Hyperplane second moment: spectral sum vs autocorrelation integer.
    Moment {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        p: u64,
        /// Normal vector "w1,w2,...".
        #[arg(long)]
        w: String,
    },
    /// Tier census of |S(u,p)| against thresholds C p^{(n+j-1)/2}.
    Strata {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        p: u64,
        /// Threshold constant (default 1).
        #[arg(long)]
        c: Option<f64>,
        /// Calibrate C to the max of |S|/p^{n/2} over these pilot primes.
        #[arg(long)]
        calibrate: Option<String>,
    },
    /// Dichotomy, Weil, or zero censuses.
    Census {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long, value_parser = ["dichotomy", "weil", "zero"])]
        kind: String,
        #[arg(long)]
        p: u64,
        /// Character order for dichotomy/weil.
        #[arg(long, default_value_t = 2)]
        d: u64,
        /// Coefficient window for the zero census.
        #[arg(long, default_value_t = 0)]
        lo: u64,
        #[arg(long)]
        hi: Option<u64>,
    },
    /// Polynomial-sieve right-hand side at window [P, 2P].
    Sieve {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        p_lo: u64,
        #[arg(long, default_value_t = 200)]
        pair_budget: u64,
    },
    /// Truncated bilinear term T(p,q;B) and its exact spatial counterpart.
    Bilinear {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        /// Weight decay exponent M (defaults to n + 2).
        #[arg(long)]
        decay: Option<u32>,
    },
    /// Count N(F,B) across a list of B values with normalized ratios.
    ScanExponent {
        #[command(flatten)]
        poly: PolyArgs,
        /// Comma-separated ascending list of B values.
        #[arg(long)]
        b_list: String,
        /// Window exponent P = B^rho to record (defaults to n/(n+1)).
        #[arg(long)]
        rho: Option<f64>,
    },
    /// List the fixture catalog.
    Fixtures,
}

enum CliError {
    Usage(String),
    Computation(String),
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> CliError {
        CliError::Usage(format!("polynomial: {e}"))
    }
}

macro_rules! comp {
    ($e:expr) => {
        $e.map_err(|err| CliError::Computation(format!("{err}")))
    };
}

fn parse_vec<T: std::str::FromStr>(text: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<T>()
                .map_err(|_| CliError::Usage(format!("bad list entry {t:?}")))
        })
        .collect()
}

/// Resolve (polynomial, text, declared m if from a fixture).
fn resolve(args: &PolyArgs) -> Result<(Polynomial, String, Option<u32>), CliError> {
    match (&args.poly, &args.fixture) {
        (Some(text), None) => {
            let f = match args.n {
                Some(n) => Polynomial::parse(text, n)?,
                None => Polynomial::parse_auto(text)?,
            };
            Ok((f, text.clone(), None))
        }
        (None, Some(id)) => {
            let fx = find_fixture(id)
                .ok_or_else(|| CliError::Usage(format!("unknown fixture {id:?}")))?;
            let n = args.n.unwrap_or(fx.n);
            let f = Polynomial::parse(fx.poly, n)?;
            Ok((f, fx.poly.to_string(), Some(fx.m)))
        }
        _ => Err(CliError::Usage(
            "exactly one of --poly and --fixture is required".into(),
        )),
    }
}

fn require_prime(p: u64) -> Result<(), CliError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{p} is not prime")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let cap = cli.table_cap.unwrap_or(DEFAULT_TABLE_CAP);
    match run(&cli, cap) {
        Ok((value, input)) => match emit(&cli, value, input, started) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("thinset: io error: {e}");
                ExitCode::from(3)
            }
        },
        Err(CliError::Usage(msg)) => {
            eprintln!("thinset: usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Computation(msg)) => {
            eprintln!("thinset: computation error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn emit(
    cli: &Cli,
    value: serde_json::Value,
    input: String,
    started: Instant,
) -> std::io::Result<()> {
    let body = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => to_csv(&value),
    };
    match &cli.out {
        None => {
            print!("{body}");
            Ok(())
        }
        Some(path) => {
            write_atomic(path, body.as_bytes())?;
            let config = json!({
                "format": match cli.format { Format::Json => "json", Format::Csv => "csv" },
                "threads": cli.threads,
                "table_cap": cli.table_cap,
            });
            let mut manifest = RunManifest::new(
                std::env::args().collect(),
                config,
                input,
                cli.seed,
            );
            manifest.record(path, body.as_bytes());
            manifest.wall_ms = started.elapsed().as_millis();
            let mpath = path.with_extension("manifest.json");
            let mbody = serde_json::to_string_pretty(&manifest).expect("serializable");
            write_atomic(&mpath, mbody.as_bytes())
        }
    }
}

fn run(cli: &Cli, cap: u64) -> Result<(serde_json::Value, String), CliError> {
    match &cli.cmd {
        Cmd::Count { poly, b } => {
            let (f, text, _) = resolve(poly)?;
            let n = comp!(brute_count(&f, *b))?;
            Ok((
                json!({
                    "schema": SCHEMA,
                    "command": "count",
                    "poly": text,
                    "n": f.nvars(),
                    "B": b,
                    "N": n,
                }),
                text,
            ))
        }
        Cmd::Expsum {
            poly,
            p,
            u,
            all,
            export,
            export_vtable,
        } => {
            let (f, text, _) = resolve(poly)?;
            require_prime(*p)?;
            let ctx = comp!(PrimeCtx::new(*p))?;
            let vt = comp!(VTable::build(&f, *p, cap))?;
            let g = GTable::from_vtable(&vt);
            if let Some(path) = export_vtable {
                export_raw_vtable(path, &vt, &text)?;
            }
            if let Some(utext) = u {
                let uvec: Vec<u64> = parse_vec(utext)?;
                if uvec.len() != f.nvars() {
                    return Err(CliError::Usage("u has wrong length".into()));
                }
                let s = sum_single(&g, &uvec, &ctx);
                let hist = ResidueHistogram::build(&g, &uvec);
                Ok((
                    json!({
                        "schema": SCHEMA,
                        "command": "expsum",
                        "poly": text,
                        "n": f.nvars(),
                        "p": p,
                        "u": uvec,
                        "re": s.re,
                        "im": s.im,
                        "abs": s.norm(),
                        "histogram": hist.a,
                    }),
                    text,
                ))
            } else if *all {
                let table = comp!(full_dft(&g, &ctx, cap))?;
                let (lhs, rhs, rel) = parseval(&g, &table);
                let max_abs = table
                    .data()
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0f64, f64::max);
                if let Some(path) = export {
                    export_raw_sumtable(path, &table, &text)?;
                }
                Ok((
                    json!({
                        "schema": SCHEMA,
                        "command": "expsum",
                        "poly": text,
                        "n": f.nvars(),
                        "p": p,
                        "entries": table.data().len(),
                        "method": table.method,
                        "error_estimate": table.max_abs_error_estimate,
                        "max_abs": max_abs,
                        "parseval_spectral": lhs,
                        "parseval_exact": rhs.to_string(),
                        "parseval_rel": rel,
                    }),
                    text,
                ))
            } else {
                Err(CliError::Usage("need --u or --all".into()))
            }
        }
        Cmd::Moment { poly, p, w } => {
            let (f, text, _) = resolve(poly)?;
            require_prime(*p)?;
            let wvec: Vec<i64> = parse_vec(w)?;
            if wvec.len() != f.nvars() {
                return Err(CliError::Usage("w has wrong length".into()));
            }
            let ctx = comp!(PrimeCtx::new(*p))?;
            let vt = comp!(VTable::build(&f, *p, cap))?;
            let g = GTable::from_vtable(&vt);
            let table = comp!(full_dft(&g, &ctx, cap))?;
            let mut report = comp!(hyperplane_moment(&g, &table, &Hyperplane::new(wvec)))?;
            report.exceptional = exceptional_flag(&f, *p);
            let mut value = serde_json::to_value(&report).expect("serializable");
            decorate(&mut value, "moment", &text);
            Ok((value, text))
        }
        Cmd::Strata {
            poly,
            p,
            c,
            calibrate,
        } => {
            let (f, text, _) = resolve(poly)?;
            require_prime(*p)?;
            let mut threshold = c.unwrap_or(1.0);
            let mut pilots = Vec::new();
            if let Some(list) = calibrate {
                let pilot_primes: Vec<u64> = parse_vec(list)?;
                let mut max_ratio = 0.0f64;
                for &pp in &pilot_primes {
                    require_prime(pp)?;
                    let ctx = comp!(PrimeCtx::new(pp))?;
                    let vt = comp!(VTable::build(&f, pp, cap))?;
                    let g = GTable::from_vtable(&vt);
                    let table = comp!(full_dft(&g, &ctx, cap))?;
                    let scale = (pp as f64).powf(f.nvars() as f64 / 2.0);
                    for z in table.data() {
                        max_ratio = max_ratio.max(z.norm() / scale);
                    }
                }
                threshold = max_ratio;
                pilots = pilot_primes;
            }
            let ctx = comp!(PrimeCtx::new(*p))?;
            let vt = comp!(VTable::build(&f, *p, cap))?;
            let g = GTable::from_vtable(&vt);
            let table = comp!(full_dft(&g, &ctx, cap))?;
            let census = tier_census(&table, threshold);
            let mut value = serde_json::to_value(&census).expect("serializable");
            decorate(&mut value, "strata", &text);
            if let Some(obj) = value.as_object_mut() {
                obj.insert("pilot_primes".into(), json!(pilots));
            }
            Ok((value, text))
        }
        Cmd::Census {
            poly,
            kind,
            p,
            d,
            lo,
            hi,
        } => {
            let (f, text, _) = resolve(poly)?;
            require_prime(*p)?;
            let value = match kind.as_str() {
                "dichotomy" => {
                    let ctx = comp!(PrimeCtx::new(*p))?;
                    let census = comp!(cyclic_dichotomy_census(&f, *d, &ctx))?;
                    serde_json::to_value(&census).expect("serializable")
                }
                "weil" => {
                    let ctx = comp!(PrimeCtx::new(*p))?;
                    let chars = comp!(Character::order_group(&ctx, *d))?;
                    if chars.len() < 2 {
                        return Err(CliError::Usage("need d >= 2".into()));
                    }
                    let ratio = comp!(weil_census(&f, &chars[1], &ctx))?;
                    let bound = f.degree_in(1).unwrap_or(1).max(1) as f64 - 1.0;
                    json!({
                        "p": p,
                        "d": d,
                        "max_normalized": ratio,
                        "bound": bound,
                        "passed": ratio <= bound + 1e-6,
                    })
                }
                "zero" => {
                    let hi = hi.unwrap_or(*p - 1);
                    let census = comp!(zero_census(&f, *p, *lo, hi))?;
                    serde_json::to_value(&census).expect("serializable")
                }
                _ => unreachable!("clap validates"),
            };
            let mut value = value;
            decorate(&mut value, "census", &text);
            Ok((value, text))
        }
        Cmd::Sieve {
            poly,
            m,
            b,
            p_lo,
            pair_budget,
        } => {
            let (f, text, fixture_m) = resolve(poly)?;
            let m = m
                .or(fixture_m)
                .ok_or_else(|| CliError::Usage("--m required with --poly".into()))?;
            let sf = comp!(SievedForm::decompose(&f, m))?;
            let cfg = SieveConfig {
                pair_budget: *pair_budget,
                seed: cli.seed,
                table_cap: cap,
                allow_subsample: true,
            };
            let report = comp!(sieve_rhs(&sf, *b, *p_lo, &cfg))?;
            let mut value = serde_json::to_value(&report).expect("serializable");
            decorate(&mut value, "sieve", &text);
            Ok((value, text))
        }
        Cmd::Bilinear {
            poly,
            b,
            p,
            q,
            decay,
        } => {
            let (f, text, _) = resolve(poly)?;
            require_prime(*p)?;
            require_prime(*q)?;
            if p == q {
                return Err(CliError::Usage("p and q must differ".into()));
            }
            let m = decay.unwrap_or(f.nvars() as u32 + 2);
            let report = comp!(bilinear_term(&f, *b, *p, *q, m, cap))?;
            let mut value = serde_json::to_value(&report).expect("serializable");
            decorate(&mut value, "bilinear", &text);
            Ok((value, text))
        }
        Cmd::ScanExponent { poly, b_list, rho } => {
            let (f, text, _) = resolve(poly)?;
            let bs: Vec<u64> = if b_list.trim().is_empty() {
                Vec::new()
            } else {
                parse_vec(b_list)?
            };
            if !bs.windows(2).all(|w| w[0] <= w[1]) {
                return Err(CliError::Usage("B list must ascend".into()));
            }
            let n = f.nvars() as f64;
            let rho = rho.unwrap_or(n / (n + 1.0));
            let (rows, rho) = comp!(exponent_scan(&f, &bs, rho))?;
            let rows = serde_json::to_value(&rows).expect("serializable");
            Ok((
                json!({
                    "schema": SCHEMA,
                    "command": "scan-exponent",
                    "poly": text,
                    "rho": rho,
                    "rows": rows,
                }),
                text,
            ))
        }
        Cmd::Fixtures => {
            let cat = catalog();
            let value = serde_json::to_value(&cat).expect("serializable");
            Ok((value, "fixtures".into()))
        }
    }
}

fn decorate(value: &mut serde_json::Value, command: &str, poly: &str) {
    if let Some(obj) = value.as_object_mut() {
        obj.insert("schema".into(), json!(SCHEMA));
        obj.insert("command".into(), json!(command));
        obj.insert("poly".into(), json!(poly));
    }
}

fn export_raw_vtable(path: &PathBuf, vt: &VTable, text: &str) -> Result<(), CliError> {
    let mut bytes = Vec::with_capacity(vt.len() * 2);
    for &v in vt.data() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    write_atomic(path, &bytes).map_err(|e| CliError::Computation(e.to_string()))?;
    let sidecar = json!({
        "schema": SCHEMA,
        "p": vt.p,
        "n": vt.n,
        "degY": vt.deg_y,
        "polynomial": text,
        "encoding": "u16-le",
        "sha256": thinset_cli::sha256_hex(&bytes),
    });
    let spath = path.with_extension("sidecar.json");
    let body = serde_json::to_string_pretty(&sidecar).expect("serializable");
    write_atomic(&spath, body.as_bytes()).map_err(|e| CliError::Computation(e.to_string()))
}

fn export_raw_sumtable(
    path: &PathBuf,
    table: &thinset_core::expsum::SumTable,
    text: &str,
) -> Result<(), CliError> {
    let mut bytes = Vec::with_capacity(table.data().len() * 16);
    for z in table.data() {
        bytes.extend_from_slice(&z.re.to_le_bytes());
        bytes.extend_from_slice(&z.im.to_le_bytes());
    }
    write_atomic(path, &bytes).map_err(|e| CliError::Computation(e.to_string()))?;
    let sidecar = json!({
        "schema": SCHEMA,
        "p": table.p,
        "n": table.n,
        "method": table.method,
        "error_estimate": table.max_abs_error_estimate,
        "polynomial": text,
        "encoding": "f64-le-interleaved-re-im",
        "sha256": thinset_cli::sha256_hex(&bytes),
    });
    let spath = path.with_extension("sidecar.json");
    let body = serde_json::to_string_pretty(&sidecar).expect("serializable");
    write_atomic(&spath, body.as_bytes()).map_err(|e| CliError::Computation(e.to_string()))
}
