//! Command-line front end: parse distribution files, run decisions and
//! constructions, emit certificates (JSON) and order-scan curves (CSV).
//!
//! Exit codes: 0 holds, 1 fails, 2 error, 3 inconclusive, 4 budget
//! exhausted, 5 boundary.

mod cert;
mod input;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;

use ctrump_core::construct::delta::{gap_per_entry, gap_uniform};
use ctrump_core::construct::lambda::coin_majorizes;
use ctrump_core::construct::search::order_grid;
use ctrump_core::dist::parse_prob;
use ctrump_core::runs::Pmf;
use ctrump_core::{
    build_ctrump_witness, decide_ctrump, lambda_max, majorizes, renyi, replay_ctrump, trumps,
    witness, AlphaGrid, BistochasticWitness, CtrumpStatus, EntropyValue, Order, Precision,
    SearchConfig, TrumpStatus,
};

use cert::{Certificate, JsonMap};
use input::load_dist;

const EXIT_HOLDS: u8 = 0;
const EXIT_FAILS: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;
const EXIT_BUDGET: u8 = 4;
const EXIT_BOUNDARY: u8 = 5;

#[derive(Parser)]
#[command(
    name = "ctrump",
    version,
    about = "Decide and certify majorization, catalytic and correlated-catalytic \
             convertibility of probability distributions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Working precision in decimal digits
    #[arg(long, default_value_t = 50)]
    precision: u32,
    /// Margin (nats) below which strict comparisons are inconclusive
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Emit a JSON certificate instead of plain text
    #[arg(long)]
    json: bool,
}

impl CommonOpts {
    fn prec(&self) -> Precision {
        Precision::new(self.precision)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the entropy family of a distribution
    Entropy {
        file: String,
        /// Comma-separated orders: numbers, "1", "0+", "+inf", "-inf", "burg"
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        orders: Vec<String>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Exact partial-sum dominance check with a replayable mixing witness
    Majorize {
        file_p: String,
        file_q: String,
        /// Zero-pad the shorter vector to the longer dimension
        #[arg(long)]
        pad: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Catalytic convertibility via the strict entropy-gap criterion
    Trump {
        file_p: String,
        file_q: String,
        /// Order grid as "lo:hi:points" (default: built-in grid)
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Convertibility with injected auxiliary systems; decision and witness
    Ctrump {
        file_p: String,
        file_q: String,
        /// Build and verify an explicit witness
        #[arg(long)]
        construct: bool,
        /// Iteration budget for the parameter searches
        #[arg(long, default_value_t = 64)]
        budget: u64,
        /// Seed for the randomized catalyst search
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cap on extension tail lengths
        #[arg(long, default_value_t = 1 << 20)]
        n_max: u64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Emit gap curves of the extension families as CSV (alpha,n,value)
    Scan {
        file_p: String,
        file_q: String,
        /// Extension family: "delta" (per-entry slack) or "a" (uniform mass)
        #[arg(long)]
        mode: String,
        /// The slack / mass parameter as an exact rational, e.g. "1/120"
        #[arg(long)]
        param: String,
        /// Comma-separated tail lengths
        #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
        n: Vec<u64>,
        /// Order grid as "lo:hi:points"
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Maximal fair-coin advantage i − j with p ⊗ coins^i majorizing q ⊗ coins^j
    Lambda {
        file_p: String,
        file_q: String,
        /// Largest coin count tried on either side
        #[arg(long, default_value_t = 16)]
        n_max: u64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Re-check a stored certificate's witness without re-searching
    Verify {
        cert_file: String,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_ERROR
        }
    };
    ExitCode::from(code)
}

fn run(cmd: Command) -> Result<u8, String> {
    match cmd {
        Command::Entropy { file, orders, common } => cmd_entropy(&file, &orders, &common),
        Command::Majorize { file_p, file_q, pad, common } => {
            cmd_majorize(&file_p, &file_q, pad, &common)
        }
        Command::Trump { file_p, file_q, grid, common } => {
            cmd_trump(&file_p, &file_q, grid.as_deref(), &common)
        }
        Command::Ctrump { file_p, file_q, construct, budget, seed, n_max, common } => {
            cmd_ctrump(&file_p, &file_q, construct, budget, seed, n_max, &common)
        }
        Command::Scan { file_p, file_q, mode, param, n, grid, common } => {
            cmd_scan(&file_p, &file_q, &mode, &param, &n, grid.as_deref(), &common)
        }
        Command::Lambda { file_p, file_q, n_max, common } => {
            cmd_lambda(&file_p, &file_q, n_max, &common)
        }
        Command::Verify { cert_file, common } => cmd_verify(&cert_file, &common),
    }
}

fn parse_order(s: &str) -> Result<Order, String> {
    match s.trim() {
        "1" => Ok(Order::One),
        "0+" => Ok(Order::ZeroPlus),
        "inf" | "+inf" => Ok(Order::PlusInfinity),
        "-inf" => Ok(Order::MinusInfinity),
        "burg" => Ok(Order::Burg),
        other => {
            let a: f64 = other.parse().map_err(|_| format!("unknown order `{other}`"))?;
            Order::finite(a).map_err(|e| e.to_string())
        }
    }
}

fn entropy_str(v: &EntropyValue) -> String {
    match v {
        EntropyValue::NegInfinity => "-inf".into(),
        EntropyValue::Finite(x) => format!("{:.15}", x.to_f64()),
    }
}

fn cmd_entropy(file: &str, orders: &[String], common: &CommonOpts) -> Result<u8, String> {
    let p = load_dist(file)?;
    let mut ords: Vec<Order> = if orders.is_empty() {
        vec![Order::ZeroPlus, Order::One, Order::finite(2.0).unwrap(), Order::PlusInfinity]
    } else {
        orders.iter().map(|s| parse_order(s)).collect::<Result<_, _>>()?
    };
    if !ords.contains(&Order::Burg) {
        ords.push(Order::Burg);
    }
    let prec = common.prec();
    let rows: Vec<(String, String)> =
        ords.iter().map(|o| (o.label(), entropy_str(&renyi(&p, *o, prec)))).collect();
    if common.json {
        let mut out = JsonMap::new();
        out.insert("p".into(), cert::strings(&p.to_strings()));
        out.insert(
            "entropies".into(),
            serde_json::Value::Array(
                rows.iter()
                    .map(|(a, v)| {
                        let mut m = JsonMap::new();
                        m.insert("alpha".into(), serde_json::Value::String(a.clone()));
                        m.insert("value".into(), serde_json::Value::String(v.clone()));
                        serde_json::Value::Object(m)
                    })
                    .collect(),
            ),
        );
        println!("{}", serde_json::to_string_pretty(&serde_json::Value::Object(out)).unwrap());
    } else {
        println!("{:>8}  {}", "alpha", "H (nats)");
        for (a, v) in rows {
            println!("{a:>8}  {v}");
        }
    }
    Ok(EXIT_HOLDS)
}

fn cmd_majorize(file_p: &str, file_q: &str, pad: bool, common: &CommonOpts) -> Result<u8, String> {
    let mut p = load_dist(file_p)?;
    let mut q = load_dist(file_q)?;
    if pad {
        let d = p.dim().max(q.dim());
        p = ctrump_core::majorization::pad_zeros(&p, d).map_err(|e| e.to_string())?;
        q = ctrump_core::majorization::pad_zeros(&q, d).map_err(|e| e.to_string())?;
    }
    let v = majorizes(&p, &q).map_err(|e| e.to_string())?;
    let wit = if v.holds {
        Some(serde_json::to_value(witness(&p, &q).map_err(|e| e.to_string())?).unwrap())
    } else {
        None
    };
    let mut checks = JsonMap::new();
    if let Some(k) = v.failing_k {
        checks.insert("failing_k".into(), serde_json::Value::from(k));
    }
    checks.insert("partial_sums_p".into(), cert::strings(&v.partial_sums_p));
    checks.insert("partial_sums_q".into(), cert::strings(&v.partial_sums_q));
    let c = Certificate::new("majorization", if v.holds { "holds" } else { "fails" }, &p, &q)
        .witness(wit)
        .checks(serde_json::Value::Object(checks))
        .config(cert::config_basic(common.precision, common.tol));
    c.emit(common.json);
    Ok(if v.holds { EXIT_HOLDS } else { EXIT_FAILS })
}

fn parse_grid(spec: Option<&str>, tol: f64) -> Result<AlphaGrid, String> {
    let mut grid = AlphaGrid { margin_tol: tol, ..AlphaGrid::default() };
    let Some(spec) = spec else { return Ok(grid) };
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid `{spec}` is not of the form lo:hi:points"));
    }
    let lo: f64 = parts[0].parse().map_err(|_| "bad grid lower bound".to_string())?;
    let hi: f64 = parts[1].parse().map_err(|_| "bad grid upper bound".to_string())?;
    let points: usize = parts[2].parse().map_err(|_| "bad grid point count".to_string())?;
    if !(lo < hi) || points < 2 {
        return Err(format!("grid `{spec}` must satisfy lo < hi and points ≥ 2"));
    }
    grid.finite_points = order_grid(lo, hi, points)
        .into_iter()
        .filter_map(|o| if let Order::Finite(a) = o { Some(a) } else { None })
        .collect();
    Ok(grid)
}

fn cmd_trump(
    file_p: &str,
    file_q: &str,
    grid: Option<&str>,
    common: &CommonOpts,
) -> Result<u8, String> {
    let p = load_dist(file_p)?;
    let q = load_dist(file_q)?;
    if p.sort_desc() == q.sort_desc() {
        let c = Certificate::new("trumping", "holds", &p, &q)
            .checks(cert::note("the sorted vectors coincide; nothing to convert"))
            .config(cert::config_basic(common.precision, common.tol));
        c.emit(common.json);
        return Ok(EXIT_HOLDS);
    }
    let grid = parse_grid(grid, common.tol)?;
    let v = trumps(&p, &q, &grid, common.prec()).map_err(|e| e.to_string())?;
    let verdict = match v.status {
        TrumpStatus::Holds => "holds",
        TrumpStatus::Fails => "fails",
        TrumpStatus::Inconclusive => "inconclusive",
    };
    let mut checks = JsonMap::new();
    if let Some(w) = v.witness_alpha {
        checks.insert("witness_alpha".into(), serde_json::Value::String(w.label()));
    }
    checks.insert("min_margin".into(), serde_json::Value::from(v.min_margin));
    checks.insert("gaps".into(), cert::alpha_checks(&v.checks));
    let c = Certificate::new("trumping", verdict, &p, &q)
        .checks(serde_json::Value::Object(checks))
        .config(cert::config_basic(common.precision, common.tol));
    c.emit(common.json);
    Ok(match v.status {
        TrumpStatus::Holds => EXIT_HOLDS,
        TrumpStatus::Fails => EXIT_FAILS,
        TrumpStatus::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

fn cmd_ctrump(
    file_p: &str,
    file_q: &str,
    construct: bool,
    budget: u64,
    seed: u64,
    n_max: u64,
    common: &CommonOpts,
) -> Result<u8, String> {
    let p = load_dist(file_p)?;
    let q = load_dist(file_q)?;
    let prec = common.prec();
    let v = decide_ctrump(&p, &q, common.tol, prec).map_err(|e| e.to_string())?;
    let verdict = match v.status {
        CtrumpStatus::Holds => "holds",
        CtrumpStatus::Fails => "fails",
        CtrumpStatus::Boundary => "boundary",
    };
    let mut checks = JsonMap::new();
    checks.insert("shannon_gap".into(), serde_json::Value::from(v.shannon_gap));
    checks.insert("rank_p".into(), serde_json::Value::from(v.rank_p));
    checks.insert("rank_q".into(), serde_json::Value::from(v.rank_q));
    checks.insert("trivial".into(), serde_json::Value::Bool(v.trivial));
    let config = cert::config_search(common.precision, common.tol, budget, seed, n_max);

    let exit = match v.status {
        CtrumpStatus::Fails => EXIT_FAILS,
        CtrumpStatus::Boundary => EXIT_BOUNDARY,
        CtrumpStatus::Holds => EXIT_HOLDS,
    };
    if !construct || v.status != CtrumpStatus::Holds {
        let c = Certificate::new("ctrumping", verdict, &p, &q)
            .checks(serde_json::Value::Object(checks))
            .config(config);
        c.emit(common.json);
        return Ok(exit);
    }

    let cfg = SearchConfig {
        precision: prec,
        margin_tol: common.tol,
        budget,
        n_max,
        seed,
        ..SearchConfig::default()
    };
    match build_ctrump_witness(&p, &q, &cfg) {
        Ok(w) => {
            let verified = w.verified;
            let c = Certificate::new("ctrumping", verdict, &p, &q)
                .witness(Some(cert::ctrump_witness(&w)))
                .checks(serde_json::Value::Object(checks))
                .config(config);
            c.emit(common.json);
            if verified {
                Ok(EXIT_HOLDS)
            } else {
                eprintln!("witness assembled but catalyst search exhausted its budget");
                Ok(EXIT_BUDGET)
            }
        }
        Err(e) => {
            checks.insert("construction_error".into(), serde_json::Value::String(e.to_string()));
            let c = Certificate::new("ctrumping", verdict, &p, &q)
                .checks(serde_json::Value::Object(checks))
                .config(config);
            c.emit(common.json);
            eprintln!("construction failed: {e}");
            Ok(EXIT_BUDGET)
        }
    }
}

fn cmd_scan(
    file_p: &str,
    file_q: &str,
    mode: &str,
    param: &str,
    n_list: &[u64],
    grid: Option<&str>,
    common: &CommonOpts,
) -> Result<u8, String> {
    let p = Pmf::from_dist(&load_dist(file_p)?);
    let q = Pmf::from_dist(&load_dist(file_q)?);
    let param: BigRational = parse_prob(param).map_err(|e| e.to_string())?;
    let prec = common.prec();

    enum Family {
        PerEntry,
        Uniform,
    }
    let family = match mode {
        "delta" | "per-entry" | "lemma2" => Family::PerEntry,
        "a" | "uniform" | "tilde" | "lemma3" => Family::Uniform,
        other => return Err(format!("unknown scan mode `{other}`")),
    };
    let (lo, hi) = match family {
        Family::PerEntry => (1.0, f64::INFINITY),
        Family::Uniform => (f64::NEG_INFINITY, f64::INFINITY),
    };
    let mut orders = match grid {
        Some(spec) => {
            let g = parse_grid(Some(spec), common.tol)?;
            let mut o: Vec<Order> = g.finite_points.iter().map(|&a| Order::Finite(a)).collect();
            o.push(Order::One);
            o
        }
        None => order_grid(lo, hi, 33),
    };
    if matches!(family, Family::Uniform) {
        orders.push(Order::Burg);
    }
    orders.sort_by(|a, b| a.sort_key().partial_cmp(&b.sort_key()).unwrap());
    orders.dedup_by_key(|o| o.sort_key());

    let mut rows: Vec<(String, u64, f64)> = Vec::new();
    for ord in &orders {
        for &n in n_list {
            let value = match family {
                Family::PerEntry => gap_per_entry(&p, &q, &param, n as f64, *ord, prec),
                Family::Uniform => gap_uniform(&p, &q, &param, n as f64, *ord, prec),
            };
            match value {
                Ok(v) => rows.push((ord.label(), n, v.to_f64())),
                Err(_) => continue, // order outside the family's domain
            }
        }
    }
    println!("alpha,n,value");
    for (a, n, v) in rows {
        println!("{a},{n},{v}");
    }
    Ok(EXIT_HOLDS)
}

fn cmd_lambda(file_p: &str, file_q: &str, n_max: u64, common: &CommonOpts) -> Result<u8, String> {
    let p = load_dist(file_p)?;
    let q = load_dist(file_q)?;
    match lambda_max(&p, &q, n_max, common.prec()) {
        Ok(v) => {
            let mut wit = JsonMap::new();
            wit.insert("lambda".into(), serde_json::Value::from(v.lambda));
            wit.insert("i".into(), serde_json::Value::from(v.i));
            wit.insert("j".into(), serde_json::Value::from(v.j));
            let c = Certificate::new("lambda", &v.lambda.to_string(), &p, &q)
                .witness(Some(serde_json::Value::Object(wit)))
                .config(cert::config_basic(common.precision, common.tol));
            c.emit(common.json);
            Ok(EXIT_HOLDS)
        }
        Err(ctrump_core::Error::NoNFound(_)) => {
            println!("none");
            Ok(EXIT_BUDGET)
        }
        Err(e) => Err(e.to_string()),
    }
}

fn cmd_verify(cert_file: &str, common: &CommonOpts) -> Result<u8, String> {
    let text = std::fs::read_to_string(cert_file).map_err(|e| format!("{cert_file}: {e}"))?;
    let c: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let relation = c["relation"].as_str().ok_or("certificate missing `relation`")?;
    let p = input::dist_from_json(&c["inputs"]["p"]).map_err(|e| format!("inputs.p: {e}"))?;
    let q = input::dist_from_json(&c["inputs"]["q"]).map_err(|e| format!("inputs.q: {e}"))?;

    let ok = match relation {
        "majorization" => {
            let w: BistochasticWitness = serde_json::from_value(c["witness"].clone())
                .map_err(|e| format!("witness: {e}"))?;
            let replayed = w.replay(&p).map_err(|e| e.to_string())?;
            replayed == q
        }
        "ctrumping" => {
            let w = &c["witness"];
            if w.is_null() {
                return Err("certificate has no witness to replay".into());
            }
            let delta = input::opt_rational(&w["delta"])?;
            let a = input::opt_rational(&w["a"])?;
            let n1 = w["n1"].as_u64().unwrap_or(0);
            let n2 = w["n2"].as_u64().unwrap_or(0);
            let catalyst = if w["catalyst"].is_null() {
                None
            } else {
                Some(input::dist_from_json(&w["catalyst"]).map_err(|e| format!("catalyst: {e}"))?)
            };
            replay_ctrump(&p, &q, delta.as_ref(), n1, a.as_ref(), n2, catalyst.as_ref())
                .map_err(|e| e.to_string())?
        }
        "lambda" => {
            let w = &c["witness"];
            let i = w["i"].as_u64().ok_or("witness missing i")?;
            let j = w["j"].as_u64().ok_or("witness missing j")?;
            let lambda = w["lambda"].as_i64().ok_or("witness missing lambda")?;
            lambda == i as i64 - j as i64
                && coin_majorizes(&Pmf::from_dist(&p), &Pmf::from_dist(&q), i, j)
        }
        "trumping" => {
            // no exact witness exists; re-evaluate the recorded orders and
            // compare the sign pattern with the stored verdict
            let verdict = c["verdict"].as_str().unwrap_or("");
            let orders: Vec<Order> = c["checks"]["gaps"]
                .as_array()
                .map(|rows| {
                    rows.iter()
                        .filter_map(|r| r["alpha"].as_str())
                        .filter_map(|s| parse_order(s).ok())
                        .collect()
                })
                .unwrap_or_default();
            if orders.is_empty() {
                return Err("certificate records no gap table".into());
            }
            let grid = AlphaGrid {
                finite_points: orders
                    .iter()
                    .filter_map(|o| if let Order::Finite(a) = o { Some(*a) } else { None })
                    .collect(),
                margin_tol: common.tol,
                ..AlphaGrid::default()
            };
            let v = trumps(&p, &q, &grid, common.prec()).map_err(|e| e.to_string())?;
            match v.status {
                TrumpStatus::Holds => verdict == "holds",
                TrumpStatus::Fails => verdict == "fails",
                TrumpStatus::Inconclusive => verdict == "inconclusive",
            }
        }
        other => return Err(format!("unknown relation `{other}`")),
    };
    if ok {
        println!("verified: witness replays exactly");
        Ok(EXIT_HOLDS)
    } else {
        println!("verification FAILED: witness does not replay");
        Ok(EXIT_FAILS)
    }
}
