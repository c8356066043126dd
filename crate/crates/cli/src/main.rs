mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::{json, Value};

use zicantor::{
    classify, coding_of, counting_fit, euler_phi_zi, factor, height, is_member, live_graph, ord,
    period_height_report, two_squares, valuation, build_state_graph, Coding, Error, GaussInteger,
    GaussRational, IfsSpec, LowerBoundCertificate, OrderLiftData, PeriodHeightReport,
    SmoothFamily, DEFAULT_NODE_CAP,
};

use output::{int, print_json, real, text};

const NODE_CAP_VAR: &str = "GCANTOR_NODE_CAP";

#[derive(Parser)]
#[command(name = "zicantor", version)]
#[command(about = "Gaussian integers, orders, and rational points of self-similar sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor a Gaussian integer into canonical primes
    Factor {
        #[arg(allow_hyphen_values = true)]
        z: String,
    },
    /// Prime type (I, II or III) of a Gaussian prime
    Classify {
        #[arg(allow_hyphen_values = true)]
        p: String,
    },
    /// Write a rational prime p ≡ 1 (mod 4) as a² + b²
    TwoSquares { p: String },
    /// Exponent of a prime in a Gaussian integer
    Valuation {
        #[arg(allow_hyphen_values = true)]
        prime: String,
        #[arg(allow_hyphen_values = true)]
        z: String,
    },
    /// Denominator height N(z)/gcd(re, im)
    Height {
        #[arg(allow_hyphen_values = true)]
        z: String,
    },
    /// Multiplicative order of alpha modulo gamma
    Order {
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        #[arg(allow_hyphen_values = true)]
        gamma: String,
    },
    /// Orders of alpha modulo powers of a prime, from the lifting rule
    OrderLift {
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        #[arg(allow_hyphen_values = true)]
        prime: String,
        /// Largest prime power to report
        #[arg(long, default_value_t = 8)]
        n_max: u64,
    },
    /// Size of the unit group of Z[i]/(gamma)
    Phi {
        #[arg(allow_hyphen_values = true)]
        gamma: String,
    },
    /// Lower-bound certificate for orders of alpha over a smooth family
    OrderBound {
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        family: String,
        /// Exponent vector at which to evaluate the bound
        #[arg(long)]
        exponents: Option<String>,
    },
    /// Similarity dimension and an optional cylinder cover
    Dim {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Distinct composed maps at a given depth
    Compose {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        depth: u32,
    },
    /// Decide membership of a Gaussian rational
    Member {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(allow_hyphen_values = true)]
        z: String,
    },
    /// Eventually periodic coding of a member (digits are 1-based)
    Coding {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(allow_hyphen_values = true)]
        z: String,
    },
    /// Value of a coding such as "1 (2 1)"
    Eval {
        #[command(flatten)]
        spec: SpecArgs,
        coding: String,
    },
    /// State graph at denominator gamma in DOT format
    GraphExport {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        gamma: String,
        /// Keep only live states
        #[arg(long)]
        live: bool,
    },
    /// All members with family-smooth denominators of height at most the cap
    Search {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Lattice point counts Q_N and R_N with cumulative unions
    Count {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        n_max: u64,
        #[arg(long, default_value_t = 1)]
        n_min: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Reports combining several computations
    #[command(subcommand)]
    Report(Report),
}

#[derive(Subcommand)]
enum Report {
    /// Period of each found member against the order lower bound
    PeriodHeight {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Args)]
struct SpecArgs {
    /// TOML file with `beta` and `digits`; flags take precedence
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Comma-separated Gaussian rational digits
    #[arg(long, allow_hyphen_values = true)]
    digits: Option<String>,
    /// Node cap for graph work; also read from GCANTOR_NODE_CAP
    #[arg(long)]
    node_cap: Option<usize>,
}

#[derive(Args)]
struct SearchArgs {
    /// Comma-separated primes, e.g. "1+i,2+i,2-i"
    #[arg(long)]
    family: String,
    /// Largest denominator height
    #[arg(long)]
    cap: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    beta: Option<String>,
    digits: Option<Vec<String>>,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<(), Failure>;

impl SpecArgs {
    fn resolve(&self) -> Result<IfsSpec, Failure> {
        let file = match &self.spec {
            Some(path) => {
                let raw = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
                toml::from_str::<SpecFile>(&raw)
                    .map_err(|e| Failure::Usage(format!("bad spec file {}: {e}", path.display())))?
            }
            None => SpecFile { beta: None, digits: None },
        };
        let beta = self
            .beta
            .clone()
            .or(file.beta)
            .ok_or_else(|| Failure::Usage("missing --beta (or beta in --spec)".into()))?;
        let digits = match (&self.digits, file.digits) {
            (Some(d), _) => d.split(',').map(str::to_string).collect(),
            (None, Some(d)) => d,
            (None, None) => {
                return Err(Failure::Usage("missing --digits (or digits in --spec)".into()))
            }
        };
        let beta = GaussInteger::parse(beta.trim())?;
        let digits = digits
            .iter()
            .map(|d| GaussRational::parse(d.trim()))
            .collect::<zicantor::Result<Vec<_>>>()?;
        Ok(IfsSpec::new(beta, digits)?)
    }

    fn node_cap(&self) -> Result<usize, Failure> {
        if let Some(c) = self.node_cap {
            return Ok(c);
        }
        match std::env::var(NODE_CAP_VAR) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("{NODE_CAP_VAR} must be a positive integer, got {v:?}"))),
            Err(_) => Ok(DEFAULT_NODE_CAP),
        }
    }
}

fn gi(s: &str) -> Result<GaussInteger, Failure> {
    Ok(GaussInteger::parse(s.trim())?)
}

fn gr(s: &str) -> Result<GaussRational, Failure> {
    Ok(GaussRational::parse(s.trim())?)
}

fn family(s: &str) -> Result<SmoothFamily, Failure> {
    Ok(SmoothFamily::parse(s)?)
}

fn cap(s: &str) -> Result<BigInt, Failure> {
    s.trim()
        .parse::<BigInt>()
        .ok()
        .filter(|c| *c >= BigInt::from(1))
        .ok_or_else(|| Failure::Usage(format!("--cap must be a positive integer, got {s:?}")))
}

fn exponent_list(s: &str) -> Result<Vec<u64>, Failure> {
    s.split(',')
        .map(|e| e.trim().parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("exponents must be comma-separated integers, got {s:?}")))
}

fn certificate_json(cert: &LowerBoundCertificate) -> Value {
    let primes: Vec<Value> = cert
        .per_prime()
        .iter()
        .map(|p| json!({"prime": text(&p.prime), "height": int(&p.height), "d": int(&p.d), "m": p.m}))
        .collect();
    json!({
        "alpha": text(cert.alpha()),
        "family": text(cert.family()),
        "primes": primes,
        "type_ii_m": cert.type_ii_m(),
        "q": int(cert.q()),
        "c2": text(cert.c2()),
        "c2_closed_form": text(cert.c2_closed_form()),
        "c3": text(cert.c3()),
    })
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Factor { z } => {
            let f = factor(&gi(&z)?)?;
            let factors: Vec<Value> = f
                .factors
                .iter()
                .map(|(p, e)| json!({"prime": text(p), "exponent": e}))
                .collect();
            print_json(&json!({"unit": text(f.unit), "factors": factors}));
        }
        Command::Classify { p } => {
            let p = gi(&p)?;
            let class = classify(&p)?;
            print_json(&json!({"prime": text(p.canonical()), "class": text(class)}));
        }
        Command::TwoSquares { p } => {
            let n: BigInt = p
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("expected a rational integer, got {p:?}")))?;
            let (a, b) = two_squares(&n)?;
            print_json(&json!({"p": int(&n), "a": int(a), "b": int(b)}));
        }
        Command::Valuation { prime, z } => {
            let (prime, z) = (gi(&prime)?, gi(&z)?);
            if z.is_zero() {
                classify(&prime)?;
                print_json(&json!({"valuation": "infinity"}));
            } else {
                print_json(&json!({"valuation": valuation(&prime, &z)?}));
            }
        }
        Command::Height { z } => {
            let z = gi(&z)?;
            if z.is_zero() {
                return Err(Error::Domain("height of zero is undefined".into()).into());
            }
            print_json(&json!({"height": int(height(&z))}));
        }
        Command::Order { alpha, gamma } => {
            print_json(&json!({"order": int(ord(&gi(&alpha)?, &gi(&gamma)?)?)}));
        }
        Command::OrderLift { alpha, prime, n_max } => {
            let lift = OrderLiftData::compute(&gi(&alpha)?, &gi(&prime)?)?;
            let lifts: Vec<Value> = (1..=n_max)
                .map(|n| {
                    json!({
                        "n": n,
                        "order": int(lift.order_lift(n)),
                        "closed_form": int(lift.closed_form_order(n)),
                    })
                })
                .collect();
            print_json(&json!({
                "prime": text(lift.gamma()),
                "class": text(lift.class()),
                "d": int(lift.d()),
                "m": lift.m(),
                "squaring_chain": lift.squaring_chain(),
                "lifts": lifts,
            }));
        }
        Command::Phi { gamma } => {
            print_json(&json!({"phi": int(euler_phi_zi(&gi(&gamma)?)?)}));
        }
        Command::OrderBound { alpha, family: f, exponents } => {
            let alpha = gi(&alpha)?;
            let fam = family(&f)?;
            let cert = LowerBoundCertificate::new(&alpha, &fam)?;
            let mut out = certificate_json(&cert);
            if let Some(e) = exponents {
                let exps = exponent_list(&e)?;
                let bound = cert.lower_bound(&exps)?;
                let modulus = fam.product(&exps)?;
                let order = ord(&alpha, &modulus)?;
                let obj = out.as_object_mut().expect("object");
                obj.insert("exponents".into(), json!(exps));
                obj.insert("modulus".into(), text(&modulus));
                obj.insert("bound".into(), text(&bound));
                obj.insert("bound_approx".into(), real(bound.to_f64()));
                obj.insert("order".into(), int(&order));
                obj.insert("holds".into(), json!(bound.le_int(&order)));
            }
            print_json(&out);
        }
        Command::Dim { spec, depth } => {
            let ifs = spec.resolve()?;
            let r2 = ifs.bounding_radius_sq();
            let mut out = json!({
                "ell": ifs.ell(),
                "similarity_dimension": real(ifs.similarity_dimension()),
                "radius_sq": text(&r2),
            });
            if let Some(n) = depth {
                let cover = ifs.box_cover_count(n, spec.node_cap()?)?;
                out.as_object_mut().expect("object").insert(
                    "box_cover".into(),
                    json!({"depth": cover.depth, "count": cover.count, "radius": real(cover.radius)}),
                );
            }
            print_json(&out);
        }
        Command::Compose { spec, depth } => {
            let ifs = spec.resolve()?;
            let r = ifs.compose_depth(depth, spec.node_cap()?)?;
            print_json(&json!({
                "depth": r.depth,
                "distinct_maps": r.distinct_maps,
                "s_n": real(r.s_n),
                "s": real(r.s),
            }));
        }
        Command::Member { spec, z } => {
            let ifs = spec.resolve()?;
            print_json(&json!({"member": is_member(&ifs, &gr(&z)?, spec.node_cap()?)?}));
        }
        Command::Coding { spec, z } => {
            let ifs = spec.resolve()?;
            let c = coding_of(&ifs, &gr(&z)?, spec.node_cap()?)?.minimized();
            print_json(&json!({
                "coding": text(&c),
                "preperiod_length": c.preperiod.len(),
                "period_length": c.period_length(),
            }));
        }
        Command::Eval { spec, coding } => {
            let ifs = spec.resolve()?;
            let c = Coding::parse(&coding)?;
            print_json(&json!({"value": text(ifs.eval_coding(&c)?)}));
        }
        Command::GraphExport { spec, gamma, live } => {
            let ifs = spec.resolve()?;
            let (gamma, cap) = (gi(&gamma)?, spec.node_cap()?);
            let graph = if live {
                live_graph(&ifs, &gamma, cap)?
            } else {
                build_state_graph(&ifs, &gamma, cap)?
            };
            print!("{}", graph.to_dot());
        }
        Command::Search { spec, search, format } => {
            let report = period_height(&spec, &search)?;
            match format {
                Format::Json => print_json(&search_json(&report, false)),
                Format::Csv => search_csv(&report)?,
            }
        }
        Command::Count { spec, n_max, n_min, format } => {
            let ifs = spec.resolve()?;
            let fit = counting_fit(&ifs, n_min, n_max, spec.node_cap()?)?;
            match format {
                Format::Json => {
                    let rows: Vec<Value> = fit
                        .rows
                        .iter()
                        .map(|r| json!({"n": r.n, "q": r.q, "r": r.r, "q_cum": r.q_cum, "r_cum": r.r_cum}))
                        .collect();
                    print_json(&json!({
                        "s": real(fit.s),
                        "c": real(fit.c),
                        "c_cum": real(fit.c_cum),
                        "rows": rows,
                    }));
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(std::io::stdout());
                    w.write_record(["n", "q", "r", "q_cum", "r_cum"]).map_err(io_failure)?;
                    for r in &fit.rows {
                        w.write_record([r.n, r.q as u64, r.r as u64, r.q_cum as u64, r.r_cum as u64].map(|x| x.to_string()))
                            .map_err(io_failure)?;
                    }
                    w.flush().map_err(|e| io_failure(e.into()))?;
                }
            }
        }
        Command::Report(Report::PeriodHeight { spec, search }) => {
            let report = period_height(&spec, &search)?;
            print_json(&search_json(&report, true));
        }
    }
    Ok(())
}

fn io_failure(e: csv::Error) -> Failure {
    Failure::Usage(format!("cannot write output: {e}"))
}

fn period_height(spec: &SpecArgs, search: &SearchArgs) -> Result<PeriodHeightReport, Failure> {
    let ifs = spec.resolve()?;
    let fam = family(&search.family)?;
    Ok(period_height_report(&ifs, &fam, &cap(&search.cap)?, spec.node_cap()?)?)
}

fn search_json(report: &PeriodHeightReport, with_orders: bool) -> Value {
    let s = &report.search;
    let found: Vec<Value> = s
        .found
        .iter()
        .zip(&report.rows)
        .map(|(f, row)| {
            let mut v = json!({
                "value": text(&f.value),
                "height": int(&f.height),
                "exponents": f.exponents,
                "coding": text(&f.coding),
                "period": f.period_length,
                "integral": f.integral,
                "lower_bound": row.lower_bound.as_ref().map(text),
            });
            if with_orders {
                let obj = v.as_object_mut().expect("object");
                obj.insert("reduced_denominator".into(), text(&row.reduced_denominator));
                obj.insert("order".into(), row.order.as_ref().map_or(Value::Null, int));
                obj.insert("divides".into(), json!(row.divides));
            }
            v
        })
        .collect();
    let growth: Vec<Value> = s
        .growth
        .iter()
        .map(|(c, n)| json!({"cap": int(c), "count": n}))
        .collect();
    let digits: Vec<Value> = s.spec.digits().iter().map(text).collect();
    let mut out = json!({
        "beta": text(s.spec.beta()),
        "digits": digits,
        "family": text(&s.family),
        "cap": int(&s.cap),
        "denominators_scanned": s.denominators_scanned,
        "found": found,
        "integral_count": s.integral_count(),
        "non_integral_count": s.non_integral_count(),
        "growth": growth,
        "stabilized": s.stabilized,
        "similarity_dimension": real(s.similarity_dimension),
        "best_composed_dimension": {"depth": s.best_s_n.0, "s_n": real(s.best_s_n.1)},
        "counting_constant": real(s.counting_constant),
        "warning": s.warning,
    });
    if with_orders {
        out.as_object_mut().expect("object").insert(
            "certificate".into(),
            report.certificate.as_ref().map_or(Value::Null, certificate_json),
        );
    }
    out
}

fn search_csv(report: &PeriodHeightReport) -> Outcome {
    let mut w = csv::Writer::from_writer(std::io::stdout());
    w.write_record(["value", "height", "exponents", "period", "lower_bound", "integral"])
        .map_err(io_failure)?;
    for (f, row) in report.search.found.iter().zip(&report.rows) {
        let exps: Vec<String> = f.exponents.iter().map(u64::to_string).collect();
        w.write_record([
            f.value.to_string(),
            f.height.to_string(),
            exps.join(" "),
            f.period_length.to_string(),
            row.lower_bound.as_ref().map_or(String::new(), |b| b.to_string()),
            f.integral.to_string(),
        ])
        .map_err(io_failure)?;
    }
    w.flush().map_err(|e| io_failure(e.into()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Domain(_) => 1,
                Error::Parse { .. } => 2,
                Error::Resource { .. } => 3,
            })
        }
    }
}
