//! Command-line front end. Coefficients are always listed constant term
//! first: `--poly 5,-1,1` is `t^2 - t + 5`.

use std::io::{self, BufRead, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Value};

use weilrank::classify::{
    classify, classify_auto, classify_with_oracle, fourfold_diagnostic, sufficiency_degree,
    ClassifyError,
};
use weilrank::exact::IntPoly;
use weilrank::json::{self as js, parse_coeffs, parse_int, InputError};
use weilrank::newton::NewtonType;
use weilrank::relfinder::{oracle_rank, RelationConfig};
use weilrank::search::{
    construct_totally_real_cubic, enumerate_weil, find_non_neat_sextics, NonNeatSpec, SearchError,
    SearchSpec,
};
use weilrank::weil::{base_change, validate, WeilError};

const OK: u8 = 0;
const USAGE: u8 = 1;
const INVALID: u8 = 2;
const DISAGREE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "weilrank",
    version,
    about = "Neatness and multiplicative rank of Weil q-polynomials"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate and report eigenvalue structure and Newton polygon.
    Analyze {
        #[arg(long)]
        q: String,
        /// Coefficients, constant term first, comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        json: bool,
    },
    /// Neatness, rank and condition flags as JSON.
    Classify {
        #[arg(long, required_unless_present = "batch")]
        q: Option<String>,
        #[arg(long, allow_hyphen_values = true, required_unless_present = "batch")]
        poly: Option<String>,
        /// JSONL file of {"coeffs":[...],"q":...} records ("-" for stdin).
        #[arg(long, conflicts_with_all = ["q", "poly"])]
        batch: Option<String>,
        /// Base change to the sufficiency degree first.
        #[arg(long)]
        auto_extend: bool,
        /// Run the relation oracle and compare.
        #[arg(long)]
        oracle_check: bool,
        /// Exponent bound H for the oracle.
        #[arg(long)]
        bound: Option<u32>,
        /// Dimension-4 diagnostic instead of classification.
        #[arg(long)]
        fourfold_diagnostic: bool,
    },
    /// Non-neat almost ordinary sextics G * conj(G) over Q(sqrt m).
    SearchNonneat {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        m: i64,
        /// Cap on |A|^2 (default 9q).
        #[arg(long)]
        a_norm_bound: Option<u64>,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Weil polynomials (functional-equation sign +1) as JSONL.
    Enumerate {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        q: u64,
        /// Caps on |a_1|, |a_2|, ...; empty entries are uncapped ("3,,5").
        #[arg(long)]
        bounds: Option<String>,
        #[arg(long)]
        irreducible: bool,
        /// ordinary, supersingular, almost_ordinary, k3_type or other.
        #[arg(long)]
        newton: Option<String>,
        #[arg(long)]
        neat: Option<bool>,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// The cubic x (x^2 - l) + p l / (p l + 1)^4 and its checks.
    CubicField {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        l: u64,
    },
    /// Characteristic polynomial over F_{q^n}.
    BaseChange {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Relation lattice and rank from the independent oracle.
    Oracle {
        #[arg(long)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        bound: Option<u32>,
    },
}

struct Failure(u8, String);

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure(USAGE, e.to_string())
    }
}

impl From<WeilError> for Failure {
    fn from(e: WeilError) -> Self {
        Failure(INVALID, e.to_string())
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Weil(w) => w.into(),
            ClassifyError::NotSufficientlyLarge { .. } => {
                Failure(USAGE, format!("{e} (pass --auto-extend)"))
            }
            other => Failure(USAGE, other.to_string()),
        }
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Classify(c) => c.into(),
            other => Failure(USAGE, other.to_string()),
        }
    }
}

fn emit(v: &Value) {
    let mut out = io::stdout().lock();
    // a closed pipe is not an error worth reporting
    let _ = writeln!(out, "{v}");
}

fn oracle_cfg(bound: Option<u32>) -> RelationConfig {
    let mut cfg = RelationConfig::default();
    if let Some(h) = bound {
        cfg.exponent_bound = h;
    }
    cfg
}

#[derive(Clone, Copy)]
struct ClassifyOpts {
    auto_extend: bool,
    oracle_check: bool,
    bound: Option<u32>,
    fourfold: bool,
}

/// One classification; the exit code is 3 on disagreement.
fn classify_one(p: &IntPoly, q: &BigInt, o: ClassifyOpts) -> Result<(Value, u8), Failure> {
    let w = validate(p, q)?;
    let cfg = oracle_cfg(o.bound);
    if o.fourfold {
        let w = if o.auto_extend {
            base_change(&w, sufficiency_degree(&w)?)?
        } else {
            w
        };
        let f = fourfold_diagnostic(&w, &cfg)?;
        return Ok((js::fourfold((p, q), &f), OK));
    }
    let with = (o.oracle_check || o.bound.is_some()).then_some(&cfg);
    let r = if o.auto_extend {
        classify_auto(&w, with)?
    } else {
        match with {
            Some(c) => classify_with_oracle(&w, c)?,
            None => classify(&w)?,
        }
    };
    let mut code = OK;
    if r.oracle_disagrees() {
        code = DISAGREE;
    }
    if let Err(e) = r.check_invariants() {
        eprintln!("internal invariant violated: {e}");
        code = DISAGREE;
    }
    Ok((js::classification((p, q), &r), code))
}

fn failure_record(f: &Failure, line: Option<usize>) -> Value {
    let mut v = json!({ "error": js::error_name(&f.1), "message": f.1 });
    if let Some(i) = line {
        v["line"] = json!(i.to_string());
    }
    js::tagged(v)
}

fn classify_batch(path: &str, o: ClassifyOpts) -> Result<u8, Failure> {
    let lines: Vec<String> = if path == "-" {
        io::stdin().lock().lines().collect::<Result<_, _>>()
    } else {
        std::fs::read_to_string(path).map(|t| t.lines().map(str::to_string).collect())
    }
    .map_err(|e| Failure(USAGE, format!("cannot read {path}: {e}")))?;
    let results: Vec<(Value, u8)> = lines
        .par_iter()
        .enumerate()
        .map(|(i, line)| {
            let run = || -> Result<(Value, u8), Failure> {
                let (p, q, rec) = js::parse_poly_input(line)?;
                let mut o = o;
                if let Some(b) = rec.get("bound") {
                    let h = match b {
                        Value::String(t) => parse_int(t)?,
                        other => parse_int(&other.to_string())?,
                    };
                    o.bound = Some(
                        u32::try_from(h)
                            .map_err(|_| Failure(USAGE, "bound out of range".into()))?,
                    );
                }
                classify_one(&p, &q, o)
            };
            run().unwrap_or_else(|f| (failure_record(&f, Some(i + 1)), f.0))
        })
        .collect();
    let mut worst = OK;
    for (i, (v, code)) in results.iter().enumerate() {
        emit(v);
        if *code == DISAGREE {
            eprintln!("line {}: classifier and oracle disagree", i + 1);
        }
        worst = worst.max(*code);
    }
    eprintln!("{} records", results.len());
    Ok(worst)
}

fn newton_filter(name: &str) -> Result<NewtonType, Failure> {
    [
        NewtonType::Ordinary,
        NewtonType::Supersingular,
        NewtonType::AlmostOrdinary,
        NewtonType::K3Type,
        NewtonType::Other,
    ]
    .into_iter()
    .find(|t| t.as_str() == name)
    .ok_or_else(|| Failure(USAGE, format!("unknown Newton type {name:?}")))
}

fn analyze_text(v: &Value) -> String {
    let st = &v["structure"];
    let np = &v["newton"];
    let segs: Vec<String> = np["segments"]
        .as_array()
        .expect("segments")
        .iter()
        .map(|x| {
            format!(
                "{}^{}",
                x["slope"].as_str().unwrap_or(""),
                x["length"].as_str().unwrap_or("")
            )
        })
        .collect();
    let join = |a: &Value| {
        a.as_array()
            .map(|x| {
                x.iter()
                    .filter_map(Value::as_str)
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .unwrap_or_default()
    };
    let mut out = vec![
        format!(
            "valid Weil polynomial, q = {} (p = {}), g = {}",
            v["q"].as_str().unwrap_or(""),
            v["p"].as_str().unwrap_or(""),
            v["g"].as_str().unwrap_or("")
        ),
        format!(
            "pmin: {}  (e = {}, d = {}, r = {}, sqrt q root: {})",
            join(&st["pmin"]),
            st["e"].as_str().unwrap_or("-"),
            st["d"].as_str().unwrap_or(""),
            st["r_count"].as_str().unwrap_or(""),
            st["sqrt_root"].as_str().unwrap_or("")
        ),
    ];
    for c in st["components"].as_array().into_iter().flatten() {
        out.push(format!(
            "  factor {} ^ {}",
            join(&c["pmin"]),
            c["e"].as_str().unwrap_or("")
        ));
    }
    out.push(format!(
        "Newton polygon: {}  ({})",
        segs.join(" "),
        np["type"].as_str().unwrap_or("")
    ));
    match v.get("sufficiency_degree") {
        Some(n) => out.push(format!("sufficiency degree: {}", n.as_str().unwrap_or(""))),
        None => out.push(format!(
            "sufficiency: {}",
            v["sufficiency_error"].as_str().unwrap_or("")
        )),
    }
    out.join("\n")
}

fn run(cmd: Cmd) -> Result<u8, Failure> {
    match cmd {
        Cmd::Analyze { q, poly, json } => {
            let (p, q) = (parse_coeffs(&poly)?, parse_int(&q)?);
            let w = match validate(&p, &q) {
                Ok(w) => w,
                Err(e) => {
                    if json {
                        emit(&js::error_record(&e));
                    }
                    return Err(e.into());
                }
            };
            let suff = sufficiency_degree(&w).map_err(|e| e.to_string());
            let v = js::analysis(&w, suff);
            if json {
                emit(&v);
            } else {
                println!("{}", analyze_text(&v));
            }
            Ok(OK)
        }
        Cmd::Classify {
            q,
            poly,
            batch,
            auto_extend,
            oracle_check,
            bound,
            fourfold_diagnostic,
        } => {
            let o = ClassifyOpts {
                auto_extend,
                oracle_check,
                bound,
                fourfold: fourfold_diagnostic,
            };
            if let Some(path) = batch {
                return classify_batch(&path, o);
            }
            let (p, q) = (
                parse_coeffs(&poly.expect("required"))?,
                parse_int(&q.expect("required"))?,
            );
            let (v, code) = classify_one(&p, &q, o)?;
            emit(&v);
            if code == DISAGREE {
                eprintln!("classifier and oracle disagree");
            }
            Ok(code)
        }
        Cmd::SearchNonneat {
            p,
            q,
            m,
            a_norm_bound,
            limit,
        } => {
            let found = find_non_neat_sextics(&NonNeatSpec {
                p,
                q,
                m,
                a_norm_bound,
                limit,
            })?;
            for inst in &found {
                let mut v = js::classification((inst.weil.poly(), inst.weil.q()), &inst.report);
                v["search_witness"] = js::witness(&inst.witness);
                emit(&v);
            }
            eprintln!("{} non-neat sextics", found.len());
            Ok(OK)
        }
        Cmd::Enumerate {
            g,
            q,
            bounds,
            irreducible,
            newton,
            neat,
            limit,
        } => {
            let mut spec = SearchSpec::new(g, q);
            if let Some(b) = bounds {
                spec.bounds = b
                    .split(',')
                    .map(|t| {
                        if t.trim().is_empty() {
                            Ok(None)
                        } else {
                            t.trim().parse().map(Some)
                        }
                    })
                    .collect::<Result<_, _>>()
                    .map_err(|_| Failure(USAGE, format!("bad --bounds {b:?}")))?;
            }
            spec.irreducible_only = irreducible;
            spec.newton = newton.as_deref().map(newton_filter).transpose()?;
            spec.neat = neat;
            spec.limit = limit;
            let all = enumerate_weil(&spec)?;
            for w in &all {
                emit(&js::tagged(js::poly_input(w.poly(), w.q())));
            }
            eprintln!("{} Weil polynomials", all.len());
            Ok(OK)
        }
        Cmd::CubicField { p, l } => {
            let r = construct_totally_real_cubic(p, l)?;
            emit(&js::cubic(&r));
            Ok(OK)
        }
        Cmd::BaseChange { n, q, poly } => {
            if n == 0 {
                return Err(Failure(USAGE, "--n must be positive".into()));
            }
            let w = validate(&parse_coeffs(&poly)?, &parse_int(&q)?)?;
            let b = base_change(&w, n)?;
            emit(&js::tagged(js::poly_input(b.poly(), b.q())));
            Ok(OK)
        }
        Cmd::Oracle { q, poly, bound } => {
            let w = validate(&parse_coeffs(&poly)?, &parse_int(&q)?)?;
            let o =
                oracle_rank(&w, &oracle_cfg(bound)).map_err(|e| Failure(USAGE, e.to_string()))?;
            emit(&js::oracle(&w, &o));
            Ok(OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
