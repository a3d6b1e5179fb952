use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use jmcalc::ledger::{decomposition_of, table_entry, Triple, TABLE};
use jmcalc::mustar::{minimal_jacquet_oracle, mu_star_depth, word_cap_from_env, Depth};
use jmcalc::parse::{parse_expr, parse_half};
use jmcalc::report::{Report, Summary};
use jmcalc::segments::HalfInt;
use jmcalc::theorems::Status;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "jmcalc",
    version,
    about = "Jacquet modules and composition factors of two-segment induced representations"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the check registry on one triple 1/2 ≤ a < b < c.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// Comma-separated check ids.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<String>>,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<String>,
    },
    /// Run the registry on every triple with c ≤ max.
    Sweep {
        #[arg(long)]
        max: String,
        #[arg(long)]
        jobs: Option<usize>,
        /// Write the JSON reports (one array) here.
        #[arg(long)]
        json: Option<String>,
    },
    /// Jacquet module of an induced expression.
    Mustar {
        #[arg(long)]
        expr: String,
        /// A level count or `full`.
        #[arg(long, default_value = "1")]
        depth: String,
        /// Print brute-force minimal Jacquet words instead (word cap from
        /// `JMCALC_WORD_CAP`).
        #[arg(long)]
        oracle: bool,
    },
    /// Composition factors of a table entry.
    Factors {
        #[arg(long)]
        name: String,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
    },
}

struct Failure(u8, String);

fn usage(msg: impl ToString) -> Failure {
    Failure(EXIT_USAGE, msg.to_string())
}

fn half(name: &str, s: &str) -> Result<HalfInt, Failure> {
    parse_half(s).map_err(|e| usage(format!("--{name} {s}: {e}")))
}

fn triple(a: &str, b: &str, c: &str) -> Result<Triple, Failure> {
    Triple::new(half("a", a)?, half("b", b)?, half("c", c)?).map_err(usage)
}

fn exit_for(status: Status) -> u8 {
    match status {
        Status::Pass => 0,
        Status::Partial => EXIT_INTERNAL,
        Status::Fail => EXIT_FAIL,
    }
}

fn write_file(path: &str, body: &str) -> Result<(), Failure> {
    fs::write(path, body).map_err(|e| Failure(EXIT_INTERNAL, format!("cannot write {path}: {e}")))
}

fn print_report(r: &Report) {
    let width = r.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
    for c in &r.checks {
        println!("{:<7} {:<width$}  {}", c.status.to_string(), c.id, c.claim);
        if c.status != Status::Pass {
            println!("        expected {}", c.expected);
            println!("        computed {}", c.computed);
        }
    }
    let s = r.summary;
    println!("{} checks: {} pass, {} partial, {} fail", r.checks.len(), s.pass, s.partial, s.fail);
}

fn verify(a: &str, b: &str, c: &str, only: Option<Vec<String>>, json: Option<String>) -> Result<u8, Failure> {
    let t = triple(a, b, c)?;
    let r = Report::run(t, only.as_deref()).map_err(usage)?;
    println!("triple {t}");
    print_report(&r);
    if let Some(p) = json {
        write_file(&p, &r.to_json())?;
    }
    Ok(exit_for(r.status()))
}

fn sweep(max: &str, jobs: Option<usize>, json: Option<String>) -> Result<u8, Failure> {
    let max = half("max", max)?;
    if max < HalfInt::from_twice(5) || !max.is_half_odd() {
        return Err(usage(format!("--max must be at least 5/2 in Z+1/2, got {max}")));
    }
    let grid = Triple::grid(max);
    let run = || grid.par_iter().map(|&t| Report::run(t, None)).collect::<Result<Vec<_>, _>>();
    let reports = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Failure(EXIT_INTERNAL, e.to_string()))?
            .install(run),
        None => run(),
    }
    .map_err(|e| Failure(EXIT_INTERNAL, e.to_string()))?;
    let mut total = Summary::default();
    for r in &reports {
        let p = r.params;
        let s = r.summary;
        println!("({}/2,{}/2,{}/2)  {} pass, {} partial, {} fail", p.a2, p.b2, p.c2, s.pass, s.partial, s.fail);
        for c in r.checks.iter().filter(|c| c.status != Status::Pass) {
            println!("    {} {}: expected {}, computed {}", c.status, c.id, c.expected, c.computed);
        }
        total = total.merge(s);
    }
    println!("{} triples: {} pass, {} partial, {} fail", reports.len(), total.pass, total.partial, total.fail);
    if let Some(p) = json {
        write_file(&p, &serde_json::to_string_pretty(&reports).expect("reports serialize"))?;
    }
    Ok(exit_for(reports.iter().map(Report::status).max().unwrap_or(Status::Pass)))
}

fn mustar(expr: &str, depth: &str, oracle: bool) -> Result<u8, Failure> {
    let e = parse_expr(expr).map_err(|err| usage(format!("{expr}\n{}^ {err}", " ".repeat(err.pos))))?;
    if oracle {
        let words =
            minimal_jacquet_oracle(&e, word_cap_from_env()).map_err(|err| Failure(EXIT_INTERNAL, err.to_string()))?;
        for (w, n) in &words {
            let w: Vec<String> = w.iter().map(ToString::to_string).collect();
            println!("{n} ({})", w.join(","));
        }
        println!("{} words", words.values().sum::<i64>());
        return Ok(0);
    }
    let depth = match depth {
        "full" => Depth::Full,
        n => Depth::Levels(n.parse().map_err(|_| usage(format!("--depth must be a number or `full`, got {n}")))?),
    };
    let sum = mu_star_depth(&e, depth).map_err(|err| Failure(EXIT_INTERNAL, err.to_string()))?;
    print!("{sum}");
    println!("{} terms", sum.len());
    Ok(0)
}

fn factors(name: &str, vals: [(&str, Option<String>); 5]) -> Result<u8, Failure> {
    let entry = table_entry(name).map_err(usage)?;
    let mut params = Vec::new();
    for p in entry.params {
        let v = vals.iter().find(|(n, _)| n == p).and_then(|(_, v)| v.as_deref());
        let v = v.ok_or_else(|| usage(format!("`{name}` needs --{}", entry.params.join(", --"))))?;
        params.push(half(p, v)?);
    }
    let sum = decomposition_of(name, &params).map_err(usage)?;
    println!("{}", entry.host);
    for (atom, n) in sum.terms() {
        println!("{n} {atom}");
    }
    println!("{} atoms", sum.len());
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.cmd {
        Cmd::Verify { a, b, c, only, json } => verify(&a, &b, &c, only, json),
        Cmd::Sweep { max, jobs, json } => sweep(&max, jobs, json),
        Cmd::Mustar { expr, depth, oracle } => mustar(&expr, &depth, oracle),
        Cmd::Factors { name, a, b, c, x, y } => {
            if name == "list" {
                for e in TABLE {
                    println!("{:<26} {:?}  {}", e.name, e.provenance, e.host);
                }
                Ok(0)
            } else {
                factors(&name, [("a", a), ("b", b), ("c", c), ("x", x), ("y", y)])
            }
        }
    };
    match r {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
