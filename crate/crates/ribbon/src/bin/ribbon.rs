use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use ribbon::fixtures;
use ribbon::obstruct::{self, MetabelianOptions, ObstructOptions, ObstructionReport, TestKind, SCHEMA};
use ribbon::seifert;
use ribbon::table::KnotTable;
use ribbon::twisted::{self, DEFAULT_GROUP_CAP};

/// Obstructions to ribbon concordance between knots.
#[derive(Parser)]
#[command(name = "ribbon", version)]
struct Cli {
    /// Knot table (JSON, or CSV by extension); the bundled table by default.
    #[arg(long, global = true)]
    file: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Δ, determinant, H_1 of the double cover, signature profile, cover orders.
    Invariants {
        name: String,
        #[arg(long, default_value_t = 6)]
        max_r: u64,
    },
    /// Test whether J ≥ K is obstructed.
    Obstruct {
        j: String,
        k: String,
        #[command(flatten)]
        tests: TestArgs,
        /// Report both J ≥ K and K ≥ J.
        #[arg(long)]
        both: bool,
    },
    /// All ordered pairs of a table.
    Scan {
        #[command(flatten)]
        tests: TestArgs,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Twisted Alexander polynomial of the metabelian representation.
    Metabelian {
        name: String,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
        cap: usize,
    },
    /// Twisted polynomials of the satellite family K_q.
    SatelliteFamily {
        name: String,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u64>,
        /// Homology class of the axis, comma separated over F_p; a default nonzero class otherwise.
        #[arg(long, value_delimiter = ',')]
        a_class: Option<Vec<u64>>,
        #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
        cap: usize,
    },
}

#[derive(Args)]
struct TestArgs {
    /// Comma separated subset of alexander,double,signature,metabelian.
    #[arg(long, value_delimiter = ',')]
    tests: Option<Vec<TestKind>>,
    #[arg(long)]
    r: Option<u64>,
    #[arg(long)]
    p: Option<u64>,
    /// Assert the hypothesis under which twisted non-divisibility obstructs.
    #[arg(long)]
    applicable: bool,
    #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
    cap: usize,
}

impl TestArgs {
    fn options(&self) -> Result<ObstructOptions, String> {
        let metabelian = match (self.r, self.p) {
            (Some(r), Some(p)) => Some(MetabelianOptions { r, p, applicable: self.applicable, cap: self.cap }),
            (None, None) => None,
            _ => return Err("--r and --p must be given together".into()),
        };
        let tests = match &self.tests {
            Some(t) => t.clone(),
            None => {
                let mut t = ObstructOptions::default().tests;
                if metabelian.is_some() {
                    t.push(TestKind::Metabelian);
                }
                t
            }
        };
        Ok(ObstructOptions { tests, metabelian })
    }
}

enum Failure {
    Usage(String),
    Data(String),
}

fn data<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Data(e.to_string())
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).unwrap() + "\n",
        Format::Text => text(),
    }
}

fn report_text(r: &ObstructionReport) -> String {
    let mut s = format!("{} >= {}: {}\n", r.j, r.k, r.aggregate);
    for e in &r.entries {
        s += &format!("  {:<10} {}", e.test.name(), e.verdict);
        if let Some(w) = &e.witness {
            s += &format!("  {}", serde_json::to_string(w).unwrap());
        }
        s.push('\n');
        for n in &e.notes {
            s += &format!("    note: {n}\n");
        }
    }
    s
}

fn run(cli: Cli) -> Result<String, Failure> {
    let table = match &cli.file {
        Some(path) => KnotTable::load(path).map_err(data)?,
        None => fixtures::bundled(),
    };
    let fmt = cli.format;
    match cli.command {
        Command::Invariants { name, max_r } => {
            let k = table.get(&name).map_err(data)?;
            let orders: BTreeMap<String, String> = (2..=max_r.max(2))
                .map(|r| {
                    let o = seifert::branched_cover_order(&k.seifert, r).expect("r >= 2");
                    (r.to_string(), if o == 0.into() { "infinite".into() } else { o.to_string() })
                })
                .collect();
            let v = json!({
                "schema": SCHEMA,
                "name": k.name,
                "alexander": k.alexander().normalize_units(),
                "determinant": k.determinant().to_string(),
                "double_cover": k.double_cover(),
                "branched_cover_orders": orders,
                "signature_profile": k.profile(),
            });
            Ok(emit(fmt, &v, || {
                let mut s = format!(
                    "{}\n  Δ = {}\n  det = {}\n  H_1(Σ_2) = {}\n",
                    k.name,
                    k.alexander().normalize_units(),
                    k.determinant(),
                    k.double_cover()
                );
                for (r, o) in &orders {
                    s += &format!("  |H_1(Σ_{r})| = {o}\n");
                }
                for j in &k.profile().jumps {
                    s += &format!("  x = {:.6}: deg {}, η {}, σ {}\n", j.x, j.deg, j.eta, j.sigma);
                }
                for a in &k.profile().arcs {
                    s += &format!("  ({:.6}, {:.6}): σ {}\n", a.start, a.end, a.sigma);
                }
                s
            }))
        }
        Command::Obstruct { j, k, tests, both } => {
            let opts = tests.options().map_err(Failure::Usage)?;
            let (jr, kr) = (table.get(&j).map_err(data)?, table.get(&k).map_err(data)?);
            let forward = obstruct::full_report(jr, kr, &opts);
            if both {
                let backward = obstruct::full_report(kr, jr, &opts);
                let v = json!({ "schema": SCHEMA, "reports": [forward, backward] });
                Ok(emit(fmt, &v, || report_text(&forward) + &report_text(&backward)))
            } else {
                Ok(emit(fmt, &forward, || report_text(&forward)))
            }
        }
        Command::Scan { tests, jobs, output } => {
            let opts = tests.options().map_err(Failure::Usage)?;
            let scan = obstruct::scan_table(&table.records, &opts, jobs);
            for w in &scan.warnings {
                eprintln!("warning: {w}");
            }
            let out = emit(fmt, &scan, || {
                let mut s: String = scan.reports.iter().map(report_text).collect();
                s += &format!("pairs: {}\n", scan.summary.pairs);
                for (t, n) in &scan.summary.obstructed_by {
                    s += &format!("obstructed by {}: {n}\n", t.name());
                }
                s
            });
            match output {
                Some(path) => {
                    std::fs::write(&path, out).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
                    Ok(String::new())
                }
                None => Ok(out),
            }
        }
        Command::Metabelian { name, r, p, cap } => {
            let k = table.get(&name).map_err(data)?;
            let pres = k.presentation().ok_or_else(|| Failure::Data(format!("{name} has no PD code")))?;
            let rep = twisted::metabelian_rep(&pres, r, p, cap).map_err(data)?;
            let delta = twisted::delta_rp(&pres, r, p, cap).map_err(data)?;
            let v = json!({
                "schema": SCHEMA,
                "name": name,
                "r": r,
                "p": p,
                "group_order": rep.order(),
                "delta": delta.normalize_units(),
            });
            Ok(emit(fmt, &v, || format!("Δ^({r},{p})({name}) = {}\n", delta.normalize_units())))
        }
        Command::SatelliteFamily { name, r, p, q, a_class, cap } => {
            let k = table.get(&name).map_err(data)?;
            let pres = k.presentation().ok_or_else(|| Failure::Data(format!("{name} has no PD code")))?;
            let a = match a_class {
                Some(a) => a,
                None => {
                    let rep = twisted::metabelian_rep(&pres, r, p, cap).map_err(data)?;
                    twisted::first_nonzero_class(&rep)
                        .ok_or_else(|| Failure::Data(format!("the metabelian module of {name} is trivial")))?
                }
            };
            let fam = twisted::satellite_family(&pres, r, p, &a, &q, cap).map_err(data)?;
            let v = json!({ "schema": SCHEMA, "name": name, "family": fam });
            Ok(emit(fmt, &v, || {
                let mut s = format!("base Δ^({r},{p}) = {}\n", fam.base);
                for m in &fam.members {
                    s += &format!("q = {}: m_q = {}, Δ = {}\n", m.q, m.m_q, m.delta);
                }
                s
            }))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Data(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
