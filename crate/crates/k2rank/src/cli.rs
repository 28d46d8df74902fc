//! Command-line front end: one subcommand per pipeline stage, CSV or JSON
//! output, and the exit-code contract (0 success, 1 usage/domain error,
//! 2 invariant violation).

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::classify::classify;
use crate::criteria::{split_generator, FastPath, ProfileEngine};
use crate::error::{Error, Result};
use crate::qforms::enumerate_class_group;
use crate::report::{density_series, enumerate_omega, frac4, tabulate, DensityReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FastPathArg {
    Off,
    On,
    Verify,
}

impl From<FastPathArg> for FastPath {
    fn from(arg: FastPathArg) -> Self {
        match arg {
            FastPathArg::Off => FastPath::Off,
            FastPathArg::On => FastPath::On,
            FastPathArg::Verify => FastPath::Verify,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "k2rank",
    version,
    about = "Classify primes by quadratic-form representation conditions and \
             reproduce the 4-rank density tables"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for table runs.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Classification route: literal representation scans (off), the
    /// class-group shortcut (on), or both with a mismatch check (verify).
    #[arg(long = "fast-path", global = true, value_enum, default_value_t = FastPathArg::Off)]
    fast_path: FastPathArg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the members of Omega(p) up to a limit.
    Omega {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        limit: u64,
    },
    /// Classify a single prime l of Omega(p).
    Classify {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        l: u64,
    },
    /// Omega/Lambda class counts (Table 1 layout) for one or more p.
    Table1 {
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u64>,
        #[arg(long)]
        limit: u64,
    },
    /// Tuple class counts (Table 2 layout) for one or more p.
    Table2 {
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u64>,
        #[arg(long)]
        limit: u64,
    },
    /// Cumulative class fractions at evenly spaced checkpoints.
    Densities {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        limit: u64,
        #[arg(long)]
        checkpoints: u64,
    },
    /// Reduced forms and class number of discriminant −8p.
    Classgroup {
        #[arg(long)]
        p: u64,
    },
    /// Minimal solution of a² − 2b² = −p.
    Splitgen {
        #[arg(long)]
        p: u64,
    },
}

/// Parse argv, dispatch, write output; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    1
                }
            };
        }
    };
    match execute(&cli).and_then(|output| write_output(cli.out.as_deref(), &output)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn write_output(out: Option<&std::path::Path>, body: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<String> {
    if cli.jobs < 1 {
        return Err(Error::domain("jobs must be at least 1"));
    }
    let mode = FastPath::from(cli.fast_path);
    match &cli.command {
        Command::Omega { p, limit } => render_omega(*p, *limit, cli.format),
        Command::Classify { p, l } => render_classify(*p, *l, mode, cli.format),
        Command::Table1 { p, limit } => {
            render_tables(p, *limit, mode, cli.format, cli.jobs, TableKind::One)
        }
        Command::Table2 { p, limit } => {
            render_tables(p, *limit, mode, cli.format, cli.jobs, TableKind::Two)
        }
        Command::Densities {
            p,
            limit,
            checkpoints,
        } => render_densities(*p, *limit, *checkpoints, mode, cli.format, cli.jobs),
        Command::Classgroup { p } => render_classgroup(*p, cli.format),
        Command::Splitgen { p } => render_splitgen(*p, cli.format),
    }
}

fn to_pretty(value: &Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::invariant(format!("JSON rendering failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn render_omega(p: u64, limit: u64, format: Format) -> Result<String> {
    let omega = enumerate_omega(p, limit)?;
    match format {
        Format::Csv => {
            let mut s = String::from("l\n");
            for l in omega.members() {
                s.push_str(&l.to_string());
                s.push('\n');
            }
            Ok(s)
        }
        Format::Json => to_pretty(&json!({
            "p": p,
            "limit": limit,
            "count": omega.len(),
            "members": omega.members(),
        })),
    }
}

fn render_classify(p: u64, l: u64, mode: FastPath, format: Format) -> Result<String> {
    let engine = ProfileEngine::new(p, mode)?;
    let rec = classify(&engine, l)?;
    match format {
        Format::Csv => {
            let t = rec.tuple;
            Ok(format!(
                "l,p,sat_1_32,quartic,l_mod_16,case,upsilon,mu,sigma,tau\n\
                 {},{},{},{},{},{},{},{},{},{}\n",
                rec.l,
                rec.p,
                u8::from(rec.profile.sat_1_32),
                rec.profile.quartic.label(),
                rec.profile.residue16,
                rec.case.label(),
                t.upsilon,
                t.mu,
                t.sigma,
                t.tau
            ))
        }
        Format::Json => to_pretty(&json!({
            "l": rec.l,
            "p": rec.p,
            "sat_1_32": rec.profile.sat_1_32,
            "quartic": rec.profile.quartic.label(),
            "l_mod_16": rec.profile.residue16,
            "case": rec.case.label(),
            "tuple": rec.tuple.as_array(),
            "witnesses": {
                "sat_1_32": rec.profile.witness_1_32.map(|w| [w.n, w.m]),
                "quartic": rec.profile.quartic_witness.map(|w| [w.n, w.m]),
            },
        })),
    }
}

#[derive(Clone, Copy)]
enum TableKind {
    One,
    Two,
}

fn render_tables(
    ps: &[u64],
    limit: u64,
    mode: FastPath,
    format: Format,
    jobs: usize,
    kind: TableKind,
) -> Result<String> {
    let mut ps = ps.to_vec();
    ps.sort_unstable();
    ps.dedup();
    let mut reports = Vec::with_capacity(ps.len());
    for p in ps {
        let engine = ProfileEngine::new(p, mode)?;
        reports.push(tabulate(&engine, limit, jobs)?);
    }
    match format {
        Format::Csv => Ok(tables_csv(&reports, kind)),
        Format::Json => {
            let rows: Vec<Value> = reports.iter().map(|r| table_row_json(r, kind)).collect();
            to_pretty(&Value::Array(rows))
        }
    }
}

fn tables_csv(reports: &[DensityReport], kind: TableKind) -> String {
    let mut s = String::from(match kind {
        TableKind::One => {
            "p,limit,omega,omega1,omega2,omega3,omega4,lambda1,lambda2,lambda3,lambda4\n"
        }
        TableKind::Two => "p,limit,omega,i1,i2,i3,i4,i5,i6,i7,i8\n",
    });
    for r in reports {
        let fields: Vec<u64> = match kind {
            TableKind::One => r
                .omega_classes
                .iter()
                .chain(r.lambda_classes.iter())
                .copied()
                .collect(),
            TableKind::Two => r.tuple_classes.to_vec(),
        };
        s.push_str(&format!("{},{},{}", r.p, r.limit, r.omega_count));
        for f in fields {
            s.push_str(&format!(",{f}"));
        }
        s.push('\n');
    }
    s
}

fn table_row_json(r: &DensityReport, kind: TableKind) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("p".into(), r.p.into());
    obj.insert("limit".into(), r.limit.into());
    obj.insert("omega".into(), r.omega_count.into());
    let frac = |count: u64| -> Value {
        if r.omega_count > 0 {
            frac4(count, r.omega_count).into()
        } else {
            Value::Null
        }
    };
    match kind {
        TableKind::One => {
            for (i, &count) in r.omega_classes.iter().enumerate() {
                obj.insert(format!("omega{}", i + 1), count.into());
                obj.insert(format!("omega{}_frac", i + 1), frac(count));
            }
            for (i, &count) in r.lambda_classes.iter().enumerate() {
                obj.insert(format!("lambda{}", i + 1), count.into());
                obj.insert(format!("lambda{}_frac", i + 1), frac(count));
            }
        }
        TableKind::Two => {
            for (i, &count) in r.tuple_classes.iter().enumerate() {
                obj.insert(format!("i{}", i + 1), count.into());
                obj.insert(format!("i{}_frac", i + 1), frac(count));
            }
        }
    }
    Value::Object(obj)
}

fn render_densities(
    p: u64,
    limit: u64,
    checkpoints: u64,
    mode: FastPath,
    format: Format,
    jobs: usize,
) -> Result<String> {
    let engine = ProfileEngine::new(p, mode)?;
    let rows = density_series(&engine, limit, checkpoints, jobs)?;
    match format {
        Format::Csv => {
            let mut s = String::from(
                "p,n,omega,omega1,omega2,omega3,omega4,lambda1,lambda2,lambda3,lambda4,\
                 i1,i2,i3,i4,i5,i6,i7,i8\n",
            );
            for row in &rows {
                s.push_str(&format!("{},{},{}", p, row.n, row.omega_count));
                for c in row.omega_classes.iter().chain(&row.lambda_classes) {
                    s.push_str(&format!(",{c}"));
                }
                for c in &row.tuple_classes {
                    s.push_str(&format!(",{c}"));
                }
                s.push('\n');
            }
            Ok(s)
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|row| {
                    let mut obj = serde_json::Map::new();
                    obj.insert("n".into(), row.n.into());
                    obj.insert("omega".into(), row.omega_count.into());
                    let opt = |f: Option<f64>| f.map(Value::from).unwrap_or(Value::Null);
                    for i in 0..4 {
                        obj.insert(format!("omega{}", i + 1), row.omega_classes[i].into());
                        obj.insert(format!("omega{}_frac", i + 1), opt(row.omega_fracs[i]));
                        obj.insert(format!("lambda{}", i + 1), row.lambda_classes[i].into());
                        obj.insert(format!("lambda{}_frac", i + 1), opt(row.lambda_fracs[i]));
                    }
                    for i in 0..8 {
                        obj.insert(format!("i{}", i + 1), row.tuple_classes[i].into());
                        obj.insert(format!("i{}_frac", i + 1), opt(row.tuple_fracs[i]));
                    }
                    Value::Object(obj)
                })
                .collect();
            to_pretty(&json!({
                "p": p,
                "limit": limit,
                "checkpoints": checkpoints,
                "rows": rows,
            }))
        }
    }
}

fn render_classgroup(p: u64, format: Format) -> Result<String> {
    crate::criteria::validate_omega_prime(p)?;
    let disc = -8 * p as i64;
    let cg = enumerate_class_group(disc)?;
    match format {
        Format::Csv => {
            let mut s = String::from("p,disc,h,a,b,c\n");
            for f in cg.forms() {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    p,
                    disc,
                    cg.h(),
                    f.a(),
                    f.b(),
                    f.c()
                ));
            }
            Ok(s)
        }
        Format::Json => {
            let forms: Vec<[i64; 3]> = cg.forms().iter().map(|f| [f.a(), f.b(), f.c()]).collect();
            let principal = cg.principal();
            to_pretty(&json!({
                "p": p,
                "disc": disc,
                "h": cg.h(),
                "principal": [principal.a(), principal.b(), principal.c()],
                "forms": forms,
            }))
        }
    }
}

fn render_splitgen(p: u64, format: Format) -> Result<String> {
    let g = split_generator(p)?;
    match format {
        Format::Csv => Ok(format!("p,a,b\n{},{},{}\n", p, g.a, g.b)),
        Format::Json => to_pretty(&json!({ "p": p, "a": g.a, "b": g.b })),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exec(args: &[&str]) -> Result<String> {
        let cli = Cli::try_parse_from(args.iter().copied()).unwrap();
        execute(&cli)
    }

    #[test]
    fn omega_csv_lists_members() {
        let out = exec(&["k2rank", "omega", "--p", "7", "--limit", "300"]).unwrap();
        assert_eq!(out, "l\n113\n137\n193\n233\n281\n");
    }

    #[test]
    fn classify_csv_row() {
        let out = exec(&["k2rank", "classify", "--p", "7", "--l", "113"]).unwrap();
        let mut lines = out.lines();
        assert_eq!(
            lines.next().unwrap(),
            "l,p,sat_1_32,quartic,l_mod_16,case,upsilon,mu,sigma,tau"
        );
        assert_eq!(lines.next().unwrap(), "113,7,1,2_p,1,II.5,1,1,0,0");
    }

    #[test]
    fn classify_json_matches_pinned_schema() {
        let out = exec(&[
            "k2rank", "classify", "--p", "7", "--l", "113", "--format", "json",
        ])
        .unwrap();
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["l"], 113);
        assert_eq!(v["p"], 7);
        assert_eq!(v["sat_1_32"], true);
        assert_eq!(v["quartic"], "2_p");
        assert_eq!(v["l_mod_16"], 1);
        assert_eq!(v["case"], "II.5");
        assert_eq!(v["tuple"], json!([1, 1, 0, 0]));
        assert_eq!(v["witnesses"]["sat_1_32"], json!([9, 1]));
        assert_eq!(v["witnesses"]["quartic"], json!([5, 3]));
    }

    #[test]
    fn classify_json_round_trips_bytes() {
        let out = exec(&[
            "k2rank", "classify", "--p", "7", "--l", "281", "--format", "json",
        ])
        .unwrap();
        let v: Value = serde_json::from_str(&out).unwrap();
        let again = to_pretty(&v).unwrap();
        assert_eq!(out, again);
    }

    #[test]
    fn classify_rejects_non_member() {
        let err = exec(&["k2rank", "classify", "--p", "7", "--l", "17"]).unwrap_err();
        assert!(err.to_string().contains("not in Omega"));
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn table2_csv_small_run() {
        let out = exec(&["k2rank", "table2", "--p", "7", "--limit", "300"]).unwrap();
        assert_eq!(
            out,
            "p,limit,omega,i1,i2,i3,i4,i5,i6,i7,i8\n7,300,5,1,1,1,2,0,0,0,0\n"
        );
    }

    #[test]
    fn table1_csv_small_run() {
        let out = exec(&["k2rank", "table1", "--p", "7", "--limit", "300"]).unwrap();
        assert_eq!(
            out,
            "p,limit,omega,omega1,omega2,omega3,omega4,lambda1,lambda2,lambda3,lambda4\n\
             7,300,5,2,3,5,0,3,2,2,3\n"
        );
    }

    #[test]
    fn tables_sort_rows_by_p() {
        let out = exec(&["k2rank", "table2", "--p", "23,7", "--limit", "300"]).unwrap();
        let rows: Vec<&str> = out.lines().skip(1).collect();
        assert!(rows[0].starts_with("7,"));
        assert!(rows[1].starts_with("23,"));
    }

    #[test]
    fn densities_json_has_fraction_rows() {
        let out = exec(&[
            "k2rank",
            "densities",
            "--p",
            "7",
            "--limit",
            "2000",
            "--checkpoints",
            "2",
            "--format",
            "json",
        ])
        .unwrap();
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["checkpoints"], 2);
        let rows = v["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1]["n"], 2000);
        // All eight tuple fractions together are 1 within rounding.
        let total: f64 = (1..=8)
            .map(|i| rows[1][format!("i{i}_frac").as_str()].as_f64().unwrap())
            .sum();
        assert!((total - 1.0).abs() < 0.001);
    }

    #[test]
    fn classgroup_csv_for_p7() {
        let out = exec(&["k2rank", "classgroup", "--p", "7"]).unwrap();
        assert_eq!(
            out,
            "p,disc,h,a,b,c\n7,-56,4,1,0,14\n7,-56,4,2,0,7\n7,-56,4,3,-2,5\n7,-56,4,3,2,5\n"
        );
    }

    #[test]
    fn splitgen_outputs() {
        let out = exec(&["k2rank", "splitgen", "--p", "23"]).unwrap();
        assert_eq!(out, "p,a,b\n23,3,4\n");
        let out = exec(&["k2rank", "splitgen", "--p", "31", "--format", "json"]).unwrap();
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v, json!({"p": 31, "a": 1, "b": 4}));
    }

    #[test]
    fn jobs_zero_is_a_domain_error() {
        let cli = Cli::try_parse_from(["k2rank", "omega", "--p", "7", "--limit", "100", "--jobs", "0"])
            .unwrap();
        let err = execute(&cli).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn run_reports_usage_errors_with_exit_1() {
        assert_eq!(run(["k2rank", "nonsense"]), 1);
        assert_eq!(run(["k2rank", "classify", "--p", "7"]), 1); // missing --l
    }
}
