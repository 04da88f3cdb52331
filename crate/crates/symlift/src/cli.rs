//! Command surface. Output is assembled into a single buffer per run so
//! identical inputs and flags produce byte-identical bytes on stdout, and
//! exit codes follow one contract everywhere: 0 success, 1 a check or
//! registered expectation failed, 2 the lift is obstructed, 3 bad input.

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::finitetop::audit::{audit, audit_all, AuditReport, Verdict};
use crate::finitetop::render_mask;
use crate::io;
use crate::lifting::{lift_region, verify, LiftOptions};
use crate::partitions::sim_classes;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_OBSTRUCTED: i32 = 2;
pub const EXIT_BAD_INPUT: i32 = 3;

#[derive(Parser)]
#[command(
    name = "symlift",
    version,
    about = "Coincidence patterns, finite-topology audits, and lifts of sampled symmetric-quotient regions"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SeedPolicyArg {
    /// Seed the root segment with the canonical arrangement of its sample.
    Canonical,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TieArg {
    /// Break matching ties toward the lexicographically least assignment.
    Lex,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integer partitions of m and their part-count classes
    Partitions {
        m: usize,
        /// Emit a JSON document instead of text
        #[arg(long)]
        json: bool,
    },
    /// Sweep a boundary-operator lemma (or all of them) over small spaces
    Audit {
        /// Lemma id from the registry, or "all"
        lemma: String,
        /// Largest ground-set size to sweep
        n: usize,
        /// Write the full report as JSON to this path
        #[arg(long)]
        out: Option<String>,
    },
    /// Lift a sampled region file to a grid of ordered tuples
    Lift {
        /// Region JSON file; "-" reads standard input
        region: String,
        /// Write the lift document to this path
        #[arg(long)]
        out: Option<String>,
        /// Replace the region file's classification tolerance
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, value_enum, default_value = "canonical")]
        seed_policy: SeedPolicyArg,
        #[arg(long, value_enum, default_value = "lex")]
        tie: TieArg,
    },
    /// Check a lift document against its region
    Verify {
        /// Region JSON file; "-" reads standard input
        region: String,
        /// Lift JSON file; "-" reads standard input
        lift: String,
        /// Replace the region file's classification tolerance
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Cardinalities of both quotients of a discrete q-point base
    Count {
        q: usize,
        m: usize,
        /// Emit a JSON document instead of text
        #[arg(long)]
        json: bool,
    },
}

/// Parses arguments and runs one command, returning the process exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_BAD_INPUT,
            };
            let _ = e.print();
            return code;
        }
    };
    let mut stdout = String::new();
    let code = match dispatch(&cli.cmd, &mut stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Holonomy { .. } | Error::ConflictingSheet { .. } => EXIT_OBSTRUCTED,
                _ => EXIT_BAD_INPUT,
            }
        }
    };
    print!("{stdout}");
    code
}

fn dispatch(cmd: &Cmd, out: &mut String) -> Result<i32> {
    match cmd {
        Cmd::Partitions { m, json } => cmd_partitions(*m, *json, out),
        Cmd::Audit { lemma, n, out: path } => cmd_audit(lemma, *n, path.as_deref(), out),
        Cmd::Lift {
            region,
            out: path,
            eps,
            seed_policy: SeedPolicyArg::Canonical,
            tie: TieArg::Lex,
        } => cmd_lift(region, path.as_deref(), *eps, out),
        Cmd::Verify { region, lift, eps } => cmd_verify(region, lift, *eps, out),
        Cmd::Count { q, m, json } => cmd_count(*q, *m, *json, out),
    }
}

fn write_file(path: &str, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::InvalidInput(format!("{path}: {e}")))
}

fn cmd_partitions(m: usize, json: bool, out: &mut String) -> Result<i32> {
    let file = io::partitions_file(m)?;
    if json {
        out.push_str(&io::to_json(&file));
        return Ok(EXIT_OK);
    }
    let table = sim_classes(m)?;
    writeln!(out, "m = {m}").unwrap();
    writeln!(out, "p(m) = {}", file.p).unwrap();
    writeln!(out, "M = {}", file.class_count).unwrap();
    for (id, members) in table.classes.iter().enumerate() {
        writeln!(
            out,
            "class {id}: {} parts, {} member{}",
            members[0].num_parts(),
            members.len(),
            if members.len() == 1 { "" } else { "s" }
        )
        .unwrap();
        for p in members {
            writeln!(out, "  {}", p.render()).unwrap();
        }
    }
    Ok(EXIT_OK)
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Fails => "fails",
    }
}

fn write_audit_line(out: &mut String, r: &AuditReport) {
    let status = if r.verdict == r.expected {
        "as registered"
    } else {
        "UNEXPECTED"
    };
    writeln!(
        out,
        "{}: {} (expected {}, {} cases) {}",
        r.lemma,
        verdict_word(r.verdict),
        verdict_word(r.expected),
        r.checked,
        status
    )
    .unwrap();
    if let Some(c) = &r.certificate {
        let mut parts = vec![format!("space = {}", c.space.render())];
        if let Some(cod) = &c.codomain {
            parts.push(format!("codomain = {}", cod.render()));
        }
        let sets: Vec<String> = c.sets.iter().map(|&s| render_mask(s)).collect();
        parts.push(format!("sets = {}", sets.join(" ")));
        if let Some(map) = &c.map {
            parts.push(format!("map = {map:?}"));
        }
        parts.push(format!(
            "lhs = {}, rhs = {}",
            render_mask(c.lhs),
            render_mask(c.rhs)
        ));
        parts.push(c.note.clone());
        writeln!(out, "  certificate: {}", parts.join("; ")).unwrap();
    }
}

fn cmd_audit(lemma: &str, n: usize, path: Option<&str>, out: &mut String) -> Result<i32> {
    let reports = if lemma == "all" {
        audit_all(n, n.min(3))?
    } else {
        vec![audit(lemma, n)?]
    };
    for r in &reports {
        write_audit_line(out, r);
    }
    let ok = reports.iter().all(|r| r.verdict == r.expected);
    writeln!(out, "audit: {}", if ok { "ok" } else { "unexpected verdicts" }).unwrap();
    if let Some(path) = path {
        let doc = io::audit_file_of(n, reports);
        write_file(path, &io::to_json(&doc))?;
    }
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_lift(region_arg: &str, path: Option<&str>, eps: Option<f64>, out: &mut String) -> Result<i32> {
    let text = io::read_source(region_arg)?;
    let file = io::parse_region_file(&text)?;
    let region = io::build_region(&file, eps)?;
    match lift_region(&region, &LiftOptions::default()) {
        Ok(lift) => {
            let report = verify(&region, &lift.tuples)?;
            let checks = io::checks_of_report(&report);
            writeln!(out, "nodes: {}", region.grid().len()).unwrap();
            writeln!(out, "segments: {}", lift.segmentation.segments.len()).unwrap();
            writeln!(out, "events: {}", lift.segmentation.events.len()).unwrap();
            writeln!(
                out,
                "passing nodes: {}",
                crate::regions::passing_nodes(&lift.segmentation).len()
            )
            .unwrap();
            writeln!(
                out,
                "max step displacement: {}",
                lift.diagnostics.max_step_displacement
            )
            .unwrap();
            writeln!(
                out,
                "round trip residual: {}",
                lift.diagnostics.round_trip_residual
            )
            .unwrap();
            writeln!(out, "tie breaks: {}", lift.diagnostics.tie_breaks).unwrap();
            for c in &checks {
                writeln!(out, "{}: {}", c.name, c.verdict).unwrap();
            }
            let ok = report.pass;
            writeln!(out, "lift: {}", if ok { "ok" } else { "check failed" }).unwrap();
            if let Some(path) = path {
                let doc = io::lift_file_of(&region, &lift, checks);
                write_file(path, &io::to_json(&doc))?;
            }
            Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Err(e @ (Error::Holonomy { .. } | Error::ConflictingSheet { .. })) => {
            if let Some(path) = path {
                let doc = io::obstruction_file_of(&region, &e);
                write_file(path, &io::to_json(&doc))?;
            }
            writeln!(out, "lift: obstructed").unwrap();
            eprintln!("error: {e}");
            Ok(EXIT_OBSTRUCTED)
        }
        Err(e) => Err(e),
    }
}

fn cmd_verify(region_arg: &str, lift_arg: &str, eps: Option<f64>, out: &mut String) -> Result<i32> {
    if region_arg == "-" && lift_arg == "-" {
        return Err(Error::InvalidInput(
            "only one input may come from standard input".into(),
        ));
    }
    let region_text = io::read_source(region_arg)?;
    let region = io::build_region(&io::parse_region_file(&region_text)?, eps)?;
    let lift_text = io::read_source(lift_arg)?;
    let lift = io::parse_lift_file(&lift_text)?;
    let tuples = io::build_tuples(&lift, &region)?;
    let report = verify(&region, &tuples)?;
    for c in &report.checks {
        writeln!(out, "{}: {}", c.name, if c.pass { "pass" } else { "fail" }).unwrap();
        if !c.pass {
            writeln!(out, "  {}", c.detail).unwrap();
        }
    }
    writeln!(out, "verify: {}", if report.pass { "pass" } else { "fail" }).unwrap();
    Ok(if report.pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_count(q: usize, m: usize, json: bool, out: &mut String) -> Result<i32> {
    let file = io::count_file(q, m)?;
    let ok = file.checks.iter().all(|c| c.passed());
    if json {
        out.push_str(&io::to_json(&file));
    } else {
        writeln!(out, "q = {q}, m = {m}").unwrap();
        writeln!(out, "|X^m| = {}", file.product_size).unwrap();
        writeln!(out, "pieces: {}", file.pieces.len()).unwrap();
        for p in &file.pieces {
            writeln!(out, "  {}: {}", p.piece, p.count).unwrap();
        }
        for c in &file.checks {
            writeln!(out, "{}: {} ({})", c.name, c.verdict, c.detail).unwrap();
        }
        writeln!(out, "count: {}", if ok { "ok" } else { "mismatch" }).unwrap();
    }
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}
