//! Batch runner over the type-A catalog. Exit code 0 when no report fails,
//! 1 when some report is FAIL, 2 on usage errors, 3 on I/O errors.

mod emit;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use rayon::prelude::*;
use weylverify::catalog;
use weylverify::engine::{self, Status, VerificationReport, VerifyOptions};

use crate::emit::Format;

/// Inclusive integer range written `LO..HI` or `LO:HI`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct ParamRange {
    lo: i64,
    hi: i64,
}

fn parse_range(s: &str) -> Result<ParamRange, String> {
    let (lo, hi) =
        s.split_once("..").or_else(|| s.split_once(':')).ok_or_else(|| format!("expected LO..HI, got {s:?}"))?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: i64 = hi.trim().trim_start_matches('=').parse().map_err(|e| format!("bad upper bound: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok(ParamRange { lo, hi })
}

#[derive(Debug, Parser)]
#[command(name = "weylverify", version, about = "Verify tangent weight sets for the type-A catalog")]
struct Cli {
    /// Families to run, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u8).range(1..=8), default_value = "1,2,3,4,5,6,7,8")]
    families: Vec<u8>,

    /// Upper bound on m and n.
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..), default_value_t = 6)]
    max_size: u64,

    /// Parameters for the intermediate tori, e.g. -3..3.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "-3..3")]
    torus_range: ParamRange,

    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, env = "WEYLVERIFY_JOBS", value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,

    /// Coefficient bound for the brute-force saturation cross-check.
    #[arg(long = "box", value_parser = clap::value_parser!(i64).range(1..), default_value_t = 4)]
    bound: i64,

    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(cli: &Cli) -> anyhow::Result<Vec<VerificationReport>> {
    let mut families = cli.families.clone();
    families.sort_unstable();
    families.dedup();
    let params: Vec<i64> = (cli.torus_range.lo..=cli.torus_range.hi).collect();
    let instances = catalog::enumerate_instances(&families, cli.max_size as usize, &params)?;
    let opts = VerifyOptions { brute_force_box: cli.bound, ..VerifyOptions::default() };

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        pool = pool.num_threads(j as usize);
    }
    let pool = pool.build().context("building worker pool")?;
    let mut reports = pool.install(|| {
        instances
            .par_iter()
            .map(|inst| engine::verify_instance_with(inst, &opts).with_context(|| format!("verifying {inst}")))
            .collect::<anyhow::Result<Vec<_>>>()
    })?;
    reports.sort_by(|a, b| a.instance.cmp(&b.instance));
    Ok(reports)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let reports = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let text = match emit::emit(&reports, cli.format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(3);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(3);
            }
        }
        None => print!("{text}"),
    }
    if reports.iter().any(|r| r.status == Status::Fail) {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_syntax() {
        assert_eq!(parse_range("-3..3"), Ok(ParamRange { lo: -3, hi: 3 }));
        assert_eq!(parse_range("-2:2"), Ok(ParamRange { lo: -2, hi: 2 }));
        assert_eq!(parse_range("0..=1"), Ok(ParamRange { lo: 0, hi: 1 }));
        assert!(parse_range("3..-3").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn flag_validation() {
        assert!(Cli::try_parse_from(["weylverify", "--max-size", "1"]).is_err());
        assert!(Cli::try_parse_from(["weylverify", "--box", "0"]).is_err());
        assert!(Cli::try_parse_from(["weylverify", "--families", "9"]).is_err());
        let cli = Cli::try_parse_from(["weylverify", "--families", "5", "--torus-range", "-2..2", "--max-size", "5"])
            .unwrap();
        let reports = run(&cli).unwrap();
        let params = reports.iter().filter(|r| matches!(r.instance.torus, catalog::TorusChoice::Param(_))).count();
        assert_eq!(params, 5);
        assert!(reports.iter().all(|r| r.status == Status::Pass));
    }
}
