mod cache;
mod config;
mod output;

use std::io::Write;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use motsteen_core::bockstein::{bidegree_range, coeff_beta_homology};
use motsteen_core::presentation::{present, PresentBounds};
use motsteen_core::verify::{self, VerifyConfig};
use motsteen_core::{Algebra, Bidegree, Status};
use rayon::prelude::*;

use cache::Cache;
use config::{Cli, Command, Settings};
use output::{DimsRow, DimsTable, VerifyOutput, DIMS_SCHEMA, VERIFY_SCHEMA};

fn dims_row(cache: &Cache, alg: &Algebra, bd: Bidegree) -> Result<DimsRow> {
    let dim = cache.basis(alg, bd)?.len();
    let rank = cache.beta_matrix(alg, bd)?.rank();
    let im = cache.beta_matrix(alg, bd - Bidegree::BETA)?.rank();
    let ker = dim - rank;
    Ok(DimsRow { bidegree: bd, dim, rank, ker, im, homology: ker - im, expected: coeff_beta_homology(alg, bd)? })
}

fn dims(s: &Settings, dmin: Option<i64>, ambient: config::AmbientArg) -> Result<String> {
    let dmin = dmin.unwrap_or(-s.wmax);
    let alg = Algebra::new(s.scheme.clone(), ambient.into());
    let cache = Cache::new(s.cache.clone())?;
    let range: Vec<Bidegree> = bidegree_range(s.dmax, s.wmax).into_iter().filter(|b| b.d >= dmin).collect();
    let rows = range.par_iter().map(|&bd| dims_row(&cache, &alg, bd)).collect::<Result<Vec<_>>>()?;
    let table = DimsTable {
        schema: DIMS_SCHEMA,
        scheme: s.scheme.name(),
        prime: s.scheme.p().get(),
        ambient: alg.ambient(),
        dmin,
        dmax: s.dmax,
        wmax: s.wmax,
        rows,
    };
    Ok(output::dims(&table, s.format))
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    let (text, code) = match cli.command {
        Command::Dims { common, dmin, ambient } => (dims(&common.settings()?, dmin, ambient)?, ExitCode::SUCCESS),
        Command::Verify { common, suite, strict, seed, corrupt_chi_tau2 } => {
            let s = common.settings()?;
            let mut cfg = VerifyConfig::new(s.scheme.clone(), s.dmax, s.wmax);
            cfg.precision = s.precision;
            cfg.wtable = s.wtable.clone();
            cfg.corrupt_chi_tau2 = corrupt_chi_tau2;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let reports = verify::run(suite, &cfg)?;
            let status = reports.iter().map(|r| r.status()).max().unwrap_or(Status::Pass);
            let out = VerifyOutput {
                schema: VERIFY_SCHEMA,
                scheme: s.scheme.name(),
                prime: s.scheme.p().get(),
                dmax: s.dmax,
                wmax: s.wmax,
                seed: cfg.seed,
                status,
                reports,
            };
            let failing = out.reports.iter().flat_map(|r| &r.checks).find(|c| match status {
                Status::Fail => c.status == Status::Fail,
                _ => c.status == Status::Warn,
            });
            let bad = status == Status::Fail || (strict && status == Status::Warn);
            if bad {
                if let Some(c) = failing {
                    eprintln!("{} {}: {}", c.status, c.name, c.detail);
                    if let Some(x) = &c.counterexample {
                        eprintln!("counterexample: {x}");
                    }
                }
            }
            (output::verify(&out, s.format), if bad { ExitCode::FAILURE } else { ExitCode::SUCCESS })
        }
        Command::Present { common, bound } => {
            let s = common.settings()?;
            let wmax = u32::try_from(s.wmax).context("--wmax out of range")?;
            let p = present(&s.scheme, s.ring()?, PresentBounds { bound, wmax, dmax: s.dmax })?;
            (output::present(&p, s.format), ExitCode::SUCCESS)
        }
    };
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(text.as_bytes())?;
    stdout.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
