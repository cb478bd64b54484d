//! Command-line flags and their validation.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use motsteen_core::integral::DEFAULT_PRECISION;
use motsteen_core::verify::Suite;
use motsteen_core::{Ambient, IntCoeffRing, Prime, Scheme, SchemeId, WTable};

#[derive(Debug, Parser)]
#[command(name = "motsteen", version, about = "Bockstein homology and integral structure of the motivic Steenrod algebra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate dim, rank of beta, kernel, image and homology per bidegree.
    Dims {
        #[command(flatten)]
        common: Common,
        /// Smallest topological degree listed (default: -wmax).
        #[arg(long, allow_hyphen_values = true)]
        dmin: Option<i64>,
        /// Which form of the algebra to tabulate.
        #[arg(long, value_enum, default_value_t = AmbientArg::Mz)]
        ambient: AmbientArg,
    },
    /// Run a verification suite (default: all).
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(value_parser = parse_suite, default_value = "all")]
        suite: Suite,
        /// Exit nonzero on WARN as well as FAIL.
        #[arg(long)]
        strict: bool,
        /// Seed for the randomized checks.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, hide = true)]
        corrupt_chi_tau2: bool,
    },
    /// Print a presentation truncated at Milnor index `bound`.
    Present {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        bound: u32,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, default_value_t = 2)]
    pub prime: u32,
    /// alg-closed, real, real-odd, finite-field (with --q), finite-field-<q>, z-half.
    #[arg(long, default_value = "alg-closed")]
    pub scheme: String,
    /// Field size for the finite-field scheme.
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long, default_value_t = 20, allow_hyphen_values = true)]
    pub dmax: i64,
    #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
    pub wmax: i64,
    /// Cache directory; falls back to $MOTSTEEN_CACHE.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    pub format: Format,
    /// Integral coordinates are computed modulo p^precision.
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    pub precision: u32,
    /// JSON object mapping even indices k to w_k overrides.
    #[arg(long = "w-table")]
    pub w_table: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Pretty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AmbientArg {
    Mz,
    Dual,
}

impl From<AmbientArg> for Ambient {
    fn from(a: AmbientArg) -> Self {
        match a {
            AmbientArg::Mz => Ambient::Mz,
            AmbientArg::Dual => Ambient::Dual,
        }
    }
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: motsteen_core::AlgebraError| e.to_string())
}

/// Validated settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Settings {
    pub scheme: Scheme,
    pub dmax: i64,
    pub wmax: i64,
    pub precision: u32,
    pub wtable: WTable,
    pub cache: Option<PathBuf>,
    pub format: Format,
}

impl Settings {
    pub fn ring(&self) -> Result<IntCoeffRing> {
        Ok(IntCoeffRing::new(self.scheme.clone()).with_precision(self.precision).with_wtable(self.wtable.clone())?)
    }
}

impl Common {
    pub fn settings(&self) -> Result<Settings> {
        let prime = Prime::new(self.prime)?;
        let id = match (self.scheme.as_str(), self.q) {
            ("finite-field", Some(q)) => SchemeId::FiniteField { q },
            ("finite-field", None) => bail!("scheme finite-field needs --q"),
            (s, q) => {
                let id: SchemeId = s.parse()?;
                if let (SchemeId::FiniteField { q: a }, Some(b)) = (id, q) {
                    if a != b {
                        bail!("--q {b} disagrees with scheme {s}");
                    }
                }
                id
            }
        };
        let scheme = Scheme::new(id, prime)?;
        if self.wmax < 0 {
            bail!("--wmax must be nonnegative, got {}", self.wmax);
        }
        if self.dmax < 0 {
            bail!("--dmax must be nonnegative, got {}", self.dmax);
        }
        if self.precision == 0 || u128::from(self.prime).checked_pow(2 * self.precision).is_none() {
            bail!("--precision must be positive and p^(2 * precision) must fit in 128 bits");
        }
        let wtable = match &self.w_table {
            Some(path) => read_wtable(path)?,
            None => WTable::default(),
        };
        wtable.validate()?;
        let cache = self.cache.clone().or_else(|| std::env::var_os("MOTSTEEN_CACHE").filter(|v| !v.is_empty()).map(PathBuf::from));
        Ok(Settings { scheme, dmax: self.dmax, wmax: self.wmax, precision: self.precision, wtable, cache, format: self.format })
    }
}

fn read_wtable(path: &Path) -> Result<WTable> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let overrides = serde_json::from_str(&text).with_context(|| format!("parsing {} as a map from k to w_k", path.display()))?;
    Ok(WTable { overrides })
}
