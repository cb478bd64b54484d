//! On-disk cache of bases and Bockstein matrices, one JSON file per entry.
//!
//! Files are named by the SHA-256 of the canonical key and written to a
//! temporary file first, then renamed into place, so concurrent writers
//! never expose a partial entry. An entry whose version tag or key differs
//! from the request is ignored and recomputed.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use motsteen_core::bockstein::beta_matrix;
use motsteen_core::{basis, Algebra, Ambient, Bidegree, BidegreeBasis, FpMatrix, Monomial};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const CACHE_VERSION: &str = "motsteen.cache/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Basis,
    BetaMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub p: u32,
    pub scheme: String,
    pub ambient: Ambient,
    pub bidegree: Bidegree,
    pub kind: Kind,
}

#[derive(Serialize, Deserialize)]
struct Entry<T> {
    version: String,
    key: CacheKey,
    payload: T,
}

#[derive(Debug, Clone, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Result<Self> {
        if let Some(d) = &dir {
            fs::create_dir_all(d).with_context(|| format!("creating cache directory {}", d.display()))?;
        }
        Ok(Cache { dir })
    }

    fn path(dir: &Path, key: &CacheKey) -> Result<PathBuf> {
        let canonical = serde_json::to_vec(key)?;
        let digest = Sha256::digest(&canonical);
        let name: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        Ok(dir.join(format!("{name}.json")))
    }

    fn load<T: DeserializeOwned>(path: &Path, key: &CacheKey) -> Option<T> {
        let bytes = fs::read(path).ok()?;
        let e: Entry<T> = serde_json::from_slice(&bytes).ok()?;
        (e.version == CACHE_VERSION && &e.key == key).then_some(e.payload)
    }

    fn store<T: Serialize>(dir: &Path, path: &Path, key: &CacheKey, payload: &T) -> Result<()> {
        let entry = Entry { version: CACHE_VERSION.to_string(), key: key.clone(), payload };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        serde_json::to_writer(&mut tmp, &entry)?;
        tmp.persist(path).with_context(|| format!("writing cache entry {}", path.display()))?;
        Ok(())
    }

    /// Returns the cached payload for `key`, computing and storing it on a miss.
    pub fn get_or_compute<T, F>(&self, key: &CacheKey, compute: F) -> Result<T>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        let Some(dir) = &self.dir else { return compute() };
        let path = Self::path(dir, key)?;
        if let Some(v) = Self::load(&path, key) {
            return Ok(v);
        }
        let v = compute()?;
        Self::store(dir, &path, key, &v)?;
        Ok(v)
    }

    fn key(alg: &Algebra, bidegree: Bidegree, kind: Kind) -> CacheKey {
        CacheKey { p: alg.p().get(), scheme: alg.scheme().name(), ambient: alg.ambient(), bidegree, kind }
    }

    pub fn basis(&self, alg: &Algebra, bd: Bidegree) -> Result<BidegreeBasis> {
        let names: Vec<String> = self.get_or_compute(&Self::key(alg, bd, Kind::Basis), || {
            Ok(basis(alg, bd).monomials.iter().map(Monomial::to_string).collect())
        })?;
        let monomials = names
            .iter()
            .map(|s| s.parse::<Monomial>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .context("corrupt cached basis")?;
        Ok(BidegreeBasis::new(bd, monomials))
    }

    /// The matrix of β from `bd` to `bd + BETA` in the cached bases.
    pub fn beta_matrix(&self, alg: &Algebra, bd: Bidegree) -> Result<FpMatrix> {
        self.get_or_compute(&Self::key(alg, bd, Kind::BetaMatrix), || {
            let src = self.basis(alg, bd)?;
            let tgt = self.basis(alg, bd + Bidegree::BETA)?;
            Ok(beta_matrix(alg, &src, &tgt)?)
        })
    }
}
