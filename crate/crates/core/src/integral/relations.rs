//! Product and linear relations among the Bockstein images y_{a,U}.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bockstein::y;
use crate::element::{Algebra, Ambient, Element};
use crate::error::{AlgebraError, Result};
use crate::monomial::{CoeffMonomial, TauSet};
use crate::prime::Prime;
use crate::steenrod::BasisIndex;

/// Which reading of the index shift in the product formula to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaConvention {
    /// a + b + δ_k, with squared τ_j contributing δ_{j+1}.
    Corrected,
    /// a + b + δ_{k-1}, with squared τ_j contributing δ_j (fails in general).
    Shifted,
}

fn add_indices(a: &[u32], b: &[u32]) -> Vec<u32> {
    let n = a.len().max(b.len());
    (0..n).map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)).collect()
}

/// `idx` shifted by δ_j for every j in `s`; δ_0 is the unit.
fn plus_deltas(idx: &BasisIndex, s: TauSet) -> BasisIndex {
    s.iter().fold(idx.clone(), |acc, j| acc.plus_delta(j))
}

fn check_algebra(alg: &Algebra) -> Result<()> {
    if alg.ambient() != Ambient::Mz {
        return Err(AlgebraError::WrongForm("product relations live in the MZ form"));
    }
    if alg.scheme().tau_beta().is_some() || alg.scheme().rho_element().is_some() {
        return Err(AlgebraError::WrongForm("product relations need a scheme with trivial coefficient Bockstein"));
    }
    Ok(())
}

/// One term ± τ^n y_{c,S} of the product formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaTerm {
    pub negative: bool,
    pub tau: u32,
    pub index: BasisIndex,
}

/// The right-hand side of the product formula for y_{a,U} y_{b,T} as a
/// list of signed terms; terms with empty index set (which vanish) are
/// kept.
pub fn product_terms(p: Prime, a: &BasisIndex, b: &BasisIndex, conv: DeltaConvention) -> Vec<FormulaTerm> {
    let (u, t) = (a.u, b.u);
    let sum = BasisIndex::new(add_indices(&a.a, &b.a), TauSet::EMPTY);
    let shift = |k: u32| match conv {
        DeltaConvention::Corrected => k,
        DeltaConvention::Shifted => k - 1,
    };
    let mut out = Vec::new();
    if !p.is_odd() {
        for k in u.iter() {
            let rest = u.without(k);
            let both = rest.intersection(t);
            let squares = match conv {
                DeltaConvention::Corrected => TauSet::from_indices(both.iter().map(|j| j + 1)),
                DeltaConvention::Shifted => both,
            };
            let index = plus_deltas(&sum, squares).plus_delta(shift(k)).with_u(rest.symmetric_difference(t));
            out.push(FormulaTerm { negative: false, tau: both.len(), index });
        }
        return out;
    }
    let both = u.intersection(t);
    let ks: Vec<u32> = match both.len() {
        0 => t.iter().collect(),
        1 => both.iter().collect(),
        _ => Vec::new(),
    };
    for k in ks {
        let negative = if both.is_empty() {
            u.with(k).shuffle_sign(t.without(k))
        } else {
            u.without(k).shuffle_sign(t.without(k))
        };
        let index = sum.plus_delta(shift(k)).with_u(u.union(t.without(k)));
        out.push(FormulaTerm { negative, tau: 0, index });
    }
    out
}

/// The right-hand side of the product formula as an element.
pub fn product_formula(alg: &Algebra, a: &BasisIndex, b: &BasisIndex, conv: DeltaConvention) -> Result<Element> {
    check_algebra(alg)?;
    let p = alg.p();
    let mut out = alg.zero();
    for term in product_terms(p, a, b, conv) {
        let c = alg.coeff_monomial(CoeffMonomial::tau_pow(term.tau))?;
        out.add_scaled(&alg.mul(&c, &y(&term.index, alg)?)?, p.sign(term.negative));
    }
    Ok(out)
}

/// Outcome of one product-relation case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductCase {
    pub left: BasisIndex,
    pub right: BasisIndex,
    pub oracle: String,
    pub corrected: bool,
    pub shifted: bool,
}

/// Compares y_{a,U} y_{b,T}, computed by multiplying the two Bockstein
/// images, against the formula under both conventions.
pub fn verify_product_relation(alg: &Algebra, a: &BasisIndex, b: &BasisIndex) -> Result<ProductCase> {
    let oracle = alg.mul(&y(a, alg)?, &y(b, alg)?)?;
    let corrected = product_formula(alg, a, b, DeltaConvention::Corrected)? == oracle;
    let shifted = product_formula(alg, a, b, DeltaConvention::Shifted)? == oracle;
    Ok(ProductCase { left: a.clone(), right: b.clone(), oracle: oracle.to_string(), corrected, shifted })
}

/// Summary of a product-relation sweep.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductSweep {
    pub cases: u64,
    pub distinct: u64,
    pub corrected_failures: u64,
    pub shifted_failures: u64,
    pub first_corrected_failure: Option<ProductCase>,
    pub first_shifted_failure: Option<ProductCase>,
}

impl ProductSweep {
    /// The convention matching every case, if exactly one does.
    pub fn uniform_convention(&self) -> Option<DeltaConvention> {
        match (self.corrected_failures == 0, self.shifted_failures == 0) {
            (true, false) => Some(DeltaConvention::Corrected),
            (false, true) => Some(DeltaConvention::Shifted),
            _ => None,
        }
    }
}

/// All index vectors with support in {1..=n} and entries ≤ `emax`.
pub fn exponent_vectors(n: u32, emax: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (0..=emax).map(move |e| [v.clone(), vec![e]].concat())).collect();
    }
    out
}

/// Every pair (a,U), (b,T) with supports and U, T inside {1..=n} and
/// exponents ≤ `emax`. Both sides depend on a and b only through a + b,
/// so cases are evaluated once per (a + b, U, T).
pub fn product_sweep(alg: &Algebra, n: u32, emax: u32) -> Result<ProductSweep> {
    let vecs = exponent_vectors(n, emax);
    let sets: Vec<TauSet> = (1u64..1 << n).map(|m| TauSet(m << 1)).collect();
    let mut memo: HashMap<(Vec<u32>, TauSet, TauSet), (bool, bool)> = HashMap::new();
    let mut sweep = ProductSweep::default();
    for a in &vecs {
        for b in &vecs {
            let key_a = add_indices(a, b);
            for &u in &sets {
                for &t in &sets {
                    let key = (key_a.clone(), u, t);
                    let (ia, ib) = (BasisIndex::new(a.clone(), u), BasisIndex::new(b.clone(), t));
                    let outcome = match memo.get(&key) {
                        Some(o) => *o,
                        None => {
                            let case = verify_product_relation(alg, &ia, &ib)?;
                            let o = (case.corrected, case.shifted);
                            if !case.corrected && sweep.first_corrected_failure.is_none() {
                                sweep.first_corrected_failure = Some(case.clone());
                            }
                            if !case.shifted && sweep.first_shifted_failure.is_none() {
                                sweep.first_shifted_failure = Some(case);
                            }
                            memo.insert(key, o);
                            o
                        }
                    };
                    sweep.cases += 1;
                    sweep.corrected_failures += u64::from(!outcome.0);
                    sweep.shifted_failures += u64::from(!outcome.1);
                }
            }
        }
    }
    sweep.distinct = memo.len() as u64;
    Ok(sweep)
}

/// Result of the linear relations for one (a, j).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearCase {
    pub a: Vec<u32>,
    pub j: u32,
    /// Number of (j+1)-subsets W of supp a checked.
    pub families: u64,
    /// Every signed family Σ_{k∈W} ± y_{a-δ_{W-k}, W-k} vanished.
    pub holds: bool,
    /// The unsigned sum over all j-subsets, as displayed.
    pub literal_sum: String,
    pub literal_vanishes: bool,
}

/// For each (j+1)-subset W of supp a, the sum
/// Σ_{k∈W} (-1)^{#{w∈W : w<k}} y_{a-δ_{W-k}, W-k}, which is β²η_{a-δ_W, W}.
pub fn linear_relation(alg: &Algebra, a: &[u32], w: TauSet) -> Result<Element> {
    let p = alg.p();
    let base = BasisIndex::new(a.to_vec(), TauSet::EMPTY);
    let mut out = alg.zero();
    for k in w.iter() {
        let s = w.without(k);
        let idx = s.iter().try_fold(base.clone(), |acc, i| acc.minus_delta(i)).ok_or(AlgebraError::IndexOutOfRange(k))?;
        out.add_scaled(&y(&idx.with_u(s), alg)?, p.sign(w.count_below(k) % 2 == 1));
    }
    Ok(out)
}

pub fn verify_linear_relation(alg: &Algebra, a: &[u32], j: u32) -> Result<LinearCase> {
    if alg.ambient() != Ambient::Mz {
        return Err(AlgebraError::WrongForm("linear relations live in the MZ form"));
    }
    let base = BasisIndex::new(a.to_vec(), TauSet::EMPTY);
    let supp = base.supp();
    let mut holds = true;
    let mut families = 0;
    for w in supp.subsets_of_size(j + 1) {
        families += 1;
        holds &= linear_relation(alg, a, w)?.is_zero();
    }
    let mut literal = alg.zero();
    for u in supp.subsets_of_size(j) {
        let idx = u.iter().try_fold(base.clone(), |acc, i| acc.minus_delta(i)).expect("U inside supp a");
        literal = literal.add(&y(&idx.with_u(u), alg)?);
    }
    Ok(LinearCase {
        a: base.a.clone(),
        j,
        families,
        holds,
        literal_sum: literal.to_string(),
        literal_vanishes: literal.is_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::Scheme;

    fn alg(p: u32) -> Algebra {
        Algebra::mz(Scheme::alg_closed(Prime::new(p).unwrap()))
    }

    fn idx(a: &[u32], u: &[u32]) -> BasisIndex {
        BasisIndex::new(a.to_vec(), TauSet::from_indices(u.iter().copied()))
    }

    #[test]
    fn y1_times_y2() {
        let c = verify_product_relation(&alg(2), &idx(&[], &[1]), &idx(&[], &[2])).unwrap();
        assert_eq!(c.oracle, "xi1*xi2");
        assert!(c.corrected);
        assert!(!c.shifted);
    }

    #[test]
    fn odd_prime_cases() {
        let a = alg(3);
        let c = verify_product_relation(&a, &idx(&[], &[1, 2]), &idx(&[], &[1, 2])).unwrap();
        assert_eq!(c.oracle, "0");
        assert!(c.corrected);
        let c = verify_product_relation(&a, &idx(&[], &[1]), &idx(&[], &[1])).unwrap();
        assert_eq!(c.oracle, "xi1^2");
        assert!(c.corrected && !c.shifted);
    }

    #[test]
    fn small_sweeps_pick_the_corrected_convention() {
        for p in [2, 3] {
            let s = product_sweep(&alg(p), 2, 1).unwrap();
            assert_eq!(s.uniform_convention(), Some(DeltaConvention::Corrected), "{s:?}");
        }
    }

    #[test]
    fn linear_relations() {
        for p in [2, 3] {
            let a = alg(p);
            let c = verify_linear_relation(&a, &[1, 1], 1).unwrap();
            assert!(c.holds);
            assert_eq!(c.families, 1);
            let c = verify_linear_relation(&a, &[1], 2).unwrap();
            assert_eq!(c.families, 0);
            assert!(c.holds && c.literal_vanishes);
        }
        // the literal sum fails already for a = δ_1, j = 1
        let c = verify_linear_relation(&alg(2), &[1], 1).unwrap();
        assert!(c.holds);
        assert!(!c.literal_vanishes);
    }
}
