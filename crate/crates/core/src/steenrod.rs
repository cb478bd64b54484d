//! Milnor bases, the conjugation χ on the dual form, and the two maps from
//! the MZ presentation into the dual form.

use std::collections::HashMap;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::bidegree::Bidegree;
use crate::element::{Algebra, Ambient, Element};
use crate::error::{AlgebraError, Result};
use crate::monomial::{tau_bidegree, xi_bidegree, CoeffGen, CoeffMonomial, Monomial, SteenrodMonomial, TauSet};
use crate::prime::Prime;

/// The index (a, U) of η_{a,U} = ∏ ξ_j^{a_j} ∏_{j∈U} τ_j.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct BasisIndex {
    /// `a[j-1]` is the exponent of ξ_j; trailing zeros trimmed.
    pub a: Vec<u32>,
    pub u: TauSet,
}

impl BasisIndex {
    pub fn new(a: Vec<u32>, u: TauSet) -> Self {
        let s = SteenrodMonomial::new(a, u);
        BasisIndex { a: s.xi, u: s.tau }
    }

    pub fn from_monomial(s: &SteenrodMonomial) -> Self {
        BasisIndex { a: s.xi.clone(), u: s.tau }
    }

    pub fn monomial(&self) -> SteenrodMonomial {
        SteenrodMonomial::new(self.a.clone(), self.u)
    }

    pub fn a_exponent(&self, j: u32) -> u32 {
        if j == 0 {
            0
        } else {
            self.a.get(j as usize - 1).copied().unwrap_or(0)
        }
    }

    /// Largest j with a_j > 0, or 0.
    pub fn max_supp(&self) -> u32 {
        self.a.len() as u32
    }

    pub fn supp(&self) -> TauSet {
        TauSet::from_indices(self.a.iter().enumerate().filter(|e| *e.1 > 0).map(|(i, _)| i as u32 + 1))
    }

    /// U nonempty and max supp a ≤ max U.
    pub fn is_u_maximal(&self) -> bool {
        self.u.max().is_some_and(|m| self.max_supp() <= m)
    }

    pub fn bidegree(&self, p: Prime) -> Bidegree {
        self.monomial().bidegree(p)
    }

    /// `a + δ_j` (δ_0 is the unit and changes nothing).
    pub fn plus_delta(&self, j: u32) -> BasisIndex {
        let mut s = self.monomial();
        s.add_xi(j, 1);
        BasisIndex::from_monomial(&s)
    }

    /// `a - δ_j`, or `None` if a_j = 0.
    pub fn minus_delta(&self, j: u32) -> Option<BasisIndex> {
        if j == 0 || self.a_exponent(j) == 0 {
            return None;
        }
        let mut a = self.a.clone();
        a[j as usize - 1] -= 1;
        Some(BasisIndex::new(a, self.u))
    }

    pub fn with_u(&self, u: TauSet) -> BasisIndex {
        BasisIndex { a: self.a.clone(), u }
    }
}

impl std::fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(a=[")?;
        for (i, e) in self.a.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "], U={})", self.u)
    }
}

/// η_{a,U} as an element of `alg`.
pub fn eta(idx: &BasisIndex, alg: &Algebra) -> Result<Element> {
    if idx.u.min().is_some_and(|j| j < alg.min_tau_index()) {
        return Err(AlgebraError::TauZeroInMz);
    }
    let m = Monomial::new(CoeffMonomial::ONE, idx.monomial());
    alg.check_monomial(&m)?;
    Ok(alg.monomial(m))
}

#[derive(Clone, Copy)]
enum Gen {
    Xi(u32),
    Tau(u32),
}

/// Depth-first enumeration of Steenrod monomials. `fits` must be monotone:
/// once it rejects a partial product, every extension is rejected too.
fn enumerate(p: Prime, min_tau: u32, max_index: u32, fits: &dyn Fn(Bidegree, u32) -> bool) -> Vec<SteenrodMonomial> {
    let mut gens = Vec::new();
    for j in 1..=max_index {
        gens.push(Gen::Xi(j));
    }
    for j in min_tau..=max_index {
        gens.push(Gen::Tau(j));
    }
    let mut out = Vec::new();
    let mut cur = SteenrodMonomial::one();
    walk(p, &gens, 0, &mut cur, Bidegree::ZERO, fits, &mut out);
    out
}

fn walk(
    p: Prime,
    gens: &[Gen],
    i: usize,
    cur: &mut SteenrodMonomial,
    bd: Bidegree,
    fits: &dyn Fn(Bidegree, u32) -> bool,
    out: &mut Vec<SteenrodMonomial>,
) {
    if i == gens.len() {
        out.push(SteenrodMonomial::new(cur.xi.clone(), cur.tau));
        return;
    }
    match gens[i] {
        Gen::Xi(j) => {
            let step = xi_bidegree(p, j);
            let saved = cur.xi.clone();
            let mut b = bd;
            let mut e = 0;
            loop {
                walk(p, gens, i + 1, cur, b, fits, out);
                b = b + step;
                e += 1;
                if !fits(b, cur.tau.len()) {
                    break;
                }
                cur.xi = saved.clone();
                cur.add_xi(j, e);
            }
            cur.xi = saved;
        }
        Gen::Tau(j) => {
            walk(p, gens, i + 1, cur, bd, fits, out);
            let b = bd + tau_bidegree(p, j);
            if fits(b, cur.tau.len() + 1) {
                cur.tau.insert(j);
                walk(p, gens, i + 1, cur, b, fits, out);
                cur.tau.remove(j);
            }
        }
    }
}

fn max_index_for(p: Prime, bound: i64) -> u32 {
    let mut j = 0;
    while p.checked_pow(j + 1).is_some_and(|q| q - 1 <= bound) {
        j += 1;
    }
    j
}

/// All Steenrod monomials with topological degree ≤ `dmax`, sorted by
/// bidegree and then by monomial order.
pub fn steenrod_monomials_to_degree(p: Prime, ambient: Ambient, dmax: i64) -> Vec<SteenrodMonomial> {
    let min_tau = if ambient == Ambient::Dual { 0 } else { 1 };
    // every ξ_j and τ_j (j ≥ 1) has degree ≥ p^j - 1
    let mut out = enumerate(p, min_tau, max_index_for(p, dmax), &|b, _| b.d <= dmax);
    out.sort_by_key(|m| (m.bidegree(p), m.clone()));
    out
}

/// Steenrod monomials of exactly bidegree `bd`.
pub fn steenrod_monomials_in(p: Prime, ambient: Ambient, bd: Bidegree) -> Vec<SteenrodMonomial> {
    let min_tau = if ambient == Ambient::Dual { 0 } else { 1 };
    if bd.w < 0 || bd.excess() < 0 {
        return Vec::new();
    }
    let mut out = enumerate(p, min_tau, max_index_for(p, bd.w), &|b, n| b.w <= bd.w && (n as i64) <= bd.excess());
    out.retain(|m| m.bidegree(p) == bd);
    out.sort();
    out
}

/// The monomial basis of one bidegree, with a reverse index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BidegreeBasis {
    pub bidegree: Bidegree,
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl BidegreeBasis {
    pub fn new(bidegree: Bidegree, mut monomials: Vec<Monomial>) -> Self {
        monomials.sort();
        monomials.dedup();
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        BidegreeBasis { bidegree, monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of an element lying in this bidegree.
    pub fn coords(&self, x: &Element) -> Result<Vec<u32>> {
        let mut v = vec![0; self.len()];
        for (m, c) in x.terms() {
            let i = self.position(m).ok_or_else(|| {
                AlgebraError::Inhomogeneous(self.bidegree, m.bidegree(x.p()))
            })?;
            v[i] = c;
        }
        Ok(v)
    }

    pub fn element(&self, alg: &Algebra, v: &[u32]) -> Element {
        let mut e = alg.zero();
        for (m, &c) in self.monomials.iter().zip(v) {
            e.add_term(m.clone(), c);
        }
        e
    }
}

/// Complete monomial basis of `alg` in bidegree `bd`: coefficient
/// monomials times Steenrod monomials.
///
/// Every generator has excess d - 2w ≥ 0 and every Steenrod generator
/// has nonnegative weight, so the coefficient part has weight at least
/// `-excess(bd)` and the search is finite.
pub fn basis(alg: &Algebra, bd: Bidegree) -> BidegreeBasis {
    let p = alg.p();
    let e = bd.excess();
    if e < 0 {
        return BidegreeBasis::new(bd, Vec::new());
    }
    let wmax = bd.w + e;
    let min_tau = alg.min_tau_index();
    let steen = if wmax < 0 {
        Vec::new()
    } else {
        enumerate(p, min_tau, max_index_for(p, wmax), &|b, n| b.w <= wmax && (n as i64) <= e)
    };
    let mut out = Vec::new();
    for s in steen {
        let rest = bd - s.bidegree(p);
        for c in alg.scheme().coeff_monomials_in(rest) {
            out.push(Monomial::new(c, s.clone()));
        }
    }
    BidegreeBasis::new(bd, out)
}

/// Basis monomials with Steenrod part of degree ≤ `dmax` and coefficient
/// part of weight ≥ `-wmax`.
pub fn monomials_to_degree(alg: &Algebra, dmax: i64, wmax: i64) -> Vec<Monomial> {
    let steen = steenrod_monomials_to_degree(alg.p(), alg.ambient(), dmax);
    let coeffs = alg.scheme().coeff_monomials_to_weight(wmax);
    let mut out = Vec::with_capacity(steen.len() * coeffs.len());
    for c in &coeffs {
        for s in &steen {
            out.push(Monomial::new(*c, s.clone()));
        }
    }
    out
}

/// The conjugation χ on the dual form.
///
/// χ is a ring map with χτ_0 = -τ_0, χτ = τ + τ_0·βτ (τ + ρτ_0 over the
/// reals), fixing ρ, ε and θ, and determined on ξ_r, τ_r by
/// 0 = ξ_r + χξ_r + Σ_{0<i<r} ξ_i^{p^{r-i}} χξ_{r-i} and
/// 0 = τ_r + χτ_r + Σ_{0<i≤r} ξ_i^{p^{r-i}} χτ_{r-i}.
#[derive(Debug)]
pub struct Conjugation {
    alg: Algebra,
    xi: RwLock<Vec<Element>>,
    tau: RwLock<Vec<Element>>,
    overrides: HashMap<u32, Element>,
}

impl Conjugation {
    pub fn new(alg: &Algebra) -> Result<Self> {
        if alg.ambient() != Ambient::Dual {
            return Err(AlgebraError::WrongForm("dual"));
        }
        let one = alg.one();
        Ok(Conjugation {
            alg: alg.clone(),
            // index 0: χξ_0 = 1 ; χτ_0 = -τ_0
            xi: RwLock::new(vec![one]),
            tau: RwLock::new(vec![alg.tau(0)?.neg()]),
            overrides: HashMap::new(),
        })
    }

    /// Replaces the memoized χτ_r. Only meant for negative-control tests.
    pub fn override_tau(&mut self, r: u32, value: Element) {
        self.overrides.insert(r, value);
        let mut t = self.tau.write().unwrap();
        t.truncate(r as usize);
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn chi_xi(&self, r: u32) -> Result<Element> {
        if let Some(x) = self.xi.read().unwrap().get(r as usize) {
            return Ok(x.clone());
        }
        let p = self.alg.p();
        let mut acc = self.alg.xi(r)?;
        for i in 1..r {
            let pw = self.xi_power(i, p.pow(r - i) as u32)?;
            acc = acc.add(&self.alg.mul(&pw, &self.chi_xi(r - i)?)?);
        }
        let value = acc.neg();
        self.publish(&self.xi, r, value)
    }

    pub fn chi_tau(&self, r: u32) -> Result<Element> {
        if let Some(x) = self.overrides.get(&r) {
            return Ok(x.clone());
        }
        if let Some(x) = self.tau.read().unwrap().get(r as usize) {
            return Ok(x.clone());
        }
        let p = self.alg.p();
        let mut acc = self.alg.tau(r)?;
        for i in 1..=r {
            let pw = self.xi_power(i, p.pow(r - i) as u32)?;
            acc = acc.add(&self.alg.mul(&pw, &self.chi_tau(r - i)?)?);
        }
        let value = acc.neg();
        self.publish(&self.tau, r, value)
    }

    fn publish(&self, table: &RwLock<Vec<Element>>, r: u32, value: Element) -> Result<Element> {
        let mut t = table.write().unwrap();
        // lower entries are always present because the recursion fills them first
        if t.len() == r as usize {
            t.push(value.clone());
        }
        Ok(t.get(r as usize).cloned().unwrap_or(value))
    }

    fn xi_power(&self, j: u32, e: u32) -> Result<Element> {
        let mut s = SteenrodMonomial::one();
        s.add_xi(j, e);
        Ok(self.alg.monomial(Monomial::new(CoeffMonomial::ONE, s)))
    }

    /// χ of a coefficient generator.
    pub fn chi_coeff_gen(&self, g: CoeffGen) -> Result<Element> {
        let x = self.alg.coeff_gen(g)?;
        if g != CoeffGen::Tau {
            return Ok(x);
        }
        match self.alg.scheme().tau_beta() {
            None => Ok(x),
            Some(b) => {
                let t0b = self.alg.mul(&self.alg.tau(0)?, &self.alg.coeff_gen(b)?)?;
                Ok(x.add(&t0b))
            }
        }
    }

    pub fn chi_coeff(&self, c: &CoeffMonomial) -> Result<Element> {
        let mut acc = self.alg.one();
        for g in CoeffGen::ALL {
            let e = c.exponent(g);
            if e > 0 {
                let x = self.chi_coeff_gen(g)?;
                acc = self.alg.mul(&acc, &self.alg.pow(&x, e)?)?;
            }
        }
        Ok(acc)
    }

    /// χ of the Steenrod part ∏ ξ_j^{a_j} ∏ τ_j.
    pub fn chi_steenrod(&self, s: &SteenrodMonomial) -> Result<Element> {
        let mut acc = self.alg.one();
        for (i, &e) in s.xi.iter().enumerate() {
            if e > 0 {
                acc = self.alg.mul(&acc, &self.alg.pow(&self.chi_xi(i as u32 + 1)?, e)?)?;
            }
        }
        for j in s.tau.iter() {
            acc = self.alg.mul(&acc, &self.chi_tau(j)?)?;
        }
        Ok(acc)
    }

    pub fn chi_monomial(&self, m: &Monomial) -> Result<Element> {
        let c = self.chi_coeff(&m.coeff)?;
        self.alg.mul(&c, &self.chi_steenrod(&m.steen)?)
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        if x.ambient() != Ambient::Dual {
            return Err(AlgebraError::WrongForm("dual"));
        }
        if x.p() != self.alg.p() {
            return Err(AlgebraError::PrimeMismatch);
        }
        let mut acc = self.alg.zero();
        for (m, c) in x.terms() {
            acc.add_scaled(&self.chi_monomial(m)?, c);
        }
        Ok(acc)
    }

    /// χτ_{i+1} and χξ_{i+1} for i + 1 ≤ bound, labelled.
    pub fn mz_generators_in_a(&self, bound: u32) -> Result<Vec<(String, Element)>> {
        let mut out = Vec::new();
        for j in 1..=bound {
            out.push((format!("chi(xi{j})"), self.chi_xi(j)?));
            out.push((format!("chi(tau{j})"), self.chi_tau(j)?));
        }
        Ok(out)
    }
}

/// The two algebra maps from the MZ form into the dual form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MzEmbedding {
    /// Generators go to their conjugates, coefficients stay right-unit
    /// classes.
    Conjugate,
    /// Generators are fixed and coefficients go to their left-unit images.
    LeftUnit,
}

impl MzEmbedding {
    pub fn apply(self, chi: &Conjugation, x: &Element) -> Result<Element> {
        if x.ambient() != Ambient::Mz {
            return Err(AlgebraError::WrongForm("MZ"));
        }
        let alg = chi.algebra();
        let mut acc = alg.zero();
        for (m, c) in x.terms() {
            let image = match self {
                MzEmbedding::Conjugate => {
                    let coeff = alg.coeff_monomial(m.coeff)?;
                    alg.mul(&coeff, &chi.chi_steenrod(&m.steen)?)?
                }
                MzEmbedding::LeftUnit => {
                    let s = alg.monomial(Monomial::new(CoeffMonomial::ONE, m.steen.clone()));
                    alg.mul(&chi.chi_coeff(&m.coeff)?, &s)?
                }
            };
            acc.add_scaled(&image, c);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{Scheme, SchemeId};

    fn dual(id: SchemeId, p: u32) -> Algebra {
        Algebra::dual(Scheme::new(id, Prime::new(p).unwrap()).unwrap())
    }

    fn mz(id: SchemeId, p: u32) -> Algebra {
        Algebra::mz(Scheme::new(id, Prime::new(p).unwrap()).unwrap())
    }

    #[test]
    fn eta_examples() {
        let a = mz(SchemeId::AlgClosed, 2);
        assert_eq!(eta(&BasisIndex::default(), &a).unwrap(), a.one());
        assert_eq!(eta(&BasisIndex::new(vec![1], TauSet::EMPTY), &a).unwrap(), a.xi(1).unwrap());
        let idx = BasisIndex::new(vec![0, 1], TauSet::from_indices([1, 3]));
        assert_eq!(eta(&idx, &a).unwrap().to_string(), "xi2*tau1*tau3");
        let bad = BasisIndex::new(vec![], TauSet::singleton(0));
        assert_eq!(eta(&bad, &a), Err(AlgebraError::TauZeroInMz));
    }

    #[test]
    fn basis_examples() {
        let a = mz(SchemeId::AlgClosed, 2);
        let b = basis(&a, Bidegree::new(2, 1));
        assert_eq!(b.monomials.len(), 1);
        assert_eq!(b.monomials[0].to_string(), "1 | xi1^1 | tau{}");
        assert_eq!(basis(&a, Bidegree::ZERO).monomials, vec![Monomial::one()]);
        let r = mz(SchemeId::RealP2, 2);
        let b = basis(&r, Bidegree::new(1, 0));
        assert_eq!(b.monomials.len(), 1);
        assert_eq!(b.monomials[0].to_string(), "rho^1 | xi1^1 | tau{}");
    }

    #[test]
    fn basis_matches_degree_sweep() {
        for (id, p) in [(SchemeId::RealP2, 2), (SchemeId::AlgClosed, 3)] {
            let a = mz(id, p);
            let prime = Prime::new(p).unwrap();
            let all = steenrod_monomials_to_degree(prime, Ambient::Mz, 16);
            for s in &all {
                let bd = s.bidegree(prime);
                let b = basis(&a, bd);
                let m = Monomial::new(CoeffMonomial::ONE, s.clone());
                assert!(b.position(&m).is_some(), "{m} missing from basis at {bd}");
            }
        }
    }

    #[test]
    fn conjugation_examples() {
        let d = dual(SchemeId::RealP2, 2);
        let chi = Conjugation::new(&d).unwrap();
        assert_eq!(chi.chi_tau(0).unwrap(), d.tau(0).unwrap());
        assert_eq!(chi.chi_coeff_gen(CoeffGen::Tau).unwrap().to_string(), "rho*tau0 + tau");
        assert_eq!(chi.chi_xi(2).unwrap().to_string(), "xi2 + xi1^3");
        assert_eq!(chi.chi_xi(1).unwrap(), d.xi(1).unwrap());
        assert_eq!(chi.chi_tau(1).unwrap().to_string(), "tau1 + xi1*tau0");
        assert!(chi.mz_generators_in_a(0).unwrap().is_empty());
        let odd = dual(SchemeId::AlgClosed, 3);
        let chi3 = Conjugation::new(&odd).unwrap();
        assert_eq!(chi3.chi_tau(0).unwrap(), odd.tau(0).unwrap().neg());
    }

    #[test]
    fn conjugation_is_involutive_on_generators() {
        for (id, p) in [(SchemeId::RealP2, 2), (SchemeId::AlgClosed, 3), (SchemeId::FiniteField { q: 7 }, 3)] {
            let d = dual(id, p);
            let chi = Conjugation::new(&d).unwrap();
            for j in 0..3 {
                let t = d.tau(j).unwrap();
                assert_eq!(chi.apply(&chi.apply(&t).unwrap()).unwrap(), t);
            }
            let tau = d.coeff_gen(CoeffGen::Tau).unwrap();
            assert_eq!(chi.apply(&chi.apply(&tau).unwrap()).unwrap(), tau);
        }
    }

    #[test]
    fn conjugation_rejects_mz() {
        let a = mz(SchemeId::AlgClosed, 2);
        assert!(Conjugation::new(&a).is_err());
    }
}
