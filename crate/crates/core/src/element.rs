//! Elements of the mod-p dual Steenrod algebras and their arithmetic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bidegree::Bidegree;
use crate::error::{AlgebraError, Result};
use crate::monomial::{CoeffGen, CoeffMonomial, Monomial, SteenrodMonomial, TauSet, MAX_INDEX};
use crate::prime::Prime;
use crate::scheme::Scheme;

/// Which algebra an element lives in.
///
/// `Dual` is M_*F_p(MF_p) with right-unit coefficients and τ_0; `Mz` is
/// M_*F_p(MZ) with left-unit coefficients, τ-indices starting at 1 and
/// the scheme's coefficient Bockstein.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ambient {
    Dual,
    Mz,
}

/// A finite F_p-linear combination of normalized monomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    p: Prime,
    ambient: Ambient,
    terms: BTreeMap<Monomial, u32>,
}

impl Element {
    pub fn zero(p: Prime, ambient: Ambient) -> Self {
        Element { p, ambient, terms: BTreeMap::new() }
    }

    pub fn from_monomial(p: Prime, ambient: Ambient, m: Monomial, c: u32) -> Self {
        let mut e = Element::zero(p, ambient);
        e.add_term(m, c);
        e
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u32)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn coefficient(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: u32) {
        let c = c % self.p.get();
        if c == 0 {
            return;
        }
        let p = self.p;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = p.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Element) {
        assert_eq!(self.p, other.p, "prime mismatch");
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Element, c: u32) {
        self.check_compatible(other);
        let c = c % self.p.get();
        if c == 0 {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), self.p.mul(*v, c));
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(other, 1);
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(other, self.p.get() - 1);
        out
    }

    pub fn scale(&self, c: u32) -> Element {
        let mut out = Element::zero(self.p, self.ambient);
        out.add_scaled(self, c);
        out
    }

    pub fn neg(&self) -> Element {
        self.scale(self.p.get() - 1)
    }

    /// The common bidegree of all terms; `None` for zero.
    pub fn bidegree(&self) -> Result<Option<Bidegree>> {
        let mut it = self.terms.keys().map(|m| m.bidegree(self.p));
        let Some(first) = it.next() else { return Ok(None) };
        for b in it {
            if b != first {
                return Err(AlgebraError::Inhomogeneous(first, b));
            }
        }
        Ok(Some(first))
    }

    pub fn homogeneous_components(&self) -> BTreeMap<Bidegree, Element> {
        let mut out: BTreeMap<Bidegree, Element> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.bidegree(self.p))
                .or_insert_with(|| Element::zero(self.p, self.ambient))
                .add_term(m.clone(), *c);
        }
        out
    }

    /// Kills every ξ_j and τ_j, keeping only the pure coefficient terms.
    pub fn augmentation(&self) -> Element {
        let mut out = Element::zero(self.p, self.ambient);
        for (m, c) in &self.terms {
            if m.steen.is_one() {
                out.add_term(m.clone(), *c);
            }
        }
        out
    }
}

/// An unnormalized product term: scalar, raw coefficient exponents,
/// ξ-exponents and an ordered word of τ-indices (repeats allowed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTerm {
    pub scalar: i64,
    pub coeff: CoeffMonomial,
    pub xi: Vec<u32>,
    pub taus: Vec<u32>,
}

impl RawTerm {
    pub fn taus(word: &[u32]) -> Self {
        RawTerm { scalar: 1, coeff: CoeffMonomial::ONE, xi: vec![], taus: word.to_vec() }
    }

    pub fn coeff(coeff: CoeffMonomial) -> Self {
        RawTerm { scalar: 1, coeff, xi: vec![], taus: vec![] }
    }
}

/// A handle on one of the two algebras over a fixed scheme.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Algebra {
    scheme: Scheme,
    ambient: Ambient,
}

/// One term of the τ_j² rewrite: coefficient, optional ξ index, optional τ index.
type SquareTerm = (CoeffMonomial, Option<u32>, Option<u32>);

impl Algebra {
    pub fn new(scheme: Scheme, ambient: Ambient) -> Self {
        Algebra { scheme, ambient }
    }

    pub fn mz(scheme: Scheme) -> Self {
        Algebra::new(scheme, Ambient::Mz)
    }

    pub fn dual(scheme: Scheme) -> Self {
        Algebra::new(scheme, Ambient::Dual)
    }

    pub fn p(&self) -> Prime {
        self.scheme.p()
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn min_tau_index(&self) -> u32 {
        match self.ambient {
            Ambient::Dual => 0,
            Ambient::Mz => 1,
        }
    }

    pub fn zero(&self) -> Element {
        Element::zero(self.p(), self.ambient)
    }

    pub fn one(&self) -> Element {
        self.monomial(Monomial::one())
    }

    pub fn monomial(&self, m: Monomial) -> Element {
        Element::from_monomial(self.p(), self.ambient, m, 1)
    }

    pub fn scalar(&self, c: i64) -> Element {
        Element::from_monomial(self.p(), self.ambient, Monomial::one(), self.p().reduce(c))
    }

    pub fn coeff_gen(&self, g: CoeffGen) -> Result<Element> {
        self.coeff_monomial(CoeffMonomial::gen(g))
    }

    pub fn coeff_monomial(&self, c: CoeffMonomial) -> Result<Element> {
        Ok(match self.scheme.normalize_coeff(c)? {
            Some(c) => self.monomial(Monomial::new(c, SteenrodMonomial::one())),
            None => self.zero(),
        })
    }

    pub fn xi(&self, j: u32) -> Result<Element> {
        self.check_index(j)?;
        let mut s = SteenrodMonomial::one();
        s.add_xi(j, 1);
        Ok(self.monomial(Monomial::new(CoeffMonomial::ONE, s)))
    }

    pub fn tau(&self, j: u32) -> Result<Element> {
        self.check_tau_index(j)?;
        Ok(self.monomial(Monomial::new(
            CoeffMonomial::ONE,
            SteenrodMonomial::new(vec![], TauSet::singleton(j)),
        )))
    }

    fn check_index(&self, j: u32) -> Result<()> {
        match self.p().checked_pow(j) {
            Some(v) if j <= MAX_INDEX && v < (1 << 40) => Ok(()),
            _ => Err(AlgebraError::IndexOutOfRange(j)),
        }
    }

    fn check_tau_index(&self, j: u32) -> Result<()> {
        if j < self.min_tau_index() {
            return Err(AlgebraError::TauZeroInMz);
        }
        self.check_index(j)
    }

    /// Rejects monomials that are not normalized members of this algebra.
    pub fn check_monomial(&self, m: &Monomial) -> Result<()> {
        if self.scheme.normalize_coeff(m.coeff)?.is_none() {
            return Err(AlgebraError::Parse { pos: 0, msg: "coefficient monomial is zero".into() });
        }
        if let Some(j) = m.steen.tau.min() {
            self.check_tau_index(j)?;
        }
        if let Some(j) = m.steen.tau.max() {
            self.check_index(j)?;
        }
        self.check_index(m.steen.max_xi_index())?;
        if m.steen.xi.last() == Some(&0) {
            return Err(AlgebraError::Parse { pos: 0, msg: "untrimmed xi exponents".into() });
        }
        Ok(())
    }

    fn check_element(&self, x: &Element) -> Result<()> {
        if x.p != self.p() {
            return Err(AlgebraError::PrimeMismatch);
        }
        if x.ambient != self.ambient {
            return Err(AlgebraError::AmbientMismatch);
        }
        Ok(())
    }

    /// Normalizes raw product terms: coefficient relations, τ-reordering
    /// with Koszul signs, τ_j² rewriting and collection mod p.
    pub fn normalize(&self, terms: &[RawTerm]) -> Result<Element> {
        let p = self.p();
        let mut acc = self.zero();
        for t in terms {
            for (i, _) in t.xi.iter().enumerate() {
                self.check_index(i as u32 + 1)?;
            }
            for &j in &t.taus {
                self.check_tau_index(j)?;
            }
            let scalar = p.reduce(t.scalar);
            let Some(coeff) = self.scheme.normalize_coeff(t.coeff)? else { continue };
            if scalar == 0 {
                continue;
            }
            let start = Monomial::new(coeff, SteenrodMonomial::new(t.xi.clone(), TauSet::EMPTY));
            let mut current = Element::from_monomial(p, self.ambient, start, scalar);
            for &j in &t.taus {
                let mut next = self.zero();
                for (m, c) in current.terms() {
                    self.mul_tau_right(c, m.clone(), j, &mut next);
                }
                current = next;
            }
            acc.add_scaled(&current, 1);
        }
        Ok(acc)
    }

    /// Graded-commutative product.
    pub fn mul(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check_element(x)?;
        self.check_element(y)?;
        let mut acc = self.zero();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                self.mul_monomials_into(a, b, self.p().mul(ca, cb), &mut acc);
            }
        }
        Ok(acc)
    }

    pub fn mul_all<'a, I: IntoIterator<Item = &'a Element>>(&self, factors: I) -> Result<Element> {
        let mut acc = self.one();
        for f in factors {
            acc = self.mul(&acc, f)?;
        }
        Ok(acc)
    }

    pub fn pow(&self, x: &Element, n: u32) -> Result<Element> {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    pub(crate) fn mul_monomials_into(&self, a: &Monomial, b: &Monomial, scalar: u32, acc: &mut Element) {
        let p = self.p();
        if scalar == 0 {
            return;
        }
        // b's coefficient passes a's τ's; ξ's are even.
        let mut negative = b.coeff.bidegree().is_odd() && a.steen.tau.len() % 2 == 1;
        let Some((neg_c, coeff)) = self.scheme.mul_coeff(&a.coeff, &b.coeff) else { return };
        negative ^= neg_c;
        let xi = a.steen.xi_mul(&b.steen);
        if a.steen.tau.is_disjoint(b.steen.tau) {
            negative ^= a.steen.tau.shuffle_sign(b.steen.tau);
            let m = Monomial::new(coeff, SteenrodMonomial::new(xi, a.steen.tau.union(b.steen.tau)));
            acc.add_term(m, if negative { p.neg(scalar) } else { scalar });
            return;
        }
        if p.is_odd() {
            return;
        }
        let start = Monomial::new(coeff, SteenrodMonomial::new(xi, a.steen.tau));
        let mut current = Element::from_monomial(p, self.ambient, start, scalar);
        for j in b.steen.tau.iter() {
            let mut next = self.zero();
            for (m, c) in current.terms() {
                self.mul_tau_right(c, m.clone(), j, &mut next);
            }
            current = next;
        }
        acc.add_scaled(&current, 1);
    }

    /// `acc += scalar * m * τ_j`.
    fn mul_tau_right(&self, scalar: u32, mut m: Monomial, j: u32, acc: &mut Element) {
        let p = self.p();
        if !m.steen.tau.contains(j) {
            let negative = m.steen.tau.count_above(j) % 2 == 1;
            m.steen.tau.insert(j);
            acc.add_term(m, if negative { p.neg(scalar) } else { scalar });
            return;
        }
        if p.is_odd() {
            return;
        }
        // p = 2: signs are invisible, and τ_j² is rewritten.
        m.steen.tau.remove(j);
        for (c, xi, tau) in self.tau_square(j) {
            let Some((_, coeff)) = self.scheme.mul_coeff(&m.coeff, &c) else { continue };
            let mut next = Monomial::new(coeff, m.steen.clone());
            if let Some(i) = xi {
                next.steen.add_xi(i, 1);
            }
            match tau {
                Some(k) => self.mul_tau_right(scalar, next, k, acc),
                None => acc.add_term(next, scalar),
            }
        }
    }

    /// The p = 2 rewrite of τ_j².
    ///
    /// Dual form: ξ_{j+1}(τ + τ_0 ρ) + τ_{j+1} ρ. MZ form:
    /// ξ_{j+1} τ + τ_{j+1} ρ. Here ρ is the scheme's ρ-element, which may
    /// be zero or ε.
    fn tau_square(&self, j: u32) -> Vec<SquareTerm> {
        let mut out: Vec<SquareTerm> = Vec::with_capacity(3);
        if self.scheme.has(CoeffGen::Tau) {
            out.push((CoeffMonomial::gen(CoeffGen::Tau), Some(j + 1), None));
        }
        if let Some(r) = self.scheme.rho_element() {
            if self.ambient == Ambient::Dual {
                out.push((CoeffMonomial::gen(r), Some(j + 1), Some(0)));
            }
            out.push((CoeffMonomial::gen(r), None, Some(j + 1)));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::SchemeId;

    fn alg(id: SchemeId, p: u32, ambient: Ambient) -> Algebra {
        Algebra::new(Scheme::new(id, Prime::new(p).unwrap()).unwrap(), ambient)
    }

    fn mono(xi: &[u32], tau: &[u32]) -> Monomial {
        Monomial::new(CoeffMonomial::ONE, SteenrodMonomial::new(xi.to_vec(), TauSet::from_indices(tau.iter().copied())))
    }

    #[test]
    fn tau_square_in_mz_alg_closed() {
        let a = alg(SchemeId::AlgClosed, 2, Ambient::Mz);
        let x = a.normalize(&[RawTerm::taus(&[1, 1])]).unwrap();
        let expect = Monomial::new(CoeffMonomial::tau_pow(1), mono(&[0, 1], &[]).steen);
        assert_eq!(x, a.monomial(expect));
    }

    #[test]
    fn odd_prime_tau_square_vanishes() {
        let a = alg(SchemeId::AlgClosed, 3, Ambient::Mz);
        assert!(a.normalize(&[RawTerm::taus(&[1, 1])]).unwrap().is_zero());
    }

    #[test]
    fn zhalf_eps_rho_is_zero() {
        let a = alg(SchemeId::ZHalf, 2, Ambient::Mz);
        let raw = RawTerm::coeff(CoeffMonomial { rho: 1, eps: 1, ..CoeffMonomial::ONE });
        assert!(a.normalize(&[raw]).unwrap().is_zero());
    }

    #[test]
    fn absent_coefficient_rejected() {
        let a = alg(SchemeId::AlgClosed, 2, Ambient::Mz);
        let raw = RawTerm::coeff(CoeffMonomial::gen(CoeffGen::Rho));
        assert!(matches!(a.normalize(&[raw]), Err(AlgebraError::AbsentGenerator { .. })));
    }

    #[test]
    fn koszul_sign_on_tau_swap() {
        let a = alg(SchemeId::AlgClosed, 3, Ambient::Mz);
        let t1 = a.tau(1).unwrap();
        let t2 = a.tau(2).unwrap();
        let prod = a.mul(&t2, &t1).unwrap();
        assert_eq!(prod, a.monomial(mono(&[], &[1, 2])).neg());
    }

    #[test]
    fn square_of_sum_char_two() {
        // (ξ_1 + τ_1)^2 = ξ_1^2 + ξ_2 τ
        let a = alg(SchemeId::AlgClosed, 2, Ambient::Mz);
        let x = a.xi(1).unwrap().add(&a.tau(1).unwrap());
        let sq = a.mul(&x, &x).unwrap();
        let mut expect = a.monomial(mono(&[2], &[]));
        expect.add_term(Monomial::new(CoeffMonomial::tau_pow(1), mono(&[0, 1], &[]).steen), 1);
        assert_eq!(sq, expect);
    }

    #[test]
    fn tau_zero_forbidden_in_mz() {
        let a = alg(SchemeId::AlgClosed, 2, Ambient::Mz);
        assert_eq!(a.tau(0), Err(AlgebraError::TauZeroInMz));
        let d = alg(SchemeId::AlgClosed, 2, Ambient::Dual);
        assert!(d.tau(0).is_ok());
    }

    #[test]
    fn mixing_ambients_rejected() {
        let a = alg(SchemeId::AlgClosed, 2, Ambient::Mz);
        let d = alg(SchemeId::AlgClosed, 2, Ambient::Dual);
        let x = a.xi(1).unwrap();
        let y = d.xi(1).unwrap();
        assert_eq!(a.mul(&x, &y), Err(AlgebraError::AmbientMismatch));
    }

    #[test]
    fn dual_tau_zero_square() {
        // τ_0² = ξ_1(τ + τ_0 ρ) + τ_1 ρ over the reals
        let d = alg(SchemeId::RealP2, 2, Ambient::Dual);
        let sq = d.normalize(&[RawTerm::taus(&[0, 0])]).unwrap();
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.bidegree().unwrap(), Some(Bidegree::new(2, 0)));
    }
}
