//! p-adic coefficient rings, their reduction to the mod-p coefficients and
//! the fiber-product model of the integral dual Steenrod algebra.

pub mod algclosed;
pub mod pullback;
pub mod relations;
pub mod z12;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bidegree::Bidegree;
use crate::element::{Algebra, Element};
use crate::error::{AlgebraError, Result};
use crate::monomial::CoeffMonomial;
use crate::prime::Prime;
use crate::scheme::{Scheme, SchemeId};

pub use pullback::{lift_generator, FiberElement, GeneratorTag, Lift, PullbackElement};

/// Default p-adic precision: free coefficients are stored mod p^16.
pub const DEFAULT_PRECISION: u32 = 16;

/// Torsion orders w_{2i} of the even-weight classes over ℤ[1/2].
///
/// The default is w_{2i} = 2^{v_2(i)+3}; entries can be overridden.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WTable {
    /// Maps an even index k to w_k; values must be powers of two ≥ 2.
    #[serde(default)]
    pub overrides: BTreeMap<u32, u64>,
}

impl WTable {
    pub fn w(&self, k: u32) -> u64 {
        if let Some(&w) = self.overrides.get(&k) {
            return w;
        }
        let i = k / 2;
        1 << (i.trailing_zeros() + 3)
    }

    pub fn validate(&self) -> Result<()> {
        for (&k, &w) in &self.overrides {
            if k == 0 || k % 2 == 1 || w < 2 || !w.is_power_of_two() {
                return Err(AlgebraError::Parse { pos: 0, msg: format!("invalid w-table entry {k} -> {w}") });
            }
        }
        Ok(())
    }
}

/// A monomial of a p-adic coefficient ring. Field meaning depends on the
/// scheme:
///
/// * alg-closed: τ^`tau`
/// * real (p = 2): ρ^`rho` (τ²)^`tau`
/// * real (odd p): θ^`theta`
/// * finite field: ε_`eps` (0 means no ε)
/// * ℤ[1/2]: ρ_1^{`rho`-1} ρ_`rho_top`, or ε_`eps`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct IntMonomial {
    pub tau: u32,
    pub theta: u32,
    pub rho: u32,
    pub rho_top: u32,
    pub eps: u32,
}

impl IntMonomial {
    pub const ONE: IntMonomial = IntMonomial { tau: 0, theta: 0, rho: 0, rho_top: 0, eps: 0 };

    pub fn tau_pow(n: u32) -> Self {
        IntMonomial { tau: n, ..Self::ONE }
    }

    pub fn theta_pow(n: u32) -> Self {
        IntMonomial { theta: n, ..Self::ONE }
    }

    /// ρ^i (τ²)^j over the reals.
    pub fn real(i: u32, j: u32) -> Self {
        IntMonomial { rho: i, tau: j, ..Self::ONE }
    }

    pub fn eps(k: u32) -> Self {
        IntMonomial { eps: k, ..Self::ONE }
    }

    /// ρ_k over ℤ[1/2] (k odd).
    pub fn rho_k(k: u32) -> Self {
        IntMonomial { rho: 1, rho_top: k, ..Self::ONE }
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }
}

impl fmt::Display for IntMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rho_top > 0 {
            match self.rho {
                0 | 1 => {}
                2 => parts.push("rho_1".into()),
                n => parts.push(format!("rho_1^{}", n - 1)),
            }
            parts.push(format!("rho_{}", self.rho_top));
        } else if self.rho == 1 {
            parts.push("rho".into());
        } else if self.rho > 1 {
            parts.push(format!("rho^{}", self.rho));
        }
        match self.tau {
            0 => {}
            1 => parts.push("tau".into()),
            n => parts.push(format!("tau^{n}")),
        }
        match self.theta {
            0 => {}
            1 => parts.push("theta".into()),
            n => parts.push(format!("theta^{n}")),
        }
        if self.eps > 0 {
            parts.push(format!("eps_{}", self.eps));
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// A finite sum of integral monomials with coefficients reduced modulo
/// each monomial's additive order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntElement {
    terms: BTreeMap<IntMonomial, u128>,
}

impl IntElement {
    pub fn zero() -> Self {
        IntElement::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IntMonomial, u128)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }
}

/// The p-adic coefficient ring of a scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntCoeffRing {
    scheme: Scheme,
    precision: u32,
    wtable: WTable,
}

impl IntCoeffRing {
    pub fn new(scheme: Scheme) -> Self {
        IntCoeffRing { scheme, precision: DEFAULT_PRECISION, wtable: WTable::default() }
    }

    pub fn with_precision(mut self, n: u32) -> Self {
        assert!(n >= 1, "precision must be positive");
        self.precision = n;
        self
    }

    pub fn with_wtable(mut self, w: WTable) -> Result<Self> {
        w.validate()?;
        self.wtable = w;
        Ok(self)
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    pub fn p(&self) -> Prime {
        self.scheme.p()
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn wtable(&self) -> &WTable {
        &self.wtable
    }

    fn free_order(&self) -> u128 {
        (self.p().get() as u128).pow(self.precision)
    }

    /// Order of ε_k over F_q: the p-part of q^k - 1, capped at p^N.
    fn finite_field_eps_order(&self, q: u64, k: u32) -> u128 {
        let modulus = self.free_order();
        let mut acc: u128 = 1;
        for _ in 0..k {
            acc = acc * q as u128 % modulus;
        }
        let r = (acc + modulus - 1) % modulus;
        if r == 0 {
            return modulus;
        }
        (self.p().get() as u128).pow(self.p().valuation(r))
    }

    /// Additive order of a monomial; 1 means the monomial is zero.
    pub fn order(&self, m: &IntMonomial) -> u128 {
        let free = self.free_order();
        match self.scheme.id() {
            SchemeId::AlgClosed => free,
            SchemeId::RealP2 => {
                if m.rho > 0 {
                    2
                } else {
                    free
                }
            }
            SchemeId::RealOddP => free,
            SchemeId::FiniteField { q } => {
                if m.eps > 0 {
                    self.finite_field_eps_order(q, m.eps)
                } else {
                    free
                }
            }
            SchemeId::ZHalf => {
                if m.rho > 0 {
                    2
                } else if m.eps > 0 && m.eps % 2 == 0 {
                    (self.wtable.w(m.eps) as u128).min(free)
                } else {
                    free
                }
            }
        }
    }

    /// Rejects monomials that use fields the scheme does not have.
    pub fn validate(&self, m: &IntMonomial) -> Result<()> {
        let bad = |what: &str| AlgebraError::TagMismatch { tag: format!("{what} in {m}"), scheme: self.scheme.name() };
        let ok = match self.scheme.id() {
            SchemeId::AlgClosed => m.theta == 0 && m.rho == 0 && m.rho_top == 0 && m.eps == 0,
            SchemeId::RealP2 => m.theta == 0 && m.rho_top == 0 && m.eps == 0,
            SchemeId::RealOddP => m.tau == 0 && m.rho == 0 && m.rho_top == 0 && m.eps == 0,
            SchemeId::FiniteField { .. } => m.tau == 0 && m.theta == 0 && m.rho == 0 && m.rho_top == 0,
            SchemeId::ZHalf => {
                m.tau == 0
                    && m.theta == 0
                    && (m.rho == 0) == (m.rho_top == 0)
                    && (m.rho_top == 0 || m.rho_top % 2 == 1)
                    && !(m.rho > 0 && m.eps > 0)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(bad("unsupported generator"))
        }
    }

    pub fn bidegree(&self, m: &IntMonomial) -> Bidegree {
        match self.scheme.id() {
            SchemeId::AlgClosed => Bidegree::new(0, -(m.tau as i64)),
            SchemeId::RealP2 => Bidegree::new(-(m.rho as i64), -(m.rho as i64) - 2 * m.tau as i64),
            SchemeId::RealOddP => Bidegree::new(0, -2 * m.theta as i64),
            SchemeId::FiniteField { .. } | SchemeId::ZHalf => {
                let mut b = Bidegree::ZERO;
                if m.rho > 0 {
                    b = Bidegree::new(-(m.rho as i64), -((m.rho - 1 + m.rho_top) as i64));
                }
                if m.eps > 0 {
                    b = b + Bidegree::new(-1, -(m.eps as i64));
                }
                b
            }
        }
    }

    /// Product of two monomials, `None` if it vanishes. Signs never
    /// arise: odd classes are either 2-torsion or multiply to zero.
    pub fn mul_monomials(&self, a: &IntMonomial, b: &IntMonomial) -> Option<IntMonomial> {
        let out = match self.scheme.id() {
            SchemeId::AlgClosed | SchemeId::RealP2 | SchemeId::RealOddP => IntMonomial {
                tau: a.tau + b.tau,
                theta: a.theta + b.theta,
                rho: a.rho + b.rho,
                ..IntMonomial::ONE
            },
            SchemeId::FiniteField { .. } => {
                if a.eps > 0 && b.eps > 0 {
                    return None;
                }
                IntMonomial::eps(a.eps + b.eps)
            }
            SchemeId::ZHalf => {
                if (a.eps > 0 && (b.eps > 0 || b.rho > 0)) || (b.eps > 0 && a.rho > 0) {
                    return None;
                }
                if a.rho > 0 && b.rho > 0 {
                    // ρ_a ρ_b = ρ_1 ρ_{a+b-1}
                    IntMonomial { rho: a.rho + b.rho, rho_top: a.rho_top + b.rho_top - 1, ..IntMonomial::ONE }
                } else {
                    IntMonomial {
                        rho: a.rho + b.rho,
                        rho_top: a.rho_top + b.rho_top,
                        eps: a.eps + b.eps,
                        ..IntMonomial::ONE
                    }
                }
            }
        };
        (self.order(&out) > 1).then_some(out)
    }

    pub fn monomial(&self, m: IntMonomial, c: i128) -> Result<IntElement> {
        self.validate(&m)?;
        let mut e = IntElement::zero();
        self.add_term(&mut e, m, c);
        Ok(e)
    }

    pub fn one(&self) -> IntElement {
        self.monomial(IntMonomial::ONE, 1).expect("unit exists")
    }

    pub fn add_term(&self, e: &mut IntElement, m: IntMonomial, c: i128) {
        let ord = self.order(&m);
        if ord <= 1 {
            return;
        }
        let c = c.rem_euclid(ord as i128) as u128;
        let v = (e.terms.get(&m).copied().unwrap_or(0) + c) % ord;
        if v == 0 {
            e.terms.remove(&m);
        } else {
            e.terms.insert(m, v);
        }
    }

    pub fn add(&self, x: &IntElement, y: &IntElement) -> IntElement {
        let mut out = x.clone();
        for (m, c) in y.terms() {
            self.add_term(&mut out, *m, c as i128);
        }
        out
    }

    pub fn scale(&self, x: &IntElement, n: i128) -> IntElement {
        let mut out = IntElement::zero();
        for (m, c) in x.terms() {
            let ord = self.order(m) as i128;
            self.add_term(&mut out, *m, (c as i128 % ord) * n.rem_euclid(ord) % ord);
        }
        out
    }

    pub fn neg(&self, x: &IntElement) -> IntElement {
        self.scale(x, -1)
    }

    pub fn mul(&self, x: &IntElement, y: &IntElement) -> IntElement {
        let mut out = IntElement::zero();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                if let Some(m) = self.mul_monomials(a, b) {
                    let ord = self.order(&m);
                    let c = (ca % ord) * (cb % ord) % ord;
                    self.add_term(&mut out, m, c as i128);
                }
            }
        }
        out
    }

    /// Image of a monomial in the mod-p coefficient ring, as a coefficient
    /// monomial (before the scalar is reduced).
    pub fn q_monomial(&self, m: &IntMonomial) -> Option<CoeffMonomial> {
        let c = CoeffMonomial::ONE;
        match self.scheme.id() {
            SchemeId::AlgClosed => Some(CoeffMonomial { tau: m.tau, ..c }),
            SchemeId::RealP2 => Some(CoeffMonomial { rho: m.rho, tau: 2 * m.tau, ..c }),
            SchemeId::RealOddP => Some(CoeffMonomial { theta: m.theta, ..c }),
            SchemeId::FiniteField { .. } => {
                if m.eps == 0 {
                    Some(c)
                } else if self.scheme.has(crate::monomial::CoeffGen::Eps) {
                    Some(CoeffMonomial { eps: 1, tau: m.eps - 1, ..c })
                } else {
                    None
                }
            }
            SchemeId::ZHalf => {
                if m.rho > 0 {
                    Some(CoeffMonomial { rho: m.rho, tau: m.rho_top - 1, ..c })
                } else if m.eps > 0 {
                    Some(CoeffMonomial { eps: 1, tau: m.eps - 1, ..c })
                } else {
                    Some(c)
                }
            }
        }
    }

    /// The reduction q to the mod-p coefficient ring, landing in `alg`.
    pub fn q_map(&self, alg: &Algebra, z: &IntElement) -> Result<Element> {
        if alg.scheme() != &self.scheme {
            return Err(AlgebraError::SchemeMismatch);
        }
        let p = self.p();
        let mut out = alg.zero();
        for (m, c) in z.terms() {
            if let Some(cm) = self.q_monomial(m) {
                let s = (c % p.get() as u128) as i64;
                out.add_scaled(&alg.coeff_monomial(cm)?, p.reduce(s));
            }
        }
        Ok(out)
    }

    /// All nonzero monomials with weight ≥ -`wmax`, sorted.
    pub fn monomials_to_weight(&self, wmax: u32) -> Vec<IntMonomial> {
        let mut out = BTreeSet::new();
        let w = wmax;
        match self.scheme.id() {
            SchemeId::AlgClosed => out.extend((0..=w).map(IntMonomial::tau_pow)),
            SchemeId::RealP2 => {
                for i in 0..=w {
                    for j in 0..=(w - i) / 2 {
                        out.insert(IntMonomial::real(i, j));
                    }
                }
            }
            SchemeId::RealOddP => out.extend((0..=w / 2).map(IntMonomial::theta_pow)),
            SchemeId::FiniteField { .. } => {
                out.insert(IntMonomial::ONE);
                out.extend((1..=w).map(IntMonomial::eps));
            }
            SchemeId::ZHalf => {
                out.insert(IntMonomial::ONE);
                out.extend((1..=w).map(IntMonomial::eps));
                for n in 1..=w {
                    for k in (1..=w).step_by(2) {
                        if n - 1 + k <= w {
                            out.insert(IntMonomial { rho: n, rho_top: k, ..IntMonomial::ONE });
                        }
                    }
                }
            }
        }
        out.into_iter().filter(|m| self.order(m) > 1).collect()
    }

    /// Name of a monomial; over the reals the τ-field counts powers of τ².
    pub fn name(&self, m: &IntMonomial) -> String {
        if self.scheme.id() != SchemeId::RealP2 || m.tau == 0 {
            return m.to_string();
        }
        let t = format!("tau^{}", 2 * m.tau);
        let rest = IntMonomial { tau: 0, ..*m };
        if rest.is_one() {
            t
        } else {
            format!("{rest}*{t}")
        }
    }

    pub fn format(&self, z: &IntElement) -> String {
        if z.is_zero() {
            return "0".into();
        }
        z.terms()
            .map(|(m, c)| if c == 1 { self.name(m) } else { format!("{c}*{}", self.name(m)) })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(id: SchemeId, p: u32) -> IntCoeffRing {
        IntCoeffRing::new(Scheme::new(id, Prime::new(p).unwrap()).unwrap())
    }

    #[test]
    fn zhalf_q_map() {
        let r = ring(SchemeId::ZHalf, 2);
        let alg = Algebra::mz(r.scheme().clone());
        let rho3 = r.monomial(IntMonomial::rho_k(3), 1).unwrap();
        assert_eq!(r.q_map(&alg, &rho3).unwrap().to_string(), "tau^2*rho");
        let eps2 = r.monomial(IntMonomial::eps(2), 1).unwrap();
        assert_eq!(r.q_map(&alg, &eps2).unwrap().to_string(), "tau*eps");
    }

    #[test]
    fn alg_closed_reduction() {
        let r = ring(SchemeId::AlgClosed, 3);
        let alg = Algebra::mz(r.scheme().clone());
        let z = r.monomial(IntMonomial::tau_pow(2), 3).unwrap();
        assert!(!z.is_zero());
        assert!(r.q_map(&alg, &z).unwrap().is_zero());
    }

    #[test]
    fn zhalf_relations() {
        let r = ring(SchemeId::ZHalf, 2);
        let rho = |k| r.monomial(IntMonomial::rho_k(k), 1).unwrap();
        let eps = |k| r.monomial(IntMonomial::eps(k), 1).unwrap();
        // ρ_3 ρ_5 = ρ_1 ρ_7
        assert_eq!(r.mul(&rho(3), &rho(5)), r.mul(&rho(1), &rho(7)));
        assert!(r.mul(&eps(1), &eps(3)).is_zero());
        assert!(r.mul(&rho(1), &eps(2)).is_zero());
        assert!(r.scale(&rho(3), 2).is_zero());
        assert!(r.scale(&eps(2), 8).is_zero());
        assert!(!r.scale(&eps(1), 1 << 10).is_zero());
        assert_eq!(r.bidegree(&IntMonomial::rho_k(3)), Bidegree::new(-1, -3));
    }

    #[test]
    fn finite_field_orders() {
        // q = 7, p = 3: 7 - 1 = 6, 7^2 - 1 = 48, 7^3 - 1 = 342 = 2·9·19
        let r = ring(SchemeId::FiniteField { q: 7 }, 3);
        assert_eq!(r.order(&IntMonomial::eps(1)), 3);
        assert_eq!(r.order(&IntMonomial::eps(2)), 3);
        assert_eq!(r.order(&IntMonomial::eps(3)), 9);
        // q = 2, p = 3: ε_1 vanishes, ε_2 has order 3
        let r = ring(SchemeId::FiniteField { q: 2 }, 3);
        assert_eq!(r.order(&IntMonomial::eps(1)), 1);
        assert_eq!(r.order(&IntMonomial::eps(2)), 3);
        let alg = Algebra::mz(r.scheme().clone());
        let e2 = r.monomial(IntMonomial::eps(2), 1).unwrap();
        assert!(r.q_map(&alg, &e2).unwrap().is_zero());
    }

    #[test]
    fn default_w_table() {
        let w = WTable::default();
        assert_eq!([w.w(2), w.w(4), w.w(6), w.w(8)], [8, 16, 8, 32]);
    }
}
