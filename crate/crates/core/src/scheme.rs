//! Base schemes and their mod-p coefficient rings.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bidegree::Bidegree;
use crate::error::{AlgebraError, Result};
use crate::monomial::{CoeffGen, CoeffMonomial};
use crate::prime::{prime_power, Prime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SchemeId {
    /// Algebraically closed field: F_p[τ], trivial Bockstein.
    AlgClosed,
    /// The reals at p = 2: F_2[ρ, τ], βτ = ρ.
    RealP2,
    /// The reals at odd p: F_p[θ].
    RealOddP,
    /// A finite field F_q with p ∤ q.
    FiniteField { q: u64 },
    /// Z[1/2] at p = 2: F_2[τ, ρ, ε]/(ερ, ε²), βτ = ρ.
    ZHalf,
}

impl SchemeId {
    pub fn slug(&self) -> String {
        match self {
            SchemeId::AlgClosed => "alg-closed".into(),
            SchemeId::RealP2 => "real".into(),
            SchemeId::RealOddP => "real-odd".into(),
            SchemeId::FiniteField { q } => format!("finite-field-{q}"),
            SchemeId::ZHalf => "z-half".into(),
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.slug())
    }
}

/// Parses `alg-closed`, `real`, `real-odd`, `z-half`, `finite-field-<q>`
/// (or `finite-field:<q>`).
impl FromStr for SchemeId {
    type Err = AlgebraError;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || AlgebraError::Parse { pos: 0, msg: format!("unknown scheme `{s}`") };
        Ok(match s {
            "alg-closed" | "algclosed" => SchemeId::AlgClosed,
            "real" | "real-p2" => SchemeId::RealP2,
            "real-odd" => SchemeId::RealOddP,
            "z-half" | "zhalf" => SchemeId::ZHalf,
            _ => {
                let q = s
                    .strip_prefix("finite-field-")
                    .or_else(|| s.strip_prefix("finite-field:"))
                    .ok_or_else(bad)?;
                SchemeId::FiniteField { q: q.parse().map_err(|_| bad())? }
            }
        })
    }
}

/// A base scheme at a fixed prime: which coefficient generators exist,
/// the Bockstein of τ on the left-unit side, and the class playing the
/// role of ρ in the p = 2 relation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scheme {
    id: SchemeId,
    p: Prime,
    gens: Vec<CoeffGen>,
    tau_beta: Option<CoeffGen>,
    rho_element: Option<CoeffGen>,
}

impl Scheme {
    pub fn new(id: SchemeId, p: Prime) -> Result<Self> {
        let incompatible = || AlgebraError::IncompatiblePrime { scheme: id.slug(), p: p.get() };
        let (gens, tau_beta, rho_element) = match id {
            SchemeId::AlgClosed => (vec![CoeffGen::Tau], None, None),
            SchemeId::RealP2 => {
                if p.is_odd() {
                    return Err(incompatible());
                }
                (vec![CoeffGen::Tau, CoeffGen::Rho], Some(CoeffGen::Rho), Some(CoeffGen::Rho))
            }
            SchemeId::RealOddP => {
                if !p.is_odd() {
                    return Err(incompatible());
                }
                (vec![CoeffGen::Theta], None, None)
            }
            SchemeId::ZHalf => {
                if p.is_odd() {
                    return Err(incompatible());
                }
                (
                    vec![CoeffGen::Tau, CoeffGen::Rho, CoeffGen::Eps],
                    Some(CoeffGen::Rho),
                    Some(CoeffGen::Rho),
                )
            }
            SchemeId::FiniteField { q } => {
                if prime_power(q).is_none() {
                    return Err(AlgebraError::InvalidFieldOrder(q));
                }
                if q % p.get() as u64 == 0 {
                    return Err(incompatible());
                }
                let pp = p.get() as u64;
                let has_eps = (q - 1) % pp == 0;
                let beta_nonzero = has_eps && (q - 1) % (pp * pp) != 0;
                let mut gens = vec![CoeffGen::Tau];
                if has_eps {
                    gens.push(CoeffGen::Eps);
                }
                let tau_beta = beta_nonzero.then_some(CoeffGen::Eps);
                // -1 is a square in F_q iff 4 | q - 1.
                let rho = (!p.is_odd() && beta_nonzero).then_some(CoeffGen::Eps);
                (gens, tau_beta, rho)
            }
        };
        Ok(Scheme { id, p, gens, tau_beta, rho_element })
    }

    pub fn alg_closed(p: Prime) -> Self {
        Scheme::new(SchemeId::AlgClosed, p).expect("algebraically closed field exists at every prime")
    }

    pub fn id(&self) -> SchemeId {
        self.id
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn gens(&self) -> &[CoeffGen] {
        &self.gens
    }

    pub fn has(&self, g: CoeffGen) -> bool {
        self.gens.contains(&g)
    }

    /// βτ in the left-unit coefficients, if nonzero.
    pub fn tau_beta(&self) -> Option<CoeffGen> {
        self.tau_beta
    }

    /// The coefficient class multiplying τ_{i+1} in the p = 2 relation.
    pub fn rho_element(&self) -> Option<CoeffGen> {
        self.rho_element
    }

    pub fn name(&self) -> String {
        self.id.slug()
    }

    /// Applies the coefficient relations. Errors on generators the scheme
    /// lacks; `None` when a relation kills the monomial.
    pub fn normalize_coeff(&self, m: CoeffMonomial) -> Result<Option<CoeffMonomial>> {
        for g in CoeffGen::ALL {
            if m.exponent(g) > 0 && !self.has(g) {
                return Err(AlgebraError::AbsentGenerator { gen: g.name(), scheme: self.name() });
            }
        }
        Ok(self.survives(&m).then_some(m))
    }

    fn survives(&self, m: &CoeffMonomial) -> bool {
        if m.eps >= 2 {
            return false;
        }
        if self.id == SchemeId::ZHalf && m.eps > 0 && m.rho > 0 {
            return false;
        }
        if self.p.is_odd() && m.rho >= 2 {
            return false;
        }
        true
    }

    /// Product of two normalized coefficient monomials: `(negative, m)`,
    /// or `None` if the product vanishes.
    pub fn mul_coeff(&self, a: &CoeffMonomial, b: &CoeffMonomial) -> Option<(bool, CoeffMonomial)> {
        let (neg, m) = a.raw_mul(b);
        self.survives(&m).then_some((neg, m))
    }

    /// Bockstein on a left-unit coefficient monomial:
    /// β(τ^a ρ^b ε^c θ^e) = a τ^{a-1} (βτ) ρ^b ε^c θ^e.
    pub fn coeff_beta(&self, m: &CoeffMonomial) -> Option<(u32, CoeffMonomial)> {
        let g = self.tau_beta?;
        if m.tau == 0 {
            return None;
        }
        let scalar = self.p.reduce(m.tau as i64);
        if scalar == 0 {
            return None;
        }
        let head = CoeffMonomial::tau_pow(m.tau - 1).with(g, 1);
        let rest = CoeffMonomial { tau: 0, ..*m };
        let (neg, out) = self.mul_coeff(&head, &rest)?;
        Some((if neg { self.p.neg(scalar) } else { scalar }, out))
    }

    /// All normalized coefficient monomials with `d - 2w <= max_excess`.
    pub fn coeff_monomials_with_excess(&self, max_excess: i64) -> Vec<CoeffMonomial> {
        let mut out = Vec::new();
        if max_excess < 0 {
            return out;
        }
        let c = max_excess as u32;
        let bound = |g: CoeffGen| -> u32 {
            if !self.has(g) {
                return 0;
            }
            let e = g.bidegree().excess() as u32;
            c / e
        };
        for tau in 0..=bound(CoeffGen::Tau) {
            for rho in 0..=bound(CoeffGen::Rho) {
                for eps in 0..=bound(CoeffGen::Eps).min(1) {
                    for theta in 0..=bound(CoeffGen::Theta) {
                        let m = CoeffMonomial { tau, rho, eps, theta };
                        if m.bidegree().excess() <= max_excess && self.survives(&m) {
                            out.push(m);
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Normalized coefficient monomials of exactly bidegree `bd`.
    pub fn coeff_monomials_in(&self, bd: Bidegree) -> Vec<CoeffMonomial> {
        self.coeff_monomials_with_excess(bd.excess())
            .into_iter()
            .filter(|m| m.bidegree() == bd)
            .collect()
    }

    /// Coefficient monomials of weight at least `-max_weight`.
    pub fn coeff_monomials_to_weight(&self, max_weight: i64) -> Vec<CoeffMonomial> {
        // weight <= -excess/2 ... each generator has |w| >= excess / 2
        self.coeff_monomials_with_excess(2 * max_weight)
            .into_iter()
            .filter(|m| -m.bidegree().w <= max_weight)
            .collect()
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (p = {})", self.id, self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn scheme_prime_compatibility() {
        assert!(Scheme::new(SchemeId::RealP2, p(3)).is_err());
        assert!(Scheme::new(SchemeId::RealOddP, p(2)).is_err());
        assert!(Scheme::new(SchemeId::ZHalf, p(5)).is_err());
        assert!(Scheme::new(SchemeId::FiniteField { q: 9 }, p(3)).is_err());
        assert!(Scheme::new(SchemeId::FiniteField { q: 6 }, p(5)).is_err());
    }

    #[test]
    fn finite_field_bockstein_cases() {
        let f7 = Scheme::new(SchemeId::FiniteField { q: 7 }, p(3)).unwrap();
        assert_eq!(f7.tau_beta(), Some(CoeffGen::Eps));
        let f19 = Scheme::new(SchemeId::FiniteField { q: 19 }, p(3)).unwrap();
        assert!(f19.has(CoeffGen::Eps));
        assert_eq!(f19.tau_beta(), None);
        let f5 = Scheme::new(SchemeId::FiniteField { q: 5 }, p(3)).unwrap();
        assert!(!f5.has(CoeffGen::Eps));
        let f3 = Scheme::new(SchemeId::FiniteField { q: 3 }, p(2)).unwrap();
        assert_eq!(f3.rho_element(), Some(CoeffGen::Eps));
        let f5_2 = Scheme::new(SchemeId::FiniteField { q: 5 }, p(2)).unwrap();
        assert_eq!(f5_2.rho_element(), None);
    }

    #[test]
    fn zhalf_eps_rho_vanishes() {
        let s = Scheme::new(SchemeId::ZHalf, p(2)).unwrap();
        let er = CoeffMonomial { rho: 1, eps: 1, ..CoeffMonomial::ONE };
        assert_eq!(s.normalize_coeff(er).unwrap(), None);
        let e2 = CoeffMonomial { eps: 2, ..CoeffMonomial::ONE };
        assert_eq!(s.normalize_coeff(e2).unwrap(), None);
    }

    #[test]
    fn absent_generator_rejected() {
        let s = Scheme::alg_closed(p(2));
        assert!(s.normalize_coeff(CoeffMonomial::gen(CoeffGen::Rho)).is_err());
    }

    #[test]
    fn coefficient_beta() {
        let s = Scheme::new(SchemeId::RealP2, p(2)).unwrap();
        let (c, m) = s.coeff_beta(&CoeffMonomial::tau_pow(3)).unwrap();
        assert_eq!(c, 1);
        assert_eq!(m, CoeffMonomial { tau: 2, rho: 1, ..CoeffMonomial::ONE });
        assert!(s.coeff_beta(&CoeffMonomial::tau_pow(2)).is_none());
        let f7 = Scheme::new(SchemeId::FiniteField { q: 7 }, p(3)).unwrap();
        assert!(f7.coeff_beta(&CoeffMonomial::tau_pow(3)).is_none());
        let (c, _) = f7.coeff_beta(&CoeffMonomial::tau_pow(2)).unwrap();
        assert_eq!(c, 2);
    }

    #[test]
    fn scheme_id_parses() {
        assert_eq!("finite-field-7".parse::<SchemeId>().unwrap(), SchemeId::FiniteField { q: 7 });
        assert_eq!("z-half".parse::<SchemeId>().unwrap(), SchemeId::ZHalf);
        assert!("moon".parse::<SchemeId>().is_err());
    }
}
