//! The fiber product of the integral coefficient ring with the mod-p MZ
//! algebra, and lifts of the named generators into it.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bockstein::{beta, y};
use crate::element::{Algebra, Ambient, Element};
use crate::error::{AlgebraError, Result};
use crate::monomial::{CoeffGen, CoeffMonomial, Monomial, SteenrodMonomial, TauSet};
use crate::scheme::SchemeId;
use crate::steenrod::{eta, BasisIndex};

use super::{IntCoeffRing, IntElement, IntMonomial};

/// A pair (z, k) with q(z) = aug(k). No condition on βk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberElement {
    pub z: IntElement,
    pub k: Element,
}

/// A pair (z, k) with q(z) = aug(k) and βk = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackElement {
    z: IntElement,
    k: Element,
}

impl PullbackElement {
    pub fn z(&self) -> &IntElement {
        &self.z
    }

    pub fn k(&self) -> &Element {
        &self.k
    }

    pub fn into_fiber(self) -> FiberElement {
        FiberElement { z: self.z, k: self.k }
    }
}

/// Ring operations on fiber-product pairs for one scheme.
#[derive(Debug, Clone)]
pub struct PullbackModel {
    ring: IntCoeffRing,
    alg: Algebra,
}

impl PullbackModel {
    pub fn new(ring: IntCoeffRing) -> Self {
        let alg = Algebra::mz(ring.scheme().clone());
        PullbackModel { ring, alg }
    }

    pub fn ring(&self) -> &IntCoeffRing {
        &self.ring
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    fn check_k(&self, k: &Element) -> Result<()> {
        if k.p() != self.alg.p() {
            return Err(AlgebraError::PrimeMismatch);
        }
        if k.ambient() != Ambient::Mz {
            return Err(AlgebraError::AmbientMismatch);
        }
        Ok(())
    }

    fn check_compatible(&self, z: &IntElement, k: &Element) -> Result<()> {
        self.check_k(k)?;
        let qz = self.ring.q_map(&self.alg, z)?;
        let aug = k.augmentation();
        if qz != aug {
            return Err(AlgebraError::Incompatible { qz: qz.to_string(), aug: aug.to_string() });
        }
        Ok(())
    }

    pub fn fiber(&self, z: IntElement, k: Element) -> Result<FiberElement> {
        self.check_compatible(&z, &k)?;
        Ok(FiberElement { z, k })
    }

    pub fn element(&self, z: IntElement, k: Element) -> Result<PullbackElement> {
        self.check_compatible(&z, &k)?;
        for part in k.homogeneous_components().values() {
            if !beta(&self.alg, part)?.is_zero() {
                return Err(AlgebraError::NotACycle(k.to_string()));
            }
        }
        Ok(PullbackElement { z, k })
    }

    /// Promotes a fiber element whose k-component happens to be a cycle.
    pub fn to_pullback(&self, x: FiberElement) -> Result<PullbackElement> {
        self.element(x.z, x.k)
    }

    pub fn one(&self) -> PullbackElement {
        PullbackElement { z: self.ring.one(), k: self.alg.one() }
    }

    pub fn zero(&self) -> PullbackElement {
        PullbackElement { z: IntElement::zero(), k: self.alg.zero() }
    }

    /// (z, q(z)) for an integral coefficient.
    pub fn coefficient(&self, z: IntElement) -> Result<PullbackElement> {
        let k = self.ring.q_map(&self.alg, &z)?;
        self.element(z, k)
    }

    pub fn fiber_mul(&self, x: &FiberElement, y: &FiberElement) -> Result<FiberElement> {
        let z = self.ring.mul(&x.z, &y.z);
        let k = self.alg.mul(&x.k, &y.k)?;
        self.fiber(z, k)
    }

    pub fn fiber_add(&self, x: &FiberElement, y: &FiberElement) -> Result<FiberElement> {
        self.check_k(&x.k)?;
        self.check_k(&y.k)?;
        Ok(FiberElement { z: self.ring.add(&x.z, &y.z), k: x.k.add(&y.k) })
    }

    pub fn fiber_scale(&self, x: &FiberElement, n: i128) -> FiberElement {
        let p = self.alg.p();
        let c = p.reduce(n.rem_euclid(p.get() as i128) as i64);
        FiberElement { z: self.ring.scale(&x.z, n), k: x.k.scale(c) }
    }

    /// Componentwise product; the result is re-checked.
    pub fn mul(&self, x: &PullbackElement, y: &PullbackElement) -> Result<PullbackElement> {
        let z = self.ring.mul(&x.z, &y.z);
        let k = self.alg.mul(&x.k, &y.k)?;
        self.element(z, k)
    }

    pub fn add(&self, x: &PullbackElement, y: &PullbackElement) -> PullbackElement {
        PullbackElement { z: self.ring.add(&x.z, &y.z), k: x.k.add(&y.k) }
    }

    pub fn scale(&self, x: &PullbackElement, n: i128) -> PullbackElement {
        let p = self.alg.p();
        let c = p.reduce(n.rem_euclid(p.get() as i128) as i64);
        PullbackElement { z: self.ring.scale(&x.z, n), k: x.k.scale(c) }
    }

    /// An integral element z with q(z) = `target`, built from monomials
    /// of weight ≥ -`wmax`, if one exists term by term.
    pub fn shadow(&self, target: &Element) -> Option<IntElement> {
        let mut z = IntElement::zero();
        for (m, c) in target.terms() {
            if !m.steen.is_one() {
                return None;
            }
            let wmax = (-m.coeff.bidegree().w).max(0) as u32;
            let source = self
                .ring
                .monomials_to_weight(wmax)
                .into_iter()
                .find(|im| self.ring.q_monomial(im) == Some(m.coeff))?;
            self.ring.add_term(&mut z, source, c as i128);
        }
        Some(z)
    }

    pub fn format(&self, x: &FiberElement) -> String {
        format!("({}, {})", self.ring.format(&x.z), x.k)
    }
}

/// Named generators of the integral dual Steenrod algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "kebab-case")]
pub enum GeneratorTag {
    /// y_{a,U}, every scheme.
    Y { index: BasisIndex },
    /// ρη_{a,U} + τy_{a,U}, schemes with βτ = ρ.
    RhoEtaTauY { index: BasisIndex },
    /// τ^i y_{a,U} + i β(τ) τ^{i-1} η_{a,U}, schemes with βτ ≠ 0.
    TauPowY { i: u32, index: BasisIndex },
    /// An integral coefficient monomial paired with its reduction.
    Coeff { monomial: IntMonomial },
    /// τ_{j,i} over ℤ[1/2]: the fiber coordinate over τ^i τ_j.
    Tau { j: u32, i: u32 },
    /// ξ_{j,i} over ℤ[1/2]: the fiber coordinate over τ^i ξ_j.
    Xi { j: u32, i: u32 },
    /// ρ_k over ℤ[1/2], k odd.
    Rho { k: u32 },
    /// ε_k over ℤ[1/2] or a finite field.
    Eps { k: u32 },
}

impl fmt::Display for GeneratorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorTag::Y { index } => write!(f, "y{index}"),
            GeneratorTag::RhoEtaTauY { index } => write!(f, "rho*eta{index} + tau*y{index}"),
            GeneratorTag::TauPowY { i, index } => write!(f, "tau^{i}*y{index} + {i}*beta(tau)*tau^{}*eta{index}", i.saturating_sub(1)),
            GeneratorTag::Coeff { monomial } => write!(f, "{monomial}"),
            GeneratorTag::Tau { j, i } => write!(f, "tau_({j},{i})"),
            GeneratorTag::Xi { j, i } => write!(f, "xi_({j},{i})"),
            GeneratorTag::Rho { k } => write!(f, "rho_{k}"),
            GeneratorTag::Eps { k } => write!(f, "eps_{k}"),
        }
    }
}

/// The result of lifting a generator: either a genuine element of the
/// pullback, or a named fiber-product coordinate that is not a cycle on
/// its own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lift {
    Kernel(PullbackElement),
    Coordinate(FiberElement),
}

impl Lift {
    pub fn fiber(&self) -> FiberElement {
        match self {
            Lift::Kernel(x) => x.clone().into_fiber(),
            Lift::Coordinate(x) => x.clone(),
        }
    }

    pub fn kernel(self) -> Option<PullbackElement> {
        match self {
            Lift::Kernel(x) => Some(x),
            Lift::Coordinate(_) => None,
        }
    }
}

fn mismatch(model: &PullbackModel, tag: &GeneratorTag) -> AlgebraError {
    AlgebraError::TagMismatch { tag: tag.to_string(), scheme: model.ring.scheme().name() }
}

fn steen(idx: SteenrodMonomial, c: CoeffMonomial) -> Monomial {
    Monomial::new(c, idx)
}

/// Lifts a named generator into the pullback model.
pub fn lift_generator(model: &PullbackModel, tag: &GeneratorTag) -> Result<Lift> {
    let alg = &model.alg;
    let scheme = model.ring.scheme();
    let id = scheme.id();
    let kernel = |k: Element| -> Result<Lift> {
        let z = model.shadow(&k.augmentation()).ok_or_else(|| mismatch(model, tag))?;
        Ok(Lift::Kernel(model.element(z, k)?))
    };
    match tag {
        GeneratorTag::Y { index } => kernel(y(index, alg)?),
        GeneratorTag::RhoEtaTauY { index } => {
            if scheme.tau_beta() != Some(CoeffGen::Rho) {
                return Err(mismatch(model, tag));
            }
            let rho_eta = alg.mul(&alg.coeff_gen(CoeffGen::Rho)?, &eta(index, alg)?)?;
            let tau_y = alg.mul(&alg.coeff_gen(CoeffGen::Tau)?, &y(index, alg)?)?;
            kernel(rho_eta.add(&tau_y))
        }
        GeneratorTag::TauPowY { i, index } => {
            let Some(b) = scheme.tau_beta() else {
                return Err(mismatch(model, tag));
            };
            if *i >= scheme.p().get() {
                return Err(mismatch(model, tag));
            }
            let tau_i = alg.coeff_monomial(CoeffMonomial::tau_pow(*i))?;
            let mut k = alg.mul(&tau_i, &y(index, alg)?)?;
            if *i > 0 {
                let c = CoeffMonomial::tau_pow(i - 1).with(b, 1);
                let lower = alg.mul(&alg.coeff_monomial(c)?, &eta(index, alg)?)?;
                k.add_scaled(&lower, scheme.p().reduce(*i as i64));
            }
            kernel(k)
        }
        GeneratorTag::Coeff { monomial } => {
            let z = model.ring.monomial(*monomial, 1)?;
            Ok(Lift::Kernel(model.coefficient(z)?))
        }
        GeneratorTag::Tau { j, i } | GeneratorTag::Xi { j, i } => {
            if id != SchemeId::ZHalf || *j == 0 {
                return Err(mismatch(model, tag));
            }
            let s = match tag {
                GeneratorTag::Tau { .. } => SteenrodMonomial::new(Vec::new(), TauSet::singleton(*j)),
                _ => {
                    let mut s = SteenrodMonomial::one();
                    s.add_xi(*j, 1);
                    s
                }
            };
            let k = alg.monomial(steen(s, CoeffMonomial::tau_pow(*i)));
            Ok(Lift::Coordinate(model.fiber(IntElement::zero(), k)?))
        }
        GeneratorTag::Rho { k } => {
            if id != SchemeId::ZHalf || k % 2 == 0 {
                return Err(mismatch(model, tag));
            }
            let z = model.ring.monomial(IntMonomial::rho_k(*k), 1)?;
            Ok(Lift::Kernel(model.coefficient(z)?))
        }
        GeneratorTag::Eps { k } => {
            let ok = matches!(id, SchemeId::ZHalf | SchemeId::FiniteField { .. }) && *k > 0;
            if !ok {
                return Err(mismatch(model, tag));
            }
            let z = model.ring.monomial(IntMonomial::eps(*k), 1)?;
            Ok(Lift::Kernel(model.coefficient(z)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prime::Prime;
    use crate::scheme::Scheme;

    fn model(id: SchemeId, p: u32) -> PullbackModel {
        PullbackModel::new(IntCoeffRing::new(Scheme::new(id, Prime::new(p).unwrap()).unwrap()))
    }

    fn idx(a: &[u32], u: &[u32]) -> BasisIndex {
        BasisIndex::new(a.to_vec(), TauSet::from_indices(u.iter().copied()))
    }

    #[test]
    fn square_of_y01() {
        let m = model(SchemeId::AlgClosed, 2);
        let y1 = lift_generator(&m, &GeneratorTag::Y { index: idx(&[], &[1]) }).unwrap().kernel().unwrap();
        let sq = m.mul(&y1, &y1).unwrap();
        let expect = lift_generator(&m, &GeneratorTag::Y { index: idx(&[1], &[1]) }).unwrap().kernel().unwrap();
        assert_eq!(sq, expect);
        assert!(m.scale(&y1, 2).k().is_zero());
    }

    #[test]
    fn real_generator_is_a_cycle() {
        let m = model(SchemeId::RealP2, 2);
        let g = lift_generator(&m, &GeneratorTag::RhoEtaTauY { index: idx(&[], &[1]) }).unwrap();
        let k = g.kernel().unwrap();
        let expect = crate::text::parse_element(m.algebra(), "rho*tau1 + tau*xi1").unwrap();
        assert_eq!(k.k(), &expect);
        assert!(k.z().is_zero());
        let unit = lift_generator(&m, &GeneratorTag::RhoEtaTauY { index: BasisIndex::default() }).unwrap();
        assert_eq!(m.ring().format(unit.kernel().unwrap().z()), "rho");
    }

    #[test]
    fn finite_field_tau_pow_lift() {
        let m = model(SchemeId::FiniteField { q: 7 }, 3);
        for i in 0..3 {
            for u in [&[1u32][..], &[1, 2], &[2]] {
                let g = GeneratorTag::TauPowY { i, index: idx(&[1], u) };
                assert!(matches!(lift_generator(&m, &g).unwrap(), Lift::Kernel(_)));
            }
        }
        // the unit index gives the integral class i·ε_i
        let g = lift_generator(&m, &GeneratorTag::TauPowY { i: 2, index: BasisIndex::default() }).unwrap();
        let z = g.kernel().unwrap().z().clone();
        assert_eq!(m.ring().format(&z), "2*eps_2");
    }

    #[test]
    fn zhalf_tau_coordinate_is_not_a_cycle() {
        let m = model(SchemeId::ZHalf, 2);
        let t = lift_generator(&m, &GeneratorTag::Tau { j: 1, i: 2 }).unwrap();
        assert!(matches!(t, Lift::Coordinate(_)));
        let f = t.fiber();
        assert!(m.to_pullback(f).is_err());
        assert!(lift_generator(&m, &GeneratorTag::Rho { k: 2 }).is_err());
        let other = model(SchemeId::AlgClosed, 2);
        assert!(matches!(
            lift_generator(&other, &GeneratorTag::Tau { j: 1, i: 0 }),
            Err(AlgebraError::TagMismatch { .. })
        ));
    }

    #[test]
    fn incompatible_pairs_are_rejected() {
        let m = model(SchemeId::AlgClosed, 3);
        let z = m.ring().monomial(IntMonomial::tau_pow(1), 1).unwrap();
        assert!(matches!(m.element(z, m.algebra().zero()), Err(AlgebraError::Incompatible { .. })));
    }
}
