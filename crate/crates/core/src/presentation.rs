//! Machine-readable presentations: generators with bidegrees and rewrite
//! rules, all computed by the arithmetic of this crate.

use serde::{Deserialize, Serialize};

use crate::bidegree::Bidegree;
use crate::bockstein::{beta, free_bbeta_generators};
use crate::element::{Algebra, Element};
use crate::error::Result;
use crate::integral::algclosed::{AlgClosedReducer, YExpr};
use crate::integral::pullback::{lift_generator, GeneratorTag, Lift, PullbackModel};
use crate::integral::{IntCoeffRing, IntMonomial};
use crate::monomial::CoeffGen;
use crate::scheme::{Scheme, SchemeId};
use crate::steenrod::Conjugation;

/// Version tag of the presentation JSON.
pub const PRESENTATION_SCHEMA: &str = "motsteen.presentation/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub bidegree: Bidegree,
}

/// The rewrite rule `lhs -> rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    pub lhs: String,
    pub rhs: String,
}

impl Rule {
    fn new(lhs: impl Into<String>, rhs: impl ToString) -> Self {
        Rule { lhs: lhs.into(), rhs: rhs.to_string() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingPresentation {
    pub generators: Vec<Generator>,
    pub relations: Vec<Rule>,
    /// β on each generator.
    pub bockstein: Vec<Rule>,
    /// χ on each generator (dual form only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub conjugation: Vec<Rule>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntGenerator {
    pub name: String,
    pub bidegree: Bidegree,
    /// Additive order; absent for torsion-free generators.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u128>,
    /// Image in the mod-p coefficient ring.
    pub reduction: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralPresentation {
    pub generators: Vec<IntGenerator>,
    /// Torsion relations `n*g -> 0`.
    pub relations: Vec<Rule>,
    /// Products of generator pairs.
    pub products: Vec<Rule>,
}

/// A generator of the integral dual Steenrod algebra as an element of
/// the fiber product (z, k).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PullbackGenerator {
    pub name: String,
    pub bidegree: Bidegree,
    pub integral: String,
    pub mod_p: String,
    /// False for fiber coordinates that are not cycles on their own.
    pub cycle: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub schema: String,
    pub scheme: String,
    pub prime: u32,
    /// Largest Milnor index listed; 0 lists the coefficient rings only.
    pub bound: u32,
    pub coefficients: RingPresentation,
    pub integral: IntegralPresentation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_steenrod: Option<RingPresentation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mz: Option<RingPresentation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pullback_generators: Vec<PullbackGenerator>,
    /// Products of y-generators reduced to the free basis
    /// (algebraically closed base only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub y_products: Vec<Rule>,
}

/// Truncation parameters of [`present`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PresentBounds {
    /// Milnor indices 1..=bound (and τ_0 in the dual form).
    pub bound: u32,
    /// Integral generators and coordinates of weight ≥ -wmax.
    pub wmax: u32,
    /// y-generators of topological degree ≤ dmax.
    pub dmax: i64,
}

fn degree(x: &Element) -> Result<Bidegree> {
    Ok(x.bidegree()?.unwrap_or(Bidegree::ZERO))
}

fn coefficient_part(alg: &Algebra) -> Result<RingPresentation> {
    let scheme = alg.scheme();
    let mut out = RingPresentation::default();
    for &g in scheme.gens() {
        out.generators.push(Generator { name: g.name().into(), bidegree: g.bidegree() });
        out.bockstein.push(Rule::new(format!("beta({})", g.name()), beta(alg, &alg.coeff_gen(g)?)?));
    }
    let gens = scheme.gens();
    for (i, &g) in gens.iter().enumerate() {
        for &h in &gens[i..] {
            let prod = alg.mul(&alg.coeff_gen(g)?, &alg.coeff_gen(h)?)?;
            if prod.is_zero() {
                let lhs = if g == h { format!("{}^2", g.name()) } else { format!("{}*{}", g.name(), h.name()) };
                out.relations.push(Rule::new(lhs, 0));
            }
        }
    }
    Ok(out)
}

fn milnor_part(alg: &Algebra, bound: u32, conj: Option<&Conjugation>) -> Result<RingPresentation> {
    let mut out = RingPresentation::default();
    for j in 1..=bound {
        let xi = alg.xi(j)?;
        out.generators.push(Generator { name: format!("xi{j}"), bidegree: degree(&xi)? });
        out.bockstein.push(Rule::new(format!("beta(xi{j})"), beta(alg, &xi)?));
        if let Some(c) = conj {
            out.conjugation.push(Rule::new(format!("chi(xi{j})"), c.apply(&xi)?));
        }
    }
    for j in alg.min_tau_index()..=bound {
        let tau = alg.tau(j)?;
        out.generators.push(Generator { name: format!("tau{j}"), bidegree: degree(&tau)? });
        out.relations.push(Rule::new(format!("tau{j}^2"), alg.mul(&tau, &tau)?));
        out.bockstein.push(Rule::new(format!("beta(tau{j})"), beta(alg, &tau)?));
        if let Some(c) = conj {
            out.conjugation.push(Rule::new(format!("chi(tau{j})"), c.apply(&tau)?));
        }
    }
    Ok(out)
}

/// The integral coefficient generators of weight ≥ -wmax.
fn integral_generators(ring: &IntCoeffRing, wmax: u32) -> Vec<IntMonomial> {
    let w = wmax.max(1);
    let mut gens = match ring.scheme().id() {
        SchemeId::AlgClosed => vec![IntMonomial::tau_pow(1)],
        SchemeId::RealP2 => vec![IntMonomial::real(1, 0), IntMonomial::real(0, 1)],
        SchemeId::RealOddP => vec![IntMonomial::theta_pow(1)],
        SchemeId::FiniteField { .. } => (1..=w).map(IntMonomial::eps).collect(),
        SchemeId::ZHalf => (1..=w).step_by(2).map(IntMonomial::rho_k).chain((1..=w).map(IntMonomial::eps)).collect(),
    };
    gens.retain(|m| ring.order(m) > 1 && -ring.bidegree(m).w <= w as i64);
    gens
}

fn integral_part(ring: &IntCoeffRing, alg: &Algebra, wmax: u32) -> Result<IntegralPresentation> {
    let free = (ring.p().get() as u128).pow(ring.precision());
    let gens = integral_generators(ring, wmax);
    let mut out = IntegralPresentation::default();
    for m in &gens {
        let order = ring.order(m);
        out.generators.push(IntGenerator {
            name: ring.name(m),
            bidegree: ring.bidegree(m),
            order: (order < free).then_some(order),
            reduction: ring.q_map(alg, &ring.monomial(*m, 1)?)?.to_string(),
        });
    }
    for g in &out.generators {
        if let Some(n) = g.order {
            out.relations.push(Rule::new(format!("{n}*{}", g.name), 0));
        }
    }
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i..] {
            let prod = ring.mul(&ring.monomial(*a, 1)?, &ring.monomial(*b, 1)?);
            out.products.push(Rule::new(format!("{}*{}", ring.name(a), ring.name(b)), ring.format(&prod)));
        }
    }
    Ok(out)
}

fn pullback_tags(model: &PullbackModel, b: PresentBounds) -> Vec<GeneratorTag> {
    let scheme = model.ring().scheme();
    let p = scheme.p();
    let mut tags = Vec::new();
    let indices: Vec<_> = free_bbeta_generators(p, b.dmax, i64::MAX)
        .into_iter()
        .filter(|i| i.u.max().unwrap_or(0) <= b.bound && i.a.len() as u32 <= b.bound)
        .collect();
    for idx in &indices {
        tags.push(GeneratorTag::Y { index: idx.clone() });
        match scheme.tau_beta() {
            Some(CoeffGen::Rho) => tags.push(GeneratorTag::RhoEtaTauY { index: idx.clone() }),
            Some(_) => tags.extend((1..p.get()).map(|i| GeneratorTag::TauPowY { i, index: idx.clone() })),
            None => {}
        }
    }
    if scheme.id() == SchemeId::ZHalf {
        for j in 1..=b.bound {
            for i in 0..=b.wmax {
                tags.push(GeneratorTag::Tau { j, i });
                tags.push(GeneratorTag::Xi { j, i });
            }
        }
    }
    tags
}

fn pullback_part(model: &PullbackModel, b: PresentBounds) -> Result<Vec<PullbackGenerator>> {
    let ring = model.ring();
    let mut out = Vec::new();
    for tag in pullback_tags(model, b) {
        let lift = lift_generator(model, &tag)?;
        let x = lift.fiber();
        let bidegree = match x.k.bidegree()? {
            Some(bd) => bd,
            None => x.z.terms().next().map(|(m, _)| ring.bidegree(m)).unwrap_or(Bidegree::ZERO),
        };
        out.push(PullbackGenerator {
            name: tag.to_string(),
            bidegree,
            integral: ring.format(&x.z),
            mod_p: x.k.to_string(),
            cycle: matches!(lift, Lift::Kernel(_)),
        });
    }
    Ok(out)
}

fn y_products(model: &PullbackModel, b: PresentBounds) -> Result<Vec<Rule>> {
    let reducer = AlgClosedReducer::new(model.clone())?;
    let p = model.ring().p();
    let gens: Vec<_> = free_bbeta_generators(p, b.dmax, i64::MAX)
        .into_iter()
        .filter(|i| i.u.max().unwrap_or(0) <= b.bound && i.a.len() as u32 <= b.bound)
        .collect();
    let mut out = Vec::new();
    for (i, x) in gens.iter().enumerate() {
        for y in &gens[i..] {
            let nf = reducer.reduce(&YExpr::symbol(x.clone()).mul(&YExpr::symbol(y.clone())));
            out.push(Rule::new(format!("y{x}*y{y}"), nf));
        }
    }
    Ok(out)
}

/// The presentations of the coefficient rings, the dual Steenrod
/// algebra, its MZ subalgebra and the integral generators, truncated to
/// the given bounds.
pub fn present(scheme: &Scheme, ring: IntCoeffRing, b: PresentBounds) -> Result<Presentation> {
    let mz = Algebra::mz(scheme.clone());
    let dual = Algebra::dual(scheme.clone());
    let model = PullbackModel::new(ring);
    let ring = model.ring();
    let mut out = Presentation {
        schema: PRESENTATION_SCHEMA.into(),
        scheme: scheme.name(),
        prime: scheme.p().get(),
        bound: b.bound,
        coefficients: coefficient_part(&mz)?,
        integral: integral_part(ring, &mz, b.wmax)?,
        dual_steenrod: None,
        mz: None,
        pullback_generators: Vec::new(),
        y_products: Vec::new(),
    };
    if b.bound == 0 {
        return Ok(out);
    }
    let conj = Conjugation::new(&dual)?;
    out.dual_steenrod = Some(milnor_part(&dual, b.bound, Some(&conj))?);
    out.mz = Some(milnor_part(&mz, b.bound, None)?);
    out.pullback_generators = pullback_part(&model, b)?;
    if scheme.id() == SchemeId::AlgClosed {
        out.y_products = y_products(&model, b)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prime::Prime;

    fn bounds(bound: u32) -> PresentBounds {
        PresentBounds { bound, wmax: 4, dmax: 12 }
    }

    fn scheme(id: SchemeId, p: u32) -> Scheme {
        Scheme::new(id, Prime::new(p).unwrap()).unwrap()
    }

    #[test]
    fn alg_closed_bound_two() {
        let s = scheme(SchemeId::AlgClosed, 2);
        let pr = present(&s, IntCoeffRing::new(s.clone()), bounds(2)).unwrap();
        let mz = pr.mz.as_ref().unwrap();
        let names: Vec<&str> = mz.generators.iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["xi1", "xi2", "tau1", "tau2"]);
        assert!(mz.relations.contains(&Rule::new("tau1^2", "tau*xi2")));
        assert_eq!(mz.generators[0].bidegree, Bidegree::new(2, 1));
        assert!(mz.bockstein.contains(&Rule::new("beta(tau1)", "xi1")));
        let dual = pr.dual_steenrod.as_ref().unwrap();
        assert_eq!(dual.generators[2].name, "tau0");
        assert!(!pr.y_products.is_empty());
    }

    #[test]
    fn real_integral_part_has_two_torsion_rho() {
        let s = scheme(SchemeId::RealP2, 2);
        let pr = present(&s, IntCoeffRing::new(s.clone()), bounds(1)).unwrap();
        let rho = pr.integral.generators.iter().find(|g| g.name == "rho").unwrap();
        assert_eq!(rho.order, Some(2));
        assert!(pr.integral.relations.contains(&Rule::new("2*rho", "0")));
        let t = pr.integral.generators.iter().find(|g| g.name == "tau^2").unwrap();
        assert_eq!(t.order, None);
        assert_eq!(t.reduction, "tau^2");
        assert!(pr.pullback_generators.iter().any(|g| g.name.starts_with("rho*eta") && g.cycle));
    }

    #[test]
    fn bound_zero_is_coefficients_only() {
        let s = scheme(SchemeId::ZHalf, 2);
        let pr = present(&s, IntCoeffRing::new(s.clone()), bounds(0)).unwrap();
        assert!(pr.mz.is_none() && pr.dual_steenrod.is_none() && pr.pullback_generators.is_empty());
        assert!(pr.coefficients.relations.contains(&Rule::new("rho*eps", "0")));
        assert!(pr.coefficients.relations.contains(&Rule::new("eps^2", "0")));
        assert!(pr.integral.products.contains(&Rule::new("rho_3*rho_3", "rho_1*rho_5")));
    }

    #[test]
    fn json_round_trip() {
        let s = scheme(SchemeId::FiniteField { q: 7 }, 3);
        let pr = present(&s, IntCoeffRing::new(s.clone()), bounds(1)).unwrap();
        let v = serde_json::to_string(&pr).unwrap();
        assert_eq!(serde_json::from_str::<Presentation>(&v).unwrap(), pr);
    }
}
