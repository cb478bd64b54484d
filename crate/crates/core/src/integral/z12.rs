//! The displayed relations of the ℤ[1/2] presentation, checked in the
//! fiber product by projecting both sides.

use crate::error::{AlgebraError, Result};
use crate::report::{Check, Status, SuiteReport, Tally};
use crate::scheme::SchemeId;

use super::pullback::{lift_generator, FiberElement, GeneratorTag, PullbackModel};
use super::IntElement;

/// Index ranges swept by the check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Z12Bounds {
    /// ρ_{2i+1} and ε_i for i up to this bound.
    pub i_max: u32,
    /// τ_{j,k}, ξ_{j,k} for 1 ≤ j ≤ j_max.
    pub j_max: u32,
    /// τ-powers k ≤ k_max.
    pub k_max: u32,
}

impl Default for Z12Bounds {
    fn default() -> Self {
        Z12Bounds { i_max: 4, j_max: 3, k_max: 4 }
    }
}

fn lift(model: &PullbackModel, tag: GeneratorTag) -> Result<FiberElement> {
    Ok(lift_generator(model, &tag)?.fiber())
}

fn is_zero(x: &FiberElement) -> bool {
    x.z.is_zero() && x.k.is_zero()
}

/// x + y = 0, computed in the fiber product.
fn sum_vanishes(model: &PullbackModel, x: &FiberElement, y: &FiberElement) -> Result<bool> {
    Ok(is_zero(&model.fiber_add(x, y)?))
}

fn coordinate(model: &PullbackModel, xi: bool, j: u32, k: u32) -> Result<FiberElement> {
    lift(model, if xi { GeneratorTag::Xi { j, i: k } } else { GeneratorTag::Tau { j, i: k } })
}

/// Checks every relation of the ℤ[1/2] presentation over the given index
/// range. The ε-relation with the displayed index ε_1 τ_{j,j-1+k} is
/// reported as a warning when it fails and the index i-1+k holds.
pub fn z12_relation_check(model: &PullbackModel, bounds: Z12Bounds) -> Result<SuiteReport> {
    let ring = model.ring();
    if ring.scheme().id() != SchemeId::ZHalf {
        return Err(AlgebraError::TagMismatch { tag: "z12 relations".into(), scheme: ring.scheme().name() });
    }
    let Z12Bounds { i_max, j_max, k_max } = bounds;
    let rho = |i: u32| lift(model, GeneratorTag::Rho { k: 2 * i + 1 });
    let eps = |i: u32| lift(model, GeneratorTag::Eps { k: i });
    let mut report = SuiteReport::new("z12");

    let mut t = Tally::default();
    for i in 0..=i_max {
        let r = rho(i)?;
        t.record(r.z != IntElement::zero() && is_zero(&model.fiber_scale(&r, 2)), || format!("2*rho_{}", 2 * i + 1));
    }
    report.push(t.into_check("2 rho_(2i+1) = 0", Status::Fail, "rho classes are nonzero of order 2"));

    let mut t = Tally::default();
    for i in 1..=i_max {
        let w = ring.wtable().w(2 * i);
        let e = eps(2 * i)?;
        let ok = !is_zero(&model.fiber_scale(&e, w as i128 / 2)) && is_zero(&model.fiber_scale(&e, w as i128));
        t.record(ok, || format!("w_{} eps_{}", 2 * i, 2 * i));
    }
    report.push(t.into_check("w_(2i) eps_(2i) = 0", Status::Fail, "even eps classes have order exactly w_(2i)"));

    let mut t = Tally::default();
    for i in 0..=i_max {
        for j in 1..=2 * i_max + 1 {
            let prod = model.fiber_mul(&rho(i)?, &eps(j)?)?;
            t.record(is_zero(&prod), || format!("rho_{} eps_{j} = {}", 2 * i + 1, model.format(&prod)));
        }
    }
    report.push(t.into_check("rho_(2i+1) eps_j = 0", Status::Fail, "products vanish integrally and after q"));

    let mut t = Tally::default();
    for i in 1..=2 * i_max + 1 {
        for j in 1..=2 * i_max + 1 {
            let prod = model.fiber_mul(&eps(i)?, &eps(j)?)?;
            t.record(is_zero(&prod), || format!("eps_{i} eps_{j} = {}", model.format(&prod)));
        }
    }
    report.push(t.into_check("eps_i eps_j = 0", Status::Fail, "products vanish integrally and after q"));

    let mut t = Tally::default();
    for i in 0..=i_max {
        for j in 0..=i_max {
            let lhs = model.fiber_mul(&rho(i)?, &rho(j)?)?;
            let rhs = model.fiber_mul(&rho(0)?, &rho(i + j)?)?;
            let q_agrees = ring.q_map(model.algebra(), &lhs.z)? == ring.q_map(model.algebra(), &rhs.z)?;
            t.record(sum_vanishes(model, &lhs, &rhs)? && q_agrees && !is_zero(&lhs), || {
                format!("rho_{} rho_{} vs rho_1 rho_{}", 2 * i + 1, 2 * j + 1, 2 * (i + j) + 1)
            });
        }
    }
    report.push(t.into_check(
        "rho_(2i+1) rho_(2j+1) + rho_1 rho_(2(i+j)+1) = 0",
        Status::Fail,
        "both sides are the same nonzero class",
    ));

    let mut displayed = Tally::default();
    let mut shifted = Tally::default();
    for xi in [false, true] {
        let name = if xi { "xi" } else { "tau" };
        let mut t = Tally::default();
        for j in 1..=j_max {
            for k in 0..=k_max {
                let c = coordinate(model, xi, j, k)?;
                t.record(!is_zero(&c) && is_zero(&model.fiber_scale(&c, 2)), || format!("2 {name}_({j},{k})"));
            }
        }
        report.push(t.into_check(&format!("2 {name}_(i,j) = 0"), Status::Fail, "coordinates have order 2"));

        let mut t = Tally::default();
        for i in 0..=i_max {
            for j in 1..=j_max {
                for k in 0..=k_max {
                    let lhs = model.fiber_mul(&rho(i)?, &coordinate(model, xi, j, k)?)?;
                    let rhs = model.fiber_mul(&rho(0)?, &coordinate(model, xi, j, 2 * i + k)?)?;
                    t.record(sum_vanishes(model, &lhs, &rhs)? && !is_zero(&lhs), || {
                        format!("rho_{} {name}_({j},{k}) = {}", 2 * i + 1, model.format(&lhs))
                    });
                }
            }
        }
        report.push(t.into_check(
            &format!("rho_(2i+1) {name}_(j,k) + rho_1 {name}_(j,2i+k) = 0"),
            Status::Fail,
            "both sides project to the same class",
        ));

        for i in 1..=2 * i_max + 1 {
            for j in 1..=j_max {
                for k in 0..=k_max {
                    let lhs = model.fiber_mul(&eps(i)?, &coordinate(model, xi, j, k)?)?;
                    let displayed_product = model.fiber_mul(&eps(1)?, &coordinate(model, xi, j, j - 1 + k)?)?;
                    let fixed = model.fiber_mul(&eps(1)?, &coordinate(model, xi, j, i - 1 + k)?)?;
                    displayed.record(sum_vanishes(model, &lhs, &displayed_product)?, || {
                        format!("eps_{i} {name}_({j},{k}) = {} but eps_1 {name}_({j},{}) = {}", model.format(&lhs), j - 1 + k, model.format(&displayed_product))
                    });
                    shifted.record(sum_vanishes(model, &lhs, &fixed)? && !is_zero(&lhs), || {
                        format!("eps_{i} {name}_({j},{k}) = {}", model.format(&lhs))
                    });
                }
            }
        }
    }

    let fixed_ok = shifted.failures == 0;
    report.push(shifted.into_check(
        "eps_i c_(j,k) + eps_1 c_(j,i-1+k) = 0 for c = tau, xi",
        Status::Fail,
        "holds for every index",
    ));
    let detail = if fixed_ok {
        "displayed index j-1+k only holds when i = j; the index i-1+k holds in every case"
    } else {
        "displayed index j-1+k"
    };
    let mut c = displayed.into_check("eps_i c_(j,k) + eps_1 c_(j,j-1+k) = 0 for c = tau, xi", Status::Warn, detail);
    if !fixed_ok && c.status == Status::Warn {
        c.status = Status::Fail;
    }
    report.push(c);

    // The generators y_{a,U} and ρη + τy lie in the pullback itself.
    let mut t = Tally::default();
    for idx in crate::bockstein::free_bbeta_generators(ring.p(), 12, 12) {
        for tag in [GeneratorTag::Y { index: idx.clone() }, GeneratorTag::RhoEtaTauY { index: idx.clone() }] {
            let ok = matches!(lift_generator(model, &tag), Ok(super::pullback::Lift::Kernel(_)));
            t.record(ok, || tag.to_string());
        }
    }
    report.push(t.into_check("generators are cycles", Status::Fail, "y and rho eta + tau y lift to the pullback"));

    // q is a ring map on the integral monomials.
    let mut t = Tally::default();
    let ms = ring.monomials_to_weight(8);
    for a in &ms {
        for b in &ms {
            let x = ring.monomial(*a, 1)?;
            let y = ring.monomial(*b, 1)?;
            let alg = model.algebra();
            let lhs = ring.q_map(alg, &ring.mul(&x, &y))?;
            let rhs = alg.mul(&ring.q_map(alg, &x)?, &ring.q_map(alg, &y)?)?;
            t.record(lhs == rhs, || format!("q({a} * {b})"));
        }
    }
    report.push(t.into_check("q is multiplicative", Status::Fail, "on integral monomials of weight >= -8"));
    Ok(report)
}

/// The displayed-index warning is the only acceptable non-pass.
pub fn only_documented_warning(report: &SuiteReport) -> bool {
    let warns: Vec<&Check> = report.checks.iter().filter(|c| c.status != Status::Pass).collect();
    warns.iter().all(|c| c.status == Status::Warn && c.name.contains("j-1+k"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integral::IntCoeffRing;
    use crate::prime::Prime;
    use crate::scheme::Scheme;

    #[test]
    fn z12_report() {
        let ring = IntCoeffRing::new(Scheme::new(SchemeId::ZHalf, Prime::TWO).unwrap());
        let model = PullbackModel::new(ring);
        let report = z12_relation_check(&model, Z12Bounds::default()).unwrap();
        for c in &report.checks {
            assert_ne!(c.status, Status::Fail, "{c:?}");
        }
        assert_eq!(report.status(), Status::Warn);
        assert!(only_documented_warning(&report));
    }
}
