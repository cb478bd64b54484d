//! Verification suites. Each suite compares a structural statement with
//! an independent computation and returns a [`SuiteReport`].

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bidegree::Bidegree;
use crate::bockstein::{
    beta, beta_matrix, beta_monomial, bidegree_range, constructive_kernel_opposite_sign, free_bbeta_generators_in, ker_beta_basis,
    steenrod_basis, y, Block,
};
use crate::element::{Algebra, Ambient, Element};
use crate::error::{AlgebraError, Result};
use crate::integral::algclosed::{AlgClosedReducer, YExpr};
use crate::integral::pullback::{lift_generator, GeneratorTag, Lift, PullbackElement, PullbackModel};
use crate::integral::relations::{exponent_vectors, product_sweep, verify_linear_relation, verify_product_relation};
use crate::integral::z12::{z12_relation_check, Z12Bounds};
use crate::integral::{IntCoeffRing, IntElement, WTable};
use crate::linalg::{vectors_rank, FpMatrix};
use crate::monomial::{tau_bidegree, xi_bidegree, CoeffGen, CoeffMonomial, Monomial, SteenrodMonomial, TauSet};
use crate::prime::Prime;
use crate::report::{Check, Status, SuiteReport, Tally};
use crate::scheme::{Scheme, SchemeId};
use crate::steenrod::{basis, monomials_to_degree, steenrod_monomials_to_degree, BasisIndex, BidegreeBasis, Conjugation, MzEmbedding};

#[cfg(feature = "parallel")]
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.iter().map(f).collect()
}

/// Suites selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Beta2,
    Chi,
    Products,
    Linear,
    Blocks,
    Kerbasis,
    Z12,
    Degrees,
    Freeness,
    Pullback,
    Embedding,
    All,
}

impl Suite {
    /// Every suite except `All`, in execution order.
    pub const EACH: [Suite; 11] = [
        Suite::Beta2,
        Suite::Chi,
        Suite::Products,
        Suite::Linear,
        Suite::Blocks,
        Suite::Kerbasis,
        Suite::Z12,
        Suite::Degrees,
        Suite::Freeness,
        Suite::Pullback,
        Suite::Embedding,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Beta2 => "beta2",
            Suite::Chi => "chi",
            Suite::Products => "products",
            Suite::Linear => "linear",
            Suite::Blocks => "blocks",
            Suite::Kerbasis => "kerbasis",
            Suite::Z12 => "z12",
            Suite::Degrees => "degrees",
            Suite::Freeness => "freeness",
            Suite::Pullback => "pullback",
            Suite::Embedding => "embedding",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| AlgebraError::Parse { pos: 0, msg: format!("unknown suite '{s}'") })
    }
}

/// Bounds and switches shared by all suites.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub scheme: Scheme,
    /// Topological degree bound.
    pub dmax: i64,
    /// Coefficient weights down to -wmax.
    pub wmax: i64,
    pub precision: u32,
    pub wtable: WTable,
    pub seed: u64,
    /// Random pairs for χ multiplicativity.
    pub chi_random_pairs: usize,
    /// Unmemoised random pairs backing the product sweep.
    pub product_random_pairs: usize,
    /// Replace χτ_2 by a wrong value (negative control).
    pub corrupt_chi_tau2: bool,
}

impl VerifyConfig {
    pub fn new(scheme: Scheme, dmax: i64, wmax: i64) -> Self {
        VerifyConfig {
            scheme,
            dmax,
            wmax,
            precision: crate::integral::DEFAULT_PRECISION,
            wtable: WTable::default(),
            seed: 0x6d6f7473,
            chi_random_pairs: 200,
            product_random_pairs: 2000,
            corrupt_chi_tau2: false,
        }
    }

    pub fn p(&self) -> Prime {
        self.scheme.p()
    }

    pub fn ring(&self) -> Result<IntCoeffRing> {
        IntCoeffRing::new(self.scheme.clone()).with_precision(self.precision).with_wtable(self.wtable.clone())
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

/// Runs one suite, or all of them in order.
pub fn run(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    if suite == Suite::All {
        return Suite::EACH.iter().map(|s| run_one(*s, cfg)).collect();
    }
    Ok(vec![run_one(suite, cfg)?])
}

pub fn run_one(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    match suite {
        Suite::Beta2 => beta2(cfg),
        Suite::Chi => chi(cfg),
        Suite::Products => products(cfg),
        Suite::Linear => linear(cfg),
        Suite::Blocks => blocks(cfg),
        Suite::Kerbasis => kerbasis(cfg),
        Suite::Z12 => z12(cfg),
        Suite::Degrees => degrees(cfg),
        Suite::Freeness => freeness(cfg),
        Suite::Pullback => pullback(cfg),
        Suite::Embedding => embedding(cfg),
        Suite::All => unreachable!("expanded by run"),
    }
}

fn describe(m: &Monomial) -> String {
    crate::text::monomial_expr(m)
}

/// β(β(m)) = 0 on every basis monomial in both forms, and the Leibniz
/// rule on random pairs.
pub fn beta2(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("beta2");
    for ambient in [Ambient::Mz, Ambient::Dual] {
        let alg = Algebra::new(cfg.scheme.clone(), ambient);
        let ms = monomials_to_degree(&alg, cfg.dmax, cfg.wmax);
        let results = par_map(&ms, |m| {
            let b = beta_monomial(&alg, m);
            beta(&alg, &b).map(|bb| bb.is_zero())
        });
        let mut t = Tally::default();
        for (m, r) in ms.iter().zip(results) {
            let ok = r?;
            t.record(ok, || format!("beta(beta({})) != 0", describe(m)));
        }
        let form = if ambient == Ambient::Mz { "MZ" } else { "dual" };
        report.push(t.into_check(
            &format!("beta^2 = 0 ({form} form)"),
            Status::Fail,
            format!("basis monomials, Steenrod degree <= {}, coefficient weight >= -{}", cfg.dmax, cfg.wmax),
        ));

        let mut rng = cfg.rng(ambient as u64 + 1);
        let mut t = Tally::default();
        let p = alg.p();
        for _ in 0..200.min(ms.len() * ms.len()) {
            let x = alg.monomial(ms[rng.random_range(0..ms.len())].clone());
            let z = alg.monomial(ms[rng.random_range(0..ms.len())].clone());
            let lhs = beta(&alg, &alg.mul(&x, &z)?)?;
            let dx = x.bidegree()?.unwrap_or(Bidegree::ZERO);
            let rhs = alg.mul(&beta(&alg, &x)?, &z)?.add(&alg.mul(&x, &beta(&alg, &z)?)?.scale(p.sign(dx.is_odd())));
            t.record(lhs == rhs, || format!("beta(({x}) * ({z}))"));
        }
        report.push(t.into_check(&format!("Leibniz rule ({form} form)"), Status::Fail, "random pairs of basis monomials"));
    }
    Ok(report)
}

/// The negative-control corruption of χτ_2.
fn corrupted(chi: &mut Conjugation) -> Result<()> {
    let alg = chi.algebra().clone();
    let wrong = chi.chi_tau(2)?.add(&alg.tau(2)?);
    chi.override_tau(2, wrong);
    Ok(())
}

/// χ is an involutive ring map on the dual form, with the stated values on
/// coefficients.
pub fn chi(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("chi");
    let alg = Algebra::dual(cfg.scheme.clone());
    let mut conj = Conjugation::new(&alg)?;
    if cfg.corrupt_chi_tau2 {
        corrupted(&mut conj)?;
    }
    let conj = conj;
    let ms = monomials_to_degree(&alg, cfg.dmax, cfg.wmax);

    let results = par_map(&ms, |m| -> Result<bool> {
        let x = alg.monomial(m.clone());
        Ok(conj.apply(&conj.apply(&x)?)? == x)
    });
    let mut t = Tally::default();
    for (m, r) in ms.iter().zip(results) {
        let ok = r?;
        t.record(ok, || format!("chi(chi({})) != {}", describe(m), describe(m)));
    }
    report.push(t.into_check("chi^2 = id", Status::Fail, format!("basis monomials of the dual form, degree <= {}", cfg.dmax)));

    // all pairs whose product stays within the degree bound
    let p = alg.p();
    let mut pairs = Vec::new();
    for (i, a) in ms.iter().enumerate() {
        let da = a.bidegree(p).d - a.coeff.bidegree().d;
        for b in &ms[i..] {
            let db = b.bidegree(p).d - b.coeff.bidegree().d;
            if da + db <= cfg.dmax && -(a.coeff.bidegree().w + b.coeff.bidegree().w) <= cfg.wmax {
                pairs.push((a.clone(), b.clone()));
            }
        }
    }
    let mut rng = cfg.rng(7);
    for _ in 0..cfg.chi_random_pairs {
        let a = ms[rng.random_range(0..ms.len())].clone();
        let b = ms[rng.random_range(0..ms.len())].clone();
        pairs.push((a, b));
    }
    let results = par_map(&pairs, |(a, b)| -> Result<bool> {
        let (x, z) = (alg.monomial(a.clone()), alg.monomial(b.clone()));
        Ok(conj.apply(&alg.mul(&x, &z)?)? == alg.mul(&conj.apply(&x)?, &conj.apply(&z)?)?)
    });
    let mut t = Tally::default();
    for ((a, b), r) in pairs.iter().zip(results) {
        let ok = r?;
        t.record(ok, || format!("chi({} * {}) != chi({}) chi({})", describe(a), describe(b), describe(a), describe(b)));
    }
    report.push(t.into_check(
        "chi(xy) = chi(x) chi(y)",
        Status::Fail,
        format!("all pairs within degree {} plus {} random pairs", cfg.dmax, cfg.chi_random_pairs),
    ));

    // the coefficient values
    let mut t = Tally::default();
    let scheme = alg.scheme();
    if scheme.has(CoeffGen::Tau) {
        let chi_tau = conj.chi_coeff_gen(CoeffGen::Tau)?;
        let expect = match scheme.tau_beta() {
            None => alg.coeff_gen(CoeffGen::Tau)?,
            Some(b) => alg.coeff_gen(CoeffGen::Tau)?.add(&alg.mul(&alg.tau(0)?, &alg.coeff_gen(b)?)?),
        };
        t.record(chi_tau == expect, || format!("chi(tau) = {chi_tau}"));
        if scheme.tau_beta() == Some(CoeffGen::Rho) {
            let verbatim = crate::text::parse_element(&alg, "tau + rho*tau0")?;
            t.record(chi_tau == verbatim, || format!("chi(tau) = {chi_tau}, expected tau + rho*tau0"));
        }
    }
    for g in [CoeffGen::Rho, CoeffGen::Eps, CoeffGen::Theta] {
        if scheme.has(g) {
            let v = conj.chi_coeff_gen(g)?;
            t.record(v == alg.coeff_gen(g)?, || format!("chi({}) = {v}", g.name()));
        }
    }
    let t0 = conj.apply(&alg.tau(0)?)?;
    t.record(t0 == alg.tau(0)?.neg(), || format!("chi(tau0) = {t0}"));
    report.push(t.into_check("chi on coefficients", Status::Fail, "chi(tau) = tau + tau0 beta(tau); rho, eps, theta fixed"));
    Ok(report)
}

/// The algebra used for the product and linear relations: the configured
/// scheme when its coefficient Bockstein vanishes and no ρ-term enters
/// τ_j², otherwise the algebraically closed case at the same prime.
fn relation_algebra(scheme: &Scheme) -> (Algebra, bool) {
    if scheme.tau_beta().is_none() && scheme.rho_element().is_none() {
        (Algebra::mz(scheme.clone()), false)
    } else {
        (Algebra::mz(Scheme::alg_closed(scheme.p())), true)
    }
}

/// Product relations among the y_{a,U}: sweep over supp ⊆ {1,2,3},
/// exponents ≤ 2, plus unmemoised random pairs.
pub fn products(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("products");
    let (alg, substituted) = relation_algebra(&cfg.scheme);
    let note = if substituted { " (algebraically closed coefficients at this prime)" } else { "" };
    let sweep = product_sweep(&alg, 3, 2)?;
    let uniform = sweep.uniform_convention();

    let mut c = Check::new(
        "product formula, delta_k convention",
        if sweep.corrected_failures == 0 { Status::Pass } else { Status::Fail },
        sweep.cases,
        format!("{} index pairs, {} distinct (a+b, U, T){note}", sweep.cases, sweep.distinct),
    );
    if let Some(f) = &sweep.first_corrected_failure {
        c.counterexample = Some(format!("y{} * y{} = {}", f.left, f.right, f.oracle));
    }
    report.push(c);

    let mut c = Check::new(
        "product formula, delta_(k-1) convention",
        if sweep.shifted_failures == 0 { Status::Pass } else { Status::Warn },
        sweep.cases,
        format!("displayed index reading fails in {} of {} cases; delta_k reading is the one that holds", sweep.shifted_failures, sweep.cases),
    );
    if let Some(f) = &sweep.first_shifted_failure {
        c.counterexample = Some(format!("y{} * y{} = {}", f.left, f.right, f.oracle));
    }
    report.push(c);

    report.push(Check::new(
        "exactly one convention holds uniformly",
        if uniform.is_some() { Status::Pass } else { Status::Fail },
        sweep.cases,
        match uniform {
            Some(conv) => format!("{conv:?} holds in every case, the other fails somewhere"),
            None => "no single convention separates the cases".to_string(),
        },
    ));

    let mut rng = cfg.rng(11);
    let vecs = exponent_vectors(3, 2);
    let mut t = Tally::default();
    for _ in 0..cfg.product_random_pairs {
        let a = BasisIndex::new(vecs[rng.random_range(0..vecs.len())].clone(), TauSet(rng.random_range(1u64..8) << 1));
        let b = BasisIndex::new(vecs[rng.random_range(0..vecs.len())].clone(), TauSet(rng.random_range(1u64..8) << 1));
        let case = verify_product_relation(&alg, &a, &b)?;
        t.record(case.corrected, || format!("y{a} * y{b} = {}", case.oracle));
    }
    report.push(t.into_check("random pairs, delta_k convention", Status::Fail, "evaluated without the a+b reduction"));
    Ok(report)
}

/// Linear relations among the y_{a,U} for supp a ⊆ {1,2,3}, a_i ≤ 2.
pub fn linear(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("linear");
    let (alg, _) = relation_algebra(&cfg.scheme);
    let mut signed = Tally::default();
    let mut literal = Tally::default();
    for a in exponent_vectors(3, 2) {
        if a.iter().all(|&e| e == 0) {
            continue;
        }
        for j in 1..=3 {
            let case = verify_linear_relation(&alg, &a, j)?;
            signed.record(case.holds, || format!("a = {:?}, j = {j}", case.a));
            literal.record(case.literal_vanishes, || format!("a = {:?}, j = {j}: sum = {}", case.a, case.literal_sum));
        }
    }
    report.push(signed.into_check(
        "signed relations vanish",
        Status::Fail,
        "for each (j+1)-subset W of supp a: sum over k in W of (-1)^#{w<k} y_(a - delta_(W-k), W-k) = 0",
    ));
    report.push(literal.into_check(
        "unsigned sum over j-subsets",
        Status::Warn,
        "sum over all j-subsets U of supp a of y_(a - delta_U, U)",
    ));
    Ok(report)
}

/// Every block with supp m ⊆ {0,...,4}, m_i ≤ 3, is acyclic except the
/// unit block.
pub fn blocks(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("blocks");
    let p = cfg.p();
    let ms = exponent_vectors(5, 3);
    let results = par_map(&ms, |m| Block::new(m.clone()).complex(p).homology());
    let mut t = Tally::default();
    for (m, h) in ms.iter().zip(results) {
        let b = Block::new(m.clone());
        let expect: Vec<usize> = if b.is_zero() { vec![1] } else { vec![0; h.len()] };
        t.record(h == expect, || format!("block {m:?} homology {h:?}"));
    }
    report.push(t.into_check("block homology", Status::Fail, "zero for m != 0, F_p in degree 0 for m = 0"));
    Ok(report)
}

/// Counts of the cycle basis predicted by the square-zero presentation
/// over a field with a primitive p-th but no p²-th root of unity.
pub fn fifi_presentation_count(p: Prime, bd: Bidegree) -> usize {
    let top = (bd.excess().max(0) + 4) as u32;
    let mut count = 0;
    let mut z_h: Vec<Bidegree> = Vec::new();
    let mut r_h: Vec<Bidegree> = Vec::new();
    for i in 0..=top {
        let tau_i = Bidegree::new(0, -(i as i64));
        if i % p.get() == 0 {
            z_h.push(tau_i);
        } else {
            r_h.push(tau_i);
        }
        z_h.push(Bidegree::new(-1, -1 - i as i64));
    }
    for z in z_h {
        let rest = bd - z;
        count += usize::from(rest == Bidegree::ZERO) + free_bbeta_generators_in(p, rest).len();
    }
    for r in r_h {
        count += free_bbeta_generators_in(p, bd - r).len();
    }
    count
}

/// Generic null space against the constructive Z ∪ U basis, and the
/// scheme-specific presentations.
pub fn kerbasis(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("kerbasis");
    let alg = Algebra::mz(cfg.scheme.clone());
    let p = alg.p();
    let bds = bidegree_range(cfg.dmax, cfg.wmax);
    let results = par_map(&bds, |bd| -> Result<(usize, usize, bool, bool)> {
        let kb = ker_beta_basis(&alg, *bd)?;
        let opposite_ok = if p.is_odd() {
            let src = &kb.basis;
            let tgt = basis(&alg, *bd + Bidegree::BETA);
            let mut ok = true;
            for e in constructive_kernel_opposite_sign(&alg, *bd)? {
                ok &= beta(&alg, &e)?.is_zero();
                let _ = (src, &tgt);
            }
            ok
        } else {
            true
        };
        Ok((kb.generic.len(), kb.constructive.len(), kb.agree(), opposite_ok))
    });
    let mut t = Tally::default();
    let mut opposite = Tally::default();
    let mut fifi = Tally::default();
    let is_fifi = cfg.scheme.tau_beta() == Some(CoeffGen::Eps) && matches!(cfg.scheme.id(), SchemeId::FiniteField { .. });
    for (bd, r) in bds.iter().zip(results) {
        let (generic, constructive, agree, opposite_ok) = r?;
        t.record(agree, || format!("{bd}: generic dim {generic}, constructive count {constructive}"));
        opposite.record(opposite_ok, || format!("{bd}: beta r eta - (-1)^d r y is not a cycle"));
        if is_fifi {
            let count = fifi_presentation_count(p, *bd);
            fifi.record(count == generic, || format!("{bd}: generic dim {generic}, presentation count {count}"));
        }
    }
    report.push(t.into_check(
        "ker beta: generic = Z u U",
        Status::Fail,
        format!("bidegrees with d <= {}, |w| <= {}", cfg.dmax, cfg.wmax),
    ));
    if p.is_odd() {
        report.push(opposite.into_check("U-family with sign -(-1)^(d_r)", Status::Warn, "sign +(-1)^(d_r) is the one used"));
    }
    if is_fifi {
        report.push(fifi.into_check(
            "ker beta dims = square-zero presentation counts",
            Status::Fail,
            "Z_H = {tau^(pk), eps tau^i}, R_H = {tau^i : p does not divide i}",
        ));
    }
    if cfg.scheme.tau_beta().is_some() {
        let mut t = Tally::default();
        let tau = alg.coeff_gen(CoeffGen::Tau)?;
        let bt = beta(&alg, &tau)?;
        let b = cfg.scheme.tau_beta().expect("checked");
        t.record(bt == alg.coeff_gen(b)?, || format!("beta(tau) = {bt}"));
        let tp = alg.pow(&tau, p.get())?;
        let btp = beta(&alg, &tp)?;
        t.record(btp.is_zero(), || format!("beta(tau^{}) = {btp}", p.get()));
        for i in 1..p.get() {
            let ti = alg.pow(&tau, i)?;
            let bti = beta(&alg, &ti)?;
            let expect = alg.mul(&alg.coeff_gen(b)?, &alg.pow(&tau, i - 1)?)?.scale(p.reduce(i as i64));
            t.record(bti == expect, || format!("beta(tau^{i}) = {bti}"));
        }
        report.push(t.into_check("coefficient Bockstein", Status::Fail, format!("beta(tau) = {}, beta(tau^i) = i {} tau^(i-1)", b.name(), b.name())));

        // the lifted generators are cycles
        let ring = cfg.ring()?;
        let model = PullbackModel::new(ring);
        let mut t = Tally::default();
        for idx in crate::bockstein::free_bbeta_generators(p, cfg.dmax.min(12), i64::MAX) {
            for i in 0..p.get() {
                let tag = GeneratorTag::TauPowY { i, index: idx.clone() };
                let ok = matches!(lift_generator(&model, &tag), Ok(Lift::Kernel(_)));
                t.record(ok, || tag.to_string());
            }
        }
        report.push(t.into_check("tau^i y + i beta(tau) tau^(i-1) eta are cycles", Status::Fail, "U-maximal indices of degree <= 12"));
    }
    Ok(report)
}

pub fn z12(cfg: &VerifyConfig) -> Result<SuiteReport> {
    if cfg.scheme.id() != SchemeId::ZHalf {
        let mut r = SuiteReport::new("z12");
        r.push(Check::pass("z12 relations", 0, format!("not applicable to {}", cfg.scheme.name())));
        return Ok(r);
    }
    z12_relation_check(&PullbackModel::new(cfg.ring()?), Z12Bounds::default())
}

/// The formula for |y_{a,U}|.
pub fn y_degree_formula(p: Prime, idx: &BasisIndex) -> Bidegree {
    let mut b = Bidegree::BETA;
    for (i, &e) in idx.a.iter().enumerate() {
        b = b + xi_bidegree(p, i as u32 + 1).scale(e as i64);
    }
    for j in idx.u.iter() {
        b = b + tau_bidegree(p, j);
    }
    b
}

/// |y_{a,U}| against the formula, for every index of degree ≤ dmax.
pub fn degrees(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("degrees");
    let p = cfg.p();
    let alg = Algebra::mz(Scheme::alg_closed(p));
    let mut t = Tally::default();
    for s in steenrod_monomials_to_degree(p, Ambient::Mz, cfg.dmax + 1) {
        let idx = BasisIndex::from_monomial(&s);
        if idx.u.is_empty() {
            continue;
        }
        let formula = y_degree_formula(p, &idx);
        if formula.d > cfg.dmax {
            continue;
        }
        let yv = y(&idx, &alg)?;
        let actual = yv.bidegree()?;
        t.record(actual == Some(formula), || format!("y{idx}: computed {actual:?}, formula {formula}"));
    }
    report.push(t.into_check("|y_(a,U)| formula", Status::Fail, format!("all indices with degree <= {}", cfg.dmax)));
    Ok(report)
}

fn rank_of(alg: &Algebra, target: &BidegreeBasis, elements: &[Element]) -> Result<usize> {
    let vs = elements.iter().map(|e| target.coords(e)).collect::<Result<Vec<_>>>()?;
    Ok(vectors_rank(alg.p(), target.len(), &vs))
}

/// The U-maximal y's are independent and span im β, on the coefficient-free
/// part and, when the coefficient Bockstein vanishes, with coefficients.
pub fn freeness(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("freeness");
    let p = cfg.p();
    let bare = Algebra::mz(Scheme::alg_closed(p));
    let mut t = Tally::default();
    for d in 0..=cfg.dmax {
        for w in 0..=d / 2 {
            let bd = Bidegree::new(d, w);
            let tgt = steenrod_basis(p, bd);
            if tgt.is_empty() {
                continue;
            }
            let src = steenrod_basis(p, bd - Bidegree::BETA);
            let image = beta_matrix(&bare, &src, &tgt)?.rank();
            let ys = free_bbeta_generators_in(p, bd).iter().map(|i| y(i, &bare)).collect::<Result<Vec<_>>>()?;
            let r = rank_of(&bare, &tgt, &ys)?;
            t.record(r == ys.len() && r == image, || format!("{bd}: {} generators, rank {r}, rank of beta {image}", ys.len()));
        }
    }
    report.push(t.into_check(
        "U-maximal y basis of im beta (coefficient-free)",
        Status::Fail,
        format!("degree <= {}", cfg.dmax),
    ));

    if cfg.scheme.tau_beta().is_none() {
        let alg = Algebra::mz(cfg.scheme.clone());
        let bds = bidegree_range(cfg.dmax, cfg.wmax);
        let results = par_map(&bds, |bd| -> Result<(usize, usize, usize)> {
            let tgt = basis(&alg, *bd);
            let src = basis(&alg, *bd - Bidegree::BETA);
            let image = beta_matrix(&alg, &src, &tgt)?.rank();
            let mut gens = Vec::new();
            for c in alg.scheme().coeff_monomials_with_excess(bd.excess()) {
                let rest = *bd - c.bidegree();
                let ce = alg.coeff_monomial(c)?;
                for idx in free_bbeta_generators_in(p, rest) {
                    gens.push(alg.mul(&ce, &y(&idx, &alg)?)?);
                }
            }
            Ok((gens.len(), rank_of(&alg, &tgt, &gens)?, image))
        });
        let mut t = Tally::default();
        for (bd, r) in bds.iter().zip(results) {
            let (n, r, image) = r?;
            t.record(n == r && r == image, || format!("{bd}: {n} generators, rank {r}, rank of beta {image}"));
        }
        report.push(t.into_check(
            "free coefficient-module basis of im beta",
            Status::Fail,
            format!("bidegrees with d <= {}, |w| <= {}", cfg.dmax, cfg.wmax),
        ));
    }
    Ok(report)
}

/// Small generating elements of the pullback for the algebra checks.
fn sample_pullback(model: &PullbackModel) -> Result<Vec<PullbackElement>> {
    let ring = model.ring();
    let scheme = ring.scheme();
    let p = ring.p();
    let mut tags = Vec::new();
    let small = [
        BasisIndex::new(vec![], TauSet::singleton(1)),
        BasisIndex::new(vec![1], TauSet::singleton(1)),
        BasisIndex::new(vec![], TauSet::from_indices([1, 2])),
        BasisIndex::new(vec![], TauSet::singleton(2)),
    ];
    for idx in &small {
        tags.push(GeneratorTag::Y { index: idx.clone() });
    }
    if scheme.tau_beta() == Some(CoeffGen::Rho) {
        tags.push(GeneratorTag::RhoEtaTauY { index: small[0].clone() });
        tags.push(GeneratorTag::RhoEtaTauY { index: small[2].clone() });
    } else if scheme.tau_beta().is_some() {
        tags.push(GeneratorTag::TauPowY { i: 1, index: small[0].clone() });
        tags.push(GeneratorTag::TauPowY { i: p.get() - 1, index: small[3].clone() });
    }
    for m in ring.monomials_to_weight(3).into_iter().filter(|m| !m.is_one()).take(5) {
        tags.push(GeneratorTag::Coeff { monomial: m });
    }
    let mut out = vec![model.one()];
    for tag in tags {
        if let Lift::Kernel(x) = lift_generator(model, &tag)? {
            out.push(x);
        }
    }
    Ok(out)
}

fn degree_of(x: &PullbackElement, ring: &IntCoeffRing) -> Result<Option<Bidegree>> {
    if let Some(b) = x.k().bidegree()? {
        return Ok(Some(b));
    }
    Ok(x.z().terms().next().map(|(m, _)| ring.bidegree(m)))
}

/// p kills the augmentation ideal; componentwise multiplication is
/// graded-commutative and associative.
pub fn pullback(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("pullback");
    let model = PullbackModel::new(cfg.ring()?);
    let alg = model.algebra().clone();
    let p = alg.p();

    let bds = bidegree_range(cfg.dmax, cfg.wmax);
    let results = par_map(&bds, |bd| -> Result<(usize, bool)> {
        let src = basis(&alg, *bd);
        let tgt = basis(&alg, *bd + Bidegree::BETA);
        let bm = beta_matrix(&alg, &src, &tgt)?;
        // stack β with the projection onto the pure coefficient coordinates
        let coeff_rows: Vec<usize> = (0..src.len()).filter(|&i| src.monomials[i].steen.is_one()).collect();
        let mut stacked = FpMatrix::zero(p, tgt.len() + coeff_rows.len(), src.len());
        for i in 0..tgt.len() {
            for &(j, v) in bm.row(i) {
                stacked.set(i, j, v);
            }
        }
        for (r, &i) in coeff_rows.iter().enumerate() {
            stacked.set(tgt.len() + r, i, 1);
        }
        let ideal = stacked.kernel_basis();
        let mut ok = true;
        for v in ideal.vectors() {
            let k = src.element(&alg, v);
            let x = model.element(IntElement::zero(), k)?;
            ok &= model.scale(&x, p.get() as i128) == model.zero();
        }
        Ok((ideal.len(), ok))
    });
    let mut t = Tally::default();
    let mut total = 0;
    for (bd, r) in bds.iter().zip(results) {
        let (n, ok) = r?;
        total += n;
        t.record(ok, || format!("{bd}: p x != 0 for some x in the augmentation ideal"));
    }
    report.push(t.into_check(
        "p annihilates the augmentation ideal",
        Status::Fail,
        format!("{total} basis elements over bidegrees with d <= {}, |w| <= {}", cfg.dmax, cfg.wmax),
    ));

    let ring = model.ring();
    let mut t = Tally::default();
    for m in ring.monomials_to_weight(cfg.wmax.max(0) as u32) {
        let q = ring.q_map(&alg, &ring.monomial(m, 1)?)?;
        let bq = beta(&alg, &q)?;
        t.record(bq.is_zero(), || format!("beta(q({m})) = {bq}"));
    }
    report.push(t.into_check("q lands in ker beta", Status::Fail, format!("integral monomials of weight >= -{}", cfg.wmax)));

    let xs = sample_pullback(&model)?;
    let mut comm = Tally::default();
    for a in &xs {
        for b in &xs {
            let ab = model.mul(a, b)?;
            let ba = model.mul(b, a)?;
            let odd = match (degree_of(a, ring)?, degree_of(b, ring)?) {
                (Some(x), Some(y)) => x.is_odd() && y.is_odd(),
                _ => false,
            };
            let expect = if odd { model.scale(&ba, -1) } else { ba };
            comm.record(ab == expect, || format!("({}) * ({})", a.k(), b.k()));
        }
    }
    report.push(comm.into_check("graded commutativity", Status::Fail, format!("all pairs of {} sample elements", xs.len())));

    let mut assoc = Tally::default();
    for a in &xs {
        for b in &xs {
            let ab = model.mul(a, b)?;
            for c in &xs {
                let lhs = model.mul(&ab, c)?;
                let rhs = model.mul(a, &model.mul(b, c)?)?;
                assoc.record(lhs == rhs, || format!("(({}) ({})) ({})", a.k(), b.k(), c.k()));
            }
        }
    }
    report.push(assoc.into_check("associativity", Status::Fail, format!("all triples of {} sample elements", xs.len())));

    if cfg.scheme.id() == SchemeId::AlgClosed {
        let reducer = AlgClosedReducer::new(model.clone())?;
        let mut t = Tally::default();
        let gens: Vec<BasisIndex> = crate::bockstein::free_bbeta_generators(p, cfg.dmax.min(25), i64::MAX);
        for (i, a) in gens.iter().enumerate() {
            for b in &gens[i..] {
                if a.bidegree(p).d + b.bidegree(p).d - 2 > cfg.dmax.min(25) {
                    continue;
                }
                let e = YExpr::symbol(a.clone()).mul(&YExpr::symbol(b.clone()));
                t.record(reducer.round_trip(&e)?, || format!("y{a} * y{b}"));
            }
        }
        report.push(t.into_check(
            "normal form is a ring map to the pullback",
            Status::Fail,
            "pairs of free y-symbols with product degree <= 25",
        ));
    }
    Ok(report)
}

/// The maps from the MZ form into the dual form are injective per
/// bidegree and multiplicative.
pub fn embedding(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("embedding");
    let mz = Algebra::mz(cfg.scheme.clone());
    let dual = Algebra::dual(cfg.scheme.clone());
    let conj = Conjugation::new(&dual)?;
    let bds = bidegree_range(cfg.dmax, cfg.wmax);
    let results = par_map(&bds, |bd| -> Result<[bool; 3]> {
        let src = basis(&mz, *bd);
        let tgt = basis(&dual, *bd);
        let mut conj_images = Vec::with_capacity(src.len());
        let mut left_images = Vec::with_capacity(src.len());
        let mut compatible = true;
        for m in &src.monomials {
            let x = mz.monomial(m.clone());
            let c = MzEmbedding::Conjugate.apply(&conj, &x)?;
            let l = MzEmbedding::LeftUnit.apply(&conj, &x)?;
            compatible &= conj.apply(&l)? == c;
            conj_images.push(c);
            left_images.push(l);
        }
        let n = src.len();
        Ok([rank_of(&dual, &tgt, &conj_images)? == n, rank_of(&dual, &tgt, &left_images)? == n, compatible])
    });
    let names = ["injective: generators to conjugates", "injective: coefficients to left units", "chi of the left-unit map is the conjugate map"];
    let mut tallies: Vec<Tally> = (0..3).map(|_| Tally::default()).collect();
    for (bd, r) in bds.iter().zip(results) {
        let r = r?;
        for i in 0..3 {
            tallies[i].record(r[i], || format!("{bd}"));
        }
    }
    for (t, name) in tallies.into_iter().zip(names) {
        report.push(t.into_check(name, Status::Fail, format!("bidegrees with d <= {}, |w| <= {}", cfg.dmax, cfg.wmax)));
    }

    // multiplicativity on generator pairs, and compatibility with β
    let mut gens: Vec<Element> = Vec::new();
    for g in cfg.scheme.gens() {
        gens.push(mz.coeff_gen(*g)?);
    }
    for j in 1..=3u32 {
        if xi_bidegree(cfg.p(), j).d <= cfg.dmax.max(2) {
            gens.push(mz.xi(j)?);
        }
        if tau_bidegree(cfg.p(), j).d <= cfg.dmax.max(3) {
            gens.push(mz.tau(j)?);
        }
    }
    let mut mult = Tally::default();
    let mut commutes = Tally::default();
    for a in &gens {
        for b in &gens {
            let ab = mz.mul(a, b)?;
            for e in [MzEmbedding::Conjugate, MzEmbedding::LeftUnit] {
                let lhs = e.apply(&conj, &ab)?;
                let rhs = dual.mul(&e.apply(&conj, a)?, &e.apply(&conj, b)?)?;
                mult.record(lhs == rhs, || format!("{e:?}: ({a}) * ({b})"));
            }
            let lhs = MzEmbedding::LeftUnit.apply(&conj, &beta(&mz, &ab)?)?;
            let rhs = beta(&dual, &MzEmbedding::LeftUnit.apply(&conj, &ab)?)?;
            commutes.record(lhs == rhs, || format!("beta on ({a}) * ({b})"));
        }
    }
    report.push(mult.into_check("embeddings are multiplicative", Status::Fail, "pairs of generators, including tau_j^2"));
    report.push(commutes.into_check("left-unit map commutes with beta", Status::Fail, "pairs of generators"));
    let _ = (CoeffMonomial::ONE, SteenrodMonomial::one());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(id: SchemeId, p: u32, dmax: i64) -> VerifyConfig {
        VerifyConfig::new(Scheme::new(id, Prime::new(p).unwrap()).unwrap(), dmax, 2)
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("beta3".parse::<Suite>().is_err());
    }

    #[test]
    fn all_suites_pass_or_warn_at_small_bounds() {
        for (id, p) in [(SchemeId::RealP2, 2), (SchemeId::FiniteField { q: 7 }, 3), (SchemeId::ZHalf, 2)] {
            for r in run(Suite::All, &cfg(id, p, 8)).unwrap() {
                assert!(r.first_failure().is_none(), "{id} {}: {:?}", r.suite, r.first_failure());
            }
        }
    }

    #[test]
    fn corrupted_conjugation_fails() {
        let mut c = cfg(SchemeId::AlgClosed, 2, 10);
        c.chi_random_pairs = 20;
        assert_eq!(chi(&c).unwrap().status(), Status::Pass);
        c.corrupt_chi_tau2 = true;
        let r = chi(&c).unwrap();
        assert_eq!(r.status(), Status::Fail);
        assert!(r.first_failure().unwrap().counterexample.as_deref().unwrap().contains("tau2"));
    }

    #[test]
    fn shifted_product_convention_is_a_warning() {
        let mut c = cfg(SchemeId::AlgClosed, 3, 8);
        c.product_random_pairs = 50;
        let r = products(&c).unwrap();
        assert_eq!(r.status(), Status::Warn);
        assert!(r.checks.iter().any(|x| x.status == Status::Warn && x.counterexample.is_some()));
    }

    #[test]
    fn fifi_counts_in_low_degrees() {
        let p = Prime::new(3).unwrap();
        // 1, τ^3, nothing (τ is not a cycle), ε
        assert_eq!(fifi_presentation_count(p, Bidegree::ZERO), 1);
        assert_eq!(fifi_presentation_count(p, Bidegree::new(0, -3)), 1);
        assert_eq!(fifi_presentation_count(p, Bidegree::new(0, -1)), 0);
        assert_eq!(fifi_presentation_count(p, Bidegree::new(-1, -1)), 1);
    }
}
