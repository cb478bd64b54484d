//! Formal polynomials in the symbols y_{a,U} over ℤ_p[τ], and their
//! reduction to the free basis {y_{a,U} : max supp a ≤ max U}.

use std::collections::BTreeMap;
use std::fmt;

use crate::bockstein::y;
use crate::element::Element;
use crate::error::{AlgebraError, Result};
use crate::monomial::TauSet;
use crate::prime::Prime;
use crate::scheme::SchemeId;
use crate::steenrod::BasisIndex;

use super::pullback::{PullbackElement, PullbackModel};
use super::relations::{product_terms, DeltaConvention};
use super::{IntElement, IntMonomial};

/// A term τ^n y_{a1,U1} ⋯ y_{ar,Ur}; the word is ordered because the
/// symbols of odd degree anticommute.
pub type YWord = (u32, Vec<BasisIndex>);

/// Σ c · τ^n · (word in y-symbols), coefficients as signed integers.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct YExpr {
    pub terms: BTreeMap<YWord, i128>,
}

impl YExpr {
    pub fn zero() -> Self {
        YExpr::default()
    }

    pub fn tau_pow(n: u32) -> Self {
        Self::term(1, n, Vec::new())
    }

    pub fn symbol(idx: BasisIndex) -> Self {
        Self::term(1, 0, vec![idx])
    }

    pub fn term(c: i128, n: u32, word: Vec<BasisIndex>) -> Self {
        let mut e = YExpr::zero();
        e.add_term(c, (n, word));
        e
    }

    fn add_term(&mut self, c: i128, w: YWord) {
        let v = self.terms.entry(w.clone()).or_insert(0);
        *v += c;
        if *v == 0 {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, other: &YExpr) -> YExpr {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*c, w.clone());
        }
        out
    }

    pub fn scale(&self, n: i128) -> YExpr {
        let mut out = YExpr::zero();
        for (w, c) in &self.terms {
            out.add_term(c * n, w.clone());
        }
        out
    }

    /// Formal product (concatenation of words).
    pub fn mul(&self, other: &YExpr) -> YExpr {
        let mut out = YExpr::zero();
        for ((n, w), c) in &self.terms {
            for ((m, v), d) in &other.terms {
                out.add_term(c * d, (n + m, [w.clone(), v.clone()].concat()));
            }
        }
        out
    }

    /// The part with no y-symbols, i.e. the image under the augmentation.
    pub fn augmentation(&self) -> YExpr {
        let mut out = YExpr::zero();
        for ((n, w), c) in &self.terms {
            if w.is_empty() {
                out.add_term(*c, (*n, Vec::new()));
            }
        }
        out
    }
}

impl fmt::Display for YExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((n, w), c)| {
                let mut factors = vec![c.to_string()];
                if *n > 0 {
                    factors.push(format!("tau^{n}"));
                }
                factors.extend(w.iter().map(|i| format!("y{i}")));
                factors.join("*")
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Reduced form: an integral constant plus an F_p-combination of
/// τ^n y_{a,U} with (a,U) U-maximal.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NormalForm {
    pub constant: IntElement,
    pub linear: BTreeMap<(u32, BasisIndex), u32>,
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (m, c) in self.constant.terms() {
            parts.push(if m.is_one() { c.to_string() } else { format!("{c}*{m}") });
        }
        for ((n, idx), c) in &self.linear {
            let t = if *n > 0 { format!("tau^{n}*") } else { String::new() };
            parts.push(format!("{c}*{t}y{idx}"));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

type Linear = BTreeMap<(u32, BasisIndex), u32>;

fn add_linear(p: Prime, acc: &mut Linear, key: (u32, BasisIndex), c: u32) {
    if key.1.u.is_empty() || c == 0 {
        return;
    }
    let v = acc.entry(key.clone()).or_insert(0);
    *v = p.add(*v, c);
    if *v == 0 {
        acc.remove(&key);
    }
}

/// Rewrites y_{a,U} in terms of U-maximal symbols using the linear
/// relation for W = U ∪ {max supp a}.
fn reduce_symbol(p: Prime, idx: &BasisIndex) -> Vec<(u32, BasisIndex)> {
    if idx.u.is_empty() {
        return Vec::new();
    }
    if idx.is_u_maximal() {
        return vec![(1, idx.clone())];
    }
    let m = idx.max_supp();
    let w = idx.u.with(m);
    // c = a + δ_U, so that every W-k term is y_{c-δ_{W-k}, W-k}.
    let c = idx.u.iter().fold(BasisIndex::new(idx.a.clone(), TauSet::EMPTY), |acc, j| acc.plus_delta(j));
    let sign = |k: u32| w.count_below(k) % 2 == 1;
    // s_m y_{a,U} = -Σ_{k∈U} s_k y_{c-δ_{W-k}, W-k}
    let inv = p.sign(sign(m));
    let mut out = Vec::new();
    for k in idx.u.iter() {
        let s = w.without(k);
        let term = s.iter().try_fold(c.clone(), |acc, i| acc.minus_delta(i)).expect("W inside supp c").with_u(s);
        debug_assert!(term.is_u_maximal());
        out.push((p.neg(p.mul(inv, p.sign(sign(k)))), term));
    }
    out
}

/// Reduces formal expressions for an algebraically closed base.
#[derive(Debug, Clone)]
pub struct AlgClosedReducer {
    model: PullbackModel,
}

impl AlgClosedReducer {
    pub fn new(model: PullbackModel) -> Result<Self> {
        if model.ring().scheme().id() != SchemeId::AlgClosed {
            return Err(AlgebraError::TagMismatch {
                tag: "algebraically closed presentation".into(),
                scheme: model.ring().scheme().name(),
            });
        }
        Ok(AlgClosedReducer { model })
    }

    pub fn model(&self) -> &PullbackModel {
        &self.model
    }

    fn p(&self) -> Prime {
        self.model.ring().p()
    }

    /// Products via the product relations, coefficients of y-terms mod p,
    /// then the linear relations.
    pub fn reduce(&self, expr: &YExpr) -> NormalForm {
        let p = self.p();
        let ring = self.model.ring();
        let mut nf = NormalForm::default();
        for ((n, word), c) in &expr.terms {
            if word.is_empty() {
                ring.add_term(&mut nf.constant, IntMonomial::tau_pow(*n), *c);
                continue;
            }
            let c = p.reduce((c.rem_euclid(p.get() as i128)) as i64);
            let mut cur: Linear = BTreeMap::new();
            add_linear(p, &mut cur, (*n, word[0].clone()), c);
            for f in &word[1..] {
                let mut next = BTreeMap::new();
                for ((m, idx), d) in &cur {
                    for t in product_terms(p, idx, f, DeltaConvention::Corrected) {
                        add_linear(p, &mut next, (m + t.tau, t.index), p.mul(*d, p.sign(t.negative)));
                    }
                }
                cur = next;
            }
            for ((m, idx), d) in cur {
                for (s, b) in reduce_symbol(p, &idx) {
                    add_linear(p, &mut nf.linear, (m, b), p.mul(d, s));
                }
            }
        }
        nf
    }

    /// Image of a formal expression in the pullback model, multiplying
    /// the lifted factors there.
    pub fn embed(&self, expr: &YExpr) -> Result<PullbackElement> {
        let m = &self.model;
        let mut acc = m.zero();
        for ((n, word), c) in &expr.terms {
            let mut t = m.coefficient(m.ring().monomial(IntMonomial::tau_pow(*n), 1)?)?;
            for idx in word {
                let s = m.element(IntElement::zero(), y(idx, m.algebra())?)?;
                t = m.mul(&t, &s)?;
            }
            acc = m.add(&acc, &m.scale(&t, *c));
        }
        Ok(acc)
    }

    /// Image of a normal form in the pullback model.
    pub fn embed_normal(&self, nf: &NormalForm) -> Result<PullbackElement> {
        let m = &self.model;
        let alg = m.algebra();
        let mut k: Element = m.ring().q_map(alg, &nf.constant)?;
        for ((n, idx), c) in &nf.linear {
            let t = alg.mul(&alg.coeff_monomial(crate::monomial::CoeffMonomial::tau_pow(*n))?, &y(idx, alg)?)?;
            k.add_scaled(&t, *c);
        }
        m.element(nf.constant.clone(), k)
    }

    /// reduce(expr) and expr have the same image in the pullback model.
    pub fn round_trip(&self, expr: &YExpr) -> Result<bool> {
        Ok(self.embed(expr)? == self.embed_normal(&self.reduce(expr))?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integral::IntCoeffRing;
    use crate::scheme::Scheme;

    fn reducer(p: u32) -> AlgClosedReducer {
        let ring = IntCoeffRing::new(Scheme::alg_closed(Prime::new(p).unwrap()));
        AlgClosedReducer::new(PullbackModel::new(ring)).unwrap()
    }

    fn idx(a: &[u32], u: &[u32]) -> BasisIndex {
        BasisIndex::new(a.to_vec(), TauSet::from_indices(u.iter().copied()))
    }

    #[test]
    fn square_of_y01() {
        let r = reducer(2);
        let y1 = YExpr::symbol(idx(&[], &[1]));
        let nf = r.reduce(&y1.mul(&y1));
        assert_eq!(nf.to_string(), "1*y(a=[1], U={1})");
        assert!(r.round_trip(&y1.mul(&y1)).unwrap());
    }

    #[test]
    fn p_kills_symbols() {
        let r = reducer(2);
        let e = YExpr::symbol(idx(&[], &[1])).scale(2);
        assert_eq!(r.reduce(&e), NormalForm::default());
    }

    #[test]
    fn augmentation() {
        let e = YExpr::symbol(idx(&[], &[1])).add(&YExpr::tau_pow(3));
        assert_eq!(e.augmentation(), YExpr::tau_pow(3));
        assert_eq!(YExpr::symbol(idx(&[2], &[1])).augmentation(), YExpr::zero());
    }

    #[test]
    fn non_maximal_symbols_reduce() {
        for p in [2, 3] {
            let r = reducer(p);
            for i in [idx(&[0, 1], &[1]), idx(&[1, 2, 1], &[1, 2]), idx(&[0, 0, 1], &[2])] {
                let e = YExpr::symbol(i).add(&YExpr::tau_pow(2).scale(5));
                assert!(r.round_trip(&e).unwrap());
                assert!(r.reduce(&e).linear.keys().all(|(_, b)| b.is_u_maximal()));
            }
        }
    }

    #[test]
    fn triple_products_round_trip() {
        let r = reducer(3);
        let e = YExpr::symbol(idx(&[], &[1]))
            .mul(&YExpr::symbol(idx(&[1], &[2])))
            .mul(&YExpr::symbol(idx(&[], &[1, 3]).clone()).add(&YExpr::tau_pow(1)));
        assert!(r.round_trip(&e).unwrap());
    }
}
