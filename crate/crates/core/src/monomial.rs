//! Normalized monomials: coefficient part, ξ-exponents and a τ-index set.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bidegree::Bidegree;
use crate::prime::Prime;

/// Largest τ/ξ index a monomial can carry.
pub const MAX_INDEX: u32 = 63;

/// Generators of the mod-p coefficient rings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoeffGen {
    Tau,
    Rho,
    Eps,
    Theta,
}

impl CoeffGen {
    pub const ALL: [CoeffGen; 4] = [CoeffGen::Tau, CoeffGen::Rho, CoeffGen::Eps, CoeffGen::Theta];

    pub fn bidegree(self) -> Bidegree {
        match self {
            CoeffGen::Tau => Bidegree::new(0, -1),
            CoeffGen::Rho | CoeffGen::Eps => Bidegree::new(-1, -1),
            CoeffGen::Theta => Bidegree::new(0, -2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CoeffGen::Tau => "tau",
            CoeffGen::Rho => "rho",
            CoeffGen::Eps => "eps",
            CoeffGen::Theta => "theta",
        }
    }

    pub fn is_odd(self) -> bool {
        self.bidegree().is_odd()
    }
}

/// Exponents of τ, ρ, ε, θ. The canonical word order is τ^a ρ^b ε^c θ^e.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct CoeffMonomial {
    pub tau: u32,
    pub rho: u32,
    pub eps: u32,
    pub theta: u32,
}

impl CoeffMonomial {
    pub const ONE: CoeffMonomial = CoeffMonomial { tau: 0, rho: 0, eps: 0, theta: 0 };

    pub fn gen(g: CoeffGen) -> Self {
        Self::ONE.with(g, 1)
    }

    pub fn tau_pow(n: u32) -> Self {
        CoeffMonomial { tau: n, ..Self::ONE }
    }

    pub fn exponent(&self, g: CoeffGen) -> u32 {
        match g {
            CoeffGen::Tau => self.tau,
            CoeffGen::Rho => self.rho,
            CoeffGen::Eps => self.eps,
            CoeffGen::Theta => self.theta,
        }
    }

    pub fn with(mut self, g: CoeffGen, e: u32) -> Self {
        match g {
            CoeffGen::Tau => self.tau = e,
            CoeffGen::Rho => self.rho = e,
            CoeffGen::Eps => self.eps = e,
            CoeffGen::Theta => self.theta = e,
        }
        self
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }

    pub fn bidegree(&self) -> Bidegree {
        CoeffGen::ALL
            .iter()
            .fold(Bidegree::ZERO, |acc, g| acc + g.bidegree().scale(self.exponent(*g) as i64))
    }

    /// Raw product in the free graded-commutative monoid: returns the
    /// exponent sum and whether reordering into canonical order is odd.
    pub fn raw_mul(&self, other: &CoeffMonomial) -> (bool, CoeffMonomial) {
        // Only ρ and ε are odd; other.ρ must pass self.ε.
        let negative = (other.rho as u64 * self.eps as u64) % 2 == 1;
        (
            negative,
            CoeffMonomial {
                tau: self.tau + other.tau,
                rho: self.rho + other.rho,
                eps: self.eps + other.eps,
                theta: self.theta + other.theta,
            },
        )
    }
}

/// A finite set of τ-indices, stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct TauSet(pub u64);

impl TauSet {
    pub const EMPTY: TauSet = TauSet(0);

    pub fn from_indices<I: IntoIterator<Item = u32>>(it: I) -> Self {
        let mut s = TauSet::EMPTY;
        for j in it {
            s.insert(j);
        }
        s
    }

    pub fn singleton(j: u32) -> Self {
        Self::from_indices([j])
    }

    #[inline]
    pub fn contains(self, j: u32) -> bool {
        j <= MAX_INDEX && self.0 >> j & 1 == 1
    }

    pub fn insert(&mut self, j: u32) {
        assert!(j <= MAX_INDEX, "tau index {j} too large");
        self.0 |= 1 << j;
    }

    pub fn remove(&mut self, j: u32) {
        if j <= MAX_INDEX {
            self.0 &= !(1 << j);
        }
    }

    pub fn without(mut self, j: u32) -> Self {
        self.remove(j);
        self
    }

    pub fn with(mut self, j: u32) -> Self {
        self.insert(j);
        self
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn max(self) -> Option<u32> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros())
    }

    pub fn min(self) -> Option<u32> {
        (self.0 != 0).then(|| self.0.trailing_zeros())
    }

    /// Number of elements strictly below `j`.
    pub fn count_below(self, j: u32) -> u32 {
        if j > MAX_INDEX {
            return self.len();
        }
        (self.0 & ((1u64 << j) - 1)).count_ones()
    }

    /// Number of elements strictly above `j`.
    pub fn count_above(self, j: u32) -> u32 {
        if j >= MAX_INDEX {
            return 0;
        }
        (self.0 >> (j + 1)).count_ones()
    }

    pub fn union(self, o: TauSet) -> TauSet {
        TauSet(self.0 | o.0)
    }

    pub fn intersection(self, o: TauSet) -> TauSet {
        TauSet(self.0 & o.0)
    }

    pub fn symmetric_difference(self, o: TauSet) -> TauSet {
        TauSet(self.0 ^ o.0)
    }

    pub fn difference(self, o: TauSet) -> TauSet {
        TauSet(self.0 & !o.0)
    }

    pub fn is_disjoint(self, o: TauSet) -> bool {
        self.0 & o.0 == 0
    }

    pub fn is_subset(self, o: TauSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = u32> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let j = bits.trailing_zeros();
                bits &= bits - 1;
                Some(j)
            }
        })
    }

    /// Sign of the shuffle taking `self` followed by `other` (each in
    /// increasing order) to the increasing order of the union. `true`
    /// means odd. Sets must be disjoint.
    pub fn shuffle_sign(self, other: TauSet) -> bool {
        debug_assert!(self.is_disjoint(other));
        let inversions: u32 = other.iter().map(|t| self.count_above(t)).sum();
        inversions % 2 == 1
    }

    /// All subsets of `self` with exactly `k` elements, in increasing
    /// bitmask order.
    pub fn subsets_of_size(self, k: u32) -> Vec<TauSet> {
        let elems: Vec<u32> = self.iter().collect();
        let mut out = Vec::new();
        if k as usize > elems.len() {
            return out;
        }
        let n = elems.len();
        for mask in 0u64..(1u64 << n) {
            if mask.count_ones() == k {
                out.push(TauSet::from_indices(
                    (0..n).filter(|i| mask >> i & 1 == 1).map(|i| elems[i]),
                ));
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for TauSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, j) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, "}}")
    }
}

/// `∏ ξ_j^{a_j} ∏_{j∈U} τ_j` with the τ's in increasing index order.
///
/// `xi[j-1]` is the exponent of ξ_j; trailing zeros are trimmed so that
/// equal monomials compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct SteenrodMonomial {
    pub xi: Vec<u32>,
    pub tau: TauSet,
}

impl SteenrodMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new(mut xi: Vec<u32>, tau: TauSet) -> Self {
        while xi.last() == Some(&0) {
            xi.pop();
        }
        SteenrodMonomial { xi, tau }
    }

    pub fn xi_exponent(&self, j: u32) -> u32 {
        if j == 0 {
            return 0;
        }
        self.xi.get(j as usize - 1).copied().unwrap_or(0)
    }

    /// Multiply in ξ_j^e (ξ_0 is the unit).
    pub fn add_xi(&mut self, j: u32, e: u32) {
        if j == 0 || e == 0 {
            return;
        }
        let idx = j as usize - 1;
        if self.xi.len() <= idx {
            self.xi.resize(idx + 1, 0);
        }
        self.xi[idx] += e;
    }

    pub fn xi_mul(&self, other: &SteenrodMonomial) -> Vec<u32> {
        let n = self.xi.len().max(other.xi.len());
        (0..n)
            .map(|i| self.xi.get(i).copied().unwrap_or(0) + other.xi.get(i).copied().unwrap_or(0))
            .collect()
    }

    pub fn is_one(&self) -> bool {
        self.xi.is_empty() && self.tau.is_empty()
    }

    pub fn max_xi_index(&self) -> u32 {
        self.xi.len() as u32
    }

    pub fn bidegree(&self, p: Prime) -> Bidegree {
        let mut b = Bidegree::ZERO;
        for (i, &e) in self.xi.iter().enumerate() {
            b = b + xi_bidegree(p, i as u32 + 1).scale(e as i64);
        }
        for j in self.tau.iter() {
            b = b + tau_bidegree(p, j);
        }
        b
    }
}

/// `|ξ_j| = (p^j - 1)(2, 1)`.
pub fn xi_bidegree(p: Prime, j: u32) -> Bidegree {
    let w = p.pow(j) - 1;
    Bidegree::new(2 * w, w)
}

/// `|τ_j| = (2p^j - 1, p^j - 1)`.
pub fn tau_bidegree(p: Prime, j: u32) -> Bidegree {
    let q = p.pow(j);
    Bidegree::new(2 * q - 1, q - 1)
}

/// A full normalized monomial: coefficient part times Steenrod part.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Monomial {
    pub coeff: CoeffMonomial,
    pub steen: SteenrodMonomial,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new(coeff: CoeffMonomial, steen: SteenrodMonomial) -> Self {
        Monomial { coeff, steen }
    }

    pub fn bidegree(&self, p: Prime) -> Bidegree {
        self.coeff.bidegree() + self.steen.bidegree(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_bidegrees() {
        let p2 = Prime::TWO;
        let p3 = Prime::THREE;
        assert_eq!(xi_bidegree(p2, 1), Bidegree::new(2, 1));
        assert_eq!(tau_bidegree(p3, 1), Bidegree::new(5, 2));
        assert_eq!(tau_bidegree(p2, 0), Bidegree::new(1, 0));
        let rho_tau = CoeffMonomial { rho: 1, tau: 1, ..CoeffMonomial::ONE };
        assert_eq!(rho_tau.bidegree(), Bidegree::new(-1, -2));
    }

    #[test]
    fn tau_set_ops() {
        let s = TauSet::from_indices([1, 3, 4]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.count_below(4), 2);
        assert_eq!(s.count_above(1), 2);
        assert_eq!(s.max(), Some(4));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 3, 4]);
        assert_eq!(s.to_string(), "{1,3,4}");
        assert_eq!(s.subsets_of_size(2).len(), 3);
        // (2) then (1,3): one inversion
        assert!(TauSet::singleton(2).shuffle_sign(TauSet::from_indices([1, 3])));
        assert!(!TauSet::singleton(1).shuffle_sign(TauSet::from_indices([2, 3])));
    }

    #[test]
    fn trailing_zero_xi_trimmed() {
        let a = SteenrodMonomial::new(vec![1, 0, 0], TauSet::EMPTY);
        let b = SteenrodMonomial::new(vec![1], TauSet::EMPTY);
        assert_eq!(a, b);
    }
}
