//! The Bockstein β, its homology per bidegree, block complexes and kernel
//! bases.

use serde::{Deserialize, Serialize};

use crate::bidegree::Bidegree;
use crate::element::{Algebra, Ambient, Element};
use crate::error::{AlgebraError, Result};
use crate::linalg::{FpBasis, FpMatrix};
use crate::monomial::{CoeffMonomial, Monomial, SteenrodMonomial, TauSet};
use crate::prime::Prime;
use crate::scheme::Scheme;
use crate::steenrod::{basis, eta, steenrod_monomials_in, steenrod_monomials_to_degree, BasisIndex, BidegreeBasis};

/// β on a bare Steenrod monomial:
/// β(ξ^a τ_U) = Σ_{k∈U} (-1)^{#{u∈U : u<k}} ξ^a ξ_k τ_{U-k}, with ξ_0 = 1.
pub fn beta_steenrod(p: Prime, s: &SteenrodMonomial) -> Vec<(u32, SteenrodMonomial)> {
    s.tau
        .iter()
        .map(|k| {
            let mut t = SteenrodMonomial::new(s.xi.clone(), s.tau.without(k));
            t.add_xi(k, 1);
            (p.sign(s.tau.count_below(k) % 2 == 1), t)
        })
        .collect()
}

/// β on one monomial, added into `acc` with multiplier `scalar`.
fn beta_monomial_into(alg: &Algebra, m: &Monomial, scalar: u32, acc: &mut Element) {
    let p = alg.p();
    if alg.ambient() == Ambient::Mz {
        if let Some((t, c)) = alg.scheme().coeff_beta(&m.coeff) {
            acc.add_term(Monomial::new(c, m.steen.clone()), p.mul(scalar, t));
        }
    }
    let odd = m.coeff.bidegree().is_odd();
    for (t, s) in beta_steenrod(p, &m.steen) {
        let t = if odd { p.neg(t) } else { t };
        acc.add_term(Monomial::new(m.coeff, s), p.mul(scalar, t));
    }
}

/// β on a monomial, without a homogeneity check.
pub fn beta_monomial(alg: &Algebra, m: &Monomial) -> Element {
    let mut acc = alg.zero();
    beta_monomial_into(alg, m, 1, &mut acc);
    acc
}

/// The Bockstein, extended from generators as a derivation with Koszul
/// sign. Coefficients carry the scheme's Bockstein in the MZ form and
/// none in the dual form.
pub fn beta(alg: &Algebra, x: &Element) -> Result<Element> {
    if x.p() != alg.p() {
        return Err(AlgebraError::PrimeMismatch);
    }
    if x.ambient() != alg.ambient() {
        return Err(AlgebraError::AmbientMismatch);
    }
    x.bidegree()?;
    let mut acc = alg.zero();
    for (m, c) in x.terms() {
        beta_monomial_into(alg, m, c, &mut acc);
    }
    Ok(acc)
}

/// y_{a,U} = β η_{a,U}.
pub fn y(idx: &BasisIndex, alg: &Algebra) -> Result<Element> {
    beta(alg, &eta(idx, alg)?)
}

/// Matrix of β from `src` to `tgt`; column j is β of the j-th source
/// monomial.
pub fn beta_matrix(alg: &Algebra, src: &BidegreeBasis, tgt: &BidegreeBasis) -> Result<FpMatrix> {
    let mut mat = FpMatrix::zero(alg.p(), tgt.len(), src.len());
    for (j, m) in src.monomials.iter().enumerate() {
        let b = beta_monomial(alg, m);
        for (t, c) in b.terms() {
            let i = tgt
                .position(t)
                .ok_or_else(|| AlgebraError::Inhomogeneous(tgt.bidegree, t.bidegree(alg.p())))?;
            mat.set(i, j, c);
        }
    }
    Ok(mat)
}

/// A block m: the span of the Steenrod monomials with
/// a_{i+1} + [i+1 ∈ U] = m_i. β preserves blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Block {
    /// `m[i]`, trailing zeros trimmed.
    pub m: Vec<u32>,
}

impl Block {
    pub fn new(mut m: Vec<u32>) -> Self {
        while m.last() == Some(&0) {
            m.pop();
        }
        Block { m }
    }

    /// The block of a Steenrod monomial of the MZ form.
    pub fn of(s: &SteenrodMonomial) -> Self {
        let n = s.xi.len().max(s.tau.max().map_or(0, |j| j as usize));
        let m = (0..n)
            .map(|i| s.xi_exponent(i as u32 + 1) + s.tau.contains(i as u32 + 1) as u32)
            .collect();
        Block::new(m)
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_empty()
    }

    /// The finite chain complex of the block, graded by the number of τ's.
    pub fn complex(&self, p: Prime) -> BlockComplex {
        let support = TauSet::from_indices(self.m.iter().enumerate().filter(|e| *e.1 > 0).map(|(i, _)| i as u32 + 1));
        let top = support.len() as usize;
        let mut chains: Vec<Vec<SteenrodMonomial>> = vec![Vec::new(); top + 1];
        for k in 0..=support.len() {
            for u in support.subsets_of_size(k) {
                let a = self
                    .m
                    .iter()
                    .enumerate()
                    .map(|(i, &mi)| mi - u.contains(i as u32 + 1) as u32)
                    .collect();
                chains[k as usize].push(SteenrodMonomial::new(a, u));
            }
            chains[k as usize].sort();
        }
        let mut differentials = Vec::new();
        for k in 1..=top {
            let mut mat = FpMatrix::zero(p, chains[k - 1].len(), chains[k].len());
            for (j, s) in chains[k].iter().enumerate() {
                for (c, t) in beta_steenrod(p, s) {
                    let i = chains[k - 1].binary_search(&t).expect("β preserves blocks");
                    mat.set(i, j, c);
                }
            }
            differentials.push(mat);
        }
        BlockComplex { p, block: self.clone(), chains, differentials }
    }
}

/// `chains[k]` holds the monomials with k τ's; `differentials[k-1]` is
/// β: C_k → C_{k-1}.
#[derive(Debug, Clone)]
pub struct BlockComplex {
    pub p: Prime,
    pub block: Block,
    pub chains: Vec<Vec<SteenrodMonomial>>,
    pub differentials: Vec<FpMatrix>,
}

impl BlockComplex {
    pub fn homology(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.differentials.iter().map(FpMatrix::rank).collect();
        (0..self.chains.len())
            .map(|k| {
                let out = if k == 0 { 0 } else { ranks[k - 1] };
                let inc = ranks.get(k).copied().unwrap_or(0);
                self.chains[k].len() - out - inc
            })
            .collect()
    }
}

pub fn block_homology(b: &Block, p: Prime) -> Vec<usize> {
    b.complex(p).homology()
}

/// The coefficient-free basis of X = F_p[ξ_j, τ_j]/(relations) in one
/// bidegree, as monomials with trivial coefficient part.
pub fn steenrod_basis(p: Prime, bd: Bidegree) -> BidegreeBasis {
    let ms = steenrod_monomials_in(p, Ambient::Mz, bd)
        .into_iter()
        .map(|s| Monomial::new(CoeffMonomial::ONE, s))
        .collect();
    BidegreeBasis::new(bd, ms)
}

/// All U-maximal indices (max supp a ≤ max U) whose y has Steenrod
/// topological degree ≤ `dmax` and weight ≤ `wmax`.
pub fn free_bbeta_generators(p: Prime, dmax: i64, wmax: i64) -> Vec<BasisIndex> {
    let mut out: Vec<BasisIndex> = steenrod_monomials_to_degree(p, Ambient::Mz, dmax + 1)
        .iter()
        .map(BasisIndex::from_monomial)
        .filter(|idx| idx.is_u_maximal())
        .filter(|idx| {
            let b = idx.bidegree(p) + Bidegree::BETA;
            b.d <= dmax && b.w <= wmax
        })
        .collect();
    out.sort_by_key(|idx| (idx.bidegree(p), idx.clone()));
    out
}

/// U-maximal indices whose y lies in bidegree `bd`.
pub fn free_bbeta_generators_in(p: Prime, bd: Bidegree) -> Vec<BasisIndex> {
    steenrod_monomials_in(p, Ambient::Mz, bd - Bidegree::BETA)
        .iter()
        .map(BasisIndex::from_monomial)
        .filter(BasisIndex::is_u_maximal)
        .collect()
}

/// Coefficient monomials with vanishing Bockstein. Together with
/// [`coeff_complement`] this splits the coefficient monomials: every
/// coefficient ring in scope has β sending each monomial to a multiple of
/// a single monomial, injectively on the complement.
pub fn coeff_is_cycle(s: &Scheme, c: &CoeffMonomial) -> bool {
    s.coeff_beta(c).is_none()
}

pub fn coeff_complement(s: &Scheme, c: &CoeffMonomial) -> bool {
    s.coeff_beta(c).is_some()
}

/// Kernel of β in one bidegree, computed two ways.
#[derive(Debug, Clone)]
pub struct KerBetaBasis {
    pub basis: BidegreeBasis,
    /// Null space of the β matrix, labelled by `basis`.
    pub generic: FpBasis,
    /// The cycles z_H·z_X and βr·η + (-1)^{d_r} r·y, in coordinates.
    pub constructive: Vec<Vec<u32>>,
}

impl KerBetaBasis {
    pub fn constructive_rank(&self) -> usize {
        crate::linalg::vectors_rank(self.generic.p(), self.basis.len(), &self.constructive)
    }

    /// Both lists are bases of the same subspace.
    pub fn agree(&self) -> bool {
        let c = FpBasis::new(self.generic.p(), self.basis.len(), self.constructive.clone());
        self.constructive.len() == self.generic.len() && self.constructive_rank() == self.generic.len() && c.same_span(&self.generic)
    }
}

/// The constructive list of cycles in bidegree `bd` of the MZ form.
pub fn constructive_kernel(alg: &Algebra, bd: Bidegree) -> Result<Vec<Element>> {
    if alg.ambient() != Ambient::Mz {
        return Err(AlgebraError::WrongForm("MZ"));
    }
    let p = alg.p();
    let scheme = alg.scheme();
    let mut out = Vec::new();
    for c in scheme.coeff_monomials_with_excess(bd.excess() + 1) {
        let cb = c.bidegree();
        let ce = alg.coeff_monomial(c)?;
        if coeff_is_cycle(scheme, &c) {
            let rest = bd - cb;
            if rest == Bidegree::ZERO {
                out.push(ce.clone());
            }
            for idx in free_bbeta_generators_in(p, rest) {
                out.push(alg.mul(&ce, &y(&idx, alg)?)?);
            }
        } else {
            let rest = bd - cb - Bidegree::BETA;
            let bc = beta(alg, &ce)?;
            let sign = p.sign(cb.is_odd());
            for s in steenrod_monomials_in(p, Ambient::Mz, rest) {
                let idx = BasisIndex::from_monomial(&s);
                if !idx.is_u_maximal() {
                    continue;
                }
                let e = eta(&idx, alg)?;
                let first = alg.mul(&bc, &e)?;
                let second = alg.mul(&ce, &y(&idx, alg)?)?;
                out.push(first.add(&second.scale(sign)));
            }
        }
    }
    Ok(out)
}

/// The opposite-sign variant of the second family, βr·η - (-1)^{d_r} r·y.
pub fn constructive_kernel_opposite_sign(alg: &Algebra, bd: Bidegree) -> Result<Vec<Element>> {
    let p = alg.p();
    let scheme = alg.scheme();
    let mut out = Vec::new();
    for c in scheme.coeff_monomials_with_excess(bd.excess() + 1) {
        if !coeff_complement(scheme, &c) {
            continue;
        }
        let cb = c.bidegree();
        let ce = alg.coeff_monomial(c)?;
        let bc = beta(alg, &ce)?;
        let sign = p.sign(!cb.is_odd());
        for s in steenrod_monomials_in(p, Ambient::Mz, bd - cb - Bidegree::BETA) {
            let idx = BasisIndex::from_monomial(&s);
            if idx.is_u_maximal() {
                let e = eta(&idx, alg)?;
                out.push(alg.mul(&bc, &e)?.add(&alg.mul(&ce, &y(&idx, alg)?)?.scale(sign)));
            }
        }
    }
    Ok(out)
}

pub fn ker_beta_basis(alg: &Algebra, bd: Bidegree) -> Result<KerBetaBasis> {
    let src = basis(alg, bd);
    let tgt = basis(alg, bd + Bidegree::BETA);
    let mat = beta_matrix(alg, &src, &tgt)?;
    let generic = mat.kernel_basis().with_labels(src.monomials.clone());
    let constructive = if alg.ambient() == Ambient::Mz {
        constructive_kernel(alg, bd)?
            .iter()
            .map(|e| src.coords(e))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    Ok(KerBetaBasis { basis: src, generic, constructive })
}

/// Dimension of the β-homology of the coefficient ring in bidegree `bd`.
pub fn coeff_beta_homology(alg: &Algebra, bd: Bidegree) -> Result<usize> {
    if alg.ambient() == Ambient::Dual {
        // the dual form is acyclic: β τ_0 = 1 contracts it
        return Ok(0);
    }
    let only = |b: Bidegree| {
        let ms = alg
            .scheme()
            .coeff_monomials_in(b)
            .into_iter()
            .map(|c| Monomial::new(c, SteenrodMonomial::one()))
            .collect();
        BidegreeBasis::new(b, ms)
    };
    let here = only(bd);
    let down = only(bd + Bidegree::BETA);
    let up = only(bd - Bidegree::BETA);
    let out = beta_matrix(alg, &here, &down)?.rank();
    let inc = beta_matrix(alg, &up, &here)?.rank();
    Ok(here.len() - out - inc)
}

/// One row of a Bockstein table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BocksteinRow {
    pub bidegree: Bidegree,
    pub dim: usize,
    pub rank: usize,
    pub ker: usize,
    pub im: usize,
    pub homology: usize,
    pub notes: Vec<String>,
}

impl BocksteinRow {
    /// `rank` is the rank of β out of the bidegree, `im` the rank of β
    /// into it; `expected` is the homology predicted by the Künneth
    /// splitting.
    pub fn from_ranks(bidegree: Bidegree, dim: usize, rank: usize, im: usize, expected: usize) -> Self {
        let ker = dim - rank;
        let homology = ker - im;
        let mut notes = Vec::new();
        if homology != expected {
            notes.push(format!("homology {homology} differs from Kunneth prediction {expected}"));
        }
        BocksteinRow { bidegree, dim, rank, ker, im, homology, notes }
    }
}

pub fn bockstein_row(alg: &Algebra, bd: Bidegree) -> Result<BocksteinRow> {
    let here = basis(alg, bd);
    let down = basis(alg, bd + Bidegree::BETA);
    let up = basis(alg, bd - Bidegree::BETA);
    let rank = beta_matrix(alg, &here, &down)?.rank();
    let im = beta_matrix(alg, &up, &here)?.rank();
    Ok(BocksteinRow::from_ranks(bd, here.len(), rank, im, coeff_beta_homology(alg, bd)?))
}

/// The bidegrees with d ∈ [-wmax, dmax] and |w| ≤ wmax that can be
/// populated (w ≤ d and 2w ≤ d), in (d, w) order.
pub fn bidegree_range(dmax: i64, wmax: i64) -> Vec<Bidegree> {
    let mut out = Vec::new();
    if dmax < -wmax || wmax < 0 {
        return out;
    }
    for d in -wmax..=dmax {
        for w in -wmax..=wmax {
            if w <= d && 2 * w <= d {
                out.push(Bidegree::new(d, w));
            }
        }
    }
    out
}

/// A table of Bockstein rows, one per nonzero bidegree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BocksteinReport {
    pub rows: Vec<BocksteinRow>,
}

pub fn beta_report(alg: &Algebra, bidegrees: &[Bidegree]) -> Result<BocksteinReport> {
    let mut rows = Vec::new();
    for &bd in bidegrees {
        let row = bockstein_row(alg, bd)?;
        if row.dim > 0 {
            rows.push(row);
        }
    }
    Ok(BocksteinReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::CoeffGen;
    use crate::scheme::SchemeId;
    use crate::text::parse_element;

    fn mz(id: SchemeId, p: u32) -> Algebra {
        Algebra::mz(Scheme::new(id, Prime::new(p).unwrap()).unwrap())
    }

    #[test]
    fn beta_examples() {
        let a = mz(SchemeId::AlgClosed, 2);
        assert_eq!(beta(&a, &a.tau(1).unwrap()).unwrap(), a.xi(1).unwrap());
        let r = mz(SchemeId::RealP2, 2);
        let tau = r.coeff_gen(CoeffGen::Tau).unwrap();
        assert_eq!(beta(&r, &tau).unwrap(), r.coeff_gen(CoeffGen::Rho).unwrap());
        let t12 = parse_element(&a, "tau1*tau2").unwrap();
        assert_eq!(beta(&a, &t12).unwrap(), parse_element(&a, "xi1*tau2 + xi2*tau1").unwrap());
    }

    #[test]
    fn y_examples() {
        let a2 = mz(SchemeId::AlgClosed, 2);
        let i1 = BasisIndex::new(vec![], TauSet::singleton(1));
        assert_eq!(y(&i1, &a2).unwrap(), a2.xi(1).unwrap());
        let i12 = BasisIndex::new(vec![], TauSet::from_indices([1, 2]));
        assert_eq!(y(&i12, &a2).unwrap(), parse_element(&a2, "xi1*tau2 + xi2*tau1").unwrap());
        let a3 = mz(SchemeId::AlgClosed, 3);
        assert_eq!(y(&i12, &a3).unwrap(), parse_element(&a3, "xi1*tau2 - tau1*xi2").unwrap());
    }

    #[test]
    fn inhomogeneous_rejected() {
        let a = mz(SchemeId::AlgClosed, 2);
        let x = parse_element(&a, "xi1 + tau1").unwrap();
        assert!(matches!(beta(&a, &x), Err(AlgebraError::Inhomogeneous(..))));
    }

    #[test]
    fn block_examples() {
        let p = Prime::TWO;
        assert_eq!(block_homology(&Block::new(vec![]), p), vec![1]);
        let c = Block::new(vec![1]).complex(p);
        assert_eq!(c.chains[0].len(), 1);
        assert_eq!(c.differentials[0].to_dense(), vec![vec![1]]);
        assert_eq!(block_homology(&Block::new(vec![1]), p), vec![0, 0]);
        let c = Block::new(vec![1, 1]).complex(p);
        assert_eq!(c.chains.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 2, 1]);
        assert!(block_homology(&Block::new(vec![2, 0, 0, 1]), Prime::THREE).iter().all(|&h| h == 0));
    }

    #[test]
    fn kernel_example_xi_tau() {
        // β on span{ξ_1τ_2, ξ_2τ_1}
        let a = mz(SchemeId::AlgClosed, 2);
        let src = BidegreeBasis::new(
            Bidegree::new(9, 4),
            vec![
                parse_element(&a, "xi1*tau2").unwrap().terms().next().unwrap().0.clone(),
                parse_element(&a, "xi2*tau1").unwrap().terms().next().unwrap().0.clone(),
            ],
        );
        let tgt = steenrod_basis(Prime::TWO, Bidegree::new(8, 4));
        let m = beta_matrix(&a, &src, &tgt).unwrap();
        let k = m.kernel_basis();
        assert_eq!(k.vectors(), &[vec![1, 1]]);
        let im = m.image_basis();
        assert_eq!(tgt.element(&a, &im.basis.vectors()[0]).to_string(), "xi1*xi2");
    }

    #[test]
    fn free_generators() {
        let p = Prime::TWO;
        assert_eq!(free_bbeta_generators(p, 2, 1), vec![BasisIndex::new(vec![], TauSet::singleton(1))]);
        assert!(free_bbeta_generators(p, 0, 0).is_empty());
        assert_eq!(
            free_bbeta_generators_in(p, Bidegree::new(9, 4)),
            vec![BasisIndex::new(vec![], TauSet::from_indices([1, 2]))]
        );
    }

    #[test]
    fn report_examples() {
        let a = mz(SchemeId::AlgClosed, 2);
        let r0 = bockstein_row(&a, Bidegree::ZERO).unwrap();
        assert_eq!((r0.dim, r0.homology), (1, 1));
        let r1 = bockstein_row(&a, Bidegree::new(2, 1)).unwrap();
        assert_eq!((r1.dim, r1.homology), (1, 0));
        let r = mz(SchemeId::RealP2, 2);
        // H(F_2[ρ,τ], βτ = ρ) = F_2[τ²]: ρ is a boundary, τ² survives
        let row = bockstein_row(&r, Bidegree::new(-1, -1)).unwrap();
        assert_eq!(row.homology, 0);
        assert!(row.notes.is_empty());
        assert_eq!(bockstein_row(&r, Bidegree::new(0, -2)).unwrap().homology, 1);
        assert!(beta_report(&a, &[]).unwrap().rows.is_empty());
    }

    #[test]
    fn real_kernel_examples() {
        let r = mz(SchemeId::RealP2, 2);
        let bd = Bidegree::new(0, -2);
        let coeff_only = |b: Bidegree| {
            let ms = r.scheme().coeff_monomials_in(b).into_iter().map(|c| Monomial::new(c, SteenrodMonomial::one())).collect();
            BidegreeBasis::new(b, ms)
        };
        let (src, tgt) = (coeff_only(bd), coeff_only(bd + Bidegree::BETA));
        let k = beta_matrix(&r, &src, &tgt).unwrap().kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(src.element(&r, &k.vectors()[0]).to_string(), "tau^2");
        assert!(ker_beta_basis(&r, bd).unwrap().agree());
        let a = mz(SchemeId::AlgClosed, 2);
        let k = ker_beta_basis(&a, Bidegree::new(2, 1)).unwrap();
        assert_eq!(k.generic.len(), 1);
        assert!(k.agree());
    }

    #[test]
    fn coefficient_split_matches_presentations() {
        let r = Scheme::new(SchemeId::RealP2, Prime::TWO).unwrap();
        for c in r.coeff_monomials_with_excess(10) {
            assert_eq!(coeff_is_cycle(&r, &c), c.tau % 2 == 0);
        }
        let z = Scheme::new(SchemeId::ZHalf, Prime::TWO).unwrap();
        for c in z.coeff_monomials_with_excess(10) {
            assert_eq!(coeff_is_cycle(&z, &c), c.tau % 2 == 0 || c.eps == 1);
        }
        let f = Scheme::new(SchemeId::FiniteField { q: 7 }, Prime::THREE).unwrap();
        for c in f.coeff_monomials_with_excess(12) {
            assert_eq!(coeff_is_cycle(&f, &c), c.tau % 3 == 0 || c.eps == 1);
        }
    }
}
