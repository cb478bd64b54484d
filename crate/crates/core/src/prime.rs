use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};

/// A prime number, used as the characteristic of every mod-p computation.
///
/// Residues are stored as `u32` in `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        if is_prime(p as u64) {
            Ok(Prime(p))
        } else {
            Err(AlgebraError::NotPrime(p as u64))
        }
    }

    pub const TWO: Prime = Prime(2);
    pub const THREE: Prime = Prime(3);

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_odd(self) -> bool {
        self.0 != 2
    }

    /// `p^j` as an `i64`, or `None` on overflow.
    pub fn checked_pow(self, j: u32) -> Option<i64> {
        (self.0 as i64).checked_pow(j)
    }

    pub fn pow(self, j: u32) -> i64 {
        self.checked_pow(j).expect("p^j overflows i64")
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a % self.0 != 0, "zero has no inverse mod {}", self.0);
        // Fermat
        let mut base = a as u64 % self.0 as u64;
        let mut e = self.0 as u64 - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.0 as u64;
            }
            base = base * base % self.0 as u64;
            e >>= 1;
        }
        acc as u32
    }

    /// `(-1)^e` as a residue.
    #[inline]
    pub fn sign(self, negative: bool) -> u32 {
        if negative {
            self.0 - 1
        } else {
            1
        }
    }

    /// p-adic valuation of a nonzero integer.
    pub fn valuation(self, mut n: u128) -> u32 {
        assert!(n != 0);
        let mut v = 0;
        while n % self.0 as u128 == 0 {
            n /= self.0 as u128;
            v += 1;
        }
        v
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl TryFrom<u32> for Prime {
    type Error = AlgebraError;
    fn try_from(p: u32) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `(ell, k)` when `q = ell^k` for a prime `ell`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut ell = 2;
    while ell * ell <= q && q % ell != 0 {
        ell += 1;
    }
    if q % ell != 0 {
        ell = q;
    }
    let mut rest = q;
    let mut k = 0;
    while rest % ell == 0 {
        rest /= ell;
        k += 1;
    }
    (rest == 1).then_some((ell, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites() {
        assert!(Prime::new(4).is_err());
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(0).is_err());
        assert_eq!(Prime::new(7).unwrap().get(), 7);
    }

    #[test]
    fn field_ops() {
        let p = Prime::new(5).unwrap();
        for a in 1..5 {
            assert_eq!(p.mul(a, p.inv(a)), 1);
        }
        assert_eq!(p.sub(1, 3), 3);
        assert_eq!(p.neg(2), 3);
        assert_eq!(p.reduce(-7), 3);
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}
