use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A motivic bidegree: topological degree and weight.
///
/// Bidegrees add componentwise; the Koszul sign between two homogeneous
/// classes only sees the topological degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct Bidegree {
    pub d: i64,
    pub w: i64,
}

impl Bidegree {
    pub const ZERO: Bidegree = Bidegree { d: 0, w: 0 };
    /// Degree of the Bockstein (βτ_1 = ξ_1 lowers d by one).
    pub const BETA: Bidegree = Bidegree { d: -1, w: 0 };

    pub const fn new(d: i64, w: i64) -> Self {
        Bidegree { d, w }
    }

    /// `d - 2w`. Every generator in sight has this nonnegative, which is
    /// what makes each bidegree finite dimensional.
    pub fn excess(self) -> i64 {
        self.d - 2 * self.w
    }

    pub fn is_odd(self) -> bool {
        self.d.rem_euclid(2) == 1
    }

    pub fn scale(self, n: i64) -> Self {
        Bidegree::new(self.d * n, self.w * n)
    }

    /// Whether moving a class of degree `self` past one of degree `other`
    /// produces a sign.
    pub fn koszul(self, other: Bidegree) -> bool {
        self.is_odd() && other.is_odd()
    }
}

impl Add for Bidegree {
    type Output = Bidegree;
    fn add(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.d + o.d, self.w + o.w)
    }
}

impl Sub for Bidegree {
    type Output = Bidegree;
    fn sub(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.d - o.d, self.w - o.w)
    }
}

impl Neg for Bidegree {
    type Output = Bidegree;
    fn neg(self) -> Bidegree {
        Bidegree::new(-self.d, -self.w)
    }
}

impl From<[i64; 2]> for Bidegree {
    fn from(v: [i64; 2]) -> Self {
        Bidegree::new(v[0], v[1])
    }
}

impl From<Bidegree> for [i64; 2] {
    fn from(b: Bidegree) -> Self {
        [b.d, b.w]
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.d, self.w)
    }
}
