//! Exact 2×2 matrices over Q and cusps of P¹(Q).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rat;

/// 2×2 matrix over Q, row-major: `(a b; c d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2 {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

impl Mat2 {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        let r = |n: i64| Rat::from_integer(BigInt::from(n));
        Mat2::new(r(a), r(b), r(c), r(d))
    }

    pub fn identity() -> Self {
        Mat2::from_ints(1, 0, 0, 1)
    }

    pub fn det(&self) -> Rat {
        &self.a * &self.d - &self.b * &self.c
    }

    /// Adjugate: `adj(a b; c d) = (d −b; −c a)`, so `m · adj(m) = det(m) I`.
    ///
    /// `adjugate(1 2; 3 4) = (4 −2; −3 1)`; `adjugate(p i; 0 1) = (1 −i; 0 p)`.
    pub fn adjugate(&self) -> Mat2 {
        Mat2::new(self.d.clone(), -self.b.clone(), -self.c.clone(), self.a.clone())
    }

    pub fn inverse(&self) -> Mat2 {
        let det = self.det();
        assert!(!det.is_zero(), "inverse of singular matrix");
        self.adjugate().scale(&det.recip())
    }

    pub fn scale(&self, s: &Rat) -> Mat2 {
        Mat2::new(&self.a * s, &self.b * s, &self.c * s, &self.d * s)
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &(Rat, Rat)) -> (Rat, Rat) {
        (&self.a * &v.0 + &self.b * &v.1, &self.c * &v.0 + &self.d * &v.1)
    }

    /// Möbius action on a cusp.
    pub fn act_cusp(&self, r: &Cusp) -> Cusp {
        let (x, y) = r.as_vector();
        let (u, v) = self.apply(&(x, y));
        Cusp::from_vector(&u, &v)
    }

    pub fn is_integral(&self) -> bool {
        [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .all(|e| e.denom().is_one())
    }
}

impl std::fmt::Display for Mat2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

/// A cusp of P¹(Q): either a rational number a/c in lowest terms or ∞.
/// Stored as a primitive integer vector (a, c) with c ≥ 0, and c = 0 only
/// for ∞ = (1, 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cusp {
    pub num: BigInt,
    pub den: BigInt,
}

impl Cusp {
    pub fn infinity() -> Self {
        Cusp { num: BigInt::one(), den: BigInt::zero() }
    }

    pub fn from_rational(q: &Rat) -> Self {
        Cusp { num: q.numer().clone(), den: q.denom().clone() }
    }

    pub fn from_ints(num: i64, den: i64) -> Self {
        Self::from_vector(
            &Rat::from_integer(BigInt::from(num)),
            &Rat::from_integer(BigInt::from(den)),
        )
    }

    /// Primitive integer vector from a rational direction (x : y).
    pub fn from_vector(x: &Rat, y: &Rat) -> Self {
        assert!(!(x.is_zero() && y.is_zero()), "cusp from zero vector");
        // Clear denominators, then divide by the gcd.
        let l = Rat::from_integer(x.denom().lcm(y.denom()));
        let xi = (x * &l).to_integer();
        let yi = (y * &l).to_integer();
        let g = xi.gcd(&yi);
        let (mut n, mut d) = (xi / &g, yi / &g);
        if d.is_negative() || (d.is_zero() && n.is_negative()) {
            n = -n;
            d = -d;
        }
        Cusp { num: n, den: d }
    }

    pub fn is_infinity(&self) -> bool {
        self.den.is_zero()
    }

    pub fn as_vector(&self) -> (Rat, Rat) {
        (Rat::from_integer(self.num.clone()), Rat::from_integer(self.den.clone()))
    }
}

impl std::fmt::Display for Cusp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_infinity() {
            write!(f, "inf")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjugate_examples() {
        let m = Mat2::from_ints(1, 2, 3, 4);
        assert_eq!(m.adjugate(), Mat2::from_ints(4, -2, -3, 1));
        let p = Mat2::from_ints(5, 2, 0, 1); // (p i; 0 1) with p=5, i=2
        assert_eq!(p.adjugate(), Mat2::from_ints(1, -2, 0, 5));
        let prod = m.mul(&m.adjugate());
        assert_eq!(prod, Mat2::identity().scale(&m.det()));
        assert_eq!(m.inverse().mul(&m), Mat2::identity());
    }

    #[test]
    fn cusp_actions() {
        let beta = Mat2::from_ints(1, 2, 0, 5); // (1 i; 0 p), i=2, p=5
        assert_eq!(beta.act_cusp(&Cusp::infinity()), Cusp::infinity());
        assert_eq!(beta.act_cusp(&Cusp::from_ints(0, 1)), Cusp::from_ints(2, 5));
        let c = Cusp::from_ints(-4, -6);
        assert_eq!(c, Cusp::from_ints(2, 3));
        assert_eq!(Cusp::from_ints(-2, 3).to_string(), "-2/3");
    }
}
