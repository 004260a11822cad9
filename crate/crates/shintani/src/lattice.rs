//! Rank-2 lattices in Q² in Hermite normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::mat2::Mat2;
use crate::Rat;

/// A full-rank lattice Λ ⊂ Q² with HNF basis columns `(a, b)` and `(0, d)`:
/// `a > 0`, `d > 0`, `0 ≤ b < d`. The basis matrix `(a 0; b d)` is
/// lower-triangular with positive diagonal and reduced off-diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice2 {
    pub a: Rat,
    pub b: Rat,
    pub d: Rat,
}

impl Lattice2 {
    /// The standard lattice Z².
    pub fn standard() -> Self {
        Lattice2 { a: Rat::one(), b: Rat::zero(), d: Rat::one() }
    }

    /// Rectangular lattice mZ × nZ.
    pub fn rectangular(m: &Rat, n: &Rat) -> Self {
        assert!(m.is_positive() && n.is_positive());
        Lattice2 { a: m.clone(), b: Rat::zero(), d: n.clone() }
    }

    /// HNF basis of the lattice generated by rational 2-vectors.
    /// Panics when the generators do not span a rank-2 lattice.
    ///
    /// `hnf_basis([(2,0),(1,1)])` has columns `(1,1)` and `(0,2)`.
    pub fn hnf_basis(generators: &[(Rat, Rat)]) -> Self {
        // Scale to integer vectors.
        let mut scale = BigInt::one();
        for (x, y) in generators {
            scale = scale.lcm(x.denom()).lcm(y.denom());
        }
        let s = Rat::from_integer(scale.clone());
        let mut vecs: Vec<(BigInt, BigInt)> = generators
            .iter()
            .map(|(x, y)| ((x * &s).to_integer(), (y * &s).to_integer()))
            .filter(|(x, y)| !(x.is_zero() && y.is_zero()))
            .collect();
        assert!(!vecs.is_empty(), "hnf_basis: no non-zero generators");

        // Reduce x-components to a single pivot by Euclid.
        loop {
            vecs.sort_by(|u, v| u.0.abs().cmp(&v.0.abs()));
            let nonzero: Vec<usize> =
                (0..vecs.len()).filter(|&i| !vecs[i].0.is_zero()).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let i = nonzero[0];
            let q0 = vecs[i].0.clone();
            for &j in &nonzero[1..] {
                let q = &vecs[j].0 / &q0;
                vecs[j].0 = &vecs[j].0 - &q * &q0;
                let t = &vecs[j].1 - &q * &vecs[i].1;
                vecs[j].1 = t;
            }
        }
        let pivot = vecs.iter().position(|v| !v.0.is_zero());
        let (ax, mut ay) = match pivot {
            Some(i) => vecs.remove(i),
            None => panic!("hnf_basis: generators have rank < 2 (no x-span)"),
        };
        let mut dy = BigInt::zero();
        for (_, y) in &vecs {
            dy = dy.gcd(y);
        }
        assert!(!dy.is_zero(), "hnf_basis: generators have rank < 2");
        // Normalize signs and reduce b into [0, d).
        let (mut ax, dy) = (ax, dy.abs());
        if ax.is_negative() {
            ax = -ax;
            ay = -ay;
        }
        ay = ay.mod_floor(&dy);
        Lattice2 {
            a: Rat::new(ax, scale.clone()),
            b: Rat::new(ay, scale.clone()),
            d: Rat::new(dy, scale),
        }
    }

    /// Covolume (absolute determinant of the basis).
    pub fn det(&self) -> Rat {
        &self.a * &self.d
    }

    pub fn contains(&self, v: &(Rat, Rat)) -> bool {
        let s = &v.0 / &self.a;
        if !s.denom().is_one() {
            return false;
        }
        let rem = (&v.1 - s * &self.b) / &self.d;
        rem.denom().is_one()
    }

    /// Basis as a matrix with the lattice generators as columns.
    pub fn basis_matrix(&self) -> Mat2 {
        Mat2::new(self.a.clone(), Rat::zero(), self.b.clone(), self.d.clone())
    }

    /// Image lattice γΛ (γ must be invertible).
    pub fn map_by(&self, m: &Mat2) -> Lattice2 {
        let c1 = m.apply(&(self.a.clone(), self.b.clone()));
        let c2 = m.apply(&(Rat::zero(), self.d.clone()));
        Lattice2::hnf_basis(&[c1, c2])
    }

    /// The scaled lattice qΛ (q ≠ 0; equal to |q|Λ as a set).
    pub fn scale(&self, q: &Rat) -> Lattice2 {
        assert!(!q.is_zero(), "scaling a lattice by zero");
        let s = q.abs();
        let qd = &s * &self.d;
        Lattice2 { a: &s * &self.a, b: crate::arith::rat_mod(&(&s * &self.b), &qd), d: qd }
    }

    /// Periods (P, Q) of the largest rectangular sublattice PZ × QZ ⊆ Λ,
    /// together with the coset representatives of Λ / (PZ × QZ).
    pub fn rectangular_refinement(&self) -> ((Rat, Rat), Vec<(Rat, Rat)>) {
        // Scale (b, d) to integers to take a gcd.
        let l = Rat::from_integer(self.b.denom().lcm(self.d.denom()));
        let bi = (&self.b * &l).to_integer();
        let di = (&self.d * &l).to_integer();
        let g = bi.gcd(&di);
        let steps = if g.is_zero() { BigInt::one() } else { di / &g };
        let px = &self.a * Rat::from_integer(steps.clone());
        let py = self.d.clone();
        let mut reps = Vec::new();
        let mut s = BigInt::zero();
        while &s < &steps {
            let sr = Rat::from_integer(s.clone());
            let x = &self.a * &sr;
            let y = crate::arith::rat_mod(&(&self.b * &sr), &self.d);
            reps.push((x, y));
            s += 1;
        }
        ((px, py), reps)
    }
}

impl std::fmt::Display for Lattice2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "<({}, {}), (0, {})>", self.a, self.b, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn hnf_example() {
        let l = Lattice2::hnf_basis(&[(q(2, 1), q(0, 1)), (q(1, 1), q(1, 1))]);
        assert_eq!(l, Lattice2 { a: q(1, 1), b: q(1, 1), d: q(2, 1) });
        assert!(l.contains(&(q(1, 1), q(1, 1))));
        assert!(l.contains(&(q(2, 1), q(0, 1))));
        assert!(l.contains(&(q(0, 1), q(2, 1))));
        assert!(!l.contains(&(q(0, 1), q(1, 1))));
        assert_eq!(l.det(), q(2, 1));
    }

    #[test]
    fn hnf_rational_and_map() {
        let l = Lattice2::hnf_basis(&[(q(1, 2), q(0, 1)), (q(0, 1), q(3, 1))]);
        assert_eq!(l, Lattice2 { a: q(1, 2), b: q(0, 1), d: q(3, 1) });
        let m = Mat2::from_ints(0, -1, 1, 0);
        let rot = l.map_by(&m);
        assert_eq!(rot, Lattice2 { a: q(3, 1), b: q(0, 1), d: q(1, 2) });
        // An index-p sublattice through a shear.
        let shear = Mat2::from_ints(1, 2, 0, 5);
        let img = Lattice2::standard().map_by(&shear.adjugate());
        assert_eq!(img.det(), q(5, 1));
    }

    #[test]
    fn rect_refinement() {
        let l = Lattice2 { a: q(1, 1), b: q(1, 1), d: q(2, 1) };
        let ((px, py), reps) = l.rectangular_refinement();
        assert_eq!((px, py), (q(2, 1), q(2, 1)));
        assert_eq!(reps, vec![(q(0, 1), q(0, 1)), (q(1, 1), q(1, 1))]);
        let r = Lattice2::rectangular(&q(3, 1), &q(4, 1));
        let ((px, py), reps) = r.rectangular_refinement();
        assert_eq!((px, py), (q(3, 1), q(4, 1)));
        assert_eq!(reps.len(), 1);
    }
}
