//! Exact cyclotomic scalars and Dirichlet character values.
//!
//! Coefficients of test functions are exact elements of cyclotomic fields
//! Q(ζ_n): a cheap rational variant covers the (common) case of quadratic
//! characters, and a polynomial-mod-Φ_n variant covers general orders.
//! Mixed-order arithmetic promotes both operands to the lcm order first.
//! Embedding into Q_p picks the Teichmüller lift of the smallest positive
//! residue of exact multiplicative order n, which requires n | p−1.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::padic::{hensel_root_of_unity, PadicNumber};
use crate::{Error, Rat, Result};

/// An exact element of a cyclotomic field.
///
/// `Ext` stores coefficients (low degree first) of a polynomial in ζ_n of
/// degree < φ(n), reduced modulo the n-th cyclotomic polynomial. Values
/// that reduce to rationals collapse to the `Rat` variant, so quadratic
/// character computations never leave exact rational arithmetic.
#[derive(Debug, Clone)]
pub enum Cyclotomic {
    Rat(Rat),
    Ext { n: u32, coeffs: Vec<Rat> },
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic::Rat(Rat::zero())
    }

    pub fn one() -> Self {
        Cyclotomic::Rat(Rat::one())
    }

    pub fn from_rat(q: Rat) -> Self {
        Cyclotomic::Rat(q)
    }

    pub fn from_int(n: i64) -> Self {
        Cyclotomic::Rat(Rat::from_integer(BigInt::from(n)))
    }

    /// The primitive n-th root of unity ζ_n.
    pub fn zeta(n: u32) -> Self {
        assert!(n >= 1);
        match n {
            1 => Cyclotomic::one(),
            2 => Cyclotomic::from_int(-1),
            _ => {
                let mut coeffs = vec![Rat::zero(), Rat::one()];
                reduce_mod_phi(&mut coeffs, n);
                normalize(n, coeffs)
            }
        }
    }

    /// ζ_n^k for any integer k.
    pub fn zeta_pow(n: u32, k: i64) -> Self {
        let k = k.rem_euclid(n as i64) as u32;
        let mut coeffs = vec![Rat::zero(); k as usize + 1];
        coeffs[k as usize] = Rat::one();
        reduce_mod_phi(&mut coeffs, n);
        normalize(n, coeffs)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Cyclotomic::Rat(q) => q.is_zero(),
            Cyclotomic::Ext { .. } => false, // normalized form collapses rationals
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Cyclotomic::Rat(q) if q.is_one())
    }

    /// Exact rational value, when this scalar is rational.
    pub fn try_to_rational(&self) -> Option<Rat> {
        match self {
            Cyclotomic::Rat(q) => Some(q.clone()),
            Cyclotomic::Ext { .. } => None,
        }
    }

    fn order(&self) -> u32 {
        match self {
            Cyclotomic::Rat(_) => 1,
            Cyclotomic::Ext { n, .. } => *n,
        }
    }

    /// Coefficient vector in Q(ζ_target); target must be a multiple of the
    /// current order.
    fn promote(&self, target: u32) -> Vec<Rat> {
        match self {
            Cyclotomic::Rat(q) => {
                let mut c = vec![Rat::zero(); 1];
                c[0] = q.clone();
                c
            }
            Cyclotomic::Ext { n, coeffs } => {
                assert!(target % n == 0);
                let step = (target / n) as usize;
                let mut c = vec![Rat::zero(); coeffs.len().saturating_sub(1) * step + 1];
                for (j, q) in coeffs.iter().enumerate() {
                    c[j * step] = q.clone();
                }
                reduce_mod_phi(&mut c, target);
                c
            }
        }
    }

    pub fn add(&self, o: &Cyclotomic) -> Cyclotomic {
        if let (Cyclotomic::Rat(a), Cyclotomic::Rat(b)) = (self, o) {
            return Cyclotomic::Rat(a + b);
        }
        let n = lcm(self.order(), o.order());
        let a = self.promote(n);
        let b = o.promote(n);
        let mut c = vec![Rat::zero(); a.len().max(b.len())];
        for (j, q) in a.iter().enumerate() {
            c[j] += q;
        }
        for (j, q) in b.iter().enumerate() {
            c[j] += q;
        }
        normalize(n, c)
    }

    pub fn neg(&self) -> Cyclotomic {
        match self {
            Cyclotomic::Rat(q) => Cyclotomic::Rat(-q),
            Cyclotomic::Ext { n, coeffs } => Cyclotomic::Ext {
                n: *n,
                coeffs: coeffs.iter().map(|q| -q).collect(),
            },
        }
    }

    pub fn sub(&self, o: &Cyclotomic) -> Cyclotomic {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Cyclotomic) -> Cyclotomic {
        if let (Cyclotomic::Rat(a), Cyclotomic::Rat(b)) = (self, o) {
            return Cyclotomic::Rat(a * b);
        }
        if self.is_zero() || o.is_zero() {
            return Cyclotomic::zero();
        }
        let n = lcm(self.order(), o.order());
        let a = self.promote(n);
        let b = o.promote(n);
        let mut c = vec![Rat::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    c[i + j] += x * y;
                }
            }
        }
        reduce_mod_phi(&mut c, n);
        normalize(n, c)
    }

    pub fn scale(&self, q: &Rat) -> Cyclotomic {
        self.mul(&Cyclotomic::Rat(q.clone()))
    }

    /// Embed into Q_p to `digits` digits. ζ_n maps to the Teichmüller lift
    /// of the smallest positive residue of exact multiplicative order n,
    /// which exists iff n | p−1.
    pub fn embed_padic(&self, p: u64, digits: u32) -> Result<PadicNumber> {
        match self {
            Cyclotomic::Rat(q) => Ok(PadicNumber::from_rat(q, p, digits)),
            Cyclotomic::Ext { n, coeffs } => {
                if (p - 1) % *n as u64 != 0 {
                    return Err(Error::Embedding(format!(
                        "character values lie in Q(zeta_{n}), which does not embed into Q_{p}; choose p = 1 mod {n}"
                    )));
                }
                let r = (2..p)
                    .find(|&r| mult_order(r, p) == *n as u64)
                    .ok_or_else(|| Error::Embedding(format!("no residue of order {n} mod {p}")))?;
                let root = hensel_root_of_unity(*n, r, p, digits)?;
                let mut acc = PadicNumber::zero(p, digits as i64);
                for q in coeffs.iter().rev() {
                    acc = acc.mul(&root).add(&PadicNumber::from_rat(q, p, digits));
                }
                Ok(acc)
            }
        }
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Cyclotomic::Rat(a), Cyclotomic::Rat(b)) => a == b,
            _ => {
                let n = lcm(self.order(), other.order());
                let mut a = self.promote(n);
                let mut b = other.promote(n);
                let len = a.len().max(b.len());
                a.resize(len, Rat::zero());
                b.resize(len, Rat::zero());
                a == b
            }
        }
    }
}

impl Eq for Cyclotomic {}

impl std::fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cyclotomic::Rat(q) => write!(f, "{q}"),
            Cyclotomic::Ext { n, coeffs } => {
                let mut first = true;
                for (j, q) in coeffs.iter().enumerate() {
                    if q.is_zero() {
                        continue;
                    }
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    if j == 0 {
                        write!(f, "{q}")?;
                    } else if q.is_one() {
                        write!(f, "z{n}^{j}")?;
                    } else {
                        write!(f, "{q}*z{n}^{j}")?;
                    }
                }
                if first {
                    write!(f, "0")?;
                }
                Ok(())
            }
        }
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn mult_order(r: u64, p: u64) -> u64 {
    let mut x = r % p;
    let mut ord = 1;
    while x != 1 {
        x = ((x as u128 * r as u128) % p as u128) as u64;
        ord += 1;
    }
    ord
}

/// Coefficients of the n-th cyclotomic polynomial (low degree first),
/// by exact division of x^n − 1 by the proper-divisor factors.
pub fn cyclotomic_polynomial(n: u32) -> Vec<Rat> {
    if n == 1 {
        return vec![-Rat::one(), Rat::one()];
    }
    let mut num = vec![Rat::zero(); n as usize + 1];
    num[0] = -Rat::one();
    num[n as usize] = Rat::one();
    for d in 1..n {
        if n % d == 0 {
            num = poly_div_exact(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

/// Reduce a coefficient vector modulo Φ_n in place.
fn reduce_mod_phi(coeffs: &mut Vec<Rat>, n: u32) {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    while coeffs.len() > deg {
        let top = coeffs.len() - 1;
        let lead = coeffs[top].clone();
        if !lead.is_zero() {
            for (j, c) in phi.iter().enumerate().take(deg) {
                let idx = top - deg + j;
                let delta = &lead * c;
                coeffs[idx] -= delta;
            }
        }
        coeffs.truncate(top);
    }
    while coeffs.len() > 1 && coeffs.last().map(|q| q.is_zero()) == Some(true) {
        coeffs.pop();
    }
    if coeffs.is_empty() {
        coeffs.push(Rat::zero());
    }
}

/// Collapse a reduced coefficient vector to the rational variant when all
/// non-constant coefficients vanish.
fn normalize(n: u32, mut coeffs: Vec<Rat>) -> Cyclotomic {
    while coeffs.len() > 1 && coeffs.last().map(|q| q.is_zero()) == Some(true) {
        coeffs.pop();
    }
    if coeffs.len() <= 1 {
        return Cyclotomic::Rat(coeffs.pop().unwrap_or_else(Rat::zero));
    }
    Cyclotomic::Ext { n, coeffs }
}

/// Exact polynomial division (panics if the remainder is nonzero).
fn poly_div_exact(num: &[Rat], den: &[Rat]) -> Vec<Rat> {
    let dd = den.len() - 1;
    assert!(!den[dd].is_zero());
    let mut rem: Vec<Rat> = num.to_vec();
    let qd = num.len() - den.len();
    let mut quot = vec![Rat::zero(); qd + 1];
    for k in (0..=qd).rev() {
        let c = &rem[k + dd] / &den[dd];
        quot[k] = c.clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            let delta = &c * d;
            rem[k + j] -= delta;
        }
    }
    assert!(rem.iter().all(|q| q.is_zero()), "non-exact polynomial division");
    quot
}

/// Signum as an exact rational (convenience for character tables).
pub fn rat_sign(q: &Rat) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}
