//! Dirichlet characters with exact cyclotomic values.
//!
//! A character mod M is stored through exponents on a canonical generating
//! set of (Z/M)^×: the smallest primitive root for each odd prime-power
//! factor, 3 for the factor 4, and {−1, 5} for higher powers of two.
//! Values are exact `Cyclotomic` scalars, so quadratic characters stay in
//! rational arithmetic throughout.

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::{bernoulli_poly, prime_factors, primitive_root, rat_pow};
use crate::cyclotomic::Cyclotomic;
use crate::{Error, Rat, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
struct Component {
    /// Prime-power factor of the modulus.
    pe: u64,
    /// Generators of (Z/pe)^× with their orders, in canonical order.
    gens: Vec<(u64, u64)>,
    /// Character exponents: χ(g) = ζ_ord(g)^k for each generator g.
    exps: Vec<u64>,
}

/// A Dirichlet character of given modulus with exact cyclotomic values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletChar {
    modulus: u64,
    comps: Vec<Component>,
}

fn component_generators(pe: u64, p: u64) -> Vec<(u64, u64)> {
    if p == 2 {
        match pe {
            2 => vec![],
            4 => vec![(3, 2)],
            _ => vec![(pe - 1, 2), (5, pe / 4)],
        }
    } else {
        let g = primitive_root(pe);
        vec![(g, pe - pe / p)]
    }
}

impl DirichletChar {
    /// The canonical generator/order list for (Z/M)^×, concatenated over
    /// the prime-power factors of M in increasing order.
    pub fn generators(modulus: u64) -> Vec<(u64, u64)> {
        factor_prime_powers(modulus)
            .into_iter()
            .flat_map(|(p, pe)| component_generators(pe, p))
            .collect()
    }

    /// Build a character from one exponent per canonical generator:
    /// χ(g_j) = ζ_{ord(g_j)}^{exps[j]}.
    pub fn from_exponents(modulus: u64, exps: &[i64]) -> Result<Self> {
        assert!(modulus >= 1);
        let mut comps = Vec::new();
        let mut idx = 0;
        for (p, pe) in factor_prime_powers(modulus) {
            let gens = component_generators(pe, p);
            let mut comp_exps = Vec::new();
            for &(_, ord) in &gens {
                let e = exps.get(idx).copied().ok_or_else(|| {
                    Error::Usage(format!(
                        "character mod {modulus} needs {} exponents, got {}",
                        DirichletChar::generators(modulus).len(),
                        exps.len()
                    ))
                })?;
                comp_exps.push(e.rem_euclid(ord as i64) as u64);
                idx += 1;
            }
            comps.push(Component { pe, gens, exps: comp_exps });
        }
        if idx != exps.len() {
            return Err(Error::Usage(format!(
                "character mod {modulus} needs {idx} exponents, got {}",
                exps.len()
            )));
        }
        Ok(DirichletChar { modulus, comps })
    }

    pub fn trivial(modulus: u64) -> Self {
        let n = DirichletChar::generators(modulus).len();
        DirichletChar::from_exponents(modulus, &vec![0; n]).unwrap()
    }

    /// The quadratic character of modulus 3, 4, or an odd prime (Legendre
    /// symbol).
    pub fn quadratic(modulus: u64) -> Self {
        match modulus {
            3 | 4 => DirichletChar::from_exponents(modulus, &[1]).unwrap(),
            p if p > 2 && prime_factors(p) == vec![p] => {
                DirichletChar::from_exponents(p, &[((p - 1) / 2) as i64]).unwrap()
            }
            _ => panic!("no canonical quadratic character mod {modulus}"),
        }
    }

    /// Parse a character spec: `triv` / `quad3` / `quad4`, or
    /// `M` (trivial mod M), or `M:k1,k2,...` (generator exponents).
    pub fn parse_spec(s: &str) -> Result<Self> {
        match s {
            "triv" | "1" => return Ok(DirichletChar::trivial(1)),
            "quad3" => return Ok(DirichletChar::quadratic(3)),
            "quad4" => return Ok(DirichletChar::quadratic(4)),
            _ => {}
        }
        let bad = |m: &str| Error::Usage(format!("bad character spec '{s}': {m}"));
        if let Some((m, rest)) = s.split_once(':') {
            let modulus: u64 = m.parse().map_err(|_| bad("modulus"))?;
            let exps: Vec<i64> = rest
                .split(',')
                .map(|t| t.trim().parse::<i64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad("exponent list"))?;
            DirichletChar::from_exponents(modulus, &exps)
        } else {
            let modulus: u64 = s.parse().map_err(|_| bad("expected 'M' or 'M:k1,k2,...'"))?;
            Ok(DirichletChar::trivial(modulus))
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Order of the character in the dual group.
    pub fn order(&self) -> u64 {
        let mut n: u64 = 1;
        for c in &self.comps {
            for (&(_, ord), &e) in c.gens.iter().zip(&c.exps) {
                if e != 0 {
                    let g = gcd64(e, ord);
                    n = lcm64(n, ord / g);
                }
            }
        }
        n
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// χ(a) as an exact cyclotomic scalar (zero off units).
    pub fn value(&self, a: i64) -> Cyclotomic {
        let a = a.rem_euclid(self.modulus as i64) as u64;
        if self.modulus > 1 && gcd64(a, self.modulus) != 1 {
            return Cyclotomic::zero();
        }
        let mut acc = Cyclotomic::one();
        for c in &self.comps {
            let am = a % c.pe;
            for (&(g, ord), &e) in c.gens.iter().zip(&c.exps) {
                if e == 0 {
                    continue;
                }
                let d = dlog(am, g, ord, c.pe, &c.gens);
                acc = acc.mul(&Cyclotomic::zeta_pow(ord as u32, (e * d) as i64));
            }
        }
        acc
    }

    /// χ(−1) as ±1.
    pub fn parity(&self) -> i32 {
        let v = self.value(-1).try_to_rational().expect("χ(−1) is ±1");
        if v.is_one() {
            1
        } else {
            -1
        }
    }

    pub fn is_odd(&self) -> bool {
        self.parity() == -1
    }

    /// The inverse (conjugate) character.
    pub fn inverse(&self) -> Self {
        let mut out = self.clone();
        for c in &mut out.comps {
            for ((_, ord), e) in c.gens.iter().zip(c.exps.iter_mut()) {
                *e = (ord - *e) % ord;
            }
        }
        out
    }
}

impl std::fmt::Display for DirichletChar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let exps: Vec<String> = self
            .comps
            .iter()
            .flat_map(|c| c.exps.iter().map(|e| e.to_string()))
            .collect();
        if exps.is_empty() || self.is_trivial() {
            write!(f, "chi_{}(trivial)", self.modulus)
        } else {
            write!(f, "chi_{}[{}]", self.modulus, exps.join(","))
        }
    }
}

/// Discrete log of `a` in the cyclic group generated by `g` inside
/// (Z/pe)^×. For the two-generator 2-power case the other generator is
/// projected out first by brute force; moduli here are tiny.
fn dlog(a: u64, g: u64, ord: u64, pe: u64, gens: &[(u64, u64)]) -> u64 {
    if gens.len() == 1 {
        let mut x = 1u64;
        for d in 0..ord {
            if x == a % pe {
                return d;
            }
            x = mulmod(x, g, pe);
        }
        panic!("dlog: {a} not in <{g}> mod {pe}");
    }
    // 2-power case: a = (−1)^s 5^t; solve jointly.
    let (g0, o0) = gens[0];
    let (g1, o1) = gens[1];
    let mut x0 = 1u64;
    for s in 0..o0 {
        let mut x = x0;
        for t in 0..o1 {
            if x == a % pe {
                return if g == g0 { s } else { t };
            }
            x = mulmod(x, g1, pe);
        }
        x0 = mulmod(x0, g0, pe);
    }
    panic!("dlog: {a} is not a unit mod {pe}");
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn gcd64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd64(b, a % b)
    }
}

fn lcm64(a: u64, b: u64) -> u64 {
    a / gcd64(a, b) * b
}

fn factor_prime_powers(n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for p in prime_factors(n) {
        let mut pe = 1;
        let mut m = n;
        while m % p == 0 {
            pe *= p;
            m /= p;
        }
        out.push((p, pe));
    }
    out
}

/// Generalized Bernoulli number B_{n,χ} = M^{n−1} Σ_{a=1}^{M} χ(a) B_n(a/M).
pub fn gen_bernoulli(n: u32, chi: &DirichletChar) -> Cyclotomic {
    let m = chi.modulus();
    let mrat = Rat::from_integer(BigInt::from(m));
    let scale = rat_pow(&mrat, n as i64 - 1);
    let mut acc = Cyclotomic::zero();
    for a in 1..=m {
        let cv = chi.value(a as i64);
        if cv.is_zero() {
            continue;
        }
        let x = Rat::new(BigInt::from(a), BigInt::from(m));
        acc = acc.add(&cv.scale(&bernoulli_poly(n, &x)));
    }
    acc.scale(&scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn quadratic_characters() {
        let chi3 = DirichletChar::quadratic(3);
        assert_eq!(chi3.value(1), Cyclotomic::from_int(1));
        assert_eq!(chi3.value(2), Cyclotomic::from_int(-1));
        assert!(chi3.value(3).is_zero());
        assert_eq!(chi3.value(5), Cyclotomic::from_int(-1));
        assert_eq!(chi3.order(), 2);
        assert!(chi3.is_odd());

        let chi4 = DirichletChar::quadratic(4);
        assert_eq!(chi4.value(1), Cyclotomic::from_int(1));
        assert_eq!(chi4.value(3), Cyclotomic::from_int(-1));
        assert_eq!(chi4.value(5), Cyclotomic::from_int(1));
        assert!(chi4.value(2).is_zero());
        assert!(chi4.is_odd());

        // Legendre symbol mod 5: 2 and 3 are non-residues.
        let chi5 = DirichletChar::quadratic(5);
        assert_eq!(chi5.value(4), Cyclotomic::from_int(1));
        assert_eq!(chi5.value(2), Cyclotomic::from_int(-1));
        assert_eq!(chi5.parity(), 1);
    }

    #[test]
    fn quartic_character() {
        // Order-4 character mod 5: χ(2) = ζ₄.
        let chi = DirichletChar::from_exponents(5, &[1]).unwrap();
        assert_eq!(chi.order(), 4);
        assert_eq!(chi.value(2), Cyclotomic::zeta(4));
        assert_eq!(chi.value(4), Cyclotomic::from_int(-1));
        assert!(chi.is_odd());
        let inv = chi.inverse();
        assert_eq!(inv.value(2), Cyclotomic::zeta_pow(4, -1));
        assert!(chi.value(2).mul(&inv.value(2)).is_one());
    }

    #[test]
    fn composite_modulus() {
        // χ mod 12 = quad3 ⊗ quad4 (generators: 3 for factor 4, then 2 for 3).
        let gens = DirichletChar::generators(12);
        assert_eq!(gens.len(), 2);
        let chi = DirichletChar::from_exponents(12, &[1, 1]).unwrap();
        assert_eq!(chi.value(11), Cyclotomic::from_int(1)); // (−1)·(−1)
        assert_eq!(chi.order(), 2);
        assert_eq!(chi.parity(), 1);
        assert!(chi.value(2).is_zero());
        assert!(chi.value(3).is_zero());
    }

    #[test]
    fn generalized_bernoulli() {
        let chi3 = DirichletChar::quadratic(3);
        let chi4 = DirichletChar::quadratic(4);
        assert_eq!(gen_bernoulli(1, &chi3).try_to_rational(), Some(q(-1, 3)));
        assert_eq!(gen_bernoulli(3, &chi3).try_to_rational(), Some(q(2, 3)));
        assert_eq!(gen_bernoulli(5, &chi3).try_to_rational(), Some(q(-10, 3)));
        assert_eq!(gen_bernoulli(3, &chi4).try_to_rational(), Some(q(3, 2)));
        assert_eq!(gen_bernoulli(5, &chi4).try_to_rational(), Some(q(-25, 2)));
        // Parity kills even n for odd χ.
        assert!(gen_bernoulli(2, &chi3).is_zero());
        assert!(gen_bernoulli(4, &chi4).is_zero());
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(DirichletChar::parse_spec("quad3").unwrap(), DirichletChar::quadratic(3));
        assert_eq!(DirichletChar::parse_spec("triv").unwrap(), DirichletChar::trivial(1));
        assert_eq!(
            DirichletChar::parse_spec("5:1").unwrap(),
            DirichletChar::from_exponents(5, &[1]).unwrap()
        );
        assert!(DirichletChar::parse_spec("5:1,2").is_err());
        assert!(DirichletChar::parse_spec("x").is_err());
    }
}
