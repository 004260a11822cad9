//! Integer and rational helpers: generalized binomials, Bernoulli numbers
//! and polynomials, modular arithmetic on big integers.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rat;

/// Generalized binomial coefficient `x (x−1) … (x−n+1) / n!` for rational
/// `x` and non-negative integer `n`.
///
/// `binomial_rational(-1, 3) = -1`, `binomial_rational(-2, 2) = 3`,
/// `binomial_rational(k, k+1) = 0` for integer `k ≥ 0`.
pub fn binomial_rational(x: &Rat, n: u32) -> Rat {
    let mut num = Rat::one();
    let mut t = x.clone();
    for _ in 0..n {
        num *= &t;
        t -= Rat::one();
    }
    num / Rat::from_integer(factorial(n))
}

/// Integer binomial coefficient as a rational (convenience wrapper).
pub fn binomial_int(m: i64, n: u32) -> Rat {
    binomial_rational(&Rat::from_integer(BigInt::from(m)), n)
}

/// `n!` as a big integer.
pub fn factorial(n: u32) -> BigInt {
    let mut f = BigInt::one();
    for k in 2..=n as u64 {
        f *= BigInt::from(k);
    }
    f
}

/// First `n+1` Bernoulli numbers `B_0 … B_n` (convention `B_1 = −1/2`),
/// via the recurrence `Σ_{k≤m} binom(m+1,k) B_k = 0`.
pub fn bernoulli_numbers(n: u32) -> Vec<Rat> {
    let mut b: Vec<Rat> = Vec::with_capacity(n as usize + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(Rat::one());
            continue;
        }
        // B_m = −1/(m+1) Σ_{k<m} binom(m+1,k) B_k
        let mut s = Rat::zero();
        for (k, bk) in b.iter().enumerate() {
            s += binomial_int((m + 1) as i64, k as u32) * bk;
        }
        b.push(-s / Rat::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// Bernoulli polynomial `B_n(x) = Σ_k binom(n,k) B_k x^{n−k}`.
///
/// `B_1(0) = −1/2`, `B_2(0) = 1/6`.
pub fn bernoulli_poly(n: u32, x: &Rat) -> Rat {
    let b = bernoulli_numbers(n);
    let mut acc = Rat::zero();
    let mut xpow = Rat::one(); // x^{n-k} built from k = n downwards
    for k in (0..=n).rev() {
        acc += binomial_int(n as i64, k) * &b[k as usize] * &xpow;
        xpow *= x;
    }
    acc
}

/// p-adic valuation of a non-zero integer.
pub fn valuation_int(n: &BigInt, p: u64) -> u64 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        n = q;
    }
}

/// p-adic valuation of a non-zero rational.
pub fn valuation_rat(q: &Rat, p: u64) -> i64 {
    assert!(!q.is_zero(), "valuation of zero");
    valuation_int(q.numer(), p) as i64 - valuation_int(q.denom(), p) as i64
}

/// `v_p(n!) = Σ floor(n/p^i)` (Legendre).
pub fn valuation_factorial(n: u32, p: u64) -> u64 {
    let mut v = 0u64;
    let mut q = n as u64 / p;
    while q > 0 {
        v += q;
        q /= p;
    }
    v
}

/// Modular inverse of `a` modulo `m > 1` (requires gcd(a,m) = 1).
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "mod_inverse: arguments not coprime");
    e.x.mod_floor(m)
}

/// Canonical representative of `x` in `[0, m)` for rational modulus `m > 0`.
pub fn rat_mod(x: &Rat, m: &Rat) -> Rat {
    let q = (x / m).floor();
    x - q * m
}

/// Canonical representative of `x` in `(0, m]` (the cone-side convention:
/// the residue of 0 is represented by m).
pub fn rat_mod_upper(x: &Rat, m: &Rat) -> Rat {
    let r = rat_mod(x, m);
    if r.is_zero() {
        m.clone()
    } else {
        r
    }
}

/// Generator of the group rZ + sZ ⊆ Q: gcd(n1/d1, n2/d2) =
/// gcd(n1·d2, n2·d1)/(d1·d2). Zero arguments behave as for integers.
pub fn rat_gcd(r: &Rat, s: &Rat) -> Rat {
    let d = r.denom() * s.denom();
    let g = (r.numer() * s.denom()).gcd(&(s.numer() * r.denom()));
    Rat::new(g, d)
}

/// Generator of rZ ∩ sZ ⊆ Q (zero if either is zero).
pub fn rat_lcm(r: &Rat, s: &Rat) -> Rat {
    if r.is_zero() || s.is_zero() {
        return Rat::zero();
    }
    let d = r.denom() * s.denom();
    let l = (r.numer() * s.denom()).lcm(&(s.numer() * r.denom()));
    Rat::new(l, d)
}

/// `base^exp` for rational base (exp may be negative; base must be non-zero
/// for negative exponents).
pub fn rat_pow(base: &Rat, exp: i64) -> Rat {
    if exp >= 0 {
        num_traits::pow::Pow::pow(base.clone(), exp as u64)
    } else {
        num_traits::pow::Pow::pow(base.clone().recip(), (-exp) as u64)
    }
}

/// Smallest primitive root modulo an odd prime power `p^e` (also valid for
/// `p^e = 2, 4`). Panics for moduli without primitive roots.
pub fn primitive_root(pe: u64) -> u64 {
    if pe == 2 {
        return 1;
    }
    if pe == 4 {
        return 3;
    }
    let p = smallest_prime_factor(pe);
    assert!(p % 2 == 1 && is_prime_power(pe, p), "no primitive root mod {pe}");
    let phi = pe / p * (p - 1);
    let factors = prime_factors(phi);
    'g: for g in 2..pe {
        if g % p == 0 {
            continue;
        }
        for q in &factors {
            if pow_mod(g, phi / q, pe) == 1 {
                continue 'g;
            }
        }
        return g;
    }
    unreachable!("primitive root search exhausted")
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 1;
    }
    n
}

fn is_prime_power(mut n: u64, p: u64) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// Distinct prime factors of `n`.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `b^e mod m` on machine words (m² must fit in u128).
pub fn pow_mod(b: u64, e: u64, m: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut b: u128 = (b % m) as u128;
    let m = m as u128;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc as u64
}

/// `p^n` as BigUint.
pub fn big_pow(p: u64, n: u32) -> BigUint {
    num_traits::pow::Pow::pow(BigUint::from(p), n)
}
