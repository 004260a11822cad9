//! Mellin transforms of boundary distributions and the p-adic L-functions
//! built from them.
//!
//! For a one-variable test function f the distribution ξ_f pairs with a
//! weight character s through
//!
//!   mellin(f, s) = −∫_{Z_p^×} z^{s−1} dξ_f(z).
//!
//! At integer s = n ≥ 1 the integral collapses to an exact difference of
//! ξ-moments, `−(ξ_f(x^{n−1}) − ξ_{f·[p|x]}(x^{n−1}))`; for f = [Z] this is
//! the classical value (1 − p^{n−1}) B_n / n. Everywhere else the integral
//! is evaluated by a Taylor-compensated Riemann sum: on each unit coset
//! b + p^N Z the character is expanded to degree d around b, the resulting
//! shifted moments of ξ_f are exact rationals, and only the character value
//! at b is a p-adic float.
//!
//! The Riemann path demands ∫ f dx = 0. When the mean vanishes ξ_f is an
//! honest p-adic measure and the sums converge fast — roughly (d + 1)
//! digits per level — to the canonical branch value, the one Kummer
//! congruences interpolate from the exact integer points. When the mean is
//! nonzero ξ_f is only a pseudo-measure: its Riemann sums still stabilize,
//! but to artifacts that depend on the expansion degree and miss the
//! interpolated value at every degree, which is the classical reason ζ_p
//! is built from the c-regulated combination [Z] − c·[cZ] rather than from
//! [Z] alone. Such pairings are refused as `Error::Unbounded` instead of
//! returning digits that defend nothing. Precision of accepted pairings is
//! certified by recomputing at level N + 1 and truncating to the observed
//! agreement, raising the level automatically while the request is unmet.
//!
//! On top of the transform sit the regularized zeta value ζ̂(s) =
//! mellin([Z] − c·[cZ], s) / (1 − c^s), Dirichlet L-values mellin(f_χ, s),
//! and the critical-slope L-function of the reducible eigenfunctions
//!
//!   L(s) = sgn(s) · (−1)^k k(k+1) binom(wt(s), k+1)
//!            · mellin(f₁, s ⊖ k) · mellin(f₂, ⊖s)      (k > 0),
//!   L(s) = −sgn(s) · wt(s) · mellin(f₁, s) · mellin(f₂, ⊖s)   (k = 0),
//!
//! with exact trivial zeros at the integers 0..k, a parity flag for
//! arguments off the supported sign component, and an independent
//! crosscheck at integer arguments via the unit-coset moment route
//! (1 − λ⁻¹ p^{m−k−1}) · EM(k, m).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{binomial_int, binomial_rational, rat_pow};
use crate::cyclotomic::Cyclotomic;
use crate::dirichlet::DirichletChar;
use crate::padic::{binom_weight, PadicNumber, WeightCharacter};
use crate::shintani::xi_moment_exact;
use crate::testfn::{make_f_ell, make_f_tau_psi, TestFn1, TestFn2};
use crate::{Error, Rat, Result};

fn rq(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

fn rqu(n: u64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Default auxiliary regulator for ζ̂ when the caller does not name one.
pub const DEFAULT_REGULATOR: u64 = 2;

/// How many extra Riemann levels a stabilization loop may add on its own
/// before giving up.
pub const AUTORAISE_MAX: u32 = 3;

/// Minimum stabilization agreement below which a value is rejected as
/// unbounded rather than returned with a tiny certificate.
const STABILIZE_MIN: i64 = 2;

/// How a numeric value was produced and how many digits its producer is
/// willing to certify.
#[derive(Debug, Clone)]
pub struct Certification {
    /// "exact", "riemann-taylor", or a composite label.
    pub method: String,
    /// Finest Riemann level actually used (0 for exact evaluations).
    pub level: u32,
    /// Taylor degree of the coset expansion (0 for exact evaluations).
    pub taylor: u32,
    /// Digits the caller asked for.
    pub requested_digits: u32,
    /// Digits certified by stabilization (= requested for exact values).
    pub certified_digits: i64,
}

impl Certification {
    fn exact(digits: u32) -> Self {
        Certification {
            method: "exact".into(),
            level: 0,
            taylor: 0,
            requested_digits: digits,
            certified_digits: digits as i64,
        }
    }
}

/// A certified p-adic value.
#[derive(Debug, Clone)]
pub struct LValue {
    pub value: PadicNumber,
    pub cert: Certification,
}

/// Exact value of mellin(f, n) at an integer n ≥ 1:
/// −(ξ_f(x^{n−1}) − ξ_{f·[x ≡ 0 mod p]}(x^{n−1})), a cyclotomic rational.
pub fn mellin_integer_exact(f: &TestFn1, p: u64, n: i64) -> Result<Cyclotomic> {
    if n < 1 {
        return Err(Error::Usage(format!(
            "exact Mellin values need an integer argument ≥ 1, got {n}"
        )));
    }
    let j = (n - 1) as u32;
    let full = xi_moment_exact(f, j);
    let dropped = xi_moment_exact(&f.restrict_coset(&Rat::zero(), &rqu(p)), j);
    Ok(full.sub(&dropped).neg())
}

/// One Taylor-compensated Riemann sum for −∫_{Z_p^×} z^{s−1} dξ_f at a
/// fixed level. Everything except the character value at the coset base
/// point is exact rational arithmetic.
fn riemann_sum(
    f: &TestFn1,
    s: &WeightCharacter,
    level: u32,
    taylor: u32,
    digits: u32,
) -> Result<PadicNumber> {
    let p = s.p();
    let pn_int = p.pow(level);
    let pn = rqu(pn_int);
    let work = digits + level + 6;
    let sm1 = s.shift(-1);
    // binom(wt(s) − 1, j): exact; vanishes past the weight for integer
    // weights ≥ 0, truncating the expansion naturally.
    let binoms: Vec<Rat> = (0..=taylor)
        .map(|j| binomial_rational(sm1.wt_rat(), j))
        .collect();
    let mut acc = PadicNumber::zero(p, work as i64);
    for b in 1..pn_int {
        if b % p == 0 {
            continue;
        }
        let fb = f.restrict_coset(&rqu(b), &pn);
        if fb.is_zero() {
            continue;
        }
        let raws: Vec<Cyclotomic> = (0..=taylor).map(|t| xi_moment_exact(&fb, t)).collect();
        // Σ_j binom(wt−1, j) b^{−j} · ∫ (z − b)^j dξ_f over the coset.
        let mut coset = Cyclotomic::zero();
        for j in 0..=taylor as usize {
            if binoms[j].is_zero() {
                continue;
            }
            let mut shifted = Cyclotomic::zero();
            for t in 0..=j {
                let w = binomial_int(j as i64, t as u32)
                    * rat_pow(&rq(-(b as i64)), (j - t) as i64);
                shifted = shifted.add(&raws[t].scale(&w));
            }
            if shifted.is_zero() {
                continue;
            }
            coset = coset.add(&shifted.scale(&(&binoms[j] * &rat_pow(&rqu(b), -(j as i64)))));
        }
        if coset.is_zero() {
            continue;
        }
        let chi_b = sm1.eval(&rqu(b), work);
        acc = acc.sub(&chi_b.mul(&coset.embed_padic(p, work)?));
    }
    Ok(acc)
}

/// mellin(f, s) with a stabilization certificate. Exact at integer s ≥ 1;
/// elsewhere f must have mean zero (ξ_f an honest measure) and Riemann sums
/// at consecutive levels are compared, raising the level (up to
/// `AUTORAISE_MAX` extra steps) until the requested digits are certified or
/// the budget is exhausted.
pub fn mellin(
    f: &TestFn1,
    s: &WeightCharacter,
    level: u32,
    taylor: u32,
    digits: u32,
) -> Result<LValue> {
    let p = s.p();
    if let Some(n) = s.int_tag() {
        if n >= 1 {
            let value = mellin_integer_exact(f, p, n)?.embed_padic(p, digits.max(1))?;
            return Ok(LValue { value, cert: Certification::exact(digits) });
        }
    }
    if !f.haar().is_zero() {
        return Err(Error::Unbounded(format!(
            "∫ f dx = {} ≠ 0, so ξ_f is only a pseudo-measure and its Riemann \
             sums stabilize to degree-dependent artifacts at {}; regulate the \
             test function first (e.g. [Z] − c·[cZ], or a mean-zero character \
             combination)",
            f.haar(),
            s
        )));
    }
    let base = level.max(1);
    let mut lo = riemann_sum(f, s, base, taylor, digits)?;
    let mut top = base + 1;
    let mut hi = riemann_sum(f, s, top, taylor, digits)?;
    loop {
        let agree = lo.agreement_digits(&hi);
        if agree >= digits as i64 || top > base + AUTORAISE_MAX {
            if agree < STABILIZE_MIN {
                return Err(Error::Unbounded(format!(
                    "Riemann sums at levels {} and {} agree to {} digit(s); the \
                     pairing of this test function with {} does not stabilize \
                     within the level budget",
                    top - 1,
                    top,
                    agree,
                    s
                )));
            }
            let certified = agree.min(digits as i64);
            let vref = if hi.is_zero_to_prec() { 0 } else { hi.valuation() };
            let value = hi.truncate_abs(vref + certified);
            return Ok(LValue {
                value,
                cert: Certification {
                    method: "riemann-taylor".into(),
                    level: top,
                    taylor,
                    requested_digits: digits,
                    certified_digits: certified,
                },
            });
        }
        lo = hi;
        top += 1;
        hi = riemann_sum(f, s, top, taylor, digits)?;
    }
}

/// The bare certified value of mellin(f, s).
pub fn mellin_value(
    f: &TestFn1,
    s: &WeightCharacter,
    level: u32,
    taylor: u32,
    digits: u32,
) -> Result<PadicNumber> {
    Ok(mellin(f, s, level, taylor, digits)?.value)
}

/// ζ̂(s) presented through an auxiliary regulator c: the numerator
/// mellin([Z] − c·[cZ], s) pairs a bounded combination, and the regulator
/// factor u_c(s) = 1 − c^s is divided out when invertible.
#[derive(Debug, Clone)]
pub struct RegularizedZeta {
    pub c: u64,
    /// mellin([Z] − c·[cZ], s), before dividing by the regulator factor.
    pub raw: LValue,
    /// u_c(s) = 1 − c^s (c^s read through the weight character).
    pub euler: PadicNumber,
    /// raw / u_c(s); absent when the factor vanishes to precision (s = 0).
    pub value: Option<PadicNumber>,
    pub note: Option<String>,
}

/// Regularized zeta value ζ̂(s) with regulator c.
pub fn zeta_p_regularized(
    c: u64,
    s: &WeightCharacter,
    level: u32,
    taylor: u32,
    digits: u32,
) -> Result<RegularizedZeta> {
    let p = s.p();
    if c < 2 || c % p == 0 {
        return Err(Error::Usage(format!(
            "regulator c = {c} must be ≥ 2 and prime to p = {p}"
        )));
    }
    let f = TestFn1::integers()
        .sub(&TestFn1::indicator(&Rat::zero(), &rqu(c)).scale_rat(&rqu(c)));
    let raw = mellin(&f, s, level, taylor, digits)?;
    let work = digits + 4;
    let one = PadicNumber::from_rat(&Rat::one(), p, work);
    let euler = one.sub(&s.eval(&rqu(c), work));
    if euler.is_zero_to_prec() {
        return Ok(RegularizedZeta {
            c,
            raw,
            euler,
            value: None,
            note: Some(
                "regulator factor 1 − c^s vanishes at this argument; only the raw \
                 regularized pairing is reported"
                    .into(),
            ),
        });
    }
    let lost = euler.valuation().max(0);
    let note = (lost > 0).then(|| {
        format!("regulator factor has valuation {lost}; that many digits are spent dividing it out")
    });
    let value = Some(raw.value.div(&euler));
    Ok(RegularizedZeta { c, raw, euler, value, note })
}

fn zeta_value(c: u64, s: &WeightCharacter, level: u32, taylor: u32, digits: u32) -> Result<PadicNumber> {
    let z = zeta_p_regularized(c, s, level, taylor, digits)?;
    z.value.ok_or_else(|| {
        Error::Hypothesis(format!("ζ̂ is singular at {s}: the regulator factor vanishes"))
    })
}

/// The p-adic Dirichlet L-value mellin(f_χ, s) for a character χ of
/// modulus prime to p. At integer n ≥ 1 this is the exact rational
/// (1 − χ(p) p^{n−1}) B_{n,χ} / n. The trivial character routes through
/// the regularized zeta value.
pub fn kubota_leopoldt(
    chi: &DirichletChar,
    s: &WeightCharacter,
    level: u32,
    taylor: u32,
    digits: u32,
) -> Result<LValue> {
    let p = s.p();
    if chi.modulus() % p == 0 {
        return Err(Error::Hypothesis(format!(
            "character modulus {} must be prime to p = {p}",
            chi.modulus()
        )));
    }
    if chi.is_trivial() {
        let z = zeta_p_regularized(DEFAULT_REGULATOR, s, level, taylor, digits)?;
        let value = z.value.ok_or_else(|| {
            Error::Hypothesis(format!("ζ̂ is singular at {s}: the regulator factor vanishes"))
        })?;
        let mut cert = z.raw.cert;
        cert.method = format!("zeta-regularized(c={DEFAULT_REGULATOR})");
        return Ok(LValue { value, cert });
    }
    mellin(&TestFn1::from_character(chi), s, level, taylor, digits)
}

/// The two-route payoff at an integer argument m for a factored evil
/// function f₁ ⊗ f₂ of slope weight k:
///
///   k > 0:  (−1)^{m−k} k(k+1) binom(m, k+1) · mellin(f₁, m−k) · mellin(f₂, −m)
///   k = 0:  (−1)^{m−1} m · mellin(f₁, m) · mellin(f₂, −m).
pub fn payoff(
    f1: &TestFn1,
    f2: &TestFn1,
    k: u32,
    m: i64,
    p: u64,
    level: u32,
    taylor: u32,
    digits: u32,
) -> Result<PadicNumber> {
    let coef: Rat = if k > 0 {
        let sign = if (m - k as i64).rem_euclid(2) == 0 { 1 } else { -1 };
        rq(sign * k as i64 * (k as i64 + 1)) * binomial_int(m, k + 1)
    } else {
        let sign = if m.rem_euclid(2) == 0 { -1 } else { 1 };
        rq(sign * m)
    };
    if coef.is_zero() {
        return Ok(PadicNumber::zero(p, digits as i64));
    }
    let m1 = mellin_value(f1, &WeightCharacter::integer(m - k as i64, p), level, taylor, digits)?;
    let m2 = mellin_value(f2, &WeightCharacter::integer(-m, p), level, taylor, digits)?;
    Ok(m1.mul(&m2).mul_rat(&coef))
}

/// A reducible critical-slope eigenfunction, named by what produces it:
/// the ℓ-type function [Z] ⊗ ([Z] − ℓ[ℓZ]) or the character-type function
/// f_{τ⁻¹} ⊗ dilate_{L}(f_ψ) with L the modulus of τ.
#[derive(Debug, Clone)]
pub enum EvilCase {
    Ell { ell: u64 },
    Char { tau: DirichletChar, psi: DirichletChar },
}

impl EvilCase {
    pub fn label(&self) -> String {
        match self {
            EvilCase::Ell { ell } => format!("ell={ell}"),
            EvilCase::Char { tau, psi } => {
                format!("tau mod {}, psi mod {}", tau.modulus(), psi.modulus())
            }
        }
    }

    /// The full two-variable test function.
    pub fn test_function(&self, p: u64) -> Result<TestFn2> {
        match self {
            EvilCase::Ell { ell } => make_f_ell(*ell, p),
            EvilCase::Char { tau, psi } => make_f_tau_psi(tau, psi, p),
        }
    }

    /// The declared factorization f = f₁ ⊗ f₂.
    pub fn factors(&self, p: u64) -> Result<(TestFn1, TestFn1)> {
        let f = self.test_function(p)?;
        let mut terms = f.factored_terms();
        if terms.len() != 1 {
            return Err(Error::Hypothesis(
                "the evil function must factor as a single product".into(),
            ));
        }
        let (c, f1, f2) = terms.pop().expect("nonempty");
        if !c.is_one() {
            return Err(Error::Hypothesis(
                "the evil factorization must carry coefficient 1".into(),
            ));
        }
        Ok((f1, f2))
    }

    /// U_p eigenvalue of the eigenfunction: 1 for the ℓ-case, τ(p) for the
    /// character case.
    pub fn lambda(&self, p: u64) -> Cyclotomic {
        match self {
            EvilCase::Ell { .. } => Cyclotomic::one(),
            EvilCase::Char { tau, .. } => tau.value(p as i64),
        }
    }

    /// Sign component carrying the L-function: (−1)^i must equal
    /// τ(−1)·(−1)^k, the parity of a weight-(k+2) form of this nebentypus.
    pub fn expected_sign(&self, k: u32) -> i32 {
        let kpar = if k % 2 == 0 { 1 } else { -1 };
        match self {
            EvilCase::Ell { .. } => kpar,
            EvilCase::Char { tau, .. } => tau.parity() * kpar,
        }
    }
}

/// sgn(s)·(−1)^k k(k+1) binom(wt(s), k+1) for k > 0; −sgn(s)·wt(s) for k = 0.
fn critical_prefactor(k: u32, s: &WeightCharacter, digits: u32) -> PadicNumber {
    if k > 0 {
        let par = if k % 2 == 0 { 1i64 } else { -1 };
        binom_weight(s, k + 1, digits)
            .mul_rat(&rq(s.sgn() as i64 * par * k as i64 * (k as i64 + 1)))
    } else {
        s.wt(digits).mul_rat(&rq(-(s.sgn() as i64)))
    }
}

#[derive(Debug, Clone)]
pub struct EvilFactors {
    pub prefactor: PadicNumber,
    /// mellin(f₁, s ⊖ k); ζ̂-regularized in the ℓ-case.
    pub first: PadicNumber,
    /// mellin(f₂, ⊖s).
    pub second: PadicNumber,
}

/// Independent evaluation of the same integer point through the unit-coset
/// moment route (1 − λ⁻¹ p^{m−k−1}) · EM(k, m).
#[derive(Debug, Clone)]
pub struct EvilCrosscheck {
    pub unit_moment_route: PadicNumber,
    pub difference: PadicNumber,
    pub agreement: i64,
}

#[derive(Debug, Clone)]
pub struct EvilValue {
    pub value: PadicNumber,
    /// Exact zero forced by the slope at integer s ∈ [0, k].
    pub trivial_zero: bool,
    pub expected_sign: i32,
    /// Whether sgn(s) lies on the supported component; off-component values
    /// are still returned (they vanish by parity) but flagged.
    pub sign_ok: bool,
    pub factors: Option<EvilFactors>,
    pub crosscheck: Option<EvilCrosscheck>,
    pub cert: Certification,
}

/// The critical-slope p-adic L-function of an evil eigenfunction.
pub fn evil_lp(
    case: &EvilCase,
    k: u32,
    s: &WeightCharacter,
    c_reg: u64,
    level: u32,
    taylor: u32,
    digits: u32,
) -> Result<EvilValue> {
    let p = s.p();
    let expected_sign = case.expected_sign(k);
    let sign_ok = s.sgn() == expected_sign;
    if let Some(n) = s.int_tag() {
        if (0..=k as i64).contains(&n) {
            return Ok(EvilValue {
                value: PadicNumber::zero(p, digits as i64),
                trivial_zero: true,
                expected_sign,
                sign_ok,
                factors: None,
                crosscheck: None,
                cert: Certification::exact(digits),
            });
        }
    }
    let (f1, f2) = case.factors(p)?;
    let s1 = s.shift(-(k as i64));
    let s2 = s.negate();
    // Trivial τ makes f₁ the bare [Z], whose boundary distribution is only
    // a pseudo-measure; its Mellin factor is ζ̂ and goes through the
    // regulator, exactly as in the ℓ-case. Positive integer arguments take
    // the exact path either way.
    let zeta_first = match case {
        EvilCase::Ell { .. } => true,
        EvilCase::Char { tau, .. } => tau.is_trivial(),
    };
    let m1 = if zeta_first && !matches!(s1.int_tag(), Some(n) if n >= 1) {
        let z = zeta_p_regularized(c_reg, &s1, level, taylor, digits)?;
        let value = z.value.ok_or_else(|| {
            Error::Hypothesis(
                "the ζ̂ factor is singular at s ⊖ k = 0; integer points of the \
                 critical strip are trivial zeros and are handled exactly"
                    .into(),
            )
        })?;
        LValue { value, cert: z.raw.cert }
    } else {
        mellin(&f1, &s1, level, taylor, digits)?
    };
    let m2 = mellin(&f2, &s2, level, taylor, digits)?;
    let work = digits + 4;
    let pref = critical_prefactor(k, s, work);
    let value = pref.mul(&m1.value).mul(&m2.value);
    let crosscheck = match s.int_tag() {
        Some(m) if m > k as i64 => {
            let em = crate::shintani::evil_moment(
                &f1,
                &f2,
                k,
                m as u32,
                p,
                level.max(2),
                taylor,
                digits,
            )?;
            let lam = case.lambda(p).embed_padic(p, work)?;
            let one = PadicNumber::from_rat(&Rat::one(), p, work);
            let euler = one.sub(&lam.inv().mul_rat(&rat_pow(&rqu(p), m - k as i64 - 1)));
            let route = em.mul(&euler);
            let difference = value.sub(&route);
            let agreement = value.agreement_digits(&route);
            Some(EvilCrosscheck { unit_moment_route: route, difference, agreement })
        }
        _ => None,
    };
    let certified = m1.cert.certified_digits.min(m2.cert.certified_digits);
    Ok(EvilValue {
        value,
        trivial_zero: false,
        expected_sign,
        sign_ok,
        factors: Some(EvilFactors {
            prefactor: pref,
            first: m1.value,
            second: m2.value,
        }),
        crosscheck,
        cert: Certification {
            method: format!("{} × {}", m1.cert.method, m2.cert.method),
            level: m1.cert.level.max(m2.cert.level),
            taylor,
            requested_digits: digits,
            certified_digits: certified,
        },
    })
}

/// One row of the ℓ-case factorization check at an even integer s = n:
/// the computed value against n(1 − ℓⁿ)·ζ̂(⊖n)·ζ̂(n), bare and with the
/// extra ℓ^{−n} factor the computation actually carries.
#[derive(Debug, Clone)]
pub struct Case2Row {
    pub s: i64,
    pub lhs: PadicNumber,
    pub rhs_bare: PadicNumber,
    pub rhs_factored: PadicNumber,
    pub agreement_factored: i64,
    pub residual_bare: PadicNumber,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct Case2Report {
    pub p: u64,
    pub ell: u64,
    pub c_list: Vec<u64>,
    /// Cross-regulator agreement of the ζ̂(⊖n) factor (None with one c).
    pub c_agreement: Option<i64>,
    pub vanishes_at_zero: bool,
    pub rows: Vec<Case2Row>,
    pub pass: bool,
}

/// Verify the ℓ-case factorization L(s) = wt(s)(1 − ℓ^s) ℓ^{−s} ζ̂(s) ζ̂(⊖s)
/// at even integers, reporting both the factored form and the bare form
/// (whose residual the report keeps visible).
pub fn theorem_c_case2(
    p: u64,
    ell: u64,
    s_list: &[i64],
    c_list: &[u64],
    level: u32,
    taylor: u32,
    digits: u32,
    min_agree: i64,
) -> Result<Case2Report> {
    if c_list.is_empty() {
        return Err(Error::Usage("at least one regulator c is required".into()));
    }
    let case = EvilCase::Ell { ell };
    let c0 = c_list[0];
    let zero_point = evil_lp(&case, 0, &WeightCharacter::integer(0, p), c0, level, taylor, digits)?;
    let vanishes_at_zero = zero_point.trivial_zero && zero_point.value.is_zero_to_prec();
    let mut rows = Vec::new();
    let mut c_agreement: Option<i64> = None;
    for &n in s_list {
        let sc = WeightCharacter::integer(n, p);
        let lhs = evil_lp(&case, 0, &sc, c0, level, taylor, digits)?.value;
        let zpos = zeta_value(c0, &sc, level, taylor, digits)?;
        let mut znegs = Vec::new();
        for &c in c_list {
            znegs.push(zeta_value(c, &sc.negate(), level, taylor, digits)?);
        }
        for w in znegs.windows(2) {
            let a = w[0].agreement_digits(&w[1]);
            c_agreement = Some(c_agreement.map_or(a, |b| b.min(a)));
        }
        let coef = rq(n) * (Rat::one() - rat_pow(&rqu(ell), n));
        let rhs_bare = zpos.mul(&znegs[0]).mul_rat(&coef);
        let rhs_factored = rhs_bare.mul_rat(&rat_pow(&rqu(ell), -n));
        let agreement_factored = lhs.agreement_digits(&rhs_factored);
        let residual_bare = lhs.sub(&rhs_bare);
        let pass = agreement_factored >= min_agree;
        rows.push(Case2Row {
            s: n,
            lhs,
            rhs_bare,
            rhs_factored,
            agreement_factored,
            residual_bare,
            pass,
        });
    }
    let pass = vanishes_at_zero
        && rows.iter().all(|r| r.pass)
        && c_agreement.map_or(c_list.len() < 2, |a| a >= min_agree);
    Ok(Case2Report { p, ell, c_list: c_list.to_vec(), c_agreement, vanishes_at_zero, rows, pass })
}

/// One row of the character-case factorization check at an integer s = m:
/// the computed value against the Dirichlet L-product under the two
/// candidate argument conventions.
#[derive(Debug, Clone)]
pub struct Case1Row {
    pub s: i64,
    pub computed: PadicNumber,
    /// prefactor · L_p(τ⁻¹, s ⊖ k) · L_p(ψ, ⊖s) · (⊖s⊖1)(L). `None` when a
    /// trivial-character factor sits at its ζ̂ pole (argument z^0): the
    /// product is a 0·∞ form there and asserts nothing.
    pub proof_shift: Option<PadicNumber>,
    /// Same product with integer arguments (s − k − 1, 1 − s); `None` as
    /// above (the pole moves to s = k + 1 under this shift).
    pub statement_shift: Option<PadicNumber>,
    pub proof_agreement: Option<i64>,
    pub statement_agreement: Option<i64>,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct Case1Report {
    pub p: u64,
    pub k: u32,
    /// Which argument convention the computation matches.
    pub convention: String,
    /// Whether some nonzero row separates the two conventions. Character
    /// pairs with τ(−1) ≠ ψ(−1) can never discriminate: the two Mellin
    /// factors live on complementary parity components, so the L-value and
    /// both printed products vanish at every integer point.
    pub discriminated: bool,
    pub rows: Vec<Case1Row>,
    pub pass: bool,
}

/// Verify the character-case factorization into two Dirichlet L-values and
/// decide which argument convention the computed product satisfies.
///
/// Discrimination needs a live point, which needs τ(−1) = ψ(−1): the two
/// factors demand arguments of their own character's parity, and both
/// printed shifts hand the two factors same-parity arguments. Pairs of
/// opposite parity yield an identically vanishing report (`discriminated`
/// stays false and `convention` says so).
#[allow(clippy::too_many_arguments)]
pub fn theorem_c_case1(
    tau: &DirichletChar,
    psi: &DirichletChar,
    k: u32,
    p: u64,
    s_list: &[i64],
    level: u32,
    taylor: u32,
    digits: u32,
    min_agree: i64,
) -> Result<Case1Report> {
    let case = EvilCase::Char { tau: tau.clone(), psi: psi.clone() };
    let big_l = tau.modulus();
    let taui = tau.inverse();
    let work = digits + 4;
    // A trivial-character Kubota–Leopoldt factor is the regularized ζ̂,
    // which is singular at z^0; a product containing that pole is a 0·∞
    // form (the prefactor vanishes there) and is reported as undefined.
    let kl = |chi: &DirichletChar, n: i64| -> Result<Option<PadicNumber>> {
        if chi.is_trivial() && n == 0 {
            return Ok(None);
        }
        Ok(Some(
            kubota_leopoldt(chi, &WeightCharacter::integer(n, p), level, taylor, digits)?.value,
        ))
    };
    let mut rows = Vec::new();
    let mut discriminated = false;
    for &m in s_list {
        let sc = WeightCharacter::integer(m, p);
        let computed = evil_lp(&case, k, &sc, DEFAULT_REGULATOR, level, taylor, digits)?.value;
        let pref = critical_prefactor(k, &sc, work);
        let elementary = sc.negate().shift(-1).eval(&rqu(big_l), work);
        let product = |a: Option<PadicNumber>, b: Option<PadicNumber>| {
            Some(pref.mul(&a?).mul(&b?).mul(&elementary))
        };
        let proof_shift = product(kl(&taui, m - k as i64)?, kl(psi, -m)?);
        let statement_shift = product(kl(&taui, m - k as i64 - 1)?, kl(psi, 1 - m)?);
        let proof_agreement = proof_shift.as_ref().map(|v| computed.agreement_digits(v));
        let statement_agreement = statement_shift.as_ref().map(|v| computed.agreement_digits(v));
        // Only a nonzero value can separate the conventions: it must match
        // the proof shift and either miss the statement shift or sit where
        // the statement product is singular.
        if !computed.is_zero_to_prec()
            && proof_agreement.is_some_and(|a| a >= min_agree)
            && !statement_agreement.is_some_and(|a| a >= min_agree)
        {
            discriminated = true;
        }
        // A row with a singular proof side can only assert the trivial zero.
        let pass = match proof_agreement {
            Some(a) => a >= min_agree,
            None => computed.is_zero_to_prec(),
        };
        rows.push(Case1Row {
            s: m,
            computed,
            proof_shift,
            statement_shift,
            proof_agreement,
            statement_agreement,
            pass,
        });
    }
    let all = rows.iter().all(|r| r.pass);
    let all_zero = rows.iter().all(|r| r.computed.is_zero_to_prec());
    let convention = if all && discriminated {
        "shifted arguments (s ⊖ k, ⊖s)".to_string()
    } else if all && all_zero {
        "indistinguishable: every tested value vanishes (parity)".to_string()
    } else if all {
        "both conventions agree on this range".to_string()
    } else {
        "unmatched".to_string()
    };
    Ok(Case1Report { p, k, convention, discriminated, rows, pass: all && discriminated })
}
