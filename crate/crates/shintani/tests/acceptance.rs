//! Acceptance gate: one test per advertised guarantee, one verdict line each.
//!
//! Run `cargo test --test acceptance -- --test-threads=1 --nocapture` to see
//! the verdict lines with timings; under the default capture the test names
//! alone carry the same verdicts. Criteria with a stated runtime budget
//! assert it; the suite is built for a single core, so budgets are wall time
//! of the one test.
//!
//! Criterion 7 — naming the shift convention on the (τ trivial, ψ quadratic
//! mod 3) instance — is reported NOT MET AS STATED and kept red on purpose:
//! that pair is parity-dead. τ(−1) ≠ ψ(−1) forces the two Mellin factors
//! onto complementary parity components of weight space, so the L-value and
//! both candidate products vanish at every integer point and no point can
//! name a convention. The test pins that analysis exactly, and a second test
//! shows the parity-matched companion (τ quadratic mod 4, ψ quadratic mod 3)
//! resolving the convention cleanly at six points.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

use shintani::cyclotomic::Cyclotomic;
use shintani::dirichlet::{gen_bernoulli, DirichletChar};
use shintani::hecke::{
    check_f_ell_eigen, check_f_tau_psi_eigen, check_t_q_lemma, check_u_p_lemmas, EigenCheck,
};
use shintani::lfunction::{kubota_leopoldt, payoff, theorem_c_case1, theorem_c_case2, EvilCase};
use shintani::mat2::Cusp;
use shintani::padic::{PadicNumber, WeightCharacter};
use shintani::series::{LaurentSeries, LinearForm};
use shintani::shintani::{
    evil_moment, mu_coset_moment, psi_divisor, up_eigen_check, xi_moment, UpEigenConfig,
};
use shintani::testfn::{make_f_ell, make_f_tau_psi, TestFn1, TestFn2};
use shintani::Rat;

fn rq(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

fn rqu(n: u64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

fn rpow(b: &Rat, e: i64) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..e.unsigned_abs() {
        acc *= b;
    }
    if e < 0 {
        acc = acc.recip();
    }
    acc
}

fn verdict(line: &str, t: Instant) {
    println!("{line}  [{:.1}s]", t.elapsed().as_secs_f64());
}

fn within(t: Instant, secs: u64, label: &str) {
    let e = t.elapsed();
    assert!(
        e <= Duration::from_secs(secs),
        "{label}: runtime {e:?} exceeds the {secs}s budget"
    );
}

fn all_pass(checks: &[EigenCheck]) -> bool {
    checks.iter().all(|c| c.pass)
}

#[test]
fn criterion_01_hecke_identity_suite_exact() {
    let t = Instant::now();
    let mut checks = Vec::new();
    for q in [2, 3, 5, 7, 11, 13] {
        checks.push(check_t_q_lemma(q));
    }
    for p in [3, 5, 7] {
        checks.extend(check_u_p_lemmas(p));
    }
    checks.extend(check_f_ell_eigen(7, 5, &[2, 3, 11, 13]).unwrap());
    checks.extend(check_f_ell_eigen(11, 3, &[2, 5, 7, 13]).unwrap());
    let triv = DirichletChar::trivial(1);
    let quad3 = DirichletChar::quadratic(3);
    let quad4 = DirichletChar::quadratic(4);
    checks.extend(check_f_tau_psi_eigen(&triv, &quad3, 5, &[2, 7, 11, 13]).unwrap());
    checks.extend(check_f_tau_psi_eigen(&quad4, &quad3, 5, &[7, 11, 13]).unwrap());
    let n = checks.len();
    let ok = all_pass(&checks);
    verdict(
        &format!("criterion  1: {}  Hecke identities exact, {n} canonical-form checks (T_q lemma q=2..13, U_p lemmas p=3,5,7, eigen suites for two lattice-type and two character-type functions)", if ok { "PASS" } else { "FAIL" }),
        t,
    );
    for c in checks.iter().filter(|c| !c.pass) {
        println!("  failed: {} under {}", c.function, c.operator);
    }
    assert!(ok, "a Hecke canonical-form identity failed");
    within(t, 10, "criterion 1");
}

#[test]
fn criterion_02_vanishing_hypothesis_exact() {
    let t = Instant::now();
    let mut n = 0usize;
    for (ell, p) in [(7u64, 3u64), (7, 5), (11, 3), (11, 5)] {
        let f = make_f_ell(ell, p).unwrap();
        assert!(
            f.vanishing_check(&Cusp::from_ints(0, 1)).0,
            "f'_{ell} must vanish at 0 (p={p})"
        );
        n += 1;
        for a in 1..p {
            assert!(
                f.vanishing_check(&Cusp::from_ints(a as i64, p as i64)).0,
                "f'_{ell} must vanish at {a}/{p}"
            );
            n += 1;
        }
    }
    let triv = DirichletChar::trivial(1);
    let quad3 = DirichletChar::quadratic(3);
    let quad4 = DirichletChar::quadratic(4);
    let char_cases: [(&DirichletChar, &DirichletChar, u64); 3] =
        [(&triv, &quad3, 5), (&quad4, &quad3, 5), (&quad4, &quad4, 3)];
    for (tau, psi, p) in char_cases {
        let f = make_f_tau_psi(tau, psi, p).unwrap();
        for a in 1..p {
            assert!(
                f.vanishing_check(&Cusp::from_ints(a as i64, p as i64)).0,
                "character-type function (tau mod {}, psi mod {}) must vanish at {a}/{p}",
                tau.modulus(),
                psi.modulus()
            );
            n += 1;
        }
    }
    let (bare, witness) = TestFn2::standard().vanishing_check(&Cusp::from_ints(0, 1));
    assert!(!bare, "[Z^2] does not satisfy the vanishing hypothesis at 0");
    assert!(witness.is_some(), "the failure must come with a witness line");
    n += 1;
    verdict(
        &format!("criterion  2: PASS  vanishing hypothesis exact at {n} cusps (eigenfunctions vanish at 0 and a/p; bare [Z^2] correctly fails with a witness)"),
        t,
    );
    within(t, 5, "criterion 2");
}

#[test]
fn criterion_03_distribution_relations_200_randomized_cases() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0003);
    let mut failures = 0usize;

    // ξ-moment refinement additivity: ξ_j(f) = Σ_{i mod c} ξ_j(f·[i + cZ]).
    let moduli = [1u64, 2, 3, 4, 6];
    let random_f1 = |rng: &mut ChaCha8Rng| {
        let mut f = TestFn1::zero();
        for _ in 0..rng.gen_range(1..=3) {
            let m = moduli[rng.gen_range(0..moduli.len())];
            let a = rng.gen_range(0..m);
            let c = rng.gen_range(-3i64..=3);
            if c != 0 {
                f = f.add(&TestFn1::indicator(&rqu(a), &rqu(m)).scale_rat(&rq(c)));
            }
        }
        f
    };
    let xi_cases = 140;
    for _ in 0..xi_cases {
        let f = random_f1(&mut rng);
        let j = rng.gen_range(0..=8u32);
        let c = [2u64, 3, 5][rng.gen_range(0..3)];
        let total = xi_moment(&f, j, j + 2).unwrap();
        let mut sum = Cyclotomic::zero();
        for i in 0..c {
            sum = sum.add(&xi_moment(&f.restrict_coset(&rqu(i), &rqu(c)), j, j + 2).unwrap());
        }
        if !total.sub(&sum).is_zero() {
            failures += 1;
        }
    }

    // μ-moment level refinement: the shifted moment over (a, b) + p^N Z²
    // equals the binomially recombined sum over its p² sub-cosets at level
    // N + 1 (non-unit columns cannot appear: b is a unit).
    let p = 3u64;
    let mu_cases = 60;
    for _ in 0..mu_cases {
        let f = TestFn2::product_of(&random_f1(&mut rng), &random_f1(&mut rng));
        let level = rng.gen_range(1..=2u32);
        let pn = p.pow(level);
        let a = rng.gen_range(0..pn);
        let b = loop {
            let b = rng.gen_range(1..pn);
            if b % p != 0 {
                break b;
            }
        };
        let i = rng.gen_range(0..=4u32);
        let j = rng.gen_range(0..=4u32);
        let budget = i + j + 2;
        let lhs = mu_coset_moment(&f, p, level, a, b, i, j, budget).unwrap();
        let mut rhs = Cyclotomic::zero();
        for s in 0..p {
            for u in 0..p {
                let (a2, b2) = (a + s * pn, b + u * pn);
                for r in 0..=i {
                    for v in 0..=j {
                        let coef = shintani::arith::binomial_int(i as i64, r)
                            * shintani::arith::binomial_int(j as i64, v)
                            * rpow(&rqu(s * pn), (i - r) as i64)
                            * rpow(&rqu(u * pn), (j - v) as i64);
                        if coef.is_zero() {
                            continue;
                        }
                        let part =
                            mu_coset_moment(&f, p, level + 1, a2, b2, r, v, budget).unwrap();
                        rhs = rhs.add(&part.scale(&coef));
                    }
                }
            }
        }
        if !lhs.sub(&rhs).is_zero() {
            failures += 1;
        }
    }

    verdict(
        &format!(
            "criterion  3: {}  distribution relations exact on {} randomized cases ({xi_cases} ξ-refinements to degree 8, {mu_cases} μ level-refinements through level 3): {failures} failures",
            if failures == 0 { "PASS" } else { "FAIL" },
            xi_cases + mu_cases
        ),
        t,
    );
    assert_eq!(failures, 0, "a distribution relation failed");
}

#[test]
fn criterion_04_kubota_leopoldt_interpolation() {
    let t = Instant::now();
    let p = 5u64;
    let mut min_agree = i64::MAX;
    for chi in [DirichletChar::quadratic(3), DirichletChar::quadratic(4)] {
        for n in 1..=6i64 {
            let got = kubota_leopoldt(&chi, &WeightCharacter::integer(n, p), 2, 8, 8)
                .unwrap()
                .value;
            // −(1 − χ(p)p^{n−1})·L(χ⁻¹, 1−n) with L(χ, 1−n) = −B_{n,χ}/n;
            // quadratic χ is self-inverse.
            let bn = gen_bernoulli(n as u32, &chi).try_to_rational().unwrap();
            let chi_p = chi.value(p as i64).try_to_rational().unwrap();
            let expected = (Rat::one() - chi_p * rpow(&rqu(p), n - 1)) * bn / rq(n);
            let want = PadicNumber::from_rat(&expected, p, 8);
            let agree = got.agreement_digits(&want);
            min_agree = min_agree.min(agree);
            assert!(
                agree >= 5,
                "L_p interpolation (chi mod {}, n={n}): {got} vs {want}, {agree} digits",
                chi.modulus()
            );
        }
    }
    verdict(
        &format!("criterion  4: PASS  Kubota–Leopoldt interpolation at p=5, both quadratic characters, n=1..6: ≥{min_agree} of 8 digits against the generalized-Bernoulli values (bar: 5)"),
        t,
    );
    within(t, 120, "criterion 4");
}

#[test]
fn criterion_05_two_path_agreement() {
    let t = Instant::now();
    let quad3 = DirichletChar::quadratic(3);
    let cases = [
        (EvilCase::Ell { ell: 11 }, 3u64, 3u32),
        (EvilCase::Ell { ell: 7 }, 5, 2),
        (
            EvilCase::Char { tau: DirichletChar::trivial(1), psi: quad3.clone() },
            5,
            2,
        ),
    ];
    let (taylor, digits) = (8u32, 6u32);
    let mut min_agree = i64::MAX;
    let mut points = 0usize;
    for (case, p, level) in cases {
        let (f1, f2) = case.factors(p).unwrap();
        let lam = case.lambda(p).embed_padic(p, digits + 4).unwrap();
        let one = PadicNumber::from_rat(&Rat::one(), p, digits + 4);
        for k in [0u32, 2] {
            for m in k..=k + 6 {
                let direct = payoff(&f1, &f2, k, m as i64, p, level, taylor, digits).unwrap();
                let moment = evil_moment(&f1, &f2, k, m, p, level, taylor, digits).unwrap();
                let euler =
                    one.sub(&lam.inv().mul_rat(&rpow(&rqu(p), m as i64 - k as i64 - 1)));
                let route = moment.mul(&euler);
                let agree = direct.agreement_digits(&route);
                min_agree = min_agree.min(agree);
                points += 1;
                assert!(
                    agree >= 4,
                    "two-path disagreement for {} at p={p}, k={k}, m={m}: {direct} vs {route} ({agree} digits)",
                    case.label()
                );
            }
        }
    }
    verdict(
        &format!("criterion  5: PASS  two-path agreement (Mellin payoff vs unit-coset moment × restriction factor) at {points} points, k∈{{0,2}}, m=k..k+6, three eigenfunctions: ≥{min_agree} of {digits} digits (bar: 4)"),
        t,
    );
    within(t, 600, "criterion 5");
}

#[test]
fn criterion_06_case2_factorization_p3_ell11() {
    let t = Instant::now();
    let report = theorem_c_case2(3, 11, &[2, 4, 6], &[2, 7], 3, 8, 6, 4).unwrap();
    let row_min = report.rows.iter().map(|r| r.agreement_factored).min().unwrap();
    verdict(
        &format!(
            "criterion  6: {}  ℓ-case factorization at p=3, ℓ=11, k=0: L(s) = s(1−ℓ^s)ℓ^(−s)ζ̂(s)ζ̂(⊖s) at s=2,4,6 to ≥{row_min} of 6 digits (bar: 4), regulators c=2,7 agree to {} digits, trivial zero at s=0: {}",
            if report.pass { "PASS" } else { "FAIL" },
            report.c_agreement.unwrap_or(0),
            report.vanishes_at_zero
        ),
        t,
    );
    assert!(report.vanishes_at_zero, "the s=0 trivial zero is missing");
    assert!(report.rows.iter().all(|r| r.pass), "a factorization row fell under 4 digits");
    assert!(report.c_agreement.unwrap_or(0) >= 4, "regulator cross-check under 4 digits");
    assert!(report.pass);
}

#[test]
fn criterion_07_shift_resolution_not_met_as_stated_parity_dead() {
    let t = Instant::now();
    let triv = DirichletChar::trivial(1);
    let quad3 = DirichletChar::quadratic(3);
    let report = theorem_c_case1(&triv, &quad3, 2, 5, &[2, 3, 4, 5, 6, 7], 2, 8, 5, 3).unwrap();
    verdict(
        &format!(
            "criterion  7: NOT MET AS STATED  the (τ trivial, ψ quad mod 3) instance cannot name a shift convention: τ(−1) ≠ ψ(−1) makes every integer value vanish (verdict: \"{}\"); kept red — see the companion test for the resolving pair",
            report.convention
        ),
        t,
    );
    // Pin the analysis: the value and both candidate products vanish at
    // every tested point, wherever the products are defined at all; each
    // convention owns one genuinely singular row (the ζ̂ pole at z^0 sits
    // at s = k on the one shift and s = k + 1 on the other), and no row can
    // discriminate. The report stays honest: rows pass as consistent zeros,
    // the overall verdict does not.
    assert!(!report.discriminated, "a parity-dead pair must not discriminate");
    assert!(!report.pass, "the overall verdict must stay red without discrimination");
    assert!(report.convention.contains("indistinguishable"));
    for row in &report.rows {
        assert!(row.computed.is_zero_to_prec(), "s={} should vanish", row.s);
        assert!(row.pass, "s={} zero should be consistent with both products", row.s);
        if row.s == 2 {
            assert!(row.proof_shift.is_none(), "s=k hits the ζ̂ pole on the proof shift");
        }
        if row.s == 3 {
            assert!(row.statement_shift.is_none(), "s=k+1 hits the pole on the statement shift");
        }
    }
}

#[test]
fn criterion_07_companion_quad4_quad3_names_the_proof_shift() {
    let t = Instant::now();
    let quad4 = DirichletChar::quadratic(4);
    let quad3 = DirichletChar::quadratic(3);
    // s = 3 is a genuine zero — the first factor's Euler term 1 − τ(5)·5⁰
    // vanishes because τ(5) = 1 — so it checks consistency (0 against 0)
    // but cannot resolve anything; the six points past it are all live.
    let s_list = [3i64, 5, 7, 9, 11, 13, 15];
    let report = theorem_c_case1(&quad4, &quad3, 2, 5, &s_list, 2, 8, 5, 3).unwrap();
    let live = report
        .rows
        .iter()
        .filter(|r| !r.computed.is_zero_to_prec() && r.proof_agreement.is_some())
        .count();
    verdict(
        &format!(
            "criterion  7*: PASS (companion)  the parity-matched pair (τ quad mod 4, ψ quad mod 3) resolves the convention: \"{}\" at {live}/{} correct-sign points, k=2, p=5 (bar: one convention at ≥6 points; the seventh point is an interpolation-forced zero both conventions reproduce)",
            report.convention,
            s_list.len()
        ),
        t,
    );
    assert!(report.discriminated, "a live point must separate the conventions");
    assert!(report.pass);
    assert_eq!(report.convention, "shifted arguments (s ⊖ k, ⊖s)");
    assert!(live >= 6, "need ≥6 resolving points, got {live}");
    assert!(report.rows.iter().all(|r| r.pass));
}

#[test]
fn criterion_08_up_eigen_property() {
    let t = Instant::now();
    let quad3 = DirichletChar::quadratic(3);
    let quad4 = DirichletChar::quadratic(4);
    let instances: [(EvilCase, u64); 4] = [
        (EvilCase::Ell { ell: 11 }, 3),
        (EvilCase::Ell { ell: 7 }, 5),
        (EvilCase::Char { tau: quad4.clone(), psi: quad4.clone() }, 3),
        (EvilCase::Char { tau: quad4.clone(), psi: quad3.clone() }, 5),
    ];
    let mut lines = Vec::new();
    for (case, p) in &instances {
        let f = match case {
            EvilCase::Ell { ell } => make_f_ell(*ell, *p).unwrap(),
            EvilCase::Char { tau, psi } => make_f_tau_psi(tau, psi, *p).unwrap(),
        };
        let lam = case.lambda(*p);
        for k in [0u32, 2] {
            let cfg = UpEigenConfig {
                level: 1,
                taylor: 8,
                digits: 6,
                max_m: 6,
                min_agree: 3,
                truncation: 0,
            };
            let report = up_eigen_check(&f, &lam, k, *p, &cfg).unwrap();
            let worst = report.moments.iter().map(|r| r.agreement).min().unwrap_or(0);
            lines.push(format!(
                "{} at p={p}, k={k}, λ={lam}: {} (moments m≤6 agree to ≥{worst} digits)",
                case.label(),
                if report.pass { "pass" } else { "FAIL" }
            ));
            assert!(
                report.hypothesis_vanishing.iter().all(|(_, ok)| *ok),
                "vanishing hypothesis failed for {} at p={p}",
                case.label()
            );
            assert!(report.pass, "U_p eigen-property failed: {}", lines.last().unwrap());
        }
    }
    verdict(
        &format!("criterion  8: PASS  U_p almost-eigen property at 8 (function, p, k) combinations, moments m≤6, ≥3 digits each"),
        t,
    );
    for l in lines {
        println!("  {l}");
    }
    within(t, 600, "criterion 8");
}

#[test]
fn criterion_09_pole_structure_random_divisors() {
    let t = Instant::now();
    // Deterministic pin first: the bare lattice keeps both axis poles of
    // Ψ({∞, 0}), so the checks below cannot pass vacuously.
    let base = psi_divisor(
        &TestFn2::standard(),
        &Cusp::infinity(),
        &Cusp::from_ints(0, 1),
        6,
    )
    .unwrap();
    assert_eq!(base.series.reduce().dens().len(), 2, "[Z^2] must keep both poles");

    let matches_cusp = |form: &LinearForm, cusp: &Cusp| -> bool {
        (form.u() * &cusp.den - form.v() * &cusp.num).is_zero()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x0009);
    let random_cusp = |rng: &mut ChaCha8Rng| loop {
        let num = rng.gen_range(-9i64..=9);
        let den = rng.gen_range(0i64..=9);
        if num != 0 || den != 0 {
            return Cusp::from_ints(num, den);
        }
    };
    let f_ell = make_f_ell(7, 5).unwrap();
    let f_bare = TestFn2::standard();
    let mut good_seen = 0usize;
    let mut poles_seen = 0usize;
    for case in 0..10 {
        // Alternate a function with good cusps (0 and a/5) and the bare
        // lattice; steer half the eigenfunction divisors through 0 so good
        // cusps genuinely occur in the sample.
        let f = if case % 2 == 0 { &f_ell } else { &f_bare };
        let r = if case % 4 == 0 { Cusp::from_ints(0, 1) } else { random_cusp(&mut rng) };
        let s = loop {
            let s = random_cusp(&mut rng);
            if (&r.num * &s.den - &r.den * &s.num) != BigInt::zero() {
                break s;
            }
        };
        let psi = psi_divisor(f, &r, &s, 6).unwrap();
        let reduced = psi.series.reduce();
        // Every surviving pole form lies on one of the two predicted lines,
        // and a good cusp contributes none.
        for form in reduced.dens() {
            assert!(
                matches_cusp(form, &r) || matches_cusp(form, &s),
                "unpredicted pole form {}X+{}Y for divisor {{{r}, {s}}}",
                form.u(),
                form.v()
            );
            poles_seen += 1;
        }
        for cusp in [&r, &s] {
            if f.vanishing_check(cusp).0 {
                good_seen += 1;
                assert!(
                    reduced.dens().iter().all(|d| !matches_cusp(d, cusp)),
                    "good cusp {cusp} kept its pole factor in {{{r}, {s}}}"
                );
            }
        }
        // Multiplying by the two predicted forms clears everything.
        let mut num = reduced.numerator().clone();
        for cusp in [&r, &s] {
            let form = LinearForm::from_rational(
                &Rat::from_integer(cusp.num.clone()),
                &Rat::from_integer(cusp.den.clone()),
            )
            .0;
            num = num.mul(&form.to_series());
        }
        let cleared = LaurentSeries::new(num, reduced.dens().to_vec());
        assert!(
            cleared.as_power_series().is_some(),
            "poles of {{{r}, {s}}} do not clear after multiplying the predicted forms"
        );
    }
    assert!(good_seen > 0, "the sample never exercised a good cusp");
    assert!(poles_seen > 0, "the sample never exercised a surviving pole");
    verdict(
        &format!("criterion  9: PASS  pole structure exact on 10 random divisors: {poles_seen} surviving poles all on predicted cusp lines, {good_seen} good-cusp factors dropped, every product clears"),
        t,
    );
}

#[test]
fn criterion_10_low_moments_vanish_exactly() {
    let t = Instant::now();
    let quad3 = DirichletChar::quadratic(3);
    let quad4 = DirichletChar::quadratic(4);
    let cases = [
        (EvilCase::Ell { ell: 11 }, 3u64),
        (EvilCase::Ell { ell: 7 }, 5),
        (EvilCase::Char { tau: quad4, psi: quad3 }, 5),
    ];
    let mut zeros = 0usize;
    for (case, p) in &cases {
        let (f1, f2) = case.factors(*p).unwrap();
        for k in [2u32, 4] {
            for m in 0..k {
                let em = evil_moment(&f1, &f2, k, m, *p, 2, 8, 6).unwrap();
                assert!(
                    em.is_zero_to_prec() && em.abs_prec() >= 6,
                    "moment m={m} < k={k} must vanish exactly for {} at p={p}",
                    case.label()
                );
                zeros += 1;
            }
        }
    }
    // Non-vacuity: the first moment above the weight is genuinely nonzero.
    let (f1, f2) = EvilCase::Ell { ell: 11 }.factors(3).unwrap();
    let above = evil_moment(&f1, &f2, 2, 4, 3, 3, 8, 6).unwrap();
    assert!(!above.is_zero_to_prec(), "the m=4, k=2 moment should be nonzero");
    verdict(
        &format!("criterion 10: PASS  {zeros} moments below the critical weight vanish exactly (k∈{{2,4}}, m<k, three eigenfunctions), and the first moment above is nonzero"),
        t,
    );
}
