//! Deterministic command-line front end.
//!
//! Subcommands expose the pipeline with machine-readable output:
//!
//! * `lp evil` / `lp kl` — L-values of critical-slope Eisenstein
//!   eigenfunctions and Kubota–Leopoldt L-functions,
//! * `zeta` — the c-regularized p-adic zeta value,
//! * `moments` — the coset moment table of a test function (CSV or JSON),
//! * `verify hecke|vanishing|theorem-c|up` — the verification suites, with
//!   a nonzero exit status when any check fails.
//!
//! Output is byte-identical for identical flags: JSON objects are emitted
//! with sorted keys, every p-adic value carries its precision (`O(p^N)`),
//! and rationals are printed as exact numerator/denominator pairs — no
//! floats anywhere. Exit codes: 0 success, 1 verification/computation
//! failure, 2 malformed flags, 3 hypothesis violation (as structured error
//! JSON on stdout). The optional `PADIC_SHINTANI_THREADS` environment
//! variable caps the worker pool for parallel table builds.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::cyclotomic::Cyclotomic;
use crate::dirichlet::DirichletChar;
use crate::hecke::{
    check_f_ell_eigen, check_f_tau_psi_eigen, check_t_q_lemma, check_u_p_lemmas, EigenCheck,
};
use crate::lattice::Lattice2;
use crate::lfunction::{
    evil_lp, kubota_leopoldt, theorem_c_case1, theorem_c_case2, zeta_p_regularized, Certification,
    EvilCase,
};
use crate::mat2::Cusp;
use crate::padic::{PadicNumber, WeightCharacter};
use crate::shintani::{up_eigen_check, MomentTable, UpEigenConfig};
use crate::testfn::{make_f_ell, make_f_tau_psi, TestFn2};
use crate::{Error, Rat, Result};

#[derive(Parser, Debug)]
#[command(
    name = "shintani",
    version,
    about = "Exact p-adic L-functions of critical-slope Eisenstein series",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// p-adic L-values (evil Eisenstein series, Kubota-Leopoldt).
    #[command(subcommand)]
    Lp(LpCommand),
    /// The c-regularized p-adic zeta value at a weight character.
    Zeta(ZetaArgs),
    /// Dump the coset moment table of a test function.
    Moments(MomentsArgs),
    /// Verification suites; exits 1 when any check fails.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Subcommand, Debug)]
enum LpCommand {
    /// L-function of a critical-slope Eisenstein eigenfunction.
    Evil(EvilArgs),
    /// Kubota-Leopoldt L-function of a Dirichlet character.
    Kl(KlArgs),
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// Hecke operator lemmas and eigenfunction identities (exact).
    Hecke(HeckeArgs),
    /// Vanishing of a test function at the critical cusps (exact).
    Vanishing(VanishingArgs),
    /// Factorization of the evil L-function into classical p-adic L-values.
    TheoremC(TheoremCArgs),
    /// U_p eigen-symbol property via transported cone series.
    Up(UpArgs),
}

/// Shared numeric configuration (the `--p ...` block of every subcommand).
#[derive(Args, Debug, Clone)]
struct Config {
    /// Odd prime p.
    #[arg(long, value_parser = parse_prime)]
    p: u64,
    /// Requested p-adic digits.
    #[arg(long, default_value_t = 6)]
    prec: u32,
    /// Series truncation budget D (0 = derive the minimum from the request).
    #[arg(long, default_value_t = 0)]
    trunc: u32,
    /// Riemann level N: unit cosets mod p^N (auto-raised to certify).
    #[arg(long, default_value_t = 2)]
    level: u32,
    /// Taylor degree d of the local coset expansion.
    #[arg(long, default_value_t = 8)]
    taylor: u32,
    /// Output format (csv is defined for moments, verify hecke, vanishing).
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for randomized subcommands (echoed; none of the current
    /// subcommands draw randomness, so it only pins the output header).
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum CaseKind {
    /// f'_ℓ = ([Z] ⊗ ([Z] − ℓ[ℓZ])): the level-Γ₀(ℓ) family.
    Ell,
    /// f'_{τ,ψ}: the level-Γ₁(ML) character family.
    Char,
}

/// Test-function selection shared by `moments` and the `verify` suites:
/// one of the named eigenfunction families or a raw coset-list JSON.
#[derive(Args, Debug, Clone)]
struct FnSelect {
    /// Eigenfunction family (inferred from --ell / --tau when omitted).
    #[arg(long, value_enum)]
    case: Option<CaseKind>,
    /// Auxiliary prime ℓ (≠ p) for the ℓ-case.
    #[arg(long)]
    ell: Option<u64>,
    /// Character τ: triv | quad3 | quad4 | M:k1,k2,... | M (trivial mod M).
    #[arg(long)]
    tau: Option<String>,
    /// Character ψ, same grammar as --tau.
    #[arg(long)]
    psi: Option<String>,
    /// Raw test function: inline JSON
    /// {"terms":[{"coeff":"c","offset":["r","r"],"lattice":[["a","b"],["c","d"]]}]}
    /// (lattice rows are generators; rationals as "n/d" strings or integers),
    /// or a path to a file holding that JSON.
    #[arg(long)]
    raw: Option<String>,
}

#[derive(Args, Debug)]
struct EvilArgs {
    #[command(flatten)]
    config: Config,
    #[command(flatten)]
    select: FnSelect,
    /// Critical slope weight parameter k (even).
    #[arg(long, default_value_t = 0)]
    k: u32,
    /// Evaluation point: int:n or char:i,w (w a rational in Z_p).
    #[arg(long)]
    s: String,
    /// Regulator c for the ζ̂ factor (trivial-character components).
    #[arg(long, default_value_t = 2)]
    c: u64,
}

#[derive(Args, Debug)]
struct KlArgs {
    #[command(flatten)]
    config: Config,
    /// Dirichlet character: triv | quad3 | quad4 | M:k1,k2,... | M.
    #[arg(long)]
    tau: String,
    /// Evaluation point: int:n or char:i,w.
    #[arg(long)]
    s: String,
}

#[derive(Args, Debug)]
struct ZetaArgs {
    #[command(flatten)]
    config: Config,
    /// Regulator c > 1 prime to p.
    #[arg(long, default_value_t = 2)]
    c: u64,
    /// Evaluation point: int:n or char:i,w.
    #[arg(long)]
    s: String,
}

#[derive(Args, Debug)]
struct MomentsArgs {
    #[command(flatten)]
    config: Config,
    #[command(flatten)]
    select: FnSelect,
    /// Largest moment degree tabulated (both variables).
    #[arg(long, default_value_t = 3)]
    degree: u32,
}

#[derive(Args, Debug)]
struct HeckeArgs {
    #[command(flatten)]
    config: Config,
    #[command(flatten)]
    select: FnSelect,
    /// Tame primes for the T_q checks (default: 2,3,5,7,11,13 minus bad ones).
    #[arg(long, value_delimiter = ',')]
    qs: Option<Vec<u64>>,
}

#[derive(Args, Debug)]
struct VanishingArgs {
    #[command(flatten)]
    config: Config,
    #[command(flatten)]
    select: FnSelect,
    /// Cusps to check, e.g. "0,1/5,inf" (default: 0 and a/p for unit a).
    #[arg(long, value_delimiter = ',')]
    cusps: Option<Vec<String>>,
}

#[derive(Args, Debug)]
struct TheoremCArgs {
    #[command(flatten)]
    config: Config,
    #[command(flatten)]
    select: FnSelect,
    /// Critical slope weight parameter k (even).
    #[arg(long, default_value_t = 0)]
    k: u32,
    /// Integer evaluation points, inclusive (e.g. 1..9).
    #[arg(long)]
    s_range: String,
    /// Regulators for the ζ̂ factors of the ℓ-case (cross-checked when > 1).
    #[arg(long, value_delimiter = ',', default_values_t = [2u64, 7])]
    c: Vec<u64>,
    /// Agreement bar in p-adic digits.
    #[arg(long, default_value_t = 4)]
    min_agree: i64,
}

#[derive(Args, Debug)]
struct UpArgs {
    #[command(flatten)]
    config: Config,
    #[command(flatten)]
    select: FnSelect,
    /// Critical slope weight parameter k (even).
    #[arg(long, default_value_t = 0)]
    k: u32,
    /// Largest moment compared.
    #[arg(long, default_value_t = 6)]
    max_m: u32,
    /// Agreement bar in p-adic digits.
    #[arg(long, default_value_t = 3)]
    min_agree: i64,
    /// β-eigenvalue λ for --raw functions (rational; named cases set it).
    #[arg(long)]
    lambda: Option<String>,
}

/// Parse flags, run the subcommand, and return the process exit status.
pub fn run() -> i32 {
    init_thread_pool();
    let cli = Cli::parse(); // malformed flags exit 2 here
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            let (kind, code) = error_kind(&e);
            let out = json!({ "error": { "kind": kind, "message": e.to_string() } });
            println!("{}", serde_json::to_string_pretty(&out).expect("error json"));
            code
        }
    }
}

fn init_thread_pool() {
    if let Ok(v) = std::env::var("PADIC_SHINTANI_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n >= 1 {
                // Ignore failure: the global pool can only be set once.
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn error_kind(e: &Error) -> (&'static str, i32) {
    match e {
        Error::Hypothesis(_) => ("hypothesis", 3),
        Error::Usage(_) => ("usage", 2),
        Error::Unbounded(_) => ("unbounded", 1),
        Error::InsufficientTruncation { .. } => ("insufficient-truncation", 1),
        Error::NonUnitResidue { .. } => ("non-unit-residue", 1),
        Error::EqualCusps => ("equal-cusps", 1),
        Error::Embedding(_) => ("embedding", 1),
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Lp(LpCommand::Evil(a)) => lp_evil(a),
        Command::Lp(LpCommand::Kl(a)) => lp_kl(a),
        Command::Zeta(a) => zeta(a),
        Command::Moments(a) => moments(a),
        Command::Verify(VerifyCommand::Hecke(a)) => verify_hecke(a),
        Command::Verify(VerifyCommand::Vanishing(a)) => verify_vanishing(a),
        Command::Verify(VerifyCommand::TheoremC(a)) => verify_theorem_c(a),
        Command::Verify(VerifyCommand::Up(a)) => verify_up(a),
    }
}

// ---------------------------------------------------------------- parsing

fn parse_prime(s: &str) -> std::result::Result<u64, String> {
    let p: u64 = s.parse().map_err(|_| format!("'{s}' is not an integer"))?;
    if p <= 2 || crate::arith::prime_factors(p) != vec![p] {
        return Err(format!("p = {p} must be an odd prime"));
    }
    Ok(p)
}

fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::Usage(format!("expected a rational 'a' or 'a/b', got '{s}'"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: num_bigint::BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: num_bigint::BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

/// `int:n` or `char:i,w` with `w` a rational in Z_p.
fn parse_weight(spec: &str, p: u64) -> Result<WeightCharacter> {
    if let Some(n) = spec.strip_prefix("int:") {
        let n: i64 = n
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("bad integer in --s '{spec}'")))?;
        return Ok(WeightCharacter::integer(n, p));
    }
    if let Some(rest) = spec.strip_prefix("char:") {
        let (i, w) = rest
            .split_once(',')
            .ok_or_else(|| Error::Usage(format!("--s character form is char:i,w, got '{spec}'")))?;
        let i: u32 = i
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("bad tame exponent in --s '{spec}'")))?;
        let w = parse_rat(w)?;
        if crate::arith::valuation_int(w.denom(), p) != 0 {
            return Err(Error::Usage(format!(
                "wild weight {w} does not lie in Z_{p} (denominator divisible by {p})"
            )));
        }
        return Ok(WeightCharacter::from_parts(i, w, p));
    }
    Err(Error::Usage(format!("--s takes 'int:n' or 'char:i,w', got '{spec}'")))
}

/// Inclusive integer range `a..b`.
fn parse_range(s: &str) -> Result<Vec<i64>> {
    let bad = || Error::Usage(format!("expected an inclusive range 'a..b', got '{s}'"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if b < a || b - a > 256 {
        return Err(bad());
    }
    Ok((a..=b).collect())
}

fn parse_cusp(s: &str) -> Result<Cusp> {
    let t = s.trim();
    if t == "inf" || t == "infinity" {
        return Ok(Cusp::infinity());
    }
    let bad = || Error::Usage(format!("expected a cusp 'a', 'a/b', or 'inf', got '{s}'"));
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t, "1"),
    };
    let n: i64 = n.trim().parse().map_err(|_| bad())?;
    let d: i64 = d.trim().parse().map_err(|_| bad())?;
    if n == 0 && d == 0 {
        return Err(bad());
    }
    Ok(Cusp::from_ints(n, d))
}

fn json_rat(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat(s),
        Value::Number(n) => n
            .as_i64()
            .map(|n| Rat::from_integer(num_bigint::BigInt::from(n)))
            .ok_or_else(|| Error::Usage(format!("'{n}' is not an exact integer; no floats"))),
        _ => Err(Error::Usage(format!("expected a rational, got {v}"))),
    }
}

fn json_pair(v: Option<&Value>, what: &str) -> Result<(Rat, Rat)> {
    let arr = v
        .and_then(|v| v.as_array())
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::Usage(format!("{what} must be a 2-element array")))?;
    Ok((json_rat(&arr[0])?, json_rat(&arr[1])?))
}

/// Parse the raw coset-list schema
/// `{"terms":[{"coeff":c, "offset":[r,r], "lattice":[[a,b],[c,d]]}]}`
/// where lattice rows are the two generators.
fn testfn_from_json(text: &str) -> Result<TestFn2> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| Error::Usage(format!("bad test-function JSON: {e}")))?;
    let terms = v
        .get("terms")
        .and_then(|t| t.as_array())
        .ok_or_else(|| Error::Usage("test-function JSON needs a 'terms' array".into()))?;
    if terms.is_empty() {
        return Err(Error::Usage("test-function JSON has no terms".into()));
    }
    let mut f = TestFn2::zero();
    for t in terms {
        let coeff = match t.get("coeff") {
            Some(c) => json_rat(c)?,
            None => Rat::from_integer(num_bigint::BigInt::from(1)),
        };
        let offset = json_pair(t.get("offset"), "offset")?;
        let lat = t
            .get("lattice")
            .and_then(|l| l.as_array())
            .filter(|l| l.len() == 2)
            .ok_or_else(|| Error::Usage("lattice must be a 2x2 array of rationals".into()))?;
        let g1 = json_pair(Some(&lat[0]), "lattice row")?;
        let g2 = json_pair(Some(&lat[1]), "lattice row")?;
        let det = &g1.0 * &g2.1 - &g1.1 * &g2.0;
        if det.is_zero() {
            return Err(Error::Usage("lattice generators are linearly dependent".into()));
        }
        let term = TestFn2::indicator(offset, Lattice2::hnf_basis(&[g1, g2])).scale_rat(&coeff);
        f = f.add(&term);
    }
    Ok(f)
}

/// A resolved test function: display label, the function, the eigen case
/// when it is one of the named families, and its β-eigenvalue λ.
struct Selected {
    label: String,
    f: TestFn2,
    case: Option<EvilCase>,
    lambda: Cyclotomic,
}

impl FnSelect {
    fn kind(&self) -> Result<CaseKind> {
        if let Some(k) = self.case {
            return Ok(k);
        }
        if self.ell.is_some() {
            return Ok(CaseKind::Ell);
        }
        if self.tau.is_some() || self.psi.is_some() {
            return Ok(CaseKind::Char);
        }
        Err(Error::Usage(
            "select a test function: --case ell --ell L, --case char --tau T --psi P, \
             or --raw <json|path>"
                .into(),
        ))
    }

    fn resolve(&self, p: u64) -> Result<Selected> {
        if let Some(raw) = &self.raw {
            let text = if raw.trim_start().starts_with('{') {
                raw.clone()
            } else {
                std::fs::read_to_string(raw)
                    .map_err(|e| Error::Usage(format!("cannot read --raw file '{raw}': {e}")))?
            };
            return Ok(Selected {
                label: "raw".into(),
                f: testfn_from_json(&text)?,
                case: None,
                lambda: Cyclotomic::one(),
            });
        }
        match self.kind()? {
            CaseKind::Ell => {
                let ell = self
                    .ell
                    .ok_or_else(|| Error::Usage("the ℓ-case needs --ell".into()))?;
                Ok(Selected {
                    label: format!("f'_{ell}"),
                    f: make_f_ell(ell, p)?,
                    case: Some(EvilCase::Ell { ell }),
                    lambda: Cyclotomic::one(),
                })
            }
            CaseKind::Char => {
                let tau = DirichletChar::parse_spec(
                    self.tau
                        .as_deref()
                        .ok_or_else(|| Error::Usage("the character case needs --tau".into()))?,
                )?;
                let psi = DirichletChar::parse_spec(
                    self.psi
                        .as_deref()
                        .ok_or_else(|| Error::Usage("the character case needs --psi".into()))?,
                )?;
                let lambda = tau.value(p as i64);
                Ok(Selected {
                    label: format!("f'_({},{})", tau.modulus(), psi.modulus()),
                    f: make_f_tau_psi(&tau, &psi, p)?,
                    case: Some(EvilCase::Char { tau, psi }),
                    lambda,
                })
            }
        }
    }
}

// ---------------------------------------------------------- serialization

fn pnum(x: &PadicNumber) -> Value {
    let digits = if x.is_zero_to_prec() {
        "0".to_string()
    } else {
        format!("{}*{}^{}", x.unit_part(), x.p(), x.valuation())
    };
    json!({
        "digits": digits,
        "precision": format!("O({}^{})", x.p(), x.abs_prec()),
        "valuation": if x.is_zero_to_prec() { Value::Null } else { x.valuation().into() },
    })
}

fn rnum(q: &Rat) -> Value {
    json!({ "numerator": q.numer().to_string(), "denominator": q.denom().to_string() })
}

fn cyc(c: &Cyclotomic) -> Value {
    match c.try_to_rational() {
        Some(q) => rnum(&q),
        None => json!({ "cyclotomic": c.to_string() }),
    }
}

fn weight_json(s: &WeightCharacter) -> Value {
    match s.int_tag() {
        Some(n) => json!({ "integer": n }),
        None => json!({ "i": s.tame_exponent(), "w": rnum(s.wt_rat()) }),
    }
}

fn emit(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

/// Stderr warnings when the certification had to move past the request.
fn warn_cert(cfg: &Config, cert: &Certification) {
    if cert.method != "exact" && cert.level > cfg.level {
        eprintln!(
            "warning: Riemann level auto-raised {} -> {} to certify stabilization",
            cfg.level, cert.level
        );
    }
    if cert.certified_digits < cert.requested_digits as i64 {
        eprintln!(
            "warning: certified {} of {} requested digits; raise --level or lower --prec",
            cert.certified_digits, cert.requested_digits
        );
    }
}

fn require_json(cfg: &Config, sub: &str) -> Result<()> {
    if cfg.format == Format::Csv {
        return Err(Error::Usage(format!(
            "csv output is not defined for {sub}; use --format json"
        )));
    }
    Ok(())
}

// ----------------------------------------------------------- subcommands

fn lp_evil(a: EvilArgs) -> Result<i32> {
    require_json(&a.config, "lp evil")?;
    let p = a.config.p;
    let sel = a.select.resolve(p)?;
    let case = sel.case.ok_or_else(|| {
        Error::Usage("lp evil needs a named eigenfunction family (--case ell or char)".into())
    })?;
    let s = parse_weight(&a.s, p)?;
    let v = evil_lp(&case, a.k, &s, a.c, a.config.level, a.config.taylor, a.config.prec)?;
    warn_cert(&a.config, &v.cert);
    let factors = v.factors.as_ref().map(|f| {
        json!({
            "prefactor": pnum(&f.prefactor),
            "first": pnum(&f.first),
            "second": pnum(&f.second),
        })
    });
    let crosscheck = v.crosscheck.as_ref().map(|c| {
        json!({
            "other_path_value": pnum(&c.unit_moment_route),
            "difference_valuation": c.difference.valuation(),
            "agreement_digits": c.agreement,
        })
    });
    let out = json!({
        "case": case.label(),
        "p": p,
        "k": a.k,
        "s": weight_json(&s),
        "level": v.cert.level,
        "taylor": v.cert.taylor,
        "truncation": a.config.trunc,
        "regulator": a.c,
        "value": pnum(&v.value),
        "trivial_zero": v.trivial_zero,
        "expected_sign": v.expected_sign,
        "sign_ok": v.sign_ok,
        "factors": factors,
        "crosscheck": crosscheck,
        "method": v.cert.method,
        "certified_digits": v.cert.certified_digits,
    });
    emit(&out);
    Ok(0)
}

fn lp_kl(a: KlArgs) -> Result<i32> {
    require_json(&a.config, "lp kl")?;
    let p = a.config.p;
    let chi = DirichletChar::parse_spec(&a.tau)?;
    let s = parse_weight(&a.s, p)?;
    let v = kubota_leopoldt(&chi, &s, a.config.level, a.config.taylor, a.config.prec)?;
    warn_cert(&a.config, &v.cert);
    let out = json!({
        "case": "kubota-leopoldt",
        "character": { "spec": a.tau, "modulus": chi.modulus() },
        "p": p,
        "s": weight_json(&s),
        "level": v.cert.level,
        "taylor": v.cert.taylor,
        "truncation": a.config.trunc,
        "value": pnum(&v.value),
        "method": v.cert.method,
        "certified_digits": v.cert.certified_digits,
    });
    emit(&out);
    Ok(0)
}

fn zeta(a: ZetaArgs) -> Result<i32> {
    require_json(&a.config, "zeta")?;
    let p = a.config.p;
    let s = parse_weight(&a.s, p)?;
    let z = zeta_p_regularized(a.c, &s, a.config.level, a.config.taylor, a.config.prec)?;
    warn_cert(&a.config, &z.raw.cert);
    let out = json!({
        "case": "zeta-regularized",
        "p": p,
        "c": z.c,
        "s": weight_json(&s),
        "level": z.raw.cert.level,
        "taylor": z.raw.cert.taylor,
        "truncation": a.config.trunc,
        "raw": pnum(&z.raw.value),
        "euler": pnum(&z.euler),
        "value": z.value.as_ref().map(pnum),
        "note": z.note,
        "method": z.raw.cert.method,
        "certified_digits": z.raw.cert.certified_digits,
    });
    emit(&out);
    Ok(0)
}

fn moments(a: MomentsArgs) -> Result<i32> {
    let p = a.config.p;
    let sel = a.select.resolve(p)?;
    let mut level = a.config.level;
    if level == 0 {
        eprintln!("warning: coset level auto-raised 0 -> 1 (the table needs at least one digit)");
        level = 1;
    }
    let table = MomentTable::build(&sel.f, p, level, a.degree)?;
    match a.config.format {
        Format::Csv => {
            println!("a,b,N,i,j,value-numerator,value-denominator");
            for (ca, cb, i, j, v) in table.rows() {
                let q = v.try_to_rational().ok_or_else(|| {
                    Error::Usage(format!(
                        "moment at (a={ca}, b={cb}, i={i}, j={j}) is not rational; \
                         use --format json for cyclotomic values"
                    ))
                })?;
                println!("{ca},{cb},{},{i},{j},{},{}", table.level(), q.numer(), q.denom());
            }
        }
        Format::Json => {
            let rows: Vec<Value> = table
                .rows()
                .map(|(ca, cb, i, j, v)| {
                    json!({ "a": ca, "b": cb, "i": i, "j": j, "value": cyc(v) })
                })
                .collect();
            emit(&json!({
                "p": table.p(),
                "level": table.level(),
                "max_degree": table.max_degree(),
                "function": sel.label,
                "rows": rows,
            }));
        }
    }
    Ok(0)
}

fn checks_json(checks: &[EigenCheck]) -> Vec<Value> {
    checks
        .iter()
        .map(|c| json!({ "function": c.function, "operator": c.operator, "pass": c.pass }))
        .collect()
}

fn verify_hecke(a: HeckeArgs) -> Result<i32> {
    let p = a.config.p;
    let sel = a.select.resolve(p)?;
    // Default tame primes: drop p, ℓ, and primes dividing the character level.
    let qs: Vec<u64> = match &a.qs {
        Some(qs) => qs.clone(),
        None => [2u64, 3, 5, 7, 11, 13]
            .into_iter()
            .filter(|&q| q != p)
            .filter(|&q| match &sel.case {
                Some(EvilCase::Ell { ell }) => q != *ell,
                Some(EvilCase::Char { tau, psi }) => (tau.modulus() * psi.modulus()) % q != 0,
                None => true,
            })
            .collect(),
    };
    let mut checks: Vec<EigenCheck> = Vec::new();
    for &q in &qs {
        checks.push(check_t_q_lemma(q));
    }
    checks.extend(check_u_p_lemmas(p));
    match &sel.case {
        Some(EvilCase::Ell { ell }) => checks.extend(check_f_ell_eigen(*ell, p, &qs)?),
        Some(EvilCase::Char { tau, psi }) => {
            checks.extend(check_f_tau_psi_eigen(tau, psi, p, &qs)?)
        }
        None => {
            return Err(Error::Usage(
                "verify hecke needs a named eigenfunction family (--case ell or char)".into(),
            ))
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    match a.config.format {
        Format::Csv => {
            println!("function,operator,pass");
            for c in &checks {
                println!("{},{},{}", c.function, c.operator, c.pass);
            }
        }
        Format::Json => emit(&json!({
            "p": p,
            "function": sel.label,
            "qs": qs,
            "checks": checks_json(&checks),
            "pass": pass,
        })),
    }
    Ok(if pass { 0 } else { 1 })
}

fn verify_vanishing(a: VanishingArgs) -> Result<i32> {
    let p = a.config.p;
    let sel = a.select.resolve(p)?;
    let cusps: Vec<Cusp> = match &a.cusps {
        Some(list) => list.iter().map(|s| parse_cusp(s)).collect::<Result<_>>()?,
        None => {
            let mut v = vec![Cusp::from_ints(0, 1)];
            v.extend((1..p).map(|i| Cusp::from_ints(i as i64, p as i64)));
            v
        }
    };
    let mut rows = Vec::new();
    let mut pass = true;
    for c in &cusps {
        let (ok, witness) = sel.f.vanishing_check(c);
        pass &= ok;
        rows.push(json!({
            "cusp": c.to_string(),
            "vanishes": ok,
            // Constant of the first transverse line with nonzero measure.
            "witness_line": witness.as_ref().map(rnum),
        }));
    }
    match a.config.format {
        Format::Csv => {
            println!("cusp,vanishes");
            for (c, r) in cusps.iter().zip(&rows) {
                println!("{},{}", c, r["vanishes"]);
            }
        }
        Format::Json => emit(&json!({
            "p": p,
            "function": sel.label,
            "cusps": rows,
            "pass": pass,
        })),
    }
    Ok(if pass { 0 } else { 1 })
}

fn verify_theorem_c(a: TheoremCArgs) -> Result<i32> {
    require_json(&a.config, "verify theorem-c")?;
    let p = a.config.p;
    let s_list = parse_range(&a.s_range)?;
    let sel = a.select.resolve(p)?;
    let case = sel.case.ok_or_else(|| {
        Error::Usage("verify theorem-c needs a named eigenfunction family (--case ell or char)".into())
    })?;
    match case {
        EvilCase::Ell { ell } => {
            let r = theorem_c_case2(
                p,
                ell,
                &s_list,
                &a.c,
                a.config.level,
                a.config.taylor,
                a.config.prec,
                a.min_agree,
            )?;
            let rows: Vec<Value> = r
                .rows
                .iter()
                .map(|row| {
                    json!({
                        "s": row.s,
                        "lhs": pnum(&row.lhs),
                        "rhs_factored": pnum(&row.rhs_factored),
                        "rhs_bare": pnum(&row.rhs_bare),
                        "agreement_factored": row.agreement_factored,
                        "residual_bare": pnum(&row.residual_bare),
                        "pass": row.pass,
                    })
                })
                .collect();
            emit(&json!({
                "case": "ell",
                "p": r.p,
                "ell": r.ell,
                "k": a.k,
                "regulators": r.c_list,
                "c_agreement": r.c_agreement,
                "vanishes_at_zero": r.vanishes_at_zero,
                "min_agree": a.min_agree,
                "rows": rows,
                "pass": r.pass,
            }));
            Ok(if r.pass { 0 } else { 1 })
        }
        EvilCase::Char { tau, psi } => {
            let r = theorem_c_case1(
                &tau,
                &psi,
                a.k,
                p,
                &s_list,
                a.config.level,
                a.config.taylor,
                a.config.prec,
                a.min_agree,
            )?;
            let rows: Vec<Value> = r
                .rows
                .iter()
                .map(|row| {
                    // A null shift column marks a ζ̂ pole on that side: the
                    // printed product is a 0·∞ form there.
                    json!({
                        "s": row.s,
                        "computed": pnum(&row.computed),
                        "proof_shift": row.proof_shift.as_ref().map(pnum),
                        "statement_shift": row.statement_shift.as_ref().map(pnum),
                        "proof_agreement": row.proof_agreement,
                        "statement_agreement": row.statement_agreement,
                        "pass": row.pass,
                    })
                })
                .collect();
            emit(&json!({
                "case": "char",
                "p": r.p,
                "k": r.k,
                "tau_modulus": tau.modulus(),
                "psi_modulus": psi.modulus(),
                "convention": r.convention,
                "discriminated": r.discriminated,
                "min_agree": a.min_agree,
                "rows": rows,
                "pass": r.pass,
            }));
            Ok(if r.pass { 0 } else { 1 })
        }
    }
}

fn verify_up(a: UpArgs) -> Result<i32> {
    require_json(&a.config, "verify up")?;
    let p = a.config.p;
    let sel = a.select.resolve(p)?;
    let lambda = match &a.lambda {
        Some(l) => Cyclotomic::from_rat(parse_rat(l)?),
        None => sel.lambda.clone(),
    };
    let cfg = UpEigenConfig {
        level: a.config.level.max(1),
        taylor: a.config.taylor,
        digits: a.config.prec,
        max_m: a.max_m,
        min_agree: a.min_agree,
        truncation: a.config.trunc,
    };
    let r = up_eigen_check(&sel.f, &lambda, a.k, p, &cfg)?;
    let hyp = |v: &[(String, bool)]| -> Vec<Value> {
        v.iter().map(|(name, ok)| json!({ "check": name, "pass": ok })).collect()
    };
    let moments: Vec<Value> = r
        .moments
        .iter()
        .map(|m| {
            json!({
                "m": m.m,
                "transported": pnum(&m.transported),
                "predicted": pnum(&m.predicted),
                "agreement": m.agreement,
                "pass": m.pass,
            })
        })
        .collect();
    emit(&json!({
        "p": r.p,
        "k": r.k,
        "function": sel.label,
        "lambda": cyc(&r.lambda),
        "hypotheses": {
            "vanishing": hyp(&r.hypothesis_vanishing),
            "eigen": hyp(&r.hypothesis_eigen),
        },
        "series_identity": r.series_identity,
        "min_agree": a.min_agree,
        "moments": moments,
        "pass": r.pass,
    }));
    Ok(if r.pass { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_specs_parse() {
        let s = parse_weight("int:4", 3).unwrap();
        assert_eq!(s.int_tag(), Some(4));
        let s = parse_weight("char:1,1/2", 5).unwrap();
        assert_eq!(s.int_tag(), None);
        assert_eq!(s.tame_exponent(), 1);
        assert_eq!(*s.wt_rat(), Rat::new(1.into(), 2.into()));
        assert!(parse_weight("4", 3).is_err());
        assert!(parse_weight("char:1,1/5", 5).is_err());
    }

    #[test]
    fn ranges_and_cusps_parse() {
        assert_eq!(parse_range("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert!(parse_range("4..1").is_err());
        assert!(parse_cusp("inf").unwrap().is_infinity());
        assert_eq!(parse_cusp("2/6").unwrap(), Cusp::from_ints(1, 3));
        assert!(parse_cusp("x").is_err());
    }

    #[test]
    fn raw_testfn_schema_round_trips() {
        // [Z²] written out longhand equals the standard function.
        let f = testfn_from_json(
            r#"{"terms":[{"coeff":1,"offset":["0","0"],"lattice":[["1","0"],["0","1"]]}]}"#,
        )
        .unwrap();
        assert_eq!(f.eval(&(Rat::zero(), Rat::zero())), Cyclotomic::one());
        let half = testfn_from_json(
            r#"{"terms":[{"coeff":"1/2","offset":["1","0"],"lattice":[["2","0"],["0","1"]]}]}"#,
        )
        .unwrap();
        assert_eq!(
            half.eval(&(Rat::new(3.into(), 1.into()), Rat::zero())),
            Cyclotomic::from_rat(Rat::new(1.into(), 2.into()))
        );
        assert!(testfn_from_json(r#"{"terms":[]}"#).is_err());
        assert!(testfn_from_json(
            r#"{"terms":[{"coeff":0.5,"offset":["0","0"],"lattice":[["1","0"],["0","1"]]}]}"#
        )
        .is_err());
        assert!(testfn_from_json(
            r#"{"terms":[{"offset":["0","0"],"lattice":[["1","0"],["2","0"]]}]}"#
        )
        .is_err());
    }

    #[test]
    fn command_line_shapes_parse() {
        let cli = Cli::try_parse_from([
            "shintani", "lp", "evil", "--case", "ell", "--p", "3", "--ell", "11", "--k", "0",
            "--s", "int:4",
        ])
        .unwrap();
        match cli.command {
            Command::Lp(LpCommand::Evil(a)) => {
                assert_eq!(a.config.p, 3);
                assert_eq!(a.select.ell, Some(11));
                assert_eq!(a.s, "int:4");
            }
            _ => panic!("wrong subcommand"),
        }
        let cli = Cli::try_parse_from([
            "shintani", "verify", "theorem-c", "--case", "char", "--p", "5", "--k", "2", "--tau",
            "triv", "--psi", "quad3", "--s-range", "1..9",
        ])
        .unwrap();
        match cli.command {
            Command::Verify(VerifyCommand::TheoremC(a)) => {
                assert_eq!(a.s_range, "1..9");
                assert_eq!(a.c, vec![2, 7]);
            }
            _ => panic!("wrong subcommand"),
        }
        // p must be an odd prime; usage errors are clap's (exit 2).
        assert!(Cli::try_parse_from(["shintani", "zeta", "--p", "4", "--s", "int:2"]).is_err());
        assert!(Cli::try_parse_from(["shintani", "zeta", "--p", "2", "--s", "int:2"]).is_err());
    }
}
