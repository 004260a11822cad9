//! Locally constant, compactly supported test functions on Q and Q².
//!
//! A one-variable function is a finite cyclotomic combination of coset
//! indicators [a + mZ] with rational modulus m > 0. A two-variable
//! function is a combination of lattice-coset indicators [v₀ + Λ]; every
//! such function also admits a rectangular decomposition over a common box
//! (mx·Z) × (my·Z), which is the canonical form used for equality, Haar
//! integrals, pointwise products, and line restrictions. Constructors of
//! product shape carry a factorization hint `Σ c · f₁(x)·f₂(y)` that the
//! cone-series pipeline exploits.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{rat_gcd, rat_lcm, rat_mod};
use crate::cyclotomic::Cyclotomic;
use crate::dirichlet::DirichletChar;
use crate::lattice::Lattice2;
use crate::mat2::{Cusp, Mat2};
use crate::{Error, Rat, Result};

fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// A locally constant compactly supported function on Q: a finite sum
/// Σ c_a · [a + mZ] over a common rational modulus m > 0, offsets
/// normalized into [0, m). Zero coefficients are never stored.
#[derive(Debug, Clone)]
pub struct TestFn1 {
    modulus: Rat,
    coeffs: BTreeMap<Rat, Cyclotomic>,
}

impl TestFn1 {
    pub fn zero() -> Self {
        TestFn1 { modulus: Rat::one(), coeffs: BTreeMap::new() }
    }

    /// The coset indicator [a + mZ].
    pub fn indicator(a: &Rat, m: &Rat) -> Self {
        assert!(m.is_positive(), "modulus must be positive");
        let mut coeffs = BTreeMap::new();
        coeffs.insert(rat_mod(a, m), Cyclotomic::one());
        TestFn1 { modulus: m.clone(), coeffs }
    }

    /// The indicator of Z.
    pub fn integers() -> Self {
        TestFn1::indicator(&Rat::zero(), &Rat::one())
    }

    /// Σ_{i mod M} χ(i) · [i + MZ] for a Dirichlet character χ.
    pub fn from_character(chi: &DirichletChar) -> Self {
        let m = rat_int(chi.modulus() as i64);
        let mut f = TestFn1 { modulus: m.clone(), coeffs: BTreeMap::new() };
        for i in 0..chi.modulus() {
            let c = chi.value(i as i64);
            if !c.is_zero() {
                f.coeffs.insert(rat_mod(&rat_int(i as i64), &m), c);
            }
        }
        f
    }

    pub fn modulus(&self) -> &Rat {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The support classes (offset in [0, m), coefficient).
    pub fn classes(&self) -> impl Iterator<Item = (&Rat, &Cyclotomic)> {
        self.coeffs.iter()
    }

    pub fn eval(&self, x: &Rat) -> Cyclotomic {
        self.coeffs
            .get(&rat_mod(x, &self.modulus))
            .cloned()
            .unwrap_or_else(Cyclotomic::zero)
    }

    /// ∫ f dx over Q with Haar measure normalized by haar([a+mZ]) = 1/m.
    pub fn haar(&self) -> Cyclotomic {
        let inv_m = Rat::one() / self.modulus.clone();
        self.coeffs
            .values()
            .fold(Cyclotomic::zero(), |acc, c| acc.add(c))
            .scale(&inv_m)
    }

    /// Rewrite over a modulus m' that is an integer multiple of m.
    pub fn promote(&self, m: &Rat) -> TestFn1 {
        let ratio = m / &self.modulus;
        assert!(ratio.is_integer() && ratio.is_positive(), "promotion needs an integer multiple");
        let k = ratio.to_integer().to_u64().expect("promotion ratio too large");
        let mut coeffs = BTreeMap::new();
        for (a, c) in &self.coeffs {
            for t in 0..k {
                let off = rat_mod(&(a + rat_int(t as i64) * &self.modulus), m);
                coeffs.insert(off, c.clone());
            }
        }
        TestFn1 { modulus: m.clone(), coeffs }
    }

    /// Shrink the stored modulus to the minimal period.
    pub fn reduce_period(&self) -> TestFn1 {
        if self.coeffs.is_empty() {
            return TestFn1::zero();
        }
        let mut cur = self.clone();
        'outer: loop {
            let grid = cur
                .coeffs
                .keys()
                .fold(cur.modulus.clone(), |g, a| rat_gcd(&g, a));
            let k = (&cur.modulus / &grid).to_integer();
            for q in crate::arith::prime_factors(k.to_u64().unwrap_or(1)) {
                let sub = &cur.modulus / rat_int(q as i64);
                if cur.invariant_under(&sub) {
                    let mut coeffs = BTreeMap::new();
                    for (a, c) in &cur.coeffs {
                        coeffs.insert(rat_mod(a, &sub), c.clone());
                    }
                    cur = TestFn1 { modulus: sub, coeffs };
                    continue 'outer;
                }
            }
            return cur;
        }
    }

    fn invariant_under(&self, shift: &Rat) -> bool {
        self.coeffs.iter().all(|(a, c)| {
            self.coeffs.get(&rat_mod(&(a + shift), &self.modulus)) == Some(c)
        })
    }

    pub fn add(&self, o: &TestFn1) -> TestFn1 {
        let m = rat_lcm(&self.modulus, &o.modulus);
        let a = self.promote(&m);
        let b = o.promote(&m);
        let mut coeffs = a.coeffs;
        for (off, c) in b.coeffs {
            let cur = coeffs.remove(&off).unwrap_or_else(Cyclotomic::zero).add(&c);
            if !cur.is_zero() {
                coeffs.insert(off, cur);
            }
        }
        TestFn1 { modulus: m, coeffs }
    }

    pub fn neg(&self) -> TestFn1 {
        TestFn1 {
            modulus: self.modulus.clone(),
            coeffs: self.coeffs.iter().map(|(a, c)| (a.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &TestFn1) -> TestFn1 {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Cyclotomic) -> TestFn1 {
        if c.is_zero() {
            return TestFn1::zero();
        }
        TestFn1 {
            modulus: self.modulus.clone(),
            coeffs: self.coeffs.iter().map(|(a, q)| (a.clone(), q.mul(c))).collect(),
        }
    }

    pub fn scale_rat(&self, q: &Rat) -> TestFn1 {
        self.scale(&Cyclotomic::from_rat(q.clone()))
    }

    /// Pointwise product.
    pub fn mul(&self, o: &TestFn1) -> TestFn1 {
        if self.is_zero() || o.is_zero() {
            return TestFn1::zero();
        }
        let m = rat_lcm(&self.modulus, &o.modulus);
        let a = self.promote(&m);
        let b = o.promote(&m);
        let mut coeffs = BTreeMap::new();
        for (off, c) in &a.coeffs {
            if let Some(d) = b.coeffs.get(off) {
                let prod = c.mul(d);
                if !prod.is_zero() {
                    coeffs.insert(off.clone(), prod);
                }
            }
        }
        TestFn1 { modulus: m, coeffs }
    }

    /// The dilated function x ↦ f(x/L) for L ≠ 0: [a+mZ] ↦ [La + |L|mZ].
    pub fn dilate(&self, l: &Rat) -> TestFn1 {
        assert!(!l.is_zero(), "dilation by zero");
        let m = (l * &self.modulus).abs();
        let mut coeffs = BTreeMap::new();
        for (a, c) in &self.coeffs {
            coeffs.insert(rat_mod(&(l * a), &m), c.clone());
        }
        TestFn1 { modulus: m, coeffs }
    }

    /// The shifted function x ↦ f(x − t).
    pub fn shift(&self, t: &Rat) -> TestFn1 {
        let mut coeffs = BTreeMap::new();
        for (a, c) in &self.coeffs {
            coeffs.insert(rat_mod(&(a + t), &self.modulus), c.clone());
        }
        TestFn1 { modulus: self.modulus.clone(), coeffs }
    }

    /// f · [b + mZ].
    pub fn restrict_coset(&self, b: &Rat, m: &Rat) -> TestFn1 {
        self.mul(&TestFn1::indicator(b, m))
    }
}

impl PartialEq for TestFn1 {
    fn eq(&self, other: &Self) -> bool {
        let m = rat_lcm(&self.modulus, &other.modulus);
        let a = self.promote(&m);
        let b = other.promote(&m);
        a.coeffs == b.coeffs
    }
}

impl Eq for TestFn1 {}

impl std::fmt::Display for TestFn1 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (a, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})[{a}+{}Z]", self.modulus)?;
        }
        Ok(())
    }
}

/// One lattice-coset term c · [v₀ + Λ] of a two-variable test function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term2 {
    pub coeff: Cyclotomic,
    pub offset: (Rat, Rat),
    pub lattice: Lattice2,
}

/// A locally constant compactly supported function on Q², stored as a sum
/// of lattice-coset indicators. Product-shaped constructors carry a hint
/// `Σ c · f₁(x) f₂(y)` consumed by the cone-series pipeline.
#[derive(Debug, Clone)]
pub struct TestFn2 {
    terms: Vec<Term2>,
    factored: Option<Vec<(Cyclotomic, TestFn1, TestFn1)>>,
}

impl TestFn2 {
    pub fn zero() -> Self {
        TestFn2 { terms: Vec::new(), factored: Some(Vec::new()) }
    }

    /// The indicator of Z².
    pub fn standard() -> Self {
        TestFn2::product_of(&TestFn1::integers(), &TestFn1::integers())
    }

    /// The indicator [v₀ + Λ].
    pub fn indicator(offset: (Rat, Rat), lattice: Lattice2) -> Self {
        TestFn2 {
            terms: vec![Term2 { coeff: Cyclotomic::one(), offset, lattice }],
            factored: None,
        }
    }

    /// The product f₁(x)·f₂(y).
    pub fn product_of(f1: &TestFn1, f2: &TestFn1) -> Self {
        let mut terms = Vec::new();
        let lattice = Lattice2::rectangular(f1.modulus(), f2.modulus());
        for (a, c1) in f1.classes() {
            for (b, c2) in f2.classes() {
                terms.push(Term2 {
                    coeff: c1.mul(c2),
                    offset: (a.clone(), b.clone()),
                    lattice: lattice.clone(),
                });
            }
        }
        TestFn2 { terms, factored: Some(vec![(Cyclotomic::one(), f1.clone(), f2.clone())]) }
    }

    pub fn terms(&self) -> &[Term2] {
        &self.terms
    }

    /// The factorization hint, when the construction preserved one.
    pub fn factored_hint(&self) -> Option<&Vec<(Cyclotomic, TestFn1, TestFn1)>> {
        self.factored.as_ref()
    }

    /// A factorization Σ c·f₁⊗f₂: the constructor hint when present,
    /// otherwise one product term per x-class of the rectangular form.
    pub fn factored_terms(&self) -> Vec<(Cyclotomic, TestFn1, TestFn1)> {
        if let Some(h) = &self.factored {
            return h.clone();
        }
        let rect = RectForm::from_fn(self);
        rect.factored_by_x()
    }

    pub fn eval(&self, v: &(Rat, Rat)) -> Cyclotomic {
        let mut acc = Cyclotomic::zero();
        for t in &self.terms {
            let d = (&v.0 - &t.offset.0, &v.1 - &t.offset.1);
            if t.lattice.contains(&d) {
                acc = acc.add(&t.coeff);
            }
        }
        acc
    }

    pub fn origin_value(&self) -> Cyclotomic {
        self.eval(&(Rat::zero(), Rat::zero()))
    }

    pub fn haar(&self) -> Cyclotomic {
        let mut acc = Cyclotomic::zero();
        for t in &self.terms {
            acc = acc.add(&t.coeff.scale(&(Rat::one() / t.lattice.det())));
        }
        acc
    }

    pub fn add(&self, o: &TestFn2) -> TestFn2 {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        let factored = match (&self.factored, &o.factored) {
            (Some(a), Some(b)) => {
                let mut h = a.clone();
                h.extend(b.iter().cloned());
                Some(h)
            }
            _ => None,
        };
        TestFn2 { terms, factored }
    }

    pub fn neg(&self) -> TestFn2 {
        TestFn2 {
            terms: self
                .terms
                .iter()
                .map(|t| Term2 { coeff: t.coeff.neg(), ..t.clone() })
                .collect(),
            factored: self.factored.as_ref().map(|h| {
                h.iter().map(|(c, f1, f2)| (c.neg(), f1.clone(), f2.clone())).collect()
            }),
        }
    }

    pub fn sub(&self, o: &TestFn2) -> TestFn2 {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Cyclotomic) -> TestFn2 {
        TestFn2 {
            terms: self
                .terms
                .iter()
                .map(|t| Term2 { coeff: t.coeff.mul(c), ..t.clone() })
                .collect(),
            factored: self.factored.as_ref().map(|h| {
                h.iter().map(|(q, f1, f2)| (q.mul(c), f1.clone(), f2.clone())).collect()
            }),
        }
    }

    pub fn scale_rat(&self, q: &Rat) -> TestFn2 {
        self.scale(&Cyclotomic::from_rat(q.clone()))
    }

    /// The composed function v ↦ f(γv) for non-singular rational γ:
    /// [v₀ + Λ] ↦ [γ⁻¹v₀ + γ⁻¹Λ].
    pub fn act_gl2(&self, g: &Mat2) -> TestFn2 {
        assert!(!g.det().is_zero(), "singular matrix action");
        let gi = g.inverse();
        let terms = self
            .terms
            .iter()
            .map(|t| Term2 {
                coeff: t.coeff.clone(),
                offset: gi.apply(&t.offset),
                lattice: t.lattice.map_by(&gi),
            })
            .collect();
        TestFn2 { terms, factored: None }
    }

    /// The dilated function v ↦ f(v/q); preserves factorization.
    pub fn dilate(&self, q: &Rat) -> TestFn2 {
        assert!(!q.is_zero(), "dilation by zero");
        let terms = self
            .terms
            .iter()
            .map(|t| Term2 {
                coeff: t.coeff.clone(),
                offset: (q * &t.offset.0, q * &t.offset.1),
                lattice: t.lattice.scale(q),
            })
            .collect();
        let factored = self
            .factored
            .as_ref()
            .map(|h| h.iter().map(|(c, f1, f2)| (c.clone(), f1.dilate(q), f2.dilate(q))).collect());
        TestFn2 { terms, factored }
    }

    /// Pointwise product via the rectangular forms.
    pub fn mul(&self, o: &TestFn2) -> TestFn2 {
        let a = RectForm::from_fn(self);
        let b = RectForm::from_fn(o);
        a.mul(&b).to_fn()
    }

    /// f restricted to the coset (a, b) + p^N·Z² (multiplication by the
    /// rectangular indicator); preserves factorization.
    pub fn restrict_coset(&self, a: &Rat, b: &Rat, m: &Rat) -> TestFn2 {
        self.mul_product(&TestFn1::indicator(a, m), &TestFn1::indicator(b, m))
    }

    /// f · g₁(x)g₂(y), keeping the factorization hint when present.
    pub fn mul_product(&self, g1: &TestFn1, g2: &TestFn1) -> TestFn2 {
        let hint = self.factored.as_ref().map(|h| {
            h.iter()
                .map(|(c, f1, f2)| (c.clone(), f1.mul(g1), f2.mul(g2)))
                .filter(|(c, f1, f2)| !c.is_zero() && !f1.is_zero() && !f2.is_zero())
                .collect::<Vec<_>>()
        });
        match hint {
            Some(h) => {
                let mut acc = TestFn2::zero();
                for (c, f1, f2) in &h {
                    acc = acc.add(&TestFn2::product_of(f1, f2).scale(c));
                }
                TestFn2 { terms: acc.terms, factored: Some(h) }
            }
            None => self.mul(&TestFn2::product_of(g1, g2)),
        }
    }

    /// f restricted to p-unit y (the explicit combination
    /// f − f·[y ≡ 0 mod p]).
    pub fn restrict_y_units(&self, p: u64) -> TestFn2 {
        let pz = TestFn1::indicator(&Rat::zero(), &rat_int(p as i64));
        self.sub(&self.mul_product(&TestFn1::integers(), &pz))
    }

    /// Canonical rectangular form: minimal common box, offsets sorted,
    /// factorization hint rebuilt per x-class.
    pub fn canonicalize(&self) -> TestFn2 {
        let rect = RectForm::from_fn(self).shrink();
        let mut out = rect.to_fn();
        out.factored = Some(rect.factored_by_x());
        out
    }

    pub fn is_zero(&self) -> bool {
        RectForm::from_fn(self).cells.is_empty()
    }

    /// Restriction of f to the line {v : b·x − a·y = c} for the primitive
    /// direction (a, b), parametrized as t ↦ f(v_c + t·(a, b)); the result
    /// is a one-variable test function in t.
    pub fn restrict_line(&self, dir: &(Rat, Rat), c: &Rat) -> TestFn1 {
        let (a, b) = dir;
        assert!(!(a.is_zero() && b.is_zero()), "zero direction");
        let vc = if !a.is_zero() {
            (Rat::zero(), -(c / a))
        } else {
            (c / b, Rat::zero())
        };
        let rect = RectForm::from_fn(self);
        let mut out = TestFn1::zero();
        for ((p, q), w) in &rect.cells {
            let px = progression(a, &(p - &vc.0), &rect.mx);
            let py = progression(b, &(q - &vc.1), &rect.my);
            if let Some((t0, period)) = intersect_progressions(&px, &py) {
                out = out.add(&TestFn1::indicator(&t0, &period).scale(w));
            }
        }
        out
    }

    /// Whether every line transverse to the cusp direction carries total
    /// measure zero: for cusp r = (a : b), all restrictions to
    /// {b·x − a·y = c} must have vanishing Haar integral. Returns the
    /// first failing line constant as a witness.
    pub fn vanishing_check(&self, cusp: &Cusp) -> (bool, Option<Rat>) {
        let (a, b) = cusp.as_vector();
        let rect = RectForm::from_fn(self);
        if rect.cells.is_empty() {
            return (true, None);
        }
        // Line constants hit by a cell [p+mxZ]×[q+myZ]: (bp − aq) + gZ,
        // g = gcd(b·mx, a·my); the total pattern is periodic mod the lcm.
        let mut gees = Vec::new();
        let mut period = Rat::one();
        for ((p, q), _) in &rect.cells {
            let g = rat_gcd(&(&b * &rect.mx), &(&a * &rect.my));
            assert!(!g.is_zero());
            period = rat_lcm(&period, &g);
            gees.push(((&b * p) - (&a * q), g));
        }
        let mut residues = BTreeSet::new();
        for (c0, g) in &gees {
            let steps = (&period / g).to_integer().to_u64().expect("period overflow");
            for k in 0..steps {
                residues.insert(rat_mod(&(c0 + rat_int(k as i64) * g), &period));
            }
        }
        for c in residues {
            let line = self.restrict_line(&(a.clone(), b.clone()), &c);
            if !line.haar().is_zero() {
                return (false, Some(c));
            }
        }
        (true, None)
    }
}

impl PartialEq for TestFn2 {
    fn eq(&self, other: &Self) -> bool {
        let a = RectForm::from_fn(self);
        let b = RectForm::from_fn(other);
        let mx = rat_lcm(&a.mx, &b.mx);
        let my = rat_lcm(&a.my, &b.my);
        a.promote(&mx, &my).cells == b.promote(&mx, &my).cells
    }
}

impl Eq for TestFn2 {}

impl std::fmt::Display for TestFn2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for t in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})[({},{})+{}]", t.coeff, t.offset.0, t.offset.1, t.lattice)?;
        }
        Ok(())
    }
}

/// Solutions t of a·t ≡ r (mod mZ): a progression, everything, or nothing.
enum TSet {
    All,
    Empty,
    Prog(Rat, Rat),
}

fn progression(a: &Rat, r: &Rat, m: &Rat) -> TSet {
    if a.is_zero() {
        if rat_mod(r, m).is_zero() {
            TSet::All
        } else {
            TSet::Empty
        }
    } else {
        TSet::Prog(r / a, (m / a).abs())
    }
}

fn intersect_progressions(x: &TSet, y: &TSet) -> Option<(Rat, Rat)> {
    match (x, y) {
        (TSet::Empty, _) | (_, TSet::Empty) => None,
        (TSet::All, TSet::All) => unreachable!("direction vector is primitive"),
        (TSet::All, TSet::Prog(t, r)) | (TSet::Prog(t, r), TSet::All) => {
            Some((t.clone(), r.clone()))
        }
        (TSet::Prog(t1, r1), TSet::Prog(t2, r2)) => {
            // t1 + r1·k = t2 + r2·l: solvable iff gcd(r1, r2) | t2 − t1.
            let g = rat_gcd(r1, r2);
            let d = t2 - t1;
            let ratio = &d / &g;
            if !ratio.is_integer() {
                return None;
            }
            // Scale to integers: n1·k − n2·l = m over Z.
            let den = r1.denom().lcm(r2.denom()).lcm(d.denom());
            let n1 = (r1 * Rat::from_integer(den.clone())).to_integer();
            let n2 = (r2 * Rat::from_integer(den.clone())).to_integer();
            let m = (&d * Rat::from_integer(den)).to_integer();
            let e = n1.extended_gcd(&n2);
            let k = e.x * (&m / &e.gcd);
            let t0 = t1 + r1 * Rat::from_integer(k);
            let period = rat_lcm(r1, r2);
            Some((rat_mod(&t0, &period), period))
        }
    }
}

/// The rectangular form of a two-variable test function: coefficients on
/// the cells of a common box (mx·Z) × (my·Z).
#[derive(Debug, Clone)]
pub(crate) struct RectForm {
    pub mx: Rat,
    pub my: Rat,
    pub cells: BTreeMap<(Rat, Rat), Cyclotomic>,
}

impl RectForm {
    pub fn from_fn(f: &TestFn2) -> RectForm {
        let mut mx = Rat::one();
        let mut my = Rat::one();
        let mut pieces = Vec::new();
        for t in &f.terms {
            let ((px, py), reps) = t.lattice.rectangular_refinement();
            mx = rat_lcm(&mx, &px);
            my = rat_lcm(&my, &py);
            pieces.push((t, px, py, reps));
        }
        let mut out = RectForm { mx: mx.clone(), my: my.clone(), cells: BTreeMap::new() };
        for (t, px, py, reps) in pieces {
            let kx = (&mx / &px).to_integer().to_u64().expect("box overflow");
            let ky = (&my / &py).to_integer().to_u64().expect("box overflow");
            for rep in reps {
                for i in 0..kx {
                    for j in 0..ky {
                        let x = rat_mod(
                            &(&t.offset.0 + &rep.0 + rat_int(i as i64) * &px),
                            &mx,
                        );
                        let y = rat_mod(
                            &(&t.offset.1 + &rep.1 + rat_int(j as i64) * &py),
                            &my,
                        );
                        let cur = out
                            .cells
                            .remove(&(x.clone(), y.clone()))
                            .unwrap_or_else(Cyclotomic::zero)
                            .add(&t.coeff);
                        if !cur.is_zero() {
                            out.cells.insert((x, y), cur);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn promote(&self, mx: &Rat, my: &Rat) -> RectForm {
        let kx = (mx / &self.mx).to_integer().to_u64().expect("box overflow");
        let ky = (my / &self.my).to_integer().to_u64().expect("box overflow");
        let mut cells = BTreeMap::new();
        for ((x, y), c) in &self.cells {
            for i in 0..kx {
                for j in 0..ky {
                    let nx = rat_mod(&(x + rat_int(i as i64) * &self.mx), mx);
                    let ny = rat_mod(&(y + rat_int(j as i64) * &self.my), my);
                    cells.insert((nx, ny), c.clone());
                }
            }
        }
        RectForm { mx: mx.clone(), my: my.clone(), cells }
    }

    pub fn mul(&self, o: &RectForm) -> RectForm {
        let mx = rat_lcm(&self.mx, &o.mx);
        let my = rat_lcm(&self.my, &o.my);
        let a = self.promote(&mx, &my);
        let b = o.promote(&mx, &my);
        let mut cells = BTreeMap::new();
        for (k, c) in &a.cells {
            if let Some(d) = b.cells.get(k) {
                let prod = c.mul(d);
                if !prod.is_zero() {
                    cells.insert(k.clone(), prod);
                }
            }
        }
        RectForm { mx, my, cells }
    }

    /// Shrink box sides to the minimal periods.
    pub fn shrink(&self) -> RectForm {
        let mut cur = self.clone();
        loop {
            let mut changed = false;
            for axis in 0..2 {
                let m = if axis == 0 { cur.mx.clone() } else { cur.my.clone() };
                let grid = cur.cells.keys().fold(m.clone(), |g, (x, y)| {
                    rat_gcd(&g, if axis == 0 { x } else { y })
                });
                let k = (&m / &grid).to_integer().to_u64().unwrap_or(1);
                for qp in crate::arith::prime_factors(k) {
                    let sub = &m / rat_int(qp as i64);
                    let ok = cur.cells.iter().all(|((x, y), c)| {
                        let key = if axis == 0 {
                            (rat_mod(&(x + &sub), &m), y.clone())
                        } else {
                            (x.clone(), rat_mod(&(y + &sub), &m))
                        };
                        cur.cells.get(&key) == Some(c)
                    });
                    if ok {
                        let mut cells = BTreeMap::new();
                        for ((x, y), c) in &cur.cells {
                            let key = if axis == 0 {
                                (rat_mod(x, &sub), y.clone())
                            } else {
                                (x.clone(), rat_mod(y, &sub))
                            };
                            cells.insert(key, c.clone());
                        }
                        if axis == 0 {
                            cur = RectForm { mx: sub, my: cur.my.clone(), cells };
                        } else {
                            cur = RectForm { mx: cur.mx.clone(), my: sub, cells };
                        }
                        changed = true;
                        break;
                    }
                }
            }
            if !changed {
                return cur;
            }
        }
    }

    pub fn to_fn(&self) -> TestFn2 {
        let lattice = Lattice2::rectangular(&self.mx, &self.my);
        let terms = self
            .cells
            .iter()
            .map(|((x, y), c)| Term2 {
                coeff: c.clone(),
                offset: (x.clone(), y.clone()),
                lattice: lattice.clone(),
            })
            .collect();
        TestFn2 { terms, factored: None }
    }

    /// One product term per x-class: Σ_p [p + mxZ] ⊗ (Σ_q c_{pq}[q + myZ]).
    pub fn factored_by_x(&self) -> Vec<(Cyclotomic, TestFn1, TestFn1)> {
        let mut by_x: BTreeMap<Rat, TestFn1> = BTreeMap::new();
        for ((x, y), c) in &self.cells {
            let g = by_x.entry(x.clone()).or_insert_with(TestFn1::zero);
            *g = g.add(&TestFn1::indicator(y, &self.my).scale(c));
        }
        by_x.into_iter()
            .map(|(x, g)| (Cyclotomic::one(), TestFn1::indicator(&x, &self.mx), g))
            .collect()
    }
}

/// The ℓ-type evil test function [Z²] − ℓ·[Z × ℓZ] = [Z] ⊗ ([Z] − ℓ[ℓZ])
/// for a prime ℓ ≠ p.
pub fn make_f_ell(ell: u64, p: u64) -> Result<TestFn2> {
    if ell < 2 || crate::arith::prime_factors(ell) != vec![ell] {
        return Err(Error::Hypothesis(format!("{ell} is not prime")));
    }
    if ell == p {
        return Err(Error::Hypothesis(format!("auxiliary prime {ell} must differ from p = {p}")));
    }
    let lz = TestFn1::indicator(&Rat::zero(), &rat_int(ell as i64));
    let yf = TestFn1::integers().sub(&lz.scale_rat(&rat_int(ell as i64)));
    Ok(TestFn2::product_of(&TestFn1::integers(), &yf))
}

/// The character-type evil test function
/// (Σ_i τ⁻¹(i)[i + LZ]) ⊗ (Σ_j ψ(j)[jL + LMZ]) for τ mod L, ψ mod M,
/// requiring p ∤ LM.
pub fn make_f_tau_psi(tau: &DirichletChar, psi: &DirichletChar, p: u64) -> Result<TestFn2> {
    let l = tau.modulus();
    let m = psi.modulus();
    if (l * m) % p == 0 {
        return Err(Error::Hypothesis(format!(
            "p = {p} must not divide the level {l}·{m}"
        )));
    }
    let xf = TestFn1::from_character(&tau.inverse());
    let yf = TestFn1::from_character(psi).dilate(&rat_int(l as i64));
    Ok(TestFn2::product_of(&xf, &yf))
}
