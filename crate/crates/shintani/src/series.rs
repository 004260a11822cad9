//! Truncated power series and Laurent series with linear-form poles.
//!
//! Cone generating series live in the ring of bivariate power series
//! extended by inverses of integral linear forms uX + vY: a value is
//! stored as `num / Π forms`. Precision is a total-degree bound: a series
//! with precision `prec` has all coefficients of total degree < `prec`
//! tracked exactly. Multiplication propagates the sharp bound
//! min(prec_a + mindeg_b, prec_b + mindeg_a); exact polynomials carry an
//! unbounded precision sentinel.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

use crate::arith::factorial;
use crate::cyclotomic::Cyclotomic;
use crate::{Error, Rat, Result};

/// Precision sentinel for exact polynomials.
pub const EXACT: u32 = u32::MAX;

/// A truncated bivariate power series with exact cyclotomic coefficients.
/// Coefficients of total degree < `prec` are tracked; higher ones are
/// unknown (not merely zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PSeries2 {
    coeffs: BTreeMap<(u32, u32), Cyclotomic>,
    prec: u32,
}

impl PSeries2 {
    pub fn zero(prec: u32) -> Self {
        PSeries2 { coeffs: BTreeMap::new(), prec }
    }

    pub fn constant(c: Cyclotomic, prec: u32) -> Self {
        let mut s = PSeries2::zero(prec);
        s.set(0, 0, c);
        s
    }

    pub fn one(prec: u32) -> Self {
        PSeries2::constant(Cyclotomic::one(), prec)
    }

    pub fn monomial(i: u32, j: u32, c: Cyclotomic, prec: u32) -> Self {
        let mut s = PSeries2::zero(prec);
        s.set(i, j, c);
        s
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Minimal total degree of a nonzero tracked term (EXACT if none).
    pub fn min_degree(&self) -> u32 {
        self.coeffs
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(&(i, j), _)| i + j)
            .min()
            .unwrap_or(EXACT)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| c.is_zero())
    }

    pub fn coeff(&self, i: u32, j: u32) -> Cyclotomic {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(Cyclotomic::zero)
    }

    /// Read a coefficient, failing when it lies beyond tracked precision.
    pub fn coeff_checked(&self, i: u32, j: u32) -> Result<Cyclotomic> {
        if self.prec != EXACT && i + j >= self.prec {
            return Err(Error::InsufficientTruncation { required: i + j + 1, available: self.prec });
        }
        Ok(self.coeff(i, j))
    }

    fn set(&mut self, i: u32, j: u32, c: Cyclotomic) {
        if self.prec != EXACT && i + j >= self.prec {
            return;
        }
        if c.is_zero() {
            self.coeffs.remove(&(i, j));
        } else {
            self.coeffs.insert((i, j), c);
        }
    }

    fn add_to(&mut self, i: u32, j: u32, c: &Cyclotomic) {
        if self.prec != EXACT && i + j >= self.prec {
            return;
        }
        let cur = self.coeff(i, j).add(c);
        self.set(i, j, cur);
    }

    pub fn truncate(&self, prec: u32) -> PSeries2 {
        let mut out = PSeries2::zero(self.prec.min(prec));
        for (&(i, j), c) in &self.coeffs {
            out.set(i, j, c.clone());
        }
        out
    }

    pub fn add(&self, o: &PSeries2) -> PSeries2 {
        let mut out = PSeries2::zero(self.prec.min(o.prec));
        for (&(i, j), c) in &self.coeffs {
            out.set(i, j, c.clone());
        }
        for (&(i, j), c) in &o.coeffs {
            out.add_to(i, j, c);
        }
        out
    }

    pub fn neg(&self) -> PSeries2 {
        let mut out = PSeries2::zero(self.prec);
        for (&(i, j), c) in &self.coeffs {
            out.set(i, j, c.neg());
        }
        out
    }

    pub fn sub(&self, o: &PSeries2) -> PSeries2 {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Cyclotomic) -> PSeries2 {
        let mut out = PSeries2::zero(self.prec);
        for (&(i, j), q) in &self.coeffs {
            out.set(i, j, q.mul(c));
        }
        out
    }

    pub fn scale_rat(&self, q: &Rat) -> PSeries2 {
        self.scale(&Cyclotomic::from_rat(q.clone()))
    }

    pub fn mul(&self, o: &PSeries2) -> PSeries2 {
        let prec = mul_prec(self.prec, self.min_degree(), o.prec, o.min_degree());
        let mut out = PSeries2::zero(prec);
        for (&(i1, j1), c1) in &self.coeffs {
            if c1.is_zero() {
                continue;
            }
            for (&(i2, j2), c2) in &o.coeffs {
                if !c2.is_zero() {
                    out.add_to(i1 + i2, j1 + j2, &c1.mul(c2));
                }
            }
        }
        out
    }

    /// Inverse of a series with invertible rational constant term.
    pub fn invert(&self) -> PSeries2 {
        let c0 = self
            .coeff(0, 0)
            .try_to_rational()
            .expect("inversion requires a rational constant term");
        assert!(!c0.is_zero(), "inversion requires a unit constant term");
        let a0_inv = Rat::one() / c0;
        // self = c0 (1 + t) with t of positive order: Σ (−t)^k telescopes.
        let t = self.scale_rat(&a0_inv).sub(&PSeries2::one(self.prec));
        let mut acc = PSeries2::one(self.prec);
        let mut pw = PSeries2::one(self.prec);
        let bound = if self.prec == EXACT { panic!("inversion needs finite precision") } else { self.prec };
        for _ in 1..bound {
            pw = pw.mul(&t).neg().truncate(self.prec);
            if pw.is_zero() {
                break;
            }
            acc = acc.add(&pw);
        }
        acc.scale_rat(&a0_inv)
    }

    /// Substitute X ↦ ax·X + ay·Y, Y ↦ bx·X + by·Y.
    pub fn substitute_linear(&self, ax: &Rat, ay: &Rat, bx: &Rat, by: &Rat) -> PSeries2 {
        let xim = linear_poly(ax, ay, self.prec);
        let yim = linear_poly(bx, by, self.prec);
        let mut out = PSeries2::zero(self.prec);
        // Cache powers as needed; degrees are small.
        let mut xpows: Vec<PSeries2> = vec![PSeries2::one(self.prec)];
        let mut ypows: Vec<PSeries2> = vec![PSeries2::one(self.prec)];
        for (&(i, j), c) in &self.coeffs {
            while xpows.len() <= i as usize {
                let last = xpows.last().unwrap().mul(&xim).truncate(self.prec);
                xpows.push(last);
            }
            while ypows.len() <= j as usize {
                let last = ypows.last().unwrap().mul(&yim).truncate(self.prec);
                ypows.push(last);
            }
            let term = xpows[i as usize].mul(&ypows[j as usize]).scale(c);
            out = out.add(&term);
        }
        out
    }

    /// Iterate over tracked nonzero terms.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Cyclotomic)> {
        self.coeffs.iter().filter(|(_, c)| !c.is_zero())
    }
}

fn mul_prec(pa: u32, ma: u32, pb: u32, mb: u32) -> u32 {
    if pa == EXACT && pb == EXACT {
        return EXACT;
    }
    let left = pa.saturating_add(mb);
    let right = pb.saturating_add(ma);
    left.min(right)
}

fn linear_poly(cx: &Rat, cy: &Rat, prec: u32) -> PSeries2 {
    let mut s = PSeries2::zero(prec);
    s.set(1, 0, Cyclotomic::from_rat(cx.clone()));
    s.set(0, 1, Cyclotomic::from_rat(cy.clone()));
    s
}

impl std::fmt::Display for PSeries2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        let mut by_degree: Vec<_> = self.coeffs.iter().filter(|(_, c)| !c.is_zero()).collect();
        by_degree.sort_by_key(|(&(i, j), _)| (i + j, i));
        for (&(i, j), c) in by_degree {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            if i > 0 {
                write!(f, "*X^{i}")?;
            }
            if j > 0 {
                write!(f, "*Y^{j}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        if self.prec != EXACT {
            write!(f, " + O(deg {})", self.prec)?;
        }
        Ok(())
    }
}

/// A primitive integral linear form uX + vY (gcd(u,v) = 1, leading
/// coefficient positive).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LinearForm {
    u: BigInt,
    v: BigInt,
}

impl LinearForm {
    pub fn x() -> Self {
        LinearForm { u: BigInt::one(), v: BigInt::zero() }
    }

    pub fn y() -> Self {
        LinearForm { u: BigInt::zero(), v: BigInt::one() }
    }

    pub fn new(u: i64, v: i64) -> Self {
        let (f, _) = LinearForm::from_rational(
            &Rat::from_integer(BigInt::from(u)),
            &Rat::from_integer(BigInt::from(v)),
        );
        f
    }

    /// Normalize a rational form c·(uX + vY) into a primitive integral
    /// form and its rational content c.
    pub fn from_rational(u: &Rat, v: &Rat) -> (LinearForm, Rat) {
        assert!(!(u.is_zero() && v.is_zero()), "zero linear form");
        let den = u.denom().lcm(v.denom());
        let ui = u.numer() * (&den / u.denom());
        let vi = v.numer() * (&den / v.denom());
        let g = ui.gcd(&vi);
        let mut ui = &ui / &g;
        let mut vi = &vi / &g;
        let mut content = Rat::new(g, den);
        let lead_neg = if ui.is_zero() { vi.is_negative() } else { ui.is_negative() };
        if lead_neg {
            ui = -ui;
            vi = -vi;
            content = -content;
        }
        (LinearForm { u: ui, v: vi }, content)
    }

    pub fn u(&self) -> &BigInt {
        &self.u
    }

    pub fn v(&self) -> &BigInt {
        &self.v
    }

    pub fn is_x(&self) -> bool {
        self.u.is_one() && self.v.is_zero()
    }

    pub fn is_y(&self) -> bool {
        self.u.is_zero() && self.v.is_one()
    }

    /// As an exact polynomial series.
    pub fn to_series(&self) -> PSeries2 {
        let mut s = PSeries2::zero(EXACT);
        s.set(1, 0, Cyclotomic::from_rat(Rat::from_integer(self.u.clone())));
        s.set(0, 1, Cyclotomic::from_rat(Rat::from_integer(self.v.clone())));
        s
    }

    /// Image under X ↦ m11 X + m21 Y, Y ↦ m12 X + m22 Y, re-primitivized;
    /// returns the form and extracted rational content.
    pub fn substitute(&self, m11: &Rat, m12: &Rat, m21: &Rat, m22: &Rat) -> (LinearForm, Rat) {
        let ur = Rat::from_integer(self.u.clone());
        let vr = Rat::from_integer(self.v.clone());
        let nu = &ur * m11 + &vr * m12;
        let nv = &ur * m21 + &vr * m22;
        LinearForm::from_rational(&nu, &nv)
    }
}

impl std::fmt::Display for LinearForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.u.is_zero(), self.v.is_zero()) {
            (false, true) if self.u.is_one() => write!(f, "X"),
            (true, false) if self.v.is_one() => write!(f, "Y"),
            (false, true) => write!(f, "{}X", self.u),
            (true, false) => write!(f, "{}Y", self.v),
            _ => {
                if self.u.is_one() {
                    write!(f, "X")?;
                } else {
                    write!(f, "{}X", self.u)?;
                }
                if self.v.is_positive() {
                    write!(f, "+{}Y", self.v)
                } else {
                    write!(f, "{}Y", self.v)
                }
            }
        }
    }
}

/// A Laurent series `num / Π dens` with primitive linear-form poles.
#[derive(Debug, Clone)]
pub struct LaurentSeries {
    num: PSeries2,
    dens: Vec<LinearForm>,
}

impl LaurentSeries {
    pub fn from_series(num: PSeries2) -> Self {
        LaurentSeries { num, dens: Vec::new() }
    }

    pub fn new(num: PSeries2, mut dens: Vec<LinearForm>) -> Self {
        dens.sort();
        LaurentSeries { num, dens }
    }

    pub fn numerator(&self) -> &PSeries2 {
        &self.num
    }

    pub fn dens(&self) -> &[LinearForm] {
        &self.dens
    }

    pub fn scale(&self, c: &Cyclotomic) -> LaurentSeries {
        LaurentSeries { num: self.num.scale(c), dens: self.dens.clone() }
    }

    pub fn scale_rat(&self, q: &Rat) -> LaurentSeries {
        LaurentSeries { num: self.num.scale_rat(q), dens: self.dens.clone() }
    }

    pub fn neg(&self) -> LaurentSeries {
        LaurentSeries { num: self.num.neg(), dens: self.dens.clone() }
    }

    pub fn add(&self, o: &LaurentSeries) -> LaurentSeries {
        if self.dens == o.dens {
            return LaurentSeries { num: self.num.add(&o.num), dens: self.dens.clone() };
        }
        // Cross-multiply over the union denominator.
        let mut num_a = self.num.clone();
        for d in &o.dens {
            num_a = num_a.mul(&d.to_series());
        }
        let mut num_b = o.num.clone();
        for d in &self.dens {
            num_b = num_b.mul(&d.to_series());
        }
        let mut dens = self.dens.clone();
        dens.extend(o.dens.iter().cloned());
        LaurentSeries::new(num_a.add(&num_b), dens).reduce()
    }

    pub fn sub(&self, o: &LaurentSeries) -> LaurentSeries {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &LaurentSeries) -> LaurentSeries {
        let mut dens = self.dens.clone();
        dens.extend(o.dens.iter().cloned());
        LaurentSeries::new(self.num.mul(&o.num), dens)
    }

    /// Cancel pole forms that divide the numerator exactly.
    pub fn reduce(&self) -> LaurentSeries {
        let mut num = self.num.clone();
        let mut dens = Vec::new();
        for d in &self.dens {
            match divide_by_form(&num, d) {
                Some(q) => num = q,
                None => dens.push(d.clone()),
            }
        }
        LaurentSeries::new(num, dens)
    }

    /// The value as a power series, when every pole cancels.
    pub fn as_power_series(&self) -> Option<PSeries2> {
        let r = self.reduce();
        if r.dens.is_empty() {
            Some(r.num)
        } else {
            None
        }
    }

    /// Substitute Z ↦ Zγ on row vectors Z = (X, Y): X ↦ aX + cY,
    /// Y ↦ bX + dY for γ = (a b; c d). Pole forms map to primitive forms
    /// with rational content folded into the numerator.
    pub fn substitute_gl2(&self, m: &crate::mat2::Mat2) -> LaurentSeries {
        let (a, b, c, d) = (&m.a, &m.b, &m.c, &m.d);
        let mut num = self.num.substitute_linear(a, c, b, d);
        let mut dens = Vec::new();
        let mut content = Rat::one();
        for f in &self.dens {
            let (nf, ct) = f.substitute(a, b, c, d);
            dens.push(nf);
            content *= ct;
        }
        num = num.scale_rat(&(Rat::one() / content));
        LaurentSeries::new(num, dens)
    }

    /// Homogeneous component of total weight w, exact when all pole forms
    /// are coordinate axes: returns Laurent monomial exponents (possibly
    /// negative) with their coefficients. For general pole forms the
    /// denominators must cancel into the numerator first (`reduce` runs
    /// automatically); truly non-monomial poles would need an X-leading
    /// Laurent expansion, which no pipeline here requires, so that case
    /// reports a usage error instead.
    pub fn homogeneous_component(&self, w: i64) -> Result<BTreeMap<(i64, i64), Cyclotomic>> {
        let r = self.reduce();
        let (mut dx, mut dy) = (0i64, 0i64);
        for d in &r.dens {
            if d.is_x() {
                dx += 1;
            } else if d.is_y() {
                dy += 1;
            } else {
                return Err(Error::Usage(format!(
                    "homogeneous component needs axis poles, found 1/({d})"
                )));
            }
        }
        let target = w + dx + dy;
        let mut out = BTreeMap::new();
        if target < 0 {
            return Ok(out);
        }
        if r.num.prec() != EXACT && target as u32 >= r.num.prec() {
            return Err(Error::InsufficientTruncation {
                required: target as u32 + 1,
                available: r.num.prec(),
            });
        }
        for (&(i, j), c) in r.num.terms() {
            if (i + j) as i64 == target {
                out.insert((i as i64 - dx, j as i64 - dy), c.clone());
            }
        }
        Ok(out)
    }

    /// Taylor coefficient of X^i Y^j of (Π dens)·self, i.e. of the
    /// numerator — the raw-moment reading when dens = {X, Y}.
    pub fn cleared_coeff(&self, i: u32, j: u32) -> Result<Cyclotomic> {
        self.num.coeff_checked(i, j)
    }
}

impl std::fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}]", self.num)?;
        for d in &self.dens {
            write!(f, " / ({d})")?;
        }
        Ok(())
    }
}

/// Divide a series by a primitive linear form uX + vY, if exactly
/// divisible within tracked precision.
fn divide_by_form(num: &PSeries2, form: &LinearForm) -> Option<PSeries2> {
    if num.is_zero() {
        let p = if num.prec() == EXACT { EXACT } else { num.prec().saturating_sub(1) };
        return Some(PSeries2::zero(p));
    }
    let out_prec = if num.prec() == EXACT { EXACT } else { num.prec() - 1 };
    let v = Cyclotomic::from_rat(Rat::from_integer(form.v().clone()));
    if form.u().is_zero() {
        // Pure vY: every term needs j ≥ 1.
        let vinv = Rat::one() / Rat::from_integer(form.v().clone());
        let mut q = PSeries2::zero(out_prec);
        for (&(i, j), c) in num.terms() {
            if j == 0 {
                return None;
            }
            q.set(i, j - 1, c.scale(&vinv));
        }
        return Some(q);
    }
    // Solve q·(uX + vY) = num: at (i+1, j): u·q_{i,j} + v·q_{i+1,j−1} = num_{i+1,j}.
    let max_deg = num.terms().map(|(&(i, j), _)| i + j).max().unwrap_or(0);
    let uinv = Cyclotomic::from_rat(Rat::one() / Rat::from_integer(form.u().clone()));
    let mut q = PSeries2::zero(out_prec);
    for j in 0..=max_deg {
        for i in 0..=max_deg.saturating_sub(j) {
            let mut rhs = num.coeff(i + 1, j);
            if j > 0 {
                rhs = rhs.sub(&v.mul(&q.coeff(i + 1, j - 1)));
            }
            q.set(i, j, rhs.mul(&uinv));
        }
    }
    // Remainder check along the X^0 column: v·q_{0,j−1} must hit num_{0,j}.
    let upper = if num.prec() == EXACT { max_deg + 1 } else { num.prec() };
    for j in 0..=upper.min(max_deg + 1) {
        let want = num.coeff(0, j);
        let got = if j > 0 { v.mul(&q.coeff(0, j - 1)) } else { Cyclotomic::zero() };
        if want != got {
            return None;
        }
    }
    Some(q)
}

/// exp(ax·X + ay·Y) through total degree D (precision D+1).
pub fn exp_series(ax: &Rat, ay: &Rat, d: u32) -> PSeries2 {
    let prec = d + 1;
    let mut out = PSeries2::zero(prec);
    let mut xp: Vec<Rat> = vec![Rat::one()];
    let mut yp: Vec<Rat> = vec![Rat::one()];
    for k in 1..=d as usize {
        xp.push(&xp[k - 1] * ax);
        yp.push(&yp[k - 1] * ay);
    }
    for i in 0..=d {
        for j in 0..=(d - i) {
            let c = &xp[i as usize] * &yp[j as usize]
                / Rat::from_integer(factorial(i) * factorial(j));
            out.set(i, j, Cyclotomic::from_rat(c));
        }
    }
    out
}

/// The Laurent series 1/(1 − e^{mX}) = −(1/(mX))·E(X)^{-1} with
/// E(X) = Σ_{j≥0} (mX)^j/(j+1)!, to X-precision `prec` after the pole:
/// numerator tracked below degree prec+1, one pole form X.
pub fn invert_one_minus_exp(m: &Rat, prec: u32) -> LaurentSeries {
    let n = prec + 1;
    let mut e = PSeries2::zero(n);
    let mut mp = Rat::one();
    for j in 0..n {
        e.set(
            j,
            0,
            Cyclotomic::from_rat(&mp / Rat::from_integer(factorial(j + 1))),
        );
        mp *= m;
    }
    let inv = e.invert().scale_rat(&(-(Rat::one() / m)));
    LaurentSeries::new(inv, vec![LinearForm::x()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat2::Mat2;

    fn q(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    fn c(n: i64, d: i64) -> Cyclotomic {
        Cyclotomic::from_rat(q(n, d))
    }

    #[test]
    fn exp_and_ring_ops() {
        // exp(2X + 3Y) through degree 1 = 1 + 2X + 3Y.
        let e = exp_series(&q(2, 1), &q(3, 1), 1);
        assert_eq!(e.coeff(0, 0), c(1, 1));
        assert_eq!(e.coeff(1, 0), c(2, 1));
        assert_eq!(e.coeff(0, 1), c(3, 1));
        // Degree-2 coefficients: 2²/2 = 2, 2·3 = 6, 3²/2 = 9/2.
        let e2 = exp_series(&q(2, 1), &q(3, 1), 2);
        assert_eq!(e2.coeff(2, 0), c(2, 1));
        assert_eq!(e2.coeff(1, 1), c(6, 1));
        assert_eq!(e2.coeff(0, 2), c(9, 2));
        // exp(X)·exp(−X) = 1 within precision.
        let a = exp_series(&q(1, 1), &q(0, 1), 6);
        let b = exp_series(&q(-1, 1), &q(0, 1), 6);
        let prod = a.mul(&b);
        assert_eq!(prod.coeff(0, 0), c(1, 1));
        for k in 1..6 {
            assert!(prod.coeff(k, 0).is_zero());
        }
    }

    #[test]
    fn inversion_precision() {
        let a = exp_series(&q(1, 1), &q(0, 1), 5);
        let inv = a.invert();
        let prod = a.mul(&inv);
        assert_eq!(prod.coeff(0, 0), c(1, 1));
        for k in 1..5 {
            assert!(prod.coeff(k, 0).is_zero());
        }
    }

    #[test]
    fn one_minus_exp_inverse() {
        // 1/(1−e^X) = −1/X + 1/2 − X/12 + 0·X² + X³/720 + ...
        let s = invert_one_minus_exp(&q(1, 1), 4);
        assert_eq!(s.dens(), &[LinearForm::x()]);
        let n = s.numerator();
        assert_eq!(n.coeff(0, 0), c(-1, 1));
        assert_eq!(n.coeff(1, 0), c(1, 2));
        assert_eq!(n.coeff(2, 0), c(-1, 12));
        assert!(n.coeff(3, 0).is_zero());
        assert_eq!(n.coeff(4, 0), c(1, 720));
        // Scaling the argument: constant term of 1/(1−e^{mX}) + 1/(mX) is 1/2.
        let s3 = invert_one_minus_exp(&q(3, 1), 4);
        assert_eq!(s3.numerator().coeff(0, 0), c(-1, 3));
        assert_eq!(s3.numerator().coeff(1, 0), c(1, 2));
    }

    #[test]
    fn laurent_addition_and_reduction() {
        // 1/X + 1/Y = (X + Y)/(XY).
        let ax = LaurentSeries::new(PSeries2::one(8), vec![LinearForm::x()]);
        let ay = LaurentSeries::new(PSeries2::one(8), vec![LinearForm::y()]);
        let s = ax.add(&ay);
        assert_eq!(s.dens().len(), 2);
        let num = s.numerator();
        assert_eq!(num.coeff(1, 0), c(1, 1));
        assert_eq!(num.coeff(0, 1), c(1, 1));
        // (X+Y)/(X(X+Y)) reduces to 1/X.
        let f = LinearForm::new(1, 1);
        let t = LaurentSeries::new(f.to_series(), vec![LinearForm::x(), f.clone()]).reduce();
        assert_eq!(t.dens(), &[LinearForm::x()]);
        assert_eq!(t.numerator().coeff(0, 0), c(1, 1));
    }

    #[test]
    fn division_by_forms() {
        // (2X + 3Y)² divisible by 2X+3Y (primitive content handling aside).
        let f = LinearForm::new(2, 3);
        let sq = f.to_series().mul(&f.to_series());
        let d = divide_by_form(&sq, &f).unwrap();
        assert_eq!(d.coeff(1, 0), c(2, 1));
        assert_eq!(d.coeff(0, 1), c(3, 1));
        // X + Y is not divisible by X.
        let s = LinearForm::new(1, 1).to_series();
        assert!(divide_by_form(&s, &LinearForm::x()).is_none());
    }

    #[test]
    fn gl2_substitution() {
        // (1/X) under γ = (0 −1; 1 0): X ↦ γ11·X + γ21·Y = Y, so 1/X ↦ 1/Y.
        let inv_x = LaurentSeries::new(PSeries2::one(8), vec![LinearForm::x()]);
        let g = Mat2::from_ints(0, -1, 1, 0);
        let r = inv_x.substitute_gl2(&g);
        assert_eq!(r.dens(), &[LinearForm::y()]);
        assert_eq!(r.numerator().coeff(0, 0), c(1, 1));
        // 1/(XY) under shear (1 1; 0 1): X ↦ X, Y ↦ X + Y.
        let inv_xy =
            LaurentSeries::new(PSeries2::one(8), vec![LinearForm::x(), LinearForm::y()]);
        let sh = Mat2::from_ints(1, 1, 0, 1);
        let r2 = inv_xy.substitute_gl2(&sh);
        let mut dens = r2.dens().to_vec();
        dens.sort();
        assert_eq!(dens, vec![LinearForm::x(), LinearForm::new(1, 1)]);
        // Composition: F(Za) then Z ↦ Zb gives F(Zba), i.e. substitute(ba).
        let a = Mat2::from_ints(2, 1, 1, 1);
        let b = Mat2::from_ints(1, 0, 3, 1);
        let lhs = inv_xy.substitute_gl2(&a).substitute_gl2(&b);
        let rhs = inv_xy.substitute_gl2(&b.mul(&a));
        let diff = lhs.sub(&rhs);
        assert!(diff.numerator().is_zero());
    }

    #[test]
    fn homogeneous_components() {
        // 1/X at weight −1 → {(−1,0): 1}.
        let inv_x = LaurentSeries::new(PSeries2::one(8), vec![LinearForm::x()]);
        let h = inv_x.homogeneous_component(-1).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h[&(-1, 0)], c(1, 1));
        // e^X/(XY) at weight −1 → {(0,−1): 1}.
        let e = exp_series(&q(1, 1), &q(0, 1), 6);
        let s = LaurentSeries::new(e, vec![LinearForm::x(), LinearForm::y()]);
        let h2 = s.homogeneous_component(-1).unwrap();
        assert_eq!(h2.len(), 1);
        assert_eq!(h2[&(0, -1)], c(1, 1));
        // Weight −2 term of the same: X^{−1}Y^{−1} with coefficient 1.
        let h3 = s.homogeneous_component(-2).unwrap();
        assert_eq!(h3[&(-1, -1)], c(1, 1));
    }
}
