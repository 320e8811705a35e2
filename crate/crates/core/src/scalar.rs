//! Configurable-precision real and complex scalars.
//!
//! Every value carries an explicit binary precision. Binary operations
//! compute at the maximum precision of their operands; transcendental and
//! compound operations use a few guard bits internally and round the result
//! back, so repeated evaluation of the same expression is bit-identical.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, RoundingMode};

use crate::error::{Error, Result};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 256;

/// Guard bits for compound operations (division, modulus, atan2, ln).
const GUARD: u32 = 32;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// A real number at explicit binary precision.
#[derive(Clone, Debug)]
pub struct Real {
    mag: BigFloat,
    prec: u32,
}

impl Real {
    pub(crate) fn from_bigfloat(mut mag: BigFloat, prec: u32) -> Self {
        debug_assert!(!mag.is_nan() && !mag.is_inf(), "scalar invariant: finite values only");
        if mag.precision().unwrap_or(0) > prec as usize {
            mag.set_precision(prec as usize, RM).expect("set_precision");
        }
        Real { mag, prec }
    }

    pub(crate) fn bigfloat(&self) -> &BigFloat {
        &self.mag
    }

    pub fn zero(prec: u32) -> Self {
        Real { mag: BigFloat::new(prec as usize), prec }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_u64(1, prec)
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        assert!(v.is_finite(), "from_f64 requires a finite value");
        Real::from_bigfloat(BigFloat::from_f64(v, prec as usize), prec)
    }

    pub fn from_u64(v: u64, prec: u32) -> Self {
        Real::from_bigfloat(BigFloat::from_u64(v, prec as usize), prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Real::from_bigfloat(BigFloat::from_i64(v, prec as usize), prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Re-round to precision `p`. Raising the precision is exact.
    pub fn with_prec(&self, p: u32) -> Self {
        let mut m = self.mag.clone();
        if (p as usize) < m.precision().unwrap_or(0) {
            m.set_precision(p as usize, RM).expect("set_precision");
        }
        Real { mag: m, prec: p }
    }

    fn join(&self, rhs: &Real) -> u32 {
        self.prec.max(rhs.prec)
    }

    pub fn add(&self, rhs: &Real) -> Real {
        let p = self.join(rhs);
        Real::from_bigfloat(self.mag.add(&rhs.mag, p as usize, RM), p)
    }

    pub fn sub(&self, rhs: &Real) -> Real {
        let p = self.join(rhs);
        Real::from_bigfloat(self.mag.sub(&rhs.mag, p as usize, RM), p)
    }

    pub fn mul(&self, rhs: &Real) -> Real {
        let p = self.join(rhs);
        Real::from_bigfloat(self.mag.mul(&rhs.mag, p as usize, RM), p)
    }

    pub fn div(&self, rhs: &Real) -> Real {
        debug_assert!(!rhs.is_zero(), "division by zero");
        let p = self.join(rhs);
        Real::from_bigfloat(self.mag.div(&rhs.mag, p as usize, RM), p)
    }

    pub fn neg(&self) -> Real {
        Real { mag: self.mag.neg(), prec: self.prec }
    }

    pub fn abs(&self) -> Real {
        Real { mag: self.mag.abs(), prec: self.prec }
    }

    pub fn sqrt(&self) -> Real {
        Real::from_bigfloat(self.mag.sqrt(self.prec as usize, RM), self.prec)
    }

    pub fn ln(&self) -> Result<Real> {
        if self.is_zero() || self.is_negative() {
            return Err(Error::NonPositiveLog);
        }
        let r = with_consts(|cc| self.mag.ln((self.prec + GUARD) as usize, RM, cc));
        Ok(Real::from_bigfloat(r, self.prec))
    }

    pub fn exp(&self) -> Real {
        let r = with_consts(|cc| self.mag.exp((self.prec + GUARD) as usize, RM, cc));
        Real::from_bigfloat(r, self.prec)
    }

    pub fn powi(&self, n: usize) -> Real {
        Real::from_bigfloat(self.mag.powi(n, self.prec as usize, RM), self.prec)
    }

    /// Positive k-th root, computed as exp(ln(x)/k).
    pub fn nth_root(&self, k: usize) -> Result<Real> {
        let p = self.prec + GUARD;
        let ln = self.with_prec(p).ln()?;
        let kk = Real::from_u64(k as u64, p);
        Ok(ln.div(&kk).exp().with_prec(self.prec))
    }

    pub fn pi(prec: u32) -> Real {
        Real::from_bigfloat(with_consts(|cc| cc.pi(prec as usize, RM)), prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mag.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mag.is_negative() && !self.mag.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mag.is_positive() && !self.mag.is_zero()
    }

    pub fn total_cmp(&self, rhs: &Real) -> Ordering {
        match self.mag.cmp(&rhs.mag).expect("finite comparison") {
            x if x < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    pub fn max(&self, rhs: &Real) -> Real {
        if self.total_cmp(rhs) == Ordering::Less { rhs.clone() } else { self.clone() }
    }

    pub fn min(&self, rhs: &Real) -> Real {
        if self.total_cmp(rhs) == Ordering::Greater { rhs.clone() } else { self.clone() }
    }

    /// Lossy conversion for display and threshold arithmetic.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let (words, _, sign, e, _) = self.mag.as_raw_parts().expect("finite value");
        let top = *words.last().expect("nonzero mantissa");
        // value = 0.mantissa * 2^e with the top word's MSB set
        let frac = top as f64 / 2f64.powi(64);
        let v = frac * 2f64.powf(e as f64);
        if sign == astro_float::Sign::Neg { -v } else { v }
    }

    /// Bit-identical equality: same mantissa, exponent, sign and precision.
    pub fn eq_bits(&self, rhs: &Real) -> bool {
        if self.prec != rhs.prec {
            return false;
        }
        match (self.mag.as_raw_parts(), rhs.mag.as_raw_parts()) {
            (Some((wa, na, sa, ea, _)), Some((wb, nb, sb, eb, _))) => {
                wa == wb && na == nb && sa == sb && ea == eb
            }
            _ => false,
        }
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.total_cmp(other) == Ordering::Equal
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.total_cmp(other))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::decimal::to_sci_string(self, 20))
    }
}

/// atan2(y, x) with the usual quadrant conventions; result in (-pi, pi].
pub fn atan2(y: &Real, x: &Real, prec: u32) -> Real {
    let p = prec + GUARD;
    if x.is_zero() && y.is_zero() {
        return Real::zero(prec);
    }
    if x.is_zero() {
        let half_pi = Real::pi(p).div(&Real::from_u64(2, p));
        return if y.is_negative() { half_pi.neg().with_prec(prec) } else { half_pi.with_prec(prec) };
    }
    let ratio = y.with_prec(p).div(&x.with_prec(p));
    let base = Real::from_bigfloat(with_consts(|cc| ratio.bigfloat().atan(p as usize, RM, cc)), p);
    let r = if x.is_positive() {
        base
    } else if y.is_negative() {
        base.sub(&Real::pi(p))
    } else {
        // y >= 0, x < 0; includes arg(-1) = +pi
        base.add(&Real::pi(p))
    };
    r.with_prec(prec)
}

/// A complex number at explicit binary precision.
#[derive(Clone, Debug)]
pub struct Complex {
    re: Real,
    im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Complex { re: Real::zero(prec), im: Real::zero(prec) }
    }

    pub fn one(prec: u32) -> Self {
        Complex { re: Real::one(prec), im: Real::zero(prec) }
    }

    pub fn from_f64s(re: f64, im: f64, prec: u32) -> Self {
        Complex { re: Real::from_f64(re, prec), im: Real::from_f64(im, prec) }
    }

    pub fn from_real(re: Real) -> Self {
        let p = re.prec();
        Complex { re, im: Real::zero(p) }
    }

    pub fn re(&self) -> &Real {
        &self.re
    }

    pub fn im(&self) -> &Real {
        &self.im
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, p: u32) -> Self {
        Complex { re: self.re.with_prec(p), im: self.im.with_prec(p) }
    }

    pub fn add(&self, rhs: &Complex) -> Complex {
        Complex { re: self.re.add(&rhs.re), im: self.im.add(&rhs.im) }
    }

    pub fn sub(&self, rhs: &Complex) -> Complex {
        Complex { re: self.re.sub(&rhs.re), im: self.im.sub(&rhs.im) }
    }

    pub fn mul(&self, rhs: &Complex) -> Complex {
        let re = self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im));
        let im = self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re));
        Complex { re, im }
    }

    pub fn div(&self, rhs: &Complex) -> Complex {
        let p = self.prec().max(rhs.prec());
        let pw = p + GUARD;
        let (a, b) = (self.re.with_prec(pw), self.im.with_prec(pw));
        let (c, d) = (rhs.re.with_prec(pw), rhs.im.with_prec(pw));
        let den = c.mul(&c).add(&d.mul(&d));
        debug_assert!(!den.is_zero(), "complex division by zero");
        let re = a.mul(&c).add(&b.mul(&d)).div(&den);
        let im = b.mul(&c).sub(&a.mul(&d)).div(&den);
        Complex { re: re.with_prec(p), im: im.with_prec(p) }
    }

    pub fn neg(&self) -> Complex {
        Complex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn scale(&self, s: &Real) -> Complex {
        Complex { re: self.re.mul(s), im: self.im.mul(s) }
    }

    pub fn abs(&self) -> Real {
        let p = self.prec();
        let pw = p + GUARD;
        let a = self.re.with_prec(pw);
        let b = self.im.with_prec(pw);
        a.mul(&a).add(&b.mul(&b)).sqrt().with_prec(p)
    }

    /// Principal argument in (-pi, pi].
    pub fn arg(&self) -> Real {
        atan2(&self.im, &self.re, self.prec())
    }

    /// Principal logarithm: ln|z| + i arg(z). Errors at z = 0.
    pub fn ln(&self) -> Result<Complex> {
        if self.is_zero() {
            return Err(Error::NonPositiveLog);
        }
        let p = self.prec();
        let pw = p + GUARD;
        let m = self.with_prec(pw).abs();
        Ok(Complex { re: m.ln()?.with_prec(p), im: self.arg() })
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, n: usize) -> Complex {
        let p = self.prec();
        let mut acc = Complex::one(p);
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn eq_bits(&self, rhs: &Complex) -> bool {
        self.re.eq_bits(&rhs.re) && self.im.eq_bits(&rhs.im)
    }
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.re == other.re && self.im == other.im
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}i", self.re, if self.im.is_negative() { "" } else { "+" }, self.im)
    }
}

/// 2^(-(prec - slack)): the residual tolerance for identities that are exact
/// in exact arithmetic.
pub fn exactness_tol(prec: u32, slack: u32) -> Real {
    let e = -((prec.saturating_sub(slack)) as i64);
    pow2(e, prec)
}

/// 2^e as a Real.
pub fn pow2(e: i64, prec: u32) -> Real {
    let two = Real::from_u64(2, prec);
    if e >= 0 {
        two.powi(e as usize)
    } else {
        Real::one(prec).div(&two.powi((-e) as usize))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_propagates_to_max() {
        let a = Real::from_f64(1.5, 128);
        let b = Real::from_f64(2.5, 320);
        assert_eq!(a.add(&b).prec(), 320);
        assert_eq!(a.mul(&b).prec(), 320);
        let c = Complex::from_f64s(1.0, 2.0, 64);
        let d = Complex::from_f64s(3.0, 4.0, 192);
        assert_eq!(c.mul(&d).prec(), 192);
    }

    #[test]
    fn arithmetic_is_deterministic() {
        let run = || {
            let a = Complex::from_f64s(1.25, -0.5, 256);
            let b = Complex::from_f64s(0.1, 7.0, 256);
            a.mul(&b).div(&Complex::from_f64s(3.0, 1.0, 256)).add(&b.powi(5))
        };
        assert!(run().eq_bits(&run()));
    }

    #[test]
    fn complex_mul_div_roundtrip() {
        let a = Complex::from_f64s(1.5, -2.25, 256);
        let b = Complex::from_f64s(-0.75, 3.5, 256);
        let r = a.mul(&b).div(&b);
        let err = r.sub(&a).abs();
        assert!(err < exactness_tol(256, 20), "err = {}", err);
    }

    #[test]
    fn atan2_quadrants() {
        let p = 256;
        let pi = Real::pi(p);
        let one = Real::one(p);
        let zero = Real::zero(p);
        // arg(-1) = +pi
        assert!(atan2(&zero, &one.neg(), p).sub(&pi).abs() < exactness_tol(p, 10));
        // arg(i) = pi/2
        let half_pi = pi.div(&Real::from_u64(2, p));
        assert!(atan2(&one, &zero, p).sub(&half_pi).abs() < exactness_tol(p, 10));
        // arg(-i) = -pi/2
        assert!(atan2(&one.neg(), &zero, p).add(&half_pi).abs() < exactness_tol(p, 10));
        // arg(1+i) = pi/4
        let quarter_pi = pi.div(&Real::from_u64(4, p));
        assert!(atan2(&one, &one, p).sub(&quarter_pi).abs() < exactness_tol(p, 10));
        // third quadrant: arg(-1-i) = -3pi/4
        let expect = quarter_pi.mul(&Real::from_u64(3, p)).neg();
        assert!(atan2(&one.neg(), &one.neg(), p).sub(&expect).abs() < exactness_tol(p, 10));
    }

    #[test]
    fn principal_log_matches_f64() {
        let z = Complex::from_f64s(2.0, 0.0, 256);
        let l = z.ln().unwrap();
        assert!((l.re().to_f64() - 2f64.ln()).abs() < 1e-15);
        assert!(l.im().to_f64().abs() < 1e-15);
        let w = Complex::from_f64s(-1.0, 1.0, 256);
        let lw = w.ln().unwrap();
        assert!((lw.re().to_f64() - 2f64.ln() / 2.0).abs() < 1e-15);
        assert!((lw.im().to_f64() - 3.0 * std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn powi_matches_repeated_mul() {
        let z = Complex::from_f64s(1.125, -0.375, 192);
        let mut acc = Complex::one(192);
        for _ in 0..7 {
            acc = acc.mul(&z);
        }
        assert!(z.powi(7).sub(&acc).abs() < exactness_tol(192, 20));
    }

    #[test]
    fn to_f64_roundtrip() {
        for v in [0.0, 1.0, -2.5, 0.6931471805599453, 1e-30, -3e20] {
            let r = Real::from_f64(v, 256);
            let back = r.to_f64();
            assert!((back - v).abs() <= v.abs() * 1e-12, "{v} -> {back}");
        }
    }
}
