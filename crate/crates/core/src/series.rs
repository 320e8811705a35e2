//! Truncated power series with explicit centre, horizon and precision.
//!
//! A series stores coefficients `a_0..a_L` of `sum a_k (z - centre)^k`
//! together with a declared domain radius. The horizon `L` is explicit:
//! nothing here ever extends or consults coefficients beyond it, and
//! operations that would need them fail instead.

use crate::error::{Error, Result};
use crate::scalar::{Complex, Real};

/// Declared domain radius of a series.
#[derive(Clone, Debug)]
pub enum RadiusHint {
    Finite(Real),
    Infinite,
}

impl RadiusHint {
    pub fn finite_f64(r: f64, prec: u32) -> Self {
        RadiusHint::Finite(Real::from_f64(r, prec))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, RadiusHint::Finite(_))
    }

    pub fn as_real(&self) -> Option<&Real> {
        match self {
            RadiusHint::Finite(r) => Some(r),
            RadiusHint::Infinite => None,
        }
    }

    pub fn min(&self, other: &RadiusHint) -> RadiusHint {
        match (self, other) {
            (RadiusHint::Infinite, o) => o.clone(),
            (s, RadiusHint::Infinite) => s.clone(),
            (RadiusHint::Finite(a), RadiusHint::Finite(b)) => RadiusHint::Finite(a.min(b)),
        }
    }
}

/// Result of the finite-horizon root test.
#[derive(Clone, Debug)]
pub struct RadiusEstimate {
    pub radius: RadiusHint,
    /// Set when the stored tail is identically zero (finite support at the
    /// horizon), in which case `radius` is `Infinite`.
    pub entire_at_horizon: bool,
}

#[derive(Clone, Debug)]
pub struct PowerSeries {
    centre: Complex,
    coeffs: Vec<Complex>,
    radius_hint: RadiusHint,
    prec: u32,
}

impl PowerSeries {
    pub fn new(centre: Complex, coeffs: Vec<Complex>, radius_hint: RadiusHint) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let RadiusHint::Finite(r) = &radius_hint {
            if !r.is_positive() {
                return Err(Error::BadRadius);
            }
        }
        let mut prec = centre.prec();
        for c in &coeffs {
            prec = prec.max(c.prec());
        }
        if let RadiusHint::Finite(r) = &radius_hint {
            prec = prec.max(r.prec());
        }
        Ok(PowerSeries { centre, coeffs, radius_hint, prec })
    }

    /// The zero series of the given length.
    pub fn zero(centre: Complex, len: usize, radius_hint: RadiusHint, prec: u32) -> Result<Self> {
        Self::new(centre, vec![Complex::zero(prec); len.max(1)], radius_hint)
    }

    /// A polynomial given by its coefficients about `centre` (infinite hint).
    pub fn polynomial(centre: Complex, coeffs: Vec<Complex>) -> Result<Self> {
        Self::new(centre, coeffs, RadiusHint::Infinite)
    }

    pub fn centre(&self) -> &Complex {
        &self.centre
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Result<&Complex> {
        self.coeffs.get(k).ok_or(Error::Horizon { needed: k, horizon: self.horizon() })
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: at least one coefficient
    }

    /// Largest valid coefficient index.
    pub fn horizon(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn radius_hint(&self) -> &RadiusHint {
        &self.radius_hint
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    fn check_same_centre(&self, b: &PowerSeries) -> Result<()> {
        if self.centre != b.centre {
            return Err(Error::CentreMismatch(self.centre.to_string(), b.centre.to_string()));
        }
        Ok(())
    }

    /// Coefficientwise sum; length and radius hint are the minima.
    pub fn add(&self, b: &PowerSeries) -> Result<PowerSeries> {
        self.check_same_centre(b)?;
        let n = self.len().min(b.len());
        let coeffs = (0..n).map(|k| self.coeffs[k].add(&b.coeffs[k])).collect();
        PowerSeries::new(self.centre.clone(), coeffs, self.radius_hint.min(&b.radius_hint))
    }

    /// Coefficientwise difference; length and radius hint are the minima.
    pub fn sub(&self, b: &PowerSeries) -> Result<PowerSeries> {
        self.check_same_centre(b)?;
        let n = self.len().min(b.len());
        let coeffs = (0..n).map(|k| self.coeffs[k].sub(&b.coeffs[k])).collect();
        PowerSeries::new(self.centre.clone(), coeffs, self.radius_hint.min(&b.radius_hint))
    }

    pub fn scale(&self, c: &Complex) -> PowerSeries {
        let coeffs = self.coeffs.iter().map(|a| a.mul(c)).collect();
        PowerSeries::new(self.centre.clone(), coeffs, self.radius_hint.clone()).expect("same shape")
    }

    /// Termwise derivative: b_k = (k+1) a_{k+1}; the horizon drops by one.
    pub fn derivative(&self) -> PowerSeries {
        if self.len() == 1 {
            return PowerSeries::zero(self.centre.clone(), 1, self.radius_hint.clone(), self.prec)
                .expect("zero series");
        }
        let coeffs = (1..self.len())
            .map(|k| self.coeffs[k].scale(&Real::from_u64(k as u64, self.prec)))
            .collect();
        PowerSeries::new(self.centre.clone(), coeffs, self.radius_hint.clone()).expect("same shape")
    }

    /// Termwise antiderivative with prescribed value at the centre; the
    /// horizon grows by one.
    pub fn antiderivative(&self, value_at_centre: &Complex) -> PowerSeries {
        let mut coeffs = Vec::with_capacity(self.len() + 1);
        coeffs.push(value_at_centre.with_prec(value_at_centre.prec().max(self.prec)));
        for k in 1..=self.len() {
            coeffs.push(self.coeffs[k - 1].scale(&Real::one(self.prec).div(&Real::from_u64(k as u64, self.prec))));
        }
        PowerSeries::new(self.centre.clone(), coeffs, self.radius_hint.clone()).expect("same shape")
    }

    /// Series of `a(z)/z` about the same centre, via the recurrence
    /// `centre*b_k + b_{k-1} = a_k`. Requires a nonzero centre.
    pub fn div_by_z(&self) -> Result<PowerSeries> {
        if self.centre.is_zero() {
            return Err(Error::SingularCentre);
        }
        let mut coeffs = Vec::with_capacity(self.len());
        coeffs.push(self.coeffs[0].div(&self.centre));
        for k in 1..self.len() {
            coeffs.push(self.coeffs[k].sub(&coeffs[k - 1]).div(&self.centre));
        }
        let centre_abs = self.centre.abs();
        let hint = self.radius_hint.min(&RadiusHint::Finite(centre_abs));
        PowerSeries::new(self.centre.clone(), coeffs, hint)
    }

    /// Series of `z * a(z)`: g_k = centre*a_k + a_{k-1}; the horizon grows by one.
    pub fn mul_by_z(&self) -> PowerSeries {
        let mut coeffs = Vec::with_capacity(self.len() + 1);
        coeffs.push(self.coeffs[0].mul(&self.centre));
        for k in 1..self.len() {
            coeffs.push(self.coeffs[k].mul(&self.centre).add(&self.coeffs[k - 1]));
        }
        coeffs.push(self.coeffs[self.len() - 1].clone());
        PowerSeries::new(self.centre.clone(), coeffs, self.radius_hint.clone()).expect("same shape")
    }

    /// Horner evaluation of the stored truncation at `z`.
    pub fn evaluate(&self, z: &Complex) -> Complex {
        let u = z.sub(&self.centre);
        let mut acc = self.coeffs[self.horizon()].clone();
        for k in (0..self.horizon()).rev() {
            acc = acc.mul(&u).add(&self.coeffs[k]);
        }
        acc
    }

    /// Prefix of the first `len` coefficients (the horizon shrinks).
    pub fn truncate(&self, len: usize) -> Result<PowerSeries> {
        if len == 0 || len > self.len() {
            return Err(Error::Horizon { needed: len.saturating_sub(1), horizon: self.horizon() });
        }
        PowerSeries::new(self.centre.clone(), self.coeffs[..len].to_vec(), self.radius_hint.clone())
    }

    /// Append zero coefficients up to `len`. Exact only when the series is
    /// genuinely a polynomial of degree <= the current horizon; callers
    /// assert that context.
    pub fn extend_with_zeros(&self, len: usize) -> PowerSeries {
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() < len {
            coeffs.push(Complex::zero(self.prec));
        }
        PowerSeries::new(self.centre.clone(), coeffs, self.radius_hint.clone()).expect("same shape")
    }

    /// Degree of the highest nonzero coefficient, if any.
    pub fn degree(&self) -> Option<usize> {
        (0..self.len()).rev().find(|&k| !self.coeffs[k].is_zero())
    }

    /// Finite-horizon root-test radius proxy:
    /// `1 / max |a_k|^(1/k)` over the last `tail_window` nonzero-coefficient
    /// indices. A trailing zero run of at least `tail_window` positions (or a
    /// zero series) reports finite support at the horizon instead.
    pub fn estimate_radius(&self, tail_window: usize) -> Result<RadiusEstimate> {
        if tail_window < 8 {
            return Err(Error::Precondition("tail_window must be >= 8".into()));
        }
        if self.len() < tail_window {
            return Err(Error::Precondition(format!(
                "series length {} is below tail_window {tail_window}",
                self.len()
            )));
        }
        let nonzero: Vec<usize> = (1..self.len()).filter(|&k| !self.coeffs[k].is_zero()).collect();
        let entire = match nonzero.last() {
            None => true,
            Some(&k_last) => self.horizon() - k_last >= tail_window,
        };
        if entire {
            return Ok(RadiusEstimate { radius: RadiusHint::Infinite, entire_at_horizon: true });
        }
        let start = nonzero.len().saturating_sub(tail_window);
        let mut max_root: Option<Real> = None;
        for &k in &nonzero[start..] {
            let root = self.coeffs[k].abs().nth_root(k)?;
            max_root = Some(match max_root {
                None => root,
                Some(m) => m.max(&root),
            });
        }
        let m = max_root.expect("nonzero tail");
        Ok(RadiusEstimate {
            radius: RadiusHint::Finite(Real::one(self.prec).div(&m)),
            entire_at_horizon: false,
        })
    }

    /// Truncation of `log` on `D(z0, r)` about `z0`, branch fixed as
    /// `Log(z0) + log(1 + (z - z0)/z0)` with the principal values; valid
    /// whenever `|z0| >= r > 0` (so that 0 stays outside the disc).
    pub fn log_series(z0: &Complex, r: &Real, horizon: usize, prec: u32) -> Result<PowerSeries> {
        if !r.is_positive() || z0.abs() < *r {
            return Err(Error::BranchDomain);
        }
        let z0 = z0.with_prec(prec);
        let mut coeffs = Vec::with_capacity(horizon + 1);
        coeffs.push(z0.ln()?);
        let mut pw = Complex::one(prec); // z0^k
        for k in 1..=horizon {
            pw = pw.mul(&z0);
            let denom = pw.scale(&Real::from_u64(k as u64, prec));
            let mut term = Complex::one(prec).div(&denom);
            if k % 2 == 0 {
                term = term.neg();
            }
            coeffs.push(term);
        }
        PowerSeries::new(z0, coeffs, RadiusHint::Finite(r.with_prec(prec)))
    }
}

/// Pointwise value of the fixed log branch at `z`:
/// `Log(z0) + Log(1 + (z - z0)/z0)`.
pub fn log_branch_at(z: &Complex, z0: &Complex) -> Result<Complex> {
    let one = Complex::one(z.prec().max(z0.prec()));
    let inner = one.add(&z.sub(z0).div(z0));
    Ok(z0.ln()?.add(&inner.ln()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::exactness_tol;

    const P: u32 = 256;

    fn c(re: f64, im: f64) -> Complex {
        Complex::from_f64s(re, im, P)
    }

    fn series(centre: f64, coeffs: &[f64], hint: f64) -> PowerSeries {
        PowerSeries::new(
            c(centre, 0.0),
            coeffs.iter().map(|&v| c(v, 0.0)).collect(),
            RadiusHint::finite_f64(hint, P),
        )
        .unwrap()
    }

    #[test]
    fn add_is_coefficientwise_with_min_length() {
        let a = series(2.0, &[1.0, 1.0], 1.0);
        let b = series(2.0, &[2.0, -1.0, 5.0], 2.0);
        let s = a.add(&b).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.coeffs()[0], c(3.0, 0.0));
        assert!(s.coeffs()[1].is_zero());
        assert!(s.radius_hint().as_real().unwrap() == &Real::from_f64(1.0, P));
    }

    #[test]
    fn add_zero_is_identity() {
        let a = series(2.0, &[1.0, -2.0, 0.5], 1.0);
        let z = PowerSeries::zero(c(2.0, 0.0), 3, RadiusHint::Infinite, P).unwrap();
        let s = a.add(&z).unwrap();
        for k in 0..3 {
            assert_eq!(s.coeffs()[k], a.coeffs()[k]);
        }
    }

    #[test]
    fn add_rejects_distinct_centres() {
        let a = series(2.0, &[1.0], 1.0);
        let b = series(3.0, &[1.0], 1.0);
        assert!(matches!(a.add(&b), Err(Error::CentreMismatch(_, _))));
    }

    #[test]
    fn scale_by_zero_and_two() {
        let a = series(2.0, &[1.0, 1.0], 1.0);
        let z = a.scale(&Complex::zero(P));
        assert!(z.coeffs().iter().all(|x| x.is_zero()));
        let d = a.scale(&c(2.0, 0.0));
        assert_eq!(d.coeffs()[0], c(2.0, 0.0));
        assert_eq!(d.coeffs()[1], c(2.0, 0.0));
    }

    #[test]
    fn derivative_examples() {
        // constant -> zero series
        let k = series(2.0, &[5.0], 1.0);
        let d = k.derivative();
        assert_eq!(d.len(), 1);
        assert!(d.coeffs()[0].is_zero());
        // (z-2)^2 -> 2(z-2)
        let sq = series(2.0, &[0.0, 0.0, 1.0], 1.0);
        let d = sq.derivative();
        assert_eq!(d.len(), 2);
        assert!(d.coeffs()[0].is_zero());
        assert_eq!(d.coeffs()[1], c(2.0, 0.0));
    }

    #[test]
    fn antiderivative_examples() {
        let one = series(2.0, &[1.0], 1.0);
        let f = one.antiderivative(&Complex::zero(P));
        assert_eq!(f.len(), 2);
        assert!(f.coeffs()[0].is_zero());
        assert_eq!(f.coeffs()[1], c(1.0, 0.0));
        // gap indices shift up by one
        let g = series(2.0, &[0.0, 3.0, 0.0, 7.0], 1.0);
        let fg = g.antiderivative(&Complex::zero(P));
        assert!(fg.coeffs()[1].is_zero());
        assert!(fg.coeffs()[3].is_zero());
        assert!(!fg.coeffs()[2].is_zero());
        assert!(!fg.coeffs()[4].is_zero());
    }

    #[test]
    fn derivative_of_antiderivative_is_identity() {
        let a = series(2.0, &[1.5, -0.25, 3.0, 0.125], 1.0);
        let round = a.antiderivative(&c(9.0, 0.0)).derivative();
        let tol = exactness_tol(P, 10);
        for k in 0..a.len() {
            assert!(round.coeffs()[k].sub(&a.coeffs()[k]).abs() < tol);
        }
    }

    #[test]
    fn div_by_z_geometric_example() {
        // a = 1 at centre 2: b_k = (-1)^k 2^{-k-1}
        let a = series(2.0, &[1.0, 0.0, 0.0], 2.0);
        let b = a.div_by_z().unwrap();
        assert_eq!(b.coeffs()[0], c(0.5, 0.0));
        assert_eq!(b.coeffs()[1], c(-0.25, 0.0));
        assert_eq!(b.coeffs()[2], c(0.125, 0.0));
    }

    #[test]
    fn div_by_z_of_z_is_one() {
        // a(z) = z: coeffs (2, 1) at centre 2
        let a = series(2.0, &[2.0, 1.0, 0.0], 2.0);
        let b = a.div_by_z().unwrap();
        assert_eq!(b.coeffs()[0], c(1.0, 0.0));
        assert!(b.coeffs()[1].is_zero());
        assert!(b.coeffs()[2].is_zero());
    }

    #[test]
    fn div_by_z_multiply_back_roundtrip() {
        let a = series(2.0, &[0.5, -1.25, 2.0, 0.75, -0.0625], 1.0);
        let back = a.div_by_z().unwrap().mul_by_z();
        let tol = exactness_tol(P, 10);
        for k in 0..a.len() {
            assert!(back.coeffs()[k].sub(&a.coeffs()[k]).abs() < tol);
        }
    }

    #[test]
    fn div_by_z_requires_nonzero_centre() {
        let a = PowerSeries::polynomial(Complex::zero(P), vec![c(1.0, 0.0)]).unwrap();
        assert!(matches!(a.div_by_z(), Err(Error::SingularCentre)));
    }

    #[test]
    fn evaluate_examples() {
        let a = series(2.0, &[1.0, 2.0], 1.0);
        assert_eq!(a.evaluate(&c(3.0, 0.0)), c(3.0, 0.0));
        assert_eq!(a.evaluate(&c(2.0, 0.0)), c(1.0, 0.0));
    }

    #[test]
    fn log_series_coefficients_and_value() {
        let r = Real::one(P);
        let ls = PowerSeries::log_series(&c(2.0, 0.0), &r, 60, P).unwrap();
        assert_eq!(ls.coeffs()[1], c(0.5, 0.0));
        assert_eq!(ls.coeffs()[2], c(-0.125, 0.0));
        let third = Complex::one(P).div(&c(24.0, 0.0));
        assert!(ls.coeffs()[3].sub(&third).abs() < exactness_tol(P, 10));
        // evaluate at the centre: principal Log(2)
        let v = ls.evaluate(&c(2.0, 0.0));
        assert!((v.re().to_f64() - 2f64.ln()).abs() < 1e-30);
        assert!(v.im().is_zero());
    }

    #[test]
    fn log_series_branch_domain() {
        assert!(matches!(
            PowerSeries::log_series(&c(0.5, 0.0), &Real::one(P), 10, P),
            Err(Error::BranchDomain)
        ));
    }

    #[test]
    fn log_series_derivative_matches_reciprocal() {
        let r = Real::one(P);
        let ls = PowerSeries::log_series(&c(2.0, 0.0), &r, 30, P).unwrap();
        let one = PowerSeries::new(c(2.0, 0.0), vec![Complex::one(P); 30], RadiusHint::Finite(r)).unwrap();
        // d/dz log = 1/z: compare coefficients to (constant 1)/z
        let recip = PowerSeries::new(
            c(2.0, 0.0),
            {
                let mut v = vec![Complex::one(P)];
                v.extend(std::iter::repeat(Complex::zero(P)).take(29));
                v
            },
            one.radius_hint().clone(),
        )
        .unwrap()
        .div_by_z()
        .unwrap();
        let d = ls.derivative();
        let tol = exactness_tol(P, 10);
        for k in 0..d.len().min(recip.len()) {
            assert!(d.coeffs()[k].sub(&recip.coeffs()[k]).abs() < tol, "k={k}");
        }
    }

    #[test]
    fn estimate_radius_geometric() {
        for rho in [0.5f64, 2.0] {
            let coeffs: Vec<Complex> = (0..64).map(|k| c(rho.powi(-k), 0.0)).collect();
            let a = PowerSeries::new(c(0.0, 0.0), coeffs, RadiusHint::Infinite).unwrap();
            let est = a.estimate_radius(32).unwrap();
            let got = est.radius.as_real().unwrap().to_f64();
            assert!((got - rho).abs() / rho < 0.05, "rho={rho} got={got}");
            assert!(!est.entire_at_horizon);
        }
    }

    #[test]
    fn estimate_radius_polynomial_flag() {
        let mut coeffs = vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)];
        coeffs.extend(std::iter::repeat(Complex::zero(P)).take(61));
        let a = PowerSeries::new(c(0.0, 0.0), coeffs, RadiusHint::Infinite).unwrap();
        let est = a.estimate_radius(32).unwrap();
        assert!(est.entire_at_horizon);
        assert!(matches!(est.radius, RadiusHint::Infinite));
    }

    #[test]
    fn estimate_radius_preconditions() {
        let a = series(0.0, &[1.0; 16], 1.0);
        assert!(a.estimate_radius(4).is_err());
        assert!(a.estimate_radius(32).is_err());
    }

    #[test]
    fn horizon_access_is_checked() {
        let a = series(2.0, &[1.0, 2.0], 1.0);
        assert!(a.coeff(1).is_ok());
        assert!(matches!(a.coeff(2), Err(Error::Horizon { needed: 2, horizon: 1 })));
        assert!(a.truncate(3).is_err());
        assert!(a.truncate(0).is_err());
    }
}
