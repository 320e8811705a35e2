//! Taylor shift (recentering) and the centre-varying partial-sum operators.
//!
//! `shift` recenters a stored truncation; on top of it sit
//! `partial_sum_eval` (S_N(f, zeta)(w)) and `t_eval`
//! (T_N(f)(z) = S_N(f, z)(0)), the operator this whole crate measures.
//!
//! Three shift kernels compute the same map and cross-check each other:
//! a direct binomial sum, repeated synthetic division (Horner), and a
//! divide-and-conquer split combined through a polynomial product of the
//! shifted halves with (w + delta)^(L/2). The product uses schoolbook
//! multiplication below 64 terms and Karatsuba above.

use crate::error::{Error, Result};
use crate::scalar::{Complex, Real};
use crate::series::{PowerSeries, RadiusHint};

/// Karatsuba threshold for polynomial products (in coefficients).
const KARATSUBA_MIN: usize = 64;

/// Divide-and-conquer shift threshold: below this, synthetic division.
const DC_MIN: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftAlgorithm {
    NaiveBinomial,
    HornerShift,
    DivideAndConquer,
}

impl ShiftAlgorithm {
    pub const ALL: [ShiftAlgorithm; 3] =
        [ShiftAlgorithm::NaiveBinomial, ShiftAlgorithm::HornerShift, ShiftAlgorithm::DivideAndConquer];

    pub fn name(self) -> &'static str {
        match self {
            ShiftAlgorithm::NaiveBinomial => "naive_binomial",
            ShiftAlgorithm::HornerShift => "horner_shift",
            ShiftAlgorithm::DivideAndConquer => "divide_and_conquer",
        }
    }
}

impl std::str::FromStr for ShiftAlgorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive_binomial" | "naive" => Ok(ShiftAlgorithm::NaiveBinomial),
            "horner_shift" | "horner" => Ok(ShiftAlgorithm::HornerShift),
            "divide_and_conquer" | "dc" => Ok(ShiftAlgorithm::DivideAndConquer),
            _ => Err(Error::Parse(format!("unknown shift algorithm '{s}'"))),
        }
    }
}

fn check_domain(a: &PowerSeries, zeta: &Complex) -> Result<()> {
    if let RadiusHint::Finite(r) = a.radius_hint() {
        let d = zeta.sub(a.centre()).abs();
        if !(d < *r) {
            return Err(Error::OutsideDisc);
        }
    }
    Ok(())
}

/// First `n + 1` Taylor coefficients of `a` about the new centre `zeta`,
/// computed from the stored degree-`L` truncation.
pub fn shift(a: &PowerSeries, zeta: &Complex, n: usize, alg: ShiftAlgorithm) -> Result<PowerSeries> {
    check_domain(a, zeta)?;
    if n > a.horizon() {
        return Err(Error::Horizon { needed: n, horizon: a.horizon() });
    }
    let prec = a.prec().max(zeta.prec());
    let delta = zeta.sub(a.centre());
    let coeffs = if delta.is_zero() {
        a.coeffs()[..=n].to_vec()
    } else {
        match alg {
            ShiftAlgorithm::NaiveBinomial => shift_naive(a.coeffs(), &delta, n, prec),
            ShiftAlgorithm::HornerShift => shift_horner(a.coeffs(), &delta, n),
            ShiftAlgorithm::DivideAndConquer => {
                let mut full = shift_dc(a.coeffs(), &delta, prec);
                full.truncate(n + 1);
                full
            }
        }
    };
    let hint = match a.radius_hint() {
        RadiusHint::Infinite => RadiusHint::Infinite,
        RadiusHint::Finite(r) => RadiusHint::Finite(r.sub(&delta.abs())),
    };
    PowerSeries::new(zeta.clone(), coeffs, hint)
}

/// b_n = sum_{k>=n} a_k C(k,n) delta^(k-n), binomials by the ratio recurrence.
fn shift_naive(a: &[Complex], delta: &Complex, n: usize, prec: u32) -> Vec<Complex> {
    let horizon = a.len() - 1;
    let mut out = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let mut acc = Complex::zero(prec);
        let mut binom = Real::one(prec); // C(k, m), starting at k = m
        let mut pw = Complex::one(prec); // delta^(k-m)
        for k in m..=horizon {
            if k > m {
                // C(k, m) = C(k-1, m) * k / (k - m)
                binom = binom.mul(&Real::from_u64(k as u64, prec)).div(&Real::from_u64((k - m) as u64, prec));
                pw = pw.mul(delta);
            }
            if !a[k].is_zero() {
                acc = acc.add(&a[k].scale(&binom).mul(&pw));
            }
        }
        out.push(acc);
    }
    out
}

/// Repeated synthetic division; pass `i` fixes output coefficient `i`.
fn shift_horner(a: &[Complex], delta: &Complex, n: usize) -> Vec<Complex> {
    let horizon = a.len() - 1;
    let mut c = a.to_vec();
    for i in 0..=n {
        for j in (i..horizon).rev() {
            c[j] = c[j].add(&delta.mul(&c[j + 1]));
        }
    }
    c.truncate(n + 1);
    c
}

/// Full-length divide-and-conquer shift.
fn shift_dc(a: &[Complex], delta: &Complex, prec: u32) -> Vec<Complex> {
    if a.len() <= DC_MIN {
        return shift_horner(a, delta, a.len() - 1);
    }
    let m = a.len() / 2;
    let lo = shift_dc(&a[..m], delta, prec);
    let hi = shift_dc(&a[m..], delta, prec);
    let pw = binomial_power(delta, m, prec);
    let mut out = poly_mul(&hi, &pw, prec);
    debug_assert_eq!(out.len(), a.len());
    for (k, c) in lo.into_iter().enumerate() {
        out[k] = out[k].add(&c);
    }
    out
}

/// Coefficients of (w + delta)^m: C(m, j) delta^(m-j) for j = 0..=m.
fn binomial_power(delta: &Complex, m: usize, prec: u32) -> Vec<Complex> {
    let mut binom = vec![Real::one(prec); m + 1];
    for j in 1..=m {
        binom[j] = binom[j - 1]
            .mul(&Real::from_u64((m + 1 - j) as u64, prec))
            .div(&Real::from_u64(j as u64, prec));
    }
    let mut out = vec![Complex::zero(prec); m + 1];
    let mut pw = Complex::one(prec); // delta^(m-j) built from the top
    for j in (0..=m).rev() {
        out[j] = pw.scale(&binom[j]);
        pw = pw.mul(delta);
    }
    out
}

/// Polynomial product; schoolbook below `KARATSUBA_MIN`, Karatsuba above.
pub fn poly_mul(a: &[Complex], b: &[Complex], prec: u32) -> Vec<Complex> {
    let n = a.len() + b.len() - 1;
    let mut out = vec![Complex::zero(prec); n];
    poly_mul_into(a, b, prec, &mut out);
    out
}

fn poly_mul_into(a: &[Complex], b: &[Complex], prec: u32, out: &mut [Complex]) {
    if a.len().min(b.len()) < KARATSUBA_MIN {
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
        return;
    }
    let m = a.len().min(b.len()) / 2;
    let (a0, a1) = a.split_at(m);
    let (b0, b1) = b.split_at(m);
    // a0*b0 and a1*b1 into their (zeroed) regions
    poly_mul_into(a0, b0, prec, &mut out[..2 * m - 1]);
    poly_mul_into(a1, b1, prec, &mut out[2 * m..]);
    // snapshot before the middle pass overwrites the regions it reads
    let lo = out[..2 * m - 1].to_vec();
    let hi = out[2 * m..].to_vec();
    // (a0+a1)(b0+b1) - a0b0 - a1b1 into the middle
    let sa = padded_sum(a0, a1, prec);
    let sb = padded_sum(b0, b1, prec);
    let mut mid = vec![Complex::zero(prec); sa.len() + sb.len() - 1];
    poly_mul_into(&sa, &sb, prec, &mut mid);
    for (k, v0) in mid.iter().enumerate() {
        let mut v = v0.clone();
        if k < lo.len() {
            v = v.sub(&lo[k]);
        }
        if k < hi.len() {
            v = v.sub(&hi[k]);
        }
        out[m + k] = out[m + k].add(&v);
    }
}

fn padded_sum(x: &[Complex], y: &[Complex], prec: u32) -> Vec<Complex> {
    let n = x.len().max(y.len());
    (0..n)
        .map(|k| match (x.get(k), y.get(k)) {
            (Some(a), Some(b)) => a.add(b),
            (Some(a), None) => a.clone(),
            (None, Some(b)) => b.clone(),
            (None, None) => Complex::zero(prec),
        })
        .collect()
}

/// S_N(f, zeta)(w): the N-th partial sum of the expansion about `zeta`,
/// evaluated at `w` by Horner.
pub fn partial_sum_eval(
    a: &PowerSeries,
    zeta: &Complex,
    n: usize,
    w: &Complex,
    alg: ShiftAlgorithm,
) -> Result<Complex> {
    let b = shift(a, zeta, n, alg)?;
    Ok(b_eval(b.coeffs(), &w.sub(zeta)))
}

fn b_eval(b: &[Complex], u: &Complex) -> Complex {
    let mut acc = b[b.len() - 1].clone();
    for k in (0..b.len() - 1).rev() {
        acc = acc.mul(u).add(&b[k]);
    }
    acc
}

/// T_N(f)(z) = S_N(f, z)(0) = sum_{n<=N} f^(n)(z)/n! (-z)^n.
pub fn t_eval(a: &PowerSeries, n: usize, z: &Complex, alg: ShiftAlgorithm) -> Result<Complex> {
    partial_sum_eval(a, z, n, &Complex::zero(z.prec()), alg)
}

/// T_N(f)(z) together with the largest intermediate term magnitude
/// max_n |b_n(z) (-z)^n|, the scale against which exactness residuals are
/// measured (the sum can be O(1) after heavy cancellation).
pub fn t_eval_with_scale(a: &PowerSeries, n: usize, z: &Complex, alg: ShiftAlgorithm) -> Result<(Complex, Real)> {
    let b = shift(a, z, n, alg)?;
    let u = z.neg();
    let prec = b.prec();
    let mut acc = Complex::zero(prec);
    let mut pw = Complex::one(prec);
    let mut scale = Real::zero(prec);
    for (k, c) in b.coeffs().iter().enumerate() {
        if k > 0 {
            pw = pw.mul(&u);
        }
        let term = c.mul(&pw);
        scale = scale.max(&term.abs());
        acc = acc.add(&term);
    }
    Ok((acc, scale))
}

/// Derivative of T_N(f) with respect to the centre:
/// T'_N(f)(z) = f^(N+1)(z)/N! (-z)^N = (N+1) b_{N+1}(z) (-z)^N.
pub fn t_derivative_eval(a: &PowerSeries, n: usize, z: &Complex, alg: ShiftAlgorithm) -> Result<Complex> {
    let b = shift(a, z, n + 1, alg)?;
    let prec = b.prec();
    let top = b.coeffs()[n + 1].scale(&Real::from_u64(n as u64 + 1, prec));
    Ok(top.mul(&z.neg().powi(n)))
}

/// Residual of the z*f identity: |T_N(zf)(z) - z b_N(z) (-z)^N| where
/// b_N(z) = f^(N)(z)/N!. Returns (residual, scale) with scale the largest
/// intermediate term of the T evaluation.
pub fn zf_identity_check(f: &PowerSeries, n: usize, z: &Complex, alg: ShiftAlgorithm) -> Result<(Real, Real)> {
    if n > f.horizon() {
        return Err(Error::Horizon { needed: n, horizon: f.horizon() });
    }
    let g = f.mul_by_z();
    let (lhs, scale) = t_eval_with_scale(&g, n, z, alg)?;
    let b = shift(f, z, n, alg)?;
    let rhs = z.mul(&b.coeffs()[n]).mul(&z.neg().powi(n));
    Ok((lhs.sub(&rhs).abs(), scale.max(&rhs.abs())))
}

/// Geometric bound on the partial-sum effect of coefficients beyond the
/// stored horizon, extrapolated from the stored tail: with
/// theta = max |a_k|^(1/k) over the last `tail_window` nonzero indices and
/// rho = |zeta - centre|, the bound is sum_{k>L} (theta rho)^k.
/// A finite-support tail gives 0; theta*rho >= 1 is reported as divergent.
pub fn tail_bound(a: &PowerSeries, zeta: &Complex, n: usize) -> Result<Real> {
    if n > a.horizon() {
        return Err(Error::Horizon { needed: n, horizon: a.horizon() });
    }
    let prec = a.prec().max(zeta.prec());
    // a declared-polynomial (infinite hint) has no coefficients beyond any horizon
    if !a.radius_hint().is_finite() {
        return Ok(Real::zero(prec));
    }
    let window = 32.min(a.len().saturating_sub(1)).max(1);
    let nonzero: Vec<usize> = (1..a.len()).filter(|&k| !a.coeffs()[k].is_zero()).collect();
    let finite_support = match nonzero.last() {
        None => true,
        Some(&k_last) => a.horizon() - k_last >= window,
    };
    if finite_support {
        return Ok(Real::zero(prec));
    }
    let start = nonzero.len().saturating_sub(window);
    let mut theta = Real::zero(prec);
    for &k in &nonzero[start..] {
        theta = theta.max(&a.coeffs()[k].abs().nth_root(k)?);
    }
    let rho = zeta.sub(a.centre()).abs();
    let x = theta.mul(&rho);
    if x >= Real::one(prec) {
        return Err(Error::DivergentTail);
    }
    // sum_{k > L} x^k = x^(L+1) / (1 - x)
    let num = x.powi(a.horizon() + 1);
    Ok(num.div(&Real::one(prec).sub(&x)))
}
