//! Exact decimal conversion for scalars.
//!
//! A binary float `m * 2^s` always has a finite decimal expansion
//! (`m * 5^-s` shifted when `s < 0`), so serialization emits the exact
//! decimal digits and parsing performs one correctly-rounded (round to
//! nearest, ties to even) conversion back. The round trip
//! `parse(to_decimal_string(x))` is bit-identical at the stored precision.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Exact decimal representation of `x` (plain notation, no exponent).
pub fn to_decimal_string(x: &Real) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let (digits, k, neg) = exact_digits(x);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if k == 0 {
        out.push_str(&digits);
        return out;
    }
    if digits.len() > k {
        let split = digits.len() - k;
        out.push_str(&digits[..split]);
        let frac = digits[split..].trim_end_matches('0');
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
    } else {
        let frac_full = format!("{}{}", "0".repeat(k - digits.len()), digits);
        let frac = frac_full.trim_end_matches('0');
        out.push_str("0.");
        out.push_str(if frac.is_empty() { "0" } else { frac });
    }
    out
}

/// Scientific notation with `sig` significant digits (for reports; lossy).
pub fn to_sci_string(x: &Real, sig: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let (digits, k, neg) = exact_digits(x);
    let digits = digits.trim_start_matches('0').to_string();
    let mut dec_exp = digits.len() as i64 - k as i64 - 1;
    let mut d: Vec<u8> = digits.bytes().collect();
    if d.len() > sig {
        let round_up = d[sig] >= b'5';
        d.truncate(sig);
        if round_up {
            let mut i = d.len();
            loop {
                if i == 0 {
                    d.insert(0, b'1');
                    dec_exp += 1;
                    break;
                }
                i -= 1;
                if d[i] == b'9' {
                    d[i] = b'0';
                } else {
                    d[i] += 1;
                    break;
                }
            }
        }
    }
    let mut mant: String = d.iter().map(|&b| b as char).collect();
    while mant.len() > 1 && mant.ends_with('0') {
        mant.pop();
    }
    let head = &mant[..1];
    let tail = &mant[1..];
    let sign = if neg { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{dec_exp}")
    } else {
        format!("{sign}{head}.{tail}e{dec_exp}")
    }
}

/// Returns (decimal digits of |x| * 10^k, k, negative) with x = digits * 10^-k.
fn exact_digits(x: &Real) -> (String, usize, bool) {
    let (words, _, sign, e, _) = x.bigfloat().as_raw_parts().expect("finite value");
    let mut bytes = Vec::with_capacity(words.len() * 8);
    for w in words {
        bytes.extend_from_slice(&w.to_le_bytes());
    }
    let m = BigUint::from_bytes_le(&bytes);
    let mb = words.len() as i64 * 64;
    let s = e as i64 - mb;
    let neg = sign == astro_float::Sign::Neg;
    if s >= 0 {
        let n = m << (s as usize);
        (n.to_str_radix(10), 0, neg)
    } else {
        let k = (-s) as usize;
        let d = m * BigUint::from(5u32).pow(k as u32);
        (d.to_str_radix(10), k, neg)
    }
}

/// Parse a decimal string (plain or scientific) into a `Real` at precision
/// `prec`, correctly rounded to nearest/even.
pub fn parse_real(s: &str, prec: u32) -> Result<Real> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    let (neg, rest) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mant, exp10) = match rest.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = rest[i + 1..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in '{s}'")))?;
            (&rest[..i], e)
        }
        None => (rest, 0),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("no digits in '{s}'")));
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("invalid digits in '{s}'")));
    }
    let digits: String = format!("{int_part}{frac_part}");
    let n = BigUint::parse_bytes(digits.as_bytes(), 10)
        .ok_or_else(|| Error::Parse(format!("invalid digits in '{s}'")))?;
    let e10 = exp10 - frac_part.len() as i64;
    if n == BigUint::from(0u32) {
        return Ok(Real::zero(prec));
    }
    // value = n * 10^e10 = (n * 2^a5^a) / (2^b5^b): reduce to rational A/B
    let (num, den) = if e10 >= 0 {
        (n * BigUint::from(10u32).pow(e10 as u32), BigUint::from(1u32))
    } else {
        (n, BigUint::from(10u32).pow((-e10) as u32))
    };
    round_rational(num, den, neg, prec)
}

/// Round the positive rational num/den to `prec` bits, nearest/even.
fn round_rational(num: BigUint, den: BigUint, neg: bool, prec: u32) -> Result<Real> {
    let p = prec as i64;
    let diff = num.bits() as i64 - den.bits() as i64;
    let shift = p + 2 - diff;
    let (num_s, den_s) = if shift >= 0 {
        (num << (shift as usize), den)
    } else {
        (num, den << ((-shift) as usize))
    };
    let q = &num_s / &den_s;
    let r = num_s - &q * &den_s;
    // q has at least p+2 bits; drop the low ones with RNE
    let drop = q.bits() as i64 - p;
    debug_assert!(drop >= 1);
    let half = BigUint::from(1u32) << ((drop - 1) as usize);
    let low = &q & ((BigUint::from(1u32) << (drop as usize)) - 1u32);
    let mut hi = &q >> (drop as usize);
    let round_up = match low.cmp(&half) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Equal => r != BigUint::from(0u32) || (&hi & BigUint::from(1u32)) == BigUint::from(1u32),
        std::cmp::Ordering::Less => false,
    };
    let mut t = drop - shift; // value = hi * 2^t
    if round_up {
        hi += 1u32;
        if hi.bits() as i64 > p {
            hi >>= 1;
            t += 1;
        }
    }
    let digits = hi.to_u64_digits();
    let total_bits = digits.len() as i64 * 64;
    let e = t + total_bits;
    if e > i32::MAX as i64 || e < i32::MIN as i64 {
        return Err(Error::Parse("decimal exponent out of range".into()));
    }
    let sign = if neg { astro_float::Sign::Neg } else { astro_float::Sign::Pos };
    let mut bf = astro_float::BigFloat::from_words(&digits, sign, e as astro_float::Exponent);
    bf.set_precision(prec as usize, astro_float::RoundingMode::ToEven)
        .map_err(|e| Error::Parse(format!("precision assignment failed: {e:?}")))?;
    Ok(Real::from_bigfloat(bf, prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rt(s: &str, prec: u32) -> Real {
        parse_real(s, prec).unwrap()
    }

    #[test]
    fn simple_values() {
        assert_eq!(to_decimal_string(&Real::from_f64(2.0, 256)), "2");
        assert_eq!(to_decimal_string(&Real::from_f64(0.5, 256)), "0.5");
        assert_eq!(to_decimal_string(&Real::from_f64(-0.125, 64)), "-0.125");
        assert_eq!(to_decimal_string(&Real::zero(128)), "0");
        assert_eq!(to_decimal_string(&Real::from_f64(25.75, 256)), "25.75");
    }

    #[test]
    fn parse_matches_from_f64_on_dyadics() {
        for (s, v) in [("2", 2.0), ("0.5", 0.5), ("-3.25", -3.25), ("1e3", 1000.0), ("0.078125e2", 7.8125)] {
            let parsed = rt(s, 256);
            let direct = Real::from_f64(v, 256);
            assert!(parsed.eq_bits(&direct), "{s}: {parsed} vs {direct}");
        }
        // non-dyadic decimals differ from the rounded f64 literal but are close
        let x = rt("2.5e-2", 256);
        assert!((x.to_f64() - 0.025).abs() < 1e-17);
    }

    #[test]
    fn roundtrip_is_bit_identical() {
        let vals = [
            Real::from_f64(0.6931471805599453, 256),
            Real::from_f64(1.0 / 3.0, 192),
            rt("0.333333333333333333333333333333333333333333", 256),
            Real::from_f64(2.0, 128).powi(200),
            Real::one(256).div(&Real::from_f64(2.0, 256).powi(269)),
            rt("-1.234567890123456789e-40", 320),
        ];
        for v in vals {
            let s = to_decimal_string(&v);
            let back = rt(&s, v.prec());
            assert!(back.eq_bits(&v), "roundtrip failed for {s}");
        }
    }

    #[test]
    fn rounding_is_nearest() {
        // 1/3 at 8 bits: 0.0101010101.. -> mantissa 0x55/0x100-ish; compare against f64 rounded
        let third = rt("0.3333333333333333333333333333", 53);
        assert!((third.to_f64() - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn sci_string_formatting() {
        assert_eq!(to_sci_string(&Real::from_f64(1234.5, 256), 5), "1.2345e3");
        assert_eq!(to_sci_string(&Real::from_f64(-0.00015, 256), 2), "-1.5e-4");
        assert_eq!(to_sci_string(&Real::zero(64), 5), "0");
        // rounding with carry
        assert_eq!(to_sci_string(&Real::from_f64(999.96, 256), 4), "1e3");
    }

    #[test]
    fn bad_inputs_rejected() {
        assert!(parse_real("", 64).is_err());
        assert!(parse_real("abc", 64).is_err());
        assert!(parse_real("1.2.3", 64).is_err());
        assert!(parse_real("1e", 64).is_err());
    }
}
