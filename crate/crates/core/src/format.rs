// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Decimal rendering for exported numbers.

/// Renders `x` with `digits` significant digits, trailing zeros trimmed.
///
/// Plain notation is used for exponents in `-5..digits`; scientific otherwise.
pub fn sig(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -5 || exp >= digits as i32 {
        return format!("{}e{}", trim_zeros(mantissa), exp);
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

/// Twelve significant digits, the precision used for derived results.
pub fn sig12(x: f64) -> String {
    sig(x, 12)
}

/// Renders an optional value, writing `NA` for missing entries.
pub fn sig12_or_na(x: Option<f64>) -> String {
    x.map(sig12).unwrap_or_else(|| NA.to_string())
}

/// Marker written for undefined values.
pub const NA: &str = "NA";

/// Shortest representation that parses back to the same bits, padded with
/// zeros to at least nine significant digits.
pub fn roundtrip(x: f64) -> String {
    const MIN_DIGITS: usize = 9;
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0.00000000"
        } else {
            "0.00000000"
        }
        .to_string();
    }
    let sci = format!("{:e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let mut digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    while digits.len() < MIN_DIGITS {
        digits.push('0');
    }
    if !(-7..=20).contains(&exp) {
        return format!("{sign}{}.{}e{exp}", &digits[..1], &digits[1..]);
    }
    if exp < 0 {
        let zeros = "0".repeat((-exp - 1) as usize);
        format!("{sign}0.{zeros}{digits}")
    } else {
        let int_len = exp as usize + 1;
        while digits.len() < int_len {
            digits.push('0');
        }
        let (int, frac) = digits.split_at(int_len);
        if frac.is_empty() {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sig_examples() {
        assert_eq!(sig12(0.5), "0.5");
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(-2.0), "-2");
        assert_eq!(sig12(1234.5), "1234.5");
        assert_eq!(sig12(1e-9), "1e-9");
        assert_eq!(sig12(2.5e13), "2.5e13");
        assert_eq!(sig12_or_na(None), "NA");
    }

    #[test]
    fn roundtrip_examples() {
        assert_eq!(roundtrip(0.5), "0.500000000");
        assert_eq!(roundtrip(3.0), "3.00000000");
        assert_eq!(roundtrip(0.1 + 0.2), "0.30000000000000004");
        assert_eq!(roundtrip(0.00123), "0.00123000000");
        assert_eq!(roundtrip(123456789012.0), "123456789012");
    }

    proptest! {
        #[test]
        fn roundtrip_is_bit_exact(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let s = roundtrip(x);
            let back: f64 = s.parse().unwrap();
            prop_assert_eq!(back.to_bits(), x.to_bits());
            let significant = s
                .split('e')
                .next()
                .unwrap()
                .chars()
                .filter(|c| c.is_ascii_digit())
                .collect::<String>();
            prop_assert!(significant.trim_start_matches('0').len() >= 9 || x == 0.0);
        }

        #[test]
        fn sig12_within_relative_precision(x in -1e15f64..1e15) {
            let back: f64 = sig12(x).parse().unwrap();
            prop_assert!((back - x).abs() <= 1e-11 * x.abs().max(1e-300));
        }
    }
}
