//! Log-domain arithmetic shared by the closed forms.

use std::f64::consts::LN_2;

/// ln(sum exp(x_i)); -inf for an empty slice or all -inf inputs.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    max + xs.iter().map(|&x| (x - max).exp()).sum::<f64>().ln()
}

/// Real number stored as sign and ln|value|.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct LogSigned {
    pub sign: f64,
    pub ln_abs: f64,
}

impl LogSigned {
    pub const ZERO: LogSigned = LogSigned { sign: 0.0, ln_abs: f64::NEG_INFINITY };
    pub const ONE: LogSigned = LogSigned { sign: 1.0, ln_abs: 0.0 };

    pub fn new(sign: f64, ln_abs: f64) -> Self {
        if sign == 0.0 || ln_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogSigned { sign: sign.signum(), ln_abs }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        Self::new(x.signum() * (x != 0.0) as i32 as f64, x.abs().ln())
    }

    pub fn value(&self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.ln_abs.exp()
        }
    }

    pub fn mul(self, other: LogSigned) -> LogSigned {
        Self::new(self.sign * other.sign, self.ln_abs + other.ln_abs)
    }

    pub fn powi(self, k: u64) -> LogSigned {
        if k == 0 {
            return Self::ONE;
        }
        let sign = if k % 2 == 0 { self.sign.abs() } else { self.sign };
        Self::new(sign, self.ln_abs * k as f64)
    }

    /// Sum of signed log-domain terms.
    pub fn sum(terms: &[LogSigned]) -> LogSigned {
        let max = terms
            .iter()
            .filter(|t| t.sign != 0.0)
            .map(|t| t.ln_abs)
            .fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        let s: f64 = terms
            .iter()
            .filter(|t| t.sign != 0.0)
            .map(|t| t.sign * (t.ln_abs - max).exp())
            .sum();
        Self::new(s.signum(), max + s.abs().ln())
    }
}

/// ln((1 + e^{-x}) / 2) for x >= 0, including x = +inf.
pub fn ln_half_one_plus_exp_neg(x: f64) -> f64 {
    (-x).exp().ln_1p() - LN_2
}

/// ln((1 - e^{-x}) / 2) for x >= 0; -inf at x = 0.
pub fn ln_half_one_minus_exp_neg(x: f64) -> f64 {
    if x == 0.0 {
        f64::NEG_INFINITY
    } else {
        (-(-x).exp_m1()).ln() - LN_2
    }
}

/// k * n with the convention 0 * inf = 0 (a zero count or zero coupling contributes nothing).
pub fn scaled(k: f64, n: f64) -> f64 {
    if k == 0.0 || n == 0.0 {
        0.0
    } else {
        k * n
    }
}

/// Shannon entropy in nats with 0 ln 0 = 0.
pub fn shannon(p: &[f64]) -> f64 {
    -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum::<f64>()
}

/// Format like C's `%.{sig}g`.
pub fn format_g(x: f64, sig: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if exp < -4 || exp >= sig as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
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

    #[test]
    fn lse_handles_extremes() {
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        assert!((log_sum_exp(&[1000.0, 1000.0]) - (1000.0 + LN_2)).abs() < 1e-12);
        assert_eq!(log_sum_exp(&[f64::NEG_INFINITY, 0.0]), 0.0);
    }

    #[test]
    fn signed_sum_cancels() {
        let a = LogSigned::from_f64(3.0);
        let b = LogSigned::from_f64(-1.0);
        assert!((LogSigned::sum(&[a, b]).value() - 2.0).abs() < 1e-15);
        assert_eq!(LogSigned::sum(&[a, LogSigned::from_f64(-3.0)]).sign, 0.0);
        assert_eq!(b.powi(2).value(), 1.0);
        assert_eq!(LogSigned::from_f64(0.0), LogSigned::ZERO);
    }

    #[test]
    fn half_measures() {
        assert!((ln_half_one_plus_exp_neg(0.0)).abs() < 1e-16);
        assert!((ln_half_one_plus_exp_neg(f64::INFINITY) + LN_2).abs() < 1e-16);
        assert_eq!(ln_half_one_minus_exp_neg(0.0), f64::NEG_INFINITY);
        assert!((ln_half_one_minus_exp_neg(1e-300).exp() - 5e-301).abs() < 1e-310);
    }

    #[test]
    fn g_format() {
        assert_eq!(format_g(2.772588722239781, 12), "2.77258872224");
        assert_eq!(format_g(0.5, 12), "0.5");
        assert_eq!(format_g(1e-7, 12), "1e-07");
        assert_eq!(format_g(123456789012345.0, 12), "1.23456789012e+14");
        assert_eq!(format_g(100.0, 12), "100");
        assert_eq!(format_g(0.0, 12), "0");
        assert_eq!(format_g(-0.25, 3), "-0.25");
    }
}
