//! The two counting inequalities behind the random construction and the
//! failure-probability bound they control:
//!
//! ```text
//! (1)  (n²/(n²-1))^d > 4n²d(d-1)
//! (2)  (n/(n-1))^k  > 4(p+1)nd²
//! P(fail) < 2d(d-1)n²((n²-1)/n²)^d + 2(p+1)d²n((n-1)/n)^k
//! ```
//!
//! Verdicts are computed with logarithms; when the two sides are within a
//! relative `1e-9` of each other they are re-decided with exact integers.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

const GUARD: f64 = 1e-9;
/// Largest exponent for which the exact comparison is attempted.
pub const EXACT_LIMIT: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvaluationMode {
    LogDomain,
    ExactRational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub p: u64,
    pub n: u64,
    pub d: u64,
    pub k: u64,
    /// `None` when `n = 1`, where the inequalities are not defined.
    pub ineq1_holds: Option<bool>,
    pub ineq2_holds: Option<bool>,
    /// Natural-log difference of the two sides of each inequality.
    pub ineq1_log_margin: Option<f64>,
    pub ineq2_log_margin: Option<f64>,
    /// May be `inf`; see `failure_log10` for the magnitude.
    pub failure_prob_upper_bound: f64,
    pub failure_log10: f64,
    pub evaluation_mode: EvaluationMode,
}

impl BoundReport {
    pub fn both_hold(&self) -> bool {
        self.ineq1_holds == Some(true) && self.ineq2_holds == Some(true)
    }
}

fn ln(x: u64) -> f64 {
    (x as f64).ln()
}

/// `(lhs - rhs)` of (1) and (2) in natural logs. Requires `n ≥ 2`.
pub fn log_margins(p: u64, n: u64, d: u64, k: u64) -> (f64, f64) {
    let nf = n as f64;
    let n2 = nf * nf;
    let l1 = d as f64 * (n2 / (n2 - 1.0)).ln();
    let r1 = (4.0f64).ln() + 2.0 * nf.ln() + ln(d) + ((d as f64) - 1.0).ln();
    let l2 = k as f64 * (nf / (nf - 1.0)).ln();
    let r2 = (4.0f64).ln() + ln(p + 1) + nf.ln() + 2.0 * ln(d);
    (l1 - r1, l2 - r2)
}

fn within_guard(margin: f64, scale: f64) -> bool {
    margin.abs() <= GUARD * scale.abs().max(1.0)
}

/// Exact verdicts of (1) and (2), or `None` when `d` or `k` exceed
/// [`EXACT_LIMIT`]. Requires `n ≥ 2`.
pub fn exact_verdicts(p: u64, n: u64, d: u64, k: u64) -> Option<(bool, bool)> {
    if d > EXACT_LIMIT || k > EXACT_LIMIT {
        return None;
    }
    Some((exact1(n, d), exact2(p, n, d, k)))
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

/// `n^{2d} > 4n²d(d-1)(n²-1)^d`.
fn exact1(n: u64, d: u64) -> bool {
    let n2 = big(n * n);
    let lhs = n2.pow(d as u32);
    let rhs = big(4) * &n2 * big(d) * big(d.saturating_sub(1)) * (n2 - BigUint::one()).pow(d as u32);
    lhs > rhs
}

/// `n^k > 4(p+1)nd²(n-1)^k`.
fn exact2(p: u64, n: u64, d: u64, k: u64) -> bool {
    let lhs = big(n).pow(k as u32);
    let rhs = big(4) * big(p + 1) * big(n) * big(d) * big(d) * big(n - 1).pow(k as u32);
    lhs > rhs
}

fn log_sum_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// Evaluates both inequalities and the failure bound for a base of size
/// `d` whose atom images have at least `k` points per row.
pub fn eval_bounds(p: u64, n: u64, d: u64, k: u64) -> BoundReport {
    let nf = n as f64;
    let (t1, t2) = if n == 1 {
        (f64::NEG_INFINITY, f64::NEG_INFINITY)
    } else {
        let n2 = nf * nf;
        let t1 = if d < 2 {
            f64::NEG_INFINITY
        } else {
            2f64.ln() + ln(d) + ((d - 1) as f64).ln() + 2.0 * nf.ln() + d as f64 * ((n2 - 1.0) / n2).ln()
        };
        let t2 = 2f64.ln() + ln(p + 1) + 2.0 * ln(d) + nf.ln() + k as f64 * ((nf - 1.0) / nf).ln();
        (t1, t2)
    };
    let log_bound = log_sum_exp(t1, t2);
    let mut report = BoundReport {
        p,
        n,
        d,
        k,
        ineq1_holds: None,
        ineq2_holds: None,
        ineq1_log_margin: None,
        ineq2_log_margin: None,
        failure_prob_upper_bound: log_bound.exp(),
        failure_log10: log_bound / std::f64::consts::LN_10,
        evaluation_mode: EvaluationMode::LogDomain,
    };
    if n < 2 {
        return report;
    }
    let (m1, m2) = log_margins(p, n, d, k);
    let mut v1 = m1 > 0.0;
    let mut v2 = m2 > 0.0;
    let close1 = within_guard(m1, d as f64);
    let close2 = within_guard(m2, k as f64);
    if close1 || close2 {
        if let Some((e1, e2)) = exact_verdicts(p, n, d, k) {
            v1 = e1;
            v2 = e2;
            report.evaluation_mode = EvaluationMode::ExactRational;
        }
    }
    report.ineq1_holds = Some(v1);
    report.ineq2_holds = Some(v2);
    report.ineq1_log_margin = Some(m1);
    report.ineq2_log_margin = Some(m2);
    report
}

/// Thresholds from the two sufficiency arguments.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Thresholds {
    pub p: u64,
    pub n: u64,
    /// `log_p(16n²)`, `2 log_{p-1}(24n)`, `⅓ log_{p-1}(4n(p+1))`.
    pub m_thresholds: [f64; 3],
    /// Least integer `m` above all three.
    pub m_guaranteed: u64,
    /// `16n²` and `1 + (48n)²`: above both, `d = p²`, `k = p-1` suffice.
    pub p_thresholds: [u64; 2],
}

pub fn sufficiency_thresholds(p: u64, n: u64) -> Thresholds {
    let (pf, nf) = (p as f64, n as f64);
    let m = [
        (16.0 * nf * nf).ln() / pf.ln(),
        2.0 * (24.0 * nf).ln() / (pf - 1.0).ln(),
        (4.0 * nf * (pf + 1.0)).ln() / (3.0 * (pf - 1.0).ln()),
    ];
    let top = m.iter().copied().fold(f64::MIN, f64::max);
    Thresholds {
        p,
        n,
        m_thresholds: m,
        m_guaranteed: (top.floor() as u64).saturating_add(1),
        p_thresholds: [16 * n * n, 1 + (48 * n) * (48 * n)],
    }
}

/// Base size `p^{2m}` and row degree `(p-1)^m` of `θ^m` for the affine
/// plane over `GF(p)`. `None` on overflow.
pub fn power_parameters(p: u64, m: u32) -> Option<(u64, u64)> {
    Some((p.checked_pow(2 * m)?, (p - 1).checked_pow(m)?))
}

/// Failure bound as an exact fraction of big integers, for cross-checks.
pub fn exact_failure_bound(p: u64, n: u64, d: u64, k: u64) -> num_rational::BigRational {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    let b = |x: u64| BigInt::from(x);
    let n2 = n * n;
    let r1 = BigRational::new(b(n2 - 1), b(n2));
    let r2 = BigRational::new(b(n - 1), b(n));
    let t1 = BigRational::from_integer(b(2) * b(d) * b(d - 1) * b(n2)) * num_traits::pow(r1, d as usize);
    let t2 = BigRational::from_integer(b(2) * b(p + 1) * b(d) * b(d) * b(n)) * num_traits::pow(r2, k as usize);
    t1 + t2
}

/// `f64` value of a big rational (lossy; for comparisons in tests and reports).
pub fn rational_to_f64(r: &num_rational::BigRational) -> f64 {
    let (num, den) = (r.numer(), r.denom());
    let shift = den.bits() as i64 - 60;
    let scale = |x: &num_bigint::BigInt, s: i64| -> f64 {
        if s > 0 {
            (x >> s as usize).to_f64().unwrap_or(f64::INFINITY)
        } else {
            x.to_f64().unwrap_or(f64::INFINITY)
        }
    };
    let s = shift.max(0);
    scale(num, s) / scale(den, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p3_n2_m1() {
        let r = eval_bounds(3, 2, 9, 2);
        assert_eq!(r.ineq1_holds, Some(false));
        assert_eq!(r.ineq2_holds, Some(false));
        assert!(r.failure_prob_upper_bound > 1.0);
        // (4/3)^9 ≈ 13.3 against 4·4·9·8 = 1152
        assert!(((4.0f64 / 3.0).powi(9) - 13.32).abs() < 0.01);
        let exact = rational_to_f64(&exact_failure_bound(3, 2, 9, 2));
        assert!((exact - r.failure_prob_upper_bound).abs() / exact < 1e-12);
    }

    #[test]
    fn exact_bound_value_at_3_2_9_2() {
        // 2·9·8·4·(3/4)^9 + 2·4·81·2·(1/2)^2 = 576·19683/262144 + 324
        let e = exact_failure_bound(3, 2, 9, 2);
        let expected = num_rational::BigRational::new(
            num_bigint::BigInt::from(576) * 19683 + num_bigint::BigInt::from(324) * 262144,
            num_bigint::BigInt::from(262144),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn minimal_m_for_p3_n2() {
        let m = (1..20)
            .find(|&m| {
                let (d, k) = power_parameters(3, m).unwrap();
                let (e1, e2) = exact_verdicts(3, 2, d, k).unwrap();
                e1 && e2
            })
            .unwrap();
        assert_eq!(m, 6);
        let (d, k) = power_parameters(3, 6).unwrap();
        assert!(eval_bounds(3, 2, d, k).both_hold());
    }

    #[test]
    fn thresholds_p3_n2() {
        let t = sufficiency_thresholds(3, 2);
        assert!((t.m_thresholds[0] - 64f64.log(3.0)).abs() < 1e-12);
        assert!((t.m_thresholds[1] - 2.0 * 48f64.log2()).abs() < 1e-12);
        assert!((t.m_thresholds[2] - 32f64.log2() / 3.0).abs() < 1e-12);
        assert!((t.m_thresholds[0] - 3.79).abs() < 0.01);
        assert!((t.m_thresholds[1] - 11.17).abs() < 0.01);
        assert!((t.m_thresholds[2] - 1.67).abs() < 0.01);
        assert_eq!(t.m_guaranteed, 12);
        assert_eq!(t.p_thresholds, [64, 9217]);
    }

    #[test]
    fn n1_not_applicable() {
        let r = eval_bounds(3, 1, 9, 2);
        assert_eq!(r.ineq1_holds, None);
        assert_eq!(r.failure_prob_upper_bound, 0.0);
    }
}
