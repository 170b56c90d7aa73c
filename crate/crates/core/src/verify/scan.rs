//! Exact integer scan of the bounds used to rule out weight-changing
//! codewords under a weak isometry of punctured codes.
//!
//! For weight i:
//!
//! * `num(i) = 4(i-3) C(i,2) - i C(i+2,2)`, and the lower bound on
//!   `|D(i,i-3)|` is `L(i) = ceil(num(i) / 18)`;
//! * (b) `3(i-2) C(i,2) < 2 num(i)`, which contradicts the upper bound
//!   `|D(i,i-3)| <= (i-2) C(i,2) / 12`;
//! * (c') `10 i(i-1)(i-3) <= (i+4)(i+3)(i+2)`, the weight-plus-four case,
//!   and its relaxation (c) `10 i(i-1)(i-3) <= 2 i(i+3)(i+2)`.

use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use super::CheckReport;
use crate::error::{input, Result};

pub const SCAN_MAX: i128 = 10_000;

fn c2(i: i128) -> i128 {
    i * (i - 1) / 2
}

fn ceil_div(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    a.div_euclid(b) + i128::from(a.rem_euclid(b) != 0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub i: i64,
    /// `4(i-3) C(i,2) - i C(i+2,2)`
    pub numerator: i128,
    /// `numerator / 18` in lowest terms.
    pub rational: String,
    pub lower_bound: i128,
    pub b_lhs: i128,
    pub b_rhs: i128,
    pub b_holds: bool,
    pub c_prime_lhs: i128,
    pub c_prime_rhs: i128,
    pub c_prime_holds: bool,
    pub c_lhs: i128,
    pub c_rhs: i128,
    pub c_holds: bool,
}

pub fn scan_row(i: i64) -> ScanRow {
    let x = i as i128;
    let num = 4 * (x - 3) * c2(x) - x * c2(x + 2);
    let g = gcd(num.abs(), 18).max(1);
    let rational = if 18 / g == 1 { format!("{}", num / g) } else { format!("{}/{}", num / g, 18 / g) };
    let b_lhs = 3 * (x - 2) * c2(x);
    let c_lhs = 10 * x * (x - 1) * (x - 3);
    let c_prime_rhs = (x + 4) * (x + 3) * (x + 2);
    let c_rhs = 2 * x * (x + 3) * (x + 2);
    ScanRow {
        i,
        numerator: num,
        rational,
        lower_bound: ceil_div(num, 18),
        b_lhs,
        b_rhs: 2 * num,
        b_holds: b_lhs < 2 * num,
        c_prime_lhs: c_lhs,
        c_prime_rhs,
        c_prime_holds: c_lhs <= c_prime_rhs,
        c_lhs,
        c_rhs,
        c_holds: c_lhs <= c_rhs,
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Maximal runs of consecutive `i` where `pred` holds.
fn ranges(rows: &[ScanRow], pred: impl Fn(&ScanRow) -> bool) -> Vec<[i64; 2]> {
    let mut out: Vec<[i64; 2]> = Vec::new();
    for r in rows.iter().filter(|r| pred(r)) {
        match out.last_mut() {
            Some(last) if last[1] + 1 == r.i => last[1] = r.i,
            _ => out.push([r.i, r.i]),
        }
    }
    out
}

/// Evaluates every row in `i_min..=i_max` and checks the claims that the
/// argument relies on, for the weights inside the range:
/// `L(6) >= 1`, `L(7) >= 1`, `L(8) = 12`, `L(9) = 21`, (b) for every
/// `i >= 10`, and the failure of (c) for every `i >= 6`.
pub fn critical_scan(i_min: i64, i_max: i64) -> Result<CheckReport> {
    let start = Instant::now();
    if !(6 <= i_min && i_min <= i_max && i_max as i128 <= SCAN_MAX) {
        return input(format!("need 6 <= imin <= imax <= {SCAN_MAX}, got {i_min}..={i_max}"));
    }
    let rows: Vec<ScanRow> = (i_min..=i_max).map(scan_row).collect();
    let mut report = CheckReport::new("critical_scan").param("imin", i_min).param("imax", i_max);
    for r in &rows {
        let expected_l = match r.i {
            8 => Some(12),
            9 => Some(21),
            _ => None,
        };
        if let Some(l) = expected_l {
            if r.lower_bound != l {
                report.fail_relation(format!("L({}) = {}, expected {l}", r.i, r.lower_bound));
            }
        }
        if (r.i == 6 || r.i == 7) && r.lower_bound < 1 {
            report.fail_relation(format!("L({}) = {} < 1", r.i, r.lower_bound));
        }
        if r.i >= 10 && !r.b_holds {
            report.fail_relation(format!("(b) fails at i = {}: {} >= {}", r.i, r.b_lhs, r.b_rhs));
        }
        if r.c_holds {
            report.fail_relation(format!("(c) holds at i = {}: {} <= {}", r.i, r.c_lhs, r.c_rhs));
        }
    }
    let small: Vec<&ScanRow> = rows.iter().filter(|r| r.i <= 12).collect();
    report.bounds = Some(json!({
        "rows": small,
        "lower_bounds": rows.iter().take(4).map(|r| json!({"i": r.i, "L": r.lower_bound, "rational": r.rational})).collect::<Vec<_>>(),
        "b_holds": ranges(&rows, |r| r.b_holds),
        "c_prime_holds": ranges(&rows, |r| r.c_prime_holds),
        "c_holds": ranges(&rows, |r| r.c_holds),
    }));
    report.counts = Some(json!({ "rows": rows.len() }));
    Ok(report.timed(start))
}
