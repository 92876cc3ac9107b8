//! Exact signed sums of weights given as short decimals.
//!
//! Survey weights arrive as decimal strings (`0.9`, `0.7`). Subtracting their
//! binary approximations leaves representation noise (`0.9 - 0.7` is
//! `0.20000000000000007` in `f64`), which matters when classifying on a sign
//! or reporting a deviation. Each operand is reinterpreted as its shortest
//! round-tripping decimal, the sum is formed exactly in integers, and the
//! result is rounded once. Operands whose decimal exponents are too far apart
//! fall back to plain floating point.

const MAX_SHIFT: i32 = 20;

fn decompose(x: f64) -> Option<(i128, i32)> {
    if !x.is_finite() {
        return None;
    }
    let repr = format!("{x:e}");
    let (mantissa, exp) = repr.split_once('e')?;
    let exp: i32 = exp.parse().ok()?;
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    let mut value: i128 = 0;
    for c in int_part.chars().chain(frac_part.chars()) {
        value = value * 10 + c.to_digit(10)? as i128;
    }
    if negative {
        value = -value;
    }
    Some((value, exp - frac_part.len() as i32))
}

/// Returns `Σ coef_i · x_i`, exact on the decimal reading of each `x_i`.
pub(crate) fn signed_sum(terms: &[(i8, f64)]) -> f64 {
    exact_sum(terms).unwrap_or_else(|| terms.iter().map(|&(c, x)| f64::from(c) * x).sum())
}

fn exact_sum(terms: &[(i8, f64)]) -> Option<f64> {
    let parts = terms
        .iter()
        .map(|&(c, x)| decompose(x).map(|(m, e)| (c, m, e)))
        .collect::<Option<Vec<_>>>()?;
    let nonzero = parts.iter().filter(|p| p.1 != 0);
    let min_exp = nonzero.clone().map(|p| p.2).min().unwrap_or(0);
    let max_exp = nonzero.map(|p| p.2).max().unwrap_or(0);
    if max_exp - min_exp > MAX_SHIFT {
        return None;
    }
    let mut total: i128 = 0;
    for (c, m, e) in parts {
        if m == 0 {
            continue;
        }
        let scaled = m.checked_mul(10i128.checked_pow((e - min_exp) as u32)?)?;
        total = total.checked_add(scaled.checked_mul(i128::from(c))?)?;
    }
    format!("{total}e{min_exp}").parse().ok()
}
