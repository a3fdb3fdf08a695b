//! Exact parsing of fractions given on the command line.

use num_rational::Ratio;

/// Parses `"1/10"`, `"0.1"` or `"1"`-style input into an exact ratio. Decimal
/// input is converted digit by digit and never goes through floating point.
pub fn parse_fraction(s: &str) -> Result<Ratio<u64>, String> {
    let s = s.trim();
    let bad = || format!("{s:?} is not a fraction (expected N/D or a decimal such as 0.1)");
    if let Some((n, d)) = s.split_once('/') {
        let n: u64 = digits(n).ok_or_else(bad)?;
        let d: u64 = digits(d).ok_or_else(bad)?;
        if d == 0 {
            return Err(format!("{s:?} has a zero denominator"));
        }
        return Ok(Ratio::new(n, d));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let int = if int.is_empty() { 0 } else { digits(int).ok_or_else(bad)? };
    let frac_value = if frac.is_empty() { 0 } else { digits(frac).ok_or_else(bad)? };
    let scale = u32::try_from(frac.len())
        .ok()
        .and_then(|k| 10u64.checked_pow(k))
        .ok_or_else(|| format!("{s:?} has too many decimal places"))?;
    let numer = int
        .checked_mul(scale)
        .and_then(|v| v.checked_add(frac_value))
        .ok_or_else(|| format!("{s:?} is too large"))?;
    Ok(Ratio::new(numer, scale))
}

fn digits(s: &str) -> Option<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}
