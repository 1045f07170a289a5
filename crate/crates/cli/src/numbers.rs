//! Numeric arguments. Besides plain floats, multiples of pi are accepted in
//! the forms `pi`, `2pi`, `3*pi/4`, `-pi/2` or with `π`.

use std::f64::consts::PI;

pub fn parse_number(text: &str) -> Result<f64, String> {
    let s = text.trim();
    let value = match s.parse::<f64>() {
        Ok(v) => v,
        Err(_) => parse_pi_multiple(s).ok_or_else(|| format!("`{text}` is not a number"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("`{text}` is not finite"))
    }
}

fn parse_pi_multiple(s: &str) -> Option<f64> {
    let compact: String = s
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_lowercase();
    let compact = compact.replace('π', "pi");
    let (sign, body) = match compact.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, compact.strip_prefix('+').unwrap_or(&compact)),
    };
    let (numerator, denominator) = match body.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().ok()?),
        None => (body, 1.0),
    };
    let coefficient = numerator.strip_suffix("pi")?;
    let coefficient = coefficient.strip_suffix('*').unwrap_or(coefficient);
    let coefficient = if coefficient.is_empty() {
        1.0
    } else {
        coefficient.parse::<f64>().ok()?
    };
    Some(sign * coefficient * PI / denominator)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_and_pi_forms() {
        assert_eq!(parse_number("0.25").unwrap(), 0.25);
        assert_eq!(parse_number("-1e-3").unwrap(), -1e-3);
        assert_eq!(parse_number("pi").unwrap(), PI);
        assert_eq!(parse_number("2pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_number("3*pi/4").unwrap(), 0.75 * PI);
        assert_eq!(parse_number("-π/2").unwrap(), -0.5 * PI);
        assert_eq!(parse_number(" PI / 8 ").unwrap(), PI / 8.0);
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "pie", "2pi/x", "nan", "inf", "pi/0", "--pi"] {
            assert!(parse_number(bad).is_err(), "{bad}");
        }
    }
}
