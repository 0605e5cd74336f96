use std::str::FromStr;

use cotzeta::{QuadElem, Rational, UniMat};
use num_bigint::BigInt;
use num_traits::Signed;

/// Parses `sqrt:D`, `quad:P,Q,R,D` (meaning `(P + Q sqrt D) / R`) or `golden`.
pub fn parse_alpha(text: &str) -> Result<QuadElem, String> {
    let text = text.trim();
    let value = if text == "golden" {
        QuadElem::make(1.into(), 1.into(), 2.into(), 5.into()).map_err(|e| e.to_string())?
    } else if let Some(d) = text.strip_prefix("sqrt:") {
        let d = parse_int(d)?;
        if !d.is_positive() {
            return Err(format!("sqrt:{d} needs a positive radicand"));
        }
        QuadElem::sqrt(d).map_err(|e| e.to_string())?
    } else if let Some(rest) = text.strip_prefix("quad:") {
        let parts = parse_ints(rest)?;
        let [p, q, r, d]: [BigInt; 4] = parts
            .try_into()
            .map_err(|_| format!("quad:{rest} needs exactly four integers P,Q,R,D"))?;
        if !d.is_positive() {
            return Err(format!("quad:{rest} needs D > 0"));
        }
        QuadElem::make(p, q, r, d).map_err(|e| e.to_string())?
    } else {
        return Err(format!(
            "cannot read alpha '{text}'; expected sqrt:D, quad:P,Q,R,D or golden"
        ));
    };
    if value.is_rational() {
        return Err(format!("alpha = {value} is rational"));
    }
    Ok(value)
}

/// Parses `a,b,c,d` into a determinant-one matrix with `c > 0`.
pub fn parse_matrix(text: &str) -> Result<UniMat, String> {
    let [a, b, c, d]: [BigInt; 4] = parse_ints(text)?
        .try_into()
        .map_err(|_| format!("matrix '{text}' needs exactly four integers a,b,c,d"))?;
    let v = UniMat::new(a, b, c, d).map_err(|e| e.to_string())?;
    if !v.c().is_positive() {
        return Err(format!("matrix {v} needs c > 0"));
    }
    Ok(v)
}

/// Comma-separated non-negative integers; the empty string is an empty grid.
pub fn parse_grid(text: &str) -> Result<Vec<u64>, String> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|s| {
            s.trim()
                .replace('_', "")
                .parse::<u64>()
                .map_err(|_| format!("'{s}' is not a non-negative integer"))
        })
        .collect()
}

/// `num/den` or a plain integer.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let (n, d) = (parse_int(n)?, parse_int(d)?);
        if d == BigInt::from(0) {
            return Err(format!("'{text}' has a zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }
    Ok(Rational::from_integer(parse_int(text)?))
}

fn parse_int(text: &str) -> Result<BigInt, String> {
    BigInt::from_str(text.trim()).map_err(|_| format!("'{text}' is not an integer"))
}

fn parse_ints(text: &str) -> Result<Vec<BigInt>, String> {
    text.split(',').map(parse_int).collect()
}
