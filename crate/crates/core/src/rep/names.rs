//! Symbolic names for matrix units and small linear combinations of them,
//! as used for JSON keys: `E_12`, `E_11+E_22`, `1/2*E_11-E_21`, `E_11@2`.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::ring::{BlockMatrix, MatrixRing};

/// Name of unit `(block, i, j)`; indices are 1-based, the block suffix is
/// omitted for one-block rings.
pub fn unit_name<F: Field>(ring: &MatrixRing<F>, block: usize, i: usize, j: usize) -> String {
    let n = ring.blocks()[block].dim();
    let idx = if n > 9 {
        format!("{},{}", i + 1, j + 1)
    } else {
        format!("{}{}", i + 1, j + 1)
    };
    if ring.blocks().len() == 1 {
        format!("E_{idx}")
    } else {
        format!("E_{idx}@{}", block + 1)
    }
}

/// Names of all units, in the order of [`MatrixRing::units`].
pub fn unit_names<F: Field>(ring: &MatrixRing<F>) -> Vec<String> {
    let mut out = Vec::new();
    for (k, b) in ring.blocks().iter().enumerate() {
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                out.push(unit_name(ring, k, i, j));
            }
        }
    }
    out
}

/// Position of a unit name in [`unit_names`].
pub fn unit_index<F: Field>(ring: &MatrixRing<F>, name: &str) -> Result<usize> {
    let (block, i, j) = parse_unit(ring, name.trim())?;
    let offset: usize = ring.blocks()[..block].iter().map(|b| b.dim() * b.dim()).sum();
    Ok(offset + i * ring.blocks()[block].dim() + j)
}

fn parse_unit<F: Field>(ring: &MatrixRing<F>, s: &str) -> Result<(usize, usize, usize)> {
    let bad = || Error::Parse(format!("bad matrix unit `{s}`"));
    let body = s.strip_prefix('E').ok_or_else(bad)?;
    let body = body.strip_prefix('_').unwrap_or(body);
    let (idx, block) = match body.split_once('@') {
        Some((idx, b)) => (idx, b.parse::<usize>().map_err(|_| bad())?),
        None => (body, 1),
    };
    let (i, j) = match idx.split_once(',') {
        Some((i, j)) => (i.parse::<usize>().map_err(|_| bad())?, j.parse::<usize>().map_err(|_| bad())?),
        None if idx.len() == 2 => {
            let d: Vec<usize> = idx.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect::<Option<_>>().ok_or_else(bad)?;
            (d[0], d[1])
        }
        None => return Err(bad()),
    };
    if block == 0 || block > ring.blocks().len() {
        return Err(Error::Parse(format!("`{s}`: no block {block}")));
    }
    let n = ring.blocks()[block - 1].dim();
    if i == 0 || j == 0 || i > n || j > n {
        return Err(Error::Parse(format!("`{s}`: index out of range for a {n}x{n} block")));
    }
    Ok((block - 1, i - 1, j - 1))
}

fn parse_coefficient<F: Field>(field: &F, s: &str) -> Result<F::Elem> {
    let bad = || Error::Parse(format!("bad coefficient `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: i64 = num.parse().map_err(|_| bad())?;
    let den: i64 = den.parse().map_err(|_| bad())?;
    field.div(&field.from_i64(num), &field.from_i64(den)).ok_or_else(bad)
}

/// Parse a signed sum of terms `[c*]E_ij[@k]`, `c` or `[c*]1`.
pub fn parse_element<F: Field>(ring: &MatrixRing<F>, s: &str) -> Result<BlockMatrix<F>> {
    let field = ring.field();
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty ring element".into()));
    }
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut current = String::new();
    let mut negative = false;
    for c in compact.chars() {
        if (c == '+' || c == '-') && !current.is_empty() {
            terms.push((negative, std::mem::take(&mut current)));
            negative = c == '-';
        } else if c == '-' {
            negative = !negative;
        } else if c != '+' {
            current.push(c);
        }
    }
    terms.push((negative, current));

    let mut acc = ring.zero();
    for (negative, term) in terms {
        let (coef, unit) = match term.find('E') {
            Some(pos) => {
                let c = term[..pos].trim_end_matches('*');
                (if c.is_empty() { field.one() } else { parse_coefficient(field, c)? }, Some(&term[pos..]))
            }
            None => {
                let c = term.strip_suffix("*1").unwrap_or(&term);
                (parse_coefficient(field, c)?, None)
            }
        };
        let coef = if negative { field.neg(&coef) } else { coef };
        let base = match unit {
            Some(u) => {
                let (k, i, j) = parse_unit(ring, u)?;
                ring.unit(k, i, j)
            }
            None => ring.one(),
        };
        acc = ring.add(&acc, &ring.scale(&coef, &base));
    }
    Ok(acc)
}

/// Render an element as a sum of named units.
pub fn format_element<F: Field>(ring: &MatrixRing<F>, a: &BlockMatrix<F>) -> String {
    let field = ring.field();
    let mut out = String::new();
    for (k, (b, m)) in ring.blocks().iter().zip(&a.blocks).enumerate() {
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                let c = m.get(i, j);
                if field.is_zero(c) {
                    continue;
                }
                let name = unit_name(ring, k, i, j);
                let text = field.format_elem(c);
                let (neg, mag) = match text.strip_prefix('-') {
                    Some(rest) => (true, rest.to_string()),
                    None => (false, text),
                };
                if neg {
                    out.push('-');
                } else if !out.is_empty() {
                    out.push('+');
                }
                if mag != "1" {
                    out.push_str(&mag);
                    out.push('*');
                }
                out.push_str(&name);
            }
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, GaloisField, Rationals};

    #[test]
    fn names_and_indices() {
        let r = MatrixRing::full(Rationals, 2).unwrap();
        assert_eq!(unit_names(&r), vec!["E_11", "E_12", "E_21", "E_22"]);
        assert_eq!(unit_index(&r, "E21").unwrap(), 2);
        assert!(unit_index(&r, "E_31").is_err());
        let p = r.product(&MatrixRing::full(Rationals, 1).unwrap()).unwrap();
        assert_eq!(unit_names(&p)[4], "E_11@2");
        assert_eq!(unit_index(&p, "E_11@2").unwrap(), 4);
    }

    #[test]
    fn parse_round_trip() {
        let r = MatrixRing::full(Rationals, 2).unwrap();
        let a = parse_element(&r, "1/2*E_11 - E_21 + 3E_22").unwrap();
        let m = &a.blocks[0];
        assert_eq!((m.get(0, 0), m.get(1, 0), m.get(1, 1)), (&q(1, 2), &q(-1, 1), &q(3, 1)));
        assert_eq!(format_element(&r, &a), "1/2*E_11-E_21+3*E_22");
        assert_eq!(parse_element(&r, &format_element(&r, &a)).unwrap(), a);
        assert_eq!(parse_element(&r, "1").unwrap(), r.one());
        assert_eq!(parse_element(&r, "1-E_11").unwrap(), r.unit(0, 1, 1));
        assert_eq!(format_element(&r, &r.zero()), "0");
    }

    #[test]
    fn parse_over_gf3() {
        let f = GaloisField::prime(3).unwrap();
        let r = MatrixRing::full(f, 2).unwrap();
        let a = parse_element(&r, "-E_12").unwrap();
        assert_eq!(a.blocks[0].get(0, 1), &2);
    }
}
