//! Text formats for maps (`.pmap`) and ideals (`.ideal`).
//!
//! ```text
//! vars: z1 z2
//! map:
//!  z1^2 + (0/1+1/1i)*z2
//!  z1*z2
//! ```
//!
//! An ideal file has the same layout with a `gens:` section. Blank lines and
//! lines starting with `#` are ignored; whitespace inside a line is not
//! significant.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{fmt_rational, GaussianRational, Monomial, MultiPoly, PolyMap, Polydisc};
use crate::groebner::Ideal;

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

/// Cursor over the non-whitespace characters of one line, keeping their columns.
struct Cursor<'a> {
    chars: Vec<(char, usize)>,
    pos: usize,
    line: usize,
    vars: &'a [String],
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &str, line: usize, col_offset: usize, vars: &'a [String]) -> Self {
        let chars: Vec<(char, usize)> = text
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(i, c)| (if c == '−' { '-' } else { c }, i + 1 + col_offset))
            .collect();
        let end_col = text.chars().count() + 1 + col_offset;
        Self { chars, pos: 0, line, vars, end_col }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(c, _)| c)
    }

    fn col(&self) -> usize {
        self.chars.get(self.pos).map_or(self.end_col, |&(_, c)| c)
    }

    fn err(&self, message: impl Into<String>) -> Error {
        perr(self.line, self.col(), message)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let s: String = self.chars[start..self.pos].iter().map(|&(c, _)| c).collect();
        Ok(s.parse().expect("ascii digits"))
    }

    fn signed_rat(&mut self) -> Result<BigRational> {
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let num = self.digits()?;
        let den = if self.eat('/') {
            let col = self.col();
            let d = self.digits()?;
            if d.is_zero() {
                return Err(perr(self.line, col, "malformed coefficient: zero denominator"));
            }
            d
        } else {
            BigInt::one()
        };
        let r = BigRational::new(num, den);
        Ok(if neg { -r } else { r })
    }

    /// `"(" rat [("+"|"-") rat "i"] ")"` or a bare integer.
    fn coefficient(&mut self) -> Result<GaussianRational> {
        if self.eat('(') {
            let re = self.signed_rat()?;
            let mut im = BigRational::zero();
            if matches!(self.peek(), Some('+') | Some('-')) {
                let neg = self.eat('-');
                if !neg {
                    self.eat('+');
                }
                let v = self.signed_rat()?;
                if !self.eat('i') {
                    return Err(self.err("malformed coefficient: expected 'i'"));
                }
                im = if neg { -v } else { v };
            }
            if !self.eat(')') {
                return Err(self.err("malformed coefficient: expected ')'"));
            }
            Ok(GaussianRational::new(re, im))
        } else {
            Ok(GaussianRational::real(BigRational::from_integer(self.digits()?)))
        }
    }

    fn identifier(&mut self) -> Option<(String, usize)> {
        let col = self.col();
        let start = self.pos;
        if !self.peek().is_some_and(|c| c.is_alphabetic() || c == '_') {
            return None;
        }
        while self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        Some((self.chars[start..self.pos].iter().map(|&(c, _)| c).collect(), col))
    }

    fn monomial(&mut self) -> Result<Monomial> {
        let mut e = vec![0u32; self.vars.len()];
        loop {
            let Some((name, col)) = self.identifier() else {
                return Err(self.err("expected a variable"));
            };
            let Some(idx) = self.vars.iter().position(|v| *v == name) else {
                return Err(perr(self.line, col, format!("unknown variable '{name}'")));
            };
            let k = if self.eat('^') {
                let col = self.col();
                let d = self.digits()?;
                u32::try_from(d).map_err(|_| perr(self.line, col, "exponent too large"))?
            } else {
                1
            };
            e[idx] += k;
            if !self.eat('*') {
                return Ok(Monomial(e));
            }
        }
    }

    fn term(&mut self) -> Result<(Monomial, GaussianRational)> {
        let starts_coef = self.peek().is_some_and(|c| c == '(' || c.is_ascii_digit());
        if starts_coef {
            let c = self.coefficient()?;
            if self.eat('*') {
                Ok((self.monomial()?, c))
            } else {
                Ok((Monomial::one(self.vars.len()), c))
            }
        } else {
            Ok((self.monomial()?, GaussianRational::one()))
        }
    }

    fn polynomial(&mut self) -> Result<MultiPoly> {
        let mut p = MultiPoly::zero(self.vars.len());
        let mut first = true;
        loop {
            let neg = self.eat('-');
            if !neg && !self.eat('+') && !first {
                return Err(self.err("expected '+' or '-'"));
            }
            let (m, c) = self.term()?;
            p.add_term(m, &if neg { -c } else { c });
            first = false;
            if self.peek().is_none() {
                return Ok(p);
            }
        }
    }
}

/// Parses one polynomial over the named variables.
pub fn parse_poly(text: &str, vars: &[String]) -> Result<MultiPoly> {
    parse_poly_at(text, vars, 1, 0)
}

fn parse_poly_at(text: &str, vars: &[String], line: usize, col_offset: usize) -> Result<MultiPoly> {
    let mut cur = Cursor::new(text, line, col_offset, vars);
    if cur.peek().is_none() {
        return Err(cur.err("empty polynomial"));
    }
    cur.polynomial()
}

struct Sections {
    vars: Vec<String>,
    polys: Vec<MultiPoly>,
}

fn parse_sections(text: &str, header: &str) -> Result<Sections> {
    let mut vars: Option<Vec<String>> = None;
    let mut in_body = false;
    let mut polys = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if vars.is_none() {
            let Some(rest) = trimmed.strip_prefix("vars:") else {
                let col = raw.len() - raw.trim_start().len() + 1;
                return Err(perr(line_no, col, "expected 'vars:'"));
            };
            let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            if names.is_empty() {
                return Err(perr(line_no, raw.len() + 1, "no variables declared"));
            }
            for (k, name) in names.iter().enumerate() {
                let valid = name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                    && name.chars().all(|c| c.is_alphanumeric() || c == '_');
                if !valid || names[..k].contains(name) {
                    let col = raw.find(name.as_str()).map_or(1, |b| raw[..b].chars().count() + 1);
                    return Err(perr(line_no, col, format!("invalid variable name '{name}'")));
                }
            }
            vars = Some(names);
            continue;
        }
        if !in_body {
            if trimmed != header {
                let col = raw.len() - raw.trim_start().len() + 1;
                return Err(perr(line_no, col, format!("expected '{header}'")));
            }
            in_body = true;
            continue;
        }
        polys.push(parse_poly_at(raw, vars.as_ref().unwrap(), line_no, 0)?);
    }
    let last = text.lines().count().max(1);
    let Some(vars) = vars else {
        return Err(perr(last, 1, "missing 'vars:' line"));
    };
    if !in_body {
        return Err(perr(last, 1, format!("missing '{header}' section")));
    }
    Ok(Sections { vars, polys })
}

/// Parses a `.pmap` file; returns the map and its variable names.
pub fn parse_map_file(text: &str) -> Result<(PolyMap, Vec<String>)> {
    let s = parse_sections(text, "map:")?;
    if s.polys.is_empty() {
        return Err(perr(text.lines().count().max(1), 1, "map has no components"));
    }
    Ok((PolyMap::new(s.vars.len(), s.polys)?, s.vars))
}

/// Parses a `.ideal` file; returns the ideal and its variable names.
pub fn parse_ideal_file(text: &str) -> Result<(Ideal, Vec<String>)> {
    let s = parse_sections(text, "gens:")?;
    Ok((Ideal::new(s.vars.len(), s.polys)?, s.vars))
}

/// `z1 … zn`.
pub fn default_vars(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("z{i}")).collect()
}

pub fn emit_coefficient(c: &GaussianRational) -> String {
    let with_den = |r: &BigRational| {
        let s = fmt_rational(r);
        if s.contains('/') { s } else { format!("{s}/1") }
    };
    let im = if c.im.is_negative() { format!("-{}", with_den(&-c.im.clone())) } else { format!("+{}", with_den(&c.im)) };
    format!("({}{}i)", with_den(&c.re), im)
}

/// Serializes a polynomial in the file grammar (leading term first).
pub fn emit_poly(p: &MultiPoly, vars: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let terms: Vec<String> = p
        .terms()
        .iter()
        .rev()
        .map(|(m, c)| {
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { vars[i].clone() } else { format!("{}^{}", vars[i], e) })
                .collect();
            if mono.is_empty() {
                emit_coefficient(c)
            } else {
                format!("{}*{}", emit_coefficient(c), mono.join("*"))
            }
        })
        .collect();
    terms.join(" + ")
}

pub fn emit_map_file(f: &PolyMap, vars: &[String]) -> String {
    let mut out = format!("vars: {}\nmap:\n", vars.join(" "));
    for c in f.components() {
        out.push_str(&emit_poly(c, vars));
        out.push('\n');
    }
    out
}

pub fn emit_ideal_file(ideal: &Ideal, vars: &[String]) -> String {
    let mut out = format!("vars: {}\ngens:\n", vars.join(" "));
    for g in ideal.generators() {
        out.push_str(&emit_poly(g, vars));
        out.push('\n');
    }
    out
}

/// Comma-separated Gaussian rationals, e.g. `1/2,0,1+1/3i`.
pub fn parse_point(text: &str) -> Result<Vec<GaussianRational>> {
    text.split(',')
        .enumerate()
        .map(|(k, s)| {
            s.trim()
                .parse::<GaussianRational>()
                .map_err(|_| perr(1, k + 1, format!("malformed number '{}'", s.trim())))
        })
        .collect()
}

/// Comma-separated positive rationals.
pub fn parse_radii(text: &str) -> Result<Vec<BigRational>> {
    text.split(',')
        .enumerate()
        .map(|(k, s)| match crate::exact::parse_rational(s.trim()) {
            Some(r) if r.is_positive() => Ok(r),
            _ => Err(perr(1, k + 1, format!("malformed radius '{}'", s.trim()))),
        })
        .collect()
}

/// `CENTER:RADIUS` in `ℂⁿ`, e.g. `1,1:1/2` or `0,0:2,3`. A single center
/// coordinate or a single radius applies to every coordinate.
pub fn parse_region(text: &str, n: usize) -> Result<Polydisc> {
    let (c, r) = text.split_once(':').ok_or_else(|| perr(1, 1, format!("expected CENTER:RADIUS, got '{text}'")))?;
    let mut center = parse_point(c)?;
    if center.len() == 1 {
        center = vec![center[0].clone(); n];
    }
    if center.len() != n {
        return Err(perr(1, 1, format!("region has {} coordinates, expected {n}", center.len())));
    }
    let mut radii = parse_radii(r)?;
    if radii.len() == 1 {
        radii = vec![radii[0].clone(); center.len()];
    }
    Polydisc::new(center, radii).map_err(|e| perr(1, c.len() + 2, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn spec_map_example() {
        let (f, vars) = parse_map_file("vars: z1 z2\nmap:\n z1^2 + (0/1+1/1i)*z2\n z1*z2").unwrap();
        assert_eq!(vars, v(&["z1", "z2"]));
        let z1 = MultiPoly::var(2, 0);
        let z2 = MultiPoly::var(2, 1);
        assert_eq!(f.components(), &[&z1.pow(2) + &z2.scale(&GaussianRational::i()), &z1 * &z2]);
        let (c, _) = parse_map_file("vars: z1\nmap:\n (1/2+0/1i)").unwrap();
        assert_eq!(c.components(), &[MultiPoly::constant(1, GaussianRational::from_parts(1, 2, 0, 1))]);
    }

    #[test]
    fn signs_and_integers() {
        let vars = v(&["x", "y"]);
        let p = parse_poly("-3*x^2*y − 2 + (1/2-1/3i)*y + x", &vars).unwrap();
        assert_eq!(p.num_terms(), 4);
        assert_eq!(p.constant_term(), GaussianRational::from_i64(-2));
        assert_eq!(parse_poly(&emit_poly(&p, &vars), &vars).unwrap(), p);
        assert_eq!(parse_poly("0", &vars).unwrap(), MultiPoly::zero(2));
    }

    #[test]
    fn error_positions() {
        let e = parse_map_file("vars: z1 z2\nmap:\n z1 + w3").unwrap_err();
        assert_eq!(e, Error::Parse { line: 3, column: 7, message: "unknown variable 'w3'".into() });
        let e = parse_map_file("vars: z1\nmap:\n (1/0)*z1").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, column: 5, .. }));
        let e = parse_map_file("vars: z1\nmap:\n z1 z1").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, column: 2, .. }));
        assert!(matches!(parse_map_file("map:\n z1"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_map_file("vars: z1\n z1"), Err(Error::Parse { line: 2, .. })));
        assert_eq!(parse_map_file("x").unwrap_err().exit_code(), 4);
    }

    #[test]
    fn ideal_files() {
        let (i, vars) = parse_ideal_file("# target\nvars: w1 w2\ngens:\n w1\n\n w2\n").unwrap();
        assert_eq!(i.generators().len(), 2);
        let text = emit_ideal_file(&i, &vars);
        assert_eq!(parse_ideal_file(&text).unwrap().0.generators(), i.generators());
    }

    #[test]
    fn coefficient_format() {
        assert_eq!(emit_coefficient(&GaussianRational::i()), "(0/1+1/1i)");
        assert_eq!(emit_coefficient(&GaussianRational::from_parts(-1, 2, -3, 4)), "(-1/2-3/4i)");
        assert_eq!(parse_point("1/2, 1+1/3i").unwrap()[1], GaussianRational::from_parts(1, 1, 1, 3));
        assert!(parse_radii("1/2,0").is_err());
        let k = parse_region("1,1:1/2", 2).unwrap();
        assert_eq!(k.radii(), &[crate::exact::rat(1, 2), crate::exact::rat(1, 2)]);
        assert!(parse_region("1,1:1,2,3", 2).is_err());
        assert_eq!(parse_region("0:2", 3).unwrap(), crate::exact::Polydisc::centered(3, crate::exact::rat(2, 1)).unwrap());
        assert!(parse_region("0,0:2", 3).is_err());
        assert!(parse_region("1,1", 2).is_err());
    }
}
