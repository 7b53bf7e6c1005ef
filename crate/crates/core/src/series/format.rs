//! Cocycle text format.
//!
//! ```text
//! # comment
//! k 1
//! order 7
//! a 3 5 1
//! b 2 3 -1/2*b25 + 1
//! ```
//!
//! `a k n c` sets the coefficient of `x^-k · y^n` in the x-part tail and
//! `b k n c` the one in the y-part; the forced leading term `x^-k_self · y`
//! of the y-part is implicit (a `b` line at that slot adds to it). Unlisted
//! coefficients are zero. Coefficients use the polynomial syntax with any
//! identifiers except `x`; `theta` is treated as a Laurent unit.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::algebra::{collect_identifiers, parse_poly_at, ParamPoly, VarTable};
use crate::error::{Error, Result};
use crate::series::cocycle::Cocycle;
use crate::series::map::{TransversalMap, XBase};
use crate::series::series::TransversalSeries;

struct CoeffEntry<'a> {
    part: char,
    k: i64,
    n: usize,
    expr: &'a str,
    line: usize,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column: 1,
        message: message.into(),
    }
}

/// Parse a cocycle file. The coefficient ring is inferred: `x` (Laurent),
/// `theta` (Laurent, if mentioned) and all other identifiers as plain
/// symbolic parameters in sorted order.
pub fn parse_cocycle(input: &str) -> Result<Cocycle> {
    let mut k_self: Option<u32> = None;
    let mut order: Option<usize> = None;
    let mut entries: Vec<CoeffEntry> = Vec::new();

    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.split_once('#') {
            Some((before, _)) => before,
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.splitn(2, char::is_whitespace);
        let head = fields.next().unwrap();
        let rest = fields.next().unwrap_or("").trim();
        match head {
            "k" => {
                if k_self.is_some() {
                    return Err(parse_err(line_no, "duplicate `k` line"));
                }
                k_self = Some(
                    rest.parse()
                        .map_err(|_| parse_err(line_no, format!("invalid self-intersection `{rest}`")))?,
                );
            }
            "order" => {
                if order.is_some() {
                    return Err(parse_err(line_no, "duplicate `order` line"));
                }
                order = Some(
                    rest.parse()
                        .map_err(|_| parse_err(line_no, format!("invalid order `{rest}`")))?,
                );
            }
            "a" | "b" => {
                let mut parts = rest.splitn(3, char::is_whitespace);
                let k: i64 = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| parse_err(line_no, "expected `a|b <k> <n> <coefficient>`"))?;
                let n: usize = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| parse_err(line_no, "expected `a|b <k> <n> <coefficient>`"))?;
                let expr = parts
                    .next()
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .ok_or_else(|| parse_err(line_no, "missing coefficient"))?;
                entries.push(CoeffEntry {
                    part: head.chars().next().unwrap(),
                    k,
                    n,
                    expr,
                    line: line_no,
                });
            }
            other => return Err(parse_err(line_no, format!("unknown directive `{other}`"))),
        }
    }

    let k_self = k_self.ok_or_else(|| parse_err(1, "missing `k` line"))?;
    let order = order.ok_or_else(|| parse_err(1, "missing `order` line"))?;
    if order < 1 {
        return Err(parse_err(1, "order must be at least 1"));
    }

    // Infer the ring from the identifiers used by the coefficients.
    let mut idents: BTreeSet<String> = BTreeSet::new();
    for e in &entries {
        for ident in collect_identifiers(e.expr)? {
            idents.insert(ident);
        }
    }
    if idents.contains("x") {
        return Err(parse_err(1, "coefficients must not involve `x`; x-powers are encoded by k"));
    }
    let mut vars: Vec<(&str, bool)> = vec![("x", true)];
    for name in &idents {
        vars.push((name.as_str(), name == "theta"));
    }
    let ring = VarTable::new(&vars)?;
    let x = 0;

    let mut x_tail = TransversalSeries::zero(&ring, x, order);
    let mut y_part = TransversalSeries::zero(&ring, x, order);
    y_part.set_coeff(
        1,
        ParamPoly::var_pow(&ring, x, -(k_self as i32)).expect("x is Laurent"),
    );
    let mut seen: BTreeSet<(char, i64, usize)> = BTreeSet::new();
    for e in &entries {
        if e.n < 1 || e.n > order {
            return Err(parse_err(
                e.line,
                format!("y-order {} out of range 1..={order}", e.n),
            ));
        }
        if !seen.insert((e.part, e.k, e.n)) {
            return Err(parse_err(
                e.line,
                format!("duplicate coefficient entry ({} {} {})", e.part, e.k, e.n),
            ));
        }
        let coeff = parse_poly_at(&ring, e.expr, e.line)?;
        let shifted = coeff.mul_var_pow(x, -(e.k as i32)).map_err(|err| Error::Parse {
            line: e.line,
            column: 1,
            message: err.to_string(),
        })?;
        let series = match e.part {
            'a' => &mut x_tail,
            _ => &mut y_part,
        };
        let updated = series.coeff(e.n).try_add(&shifted)?;
        series.set_coeff(e.n, updated);
    }

    let map = TransversalMap::new(XBase::Inversion, x_tail, y_part).map_err(|e| Error::Parse {
        line: 1,
        column: 1,
        message: e.to_string(),
    })?;
    Cocycle::new(map, k_self).map_err(|e| Error::Parse {
        line: 1,
        column: 1,
        message: e.to_string(),
    })
}

/// Print a cocycle in the text format; parse/print round-trips exactly.
pub fn print_cocycle(c: &Cocycle) -> String {
    let mut out = String::new();
    writeln!(out, "k {}", c.self_intersection()).unwrap();
    writeln!(out, "order {}", c.order()).unwrap();
    let x = c.x_var();
    for n in 1..=c.order() {
        for (exp, coeff) in c.map().x_tail().coeff(n).decompose_by(x) {
            writeln!(out, "a {} {} {}", -(exp as i64), n, coeff).unwrap();
        }
    }
    for n in 1..=c.order() {
        let mut poly = c.map().y_part().coeff(n).clone();
        if n == 1 {
            // The forced leading term is implicit.
            let lead = ParamPoly::var_pow(c.ring(), x, -(c.self_intersection() as i32))
                .expect("x is Laurent");
            poly = poly.try_sub(&lead).expect("same ring");
        }
        for (exp, coeff) in poly.decompose_by(x) {
            writeln!(out, "b {} {} {}", -(exp as i64), n, coeff).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_normal_form_example() {
        let c = parse_cocycle("k 1\norder 7\na 3 5 1\n").unwrap();
        assert_eq!(c.self_intersection(), 1);
        assert_eq!(c.order(), 7);
        assert_eq!(c.a_coeff(3, 5), ParamPoly::one(c.ring()));
        assert!(c.a_coeff(3, 4).is_zero());
        assert_eq!(c.b_coeff(1, 1), ParamPoly::one(c.ring()));
    }

    #[test]
    fn round_trip() {
        let src = "k 2\norder 5\na 3 4 -1/2\na -1 2 7\nb 3 2 5\nb 2 3 b25 - 1\n";
        let c = parse_cocycle(src).unwrap();
        let printed = print_cocycle(&c);
        let c2 = parse_cocycle(&printed).unwrap();
        assert_eq!(print_cocycle(&c2), printed);
        assert_eq!(c2, c);
    }

    #[test]
    fn comments_and_blank_lines() {
        let src = "# a germ\nk 1\n\norder 3 # truncation\nb 2 3 1\n";
        let c = parse_cocycle(src).unwrap();
        assert_eq!(c.b_coeff(2, 3), ParamPoly::one(c.ring()));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_cocycle(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_cocycle("k 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_cocycle("k 1\norder 2\nq 1 2 3\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        // coefficient involving x
        assert!(parse_cocycle("k 1\norder 2\na 1 1 x\n").is_err());
        // duplicate slot
        assert!(parse_cocycle("k 1\norder 3\na 1 1 1\na 1 1 2\n").is_err());
    }

    #[test]
    fn scaled_leading_coefficient() {
        // b 1 1 1 adds to the implicit x^-1, giving 2/x as leading term.
        let c = parse_cocycle("k 1\norder 2\nb 1 1 1\n").unwrap();
        let printed = print_cocycle(&c);
        assert!(printed.contains("b 1 1 1"));
        let again = parse_cocycle(&printed).unwrap();
        assert_eq!(again, c);
    }
}
