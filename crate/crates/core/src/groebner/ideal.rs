use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::algebra::{collect_identifiers, parse_poly_at, same_ring, ParamPoly, Ring, VarTable};
use crate::error::{Error, Result};
use crate::groebner::buchberger::{buchberger, GroebnerConfig};
use crate::groebner::order::MonomialOrder;

/// A polynomial ideal given by generators over a shared ring. Laurent
/// variables may appear only transitionally (see `saturate_unit`); basis
/// computations require a pure polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    ring: Ring,
    generators: Vec<ParamPoly>,
}

impl Ideal {
    /// Zero generators are dropped; the zero ideal has an empty list.
    pub fn new(ring: &Ring, generators: Vec<ParamPoly>) -> Result<Self> {
        for g in &generators {
            same_ring(ring, g.ring())?;
        }
        Ok(Ideal {
            ring: ring.clone(),
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[ParamPoly] {
        &self.generators
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    /// Variables with negative exponents anywhere in the generators.
    pub fn occurring_laurent_vars(&self) -> Vec<usize> {
        let mut out = BTreeSet::new();
        for g in &self.generators {
            for (expo, _) in g.terms() {
                for (id, e) in expo.iter().enumerate() {
                    if *e < 0 {
                        out.insert(id);
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    /// Ensure no generator uses a negative exponent.
    pub fn require_pure(&self) -> Result<()> {
        let laurent = self.occurring_laurent_vars();
        if laurent.is_empty() {
            Ok(())
        } else {
            let names: Vec<&str> = laurent.iter().map(|id| self.ring.name(*id)).collect();
            Err(Error::domain(format!(
                "ideal computation requires a pure polynomial ring; clear Laurent variables ({}) first",
                names.join(", ")
            )))
        }
    }

    /// Reduced Gröbner basis under `ord`.
    pub fn groebner_basis(&self, ord: &MonomialOrder, cfg: &GroebnerConfig) -> Result<Vec<ParamPoly>> {
        self.require_pure()?;
        buchberger(&self.generators, &self.ring, ord, cfg)
    }
}

/// Two ideals are equal iff their reduced bases coincide.
pub fn ideal_equal(a: &Ideal, b: &Ideal, ord: &MonomialOrder, cfg: &GroebnerConfig) -> Result<bool> {
    same_ring(a.ring(), b.ring())?;
    let ga = a.groebner_basis(ord, cfg)?;
    let gb = b.groebner_basis(ord, cfg)?;
    Ok(ga == gb)
}

/// Parse the ideal text format: an optional `vars` line pinning the variable
/// order, an `order lex|degrevlex|elim(v,..)` line, then one polynomial per
/// line. Without a `vars` line the variables are the identifiers in sorted
/// order. `#` starts a comment.
pub fn parse_ideal(input: &str) -> Result<(Ideal, MonomialOrder)> {
    let mut declared_vars: Option<Vec<String>> = None;
    let mut order_spec: Option<(String, usize)> = None;
    let mut poly_lines: Vec<(usize, String)> = Vec::new();
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
        if let Some(rest) = line.strip_prefix("vars ") {
            declared_vars = Some(rest.split(',').map(|s| s.trim().to_owned()).collect());
        } else if let Some(rest) = line.strip_prefix("order ") {
            order_spec = Some((rest.trim().to_owned(), line_no));
        } else {
            poly_lines.push((line_no, line.to_owned()));
        }
    }

    let mut names: Vec<String> = match declared_vars {
        Some(v) => v,
        None => {
            let mut set = BTreeSet::new();
            for (line_no, src) in &poly_lines {
                for ident in collect_identifiers(src).map_err(|e| match e {
                    Error::Parse { column, message, .. } => Error::Parse {
                        line: *line_no,
                        column,
                        message,
                    },
                    other => other,
                })? {
                    set.insert(ident);
                }
            }
            set.into_iter().collect()
        }
    };
    if names.is_empty() {
        names.push("x".to_owned());
    }
    let vars: Vec<(&str, bool)> = names.iter().map(|n| (n.as_str(), false)).collect();
    let ring = VarTable::new(&vars)?;

    let order = match order_spec {
        None => MonomialOrder::degrevlex(&ring),
        Some((spec, line_no)) => {
            let bad = |msg: String| Error::Parse {
                line: line_no,
                column: 1,
                message: msg,
            };
            if spec == "lex" {
                MonomialOrder::lex(&ring)
            } else if spec == "degrevlex" {
                MonomialOrder::degrevlex(&ring)
            } else if let Some(body) = spec.strip_prefix("elim(").and_then(|s| s.strip_suffix(')')) {
                let mut block = Vec::new();
                for name in body.split(',') {
                    let name = name.trim();
                    let id = ring
                        .id_of(name)
                        .ok_or_else(|| bad(format!("unknown elimination variable `{name}`")))?;
                    block.push(id);
                }
                MonomialOrder::elimination(&ring, &block).map_err(|e| bad(e.to_string()))?
            } else {
                return Err(bad(format!("unknown order `{spec}`")));
            }
        }
    };

    let mut generators = Vec::new();
    for (line_no, src) in &poly_lines {
        generators.push(parse_poly_at(&ring, src, *line_no)?);
    }
    Ok((Ideal::new(&ring, generators)?, order))
}

/// Print an ideal with its order header; round-trips through [`parse_ideal`].
pub fn print_ideal(ideal: &Ideal, ord: &MonomialOrder) -> String {
    let mut out = String::new();
    let names: Vec<&str> = ideal.ring().names().collect();
    writeln!(out, "vars {}", names.join(",")).unwrap();
    let kind = ord.describe();
    if kind == "lex" || kind == "degrevlex" {
        writeln!(out, "order {kind}").unwrap();
    } else {
        writeln!(out, "order degrevlex").unwrap();
    }
    for g in ideal.generators() {
        writeln!(out, "{g}").unwrap();
    }
    out
}
