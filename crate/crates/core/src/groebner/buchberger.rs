//! Buchberger's algorithm with the normal selection strategy, the product
//! and chain criteria, content removal after each reduction, and optional
//! batch-parallel S-polynomial reduction. The output is the unique reduced
//! Gröbner basis, independent of generator order and reduction schedule.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::algebra::{Expo, ParamPoly, Rational, Ring};
use crate::error::{Error, Result};
use crate::groebner::order::MonomialOrder;

/// Resource limits and parallelism for basis computations.
#[derive(Debug, Clone)]
pub struct GroebnerConfig {
    /// Cap on processed S-pairs before giving up with a capacity error.
    pub max_pairs: usize,
    /// Cap on single reduction steps inside one division.
    pub max_reduction_steps: usize,
    /// Number of S-polynomials reduced concurrently per round (1 = serial).
    pub parallel: usize,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig {
            max_pairs: 200_000,
            max_reduction_steps: 4_000_000,
            parallel: 1,
        }
    }
}

/// Internal polynomial form: terms sorted descending by the monomial order.
#[derive(Debug, Clone, PartialEq, Eq)]
struct GPoly {
    terms: Vec<(Expo, Rational)>,
}

impl GPoly {
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lt(&self) -> &(Expo, Rational) {
        &self.terms[0]
    }
}

fn to_gpoly(p: &ParamPoly, ord: &MonomialOrder) -> GPoly {
    let mut terms: Vec<(Expo, Rational)> =
        p.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
    terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
    GPoly { terms }
}

fn from_gpoly(ring: &Ring, p: &GPoly) -> ParamPoly {
    let mut out = ParamPoly::zero(ring);
    for (e, c) in &p.terms {
        let m = ParamPoly::monomial(ring, e.clone(), c.clone()).expect("valid monomial");
        out = out.try_add(&m).expect("same ring");
    }
    out
}

fn expo_divides(a: &Expo, b: &Expo) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn expo_sub(a: &Expo, b: &Expo) -> Expo {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn expo_lcm(a: &Expo, b: &Expo) -> Expo {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn expo_add(a: &Expo, b: &Expo) -> Expo {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn expo_is_coprime(a: &Expo, b: &Expo) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

/// `p - coeff · x^shift · q`, merging sorted term lists.
fn sub_scaled(p: &GPoly, q: &GPoly, shift: &Expo, coeff: &Rational, ord: &MonomialOrder) -> GPoly {
    let mut out = Vec::with_capacity(p.terms.len() + q.terms.len());
    let mut i = 0;
    let mut j = 0;
    while i < p.terms.len() && j < q.terms.len() {
        let qe = expo_add(&q.terms[j].0, shift);
        match ord.cmp(&p.terms[i].0, &qe) {
            Ordering::Greater => {
                out.push(p.terms[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((qe, -(coeff * &q.terms[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let c = &p.terms[i].1 - coeff * &q.terms[j].1;
                if !c.is_zero() {
                    out.push((p.terms[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&p.terms[i..]);
    while j < q.terms.len() {
        let qe = expo_add(&q.terms[j].0, shift);
        out.push((qe, -(coeff * &q.terms[j].1)));
        j += 1;
    }
    GPoly { terms: out }
}

/// Strip integer content and normalize the leading coefficient's sign.
fn make_primitive(p: &mut GPoly) {
    if p.terms.is_empty() {
        return;
    }
    let mut den_lcm = BigInt::one();
    for (_, c) in &p.terms {
        den_lcm = den_lcm.lcm(c.denom());
    }
    let mut num_gcd = BigInt::zero();
    for (_, c) in &p.terms {
        num_gcd = num_gcd.gcd(&(c.numer() * &den_lcm / c.denom()));
    }
    if num_gcd.is_zero() {
        return;
    }
    let mut factor = Rational::new(den_lcm, num_gcd);
    if (&p.terms[0].1 * &factor).is_negative() {
        factor = -factor;
    }
    for (_, c) in &mut p.terms {
        *c *= &factor;
    }
}

fn make_monic(p: &mut GPoly) {
    if p.terms.is_empty() {
        return;
    }
    let lead = p.terms[0].1.clone();
    if lead.is_one() {
        return;
    }
    for (_, c) in &mut p.terms {
        *c /= &lead;
    }
}

/// Full normal-form reduction of `p` by `basis`: no remainder term is
/// divisible by any basis leading term.
fn reduce_full(
    p: &GPoly,
    basis: &[GPoly],
    ord: &MonomialOrder,
    cfg: &GroebnerConfig,
) -> Result<GPoly> {
    let mut work = p.clone();
    let mut remainder: Vec<(Expo, Rational)> = Vec::new();
    let mut steps = 0usize;
    'outer: while !work.is_zero() {
        let (lt_e, lt_c) = work.lt().clone();
        for g in basis {
            if g.is_zero() {
                continue;
            }
            let (ge, gc) = g.lt();
            if expo_divides(ge, &lt_e) {
                steps += 1;
                if steps > cfg.max_reduction_steps {
                    return Err(Error::Capacity {
                        phase: "polynomial reduction",
                        detail: format!(
                            "exceeded {} reduction steps (remainder so far has {} terms)",
                            cfg.max_reduction_steps,
                            remainder.len()
                        ),
                    });
                }
                let shift = expo_sub(&lt_e, ge);
                let q = &lt_c / gc;
                work = sub_scaled(&work, g, &shift, &q, ord);
                continue 'outer;
            }
        }
        remainder.push((lt_e, lt_c));
        work.terms.remove(0);
    }
    Ok(GPoly { terms: remainder })
}

fn s_poly(f: &GPoly, g: &GPoly, ord: &MonomialOrder) -> GPoly {
    let (fe, fc) = f.lt();
    let (ge, gc) = g.lt();
    let lcm = expo_lcm(fe, ge);
    // lcm/LT(f) · f − lcm/LT(g) · g, normalized to leading coefficient 1 on
    // the f side.
    let mut shifted_f = GPoly {
        terms: f
            .terms
            .iter()
            .map(|(e, c)| (expo_add(e, &expo_sub(&lcm, fe)), c / fc))
            .collect(),
    };
    let shift_g = expo_sub(&lcm, ge);
    shifted_f = sub_scaled(&shifted_f, g, &shift_g, &(Rational::one() / gc), ord);
    shifted_f
}

/// The unique reduced Gröbner basis of the generators under `ord`.
pub(crate) fn buchberger_gpolys(
    generators: &[ParamPoly],
    ord: &MonomialOrder,
    cfg: &GroebnerConfig,
) -> Result<Vec<GPoly>> {
    let mut basis: Vec<GPoly> = Vec::new();
    for g in generators {
        let mut gp = to_gpoly(g, ord);
        if gp.is_zero() {
            continue;
        }
        make_primitive(&mut gp);
        basis.push(gp);
    }

    // Pair queue under the normal strategy (minimal lcm degree first).
    let mut pending: BTreeSet<(i64, usize, usize)> = BTreeSet::new();
    let mut dropped: BTreeSet<(usize, usize)> = BTreeSet::new();
    let lcm_degree = |basis: &[GPoly], i: usize, j: usize| -> i64 {
        let lcm = expo_lcm(&basis[i].lt().0, &basis[j].lt().0);
        lcm.iter().map(|e| *e as i64).sum()
    };
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            pending.insert((lcm_degree(&basis, i, j), i, j));
        }
    }

    let mut processed = 0usize;
    while !pending.is_empty() {
        // Pop a batch of surviving pairs.
        let batch_size = cfg.parallel.max(1);
        let mut batch: Vec<(usize, usize)> = Vec::with_capacity(batch_size);
        while batch.len() < batch_size {
            let Some(entry) = pending.iter().next().cloned() else {
                break;
            };
            pending.remove(&entry);
            let (_, i, j) = entry;
            processed += 1;
            if processed > cfg.max_pairs {
                return Err(Error::Capacity {
                    phase: "buchberger",
                    detail: format!(
                        "exceeded {} S-pairs (basis size {}, {} pairs pending)",
                        cfg.max_pairs,
                        basis.len(),
                        pending.len()
                    ),
                });
            }
            let (fe, ge) = (&basis[i].lt().0, &basis[j].lt().0);
            // Product criterion.
            if expo_is_coprime(fe, ge) {
                dropped.insert((i, j));
                continue;
            }
            // Chain criterion: a third element dividing the lcm whose pairs
            // with i and j were both handled already.
            let lcm = expo_lcm(fe, ge);
            let chain = (0..basis.len()).any(|k| {
                if k == i || k == j || basis[k].is_zero() {
                    return false;
                }
                if !expo_divides(&basis[k].lt().0, &lcm) {
                    return false;
                }
                let a = (k.min(i), k.max(i));
                let b = (k.min(j), k.max(j));
                dropped.contains(&a) && dropped.contains(&b)
            });
            if chain {
                dropped.insert((i, j));
                continue;
            }
            dropped.insert((i, j));
            batch.push((i, j));
        }
        if batch.is_empty() {
            continue;
        }

        let reduce_one = |&(i, j): &(usize, usize)| -> Result<GPoly> {
            let s = s_poly(&basis[i], &basis[j], ord);
            let mut r = reduce_full(&s, &basis, ord, cfg)?;
            make_primitive(&mut r);
            Ok(r)
        };
        let reduced: Vec<GPoly> = if batch.len() > 1 {
            batch
                .par_iter()
                .map(reduce_one)
                .collect::<Result<Vec<_>>>()?
        } else {
            batch.iter().map(reduce_one).collect::<Result<Vec<_>>>()?
        };

        for mut r in reduced {
            // Against a batch sibling inserted this round.
            r = reduce_full(&r, &basis, ord, cfg)?;
            if r.is_zero() {
                continue;
            }
            make_primitive(&mut r);
            let new_idx = basis.len();
            basis.push(r);
            for i in 0..new_idx {
                if !basis[i].is_zero() {
                    pending.insert((lcm_degree(&basis, i, new_idx), i, new_idx));
                }
            }
        }
    }

    // Minimalize: drop elements whose leading term another divides.
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if basis[i].is_zero() {
            keep[i] = false;
            continue;
        }
        for j in 0..basis.len() {
            if i == j || !keep[j] || basis[j].is_zero() {
                continue;
            }
            let divides = expo_divides(&basis[j].lt().0, &basis[i].lt().0);
            let strict = basis[j].lt().0 != basis[i].lt().0 || j < i;
            if divides && strict {
                keep[i] = false;
                break;
            }
        }
    }
    let minimal: Vec<GPoly> = basis
        .into_iter()
        .zip(&keep)
        .filter_map(|(g, k)| if *k { Some(g) } else { None })
        .collect();

    // Inter-reduce to the reduced basis and normalize.
    let mut reduced: Vec<GPoly> = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<GPoly> = minimal
            .iter()
            .enumerate()
            .filter_map(|(j, g)| if j != i { Some(g.clone()) } else { None })
            .collect();
        let mut r = reduce_full(&minimal[i], &others, ord, cfg)?;
        make_monic(&mut r);
        if !r.is_zero() {
            reduced.push(r);
        }
    }
    reduced.sort_by(|a, b| ord.cmp(&a.lt().0, &b.lt().0));
    Ok(reduced)
}

/// Reduced Gröbner basis as `ParamPoly`s, sorted ascending by leading term.
pub fn buchberger(
    generators: &[ParamPoly],
    ring: &Ring,
    ord: &MonomialOrder,
    cfg: &GroebnerConfig,
) -> Result<Vec<ParamPoly>> {
    let basis = buchberger_gpolys(generators, ord, cfg)?;
    Ok(basis.iter().map(|g| from_gpoly(ring, g)).collect())
}

/// Normal-form remainder of `p` modulo a basis: no remainder term is
/// divisible by any leading term of the basis, and `p - reduce(p)` lies in
/// the ideal generated by the basis.
pub fn reduce(
    p: &ParamPoly,
    basis: &[ParamPoly],
    ord: &MonomialOrder,
    cfg: &GroebnerConfig,
) -> Result<ParamPoly> {
    let gbasis: Vec<GPoly> = basis
        .iter()
        .map(|b| to_gpoly(b, ord))
        .filter(|g| !g.is_zero())
        .collect();
    let r = reduce_full(&to_gpoly(p, ord), &gbasis, ord, cfg)?;
    Ok(from_gpoly(p.ring(), &r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, VarTable};

    fn setup(vars: &[&str]) -> Ring {
        let v: Vec<(&str, bool)> = vars.iter().map(|n| (*n, false)).collect();
        VarTable::new(&v).unwrap()
    }

    #[test]
    fn trivial_bases() {
        let r = setup(&["x", "y"]);
        let ord = MonomialOrder::lex(&r);
        let cfg = GroebnerConfig::default();
        let gens = vec![parse_poly(&r, "x").unwrap(), parse_poly(&r, "y").unwrap()];
        let gb = buchberger(&gens, &r, &ord, &cfg).unwrap();
        assert_eq!(gb, vec![parse_poly(&r, "y").unwrap(), parse_poly(&r, "x").unwrap()]);
    }

    #[test]
    fn containment_collapse() {
        let r = setup(&["x"]);
        let ord = MonomialOrder::lex(&r);
        let cfg = GroebnerConfig::default();
        let gens = vec![
            parse_poly(&r, "x^2 - 1").unwrap(),
            parse_poly(&r, "x - 1").unwrap(),
        ];
        let gb = buchberger(&gens, &r, &ord, &cfg).unwrap();
        assert_eq!(gb, vec![parse_poly(&r, "x - 1").unwrap()]);
    }

    #[test]
    fn reduce_examples() {
        let r = setup(&["x", "g2", "ab"]);
        let ord = MonomialOrder::degrevlex(&r);
        let cfg = GroebnerConfig::default();
        // reduce(x^2, {x}) = 0
        let basis = vec![parse_poly(&r, "x").unwrap()];
        assert!(reduce(&parse_poly(&r, "x^2").unwrap(), &basis, &ord, &cfg)
            .unwrap()
            .is_zero());
        // reduce(g2 + ab + 1, {g2, ab}) = 1
        let basis = vec![parse_poly(&r, "g2").unwrap(), parse_poly(&r, "ab").unwrap()];
        let rem = reduce(&parse_poly(&r, "g2 + ab + 1").unwrap(), &basis, &ord, &cfg).unwrap();
        assert_eq!(rem, ParamPoly::one(&r));
    }

    #[test]
    fn generators_reduce_to_zero() {
        let r = setup(&["x", "y", "z"]);
        let ord = MonomialOrder::degrevlex(&r);
        let cfg = GroebnerConfig::default();
        let gens = vec![
            parse_poly(&r, "x^2 + y^2 + z^2 - 1").unwrap(),
            parse_poly(&r, "x*y - z").unwrap(),
            parse_poly(&r, "x - y + 2*z").unwrap(),
        ];
        let gb = buchberger(&gens, &r, &ord, &cfg).unwrap();
        for g in &gens {
            assert!(reduce(g, &gb, &ord, &cfg).unwrap().is_zero());
        }
        // Buchberger criterion: every S-polynomial of the output reduces to 0.
        let gpolys: Vec<GPoly> = gb.iter().map(|g| to_gpoly(g, &ord)).collect();
        for i in 0..gpolys.len() {
            for j in (i + 1)..gpolys.len() {
                let s = s_poly(&gpolys[i], &gpolys[j], &ord);
                let r0 = reduce_full(&s, &gpolys, &ord, &cfg).unwrap();
                assert!(r0.is_zero());
            }
        }
    }

    #[test]
    fn twisted_cubic_elimination() {
        // eliminate x from <y - x^2, z - x^3>: the x-free part is <y^3 - z^2>
        let r = setup(&["x", "y", "z"]);
        let ord = MonomialOrder::elimination(&r, &[0]).unwrap();
        let cfg = GroebnerConfig::default();
        let gens = vec![
            parse_poly(&r, "y - x^2").unwrap(),
            parse_poly(&r, "z - x^3").unwrap(),
        ];
        let gb = buchberger(&gens, &r, &ord, &cfg).unwrap();
        let x_free: Vec<&ParamPoly> = gb.iter().filter(|g| !g.involves(0)).collect();
        assert_eq!(x_free.len(), 1);
        let target = parse_poly(&r, "y^3 - z^2").unwrap();
        assert_eq!(x_free[0], &target);
    }

    #[test]
    fn capacity_error_reports_diagnostics() {
        let r = setup(&["x", "y", "z"]);
        let ord = MonomialOrder::degrevlex(&r);
        let cfg = GroebnerConfig {
            max_pairs: 1,
            ..GroebnerConfig::default()
        };
        let gens = vec![
            parse_poly(&r, "x^3*y - 2*z").unwrap(),
            parse_poly(&r, "x*z^2 - y^2").unwrap(),
            parse_poly(&r, "y^3 - x").unwrap(),
        ];
        match buchberger(&gens, &r, &ord, &cfg) {
            Err(Error::Capacity { phase, .. }) => assert_eq!(phase, "buchberger"),
            other => panic!("expected capacity error, got {other:?}"),
        }
    }
}
