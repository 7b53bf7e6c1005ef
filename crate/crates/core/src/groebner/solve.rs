//! Rational solving of zero-dimensional systems: lex triangularization,
//! rational-root extraction with exact deflation, and dimension witnesses for
//! the positive-dimensional case. Non-rational zero-dimensional components
//! are returned as triangular descriptions, never approximated.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::{ParamPoly, Rational, Ring, VarId};
use crate::error::{Error, Result};
use crate::groebner::buchberger::GroebnerConfig;
use crate::groebner::ideal::Ideal;
use crate::groebner::order::MonomialOrder;

/// A branch of the triangular system whose next root is not rational: the
/// rational partial assignment plus the residual univariate polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangularBranch {
    pub assigned: Vec<(VarId, Rational)>,
    pub var: VarId,
    pub poly: ParamPoly,
}

/// Outcome of solving a polynomial system over ℚ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    /// The ideal is the whole ring: no solutions at all.
    Inconsistent,
    /// Finitely many solutions; all rational ones are listed (coordinates
    /// follow the ring's variable order) and non-rational components are
    /// described by triangular branches.
    ZeroDimensional {
        rational_points: Vec<Vec<Rational>>,
        residual: Vec<TriangularBranch>,
    },
    /// The solution set has positive dimension; `free_vars` is a maximal set
    /// of variables the ideal leaves algebraically independent.
    PositiveDimensional { free_vars: Vec<VarId> },
}

/// Solve a system over ℚ: classify the ideal as inconsistent,
/// zero-dimensional (enumerating rational points by lex triangularization
/// and rational-root extraction) or positive-dimensional (returning a free
/// variable set).
pub fn solve_zero_dim(ideal: &Ideal, cfg: &GroebnerConfig) -> Result<SolveOutcome> {
    ideal.require_pure()?;
    let ring = ideal.ring().clone();
    let ord = MonomialOrder::degrevlex(&ring);
    let gb = ideal.groebner_basis(&ord, cfg)?;
    if gb.iter().any(|g| g.as_constant().map(|c| !c.is_zero()) == Some(true)) {
        return Ok(SolveOutcome::Inconsistent);
    }

    // Zero-dimensionality: every variable needs a pure-power leading term.
    let leading_exponents: Vec<Vec<i32>> = gb
        .iter()
        .map(|g| leading_expo(g, &ord))
        .collect();
    let n = ring.arity();
    let mut has_pure_power = vec![false; n];
    for e in &leading_exponents {
        let support: Vec<usize> = (0..n).filter(|v| e[*v] > 0).collect();
        if support.len() == 1 {
            has_pure_power[support[0]] = true;
        }
    }
    if !has_pure_power.iter().all(|b| *b) {
        let free_vars = maximal_independent_set(&leading_exponents, n);
        return Ok(SolveOutcome::PositiveDimensional { free_vars });
    }

    // Lex basis; triangular backtracking from the least significant variable.
    let lex = MonomialOrder::lex(&ring);
    let lex_gb = ideal.groebner_basis(&lex, cfg)?;
    let vars_low_first: Vec<VarId> = lex.vars().iter().rev().cloned().collect();
    let mut points = Vec::new();
    let mut residual = Vec::new();
    enumerate(
        &lex_gb,
        &ring,
        &vars_low_first,
        &mut BTreeMap::new(),
        &mut points,
        &mut residual,
    )?;
    // Witness soundness: every reported point must kill every generator.
    for p in &points {
        for g in ideal.generators() {
            let val = g.eval(&p.iter().cloned().enumerate().collect())?;
            if !val.is_zero() {
                return Err(Error::domain(
                    "solver produced a non-vanishing witness (engine defect)",
                ));
            }
        }
    }
    points.sort();
    Ok(SolveOutcome::ZeroDimensional {
        rational_points: points,
        residual,
    })
}

fn leading_expo(g: &ParamPoly, ord: &MonomialOrder) -> Vec<i32> {
    g.terms()
        .max_by(|a, b| ord.cmp(a.0, b.0))
        .map(|(e, _)| e.clone())
        .expect("nonzero")
}

/// Greedy maximal set S with no leading term supported inside S.
fn maximal_independent_set(leading: &[Vec<i32>], arity: usize) -> Vec<VarId> {
    let mut set: Vec<VarId> = Vec::new();
    for v in 0..arity {
        let mut candidate = set.clone();
        candidate.push(v);
        let independent = leading.iter().all(|e| {
            let support: Vec<usize> = (0..arity).filter(|w| e[*w] > 0).collect();
            !(support.iter().all(|w| candidate.contains(w)) && !support.is_empty())
        });
        if independent {
            set = candidate;
        }
    }
    set
}

fn enumerate(
    gens: &[ParamPoly],
    ring: &Ring,
    vars: &[VarId],
    assignment: &mut BTreeMap<VarId, Rational>,
    points: &mut Vec<Vec<Rational>>,
    residual: &mut Vec<TriangularBranch>,
) -> Result<()> {
    // Specialize the system at the current partial assignment.
    let bindings: BTreeMap<VarId, ParamPoly> = assignment
        .iter()
        .map(|(v, r)| (*v, ParamPoly::constant(ring, r.clone())))
        .collect();
    let mut specialized = Vec::new();
    for g in gens {
        let s = g.substitute(&bindings)?;
        if let Some(c) = s.as_constant() {
            if !c.is_zero() {
                return Ok(()); // dead branch
            }
        } else {
            specialized.push(s);
        }
    }
    let level = assignment.len();
    if level == vars.len() {
        let point: Vec<Rational> = (0..ring.arity())
            .map(|v| assignment.get(&v).cloned().expect("fully assigned"))
            .collect();
        points.push(point);
        return Ok(());
    }
    let v = vars[level];
    let univs: Vec<Vec<Rational>> = specialized
        .iter()
        .filter_map(|g| univariate_coeffs(g, v))
        .filter(|c| c.len() > 1)
        .collect();
    if univs.is_empty() {
        // Cannot happen for a lex basis of a zero-dimensional ideal.
        return Err(Error::domain(
            "triangular solve found an unconstrained variable (engine defect)",
        ));
    }
    let mut g = univs[0].clone();
    for u in &univs[1..] {
        g = univariate_gcd(&g, u);
    }
    let (roots, leftover) = rational_roots(&g)?;
    if leftover.len() > 1 {
        residual.push(TriangularBranch {
            assigned: assignment.iter().map(|(a, b)| (*a, b.clone())).collect(),
            var: v,
            poly: dense_to_poly(ring, v, &leftover),
        });
    }
    for (r, _multiplicity) in roots {
        assignment.insert(v, r);
        enumerate(gens, ring, vars, assignment, points, residual)?;
        assignment.remove(&v);
    }
    Ok(())
}

/// Dense coefficients `c_0..c_d` of a polynomial univariate in `v`; `None`
/// if any other variable occurs.
pub fn univariate_coeffs(p: &ParamPoly, v: VarId) -> Option<Vec<Rational>> {
    let mut degree = 0usize;
    for (expo, _) in p.terms() {
        for (id, e) in expo.iter().enumerate() {
            if *e != 0 && id != v {
                return None;
            }
        }
        degree = degree.max(expo[v] as usize);
    }
    let mut coeffs = vec![Rational::zero(); degree + 1];
    for (expo, c) in p.terms() {
        coeffs[expo[v] as usize] = c.clone();
    }
    Some(coeffs)
}

fn dense_to_poly(ring: &Ring, v: VarId, coeffs: &[Rational]) -> ParamPoly {
    let mut out = ParamPoly::zero(ring);
    for (i, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            let m = ParamPoly::var_pow(ring, v, i as i32)
                .expect("nonnegative power")
                .scale(c);
            out = out.try_add(&m).expect("same ring");
        }
    }
    out
}

fn trim(coeffs: &mut Vec<Rational>) {
    while coeffs.len() > 1 && coeffs.last().map(|c| c.is_zero()) == Some(true) {
        coeffs.pop();
    }
}

/// Univariate gcd over ℚ (monic), by the Euclidean algorithm.
pub fn univariate_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !(b.len() == 1 && b[0].is_zero()) {
        let r = univariate_rem(&a, &b);
        a = b;
        b = r;
        trim(&mut b);
    }
    // Normalize monic.
    if let Some(lead) = a.last().cloned() {
        if !lead.is_zero() && !lead.is_one() {
            for c in &mut a {
                *c /= &lead;
            }
        }
    }
    a
}

fn univariate_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db.max(1) || (db == 0 && !(r.len() == 1 && r[0].is_zero())) {
        let dr = r.len() - 1;
        if dr < db {
            break;
        }
        let q = &r[dr] / &lead;
        for i in 0..db {
            let adj = &q * &b[i];
            r[dr - db + i] -= adj;
        }
        r.pop(); // the leading term cancels exactly
        trim(&mut r);
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
    }
    r
}

const DIVISOR_CAP: u64 = 1_000_000_000_000;

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n.abs();
    if n.is_zero() {
        return Err(Error::domain("divisors of zero requested"));
    }
    if n > BigInt::from(DIVISOR_CAP) {
        return Err(Error::Capacity {
            phase: "rational root extraction",
            detail: format!("coefficient {n} too large to factor"),
        });
    }
    let n_u = u64::try_from(n.clone()).expect("bounded");
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n_u {
        if n_u % d == 0 {
            out.push(BigInt::from(d));
            if d != n_u / d {
                out.push(BigInt::from(n_u / d));
            }
        }
        d += 1;
    }
    out.sort();
    Ok(out)
}

fn horner(coeffs: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Synthetic division by (x - r); the input must vanish at r.
fn deflate(coeffs: &[Rational], r: &Rational) -> Vec<Rational> {
    let d = coeffs.len() - 1;
    let mut out = vec![Rational::zero(); d];
    let mut carry = Rational::zero();
    for i in (1..=d).rev() {
        carry = &coeffs[i] + &(carry * r);
        out[i - 1] = carry.clone();
    }
    out
}

/// All rational roots with multiplicities, plus the root-free residual
/// factor (monic-normalized input order).
pub fn rational_roots(coeffs: &[Rational]) -> Result<(Vec<(Rational, usize)>, Vec<Rational>)> {
    let mut work = coeffs.to_vec();
    trim(&mut work);
    if work.len() <= 1 {
        return Ok((Vec::new(), work));
    }
    let mut roots: Vec<(Rational, usize)> = Vec::new();
    // Zero roots first.
    let mut zero_mult = 0usize;
    while work.len() > 1 && work[0].is_zero() {
        work.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Rational::zero(), zero_mult));
    }
    if work.len() > 1 {
        // Integer-primitive form for the root bound.
        let mut den_lcm = BigInt::one();
        for c in &work {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = work
            .iter()
            .map(|c| c.numer() * &den_lcm / c.denom())
            .collect();
        let p_divs = divisors(&ints[0])?;
        let q_divs = divisors(ints.last().unwrap())?;
        let mut candidates: Vec<Rational> = Vec::new();
        for p in &p_divs {
            for q in &q_divs {
                let cand = Rational::new(p.clone(), q.clone());
                if !candidates.contains(&cand) {
                    candidates.push(cand.clone());
                    candidates.push(-cand);
                }
            }
        }
        for cand in candidates {
            let mut mult = 0usize;
            while work.len() > 1 && horner(&work, &cand).is_zero() {
                work = deflate(&work, &cand);
                mult += 1;
            }
            if mult > 0 {
                roots.push((cand, mult));
            }
            if work.len() <= 1 {
                break;
            }
        }
    }
    if let Some(lead) = work.last().cloned() {
        if !lead.is_zero() && !lead.is_one() {
            for c in &mut work {
                *c /= &lead;
            }
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Ok((roots, work))
}

/// Simple-zero test: the Jacobian of the generators at the point has full
/// rank (= number of variables).
pub fn is_simple_zero(ideal: &Ideal, point: &[Rational]) -> Result<bool> {
    let ring = ideal.ring().clone();
    let n = ring.arity();
    let pt: BTreeMap<VarId, Rational> = point.iter().cloned().enumerate().collect();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for g in ideal.generators() {
        let row: Vec<Rational> = (0..n)
            .map(|v| g.derivative(v).eval(&pt))
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    Ok(rank(rows) == n)
}

fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let lead = rows[rank][col].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = &rows[r][col] / &lead;
                for c in col..cols {
                    let adj = &factor * &rows[rank][c];
                    rows[r][c] -= adj;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, rat, VarTable};

    fn cfg() -> GroebnerConfig {
        GroebnerConfig::default()
    }

    #[test]
    fn unit_ideal_is_inconsistent() {
        let ring = VarTable::new(&[("x", false)]).unwrap();
        let ideal = Ideal::new(&ring, vec![ParamPoly::one(&ring)]).unwrap();
        assert_eq!(
            solve_zero_dim(&ideal, &cfg()).unwrap(),
            SolveOutcome::Inconsistent
        );
    }

    #[test]
    fn zero_ideal_has_all_variables_free() {
        let ring = VarTable::new(&[
            ("alpha", false),
            ("beta", false),
            ("gamma", false),
            ("theta", false),
        ])
        .unwrap();
        let ideal = Ideal::new(&ring, vec![]).unwrap();
        match solve_zero_dim(&ideal, &cfg()).unwrap() {
            SolveOutcome::PositiveDimensional { free_vars } => {
                assert_eq!(free_vars, vec![0, 1, 2, 3]);
            }
            other => panic!("expected positive-dimensional, got {other:?}"),
        }
    }

    #[test]
    fn paper_linear_system_has_only_the_origin() {
        // alpha*b35 + beta*b25 and alpha*b45 + beta*b35 with (b25, b35, b45)
        // = (1, 0, 1): b35² - b25·b45 = -1 ≠ 0, so α = β = 0.
        let ring = VarTable::new(&[("alpha", false), ("beta", false)]).unwrap();
        let gens = vec![
            parse_poly(&ring, "beta").unwrap(),
            parse_poly(&ring, "alpha").unwrap(),
        ];
        let ideal = Ideal::new(&ring, gens).unwrap();
        match solve_zero_dim(&ideal, &cfg()).unwrap() {
            SolveOutcome::ZeroDimensional {
                rational_points,
                residual,
            } => {
                assert_eq!(rational_points, vec![vec![rat(0, 1), rat(0, 1)]]);
                assert!(residual.is_empty());
            }
            other => panic!("expected zero-dimensional, got {other:?}"),
        }
    }

    #[test]
    fn mixed_rational_and_irrational_roots() {
        // x^3 - x^2 - 2x + 2 = (x - 1)(x^2 - 2): rational root 1, residual x^2 - 2.
        let ring = VarTable::new(&[("x", false)]).unwrap();
        let gens = vec![parse_poly(&ring, "x^3 - x^2 - 2*x + 2").unwrap()];
        let ideal = Ideal::new(&ring, gens).unwrap();
        match solve_zero_dim(&ideal, &cfg()).unwrap() {
            SolveOutcome::ZeroDimensional {
                rational_points,
                residual,
            } => {
                assert_eq!(rational_points, vec![vec![rat(1, 1)]]);
                assert_eq!(residual.len(), 1);
                assert_eq!(residual[0].poly, parse_poly(&ring, "x^2 - 2").unwrap());
            }
            other => panic!("expected zero-dimensional, got {other:?}"),
        }
    }

    #[test]
    fn triangular_system_with_fractions() {
        // 2x - 1 = 0, y^2 - x = 0 → x = 1/2, y irrational; no rational points.
        let ring = VarTable::new(&[("x", false), ("y", false)]).unwrap();
        let gens = vec![
            parse_poly(&ring, "2*x - 1").unwrap(),
            parse_poly(&ring, "y^2 - x").unwrap(),
        ];
        let ideal = Ideal::new(&ring, gens).unwrap();
        match solve_zero_dim(&ideal, &cfg()).unwrap() {
            SolveOutcome::ZeroDimensional {
                rational_points,
                residual,
            } => {
                assert!(rational_points.is_empty());
                assert_eq!(residual.len(), 1);
            }
            other => panic!("expected zero-dimensional, got {other:?}"),
        }
    }

    #[test]
    fn two_point_system() {
        // (x - 1)(x - 3) = 0, y = x + 1 → (1,2), (3,4)
        let ring = VarTable::new(&[("x", false), ("y", false)]).unwrap();
        let gens = vec![
            parse_poly(&ring, "x^2 - 4*x + 3").unwrap(),
            parse_poly(&ring, "y - x - 1").unwrap(),
        ];
        let ideal = Ideal::new(&ring, gens).unwrap();
        match solve_zero_dim(&ideal, &cfg()).unwrap() {
            SolveOutcome::ZeroDimensional {
                rational_points, ..
            } => {
                assert_eq!(
                    rational_points,
                    vec![
                        vec![rat(1, 1), rat(2, 1)],
                        vec![rat(3, 1), rat(4, 1)]
                    ]
                );
            }
            other => panic!("expected zero-dimensional, got {other:?}"),
        }
    }

    #[test]
    fn simple_vs_multiple_zero() {
        let ring = VarTable::new(&[("x", false), ("y", false)]).unwrap();
        let simple = Ideal::new(
            &ring,
            vec![
                parse_poly(&ring, "x").unwrap(),
                parse_poly(&ring, "y").unwrap(),
            ],
        )
        .unwrap();
        assert!(is_simple_zero(&simple, &[rat(0, 1), rat(0, 1)]).unwrap());
        let multiple = Ideal::new(
            &ring,
            vec![
                parse_poly(&ring, "x^2").unwrap(),
                parse_poly(&ring, "y").unwrap(),
            ],
        )
        .unwrap();
        assert!(!is_simple_zero(&multiple, &[rat(0, 1), rat(0, 1)]).unwrap());
    }

    #[test]
    fn root_finder_handles_multiplicity() {
        // (2x - 1)^2 (x + 3)
        let ring = VarTable::new(&[("x", false)]).unwrap();
        let p = parse_poly(&ring, "4*x^3 + 8*x^2 - 11*x + 3").unwrap();
        let coeffs = univariate_coeffs(&p, 0).unwrap();
        let (roots, residual) = rational_roots(&coeffs).unwrap();
        assert_eq!(roots, vec![(rat(-3, 1), 1), (rat(1, 2), 2)]);
        assert_eq!(residual.len(), 1);
    }
}
