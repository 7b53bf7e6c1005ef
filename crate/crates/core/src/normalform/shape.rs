use num_traits::One;

use crate::algebra::{ParamPoly, Ring, VarId};
use crate::error::{Error, Result};
use crate::series::{Cocycle, TransversalMap, TransversalSeries, XBase};

/// Which component of a cocycle a coefficient belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Part {
    A,
    B,
}

impl std::fmt::Display for Part {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Part::A => write!(f, "a"),
            Part::B => write!(f, "b"),
        }
    }
}

/// A monomial slot violating the normal-form support constraints.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Offender {
    pub part: Part,
    /// Index of the `x^{-k}` power (negative k means a positive x-power).
    pub k: i64,
    pub n: usize,
}

impl std::fmt::Display for Offender {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.part, self.k, self.n)
    }
}

/// Support window of the x-part tail at y-order n: `x^{-k}` with
/// `3 ≤ k ≤ n-1` (empty below order 4).
pub fn a_window_allows(k: i64, n: usize) -> bool {
    n >= 4 && 3 <= k && k <= n as i64 - 1
}

/// Support window of the y-part at y-order n beyond the forced `y/x`:
/// `x^{-k}` with `2 ≤ k ≤ n-1` (empty below order 3).
pub fn b_window_allows(k: i64, n: usize) -> bool {
    n >= 3 && 2 <= k && k <= n as i64 - 1
}

/// List every monomial violating the normal-form shape of a cocycle with
/// self-intersection 1; empty iff the cocycle is in normal form.
pub fn normal_form_offenders(c: &Cocycle) -> Vec<Offender> {
    let x = c.x_var();
    let mut out = Vec::new();
    // Leading y-term must be exactly x^{-1}.
    let lead = c.map().y_part().coeff(1);
    let lead_ok = match lead.as_monomial() {
        Some((expo, v)) => expo.iter().enumerate().all(|(id, e)| {
            if id == x {
                *e == -1
            } else {
                *e == 0
            }
        }) && v.is_one(),
        None => false,
    };
    if !lead_ok {
        out.push(Offender {
            part: Part::B,
            k: 1,
            n: 1,
        });
    }
    for n in 1..=c.order() {
        for (exp, _) in c.map().x_tail().coeff(n).decompose_by(x) {
            let k = -(exp as i64);
            if !a_window_allows(k, n) {
                out.push(Offender { part: Part::A, k, n });
            }
        }
        if n >= 2 {
            for (exp, _) in c.map().y_part().coeff(n).decompose_by(x) {
                let k = -(exp as i64);
                if !b_window_allows(k, n) {
                    out.push(Offender { part: Part::B, k, n });
                }
            }
        }
    }
    out.sort();
    out
}

pub fn is_normal_form(c: &Cocycle) -> bool {
    c.self_intersection() == 1 && normal_form_offenders(c).is_empty()
}

/// A cocycle with self-intersection 1 whose support satisfies the normal-form
/// windows: x-part on `x^{-k} y^n` with `n ≥ 4`, `3 ≤ k ≤ n-1`; y-part equal
/// to `y/x` plus `x^{-k} y^n` with `n ≥ 3`, `2 ≤ k ≤ n-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    cocycle: Cocycle,
}

impl NormalForm {
    pub fn new(cocycle: Cocycle) -> Result<Self> {
        if cocycle.self_intersection() != 1 {
            return Err(Error::domain(
                "normal forms require self-intersection 1 (take the cyclic cover first)",
            ));
        }
        let offenders = normal_form_offenders(&cocycle);
        if !offenders.is_empty() {
            let list = offenders
                .iter()
                .map(|o| o.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            return Err(Error::NormalForm(format!(
                "support violates the normal-form windows at {list}"
            )));
        }
        Ok(NormalForm { cocycle })
    }

    /// Build a normal form from window coefficients. Entries are
    /// `(k, n, coefficient)` meaning `coefficient · x^{-k} y^n`.
    pub fn from_coeffs(
        ring: &Ring,
        x: VarId,
        order: usize,
        a: &[(i64, usize, ParamPoly)],
        b: &[(i64, usize, ParamPoly)],
    ) -> Result<Self> {
        let mut x_tail = TransversalSeries::zero(ring, x, order);
        for (k, n, coeff) in a {
            let shifted = coeff.mul_var_pow(x, -(*k as i32))?;
            x_tail.set_coeff(*n, x_tail.coeff(*n).try_add(&shifted)?);
        }
        let mut y_part = TransversalSeries::zero(ring, x, order);
        y_part.set_coeff(1, ParamPoly::var_pow(ring, x, -1)?);
        for (k, n, coeff) in b {
            let shifted = coeff.mul_var_pow(x, -(*k as i32))?;
            y_part.set_coeff(*n, y_part.coeff(*n).try_add(&shifted)?);
        }
        let map = TransversalMap::new(XBase::Inversion, x_tail, y_part)?;
        NormalForm::new(Cocycle::new(map, 1)?)
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn into_cocycle(self) -> Cocycle {
        self.cocycle
    }

    pub fn order(&self) -> usize {
        self.cocycle.order()
    }

    pub fn ring(&self) -> &Ring {
        self.cocycle.ring()
    }

    pub fn x_var(&self) -> VarId {
        self.cocycle.x_var()
    }

    /// Normal-form coefficient `a_{k,n}`.
    pub fn a(&self, k: i64, n: usize) -> ParamPoly {
        self.cocycle.a_coeff(k, n)
    }

    /// Normal-form coefficient `b_{k,n}`.
    pub fn b(&self, k: i64, n: usize) -> ParamPoly {
        self.cocycle.b_coeff(k, n)
    }

    /// True when the x-part tail vanishes identically, i.e. the normal form
    /// is compatible with the fibration `{x = constant}`.
    pub fn is_fibration_compatible(&self) -> bool {
        self.cocycle.map().x_tail().is_zero()
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        NormalForm::new(self.cocycle.truncate(order)?)
    }

    pub fn embed_by_name(&self, ring: &Ring) -> Result<Self> {
        NormalForm::new(self.cocycle.embed_by_name(ring)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::parse_cocycle;

    #[test]
    fn linear_cocycle_is_normal() {
        let c = parse_cocycle("k 1\norder 6\n").unwrap();
        assert!(is_normal_form(&c));
        assert!(NormalForm::new(c).is_ok());
    }

    #[test]
    fn paper_example_is_normal() {
        let c = parse_cocycle("k 1\norder 7\na 3 5 1\n").unwrap();
        assert!(is_normal_form(&c));
    }

    #[test]
    fn below_window_offender() {
        let c = parse_cocycle("k 1\norder 5\na 2 3 1\n").unwrap();
        let offenders = normal_form_offenders(&c);
        assert_eq!(
            offenders,
            vec![Offender {
                part: Part::A,
                k: 2,
                n: 3
            }]
        );
        assert!(!is_normal_form(&c));
    }

    #[test]
    fn scaled_leading_term_is_offender() {
        let c = parse_cocycle("k 1\norder 3\nb 1 1 1\n").unwrap();
        let offenders = normal_form_offenders(&c);
        assert_eq!(
            offenders,
            vec![Offender {
                part: Part::B,
                k: 1,
                n: 1
            }]
        );
    }

    #[test]
    fn window_edges() {
        assert!(!a_window_allows(3, 3));
        assert!(a_window_allows(3, 4));
        assert!(!a_window_allows(4, 4));
        assert!(a_window_allows(6, 7));
        assert!(!a_window_allows(2, 7));
        assert!(b_window_allows(2, 3));
        assert!(!b_window_allows(2, 2));
        assert!(!b_window_allows(7, 7));
        assert!(b_window_allows(6, 7));
    }
}
