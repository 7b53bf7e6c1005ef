use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::algebra::rational::Rational;
use crate::algebra::vars::{same_ring, Ring, VarId};
use crate::error::{Error, Result};

/// Exponent vector; negative entries are only allowed on Laurent variables.
pub type Expo = Vec<i32>;

/// Sparse multivariate polynomial over ℚ, Laurent in designated variables.
///
/// Terms are kept in a `BTreeMap`, so two polynomials are equal iff their
/// term maps are identical; the map's key order is an internal canonical
/// order, independent of the monomial orders used by the Gröbner engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamPoly {
    ring: Ring,
    terms: BTreeMap<Expo, Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl ParamPoly {
    pub fn zero(ring: &Ring) -> Self {
        ParamPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn constant(ring: &Ring, value: Rational) -> Self {
        let mut p = Self::zero(ring);
        if !value.is_zero() {
            p.terms.insert(vec![0; ring.arity()], value);
        }
        p
    }

    pub fn var(ring: &Ring, id: VarId) -> Self {
        Self::var_pow(ring, id, 1).expect("exponent 1 is always valid")
    }

    pub fn var_pow(ring: &Ring, id: VarId, exp: i32) -> Result<Self> {
        let mut expo = vec![0; ring.arity()];
        expo[id] = exp;
        Self::monomial(ring, expo, Rational::one())
    }

    pub fn monomial(ring: &Ring, expo: Expo, coeff: Rational) -> Result<Self> {
        if expo.len() != ring.arity() {
            return Err(Error::domain("exponent vector arity mismatch"));
        }
        for (id, e) in expo.iter().enumerate() {
            if *e < 0 && !ring.is_laurent(id) {
                return Err(Error::domain(format!(
                    "negative exponent on non-Laurent variable `{}`",
                    ring.name(id)
                )));
            }
        }
        let mut p = Self::zero(ring);
        if !coeff.is_zero() {
            p.terms.insert(expo, coeff);
        }
        Ok(p)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The constant value, if the polynomial has no variable dependence.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (expo, c) = self.terms.iter().next().unwrap();
                if expo.iter().all(|e| *e == 0) {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// The single term, if the polynomial is a monomial.
    pub fn as_monomial(&self) -> Option<(&Expo, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// A monomial is a unit iff every variable it involves is Laurent.
    pub fn is_unit_monomial(&self) -> bool {
        match self.as_monomial() {
            Some((expo, _)) => expo
                .iter()
                .enumerate()
                .all(|(id, e)| *e == 0 || self.ring.is_laurent(id)),
            None => false,
        }
    }

    /// Inverse of a unit monomial.
    pub fn invert_unit_monomial(&self) -> Result<Self> {
        if !self.is_unit_monomial() {
            return Err(Error::domain(format!(
                "`{self}` is not an invertible unit monomial"
            )));
        }
        let (expo, c) = self.as_monomial().unwrap();
        let inv: Expo = expo.iter().map(|e| -e).collect();
        Self::monomial(&self.ring, inv, c.recip())
    }

    fn add_term(&mut self, expo: Expo, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(expo) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        same_ring(&self.ring, &other.ring)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        same_ring(&self.ring, &other.ring)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        same_ring(&self.ring, &other.ring)?;
        let mut out = Self::zero(&self.ring);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let expo: Expo = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(expo, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..exp {
            acc = acc.try_mul(self).expect("same ring");
        }
        acc
    }

    /// Power with a possibly negative exponent; a negative exponent requires
    /// the base to be a unit monomial.
    pub fn pow_signed(&self, exp: i32) -> Result<Self> {
        if exp >= 0 {
            Ok(self.pow(exp as u32))
        } else {
            Ok(self.invert_unit_monomial()?.pow((-exp) as u32))
        }
    }

    /// Multiply by `var^exp` (checked against the Laurent mask).
    pub fn mul_var_pow(&self, var: VarId, exp: i32) -> Result<Self> {
        let m = Self::var_pow(&self.ring, var, exp)?;
        self.try_mul(&m)
    }

    /// Exact substitution of polynomials for variables. Unbound variables are
    /// left alone. Bindings for Laurent variables must be unit monomials
    /// whenever the variable occurs with a negative exponent; any binding for
    /// a Laurent variable must itself be invertible.
    pub fn substitute(&self, bindings: &BTreeMap<VarId, ParamPoly>) -> Result<Self> {
        for (var, value) in bindings {
            same_ring(&self.ring, value.ring())?;
            if self.ring.is_laurent(*var) && !value.is_unit_monomial() {
                return Err(Error::domain(format!(
                    "binding for Laurent variable `{}` must be a unit monomial",
                    self.ring.name(*var)
                )));
            }
        }
        let mut out = Self::zero(&self.ring);
        for (expo, coeff) in &self.terms {
            let mut residual = expo.clone();
            let mut factor = Self::constant(&self.ring, coeff.clone());
            for (var, value) in bindings {
                let e = residual[*var];
                if e != 0 {
                    residual[*var] = 0;
                    factor = factor.try_mul(&value.pow_signed(e)?)?;
                }
            }
            let residual_mono = Self::monomial(&self.ring, residual, Rational::one())?;
            out = out.try_add(&factor.try_mul(&residual_mono)?)?;
        }
        Ok(out)
    }

    /// Exact evaluation at a fully rational point. Laurent variables must be
    /// bound to nonzero values and every variable occurring must be bound.
    pub fn eval(&self, point: &BTreeMap<VarId, Rational>) -> Result<Rational> {
        for (var, value) in point {
            if self.ring.is_laurent(*var) && value.is_zero() {
                return Err(Error::domain(format!(
                    "Laurent variable `{}` bound to zero",
                    self.ring.name(*var)
                )));
            }
        }
        let mut total = Rational::zero();
        for (expo, coeff) in &self.terms {
            let mut v = coeff.clone();
            for (id, e) in expo.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let x = point.get(&id).ok_or_else(|| {
                    Error::domain(format!("variable `{}` not bound", self.ring.name(id)))
                })?;
                let p = if *e > 0 {
                    x.pow(*e)
                } else {
                    x.recip().pow(-*e)
                };
                v *= p;
            }
            total += v;
        }
        Ok(total)
    }

    /// Group the terms by the exponent of `var`; the parts have that exponent
    /// cleared, so `p = Σ_e part[e] · var^e`.
    pub fn decompose_by(&self, var: VarId) -> BTreeMap<i32, ParamPoly> {
        let mut out: BTreeMap<i32, ParamPoly> = BTreeMap::new();
        for (expo, coeff) in &self.terms {
            let e = expo[var];
            let mut rest = expo.clone();
            rest[var] = 0;
            out.entry(e)
                .or_insert_with(|| Self::zero(&self.ring))
                .add_term(rest, coeff.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Coefficient (with `var` cleared) of `var^exp`.
    pub fn coeff_of(&self, var: VarId, exp: i32) -> ParamPoly {
        let mut out = Self::zero(&self.ring);
        for (expo, coeff) in &self.terms {
            if expo[var] == exp {
                let mut rest = expo.clone();
                rest[var] = 0;
                out.add_term(rest, coeff.clone());
            }
        }
        out
    }

    pub fn involves(&self, var: VarId) -> bool {
        self.terms.keys().any(|e| e[var] != 0)
    }

    /// Minimum and maximum exponent of `var` over the support.
    pub fn exponent_range(&self, var: VarId) -> Option<(i32, i32)> {
        let mut range: Option<(i32, i32)> = None;
        for e in self.terms.keys() {
            let v = e[var];
            range = Some(match range {
                None => (v, v),
                Some((lo, hi)) => (lo.min(v), hi.max(v)),
            });
        }
        range
    }

    /// Formal partial derivative with respect to `var`.
    pub fn derivative(&self, var: VarId) -> ParamPoly {
        let mut out = Self::zero(&self.ring);
        for (expo, coeff) in &self.terms {
            let e = expo[var];
            if e == 0 {
                continue;
            }
            let mut d = expo.clone();
            d[var] = e - 1;
            out.add_term(d, coeff * Rational::from_integer(e.into()));
        }
        out
    }

    /// Re-express over an extended ring; `map[old]` is the new id.
    pub fn embed(&self, ring: &Ring, map: &[VarId]) -> Result<Self> {
        let mut out = Self::zero(ring);
        for (expo, coeff) in &self.terms {
            let mut new_expo = vec![0; ring.arity()];
            for (old, e) in expo.iter().enumerate() {
                if *e != 0 {
                    new_expo[map[old]] = *e;
                }
            }
            out = out.try_add(&Self::monomial(ring, new_expo, coeff.clone())?)?;
        }
        Ok(out)
    }

    /// Identity embedding into a ring extending this one variable-for-variable.
    pub fn embed_by_name(&self, ring: &Ring) -> Result<Self> {
        let map: Vec<VarId> = (0..self.ring.arity())
            .map(|id| {
                ring.id_of(self.ring.name(id)).ok_or_else(|| {
                    Error::domain(format!("variable `{}` missing in target ring", self.ring.name(id)))
                })
            })
            .collect::<Result<_>>()?;
        self.embed(ring, &map)
    }

    /// Project into a smaller ring; variables being dropped must not occur.
    pub fn project(&self, ring: &Ring, map: &[Option<VarId>]) -> Result<Self> {
        let mut out = Self::zero(ring);
        for (expo, coeff) in &self.terms {
            let mut new_expo = vec![0; ring.arity()];
            for (old, e) in expo.iter().enumerate() {
                if *e != 0 {
                    match map[old] {
                        Some(new) => new_expo[new] = *e,
                        None => {
                            return Err(Error::domain(format!(
                                "cannot project: variable `{}` occurs",
                                self.ring.name(old)
                            )))
                        }
                    }
                }
            }
            out = out.try_add(&Self::monomial(ring, new_expo, coeff.clone())?)?;
        }
        Ok(out)
    }
}

/// Spec-level arithmetic entry point with explicit error reporting.
pub fn poly_arith(p: &ParamPoly, q: &ParamPoly, op: ArithOp) -> Result<ParamPoly> {
    match op {
        ArithOp::Add => p.try_add(q),
        ArithOp::Sub => p.try_sub(q),
        ArithOp::Mul => p.try_mul(q),
    }
}

/// Exact substitution (spec-level name for [`ParamPoly::substitute`]).
pub fn poly_substitute(p: &ParamPoly, bindings: &BTreeMap<VarId, ParamPoly>) -> Result<ParamPoly> {
    p.substitute(bindings)
}

/// Exact evaluation (spec-level name for [`ParamPoly::eval`]).
pub fn poly_eval(p: &ParamPoly, point: &BTreeMap<VarId, Rational>) -> Result<Rational> {
    p.eval(point)
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        self.try_add(rhs).expect("ring mismatch in +")
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        self.try_sub(rhs).expect("ring mismatch in -")
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        self.try_mul(rhs).expect("ring mismatch in *")
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // Descending canonical key order reads naturally (x^2 before x).
        for (expo, coeff) in self.terms.iter().rev() {
            let negative = coeff.is_negative();
            let abs = coeff.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
                first = false;
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || expo.iter().all(|e| *e == 0) {
                factors.push(abs.to_string());
            }
            for (id, e) in expo.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                if *e == 1 {
                    factors.push(self.ring.name(id).to_owned());
                } else {
                    factors.push(format!("{}^{}", self.ring.name(id), e));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
