use std::collections::BTreeMap;

use num_traits::One;

use crate::algebra::{binomial_int, same_ring, ParamPoly, Rational, Ring, VarId};
use crate::cancel::CancelToken;
use crate::error::{Error, Result};
use crate::series::series::{JetSeries, TransversalSeries};

/// Leading behaviour of a map's x-component on the curve: `x` or `1/x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XBase {
    Identity,
    Inversion,
}

impl XBase {
    pub fn exponent(self) -> i32 {
        match self {
            XBase::Identity => 1,
            XBase::Inversion => -1,
        }
    }

    /// Base of `outer ∘ inner`.
    pub fn compose(outer: XBase, inner: XBase) -> XBase {
        if outer == inner {
            XBase::Identity
        } else {
            XBase::Inversion
        }
    }
}

/// Hard caps applied while composing maps; they guard against exponent
/// blowup bugs rather than encoding any mathematical constraint.
#[derive(Debug, Clone, Copy)]
pub struct CompositionLimits {
    pub max_abs_x_exponent: i64,
}

impl Default for CompositionLimits {
    fn default() -> Self {
        CompositionLimits {
            max_abs_x_exponent: 64,
        }
    }
}

/// A formal map `(x, y) ↦ (base(x) + Σ a_n(x) y^n, Σ b_n(x) y^n)` preserving
/// the curve `{y = 0}` and transverse to it: the leading y-coefficient
/// `b_1(x)` is a unit times a monomial in `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransversalMap {
    base: XBase,
    x_tail: TransversalSeries,
    y_part: TransversalSeries,
}

impl TransversalMap {
    pub fn new(base: XBase, x_tail: TransversalSeries, y_part: TransversalSeries) -> Result<Self> {
        same_ring(x_tail.ring(), y_part.ring())?;
        if x_tail.order() != y_part.order() {
            return Err(Error::domain("x-tail and y-part truncation orders differ"));
        }
        if x_tail.x_var() != y_part.x_var() {
            return Err(Error::domain("x-tail and y-part disagree on the x variable"));
        }
        if !y_part.coeff(1).is_unit_monomial() {
            return Err(Error::domain(format!(
                "leading y-coefficient `{}` is not a unit monomial",
                y_part.coeff(1)
            )));
        }
        Ok(TransversalMap {
            base,
            x_tail,
            y_part,
        })
    }

    /// The identity map at a given truncation order.
    pub fn identity(ring: &Ring, x: VarId, order: usize) -> Self {
        let mut y_part = TransversalSeries::zero(ring, x, order);
        y_part.set_coeff(1, ParamPoly::one(ring));
        TransversalMap {
            base: XBase::Identity,
            x_tail: TransversalSeries::zero(ring, x, order),
            y_part,
        }
    }

    pub fn base(&self) -> XBase {
        self.base
    }

    pub fn x_tail(&self) -> &TransversalSeries {
        &self.x_tail
    }

    pub fn y_part(&self) -> &TransversalSeries {
        &self.y_part
    }

    pub fn ring(&self) -> &Ring {
        self.x_tail.ring()
    }

    pub fn x_var(&self) -> VarId {
        self.x_tail.x_var()
    }

    pub fn order(&self) -> usize {
        self.x_tail.order()
    }

    pub fn truncate(&self, order: usize) -> Self {
        TransversalMap {
            base: self.base,
            x_tail: self.x_tail.truncate(order),
            y_part: self.y_part.truncate(order),
        }
    }

    pub fn embed_by_name(&self, ring: &Ring) -> Result<Self> {
        Ok(TransversalMap {
            base: self.base,
            x_tail: self.x_tail.embed_by_name(ring)?,
            y_part: self.y_part.embed_by_name(ring)?,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.base == XBase::Identity
            && self.x_tail.is_zero()
            && self.y_part.coeff(1).as_constant().map(|c| c.is_one()) == Some(true)
            && (2..=self.order()).all(|n| self.y_part.coeff(n).is_zero())
    }

    pub(crate) fn with_parts(base: XBase, x_tail: TransversalSeries, y_part: TransversalSeries) -> Self {
        TransversalMap {
            base,
            x_tail,
            y_part,
        }
    }
}

/// The monomial `base(x)` as a polynomial.
fn base_monomial(ring: &Ring, x: VarId, base: XBase) -> ParamPoly {
    ParamPoly::var_pow(ring, x, base.exponent()).expect("x is Laurent")
}

/// Evaluate a monomial `u · x^p` at `base(x)`, i.e. substitute `x ↦ x^{±1}`.
fn monomial_at_base(p: &ParamPoly, x: VarId, base: XBase) -> ParamPoly {
    match base {
        XBase::Identity => p.clone(),
        XBase::Inversion => {
            let mut out = ParamPoly::zero(p.ring());
            for (expo, coeff) in p.terms() {
                let mut e = expo.clone();
                e[x] = -e[x];
                out = out
                    .try_add(&ParamPoly::monomial(p.ring(), e, coeff.clone()).expect("laurent x"))
                    .expect("same ring");
            }
            out
        }
    }
}

struct ComposeCtx<'a> {
    limits: CompositionLimits,
    cancel: Option<&'a CancelToken>,
}

impl ComposeCtx<'_> {
    fn check_cancel(&self) -> Result<()> {
        match self.cancel {
            Some(token) => token.check(),
            None => Ok(()),
        }
    }

    fn check_series(&self, s: &TransversalSeries) -> Result<()> {
        let m = s.max_abs_x_exponent();
        if m > self.limits.max_abs_x_exponent {
            return Err(Error::ExponentCap {
                exponent: m,
                cap: self.limits.max_abs_x_exponent,
            });
        }
        Ok(())
    }
}

/// Powers `X^j` of the inner map's x-image `X = base(x) + tail`, as jets.
struct XImagePowers<'a> {
    ring: Ring,
    x: VarId,
    base: XBase,
    /// tail · base(x)^{-1}, the relative correction entering the binomial
    /// expansion; powers are cached incrementally.
    rel_powers: Vec<TransversalSeries>,
    cache: BTreeMap<i32, JetSeries>,
    ctx: &'a ComposeCtx<'a>,
}

impl<'a> XImagePowers<'a> {
    fn new(base: XBase, tail: &TransversalSeries, ctx: &'a ComposeCtx<'a>) -> Result<Self> {
        let ring = tail.ring().clone();
        let x = tail.x_var();
        let base_inv = ParamPoly::var_pow(&ring, x, -base.exponent())?;
        let rel = tail.scale_poly(&base_inv)?;
        Ok(XImagePowers {
            ring,
            x,
            base,
            rel_powers: vec![rel],
            cache: BTreeMap::new(),
            ctx,
        })
    }

    fn rel_power(&mut self, m: usize) -> Result<TransversalSeries> {
        while self.rel_powers.len() < m {
            let next = self.rel_powers[self.rel_powers.len() - 1].mul(&self.rel_powers[0])?;
            self.ctx.check_series(&next)?;
            self.rel_powers.push(next);
        }
        Ok(self.rel_powers[m - 1].clone())
    }

    /// `X^j = base(x)^j · Σ_m C(j, m) (tail/base)^m`, truncated in y.
    fn power(&mut self, j: i32) -> Result<JetSeries> {
        if let Some(jet) = self.cache.get(&j) {
            return Ok(jet.clone());
        }
        let order = self.rel_powers[0].order();
        let mut tail = TransversalSeries::zero(&self.ring, self.x, order);
        for m in 1..=order {
            let c = binomial_int(j as i64, m as u32);
            if num_traits::Zero::is_zero(&c) {
                continue;
            }
            let p = self.rel_power(m)?;
            tail = tail.add(&p.scale(&c))?;
        }
        let lead_exp = self.base.exponent().checked_mul(j).ok_or(Error::ExponentCap {
            exponent: i64::from(j) * 2,
            cap: self.ctx.limits.max_abs_x_exponent,
        })?;
        if i64::from(lead_exp.abs()) > self.ctx.limits.max_abs_x_exponent {
            return Err(Error::ExponentCap {
                exponent: i64::from(lead_exp),
                cap: self.ctx.limits.max_abs_x_exponent,
            });
        }
        let lead = ParamPoly::var_pow(&self.ring, self.x, lead_exp)?;
        let jet = JetSeries {
            c0: lead.clone(),
            tail: tail.scale_poly(&lead)?,
        };
        self.ctx.check_series(&jet.tail)?;
        self.cache.insert(j, jet.clone());
        Ok(jet)
    }

    /// Evaluate a Laurent-in-x coefficient polynomial at `X`.
    fn eval(&mut self, coeff: &ParamPoly) -> Result<JetSeries> {
        let order = self.rel_powers[0].order();
        let mut acc = JetSeries::constant(&self.ring, self.x, order, ParamPoly::zero(&self.ring));
        for (j, part) in coeff.decompose_by(self.x) {
            self.ctx.check_cancel()?;
            let jet = self.power(j)?;
            acc = acc.add(&jet.scale_poly(&part)?)?;
        }
        Ok(acc)
    }
}

/// Composite `outer ∘ inner` truncated at y-order `order`, with exact
/// coefficients.
pub fn map_compose(outer: &TransversalMap, inner: &TransversalMap, order: usize) -> Result<TransversalMap> {
    map_compose_with(outer, inner, order, CompositionLimits::default(), None)
}

pub fn map_compose_with(
    outer: &TransversalMap,
    inner: &TransversalMap,
    order: usize,
    limits: CompositionLimits,
    cancel: Option<&CancelToken>,
) -> Result<TransversalMap> {
    same_ring(outer.ring(), inner.ring())?;
    if outer.x_var() != inner.x_var() {
        return Err(Error::domain("maps disagree on the x variable"));
    }
    if outer.order() < order || inner.order() < order {
        return Err(Error::domain(format!(
            "composition at order {order} needs both maps truncated at least there (got {}, {})",
            outer.order(),
            inner.order()
        )));
    }
    let ring = outer.ring().clone();
    let x = outer.x_var();
    let ctx = ComposeCtx { limits, cancel };

    let inner_x_tail = inner.x_tail().truncate(order);
    let inner_y = inner.y_part().truncate(order);
    let mut xpows = XImagePowers::new(inner.base(), &inner_x_tail, &ctx)?;

    // Powers of the inner y-image.
    let mut ypows: Vec<TransversalSeries> = Vec::with_capacity(order);
    ypows.push(inner_y.clone());
    for n in 2..=order {
        let next = ypows[n - 2].mul(&inner_y)?;
        ctx.check_series(&next)?;
        ypows.push(next);
    }

    let result_base = XBase::compose(outer.base(), inner.base());

    // x-part: base_outer(X) + Σ_n a_n(X) · Y^n.
    let base_jet = xpows.power(outer.base().exponent())?;
    debug_assert_eq!(base_jet.c0, base_monomial(&ring, x, result_base));
    let mut x_tail = base_jet.tail;
    for n in 1..=order {
        ctx.check_cancel()?;
        let a_n = outer.x_tail().coeff(n);
        if a_n.is_zero() {
            continue;
        }
        let jet = xpows.eval(a_n)?;
        x_tail = x_tail.add(&jet.mul_series(&ypows[n - 1])?)?;
    }

    // y-part: Σ_n b_n(X) · Y^n.
    let mut y_part = TransversalSeries::zero(&ring, x, order);
    for n in 1..=order {
        ctx.check_cancel()?;
        let b_n = outer.y_part().coeff(n);
        if b_n.is_zero() {
            continue;
        }
        let jet = xpows.eval(b_n)?;
        y_part = y_part.add(&jet.mul_series(&ypows[n - 1])?)?;
    }

    ctx.check_series(&x_tail)?;
    ctx.check_series(&y_part)?;
    TransversalMap::new(result_base, x_tail, y_part)
}

/// Two-sided inverse of a transversal map at the given truncation order.
pub fn map_invert(m: &TransversalMap, order: usize) -> Result<TransversalMap> {
    if m.order() < order {
        return Err(Error::domain(format!(
            "inversion at order {order} needs the map truncated at least there (got {})",
            m.order()
        )));
    }
    let ring = m.ring().clone();
    let x = m.x_var();
    let b1 = m.y_part().coeff(1);
    if !b1.is_unit_monomial() {
        return Err(Error::domain(format!(
            "leading y-coefficient `{b1}` is not invertible"
        )));
    }

    // Seed with the inverse of the leading part. The inverse has the same
    // base: bases are involutive under composition.
    let base = m.base();
    let b1_at_base = monomial_at_base(b1, x, base);
    let mut y_part = TransversalSeries::zero(&ring, x, order);
    y_part.set_coeff(1, b1_at_base.invert_unit_monomial()?);
    let mut inv = TransversalMap::with_parts(base, TransversalSeries::zero(&ring, x, order), y_part);

    // d(base_m)/dX evaluated at the inverse's base: the unit monomial by
    // which an x-tail correction of the inverse shows up in the composite.
    let dbase = match m.base() {
        XBase::Identity => ParamPoly::one(&ring),
        XBase::Inversion => {
            // -X^{-2} at X = base(x)
            monomial_at_base(&ParamPoly::var_pow(&ring, x, -2)?, x, base).scale(&-Rational::one())
        }
    };
    let dbase_inv = dbase.invert_unit_monomial()?;
    let b1_inv = b1_at_base.invert_unit_monomial()?;

    for n in 1..=order {
        // Fix the y-part error at order n, then the x-part error.
        let composite = map_compose(m, &inv, n)?;
        let mut ey = composite.y_part().coeff(n).clone();
        if n == 1 {
            ey = ey.try_sub(&ParamPoly::one(&ring))?;
        }
        if !ey.is_zero() {
            let delta = ey.try_mul(&b1_inv)?;
            let updated = inv.y_part().coeff(n).try_sub(&delta)?;
            let mut yp = inv.y_part().clone();
            yp.set_coeff(n, updated);
            inv = TransversalMap::with_parts(inv.base(), inv.x_tail().clone(), yp);
        }
        let composite = map_compose(m, &inv, n)?;
        let ex = composite.x_tail().coeff(n).clone();
        if !ex.is_zero() {
            let delta = ex.try_mul(&dbase_inv)?;
            let updated = inv.x_tail().coeff(n).try_sub(&delta)?;
            let mut xt = inv.x_tail().clone();
            xt.set_coeff(n, updated);
            inv = TransversalMap::with_parts(inv.base(), xt, inv.y_part().clone());
        }
    }

    let check = map_compose(m, &inv, order)?;
    if !check.is_identity() {
        return Err(Error::domain(
            "map inversion failed to converge (engine defect)".to_string(),
        ));
    }
    let check = map_compose(&inv, m, order)?;
    if !check.is_identity() {
        return Err(Error::domain(
            "map inversion is not two-sided (engine defect)".to_string(),
        ));
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, rat, VarTable};

    fn ring() -> (Ring, VarId) {
        (VarTable::new(&[("x", true)]).unwrap(), 0)
    }

    fn series_from(ring: &Ring, x: VarId, order: usize, entries: &[(usize, &str)]) -> TransversalSeries {
        let mut s = TransversalSeries::zero(ring, x, order);
        for (n, src) in entries {
            s.set_coeff(*n, parse_poly(ring, src).unwrap());
        }
        s
    }

    /// The linear self-intersection-one cocycle (1/x, y/x).
    fn p2_cocycle(ring: &Ring, x: VarId, order: usize) -> TransversalMap {
        TransversalMap::new(
            XBase::Inversion,
            TransversalSeries::zero(ring, x, order),
            series_from(ring, x, order, &[(1, "x^-1")]),
        )
        .unwrap()
    }

    #[test]
    fn identity_composes_trivially() {
        let (r, x) = ring();
        let phi = TransversalMap::new(
            XBase::Inversion,
            series_from(&r, x, 6, &[(5, "x^-3")]),
            series_from(&r, x, 6, &[(1, "x^-1"), (3, "2*x^-2")]),
        )
        .unwrap();
        let id = TransversalMap::identity(&r, x, 6);
        assert_eq!(map_compose(&id, &phi, 6).unwrap(), phi);
        assert_eq!(map_compose(&phi, &id, 6).unwrap(), phi);
    }

    #[test]
    fn p2_cocycle_squares_to_identity() {
        let (r, x) = ring();
        let phi = p2_cocycle(&r, x, 7);
        let square = map_compose(&phi, &phi, 7).unwrap();
        assert!(square.is_identity());
    }

    #[test]
    fn invert_identity_and_scalings() {
        let (r, x) = ring();
        let id = TransversalMap::identity(&r, x, 5);
        assert_eq!(map_invert(&id, 5).unwrap(), id);

        // (x, 2y) inverts to (x, y/2)
        let mut yp = TransversalSeries::zero(&r, x, 5);
        yp.set_coeff(1, ParamPoly::constant(&r, rat(2, 1)));
        let scaling = TransversalMap::new(XBase::Identity, TransversalSeries::zero(&r, x, 5), yp).unwrap();
        let inv = map_invert(&scaling, 5).unwrap();
        assert_eq!(inv.y_part().coeff(1).as_constant().unwrap(), rat(1, 2));
        assert!(inv.x_tail().is_zero());
    }

    #[test]
    fn invert_shear() {
        let (r, x) = ring();
        // (x + y, y) inverts to (x - y, y)
        let shear = TransversalMap::new(
            XBase::Identity,
            series_from(&r, x, 5, &[(1, "1")]),
            series_from(&r, x, 5, &[(1, "1")]),
        )
        .unwrap();
        let inv = map_invert(&shear, 5).unwrap();
        assert_eq!(inv.x_tail().coeff(1).as_constant().unwrap(), rat(-1, 1));
        for n in 2..=5 {
            assert!(inv.x_tail().coeff(n).is_zero());
        }
    }

    #[test]
    fn compose_is_associative() {
        let (r, x) = ring();
        let f = TransversalMap::new(
            XBase::Inversion,
            series_from(&r, x, 6, &[(2, "x^-1 - 3*x"), (5, "x^-3")]),
            series_from(&r, x, 6, &[(1, "2*x^-1"), (3, "x^-2 + x")]),
        )
        .unwrap();
        let g = TransversalMap::new(
            XBase::Identity,
            series_from(&r, x, 6, &[(1, "x^2"), (4, "-7")]),
            series_from(&r, x, 6, &[(1, "3"), (2, "x - 1")]),
        )
        .unwrap();
        let h = TransversalMap::new(
            XBase::Inversion,
            series_from(&r, x, 6, &[(3, "5*x^-2")]),
            series_from(&r, x, 6, &[(1, "x^-2"), (2, "x^-1")]),
        )
        .unwrap();
        let left = map_compose(&map_compose(&f, &g, 6).unwrap(), &h, 6).unwrap();
        let right = map_compose(&f, &map_compose(&g, &h, 6).unwrap(), 6).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn truncation_coherence() {
        let (r, x) = ring();
        let f = TransversalMap::new(
            XBase::Inversion,
            series_from(&r, x, 7, &[(1, "x^-1"), (4, "x^-3 + 2*x^-1")]),
            series_from(&r, x, 7, &[(1, "x^-1"), (2, "x^-2")]),
        )
        .unwrap();
        let g = TransversalMap::new(
            XBase::Identity,
            series_from(&r, x, 7, &[(2, "x")]),
            series_from(&r, x, 7, &[(1, "1"), (3, "x^2 - x^-1")]),
        )
        .unwrap();
        let full = map_compose(&f, &g, 7).unwrap();
        for m in 1..=6 {
            let direct = map_compose(&f, &g, m).unwrap();
            assert_eq!(full.truncate(m), direct, "order {m}");
        }
    }

    #[test]
    fn exponent_cap_guards_blowup() {
        let (r, x) = ring();
        let f = TransversalMap::new(
            XBase::Inversion,
            series_from(&r, x, 7, &[(1, "x^-60")]),
            series_from(&r, x, 7, &[(1, "x^-1")]),
        )
        .unwrap();
        let g = TransversalMap::new(
            XBase::Identity,
            series_from(&r, x, 7, &[(1, "x^40")]),
            series_from(&r, x, 7, &[(1, "1")]),
        )
        .unwrap();
        match map_compose(&f, &g, 7) {
            Err(Error::ExponentCap { .. }) => {}
            other => panic!("expected exponent-cap error, got {other:?}"),
        }
    }

    #[test]
    fn cancellation_interrupts() {
        let (r, x) = ring();
        let f = p2_cocycle(&r, x, 6);
        let token = CancelToken::new();
        token.cancel();
        match map_compose_with(&f, &f, 6, CompositionLimits::default(), Some(&token)) {
            Err(Error::Cancelled) => {}
            other => panic!("expected cancellation, got {other:?}"),
        }
    }
}
