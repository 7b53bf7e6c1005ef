use crate::algebra::{nth_root_exact, ParamPoly, Rational, Ring, VarId};
use crate::error::{Error, Result};
use crate::series::map::{TransversalMap, XBase};
use crate::series::series::{series_root, TransversalSeries};

/// The gluing map of a germ `(U, C)`: a transversal map with inverted base
/// whose leading y-coefficient is a unit times `x^{-k}`, `k = C²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    map: TransversalMap,
    self_intersection: u32,
}

impl Cocycle {
    pub fn new(map: TransversalMap, self_intersection: u32) -> Result<Self> {
        if self_intersection < 1 {
            return Err(Error::domain("self-intersection must be at least 1"));
        }
        if map.base() != XBase::Inversion {
            return Err(Error::domain("a cocycle's x-component must lead with 1/x"));
        }
        let x = map.x_var();
        let c1 = map.y_part().coeff(1);
        match c1.as_monomial() {
            Some((expo, _)) if expo[x] == -(self_intersection as i32) && c1.is_unit_monomial() => {}
            _ => {
                return Err(Error::domain(format!(
                    "leading y-coefficient `{c1}` is not a unit times x^-{self_intersection}"
                )))
            }
        }
        Ok(Cocycle {
            map,
            self_intersection,
        })
    }

    pub fn map(&self) -> &TransversalMap {
        &self.map
    }

    pub fn self_intersection(&self) -> u32 {
        self.self_intersection
    }

    pub fn order(&self) -> usize {
        self.map.order()
    }

    pub fn ring(&self) -> &Ring {
        self.map.ring()
    }

    pub fn x_var(&self) -> VarId {
        self.map.x_var()
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        Cocycle::new(self.map.truncate(order), self.self_intersection)
    }

    pub fn embed_by_name(&self, ring: &Ring) -> Result<Self> {
        Cocycle::new(self.map.embed_by_name(ring)?, self.self_intersection)
    }

    /// Coefficient of `x^{-k} y^n` in the x-part tail.
    pub fn a_coeff(&self, k: i64, n: usize) -> ParamPoly {
        if n > self.order() {
            return ParamPoly::zero(self.ring());
        }
        self.map
            .x_tail()
            .coeff(n)
            .coeff_of(self.x_var(), -(k as i32))
    }

    /// Coefficient of `x^{-k} y^n` in the y-part (including the leading term).
    pub fn b_coeff(&self, k: i64, n: usize) -> ParamPoly {
        if n > self.order() {
            return ParamPoly::zero(self.ring());
        }
        self.map
            .y_part()
            .coeff(n)
            .coeff_of(self.x_var(), -(k as i32))
    }
}

/// Which chart a change of trivialisation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ChartSide {
    Zero,
    Infinity,
}

impl std::fmt::Display for ChartSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChartSide::Zero => write!(f, "0"),
            ChartSide::Infinity => write!(f, "inf"),
        }
    }
}

/// A chart change fixing the curve pointwise: base is the identity and the
/// leading y-coefficient is a unit constant (no x-dependence).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartChange {
    side: ChartSide,
    map: TransversalMap,
}

impl ChartChange {
    pub fn new(side: ChartSide, map: TransversalMap) -> Result<Self> {
        if map.base() != XBase::Identity {
            return Err(Error::domain("a chart change must fix x to first order"));
        }
        let x = map.x_var();
        let c1 = map.y_part().coeff(1);
        let ok = match c1.as_monomial() {
            Some((expo, _)) => expo[x] == 0 && c1.is_unit_monomial(),
            None => false,
        };
        if !ok {
            return Err(Error::domain(format!(
                "leading y-coefficient `{c1}` of a chart change must be a unit constant"
            )));
        }
        Ok(ChartChange { side, map })
    }

    pub fn identity(side: ChartSide, ring: &Ring, x: VarId, order: usize) -> Self {
        ChartChange {
            side,
            map: TransversalMap::identity(ring, x, order),
        }
    }

    pub fn side(&self) -> ChartSide {
        self.side
    }

    pub fn map(&self) -> &TransversalMap {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_identity()
    }
}

/// Exact k-th root of a unit monomial, if it exists in the ring.
fn unit_monomial_root(p: &ParamPoly, k: u32) -> Result<ParamPoly> {
    let (expo, coeff) = p
        .as_monomial()
        .ok_or_else(|| Error::domain(format!("`{p}` is not a monomial")))?;
    let root_coeff = nth_root_exact(coeff, k).ok_or_else(|| {
        Error::domain(format!("unit `{coeff}` has no exact rational {k}-th root"))
    })?;
    let mut root_expo = expo.clone();
    for e in &mut root_expo {
        if *e % (k as i32) != 0 {
            return Err(Error::domain(format!(
                "monomial `{p}` is not a {k}-th power"
            )));
        }
        *e /= k as i32;
    }
    ParamPoly::monomial(p.ring(), root_expo, root_coeff)
}

/// The cyclic k-fold cover ramified over the curve: substitute `y = t^k` in
/// both charts and extract the k-th root of the y-component. The result is a
/// cocycle with self-intersection 1 in the transversal coordinate `t`.
pub fn cyclic_cover(c: &Cocycle, order: usize) -> Result<Cocycle> {
    let k = c.self_intersection();
    if k < 2 {
        return Err(Error::domain("cyclic cover requires self-intersection at least 2"));
    }
    let needed = order.div_ceil(k as usize);
    if c.order() < needed {
        return Err(Error::domain(format!(
            "cover at order {order} needs the input truncated at order {needed} or more (got {})",
            c.order()
        )));
    }
    let ring = c.ring().clone();
    let x = c.x_var();

    // x-part: y = t^k stretches each coefficient slot.
    let x_tail = c.map().x_tail().stretch(k as usize, order);

    // y-part: b_1 t^k (1 + Σ_{n≥2} (b_n/b_1) t^{k(n-1)}); root of the unit
    // monomial b_1 and the binomial series of the parenthesis.
    let b1 = c.map().y_part().coeff(1);
    let b1_inv = b1.invert_unit_monomial()?;
    let lead_root = unit_monomial_root(b1, k)?;
    let mut rel = TransversalSeries::zero(&ring, x, order);
    for n in 2..=c.order() {
        let slot = (k as usize) * (n - 1);
        if slot > order {
            break;
        }
        let q = c.map().y_part().coeff(n).try_mul(&b1_inv)?;
        if !q.is_zero() {
            rel.set_coeff(slot, q);
        }
    }
    let root = series_root(&rel, k, order)?;
    // t-part = lead_root · t · (1 + root)
    let mut y_part = TransversalSeries::zero(&ring, x, order);
    y_part.set_coeff(1, lead_root.clone());
    for j in 1..order {
        let v = root.coeff(j).try_mul(&lead_root)?;
        if !v.is_zero() {
            y_part.set_coeff(j + 1, v);
        }
    }

    let map = TransversalMap::new(XBase::Inversion, x_tail, y_part)?;
    Cocycle::new(map, 1)
}

/// Deck-symmetry support check for a k-fold cover: conjugating by
/// `(x, t) ↦ (x, ζ t)` with `ζ^k = 1` must fix the cocycle, which holds iff
/// x-part slots are ≡ 0 and y-part slots ≡ 1 modulo k.
pub fn deck_symmetric(c: &Cocycle, k: u32) -> bool {
    let k = k as usize;
    for n in 1..=c.order() {
        if n % k != 0 && !c.map().x_tail().coeff(n).is_zero() {
            return false;
        }
        if n % k != 1 % k && !c.map().y_part().coeff(n).is_zero() {
            return false;
        }
    }
    true
}

/// Scale the transversal coordinate: the conjugation `σ^{-1} ∘ Φ ∘ σ` with
/// `σ(x, t) = (x, ζ t)`.
pub fn conjugate_transversal_scaling(c: &Cocycle, zeta: &Rational) -> Result<Cocycle> {
    if zeta == &Rational::from_integer(0.into()) {
        return Err(Error::domain("scaling must be a unit"));
    }
    let mut x_tail = c.map().x_tail().clone();
    let mut y_part = c.map().y_part().clone();
    let mut zp = zeta.clone();
    for n in 1..=c.order() {
        x_tail.set_coeff(n, x_tail.coeff(n).scale(&zp));
        y_part.set_coeff(n, y_part.coeff(n).scale(&(zp.clone() / zeta)));
        zp *= zeta;
    }
    Cocycle::new(
        TransversalMap::new(XBase::Inversion, x_tail, y_part)?,
        c.self_intersection(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, rat, VarTable};

    fn ring() -> (Ring, VarId) {
        (VarTable::new(&[("x", true)]).unwrap(), 0)
    }

    fn cocycle_from(
        ring: &Ring,
        x: VarId,
        order: usize,
        k: u32,
        a: &[(usize, &str)],
        b: &[(usize, &str)],
    ) -> Cocycle {
        let mut x_tail = TransversalSeries::zero(ring, x, order);
        for (n, src) in a {
            x_tail.set_coeff(*n, parse_poly(ring, src).unwrap());
        }
        let mut y_part = TransversalSeries::zero(ring, x, order);
        for (n, src) in b {
            y_part.set_coeff(*n, parse_poly(ring, src).unwrap());
        }
        Cocycle::new(
            TransversalMap::new(XBase::Inversion, x_tail, y_part).unwrap(),
            k,
        )
        .unwrap()
    }

    #[test]
    fn validates_leading_term() {
        let (r, x) = ring();
        // y-part x^-2 with recorded k = 1 must be rejected.
        let mut y_part = TransversalSeries::zero(&r, x, 4);
        y_part.set_coeff(1, parse_poly(&r, "x^-2").unwrap());
        let map = TransversalMap::new(XBase::Inversion, TransversalSeries::zero(&r, x, 4), y_part)
            .unwrap();
        assert!(Cocycle::new(map.clone(), 1).is_err());
        assert!(Cocycle::new(map, 2).is_ok());
    }

    #[test]
    fn monomial_cover_k2() {
        let (r, x) = ring();
        let c = cocycle_from(&r, x, 4, 2, &[], &[(1, "x^-2")]);
        let cover = cyclic_cover(&c, 8).unwrap();
        assert_eq!(cover.self_intersection(), 1);
        assert_eq!(cover.map().y_part().coeff(1), &parse_poly(&r, "x^-1").unwrap());
        for n in 2..=8 {
            assert!(cover.map().y_part().coeff(n).is_zero());
        }
        assert!(cover.map().x_tail().is_zero());
    }

    #[test]
    fn monomial_cover_k3() {
        let (r, x) = ring();
        let c = cocycle_from(&r, x, 4, 3, &[], &[(1, "x^-3")]);
        let cover = cyclic_cover(&c, 6).unwrap();
        assert_eq!(cover.map().y_part().coeff(1), &parse_poly(&r, "x^-1").unwrap());
        for n in 2..=6 {
            assert!(cover.map().y_part().coeff(n).is_zero());
        }
    }

    #[test]
    fn cover_rejects_non_power_unit() {
        let (r, x) = ring();
        let c = cocycle_from(&r, x, 4, 2, &[], &[(1, "2*x^-2")]);
        assert!(cyclic_cover(&c, 4).is_err());
    }

    #[test]
    fn deck_symmetry_of_covers() {
        let (r, x) = ring();
        let c = cocycle_from(&r, x, 4, 2, &[(2, "x^-1")], &[(1, "x^-2"), (3, "x^-4")]);
        let cover = cyclic_cover(&c, 7).unwrap();
        assert!(deck_symmetric(&cover, 2));
        // The explicit deck conjugation t ↦ -t fixes the cover.
        let conj = conjugate_transversal_scaling(&cover, &rat(-1, 1)).unwrap();
        assert_eq!(conj, cover);
    }
}
