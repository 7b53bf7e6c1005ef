use crate::algebra::{binomial_rational, rat, ParamPoly, Ring, VarId};
use crate::error::{Error, Result};

/// Truncated formal series `Σ_{n=1..order} c_n(x) y^n` whose coefficients are
/// Laurent polynomials in the curve coordinate `x` (possibly with symbolic
/// parameters).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransversalSeries {
    ring: Ring,
    x: VarId,
    coeffs: Vec<ParamPoly>,
}

impl TransversalSeries {
    pub fn zero(ring: &Ring, x: VarId, order: usize) -> Self {
        TransversalSeries {
            ring: ring.clone(),
            x,
            coeffs: vec![ParamPoly::zero(ring); order],
        }
    }

    pub fn from_coeffs(ring: &Ring, x: VarId, coeffs: Vec<ParamPoly>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::domain("series order must be at least 1"));
        }
        for c in &coeffs {
            crate::algebra::same_ring(ring, c.ring())?;
        }
        Ok(TransversalSeries {
            ring: ring.clone(),
            x,
            coeffs,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn x_var(&self) -> VarId {
        self.x
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `y^n` (1-based, up to the truncation order).
    pub fn coeff(&self, n: usize) -> &ParamPoly {
        &self.coeffs[n - 1]
    }

    pub fn set_coeff(&mut self, n: usize, value: ParamPoly) {
        self.coeffs[n - 1] = value;
    }

    pub fn coeffs(&self) -> &[ParamPoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut out = self.clone();
        out.coeffs.truncate(order);
        out
    }

    /// Pad with zero coefficients up to `order`.
    pub fn extend_to(&self, order: usize) -> Self {
        let mut out = self.clone();
        while out.coeffs.len() < order {
            out.coeffs.push(ParamPoly::zero(&self.ring));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let order = self.order().min(other.order());
        let mut out = self.truncate(order);
        for n in 1..=order {
            out.coeffs[n - 1] = out.coeffs[n - 1].try_add(other.coeff(n))?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let order = self.order().min(other.order());
        let mut out = self.truncate(order);
        for n in 1..=order {
            out.coeffs[n - 1] = out.coeffs[n - 1].try_sub(other.coeff(n))?;
        }
        Ok(out)
    }

    /// Truncated product; both factors vanish at y = 0, so the result starts
    /// at y^2.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let order = self.order().min(other.order());
        let mut out = Self::zero(&self.ring, self.x, order);
        for i in 1..=order {
            if self.coeff(i).is_zero() {
                continue;
            }
            for j in 1..=order - i {
                if other.coeff(j).is_zero() {
                    continue;
                }
                let prod = self.coeff(i).try_mul(other.coeff(j))?;
                out.coeffs[i + j - 1] = out.coeffs[i + j - 1].try_add(&prod)?;
            }
        }
        Ok(out)
    }

    /// Multiply every coefficient by a polynomial.
    pub fn scale_poly(&self, p: &ParamPoly) -> Result<Self> {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = c.try_mul(p)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &crate::algebra::Rational) -> Self {
        let mut out = self.clone();
        for p in &mut out.coeffs {
            *p = p.scale(c);
        }
        out
    }

    /// Substitute `y = t^k`: coefficient of `y^n` moves to `t^{kn}`.
    pub fn stretch(&self, k: usize, order: usize) -> Self {
        let mut out = Self::zero(&self.ring, self.x, order);
        for n in 1..=self.order() {
            if k * n <= order && !self.coeff(n).is_zero() {
                out.coeffs[k * n - 1] = self.coeff(n).clone();
            }
        }
        out
    }

    /// Re-express over a ring extending this one variable-for-variable.
    pub fn embed_by_name(&self, ring: &Ring) -> Result<Self> {
        let x_name = self.ring.name(self.x);
        let x = ring
            .id_of(x_name)
            .ok_or_else(|| Error::domain(format!("variable `{x_name}` missing in target ring")))?;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.embed_by_name(ring))
            .collect::<Result<Vec<_>>>()?;
        Ok(TransversalSeries {
            ring: ring.clone(),
            x,
            coeffs,
        })
    }

    /// Largest |x-exponent| appearing in any coefficient.
    pub fn max_abs_x_exponent(&self) -> i64 {
        self.coeffs
            .iter()
            .filter_map(|c| c.exponent_range(self.x))
            .map(|(lo, hi)| (lo.abs() as i64).max(hi.abs() as i64))
            .max()
            .unwrap_or(0)
    }
}

/// A series together with a y⁰ slot, used while composing maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetSeries {
    pub c0: ParamPoly,
    pub tail: TransversalSeries,
}

impl JetSeries {
    pub fn constant(ring: &Ring, x: VarId, order: usize, c0: ParamPoly) -> Self {
        JetSeries {
            c0,
            tail: TransversalSeries::zero(ring, x, order),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(JetSeries {
            c0: self.c0.try_add(&other.c0)?,
            tail: self.tail.add(&other.tail)?,
        })
    }

    pub fn scale_poly(&self, p: &ParamPoly) -> Result<Self> {
        Ok(JetSeries {
            c0: self.c0.try_mul(p)?,
            tail: self.tail.scale_poly(p)?,
        })
    }

    /// Product with a pure series (no constant term); the result is again a
    /// pure series.
    pub fn mul_series(&self, s: &TransversalSeries) -> Result<TransversalSeries> {
        let a = s.scale_poly(&self.c0)?;
        let b = self.tail.mul(s)?;
        a.add(&b)
    }
}

/// Formal k-th root of `1 + u` where `u` is a pure series: the unique series
/// `r` with constant term 1 and `r^k = 1 + u`, via the binomial expansion
/// with exact rational coefficients C(1/k, m).
pub fn series_root(u: &TransversalSeries, k: u32, order: usize) -> Result<TransversalSeries> {
    if k < 2 {
        return Err(Error::domain("root index k must be at least 2"));
    }
    if u.order() < order {
        return Err(Error::domain(format!(
            "series truncated at {} cannot produce a root at order {order}",
            u.order()
        )));
    }
    let q = rat(1, k as i64);
    let u = u.truncate(order);
    let mut out = TransversalSeries::zero(u.ring(), u.x_var(), order);
    let mut upow = u.clone();
    for m in 1..=order {
        let c = binomial_rational(&q, m as u32);
        out = out.add(&upow.scale(&c))?;
        if m < order {
            upow = upow.mul(&u)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, VarTable};

    fn x_ring() -> (Ring, VarId) {
        let r = VarTable::new(&[("x", true)]).unwrap();
        (r, 0)
    }

    fn const_series(ring: &Ring, x: VarId, values: &[(usize, crate::algebra::Rational)], order: usize) -> TransversalSeries {
        let mut s = TransversalSeries::zero(ring, x, order);
        for (n, v) in values {
            s.set_coeff(*n, ParamPoly::constant(ring, v.clone()));
        }
        s
    }

    #[test]
    fn root_of_one_is_one() {
        let (r, x) = x_ring();
        let u = TransversalSeries::zero(&r, x, 5);
        let root = series_root(&u, 3, 5).unwrap();
        assert!(root.is_zero());
    }

    #[test]
    fn square_root_of_one_plus_y() {
        let (r, x) = x_ring();
        // u = y, so 1 + u = 1 + y.
        let u = const_series(&r, x, &[(1, rat(1, 1))], 5);
        let root = series_root(&u, 2, 5).unwrap();
        // (1+y)^{1/2} = 1 + y/2 - y^2/8 + y^3/16 - 5 y^4/128 + 7 y^5/256
        let expected = [
            rat(1, 2),
            rat(-1, 8),
            rat(1, 16),
            rat(-5, 128),
            rat(7, 256),
        ];
        for (n, e) in expected.iter().enumerate() {
            assert_eq!(root.coeff(n + 1).as_constant().unwrap(), *e, "order {}", n + 1);
        }
    }

    #[test]
    fn root_to_the_k_restores_input() {
        let (r, x) = x_ring();
        for k in [2u32, 3, 5] {
            let u = const_series(
                &r,
                x,
                &[(1, rat(1, 1)), (2, rat(-2, 3)), (4, rat(5, 7))],
                6,
            );
            let root = series_root(&u, k, 6).unwrap();
            // (1 + root)^k - 1 = Σ_{m=1..k} C(k,m) root^m must equal u.
            let mut power = TransversalSeries::zero(&r, x, 6);
            let mut tpow = root.clone();
            for m in 1..=k {
                let c = crate::algebra::binomial_int(k as i64, m);
                power = power.add(&tpow.scale(&c)).unwrap();
                if m < k {
                    tpow = tpow.mul(&root).unwrap();
                }
            }
            assert_eq!(power, u, "k = {k}");
        }
    }
}
