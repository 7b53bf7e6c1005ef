//! The residual four-parameter action preserving the normal form.
//!
//! A parameter `A = (α, β, γ, θ)` with `θ` a unit generates the unique chart
//! pair `(Φ⁰, Φ^∞)` whose conjugation keeps a normal form normal; the
//! coefficient formulas consume the `b_{2,m}` and `b_{m-1,m}` entries of the
//! source normal form.

use num_traits::Zero;

use crate::algebra::{binomial_int, same_ring, ParamPoly, Rational, Ring};
use crate::cancel::CancelToken;
use crate::error::{Error, Result};
use crate::normalform::shape::NormalForm;
use crate::series::{
    map_compose_with, ChartChange, ChartSide, Cocycle, CompositionLimits, TransversalMap,
    TransversalSeries, XBase,
};

/// Residual parameter `(α, β, γ, θ)`; entries may be rational constants or
/// polynomials in symbolic parameters, with `θ` invertible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualParam {
    alpha: ParamPoly,
    beta: ParamPoly,
    gamma: ParamPoly,
    theta: ParamPoly,
}

impl ResidualParam {
    pub fn new(alpha: ParamPoly, beta: ParamPoly, gamma: ParamPoly, theta: ParamPoly) -> Result<Self> {
        same_ring(alpha.ring(), beta.ring())?;
        same_ring(alpha.ring(), gamma.ring())?;
        same_ring(alpha.ring(), theta.ring())?;
        if !theta.is_unit_monomial() {
            return Err(Error::domain(format!(
                "theta entry `{theta}` is not invertible"
            )));
        }
        Ok(ResidualParam {
            alpha,
            beta,
            gamma,
            theta,
        })
    }

    /// Rational parameter values; `theta` must be nonzero.
    pub fn from_rationals(
        ring: &Ring,
        alpha: Rational,
        beta: Rational,
        gamma: Rational,
        theta: Rational,
    ) -> Result<Self> {
        if theta.is_zero() {
            return Err(Error::domain("theta must be a nonzero constant"));
        }
        Ok(ResidualParam {
            alpha: ParamPoly::constant(ring, alpha),
            beta: ParamPoly::constant(ring, beta),
            gamma: ParamPoly::constant(ring, gamma),
            theta: ParamPoly::constant(ring, theta),
        })
    }

    /// The identity parameter (0, 0, 0, 1).
    pub fn identity(ring: &Ring) -> Self {
        ResidualParam {
            alpha: ParamPoly::zero(ring),
            beta: ParamPoly::zero(ring),
            gamma: ParamPoly::zero(ring),
            theta: ParamPoly::one(ring),
        }
    }

    /// Fully symbolic parameter over a ring containing variables named
    /// `alpha`, `beta`, `gamma` and `theta` (the latter Laurent).
    pub fn symbolic(ring: &Ring) -> Result<Self> {
        let var = |name: &str| -> Result<ParamPoly> {
            let id = ring
                .id_of(name)
                .ok_or_else(|| Error::domain(format!("ring has no variable `{name}`")))?;
            Ok(ParamPoly::var(ring, id))
        };
        let theta = var("theta")?;
        let theta_id = ring.id_of("theta").unwrap();
        if !ring.is_laurent(theta_id) {
            return Err(Error::domain("`theta` must be a Laurent variable"));
        }
        ResidualParam::new(var("alpha")?, var("beta")?, var("gamma")?, theta)
    }

    pub fn alpha(&self) -> &ParamPoly {
        &self.alpha
    }

    pub fn beta(&self) -> &ParamPoly {
        &self.beta
    }

    pub fn gamma(&self) -> &ParamPoly {
        &self.gamma
    }

    pub fn theta(&self) -> &ParamPoly {
        &self.theta
    }

    pub fn ring(&self) -> &Ring {
        self.alpha.ring()
    }

    /// True for the pure reparametrisation direction `(0, 0, 0, θ)`.
    pub fn is_reparametrisation(&self) -> bool {
        self.alpha.is_zero() && self.beta.is_zero() && self.gamma.is_zero()
    }
}

impl std::fmt::Display for ResidualParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.alpha, self.beta, self.gamma, self.theta
        )
    }
}

/// The chart pair of the residual action, through the order of `nf`.
pub fn residual_charts(a: &ResidualParam, nf: &NormalForm) -> Result<(ChartChange, ChartChange)> {
    same_ring(a.ring(), nf.ring())?;
    let ring = nf.ring().clone();
    let x_var = nf.x_var();
    let order = nf.order();
    let x = ParamPoly::var(&ring, x_var);

    // Power tables for α, β, θ.
    let pow_table = |p: &ParamPoly| -> Vec<ParamPoly> {
        let mut t = vec![ParamPoly::one(&ring)];
        for i in 1..=order {
            t.push(t[i - 1].try_mul(p).expect("same ring"));
        }
        t
    };
    let alpha = pow_table(&a.alpha);
    let beta = pow_table(&a.beta);
    let theta = pow_table(&a.theta);
    let theta_inv = a.theta.invert_unit_monomial()?;
    let theta_m2 = theta_inv.try_mul(&theta_inv)?;
    let gamma = &a.gamma;

    let mut a0 = TransversalSeries::zero(&ring, x_var, order);
    let mut b0 = TransversalSeries::zero(&ring, x_var, order);
    let mut ainf = TransversalSeries::zero(&ring, x_var, order);
    let mut binf = TransversalSeries::zero(&ring, x_var, order);

    // a_1^0 = θ(αx + β); a_1^∞ = βx + α.
    a0.set_coeff(
        1,
        theta[1].try_mul(&alpha[1].try_mul(&x)?.try_add(&beta[1])?)?,
    );
    ainf.set_coeff(1, beta[1].try_mul(&x)?.try_add(&alpha[1])?);
    // b_1^0 = θ; b_1^∞ = 1/θ.
    b0.set_coeff(1, theta[1].clone());
    binf.set_coeff(1, theta_inv.clone());

    for n in 2..=order {
        // a_n^0 = α^n θ^n x + γ (θα)^{n-2} + θ^n Σ_{k=1}^{n-2} C(n-2, k-1) α^k b_{2,n-k+1}
        let mut v = alpha[n].try_mul(&theta[n])?.try_mul(&x)?;
        v = v.try_add(&gamma.try_mul(&theta[n - 2])?.try_mul(&alpha[n - 2])?)?;
        let mut sum = ParamPoly::zero(&ring);
        for k in 1..=n.saturating_sub(2) {
            let c = binomial_int(n as i64 - 2, (k - 1) as u32);
            let term = alpha[k].try_mul(&nf.b(2, n - k + 1))?.scale(&c);
            sum = sum.try_add(&term)?;
        }
        v = v.try_add(&theta[n].try_mul(&sum)?)?;
        a0.set_coeff(n, v);

        // b_n^0 = θ^n α^{n-1}
        b0.set_coeff(n, theta[n].try_mul(&alpha[n - 1])?);

        // a_n^∞ = β^n x + (n-1) β^{n-2} γ / θ² - (n-2) α β^{n-1}
        //         - Σ_{k=1}^{n-2} k β^k b_{n-k, n-k+1}
        let mut v = beta[n].try_mul(&x)?;
        let c1 = Rational::from_integer((n as i64 - 1).into());
        v = v.try_add(
            &beta[n - 2]
                .try_mul(gamma)?
                .try_mul(&theta_m2)?
                .scale(&c1),
        )?;
        let c2 = Rational::from_integer((n as i64 - 2).into());
        v = v.try_sub(&alpha[1].try_mul(&beta[n - 1])?.scale(&c2))?;
        let mut sum = ParamPoly::zero(&ring);
        for k in 1..=n.saturating_sub(2) {
            let m = n - k + 1;
            let c = Rational::from_integer((k as i64).into());
            sum = sum.try_add(&beta[k].try_mul(&nf.b(m as i64 - 1, m))?.scale(&c))?;
        }
        v = v.try_sub(&sum)?;
        ainf.set_coeff(n, v);

        // b_n^∞ = β^{n-1} / θ
        binf.set_coeff(n, beta[n - 1].try_mul(&theta_inv)?);
    }

    let chart0 = ChartChange::new(
        ChartSide::Zero,
        TransversalMap::new(XBase::Identity, a0, b0)?,
    )?;
    let chartinf = ChartChange::new(
        ChartSide::Infinity,
        TransversalMap::new(XBase::Identity, ainf, binf)?,
    )?;
    Ok((chart0, chartinf))
}

/// Result of acting on a normal form.
#[derive(Debug, Clone)]
pub struct Acted {
    pub normal_form: NormalForm,
    pub chart_zero: ChartChange,
    pub chart_infinity: ChartChange,
}

/// Apply the residual action: conjugate by the generated chart pair. The
/// composite must land back in normal form — failure is an engine defect.
pub fn act(a: &ResidualParam, nf: &NormalForm) -> Result<Acted> {
    act_with_cancel(a, nf, &CancelToken::new())
}

pub fn act_with_cancel(a: &ResidualParam, nf: &NormalForm, cancel: &CancelToken) -> Result<Acted> {
    let order = nf.order();
    let (chart_zero, chart_infinity) = residual_charts(a, nf)?;
    let limits = CompositionLimits::default();
    let inner = map_compose_with(nf.cocycle().map(), chart_zero.map(), order, limits, Some(cancel))?;
    let full = map_compose_with(chart_infinity.map(), &inner, order, limits, Some(cancel))?;
    let cocycle = Cocycle::new(full, 1).map_err(|e| {
        Error::NormalForm(format!("acted cocycle lost its leading shape: {e}"))
    })?;
    let normal_form = NormalForm::new(cocycle).map_err(|e| {
        Error::NormalForm(format!(
            "residual action left the normal form family (engine defect): {e}"
        ))
    })?;
    Ok(Acted {
        normal_form,
        chart_zero,
        chart_infinity,
    })
}
