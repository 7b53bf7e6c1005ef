//! Saturation: the ideal-theoretic counterpart of declaring a parameter a
//! unit. `saturate_unit` clears Laurent powers of `theta` and computes
//! `(I : θ^∞)` by adjoining an inverse variable and eliminating it.

use crate::algebra::{ParamPoly, VarId};
use crate::error::{Error, Result};
use crate::groebner::buchberger::GroebnerConfig;
use crate::groebner::ideal::Ideal;
use crate::groebner::order::MonomialOrder;

/// Saturation `(I : f^∞)` in a pure polynomial ring: adjoin `u` with the
/// relation `u·f = 1` and eliminate `u`.
pub fn saturate(ideal: &Ideal, f: &ParamPoly, cfg: &GroebnerConfig) -> Result<Ideal> {
    ideal.require_pure()?;
    if f.is_zero() {
        return Err(Error::domain("cannot saturate by zero"));
    }
    let ring = ideal.ring().clone();
    let ext = ring.extend(&[("_u_sat", false)])?;
    let u = ext.id_of("_u_sat").expect("just added");
    let mut gens: Vec<ParamPoly> = ideal
        .generators()
        .iter()
        .map(|g| g.embed_by_name(&ext))
        .collect::<Result<_>>()?;
    let relation = ParamPoly::var(&ext, u)
        .try_mul(&f.embed_by_name(&ext)?)?
        .try_sub(&ParamPoly::one(&ext))?;
    gens.push(relation);
    let extended = Ideal::new(&ext, gens)?;
    let ord = MonomialOrder::elimination(&ext, &[u])?;
    let gb = extended.groebner_basis(&ord, cfg)?;
    let (back, map) = ext.without(&[u])?;
    let mut result = Vec::new();
    for g in gb {
        if !g.involves(u) {
            result.push(g.project(&back, &map)?);
        }
    }
    // `back` is structurally identical to `ring`; return over the original.
    let restored: Vec<ParamPoly> = result
        .into_iter()
        .map(|g| g.embed_by_name(&ring))
        .collect::<Result<_>>()?;
    Ideal::new(&ring, restored)
}

/// Clear Laurent powers of `theta` from the generators (multiplying by unit
/// powers of θ does not change the saturation) and compute `(I : θ^∞)` in the
/// pure ring. Any other Laurent variable occurring is a domain error.
pub fn saturate_unit(ideal: &Ideal, cfg: &GroebnerConfig) -> Result<Ideal> {
    let ring = ideal.ring().clone();
    let theta = ring
        .id_of("theta")
        .ok_or_else(|| Error::domain("ring has no `theta` variable to saturate"))?;
    for id in ideal.occurring_laurent_vars() {
        if id != theta {
            return Err(Error::domain(format!(
                "saturate_unit admits only `theta` as a Laurent variable, found `{}`",
                ring.name(id)
            )));
        }
    }
    let pure = ring.pure();
    let cleared: Vec<ParamPoly> = ideal
        .generators()
        .iter()
        .map(|g| clear_laurent_var(g, theta).and_then(|p| reflag(&p, &pure)))
        .collect::<Result<_>>()?;
    let pure_ideal = Ideal::new(&pure, cleared)?;
    let theta_poly = ParamPoly::var(&pure, theta);
    saturate(&pure_ideal, &theta_poly, cfg)
}

/// Multiply by the smallest power of `var` making all its exponents
/// nonnegative.
pub fn clear_laurent_var(p: &ParamPoly, var: VarId) -> Result<ParamPoly> {
    let min = p
        .exponent_range(var)
        .map(|(lo, _)| lo.min(0))
        .unwrap_or(0);
    p.mul_var_pow(var, -min)
}

/// Rebuild a polynomial over a ring with identical names but different
/// Laurent flags (all exponents must already satisfy the target flags).
fn reflag(p: &ParamPoly, target: &crate::algebra::Ring) -> Result<ParamPoly> {
    let mut out = ParamPoly::zero(target);
    for (expo, coeff) in p.terms() {
        out = out.try_add(&ParamPoly::monomial(target, expo.clone(), coeff.clone())?)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, VarTable};

    fn cfg() -> GroebnerConfig {
        GroebnerConfig::default()
    }

    #[test]
    fn clears_inverse_powers() {
        // <theta^-1 * gamma> saturates to <gamma>
        let ring = VarTable::new(&[("gamma", false), ("theta", true)]).unwrap();
        let g = parse_poly(&ring, "theta^-1*gamma").unwrap();
        let ideal = Ideal::new(&ring, vec![g]).unwrap();
        let sat = saturate_unit(&ideal, &cfg()).unwrap();
        assert_eq!(sat.generators().len(), 1);
        assert_eq!(sat.generators()[0].to_string(), "gamma");
    }

    #[test]
    fn unit_power_is_inconsistent() {
        // <theta^5> saturates to <1>: a unit cannot vanish.
        let ring = VarTable::new(&[("gamma", false), ("theta", true)]).unwrap();
        let g = parse_poly(&ring, "theta^5").unwrap();
        let ideal = Ideal::new(&ring, vec![g]).unwrap();
        let sat = saturate_unit(&ideal, &cfg()).unwrap();
        assert_eq!(sat.generators().len(), 1);
        assert_eq!(sat.generators()[0].to_string(), "1");
    }

    #[test]
    fn transverse_generator_is_kept() {
        // <theta - 1> is already saturated.
        let ring = VarTable::new(&[("theta", true)]).unwrap();
        let g = parse_poly(&ring, "theta - 1").unwrap();
        let ideal = Ideal::new(&ring, vec![g]).unwrap();
        let sat = saturate_unit(&ideal, &cfg()).unwrap();
        assert_eq!(sat.generators().len(), 1);
        assert_eq!(sat.generators()[0].to_string(), "theta - 1");
    }

    #[test]
    fn general_saturation_strips_a_factor() {
        // ((x*y) : x^∞) = (y)
        let ring = VarTable::new(&[("x", false), ("y", false)]).unwrap();
        let ideal = Ideal::new(&ring, vec![parse_poly(&ring, "x*y").unwrap()]).unwrap();
        let x = parse_poly(&ring, "x").unwrap();
        let sat = saturate(&ideal, &x, &cfg()).unwrap();
        assert_eq!(sat.generators().len(), 1);
        assert_eq!(sat.generators()[0].to_string(), "y");
    }

    #[test]
    fn other_laurent_vars_are_rejected() {
        let ring = VarTable::new(&[("x", true), ("theta", true)]).unwrap();
        let g = parse_poly(&ring, "x^-1*theta").unwrap();
        let ideal = Ideal::new(&ring, vec![g]).unwrap();
        assert!(saturate_unit(&ideal, &cfg()).is_err());
    }
}
