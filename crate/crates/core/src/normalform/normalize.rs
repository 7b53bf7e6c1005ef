//! Reduction of a self-intersection-one cocycle to normal form.
//!
//! The charts are built order by order: at y-order n every x-monomial outside
//! the allowed window is killed by a chart coefficient on one side of the
//! curve. Monomials `x^j` with j ≥ -2 (x-part) resp. j ≥ -1 (y-part) are
//! handled by the chart at 0 with polynomial slots, the remaining ones by the
//! chart at ∞, whose slots read as `x^{-n-e}` through the gluing. Each slot
//! responds linearly with a unit-monomial pivot; pivots are measured by a
//! probe composition and the pivot structure is asserted.

use std::collections::BTreeSet;

use crate::algebra::ParamPoly;
use crate::error::{Error, Result};
use crate::normalform::shape::{a_window_allows, b_window_allows, NormalForm, Part};
use crate::series::{
    map_compose, ChartChange, ChartSide, Cocycle, TransversalMap, TransversalSeries,
};

/// One monomial slot removed during normalization.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct EliminationStep {
    pub order: usize,
    pub part: Part,
    pub k: i64,
    pub side: ChartSide,
}

impl std::fmt::Display for EliminationStep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "order {} part {} k {} side {}",
            self.order, self.part, self.k, self.side
        )
    }
}

/// The outcome of [`normalize`]: the normal form, the two chart changes that
/// realize it, and the elimination report.
#[derive(Debug, Clone)]
pub struct Normalization {
    pub normal_form: NormalForm,
    pub chart_zero: ChartChange,
    pub chart_infinity: ChartChange,
    pub eliminated: Vec<EliminationStep>,
}

struct Normalizer {
    cocycle: Cocycle,
    order: usize,
    chart0: TransversalMap,
    chartinf: TransversalMap,
    steps: BTreeSet<EliminationStep>,
}

impl Normalizer {
    fn compose(&self) -> Result<TransversalMap> {
        let inner = map_compose(self.cocycle.map(), &self.chart0, self.order)?;
        map_compose(&self.chartinf, &inner, self.order)
    }

    fn part_coeff<'a>(m: &'a TransversalMap, part: Part, n: usize) -> &'a ParamPoly {
        match part {
            Part::A => m.x_tail().coeff(n),
            Part::B => m.y_part().coeff(n),
        }
    }

    /// Offending x-exponents (with their coefficients) of `part` at order n.
    fn offenders(&self, m: &TransversalMap, part: Part, n: usize) -> Vec<(i32, ParamPoly)> {
        let x = self.cocycle.x_var();
        let mut poly = Self::part_coeff(m, part, n).clone();
        if part == Part::B && n == 1 {
            // The leading slot is fixed separately; out-of-window monomials
            // beyond x^{-1} cannot occur for a valid cocycle.
            poly = poly.try_sub(&ParamPoly::var_pow(poly.ring(), x, -1).unwrap()).unwrap();
        }
        poly.decompose_by(x)
            .into_iter()
            .filter(|(j, _)| {
                let k = -(*j as i64);
                match part {
                    Part::A => !a_window_allows(k, n),
                    Part::B => !b_window_allows(k, n),
                }
            })
            .collect()
    }

    /// Add `value` to the chart slot that controls exponent `j` of `part` at
    /// order n on the given side; returns the slot's exponent in the chart.
    fn bump_slot(
        &mut self,
        side: ChartSide,
        part: Part,
        n: usize,
        j: i32,
        value: &ParamPoly,
    ) -> Result<i32> {
        let slot = match side {
            ChartSide::Zero => match part {
                Part::A => j + 2,
                Part::B => j + 1,
            },
            ChartSide::Infinity => -j - n as i32,
        };
        if slot < 0 {
            return Err(Error::domain(format!(
                "elimination slot out of range (part {part}, order {n}, exponent {j})"
            )));
        }
        let chart = match side {
            ChartSide::Zero => &mut self.chart0,
            ChartSide::Infinity => &mut self.chartinf,
        };
        let x = chart.x_var();
        let shifted = value.mul_var_pow(x, slot)?;
        let series = match part {
            Part::A => chart.x_tail(),
            Part::B => chart.y_part(),
        };
        let mut series = series.clone();
        series.set_coeff(n, series.coeff(n).try_add(&shifted)?);
        let (x_tail, y_part) = match part {
            Part::A => (series, chart.y_part().clone()),
            Part::B => (chart.x_tail().clone(), series),
        };
        *chart = TransversalMap::with_parts(chart.base(), x_tail, y_part);
        Ok(slot)
    }

    /// Measure the unit pivot of a side at (part, n): the factor by which a
    /// probe coefficient in a chart slot shows up in the composite.
    fn probe_pivot(&mut self, side: ChartSide, part: Part, n: usize, j: i32) -> Result<ParamPoly> {
        let ring = self.cocycle.ring().clone();
        let before = self.compose()?;
        let one = ParamPoly::one(&ring);
        self.bump_slot(side, part, n, j, &one)?;
        let after = self.compose()?;
        // Undo the probe.
        self.bump_slot(side, part, n, j, &(-&one))?;
        let diff = Self::part_coeff(&after, part, n).try_sub(Self::part_coeff(&before, part, n))?;
        let x = self.cocycle.x_var();
        let parts = diff.decompose_by(x);
        let pivot = match (parts.len(), parts.get(&j)) {
            (1, Some(p)) if p.is_unit_monomial() => p.clone(),
            _ => {
                return Err(Error::domain(format!(
                    "normalization pivot structure violated at part {part}, order {n}, \
                     exponent {j} (engine defect): response `{diff}`"
                )))
            }
        };
        Ok(pivot)
    }

    fn eliminate(&mut self, part: Part, n: usize) -> Result<()> {
        for _round in 0..4 {
            let comp = self.compose()?;
            let offending = self.offenders(&comp, part, n);
            if offending.is_empty() {
                return Ok(());
            }
            let j0 = match part {
                Part::A => -2,
                Part::B => -1,
            };
            for side in [ChartSide::Zero, ChartSide::Infinity] {
                let mine: Vec<(i32, ParamPoly)> = offending
                    .iter()
                    .filter(|(j, _)| match side {
                        ChartSide::Zero => *j >= j0,
                        ChartSide::Infinity => *j < j0,
                    })
                    .cloned()
                    .collect();
                if mine.is_empty() {
                    continue;
                }
                let pivot = self.probe_pivot(side, part, n, mine[0].0)?;
                let pivot_inv = pivot.invert_unit_monomial()?;
                for (j, coeff) in &mine {
                    let correction = -&coeff.try_mul(&pivot_inv)?;
                    self.bump_slot(side, part, n, *j, &correction)?;
                    self.steps.insert(EliminationStep {
                        order: n,
                        part,
                        k: -(*j as i64),
                        side,
                    });
                }
            }
        }
        let comp = self.compose()?;
        if self.offenders(&comp, part, n).is_empty() {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "normalization failed to clear part {part} at order {n} (engine defect)"
            )))
        }
    }
}

/// Reduce a cocycle with self-intersection 1 to normal form; returns the
/// normal form, chart changes with `conj(chart_∞, cocycle, chart_0)` equal to
/// it exactly, and the elimination report. Already-normal inputs come back
/// unchanged with identity charts.
pub fn normalize(c: &Cocycle, order: usize) -> Result<Normalization> {
    if c.self_intersection() != 1 {
        return Err(Error::domain(
            "normalization requires self-intersection 1 (take the cyclic cover first)",
        ));
    }
    if c.order() < order {
        return Err(Error::domain(format!(
            "normalization at order {order} needs the cocycle truncated at least there (got {})",
            c.order()
        )));
    }
    let ring = c.ring().clone();
    let x = c.x_var();
    let cocycle = c.truncate(order)?;
    let mut state = Normalizer {
        cocycle,
        order,
        chart0: TransversalMap::identity(&ring, x, order),
        chartinf: TransversalMap::identity(&ring, x, order),
        steps: BTreeSet::new(),
    };

    // Leading scaling: make the composite's y-leading term exactly x^{-1}.
    let comp = state.compose()?;
    let lead = comp.y_part().coeff(1);
    let unit = lead.mul_var_pow(x, 1)?;
    if unit.as_constant() != Some(num_traits::One::one()) {
        let mut y_part = state.chart0.y_part().clone();
        y_part.set_coeff(1, unit.invert_unit_monomial()?);
        state.chart0 =
            TransversalMap::with_parts(state.chart0.base(), state.chart0.x_tail().clone(), y_part);
    }

    for n in 1..=order {
        if n >= 2 {
            state.eliminate(Part::B, n)?;
        }
        state.eliminate(Part::A, n)?;
    }

    let final_map = state.compose()?;
    let normal_form = NormalForm::new(Cocycle::new(final_map, 1)?)?;
    let chart_zero = ChartChange::new(ChartSide::Zero, state.chart0)?;
    let chart_infinity = ChartChange::new(ChartSide::Infinity, state.chartinf)?;
    Ok(Normalization {
        normal_form,
        chart_zero,
        chart_infinity,
        eliminated: state.steps.into_iter().collect(),
    })
}

/// Recompose a normalization: `chart_∞ ∘ cocycle ∘ chart_0` at the given
/// order. Used as the exactness oracle for [`normalize`].
pub fn conjugate(
    chart_infinity: &ChartChange,
    cocycle: &Cocycle,
    chart_zero: &ChartChange,
    order: usize,
) -> Result<TransversalMap> {
    let inner = map_compose(cocycle.map(), chart_zero.map(), order)?;
    map_compose(chart_infinity.map(), &inner, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalform::shape::is_normal_form;
    use crate::series::parse_cocycle;

    #[test]
    fn already_normal_input_is_untouched() {
        let c = parse_cocycle("k 1\norder 7\na 3 5 1\nb 2 4 -2/3\n").unwrap();
        let nz = normalize(&c, 7).unwrap();
        assert_eq!(nz.normal_form.cocycle(), &c);
        assert!(nz.chart_zero.is_identity());
        assert!(nz.chart_infinity.is_identity());
        assert!(nz.eliminated.is_empty());
    }

    #[test]
    fn single_order_one_elimination() {
        // (1/x + y/x^2, y/x): the only offending monomial is x^-2 y.
        let c = parse_cocycle("k 1\norder 4\na 2 1 1\n").unwrap();
        let nz = normalize(&c, 4).unwrap();
        assert!(is_normal_form(nz.normal_form.cocycle()));
        // The recomposition identity holds exactly.
        let recomposed = conjugate(&nz.chart_infinity, &c, &nz.chart_zero, 4).unwrap();
        assert_eq!(&recomposed, nz.normal_form.cocycle().map());
        // x^-2 sits on the chart-0 side of the split.
        assert!(nz
            .eliminated
            .iter()
            .any(|s| s.order == 1 && s.part == Part::A && s.k == 2 && s.side == ChartSide::Zero));
    }

    #[test]
    fn scaled_leading_coefficient_is_normalized() {
        let c = parse_cocycle("k 1\norder 3\nb 1 1 1\n").unwrap(); // leading 2/x
        let nz = normalize(&c, 3).unwrap();
        assert!(is_normal_form(nz.normal_form.cocycle()));
        let recomposed = conjugate(&nz.chart_infinity, &c, &nz.chart_zero, 3).unwrap();
        assert_eq!(&recomposed, nz.normal_form.cocycle().map());
    }

    #[test]
    fn dense_cocycle_normalizes_and_recomposes() {
        let c = parse_cocycle(
            "k 1\norder 5\n\
             a 0 1 3\na 4 2 -1/2\na -2 2 5\na 1 3 2\na 3 3 1\n\
             b 3 2 1\nb -1 3 -3\nb 4 4 7/2\nb 0 5 1/5\n",
        )
        .unwrap();
        let nz = normalize(&c, 5).unwrap();
        assert!(is_normal_form(nz.normal_form.cocycle()));
        let recomposed = conjugate(&nz.chart_infinity, &c, &nz.chart_zero, 5).unwrap();
        assert_eq!(&recomposed, nz.normal_form.cocycle().map());
    }
}
