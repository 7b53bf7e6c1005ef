use std::cmp::Ordering;

use crate::algebra::{Expo, Ring, VarId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OrderKind {
    Lex,
    DegRevLex,
    /// Block order: the first `split` variables are compared degrevlex first,
    /// making it an elimination order for them.
    Elimination {
        split: usize,
    },
}

/// A total order on monomials compatible with multiplication and with 1
/// minimal. `vars` lists the variables by decreasing significance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialOrder {
    kind: OrderKind,
    vars: Vec<VarId>,
}

impl MonomialOrder {
    pub fn lex(ring: &Ring) -> Self {
        MonomialOrder {
            kind: OrderKind::Lex,
            vars: (0..ring.arity()).collect(),
        }
    }

    /// Lex with an explicit significance permutation.
    pub fn lex_of(vars: Vec<VarId>) -> Self {
        MonomialOrder {
            kind: OrderKind::Lex,
            vars,
        }
    }

    pub fn degrevlex(ring: &Ring) -> Self {
        MonomialOrder {
            kind: OrderKind::DegRevLex,
            vars: (0..ring.arity()).collect(),
        }
    }

    pub fn degrevlex_of(vars: Vec<VarId>) -> Self {
        MonomialOrder {
            kind: OrderKind::DegRevLex,
            vars,
        }
    }

    /// Elimination order for `block`: any monomial involving a block variable
    /// is larger than any monomial not involving one, so the block can be
    /// eliminated by keeping the basis elements free of it.
    pub fn elimination(ring: &Ring, block: &[VarId]) -> Result<Self> {
        let mut vars: Vec<VarId> = block.to_vec();
        for id in 0..ring.arity() {
            if block.contains(&id) {
                continue;
            }
            vars.push(id);
        }
        if vars.len() != ring.arity() {
            return Err(Error::domain("elimination block repeats variables"));
        }
        Ok(MonomialOrder {
            kind: OrderKind::Elimination {
                split: block.len(),
            },
            vars,
        })
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    fn lex_cmp(vars: &[VarId], a: &Expo, b: &Expo) -> Ordering {
        for &v in vars {
            match a[v].cmp(&b[v]) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    }

    fn degrevlex_cmp(vars: &[VarId], a: &Expo, b: &Expo) -> Ordering {
        let deg = |e: &Expo| -> i64 { vars.iter().map(|&v| e[v] as i64).sum() };
        match deg(a).cmp(&deg(b)) {
            Ordering::Equal => {}
            other => return other,
        }
        for &v in vars.iter().rev() {
            match a[v].cmp(&b[v]) {
                Ordering::Equal => continue,
                // Smaller exponent in the least significant position wins.
                other => return other.reverse(),
            }
        }
        Ordering::Equal
    }

    /// `Greater` means `a` is the larger monomial.
    pub fn cmp(&self, a: &Expo, b: &Expo) -> Ordering {
        match self.kind {
            OrderKind::Lex => Self::lex_cmp(&self.vars, a, b),
            OrderKind::DegRevLex => Self::degrevlex_cmp(&self.vars, a, b),
            OrderKind::Elimination { split } => {
                match Self::degrevlex_cmp(&self.vars[..split], a, b) {
                    Ordering::Equal => Self::degrevlex_cmp(&self.vars[split..], a, b),
                    other => other,
                }
            }
        }
    }

    pub fn describe(&self) -> String {
        match self.kind {
            OrderKind::Lex => "lex".to_string(),
            OrderKind::DegRevLex => "degrevlex".to_string(),
            OrderKind::Elimination { split } => format!("elim(block {split})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::VarTable;

    fn ring3() -> Ring {
        VarTable::new(&[("x", false), ("y", false), ("z", false)]).unwrap()
    }

    #[test]
    fn lex_orders_by_first_difference() {
        let r = ring3();
        let ord = MonomialOrder::lex(&r);
        // x > y^5
        assert_eq!(ord.cmp(&vec![1, 0, 0], &vec![0, 5, 0]), Ordering::Greater);
        assert_eq!(ord.cmp(&vec![0, 1, 0], &vec![0, 0, 3]), Ordering::Greater);
    }

    #[test]
    fn degrevlex_prefers_degree_then_revlex() {
        let r = ring3();
        let ord = MonomialOrder::degrevlex(&r);
        // y^5 > x (degree first)
        assert_eq!(ord.cmp(&vec![0, 5, 0], &vec![1, 0, 0]), Ordering::Greater);
        // x*y > y*z? degree equal; last difference at z: x*y has 0 < 1 → x*y greater
        assert_eq!(ord.cmp(&vec![1, 1, 0], &vec![0, 1, 1]), Ordering::Greater);
        // classic: x z vs y^2 — equal degree, last difference at z → y^2 greater
        assert_eq!(ord.cmp(&vec![1, 0, 1], &vec![0, 2, 0]), Ordering::Less);
        // 1 is minimal
        assert_eq!(ord.cmp(&vec![0, 0, 0], &vec![0, 0, 1]), Ordering::Less);
    }

    #[test]
    fn elimination_block_dominates() {
        let r = ring3();
        let ord = MonomialOrder::elimination(&r, &[0]).unwrap();
        // any positive power of x beats anything x-free
        assert_eq!(ord.cmp(&vec![1, 0, 0], &vec![0, 9, 9]), Ordering::Greater);
        assert_eq!(ord.cmp(&vec![0, 2, 0], &vec![0, 0, 3]), Ordering::Less);
    }

    #[test]
    fn multiplicative_compatibility_spot() {
        let r = ring3();
        for ord in [
            MonomialOrder::lex(&r),
            MonomialOrder::degrevlex(&r),
            MonomialOrder::elimination(&r, &[1]).unwrap(),
        ] {
            let a = vec![1, 2, 0];
            let b = vec![0, 1, 3];
            let c = vec![2, 0, 1];
            let rel = ord.cmp(&a, &b);
            let ac: Expo = a.iter().zip(&c).map(|(p, q)| p + q).collect();
            let bc: Expo = b.iter().zip(&c).map(|(p, q)| p + q).collect();
            assert_eq!(ord.cmp(&ac, &bc), rel);
        }
    }
}
