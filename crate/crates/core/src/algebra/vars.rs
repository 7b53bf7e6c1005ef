use std::sync::Arc;

use crate::error::{Error, Result};

/// Index of a variable inside a [`VarTable`].
pub type VarId = usize;

/// Shared handle to a variable table.
pub type Ring = Arc<VarTable>;

/// Ordered list of variable names with a per-variable Laurent flag.
///
/// Laurent variables are units of the ring and may carry negative exponents
/// (the curve coordinate `x` and the unit parameter `theta`); all other
/// variables are restricted to nonnegative powers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
    laurent: Vec<bool>,
}

impl VarTable {
    pub fn new(vars: &[(&str, bool)]) -> Result<Ring> {
        let mut names = Vec::with_capacity(vars.len());
        let mut laurent = Vec::with_capacity(vars.len());
        for (name, is_laurent) in vars {
            if names.iter().any(|n| n == name) {
                return Err(Error::domain(format!("duplicate variable name `{name}`")));
            }
            if !is_identifier(name) {
                return Err(Error::domain(format!("invalid variable name `{name}`")));
            }
            names.push((*name).to_owned());
            laurent.push(*is_laurent);
        }
        Ok(Arc::new(VarTable { names, laurent }))
    }

    pub fn arity(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, id: VarId) -> &str {
        &self.names[id]
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(|s| s.as_str())
    }

    pub fn id_of(&self, name: &str) -> Option<VarId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_laurent(&self, id: VarId) -> bool {
        self.laurent[id]
    }

    /// New table with extra variables appended; existing ids stay valid.
    pub fn extend(&self, extra: &[(&str, bool)]) -> Result<Ring> {
        let mut vars: Vec<(&str, bool)> = self
            .names
            .iter()
            .zip(&self.laurent)
            .map(|(n, l)| (n.as_str(), *l))
            .collect();
        for (name, l) in extra {
            if self.id_of(name).is_some() {
                return Err(Error::domain(format!(
                    "variable `{name}` already present in the ring"
                )));
            }
            vars.push((name, *l));
        }
        VarTable::new(&vars)
    }

    /// New table without the listed variables. Returns the table and, for each
    /// old id, its new id (or `None` if dropped).
    pub fn without(&self, drop: &[VarId]) -> Result<(Ring, Vec<Option<VarId>>)> {
        let mut vars = Vec::new();
        let mut map = vec![None; self.arity()];
        for id in 0..self.arity() {
            if !drop.contains(&id) {
                map[id] = Some(vars.len());
                vars.push((self.names[id].as_str(), self.laurent[id]));
            }
        }
        Ok((VarTable::new(&vars)?, map))
    }

    /// New table with the same names but every Laurent flag cleared.
    pub fn pure(&self) -> Ring {
        Arc::new(VarTable {
            names: self.names.clone(),
            laurent: vec![false; self.names.len()],
        })
    }

    pub fn has_laurent(&self) -> bool {
        self.laurent.iter().any(|l| *l)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Check that two values live over the same table.
pub(crate) fn same_ring(a: &Ring, b: &Ring) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::RingMismatch(format!(
            "[{}] vs [{}]",
            a.names().collect::<Vec<_>>().join(","),
            b.names().collect::<Vec<_>>().join(",")
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates() {
        assert!(VarTable::new(&[("x", true), ("x", false)]).is_err());
    }

    #[test]
    fn extend_and_drop() {
        let r = VarTable::new(&[("x", true), ("a", false)]).unwrap();
        let r2 = r.extend(&[("theta", true)]).unwrap();
        assert_eq!(r2.arity(), 3);
        assert!(r2.is_laurent(2));
        assert!(r.extend(&[("x", false)]).is_err());
        let (r3, map) = r2.without(&[0]).unwrap();
        assert_eq!(r3.arity(), 2);
        assert_eq!(map, vec![None, Some(0), Some(1)]);
        assert_eq!(r3.name(1), "theta");
    }
}
