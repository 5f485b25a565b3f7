//! Reduced matrices with polynomial entries.

use super::LinearRep;
use crate::error::Result;
use crate::field::{Elem, FieldSpec};
use crate::pfield::poly::Poly;

#[derive(Clone, Debug)]
pub struct SymbolicMatrix {
    pub vars: Vec<String>,
    pub rows: Vec<Vec<Poly>>,
}

impl SymbolicMatrix {
    /// Parses each entry as a polynomial in `vars`.
    pub fn parse(vars: &[&str], rows: &[&[&str]]) -> Result<SymbolicMatrix> {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let rows = rows
            .iter()
            .map(|row| row.iter().map(|e| Poly::parse(e, &names)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(SymbolicMatrix { vars: names, rows })
    }

    /// Evaluates every entry at the given values of the variables.
    pub fn apply_hom(&self, field: &FieldSpec, values: &[Elem]) -> Result<LinearRep> {
        let r = self.rows.len();
        let c = self.rows.first().map_or(0, |x| x.len());
        let a = self.rows.iter().flat_map(|row| row.iter().map(|p| p.eval(field, values))).collect();
        LinearRep::standard(field.clone(), r, c, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::BasisMatroid;

    #[test]
    fn evaluation_into_gf73() {
        let m = SymbolicMatrix::parse(&["alpha"], &[&["1", "alpha"], &["1", "alpha+1"]]).unwrap();
        let f = FieldSpec::new(73).unwrap();
        let a = m.apply_hom(&f, &[15]).unwrap();
        assert_eq!(a.a, vec![1, 15, 1, 16]);
        assert_eq!(a.matroid(), BasisMatroid::uniform(2, 4));
        let b = m.apply_hom(&f, &[0]).unwrap();
        assert_ne!(b.matroid(), BasisMatroid::uniform(2, 4));
    }
}
