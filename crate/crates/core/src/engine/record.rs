//! A class member with its proxy and carrier representations.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linrep::{find_confined_rep, find_rep, LinearRep};
use crate::matroid::{BasisMatroid, InvariantKey};
use crate::pfield::Proxy;

/// Both representations are in standard position: rows labelled `0..r`,
/// columns `r..n`, and both represent `matroid` exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemberRecord {
    pub matroid: BasisMatroid,
    pub confined: LinearRep,
    pub carrier: LinearRep,
    pub invariant: InvariantKey,
}

impl MemberRecord {
    /// Assembles a record from standard-position parts.
    pub fn new(matroid: BasisMatroid, confined: LinearRep, carrier: LinearRep) -> MemberRecord {
        debug_assert!(confined.is_standard() && carrier.is_standard());
        let invariant = matroid.invariant_key();
        MemberRecord { matroid, confined, carrier, invariant }
    }

    /// Searches both representations of `m`; `None` if `m` has no confined
    /// representation over the proxy or none over the carrier.
    pub fn from_matroid(m: &BasisMatroid, proxy: &Proxy, carrier: &FieldSpec) -> Option<MemberRecord> {
        let confined = find_confined_rep(m, &proxy.field, Some(proxy.allowed_table()))?;
        let car = find_rep(m, carrier)?;
        // Both searches label rows by the first basis of m.
        debug_assert_eq!((&confined.rows, &confined.cols), (&car.rows, &car.cols));
        let perm = confined.standard_relabelling();
        Some(MemberRecord::new(m.relabel(&perm), confined.standardized(), car.standardized()))
    }

    /// The dual record, again in standard position.
    pub fn dual(&self) -> MemberRecord {
        let (r, c) = (self.confined.r(), self.confined.c());
        let perm: Vec<usize> = (0..r + c).map(|e| if e < r { c + e } else { e - r }).collect();
        MemberRecord::new(
            self.matroid.dual().relabel(&perm),
            self.confined.dual_standard(),
            self.carrier.dual_standard(),
        )
    }

    /// The single-element extension by columns `z` (proxy) and `w` (carrier)
    /// whose matroid is already known.
    pub fn extend(&self, z: &[u32], w: &[u32], matroid: BasisMatroid) -> MemberRecord {
        MemberRecord::new(matroid, self.confined.with_column(z), self.carrier.with_column(w))
    }

    /// Checks that the three views agree.
    pub fn check(&self) -> Result<()> {
        if self.confined.matroid() != self.matroid || self.carrier.matroid() != self.matroid {
            return Err(Error::InvalidMatroid("record representations disagree with its matroid".into()));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.matroid.n()
    }

    pub fn rank(&self) -> usize {
        self.matroid.rank()
    }

    /// Three lines: `B …`, then the confined and carrier `L …` lines.
    pub fn serialize(&self) -> String {
        format!("{}\n{}\n{}", self.matroid.serialize(), self.confined.serialize(), self.carrier.serialize())
    }

    pub fn parse(b: &str, confined: &str, carrier: &str) -> Result<MemberRecord> {
        let matroid = BasisMatroid::parse(b)?;
        let confined = LinearRep::parse(confined)?;
        let carrier = LinearRep::parse(carrier)?;
        if confined.r() != matroid.rank() || confined.n() != matroid.n() || carrier.n() != matroid.n() {
            return Err(Error::Parse(format!("record shape mismatch at {b:?}")));
        }
        Ok(MemberRecord::new(matroid, confined, carrier))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::catalog;

    #[test]
    fn duals_and_round_trip() {
        let proxy = Proxy::parse_stanza("pf=D q=11 images=2=2 F=2,6,10").unwrap();
        let f3 = FieldSpec::new(3).unwrap();
        let p8 = catalog::get("P8").unwrap();
        let rec = MemberRecord::from_matroid(&p8, &proxy, &f3).unwrap();
        rec.check().unwrap();
        assert!(rec.matroid.is_isomorphic(&p8));
        let d = rec.dual();
        d.check().unwrap();
        assert_eq!(d.dual(), rec);
        let text = rec.serialize();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(MemberRecord::parse(lines[0], lines[1], lines[2]).unwrap(), rec);
        assert!(MemberRecord::from_matroid(&catalog::get("F7").unwrap(), &proxy, &f3).is_none());
    }
}
