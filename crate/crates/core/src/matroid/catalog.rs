//! Named matroids.
//!
//! Names are ASCII: `U2,5`, `F7`, `F7-`, `F7=`, `M(K4)`, `AG23`, `AG23-e`,
//! `AG23-e-DY`, `P6`, `P8`, `P8-`, `P8=`, `TQ8`, `T8`, `N3`, `N4`. A
//! trailing `*` takes the dual.

use super::basis::BasisMatroid;
use super::deltay::delta_y;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linrep::{LinearRep, SymbolicMatrix};

pub const NAMES: &[&str] = &[
    "U2,4", "U2,5", "U3,5", "U2,6", "U3,6", "U4,6", "F7", "F7-", "F7=", "M(K4)", "AG23", "AG23-e", "AG23-e-DY", "P6",
    "P8", "P8-", "P8=", "TQ8", "T8", "N3", "N4",
];

const N3_ROWS: [[i64; 7]; 7] = [
    [1, 2, 0, 0, 1, 2, 2],
    [2, 2, 2, 0, 1, 1, 2],
    [0, 2, 0, 0, 1, 1, 2],
    [0, 0, 0, 0, 2, 1, 2],
    [1, 1, 1, 2, 1, 2, 2],
    [2, 1, 1, 1, 2, 1, 1],
    [2, 2, 2, 2, 2, 1, 0],
];

const N4_ROWS: [[i64; 8]; 8] = [
    [1, 0, 1, 1, 1, 1, 2, 1],
    [0, 2, 0, 0, 1, 0, 0, 1],
    [1, 0, 2, 1, 0, 1, 2, 1],
    [1, 0, 1, 0, 0, 0, 1, 0],
    [1, 1, 0, 0, 0, 1, 0, 0],
    [1, 0, 1, 0, 1, 1, 0, 1],
    [2, 0, 2, 1, 0, 0, 2, 1],
    [1, 1, 1, 0, 0, 1, 1, 0],
];

const P8_ROWS: [[i64; 4]; 4] = [[0, 1, 1, -1], [1, 0, 1, 1], [1, 1, 0, 1], [-1, 1, 1, 0]];

fn rows<const C: usize>(r: &[[i64; C]]) -> Vec<Vec<i64>> {
    r.iter().map(|x| x.to_vec()).collect()
}

fn gf(q: u32) -> FieldSpec {
    FieldSpec::new(q).expect("supported field")
}

/// A reduced representation for the matrix-defined entries.
pub fn representation(name: &str) -> Option<LinearRep> {
    let (q, m): (u32, Vec<Vec<i64>>) = match name {
        "F7" => (2, vec![vec![1, 1, 0, 1], vec![1, 0, 1, 1], vec![0, 1, 1, 1]]),
        "F7-" => (3, vec![vec![1, 1, 0, 1], vec![1, 0, 1, 1], vec![0, 1, 1, 1]]),
        "M(K4)" => (2, vec![vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]]),
        "AG23" => {
            // Columns (1, x, y) over GF(3), reduced against (1,0,0), (1,1,0), (1,0,1).
            let pts: Vec<(i64, i64)> = (0..3).flat_map(|x| (0..3).map(move |y| (x, y))).collect();
            let basis = [(0, 0), (1, 0), (0, 1)];
            let mut m = vec![Vec::new(); 3];
            for &(x, y) in pts.iter().filter(|p| !basis.contains(p)) {
                // (1, x, y) = (1 - x - y) e00 + x e10 + y e01
                m[0].push(1 - x - y);
                m[1].push(x);
                m[2].push(y);
            }
            (3, m)
        }
        "P8" => (3, rows(&P8_ROWS)),
        "T8" => (3, (0..4).map(|i| (0..4).map(|j| if i == j { 0 } else { 1 }).collect()).collect()),
        "N3" => (3, rows(&N3_ROWS)),
        "N4" => (3, rows(&N4_ROWS)),
        _ => return None,
    };
    Some(LinearRep::from_rows(gf(q), &m).expect("catalog matrix"))
}

/// The reduced 2-cyclotomic matrices, in the variable `alpha`, for `F7=`,
/// `TQ8` and `P8-`.
pub fn k2_matrix(name: &str) -> Option<SymbolicMatrix> {
    let m: &[&[&str]] = match name {
        "F7=" => &[&["1", "1", "0", "1"], &["1", "0", "1", "1"], &["0", "1", "alpha", "1"]],
        "TQ8" => &[
            &["0", "alpha", "1", "1"],
            &["1", "0", "alpha", "alpha - 1"],
            &["1", "alpha", "0", "alpha"],
            &["1", "alpha - 1", "1", "0"],
        ],
        "P8-" => &[
            &["1", "1", "1", "alpha + 1"],
            &["1", "0", "alpha + 1", "alpha + 1"],
            &["1", "-alpha", "1", "0"],
            &["0", "1", "1", "1"],
        ],
        _ => return None,
    };
    Some(SymbolicMatrix::parse(&["alpha"], m).expect("catalog matrix"))
}

fn uniform(name: &str) -> Option<BasisMatroid> {
    let rest = name.strip_prefix('U')?;
    let (r, n) = rest.split_once(',')?;
    let (r, n): (usize, usize) = (r.parse().ok()?, n.parse().ok()?);
    (r <= n && n <= super::colex::MAX_N).then(|| BasisMatroid::uniform(r, n))
}

/// The two disjoint circuit-hyperplanes of P8, in increasing order.
pub fn p8_circuit_hyperplane_pair(p8: &BasisMatroid) -> (u32, u32) {
    let ch = p8.circuit_hyperplanes();
    for (i, &a) in ch.iter().enumerate() {
        for &b in &ch[i + 1..] {
            if a & b == 0 {
                return (a, b);
            }
        }
    }
    panic!("P8 has disjoint circuit-hyperplanes")
}

/// Looks up a named matroid.
pub fn get(name: &str) -> Result<BasisMatroid> {
    if let Some(base) = name.strip_suffix('*') {
        return Ok(get(base)?.dual());
    }
    if let Some(m) = uniform(name) {
        return Ok(m);
    }
    if let Some(rep) = representation(name) {
        return Ok(rep.matroid());
    }
    let m = match name {
        "F7=" => {
            let f7m = get("F7-")?;
            let ch = f7m.circuit_hyperplanes()[0];
            f7m.relax(ch)?
        }
        "AG23-e" => get("AG23")?.delete(8),
        "AG23-e-DY" => {
            let m = get("AG23-e")?;
            let t = m.coindependent_triangles()[0];
            delta_y(&m, t)?
        }
        "P6" => BasisMatroid::from_predicate(6, 3, |b| b != 0b111)?,
        "P8-" => {
            let p8 = get("P8")?;
            let (_, efgh) = p8_circuit_hyperplane_pair(&p8);
            p8.relax(efgh)?
        }
        "P8=" => {
            let p8 = get("P8")?;
            let (abcd, efgh) = p8_circuit_hyperplane_pair(&p8);
            p8.relax(abcd)?.relax(efgh)?
        }
        "TQ8" => {
            let circuits: Vec<u32> =
                (0..8).map(|i| [0, 2, 4, 5].iter().fold(0u32, |m, &d| m | 1 << ((i + d) % 8))).collect();
            BasisMatroid::from_predicate(8, 4, |b| !circuits.contains(&b))?
        }
        _ => return Err(Error::UnknownName(name.to_string())),
    };
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        for (name, n, r) in [("F7", 7, 3), ("M(K4)", 6, 3), ("AG23", 9, 3), ("AG23-e-DY", 8, 4), ("N3", 14, 7), ("N4", 16, 8)] {
            let m = get(name).unwrap();
            assert_eq!((m.n(), m.rank()), (n, r), "{name}");
        }
        assert_eq!(get("F7").unwrap().basis_count(), 28);
        assert_eq!(get("F7-").unwrap().basis_count(), 29);
        assert_eq!(get("TQ8").unwrap().basis_count(), 62);
        assert!(get("X9").is_err());
    }
}
