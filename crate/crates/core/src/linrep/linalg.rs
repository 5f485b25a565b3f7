use crate::field::{Elem, FieldSpec};

/// Determinant of a `k x k` row-major matrix; the buffer is destroyed.
pub(crate) fn det_in_place(f: &FieldSpec, m: &mut [Elem], k: usize) -> Elem {
    let mut d = 1;
    for col in 0..k {
        let Some(p) = (col..k).find(|&i| m[i * k + col] != 0) else {
            return 0;
        };
        if p != col {
            for j in 0..k {
                m.swap(p * k + j, col * k + j);
            }
            d = f.neg(d);
        }
        let pv = m[col * k + col];
        d = f.mul(d, pv);
        let inv = f.inv(pv);
        for i in col + 1..k {
            let factor = m[i * k + col];
            if factor == 0 {
                continue;
            }
            let s = f.mul(factor, inv);
            for j in col..k {
                m[i * k + j] = f.sub(m[i * k + j], f.mul(s, m[col * k + j]));
            }
        }
    }
    d
}

/// Determinant of a `k x k` row-major matrix.
pub fn det(f: &FieldSpec, m: &[Elem], k: usize) -> Elem {
    let mut buf = m.to_vec();
    det_in_place(f, &mut buf, k)
}

/// Basis of `{ x : v . x = 0 for every v in vectors }` inside `F^dim`.
pub fn null_space(f: &FieldSpec, vectors: &[Vec<Elem>], dim: usize) -> Vec<Vec<Elem>> {
    // Row-reduce the vectors.
    let mut rows: Vec<Vec<Elem>> = vectors.to_vec();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..dim {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = f.inv(rows[rank][col]);
        for x in rows[rank].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != rank && rows[i][col] != 0 {
                let s = rows[i][col];
                for j in 0..dim {
                    let t = f.mul(s, rows[rank][j]);
                    rows[i][j] = f.sub(rows[i][j], t);
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let mut out = Vec::new();
    for free in (0..dim).filter(|c| !pivots.contains(c)) {
        let mut x = vec![0; dim];
        x[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = f.neg(rows[i][free]);
        }
        out.push(x);
    }
    out
}

#[inline]
pub(crate) fn dot(f: &FieldSpec, a: &[Elem], b: &[Elem]) -> Elem {
    let mut s = 0;
    for (&x, &y) in a.iter().zip(b) {
        if x != 0 && y != 0 {
            s = f.add(s, f.mul(x, y));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_and_null_space() {
        let f = FieldSpec::new(7).unwrap();
        assert_eq!(det(&f, &[1, 2, 3, 4], 2), f.sub(4, 6));
        assert_eq!(det(&f, &[0, 1, 1, 0], 2), 6);
        assert_eq!(det(&f, &[1, 2, 2, 4], 2), 0);
        let ns = null_space(&f, &[vec![1, 2, 3]], 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert_eq!(dot(&f, v, &[1, 2, 3]), 0);
        }
        assert_eq!(null_space(&f, &[], 2).len(), 2);
    }
}
