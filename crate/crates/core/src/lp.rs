//! Dense tableau simplex for small linear programs in canonical form.

use crate::error::{Error, Result};

const EPS: f64 = 1e-12;

/// Maximizes `c·x` subject to `A x ≤ b`, `x ≥ 0`, with `b ≥ 0`.
///
/// The slack basis is feasible, so no phase one is needed. Pivoting uses the
/// largest reduced cost and switches to Bland's rule after a run of
/// degenerate pivots. Returns the optimal value and the primal solution.
pub fn maximize(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<(f64, Vec<f64>)> {
    let rows = a.len();
    let n = c.len();
    if b.len() != rows || a.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("lp dimensions disagree".into()));
    }
    if b.iter().any(|&v| v < 0.0) {
        return Err(Error::InvalidArgument("lp right-hand side must be nonnegative".into()));
    }
    let width = n + rows + 1;
    let mut t = vec![0.0; (rows + 1) * width];
    for (i, row) in a.iter().enumerate() {
        let base = i * width;
        t[base..base + n].copy_from_slice(row);
        t[base + n + i] = 1.0;
        t[base + width - 1] = b[i];
    }
    // objective row holds -c so that negative entries can still improve
    let obj = rows * width;
    for j in 0..n {
        t[obj + j] = -c[j];
    }
    let mut basis: Vec<usize> = (n..n + rows).collect();
    let mut degenerate_run = 0usize;
    let max_iter = 50 * (rows + n) + 1000;
    for _ in 0..max_iter {
        let bland = degenerate_run > 50;
        let mut enter = None;
        let mut best = -EPS;
        for j in 0..n + rows {
            let v = t[obj + j];
            if v < -EPS {
                if bland {
                    enter = Some(j);
                    break;
                }
                if v < best {
                    best = v;
                    enter = Some(j);
                }
            }
        }
        let Some(e) = enter else {
            let mut x = vec![0.0; n];
            for (i, &bv) in basis.iter().enumerate() {
                if bv < n {
                    x[bv] = t[i * width + width - 1];
                }
            }
            return Ok((t[obj + width - 1], x));
        };
        let mut leave = None;
        let mut ratio = f64::INFINITY;
        for i in 0..rows {
            let aij = t[i * width + e];
            if aij > EPS {
                let r = t[i * width + width - 1] / aij;
                let better = match leave {
                    None => true,
                    Some(l) => r < ratio - EPS || (r <= ratio + EPS && basis[i] < basis[l]),
                };
                if better {
                    ratio = r;
                    leave = Some(i);
                }
            }
        }
        let Some(l) = leave else {
            return Err(Error::Numerical("lp is unbounded".into()));
        };
        degenerate_run = if ratio <= EPS { degenerate_run + 1 } else { 0 };
        pivot(&mut t, width, rows, l, e);
        basis[l] = e;
    }
    Err(Error::Numerical("simplex iteration limit reached".into()))
}

fn pivot(t: &mut [f64], width: usize, rows: usize, l: usize, e: usize) {
    let p = t[l * width + e];
    for v in &mut t[l * width..(l + 1) * width] {
        *v /= p;
    }
    let pivot_row: Vec<f64> = t[l * width..(l + 1) * width].to_vec();
    for i in 0..=rows {
        if i == l {
            continue;
        }
        let f = t[i * width + e];
        if f != 0.0 {
            let row = &mut t[i * width..(i + 1) * width];
            for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            row[e] = 0.0;
        }
    }
}
