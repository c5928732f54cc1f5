//! Householder tridiagonalization and implicit QL with Wilkinson-type shifts,
//! following the EISPACK `tred2`/`tql2` pair.
//!
//! Matrices are square, column-major, `z[i + j * n]` holding row `i`,
//! column `j`.

use crate::error::{Error, Result};

/// QL sweeps allowed per eigenvalue before giving up.
pub const ITERATION_BUDGET: usize = 30;

/// Reduces the symmetric matrix held in `z` to tridiagonal form.
///
/// On return `d` holds the diagonal, `e[1..]` the subdiagonal (`e[0] = 0`)
/// and `z` the accumulated orthogonal transformation.
pub fn householder(z: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    debug_assert_eq!(z.len(), n * n);
    let at = |i: usize, j: usize| i + j * n;
    if n == 0 {
        return;
    }
    for j in 0..n {
        d[j] = z[at(n - 1, j)];
    }

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for dk in &d[..i] {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = z[at(i - 1, j)];
                z[at(i, j)] = 0.0;
                z[at(j, i)] = 0.0;
            }
        } else {
            for dk in &mut d[..i] {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }

            // apply similarity to the remaining columns
            for j in 0..i {
                f = d[j];
                z[at(j, i)] = f;
                g = e[j] + z[at(j, j)] * f;
                for k in (j + 1)..i {
                    g += z[at(k, j)] * d[k];
                    e[k] += z[at(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    z[at(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = z[at(i - 1, j)];
                z[at(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    // accumulate transformations
    for i in 0..n - 1 {
        z[at(n - 1, i)] = z[at(i, i)];
        z[at(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = z[at(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += z[at(k, i + 1)] * z[at(k, j)];
                }
                for k in 0..=i {
                    z[at(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            z[at(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = z[at(n - 1, j)];
        z[at(n - 1, j)] = 0.0;
    }
    z[at(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Diagonalizes the tridiagonal matrix `(d, e)` from [`householder`],
/// applying the rotations to the columns of `z`. Eigenvalues are left
/// unsorted in `d`.
pub fn implicit_ql(z: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) -> Result<()> {
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        // e[n-1] == 0 guarantees m < n

        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > ITERATION_BUDGET {
                    return Err(Error::NoConvergence {
                        index: l,
                        budget: ITERATION_BUDGET,
                    });
                }

                // shift from the leading 2x2 block
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    let (left, right) = z.split_at_mut((i + 1) * n);
                    let zi = &mut left[i * n..];
                    let zi1 = &mut right[..n];
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let hk = *b;
                        *b = s * *a + c * hk;
                        *a = c * *a - s * hk;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}
