//! Fraction-free (Bareiss) determinants.
//!
//! Every intermediate of Bareiss elimination is a minor of the input. For a
//! `{+1,-1}` matrix of order `m` the minors are bounded by `m^(m/2)`, and an
//! update multiplies two `(m-1)`-minors, so `2 (m-1)^(m-1)` bounds every
//! intermediate: `i64` is enough up to `m = 16`, `i128` up to `m = 20`.

use num_bigint::BigInt;
use num_traits::{PrimInt, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::SignMatrix;

/// Largest minor order the engine accepts.
pub const MAX_MINOR_ORDER: usize = 20;

/// Largest order for which `i64` Bareiss cannot overflow on sign matrices.
pub const MAX_I64_ORDER: usize = 16;

/// Determinant of the row-major `m x m` matrix in `a` (destroyed).
///
/// Overflow is the caller's concern; see the module docs for safe orders.
pub fn bareiss<T: PrimInt + Signed>(a: &mut [T], m: usize) -> T {
    debug_assert_eq!(a.len(), m * m);
    if m == 0 {
        return T::one();
    }
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..m - 1 {
        if a[k * m + k].is_zero() {
            let Some(p) = (k + 1..m).find(|&i| !a[i * m + k].is_zero()) else {
                return T::zero();
            };
            for j in k..m {
                a.swap(k * m + j, p * m + j);
            }
            negate = !negate;
        }
        let pivot = a[k * m + k];
        for i in k + 1..m {
            let f = a[i * m + k];
            for j in k + 1..m {
                a[i * m + j] = (pivot * a[i * m + j] - f * a[k * m + j]) / prev;
            }
        }
        prev = pivot;
    }
    let d = a[m * m - 1];
    if negate {
        -d
    } else {
        d
    }
}

/// Bareiss in `i128` with overflow detection.
pub fn bareiss_checked_i128(a: &mut [i128], m: usize) -> Option<i128> {
    if m == 0 {
        return Some(1);
    }
    let mut negate = false;
    let mut prev = 1i128;
    for k in 0..m - 1 {
        if a[k * m + k] == 0 {
            let Some(p) = (k + 1..m).find(|&i| a[i * m + k] != 0) else {
                return Some(0);
            };
            for j in k..m {
                a.swap(k * m + j, p * m + j);
            }
            negate = !negate;
        }
        let pivot = a[k * m + k];
        for i in k + 1..m {
            let f = a[i * m + k];
            for j in k + 1..m {
                let t = pivot
                    .checked_mul(a[i * m + j])?
                    .checked_sub(f.checked_mul(a[k * m + j])?)?;
                a[i * m + j] = t / prev;
            }
        }
        prev = pivot;
    }
    let d = a[m * m - 1];
    Some(if negate { -d } else { d })
}

pub fn bareiss_big(mut a: Vec<BigInt>, m: usize) -> BigInt {
    if m == 0 {
        return BigInt::from(1);
    }
    let mut negate = false;
    let mut prev = BigInt::from(1);
    for k in 0..m - 1 {
        if a[k * m + k].is_zero() {
            let Some(p) = (k + 1..m).find(|&i| !a[i * m + k].is_zero()) else {
                return BigInt::zero();
            };
            for j in k..m {
                a.swap(k * m + j, p * m + j);
            }
            negate = !negate;
        }
        let pivot = a[k * m + k].clone();
        for i in k + 1..m {
            let f = a[i * m + k].clone();
            for j in k + 1..m {
                let t = &pivot * &a[i * m + j] - &f * &a[k * m + j];
                a[i * m + j] = t / &prev;
            }
        }
        prev = pivot;
    }
    let d = a.pop().expect("nonempty");
    if negate {
        -d
    } else {
        d
    }
}

/// Determinant of an integer matrix, exact, falling back to big integers on overflow.
pub fn det_integer(a: &[i64], m: usize) -> BigInt {
    let mut wide: Vec<i128> = a.iter().map(|&v| v as i128).collect();
    match bareiss_checked_i128(&mut wide, m) {
        Some(d) => BigInt::from(d),
        None => bareiss_big(a.iter().map(|&v| BigInt::from(v)).collect(), m),
    }
}

/// Determinant of a square sign matrix given as row-major `i8` entries.
pub fn det_sign_entries(entries: &[i8], m: usize) -> Result<i128> {
    if m > MAX_MINOR_ORDER {
        return Err(Error::UnsupportedOrder {
            order: m,
            max: MAX_MINOR_ORDER,
        });
    }
    Ok(if m <= MAX_I64_ORDER {
        let mut a: Vec<i64> = entries.iter().map(|&v| v as i64).collect();
        bareiss(&mut a, m) as i128
    } else {
        let mut a: Vec<i128> = entries.iter().map(|&v| v as i128).collect();
        bareiss(&mut a, m)
    })
}

/// Exact determinant of the submatrix of `a` on the given strictly increasing
/// row and column indices.
pub fn det_exact(a: &SignMatrix, rows: &[usize], cols: &[usize]) -> Result<i128> {
    if rows.len() != cols.len() {
        return Err(Error::Shape(format!(
            "{} rows and {} columns do not select a square submatrix",
            rows.len(),
            cols.len()
        )));
    }
    if rows.len() > MAX_MINOR_ORDER {
        return Err(Error::UnsupportedOrder {
            order: rows.len(),
            max: MAX_MINOR_ORDER,
        });
    }
    let sub = a.submatrix(rows, cols)?;
    det_sign_entries(sub.as_slice(), rows.len())
}

/// Exact `det(B B^T)` for a sign matrix with no more rows than columns.
pub fn gram_determinant(b: &SignMatrix) -> Result<BigInt> {
    if b.rows() > b.cols() {
        return Err(Error::Shape(format!(
            "gram determinant needs rows <= cols, got {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    if b.rows() > MAX_MINOR_ORDER {
        return Err(Error::UnsupportedOrder {
            order: b.rows(),
            max: MAX_MINOR_ORDER,
        });
    }
    Ok(det_integer(&b.gram(), b.rows()))
}
