#![allow(dead_code)]

use std::path::PathBuf;

use signminors::{parse_sign_matrix, Format, SignMatrix};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/had16")
}

pub fn class_path(i: usize) -> PathBuf {
    data_dir().join(format!("class-{i}.had"))
}

/// The five shipped order-16 Hadamard matrices.
pub fn order16() -> Vec<SignMatrix> {
    (0..5)
        .map(|i| {
            let text = std::fs::read_to_string(class_path(i)).expect("data file");
            parse_sign_matrix(&text, Format::Had).expect("valid had file")
        })
        .collect()
}

/// Determinant by cofactor expansion along the first row, in `i128`.
pub fn cofactor(a: &[i64], m: usize) -> i128 {
    if m == 0 {
        return 1;
    }
    if m == 1 {
        return a[0] as i128;
    }
    let mut total = 0i128;
    let mut minor = Vec::with_capacity((m - 1) * (m - 1));
    for c in 0..m {
        if a[c] == 0 {
            continue;
        }
        minor.clear();
        for i in 1..m {
            for j in 0..m {
                if j != c {
                    minor.push(a[i * m + j]);
                }
            }
        }
        let t = a[c] as i128 * cofactor(&minor, m - 1);
        total += if c % 2 == 0 { t } else { -t };
    }
    total
}

/// All `k`-subsets of `0..n` in lexicographic order, by plain recursion.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Every order-`m` minor of `a` by cofactor expansion.
pub fn all_minors(a: &SignMatrix, m: usize) -> Vec<i128> {
    let mut out = Vec::new();
    for rows in subsets(a.rows(), m) {
        for cols in subsets(a.cols(), m) {
            let e: Vec<i64> = rows
                .iter()
                .flat_map(|&r| cols.iter().map(move |&c| (r, c)))
                .map(|(r, c)| a.get(r, c) as i64)
                .collect();
            out.push(cofactor(&e, m));
        }
    }
    out
}
