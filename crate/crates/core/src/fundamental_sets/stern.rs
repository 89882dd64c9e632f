//! Linear relations among log Γ(k/m), k = 1, …, m − 1.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};

/// Homogeneous relation rows on the unknowns v_k = log Γ(k/m).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SternProblem {
    pub m: u32,
    /// Row j, column k − 1 holds the coefficient of v_k.
    pub rows: Vec<Vec<i64>>,
    pub rank: usize,
    pub independent_count: usize,
    /// φ(m)/2
    pub expected: u64,
}

pub fn totient(m: u64) -> u64 {
    let mut n = m;
    let mut out = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// Rank by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let n_rows = a.len();
    let n_cols = a.first().map_or(0, |r| r.len());
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for col in 0..n_cols {
        let Some(p) = (rank..n_rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..n_rows {
            for c in col + 1..n_cols {
                let v = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                // exact by Sylvester's identity
                a[r][c] = v / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

pub fn stern_relation_matrix(m: u32) -> Result<SternProblem> {
    if m < 2 {
        return Err(Error::domain(format!("m = {m} must be at least 2")));
    }
    let cols = (m - 1) as usize;
    let mut rows = Vec::new();
    let add = |row: &mut Vec<i64>, idx: u32, c: i64| {
        if idx % m != 0 {
            row[(idx - 1) as usize] += c;
        }
    };
    for k in 1..=m / 2 {
        let mut row = vec![0; cols];
        add(&mut row, k, 1);
        add(&mut row, m - k, 1);
        rows.push(row);
    }
    for n in 2..=m {
        if m % n != 0 {
            continue;
        }
        let q = m / n;
        for k in 1..=q {
            let mut row = vec![0; cols];
            for j in 0..n {
                add(&mut row, k + j * q, 1);
            }
            add(&mut row, n * k, -1);
            if row.iter().any(|&v| v != 0) {
                rows.push(row);
            }
        }
    }
    let rank = bareiss_rank(&rows);
    Ok(SternProblem {
        m,
        rows,
        rank,
        independent_count: cols - rank,
        expected: totient(m as u64) / 2,
    })
}

pub fn stern_independent_count(m: u32) -> Result<usize> {
    if m < 3 {
        return Err(Error::domain(format!("m = {m} must be at least 3")));
    }
    Ok(stern_relation_matrix(m)?.independent_count)
}
