//! Exact rank of integer matrices.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Rank over the rationals by fraction-free (Bareiss) elimination. Rows may
/// be given in any order.
pub fn rank_bareiss(mut rows: Vec<Vec<BigInt>>) -> usize {
    let Some(width) = rows.first().map(Vec::len) else {
        return 0;
    };
    debug_assert!(rows.iter().all(|r| r.len() == width));
    let height = rows.len();
    let mut rank = 0;
    let mut prev_pivot = BigInt::from(1);
    for col in 0..width {
        if rank == height {
            break;
        }
        let Some(pivot_row) = (rank..height).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let (top, below) = rows.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = pivot_row[col].clone();
        for row in below {
            let factor = row[col].clone();
            for (a, b) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                // (pivot * a - factor * b) / previous pivot, exact
                let v = &pivot * &*a - &factor * b;
                *a = v / &prev_pivot;
            }
        }
        prev_pivot = pivot;
        rank += 1;
    }
    rank
}

/// Rank modulo the prime `p`. Never exceeds the rational rank.
pub fn rank_mod_p(rows: &[Vec<BigInt>], p: u64) -> usize {
    let Some(width) = rows.first().map(Vec::len) else {
        return 0;
    };
    let modulus = BigInt::from(p);
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    let v = ((x % &modulus) + &modulus) % &modulus;
                    v.abs().try_into().expect("reduced below p")
                })
                .collect()
        })
        .collect();
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let inv = |a: u64| {
        // Fermat
        let (mut base, mut exp, mut acc) = (a, p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            exp >>= 1;
        }
        acc
    };
    let height = m.len();
    let mut rank = 0;
    for col in 0..width {
        let Some(pr) = (rank..height).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pr);
        let scale = inv(m[rank][col]);
        let (top, below) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in below {
            let f = mul(row[col], scale);
            if f == 0 {
                continue;
            }
            for (a, &b) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *a = (*a + p - mul(f, b)) % p;
            }
        }
        rank += 1;
        if rank == height {
            break;
        }
    }
    rank
}
