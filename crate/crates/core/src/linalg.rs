//! Rational linear algebra on small integer lattices.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn to_rational(rows: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect()
        })
        .collect()
}

/// Reduced row echelon form; returns the pivot columns.
fn rref(a: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut a = to_rational(rows);
    rref(&mut a).len()
}

/// Primitive integer basis of the rational nullspace of `rows` acting on
/// column vectors of length `cols`.
pub fn nullspace(rows: &[Vec<i64>], cols: usize) -> Vec<Vec<i64>> {
    let mut a = to_rational(rows);
    let pivots = if a.is_empty() {
        Vec::new()
    } else {
        rref(&mut a)
    };
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &f in &free {
        let mut v = vec_zero(cols);
        v[f] = BigRational::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -a[r][f].clone();
        }
        basis.push(primitive(&v));
    }
    basis
}

fn vec_zero(n: usize) -> Vec<BigRational> {
    (0..n).map(|_| BigRational::zero()).collect()
}

fn primitive(v: &[BigRational]) -> Vec<i64> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let g = if g.is_zero() { BigInt::one() } else { g };
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.iter()
        .map(|x| (x / &g * &sign).to_i64().expect("small lattice"))
        .collect()
}

/// Whether `v` lies in the rational span of `basis`.
pub fn in_span(basis: &[Vec<i64>], v: &[i64]) -> bool {
    let mut with = basis.to_vec();
    with.push(v.to_vec());
    rank(basis) == rank(&with)
}
