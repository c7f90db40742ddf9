//! Facets of a full-dimensional polyhedral cone given by integer generators,
//! via the double description method in exact integer arithmetic.
//!
//! The facets of `cone(G)` are the extreme rays of the dual cone
//! `{h : g·h ≥ 0 for all g ∈ G}`. The dual cone is built incrementally: start
//! from the simplicial cone of `n` independent generators and add the
//! remaining constraints one at a time, combining adjacent rays across each
//! new hyperplane. Adjacency uses the combinatorial test on zero sets.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::form::Rational;
use crate::linalg::{self, RowEchelon};

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(len: usize) -> Self {
        BitSet(vec![0; len.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn intersection(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_superset(&self, other: &BitSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct Ray {
    normal: Vec<BigInt>,
    zeros: BitSet,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = linalg::content(&v);
    if !g.is_zero() && g != BigInt::from(1) {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
    v
}

/// Inward facet normals `h` (primitive integer vectors, `g·h ≥ 0` for all
/// generators) of the cone spanned by `generators`, sorted.
///
/// The generators must span the ambient space.
pub fn facets(generators: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
    let Some(first) = generators.first() else {
        return Err(Error::OutOfRange("cone without generators".into()));
    };
    let n = first.len();
    let m = generators.len();

    let mut echelon = RowEchelon::new(n);
    let mut basis = Vec::new();
    for (i, g) in generators.iter().enumerate() {
        if echelon.insert_int(g) {
            basis.push(i);
        }
    }
    if basis.len() < n {
        return Err(Error::NotPerfect { rank: basis.len(), expected: n });
    }

    // dual of a simplicial cone: the columns of the inverse generator matrix
    let rows: Vec<Vec<Rational>> = basis
        .iter()
        .map(|&i| generators[i].iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    let inv = linalg::rational_inverse(&rows).expect("independent rows");
    let mut rays: Vec<Ray> = (0..n)
        .map(|col| {
            let column: Vec<Rational> = inv.iter().map(|row| row[col].clone()).collect();
            let l = linalg::denominator_lcm(column.iter());
            let normal = primitive(column.iter().map(|v| (v * Rational::from_integer(l.clone())).to_integer()).collect());
            let mut zeros = BitSet::new(m);
            for (k, &i) in basis.iter().enumerate() {
                if k != col {
                    zeros.insert(i);
                }
            }
            Ray { normal, zeros }
        })
        .collect();

    let in_basis: Vec<bool> = (0..m).map(|i| basis.contains(&i)).collect();
    for (gi, g) in generators.iter().enumerate() {
        if in_basis[gi] {
            continue;
        }
        let values: Vec<BigInt> = rays.iter().map(|r| dot(&r.normal, g)).collect();
        let positive: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let negative: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        if negative.is_empty() {
            for (r, v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    r.zeros.insert(gi);
                }
            }
            continue;
        }

        let mut created = Vec::new();
        for &p in &positive {
            for &q in &negative {
                let common = rays[p].zeros.intersection(&rays[q].zeros);
                if common.count() + 2 < n {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(k, r)| k != p && k != q && r.zeros.is_superset(&common));
                if blocked {
                    continue;
                }
                let normal: Vec<BigInt> = rays[q]
                    .normal
                    .iter()
                    .zip(&rays[p].normal)
                    .map(|(hq, hp)| &values[p] * hq - &values[q] * hp)
                    .collect();
                let mut zeros = common;
                zeros.insert(gi);
                created.push(Ray { normal: primitive(normal), zeros });
            }
        }

        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + created.len());
        for (r, v) in rays.into_iter().zip(values) {
            if v.is_negative() {
                continue;
            }
            let mut r = r;
            if v.is_zero() {
                r.zeros.insert(gi);
            }
            next.push(r);
        }
        next.extend(created);
        rays = next;
    }

    let mut out: Vec<Vec<BigInt>> = rays.into_iter().map(|r| r.normal).collect();
    out.sort();
    out.dedup();
    Ok(out)
}
