//! Weyl groups of the classical root systems and an averaging oracle for
//! the dimensions of their invariant rings.
//!
//! The group acts on the span of the simple roots, placed in degree 2. The
//! dimension of the invariants in degree `2k` is the rank of the Reynolds
//! operator `Σ_w Sym^k(w)` on the monomials of degree `k`.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::QMatrix;
use crate::module::GradedDimVector;
use crate::par::{self, Execution};
use crate::poly::GradedPolyRing;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RootType {
    A,
    B,
    C,
    D,
}

impl FromStr for RootType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(RootType::A),
            "B" | "b" => Ok(RootType::B),
            "C" | "c" => Ok(RootType::C),
            "D" | "d" => Ok(RootType::D),
            other => Err(Error::UnsupportedType(other.to_string())),
        }
    }
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

/// `|W|` of the root system of the given type and rank.
pub fn weyl_order(t: RootType, rank: u32) -> u64 {
    let n = rank as u64;
    match t {
        RootType::A => factorial(n + 1),
        RootType::B | RootType::C => (1 << n) * factorial(n),
        RootType::D if n == 1 => 1,
        RootType::D => (1 << (n - 1)) * factorial(n),
    }
}

/// Cohomological degrees of the generators of `H^*(BK)` for the compact
/// form: twice the fundamental invariant degrees.
pub fn invariant_degrees(t: RootType, rank: u32) -> Vec<i32> {
    let n = rank as i32;
    let mut out: Vec<i32> = match t {
        RootType::A => (2..=n + 1).map(|d| 2 * d).collect(),
        RootType::B | RootType::C => (1..=n).map(|i| 4 * i).collect(),
        // SO(2) is a circle
        RootType::D if n == 1 => vec![2],
        RootType::D => (1..n).map(|i| 4 * i).chain([2 * n]).collect(),
    };
    out.sort_unstable();
    out
}

/// Cartan matrix with `s_i(α_j) = α_j - a[i][j] α_i`.
pub fn cartan_matrix(t: RootType, rank: u32) -> Vec<Vec<i64>> {
    let n = rank as usize;
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let link = |a: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match t {
        RootType::D if n == 1 => return vec![vec![0]],
        RootType::D if n == 2 => {}
        RootType::D => {
            for i in 0..n - 2 {
                link(&mut a, i, i + 1);
            }
            link(&mut a, n - 3, n - 1);
        }
        _ => {
            for i in 0..n.saturating_sub(1) {
                link(&mut a, i, i + 1);
            }
        }
    }
    if n >= 2 {
        match t {
            RootType::B => a[n - 1][n - 2] = -2,
            RootType::C => a[n - 2][n - 1] = -2,
            _ => {}
        }
    }
    a
}

/// Integer matrix acting on column vectors.
pub type IntMatrix = Vec<Vec<i64>>;

/// Simple reflections on the span of the simple roots. `D_1` has none.
pub fn simple_reflections(t: RootType, rank: u32) -> Vec<IntMatrix> {
    if t == RootType::D && rank == 1 {
        return vec![];
    }
    let a = cartan_matrix(t, rank);
    let n = rank as usize;
    (0..n)
        .map(|i| {
            let mut m = identity(n);
            // column j is the image of α_j
            for j in 0..n {
                m[i][j] -= a[i][j];
            }
            m
        })
        .collect()
}

fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    (0..n)
        .map(|i| (0..m).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

/// All elements of the group generated by `generators`, acting on `n` variables.
pub fn group_closure(n: usize, generators: &[IntMatrix]) -> Vec<IntMatrix> {
    let id = identity(n);
    let mut seen: HashSet<IntMatrix> = HashSet::from([id.clone()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in generators {
            let h = mat_mul(s, &g);
            if seen.insert(h.clone()) {
                out.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    out
}

type IntPoly = BTreeMap<Vec<u32>, i64>;

fn poly_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut out = IntPoly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            let e = out.entry(m).or_insert(0);
            *e += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn monomials(n: usize, k: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if k == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=k).rev() {
        for rest in monomials(n - 1, k - first) {
            let mut m = vec![first];
            m.extend(rest);
            out.push(m);
        }
    }
    out
}

/// Matrix of `w` on the monomials of degree `k`; columns indexed like `basis`.
fn sym_power(w: &IntMatrix, basis: &[Vec<u32>], index: &BTreeMap<Vec<u32>, usize>) -> Vec<Vec<i64>> {
    let n = w.len();
    // image of the j-th variable: Σ_i w[i][j] y_i
    let images: Vec<IntPoly> = (0..n)
        .map(|j| {
            (0..n)
                .filter(|&i| w[i][j] != 0)
                .map(|i| {
                    let mut m = vec![0; n];
                    m[i] = 1;
                    (m, w[i][j])
                })
                .collect()
        })
        .collect();
    let mut out = vec![vec![0i64; basis.len()]; basis.len()];
    for (col, mono) in basis.iter().enumerate() {
        let mut p: IntPoly = IntPoly::from([(vec![0; n], 1)]);
        for (j, &e) in mono.iter().enumerate() {
            for _ in 0..e {
                p = poly_mul(&p, &images[j]);
            }
        }
        for (m, c) in p {
            out[index[&m]][col] += c;
        }
    }
    out
}

/// Degreewise dimensions of the invariants of the group generated by
/// `generators` acting on `n` variables of degree 2, up to `degree_bound`.
pub fn invariant_dims_oracle(n: usize, generators: &[IntMatrix], degree_bound: i32) -> GradedDimVector {
    invariant_dims_oracle_with(Execution::Auto, n, generators, degree_bound)
}

pub fn invariant_dims_oracle_with(exec: Execution, n: usize, generators: &[IntMatrix], degree_bound: i32) -> GradedDimVector {
    let group = group_closure(n, generators);
    let mut out = GradedDimVector::new();
    for k in 0..=(degree_bound / 2) as u32 {
        let basis = monomials(n, k);
        let index: BTreeMap<Vec<u32>, usize> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let parts = par::map(exec, &group, |w| sym_power(w, &basis, &index));
        let size = basis.len();
        let mut total = vec![vec![0i64; size]; size];
        for p in parts {
            for (row, prow) in total.iter_mut().zip(p) {
                for (x, y) in row.iter_mut().zip(prow) {
                    *x += y;
                }
            }
        }
        let flat: Vec<i64> = total.into_iter().flatten().collect();
        out.add(2 * k as i32, QMatrix::from_i64(size, size, &flat).rank());
    }
    out
}

/// Dimensions of a polynomial ring on generators of the given even degrees.
pub fn hilbert_dims(degrees: &[i32], degree_bound: i32) -> GradedDimVector {
    let ring = GradedPolyRing::new(degrees.iter().enumerate().map(|(i, &d)| (format!("c{}", i + 1), d)))
        .expect("invariant degrees are even and positive");
    GradedDimVector::from_pairs((0..=degree_bound).map(|d| (d, ring.dim(d))))
}

/// Checks the catalog degrees of one factor against the oracle.
pub fn verify_catalog(t: RootType, rank: u32, degree_bound: i32) -> bool {
    let n = rank as usize;
    let oracle = invariant_dims_oracle(n, &simple_reflections(t, rank), degree_bound);
    oracle == hilbert_dims(&invariant_degrees(t, rank), degree_bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_match_closures() {
        for t in [RootType::A, RootType::B, RootType::C, RootType::D] {
            for rank in 1..=4 {
                let g = group_closure(rank as usize, &simple_reflections(t, rank));
                assert_eq!(g.len() as u64, weyl_order(t, rank), "{t}{rank}");
                let prod: i64 = invariant_degrees(t, rank).iter().map(|d| (*d / 2) as i64).product();
                assert_eq!(prod as u64, weyl_order(t, rank), "{t}{rank}");
            }
        }
    }

    #[test]
    fn small_oracle_examples() {
        let trivial = invariant_dims_oracle(1, &[], 8);
        assert_eq!(trivial, GradedDimVector::from_pairs([(0, 1), (2, 1), (4, 1), (6, 1), (8, 1)]));
        let sign = invariant_dims_oracle(1, &[vec![vec![-1]]], 8);
        assert_eq!(sign, GradedDimVector::from_pairs([(0, 1), (4, 1), (8, 1)]));
        let swap = invariant_dims_oracle(2, &[vec![vec![0, 1], vec![1, 0]]], 8);
        assert_eq!(swap, GradedDimVector::from_pairs([(0, 1), (2, 1), (4, 2), (6, 2), (8, 3)]));
        assert_eq!(swap, hilbert_dims(&[2, 4], 8));
    }

    #[test]
    fn catalog_rank_two() {
        for t in [RootType::A, RootType::B, RootType::C, RootType::D] {
            assert!(verify_catalog(t, 2, 12), "{t}2");
        }
    }

    #[test]
    fn parse_types() {
        assert_eq!("B".parse::<RootType>().unwrap(), RootType::B);
        assert!(matches!("E".parse::<RootType>(), Err(Error::UnsupportedType(_))));
    }
}
