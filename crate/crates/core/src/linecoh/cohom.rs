//! Cohomology of line bundles O(a,b) in the monomial cone model.
//!
//! On P¹ with coordinates (s,t), H⁰(O(p)) has basis s^α t^(p-α) with
//! 0 ≤ α ≤ p and H¹(O(p)) has basis s^α t^(p-α) with both exponents ≤ -1.
//! Cohomology on P¹×P¹ is the tensor product (Künneth), and multiplication
//! by a form multiplies monomials and discards those leaving the cone.
//!
//! A basis element is recorded as (α, β): the exponents of s and u. The
//! exponents of t and v follow from the twist.

use crate::bipoly::{BiForm, Twist};
use crate::exactla::Matrix;

pub fn h0_p1(p: i64) -> usize {
    (p + 1).max(0) as usize
}

pub fn h1_p1(p: i64) -> usize {
    (-p - 1).max(0) as usize
}

/// Index of s^α t^(p-α) in the H⁰ (k = 0) or H¹ (k = 1) basis on P¹.
#[inline]
fn p1_index(k: usize, p: i64, alpha: i64) -> Option<usize> {
    match k {
        0 if 0 <= alpha && alpha <= p => Some((p - alpha) as usize),
        1 if alpha <= -1 && p - alpha <= -1 => Some((-1 - alpha) as usize),
        _ => None,
    }
}

fn p1_basis(k: usize, p: i64) -> Vec<i64> {
    match k {
        0 => (0..=p).rev().collect(),
        _ => ((p + 1)..=-1).rev().collect(),
    }
}

fn p1_dim(k: usize, p: i64) -> usize {
    if k == 0 {
        h0_p1(p)
    } else {
        h1_p1(p)
    }
}

/// The Künneth blocks of H^i as (k_s, k_u) pairs, in basis order.
fn blocks(i: usize) -> &'static [(usize, usize)] {
    match i {
        0 => &[(0, 0)],
        1 => &[(0, 1), (1, 0)],
        2 => &[(1, 1)],
        _ => panic!("cohomological index {i} out of range"),
    }
}

pub fn kunneth_dim(i: usize, t: Twist) -> usize {
    blocks(i)
        .iter()
        .map(|&(ks, ku)| p1_dim(ks, t.a) * p1_dim(ku, t.b))
        .sum()
}

/// Monomial basis of H^i(O(t)) as (α, β) exponent pairs.
pub fn coh_basis(i: usize, t: Twist) -> Vec<(i64, i64)> {
    let mut out = Vec::with_capacity(kunneth_dim(i, t));
    for &(ks, ku) in blocks(i) {
        for alpha in p1_basis(ks, t.a) {
            for beta in p1_basis(ku, t.b) {
                out.push((alpha, beta));
            }
        }
    }
    out
}

/// Position of the monomial (α, β) in the H^i(O(t)) basis, if it lies in the cone.
pub fn coh_index(i: usize, t: Twist, alpha: i64, beta: i64) -> Option<usize> {
    let mut offset = 0;
    for &(ks, ku) in blocks(i) {
        if let (Some(x), Some(y)) = (p1_index(ks, t.a, alpha), p1_index(ku, t.b, beta)) {
            return Some(offset + x * p1_dim(ku, t.b) + y);
        }
        offset += p1_dim(ks, t.a) * p1_dim(ku, t.b);
    }
    None
}

/// Multiplication by `f` as a map H^i(O(t)) → H^i(O(t + deg f)).
pub fn coh_action(f: &BiForm, i: usize, t: Twist) -> Matrix {
    let dst = t + f.degree();
    let cols = kunneth_dim(i, t);
    let rows = kunneth_dim(i, dst);
    let mut m = Matrix::zeros(f.field(), rows, cols);
    if rows == 0 || cols == 0 {
        return m;
    }
    for (col, (alpha, beta)) in coh_basis(i, t).into_iter().enumerate() {
        for (fi, fj, c) in f.terms() {
            if let Some(r) = coh_index(i, dst, alpha + fi, beta + fj) {
                m[(r, col)] = &m[(r, col)] + c;
            }
        }
    }
    m
}

/// Euler characteristic of O(a,b).
pub fn euler_char_line(t: Twist) -> i64 {
    (t.a + 1) * (t.b + 1)
}
