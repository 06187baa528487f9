// SPDX-License-Identifier: MIT OR Apache-2.0
//! Exact linear algebra.
//!
//! Over a field, plain Gaussian elimination. Over polynomial rings, the
//! fraction-free Bareiss scheme, where every division is exact; systems
//! over function fields clear denominators row by row and use Cramer's rule
//! with Bareiss determinants, so no intermediate fraction is ever formed.

use alloc::vec;
use alloc::vec::Vec;

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Poly;
use crate::ratexpr::RatExpr;
use crate::ratfn::gcd;

/// Solves the square system `a·x = b` over a field.
pub fn solve_field<F: Field>(a: &[Vec<F>], b: &[F]) -> Result<Vec<F>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch);
    }
    let mut m: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|r| !m[*r][col].is_zero()).ok_or(Error::SingularMatrix)?;
        m.swap(col, piv);
        let inv = m[col][col].inv().unwrap();
        for k in col..=n {
            m[col][k] = m[col][k].mul(&inv);
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for k in col..=n {
                    let v = m[col][k].mul(&f);
                    m[r][k] = m[r][k].sub(&v);
                }
            }
        }
    }
    Ok(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref<F: Field>(m: &mut [Vec<F>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|i| !m[*i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].inv().unwrap();
        for k in col..cols {
            m[r][k] = m[r][k].mul(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for k in col..cols {
                    let v = m[r][k].mul(&f);
                    m[i][k] = m[i][k].sub(&v);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Basis of the right kernel `{x : a·x = 0}` over a field.
pub fn kernel_field<F: Field>(a: &[Vec<F>]) -> Vec<Vec<F>> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut m = a.to_vec();
    let pivots = rref(&mut m);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![F::zero(); cols];
        v[free] = F::one();
        for (row, pc) in pivots.iter().enumerate() {
            v[*pc] = m[row][free].neg();
        }
        out.push(v);
    }
    out
}

/// Any solution of a possibly rectangular system `a·x = b` over a field
/// (free variables set to zero), or `None` if inconsistent.
pub fn solve_any<F: Field>(a: &[Vec<F>], b: &[F]) -> Option<Vec<F>> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![F::zero(); cols];
    for (row, pc) in pivots.iter().enumerate() {
        x[*pc] = m[row][cols].clone();
    }
    Some(x)
}

/// Determinant of a square polynomial matrix by fraction-free elimination.
pub fn bareiss_det(a: &[Vec<Poly<Cyclo>>]) -> Result<Poly<Cyclo>> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch);
    }
    if n == 0 {
        return Ok(Poly::one());
    }
    let mut m = a.to_vec();
    let mut sign = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|r| !m[*r][k].is_zero()) {
                Some(p) => {
                    m.swap(k, p);
                    sign = !sign;
                }
                None => return Ok(Poly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = Poly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if sign { d.neg() } else { d })
}

/// Determinant by Laplace expansion along the first row (independent of
/// [`bareiss_det`]; used for small matrices and cross-checks).
pub fn cofactor_det(a: &[Vec<Poly<Cyclo>>]) -> Poly<Cyclo> {
    let n = a.len();
    match n {
        0 => Poly::one(),
        1 => a[0][0].clone(),
        _ => {
            let mut acc = Poly::zero();
            for j in 0..n {
                if a[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly<Cyclo>>> = a[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
                    .collect();
                let term = a[0][j].mul(&cofactor_det(&minor));
                acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

/// Adjugate of a square polynomial matrix (transposed cofactors).
pub fn adjugate(a: &[Vec<Poly<Cyclo>>]) -> Vec<Vec<Poly<Cyclo>>> {
    let n = a.len();
    let mut out = vec![vec![Poly::zero(); n]; n];
    if n == 1 {
        out[0][0] = Poly::one();
        return out;
    }
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<Poly<Cyclo>>> = a
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != i)
                .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
                .collect();
            let d = cofactor_det(&minor);
            out[j][i] = if (i + j) % 2 == 0 { d } else { d.neg() };
        }
    }
    out
}

fn lcm_poly(a: &Poly<Cyclo>, b: &Poly<Cyclo>) -> Poly<Cyclo> {
    if a.is_one() {
        return b.clone();
    }
    if b.is_one() || a == b {
        return a.clone();
    }
    let g = gcd(a, b);
    a.div_exact(&g).unwrap().mul(b)
}

/// Clears denominators of each row (including an optional right-hand
/// side), giving a polynomial matrix with the same solutions.
fn clear_rows(a: &[Vec<RatExpr>], b: Option<&[RatExpr]>) -> Vec<Vec<Poly<Cyclo>>> {
    a.iter()
        .enumerate()
        .map(|(i, row)| {
            let mut l = Poly::one();
            for e in row.iter().chain(b.map(|b| &b[i])) {
                l = lcm_poly(&l, e.den());
            }
            let mut out: Vec<Poly<Cyclo>> = row
                .iter()
                .map(|e| e.num().mul(&l.div_exact(e.den()).unwrap()))
                .collect();
            if let Some(b) = b {
                out.push(b[i].num().mul(&l.div_exact(b[i].den()).unwrap()));
            }
            out
        })
        .collect()
}

/// Solves `a·x = b` over the fraction field of the polynomial ring.
pub fn fraction_solve(a: &[Vec<RatExpr>], b: &[RatExpr]) -> Result<Vec<RatExpr>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch);
    }
    let m = clear_rows(a, Some(b));
    let base: Vec<Vec<Poly<Cyclo>>> = m.iter().map(|r| r[..n].to_vec()).collect();
    let det = bareiss_det(&base)?;
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mj: Vec<Vec<Poly<Cyclo>>> = m
            .iter()
            .map(|r| {
                let mut row = r[..n].to_vec();
                row[j] = r[n].clone();
                row
            })
            .collect();
        out.push(RatExpr::new(bareiss_det(&mj)?, det.clone())?);
    }
    Ok(out)
}

/// Kernel vector of an `n × (n+1)` matrix of rank `n`, scaled so that its
/// last nonzero entry is one.
pub fn kernel_vector(a: &[Vec<RatExpr>]) -> Result<Vec<RatExpr>> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n + 1) {
        return Err(Error::DimensionMismatch);
    }
    let m = clear_rows(a, None);
    let mut k = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let minor: Vec<Vec<Poly<Cyclo>>> = m
            .iter()
            .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let d = bareiss_det(&minor)?;
        k.push(if j % 2 == 0 { d } else { d.neg() });
    }
    let last = k.iter().rposition(|p| !p.is_zero()).ok_or(Error::KernelNotUnique)?;
    let scale = k[last].clone();
    k.into_iter()
        .map(|p| RatExpr::new(p, scale.clone()))
        .collect()
}

/// Matrix-vector product over a field.
pub fn mat_vec<F: Field>(a: &[Vec<F>], x: &[F]) -> Vec<F> {
    a.iter()
        .map(|r| r.iter().zip(x).fold(F::zero(), |acc, (u, v)| acc.add(&u.mul(v))))
        .collect()
}
