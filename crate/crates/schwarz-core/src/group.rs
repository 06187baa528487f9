// SPDX-License-Identifier: MIT OR Apache-2.0
//! Finite matrix groups over cyclotomic fields and their linear action on
//! polynomials.
//!
//! A matrix `g` acts by the substitution `X_j ↦ Σ_l X_l g_{lj}`, i.e. the
//! row vector of variables is multiplied by `g` on the right.

use alloc::vec;
use alloc::vec::Vec;

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Poly;

/// Dense square matrix over `Q(ζ_N)`.
pub type Matrix = Vec<Vec<Cyclo>>;

/// Default bound on the number of elements produced by closure.
pub const DEFAULT_ORDER_BOUND: usize = 10_000;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Cyclo::one() } else { Cyclo::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let k = b.len();
    let mut out = vec![vec![Cyclo::zero(); m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut acc = Cyclo::zero();
            for l in 0..k {
                if !a[i][l].is_zero() && !b[l][j].is_zero() {
                    acc = acc.add(&a[i][l].mul(&b[l][j]));
                }
            }
            out[i][j] = acc;
        }
    }
    out
}

/// Determinant over `Q(ζ_N)` by Gaussian elimination.
pub fn mat_det(a: &Matrix) -> Cyclo {
    let n = a.len();
    let mut m = a.clone();
    let mut det = Cyclo::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|r| !m[*r][c].is_zero()) else {
            return Cyclo::zero();
        };
        if p != c {
            m.swap(p, c);
            det = det.neg();
        }
        det = det.mul(&m[c][c]);
        let inv = m[c][c].inv().unwrap();
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].mul(&inv);
            for k in c..n {
                let v = m[c][k].mul(&f);
                m[r][k] = m[r][k].sub(&v);
            }
        }
    }
    det
}

fn is_square(a: &Matrix) -> bool {
    a.iter().all(|r| r.len() == a.len())
}

/// Finite group given by generators, with all elements enumerated.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    dim: usize,
    generators: Vec<Matrix>,
    elements: Vec<Matrix>,
}

/// Breadth-first closure of the generated group.
pub fn close_group(gens: &[Matrix], order_bound: usize) -> Result<MatrixGroup> {
    let dim = gens.first().map_or(0, |g| g.len());
    for g in gens {
        if g.len() != dim || !is_square(g) {
            return Err(Error::DimensionMismatch);
        }
        if mat_det(g).is_zero() {
            return Err(Error::NonInvertibleGenerator);
        }
    }
    let mut elements = vec![identity(dim)];
    let mut frontier = elements.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for f in &frontier {
            for g in gens {
                let h = mat_mul(f, g);
                if !elements.contains(&h) {
                    if elements.len() >= order_bound {
                        return Err(Error::GroupOrderBound(order_bound));
                    }
                    elements.push(h.clone());
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    Ok(MatrixGroup {
        dim,
        generators: gens.to_vec(),
        elements,
    })
}

impl MatrixGroup {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    /// Closure under products and inverses (every element has its inverse
    /// in the list, and products of generators stay inside).
    pub fn is_closed(&self) -> bool {
        let id = identity(self.dim);
        self.elements.iter().all(|g| {
            self.generators.iter().all(|h| self.elements.contains(&mat_mul(g, h)))
                && self.elements.iter().any(|h| mat_mul(g, h) == id)
        })
    }

    /// Whether `p` is fixed by every generator.
    pub fn is_invariant(&self, p: &Poly<Cyclo>) -> Result<bool> {
        for g in &self.generators {
            if act(g, p)? != *p {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Reynolds operator `(1/|G|) Σ_g g·p`.
    pub fn reynolds(&self, p: &Poly<Cyclo>) -> Result<Poly<Cyclo>> {
        let mut acc = Poly::zero();
        for g in &self.elements {
            acc = acc.add(&act(g, p)?);
        }
        Ok(acc.scale(&Cyclo::int(self.elements.len() as i64).inv().unwrap()))
    }
}

/// The linear substitution `X_j ↦ Σ_l X_l g_{lj}`; variables with index
/// `≥ dim` are left untouched.
pub fn act(g: &Matrix, p: &Poly<Cyclo>) -> Result<Poly<Cyclo>> {
    if !is_square(g) {
        return Err(Error::DimensionMismatch);
    }
    let n = g.len();
    let forms: Vec<Poly<Cyclo>> = (0..n)
        .map(|j| {
            let mut f = Poly::zero();
            for (l, row) in g.iter().enumerate() {
                if !row[j].is_zero() {
                    f = f.add(&Poly::var(l).scale(&row[j]));
                }
            }
            f
        })
        .collect();
    Ok(p.compose(&forms))
}
