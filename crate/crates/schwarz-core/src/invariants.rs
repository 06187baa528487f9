// SPDX-License-Identifier: MIT OR Apache-2.0
//! Invariant polynomials: the Hessian and bordered-Hessian constructors,
//! Jacobian matrices, and rewriting an invariant as a polynomial in a
//! declared generating set.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::group::MatrixGroup;
use crate::linalg::{cofactor_det, solve_any};
use crate::poly::{Mono, Poly};

type P = Poly<Cyclo>;

/// Matrix of second partials in the first `n` variables.
pub fn hessian_matrix(p: &P, n: usize) -> Vec<Vec<P>> {
    let grad: Vec<P> = (0..n).map(|i| p.diff(i)).collect();
    grad.iter().map(|g| (0..n).map(|j| g.diff(j)).collect()).collect()
}

/// `c · det(∂²P/∂X_i∂X_j)` over the three variables `X_1, X_2, X_3`.
pub fn hessian_invariant(p: &P, c: &Cyclo) -> Result<P> {
    p.homogeneous_degree_in(Some(3))?;
    Ok(cofactor_det(&hessian_matrix(p, 3)).scale(c))
}

/// `c · det [[Hess P, ∇Qᵀ], [∇Q, 0]]` over `X_1, X_2, X_3`.
pub fn bordered_hessian_invariant(p: &P, q: &P, c: &Cyclo) -> Result<P> {
    p.homogeneous_degree_in(Some(3))?;
    q.homogeneous_degree_in(Some(3))?;
    Ok(cofactor_det(&bordered_matrix(p, q)).scale(c))
}

fn bordered_matrix(p: &P, q: &P) -> Vec<Vec<P>> {
    let mut m = hessian_matrix(p, 3);
    let grad: Vec<P> = (0..3).map(|i| q.diff(i)).collect();
    for (row, g) in m.iter_mut().zip(&grad) {
        row.push(g.clone());
    }
    let mut last = grad;
    last.push(P::zero());
    m.push(last);
    m
}

/// Jacobian `∂P_i/∂X_j` of a list of polynomials in `n` variables.
pub fn jacobian(polys: &[P], n: usize) -> Vec<Vec<P>> {
    polys.iter().map(|p| (0..n).map(|j| p.diff(j)).collect()).collect()
}

/// Exponent vectors `e` with `Σ e_i d_i = total`, in lexicographic order.
pub fn weighted_exponents(degrees: &[u32], total: u32) -> Vec<Vec<u32>> {
    fn rec(degrees: &[u32], rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == degrees.len() {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let d = degrees[cur.len()];
        let max = if d == 0 { 0 } else { rem / d };
        for e in (0..=max).rev() {
            cur.push(e);
            rec(degrees, rem - e * d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(degrees, total, &mut Vec::new(), &mut out);
    out
}

/// A list of homogeneous invariants, optionally tied to a group.
#[derive(Clone, Debug)]
pub struct InvariantSet {
    nvars: usize,
    names: Vec<String>,
    polys: Vec<P>,
    degrees: Vec<u32>,
}

impl InvariantSet {
    /// Builds the set, checking that each polynomial is homogeneous in the
    /// first `nvars` variables.
    pub fn new(nvars: usize, names: Vec<String>, polys: Vec<P>) -> Result<Self> {
        if names.len() != polys.len() {
            return Err(Error::DimensionMismatch);
        }
        let degrees = polys
            .iter()
            .map(|p| p.homogeneous_degree_in(Some(nvars)))
            .collect::<Result<Vec<_>>>()?;
        Ok(InvariantSet {
            nvars,
            names,
            polys,
            degrees,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn polys(&self) -> &[P] {
        &self.polys
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Whether every member is fixed by every generator of `g`.
    pub fn check_invariance(&self, g: &MatrixGroup) -> Result<bool> {
        for p in &self.polys {
            if !g.is_invariant(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `∏ P_i^{e_i}` expanded in `X`.
    pub fn product(&self, e: &[u32]) -> P {
        let mut acc = P::one();
        for (p, k) in self.polys.iter().zip(e) {
            if *k > 0 {
                acc = acc.mul(&p.pow(*k));
            }
        }
        acc
    }

    /// Jacobian determinant of the members (requires as many members as
    /// variables).
    pub fn jacobian_det(&self) -> Result<P> {
        if self.polys.len() != self.nvars {
            return Err(Error::DimensionMismatch);
        }
        Ok(cofactor_det(&jacobian(&self.polys, self.nvars)))
    }

    /// Writes a homogeneous invariant `p` as `R(P_1, …, P_N)`; the result is
    /// a polynomial in variables `U_0 … U_{N-1}` standing for the members.
    pub fn rewrite(&self, p: &P) -> Result<P> {
        Rewriter::new(self).rewrite(p)
    }
}

/// Rewriting with a cache of expanded generator products, shared across
/// many calls of the same degree.
pub struct Rewriter<'a> {
    set: &'a InvariantSet,
    products: BTreeMap<Vec<u32>, P>,
}

impl<'a> Rewriter<'a> {
    pub fn new(set: &'a InvariantSet) -> Self {
        Rewriter {
            set,
            products: BTreeMap::new(),
        }
    }

    fn product(&mut self, e: &[u32]) -> P {
        if let Some(p) = self.products.get(e) {
            return p.clone();
        }
        // build from a cached neighbour with one exponent lowered
        let p = match e.iter().position(|k| *k > 0) {
            None => P::one(),
            Some(i) => {
                let mut lower = e.to_vec();
                lower[i] -= 1;
                self.product(&lower).mul(&self.set.polys[i])
            }
        };
        self.products.insert(e.to_vec(), p.clone());
        p
    }

    pub fn rewrite(&mut self, p: &P) -> Result<P> {
        if p.is_zero() {
            return Ok(P::zero());
        }
        let deg = p.homogeneous_degree_in(Some(self.set.nvars))?;
        let combos = weighted_exponents(&self.set.degrees, deg);
        if combos.is_empty() {
            return Err(Error::RewriteFailed(alloc::format!("no generator products of degree {deg}")));
        }
        let expanded: Vec<P> = combos.iter().map(|e| self.product(e)).collect();
        // rows indexed by the X-monomials (other variables ride along in
        // the coefficient, so they are split into separate unknown blocks)
        let (xs, rest) = split_by_rest(p, self.set.nvars);
        let mut out = P::zero();
        for (r, target) in rest.into_iter().zip(xs) {
            let mut rows: BTreeMap<Mono, usize> = BTreeMap::new();
            for q in expanded.iter().chain(core::iter::once(&target)) {
                for (m, _) in q.terms() {
                    let k = rows.len();
                    rows.entry(m.clone()).or_insert(k);
                }
            }
            let mut a = vec![vec![Cyclo::zero(); combos.len()]; rows.len()];
            let mut b = vec![Cyclo::zero(); rows.len()];
            for (j, q) in expanded.iter().enumerate() {
                for (m, c) in q.terms() {
                    a[rows[m]][j] = c.clone();
                }
            }
            for (m, c) in target.terms() {
                b[rows[m]] = c.clone();
            }
            let sol = solve_any(&a, &b).ok_or_else(|| {
                Error::RewriteFailed(alloc::format!("degree {deg} invariant outside the generated subring"))
            })?;
            for (e, c) in combos.iter().zip(sol) {
                if !c.is_zero() {
                    let mut mono: Mono = e.clone();
                    mono.resize(self.set.len(), 0);
                    mono.extend(r.iter().copied());
                    out = out.add(&P::monomial(mono, c));
                }
            }
        }
        Ok(out)
    }
}

/// Splits `p` by the exponents of the variables at index `≥ n`, returning
/// matching lists of `X`-parts and the remaining monomials.
fn split_by_rest(p: &P, n: usize) -> (Vec<P>, Vec<Mono>) {
    let mut groups: BTreeMap<Mono, P> = BTreeMap::new();
    for (m, c) in p.terms() {
        let xs: Mono = m.iter().take(n).copied().collect();
        let rest: Mono = m.iter().skip(n).copied().collect();
        groups.entry(rest).or_insert_with(P::zero).add_term(xs, c);
    }
    let (rests, xs): (Vec<Mono>, Vec<P>) = groups.into_iter().unzip();
    (xs, rests)
}

/// Substitutes the members back into a rewritten expression; the extra
/// variables after the members return to their places after the `X`s.
pub fn expand_rewritten(r: &P, set: &InvariantSet) -> P {
    let k = set.len();
    let mut vals: Vec<P> = set.polys().to_vec();
    for j in 0..r.nvars().saturating_sub(k) {
        vals.push(P::var(set.nvars() + j));
    }
    r.compose(&vals)
}
