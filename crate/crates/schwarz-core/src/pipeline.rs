// SPDX-License-Identifier: MIT OR Apache-2.0
//! From invariant evaluations to dynamical systems and back to linear
//! differential equations.
//!
//! Variable conventions: polynomials in `X` space use indices `0..n` for
//! `X_1..X_n`, followed by the rational-function variables (independent
//! variable and parameters) shifted by `n`. Rational functions and radical
//! elements use the unshifted indices.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::Ideal;
use crate::invariants::{jacobian, InvariantSet, Rewriter};
use crate::linalg::{adjugate, bareiss_det, cofactor_det, fraction_solve, kernel_field, solve_any, solve_field};
use crate::ode::{conjugate_by_factor, GaugeFactor, LinearODE};
use crate::poly::{Mono, Poly};
use crate::radical::{RadicalElem, RadicalMonomial, Tower, TowerBuilder};
use crate::ratexpr::RatExpr;
use crate::ratfn::{gcd, RatFn};

type P = Poly<Cyclo>;

/// Default total-degree safety bound.
pub const DEFAULT_DEGREE_BOUND: u32 = 200;

/// A rational function of `t` and parameters viewed in `X` space.
pub fn lift_ratfn(r: &RatFn, n: usize) -> RatExpr {
    RatExpr::new(r.num().shift_vars(n), r.den().shift_vars(n)).expect("nonzero denominator")
}

/// Values `Φ(P_i)` of the members of an invariant set.
#[derive(Clone, Debug)]
pub struct EvaluationMap {
    values: Vec<RadicalElem>,
}

impl EvaluationMap {
    /// All values are embedded in the largest of their towers, which must
    /// contain the others as prefixes.
    pub fn new(values: Vec<RadicalElem>) -> Result<Self> {
        let mut tower: Option<Arc<Tower>> = None;
        for v in &values {
            if let Some(t) = v.tower() {
                tower = match tower {
                    None => Some(t.clone()),
                    Some(cur) if cur.is_prefix_of(t) => Some(t.clone()),
                    Some(cur) if t.is_prefix_of(&cur) => Some(cur),
                    Some(_) => return Err(Error::TowerMismatch),
                };
            }
        }
        let values = match &tower {
            Some(t) => values.iter().map(|v| v.embed(t)).collect::<Result<Vec<_>>>()?,
            None => values,
        };
        Ok(EvaluationMap { values })
    }

    pub fn values(&self) -> &[RadicalElem] {
        &self.values
    }

    pub fn tower(&self) -> Option<&Arc<Tower>> {
        self.values.iter().find_map(|v| v.tower())
    }

    /// `Φ(∏ P_i^{e_i})`.
    pub fn eval_product(&self, e: &[u32]) -> RadicalElem {
        let mut acc = RadicalElem::one();
        for (v, k) in self.values.iter().zip(e) {
            if *k > 0 {
                acc = acc.mul(&v.pow(*k));
            }
        }
        acc
    }

    /// Evaluates a polynomial in the member variables `U_0..U_{k-1}`
    /// followed by rational-function variables.
    pub fn eval(&self, p: &P) -> Result<RadicalElem> {
        let k = self.values.len();
        let mut vals = self.values.clone();
        for j in 0..p.nvars().saturating_sub(k) {
            vals.push(RadicalElem::from_ratfn(RatFn::var(j)));
        }
        p.eval_field(&vals, |c| RadicalElem::constant(c.clone()))
    }
}

/// First-order system `dX/dt = F` associated with primary invariants and
/// their evaluations.
#[derive(Clone, Debug)]
pub struct DynSystem {
    nvars: usize,
    var: usize,
    primaries: Vec<P>,
    targets: Vec<RatFn>,
    slopes: Vec<RatFn>,
    rhs: Vec<RatExpr>,
    autonomous: bool,
}

/// Builds `F = M(X)^{-1} (Φ(P_i)')_i` for primaries with rational
/// evaluations `targets`, differentiating along variable `var`.
pub fn build_associated_system(nvars: usize, primaries: Vec<P>, targets: Vec<RatFn>, var: usize) -> Result<DynSystem> {
    if primaries.len() != nvars || targets.len() != nvars {
        return Err(Error::DimensionMismatch);
    }
    let slopes: Vec<RatFn> = targets.iter().map(|f| f.diff(var)).collect();
    if slopes.iter().all(|s| s.is_zero()) {
        return Err(Error::Invalid("targets do not depend on the variable, so the flow is trivial".into()));
    }
    let m: Vec<Vec<RatExpr>> = jacobian(&primaries, nvars)
        .into_iter()
        .map(|row| row.into_iter().map(RatExpr::from_poly).collect())
        .collect();
    let b: Vec<RatExpr> = slopes.iter().map(|s| lift_ratfn(s, nvars)).collect();
    let rhs = fraction_solve(&m, &b).map_err(|e| match e {
        Error::SingularMatrix => Error::Invalid("invariants not algebraically independent".into()),
        e => e,
    })?;
    let autonomous = slopes.iter().all(|s| !s.depends_on(var));
    Ok(DynSystem {
        nvars,
        var,
        primaries,
        targets,
        slopes,
        rhs,
        autonomous,
    })
}

impl DynSystem {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn var(&self) -> usize {
        self.var
    }

    pub fn primaries(&self) -> &[P] {
        &self.primaries
    }

    pub fn targets(&self) -> &[RatFn] {
        &self.targets
    }

    /// `dΦ(P_i)/dt`; free of the flow variable exactly when the system is autonomous.
    pub fn slopes(&self) -> &[RatFn] {
        &self.slopes
    }

    pub fn rhs(&self) -> &[RatExpr] {
        &self.rhs
    }

    pub fn is_autonomous(&self) -> bool {
        self.autonomous
    }

    /// `M(X)·F = (Φ(P_i)')_i` checked exactly.
    pub fn defining_identity_holds(&self) -> bool {
        jacobian(&self.primaries, self.nvars).iter().zip(&self.slopes).all(|(row, s)| {
            let mut acc = RatExpr::zero();
            for (m, f) in row.iter().zip(&self.rhs) {
                acc = acc.add(&RatExpr::from_poly(m.clone()).mul(f));
            }
            acc == lift_ratfn(s, self.nvars)
        })
    }

    /// The orbit ideal `⟨P_i − Φ(P_i)⟩` over the rational-function field.
    pub fn orbit_ideal(&self, degree_bound: u32) -> Result<Ideal<RatFn>> {
        let gens = self
            .primaries
            .iter()
            .zip(&self.targets)
            .map(|(p, f)| p.map_coeffs(|c| RatFn::constant(c.clone())).sub(&Poly::constant(f.clone())))
            .collect();
        Ideal::new(gens, degree_bound)
    }

    /// `∂e/∂t + Σ_j ∂e/∂X_j F_j`.
    pub fn total_derivative(&self, e: &RatExpr) -> RatExpr {
        let mut acc = e.diff(self.nvars + self.var);
        for (j, f) in self.rhs.iter().enumerate() {
            let d = e.diff(j);
            if !d.is_zero() {
                acc = acc.add(&d.mul(f));
            }
        }
        acc
    }

    /// Component-wise total derivative of a vector of expressions.
    pub fn total_derivative_along(&self, exprs: &[RatExpr]) -> Vec<RatExpr> {
        exprs.iter().map(|e| self.total_derivative(e)).collect()
    }

    /// Whether `F(X g) = F(X) g` for the matrix `g` (row-vector action).
    pub fn is_equivariant(&self, g: &crate::group::Matrix) -> Result<bool> {
        let forms = self.linear_forms(g)?;
        let moved: Vec<RatExpr> = self.rhs.iter().map(|f| f.compose(&forms)).collect::<Result<_>>()?;
        for (j, m) in moved.iter().enumerate() {
            let mut rhs = RatExpr::zero();
            for (l, f) in self.rhs.iter().enumerate() {
                if !g[l][j].is_zero() {
                    rhs = rhs.add(&f.mul(&RatExpr::from_poly(P::constant(g[l][j].clone()))));
                }
            }
            if *m != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Exact comparison of `F(X g)` with `F(X) g` at one point whose
    /// entries are the coordinates followed by every parameter value.
    /// Much cheaper than [`DynSystem::is_equivariant`] for dense `g`; a
    /// nonzero difference of the two sides can vanish only on a proper
    /// subvariety, so a few random points give a probabilistic proof.
    pub fn is_equivariant_at(&self, g: &crate::group::Matrix, point: &[Cyclo]) -> Result<Option<bool>> {
        let n = self.nvars;
        self.linear_forms(g)?;
        if point.len() < n {
            return Err(Error::DimensionMismatch);
        }
        let mut moved_point = point.to_vec();
        for (j, slot) in moved_point.iter_mut().enumerate().take(n) {
            let mut acc = Cyclo::zero();
            for (l, row) in g.iter().enumerate() {
                acc = acc.add(&point[l].mul(&row[j]));
            }
            *slot = acc;
        }
        let eval = |f: &RatExpr, at: &[Cyclo]| -> Result<Option<Cyclo>> {
            let den = f.den().eval_field(at, Cyclo::clone)?;
            if den.is_zero() {
                return Ok(None);
            }
            Ok(Some(f.num().eval_field(at, Cyclo::clone)?.div(&den).unwrap()))
        };
        let mut here = Vec::with_capacity(n);
        let mut there = Vec::with_capacity(n);
        for f in &self.rhs {
            match (eval(f, point)?, eval(f, &moved_point)?) {
                (Some(a), Some(b)) => {
                    here.push(a);
                    there.push(b);
                }
                _ => return Ok(None),
            }
        }
        for j in 0..n {
            let mut acc = Cyclo::zero();
            for l in 0..n {
                acc = acc.add(&here[l].mul(&g[l][j]));
            }
            if acc != there[j] {
                return Ok(Some(false));
            }
        }
        Ok(Some(true))
    }

    fn linear_forms(&self, g: &crate::group::Matrix) -> Result<Vec<P>> {
        let n = self.nvars;
        if g.len() != n || g.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch);
        }
        Ok((0..n)
            .map(|j| {
                let mut f = P::zero();
                for (l, row) in g.iter().enumerate() {
                    f = f.add(&P::var(l).scale(&row[j]));
                }
                f
            })
            .collect())
    }
}

/// Linear relations with constant coefficients among radical elements:
/// a basis of `{c : Σ c_i x_i = 0}` over `Q(ζ_N)`.
pub fn constant_relations(xs: &[RadicalElem]) -> Vec<Vec<Cyclo>> {
    let mut den = P::one();
    for x in xs {
        for (_, c) in x.terms() {
            let g = gcd(&den, c.den());
            den = den.mul(&c.den().div_exact(&g).unwrap());
        }
    }
    let mut rows: BTreeMap<(Vec<u32>, Mono), Vec<Cyclo>> = BTreeMap::new();
    for (i, x) in xs.iter().enumerate() {
        for (e, c) in x.terms() {
            let num = c.num().mul(&den.div_exact(c.den()).unwrap());
            for (m, v) in num.terms() {
                let row = rows.entry((e.clone(), m.clone())).or_insert_with(|| vec![Cyclo::zero(); xs.len()]);
                row[i] = row[i].add(v);
            }
        }
    }
    let a: Vec<Vec<Cyclo>> = rows.into_values().collect();
    if a.is_empty() {
        return (0..xs.len())
            .map(|i| (0..xs.len()).map(|j| if i == j { Cyclo::one() } else { Cyclo::zero() }).collect())
            .collect();
    }
    kernel_field(&a)
}

/// `Φ(A) = (α t + β) Φ(B)` with `A = Σ a_i m_i` over the candidate
/// products `m_i` and `B` one of them.
#[derive(Clone, Debug, PartialEq)]
pub struct StandardnessWitness {
    pub a: Vec<(Cyclo, Vec<u32>)>,
    pub b: Vec<u32>,
    pub alpha: Cyclo,
    pub beta: Cyclo,
}

/// Searches the span of the degree-`Λ` candidate products for a witness.
/// Candidates for `B` are tried in lexicographic order of their exponent
/// vectors; `None` when no candidate admits `α ≠ 0`.
pub fn standardness_witness(phi: &EvaluationMap, candidates: &[Vec<u32>], var: usize) -> Result<Option<StandardnessWitness>> {
    if candidates.is_empty() {
        return Err(Error::Invalid("no degree-Λ products to search".into()));
    }
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|a, b| candidates[*a].cmp(&candidates[*b]));
    let vals: Vec<RadicalElem> = candidates.iter().map(|e| phi.eval_product(e)).collect();
    let t = RadicalElem::from_ratfn(RatFn::var(var));
    let k = candidates.len();
    for bi in order {
        let fb = &vals[bi];
        if fb.is_zero() {
            continue;
        }
        // unknowns: a_0..a_{k-1}, α, β
        let mut cols = vals.clone();
        cols.push(t.mul(fb).neg());
        cols.push(fb.neg());
        let kernel = constant_relations(&cols);
        if kernel.iter().all(|v| v[k].is_zero()) {
            continue;
        }
        // prefer α = 1, β = 0 and the sparsest A within the kernel
        let mut sol = None;
        for fix_beta in [true, false] {
            let mut rows: Vec<Vec<Cyclo>> = Vec::new();
            let mut rhs: Vec<Cyclo> = Vec::new();
            // x = Σ y_j v_j ; constraints on α and optionally β
            let nk = kernel.len();
            rows.push((0..nk).map(|j| kernel[j][k].clone()).collect());
            rhs.push(Cyclo::one());
            if fix_beta {
                rows.push((0..nk).map(|j| kernel[j][k + 1].clone()).collect());
                rhs.push(Cyclo::zero());
            }
            if let Some(y) = solve_any(&rows, &rhs) {
                let mut x = vec![Cyclo::zero(); k + 2];
                for (j, yj) in y.iter().enumerate() {
                    for (xi, kv) in x.iter_mut().zip(&kernel[j]) {
                        *xi = xi.add(&yj.mul(kv));
                    }
                }
                sol = Some(x);
                break;
            }
        }
        let x = sol.expect("a kernel vector with α ≠ 0 exists");
        let a = (0..k)
            .filter(|i| !x[*i].is_zero())
            .map(|i| (x[i].clone(), candidates[i].clone()))
            .collect();
        return Ok(Some(StandardnessWitness {
            a,
            b: candidates[bi].clone(),
            alpha: x[k].clone(),
            beta: x[k + 1].clone(),
        }));
    }
    Ok(None)
}

/// `(Φ(m_1) : … : Φ(m_d))` divided by its first nonzero entry.
pub fn orbit_projection(phi: &EvaluationMap, coords: &[Vec<u32>]) -> Result<Vec<RadicalElem>> {
    let vals: Vec<RadicalElem> = coords.iter().map(|e| phi.eval_product(e)).collect();
    let pivot = vals
        .iter()
        .find(|v| !v.is_zero())
        .ok_or_else(|| Error::Invalid("all projective coordinates vanish".into()))?
        .clone();
    let inv = pivot.inv().ok_or(Error::DivisionByZero)?;
    Ok(vals.iter().map(|v| v.mul(&inv)).collect())
}

/// Result of [`standardize`].
#[derive(Clone, Debug)]
pub struct Standardized {
    pub equation: LinearODE,
    pub evaluations: EvaluationMap,
    pub gauge: GaugeFactor,
}

/// Conjugates `l` by `f^{-1/Λ}` with `f = Φ(B)` and rescales the
/// evaluations: `Φ'(P_i) = Φ(P_i) f^{-d_i/Λ}`.
pub fn standardize(
    l: &LinearODE,
    phi: &EvaluationMap,
    degrees: &[u32],
    witness: &StandardnessWitness,
    lambda: u32,
) -> Result<Standardized> {
    let var = l.var();
    let fb = phi.eval_product(&witness.b);
    let f = RadicalMonomial::from_elem(&fb, var)
        .ok_or_else(|| Error::UnsupportedRadical("Φ(B) is not a single radical monomial".into()))?;
    let lam = BigRational::from_integer(lambda.into());
    let g = f.pow(&(-BigRational::from_integer(1.into()) / &lam));
    let mut scaled: Vec<Option<RadicalMonomial>> = Vec::new();
    for (v, d) in phi.values().iter().zip(degrees) {
        if v.is_zero() {
            scaled.push(None);
            continue;
        }
        let m = RadicalMonomial::from_elem(v, var)
            .ok_or_else(|| Error::UnsupportedRadical("evaluation is not a single radical monomial".into()))?;
        let e = -BigRational::from_integer((*d).into()) / &lam;
        scaled.push(Some(m.mul(&f.pow(&e))));
    }
    let mut builder = TowerBuilder::new();
    for (i, m) in scaled.iter().enumerate() {
        if let Some(m) = m {
            m.require(&mut builder, &alloc::format!("r{i}_"));
        }
    }
    let tower = builder.finish()?;
    let values = scaled
        .iter()
        .map(|m| match m {
            None => Ok(RadicalElem::zero()),
            Some(m) => {
                let e = m.to_elem(&tower)?;
                Ok(if tower.is_empty() { e } else { e.embed(&tower)? })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let gauge = GaugeFactor::new(g, var);
    Ok(Standardized {
        equation: conjugate_by_factor(l, &gauge),
        evaluations: EvaluationMap::new(values)?,
        gauge,
    })
}

/// Second-order structure of the generator map `X ↦ u(X)`:
/// `∂²X/∂u_i∂u_j = Σ_k Γ_{ijk} ∂X/∂u_k`, with `Γ_{ijk} = N_{ijk} / J^{m}`
/// where both parts are written as polynomials in the generators.
#[derive(Clone, Debug)]
pub struct Connection {
    n: usize,
    degrees: Vec<u32>,
    numerators: BTreeMap<(usize, usize, usize), P>,
    denominator: P,
}

impl Connection {
    /// Computes the connection of a set of `n` generators in `n`
    /// variables.
    pub fn new(set: &InvariantSet) -> Result<Self> {
        let n = set.nvars();
        if set.len() != n {
            return Err(Error::DimensionMismatch);
        }
        let m = jacobian(set.polys(), n);
        let j = cofactor_det(&m);
        if j.is_zero() {
            return Err(Error::Invalid("invariants not algebraically independent".into()));
        }
        let adj = adjugate(&m);
        let hess: Vec<Vec<Vec<P>>> = set.polys().iter().map(|p| crate::invariants::hessian_matrix(p, n)).collect();
        let col = |i: usize| -> Vec<P> { (0..n).map(|a| adj[a][i].clone()).collect() };
        let mut rw = Rewriter::new(set);
        // J itself may only be a semi-invariant; use the first power that
        // rewrites (J^2 in every bundled case)
        let mut power = 2;
        let denominator = loop {
            match rw.rewrite(&j.pow(power)) {
                Ok(d) => break d,
                Err(Error::RewriteFailed(_)) if power < 6 => power += 1,
                Err(e) => return Err(e),
            }
        };
        let extra = j.pow(power - 2);
        let mut numerators = BTreeMap::new();
        for i in 0..n {
            let ci = col(i);
            for jj in i..n {
                let cj = col(jj);
                for (k, h) in hess.iter().enumerate() {
                    let mut acc = P::zero();
                    for a in 0..n {
                        for b in 0..n {
                            if h[a][b].is_zero() || ci[a].is_zero() || cj[b].is_zero() {
                                continue;
                            }
                            acc = acc.add(&ci[a].mul(&h[a][b]).mul(&cj[b]));
                        }
                    }
                    let num = acc.neg().mul(&extra);
                    numerators.insert((i, jj, k), rw.rewrite(&num)?);
                }
            }
        }
        Ok(Connection {
            n,
            degrees: set.degrees().to_vec(),
            numerators,
            denominator,
        })
    }
}

/// The monic linear ODE satisfied by every coordinate of an orbit with
/// generator values `phi`, differentiating along variable `var`.
pub fn derive_linear_ode(conn: &Connection, phi: &EvaluationMap, var: usize) -> Result<LinearODE> {
    let n = conn.n;
    if phi.values().len() != n {
        return Err(Error::DimensionMismatch);
    }
    let den = phi.eval(&conn.denominator)?;
    let den_inv = den
        .inv()
        .ok_or_else(|| Error::Invalid("Jacobian vanishes on the orbit".into()))?;
    let mut gamma: BTreeMap<(usize, usize, usize), RadicalElem> = BTreeMap::new();
    for ((i, j, k), num) in &conn.numerators {
        gamma.insert((*i, *j, *k), phi.eval(num)?.mul(&den_inv));
    }
    let g = |i: usize, l: usize, m: usize| -> &RadicalElem {
        let (a, b) = if i <= l { (i, l) } else { (l, i) };
        &gamma[&(a, b, m)]
    };
    let u = phi.values();
    let du: Vec<RadicalElem> = u.iter().map(|x| x.diff(var)).collect();
    // b_k: coordinates of D^k X in the basis ∂X/∂u_m
    let mut b: Vec<Vec<RadicalElem>> = vec![u
        .iter()
        .zip(&conn.degrees)
        .map(|(x, d)| x.mul(&RadicalElem::from_int(*d as i64)))
        .collect()];
    b.push(du.clone());
    for _ in 1..n {
        let prev = b.last().unwrap();
        let mut next = Vec::with_capacity(n);
        for m in 0..n {
            let mut acc = prev[m].diff(var);
            for i in 0..n {
                if du[i].is_zero() {
                    continue;
                }
                for l in 0..n {
                    if prev[l].is_zero() {
                        continue;
                    }
                    let gv = g(i, l, m);
                    if !gv.is_zero() {
                        acc = acc.add(&prev[l].mul(&du[i]).mul(gv));
                    }
                }
            }
            next.push(acc);
        }
        b.push(next);
    }
    // Σ_{k<n} c_k b_k = −b_n
    let a: Vec<Vec<RadicalElem>> = (0..n).map(|m| (0..n).map(|k| b[k][m].clone()).collect()).collect();
    let rhs: Vec<RadicalElem> = (0..n).map(|m| b[n][m].neg()).collect();
    let c = solve_field(&a, &rhs).map_err(|_| Error::KernelNotUnique)?;
    LinearODE::new(var, c)
}

/// Literal check of `L(x_j) = 0` along the system: `Σ c_k D^k X` is
/// projected on the gradients of the generators, each projection is
/// written in the generators and evaluated through `phi`. The returned
/// values are all zero exactly when the coordinates solve `l`.
pub fn symbolic_residual(
    l: &LinearODE,
    sys: &DynSystem,
    set: &InvariantSet,
    phi: &EvaluationMap,
    degree_bound: u32,
) -> Result<Vec<RadicalElem>> {
    let n = sys.nvars();
    let coeffs = l
        .rational_coeffs()
        .ok_or_else(|| Error::UnsupportedRadical("residual with radical coefficients".into()))?;
    // common denominator of the coefficients (polynomials in t)
    let mut b = P::one();
    for c in &coeffs {
        let g = gcd(&b, c.den());
        b = b.mul(&c.den().div_exact(&g).unwrap());
    }
    let order = l.order();
    let scaled: Vec<P> = (0..=order)
        .map(|k| {
            if k == order {
                b.shift_vars(n)
            } else {
                coeffs[k].num().mul(&b.div_exact(coeffs[k].den()).unwrap()).shift_vars(n)
            }
        })
        .collect();
    let ders = DerivativeColumns::new(sys, order, degree_bound)?;
    let res: Vec<P> = (0..n)
        .map(|j| {
            let mut acc = P::zero();
            for (k, sk) in scaled.iter().enumerate() {
                acc = acc.add(&ders.scaled(k)[j].mul(sk));
            }
            acc
        })
        .collect();
    let res_den = b.shift_vars(n).mul(&ders.denominator());
    let grads = jacobian(set.polys(), n);
    let mut ev = InvariantEvaluator::new(set, phi);
    let mut out = Vec::with_capacity(set.len());
    for row in &grads {
        let mut pnum = P::zero();
        for (gp, r) in row.iter().zip(&res) {
            pnum = pnum.add(&gp.mul(r));
        }
        if pnum.is_zero() {
            out.push(RadicalElem::zero());
            continue;
        }
        pnum.check_degree(degree_bound)?;
        out.push(ev.fraction(&pnum, &res_den)?);
    }
    Ok(out)
}

/// `D^k X` for `k = 0..=order` along a system, as polynomial vectors
/// `A_k` over powers `E^{m_k}` of one common denominator.
struct DerivativeColumns {
    cols: Vec<Vec<P>>,
    powers: Vec<u32>,
    e: P,
}

impl DerivativeColumns {
    fn new(sys: &DynSystem, order: usize, degree_bound: u32) -> Result<Self> {
        let n = sys.nvars();
        let (nums, e) = common_denominator(sys.rhs());
        let tv = n + sys.var();
        let de = total_derivative_scaled(&e, &nums, &e, tv);
        let mut cols: Vec<Vec<P>> = vec![(0..n).map(P::var).collect()];
        let mut powers = vec![0u32];
        for k in 0..order {
            let m = powers[k];
            let next: Vec<P> = cols[k]
                .iter()
                .map(|aj| {
                    // D(A/E^m) = (E·DA − m·A·DE)/E^{m+2} with DA, DE scaled by E
                    let da = total_derivative_scaled(aj, &nums, &e, tv);
                    if m == 0 {
                        da
                    } else {
                        e.mul(&da).sub(&aj.mul(&de).scale(&Cyclo::int(m as i64)))
                    }
                })
                .collect();
            for p in &next {
                p.check_degree(degree_bound)?;
            }
            cols.push(next);
            powers.push(if m == 0 { 1 } else { m + 2 });
        }
        Ok(DerivativeColumns { cols, powers, e })
    }

    /// `E^{top} · D^k X` as polynomials.
    fn scaled(&self, k: usize) -> Vec<P> {
        let top = *self.powers.last().unwrap();
        let f = self.e.pow(top - self.powers[k]);
        self.cols[k].iter().map(|a| a.mul(&f)).collect()
    }

    fn denominator(&self) -> P {
        self.e.pow(*self.powers.last().unwrap())
    }
}

/// Evaluates quotients of (semi-)invariant polynomials through `Φ`,
/// multiplying both parts by the Jacobian of the generators when the
/// parts are only invariant up to a character.
struct InvariantEvaluator<'a> {
    rw: Rewriter<'a>,
    phi: &'a EvaluationMap,
    jac: P,
    n: usize,
}

impl<'a> InvariantEvaluator<'a> {
    fn new(set: &'a InvariantSet, phi: &'a EvaluationMap) -> Self {
        let n = set.nvars();
        InvariantEvaluator {
            rw: Rewriter::new(set),
            phi,
            jac: cofactor_det(&jacobian(set.polys(), n)),
            n,
        }
    }

    fn fraction(&mut self, num: &P, den: &P) -> Result<RadicalElem> {
        let (mut num, mut den) = (num.clone(), den.clone());
        for _ in 0..4 {
            match (rewrite_graded(&mut self.rw, &num, self.n), rewrite_graded(&mut self.rw, &den, self.n)) {
                (Ok(a), Ok(b)) => {
                    let d = self.phi.eval(&b)?;
                    if d.is_zero() {
                        return Err(Error::Invalid("denominator vanishes on the orbit".into()));
                    }
                    return self.phi.eval(&a)?.divide(&d);
                }
                (Err(Error::RewriteFailed(_)), _) | (_, Err(Error::RewriteFailed(_))) => {
                    num = num.mul(&self.jac);
                    den = den.mul(&self.jac);
                }
                (Err(e), _) | (_, Err(e)) => return Err(e),
            }
        }
        Err(Error::RewriteFailed("quotient of invariants".into()))
    }
}

/// The literal derivation in `X` space: the columns `X, DX, …, D^n X` are
/// computed along the system, the dependence relation `Σ Q_k D^k X = 0`
/// comes from the maximal minors (Cramer's rule), and each `Q_k / Q_n` is
/// written in the generators and evaluated through `Φ`. Only feasible for
/// small degrees; [`derive_linear_ode`] is the general route.
pub fn derive_linear_ode_direct(
    sys: &DynSystem,
    set: &InvariantSet,
    phi: &EvaluationMap,
    degree_bound: u32,
) -> Result<LinearODE> {
    let n = sys.nvars();
    let ders = DerivativeColumns::new(sys, n, degree_bound)?;
    let cols: Vec<Vec<P>> = (0..=n).map(|k| ders.scaled(k)).collect();
    let minor = |skip: usize| -> Result<P> {
        let m: Vec<Vec<P>> = (0..n)
            .map(|j| (0..=n).filter(|k| *k != skip).map(|k| cols[k][j].clone()).collect())
            .collect();
        bareiss_det(&m)
    };
    let qn = minor(n)?;
    if qn.is_zero() {
        return Err(Error::KernelNotUnique);
    }
    let sign = |k: usize| if (n - k) % 2 == 0 { Cyclo::one() } else { Cyclo::int(-1) };
    let mut ev = InvariantEvaluator::new(set, phi);
    let mut coeffs = Vec::with_capacity(n);
    for k in 0..n {
        let qk = minor(k)?.scale(&sign(k));
        qk.check_degree(degree_bound)?;
        coeffs.push(if qk.is_zero() { RadicalElem::zero() } else { ev.fraction(&qk, &qn)? });
    }
    LinearODE::new(sys.var(), coeffs)
}

/// Numerators over a common reduced denominator.
fn common_denominator(fs: &[RatExpr]) -> (Vec<P>, P) {
    let reduced: Vec<RatExpr> = fs.iter().map(|f| f.reduced()).collect();
    let mut e = P::one();
    for f in &reduced {
        let g = gcd(&e, f.den());
        e = e.mul(&f.den().div_exact(&g).unwrap());
    }
    let nums = reduced
        .iter()
        .map(|f| f.num().mul(&e.div_exact(f.den()).unwrap()))
        .collect();
    (nums, e)
}

/// `E·(∂a/∂t + Σ_i ∂a/∂X_i · N_i/E)` for `F = N/E`.
fn total_derivative_scaled(a: &P, nums: &[P], e: &P, tv: usize) -> P {
    let mut acc = a.diff(tv).mul(e);
    for (i, ni) in nums.iter().enumerate() {
        let d = a.diff(i);
        if !d.is_zero() {
            acc = acc.add(&d.mul(ni));
        }
    }
    acc
}

/// Rewrites a polynomial that is a sum of homogeneous invariants (in the
/// first `n` variables) component by component.
fn rewrite_graded(rw: &mut Rewriter<'_>, p: &P, n: usize) -> Result<P> {
    let mut parts: BTreeMap<u32, P> = BTreeMap::new();
    for (m, c) in p.terms() {
        let d: u32 = m.iter().take(n).sum();
        parts.entry(d).or_insert_with(P::zero).add_term(m.clone(), c);
    }
    let mut acc = P::zero();
    for part in parts.values() {
        acc = acc.add(&rw.rewrite(part)?);
    }
    Ok(acc)
}

/// `(F_1·∇)F_2 − (F_2·∇)F_1` for two vector fields on the first `n`
/// variables.
pub fn lie_bracket(f1: &[RatExpr], f2: &[RatExpr]) -> Result<Vec<RatExpr>> {
    if f1.len() != f2.len() {
        return Err(Error::DimensionMismatch);
    }
    let dir = |f: &[RatExpr], g: &RatExpr| -> RatExpr {
        let mut acc = RatExpr::zero();
        for (j, fj) in f.iter().enumerate() {
            let d = g.diff(j);
            if !d.is_zero() {
                acc = acc.add(&d.mul(fj));
            }
        }
        acc
    };
    Ok(f1
        .iter()
        .zip(f2)
        .map(|(a, b)| dir(f1, b).sub(&dir(f2, a)).reduced())
        .collect())
}

/// Discriminant of `p` with respect to `var`:
/// `(−1)^{d(d−1)/2} Res(p, ∂p/∂var) / lc(p)`.
pub fn discriminant(p: &P, var: usize) -> Result<P> {
    let coeffs = p.coeffs_in(var);
    let d = p.degree_in(var) as usize;
    if d == 0 {
        return Err(Error::Invalid("discriminant of a constant".into()));
    }
    let dp = p.diff(var);
    let dcoeffs = dp.coeffs_in(var);
    let get = |m: &BTreeMap<u32, P>, k: usize| m.get(&(k as u32)).cloned().unwrap_or_else(P::zero);
    // Sylvester matrix of p (degree d) and p' (degree d−1): size 2d−1
    let size = 2 * d - 1;
    let mut s = vec![vec![P::zero(); size]; size];
    for r in 0..d - 1 {
        for k in 0..=d {
            s[r][r + k] = get(&coeffs, d - k);
        }
    }
    for r in 0..d {
        for k in 0..d {
            s[d - 1 + r][r + k] = get(&dcoeffs, d - 1 - k);
        }
    }
    let res = bareiss_det(&s)?;
    let lc = get(&coeffs, d);
    let q = res
        .div_exact(&lc)
        .ok_or_else(|| Error::Invalid("leading coefficient does not divide the resultant".into()))?;
    Ok(if (d * (d - 1) / 2) % 2 == 1 { q.neg() } else { q })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> P {
        P::var(i)
    }
    fn c(v: i64) -> P {
        P::constant(Cyclo::int(v))
    }
    fn t() -> RatFn {
        RatFn::var(0)
    }

    #[test]
    fn one_dimensional_system() {
        let s = build_associated_system(1, vec![x(0)], vec![t()], 0).unwrap();
        assert_eq!(s.rhs()[0], RatExpr::one());
        assert!(s.is_autonomous());
        assert!(s.defining_identity_holds());
    }

    #[test]
    fn one_dimensional_derivation() {
        // Φ(X_1) = t + 3 gives x' − x/(t+3) = 0
        let set = InvariantSet::new(1, vec!["X".into()], vec![x(0)]).unwrap();
        let conn = Connection::new(&set).unwrap();
        let beta = RatFn::constant(Cyclo::int(3));
        let phi = EvaluationMap::new(vec![RadicalElem::from_ratfn(t().add(&beta))]).unwrap();
        let l = derive_linear_ode(&conn, &phi, 0).unwrap();
        let expect = t().add(&beta).inv().unwrap().neg();
        assert_eq!(l.rational_coeffs().unwrap(), vec![expect]);
    }

    #[test]
    fn discriminant_of_quadratic_and_cubic() {
        // b^2 − 4ac for a x^2 + b x + c with a, b, c at indices 1, 2, 3
        let p = x(1).mul(&x(0).pow(2)).add(&x(2).mul(&x(0))).add(&x(3));
        assert_eq!(discriminant(&p, 0).unwrap(), x(2).pow(2).sub(&x(1).mul(&x(3)).scale(&Cyclo::int(4))));
        // x^3 + a x + b: −4a^3 − 27b^2
        let q = x(0).pow(3).add(&x(1).mul(&x(0))).add(&x(2));
        let expect = x(1).pow(3).scale(&Cyclo::int(-4)).sub(&x(2).pow(2).scale(&Cyclo::int(27)));
        assert_eq!(discriminant(&q, 0).unwrap(), expect);
    }

    #[test]
    fn bracket_of_linear_fields() {
        let f = |p: P| RatExpr::from_poly(p);
        let a = vec![f(x(1)), f(P::zero())];
        let b = vec![f(P::zero()), f(x(0))];
        let br = lie_bracket(&a, &b).unwrap();
        assert_eq!(br, vec![f(x(0).neg()), f(x(1))]);
        assert!(lie_bracket(&a, &a).unwrap().iter().all(|e| e.is_zero()));
        let rev = lie_bracket(&b, &a).unwrap();
        assert!(br.iter().zip(&rev).all(|(u, v)| u.add(v).is_zero()));
        let _ = c(0);
    }

    #[test]
    fn trivial_witness() {
        let phi = EvaluationMap::new(vec![RadicalElem::one(), RadicalElem::from_ratfn(t())]).unwrap();
        let w = standardness_witness(&phi, &[vec![1, 0], vec![0, 1]], 0).unwrap().unwrap();
        assert_eq!(w.b, vec![1, 0]);
        assert_eq!(w.a, vec![(Cyclo::one(), vec![0, 1])]);
        let proj = orbit_projection(&phi, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(proj, phi.values().to_vec());
    }

    #[test]
    fn constant_relations_find_dependence() {
        let a = RadicalElem::from_ratfn(t());
        let b = RadicalElem::from_ratfn(t().add(&RatFn::one()));
        let k = constant_relations(&[a, b, RadicalElem::one()]);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert_eq!(v[0], v[1].neg());
        assert_eq!(v[2], v[0]);
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn rf(num: P, den: P) -> RatFn {
        RatFn::new(num, den).unwrap()
    }

    fn a4_set() -> InvariantSet {
        let p6 = x(0).pow(5).mul(&x(1)).sub(&x(0).mul(&x(1).pow(5)));
        let p8 = x(0).pow(8).add(&x(0).pow(4).mul(&x(1).pow(4)).scale(&Cyclo::int(14))).add(&x(1).pow(8));
        InvariantSet::new(2, vec!["P6".into(), "P8".into()], vec![p6, p8]).unwrap()
    }

    fn a4_phi() -> EvaluationMap {
        let c108 = RatFn::constant(Cyclo::int(108));
        let mut b = TowerBuilder::new();
        b.require(&t(), 4, "r0");
        b.require(&c108, 3, "r1");
        let tower = b.finish().unwrap();
        EvaluationMap::new(vec![tower.power(&t(), &q(1, 4)).unwrap(), tower.power(&c108, &q(1, 3)).unwrap()]).unwrap()
    }

    #[test]
    fn a4_derivation() {
        let set = a4_set();
        let conn = Connection::new(&set).unwrap();
        let l = derive_linear_ode(&conn, &a4_phi(), 0).unwrap();
        let tt = x(0);
        let tm = tt.mul(&tt.sub(&c(1)));
        let a1 = rf(tt.scale(&Cyclo::int(5)).sub(&c(3)), tm.scale(&Cyclo::int(4)));
        let a0 = rf(c(-7), tm.scale(&Cyclo::int(576)));
        assert_eq!(l.rational_coeffs().unwrap(), vec![a0, a1]);
    }

    #[test]
    fn a4_system_and_residual() {
        let set = a4_set();
        let prim = vec![set.polys()[0].pow(4), set.polys()[1].pow(3)];
        let targets = vec![t(), RatFn::constant(Cyclo::int(108))];
        let sys = build_associated_system(2, prim, targets, 0).unwrap();
        assert!(sys.defining_identity_holds());
        assert!(sys.is_autonomous());
        let phi = a4_phi();
        let l = derive_linear_ode(&Connection::new(&set).unwrap(), &phi, 0).unwrap();
        let r = symbolic_residual(&l, &sys, &set, &phi, DEFAULT_DEGREE_BOUND).unwrap();
        assert!(r.iter().all(|v| v.is_zero()));
        // perturb the zeroth coefficient by one
        let mut cs = l.rational_coeffs().unwrap();
        cs[0] = cs[0].add(&RatFn::one());
        let bad = LinearODE::from_ratfns(0, cs).unwrap();
        let r = symbolic_residual(&bad, &sys, &set, &phi, DEFAULT_DEGREE_BOUND).unwrap();
        assert!(r.iter().any(|v| !v.is_zero()));
        // equivariance under diag(i, -i)
        let g = vec![vec![Cyclo::zeta_pow(4, 1), Cyclo::zero()], vec![Cyclo::zero(), Cyclo::zeta_pow(4, 3)]];
        assert!(sys.is_equivariant(&g).unwrap());
    }

    #[test]
    fn direct_route_agrees_with_connection() {
        let set = a4_set();
        let prim = vec![set.polys()[0].pow(4), set.polys()[1].pow(3)];
        let targets = vec![t(), RatFn::constant(Cyclo::int(108))];
        let sys = build_associated_system(2, prim, targets, 0).unwrap();
        let phi = a4_phi();
        let via_conn = derive_linear_ode(&Connection::new(&set).unwrap(), &phi, 0).unwrap();
        let direct = derive_linear_ode_direct(&sys, &set, &phi, DEFAULT_DEGREE_BOUND).unwrap();
        assert_eq!(direct.rational_coeffs().unwrap(), via_conn.rational_coeffs().unwrap());
    }

    #[test]
    fn direct_route_one_dimensional() {
        let set = InvariantSet::new(1, vec!["X".into()], vec![x(0)]).unwrap();
        let beta = RatFn::constant(Cyclo::int(3));
        let sys = build_associated_system(1, vec![x(0)], vec![t().add(&beta)], 0).unwrap();
        let phi = EvaluationMap::new(vec![RadicalElem::from_ratfn(t().add(&beta))]).unwrap();
        let l = derive_linear_ode_direct(&sys, &set, &phi, DEFAULT_DEGREE_BOUND).unwrap();
        assert_eq!(l.rational_coeffs().unwrap(), vec![t().add(&beta).inv().unwrap().neg()]);
    }
}
