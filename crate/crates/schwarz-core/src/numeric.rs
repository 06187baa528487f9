// SPDX-License-Identifier: MIT OR Apache-2.0
//! Floating-point checks of exact results: points on orbit fibers,
//! adaptive integration of invariant flows along complex paths, drift of
//! the defining identities and finite-difference residuals of derived
//! equations.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;
use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::invariants::jacobian;
use crate::ode::LinearODE;
use crate::pipeline::DynSystem;
use crate::poly::Poly;
use crate::ratexpr::RatExpr;
use crate::ratfn::RatFn;

pub type C64 = Complex64;

/// Polynomial with coefficients converted to `f64` once.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(C64, Vec<u32>)>,
}

impl CompiledPoly {
    pub fn new(p: &Poly<Cyclo>) -> Self {
        CompiledPoly {
            terms: p.terms().map(|(m, c)| (c.to_complex(), m.clone())).collect(),
        }
    }

    pub fn eval(&self, vals: &[C64]) -> C64 {
        let mut acc = C64::zero();
        for (c, m) in &self.terms {
            let mut t = *c;
            for (i, e) in m.iter().enumerate() {
                if *e != 0 {
                    t *= vals[i].powu(*e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Sum of the absolute values of the terms, a scale for cancellation.
    pub fn magnitude(&self, vals: &[C64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, m)| {
                let mut t = c.norm();
                for (i, e) in m.iter().enumerate() {
                    if *e != 0 {
                        t *= vals[i].norm().powi(*e as i32);
                    }
                }
                t
            })
            .sum()
    }
}

/// Quotient of compiled polynomials.
#[derive(Clone, Debug)]
pub struct CompiledFraction {
    num: CompiledPoly,
    den: CompiledPoly,
}

impl CompiledFraction {
    pub fn from_ratexpr(e: &RatExpr) -> Self {
        CompiledFraction {
            num: CompiledPoly::new(e.num()),
            den: CompiledPoly::new(e.den()),
        }
    }

    pub fn from_ratfn(f: &RatFn) -> Self {
        CompiledFraction {
            num: CompiledPoly::new(f.num()),
            den: CompiledPoly::new(f.den()),
        }
    }

    /// `None` when the denominator vanishes to working precision.
    pub fn eval(&self, vals: &[C64]) -> Option<C64> {
        let d = self.den.eval(vals);
        if d.norm() <= 1e-14 * self.den.magnitude(vals) {
            return None;
        }
        Some(self.num.eval(vals) / d)
    }
}

/// Tolerances and limits of the numeric checks.
#[derive(Clone, Debug)]
pub struct NumericOptions {
    pub newton_tol: f64,
    pub restarts: usize,
    pub seed: u64,
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Relative size of `det M` below which integration stops.
    pub singular_threshold: f64,
    /// Finite-difference step along the path.
    pub fd_step: f64,
    /// Number of orbit points at which the residual is sampled.
    pub residual_samples: usize,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions {
            newton_tol: 1e-12,
            restarts: 100,
            seed: 0x5eed,
            rtol: 1e-13,
            atol: 1e-15,
            max_steps: 200_000,
            singular_threshold: 1e-10,
            fd_step: 2e-2,
            residual_samples: 12,
        }
    }
}

/// An integrated orbit: complex times, states and the local error
/// estimate of the step that produced each state.
#[derive(Clone, Debug)]
pub struct NumericOrbit {
    pub times: Vec<C64>,
    pub states: Vec<Vec<C64>>,
    pub errors: Vec<f64>,
}

/// Floating-point form of a dynamical system. Variables are the
/// coordinates followed by the parameters; the parameter at the flow
/// variable's position is replaced by the current time.
#[derive(Clone, Debug)]
pub struct NumericSystem {
    n: usize,
    var: usize,
    params: Vec<C64>,
    primaries: Vec<CompiledPoly>,
    grads: Vec<Vec<CompiledPoly>>,
    targets: Vec<CompiledFraction>,
    rhs: Vec<CompiledFraction>,
}

impl NumericSystem {
    pub fn new(sys: &DynSystem, params: &[C64]) -> Result<Self> {
        let n = sys.nvars();
        if sys.var() >= params.len() {
            return Err(Error::DimensionMismatch);
        }
        Ok(NumericSystem {
            n,
            var: sys.var(),
            params: params.to_vec(),
            primaries: sys.primaries().iter().map(CompiledPoly::new).collect(),
            grads: jacobian(sys.primaries(), n)
                .iter()
                .map(|row| row.iter().map(CompiledPoly::new).collect())
                .collect(),
            targets: sys.targets().iter().map(CompiledFraction::from_ratfn).collect(),
            rhs: sys.rhs().iter().map(CompiledFraction::from_ratexpr).collect(),
        })
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    fn params_at(&self, t: C64) -> Vec<C64> {
        let mut p = self.params.clone();
        p[self.var] = t;
        p
    }

    fn full(&self, x: &[C64], t: C64) -> Vec<C64> {
        let mut v = x.to_vec();
        v.extend(self.params_at(t));
        v
    }

    pub fn targets_at(&self, t: C64) -> Result<Vec<C64>> {
        let p = self.params_at(t);
        self.targets
            .iter()
            .map(|f| f.eval(&p).ok_or_else(|| Error::Numeric(format!("target has a pole at t = {t}"))))
            .collect()
    }

    /// `F(X, t)`, failing near zeros of `det M` or poles of `F`.
    pub fn field(&self, x: &[C64], t: C64, threshold: f64) -> Result<Vec<C64>> {
        let v = self.full(x, t);
        let m: Vec<Vec<C64>> = self.grads.iter().map(|r| r.iter().map(|g| g.eval(&v)).collect()).collect();
        let scale: f64 = m.iter().map(|r| r.iter().map(|z| z.norm()).fold(0.0, f64::max)).product();
        let det = det_complex(&m);
        if det.norm() <= threshold * scale {
            return Err(Error::Numeric(format!("path passes near a singularity at t = {t}")));
        }
        self.rhs
            .iter()
            .map(|f| f.eval(&v).ok_or_else(|| Error::Numeric(format!("vector field has a pole at t = {t}"))))
            .collect()
    }

    /// Relative deviations `|P_i(X) − Φ(P_i)(t)| / (1 + |Φ(P_i)(t)|)`.
    pub fn deviations(&self, x: &[C64], t: C64) -> Result<Vec<f64>> {
        let targets = self.targets_at(t)?;
        Ok(self
            .primaries
            .iter()
            .zip(&targets)
            .map(|(p, f)| (p.eval(x) - f).norm() / (1.0 + f.norm()))
            .collect())
    }

    /// Largest entry of [`NumericSystem::deviations`].
    pub fn deviation(&self, x: &[C64], t: C64) -> Result<f64> {
        Ok(self.deviations(x, t)?.into_iter().fold(0.0, f64::max))
    }
}

/// Determinant by elimination with partial pivoting.
pub fn det_complex(m: &[Vec<C64>]) -> C64 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = C64::new(1.0, 0.0);
    for col in 0..n {
        let piv = (col..n).max_by(|i, j| a[*i][col].norm().total_cmp(&a[*j][col].norm())).unwrap();
        if a[piv][col].norm() == 0.0 {
            return C64::zero();
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
        }
    }
    det
}

/// Solves `m x = b` by elimination with partial pivoting.
pub fn solve_complex(m: &[Vec<C64>], b: &[C64]) -> Option<Vec<C64>> {
    let n = m.len();
    let mut a: Vec<Vec<C64>> = m.iter().zip(b).map(|(r, bi)| {
        let mut r = r.clone();
        r.push(*bi);
        r
    }).collect();
    for col in 0..n {
        let piv = (col..n).max_by(|i, j| a[*i][col].norm().total_cmp(&a[*j][col].norm()))?;
        if a[piv][col].norm() < 1e-300 {
            return None;
        }
        a.swap(piv, col);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..=n {
                    let v = a[col][c];
                    a[r][c] -= f * v;
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

/// Newton iteration on `P_i(X) = Φ(P_i)(t0)` from random starts.
pub fn find_fiber_point(sys: &NumericSystem, t0: C64, opts: &NumericOptions) -> Result<Vec<C64>> {
    let targets = sys.targets_at(t0)?;
    let mut rng = SmallRng::seed_from_u64(opts.seed);
    for _ in 0..opts.restarts {
        let mut x: Vec<C64> = (0..sys.n)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if let Some(p) = newton(sys, &mut x, &targets, t0, opts) {
            return Ok(p);
        }
    }
    Err(Error::Numeric(format!("no fiber point found after {} restarts", opts.restarts)))
}

fn newton(sys: &NumericSystem, x: &mut Vec<C64>, targets: &[C64], t0: C64, opts: &NumericOptions) -> Option<Vec<C64>> {
    let resid = |x: &[C64]| -> Vec<C64> {
        sys.primaries.iter().zip(targets).map(|(p, f)| p.eval(x) - f).collect()
    };
    let norm = |r: &[C64]| -> f64 {
        r.iter().zip(targets).map(|(z, f)| z.norm() / f.norm().max(1.0)).fold(0.0, f64::max)
    };
    let mut r = resid(x);
    for _ in 0..200 {
        if !norm(&r).is_finite() {
            return None;
        }
        if norm(&r) < opts.newton_tol {
            let v = sys.full(x, t0);
            let m: Vec<Vec<C64>> = sys.grads.iter().map(|row| row.iter().map(|g| g.eval(&v)).collect()).collect();
            let scale: f64 = m.iter().map(|r| r.iter().map(|z| z.norm()).fold(0.0, f64::max)).product();
            if det_complex(&m).norm() > opts.singular_threshold * scale {
                return Some(x.clone());
            }
            return None;
        }
        let m: Vec<Vec<C64>> = sys.grads.iter().map(|row| row.iter().map(|g| g.eval(x)).collect()).collect();
        let step = solve_complex(&m, &r)?;
        // damped update: halve until the residual decreases
        let mut lambda = 1.0;
        loop {
            let trial: Vec<C64> = x.iter().zip(&step).map(|(a, s)| a - s * lambda).collect();
            let rt = resid(&trial);
            if norm(&rt) < norm(&r) || lambda < 1e-4 {
                *x = trial;
                r = rt;
                break;
            }
            lambda *= 0.5;
        }
    }
    None
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Adaptive Dormand–Prince integration along the piecewise-linear path
/// through `waypoints`, starting from `x0` at the first waypoint.
pub fn integrate_orbit(sys: &NumericSystem, x0: &[C64], waypoints: &[C64], opts: &NumericOptions) -> Result<NumericOrbit> {
    if waypoints.len() < 2 {
        return Err(Error::Invalid("a path needs at least two waypoints".into()));
    }
    let start_dev = sys.deviation(x0, waypoints[0])?;
    if start_dev > 1e-8 {
        return Err(Error::Numeric(format!("initial point is off the fiber by {start_dev:e}")));
    }
    let mut orbit = NumericOrbit {
        times: vec![waypoints[0]],
        states: vec![x0.to_vec()],
        errors: vec![0.0],
    };
    let mut x = x0.to_vec();
    let mut steps = 0usize;
    for seg in waypoints.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let dir = b - a;
        let f = |tau: f64, y: &[C64]| -> Result<Vec<C64>> {
            let v = sys.field(y, a + dir * tau, opts.singular_threshold)?;
            Ok(v.into_iter().map(|z| z * dir).collect())
        };
        let mut tau = 0.0;
        let mut h: f64 = 1e-3;
        let mut k1 = f(0.0, &x)?;
        while tau < 1.0 {
            steps += 1;
            if steps > opts.max_steps {
                return Err(Error::Numeric("step limit exceeded".into()));
            }
            h = h.min(1.0 - tau);
            let mut ks: Vec<Vec<C64>> = vec![k1.clone()];
            for s in 1..7 {
                let y: Vec<C64> = (0..x.len())
                    .map(|i| x[i] + ks.iter().enumerate().map(|(j, k)| k[i] * (A[s][j] * h)).sum::<C64>())
                    .collect();
                ks.push(f(tau + C[s] * h, &y)?);
            }
            let y5: Vec<C64> = (0..x.len())
                .map(|i| x[i] + (0..7).map(|j| ks[j][i] * (B5[j] * h)).sum::<C64>())
                .collect();
            let err = (0..x.len())
                .map(|i| {
                    let e: C64 = (0..7).map(|j| ks[j][i] * ((B5[j] - B4[j]) * h)).sum();
                    e.norm() / (opts.atol + opts.rtol * x[i].norm().max(y5[i].norm()))
                })
                .fold(0.0, f64::max);
            if err <= 1.0 {
                tau += h;
                x = y5;
                k1 = ks.pop().unwrap();
                orbit.times.push(a + dir * tau);
                orbit.states.push(x.clone());
                orbit.errors.push(err * opts.rtol);
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= factor;
            if h < 1e-14 {
                return Err(Error::Numeric(format!("step size underflow near t = {}", a + dir * tau)));
            }
        }
    }
    Ok(orbit)
}

/// Largest relative drift of the defining identities along an orbit.
pub fn invariant_drift(sys: &NumericSystem, orbit: &NumericOrbit) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (t, x) in orbit.times.iter().zip(&orbit.states) {
        worst = worst.max(sys.deviation(x, *t)?);
    }
    Ok(worst)
}

/// Finite-difference weights for the `k`-th derivative on the integer
/// stencil `-m..=m` (Fornberg's recursion).
pub fn fd_weights(k: usize, m: usize) -> Vec<f64> {
    let nodes: Vec<f64> = (0..=2 * m).map(|i| i as f64 - m as f64).collect();
    let n = nodes.len();
    let mut c = vec![vec![0.0; k + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0];
    for i in 1..n {
        let mn = i.min(k);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i];
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for d in (1..=mn).rev() {
                    c[i][d] = c1 * (d as f64 * c[i - 1][d - 1] - c5 * c[i - 1][d]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for d in (1..=mn).rev() {
                c[j][d] = (c4 * c[j][d] - d as f64 * c[j][d - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|row| row[k]).collect()
}

/// Result of [`check_ode_residual_numeric`].
#[derive(Clone, Debug)]
pub struct ResidualReport {
    /// Largest `|L(x_j)| / Σ_k (|a_k| + 1) |x_j^{(k)}|` (with `a_n = 0`
    /// in the sum) over coordinates and samples.
    pub max_residual: f64,
    /// Largest difference between the order-8 stencils and the next lower
    /// order ones, relative to the same scale.
    pub stencil_error: f64,
    pub samples: usize,
}

/// Samples the orbit, integrates a local grid around each sample and
/// applies `l` to every coordinate through central differences of
/// accuracy order 8.
pub fn check_ode_residual_numeric(
    l: &LinearODE,
    sys: &NumericSystem,
    orbit: &NumericOrbit,
    opts: &NumericOptions,
) -> Result<ResidualReport> {
    let order = l.order();
    let coeffs: Vec<CompiledFraction> = l
        .rational_coeffs()
        .ok_or_else(|| Error::UnsupportedRadical("numeric residual needs rational coefficients".into()))?
        .iter()
        .map(CompiledFraction::from_ratfn)
        .collect();
    let m = 4 + order.div_ceil(2);
    let weights: Vec<Vec<f64>> = (0..=order).map(|k| fd_weights(k, m)).collect();
    let lower: Vec<Vec<f64>> = (0..=order).map(|k| fd_weights(k, m - 1)).collect();
    let count = orbit.times.len();
    if count < 2 {
        return Err(Error::Numeric("orbit too short for sampling".into()));
    }
    let samples = opts.residual_samples.min(count - 1).max(1);
    let mut report = ResidualReport { max_residual: 0.0, stencil_error: 0.0, samples: 0 };
    let local = NumericOptions { rtol: 1e-14, atol: 1e-16, ..opts.clone() };
    for s in 1..=samples {
        let idx = s * (count - 1) / (samples + 1).max(1);
        let idx = idx.clamp(1, count - 1);
        let t0 = orbit.times[idx];
        let dir = {
            let d = orbit.times[idx] - orbit.times[idx - 1];
            d / d.norm()
        };
        let h = dir * opts.fd_step;
        // states on the stencil, integrated outward from the sample
        let mut grid: Vec<Vec<C64>> = vec![Vec::new(); 2 * m + 1];
        grid[m] = orbit.states[idx].clone();
        for sign in [1.0, -1.0] {
            let pts: Vec<C64> = (0..=m).map(|j| t0 + h * (sign * j as f64)).collect();
            let mut x = orbit.states[idx].clone();
            for j in 1..=m {
                let o = integrate_orbit(sys, &x, &[pts[j - 1], pts[j]], &local)?;
                x = o.states.last().unwrap().clone();
                let pos = if sign > 0.0 { m + j } else { m - j };
                grid[pos] = x.clone();
            }
        }
        let params = sys.params_at(t0);
        let a: Vec<C64> = coeffs
            .iter()
            .map(|c| c.eval(&params).ok_or_else(|| Error::Numeric(format!("coefficient pole at t = {t0}"))))
            .collect::<Result<_>>()?;
        for j in 0..sys.n {
            let deriv = |w: &[f64], k: usize, off: usize| -> C64 {
                let sum: C64 = w.iter().enumerate().map(|(i, wi)| grid[i + off][j] * *wi).sum();
                sum / h.powu(k as u32)
            };
            let d: Vec<C64> = (0..=order).map(|k| deriv(&weights[k], k, 0)).collect();
            let dl: Vec<C64> = (0..=order).map(|k| deriv(&lower[k], k, 1)).collect();
            let mut value = d[order];
            let mut scale = d[order].norm();
            for k in 0..order {
                value += a[k] * d[k];
                scale += (a[k].norm() + 1.0) * d[k].norm();
            }
            if scale == 0.0 {
                continue;
            }
            let stencil = (0..=order)
                .map(|k| {
                    let ak = if k == order { 1.0 } else { a[k].norm() };
                    ak * (d[k] - dl[k]).norm()
                })
                .sum::<f64>();
            report.max_residual = report.max_residual.max(value.norm() / scale);
            report.stencil_error = report.stencil_error.max(stencil / scale);
        }
        report.samples += 1;
    }
    Ok(report)
}
