//! Full (non-restarted) preconditioned GMRES.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::linalg::vector::{axpy, dot, norm2};
use crate::linalg::{LinearOperator, Scalar};

/// Loss-of-orthogonality level that triggers a second Gram–Schmidt pass.
pub const REORTHOGONALIZATION_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PreconditionSide {
    /// Solves `A M⁻¹ y = b`, `x = M⁻¹ y`; stops on the true residual.
    #[default]
    Right,
    /// Solves `M⁻¹ A x = M⁻¹ b`; stops on the preconditioned residual.
    Left,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GmresConfig {
    pub rtol: f64,
    pub max_iter: usize,
    pub side: PreconditionSide,
}

impl Default for GmresConfig {
    fn default() -> Self {
        Self {
            rtol: 1e-7,
            max_iter: 100,
            side: PreconditionSide::Right,
        }
    }
}

impl GmresConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0 && self.rtol.is_finite()) {
            return Err(Error::Config(format!("rtol must be positive, got {}", self.rtol)));
        }
        if self.max_iter == 0 {
            return Err(Error::Config("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport<T> {
    pub iterations: usize,
    pub converged: bool,
    /// Relative residual after each iteration, starting with `1` for the zero guess.
    ///
    /// Entries are the least-squares residuals of the Arnoldi problem; with
    /// right preconditioning they equal `‖b - A x_j‖ / ‖b‖` up to rounding.
    pub residual_history: Vec<f64>,
    /// `‖b - A x‖ / ‖b‖` for the returned solution.
    pub true_residual: f64,
    pub solution: Vec<T>,
    pub elapsed: Duration,
    /// Time spent inside preconditioner applications.
    pub preconditioner_time: Duration,
}

struct Givens<T> {
    c: f64,
    s: T,
}

impl<T: Scalar> Givens<T> {
    /// Rotation mapping `(a, b)` to `(ρ, 0)`.
    fn new(a: T, b: T) -> (Self, T) {
        let (aa, ab) = (a.abs(), b.abs());
        let rho = aa.hypot(ab);
        if rho == 0.0 {
            return (Self { c: 1.0, s: T::zero() }, T::zero());
        }
        if aa == 0.0 {
            return (Self { c: 0.0, s: b.conj().scale(1.0 / ab) }, T::from_real(ab));
        }
        let phase = a.scale(1.0 / aa);
        let g = Self {
            c: aa / rho,
            s: phase * b.conj().scale(1.0 / rho),
        };
        (g, phase.scale(rho))
    }

    fn apply(&self, x: &mut T, y: &mut T) {
        let (a, b) = (*x, *y);
        *x = a.scale(self.c) + self.s * b;
        *y = b.scale(self.c) - self.s.conj() * a;
    }
}

fn residual_norm<T: Scalar, A: LinearOperator<T> + ?Sized>(a: &A, b: &[T], x: &[T]) -> Result<f64> {
    let ax = a.apply_vec(x)?;
    Ok(b.iter().zip(&ax).map(|(&u, &v)| (u - v).abs_sqr()).sum::<f64>().sqrt())
}

/// Preconditioned GMRES from a zero initial guess.
///
/// Hitting `max_iter` is reported through `converged = false`; an Arnoldi
/// breakdown before the tolerance is met is an error.
pub fn gmres<T, A, M>(a: &A, m: &M, b: &[T], cfg: &GmresConfig) -> Result<SolveReport<T>>
where
    T: Scalar,
    A: LinearOperator<T> + ?Sized,
    M: LinearOperator<T> + ?Sized,
{
    cfg.validate()?;
    let n = a.dim();
    check_len(n, m.dim())?;
    check_len(n, b.len())?;
    let start = Instant::now();
    let mut pc_time = Duration::ZERO;
    let mut precondition = |x: &[T]| -> Result<Vec<T>> {
        let t = Instant::now();
        let y = m.apply_vec(x);
        pc_time += t.elapsed();
        y
    };

    let b_norm = norm2(b);
    if b_norm == 0.0 {
        return Ok(SolveReport {
            iterations: 0,
            converged: true,
            residual_history: vec![0.0],
            true_residual: 0.0,
            solution: vec![T::zero(); n],
            elapsed: start.elapsed(),
            preconditioner_time: pc_time,
        });
    }

    let r0 = match cfg.side {
        PreconditionSide::Right => b.to_vec(),
        PreconditionSide::Left => precondition(b)?,
    };
    let beta = norm2(&r0);

    let mut basis: Vec<Vec<T>> = vec![r0.iter().map(|v| v.scale(1.0 / beta)).collect()];
    // columns of the rotated Hessenberg matrix, i.e. the triangular factor
    let mut r_cols: Vec<Vec<T>> = Vec::new();
    let mut rotations: Vec<Givens<T>> = Vec::new();
    let mut g = vec![T::from_real(beta)];
    let mut history = vec![1.0];

    let solution_from = |basis: &[Vec<T>], r_cols: &[Vec<T>], g: &[T], pre: &mut dyn FnMut(&[T]) -> Result<Vec<T>>| -> Result<Vec<T>> {
        let j = r_cols.len();
        let mut y = vec![T::zero(); j];
        for i in (0..j).rev() {
            let mut acc = g[i];
            for l in i + 1..j {
                acc -= r_cols[l][i] * y[l];
            }
            y[i] = acc / r_cols[i][i];
        }
        let mut z = vec![T::zero(); n];
        for (yi, vi) in y.iter().zip(basis) {
            axpy(*yi, vi, &mut z);
        }
        match cfg.side {
            PreconditionSide::Right => pre(&z),
            PreconditionSide::Left => Ok(z),
        }
    };

    let mut converged = false;
    let mut solution = None;
    let mut true_residual = 1.0;
    for j in 0..cfg.max_iter {
        let mut w = match cfg.side {
            PreconditionSide::Right => a.apply_vec(&precondition(&basis[j])?)?,
            PreconditionSide::Left => precondition(&a.apply_vec(&basis[j])?)?,
        };

        let mut h = vec![T::zero(); j + 2];
        for (i, v) in basis.iter().enumerate() {
            let hij = dot(v, &w);
            axpy(-hij, v, &mut w);
            h[i] = hij;
        }
        let mut w_norm = norm2(&w);
        if w_norm > 0.0 {
            let coeffs: Vec<T> = basis.iter().map(|v| dot(v, &w)).collect();
            let loss = coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max) / w_norm;
            if loss > REORTHOGONALIZATION_THRESHOLD {
                for (i, (v, &c)) in basis.iter().zip(&coeffs).enumerate() {
                    axpy(-c, v, &mut w);
                    h[i] += c;
                }
                w_norm = norm2(&w);
            }
        }
        h[j + 1] = T::from_real(w_norm);
        let column_norm = h.iter().map(|v| v.abs_sqr()).sum::<f64>().sqrt();

        for (i, rot) in rotations.iter().enumerate() {
            let (mut x, mut y) = (h[i], h[i + 1]);
            rot.apply(&mut x, &mut y);
            h[i] = x;
            h[i + 1] = y;
        }
        let (rot, rho) = Givens::new(h[j], h[j + 1]);
        h[j] = rho;
        h.truncate(j + 1);
        let mut gj = g[j];
        let mut gj1 = T::zero();
        rot.apply(&mut gj, &mut gj1);
        g[j] = gj;
        g.push(gj1);
        rotations.push(rot);
        r_cols.push(h);

        let estimate = gj1.abs() / beta;
        history.push(estimate);
        let breakdown = w_norm <= 1e-14 * column_norm || rho.abs() == 0.0;
        let last = j + 1 == cfg.max_iter;

        if estimate <= cfg.rtol || breakdown || last {
            let x = solution_from(&basis, &r_cols, &g, &mut precondition)?;
            true_residual = residual_norm(a, b, &x)? / b_norm;
            let met = match cfg.side {
                PreconditionSide::Right => true_residual <= cfg.rtol,
                PreconditionSide::Left => estimate <= cfg.rtol,
            };
            if met {
                converged = true;
                solution = Some(x);
                break;
            }
            if breakdown {
                return Err(Error::Breakdown {
                    iteration: j + 1,
                    residual: true_residual,
                });
            }
            if last {
                solution = Some(x);
                break;
            }
        }
        basis.push(w.iter().map(|v| v.scale(1.0 / w_norm)).collect());
    }

    Ok(SolveReport {
        iterations: history.len() - 1,
        converged,
        residual_history: history,
        true_residual,
        solution: solution.expect("loop always produces a solution"),
        elapsed: start.elapsed(),
        preconditioner_time: pc_time,
    })
}
