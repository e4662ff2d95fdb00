use nalgebra::{DMatrix, SymmetricEigen};

/// Settings of one thick-restart Lanczos run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosConfig {
    /// Converged when ‖Ax − θx‖ ≤ tol · max(1, |θ|).
    pub tol: f64,
    /// Krylov basis size at which the iteration restarts.
    pub max_krylov: usize,
    pub max_restarts: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
    /// True residual norm ‖Ax − θx‖ of the returned pair.
    pub residual: f64,
    pub matvecs: usize,
    pub restarts: usize,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Lowest eigenpair of the symmetric operator `apply` (y ← A·x).
///
/// Lanczos with full (two-pass) reorthogonalization; when the basis reaches
/// `max_krylov` vectors it is compressed to the lowest half of the Ritz
/// vectors plus the current residual direction, which preserves the
/// convergence rate of the unrestarted iteration for the extremal pair.
pub fn lowest_eigenpair<F>(apply: F, start: &[f64], cfg: &LanczosConfig) -> Eigenpair
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = start.len();
    assert!(n > 0, "empty operator");
    let m = cfg.max_krylov.clamp(2, n.max(2)).min(n);
    let keep_target = (m / 2).max(1);

    let mut v0 = start.to_vec();
    let s = norm(&v0);
    if s > 0.0 && s.is_finite() {
        v0.iter_mut().for_each(|x| *x /= s);
    } else {
        v0 = vec![1.0 / (n as f64).sqrt(); n];
    }

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    basis.push(v0);
    let mut proj = DMatrix::<f64>::zeros(m, m);
    let mut w = vec![0.0; n];
    let mut coeffs = vec![0.0; m];
    let mut matvecs = 0usize;
    let mut j = 0usize;

    for restart in 0..=cfg.max_restarts {
        let mut beta;
        loop {
            apply(&basis[j], &mut w);
            matvecs += 1;
            coeffs[..=j].iter_mut().for_each(|c| *c = 0.0);
            for _pass in 0..2 {
                for (i, v) in basis.iter().enumerate().take(j + 1) {
                    let h = dot(v, &w);
                    coeffs[i] += h;
                    axpy(-h, v, &mut w);
                }
            }
            for i in 0..=j {
                proj[(i, j)] = coeffs[i];
                proj[(j, i)] = coeffs[i];
            }
            beta = norm(&w);
            let scale = coeffs[j].abs().max(1.0);
            if j + 1 == m || beta <= 1e-14 * scale {
                break;
            }
            basis.push(w.iter().map(|x| x / beta).collect());
            proj[(j + 1, j)] = beta;
            proj[(j, j + 1)] = beta;
            j += 1;
        }

        let size = j + 1;
        let eig = SymmetricEigen::new(proj.view((0, 0), (size, size)).into_owned());
        let mut order: Vec<usize> = (0..size).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let theta = eig.eigenvalues[order[0]];
        let invariant = beta <= 1e-14 * theta.abs().max(1.0);
        let estimate = (beta * eig.eigenvectors[(size - 1, order[0])]).abs();
        let done = invariant || estimate <= cfg.tol * theta.abs().max(1.0);

        if done || restart == cfg.max_restarts || size == n {
            let mut x = vec![0.0; n];
            for (l, v) in basis.iter().enumerate() {
                axpy(eig.eigenvectors[(l, order[0])], v, &mut x);
            }
            let s = norm(&x);
            x.iter_mut().for_each(|c| *c /= s);
            apply(&x, &mut w);
            matvecs += 1;
            let value = dot(&x, &w);
            axpy(-value, &x, &mut w);
            let residual = norm(&w);
            return Eigenpair {
                value,
                vector: x,
                residual,
                matvecs,
                restarts: restart,
                converged: residual <= 10.0 * cfg.tol * value.abs().max(1.0),
            };
        }

        // compress to the lowest Ritz vectors and continue from the residual
        let keep = keep_target.min(size - 1);
        let mut kept: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
        for &col in order.iter().take(keep) {
            let mut y = vec![0.0; n];
            for (l, v) in basis.iter().enumerate() {
                axpy(eig.eigenvectors[(l, col)], v, &mut y);
            }
            kept.push(y);
        }
        proj.fill(0.0);
        for (i, &col) in order.iter().take(keep).enumerate() {
            proj[(i, i)] = eig.eigenvalues[col];
            let c = beta * eig.eigenvectors[(size - 1, col)];
            proj[(i, keep)] = c;
            proj[(keep, i)] = c;
        }
        kept.push(w.iter().map(|x| x / beta).collect());
        basis = kept;
        j = keep;
    }
    unreachable!("loop returns on the final restart")
}
