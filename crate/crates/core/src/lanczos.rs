//! Lanczos iteration for the smallest eigenpairs of a sparse symmetric
//! matrix. Full reorthogonalization, locking of converged Ritz pairs, and
//! restarts in the deflated space so repeated eigenvalues are recovered.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::sparse::CsrMatrix;

#[derive(Debug, Clone)]
pub struct LanczosOptions {
    /// Residual threshold relative to the ∞-norm of the operator.
    pub rel_tol: f64,
    pub max_subspace: usize,
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            rel_tol: 1e-10,
            max_subspace: 600,
            max_restarts: 400,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LanczosFailure {
    pub found: usize,
    pub wanted: usize,
}

/// The `k` smallest eigenpairs of symmetric `a`, ascending.
pub fn smallest_eigenpairs(
    a: &CsrMatrix,
    k: usize,
    opts: &LanczosOptions,
) -> Result<(Vec<f64>, Vec<Vec<f64>>), LanczosFailure> {
    let n = a.nrows();
    let k = k.min(n);
    let norm = a.inf_norm().max(f64::MIN_POSITIVE);
    let tol = opts.rel_tol * norm;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut vals: Vec<f64> = Vec::new();
    let mut vecs: Vec<Vec<f64>> = Vec::new();
    let mut subspace = (2 * k + 20).clamp(20, opts.max_subspace).min(n);
    let mut verified = false;

    for _ in 0..opts.max_restarts {
        if vals.len() >= k && verified {
            break;
        }
        let room = n - vecs.len();
        if room == 0 {
            verified = true;
            continue;
        }
        let m = subspace.min(room);
        let ritz = run(a, &vecs, m, tol, &mut rng);
        if vals.len() >= k {
            // Verification pass: anything smaller than what we hold?
            let largest = vals[k - 1];
            match ritz.first() {
                Some(&(theta, ref v, true)) if theta < largest - tol * 10.0 => {
                    vals.push(theta);
                    vecs.push(v.clone());
                    sort_pairs(&mut vals, &mut vecs);
                    vals.truncate(k);
                    vecs.truncate(k);
                }
                Some((_, _, false)) => subspace = (subspace * 2).min(opts.max_subspace),
                _ => verified = true,
            }
            continue;
        }
        let mut locked_any = false;
        for (theta, v, converged) in ritz {
            if !converged || vals.len() >= k {
                break;
            }
            vals.push(theta);
            vecs.push(v);
            locked_any = true;
        }
        if !locked_any {
            if subspace >= opts.max_subspace.min(room) {
                return Err(LanczosFailure { found: vals.len(), wanted: k });
            }
            subspace = (subspace * 2).min(opts.max_subspace);
        }
        sort_pairs(&mut vals, &mut vecs);
    }
    if vals.len() < k {
        return Err(LanczosFailure { found: vals.len(), wanted: k });
    }
    Ok((vals, vecs))
}

fn sort_pairs(vals: &mut Vec<f64>, vecs: &mut Vec<Vec<f64>>) {
    let mut idx: Vec<usize> = (0..vals.len()).collect();
    idx.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
    *vals = idx.iter().map(|&i| vals[i]).collect();
    *vecs = idx.iter().map(|&i| vecs[i].clone()).collect();
}

/// One Lanczos run of up to `m` steps in the complement of `locked`.
/// Returns Ritz triples `(value, vector, converged)` ascending by value.
fn run(a: &CsrMatrix, locked: &[Vec<f64>], m: usize, tol: f64, rng: &mut ChaCha8Rng) -> Vec<(f64, Vec<f64>, bool)> {
    let n = a.nrows();
    let mut q: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
    orthogonalize(&mut q, locked);
    if normalize(&mut q) == 0.0 {
        return Vec::new();
    }
    let mut basis: Vec<Vec<f64>> = vec![q];
    let mut alpha = Vec::with_capacity(m);
    let mut beta: Vec<f64> = Vec::with_capacity(m);
    let mut w = vec![0.0; n];
    loop {
        let j = basis.len() - 1;
        a.matvec(&basis[j], &mut w);
        let aj = dot(&w, &basis[j]);
        alpha.push(aj);
        // Two passes of classical Gram-Schmidt against everything.
        for _ in 0..2 {
            orthogonalize(&mut w, locked);
            orthogonalize(&mut w, &basis);
        }
        let b = norm2(&w);
        if basis.len() == m || b <= tol * 1e-3 {
            beta.push(b);
            break;
        }
        beta.push(b);
        let next: Vec<f64> = w.iter().map(|x| x / b).collect();
        basis.push(next);
    }
    let size = alpha.len();
    let mut t = DMatrix::zeros(size, size);
    for i in 0..size {
        t[(i, i)] = alpha[i];
        if i + 1 < size {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let last_beta = beta[size - 1];
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    order
        .into_iter()
        .map(|c| {
            let s = eig.eigenvectors.column(c);
            let mut v = vec![0.0; n];
            for (coef, b) in s.iter().zip(&basis) {
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi += coef * bi;
                }
            }
            orthogonalize(&mut v, locked);
            normalize(&mut v);
            // Direct residual check; the Lanczos estimate |β s_m| is
            // optimistic once orthogonality degrades.
            let theta = eig.eigenvalues[c];
            let estimate = (last_beta * s[size - 1]).abs();
            let converged = estimate <= tol && residual(a, theta, &v) <= tol * 10.0;
            (theta, v, converged)
        })
        .collect()
}

fn residual(a: &CsrMatrix, theta: f64, v: &[f64]) -> f64 {
    let mut av = vec![0.0; v.len()];
    a.matvec(v, &mut av);
    av.iter().zip(v).map(|(x, y)| (x - theta * y).powi(2)).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(v: &mut [f64]) -> f64 {
    let nrm = norm2(v);
    if nrm > 0.0 {
        v.iter_mut().for_each(|x| *x /= nrm);
    }
    nrm
}

fn orthogonalize(v: &mut [f64], against: &[Vec<f64>]) {
    for u in against {
        let c = dot(v, u);
        for (vi, ui) in v.iter_mut().zip(u) {
            *vi -= c * ui;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_with_repeats() {
        let diag = [3.0, 1.0, 1.0, 2.0, 5.0, 1.0, 4.0, 0.5];
        let a = CsrMatrix::from_triplets(8, 8, diag.iter().enumerate().map(|(i, &d)| (i, i, d)).collect());
        let (vals, vecs) = smallest_eigenpairs(&a, 5, &LanczosOptions::default()).unwrap();
        let want = [0.5, 1.0, 1.0, 1.0, 2.0];
        for (v, w) in vals.iter().zip(want) {
            assert!((v - w).abs() < 1e-9, "{vals:?}");
        }
        for (val, vec) in vals.iter().zip(&vecs) {
            assert!(residual(&a, *val, vec) < 1e-8);
        }
    }
}
