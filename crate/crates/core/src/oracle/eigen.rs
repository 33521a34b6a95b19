use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{inner, norm, CMatrix, C64, ZERO};
use crate::math::sqrt;

/// Ascending eigenvalues with orthonormal eigenvectors stored as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// `V Λ V†`
    pub fn reconstruct(&self) -> CMatrix {
        self.map_values(|x| x)
    }

    /// `V f(Λ) V†`
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let fl: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        CMatrix::from_fn(n, |i, j| {
            (0..n).map(|k| self.vectors[(i, k)] * self.vectors[(j, k)].conj() * fl[k]).sum()
        })
    }
}

const HERMITIAN_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;
/// Relative gap under which eigenvalues count as one degenerate cluster.
const CLUSTER_TOL: f64 = 1e-10;

/// Full eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Values are ascending. Inside a degenerate cluster the basis is fixed by
/// projecting unit vectors `e_0, e_1, …` onto the eigenspace and
/// Gram-Schmidt orthonormalizing them in index order, so the output does not
/// depend on rotation order.
pub fn hermitian_eigensystem(m: &CMatrix) -> Result<EigenDecomposition> {
    let n = m.dim();
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix"));
    }
    let scale = m.max_abs().max(1.0);
    let deviation = m.hermiticity_defect();
    if deviation > HERMITIAN_TOL * scale || !deviation.is_finite() {
        return Err(Error::NotHermitian { deviation });
    }

    let mut a = CMatrix::from_fn(n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)].conj()));
    let mut v = CMatrix::identity(n);
    let total = a.frobenius_norm_sqr();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if off <= 1e-34 * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values: Vec<f64> = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut vectors = CMatrix::from_fn(n, |i, j| v[(i, order[j])]);

    canonicalize_clusters(&values, &mut vectors, scale);
    Ok(EigenDecomposition { values, vectors })
}

/// Annihilates `a[p][q]`: a diagonal phase makes it real, then a real Givens rotation.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let n = a.dim();
    let apq = a[(p, q)];
    let b = apq.norm();
    if b == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    if b < 1e-300 || (b < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs())) {
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return;
    }

    // Column q times e^{−iα}, row q times e^{iα}, with a[p][q] = b e^{iα}.
    let phase = apq / b;
    let conj = phase.conj();
    for i in 0..n {
        a[(i, q)] *= conj;
    }
    for j in 0..n {
        a[(q, j)] *= phase;
    }
    for i in 0..n {
        v[(i, q)] *= conj;
    }

    let tau = (aqq - app) / (2.0 * b);
    let t = if tau >= 0.0 { 1.0 / (tau + sqrt(1.0 + tau * tau)) } else { -1.0 / (-tau + sqrt(1.0 + tau * tau)) };
    let c = 1.0 / sqrt(1.0 + t * t);
    let s = t * c;

    for i in 0..n {
        let (x, y) = (a[(i, p)], a[(i, q)]);
        a[(i, p)] = x * c - y * s;
        a[(i, q)] = x * s + y * c;
    }
    for j in 0..n {
        let (x, y) = (a[(p, j)], a[(q, j)]);
        a[(p, j)] = x * c - y * s;
        a[(q, j)] = x * s + y * c;
    }
    for i in 0..n {
        let (x, y) = (v[(i, p)], v[(i, q)]);
        v[(i, p)] = x * c - y * s;
        v[(i, q)] = x * s + y * c;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(app - t * b, 0.0);
    a[(q, q)] = C64::new(aqq + t * b, 0.0);
}

fn canonicalize_clusters(values: &[f64], vectors: &mut CMatrix, scale: f64) {
    let n = values.len();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[end] - values[end - 1] <= CLUSTER_TOL * scale {
            end += 1;
        }
        let basis: Vec<Vec<C64>> = (start..end).map(|k| vectors.column(k)).collect();
        let fixed = fixed_basis(&basis, n);
        if fixed.len() == basis.len() {
            for (k, col) in fixed.iter().enumerate() {
                for i in 0..n {
                    vectors[(i, start + k)] = col[i];
                }
            }
        }
        start = end;
    }
}

/// Index-ordered orthonormal basis of `span(basis)`. Each vector has a real
/// positive component along the unit vector it was generated from.
fn fixed_basis(basis: &[Vec<C64>], n: usize) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = Vec::with_capacity(basis.len());
    for e in 0..n {
        if out.len() == basis.len() {
            break;
        }
        // Projection of e_e onto the subspace: Σ_k v_k conj(v_k[e]).
        let mut w: Vec<C64> = (0..n).map(|i| basis.iter().map(|b| b[i] * b[e].conj()).sum()).collect();
        // Gram-Schmidt, twice for stability.
        for _ in 0..2 {
            for u in &out {
                let c = inner(u, &w);
                for i in 0..n {
                    w[i] -= u[i] * c;
                }
            }
        }
        let nw = norm(&w);
        if nw > 1e-3 {
            for z in w.iter_mut() {
                *z /= nw;
            }
            out.push(w);
        }
    }
    out
}
