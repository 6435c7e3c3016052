//! Dense complex linear-algebra kernels shared by the state and code
//! modules: products, adjoints, unitary conjugation, and a Jacobi
//! eigensolver for Hermitian matrices.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rayon::prelude::*;

/// Conjugate transpose.
pub fn adjoint(a: &Array2<Complex64>) -> Array2<Complex64> {
    let mut out = Array2::zeros((a.ncols(), a.nrows()));
    for ((i, j), z) in a.indexed_iter() {
        out[[j, i]] = z.conj();
    }
    out
}

/// C = A * B.
///
/// Rows of C are accumulated in a fixed k-order and parallelized over rows
/// only, so the result is bit-identical regardless of thread count.
pub fn matmul(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    let (n, ka) = a.dim();
    let (kb, m) = b.dim();
    assert_eq!(ka, kb, "inner dimensions must agree");
    let a_s = a.as_slice().expect("contiguous lhs");
    let b_s = b.as_slice().expect("contiguous rhs");
    let mut c = vec![Complex64::new(0.0, 0.0); n * m];

    let row = |i: usize, crow: &mut [Complex64]| {
        let arow = &a_s[i * ka..(i + 1) * ka];
        for (k, &aik) in arow.iter().enumerate() {
            if aik.re == 0.0 && aik.im == 0.0 {
                continue;
            }
            let brow = &b_s[k * m..(k + 1) * m];
            for (cj, &bj) in crow.iter_mut().zip(brow) {
                *cj += aik * bj;
            }
        }
    };

    if n >= 64 {
        c.par_chunks_mut(m)
            .enumerate()
            .for_each(|(i, crow)| row(i, crow));
    } else {
        for (i, crow) in c.chunks_mut(m).enumerate() {
            row(i, crow);
        }
    }
    Array2::from_shape_vec((n, m), c).expect("shape")
}

/// U^dagger * rho * U.
///
/// When rho is supported on few basis rows only those rows enter the
/// product; the result equals the dense evaluation because the omitted
/// terms are exactly zero.
pub fn conjugate_by_adjoint(u: &Array2<Complex64>, rho: &Array2<Complex64>) -> Array2<Complex64> {
    let dim = rho.nrows();
    assert_eq!(rho.ncols(), dim);
    assert_eq!(u.dim(), (dim, dim));

    let support: Vec<usize> = (0..dim)
        .filter(|&i| rho.row(i).iter().any(|z| z.re != 0.0 || z.im != 0.0))
        .collect();
    let s = support.len();

    if s * 4 <= dim {
        // compact route: restrict to the supported rows/columns of rho
        let mut block = Array2::zeros((s, s));
        for (ai, &a) in support.iter().enumerate() {
            for (bi, &b) in support.iter().enumerate() {
                block[[ai, bi]] = rho[[a, b]];
            }
        }
        let mut u_rows = Array2::zeros((s, dim));
        for (ai, &a) in support.iter().enumerate() {
            u_rows.row_mut(ai).assign(&u.row(a));
        }
        let w = matmul(&block, &u_rows);
        matmul(&adjoint(&u_rows), &w)
    } else {
        let t = matmul(rho, u);
        matmul(&adjoint(u), &t)
    }
}

/// A * v for a dense matrix and vector.
pub fn matvec(a: &Array2<Complex64>, v: &Array1<Complex64>) -> Array1<Complex64> {
    let (n, k) = a.dim();
    assert_eq!(k, v.len());
    let mut out = Array1::zeros(n);
    for i in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &vj) in v.iter().enumerate() {
            acc += a[[i, j]] * vj;
        }
        out[i] = acc;
    }
    out
}

/// Eigenvalues of a Hermitian matrix in ascending order, by cyclic Jacobi
/// rotations. Intended for validation and test oracles on small matrices.
pub fn hermitian_eigenvalues(a: &Array2<Complex64>) -> Vec<f64> {
    let n = a.nrows();
    assert_eq!(a.ncols(), n, "matrix must be square");
    let mut m = a.clone();
    let scale = m
        .iter()
        .map(|z| z.norm())
        .fold(0.0f64, f64::max)
        .max(1.0);

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[[p, q]].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[[p, q]];
                let abs = apq.norm();
                if abs <= 1e-300 {
                    continue;
                }
                let phase = apq / abs;
                let app = m[[p, p]].re;
                let aqq = m[[q, q]].re;
                let tau = (aqq - app) / (2.0 * abs);
                // smaller-magnitude root of t^2 - 2 tau t - 1 = 0
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // column update: M <- M V with V[p,p]=c, V[q,p]=s e^{-i phi},
                // V[p,q]=-s e^{i phi}, V[q,q]=c
                for i in 0..n {
                    let mip = m[[i, p]];
                    let miq = m[[i, q]];
                    m[[i, p]] = mip * c + miq * s * phase.conj();
                    m[[i, q]] = -mip * s * phase + miq * c;
                }
                // row update: M <- V^dagger M
                for j in 0..n {
                    let mpj = m[[p, j]];
                    let mqj = m[[q, j]];
                    m[[p, j]] = mpj * c + mqj * s * phase;
                    m[[q, j]] = -mpj * s * phase.conj() + mqj * c;
                }
            }
        }
    }

    let mut eig: Vec<f64> = (0..n).map(|i| m[[i, i]].re).collect();
    eig.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    eig
}
