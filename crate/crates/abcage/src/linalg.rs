//! Small dense linear-algebra helpers shared by the lattice and Floquet
//! modules: sorted Hermitian eigensystems and eigenvalues of (near-)unitary
//! 3x3 propagators.

use nalgebra::{DMatrix, Matrix3, Vector3};
use num_complex::Complex64;

/// Eigenvalues of a Hermitian matrix, sorted ascending.
pub fn hermitian_eigenvalues(h: &DMatrix<Complex64>) -> Vec<f64> {
    let mut vals: Vec<f64> = h
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Eigenvalues of a normal (in practice unitary) 3x3 matrix.
///
/// A unitary U is normal, so its Hermitian part `(U + U^H)/2` and skew part
/// `(U - U^H)/(2i)` commute and share an eigenbasis. Diagonalizing the
/// Hermitian part and then splitting its degenerate subspaces with the skew
/// part recovers the common basis without a general complex eigensolver.
/// Quasi-energy pairs +-eps have equal Hermitian parts cos(eps T), so the
/// degenerate-group step is the common case, not a corner case.
pub fn unitary_eigenvalues(u: &Matrix3<Complex64>) -> [Complex64; 3] {
    let uh = u.adjoint();
    let hc = (u + uh).map(|z| z * Complex64::new(0.5, 0.0));
    let hs = (u - uh).map(|z| z * Complex64::new(0.0, -0.5));

    let eig = hc.symmetric_eigen();
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());

    let mut basis: [Vector3<Complex64>; 3] = [
        eig.eigenvectors.column(order[0]).into_owned(),
        eig.eigenvectors.column(order[1]).into_owned(),
        eig.eigenvectors.column(order[2]).into_owned(),
    ];
    let vals = [
        eig.eigenvalues[order[0]],
        eig.eigenvalues[order[1]],
        eig.eigenvalues[order[2]],
    ];

    // group indices whose Hermitian-part eigenvalues coincide
    const GROUP_TOL: f64 = 1e-7;
    let mut start = 0;
    while start < 3 {
        let mut end = start + 1;
        while end < 3 && (vals[end] - vals[end - 1]).abs() < GROUP_TOL {
            end += 1;
        }
        if end - start > 1 {
            split_group(&mut basis, start, end, &hs);
        }
        start = end;
    }

    let mut out = [Complex64::new(0.0, 0.0); 3];
    for (k, v) in basis.iter().enumerate() {
        out[k] = rayleigh(u, v);
    }
    out
}

// Rotate basis[start..end] so the skew part is diagonal on the group.
fn split_group(
    basis: &mut [Vector3<Complex64>; 3],
    start: usize,
    end: usize,
    hs: &Matrix3<Complex64>,
) {
    let g = end - start;
    let mut block = DMatrix::<Complex64>::zeros(g, g);
    for i in 0..g {
        let hv = hs * basis[start + i];
        for j in 0..g {
            block[(j, i)] = basis[start + j].dotc(&hv);
        }
    }
    // enforce exact Hermiticity before the eigensolve
    let block = (block.clone() + block.adjoint()).map(|z| z * Complex64::new(0.5, 0.0));
    let sub = block.symmetric_eigen();
    let mut rotated: Vec<Vector3<Complex64>> = Vec::with_capacity(g);
    for col in 0..g {
        let mut v = Vector3::<Complex64>::zeros();
        for row in 0..g {
            v += basis[start + row] * sub.eigenvectors[(row, col)];
        }
        let norm = v.norm();
        rotated.push(v / Complex64::new(norm, 0.0));
    }
    for (i, v) in rotated.into_iter().enumerate() {
        basis[start + i] = v;
    }
}

fn rayleigh(u: &Matrix3<Complex64>, v: &Vector3<Complex64>) -> Complex64 {
    let uv = u * v;
    v.dotc(&uv) / v.dotc(v)
}

/// Frobenius-norm defect `||U^H U - I||`.
pub fn unitarity_defect(u: &Matrix3<Complex64>) -> f64 {
    let mut m = u.adjoint() * u;
    for i in 0..3 {
        m[(i, i)] -= Complex64::new(1.0, 0.0);
    }
    m.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn diag_unitary(phases: [f64; 3]) -> Matrix3<Complex64> {
        Matrix3::from_diagonal(&Vector3::new(
            Complex64::from_polar(1.0, phases[0]),
            Complex64::from_polar(1.0, phases[1]),
            Complex64::from_polar(1.0, phases[2]),
        ))
    }

    fn random_unitary(seed: u64) -> Matrix3<Complex64> {
        // deterministic pseudo-random Hermitian, exponentiated via its eigensystem
        let mut s = seed;
        let mut next = || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut h = Matrix3::<Complex64>::zeros();
        for i in 0..3 {
            for j in 0..3 {
                h[(i, j)] = Complex64::new(next(), next());
            }
        }
        let h = (h + h.adjoint()).map(|z| z * Complex64::new(0.5, 0.0));
        let eig = h.symmetric_eigen();
        let mut u = Matrix3::<Complex64>::zeros();
        for k in 0..3 {
            let v = eig.eigenvectors.column(k);
            let phase = Complex64::from_polar(1.0, -eig.eigenvalues[k]);
            u += (v * v.adjoint()).map(|z| z * phase);
        }
        u
    }

    fn contains_phase(lams: &[Complex64; 3], phase: f64, tol: f64) {
        assert!(
            lams.iter()
                .any(|l| (l - Complex64::from_polar(1.0, phase)).norm() < tol),
            "phase {phase} missing from {lams:?}"
        );
    }

    #[test]
    fn distinct_phases() {
        let u = random_unitary(7);
        let lams = unitary_eigenvalues(&u);
        for l in lams {
            assert!((l.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn residuals_of_random_unitaries() {
        for seed in 1..30u64 {
            let u = random_unitary(seed);
            let lams = unitary_eigenvalues(&u);
            // eigenvalue set reproduces the trace and determinant
            let tr: Complex64 = lams.iter().sum();
            let tru = u[(0, 0)] + u[(1, 1)] + u[(2, 2)];
            assert!((tr - tru).norm() < 1e-10, "trace mismatch seed {seed}");
            let det = lams[0] * lams[1] * lams[2];
            let detu = u.determinant();
            assert!((det - detu).norm() < 1e-10, "det mismatch seed {seed}");
            for l in lams {
                assert!((l.norm() - 1.0).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn plus_minus_pair_is_resolved() {
        // cos-degenerate +-phase pair plus a third level
        let u = diag_unitary([0.9, -0.9, 0.1]);
        let lams = unitary_eigenvalues(&u);
        contains_phase(&lams, 0.9, 1e-12);
        contains_phase(&lams, -0.9, 1e-12);
        contains_phase(&lams, 0.1, 1e-12);
    }

    #[test]
    fn near_identity_triple_degeneracy() {
        let u = diag_unitary([1e-13, -1e-13, 0.0]);
        let lams = unitary_eigenvalues(&u);
        for l in lams {
            assert!((l - Complex64::new(1.0, 0.0)).norm() < 1e-11);
            assert!((l.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn branch_point_minus_one() {
        let u = diag_unitary([PI, -PI + 1e-12, 0.4]);
        let lams = unitary_eigenvalues(&u);
        contains_phase(&lams, PI, 1e-10);
        contains_phase(&lams, 0.4, 1e-10);
    }
}
