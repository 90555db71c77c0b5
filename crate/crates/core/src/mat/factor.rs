//! Eigen- and SVD-backed operations: PSD tests, principal square roots,
//! numerical kernels, orthonormalization, and unitary extension of partial
//! isometries.

use super::{re, ComplexMatrix, Scalar, Tolerance};
use crate::error::{DilationError, Result};
use nalgebra::{Complex, DMatrix, DVector};

/// Verdict of a positive-semidefiniteness test.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct PsdReport {
    pub lambda_min: f64,
    pub hermitian_residual: f64,
    pub pass: bool,
}

/// Hermitian eigendecomposition with eigenvalues sorted ascending.
///
/// The input is symmetrized as (M + M*)/2 before decomposition; callers that
/// need a hermiticity precondition should check it first (see [`psd_check`]).
/// Returns `(eigenvalues, eigenvectors)` with eigenvectors as columns.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    m.require_square()?;
    let n = m.rows();
    if n == 0 {
        return Ok((vec![], ComplexMatrix::zeros(0, 0)));
    }
    let sym = (m.inner() + m.inner().adjoint()).map(|z| z * re(0.5));
    let se = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = DMatrix::<Scalar>::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &se.eigenvectors.column(i));
    }
    Ok((values, ComplexMatrix::from_inner(vectors)))
}

/// Positive-semidefiniteness check.
///
/// Preconditions: square, Hermitian within `tol * ||M||` (spectral norm).
/// The verdict is `lambda_min >= -tol`, so it is scaling-monotone: if `M`
/// passes at `tol`, then `c * M` passes at `c * tol`.
pub fn psd_check(m: &ComplexMatrix, tol: Tolerance) -> Result<PsdReport> {
    m.require_square()?;
    let herm_residual = (m - &m.adjoint()).norm_spectral();
    let bound = tol.value() * m.norm_spectral();
    if herm_residual > bound {
        return Err(DilationError::NotHermitian {
            residual: herm_residual,
            bound,
        });
    }
    if m.rows() == 0 {
        return Ok(PsdReport {
            lambda_min: 0.0,
            hermitian_residual: 0.0,
            pass: true,
        });
    }
    let (values, _) = hermitian_eigen(m)?;
    let lambda_min = values[0];
    Ok(PsdReport {
        lambda_min,
        hermitian_residual: herm_residual,
        pass: lambda_min >= -tol.value(),
    })
}

/// Principal square root of a Hermitian PSD matrix.
///
/// Eigenvalues in `[-tol, 0)` are clamped to zero; anything below `-tol`
/// fails with [`DilationError::NotPsd`].
pub fn principal_sqrt_psd(m: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    let report = psd_check(m, tol)?;
    if !report.pass {
        return Err(DilationError::NotPsd {
            lambda_min: report.lambda_min,
        });
    }
    let (values, vectors) = hermitian_eigen(m)?;
    let sqrt_diag = ComplexMatrix::from_real_diagonal(
        &values.iter().map(|&v| v.max(0.0).sqrt()).collect::<Vec<_>>(),
    );
    Ok(&(&vectors * &sqrt_diag) * &vectors.adjoint())
}

/// Defect operator D_T = (I - T*T)^{1/2} of a contraction.
///
/// Fails with the computed norm when `||T|| > 1 + tol`.
pub fn defect(t: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    t.require_square()?;
    let norm = t.norm_spectral();
    if norm > 1.0 + tol.value() {
        return Err(DilationError::NotContraction {
            norm,
            tol: tol.value(),
        });
    }
    let n = t.rows();
    let h = &ComplexMatrix::identity(n) - &(&t.adjoint() * t);
    let (values, vectors) = hermitian_eigen(&h)?;
    let sqrt_diag = ComplexMatrix::from_real_diagonal(
        &values.iter().map(|&v| v.max(0.0).sqrt()).collect::<Vec<_>>(),
    );
    Ok(&(&vectors * &sqrt_diag) * &vectors.adjoint())
}

/// Orthonormal basis of the numerical kernel of `M`.
///
/// Directions with singular value at most `tol * sigma_max` count as kernel;
/// `sigma_max = 0` is treated as a full kernel. The returned matrix has
/// `M.cols()` rows and one column per kernel direction (possibly zero).
pub fn numerical_kernel(m: &ComplexMatrix, tol: Tolerance) -> ComplexMatrix {
    let n = m.cols();
    if n == 0 {
        return ComplexMatrix::zeros(0, 0);
    }
    if m.rows() == 0 {
        return ComplexMatrix::identity(n);
    }
    // Kernel of M equals the small-eigenvalue space of M*M; the squared
    // threshold matches sigma <= tol * sigma_max.
    let gram = &m.adjoint() * m;
    let (values, vectors) = hermitian_eigen(&gram).expect("gram of finite matrix");
    let lambda_max = values.last().copied().unwrap_or(0.0).max(0.0);
    if lambda_max <= 0.0 {
        return ComplexMatrix::identity(n);
    }
    let cutoff = tol.value() * tol.value() * lambda_max;
    let count = values.iter().take_while(|&&v| v <= cutoff).count();
    vectors.sub_matrix(0, n, 0, count)
}

/// Pivoted modified Gram-Schmidt orthonormalization of the column span.
///
/// Columns whose residual falls below `tol * max_initial_column_norm` are
/// dropped, so dependent inputs collapse. Returns an orthonormal basis of
/// the span (possibly with zero columns).
pub fn span_orthonormalize(vectors: &ComplexMatrix, tol: Tolerance) -> ComplexMatrix {
    let n = vectors.rows();
    let cols: Vec<DVector<Scalar>> = (0..vectors.cols())
        .map(|j| vectors.inner().column(j).into_owned())
        .collect();
    let scale = cols.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return ComplexMatrix::zeros(n, 0);
    }
    let basis = mgs_pivoted(cols, tol.value() * scale).0;
    columns_to_matrix(n, &basis)
}

/// Deterministic orthonormal basis of the orthogonal complement of the
/// (assumed orthonormal) columns of `basis` inside the ambient space.
pub fn orthonormal_complement(basis: &ComplexMatrix, ambient: usize) -> ComplexMatrix {
    assert_eq!(basis.rows(), ambient, "basis must live in the ambient space");
    let mut held: Vec<DVector<Scalar>> = (0..basis.cols())
        .map(|j| basis.inner().column(j).into_owned())
        .collect();
    let mut residuals: Vec<DVector<Scalar>> = (0..ambient)
        .map(|i| {
            let mut e = DVector::<Scalar>::zeros(ambient);
            e[i] = re(1.0);
            project_out(&e, &held)
        })
        .collect();
    let needed = ambient - basis.cols().min(ambient);
    let mut out = Vec::with_capacity(needed);
    for _ in 0..needed {
        let (best, norm) = residuals
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("ambient basis exhausted");
        assert!(norm > 1e-8, "complement sweep degenerated");
        let q = project_out(&residuals[best], &held).normalize();
        for r in residuals.iter_mut() {
            let coeff = q.dotc(r);
            *r -= &q * coeff;
        }
        held.push(q.clone());
        out.push(q);
    }
    columns_to_matrix(ambient, &out)
}

/// Unitary extension of the isometric correspondence `domain -> image`.
///
/// Both inputs are `ambient x k` column collections with (numerically) equal
/// Gram matrices; this is the polarization hypothesis that makes the span
/// map isometric. The action on the orthogonal complement is an arbitrary
/// but deterministic completion driven by `seed`, so distinct seeds give
/// distinct unitaries agreeing on the span.
pub fn extend_isometry_to_unitary(
    domain: &ComplexMatrix,
    image: &ComplexMatrix,
    ambient: usize,
    tol: Tolerance,
    seed: u64,
) -> Result<ComplexMatrix> {
    if domain.rows() != ambient || image.rows() != ambient {
        return Err(DilationError::DimensionMismatch {
            context: "domain/image rows must equal ambient dimension",
            got: domain.rows().max(image.rows()),
            expected: ambient,
        });
    }
    if domain.cols() != image.cols() {
        return Err(DilationError::DimensionMismatch {
            context: "domain and image must have equal column counts",
            got: image.cols(),
            expected: domain.cols(),
        });
    }
    let gram_d = &domain.adjoint() * domain;
    let gram_i = &image.adjoint() * image;
    let deviation = (&gram_d - &gram_i).max_abs();
    let bound = tol.value() * (1.0 + gram_d.norm_spectral().max(gram_i.norm_spectral()));
    if deviation > bound {
        return Err(DilationError::GramMismatch { deviation, bound });
    }

    // Paired pivoted MGS: pivot decisions come from the domain side only and
    // are replayed on the image side, so corresponding basis vectors carry
    // the same expansion coefficients.
    let dom_cols: Vec<DVector<Scalar>> = (0..domain.cols())
        .map(|j| domain.inner().column(j).into_owned())
        .collect();
    let img_cols: Vec<DVector<Scalar>> = (0..image.cols())
        .map(|j| image.inner().column(j).into_owned())
        .collect();
    let scale = dom_cols.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let threshold = tol.value() * scale;

    let mut q_dom: Vec<DVector<Scalar>> = Vec::new();
    let mut q_img: Vec<DVector<Scalar>> = Vec::new();
    let mut res_dom = dom_cols;
    let mut res_img = img_cols;
    loop {
        let pick = res_dom
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1));
        let Some((pivot, norm)) = pick else { break };
        if norm <= threshold || norm == 0.0 {
            break;
        }
        let qd = project_out(&res_dom[pivot], &q_dom).normalize();
        let qi_raw = project_out(&res_img[pivot], &q_img);
        if qi_raw.norm() == 0.0 {
            // Gram equality makes this unreachable for tolerable deviations.
            return Err(DilationError::GramMismatch {
                deviation,
                bound: threshold,
            });
        }
        let qi = qi_raw.normalize();
        for r in res_dom.iter_mut() {
            let coeff = qd.dotc(r);
            *r -= &qd * coeff;
        }
        for r in res_img.iter_mut() {
            let coeff = qi.dotc(r);
            *r -= &qi * coeff;
        }
        q_dom.push(qd);
        q_img.push(qi);
    }

    // Complete both orthonormal systems with the same seeded candidate
    // stream; identical inputs therefore extend to the identity.
    let mut stream = SplitMix64::new(seed);
    complete_basis(&mut q_dom, ambient, &mut stream.clone());
    complete_basis(&mut q_img, ambient, &mut stream);

    let qd_full = columns_to_matrix(ambient, &q_dom);
    let qi_full = columns_to_matrix(ambient, &q_img);
    Ok(&qi_full * &qd_full.adjoint())
}

/// Eigenvalues of a general square complex matrix via Schur decomposition.
pub fn general_eigenvalues(m: &ComplexMatrix) -> Result<Vec<Scalar>> {
    m.require_square()?;
    let n = m.rows();
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        return Ok(vec![m.get(0, 0)]);
    }
    let schur = m
        .inner()
        .clone()
        .try_schur(1e-13, 100_000)
        .or_else(|| m.inner().clone().try_schur(1e-9, 100_000))
        .ok_or(DilationError::EigenFailure)?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Matrix exponential (scaling-and-squaring with Padé approximation).
pub fn matrix_exp(m: &ComplexMatrix) -> ComplexMatrix {
    assert!(m.is_square(), "matrix exponential needs a square matrix");
    if m.rows() == 0 {
        return m.clone();
    }
    if m.max_abs() == 0.0 {
        return ComplexMatrix::identity(m.rows());
    }
    ComplexMatrix::from_inner(m.inner().exp())
}

fn columns_to_matrix(rows: usize, cols: &[DVector<Scalar>]) -> ComplexMatrix {
    let mut m = DMatrix::<Scalar>::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, c);
    }
    ComplexMatrix::from_inner(m)
}

/// Project `v` orthogonally out of the span of `basis`, with one
/// reorthogonalization pass.
fn project_out(v: &DVector<Scalar>, basis: &[DVector<Scalar>]) -> DVector<Scalar> {
    let mut r = v.clone();
    for _ in 0..2 {
        for q in basis {
            let coeff = q.dotc(&r);
            r -= q * coeff;
        }
    }
    r
}

/// Pivoted MGS; returns the orthonormal basis and the pivot order.
fn mgs_pivoted(columns: Vec<DVector<Scalar>>, threshold: f64) -> (Vec<DVector<Scalar>>, Vec<usize>) {
    let mut residuals = columns;
    let mut basis = Vec::new();
    let mut pivots = Vec::new();
    loop {
        let pick = residuals
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1));
        let Some((pivot, norm)) = pick else { break };
        if norm <= threshold || norm == 0.0 {
            break;
        }
        let q = project_out(&residuals[pivot], &basis).normalize();
        for r in residuals.iter_mut() {
            let coeff = q.dotc(r);
            *r -= &q * coeff;
        }
        basis.push(q);
        pivots.push(pivot);
    }
    (basis, pivots)
}

fn complete_basis(basis: &mut Vec<DVector<Scalar>>, ambient: usize, stream: &mut SplitMix64) {
    while basis.len() < ambient {
        let candidate = stream.unit_vector(ambient);
        let r = project_out(&candidate, basis);
        if r.norm() > 0.1 {
            basis.push(r.normalize());
        }
    }
}

/// Small deterministic PRNG for seeded basis completions.
#[derive(Clone)]
struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    fn new(seed: u64) -> Self {
        SplitMix64 {
            state: seed.wrapping_add(0x9e3779b97f4a7c15),
        }
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    fn unit_vector(&mut self, dim: usize) -> DVector<Scalar> {
        let mut v = DVector::<Scalar>::zeros(dim);
        for i in 0..dim {
            // Box-Muller; rejects the measure-zero log(0) case.
            let mut u1 = self.uniform();
            if u1 <= f64::MIN_POSITIVE {
                u1 = 0.5;
            }
            let u2 = self.uniform();
            let r = (-2.0 * u1.ln()).sqrt();
            let angle = 2.0 * std::f64::consts::PI * u2;
            v[i] = Complex::new(r * angle.cos(), r * angle.sin());
        }
        let n = v.norm();
        if n == 0.0 {
            v[0] = re(1.0);
            v
        } else {
            v.normalize()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::c;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn psd_diagonal_passes() {
        let m = ComplexMatrix::from_real_diagonal(&[1.0, 0.75]);
        let r = psd_check(&m, tol()).unwrap();
        assert!(r.pass);
        assert!((r.lambda_min - 0.75).abs() < 1e-12);
    }

    #[test]
    fn psd_indefinite_fails_with_minus_one() {
        // Eigenvalues of [[1,2],[2,1]] are 3 and -1.
        let m = ComplexMatrix::from_real_rows(2, 2, &[1.0, 2.0, 2.0, 1.0]).unwrap();
        let r = psd_check(&m, tol()).unwrap();
        assert!(!r.pass);
        assert!((r.lambda_min + 1.0).abs() < 1e-12);
    }

    #[test]
    fn psd_zero_matrix_passes() {
        let m = ComplexMatrix::zeros(3, 3);
        let r = psd_check(&m, tol()).unwrap();
        assert!(r.pass);
        assert_eq!(r.lambda_min, 0.0);
    }

    #[test]
    fn psd_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            psd_check(&m, tol()),
            Err(DilationError::NotHermitian { .. })
        ));
    }

    #[test]
    fn psd_rejects_non_square() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            psd_check(&m, tol()),
            Err(DilationError::NotSquare { .. })
        ));
    }

    #[test]
    fn defect_scalar_half() {
        let t = ComplexMatrix::from_real_rows(1, 1, &[0.5]).unwrap();
        let d = defect(&t, tol()).unwrap();
        assert!((d.get(0, 0).re - 0.75f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn defect_of_isometry_is_zero() {
        let t = ComplexMatrix::identity(3);
        let d = defect(&t, tol()).unwrap();
        assert!(d.norm_spectral() < 1e-12);
    }

    #[test]
    fn defect_nilpotent_example() {
        // T*T = diag(0, 0.81), so D_T = diag(1, sqrt(0.19)).
        let t = ComplexMatrix::from_real_rows(2, 2, &[0.0, 0.9, 0.0, 0.0]).unwrap();
        let d = defect(&t, tol()).unwrap();
        assert!((d.get(0, 0).re - 1.0).abs() < 1e-12);
        assert!((d.get(1, 1).re - 0.19f64.sqrt()).abs() < 1e-12);
        assert!(d.get(0, 1).norm() < 1e-12);
    }

    #[test]
    fn defect_rejects_expansion() {
        let t = ComplexMatrix::from_real_rows(1, 1, &[1.5]).unwrap();
        assert!(matches!(
            defect(&t, tol()),
            Err(DilationError::NotContraction { .. })
        ));
    }

    #[test]
    fn kernel_of_zero_is_full() {
        let m = ComplexMatrix::zeros(2, 2);
        let k = numerical_kernel(&m, Tolerance::rank());
        assert_eq!(k.cols(), 2);
    }

    #[test]
    fn kernel_of_rotation_minus_identity_is_trivial() {
        let rot = ComplexMatrix::from_real_rows(2, 2, &[0.0, -1.0, 1.0, 0.0]).unwrap();
        let m = &rot - &ComplexMatrix::identity(2);
        let k = numerical_kernel(&m, Tolerance::rank());
        assert_eq!(k.cols(), 0);
    }

    #[test]
    fn kernel_of_diag_zero_three() {
        let m = ComplexMatrix::from_real_diagonal(&[0.0, 3.0]);
        let k = numerical_kernel(&m, Tolerance::rank());
        assert_eq!(k.cols(), 1);
        assert!((k.get(0, 0).norm() - 1.0).abs() < 1e-12);
        assert!(k.get(1, 0).norm() < 1e-12);
    }

    #[test]
    fn orthonormalize_collapses_dependent_columns() {
        let v = ComplexMatrix::from_real_rows(2, 2, &[1.0, 2.0, 0.0, 0.0]).unwrap();
        let q = span_orthonormalize(&v, tol());
        assert_eq!(q.cols(), 1);
        assert!((q.column(0).norm_fro() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn orthonormalize_keeps_plane() {
        let v = ComplexMatrix::from_real_rows(2, 2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        let q = span_orthonormalize(&v, tol());
        assert_eq!(q.cols(), 2);
        let gram = &q.adjoint() * &q;
        assert!((&gram - &ComplexMatrix::identity(2)).norm_spectral() < 1e-12);
    }

    #[test]
    fn orthonormalize_empty_input() {
        let v = ComplexMatrix::zeros(3, 0);
        let q = span_orthonormalize(&v, tol());
        assert_eq!(q.cols(), 0);
    }

    #[test]
    fn orthonormalize_is_idempotent_on_its_output() {
        let v =
            ComplexMatrix::from_real_rows(3, 2, &[1.0, 1.0, 1.0, 0.0, 0.0, 2.0]).unwrap();
        let q1 = span_orthonormalize(&v, tol());
        let q2 = span_orthonormalize(&q1, tol());
        // Same subspace: projector distance vanishes.
        let p1 = &q1 * &q1.adjoint();
        let p2 = &q2 * &q2.adjoint();
        assert!((&p1 - &p2).norm_spectral() < 1e-10);
    }

    #[test]
    fn extend_maps_basis_vector() {
        let d = ComplexMatrix::basis_column(2, 0);
        let m = ComplexMatrix::basis_column(2, 1);
        let g = extend_isometry_to_unitary(&d, &m, 2, tol(), 0).unwrap();
        let gd = &g * &d;
        assert!((&gd - &m).norm_spectral() < 1e-12);
        let id = ComplexMatrix::identity(2);
        assert!((&(&g.adjoint() * &g) - &id).norm_spectral() < 1e-12);
        assert!((&(&g * &g.adjoint()) - &id).norm_spectral() < 1e-12);
    }

    #[test]
    fn extend_identity_correspondence_is_identity() {
        let d = ComplexMatrix::basis_column(3, 0);
        let g = extend_isometry_to_unitary(&d, &d, 3, tol(), 7).unwrap();
        assert!((&g - &ComplexMatrix::identity(3)).norm_spectral() < 1e-12);
    }

    #[test]
    fn extend_unit_norm_vectors_in_dim_three() {
        let s = 0.5f64.sqrt();
        let d = ComplexMatrix::from_real_rows(3, 1, &[s, s, 0.0]).unwrap();
        let m = ComplexMatrix::from_real_rows(3, 1, &[0.0, 0.0, 1.0]).unwrap();
        let g = extend_isometry_to_unitary(&d, &m, 3, tol(), 0).unwrap();
        assert!((&(&g * &d) - &m).norm_spectral() < 1e-10);
    }

    #[test]
    fn extend_rejects_gram_mismatch() {
        let d = ComplexMatrix::basis_column(2, 0);
        let m = ComplexMatrix::basis_column(2, 1).scale_re(2.0);
        assert!(matches!(
            extend_isometry_to_unitary(&d, &m, 2, tol(), 0),
            Err(DilationError::GramMismatch { .. })
        ));
    }

    #[test]
    fn extend_seeds_agree_on_span_differ_off_it() {
        let d = ComplexMatrix::basis_column(3, 0);
        let m = ComplexMatrix::basis_column(3, 2);
        let g0 = extend_isometry_to_unitary(&d, &m, 3, tol(), 0).unwrap();
        let g1 = extend_isometry_to_unitary(&d, &m, 3, tol(), 1).unwrap();
        assert!((&(&g0 * &d) - &m).norm_spectral() < 1e-12);
        assert!((&(&g1 * &d) - &m).norm_spectral() < 1e-12);
        assert!((&g0 - &g1).norm_spectral() > 1e-3);
    }

    #[test]
    fn general_eigenvalues_of_triangular() {
        let m = ComplexMatrix::from_rows_vec(
            2,
            2,
            vec![c(0.3, 0.1), c(5.0, 0.0), c(0.0, 0.0), c(-0.7, 0.0)],
        )
        .unwrap();
        let mut eigs = general_eigenvalues(&m).unwrap();
        eigs.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((eigs[0] - c(-0.7, 0.0)).norm() < 1e-10);
        assert!((eigs[1] - c(0.3, 0.1)).norm() < 1e-10);
    }

    #[test]
    fn matrix_exp_of_zero_is_identity() {
        let m = ComplexMatrix::zeros(3, 3);
        assert_eq!(matrix_exp(&m), ComplexMatrix::identity(3));
    }

    #[test]
    fn complement_completes_dimension() {
        let q = ComplexMatrix::basis_column(3, 1);
        let comp = orthonormal_complement(&q, 3);
        assert_eq!(comp.cols(), 2);
        let full = ComplexMatrix::hstack(&[&q, &comp]);
        let gram = &full.adjoint() * &full;
        assert!((&gram - &ComplexMatrix::identity(3)).norm_spectral() < 1e-12);
    }
}
