//! Cayley-type transforms between semigroup generators and cogenerators,
//! the phi_s / e_{s,r} / e_s functional calculus, and eigenvalue-1
//! diagnostics.
//!
//! A dissipative matrix A (meaning A + A* is negative semidefinite)
//! generates the contraction semigroup s -> exp(sA). Its cogenerator is the
//! Cayley transform T = (A + I)(A - I)^{-1}, a contraction that never has 1
//! as an eigenvalue; the transform is involutive, and the semigroup is
//! recovered through e_s(T) = exp(s (T + I)(T - I)^{-1}).

use crate::error::{DilationError, Result};
use crate::mat::{
    general_eigenvalues, matrix_exp, psd_check, ComplexMatrix, Scalar, Tolerance,
};
use crate::report::{Check, Report};
use serde::{Deserialize, Serialize};

/// Commutation slack for generator pairs, relative to the product of norms.
const COMMUTATION_REL_TOL: f64 = 1e-10;

/// A pair of commuting dissipative generators acting on the same space.
#[derive(Debug, Clone)]
pub struct GeneratorPair {
    a1: ComplexMatrix,
    a2: ComplexMatrix,
}

impl GeneratorPair {
    /// Validates commutation and dissipativity of both generators.
    pub fn new(a1: ComplexMatrix, a2: ComplexMatrix) -> Result<Self> {
        a1.require_square()?;
        a2.require_square()?;
        if a1.rows() != a2.rows() {
            return Err(DilationError::DimensionMismatch {
                context: "generators must act on the same space",
                got: a2.rows(),
                expected: a1.rows(),
            });
        }
        let scale = a1.norm_spectral() * a2.norm_spectral() + 1.0;
        let residual = a1.commutator_norm(&a2);
        if residual > COMMUTATION_REL_TOL * scale {
            return Err(DilationError::NotCommuting {
                residual,
                bound: COMMUTATION_REL_TOL * scale,
            });
        }
        require_dissipative(&a1)?;
        require_dissipative(&a2)?;
        Ok(GeneratorPair { a1, a2 })
    }

    pub fn a1(&self) -> &ComplexMatrix {
        &self.a1
    }

    pub fn a2(&self) -> &ComplexMatrix {
        &self.a2
    }

    pub fn dim(&self) -> usize {
        self.a1.rows()
    }

    /// Semigroup values T_1(s) = exp(s A_1), T_2(t) = exp(t A_2).
    pub fn semigroup_at(&self, s: f64, t: f64) -> (ComplexMatrix, ComplexMatrix) {
        (
            matrix_exp(&self.a1.scale_re(s)),
            matrix_exp(&self.a2.scale_re(t)),
        )
    }
}

fn require_dissipative(a: &ComplexMatrix) -> Result<()> {
    let sym = &(-&(a + &a.adjoint())).scale_re(1.0);
    let report = psd_check(sym, Tolerance::default())?;
    if !report.pass {
        // -(A + A*) fails PSD, so A + A* has the positive eigenvalue below.
        return Err(DilationError::NotDissipative {
            max_eigenvalue: -report.lambda_min,
        });
    }
    Ok(())
}

/// Where a cogenerator came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    FromGenerator,
    Supplied,
}

/// A contraction with a certified spectral gap away from 1.
#[derive(Debug, Clone)]
pub struct Cogenerator {
    t: ComplexMatrix,
    provenance: Provenance,
    gap: f64,
}

impl Cogenerator {
    /// Wrap a supplied contraction, checking the norm bound and the
    /// eigenvalue-1 gap.
    pub fn new(t: ComplexMatrix, gap_tol: Tolerance) -> Result<Self> {
        Self::with_provenance(t, gap_tol, Provenance::Supplied)
    }

    fn with_provenance(
        t: ComplexMatrix,
        gap_tol: Tolerance,
        provenance: Provenance,
    ) -> Result<Self> {
        t.require_square()?;
        let norm = t.norm_spectral();
        if norm > 1.0 + 1e-9 {
            return Err(DilationError::NotContraction { norm, tol: 1e-9 });
        }
        let gap = eigenvalue_one_check(&t, gap_tol)?;
        if !gap.pass {
            return Err(DilationError::EigenvalueOne {
                distance: gap.distance,
                gap: gap_tol.value(),
            });
        }
        Ok(Cogenerator {
            t,
            provenance,
            gap: gap.distance,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.t
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Certified distance of the spectrum to 1.
    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn dim(&self) -> usize {
        self.t.rows()
    }
}

/// Cayley transform A -> (A + I)(A - I)^{-1} of a dissipative generator.
///
/// The result is the cogenerator of the semigroup exp(sA): a contraction
/// without eigenvalue 1, and the transform inverts itself (the same formula
/// maps the cogenerator back to A).
pub fn cogenerator_from_generator(a: &ComplexMatrix) -> Result<Cogenerator> {
    require_dissipative(a)?;
    let t = cayley_transform(a)?;
    Cogenerator::with_provenance(t, Tolerance::default(), Provenance::FromGenerator)
}

/// Inverse direction of the Cayley correspondence (same rational map).
pub fn generator_from_cogenerator(t: &Cogenerator) -> Result<ComplexMatrix> {
    cayley_transform(t.matrix())
}

/// The rational map X -> (X + I)(X - I)^{-1}.
///
/// Sends dissipative generators to cogenerators and back; also used to
/// recover the generator (the "Cayley logarithm") of a contraction with a
/// spectral gap away from 1.
pub fn cayley_transform(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    x.require_square()?;
    let id = ComplexMatrix::identity(x.rows());
    let (inv, _) = (x - &id).inverse_with_condition()?;
    Ok(&(x + &id) * &inv)
}

/// phi_s(X) = (X - (1-s)I)(X - (1+s)I)^{-1}, the scalar map
/// (x - 1 + s)/(x - 1 - s) in matrix form.
///
/// Returns the value together with the condition number of the resolvent
/// factor X - (1+s)I.
pub fn phi_s_apply(x: &ComplexMatrix, s: f64) -> Result<(ComplexMatrix, f64)> {
    if !(s > 0.0) {
        return Err(DilationError::InvalidParameter {
            context: format!("phi_s needs s > 0, got {s}"),
        });
    }
    x.require_square()?;
    let id = ComplexMatrix::identity(x.rows());
    let numerator = x - &id.scale_re(1.0 - s);
    let denominator = x - &id.scale_re(1.0 + s);
    let (inv, cond) = denominator.inverse_with_condition()?;
    Ok((&numerator * &inv, cond))
}

/// e_{s,r}(T) = exp(s (rT + I)(rT - I)^{-1}); contractive for every
/// contraction T, r in (0,1), s >= 0 by von Neumann's inequality.
pub fn e_sr_apply(t: &ComplexMatrix, s: f64, r: f64) -> Result<ComplexMatrix> {
    if !(0.0..1.0).contains(&r) || r <= 0.0 {
        return Err(DilationError::InvalidParameter {
            context: format!("e_sr needs r in (0,1), got {r}"),
        });
    }
    if s < 0.0 {
        return Err(DilationError::InvalidParameter {
            context: format!("e_sr needs s >= 0, got {s}"),
        });
    }
    t.require_square()?;
    let norm = t.norm_spectral();
    if norm > 1.0 + Tolerance::default().value() {
        return Err(DilationError::NotContraction { norm, tol: 1e-9 });
    }
    if s == 0.0 {
        return Ok(ComplexMatrix::identity(t.rows()));
    }
    let rt = t.scale_re(r);
    let log = cayley_transform(&rt)?;
    Ok(matrix_exp(&log.scale_re(s)))
}

/// e_s(T) = exp(s (T + I)(T - I)^{-1}) for a cogenerator T.
///
/// Satisfies the semigroup law in s, and recovers exp(sA) exactly when T
/// came from the generator A.
pub fn e_s_apply(t: &Cogenerator, s: f64) -> Result<ComplexMatrix> {
    if s < 0.0 {
        return Err(DilationError::InvalidParameter {
            context: format!("e_s needs s >= 0, got {s}"),
        });
    }
    if s == 0.0 {
        return Ok(ComplexMatrix::identity(t.dim()));
    }
    let log = cayley_transform(t.matrix())?;
    Ok(matrix_exp(&log.scale_re(s)))
}

/// Outcome of an eigenvalue-1 proximity test.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EigenGap {
    /// min |lambda - 1| over the spectrum (infinite for empty matrices).
    pub distance: f64,
    pub pass: bool,
}

/// Distance of the spectrum to 1, with verdict `distance > gap_tol`.
pub fn eigenvalue_one_check(x: &ComplexMatrix, gap_tol: Tolerance) -> Result<EigenGap> {
    let eigs = general_eigenvalues(x)?;
    let one = Scalar::new(1.0, 0.0);
    let distance = eigs
        .iter()
        .map(|l| (l - one).norm())
        .fold(f64::INFINITY, f64::min);
    Ok(EigenGap {
        distance,
        pass: distance > gap_tol.value(),
    })
}

/// Convergence check for T = lim_{s->0+} phi_s(exp(sA)).
///
/// Reports e(s) = ||phi_s(exp(sA)) - T|| for each sample and demands the
/// errors decrease strictly, with the final error below 1e-3 (1 + ||A||^2).
pub fn cogenerator_limit_check(a: &ComplexMatrix, s_values: &[f64]) -> Result<Report> {
    if s_values.is_empty() {
        return Err(DilationError::EmptyInput {
            context: "cogenerator_limit_check needs at least one s value",
        });
    }
    for w in s_values.windows(2) {
        if w[1] >= w[0] {
            return Err(DilationError::InvalidParameter {
                context: format!("s values must be strictly decreasing, got {} then {}", w[0], w[1]),
            });
        }
    }
    if *s_values.last().unwrap() < 1e-8 {
        return Err(DilationError::InvalidParameter {
            context: "s values must stay >= 1e-8".into(),
        });
    }
    let t = cogenerator_from_generator(a)?;
    let mut report = Report::new("cogenerator_limit");
    let mut errors = Vec::with_capacity(s_values.len());
    for &s in s_values {
        let semigroup_value = matrix_exp(&a.scale_re(s));
        let (phi, _cond) = phi_s_apply(&semigroup_value, s)?;
        let err = (&phi - t.matrix()).norm_spectral();
        report.push(Check::residual(format!("phi_limit_error(s={s})"), err, f64::INFINITY));
        errors.push(err);
    }
    // A sequence that has already reached roundoff noise counts as
    // converged; strict decrease is only meaningful above the floor.
    let noise_floor = 1e-13 * (1.0 + a.norm_spectral());
    for (k, w) in errors.windows(2).enumerate() {
        let decreased = w[1] < w[0] || w[1] <= noise_floor;
        report.push(Check {
            name: format!("phi_limit_decreasing({}->{})", s_values[k], s_values[k + 1]),
            value: w[1] - w[0],
            threshold: 0.0,
            kind: crate::report::CheckKind::ResidualAtMost,
            pass: decreased,
        });
    }
    let norm_a = a.norm_spectral();
    let final_bound = 1e-3 * (1.0 + norm_a * norm_a);
    report.push(Check::residual(
        "phi_limit_final",
        *errors.last().unwrap(),
        final_bound,
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{c, re};

    fn scalar(x: f64) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(1, 1, &[x]).unwrap()
    }

    #[test]
    fn cayley_scalar_examples() {
        // (-1 + 1)/(-1 - 1) = 0 and (-2 + 1)/(-2 - 1) = 1/3.
        let t = cogenerator_from_generator(&scalar(-1.0)).unwrap();
        assert!(t.matrix().get(0, 0).norm() < 1e-14);
        let t = cogenerator_from_generator(&scalar(-2.0)).unwrap();
        assert!((t.matrix().get(0, 0) - re(1.0 / 3.0)).norm() < 1e-14);
    }

    #[test]
    fn cayley_of_zero_generator_is_minus_identity() {
        let t = cogenerator_from_generator(&ComplexMatrix::zeros(2, 2)).unwrap();
        let expect = ComplexMatrix::identity(2).scale_re(-1.0);
        assert!((t.matrix() - &expect).norm_spectral() < 1e-14);
        assert!(t.gap() > 1.9);
    }

    #[test]
    fn cayley_round_trip() {
        let a = ComplexMatrix::from_rows_vec(
            2,
            2,
            vec![c(-1.0, 0.3), c(0.2, 0.1), c(0.0, 0.0), c(-2.0, -0.4)],
        )
        .unwrap();
        let t = cogenerator_from_generator(&a).unwrap();
        let back = generator_from_cogenerator(&t).unwrap();
        assert!((&back - &a).norm_spectral() < 1e-10);
    }

    #[test]
    fn rejects_non_dissipative() {
        let err = cogenerator_from_generator(&scalar(0.5));
        assert!(matches!(err, Err(DilationError::NotDissipative { .. })));
    }

    #[test]
    fn phi_scalar_fixture() {
        // phi_0.01(e^{-0.01}) = 0.00004983.../-0.01995017... ~ -0.002498.
        let x = scalar((-0.01f64).exp());
        let (phi, cond) = phi_s_apply(&x, 0.01).unwrap();
        assert!((phi.get(0, 0).re - (-0.002498)).abs() < 1e-5);
        assert!(cond.is_finite());
    }

    #[test]
    fn phi_zero_matrix() {
        let (phi, _) = phi_s_apply(&scalar(0.0), 1.0).unwrap();
        assert!(phi.get(0, 0).norm() < 1e-14);
    }

    #[test]
    fn phi_identity_gives_minus_identity() {
        let x = ComplexMatrix::identity(2);
        let (phi, _) = phi_s_apply(&x, 0.5).unwrap();
        let expect = ComplexMatrix::identity(2).scale_re(-1.0);
        assert!((&phi - &expect).norm_spectral() < 1e-12);
    }

    #[test]
    fn e_sr_scalar_examples() {
        // T = 0: exp(s * 1/(-1)) = e^{-s}.
        let v = e_sr_apply(&scalar(0.0), 2.0, 0.5).unwrap();
        assert!((v.get(0, 0).re - (-2.0f64).exp()).abs() < 1e-12);
        // s = 0 gives the identity.
        let v = e_sr_apply(&scalar(0.7), 0.0, 0.9).unwrap();
        assert_eq!(v, ComplexMatrix::identity(1));
        // T = 1, r = 0.5: exp(1.5 / -0.5) = e^{-3}.
        let v = e_sr_apply(&scalar(1.0), 1.0, 0.5).unwrap();
        assert!((v.get(0, 0).re - (-3.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn e_s_scalar_and_round_trip() {
        let t = Cogenerator::new(scalar(0.0), Tolerance::default()).unwrap();
        let v = e_s_apply(&t, 2.0).unwrap();
        assert!((v.get(0, 0).re - (-2.0f64).exp()).abs() < 1e-12);

        let t = cogenerator_from_generator(&scalar(-2.0)).unwrap();
        let v = e_s_apply(&t, 1.0).unwrap();
        assert!((v.get(0, 0).re - (-2.0f64).exp()).abs() < 1e-12);

        let v0 = e_s_apply(&t, 0.0).unwrap();
        assert_eq!(v0, ComplexMatrix::identity(1));
    }

    #[test]
    fn eigenvalue_one_examples() {
        let gap = eigenvalue_one_check(&ComplexMatrix::identity(2), Tolerance::default()).unwrap();
        assert!(!gap.pass);
        assert!(gap.distance < 1e-12);

        let gap = eigenvalue_one_check(&scalar(0.0), Tolerance::default()).unwrap();
        assert!(gap.pass);
        assert!((gap.distance - 1.0).abs() < 1e-12);

        let near = ComplexMatrix::from_real_diagonal(&[1.0 + 1e-12, 0.3]);
        let gap = eigenvalue_one_check(&near, Tolerance::new(1e-6).unwrap()).unwrap();
        assert!(!gap.pass);
        assert!(gap.distance < 1e-9);
    }

    #[test]
    fn cogenerator_rejects_eigenvalue_one() {
        let err = Cogenerator::new(ComplexMatrix::identity(2), Tolerance::default());
        assert!(matches!(err, Err(DilationError::EigenvalueOne { .. })));
    }

    #[test]
    fn limit_check_scalar_fixture() {
        let report = cogenerator_limit_check(&scalar(-1.0), &[0.1, 0.01, 0.001]).unwrap();
        assert!(report.pass(), "{report:?}");
        let e1 = report.find("phi_limit_error(s=0.1)").unwrap().value;
        let e2 = report.find("phi_limit_error(s=0.01)").unwrap().value;
        let e3 = report.find("phi_limit_error(s=0.001)").unwrap().value;
        assert!((e1 - 0.0244).abs() < 0.1 * 0.0244 + 5e-4, "e1 = {e1}");
        assert!((e2 - 0.0025).abs() < 0.1 * 0.0025, "e2 = {e2}");
        assert!((e3 - 0.00025).abs() < 0.1 * 0.00025, "e3 = {e3}");
    }

    #[test]
    fn limit_check_identity_semigroup_is_exact() {
        let report = cogenerator_limit_check(&ComplexMatrix::zeros(2, 2), &[0.1, 0.01]).unwrap();
        for s in ["0.1", "0.01"] {
            let e = report.find(&format!("phi_limit_error(s={s})")).unwrap().value;
            assert!(e < 1e-12, "error at s={s} should vanish, got {e}");
        }
        assert!(report.pass(), "{report:?}");
    }

    #[test]
    fn limit_check_diagonal_case() {
        let a = ComplexMatrix::from_real_diagonal(&[-1.0, -2.0]);
        let report = cogenerator_limit_check(&a, &[0.1, 0.01, 0.001]).unwrap();
        assert!(report.pass(), "{report:?}");
    }

    #[test]
    fn generator_pair_requires_commutation() {
        let a1 = ComplexMatrix::from_real_rows(2, 2, &[-1.0, 1.0, 0.0, -1.0]).unwrap();
        let a2 = ComplexMatrix::from_real_rows(2, 2, &[-1.0, 0.0, 1.0, -1.0]).unwrap();
        assert!(matches!(
            GeneratorPair::new(a1, a2),
            Err(DilationError::NotCommuting { .. })
        ));
    }
}
