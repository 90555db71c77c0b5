//! Truncated isometric dilations of contractions and commuting pairs:
//! the Schaffer single-operator construction, an Ando-type commuting pair
//! construction, the fixed-vector-removal pipeline with block-structure
//! verification, and the continuous two-parameter pipeline built on the
//! cogenerator correspondence.
//!
//! Truncation policy: the final defect block(s) act as a sink, so isometry
//! and commutation are asserted on interior projections only, while power
//! compressions to H are exact at every order (the constructions are block
//! lower-triangular with the original operators in the H corner).

use crate::cogen::{
    cayley_transform, cogenerator_from_generator, eigenvalue_one_check, GeneratorPair,
};
use crate::error::{DilationError, Result};
use crate::mat::{
    defect, extend_isometry_to_unitary, matrix_exp, numerical_kernel, orthonormal_complement,
    span_orthonormalize, ComplexMatrix, SpaceDecomposition, Tolerance,
};
use crate::report::{Check, Report};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Residual tolerance for the vanishing blocks of the fixed-vector frame.
pub const BLOCK_TOL: f64 = 1e-8;
/// Truncation-honest isometry tolerance on the interior projection.
pub const ISOMETRY_TOL: f64 = 1e-9;
/// Commutation tolerance on the interior projection.
pub const COMMUTATION_TOL: f64 = 1e-8;
/// Joint power-compression tolerance up to the truncation depth.
pub const COMPRESSION_TOL: f64 = 1e-9;
/// Reduction must preserve compressions to this accuracy.
pub const PRESERVATION_TOL: f64 = 1e-10;
/// Default sample grid for continuous-pipeline checks.
pub const DEFAULT_SAMPLE_GRID: [f64; 5] = [0.0, 0.25, 0.5, 1.0, 2.0];

const COMMUTATION_INPUT_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BundleKind {
    Schaffer,
    Ando,
    Reduced,
    Continuous,
}

impl BundleKind {
    pub fn name(self) -> &'static str {
        match self {
            BundleKind::Schaffer => "schaffer",
            BundleKind::Ando => "ando",
            BundleKind::Reduced => "reduced",
            BundleKind::Continuous => "continuous",
        }
    }
}

/// Extra state carried by continuous-pipeline bundles: the original
/// generators and the Cayley logarithms of the reduced dilation operators,
/// so the bundle can evaluate both semigroups at any parameter.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContinuousData {
    pub a1: ComplexMatrix,
    pub a2: ComplexMatrix,
    pub log_u1: ComplexMatrix,
    pub log_u2: ComplexMatrix,
}

/// An ambient-space decomposition (H first), the dilation operators on it,
/// the truncation depth, and measured residuals.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DilationBundle {
    pub kind: BundleKind,
    pub decomposition: SpaceDecomposition,
    pub v1: ComplexMatrix,
    pub v2: Option<ComplexMatrix>,
    pub t1: ComplexMatrix,
    pub t2: Option<ComplexMatrix>,
    pub depth: usize,
    /// Trailing blocks that form the truncation sink.
    pub sink_blocks: usize,
    pub residuals: BTreeMap<String, f64>,
    pub continuous: Option<ContinuousData>,
}

impl DilationBundle {
    pub fn h_dim(&self) -> usize {
        self.decomposition.h_dim()
    }

    pub fn total_dim(&self) -> usize {
        self.decomposition.total_dim()
    }

    /// P_H V1^m V2^n |_H (V2 powers ignored when absent).
    pub fn compression(&self, m: usize, n: usize) -> ComplexMatrix {
        let mut x = self.decomposition.embed_h();
        if let Some(v2) = &self.v2 {
            for _ in 0..n {
                x = v2 * &x;
            }
        }
        for _ in 0..m {
            x = &self.v1 * &x;
        }
        x.sub_matrix(0, self.h_dim(), 0, self.h_dim())
    }

    /// Max over 1 <= m+n <= depth of the joint compression residual
    /// against T1^m T2^n.
    pub fn compression_residual_max(&self) -> f64 {
        let mut worst: f64 = 0.0;
        let t2 = self
            .t2
            .clone()
            .unwrap_or_else(|| ComplexMatrix::identity(self.h_dim()));
        for total in 1..=self.depth {
            for m in 0..=total {
                let n = total - m;
                if self.v2.is_none() && n > 0 {
                    continue;
                }
                let expect = &self.t1.pow(m) * &t2.pow(n);
                let got = self.compression(m, n);
                worst = worst.max((&got - &expect).norm_spectral());
            }
        }
        worst
    }

    /// Projector off the sink blocks.
    pub fn interior_projector(&self) -> ComplexMatrix {
        self.decomposition.interior_projector(self.sink_blocks)
    }

    /// ||(V*V - I) P_interior|| for the given operator.
    pub fn isometry_defect(&self, op: &ComplexMatrix) -> f64 {
        let id = ComplexMatrix::identity(self.total_dim());
        let gram = &op.adjoint() * op;
        (&(&gram - &id) * &self.interior_projector()).norm_spectral()
    }

    /// ||(V1 V2 - V2 V1) P_interior||; zero when V2 is absent.
    pub fn commutation_residual(&self) -> f64 {
        match &self.v2 {
            None => 0.0,
            Some(v2) => {
                let diff = &(&self.v1 * v2) - &(v2 * &self.v1);
                (&diff * &self.interior_projector()).norm_spectral()
            }
        }
    }

    /// Check the bundle contract: truncation-honest isometry, interior
    /// commutation, and exact joint compressions up to depth.
    pub fn validate(&self) -> Report {
        let mut report = Report::new(format!("bundle:{}", self.kind.name()));
        if matches!(self.kind, BundleKind::Schaffer | BundleKind::Ando) {
            report.push(Check::residual(
                "isometry_defect_v1",
                self.isometry_defect(&self.v1),
                ISOMETRY_TOL,
            ));
            if let Some(v2) = &self.v2 {
                report.push(Check::residual(
                    "isometry_defect_v2",
                    self.isometry_defect(v2),
                    ISOMETRY_TOL,
                ));
                report.push(Check::residual(
                    "commutation_interior",
                    self.commutation_residual(),
                    COMMUTATION_TOL,
                ));
            }
        }
        report.push(Check::residual(
            "joint_compression_max",
            self.compression_residual_max(),
            COMPRESSION_TOL,
        ));
        report
    }

    fn continuous_data(&self) -> Result<&ContinuousData> {
        self.continuous
            .as_ref()
            .ok_or(DilationError::WrongBundleKind {
                got: self.kind.name(),
                expected: "continuous",
            })
    }

    /// V_1(s) = e_s(U_1) for a continuous bundle.
    pub fn v1_at(&self, s: f64) -> Result<ComplexMatrix> {
        let data = self.continuous_data()?;
        Ok(evaluate_semigroup(&data.log_u1, s))
    }

    /// V_2(t) = e_t(U_2) for a continuous bundle.
    pub fn v2_at(&self, t: f64) -> Result<ComplexMatrix> {
        let data = self.continuous_data()?;
        Ok(evaluate_semigroup(&data.log_u2, t))
    }

    /// Original semigroup T_1(s) = exp(s A_1).
    pub fn t1_at(&self, s: f64) -> Result<ComplexMatrix> {
        let data = self.continuous_data()?;
        Ok(evaluate_semigroup(&data.a1, s))
    }

    /// Original semigroup T_2(t) = exp(t A_2).
    pub fn t2_at(&self, t: f64) -> Result<ComplexMatrix> {
        let data = self.continuous_data()?;
        Ok(evaluate_semigroup(&data.a2, t))
    }
}

fn evaluate_semigroup(log: &ComplexMatrix, s: f64) -> ComplexMatrix {
    if s == 0.0 {
        ComplexMatrix::identity(log.rows())
    } else {
        matrix_exp(&log.scale_re(s))
    }
}

fn require_contraction(t: &ComplexMatrix, tol: Tolerance) -> Result<()> {
    let norm = t.norm_spectral();
    if norm > 1.0 + tol.value() {
        return Err(DilationError::NotContraction {
            norm,
            tol: tol.value(),
        });
    }
    Ok(())
}

/// Truncated Schaffer dilation of a single contraction.
///
/// K = H + H^N with V(h, x_1, .., x_N) = (Th, D_T h, x_1, .., x_{N-1});
/// the last block is a sink. The compression identity P_H V^n |_H = T^n is
/// exact at every order because V is block lower-triangular with T in the
/// H corner.
pub fn schaffer_truncated(t: &ComplexMatrix, depth: usize) -> Result<DilationBundle> {
    t.require_square()?;
    if depth < 1 {
        return Err(DilationError::InvalidParameter {
            context: format!("schaffer depth must be >= 1, got {depth}"),
        });
    }
    let tol = Tolerance::default();
    require_contraction(t, tol)?;
    let d = defect(t, tol)?;
    let h = t.rows();
    let total = h * (depth + 1);
    let mut v = ComplexMatrix::zeros(total, total);
    v.set_block(0, 0, t);
    v.set_block(h, 0, &d);
    for k in 1..depth {
        v.set_block((k + 1) * h, k * h, &ComplexMatrix::identity(h));
    }
    let decomposition = SpaceDecomposition::h_with_blocks(h, "D", depth, h);
    let mut bundle = DilationBundle {
        kind: BundleKind::Schaffer,
        decomposition,
        v1: v,
        v2: None,
        t1: t.clone(),
        t2: None,
        depth,
        sink_blocks: 1,
        residuals: BTreeMap::new(),
        continuous: None,
    };
    bundle.residuals.insert(
        "isometry_defect_v1".into(),
        bundle.isometry_defect(&bundle.v1),
    );
    bundle
        .residuals
        .insert("compression_max".into(), bundle.compression_residual_max());
    Ok(bundle)
}

/// Truncated Ando-type commuting isometric dilation of a commuting pair.
///
/// For distinct inputs the construction embeds both Schaffer chains into
/// slots of H^2 and corrects the pair with a threaded unitary G on
/// consecutive slot pairs: G is the unitary extension of
/// (D_1 T_2 h, 0, 0, D_2 h) -> (0, D_2 T_1 h, D_1 h, 0), whose Gram
/// hypothesis is exactly the commutation of T_1 and T_2. With
/// V_1 = G_thread V_1_plain and V_2 = V_2_plain G_thread*, the exchange
/// identity V_1 V_2 = V_2 V_1 holds on the whole truncated space, and all
/// joint compressions are exact.
///
/// Equal inputs take the shared Schaffer chain (V_1 = V_2), the minimal
/// commuting dilation for that degenerate case.
pub fn ando_truncated(
    t1: &ComplexMatrix,
    t2: &ComplexMatrix,
    depth: usize,
) -> Result<DilationBundle> {
    t1.require_square()?;
    t2.require_square()?;
    if t1.rows() != t2.rows() {
        return Err(DilationError::DimensionMismatch {
            context: "commuting pair must act on the same space",
            got: t2.rows(),
            expected: t1.rows(),
        });
    }
    if depth < 2 {
        return Err(DilationError::InvalidParameter {
            context: format!("ando depth must be >= 2, got {depth}"),
        });
    }
    let tol = Tolerance::default();
    require_contraction(t1, tol)?;
    require_contraction(t2, tol)?;
    let scale = t1.norm_spectral() * t2.norm_spectral() + 1.0;
    let commutation_in = t1.commutator_norm(t2);
    if commutation_in > COMMUTATION_INPUT_REL_TOL * scale {
        return Err(DilationError::NotCommuting {
            residual: commutation_in,
            bound: COMMUTATION_INPUT_REL_TOL * scale,
        });
    }

    let h = t1.rows();
    let mut bundle = if t1 == t2 {
        let base = schaffer_truncated(t1, depth)?;
        DilationBundle {
            kind: BundleKind::Ando,
            decomposition: base.decomposition,
            v2: Some(base.v1.clone()),
            v1: base.v1,
            t1: t1.clone(),
            t2: Some(t2.clone()),
            depth,
            sink_blocks: 1,
            residuals: BTreeMap::new(),
            continuous: None,
        }
    } else {
        let d1 = defect(t1, tol)?;
        let d2 = defect(t2, tol)?;
        let slots = 2 * depth;
        let slot_dim = 2 * h;
        let total = h + slots * slot_dim;

        // Plain joint embeddings: V_i injects its defect into slot 1
        // (component 1 for T_1, component 2 for T_2) and shifts the tail.
        let mut v1_plain = ComplexMatrix::zeros(total, total);
        let mut v2_plain = ComplexMatrix::zeros(total, total);
        v1_plain.set_block(0, 0, t1);
        v2_plain.set_block(0, 0, t2);
        v1_plain.set_block(h, 0, &d1);
        v2_plain.set_block(h + h, 0, &d2);
        for k in 1..slots {
            let src = h + (k - 1) * slot_dim;
            let dst = h + k * slot_dim;
            let id = ComplexMatrix::identity(slot_dim);
            v1_plain.set_block(dst, src, &id);
            v2_plain.set_block(dst, src, &id);
        }

        // The pair-correcting unitary: columns of P and Q are the slot-pair
        // injections of V1 V2 and V2 V1 applied to H basis vectors.
        let zero = ComplexMatrix::zeros(h, h);
        let p = ComplexMatrix::vstack(&[&(&d1 * t2), &zero, &zero, &d2]);
        let q = ComplexMatrix::vstack(&[&zero, &(&d2 * t1), &d1, &zero]);
        let g = extend_isometry_to_unitary(&p, &q, 4 * h, Tolerance::rank(), 0)?;
        let g_residual = (&(&g * &p) - &q).norm_spectral();

        // Thread G along the defect tail (one copy per consecutive slot
        // pair), acting as the identity on H.
        let mut thread = ComplexMatrix::identity(total);
        for pair in 0..depth {
            thread.set_block(h + pair * 4 * h, h + pair * 4 * h, &g);
        }
        let v1 = &thread * &v1_plain;
        let v2 = &v2_plain * &thread.adjoint();

        let decomposition = SpaceDecomposition::h_with_blocks(h, "F", slots, slot_dim);
        let mut b = DilationBundle {
            kind: BundleKind::Ando,
            decomposition,
            v1,
            v2: Some(v2),
            t1: t1.clone(),
            t2: Some(t2.clone()),
            depth,
            sink_blocks: 2,
            residuals: BTreeMap::new(),
            continuous: None,
        };
        b.residuals
            .insert("pair_correction_residual".into(), g_residual);
        b
    };

    bundle
        .residuals
        .insert("input_commutation".into(), commutation_in);
    bundle
        .residuals
        .insert("commutation_interior".into(), bundle.commutation_residual());
    bundle.residuals.insert(
        "isometry_defect_v1".into(),
        bundle.isometry_defect(&bundle.v1),
    );
    if let Some(v2) = bundle.v2.clone() {
        bundle
            .residuals
            .insert("isometry_defect_v2".into(), bundle.isometry_defect(&v2));
    }
    bundle
        .residuals
        .insert("compression_max".into(), bundle.compression_residual_max());
    Ok(bundle)
}

/// Orthonormal frame locating the fixed-vector subspaces inside the
/// dilation space, ordered [H | M | L1 | L2].
#[derive(Debug, Clone)]
pub struct FixedVectorFrame {
    /// K x K matrix with orthonormal columns [E_H | M | L1 | L2].
    pub basis: ComplexMatrix,
    /// Block layout (names H, M, L1, L2).
    pub decomposition: SpaceDecomposition,
}

impl FixedVectorFrame {
    fn dims(&self) -> (usize, usize, usize, usize) {
        let d = self.decomposition.dims();
        (d[0], d[1], d[2], d[3])
    }
}

/// Residual norms of the fixed-vector block structure and the dimensions of
/// the subspaces involved.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockReport {
    /// ||V1[L1, H+M]|| (must vanish by the isometry column argument).
    pub residual_b: f64,
    /// ||V1[L1, L2]||.
    pub residual_c: f64,
    /// ||V2[L1, H+M]||.
    pub residual_y: f64,
    /// ||V2[L1, L2]||.
    pub residual_z: f64,
    /// ||(W1* - I) Z*|| where W1 = V1[L2, L2]; the commutation mechanism
    /// that forces Z to vanish when W1* - I is injective.
    pub residual_z_intertwine: f64,
    /// ||V1[L1, L1] - I||.
    pub residual_l1_diag: f64,
    /// Off-diagonal residual of the second-stage structure of V1-tilde.
    pub offdiag_v1_tilde: f64,
    /// Off-diagonal residual of the second-stage structure of V2-tilde.
    pub offdiag_v2_tilde: f64,
    pub dim_l_tilde_1: usize,
    pub dim_l_tilde_2: usize,
    pub dim_l1: usize,
    pub dim_l2: usize,
    pub dim_m: usize,
    /// Fixed space of V2-tilde removed in the second stage.
    pub dim_l: usize,
    pub extras: BTreeMap<String, f64>,
    pub pass: bool,
}

impl BlockReport {
    fn empty() -> Self {
        BlockReport {
            residual_b: 0.0,
            residual_c: 0.0,
            residual_y: 0.0,
            residual_z: 0.0,
            residual_z_intertwine: 0.0,
            residual_l1_diag: 0.0,
            offdiag_v1_tilde: 0.0,
            offdiag_v2_tilde: 0.0,
            dim_l_tilde_1: 0,
            dim_l_tilde_2: 0,
            dim_l1: 0,
            dim_l2: 0,
            dim_m: 0,
            dim_l: 0,
            extras: BTreeMap::new(),
            pass: true,
        }
    }
}

/// Extract and verify the block structure of the bundle's pair against a
/// fixed-vector frame: the L1 row of V1 must be (0 | I | 0), the L1 row of
/// V2 must vanish outside its own diagonal block, and the upper rows must
/// not reach the fixed blocks.
pub fn verify_block_structure(
    bundle: &DilationBundle,
    frame: &FixedVectorFrame,
) -> Result<BlockReport> {
    let v2 = bundle.v2.as_ref().ok_or(DilationError::EmptyInput {
        context: "verify_block_structure needs a two-operator bundle",
    })?;
    if frame.basis.rows() != bundle.total_dim()
        || frame.decomposition.total_dim() != bundle.total_dim()
    {
        return Err(DilationError::DimensionMismatch {
            context: "frame does not match bundle dimension",
            got: frame.decomposition.total_dim(),
            expected: bundle.total_dim(),
        });
    }
    let (hd, md, l1d, l2d) = frame.dims();
    let hm = hd + md;
    let w1 = &(&frame.basis.adjoint() * &bundle.v1) * &frame.basis;
    let w2 = &(&frame.basis.adjoint() * v2) * &frame.basis;

    let hm_range = 0..hm;
    let l1_rows = hm..hm + l1d;
    let l2_rows = hm + l1d..hm + l1d + l2d;

    let block = |m: &ComplexMatrix, r: &std::ops::Range<usize>, c: &std::ops::Range<usize>| {
        m.sub_matrix(r.start, r.end, c.start, c.end)
    };

    let b = block(&w1, &l1_rows, &hm_range);
    let c_blk = block(&w1, &l1_rows, &l2_rows);
    let y = block(&w2, &l1_rows, &hm_range);
    let z = block(&w2, &l1_rows, &l2_rows);
    let w1_corner = block(&w1, &l2_rows, &l2_rows);
    let l1_diag = block(&w1, &l1_rows, &l1_rows);
    let eye_l1 = ComplexMatrix::identity(l1d);

    let mut report = BlockReport::empty();
    report.residual_b = b.norm_spectral();
    report.residual_c = c_blk.norm_spectral();
    report.residual_y = y.norm_spectral();
    report.residual_z = z.norm_spectral();
    report.residual_l1_diag = (&l1_diag - &eye_l1).norm_spectral();
    let id_l2 = ComplexMatrix::identity(l2d);
    report.residual_z_intertwine =
        (&(&w1_corner.adjoint() - &id_l2) * &z.adjoint()).norm_spectral();
    report.dim_l1 = l1d;
    report.dim_l2 = l2d;
    report.dim_m = md;

    // Upper rows of both operators must not reach the fixed blocks.
    let upper_v1 = block(&w1, &hm_range, &l1_rows)
        .norm_spectral()
        .max(block(&w1, &hm_range, &l2_rows).norm_spectral())
        .max(block(&w1, &l2_rows, &l1_rows).norm_spectral());
    let upper_v2 = block(&w2, &hm_range, &l1_rows)
        .norm_spectral()
        .max(block(&w2, &hm_range, &l2_rows).norm_spectral())
        .max(block(&w2, &l2_rows, &l1_rows).norm_spectral());
    report.extras.insert("upper_v1".into(), upper_v1);
    report.extras.insert("upper_v2".into(), upper_v2);

    report.pass = report.residual_b <= BLOCK_TOL
        && report.residual_c <= BLOCK_TOL
        && report.residual_y <= BLOCK_TOL
        && report.residual_z <= BLOCK_TOL
        && report.residual_l1_diag <= BLOCK_TOL;
    Ok(report)
}

/// Outcome of the fixed-vector removal pipeline.
#[derive(Debug, Clone)]
pub struct ReductionOutcome {
    /// The reduced dilation (U_1, U_2) on G = K-tilde minus L, H first.
    pub reduced: DilationBundle,
    pub report: BlockReport,
    /// First-stage frame [H | M | L1 | L2] of the original space.
    pub frame: FixedVectorFrame,
    /// Max disagreement of pre- and post-reduction compressions.
    pub compression_drift: f64,
}

/// Remove the fixed-vector subspaces of a commuting isometric dilation.
///
/// Computes the fixed spaces of V_i, verifies they avoid H, splits off
/// L1 = Fix(V_1) and L2 = (Fix(V_1) v Fix(V_2)) minus L1, checks the block
/// structure that makes K-tilde = H + M + L2 jointly invariant, restricts,
/// then removes the remaining fixed space of the second operator. The
/// result is still an isometric dilation with the same compressions, and
/// neither reduced operator has 1 as an eigenvalue (certified at
/// `gap_tol`).
pub fn remove_fixed_vectors(
    bundle: &DilationBundle,
    gap_tol: Tolerance,
) -> Result<ReductionOutcome> {
    if bundle.kind != BundleKind::Ando {
        return Err(DilationError::WrongBundleKind {
            got: bundle.kind.name(),
            expected: "ando",
        });
    }
    let v2 = bundle.v2.as_ref().ok_or(DilationError::EmptyInput {
        context: "remove_fixed_vectors needs a two-operator bundle",
    })?;
    let t2 = bundle.t2.as_ref().ok_or(DilationError::EmptyInput {
        context: "bundle is missing its second compression",
    })?;

    // Hypothesis: neither compression has 1 as an eigenvalue.
    let gap1 = eigenvalue_one_check(&bundle.t1, gap_tol)?;
    if !gap1.pass {
        return Err(DilationError::EigenvalueOne {
            distance: gap1.distance,
            gap: gap_tol.value(),
        });
    }
    let gap2 = eigenvalue_one_check(t2, gap_tol)?;
    if !gap2.pass {
        return Err(DilationError::EigenvalueOne {
            distance: gap2.distance,
            gap: gap_tol.value(),
        });
    }

    let k = bundle.total_dim();
    let h = bundle.h_dim();
    let id = ComplexMatrix::identity(k);

    // Fixed-vector spaces of the dilation operators.
    let lt1 = numerical_kernel(&(&bundle.v1 - &id), gap_tol);
    let lt2 = numerical_kernel(&(v2 - &id), gap_tol);
    for lt in [&lt1, &lt2] {
        if lt.cols() > 0 {
            let overlap = lt.sub_matrix(0, h, 0, lt.cols()).norm_spectral();
            if overlap > 1e-7 {
                return Err(DilationError::FixedSpaceNotOrthogonal { residual: overlap });
            }
        }
    }

    // L1 = Fix(V1); L2 = (Fix(V1) v Fix(V2)) minus L1.
    let l1 = lt1.clone();
    let l2 = if lt2.cols() == 0 {
        ComplexMatrix::zeros(k, 0)
    } else {
        let coeff = &l1.adjoint() * &lt2;
        let projected = &lt2 - &(&l1 * &coeff);
        span_orthonormalize(&projected, Tolerance::rank())
    };

    let e_h = bundle.decomposition.embed_h();
    let spanned = ComplexMatrix::hstack(&[&e_h, &l1, &l2]);
    let m_basis = orthonormal_complement(&spanned, k);
    let basis = ComplexMatrix::hstack(&[&e_h, &m_basis, &l1, &l2]);
    let frame = FixedVectorFrame {
        basis,
        decomposition: SpaceDecomposition::new(
            vec!["H".into(), "M".into(), "L1".into(), "L2".into()],
            vec![h, m_basis.cols(), l1.cols(), l2.cols()],
        )?,
    };

    let mut report = verify_block_structure(bundle, &frame)?;
    report.dim_l_tilde_1 = lt1.cols();
    report.dim_l_tilde_2 = lt2.cols();

    // K-tilde invariance is exactly the vanishing of the L1-row blocks.
    let inv_v1 = report.residual_b.max(report.residual_c);
    if inv_v1 > BLOCK_TOL {
        return Err(DilationError::InvarianceResidual {
            subspace: "H+M+L2 under V1",
            residual: inv_v1,
            bound: BLOCK_TOL,
        });
    }
    let inv_v2 = report.residual_y.max(report.residual_z);
    if inv_v2 > BLOCK_TOL {
        return Err(DilationError::InvarianceResidual {
            subspace: "H+M+L2 under V2",
            residual: inv_v2,
            bound: BLOCK_TOL,
        });
    }

    // First restriction: K-tilde = H + M + L2.
    let kt_basis = ComplexMatrix::hstack(&[&e_h, &m_basis, &l2]);
    let vt1 = &(&kt_basis.adjoint() * &bundle.v1) * &kt_basis;
    let vt2 = &(&kt_basis.adjoint() * v2) * &kt_basis;
    let kt = kt_basis.cols();

    // Second stage: strip L = Fix(V2-tilde).
    let idt = ComplexMatrix::identity(kt);
    let l = numerical_kernel(&(&vt2 - &idt), gap_tol);
    report.dim_l = l.cols();
    if l.cols() > 0 {
        let overlap = l.sub_matrix(0, h, 0, l.cols()).norm_spectral();
        if overlap > 1e-7 {
            return Err(DilationError::FixedSpaceNotOrthogonal { residual: overlap });
        }
    }
    let e_h_t = {
        let mut m = ComplexMatrix::zeros(kt, h);
        m.set_block(0, 0, &ComplexMatrix::identity(h));
        m
    };
    let hl = ComplexMatrix::hstack(&[&e_h_t, &l]);
    let rest = orthonormal_complement(&hl, kt);
    let g_basis = ComplexMatrix::hstack(&[&e_h_t, &rest]);

    // Diagonal structure of the second stage: G and L decouple.
    let off = |v: &ComplexMatrix| -> f64 {
        if l.cols() == 0 {
            return 0.0;
        }
        let gl = &(&g_basis.adjoint() * v) * &l;
        let lg = &(&l.adjoint() * v) * &g_basis;
        gl.norm_spectral().max(lg.norm_spectral())
    };
    report.offdiag_v1_tilde = off(&vt1);
    report.offdiag_v2_tilde = off(&vt2);
    if report.offdiag_v1_tilde.max(report.offdiag_v2_tilde) > BLOCK_TOL {
        return Err(DilationError::InvarianceResidual {
            subspace: "G = K-tilde minus L under V1/V2",
            residual: report.offdiag_v1_tilde.max(report.offdiag_v2_tilde),
            bound: BLOCK_TOL,
        });
    }

    let u1 = &(&g_basis.adjoint() * &vt1) * &g_basis;
    let u2 = &(&g_basis.adjoint() * &vt2) * &g_basis;

    // Conclusion of the pipeline: the reduced operators have no eigenvalue 1.
    let gu1 = eigenvalue_one_check(&u1, gap_tol)?;
    let gu2 = eigenvalue_one_check(&u2, gap_tol)?;
    if !gu1.pass || !gu2.pass {
        return Err(DilationError::EigenvalueOne {
            distance: gu1.distance.min(gu2.distance),
            gap: gap_tol.value(),
        });
    }

    let g_dim = g_basis.cols();
    let reduced_decomposition =
        SpaceDecomposition::new(vec!["H".into(), "G".into()], vec![h, g_dim - h])?;
    let mut reduced = DilationBundle {
        kind: BundleKind::Reduced,
        decomposition: reduced_decomposition,
        v1: u1,
        v2: Some(u2),
        t1: bundle.t1.clone(),
        t2: Some(t2.clone()),
        depth: bundle.depth,
        sink_blocks: 0,
        residuals: BTreeMap::new(),
        continuous: None,
    };

    let mut drift: f64 = 0.0;
    for total in 0..=bundle.depth {
        for m in 0..=total {
            let n = total - m;
            let before = bundle.compression(m, n);
            let after = reduced.compression(m, n);
            drift = drift.max((&before - &after).norm_spectral());
        }
    }
    reduced.residuals.insert("compression_drift".into(), drift);
    reduced
        .residuals
        .insert("eigen_gap_u1".into(), gu1.distance);
    reduced
        .residuals
        .insert("eigen_gap_u2".into(), gu2.distance);

    Ok(ReductionOutcome {
        reduced,
        report,
        frame,
        compression_drift: drift,
    })
}

/// Continuous two-parameter pipeline: cogenerators of the generator pair,
/// eigenvalue-1 screening, the commuting pair dilation, fixed-vector
/// removal, and the evaluators (s, t) -> (V_1(s), V_2(t)) obtained through
/// e_s of the reduced operators.
pub fn continuous_pair_dilation(
    gens: &GeneratorPair,
    depth: usize,
    gap_tol: Tolerance,
) -> Result<DilationBundle> {
    let c1 =
        cogenerator_from_generator(gens.a1()).map_err(DilationError::at_stage("cogenerator_1"))?;
    let c2 =
        cogenerator_from_generator(gens.a2()).map_err(DilationError::at_stage("cogenerator_2"))?;

    let gap1 = eigenvalue_one_check(c1.matrix(), gap_tol)
        .map_err(DilationError::at_stage("eigenvalue_one_check"))?;
    let gap2 = eigenvalue_one_check(c2.matrix(), gap_tol)
        .map_err(DilationError::at_stage("eigenvalue_one_check"))?;
    if !gap1.pass || !gap2.pass {
        return Err(DilationError::Stage {
            stage: "eigenvalue_one_check",
            source: Box::new(DilationError::EigenvalueOne {
                distance: gap1.distance.min(gap2.distance),
                gap: gap_tol.value(),
            }),
        });
    }

    let pair_bundle = ando_truncated(c1.matrix(), c2.matrix(), depth)
        .map_err(DilationError::at_stage("ando_truncated"))?;
    let outcome = remove_fixed_vectors(&pair_bundle, gap_tol)
        .map_err(DilationError::at_stage("remove_fixed_vectors"))?;

    let u1 = outcome.reduced.v1.clone();
    let u2 = outcome.reduced.v2.clone().expect("reduced pair");
    let log_u1 =
        cayley_transform(&u1).map_err(DilationError::at_stage("cogenerator_inversion"))?;
    let log_u2 =
        cayley_transform(&u2).map_err(DilationError::at_stage("cogenerator_inversion"))?;

    let mut bundle = DilationBundle {
        kind: BundleKind::Continuous,
        decomposition: outcome.reduced.decomposition.clone(),
        v1: u1,
        v2: Some(u2),
        t1: c1.matrix().clone(),
        t2: Some(c2.matrix().clone()),
        depth,
        sink_blocks: 0,
        residuals: outcome.reduced.residuals.clone(),
        continuous: Some(ContinuousData {
            a1: gens.a1().clone(),
            a2: gens.a2().clone(),
            log_u1,
            log_u2,
        }),
    };

    // Sampled semigroup law and commutation diagnostics.
    let mut law: f64 = 0.0;
    let mut comm: f64 = 0.0;
    let samples: Vec<f64> = DEFAULT_SAMPLE_GRID
        .iter()
        .copied()
        .filter(|&s| s > 0.0)
        .collect();
    for &s in &samples {
        for &t in &samples {
            let v1s = bundle.v1_at(s)?;
            let v1t = bundle.v1_at(t)?;
            let v1st = bundle.v1_at(s + t)?;
            law = law.max((&(&v1s * &v1t) - &v1st).norm_spectral());
            let v2s = bundle.v2_at(s)?;
            let v2t = bundle.v2_at(t)?;
            let v2st = bundle.v2_at(s + t)?;
            law = law.max((&(&v2s * &v2t) - &v2st).norm_spectral());
            comm = comm.max((&(&v1s * &v2t) - &(&v2t * &v1s)).norm_spectral());
        }
    }
    bundle.residuals.insert("semigroup_law_max".into(), law);
    bundle
        .residuals
        .insert("commutation_sampled_max".into(), comm);
    Ok(bundle)
}

/// Residual of the compression identity
/// ||T_1(s) T_2(t) - P_H V_1(s) V_2(t) |_H|| for a continuous bundle.
pub fn dilation_compression_residual(bundle: &DilationBundle, s: f64, t: f64) -> Result<f64> {
    if bundle.kind != BundleKind::Continuous {
        return Err(DilationError::WrongBundleKind {
            got: bundle.kind.name(),
            expected: "continuous",
        });
    }
    if s < 0.0 || t < 0.0 {
        return Err(DilationError::InvalidParameter {
            context: format!("parameters must be nonnegative, got ({s}, {t})"),
        });
    }
    let h = bundle.h_dim();
    let expect = &bundle.t1_at(s)? * &bundle.t2_at(t)?;
    let big = &bundle.v1_at(s)? * &bundle.v2_at(t)?;
    let got = big.sub_matrix(0, h, 0, h);
    Ok((&got - &expect).norm_spectral())
}

/// Sample grid for minimal restrictions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum MinimalGrid {
    /// Parameter pairs (s, t) for continuous bundles.
    Continuous(Vec<(f64, f64)>),
    /// All monomials V1^m V2^n with m + n up to this degree.
    Monomials(usize),
}

/// Restrict a bundle to the span of {V_1 V_2 H} over the sample grid.
///
/// The span is computed with H forced first, so the restricted bundle keeps
/// the H-block layout; the resulting dimension never exceeds the original,
/// and the compression drift over the grid is recorded in the residual map.
pub fn minimal_restriction(bundle: &DilationBundle, grid: &MinimalGrid) -> Result<DilationBundle> {
    let h = bundle.h_dim();
    let k = bundle.total_dim();
    let e_h = bundle.decomposition.embed_h();

    let mut columns: Vec<ComplexMatrix> = Vec::new();
    match (bundle.kind, grid) {
        (BundleKind::Continuous, MinimalGrid::Continuous(points)) => {
            for &(s, t) in points {
                let op = &bundle.v1_at(s)? * &bundle.v2_at(t)?;
                columns.push(&op * &e_h);
            }
        }
        (BundleKind::Ando, MinimalGrid::Monomials(max_total))
        | (BundleKind::Schaffer, MinimalGrid::Monomials(max_total)) => {
            for total in 1..=*max_total {
                for m in 0..=total {
                    let n = total - m;
                    if bundle.v2.is_none() && n > 0 {
                        continue;
                    }
                    let mut x = e_h.clone();
                    if let Some(v2) = &bundle.v2 {
                        for _ in 0..n {
                            x = v2 * &x;
                        }
                    }
                    for _ in 0..m {
                        x = &bundle.v1 * &x;
                    }
                    columns.push(x);
                }
            }
        }
        _ => {
            return Err(DilationError::WrongBundleKind {
                got: bundle.kind.name(),
                expected: "continuous or ando with a matching grid",
            })
        }
    }

    // H-first orthonormal basis of the reachable span, in grid order.
    let mut basis_cols: Vec<ComplexMatrix> = (0..h).map(|j| e_h.column(j)).collect();
    let tol = Tolerance::rank().value();
    for block in &columns {
        for j in 0..block.cols() {
            let mut v = block.column(j);
            for _ in 0..2 {
                for q in &basis_cols {
                    let coeff = (&q.adjoint() * &v).get(0, 0);
                    v = &v - &q.scale(coeff);
                }
            }
            let norm = v.norm_fro();
            if norm > tol {
                basis_cols.push(v.scale_re(1.0 / norm));
            }
        }
    }
    let basis_refs: Vec<&ComplexMatrix> = basis_cols.iter().collect();
    let basis = ComplexMatrix::hstack(&basis_refs);
    let dim = basis.cols();
    debug_assert!(dim <= k);

    let restrict = |op: &ComplexMatrix| -> ComplexMatrix { &(&basis.adjoint() * op) * &basis };

    let decomposition = SpaceDecomposition::new(vec!["H".into(), "R".into()], vec![h, dim - h])?;
    let mut out = DilationBundle {
        kind: bundle.kind,
        decomposition,
        v1: restrict(&bundle.v1),
        v2: bundle.v2.as_ref().map(&restrict),
        t1: bundle.t1.clone(),
        t2: bundle.t2.clone(),
        depth: bundle.depth,
        sink_blocks: 0,
        residuals: BTreeMap::new(),
        continuous: bundle.continuous.as_ref().map(|data| ContinuousData {
            a1: data.a1.clone(),
            a2: data.a2.clone(),
            log_u1: restrict(&data.log_u1),
            log_u2: restrict(&data.log_u2),
        }),
    };

    let mut drift: f64 = 0.0;
    match (bundle.kind, grid) {
        (BundleKind::Continuous, MinimalGrid::Continuous(points)) => {
            for &(s, t) in points {
                drift = drift.max(dilation_compression_residual(&out, s, t)?);
            }
        }
        (_, MinimalGrid::Monomials(max_total)) => {
            let t2 = bundle
                .t2
                .clone()
                .unwrap_or_else(|| ComplexMatrix::identity(h));
            for total in 0..=*max_total {
                for m in 0..=total {
                    let n = total - m;
                    if out.v2.is_none() && n > 0 {
                        continue;
                    }
                    let expect = &bundle.t1.pow(m) * &t2.pow(n);
                    let got = out.compression(m, n);
                    drift = drift.max((&got - &expect).norm_spectral());
                }
            }
        }
        _ => unreachable!(),
    }
    out.residuals.insert("compression_drift".into(), drift);
    out.residuals.insert("minimal_dim".into(), dim as f64);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::re;
    use num_complex::Complex64;

    fn scalar(x: f64) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(1, 1, &[x]).unwrap()
    }

    fn nilpotent() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(2, 2, &[0.0, 0.9, 0.0, 0.0]).unwrap()
    }

    #[test]
    fn schaffer_of_zero_is_lower_shift() {
        let b = schaffer_truncated(&scalar(0.0), 3).unwrap();
        assert_eq!(b.total_dim(), 4);
        for n in 1..=3 {
            assert!(b.compression(n, 0).norm_spectral() < 1e-15);
        }
        assert!(b.validate().pass());
    }

    #[test]
    fn schaffer_compression_powers() {
        let b = schaffer_truncated(&scalar(0.5), 4).unwrap();
        let c2 = b.compression(2, 0);
        assert!((c2.get(0, 0) - re(0.25)).norm() < 1e-14);
        assert!(b.validate().pass());
    }

    #[test]
    fn schaffer_of_identity() {
        let b = schaffer_truncated(&ComplexMatrix::identity(2), 2).unwrap();
        let c1 = b.compression(1, 0);
        assert!((&c1 - &ComplexMatrix::identity(2)).norm_spectral() < 1e-14);
        assert!(b.validate().pass());
    }

    #[test]
    fn schaffer_rejects_expansions_and_zero_depth() {
        assert!(schaffer_truncated(&scalar(2.0), 2).is_err());
        assert!(schaffer_truncated(&scalar(0.5), 0).is_err());
    }

    #[test]
    fn ando_zero_pair() {
        let b = ando_truncated(&scalar(0.0), &scalar(0.0), 4).unwrap();
        for total in 1..=4 {
            for m in 0..=total {
                assert!(b.compression(m, total - m).norm_spectral() < 1e-12);
            }
        }
        assert!(b.commutation_residual() < 1e-12);
        assert!(b.validate().pass());
    }

    #[test]
    fn ando_nilpotent_pair_contract() {
        let t = nilpotent();
        let b = ando_truncated(&t, &t, 3).unwrap();
        assert!(b.validate().pass(), "{:?}", b.validate());
        // P_H V1 V2 |_H = T^2 = 0.
        assert!(b.compression(1, 1).norm_spectral() < 1e-12);
    }

    #[test]
    fn ando_distinct_pair_contract() {
        // Commuting but distinct: polynomials of one matrix.
        let s = ComplexMatrix::from_real_rows(2, 2, &[0.3, 0.4, 0.0, -0.2]).unwrap();
        let t1 = s.scale_re(0.9);
        let raw = &(&s * &s).scale_re(0.8) - &s.scale_re(0.1);
        let t2 = raw.scale_re(0.9 / raw.norm_spectral().max(1.0));
        let b = ando_truncated(&t1, &t2, 4).unwrap();
        let v = b.validate();
        assert!(v.pass(), "{v:?}");
        assert!(
            b.commutation_residual() < 1e-12,
            "exchange identity should be exact"
        );
        assert!(b.compression_residual_max() < 1e-12);
    }

    #[test]
    fn ando_doubly_commuting_tensor_pair() {
        let a = ComplexMatrix::from_real_rows(2, 2, &[0.6, 0.2, 0.0, 0.5]).unwrap();
        let bm = ComplexMatrix::from_real_rows(2, 2, &[0.0, 0.7, 0.0, 0.3]).unwrap();
        let t1 = a.kron(&ComplexMatrix::identity(2));
        let t2 = ComplexMatrix::identity(2).kron(&bm);
        let b = ando_truncated(&t1, &t2, 3).unwrap();
        assert!(b.validate().pass());
        let expect = &t1 * &t2.pow(2);
        assert!((&b.compression(1, 2) - &expect).norm_spectral() < 1e-12);
    }

    #[test]
    fn ando_rejects_non_commuting() {
        let t1 = ComplexMatrix::from_real_rows(2, 2, &[0.0, 0.5, 0.0, 0.0]).unwrap();
        let t2 = ComplexMatrix::from_real_rows(2, 2, &[0.0, 0.0, 0.5, 0.0]).unwrap();
        assert!(matches!(
            ando_truncated(&t1, &t2, 2),
            Err(DilationError::NotCommuting { .. })
        ));
    }

    #[test]
    fn reduction_on_shift_pair_is_identity() {
        let b = ando_truncated(&scalar(0.0), &scalar(0.0), 3).unwrap();
        let out = remove_fixed_vectors(&b, Tolerance::new(1e-6).unwrap()).unwrap();
        assert_eq!(out.report.dim_l_tilde_1, 0);
        assert_eq!(out.report.dim_l_tilde_2, 0);
        assert_eq!(out.report.dim_l1, 0);
        assert_eq!(out.report.dim_l2, 0);
        assert_eq!(out.reduced.total_dim(), b.total_dim());
        assert!(out.compression_drift < 1e-12);
        assert!(out.report.pass);
    }

    #[test]
    fn reduction_on_nilpotent_pair() {
        let t = nilpotent();
        let b = ando_truncated(&t, &t, 3).unwrap();
        let out = remove_fixed_vectors(&b, Tolerance::new(1e-6).unwrap()).unwrap();
        assert_eq!(out.report.dim_l_tilde_1, 0);
        assert!(out.compression_drift < 1e-12);
    }

    #[test]
    fn reduction_strips_planted_fixed_block() {
        // V_i = U_i + I on H + L with commuting unitaries U_i free of
        // eigenvalue 1; the reduction must strip the planted block L.
        let u1 = ComplexMatrix::from_diagonal(&[
            Complex64::from_polar(1.0, 2.0),
            Complex64::from_polar(1.0, -1.3),
        ]);
        let u2 = ComplexMatrix::from_diagonal(&[
            Complex64::from_polar(1.0, 0.9),
            Complex64::from_polar(1.0, 2.8),
        ]);
        let pad = 3usize;
        let v1 = ComplexMatrix::direct_sum(&[&u1, &ComplexMatrix::identity(pad)]);
        let v2 = ComplexMatrix::direct_sum(&[&u2, &ComplexMatrix::identity(pad)]);
        let decomposition =
            SpaceDecomposition::new(vec!["H".into(), "L".into()], vec![2, pad]).unwrap();
        let bundle = DilationBundle {
            kind: BundleKind::Ando,
            decomposition,
            v1,
            v2: Some(v2),
            t1: u1.clone(),
            t2: Some(u2.clone()),
            depth: 2,
            sink_blocks: 0,
            residuals: BTreeMap::new(),
            continuous: None,
        };
        let out = remove_fixed_vectors(&bundle, Tolerance::new(1e-6).unwrap()).unwrap();
        // Both fixed spaces coincide with the padding block.
        assert_eq!(out.report.dim_l_tilde_1, pad);
        assert_eq!(out.report.dim_l1, pad);
        assert_eq!(out.report.dim_l2, 0);
        assert_eq!(out.reduced.total_dim(), 2);
        assert!(out.compression_drift < 1e-12);
        let c = out.reduced.compression(1, 1);
        assert!((&c - &(&u1 * &u2)).norm_spectral() < 1e-12);
    }

    #[test]
    fn reduction_rejects_eigenvalue_one_inputs() {
        let half = ComplexMatrix::from_real_diagonal(&[0.5, 0.5]);
        let b = ando_truncated(&ComplexMatrix::identity(2), &half, 2).unwrap();
        let err = remove_fixed_vectors(&b, Tolerance::new(1e-6).unwrap());
        assert!(matches!(err, Err(DilationError::EigenvalueOne { .. })));
    }

    #[test]
    fn planted_block_defect_is_detected() {
        // Direct fixture for the block verifier: a frame aligned with the
        // standard basis and a V1 with a planted nonzero B block.
        let (h, m, l1, l2) = (1usize, 1usize, 1usize, 1usize);
        let k = h + m + l1 + l2;
        let mut v1 = ComplexMatrix::zeros(k, k);
        v1.set_block(
            0,
            0,
            &ComplexMatrix::from_real_rows(2, 2, &[0.5, 0.0, 0.0, 0.4]).unwrap(),
        );
        v1.set_block(2, 2, &ComplexMatrix::identity(1));
        v1.set_block(3, 3, &ComplexMatrix::from_real_rows(1, 1, &[-1.0]).unwrap());
        // Planted B: the L1 row reaches H+M with norm 0.1.
        v1.set_block(2, 0, &ComplexMatrix::from_real_rows(1, 1, &[0.1]).unwrap());
        let v2 = v1.clone();
        let bundle = DilationBundle {
            kind: BundleKind::Ando,
            decomposition: SpaceDecomposition::new(vec!["H".into(), "R".into()], vec![1, 3])
                .unwrap(),
            v1,
            v2: Some(v2),
            t1: scalar(0.5),
            t2: Some(scalar(0.5)),
            depth: 2,
            sink_blocks: 0,
            residuals: BTreeMap::new(),
            continuous: None,
        };
        let frame = FixedVectorFrame {
            basis: ComplexMatrix::identity(k),
            decomposition: SpaceDecomposition::new(
                vec!["H".into(), "M".into(), "L1".into(), "L2".into()],
                vec![h, m, l1, l2],
            )
            .unwrap(),
        };
        let report = verify_block_structure(&bundle, &frame).unwrap();
        assert!((report.residual_b - 0.1).abs() < 1e-12);
        assert!(!report.pass);
    }

    #[test]
    fn zero_dimensional_fixed_blocks_pass_vacuously() {
        let b = ando_truncated(&scalar(0.3), &scalar(0.3), 2).unwrap();
        let out = remove_fixed_vectors(&b, Tolerance::new(1e-6).unwrap()).unwrap();
        assert_eq!(out.report.dim_l1, 0);
        assert_eq!(out.report.dim_l2, 0);
        assert_eq!(out.report.residual_b, 0.0);
        assert_eq!(out.report.residual_z, 0.0);
        assert!(out.report.pass);
    }

    #[test]
    fn continuous_scalar_pipeline() {
        let gens = GeneratorPair::new(scalar(-1.0), scalar(-2.0)).unwrap();
        let bundle = continuous_pair_dilation(&gens, 4, Tolerance::new(1e-6).unwrap()).unwrap();
        assert!(bundle.residuals["semigroup_law_max"] < 1e-8);
        assert!(bundle.residuals["commutation_sampled_max"] < 1e-7);
        let r = dilation_compression_residual(&bundle, 0.5, 0.5).unwrap();
        assert!(r < 1e-9, "residual {r}");
        let r0 = dilation_compression_residual(&bundle, 0.0, 0.0).unwrap();
        assert_eq!(r0, 0.0);
    }

    #[test]
    fn continuous_identity_semigroups() {
        let gens =
            GeneratorPair::new(ComplexMatrix::zeros(1, 1), ComplexMatrix::zeros(1, 1)).unwrap();
        let bundle = continuous_pair_dilation(&gens, 2, Tolerance::new(1e-6).unwrap()).unwrap();
        let v = bundle.v1_at(1.7).unwrap();
        let h = bundle.h_dim();
        // V_i(s) restricted to H is the identity semigroup.
        assert!((v.sub_matrix(0, h, 0, h).get(0, 0) - re(1.0)).norm() < 1e-10);
        let r = dilation_compression_residual(&bundle, 1.0, 2.0).unwrap();
        assert!(r < 1e-10);
    }

    #[test]
    fn minimal_restriction_identity_pipeline_collapses_to_h() {
        let gens =
            GeneratorPair::new(ComplexMatrix::zeros(1, 1), ComplexMatrix::zeros(1, 1)).unwrap();
        let bundle = continuous_pair_dilation(&gens, 2, Tolerance::new(1e-6).unwrap()).unwrap();
        let grid = MinimalGrid::Continuous(vec![(0.0, 0.0), (0.5, 0.5), (1.0, 2.0)]);
        let min = minimal_restriction(&bundle, &grid).unwrap();
        assert_eq!(min.total_dim(), 1);
        assert!(min.residuals["compression_drift"] < 1e-9);
    }

    #[test]
    fn minimal_restriction_shift_orbit_dimension() {
        // Equal zero pair uses the shared Schaffer chain; the reachable
        // span of the truncated shift has dimension depth + 1.
        let b = ando_truncated(&scalar(0.0), &scalar(0.0), 4).unwrap();
        let min = minimal_restriction(&b, &MinimalGrid::Monomials(4)).unwrap();
        assert_eq!(min.total_dim(), 5);
        assert!(min.residuals["compression_drift"] < 1e-12);
    }

    #[test]
    fn minimal_restriction_drops_unreachable_padding() {
        let t = scalar(0.5);
        let base = schaffer_truncated(&t, 3).unwrap();
        let k = base.total_dim();
        let pad = 2usize;
        let v1 = ComplexMatrix::direct_sum(&[&base.v1, &ComplexMatrix::zeros(pad, pad)]);
        let bundle = DilationBundle {
            kind: BundleKind::Schaffer,
            decomposition: SpaceDecomposition::new(
                vec!["H".into(), "D".into(), "P".into()],
                vec![1, k - 1, pad],
            )
            .unwrap(),
            v1,
            v2: None,
            t1: t,
            t2: None,
            depth: 3,
            sink_blocks: 1,
            residuals: BTreeMap::new(),
            continuous: None,
        };
        let min = minimal_restriction(&bundle, &MinimalGrid::Monomials(3)).unwrap();
        assert_eq!(min.total_dim(), bundle.total_dim() - pad);
        assert!(min.residuals["compression_drift"] < 1e-12);
    }
}
