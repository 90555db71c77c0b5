//! Regular dilation machinery over a commensurable index lattice: the
//! alternating-sum positivity condition of Brehmer, the two-sided product
//! function T-hat, operator-valued positive-definite kernel Grams, the
//! truncated Naimark/GNS construction of regular unitary dilations, the
//! isometric restriction, and the coisometric wrapper via adjoints.

use crate::cogen::eigenvalue_one_check;
use crate::error::{DilationError, Result};
use crate::index::{
    commensurable_reduce, group_box, mask, pos_neg_parts, IndexElement, SubsetMask,
};
use crate::mat::{
    extend_isometry_to_unitary, hermitian_eigen, psd_check, span_orthonormalize, ComplexMatrix,
    PsdReport, Tolerance,
};
use crate::report::{Check, Report};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Hard cap on |v| in the Brehmer check (the sum has 2^|v| terms).
pub const SUBSET_CAP: usize = 20;
/// Tolerance for the regular-dilation identity on representable indices.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Eigenvalue clamp (relative to the largest) in the Gram factorization.
const FACTOR_CLAMP_REL: f64 = 1e-12;

/// A generator-indexed contractive semigroup {T_s} with an exact-lattice
/// evaluator.
///
/// Each generator element is supported on a single distinct coordinate
/// (the embedding of one coordinate semigroup); the evaluator maps
/// s = sum_j k_j g_j to the power-product of the generator operators, which
/// makes the semigroup law exact by construction.
#[derive(Debug, Clone)]
pub struct SemigroupFamily {
    omega: usize,
    generator_elements: Vec<IndexElement>,
    generator_ops: Vec<ComplexMatrix>,
    /// coordinate -> (generator index, base value)
    coord_map: BTreeMap<usize, (usize, BigRational)>,
    dim: usize,
}

impl SemigroupFamily {
    pub fn new(
        omega: usize,
        generator_elements: Vec<IndexElement>,
        generator_ops: Vec<ComplexMatrix>,
    ) -> Result<Self> {
        if generator_elements.is_empty() {
            return Err(DilationError::EmptyInput {
                context: "semigroup family needs at least one generator",
            });
        }
        if generator_elements.len() != generator_ops.len() {
            return Err(DilationError::DimensionMismatch {
                context: "one operator per generator element",
                got: generator_ops.len(),
                expected: generator_elements.len(),
            });
        }
        let mut coord_map = BTreeMap::new();
        for (i, g) in generator_elements.iter().enumerate() {
            if g.omega_size() != omega {
                return Err(DilationError::OmegaMismatch {
                    got: g.omega_size(),
                    expected: omega,
                });
            }
            g.require_nonnegative()?;
            let support: Vec<usize> = g.support().collect();
            if support.len() != 1 {
                return Err(DilationError::InvalidParameter {
                    context: format!(
                        "generator {i} must be supported on exactly one coordinate, got {}",
                        support.len()
                    ),
                });
            }
            let coord = support[0];
            if coord_map.contains_key(&coord) {
                return Err(DilationError::DuplicateCoordinate { coord });
            }
            coord_map.insert(coord, (i, g.get(coord)));
        }
        let dim = generator_ops[0].rows();
        for (i, t) in generator_ops.iter().enumerate() {
            t.require_square()?;
            if t.rows() != dim {
                return Err(DilationError::DimensionMismatch {
                    context: "generator operators must share a dimension",
                    got: t.rows(),
                    expected: dim,
                });
            }
            let norm = t.norm_spectral();
            if norm > 1.0 + 1e-9 {
                return Err(DilationError::NotContraction { norm, tol: 1e-9 });
            }
            for other in generator_ops.iter().take(i) {
                let scale = t.norm_spectral() * other.norm_spectral() + 1.0;
                let residual = t.commutator_norm(other);
                if residual > 1e-10 * scale {
                    return Err(DilationError::NotCommuting {
                        residual,
                        bound: 1e-10 * scale,
                    });
                }
            }
        }
        Ok(SemigroupFamily {
            omega,
            generator_elements,
            generator_ops,
            coord_map,
            dim,
        })
    }

    /// Convenience constructor: one generator per coordinate with unit step.
    pub fn with_unit_steps(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let omega = ops.len();
        let elements: Result<Vec<IndexElement>> = (0..omega)
            .map(|j| IndexElement::unit(omega, j, BigRational::from_integer(BigInt::from(1))))
            .collect();
        SemigroupFamily::new(omega, elements?, ops)
    }

    pub fn omega_size(&self) -> usize {
        self.omega
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator_elements(&self) -> &[IndexElement] {
        &self.generator_elements
    }

    pub fn generator_ops(&self) -> &[ComplexMatrix] {
        &self.generator_ops
    }

    /// Adjoint family {T_s*} on the same index data.
    pub fn adjoint_family(&self) -> SemigroupFamily {
        SemigroupFamily {
            omega: self.omega,
            generator_elements: self.generator_elements.clone(),
            generator_ops: self.generator_ops.iter().map(|t| t.adjoint()).collect(),
            coord_map: self.coord_map.clone(),
            dim: self.dim,
        }
    }

    /// Integer generator exponents of a positive-cone element, or an error
    /// when it is off the lattice.
    pub fn exponents(&self, s: &IndexElement) -> Result<BTreeMap<usize, u64>> {
        if s.omega_size() != self.omega {
            return Err(DilationError::OmegaMismatch {
                got: s.omega_size(),
                expected: self.omega,
            });
        }
        s.require_nonnegative()?;
        let mut out = BTreeMap::new();
        for j in s.support() {
            let value = s.get(j);
            let Some((gen_idx, base)) = self.coord_map.get(&j) else {
                return Err(DilationError::NotInLattice {
                    coord: j,
                    value: value.to_string(),
                    base: "no generator on this coordinate".into(),
                });
            };
            let q = &value / base;
            if !q.is_integer() {
                return Err(DilationError::NotInLattice {
                    coord: j,
                    value: value.to_string(),
                    base: base.to_string(),
                });
            }
            let k = u64::try_from(q.to_integer()).map_err(|_| DilationError::NotInLattice {
                coord: j,
                value: value.to_string(),
                base: base.to_string(),
            })?;
            out.insert(*gen_idx, k);
        }
        Ok(out)
    }

    /// Evaluate T_s for s in the positive cone as the power-product of the
    /// generator operators.
    pub fn eval(&self, s: &IndexElement) -> Result<ComplexMatrix> {
        let exps = self.exponents(s)?;
        let mut acc = ComplexMatrix::identity(self.dim);
        for (gen_idx, k) in exps {
            for _ in 0..k {
                acc = &acc * &self.generator_ops[gen_idx];
            }
        }
        Ok(acc)
    }
}

/// T-hat(g) = T_{s_minus}^* T_{s_plus} for g in the group S - S.
pub fn t_hat(family: &SemigroupFamily, g: &IndexElement) -> Result<ComplexMatrix> {
    let (plus, minus) = pos_neg_parts(g);
    let tp = family.eval(&plus)?;
    let tm = family.eval(&minus)?;
    Ok(&tm.adjoint() * &tp)
}

/// Outcome of a Brehmer positivity check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BrehmerOutcome {
    pub lambda_min: f64,
    pub pass: bool,
    pub subset_count: usize,
}

/// The alternating-sum positivity condition at (s, v):
/// sum over u subset of v of (-1)^{|u|} T_{s[u]}^* T_{s[u]} must be PSD.
pub fn brehmer_check(
    family: &SemigroupFamily,
    s: &IndexElement,
    v: &SubsetMask,
) -> Result<BrehmerOutcome> {
    if v.len() > SUBSET_CAP {
        return Err(DilationError::SubsetTooLarge {
            size: v.len(),
            cap: SUBSET_CAP,
        });
    }
    s.require_nonnegative()?;
    let members = v.members();
    let n = members.len();
    let mut sum = ComplexMatrix::zeros(family.dim(), family.dim());
    let mut count = 0usize;
    for bits in 0..(1usize << n) {
        let subset: Vec<usize> = (0..n)
            .filter(|i| bits & (1 << i) != 0)
            .map(|i| members[i])
            .collect();
        let sign = if subset.len() % 2 == 0 { 1.0 } else { -1.0 };
        let u = SubsetMask::new(v.omega_size(), subset)?;
        let su = mask(s, &u)?;
        let tsu = family.eval(&su)?;
        let term = &tsu.adjoint() * &tsu;
        sum = &sum + &term.scale_re(sign);
        count += 1;
    }
    let psd = psd_check(&sum, Tolerance::default())?;
    Ok(BrehmerOutcome {
        lambda_min: psd.lambda_min,
        pass: psd.pass,
        subset_count: count,
    })
}

/// Max over generator pairs of ||T_j T_i* - T_i* T_j||, with verdict at
/// 1e-9 relative to the product of norms.
pub fn doubly_commuting_check(family: &SemigroupFamily) -> Result<Report> {
    let ops = family.generator_ops();
    if ops.len() < 2 {
        return Err(DilationError::EmptyInput {
            context: "doubly_commuting_check needs at least two generators",
        });
    }
    let mut report = Report::new("doubly_commuting");
    for i in 0..ops.len() {
        for j in 0..ops.len() {
            if i == j {
                continue;
            }
            let scale = (ops[i].norm_spectral() * ops[j].norm_spectral()).max(1.0);
            let left = &ops[j] * &ops[i].adjoint();
            let right = &ops[i].adjoint() * &ops[j];
            let residual = (&left - &right).norm_spectral();
            report.push(Check::residual(
                format!("doubly_commuting({j},{i}*)"),
                residual,
                1e-9 * scale,
            ));
        }
    }
    Ok(report)
}

/// The operator-valued kernel Gram over a box: block (s, t) = T-hat(t - s).
///
/// Blocks are computed once per canonical difference and mirrored by
/// adjoints, so the Gram is Hermitian and block-Toeplitz bit-exactly.
#[derive(Debug, Clone)]
pub struct GramOutcome {
    pub gram: ComplexMatrix,
    pub psd: PsdReport,
    /// Cached block per difference (canonical representatives only).
    blocks: BTreeMap<IndexElement, ComplexMatrix>,
}

impl GramOutcome {
    /// The kernel block for an arbitrary difference, if it was needed by
    /// the box.
    pub fn block(&self, diff: &IndexElement) -> Option<ComplexMatrix> {
        if let Some(b) = self.blocks.get(diff) {
            return Some(b.clone());
        }
        self.blocks.get(&diff.neg()).map(|b| b.adjoint())
    }
}

fn canonical_sign(diff: &IndexElement) -> bool {
    // True when the first nonzero coordinate is positive (or diff is zero).
    for j in diff.support() {
        let v = diff.get(j);
        return v > BigRational::from_integer(BigInt::from(0));
    }
    true
}

/// Assemble the kernel Gram over `box_points` and test it for positive
/// semidefiniteness.
pub fn kernel_gram(family: &SemigroupFamily, box_points: &[IndexElement]) -> Result<GramOutcome> {
    if box_points.is_empty() {
        return Err(DilationError::EmptyInput {
            context: "kernel_gram needs a nonempty box",
        });
    }
    let d = family.dim();
    let n = box_points.len();
    let mut blocks: BTreeMap<IndexElement, ComplexMatrix> = BTreeMap::new();
    let mut gram = ComplexMatrix::zeros(n * d, n * d);
    for i in 0..n {
        for j in 0..n {
            let diff = box_points[j].sub(&box_points[i])?;
            let key = if canonical_sign(&diff) {
                diff.clone()
            } else {
                diff.neg()
            };
            if !blocks.contains_key(&key) {
                let value = t_hat(family, &key)?;
                blocks.insert(key.clone(), value);
            }
            let block = if canonical_sign(&diff) {
                blocks[&key].clone()
            } else {
                blocks[&key].adjoint()
            };
            gram.set_block(i * d, j * d, &block);
        }
    }
    let psd = psd_check(&gram, Tolerance::default())?;
    Ok(GramOutcome { gram, psd, blocks })
}

/// Truncated Naimark/GNS dilation bundle over a lattice box.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NaimarkBundle {
    pub box_points: Vec<IndexElement>,
    pub gram: ComplexMatrix,
    /// Frame factor F with F*F = gram (eigenvalues clamped at the rank
    /// cut); the GNS space is its row space.
    pub factor: ComplexMatrix,
    pub dim_h: usize,
    pub gns_dim: usize,
    /// One shift unitary per family generator.
    pub shifts: Vec<ComplexMatrix>,
    pub generator_elements: Vec<IndexElement>,
    /// Differences whose regular-dilation identity is testable in this box.
    pub representable: Vec<IndexElement>,
    pub seed: u64,
    pub residuals: BTreeMap<String, f64>,
}

impl NaimarkBundle {
    fn point_index(&self, s: &IndexElement) -> Result<usize> {
        self.box_points
            .iter()
            .position(|p| p == s)
            .ok_or_else(|| DilationError::InvalidParameter {
                context: format!("point {s} is not in the box"),
            })
    }

    /// Embedding J_s: H -> GNS space (block column of the frame factor).
    pub fn embedding(&self, s: &IndexElement) -> Result<ComplexMatrix> {
        let idx = self.point_index(s)?;
        Ok(self
            .factor
            .sub_matrix(0, self.gns_dim, idx * self.dim_h, (idx + 1) * self.dim_h))
    }

    /// J_0, the isometric embedding of H.
    pub fn j0(&self) -> Result<ComplexMatrix> {
        self.embedding(&IndexElement::zero(self.box_points[0].omega_size()))
    }

    /// U_s = product of generator shifts for s in the positive cone.
    pub fn shift_power(&self, family: &SemigroupFamily, s: &IndexElement) -> Result<ComplexMatrix> {
        let exps = family.exponents(s)?;
        let mut acc = ComplexMatrix::identity(self.gns_dim);
        for (gen_idx, k) in exps {
            for _ in 0..k {
                acc = &self.shifts[gen_idx] * &acc;
            }
        }
        Ok(acc)
    }

    /// The compressed dilation value J_0* U_{s-}* U_{s+} J_0 for a
    /// difference g = s_+ - s_-.
    pub fn dilation_value(
        &self,
        family: &SemigroupFamily,
        g: &IndexElement,
    ) -> Result<ComplexMatrix> {
        let (plus, minus) = pos_neg_parts(g);
        let j0 = self.j0()?;
        let up = &self.shift_power(family, &plus)? * &j0;
        let um = &self.shift_power(family, &minus)? * &j0;
        Ok(&um.adjoint() * &up)
    }

    /// Residual of the regular-dilation identity at g.
    pub fn identity_residual(&self, family: &SemigroupFamily, g: &IndexElement) -> Result<f64> {
        let value = self.dilation_value(family, g)?;
        let expect = t_hat(family, g)?;
        Ok((&value - &expect).norm_spectral())
    }

    /// Max identity residual over the representable set.
    pub fn identity_residual_max(&self, family: &SemigroupFamily) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for g in &self.representable {
            worst = worst.max(self.identity_residual(family, g)?);
        }
        Ok(worst)
    }
}

/// Truncated Naimark construction: factor the kernel Gram, take the block
/// columns as embeddings J_s, and extend the index shifts J_s -> J_{s+a}
/// to unitaries of the GNS space (isometric by the Toeplitz property).
///
/// Fails with the Gram's lambda_min when the kernel is not PSD on the box;
/// by the positivity characterization this is exactly the case where no
/// regular dilation exists.
pub fn naimark_truncated(
    family: &SemigroupFamily,
    box_points: &[IndexElement],
    seed: u64,
) -> Result<NaimarkBundle> {
    let gram_outcome = kernel_gram(family, box_points)?;
    if !gram_outcome.psd.pass {
        return Err(DilationError::GramNotPsd {
            lambda_min: gram_outcome.psd.lambda_min,
        });
    }
    let d = family.dim();
    let n = box_points.len();
    let omega = box_points[0].omega_size();
    let zero = IndexElement::zero(omega);
    if !box_points.contains(&zero) {
        return Err(DilationError::InvalidParameter {
            context: "box must contain the zero element".into(),
        });
    }

    // Rank-revealing factorization gram = F*F with a relative clamp.
    let (values, vectors) = hermitian_eigen(&gram_outcome.gram)?;
    let lambda_max = values.last().copied().unwrap_or(0.0).max(0.0);
    let cut = FACTOR_CLAMP_REL * lambda_max.max(1.0);
    let kept: Vec<usize> = (0..values.len()).filter(|&i| values[i] > cut).collect();
    let r = kept.len();
    let mut factor = ComplexMatrix::zeros(r, n * d);
    for (row, &i) in kept.iter().enumerate() {
        let scale = values[i].sqrt();
        for col in 0..n * d {
            // F = Lambda^{1/2} V*, restricted to the kept eigenvalues.
            let v = vectors.get(col, i).conj();
            factor.set(row, col, v * crate::mat::re(scale));
        }
    }
    let mut residuals = BTreeMap::new();
    residuals.insert(
        "factor_residual".into(),
        (&(&factor.adjoint() * &factor) - &gram_outcome.gram).norm_spectral(),
    );

    let embedding = |idx: usize| factor.sub_matrix(0, r, idx * d, (idx + 1) * d);

    // One shift unitary per generator, extended from the in-box pairs.
    let mut shifts = Vec::new();
    for gen in family.generator_elements() {
        let mut domain_cols = Vec::new();
        let mut image_cols = Vec::new();
        for (i, s) in box_points.iter().enumerate() {
            let shifted = s.add(gen)?;
            if let Some(j) = box_points.iter().position(|p| p == &shifted) {
                domain_cols.push(embedding(i));
                image_cols.push(embedding(j));
            }
        }
        if domain_cols.is_empty() {
            return Err(DilationError::InvalidParameter {
                context: format!("box has no pair s, s+a for generator {gen}"),
            });
        }
        let dom_refs: Vec<&ComplexMatrix> = domain_cols.iter().collect();
        let img_refs: Vec<&ComplexMatrix> = image_cols.iter().collect();
        let domain = ComplexMatrix::hstack(&dom_refs);
        let image = ComplexMatrix::hstack(&img_refs);
        let u = extend_isometry_to_unitary(&domain, &image, r, Tolerance::rank(), seed)?;
        shifts.push(u);
    }

    // Representable differences: both parts in the box's positive cone.
    let cone: Vec<&IndexElement> = box_points.iter().filter(|p| p.is_nonnegative()).collect();
    let mut representable = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for p in &cone {
        for m in &cone {
            let g = p.sub(m)?;
            if seen.insert(g.clone()) {
                representable.push(g);
            }
        }
    }

    let mut bundle = NaimarkBundle {
        box_points: box_points.to_vec(),
        gram: gram_outcome.gram,
        factor,
        dim_h: d,
        gns_dim: r,
        shifts,
        generator_elements: family.generator_elements().to_vec(),
        representable,
        seed,
        residuals,
    };

    let j0 = bundle.j0()?;
    let id_h = ComplexMatrix::identity(d);
    bundle.residuals.insert(
        "j0_isometry".into(),
        (&(&j0.adjoint() * &j0) - &id_h).norm_spectral(),
    );
    let id_r = ComplexMatrix::identity(r);
    for (i, u) in bundle.shifts.iter().enumerate() {
        let res = (&(&u.adjoint() * u) - &id_r).norm_spectral();
        bundle.residuals.insert(format!("shift_unitarity_{i}"), res);
    }
    let worst = bundle.identity_residual_max(family)?;
    bundle
        .residuals
        .insert("identity_residual_max".into(), worst);
    Ok(bundle)
}

/// Restriction of the unitary bundle to the span of the positive-cone
/// embeddings (the isometric regular dilation inside the unitary one).
#[derive(Debug, Clone)]
pub struct IsometricRestriction {
    /// Orthonormal basis of span{J_s : s in box and s >= 0}.
    pub span_basis: ComplexMatrix,
    pub report: Report,
}

/// Restrict the shifts to the positive-cone span: the restrictions are
/// isometries (as maps from the span into the GNS space) and the dilation
/// identities are preserved for representable indices.
pub fn isometric_from_unitary(
    bundle: &NaimarkBundle,
    family: &SemigroupFamily,
) -> Result<IsometricRestriction> {
    let cone_cols: Vec<ComplexMatrix> = bundle
        .box_points
        .iter()
        .enumerate()
        .filter(|(_, p)| p.is_nonnegative())
        .map(|(i, _)| {
            bundle
                .factor
                .sub_matrix(0, bundle.gns_dim, i * bundle.dim_h, (i + 1) * bundle.dim_h)
        })
        .collect();
    let refs: Vec<&ComplexMatrix> = cone_cols.iter().collect();
    let stack = ComplexMatrix::hstack(&refs);
    let span_basis = span_orthonormalize(&stack, Tolerance::rank());

    let mut report = Report::new("isometric_restriction");
    let id = ComplexMatrix::identity(span_basis.cols());
    for (i, u) in bundle.shifts.iter().enumerate() {
        let restricted = u * &span_basis;
        let gramm = &restricted.adjoint() * &restricted;
        report.push(Check::residual(
            format!("isometry_on_span_{i}"),
            (&gramm - &id).norm_spectral(),
            IDENTITY_TOL,
        ));
    }
    report.push(Check::residual(
        "identity_residual_max",
        bundle.identity_residual_max(family)?,
        IDENTITY_TOL,
    ));
    report.push(Check::at_least(
        "span_dim",
        span_basis.cols() as f64,
        bundle.dim_h as f64,
    ));
    Ok(IsometricRestriction { span_basis, report })
}

/// Verify the extension property U_a J_0 = J_0 T_a for an isometric family:
/// a unitary dilation of isometries acts on H exactly as the family does.
pub fn extension_check(bundle: &NaimarkBundle, family: &SemigroupFamily) -> Result<Report> {
    let d = family.dim();
    let id = ComplexMatrix::identity(d);
    for t in family.generator_ops() {
        let res = (&(&t.adjoint() * t) - &id).norm_spectral();
        if res > 1e-10 {
            return Err(DilationError::NotIsometric { residual: res });
        }
    }
    let j0 = bundle.j0()?;
    let mut report = Report::new("extension_check");
    for (i, (u, t)) in bundle
        .shifts
        .iter()
        .zip(family.generator_ops())
        .enumerate()
    {
        let lhs = u * &j0;
        let rhs = &j0 * t;
        report.push(Check::residual(
            format!("extension_{i}"),
            (&lhs - &rhs).norm_spectral(),
            IDENTITY_TOL,
        ));
    }
    Ok(report)
}

/// Regular unitary dilation of a coisometric family via its adjoints.
///
/// The adjoint family consists of isometries, whose kernel Gram is always
/// PSD; the returned bundle W dilates {T_s*}, so U_s := W_s* satisfies the
/// two-sided identity with the products T_{s-} T_{s+}*, and W extends the
/// adjoint family (checked). The span property K = span of U_s H is
/// measured on the box.
pub fn coisometric_dilation(
    family: &SemigroupFamily,
    box_points: &[IndexElement],
    seed: u64,
) -> Result<(NaimarkBundle, Report)> {
    let d = family.dim();
    let id = ComplexMatrix::identity(d);
    for t in family.generator_ops() {
        let res = (&(t * &t.adjoint()) - &id).norm_spectral();
        if res > 1e-10 {
            return Err(DilationError::NotCoisometric { residual: res });
        }
    }
    let adjoint_family = family.adjoint_family();
    let bundle = naimark_truncated(&adjoint_family, box_points, seed)?;
    let mut report = extension_check(&bundle, &adjoint_family)?;
    report.label = "coisometric_dilation".into();

    // Item (1): J_0* W_{s-}* W_{s+} J_0 = (T*)_{s-}* (T*)_{s+}
    //         = T_{s-} T_{s+}*, measured over the representable set.
    let mut worst: f64 = 0.0;
    for g in &bundle.representable {
        let value = bundle.dilation_value(&adjoint_family, g)?;
        let (plus, minus) = pos_neg_parts(g);
        let expect = &family.eval(&minus)? * &family.eval(&plus)?.adjoint();
        worst = worst.max((&value - &expect).norm_spectral());
    }
    report.push(Check::residual(
        "two_sided_identity_max",
        worst,
        IDENTITY_TOL,
    ));

    // Item (2): the U_s H span the GNS space over the box.
    let mut cols = Vec::new();
    let j0 = bundle.j0()?;
    for p in box_points.iter().filter(|p| p.is_nonnegative()) {
        // U_s = W_s*.
        let u = bundle.shift_power(&adjoint_family, p)?.adjoint();
        cols.push(&u * &j0);
    }
    let refs: Vec<&ComplexMatrix> = cols.iter().collect();
    let span = span_orthonormalize(&ComplexMatrix::hstack(&refs), Tolerance::rank());
    report.push(Check::at_least(
        "span_property",
        span.cols() as f64,
        bundle.gns_dim as f64,
    ));
    Ok((bundle, report))
}

/// Eigenvalue-1 gaps of the family generators (diagnostic for unitary
/// corpora).
pub fn unitary_family_gap(family: &SemigroupFamily, gap_tol: Tolerance) -> Result<Report> {
    let mut report = Report::new("unitary_family_gap");
    for (i, t) in family.generator_ops().iter().enumerate() {
        let gap = eigenvalue_one_check(t, gap_tol)?;
        report.push(Check::at_least(
            format!("eigen_gap_{i}"),
            gap.distance,
            gap_tol.value(),
        ));
    }
    Ok(report)
}

/// Product box spanned by the family's generators up to `depth`.
pub fn family_box(
    family: &SemigroupFamily,
    depth: usize,
    signed: bool,
) -> Result<Vec<IndexElement>> {
    let _ = commensurable_reduce(family.generator_elements())?;
    group_box(family.generator_elements(), depth, signed)
}
