//! Entropy diagnostics along a trajectory: joint von Neumann entropies of
//! subsystem groups, the strong-subadditivity parameter
//! E = S(A,B) + S(A,n) - S(A,B,n) - S(A), the index of correlation, the
//! Araki-Lieb bounds, conditional entropy, mutual information, and the
//! matrix-logarithm identity that characterizes when E = 0 exactly.
//!
//! All entropies are in bits. The trio entering E is atom A, atom B, and
//! cavity mode a.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::dynamics::TrajectoryFrame;
use crate::error::{Error, Result};
use crate::qstate::{
    partial_trace, pure_density, support_log2, support_projector, von_neumann_entropy,
    ComplexMatrix, LabeledDensityMatrix, SiteLabel, StateVector, SubsystemId,
};

/// E values above this are counted as satisfying the inequality.
pub const SSI_TOL: f64 = 1e-9;

/// Entropy diagnostics of one trajectory frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    /// Dimensionless time of the frame.
    pub s: f64,
    /// S(A), atom A alone.
    pub s_a: f64,
    /// S(A,B), both atoms.
    pub s_ab: f64,
    /// S(A,n), atom A with cavity mode a.
    pub s_an: f64,
    /// S(A,B,n), both atoms with cavity mode a.
    pub s_abn: f64,
    /// E = S(A,B) + S(A,n) - S(A,B,n) - S(A).
    pub e: f64,
    /// Index of correlation of the two atoms, S(A) + S(B) - S(A,B).
    pub ic_ab: f64,
    pub araki_lieb_ok: bool,
    pub ssi_ok: bool,
}

/// Araki-Lieb bounds |S(A)-S(B)| <= S(A,B) <= S(A)+S(B) for one pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArakiLiebCheck {
    pub lower: f64,
    pub joint: f64,
    pub upper: f64,
    pub ok: bool,
}

/// Entropy of the reduction of `rho` to `keep` (the identity reduction when
/// `keep` covers every subsystem).
pub fn reduced_entropy(rho: &LabeledDensityMatrix, keep: &[SubsystemId]) -> Result<f64> {
    validate_subset(rho.subsystems(), keep)?;
    if keep.len() == rho.subsystems().len() {
        return von_neumann_entropy(rho);
    }
    von_neumann_entropy(&partial_trace(rho, keep)?)
}

/// Projector density of a frame's state. The integrator keeps the norm
/// within 1e-7, looser than the projector's own tolerance, so normalize
/// first; a global rescaling changes no entropy.
pub fn frame_density(frame: &TrajectoryFrame) -> Result<LabeledDensityMatrix> {
    pure_density(&frame.state.normalized())
}

/// Joint entropy of a subsystem group on one frame.
pub fn joint_entropy(frame: &TrajectoryFrame, subsystems: &[SubsystemId]) -> Result<f64> {
    reduced_entropy(&frame_density(frame)?, subsystems)
}

/// All entropy diagnostics of one frame, with the trio (atom A, atom B,
/// mode a).
pub fn ssi_parameter(frame: &TrajectoryFrame) -> Result<EntropyReport> {
    use SubsystemId::{AtomA, AtomB, ModeA};
    let rho = frame_density(frame)?;

    let s_a = reduced_entropy(&rho, &[AtomA])?;
    let s_b = reduced_entropy(&rho, &[AtomB])?;
    let s_ab = reduced_entropy(&rho, &[AtomA, AtomB])?;
    let s_an = reduced_entropy(&rho, &[AtomA, ModeA])?;
    let s_abn = reduced_entropy(&rho, &[AtomA, AtomB, ModeA])?;

    let e = s_ab + s_an - s_abn - s_a;
    let ic_ab = s_a + s_b - s_ab;
    let lower = (s_a - s_b).abs();
    let upper = s_a + s_b;
    let araki_lieb_ok = lower <= s_ab + SSI_TOL && s_ab <= upper + SSI_TOL;

    Ok(EntropyReport {
        s: frame.s,
        s_a,
        s_ab,
        s_an,
        s_abn,
        e,
        ic_ab,
        araki_lieb_ok,
        ssi_ok: e >= -SSI_TOL,
    })
}

/// E for an arbitrary three-subsystem density matrix with the roles
/// (first, middle, last) of the inequality assigned explicitly.
pub fn ssi_parameter_of(
    rho: &LabeledDensityMatrix,
    partition: (SubsystemId, SubsystemId, SubsystemId),
) -> Result<f64> {
    let (a, b, c) = partition;
    validate_partition(rho, partition)?;
    let s_ab = reduced_entropy(rho, &[a, b])?;
    let s_ac = reduced_entropy(rho, &[a, c])?;
    let s_abc = von_neumann_entropy(rho)?;
    let s_a = reduced_entropy(rho, &[a])?;
    Ok(s_ab + s_ac - s_abc - s_a)
}

/// Index of correlation S(first) + S(second) - S(first, second) of two
/// subsystems on one frame.
pub fn index_of_correlation(
    frame: &TrajectoryFrame,
    pair: (SubsystemId, SubsystemId),
) -> Result<f64> {
    mutual_information(frame, &[pair.0], &[pair.1])
}

/// Araki-Lieb bounds for one pair of subsystems on one frame.
pub fn araki_lieb_check(
    frame: &TrajectoryFrame,
    pair: (SubsystemId, SubsystemId),
) -> Result<ArakiLiebCheck> {
    let rho = frame_density(frame)?;
    let s_first = reduced_entropy(&rho, &[pair.0])?;
    let s_second = reduced_entropy(&rho, &[pair.1])?;
    let joint = reduced_entropy(&rho, &[pair.0, pair.1])?;
    let lower = (s_first - s_second).abs();
    let upper = s_first + s_second;
    Ok(ArakiLiebCheck {
        lower,
        joint,
        upper,
        ok: lower <= joint + SSI_TOL && joint <= upper + SSI_TOL,
    })
}

/// Conditional entropy S(target | given) = S(target, given) - S(given) on a
/// frame; `target` and `given` must be disjoint and non-empty.
pub fn conditional_entropy(
    frame: &TrajectoryFrame,
    target: &[SubsystemId],
    given: &[SubsystemId],
) -> Result<f64> {
    conditional_entropy_of(&frame_density(frame)?, target, given)
}

/// Conditional entropy on an arbitrary density matrix.
pub fn conditional_entropy_of(
    rho: &LabeledDensityMatrix,
    target: &[SubsystemId],
    given: &[SubsystemId],
) -> Result<f64> {
    let union = disjoint_union(rho.subsystems(), target, given)?;
    Ok(reduced_entropy(rho, &union)? - reduced_entropy(rho, given)?)
}

/// Mutual information S(first : second) = S(first) + S(second)
/// - S(first, second) on a frame; the groups must be disjoint and non-empty.
pub fn mutual_information(
    frame: &TrajectoryFrame,
    first: &[SubsystemId],
    second: &[SubsystemId],
) -> Result<f64> {
    mutual_information_of(&frame_density(frame)?, first, second)
}

/// Mutual information on an arbitrary density matrix.
pub fn mutual_information_of(
    rho: &LabeledDensityMatrix,
    first: &[SubsystemId],
    second: &[SubsystemId],
) -> Result<f64> {
    let union = disjoint_union(rho.subsystems(), first, second)?;
    Ok(
        reduced_entropy(rho, first)? + reduced_entropy(rho, second)?
            - reduced_entropy(rho, &union)?,
    )
}

/// Defect of the logarithmic identity
/// log2(rho_ABC) - log2(rho_AB) = log2(rho_BC) - log2(rho_B),
/// with each reduced logarithm lifted back to the three-subsystem space by
/// tensoring identity on the absent factors. Both sides are compared on the
/// support of rho_ABC (the identity is stated for invertible matrices; the
/// kernel carries no probability). A vanishing defect is exactly the
/// condition for E = 0.
pub fn equality_condition_residual(
    rho: &LabeledDensityMatrix,
    partition: (SubsystemId, SubsystemId, SubsystemId),
) -> Result<f64> {
    let (a, b, c) = partition;
    validate_partition(rho, partition)?;

    let log_abc = support_log2(rho)?;
    let lift_ab = Lifted::log_of(rho, &[a, b])?;
    let lift_bc = Lifted::log_of(rho, &[b, c])?;
    let lift_b = Lifted::log_of(rho, &[b])?;

    let n = rho.dim();
    let labels = rho.labels();
    let mut diff = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            diff[(i, j)] = log_abc[(i, j)]
                - lift_ab.entry(&labels[i], &labels[j])
                - lift_bc.entry(&labels[i], &labels[j])
                + lift_b.entry(&labels[i], &labels[j]);
        }
    }
    let projector = support_projector(rho)?;
    Ok(projector.mul(&diff).mul(&projector).max_abs())
}

/// The four-qubit GHZ state (|0000> + |1111>)/sqrt(2), with the qubits
/// riding on the four subsystem ids.
pub fn ghz_state() -> StateVector {
    let bit = |b: u8| SiteLabel::Bit(b);
    let amp = Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0);
    StateVector::new(
        SubsystemId::ALL.to_vec(),
        vec![
            vec![bit(0), bit(0), bit(0), bit(0)],
            vec![bit(1), bit(1), bit(1), bit(1)],
        ],
        vec![amp, amp],
    )
    .expect("GHZ state is structurally valid")
}

/// The GHZ state with its last qubit traced out: the classically correlated
/// mixture (|000><000| + |111><111|)/2 over three qubit subsystems.
pub fn ghz_reduced_density() -> LabeledDensityMatrix {
    let rho = pure_density(&ghz_state()).expect("GHZ state is normalized");
    partial_trace(
        &rho,
        &[SubsystemId::AtomA, SubsystemId::AtomB, SubsystemId::ModeA],
    )
    .expect("three of four subsystems is a valid keep set")
}

/// A reduced-matrix operator delta-lifted back to the parent label space:
/// matrix elements match on the kept factors and require equal labels on the
/// discarded ones.
struct Lifted {
    op: ComplexMatrix,
    index: HashMap<Vec<SiteLabel>, usize>,
    keep_positions: Vec<usize>,
    drop_positions: Vec<usize>,
}

impl Lifted {
    fn log_of(rho: &LabeledDensityMatrix, keep: &[SubsystemId]) -> Result<Self> {
        let reduced = partial_trace(rho, keep)?;
        let op = support_log2(&reduced)?;
        Ok(Self::over(rho, &reduced, op))
    }

    #[cfg(test)]
    fn projector_of(rho: &LabeledDensityMatrix, keep: &[SubsystemId]) -> Result<Self> {
        let reduced = partial_trace(rho, keep)?;
        let op = support_projector(&reduced)?;
        Ok(Self::over(rho, &reduced, op))
    }

    fn over(rho: &LabeledDensityMatrix, reduced: &LabeledDensityMatrix, op: ComplexMatrix) -> Self {
        let keep_positions: Vec<usize> = reduced
            .subsystems()
            .iter()
            .map(|id| {
                rho.subsystems()
                    .iter()
                    .position(|s| s == id)
                    .expect("reduced subsystems come from the parent")
            })
            .collect();
        let drop_positions: Vec<usize> = (0..rho.subsystems().len())
            .filter(|p| !keep_positions.contains(p))
            .collect();
        let index = reduced
            .labels()
            .iter()
            .cloned()
            .zip(0..)
            .collect::<HashMap<_, _>>();
        Self {
            op,
            index,
            keep_positions,
            drop_positions,
        }
    }

    fn entry(&self, row: &[SiteLabel], col: &[SiteLabel]) -> Complex64 {
        for &p in &self.drop_positions {
            if row[p] != col[p] {
                return Complex64::ZERO;
            }
        }
        let project = |tuple: &[SiteLabel]| -> Vec<SiteLabel> {
            self.keep_positions.iter().map(|&p| tuple[p]).collect()
        };
        match (self.index.get(&project(row)), self.index.get(&project(col))) {
            (Some(&i), Some(&j)) => self.op[(i, j)],
            // labels outside the reduced matrix lie in its kernel, where the
            // support-restricted operators vanish
            _ => Complex64::ZERO,
        }
    }
}

fn validate_subset(all: &[SubsystemId], subset: &[SubsystemId]) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::InvalidSubsets("subset must be non-empty".into()));
    }
    for (i, id) in subset.iter().enumerate() {
        if !all.contains(id) {
            return Err(Error::UnknownSubsystem(id.to_string()));
        }
        if subset[..i].contains(id) {
            return Err(Error::InvalidSubsets(format!("{id} listed twice")));
        }
    }
    Ok(())
}

fn disjoint_union(
    all: &[SubsystemId],
    first: &[SubsystemId],
    second: &[SubsystemId],
) -> Result<Vec<SubsystemId>> {
    validate_subset(all, first)?;
    validate_subset(all, second)?;
    if first.iter().any(|id| second.contains(id)) {
        return Err(Error::InvalidSubsets(
            "the two subsystem groups must be disjoint".into(),
        ));
    }
    let mut union = first.to_vec();
    union.extend_from_slice(second);
    Ok(union)
}

fn validate_partition(
    rho: &LabeledDensityMatrix,
    partition: (SubsystemId, SubsystemId, SubsystemId),
) -> Result<()> {
    let (a, b, c) = partition;
    let roles = [a, b, c];
    if a == b || b == c || a == c {
        return Err(Error::LabelMismatch(
            "partition must name three distinct subsystems".into(),
        ));
    }
    if rho.subsystems().len() != 3 {
        return Err(Error::LabelMismatch(format!(
            "expected a three-subsystem density matrix, found {} subsystems",
            rho.subsystems().len()
        )));
    }
    for id in roles {
        if !rho.subsystems().contains(&id) {
            return Err(Error::LabelMismatch(format!(
                "partition names {id}, which the density matrix does not carry"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{evolve, initial_state, TimeGrid, TrajectoryFrame};
    use crate::model::ModelParams;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use SubsystemId::{AtomA, AtomB, ModeA, ModeB};

    fn reference_params(delta_tau: f64) -> ModelParams {
        ModelParams::new(2, 0, 15.0, 15.0, 4.0 / 3.0, delta_tau).unwrap()
    }

    fn initial_frame(params: &ModelParams) -> TrajectoryFrame {
        let state = initial_state(params).unwrap();
        TrajectoryFrame {
            s: -3.0,
            state,
            dark_overlap: None,
            g1_tau: 0.0,
            g2_tau: 0.0,
        }
    }

    #[test]
    fn full_group_entropy_vanishes_for_pure_states() {
        let frame = initial_frame(&reference_params(0.0));
        let s = joint_entropy(&frame, &SubsystemId::ALL).unwrap();
        assert!(s < 1e-12);
    }

    #[test]
    fn product_state_has_no_atomic_entropy() {
        let frame = initial_frame(&reference_params(0.0));
        assert!(joint_entropy(&frame, &[AtomA, AtomB]).unwrap() < 1e-12);
    }

    #[test]
    fn complementary_groups_have_equal_entropy() {
        let params = reference_params(0.0);
        let grid = TimeGrid::new(-3.0, params.t_over_tau + 3.0, 3000, 500).unwrap();
        for frame in evolve(&params, &grid).unwrap() {
            let atoms = joint_entropy(&frame, &[AtomA, AtomB]).unwrap();
            let modes = joint_entropy(&frame, &[ModeA, ModeB]).unwrap();
            assert!((atoms - modes).abs() < 1e-9);
        }
    }

    #[test]
    fn product_frame_report_is_all_zero() {
        let report = ssi_parameter(&initial_frame(&reference_params(0.0))).unwrap();
        assert!(report.s_a < 1e-12);
        assert!(report.s_ab < 1e-12);
        assert!(report.s_an < 1e-12);
        assert!(report.s_abn < 1e-12);
        assert!(report.e.abs() < 1e-9);
        assert!(report.ic_ab.abs() < 1e-9);
        assert!(report.ssi_ok);
        assert!(report.araki_lieb_ok);
    }

    #[test]
    fn report_identity_holds_by_construction() {
        let params = reference_params(60.0);
        let grid = TimeGrid::new(-3.0, params.t_over_tau + 3.0, 2000, 250).unwrap();
        for frame in evolve(&params, &grid).unwrap() {
            let r = ssi_parameter(&frame).unwrap();
            assert_eq!(r.e, r.s_ab + r.s_an - r.s_abn - r.s_a);
            assert_eq!(r.ssi_ok, r.e >= -SSI_TOL);
        }
    }

    #[test]
    fn index_of_correlation_bounds() {
        let params = reference_params(0.0);
        let grid = TimeGrid::new(-3.0, params.t_over_tau + 3.0, 2000, 200).unwrap();
        for frame in evolve(&params, &grid).unwrap() {
            let rho = frame_density(&frame).unwrap();
            let ic = index_of_correlation(&frame, (AtomA, AtomB)).unwrap();
            let s_a = reduced_entropy(&rho, &[AtomA]).unwrap();
            let s_b = reduced_entropy(&rho, &[AtomB]).unwrap();
            assert!(ic >= -1e-9);
            assert!(ic <= 2.0 * s_a.min(s_b) + 1e-9);
        }
    }

    #[test]
    fn araki_lieb_on_product_frame() {
        let check = araki_lieb_check(&initial_frame(&reference_params(0.0)), (AtomA, AtomB)).unwrap();
        assert!(check.lower < 1e-12);
        assert!(check.joint < 1e-12);
        assert!(check.upper < 1e-12);
        assert!(check.ok);
    }

    #[test]
    fn conditional_entropy_of_product_frame_is_zero() {
        let frame = initial_frame(&reference_params(0.0));
        let value = conditional_entropy(&frame, &[AtomA], &[AtomB, ModeA]).unwrap();
        assert!(value.abs() < 1e-12);
    }

    #[test]
    fn mutual_information_equals_index_of_correlation_for_singletons() {
        let params = reference_params(0.0);
        let grid = TimeGrid::new(-3.0, params.t_over_tau + 3.0, 1500, 300).unwrap();
        for frame in evolve(&params, &grid).unwrap() {
            let mi = mutual_information(&frame, &[AtomA], &[AtomB]).unwrap();
            let ic = index_of_correlation(&frame, (AtomA, AtomB)).unwrap();
            assert!((mi - ic).abs() < 1e-14);
        }
    }

    #[test]
    fn subset_validation_rejects_overlap_and_empty() {
        let frame = initial_frame(&reference_params(0.0));
        assert!(mutual_information(&frame, &[AtomA], &[AtomA]).is_err());
        assert!(conditional_entropy(&frame, &[], &[AtomB]).is_err());
        assert!(joint_entropy(&frame, &[AtomA, AtomA]).is_err());
    }

    #[test]
    fn ghz_reduction_entropies_are_one_bit() {
        let rho = ghz_reduced_density();
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-15);
        let s_abc = von_neumann_entropy(&rho).unwrap();
        let s_a = reduced_entropy(&rho, &[AtomA]).unwrap();
        let s_ab = reduced_entropy(&rho, &[AtomA, AtomB]).unwrap();
        let s_bc = reduced_entropy(&rho, &[AtomB, ModeA]).unwrap();
        for s in [s_abc, s_a, s_ab, s_bc] {
            assert!((s - 1.0).abs() < 1e-12);
        }
        let e = ssi_parameter_of(&rho, (AtomA, AtomB, ModeA)).unwrap();
        assert!(e.abs() < 1e-12);
    }

    #[test]
    fn ghz_conditional_entropy_and_mutual_information() {
        let rho = ghz_reduced_density();
        // S(A|B) = S(A,B) - S(B) = 1 - 1 = 0
        let cond = conditional_entropy_of(&rho, &[AtomA], &[AtomB]).unwrap();
        assert!(cond.abs() < 1e-12);
        // S(A:B) = 1 + 1 - 1 = 1
        let mi = mutual_information_of(&rho, &[AtomA], &[AtomB]).unwrap();
        assert!((mi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ghz_satisfies_the_log_identity() {
        let rho = ghz_reduced_density();
        let residual = equality_condition_residual(&rho, (AtomA, AtomB, ModeA)).unwrap();
        assert!(residual <= 1e-9, "residual = {residual}");
    }

    #[test]
    fn product_of_maximally_mixed_qubits_satisfies_the_log_identity() {
        let rho = mixed_qubit_product();
        let residual = equality_condition_residual(&rho, (AtomA, AtomB, ModeA)).unwrap();
        assert!(residual <= 1e-9, "residual = {residual}");
    }

    #[test]
    fn random_correlated_state_violates_the_log_identity() {
        let rho = random_three_qubit_mixed(97);
        let residual = equality_condition_residual(&rho, (AtomA, AtomB, ModeA)).unwrap();
        assert!(residual > 0.1, "residual = {residual}");
    }

    #[test]
    fn log_identity_rejects_mismatched_partitions() {
        let rho = ghz_reduced_density();
        assert!(equality_condition_residual(&rho, (AtomA, AtomB, ModeB)).is_err());
        assert!(equality_condition_residual(&rho, (AtomA, AtomA, ModeA)).is_err());
    }

    #[test]
    fn reduced_supports_contain_the_parent_support() {
        // the comparison in the log identity is only meaningful if the
        // support of rho_ABC sits inside every lifted reduced support
        for rho in [
            ghz_reduced_density(),
            mixed_qubit_product(),
            random_three_qubit_mixed(5),
        ] {
            let projector = support_projector(&rho).unwrap();
            let n = rho.dim();
            let labels = rho.labels();
            for keep in [vec![AtomA, AtomB], vec![AtomB, ModeA], vec![AtomB]] {
                let lifted = Lifted::projector_of(&rho, &keep).unwrap();
                let mut lifted_mat = ComplexMatrix::zeros(n);
                for i in 0..n {
                    for j in 0..n {
                        lifted_mat[(i, j)] = lifted.entry(&labels[i], &labels[j]);
                    }
                }
                // P (lifted) P = P exactly when supp(P) is inside the lifted support
                let sandwich = projector.mul(&lifted_mat).mul(&projector);
                assert!(
                    sandwich.sub(&projector).max_abs() < 1e-9,
                    "support not contained for keep = {keep:?}"
                );
            }
        }
    }

    fn mixed_qubit_product() -> LabeledDensityMatrix {
        let bit = |b: usize| SiteLabel::Bit(b as u8);
        let labels: Vec<Vec<SiteLabel>> = (0..8)
            .map(|k| vec![bit((k >> 2) & 1), bit((k >> 1) & 1), bit(k & 1)])
            .collect();
        LabeledDensityMatrix::new(
            vec![AtomA, AtomB, ModeA],
            labels,
            ComplexMatrix::from_diagonal(&[0.125; 8]),
        )
        .unwrap()
    }

    fn random_three_qubit_mixed(seed: u64) -> LabeledDensityMatrix {
        let mut rng = StdRng::seed_from_u64(seed);
        let bit = |b: usize| SiteLabel::Bit(b as u8);
        let labels: Vec<Vec<SiteLabel>> = (0..8)
            .map(|k| vec![bit((k >> 2) & 1), bit((k >> 1) & 1), bit(k & 1)])
            .collect();
        let mut g = ComplexMatrix::zeros(8);
        for i in 0..8 {
            for j in 0..8 {
                g[(i, j)] =
                    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            }
        }
        let mut rho = g.mul(&g.adjoint());
        let trace = rho.trace().re;
        rho = rho.scale(Complex64::new(1.0 / trace, 0.0));
        LabeledDensityMatrix::new(vec![AtomA, AtomB, ModeA], labels, rho).unwrap()
    }
}
