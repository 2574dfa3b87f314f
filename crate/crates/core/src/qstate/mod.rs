//! Quantum-state primitives: labeled state vectors, pure-state density
//! matrices, partial traces over named subsystems, von Neumann entropy, and
//! the base-2 matrix logarithm restricted to the support.
//!
//! States are labeled rather than embedded in a full tensor-product space:
//! each basis vector carries one label per subsystem, and reduced matrices
//! are built over the label set actually occupied by the state. The dynamics
//! of this crate never leaves a nine-dimensional subspace, so occupied labels
//! are all that is ever needed.

mod eigen;
mod matrix;

pub use eigen::{hermitian_eigensystem, HERMITICITY_TOL};
pub use matrix::ComplexMatrix;

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Normalization tolerance for state vectors entering `pure_density`.
pub const NORM_TOL: f64 = 1e-9;

/// Trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-9;

/// Eigenvalues below this contribute nothing to the entropy (continuity of
/// x log x at zero).
pub const ENTROPY_CUTOFF: f64 = 1e-12;

/// Eigenvalues below this are treated as exact zeros when restricting the
/// matrix logarithm to the support.
pub const SUPPORT_CUTOFF: f64 = 1e-10;

/// Eigenvalues below this are a hard error (non-physical state); anything in
/// `[-EIGENVALUE_FLOOR, 0)` is clipped to zero as partial-trace roundoff.
pub const EIGENVALUE_FLOOR: f64 = 1e-6;

/// One of the four tensor factors of the model: two atoms and two cavity
/// modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubsystemId {
    AtomA,
    AtomB,
    ModeA,
    ModeB,
}

impl SubsystemId {
    /// The canonical factor ordering used throughout the crate.
    pub const ALL: [SubsystemId; 4] = [
        SubsystemId::AtomA,
        SubsystemId::AtomB,
        SubsystemId::ModeA,
        SubsystemId::ModeB,
    ];
}

impl fmt::Display for SubsystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SubsystemId::AtomA => "atom A",
            SubsystemId::AtomB => "atom B",
            SubsystemId::ModeA => "mode a",
            SubsystemId::ModeB => "mode b",
        };
        write!(f, "{name}")
    }
}

/// Level of a three-level atom in the lambda configuration: two stable lower
/// levels `g`, `f` and the excited level `e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomLevel {
    G,
    E,
    F,
}

impl fmt::Display for AtomLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            AtomLevel::G => 'g',
            AtomLevel::E => 'e',
            AtomLevel::F => 'f',
        };
        write!(f, "{c}")
    }
}

/// Label of one tensor factor in a basis state: an atomic level, a photon
/// number, or a bare qubit value (used by the GHZ constructions).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SiteLabel {
    Level(AtomLevel),
    Photons(u32),
    Bit(u8),
}

impl fmt::Display for SiteLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SiteLabel::Level(l) => write!(f, "{l}"),
            SiteLabel::Photons(n) => write!(f, "{n}"),
            SiteLabel::Bit(b) => write!(f, "{b}"),
        }
    }
}

/// Pure state expressed over an explicit list of labeled basis vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    subsystems: Vec<SubsystemId>,
    labels: Vec<Vec<SiteLabel>>,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Build a state from per-basis-vector labels and amplitudes. The labels
    /// must be pairwise distinct tuples, one per amplitude, each naming every
    /// subsystem once.
    pub fn new(
        subsystems: Vec<SubsystemId>,
        labels: Vec<Vec<SiteLabel>>,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self> {
        if labels.len() != amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                actual: amplitudes.len(),
            });
        }
        for tuple in &labels {
            if tuple.len() != subsystems.len() {
                return Err(Error::DimensionMismatch {
                    expected: subsystems.len(),
                    actual: tuple.len(),
                });
            }
        }
        check_distinct(&labels)?;
        Ok(Self {
            subsystems,
            labels,
            amplitudes,
        })
    }

    pub fn subsystems(&self) -> &[SubsystemId] {
        &self.subsystems
    }

    pub fn labels(&self) -> &[Vec<SiteLabel>] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Population |amplitude|^2 of one basis vector.
    pub fn population(&self, index: usize) -> f64 {
        self.amplitudes[index].norm_sqr()
    }

    /// <self|other> for states over the same basis, in the same order.
    pub fn overlap(&self, other: &StateVector) -> Result<Complex64> {
        if self.labels != other.labels {
            return Err(Error::LabelMismatch(
                "overlap requires identical basis labels".into(),
            ));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Copy with amplitudes rescaled to unit norm.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        let mut out = self.clone();
        if n > 0.0 {
            for a in out.amplitudes.iter_mut() {
                *a /= n;
            }
        }
        out
    }

    /// Copy with the given amplitudes over the same basis.
    pub fn with_amplitudes(&self, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::new(self.subsystems.clone(), self.labels.clone(), amplitudes)
    }
}

/// Hermitian, unit-trace matrix whose rows and columns carry per-subsystem
/// label tuples, so that any subset of subsystems can be traced out by label
/// matching.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDensityMatrix {
    subsystems: Vec<SubsystemId>,
    labels: Vec<Vec<SiteLabel>>,
    matrix: ComplexMatrix,
}

impl LabeledDensityMatrix {
    pub fn new(
        subsystems: Vec<SubsystemId>,
        labels: Vec<Vec<SiteLabel>>,
        matrix: ComplexMatrix,
    ) -> Result<Self> {
        if labels.len() != matrix.dim() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                actual: matrix.dim(),
            });
        }
        for tuple in &labels {
            if tuple.len() != subsystems.len() {
                return Err(Error::DimensionMismatch {
                    expected: subsystems.len(),
                    actual: tuple.len(),
                });
            }
        }
        check_distinct(&labels)?;

        let tolerance = HERMITICITY_TOL * (1.0 + matrix.max_abs());
        let (defect, row, col) = matrix.hermiticity_defect();
        if defect > tolerance {
            return Err(Error::NotHermitian {
                row,
                col,
                deviation: defect,
                tolerance,
            });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::TraceNotOne {
                trace: trace.re,
                tolerance: TRACE_TOL,
            });
        }
        Ok(Self {
            subsystems,
            labels,
            matrix,
        })
    }

    pub fn subsystems(&self) -> &[SubsystemId] {
        &self.subsystems
    }

    pub fn labels(&self) -> &[Vec<SiteLabel>] {
        &self.labels
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    fn position_of(&self, id: SubsystemId) -> Result<usize> {
        self.subsystems
            .iter()
            .position(|&s| s == id)
            .ok_or_else(|| Error::UnknownSubsystem(id.to_string()))
    }
}

fn check_distinct(labels: &[Vec<SiteLabel>]) -> Result<()> {
    let mut seen: HashMap<&[SiteLabel], usize> = HashMap::new();
    for (i, tuple) in labels.iter().enumerate() {
        if let Some(&first) = seen.get(tuple.as_slice()) {
            return Err(Error::DuplicateLabel { first, second: i });
        }
        seen.insert(tuple.as_slice(), i);
    }
    Ok(())
}

/// Projector |psi><psi| of a normalized pure state, carrying its labels.
pub fn pure_density(psi: &StateVector) -> Result<LabeledDensityMatrix> {
    let norm = psi.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized {
            norm,
            tolerance: NORM_TOL,
        });
    }
    let matrix = ComplexMatrix::outer(psi.amplitudes());
    LabeledDensityMatrix::new(psi.subsystems().to_vec(), psi.labels().to_vec(), matrix)
}

/// Reduced density matrix over `keep`, obtained by summing matrix entries
/// whose discarded labels match exactly. `keep` must be a non-empty proper
/// subset of the state's subsystems; the result orders its factors as they
/// appear in the input.
pub fn partial_trace(
    rho: &LabeledDensityMatrix,
    keep: &[SubsystemId],
) -> Result<LabeledDensityMatrix> {
    if keep.is_empty() || keep.len() >= rho.subsystems.len() {
        return Err(Error::InvalidKeepSet);
    }
    let mut keep_positions = Vec::with_capacity(keep.len());
    for (pos, id) in rho.subsystems.iter().enumerate() {
        if keep.contains(id) {
            keep_positions.push(pos);
        }
    }
    if keep_positions.len() != keep.len() {
        // either an id not present in the state, or a duplicate in `keep`
        for id in keep {
            rho.position_of(*id)?;
        }
        return Err(Error::InvalidKeepSet);
    }
    let drop_positions: Vec<usize> = (0..rho.subsystems.len())
        .filter(|p| !keep_positions.contains(p))
        .collect();

    let project = |tuple: &[SiteLabel], positions: &[usize]| -> Vec<SiteLabel> {
        positions.iter().map(|&p| tuple[p]).collect()
    };

    // Output labels: distinct keep-projections in first-occurrence order.
    let mut out_labels: Vec<Vec<SiteLabel>> = Vec::new();
    let mut out_index: HashMap<Vec<SiteLabel>, usize> = HashMap::new();
    let mut row_to_out = Vec::with_capacity(rho.dim());
    for tuple in &rho.labels {
        let kept = project(tuple, &keep_positions);
        let idx = *out_index.entry(kept.clone()).or_insert_with(|| {
            out_labels.push(kept.clone());
            out_labels.len() - 1
        });
        row_to_out.push(idx);
    }

    // Group rows by their discarded labels; only rows within a group
    // contribute, since mismatched discarded labels are orthogonal. Groups
    // are kept in first-occurrence order so the floating-point accumulation
    // order, and with it the output, is reproducible run to run.
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut group_index: HashMap<Vec<SiteLabel>, usize> = HashMap::new();
    for (row, tuple) in rho.labels.iter().enumerate() {
        let key = project(tuple, &drop_positions);
        let idx = *group_index.entry(key).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[idx].push(row);
    }

    let mut out = ComplexMatrix::zeros(out_labels.len());
    for rows in &groups {
        for &i in rows {
            for &j in rows {
                let (a, b) = (row_to_out[i], row_to_out[j]);
                out[(a, b)] += rho.matrix[(i, j)];
            }
        }
    }

    let out_subsystems: Vec<SubsystemId> =
        keep_positions.iter().map(|&p| rho.subsystems[p]).collect();
    LabeledDensityMatrix::new(out_subsystems, out_labels, out)
}

/// Von Neumann entropy -Tr(rho log2 rho) in bits.
///
/// Eigenvalues below `-EIGENVALUE_FLOOR` are rejected as non-physical; tiny
/// negatives from partial-trace roundoff are clipped to zero.
pub fn von_neumann_entropy(rho: &LabeledDensityMatrix) -> Result<f64> {
    let (eigenvalues, _) = hermitian_eigensystem(&rho.matrix)?;
    let mut entropy = 0.0;
    for &lambda in &eigenvalues {
        if lambda < -EIGENVALUE_FLOOR {
            return Err(Error::NegativeEigenvalue {
                value: lambda,
                floor: EIGENVALUE_FLOOR,
            });
        }
        if lambda > ENTROPY_CUTOFF {
            entropy -= lambda * lambda.log2();
        }
    }
    Ok(entropy.max(0.0))
}

/// log2(rho) on the support of rho, zero on the kernel: eigenvalues above
/// `SUPPORT_CUTOFF` map to their base-2 logarithm, the rest are dropped.
pub fn support_log2(rho: &LabeledDensityMatrix) -> Result<ComplexMatrix> {
    let (eigenvalues, vectors) = hermitian_eigensystem(&rho.matrix)?;
    let n = rho.dim();
    let mut out = ComplexMatrix::zeros(n);
    for (k, &lambda) in eigenvalues.iter().enumerate() {
        if lambda <= SUPPORT_CUTOFF {
            continue;
        }
        let log_lambda = lambda.log2();
        let col: Vec<Complex64> = (0..n).map(|i| vectors[(i, k)]).collect();
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += log_lambda * col[i] * col[j].conj();
            }
        }
    }
    Ok(out)
}

/// Projector onto the support of rho (eigenvalues above `SUPPORT_CUTOFF`).
pub fn support_projector(rho: &LabeledDensityMatrix) -> Result<ComplexMatrix> {
    let (eigenvalues, vectors) = hermitian_eigensystem(&rho.matrix)?;
    let n = rho.dim();
    let mut out = ComplexMatrix::zeros(n);
    for (k, &lambda) in eigenvalues.iter().enumerate() {
        if lambda <= SUPPORT_CUTOFF {
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += vectors[(i, k)] * vectors[(j, k)].conj();
            }
        }
    }
    Ok(out)
}
