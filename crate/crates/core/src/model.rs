//! Physical model: two three-level atoms in the lambda configuration coupled
//! to a two-mode cavity.
//!
//! Starting from both atoms in `g` with `n` photons in mode a and `mu` in
//! mode b, the interaction explores exactly nine basis states. Amplitudes
//! evolve under a real symmetric coefficient matrix (the rotating frame has
//! absorbed the optical phases, leaving only the one-photon detuning on rows
//! with excited atoms). A counterintuitive Gaussian pulse pair drives the
//! transfer, and the interaction has a null eigenvector — the dark state —
//! with no excited-state component.
//!
//! All quantities are dimensionless: times in units of the pulse width tau,
//! rates multiplied by tau.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qstate::{AtomLevel, ComplexMatrix, SiteLabel, StateVector, SubsystemId};

/// Basis-state count of the interacting subspace.
pub const BASIS_DIM: usize = 9;

/// Positions (within the nine-state basis) carrying dark-state amplitude:
/// |g,g,n,mu>, |f,f,n-2,mu+2>, |g,f,n-1,mu+1>, |f,g,n-1,mu+1>.
pub const DARK_BASIS_INDICES: [usize; 4] = [0, 5, 2, 7];

/// Physical configuration: initial photon numbers, pulse amplitudes and
/// separation, and the one-photon detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Initial photon number of mode a. Must be at least 2: the transfer
    /// removes two photons from this mode.
    pub n: u32,
    /// Initial photon number of mode b.
    pub mu: u32,
    /// Peak amplitude of the g <-> e pulse, times tau.
    pub g10_tau: f64,
    /// Peak amplitude of the f <-> e pulse, times tau.
    pub g20_tau: f64,
    /// Separation of the two pulse peaks, in units of tau.
    pub t_over_tau: f64,
    /// One-photon detuning times tau, shared by both atoms.
    pub delta_tau: f64,
}

impl ModelParams {
    pub fn new(
        n: u32,
        mu: u32,
        g10_tau: f64,
        g20_tau: f64,
        t_over_tau: f64,
        delta_tau: f64,
    ) -> Result<Self> {
        let params = Self {
            n,
            mu,
            g10_tau,
            g20_tau,
            t_over_tau,
            delta_tau,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParams(format!(
                "n = {} but the transfer removes two photons from mode a; n >= 2 required",
                self.n
            )));
        }
        if !self.g10_tau.is_finite() || self.g10_tau <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "g10_tau = {} must be positive and finite",
                self.g10_tau
            )));
        }
        if !self.g20_tau.is_finite() || self.g20_tau <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "g20_tau = {} must be positive and finite",
                self.g20_tau
            )));
        }
        if !self.t_over_tau.is_finite() || !self.delta_tau.is_finite() {
            return Err(Error::InvalidParams(
                "t_over_tau and delta_tau must be finite".into(),
            ));
        }
        Ok(())
    }
}

/// One basis state of the interacting subspace: levels of the two atoms and
/// photon numbers of the two modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub atom_a: AtomLevel,
    pub atom_b: AtomLevel,
    pub photons_a: u32,
    pub photons_b: u32,
}

impl BasisLabel {
    /// Label tuple in the canonical (atom A, atom B, mode a, mode b) order.
    pub fn sites(&self) -> Vec<SiteLabel> {
        vec![
            SiteLabel::Level(self.atom_a),
            SiteLabel::Level(self.atom_b),
            SiteLabel::Photons(self.photons_a),
            SiteLabel::Photons(self.photons_b),
        ]
    }

    /// Number of atoms in the excited level `e`.
    pub fn excited_atoms(&self) -> u32 {
        u32::from(self.atom_a == AtomLevel::E) + u32::from(self.atom_b == AtomLevel::E)
    }
}

/// The nine basis states reachable from |g,g,n,mu>, in the fixed order the
/// coefficient matrix uses.
pub fn basis_labels(params: &ModelParams) -> Result<Vec<BasisLabel>> {
    params.validate()?;
    use AtomLevel::{E, F, G};
    let (n, mu) = (params.n, params.mu);
    let label = |atom_a, atom_b, photons_a, photons_b| BasisLabel {
        atom_a,
        atom_b,
        photons_a,
        photons_b,
    };
    Ok(vec![
        label(G, G, n, mu),
        label(G, E, n - 1, mu),
        label(G, F, n - 1, mu + 1),
        label(E, F, n - 2, mu + 1),
        label(E, E, n - 2, mu),
        label(F, F, n - 2, mu + 2),
        label(F, E, n - 2, mu + 1),
        label(F, G, n - 1, mu + 1),
        label(E, G, n - 1, mu),
    ])
}

/// Label tuples of the nine basis states, for building `StateVector`s.
pub fn basis_site_labels(params: &ModelParams) -> Result<Vec<Vec<SiteLabel>>> {
    Ok(basis_labels(params)?
        .iter()
        .map(BasisLabel::sites)
        .collect())
}

/// Instantaneous pulse amplitudes (times tau) at dimensionless time `s`:
/// the f <-> e pulse peaks at s = 0, the g <-> e pulse at s = t_over_tau.
/// Applied in this order the sequence is counterintuitive, which is what
/// makes the system follow the dark state.
pub fn pulse_amplitudes(s: f64, params: &ModelParams) -> (f64, f64) {
    let d1 = s - params.t_over_tau;
    let g1 = params.g10_tau * (-d1 * d1).exp();
    let g2 = params.g20_tau * (-s * s).exp();
    (g1, g2)
}

/// Coefficient matrix M (times tau) of the amplitude equations
/// `d/ds d_i = -i M d_i`, with both atoms sharing each pulse amplitude.
pub fn coefficient_matrix(g1_tau: f64, g2_tau: f64, params: &ModelParams) -> ComplexMatrix {
    coefficient_matrix_full(g1_tau, g1_tau, g2_tau, g2_tau, params)
}

/// Coefficient matrix with atom-resolved couplings. The couplings are real,
/// so the matrix is real symmetric.
pub fn coefficient_matrix_full(
    g1a: f64,
    g1b: f64,
    g2a: f64,
    g2b: f64,
    params: &ModelParams,
) -> ComplexMatrix {
    let n = f64::from(params.n);
    let mu = f64::from(params.mu);
    let delta = params.delta_tau;

    let sqrt_n = n.sqrt();
    let sqrt_n1 = (n - 1.0).sqrt();
    let sqrt_mu1 = (mu + 1.0).sqrt();
    let sqrt_mu2 = (mu + 2.0).sqrt();

    let mut m = ComplexMatrix::zeros(BASIS_DIM);
    let mut couple = |i: usize, j: usize, value: f64| {
        m[(i, j)] = Complex64::new(value, 0.0);
        m[(j, i)] = Complex64::new(value, 0.0);
    };

    couple(0, 1, sqrt_n * g1b);
    couple(0, 8, sqrt_n * g1a);
    couple(1, 2, sqrt_mu1 * g2b);
    couple(1, 4, sqrt_n1 * g1a);
    couple(2, 3, sqrt_n1 * g1a);
    couple(3, 4, sqrt_mu1 * g2b);
    couple(3, 5, sqrt_mu2 * g2a);
    couple(4, 6, sqrt_mu1 * g2a);
    couple(4, 8, sqrt_n1 * g1b);
    couple(5, 6, sqrt_mu2 * g2b);
    couple(6, 7, sqrt_n1 * g1b);
    couple(7, 8, sqrt_mu1 * g2a);

    // one-photon detuning on every row with an excited atom
    for (i, diag) in [(1, 1.0), (3, 1.0), (4, 2.0), (6, 1.0), (8, 1.0)] {
        m[(i, i)] = Complex64::new(diag * delta, 0.0);
    }
    m
}

/// Null eigenvector of the coefficient matrix, when the pulses give it
/// meaning. Its four nonzero components sit on the basis states without any
/// excited atom, so the detuning rows never touch it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DarkState {
    signed: Option<[f64; 4]>,
}

impl DarkState {
    pub fn is_defined(&self) -> bool {
        self.signed.is_some()
    }

    /// Normalized amplitudes (alpha, beta, -gamma, -delta)/P on the basis
    /// positions `DARK_BASIS_INDICES`, or `None` when both pulses are too
    /// weak to define the state.
    pub fn signed_coefficients(&self) -> Option<[f64; 4]> {
        self.signed
    }

    /// The magnitudes (alpha, beta, gamma, delta)/P.
    pub fn magnitudes(&self) -> Option<[f64; 4]> {
        self.signed.map(|c| c.map(f64::abs))
    }

    /// The dark state embedded in the nine-state basis.
    pub fn state_vector(&self, params: &ModelParams) -> Result<Option<StateVector>> {
        let Some(coeffs) = self.signed else {
            return Ok(None);
        };
        let labels = basis_site_labels(params)?;
        let mut amplitudes = vec![Complex64::ZERO; BASIS_DIM];
        for (&index, &value) in DARK_BASIS_INDICES.iter().zip(coeffs.iter()) {
            amplitudes[index] = Complex64::new(value, 0.0);
        }
        Ok(Some(StateVector::new(
            SubsystemId::ALL.to_vec(),
            labels,
            amplitudes,
        )?))
    }
}

/// Dark state for shared couplings g1 and g2.
pub fn dark_state(g1_tau: f64, g2_tau: f64, params: &ModelParams) -> DarkState {
    dark_state_full(g1_tau, g1_tau, g2_tau, g2_tau, params)
}

/// Dark state for atom-resolved couplings:
/// alpha = g2a*g2b*sqrt((mu+1)(mu+2)), beta = g1a*g1b*sqrt(n(n-1)),
/// gamma = g1b*g2a*sqrt(n(mu+2)), delta = g1a*g2b*sqrt(n(mu+2)),
/// normalized by P = sqrt(alpha^2 + beta^2 + gamma^2 + delta^2).
pub fn dark_state_full(g1a: f64, g1b: f64, g2a: f64, g2b: f64, params: &ModelParams) -> DarkState {
    let n = f64::from(params.n);
    let mu = f64::from(params.mu);

    let alpha = g2a * g2b * ((mu + 1.0) * (mu + 2.0)).sqrt();
    let beta = g1a * g1b * (n * (n - 1.0)).sqrt();
    let gamma = g1b * g2a * (n * (mu + 2.0)).sqrt();
    let delta = g1a * g2b * (n * (mu + 2.0)).sqrt();
    let p = (alpha * alpha + beta * beta + gamma * gamma + delta * delta).sqrt();

    // In the far pulse tails every coefficient underflows and the state is
    // no longer meaningful; report it as undefined rather than dividing 0/0.
    let peak = params.g10_tau.max(params.g20_tau);
    if p < 1e-9 * peak * peak {
        return DarkState { signed: None };
    }
    DarkState {
        signed: Some([alpha / p, beta / p, -gamma / p, -delta / p]),
    }
}
