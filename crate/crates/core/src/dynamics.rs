//! Time evolution of the nine amplitudes under `d/ds d_i = -i M(s) d_i`,
//! integrated with fixed-step classical Runge-Kutta.
//!
//! The generator is smooth and bounded, so a fixed step keeps runs
//! bit-reproducible; the coefficient matrix is Hermitian, so exact evolution
//! preserves the norm and any drift measures integration error.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{
    basis_site_labels, coefficient_matrix, dark_state, pulse_amplitudes, ModelParams, BASIS_DIM,
};
use crate::qstate::{ComplexMatrix, StateVector, SubsystemId};

/// Per-step norm tolerance; exceeding it aborts the run.
pub const NORM_DRIFT_LIMIT: f64 = 1e-6;

/// Uniform integration grid in units of the pulse width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub s_start: f64,
    pub s_end: f64,
    pub steps: u32,
    pub record_every: u32,
}

impl TimeGrid {
    pub fn new(s_start: f64, s_end: f64, steps: u32, record_every: u32) -> Result<Self> {
        let grid = Self {
            s_start,
            s_end,
            steps,
            record_every,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.s_start.is_finite() || !self.s_end.is_finite() || self.s_start >= self.s_end {
            return Err(Error::InvalidGrid(format!(
                "s_start = {} must be strictly below s_end = {}",
                self.s_start, self.s_end
            )));
        }
        if self.steps < 100 {
            return Err(Error::InvalidGrid(format!(
                "steps = {} is too coarse; at least 100 required",
                self.steps
            )));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidGrid("record_every must be positive".into()));
        }
        Ok(())
    }

    /// Window covering both pulses with three widths of margin on each side
    /// (a Gaussian is below 1.3e-4 of its peak there), at the default
    /// resolution of 12000 steps.
    pub fn default_window(params: &ModelParams) -> Self {
        Self {
            s_start: -3.0,
            s_end: params.t_over_tau + 3.0,
            steps: 12_000,
            record_every: 10,
        }
    }

    pub fn step_size(&self) -> f64 {
        (self.s_end - self.s_start) / f64::from(self.steps)
    }
}

/// One recorded point of a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryFrame {
    /// Dimensionless time.
    pub s: f64,
    /// Rotating-frame amplitudes over the nine-state basis.
    pub state: StateVector,
    /// Squared overlap with the instantaneous dark state, when defined.
    pub dark_overlap: Option<f64>,
    pub g1_tau: f64,
    pub g2_tau: f64,
}

/// The state everything starts from: both atoms in `g`, the cavity holding
/// (n, mu) photons — the first basis vector.
pub fn initial_state(params: &ModelParams) -> Result<StateVector> {
    let labels = basis_site_labels(params)?;
    let mut amplitudes = vec![Complex64::ZERO; BASIS_DIM];
    amplitudes[0] = Complex64::ONE;
    StateVector::new(SubsystemId::ALL.to_vec(), labels, amplitudes)
}

/// One classical fourth-order Runge-Kutta step of d/ds x = -i G(s) x for an
/// arbitrary Hermitian generator.
pub fn step_with_generator<F>(
    amplitudes: &[Complex64],
    s: f64,
    h: f64,
    generator: F,
) -> Vec<Complex64>
where
    F: Fn(f64) -> ComplexMatrix,
{
    let rhs = |m: &ComplexMatrix, x: &[Complex64]| -> Vec<Complex64> {
        m.mul_vec(x)
            .into_iter()
            .map(|y| Complex64::new(0.0, -1.0) * y)
            .collect()
    };
    let add_scaled = |x: &[Complex64], k: &[Complex64], factor: f64| -> Vec<Complex64> {
        x.iter().zip(k).map(|(a, b)| a + factor * b).collect()
    };

    let m_start = generator(s);
    let m_mid = generator(s + 0.5 * h);
    let m_end = generator(s + h);

    let k1 = rhs(&m_start, amplitudes);
    let k2 = rhs(&m_mid, &add_scaled(amplitudes, &k1, 0.5 * h));
    let k3 = rhs(&m_mid, &add_scaled(amplitudes, &k2, 0.5 * h));
    let k4 = rhs(&m_end, &add_scaled(amplitudes, &k3, h));

    amplitudes
        .iter()
        .enumerate()
        .map(|(i, a)| a + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// One Runge-Kutta step under the model's pulsed coefficient matrix.
pub fn step(state: &StateVector, s: f64, h: f64, params: &ModelParams) -> Result<StateVector> {
    let next = step_with_generator(state.amplitudes(), s, h, |t| {
        let (g1, g2) = pulse_amplitudes(t, params);
        coefficient_matrix(g1, g2, params)
    });
    if next.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(Error::NonFiniteAmplitude { s });
    }
    state.with_amplitudes(next)
}

/// Integrate the full window, recording every `record_every`-th step (the
/// final point is always recorded). Each frame carries the squared overlap
/// with the instantaneous dark state where that state is defined.
pub fn evolve(params: &ModelParams, grid: &TimeGrid) -> Result<Vec<TrajectoryFrame>> {
    params.validate()?;
    grid.validate()?;

    let h = grid.step_size();
    let mut state = initial_state(params)?;
    let mut frames = Vec::with_capacity(grid.steps as usize / grid.record_every as usize + 2);

    for k in 0..=grid.steps {
        let s = grid.s_start + f64::from(k) * h;
        let drift = (state.norm() - 1.0).abs();
        if drift > NORM_DRIFT_LIMIT {
            return Err(Error::NormDrift {
                s,
                drift,
                limit: NORM_DRIFT_LIMIT,
            });
        }
        if k % grid.record_every == 0 || k == grid.steps {
            frames.push(make_frame(s, &state, params));
        }
        if k < grid.steps {
            state = step(&state, s, h, params)?;
        }
    }
    Ok(frames)
}

fn make_frame(s: f64, state: &StateVector, params: &ModelParams) -> TrajectoryFrame {
    let (g1, g2) = pulse_amplitudes(s, params);
    let frame = TrajectoryFrame {
        s,
        state: state.clone(),
        dark_overlap: None,
        g1_tau: g1,
        g2_tau: g2,
    };
    let dark_overlap = adiabatic_overlap(&frame, params);
    TrajectoryFrame {
        dark_overlap,
        ..frame
    }
}

/// Squared overlap |<psi_0(s)|d(s)>|^2 between a frame's state and the
/// instantaneous dark state; `None` where the dark state is undefined.
pub fn adiabatic_overlap(frame: &TrajectoryFrame, params: &ModelParams) -> Option<f64> {
    let dark = dark_state(frame.g1_tau, frame.g2_tau, params);
    let psi = dark.state_vector(params).ok()??;
    let overlap = psi.overlap(&frame.state).ok()?;
    Some(overlap.norm_sqr().clamp(0.0, 1.0))
}

/// Amplitudes with the rotating-frame phases restored: each basis state
/// picks up exp(i * delta_tau * s) per excited atom. This is a product of
/// local diagonal unitaries, so every reduced entropy is unchanged — the
/// justification for simulating in the rotating frame.
pub fn bare_amplitudes(frame: &TrajectoryFrame, params: &ModelParams) -> Result<StateVector> {
    let labels = crate::model::basis_labels(params)?;
    let amplitudes = frame
        .state
        .amplitudes()
        .iter()
        .zip(&labels)
        .map(|(a, label)| {
            let phase = params.delta_tau * frame.s * f64::from(label.excited_atoms());
            a * Complex64::new(0.0, phase).exp()
        })
        .collect();
    frame.state.with_amplitudes(amplitudes)
}
