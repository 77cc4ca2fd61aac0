//! The three entangled-pair encodings, their boosted forms and reduced
//! density matrices.
//!
//! * Type I: polarization Bell pair (|hh⟩ − |vv⟩)/√2.
//! * Type II: one photon split between the arms, (|1⟩_A|0⟩_B − |0⟩_A|1⟩_B)/√2.
//! * Type III: dual rail, each arm holds one photon in one of two rails.
//!
//! Boosts are passive z-boosts unless a general transform is passed to the
//! `transform_*` variants.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::Result;
use crate::lorentz::{transform_angles, wigner_phase, FourVector, LorentzTransform, SphericalDirection};
use crate::photon::{linear_polarization, Helicity, Linear};
use crate::quantum::{trace_distance, CVector, DensityMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct TypeIState {
    pub p_a: FourVector,
    pub p_b: FourVector,
    dir_a: SphericalDirection,
    dir_b: SphericalDirection,
    amplitude: CVector,
}

impl TypeIState {
    /// Joint polarization amplitude on the 4 ⊗ 4 space, index 4·a + b.
    pub fn amplitude(&self) -> &CVector {
        &self.amplitude
    }

    pub fn directions(&self) -> (SphericalDirection, SphericalDirection) {
        (self.dir_a, self.dir_b)
    }
}

fn type1_amplitude(dir_a: SphericalDirection, dir_b: SphericalDirection) -> CVector {
    let ha = linear_polarization(dir_a, Linear::H);
    let va = linear_polarization(dir_a, Linear::V);
    let hb = linear_polarization(dir_b, Linear::H);
    let vb = linear_polarization(dir_b, Linear::V);
    CVector::from_fn(16, |k, _| {
        let (a, b) = (k / 4, k % 4);
        (ha.eps()[a] * hb.eps()[b] - va.eps()[a] * vb.eps()[b]) * FRAC_1_SQRT_2
    })
}

fn type1_at(p_a: FourVector, p_b: FourVector, dir_a: SphericalDirection, dir_b: SphericalDirection) -> TypeIState {
    TypeIState { p_a, p_b, dir_a, dir_b, amplitude: type1_amplitude(dir_a, dir_b) }
}

pub fn make_type1(dir_a: SphericalDirection, dir_b: SphericalDirection) -> TypeIState {
    type1_at(FourVector::null(dir_a, 1.0), FourVector::null(dir_b, 1.0), dir_a, dir_b)
}

/// Both momenta boosted; h/v re-evaluated at the aberrated directions, no phases.
pub fn boost_type1(s: &TypeIState, beta: f64) -> Result<TypeIState> {
    let l = LorentzTransform::boost_z(beta)?;
    let dir_a = transform_angles(s.dir_a, beta)?;
    let dir_b = transform_angles(s.dir_b, beta)?;
    Ok(type1_at(l.apply(s.p_a), l.apply(s.p_b), dir_a, dir_b))
}

pub fn transform_type1(s: &TypeIState, transform: &LorentzTransform) -> TypeIState {
    let p_a = transform.apply(s.p_a);
    let p_b = transform.apply(s.p_b);
    type1_at(p_a, p_b, p_a.direction(), p_b.direction())
}

/// Polarization state after tracing the (sharp) momenta, dims [4, 4].
pub fn reduced_polarization(s: &TypeIState) -> DensityMatrix {
    DensityMatrix::from_pure(&s.amplitude, vec![4, 4]).expect("type I amplitude is normalized")
}

/// Trace distance between the reduced polarization states of a type I pair
/// before and after `boost_z(beta)`.
pub fn type1_trace_distance(dir_a: SphericalDirection, dir_b: SphericalDirection, beta: f64) -> Result<f64> {
    let s = make_type1(dir_a, dir_b);
    trace_distance(&reduced_polarization(&s), &reduced_polarization(&boost_type1(&s, beta)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TypeIIState {
    pub p_a: FourVector,
    pub p_b: FourVector,
    pub helicity: Helicity,
    /// Phases of the two branches as prepared.
    pub branch_phases: [f64; 2],
    /// Accumulated −λΘ for each branch.
    pub wigner_phases: [f64; 2],
}

impl TypeIIState {
    pub fn phases(&self) -> [f64; 2] {
        [self.branch_phases[0] + self.wigner_phases[0], self.branch_phases[1] + self.wigner_phases[1]]
    }
}

pub fn make_type2(
    dir_a: SphericalDirection,
    dir_b: SphericalDirection,
    lambda: i32,
    branch_phases: [f64; 2],
) -> Result<TypeIIState> {
    Ok(TypeIIState {
        p_a: FourVector::null(dir_a, 1.0),
        p_b: FourVector::null(dir_b, 1.0),
        helicity: Helicity::from_int(lambda)?,
        branch_phases,
        wigner_phases: [0.0; 2],
    })
}

pub fn boost_type2(s: &TypeIIState, beta: f64) -> Result<TypeIIState> {
    transform_type2(s, &LorentzTransform::boost_z(beta)?)
}

pub fn transform_type2(s: &TypeIIState, transform: &LorentzTransform) -> Result<TypeIIState> {
    let lam = s.helicity.sign();
    let ta = wigner_phase(transform, s.p_a)?;
    let tb = wigner_phase(transform, s.p_b)?;
    Ok(TypeIIState {
        p_a: transform.apply(s.p_a),
        p_b: transform.apply(s.p_b),
        helicity: s.helicity,
        branch_phases: s.branch_phases,
        wigner_phases: [s.wigner_phases[0] - lam * ta, s.wigner_phases[1] - lam * tb],
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TypeIIIState {
    pub p_a: FourVector,
    pub p_b: FourVector,
    pub helicity: Helicity,
    pub global_phase: f64,
    /// Accumulated −λ(Θ_p + Θ_q).
    pub wigner_phase: f64,
}

pub fn make_type3(dir_a: SphericalDirection, dir_b: SphericalDirection, lambda: i32) -> Result<TypeIIIState> {
    Ok(TypeIIIState {
        p_a: FourVector::null(dir_a, 1.0),
        p_b: FourVector::null(dir_b, 1.0),
        helicity: Helicity::from_int(lambda)?,
        global_phase: 0.0,
        wigner_phase: 0.0,
    })
}

pub fn boost_type3(s: &TypeIIIState, beta: f64) -> Result<TypeIIIState> {
    transform_type3(s, &LorentzTransform::boost_z(beta)?)
}

pub fn transform_type3(s: &TypeIIIState, transform: &LorentzTransform) -> Result<TypeIIIState> {
    let lam = s.helicity.sign();
    let total = wigner_phase(transform, s.p_a)? + wigner_phase(transform, s.p_b)?;
    Ok(TypeIIIState {
        p_a: transform.apply(s.p_a),
        p_b: transform.apply(s.p_b),
        wigner_phase: s.wigner_phase - lam * total,
        ..*s
    })
}

/// States whose entanglement lives in photon number.
pub trait FockState {
    /// Two-qubit state on dims [2, 2]. With `compensate_phases` the known
    /// Wigner phases are removed first.
    fn number_basis_reduced(&self, compensate_phases: bool) -> DensityMatrix;
}

impl FockState for TypeIIState {
    /// Occupation qubits |n_A n_B⟩: (e^{iφ_A}|10⟩ − e^{iφ_B}|01⟩)/√2.
    fn number_basis_reduced(&self, compensate_phases: bool) -> DensityMatrix {
        let [pa, pb] = if compensate_phases { self.branch_phases } else { self.phases() };
        let mut psi = CVector::zeros(4);
        psi[2] = Complex64::from_polar(FRAC_1_SQRT_2, pa);
        psi[1] = -Complex64::from_polar(FRAC_1_SQRT_2, pb);
        DensityMatrix::from_pure(&psi, vec![2, 2]).expect("normalized")
    }
}

impl FockState for TypeIIIState {
    /// Rail qubits, logical 0 = photon in rail 1: e^{iχ}(|11⟩ − |00⟩)/√2.
    fn number_basis_reduced(&self, compensate_phases: bool) -> DensityMatrix {
        let chi = if compensate_phases { self.global_phase } else { self.global_phase + self.wigner_phase };
        let mut psi = CVector::zeros(4);
        psi[3] = Complex64::from_polar(FRAC_1_SQRT_2, chi);
        psi[0] = -Complex64::from_polar(FRAC_1_SQRT_2, chi);
        DensityMatrix::from_pure(&psi, vec![2, 2]).expect("normalized")
    }
}

pub fn number_basis_reduced<S: FockState>(s: &S, compensate_phases: bool) -> DensityMatrix {
    s.number_basis_reduced(compensate_phases)
}
