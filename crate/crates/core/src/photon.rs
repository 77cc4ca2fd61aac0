//! Photon polarization vectors attached to a propagation direction and the
//! action of boosts on single-photon states.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lorentz::{
    rotate_y3, rotate_z3, transform_angles, wigner_phase, FourVector, LorentzTransform, SphericalDirection,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Linear {
    H,
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Helicity {
    Plus,
    Minus,
}

impl Helicity {
    pub fn from_int(lambda: i32) -> Result<Self> {
        match lambda {
            1 => Ok(Helicity::Plus),
            -1 => Ok(Helicity::Minus),
            _ => Err(Error::Domain(format!("helicity must be +1 or -1, got {lambda}"))),
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Helicity::Plus => 1.0,
            Helicity::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolarizationLabel {
    Linear(Linear),
    Helicity(Helicity),
}

/// Real spatial polarization vectors (h, v) at `dir`:
/// h = R_z(φ)R_y(θ)(cosφ, −sinφ, 0), v = R_z(φ)R_y(θ)(sinφ, cosφ, 0).
///
/// Both are smooth at θ = 0 (h = x̂, v = ŷ for every φ) and wind with φ at θ = π.
pub fn polarization_vectors(dir: SphericalDirection) -> ([f64; 3], [f64; 3]) {
    let (s, c) = dir.phi().sin_cos();
    let rot = |v: [f64; 3]| rotate_z3(rotate_y3(v, dir.theta()), dir.phi());
    (rot([c, -s, 0.0]), rot([s, c, 0.0]))
}

/// A unit complex 4-vector (time component zero) transverse to its direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationState {
    eps: [Complex64; 4],
    direction: SphericalDirection,
    label: PolarizationLabel,
}

impl PolarizationState {
    pub fn eps(&self) -> &[Complex64; 4] {
        &self.eps
    }

    pub fn direction(&self) -> SphericalDirection {
        self.direction
    }

    pub fn label(&self) -> PolarizationLabel {
        self.label
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.eps.iter().zip(other.eps.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).re.sqrt()
    }

    /// |ε · p̂|, zero for a transverse vector.
    pub fn longitudinal(&self) -> f64 {
        let n = self.direction.unit();
        (1..4).map(|i| self.eps[i] * n[i - 1]).sum::<Complex64>().norm()
    }

    /// Trace distance between the two pure polarization states, √(1 − |⟨a|b⟩|²).
    /// Evaluated as ½Σ|a_i b_j − a_j b_i|² so that nearby states keep full
    /// relative precision.
    pub fn trace_distance(&self, other: &Self) -> f64 {
        let (a, b) = (&self.eps, &other.eps);
        let mut s = 0.0;
        for i in 0..4 {
            for j in i + 1..4 {
                s += (a[i] * b[j] - a[j] * b[i]).norm_sqr();
            }
        }
        s.sqrt()
    }
}

fn embed(v: [f64; 3]) -> [Complex64; 4] {
    [Complex64::new(0.0, 0.0), Complex64::new(v[0], 0.0), Complex64::new(v[1], 0.0), Complex64::new(v[2], 0.0)]
}

pub fn linear_polarization(dir: SphericalDirection, kind: Linear) -> PolarizationState {
    let (h, v) = polarization_vectors(dir);
    let eps = match kind {
        Linear::H => embed(h),
        Linear::V => embed(v),
    };
    PolarizationState { eps, direction: dir, label: PolarizationLabel::Linear(kind) }
}

/// (h + iλv)/√2
pub fn helicity_polarization(dir: SphericalDirection, lambda: i32) -> Result<PolarizationState> {
    Ok(circular(dir, Helicity::from_int(lambda)?))
}

fn circular(dir: SphericalDirection, hel: Helicity) -> PolarizationState {
    let (h, v) = polarization_vectors(dir);
    let il = Complex64::new(0.0, hel.sign());
    let mut eps = [Complex64::new(0.0, 0.0); 4];
    for i in 0..3 {
        eps[i + 1] = (h[i] + il * v[i]) * std::f64::consts::FRAC_1_SQRT_2;
    }
    PolarizationState { eps, direction: dir, label: PolarizationLabel::Helicity(hel) }
}

pub fn polarization(dir: SphericalDirection, label: PolarizationLabel) -> PolarizationState {
    match label {
        PolarizationLabel::Linear(kind) => linear_polarization(dir, kind),
        PolarizationLabel::Helicity(h) => circular(dir, h),
    }
}

/// A photon ket |p, σ⟩ with an accumulated phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonState {
    pub momentum: FourVector,
    pub polarization: PolarizationState,
    pub phase: f64,
}

impl PhotonState {
    pub fn new(dir: SphericalDirection, energy: f64, label: PolarizationLabel) -> Result<Self> {
        if !(energy > 0.0) || !energy.is_finite() {
            return Err(Error::Domain(format!("photon energy must be positive, got {energy}")));
        }
        Ok(Self { momentum: FourVector::null(dir, energy), polarization: polarization(dir, label), phase: 0.0 })
    }
}

/// Boost along z. The polarization keeps its label and is re-evaluated at the
/// aberrated direction; helicity states also pick up −λΘ.
pub fn boost_photon(state: &PhotonState, beta: f64) -> Result<PhotonState> {
    let l = LorentzTransform::boost_z(beta)?;
    let dir = transform_angles(state.polarization.direction(), beta)?;
    finish_transform(state, &l, dir)
}

/// As [`boost_photon`] for an arbitrary proper orthochronous transform.
pub fn transform_photon(state: &PhotonState, transform: &LorentzTransform) -> Result<PhotonState> {
    let dir = transform.apply(state.momentum).direction();
    finish_transform(state, transform, dir)
}

fn finish_transform(state: &PhotonState, transform: &LorentzTransform, dir: SphericalDirection) -> Result<PhotonState> {
    let label = state.polarization.label();
    let phase = match label {
        PolarizationLabel::Helicity(h) => state.phase - h.sign() * wigner_phase(transform, state.momentum)?,
        PolarizationLabel::Linear(_) => state.phase,
    };
    Ok(PhotonState { momentum: transform.apply(state.momentum), polarization: polarization(dir, label), phase })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::{rotation_y, rotation_z};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn dir(t: f64, p: f64) -> SphericalDirection {
        SphericalDirection::new(t, p).unwrap()
    }

    fn assert_eps(s: &PolarizationState, expect: [Complex64; 4]) {
        for (a, b) in s.eps().iter().zip(expect) {
            assert!((a - b).norm() < 1e-15, "{:?} vs {:?}", s.eps(), expect);
        }
    }

    #[test]
    fn basis_at_pole() {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        assert_eps(&linear_polarization(dir(0.0, 0.0), Linear::H), [z, one, z, z]);
        assert_eps(&linear_polarization(dir(0.0, 0.0), Linear::V), [z, z, one, z]);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_eps(
            &helicity_polarization(dir(0.0, 0.0), 1).unwrap(),
            [z, Complex64::new(r, 0.0), Complex64::new(0.0, r), z],
        );
    }

    #[test]
    fn h_on_equator_points_down() {
        let h = linear_polarization(dir(PI / 2.0, 0.0), Linear::H);
        assert_abs_diff_eq!(h.eps()[3].re, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn h_is_continuous_at_north_pole() {
        for &p in &[0.0, 1.0, 3.0, 5.5] {
            let (h, v) = polarization_vectors(dir(0.0, p));
            assert_abs_diff_eq!(h[0], 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(v[1], 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn vectors_match_rotated_frame() {
        // independent route through the 4×4 rotation matrices
        let (t, p) = (1.1, 2.3);
        let r = rotation_z(p) * rotation_y(t);
        let h4 = r.apply(FourVector::new(0.0, p.cos(), -p.sin(), 0.0));
        let (h, _) = polarization_vectors(dir(t, p));
        for (a, b) in h.iter().zip(h4.spatial()) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn helicity_is_linear_combination() {
        let d = dir(2.1, 4.4);
        let h = linear_polarization(d, Linear::H);
        let v = linear_polarization(d, Linear::V);
        for lambda in [1, -1] {
            let c = helicity_polarization(d, lambda).unwrap();
            for i in 0..4 {
                let expect = (h.eps()[i] + Complex64::new(0.0, lambda as f64) * v.eps()[i]) / 2f64.sqrt();
                assert!((c.eps()[i] - expect).norm() < 1e-12);
            }
        }
        let p = helicity_polarization(d, 1).unwrap();
        let m = helicity_polarization(d, -1).unwrap();
        assert!(p.inner(&m).norm() < 1e-12);
        assert!(helicity_polarization(d, 0).is_err());
    }

    #[test]
    fn zero_boost_is_identity() {
        let s = PhotonState::new(dir(0.8, 1.0), 1.0, PolarizationLabel::Linear(Linear::H)).unwrap();
        let b = boost_photon(&s, 0.0).unwrap();
        assert_eq!(b.polarization.direction(), s.polarization.direction());
        assert!(b.polarization.trace_distance(&s.polarization) < 1e-15);
    }

    #[test]
    fn equatorial_h_photon_tilts_by_beta() {
        let beta = 1e-5;
        let s = PhotonState::new(dir(PI / 2.0, 0.0), 1.0, PolarizationLabel::Linear(Linear::H)).unwrap();
        let b = boost_photon(&s, beta).unwrap();
        assert_abs_diff_eq!(b.polarization.direction().theta(), PI / 2.0 + beta, epsilon = 1e-14);
        assert_abs_diff_eq!(b.polarization.direction().phi(), 0.0, epsilon = 1e-15);
        assert!(b.momentum.is_null());
    }

    #[test]
    fn helicity_label_survives_boost() {
        let s = PhotonState::new(dir(1.3, 0.2), 1.0, PolarizationLabel::Helicity(Helicity::Minus)).unwrap();
        let b = boost_photon(&s, 0.6).unwrap();
        assert_eq!(b.polarization.label(), PolarizationLabel::Helicity(Helicity::Minus));
        // z-boosts keep the motion in one plane through the z axis: no Wigner phase
        assert_abs_diff_eq!(b.phase, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn general_transform_accumulates_phase() {
        let s = PhotonState::new(dir(0.0, 0.0), 1.0, PolarizationLabel::Helicity(Helicity::Plus)).unwrap();
        let b = transform_photon(&s, &rotation_z(0.7)).unwrap();
        assert_abs_diff_eq!(b.phase, -0.7, epsilon = 1e-12);
        let lin = PhotonState::new(dir(0.0, 0.0), 1.0, PolarizationLabel::Linear(Linear::V)).unwrap();
        assert_eq!(transform_photon(&lin, &rotation_z(0.7)).unwrap().phase, 0.0);
    }

    #[test]
    fn bad_energy_rejected() {
        assert!(PhotonState::new(dir(0.0, 0.0), 0.0, PolarizationLabel::Linear(Linear::H)).is_err());
    }
}
