//! Gaussian angular wavepackets and the polarization state of a diffracted
//! type I pair.
//!
//! Each photon's momentum is spread over a cone of width σ around its beam
//! axis, which sits at polar angle α in the x–z plane. Tracing out momentum
//! leaves a mixture of the polarization Bell states at every pair of
//! directions. Polarization labels are attached in the beam frame: a node is
//! boosted in the lab, carried back to the beam frame, given its h/v vectors
//! there, and those vectors are rotated to the lab with the beam.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use nalgebra::{Matrix3, Matrix4};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{check_beta, Error, Result};
use crate::lorentz::{rotate_y3, transform_angles, SphericalDirection};
use crate::photon::polarization_vectors;
use crate::quantum::{negativity, CMatrix, DensityMatrix};

/// Beams are truncated at this many σ when that is below π.
pub const TRUNCATION_SIGMAS: f64 = 6.0;

pub const DEFAULT_NODES: usize = 64;

/// Tolerance on the total grid weight.
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamProfile {
    sigma: f64,
    p0: f64,
    alpha: f64,
}

impl BeamProfile {
    pub fn new(sigma: f64, p0: f64, alpha: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::Domain(format!("beam spread sigma must be positive, got {sigma}")));
        }
        if !(p0 > 0.0) || !p0.is_finite() {
            return Err(Error::Domain(format!("momentum magnitude p0 must be positive, got {p0}")));
        }
        if !alpha.is_finite() {
            return Err(Error::Domain("beam direction alpha must be finite".into()));
        }
        Ok(Self { sigma, p0, alpha })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Unnormalized amplitude e^{−θ²/2σ²}.
pub fn profile_weight(theta: f64, profile: &BeamProfile) -> Result<f64> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::Domain(format!("theta = {theta} outside [0, pi]")));
    }
    Ok((-theta * theta / (2.0 * profile.sigma * profile.sigma)).exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureNode {
    /// Direction in the beam frame.
    pub direction: SphericalDirection,
    pub weight: f64,
}

/// Gauss–Legendre in θ over [0, min(π, 6σ)] times the periodic trapezoid in φ.
/// Weights carry the shell measure (p₀/2) sinθ dθ dφ and |f|², normalized to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    sigma: f64,
    n_theta: usize,
    n_phi: usize,
    nodes: Vec<QuadratureNode>,
}

impl QuadratureGrid {
    pub fn new(profile: &BeamProfile, n_theta: usize, n_phi: usize) -> Result<Self> {
        let nt = NonZeroUsize::new(n_theta).ok_or_else(|| Error::Domain("n_theta must be positive".into()))?;
        if n_phi == 0 {
            return Err(Error::Domain("n_phi must be positive".into()));
        }
        let theta_max = (TRUNCATION_SIGMAS * profile.sigma).min(PI);
        let half = 0.5 * theta_max;
        let dphi = TAU / n_phi as f64;
        let gl = GaussLegendre::new(nt);
        let mut nodes = Vec::with_capacity(n_theta * n_phi);
        for &(x, w) in gl.as_node_weight_pairs() {
            let theta = half * (x + 1.0);
            let f = profile_weight(theta, profile)?;
            let w_theta = w * half * 0.5 * profile.p0 * theta.sin() * dphi * f * f;
            for j in 0..n_phi {
                let direction = SphericalDirection::new(theta, j as f64 * dphi)?;
                nodes.push(QuadratureNode { direction, weight: w_theta });
            }
        }
        let m: f64 = nodes.iter().map(|n| n.weight).sum();
        if !(m > 0.0) {
            return Err(Error::Numerical(format!("grid normalization M = {m}")));
        }
        for n in &mut nodes {
            n.weight /= m;
        }
        Ok(Self { sigma: profile.sigma, n_theta, n_phi, nodes })
    }

    pub fn nodes(&self) -> &[QuadratureNode] {
        &self.nodes
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn size(&self) -> (usize, usize) {
        (self.n_theta, self.n_phi)
    }

    pub fn total_weight(&self) -> f64 {
        self.nodes.iter().map(|n| n.weight).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.total_weight() - 1.0).abs() <= NORMALIZATION_TOL && self.nodes.iter().all(|n| n.weight > 0.0)
    }
}

/// Coordinates of `dir` in a frame whose z axis sits at polar angle `alpha`
/// in the x–z plane: θ″ = arccos(cosα cosθ + sinα sinθ cosφ),
/// φ″ = atan2(sinθ sinφ, cosα sinθ cosφ − sinα cosθ). The angle θ″ is
/// evaluated through atan2 so it stays accurate near the poles.
pub fn rotate_beam(dir: SphericalDirection, alpha: f64) -> SphericalDirection {
    SphericalDirection::from_vector(rotate_y3(dir.unit(), -alpha))
}

/// Lab-frame (h, v) of the photon at beam-frame `node` after `boost_z(beta)`,
/// for a beam whose axis sits at polar angle `alpha`.
pub fn node_basis(node: SphericalDirection, alpha: f64, beta: f64) -> Result<([f64; 3], [f64; 3])> {
    let lab = rotate_beam(node, -alpha);
    let seen = transform_angles(lab, beta)?;
    let (h, v) = polarization_vectors(rotate_beam(seen, alpha));
    Ok((rotate_y3(h, alpha), rotate_y3(v, alpha)))
}

/// Weighted second moments of one beam: H = Σ w h hᵀ, X = Σ w h vᵀ, V = Σ w v vᵀ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamMoments {
    pub h: Matrix3<f64>,
    pub x: Matrix3<f64>,
    pub v: Matrix3<f64>,
}

pub fn beam_moments(alpha: f64, beta: f64, grid: &QuadratureGrid) -> Result<BeamMoments> {
    let mut m = BeamMoments { h: Matrix3::zeros(), x: Matrix3::zeros(), v: Matrix3::zeros() };
    for node in grid.nodes() {
        let (h, v) = node_basis(node.direction, alpha, beta)?;
        let h = nalgebra::Vector3::from(h);
        let v = nalgebra::Vector3::from(v);
        m.h += (h * h.transpose()) * node.weight;
        m.x += (h * v.transpose()) * node.weight;
        m.v += (v * v.transpose()) * node.weight;
    }
    Ok(m)
}

fn embed4(m: &Matrix3<f64>) -> Matrix4<f64> {
    let mut out = Matrix4::zeros();
    out.fixed_view_mut::<3, 3>(1, 1).copy_from(m);
    out
}

/// Reduced polarization state (dims [4, 4]) of a type I pair with diffracted
/// momenta, seen after `boost_z(beta)`.
///
/// With `opposite` set, photon B travels against beam A: its axis is beam B's
/// α plus π. Otherwise beam B's α is used as given. Because the two momenta
/// are traced independently the mixture factorizes,
/// ρ = ½[H_A⊗H_B − X_A⊗X_B − X_Aᵀ⊗X_Bᵀ + V_A⊗V_B].
pub fn diffracted_reduced_type1(
    beam_a: &BeamProfile,
    beam_b: &BeamProfile,
    beta: f64,
    grid: &QuadratureGrid,
    opposite: bool,
) -> Result<DensityMatrix> {
    check_beta(beta)?;
    if !grid.is_normalized() {
        return Err(Error::Domain(format!("grid weights sum to {}", grid.total_weight())));
    }
    for b in [beam_a, beam_b] {
        if b.sigma != grid.sigma {
            return Err(Error::Domain(format!("grid built for sigma = {} used with sigma = {}", grid.sigma, b.sigma)));
        }
    }
    let alpha_b = if opposite { beam_b.alpha + PI } else { beam_b.alpha };
    let a = beam_moments(beam_a.alpha, beta, grid)?;
    let b = beam_moments(alpha_b, beta, grid)?;
    let (ha, xa, va) = (embed4(&a.h), embed4(&a.x), embed4(&a.v));
    let (hb, xb, vb) = (embed4(&b.h), embed4(&b.x), embed4(&b.v));
    let real =
        (ha.kronecker(&hb) - xa.kronecker(&xb) - xa.transpose().kronecker(&xb.transpose()) + va.kronecker(&vb)) * 0.5;
    let mat = CMatrix::from_fn(16, 16, |i, j| Complex64::new(real[(i, j)], 0.0));
    DensityMatrix::new(mat, vec![4, 4])
}

/// Reduced state for two photons leaving in opposite directions along the axis α.
pub fn opposite_pair(sigma: f64, alpha: f64, beta: f64, n_theta: usize, n_phi: usize) -> Result<DensityMatrix> {
    let beam = BeamProfile::new(sigma, 1.0, alpha)?;
    let grid = QuadratureGrid::new(&beam, n_theta, n_phi)?;
    diffracted_reduced_type1(&beam, &beam, beta, &grid, true)
}

/// Negativity of the opposite-direction pair for each β, in input order.
pub fn negativity_sweep(
    alpha: f64,
    sigma: f64,
    betas: &[f64],
    n_theta: usize,
    n_phi: usize,
) -> Result<Vec<(f64, f64)>> {
    betas
        .par_iter()
        .map(|&beta| {
            let rho = opposite_pair(sigma, alpha, beta, n_theta, n_phi)?;
            Ok((beta, negativity(&rho, 1)?))
        })
        .collect()
}

/// Second-order purity law 1 − 2σ²(1 + |β|)².
pub fn purity_expansion(sigma: f64, beta: f64) -> f64 {
    1.0 - 2.0 * sigma * sigma * (1.0 + beta.abs()).powi(2)
}

/// Central-direction polarization frame of a beam with axis at `alpha`:
/// columns h, v and the axis itself.
pub fn beam_frame(alpha: f64) -> Matrix3<f64> {
    let x = rotate_y3([1.0, 0.0, 0.0], alpha);
    let z = rotate_y3([0.0, 0.0, 1.0], alpha);
    Matrix3::from_columns(&[x.into(), nalgebra::Vector3::y(), z.into()])
}

/// (h_A h_B − v_A v_B)/√2 at the two central directions, on the 4 ⊗ 4 space.
pub fn central_bell_vector(alpha_a: f64, alpha_b: f64) -> crate::quantum::CVector {
    let fa = beam_frame(alpha_a);
    let fb = beam_frame(alpha_b);
    crate::quantum::CVector::from_fn(16, |k, _| {
        let (a, b) = (k / 4, k % 4);
        if a == 0 || b == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let val = fa[(a - 1, 0)] * fb[(b - 1, 0)] - fa[(a - 1, 1)] * fb[(b - 1, 1)];
        Complex64::new(val * FRAC_1_SQRT_2, 0.0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::photon::{linear_polarization, Linear};
    use crate::quantum::{fidelity_to_pure, purity};
    use approx::assert_abs_diff_eq;

    #[test]
    fn profile_values() {
        let p = BeamProfile::new(0.2, 1.0, 0.0).unwrap();
        assert_eq!(profile_weight(0.0, &p).unwrap(), 1.0);
        assert_abs_diff_eq!(profile_weight(0.2, &p).unwrap(), (-0.5_f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(profile_weight(0.2, &p).unwrap(), 0.606_530_659_712_633_4, epsilon = 1e-15);
        assert!(BeamProfile::new(0.0, 1.0, 0.0).is_err());
        assert!(BeamProfile::new(0.1, -1.0, 0.0).is_err());
        assert!(profile_weight(4.0, &p).is_err());
    }

    #[test]
    fn grid_is_normalized() {
        for sigma in [0.01, 0.1, 1.0] {
            let p = BeamProfile::new(sigma, 1.0, 0.0).unwrap();
            let g = QuadratureGrid::new(&p, 32, 16).unwrap();
            assert!(g.is_normalized());
            assert_eq!(g.nodes().len(), 512);
        }
        let p = BeamProfile::new(0.1, 1.0, 0.0).unwrap();
        assert!(QuadratureGrid::new(&p, 0, 4).is_err());
    }

    #[test]
    fn grid_second_moment_matches_small_angle_gaussian() {
        // ⟨θ²⟩ under sinθ e^{−θ²/σ²} is σ²(1 − σ²/6 + …) for small σ
        let sigma = 0.02;
        let p = BeamProfile::new(sigma, 1.0, 0.0).unwrap();
        let g = QuadratureGrid::new(&p, 48, 4).unwrap();
        let m2: f64 = g.nodes().iter().map(|n| n.weight * n.direction.theta().powi(2)).sum();
        assert_abs_diff_eq!(m2 / (sigma * sigma), 1.0 - sigma * sigma / 6.0, epsilon = 1e-6);
    }

    #[test]
    fn rotate_beam_examples() {
        let d = SphericalDirection::new(0.7, 1.9).unwrap();
        let same = rotate_beam(d, 0.0);
        assert_abs_diff_eq!(same.theta(), 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(same.phi(), 1.9, epsilon = 1e-15);
        let pole = SphericalDirection::new(0.0, 0.0).unwrap();
        for alpha in [0.4, -1.1, 2.5] {
            assert_abs_diff_eq!(rotate_beam(pole, alpha).theta(), f64::abs(alpha), epsilon = 1e-15);
        }
        let back = rotate_beam(rotate_beam(d, 1.3), -1.3);
        assert_abs_diff_eq!(back.theta(), 0.7, epsilon = 1e-12);
        assert_abs_diff_eq!(back.phi(), 1.9, epsilon = 1e-12);
    }

    #[test]
    fn rotate_beam_matches_closed_form() {
        let (t, p, a) = (1.1_f64, 0.8_f64, 0.6_f64);
        let r = rotate_beam(SphericalDirection::new(t, p).unwrap(), a);
        let ct = a.cos() * t.cos() + a.sin() * t.sin() * p.cos();
        assert_abs_diff_eq!(r.theta(), ct.acos(), epsilon = 1e-14);
        let ph = (t.sin() * p.sin()).atan2(a.cos() * t.sin() * p.cos() - a.sin() * t.cos());
        assert_abs_diff_eq!(r.phi(), ph.rem_euclid(TAU), epsilon = 1e-14);
    }

    #[test]
    fn node_basis_on_axis_beam_is_lab_basis() {
        let n = SphericalDirection::new(0.3, 2.0).unwrap();
        let (h, v) = node_basis(n, 0.0, 0.2).unwrap();
        let seen = transform_angles(n, 0.2).unwrap();
        let eh = linear_polarization(seen, Linear::H);
        let ev = linear_polarization(seen, Linear::V);
        for i in 0..3 {
            assert_abs_diff_eq!(h[i], eh.eps()[i + 1].re, epsilon = 1e-14);
            assert_abs_diff_eq!(v[i], ev.eps()[i + 1].re, epsilon = 1e-14);
        }
    }

    #[test]
    fn factorized_state_matches_pairwise_sum() {
        let beam = BeamProfile::new(0.4, 1.0, 0.5).unwrap();
        let grid = QuadratureGrid::new(&beam, 6, 5).unwrap();
        let beta = 0.3;
        let rho = diffracted_reduced_type1(&beam, &beam, beta, &grid, true).unwrap();
        let mut brute = CMatrix::zeros(16, 16);
        for na in grid.nodes() {
            let (ha, va) = node_basis(na.direction, 0.5, beta).unwrap();
            for nb in grid.nodes() {
                let (hb, vb) = node_basis(nb.direction, 0.5 + PI, beta).unwrap();
                let psi = crate::quantum::CVector::from_fn(16, |k, _| {
                    let (a, b) = (k / 4, k % 4);
                    if a == 0 || b == 0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    Complex64::new((ha[a - 1] * hb[b - 1] - va[a - 1] * vb[b - 1]) * FRAC_1_SQRT_2, 0.0)
                });
                brute += (&psi * psi.adjoint()) * Complex64::new(na.weight * nb.weight, 0.0);
            }
        }
        assert!((rho.mat() - brute).norm() < 1e-13);
    }

    #[test]
    fn narrow_beam_is_pure_bell_state() {
        let rho = opposite_pair(1e-5, 0.3, 0.0, 16, 8).unwrap();
        assert_abs_diff_eq!(purity(&rho), 1.0, epsilon = 1e-9);
        let target = central_bell_vector(0.3, 0.3 + PI);
        assert_abs_diff_eq!(fidelity_to_pure(&rho, &target).unwrap(), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(negativity(&rho, 0).unwrap(), 0.5, epsilon = 1e-9);
    }

    #[test]
    fn sharp_limit_negativity_is_boost_invariant() {
        for beta in [0.0, 0.3, -0.6] {
            let rho = opposite_pair(1e-6, 0.7, beta, 8, 8).unwrap();
            assert_abs_diff_eq!(negativity(&rho, 1).unwrap(), 0.5, epsilon = 1e-9);
        }
    }

    #[test]
    fn mismatched_grid_rejected() {
        let a = BeamProfile::new(0.1, 1.0, 0.0).unwrap();
        let b = BeamProfile::new(0.2, 1.0, 0.0).unwrap();
        let g = QuadratureGrid::new(&a, 8, 8).unwrap();
        assert!(diffracted_reduced_type1(&a, &b, 0.0, &g, true).is_err());
        assert!(diffracted_reduced_type1(&a, &a, 1.0, &g, true).is_err());
    }

    #[test]
    fn sweep_keeps_order() {
        let out = negativity_sweep(0.0, 0.3, &[0.4, 0.0, -0.2], 12, 12).unwrap();
        assert_eq!(out.iter().map(|r| r.0).collect::<Vec<_>>(), vec![0.4, 0.0, -0.2]);
    }
}
