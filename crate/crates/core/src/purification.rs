//! Recurrence purification of diffracted polarization pairs and the photon
//! budget of a link.
//!
//! A pair is handled in the three spatial polarization components of each
//! photon, expressed in local frames adapted to the beams: Alice uses
//! (h_A, v_A, k̂_A) and Bob (h_B, −v_B, k̂_B). In these frames the target
//! (|hh⟩ − |vv⟩)/√2 is Φ⁺ = (|00⟩ + |11⟩)/√2 and level 2 is the
//! longitudinal component that diffraction leaks into.
//!
//! One round takes two copies, applies on each arm a permutation of the
//! target photon's level controlled by the source photon's level, measures
//! both target photons and keeps the source pair when the outcomes agree.
//! Before the round the pair is twirled onto the states invariant under
//! U ⊗ U* with U ∈ U(2) ⊕ U(1), which leaves Φ⁺ fixed.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::diffraction::{beam_frame, opposite_pair};
use crate::error::{Error, Result};
use crate::quantum::{fidelity_to_pure, purity, CMatrix, CVector, DensityMatrix};

pub const D: usize = 3;

/// Success probabilities below this make a round degenerate.
pub const MIN_SUCCESS: f64 = 1e-12;

/// Upper bound on rounds attempted by [`photons_required`].
pub const MAX_ROUNDS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkParams {
    /// Distance between the satellites (m).
    pub length: f64,
    pub wavelength: f64,
    /// Transmitter aperture (m).
    pub d_s: f64,
    /// Receiver aperture (m).
    pub d_a: f64,
}

impl LinkParams {
    pub fn new(length: f64, wavelength: f64, d_s: f64, d_a: f64) -> Result<Self> {
        let p = Self { length, wavelength, d_s, d_a };
        p.validate()?;
        Ok(p)
    }

    /// 13 000 km between satellites, 800 nm light, 1 m apertures.
    pub fn reference() -> Self {
        Self { length: 1.3e7, wavelength: 8e-7, d_s: 1.0, d_a: 1.0 }
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in
            [("length", self.length), ("wavelength", self.wavelength), ("d_s", self.d_s), ("d_a", self.d_a)]
        {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!("link parameter {name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Photons sent per photon received, L²λ²/(d_S² d_A²).
pub fn attenuation(params: &LinkParams) -> Result<f64> {
    params.validate()?;
    let LinkParams { length, wavelength, d_s, d_a } = *params;
    Ok((length * wavelength).powi(2) / (d_s * d_a).powi(2))
}

/// Φ⁺ on the 3 ⊗ 3 frame basis.
pub fn phi_plus() -> CVector {
    let mut v = CVector::zeros(D * D);
    v[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    v[D + 1] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    v
}

pub fn fidelity(rho: &DensityMatrix) -> Result<f64> {
    fidelity_to_pure(rho, &phi_plus())
}

/// Drops the time components of a [4, 4] polarization state and rewrites it
/// in the adapted frames of beams with axes at `alpha_a` and `alpha_b`.
pub fn to_bell_frame(rho: &DensityMatrix, alpha_a: f64, alpha_b: f64) -> Result<DensityMatrix> {
    if rho.dims() != [4, 4] {
        return Err(Error::Dimension(format!("expected dims [4, 4], got {:?}", rho.dims())));
    }
    let spatial = |k: usize| (k / 4 >= 1 && k % 4 >= 1).then(|| 3 * (k / 4 - 1) + (k % 4 - 1));
    let mut s = CMatrix::zeros(9, 9);
    let mut kept = 0.0;
    for i in 0..16 {
        for j in 0..16 {
            if let (Some(a), Some(b)) = (spatial(i), spatial(j)) {
                s[(a, b)] = rho.mat()[(i, j)];
                if a == b {
                    kept += rho.mat()[(i, j)].re;
                }
            }
        }
    }
    if !((kept - 1.0).abs() <= 1e-10) {
        return Err(Error::Numerical(format!(
            "polarization state has weight {} outside the spatial components",
            1.0 - kept
        )));
    }
    let fa = beam_frame(alpha_a);
    let fb = beam_frame(alpha_b) * Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, -1.0, 1.0));
    let k = fa.kronecker(&fb);
    let u = CMatrix::from_fn(D * D, D * D, |i, j| Complex64::new(k[(i, j)], 0.0));
    DensityMatrix::new(u.transpose() * s * u, vec![D, D])
}

/// Diffracted opposite-direction pair in the adapted frames, ready for purification.
pub fn diffracted_input(sigma: f64, alpha: f64, beta: f64, n_theta: usize, n_phi: usize) -> Result<DensityMatrix> {
    to_bell_frame(&opposite_pair(sigma, alpha, beta, n_theta, n_phi)?, alpha, alpha + std::f64::consts::PI)
}

fn idx(a: usize, b: usize) -> usize {
    D * a + b
}

/// Projection onto the operators commuting with every U ⊗ U*, U ∈ U(2) ⊕ U(1).
/// The result is fixed by six numbers: the Φ⁺ weight, the rest of the
/// transverse block, the two mixed transverse/longitudinal blocks, the
/// doubly longitudinal weight and its coherence with Φ⁺.
pub fn twirl(rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dims() != [D, D] {
        return Err(Error::Dimension(format!("twirl expects dims [3, 3], got {:?}", rho.dims())));
    }
    let m = rho.mat();
    let phi = phi_plus();
    let a = (phi.adjoint() * m * &phi)[(0, 0)].re;
    let l = idx(2, 2);
    let f: Complex64 = (0..D * D).map(|i| phi[i] * m[(i, l)]).sum();
    let mut out = CMatrix::zeros(D * D, D * D);
    let mut qq = 0.0;
    let (mut ql, mut lq) = (0.0, 0.0);
    for q in 0..2 {
        for r in 0..2 {
            qq += m[(idx(q, r), idx(q, r))].re;
        }
        ql += m[(idx(q, 2), idx(q, 2))].re;
        lq += m[(idx(2, q), idx(2, q))].re;
    }
    let rest = (qq - a) / 3.0;
    for q in 0..2 {
        for r in 0..2 {
            out[(idx(q, r), idx(q, r))] += Complex64::new(rest, 0.0);
        }
        out[(idx(q, 2), idx(q, 2))] = Complex64::new(ql / 2.0, 0.0);
        out[(idx(2, q), idx(2, q))] = Complex64::new(lq / 2.0, 0.0);
    }
    out += (&phi * phi.adjoint()) * Complex64::new(a - rest, 0.0);
    out[(l, l)] = m[(l, l)];
    for i in 0..D * D {
        out[(i, l)] += phi[i] * f;
        out[(l, i)] += phi[i] * f.conj();
    }
    DensityMatrix::new(out, vec![D, D])
}

/// Row c is the permutation applied when the control level is c.
pub type Permutations = [[usize; D]; D];

/// A recurrence round: `perms_a[c]` is the permutation Alice applies to her
/// target level when her source level is c (`perms_a[c][t]` is the image of
/// t), likewise for Bob.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Protocol {
    pub perms_a: Permutations,
    pub perms_b: Permutations,
    pub twirl: bool,
}

impl Protocol {
    /// The protocol used throughout the crate. On the transverse levels
    /// Alice's control-1 cycle and Bob's control-1 swap agree, so Φ⁺ keeps
    /// fidelity 1; the asymmetric longitudinal rows make level-2 errors on
    /// either arm show up as mismatched outcomes.
    pub fn standard() -> Self {
        Self { perms_a: [[0, 1, 2], [1, 2, 0], [0, 2, 1]], perms_b: [[2, 1, 0], [1, 0, 2], [2, 0, 1]], twirl: true }
    }

    /// Bilateral mod-3 shift t → t + c on both arms, no twirl.
    pub fn generalized_xor() -> Self {
        let shift = [[0, 1, 2], [1, 2, 0], [2, 0, 1]];
        Self { perms_a: shift, perms_b: shift, twirl: false }
    }

    fn inverses(&self) -> Result<(Permutations, Permutations)> {
        let inv = |perms: &Permutations| -> Result<Permutations> {
            let mut out = [[usize::MAX; D]; D];
            for (c, p) in perms.iter().enumerate() {
                for (t, &img) in p.iter().enumerate() {
                    if img >= D || out[c][img] != usize::MAX {
                        return Err(Error::Domain(format!("row {c} of the protocol is not a permutation: {p:?}")));
                    }
                    out[c][img] = t;
                }
            }
            Ok(out)
        };
        Ok((inv(&self.perms_a)?, inv(&self.perms_b)?))
    }
}

impl Default for Protocol {
    fn default() -> Self {
        Self::standard()
    }
}

/// One round on two copies of `rho`; returns the renormalized kept pair and
/// the probability that the outcomes agree.
pub fn purify_round(rho: &DensityMatrix, protocol: &Protocol) -> Result<(DensityMatrix, f64)> {
    if rho.dims() != [D, D] {
        return Err(Error::Dimension(format!("purification expects dims [3, 3], got {:?}", rho.dims())));
    }
    let (inv_a, inv_b) = protocol.inverses()?;
    let twirled;
    let r = if protocol.twirl {
        twirled = twirl(rho)?;
        twirled.mat()
    } else {
        rho.mat()
    };
    let mut out = CMatrix::zeros(D * D, D * D);
    for a in 0..D {
        for b in 0..D {
            for a2 in 0..D {
                for b2 in 0..D {
                    let target: Complex64 =
                        (0..D).map(|m| r[(idx(inv_a[a][m], inv_b[b][m]), idx(inv_a[a2][m], inv_b[b2][m]))]).sum();
                    out[(idx(a, b), idx(a2, b2))] = r[(idx(a, b), idx(a2, b2))] * target;
                }
            }
        }
    }
    let success = out.trace().re;
    if !(success >= MIN_SUCCESS) {
        return Err(Error::Degenerate(success));
    }
    Ok((DensityMatrix::new(out.unscale(success), vec![D, D])?, success))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PurificationRound {
    pub k: usize,
    pub fidelity: f64,
    pub purity: f64,
    /// Success probability of this round; 1 for the input row.
    pub success: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Reached,
    /// The listed round lowered the fidelity.
    FidelityDecreased(usize),
    RoundLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PurificationTrace {
    /// Row k = 0 is the input.
    pub rounds: Vec<PurificationRound>,
    /// 2^k 𝒜 / Π s_i over the rounds kept before stopping.
    pub photons_required: f64,
    pub outcome: Outcome,
}

impl PurificationTrace {
    pub fn reached(&self) -> bool {
        self.outcome == Outcome::Reached
    }

    /// Rounds performed (excluding the input row).
    pub fn steps(&self) -> usize {
        self.rounds.len() - 1
    }
}

/// 2^k 𝒜 / Π s_i for k = `successes.len()` rounds.
pub fn photon_cost(attenuation: f64, successes: &[f64]) -> f64 {
    successes.iter().fold(attenuation, |acc, s| acc * 2.0 / s)
}

/// Runs rounds until the purity reaches `target_purity`. A round that lowers
/// the fidelity stops the run with a failure outcome; that round stays in the
/// trace but does not count toward the photon cost.
pub fn photons_required(
    rho0: &DensityMatrix,
    target_purity: f64,
    attenuation: f64,
    protocol: &Protocol,
) -> Result<PurificationTrace> {
    if !(target_purity > 0.0 && target_purity <= 1.0) {
        return Err(Error::Domain(format!("target purity {target_purity} outside (0, 1]")));
    }
    if !(attenuation > 0.0) || !attenuation.is_finite() {
        return Err(Error::Domain(format!("attenuation must be positive, got {attenuation}")));
    }
    let mut rho = rho0.clone();
    let mut rounds = vec![PurificationRound { k: 0, fidelity: fidelity(&rho)?, purity: purity(&rho), success: 1.0 }];
    let mut successes = Vec::new();
    let outcome = loop {
        let last = *rounds.last().expect("input row");
        if last.purity >= target_purity {
            break Outcome::Reached;
        }
        if successes.len() == MAX_ROUNDS {
            break Outcome::RoundLimit;
        }
        let (next, s) = purify_round(&rho, protocol)?;
        let row = PurificationRound { k: last.k + 1, fidelity: fidelity(&next)?, purity: purity(&next), success: s };
        rounds.push(row);
        if row.fidelity < last.fidelity {
            break Outcome::FidelityDecreased(row.k);
        }
        successes.push(s);
        rho = next;
    };
    Ok(PurificationTrace { rounds, photons_required: photon_cost(attenuation, &successes), outcome })
}
