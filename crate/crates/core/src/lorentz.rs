//! Minkowski four-vectors, boosts and rotations, photon aberration and the
//! massless little-group (Wigner) phase.
//!
//! Natural units, c = 1, metric η = diag(+1, −1, −1, −1). Boosts are passive:
//! `boost_z(β)` gives the components of a vector as seen by an observer moving
//! with velocity +β along z, so a forward photon is red-shifted.

use std::f64::consts::{PI, TAU};
use std::ops::Mul;

use crate::error::{check_beta, Error, Result};

pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// Tolerance on the residual of mᵀηm − η accepted by [`LorentzTransform::from_matrix`].
pub const METRIC_TOL: f64 = 1e-9;

/// Relative tolerance on the Minkowski norm for a vector to count as null.
pub const NULL_TOL: f64 = 1e-9;

/// Maximum |Wk − k| accepted for a little-group element.
pub const STABILIZER_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourVector {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl FourVector {
    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self { t, x, y, z }
    }

    /// The reference null momentum k = (1, 0, 0, 1).
    pub const fn reference() -> Self {
        Self::new(1.0, 0.0, 0.0, 1.0)
    }

    /// Null momentum of the given energy pointing along `dir`.
    pub fn null(dir: SphericalDirection, energy: f64) -> Self {
        let n = dir.unit();
        Self::new(energy, energy * n[0], energy * n[1], energy * n[2])
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.t, self.x, self.y, self.z]
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// t² − x² − y² − z²
    pub fn minkowski_norm(&self) -> f64 {
        self.t * self.t - self.x * self.x - self.y * self.y - self.z * self.z
    }

    pub fn is_null(&self) -> bool {
        self.minkowski_norm().abs() <= NULL_TOL * self.t * self.t
    }

    pub fn direction(&self) -> SphericalDirection {
        SphericalDirection::from_vector(self.spatial())
    }
}

/// Polar and azimuthal angle of a unit 3-vector. θ ∈ [0, π], φ ∈ [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalDirection {
    theta: f64,
    phi: f64,
}

impl SphericalDirection {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) || !phi.is_finite() {
            return Err(Error::Domain(format!("direction (theta = {theta}, phi = {phi}) needs theta in [0, pi]")));
        }
        Ok(Self::from_parts(theta, phi))
    }

    /// Builds a direction from angles already known to be in range; φ is wrapped.
    pub(crate) fn from_parts(theta: f64, phi: f64) -> Self {
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Self { theta: theta.clamp(0.0, PI), phi }
    }

    /// Direction of a nonzero 3-vector. φ is taken as 0 on the z axis.
    pub fn from_vector(v: [f64; 3]) -> Self {
        let rho = v[0].hypot(v[1]);
        let theta = rho.atan2(v[2]);
        let phi = if rho == 0.0 { 0.0 } else { v[1].atan2(v[0]) };
        Self::from_parts(theta, phi)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// (sinθ cosφ, sinθ sinφ, cosθ)
    pub fn unit(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// The opposite direction (π − θ, φ + π).
    pub fn antipode(&self) -> Self {
        Self::from_parts(PI - self.theta, self.phi + PI)
    }

    /// Angle between two directions.
    pub fn angle_to(&self, other: &Self) -> f64 {
        let a = self.unit();
        let b = other.unit();
        let cross = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
        let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        norm3(cross).atan2(dot)
    }
}

/// A real 4×4 matrix preserving η, proper and orthochronous.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzTransform {
    m: [[f64; 4]; 4],
}

impl LorentzTransform {
    pub const fn identity() -> Self {
        Self { m: [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]] }
    }

    /// Validates metric preservation (relative to the largest entry squared),
    /// det = +1 and m00 ≥ 1.
    pub fn from_matrix(m: [[f64; 4]; 4]) -> Result<Self> {
        let l = Self { m };
        let scale = m.iter().flatten().fold(1.0_f64, |a, v| a.max(v.abs()));
        let res = l.metric_residual();
        if !res.is_finite() || res > METRIC_TOL * scale * scale {
            return Err(Error::Domain(format!("matrix does not preserve the metric (residual {res:e})")));
        }
        if m[0][0] < 1.0 - METRIC_TOL * scale {
            return Err(Error::Domain("transform is not orthochronous".into()));
        }
        if l.determinant() <= 0.0 {
            return Err(Error::Domain("transform is not proper".into()));
        }
        Ok(l)
    }

    pub fn matrix(&self) -> &[[f64; 4]; 4] {
        &self.m
    }

    pub fn boost_z(beta: f64) -> Result<Self> {
        check_beta(beta)?;
        let gamma = 1.0 / (1.0 - beta * beta).sqrt();
        let mut m = Self::identity().m;
        m[0][0] = gamma;
        m[3][3] = gamma;
        m[0][3] = -gamma * beta;
        m[3][0] = -gamma * beta;
        Ok(Self { m })
    }

    pub fn rotation_y(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let mut m = Self::identity().m;
        m[1][1] = c;
        m[1][3] = s;
        m[3][1] = -s;
        m[3][3] = c;
        Self { m }
    }

    pub fn rotation_z(phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        let mut m = Self::identity().m;
        m[1][1] = c;
        m[1][2] = -s;
        m[2][1] = s;
        m[2][2] = c;
        Self { m }
    }

    pub fn apply(&self, v: FourVector) -> FourVector {
        let a = v.to_array();
        let mut out = [0.0; 4];
        for (i, row) in self.m.iter().enumerate() {
            out[i] = row.iter().zip(a).map(|(r, x)| r * x).sum();
        }
        FourVector::from_array(out)
    }

    /// η mᵀ η
    pub fn inverse(&self) -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = METRIC[i] * self.m[j][i] * METRIC[j];
            }
        }
        Self { m }
    }

    /// max |(mᵀηm − η)_ij|
    pub fn metric_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for (i, &eta) in METRIC.iter().enumerate() {
            for j in 0..4 {
                let g: f64 = (0..4).map(|k| self.m[k][i] * METRIC[k] * self.m[k][j]).sum();
                let target = if i == j { eta } else { 0.0 };
                worst = worst.max((g - target).abs());
            }
        }
        worst
    }

    pub fn determinant(&self) -> f64 {
        nalgebra::Matrix4::from_fn(|i, j| self.m[i][j]).determinant()
    }

    /// Largest entrywise difference to another transform.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.m.iter().flatten().zip(other.m.iter().flatten()).fold(0.0, |a, (x, y)| a.max((x - y).abs()))
    }
}

impl Mul for LorentzTransform {
    type Output = LorentzTransform;

    fn mul(self, rhs: Self) -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = (0..4).map(|k| self.m[i][k] * rhs.m[k][j]).sum();
            }
        }
        Self { m }
    }
}

pub fn boost_z(beta: f64) -> Result<LorentzTransform> {
    LorentzTransform::boost_z(beta)
}

pub fn rotation_y(theta: f64) -> LorentzTransform {
    LorentzTransform::rotation_y(theta)
}

pub fn rotation_z(phi: f64) -> LorentzTransform {
    LorentzTransform::rotation_z(phi)
}

pub fn apply(transform: &LorentzTransform, v: FourVector) -> FourVector {
    transform.apply(v)
}

/// Relativistic velocity addition (β₁ + β₂)/(1 + β₁β₂).
pub fn add_velocities(b1: f64, b2: f64) -> Result<f64> {
    check_beta(b1)?;
    check_beta(b2)?;
    Ok((b1 + b2) / (1.0 + b1 * b2))
}

/// Aberration of a photon direction under `boost_z(beta)`. The azimuth is
/// unchanged; θ′ = atan2(sinθ, γ(cosθ − β)), which fixes the quadrant of
/// the sinθ′ relation and keeps the map a bijection of [0, π].
pub fn transform_angles(dir: SphericalDirection, beta: f64) -> Result<SphericalDirection> {
    check_beta(beta)?;
    let gamma = 1.0 / (1.0 - beta * beta).sqrt();
    let (s, c) = dir.theta().sin_cos();
    Ok(SphericalDirection::from_parts(s.atan2(gamma * (c - beta)), dir.phi()))
}

/// Small-β power-law approximation π(θ/π)^(1 − 2β/(π ln 2)) of the aberrated polar angle.
pub fn approx_transform_theta(theta: f64, beta: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::Domain(format!("theta = {theta} outside [0, pi]")));
    }
    check_beta(beta)?;
    let exponent = 1.0 - 2.0 * beta / (PI * std::f64::consts::LN_2);
    Ok(PI * (theta / PI).powf(exponent))
}

/// L(p) = R_z(φ) R_y(θ) B(ξ), taking k = (1, 0, 0, 1) to the null vector p.
/// B(ξ) scales k to energy e^ξ = p.t.
pub fn standard_boost(p: FourVector) -> Result<LorentzTransform> {
    if !(p.t > 0.0) || !p.is_null() {
        return Err(Error::Domain(format!(
            "standard boost needs a future null vector, got {:?} (norm {:e})",
            p,
            p.minkowski_norm()
        )));
    }
    let e2 = p.t * p.t;
    let b = LorentzTransform::boost_z(-(e2 - 1.0) / (e2 + 1.0))?;
    let dir = p.direction();
    Ok(LorentzTransform::rotation_z(dir.phi()) * LorentzTransform::rotation_y(dir.theta()) * b)
}

/// W = L(Λp)⁻¹ Λ L(p), checked to stabilize the reference vector.
pub fn little_group_element(transform: &LorentzTransform, p: FourVector) -> Result<LorentzTransform> {
    let lp = standard_boost(p)?;
    let lq = standard_boost(transform.apply(p))?;
    let w = lq.inverse() * *transform * lp;
    let k = FourVector::reference();
    let wk = w.apply(k);
    let res = (wk.t - k.t).abs().max(wk.x.abs()).max(wk.y.abs()).max((wk.z - k.z).abs());
    if !(res <= STABILIZER_TOL) {
        return Err(Error::Numerical(format!("little-group element moves the reference vector by {res:e}")));
    }
    Ok(w)
}

/// Rotation angle of an ISO(2) element W(a, b, Θ) = S(a, b)·R_z(Θ). The null
/// translations S only add multiples of k to e_x and e_y, so the x and y
/// components of W e_x are (cosΘ, sinΘ). Returns Θ ∈ (−π, π].
pub fn little_group_angle(w: &LorentzTransform) -> f64 {
    let m = w.matrix();
    let a = m[2][1].atan2(m[1][1]);
    if a <= -PI {
        PI
    } else {
        a
    }
}

/// Wigner phase Θ(Λ, p) of a massless particle.
pub fn wigner_phase(transform: &LorentzTransform, p: FourVector) -> Result<f64> {
    Ok(little_group_angle(&little_group_element(transform, p)?))
}

/// Wraps an angle to (−π, π].
pub fn wrap_angle(a: f64) -> f64 {
    let r = (a + PI).rem_euclid(TAU) - PI;
    if r <= -PI {
        r + TAU
    } else {
        r
    }
}

pub(crate) fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Active rotation about y applied to a 3-vector.
pub(crate) fn rotate_y3(v: [f64; 3], angle: f64) -> [f64; 3] {
    let (s, c) = angle.sin_cos();
    [c * v[0] + s * v[2], v[1], -s * v[0] + c * v[2]]
}

/// Active rotation about z applied to a 3-vector.
pub(crate) fn rotate_z3(v: [f64; 3], angle: f64) -> [f64; 3] {
    let (s, c) = angle.sin_cos();
    [c * v[0] - s * v[1], s * v[0] + c * v[1], v[2]]
}
