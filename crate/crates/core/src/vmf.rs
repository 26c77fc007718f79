//! The von Mises–Fisher scattering model on the unit sphere.
//!
//! Directions of arrival are parameterised by azimuth `φ ∈ [−π, π]` and
//! elevation `ψ ∈ [−π/2, π/2]`, with unit vector
//! `(cos φ cos ψ, sin φ cos ψ, sin ψ)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::scalar::Real;
use crate::specfun;

/// RNG words consumed per direction sample (two `u64` draws).
const WORDS_PER_SAMPLE: u128 = 4;

/// Samples per parallel work unit in [`VmfScattering::sample_directions`].
const SAMPLE_CHUNK: usize = 1 << 14;

/// Unit vector in three dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction3<T> {
    x: T,
    y: T,
    z: T,
}

impl<T: Real> Direction3<T> {
    /// Builds a direction from components that already have unit norm.
    pub fn new(x: T, y: T, z: T) -> Result<Self> {
        let n2 = x * x + y * y + z * z;
        if !n2.is_finite() || (n2 - T::one()).abs() > T::check_tolerance() {
            return domain("|d|^2", n2.as_f64(), "unit norm within 1e-12");
        }
        Ok(Self { x, y, z })
    }

    /// Builds a direction by normalising an arbitrary non-zero vector.
    pub fn normalized(x: T, y: T, z: T) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if !n.is_finite() || n == T::zero() {
            return domain("|d|", n.as_f64(), "finite and non-zero");
        }
        Ok(Self {
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    pub fn x(&self) -> T {
        self.x
    }

    pub fn y(&self) -> T {
        self.y
    }

    pub fn z(&self) -> T {
        self.z
    }

    pub fn dot(&self, other: &Self) -> T {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn neg(&self) -> Self {
        Self {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    /// Angle to `other` in `[0, π]`, with the dot product clamped to `[−1, 1]`.
    pub fn angle_to(&self, other: &Self) -> T {
        self.dot(other).max(-T::one()).min(T::one()).acos()
    }

    /// Azimuth/elevation of this direction. At the poles (`|z| = 1`) the
    /// azimuth is undefined and reported as 0.
    pub fn to_angles(&self) -> AnglePair<T> {
        let z = self.z.max(-T::one()).min(T::one());
        let psi = z.asin();
        let phi = if self.x == T::zero() && self.y == T::zero() {
            T::zero()
        } else {
            self.y.atan2(self.x)
        };
        AnglePair { phi, psi }
    }

    /// Unit vector `cos θ · self + sin θ · u` where `u ⟂ self` lies in the
    /// plane spanned by `self` and `toward`. Falls back to an arbitrary
    /// perpendicular when `toward` is parallel to `self`.
    pub fn rotated_toward(&self, toward: &Self, theta: T) -> Self {
        let d = self.dot(toward);
        let (mut ux, mut uy, mut uz) = (
            toward.x - d * self.x,
            toward.y - d * self.y,
            toward.z - d * self.z,
        );
        let mut n = (ux * ux + uy * uy + uz * uz).sqrt();
        if n <= T::lit(1e-9) {
            let p = self.any_perpendicular();
            ux = p.x;
            uy = p.y;
            uz = p.z;
            n = T::one();
        }
        let (s, c) = theta.sin_cos();
        Self {
            x: c * self.x + s * ux / n,
            y: c * self.y + s * uy / n,
            z: c * self.z + s * uz / n,
        }
    }

    fn any_perpendicular(&self) -> Self {
        // Cross with the coordinate axis least aligned with self.
        let (ax, ay, az) = (self.x.abs(), self.y.abs(), self.z.abs());
        let (cx, cy, cz) = if ax <= ay && ax <= az {
            (T::zero(), -self.z, self.y)
        } else if ay <= az {
            (self.z, T::zero(), -self.x)
        } else {
            (-self.y, self.x, T::zero())
        };
        let n = (cx * cx + cy * cy + cz * cz).sqrt();
        Self {
            x: cx / n,
            y: cy / n,
            z: cz / n,
        }
    }
}

/// Azimuth and elevation angles of arrival, in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnglePair<T> {
    phi: T,
    psi: T,
}

impl<T: Real> AnglePair<T> {
    pub fn new(phi: T, psi: T) -> Result<Self> {
        if !phi.is_finite() || phi.abs() > T::PI() {
            return domain("phi", phi.as_f64(), "|phi| <= pi");
        }
        if !psi.is_finite() || psi.abs() > T::FRAC_PI_2() {
            return domain("psi", psi.as_f64(), "|psi| <= pi/2");
        }
        Ok(Self { phi, psi })
    }

    pub fn phi(&self) -> T {
        self.phi
    }

    pub fn psi(&self) -> T {
        self.psi
    }

    pub fn to_direction(&self) -> Direction3<T> {
        angles_to_unit(self.phi, self.psi)
    }
}

fn angles_to_unit<T: Real>(phi: T, psi: T) -> Direction3<T> {
    let (sp, cp) = phi.sin_cos();
    let (ss, cs) = psi.sin_cos();
    Direction3 {
        x: cp * cs,
        y: sp * cs,
        z: ss,
    }
}

/// vMF scattering cluster: mean azimuth `mu_phi`, mean elevation `mu_psi`
/// and concentration `kappa`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VmfScattering<T> {
    mu_phi: T,
    mu_psi: T,
    kappa: T,
}

impl<T: Real> VmfScattering<T> {
    pub fn new(mu_phi: T, mu_psi: T, kappa: T) -> Result<Self> {
        if !mu_phi.is_finite() || mu_phi.abs() > T::PI() {
            return domain("mu_phi", mu_phi.as_f64(), "|mu_phi| <= pi");
        }
        if !mu_psi.is_finite() || mu_psi.abs() > T::FRAC_PI_2() {
            return domain("mu_psi", mu_psi.as_f64(), "|mu_psi| <= pi/2");
        }
        if !kappa.is_finite() || kappa < T::zero() {
            return domain("kappa", kappa.as_f64(), "finite and >= 0");
        }
        Ok(Self {
            mu_phi,
            mu_psi,
            kappa,
        })
    }

    /// Isotropic scattering (`κ = 0`).
    pub fn isotropic() -> Self {
        Self {
            mu_phi: T::zero(),
            mu_psi: T::zero(),
            kappa: T::zero(),
        }
    }

    pub fn mu_phi(&self) -> T {
        self.mu_phi
    }

    pub fn mu_psi(&self) -> T {
        self.mu_psi
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }

    /// Mean scattering direction `k_μ`.
    pub fn mean_direction(&self) -> Direction3<T> {
        angles_to_unit(self.mu_phi, self.mu_psi)
    }

    /// Joint density over `(φ, ψ)`:
    /// `κ cos ψ / (4π sinh κ) · exp(κ k̂·k_μ)`.
    pub fn pdf(&self, angles: &AnglePair<T>) -> T {
        self.pdf_unchecked(angles.phi, angles.psi)
    }

    pub(crate) fn pdf_unchecked(&self, phi: T, psi: T) -> T {
        let (ss, cs) = psi.sin_cos();
        let (sm, cm) = self.mu_psi.sin_cos();
        let cos_angle = cm * cs * (phi - self.mu_phi).cos() + sm * ss;
        // κ/sinh κ · e^{κ t} = exp(ln(κ/sinh κ) + κ t), finite for any κ
        let log_scale = specfun::ln_kappa_over_sinh_unchecked(self.kappa);
        cs.max(T::zero()) / (T::lit(4.0) * T::PI()) * (log_scale + self.kappa * cos_angle).exp()
    }

    /// Draws `n` i.i.d. directions. Sample `i` depends only on `(seed, i)`,
    /// so the work is split across threads without changing the output.
    ///
    /// Generator: ChaCha8 seeded with `seed_from_u64(seed)`, stream 0; sample
    /// `i` starts at word position `4i`.
    pub fn sample_directions(&self, n: usize, seed: u64) -> Vec<Direction3<T>> {
        let chunks: Vec<Vec<Direction3<T>>> = (0..n.div_ceil(SAMPLE_CHUNK))
            .into_par_iter()
            .map(|c| {
                let start = c * SAMPLE_CHUNK;
                let count = SAMPLE_CHUNK.min(n - start);
                self.sample_directions_range(seed, start, count)
            })
            .collect();
        chunks.into_iter().flatten().collect()
    }

    /// Samples `start..start + count` of the sequence defined by `seed`.
    pub fn sample_directions_range(
        &self,
        seed: u64,
        start: usize,
        count: usize,
    ) -> Vec<Direction3<T>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_word_pos(WORDS_PER_SAMPLE * start as u128);
        let frame = PoleFrame::new(self.mean_direction());
        let shrink = -(-T::lit(2.0) * self.kappa).exp_m1();
        (0..count)
            .map(|_| {
                let xi: f64 = 1.0 - rng.gen::<f64>();
                let turn: f64 = rng.gen::<f64>();
                let u = self.axial_component(T::lit(xi), shrink);
                let theta = T::lit(turn) * T::lit(2.0) * T::PI();
                let r = ((T::one() - u) * (T::one() + u)).max(T::zero()).sqrt();
                let (s, c) = theta.sin_cos();
                frame.to_world(r * c, r * s, u)
            })
            .collect()
    }

    /// Inverse CDF of `u = k̂·k_μ`, density `∝ e^{κu}` on `[−1, 1]`:
    /// `u = 1 + ln(1 − (1−ξ)(1 − e^{−2κ})) / κ`. `shrink = 1 − e^{−2κ}`.
    fn axial_component(&self, xi: T, shrink: T) -> T {
        let u = if self.kappa == T::zero() {
            T::lit(2.0) * xi - T::one()
        } else {
            T::one() + (-(T::one() - xi) * shrink).ln_1p() / self.kappa
        };
        u.max(-T::one()).min(T::one())
    }
}

/// Orthogonal map taking the `+z` pole onto a target direction, built from a
/// single Householder reflection.
struct PoleFrame<T> {
    v: [T; 3],
    scale: T,
    sign: T,
}

impl<T: Real> PoleFrame<T> {
    fn new(target: Direction3<T>) -> Self {
        // H = I − 2vvᵀ/vᵀv maps e_z to ±target. Pick the sign that keeps
        // vᵀv ≥ 2.
        let (v, sign) = if target.z <= T::zero() {
            ([-target.x, -target.y, T::one() - target.z], T::one())
        } else {
            ([target.x, target.y, T::one() + target.z], -T::one())
        };
        let vv = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        Self {
            v,
            scale: T::lit(2.0) / vv,
            sign,
        }
    }

    fn to_world(&self, x: T, y: T, z: T) -> Direction3<T> {
        let proj = (self.v[0] * x + self.v[1] * y + self.v[2] * z) * self.scale;
        Direction3 {
            x: self.sign * (x - proj * self.v[0]),
            y: self.sign * (y - proj * self.v[1]),
            z: self.sign * (z - proj * self.v[2]),
        }
    }
}
