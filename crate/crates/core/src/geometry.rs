//! Heisenberg group operations, Siegel coordinates and the anisotropic norms.
//!
//! The Siegel upper half-space is the set of `(z', z_{n+1})` in C^{n+1} with
//! `Im z_{n+1} > |z'|^2 / 4`; its boundary is identified with the Heisenberg
//! group C^n x R via the foliation coordinates `(z, t, h)` where `h` is the
//! height above the boundary.

use crate::{Complex64, Error, Result};

/// A point `[z, t]` of the Heisenberg group H_n.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisenbergPoint {
    pub z: Vec<Complex64>,
    pub t: f64,
}

/// A point `(z', z_{n+1})` of C^{n+1}.
#[derive(Debug, Clone, PartialEq)]
pub struct SiegelPoint {
    pub zprime: Vec<Complex64>,
    pub zlast: Complex64,
}

/// The `(z, t, h)` coordinates of a point of C^{n+1}; `h` is the height.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisenbergCoords {
    pub z: Vec<Complex64>,
    pub t: f64,
    pub h: f64,
}

impl HeisenbergPoint {
    pub fn new(z: Vec<Complex64>, t: f64) -> Self {
        HeisenbergPoint { z, t }
    }

    pub fn identity(n: usize) -> Self {
        HeisenbergPoint {
            z: vec![Complex64::new(0.0, 0.0); n],
            t: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.z.len()
    }

    /// Group inverse `[-z, -t]`.
    pub fn inverse(&self) -> Self {
        HeisenbergPoint {
            z: self.z.iter().map(|w| -w).collect(),
            t: -self.t,
        }
    }

    /// Anisotropic dilation `[r z, r^2 t]`.
    pub fn dilate(&self, r: f64) -> Self {
        HeisenbergPoint {
            z: self.z.iter().map(|w| w * r).collect(),
            t: r * r * self.t,
        }
    }

    pub fn norm_sq_z(&self) -> f64 {
        self.z.iter().map(|w| w.norm_sqr()).sum()
    }
}

/// Group product `[w, s][z, t] = [w + z, s + t - Im(w . conj(z)) / 2]`.
pub fn group_product(p: &HeisenbergPoint, q: &HeisenbergPoint) -> Result<HeisenbergPoint> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(p.dim(), q.dim()));
    }
    let cross: Complex64 = p.z.iter().zip(&q.z).map(|(w, z)| w * z.conj()).sum();
    let z = p.z.iter().zip(&q.z).map(|(w, z)| w + z).collect();
    Ok(HeisenbergPoint {
        z,
        t: p.t + q.t - 0.5 * cross.im,
    })
}

/// The homogeneous norm `|[z, t]| = (|z|^4 / 16 + t^2)^{1/4}`.
pub fn homogeneous_norm(p: &HeisenbergPoint) -> f64 {
    let z2 = p.norm_sq_z();
    (z2 * z2 / 16.0 + p.t * p.t).powf(0.25)
}

impl SiegelPoint {
    pub fn new(zprime: Vec<Complex64>, zlast: Complex64) -> Self {
        SiegelPoint { zprime, zlast }
    }

    pub fn dim(&self) -> usize {
        self.zprime.len()
    }

    /// Height function `rho(zeta) = Im z_{n+1} - |z'|^2 / 4`.
    pub fn rho(&self) -> f64 {
        let z2: f64 = self.zprime.iter().map(|w| w.norm_sqr()).sum();
        self.zlast.im - 0.25 * z2
    }
}

/// Foliation coordinates: `psi(z', z_{n+1}) = (z', Re z_{n+1}, rho)`.
pub fn psi(zeta: &SiegelPoint) -> HeisenbergCoords {
    HeisenbergCoords {
        z: zeta.zprime.clone(),
        t: zeta.zlast.re,
        h: zeta.rho(),
    }
}

/// Inverse map `(z, t, h) -> (z, t + i |z|^2 / 4 + i h)`.
pub fn psi_inverse(c: &HeisenbergCoords) -> SiegelPoint {
    let z2: f64 = c.z.iter().map(|w| w.norm_sqr()).sum();
    SiegelPoint {
        zprime: c.z.clone(),
        zlast: Complex64::new(c.t, 0.25 * z2 + c.h),
    }
}

/// The U-adapted norm `|[z, t]|^2 + |h|`.
pub fn u_adapted_norm(zeta: &SiegelPoint) -> f64 {
    let c = psi(zeta);
    let p = HeisenbergPoint::new(c.z, c.t);
    let hn = homogeneous_norm(&p);
    hn * hn + c.h.abs()
}

/// Boundary point of the Siegel domain above `[z, t]`.
pub fn boundary_point(p: &HeisenbergPoint) -> SiegelPoint {
    psi_inverse(&HeisenbergCoords {
        z: p.z.clone(),
        t: p.t,
        h: 0.0,
    })
}
