//! Python bindings for the main siegelpw types and operations.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use siegelpw::geometry::{self, HeisenbergPoint, SiegelPoint};
use siegelpw::kernels::{self, KernelSpec};
use siegelpw::pw;
use siegelpw::sigma::SquareLattice;

fn err(e: siegelpw::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Group product on the Heisenberg group: returns `(z, t)` of `[w,s][z,t]`.
#[pyfunction]
fn group_product(
    w: Vec<Complex64>,
    s: f64,
    z: Vec<Complex64>,
    t: f64,
) -> PyResult<(Vec<Complex64>, f64)> {
    let p = geometry::group_product(&HeisenbergPoint::new(w, s), &HeisenbergPoint::new(z, t))
        .map_err(err)?;
    Ok((p.z, p.t))
}

/// Homogeneous norm of a Heisenberg point.
#[pyfunction]
fn homogeneous_norm(z: Vec<Complex64>, t: f64) -> f64 {
    geometry::homogeneous_norm(&HeisenbergPoint::new(z, t))
}

/// Height of a point of the Siegel domain; nonnegative on the closure.
#[pyfunction]
fn height(zprime: Vec<Complex64>, zlast: Complex64) -> f64 {
    SiegelPoint::new(zprime, zlast).rho()
}

/// Entire lattice function vanishing exactly on the square lattice of
/// density `b / (2 pi)`, truncated to factors with `|gamma| <= r_trunc`.
#[pyfunction]
fn sigma_eval(b: f64, z: Complex64, r_trunc: f64) -> PyResult<Complex64> {
    let lat = SquareLattice::new(b).map_err(err)?;
    Ok(siegelpw::sigma::sigma_eval(&lat, z, r_trunc))
}

/// Reproducing kernel of the weighted space at smoothness `s`, by spectral
/// quadrature with `q` nodes.
#[pyfunction]
#[pyo3(signature = (a, s, omega_prime, omega_last, zeta_prime, zeta_last, q = 64))]
fn kernel_eval(
    a: f64,
    s: f64,
    omega_prime: Vec<Complex64>,
    omega_last: Complex64,
    zeta_prime: Vec<Complex64>,
    zeta_last: Complex64,
    q: usize,
) -> PyResult<Complex64> {
    let n = omega_prime.len();
    let spec = KernelSpec::new(a, s, n).map_err(err)?;
    Ok(kernels::kernel_eval(
        &spec,
        &SiegelPoint::new(omega_prime, omega_last),
        &SiegelPoint::new(zeta_prime, zeta_last),
        q,
    ))
}

/// A band profile over `[-a, 0]`, the spectral side of a function on the
/// Siegel domain.
#[pyclass]
struct Profile {
    inner: pw::SpectralProfile,
}

#[pymethods]
impl Profile {
    /// Seeded random profile with polynomial fiber data of degree at most
    /// `deg_cap`.
    #[staticmethod]
    #[pyo3(signature = (a, s, n, maxdeg, q, deg_cap, seed))]
    fn random(
        a: f64,
        s: f64,
        n: usize,
        maxdeg: usize,
        q: usize,
        deg_cap: usize,
        seed: u64,
    ) -> PyResult<Self> {
        Ok(Profile {
            inner: pw::random_profile(a, s, n, maxdeg, q, deg_cap, seed).map_err(err)?,
        })
    }

    /// Squared norm of the profile.
    fn norm_sq(&self) -> f64 {
        pw::pw_norm(&self.inner)
    }

    /// Evaluate the synthesized function at a point of the Siegel domain.
    fn eval(&self, zprime: Vec<Complex64>, zlast: Complex64) -> Complex64 {
        pw::synthesize_eval(&self.inner, &SiegelPoint::new(zprime, zlast))
    }

    /// Squared boundary-restriction norm at height `h`.
    fn restriction_norm(&self, h: f64) -> f64 {
        pw::restriction_norm_at_height(&self.inner, h)
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn __repr__(&self) -> String {
        format!(
            "Profile(a={}, s={}, n={}, nodes={})",
            self.inner.a,
            self.inner.s,
            self.inner.dim(),
            self.inner.node_count()
        )
    }
}

#[pymodule]
fn siegelpw_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(group_product, m)?)?;
    m.add_function(wrap_pyfunction!(homogeneous_norm, m)?)?;
    m.add_function(wrap_pyfunction!(height, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_eval, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_eval, m)?)?;
    m.add_class::<Profile>()?;
    Ok(())
}
