use charsum::character::CharacterValue;
use charsum::construct::{self, Manifest};
use charsum::sums::{self, Coefficients, ScanConfig};
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

create_exception!(pycharsum, CharsumError, PyException);

fn err(e: charsum::Error) -> PyErr {
    CharsumError::new_err(format!("{}: {e}", e.category()))
}

fn json<T: serde::Serialize>(value: &T) -> PyResult<String> {
    serde_json::to_string(value).map_err(|e| CharsumError::new_err(e.to_string()))
}

#[pyfunction]
fn gcd(a: i64, b: i64) -> u64 {
    charsum::arith::gcd(a, b)
}

#[pyfunction]
fn is_prime(n: u64) -> bool {
    charsum::arith::is_prime(n)
}

/// `[(p, e), ...]` with `n = ∏ p^e`.
#[pyfunction]
fn factorize(n: u128) -> PyResult<Vec<(u64, u32)>> {
    Ok(charsum::arith::factorize(n).map_err(err)?.factors().to_vec())
}

/// Returns `(x, M)` with `x ≡ a_i (mod m_i)` and `M = ∏ m_i`.
#[pyfunction]
fn crt_solve(congruences: Vec<(i64, u64)>) -> PyResult<(u64, u64)> {
    charsum::arith::crt_solve(&congruences).map_err(err)
}

#[pyfunction]
fn jacobi(a: i64, n: u64) -> PyResult<i8> {
    charsum::arith::jacobi(a, n).map_err(err)
}

#[pyfunction]
fn primitive_root(m: u64) -> PyResult<u64> {
    charsum::arith::primitive_root(m).map_err(err)
}

#[pyfunction]
fn discrete_log(x: i64, generator: u64, modulus: u64) -> PyResult<u64> {
    charsum::arith::discrete_log(x, generator, modulus).map_err(err)
}

/// A Dirichlet character, written canonically as e.g. `"933:3^1[1];311^1[155]"`.
#[pyclass(frozen, eq, skip_from_py_object, module = "pycharsum")]
#[derive(Clone, PartialEq)]
struct DirichletCharacter {
    inner: charsum::DirichletCharacter,
}

impl From<charsum::DirichletCharacter> for DirichletCharacter {
    fn from(inner: charsum::DirichletCharacter) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl DirichletCharacter {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(text.parse::<charsum::DirichletCharacter>().map_err(err)?.into())
    }

    #[staticmethod]
    fn from_exponents(modulus: u64, exponents: Vec<Vec<u64>>) -> PyResult<Self> {
        Ok(charsum::DirichletCharacter::from_exponents(modulus, &exponents).map_err(err)?.into())
    }

    #[staticmethod]
    fn principal(modulus: u64) -> PyResult<Self> {
        Ok(charsum::DirichletCharacter::principal(modulus).map_err(err)?.into())
    }

    /// The Jacobi symbol `(·/q)` as a character, for odd `q`.
    #[staticmethod]
    fn jacobi(q: u64) -> PyResult<Self> {
        Ok(charsum::DirichletCharacter::jacobi_character(q).map_err(err)?.into())
    }

    #[staticmethod]
    fn all(modulus: u64) -> PyResult<Vec<Self>> {
        Ok(charsum::DirichletCharacter::all(modulus).map_err(err)?.map(Self::from).collect())
    }

    #[getter]
    fn modulus(&self) -> u64 {
        self.inner.modulus()
    }

    #[getter]
    fn order(&self) -> u64 {
        self.inner.order()
    }

    #[getter]
    fn conductor(&self) -> u64 {
        self.inner.conductor()
    }

    #[getter]
    fn parity(&self) -> &'static str {
        match self.inner.parity() {
            charsum::Parity::Even => "even",
            charsum::Parity::Odd => "odd",
        }
    }

    #[getter]
    fn is_primitive(&self) -> bool {
        self.inner.profile().is_primitive
    }

    #[getter]
    fn is_principal(&self) -> bool {
        self.inner.is_principal()
    }

    /// `χ(n)` as `(num, den)` meaning `e(num/den)`, or `None` when `gcd(n, q) > 1`.
    fn value(&self, n: i64) -> Option<(u64, u64)> {
        match self.inner.evaluate(n) {
            CharacterValue::Zero => None,
            CharacterValue::Root { num, den } => Some((num, den)),
        }
    }

    fn __call__(&self, n: i64) -> Complex64 {
        self.inner.evaluate(n).to_complex()
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        Ok(self.inner.multiply(&other.inner).map_err(err)?.into())
    }

    fn __pow__(&self, k: u64, _modulo: Option<u64>) -> Self {
        self.inner.pow(k).into()
    }

    fn conj(&self) -> Self {
        self.inner.conj().into()
    }

    fn primitive_inducing(&self) -> PyResult<Self> {
        Ok(self.inner.primitive_inducing().map_err(err)?.into())
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("DirichletCharacter('{}')", self.inner)
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{DefaultHasher, Hash, Hasher};
        let mut h = DefaultHasher::new();
        self.inner.to_string().hash(&mut h);
        h.finish()
    }
}

#[pyfunction]
fn gauss_sum(chi: &DirichletCharacter) -> PyResult<Complex64> {
    sums::gauss_sum(&chi.inner).map_err(err)
}

/// `(M, argmax_t)` for `M(χ) = max_{t≤q} |Σ_{n≤t} χ(n)|`.
#[pyfunction]
#[pyo3(signature = (chi, parallel = false, budget = sums::DEFAULT_M_BUDGET))]
fn compute_m(py: Python<'_>, chi: &DirichletCharacter, parallel: bool, budget: u64) -> PyResult<(f64, u64)> {
    let config = ScanConfig {
        budget,
        parallel,
        ..ScanConfig::default()
    };
    let chi = chi.inner.clone();
    let p = py.detach(|| sums::compute_m_with(&chi, &config)).map_err(err)?;
    Ok((p.m_value, p.argmax_t))
}

#[pyfunction]
fn polya_residual(chi: &DirichletCharacter, t: u64, cutoff: u64) -> PyResult<f64> {
    sums::polya_residual(&chi.inner, t, cutoff).map_err(err)
}

/// `(max, b)` over `θ = b/m` of `|Σ a_n ψ(n) e(nθ)|`.
#[pyfunction]
fn rational_theta_max(coeffs: Vec<(i64, Complex64)>, psi: &DirichletCharacter) -> PyResult<(f64, u64)> {
    let r = sums::rational_theta_max(&Coefficients::new(coeffs), &psi.inner).map_err(err)?;
    Ok((r.max_value, r.argmax))
}

/// Certificate JSON for the pigeonhole bound.
#[pyfunction]
fn certify_pigeonhole(coeffs: Vec<(i64, Complex64)>, psi: &DirichletCharacter) -> PyResult<String> {
    json(&sums::certify_pigeonhole(&Coefficients::new(coeffs), &psi.inner).map_err(err)?)
}

/// Manifest JSON for `χ_g` built from `(g, N)`.
#[pyfunction]
#[pyo3(name = "construct")]
fn construct_manifest(g: u64, n: u64) -> PyResult<String> {
    json(&Manifest::new(construct::build_chi_g(g, n).map_err(err)?))
}

#[pyfunction]
fn build_psi(g: u64) -> PyResult<String> {
    json(&construct::build_psi(g).map_err(err)?)
}

#[pyfunction]
fn build_paley(n: u64) -> PyResult<String> {
    json(&construct::build_paley(n).map_err(err)?)
}

/// The character `χ_g` for `(g, N)`.
#[pyfunction]
fn build_chi_g(g: u64, n: u64) -> PyResult<DirichletCharacter> {
    Ok(construct::build_chi_g(g, n).map_err(err)?.chi_g.into())
}

/// Certificate JSON for the short-sum harmonic bound at `(g, N)`.
#[pyfunction]
fn certify_short_sum(g: u64, n: u64) -> PyResult<String> {
    let art = construct::build_chi_g(g, n).map_err(err)?;
    json(&sums::certify_short_sum(&art).map_err(err)?)
}

/// `M(χ_g) / (√q_g log log q_g)` at `(g, N)`.
#[pyfunction]
fn headline_ratio(py: Python<'_>, g: u64, n: u64) -> PyResult<f64> {
    py.detach(|| {
        let art = construct::build_chi_g(g, n)?;
        sums::headline_ratio(&art)
    })
    .map_err(err)
}

#[pymodule]
fn pycharsum(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CharsumError", m.py().get_type::<CharsumError>())?;
    m.add_class::<DirichletCharacter>()?;
    m.add_function(wrap_pyfunction!(gcd, m)?)?;
    m.add_function(wrap_pyfunction!(is_prime, m)?)?;
    m.add_function(wrap_pyfunction!(factorize, m)?)?;
    m.add_function(wrap_pyfunction!(crt_solve, m)?)?;
    m.add_function(wrap_pyfunction!(jacobi, m)?)?;
    m.add_function(wrap_pyfunction!(primitive_root, m)?)?;
    m.add_function(wrap_pyfunction!(discrete_log, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_sum, m)?)?;
    m.add_function(wrap_pyfunction!(compute_m, m)?)?;
    m.add_function(wrap_pyfunction!(polya_residual, m)?)?;
    m.add_function(wrap_pyfunction!(rational_theta_max, m)?)?;
    m.add_function(wrap_pyfunction!(certify_pigeonhole, m)?)?;
    m.add_function(wrap_pyfunction!(construct_manifest, m)?)?;
    m.add_function(wrap_pyfunction!(build_psi, m)?)?;
    m.add_function(wrap_pyfunction!(build_paley, m)?)?;
    m.add_function(wrap_pyfunction!(build_chi_g, m)?)?;
    m.add_function(wrap_pyfunction!(certify_short_sum, m)?)?;
    m.add_function(wrap_pyfunction!(headline_ratio, m)?)?;
    Ok(())
}
