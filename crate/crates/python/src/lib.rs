//! Python bindings. Results are plain dicts and lists with the same layout
//! as the CLI's JSON output; rationals may be passed as ints, strings "p/q"
//! or `fractions.Fraction`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

use cwsusy::export;
use cwsusy::moduli::{self, ModuliPoint};
use cwsusy::superalgebra::GLOBAL_SIGN;
use cwsusy::Rational;

fn err(e: cwsusy::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rational(x: &Bound<'_, PyAny>) -> PyResult<Rational> {
    x.str()?.to_str()?.trim().parse().map_err(err)
}

fn point(am: &Bound<'_, PyAny>, app: &Bound<'_, PyAny>, ap: &Bound<'_, PyAny>, amp: &Bound<'_, PyAny>) -> PyResult<ModuliPoint> {
    Ok(ModuliPoint::new(rational(am)?, rational(app)?, rational(ap)?, rational(amp)?))
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.into_pyobject(py)?.into_any(),
            (None, Some(u)) => u.into_pyobject(py)?.into_any(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(a) => {
            let l = PyList::empty(py);
            for x in a {
                l.append(to_py(py, x)?)?;
            }
            l.into_any()
        }
        Value::Object(o) => {
            let d = PyDict::new(py);
            for (k, x) in o {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any()
        }
    })
}

/// Classification record of one moduli point.
#[pyfunction]
fn classify<'py>(
    py: Python<'py>,
    alpha_minus: &Bound<'py, PyAny>,
    alpha_plus_prime: &Bound<'py, PyAny>,
    alpha_plus: &Bound<'py, PyAny>,
    alpha_minus_prime: &Bound<'py, PyAny>,
) -> PyResult<Bound<'py, PyAny>> {
    let p = point(alpha_minus, alpha_plus_prime, alpha_plus, alpha_minus_prime)?;
    let rec = py.detach(|| moduli::classify(&p)).map_err(err)?;
    to_py(py, &export::record(&rec))
}

/// Records for a list of (α₋, α₊′, α₊, α₋′) tuples, in input order; the
/// origin is skipped.
#[pyfunction]
fn sweep<'py>(py: Python<'py>, points: Vec<Vec<Bound<'py, PyAny>>>) -> PyResult<Bound<'py, PyAny>> {
    let pts = points
        .iter()
        .map(|q| match q.as_slice() {
            [a, b, c, d] => point(a, b, c, d),
            _ => Err(PyValueError::new_err("each point needs four coordinates")),
        })
        .collect::<PyResult<Vec<_>>>()?;
    let recs = py.detach(|| moduli::sweep(&pts)).map_err(err)?;
    to_py(py, &Value::Array(recs.iter().map(export::record).collect()))
}

/// The check rows of the verification suite at one point.
#[pyfunction]
#[pyo3(signature = (alpha_minus, alpha_plus_prime, alpha_plus, alpha_minus_prime, tol = 1e-9, seed = 0))]
fn verify<'py>(
    py: Python<'py>,
    alpha_minus: &Bound<'py, PyAny>,
    alpha_plus_prime: &Bound<'py, PyAny>,
    alpha_plus: &Bound<'py, PyAny>,
    alpha_minus_prime: &Bound<'py, PyAny>,
    tol: f64,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let p = point(alpha_minus, alpha_plus_prime, alpha_plus, alpha_minus_prime)?;
    let rows = py.detach(|| moduli::verify_point(&p, tol, seed)).map_err(err)?;
    to_py(py, &Value::Array(rows.iter().map(export::check).collect()))
}

/// Full structure constants at one point.
#[pyfunction]
fn dump<'py>(
    py: Python<'py>,
    alpha_minus: &Bound<'py, PyAny>,
    alpha_plus_prime: &Bound<'py, PyAny>,
    alpha_plus: &Bound<'py, PyAny>,
    alpha_minus_prime: &Bound<'py, PyAny>,
) -> PyResult<Bound<'py, PyAny>> {
    let p = point(alpha_minus, alpha_plus_prime, alpha_plus, alpha_minus_prime)?;
    if p.is_origin() {
        return Err(PyValueError::new_err("the origin is not a point of the moduli space"));
    }
    let doc = py.detach(|| export::dump(&p.params(), *GLOBAL_SIGN)).map_err(err)?;
    to_py(py, &doc)
}

/// Parallel and generated dimensions of the six- ("d6") or nine-dimensional
/// ("d9") connection at the given parameter.
#[pyfunction]
fn extended_connection<'py>(py: Python<'py>, kind: &str, x: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let x = rational(x)?;
    let ext = match kind {
        "d6" => moduli::extended_connection_d6(&x),
        "d9" => moduli::extended_connection_d9(&x),
        _ => return Err(PyValueError::new_err(format!("unknown connection '{kind}', expected d6 or d9"))),
    }
    .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("parallel_dim", ext.parallel_dim)?;
    d.set_item("generated_dim", ext.generated_dim)?;
    d.set_item("fraction", ext.fraction().to_string())?;
    d.set_item("parallel_fraction", ext.parallel_fraction().to_string())?;
    Ok(d.into_any())
}

#[pymodule]
fn cwsusy_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", export::VERSION)?;
    m.add("SCHEMA", export::SCHEMA)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(dump, m)?)?;
    m.add_function(wrap_pyfunction!(extended_connection, m)?)?;
    Ok(())
}
