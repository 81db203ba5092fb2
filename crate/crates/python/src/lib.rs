//! Python bindings. Grids cross the boundary as row lists, bottom row (`j = 0`) first; reports
//! cross as JSON text.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use skeps::hive::{enumerate_hives, is_hive as grid_is_hive, lr_via_hives};
use skeps::lattice;
use skeps::octahedron;
use skeps::oracle::lr_tableaux;
use skeps::skep::{
    self, enumerate_skeps, is_skep as grid_is_skep, lr_expansion_via_skeps, lr_via_skeps,
    lr_via_sum,
};
use skeps::verify;
use skeps::{Hive, Partition, Skep, TriGrid};

type Rows = Vec<Vec<i64>>;

fn value_error(e: skeps::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn partition(v: Vec<i64>) -> PyResult<Partition> {
    Partition::new(v).map_err(value_error)
}

fn grid(rows: Rows) -> PyResult<TriGrid> {
    TriGrid::from_rows(rows).map_err(value_error)
}

/// Littlewood-Richardson coefficient. `model` is one of "hive", "skep", "sum", "oracle".
#[pyfunction]
#[pyo3(signature = (lam, mu, nu, model = "skep"))]
pub fn lr(lam: Vec<i64>, mu: Vec<i64>, nu: Vec<i64>, model: &str) -> PyResult<u64> {
    let (lam, mu, nu) = (partition(lam)?, partition(mu)?, partition(nu)?);
    match model {
        "hive" => lr_via_hives(&lam, &mu, &nu).map_err(value_error),
        "skep" => lr_via_skeps(&lam, &mu, &nu).map_err(value_error),
        "sum" => lr_via_sum(&lam, &mu, &nu).map_err(value_error),
        "oracle" => Ok(lr_tableaux(&lam, &mu, &nu)),
        other => Err(PyValueError::new_err(format!("unknown model {other:?}"))),
    }
}

/// Every nonzero coefficient of `s_lam * s_mu` in `len(lam)` variables as `(nu, c)` pairs,
/// sorted by `nu`.
#[pyfunction]
pub fn lr_expansion(lam: Vec<i64>, mu: Vec<i64>) -> PyResult<Vec<(Vec<i64>, u64)>> {
    let expansion =
        lr_expansion_via_skeps(&partition(lam)?, &partition(mu)?).map_err(value_error)?;
    Ok(expansion
        .into_iter()
        .map(|(nu, c)| (nu.into_inner(), c))
        .collect())
}

#[pyfunction]
#[pyo3(name = "hives")]
pub fn all_hives(lam: Vec<i64>, mu: Vec<i64>, nu: Vec<i64>) -> PyResult<Vec<Rows>> {
    let list =
        enumerate_hives(&partition(lam)?, &partition(mu)?, &partition(nu)?).map_err(value_error)?;
    Ok(list.into_iter().map(|h| h.into_grid().rows()).collect())
}

#[pyfunction]
#[pyo3(name = "skeps")]
pub fn all_skeps(lam: Vec<i64>, mu: Vec<i64>, nu: Vec<i64>) -> PyResult<Vec<Rows>> {
    let list =
        enumerate_skeps(&partition(lam)?, &partition(mu)?, &partition(nu)?).map_err(value_error)?;
    Ok(list.into_iter().map(|g| g.into_grid().rows()).collect())
}

#[pyfunction]
pub fn is_hive(rows: Rows) -> PyResult<bool> {
    Ok(grid_is_hive(&grid(rows)?))
}

#[pyfunction]
pub fn is_skep(rows: Rows) -> PyResult<bool> {
    Ok(grid_is_skep(&grid(rows)?))
}

#[pyfunction]
pub fn hive_to_skep(rows: Rows) -> PyResult<Rows> {
    let hive = Hive::new(grid(rows)?).map_err(value_error)?;
    Ok(octahedron::hive_to_skep(&hive)
        .map_err(value_error)?
        .into_grid()
        .rows())
}

#[pyfunction]
pub fn skep_to_hive(rows: Rows) -> PyResult<Rows> {
    let skep = Skep::new(grid(rows)?).map_err(value_error)?;
    Ok(octahedron::skep_to_hive(&skep)
        .map_err(value_error)?
        .into_grid()
        .rows())
}

#[pyfunction]
pub fn hive_flip(rows: Rows) -> PyResult<Rows> {
    let hive = Hive::new(grid(rows)?).map_err(value_error)?;
    Ok(octahedron::hive_flip(&hive)
        .map_err(value_error)?
        .into_grid()
        .rows())
}

#[pyfunction]
pub fn skep_flip(rows: Rows) -> PyResult<Rows> {
    let skep = Skep::new(grid(rows)?).map_err(value_error)?;
    Ok(octahedron::skep_flip(&skep)
        .map_err(value_error)?
        .into_grid()
        .rows())
}

/// Extensions of the plus half of `rows` with first boundary `lam`. Minus entries of `rows`
/// are ignored.
#[pyfunction]
pub fn skep_ext(rows: Rows, lam: Vec<i64>) -> PyResult<u64> {
    let (plus, _) = grid(rows)?.split();
    skep::skep_ext(&plus, &lam).map_err(value_error)
}

#[pyfunction]
pub fn pi_enumerate(x: Vec<i64>, y: Vec<i64>) -> PyResult<Vec<Vec<i64>>> {
    let reps = lattice::pi_enumerate(&x, &y).map_err(value_error)?;
    Ok(reps.into_iter().map(|r| r.into_inner()).collect())
}

#[pyfunction]
pub fn covers(lam: Vec<i64>, mu: Vec<i64>) -> PyResult<Vec<(Vec<i64>, Vec<i64>)>> {
    let list = lattice::covers(&lam, &mu).map_err(value_error)?;
    Ok(list
        .into_iter()
        .map(|(a, b)| (a.into_inner(), b.into_inner()))
        .collect())
}

/// JSON report comparing the coefficients of two products.
#[pyfunction]
#[pyo3(signature = (lam, mu, lam2, mu2, oracle = false))]
pub fn verify_lpp(
    lam: Vec<i64>,
    mu: Vec<i64>,
    lam2: Vec<i64>,
    mu2: Vec<i64>,
    oracle: bool,
) -> PyResult<String> {
    let report = verify::verify_lpp(
        &partition(lam)?,
        &partition(mu)?,
        &partition(lam2)?,
        &partition(mu2)?,
        oracle,
    )
    .map_err(value_error)?;
    Ok(report.to_json_line())
}

#[pyfunction]
pub fn sweep_lpp(n: usize, max_entry: i64) -> PyResult<String> {
    Ok(verify::sweep_lpp(n, max_entry)
        .map_err(value_error)?
        .to_json_line())
}

#[pyfunction]
pub fn cross_check_counts(n: usize, max_entry: i64) -> PyResult<String> {
    Ok(verify::cross_check_counts(n, max_entry)
        .map_err(value_error)?
        .to_json_line())
}

#[pymodule]
fn pyskeps(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(lr, m)?)?;
    m.add_function(wrap_pyfunction!(lr_expansion, m)?)?;
    m.add_function(wrap_pyfunction!(all_hives, m)?)?;
    m.add_function(wrap_pyfunction!(all_skeps, m)?)?;
    m.add_function(wrap_pyfunction!(is_hive, m)?)?;
    m.add_function(wrap_pyfunction!(is_skep, m)?)?;
    m.add_function(wrap_pyfunction!(hive_to_skep, m)?)?;
    m.add_function(wrap_pyfunction!(skep_to_hive, m)?)?;
    m.add_function(wrap_pyfunction!(hive_flip, m)?)?;
    m.add_function(wrap_pyfunction!(skep_flip, m)?)?;
    m.add_function(wrap_pyfunction!(skep_ext, m)?)?;
    m.add_function(wrap_pyfunction!(pi_enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(covers, m)?)?;
    m.add_function(wrap_pyfunction!(verify_lpp, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_lpp, m)?)?;
    m.add_function(wrap_pyfunction!(cross_check_counts, m)?)?;
    Ok(())
}
