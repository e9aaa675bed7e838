//! Browser bindings: tabulate a curve, compute an optimal constant, and
//! inspect the one-dimensional Dirac form `Q(r)`. Every entry point takes
//! the same catalog keys as the command line and returns a JSON string.

use kysmooth::dirac::{max_eigenpair, QuadForm1D};
use kysmooth::funk_hecke::{log_grid, sample_curve, Dispersion, Smoothing, SmoothingProblem};
use kysmooth::optimize::{sup_over_k_and_r, Equation, SearchOptions};
use kysmooth::weights::WeightSpec;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn problem(d: usize, weight: &str, psi: &str, phi: &str) -> Result<SmoothingProblem, String> {
    let w = WeightSpec::parse(weight, d).map_err(|e| e.to_string())?;
    let psi = Smoothing::parse(psi).map_err(|e| e.to_string())?;
    let phi = Dispersion::parse(phi).map_err(|e| e.to_string())?;
    SmoothingProblem::new(d, w, psi, phi).map_err(|e| e.to_string())
}

pub fn curve_json(
    d: usize,
    weight: &str,
    psi: &str,
    phi: &str,
    equation: &str,
    k: usize,
    r_min: f64,
    r_max: f64,
    n: usize,
) -> Result<String, String> {
    let p = problem(d, weight, psi, phi)?;
    let eq: Equation = equation.parse().map_err(|e: kysmooth::Error| e.to_string())?;
    let variant = eq.variant(d, k).map_err(|e| e.to_string())?;
    if !(r_min > 0.0 && r_max > r_min && (2..=5000).contains(&n)) {
        return Err("need 0 < r_min < r_max and 2 <= n <= 5000".into());
    }
    let c = sample_curve(&p, variant, &log_grid(r_min, r_max, n)).map_err(|e| e.to_string())?;
    Ok(c.to_json().to_string())
}

pub fn constant_json(d: usize, weight: &str, psi: &str, phi: &str, equation: &str, points: usize) -> Result<String, String> {
    let p = problem(d, weight, psi, phi)?;
    let eq: Equation = equation.parse().map_err(|e: kysmooth::Error| e.to_string())?;
    let opts = SearchOptions {
        points,
        k_max: 32,
        ..Default::default()
    };
    opts.validate().map_err(|e| e.to_string())?;
    let rep = sup_over_k_and_r(&p, eq, &opts).map_err(|e| e.to_string())?;
    Ok(rep.to_json().to_string())
}

pub fn dirac_form_json(weight: &str, psi: &str, m: f64, r: f64) -> Result<String, String> {
    let p = problem(1, weight, psi, &format!("rel:m={m}"))?;
    let q = QuadForm1D::new(&p, r).map_err(|e| e.to_string())?;
    let top = max_eigenpair(&q).map_err(|e| e.to_string())?;
    let basis: Vec<Vec<f64>> = top.basis.iter().map(|v| v.iter().map(|z| z.re).collect()).collect();
    Ok(json!({
        "schema": "kysmooth.dirac-form/v1",
        "r": r,
        "m": m,
        "a": q.a,
        "b": q.b,
        "c": q.c,
        "lambda0": q.lambda0,
        "lambda1": q.lambda1,
        "max_eigenvalue": top.value,
        "min_eigenvalue": q.min_eigenvalue(),
        "top_eigenspace": basis,
    })
    .to_string())
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn lambda_curve(
    d: usize,
    weight: &str,
    psi: &str,
    phi: &str,
    equation: &str,
    k: usize,
    r_min: f64,
    r_max: f64,
    n: usize,
) -> Result<String, JsError> {
    curve_json(d, weight, psi, phi, equation, k, r_min, r_max, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn optimal_constant(d: usize, weight: &str, psi: &str, phi: &str, equation: &str, points: usize) -> Result<String, JsError> {
    constant_json(d, weight, psi, phi, equation, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn dirac_form(weight: &str, psi: &str, m: f64, r: f64) -> Result<String, JsError> {
    dirac_form_json(weight, psi, m, r).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_has_requested_points() {
        let v: serde_json::Value = serde_json::from_str(&curve_json(3, "gauss:a=1", "one", "r2", "schrodinger", 0, 0.1, 10.0, 7).unwrap()).unwrap();
        assert_eq!(v["value"].as_array().unwrap().len(), 7);
        assert!(curve_json(3, "gauss:a=1", "one", "r2", "schrodinger", 0, 1.0, 0.5, 7).is_err());
    }

    #[test]
    fn constant_matches_closed_form() {
        let s = constant_json(3, "power:s=2", "theorem-explicit", "rel:m=1", "dirac-radial", 64).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        let c = v["constant_2pi"].as_f64().unwrap();
        assert!((c / (2.0 * std::f64::consts::PI).powi(4) - 1.0).abs() < 1e-6);
        assert!(constant_json(3, "bogus", "one", "r2", "schrodinger", 64).is_err());
    }

    #[test]
    fn dirac_form_eigenspace_is_two_dimensional() {
        let v: serde_json::Value = serde_json::from_str(&dirac_form_json("exp:a=1", "one", 1.0, 0.8).unwrap()).unwrap();
        assert_eq!(v["top_eigenspace"].as_array().unwrap().len(), 2);
        assert!(v["max_eigenvalue"].as_f64().unwrap() > v["min_eigenvalue"].as_f64().unwrap());
    }
}
