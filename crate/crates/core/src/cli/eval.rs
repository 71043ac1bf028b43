use serde_json::{json, Map, Value};

use super::report::{cjson, Report};
use crate::error::{Error, Result};
use crate::numerics::{
    a_eval, elliptic_gamma_eval, f_eval, nu_eval, t_from_eps, theta_eval, v_integral_eval, NumericParams, C64,
};

pub const FUNCTIONS: [&str; 5] = ["theta", "gamma", "A", "V", "f"];

fn entry(r: Result<Value>) -> Value {
    r.unwrap_or_else(|e| json!({ "error": e.to_string() }))
}

fn value_error(value: C64, error: f64) -> Value {
    json!({ "value": cjson(value), "error": error })
}

fn one_point(params: &NumericParams, z: C64, functions: &[String]) -> Value {
    let (p, q, n) = (params.p, params.q, params.trunc);
    let mut out = Map::new();
    out.insert("z".into(), cjson(z));
    if z.norm() == 0.0 || !z.norm().is_finite() {
        for name in functions {
            out.insert(name.clone(), json!({ "error": format!("point {z} is not in C*") }));
        }
        return Value::Object(out);
    }
    for name in functions {
        let v = match name.as_str() {
            "theta" => entry(theta_eval(z, p, n).map(|t| value_error(t.value, t.rel_tail * t.value.norm()))),
            "gamma" => entry(elliptic_gamma_eval(z, p, q, n).map(cjson)),
            "A" => entry(a_eval(z, params).map(cjson)),
            "V" => entry(
                v_integral_eval(&t_from_eps(params, z), p, q, params.nodes, n).map(|e| value_error(e.value, e.error)),
            ),
            "f" => entry(f_eval(params, z).map(|e| value_error(e.value, e.error))),
            _ => unreachable!("names are checked up front"),
        };
        out.insert(name.clone(), v);
    }
    Value::Object(out)
}

pub fn check_functions(requested: Option<&[String]>) -> Result<Vec<String>> {
    match requested {
        None => Ok(FUNCTIONS.iter().map(|s| s.to_string()).collect()),
        Some(fs) => {
            for f in fs {
                if !FUNCTIONS.contains(&f.as_str()) {
                    return Err(Error::Config(format!(
                        "functions: unknown {f:?}; expected one of {}",
                        FUNCTIONS.join(", ")
                    )));
                }
            }
            Ok(fs.to_vec())
        }
    }
}

/// Tabulates the requested functions; a failing point gets an error entry
/// and the run continues. `θ` is `θ(z; p)`, `Γ` is `Γ(z; p, q)` and `V` is
/// the integral behind `f(z)`.
pub fn run_eval(params: &NumericParams, points: &[C64], functions: &[String], mut report: Report) -> Report {
    let rows: Vec<Value> = points.iter().map(|&z| one_point(params, z, functions)).collect();
    report.values = Some(json!({
        "nu": cjson(nu_eval(params)),
        "points": rows,
    }));
    report.details = json!({
        "trunc": params.trunc,
        "nodes": params.nodes,
        "functions": functions,
    });
    report
}
