use serde_json::{json, Value};

use super::config::{CaseChoice, CheckJob};
use super::report::Report;
use crate::criteria::{custom_b_verdict, transcendence_verdict, Collision, Outcome, Reason, RiccatiCandidate, Verdict};
use crate::error::Result;
use crate::thetafield::{tq_divisor, Case};

fn candidate_json(c: &RiccatiCandidate) -> Value {
    json!({
        "r1": c.r1.to_string(),
        "r2": c.r2.to_string(),
        "deg_r1": c.deg_r1,
        "deg_r2": c.deg_r2,
        "deg_r0": c.deg_r0,
        "m": c.m,
        "constant": c.is_constant(),
        "counts": c.counts.as_ref().map(|k| json!({
            "alpha": k.alpha,
            "alpha_prime": k.alpha_prime,
            "gamma": k.gamma,
        })),
    })
}

fn collision_json(c: &Collision) -> Value {
    json!({ "from": c.from.to_string(), "to": c.to.to_string(), "ell": c.ell })
}

fn reason_json(r: &Reason) -> Value {
    let detail = match r {
        Reason::RiccatiCandidate(c) => candidate_json(c),
        Reason::TelescoperOrbitCollision(c) => collision_json(c),
        Reason::RiccatiNotEstablished(why) => Value::String(why.clone()),
        _ => Value::Null,
    };
    json!({ "kind": r.name(), "detail": detail })
}

pub fn verdict_for(job: &CheckJob) -> Result<Verdict> {
    match (&job.b, job.case) {
        (Some(b), _) => Ok(custom_b_verdict(b, job.lattice.clone())),
        (None, CaseChoice::Known(case)) => transcendence_verdict(&job.eps, case, job.lattice.clone()),
        (None, CaseChoice::Custom) => transcendence_verdict(&job.eps, Case::A, job.lattice.clone()),
    }
}

/// Runs the verdict and fills `report`; the outcome decides the exit code.
pub fn run_check(job: &CheckJob, mut report: Report) -> Result<(Report, Outcome)> {
    let v = verdict_for(job)?;
    report.outcome = Some(v.outcome.to_string());
    let mut names: Vec<String> = Vec::new();
    for n in v.reason_names() {
        if !names.iter().any(|m| m == n) {
            names.push(n.to_string());
        }
    }
    report.reasons = names;

    let lattice = &job.lattice;
    let divisors = match (&v.data, &job.b) {
        (Some(h), _) => json!({
            "p2": tq_divisor(&h.p2, lattice).to_string(),
            "sigma_inv_p3": tq_divisor(&h.sigma_inv_p3(), lattice).to_string(),
            "b": tq_divisor(&h.b, lattice).to_string(),
        }),
        (None, Some(b)) => json!({ "b": tq_divisor(b, lattice).to_string() }),
        (None, None) => Value::Null,
    };
    let case = match job.case {
        CaseChoice::Known(c) => c.to_string(),
        CaseChoice::Custom => "custom".into(),
    };
    report.details = json!({
        "case": case,
        "generators": lattice.generators(),
        "lattice": lattice.basis(),
        "nu_zero": v.nu_zero,
        "candidates": v.candidates.iter().map(candidate_json).collect::<Vec<_>>(),
        "collisions": v.telescoper.as_ref().map(|t| t.collisions.iter().map(collision_json).collect::<Vec<_>>()),
        "telescoper_obstructed": v.telescoper.as_ref().map(|t| t.obstructed),
        "divisors": divisors,
        "reasons": v.reasons.iter().map(reason_json).collect::<Vec<_>>(),
    });
    Ok((report, v.outcome))
}
