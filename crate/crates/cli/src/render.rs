//! JSON and table rendering of search results. Key order is fixed.

use serde_json::{json, Value};
use specpoint::solver::{factor_coeffs_desc, Solution, SpecialPointReport};

use crate::big;

fn report_json(r: &SpecialPointReport) -> Value {
    let pairs: Vec<Value> = r
        .pairs
        .iter()
        .map(|p| {
            let (re, im) = p.alpha.to_f64_pair();
            json!({
                "lambda_exponent": p.lambda_exponent,
                "alpha": {"re": re, "im": im, "radius": p.alpha.rad().to_f64_up()},
                "residual": p.residual.abs_upper().to_f64_up(),
                "verdict": p.verdict.as_str(),
            })
        })
        .collect();
    json!({
        "N": r.n,
        "disc": r.disc.value(),
        "factor": factor_coeffs_desc(&r.factor).iter().map(big).collect::<Vec<_>>(),
        "exact": r.exact,
        "pairs": pairs,
    })
}

pub fn solution_json(s: &Solution) -> Value {
    let c = &s.curve;
    json!({
        "curve": c.poly.to_string(),
        "field_degree": c.d,
        "delta1": c.delta1,
        "delta2": c.delta2,
        "height": c.height.h,
        "bounds": {
            "a": s.bounds.a,
            "n_cap": s.bounds.n_cap,
            "n_candidates": s.bounds.n_candidates.len(),
            "delta_cap": s.bounds.delta_cap,
            "delta_cap_used": s.bounds.delta_cap_used,
        },
        "special_points": s.reports.iter().map(report_json).collect::<Vec<_>>(),
        "undecided": s.undecided.iter().map(|u| json!({
            "N": u.n,
            "k": u.k,
            "center": [u.center.0, u.center.1],
            "radius": u.radius,
            "precision": u.precision,
        })).collect::<Vec<_>>(),
        "undecided_count": s.undecided_count(),
    })
}

pub fn solution_table(s: &Solution) -> String {
    let mut out = format!(
        "curve  {}\ndegree {} x {}   h = {:.6}   N-candidates {}   |D| <= {:.3e}\n",
        s.curve.poly,
        s.curve.delta1,
        s.curve.delta2,
        s.curve.height.h,
        s.bounds.n_candidates.len(),
        s.bounds.delta_cap_used
    );
    if s.reports.is_empty() {
        out.push_str("no special points\n");
    } else {
        out.push_str(&format!("{:>6} {:>8} {:>7}  {}\n", "N", "D", "pairs", "factor"));
        for r in &s.reports {
            let vanish = r.pairs.iter().filter(|p| p.verdict.as_str() == "vanishes").count();
            out.push_str(&format!("{:>6} {:>8} {:>7}  {}\n", r.n, r.disc.value(), vanish, r.factor.display_var("X")));
        }
    }
    if s.undecided_count() > 0 {
        out.push_str(&format!("undecided: {}\n", s.undecided_count()));
    }
    out
}
