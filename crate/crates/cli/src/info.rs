use crossprod::{CrossedProduct, DynSystem};
use serde_json::json;

use crate::report::Report;

pub fn info(cp: &CrossedProduct<f64>, report: Report) -> anyhow::Result<Report> {
    let sys = cp.system();
    let free = sys.is_topologically_free();
    let freeness = if free { "topologically free" } else { "not topologically free" };
    let (summary, detail) = match sys {
        DynSystem::Finite(fs) => {
            let orbits = fs.orbits();
            let periods: Vec<String> = orbits.iter().map(|o| o.period.to_string()).collect();
            let s = format!(
                "{} orbit{}, period{} {}, {freeness}",
                orbits.len(),
                if orbits.len() == 1 { "" } else { "s" },
                if orbits.len() == 1 { "" } else { "s" },
                periods.join(", ")
            );
            let detail = json!({
                "points": fs.len(),
                "orbits": orbits.iter().map(|o| json!({"points": o.points, "period": o.period})).collect::<Vec<_>>(),
                "period_lcm": fs.period_lcm(),
            });
            (s, detail)
        }
        DynSystem::RationalRotation { p, q } => {
            (format!("Σ = Per_{q}(σ), {freeness}"), json!({"angle": format!("{p}/{q}"), "period": q}))
        }
        DynSystem::IrrationalRotation { theta } => {
            ("free, topologically free".to_string(), json!({"angle": theta, "period": null}))
        }
    };
    let profile = sys.periodicity_profile(sys.default_max_n())?;
    let mut report = report;
    report.summary = Some(summary.clone());
    report.result = Some(json!({
        "summary": summary,
        "kind": sys.kind().name(),
        "topologically_free": free,
        "structure": detail,
        "profile": profile,
    }));
    Ok(report)
}
