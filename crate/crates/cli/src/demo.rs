use std::path::Path;
use std::time::Instant;

use lemniscate::catalog::Example;
use lemniscate::centers::{compute_centers, IterationOptions, Method};
use lemniscate::preimage::Preimage;
use serde_json::{json, Value};

use crate::report::{Failure, Report};

/// Short names of the reference examples, in catalog order.
const ALIASES: [(&str, &str); 9] = [
    ("ex3.1", "two-intervals"),
    ("ex3.2", "symmetric-pair"),
    ("ex3.3", "crossing-quartic"),
    ("ex4.1", "three-intervals"),
    ("ex4.2", "symmetric-triple"),
    ("ex5.2", "seven-four"),
    ("ex5.3", "five-intervals"),
    ("ex5.4-T10", "chebyshev-10"),
    ("ex5.4-T20", "chebyshev-20"),
];

fn resolve(id: &str) -> Result<Vec<Example>, Failure> {
    if id == "all" {
        return Ok(Example::IDS
            .iter()
            .filter_map(|i| Example::from_id(i))
            .collect());
    }
    let name = ALIASES
        .iter()
        .find(|(alias, _)| *alias == id)
        .map_or(id, |(_, name)| *name);
    Example::from_id(name).map(|e| vec![e]).ok_or_else(|| {
        Failure::validation(&format!(
            "unknown example {id:?}; known: all, {}, {}",
            Example::IDS.join(", "),
            ALIASES.map(|(a, _)| a).join(", ")
        ))
    })
}

struct Row {
    quantity: String,
    computed: f64,
    published: Option<f64>,
}

fn demo_one(ex: Example) -> Result<(Vec<Row>, Value), Failure> {
    let start = Instant::now();
    let pre = Preimage::analyze(ex.polynomial()?)?;
    let res = compute_centers(&pre, Method::Iterative, &IterationOptions::default())?;
    let seconds = start.elapsed().as_secs_f64();
    let reference = ex.reference();
    let centers = res.data.centers();
    let steps = res.trace.as_ref().map_or(0, |t| t.steps);
    let mut rows: Vec<Row> = centers
        .iter()
        .enumerate()
        .map(|(j, &a)| Row {
            quantity: format!("a_{}", j + 1),
            computed: a,
            published: reference.centers.as_ref().map(|r| r[j]),
        })
        .collect();
    rows.push(Row {
        quantity: "steps".into(),
        computed: steps as f64,
        published: reference.steps.map(|s| s as f64),
    });
    let closed = match compute_centers(&pre, Method::ClosedForm, &IterationOptions::default()) {
        Ok(cf) => {
            let diff = cf
                .data
                .centers()
                .iter()
                .zip(centers)
                .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
            json!({ "method": cf.method, "centers": cf.data.centers(), "max_difference": diff })
        }
        Err(e) => json!({ "not_applicable": e.to_string() }),
    };
    let mut doc = json!({
        "example": ex,
        "id": ex.id(),
        "centers": centers,
        "steps": steps,
        "seconds": seconds,
        "closed_form": closed,
    });
    if let Some(r) = &reference.centers {
        doc["published_centers"] = json!(r);
        doc["published_tolerance"] = json!(reference.centers_tol);
        doc["max_center_error"] = json!(r
            .iter()
            .zip(centers)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs())));
    }
    if let Some(s) = reference.steps {
        doc["published_steps"] = json!(s);
    }
    Ok((rows, doc))
}

pub fn run(id: &str, output: Option<&Path>) -> Result<(), Failure> {
    let examples = resolve(id)?;
    let mut docs = Vec::new();
    println!(
        "{:<18} {:<9} {:>24} {:>24} {:>10}",
        "example", "quantity", "computed", "published", "|diff|"
    );
    for ex in examples {
        let (rows, doc) = demo_one(ex)?;
        for row in rows {
            let show = |x: f64| {
                if row.quantity == "steps" {
                    format!("{x}")
                } else {
                    format!("{x:.16}")
                }
            };
            let (published, diff) = match row.published {
                Some(p) => (show(p), format!("{:.2e}", (row.computed - p).abs())),
                None => ("-".to_string(), "-".to_string()),
            };
            println!(
                "{:<18} {:<9} {:>24} {:>24} {:>10}",
                ex.id(),
                row.quantity,
                show(row.computed),
                published,
                diff
            );
        }
        docs.push(doc);
    }
    if let Some(path) = output {
        let mut report = Report::with_input("paper-demo", json!({ "kind": "demo", "id": id }));
        report.insert_value("examples", Value::Array(docs));
        report.write(Some(path))?;
    }
    Ok(())
}
