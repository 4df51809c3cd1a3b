use std::fs::File;
use std::io::Write;
use std::path::Path;

use lemniscate::centers::{CentersResult, ValidationReport};
use lemniscate::preimage::{endpoint_residual, Preimage};
use lemniscate::walshmap::{BoundaryCurve, GridMap, GridSpec, MapContext, MappedPolyline};
use lemniscate::Error;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::input::Source;

pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_CONVERGENCE: u8 = 3;

/// An error with its exit code, reported on standard error as JSON.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn validation(message: &str) -> Self {
        Failure {
            code: EXIT_VALIDATION,
            kind: "validation",
            message: message.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        json!({ "error": { "kind": self.kind, "exit_code": self.code, "message": self.message } })
            .to_string()
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_convergence() {
            Failure {
                code: EXIT_CONVERGENCE,
                kind: "convergence",
                message: e.to_string(),
            }
        } else {
            Failure {
                code: EXIT_VALIDATION,
                kind: "validation",
                message: e.to_string(),
            }
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_VALIDATION,
            kind: "io",
            message: e.to_string(),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure {
            code: EXIT_VALIDATION,
            kind: "io",
            message: e.to_string(),
        }
    }
}

fn c(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

/// Fails on `null`, which is what `serde_json` makes of NaN and infinities;
/// the report itself never contains `null`.
fn check_finite(v: &Value, path: &str) -> Result<(), Failure> {
    match v {
        Value::Null => Err(Failure {
            code: EXIT_CONVERGENCE,
            kind: "non-finite",
            message: format!("non-finite value at {path}"),
        }),
        Value::Array(a) => a
            .iter()
            .enumerate()
            .try_for_each(|(i, x)| check_finite(x, &format!("{path}[{i}]"))),
        Value::Object(m) => m
            .iter()
            .try_for_each(|(k, x)| check_finite(x, &format!("{path}.{k}"))),
        _ => Ok(()),
    }
}

/// The result document.
pub struct Report {
    doc: Map<String, Value>,
}

impl Report {
    pub fn new(mode: &str, source: &Source) -> Self {
        let input = match source {
            Source::Endpoints { pinned, guesses } => {
                let mut g = guesses.iter();
                let values: Vec<f64> = pinned
                    .iter()
                    .map(|p| p.unwrap_or_else(|| *g.next().unwrap()))
                    .collect();
                let free: Vec<usize> = (0..pinned.len()).filter(|&i| pinned[i].is_none()).collect();
                json!({ "kind": "endpoints", "endpoints": values, "free": free })
            }
            other => to_value(other),
        };
        Report::with_input(mode, input)
    }

    pub fn with_input(mode: &str, input: Value) -> Self {
        let mut doc = Map::new();
        doc.insert("mode".into(), json!(mode));
        doc.insert("input".into(), input);
        Report { doc }
    }

    fn insert(&mut self, key: &str, v: Value) {
        self.doc.insert(key.into(), v);
    }

    pub fn construction(&mut self, source: &Source) -> Result<(), Failure> {
        if let Some(sol) = source.endpoint_solution()? {
            self.insert(
                "construction",
                json!({
                    "endpoints": sol.endpoints,
                    "free_values": sol.params,
                    "iterations": sol.iterations,
                    "residual": sol.residual,
                }),
            );
        } else if let Source::Endpoints { pinned, .. } = source {
            let e: Vec<f64> = pinned.iter().map(|p| p.unwrap_or_default()).collect();
            let r = endpoint_residual(&e)?
                .iter()
                .fold(0.0f64, |m, x| m.max(x.abs()));
            self.insert(
                "construction",
                json!({ "endpoints": e, "iterations": 0, "residual": r }),
            );
        }
        Ok(())
    }

    pub fn preimage(&mut self, pre: &Preimage) {
        let e = pre.components();
        let intervals: Vec<[f64; 2]> = (0..e.ell()).map(|j| e.component(j).into()).collect();
        let critical_values: Vec<f64> = pre
            .outer_critical_points()
            .iter()
            .map(|&z| pre.poly().eval_real(z))
            .collect();
        self.insert(
            "polynomial",
            json!({ "degree": pre.degree(), "coefficients": pre.poly().real_coeffs() }),
        );
        self.insert(
            "preimage",
            json!({
                "components": e.ell(),
                "endpoints": e.endpoints(),
                "intervals": intervals,
                "zero_counts": pre.zero_counts(),
                "outer_critical_points": pre.outer_critical_points(),
                "critical_values": critical_values,
                "critical_images": pre.critical_images(),
                "capacity": pre.capacity(),
            }),
        );
    }

    pub fn centers(&mut self, res: &CentersResult, validation: Option<&ValidationReport>) {
        let d = &res.data;
        let mut v = json!({
            "method": res.method,
            "axis": d.axis(),
            "centers": d.centers(),
            "counts": d.counts(),
            "exponents": d.exponents().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            "q_critical_points": d.q_critical_points(),
            "capacity": d.capacity(),
        });
        if let Some(trace) = &res.trace {
            v["steps"] = json!(trace.steps);
            v["converged"] = json!(trace.converged);
            v["trace"] = to_value(trace);
        }
        self.insert("lemniscatic", v);
        if let Some(r) = validation {
            let mut v = to_value(r);
            v["max_residual"] = json!(r.max_residual());
            self.insert("validation", v);
        }
    }

    pub fn context(&mut self, ctx: &MapContext) {
        let d = ctx.lemniscatic();
        self.insert(
            "lemniscatic",
            json!({
                "centers": d.centers(),
                "counts": d.counts(),
                "exponents": d.exponents().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                "q_critical_points": d.q_critical_points(),
                "capacity": d.capacity(),
                "boundary_crossings": ctx.boundary_crossings(),
            }),
        );
    }

    pub fn points(
        &mut self,
        ctx: &MapContext,
        points: &[Complex64],
        inverse: bool,
    ) -> Result<(), Failure> {
        if points.is_empty() {
            return Ok(());
        }
        let mut out = Vec::new();
        for &p in points {
            let entry = if inverse {
                let z = ctx.phi_inverse(p)?;
                json!({ "w": c(p), "z": c(z), "residual": (ctx.phi(z)? - p).norm() })
            } else {
                let (w, r) = ctx.phi_with_residual(p)?;
                json!({ "z": c(p), "w": c(w), "residual": r })
            };
            out.push(entry);
        }
        self.insert(
            if inverse { "inverse_points" } else { "points" },
            Value::Array(out),
        );
        Ok(())
    }

    pub fn grid(&mut self, spec: &GridSpec, mapped: &GridMap) {
        let points: usize = mapped.polylines.iter().map(|p| p.points.len()).sum();
        let max_residual = mapped
            .polylines
            .iter()
            .flat_map(|p| &p.points)
            .fold(0.0f64, |m, q| m.max(q.residual));
        let dropped: Vec<Value> = mapped
            .dropped
            .iter()
            .map(|d| json!({ "source_line": d.source_line, "z": c(d.z), "reason": d.reason }))
            .collect();
        self.insert(
            "grid",
            json!({
                "spec": spec,
                "polylines": mapped.polylines.len(),
                "points": points,
                "max_residual": max_residual,
                "dropped": dropped,
            }),
        );
    }

    pub fn boundary(&mut self, ctx: &MapContext, curves: &[BoundaryCurve]) {
        let v: Vec<Value> = curves
            .iter()
            .map(|cv| {
                let dev = cv.points.iter().fold(0.0f64, |m, &w| {
                    m.max((ctx.lemniscatic().q_eval(w).norm() - 1.0).abs())
                });
                json!({
                    "component": cv.component,
                    "center": cv.center,
                    "method": cv.method,
                    "points": cv.points.len(),
                    "max_deviation": dev,
                })
            })
            .collect();
        self.insert("boundary", Value::Array(v));
    }

    pub fn insert_value(&mut self, key: &str, v: Value) {
        self.insert(key, v);
    }

    pub fn write(self, path: Option<&Path>) -> Result<(), Failure> {
        let doc = Value::Object(self.doc);
        check_finite(&doc, "$")?;
        let text = serde_json::to_string_pretty(&doc).expect("report serializes");
        match path {
            Some(p) => std::fs::write(p, text + "\n")?,
            None => {
                let mut out = std::io::stdout().lock();
                match writeln!(out, "{text}") {
                    Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                    r => r?,
                }
            }
        }
        Ok(())
    }
}

/// 17 significant digits.
fn num(x: f64) -> Result<String, Failure> {
    if !x.is_finite() {
        return Err(Failure {
            code: EXIT_CONVERGENCE,
            kind: "non-finite",
            message: "non-finite value in CSV output".into(),
        });
    }
    Ok(format!("{x:.16e}"))
}

pub fn write_polylines_csv(path: &Path, lines: &[MappedPolyline]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(File::create(path)?);
    w.write_record(["line_id", "re_z", "im_z", "re_w", "im_w", "residual"])?;
    for line in lines {
        for p in &line.points {
            w.write_record([
                line.line_id.to_string(),
                num(p.z.re)?,
                num(p.z.im)?,
                num(p.w.re)?,
                num(p.w.im)?,
                num(p.residual)?,
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_boundary_csv(path: &Path, curves: &[BoundaryCurve]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(File::create(path)?);
    w.write_record(["component", "index", "re_w", "im_w"])?;
    for cv in curves {
        for (i, p) in cv.points.iter().enumerate() {
            w.write_record([
                cv.component.to_string(),
                i.to_string(),
                num(p.re)?,
                num(p.im)?,
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
