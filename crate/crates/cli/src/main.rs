mod demo;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lemniscate::centers::{compute_centers, validate_centers, IterationOptions, Method};
use lemniscate::preimage::Preimage;
use lemniscate::walshmap::{map_grid, trace_boundary, GridSpec, MapContext};
use num_complex::Complex64;

use input::{Input, Source};
use report::{Failure, Report};

/// Polynomial preimages of [-1, 1], their lemniscatic domains and the
/// conformal maps between them.
#[derive(Parser, Debug)]
#[command(name = "lemniscate", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build P from endpoints (or coefficients, or an example) and report it.
    Construct(Common),
    /// Components, zero counts, outer critical points and capacity of E.
    Analyze(Common),
    /// Centers of the lemniscatic domain, with validation and iteration trace.
    Centers(Common),
    /// Evaluate the map at points and on a grid.
    Map(MapArgs),
    /// Sample the boundary of the lemniscatic set.
    Boundary(BoundaryArgs),
    /// Reproduce the reference examples and compare with published values.
    PaperDemo(DemoArgs),
}

#[derive(Args, Debug)]
struct Common {
    #[command(flatten)]
    input: Input,
    /// Algorithm for the centers.
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    /// Absolute stopping tolerance of the center iteration.
    #[arg(long, default_value_t = 1e-13, allow_hyphen_values = true)]
    abstol: f64,
    /// Relative stopping tolerance of the center iteration.
    #[arg(long, default_value_t = 1e-13, allow_hyphen_values = true)]
    reltol: f64,
    /// Maximal number of outer iteration steps.
    #[arg(long, default_value_t = 50)]
    max_outer: usize,
    /// Write the result document here instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MapArgs {
    #[command(flatten)]
    common: Common,
    /// A point `re,im` to map; may be repeated.
    #[arg(long = "point", value_name = "RE,IM")]
    points: Vec<String>,
    /// Map points of the lemniscatic plane back instead.
    #[arg(long)]
    inverse: bool,
    /// Grid family.
    #[arg(long, value_enum)]
    grid: Option<GridKind>,
    /// Cartesian extent `re_min,re_max,im_min,im_max`.
    #[arg(long, value_name = "RE0,RE1,IM0,IM1")]
    extent: Option<String>,
    /// Polar center `re,im`.
    #[arg(long, value_name = "RE,IM", default_value = "0,0")]
    center: String,
    /// Polar radii `r_min,r_max`.
    #[arg(long, value_name = "R0,R1")]
    radii: Option<String>,
    /// Number of lines per direction (cartesian) or circles (polar).
    #[arg(long, default_value_t = 21)]
    lines: usize,
    /// Number of rays (polar).
    #[arg(long, default_value_t = 24)]
    rays: usize,
    /// Samples per grid line.
    #[arg(long, default_value_t = 201)]
    samples: usize,
    /// CSV file for the mapped polylines.
    #[arg(long)]
    polylines: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BoundaryArgs {
    #[command(flatten)]
    common: Common,
    /// Points per component.
    #[arg(long, default_value_t = 256)]
    samples: usize,
    /// CSV file for the boundary points.
    #[arg(long)]
    boundary: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DemoArgs {
    /// Example identifier, or `all`.
    #[arg(default_value = "all")]
    id: String,
    /// Write the result document here.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Auto,
    ClosedForm,
    Iterative,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GridKind {
    Cartesian,
    Polar,
}

impl Common {
    fn method(&self) -> Method {
        match self.method {
            MethodArg::Auto => Method::Auto,
            MethodArg::ClosedForm => Method::ClosedForm,
            MethodArg::Iterative => Method::Iterative,
        }
    }

    fn options(&self) -> Result<IterationOptions, Failure> {
        if !(self.abstol > 0.0 && self.reltol > 0.0 && self.max_outer > 0) {
            return Err(Failure::validation(
                "tolerances and budgets must be positive",
            ));
        }
        Ok(IterationOptions {
            abstol: self.abstol,
            reltol: self.reltol,
            max_outer: self.max_outer,
            ..IterationOptions::default()
        })
    }
}

fn init_logging() {
    let level = match std::env::var("LEMNISCATE_LOG").as_deref() {
        Ok("trace") => "trace",
        Ok("info") => "info",
        _ => "off",
    };
    env_logger::Builder::new()
        .parse_filters(&format!("lemniscate={level}"))
        .format_timestamp(None)
        .init();
}

fn main() -> ExitCode {
    init_logging();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let f = Failure::validation(e.render().to_string().trim());
            eprintln!("{}", f.to_json());
            return ExitCode::from(f.code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.to_json());
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Construct(c) => {
            let source = c.input.source()?;
            let mut report = Report::new("construct", &source);
            report.construction(&source)?;
            let pre = Preimage::analyze(source.polynomial()?)?;
            report.preimage(&pre);
            report.write(c.output.as_deref())
        }
        Command::Analyze(c) => {
            let source = c.input.source()?;
            let pre = Preimage::analyze(source.polynomial()?)?;
            let mut report = Report::new("analyze", &source);
            report.preimage(&pre);
            let res = compute_centers(&pre, Method::Auto, &IterationOptions::default())?;
            report.centers(&res, None);
            report.write(c.output.as_deref())
        }
        Command::Centers(c) => {
            let source = c.input.source()?;
            let pre = Preimage::analyze(source.polynomial()?)?;
            let res = compute_centers(&pre, c.method(), &c.options()?)?;
            let mut report = Report::new("centers", &source);
            report.preimage(&pre);
            report.centers(&res, Some(&validate_centers(&pre, &res.data)));
            report.write(c.output.as_deref())
        }
        Command::Map(m) => run_map(m),
        Command::Boundary(b) => {
            let c = &b.common;
            let source = c.input.source()?;
            let ctx = context(c, &source)?;
            let curves = trace_boundary(&ctx, b.samples)?;
            let mut report = Report::new("boundary", &source);
            report.context(&ctx);
            report.boundary(&ctx, &curves);
            if let Some(path) = &b.boundary {
                report::write_boundary_csv(path, &curves)?;
            }
            report.write(c.output.as_deref())
        }
        Command::PaperDemo(d) => demo::run(&d.id, d.output.as_deref()),
    }
}

fn context(c: &Common, source: &Source) -> Result<MapContext, Failure> {
    let pre = Preimage::analyze(source.polynomial()?)?;
    let res = compute_centers(&pre, c.method(), &c.options()?)?;
    Ok(MapContext::new(pre, res.data)?)
}

fn run_map(m: MapArgs) -> Result<(), Failure> {
    let c = &m.common;
    let source = c.input.source()?;
    let ctx = context(c, &source)?;
    let mut report = Report::new("map", &source);
    report.context(&ctx);
    let points = m
        .points
        .iter()
        .map(|s| input::parse_complex(s))
        .collect::<Result<Vec<Complex64>, _>>()?;
    report.points(&ctx, &points, m.inverse)?;
    let grid = match m.grid {
        None => None,
        Some(kind) => Some(grid_spec(&m, kind, &ctx)?),
    };
    if let Some(spec) = grid {
        let mapped = map_grid(&ctx, &spec)?;
        report.grid(&spec, &mapped);
        if let Some(path) = &m.polylines {
            report::write_polylines_csv(path, &mapped.polylines)?;
        }
    } else if m.polylines.is_some() {
        return Err(Failure::validation("--polylines needs --grid"));
    }
    report.write(c.output.as_deref())
}

fn grid_spec(m: &MapArgs, kind: GridKind, ctx: &MapContext) -> Result<GridSpec, Failure> {
    let (lo, hi) = ctx.preimage().components().hull();
    let width = hi - lo;
    Ok(match kind {
        GridKind::Cartesian => {
            let (re, im) = match &m.extent {
                Some(s) => {
                    let v = input::parse_list(s, 4)?;
                    ((v[0], v[1]), (v[2], v[3]))
                }
                None => (
                    (lo - 0.5 * width, hi + 0.5 * width),
                    (-0.5 * width - 0.5, 0.5 * width + 0.5),
                ),
            };
            GridSpec::Cartesian {
                re,
                im,
                lines: m.lines,
                samples: m.samples,
            }
        }
        GridKind::Polar => {
            let center = input::parse_list(&m.center, 2)?;
            let radii = match &m.radii {
                Some(s) => {
                    let v = input::parse_list(s, 2)?;
                    (v[0], v[1])
                }
                None => (0.05 * width, width),
            };
            GridSpec::Polar {
                center: (center[0], center[1]),
                radii,
                circles: m.lines,
                rays: m.rays,
                samples: m.samples,
            }
        }
    })
}
