use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::MapContext;
use crate::error::{Error, Result};

/// Consecutive images farther apart than `JUMP_TOL` times the spacing of
/// their sources start a new polyline.
pub const JUMP_TOL: f64 = 20.0;

/// Families of grid lines in the `z`-plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum GridSpec {
    /// `lines` horizontal and `lines` vertical segments covering the
    /// rectangle, each sampled at `samples` points.
    Cartesian {
        re: (f64, f64),
        im: (f64, f64),
        lines: usize,
        samples: usize,
    },
    /// `circles` circles with radii spread over `radii` and `rays` rays from
    /// `center`.
    Polar {
        center: (f64, f64),
        radii: (f64, f64),
        circles: usize,
        rays: usize,
        samples: usize,
    },
}

impl GridSpec {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            GridSpec::Cartesian {
                re,
                im,
                lines,
                samples,
            } => re.0 < re.1 && im.0 < im.1 && lines >= 1 && samples >= 2,
            GridSpec::Polar {
                radii,
                circles,
                rays,
                samples,
                ..
            } => 0.0 <= radii.0 && radii.0 < radii.1 && circles + rays >= 1 && samples >= 2,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("invalid grid {self:?}")))
        }
    }

    /// The source polylines of the grid.
    pub fn lines(&self) -> Result<Vec<Vec<Complex64>>> {
        self.validate()?;
        let spread = |lo: f64, hi: f64, k: usize, m: usize| {
            if m == 1 {
                0.5 * (lo + hi)
            } else {
                lo + (hi - lo) * k as f64 / (m - 1) as f64
            }
        };
        let mut out = Vec::new();
        match *self {
            GridSpec::Cartesian {
                re,
                im,
                lines,
                samples,
            } => {
                for k in 0..lines {
                    let y = spread(im.0, im.1, k, lines);
                    out.push(
                        (0..samples)
                            .map(|i| Complex64::new(spread(re.0, re.1, i, samples), y))
                            .collect(),
                    );
                }
                for k in 0..lines {
                    let x = spread(re.0, re.1, k, lines);
                    out.push(
                        (0..samples)
                            .map(|i| Complex64::new(x, spread(im.0, im.1, i, samples)))
                            .collect(),
                    );
                }
            }
            GridSpec::Polar {
                center,
                radii,
                circles,
                rays,
                samples,
            } => {
                let c = Complex64::new(center.0, center.1);
                let tau = std::f64::consts::TAU;
                for k in 0..circles {
                    let r = spread(radii.0, radii.1, k, circles);
                    out.push(
                        (0..=samples)
                            .map(|i| c + Complex64::from_polar(r, tau * i as f64 / samples as f64))
                            .collect(),
                    );
                }
                for k in 0..rays {
                    let t = tau * k as f64 / rays as f64;
                    out.push(
                        (0..samples)
                            .map(|i| {
                                c + Complex64::from_polar(spread(radii.0, radii.1, i, samples), t)
                            })
                            .collect(),
                    );
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MappedPoint {
    pub z: Complex64,
    pub w: Complex64,
    /// `|Q(w) - h(z)|`.
    pub residual: f64,
}

/// A connected piece of the image of one grid line.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MappedPolyline {
    /// Position of this piece in the output.
    pub line_id: usize,
    /// Index of the grid line it comes from.
    pub source_line: usize,
    pub points: Vec<MappedPoint>,
}

/// A grid point that could not be mapped.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DroppedPoint {
    pub source_line: usize,
    pub z: Complex64,
    pub reason: String,
}

/// Images of all lines of a grid.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct GridMap {
    pub polylines: Vec<MappedPolyline>,
    pub dropped: Vec<DroppedPoint>,
}

fn map_line(
    ctx: &MapContext,
    id: usize,
    line: &[Complex64],
) -> (Vec<Vec<MappedPoint>>, Vec<DroppedPoint>) {
    let mut pieces = Vec::new();
    let mut dropped = Vec::new();
    let mut current: Vec<MappedPoint> = Vec::new();
    for &z in line {
        match ctx.phi_with_residual(z) {
            Ok((w, residual)) => {
                if let Some(last) = current.last() {
                    let spacing = (z - last.z).norm();
                    if (w - last.w).norm() > JUMP_TOL * spacing {
                        pieces.push(std::mem::take(&mut current));
                    }
                }
                current.push(MappedPoint { z, w, residual });
            }
            Err(e) => {
                if !current.is_empty() {
                    pieces.push(std::mem::take(&mut current));
                }
                dropped.push(DroppedPoint {
                    source_line: id,
                    z,
                    reason: e.to_string(),
                });
            }
        }
    }
    if !current.is_empty() {
        pieces.push(current);
    }
    pieces.retain(|p| p.len() >= 2);
    (pieces, dropped)
}

/// Maps every line of the grid by `Phi`.
///
/// Lines are processed in parallel; the output order only depends on the
/// grid. Points on `E` or where evaluation fails are dropped and reported,
/// and a line is split wherever points are dropped or its image jumps.
pub fn map_grid(ctx: &MapContext, spec: &GridSpec) -> Result<GridMap> {
    let lines = spec.lines()?;
    let mapped: Vec<_> = lines
        .par_iter()
        .enumerate()
        .map(|(id, line)| map_line(ctx, id, line))
        .collect();
    let mut out = GridMap::default();
    for (id, (pieces, dropped)) in mapped.into_iter().enumerate() {
        for points in pieces {
            out.polylines.push(MappedPolyline {
                line_id: out.polylines.len(),
                source_line: id,
                points,
            });
        }
        out.dropped.extend(dropped);
    }
    log::info!(
        "mapped {} grid lines into {} polylines, dropped {} points",
        lines.len(),
        out.polylines.len(),
        out.dropped.len()
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Example;
    use crate::walshmap::tests::context;
    use crate::walshmap::TOL_MAP;

    #[test]
    fn cartesian_grid_shape() {
        let spec = GridSpec::Cartesian {
            re: (-1.0, 1.0),
            im: (-1.0, 1.0),
            lines: 3,
            samples: 5,
        };
        let lines = spec.lines().unwrap();
        assert_eq!(lines.len(), 6);
        assert_eq!(lines[1][0], Complex64::new(-1.0, 0.0));
        assert_eq!(lines[4][4], Complex64::new(0.0, 1.0));
    }

    #[test]
    fn invalid_grids_are_rejected() {
        let spec = GridSpec::Polar {
            center: (0.0, 0.0),
            radii: (1.0, 0.5),
            circles: 2,
            rays: 2,
            samples: 10,
        };
        assert!(spec.lines().is_err());
    }

    #[test]
    fn real_axis_is_split_on_e() {
        let ctx = context(Example::SymmetricPair {
            alpha: 0.2,
            beta: 2.0,
        });
        let spec = GridSpec::Cartesian {
            re: (-3.0, 3.0),
            im: (-1.0, 1.0),
            lines: 3,
            samples: 61,
        };
        let map = map_grid(&ctx, &spec).unwrap();
        let axis: Vec<_> = map
            .polylines
            .iter()
            .filter(|p| p.source_line == 1)
            .collect();
        assert_eq!(axis.len(), 3);
        assert!(map.dropped.iter().all(|d| d.z.im == 0.0));
        for p in &map.polylines {
            assert!(p.points.iter().all(|q| q.residual <= TOL_MAP * 1e3));
        }
        for (k, p) in map.polylines.iter().enumerate() {
            assert_eq!(p.line_id, k);
        }
    }

    #[test]
    fn conjugate_grid_gives_conjugate_images() {
        let ctx = context(Example::TwoIntervals { alpha: 0.1 });
        let spec = GridSpec::Cartesian {
            re: (-1.5, 1.5),
            im: (-1.5, 1.5),
            lines: 4,
            samples: 21,
        };
        let map = map_grid(&ctx, &spec).unwrap();
        let lower = &map.polylines[0].points;
        let upper = &map
            .polylines
            .iter()
            .find(|p| p.source_line == 3)
            .unwrap()
            .points;
        for (a, b) in lower.iter().zip(upper) {
            assert_eq!(a.z, b.z.conj());
            assert!((a.w - b.w.conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn odd_symmetry_of_images() {
        let ctx = context(Example::SymmetricTriple { alpha: 0.2 });
        let spec = GridSpec::Polar {
            center: (0.0, 0.0),
            radii: (0.1, 1.5),
            circles: 3,
            rays: 0,
            samples: 40,
        };
        let map = map_grid(&ctx, &spec).unwrap();
        for p in &map.polylines {
            for q in &p.points {
                let w = ctx.phi(-q.z).unwrap();
                assert!((w + q.w).norm() < 1e-12);
            }
        }
    }
}
