use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A circular hole removed from a disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hole {
    pub center: [f64; 2],
    pub radius: f64,
}

/// Planar shapes the rasterizer understands.
///
/// Rectangles occupy `[0, width] x [0, height]`; discs and annuli are centred
/// at the origin. All membership tests are strict, so points on the boundary
/// are outside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Shape {
    Rectangle { width: f64, height: f64 },
    Disc { radius: f64 },
    Annulus { inner: f64, outer: f64 },
    DiscWithHoles { radius: f64, holes: Vec<Hole> },
    Polygon { vertices: Vec<[f64; 2]> },
}

impl Shape {
    pub fn square() -> Self {
        Shape::Rectangle { width: 1.0, height: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidShape(msg.to_string()));
        match self {
            Shape::Rectangle { width, height } => {
                if !(*width > 0.0 && *height > 0.0) {
                    return bad("rectangle sides must be positive");
                }
            }
            Shape::Disc { radius } => {
                if !(*radius > 0.0) {
                    return bad("disc radius must be positive");
                }
            }
            Shape::Annulus { inner, outer } => {
                if !(*inner > 0.0 && inner < outer) {
                    return bad("annulus needs 0 < inner < outer");
                }
            }
            Shape::DiscWithHoles { radius, holes } => {
                if !(*radius > 0.0) {
                    return bad("disc radius must be positive");
                }
                if holes.iter().any(|hole| !(hole.radius > 0.0)) {
                    return bad("hole radii must be positive");
                }
            }
            Shape::Polygon { vertices } => {
                if vertices.len() < 3 {
                    return bad("polygon needs at least three vertices");
                }
                if vertices.iter().flatten().any(|v| !v.is_finite()) {
                    return bad("polygon vertices must be finite");
                }
            }
        }
        Ok(())
    }

    /// Strict interior test.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        match self {
            Shape::Rectangle { width, height } => x > 0.0 && x < *width && y > 0.0 && y < *height,
            Shape::Disc { radius } => x * x + y * y < radius * radius,
            Shape::Annulus { inner, outer } => {
                let d2 = x * x + y * y;
                d2 > inner * inner && d2 < outer * outer
            }
            Shape::DiscWithHoles { radius, holes } => {
                x * x + y * y < radius * radius
                    && holes.iter().all(|hole| {
                        let dx = x - hole.center[0];
                        let dy = y - hole.center[1];
                        dx * dx + dy * dy > hole.radius * hole.radius
                    })
            }
            Shape::Polygon { vertices } => polygon_contains(vertices, x, y),
        }
    }

    /// Axis-aligned bounding box `(xmin, ymin, xmax, ymax)`.
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        match self {
            Shape::Rectangle { width, height } => (0.0, 0.0, *width, *height),
            Shape::Disc { radius }
            | Shape::Annulus { outer: radius, .. }
            | Shape::DiscWithHoles { radius, .. } => (-radius, -radius, *radius, *radius),
            Shape::Polygon { vertices } => vertices.iter().fold(
                (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
                |(x0, y0, x1, y1), v| (x0.min(v[0]), y0.min(v[1]), x1.max(v[0]), y1.max(v[1])),
            ),
        }
    }

    /// Analytic area, used by convergence tests. Holes are assumed to lie
    /// inside the disc and not to overlap each other.
    pub fn area(&self) -> f64 {
        use std::f64::consts::PI;
        match self {
            Shape::Rectangle { width, height } => width * height,
            Shape::Disc { radius } => PI * radius * radius,
            Shape::Annulus { inner, outer } => PI * (outer * outer - inner * inner),
            Shape::DiscWithHoles { radius, holes } => {
                PI * radius * radius - holes.iter().map(|h| PI * h.radius * h.radius).sum::<f64>()
            }
            Shape::Polygon { vertices } => {
                let n = vertices.len();
                let twice: f64 = (0..n)
                    .map(|i| {
                        let a = vertices[i];
                        let b = vertices[(i + 1) % n];
                        a[0] * b[1] - b[0] * a[1]
                    })
                    .sum();
                twice.abs() / 2.0
            }
        }
    }

    pub fn perimeter(&self) -> f64 {
        use std::f64::consts::TAU;
        match self {
            Shape::Rectangle { width, height } => 2.0 * (width + height),
            Shape::Disc { radius } => TAU * radius,
            Shape::Annulus { inner, outer } => TAU * (inner + outer),
            Shape::DiscWithHoles { radius, holes } => {
                TAU * (radius + holes.iter().map(|h| h.radius).sum::<f64>())
            }
            Shape::Polygon { vertices } => {
                let n = vertices.len();
                (0..n)
                    .map(|i| {
                        let a = vertices[i];
                        let b = vertices[(i + 1) % n];
                        (b[0] - a[0]).hypot(b[1] - a[1])
                    })
                    .sum()
            }
        }
    }
}

fn polygon_contains(vertices: &[[f64; 2]], x: f64, y: f64) -> bool {
    let n = vertices.len();
    let mut inside = false;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        // points on an edge are boundary points, hence excluded
        let cross = (b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0]);
        if cross == 0.0
            && x >= a[0].min(b[0])
            && x <= a[0].max(b[0])
            && y >= a[1].min(b[1])
            && y <= a[1].max(b[1])
        {
            return false;
        }
        if (a[1] > y) != (b[1] > y) {
            let xi = a[0] + (y - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if x < xi {
                inside = !inside;
            }
        }
    }
    inside
}

/// Descriptor syntax: `kind[:args]` where args are comma separated numbers
/// and point lists are separated by `;`.
///
/// ```text
/// square
/// rectangle:2,0.5
/// disc:1
/// annulus:0.5,1
/// disc-holes:1;0.3,0,0.08;-0.3,0,0.12     (radius; then x,y,r per hole)
/// polygon:0,0;1,0;0,1
/// ```
impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, args) = match s.split_once(':') {
            Some((k, a)) => (k.trim(), a.trim()),
            None => (s, ""),
        };
        let numbers = |text: &str| -> Result<Vec<f64>> {
            text.split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidShape(format!("not a number: {t:?} in {s:?}")))
                })
                .collect()
        };
        let exactly = |text: &str, count: usize| -> Result<Vec<f64>> {
            let v = numbers(text)?;
            if v.len() != count {
                return Err(Error::InvalidShape(format!(
                    "{kind} expects {count} numbers, got {}",
                    v.len()
                )));
            }
            Ok(v)
        };
        let shape = match kind {
            "square" if args.is_empty() => Shape::square(),
            "square" => {
                let v = exactly(args, 1)?;
                Shape::Rectangle { width: v[0], height: v[0] }
            }
            "rectangle" | "rect" => {
                let v = exactly(args, 2)?;
                Shape::Rectangle { width: v[0], height: v[1] }
            }
            "disc" | "disk" if args.is_empty() => Shape::Disc { radius: 1.0 },
            "disc" | "disk" => Shape::Disc { radius: exactly(args, 1)?[0] },
            "annulus" => {
                let v = exactly(args, 2)?;
                Shape::Annulus { inner: v[0], outer: v[1] }
            }
            "disc-holes" | "disc-with-holes" => {
                let mut parts = args.split(';');
                let radius = exactly(parts.next().unwrap_or(""), 1)?[0];
                let holes = parts
                    .filter(|p| !p.trim().is_empty())
                    .map(|p| {
                        let v = exactly(p, 3)?;
                        Ok(Hole { center: [v[0], v[1]], radius: v[2] })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Shape::DiscWithHoles { radius, holes }
            }
            "polygon" => {
                let vertices = args
                    .split(';')
                    .filter(|p| !p.trim().is_empty())
                    .map(|p| {
                        let v = exactly(p, 2)?;
                        Ok([v[0], v[1]])
                    })
                    .collect::<Result<Vec<_>>>()?;
                Shape::Polygon { vertices }
            }
            other => return Err(Error::InvalidShape(format!("unknown shape {other:?}"))),
        };
        shape.validate()?;
        Ok(shape)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Rectangle { width, height } => write!(f, "rectangle:{width},{height}"),
            Shape::Disc { radius } => write!(f, "disc:{radius}"),
            Shape::Annulus { inner, outer } => write!(f, "annulus:{inner},{outer}"),
            Shape::DiscWithHoles { radius, holes } => {
                write!(f, "disc-holes:{radius}")?;
                for h in holes {
                    write!(f, ";{},{},{}", h.center[0], h.center[1], h.radius)?;
                }
                Ok(())
            }
            Shape::Polygon { vertices } => {
                write!(f, "polygon:")?;
                for (i, v) in vertices.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{},{}", v[0], v[1])?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_descriptors() {
        assert_eq!("square".parse::<Shape>().unwrap(), Shape::square());
        assert_eq!(
            "rectangle:2,0.5".parse::<Shape>().unwrap(),
            Shape::Rectangle { width: 2.0, height: 0.5 }
        );
        assert_eq!("disc".parse::<Shape>().unwrap(), Shape::Disc { radius: 1.0 });
        let holes: Shape = "disc-holes:1;0.3,0,0.1;-0.3,0,0.2".parse().unwrap();
        match holes {
            Shape::DiscWithHoles { radius, holes } => {
                assert_eq!(radius, 1.0);
                assert_eq!(holes.len(), 2);
                assert_eq!(holes[1].center, [-0.3, 0.0]);
            }
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn display_round_trips() {
        for text in ["rectangle:2,0.5", "disc:1", "annulus:0.5,1", "polygon:0,0;1,0;0,1"] {
            let shape: Shape = text.parse().unwrap();
            assert_eq!(shape.to_string().parse::<Shape>().unwrap(), shape);
        }
    }

    #[test]
    fn rejects_bad_descriptors() {
        assert!("hexagon".parse::<Shape>().is_err());
        assert!("annulus:1,0.5".parse::<Shape>().is_err());
        assert!("rectangle:1".parse::<Shape>().is_err());
        assert!("disc:-1".parse::<Shape>().is_err());
        assert!("polygon:0,0;1,0".parse::<Shape>().is_err());
    }

    #[test]
    fn membership_is_strict() {
        let sq = Shape::square();
        assert!(!sq.contains(0.0, 0.5));
        assert!(sq.contains(1e-9, 0.5));
        let tri: Shape = "polygon:0,0;1,0;0,1".parse().unwrap();
        assert!(tri.contains(0.2, 0.2));
        assert!(!tri.contains(0.5, 0.5));
        assert!(!tri.contains(0.7, 0.7));
        assert!((tri.area() - 0.5).abs() < 1e-15);
    }
}
