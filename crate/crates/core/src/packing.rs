//! Disc packings on flat tori and inside grid domains.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sci17;
use crate::geometry::DomainGrid;
use crate::pleijel::{hexagonal_density, P_BLIND};

/// Absolute tolerance for tangency and containment.
pub const OVERLAP_TOL: f64 = 1e-12;

/// Slack on `density <= π/√12`.
pub const DENSITY_TOL: f64 = 1e-9;

const BRUTE_FORCE_LIMIT: usize = 10_000;

#[derive(Debug, Clone)]
pub enum Region {
    /// `[0, lx) x [0, ly)` with periodic identification.
    Torus { lx: f64, ly: f64 },
    Grid(DomainGrid),
}

impl Region {
    pub fn area(&self) -> f64 {
        match self {
            Region::Torus { lx, ly } => lx * ly,
            Region::Grid(g) => g.area(),
        }
    }

    /// Distance between two points, minimum image on a torus.
    pub fn distance(&self, a: [f64; 2], b: [f64; 2]) -> f64 {
        match self {
            Region::Torus { lx, ly } => {
                let wrap = |d: f64, l: f64| {
                    let d = d.abs() % l;
                    d.min(l - d)
                };
                wrap(a[0] - b[0], *lx).hypot(wrap(a[1] - b[1], *ly))
            }
            Region::Grid(_) => (a[0] - b[0]).hypot(a[1] - b[1]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    pub center: [f64; 2],
    pub radius: f64,
}

#[derive(Debug, Clone)]
pub struct DiscPacking {
    pub region: Region,
    pub discs: Vec<Disc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    Overlap(usize, usize),
    Outside(usize),
    NonPositiveRadius(usize),
}

/// Check radii, pairwise separation `|c_i - c_j| >= r_i + r_j - tol` and
/// containment. On a grid the boundary sits half a cell from the centre of
/// every exterior cell. On a torus a disc must not wrap onto itself.
pub fn verify_packing(packing: &DiscPacking) -> std::result::Result<(), Violation> {
    for (i, d) in packing.discs.iter().enumerate() {
        if !(d.radius > 0.0 && d.radius.is_finite() && d.center.iter().all(|c| c.is_finite())) {
            return Err(Violation::NonPositiveRadius(i));
        }
        if !inside(&packing.region, d) {
            return Err(Violation::Outside(i));
        }
    }
    match first_overlap(packing) {
        Some((i, j)) => Err(Violation::Overlap(i, j)),
        None => Ok(()),
    }
}

fn inside(region: &Region, d: &Disc) -> bool {
    match region {
        Region::Torus { lx, ly } => 2.0 * d.radius <= lx.min(*ly) + OVERLAP_TOL,
        Region::Grid(grid) => {
            let h = grid.h();
            let (ox, oy) = grid.origin();
            let reach = d.radius + 0.5 * h;
            let to_col = |x: f64| (x - ox) / h;
            let to_row = |y: f64| (y - oy) / h;
            let (c0, c1) = (to_col(d.center[0] - reach).floor(), to_col(d.center[0] + reach).ceil());
            let (r0, r1) = (to_row(d.center[1] - reach).floor(), to_row(d.center[1] + reach).ceil());
            if c0 < 0.0 || r0 < 0.0 || c1 >= grid.cols() as f64 || r1 >= grid.rows() as f64 {
                return false;
            }
            let mask = grid.mask();
            for r in r0 as usize..=r1 as usize {
                for c in c0 as usize..=c1 as usize {
                    if !mask.get(r, c) {
                        let (x, y) = grid.cell_center(r, c);
                        if (x - d.center[0]).hypot(y - d.center[1]) < reach - OVERLAP_TOL {
                            return false;
                        }
                    }
                }
            }
            true
        }
    }
}

fn overlaps(region: &Region, a: &Disc, b: &Disc) -> bool {
    region.distance(a.center, b.center) < a.radius + b.radius - OVERLAP_TOL
}

fn first_overlap(packing: &DiscPacking) -> Option<(usize, usize)> {
    let discs = &packing.discs;
    if discs.len() <= BRUTE_FORCE_LIMIT {
        for i in 0..discs.len() {
            for j in i + 1..discs.len() {
                if overlaps(&packing.region, &discs[i], &discs[j]) {
                    return Some((i, j));
                }
            }
        }
        return None;
    }
    let r_max = discs.iter().fold(0.0f64, |m, d| m.max(d.radius));
    let mut hash = SpatialHash::new(&packing.region, 2.0 * r_max);
    let mut found: Option<(usize, usize)> = None;
    for (j, d) in discs.iter().enumerate() {
        for i in hash.near(d.center) {
            if overlaps(&packing.region, &discs[i], d) && found.is_none_or(|f| (i, j) < f) {
                found = Some((i, j));
            }
        }
        hash.insert(d.center, j);
    }
    found.map(|(i, j)| (i.min(j), i.max(j)))
}

/// Uniform bucket grid whose cells are at least `cell` wide, periodic on a
/// torus. Neighbours of a point are the items in the surrounding 3x3 cells.
struct SpatialHash {
    width: (f64, f64),
    dims: Option<(i64, i64)>,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl SpatialHash {
    fn new(region: &Region, cell: f64) -> Self {
        let cell = cell.max(f64::MIN_POSITIVE);
        let (width, dims) = match region {
            Region::Torus { lx, ly } => {
                let nx = ((lx / cell).floor() as i64).max(1);
                let ny = ((ly / cell).floor() as i64).max(1);
                ((lx / nx as f64, ly / ny as f64), Some((nx, ny)))
            }
            Region::Grid(_) => ((cell, cell), None),
        };
        SpatialHash { width, dims, buckets: HashMap::new() }
    }

    fn wrap(&self, k: (i64, i64)) -> (i64, i64) {
        match self.dims {
            Some((nx, ny)) => (k.0.rem_euclid(nx), k.1.rem_euclid(ny)),
            None => k,
        }
    }

    fn key(&self, p: [f64; 2]) -> (i64, i64) {
        self.wrap(((p[0] / self.width.0).floor() as i64, (p[1] / self.width.1).floor() as i64))
    }

    fn insert(&mut self, p: [f64; 2], id: usize) {
        let k = self.key(p);
        self.buckets.entry(k).or_default().push(id);
    }

    fn near(&self, p: [f64; 2]) -> Vec<usize> {
        let (kx, ky) = self.key(p);
        let mut keys = Vec::with_capacity(9);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let k = self.wrap((kx + dx, ky + dy));
                if !keys.contains(&k) {
                    keys.push(k);
                }
            }
        }
        keys.iter().filter_map(|k| self.buckets.get(k)).flatten().copied().collect()
    }
}

/// `Σ π r² / |region|` of a verified packing.
pub fn packing_density(packing: &DiscPacking) -> Result<f64> {
    check(packing)?;
    Ok(packing.discs.iter().map(|d| PI * d.radius * d.radius).sum::<f64>() / packing.region.area())
}

fn check(packing: &DiscPacking) -> Result<()> {
    verify_packing(packing).map_err(|v| match v {
        Violation::Overlap(a, b) => Error::Overlap { first: a, second: b },
        Violation::Outside(i) => Error::OutsideRegion(i),
        Violation::NonPositiveRadius(i) => Error::InvalidParameter(format!("disc {i} has an invalid radius or centre")),
    })
}

/// Smallest over largest radius.
pub fn radius_ratio(packing: &DiscPacking) -> Result<f64> {
    if packing.discs.is_empty() {
        return Err(Error::EmptyPacking);
    }
    let (lo, hi) = packing.discs.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), d| (lo.min(d.radius), hi.max(d.radius)));
    Ok(lo / hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlindReport {
    pub discs: usize,
    pub ratio: f64,
    pub density: f64,
    /// `ratio >= p`
    pub hypothesis_met: bool,
    /// `density <= π/√12 + 1e-9`, only evaluated when the hypothesis is met.
    pub bound_respected: Option<bool>,
    pub p: f64,
    pub bound: f64,
}

/// Density against the hexagonal bound for packings whose radius ratio is
/// at least [`P_BLIND`].
pub fn blind_bound_check(packing: &DiscPacking) -> Result<BlindReport> {
    let density = packing_density(packing)?;
    let ratio = radius_ratio(packing)?;
    let hypothesis_met = ratio >= P_BLIND;
    let bound = hexagonal_density();
    Ok(BlindReport {
        discs: packing.discs.len(),
        ratio,
        density,
        hypothesis_met,
        bound_respected: hypothesis_met.then_some(density <= bound + DENSITY_TOL),
        p: P_BLIND,
        bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum RadiiLaw {
    Constant { r: f64 },
    Uniform { lo: f64, hi: f64 },
}

impl RadiiLaw {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            RadiiLaw::Constant { r } => r > 0.0 && r.is_finite(),
            RadiiLaw::Uniform { lo, hi } => lo > 0.0 && lo <= hi && hi.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid radii law {self:?}")))
        }
    }

    fn max(&self) -> f64 {
        match *self {
            RadiiLaw::Constant { r } => r,
            RadiiLaw::Uniform { hi, .. } => hi,
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            RadiiLaw::Constant { r } => r,
            RadiiLaw::Uniform { lo, hi } if lo == hi => lo,
            RadiiLaw::Uniform { lo, hi } => rng.random_range(lo..=hi),
        }
    }
}

/// Random sequential insertion on the torus `lx x ly`: each attempt draws a
/// radius and a uniform centre and keeps the disc if it overlaps nothing.
pub fn greedy_pack(lx: f64, ly: f64, law: RadiiLaw, attempts: usize, seed: u64) -> Result<DiscPacking> {
    law.validate()?;
    if attempts == 0 {
        return Err(Error::InvalidParameter("attempts must be at least 1".into()));
    }
    if !(lx > 0.0 && ly > 0.0) || 2.0 * law.max() > lx.min(ly) {
        return Err(Error::InvalidParameter(format!("torus {lx} x {ly} too small for radius {}", law.max())));
    }
    let region = Region::Torus { lx, ly };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hash = SpatialHash::new(&region, 2.0 * law.max());
    let mut discs: Vec<Disc> = Vec::new();
    for _ in 0..attempts {
        let radius = law.sample(&mut rng);
        let center = [rng.random_range(0.0..lx), rng.random_range(0.0..ly)];
        let cand = Disc { center, radius };
        if hash.near(center).into_iter().all(|i| !overlaps(&region, &discs[i], &cand)) {
            hash.insert(center, discs.len());
            discs.push(cand);
        }
    }
    Ok(DiscPacking { region, discs })
}

/// Hexagonal packing of discs of radius `r`. The torus is snapped to the
/// nearest commensurate size `2rk x 2√3 r m`, otherwise the lattice would
/// overlap itself across the seam.
pub fn hex_lattice(lx: f64, ly: f64, r: f64) -> Result<DiscPacking> {
    let row = r * 3f64.sqrt();
    let (k, m) = snap(lx, ly, 2.0 * r, 2.0 * row)?;
    let mut discs = Vec::with_capacity(2 * k * m);
    for i in 0..2 * m {
        let shift = if i % 2 == 1 { r } else { 0.0 };
        for c in 0..k {
            discs.push(Disc { center: [r + shift + 2.0 * r * c as f64, r + row * i as f64], radius: r });
        }
    }
    Ok(DiscPacking { region: Region::Torus { lx: 2.0 * r * k as f64, ly: 2.0 * row * m as f64 }, discs })
}

/// Square packing of discs of radius `r` on the torus snapped to `2rk x 2rm`.
pub fn square_lattice(lx: f64, ly: f64, r: f64) -> Result<DiscPacking> {
    let (k, m) = snap(lx, ly, 2.0 * r, 2.0 * r)?;
    let discs = (0..m)
        .flat_map(|i| (0..k).map(move |c| Disc { center: [r + 2.0 * r * c as f64, r + 2.0 * r * i as f64], radius: r }))
        .collect();
    Ok(DiscPacking { region: Region::Torus { lx: 2.0 * r * k as f64, ly: 2.0 * r * m as f64 }, discs })
}

fn snap(lx: f64, ly: f64, px: f64, py: f64) -> Result<(usize, usize)> {
    if !(px > 0.0 && px.is_finite()) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {}", px / 2.0)));
    }
    let (k, m) = ((lx / px).round(), (ly / py).round());
    if !(k >= 1.0 && m >= 1.0) {
        return Err(Error::InvalidParameter(format!("torus {lx} x {ly} holds no lattice period")));
    }
    Ok((k as usize, m as usize))
}

/// Provenance written next to a packing CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingSidecar {
    pub generator: String,
    pub region: String,
    pub seed: Option<u64>,
    pub radii_law: Option<RadiiLaw>,
    pub attempts: Option<usize>,
    pub discs: usize,
}

pub fn region_header(region: &Region) -> String {
    match region {
        Region::Torus { lx, ly } => format!("torus {} {}", sci17(*lx), sci17(*ly)),
        Region::Grid(g) => format!("grid {} {} {}", sci17(g.h()), g.rows(), g.cols()),
    }
}

/// `# region: ...` line, then `x,y,r` rows.
pub fn write_packing_csv<W: Write>(packing: &DiscPacking, mut out: W) -> Result<()> {
    writeln!(out, "# region: {}", region_header(&packing.region))?;
    writeln!(out, "x,y,r")?;
    for d in &packing.discs {
        writeln!(out, "{},{},{}", sci17(d.center[0]), sci17(d.center[1]), sci17(d.radius))?;
    }
    Ok(())
}

/// Read a packing written by [`write_packing_csv`]. Only torus regions can
/// be restored without the grid itself.
pub fn read_packing_csv<R: BufRead>(input: R) -> Result<DiscPacking> {
    let mut region = None;
    let mut discs = Vec::new();
    for (no, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(desc) = rest.trim().strip_prefix("region:") {
                let parts: Vec<&str> = desc.split_whitespace().collect();
                match parts.as_slice() {
                    ["torus", lx, ly] => {
                        let parse = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("line {}: {e}", no + 1)));
                        let (lx, ly) = (parse(lx)?, parse(ly)?);
                        if !(lx > 0.0 && ly > 0.0) {
                            return Err(Error::Parse(format!("line {}: torus sides must be positive", no + 1)));
                        }
                        region = Some(Region::Torus { lx, ly });
                    }
                    _ => return Err(Error::Parse(format!("line {}: unsupported region '{}'", no + 1, desc.trim()))),
                }
            }
            continue;
        }
        if line == "x,y,r" {
            continue;
        }
        let vals: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(format!("line {}: {e}", no + 1)))?;
        match vals.as_slice() {
            [x, y, r] => discs.push(Disc { center: [*x, *y], radius: *r }),
            _ => return Err(Error::Parse(format!("line {}: expected x,y,r", no + 1))),
        }
    }
    let region = region.ok_or_else(|| Error::Parse("missing '# region:' header".into()))?;
    Ok(DiscPacking { region, discs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn torus(lx: f64, ly: f64, discs: &[(f64, f64, f64)]) -> DiscPacking {
        DiscPacking {
            region: Region::Torus { lx, ly },
            discs: discs.iter().map(|&(x, y, r)| Disc { center: [x, y], radius: r }).collect(),
        }
    }

    #[test]
    fn tangency_and_overlap() {
        assert_eq!(verify_packing(&torus(10.0, 10.0, &[(1.0, 1.0, 1.0), (3.0, 1.0, 1.0)])), Ok(()));
        assert_eq!(verify_packing(&torus(10.0, 10.0, &[(1.0, 1.0, 1.0), (2.9, 1.0, 1.0)])), Err(Violation::Overlap(0, 1)));
        assert_eq!(verify_packing(&torus(10.0, 10.0, &[])), Ok(()));
        // across the seam
        assert_eq!(verify_packing(&torus(10.0, 10.0, &[(0.5, 5.0, 1.0), (9.0, 5.0, 1.0)])), Err(Violation::Overlap(0, 1)));
        assert!(packing_density(&torus(10.0, 10.0, &[(1.0, 1.0, 1.0), (2.0, 1.0, 1.0)])).is_err());
        assert_eq!(verify_packing(&torus(10.0, 10.0, &[(1.0, 1.0, 0.0)])), Err(Violation::NonPositiveRadius(0)));
    }

    #[test]
    fn lattice_densities() {
        let hex = hex_lattice(12.0, 10.3923, 1.0).unwrap();
        match hex.region {
            Region::Torus { lx, ly } => {
                assert_eq!(lx, 12.0);
                assert!((ly - 6.0 * 3f64.sqrt()).abs() < 1e-14);
            }
            _ => unreachable!(),
        }
        assert!((packing_density(&hex).unwrap() - PI / 12f64.sqrt()).abs() < 1e-12);
        let sq = square_lattice(8.0, 6.0, 1.0).unwrap();
        assert!((packing_density(&sq).unwrap() - PI / 4.0).abs() < 1e-12);
        let one = torus(2.0, 2.0, &[(1.0, 1.0, 1.0)]);
        assert!((packing_density(&one).unwrap() - PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn ratios() {
        assert_eq!(radius_ratio(&hex_lattice(4.0, 3.5, 1.0).unwrap()).unwrap(), 1.0);
        let two = torus(10.0, 10.0, &[(1.0, 1.0, P_BLIND), (5.0, 5.0, 1.0)]);
        assert_eq!(radius_ratio(&two).unwrap(), P_BLIND);
        assert!(blind_bound_check(&two).unwrap().hypothesis_met);
        let half = torus(10.0, 10.0, &[(1.0, 1.0, 0.5), (5.0, 5.0, 1.0)]);
        let report = blind_bound_check(&half).unwrap();
        assert!(!report.hypothesis_met);
        assert_eq!(report.bound_respected, None);
        assert!(matches!(radius_ratio(&torus(1.0, 1.0, &[])), Err(Error::EmptyPacking)));
    }

    #[test]
    fn hexagonal_packing_meets_the_bound_with_equality() {
        let r = blind_bound_check(&hex_lattice(20.0, 17.3, 1.0).unwrap()).unwrap();
        assert!(r.hypothesis_met);
        assert_eq!(r.bound_respected, Some(true));
        assert!((r.density - r.bound).abs() < 1e-12);
    }

    #[test]
    fn two_radius_packing_can_beat_hexagonal_density() {
        // hexagonal lattice of unit discs with a small disc in every
        // triangular hole: ratio far below p, density above π/√12
        let base = hex_lattice(12.0, 10.4, 1.0).unwrap();
        let small = 2.0 / 3f64.sqrt() - 1.0;
        let mut discs = base.discs.clone();
        for d in &base.discs {
            discs.push(Disc { center: [d.center[0] + 1.0, d.center[1] + 1.0 / 3f64.sqrt()], radius: small });
        }
        let packing = DiscPacking { region: base.region, discs };
        let report = blind_bound_check(&packing).unwrap();
        assert!(!report.hypothesis_met);
        assert!(report.density > hexagonal_density());
    }

    #[test]
    fn greedy_is_deterministic_and_valid() {
        let law = RadiiLaw::Uniform { lo: P_BLIND, hi: 1.0 };
        let a = greedy_pack(20.0, 20.0, law, 5000, 7).unwrap();
        let b = greedy_pack(20.0, 20.0, law, 5000, 7).unwrap();
        assert_eq!(a.discs, b.discs);
        assert!(verify_packing(&a).is_ok());
        let report = blind_bound_check(&a).unwrap();
        assert_eq!(report.bound_respected, Some(true));
        let one = greedy_pack(20.0, 20.0, RadiiLaw::Constant { r: 1.0 }, 1, 3).unwrap();
        assert_eq!(one.discs.len(), 1);
        assert!(greedy_pack(1.0, 1.0, RadiiLaw::Constant { r: 1.0 }, 1, 3).is_err());
        assert!(greedy_pack(5.0, 5.0, RadiiLaw::Uniform { lo: 1.0, hi: 0.5 }, 1, 3).is_err());
    }

    #[test]
    fn greedy_saturation_band() {
        let p = greedy_pack(50.0, 50.0, RadiiLaw::Constant { r: 1.0 }, 1_000_000, 11).unwrap();
        let d = packing_density(&p).unwrap();
        assert!((0.50..=0.58).contains(&d), "density {d}");
    }

    #[test]
    fn spatial_hash_agrees_with_brute_force() {
        // beyond the brute-force limit, a planted overlap is still found
        let mut p = square_lattice(220.0, 220.0, 1.0).unwrap();
        assert!(p.discs.len() > BRUTE_FORCE_LIMIT);
        assert!(verify_packing(&p).is_ok());
        p.discs[5000].center[0] += 0.5;
        assert_eq!(verify_packing(&p), Err(Violation::Overlap(5000, 5001)));
    }

    #[test]
    fn csv_round_trip() {
        let p = greedy_pack(10.0, 8.0, RadiiLaw::Uniform { lo: 0.8, hi: 1.0 }, 300, 1).unwrap();
        let mut out = Vec::new();
        write_packing_csv(&p, &mut out).unwrap();
        let back = read_packing_csv(out.as_slice()).unwrap();
        assert_eq!(back.discs, p.discs);
        assert!(matches!(back.region, Region::Torus { lx, ly } if lx == 10.0 && ly == 8.0));
        assert!(read_packing_csv("x,y,r\n1,1,1\n".as_bytes()).is_err());
        assert!(read_packing_csv("# region: torus 4 4\n1,1\n".as_bytes()).is_err());
    }

    #[test]
    fn grid_containment() {
        use crate::geometry::{rasterize_domain, Shape};
        let grid = rasterize_domain(&Shape::square(), 0.01).unwrap();
        let ok = DiscPacking { region: Region::Grid(grid.clone()), discs: vec![Disc { center: [0.5, 0.5], radius: 0.49 }] };
        assert!(verify_packing(&ok).is_ok());
        let out = DiscPacking { region: Region::Grid(grid), discs: vec![Disc { center: [0.5, 0.5], radius: 0.52 }] };
        assert_eq!(verify_packing(&out), Err(Violation::Outside(0)));
    }

    proptest! {
        #[test]
        fn torus_distance_is_a_metric(
            pts in proptest::collection::vec((0.0f64..7.0, 0.0f64..5.0), 3),
        ) {
            let region = Region::Torus { lx: 7.0, ly: 5.0 };
            let p: Vec<[f64; 2]> = pts.iter().map(|&(x, y)| [x, y]).collect();
            let d = |a: usize, b: usize| region.distance(p[a], p[b]);
            prop_assert!((d(0, 1) - d(1, 0)).abs() < 1e-12);
            prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2) + 1e-12);
            prop_assert!(d(0, 0) == 0.0);
        }

        #[test]
        fn density_is_translation_invariant(seed in 0u64..50, sx in 0.0f64..9.0, sy in 0.0f64..9.0) {
            let p = greedy_pack(9.0, 9.0, RadiiLaw::Uniform { lo: 0.75, hi: 1.0 }, 200, seed).unwrap();
            let moved = DiscPacking {
                region: p.region.clone(),
                discs: p.discs.iter().map(|d| Disc {
                    center: [(d.center[0] + sx) % 9.0, (d.center[1] + sy) % 9.0],
                    radius: d.radius,
                }).collect(),
            };
            prop_assert!(verify_packing(&moved).is_ok());
            prop_assert!((packing_density(&p).unwrap() - packing_density(&moved).unwrap()).abs() < 1e-12);
        }
    }
}
