//! Quantitative Faber-Krahn bound, the four-class partition of nodal domains
//! and the gain over Pleijel's constant.

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sci17;
use crate::geometry::{domain_metrics, DomainGrid, DomainMetrics, Selection};
use crate::nodal::NodalDomain;
use crate::packing::{Disc, DiscPacking, Region};
use crate::spectral::{assemble_dirichlet_laplacian, smallest_eigenpairs, RectangleMode};

/// Radius ratio above which Blind's density bound holds. The true constant
/// has more digits; this truncation is the threshold used throughout.
pub const P_BLIND: f64 = 0.74299;

/// Relative slack on inequalities that involve computed eigenvalues.
pub const DISCRETIZATION_SLACK: f64 = 5e-2;

/// `π/√12`, the density of the hexagonal disc packing.
pub fn hexagonal_density() -> f64 {
    PI / 12f64.sqrt()
}

/// Upper end of the interval where the gain is positive, `1 - sqrt(π/√12)`.
pub fn delta_max() -> f64 {
    1.0 - hexagonal_density().sqrt()
}

/// Lower bound on `λ₁(G)` from the inradius deficit and the smallest hole:
/// `(j/r₀)² [1 + min(1 - r_i/r₀, 2√γ/r₀)³ / 250]`.
pub fn fk_lower_bound(metrics: &DomainMetrics, j: f64) -> f64 {
    let r0 = metrics.r_0;
    let deficit = 1.0 - metrics.r_i / r0;
    let hole = if metrics.gamma.is_infinite() { f64::INFINITY } else { 2.0 * metrics.gamma.sqrt() / r0 };
    let m = deficit.min(hole);
    (j / r0).powi(2) * (1.0 + m.powi(3) / 250.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma21Report {
    pub lambda1_computed: f64,
    pub bound: f64,
    /// `lambda1_computed / bound - 1`
    pub margin: f64,
    pub metrics: DomainMetrics,
    pub passed: bool,
}

/// Solve for `λ₁` on the whole grid and compare it with [`fk_lower_bound`].
pub fn verify_lemma21(grid: &DomainGrid, j: f64, tol: f64) -> Result<Lemma21Report> {
    let op = assemble_dirichlet_laplacian(grid);
    let lambda1 = smallest_eigenpairs(&op, 1, 1e-9)?[0].lambda;
    let metrics = domain_metrics(grid, Selection::Whole)?;
    let bound = fk_lower_bound(&metrics, j);
    let margin = lambda1 / bound - 1.0;
    Ok(Lemma21Report { lambda1_computed: lambda1, bound, margin, metrics, passed: margin >= -tol })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PleijelParams {
    pub delta: f64,
    pub p: f64,
    pub j: f64,
    pub lambda_n: f64,
    pub rho_minus: f64,
    pub rho_plus: f64,
}

/// Thresholds `ρ₋ = j(1-δ)/√λₙ` and `ρ₊ = ρ₋/p`. `δ = 0` is accepted and
/// gives the classical argument.
pub fn make_params(delta: f64, lambda_n: f64, p: f64, j: f64) -> Result<PleijelParams> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::InvalidParameter(format!("delta must lie in [0, 1), got {delta}")));
    }
    if !(lambda_n > 0.0 && lambda_n.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda_n must be positive, got {lambda_n}")));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("p must lie in (0, 1), got {p}")));
    }
    let rho_minus = j * (1.0 - delta) / lambda_n.sqrt();
    Ok(PleijelParams { delta, p, j, lambda_n, rho_minus, rho_plus: rho_minus / p })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DomainClass {
    I,
    II,
    III,
    IV,
}

/// Classify in the order II, I, III, IV; the thresholds of III are inclusive.
pub fn classify(metrics: &DomainMetrics, params: &PleijelParams) -> DomainClass {
    if metrics.r_0 > params.rho_plus {
        DomainClass::II
    } else if metrics.r_i <= (1.0 - params.delta) * metrics.r_0 {
        DomainClass::I
    } else if params.rho_minus <= metrics.r_i && metrics.r_i <= params.rho_plus {
        DomainClass::III
    } else {
        DomainClass::IV
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedDomain {
    pub metrics: DomainMetrics,
    pub class: DomainClass,
}

pub fn classify_all(domains: &[DomainMetrics], params: &PleijelParams) -> Vec<ClassifiedDomain> {
    domains.iter().map(|m| ClassifiedDomain { metrics: *m, class: classify(m, params) }).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VacuityReport {
    /// No genuine domain landed in class IV.
    pub holds: bool,
    pub first_violation: Option<usize>,
    /// Domains below the Faber-Krahn floor `λₙ r₀² ≥ j²(1 - slack)`; these
    /// cannot be nodal domains of a `λₙ` eigenfunction and are not counted.
    pub non_genuine: Vec<usize>,
}

/// Class IV is empty for genuine nodal domains because `λₙ r₀² ≥ j²` pushes
/// any round domain above `ρ₋`.
pub fn class_iv_vacuity_check(domains: &[ClassifiedDomain], lambda_n: f64, j: f64) -> VacuityReport {
    let floor = j * j * (1.0 - DISCRETIZATION_SLACK);
    let mut report = VacuityReport { holds: true, first_violation: None, non_genuine: Vec::new() };
    for (i, d) in domains.iter().enumerate() {
        if lambda_n * d.metrics.r_0.powi(2) < floor {
            report.non_genuine.push(i);
        } else if d.class == DomainClass::IV && report.first_violation.is_none() {
            report.holds = false;
            report.first_violation = Some(i);
        }
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub lambda_n: f64,
    #[serde(rename = "N")]
    pub total: usize,
    #[serde(rename = "N_I")]
    pub n_i: usize,
    #[serde(rename = "N_II")]
    pub n_ii: usize,
    #[serde(rename = "N_III")]
    pub n_iii: usize,
    #[serde(rename = "N_IV")]
    pub n_iv: usize,
    /// `λₙ |Ω|`
    pub lhs: f64,
    /// `j²πN`
    pub rhs_classical: f64,
    /// `j²π{N + δ³N_I/250 + (((1-δ)/p)² - 1)N_II}`
    pub rhs_refined: f64,
    /// `j²π(N + δ³(N_I + N_II)/250)`, only when the merge constraint holds.
    pub rhs_merged: Option<f64>,
    pub constraint_35_ok: bool,
    pub delta: f64,
    pub p: f64,
}

impl BoundReport {
    /// `lhs ≥ rhs_refined (1 - slack)`
    pub fn refined_holds(&self, slack: f64) -> bool {
        self.lhs >= self.rhs_refined * (1.0 - slack)
    }

    pub fn classical_holds(&self, slack: f64) -> bool {
        self.lhs >= self.rhs_classical * (1.0 - slack)
    }
}

pub fn aggregate_bound(
    n: usize,
    domains: &[ClassifiedDomain],
    lambda_n: f64,
    omega_area: f64,
    delta: f64,
    p: f64,
    j: f64,
) -> BoundReport {
    let mut counts = ClassCounts::default();
    for d in domains {
        counts.add(d.class, 1);
    }
    bound_from_counts(n, counts, lambda_n, omega_area, delta, p, j)
}

/// Number of domains per class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub i: usize,
    pub ii: usize,
    pub iii: usize,
    pub iv: usize,
}

impl ClassCounts {
    pub fn add(&mut self, class: DomainClass, count: usize) {
        match class {
            DomainClass::I => self.i += count,
            DomainClass::II => self.ii += count,
            DomainClass::III => self.iii += count,
            DomainClass::IV => self.iv += count,
        }
    }

    pub fn total(&self) -> usize {
        self.i + self.ii + self.iii + self.iv
    }
}

/// [`aggregate_bound`] from class counts alone.
pub fn bound_from_counts(
    n: usize,
    counts: ClassCounts,
    lambda_n: f64,
    omega_area: f64,
    delta: f64,
    p: f64,
    j: f64,
) -> BoundReport {
    let total = counts.total();
    let base = j * j * PI;
    let d3 = delta.powi(3) / 250.0;
    let ii = ((1.0 - delta) / p).powi(2) - 1.0;
    let ok = check_constraint_35(delta, p);
    BoundReport {
        n,
        lambda_n,
        total,
        n_i: counts.i,
        n_ii: counts.ii,
        n_iii: counts.iii,
        n_iv: counts.iv,
        lhs: lambda_n * omega_area,
        rhs_classical: base * total as f64,
        rhs_refined: base * (total as f64 + d3 * counts.i as f64 + ii * counts.ii as f64),
        rhs_merged: ok.then(|| base * (total as f64 + d3 * (counts.i + counts.ii) as f64)),
        constraint_35_ok: ok,
        delta,
        p,
    }
}

/// `δ³/250 ≤ ((1-δ)/p)² - 1`, evaluated literally.
pub fn check_constraint_35(delta: f64, p: f64) -> bool {
    delta.powi(3) / 250.0 <= ((1.0 - delta) / p).powi(2) - 1.0
}

/// `(2/j)² δ³/(250+δ³) (1 - π/√12 / (1-δ)²)`
pub fn gain_function(delta: f64, j: f64) -> f64 {
    let d3 = delta.powi(3);
    (2.0 / j).powi(2) * d3 / (250.0 + d3) * (1.0 - hexagonal_density() / (1.0 - delta).powi(2))
}

/// Gain on the grid `δ = step, 2 step, ...` strictly inside `(0, delta_max())`.
pub fn gain_scan(j: f64, step: f64) -> Vec<(f64, f64)> {
    let hi = delta_max();
    (1..)
        .map(|i| i as f64 * step)
        .take_while(|&d| d < hi)
        .map(|d| (d, gain_function(d, j)))
        .collect()
}

pub fn write_scan_csv<W: Write>(scan: &[(f64, f64)], mut out: W) -> Result<()> {
    writeln!(out, "delta,gain")?;
    for (d, g) in scan {
        writeln!(out, "{},{}", sci17(*d), sci17(*g))?;
    }
    Ok(())
}

pub const SCAN_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizeReport {
    pub delta_star: f64,
    pub gain_star: f64,
    /// `(2/j)²`
    pub pleijel_classical: f64,
    /// `(2/j)² - gain_star`
    pub improved_constant: f64,
    pub constraint_35: bool,
    pub p: f64,
}

/// Scan at [`SCAN_STEP`] then golden-section refinement to width `tol`. The
/// gain does not involve `p`; it enters only through the merge constraint,
/// which is reported rather than assumed.
pub fn optimize_gain(p: f64, j: f64, tol: f64) -> Result<OptimizeReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("p must lie in (0, 1), got {p}")));
    }
    let scan = gain_scan(j, SCAN_STEP);
    let best = scan.iter().copied().max_by(|a, b| a.1.total_cmp(&b.1)).expect("scan grid is non-empty");
    let f = |d: f64| gain_function(d, j);
    let (mut a, mut b) = ((best.0 - SCAN_STEP).max(0.0), (best.0 + SCAN_STEP).min(delta_max()));
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        }
    }
    let mid = 0.5 * (a + b);
    let (delta_star, gain_star) = [(mid, f(mid)), best].into_iter().max_by(|x, y| x.1.total_cmp(&y.1)).unwrap();
    let classical = (2.0 / j).powi(2);
    Ok(OptimizeReport {
        delta_star,
        gain_star,
        pleijel_classical: classical,
        improved_constant: classical - gain_star,
        constraint_35: check_constraint_35(delta_star, p),
        p,
    })
}

/// Metrics of one nodal cell of the rectangle product mode `mode`; all `m n`
/// cells are congruent `a/m` by `b/n` rectangles.
pub fn rectangle_cell_metrics(mode: &RectangleMode, a: f64, b: f64) -> DomainMetrics {
    let (w, h) = (a / mode.m as f64, b / mode.n as f64);
    DomainMetrics::new(w * h, 0.5 * w.min(h), f64::INFINITY)
}

/// Full classification of one solved mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeAnalysis {
    pub bound: BoundReport,
    pub vacuity: VacuityReport,
    pub params: PleijelParams,
}

pub fn analyze_mode(
    n: usize,
    lambda_n: f64,
    domains: &[DomainMetrics],
    omega_area: f64,
    delta: f64,
    p: f64,
    j: f64,
) -> Result<ModeAnalysis> {
    let params = make_params(delta, lambda_n, p, j)?;
    let classified = classify_all(domains, &params);
    Ok(ModeAnalysis {
        bound: aggregate_bound(n, &classified, lambda_n, omega_area, delta, p, j),
        vacuity: class_iv_vacuity_check(&classified, lambda_n, j),
        params,
    })
}

/// Inscribed discs of the class III domains, as a packing of the grid.
pub fn class_iii_packing(grid: &DomainGrid, domains: &[NodalDomain], params: &PleijelParams) -> DiscPacking {
    let discs = domains
        .iter()
        .filter(|d| classify(&d.metrics, params) == DomainClass::III)
        .map(|d| Disc { center: [d.incenter.0, d.incenter.1], radius: d.metrics.r_i })
        .collect();
    DiscPacking { region: Region::Grid(grid.clone()), discs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::j0_first_zero;

    fn j() -> f64 {
        j0_first_zero()
    }

    #[test]
    fn fk_bound_examples() {
        let j = j();
        let disc = DomainMetrics { area: PI, r_i: 1.0, r_0: 1.0, gamma: f64::INFINITY };
        assert_eq!(fk_lower_bound(&disc, j), j * j);
        let m = DomainMetrics { area: PI, r_i: 0.9, r_0: 1.0, gamma: f64::INFINITY };
        assert!((fk_lower_bound(&m, j) / (j * j) - (1.0 + 0.1f64.powi(3) / 250.0)).abs() < 1e-15);
        assert!((fk_lower_bound(&m, j) / (j * j) - 1.000004).abs() < 1e-12);
        let holed = DomainMetrics { area: PI, r_i: 0.5, r_0: 1.0, gamma: 0.0025 };
        assert!((fk_lower_bound(&holed, j) / (j * j) - 1.000004).abs() < 1e-12);
    }

    #[test]
    fn fk_bound_never_below_disc_value() {
        let j = j();
        for k in 0..50 {
            let r_i = k as f64 / 50.0;
            for gamma in [1e-4, 0.1, f64::INFINITY] {
                let m = DomainMetrics { area: PI, r_i, r_0: 1.0, gamma };
                assert!(fk_lower_bound(&m, j) >= j * j);
            }
        }
    }

    #[test]
    fn params_examples() {
        let j = j();
        let p = make_params(0.0, j * j, P_BLIND, j).unwrap();
        assert!((p.rho_minus - 1.0).abs() < 1e-15);
        assert!((p.rho_plus - 1.0 / P_BLIND).abs() < 1e-15);
        let q = make_params(0.5, 4.0 * j * j, P_BLIND, j).unwrap();
        assert!((q.rho_minus - 0.25).abs() < 1e-15);
        for d in [0.01, 0.3, 0.9] {
            let r = make_params(d, 17.0, 0.6, j).unwrap();
            assert_eq!(r.rho_plus * 0.6, r.rho_minus);
        }
        assert!(make_params(1.0, 1.0, P_BLIND, j).is_err());
        assert!(make_params(-0.1, 1.0, P_BLIND, j).is_err());
        assert!(make_params(0.1, 0.0, P_BLIND, j).is_err());
    }

    #[test]
    fn classification_examples() {
        let j = j();
        let params = make_params(0.036, 50.0, P_BLIND, j).unwrap();
        let big = DomainMetrics { area: 1.0, r_i: 0.0, r_0: 2.0 * params.rho_plus, gamma: f64::INFINITY };
        assert_eq!(classify(&big, &params), DomainClass::II);
        let round = DomainMetrics { area: 1.0, r_i: params.rho_minus, r_0: params.rho_minus, gamma: f64::INFINITY };
        assert_eq!(classify(&round, &params), DomainClass::III);
        let r0 = params.rho_plus;
        let thin = DomainMetrics { area: 1.0, r_i: 0.5 * (1.0 - params.delta) * r0, r_0: r0, gamma: f64::INFINITY };
        assert_eq!(classify(&thin, &params), DomainClass::I);
        let small = DomainMetrics { area: 1.0, r_i: 0.5 * params.rho_minus, r_0: 0.5 * params.rho_minus, gamma: 1.0 };
        assert_eq!(classify(&small, &params), DomainClass::IV);
    }

    #[test]
    fn class_ii_ignores_other_fields() {
        let params = make_params(0.2, 10.0, 0.7, j()).unwrap();
        for r_i in [0.0, 0.1, 5.0] {
            let m = DomainMetrics { area: 1.0, r_i, r_0: params.rho_plus * 1.0001, gamma: 0.3 };
            assert_eq!(classify(&m, &params), DomainClass::II);
        }
    }

    #[test]
    fn vacuity_check_separates_non_genuine_input() {
        let j = j();
        let lambda = 40.0;
        let params = make_params(0.036, lambda, P_BLIND, j).unwrap();
        let r0 = (0.5 * j * j / lambda).sqrt();
        let synthetic = DomainMetrics { area: PI * r0 * r0, r_i: r0, r_0: r0, gamma: f64::INFINITY };
        let classified = classify_all(&[synthetic], &params);
        assert_eq!(classified[0].class, DomainClass::IV);
        let report = class_iv_vacuity_check(&classified, lambda, j);
        assert!(report.holds);
        assert_eq!(report.non_genuine, vec![0]);

        let at_threshold = DomainMetrics { area: 1.0, r_i: params.rho_minus, r_0: params.rho_minus, gamma: f64::INFINITY };
        assert_eq!(classify(&at_threshold, &params), DomainClass::III);

        // a genuine-size domain forced into IV is a violation
        let forced = ClassifiedDomain { metrics: DomainMetrics::new(10.0, 1.0, f64::INFINITY), class: DomainClass::IV };
        let report = class_iv_vacuity_check(&[forced], lambda, j);
        assert!(!report.holds);
        assert_eq!(report.first_violation, Some(0));
    }

    #[test]
    fn aggregate_examples() {
        let j = j();
        let params = make_params(0.1, 30.0, P_BLIND, j).unwrap();
        let iii = ClassifiedDomain { metrics: DomainMetrics::new(1.0, 0.5, f64::INFINITY), class: DomainClass::III };
        let r = aggregate_bound(5, &[iii; 4], 30.0, 1.0, 0.1, P_BLIND, j);
        assert_eq!(r.rhs_refined, r.rhs_classical);
        assert_eq!(r.rhs_classical, j * j * PI * 4.0);
        let i = ClassifiedDomain { class: DomainClass::I, ..iii };
        let r = aggregate_bound(5, &[i; 3], params.lambda_n, 1.0, 0.1, P_BLIND, j);
        assert!((r.rhs_refined / (j * j * PI * 3.0) - (1.0 + 4e-6)).abs() < 1e-15);
        assert_eq!(r.total, r.n_i + r.n_ii + r.n_iii + r.n_iv);
        assert!(r.rhs_merged.is_some());
        // classical limit
        let ii = ClassifiedDomain { class: DomainClass::II, ..iii };
        let r = aggregate_bound(5, &[i, ii, iii], 30.0, 1.0, 0.0, P_BLIND, j);
        let extra = (1.0 / P_BLIND).powi(2) - 1.0;
        assert!((r.rhs_refined - j * j * PI * (3.0 + extra)).abs() < 1e-12);
        assert_eq!(r.rhs_merged, Some(r.rhs_classical));
    }

    #[test]
    fn constraint_examples() {
        assert!(check_constraint_35(0.036, P_BLIND));
        assert!(((1.0 - 0.036) / P_BLIND).powi(2) - 1.0 > 0.68);
        assert!(!check_constraint_35(0.9, P_BLIND));
        assert!(check_constraint_35(0.0, P_BLIND));
    }

    #[test]
    fn gain_examples() {
        let j = j();
        assert_eq!(gain_function(0.0, j), 0.0);
        assert!(gain_function(delta_max(), j).abs() < 1e-22);
        assert!((delta_max() - 0.0476872).abs() < 1e-6);
        let g = gain_function(0.036, j);
        assert!((g - 3.1109e-9).abs() < 1e-12, "{g}");
        assert!(gain_scan(j, 1e-4).iter().all(|&(_, g)| g > 0.0));
    }

    #[test]
    fn optimizer_beats_every_scan_point() {
        let j = j();
        let r = optimize_gain(P_BLIND, j, 1e-10).unwrap();
        // oracle: plain scan at step 1e-5
        let oracle = gain_scan(j, 1e-5).into_iter().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
        assert!((r.delta_star - oracle.0).abs() < 2e-5);
        assert!(r.gain_star >= oracle.1);
        assert!(gain_scan(j, 1e-4).iter().all(|&(_, g)| g <= r.gain_star));
        assert!(r.constraint_35);
        assert!((r.delta_star - 0.03593).abs() < 1e-4);
        assert_eq!(r.improved_constant, r.pleijel_classical - r.gain_star);
        assert!(optimize_gain(P_BLIND, j, 0.0).is_err());
    }

    #[test]
    fn scan_csv_is_written() {
        let mut out = Vec::new();
        write_scan_csv(&gain_scan(j(), 1e-3), &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 48);
    }

    #[test]
    fn rectangle_cells() {
        let mode = RectangleMode::new(2, 3, 1.0, 1.0);
        let m = rectangle_cell_metrics(&mode, 1.0, 1.0);
        assert!((m.area - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(m.r_i, 1.0 / 6.0);
        assert!(m.is_simply_connected());
    }
}
