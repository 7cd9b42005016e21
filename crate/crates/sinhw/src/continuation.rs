//! Analytic continuation of branch values along z-plane paths, the finite
//! gluing table of the associated surface, and monodromy probes.
//!
//! Continuation integrates dw/dt = z′(t)/f′(w) with a classical fixed-step
//! fourth-order scheme and re-projects every step onto f(w) = z(t) by Newton
//! correction, so global drift is set by the projection tolerance rather
//! than the integrator order. Cut crossings are detected as region changes
//! between consecutive samples and refined by bisection.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::branch::{psi_branch, sheet_of_region, BranchId};
use crate::error::{Error, Result};
use crate::geometry::{cell_geometry, region_of, stack_info, RegionId};
use crate::map::{branch_points, cut_direction, eval_f, f_prime, x_a};
use crate::param::Parameter;

/// Default number of integration steps per path (one full turn of a circle).
pub const DEFAULT_SAMPLES: usize = 4096;

/// Minimum allowed distance between a path and any branch point.
pub const PATH_CLEARANCE: f64 = 1e-6;

/// A continuation path in the z-plane.
#[derive(Debug, Clone)]
pub enum PathSpec {
    /// Straight segments through the listed points (at least two).
    Polyline { points: Vec<Complex64>, samples: usize },
    /// center + radius·e^{i(start_angle + 2π·turns·t)}, t ∈ [0, 1].
    /// Negative turns wind clockwise.
    Circle {
        center: Complex64,
        radius: f64,
        turns: f64,
        start_angle: f64,
        samples: usize,
    },
}

impl PathSpec {
    pub fn samples(&self) -> usize {
        match self {
            PathSpec::Polyline { samples, .. } => *samples,
            PathSpec::Circle { samples, .. } => *samples,
        }
    }

    /// Position z(t), t ∈ [0, 1].
    pub fn at(&self, t: f64) -> Complex64 {
        match self {
            PathSpec::Polyline { points, .. } => {
                let segs = points.len() - 1;
                let s = (t * segs as f64).min(segs as f64 - 1e-12).max(0.0);
                let i = s.floor() as usize;
                let u = s - i as f64;
                points[i] * (1.0 - u) + points[i + 1] * u
            }
            PathSpec::Circle {
                center,
                radius,
                turns,
                start_angle,
                ..
            } => center + Complex64::from_polar(*radius, start_angle + 2.0 * PI * turns * t),
        }
    }

    /// Velocity z′(t).
    pub fn velocity(&self, t: f64) -> Complex64 {
        match self {
            PathSpec::Polyline { points, .. } => {
                let segs = points.len() - 1;
                let s = (t * segs as f64).min(segs as f64 - 1e-12).max(0.0);
                let i = s.floor() as usize;
                (points[i + 1] - points[i]) * segs as f64
            }
            PathSpec::Circle {
                radius,
                turns,
                start_angle,
                ..
            } => {
                let ang = start_angle + 2.0 * PI * turns * t;
                Complex64::new(0.0, 2.0 * PI * turns) * Complex64::from_polar(*radius, ang)
            }
        }
    }

    fn validate(&self, a: &Parameter) -> Result<()> {
        match self {
            PathSpec::Polyline { points, samples } => {
                if points.len() < 2 {
                    return Err(Error::InvalidPath(
                        "polyline needs at least two points".into(),
                    ));
                }
                if *samples == 0 {
                    return Err(Error::InvalidPath("samples must be positive".into()));
                }
                if points
                    .windows(2)
                    .all(|w| (w[1] - w[0]).norm() < f64::EPSILON)
                {
                    return Err(Error::InvalidPath("polyline has zero length".into()));
                }
            }
            PathSpec::Circle {
                radius, samples, ..
            } => {
                if *radius <= 0.0 {
                    return Err(Error::InvalidPath("circle radius must be positive".into()));
                }
                if *samples == 0 {
                    return Err(Error::InvalidPath("samples must be positive".into()));
                }
            }
        }
        let bps = branch_points(a);
        let n = self.samples().max(64);
        for i in 0..=n {
            let z = self.at(i as f64 / n as f64);
            for bp in &bps {
                if (z - bp).norm() < PATH_CLEARANCE {
                    return Err(Error::InvalidPath(format!(
                        "path passes within {PATH_CLEARANCE} of branch point {bp} at t = {}",
                        i as f64 / n as f64
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Which side of a cut a sheet presents in the gluing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutSide {
    /// The cut points belong to this sheet's extended domain.
    Closed,
    /// The cut is a free edge of this sheet.
    Open,
}

/// Kind of boundary curve behind a cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CutKind {
    /// Horizontal ray {ξ ≤ ξ_a, η = kπ/a}; image is the open segment
    /// between 0 and z_k.
    Ray,
    /// Upper half-arch of ∂Ω_k; image is the closed ray beyond z_k.
    ArchUpper,
    /// Lower half-arch of ∂Ω_k; image is the closed ray beyond z_k.
    ArchLower,
    /// Cubic boundary curve; image is a full open ray from 0.
    Cubic,
}

/// Identity and z-plane description of one cut.
#[derive(Debug, Clone, Copy)]
pub struct Cut {
    pub kind: CutKind,
    /// Ray/arch: the Ω index k. Cubic: the index of the D region below it.
    pub index: i64,
    /// Direction of the z-image ray from the origin.
    pub direction: f64,
    /// Radial extent of the z-image: {t·e^{i·direction} : r_min < t < r_max}.
    pub r_min: f64,
    pub r_max: f64,
}

impl PartialEq for Cut {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.index == other.index
    }
}

/// One gluing entry: crossing `cut` from `sheet` lands on `neighbor`; `side`
/// states whether the cut points belong to `sheet`.
#[derive(Debug, Clone)]
pub struct AtlasEntry {
    pub sheet: BranchId,
    pub cut: Cut,
    pub side: CutSide,
    pub neighbor: BranchId,
}

/// Finite gluing table for one period, with index-shift continuation to the
/// rest of the surface.
#[derive(Debug, Clone)]
pub struct GluingAtlas {
    a: Parameter,
    entries: Vec<AtlasEntry>,
    /// Period cells covered by the base table.
    cells: i64,
    /// D regions per cell.
    m: i64,
}

fn region_pair_cut(a: &Parameter, r1: RegionId, r2: RegionId) -> Result<Option<Cut>> {
    let m = cell_geometry(a)?.m;
    let xa = x_a(a).abs();
    let cut = match (r1, r2) {
        (RegionId::Omega(k), RegionId::D(j)) | (RegionId::D(j), RegionId::Omega(k)) => {
            if j == k * m {
                Some(Cut {
                    kind: CutKind::ArchLower,
                    index: k,
                    direction: cut_direction(a, k),
                    r_min: xa,
                    r_max: f64::INFINITY,
                })
            } else if j == k * m + 1 {
                Some(Cut {
                    kind: CutKind::ArchUpper,
                    index: k,
                    direction: cut_direction(a, k),
                    r_min: xa,
                    r_max: f64::INFINITY,
                })
            } else {
                None
            }
        }
        (RegionId::D(j1), RegionId::D(j2)) => {
            let lo = j1.min(j2);
            if (j1 - j2).abs() != 1 {
                None
            } else if lo.rem_euclid(m) == 0 {
                let k = lo / m;
                Some(Cut {
                    kind: CutKind::Ray,
                    index: k,
                    direction: cut_direction(a, k),
                    r_min: 0.0,
                    r_max: xa,
                })
            } else {
                let stack = stack_info(a)?;
                let cell = lo.div_euclid(m);
                let i = lo.rem_euclid(m);
                let rot = crate::map::omega_phase(a, cell).arg();
                let dir = (stack.dirs[i as usize] + rot).rem_euclid(2.0 * PI);
                Some(Cut {
                    kind: CutKind::Cubic,
                    index: lo,
                    direction: dir,
                    r_min: 0.0,
                    r_max: f64::INFINITY,
                })
            }
        }
        _ => None,
    };
    Ok(cut)
}

/// Builds the gluing table for one period. The construction places each cut
/// on the sheet below it (closed) and leaves it open on the sheet above,
/// which is exactly the upper-boundary-down assignment of the regions.
pub fn build_atlas(a: &Parameter) -> Result<GluingAtlas> {
    let geom = cell_geometry(a)?;
    let cells = a
        .critical_count()
        .ok_or_else(|| Error::Unsupported("atlas requires a rational parameter".into()))?;
    let sheets = cells * (1 + geom.m);
    if sheets > 64 {
        return Err(Error::Unsupported(format!(
            "atlas would need {sheets} sheets per period (limit 64)"
        )));
    }
    let mut entries = Vec::new();
    let mut push_pair = |owner: RegionId, other: RegionId, cut: Cut| -> Result<()> {
        let s_owner = sheet_of_region(owner)?;
        let s_other = sheet_of_region(other)?;
        entries.push(AtlasEntry {
            sheet: s_owner,
            cut,
            side: CutSide::Closed,
            neighbor: s_other,
        });
        entries.push(AtlasEntry {
            sheet: s_other,
            cut,
            side: CutSide::Open,
            neighbor: s_owner,
        });
        Ok(())
    };
    for k in 0..cells {
        let m = geom.m;
        // lower arch of Ω_k: owned by D(km) below it
        let cut = region_pair_cut(a, RegionId::D(k * m), RegionId::Omega(k))?.unwrap();
        push_pair(RegionId::D(k * m), RegionId::Omega(k), cut)?;
        // upper arch of Ω_k: owned by Ω_k
        let cut = region_pair_cut(a, RegionId::Omega(k), RegionId::D(k * m + 1))?.unwrap();
        push_pair(RegionId::Omega(k), RegionId::D(k * m + 1), cut)?;
        // cut ray at height kπ/a: owned by D(km) below it
        let cut = region_pair_cut(a, RegionId::D(k * m), RegionId::D(k * m + 1))?.unwrap();
        push_pair(RegionId::D(k * m), RegionId::D(k * m + 1), cut)?;
        // cubic curves: each owned by the region below it
        for i in 1..m {
            let j = k * m + i;
            let cut = region_pair_cut(a, RegionId::D(j), RegionId::D(j + 1))?.unwrap();
            push_pair(RegionId::D(j), RegionId::D(j + 1), cut)?;
        }
    }
    Ok(GluingAtlas {
        a: *a,
        entries,
        cells,
        m: geom.m,
    })
}

fn shift_sheet(b: BranchId, cells: i64, m: i64) -> BranchId {
    use crate::branch::BranchFamily;
    match b.family {
        BranchFamily::Principal => BranchId::principal(b.k + cells),
        BranchFamily::Tilde => {
            let j = if b.k > 0 { b.k } else { b.k + 1 };
            let j = j + cells * m;
            BranchId::tilde(if j >= 1 { j } else { j - 1 })
        }
        _ => b,
    }
}

impl GluingAtlas {
    pub fn entries(&self) -> &[AtlasEntry] {
        &self.entries
    }

    /// Cell shift that brings a cut into the base period window.
    fn normalize_shift(&self, cut: &Cut) -> i64 {
        match cut.kind {
            CutKind::Ray | CutKind::ArchUpper | CutKind::ArchLower => {
                cut.index.div_euclid(self.cells) * self.cells
            }
            CutKind::Cubic => cut.index.div_euclid(self.cells * self.m) * self.cells,
        }
    }

    /// Finds the entry for crossing `cut` away from `sheet` onto `neighbor`,
    /// using the period shift rule for indices outside the base table.
    pub fn find(&self, sheet: BranchId, cut: &Cut, neighbor: BranchId) -> Option<&AtlasEntry> {
        let s = self.normalize_shift(cut);
        let base_index = match cut.kind {
            CutKind::Cubic => cut.index - s * self.m,
            _ => cut.index - s,
        };
        let sheet_b = shift_sheet(sheet, -s, self.m);
        let nb_b = shift_sheet(neighbor, -s, self.m);
        self.entries.iter().find(|e| {
            e.cut.kind == cut.kind
                && e.cut.index == base_index
                && e.sheet == sheet_b
                && e.neighbor == nb_b
        })
    }

    /// Sheets involved at a branch point, one period's worth: the tilde
    /// chain at 0, or the three sheets meeting at each critical preimage.
    pub fn sheets_at(&self, bp: Complex64) -> Result<Vec<BranchId>> {
        let a = &self.a;
        let mut out = Vec::new();
        if bp.norm() < 1e-12 {
            for j in 1..=self.cells * self.m {
                out.push(sheet_of_region(RegionId::D(j))?);
            }
            return Ok(out);
        }
        for k in 0..self.cells {
            let zk = x_a(a) * crate::map::omega_phase(a, k);
            if (zk - bp).norm() < 1e-9 {
                out.push(BranchId::principal(k));
                out.push(sheet_of_region(RegionId::D(k * self.m))?);
                out.push(sheet_of_region(RegionId::D(k * self.m + 1))?);
            }
        }
        if out.is_empty() {
            return Err(Error::Domain(format!("{bp} is not a branch point")));
        }
        Ok(out)
    }
}

/// One detected cut crossing.
#[derive(Debug, Clone)]
pub struct CrossingEvent {
    pub t: f64,
    pub cut: Cut,
    pub from_sheet: BranchId,
    pub to_sheet: BranchId,
}

/// Result of continuing a branch value along a path.
#[derive(Debug, Clone)]
pub struct ContinuationResult {
    /// (t, z(t), w(t)) at every integration node.
    pub samples: Vec<(f64, Complex64, Complex64)>,
    pub events: Vec<CrossingEvent>,
    pub final_sheet: BranchId,
    /// max over samples of |f(w) − z|.
    pub max_residual: f64,
}

/// Residual bound enforced along the trajectory, relative to max(1, |z|).
pub const CONTINUATION_RESID: f64 = 1e-8;

fn project(a: &Parameter, mut w: Complex64, z: Complex64) -> Result<Complex64> {
    for _ in 0..3 {
        let r = eval_f(a, w)? - z;
        if r.norm() <= 1e-12 * z.norm().max(1.0) {
            break;
        }
        let d = f_prime(a, w)?;
        if d.norm() < 1e-10 {
            return Err(Error::Singular(format!(
                "projection hit a critical preimage at w = {w}"
            )));
        }
        w -= r / d;
    }
    Ok(w)
}

/// One RK4 step of dw/dt = z′(t)/f′(w) followed by projection onto f(w) = z.
fn rk4_step(a: &Parameter, path: &PathSpec, t: f64, h: f64, w: Complex64) -> Result<Complex64> {
    let deriv = |t: f64, w: Complex64| -> Result<Complex64> {
        let d = f_prime(a, w)?;
        if d.norm() < 1e-10 {
            return Err(Error::Singular(format!(
                "trajectory hit a critical preimage at w = {w}"
            )));
        }
        Ok(path.velocity(t) / d)
    };
    let k1 = deriv(t, w)?;
    let k2 = deriv(t + 0.5 * h, w + 0.5 * h * k1)?;
    let k3 = deriv(t + 0.5 * h, w + 0.5 * h * k2)?;
    let k4 = deriv(t + h, w + h * k3)?;
    let pred = w + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    project(a, pred, path.at(t + h))
}

/// Integrates from (t0, w0) to t1, subdividing on projection failure.
fn advance(
    a: &Parameter,
    path: &PathSpec,
    t0: f64,
    w0: Complex64,
    t1: f64,
    depth: u32,
) -> Result<Complex64> {
    let w = rk4_step(a, path, t0, t1 - t0, w0)?;
    let z = path.at(t1);
    let r = (eval_f(a, w)? - z).norm();
    if r <= CONTINUATION_RESID * z.norm().max(1.0) {
        return Ok(w);
    }
    if depth >= 12 {
        return Err(Error::Residual(format!(
            "re-projection failed near t = {t1} (residual {r:.3e})"
        )));
    }
    let tm = 0.5 * (t0 + t1);
    let wm = advance(a, path, t0, w0, tm, depth + 1)?;
    advance(a, path, tm, wm, t1, depth + 1)
}

fn locate_crossing(
    a: &Parameter,
    path: &PathSpec,
    t0: f64,
    w0: Complex64,
    r0: RegionId,
    t1: f64,
    depth: u32,
    events: &mut Vec<CrossingEvent>,
) -> Result<()> {
    let w1 = advance(a, path, t0, w0, t1, 0)?;
    let r1 = region_of(a, w1)?;
    if r1 == r0 {
        return Ok(()); // transient flicker across the boundary tolerance
    }
    if let Some(cut) = region_pair_cut(a, r0, r1)? {
        // adjacent regions: bisect the crossing parameter to 1e−10
        let (mut ta, mut wa, mut tb) = (t0, w0, t1);
        while tb - ta > 1e-10 {
            let tm = 0.5 * (ta + tb);
            let wm = advance(a, path, ta, wa, tm, 0)?;
            let rm = region_of(a, wm)?;
            if rm == r0 {
                ta = tm;
                wa = wm;
            } else if rm == r1 {
                tb = tm;
            } else {
                // a third region inside the bracket: split and re-scan
                if depth >= 40 {
                    return Err(Error::Residual(format!(
                        "could not separate cut crossings near t = {ta}"
                    )));
                }
                locate_crossing(a, path, ta, wa, r0, tm, depth + 1, events)?;
                return locate_crossing(a, path, tm, wm, rm, tb, depth + 1, events);
            }
        }
        events.push(CrossingEvent {
            t: 0.5 * (ta + tb),
            cut,
            from_sheet: sheet_of_region(r0)?,
            to_sheet: sheet_of_region(r1)?,
        });
        Ok(())
    } else {
        // not adjacent: more than one crossing inside this window
        if depth >= 40 {
            return Err(Error::Residual(format!(
                "could not separate cut crossings near t = {t0}"
            )));
        }
        let tm = 0.5 * (t0 + t1);
        let wm = advance(a, path, t0, w0, tm, 0)?;
        let rm = region_of(a, wm)?;
        locate_crossing(a, path, t0, w0, r0, tm, depth + 1, events)?;
        locate_crossing(a, path, tm, wm, rm, t1, depth + 1, events)
    }
}

/// Continues the branch value w_start for z(0) along the path.
pub fn continue_path(
    a: &Parameter,
    path: &PathSpec,
    w_start: Complex64,
) -> Result<ContinuationResult> {
    path.validate(a)?;
    let z0 = path.at(0.0);
    let r = (eval_f(a, w_start)? - z0).norm();
    if r > 1e-10 * z0.norm().max(1.0) {
        return Err(Error::Domain(format!(
            "w_start does not invert z(0): residual {r:.3e}"
        )));
    }
    let n = path.samples();
    let mut samples = Vec::with_capacity(n + 1);
    let mut events = Vec::new();
    let mut w = project(a, w_start, z0)?;
    let mut region = region_of(a, w)?;
    let mut max_residual = (eval_f(a, w)? - z0).norm();
    samples.push((0.0, z0, w));
    for i in 0..n {
        let t0 = i as f64 / n as f64;
        let t1 = (i + 1) as f64 / n as f64;
        let w1 = advance(a, path, t0, w, t1, 0)?;
        let r1 = region_of(a, w1)?;
        if r1 != region {
            locate_crossing(a, path, t0, w, region, t1, 0, &mut events)?;
            region = r1;
        }
        w = w1;
        let z = path.at(t1);
        max_residual = max_residual.max((eval_f(a, w)? - z).norm());
        samples.push((t1, z, w));
    }
    let final_sheet = sheet_of_region(region)?;
    Ok(ContinuationResult {
        samples,
        events,
        final_sheet,
        max_residual,
    })
}

/// Continues around `bp` with positively oriented unit loops, returning the
/// sheet after each loop. The loop radius is half the distance to the
/// nearest other branch point.
pub fn monodromy_probe(
    a: &Parameter,
    bp: Complex64,
    start: BranchId,
    n_loops: usize,
) -> Result<Vec<BranchId>> {
    if n_loops == 0 {
        return Err(Error::Domain("monodromy_probe: n_loops must be > 0".into()));
    }
    let bps = branch_points(a);
    if !bps.iter().any(|b| (b - bp).norm() < 1e-12) {
        return Err(Error::Domain(format!("{bp} is not a branch point")));
    }
    let radius = bps
        .iter()
        .filter(|b| (*b - bp).norm() > 1e-12)
        .map(|b| (b - bp).norm())
        .fold(f64::INFINITY, f64::min)
        / 2.0;
    if !radius.is_finite() {
        return Err(Error::Domain("no loop radius separates the branch points".into()));
    }
    // pick a start angle that lands inside the start branch's open domain
    let dom = crate::branch::branch_domain(a, start, false)?;
    let mut start_angle = None;
    for cand in [
        PI / 2.0,
        -PI / 2.0,
        3.0 * PI / 4.0,
        -3.0 * PI / 4.0,
        PI / 4.0,
        -PI / 4.0,
        0.0,
        PI,
    ] {
        let z0 = bp + Complex64::from_polar(radius, cand);
        if dom.contains(z0) && bps.iter().all(|b| (z0 - b).norm() > PATH_CLEARANCE) {
            start_angle = Some(cand);
            break;
        }
    }
    let start_angle = start_angle.ok_or_else(|| {
        Error::Domain(format!(
            "no loop start point around {bp} lies in the domain of {start}"
        ))
    })?;
    let z0 = bp + Complex64::from_polar(radius, start_angle);
    let mut w = psi_branch(a, z0, start)?.w;
    let mut sheets = Vec::with_capacity(n_loops);
    for _ in 0..n_loops {
        let path = PathSpec::Circle {
            center: bp,
            radius,
            turns: 1.0,
            start_angle,
            samples: DEFAULT_SAMPLES,
        };
        let res = continue_path(a, &path, w)?;
        w = res.samples.last().unwrap().2;
        sheets.push(res.final_sheet);
    }
    Ok(sheets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branch::BranchFamily;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }
    fn half() -> Parameter {
        Parameter::rational(1, 2).unwrap()
    }
    fn third() -> Parameter {
        Parameter::rational(1, 3).unwrap()
    }
    fn quarter() -> Parameter {
        Parameter::rational(1, 4).unwrap()
    }

    #[test]
    fn constant_path_is_trivial() {
        let a = half();
        let z = c(1.0, 0.3);
        let w = psi_branch(&a, z, BranchId::principal(0)).unwrap().w;
        let path = PathSpec::Polyline {
            points: vec![z, z, z],
            samples: 64,
        };
        let res = continue_path(&a, &path, w).unwrap();
        assert!(res.events.is_empty());
        assert!((res.samples.last().unwrap().2 - w).norm() < 1e-12);
        assert_eq!(res.final_sheet, BranchId::principal(0));
    }

    #[test]
    fn null_homotopic_loop_returns() {
        let a = half();
        let z = c(1.0, 0.0);
        let w = psi_branch(&a, z, BranchId::principal(0)).unwrap().w;
        let path = PathSpec::Circle {
            center: c(1.0, 0.0),
            radius: 0.1,
            turns: 1.0,
            start_angle: 0.0,
            samples: 1024,
        };
        let res = continue_path(&a, &path, w).unwrap();
        assert!(res.events.is_empty());
        assert!((res.samples.last().unwrap().2 - w).norm() < 1e-8);
        assert_eq!(res.final_sheet, BranchId::principal(0));
    }

    #[test]
    fn loop_around_zero_climbs_tilde_sheets() {
        let a = half();
        let probes = monodromy_probe(&a, c(0.0, 0.0), BranchId::tilde(-1), 4).unwrap();
        assert_eq!(probes.len(), 4);
        for s in &probes {
            assert_ne!(*s, BranchId::tilde(-1));
            assert_eq!(s.family, BranchFamily::Tilde);
        }
        // all distinct: a finite witness of infinite cyclic monodromy
        for i in 0..probes.len() {
            for j in 0..i {
                assert_ne!(probes[i], probes[j]);
            }
        }
    }

    #[test]
    fn quarter_monodromy_stays_on_tildes() {
        let a = quarter();
        let probes = monodromy_probe(&a, c(0.0, 0.0), BranchId::tilde(1), 6).unwrap();
        for s in &probes {
            assert_eq!(s.family, BranchFamily::Tilde, "sheet {s}");
            assert_ne!(*s, BranchId::tilde(1));
        }
        // +2 per positive loop through the stack of six per period
        let expect: Vec<i64> = (1..=6).map(|i| 1 + 2 * i).collect();
        let got: Vec<i64> = probes.iter().map(|s| s.k).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn critical_point_loop_alternates() {
        let a = half();
        let xa = x_a(&a);
        let probes = monodromy_probe(&a, c(xa, 0.0), BranchId::principal(0), 2).unwrap();
        assert_eq!(probes[0].family, BranchFamily::Tilde);
        assert_eq!(probes[0].k.abs(), 1);
        assert_eq!(probes[1], BranchId::principal(0));
    }

    #[test]
    fn atlas_half() {
        let a = half();
        let atlas = build_atlas(&a).unwrap();
        // the [x_a, 0] cut: closed on tilde:-1, open on tilde:1
        let closed: Vec<_> = atlas
            .entries()
            .iter()
            .filter(|e| e.cut.kind == CutKind::Ray && e.cut.index == 0)
            .collect();
        assert_eq!(closed.len(), 2);
        for e in &closed {
            match e.side {
                CutSide::Closed => {
                    assert_eq!(e.sheet, BranchId::tilde(-1));
                    assert_eq!(e.neighbor, BranchId::tilde(1));
                }
                CutSide::Open => {
                    assert_eq!(e.sheet, BranchId::tilde(1));
                    assert_eq!(e.neighbor, BranchId::tilde(-1));
                }
            }
        }
        // every cut appears exactly twice, once closed and once open
        use std::collections::HashMap;
        let mut seen: HashMap<(CutKind, i64), (usize, usize)> = HashMap::new();
        for e in atlas.entries() {
            let slot = seen.entry((e.cut.kind, e.cut.index)).or_insert((0, 0));
            match e.side {
                CutSide::Closed => slot.0 += 1,
                CutSide::Open => slot.1 += 1,
            }
        }
        for (cut, (c_closed, c_open)) in seen {
            assert_eq!((c_closed, c_open), (1, 1), "cut {cut:?}");
        }
        // branch point 0 links only tilde sheets; ±x_a link principal sheets
        // of matching parity with their adjacent tildes
        let at0 = atlas.sheets_at(c(0.0, 0.0)).unwrap();
        assert!(at0.iter().all(|s| s.family == BranchFamily::Tilde));
        let xa = x_a(&a);
        let at_neg = atlas.sheets_at(c(xa, 0.0)).unwrap();
        assert!(at_neg.contains(&BranchId::principal(0)));
        assert!(at_neg.contains(&BranchId::tilde(1)));
        assert!(at_neg.contains(&BranchId::tilde(-1)));
        let at_pos = atlas.sheets_at(c(-xa, 0.0)).unwrap();
        assert!(at_pos.contains(&BranchId::principal(1)));
        assert!(at_pos.contains(&BranchId::tilde(1)));
        assert!(at_pos.contains(&BranchId::tilde(2)));
    }

    #[test]
    fn atlas_quarter() {
        let a = quarter();
        let atlas = build_atlas(&a).unwrap();
        let xa = x_a(&a);
        // 0 links the six tilde sheets of one period
        let at0 = atlas.sheets_at(c(0.0, 0.0)).unwrap();
        let ks: Vec<i64> = at0.iter().map(|s| s.k).collect();
        assert_eq!(ks, vec![1, 2, 3, 4, 5, 6]);
        // x_a links principal:0 with tilde(±1); −x_a links principal:1 with
        // tilde(3) and tilde(4)
        let at_neg = atlas.sheets_at(c(xa, 0.0)).unwrap();
        assert!(at_neg.contains(&BranchId::principal(0)));
        assert!(at_neg.contains(&BranchId::tilde(-1)));
        assert!(at_neg.contains(&BranchId::tilde(1)));
        let at_pos = atlas.sheets_at(c(-xa, 0.0)).unwrap();
        assert!(at_pos.contains(&BranchId::principal(1)));
        assert!(at_pos.contains(&BranchId::tilde(3)));
        assert!(at_pos.contains(&BranchId::tilde(4)));
    }

    #[test]
    fn atlas_third() {
        let a = third();
        let atlas = build_atlas(&a).unwrap();
        // one Ω and one D sheet per period, branch points {−1/8, 0}
        let families: std::collections::HashSet<_> = atlas
            .entries()
            .iter()
            .map(|e| (e.sheet.family, e.sheet.k))
            .collect();
        assert!(families.contains(&(BranchFamily::Principal, 0)));
        assert!(families.contains(&(BranchFamily::Tilde, 1)));
        let at_c = atlas.sheets_at(c(-0.125, 0.0)).unwrap();
        assert!(at_c.contains(&BranchId::principal(0)));
    }

    #[test]
    fn events_follow_ccc_rule() {
        // counterclockwise loops around 0 always exit through a closed cut
        for a in [half(), quarter()] {
            let atlas = build_atlas(&a).unwrap();
            let start = BranchId::tilde(1);
            let dom = crate::branch::branch_domain(&a, start, false).unwrap();
            let r = x_a(&a).abs() / 2.0;
            let theta = -PI / 2.0;
            let z0 = Complex64::from_polar(r, theta);
            assert!(dom.contains(z0));
            let w = psi_branch(&a, z0, start).unwrap().w;
            let path = PathSpec::Circle {
                center: c(0.0, 0.0),
                radius: r,
                turns: 2.0,
                start_angle: theta,
                samples: 2 * DEFAULT_SAMPLES,
            };
            let res = continue_path(&a, &path, w).unwrap();
            assert!(!res.events.is_empty());
            for ev in &res.events {
                let entry = atlas
                    .find(ev.from_sheet, &ev.cut, ev.to_sheet)
                    .unwrap_or_else(|| panic!("missing atlas entry for {ev:?}"));
                assert_eq!(entry.side, CutSide::Closed, "a = {} event {ev:?}", a.display());
            }
        }
    }

    #[test]
    fn degenerate_paths_rejected() {
        let a = half();
        let p = PathSpec::Polyline {
            points: vec![c(1.0, 0.0)],
            samples: 16,
        };
        assert!(matches!(p.validate(&a), Err(Error::InvalidPath(_))));
        let p = PathSpec::Polyline {
            points: vec![c(1.0, 0.0), c(1.0, 0.0)],
            samples: 16,
        };
        assert!(matches!(p.validate(&a), Err(Error::InvalidPath(_))));
        // path through a branch point
        let p = PathSpec::Polyline {
            points: vec![c(-1.0, 0.0), c(1.0, 0.0)],
            samples: 16,
        };
        assert!(matches!(p.validate(&a), Err(Error::InvalidPath(_))));
        // bad start value
        let p = PathSpec::Circle {
            center: c(1.0, 0.0),
            radius: 0.1,
            turns: 1.0,
            start_angle: 0.0,
            samples: 64,
        };
        assert!(matches!(
            continue_path(&a, &p, c(5.0, 5.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn residual_stays_small() {
        let a = quarter();
        let z0 = c(0.0, -0.05);
        let w = psi_branch(&a, z0, BranchId::tilde(1)).unwrap().w;
        let path = PathSpec::Circle {
            center: c(0.0, 0.0),
            radius: 0.05,
            turns: 3.0,
            start_angle: -PI / 2.0,
            samples: 3 * DEFAULT_SAMPLES,
        };
        let res = continue_path(&a, &path, w).unwrap();
        assert!(res.max_residual <= CONTINUATION_RESID, "{}", res.max_residual);
    }
}
