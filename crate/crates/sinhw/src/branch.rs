//! Evaluation of the real and complex branches of the inverse of
//! f(w) = sinh(aw)·exp(w).
//!
//! Complex branches are evaluated by path-following in the z-plane (a
//! radial/arc route from a per-branch seed that never leaves the branch
//! domain and never crosses the critical ring at an unsafe angle), followed
//! by damped Newton polishing, with Halley steps near branch points where
//! f′ degenerates. Every value is verified against its round-trip residual
//! and its codomain region.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{cell_geometry, region_of, stack_info, RegionId, BOUNDARY_TOL};

use crate::map::{
    branch_points, cut_direction, eval_f, f_prime, f_second, omega_phase, x_a, xi_a,
};
use crate::param::{Category, Parameter};

const TWO_PI: f64 = 2.0 * PI;

/// Residual target for accepted branch values.
const RESID_FINAL: f64 = 1e-13;
/// Residual allowed per tracking substep before subdividing.
const RESID_STEP: f64 = 1e-9;
/// Distance to a branch point below which Halley steps replace Newton.
const HALLEY_RADIUS: f64 = 1e-4;
/// Distance to a branch point below which a value carries a warning flag.
pub const NEAR_BRANCH_POINT: f64 = 1e-8;

/// Branch family of the inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchFamily {
    /// ψ_k, defined on the plane slit along the ray through z_k.
    Principal,
    /// ψ̃_k, defined on the sector between consecutive cut rays.
    Tilde,
    /// ψ̂_k⁺, defined on the upper half-plane against the line through 0 and z_k.
    HatPlus,
    /// ψ̂_k⁻, the lower-half-plane counterpart.
    HatMinus,
}

/// One branch: family plus integer index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BranchId {
    pub family: BranchFamily,
    pub k: i64,
}

impl BranchId {
    pub fn principal(k: i64) -> Self {
        BranchId {
            family: BranchFamily::Principal,
            k,
        }
    }
    pub fn tilde(k: i64) -> Self {
        BranchId {
            family: BranchFamily::Tilde,
            k,
        }
    }
    pub fn hat_plus(k: i64) -> Self {
        BranchId {
            family: BranchFamily::HatPlus,
            k,
        }
    }
    pub fn hat_minus(k: i64) -> Self {
        BranchId {
            family: BranchFamily::HatMinus,
            k,
        }
    }

    /// Parses `family:k` with family one of `principal`, `tilde`, `hat+`, `hat-`.
    pub fn parse(s: &str) -> Result<Self> {
        let (fam, ks) = s
            .split_once(':')
            .ok_or_else(|| Error::Domain(format!("bad branch '{s}', expected family:k")))?;
        let k: i64 = ks
            .trim()
            .parse()
            .map_err(|_| Error::Domain(format!("bad branch index in '{s}'")))?;
        let family = match fam.trim().to_ascii_lowercase().as_str() {
            "principal" => BranchFamily::Principal,
            "tilde" => BranchFamily::Tilde,
            "hat+" | "hatplus" => BranchFamily::HatPlus,
            "hat-" | "hatminus" => BranchFamily::HatMinus,
            other => return Err(Error::Domain(format!("unknown branch family '{other}'"))),
        };
        Ok(BranchId { family, k })
    }
}

impl fmt::Display for BranchId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            BranchFamily::Principal => "principal",
            BranchFamily::Tilde => "tilde",
            BranchFamily::HatPlus => "hat+",
            BranchFamily::HatMinus => "hat-",
        };
        write!(f, "{fam}:{}", self.k)
    }
}

/// A computed branch value with its verification data.
#[derive(Debug, Clone, Copy)]
pub struct BranchValue {
    pub w: Complex64,
    /// |f(w) − z|.
    pub residual: f64,
    /// z was within `NEAR_BRANCH_POINT` of a branch point.
    pub near_branch_point: bool,
}

/// Shape of a branch domain in the z-plane.
#[derive(Debug, Clone, Copy)]
pub enum DomainShape {
    /// ℂ minus the closed ray {t·e^{i·dir}: t ≥ start}.
    SlitPlane { cut_direction: f64, cut_start: f64 },
    /// Open sector swept counterclockwise from `from` over `width` ≤ 2π.
    /// Width 2π means the plane slit along the single ray at `from`.
    Sector { from: f64, width: f64 },
}

/// A branch domain with its boundary extension.
#[derive(Debug, Clone, Copy)]
pub struct BranchDomain {
    pub branch: BranchId,
    pub shape: DomainShape,
    /// Direction of the open boundary ray added to the domain when extended
    /// (None for principal branches, whose extension is the whole plane).
    pub extension_direction: Option<f64>,
    pub extended: bool,
}

fn angle_delta(theta: f64, from: f64) -> f64 {
    (theta - from).rem_euclid(TWO_PI)
}

impl BranchDomain {
    /// Membership test (origin excluded for sector domains: 0 is a branch
    /// point of every non-principal branch).
    pub fn contains(&self, z: Complex64) -> bool {
        if !z.re.is_finite() || !z.im.is_finite() {
            return false;
        }
        match self.shape {
            DomainShape::SlitPlane {
                cut_direction,
                cut_start,
            } => {
                if self.extended {
                    return true;
                }
                if z.norm() < cut_start - 1e-12 {
                    return true;
                }
                let d = angle_delta(z.arg(), cut_direction);
                d > 1e-12 && d < TWO_PI - 1e-12
            }
            DomainShape::Sector { from, width } => {
                if z.norm() == 0.0 {
                    return false;
                }
                let d = angle_delta(z.arg(), from);
                if d > 1e-12 && d < width - 1e-12 {
                    return true;
                }
                if self.extended {
                    if let Some(ext) = self.extension_direction {
                        let de = angle_delta(z.arg(), ext);
                        return de <= 1e-12 || de >= TWO_PI - 1e-12;
                    }
                }
                false
            }
        }
    }
}

/// Phase e^{i·s(a+1)π/a} of one cell translation, exact for rational a.
fn cell_phase(a: &Parameter, s: i64) -> Complex64 {
    if s == 0 {
        return Complex64::new(1.0, 0.0);
    }
    omega_phase(a, s)
}

/// Internal description of a base branch (after index reduction).
struct BaseBranch {
    /// Sector of the z-domain; principal uses width 2π from the cut direction.
    from: f64,
    width: f64,
    /// Radius below which the slit does not block (principal: |x_a|, else 0).
    cut_start: f64,
    w_seed: Complex64,
    z_seed: Complex64,
}

fn sector_width(from: f64, to: f64) -> f64 {
    let w = (to - from).rem_euclid(TWO_PI);
    if w == 0.0 {
        TWO_PI
    } else {
        w
    }
}

fn tilde_base(a: &Parameter, b: i64) -> Result<BaseBranch> {
    let stack = stack_info(a)?;
    debug_assert!(b >= 1 && b <= stack.m);
    let from = stack.dirs[(b - 1) as usize];
    let width = sector_width(from, stack.dirs[b as usize]);
    let eta_c = stack.eta_mid[(b - 1) as usize];
    // the whole horizontal line at a corridor height lies in the region, so
    // scan a few ξ offsets until the seed image is comfortably interior
    for ofs in [0.0, -1.0, 1.0, -2.0, 2.0] {
        let w_seed = Complex64::new(ofs, eta_c);
        let z_seed = eval_f(a, w_seed)?;
        let d = angle_delta(z_seed.arg(), from);
        if d > 0.05 && d < width - 0.05 {
            return Ok(BaseBranch {
                from,
                width,
                cut_start: 0.0,
                w_seed,
                z_seed,
            });
        }
    }
    Err(Error::Convergence(format!(
        "could not seed tilde base region {b} for a = {}",
        a.display()
    )))
}

fn principal_base(a: &Parameter) -> Result<BaseBranch> {
    let w_seed = Complex64::new(1.0, 0.0);
    let z_seed = eval_f(a, w_seed)?;
    Ok(BaseBranch {
        from: PI,
        width: TWO_PI,
        cut_start: x_a(a).abs(),
        w_seed,
        z_seed,
    })
}

/// Reduction of a branch to a base branch plus a cell shift:
/// ψ_b(z) = ψ_base(z·e^{−i·s(a+1)π/a}) + isπ/a.
struct Reduced {
    base: BaseBranch,
    shift: i64,
    target: RegionId,
    /// When true, the codomain region is checkable for this parameter.
    region_supported: bool,
}

fn tilde_region_index(k: i64) -> Result<i64> {
    if k == 0 {
        return Err(Error::Domain("tilde index 0 does not exist".into()));
    }
    Ok(if k > 0 { k } else { k + 1 })
}

/// Codomain region of a branch: Ω_k for principal, D_j otherwise.
pub fn branch_codomain(a: &Parameter, b: BranchId) -> Result<RegionId> {
    match b.family {
        BranchFamily::Principal => Ok(RegionId::Omega(b.k)),
        BranchFamily::Tilde => Ok(RegionId::D(tilde_region_index(b.k)?)),
        BranchFamily::HatPlus | BranchFamily::HatMinus => {
            if a.category() != Category::RationalGeneric {
                return Err(Error::Unsupported(
                    "hat branches exist only for rational a with (1+a)/(1−a) ∉ ℕ".into(),
                ));
            }
            Ok(RegionId::D(b.k))
        }
    }
}

/// Branch owning a region (inverse of `branch_codomain` over the principal
/// and tilde families).
pub fn sheet_of_region(region: RegionId) -> Result<BranchId> {
    match region {
        RegionId::Omega(k) => Ok(BranchId::principal(k)),
        RegionId::D(j) => Ok(BranchId::tilde(if j >= 1 { j } else { j - 1 })),
        RegionId::Boundary => Err(Error::Domain("no sheet for a boundary point".into())),
    }
}

fn check_category(a: &Parameter, b: BranchId) -> Result<()> {
    match a.category() {
        Category::Irrational => {
            if b.family == BranchFamily::Principal && b.k == 0 {
                Ok(())
            } else {
                Err(Error::Unsupported(format!(
                    "branch {b} is not available for irrational a = {}; only principal:0 is",
                    a.value()
                )))
            }
        }
        Category::IntegerRatio => match b.family {
            BranchFamily::HatPlus | BranchFamily::HatMinus => Err(Error::Unsupported(
                "hat branches exist only for rational a with (1+a)/(1−a) ∉ ℕ".into(),
            )),
            _ => Ok(()),
        },
        Category::RationalGeneric => {
            let (p, _) = a.exact().unwrap();
            if p != 1 && b.family != BranchFamily::Principal {
                return Err(Error::Unsupported(format!(
                    "non-principal branches are not classified for a = {}",
                    a.display()
                )));
            }
            Ok(())
        }
    }
}

/// Resolves a hat branch to the tilde branch with the same codomain, when
/// the requested half-plane is that branch's domain.
fn resolve_hat(a: &Parameter, b: BranchId) -> Result<BranchId> {
    let plus = b.family == BranchFamily::HatPlus;
    // undirected line through 0 and z_k, normalized to [0, π)
    let line = cut_direction(a, b.k).rem_euclid(PI);
    let want_from = if plus { line } else { (line + PI).rem_euclid(TWO_PI) };
    // the tilde branch with region D(k)
    let tilde_k = if b.k >= 1 { b.k } else { b.k - 1 };
    let j = tilde_region_index(tilde_k)?;
    let geom = cell_geometry(a)?;
    let s = (j - 1).div_euclid(geom.m);
    let bidx = j - geom.m * s;
    let base = tilde_base(a, bidx)?;
    if (base.width - PI).abs() > 1e-9 {
        return Err(Error::Domain(format!(
            "hat branch {b} does not exist for a = {}: its region is not the \
             image of a half-plane",
            a.display()
        )));
    }
    let rot = cell_phase(a, s).arg().rem_euclid(TWO_PI);
    let from = (base.from + rot).rem_euclid(TWO_PI);
    let mismatch = angle_delta(from, want_from).min(angle_delta(want_from, from));
    if mismatch < 1e-9 {
        Ok(BranchId::tilde(tilde_k))
    } else {
        Err(Error::Domain(format!(
            "hat branch {b} does not exist for a = {}: no conformal branch onto \
             that region from the requested half-plane",
            a.display()
        )))
    }
}

fn reduce(a: &Parameter, b: BranchId) -> Result<Reduced> {
    check_category(a, b)?;
    match b.family {
        BranchFamily::Principal => {
            let region_supported = true;
            Ok(Reduced {
                base: principal_base(a)?,
                shift: b.k,
                target: RegionId::Omega(b.k),
                region_supported,
            })
        }
        BranchFamily::Tilde => {
            let j = tilde_region_index(b.k)?;
            let geom = cell_geometry(a)?;
            let s = (j - 1).div_euclid(geom.m);
            let bidx = j - geom.m * s;
            Ok(Reduced {
                base: tilde_base(a, bidx)?,
                shift: s,
                target: RegionId::D(j),
                region_supported: true,
            })
        }
        BranchFamily::HatPlus | BranchFamily::HatMinus => {
            let t = resolve_hat(a, b)?;
            let mut red = reduce(a, t)?;
            red.target = branch_codomain(a, b)?;
            Ok(red)
        }
    }
}

/// Public description of a branch domain.
pub fn branch_domain(a: &Parameter, b: BranchId, extended: bool) -> Result<BranchDomain> {
    check_category(a, b)?;
    match b.family {
        BranchFamily::Principal => Ok(BranchDomain {
            branch: b,
            shape: DomainShape::SlitPlane {
                cut_direction: cut_direction(a, b.k),
                cut_start: x_a(a).abs(),
            },
            extension_direction: None,
            extended,
        }),
        BranchFamily::Tilde => {
            let red = reduce(a, b)?;
            let rot = cell_phase(a, red.shift).arg().rem_euclid(TWO_PI);
            let from = (red.base.from + rot).rem_euclid(TWO_PI);
            let ext = (from + red.base.width).rem_euclid(TWO_PI);
            Ok(BranchDomain {
                branch: b,
                shape: DomainShape::Sector {
                    from,
                    width: red.base.width,
                },
                extension_direction: Some(ext),
                extended,
            })
        }
        BranchFamily::HatPlus | BranchFamily::HatMinus => {
            let t = resolve_hat(a, b)?;
            let mut d = branch_domain(a, t, extended)?;
            d.branch = b;
            Ok(d)
        }
    }
}

// ---------------------------------------------------------------------------
// path tracking + polishing
// ---------------------------------------------------------------------------

fn step_adaptive(
    a: &Parameter,
    w: Complex64,
    z0: Complex64,
    z1: Complex64,
    depth: u32,
) -> Result<Complex64> {
    let d = f_prime(a, w)?;
    if d.norm() < 1e-13 {
        return Err(Error::Singular(format!(
            "tracking hit a critical preimage at w = {w}"
        )));
    }
    let mut wn = w + (z1 - z0) / d;
    for _ in 0..2 {
        let r = eval_f(a, wn)? - z1;
        if r.norm() <= 1e-12 * z1.norm().max(1.0) {
            break;
        }
        let dn = f_prime(a, wn)?;
        if dn.norm() < 1e-13 {
            break;
        }
        wn -= r / dn;
    }
    if (eval_f(a, wn)? - z1).norm() <= RESID_STEP * z1.norm().max(1.0) {
        return Ok(wn);
    }
    if depth >= 16 {
        return Err(Error::Convergence(format!(
            "tracking failed to hold the residual between {z0} and {z1}"
        )));
    }
    let zm = 0.5 * (z0 + z1);
    let wm = step_adaptive(a, w, z0, zm, depth + 1)?;
    step_adaptive(a, wm, zm, z1, depth + 1)
}

fn track(a: &Parameter, mut w: Complex64, zs: &[Complex64]) -> Result<Complex64> {
    for i in 1..zs.len() {
        w = step_adaptive(a, w, zs[i - 1], zs[i], 0)?;
    }
    Ok(w)
}

/// Accepts w within the closure of the target region (boundary tolerance in
/// both coordinates).
fn in_region_closure(a: &Parameter, w: Complex64, target: RegionId) -> bool {
    if region_of(a, w).map(|r| r == target).unwrap_or(false) {
        return true;
    }
    let eps = 3.0 * BOUNDARY_TOL;
    for nudge in [
        Complex64::new(eps, 0.0),
        Complex64::new(-eps, 0.0),
        Complex64::new(0.0, eps),
        Complex64::new(0.0, -eps),
    ] {
        if region_of(a, w + nudge).map(|r| r == target).unwrap_or(false) {
            return true;
        }
    }
    false
}

fn polish(
    a: &Parameter,
    mut w: Complex64,
    z: Complex64,
    near_bp: bool,
    region: Option<RegionId>,
) -> Result<Complex64> {
    let tol = RESID_FINAL * z.norm().max(1.0);
    for _ in 0..200 {
        let r = eval_f(a, w)? - z;
        if r.norm() <= tol {
            return Ok(w);
        }
        let d = f_prime(a, w)?;
        if d.norm() < 1e-14 {
            return Err(Error::Singular(format!(
                "derivative vanished while polishing at w = {w}"
            )));
        }
        let mut step = r / d;
        if near_bp {
            // Halley step absorbs the square-root degeneracy near a branch point
            let dd = f_second(a, w)?;
            let denom = Complex64::new(1.0, 0.0) - r * dd / (2.0 * d * d);
            if denom.norm() > 0.1 {
                step /= denom;
            }
        }
        let r0 = r.norm();
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..=20 {
            let cand = w - lambda * step;
            if let Ok(fc) = eval_f(a, cand) {
                if (fc - z).norm() < r0 {
                    // keep iterates inside the codomain: halve on exit
                    if let Some(target) = region {
                        if !in_region_closure(a, cand, target) {
                            lambda *= 0.5;
                            continue;
                        }
                    }
                    w = cand;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(Error::Convergence(format!(
                "damped iteration stalled at w = {w} with residual {r0:.3e}"
            )));
        }
    }
    let r = (eval_f(a, w)? - z).norm();
    if r <= tol {
        Ok(w)
    } else {
        Err(Error::Convergence(format!(
            "iteration budget exhausted with residual {r:.3e}"
        )))
    }
}

/// Safe mid-route angle offset within (0, width): midpoint of the widest gap
/// between branch-point directions (so the radial leg crosses the critical
/// ring away from every branch point).
fn safe_mid_delta(a: &Parameter, from: f64, width: f64) -> f64 {
    let mut marks = vec![0.0, width];
    for bp in branch_points(a) {
        if bp.norm() < 1e-15 {
            continue;
        }
        let d = angle_delta(bp.arg(), from);
        if d > 1e-9 && d < width - 1e-9 {
            marks.push(d);
        }
    }
    marks.sort_by(|u, v| u.partial_cmp(v).unwrap());
    let mut best = (0.0, 0.5 * width);
    for pair in marks.windows(2) {
        let gap = pair[1] - pair[0];
        if gap > best.0 {
            best = (gap, 0.5 * (pair[0] + pair[1]));
        }
    }
    best.1
}

fn arc_points(r: f64, from: f64, d0: f64, d1: f64) -> Vec<Complex64> {
    let n = ((d1 - d0).abs() * 40.0 / PI).ceil().max(8.0) as usize;
    (0..=n)
        .map(|i| {
            let d = d0 + (d1 - d0) * i as f64 / n as f64;
            Complex64::from_polar(r, from + d)
        })
        .collect()
}

fn radial_points(r0: f64, r1: f64, theta: f64) -> Vec<Complex64> {
    let l0 = r0.ln();
    let l1 = r1.ln();
    let n = ((l1 - l0).abs() * 24.0).ceil().max(8.0) as usize;
    (0..=n)
        .map(|i| {
            let l = l0 + (l1 - l0) * i as f64 / n as f64;
            Complex64::from_polar(l.exp(), theta)
        })
        .collect()
}

/// Evaluates a branch; `extended` admits z on the boundary rays per the
/// branch extensions.
pub fn psi_branch_ext(
    a: &Parameter,
    z: Complex64,
    b: BranchId,
    extended: bool,
) -> Result<BranchValue> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("psi_branch: non-finite z = {z}")));
    }
    let red = reduce(a, b)?;
    let bps = branch_points(a);
    let near_bp = bps.iter().any(|bp| (z - bp).norm() < NEAR_BRANCH_POINT);
    let use_halley = bps.iter().any(|bp| (z - bp).norm() < HALLEY_RADIUS);

    // z = 0 is in the principal domains only, with the closed-form preimage
    if z.norm() == 0.0 {
        return match b.family {
            BranchFamily::Principal => Ok(BranchValue {
                w: Complex64::new(0.0, b.k as f64 * a.spacing()),
                residual: 0.0,
                near_branch_point: true,
            }),
            _ => Err(Error::Domain(
                "z = 0 is a branch point of every non-principal branch".into(),
            )),
        };
    }

    // rotate into the base branch
    let phase = cell_phase(a, red.shift);
    let z0 = z * phase.conj();

    // domain check in base coordinates
    let theta = z0.arg();
    let delta = angle_delta(theta, red.base.from);
    let on_low = delta <= 1e-12 || delta >= TWO_PI - 1e-12;
    let on_high = (delta - red.base.width).abs() <= 1e-12;
    let slit_open = red.base.cut_start > 0.0 && z0.norm() < red.base.cut_start - 1e-12;
    let inside = if red.base.width == TWO_PI {
        (!on_low || slit_open) && delta < TWO_PI
    } else {
        !on_low && !on_high && delta < red.base.width
    };
    let target_delta = if inside {
        if on_low && slit_open {
            // on the cut direction but inside the critical radius
            TWO_PI
        } else {
            delta
        }
    } else if extended && (on_high || (red.base.width == TWO_PI && on_low && !slit_open)) {
        red.base.width
    } else {
        return Err(Error::Domain(format!(
            "z = {z} is outside the domain of branch {b} for a = {}",
            a.display()
        )));
    };

    // exact critical endpoint of an extension ray: closed-form preimage
    if extended {
        if let Some(cp) = bps
            .iter()
            .find(|bp| bp.norm() > 1e-15 && (z - *bp).norm() < 1e-12)
        {
            if (target_delta - red.base.width).abs() < 1e-9 {
                let k = ((cp.arg() - PI) / (cut_direction(a, 1) - PI)).round() as i64;
                let w = Complex64::new(xi_a(a), k as f64 * a.spacing());
                if (eval_f(a, w)? - z).norm() <= 1e-10 * z.norm().max(1.0) {
                    return Ok(BranchValue {
                        w,
                        residual: (eval_f(a, w)? - z).norm(),
                        near_branch_point: true,
                    });
                }
            }
        }
    }

    // route: arc at the seed radius to a safe angle, radial leg, arc to the
    // target angle at the target radius
    let r_seed = red.base.z_seed.norm();
    let r_t = z0.norm();
    let d_seed = angle_delta(red.base.z_seed.arg(), red.base.from);
    let d_mid = safe_mid_delta(a, red.base.from, red.base.width);
    let mut w = red.base.w_seed;
    w = track(a, w, &arc_points(r_seed, red.base.from, d_seed, d_mid))?;
    w = track(a, w, &radial_points(r_seed, r_t, red.base.from + d_mid))?;
    w = track(a, w, &arc_points(r_t, red.base.from, d_mid, target_delta))?;

    // polish on the exact target
    let z_exact = Complex64::from_polar(r_t, red.base.from + target_delta);
    let region = if red.region_supported {
        // base region = target shifted back
        Some(shift_region(red.target, -red.shift, a)?)
    } else {
        None
    };
    w = polish(a, w, z_exact, use_halley, region)?;
    // polish once more against the caller's exact z after unshifting
    let w_full = w + Complex64::new(0.0, red.shift as f64 * a.spacing());
    let w_full = polish(a, w_full, z, use_halley, Some(red.target))?;

    let residual = (eval_f(a, w_full)? - z).norm();
    if red.region_supported && !in_region_closure(a, w_full, red.target) {
        return Err(Error::Convergence(format!(
            "branch {b} converged outside its codomain at w = {w_full}"
        )));
    }
    Ok(BranchValue {
        w: w_full,
        residual,
        near_branch_point: near_bp,
    })
}

fn shift_region(r: RegionId, s: i64, a: &Parameter) -> Result<RegionId> {
    Ok(match r {
        RegionId::Omega(k) => RegionId::Omega(k + s),
        RegionId::D(j) => RegionId::D(j + s * cell_geometry(a)?.m),
        RegionId::Boundary => RegionId::Boundary,
    })
}

/// Evaluates a branch on its unextended (conformal-bijection) domain.
pub fn psi_branch(a: &Parameter, z: Complex64, b: BranchId) -> Result<BranchValue> {
    psi_branch_ext(a, z, b, false)
}

/// Derivative of a branch at z: ψ′(z) = 1/f′(ψ_b(z)).
pub fn psi_prime_on_branch(a: &Parameter, z: Complex64, b: BranchId) -> Result<Complex64> {
    let v = psi_branch(a, z, b)?;
    crate::map::psi_prime(a, z, v.w)
}

// ---------------------------------------------------------------------------
// real branches
// ---------------------------------------------------------------------------

/// f restricted to the real line, in a form that never overflows for ξ ≤ 0.
fn real_f(a: &Parameter, xi: f64) -> f64 {
    let av = a.value();
    0.5 * (((1.0 + av) * xi).exp() - ((1.0 - av) * xi).exp())
}

fn real_f_prime(a: &Parameter, xi: f64) -> f64 {
    let av = a.value();
    0.5 * ((1.0 + av) * ((1.0 + av) * xi).exp() - (1.0 - av) * ((1.0 - av) * xi).exp())
}

fn bisect_real(
    a: &Parameter,
    x: f64,
    mut lo: f64,
    mut hi: f64,
    increasing: bool,
) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let v = real_f(a, mid);
        let below = if increasing { v < x } else { v > x };
        if below {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut w = 0.5 * (lo + hi);
    // Newton polish, guarded against leaving the bracket
    for _ in 0..3 {
        let d = real_f_prime(a, w);
        if d.abs() < 1e-300 {
            break;
        }
        let wn = w - (real_f(a, w) - x) / d;
        if wn.is_finite() && wn >= lo.min(hi) && wn <= lo.max(hi) {
            w = wn;
        }
    }
    w
}

/// Increasing real branch ψ₀: [x_a, ∞) → [ξ_a, ∞).
pub fn psi0_real(a: &Parameter, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain("psi0_real: non-finite x".into()));
    }
    let xa = x_a(a);
    let xia = xi_a(a);
    if x < xa {
        return Err(Error::Domain(format!(
            "psi0_real: x = {x} below the branch value x_a = {xa}"
        )));
    }
    if x == xa {
        return Ok(xia);
    }
    let av = a.value();
    let mut hi = if x <= 0.0 {
        0.0
    } else {
        (2.0 * x + 2.0).ln() / (1.0 + av) + 1.0
    };
    while real_f(a, hi) < x {
        hi += 1.0;
    }
    Ok(bisect_real(a, x, xia, hi, true))
}

/// Decreasing real branch ψ₋₁: [x_a, 0) → (−∞, ξ_a].
pub fn psi_minus1_real(a: &Parameter, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain("psi_minus1_real: non-finite x".into()));
    }
    let xa = x_a(a);
    let xia = xi_a(a);
    if x < xa || x >= 0.0 {
        return Err(Error::Domain(format!(
            "psi_minus1_real: x = {x} outside [x_a, 0) = [{xa}, 0)"
        )));
    }
    if x == xa {
        return Ok(xia);
    }
    let av = a.value();
    // asymptotic seed f(ξ) ≈ −½e^{(1−a)ξ} for very negative ξ
    let mut lo = ((-2.0 * x).ln() / (1.0 - av)).min(xia - 1.0);
    while real_f(a, lo) <= x {
        lo -= 1.0;
    }
    Ok(bisect_real(a, x, lo, xia, false))
}

/// Transition between the real branches: ω(ξ) = ψ₋₁(f(ξ)) for ξ ∈ [ξ_a, 0).
pub fn omega_transition(a: &Parameter, xi: f64) -> Result<f64> {
    let xia = xi_a(a);
    if !(xi >= xia && xi < 0.0) {
        return Err(Error::Domain(format!(
            "omega_transition: xi = {xi} outside [ξ_a, 0) = [{xia}, 0)"
        )));
    }
    if xi == xia {
        return Ok(xia);
    }
    let x = real_f(a, xi);
    if !(x >= x_a(a) && x < 0.0) {
        return Err(Error::Domain(format!(
            "omega_transition: f(xi) = {x} outside [x_a, 0)"
        )));
    }
    psi_minus1_real(a, x)
}

// ---------------------------------------------------------------------------
// closed forms and limit formulas
// ---------------------------------------------------------------------------

/// Which explicit a = 1/3 branch formula to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OneThirdBranch {
    /// (3/2) log(1/2 + √(2z + 1/4)); domain ℂ ∖ (−∞, −1/8).
    Plain,
    /// (3/2) log(1/2 − √(2z + 1/4)); domain ℂ ∖ (−∞, 0].
    Tilde,
}

/// Explicit branch formulas for a = 1/3.
pub fn psi_one_third(z: Complex64, which: OneThirdBranch) -> Result<Complex64> {
    match which {
        OneThirdBranch::Plain => {
            if z.im == 0.0 && z.re < -0.125 {
                return Err(Error::Domain(format!(
                    "psi_one_third(plain): z = {z} on the cut (−∞, −1/8)"
                )));
            }
            let s = (2.0 * z + Complex64::new(0.25, 0.0)).sqrt();
            Ok(1.5 * (Complex64::new(0.5, 0.0) + s).ln())
        }
        OneThirdBranch::Tilde => {
            if z.im == 0.0 && z.re <= 0.0 {
                return Err(Error::Domain(format!(
                    "psi_one_third(tilde): z = {z} on the cut (−∞, 0]"
                )));
            }
            let s = (2.0 * z + Complex64::new(0.25, 0.0)).sqrt();
            Ok(1.5 * (Complex64::new(0.5, 0.0) - s).ln())
        }
    }
}

/// Real Lambert W on branches 0 and −1, by Halley iteration on w·e^w = x.
pub fn lambert_w(branch: i32, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain("lambert_w: non-finite argument".into()));
    }
    let me = -(-1.0f64).exp(); // −1/e
    let mut w = match branch {
        0 => {
            if x < me {
                return Err(Error::Domain(format!(
                    "lambert_w: branch 0 needs x ≥ −1/e, got {x}"
                )));
            }
            if x == 0.0 {
                return Ok(0.0);
            }
            if (x - me).abs() < 1e-16 {
                return Ok(-1.0);
            }
            if x < -0.2 {
                let p = (2.0 * (std::f64::consts::E * x + 1.0)).max(0.0).sqrt();
                -1.0 + p - p * p / 3.0
            } else if x < 2.0 {
                x / (1.0 + x)
            } else {
                let l1 = x.ln();
                let l2 = l1.ln();
                l1 - l2 + l2 / l1
            }
        }
        -1 => {
            if !(x >= me && x < 0.0) {
                return Err(Error::Domain(format!(
                    "lambert_w: branch −1 needs x ∈ [−1/e, 0), got {x}"
                )));
            }
            if (x - me).abs() < 1e-16 {
                return Ok(-1.0);
            }
            if x > -0.27 {
                let l1 = (-x).ln();
                let l2 = (-l1).ln();
                l1 - l2 + l2 / l1
            } else {
                let p = (2.0 * (std::f64::consts::E * x + 1.0)).max(0.0).sqrt();
                -1.0 - p - p * p / 3.0
            }
        }
        other => {
            return Err(Error::Domain(format!(
                "lambert_w: only branches 0 and −1 are provided, got {other}"
            )))
        }
    };
    for _ in 0..100 {
        let ew = w.exp();
        let r = w * ew - x;
        if r.abs() <= 1e-14 * x.abs().max(1e-300) {
            break;
        }
        let d = ew * (w + 1.0);
        if d.abs() < 1e-300 {
            break;
        }
        let halley = d - (w + 2.0) * r / (2.0 * (w + 1.0));
        w -= if halley.abs() > 1e-300 { r / halley } else { r / d };
    }
    let r = (w * w.exp() - x).abs();
    if r <= 1e-12 * x.abs().max(1e-300) {
        Ok(w)
    } else {
        Err(Error::Convergence(format!(
            "lambert_w did not converge at x = {x} (residual {r:.3e})"
        )))
    }
}

/// Small-a reference value ψ(z) ≈ W(z/a). Real z uses the real Lambert
/// evaluator; complex z delegates to the matching full branch.
pub fn psi_small_a(a: &Parameter, z: Complex64, branch: i32) -> Result<Complex64> {
    if z.im == 0.0 {
        lambert_w(branch, z.re / a.value()).map(|w| Complex64::new(w, 0.0))
    } else {
        let b = match branch {
            0 => BranchId::principal(0),
            -1 => BranchId::tilde(-1),
            other => {
                return Err(Error::Domain(format!(
                    "psi_small_a: only branches 0 and −1, got {other}"
                )))
            }
        };
        psi_branch(a, z, b).map(|v| v.w)
    }
}

/// a → 1⁻ reference value ψ(z) = ½ log(2z + 1), principal logarithm.
pub fn psi_near_one(_a: &Parameter, z: Complex64) -> Result<Complex64> {
    let u = 2.0 * z + Complex64::new(1.0, 0.0);
    if u.im == 0.0 && u.re <= 0.0 {
        return Err(Error::Domain(format!(
            "psi_near_one: 2z + 1 = {u} lies on the logarithm cut"
        )));
    }
    Ok(0.5 * u.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::region_of;

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

    /// Independent bisection oracle for the increasing real branch.
    fn oracle_psi0(a: &Parameter, x: f64) -> f64 {
        let av = a.value();
        let f = |w: f64| (av * w).sinh() * w.exp();
        let (mut lo, mut hi) = (xi_a(a), 10.0);
        while f(hi) < x {
            hi += 5.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn real_branch_values() {
        for a in [half(), third(), quarter()] {
            assert_eq!(psi0_real(&a, 0.0).unwrap(), 0.0);
            let xa = x_a(&a);
            assert!((psi0_real(&a, xa).unwrap() - xi_a(&a)).abs() < 1e-14);
            assert!((psi_minus1_real(&a, xa).unwrap() - xi_a(&a)).abs() < 1e-14);
        }
        // closed-form check for a = 1/3: ψ₀(1) = (3/2) ln 2
        let v = psi0_real(&third(), 1.0).unwrap();
        assert!((v - 1.5 * 2f64.ln()).abs() < 1e-13);
        // bisection oracle agreement
        for &x in &[0.3, 1.0, 7.5, -0.05] {
            let v = psi0_real(&half(), x).unwrap();
            assert!((v - oracle_psi0(&half(), x)).abs() < 1e-11, "x = {x}");
        }
        // frozen oracle value: ψ₀(1/2, 1) = 0.8392352499821958
        assert!((psi0_real(&half(), 1.0).unwrap() - 0.839_235_249_982_195_8).abs() < 1e-12);
        // ψ₋₁ diverges toward 0⁻
        assert!(psi_minus1_real(&half(), -1e-12).unwrap() < -25.0);
        // domain errors
        assert!(psi0_real(&half(), x_a(&half()) - 1e-6).is_err());
        assert!(psi_minus1_real(&half(), 0.0).is_err());
        assert!(psi_minus1_real(&half(), x_a(&half()) - 1e-6).is_err());
    }

    #[test]
    fn psi_minus1_closed_form_third() {
        // (3/2) ln(1/2 − √(2x + 1/4)) at x = −0.101554
        let x = -0.101_554;
        let expect = 1.5 * (0.5 - (2.0 * x + 0.25f64).sqrt()).ln();
        let v = psi_minus1_real(&third(), x).unwrap();
        assert!((v - expect).abs() < 1e-12);
        assert!((v + 1.891_11).abs() < 1e-4);
    }

    #[test]
    fn omega_transition_values() {
        let a = third();
        let xia = xi_a(&a);
        assert_eq!(omega_transition(&a, xia).unwrap(), xia);
        // ω(−0.5) ≈ ψ₋₁(f(−0.5)) ≈ −1.89118 for a = 1/3
        let v = omega_transition(&a, -0.5).unwrap();
        assert!((v + 1.891_18).abs() < 1e-4);
        // decreasing in ξ
        let u = omega_transition(&a, -0.4).unwrap();
        assert!(u < v == (-0.4 > -0.5));
        // square-root departure from the fixed point
        let a = half();
        let eps = 1e-6;
        let w = omega_transition(&a, xi_a(&a) + eps).unwrap();
        let drop = xi_a(&a) - w;
        assert!(drop > 0.0 && drop < 0.02, "drop = {drop}");
        // domain errors
        assert!(omega_transition(&a, 0.0).is_err());
        assert!(omega_transition(&a, xi_a(&a) - 1e-9).is_err());
    }

    #[test]
    fn principal_branch_basics() {
        let a = half();
        // frozen bisection-oracle value at z = 1
        let v = psi_branch(&a, c(1.0, 0.0), BranchId::principal(0)).unwrap();
        assert!((v.w - c(0.839_235_249_982_195_8, 0.0)).norm() < 1e-11);
        assert!(v.residual <= 1e-10);
        // z = 0 on any principal branch
        let v = psi_branch(&a, c(0.0, 0.0), BranchId::principal(1)).unwrap();
        assert!((v.w - c(0.0, 2.0 * PI)).norm() < 1e-14);
        // boundary meet at x_a (extended evaluation)
        let v = psi_branch_ext(&a, c(x_a(&a), 0.0), BranchId::principal(0), true).unwrap();
        assert!((v.w - c(xi_a(&a), 0.0)).norm() < 1e-7);
        // real z > x_a stays real
        let v = psi_branch(&a, c(-0.1, 0.0), BranchId::principal(0)).unwrap();
        assert!(v.w.im.abs() <= 1e-12);
        assert!((v.w.re - oracle_psi0(&a, -0.1)).abs() < 1e-10);
        // cut is excluded unless extended
        assert!(psi_branch(&a, c(-1.0, 0.0), BranchId::principal(0)).is_err());
        assert!(psi_branch_ext(&a, c(-1.0, 0.0), BranchId::principal(0), true).is_ok());
    }

    #[test]
    fn tilde_matches_real_minus1() {
        let a = half();
        let v = psi_branch_ext(&a, c(-0.1, 0.0), BranchId::tilde(-1), true).unwrap();
        let r = psi_minus1_real(&a, -0.1).unwrap();
        assert!((v.w - c(r, 0.0)).norm() < 1e-10);
        assert!(region_of(&a, v.w).unwrap() == RegionId::D(0));
        // unextended evaluation rejects the boundary point
        assert!(psi_branch(&a, c(-0.1, 0.0), BranchId::tilde(-1)).is_err());
    }

    #[test]
    fn tilde_quarter_roundtrip_and_region() {
        let a = quarter();
        let z = c(0.2, 0.2);
        // tilde:2 has domain ℂ₊ and codomain D(2)
        let v = psi_branch(&a, z, BranchId::tilde(2)).unwrap();
        assert!(v.residual <= 1e-10 * z.norm().max(1.0));
        assert_eq!(region_of(&a, v.w).unwrap(), RegionId::D(2));
        // wrong half-plane is rejected
        assert!(psi_branch(&a, c(0.2, -0.2), BranchId::tilde(2)).is_err());
        // all six tilde branches of one period round-trip
        for k in 1..=6 {
            let b = BranchId::tilde(k);
            let dom = branch_domain(&a, b, false).unwrap();
            let zt = match dom.shape {
                DomainShape::Sector { from, width } => Complex64::from_polar(0.5, from + width / 2.0),
                _ => unreachable!(),
            };
            let v = psi_branch(&a, zt, b).unwrap();
            assert!(v.residual <= 1e-10, "tilde:{k} residual {}", v.residual);
            assert_eq!(
                region_of(&a, v.w).unwrap(),
                branch_codomain(&a, b).unwrap(),
                "tilde:{k}"
            );
        }
    }

    #[test]
    fn tilde_sides_match_index_parity() {
        // for a = 1/2 and a = 1/4, positive even and negative odd tilde
        // branches live on ℂ₊, the others on ℂ₋
        for a in [half(), quarter()] {
            for k in [-4i64, -3, -2, -1, 1, 2, 3, 4] {
                let dom = branch_domain(&a, BranchId::tilde(k), false).unwrap();
                let upper = (k > 0 && k % 2 == 0) || (k < 0 && (-k) % 2 == 1);
                let z = c(0.3, if upper { 0.3 } else { -0.3 });
                assert!(dom.contains(z), "a = {} tilde:{k} should contain {z}", a.display());
                assert!(!dom.contains(z.conj()), "a = {} tilde:{k} conj", a.display());
            }
        }
    }

    #[test]
    fn tilde_third_full_slit_domain() {
        // a = 1/3: tilde domains are the plane slit along (−∞, 0]
        let a = third();
        let dom = branch_domain(&a, BranchId::tilde(1), false).unwrap();
        for z in [c(0.5, 0.0), c(0.0, 0.7), c(0.0, -0.7), c(-0.5, 0.4)] {
            assert!(dom.contains(z), "{z}");
        }
        assert!(!dom.contains(c(-0.5, 0.0)));
        let v = psi_branch(&a, c(0.5, 0.0), BranchId::tilde(1)).unwrap();
        assert_eq!(region_of(&a, v.w).unwrap(), RegionId::D(1));
        assert!(v.residual < 1e-11);
    }

    #[test]
    fn hat_branches_quarter() {
        let a = quarter();
        // hat-(1) coincides with tilde(1) (ℂ₋ → D(1))
        let z = c(0.3, -0.4);
        let h = psi_branch(&a, z, BranchId::hat_minus(1)).unwrap();
        let t = psi_branch(&a, z, BranchId::tilde(1)).unwrap();
        assert!((h.w - t.w).norm() < 1e-12);
        // hat+(1) would need ℂ₊ → D(1), which is not a conformal branch
        assert!(psi_branch(&a, c(0.3, 0.4), BranchId::hat_plus(1)).is_err());
        // hat+(0) is the ℂ₊ → D(0) branch, alias of tilde(-1)
        let h = psi_branch(&a, c(0.3, 0.4), BranchId::hat_plus(0)).unwrap();
        let t = psi_branch(&a, c(0.3, 0.4), BranchId::tilde(-1)).unwrap();
        assert!((h.w - t.w).norm() < 1e-12);
        // hats are rejected for integer-ratio and irrational parameters
        assert!(matches!(
            psi_branch(&half(), z, BranchId::hat_minus(1)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn irrational_only_principal() {
        let a = Parameter::irrational(0.7314).unwrap();
        assert!(matches!(
            psi_branch(&a, c(1.0, 1.0), BranchId::tilde(1)),
            Err(Error::Unsupported(_))
        ));
        let v = psi_branch(&a, c(1.0, 1.0), BranchId::principal(0)).unwrap();
        assert!(v.residual <= 1e-10 * 2f64.sqrt());
        assert_eq!(region_of(&a, v.w).unwrap(), RegionId::Omega(0));
    }

    #[test]
    fn one_third_formulas() {
        assert_eq!(
            psi_one_third(c(0.0, 0.0), OneThirdBranch::Plain).unwrap(),
            c(0.0, 0.0)
        );
        let v = psi_one_third(c(-0.125, 0.0), OneThirdBranch::Plain).unwrap();
        assert!((v - c(1.5 * 0.5f64.ln(), 0.0)).norm() < 1e-15);
        let v = psi_one_third(c(1.0, 0.0), OneThirdBranch::Plain).unwrap();
        assert!((v - c(1.5 * 2f64.ln(), 0.0)).norm() < 1e-15);
        assert!(psi_one_third(c(-0.2, 0.0), OneThirdBranch::Plain).is_err());
        assert!(psi_one_third(c(-0.2, 0.0), OneThirdBranch::Tilde).is_err());
        assert!(psi_one_third(c(0.0, 0.0), OneThirdBranch::Tilde).is_err());

        // agreement with the seeded solver at a = 1/3
        let a = third();
        let z = c(0.4, 0.9);
        let p = psi_one_third(z, OneThirdBranch::Plain).unwrap();
        let v = psi_branch(&a, z, BranchId::principal(0)).unwrap();
        assert!((p - v.w).norm() < 1e-10);
        // tilde formula covers tilde(-1) on ℂ₊ and tilde(1) on ℂ₋
        let t = psi_one_third(z, OneThirdBranch::Tilde).unwrap();
        let v = psi_branch(&a, z, BranchId::tilde(-1)).unwrap();
        assert!((t - v.w).norm() < 1e-10);
        let t = psi_one_third(z.conj(), OneThirdBranch::Tilde).unwrap();
        let v = psi_branch(&a, z.conj(), BranchId::tilde(1)).unwrap();
        assert!((t - v.w).norm() < 1e-10);
    }

    #[test]
    fn lambert_w_values() {
        assert_eq!(lambert_w(0, 0.0).unwrap(), 0.0);
        let e = std::f64::consts::E;
        assert!((lambert_w(0, e).unwrap() - 1.0).abs() < 1e-14);
        assert!((lambert_w(-1, -1.0 / e).unwrap() + 1.0).abs() < 1e-7);
        assert!((lambert_w(0, 1.0).unwrap() - 0.567_143_290_409_783_8).abs() < 1e-13);
        // residual property over a sweep
        for i in 0..60 {
            let x = -0.36 + i as f64 * 0.2;
            let w = lambert_w(0, x).unwrap();
            assert!((w * w.exp() - x).abs() <= 1e-12 * x.abs().max(1.0));
        }
        for i in 1..40 {
            let x = -0.9 / e * i as f64 / 40.0;
            let w = lambert_w(-1, x).unwrap();
            assert!((w * w.exp() - x).abs() <= 1e-12 * x.abs().max(1.0));
        }
        assert!(lambert_w(0, -1.0).is_err());
        assert!(lambert_w(-1, 0.1).is_err());
        assert!(lambert_w(2, 1.0).is_err());
    }

    #[test]
    fn small_a_and_near_one() {
        let a = Parameter::irrational(1e-3).unwrap();
        let v = psi_small_a(&a, c(1e-3, 0.0), 0).unwrap();
        assert!((v.re - 0.567_143_290_409_783_8).abs() < 1e-12);
        let d = psi_branch(&a, c(1e-3, 0.0), BranchId::principal(0)).unwrap();
        assert!((d.w - v).norm() < 2e-3);
        assert_eq!(
            psi_small_a(&Parameter::irrational(1e-2).unwrap(), c(0.0, 0.0), 0).unwrap(),
            c(0.0, 0.0)
        );
        let a = Parameter::irrational(1e-4).unwrap();
        let v = psi_small_a(&a, c(-1e-4 / std::f64::consts::E, 0.0), -1).unwrap();
        assert!((v.re + 1.0).abs() < 1e-6);

        let a9 = Parameter::irrational(0.999).unwrap();
        let v = psi_near_one(&a9, c(1.0, 0.0)).unwrap();
        assert!((v - c(0.5 * 3f64.ln(), 0.0)).norm() < 1e-15);
        let d = psi_branch(&a9, c(1.0, 0.0), BranchId::principal(0)).unwrap();
        assert!((d.w - v).norm() < 2e-3);
        assert!(psi_near_one(&a9, c(-0.5, 0.0)).is_err());
        assert_eq!(psi_near_one(&a9, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn branch_id_parsing() {
        assert_eq!(
            BranchId::parse("principal:0").unwrap(),
            BranchId::principal(0)
        );
        assert_eq!(BranchId::parse("tilde:-1").unwrap(), BranchId::tilde(-1));
        assert_eq!(BranchId::parse("hat+:2").unwrap(), BranchId::hat_plus(2));
        assert_eq!(BranchId::parse("hat-:0").unwrap(), BranchId::hat_minus(0));
        assert!(BranchId::parse("spiral:1").is_err());
        assert!(BranchId::parse("principal").is_err());
        assert_eq!(format!("{}", BranchId::tilde(-2)), "tilde:-2");
    }

    #[test]
    fn near_branch_point_flag() {
        let a = half();
        let z = c(x_a(&a) + 1e-9, 1e-10);
        let v = psi_branch(&a, z, BranchId::principal(0)).unwrap();
        assert!(v.near_branch_point);
        let v = psi_branch(&a, c(1.0, 0.0), BranchId::principal(0)).unwrap();
        assert!(!v.near_branch_point);
    }
}
