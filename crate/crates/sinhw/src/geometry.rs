//! Boundary geometry of the branch codomains in the w-plane.
//!
//! Off the real axis, Im f vanishes on the graph of
//!   Ξ(η) = (1/(2a)) ln( sin((1−a)η) / sin((1+a)η) ),
//! defined where the ratio is positive. The graph decomposes into arches
//! over a lattice of sine zeros; together with the horizontal rays
//! {ξ ≤ ξ_a, η = kπ/a} through the critical points these curves partition
//! the w-plane into the regions Ω_k (principal-branch codomains) and D_k
//! (the codomains of the remaining branch families).

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::map::xi_a;
use crate::param::{Category, Parameter};

/// Points within this distance of a boundary curve (measured in ξ at fixed η
/// against arches, in η against rays) are treated as boundary points and
/// assigned by the upper-boundary-down rule.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Behavior of Ξ near an interval endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndpointTag {
    /// Endpoint is a zero of the denominator sine: Ξ → +∞.
    PlusInf,
    /// Endpoint is a zero of the numerator sine only: Ξ → −∞.
    MinusInf,
}

/// A maximal interval on which Ξ is defined, with endpoint behavior tags.
#[derive(Debug, Clone)]
pub struct XiInterval {
    pub index: i64,
    pub lo: f64,
    pub hi: f64,
    pub lo_tag: EndpointTag,
    pub hi_tag: EndpointTag,
    /// Endpoint is a shared zero of both sines; Ξ extends continuously there
    /// (limit ξ_a) and the horizontal cut ray attaches at that height.
    pub lo_coincident: bool,
    pub hi_coincident: bool,
}

impl XiInterval {
    pub fn contains(&self, eta: f64) -> bool {
        self.lo < eta && eta < self.hi
    }
}

/// sin(c·η) evaluated as ±sin(c·η − mπ) with m = round(c·η/π).
/// Keeps the value accurate near its zeros for lattice-sized arguments.
fn stable_sin(c: f64, eta: f64) -> f64 {
    let t = c * eta / PI;
    let m = t.round();
    let d = c * eta - m * PI;
    let s = d.sin();
    if (m as i64).rem_euclid(2) == 0 {
        s
    } else {
        -s
    }
}

/// Ξ(η); domain error when the sine ratio is not strictly positive or either
/// sine vanishes.
pub fn xi(a: &Parameter, eta: f64) -> Result<f64> {
    let av = a.value();
    let sn = stable_sin(1.0 - av, eta);
    let sd = stable_sin(1.0 + av, eta);
    if sn == 0.0 || sd == 0.0 {
        return Err(Error::Domain(format!(
            "xi: sine vanishes at eta = {eta}"
        )));
    }
    let ratio = sn / sd;
    if ratio <= 0.0 {
        return Err(Error::Domain(format!(
            "xi: sine ratio {ratio} not positive at eta = {eta}"
        )));
    }
    Ok(ratio.ln() / (2.0 * av))
}

/// Ξ(η) relative to a band center, with the removable value ξ_a at η = 0.
fn xi_removable(a: &Parameter, rel: f64) -> f64 {
    if rel == 0.0 {
        return xi_a(a);
    }
    xi(a, rel).unwrap_or_else(|_| xi_a(a))
}

/// One lattice point of the sine-zero lattice.
#[derive(Debug, Clone, Copy)]
struct LatticePoint {
    eta: f64,
    is_num: bool,
    is_den: bool,
}

fn lattice(a: &Parameter, eta_max: f64) -> Vec<LatticePoint> {
    let mut pts: Vec<LatticePoint> = Vec::new();
    match a.exact() {
        Some((p, q)) => {
            // numerator zeros k·q/(q−p)·π, denominator zeros j·q/(q+p)·π
            // exact coincidence test on the rational multiples of π
            let push = |pts: &mut Vec<LatticePoint>, num: i64, den: i64, is_num: bool| {
                let eta = num as f64 * PI / den as f64;
                pts.push(LatticePoint {
                    eta,
                    is_num,
                    is_den: !is_num,
                });
            };
            let mut k = 0i64;
            loop {
                let eta = k as f64 * q as f64 * PI / (q - p) as f64;
                if eta > eta_max + 1e-12 {
                    break;
                }
                push(&mut pts, k * q, q - p, true);
                k += 1;
            }
            let mut j = 0i64;
            loop {
                let eta = j as f64 * q as f64 * PI / (q + p) as f64;
                if eta > eta_max + 1e-12 {
                    break;
                }
                push(&mut pts, j * q, q + p, false);
                j += 1;
            }
            pts.sort_by(|u, v| u.eta.partial_cmp(&v.eta).unwrap());
            // merge exactly-coincident points: k·q/(q−p) = j·q/(q+p) ⟺ k(q+p) = j(q−p)
            let mut merged: Vec<LatticePoint> = Vec::with_capacity(pts.len());
            for pt in pts {
                if let Some(last) = merged.last_mut() {
                    if (last.eta - pt.eta).abs() < 1e-9 {
                        last.is_num |= pt.is_num;
                        last.is_den |= pt.is_den;
                        continue;
                    }
                }
                merged.push(pt);
            }
            merged
        }
        None => {
            let av = a.value();
            let mut k = 0i64;
            loop {
                let eta = k as f64 * PI / (1.0 - av);
                if eta > eta_max {
                    break;
                }
                pts.push(LatticePoint {
                    eta,
                    is_num: true,
                    is_den: k == 0,
                });
                k += 1;
            }
            let mut j = 1i64;
            loop {
                let eta = j as f64 * PI / (1.0 + av);
                if eta > eta_max {
                    break;
                }
                pts.push(LatticePoint {
                    eta,
                    is_num: false,
                    is_den: true,
                });
                j += 1;
            }
            pts.sort_by(|u, v| u.eta.partial_cmp(&v.eta).unwrap());
            pts
        }
    }
}

/// Domain intervals of Ξ intersecting [0, eta_max], sorted, with endpoint
/// tags (+∞ at denominator zeros, −∞ at numerator-only zeros). An interval
/// straddling eta_max is reported with its true right endpoint.
pub fn xi_domain(a: &Parameter, eta_max: f64) -> Vec<XiInterval> {
    if eta_max <= 0.0 {
        return Vec::new();
    }
    // extend the lattice a little so the interval containing eta_max closes
    let pts = lattice(a, eta_max + a.spacing() + 1.0);
    let av = a.value();
    let mut out = Vec::new();
    let mut index = 0i64;
    for win in pts.windows(2) {
        let (lo, hi) = (win[0], win[1]);
        if lo.eta >= eta_max {
            break;
        }
        let mid = 0.5 * (lo.eta + hi.eta);
        let ratio = stable_sin(1.0 - av, mid) / stable_sin(1.0 + av, mid);
        if ratio > 0.0 {
            let tag = |p: LatticePoint| {
                if p.is_den {
                    EndpointTag::PlusInf
                } else {
                    EndpointTag::MinusInf
                }
            };
            out.push(XiInterval {
                index,
                lo: lo.eta,
                hi: hi.eta,
                lo_tag: tag(lo),
                hi_tag: tag(hi),
                lo_coincident: lo.is_num && lo.is_den,
                hi_coincident: hi.is_num && hi.is_den,
            });
            index += 1;
        }
    }
    out
}

/// Local extrema of Ξ on an interval: solutions of sin(2ηa) = a·sin(2η),
/// located by a sign-change scan and bisection. Coincident endpoints, where
/// the extended arch attains its minimum ξ_a, are included.
pub fn xi_extrema(a: &Parameter, interval: &XiInterval) -> Vec<f64> {
    let av = a.value();
    let g = |eta: f64| stable_sin(2.0 * av, eta) - av * stable_sin(2.0, eta);
    let mut roots = Vec::new();
    if interval.lo_coincident && g(interval.lo).abs() < 1e-9 {
        roots.push(interval.lo);
    }
    let step = PI / 2048.0;
    let n = (((interval.hi - interval.lo) / step).ceil() as usize).max(8);
    let h = (interval.hi - interval.lo) / n as f64;
    let inset = h * 1e-3;
    let mut prev_eta = interval.lo + inset;
    let mut prev_g = g(prev_eta);
    for i in 1..=n {
        let eta = if i == n {
            interval.hi - inset
        } else {
            interval.lo + i as f64 * h
        };
        let ge = g(eta);
        if prev_g == 0.0 {
            roots.push(prev_eta);
        } else if prev_g * ge < 0.0 {
            let (mut lo, mut hi) = (prev_eta, eta);
            let mut glo = prev_g;
            while hi - lo > 1e-12 {
                let mid = 0.5 * (lo + hi);
                let gm = g(mid);
                if glo * gm <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    glo = gm;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev_eta = eta;
        prev_g = ge;
    }
    if interval.hi_coincident && g(interval.hi).abs() < 1e-9 {
        roots.push(interval.hi);
    }
    roots.sort_by(|u, v| u.partial_cmp(v).unwrap());
    roots.dedup_by(|u, v| (*u - *v).abs() < 1e-9);
    roots
}

/// Zeros of Ξ on [0, eta_max]: members of the families kπ/a and π/2 + kπ
/// that lie in the domain of Ξ.
pub fn xi_zeros(a: &Parameter, eta_max: f64) -> Vec<f64> {
    let mut candidates = Vec::new();
    let spacing = a.spacing();
    let mut k = 0i64;
    loop {
        let eta = k as f64 * spacing;
        if eta > eta_max {
            break;
        }
        candidates.push(eta);
        k += 1;
    }
    let mut m = 0i64;
    loop {
        let eta = PI / 2.0 + m as f64 * PI;
        if eta > eta_max {
            break;
        }
        candidates.push(eta);
        m += 1;
    }
    let mut out: Vec<f64> = candidates
        .into_iter()
        .filter(|&eta| matches!(xi(a, eta), Ok(v) if v.abs() <= 1e-10))
        .collect();
    out.sort_by(|u, v| u.partial_cmp(v).unwrap());
    out.dedup_by(|u, v| (*u - *v).abs() < 1e-12);
    out
}

/// Real image x of the upper Ω₀ boundary arch at height η ∈ (0, π/(1+a)):
/// x = −sin(2ηa)/(2 sin(η(1+a))) · (sin((1−a)η)/sin((1+a)η))^{(1−a)/(2a)}.
/// Always negative; supremum x_a as η → 0⁺.
pub fn boundary_image_x(a: &Parameter, eta: f64) -> Result<f64> {
    let av = a.value();
    if !(eta > 0.0 && eta < PI / (1.0 + av)) {
        return Err(Error::Domain(format!(
            "boundary_image_x: eta = {eta} outside (0, {})",
            PI / (1.0 + av)
        )));
    }
    let ratio = ((1.0 - av) * eta).sin() / ((1.0 + av) * eta).sin();
    Ok(-(2.0 * eta * av).sin() / (2.0 * ((1.0 + av) * eta).sin())
        * ratio.powf((1.0 - av) / (2.0 * av)))
}

/// Image of the horizontal segment {ξ₀} × ℝ under f, parameterized by η:
/// (α cos(η(1+a)) − β cos(η(1−a)), α sin(η(1+a)) − β sin(η(1−a))) with
/// α = ½e^{ξ₀(1+a)}, β = ½e^{ξ₀(1−a)}. Identical to f(ξ₀ + iη).
pub fn g_curve(a: &Parameter, xi0: f64, eta: f64) -> Complex64 {
    let av = a.value();
    let alpha = 0.5 * ((1.0 + av) * xi0).exp();
    let beta = 0.5 * ((1.0 - av) * xi0).exp();
    let (sp, cp) = ((1.0 + av) * eta).sin_cos();
    let (sm, cm) = ((1.0 - av) * eta).sin_cos();
    Complex64::new(alpha * cp - beta * cm, alpha * sp - beta * sm)
}

/// Identifies one region of the w-plane partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionId {
    /// Ω_k, the codomain of the k-th principal branch (Ω₀ is the principal
    /// region).
    Omega(i64),
    /// D_j, the j-th non-principal region counted upward; D_1 is the first
    /// region above Ω₀.
    D(i64),
    /// Reserved for reporting; membership queries resolve boundaries by the
    /// upper-boundary-down rule and never return this.
    Boundary,
}

/// Shape of one boundary curve Γ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaShape {
    /// Both endpoint limits are +∞.
    Parabolic,
    /// One endpoint limit is −∞.
    Cubic,
}

/// A boundary curve: the graph of Ξ over one domain interval, optionally
/// together with the horizontal cut ray attached at a coincident endpoint.
#[derive(Debug, Clone)]
pub struct GammaCurve {
    pub index: i64,
    pub shape: GammaShape,
    pub lo: f64,
    pub hi: f64,
    pub includes_ray: bool,
}

/// Γ curves over one period, ordered by left endpoint starting from the
/// curve with lo = 0.
pub fn gamma_curves(a: &Parameter) -> Result<Vec<GammaCurve>> {
    let period = a.period().ok_or_else(|| {
        Error::Unsupported("gamma_curves requires a rational parameter".into())
    })?;
    Ok(xi_domain(a, period)
        .into_iter()
        .filter(|iv| iv.lo < period - 1e-9)
        .map(|iv| {
            let shape = if iv.lo_tag == EndpointTag::PlusInf && iv.hi_tag == EndpointTag::PlusInf {
                GammaShape::Parabolic
            } else {
                GammaShape::Cubic
            };
            GammaCurve {
                index: iv.index,
                shape,
                lo: iv.lo,
                hi: iv.hi,
                includes_ray: iv.lo_coincident || iv.hi_coincident,
            }
        })
        .collect())
}

/// One cubic arch inside a period cell, in cell-relative coordinates.
#[derive(Debug, Clone, Copy)]
struct CubicArch {
    lo: f64,
    hi: f64,
    /// lo endpoint tends to −∞ (curve sweeps from lower-left to upper-right).
    rising: bool,
}

/// D-region bookkeeping for one period cell [0, π/a).
#[derive(Debug, Clone)]
pub(crate) struct CellGeometry {
    /// Cell height π/a.
    pub cell: f64,
    /// Number of D regions between consecutive Ω regions.
    pub m: i64,
    cubics: Vec<CubicArch>,
}

/// D-region classification support for the parameter.
pub(crate) fn cell_geometry(a: &Parameter) -> Result<CellGeometry> {
    let cell = a.spacing();
    match a.category() {
        Category::IntegerRatio => Ok(CellGeometry {
            cell,
            m: 1,
            cubics: Vec::new(),
        }),
        Category::RationalGeneric => {
            let (p, _q) = a.exact().unwrap();
            if p != 1 {
                return Err(Error::Unsupported(format!(
                    "D-region classification is only available for a = 1/q or \
                     (1+a)/(1−a) ∈ ℕ; got a = {}",
                    a.display()
                )));
            }
            let ivs = xi_domain(a, cell);
            // first interval is the upper Ω₀ arch, last is the lower Ω₁ arch;
            // everything in between is a cubic curve
            let cubics: Vec<CubicArch> = ivs[1..ivs.len() - 1]
                .iter()
                .map(|iv| CubicArch {
                    lo: iv.lo,
                    hi: iv.hi,
                    rising: iv.lo_tag == EndpointTag::MinusInf,
                })
                .collect();
            Ok(CellGeometry {
                cell,
                m: cubics.len() as i64 + 1,
                cubics,
            })
        }
        Category::Irrational => Err(Error::Unsupported(
            "D-region classification is not available for irrational parameters".into(),
        )),
    }
}

/// Number of D regions between consecutive Ω regions (1 for integer-ratio
/// parameters, 1 + number of cubic curves otherwise).
pub fn d_regions_per_gap(a: &Parameter) -> Result<i64> {
    cell_geometry(a).map(|g| g.m)
}

/// Classifies w into exactly one region. Boundary points (within
/// `BOUNDARY_TOL`) belong to the region below the curve. For irrational
/// parameters only Ω membership is classified.
pub fn region_of(a: &Parameter, w: Complex64) -> Result<RegionId> {
    let (xi_w, eta) = (w.re, w.im);
    if !xi_w.is_finite() || !eta.is_finite() {
        return Err(Error::Domain(format!("region_of: non-finite point {w}")));
    }
    let spacing = a.spacing();
    let halfw = a.half_width();
    let xia = xi_a(a);
    let geom = cell_geometry(a);

    // cut ray through the critical point at height k·π/a
    let k_ray = (eta / spacing).round() as i64;
    if (eta - k_ray as f64 * spacing).abs() <= BOUNDARY_TOL && xi_w <= xia + BOUNDARY_TOL {
        let m = geom?.m;
        return Ok(RegionId::D(k_ray * m));
    }

    // Ω band around the nearest center
    let k = (eta / spacing).round() as i64;
    let rel = eta - k as f64 * spacing;
    if rel.abs() < halfw {
        let c = xi_removable(a, rel);
        if (xi_w - c).abs() <= BOUNDARY_TOL {
            // on the arch: the upper half belongs to Ω_k below it, the lower
            // half to the D region below it
            return if rel > 0.0 {
                Ok(RegionId::Omega(k))
            } else {
                Ok(RegionId::D(k * geom?.m))
            };
        }
        if xi_w > c {
            return Ok(RegionId::Omega(k));
        }
        let m = geom?.m;
        return Ok(RegionId::D(if rel > 0.0 { k * m + 1 } else { k * m }));
    }

    // outside every Ω band: a D region, located within its period cell
    let geom = geom?;
    let cell_idx = (eta / geom.cell).floor() as i64;
    let eta_mod = eta - cell_idx as f64 * geom.cell;
    let base = cell_idx * geom.m;
    for (i, cub) in geom.cubics.iter().enumerate() {
        let i = i as i64 + 1;
        if eta_mod > cub.lo && eta_mod < cub.hi {
            let c = xi(a, eta_mod)?;
            if (xi_w - c).abs() <= BOUNDARY_TOL {
                return Ok(RegionId::D(base + i)); // curve belongs to the region below
            }
            let right = xi_w > c;
            let lower = right == cub.rising;
            return Ok(RegionId::D(base + if lower { i } else { i + 1 }));
        }
    }
    // corridor: count cubic arches entirely below
    let below = geom.cubics.iter().filter(|cub| cub.hi <= eta_mod).count() as i64;
    Ok(RegionId::D(base + below + 1))
}

/// Boundary-curve bookkeeping for the stack of D regions in the base cell
/// between Ω₀ and Ω₁.
#[derive(Debug, Clone)]
pub(crate) struct StackInfo {
    /// Number of D regions in the stack.
    pub m: i64,
    /// z-image directions of the m+1 boundary curves, bottom to top:
    /// dirs[0] bounds D(1) from below, dirs[b] bounds D(b) from above.
    pub dirs: Vec<f64>,
    /// Corridor midpoint heights, one per region, for seeding.
    pub eta_mid: Vec<f64>,
}

pub(crate) fn stack_info(a: &Parameter) -> Result<StackInfo> {
    use crate::map::{cut_direction, eval_f};
    let geom = cell_geometry(a)?;
    let halfw = a.half_width();
    let cell = geom.cell;
    let mut dirs = vec![PI];
    let mut bounds = vec![halfw];
    for cub in &geom.cubics {
        let mid = 0.5 * (cub.lo + cub.hi);
        let w = Complex64::new(xi(a, mid)?, mid);
        let v = eval_f(a, w)?;
        dirs.push(if v.re >= 0.0 { 0.0 } else { PI });
        bounds.push(cub.lo);
        bounds.push(cub.hi);
    }
    dirs.push(cut_direction(a, 1));
    bounds.push(cell - halfw);
    let eta_mid = (0..geom.m as usize)
        .map(|i| 0.5 * (bounds[2 * i] + bounds[2 * i + 1]))
        .collect();
    Ok(StackInfo {
        m: geom.m,
        dirs,
        eta_mid,
    })
}
