//! Extreme-configuration constraint systems at a gadget junction and the
//! inapproximability constants they produce.
//!
//! Each system describes the largest footprint length `ℓ` at which a junction
//! still needs the same number of footprints as with unit footprints. All
//! three are reduced by hand to a single residual `r(ℓ)`; the auxiliary
//! lengths are then recovered from `ℓ` and every original equation is
//! re-evaluated to report the true residual.
//!
//! # Circle junction
//!
//! Arms leave the crossing `C` at 0°, 120° and 240°. The first bar on each arm
//! (half-length `√3/2`) sits `1.5` from `C`. One circle (centre `F₅`, on the 0°
//! arm) reaches the top `G'` of the first 0° bar and a point `G` on the 240° arm;
//! a second (centre `F₄`, on the 240° arm) reaches from `G` to the tip `L` of a
//! bar whose foot `I` lies a fixed arm span `A` from `C`.
//!
//! ```text
//! s      = √(ℓ² − 3/4)            (|F₄I| and |F₅I'|, right triangles with the bars)
//! |CG|   = A − ℓ − s
//! |CF₅|  = 1.5 − s                (C, F₅, I' collinear on the 0° arm)
//! r(ℓ)   = |CG|² + |CF₅|² + |CG|·|CF₅| − ℓ²     (cosine rule, 120° at C)
//! ```
//!
//! The shipped span is `A = 2.5` (bar foot `I` measured in the junction drawing);
//! the constant printed beside the equations, `1.75`, is kept as the
//! alternative reading [`Reading::Printed`].
//!
//! # Square junction
//!
//! Segment length `√2/2`, bar length `ζ = √2/2`, first bar `3√2/4` from `C`.
//! A square with corner `Q` on the 240° arm and opposite corner `O` at
//! `|OC| = 3√2/2` has its diagonal on the arm, so `|CQ| = 3√2/2 − √2ℓ`.
//!
//! ```text
//! a      = |CQ|/2 + 3√2/4
//! |QG|²  = a² + (√3/2·|CQ| − ζ/2)²     |FG| = √(|QG|² − ℓ²)
//! |QE|²  = a² + (√3/2·|CQ| + ζ/2)²     |JE| = √(|QE|² − ℓ²)
//! r(ℓ)   = (ℓ − |JE|)² + (ℓ − |FG|)² − ζ²
//! ```
//!
//! # Restricted square junction
//!
//! Centres must lie on the structure. With `ρ = sin 45° / sin 75°`:
//!
//! ```text
//! |CK| = √2ℓ − k₀        |CQ| = ρ·|CK|        r(ℓ) = |CQ| + √2ℓ − |OC|
//! ```
//!
//! The shipped reading uses `k₀ = √2` and `|OC| = 3√2/2` (the same far corner
//! as the unrestricted square), which solves in closed form to
//! `ℓ = (3/2 + ρ) / (1 + ρ)`. The printed constants `k₀ = √2/2`,
//! `|OC| = 5√2/4` are available as [`Reading::Printed`]. The reported bound is
//! capped at the path-pattern threshold `1.25`.

use std::f64::consts::{FRAC_PI_4, SQRT_2};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Lower end of the default search bracket for `ℓ`.
pub const BRACKET_LO: f64 = 0.5;
/// Upper end of the default search bracket for `ℓ`.
pub const BRACKET_HI: f64 = 2.0;
/// Side length at which the restricted path pattern changes.
pub const RESTRICTED_CAP: f64 = 1.25;

const SCAN_STEPS: usize = 4000;
const NONNEG_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HardnessError {
    #[error("no admissible root of the {variant} system in [{lo}, {hi}]")]
    NoRootInBracket { variant: Variant, lo: f64, hi: f64 },
    #[error("invalid bracket [{lo}, {hi}]")]
    BadBracket { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Circle,
    Square,
    SquareRestricted,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Circle, Variant::Square, Variant::SquareRestricted];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Circle => "circle",
            Variant::Square => "square",
            Variant::SquareRestricted => "square_restricted",
        }
    }

    /// Inapproximability constant as stated for this variant.
    pub fn stated_bound(self) -> f64 {
        match self {
            Variant::Circle => 1.152,
            Variant::Square => 1.165,
            Variant::SquareRestricted => RESTRICTED_CAP,
        }
    }

    /// Raw root stated for this variant's system (before any cap).
    pub fn stated_root(self) -> f64 {
        match self {
            Variant::Circle => 1.152,
            Variant::Square => 1.165,
            Variant::SquareRestricted => 1.289,
        }
    }

    /// Approximation factor achieved by the sampling + farthest-first solver.
    pub fn guarantee(self) -> f64 {
        match self {
            Variant::Circle => 2.0,
            Variant::Square | Variant::SquareRestricted => 2.0 * SQRT_2,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| format!("unknown variant '{s}' (expected circle, square or square_restricted)"))
    }
}

/// Which constants close the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reading {
    /// Constants measured from the junction drawings.
    Drawing,
    /// Constants exactly as printed beside the equations.
    Printed,
}

/// Parameters of one junction system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JunctionSystem {
    pub variant: Variant,
    pub reading: Reading,
    pub zeta: f64,
    pub segment_len: f64,
    /// Distance from the crossing to the first bar on each arm.
    pub junction_offset: f64,
    /// Circle: arm span `A`. Square: `|OC|`. Restricted: `|OC|`.
    pub far_length: f64,
    /// Restricted only: the constant `k₀` in `|CK| = √2ℓ − k₀`.
    pub corner_offset: f64,
    pub cap: Option<f64>,
}

impl JunctionSystem {
    pub fn new(variant: Variant, reading: Reading) -> Self {
        let h = SQRT_2 / 2.0;
        match variant {
            Variant::Circle => Self {
                variant,
                reading,
                zeta: 3f64.sqrt(),
                segment_len: 1.0,
                junction_offset: 1.5,
                far_length: match reading {
                    Reading::Drawing => 2.5,
                    Reading::Printed => 1.75,
                },
                corner_offset: 0.0,
                cap: None,
            },
            Variant::Square => Self {
                variant,
                reading,
                zeta: h,
                segment_len: h,
                junction_offset: 3.0 * SQRT_2 / 4.0,
                far_length: 3.0 * SQRT_2 / 2.0,
                corner_offset: 0.0,
                cap: None,
            },
            Variant::SquareRestricted => Self {
                variant,
                reading,
                zeta: h,
                segment_len: h,
                junction_offset: 3.0 * SQRT_2 / 4.0,
                far_length: match reading {
                    Reading::Drawing => 3.0 * SQRT_2 / 2.0,
                    Reading::Printed => 5.0 * SQRT_2 / 4.0,
                },
                corner_offset: match reading {
                    Reading::Drawing => SQRT_2,
                    Reading::Printed => h,
                },
                cap: Some(RESTRICTED_CAP),
            },
        }
    }

    /// The shipped reading for `variant`.
    pub fn shipped(variant: Variant) -> Self {
        Self::new(variant, Reading::Drawing)
    }

    /// Auxiliary lengths implied by `ell`, or `None` where a square root of a
    /// negative number would be needed.
    pub fn unknowns(&self, ell: f64) -> Option<Vec<(&'static str, f64)>> {
        match self.variant {
            Variant::Circle => {
                let s = half_chord(ell, self.zeta / 2.0)?;
                let cf5 = circle_closing_cf5(self.junction_offset, s);
                Some(vec![
                    ("ell", ell),
                    ("CG", self.far_length - ell - s),
                    ("F4G", ell),
                    ("F4I", s),
                    ("F5G", ell),
                    ("F5I'", s),
                    ("CF5", cf5),
                ])
            }
            Variant::Square => {
                let cq = self.far_length - SQRT_2 * ell;
                let (qg2, qe2) = self.square_diagonals(cq);
                let fg = half_chord(qg2.sqrt(), ell)?;
                let je = half_chord(qe2.sqrt(), ell)?;
                Some(vec![
                    ("ell", ell),
                    ("CQ", cq),
                    ("OQ", SQRT_2 * ell),
                    ("QG", qg2.sqrt()),
                    ("FG", fg),
                    ("QE", qe2.sqrt()),
                    ("JE", je),
                    ("IG", ell - fg),
                    ("IE", ell - je),
                ])
            }
            Variant::SquareRestricted => {
                let ck = restricted_ck(ell, self.corner_offset);
                Some(vec![
                    ("ell", ell),
                    ("CK", ck),
                    ("CQ", ck * sine_ratio()),
                    ("OQ", SQRT_2 * ell),
                    ("OC", self.far_length),
                ])
            }
        }
    }

    fn square_diagonals(&self, cq: f64) -> (f64, f64) {
        let a = cq / 2.0 + self.junction_offset;
        let b = 3f64.sqrt() / 2.0 * cq;
        let qg2 = a * a + (b - self.zeta / 2.0).powi(2);
        let qe2 = a * a + (b + self.zeta / 2.0).powi(2);
        (qg2, qe2)
    }

    /// Reduced one-dimensional residual; NaN outside the domain.
    pub fn reduced_residual(&self, ell: f64) -> f64 {
        let Some(u) = self.unknowns(ell) else {
            return f64::NAN;
        };
        let get = |name: &str| u.iter().find(|(n, _)| *n == name).map(|(_, v)| *v).unwrap_or(f64::NAN);
        match self.variant {
            Variant::Circle => {
                let (cg, cf5) = (get("CG"), get("CF5"));
                cg * cg + cf5 * cf5 + cg * cf5 - ell * ell
            }
            Variant::Square => get("IE").powi(2) + get("IG").powi(2) - self.zeta * self.zeta,
            Variant::SquareRestricted => get("CQ") + SQRT_2 * ell - self.far_length,
        }
    }

    /// Every original equation evaluated at `ell`, as `(label, lhs − rhs)`.
    pub fn equation_residuals(&self, ell: f64) -> Option<Vec<(&'static str, f64)>> {
        let u = self.unknowns(ell)?;
        let get = |name: &str| u.iter().find(|(n, _)| *n == name).map(|(_, v)| *v).unwrap_or(f64::NAN);
        let z = self.zeta;
        Some(match self.variant {
            Variant::Circle => {
                let bar = z / 2.0;
                let (cg, f4g, f4i, f5g, f5i, cf5) =
                    (get("CG"), get("F4G"), get("F4I"), get("F5G"), get("F5I'"), get("CF5"));
                vec![
                    ("CG+F4G+F4I=A", cg + f4g + f4i - self.far_length),
                    ("F4G=l", f4g - ell),
                    ("F5G=l", f5g - ell),
                    ("F4I^2+IL^2=l^2", f4i * f4i + bar * bar - ell * ell),
                    ("F5I'^2+GI'^2=l^2", f5i * f5i + bar * bar - ell * ell),
                    ("CG^2+CF5^2+CG*CF5=F5G^2", cg * cg + cf5 * cf5 + cg * cf5 - f5g * f5g),
                    ("CF5+F5I'=CI'", cf5 + f5i - self.junction_offset),
                ]
            }
            Variant::Square => {
                let (cq, oq, qg, fg, qe, je, ig, ie) = (
                    get("CQ"),
                    get("OQ"),
                    get("QG"),
                    get("FG"),
                    get("QE"),
                    get("JE"),
                    get("IG"),
                    get("IE"),
                );
                let (qg2, qe2) = self.square_diagonals(cq);
                vec![
                    ("OQ+CQ=OC", oq + cq - self.far_length),
                    ("OQ=sqrt2*l", oq - SQRT_2 * ell),
                    ("QG^2=geom", qg * qg - qg2),
                    ("QG^2=l^2+FG^2", qg * qg - ell * ell - fg * fg),
                    ("QE^2=geom", qe * qe - qe2),
                    ("QE^2=l^2+JE^2", qe * qe - ell * ell - je * je),
                    ("IE^2+IG^2=zeta^2", ie * ie + ig * ig - z * z),
                    ("IG+GF=l", ig + fg - ell),
                    ("IE+EJ=l", ie + je - ell),
                ]
            }
            Variant::SquareRestricted => {
                let (ck, cq, oq, oc) = (get("CK"), get("CQ"), get("OQ"), get("OC"));
                let (s45, s75) = (FRAC_PI_4.sin(), (5.0 * FRAC_PI_4 / 3.0).sin());
                vec![
                    ("CK=sqrt2*l-k0", ck - restricted_ck(ell, self.corner_offset)),
                    ("CQ/sin45=CK/sin75", cq / s45 - ck / s75),
                    ("OC=OQ+CQ", oc - oq - cq),
                    ("OQ=sqrt2*l", oq - SQRT_2 * ell),
                    ("OC=const", oc - self.far_length),
                ]
            }
        })
    }

    fn admissible(&self, ell: f64) -> bool {
        self.unknowns(ell)
            .is_some_and(|u| u.iter().all(|&(_, v)| v.is_finite() && v >= -NONNEG_TOL))
    }
}

/// Closing relation for the circle system: `C`, `F₅` and the bar foot `I'`
/// are collinear on the 0° arm.
pub fn circle_closing_cf5(junction_offset: f64, f5_to_foot: f64) -> f64 {
    junction_offset - f5_to_foot
}

/// Closing relation for the restricted system: `|CK| = √2ℓ − k₀`.
pub fn restricted_ck(ell: f64, corner_offset: f64) -> f64 {
    SQRT_2 * ell - corner_offset
}

/// `sin 45° / sin 75°`.
pub fn sine_ratio() -> f64 {
    FRAC_PI_4.sin() / (5.0 * std::f64::consts::PI / 12.0).sin()
}

/// Leg of a right triangle with hypotenuse `hyp` and other leg `leg`.
fn half_chord(hyp: f64, leg: f64) -> Option<f64> {
    let d = hyp * hyp - leg * leg;
    (d >= 0.0).then(|| d.sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HardnessResult {
    pub variant: Variant,
    pub reading: Reading,
    pub ell: f64,
    /// Largest absolute equation residual at `ell`.
    pub residual: f64,
    pub applied_cap: Option<f64>,
    pub reported_bound: f64,
    /// Every sign change located in the bracket, admissible or not.
    pub roots: Vec<f64>,
    /// Set when more than one sign change was found.
    pub ambiguous: bool,
    pub unknowns: Vec<(String, f64)>,
}

/// Solves on the default bracket.
pub fn solve_junction_system(sys: &JunctionSystem) -> Result<HardnessResult, HardnessError> {
    solve_in_bracket(sys, BRACKET_LO, BRACKET_HI)
}

/// Scans `[lo, hi]` for sign changes of the reduced residual, bisects each,
/// and selects the smallest root where every unknown is nonnegative.
pub fn solve_in_bracket(sys: &JunctionSystem, lo: f64, hi: f64) -> Result<HardnessResult, HardnessError> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(HardnessError::BadBracket { lo, hi });
    }
    let f = |x: f64| sys.reduced_residual(x);
    let step = (hi - lo) / SCAN_STEPS as f64;
    let mut roots = Vec::new();
    let mut prev = (lo, f(lo));
    for i in 1..=SCAN_STEPS {
        let x = if i == SCAN_STEPS { hi } else { lo + step * i as f64 };
        let cur = (x, f(x));
        if !prev.1.is_nan() && !cur.1.is_nan() {
            if prev.1 == 0.0 {
                roots.push(prev.0);
            } else if prev.1 * cur.1 < 0.0 {
                roots.push(bisect(&f, prev.0, cur.0));
            }
        }
        prev = cur;
    }
    if prev.1 == 0.0 {
        roots.push(prev.0);
    }

    let ell = roots
        .iter()
        .copied()
        .find(|&r| sys.admissible(r))
        .ok_or(HardnessError::NoRootInBracket {
            variant: sys.variant,
            lo,
            hi,
        })?;
    let residual = sys
        .equation_residuals(ell)
        .map(|eqs| eqs.iter().map(|(_, r)| r.abs()).fold(0.0, f64::max))
        .unwrap_or(f64::NAN);
    let unknowns = sys
        .unknowns(ell)
        .unwrap_or_default()
        .into_iter()
        .map(|(n, v)| (n.to_string(), v))
        .collect();
    Ok(HardnessResult {
        variant: sys.variant,
        reading: sys.reading,
        ell,
        residual,
        applied_cap: sys.cap,
        reported_bound: sys.cap.map_or(ell, |c| ell.min(c)),
        ambiguous: roots.len() > 1,
        roots,
        unknowns,
    })
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    if f(a).abs() <= f(b).abs() {
        a
    } else {
        b
    }
}

/// One row of the bound summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub variant: Variant,
    /// Stated inapproximability bound.
    pub bound: f64,
    /// Root computed from the shipped reading, before any cap.
    pub computed_ell: f64,
    pub residual: f64,
    pub reported_bound: f64,
    pub guarantee: f64,
    /// `guarantee / bound`.
    pub gap: f64,
}

/// Bound summary for all three variants using the shipped readings.
pub fn bound_report() -> Vec<BoundRow> {
    Variant::ALL
        .into_iter()
        .map(|v| {
            let (computed_ell, residual, reported_bound) = match solve_junction_system(&JunctionSystem::shipped(v)) {
                Ok(r) => (r.ell, r.residual, r.reported_bound),
                Err(_) => (f64::NAN, f64::NAN, f64::NAN),
            };
            BoundRow {
                variant: v,
                bound: v.stated_bound(),
                computed_ell,
                residual,
                reported_bound,
                guarantee: v.guarantee(),
                gap: v.guarantee() / v.stated_bound(),
            }
        })
        .collect()
}

/// `(ell, reduced residual)` at `steps + 1` evenly spaced points of `[lo, hi]`.
pub fn residual_sweep(sys: &JunctionSystem, lo: f64, hi: f64, steps: usize) -> Vec<(f64, f64)> {
    let steps = steps.max(1);
    (0..=steps)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / steps as f64;
            (x, sys.reduced_residual(x))
        })
        .collect()
}
