//! Economy primitives and population-level mechanics: school capacities,
//! market parameters, the report×school assignment tables of the Boston and
//! DA mechanisms, market-clearing priority cutoffs, and the expected payoff
//! gain `Δ(θ; r)` from reporting `sab` instead of `asb`.
//!
//! There are three schools: `s` with match utility `v + θ`, `a` with utility
//! `1`, and `b` with utility `0`. The preference shock `θ` is uniform on
//! [0,1]. Every student ranks `b` last, so the only two rank-order reports are
//! `sab` and `asb`; `r` denotes the population fraction reporting `sab`.

use serde::Serialize;

use crate::{Error, Result};

/// Rank-order report submitted by a student.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Report {
    /// Ranks school `s` first: s, a, b.
    Sab,
    /// Ranks school `a` first: a, s, b.
    Asb,
}

impl Report {
    pub const ALL: [Report; 2] = [Report::Sab, Report::Asb];

    fn index(self) -> usize {
        self as usize
    }

    /// The report's rank-order list, best school first.
    pub fn ranking(self) -> [School; 3] {
        match self {
            Report::Sab => [School::S, School::A, School::B],
            Report::Asb => [School::A, School::S, School::B],
        }
    }
}

/// One of the three schools.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum School {
    S,
    A,
    B,
}

impl School {
    pub const ALL: [School; 3] = [School::S, School::A, School::B];

    fn index(self) -> usize {
        self as usize
    }

    /// Match utility for a student with preference shock `theta`.
    pub fn utility(self, theta: f64, v: f64) -> f64 {
        match self {
            School::S => v + theta,
            School::A => 1.0,
            School::B => 0.0,
        }
    }
}

/// School capacities as fractions of the unit student population.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Capacities {
    lambda_s: f64,
    lambda_a: f64,
    lambda_b: f64,
}

impl Capacities {
    /// Construct capacities, requiring every school strictly positive and the
    /// total equal to one (absolute tolerance 1e-12).
    pub fn new(lambda_s: f64, lambda_a: f64, lambda_b: f64) -> Result<Self> {
        for (name, l) in [("lambda_s", lambda_s), ("lambda_a", lambda_a), ("lambda_b", lambda_b)] {
            if !(l > 0.0) || !l.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be strictly positive, got {l}"
                )));
            }
        }
        let total = lambda_s + lambda_a + lambda_b;
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "capacities must sum to 1, got {total}"
            )));
        }
        Ok(Self { lambda_s, lambda_a, lambda_b })
    }

    /// The equal-capacity benchmark, λ_j = 1/3 for every school.
    pub fn equal() -> Self {
        Self { lambda_s: 1.0 / 3.0, lambda_a: 1.0 / 3.0, lambda_b: 1.0 / 3.0 }
    }

    pub fn lambda_s(&self) -> f64 {
        self.lambda_s
    }

    pub fn lambda_a(&self) -> f64 {
        self.lambda_a
    }

    pub fn lambda_b(&self) -> f64 {
        self.lambda_b
    }

    pub fn lambda(&self, school: School) -> f64 {
        match school {
            School::S => self.lambda_s,
            School::A => self.lambda_a,
            School::B => self.lambda_b,
        }
    }

    /// Selectivity threshold `r̂ = λ_s / (λ_s + λ_a)`: school `s` is more
    /// selective than school `a` exactly when `r > r̂`.
    pub fn r_hat(&self) -> f64 {
        self.lambda_s / (self.lambda_s + self.lambda_a)
    }
}

/// The assignment mechanism in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mechanism {
    /// Immediate acceptance: each round's matches are permanent.
    Boston,
    /// Deferred acceptance: matches stay tentative until the algorithm stops.
    Da,
}

impl std::fmt::Display for Mechanism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mechanism::Boston => "boston",
            Mechanism::Da => "da",
        })
    }
}

impl std::str::FromStr for Mechanism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "boston" | "b" => Ok(Mechanism::Boston),
            "da" | "d" | "deferred-acceptance" => Ok(Mechanism::Da),
            other => Err(Error::InvalidParameter(format!("unknown mechanism '{other}'"))),
        }
    }
}

/// The primitive tuple defining one economy.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MarketParams {
    /// Baseline superiority of school `s` (utility units), in (0,1).
    v: f64,
    /// Marginal information cost in utility units per nat, ≥ 0.
    mu: f64,
    caps: Capacities,
}

impl MarketParams {
    pub fn new(v: f64, mu: f64, caps: Capacities) -> Result<Self> {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::InvalidParameter(format!("v must lie in (0,1), got {v}")));
        }
        if !(mu >= 0.0) || !mu.is_finite() {
            return Err(Error::InvalidParameter(format!("mu must be nonnegative, got {mu}")));
        }
        Ok(Self { v, mu, caps })
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn caps(&self) -> &Capacities {
        &self.caps
    }

    /// Same economy with a different information cost.
    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        Self::new(self.v, mu, self.caps)
    }
}

/// Population masses of students by (report, matched school), together with
/// the `sab` fraction the table was built for. Row sums equal `r` and `1-r`;
/// column sums never exceed the capacities.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AllocationTable {
    r: f64,
    mass: [[f64; 3]; 2],
}

impl AllocationTable {
    pub(crate) fn from_rows(r: f64, sab: [f64; 3], asb: [f64; 3]) -> Self {
        Self { r, mass: [sab, asb] }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn mass(&self, report: Report, school: School) -> f64 {
        self.mass[report.index()][school.index()]
    }

    pub fn report_total(&self, report: Report) -> f64 {
        self.mass[report.index()].iter().sum()
    }

    pub fn school_total(&self, school: School) -> f64 {
        self.mass[0][school.index()] + self.mass[1][school.index()]
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().flatten().sum()
    }

    /// Probability of matching with `school` conditional on submitting
    /// `report`. Undefined (error) when the report group is empty.
    pub fn conditional(&self, report: Report, school: School) -> Result<f64> {
        let group = self.report_total(report);
        if group <= 0.0 {
            return Err(Error::DegenerateFraction(self.r));
        }
        Ok(self.mass(report, school) / group)
    }
}

/// Market-clearing priority cutoffs. A student is admitted to the best school
/// on her list whose cutoff her priority clears.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Cutoffs {
    pub p_s: f64,
    pub p_a: f64,
    pub p_b: f64,
}

fn check_fraction(r: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidParameter(format!("report fraction must lie in [0,1], got {r}")));
    }
    Ok(())
}

/// Population assignment table of the Boston mechanism for a fraction `r`
/// reporting `sab`. Panel boundaries are evaluated with the higher-`r` panel;
/// the panels agree there.
pub fn boston_table(r: f64, caps: &Capacities) -> Result<AllocationTable> {
    check_fraction(r)?;
    let (ls, la, lb) = (caps.lambda_s(), caps.lambda_a(), caps.lambda_b());
    let table = if r >= 1.0 - la {
        // School a still has openings after round 1; every sab reject lands
        // in a or b, and every asb student matched a immediately.
        AllocationTable::from_rows(r, [ls, la - (1.0 - r), lb], [0.0, 1.0 - r, 0.0])
    } else if r >= ls {
        // Both top choices fill in round 1; rejects of either school end in b.
        AllocationTable::from_rows(r, [ls, 0.0, r - ls], [0.0, la, (1.0 - r) - la])
    } else {
        // School s is undersubscribed in round 1; asb rejects claim the
        // leftover s seats in round 2.
        AllocationTable::from_rows(r, [r, 0.0, 0.0], [ls - r, la, lb])
    };
    Ok(table)
}

/// Market-clearing priority cutoffs of the DA mechanism.
///
/// For `r ≥ r̂` the cutoffs solve `(1-p_s) r = λ_s` and
/// `(p_s-p_a) r + (1-p_a)(1-r) = λ_a`; for `r < r̂` the mirrored system from
/// the low-`r` table panel applies. `p_b = 0` always.
pub fn da_cutoffs(r: f64, caps: &Capacities) -> Result<Cutoffs> {
    check_fraction(r)?;
    if r <= 0.0 {
        return Err(Error::DegenerateFraction(r));
    }
    let (ls, la, lb) = (caps.lambda_s(), caps.lambda_a(), caps.lambda_b());
    let cut = if r >= caps.r_hat() {
        // Substituting p_s = 1 - λ_s/r into the second equation collapses it
        // to p_a = λ_b.
        Cutoffs { p_s: (1.0 - ls / r).clamp(0.0, 1.0), p_a: lb.clamp(0.0, 1.0), p_b: 0.0 }
    } else {
        Cutoffs {
            p_s: lb.clamp(0.0, 1.0),
            p_a: (1.0 - la / (1.0 - r)).clamp(0.0, 1.0),
            p_b: 0.0,
        }
    };
    Ok(cut)
}

/// Population assignment table of the DA mechanism for a fraction `r`
/// reporting `sab`. Consistent with [`da_cutoffs`] and continuous at `r = r̂`.
pub fn da_table(r: f64, caps: &Capacities) -> Result<AllocationTable> {
    check_fraction(r)?;
    let (ls, la, lb) = (caps.lambda_s(), caps.lambda_a(), caps.lambda_b());
    let table = if r >= caps.r_hat() {
        AllocationTable::from_rows(
            r,
            [ls, r * la - (1.0 - r) * ls, lb * r],
            [0.0, (1.0 - r) * (ls + la), lb * (1.0 - r)],
        )
    } else {
        AllocationTable::from_rows(
            r,
            [r * (ls + la), 0.0, r * lb],
            [(1.0 - r) * ls - r * la, la, (1.0 - r) * lb],
        )
    };
    Ok(table)
}

/// Intercept and slope of the affine payoff gain `Δ(θ; r) = c + s·θ` for a
/// given mechanism. Defined for every `r ∈ (0,1)` via the conditional
/// assignment probabilities of the `r`-appropriate table panel.
pub fn delta_affine(mech: Mechanism, r: f64, params: &MarketParams) -> Result<(f64, f64)> {
    check_fraction(r)?;
    if r <= 0.0 || r >= 1.0 {
        return Err(Error::DegenerateFraction(r));
    }
    let caps = params.caps();
    let (ls, la) = (caps.lambda_s(), caps.lambda_a());
    let v = params.v();
    Ok(match mech {
        Mechanism::Boston => {
            if r >= ls {
                let loss = (la / (1.0 - r)).min((1.0 - la) / r);
                (ls * v / r - loss, ls / r)
            } else {
                // Undersubscribed s: an sab report matches s for sure, while
                // asb keeps a chance at leftover s seats.
                ((v * (1.0 - ls) - la) / (1.0 - r), (1.0 - ls) / (1.0 - r))
            }
        }
        Mechanism::Da => {
            if r >= caps.r_hat() {
                (ls * (v - 1.0) / r, ls / r)
            } else {
                (la * (v - 1.0) / (1.0 - r), la / (1.0 - r))
            }
        }
    })
}

/// Expected gain in match utility from reporting `sab` instead of `asb` for a
/// student with preference shock `theta`, when a fraction `r` of the
/// population reports `sab`. Affine and strictly increasing in `theta`.
pub fn delta(mech: Mechanism, theta: f64, r: f64, params: &MarketParams) -> Result<f64> {
    let (intercept, slope) = delta_affine(mech, r, params)?;
    Ok(intercept + slope * theta)
}
