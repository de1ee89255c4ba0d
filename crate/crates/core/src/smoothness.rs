//! Deciders for smoothness over a field, smoothness over the base `K`,
//! perfectness through minimal resolutions, sweetness of bimodules and the
//! triangular decomposition `E = [B 0; N A]`.
//!
//! Each decider only answers under the hypotheses of the criterion it applies.
//! Failed hypotheses are errors for the single-criterion deciders and become
//! `UNDECIDED_WITHIN_BOUND` components inside the triangular decider.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{ConnectedAlgebra, GradedRightModule, QuotientRing};
use crate::dga::{
    check_quasi_iso_structure, DgAlgebraPresentation, DgModulePresentation, DgBimodulePresentation, DgObject,
    QuasiIsoCheck, TriangularPresentation,
};
use crate::error::{Error, Result};
use crate::module::{DegreeWindow, GradedDimVector};
use crate::par::{self, Execution};
use crate::poly::GradedPolyRing;
use crate::resolution::{resolve_with, ProjectiveDimension};

pub const FIELD_CRITERION: &str = "field-criterion";
pub const BASE_RING_CRITERION: &str = "base-ring-criterion";
pub const RESOLUTION_TOR: &str = "minimal-resolution-tor";
pub const DIAGONAL_TOR: &str = "diagonal-tor";
pub const FINITE_COHOMOLOGY: &str = "finite-cohomology";
pub const TRIANGULAR: &str = "triangular-decomposition";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "SMOOTH")]
    Smooth,
    #[serde(rename = "NOT_SMOOTH")]
    NotSmooth,
    #[serde(rename = "UNDECIDED_WITHIN_BOUND")]
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Smooth => "SMOOTH",
            Verdict::NotSmooth => "NOT_SMOOTH",
            Verdict::Undecided => "UNDECIDED_WITHIN_BOUND",
        })
    }
}

/// A degree where the expected and the computed dimensions differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub degree: i32,
    pub expected: usize,
    pub found: usize,
    pub note: String,
}

/// Outcome for one component of a triangular algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentVerdict {
    pub component: String,
    pub outcome: String,
    pub criterion: Option<String>,
    pub witness: Option<Witness>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothnessVerdict {
    pub verdict: Verdict,
    pub criterion: String,
    pub witness: Option<Witness>,
    pub failing_component: Option<String>,
    pub components: Vec<ComponentVerdict>,
    pub note: Option<String>,
}

impl SmoothnessVerdict {
    fn new(verdict: Verdict, criterion: &str) -> Self {
        SmoothnessVerdict {
            verdict,
            criterion: criterion.into(),
            witness: None,
            failing_component: None,
            components: vec![],
            note: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Perfectness {
    Perfect { pd: usize },
    NotPerfect,
    UndecidedWithinBound,
}

impl fmt::Display for Perfectness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Perfectness::Perfect { pd } => write!(f, "PERFECT({pd})"),
            Perfectness::NotPerfect => f.write_str("NOT_PERFECT"),
            Perfectness::UndecidedWithinBound => f.write_str("UNDECIDED_WITHIN_BOUND"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectnessVerdict {
    pub outcome: Perfectness,
    pub criterion: String,
    pub witness: Option<Witness>,
    /// Tor dimensions read off the resolution; a lower bound when truncated.
    pub tor: Option<GradedDimVector>,
    pub note: Option<String>,
}

impl PerfectnessVerdict {
    fn new(outcome: Perfectness, criterion: &str) -> Self {
        PerfectnessVerdict {
            outcome,
            criterion: criterion.into(),
            witness: None,
            tor: None,
            note: None,
        }
    }
}

/// `[-4, 4 × max presentation degree]`.
pub fn default_window(max_presentation_degree: i32) -> DegreeWindow {
    DegreeWindow {
        lo: -4,
        hi: 4 * max_presentation_degree.max(1),
    }
}

/// `s + 1` over a polynomial ring in `s` variables, 8 otherwise.
pub fn default_max_length(regular: bool, num_vars: usize) -> usize {
    if regular {
        num_vars + 1
    } else {
        8
    }
}

fn check_connective_cohomology<X: DgObject + ?Sized>(x: &X, window: &DegreeWindow, name: &str) -> Result<()> {
    for d in window.lo..0 {
        if x.cohomology_dim(d) != 0 {
            return Err(Error::hypothesis(d, format!("H^d({name}) = 0 for d < 0")));
        }
    }
    if x.cohomology_dim(0) != 1 {
        return Err(Error::hypothesis(0, format!("H^0({name}) = Q")));
    }
    Ok(())
}

/// Over a field: with `H^{<0}(T) = 0`, `H^0(T) = Q` and `H(T)` bounded,
/// `T` is smooth exactly when `H(T) = Q`.
pub fn decide_smooth_over_field(t: &DgAlgebraPresentation, window: DegreeWindow) -> Result<SmoothnessVerdict> {
    let w = t.certified_window(window);
    check_connective_cohomology(t, &w, "T")?;
    let report = t.cohomology(w);
    if !report.complete {
        return Err(Error::hypothesis(w.hi, "H(T) bounded above"));
    }
    let mut v = SmoothnessVerdict::new(Verdict::Smooth, FIELD_CRITERION);
    if let Some((d, n)) = report.dims.iter().find(|&(d, _)| d > 0) {
        v.verdict = Verdict::NotSmooth;
        v.witness = Some(Witness {
            degree: d,
            expected: 0,
            found: n,
            note: format!("H^{d}(T) is nonzero"),
        });
    }
    Ok(v)
}

/// Over `K` with `H^{<0}(A) = 0`, `H^0(A) = Q` and `K^1 -> H^1(A)` injective:
/// `A` is `K`-smooth exactly when `K -> A` is a quasi-isomorphism.
pub fn decide_smooth_over_base(k: &GradedPolyRing, a: &DgAlgebraPresentation, window: DegreeWindow) -> Result<SmoothnessVerdict> {
    let w = a.certified_window(window);
    check_connective_cohomology(a, &w, "A")?;
    if k.dim(1) != 0 {
        return Err(Error::hypothesis(1, "K^1 -> H^1(A) injective"));
    }
    let mut v = SmoothnessVerdict::new(Verdict::Smooth, BASE_RING_CRITERION);
    if let QuasiIsoCheck::FailsAt { degree, reason } = check_quasi_iso_structure(k, a, window)? {
        v.verdict = Verdict::NotSmooth;
        v.witness = Some(Witness {
            degree,
            expected: k.dim(degree),
            found: a.cohomology_dim(degree),
            note: format!("K -> H(A) {reason}"),
        });
    }
    Ok(v)
}

/// Perfectness of a graded module over a connected graded algebra through
/// its minimal resolution. Never concludes `NOT_PERFECT`.
pub fn decide_perfect_via_tor<R, M>(r: &R, m: &M, max_length: usize, window: DegreeWindow) -> Result<PerfectnessVerdict>
where
    R: ConnectedAlgebra + ?Sized,
    M: GradedRightModule<R> + ?Sized,
{
    decide_perfect_via_tor_with(Execution::Auto, r, m, max_length, window)
}

pub fn decide_perfect_via_tor_with<R, M>(
    exec: Execution,
    r: &R,
    m: &M,
    max_length: usize,
    window: DegreeWindow,
) -> Result<PerfectnessVerdict>
where
    R: ConnectedAlgebra + ?Sized,
    M: GradedRightModule<R> + ?Sized,
{
    if r.dim(0) != 1 {
        return Err(Error::hypothesis(0, "R^0 = Q"));
    }
    if let Some(d) = (window.lo..0).find(|&d| r.dim(d) != 0) {
        return Err(Error::hypothesis(d, "R^d = 0 for d < 0"));
    }
    let res = resolve_with(exec, r, m, max_length, window);
    let fiber = res.derived_fiber();
    let mut v = PerfectnessVerdict::new(Perfectness::UndecidedWithinBound, RESOLUTION_TOR);
    v.tor = Some(fiber.dims);
    match res.projective_dimension() {
        ProjectiveDimension::ZeroModule => v.outcome = Perfectness::Perfect { pd: 0 },
        ProjectiveDimension::Finite(pd) if r.is_regular() || res.is_certified() => {
            v.outcome = Perfectness::Perfect { pd }
        }
        ProjectiveDimension::Finite(pd) => {
            v.note = Some(format!(
                "resolution stopped at length {pd} inside the window {window}, which does not certify termination"
            ))
        }
        ProjectiveDimension::Truncated => {
            v.note = Some(format!("resolution still nonzero at length {}", max_length + 1))
        }
    }
    Ok(v)
}

/// Tests `Q`-smoothness of the commutative algebra `A = K/I` through the
/// minimal resolution of the diagonal over `A ⊗ A`.
pub fn decide_diagonal_tor(a: &QuotientRing, max_length: usize, window: DegreeWindow) -> Result<SmoothnessVerdict> {
    let (env, diag) = a.diagonal();
    let p = decide_perfect_via_tor(&env, &diag, max_length, window)?;
    let mut v = SmoothnessVerdict::new(Verdict::Undecided, DIAGONAL_TOR);
    if let Perfectness::Perfect { pd } = p.outcome {
        v.verdict = Verdict::Smooth;
        v.note = Some(format!("diagonal has projective dimension {pd}"));
    } else {
        v.note = p.note.map(|n| format!("{n}; Tor lower bound {}", p.tor.unwrap_or_default()));
    }
    Ok(v)
}

/// Perfectness of a right dg module over its algebra, using the finite
/// cohomology test when the algebra has cohomology `Q`, and the minimal
/// resolution when algebra and module have zero differential.
pub fn decide_perfect_module(m: &DgModulePresentation, max_length: usize, window: DegreeWindow) -> Result<PerfectnessVerdict> {
    let x = m.algebra();
    if m.underlying().num_generators() == 0 {
        return Ok(PerfectnessVerdict::new(Perfectness::Perfect { pd: 0 }, FINITE_COHOMOLOGY));
    }
    let hx = x.cohomology(x.certified_window(window));
    if hx.complete && hx.dims == GradedDimVector::from_pairs([(0, 1)]) {
        let report = m.cohomology(m.certified_window(window));
        let mut v = PerfectnessVerdict::new(Perfectness::UndecidedWithinBound, FINITE_COHOMOLOGY);
        if report.complete {
            v.outcome = Perfectness::Perfect { pd: 0 };
        } else {
            let hi = report.window.hi;
            let found = report.dims.get(hi);
            if m.unbounded_above() && found > 0 {
                v.outcome = Perfectness::NotPerfect;
                v.witness = Some(Witness {
                    degree: hi,
                    expected: 0,
                    found,
                    note: "cohomology continues above the window, so it is infinite dimensional".into(),
                });
            } else {
                v.note = Some("finiteness of the cohomology is not certified in the window".into());
            }
        }
        return Ok(v);
    }
    let w = x.certified_window(window);
    if x.has_zero_differential() && x.is_connected_in(&w) && m.has_zero_differential() {
        return decide_perfect_via_tor(x.as_ref(), m, max_length, window);
    }
    Err(Error::ReductionUnavailable(
        "the algebra neither has cohomology Q nor is a connected graded algebra with zero differential".into(),
    ))
}

/// Sweetness of `N`, a module over `A ⊗_K B^op` (right `A`-action, left
/// `B`-action), when `K -> B` is a quasi-isomorphism: `N` is sweet exactly
/// when its restriction to `A` is perfect.
pub fn decide_sweet_reduced(
    a: &Arc<DgAlgebraPresentation>,
    b: &Arc<DgAlgebraPresentation>,
    n: &DgBimodulePresentation,
    max_length: usize,
    window: DegreeWindow,
) -> Result<PerfectnessVerdict> {
    if !Arc::ptr_eq(n.right(), a) || !Arc::ptr_eq(n.left(), b) {
        return Err(Error::InconsistentInput("bimodule is not defined over the given algebras".into()));
    }
    match check_quasi_iso_structure(b.base_ring(), b, window)? {
        QuasiIsoCheck::QuasiIso => decide_perfect_module(&n.restrict_right()?, max_length, window),
        QuasiIsoCheck::FailsAt { degree, reason } => Err(Error::ReductionUnavailable(format!(
            "K -> B is not a quasi-isomorphism ({reason} in degree {degree})"
        ))),
    }
}

fn smooth_component(name: &str, a: &DgAlgebraPresentation, window: DegreeWindow) -> ComponentVerdict {
    let k = a.base_ring();
    let result = if k.is_field() {
        decide_smooth_over_field(a, window)
    } else {
        decide_smooth_over_base(k, a, window)
    };
    match result {
        Ok(v) => ComponentVerdict {
            component: name.into(),
            outcome: v.verdict.to_string(),
            criterion: Some(v.criterion),
            witness: v.witness,
            note: v.note,
        },
        Err(e) => ComponentVerdict {
            component: name.into(),
            outcome: Verdict::Undecided.to_string(),
            criterion: None,
            witness: None,
            note: Some(e.to_string()),
        },
    }
}

fn sweet_component(e: &TriangularPresentation, max_length: usize, window: DegreeWindow) -> ComponentVerdict {
    let n = &e.connecting;
    let k = e.lower_right.base_ring();
    let qiso = |x: &DgAlgebraPresentation| matches!(check_quasi_iso_structure(k, x, window), Ok(QuasiIsoCheck::QuasiIso));
    // N carries a right action of the upper-left and a left action of the
    // lower-right algebra; reduce along whichever side is quasi-isomorphic to K
    let result = if n.underlying().num_generators() == 0 {
        Ok(PerfectnessVerdict::new(Perfectness::Perfect { pd: 0 }, FINITE_COHOMOLOGY))
    } else if qiso(&e.lower_right) {
        decide_sweet_reduced(&e.upper_left, &e.lower_right, n, max_length, window)
    } else if qiso(&e.upper_left) {
        n.restrict_left().and_then(|m| decide_perfect_module(&m, max_length, window))
    } else {
        Err(Error::ReductionUnavailable("neither diagonal algebra is quasi-isomorphic to K".into()))
    };
    match result {
        Ok(p) => ComponentVerdict {
            component: "connecting".into(),
            outcome: p.outcome.to_string(),
            criterion: Some(p.criterion),
            witness: p.witness,
            note: p.note,
        },
        Err(err) => ComponentVerdict {
            component: "connecting".into(),
            outcome: Perfectness::UndecidedWithinBound.to_string(),
            criterion: None,
            witness: None,
            note: Some(err.to_string()),
        },
    }
}

/// `E = [B 0; N A]` is `K`-smooth exactly when `A` and `B` are and `N` is sweet.
pub fn decide_triangular(e: &TriangularPresentation, max_length: usize, window: DegreeWindow) -> Result<SmoothnessVerdict> {
    decide_triangular_with(Execution::Auto, e, max_length, window)
}

pub fn decide_triangular_with(
    exec: Execution,
    e: &TriangularPresentation,
    max_length: usize,
    window: DegreeWindow,
) -> Result<SmoothnessVerdict> {
    let ((upper, lower), connecting) = par::join(
        exec,
        || {
            par::join(
                exec,
                || smooth_component("upper-left", &e.upper_left, window),
                || smooth_component("lower-right", &e.lower_right, window),
            )
        },
        || sweet_component(e, max_length, window),
    );
    let components = vec![upper, lower, connecting];
    let failing = components
        .iter()
        .find(|c| c.outcome == Verdict::NotSmooth.to_string() || c.outcome == Perfectness::NotPerfect.to_string());
    let all_good = components[0].outcome == Verdict::Smooth.to_string()
        && components[1].outcome == Verdict::Smooth.to_string()
        && components[2].outcome.starts_with("PERFECT");
    let mut v = SmoothnessVerdict::new(Verdict::Undecided, TRIANGULAR);
    if let Some(f) = failing {
        v.verdict = Verdict::NotSmooth;
        v.failing_component = Some(f.component.clone());
        v.witness = f.witness.clone();
    } else if all_good {
        v.verdict = Verdict::Smooth;
    } else {
        v.failing_component = components
            .iter()
            .find(|c| c.outcome == Verdict::Undecided.to_string())
            .map(|c| c.component.clone());
    }
    v.components = components;
    Ok(v)
}
