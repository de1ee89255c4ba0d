//! Exit gate: one PASS/FAIL line per criterion. Time limits are wall-clock
//! bounds on the debug build.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::*;
use dgsmooth::algebra::QuotientRing;
use dgsmooth::dga::{amplitude, amplitude_obstruction, Amplitude, AmplitudeVerdict, DgObject};
use dgsmooth::equivariant::{
    check_homogeneous_space, check_variety, EmbeddingHint, GroupDescriptor, OrbitDescriptor, OrbitFlags,
    OrbitStratification,
};
use dgsmooth::resolution::{self, ProjectiveDimension};
use dgsmooth::smoothness::{
    decide_perfect_via_tor, decide_smooth_over_base, decide_smooth_over_field, decide_triangular, Perfectness, Verdict,
    BASE_RING_CRITERION, DIAGONAL_TOR, FIELD_CRITERION,
};
use dgsmooth::weyl::{hilbert_dims, invariant_degrees, invariant_dims_oracle, simple_reflections, RootType};

type Outcome = Result<String, String>;
type Check = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn smooth_algebras() -> Outcome {
    // (a) Q[X] via its diagonal over Q[x, y]
    let poly = QuotientRing::polynomial(qx());
    let (env, diag) = poly.diagonal();
    let p = decide_perfect_via_tor(&env, &diag, 3, w(-4, 12)).map_err(|e| e.to_string())?;
    ensure(p.outcome == Perfectness::Perfect { pd: 1 }, || format!("diagonal of Q[X]: {}", p.outcome))?;
    // (b) field criterion
    for n in [2, 3] {
        let v = decide_smooth_over_field(&truncated_over_field(n), w(-4, 16)).map_err(|e| e.to_string())?;
        ensure(v.verdict == Verdict::NotSmooth && v.criterion == FIELD_CRITERION, || format!("Q[X]/(X^{n}): {}", v.verdict))?;
    }
    // (c) base criterion, witness re-verified against the cohomology
    let k = qx();
    for n in [1, 2] {
        let a = truncated_over_base(n);
        let v = decide_smooth_over_base(&k, &a, w(-4, 16)).map_err(|e| e.to_string())?;
        ensure(v.verdict == Verdict::NotSmooth && v.criterion == BASE_RING_CRITERION, || format!("n={n}: {}", v.verdict))?;
        let wit = v.witness.ok_or("missing witness")?;
        ensure(
            wit.expected == k.dim(wit.degree) && wit.found == a.cohomology_dim(wit.degree) && wit.expected != wit.found,
            || format!("n={n}: witness {wit:?} does not re-verify"),
        )?;
    }
    Ok(format!("pd(diagonal of Q[X]) = 1 via {DIAGONAL_TOR}"))
}

fn two_by_two_triangular() -> Outcome {
    for dim in [0, 1, 5] {
        let v = decide_triangular(&kvk(dim, None), 8, w(-4, 4)).map_err(|e| e.to_string())?;
        ensure(v.verdict == Verdict::Smooth, || format!("dim V = {dim}: {}", v.verdict))?;
    }
    let v = decide_triangular(&kvk(0, Some(6)), 8, w(-4, 6)).map_err(|e| e.to_string())?;
    ensure(v.verdict == Verdict::NotSmooth, || format!("unbounded V: {}", v.verdict))?;
    let conn = v.components.iter().find(|c| c.component == "connecting").ok_or("no connecting component")?;
    ensure(conn.outcome == "NOT_PERFECT", || format!("connecting: {}", conn.outcome))?;
    Ok("dim V in {0,1,5} smooth; unbounded V not perfect".into())
}

fn point_on_the_diagonal() -> Outcome {
    let v = decide_triangular(&point_on_the_line(), 3, w(-4, 8)).map_err(|e| e.to_string())?;
    ensure(v.verdict == Verdict::NotSmooth, || format!("verdict {}", v.verdict))?;
    ensure(v.failing_component.as_deref() == Some("upper-left"), || format!("failing {:?}", v.failing_component))?;
    Ok("failing component upper-left".into())
}

fn projective_line() -> Outcome {
    let sl2 = GroupDescriptor::sl(2);
    let b = GroupDescriptor::borel_sl(2);
    let r = check_homogeneous_space(&sl2, &b, &EmbeddingHint::Standard, OrbitFlags::default()).map_err(|e| e.to_string())?;
    ensure(!r.smooth, || "SL2/B reported smooth".into())?;
    ensure(r.witness.as_deref() == Some("weyl order 1 != 2"), || format!("witness {:?}", r.witness))?;
    let x = OrbitStratification::new(
        b.clone(),
        vec![
            OrbitDescriptor { name: "fixed point".into(), stabilizer: b.clone(), flags: OrbitFlags::default() },
            OrbitDescriptor {
                name: "open cell".into(),
                stabilizer: GroupDescriptor::torus(1),
                flags: OrbitFlags { affine_space: Some(true), trivial_cohomology: None },
            },
        ],
    )
    .map_err(|e| e.to_string())?;
    let v = check_variety(&x, &EmbeddingHint::Standard).map_err(|e| e.to_string())?;
    ensure(v.smooth && v.orbits.len() == 2, || format!("B-variety P1: {v:?}"))?;
    Ok("not SL2-smooth (weyl order 1 != 2); B-smooth with two orbits".into())
}

fn resolution_properties() -> Outcome {
    let cases = 200;
    let window = w(-2, 12);
    for seed in 0..cases {
        let m = random_module(seed);
        let s = m.ring().num_vars();
        let ring = QuotientRing::polynomial(m.ring().clone());
        let res = resolution::resolve(&ring, &m, s + 1, window);
        ensure(res.is_minimal(&ring), || format!("seed {seed}: not minimal"))?;
        res.verify_exactness(&ring, &m, &window).map_err(|e| format!("seed {seed}: {e}"))?;
        match res.projective_dimension() {
            ProjectiveDimension::ZeroModule => {}
            ProjectiveDimension::Finite(pd) => ensure(pd <= s, || format!("seed {seed}: pd {pd} > {s}"))?,
            ProjectiveDimension::Truncated => return Err(format!("seed {seed}: truncated")),
        }
        let fiber = res.derived_fiber();
        for n in window.lo - s as i32..=window.hi - s as i32 {
            let oracle: usize = (0..=s).map(|p| koszul_tor(&m, p, n + p as i32)).sum();
            ensure(fiber.dims.get(n) == oracle, || format!("seed {seed}: fiber degree {n}: {} vs {oracle}", fiber.dims.get(n)))?;
        }
    }
    Ok(format!("{cases} modules over Q[x] and Q[x,y]"))
}

fn amplitude_lower_bound() -> Outcome {
    let mut cases = 0;
    for n in [2u32, 3] {
        let a = Arc::new(truncated_over_field(n));
        for seed in 0..100 {
            let m = random_filtered_module(&a, n, seed);
            let window = w(-12, 24);
            let verdict = amplitude_obstruction(&a, &m, window).map_err(|e| e.to_string())?;
            ensure(verdict == AmplitudeVerdict::NoObstruction, || format!("n={n} seed {seed}: {verdict:?}"))?;
            let h = m.cohomology(m.certified_window(window));
            let Amplitude::Bounded(ampl) = amplitude(&h) else {
                return Err(format!("n={n} seed {seed}: amplitude {}", amplitude(&h)));
            };
            let top = h.dims.max_degree().ok_or("zero cohomology")?;
            ensure(ampl >= 2 * (n - 1) && h.dims.get(top) >= 1, || format!("n={n} seed {seed}: H = {}", h.dims))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} semi-free modules"))
}

fn invariant_rings() -> Outcome {
    for t in [RootType::A, RootType::B, RootType::C, RootType::D] {
        for rank in 1..=3 {
            let oracle = invariant_dims_oracle(rank as usize, &simple_reflections(t, rank), 16);
            let expected = hilbert_dims(&invariant_degrees(t, rank), 16);
            ensure(oracle == expected, || format!("{t}{rank}: oracle {oracle} vs catalog {expected}"))?;
        }
    }
    let degrees = |g: &GroupDescriptor| dgsmooth::equivariant::compact_data(g).invariant_degrees;
    ensure(degrees(&GroupDescriptor::gl(2)) == [2, 4], || "U(2)".into())?;
    ensure(degrees(&GroupDescriptor::gl(3)) == [2, 4, 6], || "U(3)".into())?;
    ensure(degrees(&GroupDescriptor::sl(2)) == [4], || "SU(2)".into())?;
    Ok("types A-D, rank <= 3, degree <= 16".into())
}

fn decider_consistency() -> Outcome {
    let mut definite = 0;
    for seed in 0..60 {
        let a = random_finite_algebra(seed);
        let f = field_verdict(&a);
        let d = diagonal_verdict(&a, 3);
        if f != Verdict::Undecided && d != Verdict::Undecided {
            definite += 1;
            ensure(f == d, || format!("seed {seed}: field {f} vs diagonal {d}"))?;
        }
    }
    ensure(definite >= 50, || format!("only {definite} definite pairs"))?;
    Ok(format!("{definite} algebras, all agree"))
}

fn main() {
    let criteria: [Check; 8] = [
        ("polynomial-and-truncated-algebras", Duration::from_secs(5), smooth_algebras),
        ("two-by-two-triangular", Duration::from_secs(1), two_by_two_triangular),
        ("point-on-the-diagonal", Duration::from_secs(5), point_on_the_diagonal),
        ("projective-line-orbits", Duration::from_secs(5), projective_line),
        ("resolution-properties", Duration::from_secs(300), resolution_properties),
        ("amplitude-lower-bound", Duration::from_secs(300), amplitude_lower_bound),
        ("invariant-ring-certification", Duration::from_secs(30), invariant_rings),
        ("decider-consistency", Duration::from_secs(300), decider_consistency),
    ];
    let mut failures = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if elapsed > *limit {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            } else {
                Ok(msg)
            }
        });
        match outcome {
            Ok(msg) => println!("PASS {} {name} [{elapsed:.2?}] {msg}", i + 1),
            Err(msg) => {
                failures += 1;
                println!("FAIL {} {name} [{elapsed:.2?}] {msg}", i + 1);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
