#![allow(dead_code)]

use std::sync::Arc;

use dgsmooth::algebra::QuotientRing;
use dgsmooth::dga::{CohomologyReport, DgAlgebraPresentation, DgBimodulePresentation, TriangularPresentation};
use dgsmooth::exact::{QMatrix, Rational};
use dgsmooth::module::{DegreeWindow, Element, GradedDimVector, GradedModulePresentation, ModuleGenerator};
use dgsmooth::poly::{GradedPolyRing, KPolynomial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn w(lo: i32, hi: i32) -> DegreeWindow {
    DegreeWindow::new(lo, hi).unwrap()
}

pub fn ring(gens: &[(&str, i32)]) -> GradedPolyRing {
    GradedPolyRing::new(gens.iter().map(|&(n, d)| (n, d))).unwrap()
}

pub fn qx() -> GradedPolyRing {
    ring(&[("x", 2)])
}

/// `Q[x]/(x^n)` as a commutative ring.
pub fn truncated_ring(n: u32) -> QuotientRing {
    let r = qx();
    QuotientRing::new(r.clone(), vec![r.parse(&format!("x^{n}")).unwrap()]).unwrap()
}

/// `Q[X]/(X^n)` as a dg algebra over `Q`.
pub fn truncated_over_field(n: u32) -> DgAlgebraPresentation {
    DgAlgebraPresentation::from_quotient_ring(&truncated_ring(n)).unwrap()
}

/// `Q[x]/(x^n)` as a dg algebra over `Q[x]`.
pub fn truncated_over_base(n: u32) -> DgAlgebraPresentation {
    let r = qx();
    DgAlgebraPresentation::cyclic(r.clone(), vec![r.parse(&format!("x^{n}")).unwrap()]).unwrap()
}

/// `Tor_p^K(M, Q)` in internal degree `t` from the Koszul complex
/// `M ⊗ Λ(e_1, ..., e_s)`, `|e_i| = |x_i|`, built from module arithmetic only.
pub fn koszul_tor(m: &GradedModulePresentation, p: usize, t: i32) -> usize {
    let s = m.ring().num_vars();
    let degrees = m.ring().degrees();
    let subsets = |k: usize| -> Vec<Vec<usize>> {
        (0u32..1 << s)
            .filter(|mask| mask.count_ones() as usize == k)
            .map(|mask| (0..s).filter(|i| mask & (1 << i) != 0).collect())
            .collect()
    };
    let block_degree = |set: &[usize]| t - set.iter().map(|&i| degrees[i]).sum::<i32>();
    // layout of K_k in internal degree t
    let layout = |k: usize| -> (Vec<(Vec<usize>, usize, usize)>, usize) {
        let mut out = Vec::new();
        let mut off = 0;
        for set in subsets(k) {
            let dim = m.dim(block_degree(&set));
            out.push((set, off, dim));
            off += dim;
        }
        (out, off)
    };
    let boundary = |k: usize| -> QMatrix {
        // K_k -> K_{k-1}
        let (src, src_dim) = layout(k);
        let (dst, dst_dim) = layout(k - 1);
        let mut columns = Vec::with_capacity(src_dim);
        for (set, _, dim) in &src {
            let d = block_degree(set);
            for b in 0..*dim {
                let mut v = vec![Rational::from_integer(0.into()); b];
                v.push(Rational::from_integer(1.into()));
                v.resize(*dim, Rational::from_integer(0.into()));
                let mut col = vec![Rational::from_integer(0.into()); dst_dim];
                for (pos, &i) in set.iter().enumerate() {
                    let smaller: Vec<usize> = set.iter().copied().filter(|&j| j != i).collect();
                    let (_, off, _) = dst.iter().find(|(s2, _, _)| *s2 == smaller).unwrap();
                    let mut mono = vec![0; s];
                    mono[i] = 1;
                    let image = m.act_by_monomial(d, &v, &mono);
                    let sign = if pos % 2 == 0 { 1 } else { -1 };
                    for (k2, x) in image.iter().enumerate() {
                        col[off + k2] += x * Rational::from_integer(sign.into());
                    }
                }
                columns.push(col);
            }
        }
        QMatrix::from_columns(dst_dim, &columns)
    };
    let (_, dim_p) = layout(p);
    if dim_p == 0 {
        return 0;
    }
    let rank_out = if p == 0 { 0 } else { boundary(p).rank() };
    let rank_in = if p + 1 > s { 0 } else { boundary(p + 1).rank() };
    dim_p - rank_out - rank_in
}

fn random_poly(rng: &mut ChaCha8Rng, r: &GradedPolyRing, degree: i32) -> KPolynomial {
    let monos = r.monomials_of_degree(degree);
    let mut p = KPolynomial::zero();
    for m in monos {
        let c: i64 = rng.gen_range(-2..=2);
        if c != 0 {
            p.add_term(m, Rational::from_integer(c.into()));
        }
    }
    p
}

/// The two rings used for random modules: `Q[x]` and `Q[x,y]`.
pub fn random_ring(rng: &mut ChaCha8Rng) -> GradedPolyRing {
    match rng.gen_range(0..3) {
        0 => ring(&[("x", 2)]),
        1 => ring(&[("x", 2), ("y", 2)]),
        _ => ring(&[("x", 2), ("y", 4)]),
    }
}

/// A random module over `Q[x]` or `Q[x,y]` with at most 3 generators and
/// at most 3 homogeneous relations.
pub fn random_module(seed: u64) -> GradedModulePresentation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = random_ring(&mut rng);
    let ngens = rng.gen_range(1..=3);
    let gens: Vec<ModuleGenerator> = (0..ngens)
        .map(|i| ModuleGenerator::new(format!("e{i}"), rng.gen_range(-2..=4)))
        .collect();
    let nrels = rng.gen_range(0..=3);
    let mut rels: Vec<Element> = Vec::new();
    for _ in 0..nrels {
        let target = gens.iter().map(|g| g.degree).max().unwrap() + 2 * rng.gen_range(0..=2);
        let rel: Element = gens.iter().map(|g| random_poly(&mut rng, &r, target - g.degree)).collect();
        if rel.iter().any(|p| !p.is_zero()) {
            rels.push(rel);
        }
    }
    GradedModulePresentation::new(r, gens, rels).unwrap()
}

/// A finite-dimensional `Q[x,y]/I` with `x^a, y^b ∈ I` plus up to two
/// random homogeneous relations.
pub fn random_finite_algebra(seed: u64) -> QuotientRing {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = ring(&[("x", 2), ("y", 2)]);
    let a = rng.gen_range(1..=3);
    let b = rng.gen_range(1..=3);
    let mut ideal = vec![r.parse(&format!("x^{a}")).unwrap(), r.parse(&format!("y^{b}")).unwrap()];
    for _ in 0..rng.gen_range(0..=2) {
        let deg = 2 * rng.gen_range(1..=3);
        let p = random_poly(&mut rng, &r, deg);
        if !p.is_zero() {
            ideal.push(p);
        }
    }
    QuotientRing::new(r, ideal).unwrap()
}

pub fn report(dims: GradedDimVector, window: DegreeWindow) -> CohomologyReport {
    CohomologyReport { dims, window, complete: true }
}

/// `[Q 0; V Q]` with `V` of dimension `dim` in degree 0, or `V` with one
/// basis vector in each degree `0..=hi`, flagged as unbounded above.
pub fn kvk(dim: usize, unbounded_to: Option<i32>) -> TriangularPresentation {
    let q = Arc::new(DgAlgebraPresentation::base(GradedPolyRing::field()));
    let gens: Vec<ModuleGenerator> = match unbounded_to {
        None => (0..dim).map(|i| ModuleGenerator::new(format!("v{i}"), 0)).collect(),
        Some(hi) => (0..=hi).map(|d| ModuleGenerator::new(format!("v{d}"), d)).collect(),
    };
    let m = GradedModulePresentation::new(GradedPolyRing::field(), gens, vec![]).unwrap();
    let n = DgBimodulePresentation::from_parts(q.clone(), q, m, vec![], vec![], vec![])
        .unwrap()
        .with_unbounded_above(unbounded_to.is_some());
    TriangularPresentation::new(n).unwrap()
}

/// `[Q 0; Q Q[X]]` over `Q[X]`: upper-left `Q = Q[X]/(X)`, lower-right `Q[X]`.
pub fn point_on_the_line() -> TriangularPresentation {
    let r = qx();
    let b = Arc::new(DgAlgebraPresentation::cyclic(r.clone(), vec![r.parse("x").unwrap()]).unwrap());
    let a = Arc::new(DgAlgebraPresentation::base(r.clone()));
    let m = GradedModulePresentation::cyclic(r.clone(), vec![r.parse("x").unwrap()]).unwrap();
    let n = DgBimodulePresentation::from_parts(a, b, m, vec![], vec![], vec![]).unwrap();
    TriangularPresentation::new(n).unwrap()
}

/// Writes `contents` to a fresh file in `dir`.
pub fn write_file(dir: &tempfile::TempDir, name: &str, contents: &str) -> std::path::PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

/// A semi-free module over `A = Q[X]/(X^n)` (over `Q`) on generators
/// `f_0, ..., f_{r-1}` with `d f_i = c_i f_{i-1} X^{m_i}`, `m_i >= 1`.
/// Consecutive links satisfy `m_i + m_{i+1} >= n` so that `d^2 = 0`.
pub fn random_filtered_module(
    a: &Arc<DgAlgebraPresentation>,
    n: u32,
    seed: u64,
) -> dgsmooth::dga::DgModulePresentation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = rng.gen_range(1..=4usize);
    let na = a.num_generators();
    let zero = || vec![KPolynomial::zero(); na];
    let mut degrees = vec![rng.gen_range(-3..=3)];
    let mut alpha = vec![vec![zero(); r]; r];
    let mut prev_m = n; // no constraint for the first link
    for i in 1..r {
        let mut m = rng.gen_range(1..n);
        let mut c: i64 = rng.gen_range(-2..=2);
        if prev_m + m < n {
            m = n - prev_m;
        }
        if m >= n {
            c = 0;
            m = 1;
        }
        degrees.push(degrees[i - 1] + 2 * m as i32 - 1);
        if c != 0 {
            let mut e = zero();
            e[m as usize] = KPolynomial::constant(&GradedPolyRing::field(), Rational::from_integer(c.into()));
            alpha[i][i - 1] = e;
            prev_m = m;
        } else {
            prev_m = n;
        }
    }
    dgsmooth::dga::DgModulePresentation::semi_free(a, &degrees, &alpha).unwrap()
}

/// Diagonal test for a finite-dimensional `A = K/I` over `Q`: the minimal
/// resolution of `A` over `A ⊗ A` can only prove perfectness; a definite
/// negative comes from the amplitude obstruction, since `H(A ⊗ A)` has twice
/// the amplitude of `A`.
pub fn diagonal_verdict(a: &QuotientRing, max_length: usize) -> dgsmooth::smoothness::Verdict {
    use dgsmooth::algebra::ConnectedAlgebra;
    use dgsmooth::dga::{amplitude_obstruction_from_reports, AmplitudeVerdict};
    use dgsmooth::smoothness::{decide_diagonal_tor, Verdict};

    let top = a.top_degree().expect("finite-dimensional algebra");
    let tor = decide_diagonal_tor(a, max_length, w(-4, 4 * top.max(1))).unwrap();
    if tor.verdict != Verdict::Undecided {
        return tor.verdict;
    }
    let env = a.tensor(a);
    let window = w(0, 2 * top + 2);
    let dims = |r: &QuotientRing| GradedDimVector::from_pairs(window.degrees().map(|d| (d, r.dim(d))));
    match amplitude_obstruction_from_reports(&report(dims(&env), window), &report(dims(a), window)) {
        Ok(AmplitudeVerdict::NotPerfect { .. }) => Verdict::NotSmooth,
        _ => Verdict::Undecided,
    }
}

pub fn field_verdict(a: &QuotientRing) -> dgsmooth::smoothness::Verdict {
    use dgsmooth::algebra::ConnectedAlgebra;
    let t = DgAlgebraPresentation::from_quotient_ring(a).unwrap();
    let top = a.top_degree().unwrap();
    dgsmooth::smoothness::decide_smooth_over_field(&t, w(-4, 4 * top.max(1))).unwrap().verdict
}
