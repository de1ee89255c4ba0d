//! Minimal graded free resolutions over a connected graded algebra, their
//! totalization, and the derived fiber `M ⊗^L k` read off from generator
//! degrees.
//!
//! The resolution is built one homological stage at a time. Within a stage,
//! degrees are visited in increasing order; in each degree new generators are
//! added only for the part of the kernel not already reached by multiples of
//! lower generators. Every map therefore reduces to zero modulo `R^{>0}`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{ConnectedAlgebra, GradedRightModule, QuotientRing};
use crate::error::Result;
use crate::exact::{is_zero_vec, QMatrix, Rational, RowReducer};
use crate::module::{DegreeWindow, GradedDimVector, GradedModulePresentation};
use crate::par::{self, Execution};
use crate::poly::KPolynomial;

/// Blocks of a free module in one degree: `(generator, offset, length)`.
#[derive(Clone, Debug)]
pub struct FreeLayout {
    pub blocks: Vec<(usize, usize, usize)>,
    pub dim: usize,
}

impl FreeLayout {
    pub fn new<R: ConnectedAlgebra + ?Sized>(ring: &R, gen_degrees: &[i32], d: i32) -> Self {
        let mut blocks = Vec::new();
        let mut offset = 0;
        for (k, &g) in gen_degrees.iter().enumerate() {
            let n = ring.dim(d - g);
            if n > 0 {
                blocks.push((k, offset, n));
                offset += n;
            }
        }
        FreeLayout { blocks, dim: offset }
    }

    pub fn block_of(&self, generator: usize) -> Option<(usize, usize)> {
        self.blocks.iter().find(|b| b.0 == generator).map(|b| (b.1, b.2))
    }
}

/// `v * r` in a free module, `v` in degree `d`, `r` basis element `ri` of `R^rd`.
pub fn free_act<R: ConnectedAlgebra + ?Sized>(
    ring: &R,
    gen_degrees: &[i32],
    d: i32,
    v: &[Rational],
    rd: i32,
    ri: usize,
) -> Vec<Rational> {
    let src = FreeLayout::new(ring, gen_degrees, d);
    let dst = FreeLayout::new(ring, gen_degrees, d + rd);
    let mut out = vec![Rational::zero(); dst.dim];
    for &(k, off, len) in &src.blocks {
        let Some((doff, dlen)) = dst.block_of(k) else { continue };
        let g = gen_degrees[k];
        for i in 0..len {
            let c = &v[off + i];
            if c.is_zero() {
                continue;
            }
            let prod = ring.mul_basis(d - g, i, rd, ri);
            debug_assert_eq!(prod.len(), dlen);
            for (t, x) in prod.iter().enumerate() {
                if !x.is_zero() {
                    out[doff + t] += c * x;
                }
            }
        }
    }
    out
}

/// One free module `P_{-s}` of the resolution with the images of its generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    /// Internal degrees of the generators, nondecreasing.
    pub generator_degrees: Vec<i32>,
    /// Image of each generator: in `M^g` for stage 0, in `P_{-s+1}^g` otherwise.
    pub images: Vec<Vec<Rational>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ResolutionStatus {
    Complete,
    Truncated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ProjectiveDimension {
    ZeroModule,
    Finite(usize),
    Truncated,
}

/// Dimension data of `H(M ⊗^L k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedFiber {
    pub dims: GradedDimVector,
    /// Set when the resolution was truncated: the dims are a lower bound.
    pub lower_bound_only: bool,
}

#[derive(Clone, Debug)]
pub struct MinimalResolution {
    stages: Vec<Stage>,
    status: ResolutionStatus,
    window: DegreeWindow,
    certified: bool,
}

/// Computes a minimal free resolution of `module` over `ring`.
///
/// When both `ring` and `module` have a known top degree every stage is
/// computed in full and the result is `certified`; otherwise all data is exact
/// in internal degrees `<= window.hi`.
pub fn resolve<R, M>(ring: &R, module: &M, max_length: usize, window: DegreeWindow) -> MinimalResolution
where
    R: ConnectedAlgebra + ?Sized,
    M: GradedRightModule<R> + ?Sized,
{
    resolve_with(Execution::Auto, ring, module, max_length, window)
}

pub fn resolve_with<R, M>(
    exec: Execution,
    ring: &R,
    module: &M,
    max_length: usize,
    window: DegreeWindow,
) -> MinimalResolution
where
    R: ConnectedAlgebra + ?Sized,
    M: GradedRightModule<R> + ?Sized,
{
    let ring_top = ring.top_degree();
    let module_top = module.top_degree(ring);
    let certified = ring_top.is_some() && module_top.is_some();
    let mut stages: Vec<Stage> = Vec::new();

    let Some(m0) = module.min_degree() else {
        return MinimalResolution {
            stages,
            status: ResolutionStatus::Complete,
            window,
            certified: true,
        };
    };

    let mut status = ResolutionStatus::Complete;
    for s in 0.. {
        let (lo, hi) = if s == 0 {
            let hi = if certified { module_top.unwrap() } else { window.hi };
            (m0, hi)
        } else {
            let prev = &stages[s - 1];
            let lo = prev.generator_degrees[0] + 1;
            let hi = if certified {
                prev.generator_degrees.last().unwrap() + ring_top.unwrap()
            } else {
                window.hi
            };
            (lo, hi)
        };
        let stage = if s == 0 {
            build_stage0(ring, module, lo, hi)
        } else {
            build_stage(exec, ring, module, &stages, s, lo, hi)
        };
        if stage.generator_degrees.is_empty() {
            break;
        }
        if s > max_length {
            status = ResolutionStatus::Truncated;
            break;
        }
        stages.push(stage);
    }
    MinimalResolution {
        stages,
        status,
        window,
        certified,
    }
}

fn build_stage0<R, M>(ring: &R, module: &M, lo: i32, hi: i32) -> Stage
where
    R: ConnectedAlgebra + ?Sized,
    M: GradedRightModule<R> + ?Sized,
{
    let mut stage = Stage {
        generator_degrees: vec![],
        images: vec![],
    };
    for d in lo..=hi {
        let dim = module.dim(d);
        if dim == 0 {
            continue;
        }
        let mut span = RowReducer::new(dim);
        for (k, &g) in stage.generator_degrees.iter().enumerate() {
            for ri in 0..ring.dim(d - g) {
                span.insert(&module.act(ring, g, &stage.images[k], d - g, ri));
            }
        }
        if span.rank() == dim {
            continue;
        }
        let mut candidates = module.generator_candidates(d);
        candidates.extend((0..dim).map(|i| unit(dim, i)));
        for c in candidates {
            if span.rank() == dim {
                break;
            }
            if span.insert(&c) {
                stage.generator_degrees.push(d);
                stage.images.push(c);
            }
        }
    }
    stage
}

fn build_stage<R, M>(
    exec: Execution,
    ring: &R,
    module: &M,
    stages: &[Stage],
    s: usize,
    lo: i32,
    hi: i32,
) -> Stage
where
    R: ConnectedAlgebra + ?Sized,
    M: GradedRightModule<R> + ?Sized,
{
    let prev = &stages[s - 1];
    // kernels of the previous map only depend on finished stages
    let kernels: Vec<(i32, Vec<Vec<Rational>>)> = par::map_range(exec, lo..=hi, |d| {
        let m = stage_map_matrix(ring, module, stages, s - 1, d);
        (d, m.kernel_basis().columns())
    });
    let mut stage = Stage {
        generator_degrees: vec![],
        images: vec![],
    };
    for (d, kernel) in kernels {
        if kernel.is_empty() {
            continue;
        }
        let ambient = FreeLayout::new(ring, &prev.generator_degrees, d).dim;
        let mut span = RowReducer::new(ambient);
        for (k, &g) in stage.generator_degrees.iter().enumerate() {
            for ri in 0..ring.dim(d - g) {
                span.insert(&free_act(ring, &prev.generator_degrees, g, &stage.images[k], d - g, ri));
            }
        }
        let target_rank = kernel.len();
        for v in kernel {
            if span.rank() == target_rank {
                break;
            }
            if span.insert(&v) {
                stage.generator_degrees.push(d);
                stage.images.push(v);
            }
        }
    }
    stage
}

/// Matrix of the map out of stage `s` in internal degree `d`: into `M^d` for
/// `s = 0`, into `P_{-s+1}^d` otherwise.
fn stage_map_matrix<R, M>(ring: &R, module: &M, stages: &[Stage], s: usize, d: i32) -> QMatrix
where
    R: ConnectedAlgebra + ?Sized,
    M: GradedRightModule<R> + ?Sized,
{
    let stage = &stages[s];
    let target_dim = if s == 0 {
        module.dim(d)
    } else {
        FreeLayout::new(ring, &stages[s - 1].generator_degrees, d).dim
    };
    let mut columns = Vec::new();
    for (k, &g) in stage.generator_degrees.iter().enumerate() {
        for ri in 0..ring.dim(d - g) {
            let col = if s == 0 {
                module.act(ring, g, &stage.images[k], d - g, ri)
            } else {
                free_act(ring, &stages[s - 1].generator_degrees, g, &stage.images[k], d - g, ri)
            };
            columns.push(col);
        }
    }
    QMatrix::from_columns(target_dim, &columns)
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::from_integer(1.into());
    v
}

impl MinimalResolution {
    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    /// Number of nonzero free modules `P_0, ..., P_{-len+1}`.
    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn status(&self) -> ResolutionStatus {
        self.status
    }

    pub fn window(&self) -> DegreeWindow {
        self.window
    }

    /// Whether every stage was computed without a degree cutoff.
    pub fn is_certified(&self) -> bool {
        self.certified
    }

    pub fn generator_degrees(&self, s: usize) -> &[i32] {
        &self.stages[s].generator_degrees
    }

    pub fn projective_dimension(&self) -> ProjectiveDimension {
        match (self.status, self.stages.len()) {
            (ResolutionStatus::Truncated, _) => ProjectiveDimension::Truncated,
            (ResolutionStatus::Complete, 0) => ProjectiveDimension::ZeroModule,
            (ResolutionStatus::Complete, n) => ProjectiveDimension::Finite(n - 1),
        }
    }

    /// `H^n(M ⊗^L k)` has one basis vector per generator of `P_{-s}` in
    /// internal degree `n + s`, since the reduced differential vanishes.
    pub fn derived_fiber(&self) -> DerivedFiber {
        let mut dims = GradedDimVector::new();
        for (s, stage) in self.stages.iter().enumerate() {
            for g in &stage.generator_degrees {
                dims.add(g - s as i32, 1);
            }
        }
        DerivedFiber {
            dims,
            lower_bound_only: self.status == ResolutionStatus::Truncated,
        }
    }

    pub fn map_matrix<R, M>(&self, ring: &R, module: &M, s: usize, d: i32) -> QMatrix
    where
        R: ConnectedAlgebra + ?Sized,
        M: GradedRightModule<R> + ?Sized,
    {
        stage_map_matrix(ring, module, &self.stages, s, d)
    }

    /// Entries of `p_{-s}` for `s >= 1`: for each source generator and each
    /// target generator, the coefficient vector in `R^{g - g'}`.
    pub fn map_entries<R: ConnectedAlgebra + ?Sized>(&self, ring: &R, s: usize) -> Vec<Vec<Vec<Rational>>> {
        assert!(s >= 1 && s < self.stages.len());
        let target = &self.stages[s - 1].generator_degrees;
        let stage = &self.stages[s];
        stage
            .generator_degrees
            .iter()
            .zip(&stage.images)
            .map(|(&g, img)| {
                let layout = FreeLayout::new(ring, target, g);
                (0..target.len())
                    .map(|t| match layout.block_of(t) {
                        Some((off, len)) => img[off..off + len].to_vec(),
                        None => vec![],
                    })
                    .collect()
            })
            .collect()
    }

    /// Minimality: every entry of every `p_{-s}`, `s >= 1`, lies in `R^{>0}`.
    pub fn is_minimal<R: ConnectedAlgebra + ?Sized>(&self, ring: &R) -> bool {
        (1..self.stages.len()).all(|s| {
            let target = &self.stages[s - 1].generator_degrees;
            self.map_entries(ring, s).iter().enumerate().all(|(k, row)| {
                let g = self.stages[s].generator_degrees[k];
                row.iter()
                    .zip(target)
                    .all(|(entry, &t)| g != t || is_zero_vec(entry))
            })
        })
    }

    /// Checks exactness of `... -> P_{-1} -> P_0 -> M -> 0` in every internal
    /// degree of `window`.
    pub fn verify_exactness<R, M>(&self, ring: &R, module: &M, window: &DegreeWindow) -> std::result::Result<(), String>
    where
        R: ConnectedAlgebra + ?Sized,
        M: GradedRightModule<R> + ?Sized,
    {
        let n = self.stages.len();
        for d in window.degrees() {
            let ranks: Vec<usize> = (0..n).map(|s| self.map_matrix(ring, module, s, d).rank()).collect();
            let mdim = module.dim(d);
            if n == 0 {
                if mdim != 0 {
                    return Err(format!("empty resolution of a nonzero module in degree {d}"));
                }
                continue;
            }
            if ranks[0] != mdim {
                return Err(format!("augmentation not surjective in degree {d}"));
            }
            for s in 0..n {
                let pdim = FreeLayout::new(ring, &self.stages[s].generator_degrees, d).dim;
                let incoming = if s + 1 < n { ranks[s + 1] } else { 0 };
                if s + 1 == n && self.status == ResolutionStatus::Truncated {
                    continue;
                }
                if ranks[s] + incoming != pdim {
                    return Err(format!(
                        "not exact at P_{{-{s}}} in degree {d}: rank out {} + rank in {incoming} != {pdim}",
                        ranks[s]
                    ));
                }
            }
        }
        Ok(())
    }

    /// The total complex `tot(P)` restricted to total degrees in `window`.
    pub fn totalize<R, M>(&self, ring: &R, module: &M, window: DegreeWindow) -> TotalComplex
    where
        R: ConnectedAlgebra + ?Sized,
        M: GradedRightModule<R> + ?Sized,
    {
        let mut terms = BTreeMap::new();
        let span = window.lo..=window.hi + 1;
        for n in span.clone() {
            let parts: Vec<(usize, usize)> = (0..self.stages.len())
                .map(|s| (s, FreeLayout::new(ring, &self.stages[s].generator_degrees, n + s as i32).dim))
                .collect();
            terms.insert(n, parts);
        }
        let mut differentials = BTreeMap::new();
        let mut augmentations = BTreeMap::new();
        for n in window.degrees() {
            let src = &terms[&n];
            let dst = &terms[&(n + 1)];
            let rows: usize = dst.iter().map(|p| p.1).sum();
            let cols: usize = src.iter().map(|p| p.1).sum();
            let mut m = QMatrix::zeros(rows, cols);
            let mut col_off = 0;
            for &(s, dim) in src {
                if s >= 1 && dim > 0 {
                    // component P_{-s}^{n+s} -> P_{-s+1}^{n+s}; the vertical part vanishes
                    let block = self.map_matrix(ring, module, s, n + s as i32);
                    let row_off: usize = dst.iter().take_while(|p| p.0 < s - 1).map(|p| p.1).sum();
                    for i in 0..block.rows() {
                        for j in 0..block.cols() {
                            m[(row_off + i, col_off + j)] = block[(i, j)].clone();
                        }
                    }
                }
                col_off += dim;
            }
            differentials.insert(n, m);
            let aug = if self.stages.is_empty() {
                QMatrix::zeros(module.dim(n), cols)
            } else {
                let block = self.map_matrix(ring, module, 0, n);
                let mut a = QMatrix::zeros(block.rows(), cols);
                for i in 0..block.rows() {
                    for j in 0..block.cols() {
                        a[(i, j)] = block[(i, j)].clone();
                    }
                }
                a
            };
            augmentations.insert(n, aug);
        }
        let valid_hi = if self.certified {
            window.hi
        } else {
            (self.window.hi - self.stages.len() as i32).min(window.hi)
        };
        TotalComplex {
            window,
            valid_hi,
            dims: terms.iter().map(|(n, p)| (*n, p.iter().map(|x| x.1).sum())).collect(),
            differentials,
            augmentations,
        }
    }
}

/// `tot(P)` in a window of total degrees, with the augmentation `tot(P) -> M`.
#[derive(Clone, Debug)]
pub struct TotalComplex {
    pub window: DegreeWindow,
    /// Highest total degree in which the complex is fully known.
    pub valid_hi: i32,
    pub dims: BTreeMap<i32, usize>,
    /// `d^n : tot^n -> tot^{n+1}` for `n` in the window.
    pub differentials: BTreeMap<i32, QMatrix>,
    /// `tot^n -> M^n`, nonzero only on the `P_0` summand.
    pub augmentations: BTreeMap<i32, QMatrix>,
}

impl TotalComplex {
    pub fn dim(&self, n: i32) -> usize {
        self.dims.get(&n).copied().unwrap_or(0)
    }

    /// Cohomology dimensions for total degrees `window.lo + 1 ..= window.hi`.
    pub fn cohomology(&self) -> GradedDimVector {
        let mut out = GradedDimVector::new();
        for n in self.window.lo + 1..=self.window.hi {
            let out_rank = self.differentials[&n].rank();
            let in_rank = self.differentials[&(n - 1)].rank();
            out.add(n, self.dim(n) - out_rank - in_rank);
        }
        out
    }

    /// Whether `d ∘ d = 0` and the augmentation is a chain map.
    pub fn is_complex(&self) -> bool {
        self.window.degrees().all(|n| {
            let next_ok = match self.differentials.get(&(n + 1)) {
                Some(next) => next.mul(&self.differentials[&n]).is_zero(),
                None => true,
            };
            let aug_ok = match self.augmentations.get(&(n + 1)) {
                Some(aug) => aug.mul(&self.differentials[&n]).is_zero(),
                None => true,
            };
            next_ok && aug_ok
        })
    }
}

/// Minimal resolution of a presented `K`-module over `K` itself.
pub fn minimal_resolution(
    module: &GradedModulePresentation,
    max_length: usize,
    window: DegreeWindow,
) -> Result<MinimalResolution> {
    let ring = QuotientRing::polynomial(module.ring().clone());
    Ok(resolve(&ring, module, max_length, window))
}

pub fn derived_fiber(module: &GradedModulePresentation, window: DegreeWindow, max_length: usize) -> Result<DerivedFiber> {
    Ok(minimal_resolution(module, max_length, window)?.derived_fiber())
}

/// Projective dimension, run to length `s + 1` by default (`s` = number of
/// ring generators).
pub fn projective_dimension(
    module: &GradedModulePresentation,
    max_length: Option<usize>,
    window: DegreeWindow,
) -> Result<ProjectiveDimension> {
    let len = max_length.unwrap_or(module.ring().num_vars() + 1);
    Ok(minimal_resolution(module, len, window)?.projective_dimension())
}

/// The maps `p_{-s}` of a resolution over `K/I` as matrices of polynomials
/// (rows: source generators, columns: target generators).
pub fn map_polynomials(res: &MinimalResolution, ring: &QuotientRing, s: usize) -> Vec<Vec<KPolynomial>> {
    let target = &res.stages()[s - 1].generator_degrees;
    let sources = &res.stages()[s].generator_degrees;
    res.map_entries(ring, s)
        .iter()
        .zip(sources)
        .map(|(row, &g)| {
            row.iter()
                .zip(target)
                .map(|(coeffs, &t)| {
                    KPolynomial::from_terms(
                        coeffs
                            .iter()
                            .enumerate()
                            .map(|(i, c)| (ring.basis_monomial(g - t, i), c.clone())),
                    )
                })
                .collect()
        })
        .collect()
}
