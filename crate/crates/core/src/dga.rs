//! Finitely presented dg algebras, dg modules and bimodules over the base `K`.
//!
//! Everything is finite as a `K`-module: a dg algebra is a presented graded
//! `K`-module with structure constants for the product and the images of the
//! generators under the differential. Since `K` sits in even degrees and has
//! zero differential, products and differentials are `K`-linear without signs.
//!
//! Sign conventions:
//! - Leibniz: `d(ab) = d(a) b + (-1)^{|a|} a d(b)`, likewise for module actions.
//! - Tensor product: `(a ⊗ b)(a' ⊗ b') = (-1)^{|b||a'|} aa' ⊗ bb'`.
//! - Opposite algebra: `a ·op b = (-1)^{|a||b|} b a`.
//! - Diagonal module over `A ⊗ A^op`: `m · (a ⊗ b) = (-1)^{|b|(|m|+|a|)} b m a`.
//! - Shift `[n]M`: generators move to degree `g - n`, differential picks up `(-1)^n`.

#![allow(clippy::needless_range_loop)]

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{ConnectedAlgebra, GradedRightModule, QuotientRing};
use crate::error::{Error, Result};
use crate::exact::{is_zero_vec, QMatrix, Rational, RowReducer};
use crate::module::{DegreeWindow, Element, GradedDimVector, GradedModulePresentation, ModuleGenerator};
use crate::par::DegreeCache;
use crate::poly::{GradedPolyRing, KPolynomial};

fn sign(exp: i32) -> Rational {
    if exp.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

fn zero_elem(n: usize) -> Element {
    vec![KPolynomial::zero(); n]
}

fn add_into(out: &mut Element, other: &[KPolynomial], c: &Rational) {
    for (o, p) in out.iter_mut().zip(other) {
        if !p.is_zero() {
            *o = o.add(&p.scale(c));
        }
    }
}

/// `Σ_j elem_j · images_j`: a `K`-linear map given on generators.
fn apply_linear(elem: &[KPolynomial], images: &[Element], n: usize) -> Element {
    let mut out = zero_elem(n);
    for (p, img) in elem.iter().zip(images) {
        if p.is_zero() {
            continue;
        }
        for (o, q) in out.iter_mut().zip(img) {
            if !q.is_zero() {
                *o = o.add(&p.mul(q));
            }
        }
    }
    out
}

/// `K`-bilinear extension of a table indexed by pairs of generators.
fn bilinear(a: &[KPolynomial], b: &[KPolynomial], table: &[Vec<Element>], n: usize) -> Element {
    let mut out = zero_elem(n);
    for (i, p) in a.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        for (j, q) in b.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let pq = p.mul(q);
            for (o, r) in out.iter_mut().zip(&table[i][j]) {
                if !r.is_zero() {
                    *o = o.add(&pq.mul(r));
                }
            }
        }
    }
    out
}

fn is_zero_in(m: &GradedModulePresentation, e: &[KPolynomial]) -> Result<bool> {
    match m.degree_of(e).map_err(Error::InvalidPresentation)? {
        None => Ok(true),
        Some(d) => Ok(is_zero_vec(&m.normal_form(d, e))),
    }
}

fn sub(a: &[KPolynomial], b: &[KPolynomial]) -> Element {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

fn check_degree(m: &GradedModulePresentation, e: &[KPolynomial], expected: i32, what: impl Fn() -> String) -> Result<()> {
    match m.degree_of(e) {
        Err(detail) => Err(Error::InvalidPresentation(format!("{}: {detail}", what()))),
        Ok(Some(d)) if d != expected => Err(Error::InvalidPresentation(format!(
            "{} has degree {d}, expected {expected}",
            what()
        ))),
        _ => Ok(()),
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidPresentation(msg()))
    }
}

/// Cohomology dimensions in a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub dims: GradedDimVector,
    pub window: DegreeWindow,
    /// Whether the window is known to contain all of the cohomology.
    pub complete: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Amplitude {
    ZeroModule,
    Bounded(u32),
    Unbounded,
}

impl fmt::Display for Amplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Amplitude::ZeroModule => f.write_str("ZERO_MODULE"),
            Amplitude::Bounded(n) => write!(f, "{n}"),
            Amplitude::Unbounded => f.write_str("UNBOUNDED"),
        }
    }
}

/// Amplitude of the cohomology in a report. An incomplete report whose
/// support reaches the top of its window counts as unbounded.
pub fn amplitude(r: &CohomologyReport) -> Amplitude {
    match (r.dims.min_degree(), r.dims.max_degree()) {
        (Some(lo), Some(hi)) => {
            if !r.complete && hi >= r.window.hi {
                Amplitude::Unbounded
            } else {
                Amplitude::Bounded((hi - lo) as u32)
            }
        }
        _ => Amplitude::ZeroModule,
    }
}

/// A presented `K`-module with a `K`-linear differential of degree +1.
pub trait DgObject {
    fn underlying(&self) -> &GradedModulePresentation;

    /// Image of each generator under the differential.
    fn differential_images(&self) -> &[Element];

    fn differential_cache(&self) -> &DegreeCache<QMatrix>;

    /// Marks a presentation that truncates an object whose cohomology
    /// continues above the presented degrees.
    fn unbounded_above(&self) -> bool {
        false
    }

    fn d(&self, e: &[KPolynomial]) -> Element {
        let m = self.underlying();
        apply_linear(e, self.differential_images(), m.num_generators())
    }

    /// `d : X^deg -> X^{deg+1}` on the `Q`-bases.
    fn differential_matrix(&self, deg: i32) -> Arc<QMatrix> {
        self.differential_cache().get_or_insert_with(deg, || {
            let m = self.underlying();
            let cols: Vec<Vec<Rational>> = (0..m.dim(deg))
                .map(|i| m.normal_form(deg + 1, &self.d(&m.basis_element(deg, i))))
                .collect();
            QMatrix::from_columns(m.dim(deg + 1), &cols)
        })
    }

    fn cohomology_dim(&self, deg: i32) -> usize {
        let n = self.underlying().dim(deg);
        n - self.differential_matrix(deg).rank() - self.differential_matrix(deg - 1).rank()
    }

    /// Window extended to cover every degree where the presentation can be
    /// nonzero, when that range is known.
    fn certified_window(&self, window: DegreeWindow) -> DegreeWindow {
        let m = self.underlying();
        let mut w = window;
        if let Some(lo) = m.min_generator_degree() {
            w.lo = w.lo.min(lo);
        }
        if !self.unbounded_above() {
            if let Some(top) = m.finite_top_degree() {
                w.hi = w.hi.max(top);
            }
        }
        w
    }

    fn cohomology(&self, window: DegreeWindow) -> CohomologyReport {
        let m = self.underlying();
        let dims = GradedDimVector::from_pairs(window.degrees().map(|d| (d, self.cohomology_dim(d))));
        let complete = !self.unbounded_above()
            && match (m.min_generator_degree(), m.finite_top_degree()) {
                (None, _) => true,
                (Some(lo), Some(top)) => window.lo <= lo && window.hi >= top,
                _ => false,
            };
        CohomologyReport { dims, window, complete }
    }
}

/// Cohomology of a dg algebra, module or bimodule in a window.
pub fn cohomology<X: DgObject + ?Sized>(x: &X, window: DegreeWindow) -> CohomologyReport {
    x.cohomology(window)
}

/// Finitely presented dg `K`-algebra.
#[derive(Clone, Debug)]
pub struct DgAlgebraPresentation {
    underlying: GradedModulePresentation,
    unit: usize,
    product: Vec<Vec<Element>>,
    differential: Vec<Element>,
    dcache: DegreeCache<QMatrix>,
}

impl DgAlgebraPresentation {
    /// Builds and validates all axioms on generators.
    pub fn new(
        underlying: GradedModulePresentation,
        unit: usize,
        product: Vec<Vec<Element>>,
        differential: Vec<Element>,
    ) -> Result<Self> {
        let a = Self::new_unchecked(underlying, unit, product, differential)?;
        a.validate()?;
        Ok(a)
    }

    /// Checks shapes and degrees only.
    pub fn new_unchecked(
        underlying: GradedModulePresentation,
        unit: usize,
        product: Vec<Vec<Element>>,
        differential: Vec<Element>,
    ) -> Result<Self> {
        let n = underlying.num_generators();
        let gens = underlying.generators();
        ensure(unit < n, || "unit generator missing".into())?;
        ensure(gens[unit].degree == 0, || format!("unit {} must have degree 0", gens[unit].name))?;
        ensure(product.len() == n && product.iter().all(|r| r.len() == n), || {
            "product table has the wrong shape".into()
        })?;
        ensure(differential.len() == n, || "differential table has the wrong shape".into())?;
        for i in 0..n {
            ensure(differential[i].len() == n, || "differential image has the wrong length".into())?;
            check_degree(&underlying, &differential[i], gens[i].degree + 1, || {
                format!("d({})", gens[i].name)
            })?;
            for j in 0..n {
                ensure(product[i][j].len() == n, || "product value has the wrong length".into())?;
                check_degree(&underlying, &product[i][j], gens[i].degree + gens[j].degree, || {
                    format!("{}*{}", gens[i].name, gens[j].name)
                })?;
            }
        }
        Ok(DgAlgebraPresentation {
            underlying,
            unit,
            product,
            differential,
            dcache: DegreeCache::new(),
        })
    }

    /// Fills in the unit rule `1·a = a·1 = a`, zero for unlisted products and
    /// zero differential where none is given.
    pub fn from_parts(
        underlying: GradedModulePresentation,
        unit: usize,
        products: Vec<(usize, usize, Element)>,
        differential: Vec<(usize, Element)>,
    ) -> Result<Self> {
        let n = underlying.num_generators();
        let mut table: Vec<Vec<Option<Element>>> = vec![vec![None; n]; n];
        for (i, j, v) in products {
            table[i][j] = Some(v);
        }
        let product = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        table[i][j].take().unwrap_or_else(|| {
                            if i == unit {
                                underlying.generator_element(j)
                            } else if j == unit {
                                underlying.generator_element(i)
                            } else {
                                zero_elem(n)
                            }
                        })
                    })
                    .collect()
            })
            .collect();
        let mut diff = vec![zero_elem(n); n];
        for (i, v) in differential {
            diff[i] = v;
        }
        Self::new(underlying, unit, product, diff)
    }

    /// `K` itself.
    pub fn base(ring: GradedPolyRing) -> Self {
        let m = GradedModulePresentation::free_rank_one(ring);
        let one = m.generator_element(0);
        Self::new_unchecked(m, 0, vec![vec![one]], vec![zero_elem(1)]).expect("base algebra is valid")
    }

    /// `K / (polys)` as a dg `K`-algebra with zero differential.
    pub fn cyclic(ring: GradedPolyRing, polys: Vec<KPolynomial>) -> Result<Self> {
        let m = GradedModulePresentation::cyclic(ring, polys)?;
        let one = m.generator_element(0);
        Self::new_unchecked(m, 0, vec![vec![one]], vec![zero_elem(1)])
    }

    /// A finite-dimensional `K/I` as a dg algebra over `Q` on its monomial basis.
    pub fn from_quotient_ring(q: &QuotientRing) -> Result<Self> {
        let top = q.top_degree().ok_or_else(|| {
            Error::InvalidPresentation(format!("{} is not finite dimensional", q.describe()))
        })?;
        let mut gens = Vec::new();
        let mut pos = Vec::new();
        for d in 0..=top {
            for i in 0..q.dim(d) {
                pos.push((d, i, gens.len()));
                gens.push(ModuleGenerator::new(format!("b{}", gens.len()), d));
            }
        }
        let n = gens.len();
        let index = |d: i32, i: usize| pos.iter().find(|p| p.0 == d && p.1 == i).map(|p| p.2);
        let field = GradedPolyRing::field();
        let mut product = vec![vec![zero_elem(n); n]; n];
        for &(da, ia, a) in &pos {
            for &(db, ib, b) in &pos {
                let v = q.mul_basis(da, ia, db, ib);
                for (k, c) in v.iter().enumerate() {
                    if !c.is_zero() {
                        let t = index(da + db, k).expect("product lands in a presented degree");
                        product[a][b][t] = KPolynomial::constant(&field, c.clone());
                    }
                }
            }
        }
        let underlying = GradedModulePresentation::new(field, gens, vec![])?;
        Self::new_unchecked(underlying, 0, product, vec![zero_elem(n); n])
    }

    pub fn base_ring(&self) -> &GradedPolyRing {
        self.underlying.ring()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn product_table(&self) -> &[Vec<Element>] {
        &self.product
    }

    pub fn num_generators(&self) -> usize {
        self.underlying.num_generators()
    }

    pub fn generator_degree(&self, i: usize) -> i32 {
        self.underlying.generators()[i].degree
    }

    pub fn unit_element(&self) -> Element {
        self.underlying.generator_element(self.unit)
    }

    pub fn mul(&self, a: &[KPolynomial], b: &[KPolynomial]) -> Element {
        bilinear(a, b, &self.product, self.num_generators())
    }

    /// Largest degree among base generators, algebra generators, relations
    /// and differential images.
    pub fn max_presentation_degree(&self) -> i32 {
        let diff = self
            .differential
            .iter()
            .zip(self.underlying.generators())
            .filter(|(e, _)| e.iter().any(|p| !p.is_zero()))
            .map(|(_, g)| g.degree + 1)
            .max()
            .unwrap_or(0);
        self.underlying.max_presentation_degree().max(diff)
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.underlying;
        let n = self.num_generators();
        let names: Vec<&str> = m.generators().iter().map(|g| g.name.as_str()).collect();
        let e = |i: usize| m.generator_element(i);
        let one = self.unit_element();
        for i in 0..n {
            ensure(is_zero_in(m, &sub(&self.mul(&one, &e(i)), &e(i)))?, || {
                format!("unit does not act as identity on {} from the left", names[i])
            })?;
            ensure(is_zero_in(m, &sub(&self.mul(&e(i), &one), &e(i)))?, || {
                format!("unit does not act as identity on {} from the right", names[i])
            })?;
            ensure(is_zero_in(m, &self.d(&self.d(&e(i))))?, || format!("d^2({}) != 0", names[i]))?;
        }
        for (r, rel) in m.relations().iter().enumerate() {
            ensure(is_zero_in(m, &self.d(rel))?, || format!("d does not preserve relation {r}"))?;
            for k in 0..n {
                ensure(is_zero_in(m, &self.mul(rel, &e(k)))?, || {
                    format!("relation {r} times {} is not a relation", names[k])
                })?;
                ensure(is_zero_in(m, &self.mul(&e(k), rel))?, || {
                    format!("{} times relation {r} is not a relation", names[k])
                })?;
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ab = &self.product[i][j];
                let mut rhs = self.mul(&self.d(&e(i)), &e(j));
                add_into(&mut rhs, &self.mul(&e(i), &self.d(&e(j))), &sign(self.generator_degree(i)));
                ensure(is_zero_in(m, &sub(&self.d(ab), &rhs))?, || {
                    format!("Leibniz rule fails on {}, {}", names[i], names[j])
                })?;
                for k in 0..n {
                    let left = self.mul(ab, &e(k));
                    let right = self.mul(&e(i), &self.product[j][k]);
                    ensure(is_zero_in(m, &sub(&left, &right))?, || {
                        format!("product not associative on {}, {}, {}", names[i], names[j], names[k])
                    })?;
                }
            }
        }
        Ok(())
    }

    pub fn has_zero_differential(&self) -> bool {
        self.differential.iter().all(|e| is_zero_in(&self.underlying, e).unwrap_or(false))
    }

    /// Whether this is `K` itself: one generator, the unit, no relations,
    /// zero differential.
    pub fn is_base(&self) -> bool {
        self.num_generators() == 1
            && self.underlying.relations().iter().all(|r| r.iter().all(|p| p.is_zero()))
            && self.has_zero_differential()
    }

    /// `A^d = 0` for `d < 0` and `A^0 = Q`, checked in the window.
    pub fn is_connected_in(&self, window: &DegreeWindow) -> bool {
        self.underlying.dim(0) == 1 && (window.lo.min(self.underlying.min_generator_degree().unwrap_or(0))..0).all(|d| self.underlying.dim(d) == 0)
    }

    /// The commutative ring `K / (relations)` when the algebra is cyclic on
    /// its unit with zero differential.
    pub fn as_quotient_ring(&self) -> Option<QuotientRing> {
        if self.num_generators() != 1 || !self.has_zero_differential() {
            return None;
        }
        let ideal = self.underlying.relations().iter().map(|r| r[0].clone()).collect();
        QuotientRing::new(self.base_ring().clone(), ideal).ok()
    }

    /// `A ⊗_K B` with the Koszul sign rule.
    pub fn tensor_over_base(&self, other: &DgAlgebraPresentation) -> Result<DgAlgebraPresentation> {
        if self.base_ring() != other.base_ring() {
            return Err(Error::InconsistentInput("tensor factors have different base rings".into()));
        }
        let (na, nb) = (self.num_generators(), other.num_generators());
        let ga = self.underlying.generators();
        let gb = other.underlying.generators();
        let idx = |i: usize, j: usize| i * nb + j;
        let n = na * nb;
        let gens: Vec<ModuleGenerator> = (0..na)
            .flat_map(|i| (0..nb).map(move |j| (i, j)))
            .map(|(i, j)| ModuleGenerator::new(format!("{}_{}", ga[i].name, gb[j].name), ga[i].degree + gb[j].degree))
            .collect();
        // a ⊗ b for elements given over the two generator sets
        let pair = |a: &[KPolynomial], b: &[KPolynomial]| {
            let mut out = zero_elem(n);
            for (i, p) in a.iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                for (j, q) in b.iter().enumerate() {
                    if !q.is_zero() {
                        out[idx(i, j)] = out[idx(i, j)].add(&p.mul(q));
                    }
                }
            }
            out
        };
        let mut relations = Vec::new();
        for rel in self.underlying.relations() {
            for j in 0..nb {
                relations.push(pair(rel, &other.underlying.generator_element(j)));
            }
        }
        for rel in other.underlying.relations() {
            for i in 0..na {
                relations.push(pair(&self.underlying.generator_element(i), rel));
            }
        }
        let mut product = vec![vec![zero_elem(n); n]; n];
        for i in 0..na {
            for j in 0..nb {
                for k in 0..na {
                    for l in 0..nb {
                        let s = sign(gb[j].degree * ga[k].degree);
                        let v = pair(&self.product[i][k], &other.product[j][l]);
                        product[idx(i, j)][idx(k, l)] = v.iter().map(|p| p.scale(&s)).collect();
                    }
                }
            }
        }
        let mut differential = vec![zero_elem(n); n];
        for i in 0..na {
            for j in 0..nb {
                let mut v = pair(&self.differential[i], &other.underlying.generator_element(j));
                let w = pair(&self.underlying.generator_element(i), &other.differential[j]);
                add_into(&mut v, &w, &sign(ga[i].degree));
                differential[idx(i, j)] = v;
            }
        }
        let underlying = GradedModulePresentation::new(self.base_ring().clone(), gens, relations)?;
        Self::new_unchecked(underlying, idx(self.unit, other.unit), product, differential)
    }

    pub fn opposite(&self) -> DgAlgebraPresentation {
        let n = self.num_generators();
        let product = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let s = sign(self.generator_degree(i) * self.generator_degree(j));
                        self.product[j][i].iter().map(|p| p.scale(&s)).collect()
                    })
                    .collect()
            })
            .collect();
        Self::new_unchecked(self.underlying.clone(), self.unit, product, self.differential.clone())
            .expect("opposite keeps shapes and degrees")
    }
}

impl DgObject for DgAlgebraPresentation {
    fn underlying(&self) -> &GradedModulePresentation {
        &self.underlying
    }

    fn differential_images(&self) -> &[Element] {
        &self.differential
    }

    fn differential_cache(&self) -> &DegreeCache<QMatrix> {
        &self.dcache
    }
}

/// A dg algebra with zero differential is a connected graded algebra once
/// `A^0 = Q` and `A^{<0} = 0`; callers check those conditions.
impl ConnectedAlgebra for DgAlgebraPresentation {
    fn dim(&self, degree: i32) -> usize {
        self.underlying.dim(degree)
    }

    fn mul_basis(&self, ld: i32, li: usize, rd: i32, ri: usize) -> Vec<Rational> {
        let a = self.underlying.basis_element(ld, li);
        let b = self.underlying.basis_element(rd, ri);
        self.underlying.normal_form(ld + rd, &self.mul(&a, &b))
    }

    fn top_degree(&self) -> Option<i32> {
        self.underlying.finite_top_degree()
    }

    fn is_regular(&self) -> bool {
        self.is_base()
    }

    fn describe(&self) -> String {
        let gens: Vec<String> = self
            .underlying
            .generators()
            .iter()
            .map(|g| format!("{}:{}", g.name, g.degree))
            .collect();
        format!("dg algebra on [{}] over K with {} ring generators", gens.join(", "), self.base_ring().num_vars())
    }
}

/// Right dg module over a dg algebra.
#[derive(Clone, Debug)]
pub struct DgModulePresentation {
    algebra: Arc<DgAlgebraPresentation>,
    underlying: GradedModulePresentation,
    /// `action[m][a]` is the product of module generator `m` with algebra generator `a`.
    action: Vec<Vec<Element>>,
    differential: Vec<Element>,
    unbounded_above: bool,
    dcache: DegreeCache<QMatrix>,
}

impl DgModulePresentation {
    pub fn new(
        algebra: Arc<DgAlgebraPresentation>,
        underlying: GradedModulePresentation,
        action: Vec<Vec<Element>>,
        differential: Vec<Element>,
    ) -> Result<Self> {
        let m = Self::new_unchecked(algebra, underlying, action, differential)?;
        m.validate()?;
        Ok(m)
    }

    pub fn new_unchecked(
        algebra: Arc<DgAlgebraPresentation>,
        underlying: GradedModulePresentation,
        action: Vec<Vec<Element>>,
        differential: Vec<Element>,
    ) -> Result<Self> {
        if underlying.ring() != algebra.base_ring() {
            return Err(Error::InconsistentInput("module and algebra have different base rings".into()));
        }
        let n = underlying.num_generators();
        let na = algebra.num_generators();
        let gens = underlying.generators();
        ensure(action.len() == n && action.iter().all(|r| r.len() == na), || {
            "action table has the wrong shape".into()
        })?;
        ensure(differential.len() == n, || "differential table has the wrong shape".into())?;
        for i in 0..n {
            check_degree(&underlying, &differential[i], gens[i].degree + 1, || format!("d({})", gens[i].name))?;
            for a in 0..na {
                check_degree(&underlying, &action[i][a], gens[i].degree + algebra.generator_degree(a), || {
                    format!("{}*{}", gens[i].name, algebra.underlying.generators()[a].name)
                })?;
            }
        }
        Ok(DgModulePresentation {
            algebra,
            underlying,
            action,
            differential,
            unbounded_above: false,
            dcache: DegreeCache::new(),
        })
    }

    /// Unit acts as the identity, other unlisted actions are zero.
    pub fn from_parts(
        algebra: Arc<DgAlgebraPresentation>,
        underlying: GradedModulePresentation,
        action: Vec<(usize, usize, Element)>,
        differential: Vec<(usize, Element)>,
    ) -> Result<Self> {
        let n = underlying.num_generators();
        let na = algebra.num_generators();
        let unit = algebra.unit();
        let mut table: Vec<Vec<Element>> = (0..n)
            .map(|i| {
                (0..na)
                    .map(|a| if a == unit { underlying.generator_element(i) } else { zero_elem(n) })
                    .collect()
            })
            .collect();
        for (i, a, v) in action {
            table[i][a] = v;
        }
        let mut diff = vec![zero_elem(n); n];
        for (i, v) in differential {
            diff[i] = v;
        }
        Self::new(algebra, underlying, table, diff)
    }

    /// `A` as a right module over itself.
    pub fn regular(algebra: &Arc<DgAlgebraPresentation>) -> Self {
        Self::new_unchecked(
            algebra.clone(),
            algebra.underlying.clone(),
            algebra.product.clone(),
            algebra.differential.clone(),
        )
        .expect("regular module is valid")
    }

    /// The one-dimensional module `Q` in degree 0 on which every generator of
    /// positive degree acts by zero.
    pub fn augmentation(algebra: &Arc<DgAlgebraPresentation>) -> Result<Self> {
        let a = &algebra.underlying;
        if !algebra.is_connected_in(&DegreeWindow { lo: -1, hi: 0 }) {
            return Err(Error::hypothesis(0, "A^0 = Q and A^{<0} = 0"));
        }
        let ring = algebra.base_ring().clone();
        let rels = (0..ring.num_vars())
            .map(|i| vec![KPolynomial::monomial(ring.variable(i), Rational::one())])
            .collect();
        let underlying = GradedModulePresentation::new(ring.clone(), vec![ModuleGenerator::new("e", 0)], rels)?;
        let unit_nf = a.normal_form(0, &algebra.unit_element());
        let pivot = unit_nf.iter().position(|c| !c.is_zero()).expect("unit is nonzero in degree 0");
        let row: Vec<Element> = (0..algebra.num_generators())
            .map(|g| {
                if algebra.generator_degree(g) != 0 {
                    return vec![KPolynomial::zero()];
                }
                let v = a.normal_form(0, &a.generator_element(g));
                vec![KPolynomial::constant(&ring, &v[pivot] / &unit_nf[pivot])]
            })
            .collect();
        let action = vec![row];
        Self::new(algebra.clone(), underlying, action, vec![zero_elem(1)])
    }

    /// Semi-free module on generators `f_i` of the given degrees with
    /// `d(f_i) = Σ_j f_j · alpha[i][j]`, `alpha[i][j]` elements of `A`.
    pub fn semi_free(
        algebra: &Arc<DgAlgebraPresentation>,
        degrees: &[i32],
        alpha: &[Vec<Element>],
    ) -> Result<Self> {
        let a = &algebra.underlying;
        let na = a.num_generators();
        let r = degrees.len();
        let n = r * na;
        let idx = |i: usize, k: usize| i * na + k;
        let gens: Vec<ModuleGenerator> = (0..r)
            .flat_map(|i| (0..na).map(move |k| (i, k)))
            .map(|(i, k)| ModuleGenerator::new(format!("f{i}_{}", a.generators()[k].name), degrees[i] + a.generators()[k].degree))
            .collect();
        let place = |i: usize, e: &[KPolynomial]| {
            let mut out = zero_elem(n);
            for (k, p) in e.iter().enumerate() {
                out[idx(i, k)] = p.clone();
            }
            out
        };
        let mut relations = Vec::new();
        for i in 0..r {
            for rel in a.relations() {
                relations.push(place(i, rel));
            }
        }
        let mut action = vec![vec![zero_elem(n); na]; n];
        let mut differential = vec![zero_elem(n); n];
        for i in 0..r {
            for k in 0..na {
                for l in 0..na {
                    action[idx(i, k)][l] = place(i, &algebra.product[k][l]);
                }
                let ek = a.generator_element(k);
                let mut dv = place(i, &algebra.d(&ek));
                dv.iter_mut().for_each(|p| *p = p.scale(&sign(degrees[i])));
                for (j, coeff) in alpha[i].iter().enumerate() {
                    add_into(&mut dv, &place(j, &algebra.mul(coeff, &ek)), &Rational::one());
                }
                differential[idx(i, k)] = dv;
            }
        }
        let underlying = GradedModulePresentation::new(algebra.base_ring().clone(), gens, relations)?;
        Self::new(algebra.clone(), underlying, action, differential)
    }

    pub fn algebra(&self) -> &Arc<DgAlgebraPresentation> {
        &self.algebra
    }

    pub fn action_table(&self) -> &[Vec<Element>] {
        &self.action
    }

    pub fn with_unbounded_above(mut self, flag: bool) -> Self {
        self.unbounded_above = flag;
        self
    }

    pub fn act(&self, m: &[KPolynomial], a: &[KPolynomial]) -> Element {
        bilinear(m, a, &self.action, self.underlying.num_generators())
    }

    pub fn has_zero_differential(&self) -> bool {
        self.differential.iter().all(|e| is_zero_in(&self.underlying, e).unwrap_or(false))
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.underlying;
        let alg = &self.algebra;
        let n = m.num_generators();
        let na = alg.num_generators();
        let e = |i: usize| m.generator_element(i);
        let ea = |i: usize| alg.underlying.generator_element(i);
        let mname = |i: usize| m.generators()[i].name.clone();
        let aname = |i: usize| alg.underlying.generators()[i].name.clone();
        for i in 0..n {
            ensure(is_zero_in(m, &sub(&self.act(&e(i), &alg.unit_element()), &e(i)))?, || {
                format!("unit does not act as identity on {}", mname(i))
            })?;
            ensure(is_zero_in(m, &self.d(&self.d(&e(i))))?, || format!("d^2({}) != 0", mname(i)))?;
            for rel in alg.underlying.relations() {
                ensure(is_zero_in(m, &self.act(&e(i), rel))?, || {
                    format!("{} times an algebra relation is nonzero", mname(i))
                })?;
            }
        }
        for (r, rel) in m.relations().iter().enumerate() {
            ensure(is_zero_in(m, &self.d(rel))?, || format!("d does not preserve relation {r}"))?;
            for a in 0..na {
                ensure(is_zero_in(m, &self.act(rel, &ea(a)))?, || {
                    format!("relation {r} times {} is not a relation", aname(a))
                })?;
            }
        }
        for i in 0..n {
            let deg = m.generators()[i].degree;
            for a in 0..na {
                let ma = &self.action[i][a];
                let mut rhs = self.act(&self.d(&e(i)), &ea(a));
                add_into(&mut rhs, &self.act(&e(i), &alg.d(&ea(a))), &sign(deg));
                ensure(is_zero_in(m, &sub(&self.d(ma), &rhs))?, || {
                    format!("Leibniz rule fails on {}, {}", mname(i), aname(a))
                })?;
                for b in 0..na {
                    let left = self.act(ma, &ea(b));
                    let right = self.act(&e(i), &alg.product[a][b]);
                    ensure(is_zero_in(m, &sub(&left, &right))?, || {
                        format!("action not associative on {}, {}, {}", mname(i), aname(a), aname(b))
                    })?;
                }
            }
        }
        Ok(())
    }

    /// `[n]M`: degrees drop by `n`, the differential picks up `(-1)^n`.
    pub fn shift(&self, n: i32) -> DgModulePresentation {
        let s = sign(n);
        DgModulePresentation {
            algebra: self.algebra.clone(),
            underlying: self.underlying.shift(n),
            action: self.action.clone(),
            differential: self.differential.iter().map(|e| e.iter().map(|p| p.scale(&s)).collect()).collect(),
            unbounded_above: self.unbounded_above,
            dcache: DegreeCache::new(),
        }
    }
}

impl DgObject for DgModulePresentation {
    fn underlying(&self) -> &GradedModulePresentation {
        &self.underlying
    }

    fn differential_images(&self) -> &[Element] {
        &self.differential
    }

    fn differential_cache(&self) -> &DegreeCache<QMatrix> {
        &self.dcache
    }

    fn unbounded_above(&self) -> bool {
        self.unbounded_above
    }
}

impl GradedRightModule<DgAlgebraPresentation> for DgModulePresentation {
    fn min_degree(&self) -> Option<i32> {
        self.underlying.min_generator_degree()
    }

    fn top_degree(&self, _ring: &DgAlgebraPresentation) -> Option<i32> {
        if self.unbounded_above {
            None
        } else {
            self.underlying.finite_top_degree()
        }
    }

    fn dim(&self, degree: i32) -> usize {
        self.underlying.dim(degree)
    }

    fn act(&self, ring: &DgAlgebraPresentation, d: i32, v: &[Rational], rd: i32, ri: usize) -> Vec<Rational> {
        let m = self.underlying.lift(d, v);
        let a = ring.underlying.basis_element(rd, ri);
        self.underlying.normal_form(d + rd, &DgModulePresentation::act(self, &m, &a))
    }

    fn generator_candidates(&self, d: i32) -> Vec<Vec<Rational>> {
        self.underlying
            .generators()
            .iter()
            .enumerate()
            .filter(|(_, g)| g.degree == d)
            .map(|(j, _)| self.underlying.normal_form(d, &self.underlying.generator_element(j)))
            .collect()
    }
}

/// The diagonal bimodule `A` as a right module over `A ⊗_K A^op`.
pub fn diagonal_bimodule(a: &Arc<DgAlgebraPresentation>) -> Result<(Arc<DgAlgebraPresentation>, DgModulePresentation)> {
    let env = Arc::new(a.tensor_over_base(&a.opposite())?);
    let n = a.num_generators();
    let mut action = vec![vec![zero_elem(n); n * n]; n];
    for m in 0..n {
        let em = a.underlying.generator_element(m);
        for i in 0..n {
            let ei = a.underlying.generator_element(i);
            for j in 0..n {
                let ej = a.underlying.generator_element(j);
                let s = sign(a.generator_degree(j) * (a.generator_degree(m) + a.generator_degree(i)));
                let v = a.mul(&a.mul(&ej, &em), &ei);
                action[m][i * n + j] = v.iter().map(|p| p.scale(&s)).collect();
            }
        }
    }
    let module = DgModulePresentation::new_unchecked(env.clone(), a.underlying.clone(), action, a.differential.clone())?;
    Ok((env, module))
}

/// A dg bimodule: left action of `left`, right action of `right`.
#[derive(Clone, Debug)]
pub struct DgBimodulePresentation {
    left: Arc<DgAlgebraPresentation>,
    right: Arc<DgAlgebraPresentation>,
    underlying: GradedModulePresentation,
    /// `left_action[b][m]` is `b · m`.
    left_action: Vec<Vec<Element>>,
    /// `right_action[m][a]` is `m · a`.
    right_action: Vec<Vec<Element>>,
    differential: Vec<Element>,
    unbounded_above: bool,
    dcache: DegreeCache<QMatrix>,
}

impl DgBimodulePresentation {
    pub fn new(
        left: Arc<DgAlgebraPresentation>,
        right: Arc<DgAlgebraPresentation>,
        underlying: GradedModulePresentation,
        left_action: Vec<Vec<Element>>,
        right_action: Vec<Vec<Element>>,
        differential: Vec<Element>,
    ) -> Result<Self> {
        let n = underlying.num_generators();
        ensure(left_action.len() == left.num_generators() && left_action.iter().all(|r| r.len() == n), || {
            "left action table has the wrong shape".into()
        })?;
        for b in 0..left.num_generators() {
            for i in 0..n {
                check_degree(&underlying, &left_action[b][i], left.generator_degree(b) + underlying.generators()[i].degree, || {
                    format!("{}*{}", left.underlying.generators()[b].name, underlying.generators()[i].name)
                })?;
            }
        }
        let bm = DgBimodulePresentation {
            left,
            right,
            underlying,
            left_action,
            right_action,
            differential,
            unbounded_above: false,
            dcache: DegreeCache::new(),
        };
        // the right structure is checked by the restricted module
        bm.restrict_right()?.validate()?;
        bm.validate_left()?;
        Ok(bm)
    }

    /// Unit actions are the identity, other unlisted actions are zero.
    pub fn from_parts(
        left: Arc<DgAlgebraPresentation>,
        right: Arc<DgAlgebraPresentation>,
        underlying: GradedModulePresentation,
        left_action: Vec<(usize, usize, Element)>,
        right_action: Vec<(usize, usize, Element)>,
        differential: Vec<(usize, Element)>,
    ) -> Result<Self> {
        let n = underlying.num_generators();
        let mut lt: Vec<Vec<Element>> = (0..left.num_generators())
            .map(|b| {
                (0..n)
                    .map(|i| if b == left.unit() { underlying.generator_element(i) } else { zero_elem(n) })
                    .collect()
            })
            .collect();
        for (b, i, v) in left_action {
            lt[b][i] = v;
        }
        let mut rt: Vec<Vec<Element>> = (0..n)
            .map(|i| {
                (0..right.num_generators())
                    .map(|a| if a == right.unit() { underlying.generator_element(i) } else { zero_elem(n) })
                    .collect()
            })
            .collect();
        for (i, a, v) in right_action {
            rt[i][a] = v;
        }
        let mut diff = vec![zero_elem(n); n];
        for (i, v) in differential {
            diff[i] = v;
        }
        Self::new(left, right, underlying, lt, rt, diff)
    }

    /// The zero bimodule.
    pub fn zero(left: Arc<DgAlgebraPresentation>, right: Arc<DgAlgebraPresentation>) -> Self {
        let underlying = GradedModulePresentation::zero(right.base_ring().clone());
        Self::new(left.clone(), right, underlying, vec![vec![]; left.num_generators()], vec![], vec![])
            .expect("zero bimodule is valid")
    }

    pub fn left(&self) -> &Arc<DgAlgebraPresentation> {
        &self.left
    }

    pub fn right(&self) -> &Arc<DgAlgebraPresentation> {
        &self.right
    }

    pub fn with_unbounded_above(mut self, flag: bool) -> Self {
        self.unbounded_above = flag;
        self
    }

    pub fn left_act(&self, b: &[KPolynomial], m: &[KPolynomial]) -> Element {
        bilinear(b, m, &self.left_action, self.underlying.num_generators())
    }

    pub fn right_act(&self, m: &[KPolynomial], a: &[KPolynomial]) -> Element {
        bilinear(m, a, &self.right_action, self.underlying.num_generators())
    }

    fn validate_left(&self) -> Result<()> {
        let m = &self.underlying;
        let l = &self.left;
        let n = m.num_generators();
        let e = |i: usize| m.generator_element(i);
        let eb = |i: usize| l.underlying.generator_element(i);
        for i in 0..n {
            ensure(is_zero_in(m, &sub(&self.left_act(&l.unit_element(), &e(i)), &e(i)))?, || {
                "left unit does not act as identity".into()
            })?;
            for rel in l.underlying.relations() {
                ensure(is_zero_in(m, &self.left_act(rel, &e(i)))?, || {
                    "a left algebra relation acts nontrivially".into()
                })?;
            }
        }
        for rel in m.relations() {
            for b in 0..l.num_generators() {
                ensure(is_zero_in(m, &self.left_act(&eb(b), rel))?, || {
                    "left action does not preserve the relations".into()
                })?;
            }
        }
        for b in 0..l.num_generators() {
            let db = l.d(&eb(b));
            for i in 0..n {
                let bm = &self.left_action[b][i];
                let mut rhs = self.left_act(&db, &e(i));
                add_into(&mut rhs, &self.left_act(&eb(b), &self.d(&e(i))), &sign(l.generator_degree(b)));
                ensure(is_zero_in(m, &sub(&self.d(bm), &rhs))?, || "left Leibniz rule fails".into())?;
                for c in 0..l.num_generators() {
                    let lhs = self.left_act(&l.product[b][c], &e(i));
                    let rhs = self.left_act(&eb(b), &self.left_action[c][i]);
                    ensure(is_zero_in(m, &sub(&lhs, &rhs))?, || "left action not associative".into())?;
                }
                for a in 0..self.right.num_generators() {
                    let ea = self.right.underlying.generator_element(a);
                    let lhs = self.right_act(bm, &ea);
                    let rhs = self.left_act(&eb(b), &self.right_action[i][a]);
                    ensure(is_zero_in(m, &sub(&lhs, &rhs))?, || "left and right actions do not commute".into())?;
                }
            }
        }
        Ok(())
    }

    /// Restriction to the right action.
    pub fn restrict_right(&self) -> Result<DgModulePresentation> {
        Ok(DgModulePresentation::new_unchecked(
            self.right.clone(),
            self.underlying.clone(),
            self.right_action.clone(),
            self.differential.clone(),
        )?
        .with_unbounded_above(self.unbounded_above))
    }

    /// Restriction to the left action, as a right module over the opposite
    /// algebra: `m ·op b = (-1)^{|m||b|} b m`.
    pub fn restrict_left(&self) -> Result<DgModulePresentation> {
        let n = self.underlying.num_generators();
        let nb = self.left.num_generators();
        let action = (0..n)
            .map(|i| {
                (0..nb)
                    .map(|b| {
                        let s = sign(self.underlying.generators()[i].degree * self.left.generator_degree(b));
                        self.left_action[b][i].iter().map(|p| p.scale(&s)).collect()
                    })
                    .collect()
            })
            .collect();
        Ok(DgModulePresentation::new_unchecked(
            Arc::new(self.left.opposite()),
            self.underlying.clone(),
            action,
            self.differential.clone(),
        )?
        .with_unbounded_above(self.unbounded_above))
    }

    /// `[n]N`; the left action picks up `(-1)^{n|b|}`.
    pub fn shift(&self, n: i32) -> DgBimodulePresentation {
        let s = sign(n);
        let left_action = self
            .left_action
            .iter()
            .enumerate()
            .map(|(b, row)| {
                let t = sign(n * self.left.generator_degree(b));
                row.iter().map(|e| e.iter().map(|p| p.scale(&t)).collect()).collect()
            })
            .collect();
        DgBimodulePresentation {
            left: self.left.clone(),
            right: self.right.clone(),
            underlying: self.underlying.shift(n),
            left_action,
            right_action: self.right_action.clone(),
            differential: self.differential.iter().map(|e| e.iter().map(|p| p.scale(&s)).collect()).collect(),
            unbounded_above: self.unbounded_above,
            dcache: DegreeCache::new(),
        }
    }
}

impl DgObject for DgBimodulePresentation {
    fn underlying(&self) -> &GradedModulePresentation {
        &self.underlying
    }

    fn differential_images(&self) -> &[Element] {
        &self.differential
    }

    fn differential_cache(&self) -> &DegreeCache<QMatrix> {
        &self.dcache
    }

    fn unbounded_above(&self) -> bool {
        self.unbounded_above
    }
}

/// `E = [B 0; N A]`: `N` carries a right action of `B` and a left action of `A`.
#[derive(Clone, Debug)]
pub struct TriangularPresentation {
    pub upper_left: Arc<DgAlgebraPresentation>,
    pub lower_right: Arc<DgAlgebraPresentation>,
    pub connecting: DgBimodulePresentation,
}

impl TriangularPresentation {
    pub fn new(connecting: DgBimodulePresentation) -> Result<Self> {
        if connecting.left.base_ring() != connecting.right.base_ring() {
            return Err(Error::InconsistentInput("components have different base rings".into()));
        }
        Ok(TriangularPresentation {
            upper_left: connecting.right.clone(),
            lower_right: connecting.left.clone(),
            connecting,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuasiIsoFailure {
    NotInjective,
    NotSurjective,
}

impl fmt::Display for QuasiIsoFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuasiIsoFailure::NotInjective => "not injective",
            QuasiIsoFailure::NotSurjective => "not surjective",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum QuasiIsoCheck {
    QuasiIso,
    FailsAt { degree: i32, reason: QuasiIsoFailure },
}

/// Whether the unit map `K -> A` induces an isomorphism `K -> H(A)` in every
/// degree of the window.
pub fn check_quasi_iso_structure(k: &GradedPolyRing, a: &DgAlgebraPresentation, window: DegreeWindow) -> Result<QuasiIsoCheck> {
    if k != a.base_ring() {
        return Err(Error::InconsistentInput("algebra is not defined over the given base".into()));
    }
    let required = 2 * a.max_presentation_degree();
    if window.hi < required {
        return Err(Error::WindowTooSmall { required, hi: window.hi });
    }
    let m = &a.underlying;
    let unit = a.unit_element();
    for d in window.degrees() {
        let kdim = k.dim(d);
        let boundaries = a.differential_matrix(d - 1);
        let mut span = RowReducer::new(m.dim(d));
        for c in boundaries.columns() {
            span.insert(&c);
        }
        let b_rank = span.rank();
        for mono in k.monomials_of_degree(d) {
            let img: Element = unit.iter().map(|p| p.mul_monomial(&mono)).collect();
            span.insert(&m.normal_form(d, &img));
        }
        let image_rank = span.rank() - b_rank;
        if image_rank < kdim {
            return Ok(QuasiIsoCheck::FailsAt { degree: d, reason: QuasiIsoFailure::NotInjective });
        }
        if image_rank < a.cohomology_dim(d) {
            return Ok(QuasiIsoCheck::FailsAt { degree: d, reason: QuasiIsoFailure::NotSurjective });
        }
    }
    Ok(QuasiIsoCheck::QuasiIso)
}

/// Coordinates of `v` in the span of `basis`, if it lies there.
fn solve(basis: &[Vec<Rational>], v: &[Rational]) -> Option<Vec<Rational>> {
    let rows = v.len();
    let mut cols = basis.to_vec();
    cols.push(v.to_vec());
    let (r, pivots) = QMatrix::from_columns(rows, &cols).rref();
    if pivots.contains(&basis.len()) {
        return None;
    }
    let mut x = vec![Rational::zero(); basis.len()];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = r[(row, basis.len())].clone();
    }
    Some(x)
}

/// A subalgebra `U ⊆ T` with `U^{<0} = 0`, `U^0 = Q` and `U -> T` a
/// quasi-isomorphism, for `T` over `Q` with `H^{<0}(T) = 0` and `H^0(T) = Q`.
///
/// `U^1` is a lift of `H^1(T)` plus a complement of the cocycles, and
/// `U^i = T^i` for `i >= 2`. The result is presented on a `Q`-basis.
pub fn connective_truncation(t: &DgAlgebraPresentation, window: DegreeWindow) -> Result<DgAlgebraPresentation> {
    if !t.base_ring().is_field() {
        return Err(Error::hypothesis(0, "base ring is Q"));
    }
    let m = &t.underlying;
    let w = t.certified_window(window);
    for d in w.lo..0 {
        if t.cohomology_dim(d) != 0 {
            return Err(Error::hypothesis(d, "H^d(T) = 0 for d < 0"));
        }
    }
    if t.cohomology_dim(0) != 1 {
        return Err(Error::hypothesis(0, "H^0(T) = Q"));
    }
    if (w.lo..0).all(|d| m.dim(d) == 0) && m.dim(0) == 1 {
        return Ok(t.clone());
    }
    let top = m.max_generator_degree().unwrap_or(0);
    let unit = |n: usize, i: usize| {
        let mut v = vec![Rational::zero(); n];
        v[i] = Rational::one();
        v
    };
    // basis of U^d as vectors in T^d
    let mut bases: Vec<(i32, Vec<Vec<Rational>>)> = vec![(0, vec![m.normal_form(0, &t.unit_element())])];
    let n1 = m.dim(1);
    let cocycles = t.differential_matrix(1).kernel_basis().columns();
    let mut span = RowReducer::new(n1);
    for c in t.differential_matrix(0).columns() {
        span.insert(&c);
    }
    let mut u1: Vec<Vec<Rational>> = cocycles.iter().filter(|z| span.insert(z)).cloned().collect();
    let mut zspan = RowReducer::new(n1);
    for z in &cocycles {
        zspan.insert(z);
    }
    u1.extend((0..n1).map(|i| unit(n1, i)).filter(|e| zspan.insert(e)));
    bases.push((1, u1));
    for d in 2..=top {
        let n = m.dim(d);
        bases.push((d, (0..n).map(|i| unit(n, i)).collect()));
    }
    let mut gens = Vec::new();
    let mut owner = Vec::new();
    for (d, b) in &bases {
        for (i, v) in b.iter().enumerate() {
            owner.push((*d, v.clone()));
            gens.push(ModuleGenerator::new(format!("u{d}_{i}"), *d));
        }
    }
    let n = gens.len();
    let field = GradedPolyRing::field();
    let express = |d: i32, v: &[Rational]| -> Result<Element> {
        let mut out = zero_elem(n);
        if is_zero_vec(v) {
            return Ok(out);
        }
        let basis = &bases
            .iter()
            .find(|(e, _)| *e == d)
            .ok_or_else(|| Error::hypothesis(d, "product lands outside the truncation"))?
            .1;
        let x = solve(basis, v).ok_or_else(|| Error::hypothesis(d, "subspace is not closed"))?;
        let offset = owner.iter().position(|(e, _)| *e == d).unwrap();
        for (i, c) in x.into_iter().enumerate() {
            if !c.is_zero() {
                out[offset + i] = KPolynomial::constant(&field, c);
            }
        }
        Ok(out)
    };
    let mut product = vec![vec![zero_elem(n); n]; n];
    let mut differential = vec![zero_elem(n); n];
    for (a, (da, va)) in owner.iter().enumerate() {
        let ea = m.lift(*da, va);
        differential[a] = express(da + 1, &m.normal_form(da + 1, &t.d(&ea)))?;
        for (b, (db, vb)) in owner.iter().enumerate() {
            let eb = m.lift(*db, vb);
            product[a][b] = express(da + db, &m.normal_form(da + db, &t.mul(&ea, &eb)))?;
        }
    }
    let underlying = GradedModulePresentation::new(field, gens, vec![])?;
    DgAlgebraPresentation::new(underlying, 0, product, differential)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AmplitudeVerdict {
    NoObstruction,
    NotPerfect { reason: String },
}

/// Necessary condition for perfectness over an algebra whose cohomology is
/// `Q` in degree 0 and vanishes outside `[0, m]`, `m > 0`: a perfect module
/// has cohomological amplitude at least `m` and `dim H^top >= dim H^m(A)`.
pub fn amplitude_obstruction_from_reports(h_a: &CohomologyReport, h_m: &CohomologyReport) -> Result<AmplitudeVerdict> {
    if let Some(d) = h_a.dims.min_degree().filter(|&d| d < 0) {
        return Err(Error::hypothesis(d, "H^d(A) = 0 for d < 0"));
    }
    if h_a.dims.get(0) != 1 {
        return Err(Error::hypothesis(0, "H^0(A) = Q"));
    }
    if !h_a.complete {
        return Err(Error::hypothesis(h_a.window.hi, "H(A) bounded above"));
    }
    let m = h_a.dims.max_degree().unwrap_or(0);
    if m <= 0 {
        return Err(Error::hypothesis(0, "H(A) has top degree m > 0"));
    }
    let top_dim = h_a.dims.get(m);
    Ok(match amplitude(h_m) {
        Amplitude::ZeroModule => AmplitudeVerdict::NoObstruction,
        Amplitude::Unbounded => AmplitudeVerdict::NotPerfect {
            reason: "cohomology is unbounded above".into(),
        },
        Amplitude::Bounded(a) if (a as i32) < m => AmplitudeVerdict::NotPerfect {
            reason: format!("amplitude {a} < {m}"),
        },
        Amplitude::Bounded(_) => {
            let top = h_m.dims.max_degree().unwrap();
            let found = h_m.dims.get(top);
            if found < top_dim {
                AmplitudeVerdict::NotPerfect {
                    reason: format!("dim H^{top}(M) = {found} < dim H^{m}(A) = {top_dim}"),
                }
            } else {
                AmplitudeVerdict::NoObstruction
            }
        }
    })
}

pub fn amplitude_obstruction(a: &DgAlgebraPresentation, m: &DgModulePresentation, window: DegreeWindow) -> Result<AmplitudeVerdict> {
    let h_a = a.cohomology(a.certified_window(window));
    let h_m = m.cohomology(m.certified_window(window));
    amplitude_obstruction_from_reports(&h_a, &h_m)
}
