//! Finitely presented graded `K`-modules and their degreewise expansion to
//! finite-dimensional `Q`-vector spaces.
//!
//! An element of a presented module is a vector of homogeneous polynomials,
//! one entry per module generator. In degree `d` it is expanded on the
//! spanning set of pairs `(generator j, monomial of degree d - |e_j|)` and
//! reduced modulo the `Q`-span of all relation multiples landing in degree `d`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{QuotientSpace, Rational};
use crate::par::DegreeCache;
use crate::poly::{GradedPolyRing, KPolynomial, Monomial};

/// Inclusive range of degrees `lo..=hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeWindow {
    pub lo: i32,
    pub hi: i32,
}

impl DegreeWindow {
    pub fn new(lo: i32, hi: i32) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidWindow { lo, hi });
        }
        Ok(DegreeWindow { lo, hi })
    }

    /// Parses `LO:HI`.
    pub fn parse(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("window must look like LO:HI, got {s:?}")))?;
        let lo = a.trim().parse().map_err(|_| Error::Parse(format!("bad window bound {a:?}")))?;
        let hi = b.trim().parse().map_err(|_| Error::Parse(format!("bad window bound {b:?}")))?;
        DegreeWindow::new(lo, hi)
    }

    pub fn contains(&self, d: i32) -> bool {
        self.lo <= d && d <= self.hi
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi
    }

    pub fn union(&self, other: &DegreeWindow) -> DegreeWindow {
        DegreeWindow {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }
}

impl fmt::Display for DegreeWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

/// Degreewise dimensions; only nonzero entries are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedDimVector(BTreeMap<i32, usize>);

impl GradedDimVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i32, usize)>) -> Self {
        let mut v = Self::new();
        for (d, n) in pairs {
            v.add(d, n);
        }
        v
    }

    pub fn add(&mut self, degree: i32, n: usize) {
        if n > 0 {
            *self.0.entry(degree).or_insert(0) += n;
        }
    }

    pub fn get(&self, degree: i32) -> usize {
        self.0.get(&degree).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.0.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.0.keys().next_back().copied()
    }

    pub fn support_len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, usize)> + '_ {
        self.0.iter().map(|(d, n)| (*d, *n))
    }

    pub fn restricted(&self, window: &DegreeWindow) -> GradedDimVector {
        GradedDimVector(self.0.iter().filter(|(d, _)| window.contains(**d)).map(|(d, n)| (*d, *n)).collect())
    }

    pub fn shifted(&self, by: i32) -> GradedDimVector {
        GradedDimVector(self.0.iter().map(|(d, n)| (d + by, *n)).collect())
    }

    pub fn as_map(&self) -> &BTreeMap<i32, usize> {
        &self.0
    }
}

impl fmt::Display for GradedDimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(d, n)| format!("{d}:{n}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleGenerator {
    pub name: String,
    pub degree: i32,
}

impl ModuleGenerator {
    pub fn new(name: impl Into<String>, degree: i32) -> Self {
        ModuleGenerator {
            name: name.into(),
            degree,
        }
    }
}

/// Element of a presented module: one polynomial coefficient per generator.
pub type Element = Vec<KPolynomial>;

/// One degree of a presented module, expanded over `Q`.
#[derive(Debug)]
pub struct DegreeSlice {
    pub degree: i32,
    spanning: Vec<(usize, Monomial)>,
    index: HashMap<(usize, Monomial), usize>,
    quotient: QuotientSpace,
}

impl DegreeSlice {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn spanning_dim(&self) -> usize {
        self.spanning.len()
    }

    pub fn spanning(&self) -> &[(usize, Monomial)] {
        &self.spanning
    }

    /// Number of independent relations landing in this degree.
    pub fn relation_rank(&self) -> usize {
        self.spanning.len() - self.quotient.dim()
    }

    fn coords(&self, elem: &[KPolynomial]) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.spanning.len()];
        for (j, p) in elem.iter().enumerate() {
            for (m, c) in p.terms() {
                let idx = self.index.get(&(j, m.clone())).unwrap_or_else(|| {
                    panic!("term of generator {j} does not lie in degree {}", self.degree)
                });
                v[*idx] += c;
            }
        }
        v
    }

    pub fn normal_form(&self, elem: &[KPolynomial]) -> Vec<Rational> {
        self.quotient.normal_form(&self.coords(elem))
    }

    /// Representative element of a quotient vector.
    pub fn lift(&self, v: &[Rational], num_generators: usize) -> Element {
        let full = self.quotient.lift(v);
        let mut out = vec![KPolynomial::zero(); num_generators];
        for (x, (j, m)) in full.iter().zip(&self.spanning) {
            if !x.is_zero() {
                out[*j].add_term(m.clone(), x.clone());
            }
        }
        out
    }

    /// `(generator, monomial)` pair that represents quotient basis vector `i`.
    pub fn basis_pair(&self, i: usize) -> &(usize, Monomial) {
        &self.spanning[self.quotient.basis_columns()[i]]
    }
}

/// Finitely generated graded `K`-module `F / R`, `F` free on the generators.
#[derive(Clone)]
pub struct GradedModulePresentation {
    ring: GradedPolyRing,
    generators: Vec<ModuleGenerator>,
    relations: Vec<Element>,
    relation_degrees: Vec<Option<i32>>,
    slices: DegreeCache<DegreeSlice>,
}

impl fmt::Debug for GradedModulePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GradedModulePresentation")
            .field("ring", &self.ring)
            .field("generators", &self.generators)
            .field("relations", &self.relations)
            .finish()
    }
}

impl GradedModulePresentation {
    pub fn new(ring: GradedPolyRing, generators: Vec<ModuleGenerator>, relations: Vec<Element>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::InvalidPresentation(format!("duplicate module generator {}", g.name)));
            }
        }
        let mut relation_degrees = Vec::with_capacity(relations.len());
        for (index, rel) in relations.iter().enumerate() {
            if rel.len() != generators.len() {
                return Err(Error::NonhomogeneousRelation {
                    index,
                    detail: format!("has {} entries for {} generators", rel.len(), generators.len()),
                });
            }
            relation_degrees.push(element_degree(&ring, &generators, rel).map_err(|detail| {
                Error::NonhomogeneousRelation { index, detail }
            })?);
        }
        Ok(GradedModulePresentation {
            ring,
            generators,
            relations,
            relation_degrees,
            slices: DegreeCache::new(),
        })
    }

    /// The free module of rank one on a generator of degree 0.
    pub fn free_rank_one(ring: GradedPolyRing) -> Self {
        Self::new(ring, vec![ModuleGenerator::new("e", 0)], vec![]).expect("free module is valid")
    }

    /// Cyclic module `K / (polys)` on a generator of degree 0.
    pub fn cyclic(ring: GradedPolyRing, polys: Vec<KPolynomial>) -> Result<Self> {
        Self::new(ring, vec![ModuleGenerator::new("e", 0)], polys.into_iter().map(|p| vec![p]).collect())
    }

    pub fn zero(ring: GradedPolyRing) -> Self {
        Self::new(ring, vec![], vec![]).expect("zero module is valid")
    }

    pub fn ring(&self) -> &GradedPolyRing {
        &self.ring
    }

    pub fn generators(&self) -> &[ModuleGenerator] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn relations(&self) -> &[Element] {
        &self.relations
    }

    pub fn relation_degrees(&self) -> &[Option<i32>] {
        &self.relation_degrees
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn min_generator_degree(&self) -> Option<i32> {
        self.generators.iter().map(|g| g.degree).min()
    }

    pub fn max_generator_degree(&self) -> Option<i32> {
        self.generators.iter().map(|g| g.degree).max()
    }

    pub fn max_relation_degree(&self) -> Option<i32> {
        self.relation_degrees.iter().flatten().copied().max()
    }

    /// Largest degree appearing anywhere in the presentation data.
    pub fn max_presentation_degree(&self) -> i32 {
        [
            Some(self.ring.max_generator_degree()),
            self.max_generator_degree(),
            self.max_relation_degree(),
        ]
        .into_iter()
        .flatten()
        .max()
        .unwrap_or(0)
    }

    pub fn degree_of(&self, elem: &[KPolynomial]) -> std::result::Result<Option<i32>, String> {
        element_degree(&self.ring, &self.generators, elem)
    }

    pub fn zero_element(&self) -> Element {
        vec![KPolynomial::zero(); self.generators.len()]
    }

    pub fn generator_element(&self, j: usize) -> Element {
        let mut e = self.zero_element();
        e[j] = KPolynomial::one(&self.ring);
        e
    }

    /// The `Q`-expansion of degree `d`.
    pub fn degree_slice(&self, d: i32) -> Arc<DegreeSlice> {
        self.slices.get_or_insert_with(d, || self.build_slice(d))
    }

    fn build_slice(&self, d: i32) -> DegreeSlice {
        let mut spanning = Vec::new();
        for (j, g) in self.generators.iter().enumerate() {
            for m in self.ring.monomials_of_degree(d - g.degree) {
                spanning.push((j, m));
            }
        }
        let index: HashMap<(usize, Monomial), usize> =
            spanning.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let mut rows = Vec::new();
        for (rel, deg) in self.relations.iter().zip(&self.relation_degrees) {
            let Some(r) = deg else { continue };
            for mu in self.ring.monomials_of_degree(d - r) {
                let mut v = vec![Rational::zero(); spanning.len()];
                for (j, p) in rel.iter().enumerate() {
                    for (m, c) in p.terms() {
                        let prod: Monomial = m.iter().zip(&mu).map(|(a, b)| a + b).collect();
                        v[index[&(j, prod)]] += c;
                    }
                }
                rows.push(v);
            }
        }
        let quotient = QuotientSpace::new(spanning.len(), rows);
        DegreeSlice {
            degree: d,
            spanning,
            index,
            quotient,
        }
    }

    pub fn dim(&self, d: i32) -> usize {
        self.degree_slice(d).dim()
    }

    pub fn dims(&self, window: &DegreeWindow) -> GradedDimVector {
        GradedDimVector::from_pairs(window.degrees().map(|d| (d, self.dim(d))))
    }

    pub fn normal_form(&self, d: i32, elem: &[KPolynomial]) -> Vec<Rational> {
        self.degree_slice(d).normal_form(elem)
    }

    pub fn lift(&self, d: i32, v: &[Rational]) -> Element {
        self.degree_slice(d).lift(v, self.generators.len())
    }

    pub fn basis_element(&self, d: i32, i: usize) -> Element {
        let slice = self.degree_slice(d);
        let mut v = vec![Rational::zero(); slice.dim()];
        v[i] = Rational::from_integer(1.into());
        slice.lift(&v, self.generators.len())
    }

    /// Multiplication by a monomial of `K`, as a map `M^d -> M^{d + |mono|}`.
    pub fn act_by_monomial(&self, d: i32, v: &[Rational], mono: &[u32]) -> Vec<Rational> {
        let elem = self.lift(d, v);
        let moved: Element = elem.iter().map(|p| p.mul_monomial(mono)).collect();
        self.normal_form(d + self.ring.monomial_degree(mono), &moved)
    }

    /// Same module with additional relations.
    pub fn with_relations(&self, extra: Vec<Element>) -> Result<Self> {
        let mut relations = self.relations.clone();
        relations.extend(extra);
        Self::new(self.ring.clone(), self.generators.clone(), relations)
    }

    /// The shift `[n]M`, with `([n]M)^i = M^{n+i}`.
    pub fn shift(&self, n: i32) -> Self {
        let generators = self
            .generators
            .iter()
            .map(|g| ModuleGenerator::new(g.name.clone(), g.degree - n))
            .collect();
        Self::new(self.ring.clone(), generators, self.relations.clone()).expect("shift preserves homogeneity")
    }

    /// A degree above which the module is known to vanish.
    ///
    /// Above the top generator degree, `M^d` is spanned by `M^{d-|x_i|} x_i`,
    /// so a run of `max |x_i|` consecutive zero degrees there is permanent.
    /// Returns `None` when no such run is found below a cap derived from the
    /// presentation degrees, or when there are no generators.
    pub fn finite_top_degree(&self) -> Option<i32> {
        let maxgen = self.max_generator_degree()?;
        if self.ring.is_field() {
            return Some(maxgen);
        }
        let step = self.ring.max_generator_degree();
        let mingen = self.min_generator_degree().unwrap_or(maxgen);
        let span = self.max_relation_degree().map_or(0, |r| r - mingen).max(step);
        let cap = maxgen + self.ring.num_vars() as i32 * span + 2 * step;
        let mut last_nonzero = maxgen;
        for d in maxgen + 1..=cap {
            if self.dim(d) > 0 {
                last_nonzero = d;
            } else if d - last_nonzero >= step {
                return Some(last_nonzero);
            }
        }
        None
    }

    /// Parses a `K`-linear combination of module generators such as
    /// `"x*e0 - 2*y^2*e1"`.
    pub fn parse_element(&self, src: &str) -> Result<Element> {
        parse_element(&self.ring, &self.generators, src)
    }

    pub fn format_element(&self, elem: &[KPolynomial]) -> String {
        let parts: Vec<String> = elem
            .iter()
            .zip(&self.generators)
            .filter(|(p, _)| !p.is_zero())
            .map(|(p, g)| format!("({})*{}", self.ring.format(p), g.name))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Degree of a homogeneous element, `None` for zero.
pub fn element_degree(
    ring: &GradedPolyRing,
    generators: &[ModuleGenerator],
    elem: &[KPolynomial],
) -> std::result::Result<Option<i32>, String> {
    let mut degree = None;
    for (p, g) in elem.iter().zip(generators) {
        let d = p
            .homogeneous_degree(ring)
            .map_err(|_| format!("coefficient of {} is not homogeneous", g.name))?;
        if let Some(d) = d {
            let total = d + g.degree;
            match degree {
                None => degree = Some(total),
                Some(prev) if prev != total => {
                    return Err(format!("entries have degrees {prev} and {total}"));
                }
                _ => {}
            }
        }
    }
    Ok(degree)
}

/// Parses a linear combination of `generators` with coefficients in `ring`.
/// Each term must contain exactly one generator to the first power.
pub fn parse_element(ring: &GradedPolyRing, generators: &[ModuleGenerator], src: &str) -> Result<Element> {
    let s = ring.num_vars();
    let mut vars: Vec<&str> = ring.names();
    vars.extend(generators.iter().map(|g| g.name.as_str()));
    let terms = crate::poly::parse_polynomial(src, &vars)?;
    let mut out = vec![KPolynomial::zero(); generators.len()];
    for (m, c) in terms {
        let module_part = &m[s..];
        let total: u32 = module_part.iter().sum();
        let Some(j) = module_part.iter().position(|&e| e == 1).filter(|_| total == 1) else {
            return Err(Error::Parse(format!("term in {src:?} is not linear in the module generators")));
        };
        out[j].add_term(m[..s].to_vec(), c);
    }
    element_degree(ring, generators, &out).map_err(|e| Error::Parse(format!("{src:?}: {e}")))?;
    Ok(out)
}
