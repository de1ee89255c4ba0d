//! Connected graded algebras viewed degreewise, and graded right modules over
//! them. These are the inputs of the minimal resolution engine.

use std::sync::OnceLock;

use num_traits::One;

use crate::error::Result;
use crate::exact::Rational;
use crate::module::{Element, GradedModulePresentation, ModuleGenerator};
use crate::poly::{GradedPolyRing, KPolynomial, Monomial};

/// A graded `Q`-algebra `R` with `R^0 = Q`, `R^{<0} = 0` and every `R^d`
/// finite dimensional, described by a basis in each degree.
pub trait ConnectedAlgebra: Sync + Send {
    fn dim(&self, degree: i32) -> usize;

    /// Product of basis element `li` of degree `ld` with basis element `ri`
    /// of degree `rd`, in the basis of degree `ld + rd`.
    fn mul_basis(&self, ld: i32, li: usize, rd: i32, ri: usize) -> Vec<Rational>;

    /// A degree above which `R` vanishes, when one is known.
    fn top_degree(&self) -> Option<i32>;

    /// Whether `R` is known to be a polynomial ring (finite global dimension).
    fn is_regular(&self) -> bool;

    fn describe(&self) -> String;
}

/// A graded right module over a connected algebra, described degreewise.
pub trait GradedRightModule<R: ConnectedAlgebra + ?Sized>: Sync + Send {
    /// Lowest degree of a generator, `None` for the zero module.
    fn min_degree(&self) -> Option<i32>;

    /// A degree above which the module vanishes, when one is known.
    fn top_degree(&self, ring: &R) -> Option<i32>;

    fn dim(&self, degree: i32) -> usize;

    /// `v * r` for `v` in degree `d` and `r` basis element `ri` of `R^rd`.
    fn act(&self, ring: &R, d: i32, v: &[Rational], rd: i32, ri: usize) -> Vec<Rational>;

    /// Preferred generators in degree `d`, tried in order before the
    /// standard basis when choosing a minimal generating set.
    fn generator_candidates(&self, d: i32) -> Vec<Vec<Rational>>;
}

/// `K / I` for a homogeneous ideal `I` of a graded polynomial ring.
#[derive(Clone, Debug)]
pub struct QuotientRing {
    ring: GradedPolyRing,
    ideal: Vec<KPolynomial>,
    cyclic: GradedModulePresentation,
    top: OnceLock<Option<i32>>,
}

impl QuotientRing {
    pub fn new(ring: GradedPolyRing, ideal: Vec<KPolynomial>) -> Result<Self> {
        let ideal: Vec<KPolynomial> = ideal.into_iter().filter(|p| !p.is_zero()).collect();
        let cyclic = GradedModulePresentation::cyclic(ring.clone(), ideal.clone())?;
        Ok(QuotientRing {
            ring,
            ideal,
            cyclic,
            top: OnceLock::new(),
        })
    }

    pub fn polynomial(ring: GradedPolyRing) -> Self {
        QuotientRing::new(ring, vec![]).expect("polynomial ring is valid")
    }

    pub fn ring(&self) -> &GradedPolyRing {
        &self.ring
    }

    pub fn ideal(&self) -> &[KPolynomial] {
        &self.ideal
    }

    /// Standard monomial representing basis element `i` of degree `d`.
    pub fn basis_monomial(&self, d: i32, i: usize) -> Monomial {
        self.cyclic.degree_slice(d).basis_pair(i).1.clone()
    }

    pub fn normal_form(&self, d: i32, p: &KPolynomial) -> Vec<Rational> {
        self.cyclic.normal_form(d, std::slice::from_ref(p))
    }

    /// Tensor product over `Q`.
    pub fn tensor(&self, other: &QuotientRing) -> QuotientRing {
        let ring = self.ring.tensor(&other.ring);
        let s = self.ring.num_vars();
        let t = other.ring.num_vars();
        let left = |p: &KPolynomial| {
            KPolynomial::from_terms(p.terms().iter().map(|(m, c)| {
                let mut e = m.clone();
                e.extend(std::iter::repeat_n(0, t));
                (e, c.clone())
            }))
        };
        let right = |p: &KPolynomial| {
            KPolynomial::from_terms(p.terms().iter().map(|(m, c)| {
                let mut e = vec![0; s];
                e.extend(m.iter().copied());
                (e, c.clone())
            }))
        };
        let mut ideal: Vec<KPolynomial> = self.ideal.iter().map(left).collect();
        ideal.extend(other.ideal.iter().map(right));
        QuotientRing::new(ring, ideal).expect("tensor of homogeneous ideals is homogeneous")
    }

    /// A module over this ring presented by generators and relations; the
    /// ideal is imposed on every generator.
    pub fn module(&self, generators: Vec<ModuleGenerator>, relations: Vec<Element>) -> Result<GradedModulePresentation> {
        let n = generators.len();
        let mut all = relations;
        for j in 0..n {
            for f in &self.ideal {
                let mut rel = vec![KPolynomial::zero(); n];
                rel[j] = f.clone();
                all.push(rel);
            }
        }
        GradedModulePresentation::new(self.ring.clone(), generators, all)
    }

    /// `R ⊗ R` and the diagonal module `R` over it, `x_i ⊗ 1 - 1 ⊗ x_i = 0`.
    pub fn diagonal(&self) -> (QuotientRing, GradedModulePresentation) {
        let env = self.tensor(self);
        let s = self.ring.num_vars();
        let rels: Vec<Element> = (0..s)
            .map(|i| {
                let mut a = vec![0; 2 * s];
                a[i] = 1;
                let mut b = vec![0; 2 * s];
                b[s + i] = 1;
                vec![KPolynomial::from_terms([(a, Rational::one()), (b, -Rational::one())])]
            })
            .collect();
        let m = env
            .module(vec![ModuleGenerator::new("e", 0)], rels)
            .expect("diagonal relations are homogeneous");
        (env, m)
    }

    fn compute_top(&self) -> Option<i32> {
        if self.ideal.is_empty() {
            return if self.ring.is_field() { Some(0) } else { None };
        }
        let step = self.ring.max_generator_degree().max(1);
        let gen_deg = self
            .ideal
            .iter()
            .filter_map(|p| p.homogeneous_degree(&self.ring).ok().flatten())
            .max()
            .unwrap_or(0);
        let cap = (self.ring.num_vars() as i32) * gen_deg.max(step) + 2 * step;
        let mut zeros = 0;
        let mut last_nonzero = 0;
        for d in 1..=cap {
            if self.dim(d) == 0 {
                zeros += 1;
                if zeros >= step {
                    return Some(last_nonzero);
                }
            } else {
                zeros = 0;
                last_nonzero = d;
            }
        }
        None
    }
}

impl ConnectedAlgebra for QuotientRing {
    fn dim(&self, degree: i32) -> usize {
        self.cyclic.dim(degree)
    }

    fn mul_basis(&self, ld: i32, li: usize, rd: i32, ri: usize) -> Vec<Rational> {
        let a = self.basis_monomial(ld, li);
        let b = self.basis_monomial(rd, ri);
        let m: Monomial = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        self.normal_form(ld + rd, &KPolynomial::monomial(m, Rational::one()))
    }

    fn top_degree(&self) -> Option<i32> {
        *self.top.get_or_init(|| self.compute_top())
    }

    fn is_regular(&self) -> bool {
        self.ideal.is_empty()
    }

    fn describe(&self) -> String {
        if self.ideal.is_empty() {
            format!("Q[{}]", self.ring.names().join(","))
        } else {
            let gens: Vec<String> = self.ideal.iter().map(|p| self.ring.format(p)).collect();
            format!("Q[{}]/({})", self.ring.names().join(","), gens.join(", "))
        }
    }
}

/// A presented `K`-module is a module over any quotient `K/I` that kills it.
impl GradedRightModule<QuotientRing> for GradedModulePresentation {
    fn min_degree(&self) -> Option<i32> {
        self.min_generator_degree()
    }

    fn top_degree(&self, ring: &QuotientRing) -> Option<i32> {
        let via_ring = self.max_generator_degree().zip(ring.top_degree()).map(|(g, t)| g + t);
        match (self.finite_top_degree(), via_ring) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    fn dim(&self, degree: i32) -> usize {
        GradedModulePresentation::dim(self, degree)
    }

    fn act(&self, ring: &QuotientRing, d: i32, v: &[Rational], rd: i32, ri: usize) -> Vec<Rational> {
        self.act_by_monomial(d, v, &ring.basis_monomial(rd, ri))
    }

    fn generator_candidates(&self, d: i32) -> Vec<Vec<Rational>> {
        self.generators()
            .iter()
            .enumerate()
            .filter(|(_, g)| g.degree == d)
            .map(|(j, _)| self.normal_form(d, &self.generator_element(j)))
            .collect()
    }
}
