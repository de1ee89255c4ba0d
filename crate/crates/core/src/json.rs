//! JSON input formats for modules, algebras, bimodules, groups and varieties.
//!
//! Polynomials and elements are strings in the named generators, e.g.
//! `"x^2 - 3/2*x*y"` or `"x*e0 + f"`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dga::{DgAlgebraPresentation, DgBimodulePresentation, DgObject};
use crate::equivariant::{GroupDescriptor, LeviFactor, OrbitDescriptor, OrbitFlags, OrbitStratification};
use crate::error::{Error, Result};
use crate::module::{Element, GradedModulePresentation, ModuleGenerator};
use crate::poly::GradedPolyRing;

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub name: String,
    pub degree: i32,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct RingJson {
    #[serde(default)]
    pub generators: Vec<GeneratorJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyJson {
    pub poly: String,
}

/// A relation is either one polynomial per generator or an element string.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RelationJson {
    Components(Vec<PolyJson>),
    Element(String),
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ModuleJson {
    #[serde(default)]
    pub ring: RingJson,
    #[serde(default)]
    pub generators: Vec<GeneratorJson>,
    #[serde(default)]
    pub relations: Vec<RelationJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProductJson {
    pub left: String,
    pub right: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DifferentialJson {
    pub on: String,
    pub value: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct AlgebraJson {
    #[serde(default)]
    pub ring: RingJson,
    #[serde(default)]
    pub generators: Vec<GeneratorJson>,
    #[serde(default)]
    pub relations: Vec<RelationJson>,
    /// Defaults to the first generator of degree 0.
    #[serde(default)]
    pub unit: Option<String>,
    #[serde(default)]
    pub product: Vec<ProductJson>,
    #[serde(default)]
    pub differential: Vec<DifferentialJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LeftActionJson {
    pub left: String,
    pub on: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RightActionJson {
    pub on: String,
    pub right: String,
    pub value: String,
}

/// The ring is taken from the algebras; unlisted actions are zero, units act
/// as the identity.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct BimoduleJson {
    #[serde(default)]
    pub generators: Vec<GeneratorJson>,
    #[serde(default)]
    pub relations: Vec<RelationJson>,
    #[serde(default)]
    pub left_action: Vec<LeftActionJson>,
    #[serde(default)]
    pub right_action: Vec<RightActionJson>,
    #[serde(default)]
    pub differential: Vec<DifferentialJson>,
    #[serde(default)]
    pub unbounded_above: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LeviJson {
    #[serde(rename = "type")]
    pub root_type: String,
    pub rank: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupJson {
    pub name: String,
    #[serde(default)]
    pub levi: Vec<LeviJson>,
    #[serde(default)]
    pub central_torus_rank: u32,
    #[serde(default)]
    pub unipotent_dim: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitJson {
    pub name: String,
    pub stabilizer: GroupJson,
    #[serde(default)]
    pub affine_space: Option<bool>,
    #[serde(default)]
    pub trivial_cohomology: Option<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VarietyJson {
    pub group: GroupJson,
    pub orbits: Vec<OrbitJson>,
}

fn from_str<T: for<'de> Deserialize<'de>>(src: &str) -> Result<T> {
    serde_json::from_str(src).map_err(|e| Error::Parse(e.to_string()))
}

fn ring_of(r: &RingJson) -> Result<GradedPolyRing> {
    GradedPolyRing::new(r.generators.iter().map(|g| (g.name.clone(), g.degree)))
}

fn module_of(ring: GradedPolyRing, generators: &[GeneratorJson], relations: &[RelationJson]) -> Result<GradedModulePresentation> {
    let gens: Vec<ModuleGenerator> = generators.iter().map(|g| ModuleGenerator::new(&g.name, g.degree)).collect();
    let mut rels = Vec::with_capacity(relations.len());
    for (i, r) in relations.iter().enumerate() {
        let elem: Element = match r {
            RelationJson::Components(parts) => {
                if parts.len() != gens.len() {
                    return Err(Error::Parse(format!(
                        "relation {i} has {} components for {} generators",
                        parts.len(),
                        gens.len()
                    )));
                }
                parts.iter().map(|p| ring.parse(&p.poly)).collect::<Result<_>>()?
            }
            RelationJson::Element(s) => crate::module::parse_element(&ring, &gens, s)?,
        };
        rels.push(elem);
    }
    GradedModulePresentation::new(ring, gens, rels)
}

fn index_of(m: &GradedModulePresentation, name: &str, what: &str) -> Result<usize> {
    m.generator_index(name)
        .ok_or_else(|| Error::Parse(format!("unknown {what} generator {name:?}")))
}

pub fn parse_module(src: &str) -> Result<GradedModulePresentation> {
    let j: ModuleJson = from_str(src)?;
    module_of(ring_of(&j.ring)?, &j.generators, &j.relations)
}

pub fn parse_algebra(src: &str) -> Result<DgAlgebraPresentation> {
    let j: AlgebraJson = from_str(src)?;
    algebra_from_json(&j)
}

pub fn algebra_from_json(j: &AlgebraJson) -> Result<DgAlgebraPresentation> {
    let m = module_of(ring_of(&j.ring)?, &j.generators, &j.relations)?;
    let unit = match &j.unit {
        Some(name) => index_of(&m, name, "unit")?,
        None => m
            .generators()
            .iter()
            .position(|g| g.degree == 0)
            .ok_or_else(|| Error::InvalidPresentation("no generator of degree 0 to serve as unit".into()))?,
    };
    let mut products = Vec::with_capacity(j.product.len());
    for p in &j.product {
        products.push((index_of(&m, &p.left, "algebra")?, index_of(&m, &p.right, "algebra")?, m.parse_element(&p.value)?));
    }
    let mut diff = Vec::with_capacity(j.differential.len());
    for d in &j.differential {
        diff.push((index_of(&m, &d.on, "algebra")?, m.parse_element(&d.value)?));
    }
    DgAlgebraPresentation::from_parts(m, unit, products, diff)
}

/// A bimodule with a left action of `left` and a right action of `right`.
pub fn parse_bimodule(src: &str, left: Arc<DgAlgebraPresentation>, right: Arc<DgAlgebraPresentation>) -> Result<DgBimodulePresentation> {
    let j: BimoduleJson = from_str(src)?;
    if left.base_ring() != right.base_ring() {
        return Err(Error::InconsistentInput("the two algebras have different base rings".into()));
    }
    let m = module_of(right.base_ring().clone(), &j.generators, &j.relations)?;
    let alg_index = |a: &DgAlgebraPresentation, name: &str| index_of(a.underlying(), name, "algebra");
    let mut la = Vec::with_capacity(j.left_action.len());
    for e in &j.left_action {
        la.push((alg_index(&left, &e.left)?, index_of(&m, &e.on, "module")?, m.parse_element(&e.value)?));
    }
    let mut ra = Vec::with_capacity(j.right_action.len());
    for e in &j.right_action {
        ra.push((index_of(&m, &e.on, "module")?, alg_index(&right, &e.right)?, m.parse_element(&e.value)?));
    }
    let mut diff = Vec::with_capacity(j.differential.len());
    for d in &j.differential {
        diff.push((index_of(&m, &d.on, "module")?, m.parse_element(&d.value)?));
    }
    Ok(DgBimodulePresentation::from_parts(left, right, m, la, ra, diff)?.with_unbounded_above(j.unbounded_above))
}

fn group_from_json(g: &GroupJson) -> Result<GroupDescriptor> {
    let levi = g
        .levi
        .iter()
        .map(|f| LeviFactor::new(f.root_type.parse()?, f.rank))
        .collect::<Result<Vec<_>>>()?;
    Ok(GroupDescriptor::new(g.name.clone(), levi, g.central_torus_rank, g.unipotent_dim))
}

pub fn parse_group(src: &str) -> Result<GroupDescriptor> {
    group_from_json(&from_str(src)?)
}

pub fn parse_variety(src: &str) -> Result<OrbitStratification> {
    let j: VarietyJson = from_str(src)?;
    let group = group_from_json(&j.group)?;
    let orbits = j
        .orbits
        .iter()
        .map(|o| {
            Ok(OrbitDescriptor {
                name: o.name.clone(),
                stabilizer: group_from_json(&o.stabilizer)?,
                flags: OrbitFlags { affine_space: o.affine_space, trivial_cohomology: o.trivial_cohomology },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    OrbitStratification::new(group, orbits)
}
