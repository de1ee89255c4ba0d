//! Equivariant cohomology of classifying spaces and smoothness of orbits.
//!
//! A group is described by its Levi factors, a torus and a unipotent part.
//! Only the maximal compact subgroup matters here: its torus rank, Weyl group
//! and the degrees of the invariant polynomial ring `H_G(pt)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::poly::GradedPolyRing;
use crate::weyl::{self, RootType};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeviFactor {
    #[serde(rename = "type")]
    pub root_type: RootType,
    pub rank: u32,
}

impl LeviFactor {
    pub fn new(root_type: RootType, rank: u32) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidPresentation(format!("{root_type} factor of rank 0")));
        }
        Ok(Self { root_type, rank })
    }

    // rank-one B and C are A_1
    fn normalized_type(&self) -> RootType {
        match self.root_type {
            RootType::B | RootType::C if self.rank == 1 => RootType::A,
            t => t,
        }
    }
}

impl fmt::Display for LeviFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.root_type, self.rank)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub name: String,
    #[serde(rename = "levi")]
    pub levi_factors: Vec<LeviFactor>,
    pub central_torus_rank: u32,
    pub unipotent_dim: u32,
}

impl GroupDescriptor {
    pub fn new(name: impl Into<String>, levi_factors: Vec<LeviFactor>, central_torus_rank: u32, unipotent_dim: u32) -> Self {
        Self { name: name.into(), levi_factors, central_torus_rank, unipotent_dim }
    }

    pub fn trivial() -> Self {
        Self::new("1", vec![], 0, 0)
    }

    pub fn torus(rank: u32) -> Self {
        Self::new(format!("T{rank}"), vec![], rank, 0)
    }

    pub fn sl(n: u32) -> Self {
        Self::new(format!("SL{n}"), vec![LeviFactor { root_type: RootType::A, rank: n - 1 }], 0, 0)
    }

    pub fn gl(n: u32) -> Self {
        Self::new(format!("GL{n}"), vec![LeviFactor { root_type: RootType::A, rank: n - 1 }], 1, 0)
    }

    /// Borel subgroup of `SL_n`.
    pub fn borel_sl(n: u32) -> Self {
        Self::new(format!("B{n}"), vec![], n - 1, n * (n - 1) / 2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompactData {
    pub compact_torus_rank: u32,
    pub weyl_order: u64,
    pub invariant_degrees: Vec<i32>,
}

pub fn compact_data(g: &GroupDescriptor) -> CompactData {
    let mut degrees = vec![2; g.central_torus_rank as usize];
    let mut rank = g.central_torus_rank;
    let mut order = 1u64;
    for f in &g.levi_factors {
        rank += f.rank;
        order *= weyl::weyl_order(f.root_type, f.rank);
        degrees.extend(weyl::invariant_degrees(f.root_type, f.rank));
    }
    degrees.sort_unstable();
    CompactData { compact_torus_rank: rank, weyl_order: order, invariant_degrees: degrees }
}

/// `H_G(pt)` as a graded polynomial ring on `c1, c2, ...` in ascending degree.
pub fn equivariant_ring(g: &GroupDescriptor) -> GradedPolyRing {
    let data = compact_data(g);
    GradedPolyRing::new(data.invariant_degrees.iter().enumerate().map(|(i, &d)| (format!("c{}", i + 1), d)))
        .expect("invariant degrees are even and positive")
}

/// How the Levi factors of the subgroup sit inside those of the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmbeddingHint {
    /// Search for a placement of each factor into a factor of the group.
    Standard,
    /// Entry `i` is the index of the group factor containing subgroup factor `i`.
    Explicit(Vec<usize>),
}

impl std::str::FromStr for EmbeddingHint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "standard" {
            return Ok(EmbeddingHint::Standard);
        }
        if s.is_empty() {
            return Ok(EmbeddingHint::Explicit(vec![]));
        }
        s.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad embedding hint {s:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(EmbeddingHint::Explicit)
    }
}

fn fits(h: &LeviFactor, g: &LeviFactor) -> bool {
    let (th, tg) = (h.normalized_type(), g.normalized_type());
    h.rank <= g.rank && (th == tg || th == RootType::A || (th == RootType::D && tg == RootType::B))
}

fn place(h: &[LeviFactor], g: &[LeviFactor], room: &mut [u32], out: &mut Vec<usize>) -> bool {
    let Some((first, rest)) = h.split_first() else {
        return true;
    };
    for (j, gf) in g.iter().enumerate() {
        if room[j] >= first.rank && fits(first, gf) {
            room[j] -= first.rank;
            out.push(j);
            if place(rest, g, room, out) {
                return true;
            }
            out.pop();
            room[j] += first.rank;
        }
    }
    false
}

/// Assignment of subgroup factors to group factors.
pub fn resolve_embedding(g: &GroupDescriptor, h: &GroupDescriptor, hint: &EmbeddingHint) -> Result<Vec<usize>> {
    let mut room: Vec<u32> = g.levi_factors.iter().map(|f| f.rank).collect();
    match hint {
        EmbeddingHint::Standard => {
            // largest factors first keeps the search short
            let mut order: Vec<usize> = (0..h.levi_factors.len()).collect();
            order.sort_by_key(|&i| std::cmp::Reverse(h.levi_factors[i].rank));
            let sorted: Vec<LeviFactor> = order.iter().map(|&i| h.levi_factors[i].clone()).collect();
            let mut placed = Vec::new();
            if !place(&sorted, &g.levi_factors, &mut room, &mut placed) {
                return Err(Error::UnsupportedEmbedding(format!(
                    "no standard placement of the factors of {} into {}",
                    h.name, g.name
                )));
            }
            let mut out = vec![0; order.len()];
            for (k, &i) in order.iter().enumerate() {
                out[i] = placed[k];
            }
            Ok(out)
        }
        EmbeddingHint::Explicit(map) => {
            if map.len() != h.levi_factors.len() {
                return Err(Error::UnsupportedEmbedding(format!(
                    "hint names {} factors, {} has {}",
                    map.len(),
                    h.name,
                    h.levi_factors.len()
                )));
            }
            for (hf, &j) in h.levi_factors.iter().zip(map) {
                let ok = g.levi_factors.get(j).is_some_and(|gf| fits(hf, gf)) && room[j] >= hf.rank;
                if !ok {
                    return Err(Error::UnsupportedEmbedding(format!("factor {hf} does not fit into factor {j} of {}", g.name)));
                }
                room[j] -= hf.rank;
            }
            Ok(map.clone())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConditionSource {
    Computed,
    Derived,
    Flag,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub id: String,
    pub statement: String,
    pub holds: bool,
    pub source: ConditionSource,
}

/// Optional facts about an orbit supplied by the user.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitFlags {
    pub affine_space: Option<bool>,
    pub trivial_cohomology: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneousSpaceReport {
    pub group: String,
    pub subgroup: String,
    pub smooth: bool,
    pub group_data: CompactData,
    pub subgroup_data: CompactData,
    pub embedding: Option<Vec<usize>>,
    pub conditions: Vec<Condition>,
    pub witness: Option<String>,
}

impl HomogeneousSpaceReport {
    pub fn condition(&self, id: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.id == id)
    }
}

fn condition(id: &str, statement: &str, holds: bool, source: ConditionSource) -> Condition {
    Condition { id: id.into(), statement: statement.into(), holds, source }
}

pub fn check_homogeneous_space(g: &GroupDescriptor, h: &GroupDescriptor, hint: &EmbeddingHint, flags: OrbitFlags) -> Result<HomogeneousSpaceReport> {
    let gd = compact_data(g);
    let hd = compact_data(h);
    if hd.compact_torus_rank > gd.compact_torus_rank {
        return Err(Error::InconsistentInput(format!(
            "{} has compact torus rank {} > {} of {}",
            h.name, hd.compact_torus_rank, gd.compact_torus_rank, g.name
        )));
    }
    let embedding = match resolve_embedding(g, h, hint) {
        Ok(e) => Some(e),
        Err(err) => {
            if flags.affine_space.is_none() && flags.trivial_cohomology.is_none() {
                return Err(err);
            }
            None
        }
    };

    let (d, witness) = match &embedding {
        None => (None, None),
        Some(_) if hd.compact_torus_rank != gd.compact_torus_rank => (
            Some(false),
            Some(format!("compact torus rank {} != {}", hd.compact_torus_rank, gd.compact_torus_rank)),
        ),
        Some(_) if hd.weyl_order != gd.weyl_order => {
            (Some(false), Some(format!("weyl order {} != {}", hd.weyl_order, gd.weyl_order)))
        }
        Some(_) => (Some(true), None),
    };

    for (name, flag) in [("affine_space", flags.affine_space), ("trivial_cohomology", flags.trivial_cohomology)] {
        if let (Some(v), Some(dv)) = (flag, d) {
            if v != dv {
                return Err(Error::InconsistentInput(format!(
                    "{name} = {v} contradicts the compact data of {}/{} ({})",
                    g.name,
                    h.name,
                    witness.as_deref().unwrap_or("maximal compact subgroups coincide")
                )));
            }
        }
    }
    let flag_value = flags.affine_space.or(flags.trivial_cohomology);
    let smooth = d.or(flag_value).unwrap_or(false);
    let (d_holds, d_source) = match d {
        Some(v) => (v, ConditionSource::Computed),
        None => (smooth, ConditionSource::Derived),
    };
    let from_flag = |f: Option<bool>| match f {
        Some(v) => (v, ConditionSource::Flag),
        None => (smooth, ConditionSource::Derived),
    };
    let (e, e_src) = from_flag(flags.trivial_cohomology);
    let (e2, e2_src) = from_flag(flags.affine_space);
    let conditions = vec![
        condition("c", "H_G(pt) -> H_H(pt) is an isomorphism", d_holds, ConditionSource::Derived),
        condition("d", "a maximal compact subgroup of H is maximal compact in G", d_holds, d_source),
        condition("e", "H*(G/H) = R", e, e_src),
        condition("e'", "G/H is an affine space", e2, e2_src),
    ];
    Ok(HomogeneousSpaceReport {
        group: g.name.clone(),
        subgroup: h.name.clone(),
        smooth,
        group_data: gd,
        subgroup_data: hd,
        embedding,
        conditions,
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitDescriptor {
    pub name: String,
    pub stabilizer: GroupDescriptor,
    pub flags: OrbitFlags,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitStratification {
    pub group: GroupDescriptor,
    pub orbits: Vec<OrbitDescriptor>,
}

impl OrbitStratification {
    pub fn new(group: GroupDescriptor, orbits: Vec<OrbitDescriptor>) -> Result<Self> {
        if orbits.is_empty() {
            return Err(Error::InvalidPresentation("a variety needs at least one orbit".into()));
        }
        Ok(Self { group, orbits })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub orbit: String,
    pub report: HomogeneousSpaceReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietyReport {
    pub group: String,
    pub smooth: bool,
    pub failing_orbit: Option<String>,
    pub orbits: Vec<OrbitReport>,
}

pub fn check_variety(x: &OrbitStratification, hint: &EmbeddingHint) -> Result<VarietyReport> {
    check_variety_with(Execution::Auto, x, hint)
}

pub fn check_variety_with(exec: Execution, x: &OrbitStratification, hint: &EmbeddingHint) -> Result<VarietyReport> {
    let results = par::map(exec, &x.orbits, |o| check_homogeneous_space(&x.group, &o.stabilizer, hint, o.flags));
    let mut orbits = Vec::with_capacity(results.len());
    for (o, r) in x.orbits.iter().zip(results) {
        let report = r.map_err(|e| match e {
            Error::InconsistentInput(m) => Error::InconsistentInput(format!("orbit {}: {m}", o.name)),
            Error::UnsupportedEmbedding(m) => Error::UnsupportedEmbedding(format!("orbit {}: {m}", o.name)),
            other => other,
        })?;
        orbits.push(OrbitReport { orbit: o.name.clone(), report });
    }
    let failing_orbit = orbits.iter().find(|o| !o.report.smooth).map(|o| o.orbit.clone());
    Ok(VarietyReport { group: x.group.name.clone(), smooth: failing_orbit.is_none(), failing_orbit, orbits })
}
