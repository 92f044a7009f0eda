use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cartiercore::{AlgebraRecord, CartierAlgebraSpec, CartierModule};
use crate::error::{CartierError, Result};
use crate::fpmod::{ModRef, PresentedModule};
use crate::fppoly::{Caps, MonomialOrder, Ring, RingRef};
use crate::functorops::RingMap;
use crate::idealkit::Ideal;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSpec {
    pub p: u32,
    #[serde(default)]
    pub vars: Vec<String>,
}

/// Either an explicit presentation or a direct sum of cyclic modules R/I_1 + ... + R/I_k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclics: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapSpec {
    One(RingMap),
    Chain(Vec<RingMap>),
}

impl MapSpec {
    pub fn steps(&self) -> Vec<RingMap> {
        match self {
            MapSpec::One(m) => vec![m.clone()],
            MapSpec::Chain(v) => v.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "kebab-case")]
pub enum Op {
    Tau,
    Tauprime,
    Jumps,
    Gr,
    Stabilize,
    Nilpotent,
    Ass,
    Pullback,
    Pushforward,
    Check,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// Commutation statements for a ring map.
    Suite,
    /// Contraction inequality, the growth identity and the unboundedness detector.
    Gauge,
    /// Briancon-Skoda, Skoda and right-continuity at one parameter.
    Filtration,
    /// F-purity and F-regularity.
    Regularity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Task {
    pub op: Op,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_before: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sub: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e0: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<String>,
    /// Denominator caps (A, B) of the jump grid k / (p^A (p^B - 1)).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caps: Option<(u32, u32)>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub legacy: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidates: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_values: Option<Vec<u32>>,
    /// Expected values of result fields; a mismatch is a property failure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<BTreeMap<String, serde_json::Value>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub expect_negative: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    #[serde(default)]
    pub name: String,
    pub ring: RingSpec,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleSpec>,
    #[serde(default)]
    pub algebras: BTreeMap<String, AlgebraRecord>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapSpec>,
    #[serde(default)]
    pub tasks: Vec<Task>,
}

/// A scene with every name resolved against a ring.
#[derive(Clone, Debug)]
pub struct LoadedScene {
    pub scene: Scene,
    pub ring: RingRef,
    pub modules: BTreeMap<String, ModRef>,
    pub algebras: BTreeMap<String, CartierAlgebraSpec>,
}

pub fn parse_scene(text: &str, origin: &str) -> Result<Scene> {
    serde_json::from_str(text).map_err(|e| CartierError::Parse(format!("{origin}:{}:{}: {e}", e.line(), e.column())))
}

pub fn read_scene(path: &Path) -> Result<Scene> {
    let text = std::fs::read_to_string(path).map_err(|e| CartierError::Io(format!("{}: {e}", path.display())))?;
    parse_scene(&text, &path.display().to_string())
}

fn context<T>(what: String, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        CartierError::Parse(m) => CartierError::Parse(format!("{what}: {m}")),
        CartierError::InvalidStructure(m) => CartierError::InvalidStructure(format!("{what}: {m}")),
        CartierError::InvalidArgument(m) => CartierError::InvalidArgument(format!("{what}: {m}")),
        other => other,
    })
}

pub fn build_ring(spec: &RingSpec, e_max: Option<u32>) -> Result<RingRef> {
    let mut caps = Caps::default();
    if let Some(e) = e_max {
        caps.max_e = e;
    }
    Ring::with_order(spec.p, spec.vars.clone(), MonomialOrder::Grevlex, caps)
}

pub fn parse_ideal(ring: &RingRef, gens: &[String]) -> Result<Ideal> {
    if gens.is_empty() {
        return Ok(Ideal::zero(ring));
    }
    let refs: Vec<&str> = gens.iter().map(|s| s.as_str()).collect();
    Ideal::parse(ring, &refs)
}

pub fn build_module(ring: &RingRef, spec: &ModuleSpec) -> Result<ModRef> {
    if let Some(cyc) = &spec.cyclics {
        let ideals = cyc.iter().map(|g| parse_ideal(ring, g)).collect::<Result<Vec<_>>>()?;
        return PresentedModule::direct_sum_of_cyclics(ring, &ideals);
    }
    let rank = spec.rank.ok_or_else(|| CartierError::InvalidArgument("a module needs a rank or a list of cyclics".into()))?;
    PresentedModule::from_record(ring, &crate::fpmod::ModuleRecord { rank, relations: spec.relations.clone() })
}

impl LoadedScene {
    pub fn load(scene: Scene, e_max: Option<u32>) -> Result<LoadedScene> {
        let ring = build_ring(&scene.ring, e_max)?;
        let mut modules = BTreeMap::new();
        for (name, spec) in &scene.modules {
            modules.insert(name.clone(), context(format!("module '{name}'"), build_module(&ring, spec))?);
        }
        let mut algebras = BTreeMap::new();
        for (name, rec) in &scene.algebras {
            algebras.insert(name.clone(), context(format!("algebra '{name}'"), CartierAlgebraSpec::from_record(&ring, rec))?);
        }
        let loaded = LoadedScene { scene, ring, modules, algebras };
        for (i, task) in loaded.scene.tasks.iter().enumerate() {
            if let Some(m) = &task.map {
                if !loaded.scene.maps.contains_key(m) {
                    return Err(CartierError::InvalidArgument(format!("task {i}: unknown map '{m}'")));
                }
            }
            if task.module.is_some() || task.algebra.is_some() {
                context(format!("task {i}"), loaded.pair(task))?;
            }
        }
        Ok(loaded)
    }

    /// The validated Cartier module named by a task.
    pub fn pair(&self, task: &Task) -> Result<CartierModule> {
        let mname = task.module.as_deref().ok_or_else(|| CartierError::InvalidArgument("missing 'module'".into()))?;
        let aname = task.algebra.as_deref().ok_or_else(|| CartierError::InvalidArgument("missing 'algebra'".into()))?;
        let m = self.modules.get(mname).ok_or_else(|| CartierError::InvalidArgument(format!("unknown module '{mname}'")))?;
        let a = self.algebras.get(aname).ok_or_else(|| CartierError::InvalidArgument(format!("unknown algebra '{aname}'")))?;
        context(format!("pair ({mname}, {aname})"), CartierModule::validate(m, a))
    }

    pub fn map(&self, task: &Task) -> Result<Vec<RingMap>> {
        let name = task.map.as_deref().ok_or_else(|| CartierError::InvalidArgument("missing 'map'".into()))?;
        Ok(self.scene.maps[name].steps())
    }
}
