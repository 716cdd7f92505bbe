//! A JSON workspace of named objects, falling back to the built-in fixtures.
//!
//! ```json
//! {
//!   "groups":          {"name": {"elements": [...], "table": [[...]]}},
//!   "representations": {"name": {"group": "Z2", "dim": 1, "matrices": {"e": [["1"]], "g": [["-1"]]}}},
//!   "spaces":          {"name": {"dim": 2, "simplices": [...], "faces": {...}, "base": "v0"}},
//!   "labelings":       {"name": {"space": "rp2-6", "group": "Z2", "generators": ["g", "e", ...]}},
//!   "cdgas":           {"name": {"group": "Z2", "generators": [...], "differential": {...}, "action": {...}}},
//!   "homotopies":      {"name": {"source": "A", "target": "B", "f1": {...}, "f2": {...}, "homotopy": {...}}}
//! }
//! ```
//!
//! Every reference is resolved when the file is loaded, so a workspace that
//! loads is referentially complete.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;

use dgtan::eqcdga::{CdgaJson, HomotopyCandidate, HomotopyJson, PresentedGCdga};
use dgtan::fixtures;
use dgtan::group::GroupJson;
use dgtan::repcat::{same_group, GroupRef, RepresentationJson};
use dgtan::simpset::{
    edge_labeling_from_hom, first_surjective_labeling, fundamental_group_presentation, EdgeLabeling,
    SimplicialSetJson, DEFAULT_COSET_BUDGET,
};
use dgtan::{FinSimplicialSet, FiniteGroup, Representation};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceJson {
    #[serde(default)]
    pub groups: BTreeMap<String, GroupJson>,
    #[serde(default)]
    pub representations: BTreeMap<String, RepresentationJson>,
    #[serde(default)]
    pub spaces: BTreeMap<String, SimplicialSetJson>,
    #[serde(default)]
    pub labelings: BTreeMap<String, LabelingJson>,
    #[serde(default)]
    pub cdgas: BTreeMap<String, CdgaJson>,
    #[serde(default)]
    pub homotopies: BTreeMap<String, HomotopyJson>,
}

/// Either the images of the simplified edge-path generators of `π₁(space)`,
/// or an element for every nondegenerate edge.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelingJson {
    pub space: String,
    pub group: GroupRef,
    #[serde(default)]
    pub generators: Option<Vec<String>>,
    #[serde(default)]
    pub edges: Option<BTreeMap<String, String>>,
}

#[derive(Debug)]
pub struct NamedLabeling {
    pub space: String,
    pub labeling: EdgeLabeling,
}

#[derive(Debug, Default)]
pub struct Workspace {
    groups: BTreeMap<String, Arc<FiniteGroup>>,
    representations: BTreeMap<String, Representation>,
    spaces: BTreeMap<String, Arc<FinSimplicialSet>>,
    labelings: BTreeMap<String, NamedLabeling>,
    cdgas: BTreeMap<String, Arc<PresentedGCdga>>,
    homotopies: BTreeMap<String, HomotopyCandidate>,
}

impl Workspace {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let json: WorkspaceJson =
            serde_json::from_str(&text).with_context(|| format!("parsing workspace {}", path.display()))?;
        Self::from_json(json)
    }

    pub fn from_json(j: WorkspaceJson) -> Result<Self> {
        let mut ws = Workspace::default();
        for (name, g) in j.groups {
            let group = FiniteGroup::from_json(&g).with_context(|| format!("group {name}"))?;
            ws.groups.insert(name, Arc::new(group));
        }
        for (name, s) in j.spaces {
            let space = FinSimplicialSet::from_json(&s).with_context(|| format!("space {name}"))?;
            ws.spaces.insert(name, Arc::new(space));
        }
        for (name, r) in j.representations {
            let group = ws.group_ref(&r.group).with_context(|| format!("representation {name}"))?;
            let rep = Representation::from_json(&r, |_| Some((*group).clone()))
                .with_context(|| format!("representation {name}"))?;
            ws.representations.insert(name, rep);
        }
        for (name, l) in j.labelings {
            let labeling = ws.labeling_from_json(&l).with_context(|| format!("labeling {name}"))?;
            ws.labelings.insert(name, NamedLabeling { space: l.space, labeling });
        }
        for (name, c) in j.cdgas {
            let group = ws.group_ref(&c.group).with_context(|| format!("cdga {name}"))?;
            let cdga = PresentedGCdga::from_json_in(&c, group).with_context(|| format!("cdga {name}"))?;
            ws.cdgas.insert(name, Arc::new(cdga));
        }
        for (name, h) in j.homotopies {
            let candidate = HomotopyCandidate::from_json(&h, |n| ws.cdga(n).ok())
                .with_context(|| format!("homotopy {name}"))?;
            ws.homotopies.insert(name, candidate);
        }
        Ok(ws)
    }

    fn group_ref(&self, r: &GroupRef) -> Result<Arc<FiniteGroup>> {
        match r {
            GroupRef::Named(n) => self.group(n),
            GroupRef::Inline(j) => Ok(Arc::new(FiniteGroup::from_json(j)?)),
        }
    }

    fn labeling_from_json(&self, l: &LabelingJson) -> Result<EdgeLabeling> {
        let space = self.space(&l.space)?;
        let group = self.group_ref(&l.group)?;
        let element = |n: &str| group.element(n).ok_or_else(|| anyhow!("group has no element {n:?}"));
        match (&l.generators, &l.edges) {
            (Some(gens), None) => {
                let p = fundamental_group_presentation(&space)?.simplify();
                let images = gens.iter().map(|n| element(n)).collect::<Result<Vec<_>>>()?;
                Ok(edge_labeling_from_hom(&space, &p, group.clone(), &images)?)
            }
            (None, Some(edges)) => {
                let mut labels = BTreeMap::new();
                for (e, g) in edges {
                    let id = space.id_of(e).ok_or_else(|| anyhow!("space {} has no simplex {e:?}", l.space))?;
                    labels.insert(id, element(g)?);
                }
                let labeling = EdgeLabeling { group: group.clone(), labels };
                labeling.validate(&space)?;
                Ok(labeling)
            }
            _ => bail!("give exactly one of \"generators\" and \"edges\""),
        }
    }

    pub fn group(&self, name: &str) -> Result<Arc<FiniteGroup>> {
        if let Some(g) = self.groups.get(name) {
            return Ok(g.clone());
        }
        fixtures::group(name).map(Arc::new).ok_or_else(|| anyhow!(unknown("group", name, &fixtures::GROUPS)))
    }

    pub fn space(&self, name: &str) -> Result<Arc<FinSimplicialSet>> {
        if let Some(s) = self.spaces.get(name) {
            return Ok(s.clone());
        }
        fixtures::space(name).map(Arc::new).ok_or_else(|| anyhow!(unknown("space", name, &fixtures::SPACES)))
    }

    pub fn cdga(&self, name: &str) -> Result<Arc<PresentedGCdga>> {
        if let Some(c) = self.cdgas.get(name) {
            return Ok(c.clone());
        }
        fixtures::cdga(name).map(Arc::new).ok_or_else(|| anyhow!(unknown("cdga", name, &fixtures::CDGAS)))
    }

    pub fn homotopy(&self, name: &str) -> Result<&HomotopyCandidate> {
        self.homotopies.get(name).ok_or_else(|| anyhow!("no homotopy named {name:?} in the workspace"))
    }

    /// A representation of `group` by name: workspace entries first, then the
    /// built-in names.
    pub fn representation(&self, group: &Arc<FiniteGroup>, name: &str) -> Result<Representation> {
        if let Some(r) = self.representations.get(name) {
            if !same_group(r.group(), group) {
                return Err(dgtan::Error::GroupMismatch(format!("representation {name} is over a different group")).into());
            }
            return Ok(r.clone());
        }
        fixtures::representation(group, name)
            .ok_or_else(|| anyhow!("no representation {name:?} of this group (built-in: {})", fixtures::REPRESENTATIONS.join(", ")))
    }

    /// Every representation of `group` known by name.
    pub fn representations_of(&self, group: &Arc<FiniteGroup>) -> BTreeMap<String, Representation> {
        let mut out: BTreeMap<String, Representation> = fixtures::REPRESENTATIONS
            .iter()
            .filter_map(|n| fixtures::representation(group, n).map(|r| (n.to_string(), r)))
            .collect();
        for (n, r) in &self.representations {
            if same_group(r.group(), group) {
                out.insert(n.clone(), r.clone());
            }
        }
        out
    }

    /// The named labeling of `space`, or the first surjection of `π₁` onto `group`.
    pub fn labeling(&self, space_name: &str, space: &FinSimplicialSet, group: &Arc<FiniteGroup>, name: Option<&str>) -> Result<EdgeLabeling> {
        match name {
            Some(n) => {
                let l = self.labelings.get(n).ok_or_else(|| anyhow!("no labeling named {n:?} in the workspace"))?;
                if l.space != space_name {
                    bail!("labeling {n} is for space {}, not {space_name}", l.space);
                }
                if !same_group(&l.labeling.group, group) {
                    return Err(dgtan::Error::GroupMismatch(format!("labeling {n} is over a different group")).into());
                }
                Ok(l.labeling.clone())
            }
            None => Ok(first_surjective_labeling(space, group.clone(), DEFAULT_COSET_BUDGET)?),
        }
    }

    pub fn names(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        out.extend(self.groups.keys().map(|n| ("group", n.clone())));
        out.extend(self.representations.keys().map(|n| ("representation", n.clone())));
        out.extend(self.spaces.keys().map(|n| ("space", n.clone())));
        out.extend(self.labelings.keys().map(|n| ("labeling", n.clone())));
        out.extend(self.cdgas.keys().map(|n| ("cdga", n.clone())));
        out.extend(self.homotopies.keys().map(|n| ("homotopy", n.clone())));
        out
    }
}

fn unknown(kind: &str, name: &str, builtin: &[&str]) -> String {
    format!("unknown {kind} {name:?} (built-in: {})", builtin.join(", "))
}
