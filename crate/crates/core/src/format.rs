//! JSON documents for groups, groupoids, functors, finite spaces and covers.
//!
//! Objects and morphisms are referred to by their `id` strings (integers are
//! accepted and read as strings). A groupoid document is either explicit,
//!
//! ```json
//! { "objects": ["x", "y"],
//!   "morphisms": [{"id": "1x", "src": "x", "tgt": "x"}, ...],
//!   "compose": [["g", "f", "gf"], ...] }
//! ```
//!
//! with optional `identities` (object → morphism) and `inverses`
//! (morphism → morphism) maps, or `{"group": <group>}` for the one-object
//! groupoid of a group. A group is `{"table": [[..]]}`,
//! `{"perm_generators": ["(1 2)", "(1 2 3)"]}` on points `1..n`, or
//! `{"named": "S3"}`.
//!
//! A finite space lists its points and pairs `[x, y]` meaning `x ≤ y`; open
//! sets are the down-sets. A cover is a list of point lists.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cech::{FiniteSpace, OpenCover, PointSet};
use crate::error::{Error, Result};
use crate::functor::GroupoidFunctor;
use crate::group::FiniteGroup;
use crate::groupoid::{b_group, terminal, FiniteGroupoid, GroupoidData, MorId, MorphismDecl, ObjId};
use crate::mapping::FunctorGroupoid;

/// A string identifier that may be written as a JSON integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Ident {
    Name(String),
    Number(u64),
}

impl Ident {
    pub fn as_string(&self) -> String {
        match self {
            Ident::Name(s) => s.clone(),
            Ident::Number(n) => n.to_string(),
        }
    }
}

impl From<&str> for Ident {
    fn from(s: &str) -> Self {
        Ident::Name(s.to_string())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub named: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perm_generators: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub id: Ident,
    pub src: Ident,
    pub tgt: Ident,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objects: Option<Vec<Ident>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morphisms: Option<Vec<MorphismDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compose: Option<Vec<[Ident; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identities: Option<BTreeMap<String, Ident>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverses: Option<BTreeMap<String, Ident>>,
}

/// A functor between two groupoid documents. Give `morphisms` (objects then
/// follow identities), or `objects` alone when the domain is discrete, or
/// `by_label: true` to send everything to the same-named cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorDoc {
    pub domain: GroupoidDoc,
    pub codomain: GroupoidDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objects: Option<Vec<Ident>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morphisms: Option<Vec<Ident>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub by_label: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub named: Option<String>,
    #[serde(default)]
    pub points: Vec<Ident>,
    #[serde(default)]
    pub relations: Vec<[Ident; 2]>,
}

pub type CoverDoc = Vec<Vec<Ident>>;

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Named groups: `trivial`, `Zn`/`Cn`, `Sn`, `An`, `Dn` (order 2n), `Q8`.
pub fn named_group(name: &str) -> Result<FiniteGroup> {
    let name = name.trim();
    if name.eq_ignore_ascii_case("trivial") || name == "1" {
        return Ok(FiniteGroup::trivial());
    }
    if name.eq_ignore_ascii_case("Q8") {
        return Ok(FiniteGroup::quaternion());
    }
    let unknown = || Error::Parse(format!("unknown group name {name:?}"));
    let (head, tail) = name.split_at(name.find(|c: char| c.is_ascii_digit()).ok_or_else(unknown)?);
    let n: usize = tail.parse().map_err(|_| unknown())?;
    match head {
        "Z" | "C" | "Z/" if n >= 1 => Ok(FiniteGroup::cyclic(n)),
        "S" => Ok(FiniteGroup::symmetric(n)),
        "A" => Ok(FiniteGroup::alternating(n)),
        "D" if n >= 3 => Ok(FiniteGroup::dihedral(n)),
        _ => Err(unknown()),
    }
}

impl GroupDoc {
    pub fn build(&self) -> Result<FiniteGroup> {
        let given = [self.named.is_some(), self.table.is_some(), self.perm_generators.is_some()];
        if given.iter().filter(|&&b| b).count() != 1 {
            return Err(Error::Parse("a group needs exactly one of named, table, perm_generators".into()));
        }
        if let Some(name) = &self.named {
            return named_group(name);
        }
        if let Some(table) = &self.table {
            return FiniteGroup::from_table(table.clone(), self.labels.clone());
        }
        FiniteGroup::from_cycle_notation(self.perm_generators.as_ref().expect("checked"), self.degree)
    }
}

fn index_of(names: &HashMap<String, usize>, id: &Ident, what: &str) -> Result<usize> {
    names.get(&id.as_string()).copied().ok_or_else(|| Error::Parse(format!("unknown {what} {:?}", id.as_string())))
}

fn name_index(ids: &[Ident], what: &str) -> Result<HashMap<String, usize>> {
    let mut out = HashMap::new();
    for (i, id) in ids.iter().enumerate() {
        if out.insert(id.as_string(), i).is_some() {
            return Err(Error::Parse(format!("duplicate {what} id {:?}", id.as_string())));
        }
    }
    Ok(out)
}

impl GroupoidDoc {
    /// The unvalidated table this document describes.
    pub fn to_data(&self) -> Result<GroupoidData> {
        if let Some(g) = &self.group {
            if self.objects.is_some() || self.morphisms.is_some() || self.compose.is_some() {
                return Err(Error::Parse("a group document cannot also list cells".into()));
            }
            return Ok(b_group(&g.build()?).to_data());
        }
        let objects = self.objects.clone().unwrap_or_default();
        let morphisms = self.morphisms.clone().unwrap_or_default();
        let obj_names = name_index(&objects, "object")?;
        let mor_ids: Vec<Ident> = morphisms.iter().map(|m| m.id.clone()).collect();
        let mor_names = name_index(&mor_ids, "morphism")?;
        // unknown endpoints are kept as out-of-range indices so validation
        // can report them
        let endpoint = |id: &Ident| obj_names.get(&id.as_string()).copied().unwrap_or(usize::MAX);
        let decls = morphisms
            .iter()
            .map(|m| MorphismDecl { label: m.id.as_string(), src: endpoint(&m.src), tgt: endpoint(&m.tgt) })
            .collect();
        let compose = self
            .compose
            .iter()
            .flatten()
            .map(|[s, f, r]| {
                Ok([index_of(&mor_names, s, "morphism")?, index_of(&mor_names, f, "morphism")?, index_of(&mor_names, r, "morphism")?])
            })
            .collect::<Result<Vec<_>>>()?;
        let identities = match &self.identities {
            None => None,
            Some(map) => {
                let mut ids = vec![usize::MAX; objects.len()];
                for (o, m) in map {
                    ids[index_of(&obj_names, &Ident::Name(o.clone()), "object")?] = index_of(&mor_names, m, "morphism")?;
                }
                if ids.contains(&usize::MAX) {
                    return Err(Error::Parse("identities must name every object".into()));
                }
                Some(ids)
            }
        };
        let inverses = match &self.inverses {
            None => None,
            Some(map) => {
                let mut inv = vec![usize::MAX; morphisms.len()];
                for (m, n) in map {
                    inv[index_of(&mor_names, &Ident::Name(m.clone()), "morphism")?] = index_of(&mor_names, n, "morphism")?;
                }
                if inv.contains(&usize::MAX) {
                    return Err(Error::Parse("inverses must name every morphism".into()));
                }
                Some(inv)
            }
        };
        Ok(GroupoidData {
            objects: objects.iter().map(Ident::as_string).collect(),
            morphisms: decls,
            compose,
            identities,
            inverses,
        })
    }

    pub fn build(&self) -> Result<FiniteGroupoid> {
        self.to_data()?.into_groupoid()
    }

    /// Explicit document with every table entry, identities and inverses.
    /// Labels are used as ids when they are unique, positions otherwise.
    pub fn from_groupoid(g: &FiniteGroupoid) -> Self {
        let obj_ids = unique_ids(g.objects().map(|x| g.object_label(x).into_owned()).collect());
        let mor_ids = unique_ids(g.morphisms().map(|m| g.morphism_label(m).into_owned()).collect());
        let id = |m: MorId| Ident::Name(mor_ids[m.index()].clone());
        let data = g.to_data();
        GroupoidDoc {
            group: None,
            objects: Some(obj_ids.iter().map(|s| Ident::Name(s.clone())).collect()),
            morphisms: Some(
                g.morphisms()
                    .map(|m| MorphismDoc {
                        id: id(m),
                        src: Ident::Name(obj_ids[g.source(m).index()].clone()),
                        tgt: Ident::Name(obj_ids[g.target(m).index()].clone()),
                    })
                    .collect(),
            ),
            compose: Some(
                data.compose.iter().map(|&[s, f, r]| [id(MorId(s as u32)), id(MorId(f as u32)), id(MorId(r as u32))]).collect(),
            ),
            identities: Some(g.objects().map(|x| (obj_ids[x.index()].clone(), id(g.identity(x)))).collect()),
            inverses: Some(g.morphisms().map(|m| (mor_ids[m.index()].clone(), id(g.inverse(m)))).collect()),
        }
    }
}

fn unique_ids(labels: Vec<String>) -> Vec<String> {
    let mut seen = std::collections::HashSet::new();
    if labels.iter().all(|l| seen.insert(l.as_str())) {
        labels
    } else {
        (0..labels.len()).map(|i| i.to_string()).collect()
    }
}

pub fn parse_group(text: &str) -> Result<FiniteGroup> {
    serde_json::from_str::<GroupDoc>(text).map_err(parse_error)?.build()
}

pub fn parse_groupoid(text: &str) -> Result<FiniteGroupoid> {
    serde_json::from_str::<GroupoidDoc>(text).map_err(parse_error)?.build()
}

/// Accepts a group document wherever a groupoid is expected.
pub fn parse_groupoid_or_group(text: &str) -> Result<FiniteGroupoid> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(parse_error)?;
    let is_group = value
        .as_object()
        .is_some_and(|o| o.contains_key("table") || o.contains_key("perm_generators") || o.contains_key("named"));
    if is_group {
        Ok(b_group(&serde_json::from_value::<GroupDoc>(value).map_err(parse_error)?.build()?))
    } else {
        serde_json::from_value::<GroupoidDoc>(value).map_err(parse_error)?.build()
    }
}

/// Accepts a group document, or a groupoid document of the form `{"group": ..}`.
pub fn parse_group_or_groupoid_group(text: &str) -> Result<FiniteGroup> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(parse_error)?;
    match value.get("group") {
        Some(inner) => serde_json::from_value::<GroupDoc>(inner.clone()).map_err(parse_error)?.build(),
        None => serde_json::from_value::<GroupDoc>(value).map_err(parse_error)?.build(),
    }
}

impl FunctorDoc {
    pub fn build(&self) -> Result<GroupoidFunctor> {
        let domain = Arc::new(self.domain.build()?);
        let codomain = Arc::new(self.codomain.build()?);
        functor_from_parts(domain, codomain, self.objects.as_deref(), self.morphisms.as_deref(), self.by_label)
    }
}

pub fn functor_from_parts(
    domain: Arc<FiniteGroupoid>,
    codomain: Arc<FiniteGroupoid>,
    objects: Option<&[Ident]>,
    morphisms: Option<&[Ident]>,
    by_label: bool,
) -> Result<GroupoidFunctor> {
    let obj_names: HashMap<String, usize> =
        codomain.objects().map(|x| (codomain.object_label(x).into_owned(), x.index())).collect();
    let mor_names: HashMap<String, usize> =
        codomain.morphisms().map(|m| (codomain.morphism_label(m).into_owned(), m.index())).collect();
    let morphism_ids: Option<Vec<Ident>> = match (morphisms, by_label) {
        (Some(m), false) => Some(m.to_vec()),
        (None, true) => Some(domain.morphisms().map(|m| Ident::Name(domain.morphism_label(m).into_owned())).collect()),
        (None, false) => None,
        (Some(_), true) => return Err(Error::Parse("give either morphisms or by_label, not both".into())),
    };
    let f = match morphism_ids {
        Some(ids) => {
            if ids.len() != domain.morphism_count() {
                return Err(Error::Parse(format!(
                    "morphism map has {} entries for {} morphisms",
                    ids.len(),
                    domain.morphism_count()
                )));
            }
            let map = ids.iter().map(|i| index_of(&mor_names, i, "morphism").map(|k| MorId(k as u32))).collect::<Result<_>>()?;
            GroupoidFunctor::from_morphism_map(domain, codomain, map)?
        }
        None => {
            let ids = objects.ok_or_else(|| Error::Parse("a functor needs morphisms, objects or by_label".into()))?;
            if !domain.is_discrete() {
                return Err(Error::Parse("an object map alone only determines functors out of discrete groupoids".into()));
            }
            if ids.len() != domain.object_count() {
                return Err(Error::Parse("object map has the wrong length".into()));
            }
            let objs: Vec<ObjId> =
                ids.iter().map(|i| index_of(&obj_names, i, "object").map(|k| ObjId(k as u32))).collect::<Result<_>>()?;
            let map = domain.morphisms().map(|m| codomain.identity(objs[domain.source(m).index()])).collect();
            GroupoidFunctor::from_morphism_map(domain, codomain, map)?
        }
    };
    if let Some(ids) = objects {
        let expected: Vec<String> = f.object_map().iter().map(|&x| f.codomain().object_label(x).into_owned()).collect();
        let given: Vec<String> = ids.iter().map(Ident::as_string).collect();
        if expected != given {
            return Err(Error::InvalidFunctor("object map disagrees with the morphism map".into()));
        }
    }
    Ok(f)
}

pub fn parse_functor(text: &str) -> Result<GroupoidFunctor> {
    serde_json::from_str::<FunctorDoc>(text).map_err(parse_error)?.build()
}

/// The functor from the terminal groupoid picking out `object`.
pub fn point_functor(codomain: &Arc<FiniteGroupoid>, object: ObjId) -> Result<GroupoidFunctor> {
    GroupoidFunctor::point(&Arc::new(terminal()), codomain, object)
}

impl SpaceDoc {
    pub fn build(&self) -> Result<FiniteSpace> {
        if let Some(name) = &self.named {
            if !self.points.is_empty() || !self.relations.is_empty() {
                return Err(Error::Parse("a named space cannot also list points".into()));
            }
            return named_space(name);
        }
        let names = name_index(&self.points, "point")?;
        let relations = self
            .relations
            .iter()
            .map(|[x, y]| Ok((index_of(&names, x, "point")?, index_of(&names, y, "point")?)))
            .collect::<Result<Vec<_>>>()?;
        FiniteSpace::new(self.points.iter().map(Ident::as_string).collect(), &relations)
    }

    pub fn from_space(space: &FiniteSpace) -> Self {
        let label = |i: usize| Ident::Name(space.labels()[i].clone());
        SpaceDoc {
            named: None,
            points: (0..space.len()).map(label).collect(),
            relations: space.relations().into_iter().map(|(x, y)| [label(x), label(y)]).collect(),
        }
    }
}

/// `point`, `pseudo_circle`, or `discreteN`.
pub fn named_space(name: &str) -> Result<FiniteSpace> {
    match name {
        "point" => Ok(FiniteSpace::point()),
        "pseudo_circle" | "pseudo-circle" => Ok(FiniteSpace::pseudo_circle()),
        _ => match name.strip_prefix("discrete").and_then(|n| n.parse().ok()) {
            Some(n) => FiniteSpace::discrete(n),
            None => Err(Error::Parse(format!("unknown space name {name:?}"))),
        },
    }
}

pub fn parse_space(text: &str) -> Result<FiniteSpace> {
    serde_json::from_str::<SpaceDoc>(text).map_err(parse_error)?.build()
}

pub fn parse_cover(space: &FiniteSpace, text: &str) -> Result<OpenCover> {
    let doc: CoverDoc = serde_json::from_str(text).map_err(parse_error)?;
    let sets = doc
        .iter()
        .map(|set| {
            set.iter().try_fold(0 as PointSet, |acc, p| {
                space
                    .point_index(&p.as_string())
                    .map(|i| acc | 1 << i)
                    .ok_or_else(|| Error::Parse(format!("unknown point {:?}", p.as_string())))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    OpenCover::new(space, sets)
}

pub fn cover_doc(space: &FiniteSpace, cover: &OpenCover) -> CoverDoc {
    cover
        .sets
        .iter()
        .map(|&s| (0..space.len()).filter(|&i| s >> i & 1 == 1).map(|i| Ident::Name(space.labels()[i].clone())).collect())
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FunctorEntry {
    pub id: String,
    pub objects: Vec<String>,
    pub morphisms: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransformationEntry {
    pub id: String,
    pub source: String,
    pub target: String,
    pub components: Vec<String>,
}

/// A functor groupoid with every functor and natural transformation
/// expanded to its tables, in terms of the codomain's labels.
#[derive(Clone, Debug, Serialize)]
pub struct FunctorGroupoidDoc {
    pub groupoid: GroupoidDoc,
    pub functors: Vec<FunctorEntry>,
    pub transformations: Vec<TransformationEntry>,
}

impl FunctorGroupoidDoc {
    pub fn new(fg: &FunctorGroupoid) -> Self {
        let g = &fg.groupoid;
        let x = fg.codomain();
        let xo = |o: &ObjId| x.object_label(*o).into_owned();
        let xm = |m: &MorId| x.morphism_label(*m).into_owned();
        FunctorGroupoidDoc {
            groupoid: GroupoidDoc::from_groupoid(g),
            functors: g
                .objects()
                .map(|f| FunctorEntry {
                    id: g.object_label(f).into_owned(),
                    objects: fg.functor_object_map(f).iter().map(xo).collect(),
                    morphisms: fg.functor_morphism_map(f).iter().map(xm).collect(),
                })
                .collect(),
            transformations: g
                .morphisms()
                .map(|m| TransformationEntry {
                    id: g.morphism_label(m).into_owned(),
                    source: g.object_label(g.source(m)).into_owned(),
                    target: g.object_label(g.target(m)).into_owned(),
                    components: fg.transformation_components(m).iter().map(xm).collect(),
                })
                .collect(),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_groupoid_round_trip() {
        let text = r#"{
            "objects": ["x", "y"],
            "morphisms": [
                {"id": "1x", "src": "x", "tgt": "x"},
                {"id": "1y", "src": "y", "tgt": "y"},
                {"id": "f", "src": "x", "tgt": "y"},
                {"id": "g", "src": "y", "tgt": "x"}
            ],
            "compose": [
                ["1x", "1x", "1x"], ["1y", "1y", "1y"],
                ["f", "1x", "f"], ["1y", "f", "f"],
                ["g", "1y", "g"], ["1x", "g", "g"],
                ["g", "f", "1x"], ["f", "g", "1y"]
            ]
        }"#;
        let g = parse_groupoid(text).unwrap();
        assert_eq!((g.object_count(), g.morphism_count()), (2, 4));
        assert_eq!(g.inverse(MorId(2)), MorId(3));
        let doc = GroupoidDoc::from_groupoid(&g);
        let again = doc.build().unwrap();
        assert_eq!(again, g);
        let json = to_json(&doc);
        assert_eq!(parse_groupoid(&json).unwrap(), g);
    }

    #[test]
    fn broken_tables_are_reported() {
        let text = r#"{"objects": ["x"], "morphisms": [{"id": "a", "src": "x", "tgt": "y"}], "compose": []}"#;
        assert!(matches!(parse_groupoid(text), Err(Error::InvalidGroupoid(_))));
        assert!(matches!(parse_groupoid("{\"objects\": 3}"), Err(Error::Parse(_))));
        assert!(matches!(parse_groupoid(r#"{"objects": ["x"], "morphisms": [], "compose": [["a","a","a"]]}"#), Err(Error::Parse(_))));
    }

    #[test]
    fn groups_in_every_form() {
        let s3 = parse_group(r#"{"perm_generators": ["(1 2)", "(1 2 3)"]}"#).unwrap();
        assert_eq!(s3.order(), 6);
        let z4 = parse_group(r#"{"table": [[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]]}"#).unwrap();
        assert!(z4.is_abelian() && z4.order() == 4);
        assert_eq!(parse_group(r#"{"named": "Q8"}"#).unwrap().order(), 8);
        assert_eq!(named_group("D4").unwrap().order(), 8);
        assert_eq!(named_group("A4").unwrap().order(), 12);
        assert!(parse_group(r#"{"named": "S3", "table": [[0]]}"#).is_err());
        let bg = parse_groupoid_or_group(r#"{"named": "Z5"}"#).unwrap();
        assert_eq!(bg.morphism_count(), 5);
        let bg = parse_groupoid(r#"{"group": {"named": "S3"}}"#).unwrap();
        assert_eq!(bg.morphism_count(), 6);
    }

    #[test]
    fn inclusion_by_label() {
        let text = r#"{
            "domain": {"group": {"perm_generators": ["(1 2 3)"]}},
            "codomain": {"group": {"perm_generators": ["(1 2)", "(1 2 3)"]}},
            "by_label": true
        }"#;
        let f = parse_functor(text).unwrap();
        assert_eq!(f.domain().morphism_count(), 3);
        f.check().unwrap();
    }

    #[test]
    fn spaces_and_covers() {
        let k = parse_space(r#"{"points": ["a","b","c","d"], "relations": [["a","c"],["b","c"],["a","d"],["b","d"]]}"#).unwrap();
        assert_eq!(k, FiniteSpace::pseudo_circle());
        assert_eq!(SpaceDoc::from_space(&k).build().unwrap(), k);
        let cover = parse_cover(&k, r#"[["a","b","c"],["a","b","d"]]"#).unwrap();
        assert_eq!(cover, OpenCover::minimal(&k));
        assert!(parse_cover(&k, r#"[["c"],["a","b","d"]]"#).is_err());
        assert_eq!(parse_space(r#"{"named": "discrete3"}"#).unwrap().len(), 3);
    }
}
