use std::path::Path;
use std::sync::Arc;

use mapstack::cech::{atlas_epimorphism_check, cech_groupoid, classify_hs, ClassifyBounds, FiniteSpace};
use mapstack::corpus::exponential_triples;
use mapstack::equivalence::{are_equivalent, is_essentially_discrete, DEFAULT_GROUP_BOUND};
use mapstack::fibration::{homotopy_fiber, omega, replace};
use mapstack::format::{self, GroupoidDoc};
use mapstack::group::FiniteGroup;
use mapstack::groupoid::{b_group, validate, FiniteGroupoid, ObjId};
use mapstack::homology::{complex_homology, cyclic_group_homology_oracle, nerve};
use mapstack::loops::{borel_groupoid, conjugacy, inertia_groupoid, loop_decomposition};
use mapstack::mapping::{count_functors, exponential_check, functor_groupoid};
use mapstack::{Error, GroupoidFunctor, Result};

use crate::report::Report;

/// Numeric limits shared by every subcommand.
#[derive(Clone, Copy, Debug)]
pub struct Bounds {
    pub functors: u64,
    pub nerve: u64,
    pub covers_max: usize,
}

/// A report plus an exit status that overrides the one implied by its checks.
pub struct Outcome {
    pub report: Report,
    pub rejected_input: bool,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Outcome { report, rejected_input: false }
    }
}

/// Reads an input argument: a path to a JSON document, or failing that a
/// built-in name such as `S3` or `pseudo_circle`.
fn read_input(arg: &str) -> Result<Option<String>> {
    let path = Path::new(arg);
    if path.exists() {
        std::fs::read_to_string(path).map(Some).map_err(|e| Error::Parse(format!("{arg}: {e}")))
    } else {
        Ok(None)
    }
}

fn with_context<T>(arg: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{arg}: {m}")),
        other => other,
    })
}

fn load_groupoid(arg: &str) -> Result<FiniteGroupoid> {
    match read_input(arg)? {
        Some(text) => with_context(arg, format::parse_groupoid_or_group(&text)),
        None => named(arg).map(|g| b_group(&g)),
    }
}

fn load_group(arg: &str) -> Result<FiniteGroup> {
    match read_input(arg)? {
        Some(text) => with_context(arg, format::parse_group_or_groupoid_group(&text)),
        None => named(arg),
    }
}

fn load_space(arg: &str) -> Result<FiniteSpace> {
    match read_input(arg)? {
        Some(text) => with_context(arg, format::parse_space(&text)),
        None => format::named_space(arg)
            .map_err(|_| Error::Parse(format!("{arg}: no such file, and not a built-in space name"))),
    }
}

fn named(arg: &str) -> Result<FiniteGroup> {
    format::named_group(arg).map_err(|_| Error::Parse(format!("{arg}: no such file, and not a built-in group name")))
}

fn describe(g: &FiniteGroupoid) -> String {
    format!("{} objects, {} morphisms, {} components", g.object_count(), g.morphism_count(), g.components().len())
}

fn describe_group(g: &FiniteGroup) -> String {
    let gens: Vec<&str> = g.generating_set().iter().map(|&a| g.label(a)).collect();
    format!("order {}, generated by {}", g.order(), list(&gens))
}

fn list<S: AsRef<str>>(items: &[S]) -> String {
    let parts: Vec<&str> = items.iter().map(AsRef::as_ref).collect();
    format!("[{}]", parts.join(", "))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn object_list(g: &FiniteGroupoid, objs: &[ObjId]) -> String {
    let labels: Vec<String> = objs.iter().map(|&o| g.object_label(o).into_owned()).collect();
    list(&labels)
}

pub fn validate_cmd(arg: &str) -> Result<Outcome> {
    let mut r = Report::new("validate", "the input satisfies the groupoid axioms (or the functor laws, or is a finite poset)");
    r.input("file", arg);
    let text = read_input(arg)?.ok_or_else(|| Error::Parse(format!("{arg}: no such file")))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{arg}: {e}")))?;
    if value.get("points").is_some() || value.get("relations").is_some() {
        let k = with_context(arg, format::parse_space(&text))?;
        let opens = k.open_sets(1 << 20)?;
        r.input("kind", "finite space");
        r.result("points", k.len()).result("open sets", opens.len());
        r.result("minimal cover", mapstack::cech::OpenCover::minimal(&k).format(&k));
        r.check("preorder is antisymmetric", true, "transitive closure has no cycles");
        return Ok(r.into());
    }
    if value.get("domain").is_some() || value.get("codomain").is_some() {
        let f = with_context(arg, format::parse_functor(&text))?;
        r.input("kind", "functor");
        r.result("domain", describe(f.domain())).result("codomain", describe(f.codomain()));
        r.result("injective on objects", yes(f.is_injective_on_objects()));
        r.check("functor laws", f.check().is_ok(), "identities and composites preserved");
        return Ok(r.into());
    }
    let is_group = ["table", "perm_generators", "named"].iter().any(|k| value.get(k).is_some());
    if is_group {
        let g = with_context(arg, format::parse_group(&text))?;
        r.input("kind", "group");
        r.result("group", describe_group(&g)).result("abelian", yes(g.is_abelian()));
        let data = b_group(&g).to_data();
        let report = validate(&data);
        r.check("one-object groupoid axioms", report.is_valid(), format!("{} composition entries", data.compose.len()));
        return Ok(r.into());
    }
    let doc: GroupoidDoc = serde_json::from_value(value).map_err(|e| Error::Parse(format!("{arg}: {e}")))?;
    let data = with_context(arg, doc.to_data())?;
    r.input("kind", "groupoid");
    r.result("objects", data.objects.len()).result("morphisms", data.morphisms.len());
    let report = validate(&data);
    r.result("violations", report.violations.len());
    let rows = report.violations.iter().take(20).enumerate().map(|(i, v)| vec![(i + 1).to_string(), v.to_string()]).collect();
    if !report.is_valid() {
        r.table("violations (first 20)", &["#", "counterexample"], rows);
    }
    r.check("groupoid axioms", report.is_valid(), if report.is_valid() { "all hold".to_string() } else { format!("{} violated", report.violations.len()) });
    let rejected = !report.is_valid();
    Ok(Outcome { report: r, rejected_input: rejected })
}

pub fn equiv(a: &str, b: &str) -> Result<Outcome> {
    let x = Arc::new(load_groupoid(a)?);
    let y = Arc::new(load_groupoid(b)?);
    let mut r = Report::new("equiv", "two groupoids are equivalent iff a fully faithful, essentially surjective functor exists");
    r.input("A", format!("{a}: {}", describe(&x))).input("B", format!("{b}: {}", describe(&y)));
    let e = are_equivalent(&x, &y, DEFAULT_GROUP_BOUND)?;
    r.result("equivalent", yes(e.is_equivalent()));
    if let Some(w) = e.witness() {
        let f = &w.functor;
        let rows = x.objects().map(|o| vec![x.object_label(o).into_owned(), y.object_label(f.object(o)).into_owned()]).collect();
        r.table("witness on objects", &["A", "B"], rows);
        r.check("witness is fully faithful and essentially surjective", w.verify(), "re-checked on every hom-set");
    }
    if let Some(why) = e.refutation() {
        r.result("refutation", why);
    }
    Ok(r.into())
}

pub fn map(y_arg: &str, x_arg: &str, bounds: Bounds) -> Result<Outcome> {
    let y = Arc::new(load_groupoid(y_arg)?);
    let x = Arc::new(load_groupoid(x_arg)?);
    let mut r = Report::new("map", "Map(Y, X) is the groupoid of functors Y → X and natural isomorphisms");
    r.input("Y", format!("{y_arg}: {}", describe(&y))).input("X", format!("{x_arg}: {}", describe(&x)));
    r.input("functor bound", bounds.functors);
    let fg = functor_groupoid(&y, &x, bounds.functors)?;
    let g = &fg.groupoid;
    let comps = g.components();
    r.result("functors", fg.functor_count()).result("natural isomorphisms", g.morphism_count());
    r.result("components", comps.len());
    let rows = (0..comps.len())
        .map(|c| {
            let f = comps.representative(c);
            vec![
                c.to_string(),
                object_list(&x, fg.functor_object_map(f)),
                comps.members[c].len().to_string(),
                g.automorphisms(f).group.order().to_string(),
            ]
        })
        .collect();
    r.table("components of Map(Y, X)", &["component", "representative on objects", "functors", "automorphisms"], rows);
    let counted = count_functors(&y, &x);
    r.check("functor count", counted == fg.functor_count() as u64, format!("independent count {counted}"));
    r.check("groupoid axioms on Map(Y, X)", g.validate().is_valid(), "composition table re-validated");
    Ok(r.into())
}

pub fn inertia(arg: &str) -> Result<Outcome> {
    let x = Arc::new(load_groupoid(arg)?);
    let mut r = Report::new("inertia", "the inertia groupoid ΛX has objects the loops (x, g) and morphisms the conjugations");
    r.input("X", format!("{arg}: {}", describe(&x)));
    let l = inertia_groupoid(&x);
    let g = &l.groupoid;
    let comps = g.components();
    r.result("objects", g.object_count()).result("morphisms", g.morphism_count()).result("components", comps.len());
    let rows = (0..comps.len())
        .map(|c| {
            let p = l.points[comps.representative(c).index()];
            vec![
                c.to_string(),
                x.object_label(p.base).into_owned(),
                x.morphism_label(p.automorphism).into_owned(),
                comps.members[c].len().to_string(),
                g.automorphisms(comps.representative(c)).group.order().to_string(),
            ]
        })
        .collect();
    r.table("components of ΛX", &["component", "base", "loop", "loops in class", "centralizer order"], rows);
    let xc = x.components();
    let expected: usize = (0..xc.len()).map(|c| conjugacy(&x.automorphisms(xc.representative(c)).group).len()).sum();
    r.check("evaluation ΛX → X is a functor", l.evaluation.check().is_ok(), "");
    r.check(
        "components = conjugacy classes of automorphism groups",
        expected == comps.len(),
        format!("expected {expected}"),
    );
    Ok(r.into())
}

pub fn decompose(arg: &str) -> Result<Outcome> {
    let g = load_group(arg)?;
    let mut r = Report::new(
        "decompose",
        "Λ(BG) ≃ ⊔ B Z(α) over representatives α of the conjugacy classes, and both agree with the conjugation groupoid G//G",
    );
    r.input("G", format!("{arg}: {}", describe_group(&g)));
    let d = loop_decomposition(&g)?;
    let borel = borel_groupoid(&g)?;
    let sizes = d.conjugacy.class_sizes();
    let rows = d
        .summands
        .iter()
        .enumerate()
        .map(|(i, (a, z))| {
            let gens: Vec<&str> = z.group.generating_set().iter().map(|&k| g.label(z.embedding[k])).collect();
            vec![g.label(*a).to_string(), sizes[i].to_string(), z.group.order().to_string(), list(&gens)]
        })
        .collect();
    r.result("conjugacy classes", d.summands.len());
    r.result("centralizer orders", list(&d.conjugacy.centralizer_orders().iter().map(usize::to_string).collect::<Vec<_>>()));
    r.table("summands", &["representative", "class size", "centralizer order", "centralizer generators"], rows);
    r.check("⊔ B Z(α) → Λ(BG) is an equivalence", d.witness.verify(), "witness re-verified");
    r.check("G//G → Λ(BG) is an equivalence", borel.witness.verify(), "witness re-verified");
    let direct = are_equivalent(&d.groupoid, &borel.groupoid, DEFAULT_GROUP_BOUND)?;
    r.check("⊔ B Z(α) ≃ G//G", direct.is_equivalent(), "independent equivalence test");
    Ok(r.into())
}

pub fn omega_cmd(arg: &str, basepoint: Option<&str>) -> Result<Outcome> {
    let x = Arc::new(load_groupoid(arg)?);
    let base = match basepoint {
        None if x.object_count() == 1 => ObjId(0),
        None => return Err(Error::Parse(format!("{arg}: --basepoint is required unless there is exactly one object"))),
        Some(label) => x
            .objects()
            .find(|&o| x.object_label(o) == label)
            .ok_or_else(|| Error::Parse(format!("no object named {label:?}")))?,
    };
    let mut r = Report::new(
        "omega",
        "Ω_x X = * ×_X ΛX (fiber of evaluation over x), claimed equivalent to the discrete groupoid on the conjugacy classes C_G of G = Aut(x)",
    );
    r.input("X", format!("{arg}: {}", describe(&x))).input("basepoint", x.object_label(base));
    let loops = omega(&x, base)?;
    let g = loops.groupoid();
    let aut = x.automorphisms(base).group;
    let classes = conjugacy(&aut).len();
    let comps = g.components().len();
    let discrete = is_essentially_discrete(g);
    r.result("objects", g.object_count()).result("morphisms", g.morphism_count()).result("components", comps);
    r.result("essentially discrete", yes(discrete));
    r.result("|G|", aut.order()).result("|C_G|", classes);
    // the loops at x up to conjugation only, for comparison
    let over: Vec<ObjId> = loops.inertia.groupoid.objects().filter(|&p| loops.inertia.evaluation.object(p) == base).collect();
    let (sub, _) = loops.inertia.groupoid.full_subgroupoid(&over);
    r.result("loops at x up to conjugation", sub.components().len());
    r.check("Ω_x X is essentially discrete", discrete, "every automorphism group is trivial");
    r.check(
        "Ω_x X has |C_G| components",
        comps == classes,
        format!("{comps} components, {classes} conjugacy classes"),
    );
    Ok(r.into())
}

pub fn homology_cmd(arg: &str, kmax: usize, bounds: Bounds) -> Result<Outcome> {
    let x = load_groupoid(arg)?;
    let mut r = Report::new("homology", "integral homology of X is the homology of the normalized chains on its nerve");
    r.input("X", format!("{arg}: {}", describe(&x))).input("kmax", kmax).input("nerve bound", bounds.nerve);
    let c = nerve(&x, kmax + 1, bounds.nerve)?;
    let hs = complex_homology(&c, kmax)?;
    r.result("simplices", list(&c.ranks.iter().map(usize::to_string).collect::<Vec<_>>()));
    let rows = hs
        .iter()
        .map(|h| {
            vec![
                h.degree.to_string(),
                h.to_string(),
                h.betti.to_string(),
                list(&h.torsion.iter().map(u64::to_string).collect::<Vec<_>>()),
            ]
        })
        .collect();
    r.table("homology", &["degree", "H_k", "rank", "torsion"], rows);
    r.check("boundary squares to zero", c.check(), "");
    if x.object_count() == 1 {
        let g = x.automorphisms(ObjId(0)).group;
        if (0..g.order()).any(|a| g.element_order(a) == g.order()) {
            let oracle = cyclic_group_homology_oracle(g.order() as u64, kmax);
            r.check("agrees with the periodic resolution for a cyclic group", oracle == hs, format!("Z/{}", g.order()));
        }
    }
    Ok(r.into())
}

pub fn cech(k_arg: &str, x_arg: &str, bounds: Bounds) -> Result<Outcome> {
    let k = Arc::new(load_space(k_arg)?);
    let x = Arc::new(load_groupoid(x_arg)?);
    let mut r = Report::new(
        "cech",
        "maps K → X are cocycles on the Čech groupoids of open covers of K, up to gauge transformation and refinement",
    );
    r.input("K", format!("{k_arg}: {} points", k.len())).input("X", format!("{x_arg}: {}", describe(&x)));
    r.input("covers max", bounds.covers_max);
    let cb = ClassifyBounds { covers_max: bounds.covers_max, ..ClassifyBounds::default() };
    let c = classify_hs(&k, &x, cb)?;
    let atlas = atlas_epimorphism_check(&k, &x, cb)?;
    let minimal = &c.covers[c.minimal_cover];
    let cg = cech_groupoid(&k, minimal);
    r.result("covers", c.covers.len()).result("minimal cover", minimal.format(&k));
    r.result("refinement pairs", c.refinement_pairs).result("classes", c.len());
    let rows = c
        .classes
        .iter()
        .enumerate()
        .map(|(i, class)| {
            let objs: Vec<String> = class.representative.objects.iter().map(|&o| x.object_label(o).into_owned()).collect();
            let mors: Vec<String> =
                class.representative.morphisms.iter().map(|&m| x.morphism_label(m).into_owned()).collect();
            vec![
                i.to_string(),
                list(&objs),
                list(&mors),
                class.hit_by.len().to_string(),
                class.cocycle_counts[c.minimal_cover].to_string(),
            ]
        })
        .collect();
    r.table(
        "classes (representative on the minimal cover)",
        &["class", "objects", "transitions", "covers hit", "cocycles on minimal cover"],
        rows,
    );
    r.result("Čech groupoid of the minimal cover", describe(&cg.groupoid));
    r.check("every class is hit by an enumerated cover", atlas.unreached.is_empty(), format!("{} unreached", atlas.unreached.len()));
    r.check(
        "the minimal cover reaches every class",
        atlas.minimal_cover_hits == atlas.classes,
        format!("{} of {}", atlas.minimal_cover_hits, atlas.classes),
    );
    r.check(
        "whole-space cover reaches the constant classes",
        atlas.whole_cover_hits == atlas.whole_cover_expected,
        format!("{} hit, {} expected", atlas.whole_cover_hits, atlas.whole_cover_expected),
    );
    Ok(r.into())
}

pub fn replace_cmd(arg: &str) -> Result<Outcome> {
    let text = read_input(arg)?.ok_or_else(|| Error::Parse(format!("{arg}: no such file")))?;
    let f: GroupoidFunctor = with_context(arg, format::parse_functor(&text))?;
    let (x, y) = (f.domain().clone(), f.codomain().clone());
    let mut r = Report::new(
        "replace",
        "every functor f: X → Y factors as an equivalence i_f: X → X̃ followed by an isofibration p_f: X̃ → Y",
    );
    r.input("f", arg).input("X", describe(&x)).input("Y", describe(&y));
    let rep = replace(&f)?;
    r.result("X̃", describe(rep.groupoid()));
    let mut rows = Vec::new();
    let mut fibers_ok = true;
    for b in y.objects() {
        let h = homotopy_fiber(&f, b)?;
        let ok = h.comparison.verify();
        fibers_ok &= ok;
        rows.push(vec![
            y.object_label(b).into_owned(),
            describe(h.groupoid()),
            h.direct.groupoid.components().len().to_string(),
            yes(ok).to_string(),
        ]);
    }
    r.table("homotopy fibers", &["over", "hFib", "direct fiber components", "comparison verified"], rows);
    r.check("p_f is an isofibration", rep.projection_is_isofibration(), "every morphism lifts");
    r.check("p_f ∘ i_f = f", rep.projection.after(&rep.embedding).map(|g| g == f).unwrap_or(false), "strictly");
    r.check("i_f is an equivalence", rep.embedding_witness.verify(), "witness re-verified");
    r.check("retraction ∘ i_f = id", rep.retraction_is_strict(), "strictly");
    r.check("strict fibers of p_f ≃ iso-comma fibers of f", fibers_ok, "");
    Ok(r.into())
}

pub fn exp_law(inputs: &[String], seed: u64, count: usize, bounds: Bounds) -> Result<Outcome> {
    let mut r = Report::new("exp-law", "Map(Z × Y, X) ≃ Map(Z, Map(Y, X)) via the transpose functor");
    let triples = match inputs {
        [] => {
            r.input("corpus", format!("{count} random triples, seed {seed}"));
            exponential_triples(seed, count, 3, 6, 20_000)
        }
        [z, y, x] => {
            r.input("Z", z).input("Y", y).input("X", x);
            vec![(Arc::new(load_groupoid(z)?), Arc::new(load_groupoid(y)?), Arc::new(load_groupoid(x)?))]
        }
        _ => return Err(Error::Parse("exp-law takes either no inputs or three (Z Y X)".into())),
    };
    r.input("functor bound", bounds.functors);
    let mut rows = Vec::new();
    let mut all = true;
    for (i, (z, y, x)) in triples.iter().enumerate() {
        let law = exponential_check(z, y, x, bounds.functors)?;
        let ok = law.witness.verify();
        all &= ok;
        rows.push(vec![
            i.to_string(),
            format!("{}/{}/{}", z.object_count(), y.object_count(), x.object_count()),
            law.left.functor_count().to_string(),
            law.right.functor_count().to_string(),
            law.left.groupoid.components().len().to_string(),
            yes(ok).to_string(),
        ]);
    }
    r.result("triples", triples.len());
    r.table(
        "triples",
        &["#", "objects Z/Y/X", "functors Z×Y → X", "functors Z → Map(Y, X)", "components", "transpose verified"],
        rows,
    );
    r.check("every transpose is an equivalence", all, format!("{} triples", triples.len()));
    Ok(r.into())
}
