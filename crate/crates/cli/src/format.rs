//! Text documents, one per object. Every document is TOML with a `kind` and
//! a `version` key; serializing a parsed canonical document reproduces it
//! byte for byte.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use qcat_core::lattice::SupLattice;
use qcat_core::setenriched::{Arrow, FinCategory, Profunctor};
use qcat_core::{
    Cell, Distributor, Fiber, FiberKind, MapSite, Obj, Presheaf, QCategory, Quantaloid, Report, Topology, TypedSet,
};
use serde::{Deserialize, Serialize};

pub const VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Quantaloid,
    Qcategory,
    Distributor,
    Presheaf,
    Fincategory,
    Profunctor,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Kind::Quantaloid => "quantaloid",
            Kind::Qcategory => "qcategory",
            Kind::Distributor => "distributor",
            Kind::Presheaf => "presheaf",
            Kind::Fincategory => "fincategory",
            Kind::Profunctor => "profunctor",
        };
        f.write_str(name)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{0}")]
    Toml(#[from] toml::de::Error),
    #[error("expected a {expected} document, found a {found} document")]
    WrongKind { expected: Kind, found: Kind },
    #[error("unsupported format version `{0}`")]
    Version(String),
    #[error("{at}: {msg}")]
    At { at: String, msg: String },
    #[error("{at}: {source}")]
    Core { at: String, source: qcat_core::Error },
    #[error("{at}: {report}")]
    Invalid { at: String, report: Report },
}

type Result<T, E = FormatError> = std::result::Result<T, E>;

fn at(place: impl Into<String>, msg: impl Into<String>) -> FormatError {
    FormatError::At { at: place.into(), msg: msg.into() }
}

fn core(place: impl Into<String>) -> impl FnOnce(qcat_core::Error) -> FormatError {
    let at = place.into();
    move |source| FormatError::Core { at, source }
}

fn checked(place: &str, report: Report) -> Result<()> {
    if report.is_ok() {
        Ok(())
    } else {
        Err(FormatError::Invalid { at: place.to_string(), report })
    }
}

/// A parsed document. Parsing runs the kind's validator, so every value
/// here satisfies its laws.
#[derive(Debug, Clone)]
pub enum Document {
    Quantaloid(Arc<Quantaloid>),
    QCategory(QCategory),
    Distributor(Distributor),
    Presheaf(Presheaf),
    FinCategory(Arc<FinCategory>),
    Profunctor(Profunctor),
}

impl Document {
    pub fn kind(&self) -> Kind {
        match self {
            Document::Quantaloid(_) => Kind::Quantaloid,
            Document::QCategory(_) => Kind::Qcategory,
            Document::Distributor(_) => Kind::Distributor,
            Document::Presheaf(_) => Kind::Presheaf,
            Document::FinCategory(_) => Kind::Fincategory,
            Document::Profunctor(_) => Kind::Profunctor,
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            Document::Quantaloid(q) => write_quantaloid(q),
            Document::QCategory(a) => write_qcategory(a, &[]),
            Document::Distributor(d) => write_distributor(d),
            Document::Presheaf(f) => write_presheaf(f),
            Document::FinCategory(c) => write_fincategory(c),
            Document::Profunctor(p) => write_profunctor(p),
        }
    }
}

#[derive(Deserialize)]
struct Header {
    kind: Kind,
    version: String,
}

pub fn parse(text: &str) -> Result<Document> {
    let header: Header = toml::from_str(text)?;
    if header.version != VERSION {
        return Err(FormatError::Version(header.version));
    }
    Ok(match header.kind {
        Kind::Quantaloid => Document::Quantaloid(read_quantaloid(text)?),
        Kind::Qcategory => Document::QCategory(read_qcategory(text)?),
        Kind::Distributor => Document::Distributor(read_distributor(text)?),
        Kind::Presheaf => Document::Presheaf(read_presheaf(text)?),
        Kind::Fincategory => Document::FinCategory(read_fincategory(text)?),
        Kind::Profunctor => Document::Profunctor(read_profunctor(text)?),
    })
}

/// Parses and insists on one kind.
pub fn parse_as(text: &str, expected: Kind) -> Result<Document> {
    let header: Header = toml::from_str(text)?;
    if header.kind != expected {
        return Err(FormatError::WrongKind { expected, found: header.kind });
    }
    parse(text)
}

fn to_toml<T: Serialize>(value: &T) -> String {
    toml::to_string(value).expect("documents serialize")
}

fn lookup<'a>(names: impl IntoIterator<Item = &'a String>) -> HashMap<&'a str, usize> {
    names.into_iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect()
}

fn find(index: &HashMap<&str, usize>, name: &str, place: impl FnOnce() -> String, what: &str) -> Result<usize> {
    index.get(name).copied().ok_or_else(|| at(place(), format!("unknown {what} `{name}`")))
}

// ---------------------------------------------------------------- quantaloids

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuantaloidBody {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    objects: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    identities: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    topology: Option<TopologyBody>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    hom: Vec<HomBody>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    compose: Vec<ComposeBody>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TopologyBody {
    points: Vec<String>,
    opens: Vec<OpenBody>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OpenBody {
    name: String,
    points: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HomBody {
    src: String,
    dst: String,
    elements: Vec<String>,
    /// `[a, b]` when `b` covers `a`.
    #[serde(default)]
    covers: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    involution: Option<Vec<String>>,
}

/// Rows are indexed by `hom(mid, dst)`, columns by `hom(src, mid)`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComposeBody {
    src: String,
    mid: String,
    dst: String,
    table: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuantaloidDoc {
    kind: Kind,
    version: String,
    quantaloid: QuantaloidBody,
}

fn encode_quantaloid(q: &Quantaloid) -> QuantaloidBody {
    if let Some(space) = q.topology() {
        let opens = (0..space.num_opens())
            .map(|o| OpenBody {
                name: space.open_name(o).to_string(),
                points: space.points_of(o).into_iter().map(|p| space.points()[p].clone()).collect(),
            })
            .collect();
        return QuantaloidBody {
            objects: Vec::new(),
            identities: Vec::new(),
            topology: Some(TopologyBody { points: space.points().to_vec(), opens }),
            hom: Vec::new(),
            compose: Vec::new(),
        };
    }
    let objs: Vec<Obj> = q.objects().collect();
    let name = |c: Cell| q.cell_name(c).to_string();
    let mut hom = Vec::new();
    for &x in &objs {
        for &y in &objs {
            let lattice = q.hom(x, y);
            hom.push(HomBody {
                src: q.object_name(x).to_string(),
                dst: q.object_name(y).to_string(),
                elements: lattice.names().to_vec(),
                covers: lattice
                    .covers()
                    .into_iter()
                    .map(|(a, b)| [lattice.name(a).to_string(), lattice.name(b).to_string()])
                    .collect(),
                involution: q
                    .has_involution()
                    .then(|| q.cells(x, y).map(|c| name(q.involute(c).expect("has involution"))).collect()),
            });
        }
    }
    let mut compose = Vec::new();
    for &x in &objs {
        for &y in &objs {
            for &z in &objs {
                let table = q
                    .cells(y, z)
                    .map(|g| q.cells(x, y).map(|f| name(q.compose(g, f))).collect())
                    .collect();
                compose.push(ComposeBody {
                    src: q.object_name(x).to_string(),
                    mid: q.object_name(y).to_string(),
                    dst: q.object_name(z).to_string(),
                    table,
                });
            }
        }
    }
    QuantaloidBody {
        objects: q.object_names().to_vec(),
        identities: objs.iter().map(|&x| name(q.identity(x))).collect(),
        topology: None,
        hom,
        compose,
    }
}

fn decode_quantaloid(body: &QuantaloidBody) -> Result<Arc<Quantaloid>> {
    if let Some(t) = &body.topology {
        if !body.objects.is_empty() || !body.identities.is_empty() || !body.hom.is_empty() || !body.compose.is_empty() {
            return Err(at("quantaloid", "a topology carries no tables of its own"));
        }
        let points = lookup(&t.points);
        let mut opens = Vec::with_capacity(t.opens.len());
        for (i, o) in t.opens.iter().enumerate() {
            let pts = o
                .points
                .iter()
                .map(|p| find(&points, p, || format!("quantaloid.topology.opens[{i}]"), "point"))
                .collect::<Result<Vec<_>>>()?;
            opens.push((o.name.clone(), pts));
        }
        let space = Topology::new(t.points.clone(), opens).map_err(core("quantaloid.topology"))?;
        return Ok(Arc::new(Quantaloid::from_topology(&space)));
    }

    let n = body.objects.len();
    let objects = lookup(&body.objects);
    if objects.len() != n {
        return Err(at("quantaloid.objects", "object names must be distinct"));
    }
    let obj = |name: &str, place: &dyn Fn() -> String| find(&objects, name, place, "object");

    type Hom<'a> = (SupLattice, Option<&'a Vec<String>>);
    let mut homs: Vec<Option<Hom>> = (0..n * n).map(|_| None).collect();
    for (i, h) in body.hom.iter().enumerate() {
        let place = || format!("quantaloid.hom[{i}] ({} -> {})", h.src, h.dst);
        let (x, y) = (obj(&h.src, &place)?, obj(&h.dst, &place)?);
        let index = lookup(&h.elements);
        let covers = h
            .covers
            .iter()
            .map(|[a, b]| Ok((find(&index, a, place, "element")?, find(&index, b, place, "element")?)))
            .collect::<Result<Vec<_>>>()?;
        let lattice = SupLattice::from_covers(h.elements.clone(), &covers).map_err(core(place()))?;
        if homs[x * n + y].replace((lattice, h.involution.as_ref())).is_some() {
            return Err(at(place(), "hom listed twice"));
        }
    }
    let mut lattices = Vec::with_capacity(n * n);
    let mut involutions = Vec::with_capacity(n * n);
    for (i, h) in homs.into_iter().enumerate() {
        let (lattice, inv) = h.ok_or_else(|| {
            at("quantaloid.hom", format!("missing hom({}, {})", body.objects[i / n], body.objects[i % n]))
        })?;
        lattices.push(lattice);
        involutions.push(inv);
    }
    let lattice = |x: usize, y: usize| &lattices[x * n + y];
    let element = |x: usize, y: usize, name: &str, place: &dyn Fn() -> String| {
        lattice(x, y).id(name).map_err(|_| {
            at(place(), format!("`{name}` is not an element of hom({}, {})", body.objects[x], body.objects[y]))
        })
    };

    if body.identities.len() != n {
        return Err(at("quantaloid.identities", "one identity per object is required"));
    }
    let identities = body
        .identities
        .iter()
        .enumerate()
        .map(|(x, name)| element(x, x, name, &|| format!("quantaloid.identities[{x}]")))
        .collect::<Result<Vec<_>>>()?;

    let mut tables: HashMap<(usize, usize, usize), Vec<Vec<usize>>> = HashMap::new();
    for (i, c) in body.compose.iter().enumerate() {
        let place = || format!("quantaloid.compose[{i}] ({} -> {} -> {})", c.src, c.mid, c.dst);
        let (x, y, z) = (obj(&c.src, &place)?, obj(&c.mid, &place)?, obj(&c.dst, &place)?);
        if c.table.len() != lattice(y, z).len() {
            return Err(at(place(), format!("expected {} rows", lattice(y, z).len())));
        }
        let mut rows = Vec::with_capacity(c.table.len());
        for (g, row) in c.table.iter().enumerate() {
            if row.len() != lattice(x, y).len() {
                return Err(at(format!("{}, row {g}", place()), format!("expected {} entries", lattice(x, y).len())));
            }
            let entries = row
                .iter()
                .enumerate()
                .map(|(f, v)| element(x, z, v, &|| format!("{}, row {g}, column {f}", place())))
                .collect::<Result<Vec<_>>>()?;
            rows.push(entries);
        }
        if tables.insert((x, y, z), rows).is_some() {
            return Err(at(place(), "composition table listed twice"));
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if !tables.contains_key(&(x, y, z)) {
                    return Err(at(
                        "quantaloid.compose",
                        format!("missing table for {} -> {} -> {}", body.objects[x], body.objects[y], body.objects[z]),
                    ));
                }
            }
        }
    }

    let with_involution = involutions.iter().filter(|i| i.is_some()).count();
    if with_involution != 0 && with_involution != n * n {
        return Err(at("quantaloid.hom", "an involution must be given on every hom or on none"));
    }
    let mut inverse: Vec<Vec<usize>> = Vec::new();
    if with_involution != 0 {
        for (i, inv) in involutions.iter().enumerate() {
            let (x, y) = (i / n, i % n);
            let inv = inv.expect("checked above");
            let place = || format!("quantaloid.hom[{}, {}].involution", body.objects[x], body.objects[y]);
            if inv.len() != lattice(x, y).len() {
                return Err(at(place(), "one involute per element is required"));
            }
            inverse.push(inv.iter().map(|v| element(y, x, v, &place)).collect::<Result<Vec<_>>>()?);
        }
    }

    let compose = |x: Obj, y: Obj, z: Obj, g: usize, f: usize| Some(tables[&(x.0, y.0, z.0)][g][f]);
    let involution = |x: Obj, y: Obj, a: usize| Some(inverse[x.0 * n + y.0][a]);
    let q = Quantaloid::from_parts(
        body.objects.clone(),
        lattices.clone(),
        &compose,
        identities,
        (with_involution != 0).then_some(&involution as &dyn Fn(Obj, Obj, usize) -> Option<usize>),
    )
    .map_err(core("quantaloid"))?;
    checked("quantaloid", q.validate())?;
    Ok(Arc::new(q))
}

pub fn read_quantaloid(text: &str) -> Result<Arc<Quantaloid>> {
    let doc: QuantaloidDoc = toml::from_str(text)?;
    expect_kind(doc.kind, Kind::Quantaloid)?;
    decode_quantaloid(&doc.quantaloid)
}

pub fn write_quantaloid(q: &Quantaloid) -> String {
    to_toml(&QuantaloidDoc { kind: Kind::Quantaloid, version: VERSION.into(), quantaloid: encode_quantaloid(q) })
}

fn expect_kind(found: Kind, expected: Kind) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(FormatError::WrongKind { expected, found })
    }
}

// -------------------------------------------------------------- Q-categories

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementBody {
    name: String,
    #[serde(rename = "type")]
    ty: String,
}

/// `hom[a][b]` is `M(a, b)`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QCategoryBody {
    hom: Vec<Vec<String>>,
    #[serde(default)]
    element: Vec<ElementBody>,
}

/// The singleton behind an element of a completion, over the elements of
/// the category that was completed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingletonEntry {
    pub element: String,
    pub sigma: Vec<String>,
    pub adjoint: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QCategoryDoc {
    kind: Kind,
    version: String,
    quantaloid: QuantaloidBody,
    category: QCategoryBody,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    singleton: Vec<SingletonEntry>,
}

fn encode_qcategory(a: &QCategory) -> QCategoryBody {
    let q = a.quantaloid();
    QCategoryBody {
        hom: (0..a.len()).map(|x| (0..a.len()).map(|y| q.cell_name(a.m(x, y)).to_string()).collect()).collect(),
        element: (0..a.len())
            .map(|x| ElementBody { name: a.name(x).to_string(), ty: q.object_name(a.ty(x)).to_string() })
            .collect(),
    }
}

fn decode_qcategory(q: &Arc<Quantaloid>, body: &QCategoryBody, place: &str) -> Result<QCategory> {
    let mut names = Vec::with_capacity(body.element.len());
    let mut types = Vec::with_capacity(body.element.len());
    for (i, e) in body.element.iter().enumerate() {
        names.push(e.name.clone());
        types.push(q.object(&e.ty).map_err(core(format!("{place}.element[{i}]")))?);
    }
    let n = names.len();
    if body.hom.len() != n || body.hom.iter().any(|r| r.len() != n) {
        return Err(at(format!("{place}.hom"), format!("expected a {n}x{n} matrix")));
    }
    let mut hom = Vec::with_capacity(n * n);
    for (x, row) in body.hom.iter().enumerate() {
        for (y, v) in row.iter().enumerate() {
            hom.push(q.cell(types[y], types[x], v).map_err(core(format!("{place}.hom[{x}][{y}]")))?);
        }
    }
    let base = TypedSet::new(names, types).map_err(core(format!("{place}.element")))?;
    let a = QCategory::new(q.clone(), base, hom).map_err(core(place))?;
    checked(place, a.validate())?;
    Ok(a)
}

pub fn read_qcategory(text: &str) -> Result<QCategory> {
    read_qcategory_with_annex(text).map(|(a, _)| a)
}

pub fn read_qcategory_with_annex(text: &str) -> Result<(QCategory, Vec<SingletonEntry>)> {
    let doc: QCategoryDoc = toml::from_str(text)?;
    expect_kind(doc.kind, Kind::Qcategory)?;
    let q = decode_quantaloid(&doc.quantaloid)?;
    Ok((decode_qcategory(&q, &doc.category, "category")?, doc.singleton))
}

pub fn write_qcategory(a: &QCategory, annex: &[SingletonEntry]) -> String {
    to_toml(&QCategoryDoc {
        kind: Kind::Qcategory,
        version: VERSION.into(),
        quantaloid: encode_quantaloid(a.quantaloid()),
        category: encode_qcategory(a),
        singleton: annex.to_vec(),
    })
}

// -------------------------------------------------------------- distributors

/// `entries[c][a]` is `φ(c, a)` for `c` in the codomain.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DistributorDoc {
    kind: Kind,
    version: String,
    entries: Vec<Vec<String>>,
    quantaloid: QuantaloidBody,
    dom: QCategoryBody,
    cod: QCategoryBody,
}

pub fn read_distributor(text: &str) -> Result<Distributor> {
    let doc: DistributorDoc = toml::from_str(text)?;
    expect_kind(doc.kind, Kind::Distributor)?;
    let q = decode_quantaloid(&doc.quantaloid)?;
    let dom = decode_qcategory(&q, &doc.dom, "dom")?;
    let cod = decode_qcategory(&q, &doc.cod, "cod")?;
    if doc.entries.len() != cod.len() || doc.entries.iter().any(|r| r.len() != dom.len()) {
        return Err(at("entries", format!("expected a {}x{} matrix", cod.len(), dom.len())));
    }
    let mut phi = Vec::with_capacity(cod.len() * dom.len());
    for (c, row) in doc.entries.iter().enumerate() {
        for (a, v) in row.iter().enumerate() {
            phi.push(q.cell(dom.ty(a), cod.ty(c), v).map_err(core(format!("entries[{c}][{a}]")))?);
        }
    }
    let d = Distributor::new(dom, cod, phi).map_err(core("entries"))?;
    checked("entries", d.validate())?;
    Ok(d)
}

pub fn write_distributor(d: &Distributor) -> String {
    let q = d.dom.quantaloid();
    to_toml(&DistributorDoc {
        kind: Kind::Distributor,
        version: VERSION.into(),
        entries: (0..d.cod.len())
            .map(|c| (0..d.dom.len()).map(|a| q.cell_name(d.get(c, a)).to_string()).collect())
            .collect(),
        quantaloid: encode_quantaloid(q),
        dom: encode_qcategory(&d.dom),
        cod: encode_qcategory(&d.cod),
    })
}

// ----------------------------------------------------------------- presheaves

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum FiberKindBody {
    Set,
    Poset,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FiberBody {
    object: String,
    elements: Vec<String>,
    /// Strict comparabilities `[a, b]` with `a < b`; poset fibers only.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    below: Vec<[String; 2]>,
}

/// Restriction along the map `map: src -> dst`; `values[i]` is the image in
/// the fiber over `src` of the `i`-th element over `dst`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionBody {
    src: String,
    dst: String,
    map: String,
    values: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresheafDoc {
    kind: Kind,
    version: String,
    symmetric: bool,
    fibers: FiberKindBody,
    quantaloid: QuantaloidBody,
    fiber: Vec<FiberBody>,
    action: Vec<ActionBody>,
}

pub fn read_presheaf(text: &str) -> Result<Presheaf> {
    let doc: PresheafDoc = toml::from_str(text)?;
    expect_kind(doc.kind, Kind::Presheaf)?;
    let q = decode_quantaloid(&doc.quantaloid)?;
    let site = Arc::new(MapSite::new(q.clone(), doc.symmetric).map_err(core("symmetric"))?);
    let kind = match doc.fibers {
        FiberKindBody::Set => FiberKind::Set,
        FiberKindBody::Poset => FiberKind::Poset,
    };

    let mut fibers: Vec<Option<Fiber>> = vec![None; q.num_objects()];
    for (i, f) in doc.fiber.iter().enumerate() {
        let place = || format!("fiber[{i}] ({})", f.object);
        let x = q.object(&f.object).map_err(core(place()))?;
        let index = lookup(&f.elements);
        let mut leq = vec![false; f.elements.len() * f.elements.len()];
        for [a, b] in &f.below {
            let (a, b) = (find(&index, a, place, "element")?, find(&index, b, place, "element")?);
            leq[a * f.elements.len() + b] = true;
        }
        if kind == FiberKind::Set && !f.below.is_empty() {
            return Err(at(place(), "set fibers carry no order"));
        }
        let n = f.elements.len();
        let fiber = Fiber::ordered(f.elements.clone(), |a, b| a == b || leq[a * n + b]);
        if fibers[x.0].replace(fiber).is_some() {
            return Err(at(place(), "fiber listed twice"));
        }
    }
    let fibers = fibers
        .into_iter()
        .enumerate()
        .map(|(x, f)| f.ok_or_else(|| at("fiber", format!("missing fiber over `{}`", q.object_name(Obj(x))))))
        .collect::<Result<Vec<_>>>()?;

    let mut action: Vec<Option<Vec<usize>>> = vec![None; site.len()];
    for (i, a) in doc.action.iter().enumerate() {
        let place = || format!("action[{i}] ({}: {} -> {})", a.map, a.src, a.dst);
        let (x, y) = (q.object(&a.src).map_err(core(place()))?, q.object(&a.dst).map_err(core(place()))?);
        let cell = q.cell(x, y, &a.map).map_err(core(place()))?;
        let m = site.find(cell).ok_or_else(|| at(place(), "not a map of the site"))?;
        let (from, to) = (&fibers[y.0], &fibers[x.0]);
        if a.values.len() != from.len() {
            return Err(at(place(), format!("expected {} values", from.len())));
        }
        let values = a
            .values
            .iter()
            .map(|v| to.index_of(v).ok_or_else(|| at(place(), format!("`{v}` is not over `{}`", a.src))))
            .collect::<Result<Vec<_>>>()?;
        if action[m].replace(values).is_some() {
            return Err(at(place(), "map listed twice"));
        }
    }
    let action = action
        .into_iter()
        .enumerate()
        .map(|(m, v)| v.ok_or_else(|| at("action", format!("missing action along {}", site.describe(m)))))
        .collect::<Result<Vec<_>>>()?;
    let f = Presheaf::new(site, kind, fibers, action).map_err(core("presheaf"))?;
    checked("presheaf", f.validate())?;
    Ok(f)
}

pub fn write_presheaf(f: &Presheaf) -> String {
    let q = f.quantaloid();
    let site = f.site();
    let fiber = q
        .objects()
        .map(|x| {
            let fib = f.fiber(x);
            let n = fib.len();
            let below = (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .filter(|&(a, b)| a != b && fib.leq(a, b))
                .map(|(a, b)| [fib.name(a).to_string(), fib.name(b).to_string()])
                .collect();
            FiberBody { object: q.object_name(x).to_string(), elements: fib.names().to_vec(), below }
        })
        .collect();
    let action = site
        .cells()
        .iter()
        .enumerate()
        .map(|(m, cell)| ActionBody {
            src: q.object_name(cell.src()).to_string(),
            dst: q.object_name(cell.dst()).to_string(),
            map: q.cell_name(cell.forward).to_string(),
            values: f.action(m).iter().map(|&v| f.fiber(cell.src()).name(v).to_string()).collect(),
        })
        .collect();
    to_toml(&PresheafDoc {
        kind: Kind::Presheaf,
        version: VERSION.into(),
        symmetric: site.is_symmetric(),
        fibers: match f.kind() {
            FiberKind::Set => FiberKindBody::Set,
            FiberKind::Poset => FiberKindBody::Poset,
        },
        quantaloid: encode_quantaloid(q),
        fiber,
        action,
    })
}

// -------------------------------------------------------- finite categories

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrowBody {
    name: String,
    src: String,
    dst: String,
}

/// `compose` lists `[g, f, g . f]` for composable pairs without identities.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FinCategoryBody {
    objects: Vec<String>,
    identities: Vec<String>,
    compose: Vec<[String; 3]>,
    arrow: Vec<ArrowBody>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FinCategoryDoc {
    kind: Kind,
    version: String,
    category: FinCategoryBody,
}

fn encode_fincategory(c: &FinCategory) -> FinCategoryBody {
    let name = |m: usize| c.arrow(m).name.clone();
    let is_id = |m: usize| c.identity(c.arrow(m).src) == m;
    let mut compose = Vec::new();
    for g in (0..c.num_arrows()).filter(|&g| !is_id(g)) {
        for f in (0..c.num_arrows()).filter(|&f| !is_id(f)) {
            if let Some(h) = c.try_compose(g, f) {
                compose.push([name(g), name(f), name(h)]);
            }
        }
    }
    FinCategoryBody {
        objects: c.objects().to_vec(),
        identities: (0..c.num_objects()).map(|x| name(c.identity(x))).collect(),
        compose,
        arrow: c
            .arrows()
            .iter()
            .map(|a| ArrowBody {
                name: a.name.clone(),
                src: c.objects()[a.src].clone(),
                dst: c.objects()[a.dst].clone(),
            })
            .collect(),
    }
}

fn decode_fincategory(body: &FinCategoryBody, place: &str) -> Result<Arc<FinCategory>> {
    let objects = lookup(&body.objects);
    let mut arrows = Vec::with_capacity(body.arrow.len());
    for (i, a) in body.arrow.iter().enumerate() {
        let here = || format!("{place}.arrow[{i}] ({})", a.name);
        arrows.push(Arrow {
            name: a.name.clone(),
            src: find(&objects, &a.src, here, "object")?,
            dst: find(&objects, &a.dst, here, "object")?,
        });
    }
    let index = lookup(arrows.iter().map(|a| &a.name));
    if body.identities.len() != body.objects.len() {
        return Err(at(format!("{place}.identities"), "one identity per object is required"));
    }
    let identity = body
        .identities
        .iter()
        .enumerate()
        .map(|(x, m)| find(&index, m, || format!("{place}.identities[{x}]"), "arrow"))
        .collect::<Result<Vec<_>>>()?;
    let mut table = HashMap::new();
    for (i, [g, f, h]) in body.compose.iter().enumerate() {
        let here = || format!("{place}.compose[{i}] ({g} . {f})");
        let key = (find(&index, g, here, "arrow")?, find(&index, f, here, "arrow")?);
        if table.insert(key, find(&index, h, here, "arrow")?).is_some() {
            return Err(at(here(), "composite listed twice"));
        }
    }
    let ids: Vec<usize> = identity.clone();
    let c = FinCategory::new(body.objects.clone(), arrows, identity, |g, f| {
        if ids.contains(&g) {
            Some(f)
        } else if ids.contains(&f) {
            Some(g)
        } else {
            table.get(&(g, f)).copied()
        }
    })
    .map_err(core(place))?;
    checked(place, c.validate())?;
    Ok(Arc::new(c))
}

pub fn read_fincategory(text: &str) -> Result<Arc<FinCategory>> {
    let doc: FinCategoryDoc = toml::from_str(text)?;
    expect_kind(doc.kind, Kind::Fincategory)?;
    decode_fincategory(&doc.category, "category")
}

pub fn write_fincategory(c: &FinCategory) -> String {
    to_toml(&FinCategoryDoc { kind: Kind::Fincategory, version: VERSION.into(), category: encode_fincategory(c) })
}

// ---------------------------------------------------------------- profunctors

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfunctorElementBody {
    name: String,
    cod: String,
    dom: String,
}

/// `cod_action` lists `[x, m, x . m]` and `dom_action` lists `[n, x, n . x]`,
/// identities left out.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfunctorDoc {
    kind: Kind,
    version: String,
    cod_action: Vec<[String; 3]>,
    dom_action: Vec<[String; 3]>,
    dom: FinCategoryBody,
    cod: FinCategoryBody,
    element: Vec<ProfunctorElementBody>,
}

pub fn read_profunctor(text: &str) -> Result<Profunctor> {
    let doc: ProfunctorDoc = toml::from_str(text)?;
    expect_kind(doc.kind, Kind::Profunctor)?;
    let dom = decode_fincategory(&doc.dom, "dom")?;
    let cod = decode_fincategory(&doc.cod, "cod")?;
    let mut names = Vec::with_capacity(doc.element.len());
    let mut over = Vec::with_capacity(doc.element.len());
    for (i, e) in doc.element.iter().enumerate() {
        let place = format!("element[{i}] ({})", e.name);
        names.push(e.name.clone());
        over.push((
            cod.object_index(&e.cod).map_err(core(place.clone()))?,
            dom.object_index(&e.dom).map_err(core(place))?,
        ));
    }
    let elements = lookup(&names);
    let mut cod_table = HashMap::new();
    for (i, [x, m, y]) in doc.cod_action.iter().enumerate() {
        let place = || format!("cod_action[{i}] ({x} . {m})");
        let m = cod.arrow_index(m).map_err(core(place()))?;
        let key = (m, find(&elements, x, place, "element")?);
        if cod_table.insert(key, find(&elements, y, place, "element")?).is_some() {
            return Err(at(place(), "listed twice"));
        }
    }
    let mut dom_table = HashMap::new();
    for (i, [n, x, y]) in doc.dom_action.iter().enumerate() {
        let place = || format!("dom_action[{i}] ({n} . {x})");
        let n = dom.arrow_index(n).map_err(core(place()))?;
        let key = (n, find(&elements, x, place, "element")?);
        if dom_table.insert(key, find(&elements, y, place, "element")?).is_some() {
            return Err(at(place(), "listed twice"));
        }
    }
    let is_id = |c: &FinCategory, m: usize| c.identity(c.arrow(m).src) == m;
    let p = Profunctor::new(
        dom.clone(),
        cod.clone(),
        names,
        over,
        |m, x| if is_id(&cod, m) { Some(x) } else { cod_table.get(&(m, x)).copied() },
        |n, x| if is_id(&dom, n) { Some(x) } else { dom_table.get(&(n, x)).copied() },
    )
    .map_err(core("profunctor"))?;
    checked("profunctor", p.validate())?;
    Ok(p)
}

pub fn write_profunctor(p: &Profunctor) -> String {
    let name = |x: usize| p.names()[x].clone();
    let is_id = |c: &FinCategory, m: usize| c.identity(c.arrow(m).src) == m;
    let mut cod_action = Vec::new();
    for x in 0..p.len() {
        for m in p.cod.hom_into(p.over(x).0).filter(|&m| !is_id(&p.cod, m)) {
            cod_action.push([name(x), p.cod.arrow(m).name.clone(), name(p.cod_act(m, x))]);
        }
    }
    let mut dom_action = Vec::new();
    for x in 0..p.len() {
        let a = p.over(x).1;
        for n in (0..p.dom.num_arrows()).filter(|&n| p.dom.arrow(n).src == a && !is_id(&p.dom, n)) {
            dom_action.push([p.dom.arrow(n).name.clone(), name(x), name(p.dom_act(n, x))]);
        }
    }
    to_toml(&ProfunctorDoc {
        kind: Kind::Profunctor,
        version: VERSION.into(),
        cod_action,
        dom_action,
        dom: encode_fincategory(&p.dom),
        cod: encode_fincategory(&p.cod),
        element: (0..p.len())
            .map(|x| ProfunctorElementBody {
                name: name(x),
                cod: p.cod.objects()[p.over(x).0].clone(),
                dom: p.dom.objects()[p.over(x).1].clone(),
            })
            .collect(),
    })
}
