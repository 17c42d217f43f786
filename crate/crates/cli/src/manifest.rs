//! Manifest loading.
//!
//! A manifest is a TOML document with the tables `[field]`, `[ring]`,
//! `[derivations.NAME]`, `[points]` and `[run]`. Unknown keys are
//! rejected and every string holding a polynomial keeps its byte span, so
//! errors point at `file:line:column`.

use std::fmt;
use std::ops::Range;

use indexmap::IndexMap;
use serde::Deserialize;
use toml::Spanned;

use lndkit::derivation::{Derivation, DEFAULT_DEGREE_BOUND};
use lndkit::embedding::{Method, PointFamily, PointSpec};
use lndkit::field::{parse_base, BaseField, Field, Value};
use lndkit::ideal::RingPresentation;
use lndkit::poly::{parse_field_elem, parse_univariate, Poly, PolyError, PolyRing};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    field: Spanned<RawField>,
    ring: Spanned<RawRing>,
    #[serde(default)]
    derivations: IndexMap<String, Spanned<RawDerivation>>,
    #[serde(default)]
    points: RawPoints,
    #[serde(default)]
    run: RawRun,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    base: Spanned<String>,
    #[serde(default)]
    ratfunc: Vec<Spanned<String>>,
    #[serde(default)]
    extensions: Vec<RawExtension>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExtension {
    name: Spanned<String>,
    minpoly: Spanned<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRing {
    vars: Vec<Spanned<String>>,
    #[serde(default)]
    relations: Vec<Spanned<String>>,
    #[serde(default)]
    domain: bool,
    dimension: Option<Spanned<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDerivation {
    values: IndexMap<String, Spanned<String>>,
    lnd: Option<Spanned<String>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoints {
    #[serde(default)]
    explicit: Vec<Spanned<RawPoint>>,
    #[serde(default)]
    family: Vec<Spanned<RawFamily>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoint {
    label: String,
    coords: Vec<Spanned<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    name: String,
    params: Vec<String>,
    coords: Vec<Spanned<String>>,
    count: usize,
    #[serde(default = "default_height")]
    height: i64,
}

fn default_height() -> i64 {
    5
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    seed: Option<u64>,
    bound: Option<u32>,
    trials: Option<usize>,
    method: Option<Spanned<String>>,
    sequence: Option<Vec<Spanned<String>>>,
    max_repeat: Option<usize>,
    kernel_degree: Option<u32>,
    slice_degree: Option<u32>,
    element: Option<Spanned<String>>,
    exp_scalar: Option<Spanned<String>>,
    #[serde(default)]
    assume_trivial_fixed_field: bool,
    #[serde(default)]
    conic_lambda: Vec<String>,
    #[serde(default)]
    conic_rational: Vec<String>,
}

/// Where in the manifest something went wrong.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Location {
    pub source: String,
    /// 1-based line and column; `None` when only the key is known.
    pub position: Option<(usize, usize)>,
    pub key: String,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.position {
            Some((l, c)) => write!(f, "{}:{l}:{c} [{}]", self.source, self.key),
            None => write!(f, "{} [{}]", self.source, self.key),
        }
    }
}

/// An error in the user's input, reported with exit status 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub location: Option<Location>,
    pub message: String,
}

impl InputError {
    pub fn new(location: Option<Location>, message: impl Into<String>) -> Self {
        InputError { location, message: message.into() }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.location {
            Some(l) => write!(f, "{l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for InputError {}

/// Manifest text together with a label used in locations.
#[derive(Debug, Clone)]
pub struct Source {
    pub label: String,
    pub text: String,
}

impl Source {
    pub fn new(label: impl Into<String>, text: impl Into<String>) -> Self {
        Source { label: label.into(), text: text.into() }
    }

    fn line_col(&self, offset: usize) -> (usize, usize) {
        let offset = offset.min(self.text.len());
        let before = &self.text[..offset];
        let line = before.matches('\n').count() + 1;
        let col = before.rfind('\n').map_or(offset, |i| offset - i - 1) + 1;
        (line, col)
    }

    pub fn at(&self, span: Range<usize>, key: impl Into<String>) -> Location {
        Location { source: self.label.clone(), position: Some(self.line_col(span.start)), key: key.into() }
    }

    pub fn key(&self, key: impl Into<String>) -> Location {
        Location { source: self.label.clone(), position: None, key: key.into() }
    }

    /// Location of a character inside a basic string literal.
    fn inside(&self, span: Range<usize>, pos: usize, key: impl Into<String>) -> Location {
        self.at(span.start + 1 + pos..span.end, key)
    }
}

/// How local nilpotency of a declared derivation is to be established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LndSpec {
    Asserted,
    Certify(u32),
}

impl fmt::Display for LndSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LndSpec::Asserted => f.write_str("asserted"),
            LndSpec::Certify(n) => write!(f, "certify({n})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DerivationEntry {
    pub derivation: Derivation,
    pub lnd: LndSpec,
    pub location: Location,
}

#[derive(Debug, Clone)]
pub struct FamilyEntry {
    pub family: PointFamily,
    pub count: usize,
    pub height: i64,
    pub location: Location,
}

/// Command-line values that take precedence over `[run]`.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub bound: Option<u32>,
    pub trials: Option<usize>,
    pub method: Option<Method>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub bound: u32,
    pub trials: usize,
    pub method: Method,
    /// Names of the derivations in the working sequence.
    pub sequence: Vec<String>,
    pub max_repeat: usize,
    pub kernel_degree: u32,
    pub slice_degree: u32,
    pub element: Option<Poly>,
    pub exp_scalar: Option<Value>,
    pub trivial_fixed_field: bool,
    pub conic_lambda: Vec<String>,
    pub conic_rational: Vec<String>,
}

/// A validated manifest.
#[derive(Debug, Clone)]
pub struct Manifest {
    pub source: Source,
    pub field: Field,
    /// Minimal polynomials whose irreducibility is trusted, with the field
    /// they live over.
    pub irreducible_asserted: Vec<(String, String)>,
    pub ring: RingPresentation,
    pub derivations: Vec<DerivationEntry>,
    pub points: Vec<(PointSpec, Location)>,
    pub families: Vec<FamilyEntry>,
    pub run: RunConfig,
}

fn poly_pos(e: &PolyError) -> Option<usize> {
    match e {
        PolyError::Syntax { pos, .. } | PolyError::UnknownSymbol { pos, .. } | PolyError::NonPolynomial { pos } => Some(*pos),
        _ => None,
    }
}

impl Manifest {
    pub fn parse(source: Source, overrides: &Overrides) -> Result<Manifest, InputError> {
        let raw: RawManifest = toml::from_str(&source.text).map_err(|e| {
            let loc = e.span().map(|s| source.at(s, "manifest"));
            InputError::new(loc, e.message().to_string())
        })?;
        let (field, irreducible_asserted) = build_field(&source, &raw.field)?;
        let ring = build_ring(&source, &field, &raw.ring)?;
        let bound = overrides.bound.or(raw.run.bound).unwrap_or(DEFAULT_DEGREE_BOUND);
        let mut derivations = Vec::new();
        for (name, d) in &raw.derivations {
            derivations.push(build_derivation(&source, &ring, name, d, bound)?);
        }
        let mut points = Vec::new();
        for p in &raw.points.explicit {
            points.push(build_point(&source, &ring, p)?);
        }
        let mut families = Vec::new();
        for (idx, f) in raw.points.family.iter().enumerate() {
            families.push(build_family(&source, &ring, idx, f)?);
        }
        let run = build_run(&source, &ring, &raw.run, overrides, bound, &derivations)?;
        Ok(Manifest { source, field, irreducible_asserted, ring, derivations, points, families, run })
    }

    pub fn derivation(&self, name: &str) -> Option<&DerivationEntry> {
        self.derivations.iter().find(|d| d.derivation.name() == name)
    }

    /// The working sequence, in order.
    pub fn sequence(&self) -> Vec<&DerivationEntry> {
        self.run.sequence.iter().filter_map(|n| self.derivation(n)).collect()
    }

    /// Explicit points followed by samples from every family.
    pub fn all_points(&self) -> Result<Vec<PointSpec>, InputError> {
        let mut out: Vec<PointSpec> = self.points.iter().map(|(p, _)| p.clone()).collect();
        for f in &self.families {
            let pts = f
                .family
                .sample(&self.ring, f.count, self.run.seed, f.height)
                .map_err(|e| InputError::new(Some(f.location.clone()), e.to_string()))?;
            out.extend(pts);
        }
        Ok(out)
    }
}

fn build_field(source: &Source, raw: &Spanned<RawField>) -> Result<(Field, Vec<(String, String)>), InputError> {
    let raw = raw.get_ref();
    let base = parse_base(raw.base.get_ref())
        .ok_or_else(|| InputError::new(Some(source.at(raw.base.span(), "field.base")), "expected `Q` or `F<p>` for a prime p"))?;
    let mut field = match base {
        BaseField::Rationals => Field::rationals(),
        BaseField::Prime(p) => Field::prime(p)
            .map_err(|e| InputError::new(Some(source.at(raw.base.span(), "field.base")), e.to_string()))?,
    };
    for v in &raw.ratfunc {
        field = field
            .adjoin_indeterminate(v.get_ref())
            .map_err(|e| InputError::new(Some(source.at(v.span(), "field.ratfunc")), e.to_string()))?;
    }
    let mut asserted = Vec::new();
    for (i, ext) in raw.extensions.iter().enumerate() {
        let key = format!("field.extensions[{i}]");
        let name = ext.name.get_ref();
        let coeffs = parse_univariate(ext.minpoly.get_ref(), &field, name).map_err(|e| {
            let loc = match poly_pos(&e) {
                Some(p) => source.inside(ext.minpoly.span(), p, format!("{key}.minpoly")),
                None => source.at(ext.minpoly.span(), format!("{key}.minpoly")),
            };
            InputError::new(Some(loc), e.to_string())
        })?;
        let over = field.to_string();
        field = field
            .extend(name, coeffs)
            .map_err(|e| InputError::new(Some(source.at(ext.minpoly.span(), format!("{key}.minpoly"))), e.to_string()))?;
        asserted.push((ext.minpoly.get_ref().clone(), over));
    }
    Ok((field, asserted))
}

fn parse_poly(source: &Source, ring: &PolyRing, text: &Spanned<String>, key: &str) -> Result<Poly, InputError> {
    ring.parse(text.get_ref()).map_err(|e| {
        let loc = match poly_pos(&e) {
            Some(p) => source.inside(text.span(), p, key),
            None => source.at(text.span(), key),
        };
        InputError::new(Some(loc), e.to_string())
    })
}

fn build_ring(source: &Source, field: &Field, raw: &Spanned<RawRing>) -> Result<RingPresentation, InputError> {
    let span = raw.span();
    let raw = raw.get_ref();
    let names: Vec<&str> = raw.vars.iter().map(|v| v.get_ref().as_str()).collect();
    let ring = PolyRing::new(field, &names).map_err(|e| InputError::new(Some(source.at(span.clone(), "ring.vars")), e.to_string()))?;
    let mut rels = Vec::new();
    for (i, r) in raw.relations.iter().enumerate() {
        rels.push(parse_poly(source, &ring, r, &format!("ring.relations[{i}]"))?);
    }
    let pres = RingPresentation::new(&ring, rels, raw.domain)
        .map_err(|e| InputError::new(Some(source.at(span.clone(), "ring.relations")), e.to_string()))?;
    let Some(dim) = &raw.dimension else {
        return Ok(pres);
    };
    let computed = pres.dimension().map_err(|e| InputError::new(Some(source.at(span, "ring.relations")), e.to_string()))?;
    if computed != *dim.get_ref() {
        return Err(InputError::new(
            Some(source.at(dim.span(), "ring.dimension")),
            format!("declared dimension {} but the relations give dimension {computed}", dim.get_ref()),
        ));
    }
    Ok(pres.with_asserted_dimension(Some(computed)))
}

fn parse_lnd(source: &Source, text: &Spanned<String>, key: &str, default: u32) -> Result<LndSpec, InputError> {
    let t = text.get_ref().trim();
    if t == "asserted" {
        return Ok(LndSpec::Asserted);
    }
    if t == "certify" {
        return Ok(LndSpec::Certify(default));
    }
    t.strip_prefix("certify(")
        .and_then(|r| r.strip_suffix(')'))
        .and_then(|n| n.trim().parse::<u32>().ok())
        .map(LndSpec::Certify)
        .ok_or_else(|| InputError::new(Some(source.at(text.span(), key)), "expected `asserted`, `certify` or `certify(N)`"))
}

fn build_derivation(
    source: &Source,
    b: &RingPresentation,
    name: &str,
    raw: &Spanned<RawDerivation>,
    bound: u32,
) -> Result<DerivationEntry, InputError> {
    let location = source.at(raw.span(), format!("derivations.{name}"));
    let raw = raw.get_ref();
    let ring = b.ring();
    for key in raw.values.keys() {
        if ring.var_index(key).is_err() {
            let span = raw.values[key].span();
            return Err(InputError::new(
                Some(source.at(span, format!("derivations.{name}.values.{key}"))),
                format!("`{key}` is not a generator of the ring"),
            ));
        }
    }
    let mut values = Vec::with_capacity(ring.nvars());
    for v in ring.vars() {
        values.push(match raw.values.get(v) {
            Some(text) => parse_poly(source, ring, text, &format!("derivations.{name}.values.{v}"))?,
            None => ring.zero(),
        });
    }
    let lnd = match &raw.lnd {
        Some(t) => parse_lnd(source, t, &format!("derivations.{name}.lnd"), bound)?,
        None => LndSpec::Certify(bound),
    };
    let d = Derivation::new(name, b, values).map_err(|e| InputError::new(Some(location.clone()), e.to_string()))?;
    let d = match lnd {
        LndSpec::Asserted => d.asserted(),
        LndSpec::Certify(n) => d.certified(n).map_err(|e| InputError::new(Some(location.clone()), e.to_string()))?,
    };
    Ok(DerivationEntry { derivation: d, lnd, location })
}

fn build_point(source: &Source, b: &RingPresentation, raw: &Spanned<RawPoint>) -> Result<(PointSpec, Location), InputError> {
    let p = raw.get_ref();
    let location = source.at(raw.span(), format!("points.explicit.{}", p.label));
    let k = b.field();
    let mut coords = Vec::with_capacity(p.coords.len());
    for (i, c) in p.coords.iter().enumerate() {
        let key = format!("points.explicit.{}.coords[{i}]", p.label);
        coords.push(parse_field_elem(c.get_ref(), k).map_err(|e| {
            let loc = match poly_pos(&e) {
                Some(pos) => source.inside(c.span(), pos, key.clone()),
                None => source.at(c.span(), key.clone()),
            };
            InputError::new(Some(loc), e.to_string())
        })?);
    }
    let spec = PointSpec::new(b, k, coords, &p.label).map_err(|e| InputError::new(Some(location.clone()), e.to_string()))?;
    Ok((spec, location))
}

fn build_family(source: &Source, b: &RingPresentation, idx: usize, raw: &Spanned<RawFamily>) -> Result<FamilyEntry, InputError> {
    let f = raw.get_ref();
    let location = source.at(raw.span(), format!("points.family[{idx}]"));
    if f.coords.len() != b.nvars() {
        return Err(InputError::new(
            Some(location),
            format!("family `{}` has {} coordinates, the ring has {} generators", f.name, f.coords.len(), b.nvars()),
        ));
    }
    let params: Vec<&str> = f.params.iter().map(|s| s.as_str()).collect();
    let coords: Vec<&str> = f.coords.iter().map(|c| c.get_ref().as_str()).collect();
    let family = PointFamily::parse(&f.name, b.field(), &params, &coords).map_err(|e| {
        let at = f.coords.first().map_or(location.clone(), |c| source.at(c.span(), format!("points.family[{idx}].coords")));
        InputError::new(Some(at), e.to_string())
    })?;
    if f.height <= 0 {
        return Err(InputError::new(Some(location), "height must be positive"));
    }
    Ok(FamilyEntry { family, count: f.count, height: f.height, location })
}

fn build_run(
    source: &Source,
    b: &RingPresentation,
    raw: &RawRun,
    ov: &Overrides,
    bound: u32,
    derivations: &[DerivationEntry],
) -> Result<RunConfig, InputError> {
    let method = match (&ov.method, &raw.method) {
        (Some(m), _) => *m,
        (None, Some(t)) => t
            .get_ref()
            .parse::<Method>()
            .map_err(|e| InputError::new(Some(source.at(t.span(), "run.method")), e))?,
        (None, None) => Method::Both,
    };
    let sequence = match &raw.sequence {
        Some(seq) => {
            let mut out = Vec::new();
            for (i, s) in seq.iter().enumerate() {
                if !derivations.iter().any(|d| d.derivation.name() == s.get_ref()) {
                    return Err(InputError::new(
                        Some(source.at(s.span(), format!("run.sequence[{i}]"))),
                        format!("unknown derivation `{}`", s.get_ref()),
                    ));
                }
                out.push(s.get_ref().clone());
            }
            out
        }
        None => derivations.iter().map(|d| d.derivation.name().to_string()).collect(),
    };
    let element = match &raw.element {
        Some(t) => Some(parse_poly(source, b.ring(), t, "run.element")?),
        None => None,
    };
    let exp_scalar = match &raw.exp_scalar {
        Some(t) => Some(
            parse_field_elem(t.get_ref(), b.field())
                .map_err(|e| InputError::new(Some(source.at(t.span(), "run.exp_scalar")), e.to_string()))?,
        ),
        None => None,
    };
    Ok(RunConfig {
        seed: ov.seed.or(raw.seed).unwrap_or(0),
        bound,
        trials: ov.trials.or(raw.trials).unwrap_or(20),
        method,
        sequence,
        max_repeat: raw.max_repeat.unwrap_or(3).max(1),
        kernel_degree: raw.kernel_degree.unwrap_or(2),
        slice_degree: raw.slice_degree.unwrap_or(2),
        element,
        exp_scalar,
        trivial_fixed_field: raw.assume_trivial_fixed_field,
        conic_lambda: raw.conic_lambda.clone(),
        conic_rational: raw.conic_rational.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> Result<Manifest, InputError> {
        Manifest::parse(Source::new("m.toml", text), &Overrides::default())
    }

    const PLANE: &str = r#"
[field]
base = "Q"

[ring]
vars = ["x", "y"]
domain = true

[derivations.dx]
values = { x = "1" }
"#;

    #[test]
    fn minimal_manifest() {
        let m = load(PLANE).unwrap();
        assert_eq!(m.derivations.len(), 1);
        assert_eq!(m.run.sequence, vec!["dx"]);
        assert_eq!(m.derivations[0].derivation.values()[1].to_string(), "0");
        assert_eq!(m.run.seed, 0);
    }

    #[test]
    fn unknown_key_is_located() {
        let text = format!("{PLANE}\n[run]\nsede = 3\n");
        let e = load(&text).unwrap_err();
        let loc = e.location.unwrap();
        assert_eq!(loc.position.unwrap().0, 13);
        assert!(e.message.contains("sede"), "{}", e.message);
    }

    #[test]
    fn polynomial_error_points_into_string() {
        let text = PLANE.replace("x = \"1\"", "x = \"1 + q\"");
        let e = load(&text).unwrap_err();
        let loc = e.location.unwrap();
        assert_eq!(loc.key, "derivations.dx.values.x");
        // column of the unknown variable q inside the string
        assert_eq!(loc.position, Some((10, 21)));
    }

    #[test]
    fn lnd_spec_forms() {
        let src = Source::new("m", "lnd = \"x\"");
        let s = |t: &str| Spanned::new(0..1, t.to_string());
        assert_eq!(parse_lnd(&src, &s("asserted"), "k", 9).unwrap(), LndSpec::Asserted);
        assert_eq!(parse_lnd(&src, &s("certify"), "k", 9).unwrap(), LndSpec::Certify(9));
        assert_eq!(parse_lnd(&src, &s("certify(4)"), "k", 9).unwrap(), LndSpec::Certify(4));
        assert!(parse_lnd(&src, &s("maybe"), "k", 9).is_err());
    }

    #[test]
    fn wrong_dimension_is_rejected() {
        let text = PLANE.replace("domain = true", "domain = true\ndimension = 1");
        let e = load(&text).unwrap_err();
        assert_eq!(e.location.unwrap().key, "ring.dimension");
    }

    #[test]
    fn line_columns() {
        let s = Source::new("f", "ab\ncd\n");
        assert_eq!(s.line_col(0), (1, 1));
        assert_eq!(s.line_col(4), (2, 2));
    }
}
