//! The map `Psi_S : B -> B[X_1..X_N]` built from a sequence of locally
//! nilpotent derivations, its specializations at points, injectivity
//! oracles, target reduction, and the open-locus certificate.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::derivation::{inv_factorial, require_char_zero, Derivation, DerivationError};
use crate::field::{Field, Value};
use crate::ideal::{algebra_map_kernel, kernel_is_trivial, subsets, Ideal, IdealError, RingPresentation};
use crate::poly::{jacobian_matrix, jacobian_rank_wrt, rank_by_elimination, MonomialOrder, OrderKind, Poly, PolyError, PolyRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error("empty derivation sequence")]
    EmptySequence,
    #[error("derivations live on different rings")]
    RingMismatch,
    #[error("point {point} is not on the variety: relation `{relation}` evaluates to {value}")]
    InvalidPoint { point: String, relation: String, value: String },
    #[error("point field {point_field} does not contain the coefficient field {base}")]
    FieldMismatch { point_field: String, base: String },
    #[error("expected {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("injectivity oracles disagree at {point}: jacobian rank {rank} vs dim {dim}, kernel trivial = {elimination}")]
    OracleDisagreement { point: String, rank: usize, dim: usize, elimination: bool },
    #[error("map is not injective at the generic point: Jacobian rank {rank} < dim B = {dim}")]
    GenericNotInjective { rank: usize, dim: usize },
    #[error("no injective linear reduction found in {0} trials")]
    ReductionFailed(usize),
    #[error("target has {got} variables, reduce to dim B = {dim} first")]
    NotReduced { got: usize, dim: usize },
    #[error("no nonzero leading coefficient found for target variable {0}")]
    CertificateUnavailable(String),
}

impl From<IdealError> for EmbeddingError {
    fn from(e: IdealError) -> Self {
        EmbeddingError::Derivation(DerivationError::Ideal(e))
    }
}

impl From<PolyError> for EmbeddingError {
    fn from(e: PolyError) -> Self {
        EmbeddingError::from(IdealError::Poly(e))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Jacobian,
    Elimination,
    Both,
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "jacobian" => Ok(Method::Jacobian),
            "elimination" => Ok(Method::Elimination),
            "both" => Ok(Method::Both),
            other => Err(format!("unknown method `{other}` (expected jacobian, elimination or both)")),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Jacobian => "jacobian",
            Method::Elimination => "elimination",
            Method::Both => "both",
        })
    }
}

/// `count` names `prefix1, prefix2, ...` avoiding `taken`.
pub(crate) fn fresh_names(prefix: &str, count: usize, taken: &[String]) -> Vec<String> {
    let mut p = prefix.to_string();
    loop {
        let names: Vec<String> = (1..=count).map(|i| format!("{p}{i}")).collect();
        if names.iter().all(|n| !taken.contains(n)) {
            return names;
        }
        p = format!("{p}_");
    }
}

fn taken_names(b: &RingPresentation) -> Vec<String> {
    let mut t = b.ring().vars().to_vec();
    t.extend(b.field().constant_names());
    t
}

/// A ring map `B -> B[X_1..X_N]` given on generators.
#[derive(Clone, Debug)]
pub struct EmbeddingMap {
    source: RingPresentation,
    sequence: Vec<String>,
    target: RingPresentation,
    images: Vec<Poly>,
    asserted: Vec<String>,
    substitution: Option<Vec<Vec<i64>>>,
}

/// Builds `Psi_S`. The coefficient of `X^i` in `Psi_S(b)` is
/// `(D_N^{i_N} ∘ ... ∘ D_1^{i_1})(b) / (i_1! ... i_N!)`.
pub fn build_psi(source: &RingPresentation, sequence: &[Derivation], bound: u32) -> Result<EmbeddingMap, EmbeddingError> {
    if sequence.is_empty() {
        return Err(EmbeddingError::EmptySequence);
    }
    require_char_zero(source.field()).map_err(EmbeddingError::from)?;
    for d in sequence {
        if d.ring().ring() != source.ring() {
            return Err(EmbeddingError::RingMismatch);
        }
        if !d.status().is_lnd() {
            return Err(DerivationError::NotLocallyNilpotent(d.name().to_string()).into());
        }
    }
    let k = source.field().clone();
    let m = source.nvars();
    let n = sequence.len();
    let xnames = fresh_names("X", n, &taken_names(source));
    let target = source.extend(&xnames)?;
    let tr = target.ring().clone();
    let map: Vec<usize> = (0..m).collect();
    let mut images = Vec::with_capacity(m);
    for i in 0..m {
        let mut layer: Vec<(Vec<u32>, Poly)> = vec![(vec![], source.ring().var(i))];
        for d in sequence {
            let mut next = Vec::new();
            for (e, c) in &layer {
                for (p, dp) in d.orbit(c, bound)?.into_iter().enumerate() {
                    let mut e2 = e.clone();
                    e2.push(p as u32);
                    next.push((e2, dp.scale(&inv_factorial(&k, p as u32))));
                }
            }
            layer = next;
        }
        let mut acc = tr.zero();
        for (e, c) in layer {
            let mut exps = vec![0u32; m];
            exps.extend(e);
            let x = tr.monomial(exps, k.one());
            acc = &acc + &(&c.embed(&tr, &map)? * &x);
        }
        images.push(acc);
    }
    let asserted = sequence
        .iter()
        .filter(|d| d.status() == crate::derivation::Nilpotency::Asserted)
        .map(|d| d.name().to_string())
        .collect::<Vec<_>>();
    let mut asserted_unique: Vec<String> = Vec::new();
    for a in asserted {
        if !asserted_unique.contains(&a) {
            asserted_unique.push(a);
        }
    }
    Ok(EmbeddingMap {
        source: source.clone(),
        sequence: sequence.iter().map(|d| d.name().to_string()).collect(),
        target,
        images,
        asserted: asserted_unique,
        substitution: None,
    })
}

impl EmbeddingMap {
    pub fn source(&self) -> &RingPresentation {
        &self.source
    }

    /// `B[X]` with the relations of `B`.
    pub fn target(&self) -> &RingPresentation {
        &self.target
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    pub fn sequence(&self) -> &[String] {
        &self.sequence
    }

    /// Derivations whose local nilpotency was asserted rather than checked.
    pub fn asserted_lnd(&self) -> &[String] {
        &self.asserted
    }

    /// Linear substitution applied by [`Self::reduce_targets`], rows
    /// indexed by the original target variables.
    pub fn substitution(&self) -> Option<&[Vec<i64>]> {
        self.substitution.as_deref()
    }

    pub fn target_vars(&self) -> &[String] {
        &self.target.ring().vars()[self.source.nvars()..]
    }

    pub fn ntargets(&self) -> usize {
        self.target.nvars() - self.source.nvars()
    }

    fn target_indices(&self) -> Vec<usize> {
        (self.source.nvars()..self.target.nvars()).collect()
    }

    /// `Psi(b)` reduced in `B[X]`.
    pub fn apply(&self, b: &Poly) -> Result<Poly, EmbeddingError> {
        Ok(self.target.reduce(&b.substitute(&self.images)?)?)
    }

    /// Images after setting `X_i = lambda_i`, as elements of `B`.
    pub fn evaluate_targets(&self, lambdas: &[Value]) -> Result<Vec<Poly>, EmbeddingError> {
        if lambdas.len() != self.ntargets() {
            return Err(EmbeddingError::ArityMismatch { expected: self.ntargets(), got: lambdas.len() });
        }
        let sr = self.source.ring();
        let mut sub: Vec<Poly> = (0..sr.nvars()).map(|i| sr.var(i)).collect();
        sub.extend(lambdas.iter().map(|l| sr.constant(l.clone())));
        self.images
            .iter()
            .map(|p| Ok(self.source.reduce(&p.substitute(&sub)?)?))
            .collect()
    }

    /// Rank of `(d Psi(x_i) / d X_j)` over `Frac(B[X])`, by division-free
    /// elimination with normal-form zero tests.
    pub fn generic_rank(&self) -> Result<usize, EmbeddingError> {
        require_char_zero(self.source.field()).map_err(EmbeddingError::from)?;
        let m = jacobian_matrix(&self.images, &self.target_indices());
        self.target.reduce(&self.target.ring().zero())?;
        let t = self.target.clone();
        Ok(rank_by_elimination(&m, move |p| t.reduce(p).expect("basis already computed")))
    }

    /// Injectivity at the generic point: the image has transcendence degree
    /// `dim B` over `Frac(B)`.
    pub fn generic_test(&self) -> Result<(), EmbeddingError> {
        let rank = self.generic_rank()?;
        let dim = self.source.dimension()?;
        if rank < dim {
            return Err(EmbeddingError::GenericNotInjective { rank, dim });
        }
        Ok(())
    }

    /// Substitutes `X_i -> sum_j a_ij Y_j`.
    pub fn substitute_targets(&self, matrix: &[Vec<i64>]) -> Result<EmbeddingMap, EmbeddingError> {
        let n = matrix.first().map(|r| r.len()).unwrap_or(0);
        if matrix.len() != self.ntargets() {
            return Err(EmbeddingError::ArityMismatch { expected: self.ntargets(), got: matrix.len() });
        }
        let ynames = fresh_names("Y", n, &taken_names(&self.source));
        let target = self.source.extend(&ynames)?;
        let tr = target.ring();
        let m = self.source.nvars();
        let mut sub: Vec<Poly> = (0..m).map(|i| tr.var(i)).collect();
        sub.extend(linear_forms(tr, m, matrix));
        let images = self
            .images
            .iter()
            .map(|p| Ok(target.reduce(&p.substitute(&sub)?)?))
            .collect::<Result<Vec<_>, EmbeddingError>>()?;
        let composed = match &self.substitution {
            Some(prev) => compose_matrices(prev, matrix),
            None => matrix.to_vec(),
        };
        Ok(EmbeddingMap {
            source: self.source.clone(),
            sequence: self.sequence.clone(),
            target,
            images,
            asserted: self.asserted.clone(),
            substitution: Some(composed),
        })
    }

    /// Cuts the target down to `dim B` variables keeping generic
    /// injectivity.
    pub fn reduce_targets(&self, trials: usize, seed: u64) -> Result<EmbeddingMap, EmbeddingError> {
        let n = self.source.dimension()?;
        let big = self.ntargets();
        if big <= n {
            return Ok(self.clone());
        }
        for matrix in candidate_matrices(big, n, trials, seed) {
            let reduced = self.substitute_targets(&matrix)?;
            if reduced.generic_rank()? == n {
                return Ok(reduced);
            }
        }
        Err(EmbeddingError::ReductionFailed(trials))
    }

    /// The images at a point, as polynomials in the target variables over
    /// the point's field.
    pub fn specialize(&self, point: &PointSpec) -> Result<Specialization, EmbeddingError> {
        point.check(&self.source)?;
        let ring = PolyRing::from_names(&point.field, self.target_vars().to_vec())?;
        let mut sub: Vec<Poly> = point.coords.iter().map(|c| ring.constant(c.clone())).collect();
        sub.extend((0..ring.nvars()).map(|i| ring.var(i)));
        let images = self.images.iter().map(|p| p.substitute(&sub)).collect::<Result<Vec<_>, _>>()?;
        Ok(Specialization { point: point.clone(), ring, images })
    }

    /// Open-locus certificate: for each target variable `X_j`, a polynomial
    /// relation `P_j(X_j)` over the image of `Psi` with coefficients in
    /// `B`, and the ideal `I_j` of `B` generated by the `X`-coefficients of
    /// its leading coefficient. Points outside `V(I_1 ... I_n)` have an
    /// injective specialization.
    pub fn certify_open_locus(&self) -> Result<LocusCertificate, EmbeddingError> {
        let dim = self.source.dimension()?;
        if self.ntargets() != dim {
            return Err(EmbeddingError::NotReduced { got: self.ntargets(), dim });
        }
        self.generic_test()?;
        let mut entries = Vec::with_capacity(dim);
        for j in 0..dim {
            entries.push(self.certify_variable(j)?);
        }
        let b = &self.source;
        let mut product: Vec<Poly> = vec![b.ring().one()];
        for e in &entries {
            let mut next: Vec<Poly> = Vec::new();
            for p in &product {
                for g in e.ideal.generators() {
                    let q = b.reduce(&(p * g))?;
                    if !q.is_zero() && !next.contains(&q) {
                        next.push(q);
                    }
                }
            }
            product = next;
        }
        let product = Ideal::new(b.ring(), product)?;
        Ok(LocusCertificate { entries, product })
    }

    fn certify_variable(&self, j: usize) -> Result<CertificateEntry, EmbeddingError> {
        let b = &self.source;
        let k = b.field().clone();
        let m = b.nvars();
        let n = self.ntargets();
        let xt = self.target_vars().to_vec();
        let mut taken = taken_names(b);
        taken.extend(xt.iter().cloned());
        let unames = fresh_names("u", m, &taken);
        // variables: X (n), u (m), x (m)
        let mut names = xt.clone();
        names.extend(unames.iter().cloned());
        names.extend(b.ring().vars().iter().cloned());
        let big = PolyRing::from_names(&k, names)?;
        // B[X] variables are x (m) then X (n)
        let mut to_big: Vec<usize> = (n + m..n + 2 * m).collect();
        to_big.extend(0..n);
        let x_to_big: Vec<usize> = (n + m..n + 2 * m).collect();
        let mut gens = Vec::new();
        for r in b.relations() {
            gens.push(r.embed(&big, &x_to_big)?);
        }
        for (i, img) in self.images.iter().enumerate() {
            gens.push(&big.var(n + i) - &img.embed(&big, &to_big)?);
        }
        let ideal = Ideal::new(&big, gens)?.with_step_cap(b.ideal().step_cap());
        let others: Vec<usize> = (0..n).filter(|&i| i != j).collect();
        let mut priority = others.clone();
        priority.push(j);
        priority.extend(n..n + 2 * m);
        let order = MonomialOrder::with_priority(OrderKind::Product(vec![n - 1, 1]), priority);
        let gb = ideal.groebner(&order)?;
        let mut candidates: Vec<Poly> = gb
            .polys()
            .into_iter()
            .filter(|p| p.degree_in(j).unwrap_or(0) > 0 && others.iter().all(|&o| p.degree_in(o).unwrap_or(0) == 0))
            .collect();
        candidates.sort_by_key(|p| (p.degree_in(j).unwrap_or(0), p.nterms()));
        // u -> Psi(x), x -> x, X -> X inside B[X]
        let tr = self.target.ring();
        let mut back: Vec<Poly> = (0..n).map(|i| tr.var(m + i)).collect();
        back.extend(self.images.iter().cloned());
        back.extend((0..m).map(|i| tr.var(i)));
        let mut generators: Vec<Poly> = Vec::new();
        let mut witness: Option<(Poly, Poly)> = None;
        for p in candidates {
            let d = p.degree_in(j).unwrap();
            let lc = p
                .coefficients_wrt(&[j])
                .into_iter()
                .find(|(e, _)| e[0] == d)
                .map(|(_, c)| c)
                .expect("top coefficient exists");
            let c = self.target.reduce(&lc.substitute(&back)?)?;
            if c.is_zero() {
                continue;
            }
            for (_, coeff) in c.coefficients_wrt(&self.target_indices()) {
                let g = b.reduce(&project_to_source(&coeff, b))?;
                if !g.is_zero() && !generators.contains(&g) {
                    generators.push(g);
                }
            }
            if witness.is_none() {
                witness = Some((p.clone(), c));
            }
        }
        let Some((annihilator, leading)) = witness else {
            return Err(EmbeddingError::CertificateUnavailable(xt[j].clone()));
        };
        // present I_j by the reduced basis of I_j + I, dropping members of I
        generators.extend(b.relations().iter().cloned());
        let full = Ideal::new(b.ring(), generators)?.groebner(&MonomialOrder::grevlex())?.polys();
        let mut kept = Vec::new();
        for g in full {
            if !b.is_zero(&g)? {
                kept.push(g);
            }
        }
        let ideal = Ideal::new(b.ring(), kept)?;
        Ok(CertificateEntry { variable: xt[j].clone(), annihilator, leading, ideal })
    }
}

/// Drops the (zero) target exponents of an `X`-free element of `B[X]`.
fn project_to_source(p: &Poly, b: &RingPresentation) -> Poly {
    let m = b.nvars();
    b.ring().from_terms(p.terms().iter().map(|(e, c)| (e[..m].to_vec(), c.clone())))
}

fn linear_forms(ring: &PolyRing, offset: usize, matrix: &[Vec<i64>]) -> Vec<Poly> {
    matrix
        .iter()
        .map(|row| {
            let mut acc = ring.zero();
            for (j, &a) in row.iter().enumerate() {
                if a != 0 {
                    acc = &acc + &(&ring.int(a) * &ring.var(offset + j));
                }
            }
            acc
        })
        .collect()
}

fn compose_matrices(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let cols = b.first().map(|r| r.len()).unwrap_or(0);
    a.iter()
        .map(|row| (0..cols).map(|c| row.iter().zip(b).map(|(x, brow)| x * brow[c]).sum()).collect())
        .collect()
}

/// Trial substitutions, `big x small`: coordinate projections in
/// lexicographic order of the kept variables, then seeded random integer
/// matrices with entries in `[-3, 3]`. At most `trials` are produced.
pub fn candidate_matrices(big: usize, small: usize, trials: usize, seed: u64) -> Vec<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    if big == small {
        out.push((0..big).map(|i| (0..small).map(|j| i64::from(i == j)).collect()).collect());
        return out;
    }
    for keep in subsets(big, small) {
        if out.len() == trials {
            return out;
        }
        let mut m = vec![vec![0i64; small]; big];
        for (j, &i) in keep.iter().enumerate() {
            m[i][j] = 1;
        }
        out.push(m);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < trials {
        out.push((0..big).map(|_| (0..small).map(|_| rng.gen_range(-3..=3)).collect()).collect());
    }
    out
}

/// A point of `Spec B` given by coordinates in a field containing the
/// coefficient field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSpec {
    pub label: String,
    pub field: Field,
    pub coords: Vec<Value>,
}

impl PointSpec {
    pub fn new(source: &RingPresentation, field: &Field, coords: Vec<Value>, label: &str) -> Result<Self, EmbeddingError> {
        let p = PointSpec { label: label.to_string(), field: field.clone(), coords };
        p.check(source)?;
        Ok(p)
    }

    /// Rational point from coordinate strings parsed in the base field.
    pub fn parse(source: &RingPresentation, field: &Field, coords: &[&str], label: &str) -> Result<Self, EmbeddingError> {
        let vals = coords
            .iter()
            .map(|c| crate::poly::parse_field_elem(c, field))
            .collect::<Result<Vec<_>, _>>()?;
        PointSpec::new(source, field, vals, label)
    }

    fn check(&self, source: &RingPresentation) -> Result<(), EmbeddingError> {
        if !self.field.contains_subfield(source.field()) {
            return Err(EmbeddingError::FieldMismatch {
                point_field: self.field.to_string(),
                base: source.field().to_string(),
            });
        }
        if self.coords.len() != source.nvars() {
            return Err(EmbeddingError::ArityMismatch { expected: source.nvars(), got: self.coords.len() });
        }
        for r in source.relations() {
            let v = r.eval(&self.field, &self.coords)?;
            if !self.field.is_zero(&v) {
                return Err(EmbeddingError::InvalidPoint {
                    point: self.coords_string(),
                    relation: r.to_string(),
                    value: self.field.format(&v),
                });
            }
        }
        Ok(())
    }

    pub fn coords_string(&self) -> String {
        let c: Vec<String> = self.coords.iter().map(|v| self.field.format(v)).collect();
        format!("({})", c.join(", "))
    }
}

/// A rational parametrization: coordinates are rational expressions in
/// the parameters over the coefficient field.
#[derive(Clone, Debug)]
pub struct PointFamily {
    pub name: String,
    params: PolyRing,
    coords: Vec<(Poly, Poly)>,
}

impl PointFamily {
    pub fn parse(name: &str, field: &Field, params: &[&str], coords: &[&str]) -> Result<Self, EmbeddingError> {
        let ring = PolyRing::new(field, params)?;
        let coords = coords
            .iter()
            .map(|c| crate::poly::parse_rational(c, &ring))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PointFamily { name: name.to_string(), params: ring, coords })
    }

    pub fn params(&self) -> &[String] {
        self.params.vars()
    }

    /// The point at given parameter values, `None` where a denominator
    /// vanishes.
    pub fn at(&self, source: &RingPresentation, values: &[Value]) -> Result<Option<PointSpec>, EmbeddingError> {
        let k = self.params.field();
        let mut coords = Vec::with_capacity(self.coords.len());
        for (num, den) in &self.coords {
            let d = den.eval(k, values)?;
            if k.is_zero(&d) {
                return Ok(None);
            }
            coords.push(k.div(&num.eval(k, values)?, &d).map_err(PolyError::from)?);
        }
        let args: Vec<String> =
            self.params.vars().iter().zip(values).map(|(p, v)| format!("{p}={}", k.format(v))).collect();
        let label = format!("{}({})", self.name, args.join(", "));
        PointSpec::new(source, k, coords, &label).map(Some)
    }

    /// Up to `count` distinct points at seeded random integer parameters
    /// in `[-bound, bound]`.
    pub fn sample(&self, source: &RingPresentation, count: usize, seed: u64, bound: i64) -> Result<Vec<PointSpec>, EmbeddingError> {
        let k = self.params.field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out: Vec<PointSpec> = Vec::new();
        let mut attempts = 0;
        while out.len() < count && attempts < 50 * count.max(1) {
            attempts += 1;
            let vals: Vec<Value> =
                (0..self.params.nvars()).map(|_| k.from_int(rng.gen_range(-bound..=bound))).collect();
            if let Some(p) = self.at(source, &vals)? {
                if !out.iter().any(|q| q.coords == p.coords) {
                    out.push(p);
                }
            }
        }
        Ok(out)
    }
}

/// Points found by drawing seeded random integer coordinates in
/// `[-bound, bound]` and keeping those on the variety.
pub fn random_points(source: &RingPresentation, count: usize, seed: u64, bound: i64, attempts: usize) -> Vec<PointSpec> {
    let k = source.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<PointSpec> = Vec::new();
    for _ in 0..attempts {
        if out.len() == count {
            break;
        }
        let vals: Vec<Value> = (0..source.nvars()).map(|_| k.from_int(rng.gen_range(-bound..=bound))).collect();
        if let Ok(p) = PointSpec::new(source, k, vals, "random") {
            if !out.iter().any(|q| q.coords == p.coords) {
                let label = format!("random{}", out.len() + 1);
                out.push(PointSpec { label, ..p });
            }
        }
    }
    out
}

/// `Psi` at a point: images in `kappa[X]`.
#[derive(Clone, Debug)]
pub struct Specialization {
    pub point: PointSpec,
    pub ring: PolyRing,
    pub images: Vec<Poly>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectivityVerdict {
    pub injective: bool,
    pub dimension: usize,
    pub jacobian_rank: Option<usize>,
    pub kernel_trivial: Option<bool>,
}

/// Decides whether `B -> kappa[X]`, `x_i -> images[i]`, is injective on
/// `kappa ⊗ B`.
pub fn injectivity_test(source: &RingPresentation, images: &[Poly], method: Method) -> Result<InjectivityVerdict, EmbeddingError> {
    let dim = source.dimension()?;
    let ring = match images.first() {
        Some(p) => p.ring().clone(),
        None => return Err(EmbeddingError::ArityMismatch { expected: source.nvars(), got: 0 }),
    };
    let jacobian = match method {
        Method::Jacobian | Method::Both => {
            let vars: Vec<usize> = (0..ring.nvars()).collect();
            Some(jacobian_rank_wrt(images, &vars)?)
        }
        Method::Elimination => None,
    };
    let elimination = match method {
        Method::Elimination | Method::Both => {
            let kernel = algebra_map_kernel(source, images, &Ideal::zero(&ring))?;
            Some(kernel_is_trivial(source, &kernel)?)
        }
        Method::Jacobian => None,
    };
    let injective = match (jacobian, elimination) {
        (Some(r), Some(e)) => {
            if (r == dim) != e {
                let pt: Vec<String> = images.iter().map(|p| p.to_string()).collect();
                return Err(EmbeddingError::OracleDisagreement {
                    point: format!("images ({})", pt.join(", ")),
                    rank: r,
                    dim,
                    elimination: e,
                });
            }
            e
        }
        (Some(r), None) => r == dim,
        (None, Some(e)) => e,
        (None, None) => unreachable!(),
    };
    Ok(InjectivityVerdict { injective, dimension: dim, jacobian_rank: jacobian, kernel_trivial: elimination })
}

#[derive(Clone, Debug)]
pub struct EakinReduction {
    pub images: Vec<Poly>,
    /// `X_i -> sum_j matrix[i][j] Y_j`.
    pub matrix: Vec<Vec<i64>>,
}

/// Reduces images in `N` target variables to `n` variables by linear
/// substitution, keeping injectivity.
pub fn eakin_reduce(
    source: &RingPresentation,
    images: &[Poly],
    n: usize,
    trials: usize,
    seed: u64,
    method: Method,
) -> Result<EakinReduction, EmbeddingError> {
    let ring = match images.first() {
        Some(p) => p.ring().clone(),
        None => return Err(EmbeddingError::ArityMismatch { expected: source.nvars(), got: 0 }),
    };
    let big = ring.nvars();
    if big < n {
        return Err(EmbeddingError::NotReduced { got: big, dim: n });
    }
    let mut taken = ring.vars().to_vec();
    taken.extend(ring.field().constant_names());
    let ynames = if big == n { ring.vars().to_vec() } else { fresh_names("Y", n, &taken) };
    let small = PolyRing::from_names(ring.field(), ynames)?;
    for matrix in candidate_matrices(big, n, trials.max(1), seed) {
        let sub = linear_forms(&small, 0, &matrix);
        let reduced = images.iter().map(|p| p.substitute(&sub)).collect::<Result<Vec<_>, _>>()?;
        if injectivity_test(source, &reduced, method)?.injective {
            return Ok(EakinReduction { images: reduced, matrix });
        }
    }
    Err(EmbeddingError::ReductionFailed(trials))
}

#[derive(Clone, Debug)]
pub struct CertificateEntry {
    pub variable: String,
    /// `P_j` in `K[X, u, x]`, with `u_i` standing for `Psi(x_i)`.
    pub annihilator: Poly,
    /// Leading coefficient of `P_j` in `X_j` after `u -> Psi(x)`, in `B[X]`.
    pub leading: Poly,
    /// `X`-coefficients of `leading`, as an ideal of `B`.
    pub ideal: Ideal,
}

#[derive(Clone, Debug)]
pub struct LocusCertificate {
    pub entries: Vec<CertificateEntry>,
    pub product: Ideal,
}

impl LocusCertificate {
    /// The point lies outside `V(I_1 ... I_n)`.
    pub fn excludes(&self, point: &PointSpec) -> Result<bool, EmbeddingError> {
        for e in &self.entries {
            let mut hit = false;
            for g in e.ideal.generators() {
                if !point.field.is_zero(&g.eval(&point.field, &point.coords)?) {
                    hit = true;
                    break;
                }
            }
            if !hit {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every `I_j` is the unit ideal.
    pub fn covers_everything(&self) -> bool {
        self.entries.iter().all(|e| e.ideal.generators().iter().any(|g| g.is_constant()))
    }
}

#[derive(Clone, Debug)]
pub struct PointVerdict {
    pub point: PointSpec,
    pub verdict: InjectivityVerdict,
    /// `Some(true)` when the point is certified by the locus certificate.
    pub certified: Option<bool>,
    pub images: Vec<Poly>,
}

#[derive(Clone, Debug, Default)]
pub struct SampleReport {
    pub points: Vec<PointVerdict>,
}

impl SampleReport {
    pub fn injective(&self) -> usize {
        self.points.iter().filter(|p| p.verdict.injective).count()
    }

    pub fn certified(&self) -> usize {
        self.points.iter().filter(|p| p.certified == Some(true)).count()
    }

    /// Certified points whose test failed; nonzero means a bug.
    pub fn violations(&self) -> usize {
        self.points.iter().filter(|p| p.certified == Some(true) && !p.verdict.injective).count()
    }
}

/// Specializes and tests every point, in parallel, preserving input order.
pub fn sample_and_test(
    psi: &EmbeddingMap,
    points: &[PointSpec],
    method: Method,
    certificate: Option<&LocusCertificate>,
) -> Result<SampleReport, EmbeddingError> {
    let results: Vec<Result<PointVerdict, EmbeddingError>> = points
        .par_iter()
        .map(|p| {
            let spec = psi.specialize(p)?;
            let verdict = injectivity_test(psi.source(), &spec.images, method)?;
            let certified = certificate.map(|c| c.excludes(p)).transpose()?;
            Ok(PointVerdict { point: p.clone(), verdict, certified, images: spec.images })
        })
        .collect();
    Ok(SampleReport { points: results.into_iter().collect::<Result<Vec<_>, _>>()? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::Derivation;

    fn dani() -> RingPresentation {
        RingPresentation::parse(&Field::rationals(), &["x", "y", "z"], &["x*y + z^2 + 1"]).unwrap()
    }

    fn dani_derivations(b: &RingPresentation) -> (Derivation, Derivation) {
        let d1 = Derivation::parse("D1", b, &["0", "-2*z", "x"]).unwrap().certified(3).unwrap();
        let d2 = Derivation::parse("D2", b, &["-2*z", "0", "y"]).unwrap().certified(3).unwrap();
        (d1, d2)
    }

    #[test]
    fn line_translation() {
        let b = RingPresentation::parse(&Field::rationals(), &["x"], &[]).unwrap();
        let d = Derivation::parse("d", &b, &["1"]).unwrap().certified(2).unwrap();
        let psi = build_psi(&b, &[d], 16).unwrap();
        assert_eq!(psi.images()[0].to_string(), "x + X1");
        let cert = psi.certify_open_locus().unwrap();
        assert!(cert.covers_everything());
        let p = PointSpec::parse(&b, b.field(), &["0"], "origin").unwrap();
        let spec = psi.specialize(&p).unwrap();
        assert_eq!(spec.images[0].to_string(), "X1");
        assert!(injectivity_test(&b, &spec.images, Method::Both).unwrap().injective);
    }

    #[test]
    fn danielewski_psi() {
        let b = dani();
        let (d1, d2) = dani_derivations(&b);
        let psi = build_psi(&b, &[d1, d2], 16).unwrap();
        let t = psi.target();
        let want = [
            "x - 2*z*X2 - y*X2^2",
            "y - 2*z*X1 - 2*y*X1*X2 - x*X1^2 + 2*z*X1^2*X2 + y*X1^2*X2^2",
            "z + y*X2 + x*X1 - 2*z*X1*X2 - y*X1*X2^2",
        ];
        for (img, w) in psi.images().iter().zip(want) {
            assert_eq!(*img, t.reduce(&t.ring().parse(w).unwrap()).unwrap());
        }
        let p = PointSpec::parse(&b, b.field(), &["1", "-1", "0"], "m").unwrap();
        let spec = psi.specialize(&p).unwrap();
        let r = &spec.ring;
        assert_eq!(spec.images[0], r.parse("1 + X2^2").unwrap());
        assert_eq!(spec.images[1], r.parse("-1 + 2*X1*X2 - X1^2 - X1^2*X2^2").unwrap());
        assert_eq!(spec.images[2], r.parse("X1 - X2 + X1*X2^2").unwrap());
        let v = injectivity_test(&b, &spec.images, Method::Both).unwrap();
        assert!(v.injective);
        assert_eq!(v.jacobian_rank, Some(2));
    }

    #[test]
    fn single_derivation_fails_generically() {
        let b = dani();
        let (d1, _) = dani_derivations(&b);
        let psi = build_psi(&b, &[d1], 16).unwrap();
        assert_eq!(psi.generic_rank().unwrap(), 1);
        assert!(matches!(psi.certify_open_locus(), Err(EmbeddingError::NotReduced { got: 1, dim: 2 })));
        assert_eq!(psi.generic_test(), Err(EmbeddingError::GenericNotInjective { rank: 1, dim: 2 }));
    }

    #[test]
    fn danielewski_certificate() {
        let b = dani();
        let (d1, d2) = dani_derivations(&b);
        let psi = build_psi(&b, &[d1, d2], 16).unwrap();
        let cert = psi.certify_open_locus().unwrap();
        assert!(!cert.entries[0].ideal.is_proper().unwrap());
        let i2 = &cert.entries[1].ideal;
        assert!(i2.is_proper().unwrap());
        let r = i2.ring();
        for g in ["y", "z^2 + 1"] {
            assert!(i2.member(&r.parse(g).unwrap()).unwrap());
        }
        assert!(!i2.member(&r.parse("z").unwrap()).unwrap());
        let p = PointSpec::parse(&b, b.field(), &["1", "-1", "0"], "m").unwrap();
        assert!(cert.excludes(&p).unwrap());
    }

    #[test]
    fn constant_map_is_not_injective() {
        let b = dani();
        let r = PolyRing::new(b.field(), &["X1"]).unwrap();
        let imgs = vec![r.int(1), r.int(-1), r.int(0)];
        let v = injectivity_test(&b, &imgs, Method::Both).unwrap();
        assert!(!v.injective);
        assert_eq!(v.jacobian_rank, Some(0));
    }

    #[test]
    fn eakin_projection() {
        let b = RingPresentation::parse(&Field::rationals(), &["x"], &[]).unwrap();
        let r = PolyRing::new(b.field(), &["X1", "X2"]).unwrap();
        let imgs = vec![r.parse("X1 + X2^2").unwrap()];
        let red = eakin_reduce(&b, &imgs, 1, 10, 7, Method::Both).unwrap();
        assert_eq!(red.matrix, vec![vec![1], vec![0]]);
        assert_eq!(red.images[0].to_string(), "Y1");
        let same = eakin_reduce(&b, &[r.parse("X1").unwrap(), ], 2, 10, 7, Method::Jacobian);
        assert!(same.is_ok());
    }

    #[test]
    fn invalid_point_rejected() {
        let b = dani();
        let err = PointSpec::parse(&b, b.field(), &["1", "1", "0"], "bad").unwrap_err();
        assert!(matches!(err, EmbeddingError::InvalidPoint { .. }));
    }

    #[test]
    fn family_sampling_is_deterministic() {
        let b = dani();
        let fam = PointFamily::parse("curve", b.field(), &["c", "s"], &["c", "-(s^2 + 1)/c", "s"]).unwrap();
        let a = fam.sample(&b, 6, 11, 5).unwrap();
        let c = fam.sample(&b, 6, 11, 5).unwrap();
        assert_eq!(a.len(), 6);
        assert_eq!(a, c);
    }

    #[test]
    fn candidate_order() {
        let c = candidate_matrices(3, 2, 5, 1);
        assert_eq!(c.len(), 5);
        assert_eq!(c[0], vec![vec![1, 0], vec![0, 1], vec![0, 0]]);
        assert_eq!(c[2], vec![vec![0, 0], vec![1, 0], vec![0, 1]]);
    }
}
