//! Ideals, Gröbner bases, elimination, and finitely presented algebras
//! `B = K[x_1..x_m]/I`.

mod groebner;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use once_cell::sync::OnceCell;
use thiserror::Error;

use crate::field::{Field, FieldError, Value};
use crate::poly::terms;
use crate::poly::{MonomialOrder, Poly, PolyError, PolyRing};

pub use groebner::GroebnerBasis;

/// Default cap on the number of S-pair reductions per basis computation.
pub const DEFAULT_STEP_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdealError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("Gröbner basis computation exceeded {steps} pair reductions")]
    ResourceExceeded { steps: usize },
    #[error("relation `{relation}` does not map into the target ideal (residue `{residue}`)")]
    NotAHomomorphism { relation: String, residue: String },
    #[error("the relation ideal contains 1")]
    ImproperIdeal,
    #[error("point does not lie on the variety: relation `{relation}` evaluates to {value}")]
    InvalidPoint { relation: String, value: String },
}

impl From<FieldError> for IdealError {
    fn from(e: FieldError) -> Self {
        IdealError::Poly(PolyError::Field(e))
    }
}

struct IdealInner {
    ring: PolyRing,
    gens: Vec<Poly>,
    step_cap: usize,
    cache: Mutex<HashMap<MonomialOrder, Arc<OnceCell<Arc<GroebnerBasis>>>>>,
}

/// Ideal of a polynomial ring with a write-once Gröbner basis cache per
/// monomial order. Concurrent callers wait on a single computation.
#[derive(Clone)]
pub struct Ideal(Arc<IdealInner>);

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal{self}")
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.0.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", gens.join(", "))
    }
}

impl Ideal {
    pub fn new(ring: &PolyRing, gens: Vec<Poly>) -> Result<Self, IdealError> {
        for g in &gens {
            if g.ring() != ring {
                return Err(PolyError::RingMismatch(g.ring().to_string(), ring.to_string()).into());
            }
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Ideal(Arc::new(IdealInner {
            ring: ring.clone(),
            gens,
            step_cap: DEFAULT_STEP_CAP,
            cache: Mutex::new(HashMap::new()),
        })))
    }

    pub fn zero(ring: &PolyRing) -> Self {
        Ideal::new(ring, vec![]).unwrap()
    }

    pub fn parse(ring: &PolyRing, gens: &[&str]) -> Result<Self, IdealError> {
        let polys = gens.iter().map(|g| ring.parse(g)).collect::<Result<Vec<_>, _>>()?;
        Ideal::new(ring, polys)
    }

    pub fn with_step_cap(&self, cap: usize) -> Self {
        Ideal(Arc::new(IdealInner {
            ring: self.0.ring.clone(),
            gens: self.0.gens.clone(),
            step_cap: cap,
            cache: Mutex::new(HashMap::new()),
        }))
    }

    pub fn ring(&self) -> &PolyRing {
        &self.0.ring
    }

    pub fn field(&self) -> &Field {
        self.0.ring.field()
    }

    pub fn generators(&self) -> &[Poly] {
        &self.0.gens
    }

    pub fn step_cap(&self) -> usize {
        self.0.step_cap
    }

    fn slot(&self, order: &MonomialOrder) -> Arc<OnceCell<Arc<GroebnerBasis>>> {
        let mut cache = self.0.cache.lock().expect("cache lock");
        cache.entry(order.clone()).or_default().clone()
    }

    /// Reduced Gröbner basis under `order`, computed at most once.
    pub fn groebner(&self, order: &MonomialOrder) -> Result<Arc<GroebnerBasis>, IdealError> {
        let slot = self.slot(order);
        slot.get_or_try_init(|| {
            let k = self.field();
            let gens: Vec<Vec<terms::Term>> =
                self.0.gens.iter().map(|g| terms::resort(k, g.terms().to_vec(), order)).collect();
            let sorted = groebner::buchberger(k, gens, order, self.0.step_cap)?;
            Ok(Arc::new(GroebnerBasis::from_parts(order.clone(), self.0.ring.clone(), sorted)))
        })
        .cloned()
    }

    /// Installs a basis known to be a reduced Gröbner basis of this ideal.
    pub(crate) fn seed_groebner(&self, order: &MonomialOrder, sorted: Vec<Vec<terms::Term>>) {
        let slot = self.slot(order);
        let _ = slot.set(Arc::new(GroebnerBasis::from_parts(order.clone(), self.0.ring.clone(), sorted)));
    }

    pub fn normal_form(&self, f: &Poly) -> Result<Poly, IdealError> {
        self.normal_form_with(f, &MonomialOrder::grevlex())
    }

    pub fn normal_form_with(&self, f: &Poly, order: &MonomialOrder) -> Result<Poly, IdealError> {
        if f.ring() != self.ring() {
            return Err(PolyError::RingMismatch(f.ring().to_string(), self.ring().to_string()).into());
        }
        Ok(self.groebner(order)?.normal_form(f))
    }

    pub fn member(&self, f: &Poly) -> Result<bool, IdealError> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn is_proper(&self) -> Result<bool, IdealError> {
        Ok(!self.groebner(&MonomialOrder::grevlex())?.is_unit())
    }

    /// Every generator of `other` lies in `self`.
    pub fn contains(&self, other: &Ideal) -> Result<bool, IdealError> {
        for g in other.generators() {
            if !self.member(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `I ∩ K[keep]`, returned as an ideal of the polynomial ring on the
    /// kept variables (in the given order).
    pub fn eliminate(&self, keep: &[usize]) -> Result<Ideal, IdealError> {
        let n = self.ring().nvars();
        let drop: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
        let names: Vec<String> = keep.iter().map(|&i| self.ring().vars()[i].clone()).collect();
        let sub = PolyRing::from_names(self.field(), names)?;
        if drop.is_empty() {
            let gens = self.0.gens.iter().map(|g| g.embed_by_name(&sub)).collect::<Result<Vec<_>, _>>()?;
            return Ideal::new(&sub, gens);
        }
        let order = MonomialOrder::elimination(n, &drop);
        let gb = self.groebner(&order)?;
        let mut gens = Vec::new();
        for p in gb.polys() {
            if p.support_vars().iter().all(|v| keep.contains(v)) {
                gens.push(project(&p, keep, &sub));
            }
        }
        Ideal::new(&sub, gens)
    }

    pub fn eliminate_by_name(&self, keep: &[&str]) -> Result<Ideal, IdealError> {
        let idx = keep.iter().map(|v| self.ring().var_index(v)).collect::<Result<Vec<_>, _>>()?;
        self.eliminate(&idx)
    }

    /// The extension of this ideal to a ring with extra trailing variables.
    /// The grevlex basis carries over unchanged.
    pub fn extend_to(&self, target: &PolyRing) -> Result<Ideal, IdealError> {
        let m = self.ring().nvars();
        let map: Vec<usize> = (0..m).collect();
        if target.vars()[..m] != *self.ring().vars() {
            return Err(PolyError::RingMismatch(self.ring().to_string(), target.to_string()).into());
        }
        let gens = self.0.gens.iter().map(|g| g.embed(target, &map)).collect::<Result<Vec<_>, _>>()?;
        let ext = Ideal::new(target, gens)?.with_step_cap(self.step_cap());
        let gb = self.groebner(&MonomialOrder::grevlex())?;
        let lifted = gb
            .polys()
            .iter()
            .map(|p| p.embed(target, &map).map(|q| q.terms().to_vec()))
            .collect::<Result<Vec<_>, _>>()?;
        ext.seed_groebner(&MonomialOrder::grevlex(), lifted);
        Ok(ext)
    }

    /// The same generators over a larger field of the tower. A Gröbner basis
    /// stays one under field extension.
    pub fn base_change(&self, field: &Field) -> Result<Ideal, IdealError> {
        let ring = self.ring().with_field(field)?;
        let gens = self.0.gens.iter().map(|g| g.change_ring(&ring)).collect::<Result<Vec<_>, _>>()?;
        let ext = Ideal::new(&ring, gens)?.with_step_cap(self.step_cap());
        let gb = self.groebner(&MonomialOrder::grevlex())?;
        let lifted = gb
            .polys()
            .iter()
            .map(|p| p.change_ring(&ring).map(|q| q.terms().to_vec()))
            .collect::<Result<Vec<_>, _>>()?;
        ext.seed_groebner(&MonomialOrder::grevlex(), lifted);
        Ok(ext)
    }
}

fn project(p: &Poly, keep: &[usize], sub: &PolyRing) -> Poly {
    sub.from_terms(p.terms().iter().map(|(m, c)| (keep.iter().map(|&i| m[i]).collect(), c.clone())))
}

struct PresentationInner {
    ring: PolyRing,
    ideal: Ideal,
    domain_asserted: bool,
    asserted_dimension: Option<usize>,
    dimension: OnceCell<usize>,
}

/// A finitely presented algebra `K[x_1..x_m]/I` with `I` proper. Elements
/// are represented by polynomials; the canonical representative is the
/// grevlex normal form.
#[derive(Clone)]
pub struct RingPresentation(Arc<PresentationInner>);

impl fmt::Debug for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.ring, self.0.ideal)
    }
}

impl RingPresentation {
    pub fn new(ring: &PolyRing, relations: Vec<Poly>, domain_asserted: bool) -> Result<Self, IdealError> {
        Self::from_ideal(Ideal::new(ring, relations)?, domain_asserted)
    }

    pub fn from_ideal(ideal: Ideal, domain_asserted: bool) -> Result<Self, IdealError> {
        if !ideal.is_proper()? {
            return Err(IdealError::ImproperIdeal);
        }
        Ok(RingPresentation(Arc::new(PresentationInner {
            ring: ideal.ring().clone(),
            ideal,
            domain_asserted,
            asserted_dimension: None,
            dimension: OnceCell::new(),
        })))
    }

    /// Parses `relations` in `field[vars]`.
    pub fn parse(field: &Field, vars: &[&str], relations: &[&str]) -> Result<Self, IdealError> {
        let ring = PolyRing::new(field, vars)?;
        Self::from_ideal(Ideal::parse(&ring, relations)?, true)
    }

    /// Records a user-asserted dimension; [`Self::dimension`] still computes
    /// it and callers may compare.
    pub fn with_asserted_dimension(&self, dim: Option<usize>) -> Self {
        RingPresentation(Arc::new(PresentationInner {
            ring: self.0.ring.clone(),
            ideal: self.0.ideal.clone(),
            domain_asserted: self.0.domain_asserted,
            asserted_dimension: dim,
            dimension: self.0.dimension.clone(),
        }))
    }

    pub fn ring(&self) -> &PolyRing {
        &self.0.ring
    }

    pub fn field(&self) -> &Field {
        self.0.ring.field()
    }

    pub fn ideal(&self) -> &Ideal {
        &self.0.ideal
    }

    pub fn relations(&self) -> &[Poly] {
        self.0.ideal.generators()
    }

    pub fn nvars(&self) -> usize {
        self.0.ring.nvars()
    }

    pub fn domain_asserted(&self) -> bool {
        self.0.domain_asserted
    }

    pub fn asserted_dimension(&self) -> Option<usize> {
        self.0.asserted_dimension
    }

    pub fn reduce(&self, f: &Poly) -> Result<Poly, IdealError> {
        self.0.ideal.normal_form(f)
    }

    pub fn is_zero(&self, f: &Poly) -> Result<bool, IdealError> {
        Ok(self.reduce(f)?.is_zero())
    }

    pub fn parse_element(&self, text: &str) -> Result<Poly, IdealError> {
        let p = self.0.ring.parse(text)?;
        self.reduce(&p)
    }

    /// Krull dimension as the size of a largest variable subset `S` with
    /// `I ∩ K[S] = 0`, searched by elimination. For more than six variables
    /// the equivalent leading-monomial criterion is used instead.
    pub fn dimension(&self) -> Result<usize, IdealError> {
        self.0
            .dimension
            .get_or_try_init(|| {
                if self.nvars() > 6 {
                    return self.dimension_by_leading_monomials();
                }
                self.dimension_by_elimination()
            })
            .copied()
    }

    pub fn dimension_by_elimination(&self) -> Result<usize, IdealError> {
        let m = self.nvars();
        for size in (0..=m).rev() {
            for subset in subsets(m, size) {
                if self.0.ideal.eliminate(&subset)?.generators().is_empty() {
                    return Ok(size);
                }
            }
        }
        Ok(0)
    }

    /// Largest set of variables containing no leading monomial of the
    /// grevlex basis.
    pub fn dimension_by_leading_monomials(&self) -> Result<usize, IdealError> {
        let m = self.nvars();
        let lms = self.0.ideal.groebner(&MonomialOrder::grevlex())?.leading_monomials();
        for size in (0..=m).rev() {
            for subset in subsets(m, size) {
                let free = lms.iter().all(|lm| lm.iter().enumerate().any(|(i, &e)| e > 0 && !subset.contains(&i)));
                if free {
                    return Ok(size);
                }
            }
        }
        Ok(0)
    }

    /// `B[extra]` with the same relations.
    pub fn extend(&self, extra: &[String]) -> Result<RingPresentation, IdealError> {
        let ring = self.0.ring.extend(extra)?;
        let ideal = self.0.ideal.extend_to(&ring)?;
        Ok(RingPresentation(Arc::new(PresentationInner {
            ring,
            ideal,
            domain_asserted: self.0.domain_asserted,
            asserted_dimension: self.0.asserted_dimension.map(|d| d + extra.len()),
            dimension: OnceCell::new(),
        })))
    }

    /// `L ⊗ B` for a field `L` extending the coefficient field.
    pub fn base_change(&self, field: &Field) -> Result<RingPresentation, IdealError> {
        if field == self.field() {
            return Ok(self.clone());
        }
        let ideal = self.0.ideal.base_change(field)?;
        Ok(RingPresentation(Arc::new(PresentationInner {
            ring: ideal.ring().clone(),
            ideal,
            domain_asserted: self.0.domain_asserted,
            asserted_dimension: self.0.asserted_dimension,
            dimension: self.0.dimension.clone(),
        })))
    }

    /// Checks that every relation vanishes at `coords` (values in a field
    /// containing the coefficient field).
    pub fn check_point(&self, field: &Field, coords: &[Value]) -> Result<(), IdealError> {
        for r in self.relations() {
            let v = r.eval(field, coords)?;
            if !field.is_zero(&v) {
                return Err(IdealError::InvalidPoint { relation: r.to_string(), value: field.format(&v) });
            }
        }
        Ok(())
    }
}

pub(crate) fn subsets(m: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, size, &mut Vec::new(), &mut out);
    out
}

/// Kernel of the map `K[x]/I_source -> T/I_target` sending `x_i` to
/// `images[i]`, computed as `(I_source + I_target + (x_i - images_i)) ∩ L[x]`
/// where `L` is the target's coefficient field. The result lives in
/// `L[x]`; the induced map on `L ⊗ B` is injective iff the kernel is
/// contained in `I_source`.
pub fn algebra_map_kernel(
    source: &RingPresentation,
    images: &[Poly],
    target_relations: &Ideal,
) -> Result<Ideal, IdealError> {
    let target = target_relations.ring().clone();
    let field = target.field().clone();
    let m = source.nvars();
    if images.len() != m {
        return Err(PolyError::ArityMismatch { expected: m, got: images.len() }.into());
    }
    for img in images {
        if img.ring() != &target {
            return Err(PolyError::RingMismatch(img.ring().to_string(), target.to_string()).into());
        }
    }
    for r in source.relations() {
        let image = r.substitute(images)?;
        let residue = target_relations.normal_form(&image)?;
        if !residue.is_zero() {
            return Err(IdealError::NotAHomomorphism { relation: r.to_string(), residue: residue.to_string() });
        }
    }
    let src = source.base_change(&field)?;
    let tn = target.nvars();
    let mut names: Vec<String> = (0..tn).map(|j| format!("_t{j}")).collect();
    names.extend(source.ring().vars().iter().cloned());
    let joint = PolyRing::from_names(&field, names)?;
    let tmap: Vec<usize> = (0..tn).collect();
    let smap: Vec<usize> = (tn..tn + m).collect();
    let mut gens = Vec::new();
    for g in target_relations.generators() {
        gens.push(g.embed(&joint, &tmap)?);
    }
    for r in src.relations() {
        gens.push(r.embed(&joint, &smap)?);
    }
    for (i, img) in images.iter().enumerate() {
        gens.push(&joint.var(tn + i) - &img.embed(&joint, &tmap)?);
    }
    let ideal = Ideal::new(&joint, gens)?.with_step_cap(source.ideal().step_cap());
    let kernel = ideal.eliminate(&smap)?;
    // rename back onto the source ring over `field`
    let gens = kernel.generators().iter().map(|g| g.embed_by_name(src.ring())).collect::<Result<Vec<_>, _>>()?;
    Ideal::new(src.ring(), gens)
}

/// Whether the kernel returned by [`algebra_map_kernel`] lies in the
/// source relations (extended to the kernel's field).
pub fn kernel_is_trivial(source: &RingPresentation, kernel: &Ideal) -> Result<bool, IdealError> {
    let src = source.base_change(kernel.field())?;
    for g in kernel.generators() {
        if !src.is_zero(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn principal_and_linear_bases() {
        let r = PolyRing::new(&q(), &["x", "y"]).unwrap();
        let i = Ideal::parse(&r, &["x"]).unwrap();
        let gb = i.groebner(&MonomialOrder::lex()).unwrap();
        assert_eq!(gb.polys(), vec![r.parse("x").unwrap()]);
        let r3 = PolyRing::new(&q(), &["x", "y", "z"]).unwrap();
        let j = Ideal::parse(&r3, &["x*y + z^2 + 1"]).unwrap();
        assert_eq!(j.groebner(&MonomialOrder::grevlex()).unwrap().polys(), vec![r3.parse("x*y + z^2 + 1").unwrap()]);
    }

    #[test]
    fn s_polynomial_gives_y_cubed() {
        // hand run: S(x^2 + y^2, xy) = y*(x^2+y^2) - x*(xy) = y^3
        let r = PolyRing::new(&q(), &["x", "y"]).unwrap();
        let i = Ideal::parse(&r, &["x^2 + y^2", "x*y"]).unwrap();
        let gb = i.groebner(&MonomialOrder::grevlex()).unwrap().polys();
        assert!(gb.contains(&r.parse("y^3").unwrap()));
        assert!(i.member(&r.parse("y^3").unwrap()).unwrap());
        assert!(!i.member(&r.parse("y^2").unwrap()).unwrap());
    }

    #[test]
    fn normal_form_basics() {
        let r = PolyRing::new(&q(), &["x"]).unwrap();
        let i = Ideal::parse(&r, &["x"]).unwrap();
        assert!(i.normal_form(&r.parse("x^2").unwrap()).unwrap().is_zero());
        let r3 = PolyRing::new(&q(), &["x", "y", "z"]).unwrap();
        let j = Ideal::parse(&r3, &["x*y + z^2 + 1"]).unwrap();
        assert!(j.member(&r3.parse("x*y + z^2 + 1").unwrap()).unwrap());
        assert_eq!(j.normal_form(&r3.parse("x*y").unwrap()).unwrap(), r3.parse("-z^2 - 1").unwrap());
    }

    #[test]
    fn char_two_point_membership() {
        let k = Field::prime(2).unwrap().adjoin_indeterminate("t").unwrap();
        let r = PolyRing::new(&k, &["X", "Y"]).unwrap();
        for lambda in ["0", "1", "t"] {
            let m = format!("(X + {lambda})^2 + t");
            let i = Ideal::parse(&r, &["Y^2 + t*X^2 + X", &m]).unwrap();
            assert!(i.member(&r.parse(&m).unwrap()).unwrap());
            assert!(i.is_proper().unwrap());
        }
    }

    #[test]
    fn elimination_examples() {
        let r = PolyRing::new(&q(), &["x", "y"]).unwrap();
        let i = Ideal::parse(&r, &["y - x^2"]).unwrap();
        assert!(i.eliminate_by_name(&["y"]).unwrap().generators().is_empty());

        let r2 = PolyRing::new(&q(), &["X1", "u", "v"]).unwrap();
        let j = Ideal::parse(&r2, &["u - X1^2", "v - X1^3"]).unwrap();
        let e = j.eliminate_by_name(&["u", "v"]).unwrap();
        assert_eq!(e.generators().len(), 1);
        let g = e.generators()[0].monic();
        let expected = e.ring().parse("u^3 - v^2").unwrap();
        assert_eq!(g, expected.monic());

        let r3 = PolyRing::new(&q(), &["X1", "X2", "w"]).unwrap();
        let k = Ideal::parse(&r3, &["w - (1 + X2^2)"]).unwrap();
        assert!(k.eliminate_by_name(&["w"]).unwrap().generators().is_empty());
    }

    #[test]
    fn step_cap_is_enforced() {
        let r = PolyRing::new(&q(), &["x", "y", "z"]).unwrap();
        let i = Ideal::parse(&r, &["x^3 - y*z", "y^3 - x*z", "z^3 - x*y"]).unwrap().with_step_cap(1);
        assert_eq!(i.groebner(&MonomialOrder::lex()).unwrap_err(), IdealError::ResourceExceeded { steps: 1 });
    }

    #[test]
    fn kernel_examples() {
        let b = RingPresentation::parse(&q(), &["x", "y"], &[]).unwrap();
        let t = PolyRing::new(&q(), &["X"]).unwrap();
        let imgs = vec![t.var(0), t.var(0)];
        let ker = algebra_map_kernel(&b, &imgs, &Ideal::zero(&t)).unwrap();
        assert_eq!(ker.generators().len(), 1);
        assert_eq!(ker.generators()[0].monic(), b.ring().parse("x - y").unwrap());
        assert!(!kernel_is_trivial(&b, &ker).unwrap());

        let d = RingPresentation::parse(&q(), &["x", "y", "z"], &["x*y + z^2 + 1"]).unwrap();
        let id: Vec<Poly> = (0..3).map(|i| d.ring().var(i)).collect();
        let ker = algebra_map_kernel(&d, &id, d.ideal()).unwrap();
        assert!(kernel_is_trivial(&d, &ker).unwrap());
        assert!(ker.contains(d.ideal()).unwrap());

        let bad = vec![d.ring().var(0), d.ring().var(0), d.ring().var(2)];
        assert!(matches!(algebra_map_kernel(&d, &bad, d.ideal()), Err(IdealError::NotAHomomorphism { .. })));
    }

    #[test]
    fn danielewski_specialization_is_injective() {
        let d = RingPresentation::parse(&q(), &["x", "y", "z"], &["x*y + z^2 + 1"]).unwrap();
        let t = PolyRing::new(&q(), &["X1", "X2"]).unwrap();
        let imgs = vec![
            t.parse("1 + X2^2").unwrap(),
            t.parse("-1 + 2*X1*X2 - X1^2 - X1^2*X2^2").unwrap(),
            t.parse("X1 - X2 + X1*X2^2").unwrap(),
        ];
        let ker = algebra_map_kernel(&d, &imgs, &Ideal::zero(&t)).unwrap();
        assert!(kernel_is_trivial(&d, &ker).unwrap());
    }

    #[test]
    fn dimension_methods_agree() {
        let d = RingPresentation::parse(&q(), &["x", "y", "z"], &["x*y + z^2 + 1"]).unwrap();
        assert_eq!(d.dimension().unwrap(), 2);
        assert_eq!(d.dimension_by_leading_monomials().unwrap(), 2);
        let c = RingPresentation::parse(&q(), &["x", "y", "z"], &["y - x^2", "z - x^3"]).unwrap();
        assert_eq!(c.dimension().unwrap(), 1);
        assert_eq!(c.dimension_by_leading_monomials().unwrap(), 1);
        assert!(matches!(RingPresentation::parse(&q(), &["x"], &["x", "x - 1"]), Err(IdealError::ImproperIdeal)));
    }
}
