//! Derivations of a presented algebra `B = K[x]/I`, given by their values
//! on the generators.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::field::{Field, Value};
use crate::ideal::{IdealError, RingPresentation};
use crate::poly::{Poly, PolyError};

/// Default iteration bound for degree and exponential computations.
pub const DEFAULT_DEGREE_BOUND: u32 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DerivationError {
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error("derivation does not descend to the quotient: D({relation}) reduces to {residue}")]
    NotWellDefined { relation: String, residue: String },
    #[error("no D^n(b) = 0 found for n <= {bound}")]
    DegBoundExceeded { bound: u32 },
    #[error("the zero element has no degree")]
    ZeroElement,
    #[error("no local slice among elements of degree <= {0}")]
    NotFound(u32),
    #[error("operation requires characteristic zero, field has characteristic {0}")]
    PositiveCharacteristic(u64),
    #[error("derivation `{0}` is neither certified nor asserted locally nilpotent")]
    NotLocallyNilpotent(String),
    #[error("expected {expected} generator values, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("`{name}` is already a variable of the ring")]
    NameClash { name: String },
}

impl From<PolyError> for DerivationError {
    fn from(e: PolyError) -> Self {
        DerivationError::Ideal(IdealError::Poly(e))
    }
}

/// How local nilpotency is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nilpotency {
    /// `D^n(x_i) = 0` for every generator with `n <= bound`.
    Certified(u32),
    /// Declared by the user, not checked.
    Asserted,
    Unknown,
}

impl Nilpotency {
    pub fn is_lnd(&self) -> bool {
        !matches!(self, Nilpotency::Unknown)
    }
}

impl fmt::Display for Nilpotency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nilpotency::Certified(b) => write!(f, "certified({b})"),
            Nilpotency::Asserted => write!(f, "asserted"),
            Nilpotency::Unknown => write!(f, "unknown"),
        }
    }
}

pub(crate) fn require_char_zero(field: &Field) -> Result<(), DerivationError> {
    match field.characteristic() {
        0 => Ok(()),
        p => Err(DerivationError::PositiveCharacteristic(p)),
    }
}

/// `1/n!` in a field of characteristic zero.
pub(crate) fn inv_factorial(k: &Field, n: u32) -> Value {
    let f: BigInt = (1..=n as u64).map(BigInt::from).product();
    k.inv(&k.from_bigint(&f)).expect("characteristic zero")
}

#[derive(Clone)]
pub struct Derivation {
    name: String,
    ring: RingPresentation,
    values: Vec<Poly>,
    status: Nilpotency,
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Derivation({}: ", self.name)?;
        for (v, p) in self.ring.ring().vars().iter().zip(&self.values) {
            write!(f, "{v} -> {p}; ")?;
        }
        write!(f, "{})", self.status)
    }
}

impl Derivation {
    /// Validates that the generator values define a derivation of `B`.
    pub fn new(name: &str, ring: &RingPresentation, values: Vec<Poly>) -> Result<Self, DerivationError> {
        require_char_zero(ring.field())?;
        if values.len() != ring.nvars() {
            return Err(DerivationError::ArityMismatch { expected: ring.nvars(), got: values.len() });
        }
        let values = values
            .iter()
            .map(|v| {
                let v = v.change_ring(ring.ring())?;
                Ok(ring.reduce(&v)?)
            })
            .collect::<Result<Vec<_>, DerivationError>>()?;
        let d = Derivation { name: name.to_string(), ring: ring.clone(), values, status: Nilpotency::Unknown };
        for r in ring.relations() {
            let image = d.apply_raw(r);
            let residue = ring.reduce(&image)?;
            if !residue.is_zero() {
                return Err(DerivationError::NotWellDefined { relation: r.to_string(), residue: residue.to_string() });
            }
        }
        Ok(d)
    }

    /// Parses generator values given in variable order.
    pub fn parse(name: &str, ring: &RingPresentation, values: &[&str]) -> Result<Self, DerivationError> {
        let polys = values.iter().map(|v| ring.ring().parse(v)).collect::<Result<Vec<_>, _>>()?;
        Derivation::new(name, ring, polys)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ring(&self) -> &RingPresentation {
        &self.ring
    }

    pub fn values(&self) -> &[Poly] {
        &self.values
    }

    pub fn status(&self) -> Nilpotency {
        self.status
    }

    pub fn with_status(mut self, status: Nilpotency) -> Self {
        self.status = status;
        self
    }

    pub fn asserted(self) -> Self {
        self.with_status(Nilpotency::Asserted)
    }

    fn apply_raw(&self, b: &Poly) -> Poly {
        let mut acc = b.ring().zero();
        for (i, v) in self.values.iter().enumerate() {
            let p = b.partial(i);
            if !p.is_zero() && !v.is_zero() {
                acc = &acc + &(&p * v);
            }
        }
        acc
    }

    /// `D(b)` in normal form.
    pub fn apply(&self, b: &Poly) -> Result<Poly, DerivationError> {
        Ok(self.ring.reduce(&self.apply_raw(b))?)
    }

    /// `D^n(b)`, reducing after every step.
    pub fn apply_power(&self, b: &Poly, n: u32) -> Result<Poly, DerivationError> {
        let mut cur = self.ring.reduce(b)?;
        for _ in 0..n {
            if cur.is_zero() {
                break;
            }
            cur = self.apply(&cur)?;
        }
        Ok(cur)
    }

    /// `[b, D(b), ..., D^d(b)]` with `D^{d+1}(b) = 0`, `b` reduced.
    pub fn orbit(&self, b: &Poly, bound: u32) -> Result<Vec<Poly>, DerivationError> {
        let mut cur = self.ring.reduce(b)?;
        let mut out = Vec::new();
        while !cur.is_zero() {
            if out.len() as u32 > bound {
                return Err(DerivationError::DegBoundExceeded { bound });
            }
            let next = self.apply(&cur)?;
            out.push(cur);
            cur = next;
        }
        Ok(out)
    }

    /// Greatest `n` with `D^n(b) != 0`.
    pub fn degree(&self, b: &Poly, bound: u32) -> Result<u32, DerivationError> {
        let orbit = self.orbit(b, bound)?;
        if orbit.is_empty() {
            return Err(DerivationError::ZeroElement);
        }
        Ok(orbit.len() as u32 - 1)
    }

    /// Certifies local nilpotency when every generator is killed by `D^n`
    /// for some `n <= bound`. Asserted status is kept if the check fails.
    pub fn certify_lnd(&self, bound: u32) -> Result<Nilpotency, DerivationError> {
        for i in 0..self.ring.nvars() {
            let mut cur = self.ring.ring().var(i);
            let mut n = 0;
            while !self.ring.is_zero(&cur)? {
                if n == bound {
                    return Ok(Nilpotency::Unknown);
                }
                cur = self.apply(&cur)?;
                n += 1;
            }
        }
        Ok(Nilpotency::Certified(bound))
    }

    /// Runs [`Self::certify_lnd`] and records the outcome unless the
    /// derivation was asserted and the check is inconclusive.
    pub fn certified(self, bound: u32) -> Result<Self, DerivationError> {
        let status = self.certify_lnd(bound)?;
        Ok(match (status, self.status) {
            (Nilpotency::Unknown, Nilpotency::Asserted) => self,
            (s, _) => self.with_status(s),
        })
    }

    fn require_lnd(&self) -> Result<(), DerivationError> {
        if self.status.is_lnd() {
            Ok(())
        } else {
            Err(DerivationError::NotLocallyNilpotent(self.name.clone()))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// First `s` with `D(s) != 0` and `D^2(s) = 0`: generators first, then
    /// monomials by increasing total degree in grevlex order.
    pub fn find_local_slice(&self, search_degree: u32) -> Result<LocalSlice, DerivationError> {
        self.require_lnd()?;
        let ring = self.ring.ring();
        let mut candidates: Vec<Poly> = (0..ring.nvars()).map(|i| ring.var(i)).collect();
        for deg in 2..=search_degree {
            let mut monos = monomials_of_degree(ring.nvars(), deg);
            monos.sort_by(|a, b| crate::poly::MonomialOrder::grevlex().cmp(b, a));
            candidates.extend(monos.into_iter().map(|m| ring.monomial(m, ring.field().one())));
        }
        for s in candidates {
            let s = self.ring.reduce(&s)?;
            let a = self.apply(&s)?;
            if a.is_zero() {
                continue;
            }
            if self.apply(&a)?.is_zero() {
                return Ok(LocalSlice { s, a });
            }
        }
        Err(DerivationError::NotFound(search_degree))
    }

    /// The projection of `B_a` onto `(ker D)_a` that sends `s` to zero.
    pub fn dixmier_project(&self, slice: &LocalSlice, b: &Poly, bound: u32) -> Result<Localized, DerivationError> {
        self.require_lnd()?;
        let k = self.ring.field().clone();
        let orbit = self.orbit(b, bound)?;
        if orbit.is_empty() {
            return Ok(Localized { num: self.ring.ring().zero(), power: 0 });
        }
        let d = orbit.len() as u32 - 1;
        let mut num = self.ring.ring().zero();
        let mut s_pow = self.ring.ring().one();
        for (n, dn) in orbit.iter().enumerate() {
            let n = n as u32;
            let mut c = inv_factorial(&k, n);
            if n % 2 == 1 {
                c = k.neg(&c);
            }
            let term = &(&(dn * &s_pow) * &slice.a.pow(d - n)).scale(&c);
            num = self.ring.reduce(&(&num + term))?;
            s_pow = self.ring.reduce(&(&s_pow * &slice.s))?;
        }
        Ok(Localized { num, power: d })
    }

    /// Coefficients `c_j in (ker D)_a` with `b = sum_j c_j s^j`.
    pub fn slice_expansion(&self, slice: &LocalSlice, b: &Poly, bound: u32) -> Result<Vec<Localized>, DerivationError> {
        let k = self.ring.field().clone();
        let orbit = self.orbit(b, bound)?;
        let mut out = Vec::with_capacity(orbit.len());
        for (j, dj) in orbit.iter().enumerate() {
            let p = self.dixmier_project(slice, dj, bound)?;
            out.push(Localized { num: p.num.scale(&inv_factorial(&k, j as u32)), power: p.power + j as u32 });
        }
        Ok(out)
    }

    /// `exp(lambda D)` on generators.
    pub fn exp_scalar(&self, lambda: &Value, bound: u32) -> Result<ExpMap, DerivationError> {
        self.require_lnd()?;
        let k = self.ring.field().clone();
        let ring = self.ring.ring().clone();
        let mut images = Vec::with_capacity(ring.nvars());
        for i in 0..ring.nvars() {
            let orbit = self.orbit(&ring.var(i), bound)?;
            let mut acc = ring.zero();
            let mut lp = k.one();
            for (n, dn) in orbit.iter().enumerate() {
                acc = &acc + &dn.scale(&k.mul(&lp, &inv_factorial(&k, n as u32)));
                lp = k.mul(&lp, lambda);
            }
            images.push(self.ring.reduce(&acc)?);
        }
        ExpMap::new(&self.ring, &self.ring, images)
    }

    /// `exp(T D)` with a formal parameter `T`, as a map `B -> B[T]`.
    pub fn exp_formal(&self, param: &str, bound: u32) -> Result<ExpMap, DerivationError> {
        self.require_lnd()?;
        if self.ring.ring().var_index(param).is_ok() {
            return Err(DerivationError::NameClash { name: param.to_string() });
        }
        let k = self.ring.field().clone();
        let target = self.ring.extend(&[param.to_string()])?;
        let tr = target.ring().clone();
        let t = tr.var(tr.nvars() - 1);
        let map: Vec<usize> = (0..self.ring.nvars()).collect();
        let mut images = Vec::new();
        for i in 0..self.ring.nvars() {
            let orbit = self.orbit(&self.ring.ring().var(i), bound)?;
            let mut acc = tr.zero();
            for (n, dn) in orbit.iter().enumerate() {
                let lifted = dn.embed(&tr, &map)?;
                acc = &acc + &(&lifted * &t.pow(n as u32)).scale(&inv_factorial(&k, n as u32));
            }
            images.push(target.reduce(&acc)?);
        }
        ExpMap::new(&self.ring, &target, images)
    }

    /// `b` is fixed by `exp(T D)` identically in `T`.
    pub fn fixed_by_exp(&self, b: &Poly, bound: u32) -> Result<bool, DerivationError> {
        let e = self.exp_formal(&fresh_name(self.ring.ring().vars(), "T"), bound)?;
        let image = e.apply(b)?;
        let lifted = e.target().reduce(&b.embed(e.target().ring(), &(0..self.ring.nvars()).collect::<Vec<_>>())?)?;
        Ok(image == lifted)
    }

    /// The same values over `L ⊗ B` for a field `L` extending the base.
    pub fn base_change(&self, field: &Field) -> Result<Derivation, DerivationError> {
        require_char_zero(field)?;
        let ring = self.ring.base_change(field)?;
        let values =
            self.values.iter().map(|v| v.change_ring(ring.ring())).collect::<Result<Vec<_>, _>>()?;
        Ok(Derivation::new(&self.name, &ring, values)?.with_status(self.status))
    }
}

pub(crate) fn fresh_name(taken: &[String], base: &str) -> String {
    let mut name = base.to_string();
    let mut i = 0;
    while taken.contains(&name) {
        i += 1;
        name = format!("{base}{i}");
    }
    name
}

fn monomials_of_degree(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for e in (0..=d).rev() {
        for mut rest in monomials_of_degree(n - 1, d - e) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

/// Every monomial of total degree at most `d`, by increasing degree.
pub(crate) fn monomials_up_to(n: usize, d: u32) -> Vec<Vec<u32>> {
    let ord = crate::poly::MonomialOrder::grevlex();
    let mut out = Vec::new();
    for deg in 0..=d {
        let mut m = monomials_of_degree(n, deg);
        m.sort_by(|a, b| ord.cmp(b, a));
        out.extend(m);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSlice {
    pub s: Poly,
    /// `D(s)`, a nonzero kernel element.
    pub a: Poly,
}

/// `num / a^power` in the localization `B_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Localized {
    pub num: Poly,
    pub power: u32,
}

impl Localized {
    /// Equality in `B_a` by cross-multiplication, valid in a domain.
    pub fn equals(&self, other: &Localized, a: &Poly, ring: &RingPresentation) -> Result<bool, IdealError> {
        let (p, q) = (self.power, other.power);
        let lhs = &self.num * &a.pow(q.saturating_sub(p));
        let rhs = &other.num * &a.pow(p.saturating_sub(q));
        ring.is_zero(&(&lhs - &rhs))
    }
}

/// An algebra map `B -> T` given on generators, with `T` a presented
/// algebra whose variables start with those of `B`'s when it is an
/// extension of `B`.
#[derive(Clone, Debug)]
pub struct ExpMap {
    source: RingPresentation,
    target: RingPresentation,
    images: Vec<Poly>,
}

impl ExpMap {
    /// Checks that every relation of the source maps to zero.
    pub fn new(source: &RingPresentation, target: &RingPresentation, images: Vec<Poly>) -> Result<Self, DerivationError> {
        let map = ExpMap { source: source.clone(), target: target.clone(), images };
        for r in source.relations() {
            let residue = map.apply(r)?;
            if !residue.is_zero() {
                return Err(IdealError::NotAHomomorphism { relation: r.to_string(), residue: residue.to_string() }.into());
            }
        }
        Ok(map)
    }

    pub fn source(&self) -> &RingPresentation {
        &self.source
    }

    pub fn target(&self) -> &RingPresentation {
        &self.target
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    pub fn apply(&self, b: &Poly) -> Result<Poly, DerivationError> {
        Ok(self.target.reduce(&b.substitute(&self.images)?)?)
    }

    /// `self ∘ first`; both must be endomorphisms of the same algebra.
    pub fn after(&self, first: &ExpMap) -> Result<ExpMap, DerivationError> {
        let images = first.images.iter().map(|p| self.apply(p)).collect::<Result<Vec<_>, _>>()?;
        ExpMap::new(&first.source, &self.target, images)
    }

    pub fn is_identity(&self) -> bool {
        let r = self.source.ring();
        self.source.ring() == self.target.ring() && self.images.iter().enumerate().all(|(i, p)| *p == r.var(i))
    }
}
