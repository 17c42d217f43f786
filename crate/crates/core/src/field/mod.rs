//! Exact coefficient fields built as towers.
//!
//! A [`Field`] is a chain of layers starting at `Q` or `F_p`. Each further
//! layer is either a rational function field `K(t)` or a simple algebraic
//! extension `K[Z]/(m)` by a monic polynomial `m`. Every element has a
//! canonical representative, so equality is structural.

mod squarefree;
pub(crate) mod univariate;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use univariate as up;

pub use squarefree::squarefree_decomposition;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("name `{0}` is already used in the field tower")]
    NameCollision(String),
    #[error("minimal polynomial must be monic")]
    NonMonic,
    #[error("minimal polynomial must have degree at least 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("minimal polynomial for `{name}` has the root {root} in the base field")]
    HasRoot { name: String, root: String },
    #[error("minimal polynomial for `{0}` is reducible (a non-invertible element was found)")]
    ReducibleMinpoly(String),
    #[error("operation requires a field of the form F_p(t), got {0}")]
    UnsupportedField(String),
}

/// Base of a field tower.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BaseField {
    Rationals,
    Prime(u64),
}

/// Canonical representative of a field element. The meaning of a value
/// depends on the [`Field`] it is interpreted in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Rational(BigRational),
    Modular(u64),
    /// Numerator and monic denominator over the parent field, coprime,
    /// coefficients low to high.
    Fraction(Vec<Value>, Vec<Value>),
    /// Polynomial in the adjoined generator of degree below the minimal
    /// polynomial, coefficients low to high.
    Algebraic(Vec<Value>),
}

#[derive(Debug, PartialEq, Eq, Hash)]
enum Layer {
    Base(BaseField),
    RationalFunctions { parent: Field, var: String },
    Algebraic { parent: Field, name: String, minpoly: Vec<Value> },
}

/// Handle to a field tower. Cheap to clone; shared immutably.
#[derive(Clone)]
pub struct Field(Arc<Layer>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({self})")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Layer::Base(BaseField::Rationals) => write!(f, "Q"),
            Layer::Base(BaseField::Prime(p)) => write!(f, "F{p}"),
            Layer::RationalFunctions { parent, var } => write!(f, "{parent}({var})"),
            Layer::Algebraic { parent, name, .. } => write!(f, "{parent}[{name}]"),
        }
    }
}

/// Flat description of a tower: base, indeterminates, extensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDesc {
    pub base: BaseField,
    pub ratfunc_vars: Vec<String>,
    /// `(name, minimal polynomial in Z)`, in tower order.
    pub extensions: Vec<(String, String)>,
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

/// Square root in `F_p` by Tonelli-Shanks, `None` for non-residues.
pub(crate) fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 || p == 2 {
        return Some(a);
    }
    if mod_pow(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while mod_pow(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let (mut m, mut c, mut t, mut r) = (s, mod_pow(z, q, p), mod_pow(a, q, p), mod_pow(a, q.div_ceil(2), p));
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = mulm(tt, tt);
            i += 1;
        }
        let b = mod_pow(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mulm(b, b);
        t = mulm(t, c);
        r = mulm(r, b);
    }
    Some(r)
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(Layer::Base(BaseField::Rationals)))
    }

    pub fn prime(p: u64) -> Result<Field, FieldError> {
        if !is_prime(p) || p >= (1u64 << 62) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Field(Arc::new(Layer::Base(BaseField::Prime(p)))))
    }

    pub fn from_base(base: &BaseField) -> Result<Field, FieldError> {
        match base {
            BaseField::Rationals => Ok(Field::rationals()),
            BaseField::Prime(p) => Field::prime(*p),
        }
    }

    /// `K(t)` for a fresh indeterminate `t`.
    pub fn adjoin_indeterminate(&self, var: &str) -> Result<Field, FieldError> {
        if self.constant_names().iter().any(|n| n == var) {
            return Err(FieldError::NameCollision(var.to_string()));
        }
        Ok(Field(Arc::new(Layer::RationalFunctions { parent: self.clone(), var: var.to_string() })))
    }

    /// `K[Z]/(minpoly)` with the root scan at the default height bound.
    pub fn extend(&self, name: &str, minpoly: Vec<Value>) -> Result<Field, FieldError> {
        self.extend_with_bound(name, minpoly, 3)
    }

    /// Appends a simple algebraic extension. `minpoly` holds coefficients
    /// over `self`, low to high. Irreducibility is only probed by looking for
    /// roots among small tower elements; anything beyond that is trusted.
    pub fn extend_with_bound(&self, name: &str, minpoly: Vec<Value>, root_bound: u32) -> Result<Field, FieldError> {
        if self.constant_names().iter().any(|n| n == name) {
            return Err(FieldError::NameCollision(name.to_string()));
        }
        let minpoly = up::trim(self, minpoly);
        if minpoly.len() < 3 {
            return Err(FieldError::DegreeTooSmall(minpoly.len().saturating_sub(1)));
        }
        if !self.is_one(minpoly.last().unwrap()) {
            return Err(FieldError::NonMonic);
        }
        for cand in self.small_elements(root_bound) {
            if self.is_zero(&up::eval(self, &minpoly, &cand)) {
                return Err(FieldError::HasRoot { name: name.to_string(), root: self.format(&cand) });
            }
        }
        Ok(Field(Arc::new(Layer::Algebraic { parent: self.clone(), name: name.to_string(), minpoly })))
    }

    pub fn parent(&self) -> Option<&Field> {
        match &*self.0 {
            Layer::Base(_) => None,
            Layer::RationalFunctions { parent, .. } | Layer::Algebraic { parent, .. } => Some(parent),
        }
    }

    pub fn base(&self) -> BaseField {
        match &*self.0 {
            Layer::Base(b) => b.clone(),
            _ => self.parent().unwrap().base(),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self.base() {
            BaseField::Rationals => 0,
            BaseField::Prime(p) => p,
        }
    }

    /// Names of all indeterminates and extension generators, bottom up.
    pub fn constant_names(&self) -> Vec<String> {
        let mut names = self.parent().map(|p| p.constant_names()).unwrap_or_default();
        match &*self.0 {
            Layer::Base(_) => {}
            Layer::RationalFunctions { var, .. } => names.push(var.clone()),
            Layer::Algebraic { name, .. } => names.push(name.clone()),
        }
        names
    }

    pub fn desc(&self) -> FieldDesc {
        let mut desc = match self.parent() {
            Some(p) => p.desc(),
            None => FieldDesc { base: self.base(), ratfunc_vars: vec![], extensions: vec![] },
        };
        match &*self.0 {
            Layer::Base(_) => {}
            Layer::RationalFunctions { var, .. } => desc.ratfunc_vars.push(var.clone()),
            Layer::Algebraic { parent, name, minpoly } => {
                desc.extensions.push((name.clone(), up::format(parent, minpoly, "Z")))
            }
        }
        desc
    }

    /// Product of the degrees of all algebraic layers.
    pub fn algebraic_degree(&self) -> usize {
        let below = self.parent().map(|p| p.algebraic_degree()).unwrap_or(1);
        match &*self.0 {
            Layer::Algebraic { minpoly, .. } => below * (minpoly.len() - 1),
            _ => below,
        }
    }

    /// True when `sub` is this field or a layer below it.
    pub fn contains_subfield(&self, sub: &Field) -> bool {
        self == sub || self.parent().is_some_and(|p| p.contains_subfield(sub))
    }

    pub fn zero(&self) -> Value {
        match &*self.0 {
            Layer::Base(BaseField::Rationals) => Value::Rational(BigRational::zero()),
            Layer::Base(BaseField::Prime(_)) => Value::Modular(0),
            Layer::RationalFunctions { parent, .. } => Value::Fraction(vec![], vec![parent.one()]),
            Layer::Algebraic { .. } => Value::Algebraic(vec![]),
        }
    }

    pub fn one(&self) -> Value {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Value {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Value {
        match &*self.0 {
            Layer::Base(BaseField::Rationals) => Value::Rational(BigRational::from_integer(n.clone())),
            Layer::Base(BaseField::Prime(p)) => {
                let r = n.mod_floor(&BigInt::from(*p));
                Value::Modular(r.to_u64().unwrap())
            }
            _ => self.lift(self.parent().unwrap().from_bigint(n)),
        }
    }

    /// Image of a rational number; fails in characteristic `p` when the
    /// denominator vanishes.
    pub fn from_rational(&self, q: &BigRational) -> Result<Value, FieldError> {
        let n = self.from_bigint(q.numer());
        let d = self.from_bigint(q.denom());
        self.div(&n, &d)
    }

    /// Embeds an element of the immediate parent layer.
    fn lift(&self, v: Value) -> Value {
        match &*self.0 {
            Layer::Base(_) => v,
            Layer::RationalFunctions { parent, .. } => {
                Value::Fraction(up::trim(parent, vec![v]), vec![parent.one()])
            }
            Layer::Algebraic { parent, .. } => Value::Algebraic(up::trim(parent, vec![v])),
        }
    }

    /// Maps an element of a subfield of the tower into this field.
    pub fn coerce(&self, from: &Field, v: &Value) -> Result<Value, FieldError> {
        if self == from {
            return Ok(v.clone());
        }
        match self.parent() {
            Some(p) if self.contains_subfield(from) => Ok(self.lift(p.coerce(from, v)?)),
            _ => Err(FieldError::FieldMismatch(from.to_string(), self.to_string())),
        }
    }

    /// Value of a named indeterminate or generator anywhere in the tower.
    pub fn constant(&self, name: &str) -> Option<Value> {
        match &*self.0 {
            Layer::Base(_) => None,
            Layer::RationalFunctions { parent, var } => {
                if var == name {
                    Some(Value::Fraction(vec![parent.zero(), parent.one()], vec![parent.one()]))
                } else {
                    parent.constant(name).map(|v| self.lift(v))
                }
            }
            Layer::Algebraic { parent, name: gen, .. } => {
                if gen == name {
                    Some(Value::Algebraic(vec![parent.zero(), parent.one()]))
                } else {
                    parent.constant(name).map(|v| self.lift(v))
                }
            }
        }
    }

    pub fn is_zero(&self, v: &Value) -> bool {
        match v {
            Value::Rational(q) => q.is_zero(),
            Value::Modular(a) => *a == 0,
            Value::Fraction(n, _) => n.is_empty(),
            Value::Algebraic(c) => c.is_empty(),
        }
    }

    pub fn is_one(&self, v: &Value) -> bool {
        *v == self.one()
    }

    fn prime_modulus(&self) -> u64 {
        match &*self.0 {
            Layer::Base(BaseField::Prime(p)) => *p,
            _ => unreachable!("modular value outside a prime field"),
        }
    }

    pub fn add(&self, a: &Value, b: &Value) -> Value {
        match (&*self.0, a, b) {
            (Layer::Base(_), Value::Rational(x), Value::Rational(y)) => Value::Rational(x + y),
            (Layer::Base(_), Value::Modular(x), Value::Modular(y)) => {
                let p = self.prime_modulus();
                Value::Modular(((*x as u128 + *y as u128) % p as u128) as u64)
            }
            (Layer::RationalFunctions { parent, .. }, Value::Fraction(n1, d1), Value::Fraction(n2, d2)) => {
                if d1 == d2 {
                    return self.normalize_fraction(up::add(parent, n1, n2), d1.clone());
                }
                let n = up::add(parent, &up::mul(parent, n1, d2), &up::mul(parent, n2, d1));
                self.normalize_fraction(n, up::mul(parent, d1, d2))
            }
            (Layer::Algebraic { parent, .. }, Value::Algebraic(x), Value::Algebraic(y)) => {
                Value::Algebraic(up::add(parent, x, y))
            }
            _ => panic!("value does not belong to field {self}"),
        }
    }

    pub fn neg(&self, a: &Value) -> Value {
        match (&*self.0, a) {
            (Layer::Base(_), Value::Rational(x)) => Value::Rational(-x),
            (Layer::Base(_), Value::Modular(x)) => {
                let p = self.prime_modulus();
                Value::Modular(if *x == 0 { 0 } else { p - x })
            }
            (Layer::RationalFunctions { parent, .. }, Value::Fraction(n, d)) => {
                Value::Fraction(up::neg(parent, n), d.clone())
            }
            (Layer::Algebraic { parent, .. }, Value::Algebraic(x)) => Value::Algebraic(up::neg(parent, x)),
            _ => panic!("value does not belong to field {self}"),
        }
    }

    pub fn sub(&self, a: &Value, b: &Value) -> Value {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Value, b: &Value) -> Value {
        match (&*self.0, a, b) {
            (Layer::Base(_), Value::Rational(x), Value::Rational(y)) => Value::Rational(x * y),
            (Layer::Base(_), Value::Modular(x), Value::Modular(y)) => {
                let p = self.prime_modulus();
                Value::Modular(((*x as u128 * *y as u128) % p as u128) as u64)
            }
            (Layer::RationalFunctions { parent, .. }, Value::Fraction(n1, d1), Value::Fraction(n2, d2)) => {
                if n1.is_empty() || n2.is_empty() {
                    return self.zero();
                }
                self.normalize_fraction(up::mul(parent, n1, n2), up::mul(parent, d1, d2))
            }
            (Layer::Algebraic { parent, minpoly, .. }, Value::Algebraic(x), Value::Algebraic(y)) => {
                let prod = up::mul(parent, x, y);
                Value::Algebraic(up::rem(parent, &prod, minpoly))
            }
            _ => panic!("value does not belong to field {self}"),
        }
    }

    pub fn inv(&self, a: &Value) -> Result<Value, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match (&*self.0, a) {
            (Layer::Base(_), Value::Rational(x)) => Value::Rational(x.recip()),
            (Layer::Base(_), Value::Modular(x)) => {
                let p = self.prime_modulus();
                Value::Modular(mod_pow(*x, p - 2, p))
            }
            (Layer::RationalFunctions { .. }, Value::Fraction(n, d)) => self.normalize_fraction(d.clone(), n.clone()),
            (Layer::Algebraic { parent, minpoly, name }, Value::Algebraic(x)) => {
                let (g, s, _) = up::ext_gcd(parent, x, minpoly);
                if g.len() != 1 {
                    return Err(FieldError::ReducibleMinpoly(name.clone()));
                }
                let ginv = parent.inv(&g[0])?;
                Value::Algebraic(up::rem(parent, &up::scale(parent, &s, &ginv), minpoly))
            }
            _ => panic!("value does not belong to field {self}"),
        })
    }

    pub fn div(&self, a: &Value, b: &Value) -> Result<Value, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Value, mut e: u64) -> Value {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn normalize_fraction(&self, n: Vec<Value>, d: Vec<Value>) -> Value {
        let parent = self.parent().unwrap();
        if n.is_empty() {
            return self.zero();
        }
        assert!(!d.is_empty(), "zero denominator");
        let (n, d) = if d.len() == 1 {
            (n, d)
        } else {
            let g = up::gcd(parent, &n, &d);
            if g.len() > 1 {
                (up::div_exact(parent, &n, &g), up::div_exact(parent, &d, &g))
            } else {
                (n, d)
            }
        };
        let lc = d.last().unwrap().clone();
        if parent.is_one(&lc) {
            return Value::Fraction(n, d);
        }
        let inv = parent.inv(&lc).expect("nonzero leading coefficient");
        Value::Fraction(up::scale(parent, &n, &inv), up::scale(parent, &d, &inv))
    }

    /// `k * 1` for a machine integer, used for factorials and derivatives.
    pub fn scale_int(&self, a: &Value, k: i64) -> Value {
        self.mul(a, &self.from_int(k))
    }

    /// Whether printing `v` as a factor needs parentheses.
    pub(crate) fn needs_parens(&self, v: &Value) -> bool {
        match v {
            Value::Rational(_) | Value::Modular(_) => false,
            Value::Fraction(n, d) => {
                let parent = self.parent().unwrap();
                if d.len() > 1 {
                    return true;
                }
                n.iter().filter(|c| !parent.is_zero(c)).count() > 1
                    || n.last().is_some_and(|c| parent.needs_parens(c))
            }
            Value::Algebraic(c) => {
                let parent = self.parent().unwrap();
                c.iter().filter(|x| !parent.is_zero(x)).count() > 1
                    || c.last().is_some_and(|x| parent.needs_parens(x))
            }
        }
    }

    /// Canonical text in the polynomial surface syntax.
    pub fn format(&self, v: &Value) -> String {
        match (&*self.0, v) {
            (Layer::Base(_), Value::Rational(q)) => {
                if q.is_integer() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
            (Layer::Base(_), Value::Modular(a)) => a.to_string(),
            (Layer::RationalFunctions { parent, var }, Value::Fraction(n, d)) => {
                let num = up::format(parent, n, var);
                if d.len() == 1 {
                    num
                } else {
                    let den = up::format(parent, d, var);
                    let num = if up::format_needs_parens(parent, n) { format!("({num})") } else { num };
                    format!("{num}/({den})")
                }
            }
            (Layer::Algebraic { parent, name, .. }, Value::Algebraic(c)) => up::format(parent, c, name),
            _ => panic!("value does not belong to field {self}"),
        }
    }

    /// Whether the printed form starts with a unary minus that can be
    /// pulled out of a sum.
    pub(crate) fn is_negative_display(&self, v: &Value) -> bool {
        match v {
            Value::Rational(q) => q.is_negative(),
            Value::Modular(_) => false,
            _ => !self.needs_parens(v) && self.format(v).starts_with('-'),
        }
    }

    /// A deterministic collection of low-height elements of the tower.
    pub fn small_elements(&self, bound: u32) -> Vec<Value> {
        const CAP: usize = 4000;
        let b = bound.max(1) as i64;
        let mut out: Vec<Value> = Vec::new();
        let push = |out: &mut Vec<Value>, v: Value| {
            if out.len() < CAP && !out.contains(&v) {
                out.push(v);
            }
        };
        match &*self.0 {
            Layer::Base(BaseField::Rationals) => {
                push(&mut out, self.zero());
                for num in 1..=b {
                    for den in 1..=b {
                        let q = BigRational::new(num.into(), den.into());
                        push(&mut out, Value::Rational(q.clone()));
                        push(&mut out, Value::Rational(-q));
                    }
                }
            }
            Layer::Base(BaseField::Prime(p)) => {
                let n = if *p <= 256 { *p } else { (2 * b + 1) as u64 };
                for a in 0..n {
                    push(&mut out, self.from_int(a as i64));
                }
            }
            Layer::RationalFunctions { parent, .. } | Layer::Algebraic { parent, .. } => {
                let coeffs: Vec<Value> = parent.small_elements(bound).into_iter().take(7).collect();
                for c in &coeffs {
                    push(&mut out, self.lift(c.clone()));
                }
                let t = match &*self.0 {
                    Layer::RationalFunctions { var, .. } => self.constant(var).unwrap(),
                    Layer::Algebraic { name, .. } => self.constant(name).unwrap(),
                    _ => unreachable!(),
                };
                let max_deg = match &*self.0 {
                    Layer::Algebraic { minpoly, .. } => (minpoly.len() - 2).min(2),
                    _ => 2,
                };
                let mut layer_polys: Vec<Value> = coeffs.iter().map(|c| self.lift(c.clone())).collect();
                let mut power = self.one();
                for _ in 0..max_deg {
                    power = self.mul(&power, &t);
                    let mut next = Vec::new();
                    for base in &layer_polys {
                        for c in &coeffs {
                            if parent.is_zero(c) {
                                continue;
                            }
                            let v = self.add(base, &self.mul(&self.lift(c.clone()), &power));
                            next.push(v);
                        }
                    }
                    for v in &next {
                        push(&mut out, v.clone());
                    }
                    layer_polys.extend(next);
                    if layer_polys.len() > CAP {
                        break;
                    }
                }
                if let Layer::RationalFunctions { .. } = &*self.0 {
                    let snapshot: Vec<Value> = out.iter().filter(|v| !self.is_zero(v)).take(40).cloned().collect();
                    for v in snapshot {
                        if let Ok(inv) = self.inv(&v) {
                            push(&mut out, inv);
                        }
                    }
                }
            }
        }
        out
    }

    /// For `F_p(t)` only: the square root of `a` if it has one.
    pub fn sqrt_in_fpt(&self, a: &Value) -> Result<Option<Value>, FieldError> {
        let (parent, p) = match &*self.0 {
            Layer::RationalFunctions { parent, .. } => match &*parent.0 {
                Layer::Base(BaseField::Prime(p)) => (parent, *p),
                _ => return Err(FieldError::UnsupportedField(self.to_string())),
            },
            _ => return Err(FieldError::UnsupportedField(self.to_string())),
        };
        let Value::Fraction(n, d) = a else {
            return Err(FieldError::UnsupportedField(self.to_string()));
        };
        if n.is_empty() {
            return Ok(Some(self.zero()));
        }
        let (Some(rn), Some(rd)) = (poly_sqrt_fp(parent, p, n), poly_sqrt_fp(parent, p, d)) else {
            return Ok(None);
        };
        Ok(Some(self.normalize_fraction(rn, rd)))
    }

    /// Square test in `F_p(t)` via squarefree decomposition of numerator and
    /// denominator.
    pub fn is_square(&self, a: &Value) -> Result<bool, FieldError> {
        Ok(self.sqrt_in_fpt(a)?.is_some())
    }
}

/// Square root of a polynomial over `F_p` from its squarefree decomposition.
fn poly_sqrt_fp(k: &Field, p: u64, f: &[Value]) -> Option<Vec<Value>> {
    let lc = match f.last()? {
        Value::Modular(c) => *c,
        _ => unreachable!(),
    };
    let root_lc = sqrt_mod(lc, p)?;
    let mut root = vec![Value::Modular(root_lc)];
    let monic = up::monic(k, f);
    for (factor, mult) in squarefree_decomposition(k, &monic) {
        if mult % 2 == 1 {
            return None;
        }
        root = up::mul(k, &root, &up::pow(k, &factor, (mult / 2) as u64));
    }
    Some(root)
}

/// An element together with the field it lives in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElem {
    pub field: Field,
    pub value: Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElem {
    pub fn new(field: &Field, value: Value) -> Self {
        FieldElem { field: field.clone(), value }
    }

    pub fn arith(&self, other: &FieldElem, op: ArithOp) -> Result<FieldElem, FieldError> {
        if self.field != other.field {
            return Err(FieldError::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        let k = &self.field;
        let (a, b) = (&self.value, &other.value);
        let value = match op {
            ArithOp::Add => k.add(a, b),
            ArithOp::Sub => k.sub(a, b),
            ArithOp::Mul => k.mul(a, b),
            ArithOp::Div => k.div(a, b)?,
        };
        Ok(FieldElem { field: k.clone(), value })
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero(&self.value)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(&self.value))
    }
}

/// Parses a base description such as `Q` or `F7`.
pub fn parse_base(text: &str) -> Option<BaseField> {
    let t = text.trim();
    if t == "Q" || t == "QQ" {
        return Some(BaseField::Rationals);
    }
    let digits = t.strip_prefix('F').or_else(|| t.strip_prefix("GF"))?;
    digits.parse::<u64>().ok().map(BaseField::Prime)
}
