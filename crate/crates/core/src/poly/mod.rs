//! Sparse multivariate polynomials over a [`Field`].
//!
//! A [`Poly`] stores its terms sorted by decreasing graded reverse lex order
//! (the ring's variable order), which is also the printing order. Other
//! monomial orders are used by the Gröbner engine on its own copies.

mod jacobian;
mod order;
mod parse;
pub(crate) mod terms;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{Field, FieldError, Value};

pub use jacobian::{determinant, jacobian_matrix, jacobian_rank, jacobian_rank_wrt, rank_by_elimination};
pub use order::{MonomialOrder, OrderKind};
pub use parse::{parse_field_elem, parse_poly, parse_rational, parse_univariate};
pub use terms::{Monomial, Term};

pub(crate) const GREVLEX: MonomialOrder = MonomialOrder::grevlex();

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("polynomials live in different rings: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate or clashing name `{0}`")]
    DuplicateName(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{name}` at position {pos}")]
    UnknownSymbol { pos: usize, name: String },
    #[error("division by a non-constant polynomial at position {pos}")]
    NonPolynomial { pos: usize },
    #[error("operation requires characteristic zero, field has characteristic {0}")]
    PositiveCharacteristic(u64),
    #[error("wrong number of substitution images: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct RingInner {
    field: Field,
    vars: Vec<String>,
}

/// `K[x_1, ..., x_m]` with named variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyRing(Arc<RingInner>);

impl fmt::Debug for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.0.field, self.0.vars.join(","))
    }
}

impl PolyRing {
    pub fn new(field: &Field, vars: &[&str]) -> Result<Self, PolyError> {
        Self::from_names(field, vars.iter().map(|s| s.to_string()).collect())
    }

    pub fn from_names(field: &Field, vars: Vec<String>) -> Result<Self, PolyError> {
        let constants = field.constant_names();
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) || constants.contains(v) {
                return Err(PolyError::DuplicateName(v.clone()));
            }
            if !is_identifier(v) {
                return Err(PolyError::Syntax { pos: 0, msg: format!("`{v}` is not a valid variable name") });
            }
        }
        Ok(PolyRing(Arc::new(RingInner { field: field.clone(), vars })))
    }

    pub fn field(&self) -> &Field {
        &self.0.field
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Result<usize, PolyError> {
        self.0.vars.iter().position(|v| v == name).ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    /// The same variables followed by `extra`.
    pub fn extend(&self, extra: &[String]) -> Result<Self, PolyError> {
        let mut vars = self.0.vars.clone();
        vars.extend(extra.iter().cloned());
        Self::from_names(&self.0.field, vars)
    }

    /// The same variables over a larger field of the tower.
    pub fn with_field(&self, field: &Field) -> Result<Self, PolyError> {
        Self::from_names(field, self.0.vars.clone())
    }

    pub fn zero(&self) -> Poly {
        Poly { ring: self.clone(), terms: vec![] }
    }

    pub fn one(&self) -> Poly {
        self.constant(self.field().one())
    }

    pub fn constant(&self, c: Value) -> Poly {
        if self.field().is_zero(&c) {
            return self.zero();
        }
        Poly { ring: self.clone(), terms: vec![(vec![0; self.nvars()], c)] }
    }

    pub fn int(&self, n: i64) -> Poly {
        self.constant(self.field().from_int(n))
    }

    pub fn var(&self, i: usize) -> Poly {
        let mut m = vec![0; self.nvars()];
        m[i] = 1;
        Poly { ring: self.clone(), terms: vec![(m, self.field().one())] }
    }

    pub fn monomial(&self, exps: Monomial, c: Value) -> Poly {
        assert_eq!(exps.len(), self.nvars());
        if self.field().is_zero(&c) {
            return self.zero();
        }
        Poly { ring: self.clone(), terms: vec![(exps, c)] }
    }

    pub fn from_terms(&self, terms: impl IntoIterator<Item = Term>) -> Poly {
        Poly { ring: self.clone(), terms: terms::collect(self.field(), terms, &GREVLEX) }
    }

    pub fn parse(&self, text: &str) -> Result<Poly, PolyError> {
        parse_poly(text, self)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Polynomial with coefficients in the ring's field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    ring: PolyRing,
    terms: Vec<Term>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Poly {
    pub(crate) fn from_sorted(ring: &PolyRing, terms: Vec<Term>) -> Poly {
        Poly { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    /// Terms in decreasing graded reverse lex order.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0))
    }

    /// Constant term's value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Value> {
        match self.terms.as_slice() {
            [] => Some(self.field().zero()),
            [(m, c)] if m.iter().all(|&e| e == 0) => Some(c.clone()),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| terms::mono_degree(m)).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m[var]).max()
    }

    /// Variables that occur with positive exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.ring.nvars()).filter(|&i| self.terms.iter().any(|(m, _)| m[i] > 0)).collect()
    }

    pub fn leading_term(&self, ord: &MonomialOrder) -> Option<Term> {
        self.terms.iter().max_by(|a, b| ord.cmp(&a.0, &b.0)).cloned()
    }

    fn check_ring(&self, other: &Poly) -> Result<(), PolyError> {
        if self.ring != other.ring {
            return Err(PolyError::RingMismatch(self.ring.to_string(), other.ring.to_string()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: &Value) -> Poly {
        Poly { ring: self.ring.clone(), terms: terms::scale(self.field(), &self.terms, c) }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Monic under the storage order (leading coefficient 1).
    pub fn monic(&self) -> Poly {
        Poly { ring: self.ring.clone(), terms: terms::make_monic(self.field(), &self.terms) }
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn partial(&self, var: usize) -> Poly {
        let k = self.field();
        let ts = self
            .terms
            .iter()
            .filter(|(m, _)| m[var] > 0)
            .map(|(m, c)| {
                let mut m2 = m.clone();
                m2[var] -= 1;
                (m2, k.scale_int(c, m[var] as i64))
            })
            .filter(|(_, c)| !k.is_zero(c));
        self.ring.from_terms(ts)
    }

    pub fn partial_by_name(&self, var: &str) -> Result<Poly, PolyError> {
        Ok(self.partial(self.ring.var_index(var)?))
    }

    /// Ring homomorphism `x_i -> images[i]` into the images' ring. The
    /// coefficient field must be a subfield of the target's.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly, PolyError> {
        if images.len() != self.ring.nvars() {
            return Err(PolyError::ArityMismatch { expected: self.ring.nvars(), got: images.len() });
        }
        let target = match images.first() {
            Some(p) => p.ring.clone(),
            None => return Ok(self.clone()),
        };
        for img in images {
            if img.ring != target {
                return Err(PolyError::RingMismatch(img.ring.to_string(), target.to_string()));
            }
        }
        let tk = target.field().clone();
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![target.one(), p.clone()]).collect();
        let mut acc: Vec<Term> = Vec::new();
        let mut pending: Vec<Poly> = Vec::new();
        for (m, c) in &self.terms {
            let mut t = target.constant(tk.coerce(self.field(), c)?);
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            pending.push(t);
            if pending.len() >= 16 {
                for p in pending.drain(..) {
                    acc = terms::add(&tk, &acc, &p.terms, &GREVLEX);
                }
            }
        }
        for p in pending {
            acc = terms::add(&tk, &acc, &p.terms, &GREVLEX);
        }
        Ok(Poly { ring: target, terms: acc })
    }

    /// Substitutes the listed variables and keeps the rest.
    pub fn substitute_some(&self, assignment: &[(usize, Poly)]) -> Result<Poly, PolyError> {
        let target = match assignment.first() {
            Some((_, p)) => p.ring.clone(),
            None => return Ok(self.clone()),
        };
        let mut images: Vec<Poly> = Vec::with_capacity(self.ring.nvars());
        for i in 0..self.ring.nvars() {
            match assignment.iter().find(|(j, _)| *j == i) {
                Some((_, p)) => images.push(p.clone()),
                None => {
                    let name = &self.ring.vars()[i];
                    images.push(target.var(target.var_index(name)?));
                }
            }
        }
        self.substitute(&images)
    }

    /// Evaluates at a point whose coordinates lie in `target`, a field
    /// containing the coefficient field.
    pub fn eval(&self, target: &Field, point: &[Value]) -> Result<Value, PolyError> {
        if point.len() != self.ring.nvars() {
            return Err(PolyError::ArityMismatch { expected: self.ring.nvars(), got: point.len() });
        }
        let mut acc = target.zero();
        let mut cache: HashMap<(usize, u32), Value> = HashMap::new();
        for (m, c) in &self.terms {
            let mut t = target.coerce(self.field(), c)?;
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    let pw = cache.entry((i, e)).or_insert_with(|| target.pow(&point[i], e as u64));
                    t = target.mul(&t, pw);
                }
            }
            acc = target.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Reinterprets the polynomial in `target`: variable `i` becomes
    /// `var_map[i]` and coefficients are coerced into the target field.
    pub fn embed(&self, target: &PolyRing, var_map: &[usize]) -> Result<Poly, PolyError> {
        let tk = target.field();
        let mut out = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut m2 = vec![0; target.nvars()];
            for (i, &e) in m.iter().enumerate() {
                m2[var_map[i]] += e;
            }
            out.push((m2, tk.coerce(self.field(), c)?));
        }
        Ok(target.from_terms(out))
    }

    /// Embeds by matching variable names.
    pub fn embed_by_name(&self, target: &PolyRing) -> Result<Poly, PolyError> {
        let map = self.ring.vars().iter().map(|v| target.var_index(v)).collect::<Result<Vec<_>, _>>()?;
        self.embed(target, &map)
    }

    /// Splits by the exponents of the variables in `outer`: returns pairs
    /// `(exponents of outer vars, coefficient polynomial)` where the
    /// coefficient keeps the full ring but has zero exponents on `outer`.
    pub fn coefficients_wrt(&self, outer: &[usize]) -> Vec<(Vec<u32>, Poly)> {
        let mut groups: Vec<(Vec<u32>, Vec<Term>)> = Vec::new();
        for (m, c) in &self.terms {
            let key: Vec<u32> = outer.iter().map(|&i| m[i]).collect();
            let mut inner = m.clone();
            for &i in outer {
                inner[i] = 0;
            }
            match groups.iter_mut().find(|(k, _)| *k == key) {
                Some((_, ts)) => ts.push((inner, c.clone())),
                None => groups.push((key, vec![(inner, c.clone())])),
            }
        }
        groups.into_iter().map(|(k, ts)| (k, self.ring.from_terms(ts))).collect()
    }

    /// Exact quotient by a nonzero divisor, `None` if it does not divide.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let k = self.field().clone();
        let (lm, lc) = d.terms.first()?.clone();
        let lc_inv = k.inv(&lc).ok()?;
        let mut rem = self.terms.clone();
        let mut quot: Vec<Term> = Vec::new();
        while let Some((m, c)) = rem.first().cloned() {
            if !terms::mono_divides(&lm, &m) {
                return None;
            }
            let qm = terms::mono_div(&m, &lm);
            let qc = k.mul(&c, &lc_inv);
            rem = terms::sub_mul(&k, &rem, &qc, &qm, &d.terms, &GREVLEX);
            quot.push((qm, qc));
        }
        Some(Poly { ring: self.ring.clone(), terms: quot })
    }

    /// Same polynomial over a different ring with identical variables.
    pub fn change_ring(&self, target: &PolyRing) -> Result<Poly, PolyError> {
        if target.vars() != self.ring.vars() {
            return self.embed_by_name(target);
        }
        let tk = target.field();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| Ok((m.clone(), tk.coerce(self.field(), c)?)))
            .collect::<Result<Vec<_>, FieldError>>()?;
        Ok(Poly { ring: target.clone(), terms })
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        debug_assert_eq!(self.ring, rhs.ring);
        Poly { ring: self.ring.clone(), terms: terms::add(self.field(), &self.terms, &rhs.terms, &GREVLEX) }
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        debug_assert_eq!(self.ring, rhs.ring);
        let neg = terms::neg(self.field(), &rhs.terms);
        Poly { ring: self.ring.clone(), terms: terms::add(self.field(), &self.terms, &neg, &GREVLEX) }
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        debug_assert_eq!(self.ring, rhs.ring);
        Poly { ring: self.ring.clone(), terms: terms::mul(self.field(), &self.terms, &rhs.terms, &GREVLEX) }
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { ring: self.ring.clone(), terms: terms::neg(self.field(), &self.terms) }
    }
}

fn format_monomial(vars: &[String], m: &[u32]) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { vars[i].clone() } else { format!("{}^{}", vars[i], e) })
        .collect();
    parts.join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let k = self.field();
        let vars = self.ring.vars();
        let mut out = String::new();
        for (m, c) in &self.terms {
            let negative = k.is_negative_display(c);
            let c = if negative { k.neg(c) } else { c.clone() };
            let mono = format_monomial(vars, m);
            let body = if mono.is_empty() {
                k.format(&c)
            } else if k.is_one(&c) {
                mono
            } else if k.needs_parens(&c) {
                format!("({})*{}", k.format(&c), mono)
            } else {
                format!("{}*{}", k.format(&c), mono)
            };
            crate::field::univariate::push_signed(&mut out, negative, &body);
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qring() -> PolyRing {
        PolyRing::new(&Field::rationals(), &["x", "y", "z"]).unwrap()
    }

    #[test]
    fn partial_of_quadric() {
        let r = qring();
        let f = r.parse("x*y + z^2 + 1").unwrap();
        assert_eq!(f.partial(2), r.parse("2*z").unwrap());
        assert_eq!(f.partial_by_name("x").unwrap(), r.parse("y").unwrap());
        assert!(matches!(f.partial_by_name("w"), Err(PolyError::UnknownVariable(_))));
    }

    #[test]
    fn display_is_grevlex_and_reparses() {
        let r = qring();
        let f = r.parse("1 + z^2 + y*x - 3/2*z").unwrap();
        assert_eq!(f.to_string(), "x*y + z^2 - 3/2*z + 1");
        assert_eq!(r.parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn substitution_into_other_ring() {
        let r = qring();
        let s = PolyRing::new(&Field::rationals(), &["X1", "X2"]).unwrap();
        let f = r.parse("x*y + z^2 + 1").unwrap();
        let imgs = vec![
            s.parse("1 + X2^2").unwrap(),
            s.parse("-1 + 2*X1*X2 - X1^2 - X1^2*X2^2").unwrap(),
            s.parse("X1 - X2 + X1*X2^2").unwrap(),
        ];
        assert!(f.substitute(&imgs).unwrap().is_zero());
    }

    #[test]
    fn coefficients_split() {
        let r = qring();
        let f = r.parse("x*z^2 + y*z^2 + 3*z + x").unwrap();
        let parts = f.coefficients_wrt(&[2]);
        let c2 = parts.iter().find(|(k, _)| k == &vec![2]).unwrap();
        assert_eq!(c2.1, r.parse("x + y").unwrap());
        assert_eq!(parts.len(), 3);
    }

    #[test]
    fn exact_division() {
        let r = qring();
        let f = r.parse("x^2 - y^2").unwrap();
        let d = r.parse("x - y").unwrap();
        assert_eq!(f.div_exact(&d).unwrap(), r.parse("x + y").unwrap());
        assert!(f.div_exact(&r.parse("x + z").unwrap()).is_none());
    }

    fn arb_poly() -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
        proptest::collection::vec((proptest::collection::vec(0u32..3, 3), -4i64..5), 0..5)
    }

    fn build(r: &PolyRing, ts: &[(Vec<u32>, i64)]) -> Poly {
        r.from_terms(ts.iter().map(|(m, c)| (m.clone(), r.field().from_int(*c))))
    }

    proptest! {
        #[test]
        fn ring_axioms_and_evaluation(a in arb_poly(), b in arb_poly(), c in arb_poly(), pt in proptest::collection::vec(-3i64..4, 3)) {
            let r = qring();
            let k = r.field().clone();
            let (f, g, h) = (build(&r, &a), build(&r, &b), build(&r, &c));
            prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
            prop_assert_eq!(&f * &g, &g * &f);
            prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
            prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
            let p: Vec<Value> = pt.iter().map(|&v| k.from_int(v)).collect();
            let ev = |q: &Poly| q.eval(&k, &p).unwrap();
            prop_assert_eq!(ev(&(&f * &g)), k.mul(&ev(&f), &ev(&g)));
            prop_assert_eq!(ev(&(&f + &g)), k.add(&ev(&f), &ev(&g)));
        }

        #[test]
        fn leibniz_and_mixed_partials(a in arb_poly(), b in arb_poly()) {
            let r = qring();
            let (f, g) = (build(&r, &a), build(&r, &b));
            let lhs = (&f * &g).partial(0);
            let rhs = &(&f * &g.partial(0)) + &(&g * &f.partial(0));
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(f.partial(0).partial(1), f.partial(1).partial(0));
        }

        #[test]
        fn substitution_is_homomorphism(a in arb_poly(), b in arb_poly(), imgs in proptest::collection::vec(arb_poly(), 3)) {
            let r = qring();
            let (f, g) = (build(&r, &a), build(&r, &b));
            let images: Vec<Poly> = imgs.iter().map(|t| build(&r, t)).collect();
            let s = |p: &Poly| p.substitute(&images).unwrap();
            prop_assert_eq!(s(&(&f * &g)), &s(&f) * &s(&g));
            prop_assert_eq!(s(&(&f + &g)), &s(&f) + &s(&g));
        }

        #[test]
        fn print_parse_round_trip(a in arb_poly()) {
            let r = qring();
            let f = build(&r, &a);
            prop_assert_eq!(r.parse(&f.to_string()).unwrap(), f);
        }
    }
}
