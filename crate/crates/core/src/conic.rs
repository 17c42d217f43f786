//! Points of the characteristic-two conic `Y^2 + a X^2 + X = 0` over
//! `F_2(t)`, classified by whether their residue field holds a square root
//! of `a`.

use thiserror::Error;

use crate::field::{Field, FieldError, Value};
use crate::ideal::{Ideal, IdealError, RingPresentation};
use crate::poly::PolyError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConicError {
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error("the field must be F_2(t), got {0}")]
    UnsupportedField(String),
    #[error("ideal for lambda = {0} is not proper")]
    ImproperPoint(String),
    #[error("constructed point for lambda = {0} does not satisfy the relations")]
    OffCurve(String),
}

impl From<FieldError> for ConicError {
    fn from(e: FieldError) -> Self {
        ConicError::Ideal(e.into())
    }
}

impl From<PolyError> for ConicError {
    fn from(e: PolyError) -> Self {
        ConicError::Ideal(e.into())
    }
}

#[derive(Clone, Debug)]
pub struct ConicPoint {
    pub label: String,
    /// Generators of the maximal ideal.
    pub ideal: Vec<String>,
    pub field: Field,
    pub coords: Vec<Value>,
    /// A square root of `a` in the residue field, when one exists.
    pub sqrt_a: Option<Value>,
}

impl ConicPoint {
    pub fn in_locus(&self) -> bool {
        self.sqrt_a.is_some()
    }

    pub fn coords_string(&self) -> String {
        let c: Vec<String> = self.coords.iter().map(|v| self.field.format(v)).collect();
        format!("({})", c.join(", "))
    }
}

/// `B = F_2(t)[X, Y] / (Y^2 + a X^2 + X)` with `a = t`.
pub struct Conic {
    ring: RingPresentation,
    a: Value,
}

impl Conic {
    pub fn new(field: &Field) -> Result<Self, ConicError> {
        if field.characteristic() != 2 || field.constant_names() != ["t"] || field.algebraic_degree() != 1 {
            return Err(ConicError::UnsupportedField(field.to_string()));
        }
        let ring = RingPresentation::parse(field, &["X", "Y"], &["Y^2 + t*X^2 + X"])?;
        let a = field.constant("t").expect("t is a constant");
        Ok(Conic { ring, a })
    }

    pub fn ring(&self) -> &RingPresentation {
        &self.ring
    }

    /// `m_lambda = (Y^2 + t X^2 + X, (X + lambda)^2 + t)`. The residue field
    /// is built as `F_2(t)(w)(v)` with `w^2 = t`, `X = lambda + w` and
    /// `v^2 = t lambda^2 + t^2 + lambda + w`, `Y = v`.
    pub fn lambda_point(&self, lambda_text: &str) -> Result<ConicPoint, ConicError> {
        let k = self.ring.field();
        let lambda = crate::poly::parse_field_elem(lambda_text, k)?;
        let r = self.ring.ring();
        let lam = k.format(&lambda);
        let quad = format!("(X + {lam})^2 + t");
        let m = Ideal::parse(r, &["Y^2 + t*X^2 + X", &quad])?;
        if !m.is_proper()? || !m.member(&r.parse(&quad)?)? {
            return Err(ConicError::ImproperPoint(lam));
        }
        let kw = k.extend("w", vec![self.a.clone(), k.zero(), k.one()])?;
        let w = kw.constant("w").expect("w adjoined");
        let lam_w = kw.coerce(k, &lambda)?;
        let x = kw.add(&lam_w, &w);
        let t = kw.coerce(k, &self.a)?;
        // Y^2 = t X^2 + X in characteristic two
        let c = kw.add(&kw.mul(&t, &kw.mul(&x, &x)), &x);
        let kv = kw.extend("v", vec![c, kw.zero(), kw.one()])?;
        let coords = vec![kv.coerce(&kw, &x)?, kv.constant("v").expect("v adjoined")];
        self.ring.check_point(&kv, &coords).map_err(|_| ConicError::OffCurve(lam.clone()))?;
        let sqrt_a = kv.coerce(&kw, &w)?;
        Ok(ConicPoint {
            label: format!("m_lambda(lambda={lam})"),
            ideal: m.generators().iter().map(|g| g.to_string()).collect(),
            field: kv,
            coords,
            sqrt_a: Some(sqrt_a),
        })
    }

    /// The rational point `(1/(s^2 + t), s/(s^2 + t))`, or `(0, 0)` for
    /// `None`. Its residue field is `F_2(t)`, classified by the square test.
    pub fn rational_point(&self, s_text: Option<&str>) -> Result<ConicPoint, ConicError> {
        let k = self.ring.field().clone();
        let (coords, label) = match s_text {
            None => (vec![k.zero(), k.zero()], "origin".to_string()),
            Some(st) => {
                let s = crate::poly::parse_field_elem(st, &k)?;
                let den = k.add(&k.mul(&s, &s), &self.a);
                let x = k.inv(&den)?;
                let y = k.mul(&s, &x);
                (vec![x, y], format!("rational(s={})", k.format(&s)))
            }
        };
        self.ring.check_point(&k, &coords).map_err(|_| ConicError::OffCurve(label.clone()))?;
        let sqrt_a = k.sqrt_in_fpt(&self.a)?;
        let r = self.ring.ring();
        let ideal = vec![
            (&r.var(0) - &r.constant(coords[0].clone())).to_string(),
            (&r.var(1) - &r.constant(coords[1].clone())).to_string(),
        ];
        Ok(ConicPoint { label, ideal, field: k, coords, sqrt_a })
    }
}
