//! Dense univariate polynomials over a [`Field`], coefficients low to high.
//! These back the rational-function and algebraic layers of the tower.

use super::{Field, Value};

pub(crate) fn trim(k: &Field, mut a: Vec<Value>) -> Vec<Value> {
    while a.last().is_some_and(|c| k.is_zero(c)) {
        a.pop();
    }
    a
}

pub(crate) fn add(k: &Field, a: &[Value], b: &[Value]) -> Vec<Value> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => k.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        });
    }
    trim(k, out)
}

pub(crate) fn neg(k: &Field, a: &[Value]) -> Vec<Value> {
    a.iter().map(|c| k.neg(c)).collect()
}

pub(crate) fn sub(k: &Field, a: &[Value], b: &[Value]) -> Vec<Value> {
    add(k, a, &neg(k, b))
}

pub(crate) fn scale(k: &Field, a: &[Value], c: &Value) -> Vec<Value> {
    if k.is_zero(c) {
        return vec![];
    }
    trim(k, a.iter().map(|x| k.mul(x, c)).collect())
}

pub(crate) fn mul(k: &Field, a: &[Value], b: &[Value]) -> Vec<Value> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![k.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if k.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = k.add(&out[i + j], &k.mul(x, y));
        }
    }
    trim(k, out)
}

pub(crate) fn pow(k: &Field, a: &[Value], e: u64) -> Vec<Value> {
    let mut acc = vec![k.one()];
    for _ in 0..e {
        acc = mul(k, &acc, a);
    }
    acc
}

pub(crate) fn monic(k: &Field, a: &[Value]) -> Vec<Value> {
    match a.last() {
        None => vec![],
        Some(lc) => {
            let inv = k.inv(lc).expect("nonzero leading coefficient");
            scale(k, a, &inv)
        }
    }
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn divrem(k: &Field, a: &[Value], b: &[Value]) -> (Vec<Value>, Vec<Value>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return (vec![], r);
    }
    let db = b.len() - 1;
    let lc_inv = k.inv(b.last().unwrap()).expect("nonzero leading coefficient");
    let mut q = vec![k.zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let c = k.mul(r.last().unwrap(), &lc_inv);
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] = k.sub(&r[shift + j], &k.mul(&c, bj));
        }
        q[shift] = c;
        r.pop();
        r = trim(k, r);
    }
    (trim(k, q), r)
}

pub(crate) fn rem(k: &Field, a: &[Value], b: &[Value]) -> Vec<Value> {
    if a.len() < b.len() {
        return a.to_vec();
    }
    divrem(k, a, b).1
}

pub(crate) fn div_exact(k: &Field, a: &[Value], b: &[Value]) -> Vec<Value> {
    let (q, r) = divrem(k, a, b);
    debug_assert!(r.is_empty(), "inexact polynomial division");
    q
}

/// Monic gcd; `gcd(0, 0) = 0`.
pub(crate) fn gcd(k: &Field, a: &[Value], b: &[Value]) -> Vec<Value> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        let r = rem(k, &x, &y);
        x = y;
        y = r;
    }
    monic(k, &x)
}

/// `(g, s, t)` with `s*a + t*b = g`, `g` monic.
pub(crate) fn ext_gcd(k: &Field, a: &[Value], b: &[Value]) -> (Vec<Value>, Vec<Value>, Vec<Value>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![k.one()], vec![]);
    let (mut t0, mut t1) = (vec![], vec![k.one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(k, &r0, &r1);
        let s2 = sub(k, &s0, &mul(k, &q, &s1));
        let t2 = sub(k, &t0, &mul(k, &q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    match r0.last() {
        None => (r0, s0, t0),
        Some(lc) => {
            let inv = k.inv(lc).unwrap();
            (scale(k, &r0, &inv), scale(k, &s0, &inv), scale(k, &t0, &inv))
        }
    }
}

pub(crate) fn derivative(k: &Field, a: &[Value]) -> Vec<Value> {
    trim(k, a.iter().enumerate().skip(1).map(|(i, c)| k.scale_int(c, i as i64)).collect())
}

pub(crate) fn eval(k: &Field, a: &[Value], x: &Value) -> Value {
    let mut acc = k.zero();
    for c in a.iter().rev() {
        acc = k.add(&k.mul(&acc, x), c);
    }
    acc
}

fn term(k: &Field, c: &Value, e: usize, var: &str) -> String {
    let mono = match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    };
    if mono.is_empty() {
        return k.format(c);
    }
    if k.is_one(c) {
        return mono;
    }
    let coeff = k.format(c);
    if k.needs_parens(c) {
        format!("({coeff})*{mono}")
    } else {
        format!("{coeff}*{mono}")
    }
}

/// Prints in the surface syntax, highest degree first.
pub(crate) fn format(k: &Field, a: &[Value], var: &str) -> String {
    if a.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (e, c) in a.iter().enumerate().rev() {
        if k.is_zero(c) {
            continue;
        }
        let negative = k.is_negative_display(c);
        let body = if negative { term(k, &k.neg(c), e, var) } else { term(k, c, e, var) };
        push_signed(&mut out, negative, &body);
    }
    out
}

/// Appends `body` to a sum, folding a leading minus of an unparenthesized
/// summand into the joining operator.
pub(crate) fn push_signed(out: &mut String, negative: bool, body: &str) {
    if out.is_empty() {
        if negative {
            out.push('-');
        }
        out.push_str(body);
    } else if negative {
        out.push_str(" - ");
        out.push_str(body);
    } else if let Some(rest) = body.strip_prefix('-') {
        out.push_str(" - ");
        out.push_str(rest);
    } else {
        out.push_str(" + ");
        out.push_str(body);
    }
}

pub(crate) fn format_needs_parens(k: &Field, a: &[Value]) -> bool {
    a.iter().filter(|c| !k.is_zero(c)).count() > 1 || a.last().is_some_and(|c| k.needs_parens(c))
}
