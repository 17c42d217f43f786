//! Sorted term lists shared by [`super::Poly`] and the Gröbner engine.
//! Every list is strictly decreasing under the order it was built with and
//! holds no zero coefficients.

use std::cmp::Ordering;
use std::collections::HashMap;

use super::order::MonomialOrder;
use crate::field::{Field, Value};

pub type Monomial = Vec<u32>;
pub type Term = (Monomial, Value);

pub(crate) fn mono_mul(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn mono_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub(crate) fn mono_div(b: &[u32], a: &[u32]) -> Monomial {
    b.iter().zip(a).map(|(x, y)| x - y).collect()
}

pub(crate) fn mono_lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub(crate) fn mono_degree(a: &[u32]) -> u32 {
    a.iter().sum()
}

pub(crate) fn sort_terms(k: &Field, map: HashMap<Monomial, Value>, ord: &MonomialOrder) -> Vec<Term> {
    let mut terms: Vec<Term> = map.into_iter().filter(|(_, c)| !k.is_zero(c)).collect();
    terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
    terms
}

pub(crate) fn resort(k: &Field, terms: Vec<Term>, ord: &MonomialOrder) -> Vec<Term> {
    let mut terms: Vec<Term> = terms.into_iter().filter(|(_, c)| !k.is_zero(c)).collect();
    terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
    terms
}

/// Collects unsorted terms, combining repeated monomials.
pub(crate) fn collect(k: &Field, terms: impl IntoIterator<Item = Term>, ord: &MonomialOrder) -> Vec<Term> {
    let mut map: HashMap<Monomial, Value> = HashMap::new();
    for (m, c) in terms {
        match map.get_mut(&m) {
            Some(acc) => *acc = k.add(acc, &c),
            None => {
                map.insert(m, c);
            }
        }
    }
    sort_terms(k, map, ord)
}

pub(crate) fn add(k: &Field, a: &[Term], b: &[Term], ord: &MonomialOrder) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match ord.cmp(&a[i].0, &b[j].0) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                let c = k.add(&a[i].1, &b[j].1);
                if !k.is_zero(&c) {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub(crate) fn neg(k: &Field, a: &[Term]) -> Vec<Term> {
    a.iter().map(|(m, c)| (m.clone(), k.neg(c))).collect()
}

pub(crate) fn scale(k: &Field, a: &[Term], c: &Value) -> Vec<Term> {
    if k.is_zero(c) {
        return vec![];
    }
    a.iter().map(|(m, x)| (m.clone(), k.mul(x, c))).collect()
}

/// `f - c * mono * g`, the basic reduction step.
pub(crate) fn sub_mul(k: &Field, f: &[Term], c: &Value, mono: &[u32], g: &[Term], ord: &MonomialOrder) -> Vec<Term> {
    let shifted: Vec<Term> = g.iter().map(|(m, x)| (mono_mul(m, mono), k.neg(&k.mul(x, c)))).collect();
    add(k, f, &shifted, ord)
}

pub(crate) fn mul(k: &Field, a: &[Term], b: &[Term], ord: &MonomialOrder) -> Vec<Term> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    if a.len() == 1 || b.len() == 1 {
        let (single, other) = if a.len() == 1 { (&a[0], b) } else { (&b[0], a) };
        return other.iter().map(|(m, c)| (mono_mul(m, &single.0), k.mul(c, &single.1))).collect();
    }
    let mut map: HashMap<Monomial, Value> = HashMap::with_capacity(a.len() * b.len());
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m = mono_mul(ma, mb);
            let c = k.mul(ca, cb);
            match map.get_mut(&m) {
                Some(acc) => *acc = k.add(acc, &c),
                None => {
                    map.insert(m, c);
                }
            }
        }
    }
    sort_terms(k, map, ord)
}

pub(crate) fn make_monic(k: &Field, a: &[Term]) -> Vec<Term> {
    match a.first() {
        None => vec![],
        Some((_, lc)) => {
            if k.is_one(lc) {
                a.to_vec()
            } else {
                let inv = k.inv(lc).expect("nonzero leading coefficient");
                scale(k, a, &inv)
            }
        }
    }
}
