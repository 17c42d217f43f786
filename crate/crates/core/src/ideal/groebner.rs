//! Buchberger's algorithm with the normal selection strategy and both of
//! Buchberger's criteria.

use std::collections::BTreeSet;

use crate::field::Field;
use crate::poly::terms::{self, mono_div, mono_divides, mono_lcm, Term};
use crate::poly::{MonomialOrder, Poly, PolyRing};

use super::IdealError;

/// A reduced Gröbner basis under a fixed order.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    ring: PolyRing,
    /// Term lists sorted decreasingly under `order`, monic.
    sorted: Vec<Vec<Term>>,
}

impl GroebnerBasis {
    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Basis elements as ordinary polynomials.
    pub fn polys(&self) -> Vec<Poly> {
        self.sorted.iter().map(|t| self.ring.from_terms(t.iter().cloned())).collect()
    }

    pub fn leading_monomials(&self) -> Vec<Vec<u32>> {
        self.sorted.iter().map(|t| t[0].0.clone()).collect()
    }

    /// True when the basis is `{1}`.
    pub fn is_unit(&self) -> bool {
        self.sorted.iter().any(|t| t[0].0.iter().all(|&e| e == 0))
    }

    pub(crate) fn from_parts(order: MonomialOrder, ring: PolyRing, sorted: Vec<Vec<Term>>) -> Self {
        GroebnerBasis { order, ring, sorted }
    }

    /// Remainder of `f` on division by the basis. Unique because the basis
    /// is a Gröbner basis.
    pub fn normal_form(&self, f: &Poly) -> Poly {
        let k = self.ring.field();
        let input = terms::resort(k, f.terms().to_vec(), &self.order);
        let rem = reduce(k, input, &self.sorted, &self.order);
        if self.order == MonomialOrder::grevlex() {
            Poly::from_sorted(&self.ring, rem)
        } else {
            self.ring.from_terms(rem)
        }
    }
}

/// Full reduction of a sorted term list by monic divisors.
pub(crate) fn reduce(k: &Field, mut p: Vec<Term>, basis: &[Vec<Term>], ord: &MonomialOrder) -> Vec<Term> {
    let mut rem: Vec<Term> = Vec::new();
    let mut i = 0;
    while i < p.len() {
        match basis.iter().find(|g| mono_divides(&g[0].0, &p[i].0)) {
            Some(g) => {
                let shift = mono_div(&p[i].0, &g[0].0);
                let c = p[i].1.clone();
                p = terms::sub_mul(k, &p[i..], &c, &shift, g, ord);
                i = 0;
            }
            None => {
                rem.push(p[i].clone());
                i += 1;
            }
        }
    }
    rem
}

fn s_poly(k: &Field, f: &[Term], g: &[Term], ord: &MonomialOrder) -> Vec<Term> {
    let lcm = mono_lcm(&f[0].0, &g[0].0);
    let a = mono_div(&lcm, &f[0].0);
    let b = mono_div(&lcm, &g[0].0);
    let fa: Vec<Term> = f.iter().map(|(m, c)| (terms::mono_mul(m, &a), c.clone())).collect();
    terms::sub_mul(k, &fa, &k.one(), &b, g, ord)
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

/// Buchberger's algorithm. `step_cap` bounds the number of pair reductions.
pub(crate) fn buchberger(
    k: &Field,
    gens: Vec<Vec<Term>>,
    ord: &MonomialOrder,
    step_cap: usize,
) -> Result<Vec<Vec<Term>>, IdealError> {
    let mut basis: Vec<Vec<Term>> = Vec::new();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    for g in gens {
        let r = reduce(k, g, &basis, ord);
        if r.is_empty() {
            continue;
        }
        let r = terms::make_monic(k, &r);
        let n = basis.len();
        basis.push(r);
        for i in 0..n {
            pending.insert((i, n));
        }
    }
    let mut steps = 0usize;
    while !pending.is_empty() {
        // normal strategy: smallest lcm first, ties broken by indices
        let &(i, j) = pending
            .iter()
            .min_by(|a, b| {
                let la = mono_lcm(&basis[a.0][0].0, &basis[a.1][0].0);
                let lb = mono_lcm(&basis[b.0][0].0, &basis[b.1][0].0);
                ord.cmp(&la, &lb).then(a.cmp(b))
            })
            .unwrap();
        pending.remove(&(i, j));
        let (lmi, lmj) = (&basis[i][0].0, &basis[j][0].0);
        if coprime(lmi, lmj) {
            continue;
        }
        let lcm = mono_lcm(lmi, lmj);
        let chain = (0..basis.len()).any(|l| {
            l != i
                && l != j
                && mono_divides(&basis[l][0].0, &lcm)
                && !pending.contains(&(i.min(l), i.max(l)))
                && !pending.contains(&(j.min(l), j.max(l)))
        });
        if chain {
            continue;
        }
        steps += 1;
        if steps > step_cap {
            return Err(IdealError::ResourceExceeded { steps: step_cap });
        }
        let s = s_poly(k, &basis[i], &basis[j], ord);
        let r = reduce(k, s, &basis, ord);
        if r.is_empty() {
            continue;
        }
        let r = terms::make_monic(k, &r);
        let n = basis.len();
        let unit = r[0].0.iter().all(|&e| e == 0);
        basis.push(r);
        if unit {
            return Ok(vec![basis.pop().unwrap()]);
        }
        for a in 0..n {
            pending.insert((a, n));
        }
    }
    Ok(interreduce(k, basis, ord))
}

/// Minimal and reduced basis, sorted by increasing leading monomial.
fn interreduce(k: &Field, basis: Vec<Vec<Term>>, ord: &MonomialOrder) -> Vec<Vec<Term>> {
    let mut minimal: Vec<Vec<Term>> = Vec::new();
    for (idx, g) in basis.iter().enumerate() {
        let lm = &g[0].0;
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            j != idx && mono_divides(&h[0].0, lm) && (h[0].0 != *lm || j < idx)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    minimal.sort_by(|a, b| ord.cmp(&a[0].0, &b[0].0));
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Vec<Term>> =
            minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        let head = minimal[i][0].clone();
        let tail = reduce(k, minimal[i][1..].to_vec(), &others, ord);
        let mut g = vec![head];
        g.extend(tail);
        reduced.push(terms::make_monic(k, &g));
    }
    reduced
}
