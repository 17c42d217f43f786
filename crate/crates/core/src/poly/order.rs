use std::cmp::Ordering;

/// Shape of a monomial order before variable permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Lex,
    GrevLex,
    /// Product of graded-reverse-lex blocks of the given sizes, compared
    /// block by block. Trailing variables not covered form a final block.
    Product(Vec<usize>),
}

/// A monomial order on exponent vectors. `priority[k]` is the variable
/// index that plays the role of the `k`-th variable; an empty list means
/// the ring's own variable order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub priority: Vec<usize>,
}

impl MonomialOrder {
    pub const fn grevlex() -> Self {
        MonomialOrder { kind: OrderKind::GrevLex, priority: Vec::new() }
    }

    pub const fn lex() -> Self {
        MonomialOrder { kind: OrderKind::Lex, priority: Vec::new() }
    }

    pub fn with_priority(kind: OrderKind, priority: Vec<usize>) -> Self {
        MonomialOrder { kind, priority }
    }

    /// Elimination order: the variables in `eliminate` form the first
    /// block, everything else the second, each block graded reverse lex.
    pub fn elimination(nvars: usize, eliminate: &[usize]) -> Self {
        let mut priority: Vec<usize> = eliminate.to_vec();
        priority.extend((0..nvars).filter(|i| !eliminate.contains(i)));
        MonomialOrder { kind: OrderKind::Product(vec![eliminate.len()]), priority }
    }

    #[inline]
    fn var_at(&self, k: usize) -> usize {
        if self.priority.is_empty() {
            k
        } else {
            self.priority[k]
        }
    }

    fn grevlex_range(&self, a: &[u32], b: &[u32], start: usize, end: usize) -> Ordering {
        let (mut da, mut db) = (0u64, 0u64);
        for k in start..end {
            let i = self.var_at(k);
            da += a[i] as u64;
            db += b[i] as u64;
        }
        if da != db {
            return da.cmp(&db);
        }
        for k in (start..end).rev() {
            let i = self.var_at(k);
            if a[i] != b[i] {
                return b[i].cmp(&a[i]);
            }
        }
        Ordering::Equal
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        let n = a.len();
        match &self.kind {
            OrderKind::Lex => {
                for k in 0..n {
                    let i = self.var_at(k);
                    if a[i] != b[i] {
                        return a[i].cmp(&b[i]);
                    }
                }
                Ordering::Equal
            }
            OrderKind::GrevLex => self.grevlex_range(a, b, 0, n),
            OrderKind::Product(blocks) => {
                let mut start = 0;
                for &len in blocks {
                    let end = (start + len).min(n);
                    let o = self.grevlex_range(a, b, start, end);
                    if o != Ordering::Equal {
                        return o;
                    }
                    start = end;
                }
                if start < n {
                    self.grevlex_range(a, b, start, n)
                } else {
                    Ordering::Equal
                }
            }
        }
    }
}

impl Default for MonomialOrder {
    fn default() -> Self {
        MonomialOrder::grevlex()
    }
}
