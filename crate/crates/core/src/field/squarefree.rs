use super::univariate as up;
use super::{BaseField, Field, Value};

/// Squarefree decomposition of a monic univariate polynomial over `Q` or
/// `F_p`: pairs `(f_i, i)` with `f = prod f_i^i`, each `f_i` squarefree,
/// monic and nonconstant. In characteristic `p` the `p`-th power part is
/// handled by taking `p`-th roots of coefficients (identity on `F_p`).
pub fn squarefree_decomposition(k: &Field, f: &[Value]) -> Vec<(Vec<Value>, u32)> {
    let mut out = Vec::new();
    decompose(k, &up::monic(k, f), 1, &mut out);
    out.sort_by_key(|(_, m)| *m);
    out
}

fn decompose(k: &Field, f: &[Value], scale: u32, out: &mut Vec<(Vec<Value>, u32)>) {
    if f.len() <= 1 {
        return;
    }
    let df = up::derivative(k, f);
    let mut c = up::gcd(k, f, &df);
    let mut w = up::div_exact(k, f, &c);
    let mut i = 1u32;
    while w.len() > 1 {
        let y = up::gcd(k, &w, &c);
        let fac = up::div_exact(k, &w, &y);
        if fac.len() > 1 {
            out.push((fac, i * scale));
        }
        w = y;
        c = up::div_exact(k, &c, &w);
        i += 1;
    }
    if c.len() > 1 {
        let p = match k.base() {
            BaseField::Prime(p) if k.parent().is_none() => p as usize,
            _ => unreachable!("nonconstant remainder in characteristic zero"),
        };
        let root: Vec<Value> = c.iter().step_by(p).cloned().collect();
        decompose(k, &root, scale * p as u32, out);
    }
}
