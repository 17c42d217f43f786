use super::{Poly, PolyError};

/// `(d f_i / d x_j)` for the listed variables.
pub fn jacobian_matrix(fs: &[Poly], vars: &[usize]) -> Vec<Vec<Poly>> {
    fs.iter().map(|f| vars.iter().map(|&j| f.partial(j)).collect()).collect()
}

fn check_char_zero(fs: &[Poly]) -> Result<(), PolyError> {
    if let Some(f) = fs.first() {
        let p = f.field().characteristic();
        if p != 0 {
            return Err(PolyError::PositiveCharacteristic(p));
        }
    }
    Ok(())
}

/// Fraction-free (Bareiss) elimination in place; returns the rank and the
/// last pivot, which is the determinant when the matrix is square and of
/// full rank (up to the sign of the row swaps, also returned).
fn bareiss(m: &mut [Vec<Poly>]) -> (usize, Option<Poly>, bool) {
    let rows = m.len();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    let mut prev: Option<Poly> = None;
    let mut swapped = false;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        if p != rank {
            m.swap(p, rank);
            swapped = !swapped;
        }
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let num = &(&m[rank][col] * &m[i][j]) - &(&m[i][col] * &m[rank][j]);
                m[i][j] = match &prev {
                    Some(d) => num.div_exact(d).expect("Bareiss division is exact"),
                    None => num,
                };
            }
            m[i][col] = m[i][col].ring().zero();
        }
        prev = Some(m[rank][col].clone());
        rank += 1;
    }
    (rank, prev, swapped)
}

/// Rank of the Jacobian of `fs` with respect to every ring variable, over
/// the rational function field. In characteristic zero this is the
/// transcendence degree of the field generated by `fs`.
pub fn jacobian_rank(fs: &[Poly]) -> Result<usize, PolyError> {
    let vars: Vec<usize> = match fs.first() {
        Some(f) => (0..f.ring().nvars()).collect(),
        None => return Ok(0),
    };
    jacobian_rank_wrt(fs, &vars)
}

pub fn jacobian_rank_wrt(fs: &[Poly], vars: &[usize]) -> Result<usize, PolyError> {
    check_char_zero(fs)?;
    let mut m = jacobian_matrix(fs, vars);
    Ok(bareiss(&mut m).0)
}

/// Determinant of a square polynomial matrix.
pub fn determinant(m: &[Vec<Poly>]) -> Option<Poly> {
    let n = m.len();
    let ring = m.first()?.first()?.ring().clone();
    if m.iter().any(|r| r.len() != n) {
        return None;
    }
    let mut work = m.to_vec();
    let (rank, last, swapped) = bareiss(&mut work);
    if rank < n {
        return Some(ring.zero());
    }
    let d = last.unwrap();
    Some(if swapped { -&d } else { d })
}

/// Division-free elimination over a domain presented as a quotient: every
/// entry is passed through `reduce` (a normal form) after each update and
/// an entry counts as zero when its reduction is zero.
pub fn rank_by_elimination<F>(matrix: &[Vec<Poly>], reduce: F) -> usize
where
    F: Fn(&Poly) -> Poly,
{
    let mut m: Vec<Vec<Poly>> = matrix.iter().map(|r| r.iter().map(&reduce).collect()).collect();
    let rows = m.len();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(p, rank);
        for i in rank + 1..rows {
            if m[i][col].is_zero() {
                continue;
            }
            for j in col + 1..cols {
                let v = &(&m[rank][col] * &m[i][j]) - &(&m[i][col] * &m[rank][j]);
                m[i][j] = reduce(&v);
            }
            m[i][col] = m[i][col].ring().zero();
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::poly::PolyRing;

    fn ring() -> PolyRing {
        PolyRing::new(&Field::rationals(), &["X1", "X2"]).unwrap()
    }

    #[test]
    fn identity_has_full_rank() {
        let r = ring();
        assert_eq!(jacobian_rank(&[r.var(0), r.var(1)]).unwrap(), 2);
    }

    #[test]
    fn powers_of_one_variable() {
        let r = ring();
        let fs = [r.parse("X1^2").unwrap(), r.parse("X1^3").unwrap()];
        assert_eq!(jacobian_rank(&fs).unwrap(), 1);
    }

    #[test]
    fn danielewski_specialization_determinant() {
        let r = ring();
        let fs = [r.parse("1 + X2^2").unwrap(), r.parse("X1 - X2 + X1*X2^2").unwrap()];
        assert_eq!(jacobian_rank(&fs).unwrap(), 2);
        let det = determinant(&jacobian_matrix(&fs, &[0, 1])).unwrap();
        assert_eq!(det, r.parse("-2*X2*(1 + X2^2)").unwrap());
    }

    #[test]
    fn positive_characteristic_rejected() {
        let r = PolyRing::new(&Field::prime(3).unwrap(), &["X"]).unwrap();
        assert_eq!(jacobian_rank(&[r.var(0)]), Err(PolyError::PositiveCharacteristic(3)));
    }

    #[test]
    fn rank_invariant_under_unimodular_change() {
        let r = ring();
        let f = r.parse("X1^2 + X2").unwrap();
        let g = r.parse("X1*X2^3").unwrap();
        for (a, b, c, d) in [(1, 1, 0, 1), (2, 1, 1, 1), (1, -3, 0, 1), (0, 1, 1, 0)] {
            let p = &f.scale(&r.field().from_int(a)) + &g.scale(&r.field().from_int(b));
            let q = &f.scale(&r.field().from_int(c)) + &g.scale(&r.field().from_int(d));
            assert_eq!(jacobian_rank(&[p, q]).unwrap(), 2);
        }
        let dep = [f.clone(), &f * &f];
        assert_eq!(jacobian_rank(&dep).unwrap(), 1);
    }

    #[test]
    fn division_free_matches_bareiss() {
        let r = ring();
        let fs = [r.parse("X1 + X2^2").unwrap(), r.parse("X1^2 + 2*X1*X2^2 + X2^4").unwrap(), r.parse("X2").unwrap()];
        let m = jacobian_matrix(&fs, &[0, 1]);
        assert_eq!(rank_by_elimination(&m, |p| p.clone()), jacobian_rank(&fs).unwrap());
    }
}
