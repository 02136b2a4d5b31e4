//! Small dense linear algebra over a [`Scalar`] field.
//!
//! Rank uses fraction-free Bareiss elimination: on (row-normalized) integer
//! input every intermediate entry is a minor of the input, so exact mode never
//! grows fractions and float mode keeps entries bounded, which is what makes
//! an absolute zero tolerance meaningful.

use crate::scalar::Scalar;

/// Rank by fraction-free (Bareiss-style) elimination with column pivoting.
pub fn rank<S: Scalar>(rows: &[Vec<S>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let nc = rows[0].len();
    let mut m: Vec<Vec<S>> = rows.to_vec();
    for row in m.iter_mut() {
        S::normalize_row(row);
    }
    let nr = m.len();
    let mut prev = S::one();
    let mut r = 0usize;
    for c in 0..nc {
        if r == nr {
            break;
        }
        let mut piv = None;
        for i in r..nr {
            if !m[i][c].is_negligible()
                && piv.is_none_or(|p: usize| m[i][c].abs_cmp(&m[p][c]).is_gt())
            {
                piv = Some(i);
            }
        }
        let Some(piv) = piv else { continue };
        m.swap(r, piv);
        for i in (r + 1)..nr {
            for j in (c + 1)..nc {
                let num = m[i][j].clone() * m[r][c].clone() - m[i][c].clone() * m[r][j].clone();
                m[i][j] = num / prev.clone();
            }
            m[i][c] = S::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Determinant by Laplace cofactor expansion. Exponential; intended for the
/// small (<= 6x6) matrices this crate works with, and as a route independent
/// of the elimination-based rank.
pub fn determinant<S: Scalar>(rows: &[Vec<S>]) -> S {
    let n = rows.len();
    debug_assert!(rows.iter().all(|r| r.len() == n));
    match n {
        0 => S::one(),
        1 => rows[0][0].clone(),
        2 => rows[0][0].clone() * rows[1][1].clone() - rows[0][1].clone() * rows[1][0].clone(),
        _ => {
            let mut acc = S::zero();
            for (i, row) in rows.iter().enumerate() {
                if row[0].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<S>> = rows
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i)
                    .map(|(_, r)| r[1..].to_vec())
                    .collect();
                let term = row[0].clone() * determinant(&minor);
                acc = if i % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<S: Scalar>(m: &mut Vec<Vec<S>>, nc: usize) -> Vec<usize> {
    for row in m.iter_mut() {
        S::normalize_row(row);
    }
    let nr = m.len();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..nc {
        if r == nr {
            break;
        }
        let mut piv = None;
        for i in r..nr {
            if !m[i][c].is_negligible()
                && piv.is_none_or(|p: usize| m[i][c].abs_cmp(&m[p][c]).is_gt())
            {
                piv = Some(i);
            }
        }
        let Some(piv) = piv else { continue };
        m.swap(r, piv);
        let p = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() / p.clone();
        }
        for i in 0..nr {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..nc {
                    m[i][j] = m[i][j].clone() - f.clone() * m[r][j].clone();
                }
                m[i][c] = S::zero();
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right nullspace `{x : M x = 0}`.
pub fn nullspace<S: Scalar>(rows: &[Vec<S>], nc: usize) -> Vec<Vec<S>> {
    let mut m: Vec<Vec<S>> = rows.to_vec();
    let pivots = rref(&mut m, nc);
    let free: Vec<usize> = (0..nc).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![S::zero(); nc];
            v[fc] = S::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[i][fc].clone();
            }
            v
        })
        .collect()
}

/// Solve `h = alpha * a + beta * b` for a vector known to lie in the span of
/// two independent vectors; uses the numerically largest 2x2 subsystem.
pub fn solve_in_plane<S: Scalar>(h: &[S], a: &[S], b: &[S]) -> (S, S) {
    let n = h.len();
    let mut best: Option<(usize, usize, S)> = None;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = a[i].clone() * b[j].clone() - a[j].clone() * b[i].clone();
            if best.as_ref().is_none_or(|(_, _, bd)| d.abs_cmp(bd).is_gt()) {
                best = Some((i, j, d));
            }
        }
    }
    let (i, j, d) = best.expect("vectors of length >= 2");
    debug_assert!(!d.is_negligible(), "basis vectors not independent");
    let alpha = (h[i].clone() * b[j].clone() - h[j].clone() * b[i].clone()) / d.clone();
    let beta = (a[i].clone() * h[j].clone() - a[j].clone() * h[i].clone()) / d;
    (alpha, beta)
}
