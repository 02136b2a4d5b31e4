//! Minimal polynomial arithmetic: sparse bivariate polynomials in `(x, y)`
//! for pulling quadrics back to the affine curve, and dense univariate
//! polynomials for the eliminant computations.

use std::collections::BTreeMap;

use crate::scalar::Scalar;

/// Sparse bivariate polynomial; key is `(x_degree, y_degree)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly2<S: Scalar> {
    terms: BTreeMap<(u32, u32), S>,
}

impl<S: Scalar> Poly2<S> {
    pub fn zero() -> Self {
        Poly2 {
            terms: BTreeMap::new(),
        }
    }

    pub fn term(c: S, dx: u32, dy: u32) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert((dx, dy), c);
        }
        Poly2 { terms: t }
    }

    pub fn constant(c: S) -> Self {
        Self::term(c, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_negligible())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.terms.clone();
        for (k, c) in &other.terms {
            let entry = out.entry(*k).or_insert_with(S::zero);
            *entry = entry.clone() + c.clone();
            if entry.is_zero() {
                out.remove(k);
            }
        }
        Poly2 { terms: out }
    }

    pub fn neg(&self) -> Self {
        Poly2 {
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out: BTreeMap<(u32, u32), S> = BTreeMap::new();
        for ((dx1, dy1), c1) in &self.terms {
            for ((dx2, dy2), c2) in &other.terms {
                let k = (dx1 + dx2, dy1 + dy2);
                let entry = out.entry(k).or_insert_with(S::zero);
                *entry = entry.clone() + c1.clone() * c2.clone();
            }
        }
        out.retain(|_, c| !c.is_zero());
        Poly2 { terms: out }
    }

    /// Reduce modulo `y^2 - (x^3 + a x + b)` until the `y`-degree is at most 1.
    pub fn reduce_mod_curve(&self, a: &S, b: &S) -> Self {
        let f = Poly2::term(S::one(), 3, 0)
            .add(&Poly2::term(a.clone(), 1, 0))
            .add(&Poly2::term(b.clone(), 0, 0));
        let mut cur = self.clone();
        loop {
            let mut rewritten = Poly2::zero();
            let mut changed = false;
            for ((dx, dy), c) in &cur.terms {
                if *dy >= 2 {
                    changed = true;
                    let rest = Poly2::term(c.clone(), *dx, dy - 2);
                    rewritten = rewritten.add(&rest.mul(&f));
                } else {
                    rewritten = rewritten.add(&Poly2::term(c.clone(), *dx, *dy));
                }
            }
            cur = rewritten;
            if !changed {
                return cur;
            }
        }
    }
}

/// Dense univariate polynomial, coefficients ascending, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly1<S: Scalar> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Poly1<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly1 { coeffs }
    }

    pub fn zero() -> Self {
        Poly1 { coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_negligible())
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn eval(&self, x: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[S], i: usize| v.get(i).cloned().unwrap_or_else(S::zero);
        Poly1::new(
            (0..n)
                .map(|i| get(&self.coeffs, i) + get(&other.coeffs, i))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[S], i: usize| v.get(i).cloned().unwrap_or_else(S::zero);
        Poly1::new(
            (0..n)
                .map(|i| get(&self.coeffs, i) - get(&other.coeffs, i))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly1::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly1::new(out)
    }

    /// Euclidean division; panics on division by the zero polynomial.
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.coeffs.is_empty(), "division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let d = divisor.coeffs.len();
        if rem.len() < d {
            return (Poly1::zero(), self.clone());
        }
        let lead = divisor.coeffs.last().unwrap().clone();
        let mut quot = vec![S::zero(); rem.len() - d + 1];
        for i in (0..quot.len()).rev() {
            let c = rem[i + d - 1].clone() / lead.clone();
            quot[i] = c.clone();
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - c.clone() * dc.clone();
            }
        }
        (Poly1::new(quot), Poly1::new(rem))
    }

    /// `x - r`.
    pub fn linear_root(r: &S) -> Self {
        Poly1::new(vec![-r.clone(), S::one()])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    fn r(n: i64) -> Rat {
        Rat::from_i64(n)
    }

    #[test]
    fn reduce_kills_curve_relation() {
        // y^2 - x^3 - 2x - 3 reduces to zero mod itself
        let p = Poly2::term(r(1), 0, 2)
            .sub(&Poly2::term(r(1), 3, 0))
            .sub(&Poly2::term(r(2), 1, 0))
            .sub(&Poly2::constant(r(3)));
        assert!(p.reduce_mod_curve(&r(2), &r(3)).is_zero());
    }

    #[test]
    fn divrem_splits_roots() {
        // (x - 1)(x - 2)(x + 3) = x^3 - 7x + 6
        let p = Poly1::new(vec![r(6), r(-7), r(0), r(1)]);
        let (q, rem) = p.divrem(&Poly1::linear_root(&r(1)));
        assert!(rem.is_zero());
        let (q2, rem2) = q.divrem(&Poly1::linear_root(&r(2)));
        assert!(rem2.is_zero());
        assert_eq!(q2, Poly1::linear_root(&r(-3)));
    }
}
