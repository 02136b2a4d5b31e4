//! Exact projective linear algebra: points, hyperplanes, rank, spans,
//! incidence, general-position audits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{dot, lex_cmp, vec_eq, Scalar};

/// A point of `P^d`: homogeneous coordinate vector of length `d+1`, stored in
/// canonical form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProjectivePoint<S: Scalar> {
    coords: Vec<S>,
}

/// A hyperplane of `P^d`: dual coordinate vector, same canonical form as a
/// point. A point is incident iff the dot product of representatives is zero.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Hyperplane<S: Scalar> {
    coeffs: Vec<S>,
}

/// Canonical representative of the projective class of `v`.
///
/// Idempotent, and `normalize(lambda * v) == normalize(v)` for nonzero
/// `lambda`.
pub fn normalize<S: Scalar>(mut v: Vec<S>) -> Result<ProjectivePoint<S>> {
    if v.len() < 2 {
        return Err(Error::Parse("projective point needs >= 2 coordinates".into()));
    }
    if !S::canonicalize(&mut v) {
        return Err(Error::ZeroVector);
    }
    Ok(ProjectivePoint { coords: v })
}

impl<S: Scalar> ProjectivePoint<S> {
    pub fn new(v: Vec<S>) -> Result<Self> {
        normalize(v)
    }

    pub fn from_i64(v: &[i64]) -> Self {
        normalize(v.iter().map(|&x| S::from_i64(x)).collect()).expect("nonzero vector")
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        lex_cmp(&self.coords, &other.coords)
    }
}

impl<S: Scalar> PartialEq for ProjectivePoint<S> {
    fn eq(&self, other: &Self) -> bool {
        vec_eq(&self.coords, &other.coords)
    }
}

impl<S: Scalar> Hyperplane<S> {
    pub fn new(v: Vec<S>) -> Result<Self> {
        let p = normalize(v)?;
        Ok(Hyperplane { coeffs: p.coords })
    }

    pub fn from_i64(v: &[i64]) -> Self {
        Hyperplane {
            coeffs: ProjectivePoint::<S>::from_i64(v).coords,
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Exact (or tolerance) incidence test.
    pub fn contains(&self, p: &ProjectivePoint<S>) -> bool {
        dot(&self.coeffs, p.coords()).is_negligible()
    }

    pub fn eval(&self, p: &ProjectivePoint<S>) -> S {
        dot(&self.coeffs, p.coords())
    }

    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        lex_cmp(&self.coeffs, &other.coeffs)
    }
}

impl<S: Scalar> PartialEq for Hyperplane<S> {
    fn eq(&self, other: &Self) -> bool {
        vec_eq(&self.coeffs, &other.coeffs)
    }
}

fn check_same_dim<S: Scalar>(points: &[ProjectivePoint<S>]) -> Result<usize> {
    let d = points
        .first()
        .ok_or_else(|| Error::Parse("empty point list".into()))?
        .dim();
    for p in points {
        if p.dim() != d {
            return Err(Error::MixedDimensions {
                expected: d,
                found: p.dim(),
            });
        }
    }
    Ok(d)
}

/// Rank of the matrix of canonical representatives, by fraction-free
/// elimination.
pub fn rank<S: Scalar>(points: &[ProjectivePoint<S>]) -> Result<usize> {
    if points.is_empty() {
        return Ok(0);
    }
    check_same_dim(points)?;
    let rows: Vec<Vec<S>> = points.iter().map(|p| p.coords.clone()).collect();
    Ok(linalg::rank(&rows))
}

/// The unique hyperplane through `d` independent points of `P^d`, canonical.
pub fn span_hyperplane<S: Scalar>(points: &[ProjectivePoint<S>]) -> Result<Hyperplane<S>> {
    let d = check_same_dim(points)?;
    if points.len() != d {
        return Err(Error::Parse(format!(
            "span_hyperplane in P^{d} takes exactly {d} points, got {}",
            points.len()
        )));
    }
    let rows: Vec<Vec<S>> = points.iter().map(|p| p.coords.clone()).collect();
    let r = linalg::rank(&rows);
    if r < d {
        return Err(Error::DegenerateSpan { rank: r, needed: d });
    }
    let ns = linalg::nullspace(&rows, d + 1);
    debug_assert_eq!(ns.len(), 1);
    Hyperplane::new(ns.into_iter().next().unwrap())
}

/// Same hyperplane by cofactor expansion of the `(d+1) x (d+1)` determinant
/// with a symbolic first row. Kept as an independent route for the nullspace
/// result.
pub fn span_hyperplane_cofactor<S: Scalar>(points: &[ProjectivePoint<S>]) -> Result<Hyperplane<S>> {
    let d = check_same_dim(points)?;
    if points.len() != d {
        return Err(Error::Parse(format!(
            "span_hyperplane in P^{d} takes exactly {d} points, got {}",
            points.len()
        )));
    }
    let mut coeffs = Vec::with_capacity(d + 1);
    for i in 0..=d {
        let minor: Vec<Vec<S>> = points
            .iter()
            .map(|p| {
                p.coords
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let det = linalg::determinant(&minor);
        coeffs.push(if i % 2 == 0 { det } else { -det });
    }
    if coeffs.iter().all(|c| c.is_negligible()) {
        return Err(Error::DegenerateSpan { rank: 0, needed: d });
    }
    Hyperplane::new(coeffs)
}

/// True iff `d+1` points of `P^d` lie in a common hyperplane, i.e. the
/// determinant of representatives vanishes, i.e. their rank is at most `d`.
pub fn cohyperplanar<S: Scalar>(points: &[ProjectivePoint<S>]) -> Result<bool> {
    let d = check_same_dim(points)?;
    if points.len() != d + 1 {
        return Err(Error::Parse(format!(
            "cohyperplanar in P^{d} takes exactly {} points, got {}",
            d + 1,
            points.len()
        )));
    }
    Ok(rank(points)? <= d)
}

/// A labeled list of pairwise distinct points sharing one dimension.
#[derive(Clone, Debug)]
pub struct PointConfig<S: Scalar> {
    pub points: Vec<ProjectivePoint<S>>,
    pub label: String,
}

impl<S: Scalar> PointConfig<S> {
    pub fn new(points: Vec<ProjectivePoint<S>>, label: impl Into<String>) -> Result<Self> {
        check_same_dim(&points)?;
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if points[i] == points[j] {
                    return Err(Error::DegenerateConfig(format!(
                        "points {i} and {j} coincide"
                    )));
                }
            }
        }
        Ok(PointConfig {
            points,
            label: label.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The dimension-`d` general position hypothesis: every `d`-subset spans
    /// (no `d` points in a flat of codimension 2). In `P^4` this is "no four
    /// coplanar", in `P^3` "no three collinear", in `P^2` "points distinct".
    pub fn check_general_position(&self) -> Result<()> {
        let d = self.dim();
        let idx: Vec<usize> = (0..self.len()).collect();
        let mut bad = None;
        for_each_subset(&idx, d, &mut |sub| {
            if bad.is_none() {
                let pts: Vec<_> = sub.iter().map(|&i| self.points[i].clone()).collect();
                if rank(&pts).unwrap() < d {
                    bad = Some(sub.to_vec());
                }
            }
        });
        match bad {
            Some(t) => Err(Error::GeneralPositionViolation(format!(
                "points {t:?} span a flat of codimension > 1"
            ))),
            None => Ok(()),
        }
    }

    pub fn spans(&self) -> bool {
        rank(&self.points).unwrap() == self.dim() + 1
    }
}

/// Spanning and worst-coplanarity audit of a configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralPositionReport {
    pub spans: bool,
    /// Some `d`-subset of rank at most `d-1` (a coplanar 4-subset in `P^4`),
    /// if one exists. Exhaustive over subsets.
    pub worst_coplanar_tuple: Option<Vec<usize>>,
}

pub fn general_position_report<S: Scalar>(config: &PointConfig<S>) -> GeneralPositionReport {
    let d = config.dim();
    let spans = config.spans();
    let idx: Vec<usize> = (0..config.len()).collect();
    let mut worst = None;
    for_each_subset(&idx, d, &mut |sub| {
        if worst.is_none() {
            let pts: Vec<_> = sub.iter().map(|&i| config.points[i].clone()).collect();
            if rank(&pts).unwrap() <= d - 1 {
                worst = Some(sub.to_vec());
            }
        }
    });
    GeneralPositionReport {
        spans,
        worst_coplanar_tuple: worst,
    }
}

/// Visit every `k`-subset of `items` in lexicographic order.
pub fn for_each_subset<T: Copy>(items: &[T], k: usize, f: &mut impl FnMut(&[T])) {
    let n = items.len();
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf: Vec<T> = idx.iter().map(|&i| items[i]).collect();
    loop {
        f(&buf);
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in (i + 1)..k {
            idx[j] = idx[j - 1] + 1;
        }
        for j in i..k {
            buf[j] = items[idx[j]];
        }
    }
}

/// All `k`-subsets of `0..n` as index vectors, lexicographic.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let idx: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    for_each_subset(&idx, k, &mut |s| out.push(s.to_vec()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    type P = ProjectivePoint<Rat>;

    fn pt(v: &[i64]) -> P {
        P::from_i64(v)
    }

    fn e(i: usize) -> P {
        let mut v = [0i64; 5];
        v[i] = 1;
        pt(&v)
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(pt(&[2, 4, 6, 8, 10]), pt(&[1, 2, 3, 4, 5]));
        assert_eq!(pt(&[0, 0, 0, 0, -3]), pt(&[0, 0, 0, 0, 1]));
        let z: Result<P> = normalize(vec![Rat::from_i64(0); 5]);
        assert!(matches!(z, Err(Error::ZeroVector)));
    }

    #[test]
    fn normalize_is_idempotent() {
        let p = pt(&[3, -6, 9, 0, 12]);
        let again = normalize(p.coords().to_vec()).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn rank_examples() {
        let basis: Vec<P> = (0..5).map(e).collect();
        assert_eq!(rank(&basis).unwrap(), 5);
        assert_eq!(rank(&[e(0), e(0)]).unwrap(), 1);
    }

    #[test]
    fn rank_rejects_mixed_dimensions() {
        let p3 = pt(&[1, 0, 0, 0]);
        let p4 = e(0);
        assert!(matches!(
            rank(&[p4, p3]),
            Err(Error::MixedDimensions { .. })
        ));
    }

    #[test]
    fn span_hyperplane_of_basis() {
        let h = span_hyperplane(&[e(0), e(1), e(2), e(3)]).unwrap();
        assert_eq!(h, Hyperplane::from_i64(&[0, 0, 0, 0, 1]));
        // repeated point drops the rank, in P^3 and in P^4
        let f = |v: &[i64]| pt(v);
        assert!(matches!(
            span_hyperplane(&[f(&[1, 0, 0, 0]), f(&[0, 1, 0, 0]), f(&[1, 0, 0, 0])]),
            Err(Error::DegenerateSpan { .. })
        ));
        assert!(matches!(
            span_hyperplane(&[e(0), e(1), e(2), e(0)]),
            Err(Error::DegenerateSpan { .. })
        ));
    }

    #[test]
    fn span_routes_agree_and_are_incident() {
        let pts = [
            pt(&[1, 2, 3, 4, 5]),
            pt(&[1, -1, 0, 2, 2]),
            pt(&[0, 1, 1, 1, 3]),
            pt(&[2, 0, 0, 1, -1]),
        ];
        let h1 = span_hyperplane(&pts).unwrap();
        let h2 = span_hyperplane_cofactor(&pts).unwrap();
        assert_eq!(h1, h2);
        for p in &pts {
            assert!(h1.contains(p));
        }
    }

    #[test]
    fn cohyperplanar_examples() {
        let basis: Vec<P> = (0..5).map(e).collect();
        assert!(!cohyperplanar(&basis).unwrap());
        let rep = [e(0), e(1), e(2), e(3), e(0)];
        assert!(cohyperplanar(&rep).unwrap());
    }

    #[test]
    fn general_position_of_basis() {
        let cfg = PointConfig::new((0..5).map(e).collect(), "basis").unwrap();
        let rep = general_position_report(&cfg);
        assert!(rep.spans);
        assert!(rep.worst_coplanar_tuple.is_none());
    }

    #[test]
    fn six_points_in_hyperplane_do_not_span() {
        let pts: Vec<P> = (1..=6).map(|t: i64| pt(&[1, t, t * t, t * t * t, 0])).collect();
        let cfg = PointConfig::new(pts, "flat").unwrap();
        let rep = general_position_report(&cfg);
        assert!(!rep.spans);
    }

    #[test]
    fn subset_enumeration_counts() {
        assert_eq!(subsets(6, 4).len(), 15);
        assert_eq!(subsets(5, 5).len(), 1);
        assert_eq!(subsets(4, 5).len(), 0);
    }

    #[test]
    fn cohyperplanarity_routes_agree() {
        // three routes: rank <= d, vanishing determinant, and the public
        // predicate; 500 random instances in P^3 and P^4
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for trial in 0..500 {
            let d = if trial % 2 == 0 { 3 } else { 4 };
            let pts: Vec<P> = (0..=d)
                .map(|_| {
                    // small range so degenerate tuples actually occur
                    normalize(
                        (0..=d)
                            .map(|_| Rat::from_i64(rng.gen_range(-2..=2)))
                            .collect(),
                    )
                })
                .filter_map(|r| r.ok())
                .collect();
            if pts.len() != d + 1 {
                continue;
            }
            let via_rank = rank(&pts).unwrap() <= d;
            let rows: Vec<Vec<Rat>> = pts.iter().map(|p| p.coords().to_vec()).collect();
            let via_det = crate::linalg::determinant(&rows).is_zero();
            let via_pred = cohyperplanar(&pts).unwrap();
            assert_eq!(via_rank, via_det, "trial {trial}");
            assert_eq!(via_det, via_pred, "trial {trial}");
        }
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use crate::scalar::Rat;
    use proptest::prelude::*;

    fn rat_strategy() -> impl Strategy<Value = Rat> {
        (-30i64..=30, 1i64..=9).prop_map(|(n, d)| Rat::from_ratio(n, d))
    }

    fn nonzero_rat() -> impl Strategy<Value = Rat> {
        rat_strategy().prop_filter("nonzero", |x| !num_traits::Zero::is_zero(x))
    }

    fn vector_strategy() -> impl Strategy<Value = Vec<Rat>> {
        proptest::collection::vec(rat_strategy(), 5)
            .prop_filter("nonzero vector", |v| {
                v.iter().any(|x| !num_traits::Zero::is_zero(x))
            })
    }

    proptest! {
        #[test]
        fn normalize_ignores_scaling(v in vector_strategy(), lambda in nonzero_rat()) {
            let scaled: Vec<Rat> = v.iter().map(|x| x.clone() * lambda.clone()).collect();
            prop_assert_eq!(normalize(v).unwrap(), normalize(scaled).unwrap());
        }

        #[test]
        fn rank_ignores_permutation_and_rescaling(
            vs in proptest::collection::vec(vector_strategy(), 3..6),
            lambdas in proptest::collection::vec(nonzero_rat(), 6),
            shift in 0usize..6,
        ) {
            let pts: Vec<ProjectivePoint<Rat>> =
                vs.iter().map(|v| normalize(v.clone()).unwrap()).collect();
            let base = rank(&pts).unwrap();
            let mut rotated: Vec<ProjectivePoint<Rat>> = Vec::new();
            for i in 0..pts.len() {
                let j = (i + shift) % pts.len();
                let scaled: Vec<Rat> = pts[j]
                    .coords()
                    .iter()
                    .map(|x| x.clone() * lambdas[j].clone())
                    .collect();
                rotated.push(normalize(scaled).unwrap());
            }
            prop_assert_eq!(rank(&rotated).unwrap(), base);
        }

        #[test]
        fn span_output_is_incident_with_inputs(
            vs in proptest::collection::vec(vector_strategy(), 4)
        ) {
            let pts: Vec<ProjectivePoint<Rat>> =
                vs.iter().map(|v| normalize(v.clone()).unwrap()).collect();
            if let Ok(h) = span_hyperplane(&pts) {
                for p in &pts {
                    prop_assert!(h.contains(p));
                }
            }
        }
    }
}
