//! Ordinary-hyperplane counting in any dimension, projections, configuration
//! generators, and the desk-scale structure-detection pipeline.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dual_graph::{build_graph, Segment};
use crate::error::{Error, Result};
use crate::projective::{span_hyperplane, subsets, Hyperplane, PointConfig, ProjectivePoint};
use crate::quadrics::{grid_quadrics, quadrics_through, QuadricSpace};
use crate::scalar::Scalar;

/// Ordinary-hyperplane census of a configuration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrdinaryCount {
    pub n: usize,
    pub d: usize,
    /// Hyperplanes containing exactly `d` configuration points.
    pub ordinary: u64,
    /// All distinct spanned hyperplanes.
    pub total_hyperplanes: u64,
    /// `ordinary / n^(d-1)`.
    pub k: f64,
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// All distinct hyperplanes spanned by `d`-subsets, with incidence lists.
pub fn spanned_hyperplanes<S: Scalar>(
    config: &PointConfig<S>,
) -> Result<Vec<(Hyperplane<S>, Vec<usize>)>> {
    let d = config.dim();
    let pts = &config.points;
    let subs = subsets(pts.len(), d);
    let hvecs: Vec<Vec<S>> = subs
        .par_iter()
        .map(|sub| {
            let chosen: Vec<ProjectivePoint<S>> = sub.iter().map(|&i| pts[i].clone()).collect();
            span_hyperplane(&chosen).map(|h| h.coeffs().to_vec())
        })
        .collect::<Result<_>>()?;
    let groups = crate::scalar::cluster_canonical(&hvecs);
    groups
        .iter()
        .map(|g| {
            let h = Hyperplane::new(hvecs[g[0]].clone())?;
            let inc: Vec<usize> = (0..pts.len()).filter(|&i| h.contains(&pts[i])).collect();
            Ok((h, inc))
        })
        .collect()
}

/// Count hyperplanes incident with exactly `d` points, after the
/// dimension-`d` general position audit.
pub fn count_ordinary<S: Scalar>(config: &PointConfig<S>) -> Result<OrdinaryCount> {
    config.check_general_position()?;
    if !config.spans() {
        return Err(Error::DegenerateConfig(
            "configuration does not span the space".into(),
        ));
    }
    let d = config.dim();
    let n = config.len();
    let table = spanned_hyperplanes(config)?;
    let ordinary = table.iter().filter(|(_, inc)| inc.len() == d).count() as u64;
    Ok(OrdinaryCount {
        n,
        d,
        ordinary,
        total_hyperplanes: table.len() as u64,
        k: ordinary as f64 / (n as f64).powi(d as i32 - 1),
    })
}

/// Dimension-generic ordinary count for tiny instances (the conjecture
/// probe): refuses when the subset enumeration exceeds 10^7.
pub fn count_ordinary_generic_d<S: Scalar>(config: &PointConfig<S>) -> Result<OrdinaryCount> {
    let n = config.len();
    let d = config.dim();
    if binomial(n, d) > 10_000_000 {
        return Err(Error::InstanceTooLarge(format!(
            "C({n},{d}) = {} exceeds 10^7",
            binomial(n, d)
        )));
    }
    count_ordinary(config)
}

/// Project the configuration from its `p`-th point onto the first coordinate
/// hyperplane missing that point; hyperplanes through the centre correspond
/// bijectively to hyperplanes of the image.
pub fn project_from<S: Scalar>(config: &PointConfig<S>, p: usize) -> Result<PointConfig<S>> {
    let centre = &config.points[p];
    let d = config.dim();
    let axis = centre
        .coords()
        .iter()
        .position(|c| !c.is_negligible())
        .expect("canonical point has a nonzero coordinate");
    let imgs: Vec<ProjectivePoint<S>> = config
        .points
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != p)
        .map(|(_, q)| {
            let f = q.coords()[axis].clone() / centre.coords()[axis].clone();
            let v: Vec<S> = (0..=d)
                .filter(|&c| c != axis)
                .map(|c| q.coords()[c].clone() - f.clone() * centre.coords()[c].clone())
                .collect();
            ProjectivePoint::new(v)
        })
        .collect::<Result<_>>()?;
    PointConfig::new(imgs, format!("{}-proj{p}", config.label))
}

/// The trivial low-ordinary example: `n - 1` points on a normal rational
/// curve inside the solid `X4 = 0`, plus the point `(0:0:0:0:1)` off it.
pub fn generate_nrc_config<S: Scalar>(n: usize) -> Result<PointConfig<S>> {
    if n < 6 {
        return Err(Error::DegenerateConfig(
            "nrc configuration needs n >= 6".into(),
        ));
    }
    let mut pts: Vec<ProjectivePoint<S>> = (1..n as i64)
        .map(|t| {
            ProjectivePoint::new(vec![
                S::one(),
                S::from_i64(t),
                S::from_i64(t * t),
                S::from_i64(t * t * t),
                S::zero(),
            ])
        })
        .collect::<Result<_>>()?;
    pts.push(ProjectivePoint::from_i64(&[0, 0, 0, 0, 1]));
    let cfg = PointConfig::new(pts, format!("nrc-n{n}"))?;
    cfg.check_general_position()?;
    Ok(cfg)
}

/// Replace `k` points with random bounded-height rational points, re-checked
/// for general position. Deterministic in the seed; the replaced indices are
/// drawn from the same stream.
pub fn perturb<S: Scalar>(
    config: &PointConfig<S>,
    k: usize,
    seed: u64,
) -> Result<(PointConfig<S>, Vec<usize>)> {
    if k >= config.len() {
        return Err(Error::DegenerateConfig(format!(
            "cannot perturb {k} of {} points",
            config.len()
        )));
    }
    if k == 0 {
        return Ok((config.clone(), Vec::new()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = config.len();
    let dim = config.dim();
    let mut indices: Vec<usize> = Vec::new();
    while indices.len() < k {
        let i = rng.gen_range(0..n);
        if !indices.contains(&i) {
            indices.push(i);
        }
    }
    indices.sort_unstable();
    let mut points = config.points.clone();
    for &i in &indices {
        let mut placed = false;
        for _ in 0..200 {
            let cand = ProjectivePoint::new(
                (0..=dim)
                    .map(|_| S::from_i64(rng.gen_range(-9..=9)))
                    .collect::<Vec<S>>(),
            );
            let Ok(cand) = cand else { continue };
            let mut trial = points.clone();
            trial[i] = cand;
            let Ok(cfg) = PointConfig::new(trial.clone(), "trial") else {
                continue;
            };
            if cfg.check_general_position().is_ok() && cfg.spans() {
                points = trial;
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::RetriesExhausted(format!(
                "perturbing point {i} under general position"
            )));
        }
    }
    let label = format!("{}-perturb{k}-seed{seed}", config.label);
    Ok((PointConfig::new(points, label)?, indices))
}

/// Outcome of the structure-detection pipeline.
#[derive(Clone, Debug)]
pub enum StructureVerdict<S: Scalar> {
    /// All but the outliers lie on the certificate hyperplane.
    HyperplaneConcentrated {
        hyperplane: Hyperplane<S>,
        outliers: Vec<usize>,
    },
    /// All but the outliers lie on every quadric of the 5-dimensional
    /// certificate space.
    QuadricIntersection {
        space: QuadricSpace<S>,
        outliers: Vec<usize>,
    },
    Inconclusive { reason: String },
}

/// Tuning knobs of the pipeline; the outlier budget is `c * max(K, 1)` with
/// `K` measured from the ordinary count.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DetectParams {
    pub c: u64,
    /// Cap on grid-extraction attempts before falling through.
    pub max_grid_attempts: usize,
}

impl Default for DetectParams {
    fn default() -> Self {
        DetectParams {
            c: 10,
            max_grid_attempts: 5000,
        }
    }
}

/// `count <= bound * max(K, 1)` with `K = v4 / n^3`, decided exactly.
fn within_k_budget(count: usize, bound: u64, v4: u64, n: usize) -> bool {
    let n3 = (n as u128).pow(3);
    (count as u128) * n3 <= bound as u128 * std::cmp::max(v4 as u128, n3)
}

fn quadric_outliers<S: Scalar>(config: &PointConfig<S>, space: &QuadricSpace<S>) -> Vec<usize> {
    (0..config.len())
        .filter(|&i| !space.contains_point(&config.points[i]))
        .collect()
}

/// The structure-detection pipeline.
///
/// 1. If some spanned hyperplane misses at most `6 max(K,1)` points, report
///    hyperplane concentration.
/// 2. Otherwise build the dual graph and look for a verified 11-point grid
///    pattern: around rather-good segments first (the asymptotic mechanism),
///    then around plain good-edge runs, then around multiplicity-5 vertex
///    pairs. Every candidate is verified exhaustively before use; the grid's
///    five quadrics become the certificate if few enough points escape them.
/// 3. As a last stage, take the points incident to some multiplicity-5
///    vertex; if the quadrics through them form a 5-dimensional space, test
///    it the same way.
pub fn detect_structure<S: Scalar>(
    config: &PointConfig<S>,
    params: &DetectParams,
) -> Result<StructureVerdict<S>> {
    let n = config.len();
    let census = count_ordinary(config)?;
    let v4 = census.ordinary;

    // stage 1: hyperplane concentration
    let table = spanned_hyperplanes(config)?;
    let best = table
        .iter()
        .max_by_key(|(_, inc)| inc.len())
        .expect("at least one hyperplane");
    let missing = n - best.1.len();
    if within_k_budget(missing, 6, v4, n) {
        let outliers: Vec<usize> = (0..n).filter(|i| !best.1.contains(i)).collect();
        return Ok(StructureVerdict::HyperplaneConcentrated {
            hyperplane: best.0.clone(),
            outliers,
        });
    }

    // stage 2: grid certificates from the classified graph
    let graph = build_graph(config)?;
    let classes = graph.classify_edges()?;
    let mut line_order: Vec<usize> = (0..graph.lines.len()).collect();
    let sbad_count = |li: usize| -> usize { classes[li].iter().filter(|c| !c.rather_good).count() };
    let bad_count = |li: usize| -> usize { classes[li].iter().filter(|c| !c.good).count() };
    line_order.sort_by_key(|&li| (sbad_count(li), bad_count(li), graph.lines[li].triple));

    let mut attempts = 0usize;
    let try_grid = |grid: crate::quadrics::GridLabels<S>| -> Option<StructureVerdict<S>> {
        let space = grid_quadrics(&grid).ok()?;
        let outliers = quadric_outliers(config, &space);
        if within_k_budget(outliers.len(), params.c, v4, n) {
            Some(StructureVerdict::QuadricIntersection { space, outliers })
        } else {
            None
        }
    };
    for pass in 0..2 {
        for &li in &line_order {
            let mut segments: Vec<Segment> = if pass == 0 {
                graph.rather_good_segments(li, &classes)
            } else {
                graph.good_segments(li, &classes)
            };
            segments.sort_by_key(|s| (usize::MAX - s.slots.len(), s.slots[0]));
            for seg in segments {
                for &slot in &seg.slots {
                    if attempts >= params.max_grid_attempts {
                        break;
                    }
                    attempts += 1;
                    if let Ok(grid) = graph.eleven_around_edge(li, slot) {
                        if let Some(v) = try_grid(grid) {
                            return Ok(v);
                        }
                    }
                }
            }
        }
    }
    // vertex-pair candidates (no triangle structure required)
    'outer: for &li in &line_order {
        let line = &graph.lines[li];
        let m5: Vec<usize> = line
            .vertices
            .iter()
            .copied()
            .filter(|&v| graph.vertices[v].multiplicity() == 5)
            .collect();
        for i in 0..m5.len() {
            for j in (i + 1)..m5.len() {
                if attempts >= params.max_grid_attempts {
                    break 'outer;
                }
                attempts += 1;
                if let Ok(grid) = graph.eleven_from_vertex_pair(li, m5[i], m5[j]) {
                    if let Some(v) = try_grid(grid) {
                        return Ok(v);
                    }
                }
            }
        }
    }

    // stage 3: quadrics through the points witnessed by 5-point hyperplanes
    let structured = graph.structured_points();
    if structured.len() >= 10 {
        let pts: Vec<ProjectivePoint<S>> = structured
            .iter()
            .map(|&i| config.points[i].clone())
            .collect();
        let space = quadrics_through(config.dim(), &pts)?;
        if space.dimension() == 5 {
            let outliers = quadric_outliers(config, &space);
            if within_k_budget(outliers.len(), params.c, v4, n) {
                return Ok(StructureVerdict::QuadricIntersection { space, outliers });
            }
        }
    }

    Ok(StructureVerdict::Inconclusive {
        reason: format!(
            "no hyperplane concentration, and no verified grid within {attempts} attempts \
             ({} structured points)",
            structured.len()
        ),
    })
}

pub fn detect_structure_default<S: Scalar>(
    config: &PointConfig<S>,
) -> Result<StructureVerdict<S>> {
    detect_structure(config, &DetectParams::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{count_ordinary_group, exact_cyclic_config};
    use crate::quadrics::curve_quadrics;
    use crate::scalar::Rat;

    #[test]
    fn nrc_counts_choose_three() {
        for n in [7usize, 10] {
            let cfg = generate_nrc_config::<Rat>(n).unwrap();
            let c = count_ordinary(&cfg).unwrap();
            assert_eq!(c.ordinary, binomial(n - 1, 3) as u64, "n = {n}");
            // the solid X4 = 0 holds all curve points and is not ordinary
            assert_eq!(c.total_hyperplanes, binomial(n - 1, 3) as u64 + 1);
        }
    }

    #[test]
    fn simplex_has_d_plus_one_ordinary_hyperplanes() {
        let pts: Vec<ProjectivePoint<Rat>> = (0..5)
            .map(|i| {
                let mut v = [0i64; 5];
                v[i] = 1;
                ProjectivePoint::from_i64(&v)
            })
            .collect();
        let cfg = PointConfig::new(pts, "simplex").unwrap();
        let c = count_ordinary(&cfg).unwrap();
        assert_eq!(c.ordinary, 5);
        assert_eq!(c.total_hyperplanes, 5);
    }

    #[test]
    fn elliptic_counts_match_group_model() {
        for n in [6usize, 7, 8, 9] {
            let cfg = exact_cyclic_config::<Rat>(n).unwrap();
            let c = count_ordinary(&cfg.config).unwrap();
            assert_eq!(c.ordinary, count_ordinary_group(n), "n = {n}");
        }
    }

    #[test]
    fn projection_preserves_centred_incidences() {
        let cfg = exact_cyclic_config::<Rat>(7).unwrap();
        let img = project_from(&cfg.config, 0).unwrap();
        assert_eq!(img.dim(), 3);
        assert_eq!(img.len(), 6);
        img.check_general_position().unwrap();

        // ordinary solids through the centre match ordinary planes of the image
        let census3 = count_ordinary(&img).unwrap();
        let table4 = spanned_hyperplanes(&cfg.config).unwrap();
        let through_centre_ordinary = table4
            .iter()
            .filter(|(_, inc)| inc.len() == 4 && inc.contains(&0))
            .count() as u64;
        assert_eq!(census3.ordinary, through_centre_ordinary);
    }

    #[test]
    fn double_projection_lands_on_a_cubic() {
        let cfg = exact_cyclic_config::<Rat>(8).unwrap();
        let img3 = project_from(&cfg.config, 0).unwrap();
        let img2 = project_from(&img3, 0).unwrap();
        assert_eq!(img2.dim(), 2);
        let rows: Vec<Vec<Rat>> = img2
            .points
            .iter()
            .map(|p| crate::quadrics::monomial_row(p, 3))
            .collect();
        let ns = crate::linalg::nullspace(&rows, 10);
        assert!(!ns.is_empty());
    }

    #[test]
    fn perturb_is_deterministic_and_identity_at_zero() {
        let cfg = exact_cyclic_config::<Rat>(9).unwrap();
        let (same, idx) = perturb(&cfg.config, 0, 7).unwrap();
        assert!(idx.is_empty());
        assert_eq!(same.points, cfg.config.points);
        let (a, ia) = perturb(&cfg.config, 2, 0).unwrap();
        let (b, ib) = perturb(&cfg.config, 2, 0).unwrap();
        assert_eq!(ia, ib);
        assert_eq!(a.points, b.points);
        let (c, ic) = perturb(&cfg.config, 2, 1).unwrap();
        assert!(ic != ia || c.points != a.points);
    }

    #[test]
    fn perturbing_elliptic_increases_ordinary_count() {
        let cfg = exact_cyclic_config::<Rat>(12).unwrap();
        let base = count_ordinary(&cfg.config).unwrap();
        let (pert, _) = perturb(&cfg.config, 2, 0).unwrap();
        let after = count_ordinary(&pert).unwrap();
        assert!(after.ordinary > base.ordinary);
    }

    #[test]
    fn detect_nrc_is_hyperplane_concentrated() {
        let cfg = generate_nrc_config::<Rat>(10).unwrap();
        match detect_structure_default(&cfg).unwrap() {
            StructureVerdict::HyperplaneConcentrated { outliers, .. } => {
                assert_eq!(outliers, vec![9]);
            }
            other => panic!("unexpected verdict {other:?}"),
        }
    }

    #[test]
    fn detect_unperturbed_elliptic_twelve() {
        let cfg = exact_cyclic_config::<Rat>(12).unwrap();
        match detect_structure_default(&cfg.config).unwrap() {
            StructureVerdict::QuadricIntersection { space, outliers } => {
                assert!(outliers.is_empty());
                let cq = curve_quadrics(&cfg.curve).unwrap();
                assert!(space.same_span(&cq));
            }
            other => panic!("unexpected verdict {other:?}"),
        }
    }

    #[test]
    fn detect_perturbed_elliptic_twelve() {
        let cfg = exact_cyclic_config::<Rat>(12).unwrap();
        let (pert, idx) = perturb(&cfg.config, 2, 0).unwrap();
        match detect_structure_default(&pert).unwrap() {
            StructureVerdict::QuadricIntersection { space, outliers } => {
                assert_eq!(outliers, idx);
                for (i, p) in pert.points.iter().enumerate() {
                    assert_eq!(space.contains_point(p), !idx.contains(&i));
                }
            }
            other => panic!("unexpected verdict {other:?}"),
        }
    }

    #[test]
    fn generic_dimension_count_on_p5() {
        // simplex in P^5: all 6 hyperplanes ordinary
        let pts: Vec<ProjectivePoint<Rat>> = (0..6)
            .map(|i| {
                let mut v = [0i64; 6];
                v[i] = 1;
                ProjectivePoint::from_i64(&v)
            })
            .collect();
        let cfg = PointConfig::new(pts, "simplex5").unwrap();
        let c = count_ordinary_generic_d(&cfg).unwrap();
        assert_eq!(c.ordinary, 6);

        // random 10 points in P^5: every spanned hyperplane ordinary
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let cfg = loop {
            let pts: Vec<ProjectivePoint<Rat>> = (0..10)
                .map(|_| {
                    ProjectivePoint::new(
                        (0..6).map(|_| Rat::from_i64(rng.gen_range(-9..=9))).collect(),
                    )
                    .unwrap()
                })
                .collect();
            if let Ok(cfg) = PointConfig::new(pts, "random10-p5") {
                if cfg.check_general_position().is_ok() && cfg.spans() {
                    break cfg;
                }
            }
        };
        let c = count_ordinary_generic_d(&cfg).unwrap();
        assert_eq!(c.ordinary, binomial(10, 5) as u64);
        assert_eq!(c.total_hyperplanes, binomial(10, 5) as u64);

        // quadrics through 9 generic points of P^5: C(7,2) - 9
        let space = quadrics_through(5, &cfg.points[..9].to_vec()).unwrap();
        assert_eq!(space.dimension(), 21 - 9);
    }

    #[test]
    fn instance_guard_rejects_large_generic_input() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<ProjectivePoint<Rat>> = (0..40)
            .map(|_| {
                ProjectivePoint::new(
                    (0..10)
                        .map(|_| Rat::from_i64(rng.gen_range(-50..=50)))
                        .collect(),
                )
                .unwrap()
            })
            .collect();
        let cfg = PointConfig::new(pts, "big").unwrap();
        assert!(matches!(
            count_ordinary_generic_d(&cfg),
            Err(Error::InstanceTooLarge(_))
        ));
    }
}
