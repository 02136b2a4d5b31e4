//! Line arrangements in the projective plane, computed on the sphere.
//!
//! A projective line arrangement lifts to a great-circle arrangement on the
//! 2-sphere, which is orientable, so the usual rotation-system face traversal
//! applies with no affine-chart case work. Everything projective is read off
//! by halving: the antipodal map acts freely on vertices, edges and faces
//! (every face sits inside a hemisphere of any one circle).
//!
//! All combinatorial decisions (which vertices lie on which lines) are taken
//! by the caller; this module only orders them and traverses faces, so exact
//! and float inputs behave identically as long as distinct vertices are
//! separated.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{cross3, dot, Scalar};

/// A vertex of the arrangement: canonical position in plane coordinates and
/// the (at least two) lines through it.
#[derive(Clone, Debug)]
pub struct ArrVertex<S: Scalar> {
    pub coords: Vec<S>,
    pub lines: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ArrangementInput<S: Scalar> {
    /// Distinct line coefficient 3-vectors.
    pub lines: Vec<Vec<S>>,
    pub vertices: Vec<ArrVertex<S>>,
}

/// One spherical arc of a circle, between consecutive sphere nodes.
#[derive(Clone, Debug)]
pub struct Arc<S: Scalar> {
    /// Projective vertex ids of the endpoints.
    pub tail: usize,
    pub head: usize,
    /// A direction strictly inside the arc (sum of the endpoint directions).
    pub mid: Vec<S>,
    pub left_face: usize,
    pub right_face: usize,
}

#[derive(Clone, Debug)]
pub struct Arrangement<S: Scalar> {
    /// Projective vertex / edge / face counts.
    pub v: usize,
    pub e: usize,
    pub f: usize,
    /// Size and supporting lines of every sphere face.
    pub face_sizes: Vec<usize>,
    pub face_lines: Vec<Vec<usize>>,
    /// Projective face-size histogram.
    pub face_hist: BTreeMap<usize, usize>,
    /// Per input line, the sphere arcs in cyclic order (2m arcs for m
    /// projective vertices on the line).
    pub line_arcs: Vec<Vec<Arc<S>>>,
}

/// Cyclic angular order of nonzero 2D direction keys.
fn angle_cmp<S: Scalar>(a: &(S, S), b: &(S, S)) -> Ordering {
    let half = |p: &(S, S)| -> u8 {
        let zero = S::zero();
        if p.1 > zero || (p.1 == zero && p.0 > zero) {
            0
        } else {
            1
        }
    };
    match half(a).cmp(&half(b)) {
        Ordering::Equal => {}
        o => return o,
    }
    let cross = a.0.clone() * b.1.clone() - a.1.clone() * b.0.clone();
    let zero = S::zero();
    if cross > zero {
        Ordering::Less
    } else if cross < zero {
        Ordering::Greater
    } else {
        Ordering::Equal
    }
}

/// A basis of the plane orthogonal to `n`, oriented so that `(u, w, n)` is
/// right-handed.
fn tangent_basis<S: Scalar>(n: &[S]) -> (Vec<S>, Vec<S>) {
    let axes: [[i64; 3]; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let mut u: Option<Vec<S>> = None;
    let mut best = S::zero();
    for ax in axes {
        let axv: Vec<S> = ax.iter().map(|&x| S::from_i64(x)).collect();
        let c = cross3(n, &axv).to_vec();
        let norm2 = dot(&c, &c);
        if u.is_none() || norm2.abs_cmp(&best).is_gt() {
            best = norm2;
            u = Some(c);
        }
    }
    let u = u.unwrap();
    let w = cross3(n, &u).to_vec();
    (u, w)
}

pub fn build_arrangement<S: Scalar>(input: &ArrangementInput<S>) -> Result<Arrangement<S>> {
    let nv = input.vertices.len();
    let nl = input.lines.len();
    // sphere node = (projective vertex, sign); coordinates negated for sign 1
    let ncoord = |node: (usize, u8)| -> Vec<S> {
        let c = &input.vertices[node.0].coords;
        if node.1 == 0 {
            c.clone()
        } else {
            c.iter().map(|x| -x.clone()).collect()
        }
    };

    // circles: nodes in cyclic angular order, plus the circle orientation
    // normal (u x w, parallel to the line vector up to sign)
    let mut circle_nodes: Vec<Vec<(usize, u8)>> = Vec::with_capacity(nl);
    let mut circle_normal: Vec<Vec<S>> = Vec::with_capacity(nl);
    for (li, lvec) in input.lines.iter().enumerate() {
        let (u, w) = tangent_basis(lvec);
        let normal = cross3(&u, &w).to_vec();
        let mut nodes: Vec<(usize, u8)> = (0..nv)
            .filter(|&v| input.vertices[v].lines.contains(&li))
            .flat_map(|v| [(v, 0u8), (v, 1u8)])
            .collect();
        if nodes.is_empty() {
            return Err(Error::IdentityViolation(format!(
                "line {li} carries no arrangement vertices"
            )));
        }
        nodes.sort_by(|&a, &b| {
            let ca = ncoord(a);
            let cb = ncoord(b);
            angle_cmp(&(dot(&ca, &u), dot(&ca, &w)), &(dot(&cb, &u), dot(&cb, &w)))
        });
        // antipodal interleaving: node i + m must be the antipode of node i
        let m = nodes.len() / 2;
        for i in 0..m {
            let a = nodes[i];
            let b = nodes[i + m];
            if a.0 != b.0 || a.1 == b.1 {
                return Err(Error::IdentityViolation(format!(
                    "circle {li}: angular order lost antipodal symmetry"
                )));
            }
        }
        circle_nodes.push(nodes);
        circle_normal.push(normal);
    }

    // half-edges: (circle, arc position, direction). Arc k joins nodes k and
    // k+1 cyclically. dir 0 walks forward (increasing angle), dir 1 backward.
    #[derive(Clone, Copy, PartialEq, Eq, Debug)]
    struct He {
        circle: usize,
        pos: usize,
        dir: u8,
    }
    let arc_count: Vec<usize> = circle_nodes.iter().map(|ns| ns.len()).collect();
    let he_tail = |h: He| -> (usize, u8) {
        let ns = &circle_nodes[h.circle];
        if h.dir == 0 {
            ns[h.pos]
        } else {
            ns[(h.pos + 1) % ns.len()]
        }
    };
    let he_head = |h: He| -> (usize, u8) {
        let ns = &circle_nodes[h.circle];
        if h.dir == 0 {
            ns[(h.pos + 1) % ns.len()]
        } else {
            ns[h.pos]
        }
    };
    // outgoing direction at the tail: +- the forward tangent of the circle
    let he_outdir = |h: He| -> Vec<S> {
        let t = cross3(&circle_normal[h.circle], &ncoord(he_tail(h)));
        if h.dir == 0 {
            t.to_vec()
        } else {
            t.iter().map(|x| -x.clone()).collect()
        }
    };

    let mut all_hes: Vec<He> = Vec::new();
    for (c, &cnt) in arc_count.iter().enumerate() {
        for pos in 0..cnt {
            all_hes.push(He { circle: c, pos, dir: 0 });
            all_hes.push(He { circle: c, pos, dir: 1 });
        }
    }
    // outgoing half-edges per node, counterclockwise as seen from outside
    let mut out_at: BTreeMap<(usize, u8), Vec<He>> = BTreeMap::new();
    for &h in &all_hes {
        out_at.entry(he_tail(h)).or_default().push(h);
    }
    for (node, hs) in out_at.iter_mut() {
        let x = ncoord(*node);
        let (u, w) = tangent_basis(&x);
        hs.sort_by(|&a, &b| {
            let da = he_outdir(a);
            let db = he_outdir(b);
            angle_cmp(&(dot(&da, &u), dot(&da, &w)), &(dot(&db, &u), dot(&db, &w)))
        });
    }
    // next(h): at the head, the outgoing half-edge immediately clockwise of
    // the reversed direction, i.e. the cyclic predecessor of the twin
    let he_next = |h: He| -> He {
        let v = he_head(h);
        let twin = He {
            circle: h.circle,
            pos: h.pos,
            dir: 1 - h.dir,
        };
        let hs = &out_at[&v];
        let idx = hs.iter().position(|&x| x == twin).expect("twin at head");
        hs[(idx + hs.len() - 1) % hs.len()]
    };

    // face orbits
    let he_index = |h: He| -> usize {
        let mut base = 0usize;
        for c in 0..h.circle {
            base += 2 * arc_count[c];
        }
        base + 2 * h.pos + h.dir as usize
    };
    let total_hes: usize = all_hes.len();
    let mut face_of: Vec<usize> = vec![usize::MAX; total_hes];
    let mut face_sizes: Vec<usize> = Vec::new();
    let mut face_lines: Vec<Vec<usize>> = Vec::new();
    for &h0 in &all_hes {
        if face_of[he_index(h0)] != usize::MAX {
            continue;
        }
        let fid = face_sizes.len();
        let mut cur = h0;
        let mut size = 0usize;
        let mut lines = Vec::new();
        loop {
            face_of[he_index(cur)] = fid;
            size += 1;
            if !lines.contains(&cur.circle) {
                lines.push(cur.circle);
            }
            cur = he_next(cur);
            if cur == h0 {
                break;
            }
        }
        lines.sort_unstable();
        face_sizes.push(size);
        face_lines.push(lines);
    }

    let vs = 2 * nv;
    let es = total_hes / 2;
    let fs = face_sizes.len();
    if vs as i64 - es as i64 + fs as i64 != 2 {
        return Err(Error::IdentityViolation(format!(
            "sphere Euler characteristic: {vs} - {es} + {fs} != 2"
        )));
    }
    if es % 2 != 0 || fs % 2 != 0 {
        return Err(Error::IdentityViolation(
            "sphere counts are not antipodally even".into(),
        ));
    }

    let mut face_hist: BTreeMap<usize, usize> = BTreeMap::new();
    for &s in &face_sizes {
        *face_hist.entry(s).or_default() += 1;
    }
    for c in face_hist.values_mut() {
        if *c % 2 != 0 {
            return Err(Error::IdentityViolation(
                "face size histogram not antipodally even".into(),
            ));
        }
        *c /= 2;
    }

    let mut line_arcs: Vec<Vec<Arc<S>>> = Vec::with_capacity(nl);
    for (c, nodes) in circle_nodes.iter().enumerate() {
        let cnt = nodes.len();
        let mut arcs = Vec::with_capacity(cnt);
        for pos in 0..cnt {
            let a = nodes[pos];
            let b = nodes[(pos + 1) % cnt];
            let ca = ncoord(a);
            let cb = ncoord(b);
            // antipodal endpoints (a single vertex on the line): the interior
            // of the forward arc contains the forward tangent direction
            let mid: Vec<S> = if a.0 == b.0 {
                cross3(&circle_normal[c], &ca).to_vec()
            } else {
                ca.iter().zip(&cb).map(|(x, y)| x.clone() + y.clone()).collect()
            };
            let fwd = He { circle: c, pos, dir: 0 };
            let bwd = He { circle: c, pos, dir: 1 };
            arcs.push(Arc {
                tail: a.0,
                head: b.0,
                mid,
                left_face: face_of[he_index(fwd)],
                right_face: face_of[he_index(bwd)],
            });
        }
        line_arcs.push(arcs);
    }

    Ok(Arrangement {
        v: nv,
        e: es / 2,
        f: fs / 2,
        face_sizes,
        face_lines,
        face_hist,
        line_arcs,
    })
}

/// Convenience constructor for tests and small inputs: vertices from all
/// pairwise line intersections, merged by canonical coordinates.
pub fn arrangement_from_lines<S: Scalar>(lines: &[Vec<S>]) -> Result<Arrangement<S>> {
    use crate::scalar::{lex_cmp, vec_eq};
    let mut raw: Vec<(Vec<S>, usize, usize)> = Vec::new();
    for i in 0..lines.len() {
        for j in (i + 1)..lines.len() {
            let mut c = cross3(&lines[i], &lines[j]).to_vec();
            if !S::canonicalize(&mut c) {
                return Err(Error::Parse(format!("lines {i} and {j} coincide")));
            }
            raw.push((c, i, j));
        }
    }
    raw.sort_by(|a, b| lex_cmp(&a.0, &b.0));
    let mut vertices: Vec<ArrVertex<S>> = Vec::new();
    for (c, i, j) in raw {
        if let Some(last) = vertices.last_mut() {
            if vec_eq(&last.coords, &c) {
                for l in [i, j] {
                    if !last.lines.contains(&l) {
                        last.lines.push(l);
                    }
                }
                continue;
            }
        }
        vertices.push(ArrVertex {
            coords: c,
            lines: vec![i, j],
        });
    }
    for v in vertices.iter_mut() {
        v.lines.sort_unstable();
    }
    build_arrangement(&ArrangementInput {
        lines: lines.to_vec(),
        vertices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    fn lines_i64(ls: &[[i64; 3]]) -> Vec<Vec<Rat>> {
        ls.iter()
            .map(|l| l.iter().map(|&x| Rat::from_i64(x)).collect())
            .collect()
    }

    #[test]
    fn three_generic_lines() {
        // x = 0, y = 0, x + y - z = 0: the smallest generic arrangement
        let arr =
            arrangement_from_lines(&lines_i64(&[[1, 0, 0], [0, 1, 0], [1, 1, -1]])).unwrap();
        assert_eq!((arr.v, arr.e, arr.f), (3, 6, 4));
        assert_eq!(arr.face_hist.get(&3), Some(&4));
    }

    #[test]
    fn two_lines_make_two_lunes() {
        let arr = arrangement_from_lines(&lines_i64(&[[1, 0, 0], [0, 1, 0]])).unwrap();
        assert_eq!((arr.v, arr.e, arr.f), (1, 2, 2));
        assert_eq!(arr.face_hist.get(&2), Some(&2));
    }

    #[test]
    fn concurrent_pencil_of_three() {
        // three lines through (0:0:1)
        let arr =
            arrangement_from_lines(&lines_i64(&[[1, 0, 0], [0, 1, 0], [1, 1, 0]])).unwrap();
        assert_eq!((arr.v, arr.e, arr.f), (1, 3, 3));
        assert_eq!(arr.face_hist.get(&2), Some(&3));
    }

    #[test]
    fn four_generic_lines() {
        // V = C(4,2) = 6, E = 4*3 = 12, F = 1 + E - V = 7
        let arr = arrangement_from_lines(&lines_i64(&[
            [1, 0, 0],
            [0, 1, 0],
            [1, 1, -1],
            [1, -1, -3],
        ]))
        .unwrap();
        assert_eq!((arr.v, arr.e, arr.f), (6, 12, 7));
        let total: usize = arr.face_hist.iter().map(|(j, c)| j * c).sum();
        assert_eq!(total, 2 * arr.e);
    }

    #[test]
    fn arcs_carry_consistent_faces() {
        let arr =
            arrangement_from_lines(&lines_i64(&[[1, 0, 0], [0, 1, 0], [1, 1, -1]])).unwrap();
        for arcs in &arr.line_arcs {
            assert_eq!(arcs.len() % 2, 0);
            for arc in arcs {
                assert!(arc.left_face < arr.face_sizes.len());
                assert!(arc.right_face < arr.face_sizes.len());
                assert_ne!(arc.left_face, arc.right_face);
            }
        }
    }
}
