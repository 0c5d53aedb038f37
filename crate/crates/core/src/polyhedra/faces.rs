use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::linalg::{det, span_basis, Matrix};
use crate::rational::{sub_vec, Q};

use super::{HPolyhedron, VPolytope};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    /// Indices into [`FaceLattice::vertices`].
    pub vertices: Vec<usize>,
    pub dim: usize,
}

/// Nonempty faces keyed by their (closed) tight-constraint sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceLattice {
    pub vertices: Vec<Vec<Q>>,
    pub faces: BTreeMap<BTreeSet<usize>, Face>,
}

impl FaceLattice {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Key of the whole polytope (its implicit equalities).
    pub fn top(&self) -> Option<&BTreeSet<usize>> {
        self.faces.iter().max_by_key(|(_, f)| f.dim).map(|(k, _)| k)
    }

    pub fn count_by_dim(&self) -> Vec<usize> {
        let maxd = self.faces.values().map(|f| f.dim).max().unwrap_or(0);
        let mut out = alloc::vec![0; maxd + 1];
        for f in self.faces.values() {
            out[f.dim] += 1;
        }
        out
    }

    pub fn face_points(&self, key: &BTreeSet<usize>) -> Vec<Vec<Q>> {
        self.faces[key]
            .vertices
            .iter()
            .map(|&i| self.vertices[i].clone())
            .collect()
    }

    /// Facets of the face `key`: faces one dimension lower inside it.
    pub fn facets_of(&self, key: &BTreeSet<usize>) -> Vec<&BTreeSet<usize>> {
        let d = self.faces[key].dim;
        self.faces
            .iter()
            .filter(|(k, f)| f.dim + 1 == d && key.is_subset(k))
            .map(|(k, _)| k)
            .collect()
    }

    /// Pulling triangulation of a face: simplices as vertex index lists.
    pub fn triangulate(&self, key: &BTreeSet<usize>) -> Vec<Vec<usize>> {
        let face = &self.faces[key];
        if face.dim == 0 {
            return alloc::vec![face.vertices.clone()];
        }
        let apex = face.vertices[0];
        let mut out = Vec::new();
        for fk in self.facets_of(key) {
            if self.faces[fk].vertices.contains(&apex) {
                continue;
            }
            for mut s in self.triangulate(fk) {
                s.insert(0, apex);
                out.push(s);
            }
        }
        out
    }
}

pub(crate) fn affine_dim(points: &[Vec<Q>]) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let diffs: Matrix = points[1..].iter().map(|p| sub_vec(p, &points[0])).collect();
    span_basis(&diffs).len()
}

/// Face lattice of a bounded polyhedron; empty when infeasible.
pub fn face_lattice(h: &HPolyhedron) -> Result<FaceLattice> {
    let v = h.vertices()?;
    let vertices = v.vertices;
    let tight: Vec<BTreeSet<usize>> = vertices.iter().map(|p| h.tight_set(p)).collect();
    let mut keys: BTreeSet<BTreeSet<usize>> = tight.iter().cloned().collect();
    if !vertices.is_empty() {
        let mut all = tight[0].clone();
        for t in &tight[1..] {
            all = all.intersection(t).cloned().collect();
        }
        keys.insert(all);
    }
    // Close under intersection.
    loop {
        let list: Vec<BTreeSet<usize>> = keys.iter().cloned().collect();
        let mut added = false;
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                let k: BTreeSet<usize> = list[i].intersection(&list[j]).cloned().collect();
                if keys.insert(k) {
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    let mut faces = BTreeMap::new();
    for k in keys {
        let idx: Vec<usize> = (0..vertices.len()).filter(|&i| k.is_subset(&tight[i])).collect();
        let pts: Vec<Vec<Q>> = idx.iter().map(|&i| vertices[i].clone()).collect();
        // The closed key is the full tight set common to these vertices.
        let mut closed = tight[idx[0]].clone();
        for &i in &idx[1..] {
            closed = closed.intersection(&tight[i]).cloned().collect();
        }
        faces.insert(
            closed,
            Face {
                dim: affine_dim(&pts),
                vertices: idx,
            },
        );
    }
    Ok(FaceLattice { vertices, faces })
}

/// Brute-force face census: every subset of rows whose equality set meets
/// the polytope, keyed by the tight set of the face it cuts out.
pub fn face_lattice_bruteforce(h: &HPolyhedron) -> Result<BTreeMap<BTreeSet<usize>, Vec<Vec<Q>>>> {
    let v = h.vertices()?;
    let n = h.len();
    let mut out = BTreeMap::new();
    if v.is_empty() {
        return Ok(out);
    }
    for mask in 0u64..(1u64 << n) {
        let mut sub = h.clone();
        for i in 0..n {
            if mask >> i & 1 == 1 {
                let r = h.rows[i].clone();
                sub.push(r.normal.iter().map(|x| -x).collect(), -r.offset);
            }
        }
        let Ok(face) = sub.vertices() else { continue };
        if face.is_empty() {
            continue;
        }
        let mut key: Option<BTreeSet<usize>> = None;
        for p in &face.vertices {
            let t = h.tight_set(p);
            key = Some(match key {
                None => t,
                Some(k) => k.intersection(&t).cloned().collect(),
            });
        }
        out.insert(key.unwrap(), face.vertices);
    }
    Ok(out)
}

fn simplex_volume_times_factorial(pts: &[Vec<Q>]) -> Q {
    let m: Matrix = pts[1..].iter().map(|p| sub_vec(p, &pts[0])).collect();
    det(&m).abs()
}

/// Exact volume of a full-dimensional polytope (zero otherwise).
pub fn volume(p: &VPolytope) -> Result<Q> {
    if !p.is_full_dimensional() {
        return Ok(Q::zero());
    }
    let lat = face_lattice(&p.to_h())?;
    let top = lat.top().cloned().expect("nonempty");
    let mut fact = Q::from_integer(1.into());
    for k in 2..=p.dim {
        fact *= Q::from_integer((k as i64).into());
    }
    let mut acc = Q::zero();
    for s in lat.triangulate(&top) {
        let pts: Vec<Vec<Q>> = s.iter().map(|&i| lat.vertices[i].clone()).collect();
        acc += simplex_volume_times_factorial(&pts);
    }
    Ok(acc / fact)
}

/// Simplices (as point lists) of a pulling triangulation of a
/// full-dimensional polytope.
pub fn triangulation(p: &VPolytope) -> Result<Vec<Vec<Vec<Q>>>> {
    if !p.is_full_dimensional() {
        return Ok(Vec::new());
    }
    if p.dim == 0 {
        return Ok(alloc::vec![p.vertices.clone()]);
    }
    let lat = face_lattice(&p.to_h())?;
    let top = lat.top().cloned().expect("nonempty");
    Ok(lat
        .triangulate(&top)
        .into_iter()
        .map(|s| s.iter().map(|&i| lat.vertices[i].clone()).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_ints, q, qf};

    #[test]
    fn segment_faces() {
        let mut h = HPolyhedron::new(1);
        h.push(from_ints(&[1]), q(0));
        h.push(from_ints(&[-1]), q(1));
        let lat = face_lattice(&h).unwrap();
        assert_eq!(lat.len(), 3);
        assert!(lat.faces.contains_key(&BTreeSet::new()));
        assert!(lat.faces.contains_key(&BTreeSet::from([0])));
        assert!(lat.faces.contains_key(&BTreeSet::from([1])));
    }

    #[test]
    fn triangle_census() {
        let t = VPolytope::from_points(2, vec![from_ints(&[0, 0]), from_ints(&[3, 0]), from_ints(&[0, 2])]).unwrap();
        let lat = face_lattice(&t.to_h()).unwrap();
        assert_eq!(lat.count_by_dim(), vec![3, 3, 1]);
        assert_eq!(volume(&t).unwrap(), q(3));
        let brute = face_lattice_bruteforce(&t.to_h()).unwrap();
        assert_eq!(brute.len(), lat.len());
    }

    #[test]
    fn cube_volume_and_census() {
        let h = HPolyhedron::cube(&from_ints(&[0, 0, 0]), &[q(1), qf(1, 2), q(2)]);
        let lat = face_lattice(&h).unwrap();
        assert_eq!(lat.count_by_dim(), vec![8, 12, 6, 1]);
        let v = h.vertices().unwrap();
        assert_eq!(volume(&v).unwrap(), q(1));
    }
}
