//! OFF export for two- and three-dimensional polytopes.

use std::fmt::Write;

use weylcone_core::polyhedra::VPolytope;
use weylcone_core::rational::{to_f64, to_f64_vec};
use weylcone_core::{Error, Result};

fn sub(a: &[f64], b: &[f64]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Orders `idx` counter-clockwise around the axis `normal`.
fn cyclic(points: &[Vec<f64>], idx: &mut [usize], normal: [f64; 3]) {
    let n = idx.len() as f64;
    let c: Vec<f64> = (0..3)
        .map(|k| idx.iter().map(|&i| points[i][k]).sum::<f64>() / n)
        .collect();
    let u = sub(&points[idx[0]], &c);
    let w = cross(normal, u);
    idx.sort_by(|&a, &b| {
        let pa = sub(&points[a], &c);
        let pb = sub(&points[b], &c);
        let ta = dot3(w, pa).atan2(dot3(u, pa));
        let tb = dot3(w, pb).atan2(dot3(u, pb));
        ta.total_cmp(&tb)
    });
}

/// OFF text; 2-D polytopes are placed in the plane `z = 0`.
pub fn to_off(p: &VPolytope) -> Result<String> {
    if !(p.dim == 2 || p.dim == 3) || !p.is_full_dimensional() {
        return Err(Error::InvalidArgument(
            "OFF export needs a full-dimensional 2-D or 3-D polytope".into(),
        ));
    }
    let pts: Vec<Vec<f64>> = p
        .vertices
        .iter()
        .map(|v| {
            let mut f = to_f64_vec(v);
            f.resize(3, 0.0);
            f
        })
        .collect();
    let mut faces: Vec<Vec<usize>> = Vec::new();
    if p.dim == 2 {
        let mut idx: Vec<usize> = (0..pts.len()).collect();
        cyclic(&pts, &mut idx, [0.0, 0.0, 1.0]);
        faces.push(idx);
    } else {
        for row in p.to_h().rows {
            let mut idx: Vec<usize> = p
                .vertices
                .iter()
                .enumerate()
                .filter(|(_, v)| row.value(v) == weylcone_core::rational::zero())
                .map(|(i, _)| i)
                .collect();
            // inward normal, so walk around its negation
            let n: Vec<f64> = row.normal.iter().map(to_f64).collect();
            cyclic(&pts, &mut idx, [-n[0], -n[1], -n[2]]);
            faces.push(idx);
        }
    }
    let edges = if p.dim == 2 {
        pts.len()
    } else {
        faces.iter().map(|f| f.len()).sum::<usize>() / 2
    };
    let mut out = String::from("OFF\n");
    writeln!(out, "{} {} {}", pts.len(), faces.len(), edges).unwrap();
    for v in &pts {
        writeln!(out, "{} {} {}", v[0], v[1], v[2]).unwrap();
    }
    for f in &faces {
        let ids: Vec<String> = f.iter().map(|i| i.to_string()).collect();
        writeln!(out, "{} {}", f.len(), ids.join(" ")).unwrap();
    }
    Ok(out)
}
