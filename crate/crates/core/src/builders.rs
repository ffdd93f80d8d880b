//! Ingredient designs: affine planes and spaces with their resolutions,
//! duals regarded as transversal designs, trivial symmetric designs and
//! desarguesian projective planes.
//!
//! Points with coordinates in GF(q)^n are numbered by base-`q` positional
//! encoding, most significant coordinate first.

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::incidence::{IncidenceStructure, Resolution, TransversalGrouping};

/// Largest affine space built.
pub const MAX_AFFINE_POINTS: usize = 4096;

/// AG(2, q): lines `y = m x + c` grouped by slope `m`, then the verticals
/// `x = c` as the last class.
pub fn affine_plane(q: u32) -> Result<(IncidenceStructure, Resolution)> {
    let f = Field::with_order(q)?;
    let qs = q as usize;
    let point = |x: u32, y: u32| f.encode(&[x, y]);
    let mut blocks = Vec::with_capacity(qs * qs + qs);
    let mut classes = Vec::with_capacity(qs + 1);
    for m in f.elements() {
        let mut class = Vec::with_capacity(qs);
        for c in f.elements() {
            class.push(blocks.len());
            blocks.push(f.elements().map(|x| point(x, f.add(f.mul(m, x), c))).collect());
        }
        classes.push(class);
    }
    let mut verticals = Vec::with_capacity(qs);
    for c in f.elements() {
        verticals.push(blocks.len());
        blocks.push(f.elements().map(|y| point(c, y)).collect());
    }
    classes.push(verticals);
    Ok((IncidenceStructure::new(qs * qs, blocks)?, Resolution::new(classes)))
}

/// Normal vectors of the hyperplane directions of GF(q)^n: first nonzero
/// coordinate equal to one, in increasing code order.
pub fn hyperplane_normals(f: &Field, n: usize) -> Vec<Vec<u32>> {
    let total = (f.order() as usize).pow(n as u32);
    (1..total)
        .map(|code| f.decode(code, n))
        .filter(|a| a.iter().find(|&&c| c != 0) == Some(&1))
        .collect()
}

/// Points and affine hyperplanes of AG(n, q). Class `i` holds the `q`
/// hyperplanes `a·x = t` for the `i`-th normal `a`, ordered by `t`.
pub fn affine_space_hyperplanes(n: usize, q: u32) -> Result<(IncidenceStructure, Resolution)> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("dimension {n} < 2")));
    }
    let f = Field::with_order(q)?;
    let v = (q as usize)
        .checked_pow(n as u32)
        .filter(|&v| v <= MAX_AFFINE_POINTS)
        .ok_or_else(|| Error::InvalidArgument(format!("AG({n},{q}) exceeds {MAX_AFFINE_POINTS} points")))?;
    let points: Vec<Vec<u32>> = (0..v).map(|code| f.decode(code, n)).collect();
    let mut blocks = Vec::new();
    let mut classes = Vec::new();
    for a in hyperplane_normals(&f, n) {
        let mut parts = vec![Vec::new(); q as usize];
        for (code, x) in points.iter().enumerate() {
            parts[f.dot(&a, x) as usize].push(code);
        }
        let start = blocks.len();
        classes.push((start..start + q as usize).collect());
        blocks.extend(parts);
    }
    Ok((IncidenceStructure::new(v, blocks)?, Resolution::new(classes)))
}

/// The 2-(v1, v1−1, v1−2) design whose block `b` is `Δ1 \ {b}`.
pub fn trivial_symmetric(v1: usize) -> Result<IncidenceStructure> {
    if v1 < 3 {
        return Err(Error::InvalidArgument(format!("v1 = {v1} < 3")));
    }
    IncidenceStructure::new(
        v1,
        (0..v1).map(|b| (0..v1).filter(|&x| x != b).collect()).collect(),
    )
}

/// Common size of two blocks from different classes, if constant.
pub fn affine_intersection_number(d0: &IncidenceStructure, res: &Resolution) -> Result<usize> {
    let class_of = res.class_of(d0.b());
    let mut mu = None;
    for i in 0..d0.b() {
        for j in i + 1..d0.b() {
            if class_of[i] == class_of[j] {
                continue;
            }
            let m = d0.block_intersection(i, j);
            match mu {
                None => mu = Some(m),
                Some(prev) if prev != m => return Err(Error::NotAffine(prev, m)),
                _ => {}
            }
        }
    }
    mu.ok_or_else(|| Error::InvalidArgument("fewer than two classes".into()))
}

/// Dual of an affine resolvable design, with its points (the old blocks)
/// grouped by parallel class. Affineness is checked, not assumed.
pub fn dual_transversal(
    d0: &IncidenceStructure,
    res: &Resolution,
) -> Result<(IncidenceStructure, TransversalGrouping)> {
    crate::incidence::verify_resolution(d0, res)?;
    affine_intersection_number(d0, res)?;
    let d2 = d0.dual()?;
    Ok((d2, TransversalGrouping::new(res.classes().to_vec())))
}

/// PG(2, q): points and lines are the one-dimensional subspaces of GF(q)^3
/// with first nonzero coordinate one, in increasing code order; a point lies
/// on a line when their dot product vanishes.
pub fn projective_plane(q: u32) -> Result<IncidenceStructure> {
    let f = Field::with_order(q)?;
    let reps = hyperplane_normals(&f, 3);
    let blocks = reps
        .iter()
        .map(|line| {
            reps.iter()
                .enumerate()
                .filter(|(_, p)| f.dot(line, p) == 0)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    IncidenceStructure::new(reps.len(), blocks)
}
