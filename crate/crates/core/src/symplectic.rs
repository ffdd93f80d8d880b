//! Symplectic designs `S^ε(n)` on `W = V ⊕ V*` over GF(2), the group
//! `2^{2n}:GL(n,2)` acting on them, and the grid structure it preserves.
//!
//! Vectors of GF(2)^n are bitmasks, coordinate `i` in bit `i`. The point
//! `P(v, x)` is numbered `x·2ⁿ + v`, and so is the block `B(v, x)`.

use crate::builders::affine_space_hyperplanes;
use crate::compose::CompositionInput;
use crate::error::{Error, Result};
use crate::incidence::{IncidenceStructure, TransversalGrouping};
use crate::latin::{addition_table_elementary_abelian, latin_to_bijections};
use crate::perms::Permutation;

#[inline]
fn dot(a: u32, b: u32) -> u32 {
    (a & b).count_ones() & 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn bit(self) -> u32 {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// The form `Q_{a,b}(v, x) = vxᵀ + vbᵀ + axᵀ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QFormLabel {
    pub n: usize,
    pub a: u32,
    pub b: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridPoint {
    pub n: usize,
    pub v: u32,
    pub x: u32,
}

impl GridPoint {
    pub fn code(&self) -> usize {
        ((self.x as usize) << self.n) | self.v as usize
    }

    pub fn from_code(n: usize, code: usize) -> Self {
        let mask = (1usize << n) - 1;
        Self {
            n,
            v: (code & mask) as u32,
            x: (code >> n) as u32,
        }
    }
}

pub fn qform_eval(q: &QFormLabel, p: &GridPoint) -> Result<u32> {
    if q.n != p.n {
        return Err(Error::InvalidArgument(format!("form on n = {}, point on n = {}", q.n, p.n)));
    }
    Ok(dot(p.v, p.x) ^ dot(p.v, q.b) ^ dot(q.a, p.x))
}

/// `tp(Q_{a,b}) = (−1)^{abᵀ}`.
pub fn qform_type(q: &QFormLabel) -> Sign {
    if dot(q.a, q.b) == 0 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Number of zeros of `Q` on `W`, counted exhaustively.
pub fn zero_count(q: &QFormLabel) -> Result<usize> {
    if q.n > 6 {
        return Err(Error::InvalidArgument(format!("n = {} > 6", q.n)));
    }
    let mut zeros = 0;
    for code in 0..1usize << (2 * q.n) {
        if qform_eval(q, &GridPoint::from_code(q.n, code))? == 0 {
            zeros += 1;
        }
    }
    Ok(zeros)
}

fn check_design_n(n: usize) -> Result<()> {
    if !(2..=5).contains(&n) {
        return Err(Error::InvalidArgument(format!("n = {n} not in 2..=5")));
    }
    Ok(())
}

/// `P(v, x) ∈ B(w, y)` iff `(v + w)(x + y)ᵀ = 0`.
pub fn splus(n: usize) -> Result<IncidenceStructure> {
    check_design_n(n)?;
    incidence_by(n, |p, blk| dot(p.v ^ blk.v, p.x ^ blk.x) == 0)
}

pub fn sminus(n: usize) -> Result<IncidenceStructure> {
    splus(n)?.complement()
}

/// Points are the vectors of `W` and block `b·2ⁿ + a` is the form
/// `Q_{a,b}`; `w` lies on `Q` iff `(−1)^{Q(w)} = ε·tp(Q)`.
pub fn standard_construction(n: usize, eps: Sign) -> Result<IncidenceStructure> {
    check_design_n(n)?;
    incidence_by(n, |p, lbl| {
        let q = QFormLabel { n, a: lbl.v, b: lbl.x };
        let value = dot(p.v, p.x) ^ dot(p.v, q.b) ^ dot(q.a, p.x);
        value == dot(q.a, q.b) ^ eps.bit()
    })
}

fn incidence_by(n: usize, inc: impl Fn(&GridPoint, &GridPoint) -> bool) -> Result<IncidenceStructure> {
    let size = 1usize << (2 * n);
    let blocks = (0..size)
        .map(|blk| {
            let blk = GridPoint::from_code(n, blk);
            (0..size)
                .filter(|&p| inc(&GridPoint::from_code(n, p), &blk))
                .collect()
        })
        .collect();
    IncidenceStructure::new(size, blocks)
}

/// Square matrices over GF(2) as row bitmasks, acting on row vectors.
fn mat_apply(rows: &[u32], v: u32) -> u32 {
    rows.iter()
        .enumerate()
        .filter(|(i, _)| v >> i & 1 == 1)
        .fold(0, |acc, (_, r)| acc ^ r)
}

fn mat_inverse(rows: &[u32]) -> Option<Vec<u32>> {
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut inv: Vec<u32> = (0..n).map(|i| 1 << i).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r] >> col & 1 == 1)?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        for r in 0..n {
            if r != col && a[r] >> col & 1 == 1 {
                a[r] ^= a[col];
                inv[r] ^= inv[col];
            }
        }
    }
    Some(inv)
}

fn mat_transpose(rows: &[u32]) -> Vec<u32> {
    let n = rows.len();
    (0..n)
        .map(|j| (0..n).filter(|&i| rows[i] >> j & 1 == 1).fold(0, |acc, i| acc | 1 << i))
        .collect()
}

/// `P(v, x) ↦ P(vA, x(A⁻¹)ᵀ)`.
pub fn matrix_permutation(rows: &[u32]) -> Result<Permutation> {
    let n = rows.len();
    let inv_t = mat_transpose(
        &mat_inverse(rows).ok_or_else(|| Error::InvalidArgument("singular matrix".into()))?,
    );
    let images = (0..1usize << (2 * n))
        .map(|code| {
            let p = GridPoint::from_code(n, code);
            GridPoint {
                n,
                v: mat_apply(rows, p.v),
                x: mat_apply(&inv_t, p.x),
            }
            .code()
        })
        .collect();
    Permutation::new(images)
}

fn check_group_n(n: usize) -> Result<()> {
    if !(2..=4).contains(&n) {
        return Err(Error::InvalidArgument(format!("n = {n} not in 2..=4")));
    }
    Ok(())
}

/// Translations by the basis of `W`: `(e_i, 0)` for `i < n`, then `(0, e_i)`.
pub fn translation_gens(n: usize) -> Result<Vec<Permutation>> {
    check_group_n(n)?;
    let size = 1usize << (2 * n);
    (0..2 * n)
        .map(|i| Permutation::new((0..size).map(|c| c ^ (1 << i)).collect()))
        .collect()
}

/// The transvection `I + E_{0,1}` and the cyclic permutation matrix
/// `e_i ↦ e_{i+1}`, which together generate GL(n, 2).
pub fn matrix_gens(n: usize) -> Result<Vec<Permutation>> {
    check_group_n(n)?;
    let mut transvection: Vec<u32> = (0..n).map(|i| 1 << i).collect();
    transvection[0] |= 1 << 1;
    let cycle: Vec<u32> = (0..n).map(|i| 1 << ((i + 1) % n)).collect();
    Ok(vec![matrix_permutation(&transvection)?, matrix_permutation(&cycle)?])
}

/// Generators of `2^{2n}:GL(n, 2)`: translations first, then the matrices.
pub fn group_gens(n: usize) -> Result<Vec<Permutation>> {
    let mut gens = translation_gens(n)?;
    gens.extend(matrix_gens(n)?);
    Ok(gens)
}

/// Cosets of `V` (indexed by `x`), then cosets of `V*` (indexed by `v`).
pub fn grid_partitions(n: usize) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let side = 1usize << n;
    let by_x = (0..side).map(|x| (0..side).map(|v| x * side + v).collect()).collect();
    let by_v = (0..side).map(|v| (0..side).map(|x| x * side + v).collect()).collect();
    (by_x, by_v)
}

/// Necessary condition for a symmetric design with block size `k` on an
/// `n × n` grid with a flag-transitive group preserving it.
pub fn grid_divisibility(k: u64, n: u64) -> bool {
    (k * k.saturating_sub(1) / 2).is_multiple_of(n + 1)
}

/// How the blocks of `D2` are matched with the points of `AG(n, 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum D2Labels {
    /// Block `p` is the set of hyperplanes through `p`.
    Dual,
    /// Block `p` is the set of hyperplanes missing `p`; isomorphic to the
    /// dual by swapping the two hyperplanes of every parallel class.
    Complemented,
}

/// `D0 = AG(n, 2)` with its hyperplane resolution, `D1` the trivial design on
/// `V`, `D2` one of the two labelings above, and `ψ` from the addition table
/// of `V`. Class `i` has normal vector `i + 1`.
pub fn ingredients(n: usize, labels: D2Labels) -> Result<CompositionInput> {
    check_design_n(n)?;
    let (d0, res) = affine_space_hyperplanes(n, 2)?;
    let side = 1usize << n;
    let r = side - 1;
    let d1 = crate::builders::trivial_symmetric(side)?;
    let square = addition_table_elementary_abelian(n as u32)?;
    let psi = latin_to_bijections(&square, &d1, &(0..r).collect::<Vec<_>>())?;
    let flip = match labels {
        D2Labels::Dual => 0,
        D2Labels::Complemented => 1,
    };
    let d2_blocks = (0..side)
        .map(|p| (0..r).map(|i| 2 * i + (dot(i as u32 + 1, p as u32) ^ flip) as usize).collect())
        .collect();
    let d2 = IncidenceStructure::new(d0.b(), d2_blocks)?;
    let groups = TransversalGrouping::new(res.classes().to_vec());
    CompositionInput::new(d0, res, d1, psi, d2, groups)
}

/// Sends `P(v, x)` to the composed point `(x, v)`, numbered `v·2ⁿ + x`.
pub fn grid_to_composed(n: usize) -> Permutation {
    Permutation::new(
        (0..1usize << (2 * n))
            .map(|code| {
                let p = GridPoint::from_code(n, code);
                ((p.v as usize) << n) | p.x as usize
            })
            .collect(),
    )
    .expect("coordinate swap is a bijection")
}

/// `gens` transported to the composed numbering.
pub fn on_composed(n: usize, gens: &[Permutation]) -> Vec<Permutation> {
    let s = grid_to_composed(n);
    gens.iter().map(|g| g.conjugate_by(&s)).collect()
}
