//! The imprimitive composition of a resolvable design `D0`, a symmetric
//! index design `D1` and a transversal design `D2` on the blocks of `D0`.
//!
//! Point `(δ, j)` of `Δ0 × Δ1` is encoded as `j·v0 + δ`, so the parts
//! `Δ0 × {j}` are contiguous ranges. Blocks are listed `β`-major, then by
//! `γ`, and each carries its label `(β, γ)`.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::builders::{affine_plane, dual_transversal, trivial_symmetric};
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::incidence::{verify_resolution, verify_transversal, IncidenceStructure, Resolution, TransversalGrouping};
use crate::latin::{latin_to_bijections, validate_bijections, BijectionFamily, LatinSquare};
use crate::perms::Permutation;

#[derive(Debug, Clone)]
pub struct CompositionInput {
    d0: IncidenceStructure,
    resolution: Resolution,
    d1: IncidenceStructure,
    psi: BijectionFamily,
    d2: IncidenceStructure,
    groups: TransversalGrouping,
}

fn same_set(a: &[usize], b: &[usize]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

impl CompositionInput {
    /// Checks the structural invariants: the resolution is valid, `D1` is
    /// symmetric with blocks of size `r`, the family satisfies the
    /// uniqueness condition, and `D2` lives on the blocks of `D0` with
    /// group `i` equal to parallel class `i`.
    pub fn new(
        d0: IncidenceStructure,
        resolution: Resolution,
        d1: IncidenceStructure,
        psi: BijectionFamily,
        d2: IncidenceStructure,
        groups: TransversalGrouping,
    ) -> Result<Self> {
        verify_resolution(&d0, &resolution)?;
        if !d1.is_symmetric() {
            return Err(Error::Composition("index design is not symmetric".into()));
        }
        if d1.uniform_block_size()? != resolution.r() {
            return Err(Error::Composition(format!(
                "index blocks have size {}, but there are {} parallel classes",
                d1.uniform_block_size()?,
                resolution.r()
            )));
        }
        validate_bijections(&psi, &d1, &resolution)?;
        if d2.v() != d0.b() {
            return Err(Error::Composition(format!(
                "transversal design has {} points, but D0 has {} blocks",
                d2.v(),
                d0.b()
            )));
        }
        if groups.groups().len() != resolution.r()
            || groups
                .groups()
                .iter()
                .zip(resolution.classes())
                .any(|(g, c)| !same_set(g, c))
        {
            return Err(Error::Composition("groups do not match the parallel classes".into()));
        }
        verify_transversal(&d2, &groups)?;
        Ok(Self {
            d0,
            resolution,
            d1,
            psi,
            d2,
            groups,
        })
    }

    /// Inputs for an affine resolvable `D0` and a Latin square of order
    /// `r + 1`: trivial index design, dual transversal design, and the
    /// family read off the square with column `c` assigned to class `c − 1`.
    pub fn affine(d0: IncidenceStructure, resolution: Resolution, square: &LatinSquare) -> Result<Self> {
        let r = resolution.r();
        if square.order() != r + 1 {
            return Err(Error::Composition(format!(
                "Latin square of order {} for {r} parallel classes",
                square.order()
            )));
        }
        let d1 = trivial_symmetric(r + 1)?;
        let (d2, groups) = dual_transversal(&d0, &resolution)?;
        let psi = latin_to_bijections(square, &d1, &(0..r).collect::<Vec<_>>())?;
        Self::new(d0, resolution, d1, psi, d2, groups)
    }

    pub fn d0(&self) -> &IncidenceStructure {
        &self.d0
    }

    pub fn resolution(&self) -> &Resolution {
        &self.resolution
    }

    pub fn d1(&self) -> &IncidenceStructure {
        &self.d1
    }

    pub fn psi(&self) -> &BijectionFamily {
        &self.psi
    }

    pub fn d2(&self) -> &IncidenceStructure {
        &self.d2
    }

    pub fn groups(&self) -> &TransversalGrouping {
        &self.groups
    }

    /// `selection[γ][class]`: the block of `D0` that `γ` picks from the
    /// class, or `usize::MAX` when `γ` misses it.
    pub fn selection(&self) -> Vec<Vec<usize>> {
        let class_of = self.resolution.class_of(self.d0.b());
        self.d2
            .blocks()
            .iter()
            .map(|gamma| {
                let mut sel = vec![usize::MAX; self.resolution.r()];
                for &l in gamma {
                    sel[class_of[l]] = l;
                }
                sel
            })
            .collect()
    }
}

/// Parameters of the three inputs and the predicted shape of the output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamLedger {
    pub v0: usize,
    pub k0: usize,
    pub lambda0: usize,
    pub r: usize,
    pub s: usize,
    pub v1: usize,
    pub lambda1: usize,
    pub k2: usize,
    pub lambda2: usize,
    pub r2: usize,
    pub b2: usize,
    pub points: usize,
    pub blocks: usize,
    pub block_size: usize,
    pub replication: usize,
    /// As many blocks as points: `r(r−1)sλ2 = k0·k2·(k2−1)`.
    pub symmetric: bool,
    /// Pairs balanced: `λ1·(k2−1) = λ0·(r−1)·s`.
    pub two_design: bool,
    /// `λ1·λ2` when `two_design` holds.
    pub lambda: Option<usize>,
}

impl std::fmt::Display for ParamLedger {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "D0: 2-({},{},{}) resolvable, r={} s={}", self.v0, self.k0, self.lambda0, self.r, self.s)?;
        writeln!(f, "D1: 2-({},{},{}) symmetric", self.v1, self.r, self.lambda1)?;
        writeln!(f, "D2: k2={} lambda2={} r2={} b2={}", self.k2, self.lambda2, self.r2, self.b2)?;
        writeln!(
            f,
            "output: 1-({},{},{}) with {} blocks",
            self.points, self.block_size, self.replication, self.blocks
        )?;
        writeln!(
            f,
            "symmetric (r(r-1)s*lambda2 = k0*k2(k2-1)): {}",
            if self.symmetric { "yes" } else { "no" }
        )?;
        write!(
            f,
            "2-design (lambda1 = lambda0(r-1)s/(k2-1)): {}",
            match self.lambda {
                Some(l) => format!("yes, lambda = {l}"),
                None => "no".into(),
            }
        )
    }
}

fn exact_div(num: usize, den: usize, what: &str) -> Result<usize> {
    if den == 0 || !num.is_multiple_of(den) {
        return Err(Error::Composition(format!("{what} = {num}/{den} is not an integer")));
    }
    Ok(num / den)
}

/// Computes every parameter from the inputs by exact counting and applies
/// the symmetry and balance conditions.
pub fn predict(input: &CompositionInput) -> Result<ParamLedger> {
    let d0 = input.d0();
    let v0 = d0.v();
    let k0 = d0.uniform_block_size()?;
    let lambda0 = d0.verify_tdesign(2)?;
    let (r, s) = (input.resolution().r(), input.resolution().s());
    if v0 != s * k0 || (v0 - 1) * lambda0 != r * (k0 - 1) {
        return Err(Error::Composition("D0 parameters violate v0 = s·k0, (v0−1)λ0 = r(k0−1)".into()));
    }
    let v1 = input.d1().v();
    let lambda1 = input.d1().verify_tdesign(2)?;
    if (v1 - 1) * lambda1 != r * (r - 1) {
        return Err(Error::Composition("D1 parameters violate (v1−1)λ1 = r(r−1)".into()));
    }
    let (k2, lambda2) = verify_transversal(input.d2(), input.groups())?;
    if k2 < 2 {
        return Err(Error::Composition(format!("transversal blocks of size {k2}")));
    }
    let r2 = exact_div((r - 1) * s * lambda2, k2 - 1, "r2")?;
    let b2 = exact_div(r * (r - 1) * s * s * lambda2, k2 * (k2 - 1), "b2")?;
    if input.d2().b() != b2 || (0..input.d2().v()).any(|l| input.d2().replication(l) != r2) {
        return Err(Error::Composition(format!(
            "D2 has {} blocks and non-constant or unexpected replication; predicted b2={b2}, r2={r2}",
            input.d2().b()
        )));
    }
    let symmetric = r * (r - 1) * s * lambda2 == k0 * k2 * (k2 - 1);
    let two_design = lambda1 * (k2 - 1) == lambda0 * (r - 1) * s;
    Ok(ParamLedger {
        v0,
        k0,
        lambda0,
        r,
        s,
        v1,
        lambda1,
        k2,
        lambda2,
        r2,
        b2,
        points: v0 * v1,
        blocks: input.d1().b() * b2,
        block_size: k0 * k2,
        replication: r * r2,
        symmetric,
        two_design,
        lambda: two_design.then_some(lambda1 * lambda2),
    })
}

/// Output of the construction.
#[derive(Debug, Clone)]
pub struct Composition {
    pub design: IncidenceStructure,
    /// `(β, γ)` for each block, in block order.
    pub labels: Vec<(usize, usize)>,
    pub v0: usize,
    pub v1: usize,
    pub ledger: ParamLedger,
}

impl Composition {
    #[inline]
    pub fn point(&self, delta: usize, j: usize) -> usize {
        j * self.v0 + delta
    }

    /// `(δ, j)` of an encoded point.
    #[inline]
    pub fn coords(&self, x: usize) -> (usize, usize) {
        (x % self.v0, x / self.v0)
    }

    /// The parts `Δ0 × {j}`.
    pub fn point_partition(&self) -> Vec<Vec<usize>> {
        (0..self.v1)
            .map(|j| (j * self.v0..(j + 1) * self.v0).collect())
            .collect()
    }

    /// The block classes `B_β`, as lists of block indices.
    pub fn block_partition(&self) -> Vec<Vec<usize>> {
        let nb = self.labels.iter().map(|l| l.0 + 1).max().unwrap_or(0);
        let mut parts = vec![Vec::new(); nb];
        for (i, &(beta, _)) in self.labels.iter().enumerate() {
            parts[beta].push(i);
        }
        parts
    }
}

/// Builds `B_β(γ) = ∪_{j∈β} (γ ∩ ψ_β^{-1}(j)) × {j}` for every `β` and `γ`.
/// Empty intersections contribute nothing.
pub fn construct(input: &CompositionInput) -> Result<Composition> {
    let ledger = predict(input)?;
    let v0 = ledger.v0;
    let v1 = ledger.v1;
    let selection = input.selection();
    let inverse = input.psi().inverse_table(v1);
    let d0 = input.d0();
    let per_beta: Vec<Vec<Vec<usize>>> = (0..input.d1().b())
        .into_par_iter()
        .map(|beta| {
            selection
                .iter()
                .map(|sel| {
                    let mut block = Vec::with_capacity(ledger.block_size);
                    for &j in input.d1().block(beta) {
                        let l = sel[inverse[beta][j]];
                        if l != usize::MAX {
                            block.extend(d0.block(l).iter().map(|&delta| j * v0 + delta));
                        }
                    }
                    block
                })
                .collect()
        })
        .collect();
    let b2 = input.d2().b();
    let labels = (0..input.d1().b())
        .flat_map(|beta| (0..b2).map(move |gamma| (beta, gamma)))
        .collect();
    let design = IncidenceStructure::new(v0 * v1, per_beta.into_iter().flatten().collect())?;

    if design.b() != ledger.blocks
        || design.uniform_block_size()? != ledger.block_size
        || design.verify_tdesign(1)? != ledger.replication
    {
        return Err(Error::Composition("constructed design disagrees with the ledger".into()));
    }
    Ok(Composition {
        design,
        labels,
        v0,
        v1,
        ledger,
    })
}

/// Composition of an affine resolvable design with a Latin square of order
/// `r + 1`; symmetric 2-(s²μ(r+1), sμr, μ(r−1)).
pub fn affine_symmetric(d0: IncidenceStructure, resolution: Resolution, square: &LatinSquare) -> Result<Composition> {
    construct(&CompositionInput::affine(d0, resolution, square)?)
}

/// Quasi-affine symmetric 2-(q²(q+2), q(q+1), q) design from AG(2, q) and a
/// Latin square of order `q + 2`.
pub fn sane(q: u32, square: &LatinSquare) -> Result<Composition> {
    let (d0, res) = affine_plane(q)?;
    affine_symmetric(d0, res, square)
}

/// The `q²` maps `(δ, j) ↦ (δ + t, j)` for translations `t` of AG(2, q),
/// on `v1` parts, with points of the plane numbered as in
/// [`affine_plane`].
pub fn diagonal_translations(q: u32, v1: usize) -> Result<Vec<Permutation>> {
    let f = Field::with_order(q)?;
    let v0 = (q * q) as usize;
    let mut out = Vec::with_capacity(v0);
    for t in 0..v0 {
        let tc = f.decode(t, 2);
        let images = (0..v1)
            .flat_map(|j| (0..v0).map(move |d| (j, d)))
            .map(|(j, d)| {
                let c = f.decode(d, 2);
                j * v0 + f.encode(&[f.add(c[0], tc[0]), f.add(c[1], tc[1])])
            })
            .collect();
        out.push(Permutation::new(images)?);
    }
    Ok(out)
}

/// Distinct pair counts among point pairs inside one part, and among pairs
/// from different parts.
pub fn pair_count_strata(c: &Composition) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let v = c.design.v();
    let rows: Vec<(BTreeSet<usize>, BTreeSet<usize>)> = (0..v)
        .into_par_iter()
        .map(|x| {
            let mut same = BTreeSet::new();
            let mut cross = BTreeSet::new();
            for y in x + 1..v {
                let n = c.design.pair_count(x, y);
                if x / c.v0 == y / c.v0 {
                    same.insert(n);
                } else {
                    cross.insert(n);
                }
            }
            (same, cross)
        })
        .collect();
    rows.into_iter().fold((BTreeSet::new(), BTreeSet::new()), |(mut a, mut b), (s, c)| {
        a.extend(s);
        b.extend(c);
        (a, b)
    })
}
