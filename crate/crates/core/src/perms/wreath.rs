//! Partition-preserving permutations of `Δ0 × Δ1` and the properties that
//! characterise the automorphisms of a composed design among them.

use crate::compose::CompositionInput;
use crate::error::{Error, Result};

use super::{BlockLookup, Permutation};

/// `g = (h_0, …, h_{v1−1})σ`, acting by `(δ, j) ↦ (δ^{h_j}, j^σ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WreathElement {
    pub h: Vec<Permutation>,
    pub sigma: Permutation,
}

impl WreathElement {
    /// Reassembles the permutation of the `v0·v1` encoded points.
    pub fn to_permutation(&self) -> Permutation {
        let v0 = self.h.first().map_or(0, Permutation::degree);
        let images = (0..self.h.len())
            .flat_map(|j| (0..v0).map(move |d| (j, d)))
            .map(|(j, d)| self.sigma.apply(j) * v0 + self.h[j].apply(d))
            .collect();
        Permutation::new(images).expect("wreath components are bijections")
    }
}

/// Splits `g` into its part maps and part permutation. Fails when some part
/// `Δ0 × {j}` is not mapped onto a single part.
pub fn decompose_wreath(g: &Permutation, v0: usize, v1: usize) -> Result<WreathElement> {
    if g.degree() != v0 * v1 {
        return Err(Error::NotPermutation(format!(
            "degree {} is not {v0}·{v1}",
            g.degree()
        )));
    }
    let mut h = Vec::with_capacity(v1);
    let mut sigma = Vec::with_capacity(v1);
    for j in 0..v1 {
        let target = g.apply(j * v0) / v0;
        let mut images = Vec::with_capacity(v0);
        for d in 0..v0 {
            let y = g.apply(j * v0 + d);
            if y / v0 != target {
                return Err(Error::SplitsPart { part: j });
            }
            images.push(y % v0);
        }
        h.push(Permutation::new(images)?);
        sigma.push(target);
    }
    Ok(WreathElement {
        h,
        sigma: Permutation::new(sigma)?,
    })
}

/// Lookup tables shared by the property checks for one composition input.
pub struct WreathFrame<'a> {
    pub input: &'a CompositionInput,
    d0_blocks: BlockLookup,
    d1_blocks: BlockLookup,
    d2_blocks: BlockLookup,
    class_of: Vec<usize>,
    inverse: Vec<Vec<usize>>,
    selection: Vec<Vec<usize>>,
    classes_sorted: Vec<Vec<usize>>,
}

impl<'a> WreathFrame<'a> {
    pub fn new(input: &'a CompositionInput) -> Self {
        let classes_sorted = input
            .resolution()
            .classes()
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.sort_unstable();
                c
            })
            .collect();
        Self {
            input,
            d0_blocks: BlockLookup::new(input.d0()),
            d1_blocks: BlockLookup::new(input.d1()),
            d2_blocks: BlockLookup::new(input.d2()),
            class_of: input.resolution().class_of(input.d0().b()),
            inverse: input.psi().inverse_table(input.d1().v()),
            selection: input.selection(),
            classes_sorted,
        }
    }

    pub fn v0(&self) -> usize {
        self.input.d0().v()
    }

    pub fn v1(&self) -> usize {
        self.input.d1().v()
    }

    /// `ψ_β^{-1}(j)` as a class index.
    pub fn class_for(&self, beta: usize, j: usize) -> usize {
        self.inverse[beta][j]
    }

    /// Block of `D0` selected by `γ` in the class `ψ_β^{-1}(j)`.
    pub fn selected(&self, gamma: usize, beta: usize, j: usize) -> Option<usize> {
        let l = self.selection[gamma][self.inverse[beta][j]];
        (l != usize::MAX).then_some(l)
    }

    /// `β^σ` as a block index of `D1`.
    pub fn sigma_block(&self, sigma: &Permutation, beta: usize) -> Option<usize> {
        self.d1_blocks.image(self.input.d1().block(beta), sigma)
    }

    /// Image under `h` of block `l` of `D0`, as a block index.
    pub fn d0_image(&self, h: &Permutation, l: usize) -> Option<usize> {
        self.d0_blocks.image(self.input.d0().block(l), h)
    }

    /// Image under `h` of class `c`, as a class index, when it is one.
    pub fn class_image(&self, h: &Permutation, c: usize) -> Option<usize> {
        let mut img = self.input.resolution().classes()[c]
            .iter()
            .map(|&l| self.d0_image(h, l))
            .collect::<Option<Vec<_>>>()?;
        img.sort_unstable();
        self.classes_sorted.iter().position(|cl| *cl == img)
    }

    /// Whether `h` preserves the blocks of `D0` and its parallel classes.
    pub fn in_aut_star(&self, h: &Permutation) -> bool {
        (0..self.input.resolution().r()).all(|c| self.class_image(h, c).is_some())
    }

    pub fn d2_find(&self, sorted_d0_blocks: &[usize]) -> Option<usize> {
        self.d2_blocks.find(sorted_d0_blocks)
    }

    fn check_sigma(&self, sigma: &Permutation) -> Result<Vec<usize>> {
        (0..self.input.d1().b())
            .map(|beta| {
                self.sigma_block(sigma, beta)
                    .ok_or(Error::SigmaNotAutomorphism { block: beta })
            })
            .collect()
    }
}

/// `(ψ_β^{-1}(j))^{h_j} = ψ_{β^σ}^{-1}(j^σ)` for every `β` and `j ∈ β`.
///
/// A `σ` outside `Aut(D1)` is reported as its own error.
pub fn check_prop1(w: &WreathElement, frame: &WreathFrame) -> Result<()> {
    let sigma_blocks = frame.check_sigma(&w.sigma)?;
    let d1 = frame.input.d1();
    for (beta, &beta_img) in sigma_blocks.iter().enumerate() {
        for &j in d1.block(beta) {
            let image = frame.class_image(&w.h[j], frame.class_for(beta, j));
            if image != Some(frame.class_for(beta_img, w.sigma.apply(j))) {
                return Err(Error::PropertyFails {
                    property: 1,
                    beta,
                    gamma: None,
                    j: Some(j),
                });
            }
        }
    }
    Ok(())
}

/// `γ'_{γ,β,g}`: the images `(γ ∩ ψ_β^{-1}(j))^{h_j}` over `j ∈ β` with a
/// nonempty intersection, as sorted point sets of `Δ0`, sorted and deduplicated.
pub fn gamma_prime(gamma: usize, beta: usize, w: &WreathElement, frame: &WreathFrame) -> Vec<Vec<usize>> {
    let d0 = frame.input.d0();
    let mut out: Vec<Vec<usize>> = frame
        .input
        .d1()
        .block(beta)
        .iter()
        .filter_map(|&j| {
            frame.selected(gamma, beta, j).map(|l| {
                let mut img: Vec<usize> = d0.block(l).iter().map(|&x| w.h[j].apply(x)).collect();
                img.sort_unstable();
                img
            })
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// `γ' ∈ L2` and `γ' ∩ ψ_{β^σ}^{-1}(j^σ) = (γ ∩ ψ_β^{-1}(j))^{h_j}` for
/// all `β`, `γ` and `j ∈ β`.
pub fn check_prop2(w: &WreathElement, frame: &WreathFrame) -> Result<()> {
    let d1 = frame.input.d1();
    let fail = |beta, gamma, j| Error::PropertyFails {
        property: 2,
        beta,
        gamma,
        j,
    };
    for beta in 0..d1.b() {
        let beta_img = frame.sigma_block(&w.sigma, beta).ok_or(fail(beta, None, None))?;
        for gamma in 0..frame.input.d2().b() {
            let image_sets = gamma_prime(gamma, beta, w, frame);
            let mut as_blocks = Vec::with_capacity(image_sets.len());
            for set in &image_sets {
                as_blocks.push(frame.d0_blocks.find(set).ok_or(fail(beta, Some(gamma), None))?);
            }
            as_blocks.sort_unstable();
            let gp = frame.d2_find(&as_blocks).ok_or(fail(beta, Some(gamma), None))?;
            for &j in d1.block(beta) {
                let lhs = frame.selected(gp, beta_img, w.sigma.apply(j));
                let rhs = match frame.selected(gamma, beta, j) {
                    Some(l) => Some(frame.d0_image(&w.h[j], l).ok_or(fail(beta, Some(gamma), Some(j)))?),
                    None => None,
                };
                if lhs != rhs {
                    return Err(fail(beta, Some(gamma), Some(j)));
                }
            }
        }
    }
    Ok(())
}

/// Membership test through the characterisation: every `h_j` preserves the
/// blocks and parallel classes of `D0`, `σ ∈ Aut(D1)`, and property (2)
/// holds.
pub fn is_aut_via_charg(w: &WreathElement, frame: &WreathFrame) -> bool {
    w.h.len() == frame.v1()
        && w.h.iter().all(|h| h.degree() == frame.v0() && frame.in_aut_star(h))
        && frame.check_sigma(&w.sigma).is_ok()
        && check_prop2(w, frame).is_ok()
}

/// Permutation of the points of `D2` (blocks of `D0`) induced by an element
/// stabilising `β`: `ℓ ↦ ℓ^{h_j}` where `ψ_β` sends the class of `ℓ` to `j`.
pub fn phi_beta(w: &WreathElement, beta: usize, frame: &WreathFrame) -> Result<Permutation> {
    if frame.sigma_block(&w.sigma, beta) != Some(beta) {
        return Err(Error::SigmaMovesBlock(beta));
    }
    let psi = frame.input.psi();
    let images = (0..frame.input.d0().b())
        .map(|l| {
            let j = psi.image(beta, frame.class_of[l]);
            frame
                .d0_image(&w.h[j], l)
                .ok_or(Error::NotInAutStar { part: j })
        })
        .collect::<Result<Vec<_>>>()?;
    Permutation::new(images)
}
