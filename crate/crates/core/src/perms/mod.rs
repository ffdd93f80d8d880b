//! Permutations, orbits and Schreier stabilizers, plus the automorphism
//! theory of composed designs.
//!
//! Permutations act on the right: `x^(gh) = (x^g)^h`, and
//! [`Permutation::then`] builds `gh`.

mod flags;
mod wreath;

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::incidence::IncidenceStructure;

pub use flags::{flag_transitive_direct, flag_conditions_report, FlagReport};
pub use wreath::{
    check_prop1, check_prop2, decompose_wreath, gamma_prime, is_aut_via_charg, phi_beta, WreathElement,
    WreathFrame,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::NotPermutation(format!("image {x} out of range or repeated")));
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Self { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: self.images.iter().map(|&x| other.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `h^-1 g h`, the conjugate of `self` by `h`.
    pub fn conjugate_by(&self, h: &Permutation) -> Permutation {
        h.inverse().then(self).then(h)
    }
}

/// A group action on `0..degree()`.
pub trait Action {
    fn degree(&self) -> usize;
    fn act(&self, g: &Permutation, x: usize) -> usize;
}

/// Natural action on points.
pub struct OnPoints(pub usize);

impl Action for OnPoints {
    fn degree(&self) -> usize {
        self.0
    }

    fn act(&self, g: &Permutation, x: usize) -> usize {
        g.apply(x)
    }
}

/// Action on the contiguous parts `{j·size, …, j·size + size − 1}`.
pub struct OnParts {
    pub size: usize,
    pub count: usize,
}

impl Action for OnParts {
    fn degree(&self) -> usize {
        self.count
    }

    fn act(&self, g: &Permutation, x: usize) -> usize {
        g.apply(x * self.size) / self.size
    }
}

/// Action given by a closure.
pub struct FnAction<F> {
    pub degree: usize,
    pub f: F,
}

impl<F: Fn(&Permutation, usize) -> usize> Action for FnAction<F> {
    fn degree(&self) -> usize {
        self.degree
    }

    fn act(&self, g: &Permutation, x: usize) -> usize {
        (self.f)(g, x)
    }
}

/// Index from block contents to block number.
#[derive(Debug, Clone)]
pub struct BlockLookup {
    index: HashMap<Vec<usize>, usize>,
}

impl BlockLookup {
    pub fn new(d: &IncidenceStructure) -> Self {
        let mut index = HashMap::with_capacity(d.b());
        for (i, b) in d.blocks().iter().enumerate() {
            index.entry(b.clone()).or_insert(i);
        }
        Self { index }
    }

    pub fn find(&self, sorted_points: &[usize]) -> Option<usize> {
        self.index.get(sorted_points).copied()
    }

    /// Index of the image of `block` under `g`, if that image is a block.
    pub fn image(&self, block: &[usize], g: &Permutation) -> Option<usize> {
        let mut img: Vec<usize> = block.iter().map(|&x| g.apply(x)).collect();
        img.sort_unstable();
        self.find(&img)
    }
}

/// Action on the blocks of a design; generators must be automorphisms.
pub struct OnBlocks<'a> {
    design: &'a IncidenceStructure,
    lookup: BlockLookup,
}

impl<'a> OnBlocks<'a> {
    pub fn new(design: &'a IncidenceStructure) -> Self {
        Self {
            design,
            lookup: BlockLookup::new(design),
        }
    }
}

impl Action for OnBlocks<'_> {
    fn degree(&self) -> usize {
        self.design.b()
    }

    fn act(&self, g: &Permutation, x: usize) -> usize {
        self.lookup
            .image(self.design.block(x), g)
            .expect("generator is not an automorphism")
    }
}

/// Action on flags, numbered block by block in block-point order.
pub struct OnFlags<'a> {
    design: &'a IncidenceStructure,
    lookup: BlockLookup,
    offset: Vec<usize>,
}

impl<'a> OnFlags<'a> {
    pub fn new(design: &'a IncidenceStructure) -> Self {
        let mut offset = Vec::with_capacity(design.b() + 1);
        let mut acc = 0;
        for b in design.blocks() {
            offset.push(acc);
            acc += b.len();
        }
        offset.push(acc);
        Self {
            design,
            lookup: BlockLookup::new(design),
            offset,
        }
    }

    pub fn flag(&self, index: usize) -> (usize, usize) {
        let block = self.offset.partition_point(|&o| o <= index) - 1;
        (self.design.block(block)[index - self.offset[block]], block)
    }

    pub fn index(&self, point: usize, block: usize) -> Option<usize> {
        let pos = self.design.block(block).binary_search(&point).ok()?;
        Some(self.offset[block] + pos)
    }
}

impl Action for OnFlags<'_> {
    fn degree(&self) -> usize {
        *self.offset.last().unwrap()
    }

    fn act(&self, g: &Permutation, x: usize) -> usize {
        let (p, b) = self.flag(x);
        let nb = self
            .lookup
            .image(self.design.block(b), g)
            .expect("generator is not an automorphism");
        self.index(g.apply(p), nb).unwrap()
    }
}

/// Orbit of a seed with a Schreier vector: `parent[y] = (generator, x)`
/// with `x^gen = y`.
#[derive(Debug, Clone)]
pub struct Orbit {
    elements: Vec<usize>,
    parent: HashMap<usize, Option<(usize, usize)>>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements in discovery order; the seed first.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn sorted(&self) -> Vec<usize> {
        let mut v = self.elements.clone();
        v.sort_unstable();
        v
    }

    pub fn contains(&self, x: usize) -> bool {
        self.parent.contains_key(&x)
    }

    /// Generator indices whose product carries the seed to `y`.
    pub fn word(&self, mut y: usize) -> Option<Vec<usize>> {
        let mut word = Vec::new();
        loop {
            match self.parent.get(&y)? {
                None => break,
                Some((g, x)) => {
                    word.push(*g);
                    y = *x;
                }
            }
        }
        word.reverse();
        Some(word)
    }
}

pub fn orbit(gens: &[Permutation], seed: usize, action: &impl Action) -> Orbit {
    let mut parent = HashMap::new();
    parent.insert(seed, None);
    let mut elements = vec![seed];
    let mut i = 0;
    while i < elements.len() {
        let x = elements[i];
        for (gi, g) in gens.iter().enumerate() {
            let y = action.act(g, x);
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(y) {
                e.insert(Some((gi, x)));
                elements.push(y);
            }
        }
        i += 1;
    }
    Orbit { elements, parent }
}

/// Orbits of the group on its whole domain, each sorted, in order of their
/// least element.
pub fn orbits(gens: &[Permutation], action: &impl Action) -> Vec<Vec<usize>> {
    let mut seen = vec![false; action.degree()];
    let mut out = Vec::new();
    for x in 0..action.degree() {
        if !seen[x] {
            let o = orbit(gens, x, action).sorted();
            for &y in &o {
                seen[y] = true;
            }
            out.push(o);
        }
    }
    out
}

/// Schreier generators `u_y · s · u_{y^s}^{-1}` for the stabilizer of `x`,
/// with identities and duplicates removed, in sorted order.
pub fn stabilizer_gens(gens: &[Permutation], x: usize, action: &impl Action) -> Vec<Permutation> {
    let Some(first) = gens.first() else {
        return Vec::new();
    };
    let n = first.degree();
    let mut transversal: HashMap<usize, Permutation> = HashMap::new();
    transversal.insert(x, Permutation::identity(n));
    let mut queue = VecDeque::from([x]);
    let mut order = vec![x];
    while let Some(y) = queue.pop_front() {
        let uy = transversal[&y].clone();
        for g in gens {
            let z = action.act(g, y);
            if let std::collections::hash_map::Entry::Vacant(e) = transversal.entry(z) {
                e.insert(uy.then(g));
                queue.push_back(z);
                order.push(z);
            }
        }
    }
    let mut out = BTreeSet::new();
    for y in order {
        let uy = &transversal[&y];
        for g in gens {
            let z = action.act(g, y);
            let s = uy.then(g).then(&transversal[&z].inverse());
            if !s.is_identity() {
                out.insert(s);
            }
        }
    }
    out.into_iter().collect()
}

/// All elements of the generated group, or `None` once more than `limit`
/// are found.
pub fn enumerate_group(gens: &[Permutation], degree: usize, limit: usize) -> Option<Vec<Permutation>> {
    let id = Permutation::identity(degree);
    let mut seen = HashSet::from([id.clone()]);
    let mut elements = vec![id];
    let mut i = 0;
    while i < elements.len() {
        for g in gens {
            let h = elements[i].then(g);
            if seen.insert(h.clone()) {
                if seen.len() > limit {
                    return None;
                }
                elements.push(h);
            }
        }
        i += 1;
    }
    Some(elements)
}

/// Whether `g` maps the block multiset of `d` onto itself.
pub fn is_automorphism(d: &IncidenceStructure, g: &Permutation) -> bool {
    if g.degree() != d.v() {
        return false;
    }
    let mut images: Vec<Vec<usize>> = d
        .blocks()
        .iter()
        .map(|b| {
            let mut img: Vec<usize> = b.iter().map(|&x| g.apply(x)).collect();
            img.sort_unstable();
            img
        })
        .collect();
    images.sort();
    images == d.sorted_blocks()
}

/// Permutation induced on the blocks, if `g` is an automorphism.
pub fn induced_on_blocks(d: &IncidenceStructure, g: &Permutation) -> Option<Permutation> {
    let lookup = BlockLookup::new(d);
    let images = d
        .blocks()
        .iter()
        .map(|b| lookup.image(b, g))
        .collect::<Option<Vec<_>>>()?;
    Permutation::new(images).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::trivial_symmetric;

    fn cycle(n: usize) -> Permutation {
        Permutation::new((0..n).map(|i| (i + 1) % n).collect()).unwrap()
    }

    #[test]
    fn composition_is_left_to_right() {
        let a = Permutation::new(vec![1, 0, 2]).unwrap();
        let b = Permutation::new(vec![0, 2, 1]).unwrap();
        // 0 -a-> 1 -b-> 2
        assert_eq!(a.then(&b).apply(0), 2);
        assert!(a.then(&a.inverse()).is_identity());
        assert!(Permutation::new(vec![0, 0]).is_err());
    }

    #[test]
    fn orbits_and_words() {
        let g = vec![cycle(5)];
        let o = orbit(&g, 2, &OnPoints(5));
        assert_eq!(o.len(), 5);
        let w = o.word(0).unwrap();
        let mut x = 2;
        for gi in w {
            x = g[gi].apply(x);
        }
        assert_eq!(x, 0);
        let id = vec![Permutation::identity(4)];
        assert_eq!(orbit(&id, 3, &OnPoints(4)).sorted(), vec![3]);
    }

    #[test]
    fn stabilizer_of_symmetric_group() {
        let gens = vec![cycle(5), Permutation::transposition(5, 0, 1)];
        let stab = stabilizer_gens(&gens, 0, &OnPoints(5));
        assert!(stab.iter().all(|s| s.apply(0) == 0));
        assert_eq!(enumerate_group(&stab, 5, 1000).unwrap().len(), 24);
        // Regular action: trivial stabilizer.
        assert!(stabilizer_gens(&[cycle(7)], 3, &OnPoints(7)).is_empty());
    }

    #[test]
    fn flags_and_blocks_actions() {
        let d = trivial_symmetric(5).unwrap();
        let gens = vec![cycle(5), Permutation::transposition(5, 0, 1)];
        assert!(gens.iter().all(|g| is_automorphism(&d, g)));
        let flags = OnFlags::new(&d);
        assert_eq!(flags.degree(), 20);
        for i in 0..20 {
            let (p, b) = flags.flag(i);
            assert_eq!(flags.index(p, b), Some(i));
        }
        assert_eq!(orbit(&gens, 0, &flags).len(), 20);
        assert_eq!(orbit(&gens, 0, &OnBlocks::new(&d)).len(), 5);
        assert!(induced_on_blocks(&d, &gens[0]).is_some());
    }
}
