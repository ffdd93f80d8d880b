//! Latin squares, the Jacobson–Matthews sampler, and the correspondence
//! between Latin squares and bijection families on a trivial index design.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::incidence::{IncidenceStructure, Resolution};

/// Identifier of the generator behind every seeded routine in the crate.
pub const RNG_ALGORITHM: &str = "chacha8";

/// Seeded generator for stream `stream` of `seed`. Distinct streams of the
/// same seed are independent, which is how parallel jobs split a seed.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatinSquare {
    n: usize,
    cells: Vec<usize>,
}

/// Checks that every row and every column of `rows` is a permutation of
/// `0..n`. Rows are checked before columns; the witness is the first line
/// with a repeated symbol.
pub fn validate_latin(rows: &[Vec<usize>]) -> Result<()> {
    let n = rows.len();
    let mut seen = vec![false; n];
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidArgument(format!("row {i} has length {}", row.len())));
        }
        seen.fill(false);
        for &s in row {
            if s >= n {
                return Err(Error::NotLatin {
                    what: "row",
                    line: i,
                    symbol: s,
                });
            }
            if seen[s] {
                return Err(Error::NotLatin {
                    what: "row",
                    line: i,
                    symbol: s,
                });
            }
            seen[s] = true;
        }
    }
    for c in 0..n {
        seen.fill(false);
        for row in rows {
            let s = row[c];
            if seen[s] {
                return Err(Error::NotLatin {
                    what: "column",
                    line: c,
                    symbol: s,
                });
            }
            seen[s] = true;
        }
    }
    Ok(())
}

impl LatinSquare {
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        validate_latin(&rows)?;
        let n = rows.len();
        Ok(Self {
            n,
            cells: rows.into_iter().flatten().collect(),
        })
    }

    /// `L[i][j] = (i + j) mod n`.
    pub fn cyclic(n: usize) -> Self {
        Self {
            n,
            cells: (0..n * n).map(|c| (c / n + c % n) % n).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> usize {
        self.cells[r * self.n + c]
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.cells[r * self.n..(r + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|r| self.row(r).to_vec()).collect()
    }

    /// Rows reordered so that row `b` starts with symbol `b`.
    pub fn normalized_by_first_column(&self) -> Self {
        let mut rows = self.rows();
        rows.sort_by_key(|row| row[0]);
        Self {
            n: self.n,
            cells: rows.into_iter().flatten().collect(),
        }
    }
}

/// Addition table of GF(2)^m: `L[b][c] = b XOR c`.
pub fn addition_table_elementary_abelian(m: u32) -> Result<LatinSquare> {
    if !(1..=6).contains(&m) {
        return Err(Error::InvalidArgument(format!("m = {m} not in 1..=6")));
    }
    let n = 1usize << m;
    Ok(LatinSquare {
        n,
        cells: (0..n * n).map(|c| (c / n) ^ (c % n)).collect(),
    })
}

/// Markov chain on the incidence cube of a Latin square (Jacobson and
/// Matthews). The state is a 0/1 array over rows × columns × symbols with
/// every line summing to one, except in improper states where a single
/// cell holds −1 and its three lines each carry two 1s.
pub struct JmChain {
    n: usize,
    cube: Vec<i8>,
    improper: Option<(usize, usize, usize)>,
    rng: ChaCha8Rng,
}

impl JmChain {
    pub fn new(n: usize, rng: ChaCha8Rng) -> Self {
        assert!(n >= 2, "Latin squares of order < 2 have no moves");
        let start = LatinSquare::cyclic(n);
        let mut cube = vec![0i8; n * n * n];
        for r in 0..n {
            for c in 0..n {
                cube[(r * n + c) * n + start.get(r, c)] = 1;
            }
        }
        Self {
            n,
            cube,
            improper: None,
            rng,
        }
    }

    #[inline]
    fn idx(&self, r: usize, c: usize, s: usize) -> usize {
        (r * self.n + c) * self.n + s
    }

    fn ones_along(&self, f: impl Fn(usize) -> usize) -> Vec<usize> {
        (0..self.n).filter(|&t| self.cube[f(t)] == 1).collect()
    }

    fn pick(&mut self, options: &[usize]) -> usize {
        options[self.rng.random_range(0..options.len())]
    }

    pub fn is_proper(&self) -> bool {
        self.improper.is_none()
    }

    /// One ±1 move.
    pub fn step(&mut self) {
        let n = self.n;
        let (r, c, s) = match self.improper {
            Some(cell) => cell,
            None => loop {
                let r = self.rng.random_range(0..n);
                let c = self.rng.random_range(0..n);
                let s = self.rng.random_range(0..n);
                if self.cube[self.idx(r, c, s)] == 0 {
                    break (r, c, s);
                }
            },
        };
        let rows = self.ones_along(|t| (t * n + c) * n + s);
        let cols = self.ones_along(|t| (r * n + t) * n + s);
        let syms = self.ones_along(|t| (r * n + c) * n + t);
        let r1 = self.pick(&rows);
        let c1 = self.pick(&cols);
        let s1 = self.pick(&syms);

        for (a, b, d) in [(r, c, s), (r, c1, s1), (r1, c, s1), (r1, c1, s)] {
            let i = self.idx(a, b, d);
            self.cube[i] += 1;
        }
        for (a, b, d) in [(r, c, s1), (r, c1, s), (r1, c, s), (r1, c1, s1)] {
            let i = self.idx(a, b, d);
            self.cube[i] -= 1;
        }
        let corner = self.idx(r1, c1, s1);
        self.improper = (self.cube[corner] == -1).then_some((r1, c1, s1));
    }

    /// Current square; `None` while the chain sits in an improper state.
    pub fn square(&self) -> Option<LatinSquare> {
        if !self.is_proper() {
            return None;
        }
        let n = self.n;
        let cells = (0..n * n)
            .map(|rc| (0..n).find(|&s| self.cube[rc * n + s] == 1).unwrap())
            .collect();
        Some(LatinSquare { n, cells })
    }

    /// Runs `moves` moves, then continues until the state is proper.
    pub fn advance(&mut self, moves: usize) -> LatinSquare {
        for _ in 0..moves {
            self.step();
        }
        while !self.is_proper() {
            self.step();
        }
        self.square().unwrap()
    }
}

/// Default number of moves before the first sample, `10 n^3`.
pub fn burn_in(n: usize) -> usize {
    10 * n * n * n
}

/// Square produced by `moves` Jacobson–Matthews moves from the cyclic square.
pub fn jm_sample(n: usize, seed: u64, moves: usize) -> LatinSquare {
    JmChain::new(n, rng_for(seed, 0)).advance(moves)
}

/// Stream of squares from one chain: a burn-in of `10 n^3` moves, then one
/// emission every `n^3` moves.
pub struct JmSampler {
    chain: JmChain,
    burn_in: usize,
    interval: usize,
    started: bool,
}

impl JmSampler {
    pub fn new(n: usize, rng: ChaCha8Rng) -> Self {
        Self {
            chain: JmChain::new(n, rng),
            burn_in: burn_in(n),
            interval: n * n * n,
            started: false,
        }
    }

    pub fn with_moves(mut self, burn_in: usize, interval: usize) -> Self {
        self.burn_in = burn_in;
        self.interval = interval.max(1);
        self
    }
}

impl Iterator for JmSampler {
    type Item = LatinSquare;

    fn next(&mut self) -> Option<LatinSquare> {
        let moves = if self.started { self.interval } else { self.burn_in };
        self.started = true;
        Some(self.chain.advance(moves))
    }
}

/// Family `ψ_β : P0 → β`, one row per block of the index design. Row `β`
/// lists `ψ_β(P_0), …, ψ_β(P_{r-1})` by class index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BijectionFamily {
    table: Vec<Vec<usize>>,
}

impl BijectionFamily {
    pub fn new(table: Vec<Vec<usize>>) -> Self {
        Self { table }
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// `ψ_β(P)`.
    #[inline]
    pub fn image(&self, beta: usize, class: usize) -> usize {
        self.table[beta][class]
    }

    /// `ψ_β^{-1}(j)`, the class sent to `j`, if `j ∈ β`.
    pub fn preimage(&self, beta: usize, j: usize) -> Option<usize> {
        self.table[beta].iter().position(|&x| x == j)
    }

    /// Inverse table: `inv[β][j]` is the class mapped to `j`, or `usize::MAX`.
    pub fn inverse_table(&self, v1: usize) -> Vec<Vec<usize>> {
        self.table
            .iter()
            .map(|row| {
                let mut inv = vec![usize::MAX; v1];
                for (c, &j) in row.iter().enumerate() {
                    inv[j] = c;
                }
                inv
            })
            .collect()
    }
}

/// For a trivial index design (blocks `Δ1 \ {b}`) locate the block index of
/// each complement, checking triviality on the way.
fn trivial_block_index(d1: &IncidenceStructure) -> Result<Vec<usize>> {
    let v1 = d1.v();
    let mut index = vec![usize::MAX; v1];
    for (i, block) in d1.blocks().iter().enumerate() {
        if block.len() + 1 != v1 {
            return Err(Error::InvalidArgument("index design is not trivial".into()));
        }
        let missing = (0..v1).find(|&x| block.binary_search(&x).is_err()).unwrap();
        if index[missing] != usize::MAX {
            return Err(Error::InvalidArgument("index design is not trivial".into()));
        }
        index[missing] = i;
    }
    if d1.b() != v1 {
        return Err(Error::InvalidArgument("index design is not trivial".into()));
    }
    Ok(index)
}

/// Reads a bijection family off a Latin square of order `v1` whose column 0
/// plays the role of the dummy class.
///
/// Rows are first sorted by their column-0 symbol, so row `b` has
/// `L[b][0] = b` and describes the block `Δ1 \ {b}`. Column `c ≥ 1` is
/// assigned to class `class_index[c - 1]`.
pub fn latin_to_bijections(
    square: &LatinSquare,
    d1: &IncidenceStructure,
    class_index: &[usize],
) -> Result<BijectionFamily> {
    let v1 = square.order();
    if d1.v() != v1 {
        return Err(Error::InvalidArgument(format!(
            "square order {v1} does not match index design on {} points",
            d1.v()
        )));
    }
    validate_latin(&square.rows())?;
    let block_of = trivial_block_index(d1)?;
    let r = v1 - 1;
    let mut check = class_index.to_vec();
    check.sort_unstable();
    if check != (0..r).collect::<Vec<_>>() {
        return Err(Error::InvalidArgument("class index is not a bijection onto 0..r".into()));
    }
    let norm = square.normalized_by_first_column();
    let mut table = vec![vec![0; r]; v1];
    for b in 0..v1 {
        for c in 1..v1 {
            table[block_of[b]][class_index[c - 1]] = norm.get(b, c);
        }
    }
    Ok(BijectionFamily::new(table))
}

/// Rebuilds a Latin square from a family over a trivial index design: row
/// `b` is `b` followed by `ψ_{Δ1\{b}}` in column order `class_index`.
pub fn bijections_to_latin(
    psi: &BijectionFamily,
    d1: &IncidenceStructure,
    class_index: &[usize],
) -> Result<LatinSquare> {
    let block_of = trivial_block_index(d1)?;
    let rows = (0..d1.v())
        .map(|b| {
            std::iter::once(b)
                .chain(class_index.iter().map(|&c| psi.image(block_of[b], c)))
                .collect()
        })
        .collect();
    LatinSquare::from_rows(rows)
}

/// Checks that each row is a bijection onto its block and that every pair
/// (class, point) is hit by exactly one row.
pub fn validate_bijections(
    psi: &BijectionFamily,
    d1: &IncidenceStructure,
    res: &Resolution,
) -> Result<()> {
    let r = res.r();
    if psi.table().len() != d1.b() {
        return Err(Error::InvalidArgument(format!(
            "family has {} rows for {} blocks",
            psi.table().len(),
            d1.b()
        )));
    }
    for (beta, row) in psi.table().iter().enumerate() {
        if row.len() != r {
            return Err(Error::BadBijectionRow { row: beta });
        }
        let mut sorted = row.clone();
        sorted.sort_unstable();
        if sorted != d1.block(beta) {
            return Err(Error::BadBijectionRow { row: beta });
        }
    }
    let v1 = d1.v();
    let mut count = vec![0usize; r * v1];
    for row in psi.table() {
        for (c, &j) in row.iter().enumerate() {
            count[c * v1 + j] += 1;
        }
    }
    match count.iter().position(|&n| n != 1) {
        Some(i) => Err(Error::BadBijections {
            class: i / v1,
            point: i % v1,
            count: count[i],
        }),
        None => Ok(()),
    }
}

/// Builds a bijection family for an arbitrary index design whose blocks all
/// have size `r` and whose points all lie on `r` blocks, by splitting the
/// `r`-regular block/point incidence graph into `r` perfect matchings.
/// Matching `c` becomes class `c`.
pub fn bijections_by_edge_colouring(d1: &IncidenceStructure, r: usize) -> Result<BijectionFamily> {
    let (v1, b1) = (d1.v(), d1.b());
    if b1 != v1
        || d1.blocks().iter().any(|b| b.len() != r)
        || (0..v1).any(|x| d1.replication(x) != r)
    {
        return Err(Error::InvalidArgument(format!(
            "index design is not {r}-regular with as many blocks as points"
        )));
    }
    let mut remaining: Vec<Vec<usize>> = d1.blocks().to_vec();
    let mut table = vec![vec![usize::MAX; r]; b1];
    for class in 0..r {
        // Kuhn's augmenting paths on the remaining regular bipartite graph.
        let mut match_point = vec![usize::MAX; v1];
        for beta in 0..b1 {
            let mut visited = vec![false; v1];
            if !augment(beta, &remaining, &mut match_point, &mut visited) {
                return Err(Error::InvalidArgument("no perfect matching found".into()));
            }
        }
        for (x, &beta) in match_point.iter().enumerate() {
            table[beta][class] = x;
            remaining[beta].retain(|&y| y != x);
        }
    }
    Ok(BijectionFamily::new(table))
}

fn augment(beta: usize, adj: &[Vec<usize>], match_point: &mut [usize], visited: &mut [bool]) -> bool {
    for &x in &adj[beta] {
        if visited[x] {
            continue;
        }
        visited[x] = true;
        if match_point[x] == usize::MAX || augment(match_point[x], adj, match_point, visited) {
            match_point[x] = beta;
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn trivial(v1: usize) -> IncidenceStructure {
        IncidenceStructure::new(v1, (0..v1).map(|b| (0..v1).filter(|&x| x != b).collect()).collect())
            .unwrap()
    }

    #[test]
    fn validate_cases() {
        assert!(validate_latin(&LatinSquare::cyclic(3).rows()).is_ok());
        let bad = vec![vec![0, 0, 0], vec![1, 2, 0], vec![2, 0, 1]];
        assert_eq!(
            validate_latin(&bad),
            Err(Error::NotLatin {
                what: "row",
                line: 0,
                symbol: 0
            })
        );
        let bad_col = vec![vec![0, 1], vec![0, 1]];
        assert!(matches!(
            validate_latin(&bad_col),
            Err(Error::NotLatin { what: "column", line: 0, .. })
        ));
        assert!(validate_latin(&addition_table_elementary_abelian(3).unwrap().rows()).is_ok());
    }

    #[test]
    fn xor_tables() {
        let t1 = addition_table_elementary_abelian(1).unwrap();
        assert_eq!(t1.rows(), vec![vec![0, 1], vec![1, 0]]);
        let t2 = addition_table_elementary_abelian(2).unwrap();
        assert_eq!(t2.row(1), &[1, 0, 3, 2]);
        for m in 1..=6 {
            let t = addition_table_elementary_abelian(m).unwrap();
            for b in 0..t.order() {
                assert_eq!(t.get(b, 0), b);
                for c in 0..t.order() {
                    assert_eq!(t.get(b, c), t.get(c, b));
                    assert_eq!(t.get(b, t.get(b, c)), c, "row {b} not an involution");
                }
            }
        }
        assert!(addition_table_elementary_abelian(0).is_err());
        assert!(addition_table_elementary_abelian(7).is_err());
    }

    #[test]
    fn jm_outputs_are_latin_and_deterministic() {
        for n in [2, 4, 5, 6, 7] {
            for seed in 0..40 {
                let sq = jm_sample(n, seed, 6 * n * n * n);
                assert!(validate_latin(&sq.rows()).is_ok());
            }
        }
        assert_eq!(jm_sample(6, 17, 2160), jm_sample(6, 17, 2160));
        let order2: HashSet<_> = (0..20).map(|s| jm_sample(2, s, 10)).collect();
        assert!(order2.len() <= 2);
    }

    #[test]
    fn jm_fuzz_many_seeds() {
        for n in 4..=7 {
            for seed in 0..1000 {
                let sq = jm_sample(n, seed, n * n * n);
                assert!(validate_latin(&sq.rows()).is_ok(), "n={n} seed={seed}");
            }
        }
    }

    #[test]
    fn jm_covers_order_four() {
        // There are 576 Latin squares of order 4.
        let distinct: HashSet<_> = (0..10_000).map(|s| jm_sample(4, s, 640)).collect();
        assert!(distinct.len() >= 500, "only {} distinct squares", distinct.len());
        assert!(distinct.len() <= 576);
    }

    #[test]
    fn sampler_stream_is_latin() {
        let squares: Vec<_> = JmSampler::new(6, rng_for(3, 1)).take(5).collect();
        for sq in &squares {
            assert!(validate_latin(&sq.rows()).is_ok());
        }
    }

    #[test]
    fn cyclic_order_three_family() {
        let d1 = trivial(3);
        let psi = latin_to_bijections(&LatinSquare::cyclic(3), &d1, &[0, 1]).unwrap();
        // Row 0 of the cyclic square is (0, 1, 2): block {1, 2}, P1 -> 1, P2 -> 2.
        assert_eq!(psi.table()[0], vec![1, 2]);
        let res = Resolution::new(vec![vec![0], vec![1]]);
        assert!(validate_bijections(&psi, &d1, &res).is_ok());
    }

    #[test]
    fn xor_family_matches_vector_addition() {
        let d1 = trivial(4);
        let sq = addition_table_elementary_abelian(2).unwrap();
        let psi = latin_to_bijections(&sq, &d1, &[0, 1, 2]).unwrap();
        for b in 0..4 {
            for c in 1..4 {
                assert_eq!(psi.image(b, c - 1), b ^ c);
            }
        }
    }

    #[test]
    fn duplicated_row_is_rejected() {
        let d1 = trivial(4);
        let res = Resolution::new(vec![vec![0], vec![1], vec![2]]);
        let mut table = latin_to_bijections(&LatinSquare::cyclic(4), &d1, &[0, 1, 2])
            .unwrap()
            .table()
            .to_vec();
        table[1] = table[0].clone();
        let err = validate_bijections(&BijectionFamily::new(table), &d1, &res).unwrap_err();
        assert!(matches!(err, Error::BadBijectionRow { row: 1 }));
    }

    #[test]
    fn round_trip_recovers_square() {
        let d1 = trivial(6);
        for seed in 0..20 {
            let sq = jm_sample(6, seed, 2160);
            let order = [4, 2, 0, 1, 3];
            let psi = latin_to_bijections(&sq, &d1, &order).unwrap();
            let back = bijections_to_latin(&psi, &d1, &order).unwrap();
            assert_eq!(back, sq.normalized_by_first_column());
        }
    }

    #[test]
    fn edge_colouring_gives_valid_family() {
        let fano = IncidenceStructure::new(7, (0..7).map(|i| vec![i, (i + 1) % 7, (i + 3) % 7]).collect())
            .unwrap();
        let psi = bijections_by_edge_colouring(&fano, 3).unwrap();
        let res = Resolution::new(vec![vec![0], vec![1], vec![2]]);
        assert!(validate_bijections(&psi, &fano, &res).is_ok());
    }
}
