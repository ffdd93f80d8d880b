use thiserror::Error;

/// Errors raised by constructors, verifiers and file parsers.
///
/// Verification failures carry the lexicographically least offending tuple
/// so that reports are deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("element {0} is not invertible")]
    NotInvertible(u32),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty incidence structure")]
    Empty,
    #[error("block {block} is empty or has a point outside 0..{v}")]
    BadBlock { block: usize, v: usize },
    #[error("blocks are not uniform: block {block} has size {size}, expected {expected}")]
    NotUniform {
        block: usize,
        size: usize,
        expected: usize,
    },
    #[error("t = {t} exceeds block size {k}")]
    TooLargeT { t: usize, k: usize },
    #[error("points {tuple:?} lie in {found} blocks, expected {expected}")]
    NotBalanced {
        tuple: Vec<usize>,
        expected: usize,
        found: usize,
    },
    #[error("blocks {0} and {1} are identical")]
    RepeatedBlock(usize, usize),
    #[error("point {0} lies in no block")]
    UncoveredPoint(usize),
    #[error("block {0} is the full point set")]
    FullBlock(usize),

    #[error("resolution does not cover the block indices exactly")]
    ResolutionCover,
    #[error("class {class} has size {size}, expected {expected}")]
    UnequalClass {
        class: usize,
        size: usize,
        expected: usize,
    },
    #[error("class {class} does not partition the points (point {point} covered {count} times)")]
    NotParallel {
        class: usize,
        point: usize,
        count: usize,
    },
    #[error("groups do not partition the point set")]
    GroupCover,
    #[error("block {block} meets group {group} in points {first} and {second}")]
    GroupClash {
        block: usize,
        group: usize,
        first: usize,
        second: usize,
    },
    #[error("blocks from different classes meet in both {0} and {1} points")]
    NotAffine(usize, usize),

    #[error("not a Latin square: {what} {line} repeats or lacks symbol {symbol}")]
    NotLatin {
        what: &'static str,
        line: usize,
        symbol: usize,
    },
    #[error("bijection family: class {class}, point {point} hit by {count} rows")]
    BadBijections {
        class: usize,
        point: usize,
        count: usize,
    },
    #[error("bijection family row {row} is not a bijection onto its block")]
    BadBijectionRow { row: usize },

    #[error("inconsistent composition input: {0}")]
    Composition(String),

    #[error("not a permutation: {0}")]
    NotPermutation(String),
    #[error("permutation splits part {part}")]
    SplitsPart { part: usize },
    #[error("sigma is not an automorphism of the index design (block {block})")]
    SigmaNotAutomorphism { block: usize },
    #[error("sigma does not fix block {0}")]
    SigmaMovesBlock(usize),
    #[error("property ({property}) fails at beta={beta}, gamma={gamma:?}, j={j:?}")]
    PropertyFails {
        property: u8,
        beta: usize,
        gamma: Option<usize>,
        j: Option<usize>,
    },
    #[error("map does not preserve the blocks or parallel classes of D0 (part {part})")]
    NotInAutStar { part: usize },
    #[error("generator {0} is not an automorphism")]
    NotAutomorphism(usize),

    #[error("structure too large for canonical labeling ({0} vertices)")]
    TooLarge(usize),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
