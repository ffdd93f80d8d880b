//! Random search over the 2-(96,20,4) designs from AG(2, 4) and Latin
//! squares of order 6.

use std::collections::HashMap;
use std::io::Write;

use num_bigint::BigUint;
use rayon::prelude::*;
use symdesign::canon::{canonical_form, fingerprint};
use symdesign::compose::sane;
use symdesign::latin::{burn_in, rng_for, JmChain};

use crate::{io_err, CliError, Params, JOBS_ENV};

#[derive(Debug, Clone)]
pub struct SampleRow {
    pub index: usize,
    /// Symmetric 2-(96,20,4), checked by pair counting.
    pub verified: bool,
    pub hash: String,
    pub fingerprint: u64,
    pub order: BigUint,
    /// Index of the first sample with the same canonical form.
    pub class: usize,
}

#[derive(Debug, Clone)]
pub struct Search96Report {
    pub rows: Vec<SampleRow>,
    pub classes: usize,
    pub fingerprints: usize,
}

fn sample(seed: u64, index: usize, moves: usize) -> Result<SampleRow, CliError> {
    let square = JmChain::new(6, rng_for(seed, index as u64)).advance(moves);
    let c = sane(4, &square)?;
    let verified = c.design.is_symmetric() && c.design.parameters() == Ok((96, 20, 4));
    let fp = fingerprint(&c.design);
    let mut h = std::hash::DefaultHasher::new();
    std::hash::Hash::hash(&fp, &mut h);
    let cert = canonical_form(&c.design, None)?;
    Ok(SampleRow {
        index,
        verified,
        hash: cert.hash,
        fingerprint: std::hash::Hasher::finish(&h),
        order: cert.order,
        class: index,
    })
}

/// Sample `i` runs its own chain on stream `i` of `seed`, so the rows do
/// not depend on `jobs`.
pub fn search96(samples: usize, seed: u64, moves: Option<usize>, jobs: usize) -> Result<Search96Report, CliError> {
    let moves = moves.unwrap_or_else(|| burn_in(6));
    let mut rows: Vec<SampleRow> = if jobs <= 1 {
        (0..samples).map(|i| sample(seed, i, moves)).collect::<Result<_, _>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        pool.install(|| (0..samples).into_par_iter().map(|i| sample(seed, i, moves)).collect::<Result<_, _>>())?
    };
    let mut first: HashMap<String, usize> = HashMap::new();
    for row in &mut rows {
        row.class = *first.entry(row.hash.clone()).or_insert(row.index);
    }
    let mut fps: Vec<u64> = rows.iter().map(|r| r.fingerprint).collect();
    fps.sort_unstable();
    fps.dedup();
    Ok(Search96Report {
        classes: first.len(),
        fingerprints: fps.len(),
        rows,
    })
}

pub(crate) fn cmd_search96(p: &Params, jobs_flag: Option<usize>, out: &mut dyn Write) -> Result<(), CliError> {
    let samples: usize = p.or("samples", 100)?;
    if samples == 0 {
        return Err(CliError::Usage("samples must be at least 1".into()));
    }
    let seed: u64 = p.or("seed", 0)?;
    let moves: Option<usize> = p.get("moves")?;
    p.finish()?;
    let jobs = match jobs_flag {
        Some(j) => j,
        None => match std::env::var(JOBS_ENV) {
            Ok(s) => s
                .parse()
                .map_err(|_| CliError::Usage(format!("{JOBS_ENV}={s} is not a number")))?,
            Err(_) => 1,
        },
    };
    let report = search96(samples, seed, moves, jobs)?;
    let w = |e| io_err(e);
    writeln!(out, "sample  verified  hash              aut_order  class").map_err(w)?;
    let mut failures = 0;
    for r in &report.rows {
        let divisible = (&r.order % 16u32) == BigUint::ZERO;
        if !r.verified || !divisible {
            failures += 1;
        }
        writeln!(
            out,
            "{:>6}  {:<8}  {}  {:>9}  {}",
            r.index,
            if r.verified { "yes" } else { "NO" },
            &r.hash[..16],
            r.order,
            r.class
        )
        .map_err(w)?;
    }
    writeln!(out, "samples {samples}").map_err(w)?;
    writeln!(out, "distinct fingerprints {}", report.fingerprints).map_err(w)?;
    writeln!(out, "isomorphism classes {}", report.classes).map_err(w)?;
    if failures > 0 {
        return Err(CliError::Failed(format!(
            "{failures} samples failed verification or have an automorphism group order not divisible by 16"
        )));
    }
    Ok(())
}
