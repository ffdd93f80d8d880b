use std::io::Write;

use symdesign::builders::{affine_plane, affine_space_hyperplanes, dual_transversal, projective_plane, trivial_symmetric};
use symdesign::compose::{construct, Composition, CompositionInput};
use symdesign::incidence::{IncidenceStructure, TransversalGrouping};
use symdesign::io::{parse_design, parse_latin, write_design, DesignFile};
use symdesign::latin::{
    addition_table_elementary_abelian, bijections_by_edge_colouring, burn_in, jm_sample, latin_to_bijections,
    LatinSquare,
};
use symdesign::symplectic::{ingredients, sminus, splus, standard_construction, D2Labels, Sign};

use crate::{emit, io_err, read_file, CliError, Params};

/// `cyclic`, `xor:m`, `jm:seed` (with `moves`, default `10 n^3`) or a file.
pub(crate) fn latin_square(spec: &str, order: usize, moves: Option<usize>) -> Result<LatinSquare, CliError> {
    let sq = if spec == "cyclic" {
        LatinSquare::cyclic(order)
    } else if let Some(m) = spec.strip_prefix("xor:") {
        let m = m.parse().map_err(|_| CliError::Usage(format!("bad `{spec}`")))?;
        addition_table_elementary_abelian(m)?
    } else if let Some(seed) = spec.strip_prefix("jm:") {
        let seed = seed.parse().map_err(|_| CliError::Usage(format!("bad `{spec}`")))?;
        jm_sample(order, seed, moves.unwrap_or_else(|| burn_in(order)))
    } else {
        parse_latin(&read_file(spec)?)?
    };
    if sq.order() != order {
        return Err(CliError::Usage(format!(
            "Latin square of order {} where order {order} is needed",
            sq.order()
        )));
    }
    Ok(sq)
}

fn design_file(path: &str) -> Result<DesignFile, CliError> {
    Ok(parse_design(&read_file(path)?)?)
}

fn spec_numbers(spec: &str, prefix: &str, count: usize) -> Option<Vec<u32>> {
    let rest = spec.strip_prefix(prefix)?;
    let nums: Option<Vec<u32>> = rest.split(':').map(|t| t.parse().ok()).collect();
    nums.filter(|v| v.len() == count)
}

/// Composition inputs for `sane`, `affine` and `compose`.
pub(crate) fn composition_input(kind: &str, p: &Params) -> Result<CompositionInput, CliError> {
    let moves = p.get("moves")?;
    match kind {
        "sane" => {
            let q: u32 = p.required("q")?;
            let (d0, res) = affine_plane(q)?;
            let sq = latin_square(p.str("latin").unwrap_or("jm:0"), q as usize + 2, moves)?;
            Ok(CompositionInput::affine(d0, res, &sq)?)
        }
        "affine" => {
            let n: usize = p.required("n")?;
            let q: u32 = p.required("q")?;
            let (d0, res) = affine_space_hyperplanes(n, q)?;
            let sq = latin_square(p.str("latin").unwrap_or("jm:0"), res.r() + 1, moves)?;
            Ok(CompositionInput::affine(d0, res, &sq)?)
        }
        "compose" => {
            let d0_spec = p.str("d0").ok_or_else(|| CliError::Usage("missing `d0=`".into()))?;
            let (d0, res) = if let Some(q) = spec_numbers(d0_spec, "plane:", 1) {
                affine_plane(q[0])?
            } else if let Some(nq) = spec_numbers(d0_spec, "ag:", 2) {
                affine_space_hyperplanes(nq[0] as usize, nq[1])?
            } else {
                let f = design_file(d0_spec)?;
                let res = f
                    .resolution
                    .ok_or_else(|| CliError::Usage(format!("{d0_spec} has no #resolution section")))?;
                (f.design, res)
            };
            let r = res.r();
            let d1_spec = p.str("d1").unwrap_or("trivial");
            let d1 = if d1_spec == "trivial" {
                trivial_symmetric(r + 1)?
            } else if let Some(q) = spec_numbers(d1_spec, "pg:", 1) {
                projective_plane(q[0])?
            } else {
                design_file(d1_spec)?.design
            };
            let d2_spec = p.str("d2").unwrap_or("dual");
            let (d2, groups) = if d2_spec == "dual" {
                dual_transversal(&d0, &res)?
            } else if let Some(m) = spec_numbers(d2_spec, "dual:", 1) {
                let (d2, groups) = dual_transversal(&d0, &res)?;
                (repeat_blocks(&d2, m[0] as usize)?, groups)
            } else {
                let f = design_file(d2_spec)?;
                let g = f
                    .groups
                    .ok_or_else(|| CliError::Usage(format!("{d2_spec} has no #groups section")))?;
                (f.design, TransversalGrouping::new(g.groups().to_vec()))
            };
            let psi = match p.str("latin") {
                Some(spec) => {
                    let sq = latin_square(spec, r + 1, moves)?;
                    latin_to_bijections(&sq, &d1, &(0..r).collect::<Vec<_>>())?
                }
                None => bijections_by_edge_colouring(&d1, r)?,
            };
            Ok(CompositionInput::new(d0, res, d1, psi, d2, groups)?)
        }
        other => Err(CliError::Usage(format!("unknown design kind `{other}`"))),
    }
}

fn repeat_blocks(d: &IncidenceStructure, m: usize) -> Result<IncidenceStructure, CliError> {
    if m == 0 {
        return Err(CliError::Usage("dual:0".into()));
    }
    let blocks = d.blocks().iter().flat_map(|b| std::iter::repeat_n(b.clone(), m)).collect();
    Ok(IncidenceStructure::new(d.v(), blocks)?)
}

fn labelled(c: &Composition) -> DesignFile {
    let mut f = DesignFile::plain(c.design.clone());
    f.labels = Some(c.labels.clone());
    f
}

pub(crate) fn cmd_build(kind: &str, p: &Params, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let (file, ledger) = if kind == "symplectic" {
        let n: usize = p.required("n")?;
        let sign = match p.str("sign").unwrap_or("-") {
            "+" | "plus" => Sign::Plus,
            "-" | "minus" => Sign::Minus,
            s => return Err(CliError::Usage(format!("sign `{s}` is not + or -"))),
        };
        match p.str("via").unwrap_or("grid") {
            "grid" => {
                let d = if sign == Sign::Plus { splus(n)? } else { sminus(n)? };
                (DesignFile::plain(d), None)
            }
            "forms" => (DesignFile::plain(standard_construction(n, sign)?), None),
            via @ ("compose" | "compose-dual") => {
                if sign == Sign::Plus {
                    return Err(CliError::Usage("the composition yields S-(n) only".into()));
                }
                let labels = if via == "compose" {
                    D2Labels::Complemented
                } else {
                    D2Labels::Dual
                };
                let c = construct(&ingredients(n, labels)?)?;
                (labelled(&c), Some(c.ledger))
            }
            v => return Err(CliError::Usage(format!("unknown via `{v}`"))),
        }
    } else {
        let c = construct(&composition_input(kind, p)?)?;
        (labelled(&c), Some(c.ledger))
    };
    let text = write_design(&file);
    let to_file = emit(p, &text, out)?;
    let report: &mut dyn Write = if to_file { out } else { err };
    if let Some(l) = ledger {
        writeln!(report, "{l}").map_err(io_err)?;
    }
    Ok(())
}
