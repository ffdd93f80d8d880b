use std::io::Write;

use symdesign::canon::canonical_form;
use symdesign::compose::{construct, diagonal_translations, Composition, CompositionInput};
use symdesign::incidence::{verify_resolution, verify_transversal};
use symdesign::io::{parse_design, parse_permutations, write_certificate, write_design, DesignFile};
use symdesign::perms::{flag_conditions_report, Permutation};
use symdesign::symplectic::{group_gens, ingredients, on_composed, translation_gens, D2Labels};
use symdesign::Error;

use crate::build::composition_input;
use crate::{emit, io_err, read_file, CliError, Params};

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub(crate) fn cmd_verify(file: &str, p: &Params, out: &mut dyn Write) -> Result<(), CliError> {
    let f = parse_design(&read_file(file)?)?;
    let expect: Option<Vec<usize>> = p
        .str("expect")
        .map(|s| {
            s.split(',')
                .map(|t| t.parse().map_err(|_| CliError::Usage(format!("bad expect `{s}`"))))
                .collect()
        })
        .transpose()?;
    let want_symmetric: Option<bool> = p.get("symmetric")?;
    p.finish()?;
    let d = &f.design;
    let mut ok = true;
    let mut line = |text: String| writeln!(out, "{text}").map_err(io_err);
    line(format!("points {} blocks {}", d.v(), d.b()))?;

    let k = match d.uniform_block_size() {
        Ok(k) => {
            line(format!("block size {k}: PASS"))?;
            Some(k)
        }
        Err(e) => {
            line(format!("block size: FAIL ({e})"))?;
            ok = false;
            None
        }
    };
    let lambda = match d.verify_balance(2) {
        Ok(l) => {
            line(format!("pair count {l}: PASS"))?;
            Some(l)
        }
        Err(Error::NotBalanced { tuple, expected, found }) => {
            line(format!(
                "pair count: FAIL (points {} and {} lie in {found} blocks, points 0 and 1 in {expected})",
                tuple[0], tuple[1]
            ))?;
            ok = false;
            None
        }
        Err(e) => {
            line(format!("pair count: FAIL ({e})"))?;
            ok = false;
            None
        }
    };
    if let Some(res) = &f.resolution {
        let r = verify_resolution(d, res);
        ok &= r.is_ok();
        line(format!(
            "resolution ({} classes): {}",
            res.classes().len(),
            r.map_or_else(|e| format!("FAIL ({e})"), |()| "PASS".into())
        ))?;
    }
    if let Some(g) = &f.groups {
        let r = verify_transversal(d, g);
        ok &= r.is_ok();
        line(match r {
            Ok((k2, l2)) => format!("transversal k2={k2} lambda2={l2}: PASS"),
            Err(e) => format!("transversal: FAIL ({e})"),
        })?;
    }
    match (k, lambda) {
        (Some(k), Some(l)) => {
            let symmetric = d.b() == d.v();
            let mut good = true;
            if let Some(e) = &expect {
                good &= e[..] == [d.v(), k, l];
            }
            if let Some(s) = want_symmetric {
                good &= s == symmetric;
            }
            ok &= good;
            let kind = if symmetric { " symmetric" } else { "" };
            line(format!("2-({},{k},{l}){kind}: {}", d.v(), pass(good)))?;
        }
        _ => line("2-design: FAIL".into())?,
    }
    if ok {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{file} failed verification")))
    }
}

fn generators(spec: &str, translations: impl FnOnce() -> Result<Vec<Permutation>, CliError>, auto: impl FnOnce() -> Result<Vec<Permutation>, CliError>) -> Result<Vec<Permutation>, CliError> {
    match spec {
        "translations" => translations(),
        "auto" => auto(),
        path => Ok(parse_permutations(&read_file(path)?)?),
    }
}

fn as_failure(e: Error) -> CliError {
    match e {
        Error::NotAutomorphism(i) => CliError::Failed(format!("generator {i} is not an automorphism")),
        e @ (Error::SplitsPart { .. } | Error::PropertyFails { .. } | Error::SigmaNotAutomorphism { .. }) => {
            CliError::Failed(format!("a generator is outside the composition's group: {e}"))
        }
        e => CliError::Core(e),
    }
}

pub(crate) fn cmd_flagcheck(kind: &str, p: &Params, out: &mut dyn Write) -> Result<(), CliError> {
    let (input, composed, gens): (CompositionInput, Composition, Vec<Permutation>) = if kind == "symplectic" {
        let n: usize = p.required("n")?;
        let labels = match p.str("labels").unwrap_or("complemented") {
            "complemented" => D2Labels::Complemented,
            "dual" => D2Labels::Dual,
            l => return Err(CliError::Usage(format!("unknown labels `{l}`"))),
        };
        let input = ingredients(n, labels)?;
        let c = construct(&input)?;
        let gens = match p.str("gens").unwrap_or("full") {
            "full" => on_composed(n, &group_gens(n)?),
            spec => generators(
                spec,
                || Ok(on_composed(n, &translation_gens(n)?)),
                || Ok(canonical_form(&c.design, Some(&c.point_partition()))?.generators),
            )?,
        };
        (input, c, gens)
    } else {
        let input = composition_input(kind, p)?;
        let c = construct(&input)?;
        let gens = generators(
            p.str("gens").unwrap_or("auto"),
            || {
                if kind != "sane" {
                    return Err(CliError::Usage("gens=translations needs the sane kind".into()));
                }
                Ok(diagonal_translations(p.required("q")?, c.v1)?)
            },
            || Ok(canonical_form(&c.design, Some(&c.point_partition()))?.generators),
        )?;
        (input, c, gens)
    };
    if let Some(path) = p.str("design") {
        let f = parse_design(&read_file(path)?)?;
        if f.design.sorted_blocks() != composed.design.sorted_blocks() {
            return Err(CliError::Failed(format!("{path} is not the composed design")));
        }
    }
    p.finish()?;
    let r = flag_conditions_report(&gens, &input, &composed).map_err(as_failure)?;
    let agree = r.overall == r.direct;
    let w = |e| io_err(e);
    writeln!(out, "generators: {}", gens.len()).map_err(w)?;
    writeln!(out, "1 pi(G) flag-transitive on D1: {}", r.cond1).map_err(w)?;
    writeln!(out, "2 pi_j(G_j) flag-transitive on D0: {}", r.cond2).map_err(w)?;
    writeln!(out, "3 phi_beta(G_beta) flag-transitive on D2: {}", r.cond3).map_err(w)?;
    writeln!(out, "4 pi_j(G_beta,gamma,j) transitive on each block: {}", r.cond4).map_err(w)?;
    writeln!(out, "all four conditions: {}", r.overall).map_err(w)?;
    writeln!(out, "flag orbit covers all flags: {}", r.direct).map_err(w)?;
    writeln!(out, "agreement: {}", pass(agree)).map_err(w)?;
    if agree {
        Ok(())
    } else {
        Err(CliError::Failed("conditions and flag orbit disagree".into()))
    }
}

pub(crate) fn cmd_canon(file: &str, p: &Params, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let f = parse_design(&read_file(file)?)?;
    let parts = match p.get::<usize>("parts")? {
        Some(0) => return Err(CliError::Usage("parts=0".into())),
        Some(size) if f.design.v() % size != 0 => {
            return Err(CliError::Usage(format!("{} points do not split into parts of {size}", f.design.v())))
        }
        Some(size) => Some((0..f.design.v() / size).map(|j| (j * size..(j + 1) * size).collect()).collect::<Vec<Vec<usize>>>()),
        None => None,
    };
    let cert = canonical_form(&f.design, parts.as_deref())?;
    let to_file = emit(p, &write_certificate(&cert)?, out)?;
    let report: &mut dyn Write = if to_file { out } else { err };
    writeln!(report, "aut order {}", cert.order).map_err(io_err)?;
    writeln!(report, "generators {}", cert.generators.len()).map_err(io_err)?;
    writeln!(report, "hash {}", cert.hash).map_err(io_err)?;
    Ok(())
}

pub(crate) fn cmd_dual(file: &str, p: &Params, out: &mut dyn Write, complement: bool) -> Result<(), CliError> {
    let f = parse_design(&read_file(file)?)?;
    let d = if complement {
        f.design.complement()?
    } else {
        f.design.dual()?
    };
    emit(p, &write_design(&DesignFile::plain(d)), out)?;
    Ok(())
}
