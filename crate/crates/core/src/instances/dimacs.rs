use super::{CnfFormula, QbfInstance, Quantifier};
use crate::{Error, Result};

/// Treatment of variables that no QDIMACS quantifier line mentions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FreeVariables {
    /// Bind them existentially in an outermost block (the usual convention).
    #[default]
    OutermostExists,
    /// Reject the file.
    Reject,
}

struct Parsed {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
    blocks: Vec<(Quantifier, Vec<usize>)>,
}

fn parse(text: &str, allow_quantifiers: bool) -> Result<Parsed> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    let mut blocks: Vec<(Quantifier, Vec<usize>)> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        last_line = line_no;
        // SATLIB files end with "%\n0\n"
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(Error::parse(line_no, "duplicate problem line"));
            }
            let tok: Vec<&str> = line.split_whitespace().collect();
            if tok.len() != 4 || tok[0] != "p" || tok[1] != "cnf" {
                return Err(Error::parse(line_no, "expected `p cnf <vars> <clauses>`"));
            }
            let vars = tok[2]
                .parse::<usize>()
                .map_err(|_| Error::parse(line_no, format!("bad variable count `{}`", tok[2])))?;
            let count = tok[3]
                .parse::<usize>()
                .map_err(|_| Error::parse(line_no, format!("bad clause count `{}`", tok[3])))?;
            if vars == 0 {
                return Err(Error::parse(line_no, "formula needs at least one variable"));
            }
            header = Some((vars, count));
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(Error::parse(line_no, "data before the `p cnf` header"));
        };

        let first = line.split_whitespace().next().unwrap_or_default();
        if first == "e" || first == "a" {
            if !allow_quantifiers {
                return Err(Error::parse(line_no, "quantifier line in a plain CNF file"));
            }
            if !clauses.is_empty() || !current.is_empty() {
                return Err(Error::parse(line_no, "quantifier line after clauses"));
            }
            let q = if first == "e" {
                Quantifier::Exists
            } else {
                Quantifier::Forall
            };
            let mut vars = Vec::new();
            let mut terminated = false;
            for tok in line.split_whitespace().skip(1) {
                if terminated {
                    return Err(Error::parse(line_no, "tokens after terminating 0"));
                }
                let v: usize = tok
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad variable `{tok}`")))?;
                if v == 0 {
                    terminated = true;
                } else if v > num_vars {
                    return Err(Error::parse(
                        line_no,
                        format!("variable {v} exceeds declared count {num_vars}"),
                    ));
                } else {
                    vars.push(v);
                }
            }
            if !terminated {
                return Err(Error::parse(line_no, "quantifier line not terminated by 0"));
            }
            blocks.push((q, vars));
            continue;
        }

        for tok in line.split_whitespace() {
            let lit: i32 = tok
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad literal `{tok}`")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() as usize > num_vars {
                return Err(Error::parse(
                    line_no,
                    format!("literal {lit} exceeds declared variable count {num_vars}"),
                ));
            } else {
                current.push(lit);
            }
        }
    }

    let Some((num_vars, count)) = header else {
        return Err(Error::parse(last_line.max(1), "missing `p cnf` header"));
    };
    // a final clause without its 0 terminator is accepted
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != count {
        return Err(Error::parse(
            last_line,
            format!("header declares {count} clauses, found {}", clauses.len()),
        ));
    }
    Ok(Parsed {
        num_vars,
        clauses,
        blocks,
    })
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let p = parse(text, false)?;
    CnfFormula::new(p.num_vars, p.clauses)
}

pub fn parse_qdimacs(text: &str) -> Result<QbfInstance> {
    parse_qdimacs_with(text, FreeVariables::default())
}

/// Parses QDIMACS into the canonical form where variable `i` is the `i`-th
/// quantified variable. Files that quantify out of index order are renumbered
/// accordingly.
pub fn parse_qdimacs_with(text: &str, free: FreeVariables) -> Result<QbfInstance> {
    let p = parse(text, true)?;
    let n = p.num_vars;
    let mut bound = vec![false; n + 1];
    for (_, vars) in &p.blocks {
        for &v in vars {
            if std::mem::replace(&mut bound[v], true) {
                return Err(Error::parse(0, format!("variable {v} quantified twice")));
            }
        }
    }
    let unbound: Vec<usize> = (1..=n).filter(|&v| !bound[v]).collect();
    if !unbound.is_empty() && free == FreeVariables::Reject {
        return Err(Error::parse(
            0,
            format!("variable {} is not quantified", unbound[0]),
        ));
    }

    let mut order: Vec<(Quantifier, usize)> =
        unbound.into_iter().map(|v| (Quantifier::Exists, v)).collect();
    for (q, vars) in &p.blocks {
        order.extend(vars.iter().map(|&v| (*q, v)));
    }
    let mut rename = vec![0i32; n + 1];
    for (pos, &(_, v)) in order.iter().enumerate() {
        rename[v] = pos as i32 + 1;
    }
    let clauses = p
        .clauses
        .into_iter()
        .map(|c| {
            c.into_iter()
                .map(|lit| lit.signum() * rename[lit.unsigned_abs() as usize])
                .collect()
        })
        .collect();
    let prefix = order.into_iter().map(|(q, _)| q).collect();
    QbfInstance::new(prefix, CnfFormula::new(n, clauses)?)
}
