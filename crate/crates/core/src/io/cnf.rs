//! DIMACS CNF.

use std::fmt::Write as _;

use super::tokens;
use crate::error::{Error, Result};
use crate::reductions::CnfFormula;

/// Reads `p cnf VARS CLAUSES` followed by zero-terminated clauses. Comment
/// lines start with `c`; a `%` line ends the input (SATLIB style).
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    let mut last = (1, 1);
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = tokens(raw);
        let Some(&(col, head)) = toks.first() else { continue };
        if head.starts_with('c') {
            continue;
        }
        if head == "%" {
            break;
        }
        if head == "p" {
            if header.is_some() {
                return Err(Error::parse(line, col, "second problem line"));
            }
            if toks.len() != 4 || toks[1].1 != "cnf" {
                return Err(Error::parse(line, col, "expected `p cnf VARS CLAUSES`"));
            }
            let num = |i: usize| {
                toks[i].1.parse::<usize>().map_err(|_| Error::parse(line, toks[i].0, format!("bad count `{}`", toks[i].1)))
            };
            header = Some((num(2)?, num(3)?));
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(Error::parse(line, col, "clause before the problem line"));
        };
        for &(c, t) in &toks {
            let lit: i32 = t.parse().map_err(|_| Error::parse(line, c, format!("bad literal `{t}`")))?;
            if lit.unsigned_abs() as usize > vars {
                return Err(Error::parse(line, c, format!("literal {lit} exceeds {vars} variables")));
            }
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(lit);
            }
            last = (line, c);
        }
    }
    let (vars, count) = header.ok_or_else(|| Error::parse(1, 1, "missing problem line"))?;
    if !current.is_empty() {
        return Err(Error::parse(last.0, last.1, "last clause is not terminated by 0"));
    }
    if clauses.len() != count {
        return Err(Error::parse(last.0, last.1, format!("header announces {count} clauses, found {}", clauses.len())));
    }
    CnfFormula::new(vars, clauses)
}

pub fn write_dimacs(f: &CnfFormula) -> String {
    let mut s = format!("p cnf {} {}\n", f.vars, f.clauses.len());
    for c in &f.clauses {
        for l in c {
            let _ = write!(s, "{l} ");
        }
        s.push_str("0\n");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_comments() {
        let text = "c example\np cnf 3 2\n1 -2 0\n2 3\n-1 0\n";
        let f = parse_dimacs(text).unwrap();
        assert_eq!(f.clauses, vec![vec![1, -2], vec![2, 3, -1]]);
        assert_eq!(parse_dimacs(&write_dimacs(&f)).unwrap(), f);
    }

    #[test]
    fn rejects_out_of_range_literal() {
        assert!(matches!(parse_dimacs("p cnf 2 1\n1 3 0\n"), Err(Error::Parse { line: 2, column: 3, .. })));
        assert!(parse_dimacs("p cnf 2 2\n1 2 0\n").is_err());
    }
}
