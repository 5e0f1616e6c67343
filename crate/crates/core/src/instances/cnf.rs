use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A CNF formula over variables `1..=num_vars`.
///
/// An empty clause list is the constant-true formula; an empty clause makes
/// the formula unsatisfiable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        if num_vars == 0 {
            return Err(Error::arg("formula needs at least one variable"));
        }
        for lit in clauses.iter().flatten() {
            if *lit == 0 {
                return Err(Error::arg("zero literal inside a clause"));
            }
            if lit.unsigned_abs() as usize > num_vars {
                return Err(Error::arg(format!(
                    "literal {lit} out of range for {num_vars} variables"
                )));
            }
        }
        Ok(Self { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// Evaluates the formula; `assignment[i]` is the value of variable `i + 1`.
    pub fn eval(&self, assignment: &[bool]) -> Result<bool> {
        if assignment.len() != self.num_vars {
            return Err(Error::arg(format!(
                "assignment has {} values, formula has {} variables",
                assignment.len(),
                self.num_vars
            )));
        }
        Ok(self.eval_with(|v| assignment[v - 1]))
    }

    /// Evaluates on the assignment packed into `x`: variable 1 is the most
    /// significant of the `num_vars` bits, matching the index register layout.
    pub fn eval_index(&self, x: usize) -> bool {
        let n = self.num_vars;
        self.eval_with(|v| x >> (n - v) & 1 == 1)
    }

    fn eval_with(&self, value: impl Fn(usize) -> bool) -> bool {
        self.clauses.iter().all(|clause| {
            clause
                .iter()
                .any(|&lit| value(lit.unsigned_abs() as usize) == (lit > 0))
        })
    }

    /// DIMACS text for this formula.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        write_clauses(&mut out, &self.clauses);
        out
    }
}

fn write_clauses(out: &mut String, clauses: &[Vec<i32>]) {
    for clause in clauses {
        for lit in clause {
            out.push_str(&lit.to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantifier::Exists => "∃",
            Quantifier::Forall => "∀",
        })
    }
}

/// A fully quantified Boolean formula. `prefix[i]` binds variable `i + 1`;
/// the prefix is ordered outermost first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QbfInstance {
    prefix: Vec<Quantifier>,
    matrix: CnfFormula,
}

impl QbfInstance {
    pub fn new(prefix: Vec<Quantifier>, matrix: CnfFormula) -> Result<Self> {
        if prefix.len() != matrix.num_vars() {
            return Err(Error::arg(format!(
                "prefix binds {} variables, matrix has {}",
                prefix.len(),
                matrix.num_vars()
            )));
        }
        Ok(Self { prefix, matrix })
    }

    pub fn prefix(&self) -> &[Quantifier] {
        &self.prefix
    }

    pub fn matrix(&self) -> &CnfFormula {
        &self.matrix
    }

    pub fn num_vars(&self) -> usize {
        self.matrix.num_vars()
    }

    /// QDIMACS text with one quantifier block per alternation.
    pub fn to_qdimacs(&self) -> String {
        let mut out = format!(
            "p cnf {} {}\n",
            self.matrix.num_vars(),
            self.matrix.clauses().len()
        );
        let mut var = 1;
        for block in self.prefix.chunk_by(|a, b| a == b) {
            out.push(match block[0] {
                Quantifier::Exists => 'e',
                Quantifier::Forall => 'a',
            });
            for _ in block {
                out.push_str(&format!(" {var}"));
                var += 1;
            }
            out.push_str(" 0\n");
        }
        write_clauses(&mut out, self.matrix.clauses());
        out
    }
}
