use std::fmt::Write as _;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::polyring::{Polynomial, Rational, Ring};

/// Relation of an atom `p relop 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relop {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl Relop {
    pub fn negate(self) -> Relop {
        match self {
            Relop::Lt => Relop::Ge,
            Relop::Le => Relop::Gt,
            Relop::Gt => Relop::Le,
            Relop::Ge => Relop::Lt,
            Relop::Eq => Relop::Ne,
            Relop::Ne => Relop::Eq,
        }
    }

    /// The relation obtained by multiplying both sides by a negative number.
    pub fn flip(self) -> Relop {
        match self {
            Relop::Lt => Relop::Gt,
            Relop::Le => Relop::Ge,
            Relop::Gt => Relop::Lt,
            Relop::Ge => Relop::Le,
            r => r,
        }
    }

    pub fn holds(self, v: &Rational) -> bool {
        match self {
            Relop::Lt => v.is_negative(),
            Relop::Le => !v.is_positive(),
            Relop::Gt => v.is_positive(),
            Relop::Ge => !v.is_negative(),
            Relop::Eq => v.is_zero(),
            Relop::Ne => !v.is_zero(),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relop::Lt => "<",
            Relop::Le => "<=",
            Relop::Gt => ">",
            Relop::Ge => ">=",
            Relop::Eq => "==",
            Relop::Ne => "!=",
        }
    }
}

/// `poly relop 0` over the program variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub poly: Polynomial,
    pub rel: Relop,
}

impl Atom {
    pub fn negate(&self) -> Atom {
        Atom { poly: self.poly.clone(), rel: self.rel.negate() }
    }

    pub fn holds(&self, state: &[Rational]) -> bool {
        let v = self.poly.evaluate(state).expect("atom evaluated on a state of the wrong size");
        self.rel.holds(&v)
    }

    pub fn render(&self) -> String {
        format!("{} {} 0", self.poly, self.rel.symbol())
    }
}

/// A conjunction of atoms; the empty conjunction is `true`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Condition {
    pub atoms: Vec<Atom>,
}

impl Condition {
    pub fn is_true(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn holds(&self, state: &[Rational]) -> bool {
        self.atoms.iter().all(|a| a.holds(state))
    }

    pub fn render(&self) -> String {
        if self.atoms.is_empty() {
            "true".into()
        } else {
            self.atoms.iter().map(Atom::render).collect::<Vec<_>>().join(" && ")
        }
    }
}

/// Simultaneous assignment `(targets) := (values)`; values are over the
/// pre-state of the assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub targets: Vec<usize>,
    pub values: Vec<Polynomial>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Assign(Assignment),
    If { cond: Condition, then_branch: Vec<Stmt>, else_branch: Vec<Stmt> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopProgram {
    /// Ring of program variables, in declaration order.
    pub vars: Arc<Ring>,
    /// Ring of symbolic initial values (possibly with no variables).
    pub params: Arc<Ring>,
    /// One initial-value polynomial over `params` per program variable.
    pub init: Vec<Polynomial>,
    pub guard: Condition,
    pub body: Vec<Stmt>,
}

impl LoopProgram {
    pub fn is_parametric(&self) -> bool {
        self.init.iter().any(|p| !p.is_constant())
    }

    /// Concrete initial state, or `None` when some init depends on a parameter.
    pub fn numeric_init(&self) -> Option<Vec<Rational>> {
        self.init
            .iter()
            .map(|p| p.is_constant().then(|| p.coefficient(&crate::polyring::Monomial::one(p.ring().nvars()))))
            .collect()
    }

    /// Initial state with parameters set to `values`.
    pub fn instantiate_init(&self, values: &[Rational]) -> Vec<Rational> {
        self.init
            .iter()
            .map(|p| p.evaluate(values).expect("parameter vector of the wrong size"))
            .collect()
    }

    /// Run one pass of the loop body on `state`, ignoring the loop guard.
    pub fn execute_body(&self, state: &[Rational]) -> Vec<Rational> {
        let mut s = state.to_vec();
        exec_block(&self.body, &mut s);
        s
    }

    /// Canonical DSL text; parsing it yields an equal program.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "vars {};", self.vars.names().join(", "));
        if self.params.nvars() > 0 {
            let _ = writeln!(out, "params {};", self.params.names().join(", "));
        }
        let init: Vec<String> =
            self.vars.names().iter().zip(&self.init).map(|(v, p)| format!("{v} := {p}")).collect();
        let _ = writeln!(out, "init {};", init.join(", "));
        let _ = writeln!(out, "guard {};", self.guard.render());
        out.push_str("loop\n");
        render_block(&mut out, &self.vars, &self.body, 1);
        out.push_str("end\n");
        out
    }
}

fn exec_block(body: &[Stmt], state: &mut Vec<Rational>) {
    for s in body {
        match s {
            Stmt::Assign(a) => {
                let vals: Vec<Rational> = a.values.iter().map(|p| p.evaluate(state).unwrap()).collect();
                for (&t, v) in a.targets.iter().zip(vals) {
                    state[t] = v;
                }
            }
            Stmt::If { cond, then_branch, else_branch } => {
                if cond.holds(state) {
                    exec_block(then_branch, state);
                } else {
                    exec_block(else_branch, state);
                }
            }
        }
    }
}

fn render_block(out: &mut String, ring: &Ring, body: &[Stmt], depth: usize) {
    let pad = "  ".repeat(depth);
    for s in body {
        match s {
            Stmt::Assign(a) => {
                let names: Vec<&str> = a.targets.iter().map(|&i| ring.names()[i].as_str()).collect();
                let vals: Vec<String> = a.values.iter().map(|p| p.to_string()).collect();
                if names.len() == 1 {
                    let _ = writeln!(out, "{pad}{} := {};", names[0], vals[0]);
                } else {
                    let _ = writeln!(out, "{pad}({}) := ({});", names.join(", "), vals.join(", "));
                }
            }
            Stmt::If { cond, then_branch, else_branch } => {
                let _ = writeln!(out, "{pad}if {} then", cond.render());
                render_block(out, ring, then_branch, depth + 1);
                if !else_branch.is_empty() {
                    let _ = writeln!(out, "{pad}else");
                    render_block(out, ring, else_branch, depth + 1);
                }
                let _ = writeln!(out, "{pad}end");
            }
        }
    }
}
