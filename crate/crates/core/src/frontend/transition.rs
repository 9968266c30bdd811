use std::sync::Arc;

use super::ast::{Atom, LoopProgram, Relop, Stmt};
use crate::polyring::{Polynomial, Rational, Ring, TermOrder};

/// Where a guard atom came from: the `while` guard or a branch test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AtomOrigin {
    Loop,
    Branch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuardAtom {
    pub atom: Atom,
    pub origin: AtomOrigin,
}

/// `<pre, post, x' = update(x), guard>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub pre: usize,
    pub post: usize,
    /// One polynomial over the program variables per variable.
    pub update: Vec<Polynomial>,
    pub guard: Vec<GuardAtom>,
}

impl Transition {
    pub fn enabled(&self, state: &[Rational], ignore_loop_guard: bool) -> bool {
        self.guard
            .iter()
            .filter(|g| !(ignore_loop_guard && g.origin == AtomOrigin::Loop))
            .all(|g| g.atom.holds(state))
    }

    pub fn apply(&self, state: &[Rational]) -> Vec<Rational> {
        self.update.iter().map(|p| p.evaluate(state).expect("state of the wrong size")).collect()
    }

    pub fn render_guard(&self) -> String {
        if self.guard.is_empty() {
            "true".into()
        } else {
            self.guard.iter().map(|g| g.atom.render()).collect::<Vec<_>>().join(" && ")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionSystem {
    pub vars: Arc<Ring>,
    pub params: Arc<Ring>,
    pub locations: Vec<String>,
    pub initial_location: usize,
    pub transitions: Vec<Transition>,
    /// Initial value of each variable, as a polynomial over `params`.
    pub theta: Vec<Polynomial>,
}

pub fn to_transition_system(p: &LoopProgram) -> TransitionSystem {
    let ring = &p.vars;
    let identity: Vec<Polynomial> = (0..ring.nvars()).map(|i| Polynomial::var(ring, i)).collect();
    let loop_atoms: Vec<GuardAtom> =
        p.guard.atoms.iter().map(|a| GuardAtom { atom: a.clone(), origin: AtomOrigin::Loop }).collect();
    let mut paths = Vec::new();
    walk(ring, &[&p.body], identity, loop_atoms, &mut paths);

    let transitions = paths
        .into_iter()
        .filter_map(|(update, guard)| simplify(guard).map(|guard| Transition { pre: 0, post: 0, update, guard }))
        .collect();
    TransitionSystem {
        vars: p.vars.clone(),
        params: p.params.clone(),
        locations: vec!["l0".into()],
        initial_location: 0,
        transitions,
        theta: p.init.clone(),
    }
}

type Path = (Vec<Polynomial>, Vec<GuardAtom>);

/// Enumerate maximal branch paths. `work` holds the blocks still to run, in
/// order; `images` is the composed update so far.
fn walk(ring: &Arc<Ring>, work: &[&[Stmt]], images: Vec<Polynomial>, atoms: Vec<GuardAtom>, out: &mut Vec<Path>) {
    let Some((first, rest)) = work.split_first() else {
        out.push((images, atoms));
        return;
    };
    let Some((stmt, tail)) = first.split_first() else {
        return walk(ring, rest, images, atoms, out);
    };
    let mut next_work: Vec<&[Stmt]> = vec![tail];
    next_work.extend_from_slice(rest);
    match stmt {
        Stmt::Assign(a) => {
            let mut next = images.clone();
            for (&t, v) in a.targets.iter().zip(&a.values) {
                next[t] = v.substitute(ring, &images).expect("update lives in the program ring");
            }
            walk(ring, &next_work, next, atoms, out);
        }
        Stmt::If { cond, then_branch, else_branch } => {
            let cond: Vec<Atom> = cond
                .atoms
                .iter()
                .map(|a| Atom { poly: a.poly.substitute(ring, &images).unwrap(), rel: a.rel })
                .collect();
            let branch = |a: Atom| GuardAtom { atom: a, origin: AtomOrigin::Branch };

            let mut then_work: Vec<&[Stmt]> = vec![then_branch];
            then_work.extend_from_slice(&next_work);
            let mut then_atoms = atoms.clone();
            then_atoms.extend(cond.iter().cloned().map(branch));
            walk(ring, &then_work, images.clone(), then_atoms, out);

            // not (a1 && ... && ak) split into disjoint conjunctions
            let mut else_work: Vec<&[Stmt]> = vec![else_branch];
            else_work.extend_from_slice(&next_work);
            for j in 0..cond.len() {
                let mut else_atoms = atoms.clone();
                else_atoms.extend(cond[..j].iter().cloned().map(branch));
                else_atoms.push(branch(cond[j].negate()));
                walk(ring, &else_work, images.clone(), else_atoms, out);
            }
        }
    }
}

/// Drop constant and duplicate atoms and apply the strictness merge. `None`
/// when some constant atom is false.
fn simplify(guard: Vec<GuardAtom>) -> Option<Vec<GuardAtom>> {
    let mut kept: Vec<GuardAtom> = Vec::new();
    for g in guard {
        if g.atom.poly.is_constant() {
            let v = g.atom.poly.evaluate(&vec![Rational::default(); g.atom.poly.ring().nvars()]).unwrap();
            if !g.atom.rel.holds(&v) {
                return None;
            }
            continue;
        }
        if !kept.iter().any(|k| k.atom == g.atom) {
            kept.push(g);
        }
    }
    let nonzero: Vec<Polynomial> = kept
        .iter()
        .filter(|g| g.origin == AtomOrigin::Loop && g.atom.rel == Relop::Ne)
        .map(|g| monic(&g.atom.poly))
        .collect();
    for g in kept.iter_mut().filter(|g| g.origin == AtomOrigin::Branch) {
        let strict = match g.atom.rel {
            Relop::Le => Relop::Lt,
            Relop::Ge => Relop::Gt,
            _ => continue,
        };
        if nonzero.contains(&monic(&g.atom.poly)) {
            g.atom.rel = strict;
        }
    }
    Some(kept)
}

fn monic(p: &Polynomial) -> Polynomial {
    p.make_monic(TermOrder::GradedLex).expect("non-constant atom")
}
