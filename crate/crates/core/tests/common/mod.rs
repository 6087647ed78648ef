//! Test-side reference machinery that shares no code with the engine: a
//! de Bruijn reducer, an α-renamer, and a strategy for arbitrary terms.

#![allow(dead_code)]

use std::collections::BTreeMap;

use bohm_core::{BohmTransformation, Term};
use proptest::prelude::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Db {
    Free(String),
    Bound(usize),
    Lam(Box<Db>),
    App(Box<Db>, Box<Db>),
}

pub fn to_db(t: &Term) -> Db {
    fn go(t: &Term, env: &mut Vec<String>) -> Db {
        match t {
            Term::Var(x) => match env.iter().rev().position(|b| **b == **x) {
                Some(i) => Db::Bound(i),
                None => Db::Free(x.to_string()),
            },
            Term::Abs(x, body) => {
                env.push(x.to_string());
                let b = go(body, env);
                env.pop();
                Db::Lam(Box::new(b))
            }
            Term::App(f, a) => Db::App(Box::new(go(f, env)), Box::new(go(a, env))),
        }
    }
    go(t, &mut Vec::new())
}

fn shift(d: &Db, by: isize, cutoff: usize) -> Db {
    match d {
        Db::Free(_) => d.clone(),
        Db::Bound(i) if *i >= cutoff => Db::Bound((*i as isize + by) as usize),
        Db::Bound(_) => d.clone(),
        Db::Lam(b) => Db::Lam(Box::new(shift(b, by, cutoff + 1))),
        Db::App(f, a) => Db::App(
            Box::new(shift(f, by, cutoff)),
            Box::new(shift(a, by, cutoff)),
        ),
    }
}

fn subst(d: &Db, depth: usize, arg: &Db) -> Db {
    match d {
        Db::Free(_) => d.clone(),
        Db::Bound(i) if *i == depth => shift(arg, depth as isize, 0),
        Db::Bound(i) if *i > depth => Db::Bound(i - 1),
        Db::Bound(_) => d.clone(),
        Db::Lam(b) => Db::Lam(Box::new(subst(b, depth + 1, arg))),
        Db::App(f, a) => Db::App(
            Box::new(subst(f, depth, arg)),
            Box::new(subst(a, depth, arg)),
        ),
    }
}

fn mentions(d: &Db, idx: usize) -> bool {
    match d {
        Db::Free(_) => false,
        Db::Bound(i) => *i == idx,
        Db::Lam(b) => mentions(b, idx + 1),
        Db::App(f, a) => mentions(f, idx) || mentions(a, idx),
    }
}

fn step(d: &Db) -> Option<Db> {
    match d {
        Db::Free(_) | Db::Bound(_) => None,
        Db::Lam(b) => {
            if let Db::App(m, a) = &**b {
                if **a == Db::Bound(0) && !mentions(m, 0) {
                    return Some(shift(m, -1, 0));
                }
            }
            step(b).map(|b| Db::Lam(Box::new(b)))
        }
        Db::App(f, a) => {
            if let Db::Lam(b) = &**f {
                return Some(subst(b, 0, a));
            }
            if let Some(f2) = step(f) {
                return Some(Db::App(Box::new(f2), a.clone()));
            }
            step(a).map(|a2| Db::App(f.clone(), Box::new(a2)))
        }
    }
}

/// Leftmost-outermost βη normal form within `fuel` steps.
pub fn nf(d: &Db, fuel: usize) -> Option<Db> {
    let mut cur = d.clone();
    for _ in 0..=fuel {
        match step(&cur) {
            Some(next) => cur = next,
            None => return Some(cur),
        }
    }
    None
}

pub fn is_normal(d: &Db) -> bool {
    step(d).is_none()
}

/// Both sides normalize and agree, according to the reference reducer.
pub fn same_normal_form(a: &Term, b: &Term, fuel: usize) -> bool {
    match (nf(&to_db(a), fuel), nf(&to_db(b), fuel)) {
        (Some(x), Some(y)) => x == y,
        _ => false,
    }
}

pub fn normalizes_to_var(t: &Term, v: &str, fuel: usize) -> bool {
    nf(&to_db(t), fuel) == Some(Db::Free(v.to_string()))
}

fn replace_free(d: &Db, map: &BTreeMap<String, Db>) -> Db {
    match d {
        Db::Free(x) => map.get(x).cloned().unwrap_or_else(|| d.clone()),
        Db::Bound(_) => d.clone(),
        Db::Lam(b) => Db::Lam(Box::new(replace_free(b, map))),
        Db::App(f, a) => Db::App(
            Box::new(replace_free(f, map)),
            Box::new(replace_free(a, map)),
        ),
    }
}

/// `n[∇ y / y …] H1 … Hs`, assembled without the engine. The `∇`s are closed,
/// so they can be dropped under binders without shifting.
pub fn context_db(n: &Term, bt: &BohmTransformation) -> Db {
    let map: BTreeMap<String, Db> = bt
        .substitutions
        .iter()
        .map(|(y, nabla)| {
            assert!(nabla.is_closed(), "∇ for {y} is not closed");
            let wrapped = Db::App(Box::new(to_db(nabla)), Box::new(Db::Free(y.to_string())));
            (y.to_string(), wrapped)
        })
        .collect();
    bt.applied_args
        .iter()
        .fold(replace_free(&to_db(n), &map), |acc, h| {
            Db::App(Box::new(acc), Box::new(to_db(h)))
        })
}

/// Independent check of a separating transformation.
pub fn oracle_separates(n1: &Term, n2: &Term, bt: &BohmTransformation, fuel: usize) -> bool {
    nf(&context_db(n1, bt), fuel) == Some(Db::Free(bt.out_var_1.to_string()))
        && nf(&context_db(n2, bt), fuel) == Some(Db::Free(bt.out_var_2.to_string()))
}

/// Renames every binder to a fresh `r<k>`.
pub fn alpha_rename(t: &Term) -> Term {
    fn go(t: &Term, env: &mut Vec<(String, String)>, next: &mut usize) -> Term {
        match t {
            Term::Var(x) => match env.iter().rev().find(|(old, _)| **old == **x) {
                Some((_, new)) => Term::var(new),
                None => t.clone(),
            },
            Term::Abs(x, body) => {
                *next += 1;
                let new = format!("r{next}");
                env.push((x.to_string(), new.clone()));
                let b = go(body, env, next);
                env.pop();
                Term::abs(&new, b)
            }
            Term::App(f, a) => Term::app(go(f, env, next), go(a, env, next)),
        }
    }
    go(t, &mut Vec::new(), &mut 0)
}

/// Arbitrary (not necessarily normal) terms over a handful of names, so that
/// capture and shadowing come up often.
pub fn arb_term() -> impl Strategy<Value = Term> {
    let name = prop::sample::select(vec!["x", "y", "z", "f", "g"]);
    let leaf = name.clone().prop_map(Term::var);
    leaf.prop_recursive(6, 48, 2, move |inner| {
        prop_oneof![
            (name.clone(), inner.clone()).prop_map(|(x, b)| Term::abs(x, b)),
            (inner.clone(), inner).prop_map(|(f, a)| Term::app(f, a)),
        ]
    })
}
