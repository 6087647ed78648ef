//! Named λ-terms with capture-avoiding substitution and α-equivalence.
//!
//! Terms are immutable trees with shared children, so cloning is cheap and
//! substitution reuses every subtree it does not touch. All comparisons at
//! the public surface go through [`alpha_eq`]; there is deliberately no
//! `PartialEq` impl.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::grow;

/// Variable identifier.
pub type Name = Arc<str>;

#[derive(Clone, Debug)]
pub enum Term {
    Var(Name),
    Abs(Name, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Name::from(name))
    }

    pub fn abs(binder: &str, body: Term) -> Term {
        Term::Abs(Name::from(binder), Arc::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Arc::new(fun), Arc::new(arg))
    }

    /// `head a1 a2 … an`, left-associated.
    pub fn apps<I>(head: Term, args: I) -> Term
    where
        I: IntoIterator<Item = Term>,
    {
        args.into_iter().fold(head, Term::app)
    }

    /// `λb1. λb2. … body`.
    pub fn abss<'a, I>(binders: I, body: Term) -> Term
    where
        I: IntoIterator<Item = &'a str>,
        I::IntoIter: DoubleEndedIterator,
    {
        binders
            .into_iter()
            .rev()
            .fold(body, |acc, b| Term::abs(b, acc))
    }

    pub fn as_var(&self) -> Option<&Name> {
        match self {
            Term::Var(x) => Some(x),
            _ => None,
        }
    }

    /// Splits `h a1 … an` into `h` and `[a1, …, an]`.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Term::App(f, a) = cur {
            args.push(&**a);
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    /// Splits `λt1 … λtn. body` into `[t1, …, tn]` and `body`.
    pub fn binders(&self) -> (Vec<&Name>, &Term) {
        let mut names = Vec::new();
        let mut cur = self;
        while let Term::Abs(x, b) = cur {
            names.push(x);
            cur = b;
        }
        (names, cur)
    }

    /// Number of nodes (variables, abstractions and applications).
    pub fn size(&self) -> usize {
        let mut n = 0;
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            n += 1;
            match t {
                Term::Var(_) => {}
                Term::Abs(_, b) => stack.push(b),
                Term::App(f, a) => {
                    stack.push(f);
                    stack.push(a);
                }
            }
        }
        n
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        collect_free(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn occurs_free(&self, x: &str) -> bool {
        grow(|| match self {
            Term::Var(y) => &**y == x,
            Term::Abs(y, b) => &**y != x && b.occurs_free(x),
            Term::App(f, a) => f.occurs_free(x) || a.occurs_free(x),
        })
    }

    /// Every identifier in the term, bound or free.
    pub fn all_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t {
                Term::Var(x) => {
                    out.insert(x.clone());
                }
                Term::Abs(x, b) => {
                    out.insert(x.clone());
                    stack.push(b);
                }
                Term::App(f, a) => {
                    stack.push(f);
                    stack.push(a);
                }
            }
        }
        out
    }
}

fn collect_free(t: &Term, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
    grow(|| match t {
        Term::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        Term::Abs(x, b) => {
            bound.push(x.clone());
            collect_free(b, bound, out);
            bound.pop();
        }
        Term::App(f, a) => {
            collect_free(f, bound, out);
            collect_free(a, bound, out);
        }
    })
}

// Deep terms (divergent reductions produce them) would otherwise overflow the
// stack through the recursive drop glue.
impl Drop for Term {
    fn drop(&mut self) {
        let mut stack: Vec<Arc<Term>> = Vec::new();
        detach_children(self, &mut stack);
        while let Some(child) = stack.pop() {
            if let Ok(mut t) = Arc::try_unwrap(child) {
                detach_children(&mut t, &mut stack);
            }
        }
    }
}

fn detach_children(t: &mut Term, stack: &mut Vec<Arc<Term>>) {
    match t {
        Term::Var(_) => {}
        Term::Abs(_, b) => {
            if Arc::strong_count(b) == 1 {
                stack.push(std::mem::replace(b, leaf()));
            }
        }
        Term::App(f, a) => {
            if Arc::strong_count(f) == 1 {
                stack.push(std::mem::replace(f, leaf()));
            }
            if Arc::strong_count(a) == 1 {
                stack.push(std::mem::replace(a, leaf()));
            }
        }
    }
}

fn leaf() -> Arc<Term> {
    thread_local! {
        static LEAF: Arc<Term> = Arc::new(Term::Var(Name::from("")));
    }
    LEAF.with(Arc::clone)
}

pub fn free_vars(t: &Term) -> BTreeSet<Name> {
    t.free_vars()
}

/// α-equivalence: identical up to consistent renaming of bound variables.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    fn go<'a>(
        a: &'a Term,
        b: &'a Term,
        env_a: &mut Vec<&'a Name>,
        env_b: &mut Vec<&'a Name>,
    ) -> bool {
        grow(|| match (a, b) {
            (Term::Var(x), Term::Var(y)) => {
                let ix = env_a.iter().rposition(|n| *n == x);
                let iy = env_b.iter().rposition(|n| *n == y);
                match (ix, iy) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (Term::Abs(x, bx), Term::Abs(y, by)) => {
                env_a.push(x);
                env_b.push(y);
                let r = go(bx, by, env_a, env_b);
                env_a.pop();
                env_b.pop();
                r
            }
            (Term::App(f1, a1), Term::App(f2, a2)) => {
                go(f1, f2, env_a, env_b) && go(a1, a2, env_a, env_b)
            }
            _ => false,
        })
    }
    go(a, b, &mut Vec::new(), &mut Vec::new())
}

/// A string that two terms share iff they are α-equivalent (bound variables
/// become de Bruijn indices, free variables keep their names).
pub fn alpha_key(t: &Term) -> String {
    fn go<'a>(t: &'a Term, env: &mut Vec<&'a Name>, out: &mut String) {
        grow(|| match t {
            Term::Var(x) => match env.iter().rposition(|n| *n == x) {
                Some(i) => {
                    out.push('#');
                    out.push_str(&(env.len() - 1 - i).to_string());
                    out.push(' ');
                }
                None => {
                    out.push('$');
                    out.push_str(x);
                    out.push(' ');
                }
            },
            Term::Abs(x, b) => {
                out.push('\\');
                env.push(x);
                go(b, env, out);
                env.pop();
            }
            Term::App(f, a) => {
                out.push('(');
                go(f, env, out);
                go(a, env, out);
                out.push(')');
            }
        })
    }
    let mut out = String::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// Capture-avoiding substitution of `g` for the free occurrences of `x` in `m`.
pub fn substitute(m: &Term, x: &str, g: &Term) -> Term {
    let mut map = BTreeMap::new();
    map.insert(Name::from(x), g.clone());
    substitute_all(m, &map)
}

/// Simultaneous capture-avoiding substitution.
pub fn substitute_all(m: &Term, map: &BTreeMap<Name, Term>) -> Term {
    if map.is_empty() {
        return m.clone();
    }
    let fvs: Vec<BTreeSet<Name>> = map.values().map(Term::free_vars).collect();
    let entries: Vec<Entry<'_>> = map
        .iter()
        .zip(&fvs)
        .map(|((k, v), fv)| Entry {
            var: k,
            term: v,
            fv,
        })
        .collect();
    subst_rec(m, &entries).unwrap_or_else(|| m.clone())
}

#[derive(Clone, Copy)]
struct Entry<'a> {
    var: &'a Name,
    term: &'a Term,
    fv: &'a BTreeSet<Name>,
}

// Returns `None` when the term is unchanged, which keeps untouched subtrees shared.
fn subst_rec(m: &Term, entries: &[Entry<'_>]) -> Option<Term> {
    grow(|| match m {
        Term::Var(y) => entries.iter().find(|e| e.var == y).map(|e| e.term.clone()),
        Term::App(f, a) => {
            let nf = subst_rec(f, entries);
            let na = subst_rec(a, entries);
            if nf.is_none() && na.is_none() {
                return None;
            }
            Some(Term::App(
                nf.map(Arc::new).unwrap_or_else(|| f.clone()),
                na.map(Arc::new).unwrap_or_else(|| a.clone()),
            ))
        }
        Term::Abs(y, body) => {
            let live: Vec<Entry<'_>> = entries
                .iter()
                .filter(|e| e.var != y && body.occurs_free(e.var))
                .copied()
                .collect();
            if live.is_empty() {
                return None;
            }
            if live.iter().any(|e| e.fv.contains(y)) {
                let mut avoid = body.free_vars();
                for e in &live {
                    avoid.extend(e.fv.iter().cloned());
                    avoid.insert(e.var.clone());
                }
                let fresh = prime_away(y, &avoid);
                let renamed_var = Term::Var(fresh.clone());
                let renamed_fv = BTreeSet::from([fresh.clone()]);
                let rename = [Entry {
                    var: y,
                    term: &renamed_var,
                    fv: &renamed_fv,
                }];
                let renamed = subst_rec(body, &rename).unwrap_or_else(|| (**body).clone());
                let new_body = subst_rec(&renamed, &live).unwrap_or(renamed);
                Some(Term::Abs(fresh, Arc::new(new_body)))
            } else {
                subst_rec(body, &live).map(|b| Term::Abs(y.clone(), Arc::new(b)))
            }
        }
    })
}

/// `base`, `base'`, `base''`, …: the first one not in `avoid`.
pub fn prime_away(base: &str, avoid: &BTreeSet<Name>) -> Name {
    let mut candidate = base.to_string();
    while avoid.contains(candidate.as_str()) {
        candidate.push('\'');
    }
    Name::from(candidate)
}

/// Source of variables that collide with nothing the caller has reserved.
///
/// Names are `prefix` followed by a counter (`x1`, `x2`, …). Each prefix has
/// its own counter; a candidate already reserved is skipped.
#[derive(Clone, Debug, Default)]
pub struct FreshSupply {
    counters: BTreeMap<String, usize>,
    reserved: BTreeSet<Name>,
}

impl FreshSupply {
    pub fn new() -> Self {
        Self::default()
    }

    /// A supply that avoids every identifier (bound or free) of `terms`.
    pub fn avoiding<'a, I>(terms: I) -> Self
    where
        I: IntoIterator<Item = &'a Term>,
    {
        let mut supply = Self::new();
        for t in terms {
            supply.reserved.extend(t.all_names());
        }
        supply
    }

    pub fn reserve(&mut self, name: &str) {
        self.reserved.insert(Name::from(name));
    }

    pub fn reserve_term(&mut self, t: &Term) {
        self.reserved.extend(t.all_names());
    }

    pub fn is_reserved(&self, name: &str) -> bool {
        self.reserved.contains(name)
    }

    pub fn fresh(&mut self, prefix: &str) -> Name {
        let counter = self.counters.entry(prefix.to_string()).or_insert(0);
        loop {
            *counter += 1;
            let candidate: Name = Name::from(format!("{prefix}{counter}"));
            if !self.reserved.contains(&candidate) {
                self.reserved.insert(candidate.clone());
                return candidate;
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::print::print(self))
    }
}
