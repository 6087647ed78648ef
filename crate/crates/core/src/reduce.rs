//! βη-reduction: single leftmost-outermost steps, budgeted normal-order
//! normalization, and convertibility checks that stay total on divergent input.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::grow;
use crate::term::{alpha_eq, alpha_key, substitute, Name, Term};

/// Maximum number of rewrite steps (β and η each count as one).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    max_steps: usize,
}

impl Budget {
    pub const DEFAULT: Budget = Budget { max_steps: 10_000 };

    /// `None` for a zero budget.
    pub fn new(max_steps: usize) -> Option<Budget> {
        (max_steps >= 1).then_some(Budget { max_steps })
    }

    pub fn max_steps(self) -> usize {
        self.max_steps
    }

    pub fn scaled(self, factor: usize) -> Budget {
        Budget {
            max_steps: self.max_steps.saturating_mul(factor.max(1)),
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::DEFAULT
    }
}

#[derive(Clone, Debug)]
pub enum ReductionOutcome {
    Normal { term: Term, steps: usize },
    Exhausted { last: Term, steps: usize },
}

impl ReductionOutcome {
    pub fn is_normal(&self) -> bool {
        matches!(self, ReductionOutcome::Normal { .. })
    }

    pub fn normal(self) -> Option<Term> {
        match self {
            ReductionOutcome::Normal { term, .. } => Some(term),
            ReductionOutcome::Exhausted { .. } => None,
        }
    }

    pub fn steps(&self) -> usize {
        match self {
            ReductionOutcome::Normal { steps, .. } | ReductionOutcome::Exhausted { steps, .. } => {
                *steps
            }
        }
    }

    /// The normal form, or the term reached when the budget ran out.
    pub fn term(&self) -> &Term {
        match self {
            ReductionOutcome::Normal { term, .. } => term,
            ReductionOutcome::Exhausted { last, .. } => last,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConvVerdict {
    Equal,
    Distinct,
    Unknown(String),
}

impl fmt::Display for ConvVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConvVerdict::Equal => f.write_str("equal"),
            ConvVerdict::Distinct => f.write_str("distinct"),
            ConvVerdict::Unknown(why) => write!(f, "unknown ({why})"),
        }
    }
}

fn eta_contractum<'a>(binder: &Name, body: &'a Term) -> Option<&'a Term> {
    match body {
        Term::App(m, a) => match &**a {
            Term::Var(y) if y == binder && !m.occurs_free(binder) => Some(m),
            _ => None,
        },
        _ => None,
    }
}

/// One leftmost-outermost βη step, or `None` if `t` is βη-normal.
///
/// At any position a β-redex wins; an η-redex is contracted only when no
/// redex sits at or above it.
pub fn step(t: &Term) -> Option<Term> {
    grow(|| match t {
        Term::Var(_) => None,
        Term::Abs(x, body) => {
            if let Some(m) = eta_contractum(x, body) {
                return Some(m.clone());
            }
            step(body).map(|b| Term::Abs(x.clone(), Arc::new(b)))
        }
        Term::App(f, a) => {
            if let Term::Abs(x, body) = &**f {
                return Some(substitute(body, x, a));
            }
            if let Some(f2) = step(f) {
                return Some(Term::App(Arc::new(f2), a.clone()));
            }
            step(a).map(|a2| Term::App(f.clone(), Arc::new(a2)))
        }
    })
}

struct Fuel {
    used: usize,
    limit: usize,
}

impl Fuel {
    fn new(budget: Budget) -> Self {
        Fuel {
            used: 0,
            limit: budget.max_steps,
        }
    }

    fn tick(&mut self) -> bool {
        if self.used >= self.limit {
            false
        } else {
            self.used += 1;
            true
        }
    }
}

/// Normal-order βη normalization under a step budget.
///
/// Contractions happen in the same leftmost-outermost order as iterating
/// [`step`], but without rescanning the whole term after every step.
pub fn normalize(t: &Term, budget: Budget) -> ReductionOutcome {
    let mut fuel = Fuel::new(budget);
    match norm(t, &mut fuel) {
        Ok(term) => ReductionOutcome::Normal {
            term,
            steps: fuel.used,
        },
        Err(last) => ReductionOutcome::Exhausted {
            last,
            steps: fuel.used,
        },
    }
}

// `Err` carries the partially reduced term when the fuel runs out.
fn norm(t: &Term, fuel: &mut Fuel) -> Result<Term, Term> {
    grow(|| match t {
        Term::Var(_) => Ok(t.clone()),
        Term::Abs(x, body) => norm_abs(x, body, fuel),
        Term::App(..) => norm_app(t, fuel),
    })
}

fn norm_abs(x: &Name, body: &Term, fuel: &mut Fuel) -> Result<Term, Term> {
    let rebuild = |b: Term| Term::Abs(x.clone(), Arc::new(b));
    if let Some(m) = eta_contractum(x, body) {
        if !fuel.tick() {
            return Err(rebuild(body.clone()));
        }
        return norm(m, fuel);
    }
    let nb = norm(body, fuel).map_err(rebuild)?;
    if let Some(m) = eta_contractum(x, &nb) {
        if !fuel.tick() {
            return Err(rebuild(nb));
        }
        return Ok(m.clone());
    }
    Ok(rebuild(nb))
}

fn unwind(t: &Term, args: &mut VecDeque<Term>) -> Term {
    let (head, spine) = t.spine();
    for a in spine.into_iter().rev() {
        args.push_front(a.clone());
    }
    head.clone()
}

fn norm_app(t: &Term, fuel: &mut Fuel) -> Result<Term, Term> {
    let mut args = VecDeque::new();
    let mut head = unwind(t, &mut args);
    loop {
        let next = match &head {
            Term::Abs(x, body) if !args.is_empty() => {
                if !fuel.tick() {
                    return Err(Term::apps(head.clone(), args));
                }
                let a = args.pop_front().expect("non-empty");
                substitute(body, x, &a)
            }
            Term::Abs(..) => return norm(&head, fuel),
            Term::App(..) => head.clone(),
            Term::Var(_) => break,
        };
        head = unwind(&next, &mut args);
    }
    let mut done: Vec<Term> = Vec::with_capacity(args.len());
    while let Some(a) = args.pop_front() {
        match norm(&a, fuel) {
            Ok(n) => done.push(n),
            Err(partial) => {
                done.push(partial);
                return Err(Term::apps(Term::apps(head, done), args));
            }
        }
    }
    Ok(Term::apps(head, done))
}

/// Head normal form `λt1 … λtn. ξ X1 … Xm` by head reduction only; the
/// arguments are left as they are. Returns the term and the steps used, or
/// `None` if the budget runs out.
pub fn head_normal_form(t: &Term, budget: Budget) -> Option<(Term, usize)> {
    let mut fuel = Fuel::new(budget);
    let mut binders: Vec<Name> = Vec::new();
    let mut args = VecDeque::new();
    let mut head = t.clone();
    loop {
        let next = match &head {
            Term::Abs(x, body) if args.is_empty() => {
                binders.push(x.clone());
                (**body).clone()
            }
            Term::Abs(x, body) => {
                if !fuel.tick() {
                    return None;
                }
                let a = args.pop_front().expect("non-empty");
                substitute(body, x, &a)
            }
            Term::App(..) => head.clone(),
            Term::Var(_) => break,
        };
        head = unwind(&next, &mut args);
    }
    let body = Term::apps(head, args);
    let t = binders
        .into_iter()
        .rev()
        .fold(body, |acc, x| Term::Abs(x, Arc::new(acc)));
    Some((t, fuel.used))
}

/// Membership in the grammar of βη-normal forms: `ξ X1 … Xm` with normal
/// arguments, or `λt. X` with `X` normal and not of the form `X' t` where `t`
/// is not free in `X'`.
pub fn is_beta_eta_nf(t: &Term) -> bool {
    grow(|| match t {
        Term::Var(_) => true,
        Term::Abs(x, body) => eta_contractum(x, body).is_none() && is_beta_eta_nf(body),
        Term::App(..) => {
            let (head, args) = t.spine();
            matches!(head, Term::Var(_)) && args.into_iter().all(is_beta_eta_nf)
        }
    })
}

/// The leftmost-outermost redex of `t`, printed, if any.
pub fn first_redex(t: &Term) -> Option<Term> {
    grow(|| match t {
        Term::Var(_) => None,
        Term::Abs(x, body) => {
            if eta_contractum(x, body).is_some() {
                return Some(t.clone());
            }
            first_redex(body)
        }
        Term::App(f, a) => {
            if let Term::Abs(..) = &**f {
                return Some(t.clone());
            }
            first_redex(f).or_else(|| first_redex(a))
        }
    })
}

/// No β-redex anywhere in `t`; η-redexes are allowed.
pub fn is_beta_nf(t: &Term) -> bool {
    first_beta_redex(t).is_none()
}

/// The leftmost-outermost β-redex of `t`, if any.
pub fn first_beta_redex(t: &Term) -> Option<Term> {
    grow(|| match t {
        Term::Var(_) => None,
        Term::Abs(_, body) => first_beta_redex(body),
        Term::App(f, a) => {
            if let Term::Abs(..) = &**f {
                return Some(t.clone());
            }
            first_beta_redex(f).or_else(|| first_beta_redex(a))
        }
    })
}

/// The η-normal form of a β-normal term. Contracting an η-redex never
/// creates a β-redex in a β-normal term, so the result is βη-normal.
pub fn eta_normal_form(t: &Term) -> Term {
    grow(|| match t {
        Term::Var(_) => t.clone(),
        Term::Abs(x, body) => {
            let b = eta_normal_form(body);
            match eta_contractum(x, &b) {
                Some(m) => m.clone(),
                None => Term::Abs(x.clone(), Arc::new(b)),
            }
        }
        Term::App(f, a) => Term::App(Arc::new(eta_normal_form(f)), Arc::new(eta_normal_form(a))),
    })
}

/// Decides `a = b` when both sides normalize within the budget.
pub fn conv_eq(a: &Term, b: &Term, budget: Budget) -> ConvVerdict {
    let na = normalize(a, budget);
    let nb = normalize(b, budget);
    match (&na, &nb) {
        (ReductionOutcome::Normal { term: ta, .. }, ReductionOutcome::Normal { term: tb, .. }) => {
            if alpha_eq(ta, tb) {
                ConvVerdict::Equal
            } else {
                ConvVerdict::Distinct
            }
        }
        _ => {
            let which = match (na.is_normal(), nb.is_normal()) {
                (false, false) => "both sides",
                (false, true) => "left side",
                _ => "right side",
            };
            ConvVerdict::Unknown(format!(
                "{which} exhausted a budget of {} steps",
                budget.max_steps
            ))
        }
    }
}

/// The normal-order reduction sequence of `t`, at most `budget` steps long
/// (including `t` itself).
pub fn trace(t: &Term, budget: Budget) -> Vec<Term> {
    let mut out = vec![t.clone()];
    for _ in 0..budget.max_steps {
        match step(out.last().expect("non-empty")) {
            Some(next) => out.push(next),
            None => break,
        }
    }
    out
}

/// True iff the normal-order reduction sequences of `a` and `b`, each cut
/// off after `budget` steps, share a term up to α.
pub fn joinable(a: &Term, b: &Term, budget: Budget) -> bool {
    // Both sequences advance in lockstep, so a shared term is found as soon
    // as the later of its two occurrences is reached.
    let mut sides = [
        (Some(a.clone()), HashSet::new()),
        (Some(b.clone()), HashSet::new()),
    ];
    for _ in 0..=budget.max_steps {
        for me in 0..2 {
            let Some(cur) = sides[me].0.take() else {
                continue;
            };
            let key = alpha_key(&cur);
            if sides[1 - me].1.contains(&key) {
                return true;
            }
            sides[me].1.insert(key);
            sides[me].0 = step(&cur);
        }
        if sides.iter().all(|s| s.0.is_none()) {
            return false;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinators::{i, k, s, theta, zero};
    use crate::parse::parse;

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    fn b(n: usize) -> Budget {
        Budget::new(n).unwrap()
    }

    #[test]
    fn budget_rejects_zero() {
        assert!(Budget::new(0).is_none());
        assert_eq!(Budget::default().max_steps(), 10_000);
        assert_eq!(b(10).scaled(10).max_steps(), 100);
    }

    #[test]
    fn single_steps() {
        assert!(alpha_eq(&step(&p(r"(\x. x) y")).unwrap(), &p("y")));
        assert!(alpha_eq(&step(&p(r"\t. f g t")).unwrap(), &p("f g")));
        assert!(step(&p(r"\x. x")).is_none());
        // the η-redex at the root is outermost, so it goes before the inner β
        assert!(alpha_eq(
            &step(&p(r"\t. (\x. x) f t")).unwrap(),
            &p(r"(\x. x) f")
        ));
        // β at a position beats η below it
        assert!(alpha_eq(
            &step(&p(r"(\x. x) (\t. f t)")).unwrap(),
            &p(r"\t. f t")
        ));
        // no η when the variable occurs in the function part
        assert!(step(&p(r"\t. t t")).is_none());
    }

    #[test]
    fn skk_is_identity() {
        let t = Term::apps(s(), [k(), k(), Term::var("z")]);
        let out = normalize(&t, b(100));
        assert!(alpha_eq(&out.clone().normal().unwrap(), &p("z")));
        assert!(out.steps() > 0);
        let skk = Term::apps(s(), [k(), k()]);
        assert!(alpha_eq(&normalize(&skk, b(100)).normal().unwrap(), &i()));
    }

    #[test]
    fn expansion_with_fresh_variables() {
        let n1 = p(r"\t1.\t2.\t3. t1 (\u. t2) (\v. t2 t1 (\z.\s. z v)) t3");
        let t = Term::apps(n1, [p("x1"), p("x2"), p("x3")]);
        let out = normalize(&t, b(100)).normal().unwrap();
        assert!(alpha_eq(
            &out,
            &p(r"x1 (\u. x2) (\v. x2 x1 (\z.\s. z v)) x3")
        ));
    }

    #[test]
    fn theta_diverges() {
        let t = Term::app(theta(), p("x"));
        let out = normalize(&t, b(50));
        assert!(!out.is_normal());
        assert_eq!(out.steps(), 50);
        assert!(!normalize(&theta(), Budget::DEFAULT).is_normal());
    }

    #[test]
    fn theta_unfolds_in_two_head_steps() {
        let t = Term::app(theta(), p("x"));
        let two = step(&step(&t).unwrap()).unwrap();
        assert!(alpha_eq(&two, &Term::app(p("x"), t)));
    }

    #[test]
    fn normal_form_predicate() {
        assert!(is_beta_eta_nf(&p(r"\x. x")));
        assert!(!is_beta_eta_nf(&p(r"\x. f x")));
        assert!(!is_beta_eta_nf(&p(r"(\x. x) y")));
        assert!(is_beta_eta_nf(&p(r"\x. f x x")));
        assert!(is_beta_nf(&p(r"\x. f x")));
        assert!(!is_beta_nf(&p(r"f ((\x. x) y)")));
    }

    #[test]
    fn redex_reporting() {
        assert!(alpha_eq(
            &first_redex(&p(r"f ((\x. x) y)")).unwrap(),
            &p(r"(\x. x) y")
        ));
        assert!(alpha_eq(
            &first_redex(&p(r"\a. \t. g t")).unwrap(),
            &p(r"\t. g t")
        ));
        assert!(first_redex(&k()).is_none());
        assert!(first_beta_redex(&p(r"\t. g t")).is_none());
    }

    #[test]
    fn eta_normal_forms() {
        let t = p(r"\t1.\t2.\t3. t1 (\u. t2) (\v. t2 t1 (\z.\s. z v)) t3");
        let e = eta_normal_form(&t);
        assert!(alpha_eq(
            &e,
            &p(r"\t1.\t2. t1 (\u. t2) (\v. t2 t1 (\z.\s. z v))")
        ));
        assert!(is_beta_eta_nf(&e));
        assert!(alpha_eq(&eta_normal_form(&p(r"\x.\y. f x y")), &p("f")));
    }

    #[test]
    fn convertibility() {
        let skk = Term::apps(s(), [k(), k()]);
        assert_eq!(conv_eq(&skk, &i(), b(1000)), ConvVerdict::Equal);
        assert_eq!(conv_eq(&k(), &zero(), b(1000)), ConvVerdict::Distinct);
        assert!(matches!(
            conv_eq(&theta(), &theta(), b(1000)),
            ConvVerdict::Unknown(_)
        ));
        assert!(matches!(
            conv_eq(&theta(), &i(), b(100)),
            ConvVerdict::Unknown(_)
        ));
    }

    #[test]
    fn joinability() {
        let tx = Term::app(theta(), p("x"));
        assert!(joinable(&tx, &Term::app(p("x"), tx.clone()), b(100)));
        assert!(joinable(&p(r"(\x. x) a"), &p("a"), b(10)));
        assert!(!joinable(&p("x"), &p("y"), b(100)));
    }

    #[test]
    fn traces_end_in_normal_forms() {
        let t = Term::apps(s(), [k(), k(), Term::var("z")]);
        let tr = trace(&t, b(100));
        assert!(alpha_eq(tr.last().unwrap(), &p("z")));
        assert_eq!(tr.len() - 1, normalize(&t, b(100)).steps());
    }

    #[test]
    fn head_normal_form_leaves_arguments() {
        let t = p(r"(\x. \y. y x) ((\a. a) b)");
        let (h, steps) = head_normal_form(&t, b(10)).unwrap();
        assert!(alpha_eq(&h, &p(r"\y. y ((\a. a) b)")));
        assert_eq!(steps, 1);
        assert!(head_normal_form(&Term::app(theta(), p("x")), b(10)).is_some());
        let omega = p(r"(\x. x x) (\x. x x)");
        assert!(head_normal_form(&omega, b(10)).is_none());
    }
}
