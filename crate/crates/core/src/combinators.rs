//! The fixed closed terms and term builders the separation engine speaks in.

use std::collections::BTreeSet;

use crate::term::{prime_away, Name, Term};

/// `λx.λy.λz. x z (y z)`
pub fn s() -> Term {
    Term::abss(
        ["x", "y", "z"],
        Term::apps(
            Term::var("x"),
            [Term::var("z"), Term::app(Term::var("y"), Term::var("z"))],
        ),
    )
}

/// `λx.λy. x`
pub fn k() -> Term {
    Term::abss(["x", "y"], Term::var("x"))
}

/// `λx. x`
pub fn i() -> Term {
    Term::abs("x", Term::var("x"))
}

/// `λx.λy. y`
pub fn zero() -> Term {
    Term::abss(["x", "y"], Term::var("y"))
}

/// `λx.λy. y x`
pub fn cstar() -> Term {
    Term::abss(["x", "y"], Term::app(Term::var("y"), Term::var("x")))
}

/// `K (K (… (K x)))` with `n` copies of `K`. Applied to `n` arguments it
/// discards them all and yields `x`.
pub fn k_power(n: usize, x: Term) -> Term {
    (0..n).fold(x, |acc, _| Term::app(k(), acc))
}

/// The `b`-fold composition `K ∘ … ∘ K`: a term that takes `1 + b` arguments
/// and returns the first. `I` for `b = 0`, `K` for `b = 1`.
pub fn k_tail(b: usize) -> Term {
    match b {
        0 => i(),
        1 => k(),
        _ => Term::abs("x", k_power(b, Term::var("x"))),
    }
}

/// `K^a K^b`: applied to `a + 1 + b` arguments, returns argument `a + 1`.
/// `selector(0, 0)` is `I`.
pub fn selector(a: usize, b: usize) -> Term {
    k_power(a, k_tail(b))
}

/// `λu λt1 … λt(h+1). t(h+1) u t1 … th`
pub fn nabla_h(h: usize) -> Term {
    let ts: Vec<String> = (1..=h + 1).map(|i| format!("t{i}")).collect();
    let body = Term::apps(
        Term::var(&ts[h]),
        std::iter::once(Term::var("u")).chain(ts[..h].iter().map(|t| Term::var(t))),
    );
    Term::abs("u", Term::abss(ts.iter().map(String::as_str), body))
}

/// `⟨G1, …, Gs⟩ = λm. m G1 … Gs`; the empty tuple is `I`.
pub fn tuple(args: &[Term]) -> Term {
    let m = fresh_for("m", args);
    Term::Abs(
        m.clone(),
        Term::apps(Term::Var(m), args.iter().cloned()).into(),
    )
}

/// `f ∘ g = λx. f (g x)`
pub fn compose(f: &Term, g: &Term) -> Term {
    let x = fresh_for("x", [f, g]);
    Term::Abs(
        x.clone(),
        Term::app(f.clone(), Term::app(g.clone(), Term::Var(x))).into(),
    )
}

/// Church numeral `λx.λy. x (x (… (x y)))`.
pub fn church(n: usize) -> Term {
    let body = (0..n).fold(Term::var("y"), |acc, _| Term::app(Term::var("x"), acc));
    Term::abss(["x", "y"], body)
}

/// Turing's fixed-point combinator `A A` with `A = λa.λf. f (a a f)`.
/// `θ x` head-reduces to `x (θ x)` in two steps.
pub fn theta() -> Term {
    let a = Term::abss(
        ["a", "f"],
        Term::app(
            Term::var("f"),
            Term::apps(Term::var("a"), [Term::var("a"), Term::var("f")]),
        ),
    );
    Term::app(a.clone(), a)
}

fn fresh_for<'a, I>(base: &str, terms: I) -> Name
where
    I: IntoIterator<Item = &'a Term>,
{
    let mut avoid = BTreeSet::new();
    for t in terms {
        avoid.extend(t.free_vars());
    }
    prime_away(base, &avoid)
}
