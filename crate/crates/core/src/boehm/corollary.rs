use std::collections::BTreeMap;

use super::chain::build_chain_in;
use super::head::{require_closed, require_normal, HeadForm};
use super::lemmas::{lemma2_select, retuple_in, TerminalSeparator};
use super::separate::separate_traced;
use crate::combinators::{compose, i, k_tail, theta, tuple};
use crate::error::BohmError;
use crate::reduce::{conv_eq, joinable, normalize, Budget, ConvVerdict, ReductionOutcome};
use crate::term::{alpha_eq, substitute_all, FreshSupply, Name, Term};

/// `Δ = ⟨G1, …, Gs⟩` with `Δ c1 = x1` and `Δ c2 = x2`.
#[derive(Clone, Debug)]
pub struct Discriminator {
    pub args: Vec<Term>,
    pub delta: Term,
}

/// `Δ ∘ F ∘ ∇ = I`, with `∇ = K^g`.
#[derive(Clone, Debug)]
pub struct LeftInverse {
    pub delta: Term,
    pub nabla: Term,
    pub g: usize,
    pub args: Vec<Term>,
}

/// The facts from which `x c ≠ x c1` and `x c ≠ x c2` follow.
#[derive(Clone, Debug)]
pub struct Certificate {
    /// `Δ (x c1) = c2`
    pub delta_on_first: ConvVerdict,
    /// `Δ (x c2) = c1`
    pub delta_on_second: ConvVerdict,
    /// `b` and `x (Δ b)` share a reduct.
    pub fixed_point: bool,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.delta_on_first == ConvVerdict::Equal
            && self.delta_on_second == ConvVerdict::Equal
            && self.fixed_point
    }
}

#[derive(Clone, Debug)]
pub struct ThirdPoint {
    pub c: Term,
    pub b: Term,
    pub delta: Term,
    pub certificate: Certificate,
    /// Direct checks of `x c = x c1` and `x c = x c2`; usually `Unknown`,
    /// since `x c` need not have a normal form.
    pub probe_first: ConvVerdict,
    pub probe_second: ConvVerdict,
}

fn reduce_if_possible(t: Term, budget: Budget) -> Term {
    match normalize(&t, budget) {
        ReductionOutcome::Normal { term, .. } => term,
        ReductionOutcome::Exhausted { .. } => t,
    }
}

/// Closed normal forms `c1 ≠ c2` and arbitrary closed `x1`, `x2`.
pub fn discriminate(
    c1: &Term,
    c2: &Term,
    x1: &Term,
    x2: &Term,
) -> Result<Discriminator, BohmError> {
    discriminate_with(c1, c2, x1, x2, Budget::DEFAULT)
}

pub fn discriminate_with(
    c1: &Term,
    c2: &Term,
    x1: &Term,
    x2: &Term,
    budget: Budget,
) -> Result<Discriminator, BohmError> {
    for t in [c1, c2, x1, x2] {
        require_closed(t)?;
    }
    let sep = separate_traced(c1, c2, budget)?;
    let bt = sep.transformation;
    if !bt.substitutions.is_empty() {
        return Err(BohmError::Internal(
            "closed terms produced substitutions on free variables".into(),
        ));
    }
    let mut closing: BTreeMap<Name, Term> = BTreeMap::new();
    for h in &bt.applied_args {
        for y in h.free_vars() {
            closing.insert(y, i());
        }
    }
    closing.insert(bt.out_var_1.clone(), x1.clone());
    closing.insert(bt.out_var_2.clone(), x2.clone());
    let args: Vec<Term> = bt
        .applied_args
        .iter()
        .map(|h| reduce_if_possible(substitute_all(h, &closing), budget))
        .collect();
    let delta = tuple(&args);
    for (c, x) in [(c1, x1), (c2, x2)] {
        if let ReductionOutcome::Normal { term: want, .. } = normalize(x, budget) {
            let got = normalize(&Term::app(delta.clone(), c.clone()), budget.scaled(10));
            match got {
                ReductionOutcome::Normal { term, .. } if alpha_eq(&term, &want) => {}
                other => {
                    return Err(BohmError::VerificationFailed(format!(
                        "discriminator sends {c} to {}, expected {want}",
                        other.term()
                    )))
                }
            }
        }
    }
    Ok(Discriminator { args, delta })
}

/// A left inverse of a closed normal form `f = λy. X` with `y` free in `X`.
pub fn left_inverse(f: &Term) -> Result<LeftInverse, BohmError> {
    require_closed(f)?;
    require_normal(f)?;
    let hf = HeadForm::of_hnf(f);
    let uses_first = match f {
        Term::Abs(y, body) => body.occurs_free(y),
        _ => false,
    };
    if hf.order() == 0 || !uses_first {
        return Err(BohmError::ConstantFunction);
    }
    let mut supply = FreshSupply::avoiding([f]);
    let y1 = supply.fresh("y");
    let y2 = supply.fresh("y");
    let budget = Budget::DEFAULT;
    let n = |y: &Name| {
        normalize(&Term::app(f.clone(), Term::Var(y.clone())), budget)
            .normal()
            .ok_or_else(|| BohmError::Exhausted {
                budget: budget.max_steps(),
                context: "applying the function to a variable".into(),
            })
    };
    let (n1, n2) = (n(&y1)?, n(&y2)?);
    let chain = build_chain_in(&n1, &n2, &mut supply)?;
    let t = chain.terminal();
    if t.principal_1 != y1 || t.principal_2 != y2 || t.grade_1 != t.grade_2 {
        return Err(BohmError::Internal(format!(
            "terminal pair of f y1 / f y2 is {} / {}",
            t.m1, t.m2
        )));
    }
    let retupling = retuple_in(&chain, &mut supply, false)?;
    let g = retupling.chain.terminal().grade_1;
    let nabla = reduce_if_possible(k_tail(g), budget);
    let terminal = TerminalSeparator {
        nablas: vec![(y1.clone(), nabla.clone()), (y2.clone(), nabla.clone())],
        extra_args: Vec::new(),
        out_var_1: y1,
        out_var_2: y2,
        swapped: false,
    };
    let bt = lemma2_select(&retupling.chain, &retupling, &terminal)?;
    let closing: BTreeMap<Name, Term> = bt
        .applied_args
        .iter()
        .flat_map(|h| h.free_vars())
        .map(|x| (x, i()))
        .collect();
    let args: Vec<Term> = bt
        .applied_args
        .iter()
        .map(|h| reduce_if_possible(substitute_all(h, &closing), budget))
        .collect();
    let delta = tuple(&args);

    let z = supply.fresh("z");
    let probe = Term::app(compose(&delta, &compose(f, &nabla)), Term::Var(z.clone()));
    match normalize(&probe, budget.scaled(10)) {
        ReductionOutcome::Normal { term, .. } if term.as_var() == Some(&z) => {}
        other => {
            return Err(BohmError::VerificationFailed(format!(
                "(Δ ∘ F ∘ ∇) {z} reduces to {}",
                other.term()
            )))
        }
    }
    Ok(LeftInverse {
        delta,
        nabla,
        g,
        args,
    })
}

/// For closed `x` with `x c1`, `x c2` distinct normal forms, a `c` with
/// `x c` different from both.
pub fn third_point(
    x: &Term,
    c1: &Term,
    c2: &Term,
    budget: Budget,
) -> Result<ThirdPoint, BohmError> {
    for t in [x, c1, c2] {
        require_closed(t)?;
    }
    let image = |c: &Term| {
        normalize(&Term::app(x.clone(), c.clone()), budget)
            .normal()
            .ok_or_else(|| {
                BohmError::HypothesisFailed(format!(
                    "x applied to {c} has no normal form within {} steps",
                    budget.max_steps()
                ))
            })
    };
    let (a, b) = (image(c1)?, image(c2)?);
    if alpha_eq(&a, &b) {
        return Err(BohmError::HypothesisFailed(format!(
            "x sends both points to {a}"
        )));
    }
    let d = discriminate_with(&a, &b, c2, c1, budget)?;
    let delta = d.delta;
    let b_term = Term::app(theta(), compose(x, &delta));
    let c = Term::app(delta.clone(), b_term.clone());
    let on = |t: &Term| Term::app(delta.clone(), Term::app(x.clone(), t.clone()));
    let certificate = Certificate {
        delta_on_first: conv_eq(&on(c1), c2, budget),
        delta_on_second: conv_eq(&on(c2), c1, budget),
        fixed_point: joinable(
            &b_term,
            &Term::app(x.clone(), Term::app(delta.clone(), b_term.clone())),
            budget,
        ),
    };
    let xc = Term::app(x.clone(), c.clone());
    let probe_first = conv_eq(&xc, &Term::app(x.clone(), c1.clone()), budget);
    let probe_second = conv_eq(&xc, &Term::app(x.clone(), c2.clone()), budget);
    Ok(ThirdPoint {
        c,
        b: b_term,
        delta,
        certificate,
        probe_first,
        probe_second,
    })
}
