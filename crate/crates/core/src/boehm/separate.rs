use std::collections::BTreeMap;

use super::chain::{build_chain_in, Chain};
use super::head::{eta_eq, require_normal};
use super::lemmas::{lemma1_separator, lemma2_select, retuple_in, Retupling};
use crate::error::BohmError;
use crate::reduce::{normalize, Budget, ReductionOutcome};
use crate::term::{substitute_all, FreshSupply, Name, Term};

/// A separating context: substitutions `y ↦ ∇ y` on free variables, then the
/// applied arguments `H1 … Hs`. Applied to the first term it yields
/// `out_var_1`, applied to the second `out_var_2`.
#[derive(Clone, Debug)]
pub struct BohmTransformation {
    /// `y ↦ ∇`; the substitution performed is `y := ∇ y`.
    pub substitutions: BTreeMap<Name, Term>,
    pub applied_args: Vec<Term>,
    pub out_var_1: Name,
    pub out_var_2: Name,
    /// The outputs are the two fresh `v`s in reverse order of creation.
    pub swapped: bool,
}

impl BohmTransformation {
    /// The transformation with no substitutions and no arguments.
    pub fn identity(out_var_1: &str, out_var_2: &str) -> Self {
        BohmTransformation {
            substitutions: BTreeMap::new(),
            applied_args: Vec::new(),
            out_var_1: out_var_1.into(),
            out_var_2: out_var_2.into(),
            swapped: false,
        }
    }

    /// `N[∇1 y1, …] H1 … Hs`, unreduced.
    pub fn context_applied(&self, n: &Term) -> Term {
        let wrapped: BTreeMap<Name, Term> = self
            .substitutions
            .iter()
            .map(|(y, nabla)| (y.clone(), Term::app(nabla.clone(), Term::Var(y.clone()))))
            .collect();
        Term::apps(
            substitute_all(n, &wrapped),
            self.applied_args.iter().cloned(),
        )
    }
}

/// Everything `separate` computed on the way to the transformation.
#[derive(Clone, Debug)]
pub struct Separation {
    pub chain: Chain,
    pub retupling: Retupling,
    pub transformation: BohmTransformation,
    /// Reduction steps spent verifying, both sides together.
    pub steps_used: usize,
}

pub fn apply_transformation(n: &Term, bt: &BohmTransformation, budget: Budget) -> ReductionOutcome {
    normalize(&bt.context_applied(n), budget)
}

pub fn verify_transformation(
    n1: &Term,
    n2: &Term,
    bt: &BohmTransformation,
    budget: Budget,
) -> bool {
    lands_on(n1, bt, &bt.out_var_1, budget).0 && lands_on(n2, bt, &bt.out_var_2, budget).0
}

fn lands_on(
    n: &Term,
    bt: &BohmTransformation,
    v: &Name,
    budget: Budget,
) -> (bool, ReductionOutcome) {
    let out = apply_transformation(n, bt, budget);
    let ok = matches!(&out, ReductionOutcome::Normal { term, .. } if term.as_var() == Some(v));
    (ok, out)
}

/// A transformation sending `n1` to `v1` and `n2` to `v2`, for any two
/// normal forms that are not α-equal. β-normal inputs with η-redexes are
/// accepted and separated according to their η-normal forms.
pub fn separate(n1: &Term, n2: &Term) -> Result<BohmTransformation, BohmError> {
    separate_traced(n1, n2, Budget::DEFAULT).map(|s| s.transformation)
}

/// [`separate`] with the intermediate chain and retupling kept, verifying
/// under `budget` (retried once at ten times the budget).
pub fn separate_traced(n1: &Term, n2: &Term, budget: Budget) -> Result<Separation, BohmError> {
    require_normal(n1)?;
    require_normal(n2)?;
    if eta_eq(n1, n2) {
        return Err(BohmError::NotSeparable);
    }
    let mut supply = FreshSupply::avoiding([n1, n2]);
    let chain = build_chain_in(n1, n2, &mut supply)?;
    let retupling = retuple_in(&chain, &mut supply, true)?;
    let terminal = lemma1_separator(retupling.chain.terminal(), &mut supply)?;
    let mut bt = lemma2_select(&retupling.chain, &retupling, &terminal)?;
    let steps_used = orient(n1, n2, &mut bt, budget)?;
    Ok(Separation {
        chain,
        retupling,
        transformation: bt,
        steps_used,
    })
}

// Applies the transformation to both terms and fixes the orientation so that
// `n1` reaches `out_var_1`. Returns the steps spent.
fn orient(
    n1: &Term,
    n2: &Term,
    bt: &mut BohmTransformation,
    budget: Budget,
) -> Result<usize, BohmError> {
    let mut last = String::new();
    for b in [budget, budget.scaled(10)] {
        let a = apply_transformation(n1, bt, b);
        let c = apply_transformation(n2, bt, b);
        let steps = a.steps() + c.steps();
        let (va, vc) = (normal_var(&a), normal_var(&c));
        match (va, vc) {
            (Some(x), Some(y)) if x == bt.out_var_1 && y == bt.out_var_2 => return Ok(steps),
            (Some(x), Some(y)) if x == bt.out_var_2 && y == bt.out_var_1 => {
                std::mem::swap(&mut bt.out_var_1, &mut bt.out_var_2);
                bt.swapped = !bt.swapped;
                return Ok(steps);
            }
            _ if a.is_normal() && c.is_normal() => {
                return Err(BohmError::VerificationFailed(format!(
                    "context yields {} and {}, expected {} and {}",
                    a.term(),
                    c.term(),
                    bt.out_var_1,
                    bt.out_var_2
                )));
            }
            _ => last = format!("verifying a separation (budget {})", b.max_steps()),
        }
    }
    Err(BohmError::Exhausted {
        budget: budget.scaled(10).max_steps(),
        context: last,
    })
}

fn normal_var(o: &ReductionOutcome) -> Option<Name> {
    match o {
        ReductionOutcome::Normal { term, .. } => term.as_var().cloned(),
        ReductionOutcome::Exhausted { .. } => None,
    }
}
