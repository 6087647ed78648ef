use std::collections::BTreeMap;

use super::head::{eta_eq, require_normal, HeadForm};
use crate::error::BohmError;
use crate::reduce::{head_normal_form, Budget};
use crate::term::{FreshSupply, Name, Term};

// Head reduction along a chain only ever substitutes variables (or small
// `∇` wrappers) into heads, so this is generous.
const FOLLOW_BUDGET: Budget = Budget::DEFAULT;

/// One level of a chain of similar pairs.
#[derive(Clone, Debug)]
pub struct ChainLink {
    pub level: usize,
    pub sources: (Term, Term),
    /// The fresh variables applied at this level, in order.
    pub slots: Vec<Name>,
    /// How many of `slots` were applied before the first head reduction.
    /// Equal to `slots.len()` on a chain built from normal forms.
    pub first_round: usize,
    /// Number of fresh variables applied at all earlier levels.
    pub fresh_offset: usize,
    pub m1: Term,
    pub m2: Term,
    pub principal_1: Name,
    pub principal_2: Name,
    pub grade_1: usize,
    pub grade_2: usize,
    pub args_1: Vec<Term>,
    pub args_2: Vec<Term>,
    /// 1-based index `j` of the argument pair followed to the next level.
    pub child_index: Option<usize>,
}

impl ChainLink {
    pub fn fresh_width(&self) -> usize {
        self.slots.len()
    }

    pub fn is_similar(&self) -> bool {
        self.principal_1 == self.principal_2 && self.grade_1 == self.grade_2
    }
}

#[derive(Clone, Debug)]
pub struct Chain {
    pub links: Vec<ChainLink>,
}

impl Chain {
    /// The level of the terminal (dissimilar) pair.
    pub fn sigma(&self) -> usize {
        self.links.len() - 1
    }

    pub fn terminal(&self) -> &ChainLink {
        self.links.last().expect("a chain has at least one link")
    }

    pub fn nonterminal(&self) -> &[ChainLink] {
        &self.links[..self.links.len() - 1]
    }

    pub fn child_indices(&self) -> Vec<usize> {
        self.nonterminal()
            .iter()
            .map(|l| l.child_index.expect("nonterminal"))
            .collect()
    }

    pub fn source(&self) -> (&Term, &Term) {
        let s = &self.links[0].sources;
        (&s.0, &s.1)
    }

    /// Nonterminal principals, then both terminal principals.
    pub fn principals(&self) -> Vec<Name> {
        let mut out: Vec<Name> = self
            .nonterminal()
            .iter()
            .map(|l| l.principal_1.clone())
            .collect();
        let t = self.terminal();
        out.push(t.principal_1.clone());
        out.push(t.principal_2.clone());
        out
    }

    /// `(level, slot index)` of every slot variable.
    pub fn slot_positions(&self) -> BTreeMap<Name, (usize, usize)> {
        let mut out = BTreeMap::new();
        for l in &self.links {
            for (k, s) in l.slots.iter().enumerate() {
                out.insert(s.clone(), (l.level, k));
            }
        }
        out
    }
}

/// Applies `width` fresh variables to both terms and normalizes:
/// `Ni x_{r+1} … x_{r+width}`. Requires `width` to be at least both orders.
pub fn expand_pair(
    n1: &Term,
    n2: &Term,
    width: usize,
    supply: &mut FreshSupply,
) -> Result<(Term, Term), BohmError> {
    require_normal(n1)?;
    require_normal(n2)?;
    let order = order_of(n1).max(order_of(n2));
    if width < order {
        return Err(BohmError::BadArity { width, order });
    }
    let e = expand_level(n1, n2, Some(width), &BTreeMap::new(), 0, supply)?;
    Ok((e.m1, e.m2))
}

fn order_of(t: &Term) -> usize {
    t.binders().0.len()
}

struct Expansion {
    slots: Vec<Name>,
    first_round: usize,
    m1: Term,
    m2: Term,
}

fn hnf(t: &Term) -> Result<Term, BohmError> {
    head_normal_form(t, FOLLOW_BUDGET)
        .map(|(t, _)| t)
        .ok_or_else(|| BohmError::Exhausted {
            budget: FOLLOW_BUDGET.max_steps(),
            context: "following a chain".into(),
        })
}

// Round one applies `width` slots (default: the larger order), wrapping slot
// `k` as `w x` when `wraps` holds `(level, k) ↦ w`. Further plain slots are
// applied until neither side has leading abstractions.
fn expand_level(
    a1: &Term,
    a2: &Term,
    width: Option<usize>,
    wraps: &BTreeMap<(usize, usize), Term>,
    level: usize,
    supply: &mut FreshSupply,
) -> Result<Expansion, BohmError> {
    let mut m1 = hnf(a1)?;
    let mut m2 = hnf(a2)?;
    let first = width.unwrap_or_else(|| order_of(&m1).max(order_of(&m2)));
    let mut slots = Vec::new();
    let mut round = first;
    loop {
        let mut applied = Vec::with_capacity(round);
        for _ in 0..round {
            let k = slots.len();
            let x = supply.fresh("x");
            let v = Term::Var(x.clone());
            applied.push(match wraps.get(&(level, k)) {
                Some(w) => Term::app(w.clone(), v),
                None => v,
            });
            slots.push(x);
        }
        if !applied.is_empty() {
            m1 = hnf(&Term::apps(m1, applied.iter().cloned()))?;
            m2 = hnf(&Term::apps(m2, applied))?;
        }
        round = order_of(&m1).max(order_of(&m2));
        if round == 0 {
            break;
        }
    }
    Ok(Expansion {
        slots,
        first_round: first,
        m1,
        m2,
    })
}

fn make_link(level: usize, sources: (Term, Term), e: Expansion, fresh_offset: usize) -> ChainLink {
    let h1 = HeadForm::of_hnf(&e.m1);
    let h2 = HeadForm::of_hnf(&e.m2);
    ChainLink {
        level,
        sources,
        slots: e.slots,
        first_round: e.first_round,
        fresh_offset,
        m1: e.m1,
        m2: e.m2,
        principal_1: h1.principal,
        principal_2: h2.principal,
        grade_1: h1.args.len(),
        grade_2: h2.args.len(),
        args_1: h1.args,
        args_2: h2.args,
        child_index: None,
    }
}

/// The chain `(N1, N2) = (N1⁽⁰⁾, N2⁽⁰⁾), …, (N1⁽σ⁾, N2⁽σ⁾)`: at each similar
/// level, descend into the leftmost argument pair that differs.
pub fn build_chain(n1: &Term, n2: &Term) -> Result<Chain, BohmError> {
    let mut supply = FreshSupply::avoiding([n1, n2]);
    build_chain_in(n1, n2, &mut supply)
}

pub(crate) fn build_chain_in(
    n1: &Term,
    n2: &Term,
    supply: &mut FreshSupply,
) -> Result<Chain, BohmError> {
    require_normal(n1)?;
    require_normal(n2)?;
    if eta_eq(n1, n2) {
        return Err(BohmError::NotSeparable);
    }
    let mut links = Vec::new();
    let (mut a1, mut a2) = (n1.clone(), n2.clone());
    let mut offset = 0;
    loop {
        let level = links.len();
        let e = expand_level(&a1, &a2, None, &BTreeMap::new(), level, supply)?;
        if eta_eq(&e.m1, &e.m2) {
            return Err(BohmError::Internal(format!(
                "distinct normal forms became equal after expansion at level {level}"
            )));
        }
        let width = e.slots.len();
        let mut link = make_link(level, (a1, a2), e, offset);
        offset += width;
        if !link.is_similar() {
            links.push(link);
            break;
        }
        let j = link
            .args_1
            .iter()
            .zip(&link.args_2)
            .position(|(x, y)| !eta_eq(x, y))
            .ok_or_else(|| BohmError::Internal("similar pair with equal arguments".into()))?;
        link.child_index = Some(j + 1);
        a1 = link.args_1[j].clone();
        a2 = link.args_2[j].clone();
        links.push(link);
    }
    Ok(Chain { links })
}

/// One step of a path to follow: the round-one width and the 1-based child
/// index (`None` at the terminal level).
pub(crate) type PathStep = (usize, Option<usize>);

/// Re-walks a fixed path through a pair that need not be normal, using head
/// normal forms. Every nonterminal level must come out similar and the last
/// level dissimilar.
pub(crate) fn follow_path(
    n1: &Term,
    n2: &Term,
    path: &[PathStep],
    wraps: &BTreeMap<(usize, usize), Term>,
    supply: &mut FreshSupply,
) -> Result<Chain, BohmError> {
    let mut links = Vec::with_capacity(path.len());
    let (mut a1, mut a2) = (n1.clone(), n2.clone());
    let mut offset = 0;
    for (level, &(width, child)) in path.iter().enumerate() {
        let e = expand_level(&a1, &a2, Some(width), wraps, level, supply)?;
        let w = e.slots.len();
        let mut link = make_link(level, (a1, a2), e, offset);
        offset += w;
        match child {
            Some(j) => {
                if !link.is_similar() {
                    return Err(BohmError::Internal(format!(
                        "followed pair is not similar at level {level}"
                    )));
                }
                if j == 0 || j > link.args_1.len() {
                    return Err(BohmError::Internal(format!(
                        "child index {j} out of range at level {level}"
                    )));
                }
                link.child_index = Some(j);
                a1 = link.args_1[j - 1].clone();
                a2 = link.args_2[j - 1].clone();
                links.push(link);
            }
            None => {
                if link.is_similar() {
                    return Err(BohmError::StillSimilar);
                }
                links.push(link);
                break;
            }
        }
    }
    Ok(Chain { links })
}
