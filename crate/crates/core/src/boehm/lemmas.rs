use std::collections::{BTreeMap, BTreeSet};

use super::chain::{follow_path, Chain, ChainLink, PathStep};
use super::separate::BohmTransformation;
use crate::combinators::{i, k, k_power, nabla_h, selector};
use crate::error::BohmError;
use crate::reduce::{is_beta_eta_nf, normalize, Budget};
use crate::term::{substitute_all, FreshSupply, Name, Term};

/// Output of the retupling step: `∇_h` wrappers that make every principal
/// variable of the chain distinct, and the chain rebuilt under them.
#[derive(Clone, Debug)]
pub struct Retupling {
    /// Free variables of the source pair, `y ↦ ∇_h` (installed as `∇_h y`).
    pub substitutions: BTreeMap<Name, Term>,
    /// Slot `(level, index)` of the original chain ↦ `∇_h`.
    pub slot_wraps: BTreeMap<(usize, usize), Term>,
    /// The `h` chosen for each principal variable class.
    pub heights: BTreeMap<Name, usize>,
    /// The source pair after the substitutions (not normalized).
    pub pair: (Term, Term),
    /// The chain followed through `pair`; the original chain when no
    /// retupling was needed.
    pub chain: Chain,
}

impl Retupling {
    pub fn is_identity(&self) -> bool {
        self.substitutions.is_empty() && self.slot_wraps.is_empty()
    }
}

/// The terminal separator: `∇`s for the two terminal principals plus the
/// trailing arguments that deliver the output variables.
#[derive(Clone, Debug)]
pub struct TerminalSeparator {
    /// Principal variable ↦ `∇`, installed as `∇ z`.
    pub nablas: Vec<(Name, Term)>,
    pub extra_args: Vec<Term>,
    /// The variable the first term of the terminal pair reduces to.
    pub out_var_1: Name,
    pub out_var_2: Name,
    /// True when the first term reaches the second fresh `v`.
    pub swapped: bool,
}

fn nf(t: Term) -> Term {
    let out = normalize(&t, Budget::DEFAULT)
        .normal()
        .expect("combinator terms normalize");
    debug_assert!(is_beta_eta_nf(&out));
    out
}

/// Nonterminal principals pairwise distinct and distinct from both terminal
/// principals. The two terminal principals may coincide.
pub(crate) fn principals_distinct(chain: &Chain) -> bool {
    let t = chain.terminal();
    let mut seen = BTreeSet::new();
    for l in chain.nonterminal() {
        let z = &l.principal_1;
        if z == &t.principal_1 || z == &t.principal_2 || !seen.insert(z.clone()) {
            return false;
        }
    }
    true
}

/// Separates a dissimilar pair `(M1, M2)`.
///
/// Distinct heads get `K^(1+g1) K` and `K^(2+g2) I` followed by `v1 v2`. A
/// shared head with grades differing by `p` gets `K^(1+ḡ) I` followed by
/// `K^p v1`, `p − 1` fillers and `v2`; the side with the larger grade reaches
/// `v1`.
pub fn lemma1_separator(
    link: &ChainLink,
    supply: &mut FreshSupply,
) -> Result<TerminalSeparator, BohmError> {
    if link.is_similar() {
        return Err(BohmError::StillSimilar);
    }
    let v1 = supply.fresh("v");
    let v2 = supply.fresh("v");
    let (z1, z2) = (&link.principal_1, &link.principal_2);
    let (g1, g2) = (link.grade_1, link.grade_2);
    if z1 != z2 {
        return Ok(TerminalSeparator {
            nablas: vec![
                (z1.clone(), nf(k_power(1 + g1, k()))),
                (z2.clone(), nf(k_power(2 + g2, i()))),
            ],
            extra_args: vec![Term::Var(v1.clone()), Term::Var(v2.clone())],
            out_var_1: v1,
            out_var_2: v2,
            swapped: false,
        });
    }
    let p = g1.abs_diff(g2);
    let gbar = g1.max(g2);
    let mut extra = vec![nf(k_power(p, Term::Var(v1.clone())))];
    for _ in 1..p {
        extra.push(Term::Var(supply.fresh("x")));
    }
    extra.push(Term::Var(v2.clone()));
    let swapped = g1 < g2;
    let (out_var_1, out_var_2) = if swapped { (v2, v1) } else { (v1, v2) };
    Ok(TerminalSeparator {
        nablas: vec![(z1.clone(), nf(k_power(1 + gbar, i())))],
        extra_args: extra,
        out_var_1,
        out_var_2,
        swapped,
    })
}

/// Installs the selector `K^j K^(g−j)` on the principal of every nonterminal
/// level (`j` the 1-based child index, `g` the grade), merges the terminal
/// separator and the retupling, and lays out the applied arguments: every
/// slot of every level in order, then the terminal extras.
pub fn lemma2_select(
    chain: &Chain,
    retupling: &Retupling,
    terminal: &TerminalSeparator,
) -> Result<BohmTransformation, BohmError> {
    if !principals_distinct(chain) {
        let names: Vec<String> = chain.principals().iter().map(|n| n.to_string()).collect();
        return Err(BohmError::DuplicatePrincipals(names.join(", ")));
    }
    let positions = chain.slot_positions();
    let (src1, src2) = chain.source();
    let mut substitutions = retupling.substitutions.clone();
    let mut wraps: BTreeMap<Name, Term> = BTreeMap::new();
    for (&(level, idx), w) in &retupling.slot_wraps {
        wraps.insert(chain.links[level].slots[idx].clone(), w.clone());
    }

    let mut install = |z: &Name, nabla: Term| -> Result<(), BohmError> {
        let slot = positions.contains_key(z);
        if !slot && !(src1.occurs_free(z) || src2.occurs_free(z)) {
            return Err(BohmError::Internal(format!(
                "principal {z} is neither a slot nor free in the source pair"
            )));
        }
        let target = if slot { &mut wraps } else { &mut substitutions };
        if target.insert(z.clone(), nabla).is_some() {
            return Err(BohmError::Internal(format!(
                "variable {z} would receive two substitutions"
            )));
        }
        Ok(())
    };

    for l in chain.nonterminal() {
        let j = l.child_index.expect("nonterminal");
        install(&l.principal_1, nf(selector(j, l.grade_1 - j)))?;
    }
    for (z, nabla) in &terminal.nablas {
        install(z, nabla.clone())?;
    }

    let mut applied_args = Vec::new();
    for l in &chain.links {
        for s in &l.slots {
            let x = Term::Var(s.clone());
            applied_args.push(match wraps.get(s) {
                Some(w) => Term::app(w.clone(), x),
                None => x,
            });
        }
    }
    applied_args.extend(terminal.extra_args.iter().cloned());
    Ok(BohmTransformation {
        substitutions,
        applied_args,
        out_var_1: terminal.out_var_1.clone(),
        out_var_2: terminal.out_var_2.clone(),
        swapped: terminal.swapped,
    })
}

/// Makes every principal variable of `chain` distinct by wrapping each
/// principal class `z` as `∇_h z`, then re-walks the same path.
///
/// `h = ḡ`, the largest grade anywhere on the chain, for every class; when
/// the two terminal principals differ but have equal grades, the class of
/// the second gets `ḡ + 1` so that the rebuilt terminal heads land on
/// different fresh variables. Returns the identity when the principals are
/// already distinct.
pub fn lemma3_retuple(chain: &Chain) -> Result<Retupling, BohmError> {
    let mut supply = FreshSupply::new();
    for l in &chain.links {
        supply.reserve_term(&l.sources.0);
        supply.reserve_term(&l.sources.1);
        for s in &l.slots {
            supply.reserve(s);
        }
    }
    retuple_in(chain, &mut supply, true)
}

pub(crate) fn retuple_in(
    chain: &Chain,
    supply: &mut FreshSupply,
    include_terminal: bool,
) -> Result<Retupling, BohmError> {
    let (src1, src2) = chain.source();
    if principals_distinct(chain) {
        return Ok(Retupling {
            substitutions: BTreeMap::new(),
            slot_wraps: BTreeMap::new(),
            heights: BTreeMap::new(),
            pair: (src1.clone(), src2.clone()),
            chain: chain.clone(),
        });
    }
    let t = chain.terminal();
    let gbar = chain
        .nonterminal()
        .iter()
        .map(|l| l.grade_1)
        .chain([t.grade_1, t.grade_2])
        .max()
        .unwrap_or(0);

    let mut heights: BTreeMap<Name, usize> = BTreeMap::new();
    for l in chain.nonterminal() {
        heights.insert(l.principal_1.clone(), gbar);
    }
    if include_terminal {
        heights.insert(t.principal_1.clone(), gbar);
        let h2 = if t.principal_1 != t.principal_2 && t.grade_1 == t.grade_2 {
            gbar + 1
        } else {
            gbar
        };
        heights.insert(t.principal_2.clone(), h2);
    }

    let positions = chain.slot_positions();
    let mut substitutions = BTreeMap::new();
    let mut slot_wraps = BTreeMap::new();
    let mut wrapped_free = BTreeMap::new();
    for (z, &h) in &heights {
        let nabla = nabla_h(h);
        match positions.get(z) {
            Some(&pos) => {
                slot_wraps.insert(pos, nabla);
            }
            None => {
                wrapped_free.insert(z.clone(), Term::app(nabla.clone(), Term::Var(z.clone())));
                substitutions.insert(z.clone(), nabla);
            }
        }
    }

    let pair = (
        substitute_all(src1, &wrapped_free),
        substitute_all(src2, &wrapped_free),
    );
    let path: Vec<PathStep> = chain
        .links
        .iter()
        .map(|l| (l.first_round, l.child_index.map(|j| j + 1)))
        .collect();
    let rebuilt = follow_path(&pair.0, &pair.1, &path, &slot_wraps, supply)?;

    if rebuilt.sigma() != chain.sigma() {
        return Err(BohmError::Internal(format!(
            "rebuilt chain has length {} instead of {}",
            rebuilt.sigma(),
            chain.sigma()
        )));
    }
    let old: BTreeSet<Name> = chain.principals().into_iter().collect();
    let (old_t, new_t) = (chain.terminal(), rebuilt.terminal());
    let terminal_ok = if include_terminal {
        new_t.principal_1 != new_t.principal_2
            && !old.contains(&new_t.principal_1)
            && !old.contains(&new_t.principal_2)
    } else {
        new_t.principal_1 == old_t.principal_1 && new_t.principal_2 == old_t.principal_2
    };
    let fresh_nonterminal = rebuilt
        .nonterminal()
        .iter()
        .all(|l| !old.contains(&l.principal_1));
    if !(terminal_ok && fresh_nonterminal && principals_distinct(&rebuilt)) {
        let names: Vec<String> = rebuilt.principals().iter().map(|n| n.to_string()).collect();
        return Err(BohmError::DuplicatePrincipals(names.join(", ")));
    }

    Ok(Retupling {
        substitutions,
        slot_wraps,
        heights,
        pair,
        chain: rebuilt,
    })
}
