//! Seeded random βη-normal forms, generated straight from the grammar
//! `λt1 … λtn. ξ X1 … Xm`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::reduce::is_beta_eta_nf;
use crate::term::{alpha_eq, FreshSupply, Name, Term};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("infeasible configuration: {0}")]
    InfeasibleConfig(String),
    #[error("no distinct pair found after {0} attempts")]
    NoDistinctPair(usize),
}

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub seed: u64,
    /// Upper bound on the node count of every generated term.
    pub max_size: usize,
    pub max_order: usize,
    /// Free variables the terms may use; empty for closed terms.
    pub free_pool: Vec<Name>,
}

impl GenConfig {
    pub fn closed(seed: u64, max_size: usize, max_order: usize) -> Self {
        GenConfig {
            seed,
            max_size,
            max_order,
            free_pool: Vec::new(),
        }
    }
}

const MAX_GRADE: usize = 4;
const PAIR_ATTEMPTS: usize = 200;

/// A stream of random normal forms under one configuration.
pub struct Generator {
    cfg: GenConfig,
    rng: ChaCha8Rng,
}

impl Generator {
    pub fn new(cfg: GenConfig) -> Result<Self, GenError> {
        if cfg.max_size == 0 {
            return Err(GenError::InfeasibleConfig(
                "max_size must be at least 1".into(),
            ));
        }
        if cfg.free_pool.is_empty() && (cfg.max_size < 2 || cfg.max_order == 0) {
            return Err(GenError::InfeasibleConfig(
                "a closed normal form needs max_size >= 2 and max_order >= 1".into(),
            ));
        }
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Ok(Generator { cfg, rng })
    }

    pub fn nf(&mut self) -> Term {
        let size = self.rng.gen_range(1..=self.cfg.max_size);
        let size = if self.cfg.free_pool.is_empty() {
            size.max(2)
        } else {
            size
        };
        let mut names = self.supply();
        let scope = self.cfg.free_pool.clone();
        let t = self.gen(size, &scope, &mut names);
        debug_assert!(is_beta_eta_nf(&t), "generated {t}");
        t
    }

    /// Two normal forms that are not α-equal. Half of the time the second is
    /// the first with one subterm regenerated, so the pair shares structure.
    pub fn distinct_pair(&mut self) -> Result<(Term, Term), GenError> {
        for _ in 0..PAIR_ATTEMPTS {
            let a = self.nf();
            let b = if self.rng.gen_bool(0.5) {
                let mut names = self.supply();
                names.reserve_term(&a);
                let scope = self.cfg.free_pool.clone();
                self.mutate(&a, &scope, &mut names)
            } else {
                self.nf()
            };
            if b.size() <= self.cfg.max_size && is_beta_eta_nf(&b) && !alpha_eq(&a, &b) {
                return Ok((a, b));
            }
        }
        Err(GenError::NoDistinctPair(PAIR_ATTEMPTS))
    }

    fn supply(&self) -> FreshSupply {
        let mut s = FreshSupply::new();
        for y in &self.cfg.free_pool {
            s.reserve(y);
        }
        s
    }

    // A normal form of at most `size` nodes over `scope`.
    fn gen(&mut self, size: usize, scope: &[Name], names: &mut FreshSupply) -> Term {
        crate::grow(|| {
            let min_order = usize::from(scope.is_empty());
            let max_order = self.cfg.max_order.min(size - 1).max(min_order);
            let n = self.rng.gen_range(min_order..=max_order);
            let binders: Vec<Name> = (0..n).map(|_| names.fresh("t")).collect();
            let mut inner: Vec<Name> = scope.to_vec();
            inner.extend(binders.iter().cloned());

            let rest = size - n - 1;
            let m = self.rng.gen_range(0..=(rest / 2).min(MAX_GRADE));
            let mut shares = vec![1usize; m];
            for _ in 0..rest - 2 * m {
                if m == 0 || self.rng.gen_bool(0.3) {
                    continue;
                }
                let k = self.rng.gen_range(0..m);
                shares[k] += 1;
            }
            let head = inner[self.rng.gen_range(0..inner.len())].clone();
            let mut args: Vec<Term> = shares
                .into_iter()
                .map(|s| self.gen(s, &inner, names))
                .collect();
            if let Some(t) = binders.last() {
                self.eta_guard(&head, &mut args, t, &inner);
            }
            let body = Term::apps(Term::Var(head), args);
            Term::abss(binders.iter().map(|b| &**b), body)
        })
    }

    // Keeps `λ… t. ξ X1 … Xm` from ending in an η-redex `X' t`.
    fn eta_guard(&mut self, head: &Name, args: &mut Vec<Term>, t: &Name, scope: &[Name]) {
        let ends_in_t = matches!(args.last().and_then(Term::as_var), Some(v) if v == t);
        if !ends_in_t || head == t {
            return;
        }
        let m = args.len();
        if args[..m - 1].iter().any(|a| a.occurs_free(t)) {
            return;
        }
        let others: Vec<&Name> = scope.iter().filter(|v| *v != t).collect();
        if others.is_empty() {
            args.pop();
        } else {
            args[m - 1] = Term::Var(others[self.rng.gen_range(0..others.len())].clone());
        }
    }

    // Regenerates one subterm of `t` (a head form in `scope`).
    fn mutate(&mut self, t: &Term, scope: &[Name], names: &mut FreshSupply) -> Term {
        crate::grow(|| {
            let (binders, body) = t.binders();
            let (head, args) = body.spine();
            if args.is_empty() || self.rng.gen_bool(0.3) {
                return self.gen(t.size(), scope, names);
            }
            let mut inner: Vec<Name> = scope.to_vec();
            inner.extend(binders.iter().map(|b| (*b).clone()));
            let k = self.rng.gen_range(0..args.len());
            let mut new_args: Vec<Term> = args.iter().map(|a| (*a).clone()).collect();
            new_args[k] = self.mutate(args[k], &inner, names);
            let body = Term::apps(head.clone(), new_args);
            Term::abss(binders.iter().map(|b| &***b), body)
        })
    }
}

pub fn random_nf(cfg: &GenConfig) -> Result<Term, GenError> {
    Ok(Generator::new(cfg.clone())?.nf())
}

pub fn random_distinct_pair(cfg: &GenConfig) -> Result<(Term, Term), GenError> {
    Generator::new(cfg.clone())?.distinct_pair()
}
