use crate::error::BohmError;
use crate::reduce::{eta_normal_form, first_beta_redex};
use crate::term::{alpha_eq, FreshSupply, Name, Term};

/// `λt1 … λtn. ξ X1 … Xm`: order `n`, principal variable `ξ`, grade `m`.
#[derive(Clone, Debug)]
pub struct HeadForm {
    pub binders: Vec<Name>,
    pub principal: Name,
    pub args: Vec<Term>,
}

impl HeadForm {
    pub fn order(&self) -> usize {
        self.binders.len()
    }

    pub fn grade(&self) -> usize {
        self.args.len()
    }

    /// `n − m`, the quantity the similarity relation compares.
    pub fn excess(&self) -> isize {
        self.order() as isize - self.grade() as isize
    }

    pub fn reassemble(&self) -> Term {
        let body = Term::apps(Term::Var(self.principal.clone()), self.args.iter().cloned());
        Term::abss(self.binders.iter().map(|b| &**b), body)
    }

    /// Decomposes a term that is already in head normal form. Panics if the
    /// head of the body is not a variable.
    pub(crate) fn of_hnf(t: &Term) -> HeadForm {
        let (binders, body) = t.binders();
        let (head, args) = body.spine();
        let principal = head
            .as_var()
            .unwrap_or_else(|| panic!("term is not in head normal form: {t}"))
            .clone();
        HeadForm {
            binders: binders.into_iter().cloned().collect(),
            principal,
            args: args.into_iter().cloned().collect(),
        }
    }
}

/// The engine works on β-normal terms. η-redexes are tolerated and terms
/// are compared up to η, so `λx. f x` and `f` count as the same term.
pub(crate) fn require_normal(t: &Term) -> Result<(), BohmError> {
    match first_beta_redex(t) {
        None => Ok(()),
        Some(r) => Err(BohmError::NotNormal {
            term: t.to_string(),
            redex: r.to_string(),
        }),
    }
}

/// α-equality of η-normal forms, for β-normal arguments.
pub(crate) fn eta_eq(a: &Term, b: &Term) -> bool {
    alpha_eq(a, b) || alpha_eq(&eta_normal_form(a), &eta_normal_form(b))
}

pub(crate) fn require_closed(t: &Term) -> Result<(), BohmError> {
    let fv = t.free_vars();
    if fv.is_empty() {
        Ok(())
    } else {
        let names: Vec<&str> = fv.iter().map(|n| &**n).collect();
        Err(BohmError::NotClosed(names.join(", ")))
    }
}

pub fn head_form(n: &Term) -> Result<HeadForm, BohmError> {
    require_normal(n)?;
    Ok(HeadForm::of_hnf(n))
}

/// `n1 ~ n2`: after applying both to the same fresh variables (as many as the
/// larger order), the principal variables coincide and `n − m` agrees.
pub fn similar(n1: &Term, n2: &Term) -> Result<bool, BohmError> {
    let h1 = head_form(n1)?;
    let h2 = head_form(n2)?;
    if h1.excess() != h2.excess() {
        return Ok(false);
    }
    let mut supply = FreshSupply::avoiding([n1, n2]);
    let width = h1.order().max(h2.order());
    let (m1, m2) = super::chain::expand_pair(n1, n2, width, &mut supply)?;
    let (a, b) = (HeadForm::of_hnf(&m1), HeadForm::of_hnf(&m2));
    Ok(a.principal == b.principal && a.grade() == b.grade())
}
