//! Printer for the surface syntax, with the fewest parentheses the grammar allows.

use crate::term::Term;

pub fn print(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, &mut out);
    out
}

fn write_term(t: &Term, out: &mut String) {
    crate::grow(|| match t {
        Term::Var(x) => out.push_str(x),
        Term::Abs(x, body) => {
            out.push('\\');
            out.push_str(x);
            out.push_str(". ");
            write_term(body, out);
        }
        Term::App(f, a) => {
            match &**f {
                Term::Abs(..) => paren(f, out),
                _ => write_term(f, out),
            }
            out.push(' ');
            match &**a {
                Term::Var(x) => out.push_str(x),
                _ => paren(a, out),
            }
        }
    })
}

fn paren(t: &Term, out: &mut String) {
    out.push('(');
    write_term(t, out);
    out.push(')');
}
