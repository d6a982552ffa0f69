//! Signatures, terms and formulas of the graded predicate language, with a
//! concrete text grammar, a printer and bounded formula enumeration.
//!
//! The language has the connectives `/\`, `\/`, `&`, `->`, the truth
//! constants `0`, `1`, `bot`, `top` and the quantifiers `forall`/`exists`.
//! There is no primitive negation; write `phi -> 0` instead.
//!
//! Grammar precedence, low to high: `->` (right-associative), `\/`, `/\`,
//! `&` (left-associative). A quantifier body extends to the longest formula.
//! `#` starts a comment line in the file formats built on this grammar.

mod enumerate;
mod parse;

pub use enumerate::{enumerate_formulas, enumerate_quantifier_free, DEFAULT_ENUM_CEILING};
pub use parse::{parse_formula, parse_formula_extending};

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Words the grammar claims for itself; not usable as symbol or variable names.
pub const RESERVED_WORDS: [&str; 4] = ["forall", "exists", "bot", "top"];

/// The four truth constants, in canonical enumeration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TruthConst {
    Zero,
    One,
    Bot,
    Top,
}

impl TruthConst {
    pub const ALL: [TruthConst; 4] = [
        TruthConst::Zero,
        TruthConst::One,
        TruthConst::Bot,
        TruthConst::Top,
    ];

    pub fn spelling(self) -> &'static str {
        match self {
            TruthConst::Zero => "0",
            TruthConst::One => "1",
            TruthConst::Bot => "bot",
            TruthConst::Top => "top",
        }
    }
}

/// Binary connectives. `Fusion` is the residuated (strong) conjunction `&`;
/// `And`/`Or` are the lattice operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connective {
    And,
    Or,
    Fusion,
    Implies,
}

impl Connective {
    pub const ALL: [Connective; 4] = [
        Connective::And,
        Connective::Or,
        Connective::Fusion,
        Connective::Implies,
    ];

    pub fn spelling(self) -> &'static str {
        match self {
            Connective::And => "/\\",
            Connective::Or => "\\/",
            Connective::Fusion => "&",
            Connective::Implies => "->",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub const ALL: [Quantifier; 2] = [Quantifier::Forall, Quantifier::Exists];

    pub fn spelling(self) -> &'static str {
        match self {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        }
    }
}

/// A term: an object variable or a function application. Constants are
/// 0-ary applications.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::App(name.into(), Vec::new())
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(name.into(), args)
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => {
                for t in args {
                    t.collect_variables(out);
                }
            }
        }
    }

    fn substitute(&self, var: &str, replacement: &Term) -> Term {
        match self {
            Term::Var(v) if v == var => replacement.clone(),
            Term::Var(_) => self.clone(),
            Term::App(f, args) => Term::App(
                f.clone(),
                args.iter().map(|t| t.substitute(var, replacement)).collect(),
            ),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::App(name, args) => {
                f.write_str(name)?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// A formula of the graded predicate language.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Const(TruthConst),
    Atom(String, Vec<Term>),
    Binary(Connective, Box<Formula>, Box<Formula>),
    Quant(Quantifier, String, Box<Formula>),
}

impl Formula {
    pub fn truth(c: TruthConst) -> Formula {
        Formula::Const(c)
    }

    pub fn atom(name: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Atom(name.into(), args)
    }

    /// A propositional atom: a 0-ary predicate.
    pub fn prop(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into(), Vec::new())
    }

    pub fn binary(c: Connective, lhs: Formula, rhs: Formula) -> Formula {
        Formula::Binary(c, Box::new(lhs), Box::new(rhs))
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Formula {
        Formula::binary(Connective::And, lhs, rhs)
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Formula {
        Formula::binary(Connective::Or, lhs, rhs)
    }

    pub fn fusion(lhs: Formula, rhs: Formula) -> Formula {
        Formula::binary(Connective::Fusion, lhs, rhs)
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Formula {
        Formula::binary(Connective::Implies, lhs, rhs)
    }

    pub fn quant(q: Quantifier, var: impl Into<String>, body: Formula) -> Formula {
        Formula::Quant(q, var.into(), Box::new(body))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
        Formula::quant(Quantifier::Forall, var, body)
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Formula {
        Formula::quant(Quantifier::Exists, var, body)
    }

    /// Number of connective and quantifier nodes. This is the bound used by
    /// all depth-limited enumerations and checks.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Atom(..) => 0,
            Formula::Binary(_, l, r) => 1 + l.depth() + r.depth(),
            Formula::Quant(_, _, body) => 1 + body.depth(),
        }
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Const(_) => {}
            Formula::Atom(_, args) => {
                for t in args {
                    for v in t.variables() {
                        if !bound.iter().any(|b| *b == v) {
                            out.insert(v);
                        }
                    }
                }
            }
            Formula::Binary(_, l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Formula::Quant(_, v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    /// All variables occurring in the formula, bound or free.
    fn all_variables(&self) -> BTreeSet<String> {
        match self {
            Formula::Const(_) => BTreeSet::new(),
            Formula::Atom(_, args) => {
                let mut out = BTreeSet::new();
                for t in args {
                    t.collect_variables(&mut out);
                }
                out
            }
            Formula::Binary(_, l, r) => {
                let mut out = l.all_variables();
                out.extend(r.all_variables());
                out
            }
            Formula::Quant(_, v, body) => {
                let mut out = body.all_variables();
                out.insert(v.clone());
                out
            }
        }
    }

    /// Capture-avoiding substitution of `replacement` for free occurrences
    /// of `var`. Bound variables are renamed where needed, so this is total.
    pub fn substitute(&self, var: &str, replacement: &Term) -> Formula {
        match self {
            Formula::Const(_) => self.clone(),
            Formula::Atom(p, args) => Formula::Atom(
                p.clone(),
                args.iter().map(|t| t.substitute(var, replacement)).collect(),
            ),
            Formula::Binary(c, l, r) => Formula::Binary(
                *c,
                Box::new(l.substitute(var, replacement)),
                Box::new(r.substitute(var, replacement)),
            ),
            Formula::Quant(q, v, body) => {
                if v == var {
                    // `var` is bound here; nothing free to replace below.
                    return self.clone();
                }
                if !body.free_variables().contains(var) {
                    return self.clone();
                }
                if replacement.variables().contains(v) {
                    // Binder would capture a variable of the replacement.
                    let mut forbidden = self.all_variables();
                    forbidden.extend(replacement.variables());
                    forbidden.insert(var.to_owned());
                    let fresh = fresh_variable(v, &forbidden);
                    let renamed = body.substitute(v, &Term::Var(fresh.clone()));
                    Formula::Quant(*q, fresh, Box::new(renamed.substitute(var, replacement)))
                } else {
                    Formula::Quant(*q, v.clone(), Box::new(body.substitute(var, replacement)))
                }
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Quant(..) => 0,
            Formula::Binary(Connective::Implies, ..) => 1,
            Formula::Binary(Connective::Or, ..) => 2,
            Formula::Binary(Connective::And, ..) => 3,
            Formula::Binary(Connective::Fusion, ..) => 4,
            Formula::Const(_) | Formula::Atom(..) => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let needs_parens = self.precedence() < min;
        if needs_parens {
            f.write_str("(")?;
        }
        match self {
            Formula::Const(c) => f.write_str(c.spelling())?,
            Formula::Atom(p, args) => {
                f.write_str(p)?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    f.write_str(")")?;
                }
            }
            Formula::Binary(c, l, r) => {
                let p = self.precedence();
                // `->` is right-associative, the rest left-associative.
                let (lmin, rmin) = if *c == Connective::Implies {
                    (p + 1, p)
                } else {
                    (p, p + 1)
                };
                l.fmt_prec(f, lmin)?;
                write!(f, " {} ", c.spelling())?;
                r.fmt_prec(f, rmin)?;
            }
            Formula::Quant(q, v, body) => {
                write!(f, "{} {v}. ", q.spelling())?;
                body.fmt_prec(f, 0)?;
            }
        }
        if needs_parens {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// Picks a primed variant of `base` not occurring in `forbidden`.
fn fresh_variable(base: &str, forbidden: &BTreeSet<String>) -> String {
    let mut candidate = format!("{base}'");
    while forbidden.contains(&candidate) {
        candidate.push('\'');
    }
    candidate
}

/// The name of the parameter constant denoting a domain element. Parameter
/// constants never collide with user symbols because user names cannot
/// start with `@`.
pub fn param_constant(element: &str) -> String {
    format!("@{element}")
}

/// Whether a name is valid and free of the `@` parameter prefix; domain
/// elements and variables must satisfy this.
pub(crate) fn is_valid_plain_name(name: &str) -> bool {
    is_valid_name(name) && !name.starts_with('@') && !RESERVED_WORDS.contains(&name)
}

/// Whether a name is acceptable as a user symbol (`@` reserved for
/// parameter constants, which are accepted too).
fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    if !(first.is_ascii_alphabetic() || first == '_' || first == '@') {
        return false;
    }
    if first == '@' && name.len() == 1 {
        return false;
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// A predicate language: predicate and function symbols with fixed arities.
/// 0-ary functions are constants; 0-ary predicates are propositional atoms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    preds: BTreeMap<String, usize>,
    funcs: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn add_predicate(&mut self, name: impl Into<String>, arity: usize) -> Result<()> {
        let name = name.into();
        check_symbol_name(&name)?;
        match self.preds.get(&name) {
            Some(&a) if a != arity => Err(Error::SignatureMismatch {
                reason: format!("predicate {name} declared with arities {a} and {arity}"),
            }),
            _ => {
                self.preds.insert(name, arity);
                Ok(())
            }
        }
    }

    pub fn add_function(&mut self, name: impl Into<String>, arity: usize) -> Result<()> {
        let name = name.into();
        check_symbol_name(&name)?;
        match self.funcs.get(&name) {
            Some(&a) if a != arity => Err(Error::SignatureMismatch {
                reason: format!("function {name} declared with arities {a} and {arity}"),
            }),
            _ => {
                self.funcs.insert(name, arity);
                Ok(())
            }
        }
    }

    pub fn predicate_arity(&self, name: &str) -> Option<usize> {
        self.preds.get(name).copied()
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.funcs.get(name).copied()
    }

    /// Predicates in name order.
    pub fn predicates(&self) -> impl Iterator<Item = (&str, usize)> {
        self.preds.iter().map(|(n, &a)| (n.as_str(), a))
    }

    /// Functions in name order.
    pub fn functions(&self) -> impl Iterator<Item = (&str, usize)> {
        self.funcs.iter().map(|(n, &a)| (n.as_str(), a))
    }

    /// Names of the 0-ary functions, in name order.
    pub fn constants(&self) -> impl Iterator<Item = &str> {
        self.funcs
            .iter()
            .filter(|(_, &a)| a == 0)
            .map(|(n, _)| n.as_str())
    }

    /// Records every symbol of `formula`, failing on arity conflicts.
    pub fn extend_from_formula(&mut self, formula: &Formula) -> Result<()> {
        match formula {
            Formula::Const(_) => Ok(()),
            Formula::Atom(p, args) => {
                self.add_predicate(p.clone(), args.len())?;
                for t in args {
                    self.extend_from_term(t)?;
                }
                Ok(())
            }
            Formula::Binary(_, l, r) => {
                self.extend_from_formula(l)?;
                self.extend_from_formula(r)
            }
            Formula::Quant(_, _, body) => self.extend_from_formula(body),
        }
    }

    fn extend_from_term(&mut self, term: &Term) -> Result<()> {
        match term {
            Term::Var(_) => Ok(()),
            Term::App(f, args) => {
                self.add_function(f.clone(), args.len())?;
                for t in args {
                    self.extend_from_term(t)?;
                }
                Ok(())
            }
        }
    }
}

fn check_symbol_name(name: &str) -> Result<()> {
    if RESERVED_WORDS.contains(&name) || !is_valid_name(name) {
        return Err(Error::ReservedName {
            name: name.to_string(),
        });
    }
    Ok(())
}

/// Builds the signature of everything occurring in `formulas`.
pub fn infer_signature<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Result<Signature> {
    let mut sig = Signature::new();
    for f in formulas {
        sig.extend_from_formula(f)?;
    }
    Ok(sig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn sig_p1() -> Signature {
        let mut sig = Signature::new();
        sig.add_predicate("P", 1).unwrap();
        sig.add_predicate("Q", 1).unwrap();
        sig.add_predicate("R", 2).unwrap();
        sig.add_function("c", 0).unwrap();
        sig.add_function("f", 1).unwrap();
        sig
    }

    #[test]
    fn free_variables_examples() {
        let sig = sig_p1();
        let f = parse_formula("forall x. P(x)", &sig).unwrap();
        assert!(f.free_variables().is_empty());

        let f = parse_formula("P(x) -> Q(y)", &sig).unwrap();
        let fv: Vec<_> = f.free_variables().into_iter().collect();
        assert_eq!(fv, vec!["x".to_string(), "y".to_string()]);

        let f = parse_formula("exists x. R(x, y)", &sig).unwrap();
        let fv: Vec<_> = f.free_variables().into_iter().collect();
        assert_eq!(fv, vec!["y".to_string()]);
    }

    #[test]
    fn substitute_examples() {
        let sig = sig_p1();
        let c = Term::constant("c");

        let f = parse_formula("P(x)", &sig).unwrap();
        assert_eq!(f.substitute("x", &c), parse_formula("P(c)", &sig).unwrap());

        let f = parse_formula("exists x. P(x)", &sig).unwrap();
        assert_eq!(f.substitute("x", &c), f);

        // Capture avoidance: substituting y for x under a binder for y.
        let f = parse_formula("exists y. R(x, y)", &sig).unwrap();
        let g = f.substitute("x", &Term::var("y"));
        assert_eq!(g, Formula::exists("y'", Formula::atom("R", vec![Term::var("y"), Term::var("y'")])));
        assert_eq!(g.free_variables().into_iter().collect::<Vec<_>>(), vec!["y".to_string()]);
    }

    #[test]
    fn substitution_removes_the_variable() {
        let sig = sig_p1();
        let f = parse_formula("P(x) /\\ (exists y. R(x, y)) -> Q(x)", &sig).unwrap();
        let g = f.substitute("x", &Term::constant("c"));
        assert!(!g.free_variables().contains("x"));
    }

    #[test]
    fn depth_counts_connectives_and_quantifiers() {
        let sig = sig_p1();
        assert_eq!(parse_formula("P(x)", &sig).unwrap().depth(), 0);
        assert_eq!(parse_formula("P(x) -> Q(x)", &sig).unwrap().depth(), 1);
        assert_eq!(
            parse_formula("forall x. P(x) -> Q(x)", &sig).unwrap().depth(),
            2
        );
    }

    #[test]
    fn printer_respects_associativity() {
        let sig = {
            let mut s = Signature::new();
            s.add_predicate("p", 0).unwrap();
            s.add_predicate("q", 0).unwrap();
            s.add_predicate("r", 0).unwrap();
            s
        };
        let p = Formula::prop("p");
        let q = Formula::prop("q");
        let r = Formula::prop("r");

        let f = Formula::implies(Formula::implies(p.clone(), q.clone()), r.clone());
        assert_eq!(f.to_string(), "(p -> q) -> r");
        assert_eq!(parse_formula(&f.to_string(), &sig).unwrap(), f);

        let f = Formula::implies(p.clone(), Formula::implies(q.clone(), r.clone()));
        assert_eq!(f.to_string(), "p -> q -> r");

        let f = Formula::or(p.clone(), Formula::or(q.clone(), r.clone()));
        assert_eq!(f.to_string(), "p \\/ (q \\/ r)");
        assert_eq!(parse_formula(&f.to_string(), &sig).unwrap(), f);

        let f = Formula::and(Formula::fusion(p.clone(), q.clone()), r.clone());
        assert_eq!(f.to_string(), "p & q /\\ r");
        assert_eq!(parse_formula(&f.to_string(), &sig).unwrap(), f);
    }

    #[test]
    fn printer_parenthesizes_quantifier_operands() {
        let sig = sig_p1();
        let f = Formula::implies(
            Formula::forall("x", Formula::atom("P", vec![Term::var("x")])),
            Formula::exists("x", Formula::atom("Q", vec![Term::var("x")])),
        );
        assert_eq!(f.to_string(), "(forall x. P(x)) -> (exists x. Q(x))");
        assert_eq!(parse_formula(&f.to_string(), &sig).unwrap(), f);
    }

    #[test]
    fn signature_rejects_conflicting_arity() {
        let mut sig = Signature::new();
        sig.add_predicate("P", 1).unwrap();
        assert!(sig.add_predicate("P", 1).is_ok());
        assert!(matches!(
            sig.add_predicate("P", 2),
            Err(Error::SignatureMismatch { .. })
        ));
        assert!(matches!(
            sig.add_function("forall", 0),
            Err(Error::ReservedName { .. })
        ));
    }

    #[test]
    fn infer_signature_walks_terms() {
        let sig = sig_p1();
        let f = parse_formula("forall x. P(f(x)) -> R(c, x)", &sig).unwrap();
        let inferred = infer_signature([&f]).unwrap();
        assert_eq!(inferred.predicate_arity("P"), Some(1));
        assert_eq!(inferred.predicate_arity("R"), Some(2));
        assert_eq!(inferred.function_arity("f"), Some(1));
        assert_eq!(inferred.function_arity("c"), Some(0));
    }
}
