//! Recursive-descent parser for the formula grammar.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

use super::{Connective, Formula, Quantifier, Signature, Term, TruthConst};

/// Parses a formula against a fixed signature. Unknown predicates and
/// functions are errors; a bare identifier in term position that is not a
/// declared constant is a variable.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula> {
    let mut scratch = sig.clone();
    Parser::new(text, &mut scratch, true)?.run()
}

/// Parses a formula, registering unknown symbols in `sig` as it goes:
/// an identifier in formula position becomes a predicate of the applied
/// arity, an applied identifier in term position becomes a function.
/// Bare identifiers in term position stay variables unless they are
/// `@`-parameters or already-declared constants.
pub fn parse_formula_extending(text: &str, sig: &mut Signature) -> Result<Formula> {
    Parser::new(text, sig, false)?.run()
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Comma,
    Dot,
    Arrow,
    AndOp,
    OrOp,
    Fuse,
    Const(TruthConst),
    Forall,
    Exists,
    Ident(String),
    Eof,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            b',' => {
                toks.push((Tok::Comma, i));
                i += 1;
            }
            b'.' => {
                toks.push((Tok::Dot, i));
                i += 1;
            }
            b'&' => {
                toks.push((Tok::Fuse, i));
                i += 1;
            }
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((Tok::Arrow, i));
                    i += 2;
                } else {
                    return Err(Error::Parse {
                        offset: i,
                        message: "expected -> after -".to_string(),
                    });
                }
            }
            b'/' => {
                if bytes.get(i + 1) == Some(&b'\\') {
                    toks.push((Tok::AndOp, i));
                    i += 2;
                } else {
                    return Err(Error::Parse {
                        offset: i,
                        message: "expected /\\".to_string(),
                    });
                }
            }
            b'\\' => {
                if bytes.get(i + 1) == Some(&b'/') {
                    toks.push((Tok::OrOp, i));
                    i += 2;
                } else {
                    return Err(Error::Parse {
                        offset: i,
                        message: "expected \\/".to_string(),
                    });
                }
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                match &text[start..i] {
                    "0" => toks.push((Tok::Const(TruthConst::Zero), start)),
                    "1" => toks.push((Tok::Const(TruthConst::One), start)),
                    other => {
                        return Err(Error::Parse {
                            offset: start,
                            message: format!("{other} is not a truth constant (only 0 and 1)"),
                        })
                    }
                }
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' | b'@' => {
                let start = i;
                i += 1;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'')
                {
                    i += 1;
                }
                let word = &text[start..i];
                let tok = match word {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    "bot" => Tok::Const(TruthConst::Bot),
                    "top" => Tok::Const(TruthConst::Top),
                    "@" => {
                        return Err(Error::Parse {
                            offset: start,
                            message: "bare @ is not a name".to_string(),
                        })
                    }
                    _ => Tok::Ident(word.to_string()),
                };
                toks.push((tok, start));
            }
            _ => {
                return Err(Error::Parse {
                    offset: i,
                    message: format!("unexpected character {:?}", text[i..].chars().next().unwrap()),
                })
            }
        }
    }
    toks.push((Tok::Eof, text.len()));
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    sig: &'a mut Signature,
    strict: bool,
}

impl<'a> Parser<'a> {
    fn new(text: &str, sig: &'a mut Signature, strict: bool) -> Result<Parser<'a>> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            sig,
            strict,
        })
    }

    fn run(mut self) -> Result<Formula> {
        let f = self.formula()?;
        let (tok, offset) = self.peek();
        if tok != &Tok::Eof {
            return Err(Error::Parse {
                offset,
                message: "unexpected input after formula".to_string(),
            });
        }
        Ok(f)
    }

    fn peek(&self) -> (&Tok, usize) {
        let (t, o) = &self.toks[self.pos];
        (t, *o)
    }

    fn bump(&mut self) -> (Tok, usize) {
        let (t, o) = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        (t, o)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<usize> {
        let (t, o) = self.bump();
        if t == tok {
            Ok(o)
        } else {
            Err(Error::Parse {
                offset: o,
                message: format!("expected {what}"),
            })
        }
    }

    // implication := disjunction ('->' implication)?   (right-associative)
    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.peek().0 == &Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            Ok(Formula::binary(Connective::Implies, lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut acc = self.conjunction()?;
        while self.peek().0 == &Tok::OrOp {
            self.bump();
            let rhs = self.conjunction()?;
            acc = Formula::binary(Connective::Or, acc, rhs);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut acc = self.fused()?;
        while self.peek().0 == &Tok::AndOp {
            self.bump();
            let rhs = self.fused()?;
            acc = Formula::binary(Connective::And, acc, rhs);
        }
        Ok(acc)
    }

    fn fused(&mut self) -> Result<Formula> {
        let mut acc = self.primary()?;
        while self.peek().0 == &Tok::Fuse {
            self.bump();
            let rhs = self.primary()?;
            acc = Formula::binary(Connective::Fusion, acc, rhs);
        }
        Ok(acc)
    }

    fn primary(&mut self) -> Result<Formula> {
        let (tok, offset) = self.bump();
        match tok {
            Tok::Const(c) => Ok(Formula::Const(c)),
            Tok::Forall | Tok::Exists => {
                let q = if tok == Tok::Forall {
                    Quantifier::Forall
                } else {
                    Quantifier::Exists
                };
                let (vtok, voff) = self.bump();
                let var = match vtok {
                    Tok::Ident(name) if !name.starts_with('@') => name,
                    _ => {
                        return Err(Error::Parse {
                            offset: voff,
                            message: "expected a variable name".to_string(),
                        })
                    }
                };
                self.expect(Tok::Dot, ". after quantified variable")?;
                let body = self.formula()?;
                Ok(Formula::quant(q, var, body))
            }
            Tok::LParen => {
                let f = self.formula()?;
                self.expect(Tok::RParen, ")")?;
                Ok(f)
            }
            Tok::Ident(name) => {
                let args = self.maybe_args()?;
                self.resolve_atom(name, args, offset)
            }
            _ => Err(Error::Parse {
                offset,
                message: "expected a formula".to_string(),
            }),
        }
    }

    /// Parses `(t1, ..., tn)` if present.
    fn maybe_args(&mut self) -> Result<Option<Vec<Term>>> {
        if self.peek().0 != &Tok::LParen {
            return Ok(None);
        }
        self.bump();
        let mut args = Vec::new();
        loop {
            args.push(self.term()?);
            let (tok, offset) = self.bump();
            match tok {
                Tok::Comma => continue,
                Tok::RParen => break,
                _ => {
                    return Err(Error::Parse {
                        offset,
                        message: "expected , or )".to_string(),
                    })
                }
            }
        }
        Ok(Some(args))
    }

    fn term(&mut self) -> Result<Term> {
        let (tok, offset) = self.bump();
        let name = match tok {
            Tok::Ident(name) => name,
            _ => {
                return Err(Error::Parse {
                    offset,
                    message: "expected a term".to_string(),
                })
            }
        };
        let args = self.maybe_args()?;
        match args {
            Some(args) => {
                self.check_function(&name, args.len(), offset)?;
                Ok(Term::App(name, args))
            }
            None => match self.sig.function_arity(&name) {
                Some(0) => Ok(Term::App(name, Vec::new())),
                Some(arity) => Err(Error::Parse {
                    offset,
                    message: format!("function {name} of arity {arity} needs arguments"),
                }),
                None if name.starts_with('@') => {
                    // Parameter constants are always constants, declared or not.
                    if !self.strict {
                        self.sig.add_function(name.clone(), 0).map_err(|e| Error::Parse {
                            offset,
                            message: e.to_string(),
                        })?;
                    }
                    Ok(Term::App(name, Vec::new()))
                }
                None => Ok(Term::Var(name)),
            },
        }
    }

    fn check_function(&mut self, name: &str, arity: usize, offset: usize) -> Result<()> {
        match self.sig.function_arity(name) {
            Some(a) if a == arity => Ok(()),
            Some(a) => Err(Error::Parse {
                offset,
                message: format!("function {name} expects {a} argument(s), got {arity}"),
            }),
            None if self.strict => Err(Error::Parse {
                offset,
                message: format!("unknown function {name}"),
            }),
            None => self.sig.add_function(name, arity).map_err(|e| Error::Parse {
                offset,
                message: e.to_string(),
            }),
        }
    }

    fn resolve_atom(&mut self, name: String, args: Option<Vec<Term>>, offset: usize) -> Result<Formula> {
        let args = args.unwrap_or_default();
        match self.sig.predicate_arity(&name) {
            Some(a) if a == args.len() => Ok(Formula::Atom(name, args)),
            Some(a) => Err(Error::Parse {
                offset,
                message: format!("predicate {name} expects {a} argument(s), got {}", args.len()),
            }),
            None if self.strict => Err(Error::Parse {
                offset,
                message: format!("unknown predicate {name}"),
            }),
            None => {
                self.sig
                    .add_predicate(name.clone(), args.len())
                    .map_err(|e| Error::Parse {
                        offset,
                        message: e.to_string(),
                    })?;
                Ok(Formula::Atom(name, args))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn sig() -> Signature {
        let mut s = Signature::new();
        s.add_predicate("P", 1).unwrap();
        s.add_predicate("Q", 1).unwrap();
        s.add_predicate("p", 0).unwrap();
        s.add_function("c", 0).unwrap();
        s.add_function("f", 1).unwrap();
        s
    }

    #[test]
    fn quantifier_body_extends_to_the_end() {
        let f = parse_formula("forall x. P(x) -> Q(x)", &sig()).unwrap();
        assert_eq!(
            f,
            Formula::forall(
                "x",
                Formula::implies(
                    Formula::atom("P", vec![Term::var("x")]),
                    Formula::atom("Q", vec![Term::var("x")]),
                )
            )
        );
    }

    #[test]
    fn propositional_atom_and_constant() {
        let f = parse_formula("p & 1", &sig()).unwrap();
        assert_eq!(
            f,
            Formula::fusion(Formula::prop("p"), Formula::Const(TruthConst::One))
        );
    }

    #[test]
    fn error_offset_on_unbalanced_paren() {
        let err = parse_formula("P(x", &sig()).unwrap_err();
        assert_eq!(err, Error::Parse { offset: 3, message: "expected , or )".to_string() });
    }

    #[test]
    fn precedence_stack() {
        // -> binds loosest, then \/, /\, &.
        let f = parse_formula("p & p \\/ p /\\ p -> p", &sig()).unwrap();
        assert_eq!(
            f,
            Formula::implies(
                Formula::or(
                    Formula::fusion(Formula::prop("p"), Formula::prop("p")),
                    Formula::and(Formula::prop("p"), Formula::prop("p")),
                ),
                Formula::prop("p"),
            )
        );
    }

    #[test]
    fn implication_is_right_associative() {
        let f = parse_formula("p -> p -> p", &sig()).unwrap();
        assert_eq!(
            f,
            Formula::implies(
                Formula::prop("p"),
                Formula::implies(Formula::prop("p"), Formula::prop("p"))
            )
        );
    }

    #[test]
    fn nested_terms_parse() {
        let f = parse_formula("P(f(f(c)))", &sig()).unwrap();
        assert_eq!(
            f,
            Formula::atom(
                "P",
                vec![Term::app("f", vec![Term::app("f", vec![Term::constant("c")])])]
            )
        );
    }

    #[test]
    fn unknown_symbols_are_strict_errors() {
        assert!(parse_formula("S(x)", &sig()).is_err());
        assert!(parse_formula("P(g(x))", &sig()).is_err());
        // Arity mismatch.
        assert!(parse_formula("P(x, x)", &sig()).is_err());
        assert!(parse_formula("P(f(x, x))", &sig()).is_err());
    }

    #[test]
    fn extending_parser_registers_symbols() {
        let mut s = Signature::new();
        let f = parse_formula_extending("S(g(x), @a) -> t", &mut s).unwrap();
        assert_eq!(s.predicate_arity("S"), Some(2));
        assert_eq!(s.predicate_arity("t"), Some(0));
        assert_eq!(s.function_arity("g"), Some(1));
        assert_eq!(s.function_arity("@a"), Some(0));
        // x stays a variable
        assert_eq!(f.free_variables().into_iter().collect::<Vec<_>>(), vec!["x"]);
    }

    #[test]
    fn keywords_are_reserved() {
        assert!(parse_formula("forall bot. p", &sig()).is_err());
        let err = parse_formula("2", &sig()).unwrap_err();
        assert!(matches!(err, Error::Parse { offset: 0, .. }));
    }
}
