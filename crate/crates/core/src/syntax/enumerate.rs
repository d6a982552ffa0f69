//! Deterministic bounded formula enumeration.
//!
//! Formulas are produced in layers by depth (the count of connective and
//! quantifier nodes): layer 0 is the four truth constants followed by all
//! atoms, layer k combines earlier layers with each connective and then
//! each quantifier. The same inputs always yield the identical sequence;
//! every search and report in the crate leans on that.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::util::TupleIter;

use super::{Connective, Formula, Quantifier, Signature, Term, TruthConst};

/// Default ceiling on the number of enumerated formulas.
pub const DEFAULT_ENUM_CEILING: usize = 200_000;

/// Enumerates all formulas of depth at most `depth` whose free variables
/// are among `vars` and whose terms use only `vars` and the 0-ary `consts`.
/// Quantifiers bind variables from the same `vars` pool. A negative depth
/// yields the empty sequence.
pub fn enumerate_formulas(
    sig: &Signature,
    depth: isize,
    vars: &[String],
    consts: &[String],
    ceiling: usize,
) -> Result<Vec<Formula>> {
    enumerate(sig, depth, vars, consts, ceiling, true)
}

/// [`enumerate_formulas`] restricted to quantifier-free formulas.
pub fn enumerate_quantifier_free(
    sig: &Signature,
    depth: isize,
    vars: &[String],
    consts: &[String],
    ceiling: usize,
) -> Result<Vec<Formula>> {
    enumerate(sig, depth, vars, consts, ceiling, false)
}

fn enumerate(
    sig: &Signature,
    depth: isize,
    vars: &[String],
    consts: &[String],
    ceiling: usize,
    with_quantifiers: bool,
) -> Result<Vec<Formula>> {
    if depth < 0 {
        return Ok(Vec::new());
    }
    let depth = depth as usize;

    let terms: Vec<Term> = vars
        .iter()
        .map(|v| Term::var(v.clone()))
        .chain(consts.iter().map(|c| Term::constant(c.clone())))
        .collect();

    let mut total: usize = 0;
    let mut bump = |layer: &mut Vec<Formula>, f: Formula| -> Result<()> {
        total += 1;
        if total > ceiling {
            return Err(Error::EnumerationTooLarge {
                count: total as u128,
                ceiling: ceiling as u128,
            });
        }
        layer.push(f);
        Ok(())
    };

    let mut layers: Vec<Vec<Formula>> = Vec::with_capacity(depth + 1);

    let mut layer0 = Vec::new();
    for c in TruthConst::ALL {
        bump(&mut layer0, Formula::Const(c))?;
    }
    for (pred, arity) in sig.predicates() {
        for tuple in TupleIter::new(terms.len(), arity) {
            let args: Vec<Term> = tuple.iter().map(|&i| terms[i].clone()).collect();
            bump(&mut layer0, Formula::atom(pred, args))?;
        }
    }
    layers.push(layer0);

    for k in 1..=depth {
        let mut layer = Vec::new();
        for dl in 0..k {
            let dr = k - 1 - dl;
            for conn in Connective::ALL {
                for li in 0..layers[dl].len() {
                    for ri in 0..layers[dr].len() {
                        let f = Formula::binary(conn, layers[dl][li].clone(), layers[dr][ri].clone());
                        bump(&mut layer, f)?;
                    }
                }
            }
        }
        if with_quantifiers {
            for q in Quantifier::ALL {
                for v in vars {
                    for bi in 0..layers[k - 1].len() {
                        let f = Formula::quant(q, v.clone(), layers[k - 1][bi].clone());
                        bump(&mut layer, f)?;
                    }
                }
            }
        }
        layers.push(layer);
    }

    Ok(layers.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn depth_zero_is_constants_then_atoms() {
        let mut sig = Signature::new();
        sig.add_predicate("P", 1).unwrap();
        let fs = enumerate_formulas(&sig, 0, &strings(&["x"]), &[], 1000).unwrap();
        let rendered: Vec<_> = fs.iter().map(|f| f.to_string()).collect();
        assert_eq!(rendered, vec!["0", "1", "bot", "top", "P(x)"]);
    }

    #[test]
    fn negative_depth_is_empty() {
        let mut sig = Signature::new();
        sig.add_predicate("P", 1).unwrap();
        let fs = enumerate_formulas(&sig, -1, &strings(&["x"]), &[], 1000).unwrap();
        assert!(fs.is_empty());
    }

    #[test]
    fn propositional_depth_one_layer() {
        let mut sig = Signature::new();
        sig.add_predicate("p", 0).unwrap();
        let fs = enumerate_formulas(&sig, 1, &[], &[], 10_000).unwrap();
        // 5 depth-0 formulas, then 4 connectives over 5*5 pairs.
        assert_eq!(fs.len(), 5 + 4 * 25);
        let p = Formula::prop("p");
        for f in [
            Formula::and(p.clone(), p.clone()),
            Formula::or(p.clone(), p.clone()),
            Formula::fusion(p.clone(), p.clone()),
            Formula::implies(p.clone(), p.clone()),
        ] {
            assert!(fs.contains(&f), "missing {f}");
        }
        // No quantified formulas without variables.
        assert!(fs.iter().all(|f| !matches!(f, Formula::Quant(..))));
        assert!(fs.iter().all(|f| f.depth() <= 1));
    }

    #[test]
    fn enumeration_is_deterministic() {
        let mut sig = Signature::new();
        sig.add_predicate("P", 1).unwrap();
        sig.add_function("c", 0).unwrap();
        let vars = strings(&["x"]);
        let consts = strings(&["c"]);
        let a = enumerate_formulas(&sig, 2, &vars, &consts, 100_000).unwrap();
        let b = enumerate_formulas(&sig, 2, &vars, &consts, 100_000).unwrap();
        assert_eq!(a, b);
        // Quantified formulas do appear once variables are available.
        assert!(a.iter().any(|f| matches!(f, Formula::Quant(..))));
    }

    #[test]
    fn ceiling_is_enforced() {
        let mut sig = Signature::new();
        sig.add_predicate("P", 2).unwrap();
        let err = enumerate_formulas(&sig, 2, &strings(&["x", "y"]), &[], 50).unwrap_err();
        assert!(matches!(err, Error::EnumerationTooLarge { .. }));
    }

    #[test]
    fn quantifier_free_variant_has_no_binders() {
        let mut sig = Signature::new();
        sig.add_predicate("P", 1).unwrap();
        let fs = enumerate_quantifier_free(&sig, 2, &strings(&["x"]), &[], 100_000).unwrap();
        assert!(fs.iter().all(|f| !matches!(f, Formula::Quant(..))));
        assert!(!fs.is_empty());
    }
}
