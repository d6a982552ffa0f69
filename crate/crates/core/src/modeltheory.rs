//! Substructures, elementary substructures, chains of models and their
//! unions, relative theories and diagrams, and exhaustiveness.
//!
//! Elementarity is always depth-bounded: the unbounded quantification over
//! arbitrary formulas is unattainable by enumeration, so every verdict
//! carries its depth. Formulas are enumerated over a fixed two-variable
//! pool plus the structure's constants, and free variables are instantiated
//! by all tuples of domain elements.
//!
//! Subalgebra inclusion is checked in identity-inclusion form: the carrier
//! indices of the smaller chain embed as themselves. Because the bounds are
//! part of the algebra's signature, this makes the chains of a model chain
//! agree outright; general order-embeddings are out of scope.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::semantics::{eval_formula_env, Evaluation, Structure};
use crate::syntax::{
    enumerate_formulas, enumerate_quantifier_free, param_constant, Formula, Signature,
    DEFAULT_ENUM_CEILING,
};
use crate::util::TupleIter;

/// Variable pool used by depth-bounded formula enumerations.
pub fn enumeration_variables() -> Vec<String> {
    alloc::vec!["x".to_string(), "y".to_string()]
}

/// Depth of the quantifier-free agreement check run as part of
/// [`is_substructure`], on top of the atomic conditions.
const QF_CHECK_DEPTH: isize = 1;

fn same_signature(s1: &Structure, s2: &Structure) -> Result<Signature> {
    let sig1 = s1.signature();
    let sig2 = s2.signature();
    if sig1 != sig2 {
        return Err(Error::SignatureMismatch {
            reason: format!(
                "structures {} and {} interpret different signatures",
                s1.name(),
                s2.name()
            ),
        });
    }
    Ok(sig1)
}

/// Maps an element index of `from` to the index of the same-named element
/// in `to`.
fn map_index(from: &Structure, to: &Structure, idx: usize) -> Option<usize> {
    to.element_index(&from.domain()[idx])
}

/// Checks the four substructure conditions plus a quantifier-free
/// agreement check, returning the first violation as text.
pub fn substructure_violation(s1: &Structure, s2: &Structure) -> Result<Option<String>> {
    if let Some(v) = substructure_core_violation(s1, s2)? {
        return Ok(Some(v));
    }
    // Redundancy check: with conditions 1-3 and atomic agreement in place,
    // quantifier-free formulas must take equal values on s1-tuples.
    let sig = s1.signature();
    let consts: Vec<String> = sig.constants().map(|c| c.to_string()).collect();
    let formulas = enumerate_quantifier_free(
        &sig,
        QF_CHECK_DEPTH,
        &enumeration_variables(),
        &consts,
        DEFAULT_ENUM_CEILING,
    )?;
    if let Some(c) = first_value_disagreement(s1, s2, &formulas)? {
        return Ok(Some(format!(
            "quantifier-free formula {} disagrees at {:?}: {} vs {}",
            c.formula, c.assignment, c.value_sub, c.value_sup
        )));
    }
    Ok(None)
}

fn substructure_core_violation(s1: &Structure, s2: &Structure) -> Result<Option<String>> {
    let sig = same_signature(s1, s2)?;

    // 1. Domain inclusion, by element name.
    for e in s1.domain() {
        if s2.element_index(e).is_none() {
            return Ok(Some(format!("element {e} missing from the larger domain")));
        }
    }

    // 3. The chain embeds by identity indices, preserving the operation,
    // the constants and the bounds. Since `top` must map to `top`, this
    // holds exactly when the algebras agree.
    let c1 = s1.chain();
    let c2 = s2.chain();
    if c1.size() > c2.size() {
        return Ok(Some("chain carrier larger than the superstructure's".to_string()));
    }
    if c1.top() != c2.top() {
        return Ok(Some("top element not preserved by identity inclusion".to_string()));
    }
    if c1.one() != c2.one() || c1.zero() != c2.zero() {
        return Ok(Some("chain constants differ".to_string()));
    }
    for a in 0..c1.size() {
        for b in 0..c1.size() {
            if c1.conj(a, b) != c2.conj(a, b) {
                return Ok(Some(format!("monoid tables differ at ({a},{b})")));
            }
        }
    }

    let m1 = s1.domain().len();

    // 2. Function agreement on s1-tuples.
    for (fname, arity) in sig.functions() {
        for tuple in TupleIter::new(m1, arity) {
            let mapped: Vec<usize> = tuple
                .iter()
                .map(|&i| map_index(s1, s2, i).expect("domain inclusion checked"))
                .collect();
            let v1 = s1.func_value(fname, &tuple)?;
            let v2 = s2.func_value(fname, &mapped)?;
            if map_index(s1, s2, v1) != Some(v2) {
                return Ok(Some(format!(
                    "function {fname} disagrees on an s1-tuple: {} vs {}",
                    s1.domain()[v1],
                    s2.domain()[v2]
                )));
            }
        }
    }

    // 4. Atomic agreement on s1-tuples.
    for (pname, arity) in sig.predicates() {
        for tuple in TupleIter::new(m1, arity) {
            let mapped: Vec<usize> = tuple
                .iter()
                .map(|&i| map_index(s1, s2, i).expect("domain inclusion checked"))
                .collect();
            let v1 = s1.pred_value(pname, &tuple)?;
            let v2 = s2.pred_value(pname, &mapped)?;
            if v1 != v2 {
                return Ok(Some(format!(
                    "predicate {pname} disagrees on an s1-tuple: {v1} vs {v2}"
                )));
            }
        }
    }

    Ok(None)
}

/// Whether `s1` is a substructure of `s2` (identity-inclusion form).
pub fn is_substructure(s1: &Structure, s2: &Structure) -> Result<bool> {
    Ok(substructure_violation(s1, s2)?.is_none())
}

/// A formula with parameters taking different values in a substructure and
/// its superstructure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueDisagreement {
    pub formula: Formula,
    /// Free-variable assignment, as element names of the substructure.
    pub assignment: Vec<(String, String)>,
    pub value_sub: usize,
    pub value_sup: usize,
}

/// First enumerated formula (with an instantiation of its free variables
/// by `s1` elements) whose values differ in `s1` and `s2`.
fn first_value_disagreement(
    s1: &Structure,
    s2: &Structure,
    formulas: &[Formula],
) -> Result<Option<ValueDisagreement>> {
    let m1 = s1.domain().len();
    for f in formulas {
        let free: Vec<String> = f.free_variables().into_iter().collect();
        for tuple in TupleIter::new(m1, free.len()) {
            let mut env1: Vec<(String, usize)> =
                free.iter().cloned().zip(tuple.iter().copied()).collect();
            let mut env2: Vec<(String, usize)> = free
                .iter()
                .cloned()
                .zip(tuple.iter().map(|&i| {
                    map_index(s1, s2, i).expect("domain inclusion checked")
                }))
                .collect();
            let v1 = eval_formula_env(s1, &mut env1, f)?;
            let v2 = eval_formula_env(s2, &mut env2, f)?;
            if v1 != v2 {
                return Ok(Some(ValueDisagreement {
                    formula: f.clone(),
                    assignment: free
                        .iter()
                        .cloned()
                        .zip(tuple.iter().map(|&i| s1.domain()[i].clone()))
                        .collect(),
                    value_sub: v1,
                    value_sup: v2,
                }));
            }
        }
    }
    Ok(None)
}

/// First formula of depth at most `depth` witnessing non-elementarity, or
/// `None` when every enumerated formula with `s1`-parameters takes equal
/// values in both structures. Requires `s1` to be a substructure of `s2`.
pub fn elementary_counterexample(
    s1: &Structure,
    s2: &Structure,
    depth: isize,
) -> Result<Option<ValueDisagreement>> {
    if let Some(reason) = substructure_core_violation(s1, s2)? {
        return Err(Error::NotASubstructure { reason });
    }
    let sig = s1.signature();
    let consts: Vec<String> = sig.constants().map(|c| c.to_string()).collect();
    let formulas = enumerate_formulas(
        &sig,
        depth,
        &enumeration_variables(),
        &consts,
        DEFAULT_ENUM_CEILING,
    )?;
    first_value_disagreement(s1, s2, &formulas)
}

/// Depth-bounded elementary substructure test.
pub fn is_elementary_substructure(s1: &Structure, s2: &Structure, depth: isize) -> Result<bool> {
    Ok(elementary_counterexample(s1, s2, depth)?.is_none())
}

/// An ordered sequence of structures, each a substructure of the next.
#[derive(Debug, Clone)]
pub struct ModelChain {
    links: Vec<Structure>,
}

impl ModelChain {
    /// Validates the chain condition on every pair `i < j`.
    pub fn new(links: Vec<Structure>) -> Result<ModelChain> {
        if links.is_empty() {
            return Err(Error::NotAChain {
                reason: "a chain of models needs at least one link".to_string(),
            });
        }
        for i in 0..links.len() {
            for j in i + 1..links.len() {
                if let Some(v) = substructure_core_violation(&links[i], &links[j])? {
                    return Err(Error::NotAChain {
                        reason: format!("link {i} is not a substructure of link {j}: {v}"),
                    });
                }
            }
        }
        Ok(ModelChain { links })
    }

    pub fn links(&self) -> &[Structure] {
        &self.links
    }
}

/// The union of a chain of models: the united domain (which equals the last
/// link's), the last link's algebra, and tables assembled tuple-by-tuple
/// from the first link containing each tuple. The chain condition makes
/// the assembly well-defined; the result is checked against it.
pub fn union_of_chain(chain: &ModelChain) -> Result<Structure> {
    let links = chain.links();
    let last = links.last().expect("chains are non-empty");

    // United domain in first-appearance order.
    let mut domain: Vec<String> = Vec::new();
    for link in links {
        for e in link.domain() {
            if !domain.contains(e) {
                domain.push(e.clone());
            }
        }
    }

    let mut union = Structure::new("union", Arc::clone(last.chain()), domain.clone())?;
    let m = domain.len();
    let sig = last.signature();

    // The first link whose domain contains every element of the tuple.
    let locate = |tuple: &[usize]| -> (usize, Vec<usize>) {
        for (li, link) in links.iter().enumerate() {
            let mapped: Option<Vec<usize>> = tuple
                .iter()
                .map(|&i| link.element_index(&domain[i]))
                .collect();
            if let Some(mapped) = mapped {
                return (li, mapped);
            }
        }
        unreachable!("the last link contains every element");
    };

    for (pname, arity) in sig.predicates() {
        let mut values = Vec::with_capacity(m.pow(arity as u32));
        for tuple in TupleIter::new(m, arity) {
            let (li, mapped) = locate(&tuple);
            values.push(links[li].pred_value(pname, &mapped)?);
        }
        union.add_predicate_table(pname.to_string(), arity, values)?;
    }
    for (fname, arity) in sig.functions() {
        let mut values = Vec::with_capacity(m.pow(arity as u32));
        for tuple in TupleIter::new(m, arity) {
            let (li, mapped) = locate(&tuple);
            let v = links[li].func_value(fname, &mapped)?;
            let name = &links[li].domain()[v];
            let in_union = domain.iter().position(|e| e == name).expect("united domain");
            values.push(in_union);
        }
        union.add_function_table(fname.to_string(), arity, values)?;
    }
    Ok(union)
}

/// A violation of value preservation between a link and the union.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnionCounterexample {
    pub link: usize,
    pub formula: Formula,
    pub assignment: Vec<(String, String)>,
    pub value_link: usize,
    pub value_union: usize,
}

/// Outcome of [`check_union_preservation`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnionReport {
    /// Whether every adjacent pair verified as elementary at the depth.
    /// The preservation check runs either way.
    pub adjacent_elementary: bool,
    pub counterexample: Option<UnionCounterexample>,
    pub formulas_checked: usize,
}

impl UnionReport {
    pub fn preserved(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Verifies, for every link and every enumerated formula with parameters
/// from that link, that the value in the link equals the value in the
/// union. Reports the first counterexample in enumeration order.
pub fn check_union_preservation(chain: &ModelChain, depth: isize) -> Result<UnionReport> {
    let links = chain.links();
    let mut adjacent_elementary = true;
    for pair in links.windows(2) {
        if !is_elementary_substructure(&pair[0], &pair[1], depth)? {
            adjacent_elementary = false;
            break;
        }
    }

    let union = union_of_chain(chain)?;
    let sig = union.signature();
    let consts: Vec<String> = sig.constants().map(|c| c.to_string()).collect();
    let formulas = enumerate_formulas(
        &sig,
        depth,
        &enumeration_variables(),
        &consts,
        DEFAULT_ENUM_CEILING,
    )?;

    for (li, link) in links.iter().enumerate() {
        let m = link.domain().len();
        for f in &formulas {
            let free: Vec<String> = f.free_variables().into_iter().collect();
            for tuple in TupleIter::new(m, free.len()) {
                let mut env_link: Vec<(String, usize)> =
                    free.iter().cloned().zip(tuple.iter().copied()).collect();
                let mut env_union: Vec<(String, usize)> = free
                    .iter()
                    .cloned()
                    .zip(tuple.iter().map(|&i| {
                        map_index(link, &union, i).expect("union contains every link domain")
                    }))
                    .collect();
                let vl = eval_formula_env(link, &mut env_link, f)?;
                let vu = eval_formula_env(&union, &mut env_union, f)?;
                if vl != vu {
                    return Ok(UnionReport {
                        adjacent_elementary,
                        counterexample: Some(UnionCounterexample {
                            link: li,
                            formula: f.clone(),
                            assignment: free
                                .iter()
                                .cloned()
                                .zip(tuple.iter().map(|&i| link.domain()[i].clone()))
                                .collect(),
                            value_link: vl,
                            value_union: vu,
                        }),
                        formulas_checked: formulas.len(),
                    });
                }
            }
        }
    }
    Ok(UnionReport {
        adjacent_elementary,
        counterexample: None,
        formulas_checked: formulas.len(),
    })
}

/// The theory of `s` relative to `params` at bounded depth: enumerates all
/// sentences over the signature extended with one `@`-constant per
/// parameter element, and partitions them into the designated ones (`Th`)
/// and the rest (`coTh`).
pub fn theory_of(
    s: &Structure,
    params: &[String],
    depth: isize,
) -> Result<(Vec<Formula>, Vec<Formula>)> {
    let mut sig = s.signature();
    for p in params {
        if s.element_index(p).is_none() {
            return Err(Error::UnknownFunction {
                name: param_constant(p),
            });
        }
        sig.add_function(param_constant(p), 0)?;
    }
    let consts: Vec<String> = sig.constants().map(|c| c.to_string()).collect();
    let formulas = enumerate_formulas(
        &sig,
        depth,
        &enumeration_variables(),
        &consts,
        DEFAULT_ENUM_CEILING,
    )?;
    let mut th = Vec::new();
    let mut coth = Vec::new();
    for f in formulas {
        if !f.is_sentence() {
            continue;
        }
        let v = crate::semantics::sentence_value(s, &f)?;
        if s.chain().is_designated(v) {
            th.push(f);
        } else {
            coth.push(f);
        }
    }
    Ok((th, coth))
}

/// The elementary diagram: the relative theory over the whole domain.
pub fn eldiag(s: &Structure, depth: isize) -> Result<(Vec<Formula>, Vec<Formula>)> {
    let domain = s.domain().to_vec();
    theory_of(s, &domain, depth)
}

/// For each carrier index, the first enumerated formula and evaluation
/// attaining it, if any.
pub fn exhaustiveness(
    s: &Structure,
    depth: isize,
) -> Result<Vec<Option<(Formula, Evaluation)>>> {
    let sig = s.signature();
    let consts: Vec<String> = sig.constants().map(|c| c.to_string()).collect();
    let formulas = enumerate_formulas(
        &sig,
        depth,
        &enumeration_variables(),
        &consts,
        DEFAULT_ENUM_CEILING,
    )?;
    let mut attained: Vec<Option<(Formula, Evaluation)>> =
        alloc::vec![None; s.chain().size()];
    let mut remaining = s.chain().size();
    let m = s.domain().len();
    'outer: for f in &formulas {
        let free: Vec<String> = f.free_variables().into_iter().collect();
        for tuple in TupleIter::new(m, free.len()) {
            let mut env: Vec<(String, usize)> =
                free.iter().cloned().zip(tuple.iter().copied()).collect();
            let v = eval_formula_env(s, &mut env, f)?;
            if attained[v].is_none() {
                let mut ev = Evaluation::new();
                for (var, &e) in free.iter().zip(tuple.iter()) {
                    ev.set(var.clone(), e);
                }
                attained[v] = Some((f.clone(), ev));
                remaining -= 1;
                if remaining == 0 {
                    break 'outer;
                }
            }
        }
    }
    Ok(attained)
}

/// Whether every carrier element is the value of some enumerated formula
/// at some tuple of domain elements.
pub fn is_exhaustive(s: &Structure, depth: isize) -> Result<bool> {
    Ok(exhaustiveness(s, depth)?.iter().all(|w| w.is_some()))
}
