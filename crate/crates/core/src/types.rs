//! Types of tableaux and of models, realization, saturation checking, and
//! the single saturation-extension step.
//!
//! A type is a pair of formula sets in one free variable: what an element
//! is expected to satisfy and what it is expected to falsify. A pair is a
//! type of a tableau when adjoining it keeps the tableau satisfiable in
//! the space; a type of a model is a type of the model's relative
//! theory/co-theory pair.
//!
//! Saturation and extension are designation-level: diagram sentences keep
//! their filter membership in the extension, which is the computable
//! analogue of elementarity at bounded depth. Value-level elementarity of
//! an extension can be measured separately with
//! [`crate::modeltheory::is_elementary_substructure`]; it is reported, not
//! required.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::modeltheory::{eldiag, theory_of};
use crate::semantics::{
    eval_formula, sentence_value, Evaluation, SearchSpace, Structure,
};
use crate::syntax::{
    enumerate_formulas, param_constant, Formula, DEFAULT_ENUM_CEILING,
};
use crate::tableaux::{find_satisfying_model, Tableau};
use crate::util::{CombinationIter, TupleIter};

/// A pair of formula sets in one free variable with parameters from a
/// reference domain: what a realizing element must satisfy and what it
/// must falsify.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypePair {
    satisfy: Vec<Formula>,
    falsify: Vec<Formula>,
    var: String,
    params: Vec<String>,
}

impl TypePair {
    /// Builds a pair, checking that every formula's free variables are
    /// within the single type variable.
    pub fn new(
        var: impl Into<String>,
        satisfy: Vec<Formula>,
        falsify: Vec<Formula>,
        params: Vec<String>,
    ) -> Result<TypePair> {
        let var = var.into();
        for f in satisfy.iter().chain(falsify.iter()) {
            for v in f.free_variables() {
                if v != var {
                    return Err(Error::SignatureMismatch {
                        reason: format!("type formula {f} has stray free variable {v}"),
                    });
                }
            }
        }
        let mut t = TypePair {
            satisfy: Vec::new(),
            falsify: Vec::new(),
            var,
            params,
        };
        for f in satisfy {
            if !t.satisfy.contains(&f) {
                t.satisfy.push(f);
            }
        }
        for f in falsify {
            if !t.falsify.contains(&f) {
                t.falsify.push(f);
            }
        }
        Ok(t)
    }

    /// Formulas a realizing element must designate.
    pub fn satisfy(&self) -> &[Formula] {
        &self.satisfy
    }

    /// Formulas a realizing element must keep non-designated.
    pub fn falsify(&self) -> &[Formula] {
        &self.falsify
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn is_empty(&self) -> bool {
        self.satisfy.is_empty() && self.falsify.is_empty()
    }
}

/// Whether adjoining the pair to the tableau keeps it satisfiable in the
/// space, with the type variable bound by the witnessing evaluation.
pub fn is_type_of_tableau(space: &SearchSpace, tableau: &Tableau, t: &TypePair) -> Result<bool> {
    let extended = tableau.extended(t.satisfy(), t.falsify());
    Ok(find_satisfying_model(space, &extended)?.is_some())
}

/// The type realized by element `element` over parameters `params`: all
/// enumerated formulas of bounded depth in the type variable, partitioned
/// by their value at that element.
pub fn realized_type(
    s: &Structure,
    params: &[String],
    element: &str,
    depth: isize,
) -> Result<TypePair> {
    let idx = s.element_index(element).ok_or_else(|| Error::UnknownFunction {
        name: param_constant(element),
    })?;
    let formulas = type_formula_pool(s, params, depth)?;
    let mut satisfy = Vec::new();
    let mut falsify = Vec::new();
    let v = Evaluation::new().bind("x", idx);
    for f in formulas {
        let value = eval_formula(s, &v, &f)?;
        if s.chain().is_designated(value) {
            satisfy.push(f);
        } else {
            falsify.push(f);
        }
    }
    TypePair::new("x", satisfy, falsify, params.to_vec())
}

/// The depth-bounded formula pool in the single type variable `x` with
/// `@`-parameters for `params`.
fn type_formula_pool(s: &Structure, params: &[String], depth: isize) -> Result<Vec<Formula>> {
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
    enumerate_formulas(&sig, depth, &["x".to_string()], &consts, DEFAULT_ENUM_CEILING)
}

/// The first element (domain order) designating every `satisfy` formula
/// and no `falsify` formula at the type variable.
pub fn find_realizer(s: &Structure, t: &TypePair) -> Result<Option<String>> {
    'element: for idx in 0..s.domain().len() {
        let v = Evaluation::new().bind(t.var().to_string(), idx);
        for f in t.satisfy() {
            if !s.chain().is_designated(eval_formula(s, &v, f)?) {
                continue 'element;
            }
        }
        for f in t.falsify() {
            if s.chain().is_designated(eval_formula(s, &v, f)?) {
                continue 'element;
            }
        }
        return Ok(Some(s.domain()[idx].clone()));
    }
    Ok(None)
}

/// An unrealized type found by [`is_saturated`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturationWitness {
    /// The parameter set the type lives over.
    pub params: Vec<String>,
    pub pair: TypePair,
}

/// Outcome of [`is_saturated`]. The verdict is relative to the reported
/// depth, size cap and search space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturationReport {
    pub saturated: bool,
    pub witness: Option<SaturationWitness>,
    pub parameter_sets: usize,
    pub candidates_checked: u128,
    pub types_found: u128,
    pub depth: isize,
    pub size_cap: usize,
}

/// Checks depth-bounded saturation: for every parameter set `D` with
/// `|D| < kappa` and every candidate pair over the bounded formula pool
/// (sizes capped by the space's type-size cap), a pair that is a type of
/// the relative theory tableau must be realized by some element.
///
/// Candidates are enumerated by total size, then lexicographically; the
/// first unrealized type is the report's witness. The space's candidate
/// ceiling also bounds how many pairs are examined.
pub fn is_saturated(
    s: &Structure,
    kappa: usize,
    depth: isize,
    space: &SearchSpace,
) -> Result<SaturationReport> {
    if kappa < 1 {
        return Err(Error::InvalidSize { size: kappa });
    }
    let size_cap = space.type_size_cap();
    let mut parameter_sets = 0;
    let mut candidates_checked: u128 = 0;
    let mut types_found: u128 = 0;

    let max_d = (kappa - 1).min(s.domain().len());
    for d_size in 0..=max_d {
        for combo in CombinationIter::new(s.domain().len(), d_size) {
            parameter_sets += 1;
            let params: Vec<String> = combo.iter().map(|&i| s.domain()[i].clone()).collect();
            let (th, coth) = theory_of(s, &params, depth)?;
            let reference = Tableau::from_parts(th, coth);
            let pool = type_formula_pool(s, &params, depth)?;

            for k in 0..=size_cap.min(pool.len()) {
                for subset in CombinationIter::new(pool.len(), k) {
                    for mask in 0..(1u64 << k) {
                        candidates_checked += 1;
                        if candidates_checked > space.max_candidates() {
                            return Err(Error::EnumerationTooLarge {
                                count: candidates_checked,
                                ceiling: space.max_candidates(),
                            });
                        }
                        let mut satisfy = Vec::new();
                        let mut falsify = Vec::new();
                        for (bit, &fi) in subset.iter().enumerate() {
                            if mask >> bit & 1 == 0 {
                                satisfy.push(pool[fi].clone());
                            } else {
                                falsify.push(pool[fi].clone());
                            }
                        }
                        let pair = TypePair::new("x", satisfy, falsify, params.clone())?;
                        if !is_type_of_tableau(space, &reference, &pair)? {
                            continue;
                        }
                        types_found += 1;
                        if find_realizer(s, &pair)?.is_none() {
                            return Ok(SaturationReport {
                                saturated: false,
                                witness: Some(SaturationWitness { params, pair }),
                                parameter_sets,
                                candidates_checked,
                                types_found,
                                depth,
                                size_cap,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(SaturationReport {
        saturated: true,
        witness: None,
        parameter_sets,
        candidates_checked,
        types_found,
        depth,
        size_cap,
    })
}

/// Realizes a type of the model's full diagram tableau: returns `s` itself
/// when some element already realizes the pair, otherwise the first
/// extension of `s` within the space that keeps every diagram sentence's
/// designation and realizes the pair.
///
/// Errors distinguish a pair that is not a type ([`Error::NotAType`]) from
/// a type whose realizing extensions all lie outside the space
/// ([`Error::BoundsExhausted`]).
pub fn saturate_step(
    s: &Structure,
    t: &TypePair,
    space: &SearchSpace,
    depth: isize,
) -> Result<Structure> {
    for p in t.params() {
        if s.element_index(p).is_none() {
            return Err(Error::UnknownFunction {
                name: param_constant(p),
            });
        }
    }
    let (th, coth) = eldiag(s, depth)?;
    let diagram = Tableau::from_parts(th.clone(), coth.clone());
    if !is_type_of_tableau(space, &diagram, t)? {
        return Err(Error::NotAType);
    }
    if find_realizer(s, t)?.is_some() {
        return Ok(s.clone());
    }

    // Identity-inclusion extensions live over the same algebra, so the
    // space must contain it for any candidate to exist.
    if !space.chains().iter().any(|c| c.same_algebra(s.chain())) {
        return Err(Error::BoundsExhausted);
    }

    let old_m = s.domain().len();
    let sig = s.signature();
    let chain_size = s.chain().size();

    // Candidate count across all target sizes, against the space ceiling.
    let mut count: u128 = 0;
    for new_m in (old_m + 1)..=space.max_domain() {
        let mut per: u128 = 1;
        for (_, arity) in sig.predicates() {
            let free = (new_m as u128).pow(arity as u32) - (old_m as u128).pow(arity as u32);
            for _ in 0..free {
                per = per.saturating_mul(chain_size as u128);
            }
        }
        for (_, arity) in sig.functions() {
            let free = (new_m as u128).pow(arity as u32) - (old_m as u128).pow(arity as u32);
            for _ in 0..free {
                per = per.saturating_mul(new_m as u128);
            }
        }
        count = count.saturating_add(per);
    }
    if count > space.max_candidates() {
        return Err(Error::SearchSpaceTooLarge {
            count,
            ceiling: space.max_candidates(),
        });
    }

    for new_m in (old_m + 1)..=space.max_domain() {
        for candidate in ExtensionIter::new(s, new_m) {
            let n = candidate?;
            if !designation_preserved(&n, &th, &coth)? {
                continue;
            }
            if find_realizer(&n, t)?.is_some() {
                return Ok(n);
            }
        }
    }
    Err(Error::BoundsExhausted)
}

/// Whether `n` designates every sentence of `th` and none of `coth`.
fn designation_preserved(n: &Structure, th: &[Formula], coth: &[Formula]) -> Result<bool> {
    for f in th {
        if !n.chain().is_designated(sentence_value(n, f)?) {
            return Ok(false);
        }
    }
    for f in coth {
        if n.chain().is_designated(sentence_value(n, f)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Enumerates the extensions of a structure to a fixed larger domain:
/// old tuples keep their values, new cells run through all assignments in
/// lexicographic order.
struct ExtensionIter {
    base: Structure,
    domain: Vec<String>,
    /// (is_pred, name, arity, cell tuples) for the free cells, in order.
    free_cells: Vec<(bool, String, usize, Vec<usize>)>,
    digits: Vec<usize>,
    bases: Vec<usize>,
    done: bool,
}

impl ExtensionIter {
    fn new(s: &Structure, new_m: usize) -> ExtensionIter {
        let old_m = s.domain().len();
        let mut domain = s.domain().to_vec();
        let mut next = 0;
        while domain.len() < new_m {
            let name = format!("n{next}");
            next += 1;
            if !domain.contains(&name) {
                domain.push(name);
            }
        }
        let sig = s.signature();
        let mut free_cells = Vec::new();
        let mut bases = Vec::new();
        for (name, arity) in sig.predicates() {
            for tuple in TupleIter::new(new_m, arity) {
                if tuple.iter().any(|&i| i >= old_m) {
                    free_cells.push((true, name.to_string(), arity, tuple));
                    bases.push(s.chain().size());
                }
            }
        }
        for (name, arity) in sig.functions() {
            for tuple in TupleIter::new(new_m, arity) {
                if tuple.iter().any(|&i| i >= old_m) {
                    free_cells.push((false, name.to_string(), arity, tuple));
                    bases.push(new_m);
                }
            }
        }
        let digits = alloc::vec![0; free_cells.len()];
        ExtensionIter {
            base: s.clone(),
            domain,
            free_cells,
            digits,
            bases,
            done: false,
        }
    }

    fn build(&self) -> Result<Structure> {
        let new_m = self.domain.len();
        let old_m = self.base.domain().len();
        let mut out = Structure::new(
            format!("{}+", self.base.name()),
            Arc::clone(self.base.chain()),
            self.domain.clone(),
        )?;
        let sig = self.base.signature();
        for (name, arity) in sig.predicates() {
            let mut values = Vec::with_capacity(new_m.pow(arity as u32));
            for tuple in TupleIter::new(new_m, arity) {
                if tuple.iter().all(|&i| i < old_m) {
                    values.push(self.base.pred_value(name, &tuple)?);
                } else {
                    let pos = self
                        .free_cells
                        .iter()
                        .position(|(is_pred, n, _, t)| *is_pred && n == name && *t == tuple)
                        .expect("free cell registered");
                    values.push(self.digits[pos]);
                }
            }
            out.add_predicate_table(name.to_string(), arity, values)?;
        }
        for (name, arity) in sig.functions() {
            let mut values = Vec::with_capacity(new_m.pow(arity as u32));
            for tuple in TupleIter::new(new_m, arity) {
                if tuple.iter().all(|&i| i < old_m) {
                    values.push(self.base.func_value(name, &tuple)?);
                } else {
                    let pos = self
                        .free_cells
                        .iter()
                        .position(|(is_pred, n, _, t)| !*is_pred && n == name && *t == tuple)
                        .expect("free cell registered");
                    values.push(self.digits[pos]);
                }
            }
            out.add_function_table(name.to_string(), arity, values)?;
        }
        Ok(out)
    }
}

impl Iterator for ExtensionIter {
    type Item = Result<Structure>;

    fn next(&mut self) -> Option<Result<Structure>> {
        if self.done {
            return None;
        }
        let out = self.build();
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.bases[i] {
                break;
            }
            self.digits[i] = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_godel_chain;
    use crate::syntax::{parse_formula, Signature};
    use alloc::vec;

    fn g3() -> Arc<crate::algebra::UlChain> {
        Arc::new(make_godel_chain(3).unwrap())
    }

    fn g3_space(max_domain: usize) -> SearchSpace {
        SearchSpace::new(vec![g3()], max_domain, 1_000_000).unwrap()
    }

    fn sig_pq() -> Signature {
        let mut sig = Signature::new();
        sig.add_predicate("P", 1).unwrap();
        sig.add_predicate("Q", 1).unwrap();
        sig
    }

    fn pair(sig: &Signature, satisfy: &[&str], falsify: &[&str]) -> TypePair {
        TypePair::new(
            "x",
            satisfy.iter().map(|s| parse_formula(s, sig).unwrap()).collect(),
            falsify.iter().map(|s| parse_formula(s, sig).unwrap()).collect(),
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn type_of_empty_tableau() {
        let sig = sig_pq();
        let space = g3_space(1);
        let empty = Tableau::new();
        assert!(is_type_of_tableau(&space, &empty, &pair(&sig, &["P(x)"], &[])).unwrap());
        assert!(!is_type_of_tableau(&space, &empty, &pair(&sig, &["P(x)"], &["P(x)"])).unwrap());
    }

    #[test]
    fn universal_fact_blocks_negative_type() {
        let sig = sig_pq();
        let space = g3_space(2);
        let t = Tableau::from_parts(
            vec![parse_formula("forall x. P(x)", &sig).unwrap()],
            vec![],
        );
        // A designated universal forces every element's P into the filter.
        assert!(!is_type_of_tableau(&space, &t, &pair(&sig, &[], &["P(x)"])).unwrap());
    }

    #[test]
    fn realized_type_partitions_the_pool() {
        let mut s = Structure::new("m", g3(), vec!["a".to_string()]).unwrap();
        s.add_predicate_table("P", 1, vec![2]).unwrap();
        let t = realized_type(&s, &[], "a", 0).unwrap();
        let sig = s.signature();
        assert!(t.satisfy().contains(&parse_formula("P(x)", &sig).unwrap()));
        assert!(t.satisfy().contains(&parse_formula("1", &sig).unwrap()));
        assert!(t.satisfy().contains(&parse_formula("top", &sig).unwrap()));
        assert!(t.falsify().contains(&parse_formula("0", &sig).unwrap()));
        assert!(t.falsify().contains(&parse_formula("bot", &sig).unwrap()));

        // Feeding the realized type back: it is a type of the relative
        // theory tableau, witnessed by s itself.
        let (th, coth) = theory_of(&s, &[], 0).unwrap();
        let reference = Tableau::from_parts(th, coth);
        let space = g3_space(1);
        assert!(is_type_of_tableau(&space, &reference, &t).unwrap());
    }

    #[test]
    fn identical_rows_realize_identical_types() {
        let mut s = Structure::new("m", g3(), vec!["a".to_string(), "b".to_string()]).unwrap();
        s.add_predicate_table("P", 1, vec![1, 1]).unwrap();
        let ta = realized_type(&s, &[], "a", 1).unwrap();
        let tb = realized_type(&s, &[], "b", 1).unwrap();
        assert_eq!(ta.satisfy(), tb.satisfy());
        assert_eq!(ta.falsify(), tb.falsify());
    }

    #[test]
    fn find_realizer_examples() {
        let mut s = Structure::new("m", g3(), vec!["a".to_string(), "b".to_string()]).unwrap();
        s.add_predicate_table("P", 1, vec![2, 2]).unwrap();
        s.add_predicate_table("Q", 1, vec![2, 0]).unwrap();
        let sig = s.signature();

        assert_eq!(
            find_realizer(&s, &pair(&sig, &["P(x)"], &["Q(x)"])).unwrap(),
            Some("b".to_string())
        );
        assert_eq!(
            find_realizer(&s, &pair(&sig, &[], &[])).unwrap(),
            Some("a".to_string())
        );
        assert_eq!(find_realizer(&s, &pair(&sig, &["bot"], &[])).unwrap(), None);
    }

    #[test]
    fn saturation_witness_found() {
        // P identically 0 on a single element: the element cannot falsify
        // P(x) -> 0, but a two-element model with P values {0, 1} can.
        let mut s = Structure::new("m", g3(), vec!["a".to_string()]).unwrap();
        s.add_predicate_table("P", 1, vec![0]).unwrap();
        let space = g3_space(2);
        let report = is_saturated(&s, 1, 1, &space).unwrap();
        assert!(!report.saturated);
        let witness = report.witness.expect("unsaturated");
        assert!(witness.params.is_empty());
        let sig = s.signature();
        assert!(witness.pair.satisfy().is_empty());
        assert_eq!(
            witness.pair.falsify(),
            &[parse_formula("P(x) -> 0", &sig).unwrap()]
        );
    }

    #[test]
    fn depth_zero_theory_cannot_pin_universal_facts() {
        // At depth 0 the relative theory has no quantified sentences, so
        // "falsify P(x)" stays a type even though every element satisfies
        // P; the exhaustion finds it as an unrealized witness.
        let mut s = Structure::new("m", g3(), vec!["a".to_string()]).unwrap();
        s.add_predicate_table("P", 1, vec![2]).unwrap();
        let space = g3_space(1);
        let report = is_saturated(&s, 1, 0, &space).unwrap();
        assert!(!report.saturated);
        let sig = s.signature();
        let witness = report.witness.unwrap();
        assert_eq!(
            witness.pair.falsify(),
            &[parse_formula("P(x)", &sig).unwrap()]
        );
    }

    #[test]
    fn saturated_at_depth_one() {
        // At depth 1 the theory contains the universal fact, which blocks
        // every P-falsifying candidate from being a type; all remaining
        // types are realized at the single element.
        let mut s = Structure::new("m", g3(), vec!["a".to_string()]).unwrap();
        s.add_predicate_table("P", 1, vec![2]).unwrap();
        let space = g3_space(2).with_type_size_cap(1);
        let report = is_saturated(&s, 2, 1, &space).unwrap();
        assert!(report.saturated, "witness: {:?}", report.witness);
        assert!(report.types_found > 0);
        assert_eq!(report.parameter_sets, 2);
    }

    #[test]
    fn saturate_step_realizes_in_place() {
        let mut s = Structure::new("m", g3(), vec!["a".to_string()]).unwrap();
        s.add_predicate_table("P", 1, vec![2]).unwrap();
        let sig = s.signature();
        let space = g3_space(2);
        let t = pair(&sig, &["P(x)"], &[]);
        let out = saturate_step(&s, &t, &space, 1).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn saturate_step_extends_with_fresh_element() {
        let mut s = Structure::new("m", g3(), vec!["a".to_string()]).unwrap();
        s.add_predicate_table("P", 1, vec![0]).unwrap();
        let sig = s.signature();
        let space = g3_space(2);
        let t = pair(&sig, &[], &["P(x) -> 0"]);
        let out = saturate_step(&s, &t, &space, 1).unwrap();
        assert_eq!(out.domain().len(), 2);
        assert_eq!(out.domain()[0], "a");
        assert_eq!(out.pred_value("P", &[0]).unwrap(), 0);
        assert_eq!(out.pred_value("P", &[1]).unwrap(), 1);
        // The extension realizes the pair and is a substructure extension.
        assert!(find_realizer(&out, &t).unwrap().is_some());
        assert!(crate::modeltheory::is_substructure(&s, &out).unwrap());
    }

    #[test]
    fn saturate_step_distinguishes_not_a_type_from_bounds() {
        // Two elements with P identically 0; realizing the pair needs a
        // third element, which the space does not allow.
        let mut s = Structure::new("m", g3(), vec!["a".to_string(), "b".to_string()]).unwrap();
        s.add_predicate_table("P", 1, vec![0, 0]).unwrap();
        let sig = s.signature();
        let space = g3_space(2);
        let t = pair(&sig, &[], &["P(x) -> 0"]);
        assert_eq!(saturate_step(&s, &t, &space, 1), Err(Error::BoundsExhausted));

        // Positive new facts are denied by the co-theory: not a type.
        let t = pair(&sig, &["P(x)"], &[]);
        assert_eq!(saturate_step(&s, &t, &space, 1), Err(Error::NotAType));
    }
}
