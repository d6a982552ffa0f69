//! Structures, evaluation, models of theories, and semantic consequence
//! relativized to a finite search space.
//!
//! A [`Structure`] pairs a [`UlChain`] with a finite first-order
//! interpretation. Quantifiers are min/max over the finite domain, so every
//! structure here is safe: all infima and suprema exist.
//!
//! Consequence is always relative to an explicit [`SearchSpace`] (a finite
//! set of chains, a domain-size bound and a candidate ceiling). The
//! unrestricted relation over all UL-chains is undecidable and out of
//! scope; every verdict in this crate is exact over its declared space.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use alloc::collections::BTreeMap;

use crate::algebra::{verify_ul_axioms, UlChain};
use crate::error::{Error, Result};
use crate::syntax::{infer_signature, Connective, Formula, Quantifier, Signature, Term, TruthConst};
use crate::util::TupleIter;

/// A finite interpretation table, row-major over domain indices.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Table {
    arity: usize,
    values: Vec<usize>,
}

impl Table {
    fn index(&self, domain_size: usize, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.arity);
        let mut idx = 0;
        for &a in args {
            idx = idx * domain_size + a;
        }
        idx
    }
}

/// A structure `(A, M)`: a UL-chain plus a finite first-order
/// interpretation. Domains are ordered lists of element names; all values
/// are carrier or domain indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    name: String,
    chain: Arc<UlChain>,
    domain: Vec<String>,
    preds: BTreeMap<String, Table>,
    funcs: BTreeMap<String, Table>,
}

impl Structure {
    /// Creates a structure with no interpreted symbols yet. The domain must
    /// be non-empty with unique, identifier-like names (`@` is reserved for
    /// parameter constants).
    pub fn new(
        name: impl Into<String>,
        chain: Arc<UlChain>,
        domain: Vec<String>,
    ) -> Result<Structure> {
        if domain.is_empty() {
            return Err(Error::MalformedChain {
                reason: "structure domain must be non-empty".to_string(),
            });
        }
        for e in &domain {
            if e.starts_with('@') || !crate::syntax::is_valid_plain_name(e) {
                return Err(Error::ReservedName { name: e.clone() });
            }
        }
        for (i, e) in domain.iter().enumerate() {
            if domain[..i].contains(e) {
                return Err(Error::MalformedChain {
                    reason: format!("duplicate domain element {e}"),
                });
            }
        }
        Ok(Structure {
            name: name.into(),
            chain,
            domain,
            preds: BTreeMap::new(),
            funcs: BTreeMap::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn chain(&self) -> &Arc<UlChain> {
        &self.chain
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn element_index(&self, name: &str) -> Option<usize> {
        self.domain.iter().position(|e| e == name)
    }

    /// Interprets `name` as an `arity`-ary predicate with the given total
    /// table (row-major over domain indices, values are carrier indices).
    pub fn add_predicate_table(
        &mut self,
        name: impl Into<String>,
        arity: usize,
        values: Vec<usize>,
    ) -> Result<()> {
        let name = name.into();
        let expected = self.domain.len().pow(arity as u32);
        if values.len() != expected {
            return Err(Error::SignatureMismatch {
                reason: format!(
                    "predicate {name}/{arity} needs {expected} values, got {}",
                    values.len()
                ),
            });
        }
        for &v in &values {
            self.chain.check_element(v)?;
        }
        self.preds.insert(name, Table { arity, values });
        Ok(())
    }

    /// Interprets `name` as an `arity`-ary function with the given total
    /// table (values are domain indices).
    pub fn add_function_table(
        &mut self,
        name: impl Into<String>,
        arity: usize,
        values: Vec<usize>,
    ) -> Result<()> {
        let name = name.into();
        let expected = self.domain.len().pow(arity as u32);
        if values.len() != expected {
            return Err(Error::SignatureMismatch {
                reason: format!(
                    "function {name}/{arity} needs {expected} values, got {}",
                    values.len()
                ),
            });
        }
        for &v in &values {
            if v >= self.domain.len() {
                return Err(Error::InvalidElement {
                    index: v,
                    size: self.domain.len(),
                });
            }
        }
        self.funcs.insert(name, Table { arity, values });
        Ok(())
    }

    /// The signature this structure interprets.
    pub fn signature(&self) -> Signature {
        let mut sig = Signature::new();
        for (n, t) in &self.preds {
            // Names were validated on insertion.
            let _ = sig.add_predicate(n.clone(), t.arity);
        }
        for (n, t) in &self.funcs {
            let _ = sig.add_function(n.clone(), t.arity);
        }
        sig
    }

    pub fn pred_arity(&self, name: &str) -> Option<usize> {
        self.preds.get(name).map(|t| t.arity)
    }

    pub fn func_arity(&self, name: &str) -> Option<usize> {
        self.funcs.get(name).map(|t| t.arity)
    }

    /// Value of a predicate at a tuple of domain indices.
    pub fn pred_value(&self, name: &str, args: &[usize]) -> Result<usize> {
        let t = self.preds.get(name).ok_or_else(|| Error::UnknownPredicate {
            name: name.to_string(),
        })?;
        if t.arity != args.len() {
            return Err(Error::ArityMismatch {
                name: name.to_string(),
                expected: t.arity,
                found: args.len(),
            });
        }
        Ok(t.values[t.index(self.domain.len(), args)])
    }

    /// Value of a function at a tuple of domain indices.
    pub fn func_value(&self, name: &str, args: &[usize]) -> Result<usize> {
        let t = self.funcs.get(name).ok_or_else(|| Error::UnknownFunction {
            name: name.to_string(),
        })?;
        if t.arity != args.len() {
            return Err(Error::ArityMismatch {
                name: name.to_string(),
                expected: t.arity,
                found: args.len(),
            });
        }
        Ok(t.values[t.index(self.domain.len(), args)])
    }

    /// The restriction of this structure to a subset of its domain, in the
    /// given order. Fails if a function value escapes the subset.
    pub fn restriction(&self, elements: &[String]) -> Result<Structure> {
        let mut index_map = Vec::with_capacity(elements.len());
        for e in elements {
            let idx = self.element_index(e).ok_or_else(|| Error::NotASubstructure {
                reason: format!("element {e} not in domain"),
            })?;
            index_map.push(idx);
        }
        let mut out = Structure::new(
            format!("{}|{}", self.name, elements.len()),
            Arc::clone(&self.chain),
            elements.to_vec(),
        )?;
        let m = elements.len();
        for (pname, t) in &self.preds {
            let mut values = Vec::with_capacity(m.pow(t.arity as u32));
            for tuple in TupleIter::new(m, t.arity) {
                let orig: Vec<usize> = tuple.iter().map(|&i| index_map[i]).collect();
                values.push(self.pred_value(pname, &orig)?);
            }
            out.add_predicate_table(pname.clone(), t.arity, values)?;
        }
        for (fname, t) in &self.funcs {
            let mut values = Vec::with_capacity(m.pow(t.arity as u32));
            for tuple in TupleIter::new(m, t.arity) {
                let orig: Vec<usize> = tuple.iter().map(|&i| index_map[i]).collect();
                let v = self.func_value(fname, &orig)?;
                let local = index_map.iter().position(|&i| i == v).ok_or_else(|| {
                    Error::NotASubstructure {
                        reason: format!(
                            "function {fname} maps inside the subset to element {}",
                            self.domain[v]
                        ),
                    }
                })?;
                values.push(local);
            }
            out.add_function_table(fname.clone(), t.arity, values)?;
        }
        Ok(out)
    }
}

/// A finite assignment of domain indices to object variables. Later
/// bindings shadow earlier ones.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Evaluation {
    bindings: Vec<(String, usize)>,
}

impl Evaluation {
    pub fn new() -> Evaluation {
        Evaluation::default()
    }

    pub fn bind(mut self, var: impl Into<String>, element: usize) -> Evaluation {
        self.set(var, element);
        self
    }

    pub fn set(&mut self, var: impl Into<String>, element: usize) {
        self.bindings.push((var.into(), element));
    }

    pub fn get(&self, var: &str) -> Option<usize> {
        self.bindings
            .iter()
            .rev()
            .find(|(v, _)| v == var)
            .map(|&(_, e)| e)
    }

    /// Visible bindings, innermost shadowing applied.
    pub fn bindings(&self) -> BTreeMap<&str, usize> {
        self.bindings.iter().map(|(v, e)| (v.as_str(), *e)).collect()
    }
}

fn eval_term_env(s: &Structure, env: &[(String, usize)], term: &Term) -> Result<usize> {
    match term {
        Term::Var(v) => env
            .iter()
            .rev()
            .find(|(name, _)| name == v)
            .map(|&(_, e)| e)
            .ok_or_else(|| Error::UnboundVariable { name: v.clone() }),
        Term::App(f, args) => {
            if s.funcs.contains_key(f) {
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(eval_term_env(s, env, a)?);
                }
                s.func_value(f, &vals)
            } else if let Some(elem) = f.strip_prefix('@') {
                // Parameter constants denote their element by name when the
                // structure does not interpret them explicitly.
                if !args.is_empty() {
                    return Err(Error::ArityMismatch {
                        name: f.clone(),
                        expected: 0,
                        found: args.len(),
                    });
                }
                s.element_index(elem).ok_or_else(|| Error::UnknownFunction {
                    name: f.clone(),
                })
            } else {
                Err(Error::UnknownFunction { name: f.clone() })
            }
        }
    }
}

pub(crate) fn eval_formula_env(
    s: &Structure,
    env: &mut Vec<(String, usize)>,
    formula: &Formula,
) -> Result<usize> {
    let chain = s.chain.as_ref();
    match formula {
        Formula::Const(c) => Ok(match c {
            TruthConst::Zero => chain.zero(),
            TruthConst::One => chain.one(),
            TruthConst::Bot => chain.bot(),
            TruthConst::Top => chain.top(),
        }),
        Formula::Atom(p, args) => {
            let mut vals = Vec::with_capacity(args.len());
            for a in args {
                vals.push(eval_term_env(s, env, a)?);
            }
            s.pred_value(p, &vals)
        }
        Formula::Binary(c, l, r) => {
            let lv = eval_formula_env(s, env, l)?;
            let rv = eval_formula_env(s, env, r)?;
            Ok(match c {
                Connective::And => chain.meet(lv, rv),
                Connective::Or => chain.join(lv, rv),
                Connective::Fusion => chain.conj(lv, rv),
                Connective::Implies => chain.residuum(lv, rv),
            })
        }
        Formula::Quant(q, var, body) => {
            let mut acc: Option<usize> = None;
            for m in 0..s.domain.len() {
                env.push((var.clone(), m));
                let v = eval_formula_env(s, env, body);
                env.pop();
                let v = v?;
                acc = Some(match (acc, q) {
                    (None, _) => v,
                    (Some(a), Quantifier::Forall) => chain.meet(a, v),
                    (Some(a), Quantifier::Exists) => chain.join(a, v),
                });
            }
            // The domain is non-empty, so the fold always produced a value.
            Ok(acc.expect("non-empty domain"))
        }
    }
}

/// Value of a term under an evaluation.
pub fn eval_term(s: &Structure, v: &Evaluation, term: &Term) -> Result<usize> {
    eval_term_env(s, &v.bindings, term)
}

/// Truth value of a formula under an evaluation: `/\`,`\/` are min/max,
/// `&` is the monoid table, `->` the residuum, and the quantifiers are
/// min/max over the domain.
pub fn eval_formula(s: &Structure, v: &Evaluation, formula: &Formula) -> Result<usize> {
    let mut env = v.bindings.clone();
    eval_formula_env(s, &mut env, formula)
}

/// Value of a sentence (evaluation-independent).
pub fn sentence_value(s: &Structure, formula: &Formula) -> Result<usize> {
    if !formula.is_sentence() {
        return Err(Error::NotASentence {
            formula: formula.to_string(),
        });
    }
    eval_formula(s, &Evaluation::new(), formula)
}

/// Whether `s` designates every sentence of `theory`.
pub fn is_model_of<'a>(
    s: &Structure,
    theory: impl IntoIterator<Item = &'a Formula>,
) -> Result<bool> {
    for f in theory {
        let v = sentence_value(s, f)?;
        if !s.chain.is_designated(v) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The finite relativization over which consequence and satisfiability are
/// decided: a set of verified chains, a domain-size bound, and a ceiling on
/// the number of candidate structures.
#[derive(Debug, Clone)]
pub struct SearchSpace {
    chains: Vec<Arc<UlChain>>,
    max_domain: usize,
    max_candidates: u128,
    subset_cap: usize,
    type_size_cap: usize,
}

/// Default cap on the size of formula sets searched subset-by-subset.
pub const DEFAULT_SUBSET_CAP: usize = 12;

/// Default cap on `|p| + |p'|` when candidate type pairs are enumerated.
pub const DEFAULT_TYPE_SIZE_CAP: usize = 4;

impl SearchSpace {
    /// Builds a space. Every chain must pass [`verify_ul_axioms`]; all
    /// downstream results presuppose the axioms.
    pub fn new(
        chains: Vec<Arc<UlChain>>,
        max_domain: usize,
        max_candidates: u128,
    ) -> Result<SearchSpace> {
        if max_domain < 1 {
            return Err(Error::InvalidSize { size: max_domain });
        }
        if chains.is_empty() {
            return Err(Error::MalformedChain {
                reason: "search space needs at least one chain".to_string(),
            });
        }
        for c in &chains {
            let report = verify_ul_axioms(c);
            if !report.all_passed() {
                let failed = report
                    .checks
                    .iter()
                    .find(|ch| !ch.passed)
                    .map(|ch| ch.axiom)
                    .unwrap_or("axioms");
                return Err(Error::MalformedChain {
                    reason: format!("chain {} fails {failed}", c.name()),
                });
            }
        }
        Ok(SearchSpace {
            chains,
            max_domain,
            max_candidates,
            subset_cap: DEFAULT_SUBSET_CAP,
            type_size_cap: DEFAULT_TYPE_SIZE_CAP,
        })
    }

    pub fn with_subset_cap(mut self, cap: usize) -> SearchSpace {
        self.subset_cap = cap;
        self
    }

    pub fn with_type_size_cap(mut self, cap: usize) -> SearchSpace {
        self.type_size_cap = cap;
        self
    }

    pub fn chains(&self) -> &[Arc<UlChain>] {
        &self.chains
    }

    pub fn max_domain(&self) -> usize {
        self.max_domain
    }

    pub fn max_candidates(&self) -> u128 {
        self.max_candidates
    }

    pub fn subset_cap(&self) -> usize {
        self.subset_cap
    }

    pub fn type_size_cap(&self) -> usize {
        self.type_size_cap
    }
}

/// Number of structures [`enumerate_structures`] would yield, saturating.
pub fn candidate_count(space: &SearchSpace, sig: &Signature) -> u128 {
    let mut total: u128 = 0;
    for chain in &space.chains {
        for m in 1..=space.max_domain {
            let mut per: u128 = 1;
            for (_, arity) in sig.predicates() {
                let cells = (m as u128).saturating_pow(arity as u32);
                per = saturating_pow_mul(per, chain.size() as u128, cells);
            }
            for (_, arity) in sig.functions() {
                let cells = (m as u128).saturating_pow(arity as u32);
                per = saturating_pow_mul(per, m as u128, cells);
            }
            total = total.saturating_add(per);
        }
    }
    total
}

/// `acc * base^exp`, saturating.
fn saturating_pow_mul(acc: u128, base: u128, exp: u128) -> u128 {
    let mut out = acc;
    for _ in 0..exp {
        out = out.saturating_mul(base);
        if out == u128::MAX {
            return out;
        }
    }
    out
}

/// Synthetic element names for enumerated structures.
pub(crate) fn synthetic_domain(size: usize) -> Vec<String> {
    (0..size).map(|i| format!("e{i}")).collect()
}

/// Deterministic enumeration of every structure over the space's chains
/// with domain sizes `1..=max_domain` and all predicate/function tables in
/// lexicographic order. Refuses to start if the candidate count exceeds
/// the space ceiling.
pub fn enumerate_structures(space: &SearchSpace, sig: &Signature) -> Result<StructureIter> {
    let count = candidate_count(space, sig);
    if count > space.max_candidates {
        return Err(Error::SearchSpaceTooLarge {
            count,
            ceiling: space.max_candidates,
        });
    }
    Ok(StructureIter::new(space.chains.clone(), space.max_domain, sig))
}

/// Iterator over candidate structures. See [`enumerate_structures`].
pub struct StructureIter {
    chains: Vec<Arc<UlChain>>,
    max_domain: usize,
    preds: Vec<(String, usize)>,
    funcs: Vec<(String, usize)>,
    chain_idx: usize,
    domain_size: usize,
    /// Odometer over all table cells; `None` between (chain, size) blocks.
    cells: Option<Vec<usize>>,
    bases: Vec<usize>,
    counter: u128,
}

impl StructureIter {
    fn new(chains: Vec<Arc<UlChain>>, max_domain: usize, sig: &Signature) -> StructureIter {
        let preds = sig
            .predicates()
            .map(|(n, a)| (n.to_string(), a))
            .collect();
        let funcs = sig.functions().map(|(n, a)| (n.to_string(), a)).collect();
        let mut it = StructureIter {
            chains,
            max_domain,
            preds,
            funcs,
            chain_idx: 0,
            domain_size: 1,
            cells: None,
            bases: Vec::new(),
            counter: 0,
        };
        it.reset_block();
        it
    }

    fn reset_block(&mut self) {
        if self.chain_idx >= self.chains.len() {
            self.cells = None;
            return;
        }
        let chain_size = self.chains[self.chain_idx].size();
        let m = self.domain_size;
        let mut bases = Vec::new();
        for &(_, arity) in &self.preds {
            bases.extend(core::iter::repeat(chain_size).take(m.pow(arity as u32)));
        }
        for &(_, arity) in &self.funcs {
            bases.extend(core::iter::repeat(m).take(m.pow(arity as u32)));
        }
        self.cells = Some(alloc::vec![0; bases.len()]);
        self.bases = bases;
    }

    fn advance_block(&mut self) {
        if self.domain_size < self.max_domain {
            self.domain_size += 1;
        } else {
            self.domain_size = 1;
            self.chain_idx += 1;
        }
        self.reset_block();
    }

    fn build(&self) -> Structure {
        let chain = Arc::clone(&self.chains[self.chain_idx]);
        let m = self.domain_size;
        let cells = self.cells.as_ref().expect("active block");
        let mut s = Structure::new(format!("cand{}", self.counter), chain, synthetic_domain(m))
            .expect("synthetic domain is valid");
        let mut offset = 0;
        for (name, arity) in &self.preds {
            let len = m.pow(*arity as u32);
            s.add_predicate_table(name.clone(), *arity, cells[offset..offset + len].to_vec())
                .expect("cells are in range");
            offset += len;
        }
        for (name, arity) in &self.funcs {
            let len = m.pow(*arity as u32);
            s.add_function_table(name.clone(), *arity, cells[offset..offset + len].to_vec())
                .expect("cells are in range");
            offset += len;
        }
        s
    }
}

impl Iterator for StructureIter {
    type Item = Structure;

    fn next(&mut self) -> Option<Structure> {
        self.cells.as_ref()?;
        let out = self.build();
        self.counter += 1;
        // Increment the odometer, last cell fastest.
        let cells = self.cells.as_mut().expect("active block");
        let mut i = cells.len();
        loop {
            if i == 0 {
                self.advance_block();
                break;
            }
            i -= 1;
            cells[i] += 1;
            if cells[i] < self.bases[i] {
                break;
            }
            cells[i] = 0;
        }
        Some(out)
    }
}

/// Relativized semantic consequence: in every structure of the space and
/// every evaluation of the free variables, if all premises are designated
/// then so is the conclusion.
pub fn entails(space: &SearchSpace, premises: &[Formula], conclusion: &Formula) -> Result<bool> {
    Ok(entails_witness(space, premises, conclusion)?.is_none())
}

/// Like [`entails`], but returns the first countermodel in enumeration
/// order: a structure and an evaluation designating every premise but not
/// the conclusion.
pub fn entails_witness(
    space: &SearchSpace,
    premises: &[Formula],
    conclusion: &Formula,
) -> Result<Option<(Structure, Evaluation)>> {
    let sig = infer_signature(premises.iter().chain(core::iter::once(conclusion)))?;
    let mut free: Vec<String> = Vec::new();
    for f in premises.iter().chain(core::iter::once(conclusion)) {
        for v in f.free_variables() {
            if !free.contains(&v) {
                free.push(v);
            }
        }
    }
    free.sort();

    for s in enumerate_structures(space, &sig)? {
        let m = s.domain().len();
        'assignment: for tuple in TupleIter::new(m, free.len()) {
            let mut env: Vec<(String, usize)> =
                free.iter().cloned().zip(tuple.iter().copied()).collect();
            for p in premises {
                let v = eval_formula_env(&s, &mut env, p)?;
                if !s.chain().is_designated(v) {
                    continue 'assignment;
                }
            }
            let v = eval_formula_env(&s, &mut env, conclusion)?;
            if !s.chain().is_designated(v) {
                let mut witness = Evaluation::new();
                for (var, e) in free.iter().zip(tuple.iter()) {
                    witness.set(var.clone(), *e);
                }
                return Ok(Some((s, witness)));
            }
        }
    }
    Ok(None)
}
