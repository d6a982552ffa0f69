//! Tableaux: pairs of formula sets, their satisfaction and consistency,
//! finite character, and a desk-scale staged Henkin completion.
//!
//! A tableau `<T, U>` constrains a model and evaluation to designate every
//! formula of `T` (the left set) while keeping every formula of `U` (the
//! right set) strictly below `one`. Consistency means no finite subset
//! `U0` of the right set has `T |= \/ U0`, with the empty disjunction read
//! as `bot`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::semantics::{
    enumerate_structures, eval_formula_env, Evaluation, SearchSpace, Structure,
};
use crate::syntax::{infer_signature, Formula, Quantifier, Signature, Term, TruthConst};
use crate::util::{SubsetIter, TupleIter};

/// A pair of ordered formula sets; duplicates are excluded on insertion.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tableau {
    left: Vec<Formula>,
    right: Vec<Formula>,
}

impl Tableau {
    pub fn new() -> Tableau {
        Tableau::default()
    }

    pub fn from_parts(left: Vec<Formula>, right: Vec<Formula>) -> Tableau {
        let mut t = Tableau::new();
        for f in left {
            t.push_left(f);
        }
        for f in right {
            t.push_right(f);
        }
        t
    }

    /// Adds a formula to the left set; returns false if already present.
    pub fn push_left(&mut self, f: Formula) -> bool {
        if self.left.contains(&f) {
            false
        } else {
            self.left.push(f);
            true
        }
    }

    /// Adds a formula to the right set; returns false if already present.
    pub fn push_right(&mut self, f: Formula) -> bool {
        if self.right.contains(&f) {
            false
        } else {
            self.right.push(f);
            true
        }
    }

    pub fn left(&self) -> &[Formula] {
        &self.left
    }

    pub fn right(&self) -> &[Formula] {
        &self.right
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty() && self.right.is_empty()
    }

    /// Componentwise inclusion.
    pub fn is_subtableau_of(&self, other: &Tableau) -> bool {
        self.left.iter().all(|f| other.left.contains(f))
            && self.right.iter().all(|f| other.right.contains(f))
    }

    /// This tableau extended by extra formulas on each side.
    pub fn extended(&self, left_extra: &[Formula], right_extra: &[Formula]) -> Tableau {
        let mut t = self.clone();
        for f in left_extra {
            t.push_left(f.clone());
        }
        for f in right_extra {
            t.push_right(f.clone());
        }
        t
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.left.iter().chain(self.right.iter())
    }

    pub fn free_variables(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for f in self.formulas() {
            for v in f.free_variables() {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out.sort();
        out
    }

    pub fn signature(&self) -> Result<Signature> {
        infer_signature(self.formulas())
    }
}

/// Whether the structure and evaluation satisfy the tableau: every left
/// formula designated, every right formula strictly below `one`.
pub fn satisfies_tableau(s: &Structure, v: &Evaluation, tableau: &Tableau) -> Result<bool> {
    for f in tableau.left() {
        let value = crate::semantics::eval_formula(s, v, f)?;
        if !s.chain().is_designated(value) {
            return Ok(false);
        }
    }
    for f in tableau.right() {
        let value = crate::semantics::eval_formula(s, v, f)?;
        if s.chain().is_designated(value) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The first structure and evaluation in enumeration order satisfying the
/// tableau, or `None` when the space holds no satisfying pair.
pub fn find_satisfying_model(
    space: &SearchSpace,
    tableau: &Tableau,
) -> Result<Option<(Structure, Evaluation)>> {
    let sig = tableau.signature()?;
    let free = tableau.free_variables();
    for s in enumerate_structures(space, &sig)? {
        let m = s.domain().len();
        'assignment: for tuple in TupleIter::new(m, free.len()) {
            let mut env: Vec<(String, usize)> =
                free.iter().cloned().zip(tuple.iter().copied()).collect();
            for f in tableau.left() {
                let value = eval_formula_env(&s, &mut env, f)?;
                if !s.chain().is_designated(value) {
                    continue 'assignment;
                }
            }
            for f in tableau.right() {
                let value = eval_formula_env(&s, &mut env, f)?;
                if s.chain().is_designated(value) {
                    continue 'assignment;
                }
            }
            let mut witness = Evaluation::new();
            for (var, e) in free.iter().zip(tuple.iter()) {
                witness.set(var.clone(), *e);
            }
            return Ok(Some((s, witness)));
        }
    }
    Ok(None)
}

/// The disjunction of a formula set in canonical (sorted) order, folded
/// left-associatively. The empty disjunction is `bot`.
pub fn big_or(formulas: &[Formula]) -> Formula {
    let mut sorted: Vec<&Formula> = formulas.iter().collect();
    sorted.sort();
    let mut iter = sorted.into_iter();
    match iter.next() {
        None => Formula::Const(TruthConst::Bot),
        Some(first) => iter.fold(first.clone(), |acc, f| Formula::or(acc, f.clone())),
    }
}

/// The first right-subset `U0` (binary counting order) with `T |= \/ U0`,
/// or `None` when the tableau is consistent in the space.
///
/// All `2^|U|` subsets are tried; `|U|` is limited by the space's subset
/// cap.
pub fn inconsistency_witness(
    space: &SearchSpace,
    tableau: &Tableau,
) -> Result<Option<Vec<Formula>>> {
    let n = tableau.right().len();
    if n > space.subset_cap() {
        return Err(Error::SubsetCapExceeded {
            size: n,
            cap: space.subset_cap(),
        });
    }
    for subset in SubsetIter::new(n) {
        let chosen: Vec<Formula> = subset.iter().map(|&i| tableau.right()[i].clone()).collect();
        let target = big_or(&chosen);
        if crate::semantics::entails(space, tableau.left(), &target)? {
            return Ok(Some(chosen));
        }
    }
    Ok(None)
}

/// Whether no finite right-subset is entailed by the left set.
pub fn is_consistent(space: &SearchSpace, tableau: &Tableau) -> Result<bool> {
    Ok(inconsistency_witness(space, tableau)?.is_none())
}

/// Outcome of [`check_finite_character`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCharacterReport {
    /// (a) every subtableau is satisfiable in the space.
    pub all_subtableaux_satisfiable: bool,
    /// The first unsatisfiable subtableau in enumeration order, if any.
    pub first_unsatisfiable: Option<Tableau>,
    /// (b) the tableau itself is satisfiable in the space.
    pub satisfiable: bool,
    /// (c) the tableau is consistent in the space.
    pub consistent: bool,
}

impl FiniteCharacterReport {
    /// Observed verdict for the implication (a) => (b).
    pub fn subtableaux_imply_whole(&self) -> bool {
        !self.all_subtableaux_satisfiable || self.satisfiable
    }

    /// Observed verdict for the equivalence (b) <=> (c).
    pub fn satisfiable_iff_consistent(&self) -> bool {
        self.satisfiable == self.consistent
    }
}

/// Exercises the finite-character test: checks satisfiability of every
/// subtableau, of the whole tableau, and consistency, and reports the
/// observed implications between them.
pub fn check_finite_character(
    space: &SearchSpace,
    tableau: &Tableau,
) -> Result<FiniteCharacterReport> {
    let nl = tableau.left().len();
    let nr = tableau.right().len();
    let cap = space.subset_cap();
    if nl > cap || nr > cap {
        return Err(Error::SubsetCapExceeded {
            size: nl.max(nr),
            cap,
        });
    }
    let mut all_satisfiable = true;
    let mut first_unsatisfiable = None;
    'outer: for lsub in SubsetIter::new(nl) {
        for rsub in SubsetIter::new(nr) {
            let sub = Tableau::from_parts(
                lsub.iter().map(|&i| tableau.left()[i].clone()).collect(),
                rsub.iter().map(|&i| tableau.right()[i].clone()).collect(),
            );
            if find_satisfying_model(space, &sub)?.is_none() {
                all_satisfiable = false;
                first_unsatisfiable = Some(sub);
                break 'outer;
            }
        }
    }
    let satisfiable = find_satisfying_model(space, tableau)?.is_some();
    let consistent = is_consistent(space, tableau)?;
    Ok(FiniteCharacterReport {
        all_subtableaux_satisfiable: all_satisfiable,
        first_unsatisfiable,
        satisfiable,
        consistent,
    })
}

/// Which rule a Henkin stage applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HenkinStageKind {
    /// Stage 3i+1: witness rule for a universal formula.
    UniversalWitness,
    /// Stage 3i+2: witness rule for an existential formula.
    ExistentialWitness,
    /// Stage 3i+3: add one implication of the pair.
    Linearity,
}

/// What a Henkin stage did to the tableau.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HenkinAction {
    Unchanged,
    AddedLeft(Formula),
    AddedRight(Formula),
}

/// One stage of a Henkin completion run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HenkinStage {
    /// Index `i` of the enumeration block this stage belongs to.
    pub block: usize,
    pub kind: HenkinStageKind,
    pub action: HenkinAction,
    /// The tableau after this stage.
    pub after: Tableau,
}

/// A completed Henkin run: the final tableau plus the full stage trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HenkinRun {
    pub tableau: Tableau,
    pub stages: Vec<HenkinStage>,
}

/// Staged Henkin completion over finite enumerations; returns the final
/// tableau. See [`henkin_complete_traced`] for the stage-by-stage record.
pub fn henkin_complete(
    space: &SearchSpace,
    tableau: &Tableau,
    fresh_constants: &[String],
    formulas: &[Formula],
    pairs: &[(Formula, Formula)],
) -> Result<Tableau> {
    henkin_complete_traced(space, tableau, fresh_constants, formulas, pairs).map(|run| run.tableau)
}

/// Runs the three-stage Henkin completion over the given enumerations:
/// for each block `i`, stage 3i+1 applies the universal witness rule to
/// `formulas[i]`, stage 3i+2 the existential witness rule to the same
/// formula, and stage 3i+3 adds one implication of `pairs[i]` to the left
/// set, preferring the first orientation on ties.
///
/// The case split of each witness stage is decided by the consequence
/// oracle. Since `\/` is monotone under set inclusion and the right set is
/// finite, checking the full right set decides the finite-subset condition
/// the rules quantify over. Every intermediate tableau is consistent in
/// the space, so the final one is too.
pub fn henkin_complete_traced(
    space: &SearchSpace,
    tableau: &Tableau,
    fresh_constants: &[String],
    formulas: &[Formula],
    pairs: &[(Formula, Formula)],
) -> Result<HenkinRun> {
    if !is_consistent(space, tableau)? {
        return Err(Error::InconsistentInput);
    }
    let mut current = tableau.clone();
    let mut stages = Vec::new();
    let mut fresh_iter = fresh_constants.iter();

    let mut next_fresh = |current: &Tableau| -> Result<String> {
        // Skip names already used as symbols in the tableau.
        for name in fresh_iter.by_ref() {
            let sig = current.signature()?;
            if sig.function_arity(name).is_none() && sig.predicate_arity(name).is_none() {
                return Ok(name.clone());
            }
        }
        Err(Error::FreshConstantsExhausted)
    };

    let blocks = formulas.len().max(pairs.len());
    for i in 0..blocks {
        // Stage 3i+1: universal witness rule.
        if let Some(f) = formulas.get(i) {
            let action = if let Formula::Quant(Quantifier::Forall, x, body) = f {
                let target = Formula::or(big_or(current.right()), f.clone());
                if crate::semantics::entails(space, current.left(), &target)? {
                    if current.push_left(f.clone()) {
                        HenkinAction::AddedLeft(f.clone())
                    } else {
                        HenkinAction::Unchanged
                    }
                } else {
                    let c = next_fresh(&current)?;
                    let witness = body.substitute(x, &Term::constant(c));
                    if current.push_right(witness.clone()) {
                        HenkinAction::AddedRight(witness)
                    } else {
                        HenkinAction::Unchanged
                    }
                }
            } else {
                HenkinAction::Unchanged
            };
            stages.push(HenkinStage {
                block: i,
                kind: HenkinStageKind::UniversalWitness,
                action,
                after: current.clone(),
            });

            // Stage 3i+2: existential witness rule for the same formula.
            let action = if let Formula::Quant(Quantifier::Exists, x, body) = f {
                let mut with_f: Vec<Formula> = current.left().to_vec();
                if !with_f.contains(f) {
                    with_f.push(f.clone());
                }
                let target = big_or(current.right());
                if crate::semantics::entails(space, &with_f, &target)? {
                    HenkinAction::Unchanged
                } else {
                    let c = next_fresh(&current)?;
                    let witness = body.substitute(x, &Term::constant(c));
                    if current.push_left(witness.clone()) {
                        HenkinAction::AddedLeft(witness)
                    } else {
                        HenkinAction::Unchanged
                    }
                }
            } else {
                HenkinAction::Unchanged
            };
            stages.push(HenkinStage {
                block: i,
                kind: HenkinStageKind::ExistentialWitness,
                action,
                after: current.clone(),
            });
        }

        // Stage 3i+3: linearity.
        if let Some((theta, psi)) = pairs.get(i) {
            let first = Formula::implies(theta.clone(), psi.clone());
            let second = Formula::implies(psi.clone(), theta.clone());
            let try_first = current.extended(core::slice::from_ref(&first), &[]);
            let action = if is_consistent(space, &try_first)? {
                if current.push_left(first.clone()) {
                    HenkinAction::AddedLeft(first)
                } else {
                    HenkinAction::Unchanged
                }
            } else {
                let try_second = current.extended(core::slice::from_ref(&second), &[]);
                if is_consistent(space, &try_second)? {
                    if current.push_left(second.clone()) {
                        HenkinAction::AddedLeft(second)
                    } else {
                        HenkinAction::Unchanged
                    }
                } else {
                    // Proof by cases holds pointwise on chains, so one
                    // orientation always keeps a consistent tableau.
                    unreachable!("both linearity orientations inconsistent");
                }
            };
            stages.push(HenkinStage {
                block: i,
                kind: HenkinStageKind::Linearity,
                action,
                after: current.clone(),
            });
        }
    }

    Ok(HenkinRun {
        tableau: current,
        stages,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_godel_chain, make_lukasiewicz_chain};
    use crate::syntax::parse_formula;
    use alloc::string::ToString;
    use alloc::sync::Arc;
    use alloc::vec;

    fn l5_space() -> SearchSpace {
        let l5 = Arc::new(make_lukasiewicz_chain(5).unwrap());
        SearchSpace::new(vec![l5], 1, 1_000_000).unwrap()
    }

    fn g3_space(max_domain: usize) -> SearchSpace {
        let g3 = Arc::new(make_godel_chain(3).unwrap());
        SearchSpace::new(vec![g3], max_domain, 1_000_000).unwrap()
    }

    fn prop_sig() -> Signature {
        let mut sig = Signature::new();
        for p in ["p", "q", "r"] {
            sig.add_predicate(p, 0).unwrap();
        }
        sig
    }

    fn tab(sig: &Signature, left: &[&str], right: &[&str]) -> Tableau {
        Tableau::from_parts(
            left.iter().map(|s| parse_formula(s, sig).unwrap()).collect(),
            right.iter().map(|s| parse_formula(s, sig).unwrap()).collect(),
        )
    }

    #[test]
    fn satisfaction_examples() {
        let l5 = Arc::new(make_lukasiewicz_chain(5).unwrap());
        let mut s = Structure::new("m", l5, vec!["a".to_string()]).unwrap();
        s.add_predicate_table("p", 0, vec![4]).unwrap();
        s.add_predicate_table("q", 0, vec![0]).unwrap();
        let sig = prop_sig();
        let v = Evaluation::new();
        assert!(satisfies_tableau(&s, &v, &tab(&sig, &["p"], &["q"])).unwrap());
        assert!(!satisfies_tableau(&s, &v, &tab(&sig, &["p"], &["p"])).unwrap());
        assert!(satisfies_tableau(&s, &v, &tab(&sig, &[], &[])).unwrap());
    }

    #[test]
    fn find_model_examples() {
        let mut sig = Signature::new();
        sig.add_predicate("P", 1).unwrap();
        sig.add_predicate("Q", 1).unwrap();
        sig.add_function("c", 0).unwrap();
        let t = tab(&sig, &["P(c)"], &["Q(c)"]);
        let space = g3_space(1);
        let (s, _v) = find_satisfying_model(&space, &t).unwrap().expect("satisfiable");
        let c = s.func_value("c", &[]).unwrap();
        assert_eq!(s.pred_value("P", &[c]).unwrap(), 2);
        assert!(s.pred_value("Q", &[c]).unwrap() < 2);

        let sig = prop_sig();
        assert!(find_satisfying_model(&space, &tab(&sig, &["p"], &["p"]))
            .unwrap()
            .is_none());
        assert!(find_satisfying_model(&space, &tab(&sig, &[], &["bot"]))
            .unwrap()
            .is_some());
    }

    #[test]
    fn big_or_is_canonical() {
        let sig = prop_sig();
        let p = parse_formula("p", &sig).unwrap();
        let q = parse_formula("q", &sig).unwrap();
        assert_eq!(big_or(&[]), Formula::Const(TruthConst::Bot));
        assert_eq!(big_or(&[p.clone()]), p);
        // Order of the input does not matter.
        assert_eq!(big_or(&[q.clone(), p.clone()]), big_or(&[p, q]));
    }

    #[test]
    fn consistency_examples() {
        let sig = prop_sig();
        let space = l5_space();
        assert!(!is_consistent(&space, &tab(&sig, &["p"], &["p"])).unwrap());
        assert!(is_consistent(&space, &tab(&sig, &[], &[])).unwrap());
        assert!(is_consistent(&space, &tab(&sig, &[], &["bot"])).unwrap());
        let witness = inconsistency_witness(&space, &tab(&sig, &["p"], &["q", "p"]))
            .unwrap()
            .expect("inconsistent");
        assert_eq!(witness, vec![parse_formula("p", &sig).unwrap()]);
    }

    #[test]
    fn finite_character_examples() {
        let sig = prop_sig();
        let space = g3_space(1);

        let report = check_finite_character(&space, &tab(&sig, &["p"], &["q"])).unwrap();
        assert!(report.all_subtableaux_satisfiable);
        assert!(report.satisfiable);
        assert!(report.consistent);
        assert!(report.subtableaux_imply_whole());
        assert!(report.satisfiable_iff_consistent());

        let report = check_finite_character(&space, &tab(&sig, &["p"], &["p"])).unwrap();
        assert!(!report.all_subtableaux_satisfiable);
        assert!(!report.satisfiable);
        assert!(!report.consistent);
        assert_eq!(report.first_unsatisfiable, Some(tab(&sig, &["p"], &["p"])));

        let report =
            check_finite_character(&space, &tab(&sig, &["p -> q", "q -> r"], &["p -> r"])).unwrap();
        assert!(!report.satisfiable);
        assert!(!report.all_subtableaux_satisfiable);
        let unsat = report.first_unsatisfiable.expect("names a subtableau");
        assert!(find_satisfying_model(&space, &unsat).unwrap().is_none());
    }

    #[test]
    fn henkin_existential_witness() {
        let mut sig = Signature::new();
        sig.add_predicate("P", 1).unwrap();
        let f = parse_formula("exists x. P(x)", &sig).unwrap();
        let t = Tableau::from_parts(vec![f.clone()], vec![]);
        let space = g3_space(2);
        let out = henkin_complete(&space, &t, &["c".to_string()], &[f], &[]).unwrap();
        let pc = parse_formula("P(c)", &{
            let mut s = sig.clone();
            s.add_function("c", 0).unwrap();
            s
        })
        .unwrap();
        assert!(out.left().contains(&pc));
        assert!(is_consistent(&space, &out).unwrap());
    }

    #[test]
    fn henkin_universal_witness() {
        let mut sig = Signature::new();
        sig.add_predicate("P", 1).unwrap();
        let f = parse_formula("forall x. P(x)", &sig).unwrap();
        let t = Tableau::from_parts(vec![], vec![f.clone()]);
        let space = g3_space(2);
        let run =
            henkin_complete_traced(&space, &t, &["c".to_string()], &[f.clone()], &[]).unwrap();
        sig.add_function("c", 0).unwrap();
        let pc = parse_formula("P(c)", &sig).unwrap();
        assert!(run.tableau.right().contains(&pc));
        assert!(is_consistent(&space, &run.tableau).unwrap());
        // Monotonicity: both sides only grow.
        assert!(t.is_subtableau_of(&run.tableau));
        // Every intermediate tableau is consistent.
        for stage in &run.stages {
            assert!(is_consistent(&space, &stage.after).unwrap());
        }
    }

    #[test]
    fn henkin_linearity_tie() {
        let sig = prop_sig();
        let imp = parse_formula("p -> q", &sig).unwrap();
        let t = Tableau::from_parts(vec![imp.clone()], vec![]);
        let space = g3_space(1);
        let p = parse_formula("p", &sig).unwrap();
        let q = parse_formula("q", &sig).unwrap();
        let run = henkin_complete_traced(&space, &t, &[], &[], &[(p, q)]).unwrap();
        assert_eq!(run.tableau.left(), &[imp]);
        assert!(is_consistent(&space, &run.tableau).unwrap());
        assert_eq!(run.stages.len(), 1);
        assert_eq!(run.stages[0].action, HenkinAction::Unchanged);
    }

    #[test]
    fn henkin_rejects_inconsistent_input() {
        let sig = prop_sig();
        let space = g3_space(1);
        let t = tab(&sig, &["p"], &["p"]);
        assert_eq!(
            henkin_complete(&space, &t, &[], &[], &[]),
            Err(Error::InconsistentInput)
        );
    }

    #[test]
    fn henkin_fresh_constants_exhaust() {
        let mut sig = Signature::new();
        sig.add_predicate("P", 1).unwrap();
        let f = parse_formula("forall x. P(x)", &sig).unwrap();
        let t = Tableau::from_parts(vec![], vec![f.clone()]);
        let space = g3_space(2);
        assert_eq!(
            henkin_complete(&space, &t, &[], &[f], &[]),
            Err(Error::FreshConstantsExhausted)
        );
    }
}
