//! Exact finite UL-chains.
//!
//! A chain is a linearly ordered bounded residuated lattice whose monoid
//! operation is given by an explicit table. The carrier is always the index
//! range `0..size`, ordered by integer order, with `bot = 0` and
//! `top = size - 1`. The neutral element `one` and the falsity constant
//! `zero` are free indices: `one` need not be the top and `zero` need not be
//! the bottom, which is what separates these chains from t-norm algebras.
//!
//! The residuum is never given by a closed formula; it is derived from the
//! monoid table by exhaustive maximization, which is uniform and safe at
//! clamp boundaries.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A finite UL-chain given by an explicit monoid table.
///
/// Immutable after construction; safe to share and read concurrently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UlChain {
    name: String,
    size: usize,
    /// Monoid table, row-major `size * size`.
    conj: Vec<usize>,
    /// Residuum table derived from `conj` by exhaustive maximization.
    res: Vec<usize>,
    one: usize,
    zero: usize,
}

impl UlChain {
    /// Builds a chain from an explicit table.
    ///
    /// Only shape is validated here (dimensions, index ranges, size >= 2).
    /// The UL axioms are *not* checked; run [`verify_ul_axioms`] before
    /// trusting a user-supplied table.
    pub fn from_parts(
        name: impl Into<String>,
        size: usize,
        table: &[Vec<usize>],
        one: usize,
        zero: usize,
    ) -> Result<UlChain> {
        if size < 2 {
            return Err(Error::InvalidSize { size });
        }
        if table.len() != size {
            return Err(Error::MalformedChain {
                reason: format!("expected {size} rows, got {}", table.len()),
            });
        }
        let mut conj = Vec::with_capacity(size * size);
        for (i, row) in table.iter().enumerate() {
            if row.len() != size {
                return Err(Error::MalformedChain {
                    reason: format!("row {i} has {} entries, expected {size}", row.len()),
                });
            }
            for &v in row {
                if v >= size {
                    return Err(Error::InvalidElement { index: v, size });
                }
                conj.push(v);
            }
        }
        if one >= size {
            return Err(Error::InvalidElement { index: one, size });
        }
        if zero >= size {
            return Err(Error::InvalidElement { index: zero, size });
        }
        let res = derive_residuum(size, &conj);
        Ok(UlChain {
            name: name.into(),
            size,
            conj,
            res,
            one,
            zero,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Interpretation of the truth constant `1`.
    pub fn one(&self) -> usize {
        self.one
    }

    /// Interpretation of the truth constant `0`.
    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn bot(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.size - 1
    }

    /// The monoid operation.
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.conj[a * self.size + b]
    }

    /// `max { c | conj(a, c) <= b }`, precomputed from the table.
    ///
    /// On a table violating residuation the stored value is a placeholder;
    /// [`verify_ul_axioms`] reports such tables as failing `(res)`.
    pub fn residuum(&self, a: usize, b: usize) -> usize {
        self.res[a * self.size + b]
    }

    /// Lattice meet: the minimum of the two indices.
    pub fn meet(&self, a: usize, b: usize) -> usize {
        a.min(b)
    }

    /// Lattice join: the maximum of the two indices.
    pub fn join(&self, a: usize, b: usize) -> usize {
        a.max(b)
    }

    /// Whether `a` lies in the designated filter `{ a | a >= one }`.
    pub fn is_designated(&self, a: usize) -> bool {
        a >= self.one
    }

    /// `(min(a, one))^n` under the monoid operation, with `n = 0` giving `one`.
    ///
    /// The sequence is non-increasing and stationary within `size` steps.
    pub fn power(&self, a: usize, n: usize) -> usize {
        let capped = a.min(self.one);
        let mut acc = self.one;
        for _ in 0..n {
            let next = self.conj(acc, capped);
            if next == acc {
                break;
            }
            acc = next;
        }
        acc
    }

    /// Validates that an index names a carrier element.
    pub fn check_element(&self, index: usize) -> Result<()> {
        if index < self.size {
            Ok(())
        } else {
            Err(Error::InvalidElement {
                index,
                size: self.size,
            })
        }
    }

    /// Whether two chains are the same algebra (name ignored).
    pub fn same_algebra(&self, other: &UlChain) -> bool {
        self.size == other.size
            && self.one == other.one
            && self.zero == other.zero
            && self.conj == other.conj
    }
}

fn derive_residuum(size: usize, conj: &[usize]) -> Vec<usize> {
    let mut res = Vec::with_capacity(size * size);
    for a in 0..size {
        for b in 0..size {
            let max = (0..size).rev().find(|&c| conj[a * size + c] <= b);
            res.push(max.unwrap_or(0));
        }
    }
    res
}

/// Łukasiewicz chain on `0..n`: `a * b = max(0, a + b - (n-1))`, `one = top`.
pub fn make_lukasiewicz_chain(n: usize) -> Result<UlChain> {
    if n < 2 {
        return Err(Error::InvalidSize { size: n });
    }
    let table: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).map(|b| (a + b).saturating_sub(n - 1)).collect())
        .collect();
    UlChain::from_parts(format!("L{n}"), n, &table, n - 1, 0)
}

/// Gödel chain on `0..n`: `a * b = min(a, b)`, `one = top`.
pub fn make_godel_chain(n: usize) -> Result<UlChain> {
    if n < 2 {
        return Err(Error::InvalidSize { size: n });
    }
    let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| a.min(b)).collect()).collect();
    UlChain::from_parts(format!("G{n}"), n, &table, n - 1, 0)
}

/// Truncated-group chain on `{-k, ..., k}` as indices `0..2k+1`. The
/// neutral element is the middle index (value 0) and `zero` defaults to
/// the index of value -1, so both constants are strictly interior.
///
/// Addition truncated on both sides at once is not associative (the value
/// recovered after hitting a bound depends on the grouping), so the
/// operation is the associative combination: truncated addition below the
/// neutral element, truncated addition above it, and `min` on mixed pairs.
/// The bottom stays absorbing, which residuation requires.
pub fn make_truncated_group_chain(k: usize) -> Result<UlChain> {
    if k < 1 {
        return Err(Error::InvalidSize { size: k });
    }
    let n = 2 * k + 1;
    // index i corresponds to value i - k; the neutral element is index k
    let table: Vec<Vec<usize>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    if a <= k && b <= k {
                        (a + b).saturating_sub(k)
                    } else if a >= k && b >= k {
                        (a + b - k).min(n - 1)
                    } else {
                        a.min(b)
                    }
                })
                .collect()
        })
        .collect();
    UlChain::from_parts(format!("TG{k}"), n, &table, k, k - 1)
}

/// One axiom group in a verification report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub passed: bool,
    /// On failure, the offending elements plus a rendering of the violation.
    pub witness: Option<(Vec<usize>, String)>,
}

/// Result of [`verify_ul_axioms`]: one entry per axiom group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    pub checks: Vec<AxiomCheck>,
}

impl ChainReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Exhaustively checks the UL-chain axioms: bounded lattice, commutative
/// monoid, monotonicity, residuation and prelinearity.
///
/// Failures are report content, not errors; each failing group carries a
/// witness tuple.
pub fn verify_ul_axioms(chain: &UlChain) -> ChainReport {
    let n = chain.size();
    let mut checks = Vec::new();

    // Bounded lattice: min/max on a total order; check bounds and absorption.
    let mut lattice = AxiomCheck {
        axiom: "bounded lattice",
        passed: true,
        witness: None,
    };
    'lat: for a in 0..n {
        if chain.meet(a, chain.bot()) != chain.bot() || chain.join(a, chain.top()) != chain.top() {
            lattice.passed = false;
            lattice.witness = Some((alloc::vec![a], format!("bounds fail at {a}")));
            break;
        }
        for b in 0..n {
            if chain.meet(a, chain.join(a, b)) != a || chain.join(a, chain.meet(a, b)) != a {
                lattice.passed = false;
                lattice.witness = Some((alloc::vec![a, b], format!("absorption fails at ({a},{b})")));
                break 'lat;
            }
        }
    }
    checks.push(lattice);

    // Commutative monoid with neutral element `one`.
    let mut monoid = AxiomCheck {
        axiom: "commutative monoid",
        passed: true,
        witness: None,
    };
    'mon: for a in 0..n {
        if chain.conj(a, chain.one()) != a {
            monoid.passed = false;
            monoid.witness = Some((
                alloc::vec![a],
                format!("one is not neutral: {a} * one = {}", chain.conj(a, chain.one())),
            ));
            break;
        }
        for b in 0..n {
            if chain.conj(a, b) != chain.conj(b, a) {
                monoid.passed = false;
                monoid.witness = Some((
                    alloc::vec![a, b],
                    format!("commutativity fails: {a}*{b} != {b}*{a}"),
                ));
                break 'mon;
            }
            for c in 0..n {
                if chain.conj(chain.conj(a, b), c) != chain.conj(a, chain.conj(b, c)) {
                    monoid.passed = false;
                    monoid.witness = Some((
                        alloc::vec![a, b, c],
                        format!("associativity fails at ({a},{b},{c})"),
                    ));
                    break 'mon;
                }
            }
        }
    }
    checks.push(monoid);

    // Monotonicity in each argument (commutativity makes one side enough,
    // but both are checked since the table may not be commutative).
    let mut mono = AxiomCheck {
        axiom: "monotonicity",
        passed: true,
        witness: None,
    };
    'mono: for a in 0..n {
        for b in a..n {
            for c in 0..n {
                if chain.conj(a, c) > chain.conj(b, c) || chain.conj(c, a) > chain.conj(c, b) {
                    mono.passed = false;
                    mono.witness = Some((
                        alloc::vec![a, b, c],
                        format!("monotonicity fails at a={a} <= b={b}, c={c}"),
                    ));
                    break 'mono;
                }
            }
        }
    }
    checks.push(mono);

    // Residuation: a*b <= c iff b <= res(a,c), for all triples.
    let mut res = AxiomCheck {
        axiom: "(res) residuation",
        passed: true,
        witness: None,
    };
    'res: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let lhs = chain.conj(a, b) <= c;
                let rhs = b <= chain.residuum(a, c);
                if lhs != rhs {
                    res.passed = false;
                    res.witness = Some((
                        alloc::vec![a, b, c],
                        format!(
                            "(res) fails at ({a},{b},{c}): {a}*{b}<={c} is {lhs}, {b}<=res({a},{c})={} is {rhs}",
                            chain.residuum(a, c)
                        ),
                    ));
                    break 'res;
                }
            }
        }
    }
    checks.push(res);

    // Prelinearity: ((a->b) /\ one) \/ ((b->a) /\ one) = one.
    let mut lin = AxiomCheck {
        axiom: "(lin) prelinearity",
        passed: true,
        witness: None,
    };
    'lin: for a in 0..n {
        for b in 0..n {
            let left = chain.meet(chain.residuum(a, b), chain.one());
            let right = chain.meet(chain.residuum(b, a), chain.one());
            if chain.join(left, right) != chain.one() {
                lin.passed = false;
                lin.witness = Some((
                    alloc::vec![a, b],
                    format!("(lin) fails at ({a},{b})"),
                ));
                break 'lin;
            }
        }
    }
    checks.push(lin);

    ChainReport { checks }
}
