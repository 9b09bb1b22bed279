//! Finite n-ary (polyadic) groups.
//!
//! A [`PolyadicGroup`] is either a full `m^n` table or a b-derived group
//! `f(x_1, ..., x_n) = x_1 * ... * x_n * b` over an ordinary group with `b`
//! central. Both forms share one evaluation path, so all axiom checks,
//! solving and word reduction are storage-agnostic.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::group::{FiniteGroup, GroupError};

/// Largest full table accepted by [`nary_from_table`].
pub const TABLE_BUDGET: usize = 10_000_000;
/// Full axiom checks run while `(2n-1) * m^(2n-1)` stays below this.
pub const FULL_CHECK_BUDGET: u128 = 100_000_000;
pub const DEFAULT_SAMPLES: usize = 100_000;
pub const DEFAULT_SEED: u64 = 0x005e_ed0f_f00d;

/// Cap on witnesses kept in a report.
const MAX_WITNESSES: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NaryError {
    #[error("arity must be at least 2, got {0}")]
    ArityTooSmall(usize),
    #[error("order must be positive")]
    EmptyCarrier,
    #[error("table of {entries} entries exceeds the budget of {budget}")]
    TableBudgetExceeded { entries: u128, budget: usize },
    #[error("table has {got} entries, expected {expected}")]
    TableSize { expected: usize, got: usize },
    #[error("table entry {index} = {value} out of range for order {order}")]
    EntryOutOfRange { index: usize, value: usize, order: usize },
    #[error("element {0} out of range")]
    ElementOutOfRange(usize),
    #[error("axiom violation ({}): {} witness(es)", .0.axiom, .0.violations.len())]
    AxiomViolation(Box<AxiomReport>),
    #[error("b = {b} is not central: it does not commute with {witness}")]
    NotCentral { b: usize, witness: usize },
    #[error("expected exactly {expected} arguments, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("word of length {len} is not admissible for arity {arity} (need k(n-1)+1, k >= 1)")]
    BadLength { len: usize, arity: usize },
    #[error("position {position} is outside 1..={arity}")]
    BadPosition { position: usize, arity: usize },
    #[error("no solution at position {position} for target {target} with {others:?}")]
    NoSolution { position: usize, target: usize, others: Vec<usize> },
    #[error("solutions {first} and {second} both solve position {position} for target {target} with {others:?}")]
    MultipleSolutions { position: usize, target: usize, others: Vec<usize>, first: usize, second: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CheckMode {
    Full,
    Sampled { count: usize, seed: u64 },
}

impl CheckMode {
    pub fn sampled(count: usize) -> Self {
        CheckMode::Sampled { count, seed: DEFAULT_SEED }
    }
}

/// What went wrong at a witness assignment.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mismatch {
    /// Two evaluations that should agree.
    Unequal { left: usize, right: usize },
    /// Two distinct unknowns give the same value, so the translation is not a bijection.
    Collision { first: usize, second: usize, value: usize },
    /// No element solves the equation.
    Unsolvable,
    /// Matrix-valued checks: largest entrywise deviation.
    Deviation(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub rule: String,
    pub assignment: Vec<usize>,
    pub mismatch: Mismatch,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub axiom: &'static str,
    pub passed: bool,
    pub mode: CheckMode,
    pub violations: Vec<Witness>,
    pub checked_count: u64,
}

impl AxiomReport {
    pub(crate) fn new(axiom: &'static str, mode: CheckMode) -> Self {
        AxiomReport { axiom, passed: true, mode, violations: Vec::new(), checked_count: 0 }
    }

    pub(crate) fn record(&mut self, w: Witness) {
        self.passed = false;
        if self.violations.len() < MAX_WITNESSES {
            self.violations.push(w);
        }
    }
}

#[derive(Debug, Clone)]
pub enum Storage {
    /// Row-major, last argument varying fastest.
    FullTable(Vec<usize>),
    BDerived { base: FiniteGroup, b: usize },
}

/// Axiom reports produced when a full table was ingested.
#[derive(Debug, Clone, Serialize)]
pub struct Validation {
    pub associativity: AxiomReport,
    pub solvability: AxiomReport,
}

#[derive(Debug, Clone)]
pub struct PolyadicGroup {
    arity: usize,
    order: usize,
    storage: Storage,
    label: String,
    validation: Option<Validation>,
    skews: OnceLock<Vec<usize>>,
}

/// Budgets for ingesting a full table.
#[derive(Debug, Clone, Copy)]
pub struct ValidationPolicy {
    pub table_budget: usize,
    pub full_check_budget: u128,
    pub samples: usize,
    pub seed: u64,
}

impl Default for ValidationPolicy {
    fn default() -> Self {
        ValidationPolicy {
            table_budget: TABLE_BUDGET,
            full_check_budget: FULL_CHECK_BUDGET,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
        }
    }
}

impl ValidationPolicy {
    pub fn mode_for(&self, arity: usize, order: usize) -> CheckMode {
        let cost = (2 * arity as u128 - 1).saturating_mul((order as u128).saturating_pow(2 * arity as u32 - 1));
        if cost <= self.full_check_budget {
            CheckMode::Full
        } else {
            CheckMode::Sampled { count: self.samples, seed: self.seed }
        }
    }
}

pub fn nary_from_table(arity: usize, order: usize, table: Vec<usize>, label: &str) -> Result<PolyadicGroup, NaryError> {
    nary_from_table_with(arity, order, table, label, &ValidationPolicy::default())
}

pub fn nary_from_table_with(
    arity: usize,
    order: usize,
    table: Vec<usize>,
    label: &str,
    policy: &ValidationPolicy,
) -> Result<PolyadicGroup, NaryError> {
    let mut g = table_shape(arity, order, table, label, policy.table_budget)?;
    let mode = policy.mode_for(arity, order);
    let solvability = check_unique_solvability(&g, mode);
    if !solvability.passed {
        return Err(NaryError::AxiomViolation(Box::new(solvability)));
    }
    let associativity = check_associativity(&g, mode);
    if !associativity.passed {
        return Err(NaryError::AxiomViolation(Box::new(associativity)));
    }
    g.validation = Some(Validation { associativity, solvability });
    Ok(g)
}

/// Wraps a table after shape and range checks only. The axioms are not
/// checked; use this to report on untrusted input.
pub fn nary_from_table_unchecked(arity: usize, order: usize, table: Vec<usize>, label: &str) -> Result<PolyadicGroup, NaryError> {
    table_shape(arity, order, table, label, TABLE_BUDGET)
}

fn table_shape(arity: usize, order: usize, table: Vec<usize>, label: &str, budget: usize) -> Result<PolyadicGroup, NaryError> {
    if arity < 2 {
        return Err(NaryError::ArityTooSmall(arity));
    }
    if order == 0 {
        return Err(NaryError::EmptyCarrier);
    }
    let entries = (order as u128).saturating_pow(arity as u32);
    if entries > budget as u128 {
        return Err(NaryError::TableBudgetExceeded { entries, budget });
    }
    let expected = entries as usize;
    if table.len() != expected {
        return Err(NaryError::TableSize { expected, got: table.len() });
    }
    if let Some((index, &value)) = table.iter().enumerate().find(|(_, &v)| v >= order) {
        return Err(NaryError::EntryOutOfRange { index, value, order });
    }
    Ok(PolyadicGroup::raw(arity, order, Storage::FullTable(table), label.to_string()))
}

/// `f(x_1..x_n) = x_1 * ... * x_n * b` with `b` central in `base`.
pub fn b_derived(base: &FiniteGroup, b: usize, arity: usize) -> Result<PolyadicGroup, NaryError> {
    if arity < 2 {
        return Err(NaryError::ArityTooSmall(arity));
    }
    if b >= base.order() {
        return Err(NaryError::ElementOutOfRange(b));
    }
    if let Some(witness) = (0..base.order()).find(|&x| base.mul(b, x) != base.mul(x, b)) {
        return Err(NaryError::NotCentral { b, witness });
    }
    let label = if b == base.identity() {
        format!("der^{arity}({})", base.label())
    } else {
        format!("der^{arity}_{b}({})", base.label())
    };
    Ok(PolyadicGroup::raw(arity, base.order(), Storage::BDerived { base: base.clone(), b }, label))
}

/// `der^n(base)`: the b-derived group with `b` the identity.
pub fn derived(base: &FiniteGroup, arity: usize) -> Result<PolyadicGroup, NaryError> {
    b_derived(base, base.identity(), arity)
}

impl PolyadicGroup {
    fn raw(arity: usize, order: usize, storage: Storage, label: String) -> Self {
        PolyadicGroup { arity, order, storage, label, validation: None, skews: OnceLock::new() }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn storage(&self) -> &Storage {
        &self.storage
    }

    pub fn validation(&self) -> Option<&Validation> {
        self.validation.as_ref()
    }

    /// The full `m^n` table, materialised from either storage form.
    pub fn to_table(&self) -> Vec<usize> {
        match &self.storage {
            Storage::FullTable(t) => t.clone(),
            Storage::BDerived { .. } => {
                let mut out = Vec::with_capacity(self.order.pow(self.arity as u32));
                for_each_tuple(self.order, self.arity, |args| out.push(self.f(args)));
                out
            }
        }
    }

    /// Arity-2 groups as ordinary groups.
    pub fn as_binary_group(&self) -> Option<FiniteGroup> {
        if self.arity != 2 {
            return None;
        }
        match &self.storage {
            Storage::BDerived { base, b } if *b == base.identity() => Some(base.clone()),
            _ => FiniteGroup::from_flat(self.order, self.to_table(), self.label.clone()).ok(),
        }
    }

    /// Unchecked evaluation on exactly `arity` arguments.
    #[inline]
    pub(crate) fn f(&self, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.arity);
        match &self.storage {
            Storage::FullTable(t) => t[args.iter().fold(0, |acc, &x| acc * self.order + x)],
            Storage::BDerived { base, b } => base.mul(args.iter().fold(base.identity(), |acc, &x| base.mul(acc, x)), *b),
        }
    }

    fn check_elements(&self, xs: &[usize]) -> Result<(), NaryError> {
        match xs.iter().find(|&&x| x >= self.order) {
            Some(&x) => Err(NaryError::ElementOutOfRange(x)),
            None => Ok(()),
        }
    }

    pub fn evaluate(&self, word: &[usize]) -> Result<usize, NaryError> {
        if word.len() != self.arity {
            return Err(NaryError::WrongLength { expected: self.arity, got: word.len() });
        }
        self.check_elements(word)?;
        Ok(self.f(word))
    }

    /// Reduces a word of length `k(n-1)+1`, `k >= 1`, leftmost application first.
    pub fn evaluate_word(&self, word: &[usize]) -> Result<usize, NaryError> {
        let n = self.arity;
        if word.len() < n || !(word.len() - 1).is_multiple_of(n - 1) {
            return Err(NaryError::BadLength { len: word.len(), arity: n });
        }
        self.check_elements(word)?;
        let mut buf = Vec::with_capacity(n);
        let mut acc = self.f(&word[..n]);
        for chunk in word[n..].chunks(n - 1) {
            buf.clear();
            buf.push(acc);
            buf.extend_from_slice(chunk);
            acc = self.f(&buf);
        }
        Ok(acc)
    }

    /// The unique `z` with `f(x_1^{i-1}, z, x_{i+1}^n) = target`, by enumeration.
    /// `position` is 1-based; `others` lists the remaining `n-1` arguments in order.
    pub fn solve(&self, position: usize, target: usize, others: &[usize]) -> Result<usize, NaryError> {
        let n = self.arity;
        if position == 0 || position > n {
            return Err(NaryError::BadPosition { position, arity: n });
        }
        if others.len() != n - 1 {
            return Err(NaryError::WrongLength { expected: n - 1, got: others.len() });
        }
        self.check_elements(others)?;
        self.check_elements(&[target])?;
        let mut args = Vec::with_capacity(n);
        args.extend_from_slice(&others[..position - 1]);
        args.push(0);
        args.extend_from_slice(&others[position - 1..]);
        let mut found = None;
        for z in 0..self.order {
            args[position - 1] = z;
            if self.f(&args) == target {
                if let Some(first) = found {
                    return Err(NaryError::MultipleSolutions {
                        position,
                        target,
                        others: others.to_vec(),
                        first,
                        second: z,
                    });
                }
                found = Some(z);
            }
        }
        found.ok_or_else(|| NaryError::NoSolution { position, target, others: others.to_vec() })
    }

    /// The skew element: the unique `z` with `f(x, ..., x, z) = x`.
    pub fn skew(&self, x: usize) -> Result<usize, NaryError> {
        self.check_elements(&[x])?;
        Ok(self.skews()?[x])
    }

    /// Skew elements of every element, computed once per group.
    pub fn skews(&self) -> Result<&[usize], NaryError> {
        if let Some(s) = self.skews.get() {
            return Ok(s);
        }
        let s = (0..self.order)
            .map(|x| self.solve(self.arity, x, &vec![x; self.arity - 1]))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.skews.get_or_init(|| s))
    }

    /// An element `e` with `f(e, .., e, x, e, .., e) = x` in every position.
    pub fn find_nary_identity(&self) -> Option<usize> {
        let n = self.arity;
        let mut args = vec![0; n];
        (0..self.order).find(|&e| {
            (0..n).all(|pos| {
                (0..self.order).all(|x| {
                    args.fill(e);
                    args[pos] = x;
                    self.f(&args) == x
                })
            })
        })
    }

    /// The binary group `x . y = f(x, e^(n-2), y)` retracted through an n-ary identity `e`.
    pub fn binary_retract(&self, e: usize) -> Result<FiniteGroup, NaryError> {
        self.check_elements(&[e])?;
        let n = self.arity;
        let mut args = vec![e; n];
        let mut cayley = Vec::with_capacity(self.order * self.order);
        for x in 0..self.order {
            for y in 0..self.order {
                args[0] = x;
                args[n - 1] = y;
                cayley.push(self.f(&args));
            }
        }
        Ok(FiniteGroup::from_flat(self.order, cayley, format!("ret_{e}({})", self.label))?)
    }
}

/// Calls `visit` on every tuple in `{0..m}^len`, last coordinate fastest.
pub(crate) fn for_each_tuple(m: usize, len: usize, mut visit: impl FnMut(&[usize])) {
    let mut t = vec![0; len];
    loop {
        visit(&t);
        let mut k = len;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            t[k] += 1;
            if t[k] < m {
                break;
            }
            t[k] = 0;
        }
    }
}

/// Drives either every tuple or `count` seeded random tuples.
pub(crate) fn for_each_assignment(m: usize, len: usize, mode: CheckMode, mut visit: impl FnMut(&[usize])) {
    match mode {
        CheckMode::Full => for_each_tuple(m, len, visit),
        CheckMode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut t = vec![0; len];
            for _ in 0..count {
                for x in t.iter_mut() {
                    *x = rng.random_range(0..m);
                }
                visit(&t);
            }
        }
    }
}

/// Checks `f(x_1^{i-1}, f(x_i^{n+i-1}), x_{n+i}^{2n-1})` agrees for all
/// pairs `i < j` of inner positions.
pub fn check_associativity(g: &PolyadicGroup, mode: CheckMode) -> AxiomReport {
    let n = g.arity;
    let mut report = AxiomReport::new("associativity", mode);
    let mut outer = vec![0; n];
    let mut results = vec![0; n];
    for_each_assignment(g.order, 2 * n - 1, mode, |x| {
        for i in 0..n {
            let inner = g.f(&x[i..i + n]);
            outer[..i].copy_from_slice(&x[..i]);
            outer[i] = inner;
            outer[i + 1..].copy_from_slice(&x[i + n..]);
            results[i] = g.f(&outer);
        }
        for i in 0..n {
            for j in i + 1..n {
                report.checked_count += 1;
                if results[i] != results[j] {
                    report.record(Witness {
                        rule: format!("inner positions {} and {}", i + 1, j + 1),
                        assignment: x.to_vec(),
                        mismatch: Mismatch::Unequal { left: results[i], right: results[j] },
                    });
                }
            }
        }
    });
    report
}

/// For every position and every assignment of the other `n-1` arguments,
/// `z -> f(.., z, ..)` must be a bijection. Assignments in witnesses carry
/// the position first, then the other arguments.
pub fn check_unique_solvability(g: &PolyadicGroup, mode: CheckMode) -> AxiomReport {
    let n = g.arity;
    let m = g.order;
    let mut report = AxiomReport::new("unique solvability", mode);
    let mut args = vec![0; n];
    let mut hit = vec![usize::MAX; m];
    for pos in 0..n {
        let per_position = match mode {
            CheckMode::Full => mode,
            CheckMode::Sampled { count, seed } => CheckMode::Sampled { count: count.div_ceil(n), seed: seed.wrapping_add(pos as u64) },
        };
        for_each_assignment(m, n - 1, per_position, |others| {
            report.checked_count += 1;
            args[..pos].copy_from_slice(&others[..pos]);
            args[pos + 1..].copy_from_slice(&others[pos..]);
            hit.fill(usize::MAX);
            for z in 0..m {
                args[pos] = z;
                let v = g.f(&args);
                if hit[v] != usize::MAX {
                    let mut assignment = vec![pos + 1];
                    assignment.extend_from_slice(others);
                    report.record(Witness {
                        rule: format!("position {}", pos + 1),
                        assignment,
                        mismatch: Mismatch::Collision { first: hit[v], second: z, value: v },
                    });
                    return;
                }
                hit[v] = z;
            }
        });
    }
    report
}

/// Checks, for all `x, y` and all admissible `i, j, k`:
/// `f(x^(i-2), x̄, x^(n-i), y) = y`, `f(y, x^(n-j), x̄, x^(j-2)) = y`
/// and `f(x^(k-1), x̄, x^(n-k)) = x`.
pub fn check_dornte(g: &PolyadicGroup) -> AxiomReport {
    let n = g.arity;
    let mut report = AxiomReport::new("skew identities", CheckMode::Full);
    let skews = match g.skews() {
        Ok(s) => s.to_vec(),
        Err(e) => {
            let x = match e {
                NaryError::NoSolution { target, .. } | NaryError::MultipleSolutions { target, .. } => target,
                _ => 0,
            };
            report.record(Witness { rule: "skew element".into(), assignment: vec![x], mismatch: Mismatch::Unsolvable });
            return report;
        }
    };
    let mut args = vec![0; n];
    for x in 0..g.order {
        let xb = skews[x];
        for y in 0..g.order {
            for i in 2..=n {
                args.fill(x);
                args[i - 2] = xb;
                args[n - 1] = y;
                report.checked_count += 1;
                let v = g.f(&args);
                if v != y {
                    report.record(Witness {
                        rule: format!("left cancellation i={i}"),
                        assignment: vec![x, y],
                        mismatch: Mismatch::Unequal { left: v, right: y },
                    });
                }
            }
            for j in 2..=n {
                args.fill(x);
                args[0] = y;
                args[n - j + 1] = xb;
                report.checked_count += 1;
                let v = g.f(&args);
                if v != y {
                    report.record(Witness {
                        rule: format!("right cancellation j={j}"),
                        assignment: vec![x, y],
                        mismatch: Mismatch::Unequal { left: v, right: y },
                    });
                }
            }
        }
        for k in 1..=n {
            args.fill(x);
            args[k - 1] = xb;
            report.checked_count += 1;
            let v = g.f(&args);
            if v != x {
                report.record(Witness {
                    rule: format!("skew in position k={k}"),
                    assignment: vec![x],
                    mismatch: Mismatch::Unequal { left: v, right: x },
                });
            }
        }
    }
    report
}
