//! Representations and characters of polyadic groups through the Post cover.
//!
//! Irreducible characters of `(G, f)` are read off the cover: each
//! irreducible `χ̂` of `G*_a` restricts to `χ(x) = χ̂(x, 0)`. In the other
//! direction a representation `Λ` of `G` lifts to
//! `Λ*(x, i) = Λ(x) Λ(a)^i`, and restricting a cover representation `Γ`
//! to the embedded coset gives `Γ_G(x) = Γ(x, 0)`; the two maps are
//! mutually inverse.
//!
//! A character has `p` in its kernel when `χ(p) = χ(1)`, i.e. `Λ(p)` is the
//! identity matrix. For such `p` the lifted character is
//! `χ̂(x, i) = χ(f(x, a^(i), p^(n-i-1)))`, which is what makes the
//! orthogonality sum over `G x Z_{n-1}` computable from `χ` alone.

use std::sync::Arc;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::chartab::{character_table_seeded, CharTableError, CharacterTable, C64, DEFAULT_CHARTAB_SEED};
use crate::narygroup::{for_each_assignment, AxiomReport, CheckMode, Mismatch, NaryError, PolyadicGroup, Witness};
use crate::postcover::{build_post_cover, CoverError, PostCover};

pub const KERNEL_TOL: f64 = 1e-6;
pub const LIFT_TOL: f64 = 1e-8;
pub const HOMOMORPHISM_TOL: f64 = 1e-8;
pub const ROUND_TRIP_TOL: f64 = 1e-10;
pub const ORTHOGONALITY_TOL: f64 = 1e-6;
pub const CHOICE_SPREAD_TOL: f64 = 1e-8;
pub const DEFAULT_KERNEL_CHOICES: usize = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepError {
    #[error("character {source_index} has an empty kernel")]
    EmptyKernel { source_index: usize },
    #[error("{p} is not in the kernel of character {source_index}")]
    NotInKernel { p: usize, source_index: usize },
    #[error("lift of character {source_index} differs from the cover character at {element:?} by {deviation:e}")]
    LiftMismatch { source_index: usize, element: (usize, usize), deviation: f64 },
    #[error("characters come from different cover tables")]
    DifferentGroups,
    #[error("element {0} out of range")]
    ElementOutOfRange(usize),
    #[error("matrix for element {element} is {rows}x{cols}, expected {dim}x{dim}")]
    DimensionMismatch { element: usize, rows: usize, cols: usize, dim: usize },
    #[error("expected {expected} matrices, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("cover map is not a homomorphism at {left:?} * {right:?} (deviation {deviation:e})")]
    HomomorphismFailure { left: (usize, usize), right: (usize, usize), deviation: f64 },
    #[error("restriction is not an n-ary representation")]
    NotARepresentation(Box<AxiomReport>),
    #[error("restrict-then-lift differs at {element:?} by {deviation:e}")]
    RoundTripMismatch { element: (usize, usize), deviation: f64 },
    #[error("character of degree {0} does not give a 1-dimensional representation")]
    NotLinear(usize),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Table(#[from] CharTableError),
    #[error(transparent)]
    Nary(#[from] NaryError),
}

/// A Post cover together with its character table.
#[derive(Debug)]
pub struct CoverCharacters {
    pub cover: PostCover,
    pub table: CharacterTable,
}

impl CoverCharacters {
    pub fn new(g: &PolyadicGroup, a: usize, seed: u64) -> Result<Self, RepError> {
        let cover = build_post_cover(g, a)?;
        let table = character_table_seeded(cover.group(), seed)?;
        Ok(CoverCharacters { cover, table })
    }
}

#[derive(Debug, Clone)]
pub struct PolyadicCharacter {
    context: Arc<CoverCharacters>,
    pub values: Vec<C64>,
    pub degree: usize,
    /// Row of the cover character table this character was restricted from.
    pub source: usize,
    pub kernel: Vec<usize>,
}

impl PolyadicCharacter {
    pub fn group(&self) -> &PolyadicGroup {
        self.context.cover.base()
    }

    pub fn anchor(&self) -> usize {
        self.context.cover.anchor()
    }

    pub fn cover(&self) -> &PostCover {
        &self.context.cover
    }

    pub fn table(&self) -> &CharacterTable {
        &self.context.table
    }

    pub fn shares_table(&self, other: &PolyadicCharacter) -> bool {
        Arc::ptr_eq(&self.context, &other.context)
    }
}

pub fn irreducible_polyadic_characters(g: &PolyadicGroup, a: usize, seed: u64) -> Result<Vec<PolyadicCharacter>, RepError> {
    Ok(restricted_characters(Arc::new(CoverCharacters::new(g, a, seed)?)))
}

/// Restricts every irreducible of the cover to the embedded copy of G.
pub fn restricted_characters(context: Arc<CoverCharacters>) -> Vec<PolyadicCharacter> {
    let (pc, table) = (&context.cover, &context.table);
    (0..table.count())
        .map(|r| {
            let values: Vec<C64> = (0..pc.base().order()).map(|x| table.value(r, pc.embed(x))).collect();
            let degree = table.degrees[r];
            let kernel = kernel_of(&values, degree);
            PolyadicCharacter { context: Arc::clone(&context), values, degree, source: r, kernel }
        })
        .collect()
}

fn kernel_of(values: &[C64], degree: usize) -> Vec<usize> {
    let d = C64::new(degree as f64, 0.0);
    (0..values.len()).filter(|&p| (values[p] - d).norm() <= KERNEL_TOL).collect()
}

/// Elements where the character equals its degree.
pub fn kernel(chi: &PolyadicCharacter) -> Vec<usize> {
    kernel_of(&chi.values, chi.degree)
}

fn kernel_word(n: usize, x: usize, a: usize, i: usize, p: usize) -> Vec<usize> {
    let mut w = Vec::with_capacity(n);
    w.push(x);
    w.extend(std::iter::repeat_n(a, i));
    w.extend(std::iter::repeat_n(p, n - i - 1));
    w
}

fn require_kernel(chi: &PolyadicCharacter, p: usize) -> Result<(), RepError> {
    if chi.kernel.is_empty() {
        return Err(RepError::EmptyKernel { source_index: chi.source });
    }
    if chi.kernel.binary_search(&p).is_err() {
        return Err(RepError::NotInKernel { p, source_index: chi.source });
    }
    Ok(())
}

/// `v(x, i) = χ(f(x, a^(i), p^(n-i-1)))` over cover indices, checked against
/// the cover irreducible `χ` came from.
pub fn lift_character(chi: &PolyadicCharacter, p: usize) -> Result<Vec<C64>, RepError> {
    require_kernel(chi, p)?;
    let g = chi.group();
    let pc = chi.cover();
    let n = g.arity();
    let mut lifted = Vec::with_capacity(pc.order());
    for u in 0..pc.order() {
        let (x, i) = pc.pair(u);
        let v = chi.values[g.evaluate(&kernel_word(n, x, pc.anchor(), i, p))?];
        let expected = chi.table().value(chi.source, u);
        let deviation = (v - expected).norm();
        if deviation > LIFT_TOL {
            return Err(RepError::LiftMismatch { source_index: chi.source, element: (x, i), deviation });
        }
        lifted.push(v);
    }
    Ok(lifted)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeReport {
    pub degrees: Vec<usize>,
    pub sum_of_squares: usize,
    /// `(n-1)|G|`
    pub cover_order: usize,
    pub all_divide: bool,
    pub passed: bool,
}

pub fn degree_theorem_check(g: &PolyadicGroup, a: usize) -> Result<DegreeReport, RepError> {
    let chars = irreducible_polyadic_characters(g, a, DEFAULT_CHARTAB_SEED)?;
    Ok(degree_report(g, &chars))
}

pub fn degree_report(g: &PolyadicGroup, chars: &[PolyadicCharacter]) -> DegreeReport {
    let degrees: Vec<usize> = chars.iter().map(|c| c.degree).collect();
    let cover_order = (g.arity() - 1) * g.order();
    let sum_of_squares = degrees.iter().map(|d| d * d).sum();
    let all_divide = degrees.iter().all(|d| cover_order.is_multiple_of(*d));
    DegreeReport { passed: all_divide && sum_of_squares == cover_order, degrees, sum_of_squares, cover_order, all_divide }
}

/// `1/((n-1)|G|) Σ_i Σ_x χ(f(x, a^(i), p^(n-i-1))) conj(ψ(f(x, a^(i), q^(n-i-1))))`.
pub fn orthogonality_check(
    chi: &PolyadicCharacter,
    psi: &PolyadicCharacter,
    p: usize,
    q: usize,
    a: usize,
) -> Result<C64, RepError> {
    if !chi.shares_table(psi) {
        return Err(RepError::DifferentGroups);
    }
    require_kernel(chi, p)?;
    require_kernel(psi, q)?;
    let g = chi.group();
    if a >= g.order() {
        return Err(RepError::ElementOutOfRange(a));
    }
    let n = g.arity();
    let mut sum = C64::new(0.0, 0.0);
    for i in 0..n - 1 {
        for x in 0..g.order() {
            let u = g.evaluate(&kernel_word(n, x, a, i, p))?;
            let v = g.evaluate(&kernel_word(n, x, a, i, q))?;
            sum += chi.values[u] * psi.values[v].conj();
        }
    }
    Ok(sum / ((n - 1) * g.order()) as f64)
}

#[derive(Debug, Clone)]
pub struct OrthogonalityEntry {
    pub chi: usize,
    pub psi: usize,
    pub choices: Vec<(usize, usize)>,
    pub values: Vec<C64>,
    pub expected: f64,
    pub max_deviation: f64,
    /// Largest distance between values for different kernel choices.
    pub choice_spread: f64,
}

#[derive(Debug, Clone)]
pub struct OrthogonalityReport {
    pub entries: Vec<OrthogonalityEntry>,
    /// Characters skipped because their kernel is empty.
    pub inapplicable: Vec<usize>,
    pub max_deviation: f64,
    pub max_choice_spread: f64,
}

impl OrthogonalityReport {
    pub fn passed(&self) -> bool {
        self.max_deviation <= ORTHOGONALITY_TOL && self.max_choice_spread <= CHOICE_SPREAD_TOL
    }
}

/// Up to `cap` kernel pairs `(p, q)`, spread evenly over `ker χ x ker ψ`.
pub fn kernel_choices(chi: &PolyadicCharacter, psi: &PolyadicCharacter, cap: usize) -> Vec<(usize, usize)> {
    let (kc, kp) = (&chi.kernel, &psi.kernel);
    let total = kc.len() * kp.len();
    let take = total.min(cap.max(1));
    let mut out: Vec<(usize, usize)> = (0..take)
        .map(|t| {
            let idx = t * total / take;
            (kc[idx / kp.len()], kp[idx % kp.len()])
        })
        .collect();
    out.dedup();
    out
}

/// Runs the orthogonality sum on every ordered pair of characters with
/// non-empty kernels, at anchor `a`, for up to `cap` kernel choices per pair.
/// `δ` is decided by the source row, not by comparing values.
pub fn orthogonality_report(chars: &[PolyadicCharacter], a: usize, cap: usize) -> Result<OrthogonalityReport, RepError> {
    let inapplicable: Vec<usize> = chars.iter().filter(|c| c.kernel.is_empty()).map(|c| c.source).collect();
    let usable: Vec<&PolyadicCharacter> = chars.iter().filter(|c| !c.kernel.is_empty()).collect();
    let mut entries = Vec::new();
    let (mut max_deviation, mut max_choice_spread) = (0.0f64, 0.0f64);
    for chi in &usable {
        for psi in &usable {
            let choices = kernel_choices(chi, psi, cap);
            let values = choices
                .iter()
                .map(|&(p, q)| orthogonality_check(chi, psi, p, q, a))
                .collect::<Result<Vec<_>, _>>()?;
            let expected = if chi.source == psi.source { 1.0 } else { 0.0 };
            let target = C64::new(expected, 0.0);
            let dev = values.iter().map(|v| (v - target).norm()).fold(0.0, f64::max);
            let spread = values
                .iter()
                .flat_map(|v| values.iter().map(move |w| (v - w).norm()))
                .fold(0.0, f64::max);
            max_deviation = max_deviation.max(dev);
            max_choice_spread = max_choice_spread.max(spread);
            entries.push(OrthogonalityEntry {
                chi: chi.source,
                psi: psi.source,
                choices,
                values,
                expected,
                max_deviation: dev,
                choice_spread: spread,
            });
        }
    }
    Ok(OrthogonalityReport { entries, inapplicable, max_deviation, max_choice_spread })
}

/// Value vectors sorted into a canonical order, for comparing character
/// sets computed at different anchors.
pub fn sorted_value_vectors(chars: &[PolyadicCharacter]) -> Vec<Vec<C64>> {
    let q = |x: f64| (x * 1e6).round() as i64;
    let mut v: Vec<Vec<C64>> = chars.iter().map(|c| c.values.clone()).collect();
    v.sort_by(|a, b| {
        let ka: Vec<(i64, i64)> = a.iter().map(|z| (q(z.re), q(z.im))).collect();
        let kb: Vec<(i64, i64)> = b.iter().map(|z| (q(z.re), q(z.im))).collect();
        ka.cmp(&kb)
    });
    v
}

/// Max-norm distance between two equally sized lists of value vectors.
pub fn value_set_distance(a: &[Vec<C64>], b: &[Vec<C64>]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .flat_map(|(u, v)| u.iter().zip(v).map(|(x, y)| (x - y).norm()))
        .fold(0.0, f64::max)
}

/// Smallest max-norm distance between the value vectors of two distinct characters.
pub fn min_pairwise_gap(chars: &[PolyadicCharacter]) -> f64 {
    let mut gap = f64::INFINITY;
    for (r, c) in chars.iter().enumerate() {
        for d in &chars[r + 1..] {
            let dist = c.values.iter().zip(&d.values).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            gap = gap.min(dist);
        }
    }
    gap
}

pub type Matrix = DMatrix<C64>;

fn max_distance(a: &Matrix, b: &Matrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn matrix_pow(m: &Matrix, k: usize) -> Matrix {
    (0..k).fold(Matrix::identity(m.nrows(), m.nrows()), |acc, _| acc * m)
}

fn check_dims(matrices: &[Matrix], expected: usize) -> Result<usize, RepError> {
    if matrices.len() != expected {
        return Err(RepError::WrongCount { expected, got: matrices.len() });
    }
    let dim = matrices[0].nrows();
    for (element, m) in matrices.iter().enumerate() {
        if m.nrows() != dim || m.ncols() != dim {
            return Err(RepError::DimensionMismatch { element, rows: m.nrows(), cols: m.ncols(), dim });
        }
    }
    Ok(dim)
}

/// A matrix-valued map on the elements of an n-ary group.
#[derive(Debug, Clone)]
pub struct PolyadicRepresentation {
    pub group: PolyadicGroup,
    pub dimension: usize,
    pub matrices: Vec<Matrix>,
}

impl PolyadicRepresentation {
    pub fn new(group: PolyadicGroup, matrices: Vec<Matrix>) -> Result<Self, RepError> {
        let dimension = check_dims(&matrices, group.order())?;
        Ok(PolyadicRepresentation { group, dimension, matrices })
    }

    /// The 1-dimensional representation `x -> [χ(x)]` of a linear character.
    pub fn from_linear_character(chi: &PolyadicCharacter) -> Result<Self, RepError> {
        if chi.degree != 1 {
            return Err(RepError::NotLinear(chi.degree));
        }
        let matrices = chi.values.iter().map(|&v| Matrix::from_element(1, 1, v)).collect();
        Self::new(chi.group().clone(), matrices)
    }

    pub fn matrix(&self, x: usize) -> &Matrix {
        &self.matrices[x]
    }

    pub fn character(&self) -> Vec<C64> {
        self.matrices.iter().map(|m| m.trace()).collect()
    }
}

/// Checks `Λ(f(x_1..x_n)) = Λ(x_1)..Λ(x_n)` on all or sampled tuples,
/// invertibility of every `Λ(x)`, and `Λ(ā) = Λ(a)^(2-n)` for every `a`.
pub fn verify_nary_homomorphism(rep: &PolyadicRepresentation, mode: CheckMode) -> AxiomReport {
    let g = &rep.group;
    let n = g.arity();
    let mut report = AxiomReport::new("n-ary homomorphism", mode);
    for_each_assignment(g.order(), n, mode, |t| {
        report.checked_count += 1;
        let lhs = &rep.matrices[g.f(t)];
        let rhs = t.iter().skip(1).fold(rep.matrices[t[0]].clone(), |acc, &x| acc * &rep.matrices[x]);
        let dev = max_distance(lhs, &rhs);
        if dev > HOMOMORPHISM_TOL {
            report.record(Witness { rule: "product".into(), assignment: t.to_vec(), mismatch: Mismatch::Deviation(dev) });
        }
    });
    let skews = match g.skews() {
        Ok(s) => s.to_vec(),
        Err(_) => {
            report.record(Witness { rule: "skew element".into(), assignment: vec![], mismatch: Mismatch::Unsolvable });
            return report;
        }
    };
    for a in 0..g.order() {
        report.checked_count += 1;
        let Some(inv) = matrix_pow(&rep.matrices[a], n - 2).try_inverse() else {
            report.record(Witness {
                rule: "invertible".into(),
                assignment: vec![a],
                mismatch: Mismatch::Deviation(f64::INFINITY),
            });
            continue;
        };
        let dev = max_distance(&rep.matrices[skews[a]], &inv);
        if dev > ROUND_TRIP_TOL {
            report.record(Witness {
                rule: "skew image equals power 2-n".into(),
                assignment: vec![a],
                mismatch: Mismatch::Deviation(dev),
            });
        }
    }
    report
}

/// Matrices indexed by cover elements.
#[derive(Debug, Clone)]
pub struct CoverRepresentation {
    pub cover: PostCover,
    pub dimension: usize,
    pub matrices: Vec<Matrix>,
}

impl CoverRepresentation {
    pub fn new(cover: PostCover, matrices: Vec<Matrix>) -> Result<Self, RepError> {
        let dimension = check_dims(&matrices, cover.order())?;
        Ok(CoverRepresentation { cover, dimension, matrices })
    }

    /// Left regular representation: `Γ(g) e_h = e_{gh}`.
    pub fn regular(cover: PostCover) -> Self {
        let g = cover.group().clone();
        let m = g.order();
        let matrices = (0..m)
            .map(|u| {
                let mut mat = Matrix::zeros(m, m);
                for v in 0..m {
                    mat[(g.mul(u, v), v)] = C64::new(1.0, 0.0);
                }
                mat
            })
            .collect();
        CoverRepresentation { cover, dimension: m, matrices }
    }

    /// Checks `Γ(uv) = Γ(u)Γ(v)` for every pair of cover elements.
    pub fn verify_homomorphism(&self) -> Result<(), RepError> {
        let g = self.cover.group();
        for u in 0..g.order() {
            for v in 0..g.order() {
                let dev = max_distance(&self.matrices[g.mul(u, v)], &(&self.matrices[u] * &self.matrices[v]));
                if dev > HOMOMORPHISM_TOL {
                    return Err(RepError::HomomorphismFailure {
                        left: self.cover.pair(u),
                        right: self.cover.pair(v),
                        deviation: dev,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn distance(&self, other: &CoverRepresentation) -> f64 {
        if self.matrices.len() != other.matrices.len() || self.dimension != other.dimension {
            return f64::INFINITY;
        }
        self.matrices.iter().zip(&other.matrices).map(|(a, b)| max_distance(a, b)).fold(0.0, f64::max)
    }
}

/// `Λ*(x, i) = Λ(x) Λ(a)^i`, verified to be a homomorphism of `G*_a`.
pub fn lift_representation(rep: &PolyadicRepresentation, a: usize) -> Result<CoverRepresentation, RepError> {
    let cover = build_post_cover(&rep.group, a)?;
    lift_onto(rep, cover)
}

fn lift_onto(rep: &PolyadicRepresentation, cover: PostCover) -> Result<CoverRepresentation, RepError> {
    let a = cover.anchor();
    let powers: Vec<Matrix> = (0..cover.levels()).map(|i| matrix_pow(&rep.matrices[a], i)).collect();
    let matrices = (0..cover.order())
        .map(|u| {
            let (x, i) = cover.pair(u);
            &rep.matrices[x] * &powers[i]
        })
        .collect();
    let lifted = CoverRepresentation { cover, dimension: rep.dimension, matrices };
    lifted.verify_homomorphism()?;
    Ok(lifted)
}

/// `Γ_G(x) = Γ(x, 0)`. Checks that the result is an n-ary representation and
/// that lifting it again at the same anchor reproduces `Γ`.
pub fn restrict_representation(gamma: &CoverRepresentation) -> Result<PolyadicRepresentation, RepError> {
    gamma.verify_homomorphism()?;
    let pc = &gamma.cover;
    let matrices = (0..pc.base().order()).map(|x| gamma.matrices[pc.embed(x)].clone()).collect();
    let rep = PolyadicRepresentation::new(pc.base().clone(), matrices)?;
    let report = verify_nary_homomorphism(&rep, CheckMode::Full);
    if !report.passed {
        return Err(RepError::NotARepresentation(Box::new(report)));
    }
    let again = lift_onto(&rep, pc.clone())?;
    for (u, (m1, m2)) in again.matrices.iter().zip(&gamma.matrices).enumerate() {
        let deviation = max_distance(m1, m2);
        if deviation > ROUND_TRIP_TOL {
            return Err(RepError::RoundTripMismatch { element: pc.pair(u), deviation });
        }
    }
    Ok(rep)
}

/// Largest entrywise distance between two polyadic representations.
pub fn representation_distance(a: &PolyadicRepresentation, b: &PolyadicRepresentation) -> f64 {
    if a.matrices.len() != b.matrices.len() || a.dimension != b.dimension {
        return f64::INFINITY;
    }
    a.matrices.iter().zip(&b.matrices).map(|(x, y)| max_distance(x, y)).fold(0.0, f64::max)
}
