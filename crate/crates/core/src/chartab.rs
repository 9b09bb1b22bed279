//! Conjugacy classes and complex character tables of finite groups.
//!
//! Characters come from the class-multiplication coefficients
//! `a_{jkl} = #{(x, y) in C_j x C_k : xy = z}` for a fixed `z in C_l`. For
//! every irreducible `χ` the vector `ω_l = |C_l| χ(g_l) / χ(1)` is a common
//! eigenvector of the matrices `(M_j)_{kl} = a_{jkl}`. After the similarity
//! `D = diag(|C_l|^-1/2)` the family is real and closed under transpose
//! (`D M_j D⁻¹` transposes to `D M_{j⁻¹} D⁻¹`), so one random Hermitian
//! combination of it has the `ω` vectors as eigenvectors with, generically,
//! pairwise distinct eigenvalues.

use std::cmp::Ordering;

use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::group::FiniteGroup;

pub type C64 = Complex<f64>;

pub const CHARTAB_ORDER_BOUND: usize = 384;
pub const DEFAULT_CHARTAB_SEED: u64 = 0xc4a7_7ab1e;
/// Degrees are snapped to the nearest integer when this close.
pub const DEGREE_SNAP_TOL: f64 = 1e-6;
/// Orthogonality must hold to this before a table is accepted.
pub const ORTHOGONALITY_TOL: f64 = 1e-8;
/// Eigenvalues closer than this count as a shared eigenspace.
pub const EIGEN_CLUSTER_TOL: f64 = 1e-7;
pub const MAX_ATTEMPTS: usize = 8;

const VALUE_SNAP_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CharTableError {
    #[error("no separating class-matrix combination after {attempts} attempts")]
    DegenerateEigenbasis { attempts: usize },
    #[error("group order {order} exceeds the character table bound {bound}")]
    OrderBudgetExceeded { order: usize, bound: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugacyClasses {
    pub class_of: Vec<usize>,
    /// Smallest element index of each class.
    pub representatives: Vec<usize>,
    pub sizes: Vec<usize>,
    pub members: Vec<Vec<usize>>,
}

impl ConjugacyClasses {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }
}

/// Classes ordered identity first, then by `(size, smallest element)`.
pub fn conjugacy_classes(g: &FiniteGroup) -> ConjugacyClasses {
    let m = g.order();
    let mut seen = vec![false; m];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for x in 0..m {
        if seen[x] {
            continue;
        }
        let mut orbit: Vec<usize> = (0..m).map(|h| g.conjugate(h, x)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &y in &orbit {
            seen[y] = true;
        }
        orbits.push(orbit);
    }
    let e = g.identity();
    orbits.sort_by_key(|o| (o[0] != e, o.len(), o[0]));
    let mut class_of = vec![0; m];
    for (c, o) in orbits.iter().enumerate() {
        for &y in o {
            class_of[y] = c;
        }
    }
    ConjugacyClasses {
        class_of,
        representatives: orbits.iter().map(|o| o[0]).collect(),
        sizes: orbits.iter().map(Vec::len).collect(),
        members: orbits,
    }
}

/// The class matrix `(M_j)_{kl} = a_{jkl}` for class `j`.
pub fn class_matrix(g: &FiniteGroup, classes: &ConjugacyClasses, j: usize) -> Vec<Vec<u64>> {
    let k = classes.count();
    let mut mat = vec![vec![0; k]; k];
    for (l, &z) in classes.representatives.iter().enumerate() {
        for &x in &classes.members[j] {
            mat[classes.class_of[g.mul(g.inverse(x), z)]][l] += 1;
        }
    }
    mat
}

#[derive(Debug, Clone, Serialize)]
pub struct CharacterTable {
    #[serde(skip)]
    pub group: FiniteGroup,
    pub classes: ConjugacyClasses,
    /// `values[r][c]` is the r-th irreducible character on class c.
    #[serde(skip)]
    pub values: Vec<Vec<C64>>,
    pub degrees: Vec<usize>,
}

impl CharacterTable {
    pub fn count(&self) -> usize {
        self.degrees.len()
    }

    /// Value of character `r` at a group element.
    pub fn value(&self, r: usize, x: usize) -> C64 {
        self.values[r][self.classes.class_of[x]]
    }
}

pub fn character_table(g: &FiniteGroup) -> Result<CharacterTable, CharTableError> {
    character_table_seeded(g, DEFAULT_CHARTAB_SEED)
}

/// Rows are sorted by degree, then by their values in descending
/// lexicographic order, so the trivial character comes first and the
/// result does not depend on `seed`.
pub fn character_table_seeded(g: &FiniteGroup, seed: u64) -> Result<CharacterTable, CharTableError> {
    if g.order() > CHARTAB_ORDER_BOUND {
        return Err(CharTableError::OrderBudgetExceeded { order: g.order(), bound: CHARTAB_ORDER_BOUND });
    }
    let classes = conjugacy_classes(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..MAX_ATTEMPTS {
        let c: Vec<f64> = (0..classes.count()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let d: Vec<f64> = (0..classes.count()).map(|_| rng.random_range(-1.0..1.0)).collect();
        match attempt_table(g, &classes, &c, &d) {
            Some((values, degrees)) => {
                let mut rows: Vec<(usize, Vec<C64>)> = degrees.into_iter().zip(values).collect();
                rows.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| compare_rows(&b.1, &a.1)));
                let (degrees, values) = rows.into_iter().unzip();
                return Ok(CharacterTable { group: g.clone(), classes, values, degrees });
            }
            None => log::debug!("character table attempt {attempt} rejected"),
        }
    }
    Err(CharTableError::DegenerateEigenbasis { attempts: MAX_ATTEMPTS })
}

fn quantize(x: f64) -> i64 {
    (x * 1e6).round() as i64
}

fn compare_rows(a: &[C64], b: &[C64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| (quantize(x.re), quantize(x.im)).cmp(&(quantize(y.re), quantize(y.im))))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= VALUE_SNAP_TOL {
        r + 0.0
    } else {
        x
    }
}

/// One diagonalisation with coefficient vectors `c` (symmetric part) and
/// `d` (antisymmetric part). `None` when eigenvalues cluster or the
/// recovered table fails its own consistency checks.
fn attempt_table(g: &FiniteGroup, classes: &ConjugacyClasses, c: &[f64], d: &[f64]) -> Option<(Vec<Vec<C64>>, Vec<usize>)> {
    let k = classes.count();
    let order = g.order() as f64;
    if k == 1 {
        return Some((vec![vec![C64::new(1.0, 0.0)]], vec![1]));
    }

    // Weighted class matrices M_c = Σ c_j M_j and M_d = Σ d_j M_j in one pass.
    let mut mc = DMatrix::<f64>::zeros(k, k);
    let mut md = DMatrix::<f64>::zeros(k, k);
    for (l, &z) in classes.representatives.iter().enumerate() {
        for x in 0..g.order() {
            let j = classes.class_of[x];
            let row = classes.class_of[g.mul(g.inverse(x), z)];
            mc[(row, l)] += c[j];
            md[(row, l)] += d[j];
        }
    }
    let sqrt_size: Vec<f64> = classes.sizes.iter().map(|&s| (s as f64).sqrt()).collect();
    for r in 0..k {
        for l in 0..k {
            let scale = sqrt_size[l] / sqrt_size[r];
            mc[(r, l)] *= scale;
            md[(r, l)] *= scale;
        }
    }
    let herm = DMatrix::from_fn(k, k, |r, l| {
        C64::new(mc[(r, l)] + mc[(l, r)], md[(r, l)] - md[(l, r)])
    });
    let eig = herm.symmetric_eigen();

    let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    if ev.windows(2).any(|w| w[1] - w[0] < EIGEN_CLUSTER_TOL) {
        return None;
    }

    let mut values = Vec::with_capacity(k);
    let mut degrees = Vec::with_capacity(k);
    for col in 0..k {
        let v = eig.eigenvectors.column(col);
        let w0 = v[0] * sqrt_size[0];
        if w0.norm() < 1e-9 {
            return None;
        }
        let w: Vec<C64> = (0..k).map(|l| v[l] * sqrt_size[l] / w0).collect();
        let norm: f64 = (0..k).map(|l| w[l].norm_sqr() / classes.sizes[l] as f64).sum();
        let deg = (order / norm).sqrt();
        let snapped = deg.round();
        if (deg - snapped).abs() > DEGREE_SNAP_TOL || snapped < 1.0 {
            return None;
        }
        let row: Vec<C64> = (0..k)
            .map(|l| {
                let z = w[l] * snapped / classes.sizes[l] as f64;
                C64::new(snap(z.re), snap(z.im))
            })
            .collect();
        values.push(row);
        degrees.push(snapped as usize);
    }

    if degrees.iter().map(|d| d * d).sum::<usize>() != g.order() {
        return None;
    }
    let dev = orthogonality_deviation(&values, &classes.sizes, g.order());
    if dev.row > ORTHOGONALITY_TOL || dev.column > ORTHOGONALITY_TOL {
        return None;
    }
    Some((values, degrees))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrthogonalityDeviation {
    pub row: f64,
    pub column: f64,
}

/// Largest deviation of the row and column orthogonality sums from their
/// Kronecker targets.
pub fn check_orthogonality(t: &CharacterTable) -> OrthogonalityDeviation {
    orthogonality_deviation(&t.values, &t.classes.sizes, t.group.order())
}

fn orthogonality_deviation(values: &[Vec<C64>], sizes: &[usize], order: usize) -> OrthogonalityDeviation {
    let k = values.len();
    let g = order as f64;
    let mut row = 0.0f64;
    for r in 0..k {
        for s in 0..k {
            let sum: C64 = (0..k).map(|c| values[r][c] * values[s][c].conj() * sizes[c] as f64).sum::<C64>() / g;
            let target = if r == s { 1.0 } else { 0.0 };
            row = row.max((sum - target).norm());
        }
    }
    let mut column = 0.0f64;
    for c in 0..k {
        for c2 in 0..k {
            let sum: C64 = (0..k).map(|r| values[r][c] * values[r][c2].conj()).sum();
            let target = if c == c2 { g / sizes[c] as f64 } else { 0.0 };
            column = column.max((sum - target).norm());
        }
    }
    OrthogonalityDeviation { row, column }
}

/// Largest entrywise distance between two tables with the same shape.
pub fn table_distance(a: &CharacterTable, b: &CharacterTable) -> f64 {
    if a.degrees != b.degrees || a.classes != b.classes {
        return f64::INFINITY;
    }
    a.values
        .iter()
        .zip(&b.values)
        .flat_map(|(r, s)| r.iter().zip(s).map(|(x, y)| (x - y).norm()))
        .fold(0.0, f64::max)
}
