//! Post's covering group `G*_a` of an n-ary group.
//!
//! Elements are pairs `(x, i)` with `x` in G and `i` in `Z_{n-1}`, stored at
//! index `x * (n-1) + i`. The product is
//!
//! ```text
//! (x, i) . (y, j) = ( f*(x, a^(i), y, a^(j), ā, a^(n-2-i*j)), i*j ),   i*j = i+j+1 mod n-1
//! ```
//!
//! where `f*` reduces a word of length `n` or `2n-1`. The identity is
//! `(ā, n-2)`, G sits inside as the coset `{(x, 0)}` of the normal subgroup
//! `H = {(x, n-2)}`, and `f(x_1..x_n)` becomes the n-fold cover product.
//! Inside the cover, `(x, i)` equals the product `x a^i` of `i + 1`
//! embedded elements.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::group::{
    cyclic_group, direct_product, homomorphism_violation, is_isomorphic, is_normal, is_subgroup, quotient_group,
    FiniteGroup, GroupError, GroupHom,
};
use crate::narygroup::{derived, for_each_tuple, CheckMode, NaryError, PolyadicGroup, DEFAULT_SEED};

/// Full product-compatibility enumeration while `m^n` stays below this.
pub const FULL_TUPLE_BUDGET: u128 = 1_000_000;
const TUPLE_SAMPLES: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoverError {
    #[error("anchor {0} is out of range")]
    AnchorOutOfRange(usize),
    #[error("cover identity is {found:?}, expected (ā, n-2) = {expected:?}")]
    IdentityMismatch { expected: (usize, usize), found: (usize, usize) },
    #[error("inverse of {element:?}: formula gives {formula:?}, table gives {table:?}")]
    FormulaMismatch { element: (usize, usize), formula: (usize, usize), table: (usize, usize) },
    #[error("shift map is not a homomorphism at {left:?} * {right:?}")]
    MapNotHomomorphism { left: (usize, usize), right: (usize, usize) },
    #[error(transparent)]
    Nary(#[from] NaryError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone)]
pub struct PostCover {
    base: PolyadicGroup,
    anchor: usize,
    anchor_skew: usize,
    group: FiniteGroup,
    embed: Vec<usize>,
    h: Vec<usize>,
}

/// Builds the cover word for `(x, i) . (y, j)` and returns it with `i*j`.
/// The word length is `n` when `i + j + 1 <= n - 2` and `2n - 1` otherwise.
pub fn product_word(n: usize, a: usize, a_skew: usize, (x, i): (usize, usize), (y, j): (usize, usize)) -> (Vec<usize>, usize) {
    let s = n - 1;
    let k = (i + j + 1) % s;
    let mut w = Vec::with_capacity(2 * n - 1);
    w.push(x);
    w.extend(std::iter::repeat_n(a, i));
    w.push(y);
    w.extend(std::iter::repeat_n(a, j));
    w.push(a_skew);
    w.extend(std::iter::repeat_n(a, n - 2 - k));
    (w, k)
}

pub fn build_post_cover(g: &PolyadicGroup, a: usize) -> Result<PostCover, CoverError> {
    let m = g.order();
    let n = g.arity();
    if a >= m {
        return Err(CoverError::AnchorOutOfRange(a));
    }
    let a_skew = g.skew(a)?;
    let s = n - 1;
    let order = m * s;
    let mut cayley = Vec::with_capacity(order * order);
    for u in 0..order {
        for v in 0..order {
            let (w, k) = product_word(n, a, a_skew, (u / s, u % s), (v / s, v % s));
            cayley.push(g.evaluate_word(&w)? * s + k);
        }
    }
    let group = FiniteGroup::from_flat(order, cayley, format!("{}*_{a}", g.label()))?;
    let embed = (0..m).map(|x| x * s).collect();
    let h = (0..m).map(|x| x * s + (n - 2)).collect();
    let pc = PostCover { base: g.clone(), anchor: a, anchor_skew: a_skew, group, embed, h };
    cover_identity(&pc)?;
    Ok(pc)
}

impl PostCover {
    pub fn base(&self) -> &PolyadicGroup {
        &self.base
    }

    pub fn anchor(&self) -> usize {
        self.anchor
    }

    pub fn anchor_skew(&self) -> usize {
        self.anchor_skew
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn arity(&self) -> usize {
        self.base.arity()
    }

    /// `n - 1`, the order of the quotient by `H`.
    pub fn levels(&self) -> usize {
        self.base.arity() - 1
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn index(&self, x: usize, i: usize) -> usize {
        x * self.levels() + i
    }

    pub fn pair(&self, idx: usize) -> (usize, usize) {
        (idx / self.levels(), idx % self.levels())
    }

    /// Cover index of the embedded element `(x, 0)`.
    pub fn embed(&self, x: usize) -> usize {
        self.embed[x]
    }

    pub fn embedding(&self) -> &[usize] {
        &self.embed
    }

    /// `H = {(x, n-2)}`, sorted by index.
    pub fn h(&self) -> &[usize] {
        &self.h
    }

    pub fn mul_pairs(&self, p: (usize, usize), q: (usize, usize)) -> (usize, usize) {
        self.pair(self.group.mul(self.index(p.0, p.1), self.index(q.0, q.1)))
    }
}

/// `(ā, n-2)`, checked against the identity of the materialised table.
pub fn cover_identity(pc: &PostCover) -> Result<(usize, usize), CoverError> {
    let expected = (pc.anchor_skew, pc.arity() - 2);
    let found = pc.pair(pc.group.identity());
    if found != expected {
        return Err(CoverError::IdentityMismatch { expected, found });
    }
    Ok(expected)
}

/// Word for the inverse of `(x, i)` and its level `k = n-3-i mod n-1`:
///
/// ```text
/// ( ā, a^(n-2-i), x⁻, ā, a^((i+1) mod (n-1)) )
/// ```
///
/// where `x⁻` is the block `x̄, x^(n-3)` (the cover inverse of `x`); for
/// `n = 2` that block is the binary inverse of `x`. The trailing run is
/// reduced mod `n-1`: at `i = n-2` an unreduced run of `n-1` anchors would
/// multiply the result by `a^(n-1)`, which is the identity only when `a = ā`.
pub fn inverse_word(pc: &PostCover, x: usize, i: usize) -> Result<(Vec<usize>, usize), CoverError> {
    let g = &pc.base;
    let n = g.arity();
    let s = n - 1;
    let (a, ab) = (pc.anchor, pc.anchor_skew);
    let mut w = Vec::with_capacity(2 * n - 1);
    w.push(ab);
    w.extend(std::iter::repeat_n(a, n - 2 - i));
    if n == 2 {
        w.push(g.solve(2, ab, &[x])?);
    } else {
        w.push(g.skew(x)?);
        w.extend(std::iter::repeat_n(x, n - 3));
    }
    w.push(ab);
    w.extend(std::iter::repeat_n(a, (i + 1) % s));
    let k = (n + 2 * s - 3 - i) % s;
    Ok((w, k))
}

/// Inverse of `(x, i)` from the closed formula, checked against the table.
pub fn inverse_by_formula(pc: &PostCover, x: usize, i: usize) -> Result<(usize, usize), CoverError> {
    let (w, k) = inverse_word(pc, x, i)?;
    let formula = (pc.base.evaluate_word(&w)?, k);
    let table = pc.pair(pc.group.inverse(pc.index(x, i)));
    if formula != table {
        return Err(CoverError::FormulaMismatch { element: (x, i), formula, table });
    }
    Ok(formula)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CosetTheoremReport {
    pub h_is_subgroup: bool,
    pub h_is_normal: bool,
    pub quotient_cyclic: bool,
    pub g_is_coset: bool,
    pub product_compatible: bool,
    pub h_index: usize,
    pub tuples_checked: u64,
    pub witnesses: Vec<String>,
}

impl CosetTheoremReport {
    pub fn passed(&self) -> bool {
        self.h_is_subgroup && self.h_is_normal && self.quotient_cyclic && self.g_is_coset && self.product_compatible
    }
}

pub fn verify_coset_theorem(pc: &PostCover) -> CosetTheoremReport {
    let g = &pc.base;
    let mode = if (g.order() as u128).saturating_pow(g.arity() as u32) <= FULL_TUPLE_BUDGET {
        CheckMode::Full
    } else {
        CheckMode::Sampled { count: TUPLE_SAMPLES, seed: DEFAULT_SEED }
    };
    verify_coset_theorem_with(pc, mode)
}

pub fn verify_coset_theorem_with(pc: &PostCover, mode: CheckMode) -> CosetTheoremReport {
    let g = &pc.base;
    let cover = &pc.group;
    let mut witnesses = Vec::new();
    let h_is_subgroup = is_subgroup(cover, &pc.h);
    if !h_is_subgroup {
        witnesses.push("H is not closed under the cover product".to_string());
    }
    let h_is_normal = h_is_subgroup && is_normal(cover, &pc.h).unwrap_or(false);
    if h_is_subgroup && !h_is_normal {
        witnesses.push("H is not normal".to_string());
    }

    let mut quotient_cyclic = false;
    if h_is_normal {
        match quotient_group(cover, &pc.h).map(|(q, _)| is_isomorphic(&q, &cyclic_group(pc.levels()))) {
            Ok(Ok(Some(_))) => quotient_cyclic = true,
            Ok(Ok(None)) => witnesses.push(format!("quotient is not cyclic of order {}", pc.levels())),
            Ok(Err(e)) | Err(e) => witnesses.push(format!("quotient check failed: {e}")),
        }
    }

    // the embedded copy of G must equal the coset (x_0, 0) H
    let x0 = pc.embed[0];
    let mut coset: Vec<usize> = pc.h.iter().map(|&h| cover.mul(x0, h)).collect();
    coset.sort_unstable();
    let g_is_coset = coset == pc.embed;
    if !g_is_coset {
        witnesses.push("embedded G is not a coset of H".to_string());
    }

    let n = g.arity();
    let mut product_compatible = true;
    let mut tuples_checked = 0u64;
    let mut check = |xs: &[usize]| {
        tuples_checked += 1;
        let via_cover = cover.product(xs.iter().map(|&x| pc.embed[x]));
        let direct = pc.embed[g.evaluate(xs).expect("arguments in range")];
        if via_cover != direct {
            product_compatible = false;
            if witnesses.len() < 16 {
                witnesses.push(format!("f{xs:?} = {:?} but the cover product is {:?}", pc.pair(direct), pc.pair(via_cover)));
            }
        }
    };
    match mode {
        CheckMode::Full => for_each_tuple(g.order(), n, &mut check),
        CheckMode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut t = vec![0; n];
            for _ in 0..count {
                t.iter_mut().for_each(|x| *x = rng.random_range(0..g.order()));
                check(&t);
            }
        }
    }

    CosetTheoremReport {
        h_is_subgroup,
        h_is_normal,
        quotient_cyclic,
        g_is_coset,
        product_compatible,
        h_index: cover.order() / pc.h.len(),
        tuples_checked,
        witnesses,
    }
}

/// An isomorphism `G*_a -> G*_b` found by search; the identity map when `a == b`.
pub fn anchor_independence(g: &PolyadicGroup, a: usize, b: usize) -> Result<Option<GroupHom>, CoverError> {
    let ca = build_post_cover(g, a)?;
    if a == b {
        return Ok(Some(GroupHom::identity_map(ca.group())));
    }
    let cb = build_post_cover(g, b)?;
    Ok(is_isomorphic(ca.group(), cb.group())?)
}

/// Builds `(der^n(A))*_e` and checks that `(x, i) -> (x, i+1 mod n-1)` is an
/// isomorphism onto `A x Z_{n-1}`.
pub fn derived_cover_structure(base: &FiniteGroup, n: usize) -> Result<GroupHom, CoverError> {
    let g = derived(base, n)?;
    let pc = build_post_cover(&g, base.identity())?;
    let s = n - 1;
    let target = direct_product(base, &cyclic_group(s));
    let map: Vec<usize> = (0..pc.order())
        .map(|u| {
            let (x, i) = pc.pair(u);
            x * s + (i + 1) % s
        })
        .collect();
    if let Some((u, v)) = homomorphism_violation(pc.group(), &target, &map) {
        return Err(CoverError::MapNotHomomorphism { left: pc.pair(u), right: pc.pair(v) });
    }
    Ok(GroupHom::new(pc.group().clone(), target, map)?)
}
