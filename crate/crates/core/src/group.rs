//! Table-driven finite groups.
//!
//! Elements are dense indices `0..order`. Every structure in this crate that
//! needs an ordinary group (the base of a derived n-ary group, the Post cover,
//! quotients, direct products) is materialised as a [`FiniteGroup`] with a full
//! Cayley table, which keeps all checks exact.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

/// Largest order accepted by the isomorphism search.
pub const ISO_ORDER_BOUND: usize = 384;

/// Orders above this still get a full associativity check, but it is logged.
const ASSOC_WARN_ORDER: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("empty Cayley table")]
    Empty,
    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("entry ({row}, {col}) = {value} is out of range for order {order}")]
    EntryOutOfRange { row: usize, col: usize, value: usize, order: usize },
    #[error("not a Latin square: {line} {index} repeats element {value}")]
    NotLatinSquare { line: &'static str, index: usize, value: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("not associative: ({x}*{y})*{z} != {x}*({y}*{z})")]
    NotAssociative { x: usize, y: usize, z: usize },
    #[error("symmetric group S_{0} exceeds the supported bound S_5")]
    KTooLarge(usize),
    #[error("element set is not a subgroup")]
    NotASubgroup,
    #[error("subgroup is not normal: {g} * {h} * {g}^-1 leaves it")]
    NotNormal { g: usize, h: usize },
    #[error("group order {order} exceeds the search bound {bound}")]
    OrderBudgetExceeded { order: usize, bound: usize },
    #[error("element {0} is out of range")]
    ElementOutOfRange(usize),
    #[error("map is not a homomorphism at ({x}, {y})")]
    NotHomomorphism { x: usize, y: usize },
}

/// An ordinary finite group stored as its Cayley table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteGroup {
    order: usize,
    cayley: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
    label: String,
}

impl FiniteGroup {
    /// Validates a flat row-major table of length `order * order`.
    pub fn from_flat(order: usize, cayley: Vec<usize>, label: impl Into<String>) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::Empty);
        }
        if cayley.len() != order * order {
            return Err(GroupError::NotSquare { row: cayley.len() / order, len: cayley.len() % order, expected: order });
        }
        for (k, &v) in cayley.iter().enumerate() {
            if v >= order {
                return Err(GroupError::EntryOutOfRange { row: k / order, col: k % order, value: v, order });
            }
        }
        check_latin(order, &cayley)?;

        let identity = (0..order)
            .find(|&e| (0..order).all(|x| cayley[e * order + x] == x && cayley[x * order + e] == x))
            .ok_or(GroupError::NoIdentity)?;

        if order > ASSOC_WARN_ORDER {
            log::warn!("full associativity check on a table of order {order} ({} triples)", order.pow(3));
        }
        for x in 0..order {
            for y in 0..order {
                let xy = cayley[x * order + y];
                for z in 0..order {
                    let yz = cayley[y * order + z];
                    if cayley[xy * order + z] != cayley[x * order + yz] {
                        return Err(GroupError::NotAssociative { x, y, z });
                    }
                }
            }
        }

        // Latin rows make the right inverse unique; associativity makes it two-sided.
        let inverses = (0..order)
            .map(|x| (0..order).find(|&y| cayley[x * order + y] == identity).expect("Latin row contains identity"))
            .collect();

        Ok(FiniteGroup { order, cayley, identity, inverses, label: label.into() })
    }

    /// Constructs a group from a square table. Checks the Latin-square,
    /// identity and associativity axioms by full enumeration.
    pub fn from_table(table: &[Vec<usize>], label: impl Into<String>) -> Result<Self, GroupError> {
        let order = table.len();
        if order == 0 {
            return Err(GroupError::Empty);
        }
        let mut flat = Vec::with_capacity(order * order);
        for (row, r) in table.iter().enumerate() {
            if r.len() != order {
                return Err(GroupError::NotSquare { row, len: r.len(), expected: order });
            }
            flat.extend_from_slice(r);
        }
        Self::from_flat(order, flat, label)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.cayley[x * self.order + y]
    }

    #[inline]
    pub fn inverse(&self, x: usize) -> usize {
        self.inverses[x]
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverses
    }

    pub fn row(&self, x: usize) -> &[usize] {
        &self.cayley[x * self.order..(x + 1) * self.order]
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|x| self.row(x).to_vec()).collect()
    }

    pub fn pow(&self, x: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, x))
    }

    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inverse(g))
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut acc = x;
        while acc != self.identity {
            acc = self.mul(acc, x);
            k += 1;
        }
        k
    }

    /// Sorted multiset of element orders.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut p: Vec<usize> = (0..self.order).map(|x| self.element_order(x)).collect();
        p.sort_unstable();
        p
    }

    pub fn exponent(&self) -> usize {
        (0..self.order).map(|x| self.element_order(x)).fold(1, lcm)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|x| (0..x).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.order).any(|x| self.element_order(x) == self.order)
    }

    pub fn is_central(&self, b: usize) -> bool {
        (0..self.order).all(|x| self.mul(b, x) == self.mul(x, b))
    }

    /// Product of a sequence of elements, left to right.
    pub fn product<I: IntoIterator<Item = usize>>(&self, it: I) -> usize {
        it.into_iter().fold(self.identity, |acc, x| self.mul(acc, x))
    }
}

fn check_latin(order: usize, cayley: &[usize]) -> Result<(), GroupError> {
    let mut seen = vec![usize::MAX; order];
    for row in 0..order {
        for col in 0..order {
            let v = cayley[row * order + col];
            if seen[v] == row {
                return Err(GroupError::NotLatinSquare { line: "row", index: row, value: v });
            }
            seen[v] = row;
        }
    }
    seen.fill(usize::MAX);
    for col in 0..order {
        for row in 0..order {
            let v = cayley[row * order + col];
            if seen[v] == col {
                return Err(GroupError::NotLatinSquare { line: "column", index: col, value: v });
            }
            seen[v] = col;
        }
    }
    Ok(())
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

pub fn group_from_table(table: &[Vec<usize>], label: &str) -> Result<FiniteGroup, GroupError> {
    FiniteGroup::from_table(table, label)
}

/// The cyclic group Z_m under addition mod m.
///
/// # Panics
/// If `m == 0`.
pub fn cyclic_group(m: usize) -> FiniteGroup {
    assert!(m >= 1, "cyclic group order must be positive");
    let cayley = (0..m * m).map(|k| (k / m + k % m) % m).collect();
    let inverses = (0..m).map(|x| (m - x) % m).collect();
    FiniteGroup { order: m, cayley, identity: 0, inverses, label: format!("Z{m}") }
}

/// Componentwise product; `(x, y)` has index `x * |B| + y`.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    let (ma, mb) = (a.order, b.order);
    let m = ma * mb;
    let mut cayley = Vec::with_capacity(m * m);
    for u in 0..m {
        for v in 0..m {
            cayley.push(a.mul(u / mb, v / mb) * mb + b.mul(u % mb, v % mb));
        }
    }
    let inverses = (0..m).map(|u| a.inverse(u / mb) * mb + b.inverse(u % mb)).collect();
    FiniteGroup {
        order: m,
        cayley,
        identity: a.identity * mb + b.identity,
        inverses,
        label: format!("{}x{}", a.label, b.label),
    }
}

/// S_k acting on `0..k`, elements in lexicographic order of their one-line
/// notation, product `(s * t)(i) = s(t(i))`.
pub fn symmetric_group(k: usize) -> Result<FiniteGroup, GroupError> {
    if k > 5 {
        return Err(GroupError::KTooLarge(k));
    }
    let k = k.max(1);
    let mut perms = Vec::new();
    let mut p: Vec<usize> = (0..k).collect();
    loop {
        perms.push(p.clone());
        if !next_permutation(&mut p) {
            break;
        }
    }
    let m = perms.len();
    let index = |q: &[usize]| perms.binary_search_by(|r| r.as_slice().cmp(q)).expect("permutation is listed");
    let mut cayley = Vec::with_capacity(m * m);
    let mut buf = vec![0; k];
    for s in &perms {
        for t in &perms {
            for i in 0..k {
                buf[i] = s[t[i]];
            }
            cayley.push(index(&buf));
        }
    }
    FiniteGroup::from_flat(m, cayley, format!("S{k}"))
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Closure of `gens` together with the identity. Sorted.
pub fn subgroup_generated(g: &FiniteGroup, gens: &[usize]) -> Vec<usize> {
    let mut member = vec![false; g.order];
    let mut elems = vec![g.identity];
    member[g.identity] = true;
    let mut head = 0;
    while head < elems.len() {
        let x = elems[head];
        head += 1;
        for &s in gens {
            let y = g.mul(x, s);
            if !member[y] {
                member[y] = true;
                elems.push(y);
            }
        }
    }
    elems.sort_unstable();
    elems
}

/// True when `h` (any order, duplicates ignored) is closed, non-empty and contains the identity.
pub fn is_subgroup(g: &FiniteGroup, h: &[usize]) -> bool {
    let set = membership(g, h);
    let Some(set) = set else { return false };
    set[g.identity] && h.iter().all(|&x| h.iter().all(|&y| set[g.mul(x, y)]))
}

fn membership(g: &FiniteGroup, h: &[usize]) -> Option<Vec<bool>> {
    let mut set = vec![false; g.order];
    for &x in h {
        if x >= g.order {
            return None;
        }
        set[x] = true;
    }
    Some(set)
}

pub fn is_normal(g: &FiniteGroup, h: &[usize]) -> Result<bool, GroupError> {
    Ok(normality_witness(g, h)?.is_none())
}

fn normality_witness(g: &FiniteGroup, h: &[usize]) -> Result<Option<(usize, usize)>, GroupError> {
    if !is_subgroup(g, h) {
        return Err(GroupError::NotASubgroup);
    }
    let set = membership(g, h).expect("checked by is_subgroup");
    for x in 0..g.order {
        for &y in h {
            if !set[g.conjugate(x, y)] {
                return Ok(Some((x, y)));
            }
        }
    }
    Ok(None)
}

/// Quotient by a normal subgroup. Cosets are numbered in order of their
/// smallest element; the returned vector maps each element to its coset.
pub fn quotient_group(g: &FiniteGroup, h: &[usize]) -> Result<(FiniteGroup, Vec<usize>), GroupError> {
    if let Some((g_, h_)) = normality_witness(g, h)? {
        return Err(GroupError::NotNormal { g: g_, h: h_ });
    }
    let h: BTreeSet<usize> = h.iter().copied().collect();
    let mut coset_of = vec![usize::MAX; g.order];
    let mut reps = Vec::new();
    for x in 0..g.order {
        if coset_of[x] == usize::MAX {
            for &y in &h {
                coset_of[g.mul(x, y)] = reps.len();
            }
            reps.push(x);
        }
    }
    let q = reps.len();
    let cayley = reps.iter().flat_map(|&r| reps.iter().map(|&s| coset_of[g.mul(r, s)]).collect::<Vec<_>>()).collect();
    let quotient = FiniteGroup::from_flat(q, cayley, format!("{}/N", g.label))?;
    Ok((quotient, coset_of))
}

/// A map between two finite groups, checked to be a homomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    pub source: FiniteGroup,
    pub target: FiniteGroup,
    pub map: Vec<usize>,
    pub bijective: bool,
}

impl GroupHom {
    pub fn new(source: FiniteGroup, target: FiniteGroup, map: Vec<usize>) -> Result<Self, GroupError> {
        if map.len() != source.order {
            return Err(GroupError::ElementOutOfRange(map.len()));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= target.order) {
            return Err(GroupError::ElementOutOfRange(bad));
        }
        if let Some((x, y)) = homomorphism_violation(&source, &target, &map) {
            return Err(GroupError::NotHomomorphism { x, y });
        }
        let bijective = source.order == target.order && {
            let mut hit = vec![false; target.order];
            map.iter().all(|&y| !std::mem::replace(&mut hit[y], true))
        };
        Ok(GroupHom { source, target, map, bijective })
    }

    pub fn identity_map(g: &FiniteGroup) -> Self {
        GroupHom { source: g.clone(), target: g.clone(), map: (0..g.order).collect(), bijective: true }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }
}

/// First pair `(x, y)` with `map[xy] != map[x] map[y]`.
pub fn homomorphism_violation(source: &FiniteGroup, target: &FiniteGroup, map: &[usize]) -> Option<(usize, usize)> {
    for x in 0..source.order {
        for y in 0..source.order {
            if map[source.mul(x, y)] != target.mul(map[x], map[y]) {
                return Some((x, y));
            }
        }
    }
    None
}

pub fn is_isomorphic(a: &FiniteGroup, b: &FiniteGroup) -> Result<Option<GroupHom>, GroupError> {
    is_isomorphic_bounded(a, b, ISO_ORDER_BOUND)
}

/// Backtracking search over images of a small generating set of `a`.
/// Images are restricted to elements of matching order, and each partial
/// assignment is extended to the subgroup it generates before going deeper,
/// so inconsistencies prune early.
pub fn is_isomorphic_bounded(a: &FiniteGroup, b: &FiniteGroup, bound: usize) -> Result<Option<GroupHom>, GroupError> {
    if a.order != b.order {
        return Ok(None);
    }
    if a.order > bound {
        return Err(GroupError::OrderBudgetExceeded { order: a.order, bound });
    }
    if a.order_profile() != b.order_profile() || a.is_abelian() != b.is_abelian() {
        return Ok(None);
    }
    let gens = generating_set(a);
    let b_orders: Vec<usize> = (0..b.order).map(|y| b.element_order(y)).collect();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let k = a.element_order(g);
            (0..b.order).filter(|&y| b_orders[y] == k).collect()
        })
        .collect();

    let mut map = vec![None; a.order];
    map[a.identity] = Some(b.identity);
    let mut used = vec![false; b.order];
    used[b.identity] = true;
    let mut search = Search { a, b, gens: &gens, candidates: &candidates };
    Ok(search.extend(0, map, used).map(|m| {
        let map: Vec<usize> = m.into_iter().map(|y| y.expect("generators reach every element")).collect();
        GroupHom { source: a.clone(), target: b.clone(), map, bijective: true }
    }))
}

struct Search<'a> {
    a: &'a FiniteGroup,
    b: &'a FiniteGroup,
    gens: &'a [usize],
    candidates: &'a [Vec<usize>],
}

impl Search<'_> {
    fn extend(&mut self, depth: usize, map: Vec<Option<usize>>, used: Vec<bool>) -> Option<Vec<Option<usize>>> {
        if depth == self.gens.len() {
            return Some(map);
        }
        for &img in &self.candidates[depth] {
            if used[img] && map[self.gens[depth]] != Some(img) {
                continue;
            }
            let mut m = map.clone();
            let mut u = used.clone();
            if self.close(depth, img, &mut m, &mut u) {
                if let Some(done) = self.extend(depth + 1, m, u) {
                    return Some(done);
                }
            }
        }
        None
    }

    /// Assigns `gens[depth] -> img` and propagates the map over the subgroup
    /// generated by `gens[..=depth]`. Returns false on any conflict.
    fn close(&self, depth: usize, img: usize, map: &mut [Option<usize>], used: &mut [bool]) -> bool {
        let (a, b) = (self.a, self.b);
        let g = self.gens[depth];
        match map[g] {
            Some(y) if y != img => return false,
            Some(_) => {}
            None => {
                map[g] = Some(img);
                used[img] = true;
            }
        }
        let gens = &self.gens[..=depth];
        let mut queue: Vec<usize> = (0..a.order).filter(|&x| map[x].is_some()).collect();
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            let fx = map[x].expect("queued elements are mapped");
            for &s in gens {
                let y = a.mul(x, s);
                let fy = b.mul(fx, map[s].expect("generator mapped"));
                match map[y] {
                    Some(prev) if prev != fy => return false,
                    Some(_) => {}
                    None => {
                        if used[fy] {
                            return false;
                        }
                        used[fy] = true;
                        map[y] = Some(fy);
                        queue.push(y);
                    }
                }
            }
        }
        true
    }
}

/// Greedy generating set: repeatedly adds an element of maximal order
/// outside the current subgroup.
pub fn generating_set(g: &FiniteGroup) -> Vec<usize> {
    let mut by_order: Vec<usize> = (0..g.order).collect();
    by_order.sort_by_key(|&x| (std::cmp::Reverse(g.element_order(x)), x));
    let mut gens = Vec::new();
    let mut current = vec![g.identity];
    for x in by_order {
        if current.len() == g.order {
            break;
        }
        if current.binary_search(&x).is_err() {
            gens.push(x);
            current = subgroup_generated(g, &gens);
        }
    }
    gens
}
