//! Enumeration of the maximal orders containing a given order.
//!
//! The search runs prime by prime: every overorder with p-power index
//! lives between O and O^∨ ∩ p^{−e}O, and every strict overorder is
//! reached from a smaller one by adjoining a p-torsion element and
//! closing under multiplication. Per-prime results glue by lattice sum,
//! which is exact because localization commutes with sums.

use super::lattice::{
    conjugate_lattice, dual_lattice, hnf_rows, lattice_basis_quats, OrderError, QuatOrder,
    ZLattice,
};
use crate::quadfield::ideal::factor;
use crate::quadfield::Rat;
use crate::quatalg::{Quat, QuatAlgebra};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::{HashMap, HashSet, VecDeque};

pub const DEFAULT_ENUM_BUDGET: u64 = 1 << 24;

pub fn enum_budget() -> u64 {
    std::env::var("QUATREFINE_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_ENUM_BUDGET)
}

/// Prime factorization of the ℤ-index [M : O] shared by every maximal
/// overorder M, read off the discriminant norms.
fn overorder_index_support(order: &QuatOrder) -> Vec<(u64, u32)> {
    let nm_o = order.discriminant().absolute_norm();
    let nm_h = order.alg.disc_ideal().absolute_norm();
    let idx = nm_o / nm_h;
    assert!(idx.is_integer(), "order discriminant not divisible by algebra discriminant");
    let idx = idx.to_integer();
    factor(&idx)
        .into_iter()
        .map(|(p, e)| (p.to_u64().expect("prime fits in u64"), e))
        .collect()
}

/// Close a lattice under multiplication, or report escape from the
/// container (then no contained order is generated by it).
fn ring_closure(alg: &QuatAlgebra, start: &ZLattice, container: &ZLattice) -> Option<ZLattice> {
    let mut cur = start.clone();
    loop {
        if !container.contains_lattice(&cur) {
            return None;
        }
        let basis = lattice_basis_quats(alg.d, &cur);
        let mut extra: Vec<Vec<Rat>> = Vec::new();
        for x in &basis {
            for y in &basis {
                let v = super::lattice::quat_to_rat_vec(&alg.mul(x, y));
                if !cur.contains_vec(&v) {
                    extra.push(v);
                }
            }
        }
        if extra.is_empty() {
            return Some(cur);
        }
        let mut rows = cur.rat_rows();
        rows.extend(extra);
        cur = ZLattice::from_rat_rows(8, &rows);
    }
}

/// Nonzero coset representatives of (p^{−1}L ∩ container)/L as ambient
/// rational vectors. The HNF of L's coordinates in the intersection
/// basis has diagonal pivots, so a mixed-radix box enumerates cosets.
fn socle_candidates(cur: &ZLattice, p: u64, container: &ZLattice) -> Vec<Vec<Rat>> {
    let pinv = cur.scale(&Rat::new(BigInt::one(), BigInt::from(p)));
    let s = pinv.intersect(container);
    if s.rank() != cur.rank() || s == *cur {
        return Vec::new();
    }
    let coord_rows: Vec<Vec<BigInt>> = cur
        .rat_rows()
        .iter()
        .map(|r| s.coords_of(r).expect("sublattice coords"))
        .collect();
    let h = hnf_rows(coord_rows);
    assert_eq!(h.len(), s.rank(), "degenerate coordinate matrix");
    let diag: Vec<u64> = (0..h.len()).map(|i| h[i][i].to_u64().expect("small pivot")).collect();
    let s_rows = s.rat_rows();
    let mut out = Vec::new();
    let mut counters = vec![0u64; diag.len()];
    loop {
        // advance mixed-radix counter
        let mut pos = 0;
        while pos < diag.len() {
            counters[pos] += 1;
            if counters[pos] < diag[pos] {
                break;
            }
            counters[pos] = 0;
            pos += 1;
        }
        if pos == diag.len() {
            break;
        }
        let mut v = vec![Rat::zero(); s.dim];
        for (i, &c) in counters.iter().enumerate() {
            if c != 0 {
                let cb = BigInt::from(c);
                for j in 0..s.dim {
                    let t = &v[j] + &s_rows[i][j] * Rat::from_integer(cb.clone());
                    v[j] = t;
                }
            }
        }
        out.push(v);
    }
    out
}

struct SearchState {
    visited: HashSet<ZLattice>,
    closure_cache: HashMap<ZLattice, Option<ZLattice>>,
    steps: u64,
    budget: u64,
}

/// BFS over multiplicatively closed lattices between `base` and
/// `container`, growing by socle elements at the given primes.
fn closed_overorder_search(
    alg: &QuatAlgebra,
    base: &ZLattice,
    container: &ZLattice,
    primes: &[u64],
    state: &mut SearchState,
) -> Result<Vec<ZLattice>, OrderError> {
    let mut local_seen: HashSet<ZLattice> = HashSet::new();
    let mut queue: VecDeque<ZLattice> = VecDeque::new();
    local_seen.insert(base.clone());
    queue.push_back(base.clone());
    while let Some(cur) = queue.pop_front() {
        for &p in primes {
            for x in socle_candidates(&cur, p, container) {
                state.steps += 1;
                if state.steps > state.budget {
                    return Err(OrderError::EnumerationBudgetExceeded(state.budget));
                }
                let mut rows = cur.rat_rows();
                rows.push(x);
                let grown = ZLattice::from_rat_rows(8, &rows);
                let closed = state
                    .closure_cache
                    .entry(grown.clone())
                    .or_insert_with(|| ring_closure(alg, &grown, container))
                    .clone();
                if let Some(closed) = closed {
                    if local_seen.insert(closed.clone()) {
                        queue.push_back(closed);
                    }
                }
            }
        }
    }
    let all: Vec<ZLattice> = local_seen.into_iter().collect();
    let maximal: Vec<ZLattice> = all
        .iter()
        .filter(|l| {
            !all.iter().any(|m| *m != **l && m.contains_lattice(l))
        })
        .cloned()
        .collect();
    Ok(maximal)
}

fn sort_lattices(mut v: Vec<ZLattice>) -> Vec<ZLattice> {
    v.sort_by(|a, b| (&a.den, &a.rows).cmp(&(&b.den, &b.rows)));
    v
}

pub fn maximal_overorders_with_budget(
    order: &QuatOrder,
    budget: u64,
) -> Result<Vec<QuatOrder>, OrderError> {
    let support = overorder_index_support(order);
    if support.is_empty() {
        return Ok(vec![order.clone()]);
    }
    let alg = &order.alg;
    let base = &order.lattice;
    let dual = dual_lattice(base, alg);
    let mut state = SearchState {
        visited: HashSet::new(),
        closure_cache: HashMap::new(),
        steps: 0,
        budget,
    };
    let mut per_prime: Vec<Vec<ZLattice>> = Vec::new();
    for &(p, e) in &support {
        let scale = Rat::new(BigInt::one(), BigInt::from(p).pow(e));
        let container = dual.intersect(&base.scale(&scale));
        per_prime.push(closed_overorder_search(alg, base, &container, &[p], &mut state)?);
    }
    state.visited.clear();
    // Glue one local choice per prime by lattice sum.
    let mut glued: Vec<ZLattice> = vec![base.clone()];
    for locals in &per_prime {
        let mut next = Vec::new();
        for g in &glued {
            for l in locals {
                next.push(g.add(l));
            }
        }
        glued = next;
    }
    let glued: HashSet<ZLattice> = glued.into_iter().collect();
    let expected_index: BigInt = support
        .iter()
        .map(|&(p, e)| BigInt::from(p).pow(e))
        .product();
    let mut out = Vec::new();
    for lat in sort_lattices(glued.into_iter().collect()) {
        assert_eq!(base.index_in(&lat), expected_index, "glued lattice has wrong index");
        let o = QuatOrder::from_lattice_unchecked(alg.clone(), lat);
        assert!(o.is_maximal(), "glued lattice is not a maximal order");
        out.push(o);
    }
    Ok(out)
}

pub fn maximal_overorders(order: &QuatOrder) -> Result<Vec<QuatOrder>, OrderError> {
    maximal_overorders_with_budget(order, enum_budget())
}

/// Single search over all primes at once; exists to cross-check the
/// glued route (the two must produce identical sets).
pub fn maximal_overorders_direct(
    order: &QuatOrder,
    budget: u64,
) -> Result<Vec<QuatOrder>, OrderError> {
    let support = overorder_index_support(order);
    if support.is_empty() {
        return Ok(vec![order.clone()]);
    }
    let alg = &order.alg;
    let base = &order.lattice;
    let n: BigInt = support.iter().map(|&(p, e)| BigInt::from(p).pow(e)).product();
    let dual = dual_lattice(base, alg);
    let container = dual.intersect(&base.scale(&Rat::new(BigInt::one(), n)));
    let primes: Vec<u64> = support.iter().map(|&(p, _)| p).collect();
    let mut state = SearchState {
        visited: HashSet::new(),
        closure_cache: HashMap::new(),
        steps: 0,
        budget,
    };
    let found = closed_overorder_search(alg, base, &container, &primes, &mut state)?;
    let mut out = Vec::new();
    for lat in sort_lattices(found) {
        let o = QuatOrder::from_lattice_unchecked(alg.clone(), lat);
        assert!(o.is_maximal(), "direct search leaf is not maximal");
        out.push(o);
    }
    Ok(out)
}

/// Orbits of a set of orders under conjugation by the given elements.
/// Panics if conjugation by a generator leaves the set, so callers must
/// pass genuine normalizer representatives.
pub fn orbit_count(orders: &[QuatOrder], gens: &[Quat]) -> usize {
    let n = orders.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..n {
        let alg = &orders[i].alg;
        for g in gens {
            let image = conjugate_lattice(&orders[i].lattice, g, alg);
            let j = orders
                .iter()
                .position(|o| o.lattice == image)
                .expect("conjugation by a non-permuting element");
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri] = rj;
            }
        }
    }
    let mut roots: HashSet<usize> = HashSet::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        roots.insert(r);
    }
    roots.len()
}
