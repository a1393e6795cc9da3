//! Unit groups of totally definite quaternion orders.
//!
//! A unit of reduced norm 1 is a lattice vector of squared length 4 for
//! the form Tr_ℚ(Tr_red(x x̄)); a unit of reduced norm ε is a vector of
//! squared length 4 for the ε⁻¹-twisted form. Both forms are positive
//! definite, so exact lattice reduction plus exact Fincke-Pohst
//! enumeration finds every unit. The quotient O^×/O_F^× is then built
//! from shell representatives and classified by its order spectrum.

use super::lattice::{QuatOrder, ZLattice};
use crate::quadfield::unit::fundamental_unit;
use crate::quadfield::{FieldElem, Rat};
use crate::quatalg::{qscale, Quat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Isomorphism type of O^×/O_F^×. The daggered variants split the
/// dihedral types by whether every involution lifts to a unit of
/// reduced norm 1 (†) or some involution only lifts with norm ε (‡).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupTag {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C12,
    D2Dag,
    D2Ddag,
    D3Dag,
    D3Ddag,
    D4,
    D5,
    D6,
    D12,
    A4,
    S4,
    A5,
}

impl GroupTag {
    pub fn order(self) -> u32 {
        match self {
            GroupTag::C1 => 1,
            GroupTag::C2 => 2,
            GroupTag::C3 => 3,
            GroupTag::C4 => 4,
            GroupTag::C5 => 5,
            GroupTag::C6 => 6,
            GroupTag::C12 => 12,
            GroupTag::D2Dag | GroupTag::D2Ddag => 4,
            GroupTag::D3Dag | GroupTag::D3Ddag => 6,
            GroupTag::D4 => 8,
            GroupTag::D5 => 10,
            GroupTag::D6 => 12,
            GroupTag::D12 => 24,
            GroupTag::A4 => 12,
            GroupTag::S4 => 24,
            GroupTag::A5 => 60,
        }
    }

    pub fn is_cyclic(self) -> bool {
        matches!(
            self,
            GroupTag::C1
                | GroupTag::C2
                | GroupTag::C3
                | GroupTag::C4
                | GroupTag::C5
                | GroupTag::C6
                | GroupTag::C12
        )
    }

    pub const ALL: [GroupTag; 18] = [
        GroupTag::C1,
        GroupTag::C2,
        GroupTag::C3,
        GroupTag::C4,
        GroupTag::C5,
        GroupTag::C6,
        GroupTag::C12,
        GroupTag::D2Dag,
        GroupTag::D2Ddag,
        GroupTag::D3Dag,
        GroupTag::D3Ddag,
        GroupTag::D4,
        GroupTag::D5,
        GroupTag::D6,
        GroupTag::D12,
        GroupTag::A4,
        GroupTag::S4,
        GroupTag::A5,
    ];
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupTag::C1 => "C1",
            GroupTag::C2 => "C2",
            GroupTag::C3 => "C3",
            GroupTag::C4 => "C4",
            GroupTag::C5 => "C5",
            GroupTag::C6 => "C6",
            GroupTag::C12 => "C12",
            GroupTag::D2Dag => "D2†",
            GroupTag::D2Ddag => "D2‡",
            GroupTag::D3Dag => "D3†",
            GroupTag::D3Ddag => "D3‡",
            GroupTag::D4 => "D4",
            GroupTag::D5 => "D5",
            GroupTag::D6 => "D6",
            GroupTag::D12 => "D12",
            GroupTag::A4 => "A4",
            GroupTag::S4 => "S4",
            GroupTag::A5 => "A5",
        };
        f.write_str(s)
    }
}

impl FromStr for GroupTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GroupTag::ALL
            .iter()
            .find(|t| t.to_string() == s)
            .copied()
            .ok_or_else(|| format!("unknown group tag {s:?}"))
    }
}

#[derive(Debug, Error)]
pub enum UnitError {
    #[error("budget-exceeded (lower bound report): {found} unit classes found within {budget} enumeration nodes")]
    BudgetExceeded { found: usize, budget: u64 },
}

pub const DEFAULT_UNIT_BUDGET: u64 = 10_000_000;

fn unit_budget() -> u64 {
    std::env::var("QUATREFINE_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_UNIT_BUDGET)
}

/// Integer Gram matrix of the order basis under
/// x, y ↦ Tr_ℚ(t · Tr_red(x ȳ)) for a totally positive twist t.
fn twisted_gram(order: &QuatOrder, twist: Option<&FieldElem>) -> Vec<Vec<BigInt>> {
    let alg = &order.alg;
    let basis = order.basis_quats();
    let n = basis.len();
    let mut g = vec![vec![BigInt::zero(); n]; n];
    for s in 0..n {
        for t in s..n {
            let mut tr = alg.tr(&alg.mul(&basis[s], &alg.conj(&basis[t])));
            if let Some(w) = twist {
                tr = w * &tr;
            }
            let q = tr.trace();
            assert!(q.is_integer(), "trace pairing not integral on order basis");
            g[s][t] = q.to_integer();
            g[t][s] = g[s][t].clone();
        }
    }
    g
}

fn form_ip(g: &[Vec<BigInt>], u: &[BigInt], v: &[BigInt]) -> BigInt {
    let n = g.len();
    let mut acc = BigInt::zero();
    for s in 0..n {
        if u[s].is_zero() {
            continue;
        }
        for t in 0..n {
            if !v[t].is_zero() {
                acc += &u[s] * &v[t] * &g[s][t];
            }
        }
    }
    acc
}

/// Cholesky-style Gram-Schmidt data from a basis Gram matrix:
/// μ coefficients and squared star-norms, all rational and exact.
fn gs_data(gram: &[Vec<Rat>]) -> (Vec<Vec<Rat>>, Vec<Rat>) {
    let n = gram.len();
    let mut mu = vec![vec![Rat::zero(); n]; n];
    let mut r = vec![vec![Rat::zero(); n]; n];
    let mut b = vec![Rat::zero(); n];
    for i in 0..n {
        for j in 0..=i {
            let mut v = gram[i][j].clone();
            for k in 0..j {
                let t = &v - &(&mu[j][k] * &r[i][k]);
                v = t;
            }
            r[i][j] = v.clone();
            if j < i {
                mu[i][j] = &v / &b[j];
            } else {
                assert!(v.is_positive(), "form is not positive definite");
                b[i] = v;
            }
        }
    }
    (mu, b)
}

fn basis_gram(g0: &[Vec<BigInt>], basis: &[Vec<BigInt>]) -> Vec<Vec<Rat>> {
    let n = basis.len();
    let mut g = vec![vec![Rat::zero(); n]; n];
    for s in 0..n {
        for t in 0..n {
            g[s][t] = Rat::from_integer(form_ip(g0, &basis[s], &basis[t]));
        }
    }
    g
}

/// Exact LLL (δ = 3/4) on ℤ^n under the integral form g0. Returns the
/// reduced basis as integer coordinate rows.
fn lll_reduce(g0: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = g0.len();
    let mut basis: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let delta = Rat::new(BigInt::from(3), BigInt::from(4));
    let (mut mu, mut b) = gs_data(&basis_gram(g0, &basis));
    let mut k = 1usize;
    while k < n {
        for j in (0..k).rev() {
            let q = mu[k][j].round().to_integer();
            if !q.is_zero() {
                for c in 0..n {
                    let t = &basis[k][c] - &q * &basis[j][c];
                    basis[k][c] = t;
                }
                let refreshed = gs_data(&basis_gram(g0, &basis));
                mu = refreshed.0;
                b = refreshed.1;
            }
        }
        let lhs = b[k].clone();
        let rhs = (&delta - &(&mu[k][k - 1] * &mu[k][k - 1])) * &b[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k - 1, k);
            let refreshed = gs_data(&basis_gram(g0, &basis));
            mu = refreshed.0;
            b = refreshed.1;
            k = std::cmp::max(1, k - 1);
        }
    }
    basis
}

/// Largest integer c with c + s ≤ √r and smallest with c + s ≥ −√r,
/// computed without floating point.
fn integer_range(s: &Rat, r: &Rat) -> Option<(BigInt, BigInt)> {
    if r.is_negative() {
        return None;
    }
    let sqrt_floor = {
        let m = r.numer() * r.denom();
        Rat::new(m.sqrt(), r.denom().clone())
    };
    let le_top = |c: &BigInt| {
        let e = Rat::from_integer(c.clone()) + s;
        !e.is_positive() || &(&e * &e) <= r
    };
    let ge_bottom = |c: &BigInt| {
        let e = Rat::from_integer(c.clone()) + s;
        !e.is_negative() || &(&e * &e) <= r
    };
    let h0 = (&sqrt_floor - s).floor().to_integer();
    let hi = if le_top(&(&h0 + 1)) { &h0 + 1 } else { h0 };
    let c0 = (-&sqrt_floor - s).ceil().to_integer();
    let lo = if ge_bottom(&(&c0 - 1)) { &c0 - 1 } else { c0 };
    if lo > hi {
        None
    } else {
        Some((lo, hi))
    }
}

struct FpSearch<'a> {
    mu: &'a [Vec<Rat>],
    b: &'a [Rat],
    coords: Vec<BigInt>,
    nodes: u64,
    budget: u64,
    out: Vec<Vec<BigInt>>,
}

impl FpSearch<'_> {
    fn descend(&mut self, level: isize, remaining: Rat) -> Result<(), ()> {
        if level < 0 {
            if remaining.is_zero() {
                self.out.push(self.coords.clone());
            }
            return Ok(());
        }
        let i = level as usize;
        let n = self.coords.len();
        let mut s = Rat::zero();
        for l in i + 1..n {
            if !self.coords[l].is_zero() {
                let t = &s + &(&self.mu[l][i] * Rat::from_integer(self.coords[l].clone()));
                s = t;
            }
        }
        let bound = &remaining / &self.b[i];
        let Some((lo, hi)) = integer_range(&s, &bound) else {
            return Ok(());
        };
        let mut c = lo;
        while c <= hi {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(());
            }
            let e = Rat::from_integer(c.clone()) + &s;
            let used = &(&e * &e) * &self.b[i];
            self.coords[i] = c.clone();
            self.descend(level - 1, &remaining - &used)?;
            c += 1;
        }
        self.coords[i] = BigInt::zero();
        Ok(())
    }
}

/// All integer vectors with q(x) exactly `target`; Err carries the
/// partial list found before the node budget ran out.
fn shell_vectors(
    g0: &[Vec<BigInt>],
    target: i64,
    budget: u64,
    nodes_used: &mut u64,
) -> Result<Vec<Vec<BigInt>>, Vec<Vec<BigInt>>> {
    let n = g0.len();
    let reduced = lll_reduce(g0);
    let (mu, b) = gs_data(&basis_gram(g0, &reduced));
    let mut search = FpSearch {
        mu: &mu,
        b: &b,
        coords: vec![BigInt::zero(); n],
        nodes: *nodes_used,
        budget,
        out: Vec::new(),
    };
    let status = search.descend(n as isize - 1, Rat::from_integer(BigInt::from(target)));
    *nodes_used = search.nodes;
    let mapped: Vec<Vec<BigInt>> = search
        .out
        .iter()
        .map(|c| {
            (0..n)
                .map(|col| {
                    let mut acc = BigInt::zero();
                    for (ci, row) in c.iter().zip(&reduced) {
                        acc += ci * &row[col];
                    }
                    acc
                })
                .collect()
        })
        .collect();
    match status {
        Ok(()) => Ok(mapped),
        Err(()) => Err(mapped),
    }
}

fn canonical_sign(mut v: Vec<BigInt>) -> Vec<BigInt> {
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in &mut v {
                *x = -&*x;
            }
        }
    }
    v
}

/// The unit group O^×/O_F^× with one representative per class.
#[derive(Debug, Clone)]
pub struct UnitGroup {
    pub tag: GroupTag,
    /// One quaternion per class; reduced norms lie in {1, ε}.
    pub reps: Vec<Quat>,
    /// [O^× : O_F^× · O^1] ∈ {1, 2}; 2 exactly when some unit has
    /// reduced norm ε.
    pub vigneras: u8,
    /// Classes whose representative has reduced norm ε.
    pub eps_classes: usize,
}

fn coords_to_quat(order: &QuatOrder, coords: &[BigInt]) -> Quat {
    let basis = order.basis_quats();
    let d = order.alg.d;
    let mut acc = crate::quatalg::qzero(d);
    for (c, b) in coords.iter().zip(&basis) {
        if !c.is_zero() {
            let ce = FieldElem::from_rat_pair(d, &Rat::from_integer(c.clone()), &Rat::zero());
            acc = crate::quatalg::qadd(&acc, &qscale(&ce, b));
        }
    }
    acc
}

fn quat_to_coords(order: &QuatOrder, x: &Quat) -> Vec<BigInt> {
    order
        .lattice
        .coords_of(&super::lattice::quat_to_rat_vec(x))
        .expect("unit product escaped the order")
}

pub fn unit_group(order: &QuatOrder) -> Result<UnitGroup, UnitError> {
    unit_group_with_budget(order, unit_budget())
}

pub fn unit_group_with_budget(order: &QuatOrder, budget: u64) -> Result<UnitGroup, UnitError> {
    let alg = &order.alg;
    assert!(
        alg.is_totally_definite(),
        "unit enumeration needs a totally definite algebra"
    );
    let fu = fundamental_unit(alg.d).expect("valid squarefree d");
    let eps = fu.eps.clone();
    let eps_inv = eps.inv();

    let mut nodes = 0u64;
    let g1 = twisted_gram(order, None);
    let norm_one = shell_vectors(&g1, 4, budget, &mut nodes);
    let (norm_one, mut truncated) = match norm_one {
        Ok(v) => (v, false),
        Err(v) => (v, true),
    };
    let mut norm_eps: Vec<Vec<BigInt>> = Vec::new();
    if fu.norm_sign == 1 && !truncated {
        let geps = twisted_gram(order, Some(&eps_inv));
        match shell_vectors(&geps, 4, budget, &mut nodes) {
            Ok(v) => norm_eps = v,
            Err(v) => {
                norm_eps = v;
                truncated = true;
            }
        }
    }

    let mut index: HashMap<Vec<BigInt>, usize> = HashMap::new();
    let mut reps: Vec<Quat> = Vec::new();
    let mut rep_is_eps: Vec<bool> = Vec::new();
    for (vecs, is_eps) in [(&norm_one, false), (&norm_eps, true)] {
        for v in vecs.iter() {
            let key = canonical_sign(v.clone());
            if !index.contains_key(&key) {
                index.insert(key.clone(), reps.len());
                reps.push(coords_to_quat(order, &key));
                rep_is_eps.push(is_eps);
            }
        }
    }
    if truncated {
        return Err(UnitError::BudgetExceeded { found: reps.len(), budget });
    }

    let eps_sq = &eps * &eps;
    let one = FieldElem::one(alg.d);
    let class_of = |x: &Quat| -> usize {
        let nr = alg.nr(x);
        let y = if nr == eps_sq {
            qscale(&eps_inv, x)
        } else {
            assert!(nr == one || nr == eps, "unexpected unit norm");
            x.clone()
        };
        let key = canonical_sign(quat_to_coords(order, &y));
        *index.get(&key).expect("product class missing from shell")
    };
    let mul_class = |a: usize, b: usize| -> usize { class_of(&alg.mul(&reps[a], &reps[b])) };

    let id = class_of(&alg.one());
    let n = reps.len();
    let mut orders = vec![0u32; n];
    for i in 0..n {
        let mut cur = i;
        let mut k = 1u32;
        while cur != id {
            cur = mul_class(cur, i);
            k += 1;
            assert!(k <= 60, "element order out of range");
        }
        orders[i] = k;
    }
    let count = |m: u32| orders.iter().filter(|&&o| o == m).count();
    let (n2, n3, n4, n5) = (count(2), count(3), count(4), count(5));
    let some_eps_involution = (0..n).any(|i| orders[i] == 2 && rep_is_eps[i]);
    let tag = match (n, n2, n3, n4, n5) {
        (1, ..) => GroupTag::C1,
        (2, ..) => GroupTag::C2,
        (3, ..) => GroupTag::C3,
        (4, 1, ..) => GroupTag::C4,
        (4, 3, ..) => {
            if some_eps_involution {
                GroupTag::D2Ddag
            } else {
                GroupTag::D2Dag
            }
        }
        (5, ..) => GroupTag::C5,
        (6, 1, ..) => GroupTag::C6,
        (6, 3, ..) => {
            if some_eps_involution {
                GroupTag::D3Ddag
            } else {
                GroupTag::D3Dag
            }
        }
        (8, 5, 0, 2, _) => GroupTag::D4,
        (10, 5, 0, 0, 4) => GroupTag::D5,
        (12, 1, ..) => GroupTag::C12,
        (12, 3, 8, ..) => GroupTag::A4,
        (12, 7, ..) => GroupTag::D6,
        (24, 9, 8, 6, _) => GroupTag::S4,
        (24, 13, ..) => GroupTag::D12,
        (60, 15, 20, 0, 24) => GroupTag::A5,
        _ => panic!("unrecognized unit group signature ({n}, {n2}, {n3}, {n4}, {n5})"),
    };
    order.set_group_tag(tag);
    let eps_classes = rep_is_eps.iter().filter(|&&b| b).count();
    Ok(UnitGroup {
        tag,
        reps,
        vigneras: if eps_classes > 0 { 2 } else { 1 },
        eps_classes,
    })
}

/// Convenience wrapper used by invariants: |O^×/O_F^×|.
pub fn reduced_unit_order(order: &QuatOrder) -> usize {
    unit_group(order).expect("unit budget").reps.len()
}

#[allow(dead_code)]
fn debug_lattice(_l: &ZLattice) {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::lattice::make_order;
    use crate::quatalg::{qadd, standard_algebra, QuatAlgebra, StandardTag};

    fn half(d: u64) -> FieldElem {
        FieldElem::from_parts(d, 1, 0, 2)
    }

    #[test]
    fn klein_four_groups_of_both_kinds() {
        // O_F[i,j] in (−1,−1) at d = 7: all involutions have norm 1.
        let alg = QuatAlgebra::from_integers(7, -1, -1);
        let o = make_order(&[alg.one(), alg.gen_i(), alg.gen_j(), alg.gen_k()], &alg).unwrap();
        let g = unit_group(&o).unwrap();
        assert_eq!(g.tag, GroupTag::D2Dag);
        assert_eq!(g.reps.len(), 4);
        assert_eq!(g.vigneras, 1);
        assert_eq!(o.group_tag_cached(), Some(GroupTag::D2Dag));

        // O_F[i,j] in (−1,−ε): j and k only lift with norm ε.
        let fu = fundamental_unit(7).unwrap();
        let algb = standard_algebra(StandardTag::B, &fu).unwrap();
        let ob =
            make_order(&[algb.one(), algb.gen_i(), algb.gen_j(), algb.gen_k()], &algb).unwrap();
        let gb = unit_group(&ob).unwrap();
        assert_eq!(gb.tag, GroupTag::D2Ddag);
        assert_eq!(gb.vigneras, 2);
        assert_eq!(gb.eps_classes, 2);
    }

    #[test]
    fn triangle_groups_of_both_kinds() {
        let fu = fundamental_unit(7).unwrap();
        for (tag, expect) in [(StandardTag::C, GroupTag::D3Dag), (StandardTag::D, GroupTag::D3Ddag)]
        {
            let alg = standard_algebra(tag, &fu).unwrap();
            let o = make_order(
                &[
                    alg.one(),
                    alg.gen_i(),
                    qscale(&half(7), &qadd(&alg.one(), &alg.gen_j())),
                    qscale(&half(7), &qadd(&alg.gen_i(), &alg.gen_k())),
                ],
                &alg,
            )
            .unwrap();
            let g = unit_group(&o).unwrap();
            assert_eq!(g.tag, expect);
            assert_eq!(g.reps.len(), 6);
        }
    }

    #[test]
    fn hurwitz_pattern_gives_a4_then_s4() {
        let fu = fundamental_unit(7).unwrap();
        let alg = standard_algebra(StandardTag::A, &fu).unwrap();
        let o12 = make_order(&[alg.one(), alg.gen_i(), alg.gen_j(), alg.xi()], &alg).unwrap();
        let g12 = unit_group(&o12).unwrap();
        assert_eq!(g12.tag, GroupTag::A4);
        assert_eq!(g12.reps.len(), 12);
        assert_eq!(g12.vigneras, 1);

        let theta = fu.theta.clone().unwrap();
        let sq_i = qscale(&theta, &qadd(&alg.one(), &alg.gen_i()));
        let sq_j = qscale(&theta, &qadd(&alg.one(), &alg.gen_j()));
        let o24 = make_order(&[alg.one(), sq_i, sq_j.clone(), alg.xi()], &alg).unwrap();
        let g24 = unit_group(&o24).unwrap();
        assert_eq!(g24.tag, GroupTag::S4);
        assert_eq!(g24.reps.len(), 24);
        assert_eq!(g24.vigneras, 2);

        let i_sq_j = alg.mul(&alg.gen_i(), &sq_j);
        let o4 = make_order(&[alg.one(), alg.gen_i(), sq_j, i_sq_j], &alg).unwrap();
        let g4 = unit_group(&o4).unwrap();
        assert_eq!(g4.tag, GroupTag::D4);
        assert_eq!(g4.reps.len(), 8);
    }

    #[test]
    fn hexagonal_group_when_three_eps_is_square() {
        // d = 33: ε = 3ς², the order O_{F(j)} + iO_{F(j)} in (−1,−3) has D6.
        let fu = fundamental_unit(33).unwrap();
        assert!(fu.three_eps_square);
        let sigma = fu.sigma.clone().unwrap();
        let alg = standard_algebra(StandardTag::C, &fu).unwrap();
        let s = qscale(
            &(&sigma * &half(33)),
            &qadd(&alg.scalar(&FieldElem::from_int(33, 3)), &alg.gen_j()),
        );
        let is = alg.mul(&alg.gen_i(), &s);
        let o6 = make_order(&[alg.one(), alg.gen_i(), s, is], &alg).unwrap();
        let g = unit_group(&o6).unwrap();
        assert_eq!(g.tag, GroupTag::D6);
        assert_eq!(g.reps.len(), 12);
        assert_eq!(g.vigneras, 2);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let alg = QuatAlgebra::from_integers(7, -1, -1);
        let o = make_order(&[alg.one(), alg.gen_i(), alg.gen_j(), alg.gen_k()], &alg).unwrap();
        let err = unit_group_with_budget(&o, 5).unwrap_err();
        assert!(err.to_string().contains("budget-exceeded (lower bound report)"));
    }
}
