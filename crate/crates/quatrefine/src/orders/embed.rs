//! Optimal embeddings of CM orders into a quaternion order, counted up
//! to conjugation by the unit group.
//!
//! Every embedding of an order B ∈ 𝓑 lands on a maximal cyclic subgroup
//! C of O^×/O_F^×: the image of B^× spans a plane F(u), and optimality
//! means the image is exactly F(u) ∩ O.  Conversely a conjugacy class of
//! maximal cyclic subgroups determines B up to isomorphism, and carries
//! two inequivalent embeddings (an embedding and its conjugate) exactly
//! when C is its own normalizer; otherwise an inverting unit identifies
//! the pair.  Counting therefore reduces to finite group theory in
//! O^×/O_F^× plus lattice arithmetic to recognize which B each class
//! produces.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::cmorders::{CMOrderDescriptor, CmFieldTag};
use crate::quadfield::{FieldElem, FundUnitData, IdealF, PrimeIdealF, PrimeKind, Rat};
use crate::quatalg::{qadd, qscale, qzero, Quat, QuatAlgebra};

use super::lattice::{
    lattice_basis_quats, lattice_from_quats, mat_inverse, quat_to_rat_vec, QuatOrder, ZLattice,
};
use super::units::{unit_group, UnitError};

/// m(B, O, O^×) for each B in `bs`, in order.
pub fn optimal_embedding_counts(
    order: &QuatOrder,
    fu: &FundUnitData,
    bs: &[CMOrderDescriptor],
) -> Result<Vec<u64>, UnitError> {
    let ug = unit_group(order)?;
    let (mul, id) = class_table(&order.alg, &ug.reps);
    let mut counts = vec![0u64; bs.len()];
    for (gen, size, weight) in maximal_cyclic_classes(&mul, id) {
        let idx = identify_cm_order(order, fu, bs, &ug.reps[gen], size);
        counts[idx] += weight as u64;
    }
    Ok(counts)
}

/// (order, weight) of each conjugacy class of maximal cyclic subgroups
/// of O^×/O_F^×, sorted; weight 2 marks self-normalizing classes.
pub fn cyclic_class_profile(order: &QuatOrder) -> Result<Vec<(u32, u32)>, UnitError> {
    let ug = unit_group(order)?;
    let (mul, id) = class_table(&order.alg, &ug.reps);
    let mut out: Vec<(u32, u32)> = maximal_cyclic_classes(&mul, id)
        .into_iter()
        .map(|(_, size, weight)| (size as u32, weight))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Multiplication table of O^×/O_F^× on the indices of `reps`, plus the
/// index of the identity class.
fn class_table(alg: &QuatAlgebra, reps: &[Quat]) -> (Vec<Vec<usize>>, usize) {
    let n = reps.len();
    let inv: Vec<Quat> = reps.iter().map(|r| alg.inv(r)).collect();
    let class_of = |x: &Quat| -> usize {
        for k in 0..n {
            let z = alg.mul(x, &inv[k]);
            if z[1].is_zero() && z[2].is_zero() && z[3].is_zero() {
                return k;
            }
        }
        panic!("unit product escaped the class list");
    };
    let id = class_of(&alg.one());
    let mut mul = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in 0..n {
            mul[i][j] = class_of(&alg.mul(&reps[i], &reps[j]));
        }
    }
    (mul, id)
}

/// One (generator, order, weight) triple per conjugacy class of maximal
/// cyclic subgroups.
fn maximal_cyclic_classes(mul: &[Vec<usize>], id: usize) -> Vec<(usize, usize, u32)> {
    let n = mul.len();
    let inv_of = |x: usize| (0..n).find(|&y| mul[x][y] == id).unwrap();
    let mut cyclic: Vec<(BTreeSet<usize>, usize)> = Vec::new();
    for g in 0..n {
        if g == id {
            continue;
        }
        let mut s = BTreeSet::new();
        let mut x = g;
        while s.insert(x) {
            x = mul[x][g];
        }
        if !cyclic.iter().any(|(t, _)| *t == s) {
            cyclic.push((s, g));
        }
    }
    let maximal: Vec<(BTreeSet<usize>, usize)> = cyclic
        .iter()
        .filter(|(s, _)| !cyclic.iter().any(|(t, _)| t.len() > s.len() && s.is_subset(t)))
        .cloned()
        .collect();
    let mut seen: Vec<BTreeSet<usize>> = Vec::new();
    let mut out = Vec::new();
    for (s, g) in &maximal {
        if seen.contains(s) {
            continue;
        }
        let mut normalizer = 0usize;
        for v in 0..n {
            let vi = inv_of(v);
            let conj: BTreeSet<usize> = s.iter().map(|&x| mul[mul[v][x]][vi]).collect();
            if conj == *s {
                normalizer += 1;
            } else if !seen.contains(&conj) {
                seen.push(conj);
            }
        }
        let weight = if normalizer == s.len() { 2 } else { 1 };
        out.push((*g, s.len(), weight));
        seen.push(s.clone());
    }
    out
}

/// Index into `bs` of the order F(u) ∩ O, for a unit u whose class
/// generates a maximal cyclic subgroup of order `size`.
fn identify_cm_order(
    order: &QuatOrder,
    fu: &FundUnitData,
    bs: &[CMOrderDescriptor],
    u: &Quat,
    size: usize,
) -> usize {
    let d = fu.d;
    let bc = plane_intersection(order, u);
    let ok = integral_closure(&bc, &order.alg);
    let nf = bc.index_in(&ok).to_u64().unwrap();
    let tr = order.alg.tr(u);
    let nr = order.alg.nr(u);
    let delta = &(&tr * &tr) - &(&FieldElem::from_int(d, 4) * &nr);
    let cands: Vec<usize> = bs
        .iter()
        .enumerate()
        .filter(|(_, b)| {
            b.w as usize == size
                && conductor_norm(b) == nf
                && tag_matches(&delta, b.field_tag, fu)
        })
        .map(|(i, _)| i)
        .collect();
    assert!(!cands.is_empty(), "no CM order matches a unit at d = {d}");
    if cands.len() == 1 {
        return cands[0];
    }
    // Conjugate split primes give rows of equal norm; the conductor of
    // the right row annihilates O_K into the intersection order.
    let winners: Vec<usize> = cands
        .iter()
        .copied()
        .filter(|&i| annihilates(&bs[i].conductor, &ok, &bc, &order.alg))
        .collect();
    assert_eq!(winners.len(), 1, "conductor test must single out one row at d = {d}");
    winners[0]
}

fn conductor_norm(b: &CMOrderDescriptor) -> u64 {
    b.conductor.absolute_norm().to_integer().to_u64().unwrap()
}

/// Whether t² − 4n spans the same quadratic extension as the tag's δ.
fn tag_matches(delta: &FieldElem, tag: CmFieldTag, fu: &FundUnitData) -> bool {
    let d = fu.d;
    let delta0 = match tag {
        CmFieldTag::MinusOne => FieldElem::from_int(d, -1),
        CmFieldTag::MinusThree => FieldElem::from_int(d, -3),
        CmFieldTag::MinusEps => &FieldElem::zero(d) - &fu.eps,
    };
    (delta * &delta0).sqrt().is_some()
}

/// 𝔠 O_K ⊆ B, tested on module generators.
fn annihilates(c: &IdealF, ok: &ZLattice, b: &ZLattice, alg: &QuatAlgebra) -> bool {
    let d = alg.d;
    for g in ideal_generators(c, d) {
        for y in lattice_basis_quats(d, ok) {
            if !b.contains_vec(&quat_to_rat_vec(&qscale(&g, &y))) {
                return false;
            }
        }
    }
    true
}

/// Module generators of an integral ideal: its absolute norm together
/// with a product of local generators matched to the exponents.
fn ideal_generators(c: &IdealF, d: u64) -> Vec<FieldElem> {
    if c.is_one() {
        return vec![FieldElem::one(d)];
    }
    let n = c.absolute_norm();
    let mut alpha = FieldElem::one(d);
    for p in c.support() {
        let e = c.valuation_at(&p);
        let pi = local_generator(&p);
        for _ in 0..e {
            alpha = &alpha * &pi;
        }
    }
    vec![FieldElem::from_rat(d, &n), alpha]
}

/// An element of 𝔭 with valuation exactly one there and zero at the
/// conjugate prime.
fn local_generator(pr: &PrimeIdealF) -> FieldElem {
    let d = pr.d;
    match &pr.kind {
        PrimeKind::Split { root } => {
            // ω − root, with ω = (1 + √d)/2 or √d by residue class of d.
            let r = root.to_i64().unwrap();
            if d % 4 == 1 {
                FieldElem::from_parts(d, 1 - 2 * r, 1, 2)
            } else {
                FieldElem::from_parts(d, -r, 1, 1)
            }
        }
        PrimeKind::Inert => FieldElem::from_int(d, pr.p as i64),
        PrimeKind::Ramified => pr.uniformizer(),
    }
}

/// O ∩ F(u) as a rank-4 lattice.
fn plane_intersection(order: &QuatOrder, u: &Quat) -> ZLattice {
    let d = order.alg.d;
    let one = order.alg.one();
    let sd = FieldElem::sqrt_d(d);
    let quats = [one.clone(), qscale(&sd, &one), u.clone(), qscale(&sd, u)];
    let rows: Vec<Vec<Rat>> = quats.iter().map(quat_to_rat_vec).collect();
    let cols = pivot_columns(&rows);
    assert_eq!(cols.len(), 4, "plane basis must be independent");
    let sub: Vec<Vec<Rat>> = rows
        .iter()
        .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
        .collect();
    // Coordinates of an order element in the plane basis have denominator
    // dividing den(P⁻¹)·den(O), so refining by that factor makes the
    // lattice intersection capture the whole Q-subspace intersection.
    let mut den = BigInt::one();
    for r in &mat_inverse(&sub) {
        for x in r {
            den = den.lcm(x.denom());
        }
    }
    let mut oden = BigInt::one();
    for r in order.lattice.rat_rows() {
        for x in r {
            oden = oden.lcm(x.denom());
        }
    }
    den *= oden;
    let plane = ZLattice::from_rat_rows(8, &rows);
    let fine = plane.scale(&Rat::new(BigInt::one(), den));
    order.lattice.intersect(&fine)
}

/// Integral closure of a rank-4 order lattice inside its own plane.
/// The quotient has exponent dividing 6, so saturating at denominators
/// 2 and 3 until stable reaches the maximal order.
fn integral_closure(lat4: &ZLattice, alg: &QuatAlgebra) -> ZLattice {
    let d = alg.d;
    let mut lat = lat4.clone();
    loop {
        let mut grew = false;
        for nden in [2i64, 3] {
            let basis = lattice_basis_quats(d, &lat);
            let mut found: Vec<Quat> = Vec::new();
            for mask in 1..(nden as u64).pow(4) {
                let mut x = qzero(d);
                let mut m = mask;
                for b in &basis {
                    let c = (m % nden as u64) as i64;
                    m /= nden as u64;
                    if c != 0 {
                        let ce = FieldElem::from_parts(d, c, 0, nden);
                        x = qadd(&x, &qscale(&ce, b));
                    }
                }
                if alg.tr(&x).is_integral()
                    && alg.nr(&x).is_integral()
                    && !lat.contains_vec(&quat_to_rat_vec(&x))
                {
                    found.push(x);
                }
            }
            if !found.is_empty() {
                let mut bigger = lat.clone();
                bigger = bigger.add(&lattice_from_quats(d, &found));
                lat = bigger;
                grew = true;
            }
        }
        if !grew {
            return lat;
        }
    }
}

fn pivot_columns(rows: &[Vec<Rat>]) -> Vec<usize> {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let (nr, nc) = (m.len(), m[0].len());
    let mut piv = Vec::new();
    let mut r = 0usize;
    for c in 0..nc {
        if r == nr {
            break;
        }
        if let Some(k) = (r..nr).find(|&k| !m[k][c].is_zero()) {
            m.swap(r, k);
            let lead = m[r][c].clone();
            for cc in c..nc {
                let t = &m[r][cc] / &lead;
                m[r][cc] = t;
            }
            for k in 0..nr {
                if k != r && !m[k][c].is_zero() {
                    let f = m[k][c].clone();
                    for cc in c..nc {
                        let t = &m[k][cc] - &(&f * &m[r][cc]);
                        m[k][cc] = t;
                    }
                }
            }
            piv.push(c);
            r += 1;
        }
    }
    piv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmorders::enumerate_b;
    use crate::orders::catalog::{explicit_maximal_order, CatalogCase};
    use crate::quadfield::fundamental_unit;
    use crate::quatalg::standard_algebra;

    fn counts_for(case: CatalogCase, d: u64) -> Vec<u64> {
        let fu = fundamental_unit(d).unwrap();
        let alg = standard_algebra(case.standard_tag(), &fu).unwrap();
        let order = explicit_maximal_order(case, &fu, &alg).unwrap();
        let bs = enumerate_b(&fu).unwrap();
        optimal_embedding_counts(&order, &fu, &bs).unwrap()
    }

    // 𝓑 at d ∈ {7, 11} lists, in order: O_{K_1}, B_{1,2}, O_F[√−1],
    // O_{K_2}, O_F[√−ε].

    #[test]
    fn embedding_numbers_into_the_big_three_at_d_7() {
        assert_eq!(counts_for(CatalogCase::HurwitzAugmented, 7), vec![0, 1, 0, 1, 1]);
        assert_eq!(counts_for(CatalogCase::QuarticPivot, 7), vec![1, 0, 1, 0, 1]);
        // 3 splits and 7 ≡ 7 (mod 24): the hexagonal order is the plain
        // triadic one, and its reflections all generate F(√−ε).
        assert_eq!(counts_for(CatalogCase::TriadicSplitPlain, 7), vec![0, 0, 0, 1, 2]);
    }

    #[test]
    fn embedding_numbers_into_the_big_three_at_d_11() {
        assert_eq!(counts_for(CatalogCase::HurwitzAugmented, 11), vec![0, 1, 0, 1, 1]);
        assert_eq!(counts_for(CatalogCase::QuarticPivot, 11), vec![1, 0, 1, 0, 1]);
        // 3 is inert, so the hexagonal order carries D3† and its
        // reflections generate F(√−1) instead.
        assert_eq!(counts_for(CatalogCase::HexagonalInert, 11), vec![0, 0, 2, 1, 0]);
    }

    #[test]
    fn class_profiles_of_the_three_unit_groups() {
        let fu = fundamental_unit(7).unwrap();
        let profile = |case: CatalogCase| {
            let alg = standard_algebra(case.standard_tag(), &fu).unwrap();
            let order = explicit_maximal_order(case, &fu, &alg).unwrap();
            cyclic_class_profile(&order).unwrap()
        };
        // S4: transpositions, three-cycles, four-cycles; none self-normalizing.
        assert_eq!(profile(CatalogCase::HurwitzAugmented), vec![(2, 1), (3, 1), (4, 1)]);
        // D4: two reflection classes and the rotation; none self-normalizing.
        assert_eq!(profile(CatalogCase::QuarticPivot), vec![(2, 1), (2, 1), (4, 1)]);
        // D3: the reflection class is its own normalizer.
        assert_eq!(profile(CatalogCase::TriadicSplitPlain), vec![(2, 2), (3, 1)]);
    }
}
