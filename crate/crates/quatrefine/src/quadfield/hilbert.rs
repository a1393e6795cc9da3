//! Local Hilbert symbols of F and the splitting symbol of quadratic
//! extensions K/F, all in exact arithmetic.
//!
//! Odd primes are tame. The dyadic primes of residue degree or
//! ramification index 2 are decided by a digit search for primitive
//! solutions of s² − a·t² = c, certified by Hensel's lemma; the split
//! dyadic case is the classical formula over Q₂.

use super::elem::FieldElem;
use super::ideal::{legendre, PrimeIdealF, PrimeKind};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// Hilbert symbol (a, b) at the archimedean place (0 or 1).
pub fn hilbert_symbol_inf(a: &FieldElem, b: &FieldElem, place: usize) -> i32 {
    if a.embedding_sign(place) < 0 && b.embedding_sign(place) < 0 {
        -1
    } else {
        1
    }
}

/// Hilbert symbol (a, b)_𝔭 for nonzero a, b.
pub fn hilbert_symbol_at(a: &FieldElem, b: &FieldElem, pr: &PrimeIdealF) -> i32 {
    assert!(!a.is_zero() && !b.is_zero());
    if pr.p != 2 {
        return tame_symbol(a, b, pr);
    }
    match pr.kind {
        PrimeKind::Split { .. } => split_dyadic_symbol(a, b, pr),
        _ => dyadic_symbol(a, b, pr),
    }
}

/// (a, b) = χ((−1)^{v(a)v(b)} ā^{v(b)} b̄^{v(a)}) with ā, b̄ the
/// uniformizer-stripped unit parts and χ the residue quadratic character.
fn tame_symbol(a: &FieldElem, b: &FieldElem, pr: &PrimeIdealF) -> i32 {
    let (va, ua) = valuation_and_unit(a, pr);
    let (vb, ub) = valuation_and_unit(b, pr);
    let mut s = 1;
    if va % 2 != 0 && vb % 2 != 0 {
        s *= pr.unit_residue_character(&FieldElem::from_int(pr.d, -1));
    }
    if vb % 2 != 0 {
        s *= pr.unit_residue_character(&ua);
    }
    if va % 2 != 0 {
        s *= pr.unit_residue_character(&ub);
    }
    s
}

fn valuation_and_unit(x: &FieldElem, pr: &PrimeIdealF) -> (i64, FieldElem) {
    let v = pr.valuation(x);
    let pi = pr.uniformizer();
    let u = if v >= 0 {
        x / &pi.pow(v as u32)
    } else {
        x * &pi.pow((-v) as u32)
    };
    debug_assert_eq!(pr.valuation(&u), 0);
    (v, u)
}

/// Classical formula over Q₂ at a split dyadic prime:
/// (2^α u, 2^β w) = (−1)^{ε(u)ε(w) + α·ω₂(w) + β·ω₂(u)}.
fn split_dyadic_symbol(a: &FieldElem, b: &FieldElem, pr: &PrimeIdealF) -> i32 {
    let part = |x: &FieldElem| {
        let (v, u) = valuation_and_unit(x, pr);
        let u8 = pr.embed_mod(&u, 3).to_u8().unwrap();
        let eps = (u8 % 4 == 3) as i64;
        let om = matches!(u8 % 8, 3 | 5) as i64;
        (v, eps, om)
    };
    let (va, ea, oa) = part(a);
    let (vb, eb, ob) = part(b);
    if (ea * eb + va * ob + vb * oa) % 2 == 0 { 1 } else { -1 }
}

/// Degree-2 dyadic symbol: +1 iff a is a local square or ⟨1, −a⟩
/// represents b over F_𝔭.
fn dyadic_symbol(a: &FieldElem, b: &FieldElem, pr: &PrimeIdealF) -> i32 {
    let a = normalized_to_low_valuation(a, pr);
    let b = normalized_to_low_valuation(b, pr);
    if is_local_square(&a, pr) || is_local_square(&b, pr) {
        return 1;
    }
    let e = pr.ramification_index() as i64;
    let pi = pr.uniformizer();
    for m in 0..=(e + 1) {
        let c = &b * &pi.pow(2 * m as u32);
        if represents(&a, &c, pr) {
            return 1;
        }
    }
    -1
}

/// Multiply by an even uniformizer power so that v(x) ∈ {0, 1};
/// the symbol is invariant under square factors.
fn normalized_to_low_valuation(x: &FieldElem, pr: &PrimeIdealF) -> FieldElem {
    let v = pr.valuation(x);
    let shift = 2 * (v.div_euclid(2));
    let pi = pr.uniformizer();
    if shift >= 0 {
        x / &pi.pow(shift as u32)
    } else {
        x * &pi.pow((-shift) as u32)
    }
}

/// Whether x ∈ F_𝔭^×². A unit u is a square iff u ≡ x² mod 𝔭^{2e+1}
/// for some x; e = v_𝔭(2) at dyadic primes, and odd primes reduce to the
/// residue character.
pub fn is_local_square(x: &FieldElem, pr: &PrimeIdealF) -> bool {
    let v = pr.valuation(x);
    if v % 2 != 0 {
        return false;
    }
    let u = normalized_to_low_valuation(x, pr);
    if pr.p != 2 {
        return pr.unit_residue_character(&u) == 1;
    }
    match pr.kind {
        PrimeKind::Split { .. } => pr.embed_mod(&u, 3).to_u8().unwrap() % 8 == 1,
        _ => {
            let e = pr.ramification_index() as i64;
            residue_reps(pr, (e + 1) as u32)
                .iter()
                .any(|r| unit_difference_valuation(&u, r, pr) >= 2 * e + 1)
        }
    }
}

fn unit_difference_valuation(u: &FieldElem, r: &FieldElem, pr: &PrimeIdealF) -> i64 {
    let diff = u - &(r * r);
    if diff.is_zero() { i64::MAX / 4 } else { pr.valuation(&diff) }
}

/// Representatives of O_F/𝔭^k at a dyadic prime.
fn residue_reps(pr: &PrimeIdealF, k: u32) -> Vec<FieldElem> {
    let d = pr.d;
    match pr.kind {
        PrimeKind::Inert => {
            let m = 1u64 << k;
            let mut out = Vec::with_capacity((m * m) as usize);
            for a in 0..m {
                for b in 0..m {
                    out.push(FieldElem::from_omega(d, &BigInt::from(a), &BigInt::from(b)));
                }
            }
            out
        }
        PrimeKind::Ramified => {
            let pi = pr.uniformizer();
            let mut out = vec![FieldElem::zero(d)];
            for i in 0..k {
                let step = pi.pow(i);
                out = out
                    .iter()
                    .flat_map(|x| [x.clone(), x + &step])
                    .collect();
            }
            out
        }
        PrimeKind::Split { .. } => (0..(1u64 << k))
            .map(|n| FieldElem::from_int(d, n as i64))
            .collect(),
    }
}

/// Digit DFS for a primitive integral solution of s² − a·t² = c,
/// accepted once Hensel's lemma guarantees a lift.
///
/// A primitive solution has min(v(2s), v(2at)) ≤ e + 1, so its truncation
/// to e + 3 digit levels already meets the acceptance bound; deeper search
/// is never needed.
fn represents(a: &FieldElem, c: &FieldElem, pr: &PrimeIdealF) -> bool {
    debug_assert!(pr.valuation(c) >= 0);
    let e = pr.ramification_index() as i64;
    let depth = (e + 3) as usize;
    let pi = pr.uniformizer();
    let digits: Vec<FieldElem> = match pr.kind {
        PrimeKind::Inert => [(0i64, 0i64), (1, 0), (0, 1), (1, 1)]
            .iter()
            .map(|&(x, y)| FieldElem::from_omega(pr.d, &BigInt::from(x), &BigInt::from(y)))
            .collect(),
        _ => vec![FieldElem::zero(pr.d), FieldElem::one(pr.d)],
    };
    let pi_pow: Vec<FieldElem> = (0..depth as u32).map(|i| pi.pow(i)).collect();
    let two_a = &FieldElem::from_int(pr.d, 2) * a;
    let inf = i64::MAX / 4;

    struct Ctx<'a> {
        pr: &'a PrimeIdealF,
        a: &'a FieldElem,
        c: &'a FieldElem,
        digits: &'a [FieldElem],
        pi_pow: &'a [FieldElem],
        two_a: &'a FieldElem,
        e: i64,
        depth: usize,
        inf: i64,
    }

    fn dfs(ctx: &Ctx, s: &FieldElem, t: &FieldElem, k: usize) -> bool {
        if k == ctx.depth {
            return false;
        }
        for ds in ctx.digits {
            for dt in ctx.digits {
                if k == 0 && ds.is_zero() && dt.is_zero() {
                    continue;
                }
                let s1 = s + &(ds * &ctx.pi_pow[k]);
                let t1 = t + &(dt * &ctx.pi_pow[k]);
                let f = &(&s1 * &s1) - &(&(&(ctx.a * &t1) * &t1) + ctx.c);
                if f.is_zero() {
                    return true;
                }
                let vf = ctx.pr.valuation(&f);
                let v2s = if s1.is_zero() {
                    ctx.inf
                } else {
                    ctx.e + ctx.pr.valuation(&s1)
                };
                let v2at = if t1.is_zero() {
                    ctx.inf
                } else {
                    ctx.pr.valuation(&(ctx.two_a * &t1))
                };
                let grad = v2s.min(v2at);
                if grad < ctx.inf && vf >= 2 * grad + 1 {
                    return true;
                }
                // Later digits move f by at least min(e + k + 1, 2k + 2).
                let reach = (ctx.e + k as i64 + 1).min(2 * k as i64 + 2);
                if vf >= reach && dfs(ctx, &s1, &t1, k + 1) {
                    return true;
                }
            }
        }
        false
    }

    let ctx = Ctx {
        pr,
        a,
        c,
        digits: &digits,
        pi_pow: &pi_pow,
        two_a: &two_a,
        e,
        depth,
        inf,
    };
    dfs(&ctx, &FieldElem::zero(pr.d), &FieldElem::zero(pr.d), 0)
}

/// Splitting symbol (K/𝔭) of K = F(√m): +1 split, −1 inert, 0 ramified.
pub fn splitting_symbol(m: &FieldElem, pr: &PrimeIdealF) -> i32 {
    assert!(!m.is_zero());
    let v = pr.valuation(m);
    if v % 2 != 0 {
        return 0;
    }
    let u = normalized_to_low_valuation(m, pr);
    if pr.p != 2 {
        return pr.unit_residue_character(&u);
    }
    match pr.kind {
        PrimeKind::Split { .. } => match pr.embed_mod(&u, 3).to_u8().unwrap() % 8 {
            1 => 1,
            5 => -1,
            _ => 0,
        },
        _ => {
            let e = pr.ramification_index() as i64;
            if residue_reps(pr, (e + 1) as u32)
                .iter()
                .any(|r| unit_difference_valuation(&u, r, pr) >= 2 * e + 1)
            {
                1
            } else if residue_reps(pr, e as u32)
                .iter()
                .any(|r| unit_difference_valuation(&u, r, pr) >= 2 * e)
            {
                -1
            } else {
                0
            }
        }
    }
}

/// All places where (a, b) could ramify: primes dividing 2, d, or the
/// norms of a and b. Used by the reciprocity checks and by algebra
/// ramification.
pub fn candidate_primes(d: u64, elems: &[&FieldElem]) -> Vec<PrimeIdealF> {
    use super::ideal::{factor, primes_above};
    let mut ps: Vec<u64> = vec![2];
    for (q, _) in factor(&BigInt::from(d)) {
        ps.push(q.to_u64().unwrap());
    }
    for x in elems {
        let n = x.norm();
        for part in [n.numer().clone(), n.denom().clone()] {
            for (q, _) in factor(&part) {
                ps.push(q.to_u64().unwrap());
            }
        }
    }
    ps.sort();
    ps.dedup();
    let mut out = Vec::new();
    for p in ps {
        out.extend(primes_above(d, p));
    }
    out
}

/// Legendre-symbol sanity helper for tests.
pub fn legendre_i64(a: i64, p: u64) -> i32 {
    legendre(&BigInt::from(a), p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::ideal::{prime_above, primes_above};
    use crate::quadfield::unit::fundamental_unit;

    fn fe(d: u64, u: i64, v: i64, den: i64) -> FieldElem {
        FieldElem::from_parts(d, u, v, den)
    }

    fn product_over_all_places(a: &FieldElem, b: &FieldElem) -> i32 {
        let mut s = hilbert_symbol_inf(a, b, 0) * hilbert_symbol_inf(a, b, 1);
        for pr in candidate_primes(a.d, &[a, b]) {
            s *= hilbert_symbol_at(a, b, &pr);
        }
        s
    }

    #[test]
    fn minus_one_minus_one_dyadic_rule() {
        // Ramified iff the dyadic completion is Q₂ itself.
        for pr in primes_above(17, 2) {
            assert_eq!(
                hilbert_symbol_at(&fe(17, -1, 0, 1), &fe(17, -1, 0, 1), &pr),
                -1
            );
        }
        for d in [13u64, 5, 29] {
            let pr = prime_above(d, 2);
            assert_eq!(hilbert_symbol_at(&fe(d, -1, 0, 1), &fe(d, -1, 0, 1), &pr), 1);
        }
        for d in [7u64, 10, 6, 15] {
            let pr = prime_above(d, 2);
            assert_eq!(hilbert_symbol_at(&fe(d, -1, 0, 1), &fe(d, -1, 0, 1), &pr), 1);
        }
    }

    #[test]
    fn reciprocity_products() {
        let cases: Vec<(u64, FieldElem, FieldElem)> = vec![
            (7, fe(7, -1, 0, 1), fe(7, -1, 0, 1)),
            (7, fe(7, -1, 0, 1), -&fundamental_unit(7).unwrap().eps),
            (7, -&fundamental_unit(7).unwrap().eps, fe(7, -3, 0, 1)),
            (7, fe(7, -1, 0, 1), fe(7, -3, 0, 1)),
            (33, fe(33, -1, 0, 1), fe(33, -3, 0, 1)),
            (33, -&fundamental_unit(33).unwrap().eps, fe(33, -3, 0, 1)),
            (17, fe(17, -1, 0, 1), -&fundamental_unit(17).unwrap().eps),
            (13, fe(13, -1, 0, 1), -&fundamental_unit(13).unwrap().eps),
            (10, fe(10, -1, 0, 1), -&fundamental_unit(10).unwrap().eps),
            (21, -&fundamental_unit(21).unwrap().eps, fe(21, -3, 0, 1)),
            (6, fe(6, 2, 1, 1), fe(6, -5, 2, 3)),
            (15, fe(15, 1, 1, 2), fe(15, -7, 1, 1)),
        ];
        for (d, a, b) in cases {
            assert_eq!(product_over_all_places(&a, &b), 1, "d={d}, a={a:?}, b={b:?}");
        }
    }

    #[test]
    fn multiplicativity_and_symmetry_at_dyadic_primes() {
        for d in [13u64, 10, 7] {
            let pool = [
                fe(d, -1, 0, 1),
                fe(d, 2, 0, 1),
                fe(d, 3, 0, 1),
                fe(d, 0, 1, 1),
                fe(d, 1, 1, 1),
                fundamental_unit(d).unwrap().eps,
            ];
            let pr = prime_above(d, 2);
            for a in &pool {
                for b in &pool {
                    assert_eq!(
                        hilbert_symbol_at(a, b, &pr),
                        hilbert_symbol_at(b, a, &pr),
                        "symmetry d={d}"
                    );
                    for c in &pool {
                        let lhs = hilbert_symbol_at(a, &(b * c), &pr);
                        let rhs = hilbert_symbol_at(a, b, &pr) * hilbert_symbol_at(a, c, &pr);
                        assert_eq!(lhs, rhs, "multiplicativity d={d}");
                    }
                }
            }
        }
    }

    #[test]
    fn norm_identity_a_minus_a() {
        for d in [7u64, 13, 10, 17] {
            for pr in candidate_primes(d, &[]) {
                for a in [fe(d, -1, 0, 1), fe(d, 2, 0, 1), fe(d, 0, 1, 1), fe(d, 3, 1, 1)] {
                    assert_eq!(hilbert_symbol_at(&a, &-&a, &pr), 1, "d={d}");
                }
            }
        }
    }

    #[test]
    fn splitting_symbol_consistency_with_hilbert() {
        // (K/𝔭) = ±1 forces (m, π)_𝔭 to the same sign.
        for d in [7u64, 13, 17, 21, 33, 10] {
            let ms = [fe(d, -1, 0, 1), fe(d, -3, 0, 1), -&fundamental_unit(d).unwrap().eps];
            for pr in candidate_primes(d, &[]) {
                let pi = pr.uniformizer();
                for m in &ms {
                    let s = splitting_symbol(m, &pr);
                    if s != 0 {
                        assert_eq!(hilbert_symbol_at(m, &pi, &pr), s, "d={d} m={m:?} p={}", pr.p);
                    }
                }
            }
        }
    }

    #[test]
    fn splitting_examples() {
        // F(√−1)/F at the split primes over 3 for d=7: −1 is not a square mod 3.
        for pr in primes_above(7, 3) {
            assert_eq!(splitting_symbol(&fe(7, -1, 0, 1), &pr), -1);
        }
        // 3 ramifies in F(√−3) for 3 ∤ d.
        assert_eq!(splitting_symbol(&fe(7, -3, 0, 1), &prime_above(7, 3)), 0);
        // 3 | d: F(√−3)/F is unramified at 𝔮 = (3, √d).
        assert_ne!(splitting_symbol(&fe(21, -3, 0, 1), &prime_above(21, 3)), 0);
        assert_ne!(splitting_symbol(&fe(33, -3, 0, 1), &prime_above(33, 3)), 0);
        // Unramified iff −ε is a square mod 4O_F.
        for d in [7u64, 11, 15, 33, 66] {
            let fu = fundamental_unit(d).unwrap();
            let minus_eps = -&fu.eps;
            let unram = primes_above(d, 2)
                .iter()
                .all(|pr| splitting_symbol(&minus_eps, pr) != 0);
            assert_eq!(
                unram,
                crate::quadfield::unit::minus_eps_square_mod_4(&fu),
                "d={d}"
            );
        }
    }

    #[test]
    fn local_squares() {
        let fu7 = fundamental_unit(7).unwrap();
        // 2ε = (3+√7)², a global square.
        let two_eps = &fe(7, 2, 0, 1) * &fu7.eps;
        for pr in candidate_primes(7, &[]) {
            assert!(is_local_square(&two_eps, &pr));
        }
        // −7 ≡ 1 mod 8 is a square in Q₂, so Q₂(√7) = Q₂(√−1) contains √−1.
        assert!(is_local_square(&fe(7, -1, 0, 1), &prime_above(7, 2)));
        // −1 is not a square in the unramified quadratic extension.
        assert!(!is_local_square(&fe(13, -1, 0, 1), &prime_above(13, 2)));
        assert!(!is_local_square(&fe(10, -1, 0, 1), &prime_above(10, 2)));
    }
}
