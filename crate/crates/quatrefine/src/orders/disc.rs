//! Reduced discriminants of quaternion orders.

use super::lattice::{dual_index, QuatOrder};
use crate::quadfield::{FieldElem, IdealF};
use crate::quatalg::{Quat, QuatAlgebra};
use itertools::Itertools;

/// det(Tr_red(x_s x_t)) for four algebra elements, expanded over S₄.
pub fn trace_gram_det(alg: &QuatAlgebra, xs: [&Quat; 4]) -> FieldElem {
    let d = alg.d;
    let mut gram = Vec::with_capacity(4);
    for s in 0..4 {
        let mut row = Vec::with_capacity(4);
        for t in 0..4 {
            row.push(alg.tr(&alg.mul(xs[s], xs[t])));
        }
        gram.push(row);
    }
    let mut det = FieldElem::zero(d);
    for perm in (0..4usize).permutations(4) {
        let mut inversions = 0;
        for a in 0..4 {
            for b in a + 1..4 {
                if perm[a] > perm[b] {
                    inversions += 1;
                }
            }
        }
        let mut term = FieldElem::one(d);
        for (s, &t) in perm.iter().enumerate() {
            term = &term * &gram[s][t];
        }
        if inversions % 2 == 1 {
            term = -&term;
        }
        det = &det + &term;
    }
    det
}

impl QuatOrder {
    /// Reduced discriminant 𝔡(O): square root of the ideal generated by
    /// the trace-form determinants of all basis quadruples. Works for any
    /// O_F-lattice basis, free or not.
    pub fn discriminant(&self) -> IdealF {
        if let Some(cached) = self.disc_cached() {
            return cached.clone();
        }
        let basis = self.basis_quats();
        let mut gens: Vec<FieldElem> = Vec::new();
        for combo in basis.iter().combinations(4) {
            let det = trace_gram_det(&self.alg, [combo[0], combo[1], combo[2], combo[3]]);
            if !det.is_zero() {
                gens.push(det);
            }
        }
        let square = IdealF::from_generators(self.alg.d, &gens);
        let mut half_factors = Vec::new();
        for pr in square.support() {
            let e = square.valuation_at(&pr);
            assert!(e % 2 == 0, "discriminant square ideal with odd valuation");
            half_factors.push((pr, e / 2));
        }
        let disc = IdealF::from_factors(self.alg.d, half_factors);
        self.set_disc(disc.clone());
        disc
    }

    /// Maximality test: 𝔡(O) equals the discriminant of the algebra.
    pub fn is_maximal(&self) -> bool {
        self.discriminant() == self.alg.disc_ideal()
    }

    /// [O^∨ : O] as a ℤ-index; equals Nm(𝔡(O))² and gives an independent
    /// route to the discriminant norm.
    pub fn dual_index(&self) -> num_bigint::BigInt {
        dual_index(&self.lattice, &self.alg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::lattice::make_order;
    use crate::quadfield::unit::fundamental_unit;
    use crate::quadfield::Rat;
    use crate::quatalg::{qadd, qscale, standard_algebra, StandardTag};
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;

    fn ideal_2(d: u64, e: i64) -> IdealF {
        IdealF::principal(&FieldElem::from_int(d, 2)).pow(e)
    }

    #[test]
    fn hurwitz_type_chain_at_unramified_algebra() {
        // d = 7, H = (−1,−1) is unramified at every finite place.
        let d = 7u64;
        let fu = fundamental_unit(d).unwrap();
        let alg = standard_algebra(StandardTag::A, &fu).unwrap();
        let theta = fu.theta.clone().unwrap();

        let o2 = make_order(&[alg.one(), alg.gen_i(), alg.gen_j(), alg.gen_k()], &alg).unwrap();
        assert_eq!(o2.discriminant(), ideal_2(d, 2));

        let o12 = make_order(&[alg.one(), alg.gen_i(), alg.gen_j(), alg.xi()], &alg).unwrap();
        assert_eq!(o12.discriminant(), ideal_2(d, 1));

        // sqrt(ε·α) = ϑ(1+α) squares to εα.
        let sq_i = qscale(&theta, &qadd(&alg.one(), &alg.gen_i()));
        let sq_j = qscale(&theta, &qadd(&alg.one(), &alg.gen_j()));
        let eps_i = alg.mul(&sq_i, &sq_i);
        assert_eq!(eps_i, qscale(&fu.eps, &alg.gen_i()));

        let o24 = make_order(&[alg.one(), sq_i.clone(), sq_j.clone(), alg.xi()], &alg).unwrap();
        assert_eq!(o24.discriminant(), IdealF::one(d));
        assert!(o24.is_maximal());
        assert!(!o12.is_maximal());

        let i_sq_j = alg.mul(&alg.gen_i(), &sq_j);
        let o4 = make_order(&[alg.one(), alg.gen_i(), sq_j, i_sq_j], &alg).unwrap();
        assert_eq!(o4.discriminant(), ideal_2(d, 1));

        // Index law along O₁₂ ⊂ O₂₄: [O':O] = Nm(𝔡(O))/Nm(𝔡(O')).
        assert!(o24.lattice.contains_lattice(&o12.lattice));
        assert_eq!(o12.lattice.index_in(&o24.lattice), BigInt::from(4));

        // Dual index agrees with Nm(𝔡)² for each order.
        for (o, nm) in [(&o2, 16i64), (&o12, 4), (&o24, 1), (&o4, 4)] {
            assert_eq!(o.dual_index(), BigInt::from(nm * nm));
            assert_eq!(
                o.discriminant().absolute_norm(),
                Rat::from_integer(nm.into())
            );
        }
    }

    #[test]
    fn three_ramified_orders() {
        // 𝒪₃-type orders have reduced discriminant 3O_F.
        for d in [7u64, 13, 21] {
            let fu = fundamental_unit(d).unwrap();
            for tag in [StandardTag::C, StandardTag::D] {
                let alg = standard_algebra(tag, &fu).unwrap();
                let half = FieldElem::from_parts(d, 1, 0, 2);
                let o3 = make_order(
                    &[
                        alg.one(),
                        alg.gen_i(),
                        qscale(&half, &qadd(&alg.one(), &alg.gen_j())),
                        qscale(&half, &qadd(&alg.gen_i(), &alg.gen_k())),
                    ],
                    &alg,
                )
                .unwrap();
                let disc = o3.discriminant();
                assert_eq!(disc, IdealF::principal(&FieldElem::from_int(d, 3)));
                assert_eq!(disc.absolute_norm().to_integer().to_i64(), Some(9));
            }
        }
    }

    #[test]
    fn maximality_matches_algebra_discriminant() {
        // Tag C at d = 7 ramifies exactly at the two primes over 3; the
        // order O_F[i,(1+j)/2] there has disc 3O_F = 𝔡(H), hence maximal.
        let fu = fundamental_unit(7).unwrap();
        let alg = standard_algebra(StandardTag::C, &fu).unwrap();
        let half = FieldElem::from_parts(7, 1, 0, 2);
        let o3 = make_order(
            &[
                alg.one(),
                alg.gen_i(),
                qscale(&half, &qadd(&alg.one(), &alg.gen_j())),
                qscale(&half, &qadd(&alg.gen_i(), &alg.gen_k())),
            ],
            &alg,
        )
        .unwrap();
        assert_eq!(alg.disc_ideal(), IdealF::principal(&FieldElem::from_int(7, 3)));
        assert!(o3.is_maximal());
    }
}
