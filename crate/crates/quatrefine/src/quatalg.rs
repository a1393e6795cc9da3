//! Quaternion algebras (a, b / F) over F = Q(√d): arithmetic, reduced
//! norm and trace, ramification, and the four standard presentations.

use crate::quadfield::elem::FieldElem;
use crate::quadfield::hilbert::{candidate_primes, hilbert_symbol_at, hilbert_symbol_inf};
use crate::quadfield::ideal::{IdealF, PrimeIdealF};
use crate::quadfield::unit::FundUnitData;
use thiserror::Error;

/// A quaternion element in coordinates over the basis {1, i, j, k}.
pub type Quat = [FieldElem; 4];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuatAlgebra {
    pub d: u64,
    pub a: FieldElem,
    pub b: FieldElem,
}

pub fn qadd(x: &Quat, y: &Quat) -> Quat {
    std::array::from_fn(|s| &x[s] + &y[s])
}

pub fn qsub(x: &Quat, y: &Quat) -> Quat {
    std::array::from_fn(|s| &x[s] - &y[s])
}

pub fn qneg(x: &Quat) -> Quat {
    std::array::from_fn(|s| -&x[s])
}

pub fn qscale(c: &FieldElem, x: &Quat) -> Quat {
    std::array::from_fn(|s| c * &x[s])
}

pub fn qzero(d: u64) -> Quat {
    std::array::from_fn(|_| FieldElem::zero(d))
}

pub fn qis_zero(x: &Quat) -> bool {
    x.iter().all(FieldElem::is_zero)
}

impl QuatAlgebra {
    pub fn new(d: u64, a: FieldElem, b: FieldElem) -> Self {
        assert_eq!(a.d, d);
        assert_eq!(b.d, d);
        assert!(!a.is_zero() && !b.is_zero());
        QuatAlgebra { d, a, b }
    }

    pub fn from_integers(d: u64, a: i64, b: i64) -> Self {
        Self::new(d, FieldElem::from_int(d, a), FieldElem::from_int(d, b))
    }

    pub fn one(&self) -> Quat {
        let mut e = qzero(self.d);
        e[0] = FieldElem::one(self.d);
        e
    }

    pub fn gen_i(&self) -> Quat {
        let mut e = qzero(self.d);
        e[1] = FieldElem::one(self.d);
        e
    }

    pub fn gen_j(&self) -> Quat {
        let mut e = qzero(self.d);
        e[2] = FieldElem::one(self.d);
        e
    }

    pub fn gen_k(&self) -> Quat {
        let mut e = qzero(self.d);
        e[3] = FieldElem::one(self.d);
        e
    }

    /// ξ = (1 + i + j + k)/2.
    pub fn xi(&self) -> Quat {
        let h = FieldElem::from_parts(self.d, 1, 0, 2);
        std::array::from_fn(|_| h.clone())
    }

    pub fn scalar(&self, c: &FieldElem) -> Quat {
        let mut e = qzero(self.d);
        e[0] = c.clone();
        e
    }

    pub fn from_rational_coords(&self, coords: [(i64, i64, i64); 4]) -> Quat {
        std::array::from_fn(|s| {
            let (u, v, den) = coords[s];
            FieldElem::from_parts(self.d, u, v, den)
        })
    }

    /// Product in the basis {1, i, j, k} with i² = a, j² = b, ij = −ji = k.
    pub fn mul(&self, x: &Quat, y: &Quat) -> Quat {
        let (a, b) = (&self.a, &self.b);
        let ab = a * b;
        let z0 = &(&(&x[0] * &y[0]) + &(a * &(&x[1] * &y[1])))
            + &(&(b * &(&x[2] * &y[2])) - &(&ab * &(&x[3] * &y[3])));
        let z1 = &(&(&x[0] * &y[1]) + &(&x[1] * &y[0]))
            + &(&(b * &(&x[3] * &y[2])) - &(b * &(&x[2] * &y[3])));
        let z2 = &(&(&x[0] * &y[2]) + &(&x[2] * &y[0]))
            + &(&(a * &(&x[1] * &y[3])) - &(a * &(&x[3] * &y[1])));
        let z3 = &(&(&x[0] * &y[3]) + &(&x[3] * &y[0]))
            + &(&(&x[1] * &y[2]) - &(&x[2] * &y[1]));
        [z0, z1, z2, z3]
    }

    /// Standard involution x ↦ Tr(x) − x.
    pub fn conj(&self, x: &Quat) -> Quat {
        [x[0].clone(), -&x[1], -&x[2], -&x[3]]
    }

    /// Reduced norm Nr(x) = x·x̄ ∈ F.
    pub fn nr(&self, x: &Quat) -> FieldElem {
        let (a, b) = (&self.a, &self.b);
        &(&(&x[0] * &x[0]) - &(a * &(&x[1] * &x[1])))
            - &(&(b * &(&x[2] * &x[2])) - &(&(a * b) * &(&x[3] * &x[3])))
    }

    /// Reduced trace Tr(x) = x + x̄ ∈ F.
    pub fn tr(&self, x: &Quat) -> FieldElem {
        &x[0] + &x[0]
    }

    pub fn inv(&self, x: &Quat) -> Quat {
        let n = self.nr(x);
        assert!(!n.is_zero(), "inverse of a zero divisor or zero");
        qscale(&n.inv(), &self.conj(x))
    }

    pub fn pow(&self, x: &Quat, e: u32) -> Quat {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// Conjugation x y x^{−1}.
    pub fn conjugate_by(&self, x: &Quat, y: &Quat) -> Quat {
        self.mul(&self.mul(x, y), &self.inv(x))
    }

    /// The finite primes where the algebra ramifies; support is contained
    /// in the primes over 2·3·d·Nm(a)·Nm(b).
    pub fn ramified_primes(&self) -> Vec<PrimeIdealF> {
        let three = FieldElem::from_int(self.d, 3);
        candidate_primes(self.d, &[&self.a, &self.b, &three])
            .into_iter()
            .filter(|pr| hilbert_symbol_at(&self.a, &self.b, pr) == -1)
            .collect()
    }

    pub fn archimedean_ramified(&self) -> [bool; 2] {
        std::array::from_fn(|pl| hilbert_symbol_inf(&self.a, &self.b, pl) == -1)
    }

    pub fn is_totally_definite(&self) -> bool {
        self.archimedean_ramified() == [true, true]
    }

    /// The reduced discriminant ideal 𝔡(H) = ∏ ramified 𝔭.
    pub fn disc_ideal(&self) -> IdealF {
        IdealF::from_factors(self.d, self.ramified_primes().into_iter().map(|p| (p, 1)).collect())
    }

    /// Isomorphism is equality of ramification data (same base field).
    pub fn is_isomorphic(&self, other: &QuatAlgebra) -> bool {
        if self.d != other.d || self.archimedean_ramified() != other.archimedean_ramified() {
            return false;
        }
        let mut r1 = self.ramified_primes();
        let mut r2 = other.ramified_primes();
        r1.sort();
        r2.sort();
        r1 == r2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardTag {
    A,
    B,
    C,
    D,
    Hinf,
}

impl std::str::FromStr for StandardTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" => Ok(StandardTag::A),
            "B" => Ok(StandardTag::B),
            "C" => Ok(StandardTag::C),
            "D" => Ok(StandardTag::D),
            "Hinf" | "H∞" | "hinf" => Ok(StandardTag::Hinf),
            _ => Err(format!("unknown algebra tag {s:?} (expected A, B, C, D, or Hinf)")),
        }
    }
}

/// How the caller names the algebra to work in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraInput {
    Tag(StandardTag),
    Custom(FieldElem, FieldElem),
    /// The everywhere-finite-unramified totally definite algebra, named
    /// abstractly when no standard form presents it.
    Unramified,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error(
        "H∞ requested but no standard form is everywhere-unramified for this d \
         (caller must then supply structure constants)"
    )]
    NoUnramifiedStandardForm,
}

/// The four standard presentations A: (−1,−1), B: (−1,−ε), C: (−1,−3),
/// D: (−ε,−3); H∞ picks whichever of them has empty finite ramification.
pub fn standard_algebra(tag: StandardTag, fu: &FundUnitData) -> Result<QuatAlgebra, AlgebraError> {
    let d = fu.d;
    let minus_one = FieldElem::from_int(d, -1);
    let minus_three = FieldElem::from_int(d, -3);
    let minus_eps = -&fu.eps;
    Ok(match tag {
        StandardTag::A => QuatAlgebra::new(d, minus_one.clone(), minus_one),
        StandardTag::B => QuatAlgebra::new(d, minus_one, minus_eps),
        StandardTag::C => QuatAlgebra::new(d, minus_one, minus_three),
        StandardTag::D => QuatAlgebra::new(d, minus_eps, minus_three),
        StandardTag::Hinf => {
            return [StandardTag::A, StandardTag::B, StandardTag::C, StandardTag::D]
                .into_iter()
                .map(|t| standard_algebra(t, fu).unwrap())
                .find(|alg| alg.is_totally_definite() && alg.ramified_primes().is_empty())
                .ok_or(AlgebraError::NoUnramifiedStandardForm);
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::unit::fundamental_unit;

    fn alg_a(d: u64) -> QuatAlgebra {
        QuatAlgebra::from_integers(d, -1, -1)
    }

    /// Deterministic small pseudo-random field elements.
    struct Lcg(u64);
    impl Lcg {
        fn next_i64(&mut self, span: i64) -> i64 {
            self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((self.0 >> 33) as i64).rem_euclid(2 * span + 1) - span
        }
        fn quat(&mut self, d: u64) -> Quat {
            std::array::from_fn(|_| {
                FieldElem::from_parts(d, self.next_i64(9), self.next_i64(9), 1 + self.next_i64(1).abs())
            })
        }
    }

    #[test]
    fn multiplication_table() {
        for alg in [alg_a(7), QuatAlgebra::from_integers(6, -1, -3)] {
            let (i, j, k) = (alg.gen_i(), alg.gen_j(), alg.gen_k());
            assert_eq!(alg.mul(&i, &i), alg.scalar(&alg.a));
            assert_eq!(alg.mul(&j, &j), alg.scalar(&alg.b));
            assert_eq!(alg.mul(&i, &j), k);
            assert_eq!(alg.mul(&j, &i), qneg(&k));
            assert_eq!(alg.mul(&k, &k), alg.scalar(&-&(&alg.a * &alg.b)));
            assert_eq!(alg.mul(&i, &k), qscale(&alg.a, &j));
            assert_eq!(alg.mul(&k, &i), qneg(&qscale(&alg.a, &j)));
            assert_eq!(alg.mul(&j, &k), qneg(&qscale(&alg.b, &i)));
            assert_eq!(alg.mul(&k, &j), qscale(&alg.b, &i));
        }
    }

    #[test]
    fn norm_trace_conjugation_laws() {
        let fu = fundamental_unit(7).unwrap();
        let alg = standard_algebra(StandardTag::B, &fu).unwrap();
        let mut rng = Lcg(42);
        for _ in 0..1000 {
            let x = rng.quat(7);
            let y = rng.quat(7);
            let nxy = alg.nr(&alg.mul(&x, &y));
            assert_eq!(nxy, &alg.nr(&x) * &alg.nr(&y));
            assert_eq!(alg.conj(&alg.mul(&x, &y)), alg.mul(&alg.conj(&y), &alg.conj(&x)));
            let xxbar = alg.mul(&x, &alg.conj(&x));
            assert_eq!(xxbar, alg.scalar(&alg.nr(&x)));
            assert_eq!(qadd(&x, &alg.conj(&x)), alg.scalar(&alg.tr(&x)));
            // Associativity spot check.
            let z = rng.quat(7);
            assert_eq!(alg.mul(&alg.mul(&x, &y), &z), alg.mul(&x, &alg.mul(&y, &z)));
        }
    }

    #[test]
    fn xi_is_a_sixth_root_pattern() {
        let alg = alg_a(7);
        let xi = alg.xi();
        assert_eq!(alg.nr(&xi), FieldElem::one(7));
        assert_eq!(alg.tr(&xi), FieldElem::one(7));
        // ξ² − ξ + 1 = 0 so ξ has order 6.
        assert_eq!(alg.pow(&xi, 6), alg.one());
        assert_ne!(alg.pow(&xi, 3), alg.one());
    }

    #[test]
    fn ramification_examples() {
        // (−1,−1) over Q(√7) is unramified at every finite place.
        assert!(alg_a(7).ramified_primes().is_empty());
        assert!(alg_a(7).is_totally_definite());
        // (−1,−3) over Q(√7) ramifies exactly at the two primes over 3.
        let c7 = QuatAlgebra::from_integers(7, -1, -3);
        let ram = c7.ramified_primes();
        assert_eq!(ram.len(), 2);
        assert!(ram.iter().all(|p| p.p == 3));
        assert_eq!(
            c7.disc_ideal().absolute_norm(),
            crate::quadfield::Rat::from_integer(9.into())
        );
    }

    #[test]
    fn standard_isomorphisms() {
        let fu7 = fundamental_unit(7).unwrap();
        let a = standard_algebra(StandardTag::A, &fu7).unwrap();
        let dd = standard_algebra(StandardTag::D, &fu7).unwrap();
        assert!(a.is_isomorphic(&dd));
        assert!(!a.is_isomorphic(&standard_algebra(StandardTag::C, &fu7).unwrap()));
        let fu6 = fundamental_unit(6).unwrap();
        let a6 = standard_algebra(StandardTag::A, &fu6).unwrap();
        for t in [StandardTag::B, StandardTag::C] {
            assert!(a6.is_isomorphic(&standard_algebra(t, &fu6).unwrap()), "{t:?}");
        }
        // Indefinite when Nm(ε) = −1: exactly one ramified infinite place.
        let fu10 = fundamental_unit(10).unwrap();
        let b10 = standard_algebra(StandardTag::B, &fu10).unwrap();
        assert_eq!(b10.archimedean_ramified(), [true, false]);
    }

    #[test]
    fn hinf_selection() {
        assert_eq!(
            standard_algebra(StandardTag::Hinf, &fundamental_unit(7).unwrap()).unwrap(),
            alg_a(7)
        );
        for p in [11u64, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 79, 83, 89] {
            let fu = fundamental_unit(p).unwrap();
            let h = standard_algebra(StandardTag::Hinf, &fu).unwrap();
            assert!(h.ramified_primes().is_empty(), "p={p}");
            assert!(h.is_totally_definite(), "p={p}");
        }
        for p in [73u64, 97] {
            let fu = fundamental_unit(p).unwrap();
            let err = standard_algebra(StandardTag::Hinf, &fu).unwrap_err();
            assert_eq!(err, AlgebraError::NoUnramifiedStandardForm);
            assert!(err.to_string().starts_with("H∞ requested but no standard form"));
        }
    }

    #[test]
    fn even_ramification_count_sweep() {
        for d in 2..=200u64 {
            if !crate::quadfield::unit::is_square_free(d) {
                continue;
            }
            let fu = fundamental_unit(d).unwrap();
            for t in [StandardTag::A, StandardTag::B, StandardTag::C, StandardTag::D] {
                let alg = standard_algebra(t, &fu).unwrap();
                let total = alg.ramified_primes().len()
                    + alg.archimedean_ramified().iter().filter(|&&r| r).count();
                assert_eq!(total % 2, 0, "d={d}, tag {t:?}");
            }
        }
    }

    #[test]
    fn tame_symbol_bilinearity() {
        use crate::quadfield::hilbert::hilbert_symbol_at;
        use crate::quadfield::ideal::primes_above;
        for d in [7u64, 10, 21] {
            let pool = [
                FieldElem::from_int(d, -1),
                FieldElem::from_int(d, 3),
                FieldElem::sqrt_d(d),
                FieldElem::from_parts(d, 1, 1, 1),
                fundamental_unit(d).unwrap().eps,
            ];
            for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
                for pr in primes_above(d, p) {
                    for x in &pool {
                        for y in &pool {
                            for z in &pool {
                                let lhs = hilbert_symbol_at(x, &(y * z), &pr);
                                let rhs =
                                    hilbert_symbol_at(x, y, &pr) * hilbert_symbol_at(x, z, &pr);
                                assert_eq!(lhs, rhs, "d={d}, p={p}");
                            }
                        }
                    }
                }
            }
        }
    }
}
