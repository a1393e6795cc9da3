//! Exact arithmetic in the real quadratic field F = Q(√d).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub type Rat = BigRational;

/// An element (u + v√d)/den of F = Q(√d), always in lowest terms with den > 0.
///
/// For elements of O_F the canonical form automatically satisfies
/// den ∈ {1, 2}, with den = 2 only when d ≡ 1 (mod 4) and u ≡ v (mod 2);
/// `is_integral` checks exactly that. General field elements may carry any
/// positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    pub d: u64,
    pub u: BigInt,
    pub v: BigInt,
    pub den: BigInt,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}+{}√{})/{}", self.u, self.v, self.d, self.den)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v.is_zero() {
            if self.den.is_one() {
                return write!(f, "{}", self.u);
            }
            return write!(f, "{}/{}", self.u, self.den);
        }
        if self.den.is_one() {
            write!(f, "{}+{}*sqrt({})", self.u, self.v, self.d)
        } else {
            write!(f, "({}+{}*sqrt({}))/{}", self.u, self.v, self.d, self.den)
        }
    }
}

impl FieldElem {
    /// Canonical constructor: reduces to lowest terms, den > 0.
    pub fn new(d: u64, u: BigInt, v: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (mut u, mut v, mut den) = (u, v, den);
        if den.is_negative() {
            u = -u;
            v = -v;
            den = -den;
        }
        let g = u.gcd(&v).gcd(&den);
        if !g.is_one() {
            u /= &g;
            v /= &g;
            den /= &g;
        }
        FieldElem { d, u, v, den }
    }

    pub fn from_parts(d: u64, u: i64, v: i64, den: i64) -> Self {
        Self::new(d, BigInt::from(u), BigInt::from(v), BigInt::from(den))
    }

    pub fn from_int(d: u64, n: i64) -> Self {
        Self::from_parts(d, n, 0, 1)
    }

    pub fn from_rat(d: u64, r: &Rat) -> Self {
        Self::new(d, r.numer().clone(), BigInt::zero(), r.denom().clone())
    }

    /// Element a + b√d from rational coordinates.
    pub fn from_rat_pair(d: u64, a: &Rat, b: &Rat) -> Self {
        let den = a.denom().lcm(b.denom());
        let u = a.numer() * (&den / a.denom());
        let v = b.numer() * (&den / b.denom());
        Self::new(d, u, v, den)
    }

    pub fn sqrt_d(d: u64) -> Self {
        Self::from_parts(d, 0, 1, 1)
    }

    pub fn zero(d: u64) -> Self {
        Self::from_int(d, 0)
    }

    pub fn one(d: u64) -> Self {
        Self::from_int(d, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.u.is_one() && self.v.is_zero() && self.den.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    pub fn as_rat(&self) -> Option<Rat> {
        self.is_rational()
            .then(|| Rat::new(self.u.clone(), self.den.clone()))
    }

    /// Rational coordinates (a, b) with self = a + b√d.
    pub fn rat_coords(&self) -> (Rat, Rat) {
        (
            Rat::new(self.u.clone(), self.den.clone()),
            Rat::new(self.v.clone(), self.den.clone()),
        )
    }

    pub fn conj(&self) -> Self {
        FieldElem {
            d: self.d,
            u: self.u.clone(),
            v: -self.v.clone(),
            den: self.den.clone(),
        }
    }

    /// Nm_{F/Q}: (u² − d·v²)/den².
    pub fn norm(&self) -> Rat {
        let num = &self.u * &self.u - BigInt::from(self.d) * &self.v * &self.v;
        Rat::new(num, &self.den * &self.den)
    }

    /// Tr_{F/Q}: 2u/den.
    pub fn trace(&self) -> Rat {
        Rat::new(2 * &self.u, self.den.clone())
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverting zero");
        // 1/x = conj(x)/Nm(x).
        let n = self.norm();
        let c = self.conj();
        FieldElem::new(
            self.d,
            &c.u * n.denom(),
            &c.v * n.denom(),
            &c.den * n.numer(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = FieldElem::one(self.d);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Sign of the embedding sending √d to +√d (index 0) or −√d (index 1).
    pub fn embedding_sign(&self, place: usize) -> i32 {
        let v = if place == 0 {
            self.v.clone()
        } else {
            -self.v.clone()
        };
        sign_of_u_plus_v_sqrt(self.d, &self.u, &v)
    }

    pub fn is_totally_positive(&self) -> bool {
        self.embedding_sign(0) > 0 && self.embedding_sign(1) > 0
    }

    /// Membership in O_F = Z[ω].
    pub fn is_integral(&self) -> bool {
        if self.den.is_one() {
            return true;
        }
        if self.den == BigInt::from(2) {
            return self.d % 4 == 1 && (&self.u - &self.v).is_even();
        }
        false
    }

    /// Coordinates (a, b) with self = a + bω, ω = (1+√d)/2 for d ≡ 1 (mod 4)
    /// and ω = √d otherwise. None when the element is not in O_F.
    pub fn omega_coords(&self) -> Option<(BigInt, BigInt)> {
        if !self.is_integral() {
            return None;
        }
        if self.d % 4 == 1 {
            if self.den.is_one() {
                Some((&self.u - &self.v, 2 * &self.v))
            } else {
                Some(((&self.u - &self.v) / 2, self.v.clone()))
            }
        } else {
            Some((self.u.clone(), self.v.clone()))
        }
    }

    pub fn from_omega(d: u64, a: &BigInt, b: &BigInt) -> Self {
        if d % 4 == 1 {
            Self::new(d, 2 * a + b, b.clone(), BigInt::from(2))
        } else {
            Self::new(d, a.clone(), b.clone(), BigInt::one())
        }
    }

    /// Rational coordinates over the {1, ω} basis (defined for any field
    /// element, integral or not).
    pub fn omega_rat_coords(&self) -> (Rat, Rat) {
        let (a, b) = self.rat_coords();
        if self.d % 4 == 1 {
            (&a - &b, b * Rat::from_integer(BigInt::from(2)))
        } else {
            (a, b)
        }
    }

    pub fn from_omega_rat(d: u64, a: &Rat, b: &Rat) -> Self {
        if d % 4 == 1 {
            let half = Rat::new(BigInt::one(), BigInt::from(2));
            let u = a + b * &half;
            Self::from_rat_pair(d, &u, &(b * half))
        } else {
            Self::from_rat_pair(d, a, b)
        }
    }

    /// A square root in F when one exists.
    pub fn sqrt(&self) -> Option<FieldElem> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let (r1, r2) = self.rat_coords();
        if r2.is_zero() {
            // Rational target: either √r1 ∈ Q or √(r1/d)·√d works.
            if let Some(s) = rat_sqrt(&r1) {
                return Some(FieldElem::from_rat(self.d, &s));
            }
            let rd = &r1 / Rat::from_integer(BigInt::from(self.d));
            if let Some(c) = rat_sqrt(&rd) {
                return Some(FieldElem::from_rat_pair(self.d, &Rat::zero(), &c));
            }
            return None;
        }
        // s = s1 + s2√d with s1² + d·s2² = r1 and 2·s1·s2 = r2; then
        // s1² is a root z of z² − r1·z + d·(r2/2)² = 0, i.e. z = (r1 ± q)/2
        // with q = √Nm(self).
        let q = rat_sqrt(&self.norm())?;
        let two = Rat::from_integer(BigInt::from(2));
        for z in [(&r1 + &q) / &two, (&r1 - &q) / &two] {
            if let Some(s1) = rat_sqrt(&z) {
                if s1.is_zero() {
                    continue;
                }
                let s2 = &r2 / (&two * &s1);
                let cand = FieldElem::from_rat_pair(self.d, &s1, &s2);
                if &(&cand * &cand) == self {
                    return Some(cand);
                }
            }
        }
        None
    }

    /// Scale so the first embedding is positive; both square roots of a
    /// square differ by sign, this picks one deterministically.
    pub fn with_positive_first_embedding(self) -> Self {
        if self.embedding_sign(0) < 0 {
            -&self
        } else {
            self
        }
    }
}

/// Sign of u + v√d by exact comparison of u² and d·v².
fn sign_of_u_plus_v_sqrt(d: u64, u: &BigInt, v: &BigInt) -> i32 {
    if v.is_zero() {
        return sign_i32(u);
    }
    if u.is_zero() {
        return sign_i32(v);
    }
    match (u.is_positive(), v.is_positive()) {
        (true, true) => 1,
        (false, false) => -1,
        (true, false) => {
            // u > 0 > v: positive iff u² > d·v².
            let lhs = u * u;
            let rhs = BigInt::from(d) * v * v;
            if lhs > rhs {
                1
            } else if lhs < rhs {
                -1
            } else {
                0
            }
        }
        (false, true) => -sign_of_u_plus_v_sqrt(d, &(-u), &(-v)),
    }
}

fn sign_i32(n: &BigInt) -> i32 {
    if n.is_positive() {
        1
    } else if n.is_negative() {
        -1
    } else {
        0
    }
}

/// Exact √ of a nonnegative rational, if it is a perfect square.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = int_sqrt_exact(r.numer())?;
    let d = int_sqrt_exact(r.denom())?;
    Some(Rat::new(n, d))
}

pub fn int_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

fn check_same_field(a: &FieldElem, b: &FieldElem) {
    assert_eq!(a.d, b.d, "mixed quadratic fields");
}

impl Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        check_same_field(self, rhs);
        FieldElem::new(
            self.d,
            &self.u * &rhs.den + &rhs.u * &self.den,
            &self.v * &rhs.den + &rhs.v * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        self + &(-rhs)
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem {
            d: self.d,
            u: -self.u.clone(),
            v: -self.v.clone(),
            den: self.den.clone(),
        }
    }
}

impl Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        check_same_field(self, rhs);
        let d = BigInt::from(self.d);
        FieldElem::new(
            self.d,
            &self.u * &rhs.u + &d * &self.v * &rhs.v,
            &self.u * &rhs.v + &self.v * &rhs.u,
            &self.den * &rhs.den,
        )
    }
}

impl Div for &FieldElem {
    type Output = FieldElem;
    fn div(self, rhs: &FieldElem) -> FieldElem {
        self * &rhs.inv()
    }
}
