//! Fundamental units of real quadratic fields via continued fractions.

use super::elem::{FieldElem, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("d = {0} is not square-free")]
    NotSquareFree(u64),
    #[error("d = {0} is below 2")]
    TooSmall(u64),
}

pub fn is_square_free(d: u64) -> bool {
    if d == 0 {
        return false;
    }
    let mut n = d;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Fundamental-unit data for F = Q(√d).
#[derive(Debug, Clone)]
pub struct FundUnitData {
    pub d: u64,
    /// ε > 1 generating O_F^× / {±1}.
    pub eps: FieldElem,
    /// Nm_{F/Q}(ε) ∈ {−1, +1}.
    pub norm_sign: i32,
    pub two_eps_square: bool,
    pub three_eps_square: bool,
    /// ϑ with ε = 2ϑ², present iff 2ε ∈ F^×².
    pub theta: Option<FieldElem>,
    /// ς with ε = 3ς², present iff 3ε ∈ F^×².
    pub sigma: Option<FieldElem>,
}

impl FundUnitData {
    /// The representative set 𝒮 of totally positive units modulo squares:
    /// {1} when Nm(ε) = −1, {1, ε} when Nm(ε) = +1.
    pub fn s_set(&self) -> Vec<FieldElem> {
        let mut s = vec![FieldElem::one(self.d)];
        if self.norm_sign == 1 {
            s.push(self.eps.clone());
        }
        s
    }

    /// Integer coordinates (a, b, den) of ε = (a + b√d)/den, den ∈ {1, 2}.
    pub fn eps_coords(&self) -> (BigInt, BigInt, BigInt) {
        (self.eps.u.clone(), self.eps.v.clone(), self.eps.den.clone())
    }
}

/// Fundamental unit of O_F by the PQa continued-fraction loop on √d,
/// with the index-3 half-integral descent for d ≡ 1 (mod 4).
pub fn fundamental_unit(d: u64) -> Result<FundUnitData, FieldError> {
    if d < 2 {
        return Err(FieldError::TooSmall(d));
    }
    if !is_square_free(d) {
        return Err(FieldError::NotSquareFree(d));
    }
    let (eps0, parity) = pell_unit(d);
    let norm0 = if parity % 2 == 1 { -1 } else { 1 };
    let (eps, norm_sign) = if d % 4 == 1 {
        match half_integral_cube_root(d, &eps0) {
            Some((e, n)) => (e, n),
            None => (eps0, norm0),
        }
    } else {
        (eps0, norm0)
    };
    debug_assert_eq!(
        eps.norm(),
        Rat::from_integer(BigInt::from(norm_sign)),
        "unit norm mismatch at d={d}"
    );
    debug_assert_eq!(eps.embedding_sign(0), 1);

    let half = |x: &FieldElem, k: i64| {
        let divisor = FieldElem::from_int(d, k);
        (x / &divisor).sqrt().map(FieldElem::with_positive_first_embedding)
    };
    let theta = half(&eps, 2);
    let sigma = half(&eps, 3);
    Ok(FundUnitData {
        d,
        two_eps_square: theta.is_some(),
        three_eps_square: sigma.is_some(),
        theta,
        sigma,
        eps,
        norm_sign,
    })
}

/// Fundamental solution of x² − d·y² = ±1 over Z[√d]; returns the unit and
/// the period length l (norm is (−1)^l).
fn pell_unit(d: u64) -> (FieldElem, u32) {
    let d_big = BigInt::from(d);
    let a0 = d_big.sqrt();
    assert!(&a0 * &a0 != d_big, "square d");
    let mut m = BigInt::zero();
    let mut q = BigInt::one();
    let mut a = a0.clone();
    let (mut h_prev, mut h) = (BigInt::one(), a0.clone());
    let (mut k_prev, mut k) = (BigInt::zero(), BigInt::one());
    let mut l = 0u32;
    loop {
        l += 1;
        m = &a * &q - &m;
        q = (&d_big - &m * &m) / &q;
        a = (&a0 + &m).div_floor(&q);
        if q.is_one() {
            return (FieldElem::new(d, h, k, BigInt::one()), l);
        }
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
    }
}

/// When [O_F^× : Z[√d]^×] = 3 (possible only for d ≡ 1 mod 4), the Z[√d]
/// fundamental unit x + y√d is ((t + w√d)/2)³; solve t³ − 3nt = 2x for both
/// norm signs n, then w = 2y/(t² − n).
fn half_integral_cube_root(d: u64, eps0: &FieldElem) -> Option<(FieldElem, i32)> {
    let x = eps0.u.clone();
    let y = eps0.v.clone();
    let d_big = BigInt::from(d);
    let target: BigInt = &x * 2;
    let t0 = target.cbrt();
    for n in [1i32, -1] {
        let n_big = BigInt::from(n);
        for delta in -1i64..=1 {
            let t = &t0 + BigInt::from(delta);
            if t.is_zero() || (&t * &t * &t - 3 * &n_big * &t) != target {
                continue;
            }
            let denom = &t * &t - &n_big;
            if denom.is_zero() {
                continue;
            }
            let (w, rem) = (&y * 2i32).div_rem(&denom);
            if !rem.is_zero() || (&t - &w).is_odd() {
                continue;
            }
            if (&t * &t - &d_big * &w * &w) != 4 * &n_big {
                continue;
            }
            let cand = FieldElem::new(d, t.clone(), w.clone(), BigInt::from(2));
            if cand.embedding_sign(0) > 0 && !cand.is_one() {
                return Some((cand, n));
            }
        }
    }
    None
}

/// Case tags for the congruence dispatch of the §6/§7-style tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulusTag {
    /// −ε as a residue mod 4O_F (dyadic ramification of F(√−ε)).
    MinusEpsMod4,
    /// ε mod 3O_F (d ≢ 0 mod 3 only).
    EpsMod3,
    /// ε mod the ramified prime 𝔮 above 3 (3 | d only).
    EpsModQ3,
    /// Parity of a where ε = a + b√d (integral coordinates).
    ParityOfA,
    AMod4,
    BMod4,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModulusError {
    #[error("unsupported modulus tag {0:?} for d = {1}")]
    UnsupportedTag(ModulusTag, u64),
    #[error("d = {0} is below 6 and handled by the prime-discriminant path")]
    SmallD(u64),
}

/// Dispatch label for a fundamental unit against the case tables.
pub fn residue_conditions(fu: &FundUnitData, tag: ModulusTag) -> Result<String, ModulusError> {
    let d = fu.d;
    if d < 6 {
        return Err(ModulusError::SmallD(d));
    }
    let (a, b, den) = fu.eps_coords();
    let integral = den.is_one();
    match tag {
        ModulusTag::ParityOfA => {
            if !integral {
                return Err(ModulusError::UnsupportedTag(tag, d));
            }
            Ok(if a.is_even() { "a even" } else { "a odd" }.to_string())
        }
        ModulusTag::AMod4 => {
            if !integral {
                return Err(ModulusError::UnsupportedTag(tag, d));
            }
            let r = a.mod_floor(&BigInt::from(4));
            if d % 8 == 1 {
                Ok(format!("d≡1 mod 8, a≡{} mod 4", r))
            } else {
                Ok(format!("a≡{} mod 4", r))
            }
        }
        ModulusTag::BMod4 => {
            if !integral {
                return Err(ModulusError::UnsupportedTag(tag, d));
            }
            Ok(format!("b≡{} mod 4", b.mod_floor(&BigInt::from(4))))
        }
        ModulusTag::EpsMod3 => {
            if d % 3 == 0 {
                return Err(ModulusError::UnsupportedTag(tag, d));
            }
            // ε ≡ ±1 mod 3O_F iff both coordinates of 2ε agree with ±2 mod 3.
            let (ta, tb) = double_coords(&a, &b, &den);
            let three = BigInt::from(3);
            let (ra, rb) = (ta.mod_floor(&three), tb.mod_floor(&three));
            if rb.is_zero() && ra == BigInt::from(2) {
                Ok("ε≡1 mod 3O_F".to_string())
            } else if rb.is_zero() && ra.is_one() {
                Ok("ε≡−1 mod 3O_F".to_string())
            } else {
                Ok("ε≢±1 mod 3O_F".to_string())
            }
        }
        ModulusTag::EpsModQ3 => {
            if d % 3 != 0 {
                return Err(ModulusError::UnsupportedTag(tag, d));
            }
            // Residue of ε at 𝔮 = (3, √d): √d ↦ 0, so ε ↦ a (halved if den=2).
            let (ta, _) = double_coords(&a, &b, &den);
            // ta = 2a mod 3; ε ≡ ta·2⁻¹ = 2·ta mod 3.
            let r = (ta * 2i32).mod_floor(&BigInt::from(3));
            if r.is_one() {
                Ok("ε≡1 mod 𝔮".to_string())
            } else if r == BigInt::from(2) {
                Ok("ε≡−1 mod 𝔮".to_string())
            } else {
                Ok("ε≡0 mod 𝔮".to_string())
            }
        }
        ModulusTag::MinusEpsMod4 => {
            Ok(if minus_eps_square_mod_4(fu) {
                "−ε ≡ square mod 4O_F"
            } else {
                "−ε not square mod 4O_F"
            }
            .to_string())
        }
    }
}

fn double_coords(a: &BigInt, b: &BigInt, den: &BigInt) -> (BigInt, BigInt) {
    if den.is_one() {
        (2 * a, 2 * b)
    } else {
        (a.clone(), b.clone())
    }
}

/// Whether −ε is congruent to a square modulo 4O_F (the dyadic
/// unramifiedness criterion for F(√−ε)/F).
pub fn minus_eps_square_mod_4(fu: &FundUnitData) -> bool {
    minus_eps_square_witness(fu).is_some()
}

/// A witness t ∈ O_F with t² ≡ −ε (mod 4O_F), when one exists.
/// Any such t makes (t + √−ε)/2 integral with trivial conductor.
pub fn minus_eps_square_witness(fu: &FundUnitData) -> Option<FieldElem> {
    let d = fu.d;
    let four = BigInt::from(4);
    let target = {
        let m = -&fu.eps;
        let (a, b) = m.omega_coords().expect("ε is integral");
        (a.mod_floor(&four), b.mod_floor(&four))
    };
    for x0 in 0..4i64 {
        for x1 in 0..4i64 {
            let x = FieldElem::from_omega(d, &BigInt::from(x0), &BigInt::from(x1));
            let sq = &x * &x;
            let (a, b) = sq.omega_coords().expect("square of integral");
            if (a.mod_floor(&four), b.mod_floor(&four)) == target {
                return Some(x);
            }
        }
    }
    None
}
