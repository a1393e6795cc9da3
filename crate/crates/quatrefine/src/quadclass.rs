//! Class numbers of quadratic fields and ζ_F(−1), by exact enumeration.
//!
//! Imaginary class numbers count reduced positive forms; real class
//! numbers count rho-cycles of reduced indefinite forms (the narrow
//! count) and divide by two when the fundamental unit has norm +1.

use crate::quadfield::ideal::factor;
use crate::quadfield::symbols::kronecker;
use crate::quadfield::unit::fundamental_unit;
use crate::quadfield::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassError {
    #[error("non-discriminant input {0}")]
    NonDiscriminant(BigInt),
}

/// Whether D is a fundamental discriminant (of a quadratic field; 1 is not).
pub fn is_fundamental_discriminant(dd: &BigInt) -> bool {
    if dd.is_one() || dd.is_zero() {
        return false;
    }
    let four = BigInt::from(4);
    let m = dd.mod_floor(&four).to_u8().unwrap();
    match m {
        1 => factor(dd).iter().all(|(_, e)| *e == 1),
        0 => {
            let q: BigInt = dd / &four;
            let qm = q.mod_floor(&four).to_u8().unwrap();
            (qm == 2 || qm == 3) && factor(&q).iter().all(|(_, e)| *e == 1)
        }
        _ => false,
    }
}

/// Fundamental discriminant of Q(√m) for nonsquare m ≠ 0.
pub fn fundamental_discriminant(m: &BigInt) -> Result<BigInt, ClassError> {
    if m.is_zero() || (m.is_positive() && (m.sqrt().pow(2) == *m)) {
        return Err(ClassError::NonDiscriminant(m.clone()));
    }
    let mut core = if m.is_negative() { -BigInt::one() } else { BigInt::one() };
    for (p, e) in factor(m) {
        if e % 2 == 1 {
            core *= p;
        }
    }
    let dd = if core.mod_floor(&BigInt::from(4)).is_one() { core.clone() } else { 4 * &core };
    Ok(dd)
}

/// h(Q(√m)) for any nonsquare integer m ≠ 0.
pub fn class_number(m: &BigInt) -> Result<u64, ClassError> {
    let dd = fundamental_discriminant(m)?;
    if dd.is_negative() {
        class_number_imaginary(&dd)
    } else {
        class_number_real(&dd)
    }
}

pub fn class_number_i64(m: i64) -> u64 {
    class_number(&BigInt::from(m)).unwrap()
}

/// Class number of the imaginary quadratic field of fundamental
/// discriminant D < 0, counting reduced forms (a, b, c).
pub fn class_number_imaginary(dd: &BigInt) -> Result<u64, ClassError> {
    if !dd.is_negative() || !is_fundamental_discriminant(dd) {
        return Err(ClassError::NonDiscriminant(dd.clone()));
    }
    let abs_d = dd.abs().to_i64().expect("discriminant fits i64");
    let mut count = 0u64;
    let mut b = abs_d % 2;
    while 3 * b * b <= abs_d {
        let n = (b * b + abs_d) / 4;
        let mut a = if b == 0 { 1 } else { b };
        while a * a <= n {
            if a > 0 && n % a == 0 {
                let c = n / a;
                // b = 0, a = b, or a = c each identify the ±b pair.
                count += if b == 0 || a == b || a == c { 1 } else { 2 };
            }
            a += 1;
        }
        b += 2;
    }
    Ok(count)
}

/// Dirichlet's character-sum class number for D < −4; independent of the
/// form count.
pub fn class_number_imaginary_charsum(dd: &BigInt) -> u64 {
    let abs_d = dd.abs();
    let mut s = BigInt::zero();
    let mut a = BigInt::one();
    while a < abs_d {
        s += kronecker(dd, &a) * &a;
        a += 1;
    }
    let (q, r) = s.abs().div_rem(&abs_d);
    assert!(r.is_zero(), "character sum not divisible by |D|");
    q.to_u64().unwrap()
}

/// Narrow class number of the real quadratic field of fundamental
/// discriminant D > 0: the number of rho-cycles of reduced indefinite
/// forms.
pub fn narrow_class_number_real(dd: &BigInt) -> Result<u64, ClassError> {
    if !dd.is_positive() || !is_fundamental_discriminant(dd) {
        return Err(ClassError::NonDiscriminant(dd.clone()));
    }
    let dd = dd.to_i64().expect("discriminant fits i64");
    let t = BigInt::from(dd).sqrt().to_i64().unwrap(); // ⌊√D⌋
    let reduced = |a: i64, b: i64| -> bool {
        let two_a = 2 * a.abs();
        b >= 1 && b * b < dd && (two_a + b) * (two_a + b) > dd && (two_a - b) * (two_a - b) < dd
    };
    let mut forms: Vec<(i64, i64, i64)> = Vec::new();
    for b in 1..=t {
        if (dd - b) % 2 != 0 {
            continue;
        }
        let n = (dd - b * b) / 4;
        for a_abs in 1..=n {
            if n % a_abs != 0 {
                continue;
            }
            if !reduced(a_abs, b) {
                continue;
            }
            let c = -(n / a_abs);
            forms.push((a_abs, b, c));
            forms.push((-a_abs, b, -c));
        }
    }
    // rho: (a, b, c) → (c, b', (b'² − D)/4c) with b' ≡ −b (mod 2|c|)
    // pushed into (√D − 2|c|, √D).
    let rho = |f: (i64, i64, i64)| -> (i64, i64, i64) {
        let (_, b, c) = f;
        let m = 2 * c.abs();
        let bb = t - (t + b).rem_euclid(m);
        (c, bb, (bb * bb - dd) / (4 * c))
    };
    let mut seen: std::collections::HashSet<(i64, i64, i64)> = std::collections::HashSet::new();
    let mut cycles = 0u64;
    for &f in &forms {
        if seen.contains(&f) {
            continue;
        }
        cycles += 1;
        let mut g = f;
        loop {
            seen.insert(g);
            g = rho(g);
            if g == f {
                break;
            }
        }
    }
    Ok(cycles)
}

/// Wide class number h(F) for fundamental D > 0.
pub fn class_number_real(dd: &BigInt) -> Result<u64, ClassError> {
    let narrow = narrow_class_number_real(dd)?;
    let d = squarefree_core_u64(dd);
    let div = if fundamental_unit(d).unwrap().norm_sign == 1 { 2 } else { 1 };
    assert_eq!(narrow % div, 0);
    Ok(narrow / div)
}

fn squarefree_core_u64(dd: &BigInt) -> u64 {
    let mut core = BigInt::one();
    for (p, e) in factor(dd) {
        if e % 2 == 1 {
            core *= p;
        }
    }
    core.to_u64().unwrap()
}

/// ζ_F(−1) = (1/60)·Σ_{b ≡ D (2), b² < D} σ₁((D − b²)/4), D = disc(F).
pub fn zeta_minus_one(d: u64) -> Rat {
    let dd = crate::quadfield::symbols::field_disc(d);
    let mut total = BigInt::zero();
    let mut b = dd % 2;
    while b * b < dd {
        let s = sigma1((dd - b * b) / 4);
        total += if b == 0 { s } else { 2 * s };
        b += 2;
    }
    Rat::new(total, BigInt::from(60))
}

fn sigma1(n: i64) -> BigInt {
    assert!(n > 0);
    let mut s = BigInt::one();
    for (p, e) in factor(&BigInt::from(n)) {
        s *= (p.pow(e + 1) - 1) / (p - 1);
    }
    s
}
