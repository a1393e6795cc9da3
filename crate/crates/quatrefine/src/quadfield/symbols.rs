//! Quadratic residue symbols over Q and the splitting symbol of F/Q.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Kronecker symbol (a/n), the full extension of Jacobi to all n.
pub fn kronecker(a: &BigInt, n: &BigInt) -> i32 {
    let mut a = a.clone();
    let mut n = n.clone();
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    let mut result = 1i32;
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            result = -result;
        }
    }
    let mut v = 0u32;
    while n.is_even() {
        n /= 2;
        v += 1;
    }
    if v > 0 {
        if a.is_even() {
            return 0;
        }
        // (2/a) = −1 for a ≡ ±3 mod 8.
        if v % 2 == 1 && matches!(mod8(&a), 3 | 5) {
            result = -result;
        }
    }
    a = a.mod_floor(&n);
    while !a.is_zero() {
        while a.is_even() {
            a /= 2;
            if matches!(mod8(&n), 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if mod8(&a) % 4 == 3 && mod8(&n) % 4 == 3 {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() { result } else { 0 }
}

fn mod8(x: &BigInt) -> u8 {
    x.mod_floor(&BigInt::from(8)).to_u8().unwrap()
}

pub fn kronecker_i64(a: i64, n: i64) -> i32 {
    kronecker(&BigInt::from(a), &BigInt::from(n))
}

/// Field discriminant of Q(√d) for square-free d > 1.
pub fn field_disc(d: u64) -> i64 {
    if d % 4 == 1 { d as i64 } else { 4 * d as i64 }
}

/// The symbol (F/p): +1, 0, −1 as p splits, ramifies, or stays inert in F.
pub fn artin_symbol(d: u64, p: u64) -> i32 {
    kronecker_i64(field_disc(d), p as i64)
}
