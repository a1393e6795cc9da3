//! The finite list 𝓑 of quadratic O_F-orders in CM-extensions of F whose
//! unit group is strictly larger than O_F^×.
//!
//! Only three CM-extensions of F = Q(√d) can carry such orders: F(√−1),
//! F(√−3), and, when Nm(ε) = 1, F(√−ε).  Within each field the orders
//! with extra units form a short chain B = O_F + 𝔠O_K with 𝔠 dividing
//! the conductor of the smallest member, so a descriptor is determined by
//! its field and conductor.  Class numbers are computed twice on every
//! call: once by the per-row closed form and once by the conductor
//! formula
//!
//!   h(B) = h(K) · Nm(𝔣) · ∏_{𝔭∣𝔣} (1 − (K/𝔭)/Nm 𝔭) / [O_K^× : B^×],
//!
//! and the two values must agree.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::quadclass::class_number_i64;
use crate::quadfield::ideal::legendre;
use crate::quadfield::symbols::kronecker_i64;
use crate::quadfield::{
    artin_symbol, factor, prime_above, primes_above, splitting_symbol, FieldElem, FundUnitData,
    IdealF, PrimeIdealF, Rat,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CmOrderError {
    #[error("d = {0} is below the table range; the small-prime tables handle it")]
    SmallD(u64),
    #[error("called with Nm(ε) = −1")]
    NormMinusOne,
}

/// Which CM-extension of F the order lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmFieldTag {
    /// K = F(√−1).
    MinusOne,
    /// K = F(√−3).
    MinusThree,
    /// K = F(√−ε), defined only when Nm(ε) = 1.  When 3ε ∈ F^×2 this
    /// field coincides with F(√−3) and the tag marks the orders of unit
    /// index two inside it.
    MinusEps,
}

impl fmt::Display for CmFieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CmFieldTag::MinusOne => "F(√−1)",
            CmFieldTag::MinusThree => "F(√−3)",
            CmFieldTag::MinusEps => "F(√−ε)",
        };
        write!(f, "{s}")
    }
}

/// One order B ∈ 𝓑: its field, conductor 𝔣_B, unit index
/// w(B) = [B^× : O_F^×], the Hasse unit index Q of the ambient field, the
/// minimal polynomial x² − t·x + n of a unit generating B^×/O_F^×, and
/// its class number (an integer, kept rational for exact intermediates).
#[derive(Debug, Clone)]
pub struct CMOrderDescriptor {
    pub field_tag: CmFieldTag,
    pub conductor: IdealF,
    pub w: u32,
    pub hasse_q: u32,
    pub gen_minpoly: (FieldElem, FieldElem),
    pub h_b: Rat,
}

impl CMOrderDescriptor {
    /// Conventional name of the row, determined by field and conductor.
    pub fn label(&self, d: u64) -> String {
        let nf = ideal_norm(&self.conductor);
        match (self.field_tag, nf) {
            (CmFieldTag::MinusOne, 1) | (CmFieldTag::MinusThree, 1) => "O_K".into(),
            (CmFieldTag::MinusOne, 2) if d % 4 == 3 => "B_{1,2}".into(),
            (CmFieldTag::MinusOne, _) => "O_F[√−1]".into(),
            (CmFieldTag::MinusThree, _) => "O_F[ζ_6]".into(),
            (CmFieldTag::MinusEps, 1) => "O_L".into(),
            (CmFieldTag::MinusEps, 2) => "O_F + 𝔭O_L".into(),
            (CmFieldTag::MinusEps, _) => "O_F[√−ε]".into(),
        }
    }
}

/// The complete list 𝓑 for square-free d ≥ 6, in field order F(√−1),
/// F(√−3), F(√−ε).  Every class number is double-checked internally.
pub fn enumerate_b(fu: &FundUnitData) -> Result<Vec<CMOrderDescriptor>, CmOrderError> {
    if fu.d < 6 {
        return Err(CmOrderError::SmallD(fu.d));
    }
    let mut out = Vec::new();
    gauss_rows(fu, &mut out);
    eisenstein_rows(fu, &mut out);
    if fu.norm_sign == 1 {
        surd_rows(fu, &mut out);
    }
    for b in &mut out {
        b.h_b = Rat::from_integer(class_number_b(b, fu));
    }
    Ok(out)
}

/// h(B), computed by the closed form for the row and cross-checked
/// against the conductor formula with the unit index [O_K^× : B^×].
pub fn class_number_b(b: &CMOrderDescriptor, fu: &FundUnitData) -> BigInt {
    let closed = closed_form_h(b, fu);
    let generic = conductor_formula_h(b, fu);
    assert_eq!(
        closed,
        generic,
        "class-number routes disagree for {} in {} at d = {}",
        b.label(fu.d),
        b.field_tag,
        fu.d
    );
    assert!(closed.is_integer() && closed.is_positive(), "h(B) must be a positive integer");
    closed.to_integer()
}

/// The square-free pair {r, s} with rs ∈ {d, 4d} and rε, sε ∈ F^×2,
/// obtained from Tr(ε) ± 2 by stripping perfect-square factors.
/// Returned in increasing order.
pub fn r_s_pair(fu: &FundUnitData) -> Result<(u64, u64), CmOrderError> {
    if fu.norm_sign != 1 {
        return Err(CmOrderError::NormMinusOne);
    }
    let tr = fu.eps.trace();
    assert!(tr.is_integer());
    let t = tr.to_integer();
    let mut r = squarefree_kernel(&(&t + 2));
    let mut s = squarefree_kernel(&(&t - 2));
    if r > s {
        std::mem::swap(&mut r, &mut s);
    }
    let d = BigInt::from(fu.d);
    let rs = &r * &s;
    assert!(rs == d || rs == 4 * &d, "rs must be d or 4d");
    for m in [&r, &s] {
        let me = &FieldElem::from_rat(fu.d, &Rat::from_integer(m.clone())) * &fu.eps;
        assert!(me.sqrt().is_some(), "rε and sε must be squares in F");
    }
    Ok((r.to_u64().unwrap(), s.to_u64().unwrap()))
}

/// Whether F(√−ε)/F is ramified at the dyadic primes of F (it is either
/// ramified at all of them or at none).  Decided by the residue class of
/// ε = a + b√d (or (a + b√d)/2) modulo 4.
pub fn surd_field_is_ramified(fu: &FundUnitData) -> bool {
    assert_eq!(fu.norm_sign, 1);
    let (a, b, den) = fu.eps_coords();
    let four = BigInt::from(4);
    let a4 = a.mod_floor(&four);
    let b4 = b.mod_floor(&four);
    match fu.d % 4 {
        1 => {
            if den.is_one() {
                // a odd and 4 | b are forced by a² − b²d = 1.
                assert!(b4.is_zero() || fu.d % 8 == 5);
                a4 == BigInt::one()
            } else {
                // Half-integral ε happens only for d ≡ 5 (mod 8).
                assert_eq!(fu.d % 8, 5);
                a4 == BigInt::from(3)
            }
        }
        3 => a4.is_even(),
        _ => {
            (b4.is_zero() && a4.is_one()) || (b4 == BigInt::from(2) && a4 == BigInt::from(3))
        }
    }
}

fn gauss_rows(fu: &FundUnitData, out: &mut Vec<CMOrderDescriptor>) {
    let d = fu.d;
    let q = if fu.two_eps_square { 2 } else { 1 };
    assert!(d % 4 != 1 || q == 1, "2ε ∈ F^×2 needs 2 ramified in F");
    let top = if q == 2 { order_four_minpoly(fu) } else { order_two_minpoly(d, fu) };
    match d % 4 {
        1 => {
            out.push(row(CmFieldTag::MinusOne, IdealF::one(d), 2, 1, order_two_minpoly(d, fu)));
        }
        2 => {
            let p = prime_above(d, 2);
            out.push(row(CmFieldTag::MinusOne, IdealF::one(d), 2 * q, q, top));
            out.push(row(
                CmFieldTag::MinusOne,
                IdealF::from_factors(d, vec![(p, 1)]),
                2,
                q,
                order_two_minpoly(d, fu),
            ));
        }
        _ => {
            let p = prime_above(d, 2);
            out.push(row(CmFieldTag::MinusOne, IdealF::one(d), 2 * q, q, top.clone()));
            out.push(row(CmFieldTag::MinusOne, IdealF::from_factors(d, vec![(p.clone(), 1)]), 2 * q, q, top));
            out.push(row(
                CmFieldTag::MinusOne,
                IdealF::from_factors(d, vec![(p, 2)]),
                2,
                q,
                order_two_minpoly(d, fu),
            ));
        }
    }
}

fn eisenstein_rows(fu: &FundUnitData, out: &mut Vec<CMOrderDescriptor>) {
    let d = fu.d;
    let q = if fu.three_eps_square { 2 } else { 1 };
    assert!(d % 3 == 0 || q == 1, "3ε ∈ F^×2 needs 3 ramified in F");
    let ord3 = (FieldElem::one(d), FieldElem::one(d));
    if d % 3 == 0 {
        let top = if q == 2 { order_six_minpoly(fu) } else { ord3.clone() };
        out.push(row(CmFieldTag::MinusThree, IdealF::one(d), 3 * q, q, top));
        let quad = prime_above(d, 3);
        out.push(row(
            CmFieldTag::MinusThree,
            IdealF::from_factors(d, vec![(quad, 1)]),
            3,
            q,
            ord3,
        ));
    } else {
        out.push(row(CmFieldTag::MinusThree, IdealF::one(d), 3, 1, ord3));
    }
}

/// Rows for F(√−ε).  When 3ε ∈ F^×2 the field equals F(√−3) and O_L has
/// already appeared as its maximal order, so only the proper suborders
/// O_F + 𝔠O_L (all of unit index two) are added here.
fn surd_rows(fu: &FundUnitData, out: &mut Vec<CMOrderDescriptor>) {
    let d = fu.d;
    let merged = fu.three_eps_square;
    let ram = surd_field_is_ramified(fu);
    assert!(!(merged && ram), "F(√−3)/F is unramified at the dyadic primes");
    let mp = || surd_minpoly(fu);
    if !merged {
        out.push(row(CmFieldTag::MinusEps, IdealF::one(d), 2, 2, mp()));
    }
    if ram {
        // Conductor of O_F[√−ε]: trivial unless d ≡ 2 (mod 4), where it
        // is the dyadic prime and O_F[√−ε] = O_F + 𝔭O_L is a second row.
        if d % 4 == 2 {
            let p = prime_above(d, 2);
            out.push(row(CmFieldTag::MinusEps, IdealF::from_factors(d, vec![(p, 1)]), 2, 2, mp()));
        }
    } else {
        // Conductor 2O_F; one row per divisor 𝔠 ≠ O_F of 2O_F.
        match d % 8 {
            1 => {
                let ps = primes_above(d, 2);
                for p in &ps {
                    out.push(row(
                        CmFieldTag::MinusEps,
                        IdealF::from_factors(d, vec![(p.clone(), 1)]),
                        2,
                        2,
                        mp(),
                    ));
                }
                let two = IdealF::from_factors(d, vec![(ps[0].clone(), 1), (ps[1].clone(), 1)]);
                out.push(row(CmFieldTag::MinusEps, two, 2, 2, mp()));
            }
            5 => {
                let p = prime_above(d, 2);
                out.push(row(CmFieldTag::MinusEps, IdealF::from_factors(d, vec![(p, 1)]), 2, 2, mp()));
            }
            _ => {
                let p = prime_above(d, 2);
                out.push(row(
                    CmFieldTag::MinusEps,
                    IdealF::from_factors(d, vec![(p.clone(), 1)]),
                    2,
                    2,
                    mp(),
                ));
                out.push(row(CmFieldTag::MinusEps, IdealF::from_factors(d, vec![(p, 2)]), 2, 2, mp()));
            }
        }
    }
}

fn row(
    field_tag: CmFieldTag,
    conductor: IdealF,
    w: u32,
    hasse_q: u32,
    gen_minpoly: (FieldElem, FieldElem),
) -> CMOrderDescriptor {
    CMOrderDescriptor { field_tag, conductor, w, hasse_q, gen_minpoly, h_b: Rat::zero() }
}

fn order_two_minpoly(d: u64, _fu: &FundUnitData) -> (FieldElem, FieldElem) {
    (FieldElem::zero(d), FieldElem::one(d))
}

/// x² − 2ϑx + ε, satisfied by η = ϑ(1 + √−1) with η² = ε√−1.
fn order_four_minpoly(fu: &FundUnitData) -> (FieldElem, FieldElem) {
    let theta = fu.theta.clone().expect("2ε ∈ F^×2 provides ϑ");
    (&FieldElem::from_int(fu.d, 2) * &theta, fu.eps.clone())
}

/// x² − 3ςx + ε, satisfied by η = ς(3 + √−3)/2.
fn order_six_minpoly(fu: &FundUnitData) -> (FieldElem, FieldElem) {
    let sigma = fu.sigma.clone().expect("3ε ∈ F^×2 provides ς");
    (&FieldElem::from_int(fu.d, 3) * &sigma, fu.eps.clone())
}

/// x² + ε, satisfied by √−ε.
fn surd_minpoly(fu: &FundUnitData) -> (FieldElem, FieldElem) {
    (FieldElem::zero(fu.d), fu.eps.clone())
}

fn hq(m: i64) -> Rat {
    Rat::from_integer(BigInt::from(class_number_i64(m)))
}

fn half() -> Rat {
    Rat::new(BigInt::one(), BigInt::from(2))
}

fn ideal_norm(f: &IdealF) -> u64 {
    f.absolute_norm().to_integer().to_u64().unwrap()
}

fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Per-row closed form for h(B), selected by field, conductor norm, and
/// the residue class of d.
fn closed_form_h(b: &CMOrderDescriptor, fu: &FundUnitData) -> Rat {
    let d = fu.d;
    let h_d = hq(d as i64);
    let nf = ideal_norm(&b.conductor);
    let q = int(b.hasse_q as i64);
    match b.field_tag {
        CmFieldTag::MinusOne => {
            let hm = hq(-(d as i64));
            // (Q(√−d)/2) enters only for d ≡ 3 (mod 4), where −d ≡ 1 (mod 4)
            // is the fundamental discriminant.
            let s2 = int(kronecker_i64(-(d as i64), 2) as i64);
            match (d % 4, nf) {
                (1, 1) => half() * h_d * hm,
                (_, 1) => half() * q * h_d * hm,
                (2, 2) => h_d * hm,
                (3, 2) => half() * q * h_d * hm * (int(2) - s2),
                (3, 4) => h_d * hm * (int(2) - s2),
                _ => unreachable!("no such row"),
            }
        }
        CmFieldTag::MinusThree => {
            let hm = hq(-3 * d as i64);
            match nf {
                1 => half() * q * h_d * hm,
                3 => {
                    let m = (d / 3) as i64;
                    let s3 = int(legendre(&BigInt::from(-m), 3) as i64);
                    half() * (int(3) - s3) * h_d * hm
                }
                _ => unreachable!("no such row"),
            }
        }
        CmFieldTag::MinusEps => {
            if fu.three_eps_square {
                let hm = hq(-3 * d as i64);
                match nf {
                    2 => h_d * hm,
                    4 => (int(2) + int(artin_symbol(d, 2) as i64)) * h_d * hm,
                    _ => unreachable!("no such row"),
                }
            } else {
                let (r, s) = r_s_pair(fu).expect("rows exist only when Nm(ε) = 1");
                let h_l = h_d * hq(-(r as i64)) * hq(-(s as i64));
                if nf == 1 {
                    h_l
                } else if surd_field_is_ramified(fu) {
                    int(2) * h_l
                } else {
                    let syms: Vec<Rat> = b
                        .conductor
                        .support()
                        .iter()
                        .map(|p| int(surd_symbol(fu, p) as i64))
                        .collect();
                    match (nf, d % 8) {
                        (2, _) => (int(2) - syms[0].clone()) * h_l,
                        (4, 1) => {
                            (int(2) - syms[0].clone()) * (int(2) - syms[1].clone()) * h_l
                        }
                        (4, 5) => (int(4) - syms[0].clone()) * h_l,
                        (4, _) => int(2) * (int(2) - syms[0].clone()) * h_l,
                        _ => unreachable!("no such row"),
                    }
                }
            }
        }
    }
}

/// The conductor formula h(K)·Nm(𝔣)·∏(1 − (K/𝔭)/Nm𝔭)·w(B)/w(O_K).
fn conductor_formula_h(b: &CMOrderDescriptor, fu: &FundUnitData) -> Rat {
    let (h_k, w_ok) = ambient_field_data(b.field_tag, fu);
    let mut h = h_k * Rat::from_integer(BigInt::from(ideal_norm(&b.conductor)));
    for p in b.conductor.support() {
        let s = int(cm_symbol(b.field_tag, fu, &p) as i64);
        let np = Rat::from_integer(p.absolute_norm());
        h = h * (Rat::one() - s / np);
    }
    h * Rat::new(BigInt::from(b.w), BigInt::from(w_ok))
}

/// Class number and unit index w(O_K) of the ambient field of a row.
fn ambient_field_data(tag: CmFieldTag, fu: &FundUnitData) -> (Rat, u32) {
    let d = fu.d;
    let h_d = hq(d as i64);
    match tag {
        CmFieldTag::MinusOne => {
            let q = if fu.two_eps_square { 2 } else { 1 };
            (half() * int(q as i64) * h_d * hq(-(d as i64)), 2 * q)
        }
        CmFieldTag::MinusThree => {
            let q = if fu.three_eps_square { 2 } else { 1 };
            (half() * int(q as i64) * h_d * hq(-3 * d as i64), 3 * q)
        }
        CmFieldTag::MinusEps => {
            if fu.three_eps_square {
                (h_d * hq(-3 * d as i64), 6)
            } else {
                let (r, s) = r_s_pair(fu).expect("Nm(ε) = 1");
                (h_d * hq(-(r as i64)) * hq(-(s as i64)), 2)
            }
        }
    }
}

/// Artin symbol (K/𝔭) of the ambient field at 𝔭.
fn cm_symbol(tag: CmFieldTag, fu: &FundUnitData, p: &PrimeIdealF) -> i32 {
    let d = fu.d;
    match tag {
        CmFieldTag::MinusOne => splitting_symbol(&FieldElem::from_int(d, -1), p),
        CmFieldTag::MinusThree => splitting_symbol(&FieldElem::from_int(d, -3), p),
        CmFieldTag::MinusEps => surd_symbol(fu, p),
    }
}

fn surd_symbol(fu: &FundUnitData, p: &PrimeIdealF) -> i32 {
    let minus_eps = &FieldElem::zero(fu.d) - &fu.eps;
    splitting_symbol(&minus_eps, p)
}

fn squarefree_kernel(n: &BigInt) -> BigInt {
    assert!(n.is_positive());
    let mut k = BigInt::one();
    for (p, e) in factor(n) {
        if e % 2 == 1 {
            k *= p;
        }
    }
    k
}
