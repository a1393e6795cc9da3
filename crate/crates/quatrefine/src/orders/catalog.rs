//! Catalogue of distinguished orders: the minimal order realizing each
//! noncyclic reduced unit group, and the explicit maximal orders that sit
//! above them in each residue case of (d, ε).

use num_bigint::BigInt;
use num_integer::Integer;
use thiserror::Error;

use crate::orders::lattice::{lattice_from_quats, order_from_lattice, QuatOrder};
use crate::orders::units::GroupTag;
use crate::quadfield::unit::minus_eps_square_witness;
use crate::quadfield::{prime_above, FieldElem, FundUnitData, IdealF, Rat};
use crate::quatalg::{qadd, qscale, standard_algebra, Quat, QuatAlgebra, StandardTag};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    /// The (group, d, ε) combination violates the condition column of the
    /// minimal-order table.
    #[error("condition-not-met: {0}")]
    ConditionNotMet(String),
    /// The requested explicit order does not match the residue data of
    /// (d, ε) or the supplied algebra.
    #[error("case mismatch: {0}")]
    CaseMismatch(String),
}

/// Order with the smallest discriminant whose reduced unit group realizes
/// the requested noncyclic group, built from its tabulated O_F-basis.
pub fn minimal_g_order(
    g: GroupTag,
    fu: &FundUnitData,
    alg: &QuatAlgebra,
) -> Result<QuatOrder, CatalogError> {
    let d = fu.d;
    let tag = match g {
        GroupTag::D2Dag | GroupTag::D4 | GroupTag::A4 | GroupTag::S4 => StandardTag::A,
        GroupTag::D2Ddag => StandardTag::B,
        GroupTag::D3Dag | GroupTag::D6 => StandardTag::C,
        GroupTag::D3Ddag => StandardTag::D,
        other => {
            return Err(CatalogError::ConditionNotMet(format!(
                "no minimal-order construction is tabulated for {other}"
            )))
        }
    };
    match g {
        GroupTag::D2Ddag | GroupTag::D3Ddag if fu.norm_sign != 1 => {
            return Err(CatalogError::ConditionNotMet(format!(
                "{g} requires Nm(ε) = 1, but Nm(ε) = −1 for d = {d}"
            )));
        }
        GroupTag::D4 | GroupTag::S4 if !fu.two_eps_square => {
            return Err(CatalogError::ConditionNotMet(format!(
                "{g} requires 2ε ∈ F^×2, which fails for d = {d}"
            )));
        }
        GroupTag::D6 if !fu.three_eps_square => {
            return Err(CatalogError::ConditionNotMet(format!(
                "D6 requires 3ε ∈ F^×2, which fails for d = {d}"
            )));
        }
        _ => {}
    }
    let model = standard_algebra(tag, fu).expect("standard forms A–D always exist");
    if alg.a != model.a || alg.b != model.b {
        return Err(CatalogError::ConditionNotMet(format!(
            "the minimal {g}-order lives in ({}, {}), but the supplied algebra has ({}, {})",
            model.a, model.b, alg.a, alg.b
        )));
    }
    let one = alg.one();
    let i = alg.gen_i();
    let gens: Vec<Quat> = match g {
        GroupTag::D2Dag | GroupTag::D2Ddag => vec![one, i, alg.gen_j(), alg.gen_k()],
        GroupTag::D3Dag | GroupTag::D3Ddag => triadic_minimal_gens(alg),
        GroupTag::D4 => {
            let th = fu.theta.clone().expect("2ε square checked above");
            let sqrt_eps_j = qscale(&th, &qadd(&one, &alg.gen_j()));
            let i_sqrt = alg.mul(&i, &sqrt_eps_j);
            vec![one, i, sqrt_eps_j, i_sqrt]
        }
        GroupTag::D6 => hexagonal_cm_gens(alg),
        GroupTag::A4 => vec![one, i, alg.gen_j(), alg.xi()],
        GroupTag::S4 => {
            let th = fu.theta.clone().expect("2ε square checked above");
            let sqrt_eps_i = qscale(&th, &qadd(&one, &i));
            let sqrt_eps_j = qscale(&th, &qadd(&one, &alg.gen_j()));
            vec![one, sqrt_eps_i, sqrt_eps_j, alg.xi()]
        }
        _ => unreachable!(),
    };
    let order = order_from_lattice(alg, &lattice_from_quats(d, &gens))
        .expect("tabulated minimal-order basis is multiplicatively closed");
    let expected = match g {
        GroupTag::D2Dag | GroupTag::D2Ddag => IdealF::principal(&FieldElem::from_int(d, 4)),
        GroupTag::D3Dag | GroupTag::D3Ddag => IdealF::principal(&FieldElem::from_int(d, 3)),
        GroupTag::D4 | GroupTag::A4 => IdealF::principal(&FieldElem::from_int(d, 2)),
        GroupTag::D6 | GroupTag::S4 => IdealF::one(d),
        _ => unreachable!(),
    };
    assert_eq!(
        order.discriminant(),
        expected,
        "minimal {g}-order discriminant at d = {d}"
    );
    Ok(order)
}

/// O_F-generators of O_F[i, (1+j)/2], the minimal order for the triangle
/// groups in the algebras with j² = −3.
fn triadic_minimal_gens(alg: &QuatAlgebra) -> Vec<Quat> {
    vec![
        alg.one(),
        alg.gen_i(),
        alg.from_rational_coords([(1, 0, 2), (0, 0, 1), (1, 0, 2), (0, 0, 1)]),
        alg.from_rational_coords([(0, 0, 1), (1, 0, 2), (0, 0, 1), (1, 0, 2)]),
    ]
}

/// O_F-generators of O_{F(j)} + iO_{F(j)} in (−1, −3) for 3 | d, where
/// O_{F(j)} is spanned by 1, (1+j)/2 and √d·j/3.
fn hexagonal_cm_gens(alg: &QuatAlgebra) -> Vec<Quat> {
    assert!(alg.d % 3 == 0, "O_{{F(j)}} needs the extra generator only when 3 | d");
    let cm = [
        alg.one(),
        alg.from_rational_coords([(1, 0, 2), (0, 0, 1), (1, 0, 2), (0, 0, 1)]),
        alg.from_rational_coords([(0, 0, 1), (0, 0, 1), (0, 1, 3), (0, 0, 1)]),
    ];
    let i = alg.gen_i();
    let mut v = cm.to_vec();
    v.extend(cm.iter().map(|g| alg.mul(&i, g)));
    v
}

/// O_F-module generators of the order B of F(i) with B ⊗ Z₂ tight against
/// the dyadic ramification: the maximal order for d ≡ 2 (mod 4), and
/// O_F + pO_K for d ≡ 3 (mod 4).
fn gauss_suborder_gens(alg: &QuatAlgebra) -> Vec<Quat> {
    match alg.d % 4 {
        2 => vec![
            alg.one(),
            alg.gen_i(),
            alg.from_rational_coords([(0, 1, 2), (0, 1, 2), (0, 0, 1), (0, 0, 1)]),
        ],
        3 => vec![
            alg.one(),
            alg.gen_i(),
            alg.from_rational_coords([(1, 1, 2), (1, 1, 2), (0, 0, 1), (0, 0, 1)]),
        ],
        _ => unreachable!("only d ≡ 2, 3 (mod 4) carry this order"),
    }
}

/// O_F-module generators of the maximal order of F(i) inside the algebra.
/// For d ≡ 3 (mod 4) the extension F(i)/F is dyadically unramified and
/// (√d + i)/2 is integral; for d ≡ 2 (mod 4) the extra generator is
/// √d(1 + i)/2.
fn gauss_maximal_gens(alg: &QuatAlgebra) -> Vec<Quat> {
    match alg.d % 4 {
        2 => vec![
            alg.one(),
            alg.gen_i(),
            alg.from_rational_coords([(0, 1, 2), (0, 1, 2), (0, 0, 1), (0, 0, 1)]),
        ],
        3 => vec![
            alg.one(),
            alg.from_rational_coords([(0, 1, 2), (1, 0, 2), (0, 0, 1), (0, 0, 1)]),
        ],
        _ => unreachable!("only d ≡ 2, 3 (mod 4) carry this order"),
    }
}

/// Residue class c ∈ {0, 1, 2} of x modulo (3/2)Z, determined by
/// 2x ≡ 2c (mod 3). The argument is 2x as an integer.
fn class_mod_three_halves(two_x: &BigInt) -> u8 {
    let m = two_x.mod_floor(&BigInt::from(3));
    if m == BigInt::from(0) {
        0
    } else if m == BigInt::from(2) {
        1
    } else {
        2
    }
}

/// The integer 2r for a rational r ∈ ½Z.
fn doubled(r: &Rat) -> BigInt {
    let t = r * Rat::from_integer(BigInt::from(2));
    assert!(t.is_integer(), "expected a half-integer");
    t.to_integer()
}

/// Coordinates (2a, 2b) of 2ε = 2a + 2b√d as integers.
fn eps_doubled(fu: &FundUnitData) -> (BigInt, BigInt) {
    let (x, y) = fu.eps.rat_coords();
    (doubled(&x), doubled(&y))
}

/// Sign s ∈ {±1} with ε ≡ s modulo the ramified prime over 3 (for 3 | d).
/// The residue field is F₃ and ε is a unit, so the two cases are exhaustive.
fn eps_sign_mod_q3(fu: &FundUnitData) -> i8 {
    let q = prime_above(fu.d, 3);
    let minus = &fu.eps - &FieldElem::one(fu.d);
    if q.valuation(&minus) >= 1 {
        1
    } else {
        -1
    }
}

/// Sign s ∈ {±1} with ε ≡ s modulo 3O_F, valid when Nm(ε) = 1 and 3 splits.
fn eps_sign_mod_three(fu: &FundUnitData) -> i8 {
    let d = fu.d;
    let third = FieldElem::from_parts(d, 1, 0, 3);
    let one = FieldElem::one(d);
    let minus = &fu.eps - &one;
    let plus = &fu.eps + &one;
    if (&minus * &third).is_integral() {
        1
    } else if (&plus * &third).is_integral() {
        -1
    } else {
        panic!("ε ≢ ±1 mod 3O_F despite Nm(ε) = 1 at d = {d}");
    }
}

/// Classes of (x, y) modulo (3/2)Z for 2ϑ = x + y√d.
fn theta_classes(fu: &FundUnitData) -> (u8, u8) {
    let th = fu.theta.as_ref().expect("2ε is a square");
    let two_theta = th + th;
    let (x, y) = two_theta.rat_coords();
    (
        class_mod_three_halves(&doubled(&x)),
        class_mod_three_halves(&doubled(&y)),
    )
}

/// Explicit maximal orders from the case analysis over (d mod 8, d mod 3,
/// the shape of ε, and the dyadic ramification of F(√−ε)). Identifiers are
/// stable strings used by the command-line `order-verify` subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogCase {
    /// B + Bξ above the O_F-span of the Lipschitz quaternions,
    /// for d ≡ 2, 3 (mod 4).
    HurwitzAugmented,
    /// Maximal order above the Lipschitz span for d ≡ 5 (mod 8), with a
    /// quarter-denominator basis vector.
    HurwitzAugmentedHalf,
    /// O_L + iO_L above O_F[i, j] in (−1, −1); unit group D2† or D4.
    QuarticPivot,
    /// O_{F(j)} + iO_{F(j)} in (−1, −ε) when F(√−ε)/F is dyadically
    /// unramified.
    JPivotUnramified,
    /// Quarter-coordinate maximal order with √d on both the scalar and i
    /// components; d ≡ 1 (mod 8) with a ≡ 3 (mod 4), or d ≡ 5 (mod 8)
    /// with ε ∈ Z[√d].
    QuarterLatticeBalanced,
    /// Quarter-coordinate order for d ≡ 5 (mod 8), half-integral ε,
    /// b ≡ 1 (mod 4).
    QuarterLatticeB1,
    /// Quarter-coordinate order for d ≡ 5 (mod 8), half-integral ε,
    /// b ≡ 3 (mod 4).
    QuarterLatticeB3,
    /// O_{F(i)} + jO_{F(i)} for d ≡ 3 (mod 4) with Tr(ε) even.
    IPivotEvenTrace,
    /// Companion of the previous case built on O_{F(j)}.
    HalfLatticeEvenTrace,
    /// B + Bϱ with ϱ = (1+i+j+k)/2, the center of the dyadic star;
    /// d ≡ 2 (mod 4) with d > 6, or d ≡ 3 (mod 4) with Tr(ε) odd.
    HurwitzCenter,
    /// (1+i)-invariant maximal order for d ≡ 2 (mod 4), d > 6.
    IPivotEvenD,
    /// j-pivot for d ≡ 2 (mod 4) when F(√−ε)/F ramifies and 4 | b.
    JPivotRamifiedB0,
    /// j-pivot for d ≡ 2 (mod 4) when F(√−ε)/F ramifies and b ≡ 2 (mod 4).
    JPivotRamifiedB2,
    /// O_F[i, (1+j)/2] extended by a sixth-denominator vector chosen from
    /// b mod (3/2)Z; for 3 | d, d > 6, ε ≡ −1 mod the prime over 3.
    TriadicRamifiedDelta,
    /// Maximal order with (−3i + 2j + k)/6 for d ≡ 1 (mod 3),
    /// ε ≡ −1 (mod 3O_F).
    TriadicSplitPlain,
    /// Maximal order with (−3i + 2√d·j + k)/6 in the same case.
    TriadicSplitSurd,
    /// Sixth-denominator extension keyed by (a, b) mod (3/2)Z for
    /// d ≡ 2 (mod 3).
    TriadicInertDelta,
    /// Maximal order above O_F[i, (1+j)/2] in (−1, −3) for d ≡ 2 (mod 3),
    /// with third-denominator vector (√d·j + k)/3.
    HexagonalInert,
    /// O_{F(j)} + iO_{F(j)} in (−1, −3) for 3 | d; unit group D3† or D6.
    HexagonalRamified,
}

impl CatalogCase {
    pub const ALL: [CatalogCase; 19] = [
        CatalogCase::HurwitzAugmented,
        CatalogCase::HurwitzAugmentedHalf,
        CatalogCase::QuarticPivot,
        CatalogCase::JPivotUnramified,
        CatalogCase::QuarterLatticeBalanced,
        CatalogCase::QuarterLatticeB1,
        CatalogCase::QuarterLatticeB3,
        CatalogCase::IPivotEvenTrace,
        CatalogCase::HalfLatticeEvenTrace,
        CatalogCase::HurwitzCenter,
        CatalogCase::IPivotEvenD,
        CatalogCase::JPivotRamifiedB0,
        CatalogCase::JPivotRamifiedB2,
        CatalogCase::TriadicRamifiedDelta,
        CatalogCase::TriadicSplitPlain,
        CatalogCase::TriadicSplitSurd,
        CatalogCase::TriadicInertDelta,
        CatalogCase::HexagonalInert,
        CatalogCase::HexagonalRamified,
    ];

    pub fn id(self) -> &'static str {
        match self {
            CatalogCase::HurwitzAugmented => "hurwitz-augmented",
            CatalogCase::HurwitzAugmentedHalf => "hurwitz-augmented-half",
            CatalogCase::QuarticPivot => "quartic-pivot",
            CatalogCase::JPivotUnramified => "j-pivot-unramified",
            CatalogCase::QuarterLatticeBalanced => "quarter-lattice-balanced",
            CatalogCase::QuarterLatticeB1 => "quarter-lattice-b1",
            CatalogCase::QuarterLatticeB3 => "quarter-lattice-b3",
            CatalogCase::IPivotEvenTrace => "i-pivot-even-trace",
            CatalogCase::HalfLatticeEvenTrace => "half-lattice-even-trace",
            CatalogCase::HurwitzCenter => "hurwitz-center",
            CatalogCase::IPivotEvenD => "i-pivot-even-d",
            CatalogCase::JPivotRamifiedB0 => "j-pivot-ramified-b0",
            CatalogCase::JPivotRamifiedB2 => "j-pivot-ramified-b2",
            CatalogCase::TriadicRamifiedDelta => "triadic-ramified-delta",
            CatalogCase::TriadicSplitPlain => "triadic-split-plain",
            CatalogCase::TriadicSplitSurd => "triadic-split-surd",
            CatalogCase::TriadicInertDelta => "triadic-inert-delta",
            CatalogCase::HexagonalInert => "hexagonal-inert",
            CatalogCase::HexagonalRamified => "hexagonal-ramified",
        }
    }

    pub fn from_id(s: &str) -> Option<CatalogCase> {
        CatalogCase::ALL.into_iter().find(|c| c.id() == s)
    }

    /// Standard form hosting this construction.
    pub fn standard_tag(self) -> StandardTag {
        use CatalogCase::*;
        match self {
            HurwitzAugmented | HurwitzAugmentedHalf | QuarticPivot => StandardTag::A,
            JPivotUnramified | QuarterLatticeBalanced | QuarterLatticeB1 | QuarterLatticeB3
            | IPivotEvenTrace | HalfLatticeEvenTrace | HurwitzCenter | IPivotEvenD
            | JPivotRamifiedB0 | JPivotRamifiedB2 => StandardTag::B,
            TriadicRamifiedDelta | TriadicSplitPlain | TriadicSplitSurd | TriadicInertDelta => {
                StandardTag::D
            }
            HexagonalInert | HexagonalRamified => StandardTag::C,
        }
    }

    /// Group whose minimal order the rebuilt maximal order must contain.
    pub fn minimal_group(self) -> GroupTag {
        use CatalogCase::*;
        match self {
            HurwitzAugmented | HurwitzAugmentedHalf => GroupTag::A4,
            QuarticPivot => GroupTag::D2Dag,
            JPivotUnramified | QuarterLatticeBalanced | QuarterLatticeB1 | QuarterLatticeB3
            | IPivotEvenTrace | HalfLatticeEvenTrace | HurwitzCenter | IPivotEvenD
            | JPivotRamifiedB0 | JPivotRamifiedB2 => GroupTag::D2Ddag,
            TriadicRamifiedDelta | TriadicSplitPlain | TriadicSplitSurd | TriadicInertDelta => {
                GroupTag::D3Ddag
            }
            HexagonalInert | HexagonalRamified => GroupTag::D3Dag,
        }
    }

    /// Residue conditions gating the construction.
    pub fn check(self, fu: &FundUnitData) -> Result<(), CatalogError> {
        use CatalogCase::*;
        let d = fu.d;
        let id = self.id();
        let (_, v, den) = fu.eps_coords();
        let half = den == BigInt::from(2);
        let err = |msg: String| Err(CatalogError::CaseMismatch(msg));
        let norm_one = matches!(self.minimal_group(), GroupTag::D2Ddag | GroupTag::D3Ddag);
        if norm_one && fu.norm_sign != 1 {
            return err(format!("{id} requires Nm(ε) = 1, but Nm(ε) = −1 for d = {d}"));
        }
        match self {
            HurwitzAugmented | QuarticPivot => {
                if d % 4 != 2 && d % 4 != 3 {
                    return err(format!("{id} needs d ≡ 2, 3 (mod 4); d = {d}"));
                }
            }
            HurwitzAugmentedHalf => {
                if d % 8 != 5 {
                    return err(format!("{id} needs d ≡ 5 (mod 8); d = {d}"));
                }
            }
            JPivotUnramified => {
                if minus_eps_square_witness(fu).is_none() {
                    return err(format!(
                        "{id} needs F(√−ε)/F unramified at the dyadic places (−ε a square mod 4O_F), which fails for d = {d}"
                    ));
                }
            }
            QuarterLatticeBalanced => {
                if half {
                    return err(format!("{id} needs ε ∈ Z[√d]; ε is half-integral for d = {d}"));
                }
                let (two_a, _) = eps_doubled(fu);
                let a = two_a / BigInt::from(2);
                match d % 8 {
                    1 => {
                        if a.mod_floor(&BigInt::from(4)) != BigInt::from(3) {
                            return err(format!(
                                "{id} at d ≡ 1 (mod 8) needs a ≡ 3 (mod 4); here a ≡ {} (mod 4)",
                                a.mod_floor(&BigInt::from(4))
                            ));
                        }
                    }
                    5 => {}
                    _ => return err(format!("{id} needs d ≡ 1 (mod 4); d = {d}")),
                }
            }
            QuarterLatticeB1 | QuarterLatticeB3 => {
                if d % 8 != 5 {
                    return err(format!("{id} needs d ≡ 5 (mod 8); d = {d}"));
                }
                if !half {
                    return err(format!("{id} needs half-integral ε; ε ∈ Z[√d] for d = {d}"));
                }
                if minus_eps_square_witness(fu).is_some() {
                    return err(format!(
                        "{id} needs F(√−ε)/F ramified at the dyadic place, but −ε is a square mod 4O_F for d = {d}"
                    ));
                }
                let want = if self == QuarterLatticeB1 { 1 } else { 3 };
                if v.mod_floor(&BigInt::from(4)) != BigInt::from(want) {
                    return err(format!(
                        "{id} needs b ≡ {want} (mod 4); here b ≡ {} (mod 4)",
                        v.mod_floor(&BigInt::from(4))
                    ));
                }
            }
            IPivotEvenTrace | HalfLatticeEvenTrace => {
                let (two_a, _) = eps_doubled(fu);
                if d % 4 != 3 {
                    return err(format!("{id} needs d ≡ 3 (mod 4); d = {d}"));
                }
                if two_a.mod_floor(&BigInt::from(4)) != BigInt::from(0) {
                    return err(format!("{id} needs even a in ε = a + b√d; a is odd for d = {d}"));
                }
            }
            HurwitzCenter => {
                let (two_a, _) = eps_doubled(fu);
                let even_branch = d % 4 == 2 && d > 6;
                let odd_branch =
                    d % 4 == 3 && two_a.mod_floor(&BigInt::from(4)) == BigInt::from(2);
                if !even_branch && !odd_branch {
                    return err(format!(
                        "{id} needs d ≡ 2 (mod 4) with d > 6, or d ≡ 3 (mod 4) with odd a; neither holds for d = {d}"
                    ));
                }
            }
            IPivotEvenD => {
                if d % 4 != 2 || d <= 6 {
                    return err(format!("{id} needs d ≡ 2 (mod 4) with d > 6; d = {d}"));
                }
            }
            JPivotRamifiedB0 | JPivotRamifiedB2 => {
                if d % 4 != 2 || d <= 6 {
                    return err(format!("{id} needs d ≡ 2 (mod 4) with d > 6; d = {d}"));
                }
                if minus_eps_square_witness(fu).is_some() {
                    return err(format!(
                        "{id} needs F(√−ε)/F ramified at the dyadic place, but −ε is a square mod 4O_F for d = {d}"
                    ));
                }
                let want = if self == JPivotRamifiedB0 { 0 } else { 2 };
                if v.mod_floor(&BigInt::from(4)) != BigInt::from(want) {
                    return err(format!(
                        "{id} needs b ≡ {want} (mod 4); here b ≡ {} (mod 4)",
                        v.mod_floor(&BigInt::from(4))
                    ));
                }
            }
            TriadicRamifiedDelta => {
                if d % 3 != 0 || d == 6 {
                    return err(format!("{id} needs 3 | d with d > 6; d = {d}"));
                }
                if eps_sign_mod_q3(fu) != -1 {
                    return err(format!(
                        "{id} needs ε ≡ −1 modulo the ramified prime over 3, but ε ≡ 1 for d = {d}"
                    ));
                }
            }
            TriadicSplitPlain | TriadicSplitSurd => {
                if d % 3 != 1 {
                    return err(format!("{id} needs d ≡ 1 (mod 3); d = {d}"));
                }
                if eps_sign_mod_three(fu) != -1 {
                    return err(format!(
                        "{id} needs ε ≡ −1 (mod 3O_F), but ε ≡ 1 for d = {d}"
                    ));
                }
            }
            TriadicInertDelta => {
                if d % 3 != 2 {
                    return err(format!("{id} needs d ≡ 2 (mod 3); d = {d}"));
                }
            }
            HexagonalInert => {
                if d % 3 != 2 {
                    return err(format!("{id} needs d ≡ 2 (mod 3); d = {d}"));
                }
            }
            HexagonalRamified => {
                if d % 3 != 0 {
                    return err(format!("{id} needs 3 | d; d = {d}"));
                }
            }
        }
        Ok(())
    }

    /// O_F-module generators of the case's maximal order. The admissibility
    /// conditions are assumed to hold.
    fn gens(self, fu: &FundUnitData, alg: &QuatAlgebra) -> Vec<Quat> {
        use CatalogCase::*;
        let d = fu.d;
        let rc = |coords| alg.from_rational_coords(coords);
        match self {
            HurwitzAugmented => {
                let xi = alg.xi();
                let b = gauss_suborder_gens(alg);
                let mut v = b.clone();
                v.extend(b.iter().map(|g| alg.mul(g, &xi)));
                v
            }
            HurwitzAugmentedHalf => vec![
                alg.one(),
                rc([(1, 1, 4), (-1, 0, 2), (1, -1, 4), (0, 0, 1)]),
                alg.gen_j(),
                alg.xi(),
            ],
            QuarticPivot => match d % 4 {
                2 => vec![
                    alg.one(),
                    alg.gen_i(),
                    rc([(1, 0, 2), (0, 1, 2), (1, 0, 2), (0, 0, 1)]),
                    rc([(0, -1, 2), (1, 0, 2), (0, 0, 1), (1, 0, 2)]),
                ],
                3 => vec![
                    alg.one(),
                    alg.gen_i(),
                    rc([(0, 1, 2), (0, 0, 1), (1, 0, 2), (0, 0, 1)]),
                    rc([(0, 0, 1), (0, 1, 2), (0, 0, 1), (1, 0, 2)]),
                ],
                _ => unreachable!(),
            },
            JPivotUnramified => {
                let t = minus_eps_square_witness(fu).expect("admissibility provides a witness");
                let half = FieldElem::from_parts(d, 1, 0, 2);
                let zero = FieldElem::zero(d);
                let u = [&t * &half, zero.clone(), half, zero];
                let i = alg.gen_i();
                let iu = alg.mul(&i, &u);
                vec![alg.one(), i, u, iu]
            }
            QuarterLatticeBalanced => vec![
                alg.one(),
                alg.gen_i(),
                rc([(-1, 1, 4), (1, 1, 4), (1, 0, 2), (0, 0, 1)]),
                rc([(1, 1, 4), (-1, 1, 4), (0, 0, 1), (1, 0, 2)]),
            ],
            QuarterLatticeB1 => vec![
                alg.one(),
                alg.gen_i(),
                rc([(-1, 1, 4), (1, 0, 2), (1, 0, 2), (0, 0, 1)]),
                rc([(1, 0, 2), (-1, 1, 4), (0, 0, 1), (1, 0, 2)]),
            ],
            QuarterLatticeB3 => vec![
                alg.one(),
                alg.gen_i(),
                rc([(1, 1, 4), (1, 0, 2), (1, 0, 2), (0, 0, 1)]),
                rc([(1, 0, 2), (1, 1, 4), (0, 0, 1), (1, 0, 2)]),
            ],
            IPivotEvenTrace => {
                let b = gauss_maximal_gens(alg);
                let j = alg.gen_j();
                let mut v = b.clone();
                v.extend(b.iter().map(|g| alg.mul(&j, g)));
                v
            }
            HalfLatticeEvenTrace => vec![
                alg.one(),
                rc([(1, 0, 2), (1, 0, 2), (1, 1, 2), (0, 0, 1)]),
                alg.gen_j(),
                rc([(1, 1, 2), (0, 0, 1), (1, 0, 2), (1, 0, 2)]),
            ],
            HurwitzCenter => {
                let rho = alg.xi();
                let b = gauss_suborder_gens(alg);
                let mut v = b.clone();
                v.extend(b.iter().map(|g| alg.mul(g, &rho)));
                v
            }
            IPivotEvenD => vec![
                alg.one(),
                rc([(1, 0, 2), (1, 0, 2), (0, 1, 2), (0, 0, 1)]),
                alg.gen_j(),
                rc([(0, 1, 2), (0, 0, 1), (1, 0, 2), (1, 0, 2)]),
            ],
            JPivotRamifiedB0 => vec![
                alg.one(),
                alg.gen_i(),
                rc([(0, 1, 2), (1, 0, 2), (1, 0, 2), (0, 0, 1)]),
                rc([(1, 0, 2), (0, 1, 2), (0, 0, 1), (1, 0, 2)]),
            ],
            JPivotRamifiedB2 => vec![
                alg.one(),
                alg.gen_i(),
                rc([(1, 1, 2), (0, 1, 2), (1, 0, 2), (0, 0, 1)]),
                rc([(0, 1, 2), (1, 1, 2), (0, 0, 1), (1, 0, 2)]),
            ],
            TriadicRamifiedDelta => {
                let (_, two_b) = eps_doubled(fu);
                let delta = match class_mod_three_halves(&two_b) {
                    0 => rc([(0, 0, 1), (-1, 0, 2), (1, 0, 3), (1, 0, 6)]),
                    1 => rc([(0, 0, 1), (-1, 0, 2), (1, 1, 3), (1, 0, 6)]),
                    _ => rc([(0, 0, 1), (-1, 0, 2), (-1, 1, 3), (1, 0, 6)]),
                };
                let mut v = triadic_minimal_gens(alg);
                v.push(delta);
                v
            }
            TriadicSplitPlain => vec![
                alg.one(),
                alg.gen_i(),
                rc([(1, 0, 2), (0, 0, 1), (1, 0, 2), (0, 0, 1)]),
                rc([(0, 0, 1), (-1, 0, 2), (1, 0, 3), (1, 0, 6)]),
            ],
            TriadicSplitSurd => vec![
                alg.one(),
                alg.gen_i(),
                rc([(1, 0, 2), (0, 0, 1), (1, 0, 2), (0, 0, 1)]),
                rc([(0, 0, 1), (-1, 0, 2), (0, 1, 3), (1, 0, 6)]),
            ],
            TriadicInertDelta => {
                let (two_a, two_b) = eps_doubled(fu);
                let ca = class_mod_three_halves(&two_a);
                let cb = class_mod_three_halves(&two_b);
                let delta = match (ca, cb) {
                    (1, 0) => rc([(0, 0, 1), (-1, 0, 2), (0, 1, 3), (1, 0, 6)]),
                    (2, 0) => rc([(0, 0, 1), (-1, 0, 2), (1, 0, 3), (1, 0, 6)]),
                    (0, 1) => rc([(0, 0, 1), (-1, 0, 2), (1, 1, 3), (1, 0, 6)]),
                    (0, 2) => rc([(0, 0, 1), (-1, 0, 2), (-1, 1, 3), (1, 0, 6)]),
                    other => panic!("unit residues {other:?} off the norm-one locus at d = {d}"),
                };
                let mut v = triadic_minimal_gens(alg);
                v.push(delta);
                v
            }
            HexagonalInert => vec![
                alg.one(),
                rc([(0, 0, 1), (1, 0, 2), (0, 0, 1), (1, 0, 2)]),
                rc([(1, 0, 2), (0, 0, 1), (1, 0, 2), (0, 0, 1)]),
                rc([(0, 0, 1), (0, 0, 1), (0, 1, 3), (1, 0, 3)]),
            ],
            HexagonalRamified => hexagonal_cm_gens(alg),
        }
    }

    /// Reduced unit group the rebuilt order must exhibit.
    pub fn expected_group(self, fu: &FundUnitData) -> GroupTag {
        use CatalogCase::*;
        let two_sq = fu.two_eps_square;
        let three_sq = fu.three_eps_square;
        match self {
            HurwitzAugmented | HurwitzAugmentedHalf => {
                if two_sq {
                    GroupTag::S4
                } else {
                    GroupTag::A4
                }
            }
            QuarticPivot => {
                if two_sq {
                    GroupTag::D4
                } else {
                    GroupTag::D2Dag
                }
            }
            JPivotUnramified => {
                if three_sq {
                    GroupTag::D6
                } else {
                    GroupTag::D2Ddag
                }
            }
            QuarterLatticeBalanced | QuarterLatticeB1 | QuarterLatticeB3 | JPivotRamifiedB0
            | JPivotRamifiedB2 => GroupTag::D2Ddag,
            IPivotEvenTrace | HurwitzCenter => {
                if two_sq {
                    GroupTag::D4
                } else {
                    GroupTag::D2Ddag
                }
            }
            HalfLatticeEvenTrace | IPivotEvenD => {
                if two_sq {
                    GroupTag::S4
                } else {
                    GroupTag::D2Ddag
                }
            }
            TriadicRamifiedDelta | TriadicInertDelta => {
                if two_sq {
                    GroupTag::S4
                } else {
                    GroupTag::D3Ddag
                }
            }
            TriadicSplitPlain => {
                if two_sq && theta_classes(fu).1 == 0 {
                    GroupTag::S4
                } else {
                    GroupTag::D3Ddag
                }
            }
            TriadicSplitSurd => {
                if two_sq && theta_classes(fu).0 == 0 {
                    GroupTag::S4
                } else {
                    GroupTag::D3Ddag
                }
            }
            HexagonalInert => GroupTag::D3Dag,
            HexagonalRamified => {
                if three_sq {
                    GroupTag::D6
                } else {
                    GroupTag::D3Dag
                }
            }
        }
    }

    /// A probe element together with whether it must normalize the rebuilt
    /// order. None when the case fixes no unconditional answer.
    pub fn normalizer_probe(self, alg: &QuatAlgebra) -> Option<(Quat, bool)> {
        use CatalogCase::*;
        let one_plus_i = qadd(&alg.one(), &alg.gen_i());
        match self {
            HurwitzAugmented => Some((one_plus_i, true)),
            HurwitzAugmentedHalf => None,
            QuarticPivot => Some((alg.xi(), false)),
            JPivotUnramified | QuarterLatticeBalanced | QuarterLatticeB1 | QuarterLatticeB3
            | JPivotRamifiedB0 | JPivotRamifiedB2 => Some((one_plus_i, false)),
            IPivotEvenTrace | HalfLatticeEvenTrace | HurwitzCenter | IPivotEvenD => {
                Some((one_plus_i, true))
            }
            TriadicRamifiedDelta | TriadicSplitPlain | TriadicSplitSurd | TriadicInertDelta
            | HexagonalInert => Some((alg.gen_j(), false)),
            HexagonalRamified => Some((alg.gen_j(), true)),
        }
    }
}

impl std::fmt::Display for CatalogCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

/// Rebuild the explicit maximal order for the given case, verifying that the
/// O_F-span is an order, that it is maximal, and that it contains the
/// associated minimal order.
pub fn explicit_maximal_order(
    case: CatalogCase,
    fu: &FundUnitData,
    alg: &QuatAlgebra,
) -> Result<QuatOrder, CatalogError> {
    let d = fu.d;
    let model =
        standard_algebra(case.standard_tag(), fu).expect("standard forms A–D always exist");
    if alg.a != model.a || alg.b != model.b {
        return Err(CatalogError::CaseMismatch(format!(
            "{} lives in ({}, {}), but the supplied algebra has ({}, {})",
            case.id(),
            model.a,
            model.b,
            alg.a,
            alg.b
        )));
    }
    case.check(fu)?;
    let gens = case.gens(fu, alg);
    let order = order_from_lattice(alg, &lattice_from_quats(d, &gens))
        .expect("catalogue basis spans an order");
    let disc = order.discriminant();
    if disc != alg.disc_ideal() {
        return Err(CatalogError::CaseMismatch(format!(
            "{} is not maximal at d = {d}: disc {} vs algebra discriminant {}",
            case.id(),
            disc,
            alg.disc_ideal()
        )));
    }
    let minimal = minimal_g_order(case.minimal_group(), fu, alg)
        .expect("case admissibility implies the minimal-order condition");
    assert!(
        order.lattice.contains_lattice(&minimal.lattice),
        "{} must contain the minimal {}-order",
        case.id(),
        case.minimal_group()
    );
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::lattice::normalizer_membership;
    use crate::orders::units::unit_group;
    use crate::quadfield::fundamental_unit;

    fn setup(d: u64, tag: StandardTag) -> (FundUnitData, QuatAlgebra) {
        let fu = fundamental_unit(d).unwrap();
        let alg = standard_algebra(tag, &fu).unwrap();
        (fu, alg)
    }

    fn rebuilt(case: CatalogCase, d: u64) -> (FundUnitData, QuatAlgebra, QuatOrder) {
        let (fu, alg) = setup(d, case.standard_tag());
        let order = explicit_maximal_order(case, &fu, &alg)
            .unwrap_or_else(|e| panic!("{} at d = {d}: {e}", case.id()));
        (fu, alg, order)
    }

    fn check_case(case: CatalogCase, d: u64) {
        let (fu, alg, order) = rebuilt(case, d);
        let ug = unit_group(&order).unwrap();
        assert_eq!(
            ug.tag,
            case.expected_group(&fu),
            "{} unit group at d = {d}",
            case.id()
        );
        if let Some((probe, expected)) = case.normalizer_probe(&alg) {
            assert_eq!(
                normalizer_membership(&probe, &order),
                expected,
                "{} normalizer probe at d = {d}",
                case.id()
            );
        }
    }

    #[test]
    fn minimal_rows_and_their_conditions() {
        let (fu7, a7) = setup(7, StandardTag::A);
        let s4 = minimal_g_order(GroupTag::S4, &fu7, &a7).unwrap();
        assert_eq!(s4.discriminant(), IdealF::one(7));
        let a4 = minimal_g_order(GroupTag::A4, &fu7, &a7).unwrap();
        assert_eq!(a4.discriminant(), IdealF::principal(&FieldElem::from_int(7, 2)));
        let d4 = minimal_g_order(GroupTag::D4, &fu7, &a7).unwrap();
        assert_eq!(d4.discriminant(), IdealF::principal(&FieldElem::from_int(7, 2)));
        let d2 = minimal_g_order(GroupTag::D2Dag, &fu7, &a7).unwrap();
        assert_eq!(d2.discriminant(), IdealF::principal(&FieldElem::from_int(7, 4)));
        assert!(s4.lattice.contains_lattice(&a4.lattice));
        assert!(s4.lattice.contains_lattice(&d4.lattice));
        assert!(a4.lattice.contains_lattice(&d2.lattice));

        let (fu7b, b7) = setup(7, StandardTag::B);
        let d2dd = minimal_g_order(GroupTag::D2Ddag, &fu7b, &b7).unwrap();
        assert_eq!(d2dd.discriminant(), IdealF::principal(&FieldElem::from_int(7, 4)));
        let (_, c7) = setup(7, StandardTag::C);
        let d3 = minimal_g_order(GroupTag::D3Dag, &fu7, &c7).unwrap();
        assert_eq!(d3.discriminant(), IdealF::principal(&FieldElem::from_int(7, 3)));
        let (_, dd7) = setup(7, StandardTag::D);
        let d3dd = minimal_g_order(GroupTag::D3Ddag, &fu7, &dd7).unwrap();
        assert_eq!(d3dd.discriminant(), IdealF::principal(&FieldElem::from_int(7, 3)));

        let (fu33, c33) = setup(33, StandardTag::C);
        let d6 = minimal_g_order(GroupTag::D6, &fu33, &c33).unwrap();
        assert_eq!(d6.discriminant(), IdealF::one(33));

        // Condition column rejections.
        let (fu17, a17) = setup(17, StandardTag::A);
        let e = minimal_g_order(GroupTag::D4, &fu17, &a17).unwrap_err();
        assert!(e.to_string().contains("condition-not-met"));
        assert!(e.to_string().contains("2ε"));
        let e = minimal_g_order(GroupTag::D6, &fu7, &c7).unwrap_err();
        assert!(e.to_string().contains("3ε"));
        let (fu17b, b17) = setup(17, StandardTag::B);
        let e = minimal_g_order(GroupTag::D2Ddag, &fu17b, &b17).unwrap_err();
        assert!(e.to_string().contains("Nm(ε) = −1"));
        let e = minimal_g_order(GroupTag::C4, &fu7, &a7).unwrap_err();
        assert!(e.to_string().contains("no minimal-order construction"));
        // Algebra mismatch is a condition failure, not a panic.
        let e = minimal_g_order(GroupTag::D4, &fu7, &c7).unwrap_err();
        assert!(e.to_string().contains("lives in"));
    }

    #[test]
    fn hurwitz_family_reconstructions() {
        let (fu7, a7, aug) = rebuilt(CatalogCase::HurwitzAugmented, 7);
        // With 2ε a square the augmented order is the maximal S4-order.
        let s4 = minimal_g_order(GroupTag::S4, &fu7, &a7).unwrap();
        assert_eq!(aug.lattice, s4.lattice);
        check_case(CatalogCase::HurwitzAugmented, 7);

        let (_, _, pivot) = rebuilt(CatalogCase::QuarticPivot, 7);
        assert_eq!(unit_group(&pivot).unwrap().tag, GroupTag::D4);
        assert_ne!(pivot.lattice, s4.lattice);
        check_case(CatalogCase::QuarticPivot, 7);

        // 2ε not a square: the A4 branch.
        check_case(CatalogCase::HurwitzAugmented, 10);
        check_case(CatalogCase::HurwitzAugmentedHalf, 21);

        let (fu7a, a7a) = setup(7, StandardTag::A);
        let e = explicit_maximal_order(CatalogCase::HurwitzAugmentedHalf, &fu7a, &a7a).unwrap_err();
        assert!(e.to_string().contains("case mismatch"));
    }

    #[test]
    fn dyadic_cases_across_residue_classes() {
        // d = 7: 2ε is a square, so the pair realizes D4 and S4.
        check_case(CatalogCase::IPivotEvenTrace, 7);
        check_case(CatalogCase::HalfLatticeEvenTrace, 7);
        // d = 15: no square condition holds.
        check_case(CatalogCase::IPivotEvenTrace, 15);
        check_case(CatalogCase::HalfLatticeEvenTrace, 15);
        // d = 14: star center picks up D4, the invariant pivot S4.
        check_case(CatalogCase::HurwitzCenter, 14);
        check_case(CatalogCase::IPivotEvenD, 14);
        check_case(CatalogCase::JPivotUnramified, 14);
        // d = 33: quarter lattice at d ≡ 1 (mod 8), and a D6 pivot.
        check_case(CatalogCase::QuarterLatticeBalanced, 33);
        check_case(CatalogCase::JPivotUnramified, 33);
        // Ramified j-pivots at even d.
        check_case(CatalogCase::JPivotRamifiedB2, 34);
        check_case(CatalogCase::JPivotRamifiedB0, 66);

        let (fu15, b15) = setup(15, StandardTag::B);
        let e = explicit_maximal_order(CatalogCase::JPivotUnramified, &fu15, &b15).unwrap_err();
        assert!(e.to_string().contains("unramified"));
        let e = explicit_maximal_order(CatalogCase::HurwitzCenter, &fu15, &b15).unwrap_err();
        assert!(e.to_string().contains("odd a"));
        let (fu34, b34) = setup(34, StandardTag::B);
        let e = explicit_maximal_order(CatalogCase::JPivotRamifiedB0, &fu34, &b34).unwrap_err();
        assert!(e.to_string().contains("b ≡ 0"));
    }

    #[test]
    fn triadic_cases_and_the_theta_discriminator() {
        // d = 7 ≡ 7 (mod 24): the plain vector stays D3‡, the surd one is S4.
        check_case(CatalogCase::TriadicSplitPlain, 7);
        check_case(CatalogCase::TriadicSplitSurd, 7);
        let fu7 = fundamental_unit(7).unwrap();
        assert_eq!(
            CatalogCase::TriadicSplitPlain.expected_group(&fu7),
            GroupTag::D3Ddag
        );
        assert_eq!(
            CatalogCase::TriadicSplitSurd.expected_group(&fu7),
            GroupTag::S4
        );
        // d = 19 ≡ 19 (mod 24): the roles are exchanged.
        let fu19 = fundamental_unit(19).unwrap();
        assert_eq!(
            CatalogCase::TriadicSplitPlain.expected_group(&fu19),
            GroupTag::S4
        );
        assert_eq!(
            CatalogCase::TriadicSplitSurd.expected_group(&fu19),
            GroupTag::D3Ddag
        );
        check_case(CatalogCase::TriadicSplitPlain, 19);
        check_case(CatalogCase::TriadicSplitSurd, 19);

        check_case(CatalogCase::TriadicRamifiedDelta, 33);
        check_case(CatalogCase::TriadicInertDelta, 11);
        check_case(CatalogCase::TriadicInertDelta, 35);

        let (fu13, d13) = setup(13, StandardTag::D);
        let e = explicit_maximal_order(CatalogCase::TriadicSplitPlain, &fu13, &d13).unwrap_err();
        assert!(e.to_string().contains("Nm(ε) = −1"));
        let (fu21, d21) = setup(21, StandardTag::D);
        let e = explicit_maximal_order(CatalogCase::TriadicRamifiedDelta, &fu21, &d21).unwrap_err();
        assert!(e.to_string().contains("ε ≡ 1"));
    }

    #[test]
    fn hexagonal_cases() {
        check_case(CatalogCase::HexagonalInert, 11);
        check_case(CatalogCase::HexagonalRamified, 33);
        check_case(CatalogCase::HexagonalRamified, 21);
        check_case(CatalogCase::HexagonalRamified, 66);
    }

    #[test]
    fn case_ids_round_trip() {
        for case in CatalogCase::ALL {
            assert_eq!(CatalogCase::from_id(case.id()), Some(case));
        }
        assert_eq!(CatalogCase::from_id("no-such-case"), None);
        let ids: std::collections::HashSet<_> =
            CatalogCase::ALL.iter().map(|c| c.id()).collect();
        assert_eq!(ids.len(), CatalogCase::ALL.len());

        // Supplying the wrong algebra is reported as a case mismatch.
        let (fu11, a11) = setup(11, StandardTag::A);
        let e = explicit_maximal_order(CatalogCase::HexagonalInert, &fu11, &a11).unwrap_err();
        assert!(e.to_string().contains("case mismatch"));
    }
}
