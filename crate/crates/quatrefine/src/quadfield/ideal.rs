//! Prime ideals of O_F and ideals in factored form.
//!
//! Ideals are carried as exponent vectors over their prime support; the
//! only arithmetic ever needed downstream is valuations, norms, and
//! products, so no HNF module arithmetic is kept here.

use super::elem::{FieldElem, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimeKind {
    /// Two primes above p; `root` is the residue of ω at this prime
    /// (a root of the minimal polynomial of ω mod p).
    Split { root: BigInt },
    Inert,
    Ramified,
}

/// A prime ideal 𝔭 of O_F, F = Q(√d).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeIdealF {
    pub d: u64,
    pub p: u64,
    pub kind: PrimeKind,
}

/// Minimal polynomial of ω: x² − d for d ≢ 1 (4), x² − x − (d−1)/4 otherwise.
fn omega_minpoly_coeffs(d: u64) -> (BigInt, BigInt) {
    if d % 4 == 1 {
        (BigInt::from(-1), BigInt::from(-((d as i64 - 1) / 4)))
    } else {
        (BigInt::zero(), BigInt::from(-(d as i64)))
    }
}

/// All primes of O_F above the rational prime p (one or two).
pub fn primes_above(d: u64, p: u64) -> Vec<PrimeIdealF> {
    let mk = |kind| PrimeIdealF { d, p, kind };
    if p == 2 {
        return match d % 8 {
            1 => [0u32, 1]
                .iter()
                .filter_map(|&seed| {
                    let (b, c) = omega_minpoly_coeffs(d);
                    let f = |x: i64| BigInt::from(x * x) + &b * x + &c;
                    f(seed as i64).is_even().then(|| {
                        mk(PrimeKind::Split { root: BigInt::from(seed) })
                    })
                })
                .collect(),
            5 => vec![mk(PrimeKind::Inert)],
            _ => vec![mk(PrimeKind::Ramified)],
        };
    }
    if d % p == 0 {
        return vec![mk(PrimeKind::Ramified)];
    }
    match legendre(&BigInt::from(d), p) {
        -1 => vec![mk(PrimeKind::Inert)],
        _ => {
            let r = sqrt_mod_p(&BigInt::from(d % p), p).expect("legendre said square");
            // ω-residue: r itself when ω = √d, (1+r)/2 mod p when d ≡ 1 (4).
            let to_omega = |r: BigInt| {
                if d % 4 == 1 {
                    ((BigInt::one() + r) * inv_mod(&BigInt::from(2), &BigInt::from(p)))
                        .mod_floor(&BigInt::from(p))
                } else {
                    r
                }
            };
            let mut pr: Vec<_> = [r.clone(), (BigInt::from(p) - &r).mod_floor(&BigInt::from(p))]
                .into_iter()
                .map(|r| mk(PrimeKind::Split { root: to_omega(r) }))
                .collect();
            pr.sort();
            pr.dedup();
            pr
        }
    }
}

pub fn prime_above(d: u64, p: u64) -> PrimeIdealF {
    primes_above(d, p).into_iter().next().expect("at least one prime above p")
}

impl PrimeIdealF {
    pub fn residue_degree(&self) -> u32 {
        if matches!(self.kind, PrimeKind::Inert) { 2 } else { 1 }
    }

    pub fn ramification_index(&self) -> u32 {
        if matches!(self.kind, PrimeKind::Ramified) { 2 } else { 1 }
    }

    pub fn absolute_norm(&self) -> BigInt {
        BigInt::from(self.p).pow(self.residue_degree())
    }

    /// The conjugate prime 𝔭̄ (equal to 𝔭 unless split).
    pub fn conj(&self) -> PrimeIdealF {
        match &self.kind {
            PrimeKind::Split { root } => {
                let (b, _) = omega_minpoly_coeffs(self.d);
                // Roots of x² + bx + c sum to −b.
                let other = (-&b - root).mod_floor(&BigInt::from(self.p));
                PrimeIdealF { d: self.d, p: self.p, kind: PrimeKind::Split { root: other } }
            }
            _ => self.clone(),
        }
    }

    /// A uniformizer: p itself unless ramified, then √d (odd p and
    /// d ≡ 2 mod 4) or 1 + √d (p = 2, d ≡ 3 mod 4).
    pub fn uniformizer(&self) -> FieldElem {
        let d = self.d;
        match self.kind {
            PrimeKind::Ramified => {
                if self.p == 2 && d % 4 == 3 {
                    FieldElem::from_parts(d, 1, 1, 1)
                } else {
                    FieldElem::sqrt_d(d)
                }
            }
            _ => FieldElem::from_int(d, self.p as i64),
        }
    }

    /// ω-residue of this split prime lifted to a root mod p^k.
    pub fn omega_root_mod(&self, k: u32) -> BigInt {
        let PrimeKind::Split { root } = &self.kind else {
            panic!("omega root only defined for split primes")
        };
        let (b, c) = omega_minpoly_coeffs(self.d);
        hensel_lift_root(&b, &c, root, self.p, k)
    }

    /// Image of a 𝔭-integral x in Z/p^k under O_{F,𝔭} ≅ Z_p (split primes).
    /// x may be non-integral at the conjugate prime.
    pub fn embed_mod(&self, x: &FieldElem, k: u32) -> BigInt {
        let (r1, r2) = x.omega_rat_coords();
        let den = r1.denom().lcm(r2.denom());
        let t = val_p_int(&den, self.p) as u32;
        let den_unit = &den / BigInt::from(self.p).pow(t);
        let big_modulus = BigInt::from(self.p).pow(k + t);
        let w = self.omega_root_mod(k + t);
        let a = (&r1 * &den).to_integer();
        let b = (&r2 * &den).to_integer();
        let n = (a + b * w).mod_floor(&big_modulus);
        let (q, rem) = n.div_rem(&BigInt::from(self.p).pow(t));
        assert!(rem.is_zero(), "embed_mod needs a 𝔭-integral element");
        let modulus = BigInt::from(self.p).pow(k);
        (q * inv_mod(&den_unit, &modulus)).mod_floor(&modulus)
    }

    /// Exact valuation v_𝔭(x) for x ≠ 0.
    pub fn valuation(&self, x: &FieldElem) -> i64 {
        assert!(!x.is_zero(), "valuation of zero");
        match &self.kind {
            // e = 2 and v_𝔭(x) = v_𝔭(x̄), so v_𝔭(x) = v_p(Nm x).
            PrimeKind::Ramified => val_p_rat(&x.norm(), self.p),
            // {1, ω} stays a Z_p-basis, so the valuation is the coordinate min.
            PrimeKind::Inert => {
                let (r1, r2) = x.omega_rat_coords();
                [r1, r2]
                    .iter()
                    .filter(|r| !r.is_zero())
                    .map(|r| val_p_rat(r, self.p))
                    .min()
                    .unwrap()
            }
            PrimeKind::Split { .. } => {
                let (r1, r2) = x.omega_rat_coords();
                let m = [&r1, &r2]
                    .into_iter()
                    .filter(|r| !r.is_zero())
                    .map(|r| val_p_rat(r, self.p))
                    .min()
                    .unwrap();
                let scale = FieldElem::from_rat(
                    self.d,
                    &Rat::from_integer(BigInt::from(self.p)).pow(-(m as i32)),
                );
                let xn = x * &scale;
                let k = val_p_rat(&xn.norm(), self.p) as u32 + 1;
                let e = self.embed_mod(&xn, k);
                let v = if e.is_zero() { k as i64 } else { val_p_int(&e, self.p) };
                assert!(v < k as i64, "truncated split valuation");
                m + v
            }
        }
    }

    /// Quadratic residue character of the residue field at a 𝔭-unit.
    pub fn unit_residue_character(&self, x: &FieldElem) -> i32 {
        debug_assert_eq!(self.valuation(x), 0);
        match &self.kind {
            PrimeKind::Split { .. } => {
                legendre(&self.embed_mod(x, 1), self.p)
            }
            // Nm: F_{p²}^× → F_p^× is surjective with kernel of order p+1,
            // so x^((p²−1)/2) = Nm(x)^((p−1)/2).
            PrimeKind::Inert => {
                let n = x.norm();
                let num = n.numer() * inv_mod(n.denom(), &BigInt::from(self.p));
                legendre(&num, self.p)
            }
            // Strip the uniformizer's contribution is the caller's job;
            // here v(x) = 0, and the residue map sends √d ↦ 0.
            PrimeKind::Ramified => {
                assert!(self.p != 2, "no quadratic character on F_2");
                let (r1, _) = x.rat_coords();
                let num = r1.numer() * inv_mod(r1.denom(), &BigInt::from(self.p));
                legendre(&num, self.p)
            }
        }
    }
}

/// Newton lift of a simple root of x² + bx + c from mod p to mod p^k.
fn hensel_lift_root(b: &BigInt, c: &BigInt, seed: &BigInt, p: u64, k: u32) -> BigInt {
    let mut prec = 1u32;
    let mut r = seed.clone();
    while prec < k {
        prec = (2 * prec).min(k);
        let modulus = BigInt::from(p).pow(prec);
        let f = (&r * &r + b * &r + c).mod_floor(&modulus);
        let fprime = (&r * 2i32 + b).mod_floor(&modulus);
        r = (&r - f * inv_mod(&fprime, &modulus)).mod_floor(&modulus);
    }
    r
}

pub fn val_p_int(n: &BigInt, p: u64) -> i64 {
    assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        n = q;
    }
}

pub fn val_p_rat(r: &Rat, p: u64) -> i64 {
    val_p_int(r.numer(), p) - val_p_int(r.denom(), p)
}

/// Modular inverse for m coprime to the modulus.
pub fn inv_mod(a: &BigInt, modulus: &BigInt) -> BigInt {
    let e = a.extended_gcd(modulus);
    assert!(e.gcd.is_one(), "inv_mod of non-unit");
    e.x.mod_floor(modulus)
}

/// Legendre symbol (a/p) for odd prime p, via Euler's criterion.
pub fn legendre(a: &BigInt, p: u64) -> i32 {
    assert!(p % 2 == 1, "legendre needs an odd prime");
    let pb = BigInt::from(p);
    let a = a.mod_floor(&pb);
    if a.is_zero() {
        return 0;
    }
    let e = a.modpow(&((&pb - 1) / 2), &pb);
    if e.is_one() { 1 } else { -1 }
}

/// Square root mod odd prime p (Tonelli–Shanks), if one exists.
pub fn sqrt_mod_p(a: &BigInt, p: u64) -> Option<BigInt> {
    let pb = BigInt::from(p);
    let a = a.mod_floor(&pb);
    if a.is_zero() {
        return Some(BigInt::zero());
    }
    if legendre(&a, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(a.modpow(&((&pb + 1) / 4), &pb));
    }
    // Tonelli–Shanks: p − 1 = q·2^s with q odd.
    let mut q: BigInt = &pb - 1;
    let mut s = 0u32;
    while q.is_even() {
        q /= 2;
        s += 1;
    }
    let mut z = BigInt::from(2);
    while legendre(&z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = z.modpow(&q, &pb);
    let mut t = a.modpow(&q, &pb);
    let mut r = a.modpow(&((&q + 1) / 2), &pb);
    while !t.is_one() {
        let mut i = 0u32;
        let mut t2 = t.clone();
        while !t2.is_one() {
            t2 = (&t2 * &t2).mod_floor(&pb);
            i += 1;
        }
        let b = c.modpow(&BigInt::from(2).pow(m - i - 1), &pb);
        m = i;
        c = (&b * &b).mod_floor(&pb);
        t = (&t * &c).mod_floor(&pb);
        r = (&r * &b).mod_floor(&pb);
    }
    Some(r)
}

/// An ideal of F in fully factored form. Fractional ideals allowed
/// (negative exponents); the zero ideal is not represented.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdealF {
    pub d: u64,
    pub factors: Vec<(PrimeIdealF, i64)>,
}

impl IdealF {
    pub fn one(d: u64) -> IdealF {
        IdealF { d, factors: Vec::new() }
    }

    pub fn from_factors(d: u64, mut factors: Vec<(PrimeIdealF, i64)>) -> IdealF {
        factors.retain(|(_, e)| *e != 0);
        factors.sort();
        let mut merged: Vec<(PrimeIdealF, i64)> = Vec::new();
        for (pr, e) in factors {
            match merged.last_mut() {
                Some((last, le)) if *last == pr => *le += e,
                _ => merged.push((pr, e)),
            }
        }
        merged.retain(|(_, e)| *e != 0);
        IdealF { d, factors: merged }
    }

    /// Principal ideal (x), x ≠ 0.
    pub fn principal(x: &FieldElem) -> IdealF {
        assert!(!x.is_zero());
        Self::from_generators(x.d, std::slice::from_ref(x))
    }

    /// The ideal generated by the given nonzero elements: minimum of the
    /// generator valuations at every prime in the common support.
    pub fn from_generators(d: u64, gens: &[FieldElem]) -> IdealF {
        let gens: Vec<_> = gens.iter().filter(|g| !g.is_zero()).collect();
        assert!(!gens.is_empty(), "ideal needs a nonzero generator");
        let mut support: Vec<u64> = Vec::new();
        for g in &gens {
            let n = g.norm();
            for part in [n.numer().clone(), n.denom().clone()] {
                for (p, _) in factor(&part) {
                    let p = p.to_u64().expect("prime fits in u64");
                    if !support.contains(&p) {
                        support.push(p);
                    }
                }
            }
        }
        let mut factors = Vec::new();
        for p in support {
            for pr in primes_above(d, p) {
                let v = gens.iter().map(|g| pr.valuation(g)).min().unwrap();
                if v != 0 {
                    factors.push((pr, v));
                }
            }
        }
        IdealF::from_factors(d, factors)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e >= 0)
    }

    pub fn valuation_at(&self, pr: &PrimeIdealF) -> i64 {
        self.factors.iter().find(|(q, _)| q == pr).map_or(0, |(_, e)| *e)
    }

    pub fn mul(&self, other: &IdealF) -> IdealF {
        assert_eq!(self.d, other.d);
        let mut f = self.factors.clone();
        f.extend(other.factors.iter().cloned());
        IdealF::from_factors(self.d, f)
    }

    pub fn pow(&self, k: i64) -> IdealF {
        IdealF::from_factors(
            self.d,
            self.factors.iter().map(|(p, e)| (p.clone(), e * k)).collect(),
        )
    }

    pub fn absolute_norm(&self) -> Rat {
        let mut n = Rat::one();
        for (pr, e) in &self.factors {
            n *= Rat::from_integer(pr.absolute_norm()).pow(*e as i32);
        }
        n
    }

    pub fn divides(&self, other: &IdealF) -> bool {
        self.factors.iter().all(|(p, e)| other.valuation_at(p) >= *e)
    }

    /// The primes dividing this ideal.
    pub fn support(&self) -> Vec<PrimeIdealF> {
        self.factors.iter().map(|(p, _)| p.clone()).collect()
    }
}

impl std::fmt::Display for IdealF {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_one() {
            return write!(f, "(1)");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(pr, e)| {
                let tag = match &pr.kind {
                    PrimeKind::Split { root } => format!("({},ω−{})", pr.p, root),
                    PrimeKind::Inert => format!("({})", pr.p),
                    PrimeKind::Ramified => format!("({},√{})", pr.p, pr.d),
                };
                if *e == 1 { tag } else { format!("{}^{}", tag, e) }
            })
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// Integer factorization: trial division then Pollard rho with
/// Miller–Rabin certification. Returns (prime, exponent) pairs, ascending.
pub fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    if n <= BigInt::one() {
        return Vec::new();
    }
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let mut push = |p: BigInt, e: u32| {
        out.push((p, e));
    };
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let pb = BigInt::from(p);
        let mut e = 0;
        while (&n % &pb).is_zero() {
            n /= &pb;
            e += 1;
        }
        if e > 0 {
            push(pb, e);
        }
    }
    let mut stack = vec![n];
    let mut rest: Vec<BigInt> = Vec::new();
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            rest.push(m);
            continue;
        }
        let f = pollard_rho(&m);
        stack.push(&m / &f);
        stack.push(f);
    }
    rest.sort();
    let mut i = 0;
    while i < rest.len() {
        let mut j = i;
        while j < rest.len() && rest[j] == rest[i] {
            j += 1;
        }
        push(rest[i].clone(), (j - i) as u32);
        i = j;
    }
    out.sort();
    out
}

pub fn is_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let pb = BigInt::from(p);
        if *n == pb {
            return true;
        }
        if (n % &pb).is_zero() {
            return false;
        }
    }
    let mut df: BigInt = n - 1;
    let mut s = 0u32;
    while df.is_even() {
        df /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigInt::from(a).modpow(&df, n);
        if x.is_one() || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = (&x * &x) % n;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigInt) -> BigInt {
    if n.is_even() {
        return BigInt::from(2);
    }
    let mut c = BigInt::one();
    loop {
        let mut x = BigInt::from(2);
        let mut y = BigInt::from(2);
        let mut dd = BigInt::one();
        while dd.is_one() {
            x = (&x * &x + &c) % n;
            y = (&y * &y + &c) % n;
            y = (&y * &y + &c) % n;
            dd = (&x - &y).abs().gcd(n);
        }
        if dd != *n {
            return dd;
        }
        c += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decomposition_kinds() {
        assert!(matches!(prime_above(7, 2).kind, PrimeKind::Ramified));
        assert!(matches!(prime_above(7, 7).kind, PrimeKind::Ramified));
        assert_eq!(primes_above(7, 3).len(), 2);
        assert!(matches!(prime_above(7, 5).kind, PrimeKind::Inert));
        assert_eq!(primes_above(17, 2).len(), 2);
        assert!(matches!(prime_above(13, 2).kind, PrimeKind::Inert));
        assert!(matches!(prime_above(6, 2).kind, PrimeKind::Ramified));
        assert!(matches!(prime_above(6, 3).kind, PrimeKind::Ramified));
    }

    #[test]
    fn ramified_and_inert_valuations() {
        let p7 = prime_above(7, 7);
        assert_eq!(p7.valuation(&FieldElem::sqrt_d(7)), 1);
        assert_eq!(p7.valuation(&FieldElem::from_int(7, 7)), 2);
        let p2 = prime_above(7, 2);
        assert_eq!(p2.valuation(&FieldElem::from_parts(7, 1, 1, 1)), 1);
        assert_eq!(p2.valuation(&FieldElem::from_int(7, 2)), 2);
        let p5 = prime_above(7, 5);
        assert_eq!(p5.valuation(&FieldElem::from_int(7, 5)), 1);
        assert_eq!(p5.valuation(&FieldElem::from_parts(7, 1, 1, 5)), -1);
    }

    #[test]
    fn split_valuations_sum_to_norm_valuation() {
        // ω = (1+√17)/2 has norm −4; the 2-adic valuation splits 2 + 0.
        let pr = primes_above(17, 2);
        let omega = FieldElem::from_omega(17, &BigInt::zero(), &BigInt::one());
        let vals: Vec<i64> = pr.iter().map(|p| p.valuation(&omega)).collect();
        let mut sorted = vals.clone();
        sorted.sort();
        assert_eq!(sorted, vec![0, 2]);
        // Conjugate prime swaps the two valuations.
        assert_eq!(pr[0].conj(), pr[1]);
        assert_eq!(pr[0].conj().valuation(&omega), pr[1].valuation(&omega));

        let p3: Vec<_> = primes_above(7, 3);
        let x = FieldElem::from_parts(7, 1, 1, 1); // Nm = −6
        let s: i64 = p3.iter().map(|p| p.valuation(&x)).sum();
        assert_eq!(s, 1);
    }

    #[test]
    fn principal_and_generated_ideals() {
        let six = IdealF::principal(&FieldElem::from_int(7, 6));
        assert_eq!(six.absolute_norm(), Rat::from_integer(BigInt::from(36)));
        assert_eq!(six.factors.len(), 3);
        let g = IdealF::from_generators(
            7,
            &[FieldElem::from_int(7, 2), FieldElem::from_parts(7, 1, 1, 1)],
        );
        assert_eq!(g.absolute_norm(), Rat::from_integer(BigInt::from(2)));
        assert!(g.is_integral());
        assert!(g.divides(&six));
        assert!(!six.divides(&g));
        let sq = g.pow(2);
        assert_eq!(sq, IdealF::principal(&FieldElem::from_int(7, 2)));
    }

    #[test]
    fn unit_residue_characters() {
        // At the split primes of d=7 above 3, ε = 8+3√7 ≡ 8 ≡ 2 mod 3.
        for pr in primes_above(7, 3) {
            let fu = crate::quadfield::unit::fundamental_unit(7).unwrap();
            assert_eq!(pr.unit_residue_character(&fu.eps), -1);
        }
        // −1 is a nonsquare in F_3 but a square in F_9.
        let p3_inert = prime_above(5, 3);
        assert_eq!(p3_inert.unit_residue_character(&FieldElem::from_int(5, -1)), 1);
        // At 𝔮 = (7, √7): −3 mod 7 = 4 is a square.
        let q = prime_above(7, 7);
        assert_eq!(q.unit_residue_character(&FieldElem::from_int(7, -3)), 1);
    }

    #[test]
    fn factorization_utilities() {
        assert_eq!(
            factor(&BigInt::from(2419)),
            vec![(BigInt::from(41), 1), (BigInt::from(59), 1)]
        );
        assert_eq!(factor(&BigInt::from(-720)), vec![
            (BigInt::from(2), 4),
            (BigInt::from(3), 2),
            (BigInt::from(5), 1)
        ]);
        assert!(factor(&BigInt::one()).is_empty());
        assert!(is_prime(&BigInt::from(97)));
        assert!(!is_prime(&BigInt::from(91)));
        // Carmichael number.
        assert!(!is_prime(&BigInt::from(561)));
    }
}
