//! Integer lattices with a global denominator, quaternion orders, duals,
//! and normalizer tests. Lattices are stored in Hermite normal form so
//! that equality and dedup are plain comparisons.

use crate::quadfield::elem::FieldElem;
use crate::quadfield::ideal::IdealF;
use crate::quadfield::Rat;
use crate::quatalg::{qzero, Quat, QuatAlgebra};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use once_cell::sync::OnceCell;
use thiserror::Error;

/// Row Hermite normal form: pivots positive, entries above a pivot reduced
/// into [0, pivot). Zero rows are dropped.
pub fn hnf_rows(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return rows;
    }
    let ncols = rows[0].len();
    let mut pivot_row = 0usize;
    for col in 0..ncols {
        if pivot_row >= rows.len() {
            break;
        }
        // Clear column `col` below `pivot_row` with Euclidean row steps.
        loop {
            let mut idx: Option<usize> = None;
            for r in pivot_row..rows.len() {
                if !rows[r][col].is_zero()
                    && idx.is_none_or(|b| rows[r][col].abs() < rows[b][col].abs())
                {
                    idx = Some(r);
                }
            }
            let Some(best) = idx else { break };
            rows.swap(pivot_row, best);
            let mut done = true;
            for r in pivot_row + 1..rows.len() {
                if !rows[r][col].is_zero() {
                    let q = rows[r][col].div_floor(&rows[pivot_row][col]);
                    for c in 0..ncols {
                        let t = &rows[r][c] - &q * &rows[pivot_row][c];
                        rows[r][c] = t;
                    }
                    if !rows[r][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if rows[pivot_row][col].is_zero() {
            continue;
        }
        if rows[pivot_row][col].is_negative() {
            for c in 0..ncols {
                rows[pivot_row][c] = -&rows[pivot_row][c];
            }
        }
        for r in 0..pivot_row {
            if !rows[r][col].is_zero() {
                let q = rows[r][col].div_floor(&rows[pivot_row][col]);
                if !q.is_zero() {
                    for c in 0..ncols {
                        let t = &rows[r][c] - &q * &rows[pivot_row][c];
                        rows[r][c] = t;
                    }
                }
            }
        }
        pivot_row += 1;
    }
    rows.truncate(pivot_row);
    rows
}

/// A finitely generated subgroup of ℚ^dim: integer rows over a common
/// positive denominator, canonicalized by HNF.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZLattice {
    pub dim: usize,
    pub den: BigInt,
    pub rows: Vec<Vec<BigInt>>,
}

impl ZLattice {
    pub fn from_rows(dim: usize, den: BigInt, rows: Vec<Vec<BigInt>>) -> Self {
        assert!(den.is_positive());
        let rows = hnf_rows(rows);
        let mut g = den.clone();
        for r in &rows {
            for x in r {
                g = g.gcd(x);
            }
        }
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| x / &g).collect())
            .collect();
        ZLattice { dim, den: den / g, rows }
    }

    pub fn from_rat_rows(dim: usize, rat_rows: &[Vec<Rat>]) -> Self {
        let mut den = BigInt::one();
        for r in rat_rows {
            for x in r {
                den = den.lcm(x.denom());
            }
        }
        let rows = rat_rows
            .iter()
            .map(|r| r.iter().map(|x| (x * &den).to_integer()).collect())
            .collect();
        ZLattice::from_rows(dim, den, rows)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rat_rows(&self) -> Vec<Vec<Rat>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| Rat::new(x.clone(), self.den.clone())).collect())
            .collect()
    }

    /// Reduce a rational vector by the basis rows; the remainder is zero
    /// exactly when the vector lies in the lattice.
    fn residue(&self, v: &[Rat]) -> Vec<Rat> {
        let mut v: Vec<Rat> = v.to_vec();
        let mut row_idx = 0usize;
        for col in 0..self.dim {
            if row_idx >= self.rows.len() {
                break;
            }
            if self.rows[row_idx][col].is_zero() {
                continue;
            }
            let pivot = Rat::new(self.rows[row_idx][col].clone(), self.den.clone());
            let q = &v[col] / &pivot;
            if q.is_integer() {
                for c in 0..self.dim {
                    let t = &v[c] - &q * Rat::new(self.rows[row_idx][c].clone(), self.den.clone());
                    v[c] = t;
                }
            }
            row_idx += 1;
        }
        v
    }

    pub fn contains_vec(&self, v: &[Rat]) -> bool {
        self.residue(v).iter().all(Rat::is_zero)
    }

    pub fn contains_lattice(&self, other: &ZLattice) -> bool {
        other.rat_rows().iter().all(|r| self.contains_vec(r))
    }

    pub fn add(&self, other: &ZLattice) -> ZLattice {
        assert_eq!(self.dim, other.dim);
        let den = self.den.lcm(&other.den);
        let s1 = &den / &self.den;
        let s2 = &den / &other.den;
        let mut rows: Vec<Vec<BigInt>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x * &s1).collect())
            .collect();
        rows.extend(other.rows.iter().map(|r| r.iter().map(|x| x * &s2).collect::<Vec<_>>()));
        ZLattice::from_rows(self.dim, den, rows)
    }

    pub fn intersect(&self, other: &ZLattice) -> ZLattice {
        assert_eq!(self.dim, other.dim);
        let den = self.den.lcm(&other.den);
        let s1 = &den / &self.den;
        let s2 = &den / &other.den;
        // HNF of [[A, A], [B, 0]]: rows with zero left half carry the
        // intersection in their right half.
        let mut stacked: Vec<Vec<BigInt>> = Vec::new();
        for r in &self.rows {
            let mut row: Vec<BigInt> = r.iter().map(|x| x * &s1).collect();
            row.extend(r.iter().map(|x| x * &s1));
            stacked.push(row);
        }
        for r in &other.rows {
            let mut row: Vec<BigInt> = r.iter().map(|x| x * &s2).collect();
            row.extend(std::iter::repeat_n(BigInt::zero(), self.dim));
            stacked.push(row);
        }
        let reduced = hnf_rows(stacked);
        let rows: Vec<Vec<BigInt>> = reduced
            .into_iter()
            .filter(|row| row[..self.dim].iter().all(Zero::is_zero))
            .map(|row| row[self.dim..].to_vec())
            .collect();
        ZLattice::from_rows(self.dim, den, rows)
    }

    pub fn scale(&self, c: &Rat) -> ZLattice {
        assert!(!c.is_zero());
        let den = &self.den * c.denom();
        let num = c.numer();
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x * num).collect())
            .collect();
        ZLattice::from_rows(self.dim, den, rows)
    }

    /// Index [other : self] for self ⊆ other of equal rank.
    pub fn index_in(&self, other: &ZLattice) -> BigInt {
        assert_eq!(self.rank(), other.rank());
        let det_self = self.pivot_product();
        let det_other = other.pivot_product();
        let ratio = det_self / det_other;
        assert!(ratio.is_integer(), "index_in called on incomparable lattices");
        ratio.to_integer()
    }

    fn pivot_product(&self) -> Rat {
        let mut p = Rat::one();
        let mut col = 0usize;
        for r in &self.rows {
            while r[col].is_zero() {
                col += 1;
            }
            p *= Rat::new(r[col].clone(), self.den.clone());
        }
        p
    }

    /// Coordinates of `other`'s rows in this basis (self must contain other).
    pub fn coords_of(&self, v: &[Rat]) -> Option<Vec<BigInt>> {
        let mut v: Vec<Rat> = v.to_vec();
        let mut coords = vec![BigInt::zero(); self.rows.len()];
        let mut col = 0usize;
        for (ri, row) in self.rows.iter().enumerate() {
            while col < self.dim && row[col].is_zero() {
                col += 1;
            }
            if col >= self.dim {
                break;
            }
            let pivot = Rat::new(row[col].clone(), self.den.clone());
            let q = &v[col] / &pivot;
            if !q.is_integer() {
                return None;
            }
            coords[ri] = q.to_integer();
            for c in 0..self.dim {
                let t = &v[c] - &q * Rat::new(row[c].clone(), self.den.clone());
                v[c] = t;
            }
            col += 1;
        }
        if v.iter().all(Rat::is_zero) {
            Some(coords)
        } else {
            None
        }
    }
}

/// Encode a quaternion in the fixed ℚ-basis {1, ω} ⊗ {1, i, j, k}.
pub fn quat_to_rat_vec(x: &Quat) -> Vec<Rat> {
    let mut v = Vec::with_capacity(8);
    for c in x {
        let (a, b) = c.omega_rat_coords();
        v.push(a);
        v.push(b);
    }
    v
}

pub fn rat_vec_to_quat(d: u64, v: &[Rat]) -> Quat {
    std::array::from_fn(|s| FieldElem::from_omega_rat(d, &v[2 * s], &v[2 * s + 1]))
}

pub fn lattice_from_quats(d: u64, gens: &[Quat]) -> ZLattice {
    let omega = FieldElem::from_omega(d, &BigInt::zero(), &BigInt::one());
    let mut rows = Vec::new();
    for g in gens {
        rows.push(quat_to_rat_vec(g));
        let og: Quat = std::array::from_fn(|s| &omega * &g[s]);
        rows.push(quat_to_rat_vec(&og));
    }
    ZLattice::from_rat_rows(8, &rows)
}

pub fn lattice_basis_quats(d: u64, lat: &ZLattice) -> Vec<Quat> {
    lat.rat_rows().iter().map(|r| rat_vec_to_quat(d, r)).collect()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrderError {
    #[error("not-a-ring: the O_F-span of the given basis is not closed under multiplication or misses 1")]
    NotARing,
    #[error("not-integral: a basis element has non-integral reduced trace or norm")]
    NotIntegral,
    #[error("enumeration-budget-exceeded: more than {0} lattice states visited")]
    EnumerationBudgetExceeded(u64),
}

#[derive(Debug, Clone)]
pub struct QuatOrder {
    pub alg: QuatAlgebra,
    pub lattice: ZLattice,
    disc: OnceCell<IdealF>,
    group_tag: OnceCell<super::units::GroupTag>,
}

impl PartialEq for QuatOrder {
    fn eq(&self, other: &Self) -> bool {
        self.alg == other.alg && self.lattice == other.lattice
    }
}
impl Eq for QuatOrder {}

impl QuatOrder {
    /// Wrap a lattice already known to be an order (BFS-internal paths).
    pub fn from_lattice_unchecked(alg: QuatAlgebra, lattice: ZLattice) -> Self {
        QuatOrder { alg, lattice, disc: OnceCell::new(), group_tag: OnceCell::new() }
    }

    pub fn basis_quats(&self) -> Vec<Quat> {
        lattice_basis_quats(self.alg.d, &self.lattice)
    }

    pub fn contains(&self, x: &Quat) -> bool {
        self.lattice.contains_vec(&quat_to_rat_vec(x))
    }

    pub fn disc_cached(&self) -> Option<&IdealF> {
        self.disc.get()
    }

    pub fn set_disc(&self, disc: IdealF) -> &IdealF {
        self.disc.get_or_init(|| disc)
    }

    pub fn group_tag_cached(&self) -> Option<super::units::GroupTag> {
        self.group_tag.get().copied()
    }

    pub fn set_group_tag(&self, tag: super::units::GroupTag) -> super::units::GroupTag {
        *self.group_tag.get_or_init(|| tag)
    }
}

fn lattice_is_multiplicatively_closed(alg: &QuatAlgebra, lat: &ZLattice) -> bool {
    let basis = lattice_basis_quats(alg.d, lat);
    for x in &basis {
        for y in &basis {
            if !lat.contains_vec(&quat_to_rat_vec(&alg.mul(x, y))) {
                return false;
            }
        }
    }
    true
}

/// Build an order from a 4-element basis of its O_F-span. Verifies that
/// the span contains 1, is closed under multiplication, and consists of
/// integral elements.
pub fn make_order(basis: &[Quat; 4], alg: &QuatAlgebra) -> Result<QuatOrder, OrderError> {
    let lat = lattice_from_quats(alg.d, basis);
    assert_eq!(lat.rank(), 8, "basis does not span the algebra over F");
    if !lat.contains_vec(&quat_to_rat_vec(&alg.one())) {
        return Err(OrderError::NotARing);
    }
    for x in basis {
        for y in basis {
            if !lat.contains_vec(&quat_to_rat_vec(&alg.mul(x, y))) {
                return Err(OrderError::NotARing);
            }
        }
    }
    for x in basis {
        if !alg.tr(x).is_integral() || !alg.nr(x).is_integral() {
            return Err(OrderError::NotIntegral);
        }
    }
    Ok(QuatOrder::from_lattice_unchecked(alg.clone(), lat))
}

pub fn order_from_lattice(alg: &QuatAlgebra, lat: &ZLattice) -> Result<QuatOrder, OrderError> {
    if lat.rank() != 8 || !lat.contains_vec(&quat_to_rat_vec(&alg.one())) {
        return Err(OrderError::NotARing);
    }
    if !lattice_is_multiplicatively_closed(alg, lat) {
        return Err(OrderError::NotARing);
    }
    Ok(QuatOrder::from_lattice_unchecked(alg.clone(), lat.clone()))
}

/// Ambient Gram matrix T₀[s][t] = Tr_{F/ℚ}(Tr_red(e_s e_t)) of the fixed
/// ℚ-basis; no conjugation, matching the duality pairing.
fn ambient_trace_gram(alg: &QuatAlgebra) -> Vec<Vec<Rat>> {
    let basis = ambient_basis(alg);
    let mut g = vec![vec![Rat::zero(); 8]; 8];
    for s in 0..8 {
        for t in 0..8 {
            g[s][t] = alg.tr(&alg.mul(&basis[s], &basis[t])).trace();
        }
    }
    g
}

fn ambient_basis(alg: &QuatAlgebra) -> Vec<Quat> {
    let d = alg.d;
    let omega = FieldElem::from_omega(d, &BigInt::zero(), &BigInt::one());
    let mut out = Vec::with_capacity(8);
    for s in 0..4 {
        let mut e = qzero(d);
        e[s] = FieldElem::one(d);
        out.push(e.clone());
        let mut eo = qzero(d);
        eo[s] = omega.clone();
        out.push(eo);
    }
    out
}

fn mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![Rat::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                let t = &out[i][j] + &a[i][l] * &b[l][j];
                out[i][j] = t;
            }
        }
    }
    out
}

fn mat_transpose(a: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = a.len();
    let m = a[0].len();
    let mut out = vec![vec![Rat::zero(); n]; m];
    for i in 0..n {
        for j in 0..m {
            out[j][i] = a[i][j].clone();
        }
    }
    out
}

pub fn mat_inverse(a: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a.to_vec();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero()).expect("singular matrix");
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col].clone();
        for j in 0..n {
            m[col][j] = &m[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..n {
                    let t1 = &m[r][j] - &f * &m[col][j];
                    m[r][j] = t1;
                    let t2 = &inv[r][j] - &f * &inv[col][j];
                    inv[r][j] = t2;
                }
            }
        }
    }
    inv
}

pub fn mat_det(a: &[Vec<Rat>]) -> Rat {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a.to_vec();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rat::zero();
        };
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if !m[r][col].is_zero() {
                let f = &m[r][col] / &p;
                for j in col..n {
                    let t = &m[r][j] - &f * &m[col][j];
                    m[r][j] = t;
                }
            }
        }
    }
    det
}

/// Multiplication by √D on ω-coordinates, applied per F-coordinate pair.
fn sqrt_disc_map(d: u64, v: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); v.len()];
    let dd = BigInt::from(d);
    for p in 0..v.len() / 2 {
        let x = &v[2 * p];
        let y = &v[2 * p + 1];
        if d % 4 == 1 {
            out[2 * p] = -x + y * Rat::new((&dd - 1) / 2, BigInt::one());
            out[2 * p + 1] = x * Rat::from_integer(2.into()) + y;
        } else {
            out[2 * p] = y * Rat::new(2 * &dd, BigInt::one());
            out[2 * p + 1] = x * Rat::from_integer(2.into());
        }
    }
    out
}

/// The O_F-dual Λ^∨ = {x ∈ H : Tr_red(xΛ) ⊆ O_F} of a full lattice.
pub fn dual_lattice(lat: &ZLattice, alg: &QuatAlgebra) -> ZLattice {
    assert_eq!(lat.rank(), 8);
    let t0 = ambient_trace_gram(alg);
    let b = lat.rat_rows();
    let gram = mat_mul(&mat_mul(&b, &t0), &mat_transpose(&b));
    let z_dual = mat_mul(&mat_inverse(&gram), &b);
    let rows: Vec<Vec<Rat>> = z_dual.iter().map(|r| sqrt_disc_map(alg.d, r)).collect();
    ZLattice::from_rat_rows(8, &rows)
}

/// [Λ^∨ : Λ] computed from the trace Gram determinant; equals Nm(𝔡(Λ))²
/// for an order.
pub fn dual_index(lat: &ZLattice, alg: &QuatAlgebra) -> BigInt {
    let t0 = ambient_trace_gram(alg);
    let b = lat.rat_rows();
    let gram = mat_mul(&mat_mul(&b, &t0), &mat_transpose(&b));
    let det = mat_det(&gram);
    let cap_d: i64 = if alg.d % 4 == 1 { alg.d as i64 } else { 4 * alg.d as i64 };
    let scale = Rat::from_integer(cap_d.into()).pow(4);
    let idx = (det / scale).abs();
    assert!(idx.is_integer());
    idx.to_integer()
}

pub fn conjugate_lattice(lat: &ZLattice, x: &Quat, alg: &QuatAlgebra) -> ZLattice {
    let rows: Vec<Vec<Rat>> = lattice_basis_quats(alg.d, lat)
        .iter()
        .map(|g| quat_to_rat_vec(&alg.conjugate_by(x, g)))
        .collect();
    ZLattice::from_rat_rows(8, &rows)
}

/// x normalizes O exactly when conjugation by x fixes the lattice.
pub fn normalizer_membership(x: &Quat, order: &QuatOrder) -> bool {
    conjugate_lattice(&order.lattice, x, &order.alg) == order.lattice
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::unit::fundamental_unit;
    use crate::quatalg::StandardTag;

    fn of_ij_basis(alg: &QuatAlgebra) -> [Quat; 4] {
        [alg.one(), alg.gen_i(), alg.gen_j(), alg.gen_k()]
    }

    #[test]
    fn hnf_canonical_form() {
        // Span of (1,1)/2 and (1,−1)/2 is {(x,y) : 2x ∈ ℤ, x+y ∈ ℤ}.
        let l = ZLattice::from_rows(
            2,
            BigInt::from(2),
            vec![
                vec![BigInt::from(1), BigInt::from(1)],
                vec![BigInt::from(1), BigInt::from(-1)],
            ],
        );
        assert_eq!(l.den, BigInt::from(2));
        assert_eq!(l.rows, vec![vec![BigInt::from(1), BigInt::from(1)], vec![
            BigInt::from(0),
            BigInt::from(2)
        ]]);
        assert!(l.contains_vec(&[Rat::new(1.into(), 2.into()), Rat::new(3.into(), 2.into())]));
        assert!(l.contains_vec(&[Rat::one(), Rat::zero()]));
        assert!(!l.contains_vec(&[Rat::new(1.into(), 2.into()), Rat::one()]));

        // Redundant generators over a common denominator normalize fully.
        let m = ZLattice::from_rows(
            2,
            BigInt::from(2),
            vec![
                vec![BigInt::from(4), BigInt::from(6)],
                vec![BigInt::from(2), BigInt::from(2)],
            ],
        );
        assert_eq!(m.den, BigInt::one());
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn intersection_and_sum() {
        let a = ZLattice::from_rows(
            2,
            BigInt::one(),
            vec![vec![BigInt::from(2), BigInt::zero()], vec![BigInt::zero(), BigInt::from(3)]],
        );
        let b = ZLattice::from_rows(
            2,
            BigInt::one(),
            vec![vec![BigInt::from(3), BigInt::zero()], vec![BigInt::zero(), BigInt::from(2)]],
        );
        let meet = a.intersect(&b);
        assert_eq!(meet.rows, vec![vec![BigInt::from(6), BigInt::zero()], vec![
            BigInt::zero(),
            BigInt::from(6)
        ]]);
        let join = a.add(&b);
        assert_eq!(join.rows, vec![vec![BigInt::from(1), BigInt::zero()], vec![
            BigInt::zero(),
            BigInt::from(1)
        ]]);
        assert_eq!(meet.index_in(&join), BigInt::from(36));
    }

    #[test]
    fn order_construction_and_rejection() {
        let alg = QuatAlgebra::from_integers(7, -1, -1);
        let o = make_order(&of_ij_basis(&alg), &alg).unwrap();
        assert!(o.contains(&alg.gen_k()));
        assert!(!o.contains(&alg.xi()));

        // {1, i, j, k/2} is not closed under multiplication.
        let half = FieldElem::from_parts(7, 1, 0, 2);
        let bad = [
            alg.one(),
            alg.gen_i(),
            alg.gen_j(),
            crate::quatalg::qscale(&half, &alg.gen_k()),
        ];
        assert_eq!(make_order(&bad, &alg), Err(OrderError::NotARing));
    }

    #[test]
    fn dual_of_quaternion_order() {
        // O_F[i,j] in (−1,−1): the dual is spanned by {1/2, i/2, j/2, k/2}
        // over O_F (Λ^∨ = ½Λ since the norm form is 4-modular here).
        let alg = QuatAlgebra::from_integers(7, -1, -1);
        let o = make_order(&of_ij_basis(&alg), &alg).unwrap();
        let dual = dual_lattice(&o.lattice, &alg);
        let half = FieldElem::from_parts(7, 1, 0, 2);
        let expect = lattice_from_quats(
            7,
            &[
                alg.scalar(&half),
                crate::quatalg::qscale(&half, &alg.gen_i()),
                crate::quatalg::qscale(&half, &alg.gen_j()),
                crate::quatalg::qscale(&half, &alg.gen_k()),
            ],
        );
        assert_eq!(dual, expect);
        assert_eq!(dual_lattice(&dual, &alg), o.lattice);
        // [O^∨ : O] = Nm(4O_F)² = 256.
        assert_eq!(dual_index(&o.lattice, &alg), BigInt::from(256));
    }

    #[test]
    fn dual_matches_three_ramified_presentation() {
        // O_F[i,(1+j)/2] in (−ε,−3): dual basis {(b−j)/2b, (bi+k)/2ab, j/b, k/ab}.
        for d in [7u64, 13, 21] {
            let fu = fundamental_unit(d).unwrap();
            let alg = crate::quatalg::standard_algebra(StandardTag::D, &fu).unwrap();
            let half = FieldElem::from_parts(d, 1, 0, 2);
            let basis = [
                alg.one(),
                alg.gen_i(),
                crate::quatalg::qscale(&half, &crate::quatalg::qadd(&alg.one(), &alg.gen_j())),
                crate::quatalg::qscale(&half, &crate::quatalg::qadd(&alg.gen_i(), &alg.gen_k())),
            ];
            let o = make_order(&basis, &alg).unwrap();
            let dual = dual_lattice(&o.lattice, &alg);
            let binv = alg.b.inv();
            let abinv = (&alg.a * &alg.b).inv();
            let e1: Quat = {
                let mut e = crate::quatalg::qscale(&(&half * &binv), &alg.gen_j());
                e = crate::quatalg::qsub(&alg.scalar(&half), &e);
                e
            };
            let e2 = crate::quatalg::qadd(
                &crate::quatalg::qscale(&(&half * &alg.a.inv()), &alg.gen_i()),
                &crate::quatalg::qscale(&(&half * &abinv), &alg.gen_k()),
            );
            let e3 = crate::quatalg::qscale(&binv, &alg.gen_j());
            let e4 = crate::quatalg::qscale(&abinv, &alg.gen_k());
            let expect = lattice_from_quats(d, &[e1, e2, e3, e4]);
            assert_eq!(dual, expect, "d={d}");
        }
    }

    #[test]
    fn normalizer_examples() {
        let alg = QuatAlgebra::from_integers(7, -1, -1);
        let o = make_order(&of_ij_basis(&alg), &alg).unwrap();
        let one_plus_i = crate::quatalg::qadd(&alg.one(), &alg.gen_i());
        let one_plus_j = crate::quatalg::qadd(&alg.one(), &alg.gen_j());
        assert!(normalizer_membership(&one_plus_i, &o));
        assert!(normalizer_membership(&one_plus_j, &o));
        assert!(normalizer_membership(&alg.gen_i(), &o));
        // ξ permutes i → j → k, so it lands in the normalizer too.
        assert!(normalizer_membership(&alg.xi(), &o));
        let two_plus_i = crate::quatalg::qadd(&alg.scalar(&FieldElem::from_int(7, 2)), &alg.gen_i());
        assert!(!normalizer_membership(&two_plus_i, &o));

        let fu = fundamental_unit(7).unwrap();
        let algd = crate::quatalg::standard_algebra(StandardTag::D, &fu).unwrap();
        let half = FieldElem::from_parts(7, 1, 0, 2);
        let basis = [
            algd.one(),
            algd.gen_i(),
            crate::quatalg::qscale(&half, &crate::quatalg::qadd(&algd.one(), &algd.gen_j())),
            crate::quatalg::qscale(&half, &crate::quatalg::qadd(&algd.gen_i(), &algd.gen_k())),
        ];
        let o3 = make_order(&basis, &algd).unwrap();
        assert!(normalizer_membership(&algd.gen_j(), &o3));
    }
}
