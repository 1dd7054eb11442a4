//! Integer matrices, normal forms and lattice (subgroup) structure.
//!
//! All arithmetic is over arbitrary-precision integers; Smith normal form
//! pivot growth is notorious and the invariant-factor computations must be
//! exact. The algorithms are plain elementary row/column reduction with gcd
//! pivoting, which is entirely adequate at the ranks this crate works with.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::dim::{require_same_basis, DimBasis, Dimension};
use crate::error::AlgebraError;

/// Dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<IntMatrix, AlgebraError> {
        if data.len() != rows * cols {
            return Err(AlgebraError::ShapeMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Convenience constructor for tests and small fixed matrices.
    pub fn from_i64(rows: &[&[i64]]) -> IntMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| BigInt::from(x)))
            .collect();
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> IntMatrix {
        assert!(rows.iter().all(|row| row.len() == cols), "ragged rows");
        let r = rows.len();
        let data = rows.into_iter().flatten().collect();
        IntMatrix { rows: r, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<BigInt> {
        self.row(r).to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == IntMatrix::identity(self.rows)
    }

    /// Matrix product; panics on shape mismatch (internal misuse).
    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a * &rhs[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.rows, "row vector length mismatch");
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                let prod = xi * &self[(i, j)];
                out[j] += prod;
            }
        }
        out
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut prev = BigInt::one();
        let mut sign = 1i8;
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    m[(i, j)] = q;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        let det = m[(n - 1, n - 1)].clone();
        if sign < 0 {
            -det
        } else {
            det
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, c)];
            self[(i, c)] = v;
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(dst, j)] + q * &self[(src, j)];
            self[(dst, j)] = v;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, dst)] + q * &self[(i, src)];
            self[(i, dst)] = v;
        }
    }

    /// Row-style Hermite normal form of the row lattice: positive pivots at
    /// strictly increasing columns, entries above each pivot reduced into
    /// `[0, pivot)`, zero rows removed.
    pub fn hnf(&self) -> IntMatrix {
        let mut m = self.clone();
        let mut pivot_row = 0usize;
        for col in 0..m.cols {
            if pivot_row >= m.rows {
                break;
            }
            // gcd-reduce the column below pivot_row until one entry remains
            loop {
                let mut best: Option<usize> = None;
                for i in pivot_row..m.rows {
                    if m[(i, col)].is_zero() {
                        continue;
                    }
                    match best {
                        None => best = Some(i),
                        Some(b) => {
                            if m[(i, col)].abs() < m[(b, col)].abs() {
                                best = Some(i);
                            }
                        }
                    }
                }
                let Some(b) = best else { break };
                m.swap_rows(pivot_row, b);
                let mut dirty = false;
                for i in pivot_row + 1..m.rows {
                    if m[(i, col)].is_zero() {
                        continue;
                    }
                    let q = -(&m[(i, col)] / &m[(pivot_row, col)]);
                    m.add_row_multiple(i, pivot_row, &q);
                    if !m[(i, col)].is_zero() {
                        dirty = true;
                    }
                }
                if !dirty {
                    break;
                }
            }
            if m[(pivot_row, col)].is_zero() {
                continue;
            }
            if m[(pivot_row, col)].is_negative() {
                m.negate_row(pivot_row);
            }
            // reduce entries above the pivot into [0, pivot)
            let pivot = m[(pivot_row, col)].clone();
            for i in 0..pivot_row {
                let q = -m[(i, col)].div_floor(&pivot);
                m.add_row_multiple(i, pivot_row, &q);
            }
            pivot_row += 1;
        }
        // rows below pivot_row are zero now
        let rows: Vec<Vec<BigInt>> = (0..pivot_row).map(|i| m.row_vec(i)).collect();
        IntMatrix::from_rows(rows, m.cols)
    }

    /// Smith normal form with unimodular transforms: `u * self * v == s`.
    pub fn snf(&self) -> SnfDecomposition {
        SnfDecomposition::compute(self)
    }

    /// Basis of the left kernel `{ x : x * self == 0 }`, one row per basis
    /// vector (possibly zero rows).
    pub fn kernel_basis(&self) -> IntMatrix {
        let snf = self.snf();
        let r = snf.rank();
        let rows: Vec<Vec<BigInt>> = (r..self.rows).map(|i| snf.u.row_vec(i)).collect();
        IntMatrix::from_rows(rows, self.rows)
    }

    /// Solves `x * self == b` over the integers; `None` when no solution
    /// exists. When the solution is not unique the free coordinates are set
    /// to zero.
    pub fn solve_left(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.cols, "target vector length mismatch");
        let snf = self.snf();
        let c = snf.v.apply_row(b);
        let min = self.rows.min(self.cols);
        let mut y = vec![BigInt::zero(); self.rows];
        for j in 0..self.cols {
            if j < min && !snf.s[(j, j)].is_zero() {
                let (q, r) = c[j].div_rem(&snf.s[(j, j)]);
                if !r.is_zero() {
                    return None;
                }
                y[j] = q;
            } else if !c[j].is_zero() {
                return None;
            }
        }
        Some(snf.u.apply_row(&y))
    }

    /// Whether the matrix has an integer inverse, and the inverse itself.
    pub fn inverse(&self) -> Result<IntMatrix, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::NotInvertible);
        }
        let snf = self.snf();
        if !snf.s.is_identity() {
            return Err(AlgebraError::NotInvertible);
        }
        // u * self * v == 1  =>  self^-1 == v * u
        Ok(snf.v.mul(&snf.u))
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Smith normal form `u * a * v == s` with `s` diagonal, nonnegative, and
/// each diagonal entry dividing the next. `u`, `v` are unimodular; their
/// inverses are tracked alongside.
#[derive(Debug, Clone)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SnfDecomposition {
    fn compute(a: &IntMatrix) -> SnfDecomposition {
        let (rows, cols) = (a.rows, a.cols);
        let mut s = a.clone();
        let mut u = IntMatrix::identity(rows);
        let mut u_inv = IntMatrix::identity(rows);
        let mut v = IntMatrix::identity(cols);
        let mut v_inv = IntMatrix::identity(cols);

        // elementary operations mirrored on the transforms:
        //   row op E on s => u := E u, u_inv := u_inv E^-1
        //   col op C on s => v := v C, v_inv := C^-1 v_inv
        let min = rows.min(cols);
        let mut t = 0usize;
        while t < min {
            // locate the nonzero entry of smallest magnitude in s[t.., t..]
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if s[(i, j)].is_zero() {
                        continue;
                    }
                    match pivot {
                        None => pivot = Some((i, j)),
                        Some((pi, pj)) => {
                            if s[(i, j)].abs() < s[(pi, pj)].abs() {
                                pivot = Some((i, j));
                            }
                        }
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            u_inv.swap_cols(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);

            loop {
                // clear column t below the pivot
                let mut progress = false;
                for i in t + 1..rows {
                    if s[(i, t)].is_zero() {
                        continue;
                    }
                    let q = -(&s[(i, t)] / &s[(t, t)]);
                    s.add_row_multiple(i, t, &q);
                    u.add_row_multiple(i, t, &q);
                    u_inv.add_col_multiple(t, i, &(-&q));
                    if !s[(i, t)].is_zero() {
                        // remainder is smaller than the pivot: promote it
                        s.swap_rows(t, i);
                        u.swap_rows(t, i);
                        u_inv.swap_cols(t, i);
                        progress = true;
                    }
                }
                if progress {
                    continue;
                }
                // clear row t right of the pivot
                for j in t + 1..cols {
                    if s[(t, j)].is_zero() {
                        continue;
                    }
                    let q = -(&s[(t, j)] / &s[(t, t)]);
                    s.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                    v_inv.add_row_multiple(t, j, &(-&q));
                    if !s[(t, j)].is_zero() {
                        s.swap_cols(t, j);
                        v.swap_cols(t, j);
                        v_inv.swap_rows(t, j);
                        progress = true;
                    }
                }
                if progress {
                    continue;
                }
                // pivot now divides its row and column remainders (both are
                // zero); enforce divisibility of the trailing block
                let mut fixed = true;
                'scan: for i in t + 1..rows {
                    for j in t + 1..cols {
                        if !(&s[(i, j)] % &s[(t, t)]).is_zero() {
                            let one = BigInt::one();
                            s.add_row_multiple(t, i, &one);
                            u.add_row_multiple(t, i, &one);
                            u_inv.add_col_multiple(i, t, &(-&one));
                            fixed = false;
                            break 'scan;
                        }
                    }
                }
                if fixed {
                    break;
                }
            }
            if s[(t, t)].is_negative() {
                s.negate_row(t);
                u.negate_row(t);
                u_inv.negate_col(t);
            }
            t += 1;
        }
        SnfDecomposition { u, s, v, u_inv, v_inv }
    }

    /// Nonzero diagonal entries in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let min = self.s.rows().min(self.s.cols());
        (0..min)
            .map(|i| self.s[(i, i)].clone())
            .filter(|d| !d.is_zero())
            .collect()
    }

    /// Invariant factors >= 2, the witnesses of torsion in the cokernel.
    pub fn torsion_factors(&self) -> Vec<BigInt> {
        self.invariant_factors()
            .into_iter()
            .filter(|d| *d > BigInt::one())
            .collect()
    }

    /// Number of nonzero invariant factors = rank of the matrix.
    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// A subgroup (integer lattice) of a dimension group, canonicalized by the
/// Hermite normal form of its generator matrix.
#[derive(Debug, Clone)]
pub struct Subgroup {
    ambient: Arc<DimBasis>,
    generators: IntMatrix,
    hnf_basis: IntMatrix,
    snf: SnfDecomposition,
}

impl Subgroup {
    /// Subgroup generated by the given dimensions, one generator per row.
    pub fn new(ambient: &Arc<DimBasis>, gens: &[Dimension]) -> Result<Subgroup, AlgebraError> {
        for g in gens {
            require_same_basis(ambient, g.basis())?;
        }
        let rows: Vec<Vec<BigInt>> = gens.iter().map(|g| g.exponents().to_vec()).collect();
        let matrix = IntMatrix::from_rows(rows, ambient.rank());
        Subgroup::from_matrix(ambient, matrix)
    }

    pub fn from_matrix(
        ambient: &Arc<DimBasis>,
        generators: IntMatrix,
    ) -> Result<Subgroup, AlgebraError> {
        if generators.cols() != ambient.rank() {
            return Err(AlgebraError::ShapeMismatch(format!(
                "generator rows must have {} entries, got {}",
                ambient.rank(),
                generators.cols()
            )));
        }
        let hnf_basis = generators.hnf();
        let snf = generators.snf();
        Ok(Subgroup {
            ambient: Arc::clone(ambient),
            generators,
            hnf_basis,
            snf,
        })
    }

    /// The trivial subgroup (only the identity).
    pub fn trivial(ambient: &Arc<DimBasis>) -> Subgroup {
        Subgroup::from_matrix(ambient, IntMatrix::zeros(0, ambient.rank()))
            .expect("trivial subgroup is well formed")
    }

    /// The improper subgroup (the whole group).
    pub fn full(ambient: &Arc<DimBasis>) -> Subgroup {
        Subgroup::from_matrix(ambient, IntMatrix::identity(ambient.rank()))
            .expect("full subgroup is well formed")
    }

    pub fn ambient(&self) -> &Arc<DimBasis> {
        &self.ambient
    }

    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    pub fn hnf_basis(&self) -> &IntMatrix {
        &self.hnf_basis
    }

    pub fn snf(&self) -> &SnfDecomposition {
        &self.snf
    }

    /// Lattice rank (number of independent generators).
    pub fn rank(&self) -> usize {
        self.hnf_basis.rows()
    }

    /// The HNF basis rows as dimensions of the ambient group.
    pub fn basis_dims(&self) -> Vec<Dimension> {
        (0..self.hnf_basis.rows())
            .map(|i| {
                Dimension::new(&self.ambient, self.hnf_basis.row_vec(i))
                    .expect("basis rows match ambient rank")
            })
            .collect()
    }

    /// Two subgroups describe the same lattice iff their HNF bases agree.
    pub fn same_lattice(&self, other: &Subgroup) -> bool {
        self.ambient == other.ambient && self.hnf_basis == other.hnf_basis
    }

    /// Membership with certificate: integer coordinates of `d` in the HNF
    /// basis, or `None` when `d` is outside the lattice.
    pub fn membership(&self, d: &Dimension) -> Result<Option<Vec<BigInt>>, AlgebraError> {
        require_same_basis(&self.ambient, d.basis())?;
        let mut residual = d.exponents().to_vec();
        let h = &self.hnf_basis;
        let mut coords = vec![BigInt::zero(); h.rows()];
        let mut row = 0usize;
        for col in 0..h.cols() {
            let pivot_here = row < h.rows() && !h[(row, col)].is_zero();
            if pivot_here {
                let (q, r) = residual[col].div_rem(&h[(row, col)]);
                if !r.is_zero() {
                    return Ok(None);
                }
                if !q.is_zero() {
                    for j in col..h.cols() {
                        let v = &residual[j] - &q * &h[(row, j)];
                        residual[j] = v;
                    }
                }
                coords[row] = q;
                row += 1;
            } else if !residual[col].is_zero() {
                return Ok(None);
            }
        }
        Ok(Some(coords))
    }

    pub fn contains(&self, d: &Dimension) -> Result<bool, AlgebraError> {
        Ok(self.membership(d)?.is_some())
    }

    /// Structure of the quotient of the ambient group by this lattice:
    /// free rank, torsion invariant factors, and an adapted basis.
    ///
    /// Returned whether or not torsion is present; the caller decides
    /// whether a torsion quotient is acceptable.
    pub fn quotient_structure(&self) -> QuotientStructure {
        let k = self.ambient.rank();
        let lattice_rank = self.snf.rank();
        QuotientStructure {
            free_rank: k - lattice_rank,
            torsion: self.snf.torsion_factors(),
            lattice_rank,
            adapted_basis: self.snf.v_inv.clone(),
            coords: self.snf.v.clone(),
        }
    }
}

/// The quotient of an ambient group `Z^k` by a sublattice, described through
/// an adapted basis: the rows `w_1..w_k` of `adapted_basis` form a basis of
/// the ambient group such that the first `lattice_rank` rows, scaled by the
/// invariant factors, span the sublattice.
#[derive(Debug, Clone)]
pub struct QuotientStructure {
    free_rank: usize,
    torsion: Vec<BigInt>,
    lattice_rank: usize,
    /// rows w_i, a basis of the ambient group (`v_inv` of the generator SNF)
    adapted_basis: IntMatrix,
    /// maps ambient exponent vectors to adapted-basis coordinates (`v`)
    coords: IntMatrix,
}

/// Decomposition of an ambient vector into its sublattice-spanned part and
/// the complement part, plus the coordinates of the class in the free
/// quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSplit {
    /// component inside the span of the first `lattice_rank` adapted rows
    /// (an ambient vector; lies in the sublattice itself when the quotient
    /// is free)
    pub subgroup_part: Vec<BigInt>,
    /// component in the complement (an ambient vector)
    pub complement_part: Vec<BigInt>,
    /// coordinates of the class over the complement adapted rows
    pub quotient_coords: Vec<BigInt>,
}

impl QuotientStructure {
    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice_rank
    }

    pub fn adapted_basis(&self) -> &IntMatrix {
        &self.adapted_basis
    }

    /// Adapted rows spanning the complement of the sublattice.
    pub fn complement_rows(&self) -> Vec<Vec<BigInt>> {
        (self.lattice_rank..self.adapted_basis.rows())
            .map(|i| self.adapted_basis.row_vec(i))
            .collect()
    }

    /// Splits an ambient exponent vector along the adapted basis.
    pub fn decompose(&self, exps: &[BigInt]) -> LatticeSplit {
        let c = self.coords.apply_row(exps);
        let k = self.adapted_basis.rows();
        let mut subgroup_part = vec![BigInt::zero(); self.adapted_basis.cols()];
        let mut complement_part = vec![BigInt::zero(); self.adapted_basis.cols()];
        for i in 0..k {
            let target = if i < self.lattice_rank {
                &mut subgroup_part
            } else {
                &mut complement_part
            };
            if c[i].is_zero() {
                continue;
            }
            for j in 0..self.adapted_basis.cols() {
                let v = &target[j] + &c[i] * &self.adapted_basis[(i, j)];
                target[j] = v;
            }
        }
        LatticeSplit {
            subgroup_part,
            complement_part,
            quotient_coords: c[self.lattice_rank..].to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dim::DimBasis;
    use proptest::prelude::*;

    fn check_snf(a: &IntMatrix) {
        let snf = a.snf();
        assert_eq!(snf.u.mul(a).mul(&snf.v), snf.s, "u*a*v != s for {a:?}");
        assert_eq!(snf.u.det().abs(), BigInt::one());
        assert_eq!(snf.v.det().abs(), BigInt::one());
        assert!(snf.u.mul(&snf.u_inv).is_identity());
        assert!(snf.v.mul(&snf.v_inv).is_identity());
        let factors = snf.invariant_factors();
        for w in factors.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken");
        }
        for d in &factors {
            assert!(d > &BigInt::zero());
        }
        // off-diagonal entries of s vanish
        for i in 0..snf.s.rows() {
            for j in 0..snf.s.cols() {
                if i != j {
                    assert!(snf.s[(i, j)].is_zero());
                }
            }
        }
    }

    #[test]
    fn hnf_pinned_cases() {
        assert_eq!(
            IntMatrix::from_i64(&[&[2, 0], &[0, 0]]).hnf(),
            IntMatrix::from_i64(&[&[2, 0]])
        );
        let id = IntMatrix::identity(3);
        assert_eq!(id.hnf(), id);
        assert_eq!(
            IntMatrix::from_i64(&[&[1, -1], &[2, -1]]).hnf(),
            IntMatrix::identity(2)
        );
        // above-pivot entries are reduced into [0, pivot)
        assert_eq!(
            IntMatrix::from_i64(&[&[2, 7], &[0, 3]]).hnf(),
            IntMatrix::from_i64(&[&[2, 1], &[0, 3]])
        );
    }

    #[test]
    fn hnf_empty_shapes() {
        assert_eq!(IntMatrix::zeros(0, 3).hnf(), IntMatrix::zeros(0, 3));
        assert_eq!(IntMatrix::zeros(3, 0).hnf(), IntMatrix::zeros(0, 0));
        assert_eq!(IntMatrix::zeros(0, 0).hnf(), IntMatrix::zeros(0, 0));
        assert_eq!(IntMatrix::zeros(2, 2).hnf(), IntMatrix::zeros(0, 2));
    }

    #[test]
    fn snf_pinned_cases() {
        let a = IntMatrix::from_i64(&[&[2, 0]]);
        check_snf(&a);
        assert_eq!(a.snf().invariant_factors(), vec![BigInt::from(2)]);

        let b = IntMatrix::from_i64(&[&[1, -1]]);
        check_snf(&b);
        assert_eq!(b.snf().invariant_factors(), vec![BigInt::from(1)]);

        let planck = IntMatrix::from_i64(&[
            &[1, -1, 0, 0, 0],
            &[2, -1, 1, 0, 0],
            &[3, -2, -1, 0, 0],
            &[3, -2, 1, -2, 0],
            &[2, -2, 1, 0, -1],
        ]);
        check_snf(&planck);
        assert_eq!(planck.det().abs(), BigInt::from(4));
        let factors: Vec<i64> = planck
            .snf()
            .invariant_factors()
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect();
        assert_eq!(factors, vec![1, 1, 1, 2, 2]);
    }

    #[test]
    fn snf_empty_shapes() {
        check_snf(&IntMatrix::zeros(0, 0));
        check_snf(&IntMatrix::zeros(0, 4));
        check_snf(&IntMatrix::zeros(4, 0));
        check_snf(&IntMatrix::zeros(3, 3));
        assert_eq!(IntMatrix::zeros(3, 3).snf().rank(), 0);
    }

    #[test]
    fn membership_examples() {
        let basis = DimBasis::new(["L", "T"]).unwrap();
        let c = Dimension::from_exponents(&basis, &[1, -1]).unwrap();
        let sub = Subgroup::new(&basis, &[c.clone()]).unwrap();

        let c2 = Dimension::from_exponents(&basis, &[2, -2]).unwrap();
        assert_eq!(
            sub.membership(&c2).unwrap(),
            Some(vec![BigInt::from(2)])
        );
        let l = Dimension::from_exponents(&basis, &[1, 0]).unwrap();
        assert_eq!(sub.membership(&l).unwrap(), None);
        assert_eq!(
            sub.membership(&Dimension::identity(&basis)).unwrap(),
            Some(vec![BigInt::zero()])
        );

        let trivial = Subgroup::trivial(&basis);
        assert_eq!(
            trivial.membership(&Dimension::identity(&basis)).unwrap(),
            Some(vec![])
        );
        assert_eq!(trivial.membership(&l).unwrap(), None);

        let other = DimBasis::new(["X"]).unwrap();
        let x = Dimension::from_exponents(&other, &[1]).unwrap();
        assert!(sub.membership(&x).is_err());
    }

    #[test]
    fn membership_certificate_reconstructs() {
        let basis = DimBasis::new(["L", "T", "M"]).unwrap();
        let gens = [
            Dimension::from_exponents(&basis, &[1, -1, 0]).unwrap(),
            Dimension::from_exponents(&basis, &[0, 2, 1]).unwrap(),
        ];
        let sub = Subgroup::new(&basis, &gens).unwrap();
        let target = gens[0].powi(3).mul(&gens[1].powi(-2)).unwrap();
        let coords = sub.membership(&target).unwrap().expect("member");
        let rebuilt = sub.hnf_basis().apply_row(&coords);
        assert_eq!(rebuilt, target.exponents());
    }

    #[test]
    fn quotient_structure_examples() {
        let basis = DimBasis::new(["L", "T"]).unwrap();
        let c = Dimension::from_exponents(&basis, &[1, -1]).unwrap();
        let qs = Subgroup::new(&basis, &[c]).unwrap().quotient_structure();
        assert_eq!(qs.free_rank(), 1);
        assert!(qs.torsion().is_empty());

        let l2 = Dimension::from_exponents(&basis, &[2, 0]).unwrap();
        let qs = Subgroup::new(&basis, &[l2]).unwrap().quotient_structure();
        assert_eq!(qs.free_rank(), 1);
        assert_eq!(qs.torsion(), &[BigInt::from(2)]);

        let phys = DimBasis::new(["L", "T", "M", "I", "Theta"]).unwrap();
        let planck = [
            [1, -1, 0, 0, 0],
            [2, -1, 1, 0, 0],
            [3, -2, -1, 0, 0],
            [3, -2, 1, -2, 0],
            [2, -2, 1, 0, -1],
        ];
        let gens: Vec<Dimension> = planck
            .iter()
            .map(|row| Dimension::from_exponents(&phys, row).unwrap())
            .collect();
        let qs = Subgroup::new(&phys, &gens).unwrap().quotient_structure();
        assert_eq!(qs.free_rank(), 0);
        assert_eq!(qs.torsion(), &[BigInt::from(2), BigInt::from(2)]);
    }

    #[test]
    fn decompose_splits_exactly() {
        let basis = DimBasis::new(["L", "T"]).unwrap();
        let c = Dimension::from_exponents(&basis, &[1, -1]).unwrap();
        let sub = Subgroup::new(&basis, &[c]).unwrap();
        let qs = sub.quotient_structure();
        let split = qs.decompose(&[BigInt::from(1), BigInt::zero()]);
        // subgroup part + complement part reassemble the input
        let sum: Vec<BigInt> = split
            .subgroup_part
            .iter()
            .zip(&split.complement_part)
            .map(|(a, b)| a + b)
            .collect();
        assert_eq!(sum, vec![BigInt::from(1), BigInt::zero()]);
        // the subgroup part is a lattice member
        let d = Dimension::new(&basis, split.subgroup_part.clone()).unwrap();
        assert!(sub.contains(&d).unwrap());
        assert_eq!(split.quotient_coords.len(), 1);
    }

    #[test]
    fn kernel_examples() {
        let sum = IntMatrix::from_i64(&[&[1], &[1]]);
        let k = sum.kernel_basis();
        assert_eq!(k.rows(), 1);
        assert!(sum.apply_row(k.row(0)).iter().all(Zero::is_zero));
        // the kernel vector is primitive and proportional to (1, -1)
        assert_eq!(k.row(0)[0].abs(), BigInt::one());
        assert_eq!(&k.row(0)[0] + &k.row(0)[1], BigInt::zero());

        assert_eq!(IntMatrix::identity(3).kernel_basis().rows(), 0);

        let zero = IntMatrix::zeros(2, 3);
        let k = zero.kernel_basis();
        assert_eq!(k.rows(), 2);
        assert_eq!(k.det().abs(), BigInt::one());
    }

    #[test]
    fn solve_left_cases() {
        let m = IntMatrix::from_i64(&[&[1, -1], &[0, 2]]);
        // (x0, -x0 + 2 x1) == (3, 0) forces x1 = 3/2, not an integer
        let b = [BigInt::from(3), BigInt::from(0)];
        assert_eq!(m.solve_left(&b), None);
        let b = [BigInt::from(3), BigInt::from(-1)];
        let x = m.solve_left(&b).expect("solvable");
        assert_eq!(m.apply_row(&x), b);
    }

    #[test]
    fn inverse_unimodular() {
        let m = IntMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(IntMatrix::from_i64(&[&[2, 0], &[0, 1]]).inverse().is_err());
        assert!(IntMatrix::zeros(0, 0).inverse().unwrap().is_identity());
    }

    fn arb_matrix(max_dim: usize) -> impl Strategy<Value = IntMatrix> {
        (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-5i64..=5, r * c).prop_map(move |data| {
                IntMatrix::new(r, c, data.into_iter().map(BigInt::from).collect()).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn snf_invariants_random(a in arb_matrix(4)) {
            check_snf(&a);
        }

        #[test]
        fn snf_product_of_factors_is_det(a in arb_matrix(3)) {
            if a.rows() == a.cols() {
                let det = a.det().abs();
                if !det.is_zero() {
                    let product: BigInt = a.snf().invariant_factors().iter().product();
                    prop_assert_eq!(product, det);
                }
            }
        }

        #[test]
        fn hnf_preserves_lattice(a in arb_matrix(3)) {
            // every original row is a member of the HNF lattice and vice versa
            let basis = DimBasis::new((0..a.cols()).map(|i| format!("g{i}"))).unwrap();
            let sub_orig = Subgroup::from_matrix(&basis, a.clone()).unwrap();
            let sub_hnf = Subgroup::from_matrix(&basis, a.hnf()).unwrap();
            for i in 0..a.rows() {
                let d = Dimension::new(&basis, a.row_vec(i)).unwrap();
                prop_assert!(sub_hnf.contains(&d).unwrap());
            }
            for i in 0..sub_hnf.hnf_basis().rows() {
                let d = Dimension::new(&basis, sub_hnf.hnf_basis().row_vec(i)).unwrap();
                prop_assert!(sub_orig.contains(&d).unwrap());
            }
        }

        #[test]
        fn quotient_rank_arithmetic(a in arb_matrix(4)) {
            let basis = DimBasis::new((0..a.cols()).map(|i| format!("g{i}"))).unwrap();
            let sub = Subgroup::from_matrix(&basis, a).unwrap();
            let qs = sub.quotient_structure();
            prop_assert_eq!(qs.free_rank() + qs.lattice_rank(), basis.rank());
            prop_assert_eq!(qs.is_free(), sub.snf().torsion_factors().is_empty());
        }

        #[test]
        fn solve_left_roundtrip(a in arb_matrix(3), x in proptest::collection::vec(-4i64..=4, 3)) {
            let x: Vec<BigInt> = x.into_iter().take(a.rows()).map(BigInt::from).collect();
            if x.len() == a.rows() {
                let b = a.apply_row(&x);
                let solved = a.solve_left(&b).expect("constructed system is solvable");
                prop_assert_eq!(a.apply_row(&solved), b);
            }
        }
    }
}
