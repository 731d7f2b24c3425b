//! Coloring algebra for a diagram.
//!
//! Every crossing imposes the relation `2*over - under_a - under_b = 0` on
//! the colors of its arcs.  The integer relation matrix (rows = crossings,
//! columns = arcs, free loops as zero columns) is analysed two independent
//! ways: Smith normal form over the integers with explicit unimodular
//! certificates, and Gaussian elimination over a prime field built straight
//! from the crossing list.  Tests hold the two routes against each other.

use crate::diagram::Diagram;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    a: Vec<BigInt>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            a: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Matrix {
            rows,
            cols,
            a: entries.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.a[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.a[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = self.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = x * other.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.a.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.a.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row_i += k * row_j
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        for c in 0..self.cols {
            let add = k * self.get(j, c);
            let v = self.get(i, c) + add;
            self.set(i, c, v);
        }
    }

    /// col_i += k * col_j
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        for r in 0..self.rows {
            let add = k * self.get(r, j);
            let v = self.get(r, i) + add;
            self.set(r, i, v);
        }
    }

    fn neg_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -self.get(i, c);
            self.set(i, c, v);
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "det needs a square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.a.clone();
        let at = |m: &Vec<BigInt>, i: usize, j: usize| m[i * n + j].clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if at(&m, k, k).is_zero() {
                let swap = (k + 1..n).find(|&i| !at(&m, i, k).is_zero());
                match swap {
                    Some(i) => {
                        for j in 0..n {
                            m.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (at(&m, i, j) * at(&m, k, k) - at(&m, i, k) * at(&m, k, j)) / &prev;
                    m[i * n + j] = v;
                }
                m[i * n + k] = BigInt::zero();
            }
            prev = at(&m, k, k);
        }
        sign * at(&m, n - 1, n - 1)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Smith normal form `L * M * R = D` with `L`, `R` unimodular and `D`
/// diagonal, entries nonnegative, each dividing the next, zeros last.
#[derive(Debug, Clone)]
pub struct Snf {
    pub d: Matrix,
    pub l: Matrix,
    pub r: Matrix,
    pub diag: Vec<BigInt>,
}

impl Snf {
    /// Re-checks the certificate against the original matrix.
    pub fn verify(&self, m: &Matrix) -> bool {
        if self.l.rows != m.rows || self.l.cols != m.rows {
            return false;
        }
        if self.r.rows != m.cols || self.r.cols != m.cols {
            return false;
        }
        if self.l.mul(m).mul(&self.r) != self.d {
            return false;
        }
        for i in 0..self.d.rows {
            for j in 0..self.d.cols {
                if i != j && !self.d.get(i, j).is_zero() {
                    return false;
                }
            }
        }
        for w in self.diag.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if a.is_negative() || b.is_negative() {
                return false;
            }
            if a.is_zero() {
                if !b.is_zero() {
                    return false;
                }
            } else if !(b % a).is_zero() {
                return false;
            }
        }
        self.l.det().abs().is_one() && self.r.det().abs().is_one()
    }
}

/// Diagonalizes `m` over the integers by unimodular row and column moves.
pub fn smith_normal_form(m: &Matrix) -> Snf {
    let mut w = m.clone();
    let mut l = Matrix::identity(m.rows);
    let mut r = Matrix::identity(m.cols);
    let n = m.rows.min(m.cols);
    for t in 0..n {
        // global minimum-|entry| pivot keeps the divisibility chain in order
        let mut piv: Option<(usize, usize)> = None;
        for i in t..m.rows {
            for j in t..m.cols {
                if w.get(i, j).is_zero() {
                    continue;
                }
                if piv.map_or(true, |(pi, pj)| w.get(i, j).abs() < w.get(pi, pj).abs()) {
                    piv = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        w.swap_rows(pi, t);
        l.swap_rows(pi, t);
        w.swap_cols(pj, t);
        r.swap_cols(pj, t);
        loop {
            'clear: loop {
                for i in t + 1..m.rows {
                    if w.get(i, t).is_zero() {
                        continue;
                    }
                    let q = -(w.get(i, t) / w.get(t, t));
                    if !q.is_zero() {
                        w.add_row(i, t, &q);
                        l.add_row(i, t, &q);
                    }
                    if !w.get(i, t).is_zero() {
                        // remainder smaller than the pivot: promote it
                        w.swap_rows(i, t);
                        l.swap_rows(i, t);
                        continue 'clear;
                    }
                }
                for j in t + 1..m.cols {
                    if w.get(t, j).is_zero() {
                        continue;
                    }
                    let q = -(w.get(t, j) / w.get(t, t));
                    if !q.is_zero() {
                        w.add_col(j, t, &q);
                        r.add_col(j, t, &q);
                    }
                    if !w.get(t, j).is_zero() {
                        w.swap_cols(j, t);
                        r.swap_cols(j, t);
                        continue 'clear;
                    }
                }
                break;
            }
            // pivot must divide the rest of the submatrix before moving on
            let mut offender = None;
            'scan: for i in t + 1..m.rows {
                for j in t + 1..m.cols {
                    if !(w.get(i, j) % w.get(t, t)).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    w.add_row(t, i, &one);
                    l.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if w.get(t, t).is_negative() {
            w.neg_row(t);
            l.neg_row(t);
        }
    }
    let diag = (0..n).map(|i| w.get(i, i).clone()).collect();
    Snf { d: w, l, r, diag }
}

/// The integer relation matrix: one row per crossing, one column per arc
/// (free loops last, as zero columns).  An arc filling several slots of the
/// same crossing accumulates, so a kink's row is identically zero.
pub fn coloring_matrix(d: &Diagram) -> Matrix {
    let mut m = Matrix::zero(d.crossing_count(), d.arc_count());
    for i in 0..d.crossing_count() {
        let v = d.crossing_view(i);
        let mut bump = |col: usize, delta: i64| {
            let cur = m.get(i, col) + BigInt::from(delta);
            m.set(i, col, cur);
        };
        bump(v.over.0 as usize, 2);
        bump(v.under[0].0 as usize, -1);
        bump(v.under[1].0 as usize, -1);
    }
    m
}

/// Multiset of diagonal entries other than 0 and 1, plus the corank.
/// Both are invariant under Reidemeister rewrites of the diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfSignature {
    pub torsion: Vec<BigInt>,
    pub corank: usize,
}

pub fn snf_signature(d: &Diagram) -> SnfSignature {
    let m = coloring_matrix(d);
    let snf = smith_normal_form(&m);
    let rank = snf.diag.iter().filter(|x| !x.is_zero()).count();
    let mut torsion: Vec<BigInt> = snf
        .diag
        .iter()
        .filter(|x| !x.is_zero() && !x.is_one())
        .cloned()
        .collect();
    torsion.sort();
    SnfSignature {
        torsion,
        corank: m.cols - rank,
    }
}

/// Knot determinant: the product of nonzero diagonal entries when the corank
/// is exactly one (always the case for a knot), and zero otherwise.
pub fn determinant(d: &Diagram) -> BigInt {
    let m = coloring_matrix(d);
    let snf = smith_normal_form(&m);
    let rank = snf.diag.iter().filter(|x| !x.is_zero()).count();
    if m.cols - rank == 1 {
        snf.diag.iter().filter(|x| !x.is_zero()).product()
    } else {
        BigInt::zero()
    }
}

// --- the independent mod-p route: built from the crossings, no bigints ---

fn mod_rows(d: &Diagram, p: u64) -> Vec<Vec<u64>> {
    let cols = d.arc_count();
    (0..d.crossing_count())
        .map(|i| {
            let v = d.crossing_view(i);
            let mut row = vec![0u64; cols];
            row[v.over.0 as usize] = (row[v.over.0 as usize] + 2) % p;
            for u in v.under {
                row[u.0 as usize] = (row[u.0 as usize] + p - 1) % p;
            }
            row
        })
        .collect()
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref_mod(m: &mut [Vec<u64>], cols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = inv_mod(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + (p - f) * m[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    pivots
}

/// Rank of the relation matrix over F_p, via Gaussian elimination only.
pub fn rank_mod_p(d: &Diagram, p: u64) -> usize {
    let mut m = mod_rows(d, p);
    rref_mod(&mut m, d.arc_count(), p).len()
}

/// Basis of the coloring space over F_p, in reduced echelon form except that
/// the first vector is the all-ones (monochromatic) coloring.
#[derive(Debug, Clone, Serialize)]
pub struct ColorBasis {
    pub p: u16,
    pub dim: usize,
    pub vectors: Vec<Vec<u16>>,
}

pub fn coloring_basis(d: &Diagram, p: u16) -> ColorBasis {
    let pq = p as u64;
    let cols = d.arc_count();
    let mut m = mod_rows(d, pq);
    let pivots = rref_mod(&mut m, cols, pq);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut vectors: Vec<Vec<u16>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![0u16; cols];
            v[f] = 1;
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = ((pq - m[k][f]) % pq) as u16;
            }
            v
        })
        .collect();
    // the all-ones vector is the sum of the echelon basis; make it explicit
    assert!(!vectors.is_empty(), "constant colorings always survive");
    vectors[0] = vec![1u16; cols];
    ColorBasis {
        p,
        dim: free.len(),
        vectors,
    }
}

pub fn coloring_count(d: &Diagram, p: u16) -> BigInt {
    BigInt::from(p).pow(coloring_basis(d, p).dim as u32)
}

/// Checks every crossing relation for an explicit arc-color assignment.
pub fn is_valid_coloring(d: &Diagram, p: u16, colors: &[u16]) -> bool {
    if colors.len() != d.arc_count() || colors.iter().any(|&c| c >= p) {
        return false;
    }
    let pq = p as u32;
    (0..d.crossing_count()).all(|i| {
        let v = d.crossing_view(i);
        let over = colors[v.over.0 as usize] as u32;
        let ua = colors[v.under[0].0 as usize] as u32;
        let ub = colors[v.under[1].0 as usize] as u32;
        (2 * over + 2 * pq - ua - ub) % pq == 0
    })
}

/// Brute-force count of valid assignments, for holding the linear algebra to
/// account on small diagrams.  Walks all p^arcs vectors with an odometer.
pub fn count_colorings_exhaustive(d: &Diagram, p: u16) -> u64 {
    let cols = d.arc_count();
    let rels: Vec<(usize, usize, usize)> = (0..d.crossing_count())
        .map(|i| {
            let v = d.crossing_view(i);
            (
                v.over.0 as usize,
                v.under[0].0 as usize,
                v.under[1].0 as usize,
            )
        })
        .collect();
    let pq = p as u32;
    let mut colors = vec![0u16; cols];
    let mut count = 0u64;
    loop {
        let ok = rels.iter().all(|&(o, a, b)| {
            (2 * colors[o] as u32 + 2 * pq - colors[a] as u32 - colors[b] as u32) % pq == 0
        });
        if ok {
            count += 1;
        }
        // odometer
        let mut i = 0;
        loop {
            if i == cols {
                return count;
            }
            colors[i] += 1;
            if colors[i] < p {
                break;
            }
            colors[i] = 0;
            i += 1;
        }
    }
}

/// An explicit coloring of a diagram's arcs modulo p.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Coloring {
    pub p: u16,
    pub colors: Vec<u16>,
}

impl Coloring {
    pub fn new(p: u16, colors: Vec<u16>) -> Self {
        Coloring { p, colors }
    }
    pub fn palette(&self) -> BTreeSet<u16> {
        self.colors.iter().copied().collect()
    }
    pub fn is_constant(&self) -> bool {
        self.palette().len() <= 1
    }
    pub fn is_valid(&self, d: &Diagram) -> bool {
        is_valid_coloring(d, self.p, &self.colors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";
    const FIG8: &str = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)";

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn trefoil_matrix_rows() {
        let d = Diagram::parse(TREFOIL).unwrap();
        let m = coloring_matrix(&d);
        assert_eq!((m.rows, m.cols), (3, 3));
        for i in 0..3 {
            let mut row: Vec<i64> = (0..3)
                .map(|j| i64::try_from(m.get(i, j).clone()).unwrap())
                .collect();
            assert_eq!(row.iter().sum::<i64>(), 0);
            row.sort_unstable();
            assert_eq!(row, vec![-1, -1, 2]);
        }
    }

    #[test]
    fn kink_matrix_is_single_zero() {
        let d = Diagram::parse("X(1,1,2,2)").unwrap();
        let m = coloring_matrix(&d);
        assert_eq!((m.rows, m.cols), (1, 1));
        assert!(m.get(0, 0).is_zero());
    }

    #[test]
    fn circle_matrix_is_zero_by_one() {
        let d = Diagram::parse("O").unwrap();
        let m = coloring_matrix(&d);
        assert_eq!((m.rows, m.cols), (0, 1));
    }

    #[test]
    fn snf_certificates_hold() {
        let samples: Vec<Matrix> = vec![
            coloring_matrix(&Diagram::parse(TREFOIL).unwrap()),
            coloring_matrix(&Diagram::parse(FIG8).unwrap()),
            coloring_matrix(&Diagram::parse("X(1,1,2,2)").unwrap()),
            coloring_matrix(&Diagram::parse("O").unwrap()),
            Matrix::from_i64(2, 3, &[2, 4, 4, -6, 6, 12]),
            Matrix::from_i64(3, 3, &[0, 0, 0, 0, 0, 0, 0, 0, 0]),
            Matrix::from_i64(2, 2, &[3, 5, 7, 11]),
        ];
        for m in &samples {
            let snf = smith_normal_form(m);
            assert!(snf.verify(m), "certificate failed for\n{m}");
        }
    }

    #[test]
    fn snf_diagonals() {
        let t = smith_normal_form(&coloring_matrix(&Diagram::parse(TREFOIL).unwrap()));
        assert_eq!(t.diag, vec![big(1), big(3), big(0)]);
        let f = smith_normal_form(&coloring_matrix(&Diagram::parse(FIG8).unwrap()));
        assert_eq!(f.diag, vec![big(1), big(1), big(5), big(0)]);
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&Diagram::parse(TREFOIL).unwrap()), big(3));
        assert_eq!(determinant(&Diagram::parse(FIG8).unwrap()), big(5));
        assert_eq!(determinant(&Diagram::parse("X(1,1,2,2)").unwrap()), big(1));
        assert_eq!(determinant(&Diagram::parse("O").unwrap()), big(1));
        // links with split circles or extra kernel rank report zero
        assert_eq!(determinant(&Diagram::parse("X(1,1,2,2) O").unwrap()), big(0));
        let hopf = Diagram::parse("X(1,4,2,3) X(3,2,4,1)").unwrap();
        assert_eq!(determinant(&hopf), big(2));
    }

    #[test]
    fn bareiss_det_agrees_with_known_values() {
        assert_eq!(Matrix::from_i64(2, 2, &[3, 5, 7, 11]).det(), big(-2));
        assert_eq!(
            Matrix::from_i64(3, 3, &[2, 0, 1, 1, 1, 0, 0, 3, 1]).det(),
            big(5)
        );
        assert_eq!(Matrix::identity(4).det(), big(1));
        assert_eq!(Matrix::zero(3, 3).det(), big(0));
        assert_eq!(Matrix::zero(0, 0).det(), big(1));
    }

    #[test]
    fn rank_oracle_matches_snf_reduction() {
        for pd in [TREFOIL, FIG8, "X(1,1,2,2)", "O", "X(1,4,2,3) X(3,2,4,1)"] {
            let d = Diagram::parse(pd).unwrap();
            let snf = smith_normal_form(&coloring_matrix(&d));
            for p in [2u64, 3, 5, 7, 11, 13] {
                let expect = snf
                    .diag
                    .iter()
                    .filter(|x| !(*x % BigInt::from(p)).is_zero())
                    .count();
                assert_eq!(rank_mod_p(&d, p), expect, "{pd} mod {p}");
            }
        }
    }

    #[test]
    fn kernel_dimensions() {
        let t = Diagram::parse(TREFOIL).unwrap();
        assert_eq!(coloring_basis(&t, 3).dim, 2);
        assert_eq!(coloring_basis(&t, 5).dim, 1);
        assert_eq!(coloring_basis(&t, 13).dim, 1);
        let f = Diagram::parse(FIG8).unwrap();
        assert_eq!(coloring_basis(&f, 5).dim, 2);
        assert_eq!(coloring_basis(&f, 3).dim, 1);
    }

    #[test]
    fn basis_vectors_are_colorings_and_start_monochromatic() {
        for pd in [TREFOIL, FIG8, "X(1,1,2,2)", "O"] {
            let d = Diagram::parse(pd).unwrap();
            for p in [3u16, 5, 13] {
                let b = coloring_basis(&d, p);
                assert_eq!(b.vectors.len(), b.dim);
                assert_eq!(b.vectors[0], vec![1; d.arc_count()], "{pd}");
                for v in &b.vectors {
                    assert!(is_valid_coloring(&d, p, v), "{pd} mod {p}: {v:?}");
                }
            }
        }
    }

    #[test]
    fn counts_match_exhaustive_enumeration() {
        let t = Diagram::parse(TREFOIL).unwrap();
        assert_eq!(count_colorings_exhaustive(&t, 3), 9);
        assert_eq!(coloring_count(&t, 3), big(9));
        assert_eq!(count_colorings_exhaustive(&t, 5), 5);
        assert_eq!(coloring_count(&t, 5), big(5));
        let f = Diagram::parse(FIG8).unwrap();
        assert_eq!(count_colorings_exhaustive(&f, 5), 25);
        assert_eq!(coloring_count(&f, 5), big(25));
        assert_eq!(count_colorings_exhaustive(&f, 7), 7);
    }

    #[test]
    fn trefoil_rainbow_coloring_mod_3() {
        let d = Diagram::parse(TREFOIL).unwrap();
        let c = Coloring::new(3, vec![0, 1, 2]);
        assert!(c.is_valid(&d));
        assert!(!c.is_constant());
        assert_eq!(c.palette().len(), 3);
        assert!(!Coloring::new(3, vec![0, 1, 1]).is_valid(&d));
    }

    #[test]
    fn signature_fields() {
        let s = snf_signature(&Diagram::parse(TREFOIL).unwrap());
        assert_eq!(s.torsion, vec![big(3)]);
        assert_eq!(s.corank, 1);
        let s = snf_signature(&Diagram::parse("X(1,1,2,2) O").unwrap());
        assert_eq!(s.torsion, Vec::<BigInt>::new());
        assert_eq!(s.corank, 2);
    }
}
