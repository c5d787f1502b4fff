//! Smith normal form over ℤ and the lattice bookkeeping built on it.
//!
//! The SNF is the substrate for every kernel/cokernel/solve over ℤ/pᵏ:
//! a module map lifts to an integer matrix and the normal form of the
//! relevant stacked matrix answers the question exactly.

/// Dense integer matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i128>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i128>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c));
        IntMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(l, j)];
                }
            }
        }
        out
    }

    pub fn col(&self, j: usize) -> Vec<i128> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
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

    /// row[a] += c * row[b]
    fn add_row(&mut self, a: usize, b: usize, c: i128) {
        for j in 0..self.cols {
            let v = self[(b, j)];
            self[(a, j)] += c * v;
        }
    }

    /// col[a] += c * col[b]
    fn add_col(&mut self, a: usize, b: usize, c: i128) {
        for i in 0..self.rows {
            let v = self[(i, b)];
            self[(i, a)] += c * v;
        }
    }

    fn scale_row(&mut self, a: usize, c: i128) {
        for j in 0..self.cols {
            self[(a, j)] *= c;
        }
    }

    fn scale_col(&mut self, a: usize, c: i128) {
        for i in 0..self.rows {
            self[(i, a)] *= c;
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination. Used by tests to
    /// confirm the transforms are unimodular.
    pub fn det(&self) -> i128 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut m = self.clone();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for t in 0..n - 1 {
            if m[(t, t)] == 0 {
                let Some(pivot) = (t + 1..n).find(|&i| m[(i, t)] != 0) else {
                    return 0;
                };
                m.swap_rows(t, pivot);
                sign = -sign;
            }
            for i in t + 1..n {
                for j in t + 1..n {
                    m[(i, j)] = (m[(i, j)] * m[(t, t)] - m[(i, t)] * m[(t, j)]) / prev;
                }
                m[(i, t)] = 0;
            }
            prev = m[(t, t)];
        }
        sign * m[(n - 1, n - 1)]
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = i128;
    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        &mut self.data[i * self.cols + j]
    }
}

/// U · A · V = D with U, V unimodular and D diagonal, d₁ | d₂ | ⋯, dᵢ ≥ 0.
#[derive(Debug, Clone)]
pub struct Snf {
    pub d: IntMat,
    pub u: IntMat,
    pub u_inv: IntMat,
    pub v: IntMat,
    pub v_inv: IntMat,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<i128> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d[(i, i)])
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|&&d| d != 0).count()
    }
}

/// Smith normal form with all four transforms tracked.
pub fn smith_normal_form(a: &IntMat) -> Snf {
    let mut d = a.clone();
    let (r, c) = (d.rows, d.cols);
    let mut u = IntMat::identity(r);
    let mut u_inv = IntMat::identity(r);
    let mut v = IntMat::identity(c);
    let mut v_inv = IntMat::identity(c);

    // Elementary operations applied to D are mirrored on the transforms:
    // a row op E on D gives U <- E.U and U_inv <- U_inv.E^{-1};
    // a column op F gives V <- V.F and V_inv <- F^{-1}.V_inv.
    let mut t = 0;
    while t < r.min(c) {
        // Find the entry of least nonzero magnitude in the remaining block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                let val = d[(i, j)].abs();
                if val != 0 && pivot.map_or(true, |(pi, pj)| val < d[(pi, pj)].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        u_inv.swap_cols(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        v_inv.swap_rows(t, pj);

        let mut clean = false;
        while !clean {
            clean = true;
            for i in t + 1..r {
                let q = d[(i, t)].div_euclid(d[(t, t)]);
                if q != 0 {
                    d.add_row(i, t, -q);
                    u.add_row(i, t, -q);
                    u_inv.add_col(t, i, q);
                }
                if d[(i, t)] != 0 {
                    // remainder smaller than pivot: swap up and restart
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    u_inv.swap_cols(t, i);
                    clean = false;
                }
            }
            for j in t + 1..c {
                let q = d[(t, j)].div_euclid(d[(t, t)]);
                if q != 0 {
                    d.add_col(j, t, -q);
                    v.add_col(j, t, -q);
                    v_inv.add_row(t, j, q);
                }
                if d[(t, j)] != 0 {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    v_inv.swap_rows(t, j);
                    clean = false;
                }
            }
        }

        // Divisibility fix: pivot must divide every later entry.
        let mut fixed = true;
        'outer: for i in t + 1..r {
            for j in t + 1..c {
                if d[(i, j)] % d[(t, t)] != 0 {
                    d.add_row(t, i, 1);
                    u.add_row(t, i, 1);
                    u_inv.add_col(i, t, -1);
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if !fixed {
            continue; // redo position t
        }
        if d[(t, t)] < 0 {
            d.scale_row(t, -1);
            u.scale_row(t, -1);
            u_inv.scale_col(t, -1);
        }
        t += 1;
    }
    Snf {
        d,
        u,
        u_inv,
        v,
        v_inv,
    }
}

/// One integer solution of A·x = b, if any.
pub fn solve_integer(a: &IntMat, b: &[i128]) -> Option<Vec<i128>> {
    assert_eq!(a.rows, b.len());
    let snf = smith_normal_form(a);
    let ub: Vec<i128> = (0..a.rows)
        .map(|i| (0..a.rows).map(|l| snf.u[(i, l)] * b[l]).sum())
        .collect();
    let diag = snf.diagonal();
    let mut y = vec![0i128; a.cols];
    for i in 0..a.rows {
        let d = if i < diag.len() { diag[i] } else { 0 };
        if d == 0 {
            if ub[i] != 0 {
                return None;
            }
        } else {
            if ub[i] % d != 0 {
                return None;
            }
            y[i] = ub[i] / d;
        }
    }
    let x: Vec<i128> = (0..a.cols)
        .map(|i| (0..a.cols).map(|l| snf.v[(i, l)] * y[l]).sum())
        .collect();
    Some(x)
}

/// Basis of the integer kernel of A (columns of V past the rank).
pub fn kernel_basis(a: &IntMat) -> Vec<Vec<i128>> {
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    let rank = diag.iter().filter(|&&d| d != 0).count();
    (rank..a.cols).map(|j| snf.v.col(j)).collect()
}

/// A basis matrix (n × rank) of the lattice spanned by the columns of G.
pub fn lattice_basis(g: &IntMat) -> IntMat {
    let snf = smith_normal_form(g);
    let diag = snf.diagonal();
    let rank = diag.iter().filter(|&&d| d != 0).count();
    // G Z^s = U^{-1} D Z^s, so the nonzero columns of U^{-1} D form a basis.
    let mut b = IntMat::zero(g.rows, rank);
    for j in 0..rank {
        for i in 0..g.rows {
            b[(i, j)] = snf.u_inv[(i, j)] * diag[j];
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }

    /// Oracle for the 2x2 reference case: exhaustive row/column reduction is
    /// summarized by d1 = gcd of all entries and d1·d2 = |det|.
    #[test]
    fn snf_reference_2x2() {
        let a = IntMat::from_rows(vec![vec![2, 4], vec![6, 8]]);
        let g = a.data.iter().fold(0, |acc, &x| gcd(acc, x));
        assert_eq!(g, 2);
        assert_eq!(a.det().abs(), 8);

        let snf = smith_normal_form(&a);
        assert_eq!(snf.diagonal(), vec![2, 4]);
        assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.d);
        assert_eq!(snf.u.det().abs(), 1);
        assert_eq!(snf.v.det().abs(), 1);
    }

    #[test]
    fn snf_identity_and_zero() {
        let id = IntMat::identity(3);
        assert_eq!(smith_normal_form(&id).diagonal(), vec![1, 1, 1]);
        let z = IntMat::from_rows(vec![vec![0]]);
        assert_eq!(smith_normal_form(&z).diagonal(), vec![0]);
    }

    #[test]
    fn solve_and_kernel() {
        let a = IntMat::from_rows(vec![vec![2, 0], vec![0, 3]]);
        assert_eq!(solve_integer(&a, &[4, 9]), Some(vec![2, 3]));
        assert_eq!(solve_integer(&a, &[1, 0]), None);

        let b = IntMat::from_rows(vec![vec![1, 2, 3]]);
        let ker = kernel_basis(&b);
        assert_eq!(ker.len(), 2);
        for v in ker {
            assert_eq!(v[0] + 2 * v[1] + 3 * v[2], 0);
        }
    }

    proptest! {
        /// UAV = D exactly, D diagonal with successive divisibility, and the
        /// tracked inverses really invert.
        #[test]
        fn snf_round_trip(rows in 1usize..5, cols in 1usize..5, seed in any::<u64>()) {
            let mut state = seed;
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((state >> 33) as i128 % 11) - 5
            };
            let data: Vec<i128> = (0..rows * cols).map(|_| next()).collect();
            let a = IntMat { rows, cols, data };
            let snf = smith_normal_form(&a);
            prop_assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.d.clone());
            prop_assert_eq!(snf.u.mul(&snf.u_inv), IntMat::identity(rows));
            prop_assert_eq!(snf.v.mul(&snf.v_inv), IntMat::identity(cols));
            let diag = snf.diagonal();
            for w in diag.windows(2) {
                prop_assert!(w[0] >= 0);
                if w[0] != 0 {
                    prop_assert_eq!(w[1] % w[0], 0);
                } else {
                    prop_assert_eq!(w[1], 0);
                }
            }
            for i in 0..snf.d.rows {
                for j in 0..snf.d.cols {
                    if i != j {
                        prop_assert_eq!(snf.d[(i, j)], 0);
                    }
                }
            }
        }
    }
}
