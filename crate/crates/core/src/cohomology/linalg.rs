//! Linear algebra over the local rings `Z/pᵏ`.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Local {
    pub p: u64,
    pub k: u32,
    pub q: u64,
}

impl Local {
    pub fn new(p: u64, k: u32) -> Self {
        Local { p, k, q: p.pow(k) }
    }

    /// `k` for zero.
    pub fn val(&self, mut x: u64) -> u32 {
        x %= self.q;
        if x == 0 {
            return self.k;
        }
        let mut v = 0;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    pub fn inv_unit(&self, u: u64) -> u64 {
        // extended Euclid on (u, q)
        let (mut a, mut b, mut x0, mut x1) = (u as i128, self.q as i128, 1i128, 0i128);
        while b != 0 {
            let t = a / b;
            (a, b) = (b, a - t * b);
            (x0, x1) = (x1, x0 - t * x1);
        }
        debug_assert_eq!(a, 1);
        x0.rem_euclid(self.q as i128) as u64
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.q as u128) as u64
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.q - b) % self.q
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.q
    }
}

/// Dense row-major matrix over `Z/pᵏ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub d: Vec<u64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            d: vec![0; rows * cols],
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.d[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.d[i * self.cols + j] = v;
    }

    pub fn from_cols(rows: usize, cols: &[Vec<u64>]) -> Self {
        let mut m = Mat::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    /// `[self | other]`.
    pub fn hcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut m = Mat::zeros(self.rows, cols);
        for i in 0..self.rows {
            m.d[i * cols..i * cols + self.cols]
                .copy_from_slice(&self.d[i * self.cols..(i + 1) * self.cols]);
            m.d[i * cols + self.cols..(i + 1) * cols]
                .copy_from_slice(&other.d[i * other.cols..(i + 1) * other.cols]);
        }
        m
    }

    pub fn mul_vec(&self, ring: &Local, x: &[u64]) -> Vec<u64> {
        (0..self.rows)
            .map(|i| {
                let row = &self.d[i * self.cols..(i + 1) * self.cols];
                row.iter()
                    .zip(x)
                    .fold(0u64, |acc, (&a, &b)| ring.add(acc, ring.mul(a, b)))
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Swap(usize, usize),
    Scale(usize, u64),
    /// `x_i -= λ x_t`
    AddMul(usize, usize, u64),
}

/// `P·M·C = D` with `D` diagonal, entries `p^{vals[i]}` (value `k` is zero).
/// Row and column operations are recorded rather than materialized.
#[derive(Clone, Debug)]
pub(crate) struct Smith {
    pub ring: Local,
    pub rows: usize,
    pub cols: usize,
    pub vals: Vec<u32>,
    row_ops: Vec<Op>,
    col_ops: Vec<Op>,
}

impl Smith {
    pub fn new(ring: Local, mut m: Mat) -> Self {
        let (r, c) = (m.rows, m.cols);
        let mut row_ops = Vec::new();
        let mut col_ops = Vec::new();
        let mut vals = Vec::new();
        for t in 0..r.min(c) {
            // pivot of least valuation
            let mut best: Option<(u32, usize, usize)> = None;
            'search: for i in t..r {
                for j in t..c {
                    let x = m.at(i, j);
                    if x != 0 {
                        let v = ring.val(x);
                        if best.is_none_or(|(bv, _, _)| v < bv) {
                            best = Some((v, i, j));
                            if v == 0 {
                                break 'search;
                            }
                        }
                    }
                }
            }
            let Some((v, pi, pj)) = best else { break };
            if pi != t {
                for j in 0..c {
                    m.d.swap(pi * c + j, t * c + j);
                }
                row_ops.push(Op::Swap(pi, t));
            }
            if pj != t {
                for i in t..r {
                    m.d.swap(i * c + pj, i * c + t);
                }
                col_ops.push(Op::Swap(pj, t));
            }
            let pv = ring.p.pow(v);
            let unit = m.at(t, t) / pv;
            if unit != 1 {
                let ui = ring.inv_unit(unit % ring.q);
                for j in t..c {
                    let x = m.at(t, j);
                    m.set(t, j, ring.mul(x, ui));
                }
                row_ops.push(Op::Scale(t, ui));
            }
            let (head, tail) = m.d.split_at_mut((t + 1) * c);
            let pivot_row = &head[t * c..];
            for i in t + 1..r {
                let row = &mut tail[(i - t - 1) * c..(i - t) * c];
                let x = row[t];
                if x == 0 {
                    continue;
                }
                let lam = x / pv;
                for j in t..c {
                    if pivot_row[j] != 0 {
                        row[j] = ring.sub(row[j], ring.mul(lam, pivot_row[j]));
                    }
                }
                row_ops.push(Op::AddMul(i, t, lam));
            }
            for j in t + 1..c {
                let x = m.at(t, j);
                if x != 0 {
                    col_ops.push(Op::AddMul(t, j, x / pv));
                    m.set(t, j, 0);
                }
            }
            vals.push(v);
        }
        Smith {
            ring,
            rows: r,
            cols: c,
            vals,
            row_ops,
            col_ops,
        }
    }

    /// Valuation of the `i`-th diagonal entry, `k` past the rank.
    pub fn val(&self, i: usize) -> u32 {
        self.vals.get(i).copied().unwrap_or(self.ring.k)
    }

    fn apply(ring: &Local, op: Op, x: &mut [u64], inverse: bool) {
        match op {
            Op::Swap(i, j) => x.swap(i, j),
            Op::Scale(i, u) => x[i] = ring.mul(x[i], if inverse { ring.inv_unit(u) } else { u }),
            Op::AddMul(i, t, l) => {
                let d = ring.mul(l, x[t]);
                x[i] = if inverse {
                    ring.add(x[i], d)
                } else {
                    ring.sub(x[i], d)
                }
            }
        }
    }

    pub fn p_apply(&self, x: &mut [u64]) {
        for &op in &self.row_ops {
            Self::apply(&self.ring, op, x, false);
        }
    }

    pub fn p_inv_apply(&self, x: &mut [u64]) {
        for &op in self.row_ops.iter().rev() {
            Self::apply(&self.ring, op, x, true);
        }
    }

    /// `C·z`. Column op `col_j -= λ col_t` acts on vectors by `z_t -= λ z_j`.
    pub fn c_apply(&self, z: &mut [u64]) {
        for &op in self.col_ops.iter().rev() {
            Self::apply(&self.ring, op, z, false);
        }
    }

    /// Generators of `{y : M y = 0}`.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        for i in 0..self.cols {
            let v = self.val(i);
            if v == 0 {
                continue;
            }
            let mut z = vec![0u64; self.cols];
            z[i] = self.ring.p.pow(self.ring.k - v) % self.ring.q;
            self.c_apply(&mut z);
            if z.iter().any(|&x| x != 0) {
                out.push(z);
            }
        }
        out
    }

    /// Minimal generators of the column span: `P⁻¹ eᵢ · dᵢ`.
    pub fn image(&self) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        for i in 0..self.vals.len() {
            let mut y = vec![0u64; self.rows];
            y[i] = self.ring.p.pow(self.vals[i]);
            self.p_inv_apply(&mut y);
            out.push(y);
        }
        out
    }

    /// Some `y` with `M y = x`.
    pub fn solve(&self, x: &[u64]) -> Option<Vec<u64>> {
        let mut px = x.to_vec();
        self.p_apply(&mut px);
        let mut z = vec![0u64; self.cols];
        for (i, &b) in px.iter().enumerate() {
            let v = self.val(i);
            if b == 0 {
                continue;
            }
            if v == self.ring.k || self.ring.val(b) < v {
                return None;
            }
            z[i] = b / self.ring.p.pow(v);
        }
        self.c_apply(&mut z);
        Some(z)
    }
}
