//! Banded LU with partial pivoting.

use num_complex::Complex64 as C64;

/// Square matrix with kl sub- and ku super-diagonals, with room for the fill-in of pivoting.
#[derive(Clone, Debug)]
pub(crate) struct Banded {
    n: usize,
    kl: usize,
    ku: usize,
    w: usize,
    a: Vec<C64>,
}

impl Banded {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let w = 2 * kl + ku + 1;
        Banded { n, kl, ku, w, a: vec![C64::new(0.0, 0.0); n * w] }
    }

    fn at(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.kl + self.ku);
        i * self.w + j + self.kl - i
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.a[self.at(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        assert!(j + self.kl >= i && j <= i + self.ku, "({i}, {j}) outside the band");
        let k = self.at(i, j);
        self.a[k] = v;
    }

    /// y = A x using the original band (call before factoring).
    pub fn mul(&self, x: &[C64], y: &mut [C64]) {
        for i in 0..self.n {
            let lo = i.saturating_sub(self.kl);
            let hi = (i + self.ku).min(self.n - 1);
            y[i] = (lo..=hi).map(|j| self.get(i, j) * x[j]).sum();
        }
    }

    pub fn factor(mut self) -> Option<BandLu> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let mut piv = vec![0; n];
        let mut l = vec![C64::new(0.0, 0.0); n * kl];
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let p = (k..=last).max_by(|&i, &j| self.get(i, k).norm().total_cmp(&self.get(j, k).norm()))?;
            let pivot = self.get(p, k);
            if pivot.norm() == 0.0 || !pivot.is_finite() {
                return None;
            }
            piv[k] = p;
            let right = (k + kl + ku).min(n - 1);
            if p != k {
                for j in k..=right {
                    let (ik, ip) = (self.at(k, j), self.at(p, j));
                    self.a.swap(ik, ip);
                }
            }
            let d = self.get(k, k);
            for i in k + 1..=last {
                let m = self.get(i, k) / d;
                l[k * kl + (i - k - 1)] = m;
                if m == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in k + 1..=right {
                    let u = self.get(k, j);
                    let idx = self.at(i, j);
                    self.a[idx] -= m * u;
                }
            }
        }
        Some(BandLu { m: self, l, piv })
    }
}

#[derive(Clone, Debug)]
pub(crate) struct BandLu {
    m: Banded,
    l: Vec<C64>,
    piv: Vec<usize>,
}

impl BandLu {
    /// Overwrites b with A⁻¹b.
    pub fn solve(&self, b: &mut [C64]) {
        let (n, kl, ku) = (self.m.n, self.m.kl, self.m.ku);
        for k in 0..n {
            b.swap(k, self.piv[k]);
            let bk = b[k];
            for r in 0..kl.min(n - 1 - k) {
                b[k + 1 + r] -= self.l[k * kl + r] * bk;
            }
        }
        for k in (0..n).rev() {
            let right = (k + kl + ku).min(n - 1);
            let mut s = b[k];
            for j in k + 1..=right {
                s -= self.m.get(k, j) * b[j];
            }
            b[k] = s / self.m.get(k, k);
        }
    }
}
