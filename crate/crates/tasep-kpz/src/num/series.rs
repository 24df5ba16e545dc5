//! Truncated real power series with the handful of operations needed to turn
//! parametric generating functions into exact low-order cumulants: product,
//! composition, reversion (Lagrange inversion) and differentiation.

/// Power series sum_k c[k] x^k truncated at a fixed order (c.len() - 1).
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub c: Vec<f64>,
}

impl Series {
    pub fn zero(order: usize) -> Self {
        Series {
            c: vec![0.0; order + 1],
        }
    }

    pub fn constant(v: f64, order: usize) -> Self {
        let mut s = Series::zero(order);
        s.c[0] = v;
        s
    }

    /// The identity series x.
    pub fn x(order: usize) -> Self {
        let mut s = Series::zero(order);
        if order >= 1 {
            s.c[1] = 1.0;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn add(&self, o: &Series) -> Series {
        let n = self.order().min(o.order());
        let mut s = Series::zero(n);
        for k in 0..=n {
            s.c[k] = self.c[k] + o.c[k];
        }
        s
    }

    pub fn sub(&self, o: &Series) -> Series {
        let n = self.order().min(o.order());
        let mut s = Series::zero(n);
        for k in 0..=n {
            s.c[k] = self.c[k] - o.c[k];
        }
        s
    }

    pub fn scale(&self, f: f64) -> Series {
        Series {
            c: self.c.iter().map(|v| v * f).collect(),
        }
    }

    pub fn mul(&self, o: &Series) -> Series {
        let n = self.order().min(o.order());
        let mut s = Series::zero(n);
        for i in 0..=n {
            if self.c[i] == 0.0 {
                continue;
            }
            for j in 0..=n - i {
                s.c[i + j] += self.c[i] * o.c[j];
            }
        }
        s
    }

    /// Composition self(o(x)); requires o(0) = 0.
    pub fn compose(&self, o: &Series) -> Series {
        assert!(o.c[0] == 0.0, "inner series must vanish at 0");
        let n = self.order().min(o.order());
        // Horner evaluation in the series ring.
        let mut acc = Series::constant(self.c[n], n);
        for k in (0..n).rev() {
            acc = acc.mul(o);
            acc.c[0] += self.c[k];
        }
        acc
    }

    /// Derivative d/dx.
    pub fn derivative(&self) -> Series {
        let n = self.order();
        let mut s = Series::zero(n.saturating_sub(1));
        for k in 1..=n {
            s.c[k - 1] = self.c[k] * k as f64;
        }
        s
    }

    /// Compositional inverse: returns g with self(g(x)) = x + O(x^{n+1}).
    /// Requires self.c[0] = 0 and self.c[1] != 0.
    pub fn revert(&self) -> Series {
        assert!(self.c[0] == 0.0, "series must vanish at 0");
        assert!(self.c[1] != 0.0, "series must have nonzero slope at 0");
        let n = self.order();
        let mut g = Series::zero(n);
        if n >= 1 {
            g.c[1] = 1.0 / self.c[1];
        }
        for k in 2..=n {
            // With g truncated below order k, the coefficient of x^k in
            // self(g) is linear in the unknown g.c[k] with slope self.c[1].
            let trial = self.compose(&g);
            g.c[k] = -trial.c[k] / self.c[1];
        }
        g
    }
}
