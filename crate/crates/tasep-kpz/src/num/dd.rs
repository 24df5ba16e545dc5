//! Double-double arithmetic (roughly 31 significant digits).
//!
//! The height contour integrals sum integrands whose modulus can exceed the
//! final result by many orders of magnitude; the cancellation is exact in
//! exact arithmetic but leaves a noise floor of |integrand| times the working
//! precision.  Carrying the per-node values in double-double form keeps the
//! oscillatory cancellation coherent far beyond what f64 allows.  Only the
//! basic operations needed there are implemented: add, mul, div, exp, log,
//! sin/cos and atan2, plus a complex wrapper.

use crate::num::C64;

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    /// log 2 to double-double accuracy.
    pub const LN2: Dd = Dd {
        hi: std::f64::consts::LN_2,
        lo: 2.3190468138462996e-17,
    };
    /// pi to double-double accuracy.
    pub const PI: Dd = Dd {
        hi: std::f64::consts::PI,
        lo: 1.2246467991473532e-16,
    };
    /// 2 pi to double-double accuracy.
    pub const TWO_PI: Dd = Dd {
        hi: 6.283185307179586,
        lo: 2.4492935982947064e-16,
    };
    /// pi/2 to double-double accuracy.
    pub const FRAC_PI_2: Dd = Dd {
        hi: std::f64::consts::FRAC_PI_2,
        lo: 6.123233995736766e-17,
    };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, o: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn mul(self, o: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, o.hi);
        let p2 = p2 + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p1, p2 + self.lo * b);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul_f64(q1));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul_f64(q2));
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::from_f64(q3))
    }

    #[inline]
    pub fn recip(self) -> Dd {
        Dd::ONE.div(self)
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    fn ldexp(self, k: i32) -> Dd {
        // Split the scaling to stay clear of overflow for large |k|.
        let k1 = k / 2;
        let k2 = k - k1;
        let m1 = 2f64.powi(k1);
        let m2 = 2f64.powi(k2);
        Dd {
            hi: self.hi * m1 * m2,
            lo: self.lo * m1 * m2,
        }
    }

    /// exp to double-double accuracy.
    pub fn exp(self) -> Dd {
        if self.hi < -709.0 {
            return Dd::ZERO;
        }
        if self.hi > 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        let k = (self.hi / std::f64::consts::LN_2).round();
        let r = self.sub(Dd::LN2.mul_f64(k));
        // |r| <= ln2/2; Taylor series converges to 1e-35 within ~26 terms.
        let mut term = r;
        let mut sum = Dd::ONE.add(r);
        for n in 2..=30u32 {
            // Divide by n in double-double; multiplying by a rounded 1/n
            // would inject f64-level error into every term.
            term = term.mul(r).div(Dd::from_f64(n as f64));
            sum = sum.add(term);
            if term.hi.abs() < 1e-35 * sum.hi.abs() {
                break;
            }
        }
        sum.ldexp(k as i32)
    }

    /// Natural log of a positive value, via one Newton correction of the f64
    /// logarithm.
    pub fn ln(self) -> Dd {
        assert!(self.hi > 0.0, "ln of non-positive double-double");
        let y0 = self.hi.ln();
        // delta = x e^{-y0} - 1 is ~1e-16; ln(1+delta) = delta - delta^2/2 ...
        let delta = self.mul(Dd::from_f64(-y0).exp()).sub(Dd::ONE);
        let corr = delta.sub(delta.mul(delta).mul_f64(0.5));
        Dd::from_f64(y0).add(corr)
    }

    /// Simultaneous sin and cos to double-double accuracy.
    pub fn sin_cos(self) -> (Dd, Dd) {
        // Reduce modulo 2 pi, then modulo pi/2.
        let k = (self.hi / (2.0 * std::f64::consts::PI)).round();
        let r = self.sub(Dd::TWO_PI.mul_f64(k));
        let q = (r.hi / std::f64::consts::FRAC_PI_2).round();
        let x = r.sub(Dd::FRAC_PI_2.mul_f64(q));
        // |x| <= pi/4: Taylor series.
        let x2 = x.mul(x);
        let mut s = x;
        let mut term = x;
        let mut n = 1u32;
        loop {
            let den = -((2 * n) as f64 * (2 * n + 1) as f64);
            term = term.mul(x2).div(Dd::from_f64(den));
            s = s.add(term);
            n += 1;
            if term.hi.abs() < 1e-35 || n > 20 {
                break;
            }
        }
        let mut c = Dd::ONE;
        let mut term = Dd::ONE;
        let mut n = 1u32;
        loop {
            let den = -((2 * n - 1) as f64 * (2 * n) as f64);
            term = term.mul(x2).div(Dd::from_f64(den));
            c = c.add(term);
            n += 1;
            if term.hi.abs() < 1e-35 || n > 20 {
                break;
            }
        }
        match (q as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, s.neg()),
            2 => (s.neg(), c.neg()),
            _ => (c.neg(), s),
        }
    }

    /// Four-quadrant arctangent, via one correction of the f64 result.
    pub fn atan2(y: Dd, x: Dd) -> Dd {
        let t0 = y.hi.atan2(x.hi);
        let (s, c) = Dd::from_f64(t0).sin_cos();
        // Residual rotation angle: tan(t - t0) = (y c - x s)/(x c + y s).
        let num = y.mul(c).sub(x.mul(s));
        let den = x.mul(c).add(y.mul(s));
        let delta = num.div(den);
        Dd::from_f64(t0).add(delta)
    }
}

/// Complex number with double-double components.
#[derive(Clone, Copy, Debug)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub const ZERO: Cdd = Cdd {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };
    pub const ONE: Cdd = Cdd {
        re: Dd::ONE,
        im: Dd::ZERO,
    };

    #[inline]
    pub fn new(re: Dd, im: Dd) -> Cdd {
        Cdd { re, im }
    }

    #[inline]
    pub fn from_c64(z: C64) -> Cdd {
        Cdd {
            re: Dd::from_f64(z.re),
            im: Dd::from_f64(z.im),
        }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Cdd {
        Cdd {
            re: Dd::from_f64(x),
            im: Dd::ZERO,
        }
    }

    #[inline]
    pub fn to_c64(self) -> C64 {
        C64::new(self.re.to_f64(), self.im.to_f64())
    }

    #[inline]
    pub fn add(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re.add(o.re),
            im: self.im.add(o.im),
        }
    }

    #[inline]
    pub fn sub(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re.sub(o.re),
            im: self.im.sub(o.im),
        }
    }

    #[inline]
    pub fn neg(self) -> Cdd {
        Cdd {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    #[inline]
    pub fn mul(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    #[inline]
    pub fn mul_dd(self, s: Dd) -> Cdd {
        Cdd {
            re: self.re.mul(s),
            im: self.im.mul(s),
        }
    }

    #[inline]
    pub fn mul_f64(self, s: f64) -> Cdd {
        Cdd {
            re: self.re.mul_f64(s),
            im: self.im.mul_f64(s),
        }
    }

    #[inline]
    pub fn norm_sqr(self) -> Dd {
        self.re.mul(self.re).add(self.im.mul(self.im))
    }

    #[inline]
    pub fn div(self, o: Cdd) -> Cdd {
        let d = o.norm_sqr();
        Cdd {
            re: self.re.mul(o.re).add(self.im.mul(o.im)).div(d),
            im: self.im.mul(o.re).sub(self.re.mul(o.im)).div(d),
        }
    }

    pub fn exp(self) -> Cdd {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        Cdd {
            re: m.mul(c),
            im: m.mul(s),
        }
    }

    /// Principal logarithm.
    pub fn ln(self) -> Cdd {
        Cdd {
            re: self.norm_sqr().ln().mul_f64(0.5),
            im: Dd::atan2(self.im, self.re),
        }
    }

    /// Integer power by binary exponentiation.
    pub fn powi(self, n: i64) -> Cdd {
        if n == 0 {
            return Cdd::ONE;
        }
        let mut base = if n < 0 { Cdd::ONE.div(self) } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Cdd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }
}
