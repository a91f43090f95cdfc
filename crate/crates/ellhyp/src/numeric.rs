//! Small numeric helpers shared by every module: the complex type, a product
//! accumulator with a separate binary exponent, and deterministic summation.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

pub type C64 = Complex64;

#[inline]
pub const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub const fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub const ONE: C64 = c(1.0, 0.0);
pub const ZERO: C64 = c(0.0, 0.0);

/// `r * exp(i phi)`.
pub fn polar(r: f64, phi: f64) -> C64 {
    C64::from_polar(r, phi)
}

/// Relative distance `|a - b| / |b|`, falling back to `|a - b|` when `b` is zero.
pub fn rel_err(a: C64, b: C64) -> f64 {
    let d = (a - b).norm();
    let s = b.norm();
    if s > 0.0 {
        d / s
    } else {
        d
    }
}

/// Mantissa window of [`Scaled`]; products and quotients of two mantissas
/// inside it stay normal.
const HI: f64 = 1.0e150;
const LO: f64 = 1.0e-150;

fn pow2(k: i32) -> f64 {
    f64::from_bits(((1023 + k) as u64) << 52)
}

fn exponent_of(a: f64) -> i32 {
    ((a.to_bits() >> 52) & 0x7ff) as i32 - 1023
}

/// A complex number `m * 2^e`; products of many factors stay representable
/// even when the final value would overflow an `f64`.
#[derive(Clone, Copy, Debug)]
pub struct Scaled {
    pub m: C64,
    pub e: i32,
}

impl Scaled {
    pub const ONE: Scaled = Scaled { m: ONE, e: 0 };

    pub fn new(x: C64) -> Self {
        let mut s = Scaled { m: x, e: 0 };
        s.renorm();
        s
    }

    #[inline]
    pub fn renorm(&mut self) {
        let a = self.m.re.abs().max(self.m.im.abs());
        if (a > HI || a < LO) && a != 0.0 && a.is_finite() {
            let k = exponent_of(a);
            self.m = self.m * pow2(-k);
            self.e += k;
        }
    }

    pub fn mul(self, o: Scaled) -> Scaled {
        let mut r = Scaled { m: self.m * o.m, e: self.e + o.e };
        r.renorm();
        r
    }

    pub fn div(self, o: Scaled) -> Scaled {
        let mut r = Scaled { m: self.m / o.m, e: self.e - o.e };
        r.renorm();
        r
    }

    pub fn inv(self) -> Scaled {
        Scaled::ONE.div(self)
    }

    pub fn is_zero(&self) -> bool {
        self.m.re == 0.0 && self.m.im == 0.0
    }

    /// `log2 |value|`, used for magnitude balancing.
    pub fn log2_abs(&self) -> f64 {
        self.m.norm().log2() + f64::from(self.e)
    }

    pub fn to_c64(self) -> C64 {
        if self.e == 0 || self.is_zero() {
            return self.m;
        }
        let mut m = self.m;
        let mut e = self.e;
        while e > 1000 {
            m = m * pow2(1000);
            e -= 1000;
        }
        while e < -1000 {
            m = m * pow2(-1000);
            e += 1000;
        }
        m * pow2(e)
    }
}

/// Neumaier-compensated complex accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompSum {
    s: [f64; 2],
    c: [f64; 2],
}

impl CompSum {
    pub fn new() -> Self {
        Self::default()
    }

    fn add1(s: &mut f64, c: &mut f64, x: f64) {
        let t = *s + x;
        if s.abs() >= x.abs() {
            *c += (*s - t) + x;
        } else {
            *c += (x - t) + *s;
        }
        *s = t;
    }

    pub fn add(&mut self, x: C64) {
        Self::add1(&mut self.s[0], &mut self.c[0], x.re);
        Self::add1(&mut self.s[1], &mut self.c[1], x.im);
    }

    pub fn value(&self) -> C64 {
        c(self.s[0] + self.c[0], self.s[1] + self.c[1])
    }
}

pub fn comp_sum<I: IntoIterator<Item = C64>>(it: I) -> C64 {
    let mut s = CompSum::new();
    for x in it {
        s.add(x);
    }
    s.value()
}

/// Sum in a fixed binary tree over the slice order.
pub fn pairwise_sum(v: &[C64]) -> C64 {
    match v.len() {
        0 => ZERO,
        1 => v[0],
        2 => v[0] + v[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
        }
    }
}

/// Principal square root (branch cut on the negative real axis).
pub fn sqrt(z: C64) -> C64 {
    z.sqrt()
}

/// Principal power `z^a = exp(a log z)`.
pub fn powf(z: C64, a: f64) -> C64 {
    if z == ZERO {
        return ZERO;
    }
    (z.ln() * a).exp()
}

/// Integer power by repeated squaring; exact for small exponents.
pub fn powi(z: C64, n: i32) -> C64 {
    if n < 0 {
        return ONE / powi(z, -n);
    }
    let mut r = ONE;
    let mut b = z;
    let mut k = n as u32;
    while k > 0 {
        if k & 1 == 1 {
            r *= b;
        }
        b *= b;
        k >>= 1;
    }
    r
}

pub fn prod<I: IntoIterator<Item = C64>>(it: I) -> C64 {
    it.into_iter().fold(ONE, |a, b| a * b)
}
