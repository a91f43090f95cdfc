//! Double-double complex arithmetic for sums that cancel badly in `f64`.
//!
//! Only the terminating very-well-poised sum uses it. Inputs are exact
//! doubles, so every derived parameter and theta value carries about 32
//! significant digits before the cancellation in the final sum.

use num_complex::Complex;
use twofloat::TwoFloat;

use crate::numeric::C64;

pub(crate) type D = Complex<TwoFloat>;

/// Product tails below this relative size are dropped.
const TRUNC: f64 = 1.0e-34;

pub(crate) fn lift(z: C64) -> D {
    Complex::new(TwoFloat::from(z.re), TwoFloat::from(z.im))
}

pub(crate) fn lower(z: D) -> C64 {
    C64::new(z.re.hi() + z.re.lo(), z.im.hi() + z.im.lo())
}

fn one() -> D {
    lift(C64::new(1.0, 0.0))
}

/// Magnitude from the leading parts; enough for truncation tests.
fn approx_norm(z: D) -> f64 {
    z.re.hi().hypot(z.im.hi())
}

/// `1/x` by one Newton step from the double reciprocal. The crate's own
/// division forms `1 - x hi/x hi` without a fused multiply and keeps only
/// double accuracy; multiplication and subtraction are exact enough.
fn recip(x: TwoFloat) -> TwoFloat {
    let r0 = 1.0 / x.hi();
    let e = TwoFloat::from(1.0) - x * r0;
    e * r0 + r0
}

pub(crate) fn div(a: D, b: D) -> D {
    let n = recip(b.re * b.re + b.im * b.im);
    let c = a * b.conj();
    Complex::new(c.re * n, c.im * n)
}

pub(crate) fn powi(z: D, n: i32) -> D {
    let mut acc = one();
    let base = if n < 0 { div(one(), z) } else { z };
    for _ in 0..n.unsigned_abs() {
        acc = acc * base;
    }
    acc
}

/// `theta(z; p) = (z; p)_inf (p/z; p)_inf`.
pub(crate) fn theta(z: D, p: D) -> Big {
    let w = div(p, z);
    let scale = approx_norm(z).max(approx_norm(w)).max(1.0);
    let mut acc = Big::new(one() - z);
    let mut c = one();
    loop {
        acc = acc.mul(one() - w * c);
        c = c * p;
        if approx_norm(c) * scale <= TRUNC {
            break;
        }
        acc = acc.mul(one() - z * c);
    }
    acc
}

/// `m * 2^e` with a double-double mantissa, for long theta products.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Big {
    m: D,
    pub(crate) e: i32,
}

fn scale2(z: D, k: i32) -> D {
    // exact as long as the result stays normal
    let f = TwoFloat::from(f64::from_bits(((1023 + k) as u64) << 52));
    Complex::new(z.re * f, z.im * f)
}

impl Big {
    pub(crate) fn new(m: D) -> Self {
        let mut b = Big { m, e: 0 };
        b.renorm();
        b
    }

    /// Too small to divide by safely.
    pub(crate) fn tiny(self, below: f64) -> bool {
        self.value().is_some_and(|v| approx_norm(v) < below)
    }

    fn renorm(&mut self) {
        let a = self.m.re.hi().abs().max(self.m.im.hi().abs());
        if a != 0.0 && a.is_finite() && !(1.0e-100..=1.0e100).contains(&a) {
            let k = ((a.to_bits() >> 52) & 0x7ff) as i32 - 1023;
            self.m = scale2(self.m, -k);
            self.e += k;
        }
    }

    pub(crate) fn mul(self, o: D) -> Self {
        let mut r = Big { m: self.m * o, e: self.e };
        r.renorm();
        r
    }

    pub(crate) fn times(self, o: Big) -> Self {
        let mut r = Big { m: self.m * o.m, e: self.e + o.e };
        r.renorm();
        r
    }

    pub(crate) fn ratio(self, o: Big) -> Self {
        let mut r = Big { m: div(self.m, o.m), e: self.e - o.e };
        r.renorm();
        r
    }

    /// The plain value, flushed to zero on underflow; `None` on overflow.
    pub(crate) fn value(self) -> Option<D> {
        let a = self.m.re.hi().abs().max(self.m.im.hi().abs());
        if a == 0.0 {
            return Some(self.m);
        }
        let top = self.e + ((a.to_bits() >> 52) & 0x7ff) as i32 - 1023;
        if top > 1020 {
            return None;
        }
        if top < -960 {
            return Some(lift(C64::new(0.0, 0.0)));
        }
        let (h, l) = (self.e / 2, self.e - self.e / 2);
        Some(scale2(scale2(self.m, h), l))
    }
}

pub(crate) fn sum(terms: &[D]) -> D {
    terms.iter().fold(lift(C64::new(0.0, 0.0)), |a, &t| a + t)
}
