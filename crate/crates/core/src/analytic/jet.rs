use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Value of a map together with its first and second complex derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Jet2 {
    pub f: Complex64,
    pub df: Complex64,
    pub d2f: Complex64,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl Jet2 {
    pub const fn new(f: Complex64, df: Complex64, d2f: Complex64) -> Self {
        Self { f, df, d2f }
    }

    pub const fn constant(c: Complex64) -> Self {
        Self::new(c, ZERO, ZERO)
    }

    /// Jet of the identity map at `z`.
    pub const fn variable(z: Complex64) -> Self {
        Self::new(z, ONE, ZERO)
    }

    pub fn scale(self, c: Complex64) -> Self {
        Self::new(c * self.f, c * self.df, c * self.d2f)
    }

    /// Chain rule: `outer` is the jet of g evaluated at `inner.f`, the result
    /// is the jet of g∘h.
    pub fn compose(outer: Jet2, inner: Jet2) -> Self {
        let h1 = inner.df;
        Self::new(
            outer.f,
            outer.df * h1,
            outer.d2f * h1 * h1 + outer.df * inner.d2f,
        )
    }

    pub fn is_finite(&self) -> bool {
        self.f.is_finite() && self.df.is_finite() && self.d2f.is_finite()
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2::new(self.f + o.f, self.df + o.df, self.d2f + o.d2f)
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        Jet2::new(self.f - o.f, self.df - o.df, self.d2f - o.d2f)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2::new(-self.f, -self.df, -self.d2f)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2::new(
            self.f * o.f,
            self.df * o.f + self.f * o.df,
            self.d2f * o.f + 2.0 * self.df * o.df + self.f * o.d2f,
        )
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, o: Jet2) -> Jet2 {
        let q = self.f / o.f;
        let q1 = (self.df - q * o.df) / o.f;
        let q2 = (self.d2f - 2.0 * q1 * o.df - q * o.d2f) / o.f;
        Jet2::new(q, q1, q2)
    }
}
