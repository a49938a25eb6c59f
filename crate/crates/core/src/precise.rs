//! Extended-precision evaluation for quantities whose double-precision
//! rounding error would swamp an absolute tolerance.

use std::cell::RefCell;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_rational::BigRational;

pub(crate) const BITS: usize = 192;
const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

/// Arithmetic context: fixed precision and rounding, shared constant cache.
pub(crate) struct Ctx<'a> {
    cc: &'a mut Consts,
}

pub(crate) fn with_ctx<R>(f: impl FnOnce(&mut Ctx<'_>) -> R) -> R {
    CONSTS.with(|c| {
        f(&mut Ctx {
            cc: &mut c.borrow_mut(),
        })
    })
}

impl Ctx<'_> {
    pub fn f64(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, BITS)
    }

    pub fn rational(&mut self, r: &BigRational) -> BigFloat {
        let num = BigFloat::parse(&r.numer().to_string(), Radix::Dec, BITS, RM, self.cc);
        let den = BigFloat::parse(&r.denom().to_string(), Radix::Dec, BITS, RM, self.cc);
        num.div(&den, BITS, RM)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, BITS, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, BITS, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, BITS, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, BITS, RM)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(BITS, RM, self.cc)
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(BITS, RM, self.cc)
    }

    pub fn to_f64(&mut self, a: &BigFloat) -> f64 {
        if a.is_zero() {
            return 0.0;
        }
        let text = a
            .format(Radix::Dec, RM, self.cc)
            .unwrap_or_else(|_| "NaN".into());
        text.parse().unwrap_or(f64::NAN)
    }
}
