//! Logarithms of huge rationals.
//!
//! Reported series values use `f64` logs extracted from bit lengths and the
//! leading 64 bits (relative error well under 1e-12). Comparisons that
//! decide verdicts never trust floats: wherever a comparison reduces to a
//! rational inequality it is done by exact cross-multiplication, and the
//! genuinely transcendental ones (ratios of logs with different bases) are
//! decided with certified fixed-point interval arithmetic, escalating the
//! working precision until the intervals separate.

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

/// Natural log of a positive big integer via (bit length, top 64 bits).
pub fn ln_biguint_f64(x: &BigUint) -> f64 {
    debug_assert!(!x.is_zero());
    let bits = x.bits();
    if bits <= 63 {
        return (x.to_u64().unwrap() as f64).ln();
    }
    let shift = bits - 63;
    let top = (x >> shift).to_u64().unwrap();
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational.
pub fn ln_rational_f64(r: &BigRational) -> f64 {
    debug_assert!(r.is_positive());
    ln_biguint_f64(&r.numer().to_biguint().unwrap())
        - ln_biguint_f64(&r.denom().to_biguint().unwrap())
}

/// Fixed-point interval `[(v-err)/2^prec, (v+err)/2^prec]`.
#[derive(Clone, Debug)]
struct Fp {
    v: BigInt,
    err: BigInt,
}

impl Fp {
    fn exact(v: BigInt) -> Self {
        Fp {
            v,
            err: BigInt::zero(),
        }
    }

    fn lo(&self) -> BigInt {
        &self.v - &self.err
    }

    fn hi(&self) -> BigInt {
        &self.v + &self.err
    }

    fn add(&self, other: &Fp) -> Fp {
        Fp {
            v: &self.v + &other.v,
            err: &self.err + &other.err,
        }
    }

    fn sub(&self, other: &Fp) -> Fp {
        Fp {
            v: &self.v - &other.v,
            err: &self.err + &other.err,
        }
    }

    /// Product rescaled to `2^prec` with rounding absorbed into the error.
    fn mul(&self, other: &Fp, prec: u64) -> Fp {
        use num_integer::Integer;
        let v = (&self.v * &other.v).div_floor(&(BigInt::one() << prec));
        let err = (self.v.abs() * &other.err + other.v.abs() * &self.err
            + &self.err * &other.err)
            .div_floor(&(BigInt::one() << prec))
            + 2;
        Fp { v, err }
    }

    /// Multiplication by an exact nonnegative rational `num/den`.
    fn mul_rational(&self, num: &BigInt, den: &BigInt) -> Fp {
        use num_integer::Integer;
        debug_assert!(den.is_positive() && !num.is_negative());
        let v = (&self.v * num).div_floor(den);
        let err = (&self.err * num).div_floor(den) + 2;
        Fp { v, err }
    }

    fn div_small(&self, d: u64) -> Fp {
        use num_integer::Integer;
        Fp {
            v: self.v.div_floor(&BigInt::from(d)),
            err: self.err.div_floor(&BigInt::from(d)) + 1,
        }
    }
}

/// `atanh(z)` for `0 <= z < 1/2` given as a fixed-point value with error.
fn atanh_fp(z: &Fp, prec: u64) -> Fp {
    let zsq = z.mul(z, prec);
    let mut pow = z.clone();
    let mut acc = z.clone();
    let mut denom = 3u64;
    while !pow.v.is_zero() {
        pow = pow.mul(&zsq, prec);
        acc = acc.add(&pow.div_small(denom));
        denom += 2;
    }
    // geometric tail after the power underflows: bounded by a few ulps
    acc.err += 4;
    acc
}

fn ln2_fp(prec: u64) -> Fp {
    // ln 2 = 2 atanh(1/3)
    let one = BigInt::one() << prec;
    let z = Fp {
        v: num_integer::Integer::div_floor(&one, &BigInt::from(3)),
        err: BigInt::one(),
    };
    let a = atanh_fp(&z, prec);
    Fp {
        v: &a.v << 1,
        err: (&a.err << 1) + 1,
    }
}

/// `ln x` for a positive big integer, as a certified fixed-point interval.
fn ln_biguint_fp(x: &BigUint, prec: u64) -> Fp {
    debug_assert!(!x.is_zero());
    if x.is_one() {
        return Fp::exact(BigInt::zero());
    }
    let e = x.bits() - 1;
    let pow2 = BigUint::one() << e;
    // z = (x - 2^e)/(x + 2^e) in [0, 1/3)
    let znum = BigInt::from(x - &pow2);
    let zden = BigInt::from(x + &pow2);
    let z = Fp {
        v: num_integer::Integer::div_floor(&(znum << prec), &zden),
        err: BigInt::one(),
    };
    let mantissa_ln = {
        let a = atanh_fp(&z, prec);
        Fp {
            v: &a.v << 1,
            err: (&a.err << 1) + 1,
        }
    };
    let l2 = ln2_fp(prec);
    let scaled = Fp {
        v: &l2.v * BigInt::from(e),
        err: &l2.err * BigInt::from(e),
    };
    scaled.add(&mantissa_ln)
}

/// `ln r` for a positive rational, certified.
fn ln_rational_fp(r: &BigRational, prec: u64) -> Fp {
    let num = r.numer().to_biguint().expect("positive rational");
    let den = r.denom().to_biguint().expect("positive denominator");
    ln_biguint_fp(&num, prec).sub(&ln_biguint_fp(&den, prec))
}

fn interval_product(a: &Fp, b: &Fp) -> (BigInt, BigInt) {
    let corners = [
        a.lo() * b.lo(),
        a.lo() * b.hi(),
        a.hi() * b.lo(),
        a.hi() * b.hi(),
    ];
    let lo = corners.iter().min().unwrap().clone();
    let hi = corners.iter().max().unwrap().clone();
    (lo, hi)
}

const PRECISIONS: [u64; 4] = [96, 192, 384, 768];

/// Compares `log_{y1}(x1)` with `log_{y2}(x2)` for rationals in `(0, 1)`.
///
/// Ratios with a shared base or shared components reduce to exact rational
/// comparisons; the rest go through certified intervals with precision
/// escalation, so a returned ordering is a proof, never a float guess.
pub fn cmp_log_ratios(
    x1: &BigRational,
    y1: &BigRational,
    x2: &BigRational,
    y2: &BigRational,
) -> Result<Ordering> {
    let one = BigRational::one();
    debug_assert!(
        x1.is_positive() && y1.is_positive() && x2.is_positive() && y2.is_positive()
    );
    debug_assert!(x1 < &one && y1 < &one && x2 < &one && y2 < &one);
    if x1 == x2 && y1 == y2 {
        return Ok(Ordering::Equal);
    }
    // log_y x = 1 exactly when x == y
    if x1 == y1 && x2 == y2 {
        return Ok(Ordering::Equal);
    }
    if x1 == y1 {
        // compare 1 with ln(x2)/ln(y2): ratio >= 1 iff x2 <= y2
        return Ok(match x2.cmp(y2) {
            Ordering::Less => Ordering::Less,       // r2 > 1
            Ordering::Equal => Ordering::Equal,
            Ordering::Greater => Ordering::Greater, // r2 < 1
        });
    }
    if x2 == y2 {
        return Ok(match x1.cmp(y1) {
            Ordering::Less => Ordering::Greater,
            Ordering::Equal => Ordering::Equal,
            Ordering::Greater => Ordering::Less,
        });
    }
    if y1 == y2 {
        // same base < 1: larger argument gives smaller ratio
        return Ok(x2.cmp(x1));
    }
    if x1 == x2 {
        // same argument < 1: larger base gives larger ratio (|ln| smaller)
        return Ok(y1.cmp(y2));
    }
    // r1 <= r2  iff  ln(x1)·ln(y2) <= ln(x2)·ln(y1)  (ln(y1)·ln(y2) > 0)
    for prec in PRECISIONS {
        let l1 = ln_rational_fp(x1, prec);
        let m1 = ln_rational_fp(y1, prec);
        let l2 = ln_rational_fp(x2, prec);
        let m2 = ln_rational_fp(y2, prec);
        let (lo_a, hi_a) = interval_product(&l1, &m2);
        let (lo_b, hi_b) = interval_product(&l2, &m1);
        if hi_a < lo_b {
            return Ok(Ordering::Less);
        }
        if hi_b < lo_a {
            return Ok(Ordering::Greater);
        }
    }
    Err(Error::LogUndecided {
        context: format!("log ratio comparison ({x1}, {y1}) vs ({x2}, {y2})"),
    })
}

/// Certified sign of `ln(a) − α·ln(b) − ln(C)` for positive rationals
/// `a, b, C` and `α ≥ 0`. `Less` means the Frostman hypothesis holds
/// strictly at this instance.
pub fn cmp_frostman_form(
    a: &BigRational,
    b: &BigRational,
    alpha: &BigRational,
    c: &BigRational,
) -> Result<Ordering> {
    // exact shortcuts
    if alpha.is_zero() {
        return Ok(a.cmp(c));
    }
    if alpha.is_one() {
        return Ok(a.cmp(&(b * c)));
    }
    for prec in PRECISIONS {
        let la = ln_rational_fp(a, prec);
        let lb = ln_rational_fp(b, prec).mul_rational(alpha.numer(), alpha.denom());
        let lc = ln_rational_fp(c, prec);
        let form = la.sub(&lb).sub(&lc);
        if form.hi().is_negative() {
            return Ok(Ordering::Less);
        }
        if form.lo().is_positive() {
            return Ok(Ordering::Greater);
        }
    }
    Err(Error::LogUndecided {
        context: format!("frostman form a={a} b={b} alpha={alpha}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn f64_log_accuracy() {
        let x = BigUint::from(10u32).pow(50);
        let got = ln_biguint_f64(&x);
        let want = 50.0 * std::f64::consts::LN_10;
        assert!((got - want).abs() / want < 1e-13, "{got} vs {want}");
        let r = BigRational::new(BigInt::from(3), BigInt::from(7));
        assert!((ln_rational_f64(&r) - (3f64 / 7f64).ln()).abs() < 1e-14);
    }

    #[test]
    fn fixed_point_ln_brackets_truth() {
        for prec in [96u64, 192] {
            let fp = ln_biguint_fp(&BigUint::from(10u32).pow(30), prec);
            let truth = 30.0 * std::f64::consts::LN_10;
            let scale = 2f64.powi(prec as i32);
            let lo = fp.lo().to_f64().unwrap() / scale;
            let hi = fp.hi().to_f64().unwrap() / scale;
            // `truth` is itself only f64-accurate; the certified interval is
            // far tighter, so compare with an f64-sized slack
            assert!(lo - 1e-12 <= truth && truth <= hi + 1e-12, "[{lo}, {hi}] vs {truth}");
            assert!(hi - lo < 1e-20);
        }
    }

    #[test]
    fn ratio_comparisons() {
        // log_{1/2}(1/4) = 2 > log_{1/3}(1/4) ≈ 1.26
        let r = cmp_log_ratios(&rat(1, 4), &rat(1, 2), &rat(1, 4), &rat(1, 3)).unwrap();
        assert_eq!(r, Ordering::Greater);
        // exact tie through different rationals: log_{1/2}(1/4) = log_{1/3}(1/9)
        let tie = cmp_log_ratios(&rat(1, 4), &rat(1, 2), &rat(1, 9), &rat(1, 3));
        assert!(matches!(tie, Err(Error::LogUndecided { .. })));
        // shared base resolves exactly
        let r2 = cmp_log_ratios(&rat(1, 8), &rat(1, 3), &rat(1, 9), &rat(1, 3)).unwrap();
        assert_eq!(r2, Ordering::Less);
    }

    #[test]
    fn frostman_form_cases() {
        // a = b, alpha = 1, C = 1: equality
        let a = rat(3, 7);
        assert_eq!(
            cmp_frostman_form(&a, &a, &BigRational::one(), &BigRational::one()).unwrap(),
            Ordering::Equal
        );
        // alpha = 0: reduces to a <= C
        assert_eq!(
            cmp_frostman_form(&a, &rat(1, 2), &BigRational::zero(), &BigRational::one())
                .unwrap(),
            Ordering::Less
        );
        // strict inequality decided by intervals
        let r = cmp_frostman_form(&rat(1, 10), &rat(1, 2), &rat(1, 2), &BigRational::one())
            .unwrap();
        assert_eq!(r, Ordering::Less); // 1/10 < (1/2)^{1/2}
    }
}
