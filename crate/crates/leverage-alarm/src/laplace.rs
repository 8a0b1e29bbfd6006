//! Numerical inversion of Laplace transforms by Zakian's five-term method.
//!
//! The inverse at time `t` is approximated by
//!
//! ```text
//! f(t) ≈ (2/t) · Σ_{i=1..5} Re[ K_i · F(a_i / t) ]
//! ```
//!
//! where `(a_i, K_i)` are the upper-half-plane poles and residues of the
//! `[9/10]` Padé approximant of `exp(z)` (Zakian 1969). The constants below
//! were regenerated from that rational approximant in 50-digit arithmetic and
//! are quoted to 20 significant digits; several secondary sources circulate a
//! version of `Re K_1` that is wrong from the 7th digit on (−36902.082…
//! instead of −36902.046…), which this table corrects.
//!
//! The method samples `F` at `Re q ≈ 5.2/t … 12.8/t` only, so it needs `F`
//! analytic in the right half-plane and `f` smooth; accuracy degrades for
//! strongly oscillatory originals and for `t` far beyond the decay range
//! captured by the five nodes. Callers needing deep-tail values should switch
//! to a problem-specific expansion there (see [`crate::reversal`]).

pub use num_complex::Complex64;

use crate::error::{Error, Result};

/// Padé poles `a_i` of `exp(z)`, upper half plane, 20 significant digits.
pub const ZAKIAN_NODES: [Complex64; 5] = [
    Complex64::new(12.837_677_077_810_870_259, 1.666_062_584_162_301_300_1),
    Complex64::new(12.226_131_484_162_150_028, 5.012_719_263_676_864_455_7),
    Complex64::new(10.934_303_430_600_009_741, 8.409_672_996_003_091_651_6),
    Complex64::new(8.776_434_640_082_608_648_2, 11.921_853_898_301_213_686),
    Complex64::new(5.225_453_367_344_361_323_3, 15.729_529_045_639_258_587),
];

/// Matching residues `K_i` (already scaled for the real-part sum).
pub const ZAKIAN_WEIGHTS: [Complex64; 5] = [
    Complex64::new(-36_902.046_880_025_550_911, 196_990.463_529_003_640_41),
    Complex64::new(61_276.999_705_851_505_925, -95_408.598_907_324_025_715),
    Complex64::new(-28_916.572_270_324_232_037, 18_169.185_100_096_441_871),
    Complex64::new(4_655.360_846_398_173_544_9, -1.901_773_030_583_013_916_8),
    Complex64::new(-118.741_401_899_896_522_49, -141.303_692_321_723_468_15),
];

/// A Laplace transform evaluated on the right half-plane.
pub trait LaplaceEvaluator {
    fn eval(&self, q: Complex64) -> Complex64;
}

impl<F> LaplaceEvaluator for F
where
    F: Fn(Complex64) -> Complex64,
{
    fn eval(&self, q: Complex64) -> Complex64 {
        self(q)
    }
}

/// Invert `transform` at time `t > 0`.
///
/// Errors on `t <= 0` and on non-finite transform evaluations. The result is
/// whatever the five-node rule produces — including small negative values for
/// originals that touch zero; callers decide how to clip.
pub fn zakian_invert<L: LaplaceEvaluator + ?Sized>(transform: &L, t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!(
            "inversion time t = {t} must be positive and finite"
        )));
    }
    let mut acc = 0.0;
    for (node, weight) in ZAKIAN_NODES.iter().zip(ZAKIAN_WEIGHTS.iter()) {
        let val = transform.eval(node / t);
        if !(val.re.is_finite() && val.im.is_finite()) {
            return Err(Error::NonFinite {
                what: "Laplace transform evaluation",
            });
        }
        acc += (weight * val).re;
    }
    Ok(2.0 / t * acc)
}
