//! Precision doubling until two successive evaluations agree.

use super::real::{HpReal, Precision};

/// Start and ceiling precisions for [`adaptive_eval`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdaptiveConfig {
    pub start: Precision,
    pub ceiling: Precision,
}

impl AdaptiveConfig {
    pub const DEFAULT_CEILING: Precision = Precision::bits(1 << 13);

    pub fn starting_at(start: Precision) -> Self {
        AdaptiveConfig { start, ceiling: Self::DEFAULT_CEILING.max(start) }
    }

    /// A start precision with headroom over `digits` decimal digits.
    pub fn for_digits(digits: u32) -> Self {
        let bits = ((digits as usize * 3322) / 1000 + 64).max(Precision::MIN.get());
        Self::starting_at(Precision::bits(bits.next_power_of_two()))
    }
}

impl Default for AdaptiveConfig {
    fn default() -> Self {
        Self::starting_at(Precision::DEFAULT)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AdaptiveError<E> {
    #[error("requested digit count must be at least 1")]
    InvalidDigits,
    #[error("no agreement before the {bits}-bit ceiling; last relative difference {last_rel_diff:e}")]
    Ceiling { bits: usize, last_rel_diff: f64 },
    #[error(transparent)]
    Inner(E),
}

/// The agreed value and the precision of the run that produced it.
#[derive(Debug, Clone)]
pub struct AdaptiveOutcome {
    pub value: HpReal,
    pub precision: Precision,
}

/// Evaluates `f` at doubling precisions until results at `p` and `2p` agree
/// to `|a - b| <= 10^{-target_digits}·|b|` (or both are zero), returning the
/// higher-precision result.
pub fn adaptive_eval<E>(
    target_digits: u32,
    cfg: AdaptiveConfig,
    mut f: impl FnMut(Precision) -> Result<HpReal, E>,
) -> Result<AdaptiveOutcome, AdaptiveError<E>> {
    if target_digits == 0 {
        return Err(AdaptiveError::InvalidDigits);
    }
    let mut prec = cfg.start.max(Precision::MIN);
    let mut prev = f(prec).map_err(AdaptiveError::Inner)?;
    let mut last_rel_diff = f64::INFINITY;
    while prec < cfg.ceiling {
        prec = prec.doubled().min(cfg.ceiling);
        let cur = f(prec).map_err(AdaptiveError::Inner)?;
        if cur.is_zero() && prev.is_zero() {
            return Ok(AdaptiveOutcome { value: cur, precision: prec });
        }
        let diff = (&cur - &prev).abs();
        let scale = cur.abs();
        let tol = HpReal::from_ratio(
            &crate::exact::ExactRational::new(1.into(), num_traits::pow(crate::exact::ExactInt::from(10), target_digits as usize)),
            prec,
        );
        if diff <= &tol * &scale {
            return Ok(AdaptiveOutcome { value: cur, precision: prec });
        }
        last_rel_diff = if scale.is_zero() { f64::INFINITY } else { (&diff / &scale).to_f64() };
        prev = cur;
    }
    Err(AdaptiveError::Ceiling { bits: prec.get(), last_rel_diff })
}
