use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Rational;

/// The two regime guarantees as functions of the cover statistics `t`
/// (triangle fraction) and `b` (bridge fraction), in exact rationals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RatioEnvelope;

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

impl RatioEnvelope {
    /// Guarantee of the triangle-rich regime.
    pub fn f_many(t: Rational, b: Rational) -> Rational {
        r(14, 9) - r(8, 27) * t + r(4, 9) * b
    }

    /// Guarantee of the few-triangles regime.
    pub fn f_few(t: Rational, b: Rational) -> Rational {
        r(13, 10) + r(1, 30) * t - r(1, 20) * b
    }

    /// The `t` at which both guarantees coincide for a given `b`.
    pub fn crossover(b: Rational) -> Rational {
        r(69, 89) + r(3, 2) * b
    }

    /// Largest `b` for which the crossover is feasible (`t + b <= 1`).
    pub fn crossover_limit() -> Rational {
        r(8, 89)
    }

    pub fn worst() -> Rational {
        r(118, 89)
    }

    /// Guarantee of taking the better of both regimes.
    pub fn value(t: Rational, b: Rational) -> Rational {
        Self::f_many(t, b).min(Self::f_few(t, b))
    }

    /// The feasible `t` maximising [`RatioEnvelope::value`] for this `b`.
    /// `f_many` falls and `f_few` rises in `t`, so the maximum sits at the
    /// crossover when it is feasible and at `t = 1 - b` otherwise.
    pub fn argmax_t(b: Rational) -> Rational {
        Self::crossover(b).min(Rational::from_integer(1) - b)
    }

    pub fn apx(b: Rational) -> Rational {
        Self::value(Self::argmax_t(b), b)
    }
}

/// What [`ratio_envelope_check`] established.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvelopeReport {
    #[serde(with = "crate::serde_rational")]
    pub worst: Rational,
    #[serde(with = "crate::serde_rational")]
    pub argmax_t: Rational,
    #[serde(with = "crate::serde_rational")]
    pub argmax_b: Rational,
    #[serde(with = "crate::serde_rational")]
    pub grid_step: Rational,
    #[serde(with = "crate::serde_rational")]
    pub grid_max: Rational,
    pub grid_points: usize,
    pub crossover_samples: usize,
    pub boundary_samples: usize,
}

const GRID: i64 = 1000;
const CROSSOVER_SAMPLES: i64 = 100;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Envelope(msg()))
    }
}

/// Checks in exact arithmetic that the better of both regime guarantees is
/// never worse than 118/89 over all feasible `(t, b)`, and that the value is
/// attained at `t = 69/89, b = 0`.
pub fn ratio_envelope_check() -> Result<EnvelopeReport> {
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    let limit = RatioEnvelope::crossover_limit();

    // Both guarantees agree along the crossover while it stays feasible.
    for k in 0..=CROSSOVER_SAMPLES {
        let b = limit * r(k, CROSSOVER_SAMPLES);
        let t = RatioEnvelope::crossover(b);
        let (m, f) = (RatioEnvelope::f_many(t, b), RatioEnvelope::f_few(t, b));
        ensure(m == f, || format!("crossover mismatch at b = {b}: {m} vs {f}"))?;
        ensure(f == RatioEnvelope::worst(), || format!("crossover value {f} at b = {b}"))?;
    }
    ensure(RatioEnvelope::crossover(limit) == one - limit, || "crossover leaves the simplex early".into())?;

    // Past the limit the maximiser sits on t + b = 1.
    let mut boundary_samples = 0;
    let mut boundary = vec![limit];
    boundary.extend((0..=GRID).map(|k| r(k, GRID)).filter(|&b| b >= limit));
    for &b in &boundary {
        let v = RatioEnvelope::f_few(one - b, b);
        ensure(v == r(4, 3) - b / 12, || format!("boundary identity fails at b = {b}: {v}"))?;
        ensure(RatioEnvelope::argmax_t(b) == one - b, || format!("maximiser off the boundary at b = {b}"))?;
        boundary_samples += 1;
    }

    // apx(b) is linear on [0, limit] and on [limit, 1]; its maximum is at a breakpoint.
    let mut worst = (RatioEnvelope::apx(zero), zero);
    for b in [limit, one] {
        if RatioEnvelope::apx(b) > worst.0 {
            worst = (RatioEnvelope::apx(b), b);
        }
    }
    ensure(worst.0 == RatioEnvelope::worst(), || format!("maximum {} differs from 118/89", worst.0))?;
    let argmax_t = RatioEnvelope::argmax_t(worst.1);
    ensure(argmax_t == r(69, 89) && worst.1 == zero, || format!("maximum attained at ({argmax_t}, {})", worst.1))?;

    // Brute-force grid over the simplex.
    let step = r(1, GRID);
    let mut grid_max = zero;
    let mut grid_points = 0;
    for i in 0..=GRID {
        for j in 0..=GRID - i {
            let v = RatioEnvelope::value(r(i, GRID), r(j, GRID));
            grid_max = grid_max.max(v);
            grid_points += 1;
        }
    }
    ensure(grid_max <= RatioEnvelope::worst(), || format!("grid value {grid_max} exceeds 118/89"))?;
    ensure(RatioEnvelope::worst() - grid_max <= step, || format!("grid maximum {grid_max} is not within {step} of 118/89"))?;

    Ok(EnvelopeReport {
        worst: worst.0,
        argmax_t,
        argmax_b: worst.1,
        grid_step: step,
        grid_max,
        grid_points,
        crossover_samples: CROSSOVER_SAMPLES as usize + 1,
        boundary_samples,
    })
}
