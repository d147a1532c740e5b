//! q-sums, q-means, quasi-sums and quasi-arithmetic means.
//!
//! Generic over the scalar type via `num_traits::Float`; the rest of the
//! crate uses the `f64` aliases at the crate root. The q parameter is an
//! extended real with exact limit semantics: `+inf` is the maximum, `-inf`
//! the minimum, and the q-mean at `q = 0` is the geometric mean. Zeros in
//! the input follow the limit convention: for negative q (and q = 0 for the
//! q-mean) any zero entry makes the result zero.

use num_traits::Float;

use crate::error::{Error, Result};

/// Extended real parameter; no floating-point infinity enters the formulas.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtReal<F> {
    Finite(F),
    PosInf,
    NegInf,
}

impl<F: Float> ExtReal<F> {
    pub fn from_float(x: F) -> Self {
        if x == F::infinity() {
            ExtReal::PosInf
        } else if x == F::neg_infinity() {
            ExtReal::NegInf
        } else {
            ExtReal::Finite(x)
        }
    }
}

/// Named invertible maps admissible as quasi-mean kernels. Registered by
/// name so mean specifications stay serializable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuasiMap {
    /// `h = ln ∘ g` with `g(x) = 1 - e^{-x}`, defined for `x > 0`.
    LnMagicG,
}

impl QuasiMap {
    fn apply<F: Float>(&self, x: F) -> F {
        match self {
            // ln(1 - e^{-x}); tends to -inf as x -> 0+
            QuasiMap::LnMagicG => (-(-x).exp()).ln_1p(),
        }
    }

    fn invert<F: Float>(&self, y: F) -> F {
        match self {
            // -ln(1 - e^y)
            QuasiMap::LnMagicG => -(-y.exp()).ln_1p(),
        }
    }
}

/// A sum/mean family member.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MeanSpec<F> {
    QSum(ExtReal<F>),
    QMean(ExtReal<F>),
    QuasiSum(QuasiMap),
    QuasiMean(QuasiMap),
}

impl<F: Float> MeanSpec<F> {
    pub fn validate(&self) -> Result<()> {
        if let MeanSpec::QSum(ExtReal::Finite(q)) = self {
            if *q == F::zero() {
                return Err(Error::Domain(
                    "q-sum is undefined at q = 0 (no continuous extension)".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Evaluates a sum/mean over nonnegative inputs.
pub fn evaluate<F: Float>(spec: &MeanSpec<F>, xs: &[F]) -> Result<F> {
    spec.validate()?;
    if xs.is_empty() {
        return Err(Error::Domain("mean of an empty list".into()));
    }
    if xs.iter().any(|x| *x < F::zero()) {
        return Err(Error::Domain("negative input to sum/mean".into()));
    }
    let m = F::from(xs.len()).unwrap();
    match spec {
        MeanSpec::QSum(ExtReal::PosInf) | MeanSpec::QMean(ExtReal::PosInf) => {
            Ok(xs.iter().cloned().fold(F::zero(), F::max))
        }
        MeanSpec::QSum(ExtReal::NegInf) | MeanSpec::QMean(ExtReal::NegInf) => {
            Ok(xs.iter().cloned().fold(F::infinity(), F::min))
        }
        MeanSpec::QSum(ExtReal::Finite(q)) => Ok(power_form(*q, xs, F::one())),
        MeanSpec::QMean(ExtReal::Finite(q)) => {
            if *q == F::zero() {
                geometric_mean(xs)
            } else {
                Ok(power_form(*q, xs, m.recip()))
            }
        }
        MeanSpec::QuasiSum(h) => quasi_form(*h, xs, F::one()),
        MeanSpec::QuasiMean(h) => quasi_form(*h, xs, m.recip()),
    }
}

/// `[w Σ x_j^q]^{1/q}` with max-factoring for numerical stability at
/// large |q|; zero-handling per the limit convention.
fn power_form<F: Float>(q: F, xs: &[F], weight: F) -> F {
    debug_assert!(q != F::zero());
    if q < F::zero() && xs.iter().any(|x| *x == F::zero()) {
        return F::zero();
    }
    let xmax = xs.iter().cloned().fold(F::zero(), F::max);
    if xmax == F::zero() {
        return F::zero();
    }
    let s = xs
        .iter()
        .map(|x| (*x / xmax).powf(q))
        .fold(F::zero(), |a, b| a + b);
    xmax * (weight * s).powf(q.recip())
}

fn geometric_mean<F: Float>(xs: &[F]) -> Result<F> {
    if xs.iter().any(|x| *x == F::zero()) {
        return Ok(F::zero());
    }
    let m = F::from(xs.len()).unwrap();
    let log_sum = xs.iter().map(|x| x.ln()).fold(F::zero(), |a, b| a + b);
    Ok((log_sum / m).exp())
}

fn quasi_form<F: Float>(h: QuasiMap, xs: &[F], weight: F) -> Result<F> {
    // h(0) = -inf for the registered kernels: any zero makes the result zero
    if xs.iter().any(|x| *x == F::zero()) {
        return Ok(F::zero());
    }
    let s = xs.iter().map(|x| h.apply(*x)).fold(F::zero(), |a, b| a + b);
    Ok(h.invert(weight * s))
}

/// `g(x) = 1 - e^{-x}`, monotone increasing and concave with `g(0) = 0`.
pub fn magic_g<F: Float>(x: F) -> Result<F> {
    if x < F::zero() {
        return Err(Error::Domain("magic_g requires x >= 0".into()));
    }
    Ok(-(-x).exp_m1())
}

/// Inverse of `g`, defined on `[0, 1)`.
pub fn magic_g_inverse<F: Float>(y: F) -> Result<F> {
    if y < F::zero() || y >= F::one() {
        return Err(Error::Domain("magic_g_inverse requires 0 <= y < 1".into()));
    }
    Ok(-(-y).ln_1p())
}

// ---- serde for the f64 specialization (config wire format) ----

mod serde_impl {
    use super::{ExtReal, MeanSpec, QuasiMap};
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Wire {
        family: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        q: Option<serde_json::Value>,
        #[serde(skip_serializing_if = "Option::is_none")]
        h: Option<String>,
    }

    fn q_to_value(q: &ExtReal<f64>) -> serde_json::Value {
        match q {
            ExtReal::Finite(x) => serde_json::json!(x),
            ExtReal::PosInf => serde_json::json!("inf"),
            ExtReal::NegInf => serde_json::json!("-inf"),
        }
    }

    fn q_from_value(v: &serde_json::Value) -> Option<ExtReal<f64>> {
        match v {
            serde_json::Value::Number(n) => n.as_f64().map(ExtReal::Finite),
            serde_json::Value::String(s) => match s.as_str() {
                "inf" | "+inf" => Some(ExtReal::PosInf),
                "-inf" => Some(ExtReal::NegInf),
                _ => None,
            },
            _ => None,
        }
    }

    impl Serialize for MeanSpec<f64> {
        fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
            let wire = match self {
                MeanSpec::QSum(q) => Wire {
                    family: "qSum".into(),
                    q: Some(q_to_value(q)),
                    h: None,
                },
                MeanSpec::QMean(q) => Wire {
                    family: "qMean".into(),
                    q: Some(q_to_value(q)),
                    h: None,
                },
                MeanSpec::QuasiSum(QuasiMap::LnMagicG) => Wire {
                    family: "quasiSum".into(),
                    q: None,
                    h: Some("lnMagicG".into()),
                },
                MeanSpec::QuasiMean(QuasiMap::LnMagicG) => Wire {
                    family: "quasiMean".into(),
                    q: None,
                    h: Some("lnMagicG".into()),
                },
            };
            wire.serialize(serializer)
        }
    }

    impl<'de> Deserialize<'de> for MeanSpec<f64> {
        fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
            let wire = Wire::deserialize(deserializer)?;
            let q = || {
                wire.q
                    .as_ref()
                    .and_then(q_from_value)
                    .ok_or_else(|| D::Error::custom("missing or invalid 'q'"))
            };
            let h = || match wire.h.as_deref() {
                Some("lnMagicG") => Ok(QuasiMap::LnMagicG),
                _ => Err(D::Error::custom("missing or unknown 'h'")),
            };
            match wire.family.as_str() {
                "qSum" => Ok(MeanSpec::QSum(q()?)),
                "qMean" => Ok(MeanSpec::QMean(q()?)),
                "quasiSum" => Ok(MeanSpec::QuasiSum(h()?)),
                "quasiMean" => Ok(MeanSpec::QuasiMean(h()?)),
                other => Err(D::Error::custom(format!("unknown family '{other}'"))),
            }
        }
    }
}
