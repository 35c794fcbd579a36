//! Wire representation of scalars shared by the JSON formats.
//!
//! Real-field values are plain numbers, complex-field values are
//! `[re, im]` pairs. Floats go through shortest round-trip formatting and
//! correctly rounded parsing, so parse/serialize is bit-exact.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::series::Field;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum Scalar {
    Real(f64),
    Complex([f64; 2]),
}

impl Scalar {
    pub(crate) fn from_field(c: Complex64, field: Field) -> Self {
        match field {
            Field::Real => Scalar::Real(c.re),
            Field::Complex => Scalar::Complex([c.re, c.im]),
        }
    }

    pub(crate) fn to_field(self, field: Field) -> Result<Complex64> {
        match (self, field) {
            (Scalar::Real(x), Field::Real) => Ok(Complex64::new(x, 0.0)),
            (Scalar::Complex([re, im]), Field::Complex) => Ok(Complex64::new(re, im)),
            (Scalar::Real(_), Field::Complex) => Err(LabError::Parse(
                "complex-field entries must be [re, im] pairs".into(),
            )),
            (Scalar::Complex(_), Field::Real) => Err(LabError::Parse(
                "real-field entries must be plain numbers".into(),
            )),
        }
    }
}

/// Complex number as a `[re, im]` pair.
pub(crate) mod pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq([c.re, c.im])
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

pub(crate) mod pair_vec {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|c| [c.re, c.im]))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let v = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}
