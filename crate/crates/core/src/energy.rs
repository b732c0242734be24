//! Complex energy values.
//!
//! Resonances live at complex energies `z = E_R - i*Gamma/2`; scattering
//! amplitudes and wavefunctions are evaluated off the real axis routinely.
//! [`ComplexEnergy`] is a thin validated wrapper around
//! [`num_complex::Complex64`] that guarantees both parts are finite, so the
//! numerical layers never have to re-check for NaN or infinity.

use std::fmt;

use num_complex::Complex64;
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Result, ToolkitError};

/// A complex energy with finite real and imaginary parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexEnergy(Complex64);

impl ComplexEnergy {
    /// Creates a complex energy, rejecting NaN or infinite components.
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(ToolkitError::invalid_model("complex energy must be finite")
                .with("re", re)
                .with("im", im));
        }
        Ok(ComplexEnergy(Complex64::new(re, im)))
    }

    /// Wraps an existing complex number, applying the same finiteness check.
    pub fn from_c64(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    /// A purely real energy.
    pub fn real(re: f64) -> Result<Self> {
        Self::new(re, 0.0)
    }

    /// Real part.
    pub fn re(&self) -> f64 {
        self.0.re
    }

    /// Imaginary part.
    pub fn im(&self) -> f64 {
        self.0.im
    }

    /// The underlying complex value.
    pub fn value(&self) -> Complex64 {
        self.0
    }
}

impl From<ComplexEnergy> for Complex64 {
    fn from(e: ComplexEnergy) -> Complex64 {
        e.0
    }
}

impl fmt::Display for ComplexEnergy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.im >= 0.0 {
            write!(f, "{}+{}i", self.0.re, self.0.im)
        } else {
            write!(f, "{}{}i", self.0.re, self.0.im)
        }
    }
}

impl Serialize for ComplexEnergy {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ComplexEnergy", 2)?;
        s.serialize_field("re", &self.0.re)?;
        s.serialize_field("im", &self.0.im)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for ComplexEnergy {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(field_identifier, rename_all = "lowercase")]
        enum Field {
            Re,
            Im,
        }

        struct EnergyVisitor;

        impl<'de> Visitor<'de> for EnergyVisitor {
            type Value = ComplexEnergy;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an object with finite numeric fields `re` and `im`")
            }

            fn visit_map<A: MapAccess<'de>>(
                self,
                mut map: A,
            ) -> std::result::Result<ComplexEnergy, A::Error> {
                let mut re: Option<f64> = None;
                let mut im: Option<f64> = None;
                while let Some(key) = map.next_key()? {
                    match key {
                        Field::Re => re = Some(map.next_value()?),
                        Field::Im => im = Some(map.next_value()?),
                    }
                }
                let re = re.ok_or_else(|| de::Error::missing_field("re"))?;
                let im = im.ok_or_else(|| de::Error::missing_field("im"))?;
                ComplexEnergy::new(re, im).map_err(|e| de::Error::custom(e.to_string()))
            }
        }

        deserializer.deserialize_struct("ComplexEnergy", &["re", "im"], EnergyVisitor)
    }
}
