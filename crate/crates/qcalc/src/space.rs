//! The standard model of a space of quantities free of zero divisors.
//!
//! A quantity is a pair of an exact rational value and a dimension; the
//! projection onto the dimension is a monoid homomorphism for the product,
//! and each fiber (the set of quantities sharing one dimension) is a
//! one-dimensional vector space over the rationals. Every fiber carries its
//! own zero: `(0, A)` and `(0, B)` are different quantities when `A != B`.

use std::fmt;
use std::sync::Arc;

use crate::dim::{require_same_basis, DimBasis, Dimension};
use crate::error::AlgebraError;
use crate::scalar::Scalar;

/// A space of quantities over a dimension group, in the standard
/// representation value-times-dimension. The scalar field is fixed to exact
/// rationals.
#[derive(Debug, Clone)]
pub struct QuantitySpace {
    basis: Arc<DimBasis>,
}

impl PartialEq for QuantitySpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.basis, &other.basis) || self.basis == other.basis
    }
}

impl Eq for QuantitySpace {}

impl QuantitySpace {
    pub fn new(basis: &Arc<DimBasis>) -> QuantitySpace {
        QuantitySpace {
            basis: Arc::clone(basis),
        }
    }

    pub fn basis(&self) -> &Arc<DimBasis> {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    /// The multiplicative identity `(1, 1)`.
    pub fn one(&self) -> Quantity {
        Quantity {
            value: Scalar::one(),
            dimension: Dimension::identity(&self.basis),
        }
    }

    /// The zero of the fiber over `dim`.
    pub fn zero(&self, dim: &Dimension) -> Result<Quantity, AlgebraError> {
        require_same_basis(&self.basis, dim.basis())?;
        Ok(Quantity {
            value: Scalar::zero(),
            dimension: dim.clone(),
        })
    }

    pub fn quantity(&self, value: Scalar, dim: &Dimension) -> Result<Quantity, AlgebraError> {
        require_same_basis(&self.basis, dim.basis())?;
        Ok(Quantity {
            value,
            dimension: dim.clone(),
        })
    }

    pub fn contains(&self, q: &Quantity) -> bool {
        self.basis == *q.dim().basis()
    }
}

/// A quantity: exact rational value paired with its dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quantity {
    value: Scalar,
    dimension: Dimension,
}

impl Quantity {
    pub fn new(value: Scalar, dimension: Dimension) -> Quantity {
        Quantity { value, dimension }
    }

    pub fn value(&self) -> &Scalar {
        &self.value
    }

    /// The dimension of the quantity; surjective over all constructible
    /// dimensions, and a monoid homomorphism with respect to the product.
    pub fn dim(&self) -> &Dimension {
        &self.dimension
    }

    /// A quantity is zero exactly when its value is zero; the dimension is
    /// retained, each fiber having its own zero.
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Fiber addition. Defined only within a fiber: adding across fibers is
    /// the dimensional-homogeneity error.
    pub fn add(&self, other: &Quantity) -> Result<Quantity, AlgebraError> {
        require_same_basis(self.dimension.basis(), other.dimension.basis())?;
        if self.dimension != other.dimension {
            return Err(AlgebraError::FiberMismatch {
                left: self.dimension.to_string(),
                right: other.dimension.to_string(),
            });
        }
        Ok(Quantity {
            value: &self.value + &other.value,
            dimension: self.dimension.clone(),
        })
    }

    pub fn sub(&self, other: &Quantity) -> Result<Quantity, AlgebraError> {
        self.add(&other.scale(&-Scalar::one()))
    }

    /// Scalar multiple within the fiber.
    pub fn scale(&self, alpha: &Scalar) -> Quantity {
        Quantity {
            value: alpha * &self.value,
            dimension: self.dimension.clone(),
        }
    }

    /// Global product: values multiply, dimensions multiply.
    pub fn mul(&self, other: &Quantity) -> Result<Quantity, AlgebraError> {
        Ok(Quantity {
            value: &self.value * &other.value,
            dimension: self.dimension.mul(&other.dimension)?,
        })
    }

    /// Multiplicative inverse; every nonzero quantity has one.
    pub fn inv(&self) -> Result<Quantity, AlgebraError> {
        let value = self.value.recip().ok_or(AlgebraError::ZeroNotInvertible)?;
        Ok(Quantity {
            value,
            dimension: self.dimension.inv(),
        })
    }

    /// Integer power; negative powers require a nonzero value.
    pub fn powi(&self, n: i64) -> Result<Quantity, AlgebraError> {
        let value = self
            .value
            .powi(n)
            .ok_or(AlgebraError::ZeroNotInvertible)?;
        Ok(Quantity {
            value,
            dimension: self.dimension.powi(n),
        })
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.value, self.dimension)
    }
}
