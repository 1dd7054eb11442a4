//! Systems of units as nonzero sections.
//!
//! A section picks one nonzero quantity in every fiber. A coherent section
//! is determined by a multiplicative character on the dimension group; a
//! section over an infinite group cannot be tabulated, so the representation
//! here is a character (the coherent core) plus a finite table of
//! per-dimension overrides for the non-coherent case. Unit names live in the
//! CLI layer; this module is nameless and purely algebraic.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::dim::{require_same_basis, DimBasis, Dimension};
use crate::error::AlgebraError;
use crate::scalar::Scalar;
use crate::space::Quantity;

/// A group homomorphism from the dimension group into the nonzero rationals,
/// determined by its (nonzero) values on the basis generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    basis: Arc<DimBasis>,
    values: Vec<Scalar>,
}

impl Character {
    pub fn new(basis: &Arc<DimBasis>, values: Vec<Scalar>) -> Result<Character, AlgebraError> {
        if values.len() != basis.rank() {
            return Err(AlgebraError::ExponentCount {
                expected: basis.rank(),
                got: values.len(),
            });
        }
        if values.iter().any(Scalar::is_zero) {
            return Err(AlgebraError::ZeroSectionValue);
        }
        Ok(Character {
            basis: Arc::clone(basis),
            values,
        })
    }

    /// The trivial character: every generator maps to 1.
    pub fn trivial(basis: &Arc<DimBasis>) -> Character {
        Character {
            basis: Arc::clone(basis),
            values: vec![Scalar::one(); basis.rank()],
        }
    }

    pub fn basis(&self) -> &Arc<DimBasis> {
        &self.basis
    }

    pub fn generator_values(&self) -> &[Scalar] {
        &self.values
    }

    /// Multiplicative evaluation on an arbitrary group element.
    pub fn eval(&self, d: &Dimension) -> Result<Scalar, AlgebraError> {
        require_same_basis(&self.basis, d.basis())?;
        Ok(self.eval_exponents(d.exponents()))
    }

    pub(crate) fn eval_exponents(&self, exponents: &[BigInt]) -> Scalar {
        let mut out = Scalar::one();
        for (value, exp) in self.values.iter().zip(exponents) {
            let factor = value
                .pow(exp)
                .expect("character values are nonzero, every power exists");
            out = &out * &factor;
        }
        out
    }

    /// Pointwise inverse character.
    pub fn inverse(&self) -> Character {
        Character {
            basis: Arc::clone(&self.basis),
            values: self
                .values
                .iter()
                .map(|v| v.recip().expect("character values are nonzero"))
                .collect(),
        }
    }
}

/// A nonzero section: one nonzero quantity per fiber, represented as a
/// character plus finitely many overrides. The section is coherent exactly
/// when the override table is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    character: Character,
    overrides: BTreeMap<Vec<BigInt>, Scalar>,
}

impl Section {
    /// A coherent section from its character.
    pub fn coherent(character: Character) -> Section {
        Section {
            character,
            overrides: BTreeMap::new(),
        }
    }

    /// Replaces the section's value on one fiber. The value must be nonzero;
    /// a zero would make the section select a fiber zero.
    pub fn with_override(
        mut self,
        dim: &Dimension,
        value: Scalar,
    ) -> Result<Section, AlgebraError> {
        require_same_basis(self.character.basis(), dim.basis())?;
        if value.is_zero() {
            return Err(AlgebraError::ZeroSectionValue);
        }
        self.overrides.insert(dim.exponents().to_vec(), value);
        Ok(self)
    }

    pub fn is_coherent(&self) -> bool {
        self.overrides.is_empty()
    }

    pub fn character(&self) -> &Character {
        &self.character
    }

    pub fn basis(&self) -> &Arc<DimBasis> {
        self.character.basis()
    }

    pub fn overrides(&self) -> impl Iterator<Item = (&[BigInt], &Scalar)> {
        self.overrides.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// The scalar value the section assigns on a fiber.
    pub fn value_at(&self, d: &Dimension) -> Result<Scalar, AlgebraError> {
        require_same_basis(self.character.basis(), d.basis())?;
        if let Some(v) = self.overrides.get(d.exponents()) {
            return Ok(v.clone());
        }
        Ok(self.character.eval_exponents(d.exponents()))
    }

    /// Evaluates the section: the chosen unit quantity of the fiber over
    /// `d`. Never a zero, and its dimension is `d` itself.
    pub fn eval(&self, d: &Dimension) -> Result<Quantity, AlgebraError> {
        Ok(Quantity::new(self.value_at(d)?, d.clone()))
    }

    /// Numerical value of `q` with respect to this system of units:
    /// `q` times the inverse of its fiber's unit, identified with a scalar.
    pub fn nu(&self, q: &Quantity) -> Result<Scalar, AlgebraError> {
        let unit_value = self.value_at(q.dim())?;
        Ok(q.value() / &unit_value)
    }

    /// The unit-of map: the section evaluated at the dimension of `q`.
    pub fn unit_of(&self, q: &Quantity) -> Result<Quantity, AlgebraError> {
        self.eval(q.dim())
    }

    /// Maxwell decomposition `q = {q} [q]`: the numerical value and the
    /// unit, whose product reconstructs `q` exactly.
    pub fn maxwell(&self, q: &Quantity) -> Result<(Scalar, Quantity), AlgebraError> {
        Ok((self.nu(q)?, self.unit_of(q)?))
    }
}

/// Conversion factor within one fiber: the scalar `beta` with
/// `q == beta * target_unit`.
pub fn convert(q: &Quantity, target_unit: &Quantity) -> Result<Scalar, AlgebraError> {
    require_same_basis(q.dim().basis(), target_unit.dim().basis())?;
    if q.dim() != target_unit.dim() {
        return Err(AlgebraError::FiberMismatch {
            left: q.dim().to_string(),
            right: target_unit.dim().to_string(),
        });
    }
    if target_unit.is_zero() {
        return Err(AlgebraError::ZeroUnit);
    }
    Ok(q.value() / target_unit.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::QuantitySpace;
    use proptest::prelude::*;

    fn space() -> QuantitySpace {
        QuantitySpace::new(&DimBasis::new(["L", "T"]).unwrap())
    }

    fn d(sp: &QuantitySpace, exps: &[i64]) -> Dimension {
        Dimension::from_exponents(sp.basis(), exps).unwrap()
    }

    fn s(p: i64, q: i64) -> Scalar {
        Scalar::ratio(p, q).unwrap()
    }

    #[test]
    fn character_is_multiplicative() {
        let sp = space();
        let chi = Character::new(sp.basis(), vec![s(2, 1), s(3, 1)]).unwrap();
        let a = d(&sp, &[1, -1]);
        let b = d(&sp, &[2, 1]);
        assert_eq!(
            chi.eval(&a.mul(&b).unwrap()).unwrap(),
            &chi.eval(&a).unwrap() * &chi.eval(&b).unwrap()
        );
        assert_eq!(chi.eval(&Dimension::identity(sp.basis())).unwrap(), Scalar::one());
        assert!(Character::new(sp.basis(), vec![s(2, 1), Scalar::zero()]).is_err());
    }

    #[test]
    fn section_eval_cases() {
        let sp = space();
        let sigma = Section::coherent(Character::trivial(sp.basis()));
        let v = d(&sp, &[1, -1]);
        assert_eq!(sigma.eval(&v).unwrap(), Quantity::new(Scalar::one(), v.clone()));
        assert_eq!(sigma.eval(&Dimension::identity(sp.basis())).unwrap(), sp.one());

        // the speed-of-light section: override the velocity fiber
        let c = 299792458i64;
        let sigma_c = sigma.with_override(&v, Scalar::from_int(c)).unwrap();
        assert_eq!(
            sigma_c.eval(&v).unwrap(),
            Quantity::new(Scalar::from_int(c), v.clone())
        );
        assert!(!sigma_c.is_coherent());
        // the override is per-fiber: neighbours are untouched
        assert_eq!(sigma_c.value_at(&v.powi(2)).unwrap(), Scalar::one());
        assert!(sigma_c
            .clone()
            .with_override(&v, Scalar::zero())
            .is_err());
    }

    #[test]
    fn nu_examples() {
        let sp = space();
        let l = d(&sp, &[1, 0]);
        let sigma = Section::coherent(Character::trivial(sp.basis()))
            .with_override(&l, s(2, 1))
            .unwrap();
        let q = sp.quantity(Scalar::from_int(6), &l).unwrap();
        assert_eq!(sigma.nu(&q).unwrap(), s(3, 1));
        assert_eq!(sigma.nu(&sigma.eval(&l).unwrap()).unwrap(), Scalar::one());
        assert_eq!(sigma.nu(&sp.zero(&l).unwrap()).unwrap(), Scalar::zero());
    }

    #[test]
    fn unit_of_is_constant_on_fibers() {
        let sp = space();
        let v = d(&sp, &[1, -1]);
        let c = Scalar::from_int(299792458);
        let sigma = Section::coherent(Character::trivial(sp.basis()))
            .with_override(&v, c.clone())
            .unwrap();
        let q1 = sp.quantity(s(7, 1), &v).unwrap();
        let q2 = sp.quantity(s(-3, 2), &v).unwrap();
        let unit = sigma.unit_of(&q1).unwrap();
        assert_eq!(unit, Quantity::new(c, v.clone()));
        let combo = q1.scale(&s(5, 3)).add(&q2.scale(&s(1, 4))).unwrap();
        assert_eq!(sigma.unit_of(&combo).unwrap(), unit);
        assert_eq!(sigma.unit_of(&q2).unwrap(), unit);
        assert_eq!(
            sigma.unit_of(&sp.one()).unwrap(),
            sp.one()
        );
    }

    #[test]
    fn maxwell_reconstructs() {
        let sp = space();
        let l = d(&sp, &[1, 0]);
        let sigma = Section::coherent(Character::trivial(sp.basis()))
            .with_override(&l, s(2, 1))
            .unwrap();
        let q = sp.quantity(Scalar::from_int(6), &l).unwrap();
        let (num, unit) = sigma.maxwell(&q).unwrap();
        assert_eq!(num, s(3, 1));
        assert_eq!(unit.scale(&num), q);

        let (num, unit) = sigma.maxwell(&sigma.eval(&l).unwrap()).unwrap();
        assert_eq!(num, Scalar::one());
        assert_eq!(unit, sigma.eval(&l).unwrap());

        let zero = sp.zero(&l).unwrap();
        let (num, unit) = sigma.maxwell(&zero).unwrap();
        assert_eq!(num, Scalar::zero());
        assert_eq!(unit.scale(&num), zero);
    }

    #[test]
    fn convert_cases() {
        let sp = space();
        let v = d(&sp, &[1, -1]);
        // 1 km/h expressed in coherent m-s units, converted to the m/s unit
        let kmh = sp.quantity(s(1000, 3600), &v).unwrap();
        let ms = sp.quantity(Scalar::one(), &v).unwrap();
        assert_eq!(convert(&kmh, &ms).unwrap(), s(5, 18));
        assert_eq!(convert(&ms, &ms).unwrap(), Scalar::one());
        let l = d(&sp, &[1, 0]);
        let three_l = sp.quantity(s(3, 1), &l).unwrap();
        assert!(matches!(
            convert(&three_l, &sp.zero(&l).unwrap()),
            Err(AlgebraError::ZeroUnit)
        ));
        assert!(matches!(
            convert(&three_l, &ms),
            Err(AlgebraError::FiberMismatch { .. })
        ));
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (-12i64..=12, 1i64..=12).prop_map(|(p, q)| Scalar::ratio(p, q).unwrap())
    }

    fn arb_nonzero() -> impl Strategy<Value = Scalar> {
        (prop_oneof![-12i64..=-1, 1i64..=12], 1i64..=12)
            .prop_map(|(p, q)| Scalar::ratio(p, q).unwrap())
    }

    fn arb_section() -> impl Strategy<Value = Section> {
        (
            proptest::collection::vec(arb_nonzero(), 2),
            proptest::option::of((proptest::collection::vec(-3i64..=3, 2), arb_nonzero())),
        )
            .prop_map(|(values, ov)| {
                let basis = DimBasis::new(["L", "T"]).unwrap();
                let mut sec = Section::coherent(Character::new(&basis, values).unwrap());
                if let Some((exps, value)) = ov {
                    let dim = Dimension::from_exponents(&basis, &exps).unwrap();
                    sec = sec.with_override(&dim, value).unwrap();
                }
                sec
            })
    }

    proptest! {
        #[test]
        fn nu_is_fiberwise_linear(
            sec in arb_section(),
            a in arb_scalar(), b in arb_scalar(),
            alpha in arb_scalar(), beta in arb_scalar(),
            exps in proptest::collection::vec(-3i64..=3, 2)
        ) {
            let sp = space();
            let dim = d(&sp, &exps);
            let q1 = sp.quantity(a, &dim).unwrap();
            let q2 = sp.quantity(b, &dim).unwrap();
            let combo = q1.scale(&alpha).add(&q2.scale(&beta)).unwrap();
            let lhs = sec.nu(&combo).unwrap();
            let rhs = &(&alpha * &sec.nu(&q1).unwrap()) + &(&beta * &sec.nu(&q2).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn reconstruction_is_exact(
            sec in arb_section(),
            a in arb_scalar(),
            exps in proptest::collection::vec(-3i64..=3, 2)
        ) {
            let sp = space();
            let dim = d(&sp, &exps);
            let q = sp.quantity(a, &dim).unwrap();
            let (num, unit) = sec.maxwell(&q).unwrap();
            prop_assert_eq!(unit.scale(&num), q);
        }

        #[test]
        fn coherent_sections_are_multiplicative(
            values in proptest::collection::vec(arb_nonzero(), 2),
            a in arb_scalar(), b in arb_scalar(),
            e1 in proptest::collection::vec(-3i64..=3, 2),
            e2 in proptest::collection::vec(-3i64..=3, 2)
        ) {
            let sp = space();
            let sec = Section::coherent(Character::new(sp.basis(), values).unwrap());
            let q = sp.quantity(a, &d(&sp, &e1)).unwrap();
            let r = sp.quantity(b, &d(&sp, &e2)).unwrap();
            let qr = q.mul(&r).unwrap();
            prop_assert_eq!(
                sec.nu(&qr).unwrap(),
                &sec.nu(&q).unwrap() * &sec.nu(&r).unwrap()
            );
            prop_assert_eq!(
                sec.unit_of(&qr).unwrap(),
                sec.unit_of(&q).unwrap().mul(&sec.unit_of(&r).unwrap()).unwrap()
            );
        }
    }
}
