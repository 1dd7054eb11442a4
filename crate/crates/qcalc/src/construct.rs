//! New spaces from old: subspaces, tensor products, and quotients by
//! subsections (natural-unit reductions).
//!
//! A quotient identifies quantities that differ by an element of a
//! subsection, the image of a coherent section over a subgroup of the
//! dimension group. The construction is legal only when the quotient of
//! dimension groups is free Abelian; torsion is detected through the Smith
//! normal form of the subgroup's generator matrix and reported, never
//! silently patched.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::dim::{require_same_basis, DimBasis, Dimension};
use crate::error::AlgebraError;
use crate::lattice::{QuotientStructure, Subgroup};
use crate::scalar::Scalar;
use crate::section::{Character, Section};
use crate::space::{Quantity, QuantitySpace};

/// A subspace of a quantity space: exactly the preimage of a subgroup of the
/// dimension group. It always contains the whole dimension-one fiber.
#[derive(Debug, Clone)]
pub struct Subspace {
    parent: QuantitySpace,
    subgroup: Subgroup,
    induced: QuantitySpace,
}

impl Subspace {
    pub fn new(parent: &QuantitySpace, subgroup: Subgroup) -> Result<Subspace, AlgebraError> {
        require_same_basis(parent.basis(), subgroup.ambient())?;
        // The subspace is itself a space of quantities over the subgroup's
        // own basis; its generators are named by their expression in the
        // parent group.
        let names: Vec<String> = subgroup
            .basis_dims()
            .iter()
            .map(Dimension::to_string)
            .collect();
        let basis = DimBasis::new(names)?;
        Ok(Subspace {
            parent: parent.clone(),
            subgroup,
            induced: QuantitySpace::new(&basis),
        })
    }

    pub fn parent(&self) -> &QuantitySpace {
        &self.parent
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// The subspace as a quantity space in its own right (rank = subgroup
    /// rank).
    pub fn induced_space(&self) -> &QuantitySpace {
        &self.induced
    }

    pub fn rank(&self) -> usize {
        self.subgroup.rank()
    }

    pub fn contains_dim(&self, d: &Dimension) -> Result<bool, AlgebraError> {
        self.subgroup.contains(d)
    }

    /// A parent quantity lies in the subspace iff its dimension lies in the
    /// subgroup.
    pub fn contains(&self, q: &Quantity) -> Result<bool, AlgebraError> {
        self.subgroup.contains(q.dim())
    }

    /// Rewrites a member of the subspace in induced coordinates; `None` for
    /// parent quantities outside the subspace.
    pub fn restrict(&self, q: &Quantity) -> Result<Option<Quantity>, AlgebraError> {
        match self.subgroup.membership(q.dim())? {
            Some(coords) => {
                let dim = Dimension::new(self.induced.basis(), coords)
                    .expect("membership certificate has subgroup rank");
                Ok(Some(Quantity::new(q.value().clone(), dim)))
            }
            None => Ok(None),
        }
    }

    /// Embeds an induced-space quantity back into the parent.
    pub fn embed(&self, q: &Quantity) -> Result<Quantity, AlgebraError> {
        require_same_basis(self.induced.basis(), q.dim().basis())?;
        let exps = self.subgroup.hnf_basis().apply_row(q.dim().exponents());
        let dim = Dimension::new(self.parent.basis(), exps)
            .expect("embedding lands in the parent group");
        Ok(Quantity::new(q.value().clone(), dim))
    }

    /// Same parent basis and same lattice.
    pub fn same_subspace(&self, other: &Subspace) -> bool {
        self.parent == other.parent && self.subgroup.same_lattice(other.subgroup())
    }
}

/// Tensor product of two quantity spaces. The dimension group is the direct
/// product, realized as the concatenated generator basis; elements are the
/// scalar-product normal forms `(a, A) (x) (b, B) = (a b, (A, B))`.
#[derive(Debug, Clone)]
pub struct TensorProduct {
    left: QuantitySpace,
    right: QuantitySpace,
    space: QuantitySpace,
}

impl TensorProduct {
    /// Fails with `NameCollision` when the factor bases share a generator
    /// name; silent identification would change the group.
    pub fn new(left: &QuantitySpace, right: &QuantitySpace) -> Result<TensorProduct, AlgebraError> {
        for name in right.basis().generators() {
            if left.basis().index_of(name).is_some() {
                return Err(AlgebraError::NameCollision(name.clone()));
            }
        }
        let names: Vec<String> = left
            .basis()
            .generators()
            .iter()
            .chain(right.basis().generators())
            .cloned()
            .collect();
        let basis = DimBasis::new(names)?;
        Ok(TensorProduct {
            left: left.clone(),
            right: right.clone(),
            space: QuantitySpace::new(&basis),
        })
    }

    /// Resolves name collisions by qualifying the colliding generators with
    /// the given factor labels (`geom.L`, `time.L`); non-colliding names are
    /// kept as they are.
    pub fn new_qualified(
        left: &QuantitySpace,
        left_label: &str,
        right: &QuantitySpace,
        right_label: &str,
    ) -> Result<TensorProduct, AlgebraError> {
        let collides = |name: &String| {
            left.basis().index_of(name).is_some() && right.basis().index_of(name).is_some()
        };
        let qualify = |label: &str, names: &[String]| -> Vec<String> {
            names
                .iter()
                .map(|n| {
                    if collides(n) {
                        format!("{label}.{n}")
                    } else {
                        n.clone()
                    }
                })
                .collect()
        };
        let mut names = qualify(left_label, left.basis().generators());
        names.extend(qualify(right_label, right.basis().generators()));
        let basis = DimBasis::new(names)?;
        Ok(TensorProduct {
            left: left.clone(),
            right: right.clone(),
            space: QuantitySpace::new(&basis),
        })
    }

    pub fn left(&self) -> &QuantitySpace {
        &self.left
    }

    pub fn right(&self) -> &QuantitySpace {
        &self.right
    }

    /// The product space; its rank is the sum of the factor ranks.
    pub fn space(&self) -> &QuantitySpace {
        &self.space
    }

    /// The elementary tensor of a pair of factor quantities.
    pub fn elem(&self, a: &Quantity, b: &Quantity) -> Result<Quantity, AlgebraError> {
        if !self.left.contains(a) || !self.right.contains(b) {
            return Err(AlgebraError::SpaceMismatch);
        }
        let exps: Vec<BigInt> = a
            .dim()
            .exponents()
            .iter()
            .chain(b.dim().exponents())
            .cloned()
            .collect();
        let dim = Dimension::new(self.space.basis(), exps)
            .expect("concatenated exponents match the product basis");
        Ok(Quantity::new(a.value() * b.value(), dim))
    }

    /// Embeds a left-factor quantity as `q (x) 1`.
    pub fn embed_left(&self, a: &Quantity) -> Result<Quantity, AlgebraError> {
        self.elem(a, &self.right.one())
    }

    /// Embeds a right-factor quantity as `1 (x) r`.
    pub fn embed_right(&self, b: &Quantity) -> Result<Quantity, AlgebraError> {
        self.elem(&self.left.one(), b)
    }
}

/// The restriction of a nonzero coherent section to a subgroup of the
/// dimension group. Its image is the set quotiented out in natural-unit
/// reductions; it always contains the identity quantity.
#[derive(Debug, Clone)]
pub struct Subsection {
    section: Section,
    subgroup: Subgroup,
}

impl Subsection {
    pub fn new(section: Section, subgroup: Subgroup) -> Result<Subsection, AlgebraError> {
        if !section.is_coherent() {
            return Err(AlgebraError::NotCoherent);
        }
        require_same_basis(section.basis(), subgroup.ambient())?;
        Ok(Subsection { section, subgroup })
    }

    pub fn section(&self) -> &Section {
        &self.section
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// Membership in the image: `q` must be the section's value on a fiber
    /// inside the subgroup.
    pub fn contains(&self, q: &Quantity) -> Result<bool, AlgebraError> {
        if !self.subgroup.contains(q.dim())? {
            return Ok(false);
        }
        Ok(*q == self.section.eval(q.dim())?)
    }
}

/// A quotient space: quantities of the source identified when they differ by
/// an element of the subsection. Only constructible when the quotient of
/// dimension groups is free Abelian; the error carries the offending
/// invariant factors otherwise.
#[derive(Debug, Clone)]
pub struct QuotientSpace {
    source: QuantitySpace,
    subsection: Subsection,
    structure: QuotientStructure,
    quotient: QuantitySpace,
}

impl QuotientSpace {
    pub fn new(source: &QuantitySpace, subsection: Subsection) -> Result<QuotientSpace, AlgebraError> {
        require_same_basis(source.basis(), subsection.section().basis())?;
        let structure = subsection.subgroup().quotient_structure();
        if !structure.is_free() {
            return Err(AlgebraError::TorsionQuotient(structure.torsion().to_vec()));
        }
        // Freeness makes the subgroup a direct summand; the complement rows
        // of the adapted basis descend to a basis of the quotient group,
        // named by their source expressions.
        let names: Vec<String> = structure
            .complement_rows()
            .into_iter()
            .map(|row| {
                Dimension::new(source.basis(), row)
                    .expect("adapted rows have ambient rank")
                    .to_string()
            })
            .collect();
        let basis = DimBasis::new(names)?;
        Ok(QuotientSpace {
            source: source.clone(),
            subsection,
            structure,
            quotient: QuantitySpace::new(&basis),
        })
    }

    pub fn source(&self) -> &QuantitySpace {
        &self.source
    }

    pub fn subsection(&self) -> &Subsection {
        &self.subsection
    }

    pub fn structure(&self) -> &QuotientStructure {
        &self.structure
    }

    /// The quotient as a quantity space; its rank is the source rank minus
    /// the subgroup rank.
    pub fn quotient_space(&self) -> &QuantitySpace {
        &self.quotient
    }

    /// The induced projection of dimension groups.
    pub fn project_dim(&self, d: &Dimension) -> Result<Dimension, AlgebraError> {
        require_same_basis(self.source.basis(), d.basis())?;
        let split = self.structure.decompose(d.exponents());
        Ok(Dimension::new(self.quotient.basis(), split.quotient_coords)
            .expect("quotient coordinates match the quotient basis"))
    }

    /// Canonical representative of the class of `q`: the subgroup component
    /// of the dimension is absorbed into the value through the subsection's
    /// character, so equivalent quantities map to the identical result.
    pub fn reduce(&self, q: &Quantity) -> Result<Quantity, AlgebraError> {
        require_same_basis(self.source.basis(), q.dim().basis())?;
        let split = self.structure.decompose(q.dim().exponents());
        let chi = self.subsection.section().character();
        let absorbed = chi.eval_exponents(&split.subgroup_part);
        let value = q.value() / &absorbed;
        let dim = Dimension::new(self.quotient.basis(), split.quotient_coords)
            .expect("quotient coordinates match the quotient basis");
        Ok(Quantity::new(value, dim))
    }
}

/// Builds the coherent section on a full space that restricts to prescribed
/// values on the generators of a subgroup, extended by 1 on a complement.
///
/// `values[i]` is the required section value on the dimension given by row
/// `i` of the subgroup's generator matrix. Fails with `ConflictingSection`
/// when the requirements are multiplicatively inconsistent (e.g. two
/// generators with equal dimension but different values) and with
/// `TorsionQuotient` when the subgroup does not split off freely.
pub fn section_through(
    subgroup: &Subgroup,
    values: &[Scalar],
) -> Result<Section, AlgebraError> {
    let gens = subgroup.generators();
    assert_eq!(values.len(), gens.rows(), "one value per generator row");
    if values.iter().any(Scalar::is_zero) {
        return Err(AlgebraError::ZeroSectionValue);
    }
    let snf = subgroup.snf();
    let structure = subgroup.quotient_structure();
    if !structure.is_free() {
        return Err(AlgebraError::TorsionQuotient(structure.torsion().to_vec()));
    }

    // Integer relations among the generator rows force multiplicative
    // relations among the prescribed values.
    let relations = gens.kernel_basis();
    for i in 0..relations.rows() {
        let mut product = Scalar::one();
        for (j, coeff) in relations.row(i).iter().enumerate() {
            let factor = values[j]
                .pow(coeff)
                .expect("prescribed values are nonzero");
            product = &product * &factor;
        }
        if !product.is_one() {
            let combo: Vec<String> = relations
                .row(i)
                .iter()
                .zip(0..)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, j)| format!("g{j}^{c}"))
                .collect();
            return Err(AlgebraError::ConflictingSection(format!(
                "the relation {} = 1 among the generators forces the value {}, not 1",
                combo.join(" "),
                product
            )));
        }
    }

    // With all invariant factors 1, row i of U expresses the i-th adapted
    // basis vector as an integer combination of the generator rows; the
    // character value there is the matching product of prescribed values.
    // Complement vectors get the value 1.
    let rank = subgroup.rank();
    let ambient_rank = subgroup.ambient().rank();
    let mut w_values = Vec::with_capacity(ambient_rank);
    for i in 0..ambient_rank {
        if i < rank {
            let mut value = Scalar::one();
            for (j, coeff) in snf.u.row(i).iter().enumerate() {
                let factor = values[j].pow(coeff).expect("values are nonzero");
                value = &value * &factor;
            }
            w_values.push(value);
        } else {
            w_values.push(Scalar::one());
        }
    }

    // Generator j of the ambient basis has adapted coordinates row j of V.
    let coords = &snf.v;
    let mut gen_values = Vec::with_capacity(ambient_rank);
    for j in 0..ambient_rank {
        let mut value = Scalar::one();
        for i in 0..ambient_rank {
            let factor = w_values[i]
                .pow(&coords[(j, i)])
                .expect("character values are nonzero");
            value = &value * &factor;
        }
        gen_values.push(value);
    }
    let character = Character::new(subgroup.ambient(), gen_values)?;
    Ok(Section::coherent(character))
}
