//! Presheaves over a finite base category of Boolean algebras.
//!
//! A [`CoordinatizationModel`] is a finite category whose objects carry
//! Boolean algebras and whose arrows carry Boolean homs, i.e. a functor
//! `A` into Boolean algebras. Over its base this module provides set-valued
//! presheaves, their category of elements, natural transformations, the
//! hom-presheaf `R(L)` of an event algebra, the tensor product `X ⊗ A`, and
//! a finite check of the adjunction `Nat(X, R(L)) ≅ Hom(X ⊗ A, L)`.

mod adjunction;
mod category;
mod elements;
mod hom_presheaf;
mod model;
mod nat;
mod set_presheaf;
mod tensor;

pub use adjunction::{adjunction_bijection, enumerate_cocone_maps, AdjunctionReport};
pub use category::{validate_category, Arrow, ArrowId, CategoryLaw, FiniteCategory, Object};
pub use elements::{category_of_elements, ElementArrow, ElementsCategory};
pub use hom_presheaf::{chart_label, hom_presheaf, HomPresheaf, MAX_HOM_PRESHEAF_POINTS};
pub use model::{validate_model, CoordinatizationModel, FunctorLaw, MAX_MODEL_ATOMS};
pub use nat::{
    enumerate_natural_transformations, naturality_witness, yoneda_full_faithful_check, NaturalTransformation,
    YonedaCheck, MAX_NATURAL_TRANSFORMATIONS,
};
pub use set_presheaf::{validate_presheaf, PresheafLaw, SetPresheaf};
pub use tensor::{tensor_product, unit_representable_iso, TensorPair, TensorQuotient, UnitReport, MAX_TENSOR_PAIRS};
