//! Bundled index recipes.

pub mod drought;
pub mod gggi;
pub mod pet;

pub use drought::{idx_spei, idx_spi, spei_recipe, spi_recipe, SpeiParams, SpiParams};
pub use gggi::{gggi_recipe, gggi_weights, idx_gggi, GggiMode, GggiParams, GggiWeight};
pub use pet::{pet_thornthwaite, PetSpec};
