//! Restrained GANs for numeric data augmentation.
//!
//! The crate is organised bottom-up:
//!
//! - [`nn`]: a small dense feed-forward engine (forward with inverted dropout,
//!   reverse-mode gradients, RMSProp/SGD updates, weight clipping).
//! - [`topology`]: the four statically restrained generator/discriminator
//!   topology patterns and the SR similarity metric.
//! - [`restraint`]: kernel MMD, running min-max normalisation of the quality
//!   index and the piecewise dropout-rate function driving dynamic restraint.
//! - [`gan`]: vanilla and Wasserstein adversarial training with static or
//!   dynamic restraint.
//! - [`augment`]: SMOTE and GAN based minority oversampling.
//! - [`classifiers`]: ANN, linear SVM, KNN, random forest, gradient boosting
//!   and the Mann-Whitney AUC.
//!
//! All randomness is driven by explicit `u64` seeds; see [`seed`].

// `!(x > 0.0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod augment;
pub mod classifiers;
pub mod dataset;
pub mod error;
pub mod gan;
pub mod nn;
pub mod restraint;
pub mod seed;
pub mod topology;

pub use dataset::LabeledDataset;
pub use error::{Error, Result};
