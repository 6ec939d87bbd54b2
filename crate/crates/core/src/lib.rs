//! Per-customer assortment optimization for a crowdfunding platform.
//!
//! Customers in segment `j` back product `i` with a binary-logit probability
//! whose mean utility grows with the total support mass the product already
//! attracts. The support matrix is the largest fixed point of that map, and
//! the platform picks the size-`k` assortment maximizing expected revenue.
//! On top of the exact optimizer sits a seeded instance generator and a
//! linear-regression predictor that learns assortments from parameters.

pub mod assortment;
pub mod choice;
pub mod dataset;
pub mod error;
pub mod exact;
pub mod generate;
pub mod learner;
pub mod matrix;
pub mod model;
pub mod solver;

pub use assortment::{
    expected_revenue, optimize_assortment, revenue_ordered_oracle, Assortment, AssortmentMode,
    Optimum,
};
pub use choice::{choice_probability, logistic, mean_utility, total_support_mass};
pub use error::{Error, Result};
pub use exact::{cmp_sums, exact_sum};
pub use generate::{generate_dataset, generate_instance, record_seed, FMode, GenSpec};
pub use dataset::{read_dataset, write_dataset, LabeledDataset, LabeledRecord};
pub use matrix::Matrix;
pub use model::{ProblemInstance, RevenueTerms};
pub use solver::{largest_fixed_point, solve_fixed_point, support_map, Start, SupportIteration, SupportSolution, DEFAULT_MAX_ITER, DEFAULT_TOL};
