//! Plane binary trees and the stationary state of the open-boundary TASEP.
//!
//! The stationary weight of a configuration is the sum of `a^l b^r`
//! (`a = 1/α`, `b = 1/β`) over the trees reducing to it. The crate builds the
//! trees, the marked-tree permutation that proves the balance equations, an
//! exact master-equation oracle and simulator to check against, and the
//! correspondence with Catalan tableaux.

pub mod bijection;
pub mod check;
pub mod config;
pub mod count;
pub mod error;
pub mod export;
pub mod marked;
pub mod oracle;
pub mod rates;
pub mod simulate;
pub mod tableaux;
pub mod tree;
pub mod verify;
pub mod weights;

pub use bijection::{cycle_decomposition, pi, sigma};
pub use check::CheckReport;
pub use config::{active_bonds, Bond, Configuration, Site};
pub use error::{Error, Result};
pub use marked::{enumerate_marked, MarkedTree};
pub use oracle::{build_generator, density_profile, solve_stationary, Generator, StationaryDistribution};
pub use rates::{Rate, Rates};
pub use simulate::{simulate, total_variation, SimulationRun};
pub use tableaux::{enumerate_catalan_tableaux, lattice_path, phi, phi_inverse, validate_tableau, Tableau, YoungDiagram};
pub use tree::{enumerate_trees, Node, Side, Tree};
pub use verify::Suite;
pub use weights::{
    flux_set, mu, mu_hat, stationary_weights, FluxTable, StationaryWeights, WeightMonomial, WeightPolynomial,
};
