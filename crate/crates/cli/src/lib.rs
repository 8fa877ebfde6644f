//! Document store, REST gateway and command-line front end for deontix.

pub mod api;
pub mod cli;
pub mod error;
pub mod reports;
pub mod store;

pub use api::{router, AppState};
pub use error::ApiError;
pub use store::{Store, StoreRecord};
