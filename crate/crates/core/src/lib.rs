pub mod error;
pub mod ft;
pub mod geom;
pub mod hull;
pub mod io;
pub mod oracle;
pub mod plane;
pub mod subgradient;
pub mod sylvester;
pub mod threeball;

pub use error::{Error, Result};
pub use geom::{Ball, Point};
