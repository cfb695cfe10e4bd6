pub mod analyze;
pub mod bounds;
pub mod construct;
pub mod convert;
pub mod search;
pub mod verify;
