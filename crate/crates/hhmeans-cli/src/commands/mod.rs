pub mod mean;
pub mod report;
pub mod scan;
pub mod verify;
