pub mod algebra;
pub mod cert;
pub mod clifford;
pub mod config;
pub mod elements;
pub mod field;
pub mod forms;
pub mod linalg;
pub mod local;
pub mod quaternion;
pub mod search;
pub mod suites;
