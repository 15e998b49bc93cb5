pub mod autos;
pub mod exterior;
pub mod gammal;
pub mod ffield;
pub mod files;
pub mod fplinalg;
pub mod groups;
pub mod selftest;
