pub mod lfunc;
pub mod moments;
pub mod oracle;
pub mod verify;
