//! Output formats and input parsing for the `toroidal` command.

pub mod input;
pub mod render;

use toroidal_core::Error;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const INPUT: i32 = 2;
    pub const INTERNAL: i32 = 3;
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_internal() {
        exit::INTERNAL
    } else {
        exit::INPUT
    }
}
