// Batch command-line front end; see `run` for the command set.
pub fn placeholder() {}
