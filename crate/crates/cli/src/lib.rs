//! Library surface of the CLI: the text formats, exposed for tests.

pub mod formats;
