//! Placeholder; chapters are attached once the book exists.
