//! Input parsing and output serialisation.
