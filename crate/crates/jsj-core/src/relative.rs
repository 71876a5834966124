//! Relative JSJ of free groups and general graphs of free groups.
