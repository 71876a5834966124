//! Opened-up complexes and the JSJ assembly pipeline.
