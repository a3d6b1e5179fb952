//! Grothendieck-group bookkeeping for representations induced from segments
//! over a cuspidal representation with reducibility at 1/2.

pub mod atoms;
pub mod gl;
pub mod ledger;
pub mod mustar;
pub mod parse;
pub mod report;
pub mod segments;
pub mod theorems;
