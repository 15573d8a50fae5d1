//! Toolkit for measuring company-name sentiment bias in language-model
//! scoring of financial performance text, relating it to factor exposures,
//! running the post-announcement event study, and verifying the biased-investor
//! equilibrium pricing model.

pub mod analytics;
pub mod cli;
pub mod corpus;
pub mod elicit;
pub mod eventstudy;
pub mod marketmodel;
