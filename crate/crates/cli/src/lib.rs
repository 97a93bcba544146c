//! Library side of the `pbwlab` command: input schema, jobs and reports.

pub mod corpus;
pub mod run;
pub mod schema;

pub use corpus::{cross_validate, CorpusReport, Disagreement, SampleOutcome};
pub use run::{run, Caps, Command, Example, Exit, JobSpec, Outcome};
pub use schema::{parse, InputError, InputFile};
