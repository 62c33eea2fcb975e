//! Versioned JSON reports with sorted keys.

use serde::Serialize;
use serde_json::Value;

use crate::dsl::Output;

pub const SCHEMA: &str = "cmgrade-report/1";

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub pass: bool,
    pub results: Value,
}

impl Report {
    pub fn new(command: &str, pass: bool, results: impl Serialize) -> Report {
        Report { schema: SCHEMA, command: command.to_string(), pass, results: serde_json::to_value(results).expect("serializable") }
    }

    /// From script outputs; passes unless some `expect` clause failed.
    pub fn from_outputs(command: &str, outputs: &[Output]) -> Report {
        let pass = outputs.iter().all(|o| o.pass != Some(false));
        Report::new(command, pass, outputs)
    }

    /// Pretty JSON; object keys come out sorted because `serde_json` maps are
    /// ordered by key.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("serializable");
        serde_json::to_string_pretty(&v).expect("serializable") + "\n"
    }
}
