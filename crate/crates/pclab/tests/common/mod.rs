#![allow(dead_code)]

use pclab::{execute, Command, Job, Params, Report, REPORT_SCHEMA};
use serde_json::Value;

pub fn params() -> Params {
    Params {
        budget_ms: pclab::job::DEFAULT_BUDGET_MS,
        threads: 1,
        ..Params::default()
    }
}

pub fn run(cmd: Command, params: Params) -> Report {
    execute(cmd, &Job::new(params)).expect("command runs")
}

/// Schema violations of a serialized report, empty when valid.
pub fn schema_errors(report: &Value) -> Vec<String> {
    let schema: Value = serde_json::from_str(REPORT_SCHEMA).expect("schema is JSON");
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    let result = compiled.validate(report);
    match result {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{}: {e}", e.instance_path)).collect(),
    }
}

pub fn assert_valid(report: &Report) {
    let value = serde_json::to_value(report).unwrap();
    let errors = schema_errors(&value);
    assert!(errors.is_empty(), "{}: {errors:?}", report.command);
}
