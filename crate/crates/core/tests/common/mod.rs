#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use montel::cli::CommandRequest;
use serde_json::Value;

pub struct Fixture {
    pub name: String,
    pub request: CommandRequest,
    pub expect_exit: i32,
    pub expect: Value,
}

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

pub fn load_fixtures() -> Vec<Fixture> {
    let mut paths: Vec<_> = fs::read_dir(fixture_dir())
        .expect("fixture directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let v: Value = serde_json::from_str(&fs::read_to_string(&p).expect("readable")).expect("valid json");
            Fixture {
                name: p.file_stem().unwrap().to_string_lossy().into_owned(),
                request: serde_json::from_value(v["request"].clone()).expect("request shape"),
                expect_exit: v["expect_exit"].as_i64().expect("expect_exit") as i32,
                expect: v["expect"].clone(),
            }
        })
        .collect()
}

/// `expected` must be contained in `actual`: objects by key, arrays
/// element-wise with equal length, scalars by equality.
pub fn subset_match(expected: &Value, actual: &Value, path: &str) -> Result<(), String> {
    match (expected, actual) {
        (Value::Object(e), Value::Object(a)) => {
            for (k, ev) in e {
                let av = a.get(k).ok_or_else(|| format!("{path}.{k}: missing"))?;
                subset_match(ev, av, &format!("{path}.{k}"))?;
            }
            Ok(())
        }
        (Value::Array(e), Value::Array(a)) => {
            if e.len() != a.len() {
                return Err(format!("{path}: length {} != {}", a.len(), e.len()));
            }
            e.iter().zip(a).enumerate().try_for_each(|(i, (ev, av))| subset_match(ev, av, &format!("{path}[{i}]")))
        }
        _ if expected == actual => Ok(()),
        _ => Err(format!("{path}: expected {expected}, got {actual}")),
    }
}
