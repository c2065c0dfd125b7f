//! Run manifests and table output.
//!
//! Every command embeds its manifest (command name, full parameter set, tool
//! version, timestamp, seed when one exists) in its output: as `#` comment
//! lines ahead of CSV tables, or as a `manifest` object in JSON. The numeric
//! table below the comments is a pure function of the manifest minus the
//! timestamp, so reruns reproduce it byte for byte.
//!
//! CSV schemas are versioned; the `schema` manifest entry names the column
//! layout and golden tests pin the headers.

use serde::Serialize;

pub const BRACKET_SCHEMA: &str = "bracket.v1";
pub const FOSTER_SCHEMA: &str = "foster.v1";
pub const WALK_SCHEMA: &str = "walk.v1";
pub const RINF_SCHEMA: &str = "rinf.v1";
pub const TREEPROB_SCHEMA: &str = "treeprob.v1";

pub const BRACKET_HEADER: &str = "radius,vertices,edges,short_R,cut_R,gap";
pub const FOSTER_HEADER: &str = "quantity,value";
pub const WALK_HEADER: &str =
    "lattice,steps,trials,seed,returns,return_frequency,standard_error,mean_first_return_step";
pub const RINF_HEADER: &str = "radius,resistance";
pub const TREEPROB_HEADER: &str = "edge,u,v,tree_probability,effective_resistance,abs_diff";

/// Reproducibility record attached to every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub schema: &'static str,
    pub version: &'static str,
    pub timestamp: String,
    /// Full parameter set in command-line order.
    pub parameters: Vec<(String, String)>,
    pub seed: Option<u64>,
}

impl RunManifest {
    pub fn new(
        command: &str,
        schema: &'static str,
        parameters: Vec<(String, String)>,
        seed: Option<u64>,
    ) -> Self {
        RunManifest {
            command: command.to_string(),
            schema,
            version: env!("CARGO_PKG_VERSION"),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            parameters,
            seed,
        }
    }

    /// `#`-prefixed lines placed ahead of a CSV table.
    pub fn comment_block(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# ohmnet {} command={} schema={}\n",
            self.version, self.command, self.schema
        ));
        out.push_str(&format!("# timestamp={}\n", self.timestamp));
        for (k, v) in &self.parameters {
            out.push_str(&format!("# {k}={v}\n"));
        }
        if let Some(seed) = self.seed {
            out.push_str(&format!("# seed={seed}\n"));
        }
        out
    }
}

/// Formats an f64 with the shortest digits that round-trip; stable across
/// runs and platforms for identical values.
pub fn fmt_f64(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x}")
    }
}
