//! Resolved run configuration, echoed into every JSON sidecar so a run
//! can be reproduced from its outputs.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub map: Option<String>,
    pub sigma: Option<String>,
    pub map2: Option<String>,
    pub k: Option<usize>,
    pub m: Option<u32>,
    pub d: Option<u32>,
    /// center_re, center_im, width in the affine plane.
    pub window: [f64; 3],
    pub res: [usize; 2],
    pub iters: usize,
    pub samples: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_order: usize,
    pub escape_radius: Option<f64>,
    pub out: Option<String>,
    pub format: String,
    pub assume_non_exceptional: bool,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        RunConfig {
            command: command.to_string(),
            map: None,
            sigma: None,
            map2: None,
            k: None,
            m: None,
            d: None,
            window: [0.0, 0.0, 4.0],
            res: [800, 800],
            iters: 256,
            samples: juliasym::tolerances::DEFAULT_SAMPLES,
            burn_in: juliasym::tolerances::DEFAULT_BURN_IN,
            seed: 7,
            tol: juliasym::tolerances::DEFAULT_HAUSDORFF_TOL,
            max_order: juliasym::tolerances::DEFAULT_MAX_ORDER,
            escape_radius: None,
            out: None,
            format: "ppm".to_string(),
            assume_non_exceptional: true,
        }
    }
}
