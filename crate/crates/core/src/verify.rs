//! End-to-end sweeps: sketch strings, apply every edit, recover.

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::BitString;
use crate::blockhash::PhiMode;
use crate::channel::{enumerate_edits, random_bits};
use crate::codec::{fallback_recover, recover_with_trace, sketch_with, CodecError, RecoverPath};
use crate::features::feature_vector;
use crate::locate::{input_for, locate};
use crate::params::CodeParams;
use crate::partition::is_dense;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    /// Every string of length `n`.
    Exhaustive,
    /// `count` dense strings drawn from ChaCha8 seeded with `seed`.
    Samples { count: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub params: CodeParams,
    pub selection: Selection,
    pub phi_mode: PhiMode,
    /// Also run the fallback decoder on every instance and compare.
    pub compare_fallback: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub n: usize,
    pub k: usize,
    pub mode: String,
    pub phi_mode: String,
    pub seed: Option<u64>,
    pub strings: u64,
    pub skipped_not_dense: u64,
    /// Distinct `(x, y)` pairs decoded.
    pub instances: u64,
    pub failures: u64,
    pub ambiguous: u64,
    pub identity: u64,
    pub region: u64,
    pub region_multi_block: u64,
    pub fallback: u64,
    pub fallback_disagreements: u64,
    /// Widest part interval returned by the locator on honest inputs.
    pub max_locator_width: u64,
    pub max_feature_value: u64,
    /// `8·δ·C`.
    pub feature_bound: u64,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.ambiguous == 0 && self.fallback_disagreements == 0
    }

    /// `key=value` lines in a fixed order.
    pub fn to_lines(&self) -> String {
        let seed = self.seed.map_or_else(|| "none".to_string(), |s| s.to_string());
        let rows: [(&str, String); 19] = [
            ("n", self.n.to_string()),
            ("k", self.k.to_string()),
            ("mode", self.mode.clone()),
            ("phi_mode", self.phi_mode.clone()),
            ("seed", seed),
            ("strings", self.strings.to_string()),
            ("skipped_not_dense", self.skipped_not_dense.to_string()),
            ("instances", self.instances.to_string()),
            ("failures", self.failures.to_string()),
            ("ambiguous", self.ambiguous.to_string()),
            ("identity", self.identity.to_string()),
            ("region", self.region.to_string()),
            ("region_multi_block", self.region_multi_block.to_string()),
            ("fallback", self.fallback.to_string()),
            ("fallback_disagreements", self.fallback_disagreements.to_string()),
            ("max_locator_width", self.max_locator_width.to_string()),
            ("max_feature_value", self.max_feature_value.to_string()),
            ("feature_bound", self.feature_bound.to_string()),
            ("passed", self.passed().to_string()),
        ];
        rows.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }
}

/// The strings a sweep visits, dense or not.
pub fn sweep_strings(params: &CodeParams, selection: Selection) -> Vec<BitString> {
    match selection {
        Selection::Exhaustive => {
            assert!(params.n <= 24, "exhaustive sweeps are limited to short strings");
            (0..1u128 << params.n).map(|v| BitString::from_uint(v, params.n)).collect()
        }
        Selection::Samples { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = Vec::with_capacity(count);
            let mut draws = 0usize;
            while out.len() < count && draws < count.saturating_mul(100).max(100) {
                draws += 1;
                let x = random_bits(params.n, &mut rng);
                if is_dense(x.as_slice(), params.k, params.density) {
                    out.push(x);
                }
            }
            out
        }
    }
}

pub fn run_sweep(config: &SweepConfig) -> SweepReport {
    let p = &config.params;
    let mut report = SweepReport {
        n: p.n,
        k: p.k,
        mode: format!("{:?}", p.mode).to_lowercase(),
        phi_mode: format!("{:?}", config.phi_mode).to_lowercase(),
        seed: match config.selection {
            Selection::Exhaustive => None,
            Selection::Samples { seed, .. } => Some(seed),
        },
        ..SweepReport::default()
    };
    for x in sweep_strings(p, config.selection) {
        report.strings += 1;
        let sk = match sketch_with(&x, p, config.phi_mode) {
            Ok(sk) => sk,
            Err(CodecError::NotDense { .. }) => {
                report.skipped_not_dense += 1;
                continue;
            }
            Err(_) => {
                report.failures += 1;
                continue;
            }
        };
        report.feature_bound = sk.params.feature_bound;
        let z = feature_vector(x.as_slice(), p);
        report.max_feature_value = report.max_feature_value.max(z.values.max());
        let mut seen = HashSet::new();
        for (_, y) in enumerate_edits(&x, p.k) {
            if !seen.insert(y.clone()) {
                continue;
            }
            report.instances += 1;
            let w = feature_vector(y.as_slice(), p);
            report.max_feature_value = report.max_feature_value.max(w.values.max());
            if y != x {
                let input = input_for(&z.values, &w.values, p.vt_modulus, u128::from(p.decoder_feature_bound()), p.feature_edit_bound);
                if let Ok(found) = locate(&input) {
                    report.max_locator_width = report.max_locator_width.max(found.width() as u64);
                }
            }
            match recover_with_trace(&y, &sk) {
                Ok(r) if r.x == x => match r.path {
                    RecoverPath::Identity => report.identity += 1,
                    RecoverPath::Region { blocks, .. } => {
                        report.region += 1;
                        if blocks >= 2 {
                            report.region_multi_block += 1;
                        }
                    }
                    RecoverPath::Fallback(_) => report.fallback += 1,
                },
                Ok(_) => report.failures += 1,
                Err(CodecError::Ambiguous { .. }) => report.ambiguous += 1,
                Err(_) => report.failures += 1,
            }
            if config.compare_fallback && fallback_recover(&y, &sk).as_ref() != Ok(&x) {
                report.fallback_disagreements += 1;
            }
        }
    }
    report
}
