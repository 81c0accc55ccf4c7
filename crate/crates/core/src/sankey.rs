//! Program → target sector → impacted sector flow graph for Sankey plots.

use std::collections::HashMap;

use serde::Serialize;

use crate::scenario::ImpactReport;

pub const OTHER_SECTORS_ID: &str = "sector:other";
pub const OTHER_SECTORS_LABEL: &str = "Other sectors";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Program,
    TargetSector,
    ImpactedSector,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SankeyNode {
    pub id: String,
    pub label: String,
    pub stage: Stage,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SankeyLink {
    pub source: String,
    pub target: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SankeyGraph {
    pub nodes: Vec<SankeyNode>,
    pub links: Vec<SankeyLink>,
}

impl SankeyGraph {
    pub fn stage_total(&self, from: Stage) -> f64 {
        let stage_of: HashMap<&str, Stage> = self.nodes.iter().map(|n| (n.id.as_str(), n.stage)).collect();
        self.links
            .iter()
            .filter(|l| stage_of.get(l.source.as_str()) == Some(&from))
            .map(|l| l.value)
            .sum()
    }
}

fn program_id(name: &str) -> String {
    format!("program:{name}")
}

fn target_id(code: &str) -> String {
    format!("target:{code}")
}

fn sector_id(code: &str) -> String {
    format!("sector:{code}")
}

/// Builds the flow graph from an impact report.
///
/// Program links carry each program's shock. Target-sector links carry the
/// per-sector output deltas of the programs routed through that target,
/// keeping the `top_k` sectors with the largest combined delta and folding
/// the rest into a single "Other sectors" node. Negative deltas are dropped.
/// Ordering follows the report: programs in scenario order, sectors in table order.
pub fn emit_sankey(report: &ImpactReport, top_k: usize) -> SankeyGraph {
    let n = report.sectors.len();
    let mut nodes = Vec::new();
    let mut links = Vec::new();

    let mut targets: Vec<&str> = Vec::new();
    for p in &report.per_program {
        nodes.push(SankeyNode {
            id: program_id(&p.name),
            label: p.name.clone(),
            stage: Stage::Program,
        });
        if !targets.contains(&p.target_sector.as_str()) {
            targets.push(&p.target_sector);
        }
        links.push(SankeyLink {
            source: program_id(&p.name),
            target: target_id(&p.target_sector),
            value: p.shock,
        });
    }
    for t in &targets {
        nodes.push(SankeyNode {
            id: target_id(t),
            label: t.to_string(),
            stage: Stage::TargetSector,
        });
    }

    // Combined delta per target node and sector.
    let mut by_target = vec![vec![0.0; n]; targets.len()];
    for p in &report.per_program {
        let k = targets
            .iter()
            .position(|t| *t == p.target_sector)
            .expect("target registered");
        for (acc, d) in by_target[k].iter_mut().zip(&p.per_sector_delta) {
            *acc += d.max(0.0);
        }
    }
    let mut combined = vec![0.0; n];
    for row in &by_target {
        for (c, d) in combined.iter_mut().zip(row) {
            *c += d;
        }
    }
    let mut order: Vec<usize> = (0..n).filter(|&j| combined[j] > 0.0).collect();
    order.sort_by(|&a, &b| combined[b].total_cmp(&combined[a]));
    let mut kept = vec![false; n];
    for &j in order.iter().take(top_k) {
        kept[j] = true;
    }
    let needs_other = order.len() > top_k;

    for (j, code) in report.sectors.iter().enumerate() {
        if kept[j] {
            nodes.push(SankeyNode {
                id: sector_id(code),
                label: code.clone(),
                stage: Stage::ImpactedSector,
            });
        }
    }
    if needs_other {
        nodes.push(SankeyNode {
            id: OTHER_SECTORS_ID.to_string(),
            label: OTHER_SECTORS_LABEL.to_string(),
            stage: Stage::ImpactedSector,
        });
    }

    for (t, row) in targets.iter().zip(&by_target) {
        let mut other = 0.0;
        for (j, code) in report.sectors.iter().enumerate() {
            if row[j] <= 0.0 {
                continue;
            }
            if kept[j] {
                links.push(SankeyLink {
                    source: target_id(t),
                    target: sector_id(code),
                    value: row[j],
                });
            } else {
                other += row[j];
            }
        }
        if other > 0.0 {
            links.push(SankeyLink {
                source: target_id(t),
                target: OTHER_SECTORS_ID.to_string(),
                value: other,
            });
        }
    }

    SankeyGraph { nodes, links }
}
