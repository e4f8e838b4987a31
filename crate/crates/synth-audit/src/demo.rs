//! Built-in ground-truth population for experiments and examples.
//!
//! An 8-attribute mixed-type network (5 categorical, 3 continuous) with known
//! dependency structure, skewed marginals, rare category combinations, and
//! heavy-tailed continuous values. Sampling from a known joint lets the attack
//! pipeline be exercised end to end without shipping external data.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::data::{AttributeKind, Cell, Dataset, Record, Schema};
use crate::seed;

const REGIONS: [&str; 5] = ["north", "south", "east", "west", "isles"];
const SEGMENTS: [&str; 3] = ["retail", "smb", "corp"];
const DEVICES: [&str; 4] = ["mobile", "desktop", "tablet", "kiosk"];
const PLANS: [&str; 6] = ["free", "basic", "plus", "premium", "enterprise", "legacy"];
const CHURNED: [&str; 2] = ["no", "yes"];

/// Schema of the demo population: region, segment, device, plan, churned,
/// tenure, spend, tickets.
pub fn demo_schema() -> Schema {
    let cat = |name: &str, values: &[&str]| {
        (
            name.to_string(),
            AttributeKind::Categorical {
                values: values.iter().map(|s| s.to_string()).collect(),
            },
        )
    };
    let cont = |name: &str| {
        (
            name.to_string(),
            AttributeKind::Continuous {
                observed_min: 0.0,
                observed_max: 0.0,
            },
        )
    };
    Schema::new(vec![
        cat("region", &REGIONS),
        cat("segment", &SEGMENTS),
        cat("device", &DEVICES),
        cat("plan", &PLANS),
        cat("churned", &CHURNED),
        cont("tenure"),
        cont("spend"),
        cont("tickets"),
    ])
    .expect("demo schema is valid")
}

fn draw_discrete(rng: &mut ChaCha8Rng, probs: &[f64]) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.len() - 1
}

fn draw_normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; one value per call keeps the stream simple.
    let u1: f64 = rng.random::<f64>().max(1e-12);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn draw_exponential(rng: &mut ChaCha8Rng, scale: f64) -> f64 {
    let u: f64 = rng.random();
    -(1.0 - u).max(1e-12).ln() * scale
}

fn sample_row(rng: &mut ChaCha8Rng) -> Record {
    // region: skewed marginal with one rare value
    let region = draw_discrete(rng, &[0.30, 0.28, 0.20, 0.17, 0.05]);

    // segment | region
    let segment_cpt: [[f64; 3]; 5] = [
        [0.70, 0.20, 0.10], // north
        [0.55, 0.30, 0.15], // south
        [0.40, 0.40, 0.20], // east
        [0.30, 0.30, 0.40], // west
        [0.10, 0.25, 0.65], // isles: mostly corp
    ];
    let segment = draw_discrete(rng, &segment_cpt[region]);

    // device | segment
    let device_cpt: [[f64; 4]; 3] = [
        [0.62, 0.25, 0.11, 0.02], // retail
        [0.30, 0.55, 0.10, 0.05], // smb
        [0.10, 0.78, 0.04, 0.08], // corp
    ];
    let device = draw_discrete(rng, &device_cpt[segment]);

    // plan | segment, with a rare legacy plan
    let plan_cpt: [[f64; 6]; 3] = [
        [0.45, 0.30, 0.15, 0.06, 0.02, 0.02], // retail
        [0.15, 0.30, 0.25, 0.20, 0.09, 0.01], // smb
        [0.05, 0.10, 0.20, 0.30, 0.32, 0.03], // corp
    ];
    let plan = draw_discrete(rng, &plan_cpt[segment]);

    // churned | plan: cheap plans churn more
    let churn_p = [0.35, 0.25, 0.15, 0.08, 0.04, 0.50][plan];
    let churned = usize::from(rng.random::<f64>() < churn_p);

    // tenure | segment: exponential with segment-specific scale, in months
    let tenure_scale = [14.0, 30.0, 55.0][segment];
    let tenure = draw_exponential(rng, tenure_scale).min(240.0);

    // spend | plan, tenure: plan base grows mildly with tenure, log-normal tail
    let base = [4.0, 12.0, 35.0, 90.0, 260.0, 20.0][plan];
    let noise = (0.55 * draw_normal(rng)).exp();
    let spend = base * (1.0 + 0.015 * tenure) * noise;

    // tickets | churned: churned accounts file more tickets
    let ticket_scale = if churned == 1 { 9.0 } else { 2.5 };
    let tickets = draw_exponential(rng, ticket_scale);

    Record::new(vec![
        Cell::Cat(region as u32),
        Cell::Cat(segment as u32),
        Cell::Cat(device as u32),
        Cell::Cat(plan as u32),
        Cell::Cat(churned as u32),
        Cell::Cont(round3(tenure)),
        Cell::Cont(round3(spend)),
        Cell::Cont(round3(tickets)),
    ])
}

/// Keep file round-trips short; three decimals is plenty of resolution here.
fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

/// Draw `n` i.i.d. records from the demo network.
pub fn sample_population(n: usize, seed_value: u64) -> Dataset {
    let mut rng = seed::rng(seed_value, &[seed::phase::POPULATION]);
    let rows = (0..n).map(|_| sample_row(&mut rng)).collect();
    Dataset::new(demo_schema(), rows).expect("demo rows conform to demo schema")
}
