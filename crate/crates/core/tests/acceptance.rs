//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use igusa_core::report::{self, CheckResult, Config, Status, Suite};

struct Criterion {
    number: u32,
    name: &'static str,
    suites: &'static [Suite],
    checks: &'static [&'static str],
    budget: Duration,
}

const CRITERIA: [Criterion; 8] = [
    Criterion {
        number: 1,
        name: "discriminant census",
        suites: &[Suite::Census],
        checks: &[
            "census.discriminant-n",
            "census.n-type-counts",
            "census.m-orbit-counts",
            "census.pairing-table",
        ],
        budget: Duration::from_secs(1),
    },
    Criterion {
        number: 2,
        name: "Weil representation",
        suites: &[Suite::Weil],
        checks: &["weil.relations", "weil.image-group", "weil.class-traces", "weil.decomposition"],
        budget: Duration::from_secs(30),
    },
    Criterion {
        number: 3,
        name: "theta_V suite",
        suites: &[Suite::Weil],
        checks: &[
            "weil.isotropic-planes",
            "weil.theta-eigenvalues",
            "weil.theta-reflections",
            "weil.theta-span",
            "weil.w-irreducible",
        ],
        budget: Duration::from_secs(60),
    },
    Criterion {
        number: 4,
        name: "obstruction space",
        suites: &[Suite::Obstruction],
        checks: &[
            "obstruction.collapsed-matrices",
            "obstruction.type-constant-action",
            "obstruction.dimension-formula",
            "obstruction.eisenstein-dimension",
        ],
        budget: Duration::from_secs(5),
    },
    Criterion {
        number: 5,
        name: "Eisenstein series and product weights",
        suites: &[Suite::Obstruction],
        checks: &[
            "obstruction.eisenstein-leading",
            "obstruction.eisenstein-oracle",
            "obstruction.transformation-rules",
            "obstruction.f-tuple",
            "obstruction.product-weights",
        ],
        budget: Duration::from_secs(60),
    },
    Criterion {
        number: 6,
        name: "lifting",
        suites: &[Suite::Lifting],
        checks: &[
            "lifting.eta-18",
            "lifting.eta-6",
            "lifting.multiplier-compatibility",
            "lifting.theta-support",
            "lifting.leading-coefficient",
            "lifting.theta0-identities",
        ],
        budget: Duration::from_secs(5),
    },
    Criterion {
        number: 7,
        name: "restriction to M",
        suites: &[Suite::Restriction],
        checks: &[
            "restriction.embedding",
            "restriction.heegner-cases.box-3",
            "restriction.heegner-cases.box-4",
            "restriction.heegner-cases.box-5",
            "restriction.v-to-v1",
            "restriction.seven-lines",
            "restriction.boundary-configuration",
        ],
        budget: Duration::from_secs(60),
    },
    Criterion {
        number: 8,
        name: "quartic geometry",
        suites: &[Suite::Geometry],
        checks: &[
            "geometry.fifteen-lines",
            "geometry.incidence",
            "geometry.singular-lines",
            "geometry.cubic-span",
            "geometry.cubic-base-locus",
            "geometry.s6-equivariance",
            "geometry.image-cubic",
            "geometry.rnc-fit",
            "geometry.on-quartic-root",
            "geometry.degree-16",
        ],
        budget: Duration::from_secs(120),
    },
];

fn main() -> ExitCode {
    let config = Config {
        seed: 7,
        box_half_width: 5,
        trials: 20,
        terms: 16,
        tolerance: 1e-6,
        timings: true,
        ..Config::default()
    };
    let mut results: BTreeMap<String, CheckResult> = BTreeMap::new();
    let mut suite_time: BTreeMap<Suite, Duration> = BTreeMap::new();
    let mut all_pass = true;
    for criterion in &CRITERIA {
        let start = Instant::now();
        for &suite in criterion.suites {
            if suite_time.contains_key(&suite) {
                continue;
            }
            let t = Instant::now();
            match report::run(suite, &config) {
                Ok(doc) => results.extend(doc.checks.into_iter().map(|c| (c.id.clone(), c))),
                Err(e) => eprintln!("suite {suite} did not run: {e}"),
            }
            suite_time.insert(suite, t.elapsed());
        }
        // Suites shared with an earlier criterion are charged at their own check times.
        let elapsed = start.elapsed().max(Duration::from_millis(
            criterion
                .checks
                .iter()
                .filter_map(|id| results.get(*id).and_then(|c| c.runtime_ms))
                .sum(),
        ));
        let mut problems = Vec::new();
        for id in criterion.checks {
            match results.get(*id) {
                Some(c) if c.status == Status::Pass => {}
                Some(c) => problems.push(format!(
                    "{id} {:?}: {}",
                    c.status,
                    c.witness.clone().unwrap_or_default()
                )),
                None => problems.push(format!("{id} missing")),
            }
        }
        if elapsed > criterion.budget {
            problems.push(format!("took {elapsed:?}, budget {:?}", criterion.budget));
        }
        let verdict = if problems.is_empty() { "PASS" } else { "FAIL" };
        all_pass &= problems.is_empty();
        println!(
            "{verdict} criterion {}: {} ({} checks, {:.2?})",
            criterion.number,
            criterion.name,
            criterion.checks.len(),
            elapsed
        );
        for p in problems {
            println!("    {p}");
        }
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
