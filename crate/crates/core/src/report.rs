//! Verification suites and the report they produce.
//!
//! A report is a list of checks sorted by id. The JSON form is canonical;
//! [`render_markdown`] reads it back rather than looking at the checks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{Cyclotomic, Rational};
use crate::context::NContext;
use crate::fixtures;
use crate::geometry;
use crate::lattice::lattice_m;
use crate::lifting;
use crate::obstruction::{self, CollapsedRep, EisensteinSeries};
use crate::restriction;
use crate::weil;
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_NAME: &str = "igusa";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Eisenstein labels whose lattice sums are checked in addition to the basis.
const EXTRA_ORACLE_LABELS: [(i64, i64); 3] = [(0, 2), (2, 2), (2, 0)];
const ETA_ORACLE_TERMS: usize = 30;
/// Reference leading coefficients of `prod (1 - q^n)^m`.
const ETA_LEADING: [(i64, &[i64]); 2] = [(18, &[1, -18, 135, -510, 765, 1242]), (6, &[1, -6, 9, 10, -30])];
const IMAGE_SAMPLES: usize = 60;
const GAUGE_DISTANCE_TOLERANCE: f64 = 1e-6;
const FIRST_BOX: i64 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Census,
    Weil,
    Obstruction,
    Lifting,
    Restriction,
    Geometry,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [
        Suite::Census,
        Suite::Weil,
        Suite::Obstruction,
        Suite::Lifting,
        Suite::Restriction,
        Suite::Geometry,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Census => "census",
            Suite::Weil => "weil",
            Suite::Obstruction => "obstruction",
            Suite::Lifting => "lifting",
            Suite::Restriction => "restriction",
            Suite::Geometry => "geometry",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .chain([Suite::All].iter())
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Config {
    pub seed: u64,
    /// Half-width of the largest box in the Heegner enumeration.
    pub box_half_width: i64,
    /// Degree-16 trials; 0 skips the numerical geometry.
    pub trials: u64,
    /// Quarter-steps kept in the Eisenstein expansions.
    pub terms: usize,
    /// Allowed error of the Eisenstein expansions against the lattice sums.
    pub tolerance: f64,
    pub oracle_box: i64,
    pub image_samples: usize,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub timings: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 7,
            box_half_width: 5,
            trials: 20,
            terms: 16,
            tolerance: obstruction::ORACLE_TOLERANCE,
            oracle_box: obstruction::ORACLE_BOX,
            image_samples: IMAGE_SAMPLES,
            timings: false,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if !(1..=8).contains(&self.box_half_width) {
            return Err(Error::InvalidInput(format!("box {} is outside 1..=8", self.box_half_width)));
        }
        if !(8..=obstruction::MAX_TERMS).contains(&self.terms) {
            return Err(Error::InvalidInput(format!(
                "terms {} is outside 8..={}",
                self.terms,
                obstruction::MAX_TERMS
            )));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::InvalidInput(format!("tolerance {} must be positive", self.tolerance)));
        }
        if self.trials > 10_000 {
            return Err(Error::InvalidInput(format!("{} trials is more than 10000", self.trials)));
        }
        if self.image_samples < geometry::MIN_IMAGE_SAMPLES {
            return Err(Error::InvalidInput(format!(
                "image samples {} is below {}",
                self.image_samples,
                geometry::MIN_IMAGE_SAMPLES
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub status: Status,
    pub expected: Value,
    pub actual: Value,
    pub reference: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub suite: Suite,
    pub config: Config,
    pub summary: Summary,
    pub checks: Vec<CheckResult>,
    pub notes: Vec<String>,
}

impl ReportDocument {
    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn check(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// What a check found.
pub struct Outcome {
    pub passed: bool,
    pub expected: Value,
    pub actual: Value,
    pub witness: Option<String>,
}

impl Outcome {
    pub fn new(passed: bool, expected: Value, actual: Value) -> Self {
        Outcome {
            passed,
            expected,
            actual,
            witness: None,
        }
    }

    pub fn equal<T: Serialize + PartialEq>(expected: &T, actual: &T) -> Self {
        Outcome::new(expected == actual, json!(expected), json!(actual))
    }

    /// Equality of lists, with the first differing position as witness.
    pub fn lists<T: Serialize + PartialEq + fmt::Debug>(expected: &[T], actual: &[T], names: &[String]) -> Self {
        let witness = if expected.len() != actual.len() {
            Some(format!("length {} instead of {}", actual.len(), expected.len()))
        } else {
            expected.iter().zip(actual).enumerate().find(|(_, (e, a))| e != a).map(|(i, (e, a))| {
                let name = names.get(i).cloned().unwrap_or_else(|| i.to_string());
                format!("{name}: expected {e:?}, found {a:?}")
            })
        };
        Outcome {
            passed: witness.is_none(),
            expected: json!(expected),
            actual: json!(actual),
            witness,
        }
    }

    pub fn witness(mut self, w: Option<String>) -> Self {
        if self.witness.is_none() {
            self.witness = w;
        }
        self
    }
}

struct Runner<'a> {
    config: &'a Config,
    checks: Vec<CheckResult>,
}

impl Runner<'_> {
    fn check(&mut self, id: &str, reference: &str, f: impl FnOnce() -> Result<Outcome>) {
        let start = Instant::now();
        let result = f();
        let runtime_ms = self.config.timings.then(|| start.elapsed().as_millis() as u64);
        let check = match result {
            Ok(o) => {
                let witness = if o.passed {
                    None
                } else {
                    Some(o.witness.unwrap_or_else(|| format!("found {}", o.actual)))
                };
                CheckResult {
                    id: id.to_string(),
                    status: if o.passed { Status::Pass } else { Status::Fail },
                    expected: o.expected,
                    actual: o.actual,
                    reference: reference.to_string(),
                    witness,
                    runtime_ms,
                }
            }
            Err(e) => CheckResult {
                id: id.to_string(),
                status: Status::Fail,
                expected: Value::Null,
                actual: Value::Null,
                reference: reference.to_string(),
                witness: Some(e.to_string()),
                runtime_ms,
            },
        };
        self.checks.push(check);
    }

    fn skip(&mut self, id: &str, reference: &str, reason: &str) {
        self.checks.push(CheckResult {
            id: id.to_string(),
            status: Status::Skipped,
            expected: Value::Null,
            actual: json!(reason),
            reference: reference.to_string(),
            witness: None,
            runtime_ms: None,
        });
    }
}

fn shared<T: Clone>(r: &Result<T>) -> Result<T> {
    r.clone()
}

fn gaussian(re: (i64, i64), im: (i64, i64)) -> Cyclotomic {
    Cyclotomic::gaussian(Rational::new(re.0, re.1), Rational::new(im.0, im.1))
}

fn type_names() -> Vec<String> {
    fixtures::n_type_order().iter().map(|t| t.label()).collect()
}

fn census_suite(r: &mut Runner) {
    r.check("census.discriminant-n", "A_N is (Z/2)^6 with radical class (a1 + a2)/2", || {
        let ctx = NContext::shared()?;
        let half_sum = ctx.disc.class_of_half(&[0, 0, 0, 0, 1, 1])?;
        let actual = json!({
            "orders": ctx.module().orders(),
            "signature": ctx.signature,
            "kappa_is_half_sum": half_sum == ctx.kappa,
        });
        let expected = json!({ "orders": [2, 2, 2, 2, 2, 2], "signature": [2, 4], "kappa_is_half_sum": true });
        Ok(Outcome::new(actual == expected, expected, actual))
    });
    r.check("census.n-type-counts", "type census of A_N", || {
        let ctx = NContext::shared()?;
        let census = ctx.module().classify_types()?;
        let actual: Vec<u64> = fixtures::n_type_order().iter().map(|t| census.count(t)).collect();
        Ok(Outcome::lists(&fixtures::N_TYPE_COUNTS, &actual, &type_names()))
    });
    r.check("census.pairing-table", "pairing counts between types of A_N", || {
        let ctx = NContext::shared()?;
        let order = fixtures::n_type_order();
        let table = ctx.module().pairing_table(&order)?;
        let names = type_names();
        let mut witness = None;
        let mut cells = 0;
        for (u, row) in fixtures::PAIRING_COUNTS.iter().enumerate() {
            for (v, &expected) in row.iter().enumerate() {
                for (k, (e, a)) in [(expected.0, table.counts[u][v].0), (expected.1, table.counts[u][v].1)]
                    .into_iter()
                    .enumerate()
                {
                    cells += 1;
                    if e != a && witness.is_none() {
                        witness = Some(format!("({}, {}, b = {}): expected {e}, found {a}", names[u], names[v], ["0", "1/2"][k]));
                    }
                }
            }
        }
        let expected: Vec<Vec<(u64, u64)>> = fixtures::PAIRING_COUNTS.iter().map(|r| r.to_vec()).collect();
        Ok(Outcome::new(witness.is_none() && cells == 72, json!(expected), json!(table.counts)).witness(witness))
    });
    r.check("census.m-orbit-counts", "+-1 orbits on A_M by type", || {
        let disc = lattice_m().discriminant_module()?;
        let census = restriction::am_census(&disc.module)?;
        let names: Vec<String> = fixtures::m_type_order().iter().map(|t| t.label()).collect();
        let counts = Outcome::lists(&fixtures::M_ORBIT_COUNTS, &census.orbit_counts, &names);
        let shape = census.quarter_types_have_order_four && census.negation_is_kappa_shift && census.kappa_fixed;
        Ok(Outcome {
            passed: counts.passed && shape,
            expected: json!({ "orbit_counts": fixtures::M_ORBIT_COUNTS, "quarter_types": "order 4, negation adds kappa" }),
            actual: json!({ "orbit_counts": census.orbit_counts, "quarter_types_have_order_four": census.quarter_types_have_order_four, "negation_is_kappa_shift": census.negation_is_kappa_shift }),
            witness: counts.witness,
        })
    });
}

fn weil_suite(r: &mut Runner) {
    r.check("weil.relations", "defining relations of the Weil representation", || {
        let ctx = NContext::shared()?;
        let rel = ctx.weil.relations();
        let failed: Vec<&str> = rel.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
        Ok(Outcome::new(failed.is_empty(), json!("all hold"), json!(rel.iter().map(|(n, ok)| (n, ok)).collect::<Vec<_>>()))
            .witness(failed.first().map(|n| format!("relation {n} fails"))))
    });
    r.check("weil.image-group", "image of SL(2, Z) has order 48", || {
        let ctx = NContext::shared()?;
        let classes = ctx.classes()?;
        let actual = json!({ "order": ctx.group()?.order(), "class_sizes": classes.sizes });
        let expected = json!({ "order": 48, "class_sizes": [1, 1, 6, 6, 6, 6, 3, 3, 8, 8] });
        Ok(Outcome::new(actual == expected, expected, actual))
    });
    r.check("weil.class-traces", "traces of the Weil representation on conjugacy classes", || {
        let ctx = NContext::shared()?;
        let actual = ctx.group()?.class_traces();
        let expected: Vec<Cyclotomic> = fixtures::CLASS_TRACES
            .iter()
            .map(|&(re, im)| gaussian((re, 1), (im, 1)))
            .collect();
        let names: Vec<String> = fixtures::CLASS_NAMES.iter().map(|s| s.to_string()).collect();
        Ok(Outcome::lists(&expected, &actual, &names))
    });
    r.check("weil.decomposition", "multiplicities of the irreducible characters", || {
        let ctx = NContext::shared()?;
        let actual = ctx.character_table()?.decompose(&ctx.group()?.class_traces())?;
        let names: Vec<String> = (1..=10).map(|i| format!("chi_{i}")).collect();
        Ok(Outcome::lists(&fixtures::WEIL_MULTIPLICITIES, &actual, &names))
    });
    r.check("weil.isotropic-planes", "isotropic planes in A_N", || {
        let ctx = NContext::shared()?;
        Ok(Outcome::equal(&15, &ctx.planes().len()))
    });
    r.check("weil.theta-eigenvalues", "rho(S) theta_V = rho(T) theta_V = -i theta_V", || {
        let ctx = NContext::shared()?;
        let minus_i = -Cyclotomic::i();
        let mut witness = None;
        for (k, theta) in ctx.thetas()?.iter().enumerate() {
            let s = weil::eigenvalue(ctx.module(), &ctx.weil.s, theta);
            let t = weil::eigenvalue(ctx.module(), &ctx.weil.t, theta);
            if (s.as_ref() != Some(&minus_i) || t.as_ref() != Some(&minus_i)) && witness.is_none() {
                witness = Some(format!("plane {k}: S eigenvalue {s:?}, T eigenvalue {t:?}"));
            }
        }
        Ok(Outcome::new(witness.is_none(), json!({ "S": "-i", "T": "-i", "planes": 15 }), json!({ "planes": ctx.thetas()?.len(), "all_match": witness.is_none() }))
            .witness(witness))
    });
    r.check("weil.theta-reflections", "reflections in the norm-1 classes of V negate theta_V", || {
        let ctx = NContext::shared()?;
        let mut signs = BTreeSet::new();
        let mut witness = None;
        for (k, (plane, theta)) in ctx.planes().iter().zip(ctx.thetas()?).enumerate() {
            for beta in weil::unit_elements(ctx.module(), plane, &ctx.kappa) {
                let sign = weil::reflection_sign(ctx.module(), &beta, theta)?;
                if sign != Some(-1) && witness.is_none() {
                    witness = Some(format!("plane {k}, beta = {beta}: sign {sign:?}"));
                }
                signs.insert(sign.unwrap_or(0));
            }
        }
        Ok(Outcome::new(witness.is_none(), json!([-1]), json!(signs)).witness(witness))
    });
    r.check("weil.theta-span", "the theta_V span the 5-dimensional isotypic space W", || {
        let ctx = NContext::shared()?;
        let (p, basis) = ctx.w()?;
        let thetas = ctx.thetas()?;
        let outside = thetas.iter().position(|t| weil::act(ctx.module(), p, t) != *t);
        let actual = json!({ "rank": weil::rank(ctx.module(), thetas), "dim_w": basis.len(), "inside_w": outside.is_none() });
        let expected = json!({ "rank": 5, "dim_w": 5, "inside_w": true });
        Ok(Outcome::new(actual == expected, expected, actual).witness(outside.map(|k| format!("theta_V of plane {k} is not in W"))))
    });
    r.check("weil.w-irreducible", "W is irreducible under O(q_N) with central scalar -1", || {
        let ctx = NContext::shared()?;
        let (p, _) = ctx.w()?;
        let rep = weil::irreducibility_check(&ctx.weil, p, ctx.orthogonal_group()?)?;
        let actual = json!({
            "group_order": rep.group_order,
            "character_at_identity": rep.character_at_identity,
            "norm": rep.norm,
            "central_scalar": rep.central_scalar,
            "commutes": rep.commutes,
        });
        let expected = json!({ "group_order": 1440, "character_at_identity": "5", "norm": "1", "central_scalar": "-1", "commutes": true });
        Ok(Outcome::new(actual == expected, expected, actual))
    });
    r.check("weil.w0-dimension", "the chi_3 isotypic space W_0 is a line", || {
        let ctx = NContext::shared()?;
        Ok(Outcome::equal(&1, &ctx.w0()?.1.len()))
    });
}

fn obstruction_suite(r: &mut Runner) {
    let config = r.config.clone();
    let rep: Result<CollapsedRep> = NContext::shared()
        .and_then(|ctx| obstruction::collapsed_rep(&ctx.weil.dual(), &ctx.kappa, &fixtures::n_type_order()));
    let basis: Result<Vec<EisensteinSeries>> = fixtures::EISENSTEIN_LABELS
        .iter()
        .map(|&(a1, a2)| obstruction::expand_g3(a1, a2, config.terms))
        .collect();

    r.check("obstruction.collapsed-matrices", "collapsed dual Weil matrices on type-constant vectors", || {
        let rep = shared(&rep)?;
        let result = obstruction::verify_reference(&rep);
        Ok(Outcome::new(result.is_ok(), json!("reference T and S"), json!({ "T": rep.t.row_vectors(), "S": rep.s.row_vectors() }))
            .witness(result.err().map(|e| e.to_string())))
    });
    r.check("obstruction.type-constant-action", "the dual representation preserves type-constant vectors", || {
        let ctx = NContext::shared()?;
        let rep = shared(&rep)?;
        let result = obstruction::check_type_constant_action(&ctx.weil.dual(), &ctx.kappa, &rep);
        Ok(Outcome::new(result.is_ok(), json!(true), json!(result.is_ok())).witness(result.err().map(|e| e.to_string())))
    });
    r.check("obstruction.orbits-are-types", "O(q_N)-orbits on A_N are the types", || {
        let ctx = NContext::shared()?;
        let ok = obstruction::orbits_are_types(ctx.module(), &ctx.kappa, ctx.orthogonal_group()?);
        Ok(Outcome::equal(&true, &ok))
    });
    r.check("obstruction.dimension-formula", "dimension of weight-3 forms for the collapsed representation", || {
        let rep = shared(&rep)?;
        let dim = obstruction::dim_modular_forms(&rep, 3)?;
        let actual = json!({ "d": dim.d, "alpha_s": dim.alpha_s, "alpha_st": dim.alpha_st, "alpha_t": dim.alpha_t, "dimension": dim.dimension });
        let expected = json!({ "d": 6, "alpha_s": "3/2", "alpha_st": "2", "alpha_t": "2", "dimension": 2 });
        Ok(Outcome::new(actual == expected, expected, actual))
    });
    r.check("obstruction.eisenstein-dimension", "Eisenstein and cusp dimensions in weight 3", || {
        let rep = shared(&rep)?;
        let dim = obstruction::dim_modular_forms(&rep, 3)?;
        let eis = obstruction::eisenstein_subspace(&rep, 3).len() as i64;
        let actual = json!({ "eisenstein": eis, "cusp": dim.dimension - eis });
        let expected = json!({ "eisenstein": 2, "cusp": 0 });
        Ok(Outcome::new(actual == expected, expected, actual))
    });
    r.check("obstruction.eisenstein-leading", "leading terms of E_1 .. E_6 in units i(2 pi)^3/2^7", || {
        let basis = shared(&basis)?;
        let mut witness = None;
        let mut actual = Vec::new();
        for (j, (series, reference)) in basis.iter().zip(fixtures::EISENSTEIN_LEADING).enumerate() {
            let mut row = Vec::new();
            for &(k, re, im) in reference {
                let e = Rational::new(k, 4);
                let got = series.series.coeff(&e).unwrap_or_default();
                if got != gaussian(re, im) && witness.is_none() {
                    witness = Some(format!("E_{} at q^{e}: expected {}, found {got}", j + 1, gaussian(re, im)));
                }
                row.push(json!([e, got]));
            }
            actual.push(json!({ "label": series.label, "terms": row }));
        }
        Ok(Outcome::new(witness.is_none(), json!("reference leading terms"), json!(actual)).witness(witness))
    });
    r.check("obstruction.eisenstein-oracle", "expansions against direct lattice sums at tau = i", || {
        let mut worst: Option<obstruction::OracleComparison> = None;
        let mut rows = Vec::new();
        for &(a1, a2) in fixtures::EISENSTEIN_LABELS.iter().chain(EXTRA_ORACLE_LABELS.iter()) {
            let cmp = obstruction::compare_with_oracle(a1, a2, config.oracle_box)?;
            rows.push(json!({ "label": [a1, a2], "error": cmp.error, "relative": cmp.relative }));
            if worst.as_ref().map_or(true, |w| cmp.error > w.error) {
                worst = Some(cmp);
            }
        }
        let worst = worst.expect("labels are listed");
        let passed = worst.error <= config.tolerance;
        Ok(Outcome::new(passed, json!({ "max_error": config.tolerance }), json!(rows)).witness(
            (!passed).then(|| format!("label {:?}: error {:e}", worst.label, worst.error)),
        ))
    });
    r.check("obstruction.transformation-rules", "T and S permute E_1 .. E_6 as their labels", || {
        let rep = shared(&rep)?;
        let book = obstruction::transformation_bookkeeping(&rep)?;
        let series = obstruction::t_rule_on_series(&shared(&basis)?);
        Ok(Outcome::new(book.passed() && series.is_ok(), json!(true), json!({ "bookkeeping": book, "t_rule_on_series": series.is_ok() }))
            .witness(series.err().map(|e| e.to_string())))
    });
    let f: Result<Vec<crate::arith::QSeries>> = basis
        .clone()
        .and_then(|b| obstruction::f_tuple(&Rational::from(-1), &Rational::ZERO, &b));
    r.check("obstruction.f-tuple", "leading terms of f_00 .. f_1/2", || {
        let f = shared(&f)?;
        let names = type_names();
        let mut witness = None;
        let mut actual = BTreeMap::new();
        for (j, (series, reference)) in f.iter().zip(fixtures::F_LEADING).enumerate() {
            let first = Rational::new(reference[0].0 .0, reference[0].0 .1);
            if series.valuation() != first && witness.is_none() {
                witness = Some(format!("f_{} starts at q^{}, expected q^{first}", names[j], series.valuation()));
            }
            for &((en, ed), (cn, cd)) in reference.iter() {
                let e = Rational::new(en, ed);
                let c = series.coeff(&e).unwrap_or_default();
                if c != Cyclotomic::from_rational(Rational::new(cn, cd)) && witness.is_none() {
                    witness = Some(format!("f_{} at q^{e}: expected {}, found {c}", names[j], Rational::new(cn, cd)));
                }
            }
            actual.insert(names[j].clone(), series.to_string());
        }
        Ok(Outcome::new(witness.is_none(), json!("-1/2 + 10q, 120q, 30q^1/2, 4q^1/2, 10q^1/4, 48q^3/4"), json!(actual)).witness(witness))
    });
    r.check("obstruction.product-weights", "weights of the Borcherds products", || {
        let ctx = NContext::shared()?;
        let weights = obstruction::product_weights(ctx.module(), &ctx.kappa, &fixtures::n_type_order(), &shared(&f)?)?;
        let expected: BTreeMap<String, Rational> = fixtures::PRODUCT_WEIGHTS
            .iter()
            .map(|&(t, w)| (t.to_string(), Rational::from(w)))
            .collect();
        let witness = expected
            .iter()
            .find(|(t, w)| weights.get(*t) != Some(w))
            .map(|(t, w)| format!("type {t}: expected {w}, found {:?}", weights.get(t)));
        Ok(Outcome::new(witness.is_none(), json!(expected), json!(weights)).witness(witness))
    });
}

fn lifting_suite(r: &mut Runner) {
    for (m, reference) in ETA_LEADING {
        r.check(&format!("lifting.eta-{m}"), "eta powers against the product expansion", || {
            let fast = lifting::eta_product_coefficients(m, ETA_ORACLE_TERMS);
            let slow = lifting::eta_product_by_multiplication(m, ETA_ORACLE_TERMS);
            let head: Vec<i64> = fast[..reference.len()]
                .iter()
                .map(|c| i64::try_from(c).unwrap_or(i64::MAX))
                .collect();
            let mismatch = fast.iter().zip(&slow).position(|(a, b)| a != b);
            let reference_ok = head == reference;
            Ok(Outcome::new(
                mismatch.is_none() && reference_ok,
                json!({ "leading": reference, "oracle_terms": ETA_ORACLE_TERMS }),
                json!({ "leading": head, "matches_oracle": mismatch.is_none() }),
            )
            .witness(mismatch.map(|k| format!("coefficient of q^{k}: {} against {}", fast[k], slow[k]))))
        });
    }
    let theta_v = NContext::shared().and_then(|ctx| {
        let plane = lifting::fixture_plane(&ctx.disc)?;
        weil::theta_v(ctx.module(), &plane, &ctx.kappa)
    });
    r.check("lifting.multiplier-compatibility", "eta^m theta is of Weil type only for (W, 18) and (W_0, 6)", || {
        let ctx = NContext::shared()?;
        let theta_v = shared(&theta_v)?;
        let theta0 = ctx.w0()?.1[0].clone();
        let n = ctx.signature.1;
        let mut actual = BTreeMap::new();
        for (name, theta) in [("W", &theta_v), ("W0", &theta0)] {
            for m in [18, 6] {
                let rep = lifting::multiplier_compatibility(&ctx.weil, theta, m, n);
                let weight = rep.compatible.then(|| rep.lift_weight.to_string());
                actual.insert(format!("{name},{m}"), json!({ "compatible": rep.compatible, "lift_weight": weight }));
            }
        }
        let expected: BTreeMap<String, Value> = [
            ("W,18", json!({ "compatible": true, "lift_weight": "10" })),
            ("W,6", json!({ "compatible": false, "lift_weight": null })),
            ("W0,18", json!({ "compatible": false, "lift_weight": null })),
            ("W0,6", json!({ "compatible": true, "lift_weight": "4" })),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        let witness = expected
            .iter()
            .find(|(k, v)| actual.get(*k) != Some(v))
            .map(|(k, v)| format!("{k}: expected {v}, found {}", actual[k]));
        Ok(Outcome::new(witness.is_none(), json!(expected), json!(actual)).witness(witness))
    });
    r.check("lifting.theta-support", "support of theta_V for the plane <f1/2, e2/2>", || {
        let ctx = NContext::shared()?;
        let support = lifting::theta_support(&shared(&theta_v)?);
        let mut missing = None;
        for f in fixtures::THETA_SUPPORT_FAMILIES {
            let x = ctx.disc.class_of_half(&f)?;
            if !support.contains(&x) && missing.is_none() {
                missing = Some(format!("class of {f:?}/2 is not in the support"));
            }
        }
        let labels: Vec<String> = support.iter().map(|x| x.to_string()).collect();
        Ok(Outcome::new(missing.is_none(), json!({ "contains": fixtures::THETA_SUPPORT_FAMILIES }), json!({ "support": labels })).witness(missing))
    });
    r.check("lifting.leading-coefficient", "leading Fourier coefficient of the lift at the cusp e1", || {
        let ctx = NContext::shared()?;
        let c = lifting::lift_leading_coefficient(&ctx.disc, &lifting::LiftCheckInput::fixture(shared(&theta_v)?, 18))?;
        Ok(Outcome::new(!c.is_zero(), json!("nonzero"), json!(c)))
    });
    r.check("lifting.theta0-identities", "eigenvalues, kappa-reflection and support of the W_0 generator", || {
        let ctx = NContext::shared()?;
        let rep = lifting::theta0_checks(&ctx.weil, &ctx.kappa, &ctx.w0()?.1[0])?;
        let expected = json!({ "s_eigenvalue": "i", "t_eigenvalue": "i", "kappa_reflection_sign": -1, "kappa_antisymmetric": true });
        Ok(Outcome::new(rep.passed(), expected, json!(rep)))
    });
}

fn restriction_suite(r: &mut Runner) {
    let bound = r.config.box_half_width;
    r.check("restriction.embedding", "M is primitive in N with complement <a1 + a2>", || {
        let (_, rep) = restriction::build_embedding()?;
        let expected = json!({ "primitive": true, "complement_norm": -4, "index": 2, "member_discriminant_orders": [2, 2, 2, 2, 4] });
        Ok(Outcome::new(rep.passed(), expected, json!(rep)))
    });
    r.check("restriction.boundary-configuration", "isotropic points and lines of A_M form a (15)_3 configuration", || {
        let disc = lattice_m().discriminant_module()?;
        let rep = restriction::boundary_configuration(&disc.module);
        let expected = json!({ "points": 15, "lines": 15, "points_per_line": [3], "lines_per_point": [3], "perpendicular_points": [7] });
        Ok(Outcome::new(rep.passed(), expected, json!(rep)))
    });
    for b in FIRST_BOX.min(bound)..=bound {
        r.check(&format!("restriction.heegner-cases.box-{b}"), "restriction of (-2), (-4), (-6) Heegner divisors to M", || {
            let summary = restriction::heegner_restriction_cases(b)?;
            let expected_shape: BTreeSet<(i64, i64, i64, String)> = [-4, -2, -6]
                .into_iter()
                .filter_map(|n| restriction::expected_case(n).map(|(m, r1, t)| (n, m, r1, t.to_string())))
                .collect();
            let passed = summary.counterexamples.is_empty()
                && summary.shape() == expected_shape
                && summary.opposite_m_pairs > 0;
            let witness = summary.counterexamples.first().map(|c| format!("{c:?}"));
            Ok(Outcome::new(
                passed,
                json!({ "cases": expected_shape, "counterexamples": 0, "opposite_m_pairs": "> 0" }),
                json!({ "cases": summary.cases, "counterexamples": summary.counterexamples.len(), "opposite_m_pairs": summary.opposite_m_pairs, "kappa_vectors": summary.kappa_vectors }),
            )
            .witness(witness))
        });
    }
    let v1 = (|| -> Result<Vec<restriction::V1Report>> {
        let ctx = NContext::shared()?;
        let disc_m = lattice_m().discriminant_module()?;
        let kappa_m = disc_m.module.radical_kappa()?;
        let images = restriction::half_vector_images(2)?;
        ctx.planes()
            .iter()
            .map(|p| restriction::v_to_v1(ctx.module(), p, &ctx.kappa, &disc_m.module, &kappa_m, &images))
            .collect()
    })();
    r.check("restriction.v-to-v1", "each V gives a distinct 3-dimensional b-null V_1 containing kappa_M", || {
        let v1 = shared(&v1)?;
        let distinct: BTreeSet<&Vec<crate::fqm::FqmElement>> = v1.iter().map(|v| &v.elements).collect();
        let bad = v1.iter().position(|v| !v.passed());
        Ok(Outcome::new(
            bad.is_none() && distinct.len() == 15,
            json!({ "images": 15, "distinct": 15, "dimension": 3, "b_null": true, "contains_kappa": true }),
            json!({ "images": v1.len(), "distinct": distinct.len(), "all_pass": bad.is_none() }),
        )
        .witness(bad.map(|k| format!("plane {k}: {:?}", v1[k]))))
    });
    r.check("restriction.seven-lines", "isotropic lines of A_M meeting the boundary of each V_1", || {
        let v1 = shared(&v1)?;
        let disc_m = lattice_m().discriminant_module()?;
        let kappa_m = disc_m.module.radical_kappa()?;
        let reports: Vec<restriction::SevenLinesReport> = v1
            .iter()
            .map(|v| restriction::seven_lines(&disc_m.module, &kappa_m, &v.betas))
            .collect();
        let unions: Vec<usize> = reports.iter().map(|r| r.union).collect();
        let bad = reports.iter().position(|r| !r.passed());
        Ok(Outcome::new(bad.is_none(), json!(vec![7; 15]), json!(unions)).witness(bad.map(|k| format!("plane {k}: {:?}", reports[k]))))
    });
}

fn geometry_suite(r: &mut Runner) {
    let config = r.config.clone();
    let lines = geometry::fifteen_lines();
    let cubics = geometry::fifteen_cubics();
    r.check("geometry.canonical-polynomials", "values of the Segre cubic and Igusa quartic", || {
        let (segre, igusa) = geometry::canonical_polys();
        let at = |c: &[i64]| c.iter().map(|&x| Rational::from(x)).collect::<Vec<_>>();
        let actual = json!({
            "igusa(1,1,1,1,-2,-2)": igusa.eval(&at(&[1, 1, 1, 1, -2, -2])),
            "segre(1,-1,0,0,0,0)": segre.eval(&at(&[1, -1, 0, 0, 0, 0])),
            "igusa(1,-1,0,0,0,0)": igusa.eval(&at(&[1, -1, 0, 0, 0, 0])),
        });
        let expected = json!({ "igusa(1,1,1,1,-2,-2)": "0", "segre(1,-1,0,0,0,0)": "0", "igusa(1,-1,0,0,0,0)": "-4" });
        Ok(Outcome::new(actual == expected, expected, actual))
    });
    r.check("geometry.fifteen-lines", "lines (a:a:b:b:-a-b:-a-b) lie on the quartic identically", || {
        let lines = shared(&lines)?;
        Ok(Outcome::equal(&15, &lines.len()))
    });
    r.check("geometry.incidence", "(15)_3 configuration of the lines and boundary points", || {
        let rep = geometry::incidence_153(&shared(&lines)?)?;
        let expected = json!({ "point_degrees": [3], "line_degrees": [3], "meet_point_matches": true, "points_on_quartic": true });
        let actual = json!({ "point_degrees": rep.point_degrees, "line_degrees": rep.line_degrees, "meet_point_matches": rep.meet_point_matches, "points_on_quartic": rep.points_on_quartic });
        Ok(Outcome::new(rep.passed(), expected, actual))
    });
    r.check("geometry.singular-lines", "gradient of the quartic is proportional to (1,...,1) along each line", || {
        let rep = geometry::singular_inclusion_check(&shared(&lines)?);
        let expected = json!({ "lines_passed": 15, "witness_gradient_proportional": false });
        Ok(Outcome::new(rep.passed(), expected, json!(rep)))
    });
    r.check("geometry.cubic-span", "rank of the fifteen cubics and their linear relations", || {
        let span = geometry::cubic_span(&cubics)?;
        let expected = json!({ "rank": 5, "dependencies": 10, "dependencies_verified": true });
        let actual = json!({ "rank": span.rank, "basis": span.basis, "dependencies": span.dependencies.len(), "dependencies_verified": span.dependencies_verified });
        Ok(Outcome::new(span.passed(), expected, actual))
    });
    r.check("geometry.cubic-base-locus", "base lines and double points of the cubic system", || {
        let rep = geometry::base_locus_check(&cubics);
        let expected = json!({ "base_lines": 15, "vanish_on_base_lines": true, "singular_at_base_points": true, "base_points_off_quartic": true });
        Ok(Outcome::new(rep.passed(), expected, json!(rep)))
    });
    r.check("geometry.s6-equivariance", "transpositions act on the cubics by signed permutations", || {
        let rep = geometry::s6_equivariance(&cubics);
        let expected = json!({ "closed": true, "matches_partition_action": true, "relations_hold": true, "orbit_size": 15, "first_cubic_sign_under_12": -1 });
        let actual = json!({ "closed": rep.closed, "matches_partition_action": rep.matches_partition_action, "relations_hold": rep.relations_hold, "orbit_size": rep.orbit_size, "first_cubic_sign_under_12": rep.first_cubic_sign_under_12 });
        Ok(Outcome::new(rep.passed() && rep.first_cubic_sign_under_12 == -1, expected, actual))
    });
    r.check("geometry.image-cubic", "unique cubic relation among the image coordinates", || {
        let rep = geometry::image_cubic_relation(config.image_samples, config.seed)?;
        let expected = json!({ "nullity": 1, "holdout_vanishes": true, "invariance_scales": "all +-1" });
        Ok(Outcome::new(rep.passed(), expected, json!(rep)))
    });
    if config.trials == 0 {
        for id in ["geometry.rnc-fit", "geometry.on-quartic-root", "geometry.degree-16"] {
            r.skip(id, "numerical degree count", "trials = 0");
        }
        return;
    }
    r.check("geometry.rnc-fit", "rational normal curve through a generic point and the six base points", || {
        let q = geometry::curve_quality(config.seed)?;
        let passed = q.residual <= geometry::RESIDUAL_TOLERANCE
            && q.leading_ratio > geometry::LEADING_TOLERANCE
            && q.gauge_distance <= GAUGE_DISTANCE_TOLERANCE;
        let expected = json!({ "residual": format!("<= {:e}", geometry::RESIDUAL_TOLERANCE), "degree": 4, "gauge_distance": format!("<= {GAUGE_DISTANCE_TOLERANCE:e}") });
        Ok(Outcome::new(passed, expected, json!(q)))
    });
    r.check("geometry.on-quartic-root", "a curve through a point of the quartic meets it at that point", || {
        let ratio = geometry::on_quartic_consistency(config.seed)?;
        Ok(Outcome::new(ratio <= geometry::RESIDUAL_TOLERANCE, json!(format!("<= {:e}", geometry::RESIDUAL_TOLERANCE)), json!(ratio)))
    });
    r.check("geometry.degree-16", "the quartic meets the curve in 16 distinct points", || {
        let rep = geometry::degree16_check(config.trials, config.seed);
        let failures: Vec<Value> = rep
            .outcomes
            .iter()
            .filter(|o| !o.passed)
            .map(|o| json!({ "trial": o.index, "point": o.point, "distinct_roots": o.distinct_roots, "min_separation": o.min_separation, "error": o.error }))
            .collect();
        let discarded: usize = rep.outcomes.iter().map(|o| o.discarded.len()).sum();
        let witness = rep.outcomes.iter().find(|o| !o.passed).map(|o| {
            let p = o.point.as_ref().map_or("none".to_string(), |p| p.to_string());
            format!("trial {} at {p}: {} distinct roots, separation {:e}", o.index, o.distinct_roots, o.min_separation)
        });
        Ok(Outcome::new(
            rep.passed(),
            json!({ "fraction": ">= 0.95", "residual": geometry::RESIDUAL_TOLERANCE, "separation": geometry::SEPARATION_TOLERANCE }),
            json!({ "trials": rep.trials, "successes": rep.successes, "fraction": rep.fraction, "discarded_draws": discarded, "failures": failures }),
        )
        .witness(witness))
    });
}

fn notes(suite: Suite) -> Vec<String> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Geometry | Suite::All) {
        out.push(
            "The image cubic is found up to scale; no change of coordinates to sum y = sum y^3 = 0 is attempted.".into(),
        );
    }
    out
}

/// Runs `suite` under `config`; the result is deterministic unless timings are on.
pub fn run(suite: Suite, config: &Config) -> Result<ReportDocument> {
    config.validate()?;
    let mut runner = Runner {
        config,
        checks: Vec::new(),
    };
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    for s in suites {
        match s {
            Suite::Census => census_suite(&mut runner),
            Suite::Weil => weil_suite(&mut runner),
            Suite::Obstruction => obstruction_suite(&mut runner),
            Suite::Lifting => lifting_suite(&mut runner),
            Suite::Restriction => restriction_suite(&mut runner),
            Suite::Geometry => geometry_suite(&mut runner),
            Suite::All => unreachable!("expanded above"),
        }
    }
    let mut checks = runner.checks;
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    let summary = Summary {
        passed: checks.iter().filter(|c| c.status == Status::Pass).count(),
        failed: checks.iter().filter(|c| c.status == Status::Fail).count(),
        skipped: checks.iter().filter(|c| c.status == Status::Skipped).count(),
    };
    Ok(ReportDocument {
        schema_version: SCHEMA_VERSION,
        tool: TOOL_NAME.into(),
        tool_version: TOOL_VERSION.into(),
        suite,
        config: config.clone(),
        summary,
        checks,
        notes: notes(suite),
    })
}

fn cell(v: &Value) -> String {
    let s = match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    let s = s.replace('|', "\\|");
    if s.chars().count() > 120 {
        format!("{}...", s.chars().take(117).collect::<String>())
    } else {
        s
    }
}

/// Markdown view of the JSON form of a report.
pub fn render_markdown(doc: &ReportDocument) -> String {
    let v = serde_json::to_value(doc).expect("report serializes");
    let mut out = String::new();
    out.push_str(&format!(
        "# {} {} report: {}\n\n",
        cell(&v["tool"]),
        cell(&v["tool_version"]),
        cell(&v["suite"])
    ));
    out.push_str("| setting | value |\n|---|---|\n");
    if let Some(cfg) = v["config"].as_object() {
        for (k, val) in cfg {
            out.push_str(&format!("| {k} | {} |\n", cell(val)));
        }
    }
    let s = &v["summary"];
    out.push_str(&format!(
        "\n**{} passed, {} failed, {} skipped**\n\n",
        s["passed"], s["failed"], s["skipped"]
    ));
    out.push_str("| check | status | expected | actual | reference |\n|---|---|---|---|---|\n");
    let checks = v["checks"].as_array().cloned().unwrap_or_default();
    for c in &checks {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} |\n",
            cell(&c["id"]),
            cell(&c["status"]),
            cell(&c["expected"]),
            cell(&c["actual"]),
            cell(&c["reference"])
        ));
    }
    let failing: Vec<&Value> = checks.iter().filter(|c| c["status"] == "fail").collect();
    if !failing.is_empty() {
        out.push_str("\n## Failures\n\n");
        for c in failing {
            out.push_str(&format!("- `{}`: {}\n", cell(&c["id"]), cell(&c["witness"])));
        }
    }
    if let Some(notes) = v["notes"].as_array().filter(|n| !n.is_empty()) {
        out.push_str("\n## Notes\n\n");
        for n in notes {
            out.push_str(&format!("- {}\n", cell(n)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.iter().chain([Suite::All].iter()) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), *s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn config_bounds() {
        assert!(Config::default().validate().is_ok());
        let bad = Config {
            terms: 2,
            ..Config::default()
        };
        assert!(bad.validate().is_err());
        let bad = Config {
            tolerance: -1.0,
            ..Config::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn list_outcome_names_first_difference() {
        let o = Outcome::lists(&[1, 2, 3], &[1, 5, 3], &["a".into(), "b".into(), "c".into()]);
        assert!(!o.passed);
        assert_eq!(o.witness.as_deref(), Some("b: expected 2, found 5"));
    }
}
