//! Verification campaigns: compute `D_A(n)` and `E_A(n)` independently over a
//! grid of cyclic orders and weight families and tabulate the comparison with
//! `D_A(n) + n - 1`.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{gcd, GroupSpec, WeightSet};
use crate::search::{egz_constant, max_zero_sum_free_length, SearchBudget};
use crate::{Error, Result};

pub const CSV_HEADER: &str = "n,weights,d_a,e_a,predicted,equal,witness_d,witness_e,nodes,elapsed_ms,status";

/// Exit status for campaigns and lemma suites.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_FALSIFIED: i32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightFamily {
    /// `{1}`.
    Singleton,
    /// `{1, -1}`.
    PlusMinusOne,
    /// Residues coprime to `n`.
    Units,
    /// Every nonempty subset of `{1, ..., n-1}`.
    AllSubsets,
    /// `count` random `k`-subsets of `{1, ..., n-1}`.
    Random {
        k: usize,
        count: usize,
    },
    Explicit(Vec<i64>),
}

impl WeightFamily {
    /// Weight sets of this family for `Z/n`. The seed only matters for `Random`.
    pub fn members(&self, n: u32, seed: u64) -> Vec<WeightSet> {
        let g = GroupSpec::cyclic(n);
        let ws = |raw: &[i64]| WeightSet::new(raw, &g).expect("nonempty");
        match self {
            WeightFamily::Singleton => vec![ws(&[1])],
            WeightFamily::PlusMinusOne => vec![ws(&[1, -1])],
            WeightFamily::Units => {
                let u: Vec<i64> = (1..n.max(2) as i64).filter(|&a| gcd(a as u64, n as u64) == 1).collect();
                vec![ws(if u.is_empty() { &[1] } else { &u })]
            }
            WeightFamily::AllSubsets => {
                let m = n.saturating_sub(1);
                (1u64..1 << m)
                    .map(|mask| {
                        let raw: Vec<i64> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| i as i64 + 1).collect();
                        ws(&raw)
                    })
                    .collect()
            }
            WeightFamily::Random { k, count } => {
                let pool = n.saturating_sub(1) as usize;
                if *k == 0 || *k > pool {
                    return Vec::new();
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                (0..*count)
                    .map(|_| {
                        let raw: Vec<i64> = sample(&mut rng, pool, *k).into_iter().map(|i| i as i64 + 1).collect();
                        ws(&raw)
                    })
                    .collect()
            }
            WeightFamily::Explicit(raw) => vec![ws(raw)],
        }
    }
}

impl FromStr for WeightFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown weight family {s:?}"));
        match s {
            "singleton" => Ok(WeightFamily::Singleton),
            "pm1" => Ok(WeightFamily::PlusMinusOne),
            "units" => Ok(WeightFamily::Units),
            "all-subsets" => Ok(WeightFamily::AllSubsets),
            _ => {
                if let Some(rest) = s.strip_prefix("random:") {
                    let (k, count) = rest.split_once(':').ok_or_else(bad)?;
                    let k = k.parse().map_err(|_| bad())?;
                    let count = count.parse().map_err(|_| bad())?;
                    Ok(WeightFamily::Random { k, count })
                } else {
                    let raw =
                        s.split(',').map(|t| t.trim().parse::<i64>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
                    if raw.is_empty() {
                        return Err(bad());
                    }
                    Ok(WeightFamily::Explicit(raw))
                }
            }
        }
    }
}

impl fmt::Display for WeightFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightFamily::Singleton => f.write_str("singleton"),
            WeightFamily::PlusMinusOne => f.write_str("pm1"),
            WeightFamily::Units => f.write_str("units"),
            WeightFamily::AllSubsets => f.write_str("all-subsets"),
            WeightFamily::Random { k, count } => write!(f, "random:{k}:{count}"),
            WeightFamily::Explicit(raw) => {
                let parts: Vec<String> = raw.iter().map(|a| a.to_string()).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::Parse(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CampaignConfig {
    pub n_min: u32,
    pub n_max: u32,
    pub families: Vec<WeightFamily>,
    /// Node cap per search.
    pub max_nodes: u64,
    /// Length cap for the `D_A` search; `4n + 16` when `None`.
    pub max_length: Option<usize>,
    pub allow_unit_pruning: bool,
    /// The `E_A` search may build sequences up to `D_A + n + ceiling_slack`.
    pub ceiling_slack: usize,
    /// `all-subsets` is skipped above this order.
    pub all_subsets_max_n: u32,
    pub jobs: usize,
    pub seed: u64,
    /// Off by default so identical configurations give identical bytes.
    pub record_timing: bool,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            n_min: 2,
            n_max: 8,
            families: vec![WeightFamily::Singleton],
            max_nodes: SearchBudget::DEFAULT_MAX_NODES,
            max_length: None,
            allow_unit_pruning: true,
            ceiling_slack: 2,
            all_subsets_max_n: 8,
            jobs: 1,
            seed: 0,
            record_timing: false,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(Error::Precondition(format!("empty order range [{}, {}]", self.n_min, self.n_max)));
        }
        if self.jobs == 0 {
            return Err(Error::Precondition("jobs must be at least 1".into()));
        }
        if self.families.is_empty() {
            return Err(Error::Precondition("no weight family".into()));
        }
        Ok(())
    }

    /// Grid cells in emission order: `n` ascending, then weight sets
    /// lexicographically, duplicates removed.
    pub fn cells(&self) -> Vec<(u32, WeightSet)> {
        let mut out = Vec::new();
        for n in self.n_min..=self.n_max {
            let mut sets: Vec<WeightSet> = self
                .families
                .iter()
                .filter(|f| !(**f == WeightFamily::AllSubsets && n > self.all_subsets_max_n))
                .flat_map(|f| f.members(n, self.seed))
                .collect();
            sets.sort();
            sets.dedup();
            out.extend(sets.into_iter().map(|a| (n, a)));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CellStatus {
    Ok,
    Inconclusive,
    /// `E_A != D_A + n - 1`: a falsification candidate.
    Mismatch,
}

impl fmt::Display for CellStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CellStatus::Ok => "ok",
            CellStatus::Inconclusive => "inconclusive",
            CellStatus::Mismatch => "mismatch",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationRow {
    pub n: u32,
    pub weights: String,
    pub d_a: Option<usize>,
    pub e_a: Option<usize>,
    pub predicted: Option<usize>,
    pub equal: bool,
    pub witness_d: String,
    pub witness_e: String,
    pub nodes: u64,
    pub elapsed_ms: Option<u64>,
    pub status: CellStatus,
}

/// Computes one cell. `E_A` is searched with ceiling `D_A + n + slack`, which
/// only bounds how long a bad sequence may grow; its value is never assumed.
pub fn verify_cell(n: u32, weights: &WeightSet, config: &CampaignConfig) -> VerificationRow {
    let started = Instant::now();
    let group = GroupSpec::cyclic(n);
    let order = group.order();
    let budget = SearchBudget {
        max_length: config.max_length.unwrap_or(4 * order + 16),
        max_nodes: config.max_nodes,
        allow_unit_pruning: config.allow_unit_pruning,
    };
    let mut row = VerificationRow {
        n,
        weights: weights.to_string(),
        d_a: None,
        e_a: None,
        predicted: None,
        equal: false,
        witness_d: String::new(),
        witness_e: String::new(),
        nodes: 0,
        elapsed_ms: None,
        status: CellStatus::Inconclusive,
    };
    let d = max_zero_sum_free_length(&group, weights, &budget);
    let e_budget = match &d {
        Ok(d) => budget.with_max_length(d.value + order + config.ceiling_slack),
        Err(_) => budget,
    };
    let e = egz_constant(&group, weights, order, &e_budget);
    for r in [&d, &e] {
        match r {
            Ok(c) => row.nodes += c.nodes_explored,
            Err(Error::Inconclusive { nodes, .. }) => row.nodes += nodes,
            Err(_) => {}
        }
    }
    if let Ok(d) = &d {
        row.d_a = Some(d.value);
        row.predicted = Some(d.value + order - 1);
        row.witness_d = d.witness.to_string();
    }
    if let Ok(e) = &e {
        row.e_a = Some(e.value);
        row.witness_e = e.witness.to_string();
    }
    if let (Some(e), Some(p)) = (row.e_a, row.predicted) {
        row.equal = e == p;
        row.status = if row.equal { CellStatus::Ok } else { CellStatus::Mismatch };
    }
    if config.record_timing {
        row.elapsed_ms = Some(started.elapsed().as_millis() as u64);
    }
    row
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Campaign {
    pub rows: Vec<VerificationRow>,
}

impl Campaign {
    pub fn mismatches(&self) -> impl Iterator<Item = &VerificationRow> {
        self.rows.iter().filter(|r| r.status == CellStatus::Mismatch)
    }

    pub fn inconclusive(&self) -> impl Iterator<Item = &VerificationRow> {
        self.rows.iter().filter(|r| r.status == CellStatus::Inconclusive)
    }

    /// 3 if any cell is a falsification candidate, else 2 if any cell is
    /// inconclusive, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.mismatches().next().is_some() {
            EXIT_FALSIFIED
        } else if self.inconclusive().next().is_some() {
            EXIT_INCONCLUSIVE
        } else {
            EXIT_OK
        }
    }

    pub fn summary(&self) -> String {
        let ok = self.rows.iter().filter(|r| r.status == CellStatus::Ok).count();
        format!(
            "{} cells: {} equal, {} mismatch, {} inconclusive",
            self.rows.len(),
            ok,
            self.mismatches().count(),
            self.inconclusive().count()
        )
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(CSV_HEADER.split(',')).map_err(|e| Error::Serialize(e.to_string()))?;
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.rows {
            w.write_record([
                r.n.to_string(),
                r.weights.clone(),
                opt(r.d_a),
                opt(r.e_a),
                opt(r.predicted),
                r.equal.to_string(),
                r.witness_d.clone(),
                r.witness_e.clone(),
                r.nodes.to_string(),
                r.elapsed_ms.map(|x| x.to_string()).unwrap_or_default(),
                r.status.to_string(),
            ])
            .map_err(|e| Error::Serialize(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Serialize(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Serialize(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(&self.rows).map_err(|e| Error::Serialize(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}

/// Runs every cell on a pool of `config.jobs` workers. Rows come back in
/// [`CampaignConfig::cells`] order whatever the scheduling.
pub fn run_campaign(config: &CampaignConfig) -> Result<Campaign> {
    config.validate()?;
    let cells = config.cells();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    let rows = pool.install(|| cells.par_iter().map(|(n, a)| verify_cell(*n, a, config)).collect());
    Ok(Campaign { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_parsing() {
        assert_eq!("pm1".parse::<WeightFamily>().unwrap(), WeightFamily::PlusMinusOne);
        assert_eq!("random:2:5".parse::<WeightFamily>().unwrap(), WeightFamily::Random { k: 2, count: 5 });
        assert_eq!("1,-1,3".parse::<WeightFamily>().unwrap(), WeightFamily::Explicit(vec![1, -1, 3]));
        assert!("random:2".parse::<WeightFamily>().is_err());
        assert!("bogus".parse::<WeightFamily>().is_err());
        for f in ["singleton", "pm1", "units", "all-subsets", "random:3:4", "2,5"] {
            assert_eq!(f.parse::<WeightFamily>().unwrap().to_string(), f);
        }
    }

    #[test]
    fn family_members() {
        let show = |f: WeightFamily, n| f.members(n, 0).iter().map(|a| a.to_string()).collect::<Vec<_>>();
        assert_eq!(show(WeightFamily::Units, 10), vec!["1,3,7,9"]);
        assert_eq!(show(WeightFamily::PlusMinusOne, 2), vec!["1"]);
        assert_eq!(show(WeightFamily::AllSubsets, 4).len(), 7);
        assert_eq!(show(WeightFamily::Random { k: 2, count: 3 }, 6).len(), 3);
        assert!(show(WeightFamily::Random { k: 5, count: 3 }, 4).is_empty());
        assert_eq!(
            WeightFamily::Random { k: 2, count: 3 }.members(7, 9),
            WeightFamily::Random { k: 2, count: 3 }.members(7, 9)
        );
    }

    #[test]
    fn cells_are_sorted_and_deduplicated() {
        let config = CampaignConfig {
            n_min: 2,
            n_max: 3,
            families: vec![WeightFamily::PlusMinusOne, WeightFamily::Singleton, WeightFamily::Units],
            ..Default::default()
        };
        let cells: Vec<String> = config.cells().iter().map(|(n, a)| format!("{n}:{a}")).collect();
        assert_eq!(cells, vec!["2:1", "3:1", "3:1,2"]);
    }

    #[test]
    fn all_subsets_gate() {
        let config =
            CampaignConfig { n_min: 8, n_max: 9, families: vec![WeightFamily::AllSubsets], ..Default::default() };
        assert!(config.cells().iter().all(|(n, _)| *n == 8));
    }

    #[test]
    fn small_campaign_renders() {
        let config = CampaignConfig { n_min: 2, n_max: 4, ..Default::default() };
        let c = run_campaign(&config).unwrap();
        assert_eq!(c.exit_code(), EXIT_OK);
        let csv = c.to_csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(lines.next(), Some("2,1,2,3,3,true,1,\"0,1\",9,,ok"));
        let json: serde_json::Value = serde_json::from_str(&c.to_json().unwrap()).unwrap();
        assert_eq!(json[2]["e_a"], 7);
        assert_eq!(json[2]["witness_e"], "0,0,0,1,1,1");
        assert_eq!(json[0]["elapsed_ms"], serde_json::Value::Null);
    }

    #[test]
    fn inconclusive_cells_do_not_abort() {
        let config = CampaignConfig { n_min: 5, n_max: 6, max_nodes: 3, ..Default::default() };
        let c = run_campaign(&config).unwrap();
        assert_eq!(c.rows.len(), 2);
        assert!(c.rows.iter().all(|r| r.status == CellStatus::Inconclusive && !r.equal));
        assert_eq!(c.exit_code(), EXIT_INCONCLUSIVE);
    }

    #[test]
    fn invalid_configs() {
        assert!(CampaignConfig { n_min: 5, n_max: 4, ..Default::default() }.validate().is_err());
        assert!(CampaignConfig { jobs: 0, ..Default::default() }.validate().is_err());
        assert!(run_campaign(&CampaignConfig { n_min: 0, ..Default::default() }).is_err());
    }
}
