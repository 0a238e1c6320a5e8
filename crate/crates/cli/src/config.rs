//! Run configuration: one plain-text key-value file plus flag overrides
//! (flags win). Unknown keys are rejected and every numeric parameter is
//! range-checked before any data is touched.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use bibnet::ingest::WindowSpec;

#[derive(Debug, Clone)]
pub struct RunConfig {
    // data inputs
    pub aupap: Option<PathBuf>,
    pub pappap: Option<PathBuf>,
    pub author_names: Option<PathBuf>,
    pub graph: Option<PathBuf>,
    pub graph_windows: Vec<PathBuf>,
    pub permissive: bool,
    // network construction
    pub windows: WindowSpec,
    pub degree_min: u32,
    pub weight_min: u32,
    pub fresh_years: i32,
    pub m0: u32,
    pub journals: Option<Vec<String>>,
    pub year_range: (i32, i32),
    // algorithm parameters
    pub k: usize,
    pub l: usize,
    pub t0: usize,
    pub kmax: usize,
    pub k0: usize,
    pub k0_schedule: Vec<usize>,
    pub k0_overrides: Option<PathBuf>,
    pub c0: f64,
    /// None means the per-node default log(n).
    pub truncate_t: Option<f64>,
    pub p_stop: f64,
    pub size_stop: usize,
    pub restarts: usize,
    pub quantile: f64,
    pub top_n: Option<usize>,
    // sankey
    pub sankey_ks: Vec<usize>,
    pub sankey_windows: Vec<(i32, i32)>,
    pub sankey_journals: Option<Vec<String>>,
    pub sankey_m0: u32,
    // reproducibility and outputs
    pub seed: u64,
    pub workers: usize,
    pub out: PathBuf,
    pub model: Option<PathBuf>,
    pub authors: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            aupap: None,
            pappap: None,
            author_names: None,
            graph: None,
            graph_windows: Vec::new(),
            permissive: false,
            windows: WindowSpec::default(),
            degree_min: 60,
            weight_min: 2,
            fresh_years: 10,
            m0: 3,
            journals: None,
            year_range: (1975, 2015),
            k: 3,
            l: 15,
            t0: 1,
            kmax: 20,
            k0: 6,
            k0_schedule: Vec::new(),
            k0_overrides: None,
            c0: 1.0,
            truncate_t: None,
            p_stop: 0.001,
            size_stop: 250,
            restarts: 20,
            quantile: 0.9,
            top_n: None,
            sankey_ks: vec![3, 4, 3],
            sankey_windows: vec![(1975, 1997), (1995, 2007), (2005, 2015)],
            sankey_journals: Some(
                ["AoS", "Bka", "JASA", "JRSSB"].iter().map(|s| s.to_string()).collect(),
            ),
            sankey_m0: 1,
            seed: 0,
            workers: 0,
            out: PathBuf::from("out"),
            model: None,
            authors: None,
        }
    }
}

fn parse_year_pair(value: &str) -> Result<(i32, i32)> {
    let (a, b) = value.split_once('-').ok_or_else(|| anyhow!("expected START-END"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn parse_list(value: &str) -> Vec<String> {
    value.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

impl RunConfig {
    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "aupap" => self.aupap = Some(value.into()),
            "pappap" => self.pappap = Some(value.into()),
            "author_names" => self.author_names = Some(value.into()),
            "graph" => self.graph = Some(value.into()),
            "graph_windows" => {
                self.graph_windows = parse_list(value).into_iter().map(PathBuf::from).collect()
            }
            "permissive" => self.permissive = value.parse()?,
            "windows" => self.windows = WindowSpec::parse(value).map_err(|e| anyhow!("{e}"))?,
            "degree_min" => self.degree_min = value.parse()?,
            "weight_min" => self.weight_min = value.parse()?,
            "fresh_years" => self.fresh_years = value.parse()?,
            "m0" => self.m0 = value.parse()?,
            "journals" => self.journals = Some(parse_list(value)),
            "year_range" => self.year_range = parse_year_pair(value)?,
            "k" => self.k = value.parse()?,
            "l" => self.l = value.parse()?,
            "t0" => self.t0 = value.parse()?,
            "kmax" => self.kmax = value.parse()?,
            "k0" => self.k0 = value.parse()?,
            "k0_schedule" => {
                self.k0_schedule =
                    parse_list(value).iter().map(|v| v.parse()).collect::<Result<_, _>>()?
            }
            "k0_overrides" => self.k0_overrides = Some(value.into()),
            "c0" => self.c0 = value.parse()?,
            "truncate_t" => {
                self.truncate_t = if value == "auto" { None } else { Some(value.parse()?) }
            }
            "p_stop" => self.p_stop = value.parse()?,
            "size_stop" => self.size_stop = value.parse()?,
            "restarts" => self.restarts = value.parse()?,
            "quantile" => self.quantile = value.parse()?,
            "top_n" => self.top_n = Some(value.parse()?),
            "sankey_ks" => {
                self.sankey_ks =
                    parse_list(value).iter().map(|v| v.parse()).collect::<Result<_, _>>()?
            }
            "sankey_windows" => {
                self.sankey_windows = parse_list(value)
                    .iter()
                    .map(|w| parse_year_pair(w))
                    .collect::<Result<Vec<_>>>()?
            }
            "sankey_journals" => self.sankey_journals = Some(parse_list(value)),
            "sankey_m0" => self.sankey_m0 = value.parse()?,
            "seed" => self.seed = value.parse()?,
            "workers" => self.workers = value.parse()?,
            "out" => self.out = value.into(),
            "model" => self.model = Some(value.into()),
            "authors" => self.authors = Some(value.to_string()),
            other => bail!("unknown config key '{other}'"),
        }
        Ok(())
    }

    pub fn from_file(path: &std::path::Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("{}:{}: expected key = value", path.display(), lineno + 1))?;
            cfg.set(key.trim(), value)
                .with_context(|| format!("{}:{}", path.display(), lineno + 1))?;
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p_stop > 0.0 && self.p_stop < 1.0) {
            bail!("p_stop must be in (0, 1), got {}", self.p_stop);
        }
        if !(self.quantile > 0.0 && self.quantile < 1.0) {
            bail!("quantile must be in (0, 1), got {}", self.quantile);
        }
        if self.k < 2 || self.k > 50 {
            bail!("k must be in [2, 50], got {}", self.k);
        }
        if self.k0 < 2 || self.k0 > 50 {
            bail!("k0 must be in [2, 50], got {}", self.k0);
        }
        if self.l < 1 {
            bail!("l must be >= 1");
        }
        if self.t0 < 1 {
            bail!("t0 must be >= 1 (windows are 1-based)");
        }
        if self.m0 < 1 || self.sankey_m0 < 1 {
            bail!("m0 must be >= 1");
        }
        if self.fresh_years < 1 {
            bail!("fresh_years must be >= 1");
        }
        if self.c0 < 0.0 {
            bail!("c0 must be >= 0");
        }
        if let Some(t) = self.truncate_t {
            if !(t > 0.0) {
                bail!("truncate_t must be > 0 or 'auto'");
            }
        }
        if self.restarts < 1 {
            bail!("restarts must be >= 1");
        }
        if self.year_range.0 > self.year_range.1 {
            bail!("year_range start exceeds end");
        }
        if self.sankey_ks.iter().any(|&k| k < 2) {
            bail!("sankey_ks entries must be >= 2");
        }
        Ok(())
    }

    /// Canonical text of the resolved configuration, hashed into the
    /// manifest.
    pub fn resolved_text(&self) -> String {
        let opt_path = |p: &Option<PathBuf>| {
            p.as_ref().map(|p| p.display().to_string()).unwrap_or_default()
        };
        let windows: Vec<String> =
            self.windows.windows.iter().map(|(s, e)| format!("{s}-{e}")).collect();
        let sankey_windows: Vec<String> =
            self.sankey_windows.iter().map(|(s, e)| format!("{s}-{e}")).collect();
        format!(
            "aupap={}\npappap={}\nauthor_names={}\ngraph={}\ngraph_windows={}\npermissive={}\n\
             windows={}\ndegree_min={}\nweight_min={}\nfresh_years={}\nm0={}\njournals={}\n\
             year_range={}-{}\nk={}\nl={}\nt0={}\nkmax={}\nk0={}\nk0_schedule={}\nk0_overrides={}\n\
             c0={}\ntruncate_t={}\np_stop={}\nsize_stop={}\nrestarts={}\nquantile={}\ntop_n={}\n\
             sankey_ks={}\nsankey_windows={}\nsankey_journals={}\nsankey_m0={}\nseed={}\nauthors={}\n",
            opt_path(&self.aupap),
            opt_path(&self.pappap),
            opt_path(&self.author_names),
            opt_path(&self.graph),
            self.graph_windows.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(","),
            self.permissive,
            windows.join(","),
            self.degree_min,
            self.weight_min,
            self.fresh_years,
            self.m0,
            self.journals.as_ref().map(|j| j.join(",")).unwrap_or_default(),
            self.year_range.0,
            self.year_range.1,
            self.k,
            self.l,
            self.t0,
            self.kmax,
            self.k0,
            self.k0_schedule.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
            opt_path(&self.k0_overrides),
            self.c0,
            self.truncate_t.map(|t| t.to_string()).unwrap_or_else(|| "auto".into()),
            self.p_stop,
            self.size_stop,
            self.restarts,
            self.quantile,
            self.top_n.map(|t| t.to_string()).unwrap_or_default(),
            self.sankey_ks.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
            sankey_windows.join(","),
            self.sankey_journals.as_ref().map(|j| j.join(",")).unwrap_or_default(),
            self.sankey_m0,
            self.seed,
            self.authors.clone().unwrap_or_default(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn parses_and_overrides() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# comment\nm0 = 2\nseed = 42\nout = results").unwrap();
        let mut cfg = RunConfig::from_file(f.path()).unwrap();
        assert_eq!(cfg.m0, 2);
        assert_eq!(cfg.seed, 42);
        cfg.set("m0", "4").unwrap();
        assert_eq!(cfg.m0, 4);
        cfg.validate().unwrap();
    }

    #[test]
    fn unknown_key_rejected() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "nope = 1").unwrap();
        assert!(RunConfig::from_file(f.path()).is_err());
    }

    #[test]
    fn out_of_range_rejected() {
        let mut cfg = RunConfig::default();
        cfg.p_stop = 1.5;
        assert!(cfg.validate().is_err());
    }
}
