//! Plain-text key-value configuration with documented precedence:
//! command-line flags override the config file, which overrides defaults.
//!
//! File format, one `key = value` pair per line, `#` comments:
//!
//! ```text
//! suites = all
//! m = 3,4,5
//! k = 0,1,2
//! xdeg = 3
//! mode = exact
//! seed = 0
//! workers = 0
//! out = report.json
//! ```
//!
//! `workers = 0` means "use available parallelism". `dump-config` emits the
//! effective configuration in this exact format, so a dumped file re-loads to
//! the same run.

use higherspin::verify::{Mode, RunConfig};

#[derive(Debug, Clone)]
pub struct CliConfig {
    pub run: RunConfig,
    pub out: String,
    /// Whether workers was explicitly set (for round-tripping `0 = auto`).
    pub workers_auto: bool,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            run: RunConfig::default(),
            out: "report.json".to_string(),
            workers_auto: true,
        }
    }
}

pub fn parse_u32_list(s: &str) -> Result<Vec<u32>, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        out.push(
            part.parse::<u32>()
                .map_err(|_| format!("invalid number `{part}`"))?,
        );
    }
    if out.is_empty() {
        return Err("empty list".to_string());
    }
    Ok(out)
}

pub fn parse_mode(s: &str) -> Result<Mode, String> {
    match s.trim() {
        "exact" => Ok(Mode::Exact),
        "float" => Ok(Mode::Float),
        other => Err(format!("invalid mode `{other}` (exact|float)")),
    }
}

/// Apply one `key = value` assignment.
fn apply(cfg: &mut CliConfig, key: &str, value: &str) -> Result<(), String> {
    match key {
        "suites" => {
            cfg.run.suites = value
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
            if cfg.run.suites.is_empty() {
                return Err("suites must not be empty".into());
            }
        }
        "m" => cfg.run.ms = parse_u32_list(value)?,
        "k" => cfg.run.ks = parse_u32_list(value)?,
        "xdeg" => {
            cfg.run.max_x_degree = value
                .trim()
                .parse()
                .map_err(|_| format!("invalid xdeg `{value}`"))?
        }
        "mode" => cfg.run.mode = parse_mode(value)?,
        "seed" => {
            cfg.run.seed = value
                .trim()
                .parse()
                .map_err(|_| format!("invalid seed `{value}`"))?
        }
        "workers" => {
            let w: usize = value
                .trim()
                .parse()
                .map_err(|_| format!("invalid workers `{value}`"))?;
            if w == 0 {
                cfg.run.workers = higherspin::util::default_workers();
                cfg.workers_auto = true;
            } else {
                cfg.run.workers = w;
                cfg.workers_auto = false;
            }
        }
        "out" => cfg.out = value.trim().to_string(),
        other => return Err(format!("unknown config key `{other}`")),
    }
    Ok(())
}

pub fn load_file(cfg: &mut CliConfig, path: &str) -> Result<(), String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config file `{path}`: {e}"))?;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{path}:{}: expected `key = value`", lineno + 1))?;
        apply(cfg, key.trim(), value.trim()).map_err(|e| format!("{path}:{}: {e}", lineno + 1))?;
    }
    Ok(())
}

pub fn dump(cfg: &CliConfig) -> String {
    let list = |xs: &[u32]| {
        xs.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    format!(
        "suites = {}\nm = {}\nk = {}\nxdeg = {}\nmode = {}\nseed = {}\nworkers = {}\nout = {}\n",
        cfg.run.suites.join(","),
        list(&cfg.run.ms),
        list(&cfg.run.ks),
        cfg.run.max_x_degree,
        cfg.run.mode.as_str(),
        cfg.run.seed,
        if cfg.workers_auto { 0 } else { cfg.run.workers },
        cfg.out,
    )
}

/// Resolve the report output path: relative paths land in
/// `$HIGHERSPIN_REPORT_DIR` when that is set.
pub fn resolve_out_path(out: &str) -> std::path::PathBuf {
    let path = std::path::Path::new(out);
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os("HIGHERSPIN_REPORT_DIR") {
        Some(dir) => std::path::Path::new(&dir).join(path),
        None => path.to_path_buf(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_round_trips() {
        let mut cfg = CliConfig::default();
        cfg.run.ms = vec![3, 4];
        cfg.run.ks = vec![1];
        cfg.run.max_x_degree = 2;
        cfg.run.seed = 7;
        cfg.out = "r.json".into();
        let text = dump(&cfg);
        let tmp = std::env::temp_dir().join("higherspin-config-test.cfg");
        std::fs::write(&tmp, &text).unwrap();
        let mut reloaded = CliConfig::default();
        load_file(&mut reloaded, tmp.to_str().unwrap()).unwrap();
        assert_eq!(dump(&reloaded), text);
        std::fs::remove_file(&tmp).ok();
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let tmp = std::env::temp_dir().join("higherspin-config-bad.cfg");
        std::fs::write(&tmp, "bogus = 1\n").unwrap();
        let mut cfg = CliConfig::default();
        assert!(load_file(&mut cfg, tmp.to_str().unwrap()).is_err());
        std::fs::remove_file(&tmp).ok();
    }
}
