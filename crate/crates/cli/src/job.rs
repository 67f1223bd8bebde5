use std::fs;
use std::path::Path;

use homlab::{Error, Result};

/// Contents of a duality job file.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Job {
    pub family: Vec<String>,
    pub dual: Option<String>,
    pub universe: Option<String>,
    pub budget: Option<u64>,
    pub t: Option<usize>,
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

impl Job {
    /// Parses `family <path> ...`, `dual <path>`, `universe <spec>`,
    /// `budget <nodes>` and `t <n>` lines. Relative paths resolve against
    /// the job file's directory.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Job> {
        let resolve = |p: &str| match base {
            Some(dir) if dir.join(p).is_file() => dir.join(p).display().to_string(),
            _ => p.to_string(),
        };
        let mut job = Job::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            let mut words = body.split_whitespace();
            let Some(key) = words.next() else { continue };
            let rest: Vec<&str> = words.collect();
            match key {
                "family" => {
                    if rest.is_empty() {
                        return Err(err(line, "family needs at least one path"));
                    }
                    job.family.extend(rest.iter().map(|p| resolve(p)));
                }
                "dual" | "universe" | "budget" | "t" => {
                    let [value] = rest[..] else {
                        return Err(err(line, format!("{key} takes exactly one value")));
                    };
                    match key {
                        "dual" => job.dual = Some(resolve(value)),
                        "universe" => job.universe = Some(value.to_string()),
                        "budget" => {
                            job.budget = Some(value.parse().map_err(|_| err(line, format!("bad budget {value:?}")))?)
                        }
                        _ => job.t = Some(value.parse().map_err(|_| err(line, format!("bad t {value:?}")))?),
                    }
                }
                other => return Err(err(line, format!("unknown directive {other:?}"))),
            }
        }
        Ok(job)
    }

    pub fn load(path: &Path) -> Result<Job> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Job::parse(&text, path.parent())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_directives() {
        let job = Job::parse("# ghrv\nfamily DP3\ndual T2\nuniverse all_digraphs:max=4\nbudget 1000\n", None).unwrap();
        assert_eq!(job.family, vec!["DP3"]);
        assert_eq!(job.dual.as_deref(), Some("T2"));
        assert_eq!(job.budget, Some(1000));
        assert_eq!(job.t, None);
    }

    #[test]
    fn rejects_unknown_directive() {
        let e = Job::parse("family K2\nfoo bar\n", None).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert!(Job::parse("dual K1 K2\n", None).is_err());
    }
}
