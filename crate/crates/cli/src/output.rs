use std::io::Write;
use std::path::{Path, PathBuf};

use crate::args::{Format, OutputArgs};
use crate::error::{CliError, CliResult};

/// One report in both encodings; which ones reach disk or stdout is decided
/// by [`Output`].
pub struct Artifact {
    pub stem: &'static str,
    pub csv: Vec<u8>,
    pub json: String,
    /// Encoding printed to stdout when `--format both` and no directory is set.
    pub prefer_json: bool,
}

pub struct Output {
    dir: Option<PathBuf>,
    format: Format,
}

impl Output {
    pub fn resolve(args: &OutputArgs) -> Self {
        let env = std::env::var_os("BORNCOUNT_OUT").filter(|v| !v.is_empty());
        Self {
            dir: env.map(PathBuf::from).or_else(|| args.out.clone()),
            format: args.format,
        }
    }

    pub fn emit(&self, artifacts: &[Artifact], summary: &[String]) -> CliResult<()> {
        let stdout = std::io::stdout();
        let mut out = stdout.lock();
        match &self.dir {
            None => {
                for a in artifacts {
                    let json = match self.format {
                        Format::Csv => false,
                        Format::Json => true,
                        Format::Both => a.prefer_json,
                    };
                    let written = if json {
                        writeln!(out, "{}", a.json)
                    } else {
                        out.write_all(&a.csv)
                    };
                    written.map_err(|source| CliError::Io {
                        path: PathBuf::from("<stdout>"),
                        source,
                    })?;
                }
            }
            Some(dir) => {
                std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
                    path: dir.clone(),
                    source,
                })?;
                for a in artifacts {
                    if self.format != Format::Json {
                        write_file(&dir.join(format!("{}.csv", a.stem)), &a.csv)?;
                    }
                    if self.format != Format::Csv {
                        let mut json = a.json.clone().into_bytes();
                        json.push(b'\n');
                        write_file(&dir.join(format!("{}.json", a.stem)), &json)?;
                    }
                }
                for line in summary {
                    writeln!(out, "{line}").map_err(|source| CliError::Io {
                        path: PathBuf::from("<stdout>"),
                        source,
                    })?;
                }
            }
        }
        Ok(())
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
