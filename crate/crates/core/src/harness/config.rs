//! `key = value` run configuration.

use std::path::PathBuf;

use super::problems::{Mesh, ProblemId};
use crate::error::{HwenoError, Result};
use crate::integrator::{GammaChoice, SchemeConfig};

/// Split `key = value` lines; `#` starts a comment.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| HwenoError::Parse(format!("line {}: expected key = value", n + 1)))?;
        let k = k.trim();
        if k.is_empty() {
            return Err(HwenoError::Parse(format!("line {}: empty key", n + 1)));
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: Option<ProblemId>,
    pub mesh: Option<Mesh>,
    pub meshes: Vec<usize>,
    pub t_end: Option<f64>,
    pub scheme: SchemeConfig,
    /// `None` lets the command choose (accuracy steps for convergence).
    pub accuracy_dt: Option<bool>,
    pub output: PathBuf,
    pub reference: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            problem: None,
            mesh: None,
            meshes: Vec::new(),
            t_end: None,
            scheme: SchemeConfig::default(),
            accuracy_dt: None,
            output: PathBuf::from("out"),
            reference: None,
            threads: None,
        }
    }
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| HwenoError::Parse(format!("{key}: cannot parse {v:?}")))
}

fn boolean(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(HwenoError::Parse(format!(
            "{key}: expected true or false, got {v:?}"
        ))),
    }
}

impl RunConfig {
    /// Apply pairs in order; later pairs win.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        let mut c = RunConfig::default();
        let mut gamma: Option<&str> = None;
        let mut seed: Option<u64> = None;
        for (k, v) in pairs {
            match k {
                "problem" => c.problem = Some(v.parse()?),
                "cells" | "mesh" => c.mesh = Some(v.parse()?),
                "meshes" => {
                    c.meshes = v
                        .split(',')
                        .map(|s| num(k, s.trim()))
                        .collect::<Result<_>>()?;
                }
                "t_end" | "time" => c.t_end = Some(num(k, v)?),
                "mode" => c.scheme.mode = v.parse()?,
                "gamma" => gamma = Some(v),
                "seed" => seed = Some(num(k, v)?),
                "cfl" => c.scheme.cfl = num(k, v)?,
                "eps" | "epsilon" => c.scheme.eps = num(k, v)?,
                "threshold" => c.scheme.threshold = num(k, v)?,
                "exponent" => c.scheme.exponent = num(k, v)?,
                "reflag" => c.scheme.reflag_each_stage = boolean(k, v)?,
                "dt" => {
                    c.accuracy_dt = Some(match v {
                        "accuracy" => true,
                        "production" => false,
                        _ => {
                            return Err(HwenoError::Parse(format!(
                                "dt: expected accuracy or production, got {v:?}"
                            )))
                        }
                    })
                }
                "output" => c.output = PathBuf::from(v),
                "reference" => c.reference = Some(PathBuf::from(v)),
                "threads" => c.threads = Some(num(k, v)?),
                _ => return Err(HwenoError::config(format!("unknown key {k:?}"))),
            }
        }
        c.scheme.gamma = match gamma {
            None | Some("default") => GammaChoice::default(),
            Some("uniform") => GammaChoice::Uniform,
            Some("random") => GammaChoice::Random {
                seed: seed.ok_or_else(|| HwenoError::config("gamma = random requires a seed"))?,
            },
            Some(other) => {
                return Err(HwenoError::config(format!(
                    "unknown gamma choice {other:?}"
                )))
            }
        };
        c.scheme.validate()?;
        Ok(c)
    }

    pub fn problem(&self) -> Result<ProblemId> {
        self.problem
            .ok_or_else(|| HwenoError::config("no problem given"))
    }

    /// Mesh to run: explicit, else the problem default.
    /// A bare cell count on a 2D problem keeps the default aspect ratio.
    pub fn mesh_for(&self, id: ProblemId) -> Mesh {
        match self.mesh {
            Some(m) if m.ny == 1 => id.mesh_for(m.nx),
            Some(m) => m,
            None => id.info().default_mesh,
        }
    }
}
