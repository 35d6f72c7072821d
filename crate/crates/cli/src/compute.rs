use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::ValueEnum;
use serde_json::{json, Value};

use crossprod::commutant::{commutant_part, e0_projection, in_commutant, is_maximal_abelian};
use crossprod::ideals::{ideal_contains, intersect_with_subalgebra, mellankompl_report, vanishing_set};
use crossprod::io::{element_value, parse_element, parse_ideal, parse_subalgebra};
use crossprod::random::ideal_battery;
use crossprod::scalar::unit;
use crossprod::{operator_norm, rep_periodic, CrossedProduct, DynSystem, GenPoly, IdealSpec, Point};

use crate::config::RunConfig;

type Cp = CrossedProduct<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Op {
    Norm,
    Rep,
    Fourier,
    Cesaro,
    Commutant,
    MaximalAbelian,
    E0,
    IdealVanish,
    IdealContains,
    IdealIntersect,
    Mellankompl,
}

#[derive(Debug, Clone, Default)]
pub struct OpArgs {
    pub inputs: Vec<PathBuf>,
    pub j: Option<i64>,
    pub n: Option<u64>,
    pub y: Option<String>,
    pub t: f64,
    pub cutoff: Option<u64>,
    pub subalgebra: Option<String>,
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn input<'a>(args: &'a OpArgs, i: usize, what: &str) -> Result<&'a PathBuf> {
    args.inputs.get(i).ok_or_else(|| anyhow!("missing {what} file argument"))
}

fn element(cp: &Cp, args: &OpArgs, i: usize) -> Result<GenPoly<f64>> {
    let path = input(args, i, "element")?;
    let a = parse_element(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    cp.check(&a)?;
    Ok(a)
}

fn ideal(cp: &Cp, args: &OpArgs) -> Result<IdealSpec<f64>> {
    let path = input(args, 0, "ideal")?;
    let i = parse_ideal(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    i.validate(cp)?;
    Ok(i)
}

fn point(cp: &Cp, y: Option<&str>) -> Result<Point<f64>> {
    let y = y.unwrap_or("0");
    Ok(match cp.system() {
        DynSystem::Finite(fs) => {
            let i: usize = y.parse().with_context(|| format!("--y {y} is not a point index"))?;
            if i >= fs.len() {
                bail!("--y {i} is outside the system of {} points", fs.len());
            }
            Point::Index(i)
        }
        _ => Point::Circle(y.parse().with_context(|| format!("--y {y} is not a turn"))?),
    })
}

pub fn compute(cp: &Cp, op: Op, args: &OpArgs, cfg: &RunConfig) -> Result<Value> {
    Ok(match op {
        Op::Norm => {
            let a = element(cp, args, 0)?;
            let est = operator_norm(cp, &a, &cfg.norm_options())?;
            json!({"norm": est, "upper": est.estimate + est.rigor})
        }
        Op::Rep => {
            let a = element(cp, args, 0)?;
            let y = point(cp, args.y.as_deref())?;
            let m = rep_periodic(cp, y, unit(args.t), &a)?;
            let rows: Vec<Vec<[f64; 2]>> =
                m.row_vecs().into_iter().map(|r| r.into_iter().map(|z| [z.re, z.im]).collect()).collect();
            json!({"t_turns": args.t, "matrix": rows})
        }
        Op::Fourier => {
            let a = element(cp, args, 0)?;
            let j = args.j.ok_or_else(|| anyhow!("fourier needs --j"))?;
            json!({"j": j, "coefficient": element_value(&GenPoly::monomial(j, a.fourier(j)))})
        }
        Op::Cesaro => {
            let a = element(cp, args, 0)?;
            let n = args.n.ok_or_else(|| anyhow!("cesaro needs --n"))?;
            json!({"n": n, "mean": element_value(&a.cesaro(n)), "error_bound": a.cesaro_error_bound(n)})
        }
        Op::Commutant => {
            let a = element(cp, args, 0)?;
            json!({"in_commutant": in_commutant(cp, &a)?, "commutant_part": element_value(&commutant_part(cp, &a)?)})
        }
        Op::MaximalAbelian => {
            let fs = cp.system().as_finite().ok_or_else(|| anyhow!("maximal-abelian needs a finite system"))?;
            json!(is_maximal_abelian(cp, args.cutoff.unwrap_or(2 * fs.period_lcm() as u64))?)
        }
        Op::E0 => element_value(&e0_projection(cp, &element(cp, args, 0)?)?),
        Op::IdealVanish => json!(vanishing_set(cp, &ideal(cp, args)?, &cfg.sample_grid())?),
        Op::IdealContains => {
            let i = ideal(cp, args)?;
            let b = element(cp, args, 1)?;
            json!(ideal_contains(cp, &i, &b, &cfg.sample_grid())?)
        }
        Op::IdealIntersect => {
            let i = ideal(cp, args)?;
            let spec = args.subalgebra.as_deref().ok_or_else(|| anyhow!("ideal-intersect needs --subalgebra"))?;
            let text = if spec.trim_start().starts_with('{') { spec.to_string() } else { read(&PathBuf::from(spec))? };
            let b = parse_subalgebra(&text)?;
            json!({"subalgebra": b, "outcome": intersect_with_subalgebra(cp, &i, &b, &cfg.intersect_options())?})
        }
        Op::Mellankompl => {
            let battery = if cp.system().is_periodic_type() { ideal_battery(cp, cfg.seed, 20) } else { Vec::new() };
            let rep = mellankompl_report(cp, &battery, &cfg.intersect_options())?;
            json!({"consistent": rep.consistent(), "report": rep})
        }
    })
}
