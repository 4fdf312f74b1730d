//! Config-file merging and the small target-spec grammar shared by the
//! subcommands.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;
use std::sync::Arc;

use hardylab::{
    example1_product, example2_product, Analytic, BlaschkeProduct, BoundaryFunction, BoundaryGrid, Constant,
    Polynomial, SingularInner, SingularMeasure,
};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::CliError;

pub const GRID_ENV: &str = "HARDYLAB_GRID";

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub fn read_table(path: &Path) -> Result<toml::Table, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
    text.parse::<toml::Table>().map_err(|e| config_err(format!("{}: {e}", path.display())))
}

/// Overwrites fields of `args` with same-named keys of `table` (dashes and
/// underscores are interchangeable). Unknown keys are errors.
pub fn overlay<T: Serialize + DeserializeOwned>(args: &T, table: &toml::Table) -> Result<T, CliError> {
    let mut value = serde_json::to_value(args).map_err(|e| config_err(e.to_string()))?;
    let obj = value.as_object_mut().expect("argument structs serialize to objects");
    for (key, v) in table {
        let key = key.replace('-', "_");
        if !obj.contains_key(&key) {
            return Err(config_err(format!("unknown config key {key:?}")));
        }
        let v = serde_json::to_value(v).map_err(|e| config_err(e.to_string()))?;
        obj.insert(key, v);
    }
    serde_json::from_value(value).map_err(|e| config_err(format!("config value: {e}")))
}

fn number(s: &str) -> Result<f64, CliError> {
    s.trim().parse::<f64>().map_err(|_| config_err(format!("not a number: {s:?}")))
}

/// `re` or `re:im`.
fn complex(s: &str) -> Result<Complex64, CliError> {
    match s.split_once(':') {
        Some((re, im)) => Ok(Complex64::new(number(re)?, number(im)?)),
        None => Ok(Complex64::new(number(s)?, 0.0)),
    }
}

fn list<T>(s: &str, f: impl Fn(&str) -> Result<T, CliError>) -> Result<Vec<T>, CliError> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(f).collect()
}

/// Analytic targets:
///
/// - `const:C`                  constant `C` (`re` or `re:im`)
/// - `poly:c0,c1,…`             polynomial coefficients
/// - `blaschke:a1,a2,…`         finite Blaschke product with `λ = 1`
/// - `example1:N`, `example2:N` truncated example products
/// - `singular:THETA:MASS`      single-atom singular inner function
pub fn analytic_target(spec: &str) -> Result<Arc<dyn Analytic>, CliError> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let one = Complex64::new(1.0, 0.0);
    Ok(match kind {
        "const" => Arc::new(Constant(complex(rest)?)),
        "poly" => Arc::new(Polynomial::new(list(rest, complex)?)),
        "blaschke" => Arc::new(BlaschkeProduct::from_points(one, &list(rest, complex)?)?),
        "example1" | "example2" => {
            let n = rest.trim().parse::<usize>().map_err(|_| config_err(format!("bad zero count in {spec:?}")))?;
            Arc::new(if kind == "example1" { example1_product(n)? } else { example2_product(n)? })
        }
        "singular" => {
            let (theta, mass) = rest.split_once(':').ok_or_else(|| config_err("singular:THETA:MASS"))?;
            Arc::new(SingularInner::new(SingularMeasure::from_angles(&[(number(theta)?, number(mass)?)])?))
        }
        _ => return Err(config_err(format!("unknown analytic target {spec:?}"))),
    })
}

/// Boundary targets: `half-indicator`, `one`, `exp` (`e^{iθ}`),
/// `indicator:START:END` (node range), `file:PATH`.
pub fn boundary_target(spec: &str, grid: BoundaryGrid) -> Result<BoundaryFunction, CliError> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    Ok(match kind {
        "half-indicator" => BoundaryFunction::half_indicator(grid),
        "one" => BoundaryFunction::constant(grid, Complex64::new(1.0, 0.0)),
        "exp" => BoundaryFunction::from_fn(grid, |z| z),
        "indicator" => {
            let (a, b) = rest.split_once(':').ok_or_else(|| config_err("indicator:START:END"))?;
            let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| config_err(format!("bad node index {s:?}")));
            let (a, b) = (parse(a)?, parse(b)?);
            if !(a <= b && b <= grid.len()) {
                return Err(config_err(format!("node range {a}..{b} does not fit {} nodes", grid.len())));
            }
            BoundaryFunction::indicator(grid, a..b)
        }
        "file" => read_boundary_file(Path::new(rest))?,
        _ => return Err(config_err(format!("unknown boundary target {spec:?}"))),
    })
}

pub fn read_boundary_file(path: &Path) -> Result<BoundaryFunction, CliError> {
    let file = File::open(path).map_err(|e| config_err(format!("cannot open {}: {e}", path.display())))?;
    Ok(hardylab::io::read_boundary(BufReader::new(file))?)
}

/// Log-modulus data: `cos:A` (`A cos θ`), `shift:S` (`log|S + e^{iθ}|`, `S > 1`),
/// or `file:PATH` (real parts used).
pub fn log_modulus(spec: &str, grid: BoundaryGrid) -> Result<BoundaryFunction, CliError> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let real = |f: &dyn Fn(Complex64) -> f64| BoundaryFunction::from_fn(grid, |z| Complex64::new(f(z), 0.0));
    Ok(match kind {
        "cos" => {
            let a = number(rest)?;
            real(&|z| a * z.re)
        }
        "shift" => {
            let s = number(rest)?;
            if !(s > 1.0) {
                return Err(config_err("shift:S needs S > 1"));
            }
            real(&|z| (z + s).norm().ln())
        }
        "file" => read_boundary_file(Path::new(rest))?.map(|v| Complex64::new(v.re, 0.0)),
        _ => return Err(config_err(format!("unknown log-modulus {spec:?}"))),
    })
}

/// Grid from (in increasing precedence) the subcommand default, the
/// environment, the flag, and the config file.
pub fn resolve_grid(
    default: u32,
    flag: Option<u32>,
    table: Option<&toml::Table>,
) -> Result<(BoundaryGrid, Value), CliError> {
    let mut source = "default";
    let mut m = default;
    let env = std::env::var(GRID_ENV).ok();
    if let Some(v) = &env {
        m = v.trim().parse().map_err(|_| config_err(format!("{GRID_ENV}={v:?} is not an integer")))?;
        source = "environment";
    }
    if let Some(v) = flag {
        m = v;
        source = "flag";
    }
    if let Some(v) = table.and_then(|t| t.get("grid")) {
        m = v
            .as_integer()
            .and_then(|i| u32::try_from(i).ok())
            .ok_or_else(|| config_err("config key grid must be a nonnegative integer"))?;
        source = "config";
    }
    let grid = BoundaryGrid::new(m)?;
    Ok((grid, serde_json::json!({ "log2_size": m, "nodes": grid.len(), "source": source, "env": env })))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_targets() {
        let p = analytic_target("poly:0,0.5:0.5").unwrap();
        assert_eq!(p.eval(Complex64::new(1.0, 0.0)), Complex64::new(0.5, 0.5));
        assert_eq!(analytic_target("const:0.5").unwrap().bound(), 0.5);
        assert!(analytic_target("blaschke:0.5,0:0.3").is_ok());
        assert!(analytic_target("blaschke:1.5").is_err());
        assert!(analytic_target("bogus:1").is_err());
        let grid = BoundaryGrid::new(4).unwrap();
        assert_eq!(boundary_target("indicator:0:8", grid).unwrap(), BoundaryFunction::half_indicator(grid));
        assert!(boundary_target("indicator:0:17", grid).is_err());
        assert!(log_modulus("shift:0.5", grid).is_err());
    }

    #[test]
    fn overlay_replaces_and_rejects() {
        #[derive(Serialize, serde::Deserialize, Debug, PartialEq)]
        struct A {
            atoms: usize,
            mesh_steps: Vec<f64>,
        }
        let a = A { atoms: 2, mesh_steps: vec![0.1] };
        let t: toml::Table = "atoms = 3\nmesh-steps = [0.2, 0.1]".parse().unwrap();
        assert_eq!(overlay(&a, &t).unwrap(), A { atoms: 3, mesh_steps: vec![0.2, 0.1] });
        let bad: toml::Table = "colour = 1".parse().unwrap();
        assert!(matches!(overlay(&a, &bad), Err(CliError::Config(_))));
        let wrong: toml::Table = "atoms = \"x\"".parse().unwrap();
        assert!(matches!(overlay(&a, &wrong), Err(CliError::Config(_))));
    }
}
