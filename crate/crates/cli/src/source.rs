//! Parsing of integer lists and diagram sources.

use std::path::Path;

use jacobi::diagram::parse_json;
use jacobi::{AnyDiagram, DiagramKey, JacobiDiagram, Skeleton};

fn bad(msg: String) -> jacobi::Error {
    jacobi::Error::InvalidArgument(msg)
}

/// `a..b` (inclusive), `a,b,c` or `a`. Empty ranges are rejected.
pub fn int_list(s: &str) -> jacobi::Result<Vec<usize>> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad(format!("not a non-negative integer: {t:?}")));
    let out: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?);
        (a..=b).collect()
    } else {
        s.split(',').filter(|t| !t.trim().is_empty()).map(num).collect::<jacobi::Result<_>>()?
    };
    if out.is_empty() {
        return Err(bad(format!("empty range {s:?}")));
    }
    Ok(out)
}

pub fn distinct(v: &[usize], what: &str) -> jacobi::Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    match v.iter().find(|x| !seen.insert(**x)) {
        Some(x) => Err(bad(format!("duplicate {what} value {x}"))),
        None => Ok(()),
    }
}

/// Builtins `theta`, `thetaK`, `wheelM`, `tripod`; a canonical key such as
/// `C2.2:0-2,1-3,2-3,2-3`; or a path to a diagram JSON file.
pub fn diagram(src: &str, skeleton: Skeleton) -> jacobi::Result<AnyDiagram> {
    let count = |rest: &str| rest.parse::<usize>().map_err(|_| bad(format!("bad size in {src:?}")));
    if src == "theta" {
        return Ok(AnyDiagram::Undirected(JacobiDiagram::theta(skeleton)));
    }
    if src == "tripod" {
        return Ok(AnyDiagram::Undirected(JacobiDiagram::tripod(skeleton)));
    }
    if let Some(k) = src.strip_prefix("theta") {
        return Ok(AnyDiagram::Undirected(JacobiDiagram::theta_power(count(k)?, skeleton)?));
    }
    if let Some(m) = src.strip_prefix("wheel") {
        return Ok(AnyDiagram::Undirected(JacobiDiagram::wheel(count(m)?, skeleton)?));
    }
    if src.starts_with(['C', 'I']) && src.contains(':') {
        let key: DiagramKey = src.parse()?;
        return Ok(if key.is_directed() {
            AnyDiagram::Directed(key.to_directed()?)
        } else {
            AnyDiagram::Undirected(key.to_diagram()?)
        });
    }
    let path = Path::new(src);
    let text = std::fs::read_to_string(path)
        .map_err(|e| jacobi::Error::InvalidInput(format!("{}: {e}", path.display())))?;
    parse_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(int_list("2..4").unwrap(), vec![2, 3, 4]);
        assert_eq!(int_list("1..=2").unwrap(), vec![1, 2]);
        assert_eq!(int_list("4, 2").unwrap(), vec![4, 2]);
        assert!(int_list("3..2").is_err());
        assert!(int_list("").is_err());
        assert!(distinct(&[1, 2, 1], "n").is_err());
    }

    #[test]
    fn builtins() {
        let d = diagram("wheel4", Skeleton::Circle).unwrap();
        assert_eq!(d.base().degree(), 4);
        assert_eq!(diagram("theta3", Skeleton::Interval).unwrap().base().legs().len(), 6);
        assert!(diagram("wheel1", Skeleton::Circle).is_err());
        let k = diagram("C2.2:0-2,1-3,2-3,2-3", Skeleton::Interval).unwrap();
        assert_eq!(k.base().skeleton(), Skeleton::Circle);
    }
}
