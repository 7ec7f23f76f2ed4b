use std::path::Path;

use anyhow::Result;
use jacobi::corpus::{enumerate_diagrams, primitive_audit, Functional};
use jacobi::geom::{linking_with_clearance, writhe_monte_carlo, writhe_with_clearance, PolygonalCurve};
use jacobi::lie::{adjoint, build_gl, build_sl2, defining, double, rep_r, AlgebraSpec, LieAlgebraData, Representation};
use jacobi::orient::{legal_orientations, reduce_wheel_on_circle, verify_leg_bound};
use jacobi::poly::{interpolate, PolynomialJson};
use jacobi::rational::{self, q, Q};
use jacobi::sigma::{sigma_wheel, sigma_wheel_fast, weight_of_chi};
use jacobi::weights::{
    contract_l, directed_l_sum, directed_weight_sum, weight_circle, weight_interval, AlgebraRef, DiagramRef,
};
use jacobi::{canonicalize, canonicalize_directed, AnyDiagram, JacobiDiagram, Skeleton};
use serde_json::{json, Value};

use crate::source::{self, distinct, int_list};
use crate::Report;

fn s(x: &Q) -> String {
    rational::to_string(x)
}

pub fn wheel_vanish(spec: &AlgebraSpec, m: &str) -> Result<Report> {
    let ms = int_list(m)?;
    let (g, b) = spec.build()?;
    let dbl = double(&g)?;
    let r = rep_r(&dbl, &b)?;
    let mut pass = true;
    let mut wheels = Vec::new();
    for m in ms {
        let red = reduce_wheel_on_circle(m)?;
        let w = JacobiDiagram::wheel(m, Skeleton::Circle)?;
        let value = directed_weight_sum(&w, &dbl, &r)?;
        let ok = red.result.is_zero() && value == rational::zero();
        pass &= ok;
        wheels.push(json!({
            "m": m,
            "rewrite_result": red.result.to_json(),
            "weight": s(&value),
            "vanishes": ok,
            "trace": red.trace,
        }));
    }
    Ok(Report { pass, body: json!({"algebra": dbl.data().name(), "representation": r.name(), "wheels": wheels}) })
}

pub fn sigma(spec: &AlgebraSpec, m: usize, n: &str, cross_check: bool) -> Result<Report> {
    if spec.family != "gl" {
        return Err(jacobi::Error::InvalidArgument("sigma ranges over gl(n); use family \"gl\"".into()).into());
    }
    if m < 2 {
        return Err(jacobi::Error::InvalidArgument(format!("sigma needs m >= 2, got {m}")).into());
    }
    let ns = int_list(n)?;
    distinct(&ns, "n")?;
    let mut values = Vec::new();
    let mut points = Vec::new();
    let mut checks = Vec::new();
    let mut checks_ok = true;
    for &k in &ns {
        let (g, b) = AlgebraSpec { n: k, ..spec.clone() }.build()?;
        let v = sigma_wheel_fast(m, &g, &b)?;
        if cross_check {
            let generic = sigma_wheel(m, &g, &b, false)?;
            let chi = weight_of_chi(&JacobiDiagram::wheel(m, Skeleton::Circle)?, &g, &b)?;
            let ok = generic == v && chi == v;
            checks_ok &= ok;
            checks.push(json!({"n": k, "fast": s(&v), "generic": s(&generic), "weight_of_chi": s(&chi), "agree": ok}));
        }
        values.push(json!({"n": k, "value": s(&v)}));
        points.push((q(k as i64), v));
    }
    let p = interpolate(&points)?;
    let bound = m + 1;
    let within = p.degree().is_none_or(|d| d <= bound);
    let mut body = json!({
        "m": m,
        "n": ns,
        "representation": spec.rep,
        "values": values,
        "interpolated_polynomial_coefficients": p.to_strings(),
        "polynomial": p.to_string(),
        "interpolation": PolynomialJson::from(&p),
        "degree_bound": bound,
        "degree_bound_holds": within,
        "determined": points.len() > bound,
        "leading_reference": m.to_string(),
        "leading_matches_reference": p.leading() == q(m as i64),
    });
    if cross_check {
        body["cross_check"] = Value::from(checks);
    }
    Ok(Report { pass: within && checks_ok, body })
}

pub fn weight(spec: &AlgebraSpec, src: &str, skeleton: Skeleton, on_double: bool) -> Result<Report> {
    let (g, b) = spec.build()?;
    let d = source::diagram(src, skeleton)?;
    let base = d.base();
    let mut body = json!({
        "diagram": base.to_json(),
        "degree": base.degree(),
        "algebra": g.name(),
        "representation": b.name(),
    });
    let mut pass = true;
    match (&d, base.skeleton()) {
        (AnyDiagram::Directed(o), sk) => {
            let dbl = double(&g)?;
            let r = rep_r(&dbl, &b)?;
            body["key"] = json!(canonicalize_directed(o).key.to_string());
            body["double_representation"] = json!(r.name());
            if sk == Skeleton::Circle {
                body["weight"] = json!(s(&weight_circle(o.into(), (&dbl).into(), &r)?));
            } else {
                body["l"] = json!(contract_l(o.into(), (&dbl).into())?.to_json());
                body["weight_matrix"] = json!(weight_interval(o.into(), (&dbl).into(), &r)?);
            }
        }
        (AnyDiagram::Undirected(u), Skeleton::Circle) => {
            body["key"] = json!(canonicalize(u).key.to_string());
            body["weight"] = json!(s(&weight_circle(u.into(), (&g).into(), &b)?));
            if on_double {
                let dbl = double(&g)?;
                let r = rep_r(&dbl, &b)?;
                let plain = weight_circle(u.into(), (&dbl).into(), &r)?;
                let summed = directed_weight_sum(u, &dbl, &r)?;
                pass = plain == summed;
                body["double"] = json!({
                    "representation": r.name(),
                    "orientations": legal_orientations(u).len(),
                    "weight": s(&plain),
                    "orientation_sum": s(&summed),
                    "agree": pass,
                });
            }
        }
        (AnyDiagram::Undirected(u), Skeleton::Interval) => {
            body["key"] = json!(canonicalize(u).key.to_string());
            body["l"] = json!(contract_l(u.into(), (&g).into())?.to_json());
            body["weight_matrix"] = json!(weight_interval(u.into(), (&g).into(), &b)?);
            if on_double {
                let dbl = double(&g)?;
                let plain = contract_l(DiagramRef::Plain(u), AlgebraRef::Lie(dbl.data()))?;
                let summed = directed_l_sum(u, &dbl)?;
                pass = plain == summed;
                body["double"] = json!({
                    "orientations": legal_orientations(u).len(),
                    "l": summed.to_json(),
                    "agree": pass,
                });
            }
        }
    }
    Ok(Report { pass, body })
}

pub fn orientations(src: &str, skeleton: Skeleton) -> Result<Report> {
    let d = source::diagram(src, skeleton)?;
    let base = d.base();
    let mut pass = true;
    let mut out = Vec::new();
    for o in legal_orientations(base) {
        let r = verify_leg_bound(&o)?;
        pass &= r.holds;
        out.push(json!({
            "key": canonicalize_directed(&o).key.to_string(),
            "diagram": o.to_json(),
            "leg_bound": r,
        }));
    }
    Ok(Report {
        pass,
        body: json!({
            "key": canonicalize(base).key.to_string(),
            "degree": base.degree(),
            "legs": base.legs().len(),
            "orientations": out,
        }),
    })
}

pub fn corpus(max_degree: usize, skeleton: Skeleton, lines: Option<&Path>, audit: bool) -> Result<Report> {
    let c = enumerate_diagrams(max_degree, skeleton)?;
    if let Some(p) = lines {
        std::fs::write(p, c.to_json_lines())?;
    }
    let mut pass = true;
    let mut violations = Vec::new();
    for e in &c.entries {
        for o in legal_orientations(&e.key.to_diagram()?) {
            if !verify_leg_bound(&o)?.holds {
                violations.push(e.key.to_string());
            }
        }
    }
    pass &= violations.is_empty();
    let counts: Vec<Value> = c
        .counts()
        .into_iter()
        .map(|((d, l), k)| json!({"degree": d, "legs": l, "classes": k}))
        .collect();
    let mut body = json!({
        "skeleton": skeleton,
        "max_degree": max_degree,
        "classes": c.entries.len(),
        "counts": counts,
        "leg_bound_violations": violations,
    });
    if audit {
        if skeleton != Skeleton::Circle {
            return Err(jacobi::Error::InvalidArgument("the primitive audit runs on the circle".into()).into());
        }
        let algs: Vec<LieAlgebraData> = vec![build_gl(2)?, build_gl(3)?, build_sl2()?];
        let reps: Vec<(String, &LieAlgebraData, Representation)> = algs
            .iter()
            .flat_map(|a| {
                [(defining(a), "defining"), (adjoint(a), "adjoint")]
                    .into_iter()
                    .map(move |(r, name)| r.map(|r| (format!("{} {name}", a.name()), a, r)))
            })
            .collect::<jacobi::Result<_>>()?;
        let fs: Vec<Functional> =
            reps.iter().map(|(name, a, r)| Functional { name: name.clone(), algebra: a, rep: r }).collect();
        let mut audits = Vec::new();
        for n in 1..=max_degree.min(4) {
            let a = primitive_audit(&c, n, &fs)?;
            pass &= a.holds;
            audits.push(a);
        }
        body["audit"] = json!(audits);
    }
    Ok(Report { pass, body })
}

fn degeneracy_as_input(e: jacobi::Error) -> jacobi::Error {
    match e {
        jacobi::Error::NumericalDegeneracy(m) => jacobi::Error::InvalidInput(format!("self-intersection: {m}")),
        other => other,
    }
}

pub fn writhe(path: &Path, closed: bool, clearance: f64, mc: Option<u64>, seed: u64) -> Result<Report> {
    const SIGMAS: f64 = 3.0;
    let c = PolygonalCurve::load(path, closed)?;
    let w = writhe_with_clearance(&c, clearance).map_err(degeneracy_as_input)?;
    let mut body = json!({
        "writhe": w,
        "segments": c.segment_count(),
        "length": c.length(),
        "clearance": clearance,
    });
    let mut pass = true;
    if let Some(n) = mc {
        let e = writhe_monte_carlo(&c, n, seed)?;
        let z = (e.value - w).abs() / e.std_error;
        pass = z <= SIGMAS;
        body["monte_carlo"] = json!({
            "value": e.value,
            "std_error": e.std_error,
            "samples": e.samples,
            "seed": seed,
            "deviation_in_std_errors": z,
            "tolerance_std_errors": SIGMAS,
            "agree": pass,
        });
    }
    Ok(Report { pass, body })
}

pub fn link(a: &Path, b: &Path, clearance: f64, tolerance: f64) -> Result<Report> {
    let c1 = PolygonalCurve::load(a, true)?;
    let c2 = PolygonalCurve::load(b, true)?;
    let l = linking_with_clearance(&c1, &c2, clearance)?;
    let nearest = l.round();
    let deviation = (l - nearest).abs();
    let pass = deviation <= tolerance;
    Ok(Report {
        pass,
        body: json!({
            "linking": l,
            "nearest_integer": nearest as i64,
            "deviation": deviation,
            "tolerance": tolerance,
        }),
    })
}

pub fn algebra(spec: &AlgebraSpec, on_double: bool) -> Result<Report> {
    let (g, b) = spec.build()?;
    let body = if on_double {
        let dbl = double(&g)?;
        json!({"algebra": dbl.data().to_json(), "representation": rep_r(&dbl, &b)?.name()})
    } else {
        json!({"algebra": g.to_json(), "representation": b.name()})
    };
    Ok(Report { pass: true, body })
}
