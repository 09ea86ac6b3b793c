//! Curve definitions: a small text format, its parser, and jet evaluation.
//!
//! ```text
//! # circular helix
//! dim 3;
//! x = cos(t); y = sin(t); z = t;
//! domain [0, 2*pi];
//! label "helix";
//! ```

mod builtin;
mod expr;

use std::fmt::Write as _;

pub use builtin::{builtin, builtin_names};
pub use expr::{BinOp, Expr, Func};

use crate::error::{Error, Location, Result};
use crate::jets::{Jet, VecJet, MAX_ORDER};
use expr::{describe, tokenize, Tok, TokenStream};

/// A parametrised curve `t ↦ (x_1(t), …, x_k(t))` on a closed interval.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveModel {
    components: Vec<Expr>,
    domain: (f64, f64),
    periodic: bool,
    label: String,
}

const PERIODIC_TOL: f64 = 1e-9;
const PERIODIC_CHECK_ORDER: usize = 4;

impl CurveModel {
    pub fn new(
        components: Vec<Expr>,
        domain: (f64, f64),
        periodic: bool,
        label: impl Into<String>,
    ) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::DimensionError(format!(
                "a curve needs at least 2 components, got {}",
                components.len()
            )));
        }
        if !(domain.0.is_finite() && domain.1.is_finite() && domain.0 < domain.1) {
            return Err(Error::DimensionError(format!(
                "invalid domain [{}, {}]",
                domain.0, domain.1
            )));
        }
        let model = CurveModel {
            components,
            domain,
            periodic,
            label: label.into(),
        };
        if periodic {
            let a = model.eval_jet(domain.0, PERIODIC_CHECK_ORDER)?;
            let b = model.eval_jet(domain.1, PERIODIC_CHECK_ORDER)?;
            let mut worst = 0.0f64;
            for (ja, jb) in a.components().iter().zip(b.components()) {
                for (x, y) in ja.coeffs().iter().zip(jb.coeffs()) {
                    worst = worst.max((x - y).abs() / x.abs().max(y.abs()).max(1.0));
                }
            }
            if worst > PERIODIC_TOL {
                return Err(Error::NotPeriodic(worst));
            }
        }
        Ok(model)
    }

    /// Ambient dimension `m + 1`.
    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// Number of Euclidean curvatures, `m = dim - 1`.
    pub fn m(&self) -> usize {
        self.dim() - 1
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn period(&self) -> Option<f64> {
        self.periodic.then_some(self.domain.1 - self.domain.0)
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Taylor expansion of every component about `theta0`.
    pub fn eval_jet(&self, theta0: f64, order: usize) -> Result<VecJet> {
        if order > MAX_ORDER {
            return Err(Error::OrderTooLarge {
                requested: order,
                max: MAX_ORDER,
            });
        }
        let (lo, hi) = self.domain;
        let slack = 1e-9 * (hi - lo);
        if !self.periodic && !(theta0 >= lo - slack && theta0 <= hi + slack) {
            return Err(Error::OutsideDomain { theta: theta0, lo, hi });
        }
        let t = Jet::variable(theta0, order);
        let comps = self
            .components
            .iter()
            .map(|e| e.eval_jet(&t))
            .collect::<Result<Vec<_>>>()?;
        VecJet::new(comps)
    }

    pub fn eval_point(&self, theta: f64) -> Result<Vec<f64>> {
        Ok(self.eval_jet(theta, 0)?.value())
    }

    /// Applies `x ↦ rotation · x + translation` to the curve symbolically.
    pub fn rigid_motion(&self, rotation: &[Vec<f64>], translation: &[f64]) -> Result<CurveModel> {
        let n = self.dim();
        if rotation.len() != n || translation.len() != n {
            return Err(Error::DimensionError("rigid motion dimension mismatch".into()));
        }
        let components = (0..n)
            .map(|i| {
                let mut acc = Expr::Num(translation[i]);
                for (j, comp) in self.components.iter().enumerate() {
                    let term = Expr::Binary(
                        BinOp::Mul,
                        Box::new(Expr::Num(rotation[i][j])),
                        Box::new(comp.clone()),
                    );
                    acc = Expr::Binary(BinOp::Add, Box::new(acc), Box::new(term));
                }
                acc
            })
            .collect();
        CurveModel::new(components, self.domain, self.periodic, self.label.clone())
    }

    /// The curve reparametrised by `t = a·u + b` on the corresponding interval.
    pub fn reparametrize_affine(&self, a: f64, b: f64) -> Result<CurveModel> {
        let sub = Expr::Binary(
            BinOp::Add,
            Box::new(Expr::Binary(
                BinOp::Mul,
                Box::new(Expr::Num(a)),
                Box::new(Expr::Param),
            )),
            Box::new(Expr::Num(b)),
        );
        let components = self.components.iter().map(|e| substitute(e, &sub)).collect();
        let (u0, u1) = ((self.domain.0 - b) / a, (self.domain.1 - b) / a);
        CurveModel::new(
            components,
            (u0.min(u1), u0.max(u1)),
            self.periodic,
            self.label.clone(),
        )
    }
}

fn substitute(e: &Expr, param: &Expr) -> Expr {
    match e {
        Expr::Param => param.clone(),
        Expr::Num(_) | Expr::Const(..) => e.clone(),
        Expr::Neg(a) => Expr::Neg(Box::new(substitute(a, param))),
        Expr::Call(f, a) => Expr::Call(*f, Box::new(substitute(a, param))),
        Expr::Binary(op, a, b) => Expr::Binary(
            *op,
            Box::new(substitute(a, param)),
            Box::new(substitute(b, param)),
        ),
    }
}

const SHORT_NAMES: [&str; 4] = ["x", "y", "z", "w"];

fn component_index(name: &str) -> Option<(usize, bool)> {
    if let Some(i) = SHORT_NAMES.iter().position(|n| *n == name) {
        return Some((i, true));
    }
    let digits = name.strip_prefix('x')?;
    let k: usize = digits.parse().ok()?;
    (k >= 1 && !digits.starts_with('0')).then_some((k - 1, false))
}

/// Parses the curve file format.
pub fn parse_curve(source: &str) -> Result<CurveModel> {
    let mut ts = TokenStream::new(tokenize(source)?);
    let mut dim: Option<(usize, Location)> = None;
    let mut comps: Vec<Option<Expr>> = Vec::new();
    let mut naming: Option<bool> = None;
    let mut domain: Option<(f64, f64)> = None;
    let mut periodic = false;
    let mut label = String::new();
    const STATEMENT: &[&str] = &["dim", "domain", "periodic", "label", "component name"];

    loop {
        while ts.eat_sym(';') {}
        let token = ts.peek().clone();
        let name = match &token.tok {
            Tok::Eof => break,
            Tok::Ident(name) => name.clone(),
            other => {
                return Err(ts.error(format!("unexpected {}", describe(other)), STATEMENT));
            }
        };
        ts.next();
        match name.as_str() {
            "dim" => match ts.next().tok {
                Tok::Number(v) if v.fract() == 0.0 && v >= 0.0 => dim = Some((v as usize, token.loc)),
                _ => {
                    return Err(Error::ParseError {
                        location: token.loc,
                        message: "`dim` needs a non-negative integer".into(),
                        expected: vec!["integer".into()],
                    })
                }
            },
            "domain" => {
                ts.expect_sym('[')?;
                let lo = constant_expr(&mut ts)?;
                ts.expect_sym(',')?;
                let hi = constant_expr(&mut ts)?;
                ts.expect_sym(']')?;
                domain = Some((lo, hi));
            }
            "periodic" => periodic = true,
            "label" => match ts.next().tok {
                Tok::Str(s) => label = s,
                _ => {
                    return Err(Error::ParseError {
                        location: token.loc,
                        message: "`label` needs a quoted string".into(),
                        expected: vec!["string".into()],
                    })
                }
            },
            other => {
                let Some((index, short)) = component_index(other) else {
                    return Err(Error::ParseError {
                        location: token.loc,
                        message: format!("unknown statement `{other}`"),
                        expected: STATEMENT.iter().map(|s| s.to_string()).collect(),
                    });
                };
                if *naming.get_or_insert(short) != short {
                    return Err(Error::ParseError {
                        location: token.loc,
                        message: "cannot mix x/y/z/w with x1..xk component names".into(),
                        expected: vec!["component name".into()],
                    });
                }
                ts.expect_sym('=')?;
                let e = ts.expr()?;
                if comps.len() <= index {
                    comps.resize(index + 1, None);
                }
                if comps[index].replace(e).is_some() {
                    return Err(Error::ParseError {
                        location: token.loc,
                        message: format!("component `{other}` defined twice"),
                        expected: vec![],
                    });
                }
            }
        }
        match ts.peek().tok {
            Tok::Sym(';') | Tok::Eof => {}
            _ => {
                return Err(ts.error(
                    format!("unexpected {}", describe(&ts.peek().tok)),
                    &[";", "end of input"],
                ))
            }
        }
    }

    let end = ts.peek().loc;
    if let Some((d, loc)) = dim {
        if d < 2 {
            return Err(Error::DimensionError(format!(
                "dimension {d} at {loc}: curves need at least 2 components"
            )));
        }
        if comps.len() > d {
            return Err(Error::DimensionError(format!(
                "{} components for declared dim {d}",
                comps.len()
            )));
        }
        comps.resize(d, None);
    }
    if comps.len() < 2 {
        return Err(Error::DimensionError(format!(
            "a curve needs at least 2 components, got {}",
            comps.iter().filter(|c| c.is_some()).count()
        )));
    }
    let names = component_names(comps.len());
    let mut components = Vec::with_capacity(comps.len());
    for (i, c) in comps.into_iter().enumerate() {
        match c {
            Some(e) => components.push(e),
            None => {
                return Err(Error::ParseError {
                    location: end,
                    message: format!("missing component `{}`", names[i]),
                    expected: vec![names[i].clone()],
                })
            }
        }
    }
    let Some(domain) = domain else {
        return Err(Error::ParseError {
            location: end,
            message: "missing domain".into(),
            expected: vec!["domain".into()],
        });
    };
    CurveModel::new(components, domain, periodic, label)
}

fn constant_expr(ts: &mut TokenStream) -> Result<f64> {
    let loc = ts.peek().loc;
    let e = ts.expr()?;
    if e.depends_on_param() {
        return Err(Error::ParseError {
            location: loc,
            message: "domain bounds must not depend on t".into(),
            expected: vec!["constant expression".into()],
        });
    }
    e.eval(0.0)
}

fn component_names(dim: usize) -> Vec<String> {
    if dim <= SHORT_NAMES.len() {
        SHORT_NAMES[..dim].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=dim).map(|i| format!("x{i}")).collect()
    }
}

/// Renders a curve in the file format accepted by [`parse_curve`].
pub fn print_curve(model: &CurveModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dim {};", model.dim());
    for (name, e) in component_names(model.dim()).iter().zip(&model.components) {
        let _ = writeln!(out, "{name} = {e};");
    }
    let _ = writeln!(out, "domain [{:?}, {:?}];", model.domain.0, model.domain.1);
    if model.periodic {
        let _ = writeln!(out, "periodic;");
    }
    if !model.label.is_empty() {
        let _ = writeln!(out, "label \"{}\";", model.label.replace('"', "'"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn parses_helix() {
        let c = parse_curve("dim 3; x = cos(t); y = sin(t); z = t; domain [0, 6.5]").unwrap();
        assert_eq!(c.dim(), 3);
        assert_eq!(c.m(), 2);
        assert_eq!(c.domain(), (0.0, 6.5));
        assert!(!c.is_periodic());
    }

    #[test]
    fn unclosed_paren_is_parse_error() {
        match parse_curve("x = cos(t") {
            Err(Error::ParseError { location, .. }) => assert_eq!(location.column, 10),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn r4_self_congruent_curve_lies_on_sphere() {
        let c = parse_curve(
            "dim 4; x = cos(t); y = sin(t); z = cos(2*t); w = sin(2*t); domain [0, 6.2831853]; periodic",
        );
        // 6.2831853 is not 2π to 1e-9, so the periodic check must reject it...
        assert!(matches!(c, Err(Error::NotPeriodic(_))));
        // ...while the exact period is accepted.
        let c = parse_curve(
            "dim 4; x = cos(t); y = sin(t); z = cos(2*t); w = sin(2*t); domain [0, 2*pi]; periodic",
        )
        .unwrap();
        for k in 0..100 {
            let p = c.eval_point(k as f64 * 2.0 * PI / 100.0).unwrap();
            let r = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((r - 2f64.sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn dimension_and_statement_errors() {
        assert!(matches!(
            parse_curve("x = t; domain [0, 1]"),
            Err(Error::DimensionError(_))
        ));
        assert!(matches!(
            parse_curve("dim 1; x = t; domain [0, 1]"),
            Err(Error::DimensionError(_))
        ));
        assert!(matches!(
            parse_curve("dim 3; x = t; y = t; domain [0, 1]"),
            Err(Error::ParseError { .. })
        ));
        assert!(matches!(
            parse_curve("x = t; y = t^2"),
            Err(Error::ParseError { .. })
        ));
        assert!(matches!(
            parse_curve("x = t; x2 = t; domain [0, 1]"),
            Err(Error::ParseError { .. })
        ));
        assert!(matches!(
            parse_curve("x = t; y = t; domain [0, t]"),
            Err(Error::ParseError { .. })
        ));
    }

    #[test]
    fn comments_labels_and_long_names() {
        let src = "# five-dimensional\nx1 = t; x2 = t^2; x3 = t^3; x4 = t^4; x5 = t^5;\n\
                   domain [-1, 1]; label \"moment curve\"";
        let c = parse_curve(src).unwrap();
        assert_eq!(c.dim(), 5);
        assert_eq!(c.label(), "moment curve");
        let again = parse_curve(&print_curve(&c)).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn eval_jet_examples() {
        let helix = parse_curve("x = cos(t); y = sin(t); z = t; domain [0, 2*pi]").unwrap();
        let v = helix.eval_jet(0.0, 3).unwrap();
        let expect = [
            [1.0, 0.0, -0.5, 0.0],
            [0.0, 1.0, 0.0, -1.0 / 6.0],
            [0.0, 1.0, 0.0, 0.0],
        ];
        for (jet, e) in v.components().iter().zip(expect) {
            for (a, b) in jet.coeffs().iter().zip(e) {
                assert!((a - b).abs() < 1e-15);
            }
        }
        let constant = parse_curve("x = 2; y = t; domain [0, 1]").unwrap();
        assert_eq!(constant.eval_jet(0.4, 3).unwrap().component(0).coeffs(), &[2.0, 0.0, 0.0, 0.0]);

        let circle = parse_curve("x = cos(t); y = sin(t); domain [0, 2*pi]; periodic").unwrap();
        let v = circle.eval_jet(PI / 2.0, 2).unwrap();
        let x = v.component(0).coeffs();
        let y = v.component(1).coeffs();
        assert!(x[0].abs() < 1e-15 && (x[1] + 1.0).abs() < 1e-15 && x[2].abs() < 1e-15);
        assert!((y[0] - 1.0).abs() < 1e-15 && y[1].abs() < 1e-15 && (y[2] + 0.5).abs() < 1e-15);
    }

    #[test]
    fn domain_and_order_checks() {
        let c = parse_curve("x = t; y = t^2; domain [0, 1]").unwrap();
        assert!(matches!(c.eval_jet(2.0, 2), Err(Error::OutsideDomain { .. })));
        assert!(matches!(c.eval_jet(0.5, 25), Err(Error::OrderTooLarge { .. })));
        let bad = parse_curve("x = sqrt(t - 2); y = t; domain [0, 1]").unwrap();
        assert!(matches!(bad.eval_jet(0.5, 2), Err(Error::DomainError(_))));
    }
}
