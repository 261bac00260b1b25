//! Arithmetic expressions used in the data files and on the command line.

use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("cannot parse expression `{expr}`: {msg}")]
    Parse { expr: String, msg: String },
    #[error("unknown name `{name}` in expression `{expr}`")]
    UnknownName { expr: String, name: String },
    #[error("expression `{0}` does not evaluate to a finite number")]
    NonFinite(String),
}

/// Evaluates `expr` with the given variables; `pi` is always defined.
pub fn eval(expr: &str, vars: &BTreeMap<String, f64>) -> Result<f64, ExprError> {
    let parsed = exmex::parse::<f64>(expr.trim()).map_err(|e| ExprError::Parse {
        expr: expr.to_string(),
        msg: e.to_string(),
    })?;
    use exmex::Express;
    let values = parsed
        .var_names()
        .iter()
        .map(|name| match name.as_str() {
            "pi" => Ok(std::f64::consts::PI),
            _ => vars
                .get(name)
                .copied()
                .ok_or_else(|| ExprError::UnknownName {
                    expr: expr.to_string(),
                    name: name.clone(),
                }),
        })
        .collect::<Result<Vec<f64>, _>>()?;
    let v = parsed.eval(&values).map_err(|e| ExprError::Parse {
        expr: expr.to_string(),
        msg: e.to_string(),
    })?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ExprError::NonFinite(expr.to_string()))
    }
}

/// Evaluates a constant expression such as `cos(pi/12)` or `100/24`.
pub fn eval_const(expr: &str) -> Result<f64, ExprError> {
    eval(expr, &BTreeMap::new())
}

/// Splits on `sep` outside parentheses.
pub fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Parses a comma-separated list of constant expressions.
pub fn eval_list(s: &str) -> Result<Vec<f64>, ExprError> {
    split_top_level(s, ',')
        .into_iter()
        .map(eval_const)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_division_is_real() {
        assert_eq!(eval_const("1/16").unwrap(), 0.0625);
        assert!((eval_const("100/24").unwrap() - 4.166_666_666_666_667).abs() < 1e-15);
    }

    #[test]
    fn functions_and_pi() {
        let v = eval_const("cos(pi/12)").unwrap();
        assert!((v - (std::f64::consts::PI / 12.0).cos()).abs() < 1e-15);
        assert!((eval_const("tan(pi/12)").unwrap() - (2.0 - 3f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn variables() {
        let mut vars = BTreeMap::new();
        vars.insert("vert".to_string(), 12.0);
        assert_eq!(
            eval("z+vert/6", &{
                let mut v = vars.clone();
                v.insert("z".into(), 1.0);
                v
            })
            .unwrap(),
            3.0
        );
        assert!(matches!(
            eval("foo+1", &vars),
            Err(ExprError::UnknownName { .. })
        ));
    }

    #[test]
    fn top_level_split() {
        assert_eq!(
            split_top_level("cos(a,b), 2, (3,4)", ','),
            vec!["cos(a,b)", " 2", " (3,4)"]
        );
        assert_eq!(eval_list("1, 1/2, 1/16").unwrap(), vec![1.0, 0.5, 0.0625]);
    }
}
