//! Line-oriented formula text format.
//!
//! ```text
//! vars: a b c d      # optional header fixing the variable order
//! a ->               # ⋀{a} → ⊥
//! -> b c             # ⊤ → b ∨ c
//! a b -> c d         # a ∧ b → c ∨ d
//! d => b c           # metaclause d → b ∧ c (expands to Horn clauses)
//! ```
//!
//! Variables not named in the header are declared on first use.

use crate::logic::{Clause, Consequent, Formula, LogicError, MetaClause, Model, VariableUniverse};

enum Arrow {
    Disjunctive,
    Conjunctive,
}

struct RawClause {
    line: usize,
    arrow: Arrow,
    antecedent: Vec<usize>,
    consequent: Vec<usize>,
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '¬')
}

fn err(line: usize, msg: impl std::fmt::Display) -> LogicError {
    LogicError::Parse(format!("line {line}: {msg}"))
}

fn split_arrow(body: &str) -> Option<(&str, Arrow, &str)> {
    let arrow = body
        .find("->")
        .map(|i| (i, Arrow::Disjunctive))
        .or_else(|| body.find("=>").map(|i| (i, Arrow::Conjunctive)))?;
    let (i, kind) = arrow;
    Some((&body[..i], kind, &body[i + 2..]))
}

fn parse_lines(
    text: &str,
    mut resolve: impl FnMut(usize, &str) -> Result<usize, LogicError>,
    mut declare: impl FnMut(usize, &str) -> Result<(), LogicError>,
) -> Result<Vec<RawClause>, LogicError> {
    let mut raw = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix("vars:") {
            for name in rest.split_whitespace() {
                if !valid_name(name) {
                    return Err(err(line_no, format!("invalid variable name `{name}`")));
                }
                declare(line_no, name)?;
            }
            continue;
        }
        let (lhs, arrow, rhs) = split_arrow(body).ok_or_else(|| err(line_no, "expected `->` or `=>`"))?;
        let mut side = |s: &str| -> Result<Vec<usize>, LogicError> {
            s.split_whitespace()
                .map(|name| {
                    if !valid_name(name) {
                        return Err(err(line_no, format!("invalid variable name `{name}`")));
                    }
                    resolve(line_no, name)
                })
                .collect()
        };
        let antecedent = side(lhs)?;
        let consequent = side(rhs)?;
        raw.push(RawClause {
            line: line_no,
            arrow,
            antecedent,
            consequent,
        });
    }
    Ok(raw)
}

fn materialize(width: usize, raw: Vec<RawClause>) -> Result<Formula, LogicError> {
    let mut formula = Formula::top(width);
    for rc in raw {
        let ant = Model::from_indices(width, rc.antecedent);
        let con = Model::from_indices(width, rc.consequent);
        let clauses = match rc.arrow {
            Arrow::Disjunctive => vec![Clause::new(ant, con).map_err(|e| err(rc.line, e))?],
            Arrow::Conjunctive if con.is_empty() => MetaClause::negative(ant).to_clauses(),
            Arrow::Conjunctive => MetaClause::definite(ant, con)
                .map_err(|e| err(rc.line, e))?
                .to_clauses(),
        };
        for c in clauses {
            formula.push(c)?;
        }
    }
    Ok(formula)
}

/// Parses a formula, building its universe from the header and first uses.
pub fn parse_formula(text: &str) -> Result<(VariableUniverse, Formula), LogicError> {
    let universe = std::cell::RefCell::new(VariableUniverse::growable());
    let raw = parse_lines(
        text,
        |_, name| Ok(universe.borrow_mut().intern(name)),
        |line, name| {
            let mut u = universe.borrow_mut();
            if u.index_of(name).is_some() {
                return Err(err(line, format!("variable `{name}` declared twice")));
            }
            u.intern(name);
            Ok(())
        },
    )?;
    let universe = universe.into_inner();
    if universe.is_empty() {
        return Err(LogicError::EmptyUniverse);
    }
    let formula = materialize(universe.len(), raw)?;
    Ok((universe, formula))
}

/// Parses a formula against a fixed universe; every name must belong to it.
pub fn parse_formula_in(text: &str, universe: &VariableUniverse) -> Result<Formula, LogicError> {
    let lookup = |line: usize, name: &str| {
        universe
            .index_of(name)
            .ok_or_else(|| err(line, LogicError::UnknownVariable(name.to_string())))
    };
    let raw = parse_lines(text, lookup, |line, name| lookup(line, name).map(|_| ()))?;
    materialize(universe.len(), raw)
}

/// Parses one model per line, either as a `0`/`1` string of full width or
/// as whitespace-separated variable names. A lone `-` is the empty model.
pub fn parse_models(text: &str, universe: &VariableUniverse) -> Result<Vec<Model>, LogicError> {
    let mut models = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if body == "-" {
            models.push(Model::empty(universe.len()));
        } else if body.len() == universe.len() && body.chars().all(|c| c == '0' || c == '1') {
            models.push(Model::parse_bits(body)?);
        } else {
            models.push(universe.model(body.split_whitespace()).map_err(|e| err(n + 1, e))?);
        }
    }
    Ok(models)
}

/// Model list preceded by a `vars:` header naming the universe.
pub fn parse_model_file(text: &str) -> Result<(VariableUniverse, Vec<Model>), LogicError> {
    let mut names = Vec::new();
    let mut body = String::new();
    for line in text.lines() {
        match line.split('#').next().unwrap_or("").trim().strip_prefix("vars:") {
            Some(rest) if body.trim().is_empty() => names.extend(rest.split_whitespace().map(str::to_string)),
            Some(_) => return Err(LogicError::Parse("`vars:` header after the first model".into())),
            None => {
                body.push_str(line);
                body.push('\n');
            }
        }
    }
    if names.is_empty() {
        return Err(LogicError::Parse("missing `vars:` header".into()));
    }
    let universe = VariableUniverse::new(names)?;
    let models = parse_models(&body, &universe)?;
    Ok((universe, models))
}

fn names(universe: &VariableUniverse, m: &Model) -> String {
    universe.names_in(m).collect::<Vec<_>>().join(" ")
}

fn join_arrow(lhs: String, arrow: &str, rhs: String) -> String {
    match (lhs.is_empty(), rhs.is_empty()) {
        (true, true) => arrow.to_string(),
        (true, false) => format!("{arrow} {rhs}"),
        (false, true) => format!("{lhs} {arrow}"),
        (false, false) => format!("{lhs} {arrow} {rhs}"),
    }
}

pub fn render_clause(c: &Clause, universe: &VariableUniverse) -> String {
    join_arrow(names(universe, c.antecedent()), "->", names(universe, c.consequent()))
}

/// Renders a metaclause with `=>`; `⊥` is an empty right-hand side.
pub fn render_metaclause(h: &MetaClause, universe: &VariableUniverse) -> String {
    let rhs = match h.consequent() {
        Consequent::Falsum => String::new(),
        Consequent::Conjunction(q) => names(universe, q),
    };
    join_arrow(names(universe, h.antecedent()), "=>", rhs)
}

/// Full formula file, including a `vars:` header.
pub fn render_formula(f: &Formula, universe: &VariableUniverse) -> String {
    let mut out = format!("vars: {}\n", universe.names().join(" "));
    for c in f.clauses() {
        out.push_str(&render_clause(c, universe));
        out.push('\n');
    }
    out
}

pub fn render_metaclauses(h: &[MetaClause], universe: &VariableUniverse) -> String {
    let mut out = format!("vars: {}\n", universe.names().join(" "));
    for m in h {
        out.push_str(&render_metaclause(m, universe));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Theory;

    #[test]
    fn parses_cycle_target() {
        let (u, f) = parse_formula("vars: a b c d\n# target\na ->\n-> b c\n").unwrap();
        assert_eq!(u.names(), ["a", "b", "c", "d"]);
        assert_eq!(f.len(), 2);
        assert!(!f.is_horn());
        assert!(!f.holds(&u.model(["d"]).unwrap()));
        assert!(f.holds(&u.model(["b", "d"]).unwrap()));
    }

    #[test]
    fn first_use_declares_in_order() {
        let (u, f) = parse_formula("b a -> c\n").unwrap();
        assert_eq!(u.names(), ["b", "a", "c"]);
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn arrows_without_spaces() {
        let (u, f) = parse_formula("a b->c\n").unwrap();
        assert_eq!(u.len(), 3);
        assert_eq!(f.clauses()[0].consequent(), &u.model(["c"]).unwrap());
    }

    #[test]
    fn conjunctive_arrow_expands() {
        let (u, f) = parse_formula("vars: a b c\na => b c\nb =>\n").unwrap();
        assert_eq!(f.len(), 3);
        assert!(f.is_horn());
        assert!(!f.holds(&u.model(["a", "b"]).unwrap()));
    }

    #[test]
    fn errors_are_reported() {
        assert!(parse_formula("a b c\n").is_err());
        assert!(parse_formula("vars: a a\n").is_err());
        assert!(parse_formula("a$ -> b\n").is_err());
        assert!(matches!(parse_formula("# nothing\n"), Err(LogicError::EmptyUniverse)));
        let u = VariableUniverse::new(["a", "b"]).unwrap();
        assert!(parse_formula_in("a -> z\n", &u).is_err());
    }

    #[test]
    fn render_round_trip() {
        let text = "vars: a b c d\na ->\n-> b c\na b -> c d\n";
        let (u, f) = parse_formula(text).unwrap();
        assert_eq!(render_formula(&f, &u), text);
        let (_, g) = parse_formula(&render_formula(&f, &u)).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn renders_metaclauses() {
        let u = VariableUniverse::new(["a", "b", "c"]).unwrap();
        let h = MetaClause::definite(u.model(["a"]).unwrap(), u.model(["b", "c"]).unwrap()).unwrap();
        assert_eq!(render_metaclause(&h, &u), "a => b c");
        let bot = MetaClause::negative(Model::empty(3));
        assert_eq!(render_metaclause(&bot, &u), "=>");
    }

    #[test]
    fn parses_model_lists() {
        let u = VariableUniverse::new(["a", "b", "c"]).unwrap();
        let ms = parse_models("110\na c\n-\n", &u).unwrap();
        assert_eq!(ms[0], u.model(["a", "b"]).unwrap());
        assert_eq!(ms[1], u.model(["a", "c"]).unwrap());
        assert!(ms[2].is_empty());
    }

    #[test]
    fn model_file_with_header() {
        let (u, ms) = parse_model_file("vars: a b c\n# models\na b\n-\n101\n").unwrap();
        assert_eq!(u.names(), ["a", "b", "c"]);
        assert_eq!(ms.len(), 3);
        assert_eq!(ms[2], u.model(["a", "c"]).unwrap());
        assert!(parse_model_file("a b\n").is_err());
        assert!(parse_model_file("vars: a\na\nvars: b\n").is_err());
    }
}
