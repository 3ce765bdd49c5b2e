//! JSON interchange for ideals: a ring header (n, variables, order, field)
//! together with generators in the shared text grammar.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::field::FieldKind;
use crate::poly::Polynomial;
use crate::vars::{VarName, VariableSet};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdealDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub variables: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
    #[serde(default = "default_field")]
    pub field: String,
    pub gens: Vec<String>,
}

fn default_field() -> String {
    "q".into()
}

impl IdealDoc {
    pub fn from_ideal(
        gens: &[Polynomial],
        n: Option<usize>,
        order: Option<&str>,
    ) -> IdealDoc {
        let vars = gens.first().map(|g| g.vars().clone());
        let variables = vars
            .map(|v| v.names().iter().map(|n| n.to_string()).collect())
            .unwrap_or_default();
        let field = gens
            .iter()
            .find_map(|g| g.field_kind())
            .map(|f| match f {
                FieldKind::Q => "q".to_string(),
                FieldKind::Fp(p) => p.to_string(),
            })
            .unwrap_or_else(default_field);
        IdealDoc {
            n,
            variables,
            order: order.map(str::to_string),
            field,
            gens: gens.iter().map(|g| g.to_string()).collect(),
        }
    }

    pub fn field_kind(&self) -> Result<FieldKind, String> {
        if self.field.eq_ignore_ascii_case("q") {
            Ok(FieldKind::Q)
        } else {
            self.field
                .parse::<u64>()
                .map(FieldKind::Fp)
                .map_err(|_| format!("bad field '{}'", self.field))
        }
    }

    pub fn variable_set(&self) -> Result<Arc<VariableSet>, String> {
        let names: Vec<VarName> = self
            .variables
            .iter()
            .map(|s| VarName::parse(s).ok_or_else(|| format!("unknown variable '{s}'")))
            .collect::<Result<_, _>>()?;
        VariableSet::new(names).map_err(|e| e.to_string())
    }

    pub fn to_ideal(&self) -> Result<(Arc<VariableSet>, FieldKind, Vec<Polynomial>), String> {
        let vars = self.variable_set()?;
        let field = self.field_kind()?;
        let gens = self
            .gens
            .iter()
            .map(|s| Polynomial::parse(s, &vars, field).map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((vars, field, gens))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let vars = VariableSet::xy();
        let gens = vec![
            Polynomial::parse("x^2 - y", &vars, FieldKind::Q).unwrap(),
            Polynomial::parse("2*x*y + 1/3", &vars, FieldKind::Q).unwrap(),
        ];
        let doc = IdealDoc::from_ideal(&gens, Some(2), Some("grevlex"));
        let (vars2, field, back) = doc.to_ideal().unwrap();
        assert_eq!(vars.as_ref(), vars2.as_ref());
        assert_eq!(field, FieldKind::Q);
        assert_eq!(back, gens);
    }
}
