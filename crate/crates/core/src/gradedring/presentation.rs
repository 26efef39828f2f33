use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exactalg::IntPoly;

/// A standard graded ring `Z[x_0..x_N]/(relations)` together with the
/// generators of a homogeneous ideal, read from a ring-specification file.
///
/// ```json
/// { "vars": ["x","y","z"], "dimension": 2,
///   "relations": [ {"terms": [{"coeff": 1, "exps": [4,0,0]}, ...]} ],
///   "ideal": [ {"terms": [{"coeff": 1, "exps": [1,0,0]}]}, ... ] }
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradedPresentation {
    pub vars: Vec<String>,
    pub dimension: u32,
    #[serde(default)]
    pub relations: Vec<IntPoly>,
    pub ideal: Vec<IntPoly>,
}

impl GradedPresentation {
    pub fn new(vars: &[&str], dimension: u32, relations: Vec<IntPoly>, ideal: Vec<IntPoly>) -> Result<Self> {
        let p = GradedPresentation {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            dimension,
            relations,
            ideal,
        };
        p.validate()?;
        Ok(p)
    }

    /// Polynomial ring in the given variables with its graded maximal ideal.
    pub fn polynomial_ring(vars: &[&str]) -> Self {
        let n = vars.len();
        let ideal = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                IntPoly::monomial(e)
            })
            .collect();
        GradedPresentation::new(vars, n as u32, Vec::new(), ideal).expect("valid polynomial ring")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: GradedPresentation =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("ring file: {e}")))?;
        p.validate()?;
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentation serializes")
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Number of ideal generators.
    pub fn mu(&self) -> usize {
        self.ideal.len()
    }

    pub fn generator_degrees(&self) -> Vec<u32> {
        self.ideal
            .iter()
            .map(|g| g.homogeneous_degree().expect("validated"))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.nvars();
        if n == 0 {
            return Err(Error::InvalidInput("no variables".into()));
        }
        if self.dimension == 0 || self.dimension as usize > n {
            return Err(Error::InvalidInput(format!(
                "dimension {} must lie in 1..={n}",
                self.dimension
            )));
        }
        if self.ideal.is_empty() {
            return Err(Error::InvalidInput("ideal needs at least one generator".into()));
        }
        for (i, r) in self.relations.iter().enumerate() {
            r.validate(n)
                .map_err(|e| Error::InvalidInput(format!("relation {i}: {e}")))?;
        }
        for (i, g) in self.ideal.iter().enumerate() {
            g.validate(n)
                .map_err(|e| Error::InvalidInput(format!("ideal generator {i}: {e}")))?;
        }
        Ok(())
    }

    /// Hex SHA-256 of the canonical JSON encoding.
    pub fn content_hash(&self) -> String {
        let canonical = GradedPresentation {
            vars: self.vars.clone(),
            dimension: self.dimension,
            relations: self.relations.iter().map(IntPoly::normalized).collect(),
            ideal: self.ideal.iter().map(IntPoly::normalized).collect(),
        };
        let bytes = serde_json::to_vec(&canonical).expect("presentation serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FERMAT: &str = r#"{ "vars": ["x","y","z"], "dimension": 2,
        "relations": [ {"terms": [{"coeff": 1, "exps": [4,0,0]}, {"coeff": 1, "exps": [0,4,0]}, {"coeff": 1, "exps": [0,0,4]}] } ],
        "ideal": [ {"terms": [{"coeff":1,"exps":[1,0,0]}]}, {"terms": [{"coeff":1,"exps":[0,1,0]}]}, {"terms": [{"coeff":1,"exps":[0,0,1]}]} ] }"#;

    #[test]
    fn parses_ring_file() {
        let p = GradedPresentation::from_json(FERMAT).unwrap();
        assert_eq!(p.nvars(), 3);
        assert_eq!(p.mu(), 3);
        assert_eq!(p.generator_degrees(), vec![1, 1, 1]);
        assert_eq!(p.relations[0].homogeneous_degree(), Some(4));
    }

    #[test]
    fn rejects_bad_specs() {
        let too_big = FERMAT.replace("\"dimension\": 2", "\"dimension\": 4");
        assert!(GradedPresentation::from_json(&too_big).is_err());
        let no_ideal = r#"{"vars":["x"],"dimension":1,"relations":[],"ideal":[]}"#;
        assert!(GradedPresentation::from_json(no_ideal).is_err());
        let inhom = r#"{"vars":["x","y"],"dimension":2,"ideal":[{"terms":[{"coeff":1,"exps":[1,0]},{"coeff":1,"exps":[0,2]}]}]}"#;
        assert!(GradedPresentation::from_json(inhom).is_err());
        let arity = r#"{"vars":["x","y"],"dimension":2,"ideal":[{"terms":[{"coeff":1,"exps":[1]}]}]}"#;
        assert!(GradedPresentation::from_json(arity).is_err());
        let constant = r#"{"vars":["x","y"],"dimension":2,"ideal":[{"terms":[{"coeff":1,"exps":[0,0]}]}]}"#;
        assert!(GradedPresentation::from_json(constant).is_err());
    }

    #[test]
    fn hash_ignores_term_order_but_not_content() {
        let a = GradedPresentation::from_json(FERMAT).unwrap();
        let mut b = a.clone();
        b.relations[0].terms.reverse();
        assert_eq!(a.content_hash(), b.content_hash());
        let mut c = a.clone();
        c.relations[0].terms[0].coeff = 2;
        assert_ne!(a.content_hash(), c.content_hash());
    }
}
