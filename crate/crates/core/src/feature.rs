use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Named, ordered real-valued features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    names: Vec<String>,
    values: Vec<f64>,
}

impl FeatureVector {
    pub fn new(names: Vec<String>, values: Vec<f64>) -> Result<Self> {
        if names.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: names.len(),
                actual: values.len(),
            });
        }
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(Error::Format(format!("duplicate feature name {n:?}")));
            }
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Format(format!(
                "feature {:?} is not finite ({})",
                names[i], values[i]
            )));
        }
        Ok(Self { names, values })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.names.iter().position(|n| n == name).map(|i| self.values[i])
    }

    /// Appends `other` after `self`, keeping both orders.
    pub fn concat(&self, other: &FeatureVector) -> Result<FeatureVector> {
        let mut names = self.names.clone();
        names.extend(other.names.iter().cloned());
        let mut values = self.values.clone();
        values.extend_from_slice(&other.values);
        FeatureVector::new(names, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_nan() {
        assert!(FeatureVector::new(vec!["a".into(), "a".into()], vec![1.0, 2.0]).is_err());
        assert!(FeatureVector::new(vec!["a".into()], vec![f64::NAN]).is_err());
        assert!(FeatureVector::new(vec!["a".into()], vec![]).is_err());
    }

    #[test]
    fn concat_keeps_order() {
        let a = FeatureVector::new(vec!["x".into()], vec![1.0]).unwrap();
        let b = FeatureVector::new(vec!["y".into(), "z".into()], vec![2.0, 3.0]).unwrap();
        let c = a.concat(&b).unwrap();
        assert_eq!(c.names(), &["x", "y", "z"]);
        assert_eq!(c.values(), &[1.0, 2.0, 3.0]);
        assert!(a.concat(&a).is_err());
    }
}
