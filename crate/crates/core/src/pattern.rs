use std::ops::Deref;

use serde::{Deserialize, Serialize};

/// A network input: one small digit per retina position (0/1 for base 2).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BitPattern(Vec<u8>);

impl BitPattern {
    pub fn new(digits: Vec<u8>) -> Self {
        Self(digits)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }

    pub fn count_nonzero(&self) -> usize {
        self.0.iter().filter(|&&d| d != 0).count()
    }
}

impl Deref for BitPattern {
    type Target = [u8];

    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl AsRef<[u8]> for BitPattern {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

impl From<Vec<u8>> for BitPattern {
    fn from(digits: Vec<u8>) -> Self {
        Self(digits)
    }
}

impl From<&[u8]> for BitPattern {
    fn from(digits: &[u8]) -> Self {
        Self(digits.to_vec())
    }
}

impl FromIterator<u8> for BitPattern {
    fn from_iter<I: IntoIterator<Item = u8>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl std::fmt::Display for BitPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for BitPattern {
    type Err = crate::Error;

    /// Parses a string of decimal digits such as `"1100"`.
    fn from_str(s: &str) -> crate::Result<Self> {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| crate::Error::Encoding(format!("not a digit: {c:?}")))
            })
            .collect::<crate::Result<Vec<u8>>>()
            .map(Self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let p: BitPattern = "1101".parse().unwrap();
        assert_eq!(&*p, &[1, 1, 0, 1]);
        assert_eq!(p.to_string(), "1101");
        assert_eq!(p.count_nonzero(), 3);
        assert!("10x".parse::<BitPattern>().is_err());
    }
}
