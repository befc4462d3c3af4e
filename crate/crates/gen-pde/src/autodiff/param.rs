//! Flat parameter vectors and their role maps.

use crate::error::{Error, Result};

/// Which slice of the flat vector a layout segment covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParamRole {
    /// Trainable basis parameters, in family layout order.
    Basis,
    /// Synthesis hidden weights, row-major (one row per hidden unit).
    HiddenWeights,
    HiddenBias,
    OutputWeights,
    OutputBias,
    /// Baseline MLP weights for layer `i`, row-major.
    LayerWeights(usize),
    LayerBias(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Segment {
    pub role: ParamRole,
    pub offset: usize,
    pub len: usize,
}

/// Deterministic map from parameter roles to flat index ranges. Fully
/// determined by the model shape.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ParamLayout {
    segments: Vec<Segment>,
}

impl ParamLayout {
    pub fn builder() -> ParamLayoutBuilder {
        ParamLayoutBuilder { segments: Vec::new(), cursor: 0 }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_len(&self) -> usize {
        self.segments.last().map_or(0, |s| s.offset + s.len)
    }

    /// Flat index range covered by `role`, if present.
    pub fn range(&self, role: ParamRole) -> Option<std::ops::Range<usize>> {
        self.segments
            .iter()
            .find(|s| s.role == role)
            .map(|s| s.offset..s.offset + s.len)
    }
}

pub struct ParamLayoutBuilder {
    segments: Vec<Segment>,
    cursor: usize,
}

impl ParamLayoutBuilder {
    pub fn segment(mut self, role: ParamRole, len: usize) -> Self {
        self.segments.push(Segment { role, offset: self.cursor, len });
        self.cursor += len;
        self
    }

    pub fn build(self) -> ParamLayout {
        ParamLayout { segments: self.segments }
    }
}

/// Flat ordered sequence of every trainable real of a model.
#[derive(Clone, Debug, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ParamVector {
    values: Vec<f64>,
}

impl ParamVector {
    pub fn new(values: Vec<f64>) -> Self {
        ParamVector { values }
    }

    pub fn zeros(len: usize) -> Self {
        ParamVector { values: vec![0.0; len] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn expect_len(&self, expected: usize) -> Result<()> {
        if self.values.len() != expected {
            return Err(Error::ShapeMismatch { expected, got: self.values.len() });
        }
        Ok(())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }
}

impl std::ops::Index<usize> for ParamVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

impl std::ops::IndexMut<usize> for ParamVector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.values[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_ranges() {
        let layout = ParamLayout::builder()
            .segment(ParamRole::Basis, 75)
            .segment(ParamRole::HiddenWeights, 500)
            .segment(ParamRole::HiddenBias, 20)
            .segment(ParamRole::OutputWeights, 20)
            .segment(ParamRole::OutputBias, 1)
            .build();
        assert_eq!(layout.total_len(), 616);
        assert_eq!(layout.range(ParamRole::Basis), Some(0..75));
        assert_eq!(layout.range(ParamRole::OutputBias), Some(615..616));
        assert_eq!(layout.range(ParamRole::LayerBias(0)), None);
    }
}
