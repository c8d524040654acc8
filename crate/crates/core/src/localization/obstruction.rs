use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::Chart;
use crate::error::Result;
use crate::presheaf::CoordinatizationModel;
use crate::quantum_logic::{enumerate_quantum_homs, is_boolean, OrthomodularPoset};

/// Outcome of [`single_frame_obstruction`].
#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    /// No single chart from any model object is surjective.
    pub obstructed: bool,
    pub target_is_boolean: bool,
    pub target_size: usize,
    pub charts_checked: usize,
    /// Size of the largest image of a single chart.
    pub largest_image: usize,
    /// A surjective chart, when one exists.
    pub surjective_chart: Option<String>,
}

impl fmt::Display for ObstructionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "obstructed: {}", self.obstructed)?;
        writeln!(f, "target_is_boolean: {}", self.target_is_boolean)?;
        writeln!(f, "charts_checked: {}", self.charts_checked)?;
        writeln!(f, "largest_image: {} of {}", self.largest_image, self.target_size)?;
        if let Some(c) = &self.surjective_chart {
            writeln!(f, "surjective_chart: {c}")?;
        }
        Ok(())
    }
}

/// Searches every quantum hom `A(ξ) → L` over every model object for one
/// that covers `L` by itself.
pub fn single_frame_obstruction(l: &Arc<OrthomodularPoset>, model: &CoordinatizationModel) -> Result<ObstructionReport> {
    super::require_inputs(model, l)?;
    let mut charts_checked = 0;
    let mut largest_image = 0;
    let mut surjective_chart = None;
    for o in 0..model.base().object_count() {
        for h in enumerate_quantum_homs(model.event_algebra(o), l)? {
            charts_checked += 1;
            let image = h.map().iter().collect::<BTreeSet<_>>().len();
            largest_image = largest_image.max(image);
            if image == l.len() && surjective_chart.is_none() {
                let chart = Chart::new(model, o, l, h.map().to_vec())?;
                surjective_chart = Some(chart.label(model, l));
            }
        }
    }
    Ok(ObstructionReport {
        obstructed: surjective_chart.is_none(),
        target_is_boolean: is_boolean(l),
        target_size: l.len(),
        charts_checked,
        largest_image,
        surjective_chart,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum_logic::catalog;

    #[test]
    fn boolean_target_has_a_single_frame() {
        let m = CoordinatizationModel::powerset_model(2).unwrap();
        let r = single_frame_obstruction(&Arc::new(catalog::boolean(2)), &m).unwrap();
        assert!(!r.obstructed);
        assert!(r.surjective_chart.is_some());
    }

    #[test]
    fn mo2_is_obstructed() {
        let m = CoordinatizationModel::powerset_model(3).unwrap();
        let r = single_frame_obstruction(&Arc::new(catalog::mo2()), &m).unwrap();
        assert!(r.obstructed);
        assert_eq!(r.largest_image, 4);
    }
}
