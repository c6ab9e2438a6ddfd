//! Nodal boundary enforcement applied after every Euler stage.

use super::state::{HydroStateField, State};

/// Constraint on a single node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NodeConstraint {
    /// Reset to a prescribed state (frozen initial data or inflow).
    Fixed { node: usize, state: State },
    /// Remove the normal momentum, keeping the internal energy.
    Wall { node: usize, normal: [f64; 2] },
}

/// Ordered list of node constraints; fixed states take precedence over walls
/// at shared nodes.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BoundaryConditions {
    constraints: Vec<NodeConstraint>,
}

impl BoundaryConditions {
    pub fn new(mut constraints: Vec<NodeConstraint>) -> Self {
        // Walls first so that fixed states overwrite them.
        constraints.sort_by_key(|c| matches!(c, NodeConstraint::Fixed { .. }));
        BoundaryConditions { constraints }
    }

    pub fn none() -> Self {
        BoundaryConditions::default()
    }

    pub fn constraints(&self) -> &[NodeConstraint] {
        &self.constraints
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn apply(&self, field: &mut HydroStateField) {
        for c in &self.constraints {
            match *c {
                NodeConstraint::Fixed { node, state } => field.states[node] = state,
                NodeConstraint::Wall { node, normal } => {
                    let u = &mut field.states[node];
                    let mn = u[1] * normal[0] + u[2] * normal[1];
                    u[1] -= mn * normal[0];
                    u[2] -= mn * normal[1];
                    u[3] -= 0.5 * mn * mn / u[0];
                }
            }
        }
    }
}
