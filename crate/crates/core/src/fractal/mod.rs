//! Self-similar structures: schemas, graph construction and statistics.

pub mod build;
pub mod graph;
pub mod schema;

pub use build::{build_graph, degree_ratio, degree_stats, edge_count, vertex_count, DegreeStats};
pub use graph::Multigraph;
pub use schema::{builtin, builtin_schemas, validate_schema, SubstitutionSchema, ValidationReport};
