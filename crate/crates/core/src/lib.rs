//! Enumeration of Eulerian trails in undirected multigraphs, distinguishing
//! trails either by edge sequence or by vertex sequence, in constant
//! amortized time per solution after linear preprocessing.

pub mod carried;
pub mod cli;
pub mod connectivity;
pub mod diff;
pub mod edge_enum;
pub mod euler;
pub mod graph;
pub mod graph_file;
pub mod ids;
pub mod oracle;
pub mod pushout;
pub mod record;
pub mod search;
pub mod vertex_enum;

pub use graph::Multigraph;
pub use ids::{EdgeId, VertexId};
pub use record::{Frame, RuleRecord, RuleTag, Step};
pub use search::{EnumError, EnumOptions, EnumSink, Mode, RunReport, Session};
