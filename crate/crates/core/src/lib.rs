pub mod aps;
pub mod cli;
pub mod game_model;
pub mod geometry;
pub mod vertex_enum;
