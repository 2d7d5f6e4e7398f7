//! Translation of Event-B machines and contexts into contract-annotated
//! Eiffel classes, together with an explicit-state animator that checks the
//! generated contracts against the source model.

pub mod animator;
pub mod ebfront;
pub mod emitter;
pub mod typing;
