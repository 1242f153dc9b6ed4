pub mod classify;
pub mod exact;
pub mod json;
pub mod newton;
pub mod relfinder;
pub mod search;
pub mod subfields;
pub mod weil;
