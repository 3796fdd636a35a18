//! Fresh variable names.
//!
//! Generated names have the shape `stem'N`. The quote character is not accepted
//! by the problem-file lexer, so generated names never collide with user
//! identifiers. Names produced by the global counter are unique within the
//! process; [`reserve`] bumps the counter past names read back from disk.

use std::sync::atomic::{AtomicU64, Ordering};

static COUNTER: AtomicU64 = AtomicU64::new(0);

/// Separator between a stem and its generated suffix.
pub const SEPARATOR: char = '\'';

/// The user-visible part of a (possibly generated) variable name.
pub fn stem(name: &str) -> &str {
    let cut = name.find(['\'', '^']).unwrap_or(name.len());
    if cut == 0 {
        "v"
    } else {
        &name[..cut]
    }
}

/// A name no other call to `fresh` in this process will return.
pub fn fresh(base: &str) -> String {
    let n = COUNTER.fetch_add(1, Ordering::Relaxed);
    format!("{}{SEPARATOR}{n}", stem(base))
}

/// Make sure future [`fresh`] names do not reuse the numeric suffix of `name`.
pub fn reserve(name: &str) {
    if let Some((_, digits)) = name.rsplit_once(SEPARATOR) {
        if let Ok(n) = digits.parse::<u64>() {
            COUNTER.fetch_max(n + 1, Ordering::Relaxed);
        }
    }
}

/// Smallest `stem'N` (N = 0, 1, ...) rejected by `taken`. Deterministic, used
/// for capture-avoiding renaming where only local freshness matters.
pub fn fresh_avoiding(base: &str, taken: impl Fn(&str) -> bool) -> String {
    let stem = stem(base);
    (0u64..)
        .map(|n| format!("{stem}{SEPARATOR}{n}"))
        .find(|cand| !taken(cand))
        .expect("unbounded supply")
}
