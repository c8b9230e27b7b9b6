//! Exact-arithmetic laboratory for rational iterated preimages of the
//! origin under the unicritical maps x ↦ x^d + c.
//!
//! The crate verifies, at desk scale and in exact arithmetic, the complete
//! chain of computations behind the classification of rational iterated
//! preimages: curve ideals and their rational points, the auxiliary elliptic
//! curve v² = u³ − u + 1, descent through the cubic field Q(θ) with
//! θ³ = θ − 1, and the Diophantine reductions for every degree d ≥ 3.

pub mod cubic_field;
pub mod descent;
pub mod dynamics;
pub mod elliptic;
pub mod error;
pub mod exact_arith;
pub mod modp;
pub mod preimage_curves;
pub mod report;

pub use error::{Error, Result};

/// Serializes any `Display` value as a string.
///
/// JSON output keeps every number as a decimal string so arbitrary-precision
/// values survive serialization; plain integer fields opt in via
/// `#[serde(serialize_with = "crate::serialize_display")]` for uniformity.
pub(crate) fn serialize_display<T, S>(value: &T, serializer: S) -> std::result::Result<S::Ok, S::Error>
where
    T: std::fmt::Display,
    S: serde::Serializer,
{
    serializer.serialize_str(&value.to_string())
}

/// Number of worker threads for the embarrassingly parallel searches.
///
/// Reads `PREIMAGE_LAB_THREADS`; unset, empty, or invalid values fall back
/// to the machine's available parallelism.
pub fn thread_count() -> usize {
    std::env::var("PREIMAGE_LAB_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

/// Maps `items` through `f` on up to [`thread_count`] scoped threads,
/// preserving input order.
pub fn parallel_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = thread_count().min(items.len().max(1));
    if workers <= 1 {
        return items.iter().map(&f).collect();
    }
    let n = items.len();
    let mut out: Vec<Option<R>> = (0..n).map(|_| None).collect();
    let chunk = n.div_ceil(workers);
    let f = &f;
    std::thread::scope(|scope| {
        for (slot_chunk, item_chunk) in out.chunks_mut(chunk).zip(items.chunks(chunk)) {
            scope.spawn(move || {
                for (slot, item) in slot_chunk.iter_mut().zip(item_chunk) {
                    *slot = Some(f(item));
                }
            });
        }
    });
    out.into_iter().map(|r| r.expect("worker filled slot")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_map_preserves_order() {
        let items: Vec<i64> = (0..100).collect();
        let out = parallel_map(items, |&x| x * x);
        assert_eq!(out, (0..100).map(|x| x * x).collect::<Vec<_>>());
    }
}
