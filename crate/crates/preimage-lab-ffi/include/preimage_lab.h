#ifndef PREIMAGE_LAB_H
#define PREIMAGE_LAB_H

/* Generated at build time from the Rust sources; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Success.
 */
#define PLAB_OK 0

/**
 * A pointer was null, a string was not UTF-8, or a literal did not parse.
 */
#define PLAB_INVALID_ARGUMENT 1

/**
 * The input lay outside the mathematical domain of the operation.
 */
#define PLAB_DOMAIN_ERROR 2

/**
 * A fourth-power-free classification invariant failed.
 */
#define PLAB_CLASSIFICATION_ERROR 3

/**
 * An internal invariant failed; details via [`plab_last_error`].
 */
#define PLAB_INTERNAL_ERROR 4

/**
 * Opaque handle to an iterated-preimage expansion.
 */
typedef struct PlabTree PlabTree;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Returns the most recent error message on this thread as a fresh string,
 * or null when none is stored. The caller frees it with
 * [`plab_string_free`]; the stored message is cleared.
 */
char *plab_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `ptr` must be null or a string obtained from this library that has not
 * been freed already.
 */
void plab_string_free(char *ptr);

/**
 * Computes the sharp preimage-count bound for degree `d` maps.
 */
int plab_kappa(uint32_t d, uint32_t *out);

/**
 * Counts the rational second preimages of 0 under x ↦ x^d + c for d ≥ 3.
 *
 * # Safety
 * `c` must be null or a NUL-terminated string; `out` a valid out pointer.
 */
int plab_corollary_count(uint32_t d, const char *c, uint32_t *out);

/**
 * Expands the rational iterated preimages of 0 under x ↦ x^d + c into an
 * opaque tree handle. Requires 2 ≤ d ≤ 64 and 1 ≤ depth_limit ≤ 64.
 *
 * # Safety
 * `c` must be null or a NUL-terminated string; `out` a valid out pointer.
 */
int plab_preimages(uint32_t d, const char *c, uint32_t depth_limit, struct PlabTree **out);

/**
 * Releases a tree handle. Null is ignored.
 *
 * # Safety
 * `tree` must be null or an unfreed handle from [`plab_preimages`].
 */
void plab_tree_free(struct PlabTree *tree);

/**
 * Writes 1 when the expansion was cut by the depth limit, 0 otherwise.
 *
 * # Safety
 * `tree` must be a live handle from [`plab_preimages`].
 */
int plab_tree_truncated(const struct PlabTree *tree, int *out);

/**
 * Writes the number of distinct preimage values found (the root excluded).
 *
 * # Safety
 * `tree` must be a live handle from [`plab_preimages`].
 */
int plab_tree_union_len(const struct PlabTree *tree, size_t *out);

/**
 * Writes the `idx`-th union value (sorted ascending) as a rational string.
 *
 * # Safety
 * `tree` must be a live handle from [`plab_preimages`]; `out` a valid out
 * pointer. The string is freed with [`plab_string_free`].
 */
int plab_tree_union_value(const struct PlabTree *tree, size_t idx, char **out);

/**
 * Serializes the whole tree as JSON.
 *
 * # Safety
 * `tree` must be a live handle from [`plab_preimages`]; `out` a valid out
 * pointer. The string is freed with [`plab_string_free`].
 */
int plab_tree_to_json(const struct PlabTree *tree, char **out);

/**
 * Searches D²y⁴ = x³ − x + 1 for rational points up to a height bound and
 * writes them as a JSON array of {"x", "y"} records. `twist` must be one of
 * ±1, ±2, ±23, ±46 and the bound at most 10⁶.
 *
 * # Safety
 * `out` must be a valid out pointer. The string is freed with
 * [`plab_string_free`].
 */
int plab_cd_points_json(int64_t twist, uint32_t height_bound, char **out);

/**
 * Writes the square-class label of u − t at the n-th multiple of the curve
 * generator: "trivial", "minus_theta", or "other". Requires |n| ≤ 128.
 *
 * # Safety
 * `out` must be a valid out pointer. The string is freed with
 * [`plab_string_free`].
 */
int plab_xt_class(int64_t n, char **out);

/**
 * Scans x^n + y^n = z² for primitive solutions with |x|, |y| ≤ bound and
 * writes them as JSON. Requires n ≥ 4 and 2·bound^n < 2¹²⁷.
 *
 * # Safety
 * `out` must be a valid out pointer. The string is freed with
 * [`plab_string_free`].
 */
int plab_dm_search_json(uint32_t n, uint32_t bound, char **out);

/**
 * Runs the verification suite and writes the JSON report. Writes 1 to
 * `out_all_pass` when every check passed, 0 otherwise. A zero
 * `cd_height_bound` selects the default search bound.
 *
 * # Safety
 * `out_json` must be a valid out pointer and `out_all_pass` null or valid.
 * The string is freed with [`plab_string_free`].
 */
int plab_verify(uint32_t cd_height_bound, char **out_json, int *out_all_pass);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* PREIMAGE_LAB_H */
