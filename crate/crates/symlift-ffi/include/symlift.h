#ifndef SYMLIFT_H
#define SYMLIFT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of every fallible call.
 */
typedef enum SymliftStatus {
  SYMLIFT_STATUS_OK = 0,
  SYMLIFT_STATUS_CHECK_FAILED = 1,
  SYMLIFT_STATUS_OBSTRUCTED = 2,
  SYMLIFT_STATUS_INVALID_INPUT = 3,
} SymliftStatus;

/**
 * A computed lift of some region.
 */
typedef struct SymliftLift SymliftLift;

/**
 * A parsed and validated sampled region.
 */
typedef struct SymliftRegion SymliftRegion;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version tag written into every JSON document.
 */
uint32_t symlift_format_version(void);

/**
 * Parses a region document into a handle. On success stores a new region
 * in `*out_region`; the caller releases it with `symlift_region_free`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out_region` a valid pointer.
 */
enum SymliftStatus symlift_region_from_json(const char *json, struct SymliftRegion **out_region);

/**
 * Serializes a region handle back to its document form.
 *
 * # Safety
 * `region` must come from `symlift_region_from_json` and `out_json` must be
 * a valid pointer; release the string with `symlift_string_free`.
 */
enum SymliftStatus symlift_region_to_json(const struct SymliftRegion *region, char **out_json);

/**
 * Points per tuple, or 0 for a null handle.
 *
 * # Safety
 * `region` must be null or a live region handle.
 */
size_t symlift_region_m(const struct SymliftRegion *region);

/**
 * Grid nodes, or 0 for a null handle.
 *
 * # Safety
 * `region` must be null or a live region handle.
 */
size_t symlift_region_nodes(const struct SymliftRegion *region);

/**
 * Releases a region handle. Null is allowed.
 *
 * # Safety
 * `region` must be null or a live region handle, and must not be used
 * afterwards.
 */
void symlift_region_free(struct SymliftRegion *region);

/**
 * Lifts a region. `Ok` stores a new lift in `*out_lift` (release with
 * `symlift_lift_free`); `Obstructed` means the region admits no coherent
 * lift and the message names the failing edge.
 *
 * # Safety
 * `region` must be a live region handle and `out_lift` a valid pointer.
 */
enum SymliftStatus symlift_lift_compute(const struct SymliftRegion *region,
                                        struct SymliftLift **out_lift);

/**
 * Lifted nodes, or 0 for a null handle.
 *
 * # Safety
 * `lift` must be null or a live lift handle.
 */
size_t symlift_lift_nodes(const struct SymliftLift *lift);

/**
 * Matching decisions settled by the lexicographic tie rule.
 *
 * # Safety
 * `lift` must be null or a live lift handle.
 */
uint64_t symlift_lift_tie_breaks(const struct SymliftLift *lift);

/**
 * Largest per-edge total displacement of the lift.
 *
 * # Safety
 * `lift` must be null or a live lift handle.
 */
double symlift_lift_max_step(const struct SymliftLift *lift);

/**
 * Reads one coordinate of the lifted tuple at `node`: position indexes the
 * tuple, `axis` the coordinate. Fails for label-valued regions and for any
 * index out of range.
 *
 * # Safety
 * `lift` must be a live lift handle and `out_value` a valid pointer.
 */
enum SymliftStatus symlift_lift_coord(const struct SymliftLift *lift,
                                      size_t node,
                                      size_t position,
                                      size_t axis,
                                      double *out_value);

/**
 * Checks a lift against its region and writes the full lift document,
 * verification checks included. Returns `CheckFailed` when a check fails;
 * the document is still written.
 *
 * # Safety
 * `region` and `lift` must be live handles from this library and `out_json`
 * a valid pointer; release the string with `symlift_string_free`.
 */
enum SymliftStatus symlift_lift_to_json(const struct SymliftRegion *region,
                                        const struct SymliftLift *lift,
                                        char **out_json);

/**
 * Releases a lift handle. Null is allowed.
 *
 * # Safety
 * `lift` must be null or a live lift handle, and must not be used
 * afterwards.
 */
void symlift_lift_free(struct SymliftLift *lift);

/**
 * One-shot: parses a region document, lifts it, and writes either the lift
 * document (`Ok`, or `CheckFailed` when its own verification fails) or the
 * obstruction document (`Obstructed`).
 *
 * # Safety
 * `region_json` must be a NUL-terminated string and `out_json` a valid
 * pointer; release the string with `symlift_string_free`.
 */
enum SymliftStatus symlift_lift_report_json(const char *region_json, char **out_json);

/**
 * Checks a lift document against a region handle. `Ok` when every check
 * passes, `CheckFailed` otherwise; the message carries the first failing
 * detail.
 *
 * # Safety
 * `region` must be a live region handle and `lift_json` a NUL-terminated
 * string.
 */
enum SymliftStatus symlift_verify_json(const struct SymliftRegion *region, const char *lift_json);

/**
 * Writes the partition table document for m.
 *
 * # Safety
 * `out_json` must be a valid pointer; release the string with
 * `symlift_string_free`.
 */
enum SymliftStatus symlift_partitions_json(size_t m, char **out_json);

/**
 * Writes the counting document for the discrete q-point base, `CheckFailed`
 * if any of its cross-checks disagree.
 *
 * # Safety
 * `out_json` must be a valid pointer; release the string with
 * `symlift_string_free`.
 */
enum SymliftStatus symlift_count_json(size_t q, size_t m, char **out_json);

/**
 * Sweeps one registered lemma (or "all") over ground sets up to n points
 * and writes the audit document. `CheckFailed` when any verdict deviates
 * from its registered expectation.
 *
 * # Safety
 * `lemma` must be a NUL-terminated string and `out_json` a valid pointer;
 * release the string with `symlift_string_free`.
 */
enum SymliftStatus symlift_audit_json(const char *lemma, size_t n, char **out_json);

/**
 * Message from the calling thread's most recent failing call, or null.
 * Valid until that thread's next call into this library.
 */
const char *symlift_last_error(void);

/**
 * Releases a string produced by this library. Null is allowed.
 *
 * # Safety
 * `s` must be null or a string returned by this library, and must not be
 * used afterwards.
 */
void symlift_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SYMLIFT_H */
