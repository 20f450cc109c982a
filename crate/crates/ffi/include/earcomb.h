#ifndef EARCOMB_H
#define EARCOMB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call. The first three match the CLI exit codes.
 */
typedef enum EarcombStatus {
  EARCOMB_STATUS_OK = 0,
  /**
   * The computation ran but a certificate or check failed.
   */
  EARCOMB_STATUS_CERTIFICATE_FAILED = 1,
  EARCOMB_STATUS_INVALID_INPUT = 2,
  EARCOMB_STATUS_NULL_POINTER = 3,
  /**
   * The output buffer is too short; the needed length was written.
   */
  EARCOMB_STATUS_BUFFER_TOO_SMALL = 4,
  EARCOMB_STATUS_PANIC = 5,
} EarcombStatus;

/**
 * A poset with its Boolean pieces, ready to decompose.
 */
typedef struct EarcombInstance EarcombInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer is
 * valid until the next call into the library from this thread.
 */
const char *earcomb_last_error(void);

/**
 * Releases a string returned by the library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void earcomb_string_free(char *s);

/**
 * Builds the Boolean lattice `B_d` as a single piece.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum EarcombStatus earcomb_boolean(size_t d, struct EarcombInstance **out);

/**
 * Builds the lattice of flats of a matroid given as
 * `{"ground": n, "bases": [[...], ...]}` with 1-based elements.
 *
 * # Safety
 * `matroid_json` must be a nul-terminated string; `out` must be valid for
 * writes.
 */
enum EarcombStatus earcomb_geometric(const char *matroid_json, struct EarcombInstance **out);

/**
 * Builds the face poset of a complex whose facets are listed in shelling
 * order.
 *
 * # Safety
 * `complex_json` must be a nul-terminated string; `out` must be valid for
 * writes.
 */
enum EarcombStatus earcomb_faceposet(const char *complex_json, struct EarcombInstance **out);

/**
 * Releases an instance. NULL is ignored.
 *
 * # Safety
 * `instance` must come from this library and not have been freed.
 */
void earcomb_instance_free(struct EarcombInstance *instance);

/**
 * Rank of the ambient poset, or 0 for NULL.
 *
 * # Safety
 * `instance` must be NULL or a live handle.
 */
size_t earcomb_instance_d(const struct EarcombInstance *instance);

/**
 * Decomposes `Δ(P_S)` for the rank set `s[0..s_len]`, or for every nonempty
 * rank set when `s_len` is 0, and writes the JSON report to `out_json`.
 * Returns `CertificateFailed` with the report written when a check fails.
 *
 * # Safety
 * `instance` must be a live handle, `s` valid for `s_len` reads and
 * `out_json` valid for writes.
 */
enum EarcombStatus earcomb_decompose(const struct EarcombInstance *instance,
                                     const size_t *s,
                                     size_t s_len,
                                     char **out_json);

/**
 * Re-checks the ears of a report produced by [`earcomb_decompose`] and
 * writes the per-run certificate reports to `out_json`.
 *
 * # Safety
 * `artifact_json` must be a nul-terminated string; `out_json` must be
 * valid for writes.
 */
enum EarcombStatus earcomb_verify(const char *artifact_json, char **out_json);

/**
 * Writes `(f_{-1}, f_0, ..., f_{d-1})` of a complex to `buf` and its length
 * to `len`. Pass `cap` 0 to query the length.
 *
 * # Safety
 * `complex_json` must be a nul-terminated string, `buf` valid for `cap`
 * writes and `len` valid for writes.
 */
enum EarcombStatus earcomb_f_vector(const char *complex_json,
                                    int64_t *buf,
                                    size_t cap,
                                    size_t *len);

/**
 * Writes `(h_0, ..., h_d)` of a pure complex, as [`earcomb_f_vector`].
 *
 * # Safety
 * As for [`earcomb_f_vector`].
 */
enum EarcombStatus earcomb_h_vector(const char *complex_json,
                                    int64_t *buf,
                                    size_t cap,
                                    size_t *len);

/**
 * Writes whether `S` dominates `T` as subsets of `[d-1]`.
 *
 * # Safety
 * `t` and `s` must be valid for `t_len` and `s_len` reads; `out` must be
 * valid for writes.
 */
enum EarcombStatus earcomb_dominates(size_t d,
                                     const size_t *t,
                                     size_t t_len,
                                     const size_t *s,
                                     size_t s_len,
                                     bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EARCOMB_H */
