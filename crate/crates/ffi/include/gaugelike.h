#ifndef GAUGELIKE_H
#define GAUGELIKE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GlStatus {
  GL_STATUS_OK = 0,
  GL_STATUS_NULL_POINTER = 1,
  GL_STATUS_INVALID_UTF8 = 2,
  GL_STATUS_CONFIG = 3,
  GL_STATUS_BUDGET = 4,
  GL_STATUS_SYMMETRY = 5,
  GL_STATUS_NUMERICAL = 6,
  GL_STATUS_BUFFER_TOO_SMALL = 7,
  GL_STATUS_PANIC = 8,
  GL_STATUS_OTHER = 9,
} GlStatus;

typedef struct GlLattice GlLattice;

typedef struct GlModel GlModel;

typedef struct GlSpectrum GlSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *gl_version(void);

/**
 * Copy of the last error message on this thread, or NULL when none.
 * Release with `gl_string_free`.
 */
char *gl_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void gl_string_free(char *s);

/**
 * Builds a lattice from a JSON spec such as
 * `{"kind":"parallelogram","L":3}`.
 *
 * # Safety
 * `spec_json` must be a valid NUL-terminated string; `out` must be writable.
 */
enum GlStatus gl_lattice_new(const char *spec_json, struct GlLattice **out);

/**
 * # Safety
 * `lattice` must be NULL or a handle from `gl_lattice_new` not yet freed.
 */
void gl_lattice_free(struct GlLattice *lattice);

/**
 * # Safety
 * `lattice` must be a live handle; `n_sites` must be writable.
 */
enum GlStatus gl_lattice_n_sites(const struct GlLattice *lattice, size_t *n_sites);

/**
 * Builds a model on `lattice` from a JSON model spec such as
 * `{"kind":"pcm","couplings":{"jx":1,"jy":0.5}}`. The lattice is copied.
 *
 * # Safety
 * `lattice` must be a live handle, `model_json` a valid string and `out`
 * writable.
 */
enum GlStatus gl_model_new(const struct GlLattice *lattice,
                           const char *model_json,
                           struct GlModel **out);

/**
 * # Safety
 * `model` must be NULL or a handle from `gl_model_new` not yet freed.
 */
void gl_model_free(struct GlModel *model);

/**
 * # Safety
 * `model` must be a live handle; `n_terms` must be writable.
 */
enum GlStatus gl_model_n_terms(const struct GlModel *model, size_t *n_terms);

/**
 * Dual-pair certificate of the model as a JSON string.
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable. Free the result
 * with `gl_string_free`.
 */
enum GlStatus gl_certificate_json(const struct GlModel *model, char **out);

/**
 * Full spectrum, resolved into row sectors when `use_sectors` is nonzero
 * and the model has diagonal row strings.
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum GlStatus gl_spectrum_new(const struct GlModel *model,
                              int32_t use_sectors,
                              struct GlSpectrum **out);

/**
 * # Safety
 * `spectrum` must be NULL or a handle from `gl_spectrum_new` not yet freed.
 */
void gl_spectrum_free(struct GlSpectrum *spectrum);

/**
 * Number of eigenvalues held.
 *
 * # Safety
 * `spectrum` must be a live handle; `len` must be writable.
 */
enum GlStatus gl_spectrum_len(const struct GlSpectrum *spectrum, size_t *len);

/**
 * Copies all eigenvalues, ascending, into `buf` of capacity `cap`.
 *
 * # Safety
 * `spectrum` must be a live handle and `buf` must point to `cap` writable
 * doubles.
 */
enum GlStatus gl_spectrum_eigenvalues(const struct GlSpectrum *spectrum, double *buf, size_t cap);

/**
 * Runs a full config document and returns the JSON record. `exit_code`
 * receives the CLI exit status for that record. Failures inside the run
 * are reported in the record, so this returns `Ok` unless the arguments
 * themselves are unusable.
 *
 * # Safety
 * `config_json` must be a valid string; `record_out` and `exit_code` must
 * be writable. Free the record with `gl_string_free`.
 */
enum GlStatus gl_run_json(const char *config_json, char **record_out, int32_t *exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GAUGELIKE_H */
