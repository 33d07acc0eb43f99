#ifndef HOPF_CW_H
#define HOPF_CW_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define HCW_OK 0

#define HCW_ERR_NULL -1

#define HCW_ERR_UTF8 -2

#define HCW_ERR_PANIC -3

#define HCW_ERR_MODE -4

#define HCW_MODE_CONNES 0

#define HCW_MODE_BICOMPLEX 1

/**
 * A validated fixture.
 */
typedef struct HcwFixture HcwFixture;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. Valid until the next
 * failing call on the same thread.
 */
const char *hcw_last_error(void);

/**
 * Library version as a static string.
 */
const char *hcw_version(void);

/**
 * Parses and validates a fixture document.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
int32_t hcw_fixture_from_json(const char *json, struct HcwFixture **out);

/**
 * Reads and validates a fixture file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
int32_t hcw_fixture_load(const char *path, struct HcwFixture **out);

/**
 * # Safety
 * `fx` must be NULL or a handle returned by this library, not yet freed.
 */
void hcw_fixture_free(struct HcwFixture *fx);

/**
 * Canonical JSON of the fixture.
 *
 * # Safety
 * `fx` must be a live handle and `out` a valid pointer.
 */
int32_t hcw_fixture_to_json(const struct HcwFixture *fx, char **out);

/**
 * Runs a named suite. `passed` is set to 1 when no check failed, else 0;
 * `report` receives the JSON report.
 *
 * # Safety
 * `fx` must be a live handle, `suite` a NUL-terminated string, and the
 * output pointers valid.
 */
int32_t hcw_verify(const struct HcwFixture *fx, const char *suite, int32_t *passed, char **report);

/**
 * Chern-Weil cycle for a cotrace selector (a basis label or comma-separated
 * coefficients) in degree `degree`, as JSON.
 *
 * # Safety
 * `fx` must be a live handle, `cotrace` a NUL-terminated string and `out` a
 * valid pointer.
 */
int32_t hcw_compute_chw(const struct HcwFixture *fx,
                        const char *cotrace,
                        size_t degree,
                        char **out);

/**
 * Dimension of the cyclic homology of the coinvariants in degree `degree`.
 *
 * # Safety
 * `fx` must be a live handle and `dim` a valid pointer.
 */
int32_t hcw_homology_dim(const struct HcwFixture *fx, size_t degree, int32_t mode, size_t *dim);

/**
 * Deforms the fixture by one of its named cocycles into a new handle.
 *
 * # Safety
 * `fx` must be a live handle, `cocycle` a NUL-terminated string and `out` a
 * valid pointer.
 */
int32_t hcw_deform(const struct HcwFixture *fx, const char *cocycle, struct HcwFixture **out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void hcw_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOPF_CW_H */
