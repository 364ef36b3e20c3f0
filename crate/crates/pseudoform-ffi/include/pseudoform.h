#ifndef PSEUDOFORM_H
#define PSEUDOFORM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Orientation model selector.
 */
typedef enum PfModel {
  /**
   * Two-class model: orientation-reversing maps form one class.
   */
  PfModel_Standard = 0,
  /**
   * Four-class model: time- and space-reversals are distinguished.
   */
  PfModel_Relativistic = 1,
} PfModel;

/**
 * Status code of every fallible entry point.
 */
typedef enum PfStatus {
  /**
   * The call succeeded.
   */
  PfStatus_Ok = 0,
  /**
   * A required pointer argument was NULL.
   */
  PfStatus_NullPointer = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  PfStatus_InvalidUtf8 = 2,
  /**
   * An argument value is outside the supported range.
   */
  PfStatus_InvalidArgument = 3,
  /**
   * Mismatched dimensions, degrees, parities, or orientation models.
   */
  PfStatus_ShapeMismatch = 4,
  /**
   * A numerical precondition failed (singular map, open form, or an
   * evaluation inside an excluded region).
   */
  PfStatus_Numerical = 5,
  /**
   * A measured sign could not be determined.
   */
  PfStatus_Indeterminate = 6,
} PfStatus;

/**
 * Opaque report handle.
 */
typedef struct PfReport PfReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Runs the algebra suite with the given seed.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum PfStatus pf_verify_algebra(uint64_t seed, struct PfReport **out);

/**
 * Runs the calculus suite. An `order` of zero selects the default
 * quadrature order (environment variable `PSEUDOFORM_QUAD_ORDER` or 8).
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum PfStatus pf_verify_calculus(uint32_t order,
                                 double fd_step,
                                 uint64_t seed,
                                 struct PfReport **out);

/**
 * Runs the field-equation suite for a built-in configuration
 * ("plane-wave", "coulomb", or "constant") observed from a frame boosted
 * along the first spatial axis. An `order` of zero selects the default.
 *
 * # Safety
 * `field` must point to a NUL-terminated string and `out` must be valid for
 * writing one pointer.
 */
enum PfStatus pf_verify_maxwell(const char *field,
                                double frame_boost,
                                uint32_t order,
                                struct PfReport **out);

/**
 * Measures the time-reflection parity table of a built-in configuration
 * under the chosen orientation model.
 *
 * # Safety
 * `field` must point to a NUL-terminated string and `out` must be valid for
 * writing one pointer.
 */
enum PfStatus pf_report_parity(enum PfModel model, const char *field, struct PfReport **out);

/**
 * Returns 1 if every check in the report passed, 0 if any failed, and -1 if
 * the handle is NULL.
 *
 * # Safety
 * `report` must be NULL or a handle returned by this library.
 */
int32_t pf_report_pass(const struct PfReport *report);

/**
 * Number of checks in the report; 0 if the handle is NULL.
 *
 * # Safety
 * `report` must be NULL or a handle returned by this library.
 */
uintptr_t pf_report_check_count(const struct PfReport *report);

/**
 * Serializes the report as JSON. Returns NULL if the handle is NULL or
 * serialization fails; release the string with [`pf_string_free`].
 *
 * # Safety
 * `report` must be NULL or a handle returned by this library.
 */
char *pf_report_json(const struct PfReport *report);

/**
 * Renders the report as the same text the command-line tool prints.
 * Returns NULL if the handle is NULL; release with [`pf_string_free`].
 *
 * # Safety
 * `report` must be NULL or a handle returned by this library.
 */
char *pf_report_text(const struct PfReport *report);

/**
 * Copies the most recent error message of the calling thread, or NULL if
 * no error has occurred; release with [`pf_string_free`].
 */
char *pf_last_error_message(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `text` must be NULL or a string returned by this library, and must not be
 * used afterwards.
 */
void pf_string_free(char *text);

/**
 * Releases a report handle. NULL is ignored.
 *
 * # Safety
 * `report` must be NULL or a handle returned by this library, and must not
 * be used afterwards.
 */
void pf_report_free(struct PfReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PSEUDOFORM_H */
