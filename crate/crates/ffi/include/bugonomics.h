#ifndef BUGONOMICS_H
#define BUGONOMICS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. The first four match the command-line exit statuses.
 */
typedef enum BugonomicsStatus {
  BUGONOMICS_STATUS_OK = 0,
  /**
   * Fatal lint or validation findings.
   */
  BUGONOMICS_STATUS_FINDINGS = 1,
  /**
   * Malformed input: parse, schema or value errors.
   */
  BUGONOMICS_STATUS_INPUT = 2,
  /**
   * The computation is undefined or overflowed.
   */
  BUGONOMICS_STATUS_COMPUTATION = 3,
  BUGONOMICS_STATUS_NULL_ARGUMENT = 4,
  BUGONOMICS_STATUS_INVALID_UTF8 = 5,
  /**
   * A Rust panic was caught at the boundary.
   */
  BUGONOMICS_STATUS_INTERNAL = 6,
} BugonomicsStatus;

/**
 * Opaque handle to a parsed campaign report.
 */
typedef struct BugonomicsReport BugonomicsReport;

/**
 * Message for the most recent failure on this thread, or null. Valid until
 * the next library call on the same thread.
 */
const char *bugonomics_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *bugonomics_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a pointer returned by this library and not yet freed.
 */
void bugonomics_string_free(char *s);

/**
 * Parses a campaign document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum BugonomicsStatus bugonomics_report_parse(const char *json, struct BugonomicsReport **out);

/**
 * Loads a built-in fixture by name, such as `firefox_opus46`.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum BugonomicsStatus bugonomics_report_fixture(const char *name, struct BugonomicsReport **out);

/**
 * Releases a report handle. Null is ignored.
 *
 * # Safety
 * `report` must be null or a handle from this library that was not yet freed.
 */
void bugonomics_report_free(struct BugonomicsReport *report);

/**
 * Accepted fraction as an unreduced numerator and denominator.
 *
 * # Safety
 * `report` must be a live handle; the out-pointers must be writable.
 */
enum BugonomicsStatus bugonomics_report_precision(const struct BugonomicsReport *report,
                                                  uint64_t *numerator,
                                                  uint64_t *denominator);

/**
 * Derived metrics as a JSON object.
 *
 * # Safety
 * `report` must be a live handle; `out` must be writable.
 */
enum BugonomicsStatus bugonomics_report_summary_json(const struct BugonomicsReport *report,
                                                     char **out);

/**
 * Lint findings as a JSON array. Returns `Findings` (with the array still
 * written) when any finding is fatal.
 *
 * # Safety
 * `report` must be a live handle; `out` must be writable.
 */
enum BugonomicsStatus bugonomics_report_lint_json(const struct BugonomicsReport *report,
                                                  char **out);

/**
 * Parses a dollar amount such as `"1234.56"` into micro-dollars.
 *
 * # Safety
 * `usd` must be a NUL-terminated string; `micros` must be writable.
 */
enum BugonomicsStatus bugonomics_money_parse(const char *usd, int64_t *micros);

/**
 * Labor cost of `item_count` items at `hours_per_item` hours each and
 * `usd_per_hour`, in micro-dollars. Hours and rate are decimal strings.
 *
 * # Safety
 * The strings must be NUL-terminated; `micros` must be writable.
 */
enum BugonomicsStatus bugonomics_stage_cost(uint64_t item_count,
                                            const char *hours_per_item,
                                            const char *usd_per_hour,
                                            int64_t *micros);

/**
 * Runs a simulator scenario document and returns
 * `{"result": ..., "bottleneck": ...}` as JSON.
 *
 * # Safety
 * `scenario_json` must be NUL-terminated; `out` must be writable.
 */
enum BugonomicsStatus bugonomics_simulate_json(const char *scenario_json, char **out);

#endif  /* BUGONOMICS_H */
