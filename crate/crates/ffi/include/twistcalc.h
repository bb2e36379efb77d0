#ifndef TWISTCALC_H
#define TWISTCALC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. `TC_STATUS_OK` is zero.
 */
typedef enum TcStatus {
  TC_STATUS_OK = 0,
  TC_STATUS_NULL_POINTER = 1,
  TC_STATUS_INVALID_UTF8 = 2,
  TC_STATUS_PARSE_ERROR = 3,
  TC_STATUS_UNKNOWN_COMMAND = 4,
  TC_STATUS_COMMAND_FAILED = 5,
  TC_STATUS_INVALID_ARGUMENT = 6,
  TC_STATUS_PANIC = 7,
} TcStatus;

/**
 * A parsed document.
 */
typedef struct TcDocument TcDocument;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses `source`; on success `*out` owns a document to free with [`tc_document_free`].
 *
 * # Safety
 * `source` is a NUL-terminated string and `out` points to writable storage.
 */
enum TcStatus tc_document_parse(const char *source, struct TcDocument **out);

/**
 * # Safety
 * `doc` is null or came from [`tc_document_parse`] and has not been freed.
 */
void tc_document_free(struct TcDocument *doc);

/**
 * Canonical text of the document.
 *
 * # Safety
 * `doc` is a live document and `out` points to writable storage.
 */
enum TcStatus tc_document_print(const struct TcDocument *doc, char **out);

/**
 * Runs `command` and stores the JSON report in `*out_json`. `decided` may be
 * null; otherwise it receives 1 when the report reaches a verdict and 0 when
 * it stays undecided.
 *
 * # Safety
 * `doc` is a live document, `command` a NUL-terminated string, `out_json`
 * writable, and `decided` null or writable.
 */
enum TcStatus tc_run(const struct TcDocument *doc,
                     const char *command,
                     bool refined,
                     char **out_json,
                     int32_t *decided);

/**
 * Elliptic chain test. `torsion[i]` is the order `t_{i+2}`, with 0 for
 * infinite order; `len` must be `g - 1`. Writes 1 or 0 to `*out`.
 *
 * # Safety
 * `torsion` points to `len` readable values (or is null with `len == 0`) and `out` is writable.
 */
enum TcStatus tc_chain_is_weierstrass(uint32_t g,
                                      const uint64_t *torsion,
                                      size_t len,
                                      int32_t *out);

/**
 * Dimension of the stratum with the given orders, affine or projectivized.
 *
 * # Safety
 * `orders` points to `len` readable values and `out` is writable.
 */
enum TcStatus tc_stratum_dimension(const int64_t *orders,
                                   size_t len,
                                   bool projectivized,
                                   int64_t *out);

/**
 * Message for the last failing call on this thread, or null. Free with [`tc_string_free`].
 */
char *tc_last_error(void);

/**
 * # Safety
 * `s` is null or a string returned by this library that has not been freed.
 */
void tc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TWISTCALC_H */
