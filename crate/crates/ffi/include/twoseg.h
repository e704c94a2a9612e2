#ifndef TWOSEG_H
#define TWOSEG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Check flags for [`twoseg_check`]; 0 runs every applicable check.
#define TWOSEG_CHECK_2SEGAL 1

#define TWOSEG_CHECK_UNITALITY (1 << 1)

#define TWOSEG_CHECK_SUBDIVISIONS (1 << 2)

#define TWOSEG_CHECK_PARACYCLIC (1 << 3)

#define TWOSEG_CHECK_GAMMA (1 << 4)

#define TWOSEG_CHECK_FROBENIUS (1 << 5)

#define TWOSEG_CHECK_FULL_HEXAGON (1 << 6)

// Result codes; 0 and 1 match the CLI exit codes for a check.
typedef enum TwosegStatus {
  TWOSEG_STATUS_OK = 0,
  // A check ran and failed, or the input has the wrong structure.
  TWOSEG_STATUS_CHECK_FAILED = 1,
  // Malformed document, unknown name or out-of-range argument.
  TWOSEG_STATUS_INVALID_INPUT = 2,
  TWOSEG_STATUS_NULL_POINTER = 3,
  TWOSEG_STATUS_INVALID_UTF8 = 4,
  // The library panicked; the message says where.
  TWOSEG_STATUS_INTERNAL = 5,
} TwosegStatus;

// Derivation directions for [`twoseg_derive`].
typedef enum TwosegDirection {
  TWOSEG_DIRECTION_FROBENIUS_TO_PARACYCLIC = 0,
  TWOSEG_DIRECTION_PARACYCLIC_TO_FROBENIUS = 1,
  TWOSEG_DIRECTION_GAMMA_TO_COMMUTATIVE = 2,
  TWOSEG_DIRECTION_COMMUTATIVE_TO_GAMMA = 3,
} TwosegDirection;

// Opaque handle to a parsed structure document.
typedef struct TwosegDocument TwosegDocument;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses and validates a JSON structure document.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum TwosegStatus twoseg_document_parse(const char *json, struct TwosegDocument **out);

// Builds a catalog example; `param` 0 picks the default parameter.
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid pointer.
enum TwosegStatus twoseg_document_example(const char *name,
                                          size_t param,
                                          size_t level,
                                          struct TwosegDocument **out);

// Releases a document; null is ignored.
//
// # Safety
// `doc` must come from this library and not be used afterwards.
void twoseg_document_free(struct TwosegDocument *doc);

// Serializes a document to JSON.
//
// # Safety
// `doc` must be a live document and `out` a valid pointer.
enum TwosegStatus twoseg_document_to_json(const struct TwosegDocument *doc, char **out);

// Top simplicial level of a document.
//
// # Safety
// `doc` must be a live document and `out` a valid pointer.
enum TwosegStatus twoseg_document_top_level(const struct TwosegDocument *doc, size_t *out);

// Runs the checks selected by `flags` and returns `Ok` or `CheckFailed`.
// If `report` is non-null it receives the report as JSON.
//
// # Safety
// `doc` must be a live document; `report` may be null.
enum TwosegStatus twoseg_check(const struct TwosegDocument *doc, uint32_t flags, char **report);

// Derives a new document in the given direction.
//
// # Safety
// `doc` must be a live document and `out` a valid pointer.
enum TwosegStatus twoseg_derive(const struct TwosegDocument *doc,
                                enum TwosegDirection direction,
                                struct TwosegDocument **out);

// Searches for an associator on a 2-truncated document. Returns `Ok` when
// one exists and `CheckFailed` otherwise; `verdict` may be null.
//
// # Safety
// `doc` must be a live document; `verdict` may be null.
enum TwosegStatus twoseg_search_lift(const struct TwosegDocument *doc,
                                     uint64_t budget,
                                     char **verdict);

// Releases a string returned by this library; null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void twoseg_string_free(char *s);

// Message for the last failure on this thread, empty after a success. The
// pointer stays valid until the next call on the same thread.
const char *twoseg_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TWOSEG_H */
