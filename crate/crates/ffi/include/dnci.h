/* C interface to the doubly non-commuting isometry engine. */

#ifndef DNCI_H
#define DNCI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible entry point.
enum DnciStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  // Success.
  DNCI_STATUS_OK = 0,
  // A required pointer argument was null.
  DNCI_STATUS_NULL_POINTER = 1,
  // An argument was structurally invalid (bad signature shape, bad
  // truncation, unknown suite, …).
  DNCI_STATUS_INVALID_ARGUMENT = 2,
  // An expression failed to parse; the message carries the byte
  // offset.
  DNCI_STATUS_PARSE_FAILED = 3,
  // The operation is not defined for the given input (for example a
  // norm of a non-diagonal element).
  DNCI_STATUS_DOMAIN_ERROR = 4,
  // An internal invariant broke; the library caught the panic.
  DNCI_STATUS_PANICKED = 5,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum DnciStatus DnciStatus;
#else
typedef int32_t DnciStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

// Opaque: an element in canonical normal form.
typedef struct DnciElement DnciElement;

// Opaque: a generator signature (counts plus angle assignment).
typedef struct DnciSignature DnciSignature;

// One rational angle entry: `phi_(i,j) = num/den` with `1 <= i < j <= n`.
typedef struct DnciAngle {
  uint32_t i;
  uint32_t j;
  int64_t num;
  int64_t den;
} DnciAngle;

// One numeric angle entry for the residual-based mode.
typedef struct DnciNumericAngle {
  uint32_t i;
  uint32_t j;
  double value;
} DnciNumericAngle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// The message describing the most recent failure on this thread, or
// null if the last call succeeded. Borrowed; valid until the next
// library call on the same thread.
const char *dnci_last_error_message(void);

// Library version as a static string; never free this.
const char *dnci_version(void);

// Builds a signature with exact rational angles. Returns null on error
// (see `dnci_last_error_message()`).
//
// # Safety
// `angles` must point to `angles_len` readable entries (or be null with
// `angles_len == 0`).
struct DnciSignature *dnci_signature_new_exact(uint32_t n,
                                               uint32_t l,
                                               const struct DnciAngle *angles,
                                               size_t angles_len);

// Builds a signature with floating-point angles (numeric mode).
//
// # Safety
// `angles` must point to `angles_len` readable entries (or be null with
// `angles_len == 0`).
struct DnciSignature *dnci_signature_new_numeric(uint32_t n,
                                                 uint32_t l,
                                                 const struct DnciNumericAngle *angles,
                                                 size_t angles_len);

// Releases a signature handle. Null is ignored.
//
// # Safety
// `sig` must have come from a `dnci_signature_new_*` call and must not
// be used afterwards.
void dnci_signature_free(struct DnciSignature *sig);

// Releases an element handle. Null is ignored.
//
// # Safety
// `elem` must have come from this library and must not be used
// afterwards.
void dnci_element_free(struct DnciElement *elem);

// Releases a string produced by this library. Null is ignored.
//
// # Safety
// `s` must have come from an out-parameter of this library.
void dnci_string_free(char *s);

// Parses an expression into a canonical-form element.
//
// # Safety
// All pointers must be valid; `out` receives an owned handle on `Ok`.
DnciStatus dnci_parse(const struct DnciSignature *sig, const char *expr, struct DnciElement **out);

// Canonical text form of an element; returns null on null input.
//
// # Safety
// `elem` must be a live element handle.
char *dnci_element_to_string(const struct DnciElement *elem);

// `out = a · b` in canonical form.
//
// # Safety
// All handles must be live; `out` must be writable.
DnciStatus dnci_mul(const struct DnciSignature *sig,
                    const struct DnciElement *a,
                    const struct DnciElement *b,
                    struct DnciElement **out);

// `out = a + b`.
//
// # Safety
// All handles must be live; `out` must be writable.
DnciStatus dnci_add(const struct DnciSignature *sig,
                    const struct DnciElement *a,
                    const struct DnciElement *b,
                    struct DnciElement **out);

// `out = a*` (the adjoint).
//
// # Safety
// All handles must be live; `out` must be writable.
DnciStatus dnci_adjoint(const struct DnciSignature *sig,
                        const struct DnciElement *a,
                        struct DnciElement **out);

// `out = θ(a)`: the projection onto the balanced (diagonal) part.
//
// # Safety
// All handles must be live; `out` must be writable.
DnciStatus dnci_theta(const struct DnciSignature *sig,
                      const struct DnciElement *a,
                      struct DnciElement **out);

// `out = a ·_Θ b`: the deformed product over the zero-angle base.
//
// # Safety
// All handles must be live; `out` must be writable.
DnciStatus dnci_deformed_mul(const struct DnciSignature *sig,
                             const struct DnciElement *a,
                             const struct DnciElement *b,
                             struct DnciElement **out);

// Norm of a diagonal element (sums of `s^a s^{*a}`). Writes the value to
// `out_value`; when `out_exact_sq` is non-null it receives the exact
// squared norm as a rational string (or null when the squared norm is
// irrational). Fails with `DomainError` off the diagonal.
//
// # Safety
// Handles must be live; `out_value` must be writable; `out_exact_sq`
// may be null.
DnciStatus dnci_norm(const struct DnciSignature *sig,
                     const struct DnciElement *a,
                     double *out_value,
                     char **out_exact_sq);

// Normalizes a product of generator letters; writes a JSON document
// `{"phase": "...", "monomial": "..."}`.
//
// # Safety
// Handles and strings must be valid; `out_json` must be writable.
DnciStatus dnci_normalize_json(const struct DnciSignature *sig, const char *word, char **out_json);

// K-group ranks for the shape `(n, l)` as JSON
// `{"k0_rank": "...", "k1_rank": "...", "torsion_free": true}`.
//
// # Safety
// `out_json` must be writable.
DnciStatus dnci_kgroups_json(int64_t n, int64_t l, char **out_json);

// Runs one verification suite and writes its JSON report (the same
// shape the CLI prints). The status only reflects whether the suite
// ran; read `"pass"` from the report.
//
// # Safety
// Handles and strings must be valid; `out_json` must be writable.
DnciStatus dnci_run_suite_json(const struct DnciSignature *sig,
                               const char *suite,
                               uint32_t cutoff,
                               uint32_t band,
                               uint64_t seed,
                               bool numeric,
                               char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DNCI_H */
