#ifndef PMP_H
#define PMP_H

/* Generated with cbindgen:0.27.0 */

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// How [`pmp_conjugacy`] chooses the cut.
typedef enum PmpModeKind {
  // No cut; fails unless the actions are conjugate.
  PMP_MODE_KIND_EXACT = 0,
  // Decompose with components of at most `bound` atoms.
  PMP_MODE_KIND_BOUND = 1,
  // Keep the error below `epsilon`; `bound` 0 means unbounded.
  PMP_MODE_KIND_EPSILON = 2,
} PmpModeKind;

// Result code of every fallible call.
typedef enum PmpStatus {
  PMP_STATUS_OK = 0,
  PMP_STATUS_NULL_ARGUMENT = 1,
  PMP_STATUS_INVALID_UTF8 = 2,
  PMP_STATUS_PARSE = 3,
  PMP_STATUS_DOMAIN_MISMATCH = 4,
  PMP_STATUS_INVALID_SPACE = 5,
  PMP_STATUS_INVALID_PERMUTATION = 6,
  PMP_STATUS_WEIGHT_MISMATCH = 7,
  PMP_STATUS_SPLIT_MISMATCH = 8,
  PMP_STATUS_INVALID_EDGE_SET = 9,
  PMP_STATUS_INVARIANCE_VIOLATION = 10,
  PMP_STATUS_RESOURCE = 11,
  PMP_STATUS_IRS_MISMATCH = 12,
  PMP_STATUS_PRECONDITION = 13,
  PMP_STATUS_NO_ISOMORPHISM = 14,
  PMP_STATUS_BUDGET_EXCEEDED = 15,
  PMP_STATUS_INTERNAL = 16,
  PMP_STATUS_INVALID_ARGUMENT = 17,
  PMP_STATUS_PANIC = 99,
} PmpStatus;

// A parsed action document.
typedef struct PmpAction PmpAction;

// An empirical IRS.
typedef struct PmpIrs PmpIrs;

// A conjugacy witness.
typedef struct PmpWitness PmpWitness;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version, a static string owned by the library.
const char *pmp_version(void);

// Message of the last failed call on this thread, or null. Free with
// [`pmp_string_free`].
char *pmp_last_error_message(void);

// # Safety
// `s` must be null or a string returned by this library, freed at most once.
void pmp_string_free(char *s);

// Parse an action document.
//
// # Safety
// `text` must be a nul-terminated string; `out` must be writable.
enum PmpStatus pmp_action_parse(const char *text, struct PmpAction **out);

// # Safety
// `a` must be null or a handle from [`pmp_action_parse`], freed at most once.
void pmp_action_free(struct PmpAction *a);

// Canonical text of an action document.
//
// # Safety
// `a` must be a live handle; `out` must be writable.
enum PmpStatus pmp_action_serialize(const struct PmpAction *a, char **out);

// Number of atoms, 0 for a null handle.
//
// # Safety
// `a` must be null or a live handle.
uintptr_t pmp_action_atom_count(const struct PmpAction *a);

// Number of generators, 0 for a null handle.
//
// # Safety
// `a` must be null or a live handle.
uintptr_t pmp_action_generator_count(const struct PmpAction *a);

// Uniform distance between two actions on the same space, as `"p/q"`.
//
// # Safety
// `a` and `b` must be live handles; `out` must be writable.
enum PmpStatus pmp_uniform_distance(const struct PmpAction *a,
                                    const struct PmpAction *b,
                                    char **out);

// Empirical IRS of an action.
//
// # Safety
// `a` must be a live handle; `out` must be writable.
enum PmpStatus pmp_irs_compute(const struct PmpAction *a, struct PmpIrs **out);

// Parse an IRS from its text form.
//
// # Safety
// `text` must be a nul-terminated string; `out` must be writable.
enum PmpStatus pmp_irs_from_text(const char *text, struct PmpIrs **out);

// # Safety
// `irs` must be null or a handle from this library, freed at most once.
void pmp_irs_free(struct PmpIrs *irs);

// Text form of an IRS, one class per line.
//
// # Safety
// `irs` must be a live handle; `out` must be writable.
enum PmpStatus pmp_irs_to_text(const struct PmpIrs *irs, char **out);

// # Safety
// `a` and `b` must be live handles; `out` must be writable.
enum PmpStatus pmp_irs_equal(const struct PmpIrs *a, const struct PmpIrs *b, bool *out);

// Conjugacy witness between two actions with equal IRS, tested on the
// generators.
//
// `epsilon` is a `"p/q"` string read only in [`PmpModeKind::Epsilon`].
//
// # Safety
// `alpha` and `beta` must be live handles; `epsilon` must be null or a
// nul-terminated string; `out` must be writable.
enum PmpStatus pmp_conjugacy(const struct PmpAction *alpha,
                             const struct PmpAction *beta,
                             enum PmpModeKind kind,
                             uintptr_t bound,
                             const char *epsilon,
                             struct PmpWitness **out);

// # Safety
// `w` must be null or a handle from this library, freed at most once.
void pmp_witness_free(struct PmpWitness *w);

// # Safety
// `w` must be a live handle; `out` must be writable.
enum PmpStatus pmp_witness_to_json(const struct PmpWitness *w, char **out);

// # Safety
// `json` must be a nul-terminated string; `out` must be writable.
enum PmpStatus pmp_witness_from_json(const char *json, struct PmpWitness **out);

// Claimed error bound, as `"p/q"`.
//
// # Safety
// `w` must be a live handle; `out` must be writable.
enum PmpStatus pmp_witness_bound(const struct PmpWitness *w, char **out);

// Measure of the recorded error set, as `"p/q"`.
//
// # Safety
// `w` must be a live handle; `out` must be writable.
enum PmpStatus pmp_witness_error_measure(const struct PmpWitness *w, char **out);

// Recheck a witness against a pair of actions. `passed` receives the
// verdict; `report`, if not null, receives the JSON report.
//
// # Safety
// `w`, `alpha` and `beta` must be live handles; `passed` must be writable;
// `report` must be null or writable.
enum PmpStatus pmp_witness_verify(const struct PmpWitness *w,
                                  const struct PmpAction *alpha,
                                  const struct PmpAction *beta,
                                  bool *passed,
                                  char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PMP_H */
