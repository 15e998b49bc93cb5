/* C interface to the triorbit 3-orbit group library. */

#ifndef TRIORBIT_H
#define TRIORBIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum TriorbitStatus {
  TriorbitStatus_Ok = 0,
  /**
   * A pointer argument was null or a parameter was out of range.
   */
  TriorbitStatus_InvalidArgument = 1,
  /**
   * Input text was not a valid group file.
   */
  TriorbitStatus_ParseError = 2,
  /**
   * The operation is not defined for this kind of group.
   */
  TriorbitStatus_Unsupported = 3,
  /**
   * A size cap or search budget was reached; the answer is unknown.
   */
  TriorbitStatus_Capped = 4,
  /**
   * An internal invariant failed.
   */
  TriorbitStatus_Internal = 5,
} TriorbitStatus;

/**
 * Verdict strategies, mirroring the library's.
 */
typedef enum TriorbitStrategy {
  /**
   * Catalog generators only; proves "true" or stays unknown.
   */
  TriorbitStrategy_Exhibited = 0,
  /**
   * Catalog generators, then the pruned stabilizer search.
   */
  TriorbitStrategy_Search = 1,
  /**
   * Brute-force oracle on the Cayley table.
   */
  TriorbitStrategy_Oracle = 2,
} TriorbitStrategy;

/**
 * Opaque group handle.
 */
typedef struct TriorbitGroup TriorbitGroup;

/**
 * Three-valued verdict with the computed orbit count.
 */
typedef struct TriorbitVerdict {
  /**
   * 1 = proven 3-orbit, 0 = proven not, -1 = unknown.
   */
  int8_t is3;
  /**
   * Automorphism orbit count when established, else -1.
   */
  int64_t orbit_count;
} TriorbitVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message for this thread, NUL-terminated. Never null. The
 * pointer stays valid until the next triorbit call on the same thread.
 */
const char *triorbit_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *triorbit_version(void);

/**
 * Heisenberg group over F_q, order q^3.
 *
 * # Safety
 * `out` must be a valid pointer to a `TriorbitGroup *`.
 */
enum TriorbitStatus triorbit_construct_heisenberg(uint64_t q, struct TriorbitGroup **out);

/**
 * Central product of `copies` Heisenberg groups over F_q, order q^(1+2m).
 *
 * # Safety
 * `out` must be a valid pointer to a `TriorbitGroup *`.
 */
enum TriorbitStatus triorbit_construct_extraspecial(uint64_t q,
                                                    uint32_t copies,
                                                    struct TriorbitGroup **out);

/**
 * Sylow p-subgroup of SU(3, q), order q^3.
 *
 * # Safety
 * `out` must be a valid pointer to a `TriorbitGroup *`.
 */
enum TriorbitStatus triorbit_construct_su3_sylow(uint64_t q, struct TriorbitGroup **out);

/**
 * Twisted group on F_q x F_q with multiplication twisted by x -> x^(p^e).
 *
 * # Safety
 * `out` must be a valid pointer to a `TriorbitGroup *`.
 */
enum TriorbitStatus triorbit_construct_suzuki(uint64_t q, uint32_t e, struct TriorbitGroup **out);

/**
 * The order-512 group with center 2^3 and commutator map built from the
 * octonion-style triple structure.
 *
 * # Safety
 * `out` must be a valid pointer to a `TriorbitGroup *`.
 */
enum TriorbitStatus triorbit_construct_p_epsilon(struct TriorbitGroup **out);

/**
 * Parse a group file (cocycle or table format) from JSON text.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string; `out` must be a valid
 * pointer to a `TriorbitGroup *`.
 */
enum TriorbitStatus triorbit_group_from_json(const char *json, struct TriorbitGroup **out);

/**
 * Serialize the group back to its canonical JSON file format.
 *
 * # Safety
 * `group` must be a live handle from this library; `out` must be a valid
 * pointer to a `char *`. The result must be freed with
 * `triorbit_string_free`.
 */
enum TriorbitStatus triorbit_group_to_json(const struct TriorbitGroup *group, char **out);

/**
 * Group order as a decimal or p^k string (orders can exceed 64 bits).
 *
 * # Safety
 * `group` must be a live handle; `out` must be a valid pointer to a
 * `char *`. The result must be freed with `triorbit_string_free`.
 */
enum TriorbitStatus triorbit_group_order(const struct TriorbitGroup *group, char **out);

/**
 * Center order for cocycle-format groups, as a p^k string.
 *
 * # Safety
 * `group` must be a live handle; `out` must be a valid pointer to a
 * `char *`. The result must be freed with `triorbit_string_free`.
 */
enum TriorbitStatus triorbit_group_center_order(const struct TriorbitGroup *group, char **out);

/**
 * Decide whether the group has exactly three automorphism orbits.
 *
 * Table-format groups support only the oracle strategy. A `Capped`
 * status means the budget or a size cap was hit: `verdict.is3` is -1 and
 * the question remains open, which callers may treat as a soft failure.
 *
 * # Safety
 * `group` must be a live handle; `verdict` must be a valid pointer.
 */
enum TriorbitStatus triorbit_check3(const struct TriorbitGroup *group,
                                    enum TriorbitStrategy strategy,
                                    uint64_t budget,
                                    struct TriorbitVerdict *verdict);

/**
 * Census of dimension-`dim` prime-field subspaces of F_q: counts of
 * subfield-hyperplane content and transitive quotient action, plus
 * witness bases, as a JSON document identical for every `jobs` setting.
 *
 * # Safety
 * `out` must be a valid pointer to a `char *`. The result must be freed
 * with `triorbit_string_free`.
 */
enum TriorbitStatus triorbit_scan(uint64_t q, uint32_t dim, uint32_t jobs, char **out);

/**
 * Release a string returned by this library. Null is a no-op.
 *
 * # Safety
 * `s` must be a pointer previously returned through a `char **`
 * out-parameter of this library, and must not be used afterwards.
 */
void triorbit_string_free(char *s);

/**
 * Release a group handle. Null is a no-op.
 *
 * # Safety
 * `group` must be a handle previously returned by this library, and must
 * not be used afterwards.
 */
void triorbit_group_free(struct TriorbitGroup *group);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRIORBIT_H */
