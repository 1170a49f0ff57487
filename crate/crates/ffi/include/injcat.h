#ifndef INJCAT_H
#define INJCAT_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Returned in place of an `IC` value when the map is not locally injective.
#define INJCAT_IC_INFINITE UINT64_MAX

typedef enum InjcatStatus {
  INJCAT_STATUS_OK = 0,
  INJCAT_STATUS_NULL_POINTER = 1,
  INJCAT_STATUS_INVALID_UTF8 = 2,
  INJCAT_STATUS_INVALID_INPUT = 3,
  INJCAT_STATUS_BUDGET_EXHAUSTED = 4,
  INJCAT_STATUS_PANIC = 5,
} InjcatStatus;

// The outcome of [`injcat_ic`].
typedef struct InjcatIcResult InjcatIcResult;

// A continuous map between finite spaces.
typedef struct InjcatMap InjcatMap;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. The pointer is
// valid until the next call into the library from this thread.
const char *injcat_last_error(void);

// Library version as a static string.
const char *injcat_version(void);

// Parses a map `{ "domain", "codomain", "assignment" }`. Spaces given as file
// names are resolved against the working directory.
//
// # Safety
// `json` must be a NUL-terminated string and `out_map` a valid pointer.
enum InjcatStatus injcat_map_from_json(const char *json, struct InjcatMap **out_map);

// Reads a map file; spaces given as file names are resolved against the
// map file's directory.
//
// # Safety
// `path` must be a NUL-terminated string and `out_map` a valid pointer.
enum InjcatStatus injcat_map_from_file(const char *path, struct InjcatMap **out_map);

// # Safety
// `map` must come from this library and not be used afterwards. NULL is
// ignored.
void injcat_map_free(struct InjcatMap *map);

// # Safety
// `map` must be a live handle; `domain` and `codomain` valid pointers.
enum InjcatStatus injcat_map_sizes(const struct InjcatMap *map, size_t *domain, size_t *codomain);

// Exact `IC` with a search limit of `max_nodes` branch-and-bound nodes.
//
// # Safety
// `map` must be a live handle and `out_result` a valid pointer.
enum InjcatStatus injcat_ic(const struct InjcatMap *map,
                            uint64_t max_nodes,
                            struct InjcatIcResult **out_result);

// `IC` by exhaustive search, for domains of at most 20 points.
//
// # Safety
// `map` must be a live handle and `value` a valid pointer.
enum InjcatStatus injcat_ic_oracle(const struct InjcatMap *map, uint64_t *value);

// The `IC` value, or [`INJCAT_IC_INFINITE`].
//
// # Safety
// `result` must be a live handle and `value` a valid pointer.
enum InjcatStatus injcat_ic_value(const struct InjcatIcResult *result, uint64_t *value);

// Number of sets in the certificate; 0 when `IC` is infinite.
//
// # Safety
// `result` must be a live handle and `count` a valid pointer.
enum InjcatStatus injcat_ic_certificate_len(const struct InjcatIcResult *result, size_t *count);

// The report `{ic, certificate, lower_bounds, nodes, seed}` as JSON. Free the
// string with [`injcat_string_free`].
//
// # Safety
// `result` must be a live handle and `json` a valid pointer.
enum InjcatStatus injcat_ic_result_json(const struct InjcatIcResult *result,
                                        uint64_t seed,
                                        char **json);

// # Safety
// `result` must come from this library and not be used afterwards. NULL is
// ignored.
void injcat_ic_result_free(struct InjcatIcResult *result);

// # Safety
// `s` must be a string returned by this library. NULL is ignored.
void injcat_string_free(char *s);

// `IC` of a closed plane polygon `{ "vertices": [[x, y], ...] }` from its
// multiple points.
//
// # Safety
// `json` must be a NUL-terminated string and `value` a valid pointer.
enum InjcatStatus injcat_curve_ic(const char *json, uint64_t *value);

// `nil(Ker f*)` of a simplicial map `{ "domain", "codomain", "assignment" }`,
// and whether the hypotheses of the lower bound hold. `surjective` is the
// caller's assertion that the realization is onto.
//
// # Safety
// `json` must be a NUL-terminated string; `nil` and `valid` valid pointers.
enum InjcatStatus injcat_cohomology_nil(const char *json,
                                        bool surjective,
                                        size_t *nil,
                                        bool *valid);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* INJCAT_H */
