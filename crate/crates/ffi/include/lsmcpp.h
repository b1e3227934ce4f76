#ifndef LSMCPP_H
#define LSMCPP_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum McppInit {
  MCPP_INIT_GREEDY = 0,
  MCPP_INIT_VORONOI = 1,
} McppInit;

typedef enum McppStatus {
  MCPP_STATUS_OK = 0,
  MCPP_STATUS_NULL_POINTER = 1,
  MCPP_STATUS_INVALID_UTF8 = 2,
  MCPP_STATUS_INVALID_INSTANCE = 3,
  MCPP_STATUS_INVALID_PARAMETER = 4,
  MCPP_STATUS_SOLVE_FAILED = 5,
  MCPP_STATUS_OUT_OF_RANGE = 6,
  MCPP_STATUS_BUFFER_TOO_SMALL = 7,
  MCPP_STATUS_PANIC = 8,
} McppStatus;

/**
 * Opaque parsed instance.
 */
typedef struct McppInstance McppInstance;

/**
 * Opaque solved plan: one closed walk per robot.
 */
typedef struct McppSolution McppSolution;

/**
 * Search settings; obtain defaults from [`mcpp_params_default`].
 */
typedef struct McppParams {
  enum McppInit init;
  size_t max_iters;
  size_t dedup_period;
  double gamma;
  /**
   * Temperature after the last iteration; the search starts at 1.
   */
  double final_temperature;
  uint64_t seed;
} McppParams;

/**
 * Subcell coordinate on the doubled-resolution grid.
 */
typedef struct McppCoord {
  size_t col;
  size_t row;
} McppCoord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *mcpp_last_error(void);

struct McppParams mcpp_params_default(void);

/**
 * Parses an instance from NUL-terminated JSON. Map files referenced by
 * path are resolved against the working directory.
 *
 * # Safety
 * `json` must be NULL or a valid NUL-terminated string; `out` must be NULL
 * or valid for writes.
 */
enum McppStatus mcpp_instance_from_json(const char *json, struct McppInstance **out);

/**
 * # Safety
 * `inst` must be NULL or a handle from [`mcpp_instance_from_json`] not yet freed.
 */
void mcpp_instance_free(struct McppInstance *inst);

/**
 * # Safety
 * `inst` must be a live instance handle; `out` valid for writes.
 */
enum McppStatus mcpp_instance_robot_count(const struct McppInstance *inst, size_t *out);

/**
 * Runs the initializer and the local search. `params` may be NULL to use
 * the instance's own settings on top of the defaults.
 *
 * # Safety
 * `inst` must be a live instance handle, `params` NULL or valid for
 * reads, `out` valid for writes.
 */
enum McppStatus mcpp_solve(const struct McppInstance *inst,
                           const struct McppParams *params,
                           struct McppSolution **out);

/**
 * # Safety
 * `sol` must be NULL or a handle from [`mcpp_solve`] not yet freed.
 */
void mcpp_solution_free(struct McppSolution *sol);

/**
 * # Safety
 * `sol` must be a live solution handle; `out` valid for writes.
 */
enum McppStatus mcpp_solution_makespan(const struct McppSolution *sol, double *out);

/**
 * # Safety
 * `sol` must be a live solution handle; `out` valid for writes.
 */
enum McppStatus mcpp_solution_robot_count(const struct McppSolution *sol, size_t *out);

/**
 * Cost of robot `robot`'s walk.
 *
 * # Safety
 * `sol` must be a live solution handle; `out` valid for writes.
 */
enum McppStatus mcpp_solution_path_cost(const struct McppSolution *sol, size_t robot, double *out);

/**
 * Number of subcells in robot `robot`'s walk; the closing step back to
 * the first subcell is implied.
 *
 * # Safety
 * `sol` must be a live solution handle; `out` valid for writes.
 */
enum McppStatus mcpp_solution_path_len(const struct McppSolution *sol, size_t robot, size_t *out);

/**
 * Copies robot `robot`'s walk into `buf` (capacity `cap`). `written`
 * receives the walk length, also when the buffer is too small.
 *
 * # Safety
 * `sol` must be a live solution handle, `buf` valid for `cap` writes and
 * `written` valid for writes.
 */
enum McppStatus mcpp_solution_path_copy(const struct McppSolution *sol,
                                        size_t robot,
                                        struct McppCoord *buf,
                                        size_t cap,
                                        size_t *written);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LSMCPP_H */
