#ifndef MHD_FFI_H
#define MHD_FFI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Euler integration mode.
 */
typedef enum MhdMode {
  MHD_MODE_LOW = 0,
  MHD_MODE_HIGH_LIMITED = 1,
} MhdMode;

/*
 Result codes.
 */
typedef enum MhdStatus {
  MHD_STATUS_OK = 0,
  MHD_STATUS_NULL_POINTER = 1,
  MHD_STATUS_INVALID_ARGUMENT = 2,
  MHD_STATUS_INADMISSIBLE = 3,
  MHD_STATUS_NOT_CONVERGED = 4,
  MHD_STATUS_IO = 5,
  MHD_STATUS_INTERNAL = 6,
} MhdStatus;

/*
 Opaque simulation handle.
 */
typedef struct MhdSimulation MhdSimulation;

/*
 Global quantities of the current state.
 */
typedef struct MhdDiagnostics {
  double time;
  double total_mech_energy;
  double magnetic_energy;
  double total_energy;
  double math_entropy;
  double min_density;
  double min_pressure;
  double min_internal_energy;
  double weak_div_fingerprint_drift;
} MhdDiagnostics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Creates the named built-in problem (`vortex`, `briowu`, `blast`, `jet`) at
 refinement `level`. A non-positive `cfl` selects the problem default.

 # Safety
 `problem` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MhdStatus mhd_simulation_new(const char *problem,
                                  uint32_t level,
                                  enum MhdMode mode,
                                  double cfl,
                                  struct MhdSimulation **out);

/*
 Releases a handle. Null is ignored.

 # Safety
 `sim` must come from [`mhd_simulation_new`] and not be used afterwards.
 */
void mhd_simulation_free(struct MhdSimulation *sim);

/*
 Advances by one split step. Writes the time advanced to `dt` if non-null.

 # Safety
 `sim` must be a live handle; `dt` null or valid.
 */
enum MhdStatus mhd_simulation_step(struct MhdSimulation *sim, double *dt);

/*
 Advances to `t_final`. Writes the number of steps to `steps` if non-null.

 # Safety
 `sim` must be a live handle; `steps` null or valid.
 */
enum MhdStatus mhd_simulation_run_to(struct MhdSimulation *sim, double t_final, uint64_t *steps);

/*
 Current time.

 # Safety
 `sim` must be a live handle and `time` valid.
 */
enum MhdStatus mhd_simulation_time(const struct MhdSimulation *sim, double *time);

/*
 Number of hydrodynamic nodes.

 # Safety
 `sim` must be a live handle and `n` valid.
 */
enum MhdStatus mhd_simulation_num_nodes(const struct MhdSimulation *sim, uintptr_t *n);

/*
 Copies the conserved states `[ρ, m_x, m_y, E]` node by node into `buf`,
 which must hold `4 * num_nodes` values; `len` is its length.

 # Safety
 `sim` must be a live handle and `buf` valid for `len` writes.
 */
enum MhdStatus mhd_simulation_copy_hydro(const struct MhdSimulation *sim,
                                         double *buf,
                                         uintptr_t len);

/*
 Diagnostics of the current state.

 # Safety
 `sim` must be a live handle and `out` valid.
 */
enum MhdStatus mhd_simulation_diagnostics(const struct MhdSimulation *sim,
                                          struct MhdDiagnostics *out);

/*
 Writes the current state as a legacy VTK file.

 # Safety
 `sim` must be a live handle and `path` a NUL-terminated string.
 */
enum MhdStatus mhd_simulation_write_vtk(const struct MhdSimulation *sim, const char *path);

/*
 Message of the last failure on this thread, or null. The pointer stays
 valid until the next failing call on the same thread.
 */
const char *mhd_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MHD_FFI_H */
