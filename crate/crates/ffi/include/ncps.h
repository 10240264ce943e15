#ifndef NCPS_H
#define NCPS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum {
  NCPS_STATUS_OK = 0,
  // A numerical domain or consistency failure.
  NCPS_STATUS_FAILED = 1,
  NCPS_STATUS_INVALID_PARAMETERS = 2,
  // Unsupported order, index out of range, or request outside the model.
  NCPS_STATUS_UNSUPPORTED = 3,
  NCPS_STATUS_NULL_POINTER = 4,
  NCPS_STATUS_PANIC = 5,
} NcpsStatus;

typedef enum {
  NCPS_ENTROPY_KIND_RENYI = 0,
  NCPS_ENTROPY_KIND_TSALLIS = 1,
  NCPS_ENTROPY_KIND_VON_NEUMANN = 2,
} NcpsEntropyKind;

typedef enum {
  NCPS_METHOD_CLOSED_FORM = 0,
  NCPS_METHOD_STAR_POWER_NUMERIC = 1,
} NcpsMethod;

// Opaque model handle.
typedef struct NcpsModel NcpsModel;

// Opaque handle to a Wigner eigenfunction W_ij.
typedef struct NcpsWigner NcpsWigner;

// Derived scalars of a model.
typedef struct {
  double eta;
  double delta;
  double c;
  double h_plus;
  double h_minus;
  double lambda;
  double u;
  double v;
  double theta;
} NcpsDerived;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null if none.
//
// The pointer stays valid until the next failing call on the same thread.
const char *ncps_last_error_message(void);

// Creates a model; release it with `ncps_model_free`.
NcpsStatus ncps_model_new(double hbar,
                          double mass,
                          double omega,
                          double mu,
                          double nu,
                          NcpsModel **out);

// Releases a model. Null is ignored.
//
// # Safety
// `model` must be null or a handle from `ncps_model_new` not yet freed.
void ncps_model_free(NcpsModel *model);

NcpsStatus ncps_model_derived(const NcpsModel *model, NcpsDerived *out);

// Writes true when μν lies close to the ħ² boundary.
NcpsStatus ncps_model_near_singular(const NcpsModel *model, bool *out);

// Energy E_ij in the units of the model.
NcpsStatus ncps_energy(const NcpsModel *model, uint32_t i, uint32_t j, double *out);

// Ground-state entanglement entropy in nats.
//
// `order` is ignored for the von Neumann kind; Rényi order 1 and Tsallis
// order 1 also give the von Neumann value.
NcpsStatus ncps_entropy(const NcpsModel *model,
                        NcpsEntropyKind kind,
                        uint32_t order,
                        NcpsMethod method,
                        double *out);

// Builds W_ij for the model; release it with `ncps_wigner_free`.
NcpsStatus ncps_wigner_new(const NcpsModel *model, uint32_t i, uint32_t j, NcpsWigner **out);

// Releases a Wigner handle. Null is ignored.
//
// # Safety
// `wigner` must be null or a handle from `ncps_wigner_new` not yet freed.
void ncps_wigner_free(NcpsWigner *wigner);

// Evaluates W_ij at (x1, x2, p1, p2).
NcpsStatus ncps_wigner_eval(const NcpsWigner *wigner,
                            double x1,
                            double x2,
                            double p1,
                            double p2,
                            double *out);

NcpsStatus ncps_wigner_energy(const NcpsWigner *wigner, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NCPS_H */
