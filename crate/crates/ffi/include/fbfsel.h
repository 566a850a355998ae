#ifndef FBFSEL_H
#define FBFSEL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Uniform prior over models.
 */
#define FBF_PRIOR_UNIFORM 0

/*
 Beta-binomial(1, 1) prior over model size.
 */
#define FBF_PRIOR_SCOTT_BERGER 1

/*
 Result code of every call.
 */
typedef enum FbfStatus {
  FBF_STATUS_OK = 0,
  FBF_STATUS_NULL_POINTER = 1,
  FBF_STATUS_INVALID_ARGUMENT = 2,
  FBF_STATUS_NUMERICAL = 3,
  FBF_STATUS_IO = 4,
  FBF_STATUS_PANIC = 5,
} FbfStatus;

/*
 A regression dataset. Missing predictor cells are NaN.
 */
typedef struct FbfDataset FbfDataset;

/*
 Model log-FBFs, posterior probabilities and inclusion probabilities.
 */
typedef struct FbfSelection FbfSelection;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message describing the last failure on this thread, or an empty string.
 The pointer stays valid until the next call into this library on the
 same thread.
 */
const char *fbf_last_error_message(void);

/*
 Creates a dataset from `n` responses and an `n × p` row-major predictor
 matrix. NaN predictor cells are treated as missing.

 # Safety
 `y` must point to `n` doubles, `x` to `n * p` doubles and `out` to
 writable storage for one handle.
 */
enum FbfStatus fbf_dataset_new(const double *y,
                               const double *x,
                               size_t n,
                               size_t p,
                               struct FbfDataset **out);

/*
 Releases a dataset. Null is ignored.

 # Safety
 `ds` must be null or a handle from [`fbf_dataset_new`] not yet freed.
 */
void fbf_dataset_free(struct FbfDataset *ds);

/*
 Evaluates every model on a complete dataset. `fraction <= 0` selects the
 minimal training fraction.

 # Safety
 `ds` must be a live dataset handle and `out` writable storage for one
 handle.
 */
enum FbfStatus fbf_select(const struct FbfDataset *ds,
                          uint32_t prior,
                          double fraction,
                          struct FbfSelection **out);

/*
 Imputes the missing predictor cells `m` times and evaluates every model
 on the averaged densities.

 # Safety
 As for [`fbf_select`].
 */
enum FbfStatus fbf_impute_select(const struct FbfDataset *ds,
                                 uint32_t prior,
                                 double fraction,
                                 size_t m,
                                 size_t burn_in,
                                 size_t spacing,
                                 uint64_t seed,
                                 struct FbfSelection **out);

/*
 Releases a selection. Null is ignored.

 # Safety
 `sel` must be null or a handle from a select call not yet freed.
 */
void fbf_selection_free(struct FbfSelection *sel);

/*
 Number of predictors, or 0 for a null handle.

 # Safety
 `sel` must be null or a live selection handle.
 */
size_t fbf_selection_num_predictors(const struct FbfSelection *sel);

/*
 Number of models (`2^p`), or 0 for a null handle.

 # Safety
 `sel` must be null or a live selection handle.
 */
size_t fbf_selection_num_models(const struct FbfSelection *sel);

/*
 Copies the `p` inclusion probabilities into `out`.

 # Safety
 `out` must point to `len` writable doubles.
 */
enum FbfStatus fbf_selection_inclusion(const struct FbfSelection *sel, double *out, size_t len);

/*
 Copies `ln FBF(γ, full)` for every model into `out`, indexed by the
 model bitmask (bit `j` set when predictor `j` is included).

 # Safety
 `out` must point to `len` writable doubles.
 */
enum FbfStatus fbf_selection_log_fbf(const struct FbfSelection *sel, double *out, size_t len);

/*
 Copies the posterior model probabilities into `out`, indexed as for
 [`fbf_selection_log_fbf`].

 # Safety
 `out` must point to `len` writable doubles.
 */
enum FbfStatus fbf_selection_post_prob(const struct FbfSelection *sel, double *out, size_t len);

/*
 Minimal training fraction `(k + 1) / n` for a full model with `p`
 predictors. Writes it to `out`.

 # Safety
 `out` must point to one writable double.
 */
enum FbfStatus fbf_minimal_fraction(size_t n, size_t p, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FBFSEL_H */
