// Minimal taco_tensor_t for compiling generated kernels in tests.
#ifndef TACO_RUNTIME_H
#define TACO_RUNTIME_H

#include <stdint.h>
#include <stdlib.h>
#include <string.h>

typedef enum { taco_mode_dense, taco_mode_sparse } taco_mode_t;

typedef struct {
  int32_t order;
  int32_t *dimensions;
  int32_t csize;
  int32_t *mode_ordering;
  taco_mode_t *mode_types;
  uint8_t ***indices;
  uint8_t *vals;
  int32_t vals_size;
} taco_tensor_t;

static inline taco_tensor_t *taco_fixture_dense(int32_t order, const int32_t *dims, const double *vals) {
  taco_tensor_t *t = (taco_tensor_t *)calloc(1, sizeof(taco_tensor_t));
  int32_t n = 1;
  t->order = order;
  t->dimensions = (int32_t *)calloc(order > 0 ? order : 1, sizeof(int32_t));
  t->mode_types = (taco_mode_t *)calloc(order > 0 ? order : 1, sizeof(taco_mode_t));
  t->indices = (uint8_t ***)calloc(order > 0 ? order : 1, sizeof(uint8_t **));
  for (int32_t m = 0; m < order; m++) {
    t->dimensions[m] = dims[m];
    t->mode_types[m] = taco_mode_dense;
    n *= dims[m];
  }
  t->csize = sizeof(double);
  t->vals_size = n;
  if (vals) {
    t->vals = (uint8_t *)malloc(n * sizeof(double));
    memcpy(t->vals, vals, n * sizeof(double));
  }
  return t;
}

static inline void taco_fixture_free(taco_tensor_t *t) {
  if (!t) return;
  for (int32_t m = 0; m < t->order; m++) {
    if (t->indices[m]) {
      free(t->indices[m][0]);
      free(t->indices[m][1]);
      free(t->indices[m]);
    }
  }
  free(t->indices);
  free(t->mode_types);
  free(t->dimensions);
  free(t->vals);
  free(t);
}

#endif
