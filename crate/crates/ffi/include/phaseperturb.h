/* C interface of the phaseperturb augmentation engine. */

#pragma once

/* Generated with cbindgen:0.29.4 */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes of every C entry point.
typedef enum PpStatus {
  PP_STATUS_OK = 0,
  // A required pointer argument was null.
  PP_STATUS_NULL_POINTER = 1,
  // A string argument was malformed (bad UTF-8, unknown policy name).
  PP_STATUS_INVALID_ARGUMENT = 2,
  // Input data violates a precondition (empty signal, zero sample rate).
  PP_STATUS_INVALID_INPUT = 3,
  // Valid data in a configuration or codec this build does not handle.
  PP_STATUS_UNSUPPORTED = 4,
  // Malformed file content.
  PP_STATUS_FORMAT_ERROR = 5,
  // Bad key or value in a config file.
  PP_STATUS_CONFIG_ERROR = 6,
  // No inputs to process.
  PP_STATUS_EMPTY_INPUT = 7,
  PP_STATUS_IO_ERROR = 8,
  // Internal failure (a panic was caught at the boundary).
  PP_STATUS_INTERNAL = 9,
} PpStatus;

// Opaque augmentation engine: one policy, ready to augment buffers.
typedef struct PpEngine PpEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent failure on this thread. Never null;
// valid until the next failing call on the same thread.
const char *pp_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *pp_version(void);

// Creates an engine running `policy_name` with default parameters.
//
// Policy names: `none`, `phaseaug_static`, `vtlp`, `phase_perturbation`,
// `phase_perturbation+vtlp`, `specaug`, `phase_perturbation+specaug`.
// On success `*out_engine` owns the engine; release it with
// [`pp_engine_free`].
//
// # Safety
// `policy_name` must be a NUL-terminated string and `out_engine` a valid
// destination pointer.
enum PpStatus pp_engine_new(const char *policy_name, struct PpEngine **out_engine);

// Creates an engine from a config file, then applies `policy_name` on top.
// A null `config_path` means default parameters.
//
// # Safety
// String arguments must be null or NUL-terminated; `out_engine` must be a
// valid destination pointer.
enum PpStatus pp_engine_with_config(const char *policy_name,
                                    const char *config_path,
                                    struct PpEngine **out_engine);

// Releases an engine. A null pointer is a no-op.
//
// # Safety
// `engine` must be null or a pointer returned by an engine constructor
// that has not been freed yet.
void pp_engine_free(struct PpEngine *engine);

// Copies-per-input configured on this engine; 0 if `engine` is null.
//
// # Safety
// `engine` must be null or a live engine pointer.
uint32_t pp_engine_copies_per_input(const struct PpEngine *engine);

// Augments `len` samples into `out_samples` (also `len` values).
//
// Samples are amplitudes, nominally in [-1, 1]. The output length always
// equals the input length, and the result is a pure function of
// (samples, policy, seed).
//
// # Safety
// `samples` must point to `len` readable doubles and `out_samples` to
// `len` writable doubles; the ranges must not overlap.
enum PpStatus pp_engine_augment_buffer(const struct PpEngine *engine,
                                       const double *samples,
                                       uintptr_t len,
                                       uint32_t sample_rate,
                                       uint64_t seed,
                                       double *out_samples);

// Reads a WAV file, augments it and writes the result, preserving the
// input's bit depth. On success `*out_clipped` (if non-null) receives the
// number of samples clipped while encoding.
//
// # Safety
// Path arguments must be NUL-terminated strings; `out_clipped` must be
// null or a valid destination pointer.
enum PpStatus pp_engine_augment_wav(const struct PpEngine *engine,
                                    const char *input_path,
                                    const char *output_path,
                                    uint64_t seed,
                                    uint64_t *out_clipped);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
