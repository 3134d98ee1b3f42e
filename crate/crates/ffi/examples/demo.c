/* Minimal consumer of the phaseperturb C ABI.
 *
 * Build (from the workspace root):
 *   cargo build -p phaseperturb-ffi --release
 *   cc crates/ffi/examples/demo.c -Icrates/ffi/include \
 *      target/release/libphaseperturb_ffi.a -lm -lpthread -ldl -o demo
 */
#include "phaseperturb.h"
#include <math.h>
#include <stdio.h>
#include <string.h>

#define N 16000

int main(void) {
    printf("phaseperturb %s\n", pp_version());

    PpEngine *engine = NULL;
    if (pp_engine_new("phase_perturbation", &engine) != PP_STATUS_OK) {
        fprintf(stderr, "engine: %s\n", pp_last_error_message());
        return 1;
    }

    static double input[N], output[N], replay[N];
    for (int i = 0; i < N; i++) {
        input[i] = 0.4 * sin(2.0 * M_PI * 220.0 * i / 16000.0);
    }

    if (pp_engine_augment_buffer(engine, input, N, 16000, 42, output) != PP_STATUS_OK) {
        fprintf(stderr, "augment: %s\n", pp_last_error_message());
        pp_engine_free(engine);
        return 1;
    }
    pp_engine_augment_buffer(engine, input, N, 16000, 42, replay);
    printf("same seed reproduces output: %s\n",
           memcmp(output, replay, sizeof output) == 0 ? "yes" : "NO");

    double peak = 0.0;
    for (int i = 0; i < N; i++) {
        double d = fabs(output[i] - input[i]);
        if (d > peak) peak = d;
    }
    printf("peak deviation from input: %.3f\n", peak);

    pp_engine_free(engine);
    return 0;
}
