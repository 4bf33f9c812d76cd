// cli.hpp -- batch front end chaining the pipeline stages.

#pragma once

namespace srbath::cli {

// Dispatches argv to one of {autocorr, fft, recover, model, kernel,
// propagate, synth, compare}. Returns 0 on success, 2 on usage errors,
// 1 on runtime errors. Partial outputs are removed on failure.
int run(int argc, const char* const* argv);

}  // namespace srbath::cli
