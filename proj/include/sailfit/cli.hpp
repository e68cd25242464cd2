#pragma once

namespace sailfit {

// Entry point behind tools/main.cpp, callable in-process by the tests.
// Subcommands: clean, synth, fit, compare, report.
// Exit codes: 0 success, 1 I/O, 2 empty/degenerate data, 64 usage,
// 70 numerical failure.
int run_cli(int argc, const char* const* argv);

} // namespace sailfit
