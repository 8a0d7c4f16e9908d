#pragma once

namespace wavectl {

// Command-line entry point. Subcommands:
//
//   solve  --problem <file> [--out <dir>]   solve and write CSV/JSON artifacts
//   verify <dir>                            re-run diagnostics on a solve dir
//   frames --problem <file> [--out <dir>]   render curvature-flow SVG frames
//   info   --problem <file>                 summary + admissibility checks
//
// The default output directory is taken from $WAVECTL_OUT when --out is
// absent. Exit codes: 0 on success with every declared tolerance met, 2 when
// the problem data is rejected by an admissibility check (the rejection
// reason is recorded in manifest.json), 1 for I/O errors, malformed input,
// or diagnostics that exceed their tolerances.
int run_cli(int argc, const char* const* argv);

}  // namespace wavectl
