#pragma once

namespace cq {

// Command line driver; returns the process exit code (0 all checks pass,
// 1 a check failed, 2 the input or the request was rejected).
int run_cli(int argc, char** argv);

}  // namespace cq
