#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hphi::cli {

enum ExitCode : int { kOk = 0, kUnbounded = 1, kInputError = 2, kCrossCheckFailure = 3 };

/// Runs one hphi-embed invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker count: hardware concurrency capped by HPHI_EMBED_THREADS.
int worker_count();

}  // namespace hphi::cli
