#pragma once

#include <filesystem>
#include <iosfwd>

namespace dexhand::cli {

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kUsageOrIo = 2 };

/// $DEXHAND_DATA_DIR if set, otherwise the data directory of the source tree.
std::filesystem::path default_data_dir();

/// Entry point for the `dexhand` binary: validate, analyze, compile, export, bench, serve.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dexhand::cli
