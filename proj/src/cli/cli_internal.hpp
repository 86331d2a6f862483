#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bosecorr/cli.hpp"

namespace bosecorr::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Strided static partition: row i always goes to thread i % threads, results are written by index.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

/// Program, command, derived scales and the fully resolved configuration.
std::vector<std::pair<std::string, std::string>> run_metadata(const RunConfig& cfg, const std::string& command,
                                                              const std::string& mode);

}  // namespace bosecorr::cli
