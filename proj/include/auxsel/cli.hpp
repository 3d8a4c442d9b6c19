/*
 * Copyright 2026 The auxsel Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef AUXSEL_CLI_HPP
#define AUXSEL_CLI_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "auxsel/graph.hpp"
#include "auxsel/mixing.hpp"

namespace auxsel {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsageError = 2;

/// Runs one subcommand. Data goes to `out` or to files, diagnostics to `err`.
/// Returns 0 on success, 1 on a domain error, 2 on usage or I/O errors.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct PipelineOptions {
    std::uint64_t seed = 0;
    std::size_t samples = 100000;
    MixingKind mixing = MixingKind::AdditiveCouplingStack;
    std::size_t layers = 3;
};

/// File name -> contents, everything the pipeline produces for one run.
struct PipelineBundle {
    std::map<std::string, std::string> files;
};

/// select -> simulate -> mix -> exact inverse -> rank check -> evaluate.
/// Pure: nothing touches the filesystem.
PipelineBundle pipeline_run(const Dag& dag, const PipelineOptions& options);

/// Creates `dir` if needed and writes each file atomically.
void write_bundle(const PipelineBundle& bundle, const std::filesystem::path& dir);

}  // namespace auxsel

#endif  // AUXSEL_CLI_HPP
