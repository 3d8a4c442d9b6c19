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

#ifndef AUXSEL_IO_HPP
#define AUXSEL_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "auxsel/sample_matrix.hpp"

namespace auxsel {

/// Throws IoError when the file cannot be read.
std::string read_text_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Header row of labels, then one row per sample; values use 17 significant digits.
std::string format_csv(const SampleMatrix& m);
SampleMatrix parse_csv(std::string_view text);
SampleMatrix load_csv(const std::filesystem::path& path);

/// "%.17g" rendering, round-trippable.
std::string format_double(double v);

}  // namespace auxsel

#endif  // AUXSEL_IO_HPP
