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

#ifndef AUXSEL_GRAPH_IO_HPP
#define AUXSEL_GRAPH_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "auxsel/graph.hpp"

namespace auxsel {

/// Parses `{"nodes":[{"id":0,"label":"z1","observed":false},...],"edges":[[0,1],...]}`.
/// Unknown keys and non-dense ids are ParseError; structural problems surface as
/// the build_dag errors.
Dag parse_graph_json(std::string_view text);
Dag load_graph(const std::filesystem::path& path);
std::string graph_to_json(const Dag& dag);

}  // namespace auxsel

#endif  // AUXSEL_GRAPH_IO_HPP
