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

#include "auxsel/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <system_error>

#include "auxsel/error.hpp"

namespace auxsel {

namespace fs = std::filesystem;

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw Error(ErrorCode::IoError, "failed reading '" + path.string() + "'");
    return buf.str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        throw Error(ErrorCode::IoError, "output directory '" + dir.string() + "' does not exist");
    }
    std::random_device rd;
    const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(rd()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "cannot create '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            out.close();
            fs::remove(tmp, ec);
            throw Error(ErrorCode::IoError, "failed writing '" + tmp.string() + "'");
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorCode::IoError, "cannot move output into '" + path.string() + "'");
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_csv(const SampleMatrix& m) {
    std::string out;
    for (std::size_t j = 0; j < m.labels.size(); ++j) {
        if (j) out += ',';
        out += m.labels[j];
    }
    out += '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out += ',';
            out += format_double(m.data(i, j));
        }
        out += '\n';
    }
    return out;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        fields.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    return s;
}

}  // namespace

SampleMatrix parse_csv(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = trim(text.substr(start, nl - start));
        if (!line.empty()) lines.push_back(line);
        start = nl + 1;
    }
    if (lines.empty()) throw Error(ErrorCode::ParseError, "CSV has no header row");

    SampleMatrix m;
    for (auto f : split_fields(lines[0])) m.labels.emplace_back(trim(f));
    const auto cols = static_cast<Eigen::Index>(m.labels.size());
    const auto rows = static_cast<Eigen::Index>(lines.size() - 1);
    m.data.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        auto fields = split_fields(lines[static_cast<std::size_t>(i) + 1]);
        if (static_cast<Eigen::Index>(fields.size()) != cols) {
            throw Error(ErrorCode::ParseError, "CSV row " + std::to_string(i + 1) + " has " +
                                                   std::to_string(fields.size()) + " fields, expected " +
                                                   std::to_string(cols));
        }
        for (Eigen::Index j = 0; j < cols; ++j) {
            auto f = trim(fields[static_cast<std::size_t>(j)]);
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v)) {
                throw Error(ErrorCode::ParseError, "bad CSV value '" + std::string(f) + "'");
            }
            m.data(i, j) = v;
        }
    }
    return m;
}

SampleMatrix load_csv(const fs::path& path) { return parse_csv(read_text_file(path)); }

}  // namespace auxsel
