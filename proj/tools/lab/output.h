// Copyright 2026 The selfcorr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SELFCORR_LAB_OUTPUT_H
#define SELFCORR_LAB_OUTPUT_H

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace selfcorr::lab {

using nlohmann::json;

std::string sha256_hex(std::string_view data);

/// Writes `content` to `path` via a temporary file in the same directory and a rename, so
/// readers never observe a partial file.
void write_file_atomic(const std::filesystem::path &path, std::string_view content);

struct OutputFile {
    std::string name;
    std::uint64_t bytes = 0;
    std::string sha256;
};

/// Output directory that records every file written through it.
class OutputDir {
   public:
    explicit OutputDir(std::filesystem::path dir);
    const std::filesystem::path &path() const { return dir_; }
    void write(const std::string &name, std::string_view content);
    void write_json(const std::string &name, const json &value);
    /// One compact JSON document per line.
    void write_jsonl(const std::string &name, const std::vector<json> &records);
    const std::vector<OutputFile> &files() const { return files_; }

   private:
    std::filesystem::path dir_;
    std::vector<OutputFile> files_;
};

/// Shortest round-trip decimal form of a double; "inf"/"nan" spelled out.
std::string fmt_double(double x);

/// Minimal CSV builder; values are written verbatim (callers avoid commas).
class CsvTable {
   public:
    explicit CsvTable(std::vector<std::string> header);
    CsvTable &row(std::vector<std::string> values);
    std::string str() const;

   private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

struct CurveSeries {
    std::string label;
    std::vector<double> times;
    std::vector<double> p_hat;
    std::vector<double> lo;
    std::vector<double> hi;
};

/// Success probability against log-scaled time with CI bands and the 2/3 threshold line.
std::string success_curves_svg(const std::string &title, const std::vector<CurveSeries> &series);

}  // namespace selfcorr::lab

#endif
