// Copyright 2026 The weakval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>

#include "weakval/errors.hpp"

namespace weakval {

/// Deterministic CSV assembly: fixed %.12g float formatting, LF line
/// endings, header row first, and a hard refusal to emit non-finite
/// numbers (failed rows must use empty fields plus a status column
/// instead). The whole table is built in memory and written in one shot
/// so a failing sweep never leaves a silently truncated file behind.
class CsvWriter {
  public:
    CsvWriter& field(std::string_view text) {
        sep();
        out_.append(text);
        return *this;
    }

    // String literals must not decay onto the bool overload.
    CsvWriter& field(const char* text) { return field(std::string_view(text)); }

    CsvWriter& field(double v) {
        if (!std::isfinite(v)) {
            throw NumericalContractViolation("csv: refusing to write a non-finite value");
        }
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return field(std::string_view(buf));
    }

    CsvWriter& field(bool v) { return field(std::string_view(v ? "1" : "0")); }

    CsvWriter& empty_field() {
        sep();
        return *this;
    }

    CsvWriter& end_row() {
        out_.push_back('\n');
        row_open_ = false;
        return *this;
    }

    const std::string& content() const { return out_; }

    void write_file(const std::string& path) const {
        std::ofstream os(path, std::ios::binary);
        if (!os) {
            throw ConfigError("csv: cannot open output file: " + path);
        }
        os.write(out_.data(), static_cast<std::streamsize>(out_.size()));
        os.flush();
        if (!os) {
            throw ConfigError("csv: failed to write output file: " + path);
        }
    }

  private:
    void sep() {
        if (row_open_) {
            out_.push_back(',');
        }
        row_open_ = true;
    }

    std::string out_;
    bool row_open_ = false;
};

}  // namespace weakval
