// Copyright 2026 The cvqpinn Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/**
 * @file io.hpp
 * @brief Atomic file output and the versioned CSV artifacts of a run.
 */

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cvqpinn/config.hpp"
#include "cvqpinn/errors.hpp"
#include "cvqpinn/optimize.hpp"

namespace cvqpinn {

inline constexpr const char *training_log_header = "# cvqpinn-training-log v1";
inline constexpr const char *solution_header = "# cvqpinn-solution v1";
inline constexpr const char *reference_header = "# cvqpinn-reference v1";

/// Write to `path.tmp`, flush, then rename over `path`.
inline void atomic_write(const std::filesystem::path &path, const std::string &content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

/// Training log. Wall-clock time is left out so identical runs give identical bytes.
inline std::string training_log_csv(const TrainingRecord &rec) {
    using detail::format_double;
    std::ostringstream os;
    os << training_log_header << "\n";
    os << "epoch,loss_pde,loss_bc,loss_ic,loss_trace,loss_consistency,loss_total,lr\n";
    for (const auto &e : rec.epochs) {
        os << e.epoch << ',' << format_double(e.loss.pde) << ',' << format_double(e.loss.bc) << ',' << format_double(e.loss.ic) << ','
           << format_double(e.loss.trace) << ',' << format_double(e.loss.consistency) << ',' << format_double(e.loss.total) << ','
           << format_double(e.lr) << '\n';
    }
    return os.str();
}

/// Rows of a CSV file, skipping `#` comments and the column header.
inline std::vector<std::vector<double>> read_csv_rows(const std::filesystem::path &path, const std::string &expected_header) {
    std::stringstream ss(read_file(path));
    std::string line;
    if (!std::getline(ss, line) || line != expected_header) throw ConfigError(path.string() + ": missing or unsupported version header");
    std::getline(ss, line); // column names
    std::vector<std::vector<double>> rows;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(detail::parse_double(path.string(), cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

struct SolutionRow {
    std::vector<double> point;
    double predicted = 0.0;
    double reference = 0.0;
};

inline std::string solution_csv(const std::vector<SolutionRow> &rows, bool two_dimensional) {
    using detail::format_double;
    std::ostringstream os;
    os << solution_header << "\n";
    os << (two_dimensional ? "x,t," : "x,") << "predicted,reference,error\n";
    for (const auto &r : rows) {
        for (double c : r.point) os << format_double(c) << ',';
        os << format_double(r.predicted) << ',' << format_double(r.reference) << ',' << format_double(r.predicted - r.reference) << '\n';
    }
    return os.str();
}

inline std::string reference_csv(const std::vector<std::vector<double>> &points, const std::vector<double> &values, bool two_dimensional) {
    using detail::format_double;
    std::ostringstream os;
    os << reference_header << "\n";
    os << (two_dimensional ? "x,t," : "x,") << "value\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (double c : points[i]) os << format_double(c) << ',';
        os << format_double(values[i]) << '\n';
    }
    return os.str();
}

} // namespace cvqpinn
