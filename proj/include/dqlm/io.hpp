// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace dqlm {

/// Shortest-round-trip-safe decimal form with 17 significant digits, '.' separator.
std::string format_double(double x);

/// Column-named CSV table rendered in memory and written atomically.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);
    void add_row(const std::vector<double>& values);
    /// Row with a leading text cell (e.g. a layer name) followed by numbers.
    void add_row(const std::string& label, const std::vector<double>& values);
    std::size_t rows() const noexcept { return rows_; }
    std::string str() const { return body_; }

private:
    std::size_t columns_;
    std::size_t rows_ = 0;
    std::string body_;
};

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Git blob identifier: SHA-1 over "blob <size>\0" followed by the content.
std::string git_blob_sha1(std::string_view content);

}  // namespace dqlm
