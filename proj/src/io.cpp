// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

#include "dqlm/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

#include <openssl/evp.h>

#include "dqlm/error.hpp"

namespace dqlm {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) x = 0.0;  // drop the sign of negative zero
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
    return {buf.data(), res.ptr};
}

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) body_ += (i ? "," : "") + header[i];
    body_ += '\n';
}

void CsvTable::add_row(const std::vector<double>& values) {
    if (values.size() != columns_) throw DimensionMismatch("csv row has the wrong number of columns");
    for (std::size_t i = 0; i < values.size(); ++i) body_ += (i ? "," : "") + format_double(values[i]);
    body_ += '\n';
    ++rows_;
}

void CsvTable::add_row(const std::string& label, const std::vector<double>& values) {
    if (values.size() + 1 != columns_) throw DimensionMismatch("csv row has the wrong number of columns");
    body_ += label;
    for (double v : values) body_ += "," + format_double(v);
    body_ += '\n';
    ++rows_;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw Error("cannot open " + tmp.string() + " for writing");
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!os) throw Error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string git_blob_sha1(std::string_view content) {
    const std::string header = "blob " + std::to_string(content.size()) + '\0';
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx) throw Error("EVP_MD_CTX_new failed");
    const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                    EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                    EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                    EVP_DigestFinal_ex(ctx, md.data(), &len) == 1;
    EVP_MD_CTX_free(ctx);
    if (!ok) throw Error("SHA-1 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xF];
    }
    return out;
}

}  // namespace dqlm
