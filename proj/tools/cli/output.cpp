// SPDX-License-Identifier: Apache-2.0
#include "output.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ltdr/error.hpp"

namespace ltdr::cli {

std::string format_number(double x) {
    if (!std::isfinite(x)) return "nan";
    if (x == 0.0) return "0";  // folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

nlohmann::json json_number(double x) {
    if (!std::isfinite(x)) return nullptr;
    return std::strtod(format_number(x).c_str(), nullptr);
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
    std::string out;
    char h[3];
    for (unsigned i = 0; i < len; ++i) {
        std::snprintf(h, sizeof h, "%02x", md[i]);
        out += h;
    }
    return out;
}

std::string write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << bytes;
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
    return sha256_hex(bytes);
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string csv_text(const std::string& label_name, const std::vector<std::string>& labels,
                     const std::vector<CsvColumn>& columns) {
    std::string out;
    bool first = true;
    if (!labels.empty()) {
        out += label_name;
        first = false;
    }
    for (const auto& c : columns) {
        if (!first) out += ',';
        out += c.name;
        first = false;
    }
    out += '\n';
    const std::size_t rows = labels.empty() ? (columns.empty() ? 0 : columns.front().values.size()) : labels.size();
    for (std::size_t r = 0; r < rows; ++r) {
        first = true;
        if (!labels.empty()) {
            out += labels[r];
            first = false;
        }
        for (const auto& c : columns) {
            if (!first) out += ',';
            out += format_number(c.values.at(r));
            first = false;
        }
        out += '\n';
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace ltdr::cli
