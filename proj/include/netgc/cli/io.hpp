#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "netgc/errors.hpp"
#include "netgc/numerics.hpp"

namespace netgc::cli {

class IoError : public Error {
public:
    using Error::Error;
};

/// Channel sample file: one `re im` pair per line, whitespace separated;
/// blank lines and lines starting with '#' are ignored.
inline ComplexVector parse_channel(std::istream& in, const std::string& source = "<input>") {
    std::vector<Complex> samples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        double parts[2];
        int found = 0;
        while (pos != std::string::npos) {
            const std::size_t end = std::min(line.find_first_of(" \t\r", pos), line.size());
            const std::string_view token(line.data() + pos, end - pos);
            if (found == 2)
                throw ParseError(source + ":" + std::to_string(line_no) + ":" + std::to_string(pos + 1) +
                                     ": unexpected extra token '" + std::string(token) + "'",
                                 line_no, pos + 1);
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
            if (ec != std::errc() || ptr != token.data() + token.size())
                throw ParseError(source + ":" + std::to_string(line_no) + ":" + std::to_string(pos + 1) +
                                     ": invalid numeric token '" + std::string(token) + "'",
                                 line_no, pos + 1);
            if (!std::isfinite(value))
                throw ParseError(source + ":" + std::to_string(line_no) + ":" + std::to_string(pos + 1) +
                                     ": non-finite value '" + std::string(token) + "'",
                                 line_no, pos + 1);
            parts[found++] = value;
            pos = line.find_first_not_of(" \t\r", end);
        }
        if (found != 2)
            throw ParseError(source + ":" + std::to_string(line_no) + ": expected two numbers 're im'", line_no,
                             line.size() + 1);
        samples.emplace_back(parts[0], parts[1]);
    }
    if (samples.empty()) throw ParseError(source + ": no samples", line_no, 0);
    return ComplexVector(std::move(samples));
}

inline ComplexVector read_channel_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_channel(in, path.string());
}

/// Fixed 12-significant-digit scientific notation, e.g. 1.00000000000e-01.
inline std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.11e", x);
    return buf;
}

/// Shortest round-trip representation, for labels.
inline std::string format_short(double x) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

/// Fails with IoError unless `dir` exists (creating it if needed) and accepts new files.
inline void ensure_writable_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw IoError("cannot create output directory " + dir.string());
    const auto probe = dir / ".netgc-write-probe";
    {
        std::ofstream out(probe);
        if (!out) throw IoError("output directory is not writable: " + dir.string());
    }
    std::filesystem::remove(probe, ec);
}

/// Writes every file to a temporary name first and renames only after all
/// writes succeeded; on failure no declared file is left behind.
inline void write_files_atomically(const std::filesystem::path& dir,
                                   const std::vector<std::pair<std::string, std::string>>& files) {
    ensure_writable_directory(dir);
    std::vector<std::filesystem::path> temps;
    auto cleanup = [&] {
        std::error_code ec;
        for (const auto& t : temps) std::filesystem::remove(t, ec);
    };
    for (const auto& [name, content] : files) {
        const auto tmp = dir / (name + ".tmp");
        temps.push_back(tmp);
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        out.close();
        if (!out) {
            cleanup();
            throw IoError("failed writing " + tmp.string());
        }
    }
    std::vector<std::filesystem::path> renamed;
    for (std::size_t k = 0; k < files.size(); ++k) {
        std::error_code ec;
        const auto target = dir / files[k].first;
        std::filesystem::rename(temps[k], target, ec);
        if (ec) {
            for (const auto& r : renamed) std::filesystem::remove(r, ec);
            cleanup();
            throw IoError("failed renaming into " + target.string());
        }
        renamed.push_back(target);
    }
}

}  // namespace netgc::cli
