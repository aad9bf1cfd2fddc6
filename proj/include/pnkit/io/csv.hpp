#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>

#include "pnkit/io/atomic_write.hpp"
#include "pnkit/spectral/trace.hpp"
#include "pnkit/timegen/series.hpp"

namespace pnkit {

inline constexpr const char* kPsdCsvHeader = "offset_hz,psd_dbc_hz";
inline constexpr const char* kAlphaCsvHeader = "t_s,alpha_s";

namespace detail {

// shortest round-trip decimal form
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double_field(std::string_view field, const std::string& context) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last)
        throw error(context + ": malformed number '" + std::string(field) + "'");
    return v;
}

inline void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace detail

/// Parse a PSD trace from CSV: header exactly `offset_hz,psd_dbc_hz`, then
/// rows of two decimal numbers, '.' decimal separator, LF or CRLF endings,
/// frequencies strictly increasing. Errors carry the 1-based line number.
inline PsdTrace parse_psd_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw error(path.string() + ":1: empty file");
    detail::strip_cr(line);
    if (line != kPsdCsvHeader)
        throw error(path.string() + ":1: expected header '" + kPsdCsvHeader + "', got '" + line + "'");

    PsdTrace trace;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        detail::strip_cr(line);
        if (line.empty() && in.eof()) break;
        const std::string ctx = path.string() + ":" + std::to_string(lineno);
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw error(ctx + ": expected two comma-separated fields");
        const double f = detail::parse_double_field(std::string_view(line).substr(0, comma), ctx);
        const double l = detail::parse_double_field(std::string_view(line).substr(comma + 1), ctx);
        if (!trace.freqs.empty() && f <= trace.freqs.back())
            throw error(ctx + ": offset frequencies must be strictly increasing");
        if (!(f > 0.0)) throw error(ctx + ": offset frequency must be > 0");
        trace.freqs.push_back(f);
        trace.levels.push_back(l);
    }
    if (trace.freqs.empty()) throw error(path.string() + ": no data rows");
    validate(trace);
    return trace;
}

inline void write_psd_csv(const PsdTrace& trace, const std::filesystem::path& path) {
    validate(trace);
    std::string out(kPsdCsvHeader);
    out.push_back('\n');
    for (std::size_t i = 0; i < trace.size(); ++i) {
        out += detail::format_double(trace.freqs[i]);
        out.push_back(',');
        out += detail::format_double(trace.levels[i]);
        out.push_back('\n');
    }
    atomic_write_file(path, out);
}

/// Time-shift series as CSV `t_s,alpha_s`, for inspection-sized runs.
inline void write_alpha_csv(const TimeShiftSeries& s, const std::filesystem::path& path) {
    validate(s);
    std::string out(kAlphaCsvHeader);
    out.push_back('\n');
    for (std::size_t i = 0; i < s.samples.size(); ++i) {
        out += detail::format_double(static_cast<double>(i) * s.dt);
        out.push_back(',');
        out += detail::format_double(s.samples[i]);
        out.push_back('\n');
    }
    atomic_write_file(path, out);
}

}  // namespace pnkit
