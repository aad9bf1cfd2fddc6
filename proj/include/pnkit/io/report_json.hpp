#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "pnkit/fit/pipeline.hpp"
#include "pnkit/io/atomic_write.hpp"

namespace pnkit {

namespace detail {

inline void require_finite(double v, const std::string& key) {
    if (!std::isfinite(v)) throw error("fit report: non-finite value for '" + key + "' (NaN forbidden)");
}

inline double json_num(const nlohmann::ordered_json& j, const std::string& key) {
    if (!j.contains(key)) throw error("fit report: missing key '" + key + "'");
    if (!j.at(key).is_number()) throw error("fit report: key '" + key + "' is not a number");
    return j.at(key).get<double>();
}

}  // namespace detail

inline nlohmann::ordered_json fit_report_to_json(const FitReport& rep) {
    using detail::require_finite;
    nlohmann::ordered_json slopes;
    for (std::size_t i = 0; i < 4; ++i) {
        require_finite(rep.slopes_db_per_decade[i], SegmentSpec::name(i));
        slopes[SegmentSpec::name(i)] = rep.slopes_db_per_decade[i];
    }
    nlohmann::ordered_json j;
    j["slopes_db_per_decade"] = slopes;
    const std::pair<const char*, double> fields[] = {
        {"f_3db_ref_hz", rep.f_3db_ref_hz},    {"f_3db_vco_hz", rep.f_3db_vco_hz},
        {"c_ref_s", rep.c_ref_s},              {"c_vco_s", rep.c_vco_s},
        {"level_tr_dbc_hz", rep.level_tr_dbc}, {"level_nf_dbc_hz", rep.level_nf_dbc},
        {"f_tr_hz", rep.f_tr_hz},              {"f_pll_hz", rep.f_pll_hz},
        {"f_nf_hz", rep.f_nf_hz},
    };
    for (const auto& [key, value] : fields) {
        require_finite(value, key);
        j[key] = value;
    }
    j["k_ref"] = rep.k_ref;
    j["k_vco"] = rep.k_vco;
    require_finite(rep.residual_rms_db, "residual_rms_db");
    j["residual_rms_db"] = rep.residual_rms_db;
    return j;
}

inline void write_fit_report_json(const FitReport& rep, const std::filesystem::path& path) {
    atomic_write_file(path, fit_report_to_json(rep).dump(2) + "\n");
}

/// Read back the fixed key set; unknown layout or missing keys error with the
/// key name. Segment intervals are not serialized, only their slopes.
inline FitReport read_fit_report_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open: " + path.string());
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw error(path.string() + ": invalid JSON: " + e.what());
    }
    FitReport rep;
    if (!j.contains("slopes_db_per_decade"))
        throw error("fit report: missing key 'slopes_db_per_decade'");
    const auto& slopes = j.at("slopes_db_per_decade");
    for (std::size_t i = 0; i < 4; ++i)
        rep.slopes_db_per_decade[i] = detail::json_num(slopes, SegmentSpec::name(i));
    rep.f_3db_ref_hz = detail::json_num(j, "f_3db_ref_hz");
    rep.f_3db_vco_hz = detail::json_num(j, "f_3db_vco_hz");
    rep.c_ref_s = detail::json_num(j, "c_ref_s");
    rep.c_vco_s = detail::json_num(j, "c_vco_s");
    rep.level_tr_dbc = detail::json_num(j, "level_tr_dbc_hz");
    rep.level_nf_dbc = detail::json_num(j, "level_nf_dbc_hz");
    rep.f_tr_hz = detail::json_num(j, "f_tr_hz");
    rep.f_pll_hz = detail::json_num(j, "f_pll_hz");
    rep.f_nf_hz = detail::json_num(j, "f_nf_hz");
    rep.k_ref = static_cast<int>(detail::json_num(j, "k_ref"));
    rep.k_vco = static_cast<int>(detail::json_num(j, "k_vco"));
    rep.residual_rms_db = detail::json_num(j, "residual_rms_db");
    return rep;
}

}  // namespace pnkit
