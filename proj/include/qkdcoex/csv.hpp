#pragma once

#include <string>
#include <vector>

#include "qkdcoex/scenario.hpp"
#include "qkdcoex/simulate.hpp"

namespace qkdcoex {

inline constexpr const char* kCsvHeader =
    "length_km,p_wdm_dbm,n_channels,skr_bps,qber,ce,forward_raman_mw,loss_q_db,loss_c_db,flags";

// Locale-independent, 6 significant digits per numeric column.
std::string format_csv(const std::vector<CoexistenceResult>& results);
void emit_csv(const std::vector<CoexistenceResult>& results, const std::string& path);

std::string format_timeseries_csv(const std::vector<TimeseriesSample>& samples);
void emit_timeseries_csv(const std::vector<TimeseriesSample>& samples, const std::string& path);

// Minimal reader for the result CSV (round-trip checks, tooling).
struct CsvRow {
    double length_km;
    double p_wdm_dbm;
    int n_channels;
    double skr_bps;
    double qber;
    double ce;
    double forward_raman_mw;
    double loss_q_db;
    double loss_c_db;
    std::string flags;
};

std::vector<CsvRow> parse_result_csv(const std::string& text);

}  // namespace qkdcoex
