#include "qkdcoex/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace qkdcoex {

namespace {

// 6 significant digits, locale-independent.
std::string num(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
    return std::string(buf, res.ptr);
}

void write_file(const std::string& text, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("csv: cannot open for writing: " + path);
    out << text;
    if (!out) throw std::runtime_error("csv: write failed: " + path);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        fields.push_back(line.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return fields;
}

double to_double(const std::string& s) {
    return std::strtod(s.c_str(), nullptr);  // accepts "inf"/"-inf"
}

}  // namespace

std::string format_csv(const std::vector<CoexistenceResult>& results) {
    if (results.empty()) throw std::domain_error("format_csv: no results");
    std::string out = kCsvHeader;
    out += '\n';
    for (const CoexistenceResult& r : results) {
        out += num(r.length_km) + ',' + num(r.p_wdm.value) + ',' + std::to_string(r.n_channels) +
               ',' + num(r.skr_bps) + ',' + num(r.qber) + ',' + num(r.ce) + ',' +
               num(r.noise.forward_raman.value) + ',' + num(r.loss_quantum_db) + ',' +
               num(r.loss_classical_db) + ',' + r.flags.to_string() + '\n';
    }
    return out;
}

void emit_csv(const std::vector<CoexistenceResult>& results, const std::string& path) {
    write_file(format_csv(results), path);
}

std::string format_timeseries_csv(const std::vector<TimeseriesSample>& samples) {
    std::string out = "t_s,skr_bps,qber\n";
    for (const TimeseriesSample& s : samples)
        out += num(s.t_s) + ',' + num(s.skr_bps) + ',' + num(s.qber) + '\n';
    return out;
}

void emit_timeseries_csv(const std::vector<TimeseriesSample>& samples, const std::string& path) {
    write_file(format_timeseries_csv(samples), path);
}

std::vector<CsvRow> parse_result_csv(const std::string& text) {
    std::vector<CsvRow> rows;
    std::size_t start = 0;
    bool header = true;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        const std::string line = text.substr(start, end - start);
        start = end + 1;
        if (line.empty()) continue;
        if (header) {
            if (line != kCsvHeader) throw std::runtime_error("parse_result_csv: bad header");
            header = false;
            continue;
        }
        const std::vector<std::string> f = split(line, ',');
        if (f.size() != 10) throw std::runtime_error("parse_result_csv: bad row: " + line);
        rows.push_back({to_double(f[0]), to_double(f[1]), int(std::lround(to_double(f[2]))),
                        to_double(f[3]), to_double(f[4]), to_double(f[5]), to_double(f[6]),
                        to_double(f[7]), to_double(f[8]), f[9]});
    }
    return rows;
}

}  // namespace qkdcoex
