#pragma once
// CSV and JSON serialization. Reals are written with 17 significant digits so
// that reading back reproduces them bit for bit; non-finite values are spelled
// inf, -inf and nan.
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "subspectra/spectra.hpp"
#include "subspectra/timedomain.hpp"
#include "subspectra/turing.hpp"

namespace subspectra {

std::string format_real(double x);
double parse_real(const std::string& text);

// A CSV file with '#'-prefixed "key: value" metadata lines before the header.
struct CsvTable {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 when absent
    const std::string* meta_value(const std::string& key) const;
    double real(std::size_t row, const std::string& col) const;
};

void write_csv(std::ostream& os, const CsvTable& t);
CsvTable read_csv(std::istream& is);

// Spectrum scans.
CsvTable scan_to_csv(const SpectrumScan& s);
SpectrumScan scan_from_csv(const CsvTable& t);
SpectrumClass parse_spectrum_class(const std::string& s);
PointSource parse_point_source(const std::string& s);

// JSON helpers: finite reals become numbers, others the strings above.
nlohmann::json json_real(double x);
double real_from_json(const nlohmann::json& j);
nlohmann::json json_complex(cplx z);
cplx complex_from_json(const nlohmann::json& j);

nlohmann::json thresholds_to_json(const ThresholdSetA& t);
nlohmann::json thresholds_to_json(const ThresholdSetB& t, double d_c);
nlohmann::json decay_to_json(const DecayEstimate& e);
nlohmann::json convergence_to_json(const std::vector<ConvergenceEntry>& entries);

CsvTable series_to_csv(const GLSeries& s);

}  // namespace subspectra
