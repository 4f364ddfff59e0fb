#pragma once

#include "mif/basis.hpp"
#include "mif/toeplitz.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace mif {

using json = nlohmann::ordered_json;

/// Shortest round-trip decimal form; fixed so reruns write identical bytes.
std::string format_double(double x);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    CsvWriter& operator<<(double x);
    CsvWriter& operator<<(int x);
    CsvWriter& operator<<(const std::string& s);
    void end_row();

private:
    void separator();
    std::ofstream out_;
    std::size_t column_ = 0;
};

void write_nodes_csv(const std::filesystem::path& path, const SeparatedSequence& seq);
/// Columns (index, value[, nu]); indices are assumed consecutive.
SeparatedSequence read_nodes_csv(const std::filesystem::path& path, double default_nu = 1.0 / kPi);

void write_trace_csv(const std::filesystem::path& path, const CircleTrace& trace);
/// Writes `<stem>.csv` with (row, col, re, im) and `<stem>.json` with the window metadata.
void write_gram(const std::filesystem::path& stem, const GramMatrix& gram, const json& metadata);
void write_spectrum_csv(const std::filesystem::path& path, const SectionSpectrum& spectrum);
void write_riesz_csv(const std::filesystem::path& path, const BasisReport& report);

void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

json to_json(const SeparatedSequence& seq);
json to_json(const InnerFunctionSpec& spec);
json to_json(const BasisReport& r);
json to_json(const InvertibilityEvidence& e);
json to_json(const UnitaryCompactEvidence& e);
json to_json(const WindingResult& w);

InnerFunctionSpec inner_spec_from_json(const json& j);

}  // namespace mif
