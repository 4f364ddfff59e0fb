#include "mif/io.hpp"

#include <charconv>
#include <sstream>

namespace mif {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    out_.open(path, std::ios::binary);
    if (!out_) throw Error(ErrorKind::ExecutionError, "cannot open " + path.string());
    for (std::size_t j = 0; j < header.size(); ++j) out_ << (j ? "," : "") << header[j];
    out_ << '\n';
}

void CsvWriter::separator() {
    if (column_++ > 0) out_ << ',';
}

CsvWriter& CsvWriter::operator<<(double x) {
    separator();
    out_ << format_double(x);
    return *this;
}

CsvWriter& CsvWriter::operator<<(int x) {
    separator();
    out_ << x;
    return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& s) {
    separator();
    out_ << s;
    return *this;
}

void CsvWriter::end_row() {
    out_ << '\n';
    column_ = 0;
}

void write_nodes_csv(const std::filesystem::path& path, const SeparatedSequence& seq) {
    CsvWriter w(path, {"index", "value", "nu"});
    for (int p = 0; p < seq.size(); ++p) {
        w << seq.first_index + p << seq.lambdas[p] << seq.nus[p];
        w.end_row();
    }
}

SeparatedSequence read_nodes_csv(const std::filesystem::path& path, double default_nu) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ConfigError, "cannot read node file " + path.string());
    std::string line;
    std::vector<double> values, nus;
    int first = 0;
    bool have_first = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() < 2) throw Error(ErrorKind::ConfigError, "node row needs index and value: " + line);
        try {
            const int index = std::stoi(cells[0]);
            if (!have_first) {
                first = index;
                have_first = true;
            }
            values.push_back(std::stod(cells[1]));
            nus.push_back(cells.size() > 2 ? std::stod(cells[2]) : default_nu);
        } catch (const std::invalid_argument&) {
            if (values.empty()) continue;  // header row
            throw Error(ErrorKind::ConfigError, "malformed node row: " + line);
        }
    }
    return validate_sequence(Eigen::Map<VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())),
                             Eigen::Map<VectorXd>(nus.data(), static_cast<Eigen::Index>(nus.size())), first);
}

void write_trace_csv(const std::filesystem::path& path, const CircleTrace& trace) {
    CsvWriter w(path, {"index", "re", "im"});
    for (int m = 0; m < trace.size(); ++m) {
        w << m << trace.samples()[m].real() << trace.samples()[m].imag();
        w.end_row();
    }
}

void write_gram(const std::filesystem::path& stem, const GramMatrix& gram, const json& metadata) {
    std::filesystem::path csv = stem, side = stem;
    csv += ".csv";
    side += ".json";
    CsvWriter w(csv, {"row", "col", "re", "im"});
    for (int m = 0; m < gram.size(); ++m) {
        for (int n = 0; n < gram.size(); ++n) {
            w << gram.first_index + m << gram.first_index + n << gram.entries(m, n).real() << gram.entries(m, n).imag();
            w.end_row();
        }
    }
    json j = metadata;
    j["first_index"] = gram.first_index;
    j["last_index"] = gram.last_index();
    j["size"] = gram.size();
    if (gram.lambda_min) j["lambda_min"] = *gram.lambda_min;
    if (gram.lambda_max) j["lambda_max"] = *gram.lambda_max;
    write_json(side, j);
}

void write_spectrum_csv(const std::filesystem::path& path, const SectionSpectrum& spectrum) {
    CsvWriter w(path, {"N", "k", "sigma_k"});
    for (std::size_t j = 0; j < spectrum.sizes.size(); ++j) {
        const VectorXd& sv = spectrum.singular_values[j];
        for (Eigen::Index k = 0; k < sv.size(); ++k) {
            w << spectrum.sizes[j] << static_cast<int>(k) << sv[k];
            w.end_row();
        }
    }
}

void write_riesz_csv(const std::filesystem::path& path, const BasisReport& report) {
    CsvWriter w(path, {"N", "c", "C"});
    for (std::size_t j = 0; j < report.sizes.size(); ++j) {
        w << report.sizes[j] << report.lower[j] << report.upper[j];
        w.end_row();
    }
}

void write_json(const std::filesystem::path& path, const json& j) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::ExecutionError, "cannot open " + path.string());
    out << j.dump(2) << '\n';
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ConfigError, "cannot read " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ConfigError, path.string() + ": " + e.what());
    }
}

json to_json(const SeparatedSequence& seq) {
    return {{"first_index", seq.first_index},
            {"last_index", seq.last_index()},
            {"size", seq.size()},
            {"delta", seq.delta},
            {"discrepancy", seq.discrepancy},
            {"weight_mass", seq.weight_mass}};
}

json to_json(const InnerFunctionSpec& spec) {
    json zeros = json::array();
    for (const Complex z : spec.zeros) zeros.push_back({z.real(), z.imag()});
    return {{"exp_type", spec.exp_type}, {"zeros", zeros}};
}

InnerFunctionSpec inner_spec_from_json(const json& j) {
    InnerFunctionSpec s;
    s.exp_type = j.value("exp_type", 0.0);
    if (j.contains("zeros")) {
        for (const auto& z : j.at("zeros")) s.zeros.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
    }
    return s;
}

json to_json(const BasisReport& r) {
    json tails = json::array();
    for (const AobTail& t : r.aob_tails) tails.push_back({{"start", t.start}, {"c", t.lower}, {"C", t.upper}});
    return {{"sizes", r.sizes},
            {"riesz_lower", r.lower},
            {"riesz_upper", r.upper},
            {"nested_monotone", r.nested_monotone},
            {"min_margin_sq", r.min_margin_sq},
            {"riesz_floor", r.riesz_floor},
            {"riesz_verdict", r.riesz_verdict},
            {"aob_tails", tails},
            {"aob_threshold", r.aob_threshold},
            {"aob_verdict", r.aob_verdict},
            {"aob_verdict_note", "finite-window proxy for a limit statement"}};
}

json to_json(const WindingResult& w) {
    return {{"winding", w.winding}, {"residual", w.residual}, {"max_jump", w.max_jump}};
}

namespace {

json spectrum_summary(const SectionSpectrum& s) {
    return {{"sizes", s.sizes},          {"resolution", s.resolution}, {"sigma_min", s.sigma_min},
            {"sigma_max", s.sigma_max},  {"tau", s.tau},               {"outliers", s.outliers},
            {"cluster_fraction", s.cluster_fraction}, {"winding", to_json(s.winding)}};
}

json compactness(const CompactnessEvidence& c) {
    return {{"n", c.n},
            {"increment", c.increment},
            {"flag", to_string(c.flag)},
            {"decay_index", c.decay.decay_index},
            {"decay_exponent", c.decay.exponent},
            {"thresholds", {{"compact_below", kCompactIncrement}, {"not_compact_above", kNotCompactIncrement}}}};
}

}  // namespace

json to_json(const InvertibilityEvidence& e) {
    return {{"verdict", to_string(e.verdict)},
            {"tau_inv", e.tau_inv},
            {"min_sigma", e.min_sigma},
            {"last_change", e.last_change},
            {"fit_slope", e.fit_slope},
            {"fit_r2", e.fit_r2},
            {"spectrum", spectrum_summary(e.spectrum)}};
}

json to_json(const UnitaryCompactEvidence& e) {
    return {{"verdict", to_string(e.verdict)},
            {"winding", to_string(e.winding)},
            {"outliers", to_string(e.outliers)},
            {"outlier_ratios", e.outlier_ratios},
            {"outlier_growth_ratio", kOutlierGrowthRatio},
            {"hankel", to_string(e.hankel)},
            {"hankel_u", compactness(e.hankel_u)},
            {"hankel_conj", compactness(e.hankel_conj)},
            {"spectrum", spectrum_summary(e.spectrum)}};
}

}  // namespace mif
