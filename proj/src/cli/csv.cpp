#include "csv.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "beamdecay/errors.hpp"

namespace beamdecay::cli {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", v);
}

double round_half_even(double v, int digits) {
    const double scale = std::pow(10.0, digits);
    return std::nearbyint(v * scale) / scale;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::add(double v) {
    current_.push_back(format_double(v));
    return *this;
}

CsvTable& CsvTable::add(long long v) {
    current_.push_back(std::to_string(v));
    return *this;
}

CsvTable& CsvTable::add(const std::string& v) {
    if (v.find_first_of(",\"\n") != std::string::npos) {
        std::string q = "\"";
        for (char c : v) {
            if (c == '"') q += '"';
            q += c;
        }
        current_.push_back(q + '"');
    } else {
        current_.push_back(v);
    }
    return *this;
}

void CsvTable::end_row() {
    if (current_.size() != header_.size())
        throw Error(ErrorCode::precondition_violation,
                    fmt::format("csv row has {} cells, header has {}", current_.size(), header_.size()));
    rows_.push_back(std::move(current_));
    current_.clear();
}

std::string CsvTable::str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
}

std::filesystem::path unique_path(const std::filesystem::path& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::filesystem::path p = dir / name;
    if (!std::filesystem::exists(p)) return p;
    const auto stem = p.stem().string();
    const auto ext = p.extension().string();
    for (int i = 1;; ++i) {
        auto candidate = dir / fmt::format("{}-{}{}", stem, i, ext);
        if (!std::filesystem::exists(candidate)) return candidate;
    }
}

std::filesystem::path write_csv(const std::filesystem::path& dir, const std::string& name,
                                const CsvTable& table) {
    const auto path = unique_path(dir, name);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::config_error, "cannot write " + path.string());
    out << table.str();
    return path;
}

}  // namespace beamdecay::cli
