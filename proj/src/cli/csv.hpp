#pragma once

// Comma-separated output with fixed 17-significant-digit floats.

#include <filesystem>
#include <string>
#include <vector>

namespace beamdecay::cli {

/// "%.17g"; "nan", "inf" and "-inf" for non-finite values.
std::string format_double(double v);

/// Rounds to `digits` decimals, ties to even.
double round_half_even(double v, int digits);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    CsvTable& add(double v);
    CsvTable& add(long long v);
    CsvTable& add(int v) { return add(static_cast<long long>(v)); }
    CsvTable& add(std::size_t v) { return add(static_cast<long long>(v)); }
    CsvTable& add(bool v) { return add(std::string(v ? "true" : "false")); }
    CsvTable& add(const std::string& v);
    CsvTable& add(const char* v) { return add(std::string(v)); }
    /// Finishes the current row; throws if the column count is off.
    void end_row();

    std::size_t rows() const { return rows_.size(); }
    const std::vector<std::string>& header() const { return header_; }
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<std::string> current_;
};

/// `dir / name`, or `stem-N.ext` with the smallest N >= 1 that does not
/// exist yet. Creates `dir` if needed.
std::filesystem::path unique_path(const std::filesystem::path& dir, const std::string& name);

/// Writes the table to a fresh file in `dir` and returns its path.
std::filesystem::path write_csv(const std::filesystem::path& dir, const std::string& name,
                                const CsvTable& table);

}  // namespace beamdecay::cli
