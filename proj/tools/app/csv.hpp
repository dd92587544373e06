#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "survscore/observation.hpp"

namespace survscore::app {

/// Malformed input file. `line` is 1-based (the header is line 1); 0 when
/// the problem is not tied to one line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string path, std::size_t line, const std::string& what);
    const std::string& path() const noexcept { return path_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string path_;
    std::size_t line_;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CsvOptions {
    /// Column holding the group label. Empty: a single non-numeric column, if
    /// any, is taken as the group column.
    std::string group_column;
};

struct LoadedCsv {
    SurvivalDataset data;
    /// Empty when there is no group column.
    std::string group_column;
    std::vector<std::string> feature_columns;
};

/// Comma-separated, header required. `time` (> 0) and `event` (0/1) are
/// mandatory; every other column is a numeric feature, except the group
/// column. z_max is the largest time.
LoadedCsv load_csv(const std::filesystem::path& path, const CsvOptions& opts = {});

/// Rows of B mass columns f_0..f_{B-1}; each row must be nonnegative and sum
/// to 1 within 1e-6.
std::vector<std::vector<double>> load_predictions(const std::filesystem::path& path);

/// Writes `group,time,event` (plus features as x0, x1, ...) with round-trip
/// precision.
void write_dataset_csv(const std::filesystem::path& path, const SurvivalDataset& data, bool with_group = true);

void write_predictions_csv(const std::filesystem::path& path, const std::vector<std::vector<double>>& masses);

/// Shortest decimal that parses back to the same double.
std::string format_double(double x);

}  // namespace survscore::app
