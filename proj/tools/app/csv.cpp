#include "app/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

namespace survscore::app {

namespace {

std::vector<std::string> split_fields(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(const std::string& raw) {
    const std::string s = trim(raw);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    if (*begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
    return v;
}

struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> lines;
};

RawTable read_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    RawTable t;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (trim(line).empty() || trim(line) == "\r") continue;
        auto fields = split_fields(line);
        for (auto& f : fields) f = trim(f);
        if (t.header.empty()) {
            t.header = std::move(fields);
            continue;
        }
        if (fields.size() != t.header.size()) {
            throw ParseError(path.string(), number,
                             "expected " + std::to_string(t.header.size()) + " fields, found " +
                                 std::to_string(fields.size()));
        }
        t.rows.push_back(std::move(fields));
        t.lines.push_back(number);
    }
    if (t.header.empty()) throw ParseError(path.string(), 0, "empty file");
    return t;
}

std::size_t column_of(const RawTable& t, const std::string& name, const std::string& path) {
    auto it = std::find(t.header.begin(), t.header.end(), name);
    if (it == t.header.end()) throw ParseError(path, 1, "missing column '" + name + "'");
    if (std::find(it + 1, t.header.end(), name) != t.header.end()) {
        throw ParseError(path, 1, "duplicate column '" + name + "'");
    }
    return static_cast<std::size_t>(it - t.header.begin());
}

}  // namespace

ParseError::ParseError(std::string path, std::size_t line, const std::string& what)
    : std::runtime_error(path + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what),
      path_(std::move(path)),
      line_(line) {}

LoadedCsv load_csv(const std::filesystem::path& path, const CsvOptions& opts) {
    const std::string p = path.string();
    const RawTable t = read_table(path);
    const std::size_t time_col = column_of(t, "time", p);
    const std::size_t event_col = column_of(t, "event", p);
    if (t.rows.empty()) throw ParseError(p, 0, "no data rows");

    std::optional<std::size_t> group_col;
    if (!opts.group_column.empty()) {
        group_col = column_of(t, opts.group_column, p);
        if (*group_col == time_col || *group_col == event_col) {
            throw ParseError(p, 1, "group column cannot be time or event");
        }
    } else {
        for (std::size_t c = 0; c < t.header.size(); ++c) {
            if (c == time_col || c == event_col) continue;
            const bool numeric = std::all_of(t.rows.begin(), t.rows.end(),
                                             [&](const auto& row) { return parse_number(row[c]).has_value(); });
            if (numeric) continue;
            if (group_col) {
                throw ParseError(p, 1,
                                 "columns '" + t.header[*group_col] + "' and '" + t.header[c] +
                                     "' are both non-numeric; only one group column is supported");
            }
            group_col = c;
        }
    }

    LoadedCsv out;
    if (group_col) out.group_column = t.header[*group_col];
    std::vector<std::size_t> feature_cols;
    for (std::size_t c = 0; c < t.header.size(); ++c) {
        if (c == time_col || c == event_col || (group_col && c == *group_col)) continue;
        feature_cols.push_back(c);
        out.feature_columns.push_back(t.header[c]);
    }

    std::vector<SurvivalRow> rows;
    rows.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& fields = t.rows[r];
        const std::size_t line = t.lines[r];
        const auto time = parse_number(fields[time_col]);
        if (!time) throw ParseError(p, line, "time '" + fields[time_col] + "' is not a number");
        if (!(*time > 0.0)) throw ParseError(p, line, "time must be positive, got " + fields[time_col]);
        const std::string& ev = fields[event_col];
        if (ev != "0" && ev != "1") throw ParseError(p, line, "event must be 0 or 1, got '" + ev + "'");

        SurvivalRow row;
        row.obs = CensoredObservation{*time, ev == "1"};
        if (group_col) {
            row.group = fields[*group_col];
            if (row.group.empty()) throw ParseError(p, line, "empty group label");
        }
        for (std::size_t c : feature_cols) {
            const auto v = parse_number(fields[c]);
            if (!v) throw ParseError(p, line, "feature '" + t.header[c] + "' is not a number");
            row.features.push_back(*v);
        }
        rows.push_back(std::move(row));
    }
    out.data = SurvivalDataset(std::move(rows));
    return out;
}

std::vector<std::vector<double>> load_predictions(const std::filesystem::path& path) {
    const std::string p = path.string();
    const RawTable t = read_table(path);
    for (std::size_t c = 0; c < t.header.size(); ++c) {
        if (t.header[c] != "f_" + std::to_string(c)) {
            throw ParseError(p, 1, "expected column 'f_" + std::to_string(c) + "', found '" + t.header[c] + "'");
        }
    }
    if (t.rows.empty()) throw ParseError(p, 0, "no prediction rows");
    std::vector<std::vector<double>> out;
    out.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        std::vector<double> m;
        double total = 0.0;
        for (const auto& field : t.rows[r]) {
            const auto v = parse_number(field);
            if (!v || *v < 0.0) throw ParseError(p, t.lines[r], "mass '" + field + "' is not a nonnegative number");
            m.push_back(*v);
            total += *v;
        }
        if (std::abs(total - 1.0) > 1e-6) {
            throw ParseError(p, t.lines[r], "masses sum to " + format_double(total) + ", not 1");
        }
        out.push_back(std::move(m));
    }
    return out;
}

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

void write_dataset_csv(const std::filesystem::path& path, const SurvivalDataset& data, bool with_group) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    const std::size_t d = data.empty() ? 0 : data[0].features.size();
    if (with_group) out << "group,";
    for (std::size_t j = 0; j < d; ++j) out << 'x' << j << ',';
    out << "time,event\n";
    for (const auto& row : data.rows()) {
        if (with_group) out << row.group << ',';
        for (double x : row.features) out << format_double(x) << ',';
        out << format_double(row.obs.z) << ',' << (row.obs.event ? 1 : 0) << '\n';
    }
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void write_predictions_csv(const std::filesystem::path& path, const std::vector<std::vector<double>>& masses) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    const std::size_t b = masses.empty() ? 0 : masses.front().size();
    for (std::size_t i = 0; i < b; ++i) out << (i ? "," : "") << "f_" << i;
    out << '\n';
    for (const auto& m : masses) {
        for (std::size_t i = 0; i < m.size(); ++i) out << (i ? "," : "") << format_double(m[i]);
        out << '\n';
    }
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace survscore::app
