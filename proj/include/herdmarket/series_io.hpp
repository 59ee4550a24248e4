// SPDX-License-Identifier: Apache-2.0
//
// The shared `step,x,ln_s,ret,volume` series format. Simulated runs fill
// every column; ingested market data leaves x and ln_s empty. ret is empty
// on the first row.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace herdmarket {

struct SimulationSeries;
struct EmpiricalSeries;

struct SeriesTable {
    std::vector<std::uint64_t> step;
    std::vector<double> x;     // empty when the source is not a simulation
    std::vector<double> ln_s;  // idem
    std::vector<double> ret;   // rows()-1 values; ret[i] belongs to row i+1
    std::vector<double> volume;

    std::size_t rows() const { return volume.size(); }
    bool has_model_columns() const { return !x.empty(); }
    bool operator==(const SeriesTable&) const = default;
};

SeriesTable to_table(const SimulationSeries& series);
SeriesTable to_table(const EmpiricalSeries& series);

void write_series_csv(std::ostream& out, const SeriesTable& table);
SeriesTable read_series_csv(std::istream& in);
void write_series_json(std::ostream& out, const SeriesTable& table);
SeriesTable read_series_json(std::istream& in);

/// Reads .json by extension, CSV otherwise.
SeriesTable load_series_file(const std::filesystem::path& path);

/// Shortest representation that parses back to the same double.
std::string format_double(double v);
std::optional<double> parse_double(std::string_view s);
std::vector<std::string> split_csv_line(std::string_view line);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace herdmarket
