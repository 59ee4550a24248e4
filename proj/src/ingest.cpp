// SPDX-License-Identifier: Apache-2.0
#include "herdmarket/ingest.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string_view>

#include "herdmarket/error.hpp"
#include "herdmarket/series_io.hpp"

namespace herdmarket {

namespace {

bool valid_iso_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
        if (s[i] < '0' || s[i] > '9') return false;
    }
    const int y = std::stoi(std::string(s.substr(0, 4)));
    const unsigned m = static_cast<unsigned>(std::stoi(std::string(s.substr(5, 2))));
    const unsigned d = static_cast<unsigned>(std::stoi(std::string(s.substr(8, 2))));
    return std::chrono::year_month_day{std::chrono::year{y},
                                       std::chrono::month{m},
                                       std::chrono::day{d}}
        .ok();
}

[[noreturn]] void row_error(std::size_t row, std::size_t line,
                            const std::string& what) {
    fail(ErrorKind::validation, "row " + std::to_string(row) + " (line " +
                                    std::to_string(line) + "): " + what);
}

}  // namespace

EmpiricalSeries load_daily_csv(std::istream& in, std::string symbol) {
    EmpiricalSeries out;
    out.symbol = std::move(symbol);

    std::string line;
    if (!std::getline(in, line)) {
        fail(ErrorKind::validation, "empty input: expected header date,close,volume");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    const auto header = split_csv_line(line);
    if (header != std::vector<std::string>{"date", "close", "volume"}) {
        fail(ErrorKind::validation,
             "malformed header (line 1): expected 'date,close,volume', got '" +
                 line + "'");
    }

    std::size_t line_no = 1;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        const auto cells = split_csv_line(line);
        if (cells.size() != 3) {
            row_error(row, line_no, "expected 3 fields, got " +
                                        std::to_string(cells.size()));
        }
        if (!valid_iso_date(cells[0])) {
            row_error(row, line_no, "invalid date '" + cells[0] + "'");
        }
        if (!out.dates.empty() && !(out.dates.back() < cells[0])) {
            row_error(row, line_no, "dates not strictly increasing ('" +
                                        out.dates.back() + "' then '" +
                                        cells[0] + "')");
        }
        if (cells[1].empty()) row_error(row, line_no, "missing close");
        const auto close = parse_double(cells[1]);
        if (!close) row_error(row, line_no, "unparseable close '" + cells[1] + "'");
        if (!(*close > 0.0) || !std::isfinite(*close)) {
            row_error(row, line_no, "close must be positive, got " + cells[1]);
        }
        const auto volume = parse_double(cells[2]);
        if (!volume || !(*volume >= 0.0) || !std::isfinite(*volume)) {
            row_error(row, line_no, "volume must be a nonnegative number, got '" +
                                        cells[2] + "'");
        }
        out.dates.push_back(cells[0]);
        out.close.push_back(*close);
        out.volume.push_back(*volume);
    }
    if (out.size() < 2) {
        fail(ErrorKind::validation, "daily series needs at least 2 rows");
    }
    return out;
}

void write_daily_csv(std::ostream& out, const EmpiricalSeries& series) {
    out << "date,close,volume\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << series.dates[i] << ',' << format_double(series.close[i]) << ','
            << format_double(series.volume[i]) << '\n';
    }
}

std::vector<double> log_returns(const EmpiricalSeries& series) {
    if (series.size() < 2) {
        fail(ErrorKind::validation, "log_returns needs at least 2 closes");
    }
    std::vector<double> r(series.size() - 1);
    for (std::size_t t = 0; t + 1 < series.size(); ++t) {
        r[t] = std::log(series.close[t + 1]) - std::log(series.close[t]);
    }
    return r;
}

}  // namespace herdmarket
