// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace herdmarket {

/// Daily close/volume records of one instrument.
struct EmpiricalSeries {
    std::vector<std::string> dates;  // ISO-8601 YYYY-MM-DD, strictly increasing
    std::vector<double> close;       // > 0
    std::vector<double> volume;      // >= 0
    std::string symbol;

    std::size_t size() const { return close.size(); }
    bool operator==(const EmpiricalSeries&) const = default;
};

/// Parses a `date,close,volume` CSV. Errors name the offending data row
/// (1-based, header excluded) and its line number.
EmpiricalSeries load_daily_csv(std::istream& in, std::string symbol = {});

/// Writes the same schema back with round-trip precision.
void write_daily_csv(std::ostream& out, const EmpiricalSeries& series);

/// Close-to-close log returns, ln(close[t+1]) - ln(close[t]).
std::vector<double> log_returns(const EmpiricalSeries& series);

}  // namespace herdmarket
