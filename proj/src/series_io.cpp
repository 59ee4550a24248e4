// SPDX-License-Identifier: Apache-2.0
#include "herdmarket/series_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "herdmarket/error.hpp"
#include "herdmarket/ingest.hpp"
#include "herdmarket/simulator.hpp"

namespace herdmarket {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        auto cell = line.substr(start, comma == std::string_view::npos
                                           ? std::string_view::npos
                                           : comma - start);
        while (!cell.empty() && cell.front() == ' ') cell.remove_prefix(1);
        while (!cell.empty() && cell.back() == ' ') cell.remove_suffix(1);
        cells.emplace_back(cell);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

SeriesTable to_table(const SimulationSeries& series) {
    SeriesTable t;
    t.step.resize(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        t.step[i] = series.params.burn_in + i;
    }
    t.x = series.x;
    t.ln_s = series.ln_s;
    t.ret = series.returns;
    t.volume = series.volume;
    return t;
}

SeriesTable to_table(const EmpiricalSeries& series) {
    SeriesTable t;
    t.step.resize(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) t.step[i] = i;
    t.ret = log_returns(series);
    t.volume = series.volume;
    return t;
}

void write_series_csv(std::ostream& out, const SeriesTable& table) {
    out << "step,x,ln_s,ret,volume\n";
    const bool model = table.has_model_columns();
    for (std::size_t i = 0; i < table.rows(); ++i) {
        out << table.step[i] << ',';
        if (model) out << format_double(table.x[i]);
        out << ',';
        if (model) out << format_double(table.ln_s[i]);
        out << ',';
        if (i > 0) out << format_double(table.ret[i - 1]);
        out << ',' << format_double(table.volume[i]) << '\n';
    }
}

SeriesTable read_series_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) fail(ErrorKind::validation, "empty series file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (split_csv_line(line) !=
        std::vector<std::string>{"step", "x", "ln_s", "ret", "volume"}) {
        fail(ErrorKind::validation,
             "malformed series header: expected 'step,x,ln_s,ret,volume'");
    }
    SeriesTable t;
    std::size_t line_no = 1;
    std::optional<bool> model;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto c = split_csv_line(line);
        auto bad = [&](const std::string& what) {
            fail(ErrorKind::validation,
                 "series line " + std::to_string(line_no) + ": " + what);
        };
        if (c.size() != 5) bad("expected 5 fields");
        std::uint64_t step = 0;
        const auto sres = std::from_chars(c[0].data(), c[0].data() + c[0].size(), step);
        if (sres.ec != std::errc{} || sres.ptr != c[0].data() + c[0].size()) {
            bad("bad step '" + c[0] + "'");
        }
        const bool row_model = !c[1].empty();
        if (!model) model = row_model;
        if (*model != row_model || c[1].empty() != c[2].empty()) {
            bad("x/ln_s columns must be filled on every row or on none");
        }
        if (row_model) {
            const auto x = parse_double(c[1]);
            const auto ln_s = parse_double(c[2]);
            if (!x || !ln_s) bad("unparseable x or ln_s");
            t.x.push_back(*x);
            t.ln_s.push_back(*ln_s);
        }
        if (t.step.empty()) {
            if (!c[3].empty()) bad("ret must be empty on the first row");
        } else {
            const auto r = parse_double(c[3]);
            if (!r) bad("missing or unparseable ret");
            t.ret.push_back(*r);
        }
        const auto v = parse_double(c[4]);
        if (!v) bad("missing or unparseable volume");
        t.step.push_back(step);
        t.volume.push_back(*v);
    }
    if (t.rows() < 2) fail(ErrorKind::validation, "series needs at least 2 rows");
    return t;
}

void write_series_json(std::ostream& out, const SeriesTable& table) {
    nlohmann::json j;
    j["step"] = table.step;
    j["x"] = table.x;
    j["ln_s"] = table.ln_s;
    j["ret"] = table.ret;
    j["volume"] = table.volume;
    out << j.dump() << '\n';
}

SeriesTable read_series_json(std::istream& in) {
    try {
        const auto j = nlohmann::json::parse(in);
        SeriesTable t;
        j.at("step").get_to(t.step);
        j.at("x").get_to(t.x);
        j.at("ln_s").get_to(t.ln_s);
        j.at("ret").get_to(t.ret);
        j.at("volume").get_to(t.volume);
        const auto n = t.rows();
        if (n < 2 || t.step.size() != n || t.ret.size() + 1 != n ||
            (!t.x.empty() && (t.x.size() != n || t.ln_s.size() != n))) {
            fail(ErrorKind::validation, "series JSON columns have inconsistent lengths");
        }
        return t;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::validation, std::string("malformed series JSON: ") + e.what());
    }
}

SeriesTable load_series_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io, "cannot open " + path.string());
    if (path.extension() == ".json") return read_series_json(in);
    return read_series_csv(in);
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorKind::io, "cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out) fail(ErrorKind::io, "write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        fail(ErrorKind::io, "cannot move " + tmp.string() + " to " + path.string());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace herdmarket
