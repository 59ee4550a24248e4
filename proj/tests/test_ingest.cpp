// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <doctest.h>

#include "herdmarket/error.hpp"
#include "herdmarket/ingest.hpp"

using namespace herdmarket;

namespace {

EmpiricalSeries parse(const std::string& text) {
    std::istringstream in(text);
    return load_daily_csv(in, "TEST");
}

std::string error_of(const std::string& text) {
    try {
        parse(text);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::validation);
        return e.what();
    }
    FAIL("expected a validation error");
    return {};
}

}  // namespace

TEST_CASE("well-formed daily file") {
    const auto s = parse(
        "date,close,volume\n"
        "2001-03-01,100.5,12000\n"
        "2001-03-02,101.25,0\n"
        "2001-03-05,99,8500.5\n");
    REQUIRE(s.size() == 3);
    CHECK(s.symbol == "TEST");
    CHECK(s.dates == std::vector<std::string>{"2001-03-01", "2001-03-02", "2001-03-05"});
    CHECK(s.close == std::vector<double>{100.5, 101.25, 99.0});
    CHECK(s.volume == std::vector<double>{12000.0, 0.0, 8500.5});
}

TEST_CASE("windows line endings and byte order mark") {
    const auto s = parse("\xEF\xBB\xBF" "date,close,volume\r\n2001-03-01,1,2\r\n2001-03-02,3,4\r\n");
    CHECK(s.size() == 2);
    CHECK(s.close[1] == 3.0);
}

TEST_CASE("validation errors name the row") {
    const auto zero = error_of(
        "date,close,volume\n"
        "2001-03-01,100,1\n"
        "2001-03-02,0,1\n"
        "2001-03-03,100,1\n");
    CHECK(zero.find("row 2") != std::string::npos);
    CHECK(zero.find("close") != std::string::npos);

    const auto shuffled = error_of(
        "date,close,volume\n"
        "2001-03-02,100,1\n"
        "2001-03-01,101,1\n"
        "2001-03-03,102,1\n");
    CHECK(shuffled.find("row 2") != std::string::npos);
    CHECK(shuffled.find("increasing") != std::string::npos);

    const auto dup = error_of("date,close,volume\n2001-03-01,1,1\n2001-03-01,1,1\n");
    CHECK(dup.find("increasing") != std::string::npos);

    const auto missing = error_of("date,close,volume\n2001-03-01,1,1\n2001-03-02,,1\n");
    CHECK(missing.find("row 2") != std::string::npos);
    CHECK(missing.find("missing close") != std::string::npos);

    CHECK(error_of("date,close,volume\n2001-02-30,1,1\n2001-03-01,1,1\n").find("row 1") !=
          std::string::npos);
    CHECK(error_of("date,close,volume\n2001-03-01,1,-5\n2001-03-02,1,1\n").find("volume") !=
          std::string::npos);
    CHECK(error_of("date,close,volume\n2001-03-01,1\n2001-03-02,1,1\n").find("3 fields") !=
          std::string::npos);
    CHECK(error_of("date,price,volume\n2001-03-01,1,1\n").find("header") != std::string::npos);
    CHECK(error_of("").find("header") != std::string::npos);
    CHECK(error_of("date,close,volume\n2001-03-01,1,1\n").find("at least 2") !=
          std::string::npos);
}

TEST_CASE("log returns") {
    EmpiricalSeries s;
    s.dates = {"2000-01-01", "2000-01-02"};
    s.volume = {1, 1};

    s.close = {100.0, 100.0};
    CHECK(log_returns(s) == std::vector<double>{0.0});
    s.close = {100.0, 110.517};
    CHECK(log_returns(s)[0] == doctest::Approx(0.1).epsilon(1e-5));
    s.close = {100.0, 50.0};
    CHECK(log_returns(s)[0] == doctest::Approx(-std::log(2.0)).epsilon(1e-12));

    s.close = {100.0};
    CHECK_THROWS_AS(log_returns(s), Error);
}

TEST_CASE("log returns telescope") {
    std::mt19937_64 rng(3);
    std::lognormal_distribution<double> step(0.0, 0.02);
    EmpiricalSeries s;
    double c = 50.0;
    for (int i = 0; i < 5000; ++i) {
        s.close.push_back(c);
        s.volume.push_back(1.0);
        s.dates.push_back("x");
        c *= step(rng);
    }
    const auto r = log_returns(s);
    CHECK(r.size() == s.size() - 1);
    const double sum = std::accumulate(r.begin(), r.end(), 0.0);
    CHECK(std::abs(sum - std::log(s.close.back() / s.close.front())) <= 1e-10);
}

TEST_CASE("load, write, load is an identity") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.001, 1000.0);
    std::ostringstream text;
    text << "date,close,volume\n";
    const char* dates[] = {"1999-12-30", "1999-12-31", "2000-01-03", "2000-01-04",
                           "2000-02-29"};
    text.precision(17);
    for (const char* d : dates) text << d << ',' << u(rng) << ',' << u(rng) << '\n';

    const auto a = parse(text.str());
    std::ostringstream out;
    write_daily_csv(out, a);
    const auto b = parse(out.str());
    CHECK(a == b);

    std::ostringstream again;
    write_daily_csv(again, b);
    CHECK(again.str() == out.str());
}
