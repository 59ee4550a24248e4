// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <atomic>
#include <set>
#include <stdexcept>

#include <doctest.h>

#include "herdmarket/error.hpp"
#include "herdmarket/random.hpp"
#include "herdmarket/sweep.hpp"

using namespace herdmarket;

namespace {

SweepSpec small_spec() {
    SweepSpec spec;
    spec.rho_grid = {0.1, 2.0};
    spec.replicates = 3;
    ParamInputs in;
    in.steps = 8000;
    in.burn_in = 100;
    in.seed = 42;
    spec.base = resolve(in);
    return spec;
}

}  // namespace

TEST_CASE("seed mixing") {
    CHECK(mix_seed(1, 0, 0) != mix_seed(1, 0, 1));
    CHECK(mix_seed(1, 0, 1) != mix_seed(1, 1, 0));
    CHECK(mix_seed(1, 2, 3) == mix_seed(1, 2, 3));
    CHECK(mix_seed(1, 2, 3) != mix_seed(2, 2, 3));
    std::set<std::uint64_t> seen;
    for (std::uint64_t g = 0; g < 50; ++g) {
        for (std::uint64_t r = 0; r < 50; ++r) seen.insert(mix_seed(7, g, r));
    }
    CHECK(seen.size() == 2500);
}

TEST_CASE("majority with strict quorum") {
    using R = RegimeKind;
    CHECK(majority_label({R::powerlaw, R::powerlaw, R::gaussian}, 3) == R::powerlaw);
    CHECK(majority_label({R::powerlaw, R::gaussian}, 2) == R::indeterminate);
    CHECK(majority_label({R::powerlaw, R::powerlaw, R::gaussian, R::gaussian}, 4) ==
          R::indeterminate);
    // Failed cells count against the quorum.
    CHECK(majority_label({R::exponential, R::exponential}, 5) == R::indeterminate);
    CHECK(majority_label({R::exponential, R::exponential, R::exponential}, 5) ==
          R::exponential);
    CHECK(majority_label({}, 3) == R::indeterminate);
}

TEST_CASE("sweep configuration checks") {
    auto spec = small_spec();
    spec.rho_grid.clear();
    try {
        run_sweep(spec);
        FAIL("expected a usage error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::usage);
    }
    spec = small_spec();
    spec.rho_grid = {2.0, 1.0};
    CHECK_THROWS_AS(run_sweep(spec), Error);
    spec = small_spec();
    spec.rho_grid = {-1.0};
    CHECK_THROWS_AS(run_sweep(spec), Error);
    spec = small_spec();
    spec.replicates = 0;
    CHECK_THROWS_AS(run_sweep(spec), Error);
    spec = small_spec();
    spec.workers = 0;
    CHECK_THROWS_AS(run_sweep(spec), Error);
}

TEST_CASE("sweep layout and seeds") {
    const auto spec = small_spec();
    const auto res = run_sweep(spec);
    REQUIRE(res.cells.size() == 6);
    REQUIRE(res.rows.size() == 2);
    for (std::size_t i = 0; i < res.cells.size(); ++i) {
        const auto& c = res.cells[i];
        CHECK(c.ok());
        CHECK(c.grid_index == i / 3);
        CHECK(c.replicate == i % 3);
        CHECK(c.rho == spec.rho_grid[c.grid_index]);
        CHECK(c.seed == mix_seed(42, c.grid_index, c.replicate));
    }
    CHECK(res.rows[0].rho == 0.1);
    CHECK(res.rows[1].failed_cells == 0);
    CHECK(res.rows[0].median_kurtosis.has_value());

    const auto j = to_json(res);
    CHECK(j.at("cells").size() == 6);
    CHECK(j.at("summary").size() == 2);
    const auto csv = summary_csv(res);
    CHECK(csv.rfind("rho,majority_return_regime,majority_volume_regime,median_alpha,"
                    "median_kurtosis\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("results do not depend on the worker count") {
    auto spec = small_spec();
    spec.workers = 1;
    const auto serial = to_json(run_sweep(spec)).dump();
    spec.workers = 8;
    const auto parallel = run_sweep(spec);
    CHECK(to_json(parallel).dump() == serial);
    spec.workers = 3;
    CHECK(summary_csv(run_sweep(spec)) == summary_csv(parallel));
}

TEST_CASE("a failing cell is recorded without aborting") {
    auto spec = small_spec();
    spec.workers = 4;
    const std::uint64_t bad_seed = mix_seed(spec.base.seed, 1, 2);
    const auto res = run_sweep(spec, [&](const ModelParams& p) {
        if (p.seed == bad_seed) throw std::runtime_error("injected failure");
        return run_simulation(p);
    });
    const auto& cell = res.cells[5];
    CHECK_FALSE(cell.ok());
    CHECK(cell.error == "injected failure");
    CHECK(res.rows[0].failed_cells == 0);
    CHECK(res.rows[1].failed_cells == 1);
    for (std::size_t i = 0; i < 5; ++i) CHECK(res.cells[i].ok());

    const auto j = to_json(res);
    CHECK(j.at("cells").at(5).at("error") == "injected failure");
}

TEST_CASE("a sweep where every cell fails is an error") {
    auto spec = small_spec();
    std::atomic<int> calls{0};
    CHECK_THROWS_AS(run_sweep(spec,
                              [&](const ModelParams&) -> SimulationSeries {
                                  ++calls;
                                  throw std::runtime_error("boom");
                              }),
                    Error);
    CHECK(calls == 6);
}
