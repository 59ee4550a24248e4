// SPDX-License-Identifier: Apache-2.0
//
// Writes a synthetic `date,close,volume` file from a rho=8 model run, with
// prices as levels S = exp(ln S) and one calendar day per step.
//
//   make_daily_fixture <out.csv> [steps] [seed]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "herdmarket/herdmarket.h"

namespace {

int die(const char* what) {
    std::fprintf(stderr, "make_daily_fixture: %s: %s\n", what, hm_last_error());
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: make_daily_fixture <out.csv> [steps] [seed]\n");
        return 1;
    }
    const std::uint64_t steps = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 20000;
    const std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 1;

    hm_params* p = hm_params_create();
    // b*n = 100000 shares at lambda = 1 requires a*m = b*n.
    if (hm_params_set_double(p, "rho", 8.0) || hm_params_set_uint(p, "steps", steps) ||
        hm_params_set_uint(p, "seed", seed) || hm_params_set_double(p, "b", 1.0) ||
        hm_params_set_uint(p, "m", 100000) || hm_params_set_double(p, "a", 1.0)) {
        return die("params");
    }
    hm_series* s = nullptr;
    if (hm_simulate(p, &s) != HM_OK) return die("simulate");
    const std::size_t n = hm_series_length(s);
    std::vector<double> ln_s(n), volume(n);
    std::size_t got = 0;
    if (hm_series_copy_column(s, HM_COLUMN_LN_S, ln_s.data(), n, &got) ||
        hm_series_copy_column(s, HM_COLUMN_VOLUME, volume.data(), n, &got)) {
        return die("copy");
    }

    std::FILE* f = std::fopen(argv[1], "wb");
    if (f == nullptr) {
        std::fprintf(stderr, "make_daily_fixture: cannot open %s\n", argv[1]);
        return 3;
    }
    using namespace std::chrono;
    sys_days day = year{1975} / January / 6;
    std::fprintf(f, "date,close,volume\n");
    for (std::size_t i = 0; i < n; ++i, day += days{1}) {
        const year_month_day ymd{day};
        std::fprintf(f, "%04d-%02u-%02u,%.17g,%.17g\n", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                     std::exp(ln_s[i]), volume[i]);
    }
    std::fclose(f);
    hm_series_destroy(s);
    hm_params_destroy(p);
    return 0;
}
