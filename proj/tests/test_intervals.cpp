#include <doctest.h>

#include "helpers.hpp"
#include "slotshift/intervals.hpp"
#include "slotshift/oracle.hpp"

using namespace slotshift;

TEST_CASE("reference row segments into the documented intervals") {
    const auto table = testutil::make_s1();
    REQUIRE(table.cells[0] == std::vector<int>({testutil::kA, testutil::kA, kIdle, testutil::kB,
                                                testutil::kB, kIdle}));
    const auto ivs = compute_intervals(table, 0);
    REQUIRE(ivs.size() == 4);
    CHECK(ivs[0] == Interval{0, 0, 2, testutil::kA, 0, 0});
    CHECK(ivs[1] == Interval{0, 2, 3, kIdle, 1, 1});
    CHECK(ivs[2] == Interval{0, 3, 5, testutil::kB, 0, 0});
    CHECK(ivs[3] == Interval{0, 5, 6, kIdle, 1, 1});
    CHECK(total_sc(ivs) == 2);
}

TEST_CASE("all-idle and fully packed rows") {
    SystemConfig c;
    c.total_cores = 2;
    c.tt_cores = 1;
    c.horizon = 6;
    auto table = make_empty_table(c);
    auto ivs = compute_intervals(table, 0);
    REQUIRE(ivs.size() == 1);
    CHECK(ivs[0].start == 0);
    CHECK(ivs[0].end == 6);
    CHECK(ivs[0].offline_sc == 6);

    for (auto& cell : table.cells[0]) cell = 3;
    ivs = compute_intervals(table, 0);
    CHECK(total_sc(ivs) == 0);
}

TEST_CASE("intervals tile the horizon and conserve idle cells on random tables") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto inst = testutil::make_small_instance(seed);
        for (int core = 0; core < inst.table.config.tt_cores; ++core) {
            const auto ivs = compute_intervals(inst.table, core);
            REQUIRE(!ivs.empty());
            CHECK(ivs.front().start == 0);
            CHECK(ivs.back().end == inst.table.config.horizon);
            for (std::size_t i = 0; i < ivs.size(); ++i) {
                CHECK(ivs[i].start < ivs[i].end);
                if (i > 0) {
                    CHECK(ivs[i].start == ivs[i - 1].end);
                    // maximality: adjacent runs differ in owner
                    CHECK(ivs[i].owner != ivs[i - 1].owner);
                }
            }
            CHECK(total_sc(ivs) == inst.table.idle_cells(core));
        }
    }
}

TEST_CASE("independent recomputation agrees with compute_intervals") {
    for (std::uint64_t seed = 100; seed < 130; ++seed) {
        const auto inst = testutil::make_small_instance(seed);
        const auto oracle_ivs = oracle::recompute_sc_from_table(inst.table);
        for (int core = 0; core < inst.table.config.tt_cores; ++core)
            CHECK(compute_intervals(inst.table, core) == oracle_ivs[core]);
    }
}
