/**
 * Copyright 2026 The alterbft-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include "alterbft/scenario.hpp"

using namespace alterbft;

namespace {

std::string field_of(const ScenarioConfig& c) {
    try {
        c.validate();
    } catch (const ConfigError& e) {
        return e.field();
    }
    return {};
}

}  // namespace

TEST_CASE("defaults validate") {
    ScenarioConfig c;
    CHECK(field_of(c).empty());
    CHECK(c.n == 5);
    CHECK(c.f == 2);
    CHECK(c.delta_s == from_ms(100));
    CHECK(c.delta_l == from_ms(500));
    CHECK(c.gst == SimTime{0});
    CHECK(c.epochs == 50);
    CHECK(c.payload_size == 128 * 1024);
    CHECK_FALSE(c.fast_path);
}

TEST_CASE("validation names the offending field") {
    ScenarioConfig c;
    c.byzantine = {0, 1, 2};
    CHECK(field_of(c) == "byzantine");

    ScenarioConfig ok4;
    ok4.n = 4;
    ok4.f = 1;
    CHECK(field_of(ok4).empty());

    ScenarioConfig bad4;
    bad4.n = 4;
    bad4.f = 2;
    CHECK(field_of(bad4) == "n");

    ScenarioConfig dup;
    dup.byzantine = {1, 1};
    CHECK(field_of(dup) == "byzantine");

    ScenarioConfig range;
    range.byzantine = {5};
    CHECK(field_of(range) == "byzantine");

    ScenarioConfig bounds;
    bounds.delta_l = from_ms(50);
    CHECK(field_of(bounds) == "delta_l");

    ScenarioConfig thresh;
    thresh.small_threshold = 100;
    CHECK(field_of(thresh) == "small_threshold");

    ScenarioConfig big;
    big.n = 121;
    big.f = 60;
    CHECK(field_of(big) == "small_threshold");
}

TEST_CASE("file syntax") {
    const auto c = parse_scenario(R"(# comment
n = 7
f = 3
byzantine = [1, 4]
adversary = equivocate   # trailing comment
delta_s = 20.5
gst = never
fast_path = true
dist_l = fixed:50
checks = [safety, lock]
)");
    CHECK(c.n == 7);
    CHECK(c.byzantine == std::vector<std::uint32_t>{1, 4});
    CHECK(c.adversary == AdversaryMode::Equivocate);
    CHECK(c.delta_s == from_ms(20.5));
    CHECK_FALSE(c.gst);
    CHECK(c.fast_path);
    CHECK(c.waits_after_misbehavior());
    CHECK(c.dist_l == "fixed:50");
    CHECK(c.checks == std::vector<std::string>{"safety", "lock"});
}

TEST_CASE("bad input is reported by key") {
    CHECK_THROWS_AS(parse_scenario("bogus = 1"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("n 5"), ConfigError);
    try {
        parse_scenario("f = -1");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "f");
    }
    CHECK_THROWS_AS(parse_scenario("byzantine = [1, 2"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("adversary = sneaky"), ConfigError);
}

TEST_CASE("later settings override earlier ones") {
    auto c = parse_scenario("seed = 3\nn = 7\nf = 3");
    c.set("seed", "42");
    CHECK(c.seed == 42);
    CHECK(c.n == 7);
}

TEST_CASE("JSON header round-trips") {
    ScenarioConfig c;
    c.n = 9;
    c.f = 4;
    c.byzantine = {0, 3};
    c.adversary = AdversaryMode::Crash;
    c.crash_time = from_ms(250);
    c.gst.reset();
    c.dist_l_pre = "never";
    c.max_time = from_ms(9000);
    c.stress_s_violation = 0.25;
    const auto back = scenario_from_json(to_json(c));
    CHECK(to_json(back) == to_json(c));
    CHECK(back.byzantine == c.byzantine);
    CHECK_FALSE(back.gst);
    CHECK(back.max_time == c.max_time);
}

TEST_CASE("adversary names are case-insensitive") {
    CHECK(adversary_from_string("delay_l") == AdversaryMode::DelayL);
    CHECK(to_string(AdversaryMode::SilentLeader) == "SILENT_LEADER");
}
