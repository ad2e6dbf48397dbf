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

#include <cmath>
#include <fstream>
#include <sstream>

#include "alterbft/latmodel.hpp"

using namespace alterbft;
using namespace alterbft::latmodel;

namespace {

DelaySampleSet parse(const std::string& text) {
    std::istringstream in(text);
    return parse_samples(in);
}

}  // namespace

TEST_CASE("sample files") {
    CHECK(parse("1.0\n2.0\n3.0\n").samples == std::vector<double>{1, 2, 3});
    CHECK(parse("delay_ms\n4\n\n5\n").samples == std::vector<double>{4, 5});
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("header only\n"), ParseError);
    try {
        parse("1\n2\nx\n");
        FAIL("expected an error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse("1\n-2\n"), ParseError);
    CHECK_THROWS_AS(load_samples("/nonexistent/samples.txt"), std::runtime_error);
}

TEST_CASE("nearest-rank percentile") {
    const DelaySampleSet s{{4, 1, 3, 2}, ""};
    CHECK(percentile(s, 50) == 2);
    CHECK(percentile(s, 100) == 4);
    CHECK(percentile(s, 25) == 1);
    CHECK(percentile(s, 26) == 2);
    const DelaySampleSet one{{7}, ""};
    for (double p : {0.01, 50.0, 99.99, 100.0}) CHECK(percentile(one, p) == 7);
    CHECK_THROWS_AS(percentile(s, 0), std::invalid_argument);
    CHECK_THROWS_AS(percentile(DelaySampleSet{}, 50), std::invalid_argument);
}

TEST_CASE("synthetic large delay of a constant set is the constant") {
    const DelaySampleSet s{{3.5, 3.5, 3.5}, ""};
    Rng rng(1);
    for (unsigned k : {1u, 2u, 64u}) CHECK(synth_large_delay(s, k, rng) == 3.5);
}

TEST_CASE("two-point set with k=2 matches the exact enumeration") {
    // Pairs (1,1) (1,5) (5,1) (5,5): max is 5 with probability 3/4.
    const DelaySampleSet s{{1, 5}, ""};
    Rng rng(12345);
    const int trials = 100000;
    int fives = 0;
    for (int i = 0; i < trials; ++i) {
        const double v = synth_large_delay(s, 2, rng);
        REQUIRE((v == 1 || v == 5));
        fives += v == 5;
    }
    const double p = 0.75;
    const double sigma = std::sqrt(trials * p * (1 - p));
    CHECK(std::abs(fives - trials * p) <= 3 * sigma);
}

TEST_CASE("synthetic delays dominate the base distribution") {
    Rng gen(8);
    DelaySampleSet s;
    for (int i = 0; i < 2000; ++i) s.samples.push_back(1 + gen.uniform01() * 9);
    Rng rng(9);
    DelaySampleSet synth;
    for (int i = 0; i < 100000; ++i) synth.samples.push_back(synth_large_delay(s, 64, rng));
    for (double p : {50.0, 90.0, 99.0, 99.99}) CHECK(percentile(synth, p) >= percentile(s, p));
}

TEST_CASE("bounds") {
    const DelaySampleSet c{{2, 2, 2}, ""};
    const auto b = derive_bounds(c, 64, 1000, 1);
    CHECK(b.delta_s == 2);
    CHECK(b.delta_l == 2);

    const DelaySampleSet two{{1, 5}, ""};
    const auto x = derive_bounds(two, 64, 5000, 3), y = derive_bounds(two, 64, 5000, 3);
    CHECK(to_json(x) == to_json(y));
    CHECK(x.delta_s == 5);
    CHECK(x.delta_l == 5);
    CHECK_THROWS_AS(derive_bounds(two, 0, 10, 1), std::invalid_argument);
}
