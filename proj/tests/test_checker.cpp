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

#include "alterbft/checker.hpp"
#include "alterbft/netsim.hpp"
#include "negatives.hpp"

using namespace alterbft;
using namespace alterbft::checker;

namespace {

Verdict by_name(const Trace& t, const std::string& name) { return run_checks(t, {name}).at(0); }

}  // namespace

TEST_CASE("every checker accepts the positive runs") {
    for (const auto& [label, t] : test::positive_traces())
        for (const auto& v : run_checks(t, {"all"})) CHECK_MESSAGE(v.pass, label << " " << v.name << ": " << v.detail);
}

TEST_CASE("every checker rejects its counterexample") {
    for (const auto& [name, build] : test::negative_builders()) {
        const auto v = by_name(build(), name);
        CHECK_MESSAGE(!v.pass, name);
        CHECK_FALSE(v.detail.empty());
    }
}

TEST_CASE("safety locates the conflict") {
    const auto v = check_safety(test::negative_safety());
    CHECK_FALSE(v.pass);
    CHECK(v.detail.find("height 2") != std::string::npos);
}

TEST_CASE("a late epoch start is flagged") {
    const auto v = check_epoch_sync(test::negative_epoch_sync());
    CHECK_FALSE(v.pass);
    CHECK(v.detail.find("epoch 4") != std::string::npos);
}

TEST_CASE("liveness without timely large messages reports a stall; safety still holds") {
    auto c = test::base_positive();
    c.gst.reset();
    c.dist_l_pre = "never";
    const auto t = netsim::simulate(c);
    const auto live = check_liveness(t);
    CHECK_FALSE(live.pass);
    CHECK(live.detail.find("stalled") != std::string::npos);
    CHECK(check_safety(t).pass);
    CHECK(check_lock_invariant(t).pass);
}

TEST_CASE("liveness over a zero-epoch horizon passes vacuously") {
    auto c = test::base_positive();
    c.gst.reset();
    c.dist_l_pre = "never";
    CHECK(check_liveness(netsim::simulate(c), 0).pass);
}

TEST_CASE("lock invariant is vacuous for attacked epochs in regular mode") {
    auto c = test::base_positive(21);
    c.adversary = AdversaryMode::Equivocate;
    c.byzantine = {0, 3};
    const auto t = netsim::simulate(c);
    CHECK(check_lock_invariant(t).pass);
}

TEST_CASE("a truncated trace fails availability as horizon-limited") {
    auto c = test::base_positive();
    c.max_time = from_ms(700);
    const auto v = check_availability(netsim::simulate(c));
    CHECK_FALSE(v.pass);
    CHECK(v.detail.find("horizon") != std::string::npos);
}

TEST_CASE("a decision that precedes its block still satisfies availability") {
    auto c = test::base_positive(31);
    c.gst = from_ms(600000);
    c.dist_l_pre = "lognormal:300:8000";
    c.epochs = 25;
    const auto t = netsim::simulate(c);
    std::map<std::pair<std::uint32_t, BlockId>, std::int64_t> decided;
    std::size_t early = 0;
    for (const auto& r : t.records) {
        if (r.kind == TraceKind::Decision) decided.emplace(std::make_pair(r.replica, *r.block), r.time);
        if (r.kind == TraceKind::Store && decided.count({r.replica, *r.block})) ++early;
    }
    CHECK(early > 0);
    CHECK(check_availability(t).pass);
    CHECK(check_safety(t).pass);
}

TEST_CASE("a corrupted payload fails validity") {
    auto t = netsim::simulate(test::base_positive());
    for (auto& r : t.records)
        if (r.kind == TraceKind::Commit && r.replica == 0 && r.height == 2u) *r.computed ^= 1;
    CHECK_FALSE(check_validity(t).pass);
}

TEST_CASE("a genesis-only run is valid") {
    auto c = test::base_positive();
    c.epochs = 1;
    const auto t = netsim::simulate(c);
    CHECK(check_validity(t).pass);
    CHECK(metrics(t).committed_blocks == 1);
}

TEST_CASE("unknown check names are rejected") { CHECK_THROWS_AS(run_checks(Trace{}, {"nope"}), std::invalid_argument); }

TEST_CASE("regular-path latency tends to 2 delta_s as delays vanish") {
    auto c = test::base_positive();
    c.dist_s = "fixed:0.001";
    c.dist_l = "fixed:0.001";
    c.start_stagger = Duration{0};
    const auto m = metrics(netsim::simulate(c));
    CHECK(m.latencies_ms.size() == c.epochs);
    CHECK(m.mean_latency_ms == doctest::Approx(200.002).epsilon(1e-9));
}

TEST_CASE("fast-path latency is one large plus one small delay") {
    auto c = test::base_positive();
    c.dist_s = "fixed:10";
    c.dist_l = "fixed:50";
    c.start_stagger = Duration{0};
    c.fast_path = true;
    const auto m = metrics(netsim::simulate(c));
    CHECK(m.mean_latency_ms == doctest::Approx(60));
    CHECK(m.p99_latency_ms == doctest::Approx(60));
    CHECK(m.committed_blocks == c.epochs);
    CHECK(m.throughput_bps > 0);
}

TEST_CASE("no commits: empty latency set and zero throughput") {
    auto c = test::base_positive();
    c.gst.reset();
    c.dist_l_pre = "never";
    const auto m = metrics(netsim::simulate(c));
    CHECK(m.latencies_ms.empty());
    CHECK(m.committed_blocks == 0);
    CHECK(m.throughput_bps == 0);
    for (const auto& e : m.epochs) CHECK(e.outcome != "committed");
}

TEST_CASE("epoch outcomes name the misbehavior") {
    auto c = test::base_positive(41);
    c.adversary = AdversaryMode::SilentLeader;
    c.byzantine = {2};
    const auto m = metrics(netsim::simulate(c));
    REQUIRE(m.epochs.size() == c.epochs);
    for (const auto& e : m.epochs) {
        if (e.leader == 2) {
            CHECK(e.outcome == "silence");
            CHECK_FALSE(e.honest_leader);
        } else {
            CHECK(e.outcome == "committed");
        }
    }
    const auto j = to_json(m);
    CHECK(j["epochs"].size() == c.epochs);
    CHECK(j["latency_ms"]["count"] == m.latencies_ms.size());
}
