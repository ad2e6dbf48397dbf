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

#include <map>
#include <set>

#include "alterbft/checker.hpp"
#include "alterbft/netsim.hpp"
#include "helpers.hpp"

using namespace alterbft;
using namespace alterbft::netsim;

namespace {

std::set<Epoch> epochs_with(const Trace& t, TraceKind kind, std::optional<CertKind> cert = std::nullopt) {
    std::set<Epoch> out;
    for (const auto& r : t.records)
        if (r.kind == kind && r.epoch && (!cert || r.cert == cert)) out.insert(*r.epoch);
    return out;
}

}  // namespace

TEST_CASE("sampler specs") {
    Rng rng(1);
    CHECK(*parse_sampler("fixed:10")->sample(rng) == from_ms(10));
    const auto u = parse_sampler("uniform:5:6");
    for (int i = 0; i < 100; ++i) {
        const auto d = *u->sample(rng);
        CHECK(d >= from_ms(5));
        CHECK(d <= from_ms(6));
    }
    CHECK_FALSE(parse_sampler("never")->sample(rng));
    const auto ln = parse_sampler("lognormal:10:1000", from_ms(30));
    for (int i = 0; i < 1000; ++i) CHECK(*ln->sample(rng) <= from_ms(30));
    CHECK_THROWS(parse_sampler("gauss:1"));
    CHECK_THROWS(parse_sampler("uniform:6:5"));
    CHECK_THROWS(parse_sampler("fixed:x"));
    CHECK_THROWS(parse_sampler("empirical:/nonexistent"));
}

TEST_CASE("default bounded sampler stays within its bound with median near bound/4") {
    Rng rng(3);
    const auto s = default_bounded_sampler(from_ms(100));
    std::vector<double> v;
    for (int i = 0; i < 20000; ++i) {
        const auto d = *s->sample(rng);
        CHECK(d <= from_ms(100));
        v.push_back(to_ms(d));
    }
    std::sort(v.begin(), v.end());
    CHECK(v[v.size() / 2] == doctest::Approx(25).epsilon(0.05));
}

TEST_CASE("'never' is only accepted before GST") {
    auto c = test::small_scenario();
    c.dist_s = "never";
    CHECK_THROWS_AS(LatencyConfig::from_scenario(c), ConfigError);
    c.dist_s.clear();
    c.dist_l_pre = "never";
    CHECK_NOTHROW(LatencyConfig::from_scenario(c));
}

TEST_CASE("honest deliveries respect the class bounds around GST") {
    auto c = test::small_scenario(4);
    c.gst = from_ms(10000);
    c.dist_l_pre = "lognormal:4000:40000";
    c.epochs = 40;
    const auto t = simulate(c);
    std::size_t pre = 0, post = 0, small = 0;
    for (const auto& r : t.records) {
        if (r.kind != TraceKind::Deliver || *r.from == r.replica) continue;
        const auto d = r.time - *r.sent;
        CHECK(d > 0);
        if (r.cls == MessageClass::Small) {
            CHECK(d <= from_ms(100).count());
            ++small;
        } else if (*r.sent < from_ms(10000).count()) {
            CHECK(r.time <= from_ms(10500).count());
            ++pre;
        } else {
            CHECK(d <= from_ms(500).count());
            ++post;
        }
    }
    CHECK(small > 0);
    CHECK(pre > 0);
    CHECK(post > 0);
}

TEST_CASE("same seed, same trace") {
    auto c = test::small_scenario(42);
    c.adversary = AdversaryMode::Equivocate;
    c.byzantine = {1};
    CHECK(to_jsonl(simulate(c)) == to_jsonl(simulate(c)));
    auto d = c;
    d.seed = 43;
    CHECK(to_jsonl(simulate(c)) != to_jsonl(simulate(d)));
}

TEST_CASE("f = 0 commits every epoch") {
    ScenarioConfig c;
    c.n = 4;
    c.f = 0;
    c.epochs = 20;
    c.payload_size = 1024;
    c.scheme = "mac";
    const auto t = simulate(c);
    std::map<std::uint32_t, std::uint64_t> heights;
    for (const auto& r : t.records)
        if (r.kind == TraceKind::Commit) heights[r.replica] = std::max(heights[r.replica], *r.height);
    REQUIRE(heights.size() == 4);
    for (const auto& [r, h] : heights) CHECK(h == 20);
}

TEST_CASE("a single replica runs alone") {
    ScenarioConfig c;
    c.n = 1;
    c.f = 0;
    c.epochs = 5;
    c.payload_size = 256;
    c.scheme = "mac";
    const auto t = simulate(c);
    for (const auto& v : checker::run_checks(t, {"all"})) CHECK_MESSAGE(v.pass, v.name << ": " << v.detail);
}

TEST_CASE("silent leader yields a silence certificate in its epoch") {
    auto c = test::small_scenario();
    c.adversary = AdversaryMode::SilentLeader;
    c.byzantine = {3};
    c.silent_epochs = {3};
    const auto t = simulate(c);
    const auto silenced = epochs_with(t, TraceKind::StateChange, CertKind::Silence);
    CHECK(silenced.count(3));
    CHECK(silenced.size() == 1);

    // Every honest replica leaves epoch 3 within delta_l + 7 delta_s of the first honest entry.
    std::int64_t first = INT64_MAX;
    std::map<std::uint32_t, std::int64_t> next;
    for (const auto& r : t.records) {
        if (r.kind != TraceKind::EpochStart || r.replica == 3) continue;
        if (*r.epoch == 3) first = std::min(first, r.time);
        if (*r.epoch == 4) next.try_emplace(r.replica, r.time);
    }
    REQUIRE(next.size() == 4);
    for (const auto& [r, time] : next) CHECK(time - first <= (from_ms(500) + 7 * from_ms(100)).count());
}

TEST_CASE("equivocating leader under the fast path: equivocation detected, no direct commit") {
    auto c = test::small_scenario(5);
    c.adversary = AdversaryMode::Equivocate;
    c.byzantine = {2};
    c.fast_path = true;
    const auto t = simulate(c);
    const auto equiv = epochs_with(t, TraceKind::StateChange, CertKind::Equivocation);
    const auto decided = epochs_with(t, TraceKind::Decision);
    for (Epoch e = 2; e < c.epochs; e += c.n) {
        CHECK(equiv.count(e));
        CHECK_FALSE(decided.count(e));
    }
    for (const auto& v : checker::run_checks(t, {"safety", "lock", "validity"})) CHECK_MESSAGE(v.pass, v.detail);
}

TEST_CASE("crashed replicas do not stop honest leaders") {
    auto c = test::small_scenario(6);
    c.adversary = AdversaryMode::Crash;
    c.byzantine = {0, 4};
    const auto t = simulate(c);
    const auto decided = epochs_with(t, TraceKind::Decision);
    for (Epoch e = 0; e < c.epochs; ++e)
        if (e % 5 != 0 && e % 5 != 4) CHECK(decided.count(e));
    for (const auto& v : checker::run_checks(t, {"all"})) CHECK_MESSAGE(v.pass, v.name << ": " << v.detail);
}

TEST_CASE("trace properties over randomized runs") {
    const AdversaryMode modes[] = {AdversaryMode::None, AdversaryMode::SilentLeader, AdversaryMode::Equivocate,
                                   AdversaryMode::Crash, AdversaryMode::DelayL};
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        auto c = test::small_scenario(seed);
        c.adversary = modes[seed % 5];
        c.byzantine = {static_cast<std::uint32_t>(seed % 5), static_cast<std::uint32_t>((seed + 2) % 5)};
        c.fast_path = seed % 2;
        c.gst = from_ms(static_cast<double>(seed % 3) * 1500);
        c.crash_time = from_ms(700);
        const auto t = simulate(c);
        std::map<std::uint32_t, Epoch> lock_epoch, entered;
        std::set<std::pair<std::uint32_t, Epoch>> changed;
        for (const auto& r : t.records) {
            if (c.is_byzantine(r.replica)) continue;
            if (r.kind == TraceKind::Lock) {
                // Locks never move backwards.
                auto [it, fresh] = lock_epoch.try_emplace(r.replica, *r.cert_epoch);
                if (!fresh) {
                    CHECK(*r.cert_epoch > it->second);
                    it->second = *r.cert_epoch;
                }
            }
            if (r.kind == TraceKind::StateChange) {
                // Only one transition out of ACTIVE per epoch.
                CHECK(changed.insert({r.replica, *r.epoch}).second);
            }
            if (r.kind == TraceKind::EpochStart) {
                auto [it, fresh] = entered.try_emplace(r.replica, *r.epoch);
                if (!fresh) {
                    CHECK(*r.epoch > it->second);
                    it->second = *r.epoch;
                }
            }
        }
        for (const auto& v : checker::run_checks(t, {"safety", "lock", "validity", "epoch_sync", "bounds"}))
            CHECK_MESSAGE(v.pass, "seed " << seed << " " << v.name << ": " << v.detail);
    }
}

TEST_CASE("runs stop at max_time with a truncated trace") {
    auto c = test::small_scenario();
    c.max_time = from_ms(300);
    const auto t = simulate(c);
    CHECK_FALSE(t.complete);
    CHECK(t.end_time == from_ms(300).count());
    for (const auto& r : t.records) CHECK(r.time <= from_ms(300).count());
}

TEST_CASE("a simulator runs once") {
    Simulator sim(test::small_scenario());
    sim.run();
    CHECK_THROWS_AS(sim.run(), std::logic_error);
}
