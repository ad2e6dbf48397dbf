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

#pragma once

// Positive runs and one crafted counterexample trace per checker.

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "alterbft/checker.hpp"
#include "alterbft/netsim.hpp"

namespace alterbft::test {

inline ScenarioConfig base_positive(std::uint64_t seed = 11) {
    ScenarioConfig c;
    c.n = 5;
    c.f = 2;
    c.epochs = 15;
    c.payload_size = 8 * 1024;
    c.scheme = "mac";
    c.seed = seed;
    return c;
}

// Runs that every checker must accept.
inline std::vector<std::pair<std::string, Trace>> positive_traces() {
    std::vector<std::pair<std::string, Trace>> out;
    out.emplace_back("failure-free", netsim::simulate(base_positive()));
    auto fast = base_positive(12);
    fast.fast_path = true;
    out.emplace_back("fast-path", netsim::simulate(fast));
    auto eq = base_positive(13);
    eq.adversary = AdversaryMode::Equivocate;
    eq.byzantine = {1, 3};
    out.emplace_back("equivocation", netsim::simulate(eq));
    auto crash = base_positive(14);
    crash.adversary = AdversaryMode::Crash;
    crash.byzantine = {0, 2};
    crash.crash_time = from_ms(400);
    crash.gst = from_ms(1500);
    out.emplace_back("crash", netsim::simulate(crash));
    return out;
}

namespace detail {

inline TraceRecord& nth(Trace& t, const std::function<bool(const TraceRecord&)>& pred, std::size_t n = 0) {
    for (auto& r : t.records)
        if (pred(r) && n-- == 0) return r;
    throw std::logic_error("crafted trace: no matching record");
}

inline void erase_if(Trace& t, const std::function<bool(const TraceRecord&)>& pred) {
    t.records.erase(std::remove_if(t.records.begin(), t.records.end(), pred), t.records.end());
}

}  // namespace detail

// Replica 1 commits a different block at height 2.
inline Trace negative_safety() {
    auto t = netsim::simulate(base_positive());
    auto& r = detail::nth(t, [](const TraceRecord& r) {
        return r.kind == TraceKind::Commit && r.replica == 1 && r.height == 2u;
    });
    r.block->digest[0] ^= 0xff;
    return t;
}

// Replica 2 enters epoch 4 long after the others.
inline Trace negative_epoch_sync() {
    auto t = netsim::simulate(base_positive());
    std::int64_t latest = 0;
    for (const auto& r : t.records)
        if (r.kind == TraceKind::EpochStart && r.epoch == 4u) latest = std::max(latest, r.time);
    auto& r = detail::nth(t, [](const TraceRecord& r) { return r.kind == TraceKind::EpochStart && r.replica == 2 && r.epoch == 4u; });
    r.time = latest + from_ms(150).count();
    return t;
}

// Replica 3 never decides in epoch 6 (honest leader, after GST).
inline Trace negative_liveness() {
    auto t = netsim::simulate(base_positive());
    detail::erase_if(t, [](const TraceRecord& r) { return r.kind == TraceKind::Decision && r.replica == 3 && r.epoch == 6u; });
    return t;
}

// Replica 4 never locks on the block decided in epoch 5.
inline Trace negative_lock() {
    auto t = netsim::simulate(base_positive());
    detail::erase_if(t, [](const TraceRecord& r) {
        return r.kind == TraceKind::Lock && r.replica == 4 && r.cert_epoch == 5u;
    });
    return t;
}

// Replica 0 never stores the block committed at height 3.
inline Trace negative_availability() {
    auto t = netsim::simulate(base_positive());
    const auto id = *detail::nth(t, [](const TraceRecord& r) { return r.kind == TraceKind::Commit && r.height == 3u; }).block;
    detail::erase_if(t, [&](const TraceRecord& r) { return r.kind == TraceKind::Store && r.replica == 0 && r.block == id; });
    return t;
}

// Replica 2's commit at height 4 names the wrong predecessor.
inline Trace negative_validity() {
    auto t = netsim::simulate(base_positive());
    auto& r = detail::nth(t, [](const TraceRecord& r) {
        return r.kind == TraceKind::Commit && r.replica == 2 && r.height == 4u;
    });
    r.prev->digest[5] ^= 0x01;
    return t;
}

// One honest vote takes longer than delta_s.
inline Trace negative_bounds() {
    auto t = netsim::simulate(base_positive());
    auto& r = detail::nth(t, [](const TraceRecord& r) {
        return r.kind == TraceKind::Deliver && r.cls == MessageClass::Small && r.from != r.replica;
    });
    r.time = *r.sent + from_ms(100).count() + 1;
    return t;
}

// Replica 1 sends SILENCE in an honest-leader epoch after GST.
inline Trace negative_silence() {
    auto t = netsim::simulate(base_positive());
    auto at = std::find_if(t.records.begin(), t.records.end(), [](const TraceRecord& r) {
        return r.kind == TraceKind::EpochStart && r.replica == 1 && r.epoch == 3u;
    });
    TraceRecord s;
    s.time = at->time + 1;
    s.replica = 1;
    s.kind = TraceKind::Send;
    s.msg = MessageType::Silence;
    s.epoch = 3;
    s.signer = 1;
    s.cls = MessageClass::Small;
    s.bytes = 79;
    t.records.insert(at + 1, s);
    return t;
}

inline std::map<std::string, std::function<Trace()>> negative_builders() {
    return {{"safety", negative_safety},         {"epoch_sync", negative_epoch_sync},
            {"liveness", negative_liveness},     {"lock", negative_lock},
            {"availability", negative_availability}, {"validity", negative_validity},
            {"bounds", negative_bounds},         {"silence", negative_silence}};
}

}  // namespace alterbft::test
