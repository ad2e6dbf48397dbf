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

#include "alterbft/checker.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "alterbft/latmodel.hpp"
#include "alterbft/scenario.hpp"

namespace alterbft::checker {

namespace {

struct View {
    ScenarioConfig cfg;
    std::vector<std::uint32_t> honest;
    std::vector<bool> is_honest;

    explicit View(const Trace& t) : cfg(scenario_from_json(t.header)) {
        is_honest.assign(cfg.n, true);
        for (auto b : cfg.byzantine)
            if (b < cfg.n) is_honest[b] = false;
        for (std::uint32_t r = 0; r < cfg.n; ++r)
            if (is_honest[r]) honest.push_back(r);
    }
    bool honest_replica(std::uint32_t r) const { return r < is_honest.size() && is_honest[r]; }
    bool honest_leader(Epoch e) const { return honest_replica(leader_of(e, cfg.n).index); }
};

std::string hex8(const std::optional<BlockId>& id) { return id ? id->short_hex() : std::string("-"); }

Verdict ok(std::string name, std::string detail) { return {std::move(name), true, std::move(detail)}; }
Verdict fail(std::string name, std::string detail) { return {std::move(name), false, std::move(detail)}; }

// First EPOCH_START time per (replica, epoch).
std::map<Epoch, std::map<std::uint32_t, std::int64_t>> epoch_starts(const Trace& t, const View& v) {
    std::map<Epoch, std::map<std::uint32_t, std::int64_t>> out;
    for (const auto& r : t.records) {
        if (r.kind != TraceKind::EpochStart || !r.epoch || !v.honest_replica(r.replica)) continue;
        out[*r.epoch].try_emplace(r.replica, r.time);
    }
    return out;
}

// Honest-leader epochs below `horizon` whose first honest start is at or after GST.
std::vector<Epoch> post_gst_honest_epochs(const Trace& t, const View& v, Epoch horizon) {
    std::vector<Epoch> out;
    if (!v.cfg.gst) return out;
    const auto starts = epoch_starts(t, v);
    for (const auto& [e, by] : starts) {
        if (e >= horizon || by.empty() || !v.honest_leader(e)) continue;
        std::int64_t first = by.begin()->second;
        for (const auto& [_, time] : by) first = std::min(first, time);
        if (first >= v.cfg.gst->count()) out.push_back(e);
    }
    return out;
}

std::map<std::uint32_t, std::uint64_t> final_heights(const Trace& t, const View& v) {
    std::map<std::uint32_t, std::uint64_t> h;
    for (auto r : v.honest) h[r] = 0;
    for (const auto& r : t.records)
        if (r.kind == TraceKind::Commit && r.height && v.honest_replica(r.replica))
            h[r.replica] = std::max(h[r.replica], *r.height);
    return h;
}

}  // namespace

nlohmann::json to_json(const Verdict& v) { return {{"check", v.name}, {"pass", v.pass}, {"detail", v.detail}}; }

Verdict check_safety(const Trace& t) {
    const View v(t);
    std::map<std::uint64_t, std::pair<std::uint32_t, BlockId>> at_height;
    std::map<std::uint32_t, std::uint64_t> last;
    std::size_t commits = 0;
    for (const auto& r : t.records) {
        if (r.kind != TraceKind::Commit || !v.honest_replica(r.replica)) continue;
        if (!r.height || !r.block) return fail("safety", fmt::format("replica {} COMMIT without height/block", r.replica));
        ++commits;
        auto& prev_h = last[r.replica];
        if (*r.height != prev_h + 1)
            return fail("safety", fmt::format("replica {} committed height {} after height {}", r.replica,
                                              *r.height, prev_h));
        prev_h = *r.height;
        auto [it, fresh] = at_height.try_emplace(*r.height, r.replica, *r.block);
        if (!fresh && it->second.second != *r.block)
            return fail("safety", fmt::format("height {}: replica {} committed {} but replica {} committed {}",
                                              *r.height, it->second.first, it->second.second.short_hex(),
                                              r.replica, r.block->short_hex()));
    }
    return ok("safety", fmt::format("{} commits across {} heights agree", commits, at_height.size()));
}

Verdict check_epoch_sync(const Trace& t) {
    const View v(t);
    const auto starts = epoch_starts(t, v);
    std::size_t checked = 0;
    for (const auto& [e, by] : starts) {
        if (by.size() != v.honest.size()) continue;
        std::int64_t lo = by.begin()->second, hi = lo;
        std::uint32_t lo_r = by.begin()->first, hi_r = lo_r;
        for (const auto& [r, time] : by) {
            if (time < lo) lo = time, lo_r = r;
            if (time > hi) hi = time, hi_r = r;
        }
        const std::int64_t bound = e == 0 ? v.cfg.stagger().count() : v.cfg.delta_s.count();
        ++checked;
        if (hi - lo > bound)
            return fail("epoch_sync", fmt::format("epoch {}: replica {} entered at {}us, replica {} at {}us "
                                                  "(spread {}us > {}us)",
                                                  e, lo_r, lo, hi_r, hi, hi - lo, bound));
    }
    return ok("epoch_sync", fmt::format("{} epochs within bound", checked));
}

Verdict check_liveness(const Trace& t, std::optional<Epoch> horizon_epochs) {
    const View v(t);
    const Epoch horizon = std::min<Epoch>(horizon_epochs.value_or(v.cfg.epochs), v.cfg.epochs);
    if (horizon == 0) return ok("liveness", "empty horizon");

    const auto starts = epoch_starts(t, v);
    std::set<std::pair<Epoch, std::uint32_t>> decided;
    for (const auto& r : t.records)
        if (r.kind == TraceKind::Decision && r.epoch && v.honest_replica(r.replica)) decided.insert({*r.epoch, r.replica});

    std::size_t checked = 0;
    const auto epochs = post_gst_honest_epochs(t, v, horizon);
    for (Epoch e : epochs) {
        // In a truncated trace, only epochs that every honest replica left long enough ago count.
        if (!t.complete) {
            auto next = starts.find(e + 1);
            if (next == starts.end() || next->second.size() != v.honest.size()) continue;
            std::int64_t latest = 0;
            for (const auto& [_, time] : next->second) latest = std::max(latest, time);
            if (latest + 2 * v.cfg.delta_s.count() > t.end_time) continue;
        }
        ++checked;
        for (auto r : v.honest)
            if (!decided.count({e, r}))
                return fail("liveness", fmt::format("epoch {} (leader {}) started after GST but replica {} "
                                                    "did not commit directly",
                                                    e, leader_of(e, v.cfg.n).index, r));
    }

    const auto heights = final_heights(t, v);
    const std::uint64_t need = std::max<std::uint64_t>(1, checked);
    for (const auto& [r, h] : heights)
        if (h < need)
            return fail("liveness", fmt::format("stalled: replica {} has committed height {} (need {})", r, h, need));
    return ok("liveness", fmt::format("{} post-GST honest-leader epochs decided everywhere", checked));
}

Verdict check_lock_invariant(const Trace& t) {
    const View v(t);
    // Distinct vote signers per (epoch, block) seen on the wire.
    std::map<std::pair<Epoch, BlockId>, std::set<std::uint32_t>> signers;
    std::map<std::pair<Epoch, BlockId>, std::set<std::uint32_t>> locked;
    std::map<Epoch, std::pair<std::uint32_t, BlockId>> decisions;
    for (const auto& r : t.records) {
        if (r.kind == TraceKind::Send && r.msg == MessageType::Vote && r.epoch && r.block && r.signer)
            signers[{*r.epoch, *r.block}].insert(*r.signer);
        if (r.kind == TraceKind::Lock && r.epoch && r.cert_epoch && r.block && *r.epoch == *r.cert_epoch &&
            v.honest_replica(r.replica))
            locked[{*r.epoch, *r.block}].insert(r.replica);
        if (r.kind == TraceKind::Decision && r.epoch && r.block && v.honest_replica(r.replica))
            decisions.try_emplace(*r.epoch, r.replica, *r.block);
    }
    for (const auto& [e, dec] : decisions) {
        const auto& [who, id] = dec;
        for (auto it = signers.lower_bound({e, BlockId{}}); it != signers.end() && it->first.first == e; ++it) {
            if (it->first.second == id) continue;
            if (it->second.size() >= v.cfg.f + 1)
                return fail("lock", fmt::format("epoch {}: replica {} committed {} but {} has {} vote signers",
                                                e, who, id.short_hex(), it->first.second.short_hex(),
                                                it->second.size()));
        }
        const auto& lk = locked[{e, id}];
        for (auto r : v.honest)
            if (!lk.count(r))
                return fail("lock", fmt::format("epoch {}: replica {} committed {} but replica {} never locked "
                                                "on it while in epoch {}",
                                                e, who, id.short_hex(), r, e));
    }
    return ok("lock", fmt::format("{} direct commits checked", decisions.size()));
}

Verdict check_availability(const Trace& t) {
    const View v(t);
    if (!t.complete) return fail("availability", "trace truncated (horizon-limited)");
    std::set<BlockId> committed;
    std::set<std::pair<std::uint32_t, BlockId>> stored;
    for (const auto& r : t.records) {
        if (!r.block || !v.honest_replica(r.replica)) continue;
        if (r.kind == TraceKind::Commit) committed.insert(*r.block);
        if (r.kind == TraceKind::Store) stored.insert({r.replica, *r.block});
    }
    for (const auto& id : committed)
        for (auto r : v.honest)
            if (!stored.count({r, id}))
                return fail("availability", fmt::format("committed block {} never stored by replica {}",
                                                        id.short_hex(), r));
    return ok("availability", fmt::format("{} committed blocks stored everywhere", committed.size()));
}

Verdict check_validity(const Trace& t) {
    const View v(t);
    std::map<std::uint32_t, std::map<std::uint64_t, BlockId>> chains;
    std::size_t n = 0;
    for (const auto& r : t.records) {
        if (r.kind != TraceKind::Commit || !v.honest_replica(r.replica)) continue;
        ++n;
        if (!r.checksum || !r.computed || *r.checksum != *r.computed)
            return fail("validity", fmt::format("replica {} committed {} with a bad payload checksum", r.replica,
                                                hex8(r.block)));
        if (!r.height || !r.block) return fail("validity", "COMMIT without height/block");
        auto& chain = chains[r.replica];
        if (*r.height == 1) {
            if (r.prev)
                return fail("validity", fmt::format("replica {} committed {} at height 1 with a predecessor",
                                                    r.replica, r.block->short_hex()));
        } else {
            auto below = chain.find(*r.height - 1);
            if (!r.prev || below == chain.end() || below->second != *r.prev)
                return fail("validity", fmt::format("replica {} committed {} at height {} with prev {} not "
                                                    "matching height {}",
                                                    r.replica, r.block->short_hex(), *r.height, hex8(r.prev),
                                                    *r.height - 1));
        }
        chain[*r.height] = *r.block;
    }
    return ok("validity", fmt::format("{} committed blocks valid", n));
}

Verdict check_bounds(const Trace& t) {
    const View v(t);
    const std::int64_t ds = v.cfg.delta_s.count(), dl = v.cfg.delta_l.count();
    std::size_t n = 0;
    for (const auto& r : t.records) {
        if (r.kind != TraceKind::Deliver || !r.from || !r.sent || !r.cls) continue;
        if (*r.from == r.replica || !v.honest_replica(*r.from) || !v.honest_replica(r.replica)) continue;
        ++n;
        const std::int64_t d = r.time - *r.sent;
        if (d < 0) return fail("bounds", fmt::format("delivery {} -> {} before its send", *r.from, r.replica));
        if (*r.cls == MessageClass::Small && d > ds)
            return fail("bounds", fmt::format("S message {} -> {} sent at {}us took {}us > {}us", *r.from,
                                              r.replica, *r.sent, d, ds));
        if (*r.cls == MessageClass::Large && v.cfg.gst) {
            const std::int64_t deadline = std::max(*r.sent, v.cfg.gst->count()) + dl;
            if (r.time > deadline)
                return fail("bounds", fmt::format("L message {} -> {} sent at {}us delivered at {}us > {}us",
                                                  *r.from, r.replica, *r.sent, r.time, deadline));
        }
    }
    return ok("bounds", fmt::format("{} honest deliveries within bounds", n));
}

Verdict check_silence(const Trace& t) {
    const View v(t);
    const auto epochs = post_gst_honest_epochs(t, v, v.cfg.epochs);
    const std::set<Epoch> watched(epochs.begin(), epochs.end());
    for (const auto& r : t.records)
        if (r.kind == TraceKind::Send && r.msg == MessageType::Silence && r.epoch && watched.count(*r.epoch) &&
            v.honest_replica(r.replica))
            return fail("silence", fmt::format("replica {} sent SILENCE in post-GST honest-leader epoch {}",
                                               r.replica, *r.epoch));
    return ok("silence", fmt::format("{} post-GST honest-leader epochs without silence", watched.size()));
}

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names{"safety", "epoch_sync", "liveness", "lock",
                                                "availability", "validity", "bounds", "silence"};
    return names;
}

std::vector<Verdict> run_checks(const Trace& t, const std::vector<std::string>& names) {
    std::vector<std::string> want;
    for (const auto& n : names) {
        if (n == "all")
            want.insert(want.end(), check_names().begin(), check_names().end());
        else
            want.push_back(n);
    }
    std::vector<Verdict> out;
    for (const auto& n : want) {
        if (n == "safety") out.push_back(check_safety(t));
        else if (n == "epoch_sync") out.push_back(check_epoch_sync(t));
        else if (n == "liveness") out.push_back(check_liveness(t));
        else if (n == "lock") out.push_back(check_lock_invariant(t));
        else if (n == "availability") out.push_back(check_availability(t));
        else if (n == "validity") out.push_back(check_validity(t));
        else if (n == "bounds") out.push_back(check_bounds(t));
        else if (n == "silence") out.push_back(check_silence(t));
        else throw std::invalid_argument("unknown check: " + n);
    }
    return out;
}

Metrics metrics(const Trace& t) {
    const View v(t);
    Metrics m;
    std::map<Epoch, std::int64_t> proposed;
    std::map<Epoch, std::int64_t> decided_by_leader;
    std::set<Epoch> decided_any, equiv, silence, certified;
    for (const auto& r : t.records) {
        if (!r.epoch) continue;
        const Epoch e = *r.epoch;
        const bool leader = r.replica == leader_of(e, v.cfg.n).index;
        if (r.kind == TraceKind::Send && r.msg == MessageType::Propose && leader) proposed.try_emplace(e, r.time);
        if (r.kind == TraceKind::Decision && v.honest_replica(r.replica)) {
            decided_any.insert(e);
            if (leader) decided_by_leader.try_emplace(e, r.time);
        }
        if (r.kind == TraceKind::Send && r.msg == MessageType::QuitEpoch && r.cert) {
            if (*r.cert == CertKind::Equivocation) equiv.insert(e);
            if (*r.cert == CertKind::Silence) silence.insert(e);
            if (*r.cert == CertKind::Block) certified.insert(e);
        }
    }
    Epoch last = 0;
    for (const auto& r : t.records)
        if (r.kind == TraceKind::EpochStart && r.epoch && *r.epoch < v.cfg.epochs) last = std::max(last, *r.epoch + 1);
    for (Epoch e = 0; e < last; ++e) {
        EpochOutcome o;
        o.epoch = e;
        o.leader = leader_of(e, v.cfg.n).index;
        o.honest_leader = v.honest_leader(e);
        if (decided_any.count(e)) o.outcome = "committed";
        else if (equiv.count(e)) o.outcome = "equivocation";
        else if (silence.count(e)) o.outcome = "silence";
        else if (certified.count(e)) o.outcome = "certified";
        else o.outcome = "none";
        auto p = proposed.find(e);
        auto d = decided_by_leader.find(e);
        if (o.honest_leader && p != proposed.end() && d != decided_by_leader.end()) {
            o.latency_ms = static_cast<double>(d->second - p->second) / 1000.0;
            m.latencies_ms.push_back(*o.latency_ms);
        }
        m.epochs.push_back(o);
    }
    if (!m.latencies_ms.empty()) {
        auto sorted = m.latencies_ms;
        std::sort(sorted.begin(), sorted.end());
        double sum = 0;
        for (double x : sorted) sum += x;
        m.mean_latency_ms = sum / static_cast<double>(sorted.size());
        m.p50_latency_ms = latmodel::percentile_sorted(sorted, 50);
        m.p90_latency_ms = latmodel::percentile_sorted(sorted, 90);
        m.p99_latency_ms = latmodel::percentile_sorted(sorted, 99);
        m.max_latency_ms = sorted.back();
    }
    for (const auto& [_, h] : final_heights(t, v)) m.committed_blocks = std::max(m.committed_blocks, h);
    m.duration_s = static_cast<double>(t.end_time) / 1e6;
    if (m.duration_s > 0) m.throughput_bps = static_cast<double>(m.committed_blocks) / m.duration_s;
    return m;
}

nlohmann::json to_json(const Metrics& m) {
    nlohmann::json epochs = nlohmann::json::array();
    for (const auto& o : m.epochs) {
        nlohmann::json j{{"epoch", o.epoch},
                         {"leader", o.leader},
                         {"honest_leader", o.honest_leader},
                         {"outcome", o.outcome}};
        if (o.latency_ms) j["latency_ms"] = *o.latency_ms;
        epochs.push_back(std::move(j));
    }
    return {{"latency_ms",
             {{"count", m.latencies_ms.size()},
              {"mean", m.mean_latency_ms},
              {"p50", m.p50_latency_ms},
              {"p90", m.p90_latency_ms},
              {"p99", m.p99_latency_ms},
              {"max", m.max_latency_ms}}},
            {"committed_blocks", m.committed_blocks},
            {"duration_s", m.duration_s},
            {"throughput_blocks_per_s", m.throughput_bps},
            {"epochs", std::move(epochs)}};
}

}  // namespace alterbft::checker
