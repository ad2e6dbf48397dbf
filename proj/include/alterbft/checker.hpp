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

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "alterbft/trace.hpp"

namespace alterbft::checker {

struct Verdict {
    std::string name;
    bool pass = true;
    // First counterexample, or a short summary on success.
    std::string detail;
};

nlohmann::json to_json(const Verdict& v);

// Honest replicas agree on the block at every height; chains are prefixes.
Verdict check_safety(const Trace& t);
// Honest replicas enter each common epoch within delta_s (epoch 0: the start stagger).
Verdict check_epoch_sync(const Trace& t);
// Honest-leader epochs that start after GST commit directly everywhere; heights grow.
// horizon_epochs defaults to the scenario's epoch count.
Verdict check_liveness(const Trace& t, std::optional<Epoch> horizon_epochs = std::nullopt);
// A direct commit of B in e implies no other block is certified in e and every
// honest replica locks on B while in e.
Verdict check_lock_invariant(const Trace& t);
// Every committed block is stored by every honest replica by the end.
Verdict check_availability(const Trace& t);
// Committed blocks pass valid() and link to their predecessor.
Verdict check_validity(const Trace& t);
// Honest-to-honest deliveries respect the class bounds.
Verdict check_bounds(const Trace& t);
// No honest SILENCE in honest-leader epochs that start after GST.
Verdict check_silence(const Trace& t);

const std::vector<std::string>& check_names();
// Unknown names throw std::invalid_argument; "all" expands to every check.
std::vector<Verdict> run_checks(const Trace& t, const std::vector<std::string>& names);

struct EpochOutcome {
    Epoch epoch = 0;
    std::uint32_t leader = 0;
    bool honest_leader = true;
    // "committed", "equivocation", "silence", "certified" or "none".
    std::string outcome;
    std::optional<double> latency_ms;
};

struct Metrics {
    std::vector<double> latencies_ms;
    double mean_latency_ms = 0;
    double p50_latency_ms = 0;
    double p90_latency_ms = 0;
    double p99_latency_ms = 0;
    double max_latency_ms = 0;
    std::uint64_t committed_blocks = 0;
    double duration_s = 0;
    double throughput_bps = 0;  // blocks per simulated second
    std::vector<EpochOutcome> epochs;
};

// Latency is leader-side: the leader's PROPOSE send to the leader's decision.
Metrics metrics(const Trace& t);
nlohmann::json to_json(const Metrics& m);

}  // namespace alterbft::checker
