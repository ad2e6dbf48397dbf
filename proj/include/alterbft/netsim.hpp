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

#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <variant>
#include <vector>

#include "alterbft/crypto.hpp"
#include "alterbft/replica.hpp"
#include "alterbft/rng.hpp"
#include "alterbft/scenario.hpp"
#include "alterbft/trace.hpp"

namespace alterbft::netsim {

class DelaySampler {
  public:
    virtual ~DelaySampler() = default;
    // nullopt: the message is never delivered.
    virtual std::optional<Duration> sample(Rng& rng) const = 0;
    virtual std::string describe() const = 0;
};

using SamplerPtr = std::shared_ptr<const DelaySampler>;

// Specs (milliseconds):
//   fixed:<d>  uniform:<lo>:<hi>  lognormal:<median>[:<p99.99>]  never
//   empirical:<path>[:<k>]  (k > 1 takes the max of k draws)
// Log-normal draws above `truncate_at` are redrawn.
SamplerPtr parse_sampler(const std::string& spec, std::optional<Duration> truncate_at = std::nullopt);
// Log-normal with median bound/4 and 99.99th percentile at the bound, truncated at the bound.
SamplerPtr default_bounded_sampler(Duration bound);
// Log-normal with median delta_l and 99.99th percentile at 10 delta_l, untruncated.
SamplerPtr default_pre_gst_sampler(Duration delta_l);

struct LatencyConfig {
    Duration delta_s;
    Duration delta_l;
    std::optional<SimTime> gst;
    std::size_t small_threshold = 4096;
    SamplerPtr dist_s;
    SamplerPtr dist_l_post_gst;
    SamplerPtr dist_l_pre_gst;

    static LatencyConfig from_scenario(const ScenarioConfig& cfg);
};

// Runs one scenario to completion (or to max_time) and returns its trace.
class Simulator {
  public:
    explicit Simulator(ScenarioConfig cfg);
    Simulator(const Simulator&) = delete;
    Simulator& operator=(const Simulator&) = delete;

    Trace run();

    const ScenarioConfig& config() const { return cfg_; }
    const std::vector<Replica>& replicas() const { return replicas_; }

  private:
    struct Delivery {
        ReplicaId to;
        ReplicaId from;
        MessagePtr msg;
        SimTime sent;
        MessageClass cls;
    };
    struct TimerFire {
        ReplicaId replica;
        TimerId id;
    };
    struct Boot {
        ReplicaId replica;
    };
    struct Event {
        SimTime time;
        int priority;  // deliveries and boots before timers at equal times
        std::uint64_t seq;
        std::variant<Delivery, TimerFire, Boot> what;
    };
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.time != b.time) return a.time > b.time;
            if (a.priority != b.priority) return a.priority > b.priority;
            return a.seq > b.seq;
        }
    };

    void push(SimTime t, int priority, std::variant<Delivery, TimerFire, Boot> what);
    void record(TraceRecord r);
    void dispatch(ReplicaId r, Actions actions);
    void broadcast(ReplicaId from, const Broadcast& b);
    void send(ReplicaId from, const MessagePtr& msg, MessageClass cls, std::size_t bytes,
              std::optional<ReplicaId> to);
    void schedule(ReplicaId from, ReplicaId to, const MessagePtr& msg, MessageClass cls);
    bool crashed(ReplicaId r) const;
    bool byzantine(ReplicaId r) const { return cfg_.is_byzantine(r.index); }
    bool silenced_epoch(Epoch e) const;
    void equivocate(ReplicaId leader, const Proposal& p);
    void check_collision(const Block& b);

    ScenarioConfig cfg_;
    LatencyConfig lat_;
    std::vector<crypto::KeyPair> secrets_;
    std::shared_ptr<const crypto::Keyring> keys_;
    std::vector<Replica> replicas_;
    Rng rng_;
    SimTime now_{0};
    std::uint64_t seq_ = 0;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::vector<TraceRecord> records_;
    std::map<BlockId, Block> blocks_seen_;
    bool ran_ = false;
};

Trace simulate(const ScenarioConfig& cfg);

}  // namespace alterbft::netsim
