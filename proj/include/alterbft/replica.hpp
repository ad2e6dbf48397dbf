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

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "alterbft/crypto.hpp"
#include "alterbft/trace.hpp"
#include "alterbft/types.hpp"

namespace alterbft {

struct Broadcast {
    MessagePtr msg;
    MessageClass cls = MessageClass::Small;
    std::size_t bytes = 0;
};

struct StartTimer {
    TimerId id;
    Duration duration{0};
};

// The epoch's decision was recorded (DECISION).
struct Commit {
    Epoch epoch = 0;
    BlockId id;
};

// Blocks appended to the committed chain, oldest first.
struct CommitBlocks {
    std::vector<Block> blocks;
};

using Action = std::variant<Broadcast, StartTimer, Commit, CommitBlocks>;
using Actions = std::vector<Action>;

struct ReplicaConfig {
    std::uint32_t n = 5;
    std::uint32_t f = 2;
    ReplicaId me;
    Duration delta_s = from_ms(100);
    Duration delta_l = from_ms(500);
    std::size_t small_threshold = 4096;
    bool fast_path = false;
    // After a misbehavior certificate for the current epoch, wait 2Δ_S before
    // moving on (true) or move on at once (false).
    bool wait_after_misbehavior = true;
    // Leader proposes at epoch start even when its lock is stale.
    bool skip_epoch_change_wait = false;
    // Epochs >= max_epoch are entered (and logged) but not run.
    Epoch max_epoch = std::numeric_limits<Epoch>::max();
    std::size_t payload_size = 1024;
    std::uint64_t payload_seed = 0;
};

using TraceSink = std::function<void(TraceRecord)>;
using ValidityHook = std::function<bool(const Block&)>;
using PayloadSource = std::function<Bytes(Epoch)>;

struct VoteOutcome {
    std::optional<BlockCert> block_cert;
    std::optional<EquivCert> equiv_cert;
    bool all_votes = false;
};

// One replica's protocol state. Handlers never read a clock; every effect is
// either a returned action or a trace record.
class Replica {
  public:
    Replica(ReplicaConfig cfg, std::shared_ptr<const crypto::Keyring> keys, crypto::KeyPair key,
            TraceSink sink = {});

    void set_validity_hook(ValidityHook hook) { valid_hook_ = std::move(hook); }
    void set_payload_source(PayloadSource src) { payload_source_ = std::move(src); }
    void set_trace_sink(TraceSink sink) { sink_ = std::move(sink); }

    Actions bootstrap();
    Actions handle_message(ReplicaId from, const MessagePtr& msg);
    Actions handle_timer(const TimerId& timer);

    Actions start_epoch(Epoch e);
    Actions propose();
    Actions on_proposal(const Proposal& p, const Vote& leader_vote);
    VoteOutcome accumulate_vote(const Vote& v);
    Actions on_block_certificate(const BlockCert& c);
    Actions on_commit_timer(Epoch e, const std::optional<BlockId>& id);
    Actions on_all_votes(Epoch e, const BlockId& id);
    Actions on_misbehavior(const Certificate& c);
    Actions on_certificate_timer(Epoch e);
    std::optional<SilenceCert> accumulate_silence(const SilenceMsg& s);
    Actions on_stored_block(const Block& b);

    // valid(b) for a proposal: block structure, justification, application hook.
    bool valid(const Proposal& p);

    const ReplicaConfig& config() const { return cfg_; }
    ReplicaId id() const { return cfg_.me; }
    bool started() const { return started_; }
    bool halted() const { return started_ && e_p_ >= cfg_.max_epoch; }
    Epoch epoch() const { return e_p_; }
    bool has_voted() const { return has_voted_; }
    const std::optional<BlockCert>& locked() const { return locked_; }
    std::optional<EpochState> state_of(Epoch e) const;
    std::optional<BlockId> decision_of(Epoch e) const;
    const std::vector<BlockId>& committed_chain() const { return committed_; }
    bool has_block(const BlockId& id) const { return store_.count(id) > 0; }
    const std::set<TimerId>& pending_timers() const { return pending_timers_; }

    // Deterministic rendering of the protocol state, for diffing.
    std::string snapshot() const;

  private:
    struct Key {
        Epoch epoch;
        BlockId id;
        auto operator<=>(const Key&) const = default;
    };

    void trace(TraceRecord r) const;
    Broadcast make_broadcast(Message m) const;
    Broadcast make_broadcast(const MessagePtr& m) const;
    void start_timer(Actions& out, TimerId id, Duration d);
    void broadcast_quit(Actions& out, const Certificate& c);
    void lock(const BlockCert& c);
    void set_state(Epoch e, EpochState s, std::optional<CertKind> cause = std::nullopt);
    void decide(Actions& out, Epoch e, const BlockId& id);
    void try_commit_chain(Actions& out);
    void try_vote(Actions& out);
    void buffer(ReplicaId from, const MessagePtr& msg);
    void drain_buffer(Actions& out);
    bool cert_ok(const BlockCert& c);
    bool cert_ok(const Certificate& c);
    void reject(std::string reason, const Message* m);
    void store_block(Actions& out, const Block& b);
    void append(Actions& out, Actions more) const;

    ReplicaConfig cfg_;
    std::shared_ptr<const crypto::Keyring> keys_;
    crypto::KeyPair key_;
    TraceSink sink_;
    ValidityHook valid_hook_;
    PayloadSource payload_source_;

    bool started_ = false;
    Epoch e_p_ = 0;
    bool has_voted_ = false;
    std::optional<BlockCert> locked_;
    // Highest-epoch block certificate seen from any source.
    std::optional<BlockCert> best_seen_;
    std::map<Epoch, EpochState> states_;
    std::map<Epoch, std::optional<BlockId>> decisions_;
    std::set<Epoch> proposed_;

    std::map<BlockId, Block> store_;
    std::map<BlockId, std::uint64_t> heights_;
    std::vector<BlockId> committed_;
    std::set<BlockId> committed_set_;
    std::vector<std::pair<Epoch, BlockId>> undelivered_;

    std::map<Key, std::map<ReplicaId, Vote>> votes_;
    std::map<Epoch, std::map<BlockId, Vote>> leader_votes_;
    std::map<Epoch, std::map<ReplicaId, SilenceMsg>> silences_;
    std::set<std::pair<Epoch, CertKind>> quit_sent_;
    std::set<BlockId> forwarded_;
    std::vector<Proposal> pending_proposals_;
    std::map<Epoch, std::vector<std::pair<ReplicaId, MessagePtr>>> future_;
    std::set<TimerId> pending_timers_;
    std::set<std::pair<TimerKind, Epoch>> timer_slots_;

    std::set<BlockId> verified_certs_;
    std::map<BlockId, bool> block_ok_;
};

}  // namespace alterbft
