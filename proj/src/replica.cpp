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

#include "alterbft/replica.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <stdexcept>

#include "alterbft/codec.hpp"

namespace alterbft {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

Replica::Replica(ReplicaConfig cfg, std::shared_ptr<const crypto::Keyring> keys, crypto::KeyPair key, TraceSink sink)
    : cfg_(cfg), keys_(std::move(keys)), key_(std::move(key)), sink_(std::move(sink)) {
    if (cfg_.n <= 2 * cfg_.f) throw std::invalid_argument("replica: n must exceed 2f");
    if (!keys_ || keys_->size() != cfg_.n) throw std::invalid_argument("replica: keyring does not cover n replicas");
    if (cfg_.me.index >= cfg_.n) throw std::invalid_argument("replica: id out of range");
    valid_hook_ = [](const Block& b) { return payload::checksum_ok(b.payload()); };
    payload_source_ = [size = cfg_.payload_size, seed = cfg_.payload_seed, me = cfg_.me.index](Epoch e) {
        return payload::make(size, splitmix(seed ^ splitmix((std::uint64_t{me} << 40) ^ e)));
    };
}

void Replica::trace(TraceRecord r) const {
    if (sink_) sink_(std::move(r));
}

Broadcast Replica::make_broadcast(Message m) const {
    return make_broadcast(std::make_shared<const Message>(std::move(m)));
}

Broadcast Replica::make_broadcast(const MessagePtr& m) const {
    const auto size = codec::encoded_size(*m);
    return Broadcast{m, classify(size, cfg_.small_threshold), size};
}

void Replica::append(Actions& out, Actions more) const {
    out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
}

void Replica::start_timer(Actions& out, TimerId id, Duration d) {
    if (!timer_slots_.insert({id.kind, id.epoch}).second) return;
    pending_timers_.insert(id);
    out.push_back(StartTimer{id, d});
}

void Replica::broadcast_quit(Actions& out, const Certificate& c) {
    if (!quit_sent_.insert({cert_epoch(c), cert_kind(c)}).second) return;
    out.push_back(make_broadcast(QuitEpochMsg{c}));
}

void Replica::lock(const BlockCert& c) {
    locked_ = c;
    TraceRecord r;
    r.kind = TraceKind::Lock;
    r.epoch = e_p_;
    r.cert_epoch = c.epoch;
    r.block = c.block_id;
    trace(std::move(r));
}

void Replica::set_state(Epoch e, EpochState s, std::optional<CertKind> cause) {
    states_[e] = s;
    TraceRecord r;
    r.kind = TraceKind::StateChange;
    r.epoch = e;
    r.state = s;
    r.cert = cause;
    trace(std::move(r));
}

void Replica::reject(std::string reason, const Message* m) {
    TraceRecord r;
    r.kind = TraceKind::Reject;
    r.reason = std::move(reason);
    if (m) {
        r.msg = message_type(*m);
        r.epoch = message_epoch(*m);
    }
    trace(std::move(r));
}

std::optional<EpochState> Replica::state_of(Epoch e) const {
    auto it = states_.find(e);
    if (it == states_.end()) return std::nullopt;
    return it->second;
}

std::optional<BlockId> Replica::decision_of(Epoch e) const {
    auto it = decisions_.find(e);
    if (it == decisions_.end()) return std::nullopt;
    return it->second;
}

bool Replica::cert_ok(const BlockCert& c) { return cert_ok(Certificate{c}); }

bool Replica::cert_ok(const Certificate& c) {
    const auto digest = crypto::hash(codec::encode(c));
    if (verified_certs_.count(digest)) return true;
    if (!verify_certificate(c, *keys_, cfg_.n, cfg_.f)) return false;
    verified_certs_.insert(digest);
    return true;
}

bool Replica::valid(const Proposal& p) {
    const auto& b = p.block;
    if (b.is_genesis() != !p.justification.has_value()) return false;
    if (p.justification) {
        const auto& j = *p.justification;
        if (*b.prev() != j.block_id || j.epoch >= p.epoch || !cert_ok(j)) return false;
    }
    auto it = block_ok_.find(b.id());
    if (it == block_ok_.end()) it = block_ok_.emplace(b.id(), valid_hook_(b)).first;
    return it->second;
}

Actions Replica::bootstrap() {
    if (started_) throw std::logic_error("replica already bootstrapped");
    return start_epoch(0);
}

Actions Replica::start_epoch(Epoch e) {
    if (started_ && e <= e_p_) throw std::logic_error(fmt::format("start_epoch({}) while in epoch {}", e, e_p_));
    started_ = true;
    e_p_ = e;
    has_voted_ = false;
    pending_proposals_.clear();
    TraceRecord r;
    r.kind = TraceKind::EpochStart;
    r.epoch = e;
    trace(std::move(r));

    Actions out;
    if (halted()) return out;
    states_[e] = EpochState::Active;
    decisions_[e] = std::nullopt;
    start_timer(out, TimerId{TimerKind::Certificate, e, std::nullopt}, cfg_.delta_l + 4 * cfg_.delta_s);
    if (leader_of(e, cfg_.n) == cfg_.me) {
        if (best_seen_ && (!locked_ || best_seen_->epoch > locked_->epoch)) {
            lock(*best_seen_);
            broadcast_quit(out, *best_seen_);
        }
        if (e == 0 || (locked_ && locked_->epoch + 1 == e) || cfg_.skip_epoch_change_wait) {
            append(out, propose());
        } else {
            start_timer(out, TimerId{TimerKind::EpochChange, e, std::nullopt}, 2 * cfg_.delta_s);
        }
    }
    drain_buffer(out);
    return out;
}

Actions Replica::propose() {
    if (!started_ || halted() || leader_of(e_p_, cfg_.n) != cfg_.me) throw std::logic_error("propose: not the leader");
    if (!proposed_.insert(e_p_).second) throw std::logic_error(fmt::format("propose: already proposed in {}", e_p_));
    Actions out;
    std::optional<BlockId> prev;
    if (locked_) prev = locked_->block_id;
    Block b(payload_source_(e_p_), prev);
    auto vote = make_vote(keys_->scheme(), key_, e_p_, b.id());
    store_block(out, b);
    out.push_back(make_broadcast(Proposal{e_p_, b, locked_}));
    out.push_back(make_broadcast(vote));
    has_voted_ = true;
    return out;
}

Actions Replica::on_proposal(const Proposal& p, const Vote& leader_vote) {
    Actions out;
    if (p.epoch != e_p_ || halted()) return out;
    if (leader_vote.epoch != p.epoch || leader_vote.signer != leader_of(p.epoch, cfg_.n) ||
        leader_vote.block_id != p.block.id())
        return out;
    if (!valid(p)) {
        Message m{p};
        reject("invalid proposal", &m);
        return out;
    }
    store_block(out, p.block);
    if (state_of(e_p_) != EpochState::Active || has_voted_) return out;
    const bool cond1 = !locked_;
    const bool cond2 = locked_ && p.justification && p.justification->epoch >= locked_->epoch;
    if (!cond1 && !cond2) return out;
    out.push_back(make_broadcast(make_vote(keys_->scheme(), key_, e_p_, p.block.id())));
    has_voted_ = true;
    if (forwarded_.insert(p.block.id()).second) {
        out.push_back(make_broadcast(Message{leader_vote}));
        out.push_back(make_broadcast(Message{p}));
    }
    return out;
}

void Replica::try_vote(Actions& out) {
    if (has_voted_ || state_of(e_p_) != EpochState::Active) return;
    auto lv = leader_votes_.find(e_p_);
    if (lv == leader_votes_.end()) return;
    const auto epoch = e_p_;
    for (std::size_t i = 0; i < pending_proposals_.size() && !has_voted_ && e_p_ == epoch; ++i) {
        auto v = lv->second.find(pending_proposals_[i].block.id());
        if (v == lv->second.end()) continue;
        const auto p = pending_proposals_[i];
        append(out, on_proposal(p, v->second));
    }
}

VoteOutcome Replica::accumulate_vote(const Vote& v) {
    VoteOutcome o;
    auto& slot = votes_[Key{v.epoch, v.block_id}];
    if (!slot.emplace(v.signer, v).second) return o;
    if (v.signer == leader_of(v.epoch, cfg_.n)) {
        auto& lv = leader_votes_[v.epoch];
        lv.emplace(v.block_id, v);
        if (lv.size() == 2) {
            auto it = lv.begin();
            const auto& a = it->second;
            const auto& b = std::next(it)->second;
            o.equiv_cert = EquivCert{v.epoch, a, b};
        }
    }
    if (slot.size() == static_cast<std::size_t>(cfg_.f) + 1) {
        BlockCert c{v.epoch, v.block_id, {}};
        for (const auto& [signer, vote] : slot) c.votes.push_back(vote);
        o.block_cert = std::move(c);
    }
    if (slot.size() == cfg_.n) o.all_votes = true;
    return o;
}

Actions Replica::on_block_certificate(const BlockCert& c) {
    Actions out;
    if (!best_seen_ || c.epoch > best_seen_->epoch) best_seen_ = c;
    if (c.epoch > e_p_) {
        if (halted()) return out;
        append(out, start_epoch(c.epoch));
    }
    if (halted()) return out;
    if (c.epoch == e_p_) {
        lock(c);
        if (state_of(e_p_) == EpochState::Active) {
            start_timer(out, TimerId{TimerKind::Commit, e_p_, c.block_id}, 2 * cfg_.delta_s);
        }
        broadcast_quit(out, c);
        append(out, start_epoch(e_p_ + 1));
    } else if (leader_of(e_p_, cfg_.n) == cfg_.me && (!locked_ || c.epoch > locked_->epoch)) {
        lock(c);
        broadcast_quit(out, c);
    }
    return out;
}

Actions Replica::on_commit_timer(Epoch e, const std::optional<BlockId>& id) {
    Actions out;
    if (id) {
        if (state_of(e) == EpochState::Active) {
            set_state(e, EpochState::Committed);
            decide(out, e, *id);
        }
    } else if (e == e_p_ && !halted()) {
        append(out, start_epoch(e_p_ + 1));
    }
    return out;
}

Actions Replica::on_all_votes(Epoch e, const BlockId& id) {
    Actions out;
    if (cfg_.fast_path && state_of(e) == EpochState::Active) {
        set_state(e, EpochState::Committed);
        decide(out, e, id);
    }
    return out;
}

Actions Replica::on_misbehavior(const Certificate& c) {
    Actions out;
    const auto ce = cert_epoch(c);
    if (ce > e_p_) {
        if (halted()) return out;
        append(out, start_epoch(ce));
        if (halted()) return out;
    }
    if (state_of(ce) != EpochState::Active) return out;
    set_state(ce, EpochState::NotCommitted, cert_kind(c));
    if (ce == e_p_) {
        broadcast_quit(out, c);
        if (cfg_.wait_after_misbehavior) {
            start_timer(out, TimerId{TimerKind::Commit, ce, std::nullopt}, 2 * cfg_.delta_s);
        } else {
            append(out, start_epoch(e_p_ + 1));
        }
    }
    return out;
}

Actions Replica::on_certificate_timer(Epoch e) {
    Actions out;
    if (e == e_p_ && !halted() && state_of(e) == EpochState::Active) {
        out.push_back(make_broadcast(make_silence(keys_->scheme(), key_, e_p_)));
    }
    return out;
}

std::optional<SilenceCert> Replica::accumulate_silence(const SilenceMsg& s) {
    auto& slot = silences_[s.epoch];
    if (!slot.emplace(s.signer, s).second) return std::nullopt;
    if (slot.size() != static_cast<std::size_t>(cfg_.f) + 1) return std::nullopt;
    SilenceCert c{s.epoch, {}};
    for (const auto& [signer, msg] : slot) c.msgs.push_back(msg);
    return c;
}

Actions Replica::on_stored_block(const Block& b) {
    Actions out;
    store_block(out, b);
    return out;
}

void Replica::store_block(Actions& out, const Block& b) {
    if (!store_.emplace(b.id(), b).second) return;
    TraceRecord r;
    r.kind = TraceKind::Store;
    r.block = b.id();
    r.prev = b.prev();
    trace(std::move(r));
    try_commit_chain(out);
}

void Replica::decide(Actions& out, Epoch e, const BlockId& id) {
    decisions_[e] = id;
    TraceRecord r;
    r.kind = TraceKind::Decision;
    r.epoch = e;
    r.block = id;
    trace(std::move(r));
    out.push_back(Commit{e, id});
    undelivered_.emplace_back(e, id);
    try_commit_chain(out);
}

void Replica::try_commit_chain(Actions& out) {
    bool progress = true;
    while (progress) {
        progress = false;
        for (auto it = undelivered_.begin(); it != undelivered_.end();) {
            const auto [e, id] = *it;
            std::vector<const Block*> chain;
            std::optional<BlockId> cur = id;
            bool missing = false;
            while (cur && !committed_set_.count(*cur)) {
                auto s = store_.find(*cur);
                if (s == store_.end()) {
                    missing = true;
                    break;
                }
                chain.push_back(&s->second);
                cur = s->second.prev();
            }
            if (missing) {
                ++it;
                continue;
            }
            CommitBlocks cb;
            for (auto c = chain.rbegin(); c != chain.rend(); ++c) {
                const Block& b = **c;
                const std::uint64_t height = b.prev() ? heights_.at(*b.prev()) + 1 : 1;
                heights_[b.id()] = height;
                committed_.push_back(b.id());
                committed_set_.insert(b.id());
                const auto [declared, computed] = payload::checksums(b.payload());
                TraceRecord r;
                r.kind = TraceKind::Commit;
                r.epoch = e;
                r.block = b.id();
                r.prev = b.prev();
                r.height = height;
                r.direct = b.id() == id;
                r.checksum = declared;
                r.computed = computed;
                trace(std::move(r));
                cb.blocks.push_back(b);
            }
            if (!cb.blocks.empty()) out.push_back(std::move(cb));
            it = undelivered_.erase(it);
            progress = true;
        }
    }
}

void Replica::buffer(ReplicaId from, const MessagePtr& msg) { future_[message_epoch(*msg)].emplace_back(from, msg); }

void Replica::drain_buffer(Actions& out) {
    while (!future_.empty() && future_.begin()->first <= e_p_ && !halted()) {
        auto node = future_.extract(future_.begin());
        for (const auto& [from, msg] : node.mapped()) append(out, handle_message(from, msg));
    }
}

Actions Replica::handle_message(ReplicaId from, const MessagePtr& msg) {
    Actions out;
    if (!started_) {
        buffer(from, msg);
        return out;
    }
    const auto me = message_epoch(*msg);
    if (halted() && me >= e_p_) return out;
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Proposal>) {
                if (m.epoch > e_p_) return buffer(from, msg);
                if (!valid(m)) return reject("invalid proposal", msg.get());
                store_block(out, m.block);
                if (m.epoch == e_p_) {
                    const bool known = std::any_of(pending_proposals_.begin(), pending_proposals_.end(),
                                                   [&](const Proposal& p) { return p.block.id() == m.block.id(); });
                    if (!known) pending_proposals_.push_back(m);
                    try_vote(out);
                }
            } else if constexpr (std::is_same_v<T, Vote>) {
                if (!verify_vote(m, *keys_)) return reject("bad vote signature", msg.get());
                if (m.epoch > e_p_) return buffer(from, msg);
                auto o = accumulate_vote(m);
                if (o.equiv_cert) append(out, on_misbehavior(*o.equiv_cert));
                if (o.block_cert) append(out, on_block_certificate(*o.block_cert));
                if (o.all_votes) append(out, on_all_votes(m.epoch, m.block_id));
                if (m.epoch == e_p_ && m.signer == leader_of(m.epoch, cfg_.n)) try_vote(out);
            } else if constexpr (std::is_same_v<T, SilenceMsg>) {
                if (!verify_silence(m, *keys_)) return reject("bad silence signature", msg.get());
                if (m.epoch > e_p_) return buffer(from, msg);
                if (auto c = accumulate_silence(m)) append(out, on_misbehavior(*c));
            } else {
                if (!cert_ok(m.cert)) return reject("invalid certificate", msg.get());
                if (const auto* bc = std::get_if<BlockCert>(&m.cert)) {
                    append(out, on_block_certificate(*bc));
                } else {
                    append(out, on_misbehavior(m.cert));
                }
            }
        },
        *msg);
    return out;
}

Actions Replica::handle_timer(const TimerId& timer) {
    Actions out;
    if (!pending_timers_.erase(timer)) return out;
    switch (timer.kind) {
    case TimerKind::Certificate:
        return on_certificate_timer(timer.epoch);
    case TimerKind::Commit:
        return on_commit_timer(timer.epoch, timer.block);
    case TimerKind::EpochChange:
        if (timer.epoch == e_p_ && !halted() && !proposed_.count(e_p_)) return propose();
        break;
    }
    return out;
}

std::string Replica::snapshot() const {
    std::string s = fmt::format("me={} e={} voted={} started={}\n", cfg_.me.index, e_p_, has_voted_, started_);
    s += locked_ ? fmt::format("lock={}\n", render(Certificate{*locked_})) : "lock=-\n";
    s += best_seen_ ? fmt::format("best={}\n", render(Certificate{*best_seen_})) : "best=-\n";
    for (const auto& [e, st] : states_) {
        const auto& d = decisions_.at(e);
        s += fmt::format("epoch {} {} {}\n", e, to_string(st), d ? d->hex() : "-");
    }
    s += "chain";
    for (const auto& id : committed_) s += " " + id.short_hex();
    s += "\nstore";
    for (const auto& [id, b] : store_) s += " " + id.short_hex();
    s += "\ntimers";
    for (const auto& t : pending_timers_) {
        s += fmt::format(" {}/{}/{}", to_string(t.kind), t.epoch, t.block ? t.block->short_hex() : "-");
    }
    s += "\nvotes";
    for (const auto& [k, v] : votes_) s += fmt::format(" {}:{}x{}", k.epoch, k.id.short_hex(), v.size());
    s += "\nsilences";
    for (const auto& [e, v] : silences_) s += fmt::format(" {}x{}", e, v.size());
    s += "\nquit";
    for (const auto& [e, k] : quit_sent_) s += fmt::format(" {}/{}", e, to_string(k));
    s += fmt::format("\npending={} future={} undelivered={}\n", pending_proposals_.size(), future_.size(),
                     undelivered_.size());
    return s;
}

}  // namespace alterbft
