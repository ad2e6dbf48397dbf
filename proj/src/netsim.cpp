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

#include "alterbft/netsim.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "alterbft/codec.hpp"
#include "alterbft/latmodel.hpp"

namespace alterbft::netsim {

namespace {

// Standard normal quantile at 0.9999.
constexpr double kZ9999 = 3.719016485455709;
constexpr std::uint64_t kMaxEvents = 200'000'000;

Duration clamp_positive(double us) {
    return Duration{std::max<std::int64_t>(1, static_cast<std::int64_t>(std::llround(us)))};
}

class FixedSampler final : public DelaySampler {
  public:
    explicit FixedSampler(Duration d) : d_(d) {}
    std::optional<Duration> sample(Rng&) const override { return d_; }
    std::string describe() const override { return fmt::format("fixed:{}", to_ms(d_)); }

  private:
    Duration d_;
};

class UniformSampler final : public DelaySampler {
  public:
    UniformSampler(Duration lo, Duration hi) : lo_(lo), hi_(hi) {}
    std::optional<Duration> sample(Rng& rng) const override {
        return clamp_positive(rng.uniform(static_cast<double>(lo_.count()), static_cast<double>(hi_.count())));
    }
    std::string describe() const override { return fmt::format("uniform:{}:{}", to_ms(lo_), to_ms(hi_)); }

  private:
    Duration lo_, hi_;
};

class LogNormalSampler final : public DelaySampler {
  public:
    LogNormalSampler(Duration median, Duration p9999, std::optional<Duration> truncate_at)
        : median_(median), p9999_(p9999), truncate_(truncate_at) {
        mu_ = std::log(static_cast<double>(median.count()));
        sigma_ = (std::log(static_cast<double>(p9999.count())) - mu_) / kZ9999;
    }

    std::optional<Duration> sample(Rng& rng) const override {
        for (int attempt = 0; attempt < 64; ++attempt) {
            auto d = clamp_positive(std::exp(mu_ + sigma_ * rng.normal()));
            if (!truncate_ || d <= *truncate_) return d;
        }
        return *truncate_;
    }

    std::string describe() const override {
        return fmt::format("lognormal:{}:{}{}", to_ms(median_), to_ms(p9999_),
                           truncate_ ? fmt::format(" (truncated at {})", to_ms(*truncate_)) : "");
    }

  private:
    Duration median_, p9999_;
    std::optional<Duration> truncate_;
    double mu_ = 0, sigma_ = 0;
};

class NeverSampler final : public DelaySampler {
  public:
    std::optional<Duration> sample(Rng&) const override { return std::nullopt; }
    std::string describe() const override { return "never"; }
};

class EmpiricalSampler final : public DelaySampler {
  public:
    EmpiricalSampler(std::string path, unsigned k) : path_(std::move(path)), k_(k), set_(latmodel::load_samples(path_)) {}
    std::optional<Duration> sample(Rng& rng) const override {
        return from_ms(latmodel::synth_large_delay(set_, k_, rng));
    }
    std::string describe() const override { return fmt::format("empirical:{}:{}", path_, k_); }

  private:
    std::string path_;
    unsigned k_;
    latmodel::DelaySampleSet set_;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, sep)) out.push_back(part);
    return out;
}

Duration ms_arg(const std::string& spec, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double ms = std::stod(v, &pos);
        if (pos != v.size() || !(ms >= 0)) throw std::invalid_argument("bad");
        return from_ms(ms);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad delay '" + v + "' in sampler '" + spec + "'");
    }
}

}  // namespace

SamplerPtr parse_sampler(const std::string& spec, std::optional<Duration> truncate_at) {
    const auto parts = split(spec, ':');
    if (parts.empty()) throw std::invalid_argument("empty sampler spec");
    const auto& kind = parts[0];
    if (kind == "fixed" && parts.size() == 2) return std::make_shared<FixedSampler>(ms_arg(spec, parts[1]));
    if (kind == "uniform" && parts.size() == 3) {
        auto lo = ms_arg(spec, parts[1]), hi = ms_arg(spec, parts[2]);
        if (hi < lo) throw std::invalid_argument("uniform sampler with hi < lo: " + spec);
        return std::make_shared<UniformSampler>(lo, hi);
    }
    if (kind == "lognormal" && (parts.size() == 2 || parts.size() == 3)) {
        auto median = ms_arg(spec, parts[1]);
        auto tail = parts.size() == 3 ? ms_arg(spec, parts[2]) : 4 * median;
        if (median <= Duration{0} || tail < median) throw std::invalid_argument("bad log-normal parameters: " + spec);
        return std::make_shared<LogNormalSampler>(median, tail, truncate_at);
    }
    if (kind == "never" && parts.size() == 1) return std::make_shared<NeverSampler>();
    if (kind == "empirical" && (parts.size() == 2 || parts.size() == 3)) {
        unsigned k = 1;
        if (parts.size() == 3) k = static_cast<unsigned>(std::stoul(parts[2]));
        if (k == 0) throw std::invalid_argument("empirical sampler needs k >= 1: " + spec);
        return std::make_shared<EmpiricalSampler>(parts[1], k);
    }
    throw std::invalid_argument("unknown sampler spec '" + spec + "'");
}

SamplerPtr default_bounded_sampler(Duration bound) {
    return std::make_shared<LogNormalSampler>(std::max(Duration{1}, bound / 4), bound, bound);
}

SamplerPtr default_pre_gst_sampler(Duration delta_l) {
    return std::make_shared<LogNormalSampler>(delta_l, 10 * delta_l, std::nullopt);
}

LatencyConfig LatencyConfig::from_scenario(const ScenarioConfig& cfg) {
    LatencyConfig l;
    l.delta_s = cfg.delta_s;
    l.delta_l = cfg.delta_l;
    l.gst = cfg.gst;
    l.small_threshold = cfg.small_threshold;
    auto pick = [](const std::string& field, const std::string& spec, SamplerPtr fallback,
                   std::optional<Duration> bound, bool allow_never) -> SamplerPtr {
        if (spec.empty()) return fallback;
        try {
            auto s = parse_sampler(spec, bound);
            if (!allow_never && spec == "never") throw std::invalid_argument("'never' only allowed before GST");
            return s;
        } catch (const std::exception& e) {
            throw ConfigError(field, e.what());
        }
    };
    l.dist_s = pick("dist_s", cfg.dist_s, default_bounded_sampler(cfg.delta_s), cfg.delta_s, false);
    l.dist_l_post_gst = pick("dist_l", cfg.dist_l, default_bounded_sampler(cfg.delta_l), cfg.delta_l, false);
    l.dist_l_pre_gst = pick("dist_l_pre", cfg.dist_l_pre, default_pre_gst_sampler(cfg.delta_l), std::nullopt, true);
    return l;
}

Simulator::Simulator(ScenarioConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed) {
    cfg_.validate();
    lat_ = LatencyConfig::from_scenario(cfg_);
    keys_ = std::make_shared<const crypto::Keyring>(
        crypto::Keyring::generate(crypto::scheme_by_name(cfg_.scheme), cfg_.n, cfg_.seed, secrets_));
    replicas_.reserve(cfg_.n);
    for (std::uint32_t i = 0; i < cfg_.n; ++i) {
        ReplicaConfig rc;
        rc.n = cfg_.n;
        rc.f = cfg_.f;
        rc.me = ReplicaId{i};
        rc.delta_s = cfg_.delta_s;
        rc.delta_l = cfg_.delta_l;
        rc.small_threshold = cfg_.small_threshold;
        rc.fast_path = cfg_.fast_path;
        rc.wait_after_misbehavior = cfg_.waits_after_misbehavior();
        rc.skip_epoch_change_wait = cfg_.adversary == AdversaryMode::Equivocate && cfg_.is_byzantine(i);
        rc.max_epoch = cfg_.epochs;
        rc.payload_size = cfg_.payload_size;
        rc.payload_seed = cfg_.seed;
        replicas_.emplace_back(rc, keys_, secrets_[i], [this, i](TraceRecord r) {
            r.replica = i;
            record(std::move(r));
        });
    }
}

void Simulator::push(SimTime t, int priority, std::variant<Delivery, TimerFire, Boot> what) {
    queue_.push(Event{t, priority, seq_++, std::move(what)});
}

void Simulator::record(TraceRecord r) {
    r.time = now_.count();
    records_.push_back(std::move(r));
}

bool Simulator::crashed(ReplicaId r) const {
    return cfg_.adversary == AdversaryMode::Crash && byzantine(r) && now_ >= cfg_.crash_time;
}

bool Simulator::silenced_epoch(Epoch e) const {
    return cfg_.silent_epochs.empty() ||
           std::find(cfg_.silent_epochs.begin(), cfg_.silent_epochs.end(), e) != cfg_.silent_epochs.end();
}

void Simulator::check_collision(const Block& b) {
    auto [it, fresh] = blocks_seen_.emplace(b.id(), b);
    if (fresh || it->second.shared_payload() == b.shared_payload()) return;
    if (!(it->second == b)) throw std::runtime_error("block id collision on " + b.id().hex());
}

void Simulator::dispatch(ReplicaId r, Actions actions) {
    for (auto& a : actions) {
        if (auto* b = std::get_if<Broadcast>(&a)) {
            broadcast(r, *b);
        } else if (auto* t = std::get_if<StartTimer>(&a)) {
            TraceRecord rec;
            rec.replica = r.index;
            rec.kind = TraceKind::TimerStart;
            rec.timer = t->id.kind;
            rec.epoch = t->id.epoch;
            rec.block = t->id.block;
            rec.duration = t->duration.count();
            record(std::move(rec));
            push(now_ + t->duration, 1, TimerFire{r, t->id});
        }
    }
}

void Simulator::broadcast(ReplicaId from, const Broadcast& b) {
    if (!byzantine(from) || cfg_.adversary == AdversaryMode::None || cfg_.adversary == AdversaryMode::DelayL) {
        return send(from, b.msg, b.cls, b.bytes, std::nullopt);
    }
    if (crashed(from)) return;
    const auto* prop = std::get_if<Proposal>(b.msg.get());
    const auto* vote = std::get_if<Vote>(b.msg.get());
    const bool own_leader_vote = vote && vote->signer == from && leader_of(vote->epoch, cfg_.n) == from;
    switch (cfg_.adversary) {
    case AdversaryMode::SilentLeader:
        if (prop && leader_of(prop->epoch, cfg_.n) == from && silenced_epoch(prop->epoch)) return;
        if (own_leader_vote && silenced_epoch(vote->epoch)) return;
        break;
    case AdversaryMode::Equivocate:
        if (prop && leader_of(prop->epoch, cfg_.n) == from) return equivocate(from, *prop);
        if (!vote || vote->signer != from || own_leader_vote) return;
        if (byzantine(leader_of(vote->epoch, cfg_.n))) return;
        break;
    default:
        break;
    }
    send(from, b.msg, b.cls, b.bytes, std::nullopt);
}

void Simulator::equivocate(ReplicaId leader, const Proposal& pa) {
    const auto e = pa.epoch;
    Proposal pb = pa;
    pb.block = Block(payload::make(cfg_.payload_size, cfg_.seed ^ (0xB10CB10Cull + e * 0x100000001B3ull)),
                     pa.block.prev());
    const auto& scheme = keys_->scheme();
    auto msg_a = std::make_shared<const Message>(pa);
    auto msg_b = std::make_shared<const Message>(pb);
    auto vote_a = std::make_shared<const Message>(make_vote(scheme, secrets_[leader.index], e, pa.block.id()));
    auto vote_b = std::make_shared<const Message>(make_vote(scheme, secrets_[leader.index], e, pb.block.id()));
    const auto size_a = codec::encoded_size(*msg_a), size_b = codec::encoded_size(*msg_b);
    const auto size_v = codec::encoded_size(*vote_a);
    const auto cls_a = classify(size_a, cfg_.small_threshold), cls_b = classify(size_b, cfg_.small_threshold);
    const auto cls_v = classify(size_v, cfg_.small_threshold);

    std::uint32_t honest_rank = 0;
    for (std::uint32_t i = 0; i < cfg_.n; ++i) {
        const ReplicaId to{i};
        const bool both = byzantine(to);
        const bool side_a = both || honest_rank % 2 == 0;
        const bool side_b = both || honest_rank % 2 == 1;
        if (!both) ++honest_rank;
        if (side_a) {
            send(leader, msg_a, cls_a, size_a, to);
            send(leader, vote_a, cls_v, size_v, to);
        }
        if (side_b) {
            send(leader, msg_b, cls_b, size_b, to);
            send(leader, vote_b, cls_v, size_v, to);
        }
    }
    for (auto j : cfg_.byzantine) {
        if (j == leader.index) continue;
        for (const Block* b : std::array<const Block*, 2>{&pa.block, &pb.block}) {
            auto v = std::make_shared<const Message>(make_vote(scheme, secrets_[j], e, b->id()));
            send(ReplicaId{j}, v, cls_v, size_v, std::nullopt);
        }
    }
}

void Simulator::send(ReplicaId from, const MessagePtr& msg, MessageClass cls, std::size_t bytes,
                     std::optional<ReplicaId> to) {
    TraceRecord rec;
    rec.replica = from.index;
    rec.kind = TraceKind::Send;
    rec.msg = message_type(*msg);
    rec.epoch = message_epoch(*msg);
    rec.cls = cls;
    rec.bytes = bytes;
    if (to) rec.to = to->index;
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Proposal>) {
                check_collision(m.block);
                rec.block = m.block.id();
                rec.prev = m.block.prev();
            } else if constexpr (std::is_same_v<T, Vote>) {
                rec.block = m.block_id;
                rec.signer = m.signer.index;
            } else if constexpr (std::is_same_v<T, SilenceMsg>) {
                rec.signer = m.signer.index;
            } else {
                rec.cert = cert_kind(m.cert);
                if (const auto* bc = std::get_if<BlockCert>(&m.cert)) rec.block = bc->block_id;
            }
        },
        *msg);
    record(std::move(rec));
    if (to) {
        schedule(from, *to, msg, cls);
    } else {
        for (std::uint32_t i = 0; i < cfg_.n; ++i) schedule(from, ReplicaId{i}, msg, cls);
    }
}

void Simulator::schedule(ReplicaId from, ReplicaId to, const MessagePtr& msg, MessageClass cls) {
    if (from == to) return push(now_, 0, Delivery{to, from, msg, now_, cls});
    std::optional<SimTime> at;
    if (cls == MessageClass::Small) {
        auto d = std::clamp(*lat_.dist_s->sample(rng_), Duration{1}, lat_.delta_s);
        if (cfg_.stress_s_violation > 0 && rng_.uniform01() < cfg_.stress_s_violation) {
            d = Duration{static_cast<std::int64_t>(static_cast<double>(lat_.delta_s.count()) * rng_.uniform(1.01, 3.0))};
        }
        at = now_ + d;
    } else if (byzantine(from) && cfg_.adversary == AdversaryMode::DelayL) {
        if (auto d = lat_.dist_l_pre_gst->sample(rng_)) at = now_ + std::max(*d, Duration{1});
    } else if (lat_.gst && now_ >= *lat_.gst) {
        at = now_ + std::clamp(*lat_.dist_l_post_gst->sample(rng_), Duration{1}, lat_.delta_l);
    } else {
        auto d = lat_.dist_l_pre_gst->sample(rng_);
        if (d) at = now_ + std::max(*d, Duration{1});
        if (lat_.gst) at = at ? std::min(*at, *lat_.gst + lat_.delta_l) : *lat_.gst + lat_.delta_l;
    }
    if (at) push(*at, 0, Delivery{to, from, msg, now_, cls});
}

Trace Simulator::run() {
    if (ran_) throw std::logic_error("simulator already ran");
    ran_ = true;
    const auto stagger = cfg_.stagger().count();
    for (std::uint32_t i = 0; i < cfg_.n; ++i) {
        push(SimTime{static_cast<std::int64_t>(rng_.below(static_cast<std::uint64_t>(stagger) + 1))}, 0,
             Boot{ReplicaId{i}});
    }
    Trace trace;
    trace.header = to_json(cfg_);
    std::uint64_t processed = 0;
    while (!queue_.empty()) {
        if (cfg_.max_time && queue_.top().time > *cfg_.max_time) {
            trace.complete = false;
            now_ = *cfg_.max_time;
            break;
        }
        if (++processed > kMaxEvents) throw std::runtime_error("event budget exhausted");
        Event ev = queue_.top();
        queue_.pop();
        now_ = ev.time;
        std::visit(
            [&](auto& w) {
                using T = std::decay_t<decltype(w)>;
                if constexpr (std::is_same_v<T, Boot>) {
                    if (crashed(w.replica)) return;
                    dispatch(w.replica, replicas_[w.replica.index].bootstrap());
                } else if constexpr (std::is_same_v<T, TimerFire>) {
                    if (crashed(w.replica)) return;
                    TraceRecord rec;
                    rec.replica = w.replica.index;
                    rec.kind = TraceKind::TimerFire;
                    rec.timer = w.id.kind;
                    rec.epoch = w.id.epoch;
                    rec.block = w.id.block;
                    record(std::move(rec));
                    dispatch(w.replica, replicas_[w.replica.index].handle_timer(w.id));
                } else {
                    if (crashed(w.to)) return;
                    TraceRecord rec;
                    rec.replica = w.to.index;
                    rec.kind = TraceKind::Deliver;
                    rec.msg = message_type(*w.msg);
                    rec.epoch = message_epoch(*w.msg);
                    rec.from = w.from.index;
                    rec.sent = w.sent.count();
                    rec.cls = w.cls;
                    std::visit(
                        [&](const auto& m) {
                            using M = std::decay_t<decltype(m)>;
                            if constexpr (std::is_same_v<M, Proposal>) {
                                rec.block = m.block.id();
                            } else if constexpr (std::is_same_v<M, Vote>) {
                                rec.block = m.block_id;
                                rec.signer = m.signer.index;
                            } else if constexpr (std::is_same_v<M, SilenceMsg>) {
                                rec.signer = m.signer.index;
                            } else {
                                rec.cert = cert_kind(m.cert);
                                if (const auto* bc = std::get_if<BlockCert>(&m.cert)) rec.block = bc->block_id;
                            }
                        },
                        *w.msg);
                    record(std::move(rec));
                    dispatch(w.to, replicas_[w.to.index].handle_message(w.from, w.msg));
                }
            },
            ev.what);
    }
    trace.end_time = now_.count();
    trace.records = std::move(records_);
    return trace;
}

Trace simulate(const ScenarioConfig& cfg) {
    Simulator sim(cfg);
    return sim.run();
}

}  // namespace alterbft::netsim
