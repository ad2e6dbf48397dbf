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

#include <memory>
#include <vector>

#include "alterbft/crypto.hpp"
#include "alterbft/replica.hpp"
#include "alterbft/scenario.hpp"
#include "alterbft/trace.hpp"
#include "alterbft/types.hpp"

namespace alterbft::test {

struct Keys {
    std::vector<crypto::KeyPair> secrets;
    std::shared_ptr<const crypto::Keyring> ring;

    explicit Keys(std::uint32_t n, std::uint64_t seed = 7, std::string_view scheme = "mac") {
        ring = std::make_shared<const crypto::Keyring>(
            crypto::Keyring::generate(crypto::scheme_by_name(scheme), n, seed, secrets));
    }

    Vote vote(std::uint32_t signer, Epoch e, const BlockId& id) const {
        return make_vote(ring->scheme(), secrets[signer], e, id);
    }
    SilenceMsg silence(std::uint32_t signer, Epoch e) const { return make_silence(ring->scheme(), secrets[signer], e); }

    BlockCert cert(Epoch e, const BlockId& id, std::vector<std::uint32_t> signers) const {
        BlockCert c{e, id, {}};
        for (auto s : signers) c.votes.push_back(vote(s, e, id));
        return c;
    }
    SilenceCert silence_cert(Epoch e, std::vector<std::uint32_t> signers) const {
        SilenceCert c{e, {}};
        for (auto s : signers) c.msgs.push_back(silence(s, e));
        return c;
    }
};

inline MessagePtr msg(Message m) { return std::make_shared<const Message>(std::move(m)); }

inline Block block(std::uint64_t seed, std::optional<BlockId> prev = std::nullopt, std::size_t size = 64) {
    return Block(payload::make(size, seed), prev);
}

// A replica whose trace records are captured in memory.
struct Harness {
    std::shared_ptr<std::vector<TraceRecord>> records = std::make_shared<std::vector<TraceRecord>>();
    Replica replica;

    Harness(const Keys& keys, ReplicaConfig cfg)
        : replica(cfg, keys.ring, keys.secrets[cfg.me.index], [rec = records](TraceRecord r) { rec->push_back(r); }) {}

    std::size_t count(TraceKind k) const {
        std::size_t c = 0;
        for (const auto& r : *records) c += r.kind == k;
        return c;
    }
};

inline ReplicaConfig replica_config(std::uint32_t n, std::uint32_t f, std::uint32_t me) {
    ReplicaConfig c;
    c.n = n;
    c.f = f;
    c.me = ReplicaId{me};
    c.payload_size = 64;
    return c;
}

template <class T>
std::vector<const T*> find_all(const Actions& acts) {
    std::vector<const T*> out;
    for (const auto& a : acts)
        if (const auto* x = std::get_if<T>(&a)) out.push_back(x);
    return out;
}

template <class M>
std::vector<const M*> broadcasts_of(const Actions& acts) {
    std::vector<const M*> out;
    for (const auto* b : find_all<Broadcast>(acts))
        if (const auto* m = std::get_if<M>(b->msg.get())) out.push_back(m);
    return out;
}

inline bool has_timer(const Actions& acts, TimerKind k, Epoch e) {
    for (const auto* t : find_all<StartTimer>(acts))
        if (t->id.kind == k && t->id.epoch == e) return true;
    return false;
}

// Small, fast scenario used across simulation tests.
inline ScenarioConfig small_scenario(std::uint64_t seed = 1) {
    ScenarioConfig c;
    c.n = 5;
    c.f = 2;
    c.epochs = 12;
    c.payload_size = 8 * 1024;
    c.scheme = "mac";
    c.seed = seed;
    return c;
}

}  // namespace alterbft::test
