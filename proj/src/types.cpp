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

#include "alterbft/types.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "alterbft/codec.hpp"
#include "alterbft/rng.hpp"

namespace alterbft {

Block::Block(Bytes payload, std::optional<BlockId> prev)
    : Block(std::make_shared<const Bytes>(std::move(payload)), prev) {}

Block::Block(std::shared_ptr<const Bytes> payload, std::optional<BlockId> prev)
    : payload_(std::move(payload)), prev_(prev), id_(codec::block_id(*payload_, prev_)) {}

std::string_view to_string(CertKind k) {
    switch (k) {
    case CertKind::Block: return "BLOCK";
    case CertKind::Equivocation: return "EQUIV";
    case CertKind::Silence: return "SILENCE";
    }
    return "?";
}

CertKind cert_kind(const Certificate& c) { return static_cast<CertKind>(c.index()); }

Epoch cert_epoch(const Certificate& c) {
    return std::visit([](const auto& x) { return x.epoch; }, c);
}

std::string_view to_string(MessageType t) {
    switch (t) {
    case MessageType::Propose: return "PROPOSE";
    case MessageType::Vote: return "VOTE";
    case MessageType::Silence: return "SILENCE";
    case MessageType::QuitEpoch: return "QUIT_EPOCH";
    }
    return "?";
}

MessageType message_type(const Message& m) { return static_cast<MessageType>(m.index() + 1); }

Epoch message_epoch(const Message& m) {
    return std::visit(
        [](const auto& x) -> Epoch {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, QuitEpochMsg>) {
                return cert_epoch(x.cert);
            } else {
                return x.epoch;
            }
        },
        m);
}

Bytes vote_signing_bytes(Epoch epoch, const BlockId& id) {
    codec::ByteSink s;
    codec::Writer w(s);
    w.raw(ByteView(reinterpret_cast<const std::uint8_t*>("VOTE"), 4));
    w.u64(epoch);
    w.id(id);
    return std::move(s.out);
}

Bytes silence_signing_bytes(Epoch epoch) {
    codec::ByteSink s;
    codec::Writer w(s);
    w.raw(ByteView(reinterpret_cast<const std::uint8_t*>("SILENCE"), 7));
    w.u64(epoch);
    return std::move(s.out);
}

Vote make_vote(const crypto::SignatureScheme& scheme, const crypto::KeyPair& key, Epoch epoch, const BlockId& id) {
    return Vote{epoch, id, key.owner, scheme.sign(key, vote_signing_bytes(epoch, id))};
}

SilenceMsg make_silence(const crypto::SignatureScheme& scheme, const crypto::KeyPair& key, Epoch epoch) {
    return SilenceMsg{epoch, key.owner, scheme.sign(key, silence_signing_bytes(epoch))};
}

bool verify_vote(const Vote& v, const crypto::Keyring& keys) {
    return keys.verify(v.signer, vote_signing_bytes(v.epoch, v.block_id), v.signature);
}

bool verify_silence(const SilenceMsg& s, const crypto::Keyring& keys) {
    return keys.verify(s.signer, silence_signing_bytes(s.epoch), s.signature);
}

std::strong_ordering certificate_recency(const BlockCert& a, const BlockCert& b) { return a.epoch <=> b.epoch; }

namespace {

template <class T>
bool quorum_shape_ok(const std::vector<T>& items, std::uint32_t n, std::uint32_t f) {
    if (items.size() != static_cast<std::size_t>(f) + 1) return false;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].signer.index >= n) return false;
        if (i > 0 && !(items[i - 1].signer < items[i].signer)) return false;
    }
    return true;
}

}  // namespace

bool verify_certificate(const BlockCert& c, const crypto::Keyring& keys, std::uint32_t n, std::uint32_t f) {
    if (keys.size() != n || !quorum_shape_ok(c.votes, n, f)) return false;
    return std::all_of(c.votes.begin(), c.votes.end(), [&](const Vote& v) {
        return v.epoch == c.epoch && v.block_id == c.block_id && verify_vote(v, keys);
    });
}

bool verify_certificate(const Certificate& cert, const crypto::Keyring& keys, std::uint32_t n, std::uint32_t f) {
    if (keys.size() != n) return false;
    return std::visit(
        [&](const auto& c) -> bool {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, BlockCert>) {
                return verify_certificate(c, keys, n, f);
            } else if constexpr (std::is_same_v<T, EquivCert>) {
                const auto leader = leader_of(c.epoch, n);
                return c.vote_a.epoch == c.epoch && c.vote_b.epoch == c.epoch && c.vote_a.signer == leader &&
                       c.vote_b.signer == leader && c.vote_a.block_id < c.vote_b.block_id &&
                       verify_vote(c.vote_a, keys) && verify_vote(c.vote_b, keys);
            } else {
                if (!quorum_shape_ok(c.msgs, n, f)) return false;
                return std::all_of(c.msgs.begin(), c.msgs.end(), [&](const SilenceMsg& s) {
                    return s.epoch == c.epoch && verify_silence(s, keys);
                });
            }
        },
        cert);
}

std::string render(const Certificate& c) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, BlockCert>) {
                std::string signers;
                for (const auto& v : x.votes) signers += fmt::format("{}{}", signers.empty() ? "" : ",", v.signer.index);
                return fmt::format("C{}({}) by [{}]", x.epoch, x.block_id.short_hex(), signers);
            } else if constexpr (std::is_same_v<T, EquivCert>) {
                return fmt::format("C{}(EQUIV {} / {})", x.epoch, x.vote_a.block_id.short_hex(),
                                   x.vote_b.block_id.short_hex());
            } else {
                return fmt::format("C{}(SILENCE x{})", x.epoch, x.msgs.size());
            }
        },
        c);
}

std::string render(const Message& m) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Proposal>) {
                return fmt::format("PROPOSE e={} b={} prev={} size={} just={}", x.epoch, x.block.id().short_hex(),
                                   x.block.prev() ? x.block.prev()->short_hex() : "-", x.block.payload().size(),
                                   x.justification ? render(Certificate{*x.justification}) : "-");
            } else if constexpr (std::is_same_v<T, Vote>) {
                return fmt::format("VOTE e={} b={} from {}", x.epoch, x.block_id.short_hex(), x.signer.index);
            } else if constexpr (std::is_same_v<T, SilenceMsg>) {
                return fmt::format("SILENCE e={} from {}", x.epoch, x.signer.index);
            } else {
                return fmt::format("QUIT_EPOCH {}", render(x.cert));
            }
        },
        m);
}

std::string_view to_string(EpochState s) {
    switch (s) {
    case EpochState::Active: return "ACTIVE";
    case EpochState::Committed: return "COMMITTED";
    case EpochState::NotCommitted: return "NOT_COMMITTED";
    }
    return "?";
}

std::string_view to_string(TimerKind k) {
    switch (k) {
    case TimerKind::Certificate: return "CERTIFICATE";
    case TimerKind::Commit: return "COMMIT";
    case TimerKind::EpochChange: return "EPOCH_CHANGE";
    }
    return "?";
}

namespace payload {

std::uint32_t checksum(ByteView body) {
    std::uint32_t h = 2166136261u;
    for (auto b : body) {
        h ^= b;
        h *= 16777619u;
    }
    return h;
}

Bytes make(std::size_t size, std::uint64_t seed) {
    size = std::max<std::size_t>(size, 4);
    Bytes out(size);
    Rng rng(seed);
    std::size_t i = 0;
    while (i + 4 < size) {
        auto x = rng.next();
        for (int k = 0; k < 8 && i + 4 < size; ++k, ++i) out[i] = static_cast<std::uint8_t>(x >> (8 * k));
    }
    const auto sum = checksum(ByteView(out.data(), size - 4));
    for (int k = 0; k < 4; ++k) out[size - 4 + k] = static_cast<std::uint8_t>(sum >> (8 * k));
    return out;
}

std::pair<std::uint32_t, std::uint32_t> checksums(const Bytes& p) {
    if (p.size() < 4) return {0, 1};
    std::uint32_t declared = 0;
    for (int k = 0; k < 4; ++k) declared |= static_cast<std::uint32_t>(p[p.size() - 4 + k]) << (8 * k);
    return {declared, checksum(ByteView(p.data(), p.size() - 4))};
}

bool checksum_ok(const Bytes& p) {
    if (p.size() < 4) return false;
    auto [declared, computed] = checksums(p);
    return declared == computed;
}

}  // namespace payload

}  // namespace alterbft
