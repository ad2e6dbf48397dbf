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

#include <compare>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "alterbft/common.hpp"
#include "alterbft/crypto.hpp"

namespace alterbft {

// A hash-chained block. The id is the digest of the canonical encoding and is
// computed once at construction; height is not part of the block and is
// recomputed from the chain by whoever needs it.
class Block {
  public:
    Block(Bytes payload, std::optional<BlockId> prev);
    Block(std::shared_ptr<const Bytes> payload, std::optional<BlockId> prev);

    const Bytes& payload() const { return *payload_; }
    const std::shared_ptr<const Bytes>& shared_payload() const { return payload_; }
    const std::optional<BlockId>& prev() const { return prev_; }
    const BlockId& id() const { return id_; }
    bool is_genesis() const { return !prev_.has_value(); }

    bool operator==(const Block& other) const {
        return id_ == other.id_ && prev_ == other.prev_ && *payload_ == *other.payload_;
    }

  private:
    std::shared_ptr<const Bytes> payload_;
    std::optional<BlockId> prev_;
    BlockId id_;
};

struct Vote {
    Epoch epoch = 0;
    BlockId block_id;
    ReplicaId signer;
    Signature signature{};

    bool operator==(const Vote&) const = default;
};

struct SilenceMsg {
    Epoch epoch = 0;
    ReplicaId signer;
    Signature signature{};

    bool operator==(const SilenceMsg&) const = default;
};

// f+1 votes for one block in one epoch, sorted by signer.
struct BlockCert {
    Epoch epoch = 0;
    BlockId block_id;
    std::vector<Vote> votes;

    bool operator==(const BlockCert&) const = default;
};

// Two leader-signed votes for different blocks in the same epoch.
struct EquivCert {
    Epoch epoch = 0;
    Vote vote_a;
    Vote vote_b;

    bool operator==(const EquivCert&) const = default;
};

// f+1 silence messages for one epoch, sorted by signer.
struct SilenceCert {
    Epoch epoch = 0;
    std::vector<SilenceMsg> msgs;

    bool operator==(const SilenceCert&) const = default;
};

using Certificate = std::variant<BlockCert, EquivCert, SilenceCert>;

enum class CertKind : std::uint8_t { Block = 0, Equivocation = 1, Silence = 2 };

std::string_view to_string(CertKind k);
CertKind cert_kind(const Certificate& c);
Epoch cert_epoch(const Certificate& c);

struct Proposal {
    Epoch epoch = 0;
    Block block;
    std::optional<BlockCert> justification;

    bool operator==(const Proposal&) const = default;
};

struct QuitEpochMsg {
    Certificate cert;

    bool operator==(const QuitEpochMsg&) const = default;
};

using Message = std::variant<Proposal, Vote, SilenceMsg, QuitEpochMsg>;
using MessagePtr = std::shared_ptr<const Message>;

enum class MessageType : std::uint8_t { Propose = 1, Vote = 2, Silence = 3, QuitEpoch = 4 };

std::string_view to_string(MessageType t);
MessageType message_type(const Message& m);
// Epoch the message refers to (for QUIT-EPOCH, the certificate's epoch).
Epoch message_epoch(const Message& m);

// Bytes covered by vote and silence signatures.
Bytes vote_signing_bytes(Epoch epoch, const BlockId& id);
Bytes silence_signing_bytes(Epoch epoch);

Vote make_vote(const crypto::SignatureScheme& scheme, const crypto::KeyPair& key, Epoch epoch, const BlockId& id);
SilenceMsg make_silence(const crypto::SignatureScheme& scheme, const crypto::KeyPair& key, Epoch epoch);

bool verify_vote(const Vote& v, const crypto::Keyring& keys);
bool verify_silence(const SilenceMsg& s, const crypto::Keyring& keys);

// Certificates are ordered by epoch alone.
std::strong_ordering certificate_recency(const BlockCert& a, const BlockCert& b);

// Structural and cryptographic validity of a certificate; never throws.
bool verify_certificate(const Certificate& cert, const crypto::Keyring& keys, std::uint32_t n, std::uint32_t f);
bool verify_certificate(const BlockCert& cert, const crypto::Keyring& keys, std::uint32_t n, std::uint32_t f);

// Human-readable one-line renderings for traces and logs.
std::string render(const Certificate& c);
std::string render(const Message& m);

enum class EpochState : std::uint8_t { Active, Committed, NotCommitted };

std::string_view to_string(EpochState s);

enum class TimerKind : std::uint8_t { Certificate, Commit, EpochChange };

std::string_view to_string(TimerKind k);

// At most one timer per (kind, epoch); COMMIT timers carry the locked id or nil.
struct TimerId {
    TimerKind kind = TimerKind::Certificate;
    Epoch epoch = 0;
    std::optional<BlockId> block;

    auto operator<=>(const TimerId&) const = default;
};

namespace payload {

// Payloads end with a 4-byte FNV-1a checksum of the preceding bytes; this is
// the default application validity check.
std::uint32_t checksum(ByteView body);
Bytes make(std::size_t size, std::uint64_t seed);
bool checksum_ok(const Bytes& payload);
// (declared, computed) checksum pair, for trace records.
std::pair<std::uint32_t, std::uint32_t> checksums(const Bytes& payload);

}  // namespace payload

}  // namespace alterbft
