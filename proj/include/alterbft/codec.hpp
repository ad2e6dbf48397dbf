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

#include <stdexcept>

#include "alterbft/crypto.hpp"
#include "alterbft/types.hpp"

// Canonical binary encoding. Integers are little-endian fixed width; variable
// parts carry explicit length prefixes; certificate member lists are sorted by
// signer (EquivCert votes by block id). Decoding rejects anything that would
// not re-encode to the same bytes.
namespace alterbft::codec {

class DecodeError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ByteSink {
    Bytes out;
    void put(ByteView b) { out.insert(out.end(), b.begin(), b.end()); }
};

struct CountSink {
    std::size_t count = 0;
    void put(ByteView b) { count += b.size(); }
};

struct HashSink {
    crypto::Hasher hasher;
    void put(ByteView b) { hasher.update(b); }
};

template <class Sink>
class Writer {
  public:
    explicit Writer(Sink& sink) : sink_(sink) {}

    void u8(std::uint8_t v) { sink_.put(ByteView(&v, 1)); }
    void u16(std::uint16_t v) { le(v); }
    void u32(std::uint32_t v) { le(v); }
    void u64(std::uint64_t v) { le(v); }
    void raw(ByteView b) { sink_.put(b); }
    void id(const BlockId& b) { raw(b.digest); }
    void signature(const Signature& s) {
        u16(static_cast<std::uint16_t>(s.size()));
        raw(s);
    }

    void block(const Block& b) { block(b.payload(), b.prev()); }
    void block(const Bytes& payload, const std::optional<BlockId>& prev) {
        u32(static_cast<std::uint32_t>(payload.size()));
        raw(payload);
        u8(prev ? 1 : 0);
        if (prev) id(*prev);
    }

    // Vote without the message type tag.
    void vote_body(const Vote& v) {
        u64(v.epoch);
        id(v.block_id);
        u32(v.signer.index);
        signature(v.signature);
    }

    void block_cert_body(const BlockCert& c) {
        u64(c.epoch);
        id(c.block_id);
        u32(static_cast<std::uint32_t>(c.votes.size()));
        for (const auto& v : c.votes) {
            u32(v.signer.index);
            signature(v.signature);
        }
    }

    void certificate(const Certificate& c) {
        u8(static_cast<std::uint8_t>(cert_kind(c)));
        std::visit(
            [this](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, BlockCert>) {
                    block_cert_body(x);
                } else if constexpr (std::is_same_v<T, EquivCert>) {
                    u64(x.epoch);
                    vote_body(x.vote_a);
                    vote_body(x.vote_b);
                } else {
                    u64(x.epoch);
                    u32(static_cast<std::uint32_t>(x.msgs.size()));
                    for (const auto& s : x.msgs) {
                        u32(s.signer.index);
                        signature(s.signature);
                    }
                }
            },
            c);
    }

    void message(const Message& m) {
        u8(static_cast<std::uint8_t>(message_type(m)));
        std::visit(
            [this](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, Proposal>) {
                    u64(x.epoch);
                    block(x.block);
                    u8(x.justification ? 1 : 0);
                    if (x.justification) block_cert_body(*x.justification);
                } else if constexpr (std::is_same_v<T, Vote>) {
                    vote_body(x);
                } else if constexpr (std::is_same_v<T, SilenceMsg>) {
                    u64(x.epoch);
                    u32(x.signer.index);
                    signature(x.signature);
                } else {
                    certificate(x.cert);
                }
            },
            m);
    }

  private:
    template <class T>
    void le(T v) {
        std::uint8_t buf[sizeof(T)];
        for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<std::uint8_t>(v >> (8 * i));
        sink_.put(ByteView(buf, sizeof(T)));
    }

    Sink& sink_;
};

class Reader {
  public:
    explicit Reader(ByteView in) : in_(in) {}

    std::uint8_t u8();
    std::uint16_t u16();
    std::uint32_t u32();
    std::uint64_t u64();
    ByteView raw(std::size_t len);
    BlockId id();
    Signature signature();

    Block block();
    Vote vote_body();
    BlockCert block_cert_body();
    Certificate certificate();
    Message message();

    std::size_t remaining() const { return in_.size() - pos_; }
    void expect_end() const;

  private:
    ByteView in_;
    std::size_t pos_ = 0;
};

Bytes encode(const Message& m);
Bytes encode(const Certificate& c);
Bytes encode(const Block& b);
std::size_t encoded_size(const Message& m);

// All decoders consume the whole input or throw DecodeError.
Message decode_message(ByteView in);
Certificate decode_certificate(ByteView in);
Block decode_block(ByteView in);

BlockId block_id(const Bytes& payload, const std::optional<BlockId>& prev);

}  // namespace alterbft::codec
