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

#include "alterbft/codec.hpp"

#include <algorithm>

namespace alterbft::codec {

namespace {

template <class T>
T read_le(Reader& r) {
    auto b = r.raw(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(b[i]) << (8 * i);
    return v;
}

template <class T, class Key>
void require_strictly_sorted(const std::vector<T>& items, Key key, const char* what) {
    for (std::size_t i = 1; i < items.size(); ++i) {
        if (!(key(items[i - 1]) < key(items[i]))) throw DecodeError(std::string(what) + " not strictly sorted");
    }
}

}  // namespace

std::uint8_t Reader::u8() { return raw(1)[0]; }
std::uint16_t Reader::u16() { return read_le<std::uint16_t>(*this); }
std::uint32_t Reader::u32() { return read_le<std::uint32_t>(*this); }
std::uint64_t Reader::u64() { return read_le<std::uint64_t>(*this); }

ByteView Reader::raw(std::size_t len) {
    if (len > remaining()) throw DecodeError("truncated input");
    auto out = in_.subspan(pos_, len);
    pos_ += len;
    return out;
}

BlockId Reader::id() {
    BlockId out;
    auto b = raw(BlockId::kSize);
    std::copy(b.begin(), b.end(), out.digest.begin());
    return out;
}

Signature Reader::signature() {
    if (u16() != kSignatureSize) throw DecodeError("bad signature length");
    Signature s{};
    auto b = raw(kSignatureSize);
    std::copy(b.begin(), b.end(), s.begin());
    return s;
}

Block Reader::block() {
    const auto len = u32();
    auto body = raw(len);
    Bytes payload(body.begin(), body.end());
    const auto flag = u8();
    if (flag > 1) throw DecodeError("bad prev flag");
    std::optional<BlockId> prev;
    if (flag) prev = id();
    return Block(std::move(payload), prev);
}

Vote Reader::vote_body() {
    Vote v;
    v.epoch = u64();
    v.block_id = id();
    v.signer = ReplicaId{u32()};
    v.signature = signature();
    return v;
}

BlockCert Reader::block_cert_body() {
    BlockCert c;
    c.epoch = u64();
    c.block_id = id();
    const auto count = u32();
    if (count > remaining() / (4 + 2 + kSignatureSize)) throw DecodeError("vote count exceeds input");
    c.votes.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        Vote v;
        v.epoch = c.epoch;
        v.block_id = c.block_id;
        v.signer = ReplicaId{u32()};
        v.signature = signature();
        c.votes.push_back(v);
    }
    require_strictly_sorted(c.votes, [](const Vote& v) { return v.signer; }, "votes");
    return c;
}

Certificate Reader::certificate() {
    switch (u8()) {
    case static_cast<std::uint8_t>(CertKind::Block):
        return block_cert_body();
    case static_cast<std::uint8_t>(CertKind::Equivocation): {
        EquivCert c;
        c.epoch = u64();
        c.vote_a = vote_body();
        c.vote_b = vote_body();
        if (!(c.vote_a.block_id < c.vote_b.block_id)) throw DecodeError("equivocation votes not sorted");
        return c;
    }
    case static_cast<std::uint8_t>(CertKind::Silence): {
        SilenceCert c;
        c.epoch = u64();
        const auto count = u32();
        if (count > remaining() / (4 + 2 + kSignatureSize)) throw DecodeError("silence count exceeds input");
        for (std::uint32_t i = 0; i < count; ++i) {
            SilenceMsg s;
            s.epoch = c.epoch;
            s.signer = ReplicaId{u32()};
            s.signature = signature();
            c.msgs.push_back(s);
        }
        require_strictly_sorted(c.msgs, [](const SilenceMsg& s) { return s.signer; }, "silences");
        return c;
    }
    default:
        throw DecodeError("unknown certificate kind");
    }
}

Message Reader::message() {
    switch (u8()) {
    case static_cast<std::uint8_t>(MessageType::Propose): {
        const auto epoch = u64();
        auto b = block();
        const auto flag = u8();
        if (flag > 1) throw DecodeError("bad justification flag");
        std::optional<BlockCert> just;
        if (flag) just = block_cert_body();
        return Proposal{epoch, std::move(b), std::move(just)};
    }
    case static_cast<std::uint8_t>(MessageType::Vote):
        return vote_body();
    case static_cast<std::uint8_t>(MessageType::Silence): {
        SilenceMsg s;
        s.epoch = u64();
        s.signer = ReplicaId{u32()};
        s.signature = signature();
        return s;
    }
    case static_cast<std::uint8_t>(MessageType::QuitEpoch):
        return QuitEpochMsg{certificate()};
    default:
        throw DecodeError("unknown message type");
    }
}

void Reader::expect_end() const {
    if (remaining() != 0) throw DecodeError("trailing bytes");
}

Bytes encode(const Message& m) {
    ByteSink s;
    Writer(s).message(m);
    return std::move(s.out);
}

Bytes encode(const Certificate& c) {
    ByteSink s;
    Writer(s).certificate(c);
    return std::move(s.out);
}

Bytes encode(const Block& b) {
    ByteSink s;
    Writer(s).block(b);
    return std::move(s.out);
}

std::size_t encoded_size(const Message& m) {
    CountSink s;
    Writer(s).message(m);
    return s.count;
}

Message decode_message(ByteView in) {
    Reader r(in);
    auto m = r.message();
    r.expect_end();
    return m;
}

Certificate decode_certificate(ByteView in) {
    Reader r(in);
    auto c = r.certificate();
    r.expect_end();
    return c;
}

Block decode_block(ByteView in) {
    Reader r(in);
    auto b = r.block();
    r.expect_end();
    return b;
}

BlockId block_id(const Bytes& payload, const std::optional<BlockId>& prev) {
    HashSink s;
    Writer(s).block(payload, prev);
    return s.hasher.finish();
}

}  // namespace alterbft::codec
