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

#include <doctest.h>

#include <set>

#include "alterbft/rng.hpp"
#include "alterbft/types.hpp"
#include "helpers.hpp"

using namespace alterbft;
using test::Keys;

TEST_CASE("certificate recency compares epochs") {
    const BlockId x{};
    CHECK(certificate_recency(BlockCert{5, x, {}}, BlockCert{3, x, {}}) == std::strong_ordering::greater);
    CHECK(certificate_recency(BlockCert{3, x, {}}, BlockCert{3, x, {}}) == std::strong_ordering::equal);
    CHECK(certificate_recency(BlockCert{2, x, {}}, BlockCert{7, x, {}}) == std::strong_ordering::less);
}

TEST_CASE("block certificate with f+1 distinct valid votes verifies (n=5, f=2)") {
    Keys k(5);
    const auto b = test::block(1);
    CHECK(verify_certificate(Certificate{k.cert(4, b.id(), {0, 2, 4})}, *k.ring, 5, 2));
}

TEST_CASE("block certificate with a repeated signer is rejected") {
    Keys k(5);
    const auto b = test::block(1);
    auto c = k.cert(4, b.id(), {1, 1, 3});
    CHECK_FALSE(verify_certificate(Certificate{c}, *k.ring, 5, 2));
}

TEST_CASE("verify_certificate agrees with a dedupe-by-signer oracle") {
    // Oracle: a vote multiset certifies iff it has f+1 entries, all for the
    // certificate's (epoch, id), all with valid signatures and distinct signers.
    Keys k(7);
    const std::uint32_t n = 7, f = 3;
    const auto b = test::block(2), other = test::block(3);
    Rng rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        const auto count = rng.below(6) + 1;
        BlockCert c{8, b.id(), {}};
        std::set<std::uint32_t> signers;
        bool all_good = true;
        for (std::uint64_t i = 0; i < count; ++i) {
            const auto s = static_cast<std::uint32_t>(rng.below(n));
            signers.insert(s);
            const auto kind = rng.below(10);
            if (kind == 0) {
                c.votes.push_back(k.vote(s, 8, other.id()));
                all_good = false;
            } else if (kind == 1) {
                auto v = k.vote(s, 8, b.id());
                v.signature[5] ^= 1;
                c.votes.push_back(v);
                all_good = false;
            } else {
                c.votes.push_back(k.vote(s, 8, b.id()));
            }
        }
        std::sort(c.votes.begin(), c.votes.end(),
                  [](const Vote& x, const Vote& y) { return x.signer < y.signer; });
        const bool oracle = all_good && c.votes.size() == f + 1 && signers.size() == f + 1;
        CHECK(verify_certificate(Certificate{c}, *k.ring, n, f) == oracle);
    }
}

TEST_CASE("equivocation certificate needs two leader votes for different ids") {
    Keys k(5);
    const auto a = test::block(1), b = test::block(2);
    const Epoch e = 7;  // leader 2
    auto va = k.vote(2, e, a.id()), vb = k.vote(2, e, b.id());
    if (vb.block_id < va.block_id) std::swap(va, vb);
    CHECK(verify_certificate(Certificate{EquivCert{e, va, vb}}, *k.ring, 5, 2));
    CHECK_FALSE(verify_certificate(Certificate{EquivCert{e, va, va}}, *k.ring, 5, 2));
    auto wa = k.vote(3, e, a.id()), wb = k.vote(3, e, b.id());
    if (wb.block_id < wa.block_id) std::swap(wa, wb);
    CHECK_FALSE(verify_certificate(Certificate{EquivCert{e, wa, wb}}, *k.ring, 5, 2));
}

TEST_CASE("silence certificate needs f+1 distinct signers for one epoch") {
    Keys k(5);
    CHECK(verify_certificate(Certificate{k.silence_cert(3, {0, 1, 4})}, *k.ring, 5, 2));
    CHECK_FALSE(verify_certificate(Certificate{k.silence_cert(3, {0, 1})}, *k.ring, 5, 2));
    CHECK_FALSE(verify_certificate(Certificate{k.silence_cert(3, {0, 0, 1})}, *k.ring, 5, 2));
    auto mixed = k.silence_cert(3, {0, 1, 4});
    mixed.msgs[2] = k.silence(4, 2);
    CHECK_FALSE(verify_certificate(Certificate{mixed}, *k.ring, 5, 2));
}

TEST_CASE("votes and silences verify over their own signing bytes") {
    Keys k(4, 1, "ed25519");
    const auto b = test::block(9);
    auto v = k.vote(1, 3, b.id());
    CHECK(verify_vote(v, *k.ring));
    v.epoch = 4;
    CHECK_FALSE(verify_vote(v, *k.ring));
    auto s = k.silence(2, 3);
    CHECK(verify_silence(s, *k.ring));
    s.signer = ReplicaId{1};
    CHECK_FALSE(verify_silence(s, *k.ring));
    CHECK(vote_signing_bytes(1, b.id()) != silence_signing_bytes(1));
}

TEST_CASE("genesis id links the chain") {
    const auto g = test::block(1);
    const Block b2(payload::make(64, 2), g.id());
    CHECK(g.is_genesis());
    CHECK_FALSE(b2.is_genesis());
    CHECK(*b2.prev() == g.id());
    CHECK(b2.id() != g.id());
    CHECK(Block(payload::make(64, 1), std::nullopt).id() == g.id());
}

TEST_CASE("payload checksum detects corruption") {
    auto p = payload::make(100, 5);
    CHECK(p.size() == 100);
    CHECK(payload::checksum_ok(p));
    p[10] ^= 0x40;
    CHECK_FALSE(payload::checksum_ok(p));
    const auto [declared, computed] = payload::checksums(p);
    CHECK(declared != computed);
    // FNV-1a 32 of "a".
    const Bytes a{'a'};
    CHECK(payload::checksum(a) == 0xe40c292cu);
}

TEST_CASE("message kinds and epochs") {
    Keys k(5);
    const auto b = test::block(1);
    CHECK(message_type(Message{Proposal{3, b, std::nullopt}}) == MessageType::Propose);
    CHECK(message_epoch(Message{k.silence(1, 6)}) == 6);
    CHECK(message_epoch(Message{QuitEpochMsg{k.cert(9, b.id(), {0, 1, 2})}}) == 9);
    CHECK(to_string(MessageType::QuitEpoch) == "QUIT_EPOCH");
    CHECK(to_string(CertKind::Equivocation) == "EQUIV");
}
