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
#include <string_view>
#include <vector>

#include "alterbft/common.hpp"

namespace alterbft::crypto {

// BLAKE2b-256.
BlockId hash(ByteView bytes);

// Incremental form of hash(), used to digest large blocks without copying them.
class Hasher {
  public:
    Hasher();
    void update(ByteView bytes);
    BlockId finish();

  private:
    alignas(64) std::array<std::uint8_t, 384> state_{};
};

struct KeyPair {
    Bytes public_key;
    Bytes secret_key;
    ReplicaId owner;
};

class SignatureScheme {
  public:
    virtual ~SignatureScheme() = default;

    virtual std::string_view name() const = 0;
    // Keys are derived deterministically from (seed, owner).
    virtual KeyPair generate(ReplicaId owner, std::uint64_t seed) const = 0;
    virtual Signature sign(const KeyPair& key, ByteView message) const = 0;
    virtual bool verify(ByteView public_key, ByteView message, const Signature& sig) const = 0;
};

// Ed25519 (64-byte signatures).
std::shared_ptr<const SignatureScheme> ed25519_scheme();
// HMAC-SHA512 under a per-signer test secret. The "public" key is the secret
// itself, so this is only unforgeable against code that does not read keys.
std::shared_ptr<const SignatureScheme> mac_scheme();
// "ed25519" or "mac"; throws std::invalid_argument otherwise.
std::shared_ptr<const SignatureScheme> scheme_by_name(std::string_view name);

// Public keys of all n replicas.
class Keyring {
  public:
    Keyring(std::shared_ptr<const SignatureScheme> scheme, std::vector<Bytes> public_keys);

    // Generates n key pairs from seed; returns the keyring and fills secrets.
    static Keyring generate(std::shared_ptr<const SignatureScheme> scheme, std::uint32_t n,
                            std::uint64_t seed, std::vector<KeyPair>& secrets);

    std::uint32_t size() const { return static_cast<std::uint32_t>(public_keys_.size()); }
    const SignatureScheme& scheme() const { return *scheme_; }
    bool verify(ReplicaId signer, ByteView message, const Signature& sig) const;

  private:
    std::shared_ptr<const SignatureScheme> scheme_;
    std::vector<Bytes> public_keys_;
};

}  // namespace alterbft::crypto
