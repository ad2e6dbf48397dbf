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

#include "alterbft/crypto.hpp"

#include <sodium.h>

#include <stdexcept>

namespace alterbft::crypto {

namespace {

void ensure_sodium() {
    static const bool ready = [] {
        if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
        return true;
    }();
    (void)ready;
}

std::array<std::uint8_t, 32> derive_seed(std::string_view domain, std::uint64_t seed, ReplicaId owner) {
    ensure_sodium();
    std::array<std::uint8_t, 32> out{};
    crypto_generichash_state st;
    crypto_generichash_init(&st, nullptr, 0, out.size());
    crypto_generichash_update(&st, reinterpret_cast<const unsigned char*>(domain.data()), domain.size());
    std::uint8_t buf[12];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<std::uint8_t>(seed >> (8 * i));
    for (int i = 0; i < 4; ++i) buf[8 + i] = static_cast<std::uint8_t>(owner.index >> (8 * i));
    crypto_generichash_update(&st, buf, sizeof buf);
    crypto_generichash_final(&st, out.data(), out.size());
    return out;
}

class Ed25519Scheme final : public SignatureScheme {
  public:
    std::string_view name() const override { return "ed25519"; }

    KeyPair generate(ReplicaId owner, std::uint64_t seed) const override {
        auto s = derive_seed("alterbft/ed25519", seed, owner);
        KeyPair kp{Bytes(crypto_sign_PUBLICKEYBYTES), Bytes(crypto_sign_SECRETKEYBYTES), owner};
        crypto_sign_seed_keypair(kp.public_key.data(), kp.secret_key.data(), s.data());
        return kp;
    }

    Signature sign(const KeyPair& key, ByteView message) const override {
        static_assert(crypto_sign_BYTES == kSignatureSize);
        Signature sig{};
        crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), key.secret_key.data());
        return sig;
    }

    bool verify(ByteView public_key, ByteView message, const Signature& sig) const override {
        if (public_key.size() != crypto_sign_PUBLICKEYBYTES) return false;
        return crypto_sign_verify_detached(sig.data(), message.data(), message.size(), public_key.data()) == 0;
    }
};

class MacScheme final : public SignatureScheme {
  public:
    std::string_view name() const override { return "mac"; }

    KeyPair generate(ReplicaId owner, std::uint64_t seed) const override {
        auto s = derive_seed("alterbft/mac", seed, owner);
        Bytes key(s.begin(), s.end());
        return KeyPair{key, key, owner};
    }

    Signature sign(const KeyPair& key, ByteView message) const override { return hmac(key.secret_key, message); }

    bool verify(ByteView public_key, ByteView message, const Signature& sig) const override {
        auto expected = hmac(public_key, message);
        return sodium_memcmp(expected.data(), sig.data(), sig.size()) == 0;
    }

  private:
    static Signature hmac(ByteView key, ByteView message) {
        static_assert(crypto_auth_hmacsha512_BYTES == kSignatureSize);
        Signature sig{};
        crypto_auth_hmacsha512_state st;
        crypto_auth_hmacsha512_init(&st, key.data(), key.size());
        crypto_auth_hmacsha512_update(&st, message.data(), message.size());
        crypto_auth_hmacsha512_final(&st, sig.data());
        return sig;
    }
};

}  // namespace

BlockId hash(ByteView bytes) {
    Hasher h;
    h.update(bytes);
    return h.finish();
}

static_assert(sizeof(crypto_generichash_state) <= 384);

Hasher::Hasher() {
    ensure_sodium();
    crypto_generichash_init(reinterpret_cast<crypto_generichash_state*>(state_.data()), nullptr, 0,
                            BlockId::kSize);
}

void Hasher::update(ByteView bytes) {
    crypto_generichash_update(reinterpret_cast<crypto_generichash_state*>(state_.data()), bytes.data(),
                              bytes.size());
}

BlockId Hasher::finish() {
    BlockId id;
    crypto_generichash_final(reinterpret_cast<crypto_generichash_state*>(state_.data()), id.digest.data(),
                             id.digest.size());
    return id;
}

std::shared_ptr<const SignatureScheme> ed25519_scheme() {
    ensure_sodium();
    static const auto scheme = std::make_shared<const Ed25519Scheme>();
    return scheme;
}

std::shared_ptr<const SignatureScheme> mac_scheme() {
    ensure_sodium();
    static const auto scheme = std::make_shared<const MacScheme>();
    return scheme;
}

std::shared_ptr<const SignatureScheme> scheme_by_name(std::string_view name) {
    if (name == "ed25519") return ed25519_scheme();
    if (name == "mac") return mac_scheme();
    throw std::invalid_argument("unknown signature scheme: " + std::string(name));
}

Keyring::Keyring(std::shared_ptr<const SignatureScheme> scheme, std::vector<Bytes> public_keys)
    : scheme_(std::move(scheme)), public_keys_(std::move(public_keys)) {}

Keyring Keyring::generate(std::shared_ptr<const SignatureScheme> scheme, std::uint32_t n, std::uint64_t seed,
                          std::vector<KeyPair>& secrets) {
    secrets.clear();
    std::vector<Bytes> pubs;
    for (std::uint32_t i = 0; i < n; ++i) {
        secrets.push_back(scheme->generate(ReplicaId{i}, seed));
        pubs.push_back(secrets.back().public_key);
    }
    return Keyring(std::move(scheme), std::move(pubs));
}

bool Keyring::verify(ReplicaId signer, ByteView message, const Signature& sig) const {
    if (signer.index >= public_keys_.size()) return false;
    return scheme_->verify(public_keys_[signer.index], message, sig);
}

}  // namespace alterbft::crypto
