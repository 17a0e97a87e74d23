#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "keystream.hpp"
#include "rule.hpp"

namespace cacrypt {

// Public parameters of an encryption run; everything a holder of the
// password needs to regenerate the keystream.
struct CipherParams {
    Rule rule = parse_rule("B1357/S02468", "Fredkin");
    int rows = 128;
    int cols = 128;
    std::uint32_t rho = 10;
    double mu = kDefaultMu;
    std::uint32_t alpha = kDefaultAlpha;
    std::uint8_t version = 1;

    void validate() const {
        if (version != 1)
            throw std::invalid_argument("cipher: unsupported container version " + std::to_string(version));
        if (rows < 1 || rows > 65535 || cols < 1 || cols > 65535)
            throw std::invalid_argument("cipher: grid dimensions must be in 1..65535");
        if ((std::uint64_t(rows) * cols) % 8 != 0)
            throw std::invalid_argument("cipher: grid cell count must be a multiple of 8");
        if (rho < 1 || rho > 255)
            throw std::invalid_argument("cipher: rho must be in 1..255");
        if (!(mu >= kMinMu && mu <= kMaxMu))
            throw std::invalid_argument("cipher: mu must be in [3.9, 4.0]");
        if (rule.births(0))
            throw std::invalid_argument("cipher: B0 rules are rejected");
    }
};

struct CiphertextEnvelope {
    CipherParams params;
    std::uint64_t plaintext_length = 0;
    std::vector<std::uint8_t> payload; // exactly plaintext_length bytes
};

// C_i = P_i ^ C_{i-1} ^ Y_i with C_0 = 0x00. Chaining the previous
// ciphertext byte makes equal plaintext blocks encrypt differently.
inline std::vector<std::uint8_t> encrypt(std::span<const std::uint8_t> plaintext,
                                         std::span<const std::uint8_t> keystream) {
    if (keystream.size() < plaintext.size())
        throw std::invalid_argument("encrypt: keystream exhausted");
    std::vector<std::uint8_t> out(plaintext.size());
    std::uint8_t prev = 0x00;
    for (std::size_t i = 0; i < plaintext.size(); ++i) {
        prev = std::uint8_t(plaintext[i] ^ prev ^ keystream[i]);
        out[i] = prev;
    }
    return out;
}

// P_i = C_i ^ Y_i ^ C_{i-1} with C_0 = 0x00; exact inverse of encrypt.
inline std::vector<std::uint8_t> decrypt(std::span<const std::uint8_t> ciphertext,
                                         std::span<const std::uint8_t> keystream) {
    if (keystream.size() < ciphertext.size())
        throw std::invalid_argument("decrypt: keystream exhausted");
    std::vector<std::uint8_t> out(ciphertext.size());
    std::uint8_t prev = 0x00;
    for (std::size_t i = 0; i < ciphertext.size(); ++i) {
        out[i] = std::uint8_t(ciphertext[i] ^ keystream[i] ^ prev);
        prev = ciphertext[i];
    }
    return out;
}

// Study variant with C_0 = Y_1 ^ P_1. Degenerate: C_1 is always 0x00 and
// the first plaintext byte cannot be recovered from the ciphertext, which
// is why the zero-C_0 chaining above replaces it.
inline std::vector<std::uint8_t> encrypt_legacy_chained(std::span<const std::uint8_t> plaintext,
                                                        std::span<const std::uint8_t> keystream) {
    if (keystream.size() < plaintext.size())
        throw std::invalid_argument("encrypt: keystream exhausted");
    std::vector<std::uint8_t> out(plaintext.size());
    if (plaintext.empty()) return out;
    std::uint8_t prev = std::uint8_t(keystream[0] ^ plaintext[0]);
    for (std::size_t i = 0; i < plaintext.size(); ++i) {
        prev = std::uint8_t(plaintext[i] ^ prev ^ keystream[i]);
        out[i] = prev;
    }
    return out;
}

namespace detail {

inline void put_u16be(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(std::uint8_t(v >> 8));
    out.push_back(std::uint8_t(v));
}

inline void put_u32be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) out.push_back(std::uint8_t(v >> s));
}

inline void put_u64be(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int s = 56; s >= 0; s -= 8) out.push_back(std::uint8_t(v >> s));
}

struct ByteReader {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;

    std::uint8_t u8() {
        if (pos >= bytes.size()) throw FormatError("ciphertext envelope truncated");
        return bytes[pos++];
    }
    std::uint16_t u16be() { return std::uint16_t(std::uint16_t(u8()) << 8 | u8()); }
    std::uint32_t u32be() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | u8();
        return v;
    }
    std::uint64_t u64be() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = (v << 8) | u8();
        return v;
    }
};

} // namespace detail

// Container layout (all integers big-endian):
//   magic "CACR" | version u8 | rule length u8 + ASCII | rows u16 | cols u16
//   | rho u8 | alpha u32 | mu as binary64 bit pattern u64 | plaintext length
//   u64 | payload bytes.
inline std::vector<std::uint8_t> encode_envelope(const CiphertextEnvelope& env) {
    env.params.validate();
    if (env.payload.size() != env.plaintext_length)
        throw std::invalid_argument("envelope: payload length must equal plaintext_length");
    const std::string rule_text = format_rule(env.params.rule);

    std::vector<std::uint8_t> out;
    out.reserve(28 + rule_text.size() + env.payload.size());
    for (const char c : {'C', 'A', 'C', 'R'}) out.push_back(std::uint8_t(c));
    out.push_back(env.params.version);
    out.push_back(std::uint8_t(rule_text.size()));
    out.insert(out.end(), rule_text.begin(), rule_text.end());
    detail::put_u16be(out, std::uint16_t(env.params.rows));
    detail::put_u16be(out, std::uint16_t(env.params.cols));
    out.push_back(std::uint8_t(env.params.rho));
    detail::put_u32be(out, env.params.alpha);
    detail::put_u64be(out, std::bit_cast<std::uint64_t>(env.params.mu));
    detail::put_u64be(out, env.plaintext_length);
    out.insert(out.end(), env.payload.begin(), env.payload.end());
    return out;
}

inline CiphertextEnvelope decode_envelope(std::span<const std::uint8_t> bytes) {
    detail::ByteReader in{bytes};
    if (in.u8() != 0x43 || in.u8() != 0x41 || in.u8() != 0x43 || in.u8() != 0x52)
        throw FormatError("ciphertext envelope: bad magic (expected \"CACR\")");

    CiphertextEnvelope env;
    env.params.version = in.u8();
    if (env.params.version != 1)
        throw FormatError("ciphertext envelope: unsupported version " +
                          std::to_string(env.params.version));

    const std::size_t rule_len = in.u8();
    std::string rule_text;
    for (std::size_t i = 0; i < rule_len; ++i) rule_text += char(in.u8());
    try {
        env.params.rule = parse_rule(rule_text);
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("ciphertext envelope: ") + e.what());
    }

    env.params.rows = in.u16be();
    env.params.cols = in.u16be();
    env.params.rho = in.u8();
    env.params.alpha = in.u32be();
    env.params.mu = std::bit_cast<double>(in.u64be());
    env.plaintext_length = in.u64be();

    try {
        env.params.validate();
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("ciphertext envelope: ") + e.what());
    }

    if (bytes.size() - in.pos != env.plaintext_length)
        throw FormatError("ciphertext envelope: payload length mismatch");
    env.payload.assign(bytes.begin() + std::ptrdiff_t(in.pos), bytes.end());
    return env;
}

// Full pipeline: password -> seed grid -> keystream -> chained XOR.
// Deterministic: identical inputs give identical envelopes (the scheme has
// no nonce; see README for the security consequences).
inline CiphertextEnvelope seal(std::span<const std::uint8_t> plaintext,
                               const std::array<std::uint8_t, 16>& password,
                               const CipherParams& params) {
    params.validate();
    const SeedConfig seed{password, params.mu, params.alpha, kDefaultEpsilon};
    KeystreamGenerator gen = make_keystream(seed, params.rows, params.cols, params.rule, params.rho);
    CiphertextEnvelope env;
    env.params = params;
    env.plaintext_length = plaintext.size();
    env.payload = encrypt(plaintext, gen.next_bytes(plaintext.size()));
    return env;
}

// Regenerates the keystream from the envelope's public parameters and the
// password. A wrong password yields garbage, not an error: the scheme is
// unauthenticated.
inline std::vector<std::uint8_t> open(const CiphertextEnvelope& env,
                                      const std::array<std::uint8_t, 16>& password) {
    env.params.validate();
    if (env.payload.size() != env.plaintext_length)
        throw FormatError("envelope: payload length must equal plaintext_length");
    const SeedConfig seed{password, env.params.mu, env.params.alpha, kDefaultEpsilon};
    KeystreamGenerator gen =
        make_keystream(seed, env.params.rows, env.params.cols, env.params.rule, env.params.rho);
    return decrypt(env.payload, gen.next_bytes(env.payload.size()));
}

} // namespace cacrypt
