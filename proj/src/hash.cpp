#include "petition/hash.hpp"

#include <openssl/evp.h>

#include <memory>
#include <stdexcept>

#include "petition/errors.hpp"

namespace petition {

namespace {
struct CtxDeleter {
    void operator()(EVP_CIPHER_CTX* c) const { EVP_CIPHER_CTX_free(c); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CtxDeleter>;
}  // namespace

Bytes sha256(std::span<const std::uint8_t> data) {
    Bytes out(32);
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != 32) {
        throw std::runtime_error("sha256 failed");
    }
    return out;
}

Bytes tagged_hash(std::span<const std::uint8_t> tag, std::span<const std::uint8_t> data) {
    Bytes buf;
    put_field(buf, tag);
    buf.insert(buf.end(), data.begin(), data.end());
    return sha256(buf);
}

AeadBox aead_seal(std::span<const std::uint8_t> key, Bytes nonce,
                  std::span<const std::uint8_t> plaintext,
                  std::span<const std::uint8_t> aad) {
    if (key.size() != 32 || nonce.size() != 12) {
        throw parameter_error("bad aead parameters");
    }
    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx) throw std::runtime_error("EVP_CIPHER_CTX_new failed");

    if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), nonce.data()) != 1) {
        throw std::runtime_error("aead init failed");
    }
    int len = 0;
    if (!aad.empty() &&
        EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())) != 1) {
        throw std::runtime_error("aead aad failed");
    }
    Bytes body(plaintext.size() + 16);
    int out_len = 0;
    if (!plaintext.empty() &&
        EVP_EncryptUpdate(ctx.get(), body.data(), &out_len, plaintext.data(),
                          static_cast<int>(plaintext.size())) != 1) {
        throw std::runtime_error("aead encrypt failed");
    }
    int fin_len = 0;
    if (EVP_EncryptFinal_ex(ctx.get(), body.data() + out_len, &fin_len) != 1) {
        throw std::runtime_error("aead finalize failed");
    }
    out_len += fin_len;
    if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, 16, body.data() + out_len) != 1) {
        throw std::runtime_error("aead tag failed");
    }
    body.resize(static_cast<std::size_t>(out_len) + 16);
    return AeadBox{std::move(nonce), std::move(body)};
}

Bytes aead_open(std::span<const std::uint8_t> key, const AeadBox& box,
                std::span<const std::uint8_t> aad) {
    if (key.size() != 32 || box.nonce.size() != 12 || box.body.size() < 16) {
        throw verification_error("authentication failure");
    }
    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx) throw std::runtime_error("EVP_CIPHER_CTX_new failed");

    if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(),
                           box.nonce.data()) != 1) {
        throw std::runtime_error("aead init failed");
    }
    int len = 0;
    if (!aad.empty() &&
        EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())) != 1) {
        throw std::runtime_error("aead aad failed");
    }
    std::size_t ct_len = box.body.size() - 16;
    Bytes plain(ct_len);
    int out_len = 0;
    if (ct_len > 0 &&
        EVP_DecryptUpdate(ctx.get(), plain.data(), &out_len, box.body.data(),
                          static_cast<int>(ct_len)) != 1) {
        throw verification_error("authentication failure");
    }
    Bytes tag(box.body.begin() + static_cast<std::ptrdiff_t>(ct_len), box.body.end());
    if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, 16, tag.data()) != 1) {
        throw std::runtime_error("aead tag set failed");
    }
    int fin_len = 0;
    if (EVP_DecryptFinal_ex(ctx.get(), plain.data() + out_len, &fin_len) != 1) {
        throw verification_error("authentication failure");
    }
    plain.resize(static_cast<std::size_t>(out_len) + static_cast<std::size_t>(fin_len));
    return plain;
}

}  // namespace petition
