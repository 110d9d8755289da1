#include "ringledger/sha256.hpp"

#include <openssl/evp.h>

#include <cassert>

namespace ringledger {

Sha256::Sha256() {
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    assert(ctx != nullptr);
    int ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    assert(ok == 1);
    (void)ok;
    ctx_ = ctx;
}

Sha256::~Sha256() {
    EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_));
}

Sha256& Sha256::update(BytesView data) {
    EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), data.data(), data.size());
    return *this;
}

Sha256& Sha256::update(std::string_view s) {
    EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), s.data(), s.size());
    return *this;
}

Digest Sha256::finish() {
    Digest out{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(static_cast<EVP_MD_CTX*>(ctx_), out.data(), &len);
    assert(len == out.size());
    return out;
}

Digest sha256(BytesView data) {
    Sha256 h;
    h.update(data);
    return h.finish();
}

}  // namespace ringledger
