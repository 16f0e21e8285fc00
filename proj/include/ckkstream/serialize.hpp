// Versioned little-endian container for plaintexts, ciphertexts and key
// material, plus message-file helpers (CSV and binary complex vectors).
// Layouts are byte-exact across platforms.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ckkstream/ckks.hpp"

namespace cks {

void save_plaintext(const Plaintext& pt, const std::string& path);
Plaintext load_plaintext(const std::string& path);

void save_ciphertext(const Ciphertext& ct, const std::string& path);
Ciphertext load_ciphertext(const std::string& path);

void save_keys(const KeyMaterial& keys, const std::string& path);
KeyMaterial load_keys(const std::string& path);

// message files: N/2 complex pairs, either "re,im" CSV lines or the binary
// container (chosen by extension .csv vs anything else)
void save_message(const std::vector<RedComplex>& slots, const std::string& path);
std::vector<RedComplex> load_message(const std::string& path);

// in-memory encodings used for hashing and the C API
std::vector<uint8_t> ciphertext_bytes(const Ciphertext& ct);
std::vector<uint8_t> plaintext_bytes(const Plaintext& pt);

}  // namespace cks
