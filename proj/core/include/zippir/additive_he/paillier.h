// Copyright 2026 The ZipPIR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ZIPPIR_ADDITIVE_HE_PAILLIER_H_
#define ZIPPIR_ADDITIVE_HE_PAILLIER_H_

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "zippir/common/prng.h"
#include "zippir/common/wire.h"

namespace zippir {

// Element of Z_{m^2}.
struct PaillierCiphertext {
  mpz_class c;

  bool operator==(const PaillierCiphertext& other) const {
    return c == other.c;
  }
};

// Enc(mu) split as a seeded sample Enc(r) plus the public offset mu - r.
struct OffsetCiphertext {
  PaillierCiphertext sampled;
  mpz_class offset;
};

// Paillier public key with generator g = m + 1.
class PaillierPublicKey {
 public:
  // `m` must be odd and larger than 2.
  static absl::StatusOr<PaillierPublicKey> Create(const mpz_class& m);

  const mpz_class& m() const { return m_; }
  const mpz_class& m_squared() const { return m_squared_; }
  mpz_class g() const { return m_ + 1; }
  size_t bit_length() const { return bit_length_; }
  // Bytes of one plaintext (Z_m) and one ciphertext (Z_{m^2}) on the wire.
  size_t plaintext_bytes() const { return plaintext_bytes_; }
  size_t ciphertext_bytes() const { return ciphertext_bytes_; }

  // g^mu * r^m mod m^2 with r uniform in Z*_m.
  absl::StatusOr<PaillierCiphertext> Encrypt(const mpz_class& mu,
                                             Prng& rng) const;
  // Textbook encryption with caller-chosen nonce r.
  absl::StatusOr<PaillierCiphertext> EncryptWithNonce(const mpz_class& mu,
                                                      const mpz_class& r) const;
  // Deterministic encryption with r = 1, i.e. (1 + b*m) mod m^2.
  PaillierCiphertext TrivialEncrypt(const mpz_class& b) const;

  PaillierCiphertext Add(const PaillierCiphertext& a,
                         const PaillierCiphertext& b) const;
  // In-place a (+) b.
  void AddInPlace(PaillierCiphertext& a, const PaillierCiphertext& b) const;
  // a (+) TrivialEncrypt(k).
  PaillierCiphertext AddPlain(const PaillierCiphertext& a,
                              const mpz_class& k) const;
  // k (x) ct for k >= 0.
  PaillierCiphertext ScalarMul(const mpz_class& k,
                               const PaillierCiphertext& ct) const;

  // Entry i encrypts sum_j H[i][j] * Dec(v[j]) mod m.
  absl::StatusOr<std::vector<PaillierCiphertext>> MatMul(
      const std::vector<std::vector<mpz_class>>& h,
      const std::vector<PaillierCiphertext>& v) const;

  // Uniform element of [0, m^2) derived from (seed, index). May fall outside
  // Z*_{m^2}; Decrypt reports that case.
  PaillierCiphertext Sample(const Seed& seed, uint64_t index) const;

  // Offset ciphertext for a known plaintext of the sample.
  OffsetCiphertext MakeOffset(const PaillierCiphertext& sampled,
                              const mpz_class& sampled_plaintext,
                              const mpz_class& mu) const;
  // sampled (+) offset, the ordinary ciphertext of the same plaintext.
  PaillierCiphertext Recombine(const OffsetCiphertext& oc) const;

  void Serialize(WireWriter& out) const;
  static absl::StatusOr<PaillierPublicKey> Deserialize(WireReader& in);
  void SerializeCiphertext(const PaillierCiphertext& ct, WireWriter& out) const;
  absl::StatusOr<PaillierCiphertext> DeserializeCiphertext(
      WireReader& in) const;

  bool operator==(const PaillierPublicKey& other) const {
    return m_ == other.m_;
  }

 private:
  explicit PaillierPublicKey(const mpz_class& m);

  mpz_class m_;
  mpz_class m_squared_;
  size_t bit_length_;
  size_t plaintext_bytes_;
  size_t ciphertext_bytes_;
};

class PaillierSecretKey {
 public:
  // `p` and `q` must be distinct primes with gcd(pq, (p-1)(q-1)) = 1.
  static absl::StatusOr<PaillierSecretKey> FromPrimes(const mpz_class& p,
                                                      const mpz_class& q);

  const PaillierPublicKey& public_key() const { return pk_; }
  const mpz_class& p() const { return p_; }
  const mpz_class& q() const { return q_; }
  // Carmichael value lcm(p-1, q-1) and its inverse mod m.
  const mpz_class& lambda() const { return lambda_; }
  const mpz_class& lambda_inverse() const { return lambda_inverse_; }

  // CRT decryption. Fails with InvalidCiphertext when gcd(c, m) != 1.
  absl::StatusOr<mpz_class> Decrypt(const PaillierCiphertext& ct) const;
  // Encryption using the factorization: same distribution as the public
  // encryption, at the cost of two half-size exponentiations.
  absl::StatusOr<PaillierCiphertext> Encrypt(const mpz_class& mu,
                                             Prng& rng) const;

 private:
  PaillierSecretKey(PaillierPublicKey pk, const mpz_class& p,
                    const mpz_class& q);

  mpz_class Crt(const mpz_class& xp, const mpz_class& xq,
                const mpz_class& mod_p, const mpz_class& mod_q,
                const mpz_class& inv_p_mod_q) const;

  PaillierPublicKey pk_;
  mpz_class p_, q_;
  mpz_class p_squared_, q_squared_;
  mpz_class lambda_, lambda_inverse_;
  mpz_class hp_, hq_;        // (-q)^-1 mod p and (-p)^-1 mod q
  mpz_class p_inv_mod_q_;    // for CRT over (p, q)
  mpz_class p2_inv_mod_q2_;  // for CRT over (p^2, q^2)
  mpz_class q_mod_p_minus_1_, p_mod_q_minus_1_;
};

struct PaillierKeyPair {
  PaillierPublicKey pk;
  PaillierSecretKey sk;
};

// Two random primes of bit_length/2 bits each; the modulus has exactly
// bit_length bits. bit_length must be even and at least 16.
absl::StatusOr<PaillierKeyPair> PaillierKeygen(size_t bit_length, Prng& rng);

}  // namespace zippir

#endif  // ZIPPIR_ADDITIVE_HE_PAILLIER_H_
