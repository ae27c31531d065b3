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

#include "zippir/additive_he/paillier.h"

#include <utility>

#include "absl/strings/str_cat.h"
#include "zippir/additive_he/op_counters.h"
#include "zippir/common/bigint.h"
#include "zippir/common/errors.h"

namespace zippir {
namespace {

// Miller-Rabin rounds; 2^-100 error bound for random candidates is reached
// well before this.
constexpr int kPrimalityReps = 40;

bool IsUnitMod(const mpz_class& c, const mpz_class& m) {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
  return g == 1;
}

mpz_class PowMod(const mpz_class& base, const mpz_class& exp,
                 const mpz_class& mod) {
  mpz_class r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
  return r;
}

mpz_class Invert(const mpz_class& x, const mpz_class& mod) {
  mpz_class r;
  mpz_invert(r.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
  return r;
}

mpz_class MulMod(const mpz_class& a, const mpz_class& b, const mpz_class& mod) {
  mpz_class r;
  mpz_mul(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  mpz_tdiv_r(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
  return r;
}

// Prime with exactly `bits` bits and its two top bits set, so the product of
// two such primes has exactly 2 * bits bits.
mpz_class RandomPrime(size_t bits, Prng& rng) {
  while (true) {
    mpz_class candidate = rng.RandomBits(bits);
    mpz_setbit(candidate.get_mpz_t(), bits - 1);
    mpz_setbit(candidate.get_mpz_t(), bits - 2);
    mpz_setbit(candidate.get_mpz_t(), 0);
    mpz_class prime;
    mpz_nextprime(prime.get_mpz_t(), candidate.get_mpz_t());
    if (BitLength(prime) != bits) continue;
    if (mpz_probab_prime_p(prime.get_mpz_t(), kPrimalityReps) == 0) continue;
    return prime;
  }
}

}  // namespace

PaillierPublicKey::PaillierPublicKey(const mpz_class& m)
    : m_(m),
      m_squared_(m * m),
      bit_length_(BitLength(m)),
      plaintext_bytes_(ByteWidth(m)),
      ciphertext_bytes_(ByteWidth(m * m)) {}

absl::StatusOr<PaillierPublicKey> PaillierPublicKey::Create(
    const mpz_class& m) {
  if (m <= 2 || mpz_even_p(m.get_mpz_t())) {
    return InputError("Paillier modulus must be odd and larger than 2");
  }
  return PaillierPublicKey(m);
}

absl::StatusOr<PaillierCiphertext> PaillierPublicKey::EncryptWithNonce(
    const mpz_class& mu, const mpz_class& r) const {
  if (mu < 0 || mu >= m_) return InputError("plaintext outside [0, m)");
  if (r <= 0 || r >= m_ || !IsUnitMod(r, m_)) {
    return InputError("nonce must be a unit modulo m");
  }
  OpCounters::Global().CountEncryption();
  OpCounters::Global().CountExponentiations();
  mpz_class rm = PowMod(r, m_, m_squared_);
  return PaillierCiphertext{MulMod(1 + mu * m_, rm, m_squared_)};
}

absl::StatusOr<PaillierCiphertext> PaillierPublicKey::Encrypt(
    const mpz_class& mu, Prng& rng) const {
  mpz_class r;
  do {
    r = rng.UniformBelow(m_);
  } while (r == 0 || !IsUnitMod(r, m_));
  return EncryptWithNonce(mu, r);
}

PaillierCiphertext PaillierPublicKey::TrivialEncrypt(const mpz_class& b) const {
  mpz_class reduced = b % m_;
  if (reduced < 0) reduced += m_;
  return PaillierCiphertext{(1 + reduced * m_) % m_squared_};
}

PaillierCiphertext PaillierPublicKey::Add(const PaillierCiphertext& a,
                                          const PaillierCiphertext& b) const {
  OpCounters::Global().CountAdditions();
  return PaillierCiphertext{MulMod(a.c, b.c, m_squared_)};
}

void PaillierPublicKey::AddInPlace(PaillierCiphertext& a,
                                   const PaillierCiphertext& b) const {
  OpCounters::Global().CountAdditions();
  mpz_mul(a.c.get_mpz_t(), a.c.get_mpz_t(), b.c.get_mpz_t());
  mpz_tdiv_r(a.c.get_mpz_t(), a.c.get_mpz_t(), m_squared_.get_mpz_t());
}

PaillierCiphertext PaillierPublicKey::AddPlain(const PaillierCiphertext& a,
                                               const mpz_class& k) const {
  OpCounters::Global().CountAdditions();
  OpCounters::Global().CountPlainAdditions();
  return PaillierCiphertext{MulMod(a.c, TrivialEncrypt(k).c, m_squared_)};
}

PaillierCiphertext PaillierPublicKey::ScalarMul(
    const mpz_class& k, const PaillierCiphertext& ct) const {
  OpCounters::Global().CountScalarMul();
  return PaillierCiphertext{PowMod(ct.c, k, m_squared_)};
}

absl::StatusOr<std::vector<PaillierCiphertext>> PaillierPublicKey::MatMul(
    const std::vector<std::vector<mpz_class>>& h,
    const std::vector<PaillierCiphertext>& v) const {
  std::vector<PaillierCiphertext> out;
  out.reserve(h.size());
  for (const auto& row : h) {
    if (row.size() != v.size()) {
      return InputError(absl::StrCat("matrix row has ", row.size(),
                                     " columns, vector has ", v.size()));
    }
    PaillierCiphertext acc = TrivialEncrypt(0);
    for (size_t j = 0; j < row.size(); ++j) {
      if (row[j] < 0) return InputError("matrix entries must be non-negative");
      AddInPlace(acc, ScalarMul(row[j], v[j]));
    }
    out.push_back(std::move(acc));
  }
  return out;
}

PaillierCiphertext PaillierPublicKey::Sample(const Seed& seed,
                                             uint64_t index) const {
  OpCounters::Global().CountSample();
  Prng prng(seed, PrgDomain::kPaillierSample, index);
  return PaillierCiphertext{prng.UniformBelow(m_squared_)};
}

OffsetCiphertext PaillierPublicKey::MakeOffset(
    const PaillierCiphertext& sampled, const mpz_class& sampled_plaintext,
    const mpz_class& mu) const {
  mpz_class offset = (mu - sampled_plaintext) % m_;
  if (offset < 0) offset += m_;
  return OffsetCiphertext{sampled, offset};
}

PaillierCiphertext PaillierPublicKey::Recombine(
    const OffsetCiphertext& oc) const {
  return AddPlain(oc.sampled, oc.offset);
}

void PaillierPublicKey::Serialize(WireWriter& out) const {
  out.PutBigInt(m_, plaintext_bytes_);
}

absl::StatusOr<PaillierPublicKey> PaillierPublicKey::Deserialize(
    WireReader& in) {
  auto m = in.GetBigInt();
  if (!m.ok()) return m.status();
  return Create(*m);
}

void PaillierPublicKey::SerializeCiphertext(const PaillierCiphertext& ct,
                                            WireWriter& out) const {
  out.PutBigInt(ct.c, ciphertext_bytes_);
}

absl::StatusOr<PaillierCiphertext> PaillierPublicKey::DeserializeCiphertext(
    WireReader& in) const {
  auto c = in.GetBigInt();
  if (!c.ok()) return c.status();
  if (*c >= m_squared_) return ProtocolError("ciphertext not below m^2");
  return PaillierCiphertext{*c};
}

PaillierSecretKey::PaillierSecretKey(PaillierPublicKey pk, const mpz_class& p,
                                     const mpz_class& q)
    : pk_(std::move(pk)), p_(p), q_(q) {
  p_squared_ = p_ * p_;
  q_squared_ = q_ * q_;
  mpz_class pm1 = p_ - 1, qm1 = q_ - 1;
  mpz_lcm(lambda_.get_mpz_t(), pm1.get_mpz_t(), qm1.get_mpz_t());
  lambda_inverse_ = Invert(lambda_, pk_.m());
  mpz_class neg_q = p_ - (q_ % p_);
  mpz_class neg_p = q_ - (p_ % q_);
  hp_ = Invert(neg_q, p_);
  hq_ = Invert(neg_p, q_);
  p_inv_mod_q_ = Invert(p_, q_);
  p2_inv_mod_q2_ = Invert(p_squared_, q_squared_);
  q_mod_p_minus_1_ = q_ % pm1;
  p_mod_q_minus_1_ = p_ % qm1;
}

absl::StatusOr<PaillierSecretKey> PaillierSecretKey::FromPrimes(
    const mpz_class& p, const mpz_class& q) {
  if (p < 3 || q < 3 || p == q) {
    return InputError("Paillier primes must be distinct odd primes");
  }
  if (mpz_probab_prime_p(p.get_mpz_t(), kPrimalityReps) == 0 ||
      mpz_probab_prime_p(q.get_mpz_t(), kPrimalityReps) == 0) {
    return InputError("Paillier factors must be prime");
  }
  mpz_class m = p * q;
  mpz_class phi = (p - 1) * (q - 1);
  if (!IsUnitMod(phi, m)) {
    return InputError("gcd(pq, (p-1)(q-1)) must be 1");
  }
  auto pk = PaillierPublicKey::Create(m);
  if (!pk.ok()) return pk.status();
  return PaillierSecretKey(*std::move(pk), p, q);
}

mpz_class PaillierSecretKey::Crt(const mpz_class& xp, const mpz_class& xq,
                                 const mpz_class& mod_p, const mpz_class& mod_q,
                                 const mpz_class& inv_p_mod_q) const {
  mpz_class diff = (xq - xp) % mod_q;
  if (diff < 0) diff += mod_q;
  mpz_class t = MulMod(diff, inv_p_mod_q, mod_q);
  return xp + mod_p * t;
}

absl::StatusOr<mpz_class> PaillierSecretKey::Decrypt(
    const PaillierCiphertext& ct) const {
  const mpz_class& m = pk_.m();
  if (ct.c < 0 || ct.c >= pk_.m_squared()) {
    return InvalidCiphertextError("ciphertext outside [0, m^2)");
  }
  if (!IsUnitMod(ct.c, m)) {
    return InvalidCiphertextError("ciphertext is not a unit modulo m^2");
  }
  OpCounters::Global().CountDecryption();
  OpCounters::Global().CountExponentiations(2);
  mpz_class cp = ct.c % p_squared_;
  mpz_class cq = ct.c % q_squared_;
  mpz_class up = PowMod(cp, p_ - 1, p_squared_);
  mpz_class uq = PowMod(cq, q_ - 1, q_squared_);
  mpz_class mp = MulMod((up - 1) / p_, hp_, p_);
  mpz_class mq = MulMod((uq - 1) / q_, hq_, q_);
  return Crt(mp, mq, p_, q_, p_inv_mod_q_) % m;
}

absl::StatusOr<PaillierCiphertext> PaillierSecretKey::Encrypt(
    const mpz_class& mu, Prng& rng) const {
  const mpz_class& m = pk_.m();
  if (mu < 0 || mu >= m) return InputError("plaintext outside [0, m)");
  OpCounters::Global().CountEncryption();
  OpCounters::Global().CountExponentiations(2);
  // r^m mod p^2 is the Teichmueller lift of (r^q mod p), which is uniform in
  // Z*_p when r is, because x -> x^q permutes Z*_p. The lift of s is s^p.
  mpz_class sp, sq;
  do {
    sp = rng.UniformBelow(p_);
  } while (sp == 0);
  do {
    sq = rng.UniformBelow(q_);
  } while (sq == 0);
  mpz_class xp = PowMod(sp, p_, p_squared_);
  mpz_class xq = PowMod(sq, q_, q_squared_);
  mpz_class rm = Crt(xp, xq, p_squared_, q_squared_, p2_inv_mod_q2_);
  return PaillierCiphertext{MulMod(1 + mu * m, rm, pk_.m_squared())};
}

absl::StatusOr<PaillierKeyPair> PaillierKeygen(size_t bit_length, Prng& rng) {
  if (bit_length < 16 || bit_length % 2 != 0) {
    return InputError(absl::StrCat(
        "Paillier bit length must be even and >= 16, got ", bit_length));
  }
  const size_t half = bit_length / 2;
  while (true) {
    mpz_class p = RandomPrime(half, rng);
    mpz_class q = RandomPrime(half, rng);
    if (p == q) continue;
    mpz_class m = p * q;
    if (BitLength(m) != bit_length) continue;
    if (!IsUnitMod((p - 1) * (q - 1), m)) continue;
    auto sk = PaillierSecretKey::FromPrimes(p, q);
    if (!sk.ok()) continue;
    PaillierPublicKey pk = sk->public_key();
    return PaillierKeyPair{std::move(pk), *std::move(sk)};
  }
}

}  // namespace zippir
