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

#include "zippir/rlwe/rlwe.h"

#include <utility>

#include "zippir/common/bigint.h"
#include "zippir/common/errors.h"
#include "zippir/common/status_macros.h"
#include "zippir/lwe/gaussian.h"

namespace zippir {
namespace {

absl::Status CheckPolynomial(const RlweParams& params, const Polynomial& x,
                             bool reduced) {
  if (x.size() != params.ring_degree()) {
    return InputError("polynomial length differs from the ring degree");
  }
  if (reduced) {
    for (uint64_t c : x) {
      if (static_cast<uint128>(c) >= params.q().value()) {
        return InputError("polynomial coefficient not reduced modulo q");
      }
    }
  }
  return absl::OkStatus();
}

absl::Status CheckCiphertext(const RlweParams& params,
                             const RlweCiphertext& ct) {
  ZIPPIR_RETURN_IF_ERROR(CheckPolynomial(params, ct.a, true));
  return CheckPolynomial(params, ct.b, true);
}

}  // namespace

absl::StatusOr<RlweParams> RlweParams::Create(size_t ring_degree, Modulus q,
                                              uint64_t p, double sigma,
                                              KeyDistribution key_dist) {
  if (ring_degree == 0 || (ring_degree & (ring_degree - 1)) != 0) {
    return InputError("ring degree must be a power of two");
  }
  ZIPPIR_ASSIGN_OR_RETURN(
      LweParams lwe, LweParams::Create(ring_degree, q, p, sigma, key_dist));
  return RlweParams(std::move(lwe));
}

Polynomial NegacyclicMultiply(const Modulus& q, const Polynomial& x,
                              const Polynomial& y) {
  const size_t n = x.size();
  Polynomial out(n, 0);
  for (size_t i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    for (size_t j = 0; j < n; ++j) {
      uint64_t prod = q.Mul(x[i], y[j]);
      size_t k = i + j;
      if (k < n) {
        out[k] = q.Add(out[k], prod);
      } else {
        out[k - n] = q.Sub(out[k - n], prod);
      }
    }
  }
  return out;
}

RlweSecretKey RlweKeygen(const RlweParams& params, Prng& rng) {
  return RlweSecretKey{LweKeygen(params.lwe(), rng).s};
}

absl::StatusOr<RlweCiphertext> RlweEncryptWith(const RlweParams& params,
                                               const RlweSecretKey& sk,
                                               Polynomial a,
                                               const Polynomial& mu,
                                               const std::vector<int64_t>& e) {
  ZIPPIR_RETURN_IF_ERROR(CheckPolynomial(params, sk.s, false));
  ZIPPIR_RETURN_IF_ERROR(CheckPolynomial(params, a, true));
  ZIPPIR_RETURN_IF_ERROR(CheckPolynomial(params, mu, false));
  if (e.size() != params.ring_degree()) {
    return InputError("noise length differs from the ring degree");
  }
  const Modulus& q = params.q();
  Polynomial b = NegacyclicMultiply(q, a, sk.s);
  for (size_t j = 0; j < b.size(); ++j) {
    if (mu[j] >= params.p()) return InputError("message coefficient >= p");
    b[j] = q.Add(b[j], q.Mul(params.delta(), mu[j]));
    b[j] = q.Add(b[j], q.ReduceSigned(e[j]));
  }
  return RlweCiphertext{std::move(a), std::move(b)};
}

absl::StatusOr<RlweCiphertext> RlweEncrypt(const RlweParams& params,
                                           const RlweSecretKey& sk,
                                           const Polynomial& mu, Prng& rng) {
  const size_t n = params.ring_degree();
  Polynomial a(n);
  for (auto& c : a) c = rng.UniformBelow(params.q().sampling_bound());
  DiscreteGaussian chi(params.lwe().sigma());
  std::vector<int64_t> e(n);
  for (auto& c : e) c = chi.Sample(rng);
  return RlweEncryptWith(params, sk, std::move(a), mu, e);
}

Polynomial RlwePhase(const RlweParams& params, const RlweSecretKey& sk,
                     const RlweCiphertext& ct) {
  const Modulus& q = params.q();
  Polynomial as = NegacyclicMultiply(q, ct.a, sk.s);
  Polynomial phase(ct.b.size());
  for (size_t j = 0; j < phase.size(); ++j) phase[j] = q.Sub(ct.b[j], as[j]);
  return phase;
}

Polynomial RlweDecrypt(const RlweParams& params, const RlweSecretKey& sk,
                       const RlweCiphertext& ct) {
  Polynomial out = RlwePhase(params, sk, ct);
  for (auto& c : out) c = DecodePhase(params.lwe(), c);
  return out;
}

absl::StatusOr<LweCiphertext> ExtractCoefficient(const RlweParams& params,
                                                 const RlweCiphertext& ct,
                                                 size_t k) {
  ZIPPIR_RETURN_IF_ERROR(CheckCiphertext(params, ct));
  const size_t n = params.ring_degree();
  if (k >= n) return InputError("coefficient index out of range");
  const Modulus& q = params.q();
  LweCiphertext out{std::vector<uint64_t>(n), ct.b[k]};
  for (size_t i = 0; i < n; ++i) {
    out.a[i] = i <= k ? ct.a[k - i] : q.Neg(ct.a[n + k - i]);
  }
  return out;
}

absl::StatusOr<CompressionKey> MakeRlweCompressionKey(
    const PaillierSecretKey& paillier_sk, const RlweParams& params,
    const RlweSecretKey& sk, Prng& rng) {
  return MakeCompressionKey(paillier_sk, params.lwe(), LweSecretKey{sk.s}, rng);
}

absl::StatusOr<CompressionKey> MakeRlweCompressionKey(
    const PaillierPublicKey& pk, const RlweParams& params,
    const RlweSecretKey& sk, Prng& rng) {
  return MakeCompressionKey(pk, params.lwe(), LweSecretKey{sk.s}, rng);
}

absl::StatusOr<CompressedCiphertext> RlweCompressCoefficient(
    const CompressionKey& key, const RlweCiphertext& ct, size_t k) {
  const LweParams& lwe = key.params;
  ZIPPIR_RETURN_IF_ERROR(CheckCompressionModulus(key.pk, lwe));
  const size_t n = lwe.n();
  if (ct.a.size() != n || ct.b.size() != n || key.ck.size() != n) {
    return InputError("ciphertext or key length differs from the ring degree");
  }
  if (k >= n) return InputError("coefficient index out of range");
  const mpz_class q = lwe.q().ToMpz();
  const PaillierPublicKey& pk = key.pk;
  PaillierCiphertext x = pk.TrivialEncrypt(FromU64(ct.b[k]));
  for (size_t i = 0; i <= k; ++i) {
    pk.AddInPlace(x, pk.ScalarMul(q - FromU64(ct.a[k - i]), key.ck[i]));
  }
  for (size_t i = k + 1; i < n; ++i) {
    pk.AddInPlace(x, pk.ScalarMul(FromU64(ct.a[n + k - i]), key.ck[i]));
  }
  return CompressedCiphertext{std::move(x), CompressionBound(lwe), 1,
                              key.key_scaling};
}

absl::StatusOr<uint64_t> ModifiedRlweDecrypt(const PaillierSecretKey& sk,
                                             const RlweParams& params,
                                             const CompressedCiphertext& cc) {
  return ModifiedLweDecrypt(sk, params.lwe(), cc);
}

}  // namespace zippir
