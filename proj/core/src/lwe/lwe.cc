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

#include "zippir/lwe/lwe.h"

#include <utility>

#include "absl/strings/str_cat.h"
#include "zippir/common/errors.h"
#include "zippir/lwe/gaussian.h"

namespace zippir {
namespace {

uint64_t InnerProduct(const Modulus& q, const std::vector<uint64_t>& a,
                      const std::vector<uint64_t>& s) {
  if (q.is_power_of_two()) {
    // Wrap-around 64-bit arithmetic is exact modulo any q dividing 2^64.
    uint64_t acc = 0;
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * s[i];
    return q.Reduce(acc);
  }
  uint64_t acc = 0;
  for (size_t i = 0; i < a.size(); ++i) acc = q.Add(acc, q.Mul(a[i], s[i]));
  return acc;
}

std::vector<uint64_t> UniformVector(const Modulus& q, size_t n, Prng& rng) {
  std::vector<uint64_t> v(n);
  for (auto& x : v) x = rng.UniformBelow(q.sampling_bound());
  return v;
}

}  // namespace

LweParams::LweParams(size_t n, Modulus q, uint64_t p, double sigma,
                     KeyDistribution key_dist)
    : n_(n),
      q_(q),
      p_(p),
      delta_(static_cast<uint64_t>(RoundDiv(q.value(), p))),
      sigma_(sigma),
      key_dist_(key_dist) {}

absl::StatusOr<LweParams> LweParams::Create(size_t n, Modulus q, uint64_t p,
                                            double sigma,
                                            KeyDistribution key_dist) {
  if (n == 0) return InputError("LWE dimension must be positive");
  if (p < 2 || static_cast<uint128>(p) >= q.value()) {
    return InputError("plaintext modulus must satisfy 2 <= p < q");
  }
  if (RoundDiv(q.value(), p) < 2) return InputError("delta = round(q/p) < 2");
  if (sigma < 0) return InputError("noise width must be non-negative");
  return LweParams(n, q, p, sigma, key_dist);
}

LweSecretKey LweKeygen(const LweParams& params, Prng& rng) {
  LweSecretKey sk;
  sk.s.resize(params.n());
  for (auto& x : sk.s) {
    x = params.binary_key() ? (rng.NextU64() & 1)
                            : rng.UniformBelow(params.q().sampling_bound());
  }
  return sk;
}

absl::StatusOr<LweCiphertext> LweEncryptWith(const LweParams& params,
                                             const LweSecretKey& sk,
                                             std::vector<uint64_t> a,
                                             uint64_t mu, int64_t e) {
  const Modulus& q = params.q();
  if (mu >= params.p()) return InputError("plaintext outside [0, p)");
  if (a.size() != params.n() || sk.s.size() != params.n()) {
    return InputError("mask or key length differs from n");
  }
  for (auto& x : a) x = q.Reduce(x);
  uint64_t b = InnerProduct(q, a, sk.s);
  b = q.Add(b, q.Mul(params.delta(), mu));
  b = q.Add(b, q.ReduceSigned(e));
  return LweCiphertext{std::move(a), b};
}

absl::StatusOr<InstrumentedLweCiphertext> LweEncryptInstrumented(
    const LweParams& params, const LweSecretKey& sk, uint64_t mu, Prng& rng) {
  std::vector<uint64_t> a = UniformVector(params.q(), params.n(), rng);
  int64_t e = DiscreteGaussian(params.sigma()).Sample(rng);
  auto ct = LweEncryptWith(params, sk, std::move(a), mu, e);
  if (!ct.ok()) return ct.status();
  return InstrumentedLweCiphertext{*std::move(ct), e};
}

absl::StatusOr<LweCiphertext> LweEncrypt(const LweParams& params,
                                         const LweSecretKey& sk, uint64_t mu,
                                         Prng& rng) {
  auto ct = LweEncryptInstrumented(params, sk, mu, rng);
  if (!ct.ok()) return ct.status();
  return std::move(ct->ct);
}

std::vector<uint64_t> ExpandMask(const LweParams& params, const Seed& seed) {
  Prng prng(seed, PrgDomain::kLweSeeded);
  return UniformVector(params.q(), params.n(), prng);
}

absl::StatusOr<SeededLweCiphertext> LweEncryptSeeded(const LweParams& params,
                                                     const LweSecretKey& sk,
                                                     uint64_t mu, Prng& rng) {
  Seed seed = rng.NextSeed();
  int64_t e = DiscreteGaussian(params.sigma()).Sample(rng);
  auto ct = LweEncryptWith(params, sk, ExpandMask(params, seed), mu, e);
  if (!ct.ok()) return ct.status();
  return SeededLweCiphertext{seed, ct->b};
}

LweCiphertext ExpandSeeded(const LweParams& params,
                           const SeededLweCiphertext& sct) {
  return LweCiphertext{ExpandMask(params, sct.seed), sct.b};
}

uint64_t LwePhase(const LweParams& params, const LweSecretKey& sk,
                  const LweCiphertext& ct) {
  return params.q().Sub(ct.b, InnerProduct(params.q(), ct.a, sk.s));
}

uint64_t DecodePhase(const LweParams& params, uint64_t phase) {
  return static_cast<uint64_t>(RoundDiv(phase, params.delta()) % params.p());
}

uint64_t LweDecrypt(const LweParams& params, const LweSecretKey& sk,
                    const LweCiphertext& ct) {
  return DecodePhase(params, LwePhase(params, sk, ct));
}

absl::StatusOr<LweCiphertext> Rescale(const LweParams& from,
                                      const LweParams& to,
                                      const LweCiphertext& ct) {
  if (from.n() != to.n()) return InputError("rescale needs equal dimensions");
  const uint128 q = from.q().value();
  const uint128 r = to.q().value();
  if (r > q) return InputError("target modulus exceeds source modulus");
  auto map = [&](uint64_t x) -> uint64_t {
    if (r == q) return x;
    // x * r fits in 128 bits because x < 2^64 and r < 2^64 here.
    return to.q().Reduce(RoundDiv(static_cast<uint128>(x) * r, q));
  };
  LweCiphertext out;
  out.a.reserve(ct.a.size());
  for (uint64_t x : ct.a) out.a.push_back(map(x));
  out.b = map(ct.b);
  return out;
}

void SerializeLweCiphertext(const LweParams& params, const LweCiphertext& ct,
                            WireWriter& out) {
  out.PutU64(params.n());
  out.PutU64(static_cast<uint64_t>(params.q().value()));
  for (uint64_t x : ct.a) out.PutU64(x);
  out.PutU64(ct.b);
}

absl::StatusOr<LweCiphertext> DeserializeLweCiphertext(const LweParams& params,
                                                       WireReader& in) {
  auto n = in.GetU64();
  auto q = in.GetU64();
  if (!n.ok() || !q.ok()) return ProtocolError("truncated LWE header");
  if (*n != params.n() || *q != static_cast<uint64_t>(params.q().value())) {
    return ProtocolError(
        absl::StrCat("LWE header (n=", *n, ") does not match parameters"));
  }
  LweCiphertext ct;
  ct.a.resize(*n);
  for (auto& x : ct.a) {
    auto v = in.GetU64();
    if (!v.ok()) return v.status();
    if (static_cast<uint128>(*v) >= params.q().value()) {
      return ProtocolError("LWE component not reduced");
    }
    x = *v;
  }
  auto b = in.GetU64();
  if (!b.ok()) return b.status();
  if (static_cast<uint128>(*b) >= params.q().value()) {
    return ProtocolError("LWE component not reduced");
  }
  ct.b = *b;
  return ct;
}

size_t LweCiphertextBytes(const LweParams& params) {
  return ((params.n() + 1) * params.q().bits() + 7) / 8;
}

size_t SeededLweCiphertextBytes(const LweParams& params) {
  return kSeedBytes + (params.q().bits() + 7) / 8;
}

}  // namespace zippir
