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

#include "zippir/compressor/sizes.h"

#include "zippir/common/bigint.h"
#include "zippir/common/prng.h"
#include "zippir/compressor/compressor.h"
#include "zippir/lwe/modulus.h"

namespace zippir {
namespace {

constexpr size_t kLengthPrefixBytes = 4;

double Reduction(size_t compressed, size_t uncompressed) {
  return 100.0 * (1.0 - static_cast<double>(compressed) /
                            static_cast<double>(uncompressed));
}

}  // namespace

CompressionSizes LweCompressionSizes(size_t n, unsigned log2_q,
                                     size_t paillier_bits) {
  CompressionSizes s;
  s.uncompressed_bytes = ((n + 1) * log2_q + 7) / 8;
  s.compressed_bytes = 2 * ((paillier_bits + 7) / 8);
  s.reduction_percent = Reduction(s.compressed_bytes, s.uncompressed_bytes);
  return s;
}

CompressionSizes RlweCompressionSizes(size_t ring_degree, unsigned log2_q,
                                      size_t paillier_bits) {
  CompressionSizes s;
  s.uncompressed_bytes = (ring_degree * log2_q + 7) / 8 + kLengthPrefixBytes;
  s.compressed_bytes = 2 * ((paillier_bits + 7) / 8);
  s.reduction_percent = Reduction(s.compressed_bytes, s.uncompressed_bytes);
  return s;
}

PackedKeySizes PackedKeySizesFor(size_t n, unsigned log2_q, bool binary_key,
                                 size_t paillier_bits) {
  PackedKeySizes s;
  Modulus q = Modulus::PowerOfTwo(log2_q);
  mpz_class bound = CompressionBound(q, n, binary_key);
  s.delta = q.ToMpz();
  while (s.delta <= bound) s.delta *= 2;
  s.digits_per_ciphertext = PackingDigits(Pow2(paillier_bits - 1), s.delta);
  const size_t t = s.digits_per_ciphertext;
  const size_t offset_bytes = (paillier_bits + 7) / 8;
  s.packed_ciphertexts = t == 0 ? 0 : (n + t - 1) / t;
  s.packed_bytes = kSeedBytes + s.packed_ciphertexts * offset_bytes;
  s.unpacked_bytes = kSeedBytes + n * offset_bytes;
  return s;
}

}  // namespace zippir
