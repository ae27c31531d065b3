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

#ifndef ZIPPIR_COMPRESSOR_SIZES_H_
#define ZIPPIR_COMPRESSOR_SIZES_H_

#include <gmpxx.h>

#include <cstddef>

namespace zippir {

// Byte accounting for one compressed ciphertext against its source.
struct CompressionSizes {
  size_t uncompressed_bytes = 0;
  size_t compressed_bytes = 0;
  // 100 * (1 - compressed / uncompressed).
  double reduction_percent = 0;
};

// LWE source: (n + 1) * ceil(log2 q) / 8 bytes. Compressed: one Paillier
// ciphertext of 2 * ceil(log2 m) / 8 bytes.
CompressionSizes LweCompressionSizes(size_t n, unsigned log2_q,
                                     size_t paillier_bits);

// RLWE source with A regenerated from a shared seed: B as N * log2 q bits
// behind a 4-byte length prefix.
CompressionSizes RlweCompressionSizes(size_t ring_degree, unsigned log2_q,
                                      size_t paillier_bits);

// Compression key transport sizes. Keys travel in offset form: one seed for
// all sampled ciphertexts plus one Z_m offset per ciphertext.
struct PackedKeySizes {
  mpz_class delta;
  size_t digits_per_ciphertext = 0;
  size_t packed_ciphertexts = 0;
  size_t packed_bytes = 0;
  size_t unpacked_bytes = 0;
};

// Uses the default radix (smallest q * 2^k above the compression bound) and
// the smallest modulus of `paillier_bits` bits, 2^(paillier_bits - 1).
PackedKeySizes PackedKeySizesFor(size_t n, unsigned log2_q, bool binary_key,
                                 size_t paillier_bits);

}  // namespace zippir

#endif  // ZIPPIR_COMPRESSOR_SIZES_H_
