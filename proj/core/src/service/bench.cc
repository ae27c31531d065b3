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

#include "zippir/service/bench.h"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <memory>
#include <thread>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "zippir/additive_he/paillier.h"
#include "zippir/common/bigint.h"
#include "zippir/common/errors.h"
#include "zippir/common/parallel.h"
#include "zippir/common/status_macros.h"
#include "zippir/compressor/compressor.h"
#include "zippir/compressor/sizes.h"
#include "zippir/lwe/lwe.h"
#include "zippir/protocol/messages.h"
#include "zippir/protocol/params.h"
#include "zippir/protocol/server.h"

namespace zippir {
namespace {

using Clock = std::chrono::steady_clock;

double MsSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

class Report {
 public:
  explicit Report(std::string profile) : profile_(std::move(profile)) {}

  void Add(const std::string& param_set, const std::string& metric,
           const std::string& value, const std::string& unit) {
    rows_.push_back({profile_, param_set, metric, value, unit});
  }
  void Bytes(const std::string& param_set, const std::string& metric,
             uint64_t value) {
    Add(param_set, metric, absl::StrCat(value), "bytes");
  }
  void Number(const std::string& param_set, const std::string& metric,
              double value, const std::string& unit, int digits = 3) {
    Add(param_set, metric, absl::StrFormat("%.*f", digits, value), unit);
  }

  std::vector<BenchRow> Release() { return std::move(rows_); }

 private:
  std::string profile_;
  std::vector<BenchRow> rows_;
};

// Restores the worker count on scope exit.
class WorkerScope {
 public:
  explicit WorkerScope(size_t threads) : saved_(WorkerCount()) {
    if (threads != 0) SetWorkerCount(threads);
  }
  ~WorkerScope() { SetWorkerCount(saved_); }

 private:
  size_t saved_;
};

absl::StatusOr<std::vector<BenchRow>> Table2(const BenchOptions& options) {
  Report report("table2");
  const size_t bits = options.paillier_bits;
  struct Set {
    std::string name;
    CompressionSizes sizes;
  };
  const Set sets[] = {
      {"lwe(n=630,log2q=64)", LweCompressionSizes(630, 64, bits)},
      {"rlwe(N=1024,log2q=27)", RlweCompressionSizes(1024, 27, bits)},
      {"rlwe(N=8192,log2q=43)", RlweCompressionSizes(8192, 43, bits)},
  };
  for (const Set& s : sets) {
    report.Bytes(s.name, "uncompressed_bytes", s.sizes.uncompressed_bytes);
    report.Bytes(s.name, "compressed_bytes", s.sizes.compressed_bytes);
    report.Number(s.name, "reduction", s.sizes.reduction_percent, "percent", 4);
  }
  if (options.timing) {
    Prng rng = Prng(Prng::SeedFromInt(options.seed), PrgDomain::kGeneric);
    ZIPPIR_ASSIGN_OR_RETURN(auto kp, PaillierKeygen(bits, rng));
    ZIPPIR_ASSIGN_OR_RETURN(
        auto params, LweParams::Create(630, Modulus::PowerOfTwo(64), 256, 6.4,
                                       KeyDistribution::kBinary));
    LweSecretKey sk = LweKeygen(params, rng);
    ZIPPIR_ASSIGN_OR_RETURN(auto key,
                            MakeCompressionKey(kp.sk, params, sk, rng));
    ZIPPIR_ASSIGN_OR_RETURN(auto ct, LweEncrypt(params, sk, 7, rng));
    auto start = Clock::now();
    ZIPPIR_ASSIGN_OR_RETURN(auto compressed, LweCompress(key, ct));
    report.Number(sets[0].name, "compress_time", MsSince(start), "ms");
    auto eck = ExpandedCompressionKey::ExpandForThroughput(key);
    start = Clock::now();
    ZIPPIR_ASSIGN_OR_RETURN(auto fast, FastLweCompress(eck, ct));
    report.Number(sets[0].name, "fast_compress_time", MsSince(start), "ms");
    if (!(fast.x == compressed.x)) {
      return StateError("fast and plain compression disagree");
    }
  }
  return report.Release();
}

absl::StatusOr<std::vector<BenchRow>> Table3(const BenchOptions& options) {
  Report report("table3");
  struct Set {
    size_t n;
    unsigned log2_q;
  };
  const Set sets[] = {{630, 64}, {742, 64}, {870, 64}, {1305, 11}};
  for (const Set& s : sets) {
    const std::string name = absl::StrCat("(n=", s.n, ",log2q=", s.log2_q, ")");
    auto uniform =
        PackedKeySizesFor(s.n, s.log2_q, false, options.paillier_bits);
    auto binary = PackedKeySizesFor(s.n, s.log2_q, true, options.paillier_bits);
    report.Bytes(name, "unpacked_key_bytes", uniform.unpacked_bytes);
    report.Bytes(name, "packed_key_bytes_nonbinary", uniform.packed_bytes);
    report.Bytes(name, "packed_key_bytes_binary", binary.packed_bytes);
    report.Number(name, "unpacked_key_kb", uniform.unpacked_bytes / 1000.0,
                  "KB");
    report.Number(name, "packed_key_kb_nonbinary",
                  uniform.packed_bytes / 1000.0, "KB");
    report.Number(name, "packed_key_kb_binary", binary.packed_bytes / 1000.0,
                  "KB");
    report.Add(name, "packed_ciphertexts_nonbinary",
               absl::StrCat(uniform.packed_ciphertexts), "count");
    report.Add(name, "packed_ciphertexts_binary",
               absl::StrCat(binary.packed_ciphertexts), "count");
  }
  return report.Release();
}

absl::StatusOr<std::vector<BenchRow>> Fig3(const BenchOptions& options) {
  Report report("fig3");
  const size_t bits = options.paillier_bits;
  const mpz_class m_min = Pow2(bits - 1);
  const size_t ciphertext_bytes = 2 * ((bits + 7) / 8);
  struct Curve {
    std::string name;
    unsigned log2_q;
    KeyDistribution dist;
  };
  const Curve curves[] = {
      {"nonbinary(n=630,log2q=64)", 64, KeyDistribution::kUniform},
      {"binary(n=630,log2q=64)", 64, KeyDistribution::kBinary},
      {"binary-rescaled(n=630,log2q=20)", 20, KeyDistribution::kBinary},
  };
  const size_t counts[] = {1, 2, 4, 8, 16, 32, 64, 128};
  for (const Curve& curve : curves) {
    ZIPPIR_ASSIGN_OR_RETURN(
        auto params, LweParams::Create(630, Modulus::PowerOfTwo(curve.log2_q),
                                       4, 3.2, curve.dist));
    const mpz_class gamma = SelectScale(params, NoiseRegime::kStandard);
    const size_t capacity =
        BatchCapacity(m_min, gamma, params, NoiseRegime::kStandard);
    report.Add(curve.name, "capacity", absl::StrCat(capacity), "ciphertexts");
    for (size_t l : counts) {
      const std::string metric = absl::StrCat("l=", l);
      const size_t paillier_cts = (l + capacity - 1) / capacity;
      report.Bytes(curve.name, metric + ":compressed_bytes",
                   paillier_cts * ciphertext_bytes);
      report.Bytes(curve.name, metric + ":uncompressed_bytes",
                   (l * 631 * curve.log2_q + 7) / 8);
    }
  }
  if (options.timing) {
    Prng rng = Prng(Prng::SeedFromInt(options.seed), PrgDomain::kGeneric);
    ZIPPIR_ASSIGN_OR_RETURN(auto kp, PaillierKeygen(bits, rng));
    for (const Curve& curve : curves) {
      ZIPPIR_ASSIGN_OR_RETURN(
          auto params, LweParams::Create(630, Modulus::PowerOfTwo(curve.log2_q),
                                         4, 3.2, curve.dist));
      LweSecretKey sk = LweKeygen(params, rng);
      ZIPPIR_ASSIGN_OR_RETURN(auto key,
                              MakeCompressionKey(kp.sk, params, sk, rng));
      auto eck = ExpandedCompressionKey::ExpandForThroughput(key);
      const mpz_class gamma = SelectScale(params, NoiseRegime::kStandard);
      const size_t capacity =
          BatchCapacity(kp.pk.m(), gamma, params, NoiseRegime::kStandard);
      for (size_t l : {size_t{1}, size_t{4}, size_t{16}}) {
        if (l > capacity) break;
        std::vector<LweCiphertext> cts;
        for (size_t k = 0; k < l; ++k) {
          ZIPPIR_ASSIGN_OR_RETURN(auto ct, LweEncrypt(params, sk, k % 4, rng));
          cts.push_back(std::move(ct));
        }
        auto start = Clock::now();
        ZIPPIR_ASSIGN_OR_RETURN(auto cc,
                                FastBatchedLweCompress(eck, cts, gamma));
        report.Number(curve.name, absl::StrCat("l=", l, ":compress_time"),
                      MsSince(start), "ms");
        ZIPPIR_ASSIGN_OR_RETURN(auto decrypted,
                                ModifiedBatchedLweDecrypt(kp.sk, params, cc));
        for (size_t k = 0; k < l; ++k) {
          if (decrypted[k] != k % 4) {
            return StateError("batched compression did not round-trip");
          }
        }
      }
    }
  }
  return report.Release();
}

absl::StatusOr<std::vector<BenchRow>> ProtocolDesk(
    const BenchOptions& options) {
  Report report("protocol-desk");
  ProtocolConfig config;
  config.paillier_bits = options.paillier_bits;
  config.d0 = options.d0;
  config.d1 = options.d1;
  ZIPPIR_ASSIGN_OR_RETURN(ProtocolParams params,
                          ProtocolParams::Create(config));
  const std::string name =
      absl::StrCat("(d0=", params.d0(), ",d1=", params.d1(), ",n=", params.n(),
                   ",log2q=", config.log2_q, ",p=", params.p(),
                   ",log2m=", params.paillier_bits(), ")");
  const double db_bytes = static_cast<double>(params.d0()) * params.d1();

  report.Add(name, "database_size", absl::StrFormat("%.0f", db_bytes), "bytes");
  report.Add(name, "batch_capacity", absl::StrCat(params.batch_capacity()),
             "columns");
  report.Add(name, "hint_entries", absl::StrCat(params.hint_entries()),
             "ciphertexts");
  report.Bytes(name, "hint_request_bytes", params.HintRequestBits() / 8);
  report.Bytes(name, "query_bytes", params.QueryBits() / 8);
  report.Bytes(name, "response_separate_bytes",
               params.SeparateResponseBits() / 8);
  report.Bytes(name, "response_combined_bytes",
               params.CombinedResponseBits() / 8);
  report.Bytes(name, "response_client_storage_bytes",
               params.ClientStorageResponseBits() / 8);
  report.Bytes(name, "per_client_storage_bytes", params.HintBits() / 8);

  Prng rng = Prng(Prng::SeedFromInt(options.seed), PrgDomain::kGeneric);
  auto db = std::make_shared<const Database>(
      Database::Random(params.d0(), params.d1(), params.p(), rng));
  auto start = Clock::now();
  ZIPPIR_ASSIGN_OR_RETURN(auto state, ServerState::Create(params, db, 1));
  const double preprocessing_ms = MsSince(start);

  ZIPPIR_ASSIGN_OR_RETURN(auto kp, PaillierKeygen(params.paillier_bits(), rng));
  ClientRegistration client{ClientIdFor(kp.pk), kp.pk, rng.NextSeed()};
  // The server's work does not depend on the query's content, so uniform
  // offsets and query vector stand in for a decrypted-sample query.
  QueryMessage query;
  query.client_id = client.id;
  query.ck_offset.resize(params.n());
  for (auto& v : query.ck_offset) v = rng.UniformBelow(kp.pk.m());
  query.qu.resize(params.d0());
  for (auto& v : query.qu) {
    v = rng.UniformBelow(params.lwe().q().sampling_bound());
  }

  const EncodedMessage encoded_query = EncodeQuery(params, kp.pk, query);
  report.Bytes(name, "query_payload_measured", encoded_query.payload_bytes);
  report.Bytes(name, "query_overhead_measured", encoded_query.overhead_bytes);
  const EncodedMessage encoded_request =
      EncodeHintRequest(params, HintRequest{kp.pk, client.seed});
  report.Bytes(name, "hint_request_payload_measured",
               encoded_request.payload_bytes);
  report.Bytes(name, "hint_request_overhead_measured",
               encoded_request.overhead_bytes);

  std::vector<RespondTimings> runs;
  {
    WorkerScope workers(options.threads);
    for (size_t r = 0; r < std::max<size_t>(options.repetitions, 1); ++r) {
      RespondTimings timings;
      ZIPPIR_ASSIGN_OR_RETURN(
          auto response,
          state->Respond(client, query, ResponseMode::kClientStorage, nullptr,
                         &timings));
      if (r == 0) {
        const EncodedMessage encoded = EncodeResponse(params, kp.pk, response);
        report.Bytes(name, "response_client_storage_payload_measured",
                     encoded.payload_bytes);
        report.Bytes(name, "response_client_storage_overhead_measured",
                     encoded.overhead_bytes);
      }
      runs.push_back(timings);
    }
  }
  std::sort(runs.begin(), runs.end(), [](const auto& a, const auto& b) {
    return a.total_ns() < b.total_ns();
  });
  const RespondTimings& median = runs[runs.size() / 2];
  const double total_ms = median.total_ns() / 1e6;
  const double matmul_ms = (median.db_matmul_ns + median.hint_matmul_ns) / 1e6;
  report.Number(name, "preprocessing_time", preprocessing_ms, "ms");
  report.Number(name, "respond_time", total_ms, "ms");
  report.Number(name, "db_matmul_time", median.db_matmul_ns / 1e6, "ms");
  report.Number(name, "hint_matmul_time", median.hint_matmul_ns / 1e6, "ms");
  report.Number(name, "other_time", median.other_ns / 1e6, "ms");
  report.Number(name, "matmul_fraction", 100.0 * matmul_ms / total_ms,
                "percent", 2);
  report.Number(name, "throughput", db_bytes / 1e6 / (total_ms / 1e3), "MB/s",
                1);
  report.Add(
      name, "threads",
      absl::StrCat(options.threads == 0 ? WorkerCount() : options.threads),
      "count");
  report.Add(name, "hardware", HardwareDescription(), "text");
  return report.Release();
}

std::string CsvField(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::vector<std::string> BenchProfiles() {
  return {"table2", "table3", "fig3", "protocol-desk"};
}

absl::StatusOr<std::vector<BenchRow>> RunBench(const std::string& profile,
                                               const BenchOptions& options) {
  if (profile == "table2") return Table2(options);
  if (profile == "table3") return Table3(options);
  if (profile == "fig3") return Fig3(options);
  if (profile == "protocol-desk") return ProtocolDesk(options);
  return InputError(absl::StrCat("unknown bench profile '", profile,
                                 "'; expected table2, table3, fig3 or "
                                 "protocol-desk"));
}

std::string FormatBenchCsv(const std::vector<BenchRow>& rows) {
  std::string out = "profile,param_set,metric,value,unit\n";
  for (const BenchRow& row : rows) {
    absl::StrAppend(&out, CsvField(row.profile), ",", CsvField(row.param_set),
                    ",", CsvField(row.metric), ",", CsvField(row.value), ",",
                    CsvField(row.unit), "\n");
  }
  return out;
}

std::string HardwareDescription() {
  std::string model = "unknown cpu";
  std::ifstream cpuinfo("/proc/cpuinfo");
  std::string line;
  while (std::getline(cpuinfo, line)) {
    if (line.rfind("model name", 0) == 0) {
      const size_t colon = line.find(':');
      if (colon != std::string::npos) {
        model = line.substr(colon + 1);
        model.erase(0, model.find_first_not_of(' '));
      }
      break;
    }
  }
  return absl::StrCat(model, "; ", std::thread::hardware_concurrency(),
                      " logical cores");
}

}  // namespace zippir
