#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "proofsmith/cheat.hpp"
#include "proofsmith/eval.hpp"
#include "proofsmith/lexer.hpp"
#include "proofsmith/model.hpp"
#include "proofsmith/verifier.hpp"

namespace {

std::string sample_source() {
  std::string out =
      "use vstd::prelude::*;\n"
      "verus! {\n"
      "broadcast use vstd::arithmetic::mul::group_mul_properties;\n\n";
  for (int i = 0; i < 40; ++i) {
    std::string n = std::to_string(i);
    out +=
        "proof fn lemma_" + n + "(x: u64, y: u64)\n"
        "    requires x < 0x1000, y < 0x1000,\n"
        "    ensures x * y < 0x100_0000,\n"
        "{\n"
        "    assert(x * y <= 0xfff * 0xfff) by(nonlinear_arith)\n"
        "        requires x < 0x1000, y < 0x1000;\n"
        "    assert(0xfffu64 * 0xfff < 0x100_0000) by(compute);\n"
        "}\n\n";
  }
  out += "} // verus!\n";
  return out;
}

std::string sample_verifier_output() {
  std::string out;
  for (int i = 0; i < 24; ++i) {
    out += "error: assertion failed\n";
    out += "  --> task.rs:" + std::to_string(10 + i * 7) + ":9\n";
    out += "   |\n";
    out += std::to_string(10 + i * 7) + " |         assert(x * y < limit);\n";
    out += "   |         ^^^^^^^^^^^^^^^^^^^^^^ assertion failed\n\n";
  }
  out += "verification results:: 16 verified, 24 errors\n";
  return out;
}

void bm_lex(benchmark::State& state) {
  const std::string source = sample_source();
  for (auto _ : state) {
    benchmark::DoNotOptimize(proofsmith::lex(source));
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) *
                          static_cast<int64_t>(source.size()));
}
BENCHMARK(bm_lex);

void bm_check_cheating(benchmark::State& state) {
  const std::string original = sample_source();
  std::string modified = original;
  std::size_t at = modified.find("by(compute)");
  modified.replace(at, 11, "by(bit_vector)");
  for (auto _ : state) {
    benchmark::DoNotOptimize(proofsmith::check_cheating(original, modified));
  }
}
BENCHMARK(bm_check_cheating);

void bm_parse_verifier_output(benchmark::State& state) {
  const std::string text = sample_verifier_output();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        proofsmith::parse_verifier_output(text, 1, false, 2.5));
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) *
                          static_cast<int64_t>(text.size()));
}
BENCHMARK(bm_parse_verifier_output);

void bm_point_biserial(benchmark::State& state) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> size(1.0, 400.0);
  std::vector<double> sizes;
  std::vector<bool> outcomes;
  for (int i = 0; i < 2000; ++i) {
    sizes.push_back(size(rng));
    outcomes.push_back(rng() % 2 == 0);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(proofsmith::point_biserial(sizes, outcomes));
  }
}
BENCHMARK(bm_point_biserial);

void bm_history_render(benchmark::State& state) {
  proofsmith::HistoryLog log;
  for (int i = 1; i <= 120; ++i) {
    proofsmith::AttemptRecord rec;
    rec.step = i;
    rec.action_id = i % 2 ? "add-assert-context" : "nonlinear-arithmetic";
    rec.target_error.kind = proofsmith::ErrorKind::AssertFailed;
    rec.target_error.line = 10 + i;
    rec.target_error.message = "assertion failed at step " + std::to_string(i);
    rec.diff_summary = "1 block(s), +3 lines";
    rec.outcome = i % 5 ? proofsmith::AttemptOutcome::Rejected
                        : proofsmith::AttemptOutcome::Accepted;
    rec.errors_before = 8;
    rec.errors_after = i % 5 ? 9 : 7;
    log.records.push_back(std::move(rec));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(proofsmith::history_render(log, 4096));
  }
}
BENCHMARK(bm_history_render);

}  // namespace

BENCHMARK_MAIN();
