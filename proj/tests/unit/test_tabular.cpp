/*
 * Copyright 2026 The TwinForge Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "error_check.hpp"
#include "fixtures.hpp"

#include "twinforge/ingest/top.hpp"
#include "twinforge/rng.hpp"
#include "twinforge/tabular/distance.hpp"
#include "twinforge/tabular/encoding.hpp"
#include "twinforge/tabular/gan.hpp"
#include "twinforge/tabular/gate.hpp"
#include "twinforge/tabular/mode_normalizer.hpp"

using namespace twinforge;
using namespace twinforge::tabular;
using ingest::ColumnKind;

namespace {

// Minimum-cost perfect matching by enumerating permutations.
double brute_force_emd(std::vector<double> a, const std::vector<double>& b) {
  std::sort(a.begin(), a.end());
  double best = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) cost += std::abs(a[i] - b[i]);
    best = std::min(best, cost);
  } while (std::next_permutation(a.begin(), a.end()));
  return best / static_cast<double>(a.size());
}

std::vector<double> random_sample(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  // Mix of continuous values and repeated grid points to exercise ties.
  for (auto& x : v) x = rng.below(3) == 0 ? static_cast<double>(rng.below(4)) : rng.normal(1.0, 2.0);
  return v;
}

std::vector<double> bimodal(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform() < 0.5 ? rng.normal(0.0, 1.0) : rng.normal(10.0, 1.0);
  return v;
}

GanConfig small_config() {
  GanConfig c;
  c.epochs = 3;
  c.hidden = 16;
  c.noise_dim = 8;
  c.batch = 16;
  return c;
}

}  // namespace

// ---------------------------------------------------------------- distances

TEST_CASE("emd on hand cases") {
  const std::vector<double> a{1.0, 2.0, 3.0};
  CHECK(emd_1d(a, a) == 0.0);
  CHECK(emd_1d(std::vector<double>{0.0}, std::vector<double>{1.0}) == 1.0);
  CHECK(emd_1d(std::vector<double>{0.0, 1.0}, std::vector<double>{0.5, 0.5}) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK_ERROR_CODE(emd_1d(std::vector<double>{}, a), ErrorCode::kEmptySample);
}

TEST_CASE("emd matches brute-force matching on small equal-size samples") {
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.below(7);
    const auto a = random_sample(rng, n);
    const auto b = random_sample(rng, n);
    CHECK(std::abs(emd_1d(a, b) - brute_force_emd(a, b)) <= 1e-9);
  }
}

TEST_CASE("emd is a metric on random samples") {
  Rng rng(32);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_sample(rng, 1 + rng.below(9));
    const auto b = random_sample(rng, 1 + rng.below(9));
    const auto c = random_sample(rng, 1 + rng.below(9));
    const double ab = emd_1d(a, b), ba = emd_1d(b, a);
    CHECK(ab >= 0.0);
    CHECK(std::abs(ab - ba) <= 1e-12);
    CHECK(ab <= emd_1d(a, c) + emd_1d(c, b) + 1e-12);
    // Duplicating every point leaves the empirical distribution unchanged.
    auto doubled = a;
    doubled.insert(doubled.end(), a.begin(), a.end());
    CHECK(emd_1d(a, doubled) <= 1e-12);
  }
}

TEST_CASE("total variation") {
  using S = std::vector<std::string>;
  CHECK(tv_distance(S{"a", "b"}, S{"b", "a"}) == 0.0);
  CHECK(tv_distance(S{"a", "a"}, S{"b"}) == 1.0);
  CHECK(tv_distance(S{"a", "b"}, S{"a", "a", "a", "b"}) == doctest::Approx(0.25));
  CHECK_ERROR_CODE(tv_distance(S{}, S{"a"}), ErrorCode::kEmptySample);
}

// ---------------------------------------------------------------- EM / BIC

TEST_CASE("constant column gives one mode at the floor") {
  const std::vector<double> v(20, 5.0);
  const auto n = fit_mode_normalizer(v);
  REQUIRE(n.size() == 1);
  CHECK(n.modes[0].mean == 5.0);
  CHECK(n.modes[0].stdev == doctest::Approx(1e-6));
  CHECK(n.stdev_floor == doctest::Approx(1e-6));
}

TEST_CASE("too few values") {
  CHECK_ERROR_CODE(fit_mode_normalizer(std::vector<double>{1.0}), ErrorCode::kTooFewValues);
}

TEST_CASE("bimodal sample recovers both modes") {
  const auto v = bimodal(500, 7);
  const auto sel = select_mode_normalizer(v, kMaxModes, 7);
  REQUIRE(sel.normalizer.size() == 2);
  std::vector<double> means{sel.normalizer.modes[0].mean, sel.normalizer.modes[1].mean};
  std::sort(means.begin(), means.end());
  CHECK(std::abs(means[0] - 0.0) < 0.3);
  CHECK(std::abs(means[1] - 10.0) < 0.3);
  double wsum = 0.0;
  for (const auto& m : sel.normalizer.modes) wsum += m.weight;
  CHECK(wsum == doctest::Approx(1.0));
}

TEST_CASE("BIC prefers one mode on a unimodal sample") {
  Rng rng(8);
  std::vector<double> v(500);
  for (auto& x : v) x = rng.normal();
  const auto one = fit_mixture(v, 1, 8);
  const auto two = fit_mixture(v, 2, 8);
  CHECK(one.bic < two.bic);
  CHECK(fit_mode_normalizer(v, kMaxModes, 8).size() == 1);
}

TEST_CASE("BIC is computed from the log-likelihood") {
  const auto v = bimodal(200, 9);
  for (std::size_t k = 1; k <= 3; ++k) {
    const auto fit = fit_mixture(v, k, 9);
    const double params = 3.0 * static_cast<double>(fit.normalizer.size()) - 1.0;
    CHECK(fit.bic == doctest::Approx(-2.0 * fit.log_likelihood + params * std::log(200.0)));
    CHECK(fit.log_likelihood == doctest::Approx(fit.normalizer.log_likelihood(v)));
  }
}

TEST_CASE("EM log-likelihood never decreases") {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v(50 + rng.below(200));
    const double spread = 0.1 + 10.0 * rng.uniform();
    for (auto& x : v) x = rng.below(3) == 0 ? std::round(rng.normal(0, spread)) : rng.normal(spread, 1.0);
    for (std::size_t k = 1; k <= kMaxModes; ++k) {
      const auto fit = fit_mixture(v, k, trial);
      REQUIRE(fit.log_likelihood_trace.size() >= 2);
      CHECK(fit.iterations <= kEmMaxIterations);
      for (std::size_t i = 1; i < fit.log_likelihood_trace.size(); ++i) {
        CHECK(fit.log_likelihood_trace[i] >= fit.log_likelihood_trace[i - 1] - 1e-9);
      }
      for (const auto& m : fit.normalizer.modes) {
        CHECK(m.stdev >= fit.normalizer.stdev_floor);
        CHECK(m.weight > 0.0);
      }
    }
  }
}

TEST_CASE("responsibilities form a distribution") {
  const auto n = fit_mode_normalizer(bimodal(300, 12), kMaxModes, 12);
  for (double x : {-5.0, 0.0, 5.0, 10.0, 30.0}) {
    const auto r = n.responsibilities(x);
    CHECK(std::accumulate(r.begin(), r.end(), 0.0) == doctest::Approx(1.0));
  }
}

// ---------------------------------------------------------------- encoding

namespace {

RowEncoder one_column_encoder(double mean, double stdev) {
  ModeNormalizer n;
  n.modes = {{1.0, mean, stdev}};
  return RowEncoder(ingest::Schema({{"x", ColumnKind::kContinuous}}), {n}, {});
}

}  // namespace

TEST_CASE("alpha centring and scale") {
  const auto enc = one_column_encoder(2.0, 0.5);
  Rng rng(1);
  CHECK(encode_row({2.0}, enc, rng)[0] == 0.0);
  CHECK(encode_row({4.0}, enc, rng)[0] == 1.0);
  CHECK(encode_row({100.0}, enc, rng)[0] == 1.0);
  CHECK(encode_row({-100.0}, enc, rng)[0] == -1.0);
  CHECK(std::get<double>(decode_row({0.0, 1.0}, enc)[0]) == 2.0);
  CHECK(std::get<double>(decode_row(encode_row({100.0}, enc, rng), enc)[0]) == 4.0);
}

TEST_CASE("encode then decode is the identity on the process table") {
  const auto ds = ingest::parse_top_capture(testing::sample_capture());
  const auto enc = fit_encoder(ds, kMaxModes, 3);
  Rng rng(3);
  for (const auto& row : ds.rows) {
    const auto encoded = encode_row(row, enc, rng);
    REQUIRE(encoded.size() == enc.width());
    for (const auto& span : enc.spans()) {
      double flags = 0.0;
      for (std::size_t i = 0; i < span.flag_count(); ++i) {
        const double f = encoded[span.flag_offset() + i];
        CHECK((f == 0.0 || f == 1.0));
        flags += f;
      }
      CHECK(flags == 1.0);
    }
    const auto back = decode_row(encoded, enc);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (const double* x = std::get_if<double>(&row[c])) {
        CHECK(std::abs(std::get<double>(back[c]) - *x) <= 1e-9);
      } else {
        CHECK(back[c] == row[c]);
      }
    }
  }
}

TEST_CASE("unknown category on encode") {
  const auto ds = ingest::parse_top_capture(testing::sample_capture());
  const auto enc = fit_encoder(ds, kMaxModes, 3);
  Rng rng(3);
  auto row = ds.rows[0];
  row[0] = std::string("mallory");
  CHECK_ERROR_CODE(encode_row(row, enc, rng), ErrorCode::kUnknownCategory);
}

TEST_CASE("frequency tables are sorted") {
  const auto t = count_categories({"b", "a", "b", "c"});
  CHECK(t.categories == std::vector<std::string>{"a", "b", "c"});
  CHECK(t.counts == std::vector<double>{1, 2, 1});
  CHECK(t.index_of("c") == 2);
  CHECK(t.index_of("z") == std::string::npos);
}

TEST_CASE("condition vectors are one-hot") {
  const auto ds = testing::process_fixture(100, 5);
  const auto enc = fit_encoder(ds, kMaxModes, 5);
  std::size_t total = 0;
  for (const auto& t : enc.tables()) total += t.size();
  CHECK(enc.condition_width() == total);
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto c = sample_condition(enc.tables(), rng);
    const auto v = condition_vector(c, enc);
    CHECK(v.size() == total);
    CHECK(std::accumulate(v.begin(), v.end(), 0.0) == 1.0);
    CHECK(v[enc.condition_offset(c.table) + c.category] == 1.0);
  }
}

TEST_CASE("training-by-sampling category probabilities") {
  Rng rng(6);
  SUBCASE("single category") {
    const std::vector<FrequencyTable> t{{{"only"}, {3.0}}};
    for (int i = 0; i < 20; ++i) CHECK(sample_condition(t, rng) == Condition{0, 0});
  }
  SUBCASE("equal frequencies pass a chi-square test") {
    const std::vector<FrequencyTable> t{{{"a", "b"}, {5.0, 5.0}}};
    const int n = 10000;
    int a = 0;
    for (int i = 0; i < n; ++i) a += sample_condition(t, rng).category == 0;
    const double e = n / 2.0;
    const double chi2 = (a - e) * (a - e) / e + ((n - a) - e) * ((n - a) - e) / e;
    CHECK(chi2 < 6.635);  // 1 dof, p = 0.01
  }
  SUBCASE("log-frequency weights") {
    const std::vector<FrequencyTable> t{{{"a", "b"}, {std::exp(1.0) - 1.0, 1.0}}};
    const int n = 100000;
    int a = 0;
    for (int i = 0; i < n; ++i) a += sample_condition(t, rng).category == 0;
    const double expected = 1.0 / (1.0 + std::log(2.0));
    CHECK(expected == doctest::Approx(0.5907).epsilon(1e-4));
    CHECK(std::abs(static_cast<double>(a) / n - expected) < 0.0065);
  }
}

// ---------------------------------------------------------------- GAN

TEST_CASE("training is deterministic for a seed") {
  const auto ds = testing::process_fixture(120, 1);
  const auto a = train_gan(ds, small_config(), 42);
  const auto b = train_gan(ds, small_config(), 42);
  const auto c = train_gan(ds, small_config(), 43);
  CHECK(model_to_json(a) == model_to_json(b));
  CHECK(model_to_json(a) != model_to_json(c));
  CHECK(a.history.generator_loss.size() == 3);
}

TEST_CASE("training needs a batch of rows") {
  const auto ds = testing::process_fixture(1, 1);
  CHECK_ERROR_CODE(train_gan(ds, small_config(), 1), ErrorCode::kTooFewRows);
}

TEST_CASE("generated rows respect the decode contract") {
  const auto ds = testing::process_fixture(120, 2);
  const auto model = train_gan(ds, small_config(), 2);
  Rng rng(2);
  CHECK(generate_rows(model, 0, rng).rows.empty());
  const auto out = generate_rows(model, 200, rng);
  REQUIRE(out.rows.size() == 200);
  CHECK(out.schema == ds.schema);
  CHECK(out.row_ids.front() == 1);
  CHECK(out.row_ids.back() == 200);
  const auto& enc = model.encoder;
  for (const auto& row : out.rows) {
    for (const auto& span : enc.spans()) {
      const auto& cell = row[span.column];
      if (span.kind == ColumnKind::kDiscrete) {
        CHECK(enc.tables()[span.model_index].index_of(std::get<std::string>(cell)) !=
              std::string::npos);
      } else {
        const double x = std::get<double>(cell);
        bool inside = false;
        for (const auto& m : enc.normalizers()[span.model_index].modes) {
          inside = inside || std::abs(x - m.mean) <= kAlphaScale * m.stdev * (1 + 1e-12);
        }
        CHECK(inside);
      }
    }
  }
}

TEST_CASE("datasets without discrete columns train unconditionally") {
  auto ds = testing::process_fixture(64, 3);
  ingest::TabularDataset numeric;
  numeric.schema = ingest::Schema({{"cpu_pct", ColumnKind::kContinuous},
                                   {"mem_pct", ColumnKind::kContinuous}});
  for (const auto& r : ds.rows) numeric.rows.push_back({r[1], r[2]});
  const auto model = train_gan(numeric, small_config(), 3);
  CHECK_FALSE(model.conditional());
  Rng rng(3);
  CHECK(generate_rows(model, 10, rng).rows.size() == 10);
}

TEST_CASE("model JSON round trip preserves sampling") {
  testing::TempDir dir;
  const auto ds = testing::process_fixture(80, 4);
  const auto model = train_gan(ds, small_config(), 4);
  const auto path = (dir / "m.json").string();
  save_model(model, path);
  const auto back = load_model(path);
  CHECK(model_to_json(back) == model_to_json(model));
  Rng r1(9), r2(9);
  CHECK(generate_rows(model, 30, r1) == generate_rows(back, 30, r2));
}

TEST_CASE("malformed models are rejected") {
  const auto ds = testing::process_fixture(80, 4);
  auto doc = model_to_json(train_gan(ds, small_config(), 4));
  auto wrong_version = doc;
  wrong_version["format_version"] = 2;
  CHECK_ERROR_CODE(model_from_json(wrong_version), ErrorCode::kMalformedModel);
  auto no_schema = doc;
  no_schema.erase("schema");
  CHECK_ERROR_CODE(model_from_json(no_schema), ErrorCode::kMalformedModel);
  CHECK_ERROR_CODE(model_from_json(nlohmann::json::array()), ErrorCode::kMalformedModel);
}

TEST_CASE("generator loss falls over 300 epochs on the process fixture") {
  const auto ds = testing::process_fixture();
  const auto start = std::chrono::steady_clock::now();
  const auto model = train_gan(ds, GanConfig{}, 17);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  MESSAGE("300 epochs took " << secs << " s");
  const auto& g = model.history.generator_loss;
  REQUIRE(g.size() == 300);
  const double first = std::accumulate(g.begin(), g.begin() + 50, 0.0) / 50;
  const double last = std::accumulate(g.end() - 50, g.end(), 0.0) / 50;
  CHECK(last < first);
}

// ---------------------------------------------------------------- gate

TEST_CASE("gate with infinite thresholds accepts the first batch") {
  const auto ds = testing::process_fixture(100, 5);
  const auto model = train_gan(ds, small_config(), 5);
  GateConfig gate;
  gate.tau_continuous = gate.tau_discrete = std::numeric_limits<double>::infinity();
  Rng rng(5);
  const auto sample = generate_gated(model, ds, 20, gate, rng);
  CHECK(sample.attempts == 1);
  CHECK(sample.dataset.rows.size() == 20);
}

TEST_CASE("gate with zero continuous threshold exhausts") {
  const auto ds = testing::process_fixture(100, 5);
  const auto model = train_gan(ds, small_config(), 5);
  GateConfig gate;
  gate.tau_continuous = 0.0;
  gate.max_attempts = 4;
  Rng rng(5);
  try {
    generate_gated(model, ds, 20, gate, rng);
    FAIL("expected GateExhausted");
  } catch (const GateExhausted& e) {
    CHECK(e.code() == ErrorCode::kGateExhausted);
    CHECK(e.attempts() == 4);
    CHECK(e.distance() > 0.0);
    CHECK(ds.schema.index_of(e.column()).has_value());
  }
}

TEST_CASE("gate distances scale by the real range and skip constant columns") {
  ingest::TabularDataset real, synth;
  real.schema = synth.schema = ingest::Schema({{"x", ColumnKind::kContinuous},
                                               {"k", ColumnKind::kContinuous},
                                               {"c", ColumnKind::kDiscrete}});
  real.rows = {{0.0, 1.0, std::string("a")}, {10.0, 1.0, std::string("b")}};
  synth.rows = {{1.0, 5.0, std::string("a")}, {11.0, 7.0, std::string("a")}};
  const auto d = gate_distances(real, synth, GateConfig{});
  REQUIRE(d.size() == 3);
  CHECK(d[0].kind == DistanceKind::kEmd);
  CHECK(*d[0].distance == doctest::Approx(0.1));
  CHECK_FALSE(d[1].distance.has_value());
  CHECK(d[1].passes());
  CHECK(d[2].kind == DistanceKind::kTotalVariation);
  CHECK(*d[2].distance == doctest::Approx(0.5));
  CHECK_FALSE(gate_accepts(d));
}

TEST_CASE("gate config validation") {
  GateConfig g;
  g.tau_continuous = -1.0;
  CHECK_ERROR_CODE(g.validate(), ErrorCode::kInvalidArgument);
  g = GateConfig{};
  g.max_attempts = 0;
  CHECK_ERROR_CODE(g.validate(), ErrorCode::kInvalidArgument);
}
