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

#include "twinforge/tabular/gan.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "twinforge/error.hpp"
#include "twinforge/text.hpp"

namespace twinforge::tabular {

using ingest::ColumnKind;

void GanConfig::validate() const {
  if (epochs < 1) throw Error(ErrorCode::kInvalidArgument, "epochs must be >= 1");
  if (batch < 1) throw Error(ErrorCode::kInvalidArgument, "batch must be >= 1");
  if (noise_dim < 1 || hidden < 1) {
    throw Error(ErrorCode::kInvalidArgument, "layer sizes must be >= 1");
  }
  if (max_modes < 1 || max_modes > kMaxModes) {
    throw Error(ErrorCode::kInvalidArgument, "max_modes out of range");
  }
  if (!(learning_rate > 0.0) || !(beta1 >= 0.0 && beta1 < 1.0) ||
      !(beta2 >= 0.0 && beta2 < 1.0) || !(gumbel_tau > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "bad optimizer settings");
  }
}

RowEncoder fit_encoder(const ingest::TabularDataset& dataset,
                       std::size_t max_modes, std::uint64_t seed) {
  const auto& schema = dataset.schema;
  const auto cont = schema.indices_of(ColumnKind::kContinuous);
  const auto disc = schema.indices_of(ColumnKind::kDiscrete);

  // Each column gets its own seed, so scheduling cannot change the result.
  std::vector<std::future<ModeNormalizer>> pending;
  for (std::size_t col : cont) {
    pending.push_back(std::async(std::launch::async, [&dataset, col, max_modes,
                                                      seed] {
      const auto values = dataset.continuous_column(col);
      return fit_mode_normalizer(values, max_modes, mix_seed(seed, 1000 + col));
    }));
  }
  std::vector<ModeNormalizer> normalizers;
  for (auto& f : pending) normalizers.push_back(f.get());

  std::vector<FrequencyTable> tables;
  for (std::size_t col : disc) {
    tables.push_back(count_categories(dataset.discrete_column(col)));
  }
  return RowEncoder(schema, std::move(normalizers), std::move(tables));
}

namespace {

constexpr double kEmaDecay = 0.999;

Matrix hstack(const Matrix& a, const Matrix& b) {
  if (b.cols() == 0) return a;
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// tanh on alpha slots; Gumbel-softmax on flag slots.
Matrix activate(const Matrix& logits, const RowEncoder& enc, double tau,
                Rng& rng) {
  Matrix out(logits.rows(), logits.cols());
  std::vector<double> z;
  for (Eigen::Index b = 0; b < logits.rows(); ++b) {
    for (const auto& span : enc.spans()) {
      if (span.kind == ColumnKind::kContinuous) {
        const auto a = static_cast<Eigen::Index>(span.offset);
        out(b, a) = std::tanh(logits(b, a));
      }
      const auto off = static_cast<Eigen::Index>(span.flag_offset());
      const std::size_t n = span.flag_count();
      z.resize(n);
      double hi = -INFINITY;
      for (std::size_t i = 0; i < n; ++i) {
        const double g = -std::log(-std::log(rng.uniform_open()));
        z[i] = (logits(b, off + static_cast<Eigen::Index>(i)) + g) / tau;
        hi = std::max(hi, z[i]);
      }
      double sum = 0.0;
      for (double& v : z) {
        v = std::exp(v - hi);
        sum += v;
      }
      for (std::size_t i = 0; i < n; ++i) {
        out(b, off + static_cast<Eigen::Index>(i)) = z[i] / sum;
      }
    }
  }
  return out;
}

// Forward values of the straight-through estimator: each flag block of the
// relaxed output replaced by the one-hot of its argmax.
Matrix harden(const Matrix& soft, const RowEncoder& enc) {
  Matrix out = soft;
  for (Eigen::Index b = 0; b < soft.rows(); ++b) {
    for (const auto& span : enc.spans()) {
      const auto off = static_cast<Eigen::Index>(span.flag_offset());
      const auto n = static_cast<Eigen::Index>(span.flag_count());
      Eigen::Index best = 0;
      for (Eigen::Index i = 1; i < n; ++i) {
        if (soft(b, off + i) > soft(b, off + best)) best = i;
      }
      for (Eigen::Index i = 0; i < n; ++i) out(b, off + i) = i == best ? 1.0 : 0.0;
    }
  }
  return out;
}

Matrix activate_backward(const Matrix& out, const Matrix& grad_out,
                         const RowEncoder& enc, double tau) {
  Matrix grad(out.rows(), out.cols());
  for (Eigen::Index b = 0; b < out.rows(); ++b) {
    for (const auto& span : enc.spans()) {
      if (span.kind == ColumnKind::kContinuous) {
        const auto a = static_cast<Eigen::Index>(span.offset);
        grad(b, a) = grad_out(b, a) * (1.0 - out(b, a) * out(b, a));
      }
      const auto off = static_cast<Eigen::Index>(span.flag_offset());
      const auto n = static_cast<Eigen::Index>(span.flag_count());
      double dot = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        dot += grad_out(b, off + i) * out(b, off + i);
      }
      for (Eigen::Index i = 0; i < n; ++i) {
        grad(b, off + i) = out(b, off + i) * (grad_out(b, off + i) - dot) / tau;
      }
    }
  }
  return grad;
}

void check_finite(double loss, long step, const char* which) {
  if (!std::isfinite(loss)) {
    throw Error(ErrorCode::kNonFiniteLoss,
                std::string(which) + " loss is not finite",
                static_cast<std::size_t>(step));
  }
}

struct BatchConditions {
  std::vector<Condition> picks;
  Matrix vectors;
};

BatchConditions draw_conditions(const RowEncoder& enc, std::size_t batch,
                                Rng& rng, bool by_frequency) {
  BatchConditions out;
  out.vectors = Matrix::Zero(static_cast<Eigen::Index>(batch),
                             static_cast<Eigen::Index>(enc.condition_width()));
  if (enc.condition_width() == 0) return out;
  for (std::size_t b = 0; b < batch; ++b) {
    const Condition c = by_frequency
                            ? sample_condition_by_frequency(enc.tables(), rng)
                            : sample_condition(enc.tables(), rng);
    out.vectors(static_cast<Eigen::Index>(b),
                static_cast<Eigen::Index>(enc.condition_offset(c.table) +
                                          c.category)) = 1.0;
    out.picks.push_back(c);
  }
  return out;
}

Matrix draw_noise(std::size_t batch, std::size_t dim, Rng& rng) {
  Matrix z(static_cast<Eigen::Index>(batch), static_cast<Eigen::Index>(dim));
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    for (Eigen::Index c = 0; c < z.cols(); ++c) z(r, c) = rng.normal();
  }
  return z;
}

// Span of the discrete column behind condition table `t`.
const ColumnSpan& span_of_table(const RowEncoder& enc, std::size_t t) {
  for (const auto& s : enc.spans()) {
    if (s.kind == ColumnKind::kDiscrete && s.model_index == t) return s;
  }
  throw Error(ErrorCode::kInvalidArgument, "no span for table");
}

}  // namespace

GanModel train_gan(const ingest::TabularDataset& dataset,
                   const GanConfig& config, std::uint64_t seed) {
  config.validate();
  dataset.validate();
  const std::size_t n_rows = dataset.rows.size();
  if (n_rows < std::max<std::size_t>(config.batch, 2)) {
    throw Error(ErrorCode::kTooFewRows,
                "need at least " + std::to_string(config.batch) +
                    " rows, got " + std::to_string(n_rows));
  }

  GanModel model;
  model.config = config;
  model.seed = seed;
  model.encoder = fit_encoder(dataset, config.max_modes, seed);
  const RowEncoder& enc = model.encoder;
  const std::size_t width = enc.width();
  const std::size_t cond_width = enc.condition_width();

  Rng init_rng(mix_seed(seed, 1));
  Rng encode_rng(mix_seed(seed, 2));
  Rng rng(mix_seed(seed, 3));

  model.generator = Mlp({config.noise_dim + cond_width, config.hidden,
                         config.hidden, width},
                        HiddenActivation::kRelu, init_rng);
  model.discriminator =
      Mlp({width + cond_width, config.hidden, config.hidden, 1},
          HiddenActivation::kLeakyRelu, init_rng);

  Matrix data(static_cast<Eigen::Index>(n_rows),
              static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < n_rows; ++r) {
    const EncodedRow e = encode_row(dataset.rows[r], enc, encode_rng);
    for (std::size_t c = 0; c < width; ++c) {
      data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = e[c];
    }
  }

  // Row indices per (discrete column, category) for conditioned real batches.
  std::vector<std::vector<std::vector<std::size_t>>> rows_by_category;
  for (std::size_t t = 0; t < enc.tables().size(); ++t) {
    const ColumnSpan& span = span_of_table(enc, t);
    std::vector<std::vector<std::size_t>> lists(span.width);
    for (std::size_t r = 0; r < n_rows; ++r) {
      const auto& cat = std::get<std::string>(dataset.rows[r][span.column]);
      lists[enc.tables()[t].index_of(cat)].push_back(r);
    }
    rows_by_category.push_back(std::move(lists));
  }

  const AdamConfig adam{config.learning_rate, config.beta1, config.beta2};
  const std::size_t batch = config.batch;
  const double inv_batch = 1.0 / static_cast<double>(batch);
  const std::size_t steps_per_epoch = std::max<std::size_t>(1, n_rows / batch);
  Mlp& gen = model.generator;
  Mlp& disc = model.discriminator;
  long step = 0;
  // Exponential moving average of the generator weights; the stored model
  // samples from the average rather than the last iterate.
  std::vector<DenseLayer> ema = gen.layers();

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double g_epoch = 0.0, d_epoch = 0.0;
    for (std::size_t s = 0; s < steps_per_epoch; ++s, ++step) {
      // Discriminator step.
      {
        const BatchConditions conds =
            draw_conditions(enc, batch, rng, /*by_frequency=*/false);
        Matrix real(static_cast<Eigen::Index>(batch),
                    static_cast<Eigen::Index>(width));
        for (std::size_t b = 0; b < batch; ++b) {
          std::size_t r;
          if (cond_width == 0) {
            r = static_cast<std::size_t>(rng.below(n_rows));
          } else {
            const auto& pool =
                rows_by_category[conds.picks[b].table][conds.picks[b].category];
            r = pool[rng.below(pool.size())];
          }
          real.row(static_cast<Eigen::Index>(b)) =
              data.row(static_cast<Eigen::Index>(r));
        }
        const Matrix noise = draw_noise(batch, config.noise_dim, rng);
        const Matrix logits = gen.predict(hstack(noise, conds.vectors));
        const Matrix fake =
            harden(activate(logits, enc, config.gumbel_tau, rng), enc);

        disc.zero_grad();
        const Matrix d_real = disc.forward(hstack(real, conds.vectors));
        Matrix grad_real(d_real.rows(), 1);
        double loss = 0.0;
        for (Eigen::Index b = 0; b < d_real.rows(); ++b) {
          loss += softplus(-d_real(b, 0)) * inv_batch;
          grad_real(b, 0) = -sigmoid(-d_real(b, 0)) * inv_batch;
        }
        disc.backward(grad_real);
        const Matrix d_fake = disc.forward(hstack(fake, conds.vectors));
        Matrix grad_fake(d_fake.rows(), 1);
        for (Eigen::Index b = 0; b < d_fake.rows(); ++b) {
          loss += softplus(d_fake(b, 0)) * inv_batch;
          grad_fake(b, 0) = sigmoid(d_fake(b, 0)) * inv_batch;
        }
        disc.backward(grad_fake);
        check_finite(loss, step, "discriminator");
        disc.adam_step(adam);
        d_epoch += loss;
      }
      // Generator step.
      {
        const BatchConditions conds =
            draw_conditions(enc, batch, rng, /*by_frequency=*/false);
        const Matrix noise = draw_noise(batch, config.noise_dim, rng);
        const Matrix logits = gen.forward(hstack(noise, conds.vectors));
        const Matrix soft = activate(logits, enc, config.gumbel_tau, rng);
        const Matrix score =
            disc.forward(hstack(harden(soft, enc), conds.vectors));

        double loss = 0.0;
        Matrix grad_score(score.rows(), 1);
        for (Eigen::Index b = 0; b < score.rows(); ++b) {
          loss += softplus(-score(b, 0)) * inv_batch;
          grad_score(b, 0) = -sigmoid(-score(b, 0)) * inv_batch;
        }
        const Matrix grad_input = disc.backward_input(grad_score);
        Matrix grad_logits = activate_backward(
            soft, grad_input.leftCols(static_cast<Eigen::Index>(width)), enc,
            config.gumbel_tau);

        // Cross-entropy pulling the conditioned column toward the condition.
        for (std::size_t b = 0; b < conds.picks.size(); ++b) {
          const Condition& c = conds.picks[b];
          const ColumnSpan& span = span_of_table(enc, c.table);
          const auto row = static_cast<Eigen::Index>(b);
          const auto off = static_cast<Eigen::Index>(span.offset);
          const auto w = static_cast<Eigen::Index>(span.width);
          double hi = -INFINITY;
          for (Eigen::Index i = 0; i < w; ++i) hi = std::max(hi, logits(row, off + i));
          double sum = 0.0;
          for (Eigen::Index i = 0; i < w; ++i) sum += std::exp(logits(row, off + i) - hi);
          const double log_norm = hi + std::log(sum);
          const auto target = static_cast<Eigen::Index>(c.category);
          loss += (log_norm - logits(row, off + target)) * inv_batch;
          for (Eigen::Index i = 0; i < w; ++i) {
            const double p = std::exp(logits(row, off + i) - log_norm);
            grad_logits(row, off + i) += (p - (i == target ? 1.0 : 0.0)) * inv_batch;
          }
        }
        check_finite(loss, step, "generator");
        gen.zero_grad();
        gen.backward(grad_logits);
        gen.adam_step(adam);
        for (std::size_t l = 0; l < ema.size(); ++l) {
          const DenseLayer& live = gen.layers()[l];
          ema[l].weight = kEmaDecay * ema[l].weight + (1.0 - kEmaDecay) * live.weight;
          ema[l].bias = kEmaDecay * ema[l].bias + (1.0 - kEmaDecay) * live.bias;
        }
        g_epoch += loss;
      }
    }
    model.history.generator_loss.push_back(g_epoch /
                                           static_cast<double>(steps_per_epoch));
    model.history.discriminator_loss.push_back(
        d_epoch / static_cast<double>(steps_per_epoch));
  }
  for (std::size_t l = 0; l < ema.size(); ++l) {
    gen.layers()[l].weight = ema[l].weight;
    gen.layers()[l].bias = ema[l].bias;
  }
  return model;
}

ingest::TabularDataset generate_rows(const GanModel& model, std::size_t n,
                                     Rng& rng) {
  const RowEncoder& enc = model.encoder;
  ingest::TabularDataset out;
  out.schema = enc.schema();
  if (n == 0) return out;

  // Conditions follow the observed category frequencies at sampling time so
  // the synthetic marginals are not tilted toward rare categories.
  const BatchConditions conds =
      draw_conditions(enc, n, rng, /*by_frequency=*/true);
  const Matrix noise = draw_noise(n, model.config.noise_dim, rng);
  // Same heads as in training; decode_row then takes the hard argmax of the
  // relaxed flags, which samples each flag from its softmax.
  const Matrix fake =
      activate(model.generator.predict(hstack(noise, conds.vectors)), enc,
               model.config.gumbel_tau, rng);

  out.rows.reserve(n);
  EncodedRow encoded(enc.width());
  for (Eigen::Index b = 0; b < fake.rows(); ++b) {
    for (std::size_t c = 0; c < enc.width(); ++c) {
      encoded[c] = fake(b, static_cast<Eigen::Index>(c));
    }
    out.rows.push_back(decode_row(encoded, enc));
    out.row_ids.push_back(b + 1);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Matrix matrix_from_json(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? 0 : static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorCode::kMalformedModel, "ragged weight matrix");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
  }
  return m;
}

Vector vector_from_json(const json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

json mlp_to_json(const Mlp& mlp) {
  json layers = json::array();
  for (const auto& l : mlp.layers()) {
    layers.push_back({{"weight", matrix_to_json(l.weight)},
                      {"bias", vector_to_json(l.bias)}});
  }
  return {{"activation", mlp.activation() == HiddenActivation::kRelu
                             ? "relu"
                             : "leaky_relu"},
          {"layers", std::move(layers)}};
}

Mlp mlp_from_json(const json& j) {
  const std::string act = j.at("activation").get<std::string>();
  HiddenActivation activation;
  if (act == "relu") {
    activation = HiddenActivation::kRelu;
  } else if (act == "leaky_relu") {
    activation = HiddenActivation::kLeakyRelu;
  } else {
    throw Error(ErrorCode::kMalformedModel, "unknown activation " + act);
  }
  std::vector<DenseLayer> layers;
  for (const auto& lj : j.at("layers")) {
    DenseLayer l;
    l.weight = matrix_from_json(lj.at("weight"));
    l.bias = vector_from_json(lj.at("bias"));
    if (l.bias.size() != l.weight.rows()) {
      throw Error(ErrorCode::kMalformedModel, "bias/weight size mismatch");
    }
    if (!layers.empty() && layers.back().outputs() != l.inputs()) {
      throw Error(ErrorCode::kMalformedModel, "layer sizes do not chain");
    }
    layers.push_back(std::move(l));
  }
  if (layers.empty()) throw Error(ErrorCode::kMalformedModel, "no layers");
  return Mlp::from_layers(std::move(layers), activation);
}

}  // namespace

nlohmann::json model_to_json(const GanModel& model) {
  const RowEncoder& enc = model.encoder;
  json schema = json::array();
  for (const auto& c : enc.schema().columns()) {
    schema.push_back({{"name", c.name}, {"kind", ingest::to_string(c.kind)}});
  }
  json normalizers = json::array();
  const auto cont = enc.schema().indices_of(ColumnKind::kContinuous);
  for (std::size_t i = 0; i < enc.normalizers().size(); ++i) {
    const auto& n = enc.normalizers()[i];
    json modes = json::array();
    for (const auto& m : n.modes) {
      modes.push_back({{"weight", m.weight}, {"mean", m.mean}, {"stdev", m.stdev}});
    }
    normalizers.push_back({{"column", enc.schema()[cont[i]].name},
                           {"stdev_floor", n.stdev_floor},
                           {"modes", std::move(modes)}});
  }
  json tables = json::array();
  const auto disc = enc.schema().indices_of(ColumnKind::kDiscrete);
  for (std::size_t i = 0; i < enc.tables().size(); ++i) {
    tables.push_back({{"column", enc.schema()[disc[i]].name},
                      {"categories", enc.tables()[i].categories},
                      {"counts", enc.tables()[i].counts}});
  }
  const GanConfig& c = model.config;
  json config = {{"epochs", c.epochs},
                 {"batch", c.batch},
                 {"noise_dim", c.noise_dim},
                 {"hidden", c.hidden},
                 {"max_modes", c.max_modes},
                 {"learning_rate", c.learning_rate},
                 {"beta1", c.beta1},
                 {"beta2", c.beta2},
                 {"gumbel_tau", c.gumbel_tau}};
  return {{"format_version", kModelFormatVersion},
          {"kind", "tabular_gan"},
          {"seed", model.seed},
          {"config", std::move(config)},
          {"schema", std::move(schema)},
          {"normalizers", std::move(normalizers)},
          {"frequency_tables", std::move(tables)},
          {"generator", mlp_to_json(model.generator)},
          {"discriminator", mlp_to_json(model.discriminator)},
          {"history",
           {{"generator_loss", model.history.generator_loss},
            {"discriminator_loss", model.history.discriminator_loss}}}};
}

GanModel model_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("format_version").get<int>() != kModelFormatVersion ||
        doc.at("kind").get<std::string>() != "tabular_gan") {
      throw Error(ErrorCode::kMalformedModel, "unsupported model format");
    }
    GanModel model;
    model.seed = doc.at("seed").get<std::uint64_t>();
    const json& c = doc.at("config");
    model.config.epochs = c.at("epochs").get<int>();
    model.config.batch = c.at("batch").get<std::size_t>();
    model.config.noise_dim = c.at("noise_dim").get<std::size_t>();
    model.config.hidden = c.at("hidden").get<std::size_t>();
    model.config.max_modes = c.at("max_modes").get<std::size_t>();
    model.config.learning_rate = c.at("learning_rate").get<double>();
    model.config.beta1 = c.at("beta1").get<double>();
    model.config.beta2 = c.at("beta2").get<double>();
    model.config.gumbel_tau = c.at("gumbel_tau").get<double>();
    model.config.validate();

    std::vector<ingest::Column> cols;
    for (const auto& cj : doc.at("schema")) {
      cols.push_back({cj.at("name").get<std::string>(),
                      ingest::column_kind_from_string(
                          cj.at("kind").get<std::string>())});
    }
    std::vector<ModeNormalizer> normalizers;
    for (const auto& nj : doc.at("normalizers")) {
      ModeNormalizer n;
      n.stdev_floor = nj.at("stdev_floor").get<double>();
      for (const auto& mj : nj.at("modes")) {
        n.modes.push_back({mj.at("weight").get<double>(),
                           mj.at("mean").get<double>(),
                           mj.at("stdev").get<double>()});
      }
      normalizers.push_back(std::move(n));
    }
    std::vector<FrequencyTable> tables;
    for (const auto& tj : doc.at("frequency_tables")) {
      FrequencyTable t;
      t.categories = tj.at("categories").get<std::vector<std::string>>();
      t.counts = tj.at("counts").get<std::vector<double>>();
      if (t.categories.size() != t.counts.size() ||
          !std::is_sorted(t.categories.begin(), t.categories.end())) {
        throw Error(ErrorCode::kMalformedModel, "bad frequency table");
      }
      tables.push_back(std::move(t));
    }
    model.encoder = RowEncoder(ingest::Schema(std::move(cols)),
                               std::move(normalizers), std::move(tables));
    model.generator = mlp_from_json(doc.at("generator"));
    model.discriminator = mlp_from_json(doc.at("discriminator"));

    const std::size_t width = model.encoder.width();
    const std::size_t cond = model.encoder.condition_width();
    if (model.generator.layers().front().inputs() !=
            model.config.noise_dim + cond ||
        model.generator.layers().back().outputs() != width ||
        model.discriminator.layers().front().inputs() != width + cond ||
        model.discriminator.layers().back().outputs() != 1) {
      throw Error(ErrorCode::kMalformedModel,
                  "network heads do not match the schema");
    }
    const json& h = doc.at("history");
    model.history.generator_loss =
        h.at("generator_loss").get<std::vector<double>>();
    model.history.discriminator_loss =
        h.at("discriminator_loss").get<std::vector<double>>();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedModel, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kMalformedModel) throw;
    throw Error(ErrorCode::kMalformedModel, e.what());
  }
}

void save_model(const GanModel& model, const std::string& path) {
  text::write_file(path, model_to_json(model).dump(1) + "\n");
}

GanModel load_model(const std::string& path) {
  const std::string body = text::read_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedModel, e.what());
  }
  return model_from_json(doc);
}

}  // namespace twinforge::tabular
