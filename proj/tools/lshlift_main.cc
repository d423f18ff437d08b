// Copyright 2026 The lshlift Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// lshlift: command-line front end for the hashing pipeline.

#include <fmt/core.h>
#include <fmt/os.h>

#include <CLI11.hpp>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>

#include "lshlift/arrangement.h"
#include "lshlift/eval.h"
#include "lshlift/hashing.h"
#include "lshlift/learn.h"
#include "lshlift/lift.h"
#include "lshlift/parallel.h"
#include "lshlift/persist.h"
#include "lshlift/preprocess.h"

namespace {

using namespace lshlift;

struct DataOptions {
  std::string format;  // empty: guess from extension
};

Dataset load(const std::string& path, const DataOptions& opt) {
  const DatasetFormat f = opt.format.empty() ? format_for_path(path) : parse_format(opt.format);
  return read_dataset(path, f);
}

void add_format(CLI::App* cmd, DataOptions& opt) {
  cmd->add_option("--format", opt.format, "dataset format (csv or raw-f32)")
      ->check(CLI::IsMember({"csv", "raw-f32", "raw"}));
}

std::string optional_number(const std::optional<double>& v) {
  return v ? fmt::format("{:.6f}", *v) : std::string();
}

// --- preprocess -------------------------------------------------------------

struct PreprocessArgs {
  std::string input, output;
  double contribution = 0.80;
  bool allow_constant = false;
  DataOptions data;
};

void run_preprocess(const PreprocessArgs& a) {
  const Dataset d = load(a.input, a.data);
  FitOptions opt;
  opt.contribution = a.contribution;
  opt.allow_constant = a.allow_constant;
  const PreprocessParams p = fit(d.vectors, opt);
  save_params(p, a.output);

  fmt::print("input_dim {}\n", p.input_dim());
  fmt::print("k {}\n", p.output_dim);
  if (p.eigenvalues[p.output_dim - 1] > 0.0) {
    fmt::print("eigenvalue_ratio {:.6f}\n", eigenvalue_ratio(p));
  } else {
    fmt::print("eigenvalue_ratio inf\n");
  }
  fmt::print("component,eigenvalue,contribution,cumulative\n");
  const auto cum = cumulative_contribution(p);
  for (std::size_t i = 0; i < p.eigenvalues.size(); ++i) {
    const double prev = i == 0 ? 0.0 : cum[i - 1];
    fmt::print("{},{:.9g},{:.6f},{:.6f}\n", i + 1, p.eigenvalues[i], cum[i] - prev, cum[i]);
  }
}

// --- train ------------------------------------------------------------------

struct TrainArgs {
  std::string method = "lsh-lift";
  std::size_t bits = 32;
  std::uint64_t seed = 0;
  std::string params, input, output;
  std::size_t pool_size = 10000;
  std::size_t iterations = 10000;
  std::size_t max_pairs = 100000;
  double auto_label = 0.0;
  DataOptions data;
};

TrainingPairs training_pairs(const TrainArgs& a, const Dataset& d,
                             const PreprocessParams& p) {
  if (a.auto_label > 0.0) {
    std::vector<Vector> normalized;
    normalized.reserve(d.vectors.size());
    for (const auto& x : d.vectors) normalized.push_back(normalize(p, x));
    const auto relation = auto_label_pairs(normalized, a.auto_label);
    return pairs_from_relation(d.vectors.size(), relation, a.max_pairs, a.seed);
  }
  if (d.labels.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "method '" + a.method + "' needs a label column or --auto-label");
  }
  return pairs_from_labels(d.labels, a.max_pairs, a.seed);
}

void run_train(const TrainArgs& a) {
  HashModel m;
  m.preprocess = load_params(a.params);
  m.seed = a.seed;
  m.method = a.method;
  const std::size_t k = m.preprocess.output_dim;

  if (a.method == "lsh") {
    m.hyperplanes = origin_planes(sample_unit_normals(k, a.bits, a.seed));
  } else {
    const Dataset d = load(a.input, a.data);
    const auto projected = transform_all(m.preprocess, d.vectors);
    if (a.method == "lsh-lift") {
      m.hyperplanes = lift_learner(random_origin_learner(a.bits, a.seed), projected).planes;
    } else {
      LearnerConfig cfg;
      cfg.pool_size = a.pool_size;
      cfg.iterations = a.iterations;
      cfg.target_bits = a.bits;
      cfg.rng_seed = a.seed;
      const TrainingPairs pairs = training_pairs(a, d, m.preprocess);
      if (a.method == "pool") {
        m.hyperplanes =
            origin_planes(learn_pool_select(cfg, projected, pairs.same, pairs.diff));
      } else {
        const LiftResult r =
            lift_learner(pool_learner(cfg, pairs.same, pairs.diff), projected);
        if (r.skipped > 0) {
          fmt::print(stderr, "lshlift: warning: skipped {} plane(s) parallel to the lift axis\n",
                     r.skipped);
        }
        m.hyperplanes = r.planes;
      }
    }
  }
  save_model(m, a.output);
  fmt::print("method {}\n", m.method);
  fmt::print("bits {}\n", m.bit_count());
  fmt::print("dim {}\n", k);
  if (m.bit_count() > 0) {
    fmt::print("mean_abs_offset {:.6f}\n", mean_abs_offset(m.hyperplanes));
  }
}

// --- encode -----------------------------------------------------------------

struct EncodeArgs {
  std::string model, input, output;
  DataOptions data;
};

void run_encode(const EncodeArgs& a) {
  const HashModel m = load_model(a.model);
  const Dataset d = load(a.input, a.data);
  const auto codes = encode_all(m, d.vectors);
  save_codes(codes, a.output);
  fmt::print("count {}\n", codes.size());
  fmt::print("width {}\n", m.bit_count());
}

// --- query ------------------------------------------------------------------

struct QueryArgs {
  std::string model, db_codes, query_input, output;
  std::optional<double> acquisition;
  std::optional<std::size_t> top_k;
  DataOptions data;
};

void run_query(const QueryArgs& a) {
  const HashModel m = load_model(a.model);
  const auto db = load_codes(a.db_codes);
  const Dataset q = load(a.query_input, a.data);
  if (db.empty()) throw Error(ErrorCode::kInvalidArgument, "database codes file is empty");
  std::size_t k = 0;
  if (a.top_k) {
    k = *a.top_k;
  } else {
    k = acquisition_k(a.acquisition.value_or(0.1), db.size());
  }
  const auto queries = encode_all(m, q.vectors);
  const auto ranked = search_all(queries, db, k);

  std::unique_ptr<std::FILE, int (*)(std::FILE*)> file(nullptr, &std::fclose);
  std::FILE* out = stdout;
  if (!a.output.empty()) {
    file.reset(std::fopen(a.output.c_str(), "w"));
    if (!file) throw Error(ErrorCode::kIo, "cannot write " + a.output);
    out = file.get();
  }
  fmt::print(out, "query,rank,index,distance\n");
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    for (std::size_t r = 0; r < ranked[i].size(); ++r) {
      fmt::print(out, "{},{},{},{}\n", i, r, ranked[i][r].index, ranked[i][r].distance);
    }
  }
}

// --- evaluate ---------------------------------------------------------------

struct EvaluateArgs {
  std::string model, dataset, splits, output_csv;
  std::vector<double> acquisitions;
  double auto_label = 0.0;
  DataOptions data;
};

void run_evaluate(const EvaluateArgs& a) {
  const HashModel m = load_model(a.model);
  const Dataset d = load(a.dataset, a.data);
  LabeledDataset ld;
  ld.vectors = d.vectors;
  ld.labels = d.labels;
  ld.splits = read_splits(a.splits);
  ld.validate();

  std::string relation_note;
  SameLabel same;
  if (a.auto_label > 0.0) {
    // Relation over database and query together, in normalized space.
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < ld.splits.size(); ++i) {
      if (ld.splits[i] != Split::kLearn) ids.push_back(i);
    }
    std::vector<Vector> normalized;
    for (std::size_t i : ids) normalized.push_back(normalize(m.preprocess, ld.vectors[i]));
    auto pairs = auto_label_pairs(normalized, a.auto_label);
    for (auto& [x, y] : pairs) {
      x = ids[x];
      y = ids[y];
    }
    same = SameLabel::from_pairs(ld.vectors.size(), pairs);
    relation_note = fmt::format("auto-label top {} of database+query pairs by L2 ({} pairs)",
                                a.auto_label, pairs.size());
  } else if (!ld.labels.empty()) {
    same = SameLabel::from_labels(ld.labels);
    relation_note = "dataset label column";
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "evaluate needs a label column or --auto-label");
  }

  std::vector<EvalReport> reports;
  for (double acq : a.acquisitions) reports.push_back(evaluate(m, ld, acq, same));

  fmt::print("relation {}\n", relation_note);
  fmt::print("bits {}\n", m.bit_count());
  fmt::print("queries {}\n", reports.front().queries);
  fmt::print("queries_without_relevant {}\n", reports.front().queries_without_relevant);
  std::string csv = "bits,acquisition,precision,recall,error_rate\n";
  for (const auto& r : reports) {
    csv += fmt::format("{},{},{:.6f},{},{}\n", r.bit_count, r.acquisition, r.precision,
                       optional_number(r.recall), optional_number(r.error_rate));
  }
  fmt::print("{}", csv);
  if (!a.output_csv.empty()) {
    write_file_atomic(a.output_csv,
                      std::span<const std::uint8_t>(
                          reinterpret_cast<const std::uint8_t*>(csv.data()), csv.size()));
  }
}

// --- correlate --------------------------------------------------------------

struct CorrelateArgs {
  std::string model_a, model_b, input, scatter_a, scatter_b;
  std::size_t pairs = 2000;
  std::uint64_t seed = 0;
  DataOptions data;
};

void write_scatter(const Correlation& c, const std::string& path) {
  std::string csv = "l2,hamming\n";
  for (const auto& [l2, h] : c.scatter) csv += fmt::format("{},{}\n", l2, h);
  write_file_atomic(path, std::span<const std::uint8_t>(
                              reinterpret_cast<const std::uint8_t*>(csv.data()), csv.size()));
}

void run_correlate(const CorrelateArgs& a) {
  const Dataset d = load(a.input, a.data);
  const Correlation ca = correlate(load_model(a.model_a), d.vectors, a.pairs, a.seed);
  const Correlation cb = correlate(load_model(a.model_b), d.vectors, a.pairs, a.seed);
  if (!a.scatter_a.empty()) write_scatter(ca, a.scatter_a);
  if (!a.scatter_b.empty()) write_scatter(cb, a.scatter_b);
  fmt::print("pearson_a {:.6f}\n", ca.pearson);
  fmt::print("pearson_b {:.6f}\n", cb.pearson);
}

// --- regions ----------------------------------------------------------------

struct RegionsArgs {
  std::size_t dim = 2;
  std::size_t bits = 3;
  std::string mode = "offset";
  std::uint64_t seed = 0;
  bool exact = false;
  std::optional<std::size_t> samples;
  double radius = 10.0;
};

void run_regions(const RegionsArgs& a) {
  const ArrangementMode mode =
      a.mode == "central" ? ArrangementMode::kCentral : ArrangementMode::kOffset;
  const auto planes = sample_arrangement(mode, a.dim, a.bits, a.seed);
  std::uint64_t count = 0;
  if (a.samples) {
    count = count_regions_sampled(planes, a.dim, *a.samples, a.radius, a.seed);
    fmt::print("method sampled\n");
  } else {
    count = count_regions_exact(planes, a.dim);
    fmt::print("method exact\n");
  }
  fmt::print("regions {}\n", count);
  fmt::print("closed_form {}\n", closed_form_region_count(mode, a.dim, a.bits));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lshlift: hyperplane hashing with lifted offsets"};
  app.set_config("--config", "", "read options from a TOML/INI file; flags win");
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = all cores)");

  PreprocessArgs pre;
  auto* cmd_pre = app.add_subcommand("preprocess", "fit normalization and PCA");
  cmd_pre->add_option("--input", pre.input)->required();
  cmd_pre->add_option("--output-params", pre.output)->required();
  cmd_pre->add_option("--contribution", pre.contribution)->check(CLI::Range(0.0, 1.0));
  cmd_pre->add_flag("--allow-constant", pre.allow_constant);
  add_format(cmd_pre, pre.data);

  TrainArgs tr;
  auto* cmd_train = app.add_subcommand("train", "build a hash model");
  cmd_train->add_option("--method", tr.method)
      ->check(CLI::IsMember({"lsh", "lsh-lift", "pool", "pool-lift"}));
  cmd_train->add_option("--bits", tr.bits)->required();
  cmd_train->add_option("--seed", tr.seed);
  cmd_train->add_option("--params", tr.params)->required();
  cmd_train->add_option("--input", tr.input);
  cmd_train->add_option("--output-model", tr.output)->required();
  cmd_train->add_option("--pool-size", tr.pool_size);
  cmd_train->add_option("--iterations", tr.iterations);
  cmd_train->add_option("--max-pairs", tr.max_pairs);
  cmd_train->add_option("--auto-label", tr.auto_label, "label the top fraction of pairs by L2")
      ->check(CLI::Range(0.0, 1.0));
  add_format(cmd_train, tr.data);

  EncodeArgs enc;
  auto* cmd_enc = app.add_subcommand("encode", "hash vectors to packed codes");
  cmd_enc->add_option("--model", enc.model)->required();
  cmd_enc->add_option("--input", enc.input)->required();
  cmd_enc->add_option("--output-codes", enc.output)->required();
  add_format(cmd_enc, enc.data);

  QueryArgs q;
  auto* cmd_query = app.add_subcommand("query", "rank database codes for each query");
  cmd_query->add_option("--model", q.model)->required();
  cmd_query->add_option("--db-codes", q.db_codes)->required();
  cmd_query->add_option("--query-input", q.query_input)->required();
  auto* acq = cmd_query->add_option("--acquisition", q.acquisition);
  auto* topk = cmd_query->add_option("--top-k", q.top_k);
  acq->excludes(topk);
  topk->excludes(acq);
  cmd_query->add_option("--output", q.output, "CSV file (default: standard output)");
  add_format(cmd_query, q.data);

  EvaluateArgs ev;
  auto* cmd_eval = app.add_subcommand("evaluate", "precision, recall and error rate");
  cmd_eval->add_option("--model", ev.model)->required();
  cmd_eval->add_option("--dataset", ev.dataset)->required();
  cmd_eval->add_option("--splits", ev.splits, "one split name per line")->required();
  cmd_eval->add_option("--acquisition", ev.acquisitions)->required();
  cmd_eval->add_option("--auto-label", ev.auto_label)->check(CLI::Range(0.0, 1.0));
  cmd_eval->add_option("--output-csv", ev.output_csv);
  add_format(cmd_eval, ev.data);

  CorrelateArgs co;
  auto* cmd_corr = app.add_subcommand("correlate", "L2 against Hamming distance");
  cmd_corr->add_option("--model-a", co.model_a)->required();
  cmd_corr->add_option("--model-b", co.model_b)->required();
  cmd_corr->add_option("--input", co.input)->required();
  cmd_corr->add_option("--pairs", co.pairs);
  cmd_corr->add_option("--seed", co.seed);
  cmd_corr->add_option("--scatter-a", co.scatter_a, "CSV with columns l2,hamming");
  cmd_corr->add_option("--scatter-b", co.scatter_b, "CSV with columns l2,hamming");
  add_format(cmd_corr, co.data);

  RegionsArgs rg;
  auto* cmd_reg = app.add_subcommand("regions", "count regions of a random arrangement");
  cmd_reg->add_option("--dim", rg.dim)->required();
  cmd_reg->add_option("--bits", rg.bits)->required();
  cmd_reg->add_option("--mode", rg.mode)->check(CLI::IsMember({"central", "offset"}));
  cmd_reg->add_option("--seed", rg.seed);
  auto* exact = cmd_reg->add_flag("--exact", rg.exact);
  auto* samples = cmd_reg->add_option("--samples", rg.samples);
  exact->excludes(samples);
  samples->excludes(exact);
  cmd_reg->add_option("--radius", rg.radius, "sampling ball radius");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    fmt::print(stderr, "lshlift: error: {}\n", e.what());
    return 1;
  }

  try {
    set_thread_count(threads);
    if (*cmd_pre) run_preprocess(pre);
    if (*cmd_train) run_train(tr);
    if (*cmd_enc) run_encode(enc);
    if (*cmd_query) run_query(q);
    if (*cmd_eval) run_evaluate(ev);
    if (*cmd_corr) run_correlate(co);
    if (*cmd_reg) run_regions(rg);
  } catch (const std::exception& e) {
    fmt::print(stderr, "lshlift: error: {}\n", e.what());
    return 1;
  }
  return 0;
}
