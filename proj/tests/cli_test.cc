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

// Drives the lshlift binary end to end.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lshlift/hashing.h"
#include "lshlift/persist.h"
#include "test_util.h"

namespace lshlift {
namespace {

struct RunResult {
  int status = -1;
  std::string out, err;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  RunResult run(const std::string& args) {
    const auto out = dir_ / "stdout.txt";
    const auto err = dir_ / "stderr.txt";
    const std::string cmd = std::string(LSHLIFT_CLI_PATH) + " " + args + " >" +
                            out.string() + " 2>" + err.string();
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Labelled 6-dim data: three shifted Gaussian blobs.
  void write_labelled(const std::string& name, std::size_t n, std::uint64_t seed) {
    Dataset d;
    d.vectors = testing::gaussian_data(n, 6, seed);
    for (std::size_t i = 0; i < n; ++i) {
      const int label = static_cast<int>(i % 3);
      d.vectors[i][label] += 3.0;
      d.labels.push_back(label);
    }
    write_dataset(d, path(name), DatasetFormat::kCsv);
  }

  void write_splits(const std::string& name, std::size_t n) {
    std::ofstream out(path(name));
    for (std::size_t i = 0; i < n; ++i) {
      out << (i % 5 == 0 ? "query" : i % 5 == 1 ? "learn" : "database") << "\n";
    }
  }

  static std::string value_of(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind(key + " ", 0) == 0) return line.substr(key.size() + 1);
    }
    return {};
  }

  testing::TempDir dir_;
};

TEST_F(CliTest, PreprocessPrintsMinimalK) {
  write_labelled("d.csv", 300, 1);
  const RunResult r = run("preprocess --input " + path("d.csv") + " --output-params " +
                          path("p.lshp"));
  ASSERT_EQ(r.status, 0) << r.err;
  const PreprocessParams p = load_params(path("p.lshp"));
  EXPECT_EQ(value_of(r.out, "k"), std::to_string(p.output_dim));
  EXPECT_EQ(p.output_dim,
            minimal_components(p.eigenvalues, 0.80));
  EXPECT_NE(r.out.find("component,eigenvalue,contribution,cumulative"), std::string::npos);
}

TEST_F(CliTest, ConstantColumnNeedsFlag) {
  std::ofstream(path("c.csv")) << "1,5\n2,5\n3,5\n4,5\n";
  const RunResult bad = run("preprocess --input " + path("c.csv") + " --output-params " +
                            path("p.lshp"));
  EXPECT_EQ(bad.status, 1);
  EXPECT_EQ(std::count(bad.err.begin(), bad.err.end(), '\n'), 1) << bad.err;
  const RunResult ok = run("preprocess --input " + path("c.csv") + " --output-params " +
                           path("p.lshp") + " --allow-constant");
  EXPECT_EQ(ok.status, 0) << ok.err;
}

TEST_F(CliTest, TrainMethods) {
  write_labelled("d.csv", 200, 2);
  ASSERT_EQ(run("preprocess --input " + path("d.csv") + " --output-params " + path("p.lshp"))
                .status,
            0);
  const std::string base = "train --params " + path("p.lshp") + " --input " + path("d.csv") +
                           " --bits 24 --seed 5 ";

  ASSERT_EQ(run(base + "--method lsh --output-model " + path("lsh.lshm")).status, 0);
  for (const auto& h : load_model(path("lsh.lshm")).hyperplanes) EXPECT_EQ(h.offset(), 0.0);

  const RunResult lifted = run(base + "--method lsh-lift --output-model " + path("a.lshm"));
  ASSERT_EQ(lifted.status, 0) << lifted.err;
  const HashModel m = load_model(path("a.lshm"));
  EXPECT_EQ(m.bit_count(), 24u);
  EXPECT_TRUE(std::any_of(m.hyperplanes.begin(), m.hyperplanes.end(),
                          [](const Hyperplane& h) { return std::abs(h.offset()) > 0.0; }));
  EXPECT_FALSE(value_of(lifted.out, "mean_abs_offset").empty());

  ASSERT_EQ(run(base + "--method lsh-lift --output-model " + path("b.lshm")).status, 0);
  EXPECT_EQ(slurp(path("a.lshm")), slurp(path("b.lshm")));

  const std::string pool = base + "--pool-size 200 --iterations 20 ";
  ASSERT_EQ(run(pool + "--method pool --output-model " + path("pool.lshm")).status, 0);
  const RunResult pl = run(pool + "--method pool-lift --output-model " + path("pl.lshm"));
  ASSERT_EQ(pl.status, 0) << pl.err;
  EXPECT_EQ(load_model(path("pl.lshm")).bit_count(), 24u);
  ASSERT_EQ(run(pool + "--method pool-lift --auto-label 0.05 --output-model " + path("al.lshm"))
                .status,
            0);
}

TEST_F(CliTest, EncodeAndQuery) {
  write_labelled("d.csv", 150, 3);
  ASSERT_EQ(run("preprocess --input " + path("d.csv") + " --output-params " + path("p.lshp"))
                .status,
            0);
  ASSERT_EQ(run("train --method lsh-lift --bits 40 --seed 1 --params " + path("p.lshp") +
                " --input " + path("d.csv") + " --output-model " + path("m.lshm"))
                .status,
            0);
  const RunResult enc = run("encode --model " + path("m.lshm") + " --input " + path("d.csv") +
                            " --output-codes " + path("c.lshc"));
  ASSERT_EQ(enc.status, 0) << enc.err;
  EXPECT_EQ(value_of(enc.out, "count"), "150");

  const HashModel m = load_model(path("m.lshm"));
  const Dataset d = read_dataset(path("d.csv"), DatasetFormat::kCsv);
  const auto codes = load_codes(path("c.lshc"));
  EXPECT_EQ(codes, encode_all(m, d.vectors));

  ASSERT_EQ(run("encode --model " + path("m.lshm") + " --input " + path("d.csv") +
                " --output-codes " + path("c2.lshc"))
                .status,
            0);
  EXPECT_EQ(slurp(path("c.lshc")), slurp(path("c2.lshc")));

  const std::string q = "query --model " + path("m.lshm") + " --db-codes " + path("c.lshc") +
                        " --query-input " + path("d.csv");
  const RunResult both = run(q + " --acquisition 0.1 --top-k 3");
  EXPECT_EQ(both.status, 1);
  EXPECT_EQ(std::count(both.err.begin(), both.err.end(), '\n'), 1) << both.err;

  const RunResult full = run(q + " --acquisition 1.0 --output " + path("full.csv"));
  ASSERT_EQ(full.status, 0) << full.err;
  std::istringstream in(slurp(path("full.csv")));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "query,rank,index,distance");
  std::size_t rows = 0;
  const auto expect = search(codes[0], codes, codes.size());
  while (std::getline(in, line)) {
    std::size_t query, rank, index, distance;
    char c;
    std::istringstream row(line);
    row >> query >> c >> rank >> c >> index >> c >> distance;
    if (query == 0) {
      EXPECT_EQ(index, expect[rank].index);
      EXPECT_EQ(distance, expect[rank].distance);
    }
    ++rows;
  }
  EXPECT_EQ(rows, 150u * 150u);
}

TEST_F(CliTest, EvaluateIsDeterministicAndLabelled) {
  write_labelled("d.csv", 250, 4);
  write_splits("s.txt", 250);
  ASSERT_EQ(run("preprocess --input " + path("d.csv") + " --output-params " + path("p.lshp"))
                .status,
            0);
  ASSERT_EQ(run("train --method lsh-lift --bits 32 --seed 2 --params " + path("p.lshp") +
                " --input " + path("d.csv") + " --output-model " + path("m.lshm"))
                .status,
            0);
  const std::string ev = "evaluate --model " + path("m.lshm") + " --dataset " + path("d.csv") +
                         " --splits " + path("s.txt") + " --acquisition 0.05 0.2";
  const RunResult a = run("--threads 1 " + ev + " --output-csv " + path("a.csv"));
  ASSERT_EQ(a.status, 0) << a.err;
  const RunResult b = run("--threads 4 " + ev + " --output-csv " + path("b.csv"));
  ASSERT_EQ(b.status, 0) << b.err;
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(slurp(path("a.csv")).substr(0, 45), "bits,acquisition,precision,recall,error_rate\n");

  std::ofstream(path("nolabel.csv")) << "1,2\n3,4\n5,6\n";
  std::ofstream(path("s3.txt")) << "database\ndatabase\nquery\n";
  ASSERT_EQ(run("preprocess --input " + path("nolabel.csv") + " --output-params " +
                path("p2.lshp"))
                .status,
            0);
  ASSERT_EQ(run("train --method lsh-lift --bits 8 --params " + path("p2.lshp") + " --input " +
                path("nolabel.csv") + " --output-model " + path("m2.lshm"))
                .status,
            0);
  const std::string ev2 = "evaluate --model " + path("m2.lshm") + " --dataset " +
                          path("nolabel.csv") + " --splits " + path("s3.txt") +
                          " --acquisition 0.5";
  EXPECT_EQ(run(ev2).status, 1);
  const RunResult auto_label = run(ev2 + " --auto-label 0.4");
  EXPECT_EQ(auto_label.status, 0) << auto_label.err;
}

TEST_F(CliTest, CorrelateWritesScatter) {
  Dataset d;
  d.vectors = testing::gaussian_data(300, 2, 5);
  write_dataset(d, path("g.csv"), DatasetFormat::kCsv);
  ASSERT_EQ(run("preprocess --input " + path("g.csv") + " --contribution 1.0 --output-params " +
                path("p.lshp"))
                .status,
            0);
  for (const std::string method : {"lsh", "lsh-lift"}) {
    ASSERT_EQ(run("train --method " + method + " --bits 32 --seed 3 --params " +
                  path("p.lshp") + " --input " + path("g.csv") + " --output-model " +
                  path(method + ".lshm"))
                  .status,
              0);
  }
  const std::string co = "correlate --model-a " + path("lsh-lift.lshm") + " --model-b " +
                         path("lsh.lshm") + " --input " + path("g.csv") +
                         " --pairs 500 --seed 9 --scatter-a ";
  const RunResult a = run(co + path("sa.csv"));
  ASSERT_EQ(a.status, 0) << a.err;
  const RunResult b = run(co + path("sb.csv"));
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(slurp(path("sa.csv")), slurp(path("sb.csv")));
  EXPECT_EQ(slurp(path("sa.csv")).substr(0, 11), "l2,hamming\n");
  EXPECT_FALSE(value_of(a.out, "pearson_a").empty());
}

TEST_F(CliTest, RegionsSmallExamples) {
  const RunResult c = run("regions --dim 2 --bits 3 --mode central --seed 1 --exact");
  ASSERT_EQ(c.status, 0) << c.err;
  EXPECT_EQ(value_of(c.out, "regions"), "6");
  EXPECT_EQ(value_of(c.out, "closed_form"), "6");
  const RunResult o = run("regions --dim 2 --bits 3 --mode offset --seed 1");
  EXPECT_EQ(value_of(o.out, "regions"), "7");
  const RunResult s = run("regions --dim 2 --bits 3 --mode offset --seed 1 --samples 5000");
  EXPECT_LE(std::stoul(value_of(s.out, "regions")), 7u);
  EXPECT_EQ(run("regions --dim 2 --bits 3 --exact --samples 10").status, 1);
}

TEST_F(CliTest, ConfigFileAndErrors) {
  std::ofstream(path("r.toml")) << "[regions]\ndim = 2\nbits = 3\nmode = \"central\"\n";
  const RunResult r = run("--config " + path("r.toml") + " regions");
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(value_of(r.out, "regions"), "6");
  const RunResult flag_wins = run("--config " + path("r.toml") + " regions --mode offset");
  EXPECT_EQ(value_of(flag_wins.out, "regions"), "7");
  EXPECT_EQ(run("").status, 1);
  EXPECT_EQ(run("encode --model " + path("missing.lshm") + " --input x --output-codes y").status,
            1);
}

}  // namespace
}  // namespace lshlift
