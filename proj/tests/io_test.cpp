// Copyright 2026 The qcoupling Authors
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

#include "qcoupling/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>

#include "qcoupling/models.hpp"

namespace qcoupling {
namespace {

TEST(ChainJson, RoundTrip) {
  const ModelInstance m = hypercube_model(2);
  const TransitionMatrix back = io::chain_from_json(io::chain_to_json(*m.chain));
  EXPECT_EQ(back.labels(), m.chain->labels());
  EXPECT_LE(max_abs_diff(back.entries(), m.chain->entries()), 0.0);
}

TEST(ChainJson, Diagnostics) {
  auto message = [](const std::string& text) {
    try {
      io::chain_from_json(text);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kInvalidInput);
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message("{\"P\": [[1, 0], [0, 1]").find("malformed JSON"), std::string::npos);
  EXPECT_NE(message("{\"labels\": [\"a\"]}").find("'P'"), std::string::npos);
  EXPECT_NE(message("{\"P\": [[1, 0], [0]]}").find("P[1]"), std::string::npos);
  EXPECT_NE(message("{\"P\": [[1, 0], [0, \"x\"]]}").find("P[1][1]"), std::string::npos);
  EXPECT_NE(message("{\"P\": [[0.5, 0.5], [0.4, 0.5]]}").find("P:"), std::string::npos);
  EXPECT_NE(message("{\"labels\": [\"a\"], \"P\": [[0.5, 0.5], [0.5, 0.5]]}").find("labels"), std::string::npos);
}

TEST(CouplingJson, DenseRoundTrip) {
  const ModelInstance m = cycle_coupling_model(4, 0.3, CycleVariant::kProse);
  const auto back = io::coupling_from_json(io::coupling_to_json(*m.coupling));
  const auto& c = std::get<CouplingMatrix>(back);
  EXPECT_LE(max_abs_diff(c.dense(), m.coupling->dense()), 0.0);
  EXPECT_LE(max_abs_diff(c.base().entries(), m.chain->entries()), 1e-15);
}

TEST(CouplingJson, RmrRoundTrip) {
  const ModelInstance m = hardcore_model(GraphSpec::path(3), 2.0);
  const auto back = io::coupling_from_json(io::rmr_to_json(*m.rmr));
  const auto& r = std::get<RandomMappingRep>(back);
  EXPECT_EQ(r.table(), m.rmr->table());
  EXPECT_EQ(r.labels(), m.rmr->labels());
  ASSERT_EQ(r.outcomes(), m.rmr->outcomes());
  for (std::size_t k = 0; k < r.outcomes(); ++k) EXPECT_EQ(r.randomness()[k].prob, m.rmr->randomness()[k].prob);
}

TEST(CouplingJson, Rejections) {
  EXPECT_THROW(io::coupling_from_json("{\"kind\": \"other\"}"), Error);
  EXPECT_THROW(io::coupling_from_json("{\"kind\": \"rmr\", \"R\": [{\"prob\": 1}], \"f\": [[0], [2]]}"), Error);
  EXPECT_THROW(io::coupling_from_json("{\"kind\": \"rmr\", \"R\": [{\"prob\": 0.5}], \"f\": [[0], [1]]}"), Error);
  EXPECT_THROW(io::coupling_from_json("{\"kind\": \"dense\", \"C\": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}"), Error);
}

TEST(Csv, CoalescenceColumns) {
  const CoalescenceReport exact = coalescence_tail_exact(hypercube_model(2).coupling_matrix(), 3);
  EXPECT_EQ(io::coalescence_csv(exact), "m,tail_max\n0,1\n1,1\n2,0.5\n3,0.25\n");
  const ModelInstance m = hypercube_model(2);
  const CoalescenceReport mc = coalescence_tail_mc(*m.rmr, {{0, 3}}, {1, 2}, {1000, 1, 1});
  EXPECT_EQ(io::coalescence_csv(mc).rfind("m,tail_max,tail_ci_hi\n", 0), 0u);
}

TEST(Csv, TraceColumns) {
  ConvergenceTrace t;
  t.m = {0};
  t.trace_distance = {0.5};
  t.qperp_overlap = {0.25};
  EXPECT_EQ(io::trace_csv(t), "m,trace_distance,qperp_overlap,classical_tail_max,qperp_bound,theorem_envelope\n0,0.5,0.25,nan,nan,nan\n");
}

TEST(Choi, CsvHeaderAndJson) {
  ChoiMatrix j;
  j.dim = 1;
  j.matrix = Matrix::Identity(1, 1);
  j.order = ChoiOrder::kBasisFirst;
  EXPECT_EQ(io::choi_to_csv(j), "# 1,1,basis-factor-first\n1\n");
  EXPECT_NE(io::choi_to_json(j).find("\"order\": \"basis-factor-first\""), std::string::npos);
}

TEST(Checks, SummaryFields) {
  CheckResult c;
  c.name = "x";
  c.pass = true;
  c.provenance = "bound";
  const std::string s = io::checks_to_json({c});
  for (const char* key : {"\"name\"", "\"lhs\"", "\"rhs\"", "\"tolerance\"", "\"pass\"", "\"provenance\""})
    EXPECT_NE(s.find(key), std::string::npos) << key;
}

TEST(Hash, Fnv1aKnownValues) {
  EXPECT_EQ(io::content_hash(""), "cbf29ce484222325");
  EXPECT_EQ(io::content_hash("a"), "af63dc4c8601ec8c");
}

TEST(Files, WriteFailureReported) {
  EXPECT_THROW(io::write_file("/nonexistent-dir/x/y.txt", "z"), Error);
  const auto path = std::filesystem::temp_directory_path() / "qcoupling_io_test.txt";
  io::write_file(path.string(), "abc");
  EXPECT_EQ(io::read_file(path.string()), "abc");
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace qcoupling
