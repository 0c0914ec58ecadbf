// Copyright 2026 The GlossWeave Authors.
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

#include <doctest.h>

#include <cmath>
#include <vector>

#include "glossweave/corpus.hpp"
#include "glossweave/error.hpp"
#include "test_util.hpp"

using namespace glossweave;
using glossweave::testing::TempDir;

namespace {

SampleRecord record(const std::string& id, TokenSeq gloss) {
  SampleRecord r;
  r.id = id;
  r.llm_gloss = std::move(gloss);
  return r;
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("vocabulary counts occurrences across records") {
    std::vector<SampleRecord> rs = {record("a", {"A", "B"}), record("b", {"B", "C"})};
    const auto v = build_vocabulary(rs);
    REQUIRE(v.size() == 3);
    CHECK(v.freq()[static_cast<std::size_t>(v.id("A"))] == 1);
    CHECK(v.freq()[static_cast<std::size_t>(v.id("B"))] == 2);
    CHECK(v.freq()[static_cast<std::size_t>(v.id("C"))] == 1);
  }

  TEST_CASE("duplicates inside one record count twice") {
    std::vector<SampleRecord> rs = {record("a", {"X", "X"})};
    const auto v = build_vocabulary(rs);
    CHECK(v.size() == 1);
    CHECK(v.freq()[0] == 2);
  }

  TEST_CASE("empty corpus is rejected") {
    std::vector<SampleRecord> rs;
    CHECK_THROWS_AS(build_vocabulary(rs), Error);
  }

  TEST_CASE("frequency weights") {
    GlossVocabulary v({"A", "B", "C"}, {1000, 10, 1000});
    const auto w = compute_weights(v, 1.0).weights();
    CHECK(w[0] == 1.0);
    CHECK(w[2] == 1.0);
    CHECK(std::abs(w[1] - (1.0 + std::log(100.0))) < 1e-12);
    CHECK(std::abs(w[1] - 5.60517) < 1e-5);

    const auto doubled = compute_weights(v, 2.0).weights();
    CHECK(doubled[0] == 2.0);

    GlossVocabulary single({"S"}, {1});
    CHECK(compute_weights(single, 0.7).weights()[0] == 0.7);
    CHECK_THROWS_AS(compute_weights(v, 0.0), Error);
  }

  TEST_CASE("vocabulary rejects duplicate symbols and zero counts") {
    CHECK_THROWS_AS(GlossVocabulary({"A", "A"}, {1, 1}), Error);
    CHECK_THROWS_AS(GlossVocabulary({"A"}, {0}), Error);
    CHECK_THROWS_AS(GlossVocabulary({"A", "B"}, {1}), Error);
  }

  TEST_CASE("encode, decode and presence") {
    GlossVocabulary v({"A", "B", "C"}, {1, 1, 1});
    CHECK(v.encode({"C", "A"}) == IdSeq{2, 0});
    CHECK(v.decode({1, 2}) == TokenSeq{"B", "C"});
    CHECK_THROWS_AS(v.id("Z"), Error);
    CHECK_FALSE(v.find("Z").has_value());
    const auto y = v.presence({"C", "C", "A"});
    CHECK(y(0) == 1.0);
    CHECK(y(1) == 0.0);
    CHECK(y(2) == 1.0);
  }

  TEST_CASE("corpus round trip preserves records byte-exact") {
    TempDir dir("corpus-roundtrip");
    SampleRecord a = record("r1", {"FÜNFZEHN", "REGEN"});
    a.text = {"am", "fünfzehnten", "regen"};
    a.true_gloss = TokenSeq{"REGEN", "FÜNFZEHN"};
    a.features_path = "features/r1.glft";
    FeatureMatrix f(3, 2);
    f << 1.5f, -2.0f, 0.25f, 3.0f, 1e-7f, -0.0f;
    a.features = f;
    SampleRecord b = record("r2", {"SONNE"});
    b.reordered_gloss = TokenSeq{"SONNE"};
    std::vector<SampleRecord> rs = {a, b};
    save_corpus(dir / "c.jsonl", rs);
    const auto back = load_corpus(dir / "c.jsonl");
    REQUIRE(back.size() == 2);
    CHECK(back[0] == a);
    CHECK(back[1] == b);
    CHECK(back[0].llm_gloss[0] == "FÜNFZEHN");
  }

  TEST_CASE("truncated feature file names the record") {
    TempDir dir("corpus-truncated");
    SampleRecord a = record("broken-7", {"A"});
    a.features_path = "features/broken.glft";
    a.features = FeatureMatrix::Ones(4, 3);
    std::vector<SampleRecord> rs = {a};
    save_corpus(dir / "c.jsonl", rs);
    const auto full = glossweave::testing::slurp(dir / "features/broken.glft");
    glossweave::testing::spit(dir / "features/broken.glft", full.substr(0, full.size() - 5));
    try {
      load_corpus(dir / "c.jsonl");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("broken-7") != std::string::npos);
    }
  }

  TEST_CASE("malformed line reports its line number") {
    TempDir dir("corpus-malformed");
    glossweave::testing::spit(dir / "c.jsonl", "{\"id\":\"a\",\"text\":[],\"llm_gloss\":[\"A\"]}\n{not json\n");
    try {
      load_corpus(dir / "c.jsonl");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kParse);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }

  TEST_CASE("vocabulary file round trip") {
    TempDir dir("vocab");
    auto v = compute_weights(GlossVocabulary({"A", "B"}, {3, 1}), 1.5);
    save_vocabulary(dir / "v.json", v);
    CHECK(load_vocabulary(dir / "v.json") == v);
  }
}
