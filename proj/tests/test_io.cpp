#include <gtest/gtest.h>

#include "hosd/hosd.hpp"

namespace hosd {
namespace {

TEST(TensorJson, GoldenGhzFixture) {
  const auto fixture = io::read_file(HOSD_TEST_DATA "/ghz_2_3.json");
  EXPECT_EQ(io::dump(io::tensor_to_json(ghz(2, 3).tensor())), fixture);
  EXPECT_EQ(io::tensor_from_json(io::parse(fixture)), ghz(2, 3).tensor());
}

TEST(TensorJson, RoundTripIsBitExact) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto t = random_haar({2, 1 + seed % 3, 3}, seed).tensor();
    const auto text = io::dump(io::tensor_to_json(t));
    const auto back = io::tensor_from_json(io::parse(text));
    EXPECT_EQ(back, t);
    EXPECT_EQ(io::dump(io::tensor_to_json(back)), text);
  }
}

TEST(TensorJson, RejectsMalformedInput) {
  EXPECT_THROW(io::parse("{\"shape\": [2, 2], \"data\": [[1, 0]"), Error);
  EXPECT_THROW(io::tensor_from_json(io::parse(R"({"shape":[2,2],"data":[[1,0],[0,0],[0,0]]})")), Error);
  EXPECT_THROW(io::tensor_from_json(io::parse(R"({"shape":[2],"data":[[1,0],[0]]})")), Error);
  EXPECT_THROW(io::tensor_from_json(io::parse(R"({"shape":[0],"data":[]})")), Error);
  EXPECT_THROW(io::tensor_from_json(io::parse(R"({"shape":[2.5],"data":[]})")), Error);
  EXPECT_THROW(io::tensor_from_json(io::parse(R"({"data":[[1,0]]})")), Error);
  try {
    io::tensor_from_json(io::parse(R"({"shape":[3],"data":[[1,0]]})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
}

TEST(VerdictJson, DecomposableLayout) {
  const auto v = higher_schmidt(ghz(2, 3));
  const auto j = io::verdict_to_json(v);
  EXPECT_TRUE(j["decomposable"].get<bool>());
  EXPECT_EQ(j["a"].size(), 2u);
  EXPECT_TRUE(j["certificate"].is_null());
  EXPECT_TRUE(j["residual"].is_number());
  EXPECT_EQ(j["vectors"].size(), 3u);
  EXPECT_EQ(j["vectors"]["2"].size(), 2u);
  EXPECT_EQ(j["vectors"]["2"][0].size(), 2u);

  const auto d = io::decomposition_from_json(io::parse(io::dump(j)));
  EXPECT_LT(distance(reconstruct_higher(d), ghz(2, 3).tensor()), 1e-15);
}

TEST(VerdictJson, RefutationLayout) {
  const auto j = io::verdict_to_json(higher_schmidt(w_state(3)));
  EXPECT_FALSE(j["decomposable"].get<bool>());
  EXPECT_EQ(j["certificate"]["kind"], "RankExcess");
  EXPECT_EQ(j["certificate"]["muIndex"], 0);
  EXPECT_EQ(j["certificate"]["blockIndex"], 0);
  EXPECT_TRUE(j["certificate"]["nuIndex"].is_null());
  EXPECT_EQ(j["certificate"]["measuredValue"], 2.0);
  EXPECT_EQ(j["certificate"]["threshold"], 1.0);
  EXPECT_TRUE(j["residual"].is_null());
  EXPECT_THROW(io::decomposition_from_json(j), Error);
}

TEST(DecompositionJson, RejectsInconsistentFamilies) {
  auto j = io::verdict_to_json(higher_schmidt(ghz(2, 3)));
  j["vectors"]["1"].erase(0);
  EXPECT_THROW(io::decomposition_from_json(j), Error);
  auto k = io::verdict_to_json(higher_schmidt(ghz(2, 3)));
  k["vectors"].erase("2");
  EXPECT_THROW(io::decomposition_from_json(k), Error);
}

}  // namespace
}  // namespace hosd
