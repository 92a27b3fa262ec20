#include <gtest/gtest.h>

#include <cstring>
#include <set>
#include <sstream>

#include "irfs/dataset.hpp"
#include "irfs/errors.hpp"
#include "irfs/rng.hpp"
#include "support/synthetic.hpp"

namespace irfs {
namespace {

Dataset parse(const std::string& text, LoadOptions options = {}) {
  std::istringstream in(text);
  return parse_csv(in, "inline", options);
}

TEST(LoadCsv, ReadsSmallFileWithNamedLabel) {
  LoadOptions opts;
  opts.label_column = "y";
  opts.min_samples = 1;
  const Dataset d = parse("a,b,y\n1,2,0\n3,4,1\n5,6,0\n", opts);
  EXPECT_EQ(d.num_features, 2u);
  EXPECT_EQ(d.num_samples, 3u);
  EXPECT_EQ(d.labels, (std::vector<int>{0, 1, 0}));
  EXPECT_EQ(d.feature_names, (std::vector<std::string>{"a", "b"}));
  EXPECT_DOUBLE_EQ(d.at(2, 1), 6.0);
}

TEST(LoadCsv, DefaultMinimumRejectsTinyFiles) {
  EXPECT_THROW(parse("a,b,y\n1,2,0\n3,4,1\n5,6,0\n"), SchemaError);
}

TEST(LoadCsv, RejectsNaNCell) {
  std::string text = "a,b,y\n";
  for (int i = 0; i < 12; ++i) text += std::to_string(i) + "," + (i == 4 ? "NaN" : "1") + "," + std::to_string(i % 2) + "\n";
  try {
    parse(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 6u);
    EXPECT_EQ(e.col(), 2u);
  }
}

TEST(LoadCsv, RejectsMalformedAndRaggedRows) {
  std::string text;
  for (int i = 0; i < 12; ++i) text += std::to_string(i) + ",2," + std::to_string(i % 2) + "\n";
  EXPECT_THROW(parse(text + "1,abc,0\n"), ParseError);
  EXPECT_THROW(parse(text + "1,2\n"), ParseError);
}

TEST(LoadCsv, SchemaAndLabelErrors) {
  std::string one_feature, one_class;
  for (int i = 0; i < 12; ++i) {
    one_feature += std::to_string(i) + "," + std::to_string(i % 2) + "\n";
    one_class += std::to_string(i) + ",1,7\n";
  }
  EXPECT_THROW(parse(one_feature), SchemaError);
  EXPECT_THROW(parse(one_class), LabelError);
}

TEST(LoadCsv, LabelTokensMapInFirstAppearanceOrder) {
  std::string text;
  const char* tokens[] = {"spam", "ham", "eggs"};
  for (int i = 0; i < 12; ++i) text += std::to_string(i) + ",1," + tokens[i % 3] + "\n";
  const Dataset d = parse(text);
  EXPECT_EQ(d.num_classes, 3u);
  EXPECT_EQ(d.class_tokens, (std::vector<std::string>{"spam", "ham", "eggs"}));
  EXPECT_EQ(d.labels[0], 0);
  EXPECT_EQ(d.labels[1], 1);
  EXPECT_EQ(d.labels[5], 2);
}

TEST(LoadCsv, HeaderDetectionAndOverride) {
  std::string body;
  for (int i = 0; i < 12; ++i) body += std::to_string(i) + ",2," + std::to_string(i % 2) + "\n";
  // all-numeric first row is data unless overridden
  const Dataset auto_detect = parse("10,20,1\n" + body);
  EXPECT_EQ(auto_detect.num_samples, 13u);
  LoadOptions forced;
  forced.has_header = true;
  const Dataset with_header = parse("10,20,1\n" + body, forced);
  EXPECT_EQ(with_header.num_samples, 12u);
  EXPECT_EQ(with_header.feature_names[0], "10");
}

TEST(LoadCsv, LabelColumnByIndex) {
  std::string text = "y,a,b\n";
  for (int i = 0; i < 12; ++i) text += std::to_string(i % 2) + "," + std::to_string(i) + ",5\n";
  LoadOptions first;
  first.label_column = "0";
  const Dataset d = parse(text, first);
  EXPECT_EQ(d.feature_names, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(d.labels[3], 1);
  LoadOptions bad;
  bad.label_column = "9";
  EXPECT_THROW(parse(text, bad), SchemaError);
}

TEST(LoadCsv, SpambaseShapedFile) {
  // 57 numeric features + final 0/1 label, no header, 4601 rows
  std::ostringstream out;
  Rng rng(3);
  for (int r = 0; r < 4601; ++r) {
    for (int c = 0; c < 57; ++c) out << rng.uniform(0, 10) << ',';
    out << (r % 3 == 0 ? 1 : 0) << '\n';
  }
  const Dataset d = parse(out.str());
  EXPECT_EQ(d.num_features, 57u);
  EXPECT_EQ(d.num_samples, 4601u);
  EXPECT_EQ(d.num_classes, 2u);
}

TEST(LoadCsv, WriteThenReloadIsBitExact) {
  Rng rng(11);
  std::vector<std::vector<double>> cols(3, std::vector<double>(40));
  std::vector<int> labels(40);
  for (std::size_t i = 0; i < 40; ++i) {
    for (auto& c : cols) c[i] = rng.normal() * 1e3 / 7.0;
    labels[i] = static_cast<int>(i % 3);
  }
  const Dataset d = make_dataset("rt", cols, labels);
  std::stringstream buf;
  write_csv(d, buf);
  const Dataset back = parse_csv(buf, "rt");
  ASSERT_EQ(back.values.size(), d.values.size());
  EXPECT_EQ(std::memcmp(back.values.data(), d.values.data(), d.values.size() * sizeof(double)), 0);
  EXPECT_EQ(back.labels, d.labels);
}

TEST(Split, NinetyTenIsDeterministic) {
  const Dataset d = testing::majority_dataset(100, 4, {0, 1, 2}, 5);
  const auto a = split_indices(d, {0.9, 7});
  const auto b = split_indices(d, {0.9, 7});
  EXPECT_EQ(a.train.size(), 90u);
  EXPECT_EQ(a.test.size(), 10u);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
}

TEST(Split, HalfOfTen) {
  const Dataset d = testing::majority_dataset(10, 3, {0}, 9);
  const auto idx = split_indices(d, {0.5, 1});
  EXPECT_EQ(idx.train.size(), 5u);
  EXPECT_EQ(idx.test.size(), 5u);
}

TEST(Split, SeedsGiveDifferentPermutations) {
  const Dataset d = testing::majority_dataset(100, 4, {0, 1, 2}, 5);
  EXPECT_NE(split_indices(d, {0.9, 1}).train, split_indices(d, {0.9, 2}).train);
}

TEST(Split, PartitionIsExhaustiveAndDisjoint) {
  const Dataset d = testing::majority_dataset(137, 4, {0, 1, 2}, 5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto idx = split_indices(d, {0.7, seed});
    std::set<std::size_t> all(idx.train.begin(), idx.train.end());
    all.insert(idx.test.begin(), idx.test.end());
    EXPECT_EQ(all.size(), d.num_samples);
    EXPECT_EQ(idx.train.size() + idx.test.size(), d.num_samples);
    EXPECT_EQ(*all.rbegin(), d.num_samples - 1);
  }
}

TEST(Split, RejectsEmptyHalves) {
  const Dataset d = testing::majority_dataset(10, 3, {0}, 9);
  EXPECT_THROW(split_indices(d, {0.99, 1}), SplitError);
  EXPECT_THROW(split_indices(d, {0.01, 1}), SplitError);
  EXPECT_THROW(split_indices(d, {1.0, 1}), ConfigError);
}

TEST(Split, RejectsSingleClassTrainHalf) {
  // class 1 appears only in one row: a 10% train half of 10 rows holds 1 row
  std::vector<std::vector<double>> cols(2, std::vector<double>(10, 1.0));
  std::vector<int> labels(10, 0);
  labels[9] = 1;
  const Dataset d = make_dataset("rare", cols, labels);
  EXPECT_THROW(split_indices(d, {0.1, 3}), SplitError);
}

TEST(Standardize, ConstantColumnStaysZero) {
  std::vector<std::vector<double>> cols{std::vector<double>(10, 4.0), {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}};
  const Dataset d = make_dataset("c", cols, {0, 1, 0, 1, 0, 1, 0, 1, 0, 1});
  const auto z = standardized_values(d);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(z[i], 0.0);
  double mean = 0.0;
  for (std::size_t i = 10; i < 20; ++i) mean += z[i];
  EXPECT_NEAR(mean, 0.0, 1e-12);
}

}  // namespace
}  // namespace irfs
