#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "ssnkit/seqio.hpp"

using namespace ssnkit;

namespace {

Dataset parse(const std::string& text, bool strict = false) {
  std::istringstream in(text);
  return parse_fasta(in, strict);
}

template <class E>
void expect_kind(const std::function<void()>& fn, ErrorKind kind) {
  try {
    fn();
    FAIL() << "expected an exception";
  } catch (const E& e) {
    EXPECT_EQ(e.kind(), kind);
  }
}

}  // namespace

TEST(ParseFasta, TwoRecordsKeepOrder) {
  const auto ds = parse(">b\nACD\n>a\nEFG\nHIK\n");
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds[0].id, "b");
  EXPECT_EQ(ds[1].id, "a");
  EXPECT_EQ(ds[1].residues, "EFGHIK");
}

TEST(ParseFasta, HeaderSplitsIdAndLabel) {
  const auto ds = parse(">s1|B.1.1.7\nACDE\n");
  EXPECT_EQ(ds[0].id, "s1");
  ASSERT_TRUE(ds[0].label.has_value());
  EXPECT_EQ(*ds[0].label, "B.1.1.7");
}

TEST(ParseFasta, StrictRejectsOutOfAlphabet) {
  expect_kind<AlphabetError>([] { parse(">s\nACXD\n", true); }, ErrorKind::Alphabet);
}

TEST(ParseFasta, LenientFlagsOutOfAlphabet) {
  const auto ds = parse(">s\nACXD\n");
  EXPECT_TRUE(ds[0].has_invalid);
  EXPECT_EQ(ds[0].residues, "ACXD");
}

TEST(ParseFasta, LowercaseAndStopSymbol) {
  const auto ds = parse(">s\nacd*\n");
  EXPECT_EQ(ds[0].residues, "ACD");
  EXPECT_FALSE(ds[0].has_invalid);
}

TEST(ParseFasta, EmptyInput) { expect_kind<EmptyInputError>([] { parse("\n\n"); }, ErrorKind::EmptyInput); }

TEST(ParseFasta, MalformedHeaderReportsLine) {
  try {
    parse(">ok\nACD\n>\nACD\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    parse("ACD\n>s\nACD\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(ParseFasta, DuplicateIdRejected) { EXPECT_THROW(parse(">a\nAC\n>a\nAC\n"), ParseError); }

TEST(ParseFasta, MissingFileIsIoError) {
  EXPECT_THROW(parse_fasta(std::filesystem::path("/nonexistent/x.fasta")), IoError);
}

TEST(Synth, ZeroNoiseGivesIdenticalMembers) {
  SynthConfig cfg;
  cfg.num_lineages = 1;
  cfg.per_lineage = {3};
  cfg.length = 50;
  cfg.within_mut_rate = 0.0;
  cfg.between_mut_count = 5;
  cfg.seed = 11;
  const auto ds = synthesize_dataset(cfg);
  ASSERT_EQ(ds.size(), 3u);
  for (const auto& r : ds) {
    EXPECT_EQ(r.residues, ds[0].residues);
    EXPECT_EQ(r.label.value(), "L0");
    EXPECT_EQ(r.residues.size(), 50u);
  }
}

TEST(Synth, DefaultShape) {
  SynthConfig cfg;
  const auto ds = synthesize_dataset(cfg);
  EXPECT_EQ(ds.size(), 400u);
  const auto labels = ds.labels();
  EXPECT_EQ(std::set<std::string>(labels.begin(), labels.end()).size(), 4u);
}

TEST(Synth, SameSeedIsByteIdentical) {
  SynthConfig cfg;
  cfg.seed = 7;
  std::ostringstream a, b;
  write_fasta(a, synthesize_dataset(cfg));
  write_fasta(b, synthesize_dataset(cfg));
  EXPECT_EQ(a.str(), b.str());
  cfg.seed = 8;
  std::ostringstream c;
  write_fasta(c, synthesize_dataset(cfg));
  EXPECT_NE(a.str(), c.str());
}

TEST(Synth, AncestorsDifferFromEachOtherAtMostTwiceTheMutationCount) {
  SynthConfig cfg;
  cfg.num_lineages = 3;
  cfg.per_lineage = {1, 1, 1};
  cfg.length = 200;
  cfg.within_mut_rate = 0.0;
  cfg.between_mut_count = 10;
  const auto ds = synthesize_dataset(cfg);
  for (std::size_t a = 0; a < ds.size(); ++a)
    for (std::size_t b = a + 1; b < ds.size(); ++b) {
      int diff = 0;
      for (std::size_t i = 0; i < 200; ++i) diff += ds[a].residues[i] != ds[b].residues[i];
      EXPECT_GT(diff, 0);
      EXPECT_LE(diff, 20);
    }
}

TEST(Synth, PerLineageMismatchIsConfigError) {
  SynthConfig cfg;
  cfg.per_lineage = {1, 2};
  EXPECT_THROW(synthesize_dataset(cfg), ConfigError);
}

TEST(Synth, RoundTripThroughFasta) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SynthConfig cfg;
    cfg.per_lineage = {5, 6, 7, 8};
    cfg.length = 137;
    cfg.seed = seed;
    const auto ds = synthesize_dataset(cfg);
    std::stringstream io;
    write_fasta(io, ds);
    EXPECT_EQ(parse_fasta(io, true), ds);
  }
}

TEST(Split, SizesFollowRounding) {
  SplitOptions opt;
  opt.stratified = false;
  opt.num_folds = 2;
  const auto plan = make_split(std::span<const int>{}, 10, opt);
  EXPECT_EQ(plan.test_indices.size(), 3u);
  EXPECT_EQ(plan.train_indices.size(), 7u);
}

TEST(Split, SeedsChangeOrderNotSizes) {
  SplitOptions a, b;
  a.stratified = b.stratified = false;
  b.seed = 1;
  const auto pa = make_split(std::span<const int>{}, 50, a);
  const auto pb = make_split(std::span<const int>{}, 50, b);
  EXPECT_EQ(pa.test_indices.size(), pb.test_indices.size());
  EXPECT_NE(pa.test_indices, pb.test_indices);
}

TEST(Split, StratifiedKeepsMinorityInTest) {
  std::vector<int> cls{0, 0, 0, 0, 0, 0, 0, 0, 1, 1};
  SplitOptions opt;
  opt.num_folds = 2;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    opt.seed = seed;
    const auto plan = make_split(cls, cls.size(), opt);
    EXPECT_EQ(plan.test_indices.size(), 3u);
    EXPECT_GE(std::count_if(plan.test_indices.begin(), plan.test_indices.end(), [&](int i) { return cls[i] == 1; }), 1);
  }
}

TEST(Split, SmallClassUnderStratificationIsError) {
  std::vector<int> cls{0, 0, 0, 0, 0, 0, 1, 1};
  SplitOptions opt;  // 5 folds
  EXPECT_THROW(make_split(cls, cls.size(), opt), StratifyError);
}

TEST(Split, PlansArePartitions) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (bool stratified : {false, true}) {
      const std::size_t n = 40 + seed * 7;
      std::vector<int> cls(n);
      for (std::size_t i = 0; i < n; ++i) cls[i] = static_cast<int>((i * 7) % 3);
      SplitOptions opt;
      opt.seed = seed;
      opt.stratified = stratified;
      const auto plan = make_split(cls, n, opt);
      std::vector<int> all = plan.train_indices;
      all.insert(all.end(), plan.test_indices.begin(), plan.test_indices.end());
      std::sort(all.begin(), all.end());
      for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(all[i], static_cast<int>(i));
      EXPECT_EQ(plan.train_indices.size(), train_size(n, opt.test_fraction));
      std::vector<int> validated;
      for (const auto& f : plan.folds) {
        EXPECT_EQ(f.train.size() + f.validate.size(), plan.train_indices.size());
        validated.insert(validated.end(), f.validate.begin(), f.validate.end());
      }
      std::sort(validated.begin(), validated.end());
      std::vector<int> train = plan.train_indices;
      std::sort(train.begin(), train.end());
      EXPECT_EQ(validated, train);
      if (stratified) {
        for (int c = 0; c < 3; ++c) {
          const auto members = std::count(cls.begin(), cls.end(), c);
          const auto in_test = std::count_if(plan.test_indices.begin(), plan.test_indices.end(),
                                             [&](int i) { return cls[static_cast<std::size_t>(i)] == c; });
          EXPECT_LE(std::abs(static_cast<double>(in_test) - 0.3 * static_cast<double>(members)), 1.0);
        }
      }
    }
  }
}

TEST(Split, DatasetOverloadRequiresLabels) {
  const auto ds = Dataset({{"a", "ACD", std::nullopt, false}, {"b", "ACD", std::nullopt, false}});
  EXPECT_THROW(make_split(ds, {}), StratifyError);
}
