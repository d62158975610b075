#include <random>
#include <string>

#include <gtest/gtest.h>

#include "leadalloc/error.hpp"
#include "leadalloc/names.hpp"

using namespace leadalloc;

TEST(Canonicalize, FoldsHyphenToSpace) {
  EXPECT_EQ(canonicalize_name("Bedford-Stuyvesant"), "bedford stuyvesant");
}

TEST(Canonicalize, TrimsAndLowercases) { EXPECT_EQ(canonicalize_name("  Englewood "), "englewood"); }

TEST(Canonicalize, EnDashAndSurroundingSpacesCollapse) {
  EXPECT_EQ(canonicalize_name("Hunts Point \xE2\x80\x93 Mott Haven"), "hunts point mott haven");
}

TEST(Canonicalize, DashStylesAgree) {
  const std::string expected = "bedford stuyvesant";
  EXPECT_EQ(canonicalize_name("Bedford\xE2\x80\x94Stuyvesant"), expected);  // em dash
  EXPECT_EQ(canonicalize_name("bedford\xE2\x80\x90stuyvesant"), expected);  // U+2010
  EXPECT_EQ(canonicalize_name("BEDFORD \xE2\x88\x92 STUYVESANT"), expected); // minus sign
  EXPECT_EQ(canonicalize_name("Bedford Stuyvesant"), expected);
}

TEST(Canonicalize, PunctuationBecomesSpace) {
  EXPECT_EQ(canonicalize_name("Gr. Grand Crossing"), "gr grand crossing");
  EXPECT_EQ(canonicalize_name("O'Hare"), "o hare");
}

TEST(Canonicalize, KeepsDistinctCompoundNames) {
  EXPECT_NE(canonicalize_name("Hunts Point - Mott Haven"), canonicalize_name("Mott Haven"));
}

TEST(Canonicalize, NonAsciiLettersKept) {
  EXPECT_EQ(canonicalize_name("Pils\xC3\xA9n"), "pils\xC3\xA9n");
}

TEST(Canonicalize, EmptyAfterNormalizationThrows) {
  for (const char* bad : {"", "   ", "--", "\xE2\x80\x94 . ,"}) {
    try {
      (void)canonicalize_name(bad);
      FAIL() << "expected invalid-name for \"" << bad << "\"";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidName);
    }
  }
}

TEST(Canonicalize, RejectsInvalidUtf8) {
  EXPECT_THROW((void)canonicalize_name("Engle\xFFwood"), Error);
  EXPECT_THROW((void)canonicalize_name("\xE2\x80"), Error);
}

TEST(Canonicalize, IdempotentOnRandomInputs) {
  const std::vector<std::string> pieces = {"a", "B", "z", "7", " ", "  ", "-", ".", "'", ",",
                                           "\xE2\x80\x93", "\xE2\x80\x94", "\xC2\xA0", "\t",
                                           "\xC3\xA9", "Mott", "HAVEN", "(", ")", "/"};
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::uniform_int_distribution<int> len(1, 12);
  int checked = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    std::string s;
    for (int i = len(rng); i > 0; --i) s += pieces[pick(rng)];
    std::string once;
    try {
      once = canonicalize_name(s);
    } catch (const Error&) {
      continue;
    }
    EXPECT_EQ(canonicalize_name(once), once) << "input: " << s;
    ++checked;
  }
  EXPECT_GT(checked, 1000);
}

TEST(AliasTable, ResolvesAliasesAfterFolding) {
  const auto table = AliasTable::parse(R"({"greater grand crossing": ["Gr. Grand Crossing"]})");
  EXPECT_EQ(canonicalize_name("GR. GRAND CROSSING", table), "greater grand crossing");
  EXPECT_EQ(canonicalize_name("Greater Grand-Crossing", table), "greater grand crossing");
  EXPECT_EQ(canonicalize_name("Englewood", table), "englewood");
}

TEST(AliasTable, KeysAreCanonicalized) {
  const auto table = AliasTable::parse(R"({"Bedford-Stuyvesant": ["Bed Stuy"]})");
  EXPECT_EQ(canonicalize_name("bed-stuy", table), "bedford stuyvesant");
}

TEST(AliasTable, AliasingStaysIdempotent) {
  const auto table = AliasTable::parse(R"({"mott haven": ["Hunts Point - Mott Haven"]})");
  const auto once = canonicalize_name("Hunts Point \xE2\x80\x93 Mott Haven", table);
  EXPECT_EQ(once, "mott haven");
  EXPECT_EQ(canonicalize_name(once, table), once);
}

TEST(AliasTable, RejectsChains) {
  EXPECT_THROW(AliasTable::parse(R"({"a b": ["c"], "c": ["d"]})"), Error);
}

TEST(AliasTable, RejectsAmbiguousAlias) {
  EXPECT_THROW(AliasTable::parse(R"({"north": ["n"], "south": ["N"]})"), Error);
}

TEST(AliasTable, RejectsMalformedDocuments) {
  EXPECT_THROW(AliasTable::parse("[1,2]"), Error);
  EXPECT_THROW(AliasTable::parse(R"({"a": "b"})"), Error);
  EXPECT_THROW(AliasTable::parse(R"({"a": [3]})"), Error);
  EXPECT_THROW(AliasTable::parse("{"), Error);
}

TEST(AliasTable, BundledDefaultsLoad) {
  const auto table = AliasTable::load(std::string(LEADALLOC_SOURCE_DIR) + "/data/aliases.json");
  EXPECT_FALSE(table.empty());
  EXPECT_EQ(canonicalize_name("Bed-Stuy", table), "bedford stuyvesant");
  EXPECT_EQ(canonicalize_name("Gr. Grand Crossing", table), "greater grand crossing");
}
