#include <gtest/gtest.h>

#include <random>
#include <set>
#include <vector>

#include "freemono/stallings.hpp"
#include "freemono/text.hpp"
#include "test_support.hpp"

namespace freemono {
namespace {

using testing::W;

CoreGraph core(std::initializer_list<const char*> gens, int rank = 2) {
  std::vector<Word> ws;
  for (const char* g : gens) ws.push_back(W(g, rank));
  return build_core_graph(ws, rank);
}

// Independent freeness check: does some nontrivial reduced expression of
// length <= max_len over the generators evaluate to the identity?
bool has_short_relation(const std::vector<Word>& gens, int rank, std::size_t max_len) {
  FreeGroup fm(static_cast<int>(gens.size()));
  for (std::size_t len = 1; len <= max_len; ++len) {
    bool found = false;
    fm.for_each_word_of_length(len, [&](const Word& expr) {
      if (!found && substitute(expr, gens).empty()) found = true;
    });
    if (found) return true;
  }
  (void)rank;
  return false;
}

TEST(Build, SquareAndLetter) {
  CoreGraph g = core({"aa", "b"});
  EXPECT_EQ(g.vertex_count(), 2u);
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_EQ(g.rank(), 2);
}

TEST(Build, EmptyGeneratorListIsTrivialGraph) {
  CoreGraph g = build_core_graph(std::vector<Word>{}, 2);
  EXPECT_EQ(g.vertex_count(), 1u);
  EXPECT_EQ(g.edge_count(), 0u);
  EXPECT_EQ(g.rank(), 0);
}

TEST(Build, TrivialGeneratorsAreSkipped) {
  CoreGraph g = build_core_graph(std::vector<Word>{Word{}, W("ab")}, 2);
  EXPECT_EQ(g.rank(), 1);
  auto expr = g.member(W("abab"));
  ASSERT_TRUE(expr);
  EXPECT_EQ(*expr, W("bb"));  // generator 2 twice
}

TEST(Build, NielsenEquivalentGeneratorsFoldToRose) {
  // <ab, abb> = <ab, b> = F_2.
  CoreGraph g = core({"ab", "abb"});
  EXPECT_EQ(g.vertex_count(), 1u);
  EXPECT_EQ(g.rank(), 2);
  EXPECT_EQ(g.key(), core({"a", "b"}).key());
}

TEST(Rank, Examples) {
  EXPECT_EQ(core({"aa", "b"}).rank(), 2);
  EXPECT_EQ(core({"abA"}).rank(), 1);
  EXPECT_EQ(core({"aa", "aaa"}).rank(), 1);
  EXPECT_EQ(core({"ab", "ba", "abab"}).rank(), 2);
}

TEST(Member, Examples) {
  CoreGraph g = core({"aa", "b"});
  auto expr = g.member(W("aab"));
  ASSERT_TRUE(expr);
  EXPECT_EQ(*expr, W("ab"));
  EXPECT_FALSE(g.member(W("a")));
  auto id = g.member(Word{});
  ASSERT_TRUE(id);
  EXPECT_TRUE(id->empty());
}

TEST(Member, NonFreeGeneratorsStillRewrite) {
  CoreGraph g = core({"aa", "aaa"});
  auto expr = g.member(W("a"));
  ASSERT_TRUE(expr);
  EXPECT_EQ(substitute(*expr, g.generators()), W("a"));
}

TEST(ImageRank, Examples) {
  EXPECT_EQ(image_rank(std::vector<Word>{W("a"), W("b")}, 2), 2);
  EXPECT_EQ(image_rank(std::vector<Word>{W("aa"), W("aaa")}, 2), 1);
  EXPECT_EQ(image_rank(std::vector<Word>{W("aab"), W("B")}, 2), 2);
}

TEST(SpanningTreeBasis, GeneratesSameSubgroup) {
  CoreGraph g = core({"aab", "bAb", "abA"});
  auto basis = g.spanning_tree_basis();
  EXPECT_EQ(static_cast<int>(basis.size()), g.rank());
  EXPECT_EQ(build_core_graph(basis, 2).key(), g.key());
}

TEST(Dump, GoldenFormat) {
  EXPECT_EQ(core({"aa", "b"}).dump(),
            "vertices 2 edges 3 rank 2\n"
            "* --a--> 1\n"
            "* --b--> *\n"
            "1 --a--> *\n");
  EXPECT_EQ(core({"abA"}).dump(),
            "vertices 2 edges 2 rank 1\n"
            "* --a--> 1\n"
            "1 --b--> 1\n");
}

class StallingsProperties : public ::testing::Test {
 protected:
  std::mt19937_64 rng{7};

  std::vector<Word> random_generators(int rank, std::size_t count, std::size_t max_len) {
    std::vector<Word> gens;
    for (std::size_t i = 0; i < count; ++i) {
      gens.push_back(testing::random_reduced(rng, rank, 1 + rng() % max_len));
    }
    return gens;
  }
};

TEST_F(StallingsProperties, FoldingIsConfluent) {
  for (int trial = 0; trial < 100; ++trial) {
    auto gens = random_generators(3, 1 + rng() % 4, 7);
    GraphKey reference = build_core_graph(gens, 3).key();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      EXPECT_EQ(build_core_graph(gens, 3, rng()).key(), reference);
    }
  }
}

TEST_F(StallingsProperties, WitnessesValidate) {
  for (int trial = 0; trial < 300; ++trial) {
    auto gens = random_generators(2, 1 + rng() % 3, 6);
    CoreGraph g = build_core_graph(gens, 2);
    // Random product of generators.
    Word expr = testing::random_reduced(rng, static_cast<int>(gens.size()), rng() % 6);
    Word v = substitute(expr, gens);
    auto found = g.member(v);
    ASSERT_TRUE(found);
    EXPECT_EQ(substitute(*found, gens), v);
  }
}

TEST_F(StallingsProperties, AcceptedSetIsClosed) {
  for (int trial = 0; trial < 200; ++trial) {
    auto gens = random_generators(2, 1 + rng() % 3, 5);
    CoreGraph g = build_core_graph(gens, 2);
    Word w1 = substitute(testing::random_reduced(rng, static_cast<int>(gens.size()), 4), gens);
    Word w2 = substitute(testing::random_reduced(rng, static_cast<int>(gens.size()), 4), gens);
    EXPECT_TRUE(g.accepts(w1 * w2));
    EXPECT_TRUE(g.accepts(invert(w1)));
  }
}

TEST(StallingsExhaustive, RankMatchesFreenessOracleOnPairs) {
  FreeGroup f2(2);
  std::vector<Word> words;
  for (const Word& w : f2.words_up_to(3)) {
    if (!w.empty()) words.push_back(w);
  }
  for (std::size_t i = 0; i < words.size(); ++i) {
    EXPECT_EQ(build_core_graph(std::vector<Word>{words[i]}, 2).rank(), 1);
    for (std::size_t j = i; j < words.size(); ++j) {
      std::vector<Word> gens{words[i], words[j]};
      bool free = !has_short_relation(gens, 2, 6);
      EXPECT_EQ(build_core_graph(gens, 2).rank() == 2, free)
          << to_string(words[i]) << ", " << to_string(words[j]);
    }
  }
}

}  // namespace
}  // namespace freemono
