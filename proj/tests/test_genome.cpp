#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "eqls/genome.hpp"

using namespace eqls;

namespace {

struct Fixture {
  GateSet set{builtin_catalog()};
  GateLexicon lex{&set, 3, 3};
};

}  // namespace

TEST_CASE("lexicon tokens are three delimiter-free characters") {
  Fixture f;
  CHECK(f.lex.token_count() > 0);
  const int cnot3 = *f.set.index_of("CNOT3");
  std::set<std::string> seen;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      if (a == b) continue;
      const std::string tok = f.lex.token(Placement{cnot3, {a, b}});
      CHECK(tok.size() == 3);
      CHECK(tok.find('p') == std::string::npos);
      CHECK(seen.insert(tok).second);  // distinct per placement
      const auto back = f.lex.lookup(tok);
      REQUIRE(back.has_value());
      CHECK(back->gate == cnot3);
      CHECK(back->wires == std::vector<int>{a, b});
    }
}

TEST_CASE("empty genome decodes to an idle block") {
  Fixture f;
  const Circuit c = decode(Genome{"pp", 3, 3}, f.lex);
  REQUIRE(c.blocks.size() == 1);
  CHECK(c.blocks[0].placements.size() == 3);
  const int wire = wire_gate_index(f.set, 3);
  for (const auto& p : c.blocks[0].placements) CHECK(p.gate == wire);
}

TEST_CASE("decode errors") {
  Fixture f;
  CHECK_THROWS_AS(decode(Genome{"", 3, 3}, f.lex), std::invalid_argument);
  CHECK_THROWS_AS(decode(Genome{"abc", 3, 3}, f.lex), std::invalid_argument);
  CHECK_THROWS_AS(decode(Genome{"pabp", 3, 3}, f.lex), std::invalid_argument);
  CHECK_THROWS_AS(decode(Genome{"p\x01\x01\x01p", 3, 3}, f.lex),
                  std::invalid_argument);  // unknown token
  // duplicate wire coverage: same token twice in one block
  const int cz3 = *f.set.index_of("CZ3");
  const std::string tok = f.lex.token(Placement{cz3, {0, 1}});
  CHECK_THROWS_AS(decode(Genome{"p" + tok + tok + "p", 3, 3}, f.lex),
                  std::invalid_argument);
  // width mismatch against the lexicon
  CHECK_THROWS_AS(decode(Genome{"pp", 2, 3}, f.lex), std::invalid_argument);
  CHECK_THROWS_AS(decode(Genome{"pp", 3, 2}, f.lex), std::invalid_argument);
}

TEST_CASE("encode is canonical and decode round-trips") {
  Fixture f;
  std::mt19937_64 rng(42);
  for (int t = 0; t < 500; ++t) {
    const Genome g = random_genome(3, 3, {1, 6}, f.lex, primitive_gate_ids(),
                                   nullptr, rng);
    CHECK(g.text.front() == 'p');
    CHECK(g.text.back() == 'p');
    const Circuit c = decode(g, f.lex);
    const Genome back = encode(c, f.lex);
    CHECK(back == g);
    // every block covers every wire exactly once
    for (const Block& b : c.blocks) {
      std::vector<int> covered(3, 0);
      for (const auto& p : b.placements)
        for (int w : p.wires) ++covered[w];
      CHECK(covered == std::vector<int>{1, 1, 1});
    }
  }
}

TEST_CASE("genome line format") {
  const Genome g{"pp", 3, 3};
  const std::string line = genome_to_line(g);
  CHECK(line == "wires=3 radix=3 pp");
  CHECK(genome_from_line(line) == g);
  CHECK_THROWS_AS(genome_from_line("bogus"), std::invalid_argument);
  CHECK_THROWS_AS(genome_from_line("wires=3"), std::invalid_argument);
}

TEST_CASE("restrictions narrow placements") {
  Fixture f;
  const RestrictionMap r{{"X02", {2}}, {"H3", {2}}};
  const int x02 = *f.set.index_of("X02");
  const int h3 = *f.set.index_of("H3");
  CHECK(placement_allowed(f.set, Placement{x02, {2}}, &r));
  CHECK_FALSE(placement_allowed(f.set, Placement{x02, {0}}, &r));
  CHECK_FALSE(placement_allowed(f.set, Placement{h3, {1}}, &r));
  const auto pairs =
      admissible_pairs(f.set, {x02, h3}, {0, 1, 2}, 3, &r);
  REQUIRE(pairs.size() == 2);
  for (const auto& p : pairs) CHECK(p.wires == std::vector<int>{2});

  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const Genome g = random_genome(3, 3, {2, 5}, f.lex, primitive_gate_ids(),
                                   &r, rng);
    CHECK(validate_restrictions(decode(g, f.lex), f.set, &r));
  }
}

TEST_CASE("random_block fills every wire") {
  Fixture f;
  std::mt19937_64 rng(9);
  const auto gates = resolve_gate_indices(f.set, primitive_gate_ids());
  for (int t = 0; t < 50; ++t) {
    const Block b = random_block(f.set, gates, 3, 3, nullptr, rng);
    std::vector<int> covered(3, 0);
    for (const auto& p : b.placements)
      for (int w : p.wires) ++covered[w];
    CHECK(covered == std::vector<int>{1, 1, 1});
  }
  // impossible request: only two-wire gates on a single free wire
  const std::vector<int> cz_only{*f.set.index_of("CZ3")};
  CHECK_THROWS_AS(random_block(f.set, cz_only, 1, 3, nullptr, rng),
                  std::runtime_error);
}

TEST_CASE("gate set overlays chain to their base") {
  GateSet base(builtin_catalog());
  const std::size_t base_size = base.size();
  GateSet overlay(&base);
  CHECK(overlay.size() == base_size);
  CHECK(overlay.index_of("CNOT3") == base.index_of("CNOT3"));

  GateDef g;
  g.id = "MRG0";
  g.radix = 3;
  g.arity = 1;
  g.matrix = permutation_matrix({1, 2, 0});
  const int idx = overlay.add(g);
  CHECK(static_cast<std::size_t>(idx) == base_size);
  CHECK(overlay.size() == base_size + 1);
  CHECK_FALSE(base.index_of("MRG0").has_value());
  CHECK(overlay.by_id("MRG0").arity == 1);
  // matrix-based dedup sees both layers
  CHECK(overlay.find_equivalent(3, 1, g.matrix) == idx);
  CHECK(overlay.find_equivalent(3, 2, builtin_catalog()[0].matrix) ==
        std::nullopt);
  const ComplexMatrix& cz3 = base.by_id("CZ3").matrix;
  CHECK(overlay.find_equivalent(3, 2, cz3) == base.index_of("CZ3"));
}

TEST_CASE("resolve_gate_indices rejects unknown ids") {
  Fixture f;
  CHECK_THROWS_AS(resolve_gate_indices(f.set, {"NOPE"}),
                  std::invalid_argument);
}
