#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "eqls/evaluate.hpp"

using namespace eqls;

namespace {

struct Fixture {
  GateSet set{builtin_catalog()};

  Circuit single(const std::string& id, std::vector<int> wires, int n_wires,
                 int radix = 3) const {
    Circuit c;
    c.n_wires = n_wires;
    c.radix = radix;
    c.blocks = {Block{{Placement{*set.index_of(id), std::move(wires)}}}};
    return c;
  }
};

TargetSpec swap_target() {
  TargetSpec t;
  t.n_wires = 2;
  t.radix = 3;
  t.kind = TargetSpec::Kind::TruthTable;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      t.rows.emplace_back(std::vector<int>{a, b}, std::vector<int>{b, a});
  return t;
}

}  // namespace

TEST_CASE("circuit matrix composes blocks in order") {
  Fixture f;
  Circuit c;
  c.n_wires = 2;
  c.radix = 2;
  const int h = *f.set.index_of("H");
  const int cz = *f.set.index_of("CZ");
  c.blocks = {Block{{Placement{h, {1}}}}, Block{{Placement{cz, {0, 1}}}},
              Block{{Placement{h, {1}}}}};
  CHECK(approx_equal(circuit_matrix(c, f.set), f.set.by_id("CNOT").matrix,
                     {1e-9}));
}

TEST_CASE("circuit cost counts multi-wire gates") {
  Fixture f;
  Circuit c;
  c.n_wires = 3;
  c.radix = 3;
  c.blocks = {Block{{Placement{*f.set.index_of("CZ3"), {0, 2}},
                     Placement{*f.set.index_of("H3"), {1}}}},
              Block{{Placement{*f.set.index_of("CS12"), {0, 1, 2}}}}};
  CHECK(circuit_cost(c, f.set) == 2);
}

TEST_CASE("exact truth table scores perfectly") {
  Fixture f;
  const Circuit c = f.single("SWAP3", {0, 1}, 2);
  const TargetSpec t = swap_target();
  CHECK(boolean_error(c, t, f.set) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(correctness(c, t, f.set) == 100.0);
}

TEST_CASE("truth-table evaluation ignores phases") {
  Fixture f;
  Circuit c = f.single("SWAP3", {0, 1}, 2);
  c.blocks.insert(c.blocks.begin(),
                  Block{{Placement{*f.set.index_of("CZ3"), {0, 1}}}});
  CHECK(correctness(c, swap_target(), f.set) == 100.0);
}

TEST_CASE("wrong circuit accumulates squared deficits") {
  Fixture f;
  const Circuit idle = f.single("WIRE", {0}, 2);
  // identity vs swap: inputs 01 and 10 miss entirely
  CHECK(boolean_error(idle, swap_target(), f.set) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(correctness(idle, swap_target(), f.set) == 50.0);
}

TEST_CASE("partial targets marginalize unspecified wires") {
  Fixture f;
  TargetSpec t;
  t.n_wires = 2;
  t.radix = 3;
  t.kind = TargetSpec::Kind::PartialTruthTable;
  t.output_wires = {1};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      t.rows.emplace_back(std::vector<int>{a, b}, std::vector<int>{b});
  // garbage on wire 0 must not matter
  Circuit c = f.single("X02", {0}, 2);
  CHECK(correctness(c, t, f.set) == 100.0);
  // superposed garbage on wire 0 must not matter either
  Circuit h = f.single("H3", {0}, 2);
  CHECK(correctness(h, t, f.set) == 100.0);
  // wrong value on the specified wire does
  Circuit bad = f.single("X01", {1}, 2);
  CHECK(correctness(bad, t, f.set) == 0.0);
}

TEST_CASE("unitary targets: fidelity by default, coefficients on request") {
  Fixture f;
  TargetSpec t;
  t.n_wires = 2;
  t.radix = 3;
  t.kind = TargetSpec::Kind::Unitary;
  t.unitary = f.set.by_id("CZ3").matrix;

  const Circuit idle = f.single("WIRE", {0}, 2);
  const Circuit cz = f.single("CZ3", {0, 1}, 2);

  // per-column state fidelity cannot see the |11> phase
  CHECK(correctness(idle, t, f.set) == 100.0);
  CHECK(correctness(cz, t, f.set) == 100.0);

  t.phase_sensitive = true;
  CHECK(correctness(cz, t, f.set) == 100.0);
  const auto probs = input_probabilities(idle, t, f.set);
  CHECK(probs[3] == doctest::Approx(0.0).epsilon(1e-12));  // the |11> column
  CHECK(correctness(idle, t, f.set) == 75.0);
  // and a global phase alone is forgiven: compare CZ3 against -CZ3
  TargetSpec neg = t;
  for (auto& z : neg.unitary.entries()) z = -z;
  CHECK(correctness(cz, neg, f.set) == 100.0);
}

TEST_CASE("fitness formulas") {
  FitnessParams f0;
  CHECK(fitness(0.0, 1, f0) == 1.0);
  CHECK(fitness(1.0, 1, f0) == 0.5);
  CHECK_THROWS_AS(fitness(-0.1, 1, f0), std::invalid_argument);

  FitnessParams f1;
  f1.mode = FitnessParams::Mode::f1;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> derr(0.0, 4.0);
  std::uniform_int_distribution<int> dcost(1, 40);
  std::uniform_real_distribution<double> dalpha(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const double err = derr(rng);
    const int cost = dcost(rng);
    f1.alpha = dalpha(rng);
    f1.beta = 1.0 - f1.alpha;
    const double want = f1.alpha / (1.0 + err) + f1.beta / cost;
    const double got = fitness(err, cost, f1);
    CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
  }
  CHECK_THROWS_AS(fitness(0.0, 0, f1), std::invalid_argument);
}

TEST_CASE("fitness decreases as error grows") {
  FitnessParams p;
  double last = 2.0;
  for (double err : {0.0, 0.25, 1.0, 3.0, 10.0}) {
    const double cur = fitness(err, 1, p);
    CHECK(cur < last);
    last = cur;
  }
}

TEST_CASE("evaluate_circuit bundles the metrics") {
  Fixture f;
  const Circuit c = f.single("SWAP3", {0, 1}, 2);
  const Evaluation e = evaluate_circuit(c, swap_target(), f.set, {});
  CHECK(e.correctness == 100.0);
  CHECK(e.raw_cost == 1);
  CHECK(e.cost == 1);
  CHECK(e.fitness == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("target files: truth tables") {
  std::istringstream full(
      "# swap\n"
      "00 00\n01 10\n10 01\n11 11\n");
  const TargetSpec t = load_target(full, 3);
  CHECK(t.kind == TargetSpec::Kind::TruthTable);
  CHECK(t.n_wires == 2);
  CHECK(t.rows.size() == 4);

  std::istringstream partial(
      "00 -0\n01 -1\n10 -0\n11 -1\n");
  const TargetSpec p = load_target(partial, 3);
  CHECK(p.kind == TargetSpec::Kind::PartialTruthTable);
  CHECK(p.output_wires == std::vector<int>{1});

  std::istringstream missing_rows("000 000\n001 001\n");
  CHECK(load_target(missing_rows, 3).kind ==
        TargetSpec::Kind::PartialTruthTable);

  std::istringstream not_injective("00 00\n01 00\n10 01\n11 11\n");
  CHECK_THROWS_AS(load_target(not_injective, 3), std::runtime_error);

  std::istringstream ragged("00 00\n011 10\n");
  CHECK_THROWS_AS(load_target(ragged, 3), std::runtime_error);

  std::istringstream bad_digit("0a 00\n");
  CHECK_THROWS_AS(load_target(bad_digit, 3), std::runtime_error);

  std::istringstream empty("# only comments\n");
  CHECK_THROWS_AS(load_target(empty, 3), std::runtime_error);
}

TEST_CASE("target files: unitary fixtures") {
  GateSet set(builtin_catalog());
  std::ostringstream os;
  os << "unitary phase\n";
  write_matrix(os, set.by_id("CZ3").matrix);
  std::istringstream is(os.str());
  const TargetSpec t = load_target(is, 3);
  CHECK(t.kind == TargetSpec::Kind::Unitary);
  CHECK(t.phase_sensitive);
  CHECK(t.n_wires == 2);
  CHECK(approx_equal(t.unitary, set.by_id("CZ3").matrix));

  std::istringstream not_unitary("unitary\n2 2\n1+0j 0+0j\n0+0j 0+0j\n");
  CHECK_THROWS_AS(load_target(not_unitary, 2), std::runtime_error);

  std::istringstream bad_dim("unitary\n2 2\n1+0j 0+0j\n0+0j 1+0j\n");
  CHECK_THROWS_AS(load_target(bad_dim, 3), std::runtime_error);
}
