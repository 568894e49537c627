#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "genome.hpp"

namespace eqls {

/// Synthesis target: a unitary to match or a (possibly partial) Boolean
/// truth table. Truth-table rows map a Boolean input word to the desired
/// digits on `output_wires` (all wires when empty).
struct TargetSpec {
  enum class Kind { Unitary, TruthTable, PartialTruthTable };

  Kind kind = Kind::TruthTable;
  int n_wires = 0;
  int radix = 3;
  ComplexMatrix unitary;
  bool phase_sensitive = false;  // Unitary only: compare matrix coefficients
  std::vector<int> output_wires;
  std::vector<std::pair<std::vector<int>, std::vector<int>>> rows;
};

struct FitnessParams {
  enum class Mode { f0, f1 };
  Mode mode = Mode::f0;
  double alpha = 0.9;
  double beta = 0.1;
};

struct Evaluation {
  double error = 0.0;
  double correctness = 0.0;  // percentage
  int raw_cost = 0;          // primitive count before minimization
  int merged_cost = 0;       // after minimization (equals raw when unused)
  int cost = 1;              // value used by the fitness function, >= 1
  double fitness = 0.0;
};

/// Applies every block of `c` (left to right) to the columns of `state`.
inline void apply_circuit(ComplexMatrix& state, const Circuit& c,
                          const GateSet& set) {
  for (const Block& b : c.blocks)
    for (const Placement& p : b.placements) {
      const GateDef& g = set[p.gate];
      if (g.arity == 1 && g.id == (c.radix == 3 ? "WIRE" : "I2")) continue;
      apply_gate(state, g.matrix, p.wires, c.n_wires, c.radix);
    }
}

/// Full unitary of the circuit: the block product in circuit order.
inline ComplexMatrix circuit_matrix(const Circuit& c, const GateSet& set) {
  ComplexMatrix m = ComplexMatrix::identity(
      static_cast<std::size_t>(ipow(c.radix, c.n_wires)));
  apply_circuit(m, c, set);
  return m;
}

inline int circuit_cost(const Circuit& c, const GateSet& set,
                        const CostModel& model = {}) {
  int cost = 0;
  for (const Block& b : c.blocks)
    for (const Placement& p : b.placements) cost += gate_cost(set[p.gate], model);
  return cost;
}

inline std::size_t word_index(const std::vector<int>& digits, int radix) {
  std::size_t idx = 0;
  for (int d : digits) idx = idx * radix + static_cast<std::size_t>(d);
  return idx;
}

inline std::vector<std::vector<int>> boolean_words(int n_wires) {
  std::vector<std::vector<int>> words;
  for (std::size_t w = 0; w < (std::size_t{1} << n_wires); ++w) {
    std::vector<int> digits(n_wires);
    for (int i = 0; i < n_wires; ++i)
      digits[i] = static_cast<int>((w >> (n_wires - 1 - i)) & 1u);
    words.push_back(std::move(digits));
  }
  return words;
}

/// Probability of the desired outcome for each evaluated Boolean input.
/// Truth-table targets measure in the computational basis (phases are
/// discarded); partial targets marginalize over unspecified wires. Unitary
/// targets compare per-input state fidelity, or, when phase_sensitive is
/// set, column distance after aligning one global phase.
inline std::vector<double> input_probabilities(const Circuit& c,
                                               const TargetSpec& t,
                                               const GateSet& set) {
  if (t.n_wires != c.n_wires || t.radix != c.radix)
    throw std::invalid_argument("target/circuit width or radix mismatch");
  const std::size_t dim = static_cast<std::size_t>(ipow(c.radix, c.n_wires));

  std::vector<std::size_t> inputs;
  if (t.kind == TargetSpec::Kind::Unitary) {
    for (const auto& w : boolean_words(c.n_wires))
      inputs.push_back(word_index(w, c.radix));
  } else {
    for (const auto& row : t.rows) inputs.push_back(word_index(row.first, c.radix));
  }

  ComplexMatrix state(dim, inputs.size());
  for (std::size_t col = 0; col < inputs.size(); ++col)
    state(inputs[col], col) = 1.0;
  apply_circuit(state, c, set);

  std::vector<double> probs(inputs.size(), 0.0);

  if (t.kind == TargetSpec::Kind::Unitary) {
    if (!t.phase_sensitive) {
      for (std::size_t col = 0; col < inputs.size(); ++col) {
        cplx inner{};
        for (std::size_t r = 0; r < dim; ++r)
          inner += std::conj(t.unitary(r, inputs[col])) * state(r, col);
        probs[col] = std::norm(inner);
      }
    } else {
      cplx overlap{};
      for (std::size_t col = 0; col < inputs.size(); ++col)
        for (std::size_t r = 0; r < dim; ++r)
          overlap += std::conj(state(r, col)) * t.unitary(r, inputs[col]);
      const cplx phase =
          std::abs(overlap) > 1e-15 ? overlap / std::abs(overlap) : cplx{1.0};
      for (std::size_t col = 0; col < inputs.size(); ++col) {
        double dist2 = 0.0;
        for (std::size_t r = 0; r < dim; ++r)
          dist2 += std::norm(phase * state(r, col) - t.unitary(r, inputs[col]));
        probs[col] = 1.0 - dist2 / 4.0;
      }
    }
    return probs;
  }

  // truth-table kinds
  const bool partial = !t.output_wires.empty();
  for (std::size_t col = 0; col < inputs.size(); ++col) {
    const auto& desired = t.rows[col].second;
    double p = 0.0;
    for (std::size_t w = 0; w < dim; ++w) {
      const double a2 = std::norm(state(w, col));
      if (a2 == 0.0) continue;
      bool match = true;
      if (partial) {
        for (std::size_t k = 0; k < t.output_wires.size() && match; ++k) {
          const int wire = t.output_wires[k];
          const int digit = static_cast<int>(
              (w / static_cast<std::size_t>(ipow(c.radix, c.n_wires - 1 - wire))) %
              c.radix);
          match = digit == desired[k];
        }
      } else {
        match = w == word_index(desired, c.radix);
      }
      if (match) p += a2;
    }
    probs[col] = p;
  }
  return probs;
}

/// Sum over evaluated inputs of the squared probability deficit.
inline double boolean_error(const Circuit& c, const TargetSpec& t,
                            const GateSet& set) {
  double err = 0.0;
  for (double p : input_probabilities(c, t, set)) {
    const double deficit = 1.0 - p;
    err += deficit * deficit;
  }
  return err;
}

/// Percentage of inputs whose desired outcome carries probability
/// >= 1 - tol.abs_eps.
inline double correctness(const Circuit& c, const TargetSpec& t,
                          const GateSet& set, Tolerance tol = {1e-6}) {
  const auto probs = input_probabilities(c, t, set);
  if (probs.empty()) return 100.0;
  std::size_t good = 0;
  for (double p : probs)
    if (p >= 1.0 - tol.abs_eps) ++good;
  return 100.0 * static_cast<double>(good) / static_cast<double>(probs.size());
}

inline double fitness(double error, int cost, const FitnessParams& p) {
  if (error < 0.0) throw std::invalid_argument("fitness: negative error");
  if (p.mode == FitnessParams::Mode::f0) return 1.0 / (1.0 + error);
  if (cost < 1)
    throw std::invalid_argument("fitness: f1 requires cost >= 1");
  return p.alpha / (1.0 + error) + p.beta / static_cast<double>(cost);
}

inline Evaluation evaluate_circuit(const Circuit& c, const TargetSpec& t,
                                   const GateSet& set, const FitnessParams& p,
                                   Tolerance corr_tol = {1e-6}) {
  Evaluation e;
  e.error = boolean_error(c, t, set);
  e.correctness = correctness(c, t, set, corr_tol);
  e.raw_cost = circuit_cost(c, set);
  e.merged_cost = e.raw_cost;
  e.cost = std::max(1, e.raw_cost);
  e.fitness = fitness(e.error, e.cost, p);
  return e;
}

// --- target file format ----------------------------------------------------
// Either a truth table, one line per input: "input_word output_word" in the
// radix alphabet ('-' marks unconstrained output wires), or the keyword
// "unitary" (optionally "unitary phase") followed by a matrix fixture.

inline TargetSpec load_target(std::istream& is, int radix) {
  TargetSpec t;
  t.radix = radix;
  std::string line;
  std::vector<std::pair<std::string, std::string>> raw;
  bool unitary = false, phase = false;
  while (std::getline(is, line)) {
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream ls(line);
    std::string a, b;
    ls >> a;
    if (a == "unitary") {
      ls >> b;
      unitary = true;
      phase = b == "phase";
      break;
    }
    if (!(ls >> b))
      throw std::runtime_error("load_target: malformed row '" + line + "'");
    raw.emplace_back(a, b);
  }

  if (unitary) {
    t.kind = TargetSpec::Kind::Unitary;
    t.phase_sensitive = phase;
    t.unitary = read_matrix(is);
    std::size_t dim = t.unitary.rows();
    int n = 0;
    while (dim > 1) {
      if (dim % radix != 0)
        throw std::runtime_error("load_target: unitary dimension is not a radix power");
      dim /= radix;
      ++n;
    }
    t.n_wires = n;
    if (!is_unitary(t.unitary))
      throw std::runtime_error("load_target: target matrix is not unitary");
    return t;
  }

  if (raw.empty()) throw std::runtime_error("load_target: empty target file");
  t.n_wires = static_cast<int>(raw.front().first.size());
  std::vector<int> out_wires;
  for (std::size_t i = 0; i < raw.front().second.size(); ++i)
    if (raw.front().second[i] != '-') out_wires.push_back(static_cast<int>(i));
  const bool partial =
      out_wires.size() != static_cast<std::size_t>(t.n_wires) ||
      raw.size() != (std::size_t{1} << t.n_wires);
  t.kind = partial ? TargetSpec::Kind::PartialTruthTable
                   : TargetSpec::Kind::TruthTable;
  if (partial) t.output_wires = out_wires;

  for (const auto& [in, out] : raw) {
    if (static_cast<int>(in.size()) != t.n_wires ||
        out.size() != raw.front().second.size())
      throw std::runtime_error("load_target: inconsistent word lengths");
    std::vector<int> id(t.n_wires), od;
    for (int i = 0; i < t.n_wires; ++i) {
      id[i] = in[i] - '0';
      if (id[i] < 0 || id[i] >= radix)
        throw std::runtime_error("load_target: digit outside radix alphabet");
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (out[i] == '-') {
        if (!partial || std::find(out_wires.begin(), out_wires.end(),
                                  static_cast<int>(i)) != out_wires.end())
          throw std::runtime_error("load_target: inconsistent don't-care column");
        continue;
      }
      od.push_back(out[i] - '0');
    }
    t.rows.emplace_back(std::move(id), std::move(od));
  }

  // reversibility check for fully specified tables
  if (t.kind == TargetSpec::Kind::TruthTable) {
    std::set<std::size_t> images;
    for (const auto& row : t.rows)
      if (!images.insert(word_index(row.second, radix)).second)
        throw std::runtime_error("load_target: truth table is not injective");
  }
  return t;
}

inline TargetSpec load_target_file(const std::string& path, int radix) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("load_target_file: cannot open " + path);
  return load_target(f, radix);
}

}  // namespace eqls
