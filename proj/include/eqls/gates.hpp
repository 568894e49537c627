#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace eqls {

/// Wires a gate may legally occupy; nullopt means anywhere.
struct WireRestriction {
  std::optional<std::set<int>> allowed;

  bool allows(const std::vector<int>& wires) const {
    if (!allowed) return true;
    for (int w : wires)
      if (!allowed->count(w)) return false;
    return true;
  }
};

struct CostModel {
  int two_wire_cost = 1;
  int single_wire_cost = 0;
};

struct GateDef {
  std::string id;    // short token-safe identifier, e.g. "CZ3"
  std::string name;  // human label, e.g. "CZ^3"
  int radix = 3;     // 2 or 3 per wire
  int arity = 1;     // wires spanned
  ComplexMatrix matrix;
  WireRestriction restriction;
  bool merged = false;  // true for minimizer-produced gates
};

/// Single-wire gates are free; everything wider counts as one unit.
inline int gate_cost(const GateDef& g, const CostModel& model = {}) {
  return g.arity <= 1 ? model.single_wire_cost : model.two_wire_cost;
}

inline int ipow(int base, int exp) {
  int out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

/// Applies `gate` (a radix^k square matrix on the ordered wires `placement`,
/// placement[0] most significant) to every column of `state`, in place.
/// `state` has radix^n_wires rows; wire 0 is the most significant digit.
inline void apply_gate(ComplexMatrix& state, const ComplexMatrix& gate,
                       const std::vector<int>& placement, int n_wires,
                       int radix) {
  const int k = static_cast<int>(placement.size());
  const int dim_sub = ipow(radix, k);
  const std::size_t dim = static_cast<std::size_t>(ipow(radix, n_wires));
  if (state.rows() != dim)
    throw std::invalid_argument("apply_gate: state row count mismatch");
  if (gate.rows() != static_cast<std::size_t>(dim_sub) || !gate.square())
    throw std::invalid_argument("apply_gate: gate dimension mismatch");

  std::vector<char> used(n_wires, 0);
  for (int w : placement) {
    if (w < 0 || w >= n_wires)
      throw std::invalid_argument("apply_gate: wire index out of range");
    if (used[w]) throw std::invalid_argument("apply_gate: duplicate wire");
    used[w] = 1;
  }

  auto stride = [&](int wire) { return ipow(radix, n_wires - 1 - wire); };

  // offset of each gate-local basis state within the full index
  std::vector<std::size_t> off(dim_sub, 0);
  for (int s = 0; s < dim_sub; ++s) {
    int rem = s;
    for (int j = k - 1; j >= 0; --j) {
      off[s] += static_cast<std::size_t>(rem % radix) * stride(placement[j]);
      rem /= radix;
    }
  }

  std::vector<int> free_wires;
  for (int w = 0; w < n_wires; ++w)
    if (!used[w]) free_wires.push_back(w);
  const int n_free = ipow(radix, static_cast<int>(free_wires.size()));

  std::vector<cplx> in(dim_sub), out(dim_sub);
  for (int t = 0; t < n_free; ++t) {
    std::size_t base = 0;
    int rem = t;
    for (int j = static_cast<int>(free_wires.size()) - 1; j >= 0; --j) {
      base += static_cast<std::size_t>(rem % radix) * stride(free_wires[j]);
      rem /= radix;
    }
    for (std::size_t col = 0; col < state.cols(); ++col) {
      for (int s = 0; s < dim_sub; ++s) in[s] = state(base + off[s], col);
      for (int r = 0; r < dim_sub; ++r) {
        cplx acc{};
        for (int s = 0; s < dim_sub; ++s) acc += gate(r, s) * in[s];
        out[r] = acc;
      }
      for (int s = 0; s < dim_sub; ++s) state(base + off[s], col) = out[s];
    }
  }
}

/// Lifts `g` onto an n-wire circuit, acting on the ordered `placement`
/// (first entry is the control for controlled gates) and as identity on the
/// remaining wires.
inline ComplexMatrix expand_to_circuit_width(const GateDef& g,
                                             const std::vector<int>& placement,
                                             int n_wires) {
  if (static_cast<int>(placement.size()) != g.arity)
    throw std::invalid_argument("expand_to_circuit_width: placement size != arity");
  ComplexMatrix m =
      ComplexMatrix::identity(static_cast<std::size_t>(ipow(g.radix, n_wires)));
  apply_gate(m, g.matrix, placement, n_wires, g.radix);
  return m;
}

// --- catalog construction helpers -----------------------------------------

/// Permutation gate on `dim` basis states: image[i] is where basis i goes.
inline ComplexMatrix permutation_matrix(const std::vector<std::size_t>& image) {
  ComplexMatrix m(image.size(), image.size());
  for (std::size_t i = 0; i < image.size(); ++i) m(image[i], i) = 1.0;
  return m;
}

/// Boolean-controlled gate in ternary space: applies `op` (3^k square) to the
/// targets when the control carries |active>, identity otherwise.
inline ComplexMatrix ternary_controlled(const ComplexMatrix& op, int active) {
  const std::size_t d = op.rows();
  ComplexMatrix m(3 * d, 3 * d);
  for (int c = 0; c < 3; ++c) {
    if (c == active) {
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(c * d + i, c * d + j) = op(i, j);
    } else {
      for (std::size_t i = 0; i < d; ++i) m(c * d + i, c * d + i) = 1.0;
    }
  }
  return m;
}

/// Lifts a radix-2 gate to radix 3: agrees with the original on all-Boolean
/// basis words, identity on any word containing |2>.
inline GateDef embed_boolean(const GateDef& g) {
  if (g.radix != 2)
    throw std::invalid_argument("embed_boolean: input must be radix 2");
  if (!is_unitary(g.matrix))
    throw std::invalid_argument("embed_boolean: input matrix not unitary");
  const int n = g.arity;
  const std::size_t dim3 = static_cast<std::size_t>(ipow(3, n));
  ComplexMatrix m(dim3, dim3);

  for (std::size_t col = 0; col < dim3; ++col) {
    // decompose col into ternary digits, wire 0 most significant
    std::vector<int> digits(n);
    {
      std::size_t rem = col;
      for (int i = n - 1; i >= 0; --i) {
        digits[i] = static_cast<int>(rem % 3);
        rem /= 3;
      }
    }
    const bool boolean_word =
        std::none_of(digits.begin(), digits.end(), [](int d) { return d == 2; });
    if (!boolean_word) {
      m(col, col) = 1.0;
      continue;
    }
    std::size_t col2 = 0;
    for (int i = 0; i < n; ++i) col2 = col2 * 2 + digits[i];
    for (std::size_t row2 = 0; row2 < g.matrix.rows(); ++row2) {
      const cplx amp = g.matrix(row2, col2);
      if (amp == cplx{}) continue;
      std::size_t row3 = 0;
      for (int i = 0; i < n; ++i) {
        const int bit = static_cast<int>((row2 >> (n - 1 - i)) & 1u);
        row3 = row3 * 3 + bit;
      }
      m(row3, col) = amp;
    }
  }

  GateDef out;
  out.id = g.id + "3";
  out.name = g.name + "^3";
  out.radix = 3;
  out.arity = n;
  out.matrix = std::move(m);
  return out;
}

/// Every primitive and reference gate used anywhere in the system.
inline std::vector<GateDef> builtin_catalog() {
  std::vector<GateDef> cat;
  const double s = 1.0 / std::sqrt(2.0);

  auto add = [&](std::string id, std::string name, int radix, int arity,
                 ComplexMatrix m) -> GateDef& {
    cat.push_back(GateDef{std::move(id), std::move(name), radix, arity,
                          std::move(m), WireRestriction{}, false});
    return cat.back();
  };

  // radix-2 gates
  add("I2", "Wire_2", 2, 1, ComplexMatrix::identity(2));
  add("X", "X", 2, 1, permutation_matrix({1, 0}));
  add("Z", "Z", 2, 1, ComplexMatrix(2, 2, {1, 0, 0, -1}));
  add("H", "H", 2, 1, ComplexMatrix(2, 2, {s, s, s, -s}));
  add("CNOT", "CNOT", 2, 2, permutation_matrix({0, 1, 3, 2}));
  add("CZ", "CZ", 2, 2, ComplexMatrix(4, 4, {1, 0, 0, 0,  //
                                             0, 1, 0, 0,  //
                                             0, 0, 1, 0,  //
                                             0, 0, 0, -1}));
  {
    ComplexMatrix ch = ComplexMatrix::identity(4);
    ch(2, 2) = s; ch(2, 3) = s; ch(3, 2) = s; ch(3, 3) = -s;
    add("CH", "CH", 2, 2, std::move(ch));
  }
  add("SWAP", "SWAP", 2, 2, permutation_matrix({0, 2, 1, 3}));
  add("CCX", "Toffoli", 2, 3,
      permutation_matrix({0, 1, 2, 3, 4, 5, 7, 6}));
  {
    ComplexMatrix ccz = ComplexMatrix::identity(8);
    ccz(7, 7) = -1.0;
    add("CCZ", "Toffoli-Sign", 2, 3, std::move(ccz));
  }
  add("CSWAP", "Fredkin", 2, 3,
      permutation_matrix({0, 1, 2, 3, 4, 6, 5, 7}));
  add("MILLER", "Miller", 2, 3,
      permutation_matrix({0, 6, 2, 3, 4, 5, 1, 7}));

  // ternary gates
  add("WIRE", "Wire", 3, 1, ComplexMatrix::identity(3));
  add("X02", "[0-2]", 3, 1, permutation_matrix({2, 1, 0}));
  add("X12", "[1-2]", 3, 1, permutation_matrix({0, 2, 1}));
  add("X01", "[0-1]", 3, 1, permutation_matrix({1, 0, 2}));

  auto gate_by_id = [&](const std::string& id) -> const GateDef& {
    for (const auto& g : cat)
      if (g.id == id) return g;
    throw std::logic_error("builtin_catalog: missing " + id);
  };

  {
    GateDef h3 = embed_boolean(gate_by_id("H"));
    h3.name = "H^3";
    cat.push_back(std::move(h3));
  }
  {
    GateDef cz3 = embed_boolean(gate_by_id("CZ"));
    cz3.name = "CZ^3";
    cat.push_back(std::move(cz3));
  }
  {
    GateDef cnot3 = embed_boolean(gate_by_id("CNOT"));
    cnot3.name = "CNOT^3";
    cat.push_back(std::move(cnot3));
  }
  {
    GateDef ch3 = embed_boolean(gate_by_id("CH"));
    ch3.name = "CH^3";
    cat.push_back(std::move(ch3));
  }
  add("CX02", "Controlled-[0-2]", 3, 2,
      ternary_controlled(permutation_matrix({2, 1, 0}), 1));
  add("CX01", "Controlled-[0-1]", 3, 2,
      ternary_controlled(permutation_matrix({1, 0, 2}), 1));
  // the (|0><0|+|2><2|) (x) I + |1><1| (x) X form: numerically identical to
  // CNOT3 but kept as its own catalog entry
  add("C1X3", "Controlled-X (|1> subspace)", 3, 2,
      ternary_controlled(permutation_matrix({1, 0, 2}), 1));
  {
    GateDef sw3 = embed_boolean(gate_by_id("SWAP"));
    sw3.name = "SWAP^3";
    cat.push_back(std::move(sw3));
  }
  {
    // full two-qutrit exchange |ab> -> |ba>
    std::vector<std::size_t> image(9);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) image[a * 3 + b] = b * 3 + a;
    add("S3", "S_3", 3, 2, permutation_matrix(image));
    add("CS12", "CS_12", 3, 3,
        ternary_controlled(permutation_matrix(image), 2));
  }

  for (const auto& g : cat) {
    if (!is_unitary(g.matrix))
      throw std::logic_error("builtin_catalog: " + g.id + " is not unitary");
    if (g.matrix.rows() != static_cast<std::size_t>(ipow(g.radix, g.arity)))
      throw std::logic_error("builtin_catalog: " + g.id + " has wrong size");
  }
  return cat;
}

/// Gate ids of the evolutionary primitive set (ternary synthesis).
inline std::vector<std::string> primitive_gate_ids() {
  return {"CNOT3", "CZ3", "X02", "X12", "CH3", "CX02", "CX01", "H3", "WIRE"};
}

/// One line per gate: id name radix arity cost restriction.
inline std::string catalog_listing(const std::vector<GateDef>& cat,
                                   const CostModel& model = {}) {
  std::ostringstream os;
  os << "id\tname\tradix\tarity\tcost\trestriction\n";
  for (const auto& g : cat) {
    os << g.id << '\t' << g.name << '\t' << g.radix << '\t' << g.arity << '\t'
       << gate_cost(g, model) << '\t';
    if (!g.restriction.allowed) {
      os << "any";
    } else {
      bool first = true;
      for (int w : *g.restriction.allowed) {
        if (!first) os << ',';
        os << w;
        first = false;
      }
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace eqls
