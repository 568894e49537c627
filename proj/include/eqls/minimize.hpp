#pragma once

#include <limits>
#include <string>
#include <vector>

#include "evaluate.hpp"

namespace eqls {

enum class MinimizeMode { Off, Baldwinian, Lamarckian };
enum class GenotypeAction { None, Keep, Replace };

struct MergeEvent {
  std::string produced_id;
  std::string produced_token;  // empty when no lexicon was involved
  std::vector<std::string> source_ids;
  std::vector<int> wires;
  bool removed_as_identity = false;
};

struct MinimizeResult {
  Circuit phenotype;
  GenotypeAction action = GenotypeAction::None;
  std::vector<MergeEvent> events;
  std::size_t suppressed = 0;  // merges skipped because no gate could be added
};

namespace detail {

inline bool is_wire(const GateSet& set, int gidx, int radix) {
  return set[gidx].id == (radix == 3 ? "WIRE" : "I2");
}

inline std::vector<Placement> to_serial(const Circuit& c, const GateSet& set) {
  std::vector<Placement> out;
  for (const Block& b : c.blocks)
    for (const Placement& p : b.placements)
      if (!is_wire(set, p.gate, c.radix)) out.push_back(p);
  return out;
}

/// ASAP re-packing: each gate lands in the earliest block after the last
/// block touching any of its wires. Dependency order is preserved, so the
/// circuit matrix is unchanged.
inline Circuit repack(const std::vector<Placement>& serial, int n_wires,
                      int radix, const GateSet& set) {
  Circuit c;
  c.n_wires = n_wires;
  c.radix = radix;
  std::vector<int> last(n_wires, -1);
  for (const Placement& p : serial) {
    int b = 0;
    for (int w : p.wires) b = std::max(b, last[w] + 1);
    while (static_cast<int>(c.blocks.size()) <= b) c.blocks.emplace_back();
    c.blocks[b].placements.push_back(p);
    for (int w : p.wires) last[w] = b;
  }
  const int wire_gate = wire_gate_index(set, radix);
  if (c.blocks.empty()) c.blocks.emplace_back();
  for (Block& b : c.blocks) {
    std::vector<char> covered(n_wires, 0);
    for (const Placement& p : b.placements)
      for (int w : p.wires) covered[w] = 1;
    for (int w = 0; w < n_wires; ++w)
      if (!covered[w]) b.placements.push_back(Placement{wire_gate, {w}});
  }
  return c;
}

inline bool wires_intersect(const std::vector<int>& a,
                            const std::vector<int>& b) {
  for (int x : a)
    for (int y : b)
      if (x == y) return true;
  return false;
}

inline bool same_wire_set(const std::vector<int>& a,
                          const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  std::vector<int> sa = a, sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  return sa == sb;
}

/// Index of the next gate after i acting on exactly the same wire set with
/// nothing in between touching those wires; -1 if none.
inline int adjacent_partner(const std::vector<Placement>& serial,
                            std::size_t i) {
  for (std::size_t j = i + 1; j < serial.size(); ++j) {
    if (same_wire_set(serial[i].wires, serial[j].wires))
      return static_cast<int>(j);
    if (wires_intersect(serial[i].wires, serial[j].wires)) return -1;
  }
  return -1;
}

inline bool is_self_inverse(const GateSet& set, int gidx, Tolerance tol = {}) {
  const ComplexMatrix& m = set[gidx].matrix;
  return approx_equal(matmul(m, m), ComplexMatrix::identity(m.rows()), tol);
}

/// Product of two placements restricted to their (shared) wire set, indexed
/// over the sorted wires.
inline ComplexMatrix local_product(const GateSet& set, const Placement& first,
                                   const Placement& second, int radix) {
  std::vector<int> wires = first.wires;
  std::sort(wires.begin(), wires.end());
  auto local = [&](const Placement& p) {
    std::vector<int> lp;
    for (int w : p.wires)
      lp.push_back(static_cast<int>(
          std::find(wires.begin(), wires.end(), w) - wires.begin()));
    return expand_to_circuit_width(set[p.gate], lp,
                                   static_cast<int>(wires.size()));
  };
  (void)radix;
  return matmul(local(second), local(first));  // first applied first
}

}  // namespace detail

/// Removes adjacent identical self-inverse gates (same gate, same ordered
/// placement) until no pair remains. Never creates gates.
inline Circuit cancel_adjacent_inverses(const Circuit& c, const GateSet& set) {
  auto serial = detail::to_serial(c, set);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < serial.size(); ++i) {
      const int j = detail::adjacent_partner(serial, i);
      if (j < 0) continue;
      if (serial[i] == serial[static_cast<std::size_t>(j)] &&
          detail::is_self_inverse(set, serial[i].gate)) {
        serial.erase(serial.begin() + j);
        serial.erase(serial.begin() + static_cast<int>(i));
        changed = true;
        break;
      }
    }
  }
  return detail::repack(serial, c.n_wires, c.radix, set);
}

/// Multiplies adjacent gates on identical wire sets into single merged
/// gates. Products within tolerance of the identity are dropped instead.
/// New gates are registered in `set` (deduplicated by matrix) and, when a
/// lexicon is given, receive genome tokens. `new_gate_budget` caps how many
/// genuinely new gates may be created; merges beyond it are suppressed.
inline Circuit merge_adjacent(
    const Circuit& c, GateSet& set, GateLexicon* lexicon,
    std::vector<MergeEvent>& events, std::size_t& suppressed,
    std::size_t new_gate_budget = std::numeric_limits<std::size_t>::max()) {
  auto serial = detail::to_serial(c, set);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < serial.size(); ++i) {
      const int j = detail::adjacent_partner(serial, i);
      if (j < 0) continue;
      const Placement& a = serial[i];
      const Placement& b = serial[static_cast<std::size_t>(j)];
      ComplexMatrix prod = detail::local_product(set, a, b, c.radix);

      std::vector<int> wires = a.wires;
      std::sort(wires.begin(), wires.end());

      MergeEvent ev;
      ev.source_ids = {set[a.gate].id, set[b.gate].id};
      ev.wires = wires;

      if (approx_equal(prod, ComplexMatrix::identity(prod.rows()))) {
        ev.removed_as_identity = true;
        events.push_back(std::move(ev));
        serial.erase(serial.begin() + j);
        serial.erase(serial.begin() + static_cast<int>(i));
        changed = true;
        break;
      }

      const int arity = static_cast<int>(wires.size());
      int gidx;
      if (auto existing = set.find_equivalent(c.radix, arity, prod)) {
        gidx = *existing;
      } else {
        if (new_gate_budget == 0) {
          ++suppressed;
          continue;
        }
        --new_gate_budget;
        GateDef g;
        g.id = "MRG" + std::to_string(set.size());
        g.name = "merged(" + set[a.gate].id + "*" + set[b.gate].id + ")";
        g.radix = c.radix;
        g.arity = arity;
        g.matrix = std::move(prod);
        g.merged = true;
        gidx = set.add(std::move(g));
      }
      if (lexicon) {
        lexicon->register_gate(gidx);
        ev.produced_token = lexicon->token(Placement{gidx, wires});
      }
      ev.produced_id = set[gidx].id;
      events.push_back(std::move(ev));
      serial[i] = Placement{gidx, wires};
      serial.erase(serial.begin() + j);
      changed = true;
      break;
    }
  }
  return detail::repack(serial, c.n_wires, c.radix, set);
}

/// Fixpoint of cancellation and merging. The phenotype's matrix equals the
/// input's; the genotype action follows the learning mode.
inline MinimizeResult minimize(
    const Circuit& c, GateSet& set, GateLexicon* lexicon, MinimizeMode mode,
    std::size_t new_gate_budget = std::numeric_limits<std::size_t>::max()) {
  MinimizeResult r;
  if (mode == MinimizeMode::Off) {
    r.phenotype = c;
    r.action = GenotypeAction::None;
    return r;
  }
  Circuit cur = cancel_adjacent_inverses(c, set);
  cur = merge_adjacent(cur, set, lexicon, r.events, r.suppressed,
                       new_gate_budget);
  r.phenotype = std::move(cur);
  r.action = mode == MinimizeMode::Lamarckian ? GenotypeAction::Replace
                                              : GenotypeAction::Keep;
  return r;
}

inline std::string merge_event_line(const MergeEvent& ev) {
  std::string line = ev.removed_as_identity
                         ? "identity"
                         : (ev.produced_token.empty() ? ev.produced_id
                                                      : ev.produced_token);
  line += " <-";
  for (const auto& s : ev.source_ids) line += " " + s;
  line += " @";
  for (int w : ev.wires) line += " " + std::to_string(w);
  return line;
}

}  // namespace eqls
