#pragma once

#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gates.hpp"

namespace eqls {

using RestrictionMap = std::map<std::string, std::set<int>>;

struct Placement {
  int gate = -1;           // index into the GateSet
  std::vector<int> wires;  // ordered, control first

  bool operator==(const Placement& o) const {
    return gate == o.gate && wires == o.wires;
  }
};

struct Block {
  std::vector<Placement> placements;
  bool operator==(const Block& o) const { return placements == o.placements; }
};

struct Circuit {
  int n_wires = 0;
  int radix = 3;
  std::vector<Block> blocks;
  bool operator==(const Circuit& o) const {
    return n_wires == o.n_wires && radix == o.radix && blocks == o.blocks;
  }
};

struct Genome {
  std::string text;
  int n_wires = 0;
  int radix = 3;
  bool operator==(const Genome& o) const {
    return text == o.text && n_wires == o.n_wires && radix == o.radix;
  }
};

/// Append-only gate pool: the built-in catalog plus any merged gates created
/// during a run. A set may chain to a base pool, which lets a scratch overlay
/// hold ephemeral merged gates without touching the shared pool.
class GateSet {
 public:
  GateSet() = default;
  explicit GateSet(std::vector<GateDef> gates) {
    for (auto& g : gates) add(std::move(g));
  }
  explicit GateSet(const GateSet* base) : base_(base) {}

  std::size_t size() const { return base_size() + gates_.size(); }

  const GateDef& operator[](std::size_t i) const {
    if (i < base_size()) return (*base_)[i];
    return gates_.at(i - base_size());
  }

  int add(GateDef g) {
    const int idx = static_cast<int>(size());
    by_id_.emplace(g.id, idx);
    by_matrix_.emplace(matrix_key(g.radix, g.arity, g.matrix), idx);
    gates_.push_back(std::move(g));
    return idx;
  }

  std::optional<int> index_of(const std::string& id) const {
    auto it = by_id_.find(id);
    if (it != by_id_.end()) return it->second;
    if (base_) return base_->index_of(id);
    return std::nullopt;
  }

  const GateDef& by_id(const std::string& id) const {
    auto idx = index_of(id);
    if (!idx) throw std::invalid_argument("GateSet: unknown gate id " + id);
    return (*this)[*idx];
  }

  /// Index of an existing gate with the same radix/arity and (rounded) matrix.
  std::optional<int> find_equivalent(int radix, int arity,
                                     const ComplexMatrix& m) const {
    auto it = by_matrix_.find(matrix_key(radix, arity, m));
    if (it != by_matrix_.end()) return it->second;
    if (base_) return base_->find_equivalent(radix, arity, m);
    return std::nullopt;
  }

 private:
  std::size_t base_size() const { return base_ ? base_->size() : 0; }

  static std::string matrix_key(int radix, int arity, const ComplexMatrix& m) {
    std::string key = std::to_string(radix) + ":" + std::to_string(arity);
    key.reserve(key.size() + m.entries().size() * 8);
    for (const cplx& z : m.entries()) {
      const auto re = static_cast<long long>(std::llround(z.real() * 1e9));
      const auto im = static_cast<long long>(std::llround(z.imag() * 1e9));
      key += ',';
      key += std::to_string(re);
      key += ';';
      key += std::to_string(im);
    }
    return key;
  }

  const GateSet* base_ = nullptr;
  std::vector<GateDef> gates_;
  std::map<std::string, int> by_id_;
  std::map<std::string, int> by_matrix_;
};

/// Effective wire restriction: the gate's own restriction narrowed by a
/// per-run override keyed on gate id.
inline bool placement_allowed(const GateSet& set, const Placement& p,
                              const RestrictionMap* overrides) {
  const GateDef& g = set[p.gate];
  if (!g.restriction.allows(p.wires)) return false;
  if (overrides) {
    auto it = overrides->find(g.id);
    if (it != overrides->end()) {
      for (int w : p.wires)
        if (!it->second.count(w)) return false;
    }
  }
  return true;
}

/// Bijection between 3-character tokens and (gate, ordered placement) pairs.
/// Tokens are assigned by enumeration order; merged gates are appended later
/// under a lock so concurrent minimizers cannot lose tokens.
class GateLexicon {
 public:
  static constexpr int kTokenLen = 3;

  GateLexicon(const GateSet* set, int n_wires, int radix)
      : set_(set), n_wires_(n_wires), radix_(radix) {
    // deterministic alphabet: printable ASCII minus the delimiter 'p'
    for (char c = '!'; c <= '~'; ++c)
      if (c != 'p') alphabet_.push_back(c);
    for (std::size_t i = 0; i < set_->size(); ++i) {
      const GateDef& g = (*set_)[i];
      if (g.radix != radix_ || g.arity > n_wires_) continue;
      register_gate(static_cast<int>(i));
    }
  }

  int n_wires() const { return n_wires_; }
  int radix() const { return radix_; }
  const GateSet& gate_set() const { return *set_; }

  /// Registers tokens for every ordered placement of gate `gidx`.
  void register_gate(int gidx) {
    std::lock_guard<std::mutex> lock(mu_);
    const GateDef& g = (*set_)[gidx];
    std::vector<int> wires(g.arity);
    enumerate_placements(g.arity, wires, 0, [&](const std::vector<int>& p) {
      key_type key{gidx, p};
      if (token_of_.count(key)) return;
      const std::string tok = make_token(next_++);
      token_of_.emplace(key, tok);
      pair_of_.emplace(tok, key);
    });
    registered_.insert(gidx);
  }

  bool is_registered(int gidx) const {
    std::lock_guard<std::mutex> lock(mu_);
    return registered_.count(gidx) > 0;
  }

  std::string token(const Placement& p) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = token_of_.find({p.gate, p.wires});
    if (it == token_of_.end())
      throw std::invalid_argument("GateLexicon: unregistered gate/placement (gate " +
                                  std::to_string(p.gate) + ")");
    return it->second;
  }

  std::optional<Placement> lookup(const std::string& tok) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = pair_of_.find(tok);
    if (it == pair_of_.end()) return std::nullopt;
    return Placement{it->second.first, it->second.second};
  }

  std::size_t token_count() const {
    std::lock_guard<std::mutex> lock(mu_);
    return pair_of_.size();
  }

 private:
  using key_type = std::pair<int, std::vector<int>>;

  template <typename Fn>
  void enumerate_placements(int arity, std::vector<int>& wires, int depth,
                            const Fn& fn) {
    if (depth == arity) {
      fn(wires);
      return;
    }
    for (int w = 0; w < n_wires_; ++w) {
      bool dup = false;
      for (int j = 0; j < depth; ++j) dup = dup || wires[j] == w;
      if (dup) continue;
      wires[depth] = w;
      enumerate_placements(arity, wires, depth + 1, fn);
    }
  }

  std::string make_token(std::size_t index) const {
    std::string tok(kTokenLen, alphabet_[0]);
    for (int i = kTokenLen - 1; i >= 0; --i) {
      tok[i] = alphabet_[index % alphabet_.size()];
      index /= alphabet_.size();
    }
    if (index != 0)
      throw std::length_error("GateLexicon: token space exhausted");
    return tok;
  }

  const GateSet* set_;
  int n_wires_;
  int radix_;
  std::string alphabet_;
  std::size_t next_ = 0;
  std::map<key_type, std::string> token_of_;
  std::map<std::string, key_type> pair_of_;
  std::set<int> registered_;
  mutable std::mutex mu_;
};

inline int wire_gate_index(const GateSet& set, int radix) {
  return *set.index_of(radix == 3 ? "WIRE" : "I2");
}

/// Parses a genome into a structured circuit. Uncovered wires in each block
/// are filled with explicit Wire placements; a genome with no gate tokens
/// decodes to a single all-Wire block.
inline Circuit decode(const Genome& g, const GateLexicon& lex) {
  if (g.n_wires != lex.n_wires() || g.radix != lex.radix())
    throw std::invalid_argument(
        "decode: genome width/radix does not match the lexicon");
  const std::string& t = g.text;
  if (t.size() < 2 || t.front() != 'p' || t.back() != 'p')
    throw std::invalid_argument("decode: genome must begin and end with 'p'");

  const GateSet& set = lex.gate_set();
  const int wire_gate = wire_gate_index(set, g.radix);

  Circuit c;
  c.n_wires = g.n_wires;
  c.radix = g.radix;

  std::size_t i = 0;
  while (i < t.size()) {
    if (t[i] == 'p') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < t.size() && t[j] != 'p') ++j;
    if (j == t.size())
      throw std::invalid_argument("decode: unterminated block");
    const std::size_t len = j - i;
    if (len % GateLexicon::kTokenLen != 0)
      throw std::invalid_argument(
          "decode: block length not a multiple of 3 at offset " +
          std::to_string(i));
    Block block;
    std::vector<char> covered(g.n_wires, 0);
    for (std::size_t k = i; k < j; k += GateLexicon::kTokenLen) {
      const std::string tok = t.substr(k, GateLexicon::kTokenLen);
      auto p = lex.lookup(tok);
      if (!p)
        throw std::invalid_argument("decode: unknown token '" + tok +
                                    "' at offset " + std::to_string(k));
      for (int w : p->wires) {
        if (w >= g.n_wires)
          throw std::invalid_argument("decode: token '" + tok +
                                      "' places a gate past wire " +
                                      std::to_string(g.n_wires - 1));
        if (covered[w])
          throw std::invalid_argument("decode: wire " + std::to_string(w) +
                                      " covered twice in one block");
        covered[w] = 1;
      }
      block.placements.push_back(std::move(*p));
    }
    for (int w = 0; w < g.n_wires; ++w)
      if (!covered[w]) block.placements.push_back(Placement{wire_gate, {w}});
    c.blocks.push_back(std::move(block));
    i = j;
  }

  if (c.blocks.empty()) {
    Block idle;
    for (int w = 0; w < g.n_wires; ++w)
      idle.placements.push_back(Placement{wire_gate, {w}});
    c.blocks.push_back(std::move(idle));
  }
  return c;
}

/// Canonical encoding: each block's placements ordered by lowest wire index,
/// Wire fills written explicitly.
inline Genome encode(const Circuit& c, const GateLexicon& lex) {
  if (c.n_wires != lex.n_wires() || c.radix != lex.radix())
    throw std::invalid_argument(
        "encode: circuit width/radix does not match the lexicon");
  std::string text;
  for (const Block& b : c.blocks) {
    std::vector<Placement> sorted = b.placements;
    std::sort(sorted.begin(), sorted.end(),
              [](const Placement& x, const Placement& y) {
                return *std::min_element(x.wires.begin(), x.wires.end()) <
                       *std::min_element(y.wires.begin(), y.wires.end());
              });
    text += 'p';
    for (const Placement& p : sorted) text += lex.token(p);
    text += 'p';
  }
  if (text.empty()) text = "pp";
  return Genome{std::move(text), c.n_wires, c.radix};
}

inline bool validate_restrictions(const Circuit& c, const GateSet& set,
                                  const RestrictionMap* overrides = nullptr) {
  for (const Block& b : c.blocks)
    for (const Placement& p : b.placements)
      if (!placement_allowed(set, p, overrides)) return false;
  return true;
}

/// All restriction-admissible (gate, ordered placement) pairs drawn from
/// `gate_indices` that fit inside `available` wires.
inline std::vector<Placement> admissible_pairs(
    const GateSet& set, const std::vector<int>& gate_indices,
    const std::vector<int>& available, int radix,
    const RestrictionMap* overrides) {
  std::vector<Placement> out;
  for (int gidx : gate_indices) {
    const GateDef& g = set[gidx];
    if (g.radix != radix) continue;
    if (g.arity > static_cast<int>(available.size())) continue;
    std::vector<int> sel(g.arity);
    std::vector<char> used(available.size(), 0);
    // ordered selections of `arity` wires from `available`
    std::function<void(int)> rec = [&](int depth) {
      if (depth == g.arity) {
        Placement p{gidx, sel};
        if (placement_allowed(set, p, overrides)) out.push_back(std::move(p));
        return;
      }
      for (std::size_t i = 0; i < available.size(); ++i) {
        if (used[i]) continue;
        used[i] = 1;
        sel[depth] = available[i];
        rec(depth + 1);
        used[i] = 0;
      }
    };
    rec(0);
  }
  return out;
}

inline std::vector<int> resolve_gate_indices(
    const GateSet& set, const std::vector<std::string>& ids) {
  std::vector<int> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    auto idx = set.index_of(id);
    if (!idx) throw std::invalid_argument("unknown gate id: " + id);
    out.push_back(*idx);
  }
  return out;
}

/// Builds one random block covering all wires; gate choice is uniform over
/// the admissible (gate, placement) pairs at each step.
template <typename Rng>
Block random_block(const GateSet& set, const std::vector<int>& gate_indices,
                   int n_wires, int radix, const RestrictionMap* overrides,
                   Rng& rng) {
  Block block;
  std::vector<int> remaining(n_wires);
  for (int w = 0; w < n_wires; ++w) remaining[w] = w;
  while (!remaining.empty()) {
    auto cands =
        admissible_pairs(set, gate_indices, remaining, radix, overrides);
    if (cands.empty())
      throw std::runtime_error(
          "random_block: no admissible gate can fill the remaining wires");
    std::uniform_int_distribution<std::size_t> pick(0, cands.size() - 1);
    Placement p = cands[pick(rng)];
    for (int w : p.wires)
      remaining.erase(std::find(remaining.begin(), remaining.end(), w));
    block.placements.push_back(std::move(p));
  }
  return block;
}

template <typename Rng>
Genome random_genome(int n_wires, int radix,
                     std::pair<int, int> block_count_range,
                     const GateLexicon& lex,
                     const std::vector<std::string>& primitive_ids,
                     const RestrictionMap* overrides, Rng& rng) {
  if (block_count_range.first > block_count_range.second ||
      block_count_range.first < 1)
    throw std::invalid_argument("random_genome: empty block count range");
  const GateSet& set = lex.gate_set();
  const auto gate_indices = resolve_gate_indices(set, primitive_ids);
  std::uniform_int_distribution<int> nblocks(block_count_range.first,
                                             block_count_range.second);
  Circuit c;
  c.n_wires = n_wires;
  c.radix = radix;
  const int count = nblocks(rng);
  for (int i = 0; i < count; ++i)
    c.blocks.push_back(
        random_block(set, gate_indices, n_wires, radix, overrides, rng));
  return encode(c, lex);
}

// --- genome file format: one genome per line, "wires=<n> radix=<r> <text>"

inline std::string genome_to_line(const Genome& g) {
  return "wires=" + std::to_string(g.n_wires) +
         " radix=" + std::to_string(g.radix) + " " + g.text;
}

inline Genome genome_from_line(const std::string& line) {
  Genome g;
  if (std::sscanf(line.c_str(), "wires=%d radix=%d", &g.n_wires, &g.radix) != 2)
    throw std::invalid_argument("genome_from_line: bad header in '" + line +
                                "'");
  const auto pos = line.find(' ', line.find("radix="));
  if (pos == std::string::npos)
    throw std::invalid_argument("genome_from_line: missing genome text");
  g.text = line.substr(pos + 1);
  return g;
}

}  // namespace eqls
