#pragma once

#include <cstdint>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "minimize.hpp"
#include "parallel.hpp"

namespace eqls {

enum class GAMode { Classical, Baldwinian, Lamarckian };
enum class MutationKind { StructurePreserving, Free, BlockReplace };

inline std::string to_string(GAMode m) {
  switch (m) {
    case GAMode::Classical: return "classical";
    case GAMode::Baldwinian: return "baldwinian";
    case GAMode::Lamarckian: return "lamarckian";
  }
  return "?";
}

struct GAConfig {
  GAMode mode = GAMode::Classical;
  bool use_eigs = true;  // Lamarckian only: mutate from the ranked gate pool
  bool use_wgs = true;   // Lamarckian only: weighted gate-set mutation
  int population_size = 50;
  int max_generations = 10000;
  double mutation_rate = 0.05;  // per gate position
  MutationKind mutation_kind = MutationKind::Free;
  double crossover_rate = 0.8;
  FitnessParams fitness_params;
  std::vector<std::string> primitive_ids = primitive_gate_ids();
  RestrictionMap restrictions;
  int eigs_cap = 50;
  std::uint64_t rng_seed = 1;
  bool elitism = true;
  std::pair<int, int> block_count_range{2, 8};
  int workers = 1;
  std::vector<Genome> seed_circuits;  // pre-seed the initial population
};

struct Individual {
  Genome genome;
  Evaluation eval;
  int age = 0;
};

struct EigsEntry {
  int gate = -1;
  std::uint64_t usage = 0;
  double gfitness = 0.0;
};

/// The extended gate set: every gate that appeared in an evaluated circuit,
/// ranked by the running mean of its host circuits' fitness.
class Eigs {
 public:
  explicit Eigs(int cap = 50) : cap_(cap) {}

  /// Records one evaluated circuit: per gate occurrence, usage and the
  /// gfitness running mean are updated; new gates are inserted unless the
  /// cap is reached (refusals are counted). Entries are re-ranked after.
  void update(const GateSet& set, const std::vector<int>& circuit_gates,
              double circuit_fitness) {
    for (int g : circuit_gates) {
      auto it = std::find_if(entries_.begin(), entries_.end(),
                             [g](const EigsEntry& e) { return e.gate == g; });
      if (it == entries_.end()) {
        if (static_cast<int>(entries_.size()) >= cap_) {
          ++refusals_;
          continue;
        }
        entries_.push_back(EigsEntry{g, 1, circuit_fitness});
      } else {
        it->usage += 1;
        it->gfitness +=
            (circuit_fitness - it->gfitness) / static_cast<double>(it->usage);
      }
    }
    std::stable_sort(entries_.begin(), entries_.end(),
                     [&set](const EigsEntry& a, const EigsEntry& b) {
                       if (a.gfitness != b.gfitness)
                         return a.gfitness > b.gfitness;
                       if (a.usage != b.usage) return a.usage > b.usage;
                       return set[a.gate].id < set[b.gate].id;
                     });
  }

  const std::vector<EigsEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  int cap() const { return cap_; }
  std::size_t refusals() const { return refusals_; }
  double gfitness_total() const {
    double t = 0.0;
    for (const auto& e : entries_) t += e.gfitness;
    return t;
  }

 private:
  std::vector<EigsEntry> entries_;
  int cap_;
  std::size_t refusals_ = 0;
};

// --- selection --------------------------------------------------------------

/// Stochastic universal sampling with an explicit spin offset in
/// [0, total/n); exposed separately so the pointer walk can be tested.
inline std::vector<std::size_t> sus_select_at(
    const std::vector<double>& fitnesses, std::size_t n, double start) {
  if (fitnesses.empty())
    throw std::invalid_argument("sus_select: empty population");
  double total = 0.0;
  for (double f : fitnesses) {
    if (f <= 0.0)
      throw std::invalid_argument("sus_select: fitnesses must be positive");
    total += f;
  }
  const double step = total / static_cast<double>(n);
  std::vector<std::size_t> out;
  out.reserve(n);
  double cum = fitnesses[0];
  std::size_t idx = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double pointer = start + step * static_cast<double>(k);
    while (pointer >= cum && idx + 1 < fitnesses.size())
      cum += fitnesses[++idx];
    out.push_back(idx);
  }
  return out;
}

template <typename Rng>
std::vector<std::size_t> sus_select(const std::vector<double>& fitnesses,
                                    std::size_t n, Rng& rng) {
  double total = std::accumulate(fitnesses.begin(), fitnesses.end(), 0.0);
  std::uniform_real_distribution<double> d(
      0.0, total / static_cast<double>(n));
  return sus_select_at(fitnesses, n, d(rng));
}

// --- crossover --------------------------------------------------------------

/// Exchanges interior block spans between two genomes; cut points lie on
/// block boundaries, so both children are valid and the block total is
/// conserved.
template <typename Rng>
std::pair<Genome, Genome> two_point_crossover(const Genome& a, const Genome& b,
                                              const GateLexicon& lex,
                                              Rng& rng) {
  if (a.n_wires != b.n_wires || a.radix != b.radix)
    throw std::invalid_argument("two_point_crossover: incompatible parents");
  const Circuit ca = decode(a, lex);
  const Circuit cb = decode(b, lex);
  // one pair of cut indices, clamped to each parent's block count, so that
  // identical parents always reproduce themselves
  std::uniform_int_distribution<std::size_t> d(0, ca.blocks.size());
  std::size_t i1 = d(rng), j1 = d(rng);
  if (i1 > j1) std::swap(i1, j1);
  const std::size_t i2 = std::min(i1, cb.blocks.size());
  const std::size_t j2 = std::min(j1, cb.blocks.size());

  auto splice = [](const Circuit& head, std::size_t hi, std::size_t hj,
                   const Circuit& mid, std::size_t mi, std::size_t mj) {
    Circuit out;
    out.n_wires = head.n_wires;
    out.radix = head.radix;
    out.blocks.assign(head.blocks.begin(), head.blocks.begin() + hi);
    out.blocks.insert(out.blocks.end(), mid.blocks.begin() + mi,
                      mid.blocks.begin() + mj);
    out.blocks.insert(out.blocks.end(), head.blocks.begin() + hj,
                      head.blocks.end());
    return out;
  };
  return {encode(splice(ca, i1, j1, cb, i2, j2), lex),
          encode(splice(cb, i2, j2, ca, i1, j1), lex)};
}

// --- mutation ---------------------------------------------------------------

struct MutationContext {
  const GateLexicon* lexicon = nullptr;
  std::vector<int> pool;  // candidate gate indices
  const std::vector<double>* weights = nullptr;  // per pool entry; null=uniform
  MutationKind kind = MutationKind::Free;
  double rate = 0.05;
  const RestrictionMap* restrictions = nullptr;
  int max_blocks = 0;  // insertion cap; 0 disables block insertion
};

namespace detail {

/// Picks a replacement placement for position `pos` of `block` using the
/// pool (optionally weighted per gate). Returns false when nothing fits.
template <typename Rng>
bool replace_position(Block& block, std::size_t pos, const GateSet& set,
                      const MutationContext& ctx, int radix, bool keep_arity,
                      Rng& rng) {
  const Placement old = block.placements[pos];
  std::vector<int> available = old.wires;
  if (!keep_arity) {
    for (std::size_t k = 0; k < block.placements.size(); ++k) {
      if (k == pos) continue;
      const Placement& q = block.placements[k];
      if (is_wire(set, q.gate, radix)) available.push_back(q.wires[0]);
    }
  }
  auto cands = admissible_pairs(set, ctx.pool, available, radix,
                                ctx.restrictions);
  if (keep_arity) {
    cands.erase(std::remove_if(cands.begin(), cands.end(),
                               [&](const Placement& p) {
                                 return set[p.gate].arity != set[old.gate].arity;
                               }),
                cands.end());
  }
  if (cands.empty()) return false;

  std::size_t choice;
  if (ctx.weights) {
    std::vector<double> w(cands.size(), 0.0);
    for (std::size_t i = 0; i < cands.size(); ++i) {
      auto it = std::find(ctx.pool.begin(), ctx.pool.end(), cands[i].gate);
      w[i] = (*ctx.weights)[static_cast<std::size_t>(it - ctx.pool.begin())];
    }
    std::discrete_distribution<std::size_t> d(w.begin(), w.end());
    choice = d(rng);
  } else {
    std::uniform_int_distribution<std::size_t> d(0, cands.size() - 1);
    choice = d(rng);
  }
  const Placement repl = cands[choice];

  // rebuild the block: drop the old gate, place the new one, re-fill wires
  std::vector<Placement> kept;
  for (std::size_t k = 0; k < block.placements.size(); ++k) {
    if (k == pos) continue;
    const Placement& q = block.placements[k];
    if (!keep_arity && is_wire(set, q.gate, radix)) continue;
    bool overlaps = wires_intersect(q.wires, repl.wires);
    if (k != pos && overlaps && !is_wire(set, q.gate, radix))
      return false;  // only wire-filled slots may be consumed
    if (!overlaps) kept.push_back(q);
  }
  kept.push_back(repl);
  std::vector<char> covered(0, 0);
  int n_wires = 0;
  for (const Placement& q : block.placements)
    for (int w : q.wires) n_wires = std::max(n_wires, w + 1);
  covered.assign(n_wires, 0);
  for (const Placement& q : kept)
    for (int w : q.wires) covered[w] = 1;
  const int wire_gate = wire_gate_index(set, radix);
  for (int w = 0; w < n_wires; ++w)
    if (!covered[w]) kept.push_back(Placement{wire_gate, {w}});
  block.placements = std::move(kept);
  return true;
}

}  // namespace detail

/// Per-gate Bernoulli mutation honoring the mutation kind; block-replace
/// substitutes whole blocks with freshly generated ones. When `max_blocks`
/// is set (extended-set mutation), one extra Bernoulli trial may insert a
/// freshly built block at a random boundary, drawing the gate by weight when
/// weights are present.
template <typename Rng>
Genome mutate(const Genome& g, const MutationContext& ctx, Rng& rng) {
  const GateLexicon& lex = *ctx.lexicon;
  Circuit c = decode(g, lex);
  std::bernoulli_distribution hit(ctx.rate);

  if (ctx.kind == MutationKind::BlockReplace) {
    for (Block& b : c.blocks)
      if (hit(rng))
        b = random_block(lex.gate_set(), ctx.pool, c.n_wires, c.radix,
                         ctx.restrictions, rng);
  } else {
    const bool keep_arity = ctx.kind == MutationKind::StructurePreserving;
    for (Block& b : c.blocks) {
      // positions are sampled against the block as it was before mutation
      const std::size_t original = b.placements.size();
      for (std::size_t pos = 0; pos < original && pos < b.placements.size();
           ++pos) {
        if (!hit(rng)) continue;
        detail::replace_position(b, pos, lex.gate_set(), ctx, c.radix,
                                 keep_arity, rng);
      }
    }
    if (keep_arity) return encode(c, lex);  // keeps the gate-arity profile
  }

  // one insertion trial per missing block, so badly shortened genomes are
  // repaired faster than nearly full ones
  const int deficit =
      ctx.max_blocks > 0 ? ctx.max_blocks - static_cast<int>(c.blocks.size())
                         : 0;
  for (int trial = 0; trial < deficit; ++trial) {
    if (!hit(rng)) continue;
    const GateSet& set = lex.gate_set();
    Block fresh;
    bool built = false;
    if (ctx.weights) {
      // weighted insertion: draw one pool gate by gfitness, place it at a
      // random admissible position, fill the rest with wires; mirrors the
      // weighted replacement pick
      std::discrete_distribution<std::size_t> d(ctx.weights->begin(),
                                                ctx.weights->end());
      const int picked = ctx.pool[d(rng)];
      std::vector<int> wires(static_cast<std::size_t>(c.n_wires));
      std::iota(wires.begin(), wires.end(), 0);
      const auto cands = admissible_pairs(set, {picked}, wires, c.radix,
                                          ctx.restrictions);
      if (!cands.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, cands.size() - 1);
        const Placement p = cands[pick(rng)];
        std::vector<char> covered(static_cast<std::size_t>(c.n_wires), 0);
        for (int w : p.wires) covered[static_cast<std::size_t>(w)] = 1;
        fresh.placements.push_back(p);
        const int wire_gate = wire_gate_index(set, c.radix);
        for (int w = 0; w < c.n_wires; ++w)
          if (!covered[static_cast<std::size_t>(w)])
            fresh.placements.push_back(Placement{wire_gate, {w}});
        built = true;
      }
    }
    if (!built)
      fresh = random_block(set, ctx.pool, c.n_wires, c.radix,
                           ctx.restrictions, rng);
    std::uniform_int_distribution<std::size_t> dpos(0, c.blocks.size());
    c.blocks.insert(
        c.blocks.begin() + static_cast<std::ptrdiff_t>(dpos(rng)),
        std::move(fresh));
  }
  return encode(c, lex);
}

/// Weighted gate-set mutation: one random gate position is replaced by the
/// EIGS entry at the cumulative-gfitness point r * gfitness_total, scanning
/// forward (cyclically) past entries that do not fit the position.
template <typename Rng>
Genome wgs_mutate(const Genome& g, const Eigs& eigs, const GateLexicon& lex,
                  const RestrictionMap* restrictions, Rng& rng,
                  std::size_t* skipped = nullptr) {
  if (eigs.empty())
    throw std::invalid_argument("wgs_mutate: empty extended gate set");
  Circuit c = decode(g, lex);

  std::vector<std::pair<std::size_t, std::size_t>> positions;
  for (std::size_t bi = 0; bi < c.blocks.size(); ++bi)
    for (std::size_t pi = 0; pi < c.blocks[bi].placements.size(); ++pi)
      positions.emplace_back(bi, pi);
  std::uniform_int_distribution<std::size_t> dpos(0, positions.size() - 1);
  const auto [bi, pi] = positions[dpos(rng)];
  Block& block = c.blocks[bi];
  const Placement& old = block.placements[pi];

  std::vector<int> available = old.wires;
  const GateSet& set = lex.gate_set();
  for (std::size_t k = 0; k < block.placements.size(); ++k) {
    if (k == pi) continue;
    const Placement& q = block.placements[k];
    if (detail::is_wire(set, q.gate, c.radix)) available.push_back(q.wires[0]);
  }

  auto admissible = [&](int gate) {
    return !admissible_pairs(set, {gate}, available, c.radix, restrictions)
                .empty();
  };

  const auto& entries = eigs.entries();
  std::uniform_real_distribution<double> dr(0.0, 1.0);
  const double point = dr(rng) * eigs.gfitness_total();
  std::size_t sel = entries.size() - 1;
  double cum = 0.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    cum += entries[i].gfitness;
    if (point < cum) {
      sel = i;
      break;
    }
  }
  bool found = false;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const std::size_t i = (sel + k) % entries.size();
    if (admissible(entries[i].gate)) {
      sel = i;
      found = true;
      break;
    }
  }
  if (!found) {
    if (skipped) ++*skipped;
    return g;
  }

  auto cands = admissible_pairs(set, {entries[sel].gate}, available, c.radix,
                                restrictions);
  std::uniform_int_distribution<std::size_t> dp(0, cands.size() - 1);
  const Placement repl = cands[dp(rng)];

  // splice the replacement into the block
  std::vector<Placement> kept;
  for (std::size_t k = 0; k < block.placements.size(); ++k) {
    if (k == pi) continue;
    const Placement& q = block.placements[k];
    if (detail::is_wire(set, q.gate, c.radix)) continue;
    if (detail::wires_intersect(q.wires, repl.wires)) {
      if (skipped) ++*skipped;
      return g;  // non-wire neighbor in the way; position not mutable
    }
    kept.push_back(q);
  }
  kept.push_back(repl);
  std::vector<char> covered(c.n_wires, 0);
  for (const Placement& q : kept)
    for (int w : q.wires) covered[w] = 1;
  const int wire_gate = wire_gate_index(set, c.radix);
  for (int w = 0; w < c.n_wires; ++w)
    if (!covered[w]) kept.push_back(Placement{wire_gate, {w}});
  block.placements = std::move(kept);
  return encode(c, lex);
}

// --- run --------------------------------------------------------------------

struct EigsSnapshotRow {
  std::string id;
  std::string token;
  std::uint64_t usage = 0;
  double gfitness = 0.0;
};

struct RunReport {
  bool success = false;
  int generations_used = 0;
  Genome best_genome;
  Evaluation best_eval;
  std::vector<EigsSnapshotRow> eigs;
  std::uint64_t rng_seed = 0;
  GAMode mode = GAMode::Classical;
  bool use_wgs = true;
  int population_size = 0;
  int max_generations = 0;
  std::size_t merge_suppressed = 0;
  std::size_t eigs_refusals = 0;
  std::size_t wgs_skipped = 0;
  std::vector<MergeEvent> merge_events;

  std::string to_text() const {
    std::ostringstream os;
    os.precision(17);
    os << "run-report\n";
    os << "seed=" << rng_seed << "\n";
    os << "mode=" << eqls::to_string(mode) << "\n";
    os << "wgs=" << (use_wgs ? 1 : 0) << "\n";
    os << "population=" << population_size << "\n";
    os << "max_generations=" << max_generations << "\n";
    os << "success=" << (success ? 1 : 0) << "\n";
    os << "generations_used=" << generations_used << "\n";
    os << "best_error=" << best_eval.error << "\n";
    os << "best_correctness=" << best_eval.correctness << "\n";
    os << "best_raw_cost=" << best_eval.raw_cost << "\n";
    os << "best_merged_cost=" << best_eval.merged_cost << "\n";
    os << "best_fitness=" << best_eval.fitness << "\n";
    os << "best_genome=" << genome_to_line(best_genome) << "\n";
    os << "merge_suppressed=" << merge_suppressed << "\n";
    os << "eigs_refusals=" << eigs_refusals << "\n";
    os << "wgs_skipped=" << wgs_skipped << "\n";
    os << "eigs_entries=" << eigs.size() << "\n";
    for (const auto& row : eigs)
      os << "eigs " << row.id << " " << row.token << " " << row.usage << " "
         << row.gfitness << "\n";
    os << "end\n";
    return os.str();
  }
};

class Engine {
 public:
  Engine(GAConfig cfg, TargetSpec target)
      : cfg_(std::move(cfg)),
        target_(std::move(target)),
        set_(builtin_catalog()),
        lexicon_(&set_, target_.n_wires, target_.radix),
        eigs_(cfg_.eigs_cap),
        rng_(cfg_.rng_seed) {
    if (cfg_.population_size < 1)
      throw std::invalid_argument("GAConfig: population_size must be >= 1");
    if (cfg_.fitness_params.mode == FitnessParams::Mode::f1 &&
        std::abs(cfg_.fitness_params.alpha + cfg_.fitness_params.beta - 1.0) >
            1e-12)
      throw std::invalid_argument("GAConfig: alpha + beta must equal 1");
    resolve_gate_indices(set_, cfg_.primitive_ids);  // validates ids
    for (const auto& [id, wires] : cfg_.restrictions) {
      if (!set_.index_of(id))
        throw std::invalid_argument("GAConfig: restriction on unknown gate " + id);
      if (wires.empty())
        throw std::invalid_argument("GAConfig: empty restriction for " + id);
    }
  }

  RunReport run() {
    std::vector<Individual> pop(cfg_.population_size);
    for (auto& ind : pop)
      ind.genome = random_genome(target_.n_wires, target_.radix,
                                 cfg_.block_count_range, lexicon_,
                                 cfg_.primitive_ids, &cfg_.restrictions, rng_);
    for (std::size_t i = 0;
         i < cfg_.seed_circuits.size() && i < pop.size(); ++i) {
      decode(cfg_.seed_circuits[i], lexicon_);  // validates width and tokens
      pop[i].genome = cfg_.seed_circuits[i];
    }
    evaluate_population(pop);

    Individual best = pop[best_index(pop)];
    RunReport rep;
    rep.rng_seed = cfg_.rng_seed;
    rep.mode = cfg_.mode;
    rep.use_wgs = cfg_.use_wgs;
    rep.population_size = cfg_.population_size;
    rep.max_generations = cfg_.max_generations;

    int gen = 0;
    for (;; ++gen) {
      const Individual& cur = pop[best_index(pop)];
      if (cur.eval.fitness > best.eval.fitness) best = cur;
      if (best.eval.correctness >= 100.0) {
        rep.success = true;
        break;
      }
      if (gen >= cfg_.max_generations) break;

      auto parents = sus_select(fitnesses(pop), pop.size(), rng_);
      std::shuffle(parents.begin(), parents.end(), rng_);

      std::vector<Individual> next;
      next.reserve(pop.size());
      std::bernoulli_distribution do_cross(cfg_.crossover_rate);
      for (std::size_t i = 0; i + 1 < parents.size(); i += 2) {
        Genome ga = pop[parents[i]].genome;
        Genome gb = pop[parents[i + 1]].genome;
        if (do_cross(rng_)) {
          auto [c1, c2] = two_point_crossover(ga, gb, lexicon_, rng_);
          ga = std::move(c1);
          gb = std::move(c2);
        }
        next.push_back(Individual{std::move(ga), {}, gen + 1});
        next.push_back(Individual{std::move(gb), {}, gen + 1});
      }
      if (parents.size() % 2)
        next.push_back(Individual{pop[parents.back()].genome, {}, gen + 1});

      for (auto& ind : next) ind.genome = mutate_genome(ind.genome);
      evaluate_population(next);

      if (cfg_.elitism) {
        std::size_t worst = 0;
        for (std::size_t i = 1; i < next.size(); ++i)
          if (next[i].eval.fitness < next[worst].eval.fitness) worst = i;
        if (best.eval.fitness > next[worst].eval.fitness) next[worst] = best;
      }
      pop = std::move(next);
    }

    rep.generations_used = gen;
    rep.best_genome = best.genome;
    rep.best_eval = best.eval;
    rep.merge_suppressed = merge_suppressed_;
    rep.eigs_refusals = eigs_.refusals();
    rep.wgs_skipped = wgs_skipped_;
    rep.merge_events = merge_events_;
    for (const auto& e : eigs_.entries()) {
      EigsSnapshotRow row;
      row.id = set_[e.gate].id;
      row.token = lexicon_.token(
          Placement{e.gate, default_placement(set_[e.gate].arity)});
      row.usage = e.usage;
      row.gfitness = e.gfitness;
      rep.eigs.push_back(std::move(row));
    }
    return rep;
  }

  const GateSet& gate_set() const { return set_; }
  const GateLexicon& lexicon() const { return lexicon_; }
  const Eigs& eigs() const { return eigs_; }

 private:
  std::vector<int> default_placement(int arity) const {
    std::vector<int> p(arity);
    std::iota(p.begin(), p.end(), 0);
    return p;
  }

  static std::vector<double> fitnesses(const std::vector<Individual>& pop) {
    std::vector<double> f;
    f.reserve(pop.size());
    for (const auto& ind : pop) f.push_back(ind.eval.fitness);
    return f;
  }

  static std::size_t best_index(const std::vector<Individual>& pop) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < pop.size(); ++i)
      if (pop[i].eval.fitness > pop[best].eval.fitness) best = i;
    return best;
  }

  Genome mutate_genome(const Genome& g) {
    MutationContext ctx;
    ctx.lexicon = &lexicon_;
    ctx.kind = cfg_.mutation_kind;
    ctx.rate = cfg_.mutation_rate;
    ctx.restrictions = &cfg_.restrictions;

    std::vector<double> weights;
    if (cfg_.mode == GAMode::Lamarckian && cfg_.use_eigs && !eigs_.empty()) {
      for (const auto& e : eigs_.entries()) {
        ctx.pool.push_back(e.gate);
        weights.push_back(e.gfitness);
      }
      if (cfg_.use_wgs) ctx.weights = &weights;
      // extended-set mutation may also insert whole blocks, which is what
      // lets genomes regain length after genotype replacement shortens them
      ctx.max_blocks = cfg_.block_count_range.second;
    } else {
      ctx.pool = resolve_gate_indices(set_, cfg_.primitive_ids);
    }
    return mutate(g, ctx, rng_);
  }

  /// Phase A (serial): decode, minimize, rewrite genomes, record costs.
  /// Phase B (parallel, pure): error and correctness per phenotype.
  /// Phase C (serial, index order): fitness and EIGS updates.
  void evaluate_population(std::vector<Individual>& pop) {
    const std::size_t n = pop.size();
    std::vector<Circuit> phenotypes(n);
    std::vector<std::unique_ptr<GateSet>> overlays(n);

    for (std::size_t i = 0; i < n; ++i) {
      Circuit c = decode(pop[i].genome, lexicon_);
      pop[i].eval.raw_cost = circuit_cost(c, set_);
      switch (cfg_.mode) {
        case GAMode::Classical:
          pop[i].eval.merged_cost = pop[i].eval.raw_cost;
          phenotypes[i] = std::move(c);
          break;
        case GAMode::Baldwinian: {
          overlays[i] = std::make_unique<GateSet>(&set_);
          auto res = minimize(c, *overlays[i], nullptr,
                              MinimizeMode::Baldwinian);
          pop[i].eval.merged_cost = circuit_cost(res.phenotype, *overlays[i]);
          phenotypes[i] = std::move(res.phenotype);
          break;
        }
        case GAMode::Lamarckian: {
          const std::size_t budget =
              eigs_.size() >= static_cast<std::size_t>(cfg_.eigs_cap)
                  ? 0
                  : static_cast<std::size_t>(cfg_.eigs_cap) - eigs_.size();
          auto res =
              minimize(c, set_, &lexicon_, MinimizeMode::Lamarckian, budget);
          merge_suppressed_ += res.suppressed;
          for (auto& ev : res.events) merge_events_.push_back(std::move(ev));
          pop[i].eval.merged_cost = circuit_cost(res.phenotype, set_);
          pop[i].genome = encode(res.phenotype, lexicon_);
          phenotypes[i] = std::move(res.phenotype);
          break;
        }
      }
    }

    parallel_for(n, cfg_.workers, [&](std::size_t i) {
      const GateSet& s = overlays[i] ? *overlays[i] : set_;
      pop[i].eval.error = boolean_error(phenotypes[i], target_, s);
      pop[i].eval.correctness = correctness(phenotypes[i], target_, s);
    });

    for (std::size_t i = 0; i < n; ++i) {
      const int effective = cfg_.mode == GAMode::Classical
                                ? pop[i].eval.raw_cost
                                : pop[i].eval.merged_cost;
      pop[i].eval.cost = std::max(1, effective);
      pop[i].eval.fitness =
          fitness(pop[i].eval.error, pop[i].eval.cost, cfg_.fitness_params);
      if (cfg_.mode == GAMode::Lamarckian) {
        std::vector<int> gates;
        for (const Block& b : phenotypes[i].blocks)
          for (const Placement& p : b.placements) gates.push_back(p.gate);
        eigs_.update(set_, gates, pop[i].eval.fitness);
      }
    }
  }

  GAConfig cfg_;
  TargetSpec target_;
  GateSet set_;
  GateLexicon lexicon_;
  Eigs eigs_;
  std::mt19937_64 rng_;
  std::size_t merge_suppressed_ = 0;
  std::size_t wgs_skipped_ = 0;
  std::vector<MergeEvent> merge_events_;
};

inline RunReport run(const GAConfig& cfg, const TargetSpec& target) {
  Engine engine(cfg, target);
  return engine.run();
}

}  // namespace eqls
