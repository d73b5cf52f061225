#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "evs/cells.hpp"

namespace evs {

/// A distribution file: per cell (listed by event names) a weight for each maximal
/// configuration of the cell.
struct DistributionTable {
  struct Weight {
    std::vector<std::string> choice;
    double weight = 0;
    int line = 0;
    bool operator==(const Weight& o) const { return choice == o.choice && weight == o.weight; }
  };
  struct Cell {
    std::vector<std::string> events;
    std::vector<Weight> weights;
    int line = 0;
    bool operator==(const Cell& o) const { return events == o.events && weights == o.weights; }
  };
  std::string name;
  std::vector<Cell> cells;

  bool operator==(const DistributionTable&) const = default;
};

/// q_c for one cell. Sets use the host's event ids; weights follow Ω_c's canonical order.
struct CellDistribution {
  EventSet cell;
  std::vector<EventSet> outcomes;
  std::vector<double> weights;
};

struct SampleStep {
  EventSet cell;
  EventSet choice;
};

struct SampleRun {
  EventSet configuration;
  std::vector<SampleStep> trace;
};

enum class CellOrder { CanonicalFirst, CanonicalLast };

struct Measure {
  std::vector<EventSet> outcomes;
  std::vector<double> probabilities;
  double mass = 0;
};

inline constexpr double kProbabilityTolerance = 1e-9;

/// A host with a local transition probability on every branching cell.
template <class Host>
class LocallyRandomizedES {
 public:
  /// 1/|Ω_c| on every cell.
  static LocallyRandomizedES uniform(const Host& host, bool allow_truncated = false);
  /// Throws Error(Distribution) for a missing or unknown cell, a weight on a non-maximal
  /// cell configuration, a negative weight, or weights not summing to 1.
  static LocallyRandomizedES from_table(const Host& host, const DistributionTable& table, bool allow_truncated = false);

  const Host& host() const { return analysis_.host(); }
  const CellAnalysis<Host>& analysis() const { return analysis_; }
  const std::vector<CellDistribution>& distributions() const { return dists_; }
  /// The distributions as a table, keyed by event names.
  DistributionTable table() const;

  double q(EventSet cell, EventSet choice) const;

  /// p(v) as a product over the covering of v. Throws Error(NotRStopped).
  double likelihood(EventSet v) const;
  /// ℙ on maximal configurations. Throws Error(NotRStopped) when a maximal configuration
  /// has no covering, Error(Distribution) when the total mass is not 1.
  Measure global_measure() const;
  /// ℙ(S(v)): mass of the maximal configurations extending v.
  double shadow(EventSet v) const;

  SampleRun sample_run(std::mt19937_64& rng, CellOrder order = CellOrder::CanonicalFirst) const;
  SampleRun sample_run(std::uint64_t seed, CellOrder order = CellOrder::CanonicalFirst) const;

  /// The same distributions on the future at a finite R-stopped configuration u.
  LocallyRandomizedES future(EventSet u) const;

 private:
  LocallyRandomizedES(const Host& host, bool allow_truncated);
  void attach(const std::map<std::vector<std::string>, std::map<std::vector<std::string>, double>>& by_name);

  CellAnalysis<Host> analysis_;
  std::vector<CellDistribution> dists_;
  std::unordered_map<EventSet, std::size_t> index_;
  bool allow_truncated_ = false;
  std::map<std::vector<std::string>, std::map<std::vector<std::string>, double>> by_name_;
};

extern template class LocallyRandomizedES<PrimeES>;
extern template class LocallyRandomizedES<StableES>;

}  // namespace evs
