#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dsop/estimate.hpp"
#include "dsop/model.hpp"

namespace dsop {

/// Pre-drawn travel times for Monte Carlo walks.
///
/// The travel time of walk w over edge (i, j) in band b is the w-th draw of a
/// stream seeded from (seed, i, j, b). A path never repeats an edge, so every
/// walk is an exact sample of the time-dependent process, and any two paths
/// evaluated with the same bank share random numbers. Estimates are therefore
/// a pure function of (instance, path, samples, seed).
class SampleBank {
 public:
  /// Draws columns for every edge of the instance.
  SampleBank(const Instance& instance, std::size_t samples, std::uint64_t seed);
  /// Draws columns only for the edges of `path`.
  SampleBank(const Instance& instance, std::size_t samples, std::uint64_t seed,
             std::span<const VertexId> path);

  std::size_t samples() const { return samples_; }
  std::uint64_t seed() const { return seed_; }
  const Instance& instance() const { return *instance_; }

  /// Draws of `band` for edge index `edge`; empty if not drawn.
  std::span<const double> column(std::size_t edge, std::size_t band) const;

  /// Arrival-time walks along a prefix. arrivals[w] is the arrival time of
  /// walk w; walks already past `deadline` stay frozen (they can never recover).
  std::size_t advance(std::span<const double> arrivals, VertexId from, VertexId to, double deadline,
               std::span<double> out) const;

 private:
  void draw_edge(std::size_t edge);

  const Instance* instance_;
  std::size_t samples_;
  std::uint64_t seed_;
  std::vector<std::size_t> offset_;  // per edge: first column index, or npos
  std::vector<std::vector<double>> columns_;
};

/// N^+ / N over `samples` walks; draws come from a path-local SampleBank.
ProbabilityEstimate sampling_completion_probability(const Instance& instance,
                                                    std::span<const VertexId> path,
                                                    const SolveRequest& request,
                                                    std::size_t samples, std::uint64_t seed);

/// Same estimate using an existing bank.
ProbabilityEstimate sampling_completion_probability(const SampleBank& bank,
                                                    std::span<const VertexId> path,
                                                    const SolveRequest& request);

/// Sum over path vertices of P(a_i <= H) R(v_i) - P(a_i > H) C(v_i), with the
/// per-vertex probabilities estimated from the same sampled walks.
double expected_utility(const Instance& instance, std::span<const VertexId> path,
                        const SolveRequest& request, std::size_t samples, std::uint64_t seed);

}  // namespace dsop
