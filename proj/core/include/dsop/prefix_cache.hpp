#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "dsop/model.hpp"
#include "dsop/sampling.hpp"
#include "dsop/transition.hpp"

namespace dsop {

/// Propagates conservative range distributions through transition matrices.
class MatrixPropagator {
 public:
  using State = std::vector<double>;

  MatrixPropagator(const MatrixModel& model, double start_time)
      : model_(&model), start_time_(start_time) {}

  State initial() const { return initial_distribution(model_->grid(), start_time_).mass; }

  /// Writes the next state and returns its completion value.
  double advance(const State& in, VertexId from, VertexId to, State& out) const {
    out.resize(in.size());
    if (const auto* m = model_->matrix(from, to)) {
      m->propagate(in, out);
      return completion(out);
    }
    std::fill(out.begin(), out.end(), 0.0);
    double total = 0.0;
    for (double x : in) total += x;
    out.back() = total;
    return 0.0;
  }

  double completion(const State& s) const {
    double total = 0.0;
    for (std::size_t r = 0; r + 1 < s.size(); ++r) total += s[r];
    return total;
  }

 private:
  const MatrixModel* model_;
  double start_time_;
};

/// Propagates per-walk arrival times through a SampleBank.
class SamplingPropagator {
 public:
  using State = std::vector<double>;

  SamplingPropagator(const SampleBank& bank, double start_time, double deadline)
      : bank_(&bank), start_time_(start_time), deadline_(deadline) {}

  State initial() const { return State(bank_->samples(), start_time_); }

  double advance(const State& in, VertexId from, VertexId to, State& out) const {
    out.resize(in.size());
    const auto on_time = bank_->advance(in, from, to, deadline_, out);
    return static_cast<double>(on_time) / static_cast<double>(out.size());
  }

  double completion(const State& s) const {
    std::size_t on_time = 0;
    for (double t : s)
      if (t <= deadline_) ++on_time;
    return static_cast<double>(on_time) / static_cast<double>(s.size());
  }

 private:
  const SampleBank* bank_;
  double start_time_;
  double deadline_;
};

struct SwapEdit {
  std::size_t i = 0;
  std::size_t j = 0;
};
struct RemoveSecondLastEdit {};
struct InsertEdit {
  VertexId vertex;
  std::size_t position = 0;  // index the vertex occupies after insertion
};
using PathEdit = std::variant<SwapEdit, RemoveSecondLastEdit, InsertEdit>;

/// Arrival state after every prefix of the current path.
///
/// For both propagators the completion value of a prefix state bounds the
/// completion of every extension from above (matrix mass only leaks into the
/// overflow range; a late walk stays late), which lets probes stop early.
template <class Propagator>
class PrefixCache {
 public:
  using State = typename Propagator::State;

  PrefixCache(const Propagator& propagator, Path path) : prop_(&propagator) {
    reset(std::move(path));
  }

  void reset(Path path) {
    path_ = std::move(path);
    states_.assign(path_.size(), State{});
    if (path_.empty()) return;
    states_[0] = prop_->initial();
    recompute_from(1);
  }

  const Path& path() const { return path_; }
  /// State on arrival at path()[t].
  const State& state(std::size_t t) const { return states_[t]; }
  double completion() const { return path_.size() < 2 ? 0.0 : prop_->completion(states_.back()); }
  /// Number of prefix states recomputed by the last reset or apply.
  std::size_t last_recomputed() const { return last_recomputed_; }

  /// Applies the edit and recomputes states from the leftmost changed
  /// position; earlier states are reused as they are.
  double apply(const PathEdit& edit) {
    std::size_t from = path_.size();
    if (const auto* s = std::get_if<SwapEdit>(&edit)) {
      if (s->i != s->j) {
        std::swap(path_[s->i], path_[s->j]);
        from = std::min(s->i, s->j);
      }
    } else if (std::holds_alternative<RemoveSecondLastEdit>(edit)) {
      if (path_.size() > 2) {
        path_.erase(path_.end() - 2);
        states_.erase(states_.end() - 2);
        from = path_.size() - 1;
      }
    } else {
      const auto& ins = std::get<InsertEdit>(edit);
      path_.insert(path_.begin() + static_cast<std::ptrdiff_t>(ins.position), ins.vertex);
      states_.insert(states_.begin() + static_cast<std::ptrdiff_t>(ins.position), State{});
      from = ins.position;
    }
    recompute_from(std::max<std::size_t>(from, 1));
    return completion();
  }

  /// Completion of the path with `v` inserted at `position` (1 <= position <
  /// size). Returns nullopt as soon as the value is known to be below
  /// `threshold`.
  std::optional<double> probe_insert(VertexId v, std::size_t position,
                                     double threshold = -1.0) const {
    return probe_insert(v, position, [threshold](double c) { return c >= threshold; });
  }

  /// Completion of the path with `v` inserted at `position`, or nullopt as
  /// soon as `keep` rejects a partial completion. Since completion never
  /// increases along a path, `keep` should be monotone in its argument.
  template <class Keep>
  std::optional<double> probe_insert(VertexId v, std::size_t position, Keep&& keep) const {
    double value = prop_->advance(states_[position - 1], path_[position - 1], v, scratch_a_);
    if (!keep(value)) return std::nullopt;
    VertexId prev = v;
    for (std::size_t t = position; t < path_.size(); ++t) {
      value = prop_->advance(scratch_a_, prev, path_[t], scratch_b_);
      scratch_a_.swap(scratch_b_);
      if (!keep(value)) return std::nullopt;
      prev = path_[t];
    }
    return value;
  }

 private:
  void recompute_from(std::size_t t) {
    last_recomputed_ = 0;
    for (; t < path_.size(); ++t) {
      prop_->advance(states_[t - 1], path_[t - 1], path_[t], states_[t]);
      ++last_recomputed_;
    }
  }

  const Propagator* prop_;
  Path path_;
  std::vector<State> states_;
  std::size_t last_recomputed_ = 0;
  mutable State scratch_a_;
  mutable State scratch_b_;
};

}  // namespace dsop
