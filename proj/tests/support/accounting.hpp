#pragma once

// Independent bookkeeping of which entries a run must have revealed,
// rebuilt from the run's trace and seed by replaying the sampling-pattern
// draws. Shares nothing with the oracle's own revealed flags.

#include <cstddef>
#include <set>
#include <stdexcept>
#include <utility>

#include "adaptive_mc/lrebn.hpp"
#include "adaptive_mc/sampling.hpp"

namespace adaptive_mc::testing {

inline std::set<std::pair<std::size_t, std::size_t>> replay_revealed(const RecoveryResult& res,
                                                                     const LrebnConfig& cfg,
                                                                     std::size_t m) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  const std::size_t n = res.columns.size();
  if (n == 0) return seen;

  Rng rng(cfg.seed, Stream::kOmega);
  std::int64_t d = res.updates.at(0).d;
  auto draw = [&] {
    return sample_uniform_subset(m, static_cast<std::size_t>(std::min<std::int64_t>(d, static_cast<std::int64_t>(m))), rng);
  };
  IndexSet omega = draw();
  std::size_t next_update = 1;

  for (std::size_t i = 0; i < n; ++i) {
    if (cfg.omega_redraw == OmegaRedraw::kPerColumn && i > 0) omega = draw();
    const ColumnRecord& rec = res.columns[i];
    if (rec.d_at_time != d) throw std::logic_error("replay diverged from the trace");
    if (rec.mode == ColumnMode::kFullyObserved) {
      for (std::size_t row = 0; row < m; ++row) seen.emplace(row, i);
    } else {
      for (const std::size_t row : omega) seen.emplace(row, i);
    }
    if (next_update < res.updates.size() && res.updates[next_update].after_column == i) {
      d = res.updates[next_update].d;
      ++next_update;
      if (cfg.omega_redraw == OmegaRedraw::kOnUpdate) omega = draw();
    }
  }
  return seen;
}

}  // namespace adaptive_mc::testing
