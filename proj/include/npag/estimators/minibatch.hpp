#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "npag/core/random.hpp"
#include "npag/core/types.hpp"
#include "npag/problem/mapping_family.hpp"

namespace npag {

// Count of component evaluations charged to a run. Diagnostics never touch it.
struct SampleLedger {
  std::uint64_t samples = 0;
  void charge(std::uint64_t n) { samples += n; }
};

inline Replacement default_replacement(const MappingFamily& family) {
  return family.sampler() == SamplerKind::kStream ? Replacement::kWith : Replacement::kWithout;
}

// Restart-sized batches: finite families are drawn without replacement and clamp to the
// full ordered set; stream families are drawn with replacement.
inline std::vector<Index> restart_batch(const MappingFamily& family, Index size, Rng& rng) {
  require(size >= 1, "restart batch size must be >= 1");
  if (family.sampler() == SamplerKind::kFinite) {
    return draw_batch(family.size(), std::min(size, family.size()), Replacement::kWithout, rng);
  }
  return draw_batch(family.size(), size, Replacement::kWith, rng);
}

// In-epoch batches are drawn with replacement, except that a finite family asked for
// at least all of its components gets the full ordered set.
inline std::vector<Index> step_batch(const MappingFamily& family, Index size, Rng& rng) {
  require(size >= 1, "step batch size must be >= 1");
  if (family.sampler() == SamplerKind::kFinite && size >= family.size()) {
    return full_batch(family.size());
  }
  return draw_batch(family.size(), size, Replacement::kWith, rng);
}

/// Plain mini-batch average phi_B(x). Charges |B| samples.
inline Matrix minibatch_estimate(const MappingFamily& family, const Vector& x, Index batch_size,
                                 Rng& rng, Replacement mode, SampleLedger& ledger) {
  require(batch_size >= 1, "minibatch_estimate: batch size must be >= 1");
  if (mode == Replacement::kWithout && batch_size > family.size()) {
    throw InvalidArgument("minibatch_estimate: batch larger than family without replacement");
  }
  const std::vector<Index> batch = draw_batch(family.size(), batch_size, mode, rng);
  ledger.charge(batch.size());
  return batch_average(family, batch, x);
}

inline Matrix minibatch_estimate(const MappingFamily& family, const Vector& x, Index batch_size,
                                 Rng& rng, SampleLedger& ledger) {
  return minibatch_estimate(family, x, batch_size, rng, default_replacement(family), ledger);
}

}  // namespace npag
