#pragma once

#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "npag/core/random.hpp"
#include "npag/core/types.hpp"

namespace npag {

// How components of a family are drawn. Stream families are finite index spaces that
// stand in for an expectation: they are always sampled with replacement.
enum class SamplerKind { kFinite, kStream };

/// A family {phi_j : R^point_dim -> R^{rows x cols}} over the index space {0..size-1}.
/// Evaluation must be pure: the same (j, x) always yields the same matrix, and
/// concurrent calls are allowed.
class MappingFamily {
 public:
  virtual ~MappingFamily() = default;

  virtual Index rows() const = 0;
  virtual Index cols() const = 0;
  virtual Index point_dim() const = 0;
  virtual Index size() const = 0;
  virtual SamplerKind sampler() const { return SamplerKind::kFinite; }
  virtual bool has_exact_average() const { return true; }

  // out += weight * phi_j(x)
  virtual void accumulate(Index j, const Vector& x, double weight, Matrix& out) const = 0;

  Matrix evaluate(Index j, const Vector& x) const {
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(rows()), static_cast<Eigen::Index>(cols()));
    accumulate(j, x, 1.0, out);
    return out;
  }
};

// Mean of phi_j(x) over the (multi)set `batch`, summed in batch order.
inline Matrix batch_average(const MappingFamily& family, std::span<const Index> batch,
                            const Vector& x) {
  if (batch.empty()) throw InvalidArgument("batch_average: empty batch");
  require_dims(static_cast<Index>(x.size()) == family.point_dim(),
               "batch_average: point dimension mismatch");
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(family.rows()),
                            static_cast<Eigen::Index>(family.cols()));
  for (Index j : batch) {
    if (j >= family.size()) throw InvalidArgument("batch_average: component index out of range");
    family.accumulate(j, x, 1.0, out);
  }
  out /= static_cast<double>(batch.size());
  return out;
}

/// Uniform mean over every component. Bitwise identical to batch_average over the full
/// ordered index set.
inline Matrix exact_average(const MappingFamily& family, const Vector& x) {
  if (!family.has_exact_average()) {
    throw UnavailableOracle("exact_average: family only supports sampling");
  }
  const std::vector<Index> all = full_batch(family.size());
  return batch_average(family, all, x);
}

// Family backed by a callable; used for synthetic families and tests.
class FunctionFamily final : public MappingFamily {
 public:
  using Fn = std::function<Matrix(Index, const Vector&)>;

  FunctionFamily(Index rows, Index cols, Index point_dim, Index size, Fn fn,
                 SamplerKind sampler = SamplerKind::kFinite)
      : rows_(rows), cols_(cols), point_dim_(point_dim), size_(size), fn_(std::move(fn)),
        sampler_(sampler) {
    require(size >= 1, "FunctionFamily: size must be >= 1");
  }

  Index rows() const override { return rows_; }
  Index cols() const override { return cols_; }
  Index point_dim() const override { return point_dim_; }
  Index size() const override { return size_; }
  SamplerKind sampler() const override { return sampler_; }

  void accumulate(Index j, const Vector& x, double weight, Matrix& out) const override {
    const Matrix v = fn_(j, x);
    require_dims(static_cast<Index>(v.rows()) == rows_ && static_cast<Index>(v.cols()) == cols_,
                 "FunctionFamily: callable returned wrong shape");
    out += weight * v;
  }

 private:
  Index rows_, cols_, point_dim_, size_;
  Fn fn_;
  SamplerKind sampler_;
};

}  // namespace npag
