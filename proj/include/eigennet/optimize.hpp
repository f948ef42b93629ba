#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "eigennet/errors.hpp"
#include "eigennet/losses.hpp"
#include "eigennet/mlp.hpp"
#include "eigennet/sampling.hpp"

namespace eigennet {

/// Adam moment buffers plus step counter, with the usual defaults.
struct AdamState {
  ParamGrad m, v;
  long step{0};
  double beta1{0.9};
  double beta2{0.999};
  double eps{1e-8};

  static AdamState init(const MlpParams& params);
};

/// One bias-corrected Adam update, in place.
void adam_step(MlpParams& params, const ParamGrad& grad, AdamState& state, double lr);

/// Step decay: lr(e) = max(lr_min, lr0 * decay^floor(e / period)).
struct LrSchedule {
  double lr0{4e-3};
  double decay{0.7};
  int period{100};
  double lr_min{5e-5};
};

double lr_at(const LrSchedule& schedule, int epoch);

struct EpochStats {
  int epoch{};
  double lr{};
  LossBreakdown mean;               // batch-averaged components
  Eigen::VectorXd rayleigh_mean;    // per output, over the epoch's batches
  Eigen::VectorXd rayleigh_std;
  int skipped_batches{0};
};

struct TrainRecord {
  std::vector<EpochStats> epochs;
};

/// AbortedRunError that carries the record of the epochs completed before
/// the abort.
class TrainAborted : public AbortedRunError {
public:
  TrainAborted(const std::string& what, int epoch, TrainRecord partial)
      : AbortedRunError(what, epoch), partial_record(std::move(partial)) {}

  TrainRecord partial_record;
};

struct NetConfig {
  std::vector<int> hidden{26, 40, 50, 40, 26};

  std::vector<int> widths(int outputs) const;
};

struct RunSettings {
  int epochs{1000};
  int batches_per_epoch{44};  // ceil(45000 / 1024): one epoch sees the full point budget
  int interior_batch{1024};
  int boundary_batch{32};
  std::uint64_t seed{0};
  std::vector<int> snapshot_epochs{1, 50, 100, 200, 500, 1000, 3000, 5000};
  double grad_clip{0.0};               // global-norm clip; 0 disables
  double max_bad_batch_fraction{0.25}; // abort threshold per epoch
};

/// Called after the optimizer finished `epoch` epochs (and once at epoch 0
/// with the initial parameters when 0 is listed).
using SnapshotFn = std::function<void(int epoch, const MlpParams& params)>;

/// Epoch/batch loop: sample -> composite_loss_grad -> adam_step. Batches
/// that raise a degenerate-function or numeric error are skipped and
/// counted; an epoch whose failure count exceeds the configured fraction
/// aborts the run with AbortedRunError. Fully deterministic per seed.
std::pair<MlpParams, TrainRecord> train(const ProblemSpec& spec, const LossWeights& weights,
                                        const NetConfig& net, const RunSettings& run,
                                        const LrSchedule& schedule, const SnapshotFn& snapshot = {});

}  // namespace eigennet
