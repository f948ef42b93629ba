#include "eigennet/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "eigennet/errors.hpp"

namespace eigennet {

AdamState AdamState::init(const MlpParams& params) {
  AdamState s;
  s.m = ParamGrad::zeros_like(params);
  s.v = ParamGrad::zeros_like(params);
  return s;
}

void adam_step(MlpParams& params, const ParamGrad& grad, AdamState& state, double lr) {
  if (!(lr > 0)) throw ConfigError("adam_step: lr must be > 0");
  if (!grad.all_finite()) throw NumericError("non-finite gradient", "adam_step");
  state.step += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    auto update = [&](Eigen::Ref<Eigen::MatrixXd> p, const Eigen::MatrixXd& g,
                      Eigen::Ref<Eigen::MatrixXd> m, Eigen::Ref<Eigen::MatrixXd> v) {
      m = state.beta1 * m + (1.0 - state.beta1) * g;
      v = state.beta2 * v + (1.0 - state.beta2) * g.cwiseProduct(g);
      p.array() -= lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + state.eps);
    };
    update(params.weights[l], grad.weights[l], state.m.weights[l], state.v.weights[l]);
    update(params.biases[l], grad.biases[l], state.m.biases[l], state.v.biases[l]);
  }
}

double lr_at(const LrSchedule& schedule, int epoch) {
  if (epoch < 0) throw ConfigError("lr_at: epoch must be >= 0");
  const double lr = schedule.lr0 * std::pow(schedule.decay, static_cast<double>(epoch / schedule.period));
  return std::max(schedule.lr_min, lr);
}

std::vector<int> NetConfig::widths(int outputs) const {
  std::vector<int> w;
  w.reserve(hidden.size() + 2);
  w.push_back(1);
  w.insert(w.end(), hidden.begin(), hidden.end());
  w.push_back(outputs);
  return w;
}

namespace {

// Fixed offset between the init stream and the sampling stream, so one run
// seed determines both without overlap.
constexpr std::uint64_t kSampleStream = 0x9E3779B97F4A7C15ULL;

EpochStats summarize_epoch(int epoch, double lr, const std::vector<LossBreakdown>& batches,
                           int m, int skipped) {
  EpochStats st;
  st.epoch = epoch;
  st.lr = lr;
  st.skipped_batches = skipped;
  st.rayleigh_mean = Eigen::VectorXd::Zero(m);
  st.rayleigh_std = Eigen::VectorXd::Zero(m);
  st.mean.rayleigh = Eigen::VectorXd::Zero(m);
  st.mean.rayleigh_pen = Eigen::VectorXd::Zero(m);
  const double k = static_cast<double>(batches.size());
  if (batches.empty()) return st;
  for (const auto& lb : batches) {
    st.mean.residual_l2 += lb.residual_l2 / k;
    st.mean.residual_inf += lb.residual_inf / k;
    st.mean.boundary += lb.boundary / k;
    st.mean.energy_pen += lb.energy_pen / k;
    st.mean.ortho += lb.ortho / k;
    st.mean.reg += lb.reg / k;
    st.mean.total += lb.total / k;
    st.mean.rayleigh_pen += lb.rayleigh_pen / k;
    st.rayleigh_mean += lb.rayleigh / k;
  }
  for (const auto& lb : batches)
    st.rayleigh_std.array() += (lb.rayleigh - st.rayleigh_mean).array().square() / k;
  st.rayleigh_std = st.rayleigh_std.cwiseSqrt();
  st.mean.rayleigh = st.rayleigh_mean;
  return st;
}

}  // namespace

std::pair<MlpParams, TrainRecord> train(const ProblemSpec& spec, const LossWeights& weights,
                                        const NetConfig& net, const RunSettings& run,
                                        const LrSchedule& schedule, const SnapshotFn& snapshot) {
  spec.validate();
  weights.validate(spec.num_outputs);
  if (run.epochs < 0 || run.batches_per_epoch < 1 || run.interior_batch < 1 || run.boundary_batch < 1)
    throw ConfigError("run: epochs must be >= 0 and batch shape positive");

  MlpParams params = init_gaussian(net.widths(spec.num_outputs), run.seed);
  AdamState adam = AdamState::init(params);
  std::mt19937_64 rng(run.seed + kSampleStream);

  const auto& snaps = run.snapshot_epochs;
  auto want_snapshot = [&](int e) {
    return snapshot && std::find(snaps.begin(), snaps.end(), e) != snaps.end();
  };
  if (want_snapshot(0)) snapshot(0, params);

  TrainRecord record;
  record.epochs.reserve(static_cast<std::size_t>(run.epochs));
  ParamGrad grad = ParamGrad::zeros_like(params);

  const int max_bad = static_cast<int>(run.max_bad_batch_fraction * run.batches_per_epoch);

  for (int epoch = 1; epoch <= run.epochs; ++epoch) {
    const double lr = lr_at(schedule, epoch - 1);
    std::vector<LossBreakdown> batch_stats;
    batch_stats.reserve(static_cast<std::size_t>(run.batches_per_epoch));
    int skipped = 0;

    for (int b = 0; b < run.batches_per_epoch; ++b) {
      const Batch batch = sample_batch(spec, run.interior_batch, run.boundary_batch, rng);
      grad.set_zero();
      try {
        LossBreakdown lb = composite_loss_grad(params, batch, spec, weights, grad);
        if (run.grad_clip > 0) {
          const double norm = std::sqrt(grad.squared_norm());
          if (norm > run.grad_clip) grad *= run.grad_clip / norm;
        }
        adam_step(params, grad, adam, lr);
        batch_stats.push_back(std::move(lb));
      } catch (const DegenerateFunctionError&) {
        ++skipped;
      } catch (const NumericError&) {
        ++skipped;
      }
      if (skipped > max_bad) {
        record.epochs.push_back(summarize_epoch(epoch, lr, batch_stats, spec.num_outputs, skipped));
        throw TrainAborted("training aborted: too many failed batches in epoch " +
                               std::to_string(epoch),
                           epoch, std::move(record));
      }
    }

    record.epochs.push_back(summarize_epoch(epoch, lr, batch_stats, spec.num_outputs, skipped));
    if (want_snapshot(epoch)) snapshot(epoch, params);
  }
  return {std::move(params), std::move(record)};
}

}  // namespace eigennet
