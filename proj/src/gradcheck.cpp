#include "nepdf/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nepdf {

double gradcheck_relative_error(double analytic, double numeric) {
  const double denom =
      std::max({std::abs(analytic), std::abs(numeric), 1e-4});
  return std::abs(analytic - numeric) / denom;
}

namespace {

double batch_loss(const Network<double>& net,
                  const std::vector<Matrix<double>>& batch,
                  const std::vector<int>& labels) {
  return loss(forward(net, batch), labels);
}

}  // namespace

GradCheckReport gradient_check(const Network<double>& net,
                               const std::vector<Matrix<double>>& batch,
                               const std::vector<int>& labels, double step,
                               double tolerance, int corrupt_layer) {
  Gradients<double> analytic = backward(net, batch, labels);
  if (corrupt_layer >= 0) {
    auto l = static_cast<std::size_t>(corrupt_layer);
    if (l >= analytic.weights.size() || analytic.weights[l].size() == 0)
      throw BadArchitecture("gradient_check: corrupt_layer is not parametric");
    analytic.weights[l](0, 0) += 0.05;
  }

  Network<double> probe = net;
  GradCheckReport report;
  report.tolerance = tolerance;

  auto check_array = [&](std::size_t li, bool is_bias) {
    auto& layer = probe.layers[li];
    GradCheckEntry entry;
    entry.layer_index = static_cast<int>(li);
    entry.layer = layer.name;
    entry.param = is_bias ? "bias" : "weights";
    double* data = is_bias ? layer.bias.data() : layer.weights.data();
    const double* grad = is_bias ? analytic.bias[li].data()
                                 : analytic.weights[li].data();
    const auto n = static_cast<long>(is_bias ? layer.bias.size()
                                             : layer.weights.size());
    entry.count = n;
    for (long j = 0; j < n; ++j) {
      const double saved = data[j];
      data[j] = saved + step;
      const double up = batch_loss(probe, batch, labels);
      data[j] = saved - step;
      const double down = batch_loss(probe, batch, labels);
      data[j] = saved;
      const double numeric = (up - down) / (2.0 * step);
      entry.max_rel_err =
          std::max(entry.max_rel_err,
                   gradcheck_relative_error(grad[j], numeric));
    }
    report.entries.push_back(entry);
    report.max_rel_err = std::max(report.max_rel_err, entry.max_rel_err);
  };

  for (std::size_t li = 0; li < probe.layers.size(); ++li) {
    if (!probe.layers[li].parametric()) continue;
    check_array(li, false);
    check_array(li, true);
  }
  report.passed = report.max_rel_err < tolerance;
  return report;
}

double kink_margin(const Network<double>& net, const Matrix<double>& image) {
  double margin = std::numeric_limits<double>::infinity();
  const int k = net.input_size;
  Matrix<double> act(1, k * k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) act(0, r * k + c) = image(r, c);

  Matrix<double> col;
  for (const auto& layer : net.layers) {
    switch (layer.spec.kind) {
      case LayerKind::kConv3x3: {
        detail::conv_im2col(act, layer.in_shape.height, layer.in_shape.width,
                            col);
        Matrix<double> pre = layer.weights * col;
        pre.colwise() += layer.bias;
        if (layer.spec.activation == Activation::kRelu) {
          margin = std::min(margin, pre.cwiseAbs().minCoeff());
          act = pre.cwiseMax(0.0);
        } else {
          act = std::move(pre);
        }
        break;
      }
      case LayerKind::kMaxPool2x2: {
        const int h = layer.in_shape.height;
        const int w = layer.in_shape.width;
        std::vector<int> argmax;
        Matrix<double> out;
        detail::maxpool_forward(act, h, w, out, argmax);
        // top-2 gap per window
        for (int r = 0; r < h / 2; ++r) {
          for (int cc = 0; cc < w / 2; ++cc) {
            const int p00 = (2 * r) * w + 2 * cc;
            const int cand[4] = {p00, p00 + 1, p00 + w, p00 + w + 1};
            for (int ch = 0; ch < static_cast<int>(act.rows()); ++ch) {
              double first = -std::numeric_limits<double>::infinity();
              double second = first;
              for (int q = 0; q < 4; ++q) {
                const double v = act(ch, cand[q]);
                if (v > first) {
                  second = first;
                  first = v;
                } else if (v > second) {
                  second = v;
                }
              }
              margin = std::min(margin, first - second);
            }
          }
        }
        act = std::move(out);
        break;
      }
      case LayerKind::kFlatten:
        act = Eigen::Map<const Matrix<double>>(act.data(), act.size(), 1)
                  .eval();
        break;
      case LayerKind::kDense:
      case LayerKind::kOutput: {
        Matrix<double> pre = layer.weights * act;
        pre += layer.bias;
        if (layer.spec.activation == Activation::kRelu) {
          margin = std::min(margin, pre.cwiseAbs().minCoeff());
          act = pre.cwiseMax(0.0);
        } else {
          act = std::move(pre);
        }
        break;
      }
    }
  }
  return margin;
}

std::vector<Matrix<double>> make_gradcheck_batch(const Network<double>& net,
                                                 int batch_size,
                                                 std::uint64_t seed,
                                                 double min_margin) {
  Rng rng(seed);
  const int k = net.input_size;
  std::vector<Matrix<double>> best;
  double best_margin = -1.0;
  for (int attempt = 0; attempt < 32; ++attempt) {
    std::vector<Matrix<double>> batch;
    batch.reserve(static_cast<std::size_t>(batch_size));
    double margin = std::numeric_limits<double>::infinity();
    for (int b = 0; b < batch_size; ++b) {
      Matrix<double> img(k, k);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) img(r, c) = rng.uniform(0.05, 1.0);
      margin = std::min(margin, kink_margin(net, img));
      batch.push_back(std::move(img));
    }
    if (margin >= min_margin) return batch;
    if (margin > best_margin) {
      best_margin = margin;
      best = std::move(batch);
    }
  }
  return best;
}

GradCheckReport run_gradcheck(std::uint64_t seed, int corrupt_layer) {
  const std::vector<LayerSpec> arch = {
      {LayerKind::kConv3x3, 6, Activation::kRelu},
      {LayerKind::kMaxPool2x2, 0, Activation::kNone},
      {LayerKind::kFlatten, 0, Activation::kNone},
      {LayerKind::kDense, 10, Activation::kRelu},
      {LayerKind::kOutput, 0, Activation::kNone},
  };
  Network<double> net = init_network<double>(8, 3, arch, seed);
  const auto batch = make_gradcheck_batch(net, 4, derive_seed(seed, 1));
  std::vector<int> labels;
  Rng rng(derive_seed(seed, 2));
  for (std::size_t i = 0; i < batch.size(); ++i)
    labels.push_back(class_index_to_label(
        static_cast<int>(rng.uniform_int(0, 2)), 3));
  return gradient_check(net, batch, labels, 1e-4, 1e-4, corrupt_layer);
}

}  // namespace nepdf
