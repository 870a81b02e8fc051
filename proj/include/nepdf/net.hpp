#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "nepdf/error.hpp"
#include "nepdf/histogram.hpp"
#include "nepdf/parallel.hpp"
#include "nepdf/rng.hpp"
#include "nepdf/types.hpp"

namespace nepdf {

enum class Activation : std::uint8_t { kNone = 0, kRelu = 1 };
enum class LayerKind : std::uint8_t {
  kConv3x3 = 0,
  kMaxPool2x2 = 1,
  kFlatten = 2,
  kDense = 3,
  kOutput = 4,
};

struct LayerSpec {
  LayerKind kind = LayerKind::kDense;
  int units = 0;  // conv output channels / dense units; ignored otherwise
  Activation activation = Activation::kNone;
};

struct TensorShape {
  int channels = 0;
  int height = 0;
  int width = 0;
  int size() const { return channels * height * width; }
};

//! Hidden stack for a K x K input: two 3x3 convolution blocks with 2x2
//! pooling, then one dense layer. Ends with the output layer placeholder.
std::vector<LayerSpec> default_arch();

//! "conv:16,conv:16,pool,conv:32,conv:32,pool,dense:64" <-> LayerSpecs.
//! The output layer is implicit; flatten may be omitted (inserted before the
//! first dense layer).
std::vector<LayerSpec> parse_arch(const std::string& text);
std::string format_arch(const std::vector<LayerSpec>& arch);

struct TrainConfig {
  double learning_rate = 0.01;
  double momentum = 0.9;
  int batch_size = 32;
  int epochs = 30;
  double validation_fraction = 0.1;
  int early_stop_patience = 5;  // 0 disables early stopping
  std::uint64_t seed = 0;

  void validate() const;
};

//! Feature maps are stored as (channels x height*width) matrices with pixel
//! index r*width + c. Convolutions use 3x3 kernels with zero padding and an
//! im2col layout: weights are (C_out x 9*C_in) with column k*C_in + ch for
//! kernel offset k = (dr+1)*3 + (dc+1).
template <typename Scalar>
struct Network {
  struct Layer {
    LayerSpec spec;
    TensorShape in_shape;
    TensorShape out_shape;
    std::string name;
    Matrix<Scalar> weights;  // empty for pool/flatten
    Vector<Scalar> bias;

    bool parametric() const { return weights.size() > 0; }
  };

  int input_size = 0;  // K
  int n_classes = 0;   // 2 (logistic output) or 3 (softmax output)
  std::uint64_t seed = 0;
  std::vector<Layer> layers;

  int logit_dim() const { return n_classes == 2 ? 1 : n_classes; }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers)
      n += static_cast<std::size_t>(l.weights.size() + l.bias.size());
    return n;
  }
};

//! Per-sample forward record used by backpropagation.
template <typename Scalar>
struct Tape {
  std::vector<Matrix<Scalar>> acts;        // acts[i] = input to layer i
  std::vector<Matrix<Scalar>> cols;        // im2col buffers per conv layer
  std::vector<std::vector<int>> argmax;    // pool routing
  Vector<Scalar> probs;
};

//! Parameter-shaped accumulator aligned with Network::layers.
template <typename Scalar>
struct Gradients {
  std::vector<Matrix<Scalar>> weights;
  std::vector<Vector<Scalar>> bias;

  template <typename Net>
  void resize_like(const Net& net) {
    weights.resize(net.layers.size());
    bias.resize(net.layers.size());
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
      weights[i].resize(net.layers[i].weights.rows(),
                        net.layers[i].weights.cols());
      bias[i].resize(net.layers[i].bias.size());
    }
  }

  void set_zero() {
    for (auto& w : weights) w.setZero();
    for (auto& b : bias) b.setZero();
  }

  void add(const Gradients& o) {
    for (std::size_t i = 0; i < weights.size(); ++i) {
      weights[i] += o.weights[i];
      bias[i] += o.bias[i];
    }
  }

  void scale(Scalar s) {
    for (auto& w : weights) w *= s;
    for (auto& b : bias) b *= s;
  }
};

namespace detail {

template <typename Scalar>
void conv_im2col(const Matrix<Scalar>& in, int h, int w, Matrix<Scalar>& col) {
  const auto c = static_cast<int>(in.rows());
  col.resize(9 * c, h * w);
  for (int r = 0; r < h; ++r) {
    for (int cc = 0; cc < w; ++cc) {
      const int p = r * w + cc;
      for (int dr = 0; dr < 3; ++dr) {
        for (int dc = 0; dc < 3; ++dc) {
          const int k = dr * 3 + dc;
          const int rr = r + dr - 1;
          const int c2 = cc + dc - 1;
          auto block = col.block(k * c, p, c, 1);
          if (rr < 0 || rr >= h || c2 < 0 || c2 >= w)
            block.setZero();
          else
            block = in.col(rr * w + c2);
        }
      }
    }
  }
}

template <typename Scalar>
void conv_col2im(const Matrix<Scalar>& col, int h, int w,
                 Matrix<Scalar>& din) {
  const auto c = static_cast<int>(din.rows());
  din.setZero();
  for (int r = 0; r < h; ++r) {
    for (int cc = 0; cc < w; ++cc) {
      const int p = r * w + cc;
      for (int dr = 0; dr < 3; ++dr) {
        for (int dc = 0; dc < 3; ++dc) {
          const int rr = r + dr - 1;
          const int c2 = cc + dc - 1;
          if (rr < 0 || rr >= h || c2 < 0 || c2 >= w) continue;
          din.col(rr * w + c2) += col.block((dr * 3 + dc) * c, p, c, 1);
        }
      }
    }
  }
}

template <typename Scalar>
void maxpool_forward(const Matrix<Scalar>& in, int h, int w,
                     Matrix<Scalar>& out, std::vector<int>& argmax) {
  const auto c = static_cast<int>(in.rows());
  const int ho = h / 2;
  const int wo = w / 2;
  out.resize(c, ho * wo);
  argmax.resize(static_cast<std::size_t>(c) * ho * wo);
  for (int r = 0; r < ho; ++r) {
    for (int cc = 0; cc < wo; ++cc) {
      const int po = r * wo + cc;
      const int p00 = (2 * r) * w + 2 * cc;
      const int cand[4] = {p00, p00 + 1, p00 + w, p00 + w + 1};
      for (int ch = 0; ch < c; ++ch) {
        int best = cand[0];
        Scalar bv = in(ch, best);
        for (int q = 1; q < 4; ++q) {
          const Scalar v = in(ch, cand[q]);
          if (v > bv) {  // ties keep the first window position
            bv = v;
            best = cand[q];
          }
        }
        out(ch, po) = bv;
        argmax[static_cast<std::size_t>(po) * c + ch] = best;
      }
    }
  }
}

template <typename Scalar>
void maxpool_backward(const Matrix<Scalar>& dout,
                      const std::vector<int>& argmax, int in_cols,
                      Matrix<Scalar>& din) {
  const auto c = static_cast<int>(dout.rows());
  din.resize(c, in_cols);
  din.setZero();
  for (int po = 0; po < dout.cols(); ++po)
    for (int ch = 0; ch < c; ++ch)
      din(ch, argmax[static_cast<std::size_t>(po) * c + ch]) += dout(ch, po);
}

template <typename Scalar>
Vector<Scalar> probabilities_from_logits(const Matrix<Scalar>& logits,
                                         int n_classes) {
  Vector<Scalar> probs(n_classes);
  if (n_classes == 2) {
    const Scalar z = logits(0, 0);
    Scalar p;
    if (z >= Scalar(0))
      p = Scalar(1) / (Scalar(1) + std::exp(-z));
    else {
      const Scalar e = std::exp(z);
      p = e / (Scalar(1) + e);
    }
    probs << p, Scalar(1) - p;
  } else {
    const Scalar zmax = logits.col(0).maxCoeff();
    Vector<Scalar> e = (logits.col(0).array() - zmax).exp();
    probs = e / e.sum();
  }
  return probs;
}

}  // namespace detail

template <typename Scalar>
Network<Scalar> init_network(int input_size, int n_classes,
                             std::vector<LayerSpec> arch, std::uint64_t seed) {
  if (n_classes != 2 && n_classes != 3)
    throw BadArchitecture("n_classes must be 2 or 3");
  if (input_size < 4)
    throw BadArchitecture("input size must be at least 4, got " +
                          std::to_string(input_size));
  if (arch.empty()) arch = default_arch();
  if (arch.back().kind != LayerKind::kOutput)
    throw BadArchitecture("architecture must end with the output layer");

  Network<Scalar> net;
  net.input_size = input_size;
  net.n_classes = n_classes;
  net.seed = seed;

  Rng rng(seed);
  TensorShape shape{1, input_size, input_size};
  bool flattened = false;
  int conv_count = 0, pool_count = 0, dense_count = 0;
  for (const LayerSpec& spec : arch) {
    typename Network<Scalar>::Layer layer;
    layer.spec = spec;
    layer.in_shape = shape;
    switch (spec.kind) {
      case LayerKind::kConv3x3: {
        if (flattened)
          throw BadArchitecture("convolution after flatten");
        if (spec.units < 1) throw BadArchitecture("conv needs channels >= 1");
        layer.name = "conv" + std::to_string(++conv_count);
        shape = {spec.units, shape.height, shape.width};
        layer.weights.resize(spec.units, 9 * layer.in_shape.channels);
        layer.bias = Vector<Scalar>::Zero(spec.units);
        break;
      }
      case LayerKind::kMaxPool2x2: {
        if (flattened) throw BadArchitecture("pool after flatten");
        if (shape.height < 2 || shape.width < 2)
          throw BadArchitecture("pooling would reduce the spatial size to 0");
        layer.name = "pool" + std::to_string(++pool_count);
        shape = {shape.channels, shape.height / 2, shape.width / 2};
        break;
      }
      case LayerKind::kFlatten: {
        if (flattened) throw BadArchitecture("duplicate flatten");
        layer.name = "flatten";
        shape = {shape.size(), 1, 1};
        flattened = true;
        break;
      }
      case LayerKind::kDense:
      case LayerKind::kOutput: {
        if (!flattened)
          throw BadArchitecture("dense/output layer before flatten");
        const bool output = spec.kind == LayerKind::kOutput;
        int units = spec.units;
        if (output) {
          units = n_classes == 2 ? 1 : n_classes;
          layer.spec.units = units;
          layer.spec.activation = Activation::kNone;
          layer.name = "output";
        } else {
          if (units < 1) throw BadArchitecture("dense needs units >= 1");
          layer.name = "dense" + std::to_string(++dense_count);
        }
        layer.weights.resize(units, shape.size());
        layer.bias = Vector<Scalar>::Zero(units);
        shape = {units, 1, 1};
        break;
      }
    }
    layer.out_shape = shape;
    net.layers.push_back(std::move(layer));
  }
  for (std::size_t i = 0; i + 1 < net.layers.size(); ++i)
    if (net.layers[i].spec.kind == LayerKind::kOutput)
      throw BadArchitecture("output layer must come last");

  // Scaled uniform init: +-sqrt(6 / fan_in), biases zero. Fill order is
  // fixed (layer, row, column) so equal seeds give equal parameters.
  for (auto& layer : net.layers) {
    if (!layer.parametric()) continue;
    const double bound =
        std::sqrt(6.0 / static_cast<double>(layer.weights.cols()));
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c)
        layer.weights(r, c) = static_cast<Scalar>(rng.uniform(-bound, bound));
  }
  return net;
}

//! Forward pass of one K x K sample; fills the tape for backpropagation.
template <typename Scalar>
Vector<Scalar> forward_sample(const Network<Scalar>& net,
                              const Matrix<Scalar>& image,
                              Tape<Scalar>& tape) {
  const int k = net.input_size;
  if (image.rows() != k || image.cols() != k)
    throw ShapeMismatch("forward: expected " + std::to_string(k) + "x" +
                        std::to_string(k) + " input, got " +
                        std::to_string(image.rows()) + "x" +
                        std::to_string(image.cols()));
  const std::size_t n_layers = net.layers.size();
  tape.acts.resize(n_layers + 1);
  tape.cols.resize(n_layers);
  tape.argmax.resize(n_layers);

  Matrix<Scalar>& a0 = tape.acts[0];
  a0.resize(1, k * k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) a0(0, r * k + c) = image(r, c);

  for (std::size_t i = 0; i < n_layers; ++i) {
    const auto& layer = net.layers[i];
    const Matrix<Scalar>& in = tape.acts[i];
    Matrix<Scalar>& out = tape.acts[i + 1];
    switch (layer.spec.kind) {
      case LayerKind::kConv3x3:
        detail::conv_im2col(in, layer.in_shape.height, layer.in_shape.width,
                            tape.cols[i]);
        out.noalias() = layer.weights * tape.cols[i];
        out.colwise() += layer.bias;
        if (layer.spec.activation == Activation::kRelu)
          out = out.cwiseMax(Scalar(0));
        break;
      case LayerKind::kMaxPool2x2:
        detail::maxpool_forward(in, layer.in_shape.height,
                                layer.in_shape.width, out, tape.argmax[i]);
        break;
      case LayerKind::kFlatten:
        out = Eigen::Map<const Matrix<Scalar>>(in.data(), in.size(), 1);
        break;
      case LayerKind::kDense:
      case LayerKind::kOutput:
        out.noalias() = layer.weights * in;
        out += layer.bias;
        if (layer.spec.activation == Activation::kRelu)
          out = out.cwiseMax(Scalar(0));
        break;
    }
  }
  tape.probs = detail::probabilities_from_logits(tape.acts[n_layers],
                                                 net.n_classes);
  return tape.probs;
}

//! Batch forward: one probability row per sample. Parallel over samples with
//! per-index result slots, so the output matches a sequential run exactly.
template <typename Scalar>
Matrix<Scalar> forward(const Network<Scalar>& net,
                       const std::vector<Matrix<Scalar>>& batch) {
  Matrix<Scalar> out(static_cast<Eigen::Index>(batch.size()), net.n_classes);
  parallel_for_chunks(static_cast<int>(batch.size()),
                      [&](int, int begin, int end) {
                        Tape<Scalar> tape;
                        for (int i = begin; i < end; ++i)
                          out.row(i) =
                              forward_sample(net, batch[static_cast<std::size_t>(i)], tape)
                                  .transpose();
                      });
  return out;
}

inline constexpr double kProbFloor = 1e-12;

//! Mean cross-entropy over the batch; probabilities are floored at 1e-12.
template <typename Scalar>
double loss(const Matrix<Scalar>& probabilities,
            const std::vector<int>& labels) {
  if (static_cast<std::size_t>(probabilities.rows()) != labels.size())
    throw ShapeMismatch("loss: probabilities/labels size mismatch");
  const auto n_classes = static_cast<int>(probabilities.cols());
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int idx = label_to_class_index(labels[i], n_classes);
    const double p =
        std::max(static_cast<double>(
                     probabilities(static_cast<Eigen::Index>(i), idx)),
                 kProbFloor);
    total -= std::log(p);
  }
  return total / static_cast<double>(labels.size());
}

//! One-hot variant of the loss.
template <typename Scalar>
double loss_onehot(const Matrix<Scalar>& probabilities,
                   const Matrix<Scalar>& onehot) {
  if (probabilities.rows() != onehot.rows() ||
      probabilities.cols() != onehot.cols())
    throw ShapeMismatch("loss: one-hot shape mismatch");
  double total = 0.0;
  for (Eigen::Index i = 0; i < probabilities.rows(); ++i)
    for (Eigen::Index c = 0; c < probabilities.cols(); ++c)
      if (onehot(i, c) != Scalar(0))
        total -= static_cast<double>(onehot(i, c)) *
                 std::log(std::max(static_cast<double>(probabilities(i, c)),
                                   kProbFloor));
  return total / static_cast<double>(probabilities.rows());
}

namespace detail {

//! Gradient of one sample's cross-entropy; adds into the accumulator.
template <typename Scalar>
void backward_sample(const Network<Scalar>& net, const Tape<Scalar>& tape,
                     int class_index, Gradients<Scalar>& grad) {
  const auto n_layers = static_cast<std::ptrdiff_t>(net.layers.size());
  Matrix<Scalar> d;
  if (net.n_classes == 2) {
    d.resize(1, 1);
    d(0, 0) = tape.probs(0) - Scalar(class_index == 0 ? 1 : 0);
  } else {
    d.resize(net.n_classes, 1);
    for (int l = 0; l < net.n_classes; ++l)
      d(l, 0) = tape.probs(l) - Scalar(l == class_index ? 1 : 0);
  }
  for (std::ptrdiff_t i = n_layers - 1; i >= 0; --i) {
    const auto& layer = net.layers[static_cast<std::size_t>(i)];
    const Matrix<Scalar>& in = tape.acts[static_cast<std::size_t>(i)];
    const Matrix<Scalar>& out = tape.acts[static_cast<std::size_t>(i) + 1];
    if (layer.spec.activation == Activation::kRelu)
      d = d.cwiseProduct(
          (out.array() > Scalar(0)).template cast<Scalar>().matrix());
    switch (layer.spec.kind) {
      case LayerKind::kDense:
      case LayerKind::kOutput:
        grad.weights[static_cast<std::size_t>(i)].noalias() +=
            d * in.transpose();
        grad.bias[static_cast<std::size_t>(i)] += d.col(0);
        if (i > 0) d = (layer.weights.transpose() * d).eval();
        break;
      case LayerKind::kFlatten:
        d = Eigen::Map<const Matrix<Scalar>>(d.data(), in.rows(), in.cols())
                .eval();
        break;
      case LayerKind::kMaxPool2x2: {
        Matrix<Scalar> din;
        maxpool_backward(d, tape.argmax[static_cast<std::size_t>(i)],
                         static_cast<int>(in.cols()), din);
        d = std::move(din);
        break;
      }
      case LayerKind::kConv3x3:
        grad.weights[static_cast<std::size_t>(i)].noalias() +=
            d * tape.cols[static_cast<std::size_t>(i)].transpose();
        grad.bias[static_cast<std::size_t>(i)] += d.rowwise().sum();
        if (i > 0) {
          const Matrix<Scalar> dcol = layer.weights.transpose() * d;
          Matrix<Scalar> din(in.rows(), in.cols());
          conv_col2im(dcol, layer.in_shape.height, layer.in_shape.width, din);
          d = std::move(din);
        }
        break;
    }
  }
}

//! Per-sample gradients into slots, then a fixed-order reduction; the result
//! is bit-identical for any worker count.
template <typename Scalar>
void accumulate_batch(const Network<Scalar>& net,
                      const std::vector<Matrix<Scalar>>& batch,
                      const std::vector<int>& class_idx,
                      std::vector<Gradients<Scalar>>& slots,
                      std::vector<Tape<Scalar>>& tapes,
                      Matrix<Scalar>* probs_out, Gradients<Scalar>& total) {
  const auto b = static_cast<int>(batch.size());
  if (static_cast<std::size_t>(b) > slots.size()) {
    slots.resize(static_cast<std::size_t>(b));
    for (auto& s : slots) s.resize_like(net);
  }
  if (tapes.size() < static_cast<std::size_t>(worker_count()))
    tapes.resize(static_cast<std::size_t>(worker_count()));
  parallel_for_chunks(b, [&](int worker, int begin, int end) {
    Tape<Scalar>& tape = tapes[static_cast<std::size_t>(worker)];
    for (int i = begin; i < end; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      forward_sample(net, batch[ui], tape);
      if (probs_out) probs_out->row(i) = tape.probs.transpose();
      slots[ui].set_zero();
      backward_sample(net, tape, class_idx[ui], slots[ui]);
    }
  });
  total.set_zero();
  for (int i = 0; i < b; ++i) total.add(slots[static_cast<std::size_t>(i)]);
  total.scale(Scalar(1) / Scalar(b));
}

}  // namespace detail

//! Exact gradients of the mean cross-entropy w.r.t. every parameter array.
template <typename Scalar>
Gradients<Scalar> backward(const Network<Scalar>& net,
                           const std::vector<Matrix<Scalar>>& batch,
                           const std::vector<int>& labels) {
  if (batch.empty()) throw EmptyDataset("backward: empty batch");
  if (batch.size() != labels.size())
    throw ShapeMismatch("backward: batch/labels size mismatch");
  std::vector<int> class_idx(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    class_idx[i] = label_to_class_index(labels[i], net.n_classes);
  std::vector<Gradients<Scalar>> slots;
  std::vector<Tape<Scalar>> tapes;
  Gradients<Scalar> total;
  total.resize_like(net);
  detail::accumulate_batch(net, batch, class_idx, slots, tapes,
                           static_cast<Matrix<Scalar>*>(nullptr), total);
  return total;
}

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
};

struct TrainResult {
  std::vector<EpochStats> history;
  int best_epoch = 0;  // 1-based; 0 when early stopping is disabled
};

//! Minibatch SGD with momentum. Data are shuffled per epoch with the config
//! seed; when early_stop_patience > 0 training stops after that many epochs
//! without validation-loss improvement and the best parameters are restored.
template <typename Scalar>
TrainResult train(Network<Scalar>& net,
                  const std::vector<Matrix<Scalar>>& inputs,
                  const std::vector<int>& labels, const TrainConfig& cfg) {
  cfg.validate();
  if (inputs.empty()) throw EmptyDataset("train: empty dataset");
  if (inputs.size() != labels.size())
    throw ShapeMismatch("train: inputs/labels size mismatch");
  const auto n = static_cast<int>(inputs.size());
  std::vector<int> class_idx(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i)
    class_idx[i] = label_to_class_index(labels[i], net.n_classes);

  Rng rng(cfg.seed);
  std::vector<int> order(inputs.size());
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  rng.shuffle(order);
  const int n_val = std::clamp(
      static_cast<int>(std::lround(cfg.validation_fraction * n)), 0, n - 1);
  std::vector<int> val_idx(order.begin(), order.begin() + n_val);
  std::vector<int> train_idx(order.begin() + n_val, order.end());

  // momentum buffers and reusable workspaces
  Gradients<Scalar> velocity, grad;
  velocity.resize_like(net);
  velocity.set_zero();
  grad.resize_like(net);
  std::vector<Gradients<Scalar>> slots;
  std::vector<Tape<Scalar>> tapes;

  auto evaluate = [&](const std::vector<int>& idx, double& out_loss,
                      double& out_acc) {
    if (idx.empty()) {
      out_loss = 0.0;
      out_acc = 0.0;
      return;
    }
    std::vector<double> losses(idx.size());
    std::vector<int> hits(idx.size());
    parallel_for_chunks(
        static_cast<int>(idx.size()), [&](int, int begin, int end) {
          Tape<Scalar> tape;
          for (int i = begin; i < end; ++i) {
            const auto s = static_cast<std::size_t>(idx[static_cast<std::size_t>(i)]);
            forward_sample(net, inputs[s], tape);
            const int truth = class_idx[s];
            losses[static_cast<std::size_t>(i)] = -std::log(
                std::max(static_cast<double>(tape.probs(truth)), kProbFloor));
            Eigen::Index am = 0;
            tape.probs.maxCoeff(&am);
            hits[static_cast<std::size_t>(i)] = (am == truth) ? 1 : 0;
          }
        });
    double total = 0.0;
    long correct = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      total += losses[i];
      correct += hits[i];
    }
    out_loss = total / static_cast<double>(idx.size());
    out_acc = static_cast<double>(correct) / static_cast<double>(idx.size());
  };

  const bool early_stop = cfg.early_stop_patience > 0 && !val_idx.empty();
  double best_val = std::numeric_limits<double>::infinity();
  int bad_epochs = 0;
  TrainResult result;
  std::vector<Matrix<Scalar>> best_weights;
  std::vector<Vector<Scalar>> best_bias;

  std::vector<Matrix<Scalar>> batch;
  std::vector<int> batch_labels;
  const Scalar lr = static_cast<Scalar>(cfg.learning_rate);
  const Scalar mom = static_cast<Scalar>(cfg.momentum);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng.shuffle(train_idx);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < train_idx.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t stop = std::min(
          train_idx.size(), start + static_cast<std::size_t>(cfg.batch_size));
      batch.clear();
      batch_labels.clear();
      for (std::size_t i = start; i < stop; ++i) {
        batch.push_back(inputs[static_cast<std::size_t>(train_idx[i])]);
        batch_labels.push_back(class_idx[static_cast<std::size_t>(train_idx[i])]);
      }
      Matrix<Scalar> probs(static_cast<Eigen::Index>(batch.size()),
                           net.n_classes);
      detail::accumulate_batch(net, batch, batch_labels, slots, tapes, &probs,
                               grad);
      for (std::size_t i = 0; i < batch.size(); ++i)
        epoch_loss -= std::log(std::max(
            static_cast<double>(probs(static_cast<Eigen::Index>(i),
                                      batch_labels[i])),
            kProbFloor));
      for (std::size_t l = 0; l < net.layers.size(); ++l) {
        auto& layer = net.layers[l];
        if (!layer.parametric()) continue;
        velocity.weights[l] = mom * velocity.weights[l] - lr * grad.weights[l];
        velocity.bias[l] = mom * velocity.bias[l] - lr * grad.bias[l];
        layer.weights += velocity.weights[l];
        layer.bias += velocity.bias[l];
      }
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss =
        train_idx.empty()
            ? 0.0
            : epoch_loss / static_cast<double>(train_idx.size());
    evaluate(val_idx, stats.val_loss, stats.val_accuracy);
    result.history.push_back(stats);

    if (early_stop) {
      if (stats.val_loss < best_val) {
        best_val = stats.val_loss;
        bad_epochs = 0;
        result.best_epoch = epoch;
        best_weights.clear();
        best_bias.clear();
        for (const auto& layer : net.layers) {
          best_weights.push_back(layer.weights);
          best_bias.push_back(layer.bias);
        }
      } else if (++bad_epochs >= cfg.early_stop_patience) {
        break;
      }
    }
  }

  if (early_stop && !best_weights.empty()) {
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
      net.layers[l].weights = best_weights[l];
      net.layers[l].bias = best_bias[l];
    }
  }
  return result;
}

template <typename Scalar>
struct Prediction {
  Vector<Scalar> probabilities;
  int label = 0;
};

//! Probabilities plus the argmax label under the fixed class mapping.
template <typename Scalar>
Prediction<Scalar> predict(const Network<Scalar>& net, const NepdfMatrix& m) {
  if (!m.normalized)
    throw ShapeMismatch("predict: matrix must be normalized");
  Tape<Scalar> tape;
  Prediction<Scalar> pred;
  pred.probabilities =
      forward_sample(net, m.values.template cast<Scalar>().eval(), tape);
  Eigen::Index am = 0;
  pred.probabilities.maxCoeff(&am);
  pred.label = class_index_to_label(static_cast<int>(am), net.n_classes);
  return pred;
}

}  // namespace nepdf
