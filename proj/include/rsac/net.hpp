// Copyright 2026 The rsac Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RSAC_NET_HPP
#define RSAC_NET_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "rsac/observation.hpp"
#include "rsac/seeding.hpp"

namespace rsac {

enum class Head { Softmax, Linear, Softplus };
enum class Trunk { Conv, Dense };

/// Fixed function-approximator family. The Conv trunk is the full
/// architecture (32x3x3, 64x2x2, 64x2x2 convolutions with stride one and
/// same padding, then two 256-unit dense layers); the Dense trunk is the
/// reduced one (two 64-unit dense layers) used for fast runs. Both end in
/// one output unit per action with a head chosen per role: softmax for the
/// actor, linear for critics, softplus for critics trained in exponentiated
/// value space.
struct ArchitectureSpec {
  Trunk trunk = Trunk::Conv;
  Head head = Head::Linear;
  int in_channels = 3;
  int in_h = 5;
  int in_w = 5;
  int n_actions = 5;
  int dense_hidden = 64;  // hidden width of the reduced trunk
  double l2_coefficient = 1e-4;

  int input_size() const { return in_channels * in_h * in_w; }
};

namespace nn {

struct DenseLayer {
  int in = 0, out = 0;
  bool relu = false;
  int w_off = 0, b_off = 0;  // offsets into the flat parameter vector
};

struct ConvLayer {
  int cin = 0, cout = 0, k = 0;
  bool relu = false;
  int h = 0, w = 0;  // spatial size, preserved by same padding / stride 1
  int w_off = 0, b_off = 0;

  int patch_rows() const { return cin * k * k; }
  int pad_before() const { return (k - 1) / 2; }
};

using Layer = std::variant<DenseLayer, ConvLayer>;

inline double softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
  return x > 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

}  // namespace nn

/// Cached intermediates of one forward pass; owned by the caller so that
/// forward() itself stays pure.
struct Workspace {
  std::vector<Eigen::MatrixXd> activations;  // [0] = input, [i+1] = layer i output
  std::vector<Eigen::MatrixXd> patches;      // im2col matrix per conv layer
  Eigen::MatrixXd logits;                    // pre-head outputs
  Eigen::MatrixXd output;                    // head outputs
};

class Network {
 public:
  Network() = default;

  explicit Network(const ArchitectureSpec& spec) : spec_(spec) {
    int off = 0;
    auto add_conv = [&](int cin, int cout, int k) {
      nn::ConvLayer l{cin, cout, k, true, spec.in_h, spec.in_w, off, 0};
      off += cout * l.patch_rows();
      l.b_off = off;
      off += cout;
      layers_.push_back(l);
    };
    auto add_dense = [&](int in, int out, bool relu) {
      nn::DenseLayer l{in, out, relu, off, 0};
      off += out * in;
      l.b_off = off;
      off += out;
      layers_.push_back(l);
    };
    if (spec.trunk == Trunk::Conv) {
      add_conv(spec.in_channels, 32, 3);
      add_conv(32, 64, 2);
      add_conv(64, 64, 2);
      add_dense(64 * spec.in_h * spec.in_w, 256, true);
      add_dense(256, 256, true);
      add_dense(256, spec.n_actions, false);
    } else {
      add_dense(spec.input_size(), spec.dense_hidden, true);
      add_dense(spec.dense_hidden, spec.dense_hidden, true);
      add_dense(spec.dense_hidden, spec.n_actions, false);
    }
    params_ = Eigen::VectorXd::Zero(off);
  }

  const ArchitectureSpec& spec() const { return spec_; }
  Eigen::Index n_params() const { return params_.size(); }
  Eigen::VectorXd& params() { return params_; }
  const Eigen::VectorXd& params() const { return params_; }

  /// Uniform fan-in initialization: every weight and bias of a layer drawn
  /// from U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
  void init_params(std::uint64_t seed) {
    Rng rng(seed);
    for (const auto& layer : layers_) {
      std::visit(
          [&](const auto& l) {
            int fan_in;
            int count;
            if constexpr (std::is_same_v<std::decay_t<decltype(l)>, nn::DenseLayer>) {
              fan_in = l.in;
              count = l.out * l.in + l.out;
            } else {
              fan_in = l.patch_rows();
              count = l.cout * l.patch_rows() + l.cout;
            }
            const double s = 1.0 / std::sqrt(static_cast<double>(fan_in));
            for (int i = 0; i < count; ++i)
              params_[l.w_off + i] = next_uniform_in(rng, -s, s);
          },
          layer);
    }
  }

  /// Parameter range (offset, length) of the output layer, weights + bias.
  std::pair<int, int> output_layer_range() const {
    const auto& l = std::get<nn::DenseLayer>(layers_.back());
    return {l.w_off, l.out * l.in + l.out};
  }

  /// input: (input_size x batch), one observation per column, channel-major.
  /// Returns head outputs (n_actions x batch).
  const Eigen::MatrixXd& forward(const Eigen::MatrixXd& input, Workspace& ws) const {
    if (input.rows() != spec_.input_size())
      throw std::invalid_argument("network input has wrong feature count");
    const Eigen::Index batch = input.cols();
    ws.activations.assign(layers_.size() + 1, {});
    ws.patches.assign(layers_.size(), {});
    ws.activations[0] = input;
    for (size_t i = 0; i < layers_.size(); ++i) {
      const auto& act = ws.activations[i];
      std::visit(
          [&](const auto& l) {
            using L = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<L, nn::DenseLayer>) {
              auto W = weight_map(l.w_off, l.out, l.in);
              auto b = bias_map(l.b_off, l.out);
              Eigen::MatrixXd y = W * act;
              y.colwise() += b;
              if (l.relu) y = y.cwiseMax(0.0);
              ws.activations[i + 1] = std::move(y);
            } else {
              Eigen::MatrixXd& P = ws.patches[i];
              im2col(l, act, P);
              auto W = weight_map(l.w_off, l.cout, l.patch_rows());
              auto b = bias_map(l.b_off, l.cout);
              Eigen::MatrixXd y = W * P;  // (cout x hw*batch)
              y.colwise() += b;
              if (l.relu) y = y.cwiseMax(0.0);
              // scatter (cout x hw*batch) -> (cout*hw x batch), channel-major
              const int hw = l.h * l.w;
              Eigen::MatrixXd out(static_cast<Eigen::Index>(l.cout) * hw, batch);
              for (Eigen::Index bcol = 0; bcol < batch; ++bcol)
                for (int p = 0; p < hw; ++p)
                  for (int co = 0; co < l.cout; ++co)
                    out(static_cast<Eigen::Index>(co) * hw + p, bcol) =
                        y(co, bcol * hw + p);
              ws.activations[i + 1] = std::move(out);
            }
          },
          layers_[i]);
    }
    ws.logits = ws.activations.back();
    ws.output = apply_head(ws.logits);
    return ws.output;
  }

  Eigen::MatrixXd forward(const Eigen::MatrixXd& input) const {
    Workspace ws;
    forward(input, ws);
    return ws.output;
  }

  /// Accumulates d(loss)/d(params) into `grad` given d(loss)/d(head output).
  /// Excludes the L2 penalty term; see add_l2_gradient.
  void backward(const Eigen::MatrixXd& grad_output, const Workspace& ws,
                Eigen::VectorXd& grad) const {
    if (grad.size() != params_.size()) throw std::invalid_argument("grad size mismatch");
    Eigen::MatrixXd delta = head_backward(grad_output, ws);
    const Eigen::Index batch = ws.activations[0].cols();
    for (size_t idx = layers_.size(); idx-- > 0;) {
      const auto& act_in = ws.activations[idx];
      std::visit(
          [&](const auto& l) {
            using L = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<L, nn::DenseLayer>) {
              if (l.relu) {
                const auto& act_out = ws.activations[idx + 1];
                delta = delta.cwiseProduct(
                    (act_out.array() > 0.0).cast<double>().matrix());
              }
              grad_weight_map(grad, l.w_off, l.out, l.in).noalias() +=
                  delta * act_in.transpose();
              grad_bias_map(grad, l.b_off, l.out) += delta.rowwise().sum();
              auto W = weight_map(l.w_off, l.out, l.in);
              delta = (W.transpose() * delta).eval();
            } else {
              const int hw = l.h * l.w;
              // gather (cout*hw x batch) -> (cout x hw*batch)
              Eigen::MatrixXd dY(l.cout, static_cast<Eigen::Index>(hw) * batch);
              const auto& act_out = ws.activations[idx + 1];
              for (Eigen::Index bcol = 0; bcol < batch; ++bcol)
                for (int p = 0; p < hw; ++p)
                  for (int co = 0; co < l.cout; ++co) {
                    double g = delta(static_cast<Eigen::Index>(co) * hw + p, bcol);
                    if (l.relu &&
                        act_out(static_cast<Eigen::Index>(co) * hw + p, bcol) <= 0.0)
                      g = 0.0;
                    dY(co, bcol * hw + p) = g;
                  }
              const Eigen::MatrixXd& P = ws.patches[idx];
              grad_weight_map(grad, l.w_off, l.cout, l.patch_rows()).noalias() +=
                  dY * P.transpose();
              grad_bias_map(grad, l.b_off, l.cout) += dY.rowwise().sum();
              auto W = weight_map(l.w_off, l.cout, l.patch_rows());
              Eigen::MatrixXd dP = W.transpose() * dY;
              delta = col2im(l, dP, batch);
            }
          },
          layers_[idx]);
    }
  }

 private:
  using ConstMap = Eigen::Map<const Eigen::MatrixXd>;
  using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;

  ConstMap weight_map(int off, int rows, int cols) const {
    return ConstMap(params_.data() + off, rows, cols);
  }
  ConstVecMap bias_map(int off, int rows) const {
    return ConstVecMap(params_.data() + off, rows);
  }
  static Eigen::Map<Eigen::MatrixXd> grad_weight_map(Eigen::VectorXd& g, int off, int rows,
                                                     int cols) {
    return Eigen::Map<Eigen::MatrixXd>(g.data() + off, rows, cols);
  }
  static Eigen::Map<Eigen::VectorXd> grad_bias_map(Eigen::VectorXd& g, int off, int rows) {
    return Eigen::Map<Eigen::VectorXd>(g.data() + off, rows);
  }

  /// Lays the receptive field of every output pixel out as one column:
  /// (cin*k*k) x (h*w*batch), zero-padded at the borders.
  static void im2col(const nn::ConvLayer& l, const Eigen::MatrixXd& act,
                     Eigen::MatrixXd& P) {
    const Eigen::Index batch = act.cols();
    const int hw = l.h * l.w;
    P.setZero(l.patch_rows(), static_cast<Eigen::Index>(hw) * batch);
    const int pad = l.pad_before();
    for (Eigen::Index bcol = 0; bcol < batch; ++bcol)
      for (int py = 0; py < l.h; ++py)
        for (int px = 0; px < l.w; ++px) {
          const Eigen::Index col = bcol * hw + py * l.w + px;
          for (int ci = 0; ci < l.cin; ++ci)
            for (int dy = 0; dy < l.k; ++dy) {
              const int iy = py - pad + dy;
              if (iy < 0 || iy >= l.h) continue;
              for (int dx = 0; dx < l.k; ++dx) {
                const int ix = px - pad + dx;
                if (ix < 0 || ix >= l.w) continue;
                P((ci * l.k + dy) * l.k + dx, col) =
                    act(static_cast<Eigen::Index>(ci) * hw + iy * l.w + ix, bcol);
              }
            }
        }
  }

  /// Adjoint of im2col: accumulates patch gradients back onto input pixels.
  static Eigen::MatrixXd col2im(const nn::ConvLayer& l, const Eigen::MatrixXd& dP,
                                Eigen::Index batch) {
    const int hw = l.h * l.w;
    Eigen::MatrixXd dA = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(l.cin) * hw, batch);
    const int pad = l.pad_before();
    for (Eigen::Index bcol = 0; bcol < batch; ++bcol)
      for (int py = 0; py < l.h; ++py)
        for (int px = 0; px < l.w; ++px) {
          const Eigen::Index col = bcol * hw + py * l.w + px;
          for (int ci = 0; ci < l.cin; ++ci)
            for (int dy = 0; dy < l.k; ++dy) {
              const int iy = py - pad + dy;
              if (iy < 0 || iy >= l.h) continue;
              for (int dx = 0; dx < l.k; ++dx) {
                const int ix = px - pad + dx;
                if (ix < 0 || ix >= l.w) continue;
                dA(static_cast<Eigen::Index>(ci) * hw + iy * l.w + ix, bcol) +=
                    dP((ci * l.k + dy) * l.k + dx, col);
              }
            }
        }
    return dA;
  }

  Eigen::MatrixXd apply_head(const Eigen::MatrixXd& z) const {
    switch (spec_.head) {
      case Head::Linear:
        return z;
      case Head::Softplus:
        return z.unaryExpr([](double x) { return nn::softplus(x); });
      case Head::Softmax: {
        Eigen::MatrixXd out(z.rows(), z.cols());
        for (Eigen::Index c = 0; c < z.cols(); ++c) {
          Eigen::VectorXd col = z.col(c);
          const double m = col.maxCoeff();
          col = (col.array() - m).exp();
          out.col(c) = col / col.sum();
        }
        return out;
      }
    }
    throw std::logic_error("unreachable");
  }

  Eigen::MatrixXd head_backward(const Eigen::MatrixXd& grad_output,
                                const Workspace& ws) const {
    switch (spec_.head) {
      case Head::Linear:
        return grad_output;
      case Head::Softplus:
        return grad_output.cwiseProduct(
            ws.logits.unaryExpr([](double x) { return nn::sigmoid(x); }));
      case Head::Softmax: {
        Eigen::MatrixXd dz(grad_output.rows(), grad_output.cols());
        for (Eigen::Index c = 0; c < grad_output.cols(); ++c) {
          const auto p = ws.output.col(c);
          const double dot = p.dot(grad_output.col(c));
          dz.col(c) = p.cwiseProduct(
              (grad_output.col(c).array() - dot).matrix());
        }
        return dz;
      }
    }
    throw std::logic_error("unreachable");
  }

  ArchitectureSpec spec_;
  std::vector<nn::Layer> layers_;
  Eigen::VectorXd params_;
};

/// L2 penalty used by all trainers: l2 * ||params||^2, gradient 2*l2*params.
inline double l2_penalty(const Network& net) {
  return net.spec().l2_coefficient * net.params().squaredNorm();
}

inline void add_l2_gradient(const Network& net, Eigen::VectorXd& grad) {
  grad += 2.0 * net.spec().l2_coefficient * net.params();
}

inline Eigen::MatrixXd observation_column(const Observation& o) {
  Eigen::MatrixXd X(o.size(), 1);
  for (int f = 0; f < o.size(); ++f) X(f, 0) = o.data[static_cast<size_t>(f)];
  return X;
}

}  // namespace rsac

#endif  // RSAC_NET_HPP
