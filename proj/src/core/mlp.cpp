// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "core/mlp.hpp"

#include <cmath>

#include "core/error.hpp"

namespace touchbench {
namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Numerically stable BCE on the logit: softplus(z) - t*z.
double bce_on_logit(double z, double t) {
  const double softplus = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
  return softplus - t * z;
}

using Batch = std::vector<std::vector<double>>;

}  // namespace

std::vector<double*> Mlp::parameter_ptrs() {
  std::vector<double*> out;
  for (auto& l : layers_) {
    for (auto& v : l.w) out.push_back(&v);
    for (auto& v : l.b) out.push_back(&v);
    if (l.has_bn) {
      for (auto& v : l.gamma) out.push_back(&v);
      for (auto& v : l.beta) out.push_back(&v);
    }
  }
  return out;
}

std::vector<const double*> Mlp::parameter_ptrs() const {
  std::vector<const double*> out;
  for (const auto& l : layers_) {
    for (const auto& v : l.w) out.push_back(&v);
    for (const auto& v : l.b) out.push_back(&v);
    if (l.has_bn) {
      for (const auto& v : l.gamma) out.push_back(&v);
      for (const auto& v : l.beta) out.push_back(&v);
    }
  }
  return out;
}

std::size_t Mlp::parameter_count() const { return parameter_ptrs().size(); }
double Mlp::get_parameter(std::size_t i) const { return *parameter_ptrs()[i]; }
void Mlp::set_parameter(std::size_t i, double v) { *parameter_ptrs()[i] = v; }

namespace {

// Per-layer forward context kept for the backward pass.
struct LayerCtx {
  Batch input;       // activations entering the linear op
  Batch z;           // linear output
  Batch xhat;        // normalized pre-activation (BN layers)
  std::vector<double> mu, var;  // batch statistics used (train mode)
  Batch h;           // post-BN (or z when no BN)
  Batch mask;        // dropout mask (inverted scaling), empty in eval mode
};

struct Grads {
  // Mirrors the parameter layout of Mlp::parameter_ptrs.
  std::vector<std::vector<double>> w, b, gamma, beta;
};

double forward_backward(Mlp& net, const Batch& x, const std::vector<double>& targets,
                        bool train_mode, Rng* dropout_rng, Grads* grads) {
  const std::size_t nb = x.size();
  const double inv_nb = 1.0 / static_cast<double>(nb);
  const auto& p = net.params_;

  std::vector<LayerCtx> ctx(net.layers_.size());
  Batch act = x;
  for (std::size_t li = 0; li < net.layers_.size(); ++li) {
    auto& l = net.layers_[li];
    auto& c = ctx[li];
    c.input = act;

    c.z.assign(nb, std::vector<double>(l.out, 0.0));
    for (std::size_t b = 0; b < nb; ++b)
      for (std::size_t o = 0; o < l.out; ++o) {
        double s = l.b[o];
        const double* wrow = &l.w[o * l.in];
        for (std::size_t i = 0; i < l.in; ++i) s += wrow[i] * c.input[b][i];
        c.z[b][o] = s;
      }

    if (l.has_bn) {
      c.mu.assign(l.out, 0.0);
      c.var.assign(l.out, 0.0);
      if (train_mode) {
        for (std::size_t o = 0; o < l.out; ++o) {
          double m = 0.0;
          for (std::size_t b = 0; b < nb; ++b) m += c.z[b][o];
          m *= inv_nb;
          double v = 0.0;
          for (std::size_t b = 0; b < nb; ++b) v += (c.z[b][o] - m) * (c.z[b][o] - m);
          v *= inv_nb;
          c.mu[o] = m;
          c.var[o] = v;
          l.run_mean[o] = p.bn_momentum * l.run_mean[o] + (1.0 - p.bn_momentum) * m;
          l.run_var[o] = p.bn_momentum * l.run_var[o] + (1.0 - p.bn_momentum) * v;
        }
      } else {
        c.mu = l.run_mean;
        c.var = l.run_var;
      }
      c.xhat.assign(nb, std::vector<double>(l.out, 0.0));
      c.h.assign(nb, std::vector<double>(l.out, 0.0));
      for (std::size_t o = 0; o < l.out; ++o) {
        const double istd = 1.0 / std::sqrt(c.var[o] + p.bn_eps);
        for (std::size_t b = 0; b < nb; ++b) {
          c.xhat[b][o] = (c.z[b][o] - c.mu[o]) * istd;
          c.h[b][o] = l.gamma[o] * c.xhat[b][o] + l.beta[o];
        }
      }
    } else {
      c.h = c.z;
    }

    const bool is_output = li + 1 == net.layers_.size();
    if (is_output) {
      act = c.h;
      break;
    }

    // ReLU then dropout.
    Batch next(nb, std::vector<double>(l.out, 0.0));
    const bool use_dropout = train_mode && dropout_rng && p.dropout > 0.0;
    if (use_dropout) c.mask.assign(nb, std::vector<double>(l.out, 0.0));
    const double keep = 1.0 - p.dropout;
    for (std::size_t b = 0; b < nb; ++b)
      for (std::size_t o = 0; o < l.out; ++o) {
        double v = c.h[b][o] > 0.0 ? c.h[b][o] : 0.0;
        if (use_dropout) {
          const double m = dropout_rng->uniform() < keep ? 1.0 / keep : 0.0;
          c.mask[b][o] = m;
          v *= m;
        }
        next[b][o] = v;
      }
    act = std::move(next);
  }

  // act holds the output logits (nb x 1).
  double loss = 0.0;
  for (std::size_t b = 0; b < nb; ++b) loss += bce_on_logit(act[b][0], targets[b]);
  loss *= inv_nb;
  if (!grads) return loss;

  grads->w.resize(net.layers_.size());
  grads->b.resize(net.layers_.size());
  grads->gamma.resize(net.layers_.size());
  grads->beta.resize(net.layers_.size());

  // dL/dz of the output layer.
  Batch delta(nb, std::vector<double>(1, 0.0));
  for (std::size_t b = 0; b < nb; ++b)
    delta[b][0] = (sigmoid(act[b][0]) - targets[b]) * inv_nb;

  for (std::size_t li = net.layers_.size(); li-- > 0;) {
    auto& l = net.layers_[li];
    auto& c = ctx[li];
    const bool is_output = li + 1 == net.layers_.size();

    // `delta` currently holds dL/d(layer output after activation+dropout)
    // for hidden layers, or dL/dz for the output layer.
    Batch dz;
    if (is_output) {
      dz = delta;
    } else {
      // Through dropout and ReLU to dL/dh.
      Batch dh = delta;
      if (!c.mask.empty())
        for (std::size_t b = 0; b < nb; ++b)
          for (std::size_t o = 0; o < l.out; ++o) dh[b][o] *= c.mask[b][o];
      for (std::size_t b = 0; b < nb; ++b)
        for (std::size_t o = 0; o < l.out; ++o)
          if (c.h[b][o] <= 0.0) dh[b][o] = 0.0;

      // Through batch norm to dL/dz.
      dz.assign(nb, std::vector<double>(l.out, 0.0));
      grads->gamma[li].assign(l.out, 0.0);
      grads->beta[li].assign(l.out, 0.0);
      for (std::size_t o = 0; o < l.out; ++o) {
        const double istd = 1.0 / std::sqrt(c.var[o] + p.bn_eps);
        double dgamma = 0.0, dbeta = 0.0;
        for (std::size_t b = 0; b < nb; ++b) {
          dgamma += dh[b][o] * c.xhat[b][o];
          dbeta += dh[b][o];
        }
        grads->gamma[li][o] = dgamma;
        grads->beta[li][o] = dbeta;
        if (train_mode) {
          // Batch statistics depend on z.
          double sum_dxhat = 0.0, sum_dxhat_xhat = 0.0;
          for (std::size_t b = 0; b < nb; ++b) {
            const double dxhat = dh[b][o] * l.gamma[o];
            sum_dxhat += dxhat;
            sum_dxhat_xhat += dxhat * c.xhat[b][o];
          }
          for (std::size_t b = 0; b < nb; ++b) {
            const double dxhat = dh[b][o] * l.gamma[o];
            dz[b][o] = istd * (dxhat - inv_nb * (sum_dxhat + c.xhat[b][o] * sum_dxhat_xhat));
          }
        } else {
          // Running statistics are constants.
          for (std::size_t b = 0; b < nb; ++b) dz[b][o] = dh[b][o] * l.gamma[o] * istd;
        }
      }
    }

    grads->w[li].assign(l.w.size(), 0.0);
    grads->b[li].assign(l.b.size(), 0.0);
    for (std::size_t b = 0; b < nb; ++b)
      for (std::size_t o = 0; o < l.out; ++o) {
        const double d = dz[b][o];
        grads->b[li][o] += d;
        double* gw = &grads->w[li][o * l.in];
        for (std::size_t i = 0; i < l.in; ++i) gw[i] += d * c.input[b][i];
      }

    if (li > 0) {
      Batch prev(nb, std::vector<double>(l.in, 0.0));
      for (std::size_t b = 0; b < nb; ++b)
        for (std::size_t o = 0; o < l.out; ++o) {
          const double d = dz[b][o];
          const double* wrow = &l.w[o * l.in];
          for (std::size_t i = 0; i < l.in; ++i) prev[b][i] += d * wrow[i];
        }
      delta = std::move(prev);
    }
  }

  return loss;
}

std::vector<double> flatten_grads(const Mlp& net, const Grads& g) {
  std::vector<double> out;
  for (std::size_t li = 0; li < net.layers_.size(); ++li) {
    out.insert(out.end(), g.w[li].begin(), g.w[li].end());
    out.insert(out.end(), g.b[li].begin(), g.b[li].end());
    if (net.layers_[li].has_bn) {
      out.insert(out.end(), g.gamma[li].begin(), g.gamma[li].end());
      out.insert(out.end(), g.beta[li].begin(), g.beta[li].end());
    }
  }
  return out;
}

}  // namespace

Mlp Mlp::train(const Matrix& x, const std::vector<int>& y, const MlpParams& params,
               const Rng& rng) {
  const std::size_t n = x.size();
  if (n == 0 || y.size() != n) throw PreconditionError("mlp: empty or inconsistent training set");
  bool has_pos = false, has_neg = false;
  for (int label : y) (label == 1 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) throw PreconditionError("SingleClassTraining");
  for (const auto& row : x)
    for (double v : row)
      if (!std::isfinite(v)) throw DataError("NonFiniteFeature in mlp training set");

  Mlp net;
  net.params_ = params;
  net.dim_ = x.front().size();

  Rng init_rng = rng.fork("init");
  std::size_t in = net.dim_;
  std::vector<std::size_t> sizes = params.hidden;
  sizes.push_back(1);
  for (std::size_t li = 0; li < sizes.size(); ++li) {
    Layer l;
    l.in = in;
    l.out = sizes[li];
    l.w.resize(l.out * l.in);
    const double scale = std::sqrt(2.0 / static_cast<double>(l.in));
    for (auto& w : l.w) w = init_rng.normal() * scale;
    l.b.assign(l.out, 0.0);
    l.has_bn = li + 1 < sizes.size();
    if (l.has_bn) {
      l.gamma.assign(l.out, 1.0);
      l.beta.assign(l.out, 0.0);
      l.run_mean.assign(l.out, 0.0);
      l.run_var.assign(l.out, 1.0);
    }
    net.layers_.push_back(std::move(l));
    in = sizes[li];
  }

  std::vector<double> targets(n);
  for (std::size_t i = 0; i < n; ++i) targets[i] = y[i] == 1 ? 1.0 : 0.0;

  // Adam state over the flat parameter layout.
  const std::size_t np = net.parameter_count();
  std::vector<double> m(np, 0.0), v(np, 0.0);
  std::size_t step = 0;

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  Rng shuffle_rng = rng.fork("shuffle");
  Rng dropout_rng = rng.fork("dropout");
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    for (std::size_t start = 0; start < n; start += params.batch_size) {
      const std::size_t end = std::min(n, start + params.batch_size);
      Batch bx;
      std::vector<double> bt;
      bx.reserve(end - start);
      bt.reserve(end - start);
      for (std::size_t i = start; i < end; ++i) {
        bx.push_back(x[order[i]]);
        bt.push_back(targets[order[i]]);
      }
      Grads grads;
      forward_backward(net, bx, bt, /*train_mode=*/true, &dropout_rng, &grads);
      const auto flat = flatten_grads(net, grads);

      ++step;
      const double bc1 = 1.0 - std::pow(params.beta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(params.beta2, static_cast<double>(step));
      auto ptrs = net.parameter_ptrs();
      for (std::size_t i = 0; i < np; ++i) {
        m[i] = params.beta1 * m[i] + (1.0 - params.beta1) * flat[i];
        v[i] = params.beta2 * v[i] + (1.0 - params.beta2) * flat[i] * flat[i];
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        *ptrs[i] -= params.learning_rate * mhat / (std::sqrt(vhat) + params.adam_eps);
      }
    }
  }
  return net;
}

double Mlp::score(const std::vector<double>& x) const {
  if (x.size() != dim_) throw PreconditionError("DimensionMismatch in mlp score");
  std::vector<double> act = x;
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    const auto& l = layers_[li];
    std::vector<double> z(l.out, 0.0);
    for (std::size_t o = 0; o < l.out; ++o) {
      double s = l.b[o];
      const double* wrow = &l.w[o * l.in];
      for (std::size_t i = 0; i < l.in; ++i) s += wrow[i] * act[i];
      z[o] = s;
    }
    if (l.has_bn) {
      for (std::size_t o = 0; o < l.out; ++o) {
        const double istd = 1.0 / std::sqrt(l.run_var[o] + params_.bn_eps);
        z[o] = l.gamma[o] * (z[o] - l.run_mean[o]) * istd + l.beta[o];
      }
    }
    if (li + 1 < layers_.size())
      for (auto& h : z) h = h > 0.0 ? h : 0.0;
    act = std::move(z);
  }
  return sigmoid(act[0]);
}

std::vector<double> Mlp::score(const Matrix& x) const {
  std::vector<double> out;
  out.reserve(x.size());
  for (const auto& row : x) out.push_back(score(row));
  return out;
}

double Mlp::loss_eval_mode(const Matrix& x, const std::vector<int>& y) const {
  Mlp copy = *this;
  std::vector<double> t(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) t[i] = y[i] == 1 ? 1.0 : 0.0;
  return forward_backward(copy, x, t, /*train_mode=*/false, nullptr, nullptr);
}

std::vector<double> Mlp::grad_eval_mode(const Matrix& x, const std::vector<int>& y) const {
  Mlp copy = *this;
  std::vector<double> t(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) t[i] = y[i] == 1 ? 1.0 : 0.0;
  Grads grads;
  forward_backward(copy, x, t, /*train_mode=*/false, nullptr, &grads);
  return flatten_grads(copy, grads);
}

}  // namespace touchbench
