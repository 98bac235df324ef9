#pragma once

// Templated forward/backward engine behind the predictor's public API.
// T is float or double; all loops are plain scalar arithmetic so results
// are reproducible across platforms.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "svt/predictor.hpp"

namespace svt::engine {

constexpr int kOutputDim = 2 * kPredictedStepCount;

template <typename T>
struct PolylineTrace {
  // Per layer: rectified encodings (n x half), argmax row per channel,
  // concatenated outputs (n x hidden).
  std::vector<std::vector<T>> enc;
  std::vector<std::vector<int>> enc_argmax;
  std::vector<std::vector<T>> out;
  std::vector<T> feature;        // hidden, final max over vectors
  std::vector<int> feature_argmax;
};

template <typename T>
struct ForwardTrace {
  std::vector<PolylineTrace<T>> polys;
  std::vector<T> query, att;                 // hidden
  std::vector<std::vector<T>> keys, values;  // per polyline, hidden
  std::vector<std::vector<T>> weights;       // per head, per polyline
  std::vector<T> dec_hidden;                 // hidden, post-rectifier
  std::vector<T> output;                     // kOutputDim
};

// y = W x + b, W row-major (rows x cols).
template <typename T, typename In>
inline void affine(const T* w, const T* b, const In* x, int rows, int cols,
                   T* y) {
  for (int r = 0; r < rows; ++r) {
    T acc = b[r];
    const T* wr = w + static_cast<std::size_t>(r) * cols;
    for (int c = 0; c < cols; ++c) acc += wr[c] * static_cast<T>(x[c]);
    y[r] = acc;
  }
}

template <typename T>
void encode_polyline_trace(const ParamLayout& lay, const T* params,
                           const double* features, int n,
                           PolylineTrace<T>& trace) {
  trace.enc.assign(lay.layers, {});
  trace.enc_argmax.assign(lay.layers, {});
  trace.out.assign(lay.layers, {});
  const int hidden = lay.hidden;
  const int half = lay.half;
  for (int l = 0; l < lay.layers; ++l) {
    const int in_dim = lay.sub_in[l];
    const T* w = params + lay.sub_w[l];
    const T* b = params + lay.sub_b[l];
    auto& enc = trace.enc[l];
    enc.resize(static_cast<std::size_t>(n) * half);
    for (int i = 0; i < n; ++i) {
      T* row = enc.data() + static_cast<std::size_t>(i) * half;
      if (l == 0) {
        affine(w, b, features + static_cast<std::size_t>(i) * in_dim, half,
               in_dim, row);
      } else {
        affine(w, b,
               trace.out[l - 1].data() + static_cast<std::size_t>(i) * in_dim,
               half, in_dim, row);
      }
      for (int r = 0; r < half; ++r) {
        if (row[r] < T(0)) row[r] = T(0);
      }
    }
    auto& argmax = trace.enc_argmax[l];
    argmax.assign(half, 0);
    for (int r = 0; r < half; ++r) {
      int best = 0;
      for (int i = 1; i < n; ++i) {
        if (enc[static_cast<std::size_t>(i) * half + r] >
            enc[static_cast<std::size_t>(best) * half + r]) {
          best = i;
        }
      }
      argmax[r] = best;
    }
    auto& out = trace.out[l];
    out.resize(static_cast<std::size_t>(n) * hidden);
    for (int i = 0; i < n; ++i) {
      T* row = out.data() + static_cast<std::size_t>(i) * hidden;
      const T* erow = enc.data() + static_cast<std::size_t>(i) * half;
      for (int r = 0; r < half; ++r) {
        row[r] = erow[r];
        row[half + r] = enc[static_cast<std::size_t>(argmax[r]) * half + r];
      }
    }
  }
  // Final polyline feature: element-wise max over the last layer's rows.
  trace.feature.resize(hidden);
  trace.feature_argmax.assign(hidden, 0);
  const auto& last = trace.out[lay.layers - 1];
  for (int c = 0; c < hidden; ++c) {
    int best = 0;
    for (int i = 1; i < n; ++i) {
      if (last[static_cast<std::size_t>(i) * hidden + c] >
          last[static_cast<std::size_t>(best) * hidden + c]) {
        best = i;
      }
    }
    trace.feature_argmax[c] = best;
    trace.feature[c] = last[static_cast<std::size_t>(best) * hidden + c];
  }
}

template <typename T>
void forward_trace(const ParamLayout& lay, const T* params,
                   const CompiledScene& scene, ForwardTrace<T>& trace) {
  const int hidden = lay.hidden;
  const std::size_t n_polys = scene.polylines.size();
  trace.polys.resize(n_polys);
  for (std::size_t p = 0; p < n_polys; ++p) {
    encode_polyline_trace(lay, params, scene.polylines[p].data(),
                          scene.vector_counts[p], trace.polys[p]);
  }

  // Global interaction: single-layer scaled dot-product self-attention,
  // read out at the Ego node.
  trace.query.resize(hidden);
  affine(params + lay.att_wq, params + lay.att_bq,
         trace.polys[scene.ego_index].feature.data(), hidden, hidden,
         trace.query.data());
  trace.keys.assign(n_polys, std::vector<T>(hidden));
  trace.values.assign(n_polys, std::vector<T>(hidden));
  for (std::size_t p = 0; p < n_polys; ++p) {
    affine(params + lay.att_wk, params + lay.att_bk,
           trace.polys[p].feature.data(), hidden, hidden,
           trace.keys[p].data());
    affine(params + lay.att_wv, params + lay.att_bv,
           trace.polys[p].feature.data(), hidden, hidden,
           trace.values[p].data());
  }
  // Softmax and the attended readout accumulate in double even in the
  // single-precision engine: the sums are the only order-sensitive spots,
  // and double accumulation keeps the output invariant under polyline
  // reordering to well below the 1e-6 structural tolerance.
  const int dh = lay.head_dim;
  const double inv_sqrt_dh = 1.0 / std::sqrt(static_cast<double>(dh));
  trace.att.assign(hidden, T(0));
  trace.weights.assign(lay.heads, std::vector<T>(n_polys));
  std::vector<double> scores(n_polys);
  std::vector<double> att_acc(hidden, 0.0);
  for (int h = 0; h < lay.heads; ++h) {
    const int base = h * dh;
    double max_score = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < n_polys; ++p) {
      double s = 0.0;
      for (int d = 0; d < dh; ++d) {
        s += static_cast<double>(trace.query[base + d]) *
             static_cast<double>(trace.keys[p][base + d]);
      }
      s *= inv_sqrt_dh;
      scores[p] = s;
      if (s > max_score) max_score = s;
    }
    double denom = 0.0;
    for (std::size_t p = 0; p < n_polys; ++p) {
      scores[p] = std::exp(scores[p] - max_score);
      denom += scores[p];
    }
    for (std::size_t p = 0; p < n_polys; ++p) {
      const double w = scores[p] / denom;
      trace.weights[h][p] = static_cast<T>(w);
      for (int d = 0; d < dh; ++d) {
        att_acc[base + d] +=
            w * static_cast<double>(trace.values[p][base + d]);
      }
    }
  }
  for (int c = 0; c < hidden; ++c) {
    trace.att[c] = static_cast<T>(att_acc[c]);
  }

  // Decoder MLP.
  trace.dec_hidden.resize(hidden);
  affine(params + lay.dec_w1, params + lay.dec_b1, trace.att.data(), hidden,
         hidden, trace.dec_hidden.data());
  for (int r = 0; r < hidden; ++r) {
    if (trace.dec_hidden[r] < T(0)) trace.dec_hidden[r] = T(0);
  }
  trace.output.resize(kOutputDim);
  affine(params + lay.dec_w2, params + lay.dec_b2, trace.dec_hidden.data(),
         kOutputDim, hidden, trace.output.data());
}

// Mean over steps of the squared Euclidean displacement error.
template <typename T>
T output_loss(const ForwardTrace<T>& trace, const CompiledScene& scene) {
  T acc = T(0);
  for (int j = 0; j < kOutputDim; ++j) {
    const T diff = trace.output[j] - static_cast<T>(scene.target[j]);
    acc += diff * diff;
  }
  return acc / T(kPredictedStepCount);
}

// dgrad += dy^T x outer product and bias accumulation for y = W x + b.
template <typename T, typename In>
inline void affine_backward(const T* w, const T* dy, const In* x, int rows,
                            int cols, T* dw, T* db, T* dx) {
  for (int r = 0; r < rows; ++r) {
    const T g = dy[r];
    T* dwr = dw + static_cast<std::size_t>(r) * cols;
    const T* wr = w + static_cast<std::size_t>(r) * cols;
    for (int c = 0; c < cols; ++c) {
      dwr[c] += g * static_cast<T>(x[c]);
      if (dx != nullptr) dx[c] += wr[c] * g;
    }
    db[r] += g;
  }
}

template <typename T>
void backward_polyline(const ParamLayout& lay, const T* params,
                       const double* features, int n,
                       const PolylineTrace<T>& trace,
                       const std::vector<T>& dfeature, T* grad) {
  const int hidden = lay.hidden;
  const int half = lay.half;

  // Route the polyline-feature gradient to the argmax rows of the last
  // layer's output.
  std::vector<T> dout(static_cast<std::size_t>(n) * hidden, T(0));
  for (int c = 0; c < hidden; ++c) {
    dout[static_cast<std::size_t>(trace.feature_argmax[c]) * hidden + c] +=
        dfeature[c];
  }

  std::vector<T> denc, din;
  for (int l = lay.layers - 1; l >= 0; --l) {
    const int in_dim = lay.sub_in[l];
    const auto& enc = trace.enc[l];
    const auto& argmax = trace.enc_argmax[l];

    // Split the concatenation: direct half plus pooled half routed to the
    // argmax row per channel.
    denc.assign(static_cast<std::size_t>(n) * half, T(0));
    for (int i = 0; i < n; ++i) {
      const T* drow = dout.data() + static_cast<std::size_t>(i) * hidden;
      T* erow = denc.data() + static_cast<std::size_t>(i) * half;
      for (int r = 0; r < half; ++r) erow[r] += drow[r];
    }
    for (int r = 0; r < half; ++r) {
      T pooled = T(0);
      for (int i = 0; i < n; ++i) {
        pooled += dout[static_cast<std::size_t>(i) * hidden + half + r];
      }
      denc[static_cast<std::size_t>(argmax[r]) * half + r] += pooled;
    }
    // Rectifier mask.
    for (std::size_t idx = 0; idx < denc.size(); ++idx) {
      if (enc[idx] <= T(0)) denc[idx] = T(0);
    }

    const T* w = params + lay.sub_w[l];
    T* dw = grad + lay.sub_w[l];
    T* db = grad + lay.sub_b[l];
    if (l == 0) {
      for (int i = 0; i < n; ++i) {
        affine_backward(w, denc.data() + static_cast<std::size_t>(i) * half,
                        features + static_cast<std::size_t>(i) * in_dim, half,
                        in_dim, dw, db, static_cast<T*>(nullptr));
      }
    } else {
      din.assign(static_cast<std::size_t>(n) * in_dim, T(0));
      const auto& prev_out = trace.out[l - 1];
      for (int i = 0; i < n; ++i) {
        affine_backward(w, denc.data() + static_cast<std::size_t>(i) * half,
                        prev_out.data() + static_cast<std::size_t>(i) * in_dim,
                        half, in_dim, dw, db,
                        din.data() + static_cast<std::size_t>(i) * in_dim);
      }
      dout.swap(din);
    }
  }
}

template <typename T>
void backward_trace(const ParamLayout& lay, const T* params,
                    const CompiledScene& scene, const ForwardTrace<T>& trace,
                    T* grad) {
  const int hidden = lay.hidden;
  const std::size_t n_polys = scene.polylines.size();

  std::vector<T> dout(kOutputDim);
  for (int j = 0; j < kOutputDim; ++j) {
    dout[j] = T(2) * (trace.output[j] - static_cast<T>(scene.target[j])) /
              T(kPredictedStepCount);
  }

  // Decoder.
  std::vector<T> dd1(hidden, T(0));
  affine_backward(params + lay.dec_w2, dout.data(), trace.dec_hidden.data(),
                  kOutputDim, hidden, grad + lay.dec_w2, grad + lay.dec_b2,
                  dd1.data());
  for (int r = 0; r < hidden; ++r) {
    if (trace.dec_hidden[r] <= T(0)) dd1[r] = T(0);
  }
  std::vector<T> datt(hidden, T(0));
  affine_backward(params + lay.dec_w1, dd1.data(), trace.att.data(), hidden,
                  hidden, grad + lay.dec_w1, grad + lay.dec_b1, datt.data());

  // Attention.
  const int dh = lay.head_dim;
  const T inv_sqrt_dh = T(1) / std::sqrt(static_cast<T>(dh));
  std::vector<T> dquery(hidden, T(0));
  std::vector<std::vector<T>> dkeys(n_polys, std::vector<T>(hidden, T(0)));
  std::vector<std::vector<T>> dvalues(n_polys, std::vector<T>(hidden, T(0)));
  std::vector<T> dw_raw(n_polys), dscore(n_polys);
  for (int h = 0; h < lay.heads; ++h) {
    const int base = h * dh;
    const auto& w = trace.weights[h];
    for (std::size_t p = 0; p < n_polys; ++p) {
      T acc = T(0);
      for (int d = 0; d < dh; ++d) {
        dvalues[p][base + d] += w[p] * datt[base + d];
        acc += datt[base + d] * trace.values[p][base + d];
      }
      dw_raw[p] = acc;
    }
    T weighted_sum = T(0);
    for (std::size_t p = 0; p < n_polys; ++p) weighted_sum += w[p] * dw_raw[p];
    for (std::size_t p = 0; p < n_polys; ++p) {
      dscore[p] = w[p] * (dw_raw[p] - weighted_sum);
    }
    for (std::size_t p = 0; p < n_polys; ++p) {
      for (int d = 0; d < dh; ++d) {
        dquery[base + d] += dscore[p] * trace.keys[p][base + d] * inv_sqrt_dh;
        dkeys[p][base + d] += dscore[p] * trace.query[base + d] * inv_sqrt_dh;
      }
    }
  }

  // Projection layers, accumulating per-polyline feature gradients.
  std::vector<std::vector<T>> dfeatures(n_polys,
                                        std::vector<T>(hidden, T(0)));
  affine_backward(params + lay.att_wq, dquery.data(),
                  trace.polys[scene.ego_index].feature.data(), hidden, hidden,
                  grad + lay.att_wq, grad + lay.att_bq,
                  dfeatures[scene.ego_index].data());
  for (std::size_t p = 0; p < n_polys; ++p) {
    affine_backward(params + lay.att_wk, dkeys[p].data(),
                    trace.polys[p].feature.data(), hidden, hidden,
                    grad + lay.att_wk, grad + lay.att_bk, dfeatures[p].data());
    affine_backward(params + lay.att_wv, dvalues[p].data(),
                    trace.polys[p].feature.data(), hidden, hidden,
                    grad + lay.att_wv, grad + lay.att_bv, dfeatures[p].data());
  }

  for (std::size_t p = 0; p < n_polys; ++p) {
    backward_polyline(lay, params, scene.polylines[p].data(),
                      scene.vector_counts[p], trace.polys[p], dfeatures[p],
                      grad);
  }
}

// Loss and gradient of one scene; gradient accumulates into grad.
template <typename T>
T scene_loss_and_gradient(const ParamLayout& lay, const T* params,
                          const CompiledScene& scene, T* grad) {
  ForwardTrace<T> trace;
  forward_trace(lay, params, scene, trace);
  backward_trace(lay, params, scene, trace, grad);
  return output_loss(trace, scene);
}

template <typename T>
T scene_loss(const ParamLayout& lay, const T* params,
             const CompiledScene& scene) {
  ForwardTrace<T> trace;
  forward_trace(lay, params, scene, trace);
  return output_loss(trace, scene);
}

}  // namespace svt::engine
