#include "trn/autograd.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "trn/errors.hpp"

namespace trn::ag {

namespace {

Value make_node(Tensor val, std::vector<Value> parents, std::function<void(Node&)> back) {
  auto n = std::make_shared<Node>();
  n->val = std::move(val);
  bool rg = false;
  for (const auto& p : parents) rg = rg || p->requires_grad;
  n->requires_grad = rg;
  if (rg) {
    n->parents = std::move(parents);
    n->back = std::move(back);
  }
  return n;
}

std::vector<int64_t> strides_of(const Shape& s) {
  std::vector<int64_t> st(s.size());
  int64_t acc = 1;
  for (int i = static_cast<int>(s.size()) - 1; i >= 0; --i) {
    st[static_cast<size_t>(i)] = acc;
    acc *= s[static_cast<size_t>(i)];
  }
  return st;
}

}  // namespace

Value constant(Tensor t) {
  auto n = std::make_shared<Node>();
  n->val = std::move(t);
  n->requires_grad = false;
  return n;
}

Value parameter(Tensor t) {
  auto n = std::make_shared<Node>();
  n->val = std::move(t);
  n->requires_grad = true;
  return n;
}

Value add(const Value& a, const Value& b) {
  assert(a->val.same_shape(b->val));
  Tensor out = a->val;
  for (int64_t i = 0; i < out.numel(); ++i) out.v[i] += b->val.v[i];
  return make_node(std::move(out), {a, b}, [a, b](Node& n) {
    if (a->requires_grad) {
      auto& ga = a->g();
      for (int64_t i = 0; i < n.grad.numel(); ++i) ga.v[i] += n.grad.v[i];
    }
    if (b->requires_grad) {
      auto& gb = b->g();
      for (int64_t i = 0; i < n.grad.numel(); ++i) gb.v[i] += n.grad.v[i];
    }
  });
}

Value sub(const Value& a, const Value& b) {
  assert(a->val.same_shape(b->val));
  Tensor out = a->val;
  for (int64_t i = 0; i < out.numel(); ++i) out.v[i] -= b->val.v[i];
  return make_node(std::move(out), {a, b}, [a, b](Node& n) {
    if (a->requires_grad) {
      auto& ga = a->g();
      for (int64_t i = 0; i < n.grad.numel(); ++i) ga.v[i] += n.grad.v[i];
    }
    if (b->requires_grad) {
      auto& gb = b->g();
      for (int64_t i = 0; i < n.grad.numel(); ++i) gb.v[i] -= n.grad.v[i];
    }
  });
}

Value mul(const Value& a, const Value& b) {
  assert(a->val.same_shape(b->val));
  Tensor out = a->val;
  for (int64_t i = 0; i < out.numel(); ++i) out.v[i] *= b->val.v[i];
  return make_node(std::move(out), {a, b}, [a, b](Node& n) {
    if (a->requires_grad) {
      auto& ga = a->g();
      for (int64_t i = 0; i < n.grad.numel(); ++i) ga.v[i] += n.grad.v[i] * b->val.v[i];
    }
    if (b->requires_grad) {
      auto& gb = b->g();
      for (int64_t i = 0; i < n.grad.numel(); ++i) gb.v[i] += n.grad.v[i] * a->val.v[i];
    }
  });
}

Value scale(const Value& a, double s) {
  Tensor out = a->val;
  for (auto& x : out.v) x *= s;
  return make_node(std::move(out), {a}, [a, s](Node& n) {
    auto& ga = a->g();
    for (int64_t i = 0; i < n.grad.numel(); ++i) ga.v[i] += s * n.grad.v[i];
  });
}

Value add_rows(const Value& x, const Value& b) {
  const int d = x->val.shape.back();
  assert(b->val.rank() == 1 && b->val.dim(0) == d);
  Tensor out = x->val;
  const int64_t rows = out.numel() / d;
  for (int64_t r = 0; r < rows; ++r)
    for (int j = 0; j < d; ++j) out.v[r * d + j] += b->val.v[j];
  return make_node(std::move(out), {x, b}, [x, b, d, rows](Node& n) {
    if (x->requires_grad) {
      auto& gx = x->g();
      for (int64_t i = 0; i < n.grad.numel(); ++i) gx.v[i] += n.grad.v[i];
    }
    if (b->requires_grad) {
      auto& gb = b->g();
      for (int64_t r = 0; r < rows; ++r)
        for (int j = 0; j < d; ++j) gb.v[j] += n.grad.v[r * d + j];
    }
  });
}

Value reshape(const Value& x, Shape s) {
  assert(Tensor::count(s) == x->val.numel());
  Tensor out(std::move(s), x->val.v);
  return make_node(std::move(out), {x}, [x](Node& n) {
    auto& gx = x->g();
    for (int64_t i = 0; i < n.grad.numel(); ++i) gx.v[i] += n.grad.v[i];
  });
}

Value permute(const Value& x, std::vector<int> axes) {
  const Shape& in = x->val.shape;
  assert(axes.size() == in.size());
  Shape out_shape(in.size());
  for (size_t i = 0; i < axes.size(); ++i) out_shape[i] = in[static_cast<size_t>(axes[i])];
  Tensor out(out_shape);
  const auto ist = strides_of(in);
  const auto ost = strides_of(out_shape);
  const int rank = static_cast<int>(in.size());
  const int64_t total = out.numel();
  std::vector<int> idx(in.size(), 0);
  // Walk output positions in order; recover source offset through the axes map.
  for (int64_t o = 0; o < total; ++o) {
    int64_t rem = o;
    int64_t src = 0;
    for (int i = 0; i < rank; ++i) {
      const int64_t c = rem / ost[static_cast<size_t>(i)];
      rem %= ost[static_cast<size_t>(i)];
      src += c * ist[static_cast<size_t>(axes[static_cast<size_t>(i)])];
    }
    out.v[o] = x->val.v[src];
  }
  return make_node(std::move(out), {x}, [x, axes, ist, ost, rank](Node& n) {
    auto& gx = x->g();
    const int64_t total = n.grad.numel();
    for (int64_t o = 0; o < total; ++o) {
      int64_t rem = o;
      int64_t src = 0;
      for (int i = 0; i < rank; ++i) {
        const int64_t c = rem / ost[static_cast<size_t>(i)];
        rem %= ost[static_cast<size_t>(i)];
        src += c * ist[static_cast<size_t>(axes[static_cast<size_t>(i)])];
      }
      gx.v[src] += n.grad.v[o];
    }
  });
}

Value gather_rows(const Value& x, std::vector<int> idx) {
  assert(x->val.rank() == 2);
  const int d = x->val.dim(1);
  Tensor out({static_cast<int>(idx.size()), d});
  for (size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= x->val.dim(0))
      throw Error("gather_rows: index " + std::to_string(idx[k]) + " out of range");
    std::copy_n(&x->val.v[static_cast<size_t>(idx[k]) * d], d, &out.v[k * static_cast<size_t>(d)]);
  }
  return make_node(std::move(out), {x}, [x, idx, d](Node& n) {
    auto& gx = x->g();
    for (size_t k = 0; k < idx.size(); ++k)
      for (int j = 0; j < d; ++j)
        gx.v[static_cast<size_t>(idx[k]) * d + j] += n.grad.v[k * static_cast<size_t>(d) + j];
  });
}

Value row_scale(const Value& x, const Value& s) {
  assert(x->val.rank() == 2);
  const int nrows = x->val.dim(0), d = x->val.dim(1);
  assert(s->val.numel() == nrows);
  Tensor out = x->val;
  for (int i = 0; i < nrows; ++i)
    for (int j = 0; j < d; ++j) out.at2(i, j) *= s->val.v[static_cast<size_t>(i)];
  return make_node(std::move(out), {x, s}, [x, s, nrows, d](Node& n) {
    if (x->requires_grad) {
      auto& gx = x->g();
      for (int i = 0; i < nrows; ++i)
        for (int j = 0; j < d; ++j) gx.at2(i, j) += n.grad.at2(i, j) * s->val.v[static_cast<size_t>(i)];
    }
    if (s->requires_grad) {
      auto& gs = s->g();
      for (int i = 0; i < nrows; ++i) {
        double acc = 0.0;
        for (int j = 0; j < d; ++j) acc += n.grad.at2(i, j) * x->val.at2(i, j);
        gs.v[static_cast<size_t>(i)] += acc;
      }
    }
  });
}

Value stack0(const std::vector<Value>& xs) {
  assert(!xs.empty());
  const Shape inner = xs[0]->val.shape;
  Shape out_shape;
  out_shape.push_back(static_cast<int>(xs.size()));
  out_shape.insert(out_shape.end(), inner.begin(), inner.end());
  Tensor out(out_shape);
  const int64_t block = xs[0]->val.numel();
  for (size_t k = 0; k < xs.size(); ++k) {
    assert(xs[k]->val.shape == inner);
    std::copy_n(xs[k]->val.v.begin(), block, out.v.begin() + static_cast<int64_t>(k) * block);
  }
  return make_node(std::move(out), xs, [xs, block](Node& n) {
    for (size_t k = 0; k < xs.size(); ++k) {
      if (!xs[k]->requires_grad) continue;
      auto& gk = xs[k]->g();
      const int64_t off = static_cast<int64_t>(k) * block;
      for (int64_t i = 0; i < block; ++i) gk.v[i] += n.grad.v[off + i];
    }
  });
}

Value slice0(const Value& x, int i) {
  assert(x->val.rank() >= 1 && i >= 0 && i < x->val.dim(0));
  Shape inner(x->val.shape.begin() + 1, x->val.shape.end());
  if (inner.empty()) inner.push_back(1);
  const int64_t block = Tensor::count(inner);
  Tensor out(inner);
  std::copy_n(x->val.v.begin() + static_cast<int64_t>(i) * block, block, out.v.begin());
  return make_node(std::move(out), {x}, [x, i, block](Node& n) {
    auto& gx = x->g();
    const int64_t off = static_cast<int64_t>(i) * block;
    for (int64_t k = 0; k < block; ++k) gx.v[off + k] += n.grad.v[k];
  });
}

Value matmul(const Value& a, const Value& b) {
  assert(a->val.rank() == 2 && b->val.rank() == 2 && a->val.dim(1) == b->val.dim(0));
  const int m = a->val.dim(0), k = a->val.dim(1), n2 = b->val.dim(1);
  Tensor out({m, n2});
  for (int i = 0; i < m; ++i)
    for (int kk = 0; kk < k; ++kk) {
      const double aik = a->val.at2(i, kk);
      if (aik == 0.0) continue;
      for (int j = 0; j < n2; ++j) out.at2(i, j) += aik * b->val.at2(kk, j);
    }
  return make_node(std::move(out), {a, b}, [a, b, m, k, n2](Node& n) {
    if (a->requires_grad) {
      auto& ga = a->g();
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n2; ++j) {
          const double gij = n.grad.at2(i, j);
          if (gij == 0.0) continue;
          for (int kk = 0; kk < k; ++kk) ga.at2(i, kk) += gij * b->val.at2(kk, j);
        }
    }
    if (b->requires_grad) {
      auto& gb = b->g();
      for (int i = 0; i < m; ++i)
        for (int kk = 0; kk < k; ++kk) {
          const double aik = a->val.at2(i, kk);
          if (aik == 0.0) continue;
          for (int j = 0; j < n2; ++j) gb.at2(kk, j) += aik * n.grad.at2(i, j);
        }
    }
  });
}

Value affine(const Value& x, const Value& w, const Value& b) {
  assert(x->val.rank() == 2 && w->val.rank() == 2 && x->val.dim(1) == w->val.dim(1));
  const int m = x->val.dim(0), k = x->val.dim(1), n2 = w->val.dim(0);
  Tensor out({m, n2});
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n2; ++j) {
      double acc = 0.0;
      const double* xr = &x->val.v[static_cast<size_t>(i) * k];
      const double* wr = &w->val.v[static_cast<size_t>(j) * k];
      for (int kk = 0; kk < k; ++kk) acc += xr[kk] * wr[kk];
      out.at2(i, j) = acc + (b ? b->val.v[static_cast<size_t>(j)] : 0.0);
    }
  std::vector<Value> parents{x, w};
  if (b) parents.push_back(b);
  return make_node(std::move(out), std::move(parents), [x, w, b, m, k, n2](Node& n) {
    if (x->requires_grad) {
      auto& gx = x->g();
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n2; ++j) {
          const double gij = n.grad.at2(i, j);
          if (gij == 0.0) continue;
          const double* wr = &w->val.v[static_cast<size_t>(j) * k];
          double* gxr = &gx.v[static_cast<size_t>(i) * k];
          for (int kk = 0; kk < k; ++kk) gxr[kk] += gij * wr[kk];
        }
    }
    if (w->requires_grad) {
      auto& gw = w->g();
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n2; ++j) {
          const double gij = n.grad.at2(i, j);
          if (gij == 0.0) continue;
          const double* xr = &x->val.v[static_cast<size_t>(i) * k];
          double* gwr = &gw.v[static_cast<size_t>(j) * k];
          for (int kk = 0; kk < k; ++kk) gwr[kk] += gij * xr[kk];
        }
    }
    if (b && b->requires_grad) {
      auto& gb = b->g();
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n2; ++j) gb.v[static_cast<size_t>(j)] += n.grad.at2(i, j);
    }
  });
}

Value bmm(const Value& a, const Value& b) {
  assert(a->val.rank() == 3 && b->val.rank() == 3);
  assert(a->val.dim(0) == b->val.dim(0) && a->val.dim(2) == b->val.dim(1));
  const int B = a->val.dim(0), m = a->val.dim(1), k = a->val.dim(2), n2 = b->val.dim(2);
  Tensor out({B, m, n2});
  for (int bt = 0; bt < B; ++bt)
    for (int i = 0; i < m; ++i)
      for (int kk = 0; kk < k; ++kk) {
        const double aik = a->val.at3(bt, i, kk);
        if (aik == 0.0) continue;
        for (int j = 0; j < n2; ++j) out.at3(bt, i, j) += aik * b->val.at3(bt, kk, j);
      }
  return make_node(std::move(out), {a, b}, [a, b, B, m, k, n2](Node& n) {
    if (a->requires_grad) {
      auto& ga = a->g();
      for (int bt = 0; bt < B; ++bt)
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < n2; ++j) {
            const double gij = n.grad.at3(bt, i, j);
            if (gij == 0.0) continue;
            for (int kk = 0; kk < k; ++kk) ga.at3(bt, i, kk) += gij * b->val.at3(bt, kk, j);
          }
    }
    if (b->requires_grad) {
      auto& gb = b->g();
      for (int bt = 0; bt < B; ++bt)
        for (int i = 0; i < m; ++i)
          for (int kk = 0; kk < k; ++kk) {
            const double aik = a->val.at3(bt, i, kk);
            if (aik == 0.0) continue;
            for (int j = 0; j < n2; ++j) gb.at3(bt, kk, j) += aik * n.grad.at3(bt, i, j);
          }
    }
  });
}

Value sigmoid(const Value& x) {
  Tensor out = x->val;
  for (auto& v : out.v) v = 1.0 / (1.0 + std::exp(-v));
  auto y = make_node(std::move(out), {x}, nullptr);
  if (y->requires_grad) {
    y->back = [x](Node& n) {
      auto& gx = x->g();
      for (int64_t i = 0; i < n.grad.numel(); ++i) {
        const double yi = n.val.v[i];
        gx.v[i] += n.grad.v[i] * yi * (1.0 - yi);
      }
    };
  }
  return y;
}

Value relu(const Value& x) {
  Tensor out = x->val;
  for (auto& v : out.v) v = v > 0.0 ? v : 0.0;
  return make_node(std::move(out), {x}, [x](Node& n) {
    auto& gx = x->g();
    for (int64_t i = 0; i < n.grad.numel(); ++i)
      if (x->val.v[i] > 0.0) gx.v[i] += n.grad.v[i];
  });
}

Value softmax_masked(const Value& x, const Tensor& keep) {
  assert(keep.same_shape(x->val));
  const int d = x->val.shape.back();
  const int64_t rows = x->val.numel() / d;
  Tensor out(x->val.shape);
  for (int64_t r = 0; r < rows; ++r) {
    const double* xr = &x->val.v[r * d];
    const double* kr = &keep.v[r * d];
    double mx = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < d; ++j)
      if (kr[j] != 0.0 && xr[j] > mx) mx = xr[j];
    double s = 0.0;
    double* yr = &out.v[r * d];
    if (std::isinf(mx)) {  // fully masked row
      for (int j = 0; j < d; ++j) yr[j] = 0.0;
      continue;
    }
    for (int j = 0; j < d; ++j) {
      yr[j] = kr[j] != 0.0 ? std::exp(xr[j] - mx) : 0.0;
      s += yr[j];
    }
    for (int j = 0; j < d; ++j) yr[j] /= s;
  }
  auto y = make_node(std::move(out), {x}, nullptr);
  if (y->requires_grad) {
    y->back = [x, d, rows](Node& n) {
      auto& gx = x->g();
      for (int64_t r = 0; r < rows; ++r) {
        const double* yr = &n.val.v[r * d];
        const double* gr = &n.grad.v[r * d];
        double dot = 0.0;
        for (int j = 0; j < d; ++j) dot += gr[j] * yr[j];
        for (int j = 0; j < d; ++j) gx.v[r * d + j] += yr[j] * (gr[j] - dot);
      }
    };
  }
  return y;
}

Value layer_norm(const Value& x, const Value& gain, const Value& bias, double eps) {
  const int d = x->val.shape.back();
  assert(gain->val.numel() == d && bias->val.numel() == d);
  const int64_t rows = x->val.numel() / d;
  Tensor out(x->val.shape);
  Tensor xhat(x->val.shape);
  std::vector<double> inv_std(static_cast<size_t>(rows));
  for (int64_t r = 0; r < rows; ++r) {
    const double* xr = &x->val.v[r * d];
    double mu = 0.0;
    for (int j = 0; j < d; ++j) mu += xr[j];
    mu /= d;
    double var = 0.0;
    for (int j = 0; j < d; ++j) var += (xr[j] - mu) * (xr[j] - mu);
    var /= d;
    const double is = 1.0 / std::sqrt(var + eps);
    inv_std[static_cast<size_t>(r)] = is;
    for (int j = 0; j < d; ++j) {
      const double h = (xr[j] - mu) * is;
      xhat.v[r * d + j] = h;
      out.v[r * d + j] = h * gain->val.v[static_cast<size_t>(j)] + bias->val.v[static_cast<size_t>(j)];
    }
  }
  return make_node(std::move(out), {x, gain, bias},
                   [x, gain, bias, d, rows, xhat = std::move(xhat), inv_std = std::move(inv_std)](Node& n) {
    if (gain->requires_grad) {
      auto& gg = gain->g();
      for (int64_t r = 0; r < rows; ++r)
        for (int j = 0; j < d; ++j) gg.v[static_cast<size_t>(j)] += n.grad.v[r * d + j] * xhat.v[r * d + j];
    }
    if (bias->requires_grad) {
      auto& gb = bias->g();
      for (int64_t r = 0; r < rows; ++r)
        for (int j = 0; j < d; ++j) gb.v[static_cast<size_t>(j)] += n.grad.v[r * d + j];
    }
    if (x->requires_grad) {
      auto& gx = x->g();
      for (int64_t r = 0; r < rows; ++r) {
        double mean_dxhat = 0.0, mean_dxhat_xhat = 0.0;
        for (int j = 0; j < d; ++j) {
          const double dxh = n.grad.v[r * d + j] * gain->val.v[static_cast<size_t>(j)];
          mean_dxhat += dxh;
          mean_dxhat_xhat += dxh * xhat.v[r * d + j];
        }
        mean_dxhat /= d;
        mean_dxhat_xhat /= d;
        const double is = inv_std[static_cast<size_t>(r)];
        for (int j = 0; j < d; ++j) {
          const double dxh = n.grad.v[r * d + j] * gain->val.v[static_cast<size_t>(j)];
          gx.v[r * d + j] += is * (dxh - mean_dxhat - xhat.v[r * d + j] * mean_dxhat_xhat);
        }
      }
    }
  });
}

Value dropout(const Value& x, double p, std::mt19937_64& rng, bool training) {
  if (!training || p <= 0.0) return x;
  const double keep_p = 1.0 - p;
  Tensor mask(x->val.shape);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (auto& m : mask.v) m = uni(rng) < keep_p ? 1.0 / keep_p : 0.0;
  Tensor out = x->val;
  for (int64_t i = 0; i < out.numel(); ++i) out.v[i] *= mask.v[i];
  return make_node(std::move(out), {x}, [x, mask = std::move(mask)](Node& n) {
    auto& gx = x->g();
    for (int64_t i = 0; i < n.grad.numel(); ++i) gx.v[i] += n.grad.v[i] * mask.v[i];
  });
}

Value sum_all(const Value& x) {
  double s = 0.0;
  for (double v : x->val.v) s += v;
  return make_node(Tensor::scalar(s), {x}, [x](Node& n) {
    auto& gx = x->g();
    for (auto& g : gx.v) g += n.grad.v[0];
  });
}

Value mean_all(const Value& x) {
  const double inv = 1.0 / static_cast<double>(x->val.numel());
  double s = 0.0;
  for (double v : x->val.v) s += v;
  return make_node(Tensor::scalar(s * inv), {x}, [x, inv](Node& n) {
    auto& gx = x->g();
    for (auto& g : gx.v) g += n.grad.v[0] * inv;
  });
}

Value cross_entropy(const Value& logits, const std::vector<int>& labels) {
  assert(logits->val.rank() == 2);
  const int n = logits->val.dim(0), C = logits->val.dim(1);
  assert(static_cast<int>(labels.size()) == n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double* row = &logits->val.v[static_cast<size_t>(i) * C];
    double mx = row[0];
    for (int c = 1; c < C; ++c) mx = std::max(mx, row[c]);
    double se = 0.0;
    for (int c = 0; c < C; ++c) se += std::exp(row[c] - mx);
    assert(labels[static_cast<size_t>(i)] >= 0 && labels[static_cast<size_t>(i)] < C);
    total += mx + std::log(se) - row[labels[static_cast<size_t>(i)]];
  }
  return make_node(Tensor::scalar(total / n), {logits}, [logits, labels, n, C](Node& nd) {
    auto& gl = logits->g();
    const double gscale = nd.grad.v[0] / n;
    for (int i = 0; i < n; ++i) {
      const double* row = &logits->val.v[static_cast<size_t>(i) * C];
      double mx = row[0];
      for (int c = 1; c < C; ++c) mx = std::max(mx, row[c]);
      double se = 0.0;
      for (int c = 0; c < C; ++c) se += std::exp(row[c] - mx);
      for (int c = 0; c < C; ++c) {
        const double p = std::exp(row[c] - mx) / se;
        gl.v[static_cast<size_t>(i) * C + c] +=
            gscale * (p - (c == labels[static_cast<size_t>(i)] ? 1.0 : 0.0));
      }
    }
  });
}

void backward(const Value& root) {
  if (!root->requires_grad) return;
  if (root->val.numel() != 1) throw Error("backward: root must be a scalar");
  // Iterative post-order over the requires_grad subgraph.
  std::vector<Node*> order;
  std::unordered_set<Node*> seen;
  std::vector<std::pair<Node*, size_t>> stack;
  stack.emplace_back(root.get(), 0);
  seen.insert(root.get());
  while (!stack.empty()) {
    auto& [node, ci] = stack.back();
    if (ci < node->parents.size()) {
      Node* p = node->parents[ci].get();
      ++ci;
      if (p->requires_grad && !seen.count(p)) {
        seen.insert(p);
        stack.emplace_back(p, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  root->g().v[0] = 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (n->back && n->grad_ready) n->back(*n);
  }
}

Value ParamStore::create(const std::string& name, Tensor init) {
  auto v = parameter(std::move(init));
  add(name, v);
  return v;
}

void ParamStore::add(const std::string& name, const Value& v) {
  for (const auto& [n, _] : items_)
    if (n == name) throw Error("ParamStore: duplicate parameter name " + name);
  items_.emplace_back(name, v);
}

Value ParamStore::find(const std::string& name) const {
  for (const auto& [n, v] : items_)
    if (n == name) return v;
  return nullptr;
}

int64_t ParamStore::total_size() const {
  int64_t s = 0;
  for (const auto& [_, v] : items_) s += v->val.numel();
  return s;
}

void ParamStore::zero_grad() {
  for (auto& [_, v] : items_)
    if (v->grad_ready) std::fill(v->grad.v.begin(), v->grad.v.end(), 0.0);
}

}  // namespace trn::ag
